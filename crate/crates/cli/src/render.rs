//! Plain-text tables for the human-readable output.

use std::fmt::Write;

use crate::report::*;

pub fn render(doc: &ReportDocument) -> String {
    let mut out = String::new();
    if let Some(p) = &doc.problem {
        let _ = writeln!(
            out,
            "problem {}: n = {}, r = {}, det V = ({}), Calabi-Yau: {}",
            p.name,
            p.n,
            p.r,
            p.det_v.join(","),
            p.calabi_yau
        );
    }
    match &doc.payload {
        Payload::Analyze(a) => analyze(&mut out, a),
        Payload::Decompose(d) => decompose(&mut out, d),
        Payload::Jh(j) => jh(&mut out, j),
        Payload::JhBatch(b) => jh_batch(&mut out, b),
        Payload::Conjecture(c) => conjecture(&mut out, c),
        Payload::Horn(h) => horn(&mut out, h),
    }
    out
}

fn tuple(v: &[String]) -> String {
    format!("({})", v.join(","))
}

fn rows(m: &[Vec<String>]) -> String {
    m.iter().map(|r| tuple(r)).collect::<Vec<_>>().join(" ")
}

fn analyze(out: &mut String, a: &AnalyzePayload) {
    let _ = writeln!(out, "rank of N: {}, weight lattice index: {}", a.rank_n, a.lattice_index);
    let _ = writeln!(out, "rays: {}", rows(&a.rays));
    if let Some(h) = &a.height {
        let _ = writeln!(out, "height: {}", tuple(h));
    }
    let _ = writeln!(out, "rays distinct: {}", a.rays_distinct);

    let _ = writeln!(out, "\nhyperplanes");
    for h in &a.hyperplanes {
        let w: Vec<String> = h.weights.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  {:>3}  normal {:<12} weights {{{}}}", h.id, tuple(&h.normal), w.join(","));
    }

    let _ = writeln!(
        out,
        "\nchambers: {} ({} non-empty, {} phases)",
        a.chambers.len(),
        a.nonempty_chambers,
        a.phases
    );
    let _ = writeln!(out, "  {:>3}  {:<8} {:<14} {:<9} {:<8} phase", "id", "signs", "interior", "nonempty", "minimal");
    for c in &a.chambers {
        let phase = c.phase.map_or("-".to_string(), |p| p.to_string());
        let _ = writeln!(
            out,
            "  {:>3}  {:<8} {:<14} {:<9} {:<8} {}",
            c.id,
            c.signs,
            tuple(&c.interior),
            c.nonempty,
            c.minimal,
            phase
        );
    }

    let _ = writeln!(out, "\nwalls: {}", a.walls.len());
    let _ = writeln!(out, "  {:>3}  {:>5} {:>5}  {:<10} {:>5}  {:<14} genuine", "id", "plus", "minus", "lambda", "kappa", "point");
    for w in &a.walls {
        let _ = writeln!(
            out,
            "  {:>3}  {:>5} {:>5}  {:<10} {:>5}  {:<14} {}",
            w.id,
            w.plus_chamber,
            w.minus_chamber,
            tuple(&w.lambda),
            w.kappa,
            tuple(&w.interior_point),
            w.genuine
        );
    }

    let _ = writeln!(out, "\nrelevant subspaces: {}", a.relevant_subspaces.len());
    for h in &a.relevant_subspaces {
        let _ = writeln!(out, "  {:<20} rank {}", h.key, h.rank);
    }
    if let Some(faces) = &a.minimal_faces {
        let _ = writeln!(out, "\nminimal faces: {}", faces.len());
        for f in faces {
            let idx: Vec<String> = f.indices.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "  {{{}}}  subspace {}  Coulomb rank {}",
                idx.join(","),
                f.subspace,
                f.coulomb_rank
            );
        }
    }
}

fn decompose(out: &mut String, d: &DecomposePayload) {
    let path: Vec<String> = d.path.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "chamber {} at {}", d.chamber, tuple(&d.interior));
    let _ = writeln!(out, "path: {}", path.join(" -> "));
    for c in &d.crossings {
        let higgs: Vec<String> = c.higgs.iter().map(|e| format!("{}: {}", e.subspace, e.multiplicity)).collect();
        let _ = writeln!(
            out,
            "  wall {:>3}: {} -> {}  kappa {}  Higgs phase {{{}}}",
            c.wall,
            c.from,
            c.to,
            c.kappa,
            higgs.join(", ")
        );
    }
    let _ = writeln!(out, "\n  {:<20} {:>4} {:>12}  Higgs weights", "factor", "rank", "multiplicity");
    for f in &d.factors {
        let _ = writeln!(
            out,
            "  {:<20} {:>4} {:>12}  {}",
            f.subspace,
            f.rank,
            f.multiplicity,
            rows(&f.higgs_weights)
        );
    }
    let _ = writeln!(out, "total: {}", d.total);
}

fn map_text(m: &[MapEntry]) -> String {
    let parts: Vec<String> = m.iter().map(|e| format!("{}: {}", e.subspace, e.multiplicity)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn jh(out: &mut String, j: &JhPayload) {
    let _ = writeln!(out, "chamber {}: {} monotone paths", j.chamber, j.path_count);
    for p in &j.paths {
        let c: Vec<String> = p.chambers.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  {:<24} {}", c.join(" -> "), map_text(&p.map));
    }
    if j.distinct.len() > 1 {
        let _ = writeln!(out, "distinct decompositions:");
        for m in &j.distinct {
            let _ = writeln!(out, "  {}", map_text(m));
        }
    }
    let _ = writeln!(out, "{}", j.verdict);
}

fn jh_batch(out: &mut String, b: &JhBatchPayload) {
    let _ = writeln!(
        out,
        "{} random problems, {} chambers: {} PASS, {} FAIL, {} INCONCLUSIVE",
        b.instances, b.chambers_checked, b.pass, b.fail, b.inconclusive
    );
    for f in &b.failures {
        let _ = writeln!(out, "  {} chamber {}: {}", rows(&f.weights), f.chamber, f.verdict);
    }
    let _ = writeln!(out, "{}", b.verdict);
}

fn conjecture(out: &mut String, c: &ConjecturePayload) {
    let _ = writeln!(out, "  {:>4}  {:<16} {:<20} {:>7} {:>4} {:>4}  verdict", "wall", "face", "subspace", "Coulomb", "n", "m");
    for r in &c.rows {
        let idx: Vec<String> = r.face_indices.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "  {:>4}  {:<16} {:<20} {:>7} {:>4} {:>4}  {}",
            r.wall,
            format!("{{{}}}", idx.join(",")),
            r.subspace,
            r.coulomb_rank,
            r.n,
            r.m.as_deref().unwrap_or("-"),
            r.verdict
        );
    }
    let _ = writeln!(out, "{}", c.verdict);
}

fn horn(out: &mut String, h: &HornPayload) {
    let _ = writeln!(out, "lambda = {}", tuple(&h.lambda));
    let _ = writeln!(out, "Horn point = {}", tuple(&h.point));
    if let Some(p) = &h.rank1_point {
        let _ = writeln!(out, "rank-one discriminant point = {p}");
    }
}
