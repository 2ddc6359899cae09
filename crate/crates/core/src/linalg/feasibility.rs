//! Homogeneous strict/non-strict feasibility by Fourier–Motzkin elimination.
//!
//! Equalities are removed first by restricting to an integer basis of their
//! solution space, then the inequalities are projected one variable at a time.
//! The intermediate systems are kept so that a witness can be rebuilt by back
//! substitution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{dot_rat, kernel_basis, primitive_direction, IntMatrix, RatVector};

/// A homogeneous system of linear constraints in `dim` unknowns.
///
/// Strict rows mean `a·x > 0`, non-strict rows `a·x ≥ 0`, equality rows
/// `a·x = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    dim: usize,
    strict: Vec<Vec<BigRational>>,
    nonstrict: Vec<Vec<BigRational>>,
    equality: Vec<Vec<BigRational>>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        LinearSystem {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strict(&mut self, row: Vec<BigRational>) -> &mut Self {
        assert_eq!(row.len(), self.dim);
        self.strict.push(row);
        self
    }

    pub fn nonstrict(&mut self, row: Vec<BigRational>) -> &mut Self {
        assert_eq!(row.len(), self.dim);
        self.nonstrict.push(row);
        self
    }

    pub fn equality(&mut self, row: Vec<BigRational>) -> &mut Self {
        assert_eq!(row.len(), self.dim);
        self.equality.push(row);
        self
    }

    pub fn strict_int(&mut self, row: &[BigInt]) -> &mut Self {
        self.strict(to_rat(row))
    }

    pub fn nonstrict_int(&mut self, row: &[BigInt]) -> &mut Self {
        self.nonstrict(to_rat(row))
    }

    pub fn equality_int(&mut self, row: &[BigInt]) -> &mut Self {
        self.equality(to_rat(row))
    }

    /// Whether `x` satisfies every row exactly.
    pub fn is_satisfied_by(&self, x: &RatVector) -> bool {
        self.strict.iter().all(|r| dot_rat(r, &x.0).is_positive())
            && self.nonstrict.iter().all(|r| !dot_rat(r, &x.0).is_negative())
            && self.equality.iter().all(|r| dot_rat(r, &x.0).is_zero())
    }
}

fn to_rat(row: &[BigInt]) -> Vec<BigRational> {
    row.iter().cloned().map(BigRational::from_integer).collect()
}

/// Returns a witness satisfying all rows (strict rows strictly), or `None`.
///
/// The witness is normalized to a primitive integer vector, so equal inputs
/// always give equal outputs.
pub fn strict_feasible(sys: &LinearSystem) -> Option<RatVector> {
    let d = sys.dim;

    // Parametrize the equality solution space as x = y · basis.
    let basis = if sys.equality.is_empty() {
        IntMatrix::identity(d)
    } else {
        let eq = IntMatrix::from_rows(d, sys.equality.iter().map(|r| primitive_direction(r)));
        kernel_basis(&eq)
    };
    let k = basis.rows();
    let project = |row: &Vec<BigRational>| -> Vec<BigInt> {
        let coeffs: Vec<BigRational> = (0..k)
            .map(|i| {
                basis
                    .row(i)
                    .iter()
                    .zip(row)
                    .map(|(b, a)| a * b)
                    .sum::<BigRational>()
            })
            .collect();
        primitive_direction(&coeffs)
    };

    let mut rows = Rows::default();
    for r in &sys.strict {
        if !rows.insert(project(r), true) {
            return None;
        }
    }
    for r in &sys.nonstrict {
        rows.insert(project(r), false);
    }

    let y = fourier_motzkin(rows, k)?;
    let x: Vec<BigRational> = (0..d)
        .map(|j| (0..k).map(|i| &y[i] * &basis[(i, j)]).sum())
        .collect();
    let w = RatVector::from_big(&primitive_direction(&x));
    debug_assert!(sys.is_satisfied_by(&w));
    Some(w)
}

/// Deduplicated constraint rows, each a primitive integer vector with a
/// strictness flag. A strict row absorbs an equal non-strict one.
#[derive(Clone, Default)]
struct Rows(BTreeMap<Vec<BigInt>, bool>);

impl Rows {
    /// Returns `false` if the row is the contradiction `0 > 0`.
    fn insert(&mut self, row: Vec<BigInt>, strict: bool) -> bool {
        if row.iter().all(Zero::is_zero) {
            return !strict;
        }
        let e = self.0.entry(row).or_insert(strict);
        *e |= strict;
        true
    }
}

fn fourier_motzkin(rows: Rows, dim: usize) -> Option<Vec<BigRational>> {
    let mut stages: Vec<(usize, Rows)> = Vec::with_capacity(dim);
    let mut current = rows;
    let mut remaining: Vec<usize> = (0..dim).collect();

    while !remaining.is_empty() {
        // pick the variable whose elimination creates the fewest rows
        let (pos, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let p = current.0.keys().filter(|r| r[v].is_positive()).count();
                let n = current.0.keys().filter(|r| r[v].is_negative()).count();
                (p * n) as isize - (p + n) as isize
            })
            .unwrap();
        remaining.remove(pos);

        let mut next = Rows::default();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (r, &s) in &current.0 {
            match r[var].sign() {
                num_bigint::Sign::Plus => lower.push((r, s)),
                num_bigint::Sign::Minus => upper.push((r, s)),
                num_bigint::Sign::NoSign => {
                    next.insert(r.clone(), s);
                }
            }
        }
        for (l, ls) in &lower {
            for (u, us) in &upper {
                // positive combination cancelling `var`
                let a = -&u[var];
                let b = l[var].clone();
                let g = a.gcd(&b);
                let (a, b) = (&a / &g, &b / &g);
                let combo: Vec<BigInt> = l.iter().zip(u.iter()).map(|(x, y)| &a * x + &b * y).collect();
                let combo = super::primitive(&combo);
                if !next.insert(combo, *ls || *us) {
                    return None;
                }
            }
        }
        stages.push((var, current));
        current = next;
    }
    // Only constant rows remain; `insert` already rejected `0 > 0`.

    let mut x = vec![BigRational::zero(); dim];
    for (var, rows) in stages.iter().rev() {
        x[*var] = pick_value(rows, *var, &x);
    }
    Some(x)
}

/// Chooses a value for `var` given the values already fixed in `x`.
fn pick_value(rows: &Rows, var: usize, x: &[BigRational]) -> BigRational {
    let mut lo: Option<(BigRational, bool)> = None;
    let mut hi: Option<(BigRational, bool)> = None;
    for (r, &strict) in &rows.0 {
        let c = &r[var];
        if c.is_zero() {
            continue;
        }
        let rest: BigRational = r
            .iter()
            .enumerate()
            .filter(|&(j, a)| j != var && !a.is_zero())
            .map(|(j, a)| &x[j] * a)
            .sum();
        let bound = -rest / BigRational::from_integer(c.clone());
        if c.is_positive() {
            let tighter = match &lo {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && strict && !s),
            };
            if tighter {
                lo = Some((bound, strict));
            }
        } else {
            let tighter = match &hi {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && strict && !s),
            };
            if tighter {
                hi = Some((bound, strict));
            }
        }
    }
    let zero = BigRational::zero();
    let admits = |v: &BigRational| {
        lo.as_ref().is_none_or(|(b, s)| if *s { v > b } else { v >= b })
            && hi.as_ref().is_none_or(|(b, s)| if *s { v < b } else { v <= b })
    };
    if admits(&zero) {
        return zero;
    }
    match (&lo, &hi) {
        (Some((l, _)), None) => l.floor() + BigRational::one(),
        (None, Some((h, _))) => h.ceil() - BigRational::one(),
        (Some((l, _)), Some((h, _))) => {
            let next_int = l.floor() + BigRational::one();
            if admits(&next_int) {
                next_int
            } else if l == h {
                l.clone()
            } else {
                (l + h) / BigRational::from_integer(2.into())
            }
        }
        (None, None) => zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn open_triangle() {
        let mut s = LinearSystem::new(2);
        s.strict_int(&ints(&[1, 0]))
            .strict_int(&ints(&[-1, 1]))
            .strict_int(&ints(&[0, 1]));
        let w = strict_feasible(&s).expect("feasible");
        assert!(s.is_satisfied_by(&w));
        assert_eq!(w, RatVector::from_ints([1, 2]));
    }

    #[test]
    fn opposite_half_lines() {
        let mut s = LinearSystem::new(1);
        s.strict_int(&ints(&[1])).strict_int(&ints(&[-1]));
        assert_eq!(strict_feasible(&s), None);
    }

    #[test]
    fn nonstrict_opposites_allow_zero() {
        let mut s = LinearSystem::new(1);
        s.nonstrict_int(&ints(&[1])).nonstrict_int(&ints(&[-1]));
        assert_eq!(strict_feasible(&s), Some(RatVector::from_ints([0])));
    }

    #[test]
    fn equalities_restrict() {
        // x + y = 0, x > 0 has witness (1,-1); adding y > 0 kills it
        let mut s = LinearSystem::new(2);
        s.equality_int(&ints(&[1, 1])).strict_int(&ints(&[1, 0]));
        let w = strict_feasible(&s).unwrap();
        assert_eq!(w, RatVector::from_ints([1, -1]));
        s.strict_int(&ints(&[0, 1]));
        assert_eq!(strict_feasible(&s), None);
    }

    #[test]
    fn zero_strict_row_is_infeasible() {
        let mut s = LinearSystem::new(2);
        s.strict_int(&ints(&[0, 0]));
        assert_eq!(strict_feasible(&s), None);
    }

    #[test]
    fn thin_cone_needs_fraction() {
        // 3x - y > 0, y - 2x > 0 pins y/x into (2, 3)
        let mut s = LinearSystem::new(2);
        s.strict_int(&ints(&[3, -1])).strict_int(&ints(&[-2, 1]));
        let w = strict_feasible(&s).unwrap();
        assert!(s.is_satisfied_by(&w));
        // nonstrict pinning of a single ray
        let mut t = LinearSystem::new(2);
        t.nonstrict_int(&ints(&[3, -1]))
            .nonstrict_int(&ints(&[-3, 1]))
            .strict_int(&ints(&[1, 0]));
        assert_eq!(strict_feasible(&t), Some(RatVector::from_ints([1, 3])));
    }
}
