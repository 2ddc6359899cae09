//! Exact toric GIT wall-crossing.
//!
//! A toric GIT problem is a torus `T = (C*)^r` acting linearly on `C^n`, and
//! it is fully described by its integer weight matrix: `n` weights
//! `q_i ∈ Z^r`. This crate computes, in exact arithmetic,
//!
//! * the wall-and-chamber structure of the space of stability conditions
//!   ([`fan`]),
//! * the recursive wall-crossing decomposition of the derived category of a
//!   phase, reported as multiplicities of irreducible factors indexed by
//!   relevant subspaces ([`sod`]),
//! * path-independence checks of those multiplicities,
//! * Horn uniformization and rank ≤ 2 intersection multiplicities for
//!   Calabi–Yau problems, compared against the decomposition multiplicities
//!   ([`discriminant`]).
//!
//! ```
//! use wallcross::{GitProblem, SecondaryFan, sod};
//! use wallcross::linalg::RatVector;
//!
//! // (C*)^2 acting on C^6.
//! let p = GitProblem::new(vec![
//!     vec![1, 0], vec![1, 0], vec![-1, 1],
//!     vec![0, 1], vec![0, 1], vec![0, -1],
//! ]).unwrap();
//! let fan = SecondaryFan::build(&p).unwrap();
//! let c = fan.chamber_of(&RatVector::from_ints([1, 1])).unwrap();
//! let map = sod::decompose(&fan, c, &sod::PathPolicy::Bfs).unwrap();
//! assert_eq!(map.total(), 6.into());
//! ```
//!
//! The `book/` directory next to the workspace root walks through the
//! concepts chapter by chapter; its code snippets are compiled and run as
//! doc-tests of this crate.

pub mod discriminant;
mod error;
pub mod fan;
pub mod git;
pub mod linalg;
pub mod sample;
pub mod sod;

pub use error::{Error, Result};
pub use fan::{Chamber, Hyperplane, SecondaryFan, Sign, Wall};
pub use git::{GitProblem, MinimalFace, RayData, SubProblem, SubspaceKey};
pub use sod::MultiplicityMap;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/git-problems.md")]
    mod git_problems {}
    #[doc = include_str!("../../../book/src/secondary-fan.md")]
    mod secondary_fan {}
    #[doc = include_str!("../../../book/src/wall-crossing.md")]
    mod wall_crossing {}
    #[doc = include_str!("../../../book/src/path-independence.md")]
    mod path_independence {}
    #[doc = include_str!("../../../book/src/discriminants.md")]
    mod discriminants {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
