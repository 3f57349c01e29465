//! Truncated moment problems on finite-dimensional polynomial spaces.
//!
//! Given a basis `F = {f_1, …, f_m}` of a space `E` of polynomials and a
//! finitely atomic measure `μ`, the crate computes the moment sequence
//! `s = ∫ s_F dμ`, the Jacobian of the atomic moment map, the defect number
//! and kernel polynomials, nonnegative annihilators and their zero sets, the
//! core-variety chain that yields the exact set of possible atoms, atom
//! reduction, and determinacy tests.
//!
//! ```
//! use momentcone::prelude::*;
//!
//! let basis = Basis::univariate_monomials(&[0, 2, 4, 5, 6, 7, 8]).unwrap();
//! let mu = AtomicMeasure::uniform(vec![vec![-1.0], vec![1.0], vec![2.0]]).unwrap();
//! let report = classify(&basis, &mu, &Domain::RealLine, &SearchConfig::default()).unwrap();
//! assert_eq!(report.defect, 1);
//! ```

pub mod caratheodory;
pub mod cli;
pub mod cone_geometry;
pub mod core_variety;
pub mod determinacy;
pub mod domain;
pub mod error;
pub mod fixtures;
pub mod moment_map;
pub mod numeric;
pub mod polynomial;
pub mod problem;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::caratheodory::reduce;
    pub use crate::cone_geometry::{
        classify, compute_i_set, exposed_face_generator, find_nonneg_annihilators, image_and_defect,
        kernel_polynomials, Classification, ConeReport, SearchConfig,
    };
    pub use crate::core_variety::{atom_test, core_variety, CoreVarietyResult};
    pub use crate::determinacy::{is_determinate, separating_family, DeterminacyReport};
    pub use crate::domain::{intersect_zero_set, Domain, PointSet, MATCH_TOL};
    pub use crate::error::{Error, Result};
    pub use crate::moment_map::{
        evaluate_functional, jacobian, moment_vector, moments, AtomicMeasure, Basis, MomentSequence,
    };
    pub use crate::numeric::{kernel, rank, Matrix, RANK_RTOL};
    pub use crate::polynomial::{
        is_nonneg_on, parse_polynomial, univariate_is_nonneg, univariate_real_roots, Polynomial,
    };
}
