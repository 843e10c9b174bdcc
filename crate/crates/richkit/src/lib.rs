//! Exact combinatorics and finite-field geometry of complete and partial
//! flags: permutation rank tables, Bruhat order, Demazure products, and
//! brute-force enumeration of Schubert and Richardson loci over F_p.

pub mod demazure;
pub mod enumerate;
pub mod flag;
pub mod linalg;
pub mod locus;
pub mod perm;
pub mod poly;
pub mod suites;
pub mod tangent;
pub mod text;

pub use demazure::{reduced_word, star};
pub use enumerate::{flag_count, relative_position_tally, Budget, FlagVariety, PositionTally};
pub use flag::{adapted_flags, assoc_perm, Flag};
pub use linalg::{FieldSpec, Matrix, Subspace};
pub use locus::{locus_points, richardson_points, CondMode, LocusSpec, SchubertCond};
pub use perm::{bruhat_leq, essential_set, NestOfSets, Perm, RankTable};
pub use poly::{interpolate, point_count_poly, IntPoly};
pub use suites::{run_suite, SuiteConfig, SuiteKind, SuiteReport};
pub use tangent::{flag_variety_dim, tangent_report, TangentReport};
