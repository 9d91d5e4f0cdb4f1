//! Bivariate interpolation on intertwining arrays built from two univariate
//! node sequences.

pub mod array;
pub mod flip;
pub mod index;
pub mod interp;
pub mod leja2d;
pub mod vdm;

pub use array::{build_array, leja_bidisk_array, IntertwiningArray};
pub use flip::{bivariate_flip, BivariateBasis, CaseCoverage, FlipCase, FlipExpansion};
pub use index::{block_size, lex_to_pair, pair_to_lex, shape_of};
pub use interp::{bivariate_lebesgue, interpolate, jackson_decay_experiment, DecayRow};
pub use leja2d::{verify_2d_leja, Leja2dReport};
pub use vdm::{flip_via_vdm_ratio, schiffer_siciak, vdm_determinant, vdm_extension_factor};
