//! Exact Walsh–Hadamard spectra and bentness classification for generalized
//! Boolean functions `f: Z_p^n → Z_q`, `p` an odd prime dividing `q`.
//!
//! Spectral values are cyclotomic integers computed without rounding. The
//! ring code is generic over the coefficient type (see [`Coeff`]); the
//! aliases below fix it to `BigInt`, which is what the CLI uses.

pub mod arith;
pub mod classify;
pub mod construct;
pub mod cyclotomic;
pub mod error;
pub mod gbfunc;
pub mod io;
pub mod scalar;
pub mod selftest;
pub mod tables;
pub mod transform;

pub use num_bigint::BigInt;

pub use crate::classify::{
    component_bent_criterion, is_gbent, regularity, row_decomp, spectral_form,
    weak_regularity_criterion, Regularity, RowDecomp, SpectralForm, Unit,
};
pub use crate::construct::{
    build_maiorana, enumerate_pary_bent, permute_digits, restrict_digits, Affine, MaioranaSpec,
};
pub use crate::cyclotomic::{gauss_sqrt, match_candidate, CycInt};
pub use crate::error::{GbentError, Result};
pub use crate::gbfunc::{ComponentTuple, GBFunction, PAryFunction};
pub use crate::scalar::Coeff;
pub use crate::transform::{
    gamma_general_q, gamma_product, gamma_sum, inverse_wht, wht_composed, wht_naive, wht_pary_fast,
    GammaTable, Spectrum,
};

/// Arbitrary-precision cyclotomic integer.
pub type Cyc = CycInt<BigInt>;
/// Cyclotomic integer with `i64` coefficients.
pub type Cyc64 = CycInt<i64>;
/// Spectrum with arbitrary-precision coefficients.
pub type BigSpectrum = Spectrum<BigInt>;
