//! Fast matrix multiplication through the discrete Fourier transform over the
//! wreath product `Z_m ≀ S_N`, alongside classical bilinear (Strassen-like)
//! recursion, with forward-error bounds for both and a harness that measures
//! the bounds against experiment.
//!
//! * [`matcore`] — complex matrices at two precisions, norms, the naive product.
//! * [`bilinear`] — bilinear schemes, recursive multiplication, error bounds.
//! * [`grouplib`] — wreath-product arithmetic and simultaneous triple product
//!   property (STPP) triples.
//! * [`wreathfft`] — multidimensional FFT over `(Z_m)^D`.
//! * [`stpalg`] — the five-step group-theoretic multiplication pipeline.
//! * [`harness`] — error experiments, exponent fits and reports.

pub mod bilinear;
pub mod grouplib;
pub mod harness;
pub mod matcore;
pub mod stpalg;
pub mod wreathfft;
