//! Sampling theory for signals with time-varying bandwidth.
//!
//! A finite *bandlimit pair* `(t, t')` (strictly increasing nodes with
//! positive weights) determines a meromorphic inner function `Theta`, its
//! phase `tau` with `Theta(t) = exp(2 pi i tau(t))`, a one-parameter family
//! of sampling lattices `t_n(theta)` solving `tau(t) = n + theta`, and a
//! reproducing kernel space in which every function is recovered exactly
//! from its samples on any one lattice. The Paley-Wiener space is the case
//! of equally spaced nodes.
//!
//! ```
//! use tvband::{pair::BandlimitPair, kernel::{self, KernelContext}};
//!
//! let pair = BandlimitPair::new(0, vec![-1.0, 0.5, 2.0], vec![1.0, 0.7, 1.3])?;
//! let pair = tvband::pair::normalize_pair(&pair)?;
//! let ctx = KernelContext::new(&pair)?;
//! let k = kernel::kernel_eval(&ctx, 0.1, 0.1);
//! assert!((k - 1.0).abs() < 1e-14);
//! # Ok::<(), tvband::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose to reject NaN along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfun;
pub mod cli;
pub mod error;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod numeric;
pub mod oracle;
pub mod pair;
pub mod sampling;
pub mod signal;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::SampleSet;
pub use numeric::C64;
pub use pair::BandlimitPair;
pub use signal::{GridSignal, GridSpec};
