//! Page-by-page computation of the RO(C₂)-graded homotopy fixed point
//! spectral sequences of Morava E-theory `E_n` and of `BP_ℝ` at the prime 2.
//!
//! The crate is organized bottom-up:
//!
//!  - [`grading`]: RO(C₂) stems, tri-degrees, generator degrees.
//!  - [`coefficients`]: `𝔽_{2ⁿ}`, the truncated Witt ring `W(𝔽_{2ⁿ})/2^M`, and
//!    truncated power series over either.
//!  - [`pages`]: monomials, module descriptors and E₂ lattices.
//!  - [`engine`]: differentials, Leibniz propagation and page turning.
//!  - [`oracle`]: an independent brute-force homology computation used to
//!    validate the engine.
//!  - [`homotopy`]: E∞ post-processing (stem reports, vanishing, strongly-even,
//!    periodicity).
//!  - [`detection`]: Hurewicz detection of the `h_i`, `h_j²`, `g_k` families.
//!  - [`chart`]: deterministic SVG / JSON charts.
//!  - [`cli`]: the on-disk cache and the command drivers behind the `rosq` binary.
//!
//! A minimal session:
//!
//! ```
//! use rosq::pages::Window;
//! use rosq::engine::run_to_einfty;
//! use rosq::homotopy::periodicity;
//!
//! let window = Window::new((-8, 24), (0, 0), (0, 8)).unwrap();
//! let run = run_to_einfty(1, &window, 6, 4).unwrap();
//! assert_eq!(periodicity(&run.einfty).unwrap(), Some(8));
//! ```

pub mod chart;
pub mod cli;
pub mod coefficients;
pub mod detection;
pub mod engine;
pub mod error;
pub mod grading;
pub mod homotopy;
pub mod linalg;
pub mod oracle;
pub mod pages;

pub use error::{Error, Result};
pub use grading::{RODegree, TriDegree};
pub use pages::{Monomial, ModuleDescriptor, PageLattice, Theory, Window};
