//! Orlicz modulation spaces, Fourier integral operators and Orlicz Schatten
//! classes, realized on truncated uniform lattices.
//!
//! Fields live on `[-L, L]^d` with `n` points per axis. Phase-space grids pair
//! each space axis with its discrete Fourier dual `ξ_k = πk/L`. Norms over
//! phase space use the measure `dx dξ / (2π)^d`, under which the discrete
//! Moyal identity is exact.

pub mod bench;
pub mod error;
pub mod fio;
pub mod io;
pub mod lattice;
pub mod numeric;
pub mod orlicz;
pub mod schatten;
pub mod timefreq;
pub mod weights;
pub mod young;

pub use error::{Error, Result};
pub use lattice::{Axis, AxisKind, Grid, SampledField};
pub use num_complex::Complex64;
pub use orlicz::{luxemburg_norm, mixed_norm};
pub use weights::Weight;
pub use young::Young;
