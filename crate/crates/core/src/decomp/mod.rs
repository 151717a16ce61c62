//! Dyadic shells, cone covers, cone-localized pieces, phase reduction and
//! Fourier-series expansion of frequency-compact amplitudes.

mod cone;
mod lp;
mod reduce;
mod series;
mod sss;

pub use cone::{cone_count, cone_directions, cone_partition, ConeCover};
pub use lp::{littlewood_paley_build, radial_shell, LittlewoodPaley, MIN_SHELLS};
pub use reduce::{phase_reduce, Patch, ReducedPhase, ReductionReport, SND_FLOOR};
pub use series::{fourier_series_expand, torus_coefficients, FourierSeriesAmplitude, SeriesTerm, ALIASING_TOL};
pub use sss::{phi_probe_points, sss_localize, PhiCheck, SssPiece};

pub(crate) use series::signed;
