//! Probability functions, sampling and moments for the ZMPL distribution and
//! the baselines it is compared against (Poisson-Lindley, Poisson,
//! zero-modified Poisson).

mod model;
mod pl;
mod poisson;
mod sample;
mod zmpl;

pub use model::CountModel;
pub use pl::PlParams;
pub use poisson::{poisson_pmf, ZmpParams};
pub use sample::CountSample;
pub use zmpl::{pi_lower_bound, Moments, ZmplParams, ZmplSampler, QUANTILE_MAX_ITER};
