use serde::{Deserialize, Serialize};

use crate::distributions::ZmplParams;
use crate::rng::stream_seed;
use crate::{Error, Result};

pub const PAPER_SAMPLE_SIZES: [usize; 4] = [35, 60, 90, 120];
pub const PAPER_THETAS: [f64; 2] = [1.5, 2.0];
pub const PAPER_PIS: [f64; 3] = [-0.1, 0.0, 0.1];

/// One cell of a Monte Carlo design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McScenario {
    pub n: usize,
    pub theta_true: f64,
    pub pi_true: f64,
    pub mc_reps: usize,
    pub boot_reps: usize,
    pub seed: u64,
}

impl McScenario {
    pub fn new(
        n: usize,
        theta_true: f64,
        pi_true: f64,
        mc_reps: usize,
        boot_reps: usize,
        seed: u64,
    ) -> Result<Self> {
        let s = Self { n, theta_true, pi_true, mc_reps, boot_reps, seed };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        if self.mc_reps == 0 {
            return Err(Error::InvalidParameter("mc_reps must be at least 1".into()));
        }
        if self.boot_reps < 2 {
            return Err(Error::InvalidParameter("boot_reps must be at least 2".into()));
        }
        self.params().map(|_| ())
    }

    pub fn params(&self) -> Result<ZmplParams> {
        ZmplParams::new(self.theta_true, self.pi_true)
    }

    /// Human-readable identifier, e.g. `n35_t1.5_p-0.1`.
    pub fn id(&self) -> String {
        format!("n{}_t{}_p{}", self.n, self.theta_true, self.pi_true)
    }

    /// Hash of the design point, used to derive random streams. It does not
    /// depend on the replicate counts, so runs with more replicates extend
    /// runs with fewer.
    pub fn stream_key(&self) -> u64 {
        stream_seed(&[self.n as u64, self.theta_true.to_bits(), self.pi_true.to_bits()])
    }
}

/// Cartesian product `ns x thetas x pis`, ordered by theta, then pi, then n.
pub fn expand_grid(
    ns: &[usize],
    thetas: &[f64],
    pis: &[f64],
    mc_reps: usize,
    boot_reps: usize,
    seed: u64,
) -> Result<Vec<McScenario>> {
    let mut out = Vec::with_capacity(ns.len() * thetas.len() * pis.len());
    for &theta in thetas {
        for &pi in pis {
            for &n in ns {
                out.push(McScenario::new(n, theta, pi, mc_reps, boot_reps, seed)?);
            }
        }
    }
    Ok(out)
}

/// The 24-cell design with `n` in {35, 60, 90, 120}, theta in {1.5, 2.0}
/// and pi in {-0.1, 0, 0.1}.
pub fn paper_grid(mc_reps: usize, boot_reps: usize, seed: u64) -> Result<Vec<McScenario>> {
    expand_grid(&PAPER_SAMPLE_SIZES, &PAPER_THETAS, &PAPER_PIS, mc_reps, boot_reps, seed)
}
