#![allow(dead_code)]

use zmpl::distributions::{CountModel, CountSample, ZmplParams, ZmplSampler};
use zmpl::estimation::{expected_fisher_info, log_likelihood, score, FisherInfo};
use zmpl::inference::{goodness_of_fit, CellLayout, DofConvention};
use zmpl::rng::stream;

/// Sum of the pmf until the remaining tail is below `1e-14`.
pub fn truncated_mass(p: &ZmplParams) -> f64 {
    let mut total = 0.0;
    for k in 0..1_000_000u64 {
        total += p.pmf(k);
        if p.survival((k + 1) as f64) < 1e-14 {
            break;
        }
    }
    total
}

/// Smallest `k <= limit` with `cdf(k) >= prob`, by direct search.
pub fn brute_quantile(p: &ZmplParams, prob: f64, limit: u64) -> Option<u64> {
    (0..=limit).find(|&k| p.cdf(k as f64) >= prob)
}

/// Largest relative discrepancy between the analytic score and a central
/// finite difference of the log-likelihood.
pub fn score_fd_error(p: &ZmplParams, sample: &CountSample) -> f64 {
    let an = score(p, sample).unwrap();
    let ll = |t: f64, q: f64| log_likelihood(&ZmplParams::new(t, q).unwrap(), sample);
    let (t, q) = (p.theta(), p.pi());
    let ht = 1e-6 * t.max(1e-2);
    let hp = 1e-6 * (1.0 - q).min(q - zmpl::distributions::pi_lower_bound(t).unwrap()).min(1.0);
    let fd_t = (ll(t + ht, q) - ll(t - ht, q)) / (2.0 * ht);
    let fd_p = (ll(t, q + hp) - ll(t, q - hp)) / (2.0 * hp);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    rel(an.d_theta, fd_t).max(rel(an.d_pi, fd_p))
}

/// Per-observation information from the average negative Hessian of a
/// large simulated sample; the Hessian comes from finite differences of the
/// analytic score.
pub fn mc_hessian_information(p: &ZmplParams, size: usize, seed: u64) -> FisherInfo {
    let sampler = ZmplSampler::new(*p);
    let sample = sampler.sample(size, &mut stream(&[seed]));
    let s = |t: f64, q: f64| score(&ZmplParams::new(t, q).unwrap(), &sample).unwrap();
    let (t, q) = (p.theta(), p.pi());
    let ht = 1e-5 * t;
    let hp = 1e-5;
    let dt = (s(t + ht, q).d_theta - s(t - ht, q).d_theta) / (2.0 * ht);
    let dtp = (s(t, q + hp).d_theta - s(t, q - hp).d_theta) / (2.0 * hp);
    let dp = (s(t, q + hp).d_pi - s(t, q - hp).d_pi) / (2.0 * hp);
    let n = size as f64;
    FisherInfo { i_tt: -dt / n, i_tp: -dtp / n, i_pp: -dp / n }
}

/// Largest relative difference between the closed-form and Monte Carlo
/// information matrices.
pub fn information_mc_error(p: &ZmplParams, size: usize, seed: u64) -> f64 {
    let exact = expected_fisher_info(p, 1).unwrap();
    let mc = mc_hessian_information(p, size, seed);
    [(exact.i_tt, mc.i_tt), (exact.i_tp, mc.i_tp), (exact.i_pp, mc.i_pp)]
        .iter()
        .map(|(a, b)| (a - b).abs() / a.abs())
        .fold(0.0, f64::max)
}

/// Chi-square p-value of a simulated sample against its generating law,
/// with cells merged so the closed tail cell has expected count >= 5.
pub fn sampler_gof_p_value(p: &ZmplParams, size: usize, seed: u64) -> f64 {
    let sample = ZmplSampler::new(*p).sample(size, &mut stream(&[seed]));
    let mut max_k = 1u64;
    while (size as f64) * p.survival((max_k + 1) as f64) >= 5.0 {
        max_k += 1;
    }
    let counts = sample.cell_counts(max_k, true);
    let pooled = CountSample::from_frequencies(counts.iter().enumerate().map(|(k, &f)| (k as u64, f))).unwrap();
    let report = goodness_of_fit(
        &CountModel::Zmpl(*p),
        &pooled,
        CellLayout::Closed,
        DofConvention::CellsMinusOne,
    )
    .unwrap();
    report.p_value
}

/// Collects named checks and prints one PASS/FAIL line for each.
pub struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(name: &'static str) -> Self {
        Self { name, failures: Vec::new() }
    }

    pub fn check(&mut self, what: &str, ok: bool, detail: String) {
        println!("    [{}] {what}: {detail}", if ok { "ok" } else { "MISS" });
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    pub fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.check(what, ok, format!("got {got:.6}, expected {want} +/- {tol}"));
    }

    pub fn finish(self) {
        if self.failures.is_empty() {
            println!("PASS  {}", self.name);
        } else {
            println!("FAIL  {} ({})", self.name, self.failures.join("; "));
            panic!("criterion failed: {}", self.name);
        }
    }
}
