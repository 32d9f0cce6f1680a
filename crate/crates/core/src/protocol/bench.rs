//! Timing of Party A's brute-force decryption against Party B's single
//! Buchberger run.

use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerConfig};
use crate::protocol::cipher::{decrypt_single, decrypt_with, encrypt_with_key, nonce_from_seed, Strategy};
use crate::protocol::params::{keygen, PrivateParams, PublicParams};
use crate::ugb::sample_order;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub trials: usize,
    pub plaintext_size: usize,
    /// Allowed excess of the brute-force mean over `N * C`.
    pub slack: f64,
    pub seed: u64,
    /// Timed repetitions per measurement; the fastest is kept.
    pub reps: usize,
    pub keygen_trials: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            plaintext_size: 256,
            slack: 0.5,
            seed: 0,
            reps: 15,
            keygen_trials: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Fit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r_squared = if sxx > 0.0 && syy > 0.0 { sxy * sxy / (sxx * syy) } else { 0.0 };
    Fit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub keys: usize,
    pub trials: usize,
    pub plaintext_size: usize,
    /// `C`: one decryption with the right key.
    pub single_decrypt_ns: f64,
    pub brute_force_mean_ns: f64,
    /// `N * C * (1 + slack)`.
    pub brute_force_bound_ns: f64,
    pub within_bound: bool,
    /// Brute-force time against the number of keys tried.
    pub attempts_fit: Fit,
    pub tau_decrypt_mean_ns: f64,
    pub keygen_mean_ns: f64,
    /// One single decryption plus one Buchberger run.
    pub baseline_ns: f64,
    pub keygen_ratio: f64,
}

fn fastest<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            black_box(f());
            t.elapsed().as_nanos() as f64
        })
        .fold(f64::INFINITY, f64::min)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

pub fn bench(public: &PublicParams, private: &PrivateParams, cfg: &BenchConfig) -> Result<BenchReport> {
    let indexed;
    let private = if private.has_tau_table() {
        private
    } else {
        indexed = private.clone().with_tau_table();
        &indexed
    };
    let keys = private.key_list().keys();
    if keys.is_empty() || cfg.trials == 0 {
        return Err(Error::domain("benchmark needs keys and at least one trial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut plaintext = vec![0u8; cfg.plaintext_size];
    rng.fill_bytes(&mut plaintext);

    let mut singles = Vec::with_capacity(cfg.trials);
    let mut points = Vec::with_capacity(cfg.trials);
    let mut taus = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let index = rng.gen_range(0..keys.len());
        let kb = keys[index].key_bytes();
        let env = encrypt_with_key(kb, &plaintext, nonce_from_seed(rng.gen()), false)?;
        singles.push(fastest(cfg.reps, || decrypt_single(kb, &env)));
        let mut attempts = 0;
        let t = fastest(cfg.reps, || {
            let d = decrypt_with(private, &env, Strategy::Sequential);
            attempts = d.as_ref().map_or(0, |d| d.attempts);
            d
        });
        if attempts != index + 1 {
            return Err(Error::Decryption(format!(
                "brute force found key {attempts} instead of {}",
                index + 1
            )));
        }
        points.push((attempts as f64, t));
        let env1 = encrypt_with_key(kb, &plaintext, nonce_from_seed(rng.gen()), true)?;
        taus.push(fastest(cfg.reps, || decrypt_with(private, &env1, Strategy::Sequential)));
    }
    let c = mean(singles.iter().copied());
    let brute = mean(points.iter().map(|p| p.1));
    let bound = keys.len() as f64 * c * (1.0 + cfg.slack);

    let gcfg = GroebnerConfig::default();
    let n = public.ring().num_vars();
    let mut keygen_times = Vec::new();
    let mut baseline_times = Vec::new();
    for _ in 0..cfg.keygen_trials.max(1) {
        let seed = rng.gen();
        keygen_times.push(fastest(cfg.reps, || keygen(public, seed, &gcfg)));
        let mut orng = ChaCha8Rng::seed_from_u64(rng.gen());
        let kind = orng.gen_range(0..2);
        let order = sample_order(n, kind, &mut orng);
        let gb = fastest(cfg.reps, || buchberger(public.generators(), &order, &gcfg));
        baseline_times.push(gb + c);
    }
    let keygen_mean = mean(keygen_times.into_iter());
    let baseline = mean(baseline_times.into_iter());
    Ok(BenchReport {
        keys: keys.len(),
        trials: cfg.trials,
        plaintext_size: cfg.plaintext_size,
        single_decrypt_ns: c,
        brute_force_mean_ns: brute,
        brute_force_bound_ns: bound,
        within_bound: brute <= bound,
        attempts_fit: linear_fit(&points),
        tau_decrypt_mean_ns: mean(taus.into_iter()),
        keygen_mean_ns: keygen_mean,
        baseline_ns: baseline,
        keygen_ratio: keygen_mean / baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        let f = linear_fit(&pts);
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }
}
