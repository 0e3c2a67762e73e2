use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sympolar::retraction::{
    diagnostics_from, retract_forward_with, retract_inverse_with, RetractOptions, Variant,
};
use sympolar::sympstiefel::{
    orthosymplectic_tangent, random_hamiltonian, random_orthosymplectic_point, random_point_cayley,
    random_tangent_at, SpStPoint, SpStTangent,
};

use crate::error::{BenchError, BenchResult};
use crate::record::BenchRecord;

/// Random data model for `(U, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Generator {
    /// Ortho-symplectic `U = M E` from a complex QR and `D = M Ω E`.
    #[default]
    Qr,
    /// `U = Cay(Ω) E` and a random tangent `D = U H + (I − UU⁺) W`.
    Cayley,
}

impl Generator {
    /// Draws `(U, D)` with `‖D‖_F = 1`.
    pub fn sample(self, n: usize, p: usize, seed: u64) -> BenchResult<(SpStPoint, SpStTangent)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(match self {
            Generator::Qr => {
                let (u, m) = random_orthosymplectic_point(n, p, &mut rng)?;
                let omega = random_hamiltonian(n, &mut rng);
                let d = orthosymplectic_tangent(&u, &m, &omega, true)?;
                (u, d)
            }
            Generator::Cayley => {
                let u = random_point_cayley(n, p, &mut rng)?;
                let d = random_tangent_at(&u, &mut rng, true)?;
                (u, d)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub p_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub variant: Variant,
    pub generator: Generator,
    /// Run the trials of one `p` on the rayon pool. Timings are then
    /// contended, so this is off by default.
    pub parallel: bool,
    pub precheck_domain: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 200,
            p_list: vec![20, 40, 60, 80, 100],
            trials: 10,
            seed: 42,
            variant: Variant::Cayley,
            generator: Generator::Qr,
            parallel: false,
            precheck_domain: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> BenchResult<()> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(BenchError::Config("n must be positive".into()));
        }
        if self.p_list.is_empty() {
            return Err(BenchError::Config("p list is empty".into()));
        }
        if let Some(&p) = self.p_list.iter().find(|&&p| p == 0 || p > self.n) {
            return Err(BenchError::Config(format!(
                "p = {p} must satisfy 1 <= p <= n = {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn retraction_name(&self) -> String {
        format!("polar-light/{}", self.variant.as_str())
    }

    fn options(&self) -> RetractOptions {
        let mut opts = RetractOptions::new(self.variant);
        opts.precheck_domain = self.precheck_domain;
        opts
    }
}

/// Leaving the admissible domain is a per-trial outcome, not a failure of the
/// sweep.
pub(crate) fn is_domain_failure(e: &sympolar::Error) -> bool {
    matches!(
        e,
        sympolar::Error::OutOfDomain { .. } | sympolar::Error::Singular { .. }
    )
}

fn run_trial(cfg: &SweepConfig, p: usize, trial: usize) -> BenchResult<BenchRecord> {
    let seed = cfg.seed + trial as u64;
    let name = cfg.retraction_name();
    let mut rec = BenchRecord::empty(&name, cfg.n, p, trial, seed);
    let (u, d) = cfg.generator.sample(cfg.n, p, seed)?;
    let opts = cfg.options();

    let start = Instant::now();
    let forward = retract_forward_with(&u, &d, &opts);
    rec.wall_time_forward_s = Some(start.elapsed().as_secs_f64());
    let utilde = match forward {
        Ok(out) => out.point,
        Err(e) if is_domain_failure(&e) => {
            rec.out_of_domain = true;
            return Ok(rec);
        }
        Err(e) => return Err(e.into()),
    };
    rec.residual_point = Some(utilde.residual());

    let start = Instant::now();
    let inverse = retract_inverse_with(&u, &utilde, &opts);
    rec.wall_time_inverse_s = Some(start.elapsed().as_secs_f64());
    let recovered = match inverse {
        Ok((t, _)) => t,
        Err(e) if is_domain_failure(&e) => {
            rec.out_of_domain = true;
            return Ok(rec);
        }
        Err(e) => return Err(e.into()),
    };
    match diagnostics_from(&u, &d, &utilde, &recovered, &opts) {
        Ok(diag) => {
            rec.residual_tangent = Some(diag.tangent);
            rec.residual_roundtrip_tangent = Some(diag.roundtrip_tangent);
            rec.residual_roundtrip_point = Some(diag.roundtrip_point);
        }
        Err(e) if is_domain_failure(&e) => {
            rec.residual_tangent = Some(recovered.residual());
            rec.out_of_domain = true;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(rec)
}

/// Times forward and inverse retraction for every `p` and trial.
///
/// Trial `t` uses seed `cfg.seed + t` for every `p`. Before the trials of
/// each `p` one untimed warm-up evaluation is discarded. Records come back in
/// `(p, trial)` order whether or not the trials ran in parallel.
pub fn run_sweep(cfg: &SweepConfig) -> BenchResult<Vec<BenchRecord>> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.p_list.len() * cfg.trials);
    for &p in &cfg.p_list {
        run_trial(cfg, p, 0)?;
        let batch: BenchResult<Vec<BenchRecord>> = if cfg.parallel {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, p, t))
                .collect()
        } else {
            (0..cfg.trials).map(|t| run_trial(cfg, p, t)).collect()
        };
        records.extend(batch?);
    }
    Ok(records)
}
