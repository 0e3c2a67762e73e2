use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympolar::retraction::{Registry, RetractionPair};
use sympolar::sympstiefel::{random_point_cayley, random_tangent_at, SpStPoint, SpStTangent};

use crate::error::{BenchError, BenchResult};
use crate::record::BenchRecord;
use crate::sweep::is_domain_failure;

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub names: Vec<String>,
    pub n: usize,
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    /// Rescale every tangent to `‖D‖_F = 1`.
    pub norm_tangent: bool,
}

impl CompareConfig {
    fn validate(&self, registry: &Registry) -> BenchResult<()> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.p == 0 || self.p > self.n {
            return Err(BenchError::Config(format!(
                "p = {} must satisfy 1 <= p <= n = {}",
                self.p, self.n
            )));
        }
        if self.names.is_empty() {
            return Err(BenchError::Config("no retractions selected".into()));
        }
        for name in &self.names {
            registry.get(name)?;
        }
        Ok(())
    }
}

fn sample(cfg: &CompareConfig, trial: usize) -> BenchResult<(SpStPoint, SpStTangent)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + trial as u64);
    let u = random_point_cayley(cfg.n, cfg.p, &mut rng)?;
    let d = random_tangent_at(&u, &mut rng, cfg.norm_tangent)?;
    Ok((u, d))
}

/// Per-trial measurements; round-trip columns stay `None` for a retraction
/// without inverse.
fn measure(
    pair: &RetractionPair,
    u: &SpStPoint,
    d: &SpStTangent,
    rec: &mut BenchRecord,
) -> BenchResult<()> {
    let start = Instant::now();
    let forward = pair.forward(u, d);
    rec.wall_time_forward_s = Some(start.elapsed().as_secs_f64());
    let utilde = match forward {
        Ok(pt) => pt,
        Err(e) if is_domain_failure(&e) => {
            rec.out_of_domain = true;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    rec.residual_point = Some(utilde.residual());

    let start = Instant::now();
    let Some(inverse) = pair.inverse(u, &utilde) else {
        return Ok(());
    };
    rec.wall_time_inverse_s = Some(start.elapsed().as_secs_f64());
    let recovered = match inverse {
        Ok(t) => t,
        Err(e) if is_domain_failure(&e) => {
            rec.out_of_domain = true;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    rec.residual_tangent = Some(recovered.residual());
    rec.residual_roundtrip_tangent = Some(d.matrix().distance(recovered.matrix()));
    match pair.forward(u, &recovered) {
        Ok(again) => rec.residual_roundtrip_point = Some(utilde.matrix().distance(again.matrix())),
        Err(e) if is_domain_failure(&e) => rec.out_of_domain = true,
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, count) = values
        .flatten()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn average(name: &str, cfg: &CompareConfig, trials: &[BenchRecord]) -> BenchRecord {
    let avg = |f: fn(&BenchRecord) -> Option<f64>| mean(trials.iter().map(f));
    BenchRecord {
        wall_time_forward_s: avg(|r| r.wall_time_forward_s),
        wall_time_inverse_s: avg(|r| r.wall_time_inverse_s),
        residual_point: avg(|r| r.residual_point),
        residual_tangent: avg(|r| r.residual_tangent),
        residual_roundtrip_tangent: avg(|r| r.residual_roundtrip_tangent),
        residual_roundtrip_point: avg(|r| r.residual_roundtrip_point),
        out_of_domain: trials.iter().any(|r| r.out_of_domain),
        ..BenchRecord::empty(name, cfg.n, cfg.p, cfg.trials, cfg.seed)
    }
}

/// Averages each named retraction over `cfg.trials` shared random inputs.
///
/// Every retraction sees the same `(U, D)` per trial: `U = Cay(Ω)E` with
/// `‖Ω‖_F = 1` and a random tangent, seeded by `cfg.seed + trial`. The
/// returned rows carry the trial count in `trial`, the base seed in `seed`,
/// and means over the trials that produced each column. `out_of_domain` is
/// set if any trial left the domain.
pub fn run_compare_with(cfg: &CompareConfig, registry: &Registry) -> BenchResult<Vec<BenchRecord>> {
    cfg.validate(registry)?;
    let inputs: Vec<(SpStPoint, SpStTangent)> = (0..cfg.trials)
        .map(|t| sample(cfg, t))
        .collect::<BenchResult<_>>()?;
    let mut rows = Vec::with_capacity(cfg.names.len());
    for name in &cfg.names {
        let pair = registry.get(name)?;
        let mut warm = BenchRecord::empty(name, cfg.n, cfg.p, 0, cfg.seed);
        measure(pair, &inputs[0].0, &inputs[0].1, &mut warm)?;

        let mut per_trial = Vec::with_capacity(cfg.trials);
        for (t, (u, d)) in inputs.iter().enumerate() {
            let mut rec = BenchRecord::empty(name, cfg.n, cfg.p, t, cfg.seed + t as u64);
            measure(pair, u, d, &mut rec)?;
            per_trial.push(rec);
        }
        rows.push(average(name, cfg, &per_trial));
    }
    Ok(rows)
}

/// [`run_compare_with`] on the built-in registry.
pub fn run_compare(
    names: &[String],
    n: usize,
    p: usize,
    trials: usize,
    seed: u64,
    norm_tangent: bool,
) -> BenchResult<Vec<BenchRecord>> {
    let cfg = CompareConfig {
        names: names.to_vec(),
        n,
        p,
        trials,
        seed,
        norm_tangent,
    };
    run_compare_with(&cfg, &sympolar::retraction::registry())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_skips_absent() {
        assert_eq!(mean([Some(1.0), None, Some(3.0)].into_iter()), Some(2.0));
        assert_eq!(mean([None, None].into_iter()), None);
    }

    #[test]
    fn unknown_name_rejected() {
        let err = run_compare(&["nope".into()], 10, 2, 1, 1, true).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn forward_only_entry_has_no_round_trip_columns() {
        let cay = sympolar::retraction::registry()
            .get("polar-light/cayley")
            .unwrap()
            .clone();
        let fwd_only = RetractionPair::new(
            "baseline/forward-only",
            std::sync::Arc::new(move |u, d| cay.forward(u, d)),
            None,
        );
        let reg = sympolar::retraction::registry().with(fwd_only);
        let cfg = CompareConfig {
            names: vec!["baseline/forward-only".into(), "polar-light/cayley".into()],
            n: 20,
            p: 4,
            trials: 2,
            seed: 3,
            norm_tangent: true,
        };
        let rows = run_compare_with(&cfg, &reg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].wall_time_inverse_s.is_none());
        assert!(rows[0].residual_roundtrip_point.is_none());
        assert_eq!(rows[0].residual_point, rows[1].residual_point);
        assert!(rows[1].residual_roundtrip_point.is_some());
        assert_eq!(rows[1].trial, 2);
    }
}
