//! Seeded random verification of the construction.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::construction::{verify_theorem, Report, Templates};
use crate::error::{Error, Result};
use crate::io::PosetFile;
use crate::order::BoundedPoset;
use crate::random::random_bounded_poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub max_size: usize,
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
}

/// One verified sample.
#[derive(Clone, Debug)]
pub struct Sample {
    pub index: usize,
    pub poset: BoundedPoset,
    pub report: Report,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct FuzzOutcome {
    pub samples: Vec<Sample>,
}

impl FuzzOutcome {
    pub fn passed(&self) -> usize {
        self.samples.iter().filter(|s| s.report.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.samples.len() - self.passed()
    }

    pub fn total_time(&self) -> Duration {
        self.samples.iter().map(|s| s.elapsed).sum()
    }

    /// The deterministic report: one line per sample, a per-size table, the
    /// poset file of every failure, and the final `RESULT` line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for smp in &self.samples {
            let r = &smp.report;
            let verdict = match r.first_failure() {
                None => "pass".to_owned(),
                Some(st) => format!("FAIL at {}: {}", st.name, st.detail),
            };
            let _ = writeln!(
                s,
                "sample {:04} |P|={} |K|={} |Con K|={} |Princ K|={} {}",
                smp.index, r.p_size, r.k_size, r.con_count, r.princ_count, verdict
            );
        }
        let mut by_size: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for smp in &self.samples {
            let e = by_size.entry(smp.poset.len()).or_default();
            e.0 += 1;
            if smp.report.passed() {
                e.1 += 1;
            }
        }
        let _ = writeln!(s, "size  samples  passed");
        for (size, (n, ok)) in &by_size {
            let _ = writeln!(s, "{size:>4}  {n:>7}  {ok:>6}");
        }
        for smp in self.samples.iter().filter(|x| !x.report.passed()) {
            let file =
                PosetFile::from_poset(&format!("sample-{:04}", smp.index), smp.poset.poset());
            let _ = write!(s, "counterexample {:04}:\n{}", smp.index, file.to_json());
        }
        let _ = writeln!(s, "RESULT pass={} fail={}", self.passed(), self.failed());
        s
    }

    /// Timings per size, kept apart from [`FuzzOutcome::render`] so that
    /// report stays byte-stable.
    pub fn render_timings(&self) -> String {
        let mut by_size: BTreeMap<usize, Duration> = BTreeMap::new();
        for smp in &self.samples {
            *by_size.entry(smp.poset.len()).or_default() += smp.elapsed;
        }
        let mut s = String::new();
        for (size, t) in by_size {
            let _ = writeln!(s, "size {size}: {:.3}s", t.as_secs_f64());
        }
        let _ = writeln!(s, "total: {:.3}s", self.total_time().as_secs_f64());
        s
    }
}

/// The posets a run with this seed visits, in sample order.
pub fn fuzz_posets(config: &FuzzConfig) -> Vec<BoundedPoset> {
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.samples)
        .map(|_| {
            let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
            random_bounded_poset(&mut rng, config.max_size)
        })
        .collect()
}

/// Generates `samples` random bounded posets and verifies each. The result
/// is in sample order whatever the thread count.
pub fn fuzz(config: &FuzzConfig, templates: &Templates) -> Result<FuzzOutcome> {
    if config.max_size == 0 || config.samples == 0 {
        return Err(Error::InvalidInput(
            "max-size and samples must be at least 1".into(),
        ));
    }
    let posets = fuzz_posets(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let samples = pool.install(|| {
        posets
            .into_par_iter()
            .enumerate()
            .map(|(index, poset)| {
                let start = Instant::now();
                let report = verify_theorem(&poset, templates);
                Sample {
                    index,
                    poset,
                    report,
                    elapsed: start.elapsed(),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(FuzzOutcome { samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_run() {
        let t = Templates::builtin().unwrap();
        let cfg = FuzzConfig {
            max_size: 2,
            samples: 5,
            seed: 1,
            jobs: 2,
        };
        let out = fuzz(&cfg, &t).unwrap();
        assert_eq!(out.failed(), 0);
        assert!(out.render().ends_with("RESULT pass=5 fail=0\n"));
    }

    #[test]
    fn zero_samples_rejected() {
        let t = Templates::builtin().unwrap();
        let cfg = FuzzConfig {
            max_size: 3,
            samples: 0,
            seed: 1,
            jobs: 1,
        };
        assert!(fuzz(&cfg, &t).is_err());
    }
}
