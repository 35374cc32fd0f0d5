//! Seeded single trials and Monte-Carlo campaigns.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{derive_params, ManiacParams, Mode};
use crate::error::{Error, Result};
use crate::netsim::{derive_seed, transmit, AdversaryPlan, NetworkJson, NetworkSpec, Payload, Strategy};

/// Trials per parallel batch; each batch's rows are written and flushed in
/// trial order before the next one starts.
const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub p: u64,
    pub z: usize,
    #[serde(rename = "R1")]
    pub r1: usize,
    #[serde(rename = "R2")]
    pub r2: usize,
    #[serde(default = "one")]
    pub k: usize,
}

fn one() -> usize {
    1
}

/// `"reference"`, a path to a network JSON file, or an inline network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkSource {
    Inline(NetworkJson),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    /// Attacked-edge budget; defaults to the code's `z`.
    #[serde(default)]
    pub z: Option<usize>,
    #[serde(flatten)]
    pub strategy: Strategy,
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        AdversaryConfig { z: None, strategy: Strategy::RandomEdges }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkSource,
    pub params: ParamsConfig,
    pub mode: Mode,
    #[serde(default)]
    pub adversary: AdversaryConfig,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("experiment config: {e}")))
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = ExperimentConfig::from_json_str(&text)?;
        // relative network paths are resolved against the config's directory
        if let NetworkSource::Named(name) = &cfg.network {
            if name != "reference" && Path::new(name).is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.network = NetworkSource::Named(dir.join(name).to_string_lossy().into_owned());
                }
            }
        }
        Ok(cfg)
    }
}

/// Everything a trial needs, validated once.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub spec: NetworkSpec,
    pub params: ManiacParams,
    pub mode: Mode,
    pub plan: AdversaryPlan,
}

impl Experiment {
    pub fn new(cfg: &ExperimentConfig) -> Result<Experiment> {
        let pc = &cfg.params;
        let spec = match &cfg.network {
            NetworkSource::Named(name) if name == "reference" => NetworkSpec::reference(pc.p)?,
            NetworkSource::Named(path) => NetworkSpec::load(Path::new(path))?,
            NetworkSource::Inline(json) => NetworkSpec::from_json(json)?,
        };
        if spec.field().p() != pc.p {
            return Err(Error::Config(format!(
                "network field p = {} differs from code p = {}",
                spec.field().p(),
                pc.p
            )));
        }
        if cfg.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let params = derive_params(pc.p, pc.z, pc.r1, pc.r2, pc.k, spec.cuts())?;
        let plan = AdversaryPlan {
            z: cfg.adversary.z.unwrap_or(pc.z),
            strategy: cfg.adversary.strategy.clone(),
            payload: Payload::Uniform,
        };
        plan.validate(&spec)?;
        Ok(Experiment { spec, params, mode: cfg.mode, plan })
    }

    /// `1 − 2|ℰ|/p`: the success guarantee for either decoder.
    pub fn bound(&self) -> f64 {
        1.0 - 2.0 * self.spec.num_edges() as f64 / self.params.p as f64
    }

    /// Runs one seeded trial. Counted failures (singular transforms, decoding
    /// failures) are reported in the outcome; anything else is an error.
    pub fn run_trial(&self, trial: u64, seed: u64) -> Result<TrialOutcome> {
        let start = Instant::now();
        let p = &self.params;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
        let (x1, x2) = p.random_messages(&mut rng);
        let (h1, h2) = p.source_messages(&x1, &x2, self.mode)?;
        let t = transmit(&self.spec, &h1, &h2, &self.plan, seed)?;
        let d_invertible = p.d_matrix(&t.t1, &t.t2)?.rank() == p.c;
        let decoded = match self.mode {
            Mode::Coherent => p.coherent_decode(&t.y, &t.t1, &t.t2),
            Mode::Noncoherent => p.noncoherent_decode(&t.y).map(|o| o.decoded),
        };
        let failure_stage = match decoded {
            Ok(d) if d.x1 == x1 && d.x2 == x2 => None,
            Ok(_) => Some("wrong_payload".to_string()),
            Err(e) if e.is_transfer_failure() => Some(e.label().to_string()),
            Err(e) => return Err(e),
        };
        Ok(TrialOutcome {
            trial,
            seed,
            success: failure_stage.is_none(),
            failure_stage,
            rank_e: t.e.rank(),
            d_invertible,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
        derive_seed(base_seed, trial)
    }

    /// Runs `trials` trials with per-trial derived seeds on up to `jobs`
    /// threads, writing CSV rows to `csv` in trial order.
    pub fn campaign<W: Write + Send>(
        &self,
        trials: usize,
        base_seed: u64,
        jobs: Option<usize>,
        csv_out: Option<W>,
    ) -> Result<CampaignSummary> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = jobs {
            builder = builder.num_threads(j.max(1));
        }
        let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let mut writer = csv_out.map(|w| csv::Writer::from_writer(w));
        let mut tally = Tally::default();
        for start in (0..trials).step_by(CHUNK) {
            let end = (start + CHUNK).min(trials);
            let batch: Vec<Result<TrialOutcome>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|i| self.run_trial(i as u64, Experiment::trial_seed(base_seed, i as u64)))
                    .collect()
            });
            for outcome in batch {
                let outcome = outcome?;
                if let Some(w) = writer.as_mut() {
                    w.serialize(CsvRow::from(&outcome)).map_err(io_err)?;
                }
                tally.add(&outcome);
            }
            if let Some(w) = writer.as_mut() {
                w.flush().map_err(|e| io_err(e.into()))?;
            }
        }
        Ok(tally.summary(self, trials))
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Config(format!("writing results: {e}"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub seed: u64,
    pub success: bool,
    pub failure_stage: Option<String>,
    pub rank_e: usize,
    pub d_invertible: bool,
    pub elapsed_ms: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: u64,
    seed: u64,
    success: bool,
    failure_stage: &'a str,
    #[serde(rename = "rank_E")]
    rank_e: usize,
    elapsed_ms: String,
}

impl<'a> From<&'a TrialOutcome> for CsvRow<'a> {
    fn from(o: &'a TrialOutcome) -> Self {
        CsvRow {
            trial: o.trial,
            seed: o.seed,
            success: o.success,
            failure_stage: o.failure_stage.as_deref().unwrap_or(""),
            rank_e: o.rank_e,
            elapsed_ms: format!("{:.3}", o.elapsed_ms),
        }
    }
}

#[derive(Default)]
struct Tally {
    successes: usize,
    d_invertible: usize,
    failures: BTreeMap<String, usize>,
}

impl Tally {
    fn add(&mut self, o: &TrialOutcome) {
        self.successes += o.success as usize;
        self.d_invertible += o.d_invertible as usize;
        if let Some(stage) = &o.failure_stage {
            *self.failures.entry(stage.clone()).or_default() += 1;
        }
    }

    fn summary(self, exp: &Experiment, trials: usize) -> CampaignSummary {
        let bound = exp.bound();
        let sigma = (bound.clamp(0.0, 1.0) * (1.0 - bound.clamp(0.0, 1.0)) / trials as f64).sqrt();
        let success_rate = self.successes as f64 / trials as f64;
        CampaignSummary {
            mode: exp.mode,
            trials,
            successes: self.successes,
            success_rate,
            edges: exp.spec.num_edges(),
            p: exp.params.p,
            bound,
            margin: 3.0 * sigma,
            meets_bound: success_rate >= bound - 3.0 * sigma,
            d_invertible_rate: self.d_invertible as f64 / trials as f64,
            failures: self.failures,
        }
    }
}

/// Campaign totals. `margin` is three binomial standard deviations at the
/// bound; `meets_bound` is `success_rate ≥ bound − margin`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub mode: Mode,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub edges: usize,
    pub p: u64,
    pub bound: f64,
    pub margin: f64,
    pub meets_bound: bool,
    pub d_invertible_rate: f64,
    pub failures: BTreeMap<String, usize>,
}
