//! Run orchestration: configuration files, output artifacts and resume.
//!
//! An output directory holds
//!
//! * `manifest.json`: config echo, versions, seed ledger, progress, wall time
//!   and, once complete, SHA-256 checksums of the other files;
//! * `members.jsonl`: one JSON record per ensemble member, in index order;
//! * `summary.csv`: one row per member (`index` plus study columns);
//! * `report.json`: the reduced report, written on completion.
//!
//! Reals are written with shortest round-trip formatting, so identical
//! configs give byte-identical `members.jsonl`, `summary.csv` and
//! `report.json`.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{
    run_members, ConvergenceStudy, EnsembleConfig, EvolveStudy, InvarianceStudy, SampleStudy,
    SmoothingStudy, StrichartzStudy, Study, TailStudy,
};
use crate::rng::RngLedger;

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const MANIFEST: &str = "manifest.json";
pub const MEMBERS: &str = "members.jsonl";
pub const SUMMARY: &str = "summary.csv";
pub const REPORT: &str = "report.json";

/// Experiment and its parameters; the `kind` tag names the subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    Sample(EnsembleConfig),
    Evolve(EnsembleConfig),
    Invariance(EnsembleConfig),
    Converge(ConvergenceStudy),
    Smoothing(SmoothingStudy),
    Tails(TailStudy),
    Strichartz(StrichartzStudy),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Sample(_) => "sample",
            Self::Evolve(_) => "evolve",
            Self::Invariance(_) => "invariance",
            Self::Converge(_) => "converge",
            Self::Smoothing(_) => "smoothing",
            Self::Tails(_) => "tails",
            Self::Strichartz(_) => "strichartz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub resume: bool,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment,
            out: None,
            resume: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid config: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(Error::Usage(format!(
                "schema_version = {} is not supported (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Invocation options outside the config file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    pub resume: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Stop after computing this many members in this invocation, leaving a
    /// partial run behind.
    pub max_members: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Partial,
    Complete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checksums {
    pub members: String,
    pub summary: String,
    pub report: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub code_version: String,
    pub kind: String,
    pub config: serde_json::Value,
    pub rng: RngLedger,
    pub member_count: usize,
    pub completed_members: usize,
    pub status: RunStatus,
    pub wall_time_seconds: f64,
    pub checksums: Option<Checksums>,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Option<Self>> {
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(None);
        }
        Ok(Some(serde_json::from_str(&fs::read_to_string(path)?)?))
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let tmp = dir.join(format!("{MANIFEST}.tmp"));
        fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        fs::rename(tmp, dir.join(MANIFEST))?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub status: RunStatus,
    pub completed_members: usize,
    pub checksums: Option<Checksums>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(format!("{:x}", Sha256::digest(bytes)))
}

/// Executes `config` into `options.out`.
pub fn run(config: &RunConfig, options: &RunOptions) -> Result<RunOutcome> {
    let work = || match &config.experiment {
        Experiment::Sample(c) => execute_study(&SampleStudy { config: c.clone() }, config, options),
        Experiment::Evolve(c) => execute_study(&EvolveStudy { config: c.clone() }, config, options),
        Experiment::Invariance(c) => execute_study(&InvarianceStudy { config: c.clone() }, config, options),
        Experiment::Converge(s) => execute_study(s, config, options),
        Experiment::Smoothing(s) => execute_study(s, config, options),
        Experiment::Tails(s) => execute_study(s, config, options),
        Experiment::Strichartz(s) => execute_study(s, config, options),
    };
    match options.threads {
        Some(0) => Err(Error::Usage("threads must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {k} worker threads: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Members already recorded in `members.jsonl`; a torn final line is dropped.
fn read_members<M: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<M>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut members = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        match serde_json::from_str(&line?) {
            Ok(m) => members.push(m),
            Err(_) => break,
        }
    }
    Ok(members)
}

fn write_lines<M: Serialize>(file: &mut File, members: &[M]) -> Result<()> {
    let mut text = String::new();
    for m in members {
        text.push_str(&serde_json::to_string(m)?);
        text.push('\n');
    }
    file.write_all(text.as_bytes())?;
    file.flush()?;
    Ok(())
}

fn summary_csv<S: Study>(study: &S, members: &[S::Member]) -> String {
    let mut out = String::from("index");
    for c in study.columns() {
        out.push(',');
        out.push_str(&c);
    }
    out.push('\n');
    for (i, m) in members.iter().enumerate() {
        out.push_str(&i.to_string());
        for v in study.row(m) {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

fn execute_study<S: Study>(study: &S, config: &RunConfig, options: &RunOptions) -> Result<RunOutcome> {
    study.validate()?;
    let started = Instant::now();
    let dir = options.out.clone();
    fs::create_dir_all(&dir)?;
    let echo = serde_json::to_value(&config.experiment)?;
    let count = study.count();

    let (mut members, previous_time): (Vec<S::Member>, f64) = match Manifest::read(&dir)? {
        Some(manifest) => {
            if manifest.status == RunStatus::Complete {
                return Err(Error::CompletedRun(dir));
            }
            if !options.resume {
                return Err(Error::PartialRun(dir));
            }
            if manifest.code_version != CODE_VERSION || manifest.schema_version != SCHEMA_VERSION {
                return Err(Error::VersionMismatch {
                    expected: format!("{CODE_VERSION} (schema {SCHEMA_VERSION})"),
                    found: format!("{} (schema {})", manifest.code_version, manifest.schema_version),
                });
            }
            if manifest.config != echo {
                return Err(Error::ConfigMismatch(format!(
                    "{} holds a different {} experiment",
                    dir.display(),
                    manifest.kind
                )));
            }
            let mut done: Vec<S::Member> = read_members(&dir.join(MEMBERS))?;
            done.truncate(count);
            (done, manifest.wall_time_seconds)
        }
        None => {
            if dir.join(MEMBERS).exists() {
                return Err(Error::PartialRun(dir));
            }
            (Vec::new(), 0.0)
        }
    };

    let mut manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        code_version: CODE_VERSION.to_string(),
        kind: config.experiment.kind().to_string(),
        config: echo,
        rng: RngLedger::new(study.master_seed()),
        member_count: count,
        completed_members: members.len(),
        status: RunStatus::Partial,
        wall_time_seconds: previous_time,
        checksums: None,
    };
    // rewrite the surviving prefix so a torn line cannot linger
    let mut file = File::create(dir.join(MEMBERS))?;
    write_lines(&mut file, &members)?;
    manifest.write(&dir)?;

    let chunk = (rayon::current_num_threads() * 4).max(16);
    let limit = options
        .max_members
        .map_or(count, |k| (members.len() + k).min(count));
    let mut file = OpenOptions::new().append(true).open(dir.join(MEMBERS))?;
    while members.len() < limit {
        let start = members.len() as u64;
        let end = (members.len() + chunk).min(limit) as u64;
        let batch = run_members(study, start..end)?;
        write_lines(&mut file, &batch)?;
        members.extend(batch);
        manifest.completed_members = members.len();
        manifest.wall_time_seconds = previous_time + started.elapsed().as_secs_f64();
        manifest.write(&dir)?;
    }
    if members.len() < count {
        return Ok(RunOutcome {
            dir,
            status: RunStatus::Partial,
            completed_members: members.len(),
            checksums: None,
        });
    }

    let report = study.reduce(&members)?;
    fs::write(dir.join(REPORT), serde_json::to_string_pretty(&report)? + "\n")?;
    fs::write(dir.join(SUMMARY), summary_csv(study, &members))?;
    let checksums = Checksums {
        members: sha256_file(&dir.join(MEMBERS))?,
        summary: sha256_file(&dir.join(SUMMARY))?,
        report: sha256_file(&dir.join(REPORT))?,
    };
    manifest.status = RunStatus::Complete;
    manifest.wall_time_seconds = previous_time + started.elapsed().as_secs_f64();
    manifest.checksums = Some(checksums.clone());
    manifest.write(&dir)?;
    Ok(RunOutcome {
        dir,
        status: RunStatus::Complete,
        completed_members: members.len(),
        checksums: Some(checksums),
    })
}
