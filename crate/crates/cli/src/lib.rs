//! Commands behind the `qutrit-qkd` binary and the reports they produce.
//!
//! Every command is deterministic given its arguments (and seed, where one is
//! used). Reports serialise to JSON, CSV or plain text; all floating-point
//! results are rounded to 12 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use qutrit_qkd::protocol::{check_binding, ProtocolOutcome};
use qutrit_qkd::{
    chsh3_optimal_configuration, ghz, hchsh3_optimal_configuration, mix_noise, nme,
    nme_optimal_gamma, run_protocol, Inequality, ProtocolConfig, ProtocolVariant, SiftClass,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ghz,
    Nme,
}

impl std::fmt::Display for StateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StateKind::Ghz => "ghz",
            StateKind::Nme => "nme",
        })
    }
}

impl FromStr for StateKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateKind::Ghz),
            "nme" => Ok(StateKind::Nme),
            other => Err(format!("unknown state `{other}` (expected ghz or nme)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    Exact {
        inequality: Inequality,
        state: StateKind,
        gamma: Option<f64>,
        noise: f64,
    },
    Simulate {
        config: ProtocolConfig,
        emit_key: bool,
    },
    Sweep {
        variant: ProtocolVariant,
        grid: Vec<f64>,
        /// Check rounds per class for an optional simulated estimate.
        rounds: Option<u64>,
        seed: u64,
    },
    Tables {
        variant: ProtocolVariant,
    },
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate { config, .. } => Some(config.seed),
            Command::Sweep { seed, rounds, .. } => rounds.map(|_| *seed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub seed: Option<u64>,
    pub results: Results,
    pub meta: Meta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Results {
    Exact(ExactResult),
    Simulate(SimulateResult),
    Sweep(SweepResult),
    Tables(TablesResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub inequality: Inequality,
    pub state: StateKind,
    pub gamma: f64,
    pub noise: f64,
    pub value: f64,
    pub classical_bound: f64,
    pub violation_factor: f64,
    pub noise_threshold: f64,
    pub violates: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub class: SiftClass,
    pub samples: u64,
    pub value: f64,
    pub violation_factor: f64,
    pub standard_error: f64,
    pub aborted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub variant: ProtocolVariant,
    pub noise: f64,
    pub rounds: u64,
    pub key_rounds: u64,
    pub check1_rounds: u64,
    pub check2_rounds: u64,
    pub discard_rounds: u64,
    pub key_length: usize,
    pub key_agreement: f64,
    /// Noiseless-model factor `(1 − F)·v` computed exactly, for comparison.
    pub exact_factor: f64,
    pub checks: Vec<CheckSummary>,
    pub aborted: bool,
    /// Alice's key as a trit string; only with `--emit-key` and never on abort.
    pub key: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(rename = "F")]
    pub noise: f64,
    pub factor: f64,
    pub threshold_crossed: bool,
    pub simulated_factor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub variant: ProtocolVariant,
    pub inequality: Inequality,
    pub points: Vec<SweepPoint>,
    /// Noise where the exact factor reaches 1, linearly interpolated.
    pub crossing: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub alice: String,
    pub bob: String,
    pub class: SiftClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesResult {
    pub variant: ProtocolVariant,
    pub labels: Vec<String>,
    pub entries: Vec<TableEntry>,
    pub counts: BTreeMap<String, usize>,
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

impl Report {
    fn new(command: Command, results: Results) -> Self {
        Report {
            seed: command.seed(),
            command,
            results,
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }

    /// 0 on success, 3 when a simulated protocol aborted.
    pub fn exit_code(&self) -> i32 {
        match &self.results {
            Results::Simulate(s) if s.aborted => 3,
            _ => 0,
        }
    }
}

pub fn run_command(command: &Command) -> Result<Report> {
    match command {
        Command::Exact {
            inequality,
            state,
            gamma,
            noise,
        } => exact(*inequality, *state, *gamma, *noise),
        Command::Simulate { config, emit_key } => Ok(simulate(config, *emit_key)?.0),
        Command::Sweep {
            variant,
            grid,
            rounds,
            seed,
        } => sweep_noise(*variant, grid, *rounds, *seed),
        Command::Tables { variant } => Ok(tables(*variant)),
    }
}

pub fn exact(
    inequality: Inequality,
    state: StateKind,
    gamma: Option<f64>,
    noise: f64,
) -> Result<Report> {
    let (pure, gamma_used) = match (state, gamma) {
        (StateKind::Ghz, None) => (ghz(), 1.0),
        (StateKind::Ghz, Some(_)) => bail!("--gamma only applies to the nme state"),
        (StateKind::Nme, g) => {
            let g = g.unwrap_or_else(nme_optimal_gamma);
            (nme(g)?, g)
        }
    };
    let rho = mix_noise(&pure, noise)?;
    let cfg = match inequality {
        Inequality::Chsh3 => chsh3_optimal_configuration(),
        Inequality::Hchsh3 => hchsh3_optimal_configuration(),
    };
    let r = cfg.evaluate(&rho)?;
    let command = Command::Exact {
        inequality,
        state,
        gamma,
        noise,
    };
    Ok(Report::new(
        command,
        Results::Exact(ExactResult {
            inequality,
            state,
            gamma: sig12(gamma_used),
            noise,
            value: sig12(r.value),
            classical_bound: r.classical_bound,
            violation_factor: sig12(r.violation_factor),
            noise_threshold: sig12(r.noise_threshold),
            violates: r.violates(),
        }),
    ))
}

/// Exact violation factor of a variant's check configuration on noisy GHZ.
pub fn check_factor(variant: ProtocolVariant, noise: f64) -> Result<f64> {
    let rho = mix_noise(&ghz(), noise)?;
    let binding = check_binding(variant, SiftClass::Check1)?;
    Ok(binding.configuration.evaluate(&rho)?.violation_factor)
}

/// Runs the protocol and summarises it; the raw outcome is returned for
/// transcript export.
pub fn simulate(config: &ProtocolConfig, emit_key: bool) -> Result<(Report, ProtocolOutcome)> {
    let out = run_protocol(config)?;
    let count = |c| out.count(c) as u64;
    let key = (emit_key && !out.aborted).then(|| {
        out.alice_key
            .iter()
            .map(|t| char::from(b'0' + t))
            .collect::<String>()
    });
    let results = SimulateResult {
        variant: config.variant,
        noise: config.noise,
        rounds: out.rounds.len() as u64,
        key_rounds: count(SiftClass::Key),
        check1_rounds: count(SiftClass::Check1),
        check2_rounds: count(SiftClass::Check2),
        discard_rounds: count(SiftClass::Discard),
        key_length: out.alice_key.len(),
        key_agreement: sig12(out.key_agreement()),
        exact_factor: sig12(check_factor(config.variant, config.noise)?),
        checks: out
            .checks
            .iter()
            .map(|c| CheckSummary {
                class: c.class,
                samples: c.samples,
                value: sig12(c.report.value),
                violation_factor: sig12(c.report.violation_factor),
                standard_error: sig12(c.standard_error),
                aborted: c.aborted,
            })
            .collect(),
        aborted: out.aborted,
        key,
    };
    let command = Command::Simulate {
        config: *config,
        emit_key,
    };
    Ok((Report::new(command, Results::Simulate(results)), out))
}

/// Exact factor at each noise level (points evaluated in parallel, order
/// kept), with an optional simulated estimate, and the interpolated noise at
/// which the factor reaches 1.
pub fn sweep_noise(
    variant: ProtocolVariant,
    grid: &[f64],
    rounds: Option<u64>,
    seed: u64,
) -> Result<Report> {
    ensure!(!grid.is_empty(), "noise grid is empty");
    ensure!(
        grid.iter().all(|f| (0.0..=1.0).contains(f)),
        "noise grid values must lie in [0, 1]"
    );
    ensure!(
        grid.windows(2).all(|w| w[0] < w[1]),
        "noise grid must be strictly increasing"
    );

    let raw: Vec<(f64, f64, Option<f64>)> = grid
        .par_iter()
        .map(|&f| -> Result<_> {
            let factor = check_factor(variant, f)?;
            let simulated = match rounds {
                Some(n) => {
                    let mut cfg = ProtocolConfig::new(variant, f, 0, seed);
                    cfg.min_check_rounds = n;
                    let out = run_protocol(&cfg)?;
                    let worst = out
                        .checks
                        .iter()
                        .map(|c| c.report.violation_factor)
                        .fold(f64::INFINITY, f64::min);
                    Some(worst)
                }
                None => None,
            };
            Ok((f, factor, simulated))
        })
        .collect::<Result<_>>()?;

    let crossing = raw.windows(2).find_map(|w| {
        let ((f0, v0, _), (f1, v1, _)) = (w[0], w[1]);
        (v0 > 1.0 && v1 <= 1.0).then(|| f0 + (v0 - 1.0) * (f1 - f0) / (v0 - v1))
    });
    let points = raw
        .into_iter()
        .map(|(f, v, s)| SweepPoint {
            noise: f,
            factor: sig12(v),
            threshold_crossed: v <= 1.0,
            simulated_factor: s.map(sig12),
        })
        .collect();
    let command = Command::Sweep {
        variant,
        grid: grid.to_vec(),
        rounds,
        seed,
    };
    Ok(Report::new(
        command,
        Results::Sweep(SweepResult {
            variant,
            inequality: variant.inequality(),
            points,
            crossing: crossing.map(sig12),
        }),
    ))
}

pub fn tables(variant: ProtocolVariant) -> Report {
    let labels = variant.labels();
    let mut entries = Vec::new();
    let mut counts = BTreeMap::new();
    for &a in &labels {
        for &b in &labels {
            let class = variant.sift(a, b).expect("labels belong to the variant");
            *counts.entry(class.to_string()).or_insert(0) += 1;
            entries.push(TableEntry {
                alice: a.to_string(),
                bob: b.to_string(),
                class,
            });
        }
    }
    Report::new(
        Command::Tables { variant },
        Results::Tables(TablesResult {
            variant,
            labels: labels.iter().map(|l| l.to_string()).collect(),
            entries,
            counts,
        }),
    )
}

/// Parses `start:stop:step` or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .with_context(|| format!("bad number `{t}` in grid"))
    };
    if let [start, stop, step] = s.split(':').collect::<Vec<_>>()[..] {
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        ensure!(step > 0.0, "grid step must be positive");
        let n = ((stop - start) / step + 1e-9).floor();
        ensure!(n >= 0.0, "grid stop is below start");
        return Ok((0..=n as usize)
            .map(|i| sig12(start + i as f64 * step))
            .collect());
    }
    s.split(',').map(num).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!(
                "unknown format `{other}` (expected json, csv or text)"
            )),
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => render_csv(report),
        Format::Text => Ok(render_text(report)),
    }
}

#[derive(Serialize)]
struct SimulateRow<'a> {
    variant: ProtocolVariant,
    noise: f64,
    seed: u64,
    rounds: u64,
    key_rounds: u64,
    check1_rounds: u64,
    check2_rounds: u64,
    discard_rounds: u64,
    key_length: usize,
    key_agreement: f64,
    check1_factor: f64,
    check1_stderr: f64,
    check2_factor: f64,
    check2_stderr: f64,
    exact_factor: f64,
    aborted: bool,
    key: &'a str,
}

fn render_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match &report.results {
        Results::Exact(r) => w.serialize(r)?,
        Results::Simulate(s) => {
            let c = |i: usize| {
                s.checks
                    .get(i)
                    .map(|c| (c.violation_factor, c.standard_error))
            };
            let (c1, e1) = c(0).unwrap_or((f64::NAN, f64::NAN));
            let (c2, e2) = c(1).unwrap_or((f64::NAN, f64::NAN));
            w.serialize(SimulateRow {
                variant: s.variant,
                noise: s.noise,
                seed: report.seed.unwrap_or_default(),
                rounds: s.rounds,
                key_rounds: s.key_rounds,
                check1_rounds: s.check1_rounds,
                check2_rounds: s.check2_rounds,
                discard_rounds: s.discard_rounds,
                key_length: s.key_length,
                key_agreement: s.key_agreement,
                check1_factor: c1,
                check1_stderr: e1,
                check2_factor: c2,
                check2_stderr: e2,
                exact_factor: s.exact_factor,
                aborted: s.aborted,
                key: s.key.as_deref().unwrap_or(""),
            })?
        }
        Results::Sweep(s) => {
            for p in &s.points {
                w.serialize(p)?;
            }
        }
        Results::Tables(t) => {
            for e in &t.entries {
                w.serialize(e)?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    match &report.results {
        Results::Exact(r) => {
            let _ = writeln!(
                s,
                "{} on {} (gamma {}, F {})",
                r.inequality, r.state, r.gamma, r.noise
            );
            let _ = writeln!(s, "value            {}", r.value);
            let _ = writeln!(s, "classical bound  {}", r.classical_bound);
            let _ = writeln!(s, "violation factor {}", r.violation_factor);
            let _ = writeln!(s, "noise threshold  {}", r.noise_threshold);
        }
        Results::Simulate(r) => {
            let _ = writeln!(
                s,
                "{} at F {} (seed {}): {} rounds, {} key, {} check1, {} check2, {} discarded",
                r.variant,
                r.noise,
                report.seed.unwrap_or_default(),
                r.rounds,
                r.key_rounds,
                r.check1_rounds,
                r.check2_rounds,
                r.discard_rounds
            );
            for c in &r.checks {
                let _ = writeln!(
                    s,
                    "{}: factor {} ± {} over {} rounds{}",
                    c.class,
                    c.violation_factor,
                    c.standard_error,
                    c.samples,
                    if c.aborted { " (fails)" } else { "" }
                );
            }
            let _ = writeln!(s, "exact factor {}", r.exact_factor);
            if r.aborted {
                let _ = writeln!(s, "ABORTED: no key");
            } else {
                let _ = writeln!(
                    s,
                    "key length {}, agreement {}",
                    r.key_length, r.key_agreement
                );
                if let Some(k) = &r.key {
                    let _ = writeln!(s, "key {k}");
                }
            }
        }
        Results::Sweep(r) => {
            let _ = writeln!(s, "{} ({})", r.variant, r.inequality);
            for p in &r.points {
                let _ = write!(s, "F {:<8} factor {}", p.noise, p.factor);
                if let Some(x) = p.simulated_factor {
                    let _ = write!(s, "  simulated {x}");
                }
                let _ = writeln!(s);
            }
            match r.crossing {
                Some(c) => writeln!(s, "crossing at F = {c}"),
                None => writeln!(s, "no crossing in grid"),
            }
            .ok();
        }
        Results::Tables(t) => {
            let cell = |c: SiftClass| match c {
                SiftClass::Key => "k",
                SiftClass::Check1 => "c1",
                SiftClass::Check2 => "c2",
                SiftClass::Discard => ".",
            };
            let _ = write!(s, "{:>4}", "A\\B");
            for l in &t.labels {
                let _ = write!(s, "{l:>4}");
            }
            let _ = writeln!(s);
            for row in t.entries.chunks(t.labels.len()) {
                let _ = write!(s, "{:>4}", row[0].alice);
                for e in row {
                    let _ = write!(s, "{:>4}", cell(e.class));
                }
                let _ = writeln!(s);
            }
            for (class, n) in &t.counts {
                let _ = writeln!(s, "{class}: {n}");
            }
        }
    }
    s
}
