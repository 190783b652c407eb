//! Sweep configuration: a strict TOML schema (unknown keys are errors)
//! validated into a typed plan.
//!
//! ```toml
//! [primes]
//! list = [1009, 2003]        # or: start = 1000, count = 10
//!
//! [n]
//! list = [25, 31]            # or: alpha = 0.4  (N = floor(q^alpha))
//!
//! delta = 0.005              # optional, range-check exponent offset
//!
//! [[f]]
//! kind = "ones"              # ones | random_sign | random_unimodular | archimedean
//! seed = 0                   # optional, default 0
//! # t = 1.5                  # required for archimedean, rejected otherwise
//!
//! [resonator]                # optional, default canonical
//! mode = "override"          # canonical | override
//! band = [2, "x"]            # override only; "x" resolves to the cell's X
//! normalization = "sqrt_p"   # override only: sqrt_p | sqrt_q_literal
//!
//! [output]                   # required by `run`, ignored by `verify`
//! dir = "out"
//!
//! [flags]                    # optional
//! naive_only = false
//! skip_brute_force = false
//! threads = 1
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use charsum_core::coefficients::CoefficientKind;
use charsum_core::ntcore::is_prime;
use serde::Deserialize;

/// A configuration problem: parse failure or a validation rule violation.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

// ---------------------------------------------------------------- raw layer

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    primes: RawPrimes,
    n: RawNRule,
    delta: Option<f64>,
    f: Vec<RawF>,
    resonator: Option<RawResonator>,
    output: Option<RawOutput>,
    flags: Option<RawFlags>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrimes {
    list: Option<Vec<u64>>,
    start: Option<u64>,
    count: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNRule {
    list: Option<Vec<u64>>,
    alpha: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawF {
    kind: String,
    seed: Option<u64>,
    t: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResonator {
    mode: String,
    band: Option<[RawBandEnd; 2]>,
    normalization: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawBandEnd {
    Fixed(u64),
    Tag(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlags {
    naive_only: Option<bool>,
    skip_brute_force: Option<bool>,
    threads: Option<u64>,
}

// -------------------------------------------------------------- typed layer

/// How the partial-sum length N is chosen for each prime q.
#[derive(Debug, Clone, PartialEq)]
pub enum NRule {
    /// The same explicit list for every q (ascending, deduplicated).
    List(Vec<u64>),
    /// N = floor(q^alpha), one value per q.
    Power { alpha: f64 },
}

impl NRule {
    /// The N values this rule produces for modulus q.
    pub fn values_for(&self, q: u64) -> Vec<u64> {
        match self {
            NRule::List(ns) => ns.clone(),
            NRule::Power { alpha } => {
                let n = (q as f64).powf(*alpha).floor() as u64;
                vec![n.max(1)]
            }
        }
    }
}

/// One coefficient function to sweep: a preset kind plus its seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSpec {
    pub kind: CoefficientKind,
    pub seed: u64,
}

impl FSpec {
    /// Stable label used in report rows; holds no commas.
    pub fn label(&self) -> String {
        match self.kind {
            CoefficientKind::Ones => "ones".into(),
            CoefficientKind::RandomSign => "random_sign".into(),
            CoefficientKind::RandomUnimodular => "random_unimodular".into(),
            CoefficientKind::Archimedean { t } => format!("archimedean(t={t})"),
        }
    }
}

/// A band endpoint in an override resonator: a literal value or the
/// per-cell truncation X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandEnd {
    Fixed(u64),
    X,
}

impl BandEnd {
    pub fn resolve(self, x: u64) -> u64 {
        match self {
            BandEnd::Fixed(v) => v,
            BandEnd::X => x,
        }
    }
}

/// The prime-weight rule, resolved per cell (the literal-√q variant needs
/// the cell's modulus).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormRule {
    SqrtP,
    SqrtQLiteral,
}

/// Which resonator every cell uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResonatorMode {
    /// Canonical parameters from X (degenerating to support {1} when the
    /// band is empty or X < 3).
    Canonical,
    /// Canonical λ with the band and normalization replaced.
    Override {
        lo: BandEnd,
        hi: BandEnd,
        normalization: NormRule,
    },
}

impl ResonatorMode {
    /// Stable label used in report rows; holds no commas.
    pub fn label(&self) -> String {
        match self {
            ResonatorMode::Canonical => "canonical".into(),
            ResonatorMode::Override { lo, hi, normalization } => {
                let end = |e: &BandEnd| match e {
                    BandEnd::Fixed(v) => v.to_string(),
                    BandEnd::X => "x".into(),
                };
                let norm = match normalization {
                    NormRule::SqrtP => "",
                    NormRule::SqrtQLiteral => "+sqrt_q",
                };
                format!("band[{};{}]{}", end(lo), end(hi), norm)
            }
        }
    }
}

/// A validated sweep plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Ascending, deduplicated, all verified prime.
    pub primes: Vec<u64>,
    pub n_rule: NRule,
    /// Range-check offset δ ∈ (0, 1/100).
    pub delta: f64,
    pub f_specs: Vec<FSpec>,
    pub resonator: ResonatorMode,
    pub output_dir: Option<PathBuf>,
    /// Use the per-character sum path everywhere instead of the transform.
    pub naive_only: bool,
    /// Skip the M2_direct / brute-force stages (M1_direct still runs).
    pub skip_brute_force: bool,
    /// Exact worker count; 1 by default.
    pub threads: usize,
}

pub const DEFAULT_DELTA: f64 = 0.005;

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = match toml::from_str(text) {
            Ok(r) => r,
            Err(e) => return err(format!("TOML parse: {e}")),
        };
        validate(raw)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return err(format!("cannot read {}: {e}", path.display())),
        };
        Config::from_toml_str(&text)
    }
}

/// The first `count` primes ≥ start, ascending.
fn primes_from(start: u64, count: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(count as usize);
    let mut p = start.max(2);
    while (out.len() as u64) < count {
        if is_prime(p) {
            out.push(p);
        }
        p += 1;
    }
    out
}

fn validate(raw: RawConfig) -> Result<Config, ConfigError> {
    let primes = match (raw.primes.list, raw.primes.start, raw.primes.count) {
        (Some(list), None, None) => {
            if list.is_empty() {
                return err("primes.list must not be empty");
            }
            let mut list = list;
            for &p in &list {
                if !is_prime(p) {
                    return err(format!("primes.list: {p} is not prime"));
                }
            }
            list.sort_unstable();
            list.dedup();
            list
        }
        (None, Some(start), Some(count)) => {
            if count < 1 {
                return err("primes.count must be >= 1");
            }
            primes_from(start, count)
        }
        _ => return err("primes: give either list, or start and count"),
    };

    let n_rule = match (raw.n.list, raw.n.alpha) {
        (Some(list), None) => {
            if list.is_empty() {
                return err("n.list must not be empty");
            }
            if list.contains(&0) {
                return err("n.list entries must be >= 1");
            }
            let mut list = list;
            list.sort_unstable();
            list.dedup();
            NRule::List(list)
        }
        (None, Some(alpha)) => {
            if !(alpha > 0.0 && alpha <= 0.5) {
                return err("n.alpha must lie in (0, 1/2]");
            }
            NRule::Power { alpha }
        }
        _ => return err("n: give either list or alpha"),
    };

    let delta = raw.delta.unwrap_or(DEFAULT_DELTA);
    if !(delta > 0.0 && delta < 0.01) {
        return err("delta must lie in (0, 1/100)");
    }

    if raw.f.is_empty() {
        return err("at least one [[f]] block is required");
    }
    let mut f_specs = Vec::with_capacity(raw.f.len());
    for rf in &raw.f {
        let kind = match (rf.kind.as_str(), rf.t) {
            ("ones", None) => CoefficientKind::Ones,
            ("random_sign", None) => CoefficientKind::RandomSign,
            ("random_unimodular", None) => CoefficientKind::RandomUnimodular,
            ("archimedean", Some(t)) => {
                if !t.is_finite() {
                    return err("f.t must be finite");
                }
                CoefficientKind::Archimedean { t }
            }
            ("archimedean", None) => return err("f: kind archimedean requires t"),
            (k, Some(_)) if matches!(k, "ones" | "random_sign" | "random_unimodular") => {
                return err(format!("f: t is only valid for archimedean, not {k}"))
            }
            (k, _) => return err(format!("f.kind {k:?} is not a preset")),
        };
        f_specs.push(FSpec {
            kind,
            seed: rf.seed.unwrap_or(0),
        });
    }

    let resonator = match raw.resonator {
        None => ResonatorMode::Canonical,
        Some(rr) => match rr.mode.as_str() {
            "canonical" => {
                if rr.band.is_some() || rr.normalization.is_some() {
                    return err("resonator: band/normalization are only valid with mode = \"override\"");
                }
                ResonatorMode::Canonical
            }
            "override" => {
                let band = match rr.band {
                    Some(b) => b,
                    None => return err("resonator: mode = \"override\" requires band"),
                };
                let end = |e: &RawBandEnd| -> Result<BandEnd, ConfigError> {
                    match e {
                        RawBandEnd::Fixed(v) => Ok(BandEnd::Fixed(*v)),
                        RawBandEnd::Tag(s) if s == "x" => Ok(BandEnd::X),
                        RawBandEnd::Tag(s) => {
                            err(format!("resonator.band: {s:?} is not a number or \"x\""))
                        }
                    }
                };
                let normalization = match rr.normalization.as_deref() {
                    None | Some("sqrt_p") => NormRule::SqrtP,
                    Some("sqrt_q_literal") => NormRule::SqrtQLiteral,
                    Some(other) => {
                        return err(format!(
                            "resonator.normalization {other:?} is not sqrt_p or sqrt_q_literal"
                        ))
                    }
                };
                ResonatorMode::Override {
                    lo: end(&band[0])?,
                    hi: end(&band[1])?,
                    normalization,
                }
            }
            other => return err(format!("resonator.mode {other:?} is not canonical or override")),
        },
    };

    let flags = raw.flags.unwrap_or(RawFlags {
        naive_only: None,
        skip_brute_force: None,
        threads: None,
    });
    let threads = flags.threads.unwrap_or(1);
    if threads < 1 {
        return err("flags.threads must be >= 1");
    }

    Ok(Config {
        primes,
        n_rule,
        delta,
        f_specs,
        resonator,
        output_dir: raw.output.map(|o| PathBuf::from(o.dir)),
        naive_only: flags.naive_only.unwrap_or(false),
        skip_brute_force: flags.skip_brute_force.unwrap_or(false),
        threads: threads as usize,
    })
}
