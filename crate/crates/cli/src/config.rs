//! Job configuration: the `key = value` file format and its validation.
//!
//! ```text
//! # comments start with '#'
//! [problem]
//! kind = "converge"
//! domain = 0, 1
//! phi = "x"
//! epsilon = 0.2, 0.1, 0.05, 0.025
//! nx = 400
//! nt = 8
//! n = 2000
//! num_eigs = 3
//!
//! [output]
//! csv = "converge.csv"
//! json = "converge.json"
//! ```
//!
//! Strings are double-quoted, numbers are bare, lists are comma-separated.
//! Unknown sections or keys, duplicates and keys a job does not use are all
//! errors. Command-line flags go through the same validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use drift_spectra_core::experiments::GapConvention;
use drift_spectra_core::{IntervalDomain, SolveOptions, SolverKind, WeightSpec};
use serde::{Serialize, Serializer};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PAIRS: usize = 100;
pub const DEFAULT_TRIALS: usize = 100;

/// Relative tolerance on the ratio of consecutive epsilons.
const GEOMETRIC_TOL: f64 = 1e-9;

const PROBLEM_KEYS: [&str; 15] = [
    "kind",
    "domain",
    "phi",
    "f",
    "epsilon",
    "nx",
    "nt",
    "n",
    "num_eigs",
    "tol",
    "solver",
    "seed",
    "convention",
    "pairs",
    "trials",
];
const OUTPUT_KEYS: [&str; 2] = ["csv", "json"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}` given twice")]
    DuplicateKey { key: String },
    #[error("missing required key `{key}` for {kind} jobs")]
    MissingKey { key: &'static str, kind: JobKind },
    #[error("key `{key}` is not used by {kind} jobs")]
    NotApplicable { key: String, kind: JobKind },
    #[error("exactly one of phi/f must be given")]
    WeightConflict,
    #[error("malformed {expected} for `{key}`: {value}")]
    Malformed {
        key: String,
        expected: &'static str,
        value: String,
    },
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobKind {
    Drift,
    Dirichlet,
    Thin,
    Converge,
    Corollary1,
    Prop2,
    Gapcheck,
    Residual,
    Prop4,
}

impl JobKind {
    pub const ALL: [JobKind; 9] = [
        JobKind::Drift,
        JobKind::Dirichlet,
        JobKind::Thin,
        JobKind::Converge,
        JobKind::Corollary1,
        JobKind::Prop2,
        JobKind::Gapcheck,
        JobKind::Residual,
        JobKind::Prop4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            JobKind::Drift => "drift",
            JobKind::Dirichlet => "dirichlet",
            JobKind::Thin => "thin",
            JobKind::Converge => "converge",
            JobKind::Corollary1 => "corollary1",
            JobKind::Prop2 => "prop2",
            JobKind::Gapcheck => "gapcheck",
            JobKind::Residual => "residual",
            JobKind::Prop4 => "prop4",
        }
    }

    pub fn parse(text: &str) -> Option<JobKind> {
        JobKind::ALL.into_iter().find(|k| k.as_str() == text)
    }

    /// Problem keys the job reads besides `kind` and the solver settings
    /// `tol`, `solver` and `seed`, which every job accepts.
    fn keys(self) -> &'static [&'static str] {
        match self {
            JobKind::Drift | JobKind::Dirichlet => &["domain", "phi", "f", "n", "num_eigs"],
            JobKind::Thin | JobKind::Residual => &["domain", "phi", "f", "epsilon", "nx", "nt", "num_eigs"],
            JobKind::Converge => &["domain", "phi", "f", "epsilon", "nx", "nt", "n", "num_eigs"],
            JobKind::Corollary1 => &["domain", "epsilon", "nx", "nt", "n", "num_eigs"],
            JobKind::Prop2 => &["domain", "n", "num_eigs"],
            JobKind::Gapcheck => &["domain", "phi", "f", "n", "pairs", "convention"],
            JobKind::Prop4 => &["domain", "phi", "f", "n", "num_eigs", "trials"],
        }
    }

    /// Whether the job takes a weight, and whether it may be omitted.
    fn weight_rule(self) -> WeightRule {
        match self {
            JobKind::Dirichlet => WeightRule::Optional,
            JobKind::Corollary1 | JobKind::Prop2 => WeightRule::Unused,
            _ => WeightRule::Required,
        }
    }

    /// Spectrum jobs accept `num_eigs = 0` and produce an empty table.
    pub fn allows_zero_eigs(self) -> bool {
        matches!(self, JobKind::Drift | JobKind::Dirichlet | JobKind::Thin)
    }

    /// Jobs whose epsilon list must be descending and geometric.
    fn needs_eps_sequence(self) -> bool {
        matches!(self, JobKind::Converge | JobKind::Residual | JobKind::Corollary1)
    }
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightRule {
    Required,
    Optional,
    Unused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Auto,
    Dense,
    Iterative,
}

impl SolverChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Dense => "dense",
            SolverChoice::Iterative => "iterative",
        }
    }

    pub fn parse(text: &str) -> Option<SolverChoice> {
        [SolverChoice::Auto, SolverChoice::Dense, SolverChoice::Iterative]
            .into_iter()
            .find(|s| s.as_str() == text)
    }

    fn kind(self) -> SolverKind {
        match self {
            SolverChoice::Auto => SolverKind::Auto,
            SolverChoice::Dense => SolverKind::Dense,
            SolverChoice::Iterative => SolverKind::Iterative,
        }
    }
}

pub fn parse_convention(text: &str) -> Option<GapConvention> {
    [GapConvention::ModelConsistent, GapConvention::Literal]
        .into_iter()
        .find(|c| c.as_str() == text)
}

fn serialize_convention<S: Serializer>(c: &GapConvention, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.as_str())
}

/// Weight expression as written by the user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightText {
    Phi(String),
    F(String),
}

impl WeightText {
    pub fn to_spec(&self) -> drift_spectra_core::Result<WeightSpec> {
        match self {
            WeightText::Phi(text) => WeightSpec::parse_phi(text),
            WeightText::F(text) => WeightSpec::parse_f(text),
        }
    }
}

/// A fully validated job. Fields a job kind does not use keep their
/// defaults (`None`, empty, or the documented constants).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobConfig {
    pub kind: JobKind,
    pub domain: [f64; 2],
    pub weight: Option<WeightText>,
    pub epsilon: Vec<f64>,
    pub nx: Option<usize>,
    pub nt: Option<usize>,
    pub n: Option<usize>,
    pub num_eigs: Option<usize>,
    pub tol: f64,
    pub solver: SolverChoice,
    pub seed: u64,
    #[serde(serialize_with = "serialize_convention")]
    pub convention: GapConvention,
    pub pairs: usize,
    pub trials: usize,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl JobConfig {
    pub fn interval(&self) -> drift_spectra_core::Result<IntervalDomain> {
        IntervalDomain::new(self.domain[0], self.domain[1])
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            solver: self.solver.kind(),
            tol: self.tol,
            seed: self.seed,
            ..SolveOptions::default()
        }
    }

    /// The value of a key that validation guarantees is present.
    pub fn required(&self, value: Option<usize>) -> usize {
        value.expect("validated config carries every required key")
    }
}

/// A raw value: a quoted string or a comma-separated list of bare tokens.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Text(String),
    List(Vec<String>),
}

impl RawValue {
    fn describe(&self) -> String {
        match self {
            RawValue::Text(s) => format!("\"{s}\""),
            RawValue::List(items) => items.join(", "),
        }
    }
}

/// Keys and raw values before validation, in the form both the file
/// parser and the command line produce.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    problem: BTreeMap<String, RawValue>,
    output: BTreeMap<String, RawValue>,
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_problem(&mut self, key: &str, value: RawValue) -> Result<(), ConfigError> {
        insert(&mut self.problem, &PROBLEM_KEYS, key, value)
    }

    pub fn set_output(&mut self, key: &str, value: RawValue) -> Result<(), ConfigError> {
        insert(&mut self.output, &OUTPUT_KEYS, key, value)
    }
}

fn insert(
    map: &mut BTreeMap<String, RawValue>,
    allowed: &[&str],
    key: &str,
    value: RawValue,
) -> Result<(), ConfigError> {
    if !allowed.contains(&key) {
        return Err(ConfigError::UnknownKey { key: key.to_string() });
    }
    if map.insert(key.to_string(), value).is_some() {
        return Err(ConfigError::DuplicateKey { key: key.to_string() });
    }
    Ok(())
}

/// Read and validate a config file.
pub fn load_config(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_config(&text)
}

/// Parse and validate config text.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    validate(parse_raw(text)?)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Problem,
    Output,
}

pub fn parse_raw(text: &str) -> Result<RawConfig, ConfigError> {
    let mut raw = RawConfig::new();
    let mut section = Section::None;
    for (index, full_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = strip_comment(full_line).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: "unterminated section header".into(),
            })?;
            section = match name.trim() {
                "problem" => Section::Problem,
                "output" => Section::Output,
                other => {
                    return Err(ConfigError::UnknownSection {
                        line: line_no,
                        name: other.to_string(),
                    })
                }
            };
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        if key.is_empty() || !key.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("invalid key `{key}`"),
            });
        }
        let value = parse_value(value.trim()).map_err(|message| ConfigError::Syntax { line: line_no, message })?;
        match section {
            Section::None => {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: "key outside of a [problem] or [output] section".into(),
                })
            }
            Section::Problem => raw.set_problem(key, value)?,
            Section::Output => raw.set_output(key, value)?,
        }
    }
    Ok(raw)
}

/// Drop a `#` comment that is not inside a quoted string.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_value(text: &str) -> Result<RawValue, String> {
    if text.is_empty() {
        return Err("missing value".into());
    }
    if let Some(rest) = text.strip_prefix('"') {
        let inner = rest.strip_suffix('"').ok_or("unterminated string")?;
        if inner.contains('"') {
            return Err("unexpected quote inside string".into());
        }
        return Ok(RawValue::Text(inner.to_string()));
    }
    let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err("empty list item".into());
    }
    if let Some(bad) = items.iter().find(|s| s.contains(char::is_whitespace) || s.contains('"')) {
        return Err(format!("unquoted value `{bad}` (strings must be quoted)"));
    }
    Ok(RawValue::List(items))
}

struct Fields {
    kind: JobKind,
    values: BTreeMap<String, RawValue>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<RawValue> {
        self.values.remove(key)
    }

    fn text(&mut self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(RawValue::Text(s)) => Ok(Some(s)),
            Some(other) => Err(ConfigError::Malformed {
                key: key.to_string(),
                expected: "quoted string",
                value: other.describe(),
            }),
        }
    }

    fn numbers<T: std::str::FromStr>(&mut self, key: &str, expected: &'static str) -> Result<Option<Vec<T>>, ConfigError> {
        let malformed = |value: String| ConfigError::Malformed {
            key: key.to_string(),
            expected,
            value,
        };
        match self.take(key) {
            None => Ok(None),
            Some(RawValue::Text(s)) => Err(malformed(format!("\"{s}\""))),
            Some(RawValue::List(items)) => items
                .iter()
                .map(|s| s.parse::<T>().map_err(|_| malformed(s.clone())))
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str, expected: &'static str) -> Result<Option<T>, ConfigError> {
        match self.numbers::<T>(key, expected)? {
            None => Ok(None),
            Some(mut v) if v.len() == 1 => Ok(v.pop()),
            Some(_) => Err(ConfigError::Malformed {
                key: key.to_string(),
                expected,
                value: "a list".into(),
            }),
        }
    }

    fn count(&mut self, key: &'static str, required: bool) -> Result<Option<usize>, ConfigError> {
        let value = self.single::<usize>(key, "non-negative integer")?;
        if required && value.is_none() {
            return Err(ConfigError::MissingKey { key, kind: self.kind });
        }
        Ok(value)
    }
}

/// Check a raw config against the rules of its job kind.
pub fn validate(raw: RawConfig) -> Result<JobConfig, ConfigError> {
    let RawConfig { mut problem, mut output } = raw;
    let kind_text = match problem.remove("kind") {
        None => {
            return Err(ConfigError::Invalid {
                key: "kind",
                reason: "missing; expected one of drift, dirichlet, thin, converge, corollary1, prop2, gapcheck, residual, prop4"
                    .into(),
            })
        }
        Some(RawValue::Text(s)) => s,
        Some(other) => {
            return Err(ConfigError::Malformed {
                key: "kind".into(),
                expected: "quoted string",
                value: other.describe(),
            })
        }
    };
    let kind = JobKind::parse(&kind_text).ok_or_else(|| ConfigError::Invalid {
        key: "kind",
        reason: format!("unknown job kind `{kind_text}`"),
    })?;
    for key in problem.keys() {
        let common = matches!(key.as_str(), "tol" | "solver" | "seed");
        if !common && !kind.keys().contains(&key.as_str()) {
            return Err(ConfigError::NotApplicable { key: key.clone(), kind });
        }
    }
    let mut fields = Fields { kind, values: problem };

    let domain = match fields.numbers::<f64>("domain", "number")? {
        None => [0.0, 1.0],
        Some(v) if v.len() == 2 => [v[0], v[1]],
        Some(v) => {
            return Err(ConfigError::Invalid {
                key: "domain",
                reason: format!("expected two endpoints, got {}", v.len()),
            })
        }
    };
    if !(domain[0] < domain[1]) || !domain.iter().all(|x| x.is_finite()) {
        return Err(ConfigError::Invalid {
            key: "domain",
            reason: format!("need finite a < b, got [{}, {}]", domain[0], domain[1]),
        });
    }

    let phi = fields.text("phi")?;
    let f = fields.text("f")?;
    let weight = match (phi, f) {
        (Some(_), Some(_)) => return Err(ConfigError::WeightConflict),
        (Some(p), None) => Some(WeightText::Phi(p)),
        (None, Some(f)) => Some(WeightText::F(f)),
        (None, None) => None,
    };
    if weight.is_none() && kind.weight_rule() == WeightRule::Required {
        return Err(ConfigError::WeightConflict);
    }
    if let Some(w) = &weight {
        w.to_spec().map_err(|e| ConfigError::Invalid {
            key: if matches!(w, WeightText::Phi(_)) { "phi" } else { "f" },
            reason: e.to_string(),
        })?;
    }

    let uses = |key: &str| kind.keys().contains(&key);
    let epsilon = fields.numbers::<f64>("epsilon", "number")?.unwrap_or_default();
    if uses("epsilon") {
        validate_epsilon(kind, &epsilon)?;
    }
    let nx = fields.count("nx", uses("nx"))?;
    let nt = fields.count("nt", uses("nt"))?;
    let n = fields.count("n", uses("n"))?;
    let num_eigs = fields.count("num_eigs", uses("num_eigs"))?;
    if num_eigs == Some(0) && !kind.allows_zero_eigs() {
        return Err(ConfigError::Invalid {
            key: "num_eigs",
            reason: format!("{kind} jobs need at least one eigenpair"),
        });
    }
    let pairs = fields.count("pairs", false)?.unwrap_or(DEFAULT_PAIRS);
    let trials = fields.count("trials", false)?.unwrap_or(DEFAULT_TRIALS);

    let tol = fields.single::<f64>("tol", "number")?.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ConfigError::Invalid {
            key: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let solver = match fields.text("solver")? {
        None => SolverChoice::Auto,
        Some(s) => SolverChoice::parse(&s).ok_or_else(|| ConfigError::Invalid {
            key: "solver",
            reason: format!("expected auto, dense or iterative, got `{s}`"),
        })?,
    };
    let seed = fields.single::<u64>("seed", "non-negative integer")?.unwrap_or(DEFAULT_SEED);
    let convention = match fields.text("convention")? {
        None => GapConvention::ModelConsistent,
        Some(s) => parse_convention(&s).ok_or_else(|| ConfigError::Invalid {
            key: "convention",
            reason: format!("expected model-consistent or literal, got `{s}`"),
        })?,
    };
    debug_assert!(fields.values.is_empty(), "every accepted key is consumed");

    let path = |key: &str, output: &mut BTreeMap<String, RawValue>| match output.remove(key) {
        None => Ok(None),
        Some(RawValue::Text(s)) if !s.is_empty() => Ok(Some(PathBuf::from(s))),
        Some(other) => Err(ConfigError::Malformed {
            key: key.to_string(),
            expected: "quoted path",
            value: other.describe(),
        }),
    };
    let csv = path("csv", &mut output)?;
    let json = path("json", &mut output)?;

    Ok(JobConfig {
        kind,
        domain,
        weight,
        epsilon,
        nx,
        nt,
        n,
        num_eigs,
        tol,
        solver,
        seed,
        convention,
        pairs,
        trials,
        csv,
        json,
    })
}

fn validate_epsilon(kind: JobKind, eps: &[f64]) -> Result<(), ConfigError> {
    let invalid = |reason: String| ConfigError::Invalid { key: "epsilon", reason };
    if eps.is_empty() {
        return Err(ConfigError::MissingKey { key: "epsilon", kind });
    }
    if let Some(bad) = eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(invalid(format!("values must be positive, got {bad}")));
    }
    if kind == JobKind::Thin && eps.len() != 1 {
        return Err(invalid(format!("thin jobs take one value, got {}", eps.len())));
    }
    if kind.needs_eps_sequence() {
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(invalid("list must be strictly descending".into()));
        }
        if let Some(first) = eps.windows(2).next().map(|w| w[1] / w[0]) {
            if eps.windows(2).any(|w| ((w[1] / w[0]) / first - 1.0).abs() > GEOMETRIC_TOL) {
                return Err(invalid("list must be geometric (constant ratio)".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[problem]\nkind = \"drift\"\ndomain = 0, 1\nphi = \"x\"\nn = 200\nnum_eigs = 5\n";

    #[test]
    fn minimal_drift_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.kind, JobKind::Drift);
        assert_eq!(c.domain, [0.0, 1.0]);
        assert_eq!(c.weight, Some(WeightText::Phi("x".into())));
        assert_eq!((c.n, c.num_eigs), (Some(200), Some(5)));
        assert_eq!(c.tol, 1e-8);
        assert_eq!(c.solver, SolverChoice::Auto);
        assert_eq!(c.seed, 42);
        assert_eq!((c.csv.clone(), c.json.clone()), (None, None));
    }

    #[test]
    fn epsilon_list_parses_in_order() {
        let text = "[problem]\nkind = \"converge\"\nphi = \"x\"\nepsilon = 0.2, 0.1, 0.05, 0.025\nnx = 40\nnt = 4\nn = 100\nnum_eigs = 3\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.epsilon, vec![0.2, 0.1, 0.05, 0.025]);
    }

    #[test]
    fn both_weights_is_an_error() {
        let text = format!("{MINIMAL}f = \"1\"\n");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err, ConfigError::WeightConflict);
        assert_eq!(err.to_string(), "exactly one of phi/f must be given");
    }

    #[test]
    fn strictness() {
        let typo = format!("{MINIMAL}epsilonn = 0.1\n");
        assert!(matches!(parse_config(&typo), Err(ConfigError::UnknownKey { .. })));
        let unused = format!("{MINIMAL}nx = 10\n");
        assert!(matches!(parse_config(&unused), Err(ConfigError::NotApplicable { .. })));
        let dup = format!("{MINIMAL}n = 10\n");
        assert!(matches!(parse_config(&dup), Err(ConfigError::DuplicateKey { .. })));
        let section = format!("{MINIMAL}[extra]\n");
        assert!(matches!(parse_config(&section), Err(ConfigError::UnknownSection { line: 7, .. })));
        let unquoted = MINIMAL.replace("\"x\"", "x");
        assert!(matches!(parse_config(&unquoted), Err(ConfigError::Malformed { .. })));
        let bad_number = MINIMAL.replace("200", "2e2.5");
        assert!(matches!(parse_config(&bad_number), Err(ConfigError::Malformed { .. })));
        let missing = MINIMAL.replace("n = 200\n", "");
        assert!(matches!(parse_config(&missing), Err(ConfigError::MissingKey { key: "n", .. })));
        assert!(matches!(parse_config("kind = \"drift\"\n"), Err(ConfigError::Syntax { line: 1, .. })));
    }

    #[test]
    fn epsilon_sequences_are_checked() {
        let base = "[problem]\nkind = \"residual\"\nphi = \"x\"\nnx = 40\nnt = 4\nnum_eigs = 2\n";
        let ok = format!("{base}epsilon = 0.1, 0.05, 0.025\n");
        assert!(parse_config(&ok).is_ok());
        let ascending = format!("{base}epsilon = 0.025, 0.05, 0.1\n");
        assert!(matches!(parse_config(&ascending), Err(ConfigError::Invalid { key: "epsilon", .. })));
        let uneven = format!("{base}epsilon = 0.1, 0.05, 0.01\n");
        assert!(matches!(parse_config(&uneven), Err(ConfigError::Invalid { key: "epsilon", .. })));
    }

    #[test]
    fn comments_quotes_and_outputs() {
        let text = "# job\n[problem]\nkind = \"gapcheck\" # trailing\nf = \"sin(pi*x)\"\nn = 100\nconvention = \"literal\"\n[output]\njson = \"out #1.json\"\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.convention, GapConvention::Literal);
        assert_eq!(c.pairs, DEFAULT_PAIRS);
        assert_eq!(c.json, Some(PathBuf::from("out #1.json")));
    }

    #[test]
    fn weight_text_is_checked_early() {
        let text = MINIMAL.replace("\"x\"", "\"x +\"");
        assert!(matches!(parse_config(&text), Err(ConfigError::Invalid { key: "phi", .. })));
    }
}
