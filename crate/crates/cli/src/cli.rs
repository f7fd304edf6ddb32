//! Argument parsing. Subcommand flags are turned into the same raw
//! key/value form a config file produces, so both go through one
//! validator.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config, validate, ConfigError, JobConfig, JobKind, RawConfig, RawValue};
use crate::job::{run_job, EXIT_CONFIG, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "drift-spectra", version, about = "Drift Laplacian and thin-domain spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the job described by a config file.
    Run { config: PathBuf },
    /// Neumann drift spectrum of a weighted interval.
    Drift(Flags),
    /// Dirichlet spectrum of a weighted interval (flat by default).
    Dirichlet(Flags),
    /// Neumann spectrum of a thin domain of height eps * f.
    Thin(Flags),
    /// Thin-domain eigenvalues against the drift limit over an eps list.
    Converge(Flags),
    /// Thin domains over the squared Dirichlet ground state.
    Corollary1(Flags),
    /// Dirichlet gaps against the drift spectrum of the ground-state weight.
    Prop2(Flags),
    /// Pairwise modulus condition and the implied eigenvalue bound.
    Gapcheck(Flags),
    /// Bottom-boundary residual of a thin-domain eigenfunction.
    Residual(Flags),
    /// Partial-sum inequality on random orthogonal trial sets.
    Prop4(Flags),
}

/// Job flags. Values are kept as text and validated with the config rules.
#[derive(Debug, Args)]
struct Flags {
    /// Potential phi(x); the weight is exp(-phi).
    #[arg(long)]
    phi: Option<String>,
    /// Weight or height profile f(x).
    #[arg(long = "f")]
    f: Option<String>,
    /// Interval endpoints.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    domain: Option<Vec<String>>,
    /// Thin-domain epsilon, or a descending geometric list.
    #[arg(long, num_args = 1..)]
    eps: Option<Vec<String>>,
    /// Elements along the base of the thin grid.
    #[arg(long)]
    nx: Option<String>,
    /// Elements across the thin grid.
    #[arg(long)]
    nt: Option<String>,
    /// Elements of the 1D mesh.
    #[arg(long)]
    n: Option<String>,
    /// Number of eigenpairs.
    #[arg(long)]
    k: Option<String>,
    /// Eigensolver tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// auto, dense or iterative.
    #[arg(long)]
    solver: Option<String>,
    /// Seed for start blocks and random trials.
    #[arg(long)]
    seed: Option<String>,
    /// model-consistent or literal (gapcheck).
    #[arg(long)]
    convention: Option<String>,
    /// Sample points per axis of the pair grid (gapcheck).
    #[arg(long)]
    pairs: Option<String>,
    /// Random trial sets (prop4).
    #[arg(long)]
    trials: Option<String>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    csv: Option<String>,
    /// JSON output path.
    #[arg(long)]
    json: Option<String>,
}

impl Flags {
    fn into_config(self, kind: JobKind) -> Result<JobConfig, ConfigError> {
        let mut raw = RawConfig::new();
        raw.set_problem("kind", RawValue::Text(kind.as_str().into()))?;
        let texts = [("phi", self.phi), ("f", self.f), ("solver", self.solver), ("convention", self.convention)];
        for (key, value) in texts {
            if let Some(v) = value {
                raw.set_problem(key, RawValue::Text(v))?;
            }
        }
        let lists = [("domain", self.domain), ("epsilon", self.eps)];
        for (key, value) in lists {
            if let Some(v) = value {
                raw.set_problem(key, RawValue::List(v))?;
            }
        }
        let scalars = [
            ("nx", self.nx),
            ("nt", self.nt),
            ("n", self.n),
            ("num_eigs", self.k),
            ("tol", self.tol),
            ("seed", self.seed),
            ("pairs", self.pairs),
            ("trials", self.trials),
        ];
        for (key, value) in scalars {
            if let Some(v) = value {
                raw.set_problem(key, RawValue::List(vec![v]))?;
            }
        }
        for (key, value) in [("csv", self.csv), ("json", self.json)] {
            if let Some(v) = value {
                raw.set_output(key, RawValue::Text(v))?;
            }
        }
        validate(raw)
    }
}

fn config_for(command: Command) -> Result<JobConfig, ConfigError> {
    let (kind, flags) = match command {
        Command::Run { config } => return load_config(&config),
        Command::Drift(f) => (JobKind::Drift, f),
        Command::Dirichlet(f) => (JobKind::Dirichlet, f),
        Command::Thin(f) => (JobKind::Thin, f),
        Command::Converge(f) => (JobKind::Converge, f),
        Command::Corollary1(f) => (JobKind::Corollary1, f),
        Command::Prop2(f) => (JobKind::Prop2, f),
        Command::Gapcheck(f) => (JobKind::Gapcheck, f),
        Command::Residual(f) => (JobKind::Residual, f),
        Command::Prop4(f) => (JobKind::Prop4, f),
    };
    flags.into_config(kind)
}

/// Parse arguments, run the job and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match config_for(cli.command) {
        Ok(cfg) => run_job(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<JobConfig, ConfigError> {
        let cli = Cli::try_parse_from(std::iter::once("drift-spectra").chain(args.iter().copied())).unwrap();
        config_for(cli.command)
    }

    #[test]
    fn flags_match_config_file() {
        let from_flags = parse(&[
            "converge", "--phi", "x", "--eps", "0.2", "0.1", "0.05", "0.025", "--nx", "40", "--nt", "4", "--n", "100",
            "--k", "3",
        ])
        .unwrap();
        let text = "[problem]\nkind = \"converge\"\nphi = \"x\"\nepsilon = 0.2, 0.1, 0.05, 0.025\nnx = 40\nnt = 4\nn = 100\nnum_eigs = 3\n";
        assert_eq!(from_flags, crate::config::parse_config(text).unwrap());
    }

    #[test]
    fn negative_domain_and_inapplicable_flags() {
        let c = parse(&["drift", "--phi", "x", "--domain", "-1", "1", "--n", "10", "--k", "2"]).unwrap();
        assert_eq!(c.domain, [-1.0, 1.0]);
        let err = parse(&["drift", "--phi", "x", "--n", "10", "--k", "2", "--nx", "4"]).unwrap_err();
        assert!(matches!(err, ConfigError::NotApplicable { .. }));
        let err = parse(&["prop2", "--n", "abc", "--k", "2"]).unwrap_err();
        assert!(matches!(err, ConfigError::Malformed { .. }));
    }
}
