use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use symgraph::acceptance::{Runner, CRITERIA};
use symgraph::bases::change_of_basis_matrix;
use symgraph::classify::{classify_report, ClassifyConfig};
use symgraph::discriminant::disc_nk;
use symgraph::graphs::{canonical_form, enumerate_multigraphs, GraphJson};
use symgraph::linopt::{cone_membership, ConeResult, GENERATOR_RULE};
use symgraph::polyalg::{Partition, SymPolyJson};
use symgraph::positivity::{find_sos, SosCertificate, SosCertificateJson, SosOutcome, SosSearchConfig};
use symgraph::rational;
use symgraph::symgm::{coeff_by_coloring, symmetrized_graph_monomial};
use symgraph::{Error, Multigraph, SymPoly};

/// Environment variable naming the directory for default-named artifacts.
const ARTIFACT_ENV: &str = "SYMGRAPH_ARTIFACT_DIR";
const DEFAULT_ARTIFACT_DIR: &str = "artifacts";

#[derive(Parser)]
#[command(name = "symgraph", version, about = "Exact computations with symmetrized graph monomials")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized battery.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a CSV summary instead of JSON where one exists.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all multigraphs with d edges up to isomorphism, one graph JSON per line.
    Enumerate {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetrize a graph in n variables.
    Symgm {
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One m-basis coefficient, by expansion and by counting colorings.
    Coeff {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<u32>,
        #[arg(long)]
        n: usize,
    },
    /// Square graphs written in the partition-graph basis.
    Bases {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Discriminant of the k-th derivative of a degree-n polynomial, in its roots.
    Disc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Defaults to disc_n{n}_k{k}.json in the artifact directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact membership in the cone of symmetrized square graphs.
    Cone {
        /// Defaults to the `disc` artifact with matching degree and n.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Sum-of-squares certificates.
    Sos {
        #[command(subcommand)]
        action: SosAction,
    },
    /// Classify all d-edge graphs at 2d variables.
    Classify {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory receiving one certificate file per class.
        #[arg(long)]
        emit_certs: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Acceptance {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum SosAction {
    /// Check a certificate exactly against a target.
    Verify {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Search for a certificate in the given number of variables.
    Find {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Projection iterations per SOS attempt.
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    /// Variable counts tried by the SOS search.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
    tiers: Vec<usize>,
}

impl SearchArgs {
    fn sos(&self) -> SosSearchConfig {
        SosSearchConfig { iterations: self.iterations, ..SosSearchConfig::default() }
    }

    fn classify(&self, seed: u64) -> ClassifyConfig {
        ClassifyConfig { seed, sos: self.sos(), tiers: self.tiers.clone() }
    }
}

/// Failure carried to `main`: an error kind plus message, or a check that ran
/// and failed.
enum Failure {
    Error(Error),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Error(Error::Json(e))
    }
}

type CliResult<T> = Result<T, Failure>;

fn artifact_dir() -> PathBuf {
    std::env::var_os(ARTIFACT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_ARTIFACT_DIR))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Error(Error::Parse(format!("cannot read {}: {e}", path.display()))))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string(value)? + "\n")
}

/// Prints to stdout and, when requested, writes the same text to `out`.
fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    if let Some(p) = out {
        write_file(p, text)?;
    }
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn read_graph(path: &Path) -> CliResult<Multigraph> {
    let j: GraphJson = read_json(path)?;
    Ok(Multigraph::from_json(&j)?)
}

fn read_sympoly(path: &Path) -> CliResult<SymPoly> {
    let j: SymPolyJson = read_json(path)?;
    Ok(SymPoly::from_json(&j)?)
}

fn sympoly_csv(p: &SymPoly) -> String {
    let mut s = String::from("partition,coefficient\n");
    for (l, c) in p.coeffs() {
        let parts: Vec<String> = l.parts().iter().map(u32::to_string).collect();
        s.push_str(&format!("{},{}\n", parts.join(" "), rational::format(c)));
    }
    s
}

fn emit_sympoly(p: &SymPoly, csv: bool, out: Option<&Path>) -> CliResult<()> {
    let json = to_json(&p.to_json())?;
    if let Some(o) = out {
        write_file(o, &json)?;
    }
    let shown = if csv { sympoly_csv(p) } else { json };
    std::io::stdout().write_all(shown.as_bytes())?;
    Ok(())
}

/// `k` with `deg D_{n,k} = d`, i.e. `(n-k)(n-k-1) = d`.
fn derivative_order(d: u32, n: usize) -> Option<usize> {
    (2..=n).find(|&m| m * (m - 1) == d as usize).map(|m| n - m)
}

fn run(cli: Cli) -> CliResult<()> {
    let csv = cli.csv;
    match cli.command {
        Command::Enumerate { d, out } => {
            let graphs = enumerate_multigraphs(d);
            let text = if csv {
                let mut s = String::from("key,n,edges\n");
                for g in &graphs {
                    let edges: Vec<String> = g.edges().map(|(i, j, m)| format!("{}-{}x{}", i + 1, j + 1, m)).collect();
                    s.push_str(&format!("{},{},{}\n", canonical_form(g).to_hex(), g.n_vertices(), edges.join(" ")));
                }
                s
            } else {
                let mut s = String::new();
                for g in &graphs {
                    s.push_str(&to_json(&g.to_json())?);
                }
                s
            };
            emit(&text, out.as_deref())
        }
        Command::Symgm { graph, n, out } => {
            let g = read_graph(&graph)?;
            emit_sympoly(&symmetrized_graph_monomial(&g, n)?, csv, out.as_deref())
        }
        Command::Coeff { graph, alpha, n } => {
            let g = read_graph(&graph)?;
            let lambda = Partition::new(alpha.clone());
            if lambda.sum() != g.edge_count() {
                return Err(Error::DegreeMismatch { partition: alpha, degree: g.edge_count() }.into());
            }
            let s = symmetrized_graph_monomial(&g, n)?;
            let by_expansion = s.coeff_of(&alpha)?;
            let by_coloring = coeff_by_coloring(&g, &lambda, n)?;
            if by_expansion != by_coloring {
                return Err(Failure::Check(format!(
                    "expansion gives {} but coloring gives {}",
                    rational::format(&by_expansion),
                    rational::format(&by_coloring)
                )));
            }
            let text = to_json(&json!({
                "alpha": lambda.parts(),
                "n": n,
                "expansion": rational::format(&by_expansion),
                "coloring": rational::format(&by_coloring),
            }))?;
            emit(&text, None)
        }
        Command::Bases { d, n, emit: path } => {
            let m = change_of_basis_matrix(d, n)?;
            emit(&to_json(&m.to_json())?, path.as_deref())
        }
        Command::Disc { n, k, out } => {
            let s = disc_nk(n, k)?;
            let path = out.unwrap_or_else(|| artifact_dir().join(format!("disc_n{n}_k{k}.json")));
            emit_sympoly(&s, csv, Some(&path))
        }
        Command::Cone { target, d, n, emit: path } => {
            let target = match target {
                Some(t) => t,
                None => {
                    let k = derivative_order(d, n).ok_or_else(|| {
                        Failure::Usage(format!("no --target given and no discriminant of degree {d} in {n} variables"))
                    })?;
                    artifact_dir().join(format!("disc_n{n}_k{k}.json"))
                }
            };
            let t = read_sympoly(&target)?;
            let r = cone_membership(&t, d, n)?;
            let j = r.to_json();
            let text = if csv {
                let mut s = format!("# {GENERATOR_RULE}\nkey,weight\n");
                for term in &j.terms {
                    s.push_str(&format!("{},{}\n", term.key, term.weight));
                }
                s
            } else {
                to_json(&j)?
            };
            if let Some(p) = &path {
                write_file(p, &to_json(&j)?)?;
            }
            std::io::stdout().write_all(text.as_bytes())?;
            match r {
                ConeResult::Member(_) => Ok(()),
                ConeResult::Infeasible(_) => Err(Failure::Check("target is not in the square cone".into())),
            }
        }
        Command::Sos { action: SosAction::Verify { target, cert } } => {
            let t = read_sympoly(&target)?;
            let j: SosCertificateJson = read_json(&cert)?;
            let c = SosCertificate::from_json(&j)?;
            let outcome = c.check(&t);
            let text = to_json(&json!({
                "valid": outcome.is_ok(),
                "scale": rational::format(&c.scale),
                "reason": outcome.as_ref().err(),
            }))?;
            emit(&text, None)?;
            outcome.map_err(Failure::Check)
        }
        Command::Sos { action: SosAction::Find { target, vars, out, search } } => {
            let t = read_sympoly(&target)?;
            match find_sos(&t, vars, &search.sos())? {
                SosOutcome::Certificate(c) => emit(&to_json(&c.to_json())?, out.as_deref()),
                SosOutcome::Unknown(reason) => emit(&to_json(&json!({ "status": "unknown", "reason": reason }))?, None),
            }
        }
        Command::Classify { d, out, emit_certs, search } => {
            let cfg = search.classify(cli.seed);
            let r = classify_report(d, &cfg)?;
            r.verify(&cfg)?;
            let json = to_json(&r.to_json())?;
            if let Some(o) = &out {
                write_file(o, &json)?;
            }
            if let Some(dir) = &emit_certs {
                fs::create_dir_all(dir)?;
                for (name, value) in r.certificate_files() {
                    write_file(&dir.join(name), &to_json(&value)?)?;
                }
            }
            let shown = if csv { r.to_csv() } else { json };
            std::io::stdout().write_all(shown.as_bytes())?;
            Ok(())
        }
        Command::Acceptance { only, out, search } => {
            let mut runner = Runner::new(search.classify(cli.seed));
            let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|(i, _)| *i).collect() } else { only };
            let mut outcomes = Vec::new();
            for id in ids {
                outcomes.push(runner.run(id)?);
            }
            let text = if csv {
                let mut s = String::from("criterion,title,result\n");
                for o in &outcomes {
                    s.push_str(&format!("{},{},{}\n", o.id, o.title, if o.passed { "PASS" } else { "FAIL" }));
                }
                s
            } else {
                outcomes.iter().map(|o| format!("{o}\n")).collect()
            };
            std::io::stdout().write_all(text.as_bytes())?;
            if let Some(o) = &out {
                let list: Vec<_> = outcomes
                    .iter()
                    .map(|o| json!({ "criterion": o.id, "title": o.title, "passed": o.passed, "summary": o.summary, "details": o.details }))
                    .collect();
                write_file(o, &to_json(&list)?)?;
            }
            let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(format!("failed criteria: {}", failed.join(", "))))
            }
        }
    }
}

fn report(kind: &str, message: &str) {
    let _ = writeln!(std::io::stderr(), "{}", json!({ "error": kind, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            report("usage", &e.to_string());
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            report(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            report("usage", &m);
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            report("check_failed", &m);
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_order_from_degree() {
        assert_eq!(derivative_order(6, 3), Some(0));
        assert_eq!(derivative_order(12, 5), Some(1));
        assert_eq!(derivative_order(7, 5), None);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
