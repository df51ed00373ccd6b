//! Command-line front end: every library operation as a subcommand that reads
//! JSON flags and prints one canonical JSON document.
//!
//! Exit codes: 0 on success, 2 on domain errors (with an
//! `{"error": {"code", "message"}}` document), 1 on usage errors.

mod commands;
mod input;
mod render;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use commands::execute;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(teslerforge::Error),
}

impl From<teslerforge::Error> for CliError {
    fn from(e: teslerforge::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "teslerforge", version, about = "Exact Tesler polytope, deformation cone and flow polytope computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Inputs are inline JSON or `@path` to a JSON file.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Hook vector or net flow
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second vector (comparison target, or inequality right-hand side)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Base hook vector, strictly positive (defaults to all ones)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a0: Option<String>,
    /// Inequality right-hand side on U(n) without the (n,n) entry
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub btilde: Option<String>,
    /// Upper-triangular matrix
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Vertex given as an upper-triangular matrix
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub vertex: Option<String>,
    /// Polytope as {"dim", "eq", "ineq"}
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hrep: Option<String>,
    /// Linear objective to minimize
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub objective: Option<String>,
    /// Row index of the first negative entry (flow witness)
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Write the result to FILE instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<std::path::PathBuf>,
    /// Human-readable output with matrices drawn as triangles
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Largest n for the vertex walk
    #[arg(long, global = true, default_value_t = teslerforge::tesler::DEFAULT_MAX_N)]
    pub max_n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tesler polytopes Tes_n(a)
    #[command(subcommand)]
    Tes(TesCmd),
    /// The deformation cone of Tes_n(a0)
    #[command(subcommand)]
    Defcone(DefconeCmd),
    /// Flow polytopes Flow_n(a)
    #[command(subcommand)]
    Flow(FlowCmd),
    /// Brute-force polytope computations
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum TesCmd {
    /// All vertices of Tes_n(a) (--a)
    Vertices,
    /// Adjacent vertex pairs with their edge vectors (--a)
    Edges,
    /// Hook sum vector of a matrix (--matrix)
    Hooksum,
    /// Support-preserving map from the vertices of Tes_n(a0) to those of Tes_n(a) (--a, --a0)
    DeformMap,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum DefconeCmd {
    /// Cone membership of (a, btilde)
    Check,
    /// Face index of a (--a) or face of the cone containing (a, btilde)
    Face,
    /// Q(a, btilde) as a translated Tesler polytope
    Translate,
    /// Image of a vertex of Tes_n(a0) in Q(a, btilde) (--vertex)
    DeformVertex,
    /// Whether Tes_n(a) is a deformation of Tes_n(b)
    Compare,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum FlowCmd {
    /// Nonemptiness of Flow_n(a)
    Feasible,
    /// Critical position, voided positions and forced entries
    Critical,
    /// Translation to a reduced net flow
    Reduce,
    /// Flow that empties row m (--m, defaults to the first negative entry)
    Witness,
    /// Tight inequality description
    Tight,
    /// Whether Flow_n(a) is a deformation of Tes_n(1, ..., 1)
    Verdict,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum OracleCmd {
    /// Vertices and edges of a polytope (--hrep)
    Vertices,
    /// Minimum of a linear objective (--hrep, --objective)
    Minimize,
    /// Facet-intersection deformation test with right-hand sides --a (equalities) and --b (inequalities)
    IsDeformation,
}

/// Result of one invocation: the exit code and the text for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_document(e: &teslerforge::Error) -> Value {
    json!({"error": {"code": e.code(), "message": e.to_string()}})
}

fn canonical(v: &Value) -> String {
    // serde_json's map is ordered by key, so this is byte-stable.
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, doc) = match execute(&cli.command, &cli.flags) {
        Ok(v) => (0, v),
        Err(CliError::Domain(e)) => (2, error_document(&e)),
        Err(CliError::Usage(msg)) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    let text = if cli.flags.pretty { render::pretty(&doc) } else { canonical(&doc) };
    match &cli.flags.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) },
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}
