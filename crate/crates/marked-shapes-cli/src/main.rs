//! Command-line front end: build and export the named objects, triangulate
//! and cubify them, query markings, and run the verification registry.
//!
//! Exit codes: `0` success, `1` a verification reported failures, `2` a
//! descriptor, lemma name or cell could not be resolved, `3` a size or
//! dimension budget was exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use marked_shapes::cones_q::{cone_complex, cone_subobjects, q_functor, q_object};
use marked_shapes::cubical_core::{make_cube_object, CubicalStandard, MarkedCubicalComplex};
use marked_shapes::lemma_harness::{lemma_ids, verify, xi_complexes, LemmaReport};
use marked_shapes::simplicial_core::{make_standard, MarkedSimplicialComplex, SimplicialStandard};
use marked_shapes::triangulation::triangulate;
use marked_shapes::Error;

#[derive(Parser)]
#[command(
    name = "marked-shapes",
    version,
    about = "Build, triangulate, cubify and verify marked shapes."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON instead of the human-readable form.
    #[arg(long)]
    json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Decline to build objects with more cells than this.
    #[arg(long, value_name = "CELLS", default_value_t = 200_000)]
    budget_cells: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    /// Every verification capped at ambient dimension 3.
    Quick,
    /// The full per-verification dimensions.
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named object and emit its cell data as JSON.
    ///
    /// Descriptors: `Delta n | mDelta n | horn n k | adelta n k |
    /// adelta' n k | Delta3eq | L | L' | cube n | mcube n | bdcube n |
    /// obox n i e | comical n i e | comical' n i e | strong n i |
    /// Gamma n i j | Lxy x y | cone m n | B m n | Cbar m n | Q n | Xi n i`,
    /// with a leading `T` (or a `T-` prefix) for the triangulation of a
    /// cubical object.
    Build {
        descriptor: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Triangulate a cubical object and emit the simplicial result.
    Tri {
        descriptor: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply the cubification functor to a simplicial object.
    Cubify {
        descriptor: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Answer whether a named cell of an object is marked.
    Marked {
        descriptor: String,
        cell: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one registered verification.
    Verify {
        lemma: String,
        /// Ambient dimension to verify up to.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every registered verification at its profile dimensions.
    Suite {
        #[arg(long, value_enum, default_value_t = Profile::Quick)]
        profile: Profile,
        /// Cap every verification at this ambient dimension.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn lib_failure(err: Error) -> Failure {
    let code = match err {
        Error::Budget(_) => 3,
        _ => 2,
    };
    fail(code, err.to_string())
}

enum Object {
    Simplicial(MarkedSimplicialComplex),
    Cubical(MarkedCubicalComplex),
}

impl Object {
    fn total_cells(&self) -> usize {
        match self {
            Object::Simplicial(x) => x.total_cells(),
            Object::Cubical(x) => x.total_cells(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Object::Simplicial(x) => {
                serde_json::json!({ "kind": "simplicial", "object": x.to_json() })
            }
            Object::Cubical(x) => {
                serde_json::json!({ "kind": "cubical", "object": x.to_json() })
            }
        }
    }

    fn marked(&self, cell: &str) -> Option<bool> {
        match self {
            Object::Simplicial(x) => x.find_cell(cell).map(|id| x.is_marked(id)),
            Object::Cubical(x) => x.find_cell(cell).map(|id| x.is_marked(id)),
        }
    }
}

fn parse_descriptor(text: &str) -> Result<Object, Failure> {
    let tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    let Some((head, rest)) = tokens.split_first() else {
        return Err(fail(2, "empty object descriptor"));
    };
    // A leading `T` (or a `T-` prefix on the name) triangulates a cubical
    // descriptor.
    let triangulated = head == "T" || head.starts_with("T-");
    if triangulated {
        let inner = if head == "T" {
            rest.join(" ")
        } else {
            let mut parts = vec![head["T-".len()..].to_string()];
            parts.extend(rest.iter().cloned());
            parts.join(" ")
        };
        return match parse_descriptor(&inner)? {
            Object::Cubical(x) => Ok(Object::Simplicial(triangulate(&x))),
            Object::Simplicial(_) => {
                Err(fail(2, format!("`T` needs a cubical descriptor in `{text}`")))
            }
        };
    }
    let name = match head.to_ascii_lowercase().as_str() {
        "comical-cube" => "comical".to_string(),
        other => other.to_string(),
    };
    let arg = |k: usize| -> Result<usize, Failure> {
        rest.get(k)
            .ok_or_else(|| fail(2, format!("descriptor `{text}` is missing a parameter")))?
            .parse::<usize>()
            .map_err(|_| fail(2, format!("non-numeric parameter in `{text}`")))
    };
    let eps = |k: usize| -> Result<u8, Failure> {
        match arg(k)? {
            0 => Ok(0),
            1 => Ok(1),
            other => Err(fail(2, format!("sign {other} in `{text}` must be 0 or 1"))),
        }
    };
    let expect_arity = |want: usize| -> Result<(), Failure> {
        if rest.len() == want {
            Ok(())
        } else {
            Err(fail(2, format!("`{head}` takes {want} parameter(s), got {}", rest.len())))
        }
    };
    let simplicial = |kind: SimplicialStandard| -> Result<Object, Failure> {
        make_standard(kind).map(Object::Simplicial).map_err(lib_failure)
    };
    let cubical = |kind: CubicalStandard| -> Result<Object, Failure> {
        make_cube_object(kind).map(Object::Cubical).map_err(lib_failure)
    };
    match name.as_str() {
        "delta" => {
            expect_arity(1)?;
            simplicial(SimplicialStandard::Delta(arg(0)?))
        }
        "mdelta" => {
            expect_arity(1)?;
            simplicial(SimplicialStandard::MDelta(arg(0)?))
        }
        "horn" => {
            expect_arity(2)?;
            simplicial(SimplicialStandard::Horn(arg(0)?, arg(1)?))
        }
        "adelta" => {
            expect_arity(2)?;
            simplicial(SimplicialStandard::ADelta(arg(0)?, arg(1)?))
        }
        "adelta'" => {
            expect_arity(2)?;
            simplicial(SimplicialStandard::ADeltaPrime(arg(0)?, arg(1)?))
        }
        "delta3eq" => {
            expect_arity(0)?;
            simplicial(SimplicialStandard::Delta3Eq)
        }
        "l" => {
            expect_arity(0)?;
            simplicial(SimplicialStandard::L)
        }
        "l'" => {
            expect_arity(0)?;
            simplicial(SimplicialStandard::LPrime)
        }
        "cube" => {
            expect_arity(1)?;
            cubical(CubicalStandard::Cube(arg(0)?))
        }
        "mcube" => {
            expect_arity(1)?;
            cubical(CubicalStandard::MCube(arg(0)?))
        }
        "bdcube" => {
            expect_arity(1)?;
            cubical(CubicalStandard::Boundary(arg(0)?))
        }
        "obox" => {
            expect_arity(3)?;
            cubical(CubicalStandard::OpenBox(arg(0)?, arg(1)?, eps(2)?))
        }
        "comical" => {
            expect_arity(3)?;
            cubical(CubicalStandard::Comical(arg(0)?, arg(1)?, eps(2)?))
        }
        "comical'" => {
            expect_arity(3)?;
            cubical(CubicalStandard::ComicalPrime(arg(0)?, arg(1)?, eps(2)?))
        }
        "strong" => {
            expect_arity(2)?;
            cubical(CubicalStandard::StrongComical(arg(0)?, arg(1)?))
        }
        "gamma" => {
            expect_arity(3)?;
            cubical(CubicalStandard::Gamma(arg(0)?, arg(1)?, arg(2)?))
        }
        "lxy" => {
            expect_arity(2)?;
            cubical(CubicalStandard::LRezk(arg(0)?, arg(1)?))
        }
        "cone" => {
            expect_arity(2)?;
            cone_complex(arg(0)?, arg(1)?, false).map(Object::Cubical).map_err(lib_failure)
        }
        "b" => {
            expect_arity(2)?;
            let (b, _, _) = cone_subobjects(arg(0)?, arg(1)?).map_err(lib_failure)?;
            Ok(Object::Cubical(b))
        }
        "cbar" => {
            expect_arity(2)?;
            let (_, cbar, _) = cone_subobjects(arg(0)?, arg(1)?).map_err(lib_failure)?;
            Ok(Object::Cubical(cbar))
        }
        "q" => {
            expect_arity(1)?;
            q_object(arg(0)?, false).map(Object::Cubical).map_err(lib_failure)
        }
        "xi" => {
            expect_arity(2)?;
            let (xi, _, _) = xi_complexes(arg(0)?, arg(1)?).map_err(lib_failure)?;
            Ok(Object::Simplicial(xi))
        }
        _ => Err(fail(2, format!("unknown object `{head}`"))),
    }
}

fn check_budget(object: &Object, budget: &BudgetArgs) -> Result<(), Failure> {
    let cells = object.total_cells();
    if cells > budget.budget_cells {
        return Err(fail(
            3,
            format!("object has {cells} cells, over the budget of {}", budget.budget_cells),
        ));
    }
    Ok(())
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| fail(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Resolve a lemma name, accepting any unambiguous fragment of the
/// registered identifier (letter case and separators ignored).
fn resolve_lemma(query: &str) -> Result<&'static str, Failure> {
    if let Some(&id) = lemma_ids().iter().find(|&&id| id == query) {
        return Ok(id);
    }
    let norm = |s: &str| -> String {
        s.chars().filter(char::is_ascii_alphanumeric).collect::<String>().to_ascii_lowercase()
    };
    let wanted = norm(query);
    let hits: Vec<&'static str> = if wanted.is_empty() {
        Vec::new()
    } else {
        lemma_ids().iter().copied().filter(|id| norm(id).contains(&wanted)).collect()
    };
    match hits.as_slice() {
        [only] => Ok(only),
        [] => Err(fail(
            2,
            format!("unknown lemma `{query}`; registered: {}", lemma_ids().join(", ")),
        )),
        many => Err(fail(2, format!("ambiguous lemma `{query}`; matches: {}", many.join(", ")))),
    }
}

fn report_line(report: &LemmaReport) -> String {
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let params = if report.params.is_empty() {
        String::new()
    } else {
        format!(" n={}", report.params["n"])
    };
    format!(
        "{verdict} {}{params} cases={} failures={} ({} ms)",
        report.lemma,
        report.cases,
        report.failures.len(),
        report.millis
    )
}

fn render_report(report: &LemmaReport, json: bool) -> String {
    if json {
        return report.to_json().to_string();
    }
    let mut lines = vec![report_line(report)];
    for failure in &report.failures {
        lines.push(format!("  {failure}"));
    }
    lines.join("\n")
}

/// The dimension the full suite verifies a lemma at; sized so the whole
/// run stays within a few minutes.
fn suite_dim(lemma: &str) -> usize {
    match lemma {
        "face-preserve-order" => 4,
        "N-bijection" => 5,
        "N-order" | "N-linearization" => 4,
        "N-omega" | "omega-face" | "omega-linearization" => 5,
        "disordered-marked" | "disordered-face" => 5,
        "disordered-complicial" => 4,
        "comical-triangulation-marking" => 4,
        "Omega-complicial" => 5,
        "Box-marking" => 4,
        "open-box-xi-anodyne" => 4,
        "xi-cube-anodyne" => 4,
        "marking-extension-anodyne" => 4,
        "strong-comical-degens" => 4,
        "strong-comical-iso" => 4,
        "strong-comical-anodyne" => 4,
        _ => 0,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build { descriptor, budget, output } => {
            let object = parse_descriptor(&descriptor)?;
            check_budget(&object, &budget)?;
            emit(&output, &object.to_json().to_string())
        }
        Command::Tri { descriptor, budget, output } => {
            let object = match parse_descriptor(&descriptor)? {
                Object::Cubical(x) => Object::Simplicial(triangulate(&x)),
                Object::Simplicial(_) => {
                    return Err(fail(2, format!("`{descriptor}` is already simplicial")));
                }
            };
            check_budget(&object, &budget)?;
            emit(&output, &object.to_json().to_string())
        }
        Command::Cubify { descriptor, budget, output } => {
            let object = match parse_descriptor(&descriptor)? {
                Object::Simplicial(x) => {
                    Object::Cubical(q_functor(&x).map_err(lib_failure)?)
                }
                Object::Cubical(_) => {
                    return Err(fail(2, format!("`{descriptor}` is already cubical")));
                }
            };
            check_budget(&object, &budget)?;
            emit(&output, &object.to_json().to_string())
        }
        Command::Marked { descriptor, cell, budget, output } => {
            let object = parse_descriptor(&descriptor)?;
            check_budget(&object, &budget)?;
            let Some(marked) = object.marked(&cell) else {
                return Err(fail(2, format!("no cell named `{cell}` in `{descriptor}`")));
            };
            let text = if output.json {
                serde_json::json!({
                    "descriptor": descriptor,
                    "cell": cell,
                    "marked": marked,
                })
                .to_string()
            } else {
                (if marked { "marked" } else { "unmarked" }).to_string()
            };
            emit(&output, &text)
        }
        Command::Verify { lemma, n, output } => {
            let id = resolve_lemma(&lemma)?;
            let report = verify(id, n).map_err(lib_failure)?;
            emit(&output, &render_report(&report, output.json))?;
            if report.passed() {
                Ok(())
            } else {
                Err(fail(1, format!("{} failed on {} case(s)", id, report.failures.len())))
            }
        }
        Command::Suite { profile, n, output } => {
            let mut reports = Vec::new();
            for &lemma in lemma_ids() {
                let mut dim = suite_dim(lemma);
                if profile == Profile::Quick {
                    dim = dim.min(3);
                }
                if let Some(cap) = n {
                    dim = dim.min(cap);
                }
                reports.push(verify(lemma, dim).map_err(lib_failure)?);
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let text = if output.json {
                let entries: Vec<serde_json::Value> =
                    reports.iter().map(LemmaReport::to_json).collect();
                serde_json::json!({ "reports": entries, "failed": failed }).to_string()
            } else {
                let mut lines: Vec<String> =
                    reports.iter().map(|r| render_report(r, false)).collect();
                let total: u64 = reports.iter().map(|r| r.millis).sum();
                lines.push(format!(
                    "suite: {} passed, {failed} failed ({total} ms)",
                    reports.len() - failed
                ));
                lines.join("\n")
            };
            emit(&output, &text)?;
            if failed == 0 {
                Ok(())
            } else {
                Err(fail(1, format!("{failed} verification(s) failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
