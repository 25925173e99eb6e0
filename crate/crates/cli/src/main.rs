//! `troplin`: generators of (invariant) linear systems on tropical curves
//! from JSON documents.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use troplin::json::{self as tj, Bundle, BundlePaths, Diagnostic};
use troplin::{build_quotient, decompose_chip_firing, Degree, EdgeImage, Error, LinearSystem};

#[derive(Parser)]
#[command(name = "troplin", version, about = "Linear systems on tropical curves, with and without symmetry")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Inputs {
    /// Curve document.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Divisor document.
    #[arg(long)]
    divisor: Option<PathBuf>,
    /// Group document; its model is the curve when `--curve` is omitted.
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Set {
    R,
    Rk,
    S,
    Sk,
    Extremal,
}

#[derive(Subcommand)]
enum Cmd {
    /// List generators of R(D) (by default the set S(D)).
    Gens {
        #[command(flatten)]
        inputs: Inputs,
        /// Generators S(D)_K of the invariant part.
        #[arg(long)]
        invariant: bool,
        /// Only the extremals of the invariant part.
        #[arg(long)]
        minimal: bool,
    },
    /// Test membership of a function.
    Check {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "in", value_enum)]
        set: Set,
        #[arg(long)]
        function: PathBuf,
    },
    /// Write a function as a tropical combination of generators.
    Express {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        function: PathBuf,
    },
    /// Write a function as a constant plus chip-firing moves.
    Decompose {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// The quotient curve and the quotient morphism.
    Quotient {
        #[arg(long)]
        group: PathBuf,
    },
    /// Summary of the inputs.
    Info {
        #[command(flatten)]
        inputs: Inputs,
    },
}

enum Failure {
    Input(Vec<Diagnostic>),
    Library(Error),
}

impl From<Vec<Diagnostic>> for Failure {
    fn from(d: Vec<Diagnostic>) -> Self {
        Failure::Input(d)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<Json, Failure>;

fn load(inputs: &Inputs, functions: &[PathBuf]) -> Result<Bundle, Failure> {
    let paths = BundlePaths {
        curve: inputs.curve.clone(),
        divisor: inputs.divisor.clone(),
        group: inputs.group.clone(),
        functions: functions.to_vec(),
    };
    Ok(tj::parse_bundle(&paths)?)
}

fn system(b: &Bundle) -> Result<LinearSystem, Failure> {
    let Some(d) = b.divisor.clone() else {
        return Err(Failure::Input(vec![Diagnostic {
            location: "arguments".into(),
            error: Error::Invalid("--divisor is required".into()),
        }]));
    };
    Ok(LinearSystem::new(b.curve.clone(), d, b.group.as_ref().map(|g| g.0.clone()))?)
}

fn gens(inputs: &Inputs, invariant: bool, minimal: bool) -> Outcome {
    let sys = system(&load(inputs, &[])?)?;
    let set = if minimal {
        sys.minimal_generators()?
    } else if invariant {
        sys.enumerate_sk()?
    } else {
        sys.enumerate_s()?
    };
    Ok(Json::Array(set.functions.iter().map(tj::function_to_json).collect()))
}

fn check(inputs: &Inputs, set: Set, function: &PathBuf) -> Outcome {
    let b = load(inputs, std::slice::from_ref(function))?;
    let sys = system(&b)?;
    let f = &b.functions[0];
    let member = match set {
        Set::R => sys.in_r(f)?,
        Set::Rk => sys.in_rk(f)?,
        Set::S => sys.in_s(f)?,
        Set::Sk => sys.in_sk(f)?,
        Set::Extremal => sys.is_extremal_invariant(f)?,
    };
    Ok(json!({"member": member}))
}

fn express(inputs: &Inputs, function: &PathBuf) -> Outcome {
    let b = load(inputs, std::slice::from_ref(function))?;
    let sys = system(&b)?;
    let gens = sys.enumerate_sk()?;
    let comb = sys.express(&b.functions[0], &gens)?;
    let terms: Vec<Json> = comb
        .terms
        .iter()
        .map(|(i, c)| json!({"coefficient": tj::rational_to_json(c), "generator": tj::function_to_json(&gens.functions[*i])}))
        .collect();
    Ok(json!({"terms": terms}))
}

fn decompose(curve: &Path, function: &Path) -> Outcome {
    let inputs = Inputs { curve: Some(curve.to_path_buf()), divisor: None, group: None };
    let b = load(&inputs, &[function.to_path_buf()])?;
    let d = decompose_chip_firing(&b.functions[0])?;
    let terms: Vec<Json> = d
        .terms
        .iter()
        .map(|(m, k)| {
            json!({
                "source": tj::subgraph_to_json(&b.curve, &m.source),
                "reach": tj::length_to_json(&m.reach),
                "coeff": k,
            })
        })
        .collect();
    Ok(json!({"constant": tj::rational_to_json(&d.constant), "terms": terms}))
}

fn quotient(group: &Path) -> Outcome {
    let inputs = Inputs { curve: None, divisor: None, group: Some(group.to_path_buf()) };
    let b = load(&inputs, &[])?;
    let q = build_quotient(&b.group.expect("group given").0)?;
    let phi = &q.phi;
    let (src, tgt) = (phi.source(), phi.target());
    let mut vertex_map = serde_json::Map::new();
    for (v, &w) in phi.vertex_map().iter().enumerate() {
        vertex_map.insert(src.vertex(v).id.clone(), json!(tgt.vertex(w).id));
    }
    let mut edge_map = serde_json::Map::new();
    let mut dilations = serde_json::Map::new();
    for (e, img) in phi.edge_map().iter().enumerate() {
        let id = src.edge(e).id.clone();
        if let EdgeImage::Edge { target, reversed, dilation } = *img {
            edge_map.insert(id.clone(), json!({"to": tgt.edge(target).id, "reversed": reversed}));
            dilations.insert(id, json!(dilation));
        }
    }
    let degree = match q.degree() {
        Degree::Finite(d) => json!(d),
        Degree::Any => json!("any"),
    };
    Ok(json!({
        "quotient": tj::curve_to_json(tgt),
        "model": tj::curve_to_json(src),
        "phi": {"vertex_map": vertex_map, "edge_map": edge_map, "dilations": dilations},
        "degree": degree,
    }))
}

fn info(inputs: &Inputs) -> Outcome {
    let b = load(inputs, &[])?;
    let c: &Arc<troplin::Curve> = &b.curve;
    let mut out = json!({
        "curve": {
            "vertices": c.num_vertices(),
            "edges": c.num_edges(),
            "genus": c.genus(),
            "points_at_infinity": c.vertices().iter().filter(|v| v.at_infinity).count(),
        }
    });
    if let Some(d) = &b.divisor {
        out["divisor"] = json!({"degree": d.degree(), "effective": d.is_effective()});
    }
    if let Some((g, _)) = &b.group {
        let mut gi = json!({"order": g.order()});
        if let Some(d) = &b.divisor {
            gi["divisor_invariant"] = json!(g.is_invariant_divisor(d));
        }
        out["group"] = gi;
    }
    Ok(out)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Gens { inputs, invariant, minimal } => gens(inputs, *invariant, *minimal),
        Cmd::Check { inputs, set, function } => check(inputs, *set, function),
        Cmd::Express { inputs, function } => express(inputs, function),
        Cmd::Decompose { curve, function } => decompose(curve, function),
        Cmd::Quotient { group } => quotient(group),
        Cmd::Info { inputs } => info(inputs),
    }
}

fn render(v: &Json, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        v.to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            println!("{}", render(&v, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(ds)) => {
            let errors: Vec<Json> = ds
                .iter()
                .map(|d| json!({"location": d.location, "code": d.error.code(), "message": d.error.to_string()}))
                .collect();
            eprintln!("{}", render(&json!({"errors": errors}), cli.pretty));
            ExitCode::from(2)
        }
        Err(Failure::Library(e)) => {
            let code = if e.is_precondition() { 3 } else if is_input(&e) { 2 } else { 1 };
            eprintln!("{}", render(&json!({"errors": [{"code": e.code(), "message": e.to_string()}]}), cli.pretty));
            ExitCode::from(code)
        }
    }
}

/// Library errors that still mean the documents were inconsistent.
fn is_input(e: &Error) -> bool {
    !matches!(e, Error::SearchLimit(_) | Error::Enumeration(_) | Error::GroupNotFinite(_))
}
