//! Command-line surface over the graph library.
//!
//! Every subcommand writes exactly one JSON document to standard output
//! and a short human summary to standard error. Graph-producing commands
//! (`catalog`, `blowup-vertex`, `blowup-edge`, `glue`) emit the bare graph
//! document so they can be piped straight into the analysis commands;
//! analysis commands emit reports carrying a `schema` field. Exit codes:
//! 0 success, 1 domain error (invalid graph, failed assertion), 2 usage or
//! parse error. `-` denotes standard input. All numbers are exact integer
//! or `num/den` strings; no floats anywhere.

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use gkm_core::chern::{chern_numbers, equivariant_chern, integrate, todd};
use gkm_core::classify::{enumerate_graphs, WeightData};
use gkm_core::cohomology::{
    component_rank, evaluate_class_expression, ordinary_poincare, verify_presentation, Class,
    Presentation,
};
use gkm_core::constructions::{blowup_edge, blowup_vertex, catalog, glue_s6, CatalogId};
use gkm_core::graph::{validate, GkmGraph};
use gkm_core::octonion::check_report;
use gkm_core::symmetry::{aut_star, cycle_notation, gkm_automorphisms};
use gkm_core::Weight;

#[derive(Parser)]
#[command(name = "gkm", version, about = "Exact computations on GKM graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph axioms; exits 1 when violations are found.
    Validate {
        /// Graph JSON file, or `-` for standard input.
        file: String,
        /// Also require the weights at every vertex to generate the lattice.
        #[arg(long)]
        effective: bool,
    },
    /// Per-degree ranks, ordinary Poincare polynomial, and optionally a
    /// ring-presentation check.
    Cohomology {
        file: String,
        /// Largest topological degree to report.
        #[arg(long)]
        max_degree: usize,
        /// Presentation JSON to verify against the graph.
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Chern numbers and the Todd genus by fixed-point localization.
    Chern { file: String },
    /// Integrate a class expression over the graph.
    Integrate {
        file: String,
        /// Expression over c1, c2, c3 and any names bound with --bind.
        #[arg(long)]
        class: String,
        /// Bind NAME to a class-table JSON file (repeatable).
        #[arg(long, value_name = "NAME=FILE")]
        bind: Vec<String>,
    },
    /// Automorphism group: order and generators.
    Aut {
        file: String,
        /// Also compute the subgroup acting trivially on ordinary cohomology.
        #[arg(long)]
        star: bool,
    },
    /// Blow up a fixed point; emits the new graph.
    BlowupVertex {
        file: String,
        #[arg(long)]
        vertex: String,
    },
    /// Blow up along an edge; emits the new graph.
    BlowupEdge {
        file: String,
        #[arg(long)]
        edge: String,
        /// Index of the connection to use when several exist.
        #[arg(long)]
        connection: Option<usize>,
    },
    /// Fiber-sum two 3-valent graphs along opposite-weight cuts.
    Glue { file_a: String, file_b: String },
    /// Emit a catalog graph: P1, P2, P3, Q1, Q2, S, or S6.
    Catalog {
        family: String,
        /// JSON object with integer-array weights, e.g. {"a":[1,0],"b":[0,1]}.
        #[arg(long)]
        params: String,
    },
    /// Enumerate graphs realizing a weight datum.
    Classify {
        /// Weight-data JSON file.
        #[arg(long)]
        weights: String,
        /// Identify graphs differing by a lattice automorphism.
        #[arg(long)]
        dedup_gl: bool,
    },
    /// Octonion model checks.
    Oct {
        #[command(subcommand)]
        action: OctAction,
    },
}

#[derive(Subcommand)]
enum OctAction {
    /// Run the multiplication-table, isomorphism, automorphism, and
    /// complex-structure checks; exits 1 when any fails.
    Check {
        /// Random samples per randomized check.
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
}

enum Failure {
    /// Bad input; exit 2.
    Parse(String),
    /// Valid input, impossible request; exit 1.
    Domain(String),
    /// The report documents the failure; exit 1 with no extra message.
    Reported,
}

type CliResult = Result<(), Failure>;

fn parse_err(e: impl std::fmt::Display) -> Failure {
    Failure::Parse(e.to_string())
}

fn domain_err(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Parse(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("reading {path}: {e}")))
    }
}

fn load_graph(path: &str) -> Result<GkmGraph, Failure> {
    GkmGraph::from_json(&read_input(path)?).map_err(parse_err)
}

fn emit(doc: &Value) {
    println!("{doc}");
}

fn emit_graph(g: &GkmGraph, summary: &str) {
    emit(&g.to_json_value());
    eprintln!(
        "{summary}: {} vertices, {} edges",
        g.num_vertices(),
        g.edges().len()
    );
}

fn weight_param(obj: &Map<String, Value>, key: &str) -> Result<Weight, Failure> {
    let value = obj
        .get(key)
        .ok_or_else(|| Failure::Parse(format!("params: missing weight `{key}`")))?;
    let arr = value
        .as_array()
        .ok_or_else(|| Failure::Parse(format!("params: `{key}` must be an integer array")))?;
    let coords = arr
        .iter()
        .map(|v| v.as_i64())
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| Failure::Parse(format!("params: `{key}` must be an integer array")))?;
    Ok(Weight::from_ints(&coords))
}

fn catalog_id(family: &str, params: &str) -> Result<CatalogId, Failure> {
    let doc: Value = serde_json::from_str(params).map_err(parse_err)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Failure::Parse("params must be a JSON object".into()))?;
    let expected: &[&str] = match family {
        "P1" => &["a", "b", "c"],
        "P2" | "P3" | "Q1" | "Q2" | "S6" => &["a", "b"],
        "S" => &["a", "b", "k"],
        other => return Err(Failure::Parse(format!("unknown catalog family `{other}`"))),
    };
    for key in obj.keys() {
        if !expected.contains(&key.as_str()) {
            return Err(Failure::Parse(format!(
                "params: `{key}` is not a parameter of {family}"
            )));
        }
    }
    let a = weight_param(obj, "a")?;
    let b = weight_param(obj, "b")?;
    Ok(match family {
        "P1" => CatalogId::P1 {
            a,
            b,
            c: weight_param(obj, "c")?,
        },
        "P2" => CatalogId::P2 { a, b },
        "P3" => CatalogId::P3 { a, b },
        "Q1" => CatalogId::Q1 { a, b },
        "Q2" => CatalogId::Q2 { a, b },
        "S6" => CatalogId::S6 { a, b },
        _ => {
            let k = obj
                .get("k")
                .and_then(Value::as_i64)
                .ok_or_else(|| Failure::Parse("params: `k` must be an integer".into()))?;
            CatalogId::S { a, b, k }
        }
    })
}

/// Exact integer as a JSON number (arbitrary precision).
fn integer_value(text: &str) -> Value {
    serde_json::from_str(text).expect("integer literal")
}

fn run_validate(file: &str, effective: bool) -> CliResult {
    let g = load_graph(file)?;
    let report = validate(&g, effective);
    emit(&json!({
        "schema": "gkm/validate/1",
        "valid": report.is_valid(),
        "valence": report.valence,
        "effectiveness_checked": report.effectiveness_checked,
        "violations": serde_json::to_value(&report.violations).expect("violations"),
    }));
    if report.is_valid() {
        match report.valence {
            Some(v) => eprintln!("valid, {v}-valent"),
            None => eprintln!("valid"),
        }
        Ok(())
    } else {
        eprintln!("invalid: {} violation(s)", report.violations.len());
        Err(Failure::Reported)
    }
}

fn run_cohomology(file: &str, max_degree: usize, presentation: Option<&str>) -> CliResult {
    let g = load_graph(file)?;
    let mut ranks = Vec::new();
    for degree in (0..=max_degree).step_by(2) {
        let rank = component_rank(&g, degree).map_err(domain_err)?;
        ranks.push(json!({"degree": degree, "rank": rank}));
    }
    let poincare = ordinary_poincare(&g, max_degree).map_err(domain_err)?;
    let mut doc = json!({
        "schema": "gkm/cohomology/1",
        "torus_rank": g.torus_rank(),
        "max_degree": max_degree,
        "equivariant_ranks": ranks,
        "ordinary_poincare": poincare,
    });
    let mut failed = false;
    if let Some(path) = presentation {
        let p = Presentation::from_json(&g, &read_input(path)?).map_err(parse_err)?;
        let report = verify_presentation(&g, &p, max_degree).map_err(domain_err)?;
        let spans: Vec<Value> = report
            .spans
            .iter()
            .map(|s| json!({"degree": s.degree, "spanned": s.spanned, "expected": s.expected}))
            .collect();
        doc["presentation"] = json!({
            "ok": report.ok,
            "failures": report.failures,
            "spans": spans,
        });
        failed = !report.ok;
    }
    emit(&doc);
    let betti: Vec<String> = poincare_summary(&doc);
    eprintln!("ordinary Poincare ranks: [{}]", betti.join(", "));
    if failed {
        eprintln!("presentation check FAILED");
        return Err(Failure::Reported);
    }
    if presentation.is_some() {
        eprintln!("presentation check passed");
    }
    Ok(())
}

fn poincare_summary(doc: &Value) -> Vec<String> {
    doc["ordinary_poincare"]
        .as_array()
        .map(|a| a.iter().map(|v| v.to_string()).collect())
        .unwrap_or_default()
}

fn run_chern(file: &str) -> CliResult {
    let g = load_graph(file)?;
    let numbers = chern_numbers(&g).map_err(domain_err)?;
    let genus = todd(&g).map_err(domain_err)?;
    emit(&json!({
        "schema": "gkm/chern/1",
        "c1^3": numbers.c1_cubed.to_string(),
        "c1c2": numbers.c1_c2.to_string(),
        "c3": numbers.c3.to_string(),
        "todd": genus.to_string(),
    }));
    eprintln!(
        "c1^3 = {}, c1c2 = {}, c3 = {}, todd = {}",
        numbers.c1_cubed, numbers.c1_c2, numbers.c3, genus
    );
    Ok(())
}

fn run_integrate(file: &str, class: &str, bind: &[String]) -> CliResult {
    let g = load_graph(file)?;
    let mut env = BTreeMap::new();
    for i in 1..=3usize {
        let c = equivariant_chern(&g, i).map_err(domain_err)?;
        env.insert(format!("c{i}"), c);
    }
    for binding in bind {
        let (name, path) = binding
            .split_once('=')
            .ok_or_else(|| Failure::Parse(format!("--bind `{binding}` is not NAME=FILE")))?;
        let table: BTreeMap<String, String> =
            serde_json::from_str(&read_input(path)?).map_err(parse_err)?;
        let class = Class::from_table(&g, &table).map_err(parse_err)?;
        env.insert(name.to_string(), class);
    }
    let value = evaluate_class_expression(&g, &env, class).map_err(parse_err)?;
    let integral = integrate(&g, &value, false).map_err(domain_err)?;
    emit(&json!({
        "schema": "gkm/integrate/1",
        "class": class,
        "integral": integral.to_string(),
    }));
    eprintln!("integral of {class} = {integral}");
    Ok(())
}

fn run_aut(file: &str, star: bool) -> CliResult {
    let g = load_graph(file)?;
    let group = gkm_automorphisms(&g).map_err(domain_err)?;
    let generators: Vec<Value> = group
        .generators()
        .map(|a| {
            let psi: Vec<Value> = (0..a.psi.rows())
                .flat_map(|i| (0..a.psi.cols()).map(move |j| (i, j)))
                .map(|(i, j)| integer_value(&a.psi.get(i, j).to_string()))
                .collect();
            json!({
                "cycles": cycle_notation(&a.vertex_map, g.vertex_names()),
                "psi": psi,
            })
        })
        .collect();
    let mut doc = json!({
        "schema": "gkm/aut/1",
        "order": group.order(),
        "generators": generators,
    });
    let mut summary = format!("automorphism group of order {}", group.order());
    if star {
        let trivial = aut_star(&g).map_err(domain_err)?;
        doc["aut_star_order"] = json!(trivial.order());
        summary.push_str(&format!(
            ", subgroup trivial on ordinary cohomology of order {}",
            trivial.order()
        ));
    }
    emit(&doc);
    eprintln!("{summary}");
    Ok(())
}

fn run_classify(weights: &str, dedup_gl: bool) -> CliResult {
    let wd = WeightData::from_json(&read_input(weights)?).map_err(parse_err)?;
    let graphs = enumerate_graphs(&wd, dedup_gl).map_err(domain_err)?;
    let docs: Vec<Value> = graphs.iter().map(GkmGraph::to_json_value).collect();
    emit(&json!({
        "schema": "gkm/classify/1",
        "count": graphs.len(),
        "graphs": docs,
    }));
    let scope = if dedup_gl {
        "up to isomorphism and lattice change"
    } else {
        "up to isomorphism"
    };
    eprintln!("{} graph(s) {scope}", graphs.len());
    Ok(())
}

fn run_oct_check(trials: usize) -> CliResult {
    let report = check_report(trials);
    let mut doc = json!({
        "schema": "gkm/oct-check/1",
        "trials": trials,
    });
    let body = report.to_json_value();
    let map = doc.as_object_mut().expect("object");
    for (key, value) in body.as_object().expect("object") {
        map.insert(key.clone(), value.clone());
    }
    emit(&doc);
    let passed = report.items.iter().filter(|i| i.passed).count();
    eprintln!("{passed}/{} checks passed", report.items.len());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Reported)
    }
}

fn run(command: &Command) -> CliResult {
    match command {
        Command::Validate { file, effective } => run_validate(file, *effective),
        Command::Cohomology {
            file,
            max_degree,
            presentation,
        } => run_cohomology(file, *max_degree, presentation.as_deref()),
        Command::Chern { file } => run_chern(file),
        Command::Integrate { file, class, bind } => run_integrate(file, class, bind),
        Command::Aut { file, star } => run_aut(file, *star),
        Command::BlowupVertex { file, vertex } => {
            let g = load_graph(file)?;
            let blown = blowup_vertex(&g, vertex).map_err(domain_err)?;
            emit_graph(&blown, &format!("blow-up at {vertex}"));
            Ok(())
        }
        Command::BlowupEdge {
            file,
            edge,
            connection,
        } => {
            let g = load_graph(file)?;
            let blown = blowup_edge(&g, edge, *connection).map_err(domain_err)?;
            emit_graph(&blown, &format!("blow-up along {edge}"));
            Ok(())
        }
        Command::Glue { file_a, file_b } => {
            let a = load_graph(file_a)?;
            let b = load_graph(file_b)?;
            let glued = glue_s6(&a, &b).map_err(domain_err)?;
            emit_graph(&glued, "glued graph");
            Ok(())
        }
        Command::Catalog { family, params } => {
            let id = catalog_id(family, params)?;
            let g = catalog(&id).map_err(domain_err)?;
            emit_graph(&g, &format!("{family} graph"));
            Ok(())
        }
        Command::Classify { weights, dedup_gl } => run_classify(weights, *dedup_gl),
        Command::Oct { action } => match action {
            OctAction::Check { trials } => run_oct_check(*trials),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reported) => ExitCode::from(1),
        Err(Failure::Domain(message)) => {
            emit(&json!({"schema": "gkm/error/1", "error": message}));
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(message)) => {
            emit(&json!({"schema": "gkm/error/1", "error": message}));
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
