use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use okounkov::criteria::largest_simplex_constant;
use okounkov::okounkov::okounkov_polygon;
use okounkov::suite::{run_suite, Suite, SuiteConfig};
use okounkov::svg::{render_scene, SvgLayer};
use okounkov::{cones, load_model, standard_simplex, zariski};
use okounkov::{DivisorClass, Error, Rat, SurfaceModel};

/// Exact Zariski decompositions, Newton-Okounkov polygons and positivity
/// verification on polyhedral surface models.
#[derive(Parser)]
#[command(name = "okounkov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cone membership verdict plus volume and Zariski decomposition
    Classify {
        /// model file (JSON)
        #[arg(long)]
        model: PathBuf,
        /// divisor coefficients, comma-separated rationals ("1,1" or "1/2,-3")
        #[arg(long)]
        divisor: String,
        /// write the verdict as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Newton-Okounkov polygon of a big divisor along a flag
    Polygon {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        divisor: String,
        /// flag id from the model file
        #[arg(long)]
        flag: String,
        /// write an SVG rendering (polygon plus inscribed simplex)
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// write the vertex list as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run verification suites and report agreement
    Verify {
        #[arg(long)]
        model: PathBuf,
        /// all, theoremA, theoremB, theoremC, slice, nested, multiplicity,
        /// augmented, sigma, oracle
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        json: Option<PathBuf>,
        /// per-check rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// big classes sampled per suite
        #[arg(long)]
        classes: Option<usize>,
        /// pin the slice suite to this parameter value
        #[arg(long)]
        t: Option<String>,
        /// simplex size for the augmented-sequence suite
        #[arg(long)]
        eps: Option<String>,
        /// toric refinement level compared against level 1
        #[arg(long)]
        m: Option<u32>,
        /// highest multiple tried in the augmented-sequence suite
        #[arg(long)]
        p_max: Option<usize>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::CatalogInsufficient(_) => 3,
        _ => 2,
    }
}

fn read_model(path: &PathBuf) -> Result<SurfaceModel, String> {
    let doc = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    load_model(&doc).map_err(|e| e.to_string())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("writing {}: {e}", path.display()))
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify {
            model,
            divisor,
            json,
        } => {
            let m = read_model(&model).map_err(|e| (2, e))?;
            let d = DivisorClass::parse_csv(&divisor).map_err(|e| (2, e.to_string()))?;
            classify(&m, &d, json.as_ref()).map_err(|e| (exit_code_for(&e), e.to_string()))
        }
        Command::Polygon {
            model,
            divisor,
            flag,
            svg,
            json,
            csv,
        } => {
            let m = read_model(&model).map_err(|e| (2, e))?;
            let d = DivisorClass::parse_csv(&divisor).map_err(|e| (2, e.to_string()))?;
            polygon(&m, &d, &flag, svg.as_ref(), json.as_ref(), csv.as_ref())
                .map_err(|e| (exit_code_for(&e), e.to_string()))
        }
        Command::Verify {
            model,
            suite,
            json,
            csv,
            seed,
            classes,
            t,
            eps,
            m,
            p_max,
        } => {
            let surface = read_model(&model).map_err(|e| (2, e))?;
            let which = Suite::parse(&suite).map_err(|e| (2, e.to_string()))?;
            let mut cfg = SuiteConfig::default();
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(classes) = classes {
                cfg.classes = classes;
            }
            if let Some(t) = t {
                cfg.slice_t = Some(Rat::parse(&t).map_err(|e| (2, e.to_string()))?);
            }
            if let Some(eps) = eps {
                cfg.eps_simplex = Rat::parse(&eps).map_err(|e| (2, e.to_string()))?;
            }
            if let Some(m) = m {
                cfg.oracle_level = m;
            }
            if let Some(p_max) = p_max {
                cfg.p_max = p_max;
            }
            verify(&surface, which, &cfg, json.as_ref(), csv.as_ref())
        }
    }
}

fn classify(
    model: &SurfaceModel,
    d: &DivisorClass,
    json_path: Option<&PathBuf>,
) -> okounkov::Result<()> {
    let verdict = cones::classify(model, d)?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    println!("divisor {d}");
    match &verdict.witness {
        Some(w) if !verdict.pseudoeffective => {
            println!("  pseudoeffective: no  (witness {w})");
        }
        _ => println!("  pseudoeffective: {}", yn(verdict.pseudoeffective)),
    }
    let mut payload = json!({
        "divisor": d,
        "verdict": verdict,
    });
    if verdict.pseudoeffective {
        let vol = zariski::volume(model, d)?;
        let z = zariski::zariski_decompose(model, d)?;
        println!("  big:             {}  (volume {vol})", yn(verdict.big));
        match &verdict.witness {
            Some(w) if !verdict.nef => println!("  nef:             no  (witness {w})"),
            _ => println!("  nef:             {}", yn(verdict.nef)),
        }
        println!("  ample:           {}", yn(verdict.ample));
        let negative: Vec<String> = z
            .negative
            .iter()
            .map(|(id, c)| format!("{c}*{id}"))
            .collect();
        println!(
            "  zariski: P = {}, N = {}",
            z.positive,
            if negative.is_empty() {
                "0".to_string()
            } else {
                negative.join(" + ")
            }
        );
        payload["volume"] = json!(vol);
        payload["zariski"] = json!({
            "positive": z.positive,
            "negative": z.negative,
        });
    } else {
        println!("  big:             no");
        println!("  nef:             no");
        println!("  ample:           no");
    }
    if let Some(path) = json_path {
        fs::write(path, serde_json::to_string_pretty(&payload).unwrap())
            .map_err(|e| Error::Validation(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn polygon(
    model: &SurfaceModel,
    d: &DivisorClass,
    flag_id: &str,
    svg_path: Option<&PathBuf>,
    json_path: Option<&PathBuf>,
    csv_path: Option<&PathBuf>,
) -> okounkov::Result<()> {
    let flag = model.flag(flag_id)?.clone();
    let poly = okounkov_polygon(model, d, &flag)?;
    let lambda = largest_simplex_constant(model, d, &flag)?.lambda;
    let area = poly.area();
    let min_sum = poly.min_sum()?;

    println!("polygon of {d} along flag {flag_id}");
    for (x, y) in poly.vertices() {
        println!("  ({x}, {y})");
    }
    println!("  area {area}, min-sum {min_sum}, largest simplex {lambda}");

    if let Some(path) = json_path {
        let payload = json!({
            "divisor": d,
            "flag": flag_id,
            "polygon": poly,
            "area": area,
            "min_sum": min_sum,
            "lambda": lambda,
        });
        fs::write(path, serde_json::to_string_pretty(&payload).unwrap())
            .map_err(|e| Error::Validation(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = csv_path {
        let mut out = String::from("nu1,nu2\n");
        for (x, y) in poly.vertices() {
            out.push_str(&format!("{x},{y}\n"));
        }
        fs::write(path, out)
            .map_err(|e| Error::Validation(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = svg_path {
        let simplex = standard_simplex(&lambda);
        let mut layers = vec![SvgLayer {
            polygon: &poly,
            fill: "#cfe3f7",
            stroke: "#17527f",
            label: "okounkov polygon",
        }];
        if lambda.is_positive() {
            layers.push(SvgLayer {
                polygon: &simplex,
                fill: "#f7ddb0",
                stroke: "#a86408",
                label: "largest inscribed simplex",
            });
        }
        fs::write(path, render_scene(&layers))
            .map_err(|e| Error::Validation(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(
    model: &SurfaceModel,
    suite: Suite,
    cfg: &SuiteConfig,
    json_path: Option<&PathBuf>,
    csv_path: Option<&PathBuf>,
) -> Result<(), (u8, String)> {
    let outcomes =
        run_suite(model, suite, cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;

    let mut all_agree = true;
    for outcome in &outcomes {
        println!(
            "suite {:<14} {:>4}/{} checks agree",
            outcome.suite, outcome.passed, outcome.total
        );
        if let Some(failure) = outcome.first_failure() {
            all_agree = false;
            println!(
                "  FIRST DISAGREEMENT: {}",
                serde_json::to_string_pretty(failure).unwrap()
            );
        }
    }

    if let Some(path) = json_path {
        write_file(path, &serde_json::to_string_pretty(&outcomes).unwrap())
            .map_err(|e| (2, e))?;
    }
    if let Some(path) = csv_path {
        let mut out = String::from("suite,criterion,left,right,agree\n");
        for outcome in &outcomes {
            for check in &outcome.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    outcome.suite, check.criterion, check.left, check.right, check.agree
                ));
            }
        }
        write_file(path, &out).map_err(|e| (2, e))?;
    }

    if all_agree {
        Ok(())
    } else {
        Err((1, "verification found a disagreement".to_string()))
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
