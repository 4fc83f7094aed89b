//! `coha`: command-line front end for the COHA engine.
//!
//! Vertex-indexed input and output (dimension vectors, `w[i,j]`) use the
//! admissible numbering; the renumbering of the quiver file is echoed on
//! stderr. Exit status: 0 PASS, 1 FAIL, 2 input error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coha_core::coha::{self, CohaElement};
use coha_core::modrep::{ModuleType, QuiverContext};
use coha_core::poly::{parse_poly, MPoly, PolyError};
use coha_core::quiver::{DimVector, Quiver};
use coha_core::residue;
use coha_core::roots::positive_roots;
use coha_core::verify::{self, AllConfig, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "coha", version, about = "Exact computations in the COHA of a Dynkin quiver")]
struct Cli {
    /// Quiver file: {"vertices": n, "edges": [[tail, head], ...]}, 1-based.
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive roots, lexicographically.
    Roots,
    /// Positive roots in the admissible order used for module types.
    Order,
    /// Orbits of a dimension vector with their codimensions.
    Orbits {
        #[arg(long)]
        gamma: String,
    },
    /// Codimension of an orbit.
    Codim {
        #[arg(long)]
        orbit: String,
    },
    /// Hom and Ext dimensions between indecomposables.
    Homtable,
    /// Quiver polynomial of an orbit closure.
    Qpoly {
        #[arg(long)]
        orbit: String,
    },
    /// COHA product of two elements.
    Mul {
        #[arg(long)]
        gamma1: String,
        #[arg(long)]
        f1: String,
        #[arg(long)]
        gamma2: String,
        #[arg(long)]
        f2: String,
    },
    /// Residue product of Delta(g) in H_gamma1 with f2, next to the shuffle product.
    ResidueMul {
        #[arg(long)]
        gamma1: String,
        /// Laurent polynomial in a[i,s].
        #[arg(long)]
        g: String,
        #[arg(long)]
        gamma2: String,
        #[arg(long)]
        f2: String,
    },
    /// Restriction of an element of H_gamma to an orbit of gamma.
    Restrict {
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        f: String,
    },
    /// Euler class of the normal space of an orbit, computed two ways.
    Euler {
        #[arg(long)]
        orbit: String,
    },
    /// Dilogarithm identity: product over roots in admissible order vs over simples.
    VerifyReineke {
        #[arg(long)]
        cap: String,
        #[arg(long, default_value_t = coha_core::qseries::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Betti identity: sum of orbit contributions vs the Poincare series of H_gamma.
    VerifyBetti {
        /// Largest |gamma| checked.
        #[arg(long, default_value_t = 5)]
        max_total: u32,
        #[arg(long, default_value_t = coha_core::qseries::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Codimension lemma over all orbits up to a total dimension.
    VerifyCodimLemma {
        #[arg(long, default_value_t = 5)]
        max_total: u32,
    },
    /// Degree-by-degree rank check of the structure map.
    VerifyStructure {
        #[arg(long)]
        gamma: String,
        /// Largest polynomial degree compared.
        #[arg(long)]
        cap: u32,
        /// Factor over the simple roots instead of the positive roots.
        #[arg(long)]
        simple: bool,
    },
    /// Residue product against the shuffle product on random inputs.
    VerifyResidue {
        #[arg(long, default_value_t = 4)]
        max_total: u32,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// All suites with defaults scaled to the quiver.
    VerifyAll {
        #[arg(long, default_value_t = coha_core::qseries::DEFAULT_PRECISION)]
        precision: u32,
        /// Componentwise cap for the dilogarithm identity.
        #[arg(long)]
        cap: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Output of a command: text, JSON, and whether it counts as a failure.
struct Output {
    text: String,
    json: Value,
    failed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, failed: false }
    }
}

fn input_error(msg: impl std::fmt::Display) -> String {
    msg.to_string()
}

fn load_quiver(path: &Option<PathBuf>) -> Result<Quiver, String> {
    let path = path.as_ref().ok_or("--quiver is required")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let q = Quiver::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let perm: Vec<String> = q
        .permutation()
        .iter()
        .enumerate()
        .map(|(old, new)| format!("{}->{}", old + 1, new))
        .collect();
    eprintln!("{} numbering {}", q.dynkin_type(), perm.join(" "));
    Ok(q)
}

fn context(q: Quiver) -> Result<QuiverContext, String> {
    QuiverContext::new(q).map_err(input_error)
}

fn dim(arg: &str, name: &str, q: &Quiver) -> Result<DimVector, String> {
    let d = DimVector::parse(arg).map_err(|e| format!("--{name}: {e}"))?;
    if d.len() != q.vertex_count() {
        return Err(format!("--{name}: expected {} entries, found {}", q.vertex_count(), d.len()));
    }
    Ok(d)
}

fn orbit(arg: &str, ctx: &QuiverContext) -> Result<ModuleType, String> {
    let m = ModuleType::parse(arg).map_err(|e| format!("--orbit: {e}"))?;
    ctx.check_module_type(&m).map_err(|e| format!("--orbit: {e}"))?;
    Ok(m)
}

fn poly(arg: &str, name: &str) -> Result<MPoly, String> {
    parse_poly(arg).map_err(|e| match e {
        PolyError::Parse { column, message } => format!("--{name}: line 1, column {column}: {message}"),
        other => format!("--{name}: {other}"),
    })
}

fn element(gamma: DimVector, arg: &str, name: &str) -> Result<CohaElement, String> {
    CohaElement::new(gamma, poly(arg, name)?).map_err(|e| format!("--{name}: {e}"))
}

fn report_output(reports: Vec<Report>) -> Output {
    let failed = reports.iter().any(|r| !r.passed());
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    let instances: u64 = reports.iter().map(|r| r.instances_checked).sum();
    let counterexample = reports
        .iter()
        .find_map(|r| r.counterexample.as_ref().map(|c| format!("{}: {c}", r.name)));
    let status = if failed { Status::Fail } else { Status::Pass };
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).expect("report serializes")
    } else {
        let mut v = json!({
            "status": status,
            "instances_checked": instances,
            "reports": reports,
        });
        if let Some(c) = counterexample {
            v["counterexample"] = json!(c);
        }
        v
    };
    if reports.len() > 1 {
        let _ = writeln!(text, "{status}: {instances} instances");
    }
    Output { text, json, failed }
}

fn run(cli: &Cli) -> Result<Output, String> {
    let q = load_quiver(&cli.quiver)?;
    match &cli.command {
        Command::Roots => {
            let roots = positive_roots(&q);
            let text = roots.iter().map(|r| format!("{r}\n")).collect();
            Ok(Output::ok(text, json!({ "roots": roots })))
        }
        Command::Order => {
            let ctx = context(q)?;
            let text = (0..ctx.root_count())
                .map(|u| format!("beta_{} = {}\n", u + 1, ctx.root(u)))
                .collect();
            Ok(Output::ok(text, json!({ "order": ctx.root_dims() })))
        }
        Command::Orbits { gamma } => {
            let ctx = context(q)?;
            let g = dim(gamma, "gamma", ctx.quiver())?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for m in ctx.orbits_for(&g).map_err(input_error)? {
                let c = ctx.codim(&m).map_err(input_error)?;
                let _ = writeln!(text, "{m} codim {c}");
                rows.push(json!({ "orbit": m.entries(), "codim": c }));
            }
            Ok(Output::ok(text, json!({ "gamma": g, "orbits": rows })))
        }
        Command::Codim { orbit: o } => {
            let ctx = context(q)?;
            let m = orbit(o, &ctx)?;
            let c = ctx.codim(&m).map_err(input_error)?;
            Ok(Output::ok(format!("{c}\n"), json!({ "orbit": m.entries(), "codim": c })))
        }
        Command::Homtable => {
            let ctx = context(q)?;
            let mut text = String::from("u v hom ext\n");
            let mut rows = Vec::new();
            for u in 0..ctx.root_count() {
                for v in 0..ctx.root_count() {
                    let (h, e) = (ctx.hom(u, v), ctx.ext(u, v));
                    let _ = writeln!(text, "{} {} {h} {e}", u + 1, v + 1);
                    rows.push(json!({ "u": u + 1, "v": v + 1, "hom": h, "ext": e }));
                }
            }
            Ok(Output::ok(text, json!({ "table": rows })))
        }
        Command::Qpoly { orbit: o } => {
            let ctx = context(q)?;
            let m = orbit(o, &ctx)?;
            let p = coha::quiver_polynomial(&ctx, &m).map_err(input_error)?;
            Ok(Output::ok(
                format!("{p}\n"),
                json!({ "orbit": m.entries(), "gamma": p.gamma(), "poly": p.to_string() }),
            ))
        }
        Command::Mul { gamma1, f1, gamma2, f2 } => {
            let a = element(dim(gamma1, "gamma1", &q)?, f1, "f1")?;
            let b = element(dim(gamma2, "gamma2", &q)?, f2, "f2")?;
            let p = coha::shuffle_mul(&q, &a, &b).map_err(input_error)?;
            Ok(Output::ok(format!("{p}\n"), json!({ "gamma": p.gamma(), "poly": p.to_string() })))
        }
        Command::ResidueMul { gamma1, g, gamma2, f2 } => {
            let g1 = dim(gamma1, "gamma1", &q)?;
            let g = poly(g, "g")?;
            let b = element(dim(gamma2, "gamma2", &q)?, f2, "f2")?;
            let (res, shuf) = residue::residue_vs_shuffle(&q, &g, &g1, &b).map_err(input_error)?;
            let agree = res == shuf;
            let text = format!("residue: {res}\nshuffle: {shuf}\nmatch: {agree}\n");
            let json = json!({
                "status": if agree { Status::Pass } else { Status::Fail },
                "residue": res.to_string(),
                "shuffle": shuf.to_string(),
                "match": agree,
            });
            Ok(Output { text, json, failed: !agree })
        }
        Command::Restrict { orbit: o, f } => {
            let ctx = context(q)?;
            let m = orbit(o, &ctx)?;
            let e = element(ctx.dimension_of(&m), f, "f")?;
            let r = coha::restriction(&ctx, &m, &e).map_err(input_error)?;
            Ok(Output::ok(format!("{r}\n"), json!({ "orbit": m.entries(), "poly": r.to_string() })))
        }
        Command::Euler { orbit: o } => {
            let ctx = context(q)?;
            let m = orbit(o, &ctx)?;
            let a = coha::euler_class(&ctx, &m).map_err(input_error)?;
            let b = coha::euler_class_from_weights(&ctx, &m).map_err(input_error)?;
            let agree = a == b;
            let text = format!("{a}\nweights: {b}\nmatch: {agree}\n");
            let json = json!({
                "status": if agree { Status::Pass } else { Status::Fail },
                "restriction": a.to_string(),
                "weights": b.to_string(),
                "match": agree,
            });
            Ok(Output { text, json, failed: !agree })
        }
        Command::VerifyReineke { cap, precision } => {
            let ctx = context(q)?;
            let cap = dim(cap, "cap", ctx.quiver())?;
            check_precision(*precision)?;
            let r = verify::verify_reineke(&ctx, &cap, *precision).map_err(input_error)?;
            Ok(report_output(vec![r]))
        }
        Command::VerifyBetti { max_total, precision } => {
            let ctx = context(q)?;
            check_precision(*precision)?;
            let r = verify::verify_betti(&ctx, *max_total, *precision).map_err(input_error)?;
            Ok(report_output(vec![r]))
        }
        Command::VerifyCodimLemma { max_total } => {
            let ctx = context(q)?;
            let r = verify::verify_codim_lemma(&ctx, *max_total).map_err(input_error)?;
            Ok(report_output(vec![r]))
        }
        Command::VerifyStructure { gamma, cap, simple } => {
            let ctx = context(q)?;
            let g = dim(gamma, "gamma", ctx.quiver())?;
            let r = if *simple {
                verify::verify_simple_structure(&ctx, &g, *cap)
            } else {
                verify::verify_structure(&ctx, &g, *cap)
            }
            .map_err(input_error)?;
            Ok(report_output(vec![r]))
        }
        Command::VerifyResidue {
            max_total,
            max_degree,
            samples,
            seed,
        } => {
            let r = verify::verify_residue(&q, *max_total, *max_degree, *samples, *seed).map_err(input_error)?;
            Ok(report_output(vec![r]))
        }
        Command::VerifyAll { precision, cap, seed } => {
            check_precision(*precision)?;
            let cap = cap.as_deref().map(|c| dim(c, "cap", &q)).transpose()?;
            let ctx = context(q)?;
            let cfg = AllConfig {
                precision: *precision,
                cap,
                seed: *seed,
            };
            Ok(report_output(verify::verify_all(&ctx, &cfg).map_err(input_error)?))
        }
    }
}

fn check_precision(k: u32) -> Result<(), String> {
    if k == 0 {
        return Err("--precision must be at least 1".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
