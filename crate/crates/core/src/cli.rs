//! Command-line front end. Results go to stdout (or `--out`), diagnostics to
//! stderr. Exit codes: 0 success, 1 a check failed or a computation errored,
//! 2 invalid input.

pub mod golden;

use crate::cubicmap::{self, CubicMap};
use crate::faddeev::{self, Identity, IdentityParams};
use crate::foam::{build_named_foam, h1_summary, DeformedFoam};
use crate::qseries::{Coeff, QRat, XSeries};
use crate::quiverdt::{disk_invariants, dt_integer_invariants, dt_series, SymQuiver};
use crate::seeds::{standard_necklace_seed, FramedSeed, SeedPath};
use crate::wavefn::{self, evaluate_path_from, ov_factorize, solve_face_relations, solve_operators};
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;

#[derive(Parser, Debug)]
#[command(name = "chromlag", version, about = "Exact computations for quantized chromatic Lagrangians")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    /// Output format (defaults: csv for invariant tables, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    Necklace,
    Canoe,
    Prism,
    Cube,
    Aenv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a seed path (or a single mutation) to a framed seed.
    Mutate {
        /// Seed JSON file; defaults to the standard necklace seed of genus `--g`.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = 1)]
        g: usize,
        /// Seed path as a JSON file or inline JSON.
        #[arg(long)]
        path: Option<String>,
        /// Mutate at this edge label (alternative to `--path`).
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i32,
    },
    /// Wavefunction of a seed as a truncated power series.
    Wavefunction(WaveArgs),
    /// Ooguri–Vafa invariants n_{d,k} of a wavefunction.
    OvInvariants {
        /// Series JSON file; otherwise the wavefunction options are used.
        #[arg(long)]
        series: Option<String>,
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// DT generating series of a symmetric quiver (nonnegative adjacency).
    DtSeries {
        #[arg(long, alias = "A")]
        adjacency: String,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Emit the integer DT invariants instead of the series.
        #[arg(long)]
        invariants: bool,
    },
    /// Disk invariants n_d of the classical Y-system (any integer adjacency).
    DiskInvariants {
        #[arg(long, alias = "A")]
        adjacency: String,
        #[arg(long, default_value_t = 7)]
        order: u32,
    },
    /// First homology of a deformed foam's filling.
    FoamH1 {
        /// Bundled foam: necklace, canoe, prism, tetrahedron, theta.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value_t = 1)]
        g: usize,
        /// Foam JSON file.
        #[arg(long)]
        foam: Option<String>,
    },
    /// Classical chromatic relations on random rational colourings.
    ChromaticCheck {
        /// Named graph (theta, necklace, canoe, tetrahedron, prism, cube) or a graph JSON file.
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Numerical checks of the non-compact quantum dilogarithm identities.
    VerifyIdentities {
        /// Identity name (repeatable); all when omitted.
        #[arg(long)]
        name: Vec<String>,
        /// Fixed ℏ, e.g. "0.8+0.6i".
        #[arg(long, allow_hyphen_values = true)]
        hbar: Option<String>,
        /// Sample count (0 = per-identity default).
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Run the acceptance checks and print a pass/fail matrix.
    Golden {
        /// Restrict to these check numbers (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct WaveArgs {
    #[arg(long, value_enum, default_value = "necklace")]
    preset: Preset,
    #[arg(long, default_value_t = 1)]
    g: usize,
    /// Framing matrix for the canoe preset, e.g. "[[1]]".
    #[arg(long, alias = "A")]
    adjacency: Option<String>,
    /// Use the dual framing Σ q^{vᵀv − vᵀAv}/(q²)_v for the canoe preset.
    #[arg(long)]
    dual: bool,
    /// Seed JSON file: its wavefunction is obtained by solving the face relations.
    #[arg(long)]
    seed: Option<String>,
    /// Further path applied after the preset (JSON file or inline).
    #[arg(long)]
    path: Option<String>,
    #[arg(long, default_value_t = 6)]
    order: u32,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::Parse(_) | Error::Dimension(_) | Error::Inadmissible(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let s = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{s}");
            } else {
                let _ = write!(err, "{s}");
            }
            return code;
        }
    };
    configure_threads();
    let result = execute(&cli).and_then(|(text, code)| {
        match &cli.out {
            Some(path) => std::fs::write(path, &text).map_err(|e| usage(format!("cannot write '{path}': {e}")))?,
            None => out.write_all(text.as_bytes()).map_err(|e| Failure { code: 1, msg: e.to_string() })?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("CHROMATIC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails harmlessly if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn load_json(arg: &str) -> Result<Value, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read '{arg}': {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON in '{arg}': {e}")))
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    let a: Vec<Vec<i64>> = serde_json::from_str(s).map_err(|e| usage(format!("adjacency '{s}': {e}")))?;
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(usage(format!("adjacency '{s}' is not a nonempty square matrix")));
    }
    if (0..n).any(|i| (0..n).any(|j| a[i][j] != a[j][i])) {
        return Err(usage(format!("adjacency '{s}' is not symmetric")));
    }
    Ok(a)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn series_csv<C: Coeff>(f: &XSeries<C>) -> String {
    let mut s = String::from("exponent,coefficient\n");
    for (e, c) in f.terms() {
        let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("\"{}\",\"{}\"\n", es.join(" "), c));
    }
    s
}

enum AnySeries {
    Rat(XSeries),
    Aenv(XSeries<crate::qseries::QQRat>),
}

fn wavefunction(w: &WaveArgs) -> Result<AnySeries, Failure> {
    if w.order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    if w.adjacency.is_some() && w.preset != Preset::Canoe {
        return Err(usage("--adjacency applies to the canoe preset only"));
    }
    let (seed, psi) = if let Some(path) = &w.seed {
        let s = FramedSeed::from_json(&load_json(path)?)?;
        let psi = solve_face_relations(&s, w.order).map_err(|e| Failure { code: 1, msg: format!("face relations: {e}") })?;
        (s, psi)
    } else {
        let g = w.g;
        match w.preset {
            Preset::Aenv => {
                if w.path.is_some() {
                    return Err(usage("--path does not apply to the aenv preset"));
                }
                let f = solve_operators(&[wavefn::aenv_operator()], 1, w.order)
                    .map_err(|e| Failure { code: 1, msg: format!("aenv operator: {e}") })?;
                return Ok(AnySeries::Aenv(f));
            }
            Preset::Necklace => (standard_necklace_seed(g)?, XSeries::one(g, w.order)),
            Preset::Canoe => {
                let a = match &w.adjacency {
                    Some(s) => parse_matrix(s)?,
                    None => vec![vec![0; g]; g],
                };
                if a.len() != g {
                    return Err(usage(format!("framing matrix is {0}×{0} but g = {g}", a.len())));
                }
                if w.dual {
                    wavefn::canoe_dual(g, &a, w.order)?
                } else {
                    wavefn::canoe_framed(g, &a, w.order)?
                }
            }
            Preset::Prism => evaluate_path_from(&standard_necklace_seed(2)?, &XSeries::one(2, w.order), &wavefn::prism_path())?,
            Preset::Cube => evaluate_path_from(&standard_necklace_seed(3)?, &XSeries::one(3, w.order), &wavefn::cube_path())?,
        }
    };
    let psi = match &w.path {
        Some(p) => evaluate_path_from(&seed, &psi, &SeedPath::from_json(&load_json(p)?)?)?.1,
        None => psi,
    };
    Ok(AnySeries::Rat(psi))
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let fmt = cli.format;
    let json_only = |what: &str| -> Result<(), Failure> {
        if fmt == Some(Format::Csv) {
            Err(usage(format!("{what} has no CSV form")))
        } else {
            Ok(())
        }
    };
    match &cli.cmd {
        Command::Mutate { seed, g, path, edge, sign } => {
            json_only("a seed")?;
            let s = match seed {
                Some(p) => FramedSeed::from_json(&load_json(p)?)?,
                None => standard_necklace_seed(*g)?,
            };
            let path = match (path, edge) {
                (Some(p), None) => SeedPath::from_json(&load_json(p)?)?,
                (None, Some(e)) => SeedPath::default().mutate(e, *sign),
                _ => return Err(usage("give exactly one of --path and --edge")),
            };
            let mut cur = s;
            for (i, step) in path.steps.iter().enumerate() {
                cur = cur.apply_step(step).map_err(|e| Failure::from(e)).map_err(|f| Failure { msg: format!("step {i}: {}", f.msg), ..f })?.0;
            }
            Ok((pretty(&cur.to_json()), 0))
        }
        Command::Wavefunction(w) => match wavefunction(w)? {
            AnySeries::Rat(f) if fmt == Some(Format::Csv) => Ok((series_csv(&f), 0)),
            AnySeries::Rat(f) => Ok((pretty(&f.to_json()), 0)),
            AnySeries::Aenv(f) if fmt == Some(Format::Csv) => Ok((series_csv(&f), 0)),
            AnySeries::Aenv(f) => {
                let terms: Vec<Value> = f.terms().iter().map(|(e, c)| json!({"exp": e, "coeff": c.to_string()})).collect();
                Ok((pretty(&json!({"g": 1, "order": f.order(), "terms": terms})), 0))
            }
        },
        Command::OvInvariants { series, wave } => {
            let f = match series {
                Some(p) => XSeries::from_json(&load_json(p)?)?,
                None => match wavefunction(wave)? {
                    AnySeries::Rat(f) => f,
                    AnySeries::Aenv(_) => return Err(usage("the aenv series has coefficients in Q and q; no OV table")),
                },
            };
            let t = ov_factorize(&f)?;
            let text = if fmt == Some(Format::Json) { pretty(&t.to_json()) } else { t.to_csv() };
            if let Some((d, c)) = &t.witness {
                return Err(Failure { code: 1, msg: format!("not integral: X^{d:?} has non-integer exponent {c}\n{text}") });
            }
            Ok((text, 0))
        }
        Command::DtSeries { adjacency, order, invariants } => {
            let q = SymQuiver::new(parse_matrix(adjacency)?)?;
            if *invariants {
                let t = dt_integer_invariants(&q, *order)?;
                let text = if fmt == Some(Format::Json) { pretty(&t.to_json()) } else { t.to_csv() };
                return Ok((text, 0));
            }
            let f = dt_series(&q, *order);
            Ok((if fmt == Some(Format::Csv) { series_csv(&f) } else { pretty(&f.to_json()) }, 0))
        }
        Command::DiskInvariants { adjacency, order } => {
            let n = disk_invariants(&parse_matrix(adjacency)?, *order)?;
            if fmt == Some(Format::Json) {
                let rows: Vec<Value> = n.iter().map(|(d, v)| json!({"d": d, "n": v.to_string()})).collect();
                Ok((pretty(&json!({"order": order, "rows": rows})), 0))
            } else {
                let mut s = String::from("d,n\n");
                for (d, v) in &n {
                    let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                    s.push_str(&format!("\"{}\",{v}\n", ds.join(" ")));
                }
                Ok((s, 0))
            }
        }
        Command::FoamH1 { graph, g, foam } => {
            json_only("the homology summary")?;
            let f = match (graph, foam) {
                (Some(n), None) => build_named_foam(n, *g)?,
                (None, Some(p)) => DeformedFoam::from_json(&load_json(p)?)?,
                _ => return Err(usage("give exactly one of --graph and --foam")),
            };
            Ok((pretty(&h1_summary(&f)?), 0))
        }
        Command::ChromaticCheck { graph, g, samples, rng_seed } => {
            let m: CubicMap = if graph.parse::<cubicmap::NamedGraph>().is_ok() {
                cubicmap::build_named_str(graph, *g)?
            } else {
                CubicMap::from_json(&load_json(graph)?)?
            };
            let r = crate::chromatic::property_suite(&m, *samples, *rng_seed);
            let ok = r.ok();
            let text = if fmt == Some(Format::Csv) {
                format!(
                    "colorings,degenerate,face_product_failures,global_failures,face_polynomial_failures,passed\n{},{},{},{},{},{}\n",
                    r.colorings, r.degenerate, r.face_product_failures, r.global_failures, r.face_polynomial_failures, ok
                )
            } else {
                let mut v = serde_json::to_value(&r).expect("report serializes");
                v["passed"] = json!(ok);
                pretty(&v)
            };
            Ok((text, if ok { 0 } else { 1 }))
        }
        Command::VerifyIdentities { name, hbar, points, rng_seed } => {
            let ids: Vec<Identity> = if name.is_empty() || name.iter().any(|n| n == "all") {
                Identity::ALL.to_vec()
            } else {
                name.iter().map(|n| n.parse()).collect::<crate::Result<_>>()?
            };
            let params = IdentityParams {
                hbar: hbar.as_deref().map(faddeev::parse_complex).transpose()?,
                points: *points,
                seed: *rng_seed,
                ..Default::default()
            };
            let reps = ids.iter().map(|&id| faddeev::verify_identity(id, &params)).collect::<crate::Result<Vec<_>>>()?;
            let ok = reps.iter().all(|r| r.passed);
            let text = if fmt == Some(Format::Csv) {
                let mut s = String::from("name,max_residual,threshold,passed\n");
                for r in &reps {
                    s.push_str(&format!("{},{:e},{:e},{}\n", r.name, r.max_residual, r.threshold, r.passed));
                }
                s
            } else {
                pretty(&serde_json::to_value(&reps).expect("reports serialize"))
            };
            Ok((text, if ok { 0 } else { 1 }))
        }
        Command::Golden { only } => {
            if let Some(bad) = only.iter().find(|&&i| i == 0 || i > golden::CHECKS.len()) {
                return Err(usage(format!("no check number {bad}")));
            }
            let res = golden::run_checks(only)?;
            let ok = res.iter().all(|r| r.passed);
            let text = match fmt {
                Some(Format::Json) => pretty(&serde_json::to_value(&res).expect("results serialize")),
                Some(Format::Csv) => {
                    let mut s = String::from("id,name,passed,seconds\n");
                    for r in &res {
                        s.push_str(&format!("{},{},{},{:.3}\n", r.id, r.name, r.passed, r.seconds));
                    }
                    s
                }
                None => {
                    let mut s: String = res.iter().map(|r| format!("{r}\n")).collect();
                    let n = res.iter().filter(|r| r.passed).count();
                    s.push_str(&format!("{n}/{} checks passed\n", res.len()));
                    s
                }
            };
            Ok((text, if ok { 0 } else { 1 }))
        }
    }
}

/// Convenience for callers holding a parsed series.
pub fn series_to_json(f: &XSeries<QRat>) -> Value {
    f.to_json()
}
