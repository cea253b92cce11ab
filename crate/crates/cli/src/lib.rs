//! The `sscurve` command line: construction, verification and inspection of
//! curve files. `run` is the whole program; `main` only forwards to it.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sscurve::budget::Budget;
use sscurve::builder::{build_components, build_prime_field, certificate, glue_single_block, render_sparse, Curve};
use sscurve::classify::{covers_isomorphic, curves_isomorphic, radical, IsoWitness};
use sscurve::decomp::decompose;
use sscurve::format::{linpoly_from_json, space_from_json, Construction, CurveFile, Meta, VERSION};
use sscurve::quotient::{decomposition, genus_profile, is_irreducible, solve_alpha_space};
use sscurve::zeta::{count_points, numeric_verdict, powersum_additivity, verify_supersingular, Countable, Verdict};
use sscurve::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

pub const ENV_BUDGET_LOG2: &str = "SSCURVE_BUDGET_LOG2";
pub const ENV_MAX_DEGREE: &str = "SSCURVE_MAX_DEGREE";

#[derive(Parser, Debug)]
#[command(name = "sscurve", version, about = "Supersingular curves in characteristic 2")]
struct Cli {
    /// log2 of the largest number of field elements enumerated per count
    #[arg(long, global = true, env = ENV_BUDGET_LOG2)]
    budget_log2: Option<u32>,
    /// largest extension degree of F_2 that may be built
    #[arg(long, global = true, env = ENV_MAX_DEGREE)]
    max_degree: Option<u32>,
    /// machine-readable output only
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// single equation over F_2
    F2,
    /// fibre product over F_{2^m}
    F2m,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum IsoKind {
    Curves,
    Covers,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Block decomposition of a genus
    Decompose { genus: u64 },
    /// Build a supersingular curve of the given genus
    Construct {
        genus: u64,
        #[arg(long, value_enum, default_value = "f2")]
        mode: Mode,
        /// single equation for a one-block fibre product
        #[arg(long)]
        glue: bool,
        /// write the curve file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Irreducibility, quotients, supersingularity and additivity checks
    Verify {
        file: PathBuf,
        /// extensions of the compositum used for the additivity check
        #[arg(long, default_value_t = 2)]
        kmax: u32,
    },
    /// Degree-2 quotients of a curve
    Quotients { file: PathBuf },
    /// Number of points over the degree-k extension of the curve's field
    Count {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// L-polynomial from point counts
    Lpoly { file: PathBuf },
    /// Isomorphism test for y^2+y = xR(x) (curves) or spaces of such (covers)
    Iso {
        #[arg(long, value_enum, default_value = "curves")]
        mode: IsoKind,
        first: PathBuf,
        second: PathBuf,
    },
    /// Root space of E_R
    Radical { file: PathBuf },
}

/// Error with an exit code attached.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Capacity { .. } | Error::BudgetExceeded { .. } => EXIT_CAPACITY,
            Error::Reducible | Error::ReducibleCover | Error::InconsistentCounts(_) | Error::Internal(_) => {
                EXIT_VERIFY_FAILED
            }
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

struct Ctx<'a> {
    budget: Budget,
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, value: &impl Serialize, human: impl FnOnce() -> String) -> Result<(), Failure> {
        let text = if self.json {
            serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
        } else {
            human()
        };
        self.out.write_all(text.as_bytes()).map_err(|e| usage(format!("write failed: {e}")))
    }
}

/// Runs the program; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut budget = Budget::default();
    if let Some(b) = cli.budget_log2 {
        budget.log2_points = b.min(62);
    }
    if let Some(d) = cli.max_degree {
        budget.max_degree = d;
    }
    let mut ctx = Ctx { budget, json: cli.json, out };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx) -> Result<i32, Failure> {
    match command {
        Command::Decompose { genus } => cmd_decompose(genus, ctx),
        Command::Construct { genus, mode, glue, out } => cmd_construct(genus, mode, glue, out.as_deref(), ctx),
        Command::Verify { file, kmax } => cmd_verify(&file, kmax, ctx),
        Command::Quotients { file } => cmd_quotients(&file, ctx),
        Command::Count { file, ext } => cmd_count(&file, ext, ctx),
        Command::Lpoly { file } => cmd_lpoly(&file, ctx),
        Command::Iso { mode, first, second } => cmd_iso(mode, &first, &second, ctx),
        Command::Radical { file } => cmd_radical(&file, ctx),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<CurveFile, Failure> {
    Ok(CurveFile::from_json(&read(path)?)?)
}

fn cmd_decompose(g: u64, ctx: &mut Ctx) -> Result<i32, Failure> {
    let d = decompose(g)?;
    let blocks: Vec<[u32; 2]> = d.blocks.iter().map(|b| [b.s, b.r]).collect();
    let value = json!({
        "g": d.g,
        "blocks": blocks,
        "w": d.w,
        "m": d.m,
        "u": d.u,
        "moduli_bound": d.moduli_bound,
    });
    ctx.emit(&value, || {
        let bs: Vec<String> = blocks.iter().map(|[s, r]| format!("({s}, {r})")).collect();
        let us: Vec<String> = d.u.iter().map(|u| u.to_string()).collect();
        let bound = d.moduli_bound.map_or("undefined (g < 2)".to_string(), |b| b.to_string());
        format!(
            "g = {}\nblocks (s, r): {}\nw = {}, m = {}\nu = {}\nmoduli bound = {bound}\n",
            d.g,
            bs.join(" "),
            d.w,
            d.m,
            us.join(" ")
        )
    })?;
    Ok(EXIT_OK)
}

/// The curve file written by `construct`.
pub fn construct_file(g: u64, f2m: bool, glue: bool, budget: &Budget) -> Result<CurveFile, Error> {
    let d = decompose(g)?;
    let fp = build_components(&d)?;
    let cert = certificate(&fp)?;
    let curve = match (f2m, glue) {
        (false, false) => Curve::Single(build_prime_field(&d)?),
        (true, false) => Curve::FibreProduct(fp),
        (true, true) => Curve::Single(glue_single_block(&fp)?),
        (false, true) => return Err(Error::InvalidInput("--glue requires --mode f2m".into())),
    };
    budget.check_degree(curve.field().degree() as u64)?;
    let mode = if f2m { "f2m" } else { "f2" };
    let meta = Meta { certificate: cert, construction: Construction { genus: g, mode: mode.into(), glue }, version: VERSION.into() };
    Ok(CurveFile::new(curve, Some(meta)))
}

fn cmd_construct(g: u64, mode: Mode, glue: bool, out: Option<&Path>, ctx: &mut Ctx) -> Result<i32, Failure> {
    let file = construct_file(g, mode == Mode::F2m, glue, &ctx.budget).map_err(|e| match e {
        Error::Unsupported(m) => usage(m),
        other => other.into(),
    })?;
    let text = file.to_json();
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if ctx.json {
        ctx.out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))?;
    } else {
        writeln!(ctx.out, "{}", file.curve.equation()).map_err(|e| usage(e.to_string()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(path: &Path, kmax: u32, ctx: &mut Ctx) -> Result<i32, Failure> {
    let file = load_curve(path)?;
    let budget = ctx.budget;
    let mut checks: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    if let Curve::Single(c) = &file.curve {
        if !is_irreducible(c) {
            checks.insert("irreducible".into(), json!(false));
            let value = json!({"verdict": "reducible", "checks": checks});
            ctx.emit(&value, || "reducible: some quotient has a right side in the image of y^2+y\n".into())?;
            return Ok(EXIT_VERIFY_FAILED);
        }
        checks.insert("irreducible".into(), json!(true));
    }
    let cert_total = match &file.curve {
        Curve::Single(c) => genus_profile(c)?.total,
        Curve::FibreProduct(fp) => certificate(fp)?.total,
    };
    if let Some(meta) = &file.meta {
        checks.insert("certificate_matches_file".into(), json!(meta.certificate.total == cert_total));
    }
    let report = verify_supersingular(&file.curve, &budget)?;
    for (k, v) in &report.checks {
        checks.insert(k.clone(), json!(v));
    }
    let mut additivity = serde_json::Value::Null;
    if let Curve::Single(c) = &file.curve {
        match powersum_additivity(c, kmax, &budget) {
            Ok(r) => {
                for row in &r.rows {
                    checks.insert(format!("powersum_additivity_k{}", row.k), json!(row.curve == row.quotients));
                }
                additivity = json!({"compositum_degree": r.compositum_degree, "rows": r.rows.len()});
            }
            Err(Error::BudgetExceeded { .. }) | Err(Error::Capacity { .. }) => {
                checks.insert("powersum_additivity".into(), json!("skipped: beyond budget"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let passed = report.passed() && checks.values().all(|v| v.as_bool() != Some(false));
    let value = json!({
        "genus": report.genus,
        "strategy": report.strategy,
        "lpoly": report.lpoly,
        "slopes": report.slopes,
        "supersingular": report.supersingular,
        "pieces": report.pieces,
        "checks": checks,
        "additivity": additivity,
    });
    ctx.emit(&value, || {
        let verdict = match report.supersingular {
            Verdict::Supersingular => "supersingular (numeric)".to_string(),
            Verdict::NotSupersingular => "NOT supersingular".to_string(),
            Verdict::Certified => "supersingular (numeric where affordable, certified-not-recounted elsewhere)".to_string(),
        };
        let mut s = format!("genus {}\nstrategy {}\nverdict: {verdict}\n", report.genus, report.strategy);
        if let Some(l) = &report.lpoly {
            s += &format!("L = [{}]\n", l.join(","));
        }
        if !report.pieces.is_empty() {
            let numeric = report.pieces.iter().filter(|p| p.lpoly.is_some()).count();
            s += &format!("pieces: {} ({} counted, {} certified)\n", report.pieces.len(), numeric, report.pieces.len() - numeric);
        }
        if let Some(d) = additivity.get("compositum_degree") {
            s += &format!("additivity over GF(2^{d})\n");
        }
        for (k, v) in &checks {
            s += &format!("check {k}: {v}\n");
        }
        s += if passed { "PASS\n" } else { "FAIL\n" };
        s
    })?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_quotients(path: &Path, ctx: &mut Ctx) -> Result<i32, Failure> {
    let file = load_curve(path)?;
    let (field, rows): (_, Vec<(String, u64, String)>) = match &file.curve {
        Curve::Single(c) => {
            let space = solve_alpha_space(c, &ctx.budget)?;
            let qs = decomposition(c, &space)?;
            let rows = qs.iter().map(|q| (q.alpha.to_hex(), q.genus, render_sparse(&space.ambient, &q.rhs, "x"))).collect();
            (space.ambient, rows)
        }
        Curve::FibreProduct(fp) => {
            let n = fp.components.len();
            if n > 20 {
                return Err(Error::BudgetExceeded { needed_log2: n as u32, budget_log2: 20 }.into());
            }
            let rows = (1u64..1 << n)
                .map(|m| {
                    let f = fp.combination(m).as_reduce();
                    let g = f.as_genus()?;
                    Ok((format!("{m:#x}"), g, render_sparse(&fp.field, &f, "x")))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            (fp.field, rows)
        }
    };
    let list: Vec<_> = rows.iter().map(|(a, g, e)| json!({"label": a, "genus": g, "equation": format!("w^2+w = {e}")})).collect();
    let total: u64 = rows.iter().map(|r| r.1).sum();
    let value = json!({"field": field, "quotients": list, "total_genus": total});
    ctx.emit(&value, || {
        let mut s = String::new();
        for (a, g, e) in &rows {
            s += &format!("{a}\tgenus {g}\tw^2+w = {e}\n");
        }
        s + &format!("total genus {total}\n")
    })?;
    Ok(EXIT_OK)
}

fn cmd_count(path: &Path, ext: u32, ctx: &mut Ctx) -> Result<i32, Failure> {
    let file = load_curve(path)?;
    let n = count_points(&file.curve, ext, &ctx.budget)?;
    let value = json!({"ext": ext, "field_degree": file.curve.field().degree() * ext, "count": n});
    ctx.emit(&value, || format!("{n}\n"))?;
    Ok(EXIT_OK)
}

fn cmd_lpoly(path: &Path, ctx: &mut Ctx) -> Result<i32, Failure> {
    let file = load_curve(path)?;
    let genus = file.curve.genus()?;
    let v = numeric_verdict(&file.curve, genus, &ctx.budget)?;
    let value = json!({
        "genus": genus,
        "field_degree": v.field_degree,
        "counts": v.counts,
        "lpoly": v.lpoly,
        "slopes": v.slopes,
        "supersingular": v.supersingular,
    });
    ctx.emit(&value, || format!("[{}]\n", v.lpoly.join(",")))?;
    Ok(EXIT_OK)
}

fn witness_json(w: Option<&IsoWitness>, mode: &str) -> serde_json::Value {
    match w {
        Some(w) => json!({"isomorphic": true, "witness": w.rho, "witness_field": w.field, "mode": w.mode}),
        None => json!({"isomorphic": false, "witness": null, "witness_field": null, "mode": mode}),
    }
}

fn cmd_iso(mode: IsoKind, a: &Path, b: &Path, ctx: &mut Ctx) -> Result<i32, Failure> {
    let (w, label) = match mode {
        IsoKind::Curves => {
            let (r, r2) = (linpoly_from_json(&read(a)?)?, linpoly_from_json(&read(b)?)?);
            (curves_isomorphic(&r, &r2, &ctx.budget)?, "curves")
        }
        IsoKind::Covers => {
            let (l, l2) = (space_from_json(&read(a)?)?, space_from_json(&read(b)?)?);
            (covers_isomorphic(&l, &l2, &ctx.budget)?, "covers")
        }
    };
    let value = witness_json(w.as_ref(), label);
    ctx.emit(&value, || match &w {
        Some(w) => format!("isomorphic: rho = {} in GF(2^{})\n", w.rho, w.field.degree()),
        None => "not isomorphic\n".into(),
    })?;
    Ok(EXIT_OK)
}

fn cmd_radical(path: &Path, ctx: &mut Ctx) -> Result<i32, Failure> {
    let r = linpoly_from_json(&read(path)?)?;
    let rad = radical(&r, &ctx.budget)?;
    let value = json!({"ambient": rad.ambient, "dimension": rad.basis.len(), "basis": rad.basis});
    ctx.emit(&value, || {
        let b: Vec<String> = rad.basis.iter().map(|e| e.to_hex()).collect();
        format!("dimension {} in GF(2^{}): {}\n", rad.basis.len(), rad.ambient.degree(), b.join(" "))
    })?;
    Ok(EXIT_OK)
}
