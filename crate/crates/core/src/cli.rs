//! Command-line front end. Every flag can also be set through an
//! environment variable named `PARIKH_<FLAG>`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use crate::chambers::{box_points, bs_eval, render_json, render_text, BoxSpline};
use crate::error::{check_dim, Error, Result};
use crate::langfront::{
    decide_parikh_slender, diophantine_systems, index_set, parikh_counting_function, BoundedLanguage,
    CountingFunction,
};
use crate::oracle::{census_parikh, count_representations_brute, count_system_brute};
use crate::partition::{box_spline_of_system, DiophantineSystem};
use crate::semilinear::{decompose_semisimple, sl_member, SemilinearSet};
use crate::series::{generating_function, taylor_coefficients, RationalSeriesExpr};

#[derive(Parser, Debug)]
#[command(name = "parikh", version, about = "Exact Parikh counting functions of bounded context-free languages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Counting function of a Diophantine system `A x + c = n`.
    Vpf(VpfArgs),
    /// Counting function of a bounded context-free language.
    Lang(LangArgs),
    /// Decomposition of a semilinear set into disjoint simple sets.
    Semisimple(SetArgs),
    /// Generating function of a system or a bounded language.
    Series(SeriesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", env = "PARIKH_FORMAT")]
    pub format: Format,
    /// Compare against the brute-force oracle on `[0, box]^t`.
    #[arg(long, env = "PARIKH_VERIFY")]
    pub verify: bool,
    /// Side of the verification box.
    #[arg(long = "box", default_value_t = 15, env = "PARIKH_BOX")]
    pub box_bound: u64,
}

#[derive(Args, Debug)]
pub struct VpfArgs {
    /// System file: "t k", t rows of k entries, optional "offset: …".
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Print the value at this point only.
    #[arg(long, num_args = 1.., value_name = "N")]
    pub eval: Option<Vec<u64>>,
    /// Regions are listed when realized in `[0, bound]^t`.
    #[arg(long, default_value_t = 6, env = "PARIKH_REGIONS_BOUND")]
    pub regions_bound: u64,
}

#[derive(Args, Debug)]
pub struct LangArgs {
    /// Grammar file with a final "bounds: u1, …, uk" line.
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Print the value at this Parikh vector only.
    #[arg(long, num_args = 1.., value_name = "N")]
    pub eval: Option<Vec<u64>>,
    /// Containment in the bounding words is checked up to this length.
    #[arg(long, default_value_t = 24, env = "PARIKH_MAXLEN")]
    pub maxlen: usize,
    /// Splitting depth allowed while simplifying linear sets.
    #[arg(long, default_value_t = 12, env = "PARIKH_DEPTH_CAP")]
    pub depth_cap: usize,
    /// Regions are listed when realized in `[0, bound]^t`.
    #[arg(long, default_value_t = 4, env = "PARIKH_REGIONS_BOUND")]
    pub regions_bound: u64,
    /// Decide whether the counting function is bounded.
    #[arg(long)]
    pub slender: bool,
    /// Regions inspected by the slenderness decision.
    #[arg(long, default_value_t = 8, env = "PARIKH_RADIUS")]
    pub radius: u64,
    /// Print the generating function.
    #[arg(long)]
    pub series: bool,
}

#[derive(Args, Debug)]
pub struct SetArgs {
    /// Set file: "dim k", then "base: … ; periods: … | …" per line.
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 12, env = "PARIKH_DEPTH_CAP")]
    pub depth_cap: usize,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// A system file, or a grammar file with a "bounds:" line.
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Print the coefficients of total degree at most this.
    #[arg(long, env = "PARIKH_DEGREE")]
    pub degree: Option<u64>,
    #[arg(long, default_value_t = 24, env = "PARIKH_MAXLEN")]
    pub maxlen: usize,
    #[arg(long, default_value_t = 12, env = "PARIKH_DEPTH_CAP")]
    pub depth_cap: usize,
}

/// Output and exit status of one run.
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))
}

/// `spline(v − c)`, zero unless `v ≥ c`.
fn shifted(spline: &BoxSpline, offset: &[u64], v: &[u64]) -> Result<BigUint> {
    if v.iter().zip(offset).any(|(a, c)| a < c) {
        return Ok(BigUint::default());
    }
    let x: Vec<i64> = v.iter().zip(offset).map(|(a, c)| (a - c) as i64).collect();
    bs_eval(spline, &x)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn verdict(out: &mut String, good: u64, total: u64) -> bool {
    let word = if good == total { "OK" } else { "FAIL" };
    writeln!(out, "{word}: {good}/{total} points match").unwrap();
    good == total
}

/// Appends the verification line, or stores it under "verify" when the
/// output so far is a structured document.
fn report(out: &mut String, format: Format, good: u64, total: u64) -> bool {
    let mut line = String::new();
    let ok = verdict(&mut line, good, total);
    if format == Format::Structured {
        if let Ok(serde_json::Value::Object(mut doc)) = serde_json::from_str(out) {
            doc.insert("verify".into(), json!(line.trim()));
            *out = pretty(&serde_json::Value::Object(doc));
            return ok;
        }
    }
    out.push_str(&line);
    ok
}

fn cmd_vpf(a: &VpfArgs) -> Result<Outcome> {
    let sys = DiophantineSystem::parse(&read(&a.input)?)?;
    let offset = sys.offset().to_vec();
    let bare = DiophantineSystem::new(sys.matrix().to_vec(), None)?;
    let spline = box_spline_of_system(&bare)?;
    let t = sys.rows();
    let mut out = String::new();
    if let Some(v) = &a.eval {
        check_dim(t, v.len())?;
        writeln!(out, "{}", shifted(&spline, &offset, v)?).unwrap();
    } else {
        match a.common.format {
            Format::Text => {
                write!(out, "system\n{sys}").unwrap();
                if offset.iter().any(|&c| c > 0) {
                    writeln!(out, "values are taken at n − offset").unwrap();
                }
                out.push_str(&render_text(&spline, a.regions_bound)?);
            }
            Format::Structured => {
                let v = json!({ "system": sys.to_json(), "spline": render_json(&spline, a.regions_bound)? });
                out.push_str(&pretty(&v));
            }
        }
    }
    let mut ok = true;
    if a.common.verify {
        let (mut good, mut total) = (0, 0);
        for x in box_points(t, a.common.box_bound) {
            let n: Vec<u64> = x.iter().map(|&c| c as u64).collect();
            total += 1;
            if shifted(&spline, &offset, &n)? == count_system_brute(&sys, &n) {
                good += 1;
            }
        }
        ok = report(&mut out, a.common.format, good, total);
    }
    Ok(Outcome { stdout: out, ok })
}

fn build_language(text: &str, maxlen: usize, depth_cap: usize) -> Result<(BoundedLanguage, CountingFunction)> {
    let bl = BoundedLanguage::parse(text, maxlen)?;
    let f = parikh_counting_function(&bl, depth_cap)?;
    Ok((bl, f))
}

fn cmd_lang(a: &LangArgs) -> Result<Outcome> {
    let text = read(&a.input)?;
    let bl = BoundedLanguage::parse(&text, a.maxlen)?;
    let b = index_set(&bl, a.depth_cap)?;
    let blocks = diophantine_systems(&b, bl.morphism(), bl.alphabet())?;
    let t = bl.alphabet().len();
    let f = CountingFunction::from_blocks(t, blocks)?;
    let structured = a.common.format == Format::Structured;
    let mut out = String::new();
    let mut doc = serde_json::Map::new();
    let focused = a.eval.is_some() || a.slender || a.series;
    if let Some(v) = &a.eval {
        check_dim(t, v.len())?;
        let value = f.eval(v)?;
        if structured {
            doc.insert("eval".into(), json!({ "point": v, "value": value.to_string() }));
        } else {
            writeln!(out, "{value}").unwrap();
        }
    }
    if a.slender {
        let (slender, r) = decide_parikh_slender(&f, a.radius)?;
        if structured {
            doc.insert("slender".into(), json!({ "slender": slender, "bound": r }));
        } else if let (true, Some(r)) = (slender, r) {
            writeln!(out, "slender, r = {r}").unwrap();
        } else {
            writeln!(out, "not slender").unwrap();
        }
    }
    if a.series {
        let e = RationalSeriesExpr::of_counting_function(&f);
        if structured {
            doc.insert("series".into(), json!(e.to_string()));
        } else {
            writeln!(out, "{e}").unwrap();
        }
    }
    if !focused {
        let letters: Vec<String> = bl.alphabet().iter().map(|c| c.to_string()).collect();
        if structured {
            let summands = f
                .summands()
                .iter()
                .map(|s| {
                    Ok(json!({
                        "offset": s.block.offset,
                        "columns": s.block.columns,
                        "spline": render_json(&s.spline, a.regions_bound)?,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            let comps: Vec<_> = b
                .components()
                .iter()
                .map(|c| json!({ "base": c.base, "periods": c.periods }))
                .collect();
            doc.insert("alphabet".into(), json!(letters));
            doc.insert("bounds".into(), json!(bl.morphism().images()));
            doc.insert("index_set".into(), json!(comps));
            doc.insert("summands".into(), json!(summands));
        } else {
            writeln!(out, "alphabet: {}", letters.join(" ")).unwrap();
            writeln!(out, "bounds: {}", bl.morphism().images().join(", ")).unwrap();
            write!(out, "index set\n{b}").unwrap();
            for (i, s) in f.summands().iter().enumerate() {
                let cols: Vec<String> = s.block.columns.iter().map(|c| format!("{c:?}")).collect();
                writeln!(out, "summand {}: offset {:?} columns [{}]", i + 1, s.block.offset, cols.join(", ")).unwrap();
                for line in render_text(&s.spline, a.regions_bound)?.lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
        }
    }
    let mut ok = true;
    if a.common.verify {
        let census = census_parikh(&bl, &vec![a.common.box_bound; t]);
        let (mut good, mut total) = (0, 0);
        for x in box_points(t, a.common.box_bound) {
            let v: Vec<u64> = x.iter().map(|&c| c as u64).collect();
            total += 1;
            if f.eval(&v)? == BigUint::from(census.get(&v).copied().unwrap_or(0)) {
                good += 1;
            }
        }
        let mut line = String::new();
        ok = verdict(&mut line, good, total);
        if structured {
            doc.insert("verify".into(), json!(line.trim()));
        } else {
            out.push_str(&line);
        }
    }
    if structured {
        out.push_str(&pretty(&serde_json::Value::Object(doc)));
    }
    Ok(Outcome { stdout: out, ok })
}

fn cmd_semisimple(a: &SetArgs) -> Result<Outcome> {
    let s = SemilinearSet::parse(&read(&a.input)?)?;
    let d = decompose_semisimple(&s, a.depth_cap)?;
    let mut out = String::new();
    match a.common.format {
        Format::Text if d.components().is_empty() => {}
        Format::Text => out.push_str(&d.to_string()),
        Format::Structured => {
            let comps: Vec<_> = d
                .components()
                .iter()
                .map(|c| json!({ "base": c.base, "periods": c.periods }))
                .collect();
            out.push_str(&pretty(&json!({ "dim": d.dim(), "components": comps })));
        }
    }
    let mut ok = true;
    if a.common.verify {
        let (mut good, mut total) = (0, 0);
        for x in box_points(s.dim(), a.common.box_bound) {
            let v: Vec<u64> = x.iter().map(|&c| c as u64).collect();
            total += 1;
            let reps: Vec<u64> = d.components().iter().map(|c| count_representations_brute(c, &v)).collect();
            let inside = sl_member(&s, &v)?;
            let hits = reps.iter().filter(|&&r| r > 0).count();
            let exact = if inside { hits == 1 && reps.iter().all(|&r| r <= 1) } else { hits == 0 };
            if exact && d.components().iter().all(|c| c.is_simple()) {
                good += 1;
            }
        }
        ok = report(&mut out, a.common.format, good, total);
    }
    Ok(Outcome { stdout: out, ok })
}

fn cmd_series(a: &SeriesArgs) -> Result<Outcome> {
    let text = read(&a.input)?;
    // grammar files are the ones with rules
    let (expr, truth): (RationalSeriesExpr, Box<dyn Fn(&[u64]) -> Result<BigUint>>) = if text.contains("->") {
        let (bl, f) = build_language(&text, a.maxlen, a.depth_cap)?;
        let e = RationalSeriesExpr::of_counting_function(&f);
        let bound = a.common.box_bound;
        let census = census_parikh(&bl, &vec![bound; bl.alphabet().len()]);
        (
            e,
            Box::new(move |v: &[u64]| Ok(BigUint::from(census.get(v).copied().unwrap_or(0)))),
        )
    } else {
        let sys = DiophantineSystem::parse(&text)?;
        let e = generating_function(std::slice::from_ref(&sys))?;
        (e, Box::new(move |v: &[u64]| Ok(count_system_brute(&sys, v))))
    };
    let mut out = String::new();
    let coeffs = a.degree.map(|d| taylor_coefficients(&expr, d));
    match a.common.format {
        Format::Text => {
            writeln!(out, "{expr}").unwrap();
            if let Some(c) = &coeffs {
                for (x, v) in c {
                    writeln!(out, "  {x:?} {v}").unwrap();
                }
            }
        }
        Format::Structured => {
            let terms: Vec<_> = expr
                .terms()
                .iter()
                .map(|t| json!({ "numerator": t.numerator, "denominators": t.denominators }))
                .collect();
            let mut doc = json!({ "vars": expr.vars(), "terms": terms, "text": expr.to_string() });
            if let Some(c) = &coeffs {
                let list: Vec<_> = c.iter().map(|(x, v)| json!({ "exponent": x, "value": v.to_string() })).collect();
                doc["coefficients"] = json!(list);
            }
            out.push_str(&pretty(&doc));
        }
    }
    let mut ok = true;
    if a.common.verify {
        // coefficients of degree ≤ box against the oracle, inside [0, box]^t
        let bound = a.common.box_bound;
        let c = taylor_coefficients(&expr, bound);
        let (mut good, mut total) = (0, 0);
        for x in box_points(expr.vars(), bound) {
            let v: Vec<u64> = x.iter().map(|&c| c as u64).collect();
            if v.iter().sum::<u64>() > bound {
                continue;
            }
            total += 1;
            if c.get(&v).cloned().unwrap_or_default() == truth(&v)? {
                good += 1;
            }
        }
        ok = report(&mut out, a.common.format, good, total);
    }
    Ok(Outcome { stdout: out, ok })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Vpf(a) => cmd_vpf(a),
        Command::Lang(a) => cmd_lang(a),
        Command::Semisimple(a) => cmd_semisimple(a),
        Command::Series(a) => cmd_series(a),
    }
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 when a verification fails, 2 on errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
