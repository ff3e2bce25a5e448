//! Command-line front end. [`run`] parses arguments, dispatches, writes the
//! report to `out` and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::components::component_count;
use crate::counting::{
    count_affine_with, count_projective_with, CountOptions, MethodChoice, DEFAULT_WORK_CAP,
};
use crate::error::{Error, Result};
use crate::gf::{make_field, prime_power_decomposition, Elem, Field};
use crate::ledger::{
    bound_report, thresholds, verify_proof_constants, BoundInputs, Classification, IntervalFlags,
    IntervalSystem,
};
use crate::mpoly::{Hypersurface, MultiPoly, Setting};
use crate::refine::{iterate, HalfInt};
use crate::slicing::{
    chebyshev_tails, plane_census, slice_distribution, SliceMode, EXHAUSTIVE_DEFAULT_MAX,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "langweil",
    version,
    about = "Point counts, plane slicing and Lang-Weil type bounds over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// Extension degree; the field is F_{p^m}.
    #[arg(long, global = true, default_value_t = 1)]
    pub m: u32,
    /// Ambient dimension (A^n or P^n).
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Maximum estimated field operations per count.
    #[arg(long = "work-cap", global = true)]
    pub work_cap: Option<u128>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Brute,
    Scan,
    Gcd,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Brute => MethodChoice::Brute,
            MethodArg::Scan => MethodChoice::Scan,
            MethodArg::Gcd => MethodChoice::Gcd,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Cylinder over y^{d-1} + y = x^d.
    Hermitian,
    /// Cylinder over x^{d-1} y + x y^{d-1} = 1.
    Lower,
    /// Cone over y^{d-1} z + y z^{d-1} = x^d in P^n.
    Cone,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Affine point count of {f = 0} in A^n.
    Count {
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Projective point count of {F = 0} in P^n (F in n+1 variables).
    CountProjective {
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Factorization and number of absolutely irreducible components of a plane curve.
    Components {
        #[arg(long)]
        poly: String,
    },
    /// Distribution of point counts on planes through the hypersurface.
    Slice {
        #[arg(long)]
        poly: String,
        /// Monte Carlo sample count.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        projective: bool,
        /// Use b_d = dq.
        #[arg(long = "sz-bd")]
        sz_bd: bool,
        /// Use J_1 = I_0 ∪ I_1.
        #[arg(long = "merge-j")]
        merge_j: bool,
    },
    /// The interval system I_0, ..., I_d, I_inf.
    Intervals {
        #[arg(long)]
        d: u32,
        /// Overrides p^m.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        projective: bool,
        #[arg(long = "sz-bd")]
        sz_bd: bool,
        #[arg(long = "merge-j")]
        merge_j: bool,
        /// Classify this point count.
        #[arg(long)]
        classify: Option<u64>,
    },
    /// Evaluates every explicit bound against a count.
    CheckBounds {
        /// Count this polynomial (degree and n taken from it).
        #[arg(long, conflicts_with = "count")]
        poly: Option<String>,
        #[arg(long, requires = "d")]
        count: Option<u128>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        projective: bool,
        /// Assert that X is geometrically irreducible; gates the theorems.
        #[arg(long = "geom-irred")]
        geom_irred: bool,
    },
    /// Thresholds in q for a degree d.
    Thresholds {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Checks the numeric inequalities behind the explicit constants.
    VerifyConstants {
        #[arg(long, default_value_t = 10_000)]
        dmax: u32,
    },
    /// Iterates the series refinement of the bound constants.
    Refine {
        #[arg(long)]
        d: u32,
        /// Half-integer, e.g. 2 or 3/2.
        #[arg(long)]
        rmax: HalfInt,
        /// Keep Σ 1/m² exact instead of relaxing it to π²/6.
        #[arg(long = "exact-sums")]
        exact_sums: bool,
    },
    /// Counts and checks one of the extremal example families.
    Examples {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        d: u32,
    },
}

struct Outcome {
    report: Value,
    code: i32,
}

impl Outcome {
    fn ok(report: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            report: to_value(report)?,
            code: EXIT_OK,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_cap_violation() {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let text = match cli.global.output {
                OutputFormat::Json => serde_json::to_string_pretty(&outcome.report).expect("json"),
                OutputFormat::Table => render_table(&outcome.report),
            };
            let _ = writeln!(out, "{text}");
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn field(g: &GlobalArgs) -> Result<Field> {
    make_field(g.p, g.m)
}

/// `p^m` without building the field.
fn field_order(g: &GlobalArgs, q: Option<u64>) -> Result<u64> {
    if let Some(q) = q {
        return match prime_power_decomposition(q) {
            Some(_) => Ok(q),
            None => Err(Error::InvalidArgument(format!("{q} is not a prime power"))),
        };
    }
    let q =
        g.p.checked_pow(g.m)
            .ok_or_else(|| Error::InvalidArgument("p^m overflows".into()))?;
    match prime_power_decomposition(q) {
        Some((p, _)) if p == g.p => Ok(q),
        _ => Err(Error::NonPrimeCharacteristic(g.p)),
    }
}

fn options(g: &GlobalArgs, method: MethodChoice) -> CountOptions {
    CountOptions {
        work_cap: g.work_cap.unwrap_or(DEFAULT_WORK_CAP),
        method,
        parallel: true,
    }
}

fn setting_of(projective: bool) -> Setting {
    if projective {
        Setting::Projective
    } else {
        Setting::Affine
    }
}

fn nvars(setting: Setting, n: usize) -> usize {
    match setting {
        Setting::Affine => n,
        Setting::Projective => n + 1,
    }
}

fn hypersurface(g: &GlobalArgs, text: &str, setting: Setting) -> Result<Hypersurface> {
    let f = MultiPoly::parse(text, nvars(setting, g.n), &field(g)?)?;
    Hypersurface::new(setting, f)
}

fn count_report(x: &Hypersurface, opts: &CountOptions) -> Result<Value> {
    let start = Instant::now();
    let res = match x.setting() {
        Setting::Affine => count_affine_with(x, x.field(), opts)?,
        Setting::Projective => count_projective_with(x, x.field(), opts)?,
    };
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(json!({
        "schema": 1,
        "count": res.count,
        "q": res.q,
        "n": res.n,
        "setting": res.setting,
        "method": res.method.as_str(),
        "elapsed_ms": elapsed,
    }))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Count { poly, method } => {
            let x = hypersurface(g, poly, Setting::Affine)?;
            Outcome::ok(count_report(&x, &options(g, (*method).into()))?)
        }
        Command::CountProjective { poly, method } => {
            let x = hypersurface(g, poly, Setting::Projective)?;
            Outcome::ok(count_report(&x, &options(g, (*method).into()))?)
        }
        Command::Components { poly } => {
            let f = MultiPoly::parse(poly, 2, &field(g)?)?;
            let rep = component_count(&f)?;
            let mut v = to_value(rep)?;
            v["schema"] = json!(1);
            Ok(Outcome {
                report: v,
                code: EXIT_OK,
            })
        }
        Command::Slice {
            poly,
            samples,
            exhaustive,
            projective,
            sz_bd,
            merge_j,
        } => {
            let setting = setting_of(*projective);
            let x = hypersurface(g, poly, setting)?;
            let q = x.field().q();
            let flags = IntervalFlags {
                schwartz_zippel_bd: *sz_bd,
                merge_j: *merge_j,
            };
            let intervals = IntervalSystem::new(q, x.degree(), setting, flags)?;
            let census = plane_census(x.ambient_dim(), q, setting);
            let mode = match samples {
                Some(s) => SliceMode::MonteCarlo {
                    samples: *s,
                    seed: g.seed,
                },
                None if *exhaustive || census <= EXHAUSTIVE_DEFAULT_MAX.into() => {
                    SliceMode::Exhaustive
                }
                None => SliceMode::MonteCarlo {
                    samples: 10_000,
                    seed: g.seed,
                },
            };
            let rep = slice_distribution(&x, &intervals, mode, &options(g, MethodChoice::Auto))?;
            let tails = match mode {
                SliceMode::Exhaustive if setting == Setting::Affine => {
                    Some(chebyshev_tails(&rep, &intervals)?)
                }
                _ => None,
            };
            let mut v = to_value(&rep)?;
            if let Some(t) = tails {
                v["chebyshev"] = to_value(t)?;
            }
            Outcome::ok(v)
        }
        Command::Intervals {
            d,
            q,
            projective,
            sz_bd,
            merge_j,
            classify,
        } => {
            let q = field_order(g, *q)?;
            let flags = IntervalFlags {
                schwartz_zippel_bd: *sz_bd,
                merge_j: *merge_j,
            };
            let sys = IntervalSystem::new(q, *d, setting_of(*projective), flags)?;
            let mut v = to_value(sys.report())?;
            if let Some(c) = classify {
                v["classify"] = json!({
                    "count": c,
                    "bins": sys.membership(*c).iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                    "lowest": match sys.classify_lenient(*c) {
                        Classification::Bin(b) => b.to_string(),
                        Classification::OutOfInterval => "out_of_interval".to_string(),
                    },
                });
            }
            Outcome::ok(v)
        }
        Command::CheckBounds {
            poly,
            count,
            d,
            q,
            projective,
            geom_irred,
        } => {
            let setting = setting_of(*projective);
            let inputs = match poly {
                Some(text) => {
                    let x = hypersurface(g, text, setting)?;
                    let v = count_report(&x, &options(g, MethodChoice::Auto))?;
                    BoundInputs {
                        count: v["count"].as_u64().expect("count") as u128,
                        q: x.field().q(),
                        d: x.degree(),
                        n: x.ambient_dim(),
                        setting,
                        geometrically_irreducible: *geom_irred,
                    }
                }
                None => BoundInputs {
                    count: count
                        .ok_or_else(|| Error::InvalidArgument("give --poly or --count".into()))?,
                    q: field_order(g, *q)?,
                    d: d.ok_or_else(|| Error::InvalidArgument("--count needs --d".into()))?,
                    n: g.n,
                    setting,
                    geometrically_irreducible: *geom_irred,
                },
            };
            let rep = bound_report(inputs)?;
            let code = if rep.any_violated() {
                EXIT_FAILED
            } else {
                EXIT_OK
            };
            let mut v = to_value(&rep)?;
            v["any_violated"] = json!(rep.any_violated());
            Ok(Outcome { report: v, code })
        }
        Command::Thresholds { d, q } => {
            if *d == 0 {
                return Err(Error::InvalidArgument("degree must be >= 1".into()));
            }
            let q = match q {
                Some(q) => Some(field_order(g, Some(*q))?),
                None => None,
            };
            Outcome::ok(thresholds(*d, q))
        }
        Command::VerifyConstants { dmax } => {
            let rep = verify_proof_constants(*dmax)?;
            let code = if rep.all_passed { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome {
                report: to_value(rep)?,
                code,
            })
        }
        Command::Refine {
            d,
            rmax,
            exact_sums,
        } => {
            let table = iterate(*rmax, *d, !exact_sums)?;
            Outcome::ok(table.report(*rmax))
        }
        Command::Examples { family, d } => examples(g, *family, *d),
    }
}

/// The example polynomial with its variables laid out for dimension `n`.
pub fn example_polynomial(field: &Field, family: Family, d: u32, n: usize) -> Result<Hypersurface> {
    if d < 3 {
        return Err(Error::InvalidArgument(
            "example families need d >= 3".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be >= 2".into(),
        ));
    }
    let one = field.one();
    let minus_one = field.neg(one);
    let mono = |nv: usize, pairs: &[(usize, u32)]| {
        let mut e = vec![0u32; nv];
        for &(i, k) in pairs {
            e[i] += k;
        }
        e
    };
    let terms: Vec<(Vec<u32>, Elem)> = match family {
        Family::Hermitian => vec![
            (mono(n, &[(1, d - 1)]), one),
            (mono(n, &[(1, 1)]), one),
            (mono(n, &[(0, d)]), minus_one),
        ],
        Family::Lower => vec![
            (mono(n, &[(0, d - 1), (1, 1)]), one),
            (mono(n, &[(0, 1), (1, d - 1)]), one),
            (mono(n, &[]), minus_one),
        ],
        Family::Cone => vec![
            (mono(n + 1, &[(1, d - 1), (2, 1)]), one),
            (mono(n + 1, &[(1, 1), (2, d - 1)]), one),
            (mono(n + 1, &[(0, d)]), minus_one),
        ],
    };
    let nv = if family == Family::Cone { n + 1 } else { n };
    let f = MultiPoly::from_terms(field, nv, terms);
    match family {
        Family::Cone => Hypersurface::projective(f),
        _ => Hypersurface::affine(f),
    }
}

/// The family's closed-form count at `q`, when its hypotheses hold. The
/// maximal-curve families need `q` a power of `(d-1)^2` (odd power for the
/// cylinder; the cone's sign follows the parity). The lower family is only
/// asserted for large `q`, so it is reported for every square `q` in the
/// characteristic of `d-1` and may be off (even negative) for small `q`.
fn example_formula(family: Family, d: u32, q: u64, n: usize) -> Option<i128> {
    let (p0, m0) = prime_power_decomposition((d - 1) as u64)?;
    let (p, m) = prime_power_decomposition(q)?;
    if p != p0 || m % (2 * m0) != 0 {
        return None;
    }
    let k = m / (2 * m0);
    let s = (p as i128).pow(m / 2);
    let a = a_of(d);
    let qi = q as i128;
    let pw = |e: usize| qi.pow(e as u32);
    match family {
        Family::Hermitian if k % 2 == 1 => Some(pw(n - 2) * (qi + a * s)),
        Family::Hermitian => None,
        Family::Lower => Some(pw(n - 2) * (qi - a * s - d as i128 + 1)),
        Family::Cone => {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let tail: i128 = (0..=n - 2).map(pw).sum();
            Some(pw(n - 1) + sign * a * s * pw(n - 2) + tail)
        }
    }
}

fn a_of(d: u32) -> i128 {
    (d as i128 - 1) * (d as i128 - 2)
}

fn examples(g: &GlobalArgs, family: Family, d: u32) -> Result<Outcome> {
    let f = field(g)?;
    let x = example_polynomial(&f, family, d, g.n)?;
    let counted = count_report(&x, &options(g, MethodChoice::Auto))?;
    let count = counted["count"].as_u64().expect("count");
    let q = f.q();
    let bounds = bound_report(BoundInputs {
        count: count as u128,
        q,
        d,
        n: g.n,
        setting: x.setting(),
        geometrically_irreducible: true,
    })?;
    let formula = example_formula(family, d, q, g.n);
    let name = match family {
        Family::Hermitian => "hermitian",
        Family::Lower => "lower",
        Family::Cone => "cone",
    };
    Outcome::ok(json!({
        "schema": 1,
        "family": name,
        "poly": x.poly().to_string(),
        "d": d,
        "q": q,
        "n": g.n,
        "setting": x.setting(),
        "count": count,
        "formula": formula.map(|v| v.to_string()),
        "formula_matches": formula.map(|v| v == count as i128),
        "bounds": to_value(bounds)?,
    }))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Plain-text rendering: scalars as `key: value`, arrays of objects as
/// aligned columns, nested objects indented.
pub fn render_table(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out.trim_end().to_string()
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(val, indent + 2, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_rows(items, indent + 2, out);
                    }
                    Value::Array(items) => {
                        let cells: Vec<String> = items.iter().map(scalar).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", cells.join(", ")));
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(val))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn render_rows(items: &[Value], indent: usize, out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for it in items {
        if let Value::Object(m) = it {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|it| {
            cols.iter()
                .map(|c| it.get(c).map(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let pad = " ".repeat(indent);
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&cols));
    for r in &rows {
        out.push_str(&line(r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("langweil").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn json_of(args: &[&str]) -> (i32, Value) {
        let (code, out, err) = call(args);
        let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
        (code, v)
    }

    #[test]
    fn count_hermitian() {
        let (code, v) = json_of(&[
            "count",
            "--poly",
            "y^2+y-x^3",
            "--p",
            "2",
            "--m",
            "2",
            "--n",
            "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["count"], 8);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["setting"], "affine");
        assert!(v["elapsed_ms"].is_u64());
    }

    #[test]
    fn refine_table() {
        let (code, v) = json_of(&["refine", "--d", "3", "--rmax", "2"]);
        assert_eq!(code, 0);
        let rows = v["table"].as_array().unwrap();
        let last = rows.iter().find(|r| r["j"] == "2").unwrap();
        assert_eq!(last["D"], "35/2 + 1/6*pi^2");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["count", "--poly", "x^^2", "--p", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["count", "--poly", "x", "--p", "4"]).0, EXIT_USAGE);
        assert_eq!(
            call(&[
                "count",
                "--poly",
                "x+y+z+w",
                "--p",
                "101",
                "--n",
                "4",
                "--work-cap",
                "1000"
            ])
            .0,
            EXIT_CAP
        );
        assert_eq!(
            call(&["components", "--poly", "x^5+y", "--p", "2"]).0,
            EXIT_CAP
        );
        // N = 10 for a conic at q = 307 violates the lower bounds
        let (code, v) = json_of(&[
            "check-bounds",
            "--count",
            "10",
            "--d",
            "2",
            "--q",
            "307",
            "--geom-irred",
        ]);
        assert_eq!(code, EXIT_FAILED);
        assert_eq!(v["any_violated"], true);
    }

    #[test]
    fn verify_constants_small() {
        let (code, v) = json_of(&["verify-constants", "--dmax", "50"]);
        assert_eq!(code, 0);
        assert_eq!(v["all_passed"], true);
    }

    #[test]
    fn intervals_and_thresholds() {
        let (_, v) = json_of(&["intervals", "--d", "3", "--q", "49", "--classify", "2401"]);
        assert_eq!(v["classify"]["lowest"], "inf");
        assert_eq!(v["disjoint"], false);
        let (_, t) = json_of(&["thresholds", "--d", "2", "--q", "307"]);
        assert_eq!(t["first_prime_power_above_cm"], 307);
        assert_eq!(t["at_q"]["exceeds_cm"], true);
    }

    #[test]
    fn example_families() {
        let (code, v) = json_of(&[
            "examples", "--family", "lower", "--d", "3", "--p", "2", "--m", "4",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["count"], 6);
        assert_eq!(v["formula_matches"], true);
        let (_, v) = json_of(&[
            "examples", "--family", "cone", "--d", "3", "--p", "2", "--m", "2", "--n", "3",
        ]);
        assert_eq!(v["count"], 37);
        assert_eq!(v["formula_matches"], true);
        let (_, v) = json_of(&[
            "examples",
            "--family",
            "hermitian",
            "--d",
            "3",
            "--p",
            "2",
            "--m",
            "2",
            "--n",
            "3",
        ]);
        assert_eq!(v["count"], 32);
        assert_eq!(v["formula_matches"], true);
    }

    #[test]
    fn slice_and_components() {
        let (code, v) = json_of(&["slice", "--poly", "x", "--p", "3", "--n", "3"]);
        assert_eq!(code, 0);
        assert_eq!(v["planes"], 39);
        assert_eq!(v["out_of_interval"], 0);
        let (_, c) = json_of(&["components", "--poly", "x*y", "--p", "5"]);
        assert_eq!(c["k"], 2);
    }

    #[test]
    fn json_is_reproducible_and_table_renders() {
        let args = [
            "slice",
            "--poly",
            "y^2+y-x^3",
            "--p",
            "2",
            "--m",
            "2",
            "--n",
            "3",
            "--samples",
            "500",
            "--seed",
            "9",
        ];
        assert_eq!(call(&args).1, call(&args).1);
        let (code, out, _) = call(&["refine", "--d", "3", "--rmax", "1", "--output", "table"]);
        assert_eq!(code, 0);
        assert!(out.contains("1 + 1/6*pi^2"));
        assert!(out.lines().any(|l| l.trim_start().starts_with("j ")));
    }
}
