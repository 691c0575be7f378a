//! Command-line surface: parse mappings, run the engines, render reports.
//!
//! Commands: `exponent`, `branches`, `proper`, `estimate`, `check-lemma2`.
//! Input is `-e "f1; f2"` inline or `-f file` with one component per line;
//! an optional leading `vars: x y` declares the variables (default `x y`,
//! or `z1 ... zn` when the input only uses such names). Exact values print
//! exactly; numeric values print with 6 significant digits. `--json` emits
//! a machine-readable report whose key order is canonical: parsing and
//! re-serializing the output is byte-identical.

use std::io::Write;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::estimator::{estimate_exponent, lemma2_check, EstimateReport, RadiusLadder};
use crate::exponent::{lojasiewicz_exponent, DegenerateCase, ExponentReport, MappingSpec};
use crate::multipoly::MultiPoly;
use crate::parser::parse_poly;
use crate::rational::{rational_to_string, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Command {
    Exponent,
    Branches,
    Proper,
    Estimate,
    CheckLemma2,
}

/// One parsed invocation.
#[derive(Debug)]
pub struct JobSpec {
    pub command: Command,
    pub inline: Option<String>,
    pub file: Option<String>,
    pub seed: u64,
    pub json: bool,
    pub rmin: Option<f64>,
    pub rmax: Option<f64>,
    pub ratio: Option<f64>,
    pub samples: Option<usize>,
    pub probes: usize,
    pub csv: Option<String>,
}

const USAGE: &str = "usage: loja <command> (-e <inline> | -f <file>) [options]

commands:
  exponent      exact Lojasiewicz exponent at infinity with per-branch data
  branches      Puiseux branches at infinity of the product curve
  proper        properness verdict
  estimate      numeric slope estimate on a radius ladder
  check-lemma2  probe the root-gap inequality for univariate mappings

options:
  -e <text>        components inline, separated by ';'
  -f <path>        components from file, one per line
  --seed <int>     deterministic seed (default 0)
  --json           machine-readable output
  --rmin <float>   estimate: smallest radius (default 1e2)
  --rmax <float>   estimate: largest radius (default 1e6)
  --ratio <float>  estimate: ladder ratio (default sqrt(10))
  --samples <int>  estimate: samples per radius (default 64)
  --probes <int>   check-lemma2: number of probes (default 200)
  --csv <path>     estimate: dump (R, min_S, min_full) rows as CSV
";

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    eprintln!("{USAGE}");
    2
}

pub fn parse_args(args: &[String]) -> Result<JobSpec, String> {
    let mut it = args.iter();
    let cmd = match it.next().map(|s| s.as_str()) {
        Some("exponent") => Command::Exponent,
        Some("branches") => Command::Branches,
        Some("proper") => Command::Proper,
        Some("estimate") => Command::Estimate,
        Some("check-lemma2") => Command::CheckLemma2,
        Some(other) => return Err(format!("unknown command `{other}`")),
        None => return Err("missing command".into()),
    };
    let mut job = JobSpec {
        command: cmd,
        inline: None,
        file: None,
        seed: 0,
        json: false,
        rmin: None,
        rmax: None,
        ratio: None,
        samples: None,
        probes: 200,
        csv: None,
    };
    while let Some(flag) = it.next() {
        let mut value = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("flag `{name}` expects a value"))
        };
        match flag.as_str() {
            "-e" => job.inline = Some(value("-e")?),
            "-f" => job.file = Some(value("-f")?),
            "--seed" => {
                let v = value("--seed")?;
                job.seed = v
                    .parse()
                    .map_err(|_| format!("bad integer `{v}` for --seed"))?;
            }
            "--json" => job.json = true,
            "--rmin" => {
                let v = value("--rmin")?;
                job.rmin = Some(
                    v.parse()
                        .map_err(|_| format!("bad number `{v}` for --rmin"))?,
                );
            }
            "--rmax" => {
                let v = value("--rmax")?;
                job.rmax = Some(
                    v.parse()
                        .map_err(|_| format!("bad number `{v}` for --rmax"))?,
                );
            }
            "--ratio" => {
                let v = value("--ratio")?;
                job.ratio = Some(
                    v.parse()
                        .map_err(|_| format!("bad number `{v}` for --ratio"))?,
                );
            }
            "--samples" => {
                let v = value("--samples")?;
                job.samples = Some(
                    v.parse()
                        .map_err(|_| format!("bad integer `{v}` for --samples"))?,
                );
            }
            "--probes" => {
                let v = value("--probes")?;
                job.probes = v
                    .parse()
                    .map_err(|_| format!("bad integer `{v}` for --probes"))?;
            }
            "--csv" => job.csv = Some(value("--csv")?),
            other => return Err(format!("unknown flag `{other}`")),
        }
    }
    if job.inline.is_none() && job.file.is_none() {
        return Err("one of -e or -f is required".into());
    }
    if job.inline.is_some() && job.file.is_some() {
        return Err("-e and -f are mutually exclusive".into());
    }
    Ok(job)
}

/// Split raw input into an optional vars declaration and component sources.
fn split_input(raw: &str, from_file: bool) -> (Option<Vec<String>>, Vec<String>) {
    let pieces: Vec<String> = if from_file {
        raw.lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()
    } else {
        raw.split(';')
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()
    };
    if let Some(first) = pieces.first() {
        if let Some(rest) = first.strip_prefix("vars:") {
            let vars: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
            return (Some(vars), pieces[1..].to_vec());
        }
    }
    (None, pieces)
}

fn identifiers(sources: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in sources {
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() {
            if b[i].is_ascii_alphabetic() {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                let name = s[start..i].to_string();
                if !out.contains(&name) {
                    out.push(name);
                }
            } else {
                i += 1;
            }
        }
    }
    out
}

/// Default variable choice: `x y`, or `z1 ... zn` when the input uses only
/// such names.
fn choose_vars(declared: Option<Vec<String>>, sources: &[String]) -> Vec<String> {
    if let Some(v) = declared {
        if !v.is_empty() {
            return v;
        }
    }
    let idents = identifiers(sources);
    if !idents.is_empty()
        && idents.iter().all(|n| {
            n.starts_with('z') && n.len() > 1 && n[1..].chars().all(|c| c.is_ascii_digit())
        })
    {
        let max: usize = idents
            .iter()
            .map(|n| n[1..].parse::<usize>().unwrap_or(0))
            .max()
            .unwrap_or(2);
        return (1..=max.max(2)).map(|i| format!("z{i}")).collect();
    }
    vec!["x".into(), "y".into()]
}

fn parse_mapping(job: &JobSpec) -> Result<MappingSpec, String> {
    let (raw, from_file) = match (&job.inline, &job.file) {
        (Some(e), _) => (e.clone(), false),
        (_, Some(f)) => (
            std::fs::read_to_string(f).map_err(|e| format!("cannot read `{f}`: {e}"))?,
            true,
        ),
        _ => unreachable!(),
    };
    let (declared, sources) = split_input(&raw, from_file);
    if sources.is_empty() {
        return Err("no components in input".into());
    }
    let vars = choose_vars(declared, &sources);
    let vars_ref: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let comps: Result<Vec<MultiPoly>, String> = sources
        .iter()
        .map(|s| parse_poly(s, &vars_ref).map_err(|e| format!("in `{s}`: {e}")))
        .collect();
    MappingSpec::new(comps?).map_err(|e| e.to_string())
}

fn parse_univariates(job: &JobSpec) -> Result<Vec<Vec<Rational>>, String> {
    let (raw, from_file) = match (&job.inline, &job.file) {
        (Some(e), _) => (e.clone(), false),
        (_, Some(f)) => (
            std::fs::read_to_string(f).map_err(|e| format!("cannot read `{f}`: {e}"))?,
            true,
        ),
        _ => unreachable!(),
    };
    let (declared, sources) = split_input(&raw, from_file);
    if sources.is_empty() {
        return Err("no components in input".into());
    }
    let vars = match declared {
        Some(v) if v.len() == 1 => v,
        Some(v) => return Err(format!("check-lemma2 needs one variable, got {}", v.len())),
        None => {
            let idents = identifiers(&sources);
            match idents.len() {
                0 => vec!["t".to_string()],
                1 => idents,
                _ => return Err(format!("check-lemma2 needs one variable, got {idents:?}")),
            }
        }
    };
    let vars_ref: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut out = Vec::new();
    for s in &sources {
        let p = parse_poly(s, &vars_ref).map_err(|e| format!("in `{s}`: {e}"))?;
        let deg = p.degrees().per_var[0].unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.0[0] as usize] = c.clone();
        }
        out.push(coeffs);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// report shapes

fn rational_or_inf(r: &Option<Rational>) -> String {
    match r {
        Some(r) => rational_to_string(r),
        None => "-inf".to_string(),
    }
}

fn deg_or_inf(d: &Option<i64>) -> String {
    match d {
        Some(d) => d.to_string(),
        None => "-inf".to_string(),
    }
}

/// Round to 6 significant digits so reports are stable across platforms.
fn sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

#[derive(Serialize, Deserialize)]
struct BranchVerdictJson {
    ramification: u32,
    conjugacy_size: usize,
    deg_phi: i64,
    deg_compose: String,
    lambda: String,
    leading_coefficient: Option<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ExponentJson {
    exponent: String,
    proper: bool,
    degenerate_case: String,
    transform: Option<[[String; 2]; 2]>,
    witness: Option<usize>,
    branches: Vec<BranchVerdictJson>,
}

#[derive(Serialize, Deserialize)]
struct SeriesTermJson {
    exponent: i64,
    coefficient: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct BranchJson {
    ramification: u32,
    conjugacy_size: usize,
    deg_phi: i64,
    truncation_exponent: Option<i64>,
    series: Vec<SeriesTermJson>,
}

#[derive(Serialize, Deserialize)]
struct BranchesJson {
    transform: [[String; 2]; 2],
    curve: String,
    branches: Vec<BranchJson>,
}

#[derive(Serialize, Deserialize)]
struct SlopeFitJson {
    slope: f64,
    intercept: f64,
    residual: f64,
    used_tail: usize,
    points: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EstimateJson {
    restricted: SlopeFitJson,
    full: SlopeFitJson,
    agreement: f64,
    rows: Vec<[f64; 3]>,
}

#[derive(Serialize, Deserialize)]
struct Lemma2Json {
    holds: bool,
    worst_margin: f64,
    probes: usize,
}

fn transform_json(m: &[[Rational; 2]; 2]) -> [[String; 2]; 2] {
    [
        [rational_to_string(&m[0][0]), rational_to_string(&m[0][1])],
        [rational_to_string(&m[1][0]), rational_to_string(&m[1][1])],
    ]
}

fn exponent_json(rep: &ExponentReport) -> ExponentJson {
    ExponentJson {
        exponent: rational_or_inf(&rep.exponent),
        proper: rep.proper,
        degenerate_case: rep.degenerate_case.as_str().to_string(),
        transform: rep.transform.as_ref().map(transform_json),
        witness: rep.witness,
        branches: rep
            .branch_verdicts
            .iter()
            .map(|v| BranchVerdictJson {
                ramification: v.branch.ramification(),
                conjugacy_size: v.branch.conjugacy_size(),
                deg_phi: v.deg_phi,
                deg_compose: deg_or_inf(&v.deg_compose),
                lambda: rational_or_inf(&v.lambda),
                leading_coefficient: v.branch.leading_coefficient().map(|c| {
                    let e = c.enclosure(20);
                    let z = e.center_f64();
                    [sig6(z.re), sig6(z.im)]
                }),
            })
            .collect(),
    }
}

fn render_exponent_text(out: &mut dyn Write, rep: &ExponentReport) -> std::io::Result<()> {
    writeln!(out, "L_inf = {}", rational_or_inf(&rep.exponent))?;
    writeln!(out, "proper: {}", rep.proper)?;
    if rep.degenerate_case != DegenerateCase::None {
        writeln!(out, "degenerate case: {}", rep.degenerate_case.as_str())?;
    }
    if let Some(m) = &rep.transform {
        writeln!(
            out,
            "transform: [[{}, {}], [{}, {}]]",
            rational_to_string(&m[0][0]),
            rational_to_string(&m[0][1]),
            rational_to_string(&m[1][0]),
            rational_to_string(&m[1][1]),
        )?;
    }
    for (i, v) in rep.branch_verdicts.iter().enumerate() {
        let mark = if rep.witness == Some(i) {
            " <- witness"
        } else {
            ""
        };
        writeln!(
            out,
            "branch {}: p={} conj={} deg_phi={} deg(F.Phi)={} lambda={}{}",
            i,
            v.branch.ramification(),
            v.branch.conjugacy_size(),
            v.deg_phi,
            deg_or_inf(&v.deg_compose),
            rational_or_inf(&v.lambda),
            mark,
        )?;
    }
    Ok(())
}

fn run_exponent(job: &JobSpec, out: &mut dyn Write) -> Result<i32, String> {
    let f = parse_mapping(job)?;
    let rep = lojasiewicz_exponent(&f, job.seed).map_err(|e| e.to_string())?;
    if job.json {
        let j = exponent_json(&rep);
        writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
    } else {
        render_exponent_text(out, &rep).unwrap();
    }
    Ok(0)
}

fn run_proper(job: &JobSpec, out: &mut dyn Write) -> Result<i32, String> {
    let f = parse_mapping(job)?;
    let rep = lojasiewicz_exponent(&f, job.seed).map_err(|e| e.to_string())?;
    if job.json {
        #[derive(Serialize)]
        struct ProperJson {
            proper: bool,
            exponent: String,
        }
        let j = ProperJson {
            proper: rep.proper,
            exponent: rational_or_inf(&rep.exponent),
        };
        writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
    } else if rep.proper {
        writeln!(out, "proper (L_inf = {})", rational_or_inf(&rep.exponent)).unwrap();
    } else {
        writeln!(
            out,
            "not proper (L_inf = {})",
            rational_or_inf(&rep.exponent)
        )
        .unwrap();
    }
    Ok(0)
}

fn run_branches(job: &JobSpec, out: &mut dyn Write) -> Result<i32, String> {
    let f = parse_mapping(job)?;
    if f.num_vars() != 2 {
        return Err("branches requires a two-variable mapping".into());
    }
    let vars_ref: Vec<&str> = f.variables().iter().map(|s| s.as_str()).collect();
    let mut product = MultiPoly::one(&vars_ref);
    for c in f.components() {
        if !c.is_zero() {
            product = product.mul(c).unwrap();
        }
    }
    if product.is_zero() || product.is_constant() {
        return Err("the product of components has no curve".into());
    }
    let radical = crate::gcd::squarefree_part(&product).map_err(|e| e.to_string())?;
    let (grep, h) = crate::puiseux::genericize(&radical, job.seed).map_err(|e| e.to_string())?;
    let branches = crate::puiseux::expand_branches(&h).map_err(|e| e.to_string())?;
    let to_json = |b: &crate::puiseux::Branch| -> BranchJson {
        BranchJson {
            ramification: b.ramification(),
            conjugacy_size: b.conjugacy_size(),
            deg_phi: b.deg_phi(),
            truncation_exponent: b.truncation_exponent(),
            series: b
                .series()
                .iter()
                .map(|(e, c)| {
                    let z = c.enclosure(20).center_f64();
                    SeriesTermJson {
                        exponent: *e,
                        coefficient: [sig6(z.re), sig6(z.im)],
                    }
                })
                .collect(),
        }
    };
    if job.json {
        let j = BranchesJson {
            transform: transform_json(&grep.transform),
            curve: h.to_string(),
            branches: branches.iter().map(to_json).collect(),
        };
        writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
    } else {
        writeln!(out, "curve: {h}").unwrap();
        writeln!(
            out,
            "transform: [[{}, {}], [{}, {}]]",
            rational_to_string(&grep.transform[0][0]),
            rational_to_string(&grep.transform[0][1]),
            rational_to_string(&grep.transform[1][0]),
            rational_to_string(&grep.transform[1][1]),
        )
        .unwrap();
        for (i, b) in branches.iter().enumerate() {
            let series = b
                .series()
                .iter()
                .map(|(e, c)| {
                    let z = c.enclosure(20).center_f64();
                    format!("({}{:+}i)*t^{}", sig6(z.re), sig6(z.im), e)
                })
                .collect::<Vec<_>>()
                .join(" + ");
            let series = if series.is_empty() {
                "0".to_string()
            } else {
                series
            };
            writeln!(
                out,
                "branch {}: x = t^{}, y = {}  (conj {}, trunc {})",
                i,
                b.ramification(),
                series,
                b.conjugacy_size(),
                b.truncation_exponent()
                    .map(|t| t.to_string())
                    .unwrap_or_else(|| "exact".into()),
            )
            .unwrap();
        }
    }
    Ok(0)
}

fn run_estimate(job: &JobSpec, out: &mut dyn Write) -> Result<i32, String> {
    let f = parse_mapping(job)?;
    let mut ladder = RadiusLadder {
        seed: job.seed,
        ..Default::default()
    };
    if let Some(s) = job.samples {
        ladder.samples_per_radius = s;
    }
    if let Some(r) = job.ratio {
        ladder.ratio = r;
    }
    let rmin = job.rmin.unwrap_or(ladder.r0);
    let rmax = job.rmax.unwrap_or(rmin * ladder.ratio.powi(8));
    if !(rmax > rmin) {
        return Err("--rmax must exceed --rmin".into());
    }
    ladder.r0 = rmin;
    ladder.count = ((rmax / rmin).ln() / ladder.ratio.ln()).round() as usize + 1;
    let rep = estimate_exponent(&f, &ladder).map_err(|e| e.to_string())?;
    if let Some(path) = &job.csv {
        let mut csv = String::from("R,min_S,min_full\n");
        for (r, ms, mf) in &rep.rows {
            csv.push_str(&format!("{r:e},{ms:e},{mf:e}\n"));
        }
        std::fs::write(path, csv).map_err(|e| format!("cannot write `{path}`: {e}"))?;
    }
    if job.json {
        let to_fit = |s: &crate::estimator::SlopeFit| SlopeFitJson {
            slope: sig6(s.slope),
            intercept: sig6(s.intercept),
            residual: sig6(s.residual),
            used_tail: s.used_tail,
            points: s.points.iter().map(|(a, b)| [sig6(*a), sig6(*b)]).collect(),
        };
        let j = EstimateJson {
            restricted: to_fit(&rep.restricted),
            full: to_fit(&rep.full),
            agreement: sig6(rep.agreement),
            rows: rep
                .rows
                .iter()
                .map(|(r, a, b)| [sig6(*r), sig6(*a), sig6(*b)])
                .collect(),
        };
        writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
    } else {
        render_estimate_text(out, &rep).unwrap();
    }
    Ok(0)
}

fn render_estimate_text(out: &mut dyn Write, rep: &EstimateReport) -> std::io::Result<()> {
    writeln!(out, "{:>12} {:>14} {:>14}", "R", "min_S", "min_full")?;
    for (r, ms, mf) in &rep.rows {
        writeln!(out, "{:>12.4e} {:>14.6e} {:>14.6e}", r, ms, mf)?;
    }
    writeln!(
        out,
        "restricted slope: {} (residual {}, tail {})",
        sig6(rep.restricted.slope),
        sig6(rep.restricted.residual),
        rep.restricted.used_tail,
    )?;
    writeln!(
        out,
        "full slope:       {} (residual {}, tail {})",
        sig6(rep.full.slope),
        sig6(rep.full.residual),
        rep.full.used_tail,
    )?;
    writeln!(out, "agreement: {}", sig6(rep.agreement))?;
    Ok(())
}

fn run_lemma2(job: &JobSpec, out: &mut dyn Write) -> Result<i32, String> {
    let comps = parse_univariates(job)?;
    let (holds, worst) = lemma2_check(&comps, job.probes, job.seed).map_err(|e| e.to_string())?;
    if job.json {
        let j = Lemma2Json {
            holds,
            worst_margin: sig6(worst),
            probes: job.probes,
        };
        writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
    } else {
        writeln!(out, "holds: {holds} (worst margin {})", sig6(worst)).unwrap();
    }
    Ok(0)
}

/// Run a parsed invocation, writing the report to `out`.
pub fn run_to(args: &[String], out: &mut dyn Write) -> i32 {
    let job = match parse_args(args) {
        Ok(j) => j,
        Err(msg) => return usage_error(&msg),
    };
    let result = match job.command {
        Command::Exponent => run_exponent(&job, out),
        Command::Branches => run_branches(&job, out),
        Command::Proper => run_proper(&job, out),
        Command::Estimate => run_estimate(&job, out),
        Command::CheckLemma2 => run_lemma2(&job, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => usage_error(&msg),
    }
}

/// CLI entry point: 0 on success, 2 on usage or input errors, 1 on an
/// internal invariant violation.
pub fn run(args: &[String]) -> i32 {
    let out = std::io::stdout();
    let mut lock = out.lock();
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run_to(args, &mut lock))) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("internal error");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut buf = Vec::new();
        let code = run_to(&argv, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn exponent_identity_json() {
        let (code, out) = run_capture(&["exponent", "-e", "x; y", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["exponent"], "1");
        assert_eq!(v["proper"], true);
        assert_eq!(v["degenerate_case"], "none");
        // canonical order: re-serializing is byte-identical
        assert_eq!(serde_json::to_string(&v).unwrap(), out.trim_end());
    }

    #[test]
    fn proper_text_matches_format() {
        let (code, out) = run_capture(&["proper", "-e", "x; x*y-1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim_end(), "not proper (L_inf = -1)");
    }

    #[test]
    fn exponent_and_proper_agree() {
        for map in ["x; y", "y; x - y^3", "x; x*y - 1", "x; x"] {
            let (c1, out1) = run_capture(&["exponent", "-e", map, "--json"]);
            let (c2, out2) = run_capture(&["proper", "-e", map, "--json"]);
            assert_eq!((c1, c2), (0, 0));
            let v1: serde_json::Value = serde_json::from_str(&out1).unwrap();
            let v2: serde_json::Value = serde_json::from_str(&out2).unwrap();
            assert_eq!(v1["proper"], v2["proper"]);
            let e = v1["exponent"].as_str().unwrap();
            let positive = e != "-inf" && !e.starts_with('-') && e != "0";
            assert_eq!(v1["proper"].as_bool().unwrap(), positive, "map {map}");
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _) = run_capture(&["exponent"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["frobnicate", "-e", "x"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["exponent", "-e", "x + $"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["exponent", "-e", "x", "--bogus"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn branches_json_shape() {
        let (code, out) = run_capture(&["branches", "-e", "y; x - y^3", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let branches = v["branches"].as_array().unwrap();
        assert_eq!(branches.len(), 2);
        let total: i64 = branches
            .iter()
            .map(|b| b["ramification"].as_i64().unwrap() * b["conjugacy_size"].as_i64().unwrap())
            .sum();
        assert_eq!(total, 4); // deg_y of the genericized quartic product
    }

    #[test]
    fn all_json_outputs_round_trip() {
        let invocations: Vec<Vec<&str>> = vec![
            vec!["exponent", "-e", "y; x - y^3", "--json"],
            vec!["branches", "-e", "y^2 - x^3", "--json"],
            vec!["proper", "-e", "x; y", "--json"],
            vec![
                "estimate", "-e", "x; y", "--rmin", "1e2", "--rmax", "1e4",
                "--samples", "16", "--json",
            ],
            vec!["check-lemma2", "-e", "t; t - 1", "--probes", "30", "--json"],
        ];
        for args in invocations {
            let (code, out) = run_capture(&args);
            assert_eq!(code, 0, "{args:?}");
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            assert_eq!(
                serde_json::to_string(&v).unwrap(),
                out.trim_end(),
                "round trip for {args:?}"
            );
        }
    }

    #[test]
    fn lemma2_cli() {
        let (code, out) = run_capture(&["check-lemma2", "-e", "t; t - 1", "--probes", "50"]);
        assert_eq!(code, 0);
        assert!(out.contains("holds: true"), "{out}");
    }

    #[test]
    fn vars_detection() {
        // z-style names pick up the z1..zn convention
        let (code, out) = run_capture(&[
            "estimate",
            "-e",
            "z1; z2; z3",
            "--rmin",
            "1e2",
            "--rmax",
            "1e4",
            "--samples",
            "16",
            "--json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["restricted"]["slope"].is_number());
    }

    #[test]
    fn file_input_with_vars_line() {
        let dir = std::env::temp_dir().join("loja_cli_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("map.txt");
        std::fs::write(&path, "vars: u v\nu\nu*v - 1\n").unwrap();
        let (code, out) = run_capture(&["exponent", "-f", path.to_str().unwrap(), "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["exponent"], "-1");
    }
}
