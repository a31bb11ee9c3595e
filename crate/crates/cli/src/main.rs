//! `ocl`: generate, evaluate, search, verify and draw oriented-disc
//! configurations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ocl_core::canonical::canonical;
use ocl_core::diagnostics::{density_profile, diagnose_analysis};
use ocl_core::energy::{analyze, decompose_analysis, energy, hr_energy, is_critical, summarize};
use ocl_core::io::{format_config, read_config};
use ocl_core::search::{anneal, check_asymptotic_bounds, SearchConfig};
use ocl_core::verify::{run_suite, Suite};
use ocl_core::{Config64, Error, Tolerances64};
use serde::Serialize;

const SCHEMA: &str = "ocl-report/1";

#[derive(Parser)]
#[command(name = "ocl", version, about = "Oriented discs with cone-restricted bonds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the canonical diamond configuration with n particles.
    GenCanonical {
        #[arg(long)]
        n: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy and the graph quantities of a configuration.
    Energy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = critical())]
        gamma: f64,
        #[arg(long)]
        json: bool,
    },
    /// Simulated annealing for a low-energy configuration.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = critical())]
        gamma: f64,
        #[arg(long, default_value_t = 16)]
        seeds: usize,
        #[arg(long, default_value_t = 200_000)]
        iters: u64,
        #[arg(long, default_value_t = 0.15)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the best configuration here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start every chain from a random cluster, never from the
        /// reference minimizer.
        #[arg(long)]
        cold: bool,
        #[arg(long)]
        json: bool,
    },
    /// Randomized verification suites; exit code 1 on any failure.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Draw a configuration as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = critical())]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compactness diagnostics of canonical configurations, as CSV.
    Diagnose {
        /// Comma separated sizes; `a..b` is an inclusive range.
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energies of the reference minimizers against the bulk bounds, as CSV.
    Asymptotic {
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long, default_value_t = critical())]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smoothed density of the rhombic faces, as CSV.
    Density {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn critical() -> f64 {
    3f64.sqrt() / 2.0
}

/// Failure of a command, with its exit code.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::BadOrientation { .. }
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::InvalidGamma(_)
            | Error::InvalidRho(_)
            | Error::InvalidTolerance(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Config64, Failure> {
    read_config(path).map_err(|e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        f => f,
    })
}

/// Writes `text` to `out`, or appends it to the standard output buffer.
fn emit(sink: &mut String, out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            sink.push_str(text);
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn report<T: Serialize>(command: &str, body: T) -> String {
    to_json(&Report {
        schema: SCHEMA,
        command,
        body,
    })
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("bad --n-list `{s}`"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn check_gamma(gamma: f64) -> Result<(), Failure> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("gamma {gamma} not in [0, 1]")))
    }
}

#[derive(Serialize)]
struct EnergyOut {
    gamma: f64,
    n: usize,
    energy: i64,
    hr_energy: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<ocl_core::energy::EnergySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<ocl_core::energy::EnergyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_energy(sink: &mut String, input: &Path, gamma: f64, json: bool) -> Result<(), Failure> {
    check_gamma(gamma)?;
    let tol = Tolerances64::default();
    let c = load(input)?;
    let mut out = EnergyOut {
        gamma,
        n: c.len(),
        energy: energy(&c, gamma, &tol)?,
        hr_energy: hr_energy(&c, &tol),
        summary: None,
        decomposition: None,
        note: None,
    };
    match analyze(&c, gamma, &tol) {
        Ok(a) => {
            out.summary = Some(summarize(&c, &a, &tol));
            if is_critical(gamma) {
                out.decomposition = Some(decompose_analysis(&a)?);
            }
        }
        Err(e) => out.note = Some(e.to_string()),
    }
    if json {
        return emit(sink, None, &report("energy", out));
    }
    let mut s = String::new();
    let _ = writeln!(s, "n        {}", out.n);
    let _ = writeln!(s, "E        {}", out.energy);
    let _ = writeln!(s, "E_HR     {}", out.hr_energy);
    if let Some(m) = &out.summary {
        let _ = writeln!(s, "per      {}", m.per);
        let _ = writeln!(s, "per_gr   {}", m.per_gr);
        let _ = writeln!(s, "chi      {}", m.chi);
    }
    if let Some(d) = &out.decomposition {
        let _ = writeln!(s, "def_gr   {}", d.def_gr);
        let _ = writeln!(s, "F        {}", d.f_surface);
        let _ = writeln!(s, "residual {}", d.residual);
    }
    if let Some(n) = &out.note {
        let _ = writeln!(s, "note     {n}");
    }
    emit(sink, None, &s)
}

#[derive(Serialize)]
struct SearchOut<'a> {
    config: &'a SearchConfig,
    best_energy: i64,
    seed_of_best: usize,
    seed_bests: &'a [i64],
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    sink: &mut String,
    n: usize,
    gamma: f64,
    seeds: usize,
    iters: u64,
    sigma: f64,
    seed: u64,
    out: Option<&Path>,
    cold: bool,
    json: bool,
) -> Result<(), Failure> {
    let mut cfg = SearchConfig::new(n, gamma);
    cfg.seeds = seeds;
    cfg.iters = iters;
    cfg.sigma = sigma;
    cfg.rng_seed = seed;
    cfg.warm_start = !cold;
    let r = anneal(&cfg)?;
    if let Some(p) = out {
        emit(sink, Some(p), &format_config(&r.best_config))?;
    }
    if json {
        emit(sink, None,
            &report(
                "search",
                SearchOut {
                    config: &cfg,
                    best_energy: r.best_energy,
                    seed_of_best: r.seed_of_best,
                    seed_bests: &r.seed_bests,
                },
            ),
        )
    } else {
        emit(sink, None, &format!("E {}\nseed_of_best {}\n", r.best_energy, r.seed_of_best))
    }
}

fn cmd_verify(sink: &mut String, suite: &str, trials: u64, seed: u64, json: bool) -> Result<bool, Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, trials, seed)).collect();
    let ok = reports.iter().all(|r| r.passed());
    if json {
        emit(sink, None, &report("verify", serde_json::json!({ "passed": ok, "suites": reports })))?;
    } else {
        let mut s = String::new();
        for r in &reports {
            let _ = writeln!(
                s,
                "{} {:<14} trials={} checked={} failures={} elapsed={:.3}s",
                if r.passed() { "PASS" } else { "FAIL" },
                r.suite.name(),
                r.trials,
                r.checked,
                r.failures.len(),
                r.elapsed.as_secs_f64()
            );
            for (sd, msg) in r.failures.iter().take(10) {
                let _ = writeln!(s, "  seed {sd}: {msg}");
            }
        }
        emit(sink, None, &s)?;
    }
    Ok(ok)
}

fn cmd_diagnose(sink: &mut String, n_list: &str, out: Option<&Path>) -> Result<(), Failure> {
    let tol = Tolerances64::default();
    let ns = parse_n_list(n_list)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let a = analyze(&canonical::<f64>(n as u64), critical(), &tol)?;
        rows.push(diagnose_analysis(&a));
    }
    let c_fit = rows.iter().map(|d| d.z_ratio()).fold(0.0, f64::max);
    let mut s = String::from(
        "n,z_count,rhombic_area,rhombic_perimeter,mass_residual,scaled_energy,z_ratio,c_fit\n",
    );
    for d in &rows {
        let _ = writeln!(
            s,
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            d.n,
            d.z_count,
            d.rhombic_area,
            d.rhombic_perimeter,
            d.mass_residual,
            d.scaled_energy,
            d.z_ratio(),
            c_fit
        );
    }
    emit(sink, out, &s)
}

fn cmd_asymptotic(sink: &mut String, n_list: &str, gamma: f64, out: Option<&Path>) -> Result<(), Failure> {
    let r = check_asymptotic_bounds(&parse_n_list(n_list)?, gamma)?;
    let mut s = String::from("n,energy,lower_ok,scaled,scaled_half,c_fit,c_fit_half\n");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            row.n, row.energy, row.lower_ok, row.scaled, row.scaled_half, r.c_fit, r.c_fit_half
        );
    }
    emit(sink, out, &s)
}

fn run(cli: Cli, sink: &mut String) -> Result<u8, Failure> {
    match cli.command {
        Command::GenCanonical { n, out } => {
            emit(sink, out.as_deref(), &format_config(&canonical::<f64>(n)))?;
        }
        Command::Energy { input, gamma, json } => cmd_energy(sink, &input, gamma, json)?,
        Command::Search {
            n,
            gamma,
            seeds,
            iters,
            sigma,
            seed,
            out,
            cold,
            json,
        } => cmd_search(sink, n, gamma, seeds, iters, sigma, seed, out.as_deref(), cold, json)?,
        Command::Verify {
            suite,
            trials,
            seed,
            json,
        } => {
            if !cmd_verify(sink, &suite, trials, seed, json)? {
                return Ok(1);
            }
        }
        Command::Render { input, gamma, out } => {
            check_gamma(gamma)?;
            let c = load(&input)?;
            let svg = ocl_core::render::render_svg(&c, gamma, &Tolerances64::default())?;
            emit(sink, out.as_deref(), &svg)?;
        }
        Command::Diagnose { n_list, out } => cmd_diagnose(sink, &n_list, out.as_deref())?,
        Command::Asymptotic { n_list, gamma, out } => cmd_asymptotic(sink, &n_list, gamma, out.as_deref())?,
        Command::Density { input, step, out } => {
            let c = load(&input)?;
            let a = analyze(&c, critical(), &Tolerances64::default())?;
            emit(sink, out.as_deref(), &density_profile(&a, step)?.to_csv())?;
        }
    }
    Ok(0)
}

/// Runs a parsed command line, returning its exit code and standard output.
fn execute(cli: Cli) -> (u8, String, Option<String>) {
    let mut sink = String::new();
    match run(cli, &mut sink) {
        Ok(code) => (code, sink, None),
        Err(Failure::Usage(m)) => (2, sink, Some(m)),
        Err(Failure::Runtime(m)) => (1, sink, Some(m)),
    }
}

fn main() -> ExitCode {
    let (code, out, err) = execute(Cli::parse());
    print!("{out}");
    if let Some(m) = err {
        eprintln!("error: {m}");
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ocl(args: &[&str]) -> (u8, String) {
        let cli = Cli::try_parse_from(std::iter::once("ocl").chain(args.iter().copied())).unwrap();
        let (code, out, _) = execute(cli);
        (code, out)
    }

    fn json(args: &[&str]) -> serde_json::Value {
        let (code, out) = ocl(args);
        assert_eq!(code, 0);
        serde_json::from_str(&out).unwrap()
    }

    fn body_lines(s: &str) -> usize {
        s.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count()
    }

    #[test]
    fn gen_canonical_counts() {
        let (code, out) = ocl(&["gen-canonical", "--n", "9"]);
        assert_eq!(code, 0);
        assert_eq!(body_lines(&out), 9);
        assert_eq!(body_lines(&ocl(&["gen-canonical", "--n", "0"]).1), 0);
    }

    #[test]
    fn energy_of_canonical_seven() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("y7.txt");
        let p = path.to_str().unwrap();
        assert_eq!(ocl(&["gen-canonical", "--n", "7", "--out", p]), (0, String::new()));
        let v = json(&["energy", "--in", p, "--json"]);
        assert_eq!(v["schema"], "ocl-report/1");
        assert_eq!(v["energy"], -8);
        assert_eq!(v["hr_energy"], -10);
        assert_eq!(v["decomposition"]["residual"], 0);
    }

    #[test]
    fn single_particle() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.txt");
        fs::write(&path, "# OCL v1\n0 0 1 0\n").unwrap();
        assert_eq!(json(&["energy", "--in", path.to_str().unwrap(), "--json"])["energy"], 0);
    }

    #[test]
    fn bad_input_exits_two() {
        assert_eq!(ocl(&["energy", "--in", "/nonexistent/cfg.txt"]).0, 2);
        assert_eq!(ocl(&["verify", "--suite", "bogus"]).0, 2);
        assert_eq!(ocl(&["search", "--n", "3", "--gamma", "1.5"]).0, 2);
        assert_eq!(ocl(&["diagnose", "--n-list", "9..3"]).0, 2);
        let e = Cli::try_parse_from(["ocl", "gen-canonical"]).err().unwrap();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn render_svg_counts() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("y9.txt");
        let p = path.to_str().unwrap();
        ocl(&["gen-canonical", "--n", "9", "--out", p]);
        let (code, svg) = ocl(&["render", "--in", p]);
        assert_eq!(code, 0);
        assert_eq!(svg.matches("class=\"disc\"").count(), 9);
        assert_eq!(svg.matches("class=\"bond\"").count(), 12);
        assert_eq!(svg.matches("class=\"rhombus\"").count(), 4);
    }

    #[test]
    fn search_small() {
        let best = |args: &[&str]| {
            let mut a = vec!["search", "--json"];
            a.extend_from_slice(args);
            json(&a)["best_energy"].as_i64().unwrap()
        };
        assert_eq!(best(&["--n", "1", "--iters", "100", "--seeds", "1"]), 0);
        assert_eq!(best(&["--n", "4", "--iters", "2000", "--seeds", "2"]), -4);
        assert_eq!(best(&["--n", "12", "--gamma", "0.95", "--iters", "2000", "--seeds", "2"]), -12);
    }

    #[test]
    fn verify_and_lists() {
        let (code, out) = ocl(&["verify", "--suite", "angles", "--trials", "20"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("PASS angles"));
        assert_eq!(parse_n_list("1, 3..5,7").ok(), Some(vec![1, 3, 4, 5, 7]));
        assert!(parse_n_list("").is_err());
    }
}
