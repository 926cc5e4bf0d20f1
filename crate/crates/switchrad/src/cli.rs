//! Command-line front end.
//!
//! Five subcommands wrap the library: `radius` (exact radius of a system
//! file), `scan` (radius over an angle grid, CSV), `estimate` (finite-depth
//! joint-spectral rates), `search` (optimal switching sequence), and
//! `certify` (pointwise stabilizability certificate). Data goes to stdout
//! (or `--out`); diagnostics go to stderr. Exit codes: 0 success,
//! 2 parse/validation, 3 budget, 4 numeric failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::diophantine::RealInput;
use crate::error::{Error, Result};
use crate::io::{
    self, parse_matrix_set, CertifyReportDoc, EstimateReportDoc, ParsedInput, RadiusReportDoc,
    ScanRow, SearchReportDoc, SCHEMA_VERSION,
};
use crate::radius::{
    canonicalize, exact_radius, CanonicalParams, RadiusConfig, SingularRotationSystem,
};
use crate::search::{
    enumerate_rates, optimal_sequence_search, stabilizability_certificate, MatrixSet, Objective,
    SearchBudget,
};
use crate::{bounds, TAU_EIG, TAU_SV};

/// Environment variable overriding the decimal precision budget.
pub const PRECISION_ENV: &str = "SWITCHRAD_PRECISION";

#[derive(Parser, Debug)]
#[command(
    name = "switchrad",
    version,
    about = "Stabilizability radii of switched linear systems with singular matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Spectral radius of the product.
    Sr,
    /// Euclidean operator norm of the product.
    Norm,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact stabilizability radius of a singular-plus-rotation system file.
    Radius {
        /// JSON matrix set with a "roles" object naming the pair.
        #[arg(long)]
        system: PathBuf,
        /// Rotation angle in units of pi: "p/q", a decimal, or "cf:[a1,a2,...]".
        /// Defaults to the angle extracted from the rotation factor, carried
        /// as a 15-digit decimal.
        #[arg(long)]
        alpha: Option<String>,
        /// Exhaustive cycle-length scan bound for irrational angles.
        #[arg(long, default_value_t = 10_000)]
        l_cap: u64,
        /// Decimal precision override (also via SWITCHRAD_PRECISION).
        #[arg(long)]
        precision: Option<u32>,
        /// Relative singular-value tolerance.
        #[arg(long, default_value_t = TAU_SV)]
        tau_sv: f64,
        /// Complex-spectrum discriminant margin.
        #[arg(long, default_value_t = TAU_EIG)]
        tau_eig: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radius over a grid of rotation angles; emits CSV
    /// (`alpha,value,case,witness_l,certified`).
    Scan {
        /// Number of grid angles: k/(N+1) for k = 1..=N.
        #[arg(long)]
        grid: Option<usize>,
        /// Explicit comma-separated angle specs instead of a grid.
        #[arg(long)]
        alphas: Option<String>,
        /// Use numerators over the smallest odd denominator > N instead of
        /// the uniform grid, avoiding the exact zeros at even denominators.
        #[arg(long)]
        odd: bool,
        /// Sample angles uniformly from (0,1) as 15-digit decimals.
        #[arg(long)]
        random: bool,
        /// Seed for --random.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Template: gain of the singular factor.
        #[arg(long, default_value_t = 2.0)]
        lambda2: f64,
        /// Template: modulus of the rotation eigenvalues.
        #[arg(long, default_value_t = 1.0)]
        rho3: f64,
        /// Template: kernel/image angle in units of pi, in (0, 1/2].
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 10_000)]
        l_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-depth norm and spectral-radius rate estimates over a set.
    Estimate {
        #[arg(long)]
        set: PathBuf,
        /// Enumeration depth T.
        #[arg(long)]
        depth: usize,
        /// Product-count guard (m^T must stay below it).
        #[arg(long, default_value_t = 1e7)]
        guard: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive optimal-sequence search at a fixed length.
    Search {
        #[arg(long)]
        set: PathBuf,
        /// Sequence length t.
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "sr")]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 1e7)]
        guard: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise stabilizability certificate over x0 = (cos θ, sin θ).
    Certify {
        #[arg(long)]
        set: PathBuf,
        /// Comma-separated products, each a string of one-based member
        /// digits written newest-first (e.g. "12,122" for M1·M2 and
        /// M1·M2·M2). Empty string = no products.
        #[arg(long, default_value = "")]
        products: String,
        /// Grid size over [0, π].
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Coverage margin: a sample is covered when some norm < 1 − margin.
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses an angle spec: `p/q`, a decimal literal, or `cf:[a1,a2,…]`.
pub fn parse_alpha_spec(s: &str) -> Result<RealInput> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("cf:") {
        let body = body
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("cf spec must look like cf:[a1,a2,…]; got {s:?}")))?;
        let digits = body
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("cf digit {d:?}: {e}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        return RealInput::cf(0, digits);
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("numerator {p:?}: {e}")))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("denominator {q:?}: {e}")))?;
        return RealInput::rational(p, q);
    }
    RealInput::decimal_str(s)
}

/// Entry point used by the binary and by tests. Returns the process exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Output { content, out }) => match out {
            Some(path) => {
                if let Err(e) = std::fs::write(&path, content) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
                0
            }
            None => {
                print!("{content}");
                0
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Output {
    content: String,
    out: Option<PathBuf>,
}

fn dispatch(command: Command) -> Result<Output> {
    match command {
        Command::Radius {
            system,
            alpha,
            l_cap,
            precision,
            tau_sv,
            tau_eig,
            out,
        } => run_radius(system, alpha, l_cap, precision, tau_sv, tau_eig, out),
        Command::Scan {
            grid,
            alphas,
            odd,
            random,
            seed,
            lambda2,
            rho3,
            beta,
            l_cap,
            out,
        } => run_scan(grid, alphas, odd, random, seed, lambda2, rho3, beta, l_cap, out),
        Command::Estimate {
            set,
            depth,
            guard,
            out,
        } => run_estimate(set, depth, guard, out),
        Command::Search {
            set,
            length,
            objective,
            guard,
            out,
        } => run_search(set, length, objective, guard, out),
        Command::Certify {
            set,
            products,
            grid,
            margin,
            out,
        } => run_certify(set, products, grid, margin, out),
    }
}

fn check_tolerance(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1e-3) {
        return Err(Error::InvalidConfig(format!(
            "{name} must lie in (0, 1e-3); got {v}"
        )));
    }
    Ok(())
}

fn effective_precision(flag: Option<u32>) -> Result<Option<u32>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let digits: u32 = v.parse().map_err(|e| {
                Error::InvalidConfig(format!("{PRECISION_ENV}={v:?}: {e}"))
            })?;
            if digits == 0 || digits > 300 {
                return Err(Error::InvalidConfig(format!(
                    "{PRECISION_ENV} must be in 1..=300; got {digits}"
                )));
            }
            Ok(Some(digits))
        }
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_radius(
    system_path: PathBuf,
    alpha_spec: Option<String>,
    l_cap: u64,
    precision: Option<u32>,
    tau_sv: f64,
    tau_eig: f64,
    out: Option<PathBuf>,
) -> Result<Output> {
    check_tolerance("tau-sv", tau_sv)?;
    check_tolerance("tau-eig", tau_eig)?;
    if l_cap == 0 {
        return Err(Error::InvalidConfig("l-cap must be positive".into()));
    }
    let parsed = parse_matrix_set(&system_path)?;
    let ParsedInput::System { set, roles, .. } = parsed else {
        return Err(Error::Validation(
            "radius needs a document with a \"roles\" object naming the singular and rotation members"
                .into(),
        ));
    };
    let system = SingularRotationSystem::new_with_tol(
        set.member(roles.singular).clone(),
        set.member(roles.rotation).clone(),
        tau_sv,
        tau_eig,
    )?;
    let params = match canonicalize(&system) {
        Ok(c) => c.params,
        Err(Error::NilpotentSystem) => CanonicalParams {
            lambda2: 0.0,
            rho3: 1.0,
            alpha: 0.5,
            beta: 0.5,
        },
        Err(e) => return Err(e),
    };
    let spec_string = alpha_spec.unwrap_or_else(|| format!("{:.15}", params.alpha));
    let mut alpha = parse_alpha_spec(&spec_string)?;
    if let Some(digits) = effective_precision(precision)? {
        alpha = alpha.with_precision(digits);
    }
    // Nilpotent systems skip the angle consistency check: any alpha gives 0.
    let alpha_for_run = if params.lambda2 == 0.0 {
        RealInput::rational(1, 2).unwrap()
    } else {
        alpha
    };
    let cfg = RadiusConfig {
        l_cap,
        ..RadiusConfig::default()
    };
    let result = exact_radius(&params, &alpha_for_run, &cfg)?;
    let config = json!({
        "command": "radius",
        "system": system_path.display().to_string(),
        "alpha": spec_string,
        "l_cap": l_cap,
        "precision": precision,
        "tau_sv": tau_sv,
        "tau_eig": tau_eig,
    });
    let doc = RadiusReportDoc {
        schema_version: SCHEMA_VERSION,
        tool_version: io::tool_version(),
        config,
        params,
        alpha: spec_string,
        result,
    };
    Ok(Output {
        content: io::to_json_string(&doc),
        out,
    })
}

/// Builds the scan grid and computes one radius per angle; shared with the
/// acceptance suite.
pub fn scan_rows(
    alphas: &[RealInput],
    lambda2: f64,
    rho3: f64,
    beta: f64,
    cfg: &RadiusConfig,
) -> Result<Vec<ScanRow>> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("scan grid is empty".into()));
    }
    alphas
        .iter()
        .map(|alpha| {
            let params = CanonicalParams {
                lambda2,
                rho3,
                alpha: alpha.frac_f64(),
                beta,
            };
            let result = exact_radius(&params, alpha, cfg)?;
            Ok(ScanRow {
                alpha: alpha.frac_f64(),
                result,
            })
        })
        .collect()
}

/// Uniform grid k/(N+1), k = 1..=N.
pub fn uniform_grid(n: usize) -> Result<Vec<RealInput>> {
    if n == 0 {
        return Err(Error::InvalidConfig("grid size must be positive".into()));
    }
    (1..=n)
        .map(|k| RealInput::rational(k as i64, n as i64 + 1))
        .collect()
}

/// Grid of numerators over the smallest odd denominator above `n`,
/// k/Q for k = 1..=n. Odd denominators avoid the exact zeros the even
/// ones force when β = 1/2.
pub fn odd_denominator_grid(n: usize) -> Result<Vec<RealInput>> {
    if n == 0 {
        return Err(Error::InvalidConfig("grid size must be positive".into()));
    }
    let mut q = n as i64 + 1;
    if q % 2 == 0 {
        q += 1;
    }
    (1..=n).map(|k| RealInput::rational(k as i64, q)).collect()
}

/// Seeded uniform decimals in (0,1), 15 digits each.
pub fn random_grid(n: usize, seed: u64) -> Result<Vec<RealInput>> {
    if n == 0 {
        return Err(Error::InvalidConfig("grid size must be positive".into()));
    }
    let mut state = seed.max(1);
    let mut next = move || {
        // xorshift64*
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state.wrapping_mul(0x2545F4914F6CDD1D)
    };
    (0..n)
        .map(|_| {
            let u = loop {
                let v = (next() >> 11) as f64 / (1u64 << 53) as f64;
                if v > 0.0 && v < 1.0 {
                    break v;
                }
            };
            RealInput::decimal_str(&format!("{u:.15}"))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_scan(
    grid: Option<usize>,
    alphas: Option<String>,
    odd: bool,
    random: bool,
    seed: u64,
    lambda2: f64,
    rho3: f64,
    beta: f64,
    l_cap: u64,
    out: Option<PathBuf>,
) -> Result<Output> {
    if l_cap == 0 {
        return Err(Error::InvalidConfig("l-cap must be positive".into()));
    }
    if !(rho3 > 0.0) || !(beta > 0.0 && beta <= 0.5) || !lambda2.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "template out of range: lambda2 = {lambda2}, rho3 = {rho3}, beta = {beta}"
        )));
    }
    if odd && random {
        return Err(Error::InvalidConfig(
            "--odd and --random are mutually exclusive".into(),
        ));
    }
    let inputs: Vec<RealInput> = match (&alphas, grid) {
        (Some(list), _) => {
            let specs: Vec<&str> = list.split(',').filter(|s| !s.trim().is_empty()).collect();
            if specs.is_empty() {
                return Err(Error::InvalidConfig("empty alpha list".into()));
            }
            specs
                .into_iter()
                .map(parse_alpha_spec)
                .collect::<Result<_>>()?
        }
        (None, Some(n)) => {
            if random {
                random_grid(n, seed)?
            } else if odd {
                odd_denominator_grid(n)?
            } else {
                uniform_grid(n)?
            }
        }
        (None, None) => {
            return Err(Error::InvalidConfig(
                "scan needs --grid N or --alphas LIST".into(),
            ))
        }
    };
    let cfg = RadiusConfig {
        l_cap,
        ..RadiusConfig::default()
    };
    let rows = scan_rows(&inputs, lambda2, rho3, beta, &cfg)?;
    Ok(Output {
        content: io::scan_csv(&rows),
        out,
    })
}

fn load_set(path: &PathBuf) -> Result<MatrixSet> {
    Ok(match parse_matrix_set(path)? {
        ParsedInput::Set(set) => set,
        ParsedInput::System { set, .. } => set,
    })
}

fn run_estimate(
    set_path: PathBuf,
    depth: usize,
    guard: f64,
    out: Option<PathBuf>,
) -> Result<Output> {
    if depth == 0 {
        return Err(Error::InvalidConfig("depth must be positive".into()));
    }
    if !(guard > 0.0) {
        return Err(Error::InvalidConfig("guard must be positive".into()));
    }
    let set = load_set(&set_path)?;
    let report = enumerate_rates(&set, depth, &SearchBudget { max_products: guard })?;
    let lower = bounds::theorem1_lower_bound(report.min_sr_rate, set.len());
    let config = json!({
        "command": "estimate",
        "set": set_path.display().to_string(),
        "depth": depth,
        "guard": guard,
    });
    let doc = EstimateReportDoc {
        schema_version: SCHEMA_VERSION,
        tool_version: io::tool_version(),
        config,
        report,
        lower_bound_estimate: lower,
    };
    Ok(Output {
        content: io::to_json_string(&doc),
        out,
    })
}

fn run_search(
    set_path: PathBuf,
    length: usize,
    objective: ObjectiveArg,
    guard: f64,
    out: Option<PathBuf>,
) -> Result<Output> {
    if length == 0 {
        return Err(Error::InvalidConfig("length must be positive".into()));
    }
    if !(guard > 0.0) {
        return Err(Error::InvalidConfig("guard must be positive".into()));
    }
    let set = load_set(&set_path)?;
    let obj = match objective {
        ObjectiveArg::Sr => Objective::SpectralRadius,
        ObjectiveArg::Norm => Objective::Norm,
    };
    let outcome =
        optimal_sequence_search(&set, length, obj, &SearchBudget { max_products: guard })?;
    let config = json!({
        "command": "search",
        "set": set_path.display().to_string(),
        "length": length,
        "objective": match objective { ObjectiveArg::Sr => "sr", ObjectiveArg::Norm => "norm" },
        "guard": guard,
    });
    let doc = SearchReportDoc {
        schema_version: SCHEMA_VERSION,
        tool_version: io::tool_version(),
        config,
        outcome,
    };
    Ok(Output {
        content: io::to_json_string(&doc),
        out,
    })
}

/// Parses "12,122,1212" into oldest-first zero-based sequences.
pub fn parse_products_spec(spec: &str, members: usize) -> Result<Vec<Vec<usize>>> {
    if members > 9 {
        return Err(Error::Validation(
            "digit product specs support at most 9 members".into(),
        ));
    }
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|token| {
            let token = token.trim();
            if token.is_empty() {
                return Err(Error::Parse("empty product token".into()));
            }
            let newest_first: Vec<usize> = token
                .chars()
                .map(|c| {
                    let d = c
                        .to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("product digit {c:?}")))?
                        as usize;
                    if d == 0 || d > members {
                        return Err(Error::Validation(format!(
                            "product digit {d} out of range 1..={members}"
                        )));
                    }
                    Ok(d - 1)
                })
                .collect::<Result<_>>()?;
            Ok(newest_first.into_iter().rev().collect())
        })
        .collect()
}

fn run_certify(
    set_path: PathBuf,
    products: String,
    grid: usize,
    margin: f64,
    out: Option<PathBuf>,
) -> Result<Output> {
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::InvalidConfig(format!(
            "margin must lie in [0, 1); got {margin}"
        )));
    }
    let set = load_set(&set_path)?;
    let product_seqs = parse_products_spec(&products, set.len())?;
    let report = stabilizability_certificate(&set, &product_seqs, grid, margin)?;
    let config = json!({
        "command": "certify",
        "set": set_path.display().to_string(),
        "products": products,
        "grid": grid,
        "margin": margin,
    });
    let doc = CertifyReportDoc::from_report(&report, config);
    Ok(Output {
        content: io::to_json_string(&doc),
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_spec_forms() {
        assert_eq!(
            parse_alpha_spec("2/5").unwrap(),
            RealInput::rational(2, 5).unwrap()
        );
        assert!(matches!(
            parse_alpha_spec("0.414213562373095").unwrap(),
            RealInput::Decimal { .. }
        ));
        assert_eq!(
            parse_alpha_spec("cf:[2,2,2]").unwrap(),
            RealInput::cf(0, vec![2, 2, 2]).unwrap()
        );
        assert!(parse_alpha_spec("cf:2,2").is_err());
        assert!(parse_alpha_spec("abc").is_err());
    }

    #[test]
    fn products_spec_parses_newest_first() {
        let seqs = parse_products_spec("12,122", 2).unwrap();
        // "12" means M1·M2: apply member 2 first → oldest-first [1, 0].
        assert_eq!(seqs, vec![vec![1, 0], vec![1, 1, 0]]);
        assert!(parse_products_spec("13", 2).is_err());
        assert_eq!(parse_products_spec("", 2).unwrap(), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn grids() {
        let g = uniform_grid(5).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], RealInput::rational(1, 6).unwrap());
        let o = odd_denominator_grid(2000).unwrap();
        assert_eq!(o.len(), 2000);
        assert_eq!(o[0], RealInput::rational(1, 2001).unwrap());
        assert!(uniform_grid(0).is_err());
        let r = random_grid(4, 7).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r, random_grid(4, 7).unwrap());
    }
}
