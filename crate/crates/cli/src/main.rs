//! nuspectra: bound-state spectra, wavefunctions and verification reports
//! for the q-deformed Woods-Saxon / Rosen-Morse / double-well family.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.
//! Failures print `error: <ErrorName>: <detail>` on stderr.

mod config;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use nuspectra_core::closed_form::{
    enumerate_bound_states, energy_complex_combined, special_case_energy, EnergyLevel, EtaPolicy,
};
use nuspectra_core::error::Error;
use nuspectra_core::nu::{
    lambda_n, lambda_of, pearson_weight, phi_factor, pi_branches, select_branch,
    HypergeometricODE,
};
use nuspectra_core::poly::Poly;
use nuspectra_core::potential::{
    potential_value_complex, pt_symmetry_check, ComplexMode, ComplexPotentialParams,
    PotentialParams,
};
use nuspectra_core::report::{verify_complex, verify_real};
use nuspectra_core::wavefunction::{normalize_numeric, psi_raw, WavefunctionSpec};

use config::{Mode, RunConfig};
use output::{g17, to_json_g17};

#[derive(Parser)]
#[command(name = "nuspectra", version, about = "bound-state spectrum toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: String,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spectrum as CSV.
    Spectrum {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: String,
    },
    /// Cross-check the closed form against the eigensolver oracles.
    Verify {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: String,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Sampled normalized wavefunction as two-column plot data.
    Wavefunction {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Level index within the enumerated tower.
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: String,
    },
    /// Drive the generic solver on a raw (sigma, sigma~, tau~) triple.
    NuSolve {
        /// sigma coefficients, ascending degree, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma_tilde: String,
        #[arg(long, allow_hyphen_values = true)]
        tau_tilde: String,
        /// Quantum number range "lo..hi" (inclusive) or a single value.
        #[arg(long, default_value = "0..5")]
        n: String,
    },
    /// Sweep one parameter of a complexified potential and record how real
    /// the spectrum stays.
    PtScan {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Sweep spec "NAME=start:end:step", e.g. V1=0:2:0.05.
        #[arg(long)]
        sweep: String,
        #[arg(long)]
        out: String,
    },
    /// Run the numerical eigensolvers alone (no closed form) as CSV.
    Oracle {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: String,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
    },
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.name(), e);
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("NUSPECTRA_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn load_config(path: &str) -> Result<RunConfig, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {path}: {e}")))?;
    let cfg = RunConfig::from_json(&text)?;
    if cfg.params.outside_stated_q_domain() {
        eprintln!("warning: q = {} is outside the stated q >= 1 domain", cfg.params.q);
    }
    Ok(cfg)
}

fn write_out(path: &str, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("cannot write {path}: {e}")))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Spectrum { cfg, out } => spectrum(&load_config(&cfg.config)?, &out),
        Command::Verify { cfg, out, grid_points, half_width } => {
            verify(&load_config(&cfg.config)?, &out, grid_points, half_width)
        }
        Command::Wavefunction { cfg, level, out } => {
            wavefunction(&load_config(&cfg.config)?, level, &out)
        }
        Command::NuSolve { sigma, sigma_tilde, tau_tilde, n } => {
            nu_solve(&sigma, &sigma_tilde, &tau_tilde, &n)
        }
        Command::PtScan { cfg, sweep, out } => pt_scan(&load_config(&cfg.config)?, &sweep, &out),
        Command::Oracle { cfg, out, grid_points, half_width } => {
            oracle_levels(&load_config(&cfg.config)?, &out, grid_points, half_width)
        }
    }
}

fn oracle_levels(
    cfg: &RunConfig,
    out: &str,
    grid_points: Option<usize>,
    half_width: Option<f64>,
) -> Result<(), Error> {
    use nuspectra_core::oracle::{fd_levels_richardson, numerov_shoot};
    use nuspectra_core::potential::{nu_potential_value, nu_window};
    if !matches!(cfg.mode, Mode::Real) {
        return Err(Error::InvalidConfig("oracle output is defined for real mode".into()));
    }
    let grid = cfg.grid(half_width, grid_points)?;
    let p = cfg.params;
    let v = move |x: f64| nu_potential_value(&p, x).unwrap_or(f64::INFINITY);
    let e_max = nu_window(&p).e_max - 1e-9;
    let fd = fd_levels_richardson(v, grid, e_max)?;
    let mut csv = String::from("level,e_fd,e_numerov\n");
    for (k, e_fd) in fd.iter().enumerate() {
        let e_nv = match numerov_shoot(v, grid, k) {
            Ok(e) => g17(e),
            Err(_) => String::new(),
        };
        csv.push_str(&format!("{},{},{}\n", k, g17(*e_fd), e_nv));
    }
    write_out(out, &csv)
}

fn flags_str(l: &EnergyLevel) -> String {
    l.flags
        .iter()
        .map(|f| format!("{f:?}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn real_levels(cfg: &RunConfig) -> Result<Vec<EnergyLevel>, Error> {
    let policy = cfg.eta_policy()?;
    match cfg.case {
        // A real special case restricts the formula to the printed reduction.
        Some(case) if case.complex_mode().is_none() => {
            let etas: Vec<i8> = match policy {
                EtaPolicy::Fixed(e) => vec![e],
                EtaPolicy::Auto => vec![1],
                EtaPolicy::Both => vec![1, -1],
            };
            let mut out = Vec::new();
            for eta in etas {
                for n in 0..=cfg.n_max() {
                    match special_case_energy(case, &cfg.params, n, eta) {
                        Ok(l) => out.push(l),
                        Err(Error::DivisionByZero) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok(out)
        }
        _ => Ok(enumerate_bound_states(&cfg.params, policy)),
    }
}

fn complex_levels(cfg: &RunConfig, mode: ComplexMode) -> Result<Vec<EnergyLevel>, Error> {
    let cp = ComplexPotentialParams::from_mode(mode, &cfg.params)?;
    let etas: Vec<i8> = match cfg.eta_policy()? {
        EtaPolicy::Fixed(e) => vec![e],
        _ => vec![1, -1],
    };
    let mut out = Vec::new();
    for eta in etas {
        for n in 0..=cfg.n_max() {
            match energy_complex_combined(&cp, n, eta) {
                Ok(l) => out.push(l),
                Err(Error::DivisionByZero) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

fn spectrum(cfg: &RunConfig, out: &str) -> Result<(), Error> {
    let mut csv = String::new();
    match cfg.mode {
        Mode::Real => {
            csv.push_str("n,eta,energy,admissible,flags\n");
            for l in real_levels(cfg)? {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    l.n,
                    l.eta,
                    g17(l.e_real()),
                    l.admissible,
                    flags_str(&l)
                ));
            }
        }
        Mode::Pt | Mode::NonPt => {
            let mode = if matches!(cfg.mode, Mode::Pt) { ComplexMode::Pt } else { ComplexMode::NonPt };
            csv.push_str("n,eta,e_re,e_im,real,flags\n");
            for l in complex_levels(cfg, mode)? {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    l.n,
                    l.eta,
                    g17(l.e.re),
                    g17(l.e.im),
                    l.is_real(),
                    flags_str(&l)
                ));
            }
        }
    }
    write_out(out, &csv)
}

fn verify(
    cfg: &RunConfig,
    out: &str,
    grid_points: Option<usize>,
    half_width: Option<f64>,
) -> Result<(), Error> {
    let grid = cfg.grid(half_width, grid_points)?;
    let report = match cfg.mode {
        Mode::Real => verify_real(&cfg.params, cfg.eta_policy()?, grid)?,
        Mode::Pt => {
            let cp = ComplexPotentialParams::pt(&cfg.params)?;
            verify_complex(&cp, cfg.n_max(), grid)?
        }
        Mode::NonPt => {
            let cp = ComplexPotentialParams::nonpt(&cfg.params)?;
            verify_complex(&cp, cfg.n_max(), grid)?
        }
    };
    let json = to_json_g17(&report)
        .map_err(|e| Error::InvalidConfig(format!("report serialization failed: {e}")))?;
    write_out(out, &json)
}

fn wavefunction(cfg: &RunConfig, level_n: u32, out: &str) -> Result<(), Error> {
    if !matches!(cfg.mode, Mode::Real) {
        return Err(Error::InvalidConfig(
            "wavefunction output is defined for real mode".into(),
        ));
    }
    let levels = enumerate_bound_states(&cfg.params, cfg.eta_policy()?);
    let level = levels
        .iter()
        .find(|l| l.n == level_n && l.admissible)
        .ok_or(Error::LevelNotFound)?;
    let spec = WavefunctionSpec::new(&cfg.params, level)?;
    let grid = cfg.grid(None, None)?;
    let xs = grid.points();
    let w = normalize_numeric(&psi_raw(&spec, &xs)?)?;
    let mut text = String::with_capacity(xs.len() * 48);
    for (x, v) in w.xs.iter().zip(&w.values) {
        text.push_str(&format!("{} {}\n", g17(*x), g17(v.re)));
    }
    write_out(out, &text)
}

fn parse_poly(text: &str) -> Result<Poly, Error> {
    let coeffs = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| Error::InvalidConfig(format!("bad coefficient list '{text}': {e}")))?;
    Ok(Poly::new(coeffs))
}

fn parse_n_range(text: &str) -> Result<(u32, u32), Error> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo.trim().parse::<u32>();
        let hi = hi.trim().parse::<u32>();
        match (lo, hi) {
            (Ok(lo), Ok(hi)) if lo <= hi => return Ok((lo, hi)),
            _ => {}
        }
    } else if let Ok(v) = text.trim().parse::<u32>() {
        return Ok((v, v));
    }
    Err(Error::InvalidConfig(format!("bad n range '{text}' (use lo..hi)")))
}

fn nu_solve(sigma: &str, sigma_tilde: &str, tau_tilde: &str, n_range: &str) -> Result<(), Error> {
    let ode = HypergeometricODE::new(
        parse_poly(sigma)?,
        parse_poly(sigma_tilde)?,
        parse_poly(tau_tilde)?,
    )?;
    let (n_lo, n_hi) = parse_n_range(n_range)?;
    let branches = pi_branches(&ode)?;
    println!("branches: {}", branches.len());
    for (i, b) in branches.iter().enumerate() {
        println!(
            "branch {}: sign {} k = {} pi = [{}] tau = [{}] tau' = {}",
            i,
            b.sqrt_sign,
            g17(b.k),
            b.pi.coeffs().iter().map(|c| g17(*c)).collect::<Vec<_>>().join(", "),
            b.tau.coeffs().iter().map(|c| g17(*c)).collect::<Vec<_>>().join(", "),
            g17(b.tau.coeff(1)),
        );
    }
    match select_branch(&branches, None) {
        Ok(sel) => {
            println!("selected: k = {} sign {}", g17(sel.k), sel.sqrt_sign);
            println!("lambda = {}", g17(lambda_of(&sel)));
            for n in n_lo..=n_hi {
                println!("lambda_{n} = {}", g17(lambda_n(&sel, &ode.sigma, n)));
            }
            match pearson_weight(&sel, &ode.sigma) {
                Ok(w) => println!("weight exponents: A = {} B = {}", g17(w.a), g17(w.b)),
                Err(e) => println!("weight exponents: unavailable ({})", e.name()),
            }
            match phi_factor(&sel, &ode.sigma) {
                Ok(f) => println!("phi exponents: a = {} b = {}", g17(f.a), g17(f.b)),
                Err(e) => println!("phi exponents: unavailable ({})", e.name()),
            }
        }
        Err(e) => println!("selected: none ({})", e.name()),
    }
    Ok(())
}

struct Sweep {
    name: String,
    values: Vec<f64>,
}

fn parse_sweep(text: &str) -> Result<Sweep, Error> {
    let bad = || Error::InvalidConfig(format!("bad sweep '{text}' (use NAME=start:end:step)"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let step: f64 = parts[2].trim().parse().map_err(|_| bad())?;
    if !(step > 0.0) || end < start {
        return Err(bad());
    }
    let mut values = Vec::new();
    let mut k = 0u64;
    loop {
        let v = start + k as f64 * step;
        if v > end + 0.5 * step {
            break;
        }
        values.push(v);
        k += 1;
    }
    Ok(Sweep { name: name.trim().to_string(), values })
}

fn with_swept(p: &PotentialParams, name: &str, value: f64) -> Result<PotentialParams, Error> {
    let mut p = *p;
    match name.to_ascii_lowercase().as_str() {
        "v1" => p.v1 = value,
        "v2" => p.v2 = value,
        "v3" => p.v3 = value,
        "v4" => p.v4 = value,
        "v5" => p.v5 = value,
        "v6" => p.v6 = value,
        "q" => p.q = value,
        "alpha" => p.alpha = value,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown sweep parameter '{other}' (V1..V6, q, alpha)"
            )))
        }
    }
    p.validate()?;
    Ok(p)
}

fn pt_scan(cfg: &RunConfig, sweep: &str, out: &str) -> Result<(), Error> {
    let mode = match cfg.mode {
        Mode::Pt => ComplexMode::Pt,
        Mode::NonPt => ComplexMode::NonPt,
        Mode::Real => {
            return Err(Error::InvalidConfig("pt-scan requires mode pt or nonpt".into()))
        }
    };
    let sweep = parse_sweep(sweep)?;
    let n_max = cfg.n_max();
    let base = cfg.params;
    let name = sweep.name.clone();

    // Each sweep point is independent; output ordering follows input order.
    let rows: Vec<Result<String, Error>> = sweep
        .values
        .par_iter()
        .map(|&value| -> Result<String, Error> {
            let p = with_swept(&base, &name, value)?;
            let cp = ComplexPotentialParams::from_mode(mode, &p)?;
            let mut count = 0usize;
            let mut max_im = 0.0_f64;
            for eta in [1i8, -1] {
                for n in 0..=n_max {
                    if let Ok(l) = energy_complex_combined(&cp, n, eta) {
                        count += 1;
                        max_im = max_im.max(l.e.im.abs());
                    }
                }
            }
            let xs: Vec<f64> = (0..64)
                .map(|i| -2.9 + 5.8 * i as f64 / 63.0)
                .filter(|x| potential_value_complex(&cp, *x).is_ok())
                .collect();
            let symmetric = pt_symmetry_check(&cp, &xs, 1e-12)?;
            Ok(format!(
                "{},{},{},{}\n",
                g17(value),
                count,
                g17(max_im),
                symmetric
            ))
        })
        .collect();

    let mut csv = String::from("value,levels,max_abs_im_e,pt_symmetric\n");
    for row in rows {
        csv.push_str(&row?);
    }
    write_out(out, &csv)
}
