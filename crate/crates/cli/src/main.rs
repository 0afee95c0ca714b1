//! Batch front door for the two-atom potential toolkit.
//!
//! Subcommands: `derive` dumps the symbolic effective Hamiltonians and
//! averaged potential terms, `eval` evaluates δE (single separation or a
//! sweep) to CSV, `oracle` runs the perturbation-theory chain, and `compare`
//! checks the derived potential against the oracle on one mode set.
//!
//! Exit codes: 0 success, 2 convergence failure, 3 consistency failure.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use ddc_core::evaluator::{
    delta_e_channel, derived_terms, sweep_separation, sweep_to_csv,
    KernelResolver,
};
use ddc_core::extract::{effective_hamiltonian, ground_state_average};
use ddc_core::kernels::ModeSet;
use ddc_core::oracle::{ed_quartic_fit, interatomic_part, rs2_shift, rs4_shift, OracleReport};
use ddc_core::rates::Channel;
use ddc_core::CoreError;

#[derive(Parser)]
#[command(name = "ddc", version, about = "vacuum-fluctuation / radiation-reaction split of the two-atom potential", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Flat key = value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    omega_a: Option<f64>,
    #[arg(long)]
    omega_b: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Interatomic separation.
    #[arg(long)]
    sep: Option<f64>,
    /// Comma-separated separations for a sweep.
    #[arg(long)]
    sep_list: Option<String>,
    /// Quantization box length.
    #[arg(long = "box")]
    box_length: Option<f64>,
    /// Isotropic frequency cutoff of the mode set.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Mode lattice dimension (1, 2 or 3).
    #[arg(long)]
    dim: Option<u32>,
    /// Comma-separated decreasing regulator ladder.
    #[arg(long)]
    epsilon_ladder: Option<String>,
    /// Fock truncation for the oracle.
    #[arg(long)]
    truncation: Option<u32>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance for convergence and comparison verdicts.
    #[arg(long)]
    tol: Option<f64>,
}

impl CommonOpts {
    fn resolve(&self) -> Result<RunConfig, CoreError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.omega_a {
            cfg.omega_a = v;
        }
        if let Some(v) = self.omega_b {
            cfg.omega_b = v;
        }
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        if let Some(v) = self.sep {
            cfg.sep = v;
        }
        if let Some(v) = &self.sep_list {
            cfg.set("sep_list", v)?;
        }
        if let Some(v) = self.box_length {
            cfg.box_length = v;
        }
        if let Some(v) = self.cutoff {
            cfg.cutoff = v;
        }
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = &self.epsilon_ladder {
            cfg.set("epsilon_ladder", v)?;
        }
        if let Some(v) = self.truncation {
            cfg.truncation = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical effective-Hamiltonian terms and their
    /// ground-state averages for one channel and order.
    Derive {
        /// vf or rr
        #[arg(long)]
        channel: String,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate δE for one separation or a sweep; emits CSV.
    Eval(CommonOpts),
    /// Run the perturbation-theory oracle chain on the configuration.
    Oracle(CommonOpts),
    /// Oracle chain and derived-potential evaluation on one mode set, with a
    /// pass/fail verdict at the tolerance.
    Compare(CommonOpts),
    /// Print the mode table of the configured mode set.
    Modes(CommonOpts),
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CoreError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CoreError::InvalidConfig(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CoreError::InvalidConfig(e.to_string()))
        }
    }
}

fn parse_channel(s: &str) -> Result<Channel, CoreError> {
    match s {
        "vf" => Ok(Channel::Vf),
        "rr" => Ok(Channel::Rr),
        other => Err(CoreError::InvalidConfig(format!(
            "channel must be vf or rr, got {other:?}"
        ))),
    }
}

fn cmd_derive(channel: &str, order: u32, out: &Option<PathBuf>) -> Result<(), CoreError> {
    let ch = parse_channel(channel)?;
    let eff = effective_hamiltonian(ch, order)?;
    let mut text = String::new();
    text.push_str(&format!(
        "# effective Hamiltonian: channel {ch}, order {order}\n# terms: {}\n",
        eff.terms.len()
    ));
    for t in &eff.terms {
        text.push_str("X ");
        text.push_str(&t.dump_line());
        text.push('\n');
    }
    let avg = ground_state_average(&eff.terms);
    text.push_str(&format!("# ground-state average terms: {}\n", avg.len()));
    for t in &avg {
        text.push_str("E ");
        text.push_str(&t.dump_line());
        text.push('\n');
    }
    text.push_str(&format!(
        "# discarded single-atom/odd content by spectator power: {:?}\n",
        eff.discarded_by_power
    ));
    emit(out, &text)
}

fn cmd_eval(opts: &CommonOpts) -> Result<(), CoreError> {
    let cfg = opts.resolve()?;
    let base = cfg.eval_config();
    let rows = if cfg.sep_list.is_empty() {
        vec![ddc_core::evaluator::delta_e_total(&base)?]
    } else {
        sweep_separation(&base, &cfg.sep_list)?
    };
    // convergence gate: every row's tableau correction within tolerance
    for r in &rows {
        let scale = r.delta_e_total.abs().max(f64::MIN_POSITIVE);
        if r.error_estimate > cfg.tol * scale {
            emit(&opts.out, &sweep_to_csv(&rows))?;
            return Err(CoreError::NotConverged {
                err: r.error_estimate,
                tol: cfg.tol * scale,
            });
        }
    }
    emit(&opts.out, &sweep_to_csv(&rows))
}

fn oracle_report(cfg: &RunConfig, with_ed: bool) -> Result<OracleReport, CoreError> {
    let base = cfg.eval_config();
    base.validate()?;
    let modes = ModeSet::new(cfg.box_length, cfg.cutoff, cfg.dim)?;
    let positions = base.positions();
    let rs2 = interatomic_part(
        rs2_shift,
        &modes,
        positions,
        cfg.omega_a,
        cfg.omega_b,
        cfg.mu,
        cfg.truncation,
    )?;
    let rs4 = interatomic_part(
        rs4_shift,
        &modes,
        positions,
        cfg.omega_a,
        cfg.omega_b,
        cfg.mu,
        cfg.truncation,
    )?;
    let ed = if with_ed {
        let mus: Vec<f64> = (1..=8).map(|k| 0.008 * k as f64).collect();
        let (_, c4, _) = ed_quartic_fit(
            &modes,
            positions,
            cfg.omega_a,
            cfg.omega_b,
            &mus,
            (cfg.truncation + 1).max(3),
            true,
        )?;
        Some(c4 * cfg.mu.powi(4))
    } else {
        None
    };
    let resolver = KernelResolver::from_modes(&modes, &base)?;
    let vf = delta_e_channel(&derived_terms(Channel::Vf)?, &resolver, cfg.mu, &base.quad)?;
    let rr = delta_e_channel(&derived_terms(Channel::Rr)?, &resolver, cfg.mu, &base.quad)?;
    let total = vf.value.re + rr.value.re;
    Ok(OracleReport {
        rs2_interatomic: rs2,
        rs4_interatomic: rs4,
        ed_quartic_interatomic: ed,
        ddc_vf: vf.value.re,
        ddc_rr: rr.value.re,
        ddc_total: total,
        rel_diff_ddc_vs_rs4: (total - rs4).abs() / rs4.abs().max(f64::MIN_POSITIVE),
        rel_diff_ed_vs_rs4: ed.map(|e| (e - rs4).abs() / rs4.abs().max(f64::MIN_POSITIVE)),
    })
}

fn cmd_oracle(opts: &CommonOpts) -> Result<(), CoreError> {
    let cfg = opts.resolve()?;
    let report = oracle_report(&cfg, true)?;
    emit(&opts.out, &report.to_text())
}

fn cmd_compare(opts: &CommonOpts) -> Result<(), CoreError> {
    let cfg = opts.resolve()?;
    let report = oracle_report(&cfg, true)?;
    let mut text = report.to_text();
    let pass = report.rel_diff_ddc_vs_rs4 <= cfg.tol;
    text.push_str(&format!(
        "verdict {} (tolerance {:.3e})\n",
        if pass { "PASS" } else { "FAIL" },
        cfg.tol
    ));
    emit(&opts.out, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CoreError::NotConverged {
            err: report.rel_diff_ddc_vs_rs4,
            tol: cfg.tol,
        })
    }
}

fn cmd_modes(opts: &CommonOpts) -> Result<(), CoreError> {
    let cfg = opts.resolve()?;
    let modes = ModeSet::new(cfg.box_length, cfg.cutoff, cfg.dim)?;
    emit(&opts.out, &modes.to_table())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // keep exit code 2/3 reserved for numerical failures
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Derive { channel, order, out } => cmd_derive(channel, *order, out),
        Command::Eval(opts) => cmd_eval(opts),
        Command::Oracle(opts) => cmd_oracle(opts),
        Command::Compare(opts) => cmd_compare(opts),
        Command::Modes(opts) => cmd_modes(opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CoreError::NotConverged { .. } => ExitCode::from(2),
                CoreError::ImaginaryResidual { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
