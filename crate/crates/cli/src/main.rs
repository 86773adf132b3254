use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dc_lab::{parse_weights, sweep, CliError, FamilyDocument, EXIT_OK, EXIT_VERIFY_FAIL};
use dc_lab_core::analysis::{
    bns_excluded, diagonal_identity_obstructed, is_saturated, kc_span_check,
    shift_family_obstructed, verify_family, wcsg_bound,
};
use dc_lab_core::families::{
    family_2dm1, family_dp2, family_f46, family_f47, phase, qutrit_five_family, shift_diag_family,
    weyl_family,
};
use dc_lab_core::search::{estimate_nmax, region_sweep_in_dim, SearchConfig};
use dc_lab_core::{EncodingFamily, SchmidtState};

#[derive(Parser)]
#[command(
    name = "dc-lab",
    version,
    about = "Encoding-unitary families for dense coding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Weyl,
    Five,
    F46,
    F47,
    TwoDMinusOne,
    DPlusTwo,
    ShiftDiag,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Random restarts per family size.
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest family size to try (default d^2).
    #[arg(long)]
    max_k: Option<usize>,
    /// Acceptance threshold on the summed squared overlaps.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Pin the (0, 1) entry of the first free member to zero (λ1 = λ2 only).
    #[arg(long)]
    pin_fr: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_k: self.max_k,
            restarts: self.restarts,
            accept_tol: self.tol,
            pin_fr: self.pin_fr,
            base_seed: self.seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it as JSON.
    Construct {
        #[arg(value_enum)]
        family: FamilyName,
        d: usize,
        /// Output file (stdout when absent).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a family document against a Schmidt state.
    Verify {
        file: PathBuf,
        /// Schmidt weights, as decimals or fractions such as 2/3.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        lambdas: Vec<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Estimate the maximum family size over the qutrit region and write CSV.
    Sweep {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 12)]
        resolution: usize,
        /// Output CSV (stdout when absent).
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Entropy, size bound and obstruction flags of a state.
    StateInfo {
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        lambdas: Vec<String>,
    },
    /// Estimate the maximum family size for a single state.
    Search {
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        lambdas: Vec<String>,
        /// Write the largest witness family found as JSON.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn state_from(texts: &[String]) -> Result<SchmidtState, CliError> {
    let w = parse_weights(texts)?;
    Ok(SchmidtState::new(w.len(), &w)?)
}

fn build_family(name: FamilyName, d: usize) -> Result<EncodingFamily, CliError> {
    let fixed = |want: usize| {
        if d == want {
            Ok(())
        } else {
            Err(CliError::Input(format!(
                "this family requires d = {want}, got {d}"
            )))
        }
    };
    Ok(match name {
        FamilyName::Weyl => weyl_family(d)?,
        FamilyName::Five => {
            fixed(3)?;
            qutrit_five_family()
        }
        FamilyName::F46 => {
            fixed(4)?;
            family_f46()
        }
        FamilyName::F47 => {
            fixed(4)?;
            family_f47()
        }
        FamilyName::TwoDMinusOne => family_2dm1(d)?,
        FamilyName::DPlusTwo => family_dp2(d)?,
        FamilyName::ShiftDiag => {
            // D_k = Z^k gives the members X^k Z^k.
            if d < 2 {
                return Err(CliError::Input(format!(
                    "shift-diag requires d >= 2, got {d}"
                )));
            }
            let z = phase(d);
            let diagonals = (0..d)
                .map(|k| z.as_matrix().pow(k))
                .collect::<Result<Vec<_>, _>>()?;
            shift_diag_family(d, &diagonals)?
        }
    })
}

fn construct(name: FamilyName, d: usize, output: Option<PathBuf>) -> Result<i32, CliError> {
    let family = build_family(name, d)?;
    let doc = FamilyDocument::from_family(&family);
    let target = family
        .target_lambda0()
        .map_or("none".to_string(), |t| format!("{t}"));
    match output {
        Some(path) => {
            doc.write(&path)?;
            println!(
                "{}: {} members, target lambda0 {target}",
                family.label(),
                family.len()
            );
        }
        None => {
            println!("{}", doc.to_json());
            eprintln!(
                "{}: {} members, target lambda0 {target}",
                family.label(),
                family.len()
            );
        }
    }
    Ok(EXIT_OK)
}

fn verify(file: PathBuf, lambdas: &[String], tol: f64) -> Result<i32, CliError> {
    let family = FamilyDocument::read(&file)?.to_family()?;
    let s = state_from(lambdas)?;
    let r = verify_family(&family, &s, tol)?;
    println!(
        "family: {} ({} members, d = {})",
        family.label(),
        family.len(),
        family.dim()
    );
    println!("max_pairwise_residual: {:e}", r.max_pairwise_residual);
    if let Some((i, j)) = r.worst_pair {
        println!("worst_pair: {i} {j}");
    }
    println!("max_unitarity_residual: {:e}", r.max_unitarity_residual);
    println!("max_norm_deviation: {:e}", r.max_norm_deviation);
    println!("tolerance: {:e}", r.tolerance);
    if is_saturated(&s, family.len()) {
        let kc = kc_span_check(&family, &s)?;
        let res: Vec<String> = kc.residuals.iter().map(|x| format!("{x:e}")).collect();
        println!("span_residuals: {}", res.join(" "));
        println!("span_dimension: {}", kc.span_dimension);
    }
    println!("pass: {}", r.pass);
    Ok(if r.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn state_info(lambdas: &[String]) -> Result<i32, CliError> {
    let s = state_from(lambdas)?;
    let d = s.dim();
    let bound = wcsg_bound(&s);
    println!("entropy_bits: {:.10}", s.entropy_bits());
    println!("wcsg_bound: {bound}");
    println!("shift_family_obstructed: {}", shift_family_obstructed(&s));
    println!(
        "diagonal_identity_obstructed: {}",
        diagonal_identity_obstructed(&s)
    );
    if bound > d && bns_excluded(&s, d + 1) {
        println!("note: K={} excluded by strict bound", d + 1);
    }
    Ok(EXIT_OK)
}

fn search(lambdas: &[String], output: Option<PathBuf>, args: &SearchArgs) -> Result<i32, CliError> {
    let s = state_from(lambdas)?;
    let r = estimate_nmax(&s, &args.config())?;
    println!("wcsg_bound: {}", r.wcsg_bound);
    for k in &r.per_k {
        match &k.outcome {
            Some(o) => println!(
                "K={}: {} (best objective {:e}, max pair residual {:e}, restart {} of {})",
                k.k,
                k.status.as_str(),
                o.best_objective,
                o.max_pair_residual,
                o.best_restart,
                o.restarts_run
            ),
            None => println!("K={}: {}", k.k, k.status.as_str()),
        }
    }
    println!("n_max_estimate: {}", r.n_max_estimate);
    println!("seed: {}", r.seed);
    if let Some(path) = output {
        let witness = r
            .outcome(r.n_max_estimate)
            .and_then(|o| o.witness.as_ref())
            .ok_or_else(|| CliError::Input("no witness family to write".into()))?;
        FamilyDocument::from_family(witness).write(&path)?;
    }
    Ok(EXIT_OK)
}

fn run_sweep(
    d: usize,
    resolution: usize,
    output: Option<PathBuf>,
    args: &SearchArgs,
) -> Result<i32, CliError> {
    if d != 3 {
        eprintln!("warning: the region map is defined for d = 3; embedding the weights in d = {d}");
    }
    let map = region_sweep_in_dim(d, resolution, &args.config())?;
    let rows = sweep::rows(&map);
    match output {
        Some(path) => {
            let file = File::create(&path)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            sweep::write_csv(&rows, BufWriter::new(file))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => sweep::write_csv(&rows, io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("DC_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| {
            CliError::Input(format!(
                "DC_LAB_THREADS must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot configure threads: {e}")))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Construct { family, d, output } => construct(family, d, output),
        Command::Verify { file, lambdas, tol } => verify(file, &lambdas, tol),
        Command::Sweep {
            d,
            resolution,
            output,
            search,
        } => run_sweep(d, resolution, output, &search),
        Command::StateInfo { lambdas } => state_info(&lambdas),
        Command::Search {
            lambdas,
            output,
            search: args,
        } => search(&lambdas, output, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
