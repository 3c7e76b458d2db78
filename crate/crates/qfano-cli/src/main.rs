//! Command-line surface for the degeneration-lattice engine.
//!
//! Exit statuses: 0 pass, 1 verification failure, 2 config/parse error,
//! 3 internal invariant breach.

use std::path::{Path, PathBuf};
use std::process::exit;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use qfano_core::error::ConfigError;
use qfano_core::{
    int, parse_integer_matrix, rat, run_all, smith_normal_form, weil_to_blowup_coords, Degree,
    Error, GlobalClass, Int, KernelBasis, NormalCrossingFiber, QFanoScenario, RunConfig,
    WeilClass,
};

#[derive(Parser)]
#[command(
    name = "qfano",
    version,
    about = "Exact lattice verification for degenerations of Q-Fano double covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification chain on a JSON config.
    Run {
        config: PathBuf,
        /// Also write the machine-readable report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify a grid of scenarios: h^3 in half-integer steps up to --h3-max,
    /// N up to --n-max, r in {1, 3}.
    Sweep {
        #[arg(long, default_value_t = 10)]
        h3_max: u32,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Write a JSON summary of all cases to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a basis of the compatibility kernel G^q of the configured fiber.
    Kernel {
        config: PathBuf,
        /// Cohomology degree, 2 or 4.
        #[arg(long, short)]
        q: u8,
    },
    /// Coordinates of the Weil class k*h with the given multiplicities in the
    /// blow-up basis, or a parity error.
    Coords {
        k: i64,
        /// Comma-separated nonnegative multiplicities, e.g. 1,1,3
        multiplicities: String,
    },
    /// Smith normal form of an integer matrix file (one row per line,
    /// whitespace-separated integers).
    Snf { matrix: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, json } => cmd_run(&config, json.as_deref()),
        Command::Sweep { h3_max, n_max, json } => cmd_sweep(h3_max, n_max, json.as_deref()),
        Command::Kernel { config, q } => cmd_kernel(&config, q),
        Command::Coords { k, multiplicities } => cmd_coords(k, &multiplicities),
        Command::Snf { matrix } => cmd_snf(&matrix),
    };
    match outcome {
        Ok(true) => exit(0),
        Ok(false) => exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_class().code());
        }
    }
}

fn cmd_run(config: &Path, json: Option<&Path>) -> Result<bool, Error> {
    let cfg = RunConfig::from_path(config)?;
    let report = run_all(&cfg)?;
    print!("{}", report.render_text());
    if let Some(path) = json {
        std::fs::write(path, report.to_json()).map_err(ConfigError::Io)?;
        println!("report written to {}", path.display());
    }
    Ok(report.overall_pass)
}

fn cmd_sweep(h3_max: u32, n_max: usize, json: Option<&Path>) -> Result<bool, Error> {
    let mut all_pass = true;
    let mut cases = Vec::new();
    for half in 1..=(2 * h3_max as i64) {
        for n in 1..=n_max {
            for r in [1i64, 3] {
                let h3 = rat(half, 2);
                let scenario = QFanoScenario::new(h3.clone(), n, r)?;
                let report = run_all(&RunConfig::plain(scenario))?;
                let hx3 = report
                    .invariants
                    .as_ref()
                    .map(|inv| inv.hx3.value.clone())
                    .unwrap_or_else(|| "-".into());
                let pass = report.overall_pass && hx3 == half.to_string();
                all_pass &= pass;
                println!(
                    "h^3 = {h3}, N = {n}, r = {r}: H_X^3 = {hx3} [{}]",
                    if pass { "pass" } else { "FAIL" }
                );
                cases.push(json_case(&h3.to_string(), n, r, &hx3, pass));
            }
        }
    }
    println!(
        "sweep: {} cases, {}",
        cases.len(),
        if all_pass { "all pass" } else { "FAILURES PRESENT" }
    );
    if let Some(path) = json {
        let body = format!("[\n{}\n]\n", cases.join(",\n"));
        std::fs::write(path, body).map_err(ConfigError::Io)?;
    }
    Ok(all_pass)
}

fn json_case(h3: &str, n: usize, r: i64, hx3: &str, pass: bool) -> String {
    format!(
        "  {{\"h3\": \"{h3}\", \"n\": {n}, \"r\": {r}, \"hx3\": \"{hx3}\", \"pass\": {pass}}}"
    )
}

fn cmd_kernel(config: &Path, q: u8) -> Result<bool, Error> {
    let degree = match q {
        2 => Degree::Two,
        4 => Degree::Four,
        other => {
            return Err(ConfigError::BadRational {
                field: "q".into(),
                value: format!("{other} (supported degrees: 2, 4)"),
            }
            .into())
        }
    };
    let cfg = RunConfig::from_path(config)?;
    let model = qfano_core::build_degeneration_model(&cfg.scenario)?;
    let kernel = model.fiber.compatibility_kernel(degree).map_err(Error::Fiber)?;
    print_kernel(&model.fiber, &kernel, degree);
    Ok(true)
}

fn print_kernel(fiber: &NormalCrossingFiber, kernel: &KernelBasis, degree: Degree) {
    println!("G^{degree} basis, rank {}:", kernel.classes.len());
    for (label, class) in kernel.lattice.basis_labels().iter().zip(&kernel.classes) {
        println!("  {label}: {}", render_class(fiber, class));
    }
}

fn render_class(fiber: &NormalCrossingFiber, class: &GlobalClass) -> String {
    fiber
        .components()
        .iter()
        .zip(&class.per_component)
        .map(|(c, block)| {
            let coords: Vec<String> = block.iter().map(ToString::to_string).collect();
            format!("{} = ({})", c.name(), coords.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn cmd_coords(k: i64, multiplicities: &str) -> Result<bool, Error> {
    let mult = multiplicities
        .split(',')
        .map(|tok| {
            Int::from_str(tok.trim()).map_err(|_| ConfigError::BadRational {
                field: "multiplicities".into(),
                value: tok.trim().to_string(),
            })
        })
        .collect::<Result<Vec<Int>, _>>()?;
    let n = mult.len();
    let class = WeilClass::new(int(k), mult)?;
    // The parity arithmetic needs only the point count; any valid scenario
    // with the right N carries it.
    let scenario = QFanoScenario::new(rat(1, 1), n, 1)?;
    let coords = weil_to_blowup_coords(&class, &scenario)?;
    let cs: Vec<String> = coords.exceptional.iter().map(ToString::to_string).collect();
    println!("({}; {})", coords.k, cs.join(", "));
    Ok(true)
}

fn cmd_snf(matrix: &Path) -> Result<bool, Error> {
    let text = std::fs::read_to_string(matrix).map_err(ConfigError::Io)?;
    let m = parse_integer_matrix(&text)?;
    let snf = smith_normal_form(&m)?;
    println!("S =\n{}", snf.s);
    println!("U =\n{}", snf.u);
    println!("V =\n{}", snf.v);
    let divisors: Vec<String> = snf.elementary_divisors().iter().map(ToString::to_string).collect();
    println!("elementary divisors: [{}]", divisors.join(", "));
    Ok(true)
}
