use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use matpart::augment::{find_covering, Coverage};
use matpart::feasible::{packing_feasible, FeasibleFamily, Packability, PackingRoute};
use matpart::io::{
    assignment_json, build_instance, obstruction_json, parse_assignment, parse_instance,
    reduce_instance_file, report_json, to_pretty, uncoverable_json, unpackable_json, Instance,
};
use matpart::partition::{synthesize_partition, Synthesis, SynthesisOptions};
use matpart::selftest::{run_selftest, SelftestOptions};
use matpart::tight::{is_tight, largest_tight_set};
use matpart::{Error, Mode};

/// Base partitionings of matroid families.
#[derive(Parser)]
#[command(name = "matpart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the family has a covering and a packing.
    Check { file: PathBuf },
    /// Find a base partitioning or print the certificate ruling one out.
    Partition {
        file: PathBuf,
        /// Solve the equivalent three-member family and translate back.
        #[arg(long)]
        use_reduction: bool,
    },
    /// Tight-set queries.
    Tight(TightArgs),
    /// Print the equivalent three-member instance.
    Reduce3 { file: PathBuf },
    /// Check an assignment file against the instance.
    Verify {
        file: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        /// covering, packing or partitioning
        #[arg(long)]
        mode: String,
    },
    /// Run the randomised self-checks against brute force.
    Selftest {
        #[arg(long, default_value_t = 7)]
        max_elements: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Break one oracle per trial to exercise failure reporting.
        #[arg(long, hide = true)]
        corrupt_oracle: bool,
    },
}

#[derive(Args)]
struct TightArgs {
    file: PathBuf,
    /// Print the largest tight set.
    #[arg(long, conflicts_with = "subset", required_unless_present = "subset")]
    largest: bool,
    /// Test a comma-separated subset for tightness.
    #[arg(long, allow_hyphen_values = true)]
    subset: Option<String>,
}

const OK: u8 = 0;
const ABSENT: u8 = 1;
const INPUT_ERROR: u8 = 2;
const INTERNAL_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, code)) => {
            print!("{}", to_pretty(&value));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Internal(_) => INTERNAL_ERROR,
                _ => INPUT_ERROR,
            })
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Error> {
    parse_instance(&read(path)?)
        .map(|p| p.1)
        .map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
            other => other,
        })
}

/// Re-verifies an assignment before it is printed.
fn checked(inst: &Instance, a: &matpart::Assignment) -> Result<Value, Error> {
    let report = a.verify(&inst.family);
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "refusing to print an invalid {}: {:?}",
            a.mode, report.violations
        )));
    }
    Ok(assignment_json(&inst.names, a))
}

fn run(cmd: Command) -> Result<(Value, u8), Error> {
    match cmd {
        Command::Check { file } => {
            let inst = load(&file)?;
            let covering = match find_covering(&inst.family)? {
                Coverage::Covered(a) => json!({"exists": true, "assignment": checked(&inst, &a)?}),
                Coverage::Uncoverable(c) => {
                    json!({"exists": false, "certificate": uncoverable_json(&inst.names, &c)})
                }
            };
            let seed = FeasibleFamily::seed(&inst.family)?;
            let packing = match packing_feasible(&seed, PackingRoute::auto(inst.family.len()))? {
                Packability::Packed(p) => {
                    json!({"exists": true, "assignment": checked(&inst, &p)?})
                }
                Packability::Unpackable(c) => {
                    json!({"exists": false, "certificate": unpackable_json(&inst.names, &c)})
                }
            };
            Ok((json!({"covering": covering, "packing": packing}), OK))
        }
        Command::Partition {
            file,
            use_reduction,
        } => {
            let inst = load(&file)?;
            let opts = SynthesisOptions {
                use_reduction,
                ..Default::default()
            };
            match synthesize_partition(&inst.family, opts)? {
                Synthesis::Partition(a) => Ok((checked(&inst, &a)?, OK)),
                Synthesis::Absent(o) => {
                    if !o.verify(&inst.family) {
                        return Err(Error::Internal("certificate fails its own check".into()));
                    }
                    Ok((obstruction_json(&inst.names, &o), ABSENT))
                }
            }
        }
        Command::Tight(args) => {
            let inst = load(&args.file)?;
            if args.largest {
                let t = largest_tight_set(&inst.family)?;
                return Ok((json!({"largest_tight": inst.names.names_of(t.set)}), OK));
            }
            let csv = args.subset.unwrap_or_default();
            let ids: Vec<&str> = csv
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let x = inst.names.resolve(&ids)?;
            Ok((json!({"tight": is_tight(&inst.family, x)?.is_some()}), OK))
        }
        Command::Reduce3 { file } => {
            let (parsed, _) = parse_instance(&read(&file)?)?;
            let reduced = reduce_instance_file(&parsed)?;
            // make sure the printed file parses back
            build_instance(&reduced)?;
            let value =
                serde_json::to_value(&reduced).map_err(|e| Error::Internal(e.to_string()))?;
            Ok((value, OK))
        }
        Command::Verify {
            file,
            assignment,
            mode,
        } => {
            let inst = load(&file)?;
            let mode =
                Mode::parse(&mode).ok_or_else(|| Error::Input(format!("unknown mode {mode:?}")))?;
            let a = parse_assignment(&read(&assignment)?, &inst.names, Some(mode))?;
            let report = a.verify(&inst.family);
            let code = if report.is_valid() { OK } else { ABSENT };
            Ok((report_json(&inst.names, mode, &report), code))
        }
        Command::Selftest {
            max_elements,
            trials,
            seed,
            corrupt_oracle,
        } => {
            let report = run_selftest(&SelftestOptions {
                max_elements,
                trials,
                seed,
                corrupt_oracle,
            });
            let code = if report.passed { OK } else { INTERNAL_ERROR };
            let value =
                serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
            Ok((value, code))
        }
    }
}
