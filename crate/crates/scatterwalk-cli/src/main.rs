//! `scatterwalk` — scattering matrices, reflection/transmission gadgets and
//! momentum switches for continuous-time quantum walks on graphs.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure. Errors are
//! reported as JSON objects on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use scatterwalk::constructions::Type1Spec;
use scatterwalk::dynamics::{scatter_experiment, RunOptions, WavePacket};
use scatterwalk::exactq2::{conjugation_check_with, ConjugationOutcome};
use scatterwalk::families;
use scatterwalk::scatter::{classify_rt, is_momentum_switch, s_matrix, DEFAULT_TOL};
use scatterwalk::{Gadget, Momentum};

#[derive(Parser)]
#[command(
    name = "scatterwalk",
    version,
    about = "Scattering matrices, R/T gadgets and momentum switches for quantum walks on graphs"
)]
struct Cli {
    /// Seed echoed into reports; all computations are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a gadget from the registry (see `catalog`) and emit its JSON
    /// document; families with closed-form sets also emit a prediction
    /// sidecar.
    Build {
        /// Instance specification, e.g. `path:2,3`, `cycle:4`,
        /// `quarter_half_switch`, `approx_switch:37`.
        spec: String,
        /// Write the gadget document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the predicted reflection/transmission sets here.
        #[arg(long)]
        rt_out: Option<PathBuf>,
    },
    /// Compute the full S-matrix at one or more momenta.
    Smatrix {
        #[arg(long)]
        gadget: PathBuf,
        /// Momentum `p/q`, meaning `k = -π p/q`; repeatable.
        #[arg(long = "k", required = true)]
        momenta: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a two-terminal gadget into reflection/transmission sets.
    Classify {
        #[arg(long)]
        gadget: PathBuf,
        /// Momentum `p/q`; repeatable.
        #[arg(long = "k")]
        momenta: Vec<String>,
        /// Use the grid `{-π j/q : j = 1..q-1}`.
        #[arg(long)]
        grid_q: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a three-terminal gadget routes set D to terminal 2 and set D'
    /// to terminal 3. Exits 2 if it is not a switch.
    CheckSwitch {
        #[arg(long)]
        gadget: PathBuf,
        /// Momenta transmitting 1 → 2; repeatable.
        #[arg(long = "D", required = true)]
        d: Vec<String>,
        /// Momenta transmitting 1 → 3; repeatable.
        #[arg(long = "Dp", required = true)]
        dp: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse a single-attachment connector spec (a gadget document whose
    /// terminal list is read as the attachment set of G₀).
    Reversal {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the three-terminal momentum switch of a single-attachment
    /// connector spec.
    SwitchFrom {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Q(√2) analysis at -π/4: reports the exact S-matrix entries and,
    /// when the gadget reflects perfectly, the conjugation witness tying
    /// -π/4 reflection to -3π/4 reflection.
    ExactCheck {
        #[arg(long)]
        gadget: PathBuf,
        /// Include the full witness vectors as exact strings.
        #[arg(long)]
        witness: bool,
        /// Arm truncation used for the exact verification.
        #[arg(long, default_value_t = scatterwalk::exactq2::DEFAULT_TRUNCATION)]
        truncation: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep odd rail sizes m for record-precision approximate switches.
    ApproxSearch {
        #[arg(long)]
        max_m: u64,
        /// Cross-check small record sizes against the graph solver.
        #[arg(long)]
        validate: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate a Gaussian wave packet on truncated arms and compare
    /// outgoing probabilities with |S|². Exits 2 if the run hits the wall.
    Simulate {
        #[arg(long)]
        gadget: PathBuf,
        /// Packet momentum `p/q`.
        #[arg(long)]
        k: String,
        /// Arm the packet starts on (0-based).
        #[arg(long, default_value_t = 0)]
        arm: usize,
        /// Truncation length per arm.
        #[arg(long = "L", default_value_t = 200)]
        length: usize,
        /// Packet width σ.
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
        /// Packet center x₀ (default L/2).
        #[arg(long)]
        x0: Option<f64>,
        /// Evolution time (default traversal time × 1.2).
        #[arg(long)]
        time: Option<f64>,
        /// Write `<out>.json` and `<out>.csv` instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every registered gadget family.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

enum CliError {
    Input(String),
    Verification(String),
}

impl From<scatterwalk::Error> for CliError {
    fn from(e: scatterwalk::Error) -> Self {
        use scatterwalk::Error::*;
        match e {
            ExactInconsistency(_) | InconsistentSystem(_) | DegenerateSystem(_) => {
                CliError::Verification(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(message)) => {
            report_error("input", &message);
            ExitCode::from(1)
        }
        Err(CliError::Verification(message)) => {
            report_error("verification", &message);
            ExitCode::from(2)
        }
    }
}

fn report_error(kind: &str, message: &str) {
    eprintln!(
        "{}",
        json!({ "error": { "kind": kind, "message": message } })
    );
}

fn load_gadget(path: &Path) -> Result<Gadget, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(Gadget::load(&text)?)
}

/// A connector spec document: the graph is G₀ and the terminal list is the
/// attachment set.
fn load_spec(path: &Path) -> Result<Type1Spec, CliError> {
    let doc = load_gadget(path)?;
    Ok(Type1Spec::new(
        doc.graph().clone(),
        doc.terminals().to_vec(),
    )?)
}

fn parse_momentum(text: &str) -> Result<Momentum, CliError> {
    Ok(text.parse::<Momentum>()?)
}

fn parse_momenta(texts: &[String]) -> Result<Vec<Momentum>, CliError> {
    texts.iter().map(|t| parse_momentum(t)).collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print_stdout(content)?,
    }
    Ok(())
}

/// Prints a line, treating a closed pipe (e.g. `| head`) as success.
fn print_stdout(content: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{content}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn momentum_label(m: &Momentum) -> String {
    match m.fraction() {
        Some((p, q)) => format!("{p}/{q}"),
        None => format!("{}", m.radians()),
    }
}

fn rt_sets_json(predicted: &scatterwalk::constructions::PredictedRt) -> Value {
    json!({
        "reflect": predicted.reflect.iter().map(momentum_label).collect::<Vec<_>>(),
        "transmit": predicted.transmit.iter().map(momentum_label).collect::<Vec<_>>(),
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Build { spec, out, rt_out } => {
            let built = families::build_spec(&spec)?;
            emit(&out, &built.gadget.save())?;
            if let Some(rt_path) = rt_out {
                let sets = built.predicted.as_ref().ok_or_else(|| {
                    CliError::Input(format!("{spec} has no closed-form R/T prediction"))
                })?;
                fs::write(
                    rt_path,
                    serde_json::to_string_pretty(&rt_sets_json(sets)).expect("json"),
                )?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Smatrix {
            gadget,
            momenta,
            format,
            out,
        } => {
            let g = load_gadget(&gadget)?;
            let ks = parse_momenta(&momenta)?;
            match format {
                Format::Json => {
                    let mut items = Vec::new();
                    for k in &ks {
                        let s = s_matrix(&g, *k)?;
                        let entries: Vec<Vec<Value>> = (0..s.dim())
                            .map(|i| (0..s.dim()).map(|j| complex_json(s.entries[(i, j)])).collect())
                            .collect();
                        items.push(json!({
                            "momentum": momentum_label(k),
                            "k": k.radians(),
                            "energy": k.energy(),
                            "entries": entries,
                            "unitarity_defect": s.unitarity_defect(),
                            "symmetry_defect": s.symmetry_defect(),
                        }));
                    }
                    let doc = json!({ "seed": seed, "smatrices": items });
                    emit(&out, &serde_json::to_string_pretty(&doc).expect("json"))?;
                }
                Format::Csv => {
                    let mut csv = String::from("momentum,row,col,re,im,magnitude,phase\n");
                    for k in &ks {
                        let s = s_matrix(&g, *k)?;
                        for i in 0..s.dim() {
                            for j in 0..s.dim() {
                                let z = s.entries[(i, j)];
                                csv.push_str(&format!(
                                    "{},{},{},{},{},{},{}\n",
                                    momentum_label(k),
                                    i + 1,
                                    j + 1,
                                    z.re,
                                    z.im,
                                    z.norm(),
                                    z.arg()
                                ));
                            }
                        }
                    }
                    emit(&out, csv.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Classify {
            gadget,
            momenta,
            grid_q,
            tol,
            format,
            out,
        } => {
            let g = load_gadget(&gadget)?;
            let mut grid = parse_momenta(&momenta)?;
            if let Some(q) = grid_q {
                grid.extend(Momentum::grid(q));
            }
            if grid.is_empty() {
                return Err(CliError::Input(
                    "no momenta given; use --k p/q or --grid-q q".into(),
                ));
            }
            let rt = classify_rt(&g, &grid, tol)?;
            match format {
                Format::Json => {
                    let doc = json!({
                        "seed": seed,
                        "tolerance": rt.tolerance,
                        "reflect": rt.reflect.iter().map(momentum_label).collect::<Vec<_>>(),
                        "transmit": rt.transmit.iter().map(momentum_label).collect::<Vec<_>>(),
                        "rows": rt.rows.iter().map(|r| json!({
                            "momentum": momentum_label(&r.momentum),
                            "reflection": complex_json(r.reflection),
                            "transmission": complex_json(r.transmission),
                        })).collect::<Vec<_>>(),
                    });
                    emit(&out, &serde_json::to_string_pretty(&doc).expect("json"))?;
                }
                Format::Csv => {
                    let mut csv =
                        String::from("momentum,abs_r,phase_r,abs_t,phase_t,reflects,transmits\n");
                    for r in &rt.rows {
                        csv.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            momentum_label(&r.momentum),
                            r.reflection.norm(),
                            r.reflection.arg(),
                            r.transmission.norm(),
                            r.transmission.arg(),
                            (r.reflection.norm() - 1.0).abs() < rt.tolerance,
                            (r.transmission.norm() - 1.0).abs() < rt.tolerance,
                        ));
                    }
                    emit(&out, csv.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::CheckSwitch {
            gadget,
            d,
            dp,
            tol,
            out,
        } => {
            let g = load_gadget(&gadget)?;
            let set_a = parse_momenta(&d)?;
            let set_b = parse_momenta(&dp)?;
            let check = is_momentum_switch(&g, &set_a, &set_b, tol)?;
            let doc = json!({
                "seed": seed,
                "is_switch": check.is_switch,
                "tolerance": check.tolerance,
                "rows": check.rows.iter().map(|r| json!({
                    "momentum": momentum_label(&r.momentum),
                    "to_terminal": r.to_terminal + 1,
                    "magnitude": r.magnitude,
                })).collect::<Vec<_>>(),
            });
            emit(&out, &serde_json::to_string_pretty(&doc).expect("json"))?;
            if check.is_switch {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }

        Command::Reversal { spec, out } => {
            let t2 = load_spec(&spec)?;
            let reversed = scatterwalk::constructions::reversal(&t2)?;
            // Emit the reversed spec in the same document convention.
            let doc = Gadget::from_graph(reversed.g0().clone(), reversed.attach().to_vec())?;
            emit(&out, &doc.save())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::SwitchFrom { spec, out } => {
            let t2 = load_spec(&spec)?;
            let switch = scatterwalk::constructions::switch_from_type2(&t2)?;
            emit(&out, &switch.save())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::ExactCheck {
            gadget,
            witness,
            truncation,
            out,
        } => {
            let g = load_gadget(&gadget)?;
            let quarter = scatterwalk::exactq2::ExactMomentum::QuarterPi;
            let s = scatterwalk::exactq2::exact_s_matrix(&g, quarter)?;
            let outcome = conjugation_check_with(&g, truncation)?;
            let mut doc = json!({
                "seed": seed,
                "momentum": "1/4",
                "exact_s": [
                    [s[0][0].to_string(), s[0][1].to_string()],
                    [s[1][0].to_string(), s[1][1].to_string()],
                ],
            });
            match outcome {
                ConjugationOutcome::NotApplicable {
                    reflection,
                    transmission,
                } => {
                    doc["verdict"] = json!("not_applicable");
                    doc["reflection"] = json!(reflection.to_string());
                    doc["transmission"] = json!(transmission.to_string());
                }
                ConjugationOutcome::Confirmed(w) => {
                    doc["verdict"] = json!("confirmed");
                    doc["ratio"] = json!(format!("{}+{}*sqrt2", w.ratio_rational, w.ratio_sqrt2));
                    doc["nonzero_site_on_arm_1"] = json!(w.nonzero_site);
                    doc["truncation"] = json!(w.truncation_length);
                    if witness {
                        doc["c_vector"] = json!(w
                            .c_vector
                            .iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>());
                        doc["conjugated_state"] = json!(w
                            .conjugated_state
                            .iter()
                            .map(|q| q.to_string())
                            .collect::<Vec<_>>());
                    }
                }
            }
            emit(&out, &serde_json::to_string_pretty(&doc).expect("json"))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::ApproxSearch {
            max_m,
            validate,
            format,
            out,
        } => {
            let records = scatterwalk::approx::search_best_m(max_m);
            let record_set: std::collections::BTreeSet<u64> =
                records.iter().map(|r| r.0).collect();
            if validate {
                for &(m, _) in records.iter().filter(|r| r.0 <= 7) {
                    scatterwalk::approx::validate_against_graph(m, 1e-8)?;
                }
            }
            match format {
                Format::Csv => {
                    let mut csv = String::from("m,error_spectral,error_frobenius,is_record\n");
                    let mut m = 1;
                    while m <= max_m {
                        let a = scatterwalk::approx::v_matrices(m)?;
                        csv.push_str(&format!(
                            "{},{},{},{}\n",
                            m,
                            a.error,
                            a.error_frobenius,
                            record_set.contains(&m)
                        ));
                        m += 2;
                    }
                    emit(&out, csv.trim_end())?;
                }
                Format::Json => {
                    let doc = json!({
                        "seed": seed,
                        "max_m": max_m,
                        "records": records.iter().map(|&(m, e)| json!({"m": m, "error": e}))
                            .collect::<Vec<_>>(),
                        "validated": validate,
                    });
                    emit(&out, &serde_json::to_string_pretty(&doc).expect("json"))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate {
            gadget,
            k,
            arm,
            length,
            sigma,
            x0,
            time,
            out,
        } => {
            let g = load_gadget(&gadget)?;
            let momentum = parse_momentum(&k)?;
            let center = x0.unwrap_or(length as f64 / 2.0);
            let packet = WavePacket::new(arm, center, sigma, momentum)?;
            let options = RunOptions {
                time,
                ..RunOptions::default()
            };
            let report = scatter_experiment(&g, &packet, length, &options)?;

            let mut csv = String::from("t");
            for j in 0..report.outgoing.len() {
                csv.push_str(&format!(",arm{}", j + 1));
            }
            csv.push_str(",norm\n");
            for row in &report.samples {
                csv.push_str(&format!("{}", row.time));
                for p in &row.arm_probability {
                    csv.push_str(&format!(",{p}"));
                }
                csv.push_str(&format!(",{}\n", row.norm));
            }

            let doc = json!({
                "seed": seed,
                "momentum": momentum_label(&momentum),
                "arm": arm + 1,
                "sigma": sigma,
                "x0": center,
                "length": length,
                "time": report.evolution_time,
                "outgoing": report.outgoing,
                "predicted": report.predicted,
                "residual_probability": report.residual_probability,
                "norm_drift": report.norm_drift,
                "energy_drift": report.energy_drift,
                "leaked": report.leaked,
            });
            match out {
                Some(prefix) => {
                    let base = prefix.to_string_lossy().into_owned();
                    fs::write(format!("{base}.csv"), csv.trim_end())?;
                    fs::write(
                        format!("{base}.json"),
                        serde_json::to_string_pretty(&doc).expect("json"),
                    )?;
                }
                None => {
                    print_stdout(&serde_json::to_string_pretty(&doc).expect("json"))?;
                }
            }
            if report.leaked {
                return Err(CliError::Verification(
                    "probability reached the truncation wall; increase --L or lower --time".into(),
                ));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Catalog { format } => {
            match format {
                Format::Json => {
                    let doc = json!({
                        "families": families::registry().iter().map(|f| json!({
                            "name": f.name(),
                            "usage": f.usage(),
                            "summary": f.summary(),
                        })).collect::<Vec<_>>(),
                    });
                    print_stdout(&serde_json::to_string_pretty(&doc).expect("json"))?;
                }
                Format::Csv => {
                    let mut listing = String::from("name,usage,summary\n");
                    for f in families::registry() {
                        listing.push_str(&format!(
                            "{},{},\"{}\"\n",
                            f.name(),
                            f.usage(),
                            f.summary()
                        ));
                    }
                    print_stdout(listing.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
