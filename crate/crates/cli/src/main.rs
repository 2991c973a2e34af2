//! Command-line surface for the approxform library.
//!
//! Every subcommand prints machine-parseable `key=value` lines; numeric
//! output carries up to 15 significant digits with trailing zeros trimmed.
//! Exit codes: 0 success, 1 input or validation error, 2 internal invariant
//! violation (a bug, never expected).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use approxform::algebra::{verify_axioms, AxiomSystem, ConnectiveSet, Orientation, SubsetCoverage};
use approxform::boolinf::{inf_eval, inf_synthesize, minimal_inf_length, TruthTable};
use approxform::decompose::{
    decompose, decompose_dual, theta_chain, theta_decompose, DecomposeError, FactorChain,
};
use approxform::io;
use approxform::lefebvre;
use approxform::map::EvalMap;
use approxform::poset::Poset;

#[derive(Parser)]
#[command(
    name = "approxform",
    version,
    about = "Monotone factor decomposition over finite posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a poset file: carrier, chain bound, rank partition.
    Poset {
        /// Poset JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Write the order dual to this path.
        #[arg(long)]
        emit_dual: Option<PathBuf>,
    },
    /// Verify an axiom system for an algebra over a carrier poset.
    VerifyAxioms {
        /// Algebra selector: `chain-primal:<m>`, `boolean-dual`, or `table:<path>`.
        #[arg(long)]
        algebra: String,
        /// Carrier poset JSON file.
        #[arg(long)]
        poset: PathBuf,
        /// One of: a, b, a-star, b-star.
        #[arg(long)]
        system: String,
    },
    /// Decompose a map into monotone factors (engine follows the algebra's
    /// orientation).
    Decompose {
        #[arg(long)]
        poset: PathBuf,
        /// Map JSON file with values into the algebra codomain.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        algebra: String,
        /// Write the chain file here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-evaluate a chain file and report its verification block.
    Fold {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// Decompose a map into rank-block theta factors.
    Theta {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pad a chain with companion factors without changing its fold.
    Pad {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        algebra: String,
        /// Target factor count.
        #[arg(long)]
        to: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Synthesize an implicative normal form for a truth table.
    Inf {
        /// Row-ordered bit string, e.g. 0110.
        #[arg(long)]
        truth_table: String,
        /// Confirm minimality with the exhaustive oracle (arity <= 3).
        #[arg(long)]
        prove_minimal: bool,
    },
    /// Choice-model computations.
    Lefebvre {
        #[command(subcommand)]
        cmd: LefebvreCmd,
    },
}

#[derive(Subcommand)]
enum LefebvreCmd {
    /// Ensemble marginals, average readiness, and the model gap.
    Marginals {
        /// Eight comma-separated probabilities p0,...,p7.
        #[arg(long)]
        characteristic: String,
    },
    /// Product ensemble from three means; verifies the exact identity.
    Pure {
        /// Three comma-separated means x1,x2,x3.
        #[arg(long)]
        x: String,
    },
    /// Golden-section realist ensemble, optionally Monte Carlo sampled.
    Golden {
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 22)]
        seed: u64,
    },
    /// Trace the local-extremization choice algorithm on an input triple.
    Choose {
        /// Three bits, e.g. 011.
        #[arg(long)]
        bits: String,
    },
    /// Check the four choice axioms for the readiness function and its
    /// broken bilinear variant.
    VerifyAxioms,
    /// Monte Carlo draw from a characteristic.
    Sample {
        #[arg(long)]
        characteristic: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 22)]
        seed: u64,
    },
}

enum AppError {
    Input(String),
    Internal(String),
}

impl AppError {
    fn input(e: impl std::fmt::Display) -> AppError {
        AppError::Input(e.to_string())
    }
}

impl From<io::FormatError> for AppError {
    fn from(e: io::FormatError) -> Self {
        match e {
            io::FormatError::Chain(DecomposeError::Internal(msg)) => AppError::Internal(msg),
            other => AppError::Input(other.to_string()),
        }
    }
}

impl From<DecomposeError> for AppError {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::Internal(msg) => AppError::Internal(msg),
            other => AppError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(AppError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Up to 15 significant digits, trailing zeros trimmed.
fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:.15}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents)
        .map_err(|e| AppError::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<std::sync::Arc<Poset>, AppError> {
    Ok(io::poset_from_json(&read(path)?)?)
}

fn parse_algebra(selector: &str) -> Result<ConnectiveSet, AppError> {
    if selector == "boolean-dual" {
        return Ok(ConnectiveSet::boolean_dual());
    }
    if let Some(m) = selector.strip_prefix("chain-primal:") {
        let m: usize = m
            .parse()
            .map_err(|_| AppError::Input(format!("bad chain size in `{selector}`")))?;
        return ConnectiveSet::chain_primal(m).map_err(AppError::input);
    }
    if let Some(path) = selector.strip_prefix("table:") {
        return Ok(io::algebra_from_json(&read(Path::new(path))?)?);
    }
    Err(AppError::Input(format!(
        "unknown algebra selector `{selector}`; use chain-primal:<m>, boolean-dual, or table:<path>"
    )))
}

fn parse_system(s: &str) -> Result<AxiomSystem, AppError> {
    match s {
        "a" => Ok(AxiomSystem::A),
        "b" => Ok(AxiomSystem::B),
        "a-star" => Ok(AxiomSystem::AStar),
        "b-star" => Ok(AxiomSystem::BStar),
        other => Err(AppError::Input(format!(
            "unknown system `{other}`; use a, b, a-star, or b-star"
        ))),
    }
}

fn load_map(
    path: &Path,
    domain: &std::sync::Arc<Poset>,
    algebra: &ConnectiveSet,
) -> Result<EvalMap, AppError> {
    Ok(io::map_from_json(
        &read(path)?,
        domain.clone(),
        algebra.codomain().clone(),
    )?)
}

fn values_line(map: &EvalMap) -> String {
    map.domain()
        .elements()
        .iter()
        .map(|e| map.value(e).expect("total map").to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_floats<const N: usize>(s: &str, what: &str) -> Result<[f64; N], AppError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(AppError::Input(format!(
            "{what} needs {N} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| AppError::Input(format!("`{part}` is not a number")))?;
    }
    Ok(out)
}

fn parse_bits(s: &str) -> Result<(bool, bool, bool), AppError> {
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(AppError::Input(format!("`{s}` is not a 3-bit string"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() != 3 {
        return Err(AppError::Input(format!("`{s}` is not a 3-bit string")));
    }
    Ok((bits[0], bits[1], bits[2]))
}

fn run(command: Command) -> Result<String, AppError> {
    let mut out = String::new();
    match command {
        Command::Poset { input, emit_dual } => {
            let p = load_poset(&input)?;
            writeln!(out, "elements={}", p.len()).unwrap();
            writeln!(out, "d={}", p.max_chain_length()).unwrap();
            let partition = p
                .rank_partition()
                .iter()
                .map(|block| block.join(","))
                .collect::<Vec<_>>()
                .join("|");
            writeln!(out, "rank_partition={partition}").unwrap();
            if let Some(path) = emit_dual {
                write_out(&path, &io::poset_to_json(&p.order_dual()))?;
                writeln!(out, "emitted_dual={}", path.display()).unwrap();
            }
        }
        Command::VerifyAxioms {
            algebra,
            poset,
            system,
        } => {
            let cs = parse_algebra(&algebra)?;
            let p = load_poset(&poset)?;
            let system = parse_system(&system)?;
            let report = verify_axioms(&cs, &p, system).map_err(AppError::input)?;
            writeln!(out, "system={}", report.system).unwrap();
            writeln!(out, "passed={}", report.passed).unwrap();
            let coverage = match report.subset_coverage {
                SubsetCoverage::Exhaustive => "exhaustive",
                SubsetCoverage::DownSetFamily => "down-set-family",
            };
            writeln!(out, "subset_coverage={coverage}").unwrap();
            writeln!(out, "violations={}", report.total_violations).unwrap();
            for v in &report.violations {
                writeln!(
                    out,
                    "violation={} {}",
                    v.axiom_label(report.system),
                    v.describe()
                )
                .unwrap();
            }
        }
        Command::Decompose {
            poset,
            map,
            algebra,
            output,
        } => {
            let cs = parse_algebra(&algebra)?;
            let p = load_poset(&poset)?;
            let psi = load_map(&map, &p, &cs)?;
            let chain = match cs.orientation() {
                Orientation::Primal => decompose(&psi, &cs)?,
                Orientation::Dual => decompose_dual(&psi, &cs)?,
            };
            print_chain(&mut out, &chain, Some(&psi));
            if let Some(path) = output {
                write_out(&path, &io::chain_to_json(&chain, Some(&psi)))?;
                writeln!(out, "output={}", path.display()).unwrap();
            }
        }
        Command::Fold {
            poset,
            chain,
            algebra,
        } => {
            let cs = parse_algebra(&algebra)?;
            let p = load_poset(&poset)?;
            let chain = io::chain_from_json(&read(&chain)?, p, &cs)?;
            print_chain(&mut out, &chain, None);
            writeln!(out, "factors_monotone=true").unwrap();
        }
        Command::Theta {
            poset,
            map,
            algebra,
            output,
        } => {
            let cs = parse_algebra(&algebra)?;
            let p = load_poset(&poset)?;
            let psi = load_map(&map, &p, &cs)?;
            let thetas = theta_decompose(&psi, &cs)?;
            writeln!(out, "elements={}", p.elements().join(",")).unwrap();
            writeln!(out, "blocks={}", thetas.len()).unwrap();
            for t in &thetas {
                writeln!(out, "theta_{}={}", t.rank(), values_line(t.map())).unwrap();
            }
            let chain = theta_chain(&thetas, &cs)?;
            let fold = chain.fold();
            writeln!(out, "fold={}", values_line(&fold)).unwrap();
            writeln!(out, "fold_equal={}", fold == psi).unwrap();
            if let Some(path) = output {
                write_out(&path, &io::chain_to_json(&chain, Some(&psi)))?;
                writeln!(out, "output={}", path.display()).unwrap();
            }
        }
        Command::Pad {
            poset,
            chain,
            algebra,
            to,
            output,
        } => {
            let cs = parse_algebra(&algebra)?;
            let p = load_poset(&poset)?;
            let loaded = io::chain_from_json(&read(&chain)?, p, &cs)?;
            let before_fold = loaded.fold();
            let padded = loaded.pad_to(to)?;
            writeln!(out, "factors_before={}", loaded.factors().len()).unwrap();
            writeln!(out, "factors_after={}", padded.factors().len()).unwrap();
            writeln!(out, "fold_preserved={}", padded.fold() == before_fold).unwrap();
            if let Some(path) = output {
                write_out(&path, &io::chain_to_json(&padded, Some(&before_fold)))?;
                writeln!(out, "output={}", path.display()).unwrap();
            }
        }
        Command::Inf {
            truth_table,
            prove_minimal,
        } => {
            let t = TruthTable::parse(&truth_table).map_err(AppError::input)?;
            let chain = inf_synthesize(&t).map_err(AppError::input)?;
            writeln!(out, "n={}", t.arity()).unwrap();
            writeln!(out, "factors={}", chain.factors().len()).unwrap();
            writeln!(out, "implications={}", chain.implications()).unwrap();
            for (i, f) in chain.factors().iter().enumerate() {
                writeln!(out, "factor_{}={}", i + 1, f.to_bit_string()).unwrap();
            }
            let check = if inf_eval(&chain) == t { "OK" } else { "FAIL" };
            writeln!(out, "reconstruction={check}").unwrap();
            if check == "FAIL" {
                return Err(AppError::Internal(
                    "synthesized chain does not evaluate back to its input".into(),
                ));
            }
            if prove_minimal {
                let k = minimal_inf_length(&t).map_err(AppError::input)?;
                writeln!(out, "minimal_factors={k}").unwrap();
            }
        }
        Command::Lefebvre { cmd } => run_lefebvre(cmd, &mut out)?,
    }
    Ok(out)
}

fn print_chain(out: &mut String, chain: &FactorChain, target: Option<&EvalMap>) {
    let orientation = match chain.orientation() {
        Orientation::Primal => "primal",
        Orientation::Dual => "dual",
    };
    let domain = chain.factors()[0].domain();
    writeln!(out, "orientation={orientation}").unwrap();
    writeln!(out, "elements={}", domain.elements().join(",")).unwrap();
    writeln!(out, "factors={}", chain.factors().len()).unwrap();
    writeln!(out, "boxminus_count={}", chain.boxminus_count()).unwrap();
    writeln!(out, "d={}", domain.max_chain_length()).unwrap();
    for (i, f) in chain.factors().iter().enumerate() {
        writeln!(out, "factor_{}={}", i + 1, values_line(f)).unwrap();
    }
    let fold = chain.fold();
    writeln!(out, "fold={}", values_line(&fold)).unwrap();
    if let Some(target) = target {
        writeln!(out, "fold_equal={}", fold == *target).unwrap();
    }
}

fn characteristic_from(s: &str) -> Result<lefebvre::EnsembleCharacteristic, AppError> {
    let p = parse_floats::<8>(s, "characteristic")?;
    lefebvre::EnsembleCharacteristic::new(p).map_err(AppError::input)
}

fn axiom_block(out: &mut String, prefix: &str, report: &lefebvre::LAxiomReport) {
    let line = |slot: &Option<String>| match slot {
        None => "pass".to_string(),
        Some(witness) => format!("fail {witness}"),
    };
    writeln!(out, "{prefix}_free_choice={}", line(&report.free_choice)).unwrap();
    writeln!(out, "{prefix}_credulity={}", line(&report.credulity)).unwrap();
    writeln!(out, "{prefix}_non_evil={}", line(&report.non_evil)).unwrap();
    writeln!(out, "{prefix}_simplicity={}", line(&report.simplicity)).unwrap();
    writeln!(out, "{prefix}_passed={}", report.passed()).unwrap();
}

fn run_lefebvre(cmd: LefebvreCmd, out: &mut String) -> Result<(), AppError> {
    match cmd {
        LefebvreCmd::Marginals { characteristic } => {
            let c = characteristic_from(&characteristic)?;
            let m = c.marginals();
            writeln!(out, "x={},{},{}", num(m.x1), num(m.x2), num(m.x3)).unwrap();
            writeln!(out, "z={}", num(m.z)).unwrap();
            writeln!(out, "f={}", num(m.model_readiness)).unwrap();
            writeln!(out, "gap={}", num(m.gap())).unwrap();
        }
        LefebvreCmd::Pure { x } => {
            let [x1, x2, x3] = parse_floats::<3>(&x, "means")?;
            let c = lefebvre::pure_ensemble(x1, x2, x3).map_err(AppError::input)?;
            let line = c
                .probabilities()
                .iter()
                .map(|&v| num(v))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "p={line}").unwrap();
            let m = c.marginals();
            writeln!(out, "x={},{},{}", num(m.x1), num(m.x2), num(m.x3)).unwrap();
            writeln!(out, "z={}", num(m.z)).unwrap();
            writeln!(out, "f={}", num(m.model_readiness)).unwrap();
            writeln!(out, "identity={}", m.gap() <= lefebvre::PROB_TOLERANCE).unwrap();
        }
        LefebvreCmd::Golden { samples, seed } => {
            let root = lefebvre::golden_root();
            writeln!(out, "root={}", num(root)).unwrap();
            let residual = (root * root * root - 2.0 * root + 1.0).abs();
            writeln!(out, "residual={residual:.3e}").unwrap();
            let c = lefebvre::realist_characteristic(root).map_err(AppError::input)?;
            let m = c.marginals();
            writeln!(out, "x1={}", num(m.x1)).unwrap();
            writeln!(out, "x2={}", num(m.x2)).unwrap();
            writeln!(out, "x3_marginal={}", num(m.x3)).unwrap();
            let realist = c.support().iter().all(|&k| lefebvre::is_realist_index(k));
            writeln!(out, "support_realist={realist}").unwrap();
            if let Some(n) = samples {
                if n == 0 {
                    return Err(AppError::Input("sample count must be positive".into()));
                }
                let summary = lefebvre::sample_ensemble(&c, n, seed);
                let z_n3 = summary.bit_fraction(3);
                let se = summary.bit_stderr(3);
                writeln!(out, "samples={n}").unwrap();
                writeln!(out, "seed={seed}").unwrap();
                writeln!(out, "zhat_n3={}", num(z_n3)).unwrap();
                writeln!(out, "stderr_n3={}", num(se)).unwrap();
                writeln!(out, "within_3_sigma={}", (z_n3 - root).abs() <= 3.0 * se).unwrap();
                let all_realist = (0..8)
                    .filter(|&k| summary.counts[k] > 0)
                    .all(lefebvre::is_realist_index);
                writeln!(out, "all_sampled_realist={all_realist}").unwrap();
            }
        }
        LefebvreCmd::Choose { bits } => {
            let (b1, b2, b3) = parse_bits(&bits)?;
            let trace = lefebvre::choose(b1, b2, b3);
            writeln!(out, "input={bits}").unwrap();
            for (i, path) in trace.stage_paths.iter().enumerate() {
                writeln!(out, "stage{}={}", i + 1, path.join("->")).unwrap();
            }
            writeln!(out, "final={}", trace.final_state).unwrap();
            writeln!(out, "output={}", trace.output as u8).unwrap();
            let formula = lefebvre::boolean_readiness(b1, b2, b3);
            writeln!(out, "formula={}", formula as u8).unwrap();
            writeln!(out, "match={}", trace.output == formula).unwrap();
        }
        LefebvreCmd::VerifyAxioms => {
            let good = lefebvre::verify_l_axioms(&|a, b, c| lefebvre::readiness(a, b, c).unwrap());
            axiom_block(out, "readiness", &good);
            let bad =
                lefebvre::verify_l_axioms(&|a, b, c| lefebvre::readiness_variant(a, b, c).unwrap());
            axiom_block(out, "variant", &bad);
        }
        LefebvreCmd::Sample {
            characteristic,
            samples,
            seed,
        } => {
            if samples == 0 {
                return Err(AppError::Input("sample count must be positive".into()));
            }
            let c = characteristic_from(&characteristic)?;
            let summary = lefebvre::sample_ensemble(&c, samples, seed);
            writeln!(out, "samples={samples}").unwrap();
            writeln!(out, "seed={seed}").unwrap();
            writeln!(out, "zhat={}", num(summary.readiness_fraction)).unwrap();
            writeln!(out, "stderr={}", num(summary.stderr)).unwrap();
            let counts = summary
                .counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "counts={counts}").unwrap();
        }
    }
    Ok(())
}
