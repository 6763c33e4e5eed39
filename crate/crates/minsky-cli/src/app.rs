//! Command-line surface.
//!
//! Exit codes: 0 success / suite pass, 1 suite failure, 2 suite
//! inconclusive, 64 usage error, 65 malformed input data, 66 missing or
//! unreadable file. Output is byte-stable for identical inputs and flags:
//! sorted JSON keys and no timestamps in data payloads.

use crate::vass::export_vass;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use minsky::gadgets::{
    build_ack, build_ack_reduced, build_eval_f, build_eval_f_branch, build_loop_at_most,
    build_sim_test, build_trivial_preamplifier, build_update_b, compose, GoodConfigLayout,
    PreamplifierSpec,
};
use minsky::ir::{parse, Classification, Configuration, CounterId, Program};
use minsky::semantics::{reach_set, reach_set_with_witnesses, ExplorationPolicy};
use minsky::verify::{
    check_preamplifier, default_eval_f_cases, suite_compose, suite_eval_f, suite_loop_at_most,
    suite_sim_test, suite_sim_test_mutated, SuiteReport, VerifyError,
};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_FILE: i32 = 66;

#[derive(Parser)]
#[command(name = "minsky", version, about = "Counter-program workbench")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a gadget program.
    Gadget {
        #[command(subcommand)]
        gadget: GadgetCmd,
    },
    /// Compute the reachability set from a configuration.
    Reach {
        /// Program file.
        #[arg(short = 'p', long)]
        program: PathBuf,
        /// Start configuration as JSON, e.g. '{"x":"2"}' or '{}'.
        #[arg(long)]
        from: String,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Include one command-level witness per configuration.
        #[arg(long)]
        witness: bool,
    },
    /// Run a verification suite (exit 0 pass, 1 fail, 2 inconclusive).
    Verify {
        #[command(subcommand)]
        suite: VerifyCmd,
    },
    /// Compose a preamplifier with a general program.
    Compose {
        /// Preamplifier program file.
        #[arg(long)]
        preamp: PathBuf,
        /// Preamplifier interface JSON file.
        #[arg(long)]
        spec: PathBuf,
        /// General program to simulate.
        #[arg(long)]
        target: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Size, dimension, classification, counters of a program.
    Stats {
        #[arg(short = 'p', long)]
        program: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Lower a test-free or checking program to a VASS.
    ExportVass {
        #[arg(short = 'p', long)]
        program: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PolicyArgs {
    /// Sum bound K: prune configurations with counter sum above K.
    #[arg(long)]
    sum_bound: Option<u64>,
    /// Prune configurations with any counter above this cap.
    #[arg(long)]
    per_counter_cap: Option<u64>,
    /// State budget before the search truncates.
    #[arg(long, default_value_t = 10_000_000)]
    max_states: usize,
    /// Depth budget (command steps) before the search truncates.
    #[arg(long)]
    max_depth: Option<usize>,
}

impl PolicyArgs {
    fn to_policy(&self) -> ExplorationPolicy {
        ExplorationPolicy {
            sum_bound: self.sum_bound,
            per_counter_cap: self.per_counter_cap,
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// The test-simulation transfer gadget.
    Simtest {
        /// Budget counter, decremented once per transfer step.
        #[arg(long)]
        budget: String,
        /// Block counters, tested counter first, comma-separated.
        #[arg(long, value_delimiter = ',')]
        block: Vec<String>,
        /// Pair counter, decremented twice at the end.
        #[arg(long)]
        pair: String,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Iterate a body at most c + aux times.
    Loopatmost {
        #[arg(long)]
        counter: String,
        #[arg(long)]
        aux: String,
        /// Body program text, inline.
        #[arg(long, conflicts_with = "body_file")]
        body: Option<String>,
        /// Body program file.
        #[arg(long)]
        body_file: Option<PathBuf>,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// The evalF rewrite gadget on the canonical layout.
    Evalf {
        #[arg(short = 'd', long)]
        dim: usize,
        /// Emit a single branch instead of the full choice.
        #[arg(short = 'p', long)]
        branch: Option<usize>,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// The updateB doubling gadget on the canonical layout.
    Updateb {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// The Ackermannian preamplifier on 2d+8 counters.
    Ack {
        d: usize,
        n: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
        /// Also write the preamplifier interface JSON.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// The reduced Ackermannian preamplifier on 2d+6 counters.
    AckReduced {
        d: usize,
        n: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// The fixture preamplifier with K built in.
    TrivialPreamp {
        k: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// The simtest transfer laws, exhaustively.
    Simtest {
        #[arg(long, default_value_t = 2)]
        max_b: usize,
        #[arg(long, default_value_t = 3)]
        max_val: u64,
        /// Run against a deliberately broken gadget; expected to fail.
        #[arg(long)]
        mutated: bool,
    },
    /// One loop-at-most law (variants 1-4), exhaustively.
    Loopatmost {
        #[arg(long)]
        variant: u8,
        #[arg(long, default_value_t = 6)]
        max_c: u64,
    },
    /// The evalF conformity and encoding laws.
    Evalf {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
    },
    /// The preamplifier laws by exhaustive bounded search.
    Preamp {
        /// Check the trivial preamplifier with this K.
        #[arg(long, conflicts_with_all = ["ack", "ack_reduced"])]
        trivial: Option<u64>,
        /// Check Ack(d, n): two values d n.
        #[arg(long, num_args = 2, value_names = ["D", "N"])]
        ack: Option<Vec<u64>>,
        /// Check the reduced Ack(d, n): two values d n.
        #[arg(long, num_args = 2, value_names = ["D", "N"], conflicts_with = "ack")]
        ack_reduced: Option<Vec<u64>>,
        #[arg(long, default_value_t = 2)]
        lmax: u64,
        #[arg(long, default_value_t = 16)]
        sum_bound: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
    },
    /// Equivalence of M under K-bounded semantics with A ▷ M.
    Compose {
        /// General program to simulate.
        #[arg(long)]
        target: PathBuf,
        #[arg(short = 'k', long)]
        k: u64,
        /// Preamplifier program file (defaults to the trivial one for K).
        #[arg(long, requires = "spec")]
        preamp: Option<PathBuf>,
        /// Preamplifier interface JSON file.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Sum bound for the composed search.
        #[arg(long, default_value_t = 48)]
        sum_bound: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_states: usize,
    },
}

/// Errors carrying their process exit code.
struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

type CmdResult<T> = Result<T, CmdError>;

fn read_file(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_FILE, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CmdResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::new(EXIT_FILE, format!("cannot write {}: {e}", path.display())))
}

fn load_program(path: &Path) -> CmdResult<Program> {
    let text = read_file(path)?;
    parse(&text).map_err(|e| CmdError::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn counter(name: &str) -> CmdResult<CounterId> {
    CounterId::try_new(name)
        .ok_or_else(|| CmdError::new(EXIT_DATA, format!("invalid counter name {name:?}")))
}

fn data_err(e: impl std::fmt::Display) -> CmdError {
    CmdError::new(EXIT_DATA, e.to_string())
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> CmdResult<i32> {
    match cli.command {
        Cmd::Gadget { gadget } => run_gadget(gadget),
        Cmd::Reach {
            program,
            from,
            policy,
            witness,
        } => run_reach(&program, &from, &policy.to_policy(), witness),
        Cmd::Verify { suite } => run_verify(suite),
        Cmd::Compose {
            preamp,
            spec,
            target,
            out,
        } => run_compose(&preamp, &spec, &target, &out),
        Cmd::Stats { program, json } => run_stats(&program, json),
        Cmd::ExportVass { program, out } => run_export(&program, &out),
    }
}

fn write_gadget(
    out: &Path,
    spec_out: Option<&Path>,
    program: &Program,
    spec: Option<&PreamplifierSpec>,
) -> CmdResult<i32> {
    write_file(out, &program.render())?;
    if let Some(path) = spec_out {
        let spec = spec.expect("gadget with a spec output has a spec");
        let json = serde_json::to_string_pretty(spec).expect("spec serialization");
        write_file(path, &json)?;
    }
    Ok(EXIT_OK)
}

fn run_gadget(cmd: GadgetCmd) -> CmdResult<i32> {
    match cmd {
        GadgetCmd::Simtest {
            budget,
            block,
            pair,
            out,
        } => {
            let budget = counter(&budget)?;
            let pair = counter(&pair)?;
            let block: Vec<CounterId> = block
                .iter()
                .map(|n| counter(n))
                .collect::<CmdResult<_>>()?;
            let p = build_sim_test(&budget, &block, &pair).map_err(data_err)?;
            write_gadget(&out, None, &p, None)
        }
        GadgetCmd::Loopatmost {
            counter: c,
            aux,
            body,
            body_file,
            out,
        } => {
            let c = counter(&c)?;
            let aux = counter(&aux)?;
            let body_text = match (body, body_file) {
                (Some(text), None) => text,
                (None, Some(path)) => read_file(&path)?,
                _ => {
                    return Err(CmdError::new(
                        EXIT_USAGE,
                        "exactly one of --body and --body-file is required",
                    ))
                }
            };
            let body = parse(&body_text).map_err(data_err)?;
            let p = build_loop_at_most(&c, &aux, body).map_err(data_err)?;
            write_gadget(&out, None, &p, None)
        }
        GadgetCmd::Evalf { dim, branch, out } => {
            if dim < 1 {
                return Err(CmdError::new(EXIT_DATA, "evalf needs d >= 1"));
            }
            let layout = GoodConfigLayout::canonical(dim);
            let p = match branch {
                Some(b) => build_eval_f_branch(&layout, b).map_err(data_err)?,
                None => build_eval_f(&layout),
            };
            write_gadget(&out, None, &p, None)
        }
        GadgetCmd::Updateb { dim, out } => {
            if dim < 1 {
                return Err(CmdError::new(EXIT_DATA, "updateb needs d >= 1"));
            }
            let layout = GoodConfigLayout::canonical(dim);
            write_gadget(&out, None, &build_update_b(&layout), None)
        }
        GadgetCmd::Ack { d, n, out, spec_out } => {
            let (p, spec) = build_ack(d, n).map_err(data_err)?;
            write_gadget(&out, spec_out.as_deref(), &p, Some(&spec))
        }
        GadgetCmd::AckReduced { d, n, out, spec_out } => {
            let (p, spec) = build_ack_reduced(d, n).map_err(data_err)?;
            write_gadget(&out, spec_out.as_deref(), &p, Some(&spec))
        }
        GadgetCmd::TrivialPreamp { k, out, spec_out } => {
            let (p, spec) = build_trivial_preamplifier(k).map_err(data_err)?;
            write_gadget(&out, spec_out.as_deref(), &p, Some(&spec))
        }
    }
}

fn run_reach(
    program: &Path,
    from: &str,
    policy: &ExplorationPolicy,
    witness: bool,
) -> CmdResult<i32> {
    let p = load_program(program)?;
    let from = Configuration::from_json(from).map_err(data_err)?;
    let result = if witness {
        reach_set_with_witnesses(&p, &from, policy)
    } else {
        reach_set(&p, &from, policy)
    }
    .map_err(data_err)?;
    println!(
        "{}",
        serde_json::to_string(&result).expect("result serialization")
    );
    Ok(EXIT_OK)
}

fn suite_exit(report: Result<SuiteReport, VerifyError>, json: bool) -> CmdResult<i32> {
    match report {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&report).expect("report serialization")
                );
            } else {
                print!("{}", report.human_table());
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_SUITE_FAIL
            })
        }
        Err(VerifyError::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(e) => Err(data_err(e)),
    }
}

fn run_verify(cmd: VerifyCmd) -> CmdResult<i32> {
    match cmd {
        VerifyCmd::Simtest {
            max_b,
            max_val,
            mutated,
        } => {
            let report = if mutated {
                suite_sim_test_mutated(max_b, max_val)
            } else {
                suite_sim_test(max_b, max_val)
            };
            suite_exit(report, false)
        }
        VerifyCmd::Loopatmost { variant, max_c } => {
            suite_exit(suite_loop_at_most(variant, max_c), false)
        }
        VerifyCmd::Evalf { dim, max_states } => {
            let policy = ExplorationPolicy::unbounded().with_max_states(max_states);
            let cases = default_eval_f_cases(dim);
            if cases.is_empty() {
                return Err(CmdError::new(
                    EXIT_DATA,
                    "evalf suite has cases for d = 1 and d = 2 only",
                ));
            }
            suite_exit(suite_eval_f(dim, &cases, &policy), false)
        }
        VerifyCmd::Preamp {
            trivial,
            ack,
            ack_reduced,
            lmax,
            sum_bound,
            max_states,
        } => {
            let (program, spec) = match (trivial, ack, ack_reduced) {
                (Some(k), None, None) => build_trivial_preamplifier(k).map_err(data_err)?,
                (None, Some(dn), None) => {
                    build_ack(dn[0] as usize, dn[1]).map_err(data_err)?
                }
                (None, None, Some(dn)) => {
                    build_ack_reduced(dn[0] as usize, dn[1]).map_err(data_err)?
                }
                _ => {
                    return Err(CmdError::new(
                        EXIT_USAGE,
                        "exactly one of --trivial, --ack, --ack-reduced is required",
                    ))
                }
            };
            let policy = ExplorationPolicy::sum_bounded(sum_bound).with_max_states(max_states);
            suite_exit(check_preamplifier(&program, &spec, lmax, &policy), false)
        }
        VerifyCmd::Compose {
            target,
            k,
            preamp,
            spec,
            sum_bound,
            max_states,
        } => {
            let m = load_program(&target)?;
            let (a, spec) = match (preamp, spec) {
                (Some(ppath), Some(spath)) => {
                    let a = load_program(&ppath)?;
                    let spec: PreamplifierSpec =
                        serde_json::from_str(&read_file(&spath)?).map_err(data_err)?;
                    (a, spec)
                }
                (None, None) => build_trivial_preamplifier(k).map_err(data_err)?,
                _ => {
                    return Err(CmdError::new(
                        EXIT_USAGE,
                        "--preamp and --spec go together",
                    ))
                }
            };
            let policy = ExplorationPolicy::sum_bounded(sum_bound).with_max_states(max_states);
            suite_exit(suite_compose(&m, k, &a, &spec, &policy), false)
        }
    }
}

fn run_compose(preamp: &Path, spec: &Path, target: &Path, out: &Path) -> CmdResult<i32> {
    let a = load_program(preamp)?;
    let spec: PreamplifierSpec = serde_json::from_str(&read_file(spec)?).map_err(data_err)?;
    let m = load_program(target)?;
    let composed = compose(&a, &spec, &m).map_err(data_err)?;
    write_file(out, &composed.render())?;
    Ok(EXIT_OK)
}

fn run_stats(program: &Path, json: bool) -> CmdResult<i32> {
    let p = load_program(program)?;
    let counters: Vec<String> = p.counters().iter().map(|c| c.to_string()).collect();
    let class = p.classify();
    if json {
        let tested = match &class {
            Classification::Checking { tested, .. } => {
                Some(tested.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            }
            _ => None,
        };
        let value = serde_json::json!({
            "size": p.size().to_string(),
            "dimension": p.dimension(),
            "class": class.name(),
            "counters": counters,
            "tested": tested,
        });
        println!("{value}");
    } else {
        println!("size      {}", p.size());
        println!("dimension {}", p.dimension());
        println!("class     {}", class.name());
        println!("counters  {}", counters.join(","));
        if let Classification::Checking { tested, .. } = &class {
            let names: Vec<String> = tested.iter().map(|c| c.to_string()).collect();
            println!("tested    {}", names.join(","));
        }
    }
    Ok(EXIT_OK)
}

fn run_export(program: &Path, out: &Path) -> CmdResult<i32> {
    let p = load_program(program)?;
    let vass = export_vass(&p).map_err(|e| CmdError::new(EXIT_DATA, e.to_string()))?;
    write_file(out, &vass.render())?;
    Ok(EXIT_OK)
}
