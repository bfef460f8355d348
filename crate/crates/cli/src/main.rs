//! `krivine`: run processes, play realizability matches, extract thread
//! schemes and query the bounded G0 oracle.

mod interactive;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use krivine::formula::{truth_oracle_g0, ArithFormula, FormulaRegistry, Verdict as Oracle};
use krivine::game::{
    play_g0, play_g1, play_g2, Abelard, BlindEloise, BoundedAbelard, Fresh, MatchConfig, RandomAbelard, Script,
    Scripted,
};
use krivine::machine::Machine;
use krivine::realizers::Library;
use krivine::scheme::extract_scheme;
use krivine::syntax::{parse_process, Extra};
use krivine::Registry;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "krivine", version, about = "Krivine machine, realizability games and thread schemes")]
struct Cli {
    /// Extra formulae, as a JSON file of formula records.
    #[arg(long, global = true)]
    formulas: Option<PathBuf>,
    /// Extra realizers, as a JSON manifest.
    #[arg(long, global = true)]
    library: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Step budget.
    #[arg(long, env = "KRIVINE_STEPS", default_value_t = 100_000)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GameArg {
    G0,
    G1,
    G2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtraArg {
    Quote,
    Eq,
    EqNat,
    Fork,
}

impl From<ExtraArg> for Extra {
    fn from(e: ExtraArg) -> Extra {
        match e {
            ExtraArg::Quote => Extra::Quote,
            ExtraArg::Eq => Extra::Eq,
            ExtraArg::EqNat => Extra::EqNat,
            ExtraArg::Fork => Extra::Fork,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a process and report how it ends.
    Eval {
        /// A process `term * stack`.
        process: String,
        /// Print every visited process.
        #[arg(long)]
        trace: bool,
        /// Extra instructions to install.
        #[arg(long, value_enum, value_delimiter = ',')]
        extras: Vec<ExtraArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Play a realizer against an Abelard strategy.
    Match {
        #[arg(long, value_enum)]
        game: GameArg,
        /// Realizer name (see `list`); not used by g0.
        #[arg(long)]
        realizer: Option<String>,
        #[arg(long)]
        formula: String,
        /// `fresh`, `random`, `interactive`, or a script file. Not used by g0.
        #[arg(long)]
        abelard: Option<String>,
        /// Integers for the fresh adversary.
        #[arg(long, value_delimiter = ',')]
        answers: Vec<u64>,
        /// Leading universal values for the fresh adversary.
        #[arg(long, value_delimiter = ',')]
        leading: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound of the g0 box.
        #[arg(long, default_value_t = 4)]
        bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Extract the thread scheme of a realizer against fresh constants.
    Scheme {
        #[arg(long)]
        realizer: String,
        #[arg(long)]
        formula: String,
        /// Abelard's integers, in order.
        #[arg(long, value_delimiter = ',')]
        answers: Vec<u64>,
        /// Print the tree in DOT instead of text.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decide the G0 game with every variable bounded.
    Oracle {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        bound: u64,
        /// Report `unknown` instead of `lose`.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List realizers and formulae.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Write to stdout; a closed pipe is not an error.
fn emit(format: Format, text: String, value: Value) {
    let mut out = io::stdout().lock();
    let _ = match format {
        Format::Text => out.write_all(text.as_bytes()),
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json values serialize")),
    };
}

fn load(cli: &Cli) -> Result<Library> {
    let mut formulas = FormulaRegistry::builtin();
    if let Some(path) = &cli.formulas {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        formulas.load_json(&text)?;
    }
    let mut lib = Library::with_formulas(formulas)?;
    if let Some(path) = &cli.library {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        lib.load_manifest(&text)?;
    }
    Ok(lib)
}

fn formula(lib: &Library, name: &str) -> Result<ArithFormula> {
    Ok(lib.formulas().get(name)?)
}

fn eval(process: &str, trace: bool, extras: &[ExtraArg], common: Common) -> Result<ExitCode> {
    let extras: Vec<Extra> = extras.iter().map(|&e| e.into()).collect();
    let reg = Registry::with_extras(&extras);
    let p = parse_process(process, &reg)?;
    let mut machine = Machine::new(&reg);
    let t = machine.run(&p, common.steps as usize, &mut []);
    let (text, value) = if trace {
        (t.to_text(), t.to_json())
    } else {
        let text = format!("{} after {} steps at {}\n", t.status, t.steps(), t.last());
        let value = json!({"status": t.status, "steps": t.steps(), "last": t.last().to_string()});
        (text, value)
    };
    emit(common.format, text, value);
    Ok(ExitCode::SUCCESS)
}

fn adversary(spec: &str, answers: &[u64], leading: &[u64], seed: u64) -> Result<Box<dyn Abelard>> {
    Ok(match spec {
        "fresh" => Box::new(Fresh::new(answers.to_vec()).with_leading(leading.to_vec())),
        "random" => Box::new(RandomAbelard::new(seed)),
        "interactive" => Box::new(interactive::prompt()),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading script {path}"))?;
            Box::new(Scripted::new(Script::from_json(&text)?))
        }
    })
}

struct MatchArgs<'a> {
    game: GameArg,
    realizer: Option<&'a str>,
    formula: &'a str,
    abelard: Option<&'a str>,
    answers: &'a [u64],
    leading: &'a [u64],
    seed: u64,
    bound: u64,
    common: Common,
}

fn run_match(lib: &Library, a: MatchArgs<'_>) -> Result<ExitCode> {
    let phi = formula(lib, a.formula)?;
    if a.game == GameArg::G0 {
        return run_g0(&phi, a.bound, a.common.format);
    }
    let (Some(name), Some(spec)) = (a.realizer, a.abelard) else {
        bail!("--realizer and --abelard are required for g1 and g2");
    };
    let entry = lib.get(name)?;
    let mut abelard = adversary(spec, a.answers, a.leading, a.seed)?;
    let cfg = MatchConfig::with_budget(a.common.steps);
    let out = match a.game {
        GameArg::G1 => play_g1(&entry.term, &entry.registry, &phi, abelard.as_mut(), &cfg)?,
        _ => play_g2(&entry.term, &entry.registry, &phi, abelard.as_mut(), &cfg)?,
    };
    emit(a.common.format, out.to_text(), out.to_json());
    Ok(if out.verdict.eloise_wins() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Blind enumeration Eloise against the bounded Abelard.
fn run_g0(phi: &ArithFormula, bound: u64, format: Format) -> Result<ExitCode> {
    let mut eloise = BlindEloise::boxed(bound, phi.h);
    let limit = eloise.limit as usize * phi.h + 1;
    let out = play_g0(phi, &mut eloise, &mut BoundedAbelard { bound }, limit);
    let mut text = format!("game g0 on {} with bound {bound}\n", phi.name);
    for (i, p) in out.history.iter().enumerate().skip(1) {
        text.push_str(&format!("{i}: m = {:?}, n = {:?} (from {})\n", p.m, p.n, p.parent.unwrap_or(0)));
    }
    let verdict = match out.win {
        Some(i) => format!("EloiseWin(entry {i})"),
        None => "AbelardWin".to_string(),
    };
    text.push_str(&format!("verdict: {verdict}\n"));
    let history: Vec<Value> = out
        .history
        .iter()
        .map(|p| json!({"m": p.m, "n": p.n, "parent": p.parent}))
        .collect();
    let value = json!({
        "game": "g0",
        "formula": phi.name,
        "bound": bound,
        "leading": out.z,
        "history": history,
        "verdict": verdict,
    });
    emit(format, text, value);
    Ok(if out.eloise_wins() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn scheme(lib: &Library, realizer: &str, formula_name: &str, answers: &[u64], dot: bool, common: Common) -> Result<ExitCode> {
    let phi = formula(lib, formula_name)?;
    let entry = lib.get(realizer)?;
    let s = extract_scheme(&entry.term, &entry.registry, &phi, answers, common.steps as usize)?;
    let text = if dot { s.to_dot() } else { s.to_text() };
    emit(common.format, text, s.to_json());
    Ok(if s.is_complete() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle(lib: &Library, formula_name: &str, bound: u64, strict: bool, format: Format) -> Result<ExitCode> {
    let phi = formula(lib, formula_name)?;
    let v = truth_oracle_g0(&phi, bound, &[], strict);
    let word = match v {
        Oracle::Win => "win",
        Oracle::Lose => "lose",
        Oracle::Unknown => "unknown",
    };
    let caveat = format!("abelard and leading values in [0,{bound}], eloise in [0,{}]", bound + 1);
    let text = format!("{word} ({caveat})\n");
    emit(format, text, json!({"formula": phi.name, "bound": bound, "verdict": v, "caveat": caveat}));
    Ok(if v == Oracle::Win { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn list(lib: &Library, format: Format) -> Result<ExitCode> {
    let mut text = String::from("realizers:\n");
    let mut realizers = Vec::new();
    for e in lib.entries() {
        let f = e.formula.as_deref().unwrap_or("-");
        text.push_str(&format!("  {:<12} {:<6} {}\n", e.name, f, e.contract.join("; ")));
        realizers.push(json!({"name": e.name, "formula": e.formula, "contract": e.contract, "term": e.term.to_string()}));
    }
    text.push_str("formulae:\n");
    let mut formulas = Vec::new();
    for name in lib.formulas().names() {
        let phi = formula(lib, &name)?;
        text.push_str(&format!("  {:<12} g={} h={}\n", name, phi.g, phi.h));
        formulas.push(json!({"name": name, "g": phi.g, "h": phi.h}));
    }
    emit(format, text, json!({"realizers": realizers, "formulas": formulas}));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Command::Eval { process, trace, extras, common } = &cli.command {
        return eval(process, *trace, extras, *common);
    }
    let lib = load(cli)?;
    match &cli.command {
        Command::Eval { .. } => unreachable!("handled above"),
        Command::Match {
            game,
            realizer,
            formula,
            abelard,
            answers,
            leading,
            seed,
            bound,
            common,
        } => run_match(
            &lib,
            MatchArgs {
                game: *game,
                realizer: realizer.as_deref(),
                formula,
                abelard: abelard.as_deref(),
                answers,
                leading,
                seed: *seed,
                bound: *bound,
                common: *common,
            },
        ),
        Command::Scheme {
            realizer,
            formula,
            answers,
            dot,
            common,
        } => scheme(&lib, realizer, formula, answers, *dot, *common),
        Command::Oracle {
            formula,
            bound,
            strict,
            format,
        } => oracle(&lib, formula, *bound, *strict, *format),
        Command::List { format } => list(&lib, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
