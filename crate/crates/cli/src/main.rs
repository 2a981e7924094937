mod commands;
mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use palg_core::{Error, FieldSpec, ResidueKind, DEFAULT_PRECISION};

use report::{Format, Residue, SessionConfig};

/// Witt vectors, Artin-Schreier-Witt extensions and cyclic p-algebras over k((t)).
#[derive(Parser)]
#[command(name = "palg", version)]
struct Cli {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Witt vector length; the symbols have degree p^m.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Residue field: F_p or F_p(u).
    #[arg(long, global = true, value_enum, default_value_t = Residue::FpU)]
    residue: Residue,
    /// Precision given to series written without an O(t^N) term.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector arithmetic.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Ramification of K_ω.
    #[command(subcommand)]
    Ram(RamCmd),
    /// Symbol rewriting.
    #[command(subcommand)]
    Symbol(SymbolCmd),
    /// Theorem pipelines.
    #[command(subcommand)]
    Thm(ThmCmd),
    /// Independent cross-checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum WittCmd {
    /// Witt vector sum.
    Add { a: String, b: String },
    /// Additive inverse.
    Neg { a: String },
}

#[derive(Subcommand)]
enum RamCmd {
    /// Classifies K_ω for a Witt vector (or, for m = 1, a bare series).
    Analyze { omega: String },
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Makes ω a vector of p-th powers and pushes v(b) below the poles of ω.
    Normalize { symbol: String },
    /// [ω, b) ≅ [ω + (b, 0, ..), b), with its derivation.
    Rewrite { symbol: String },
}

#[derive(Args)]
struct OmegaB {
    #[arg(long)]
    omega: String,
    #[arg(long)]
    b: String,
}

#[derive(Subcommand)]
enum ThmCmd {
    /// Purely inseparable maximal subfield K(c^(1/p^m)) of a totally ramified [ω, b).
    CyclicToInsep(OmegaB),
    /// Totally ramified cyclic maximal subfield of [ω, b) with p ∤ v(b).
    InsepToCyclic(OmegaB),
    /// The same for any m over a perfect residue field.
    Perfect(OmegaB),
    /// Two division algebras [ω_i, b) with unramified K_ω_i whose residue fields meet only in k.
    DisjointPair {
        #[arg(long)]
        b: String,
    },
    /// Runs insep-to-cyclic, then cyclic-to-insep on its output.
    Roundtrip(OmegaB),
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Ghost identities of the universal sum and negation polynomials.
    GhostCheck {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Compares the analyzer with the Newton-polygon classifier for m = 1.
    NewtonCheck {
        omega1: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

impl Cli {
    fn config(&self) -> SessionConfig {
        SessionConfig {
            p: self.p,
            m: self.m,
            residue: self.residue,
            precision: self.precision,
            format: self.format,
            seed: self.seed,
        }
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: &str| {
            map.insert(k.to_string(), v.to_string());
        };
        match &self.cmd {
            Command::Witt(WittCmd::Add { a, b }) => {
                put("a", a);
                put("b", b);
            }
            Command::Witt(WittCmd::Neg { a }) => put("a", a),
            Command::Ram(RamCmd::Analyze { omega }) => put("omega", omega),
            Command::Symbol(SymbolCmd::Normalize { symbol } | SymbolCmd::Rewrite { symbol }) => {
                put("symbol", symbol)
            }
            Command::Thm(
                ThmCmd::CyclicToInsep(ob)
                | ThmCmd::InsepToCyclic(ob)
                | ThmCmd::Perfect(ob)
                | ThmCmd::Roundtrip(ob),
            ) => {
                put("omega", &ob.omega);
                put("b", &ob.b);
            }
            Command::Thm(ThmCmd::DisjointPair { b }) => put("b", b),
            Command::Oracle(OracleCmd::GhostCheck { samples }) => {
                put("samples", &samples.to_string())
            }
            Command::Oracle(OracleCmd::NewtonCheck { omega1, count }) => match omega1 {
                Some(w) => put("omega1", w),
                None => put("count", &count.to_string()),
            },
        }
        map
    }
}

fn field(cfg: &SessionConfig) -> Result<FieldSpec, Error> {
    if !(1..=4).contains(&cfg.m) {
        return Err(Error::UnsupportedInput(format!(
            "--m must be between 1 and 4, got {}",
            cfg.m
        )));
    }
    if cfg.precision <= 0 {
        return Err(Error::UnsupportedInput(format!(
            "--precision must be positive, got {}",
            cfg.precision
        )));
    }
    let kind = match cfg.residue {
        Residue::Fp => ResidueKind::PrimeField,
        Residue::FpU => ResidueKind::RationalFunctionField,
    };
    FieldSpec::new(cfg.p, kind)
}

fn run(cli: &Cli, cfg: &SessionConfig) -> Result<report::Outcome, Error> {
    let k = field(cfg)?;
    let ctx = commands::Ctx { cfg, k };
    match &cli.cmd {
        Command::Witt(WittCmd::Add { a, b }) => ctx.witt_add(a, b),
        Command::Witt(WittCmd::Neg { a }) => ctx.witt_neg(a),
        Command::Ram(RamCmd::Analyze { omega }) => ctx.ram_analyze(omega),
        Command::Symbol(SymbolCmd::Normalize { symbol }) => ctx.symbol_normalize(symbol),
        Command::Symbol(SymbolCmd::Rewrite { symbol }) => ctx.symbol_rewrite(symbol),
        Command::Thm(ThmCmd::CyclicToInsep(ob)) => ctx.cyclic_to_insep(&ob.omega, &ob.b),
        Command::Thm(ThmCmd::InsepToCyclic(ob)) => ctx.insep_to_cyclic(&ob.omega, &ob.b),
        Command::Thm(ThmCmd::Perfect(ob)) => ctx.perfect(&ob.omega, &ob.b),
        Command::Thm(ThmCmd::DisjointPair { b }) => ctx.disjoint_pair(b),
        Command::Thm(ThmCmd::Roundtrip(ob)) => ctx.roundtrip(&ob.omega, &ob.b),
        Command::Oracle(OracleCmd::GhostCheck { samples }) => ctx.ghost_check(*samples),
        Command::Oracle(OracleCmd::NewtonCheck { omega1, count }) => {
            ctx.newton_check(omega1.as_deref(), *count)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.config();
    let inputs = cli.inputs();
    let result = run(&cli, &cfg).map(|mut out| {
        for (k, v) in &inputs {
            out.inputs.entry(k.clone()).or_insert_with(|| v.clone());
        }
        out
    });
    ExitCode::from(report::emit(&cfg, inputs, result) as u8)
}
