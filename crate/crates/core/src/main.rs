use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prbox::catalog::{self, identify, lookup};
use prbox::chsh::{chsh_max, chsh_value};
use prbox::commitment::{
    audit_all_splits, audit_protocol, impossibility_sweep, run_trial, run_trials, AuditReport, Mode, Protocol,
    TrialConfig,
};
use prbox::discrimination::{discriminating_povm, verify_perfect_discrimination};
use prbox::json::{table_from_value, table_to_value, tensor_from_value, tensor_to_value};
use prbox::purification::{find_purifications, tripartite_uniqueness_counterexample, Catalog, PurificationReport};
use prbox::table::bitstring;
use prbox::transforms::{orbit, Subgroup};
use prbox::validity::{is_valid_effect, state_violation};
use prbox::{pair, state_to_table, table_to_state, BoxTable, Dyadic, Error, FiducialConvention, GptTensor, Role};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 2718;

#[derive(Parser)]
#[command(name = "prbox", version, about = "Exact PR-box theory toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for protocol runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of protocol runs.
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    /// Worker threads for sweeps and trials (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Fiducial convention id (0-7).
    #[arg(long, global = true, default_value_t = 0)]
    convention: usize,
    /// Also print decimal approximations in text output.
    #[arg(long, global = true)]
    decimal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog, or show one entry.
    Catalog {
        #[command(subcommand)]
        show: Option<CatalogCmd>,
    },
    /// Check a state, effect or table for validity.
    Validate { selector: String },
    /// Box table of a state.
    Table { state: String },
    /// CHSH value of a bipartite table or state, maximized over relabelled forms.
    Chsh {
        #[arg(long)]
        table: String,
    },
    /// Perfect-discrimination measurement for two states.
    Discriminate { first: String, second: String },
    /// Orbit of a state under transforms of the given parties.
    Orbit {
        state: String,
        /// Comma-separated 1-based parties (default: all).
        #[arg(long, value_delimiter = ',')]
        sites: Option<Vec<usize>>,
        /// Exclude party permutations.
        #[arg(long)]
        no_perms: bool,
    },
    /// Purifications of a single-site state.
    Purify {
        target: Option<String>,
        #[arg(long, value_enum, default_value_t = CatalogArg::Bipartite24)]
        catalog: CatalogArg,
        /// Report the tripartite counterexample to uniqueness instead.
        #[arg(long, conflicts_with = "target")]
        counterexample: bool,
    },
    /// Bit-commitment protocols.
    Bc {
        #[command(subcommand)]
        cmd: BcCmd,
    },
    /// Audit every pair of pure bipartite states as a commitment encoding.
    Sweep {
        /// Comma-separated 1-based parties held by Alice.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alice: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    Show { id: String },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum CatalogArg {
    Bipartite24,
    Bipartite24PlusTripartite,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ProtocolArg {
    SingleBox,
    Buhrman,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModeArg {
    Honest,
    NaiveCheat,
    TransformCheat,
}

#[derive(Subcommand)]
enum BcCmd {
    /// Run a protocol `--trials` times from `--seed`.
    Run {
        #[arg(long, value_enum, default_value_t = ProtocolArg::SingleBox)]
        protocol: ProtocolArg,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Honest)]
        mode: ModeArg,
        /// Committed bit (default: random per trial).
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: Option<u8>,
        /// Include every transcript in JSON output.
        #[arg(long)]
        transcripts: bool,
    },
    /// Audit two encodings for correctness, concealing and binding.
    Audit {
        psi0: String,
        psi1: String,
        /// Comma-separated 1-based parties held by Alice (default 1).
        #[arg(long, value_delimiter = ',', conflicts_with = "all_splits")]
        alice: Option<Vec<usize>>,
        /// Audit every nonempty set of Alice parties.
        #[arg(long)]
        all_splits: bool,
    },
}

/// A command that could not run: bad input, unreadable files, malformed
/// documents. Exits 1; failed checks are reported through `Output::ok`.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<Output, Failure>;

struct Output {
    text: String,
    /// Whether every checked expectation held.
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

struct Ctx {
    format: Format,
    seed: u64,
    trials: u64,
    conv: FiducialConvention,
    decimal: bool,
}

impl Ctx {
    fn num(&self, d: Dyadic) -> String {
        if self.decimal {
            format!("{d} (~{})", d.to_f64())
        } else {
            d.to_string()
        }
    }

    fn render(&self, value: Value, text: impl FnOnce() -> String, csv: Option<String>) -> Result<String, Failure> {
        match self.format {
            Format::Json => Ok(serde_json::to_string_pretty(&value).expect("json value")),
            Format::Text => Ok(text()),
            Format::Csv => csv.ok_or_else(|| Failure("csv output is not available for this command".into())),
        }
    }
}

enum Loaded {
    Tensor(GptTensor),
    Table(BoxTable),
}

fn load(selector: &str, conv: &FiducialConvention) -> Result<Loaded, Failure> {
    if let Ok(entry) = lookup(selector, conv) {
        return Ok(Loaded::Tensor(entry.tensor));
    }
    if !Path::new(selector).exists() {
        return Err(Failure(format!("`{selector}` is neither a catalog id nor a readable file")));
    }
    let raw = fs::read_to_string(selector).map_err(|e| Failure(format!("cannot read {selector}: {e}")))?;
    let value: Value = serde_json::from_str(&raw).map_err(|e| Failure(format!("{selector}: malformed JSON: {e}")))?;
    let err = |e: Error| Failure(format!("{selector}: {e}"));
    if value.get("role").is_some() {
        Ok(Loaded::Tensor(tensor_from_value(value).map_err(err)?))
    } else {
        Ok(Loaded::Table(table_from_value(value).map_err(err)?))
    }
}

fn load_state(selector: &str, conv: &FiducialConvention) -> Result<GptTensor, Failure> {
    match load(selector, conv)? {
        Loaded::Tensor(t) if t.role() == Role::State => Ok(t),
        Loaded::Tensor(_) => Err(Failure(format!("`{selector}` is an effect, not a state"))),
        Loaded::Table(t) => Ok(table_to_state(&t, conv)?),
    }
}

fn name(t: &GptTensor, conv: &FiducialConvention) -> String {
    identify(t, conv).unwrap_or_else(|| "custom".into())
}

fn zero_based(parties: &[usize], n: usize) -> Result<Vec<usize>, Failure> {
    parties
        .iter()
        .map(|&p| if p == 0 || p > n { Err(Failure(format!("party {p} out of range 1..={n}"))) } else { Ok(p - 1) })
        .collect()
}

fn table_text(t: &BoxTable, ctx: &Ctx) -> String {
    let n = t.n_parties();
    let mut lines = Vec::new();
    for x in 0..t.strings() {
        let cells: Vec<String> =
            t.support(x).into_iter().map(|a| format!("a={} p={}", bitstring(a, n), ctx.num(t.get(x, a)))).collect();
        lines.push(format!("x={}: {}", bitstring(x, n), cells.join(", ")));
    }
    lines.join("\n")
}

fn cmd_catalog(show: Option<CatalogCmd>, ctx: &Ctx) -> Outcome {
    let entry_json = |e: &catalog::Entry| json!({ "id": e.id, "note": e.note, "tensor": tensor_to_value(&e.tensor) });
    if let Some(CatalogCmd::Show { id }) = show {
        let e = lookup(&id, &ctx.conv)?;
        let text = || {
            let body: Vec<String> = e.tensor.entries().iter().map(|v| ctx.num(*v)).collect();
            let mut s = format!(
                "{} ({}, {} {})\n",
                e.id,
                e.tensor.role(),
                e.tensor.n_parties(),
                if e.tensor.n_parties() == 1 { "party" } else { "parties" }
            );
            s += &if e.tensor.n_parties() == 1 { format!("({})", body.join(", ")) } else { e.tensor.pretty() };
            if let Some(note) = &e.note {
                s += &format!("\n{note}");
            }
            s
        };
        let csv = format!(
            "id,entries\n{},{}\n",
            e.id,
            e.tensor.entries().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        );
        return Ok(Output::ok(ctx.render(entry_json(&e), text, Some(csv))?));
    }
    let entries = catalog::entries(&ctx.conv);
    let value = json!({
        "convention": ctx.conv.id(),
        "entries": entries.iter().map(entry_json).collect::<Vec<_>>(),
    });
    let text = || {
        entries
            .iter()
            .map(|e| {
                let body: Vec<String> = e.tensor.entries().iter().map(|v| ctx.num(*v)).collect();
                format!("{:<9} {:<6} [{}]", e.id, e.tensor.role(), body.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut csv = String::from("id,role,n_parties,entries\n");
    for e in &entries {
        let body: Vec<String> = e.tensor.entries().iter().map(|v| v.to_string()).collect();
        csv += &format!("{},{},{},{}\n", e.id, e.tensor.role(), e.tensor.n_parties(), body.join(" "));
    }
    Ok(Output::ok(ctx.render(value, text, Some(csv))?))
}

fn cmd_validate(selector: &str, ctx: &Ctx) -> Outcome {
    let loaded = match load(selector, &ctx.conv) {
        Ok(l) => l,
        Err(Failure(msg)) if msg.contains("invariant") => {
            let value = json!({ "valid": false, "reason": msg });
            let text = ctx.render(value, || format!("invalid: {msg}"), None)?;
            return Ok(Output { text, ok: false });
        }
        Err(e) => return Err(e),
    };
    let (kind, reason) = match &loaded {
        Loaded::Table(_) => ("table", None),
        Loaded::Tensor(t) if t.role() == Role::State => ("state", state_violation(t).map(|v| v.to_string())),
        Loaded::Tensor(t) => {
            let valid = is_valid_effect(t)?;
            ("effect", (!valid).then(|| "pairs outside [0, 1] with some extremal state".to_string()))
        }
    };
    let valid = reason.is_none();
    let value = json!({ "kind": kind, "reason": reason, "valid": valid });
    let text = ctx.render(
        value,
        || match &reason {
            None => format!("valid {kind}"),
            Some(r) => format!("invalid {kind}: {r}"),
        },
        Some(format!("kind,valid,reason\n{kind},{valid},{}\n", reason.clone().unwrap_or_default())),
    )?;
    Ok(Output { text, ok: valid })
}

fn cmd_table(selector: &str, ctx: &Ctx) -> Outcome {
    let state = load_state(selector, &ctx.conv)?;
    let table = state_to_table(&state, &ctx.conv)?;
    Ok(Output::ok(ctx.render(table_to_value(&table), || table_text(&table, ctx), None)?))
}

fn cmd_chsh(selector: &str, ctx: &Ctx) -> Outcome {
    let table = match load(selector, &ctx.conv)? {
        Loaded::Table(t) => t,
        Loaded::Tensor(t) if t.role() == Role::State => state_to_table(&t, &ctx.conv)?,
        Loaded::Tensor(_) => return Err(Failure("CHSH needs a table or a state".into())),
    };
    let standard = chsh_value(&table)?;
    let (best, form) = chsh_max(&table)?;
    let value = json!({ "chsh": best, "form": [form.0, form.1, form.2], "standard_form": standard });
    Ok(Output::ok(ctx.render(value, || ctx.num(best), Some(format!("chsh,standard_form\n{best},{standard}\n")))?))
}

fn cmd_discriminate(first: &str, second: &str, ctx: &Ctx) -> Outcome {
    let (s1, s2) = (load_state(first, &ctx.conv)?, load_state(second, &ctx.conv)?);
    let povm = discriminating_povm(&s1, &s2, &ctx.conv)?;
    let (p1, p2) = (pair(&povm.a, &s1)?, pair(&povm.a, &s2)?);
    let verified = verify_perfect_discrimination(&povm, &s1, &s2);
    let value = json!({
        "first": name(&s1, &ctx.conv),
        "pairings": [p1, p2],
        "povm": povm.to_json_value(),
        "second": name(&s2, &ctx.conv),
        "verified": verified,
    });
    let text = || {
        let terms: Vec<String> =
            povm.terms.iter().map(|t| t.iter().map(|i| format!("b{i}")).collect::<Vec<_>>().join("⊗")).collect();
        format!(
            "a = {}\npair(a, {}) = {}\npair(a, {}) = {}\nverified: {verified}",
            terms.join(" + "),
            name(&s1, &ctx.conv),
            ctx.num(p1),
            name(&s2, &ctx.conv),
            ctx.num(p2)
        )
    };
    let text = ctx.render(value, text, None)?;
    Ok(Output { text, ok: verified })
}

fn cmd_orbit(selector: &str, sites: Option<Vec<usize>>, no_perms: bool, ctx: &Ctx) -> Outcome {
    let state = load_state(selector, &ctx.conv)?;
    let n = state.n_parties();
    let sites = match sites {
        Some(s) => zero_based(&s, n)?,
        None => (0..n).collect(),
    };
    let mut group = Subgroup::on_sites(n, &sites);
    if no_perms {
        group = group.without_permutations();
    }
    let images = orbit(&state, &group)?;
    let ids: Vec<String> = images.iter().map(|t| name(t, &ctx.conv)).collect();
    let value = json!({
        "images": images.iter().zip(&ids).map(|(t, id)| json!({ "id": id, "tensor": tensor_to_value(t) })).collect::<Vec<_>>(),
        "permutations": !no_perms,
        "sites": sites.iter().map(|s| s + 1).collect::<Vec<_>>(),
        "size": images.len(),
        "state": name(&state, &ctx.conv),
    });
    let text = || format!("orbit size {}\n{}", images.len(), ids.join("\n"));
    let csv = format!("index,id\n{}", ids.iter().enumerate().map(|(i, id)| format!("{i},{id}\n")).collect::<String>());
    Ok(Output::ok(ctx.render(value, text, Some(csv))?))
}

fn report_text(r: &PurificationReport, ctx: &Ctx) -> String {
    let mut s = format!(
        "target: {}\npurifications: {}\n",
        r.target_id.clone().unwrap_or_else(|| r.target.pretty()),
        r.purifications.iter().map(|p| p.id.as_str()).collect::<Vec<_>>().join(", ")
    );
    for w in &r.witnesses {
        let (a, b) = (&r.purifications[w.from].id, &r.purifications[w.to].id);
        match &w.transform {
            Some(t) => s += &format!("{a} -> {b}: {t}\n"),
            None => s += &format!("{a} -> {b}: not connected\n"),
        }
    }
    let _ = ctx;
    s + &format!("unique up to local transforms: {}", r.unique_up_to_local)
}

fn cmd_purify(target: Option<String>, catalog: CatalogArg, counterexample: bool, ctx: &Ctx) -> Outcome {
    let report = if counterexample {
        tripartite_uniqueness_counterexample(&ctx.conv)?
    } else {
        let target = target.ok_or_else(|| Failure("a target state or --counterexample is required".into()))?;
        let catalog = match catalog {
            CatalogArg::Bipartite24 => Catalog::Bipartite24,
            CatalogArg::Bipartite24PlusTripartite => Catalog::Bipartite24PlusTripartite,
        };
        find_purifications(&load_state(&target, &ctx.conv)?, catalog, &ctx.conv)?
    };
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok(Output::ok(ctx.render(value, || report_text(&report, ctx), None)?))
}

fn audit_csv(reports: &[AuditReport]) -> String {
    let mut s = String::from("psi0,psi1,alice,bob,correct,concealing,binding,witness\n");
    let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    for r in reports {
        let w = r.cheat_witness.as_ref().map(|t| t.to_string()).unwrap_or_default();
        s += &format!(
            "{},{},{},{},{},{},{},{w}\n",
            r.psi0,
            r.psi1,
            join(&r.alice),
            join(&r.bob),
            r.correct,
            r.concealing,
            r.binding
        );
    }
    s
}

fn audit_text(r: &AuditReport) -> String {
    let witness = r.cheat_witness.as_ref().map(|t| format!(", cheat {t}")).unwrap_or_default();
    format!(
        "{} vs {} alice={:?} bob={:?}: correct={} concealing={} binding={}{witness}",
        r.psi0, r.psi1, r.alice, r.bob, r.correct, r.concealing, r.binding
    )
}

fn cmd_bc(cmd: BcCmd, ctx: &Ctx) -> Outcome {
    match cmd {
        BcCmd::Run { protocol, n, mode, bit, transcripts } => {
            let config = TrialConfig {
                protocol: match protocol {
                    ProtocolArg::SingleBox => Protocol::SingleBox,
                    ProtocolArg::Buhrman => Protocol::Buhrman,
                },
                mode: match mode {
                    ModeArg::Honest => Mode::Honest,
                    ModeArg::NaiveCheat => Mode::NaiveCheat,
                    ModeArg::TransformCheat => Mode::TransformCheat,
                },
                n,
                bit,
                trials: ctx.trials,
                seed: ctx.seed,
            };
            let summary = run_trials(&config, &ctx.conv)?;
            let ok = summary.matches_expectation();
            let mut value = serde_json::to_value(&summary).expect("summary serializes");
            value["matches_expectation"] = json!(ok);
            if transcripts && ctx.format == Format::Json {
                let all: Vec<Value> = (0..config.trials)
                    .map(|t| run_trial(&config, t, &ctx.conv).map(|tr| serde_json::to_value(tr).expect("transcript")))
                    .collect::<Result<_, _>>()?;
                value["transcripts"] = Value::Array(all);
            }
            let expectation = match config.mode {
                Mode::Honest => "accepted, revealed = c",
                Mode::TransformCheat => "accepted, revealed = c xor 1",
                Mode::NaiveCheat => "acceptance near 1/2",
            };
            let text = || {
                format!(
                    "acceptance {}/{} (rate {})\nrevealed flipped {}/{}\nexpected: {expectation}: {}",
                    summary.accepted,
                    config.trials,
                    ctx.num(summary.acceptance_rate),
                    summary.revealed_flipped,
                    config.trials,
                    if ok { "yes" } else { "NO" }
                )
            };
            let csv = format!(
                "trials,accepted,revealed_flipped,unexpected,matches_expectation\n{},{},{},{},{ok}\n",
                config.trials, summary.accepted, summary.revealed_flipped, summary.unexpected
            );
            Ok(Output { text: ctx.render(value, text, Some(csv))?, ok })
        }
        BcCmd::Audit { psi0, psi1, alice, all_splits } => {
            let (s0, s1) = (load_state(&psi0, &ctx.conv)?, load_state(&psi1, &ctx.conv)?);
            let reports = if all_splits {
                audit_all_splits(&s0, &s1, &ctx.conv)?
            } else {
                let alice = zero_based(&alice.unwrap_or_else(|| vec![1]), s0.n_parties())?;
                vec![audit_protocol(&s0, &s1, &alice, &ctx.conv)?]
            };
            let value = serde_json::to_value(&reports).expect("reports serialize");
            let text = || reports.iter().map(audit_text).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(ctx.render(value, text, Some(audit_csv(&reports)))?))
        }
    }
}

fn cmd_sweep(alice: Vec<usize>, ctx: &Ctx) -> Outcome {
    let alice = zero_based(&alice, 2)?;
    let summary = impossibility_sweep(&alice, &ctx.conv)?;
    let ok = summary.perfect == 0;
    let value = serde_json::to_value(&summary).expect("summary serializes");
    let text = || {
        let counts: Vec<String> =
            summary.counts.iter().map(|(k, v)| format!("  correct,concealing,binding = {k}: {v}")).collect();
        format!(
            "{} / {} pairs admit perfect BC\nconcealing pairs: {}\n{}",
            summary.perfect,
            summary.pairs,
            summary.concealing,
            counts.join("\n")
        )
    };
    let csv = summary.to_csv()?;
    Ok(Output { text: ctx.render(value, text, Some(csv))?, ok })
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    let ctx = Ctx {
        format: g.format,
        seed: g.seed,
        trials: g.trials,
        conv: FiducialConvention::from_id(g.convention)?,
        decimal: g.decimal,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs)
        .build()
        .map_err(|e| Failure(format!("cannot start {} workers: {e}", g.jobs)))?;
    pool.install(|| match cli.command {
        Command::Catalog { show } => cmd_catalog(show, &ctx),
        Command::Validate { selector } => cmd_validate(&selector, &ctx),
        Command::Table { state } => cmd_table(&state, &ctx),
        Command::Chsh { table } => cmd_chsh(&table, &ctx),
        Command::Discriminate { first, second } => cmd_discriminate(&first, &second, &ctx),
        Command::Orbit { state, sites, no_perms } => cmd_orbit(&state, sites, no_perms, &ctx),
        Command::Purify { target, catalog, counterexample } => cmd_purify(target, catalog, counterexample, &ctx),
        Command::Bc { cmd } => cmd_bc(cmd, &ctx),
        Command::Sweep { alice } => cmd_sweep(alice, &ctx),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if writeln!(stdout, "{}", out.text.trim_end()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if out.ok { 0 } else { 2 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
