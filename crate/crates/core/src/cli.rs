//! Command-line front end: build constructions, verify properties and
//! weight claims, solve instances, run simulations and the end-to-end
//! reduction, and emit the round-bound report.
//!
//! Every run prints a `config:` line on stderr from which it can be
//! reproduced; machine output goes to stdout (or `--out`) so reports stay
//! parseable. Commands that check things exit nonzero when a check fails.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bits::BitString;
use crate::codegadget::{cyclic_shift_table, make_params, Backend, CodeParams};
use crate::construct::{
    build_linear_fixed, build_linear_instance, build_quadratic_instance, expand_unweighted,
    export, validate_family_condition1, GraphVariant, LowerBoundGraph,
};
use crate::instances::{
    make_intersecting, make_pairwise_disjoint, DisjointnessInstance, InstanceShape,
};
use crate::oracle::verify::{
    verify_linear_claims, verify_properties, verify_quadratic_claims, CheckRecord, VerifyReport,
};
use crate::oracle::{mwis_exact, node_guard};
use crate::simulate::{
    default_bits, default_reduction, gap_ratio, gap_threshold, gather_and_solve_algorithm,
    lower_bound_report, multiparty_simulate, run_congest, AlgorithmSpec, FloodMax, ScriptedRandom,
    Silent, Transcript,
};

#[derive(Parser)]
#[command(
    name = "congest-lb",
    version,
    about = "Construction-and-verification laboratory for CONGEST MaxIS lower-bound families"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a graph and export it as JSON, DOT, or a text summary.
    Build(BuildArgs),
    /// Run a verification suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Solve one constructed instance exactly.
    Solve(SolveArgs),
    /// Run a node algorithm under the simulator.
    Simulate(SimulateArgs),
    /// Run the end-to-end disjointness reduction.
    Reduce(ReduceArgs),
    /// Print the round-bound ratio report.
    Report(ReportArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Code distance floor.
    #[arg(long, default_value_t = 2)]
    ell: u32,
    /// Agreement cap.
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    /// Player count.
    #[arg(long, default_value_t = 2)]
    t: u32,
    /// Code backend.
    #[arg(long, value_enum, default_value_t = BackendArg::ReedSolomon)]
    backend: BackendArg,
}

impl ParamArgs {
    fn code(&self) -> Result<CodeParams> {
        let backend = match self.backend {
            BackendArg::ReedSolomon => Backend::ReedSolomon,
            BackendArg::ShiftTable => {
                Backend::ExplicitTable(cyclic_shift_table(self.ell + self.alpha))
            }
        };
        Ok(make_params(self.ell, self.alpha, backend, true)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    ReedSolomon,
    ShiftTable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Linear,
    Quadratic,
}

impl FamilyArg {
    fn variant(self) -> GraphVariant {
        match self {
            FamilyArg::Linear => GraphVariant::Linear,
            FamilyArg::Quadratic => GraphVariant::Quadratic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PromiseArg {
    Intersect,
    Disjoint,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Text,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Promise kind for generated instances.
    #[arg(long, value_enum, default_value_t = PromiseArg::Intersect)]
    promise: PromiseArg,
    /// Seed for all generated randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Density of extra scattered 1-bits in generated instances.
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    /// Common 1-position for intersecting instances (1-based); derived
    /// from the seed when omitted.
    #[arg(long)]
    common_index: Option<usize>,
    /// Read the instance from a JSON file instead of generating one.
    #[arg(long, conflicts_with_all = ["promise", "density", "common_index"])]
    instance: Option<PathBuf>,
}

impl InstanceArgs {
    fn load_or_generate(
        &self,
        params: &CodeParams,
        t: u32,
        family: FamilyArg,
    ) -> Result<DisjointnessInstance> {
        if let Some(path) = &self.instance {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading instance file {}", path.display()))?;
            let inst: DisjointnessInstance =
                serde_json::from_str(&text).context("parsing instance JSON")?;
            return Ok(inst);
        }
        let k = params.k();
        let (len, shape) = match family {
            FamilyArg::Linear => (k as usize, InstanceShape::Linear),
            FamilyArg::Quadratic => ((k * k) as usize, InstanceShape::Quadratic(k)),
        };
        Ok(match self.promise {
            PromiseArg::Intersect => {
                let common = self.common_index.unwrap_or_else(|| {
                    ChaCha8Rng::seed_from_u64(self.seed).gen_range(1..=len)
                });
                make_intersecting(t, len, shape, common, self.density, self.seed)?
            }
            PromiseArg::Disjoint => {
                make_pairwise_disjoint(t, len, shape, self.density, self.seed)?
            }
        })
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    family: FamilyArg,
    /// Expand node weights into unweighted 1-slots.
    #[arg(long)]
    unweighted: bool,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    CodeDistance,
    Properties,
    LinearClaims,
    QuadraticClaims,
    FamilyCondition,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    /// Sampled instances per side (and forced-inclusion spot checks).
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    family: FamilyArg,
    #[arg(long)]
    unweighted: bool,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    GatherSolve,
    FloodMax,
    ScriptedRandom,
    Silent,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    family: FamilyArg,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::GatherSolve)]
    algorithm: AlgorithmArg,
    /// Accept threshold for gather-solve; the family default when omitted.
    #[arg(long)]
    beta: Option<u64>,
    /// Round count for flood-max / scripted-random.
    #[arg(long, default_value_t = 8)]
    rounds: u32,
    /// Per-message bit budget; ceil(log2 |V|) when omitted.
    #[arg(long)]
    bits_per_message: Option<u32>,
    /// Cap on executed rounds; the algorithm's own budget when omitted.
    #[arg(long)]
    max_rounds: Option<u32>,
    /// Run the player-sliced executor instead of the plain one.
    #[arg(long)]
    multiparty: bool,
    /// Write the message log as JSON lines to this path.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    family: FamilyArg,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// Print only the round-bound ratio table.
    #[arg(long)]
    report_only: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    #[arg(long)]
    bits_per_message: Option<u32>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Restrict to one family; both when omitted.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    bits_per_message: Option<u32>,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, S>(args: I) -> Result<i32>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn config_line(command: &str, fields: &[(&str, String)]) {
    let mut line = format!("config: command={command}");
    for (key, value) in fields {
        let _ = write!(line, " {key}={value}");
    }
    let _ = write!(line, " guard={}", node_guard());
    eprintln!("{line}");
}

fn param_fields(p: &ParamArgs) -> Vec<(&'static str, String)> {
    vec![
        ("ell", p.ell.to_string()),
        ("alpha", p.alpha.to_string()),
        ("t", p.t.to_string()),
        (
            "backend",
            match p.backend {
                BackendArg::ReedSolomon => "reed-solomon".into(),
                BackendArg::ShiftTable => "shift-table".into(),
            },
        ),
    ]
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Linear => "linear",
        FamilyArg::Quadratic => "quadratic",
    }
}

fn suite_name(s: SuiteArg) -> &'static str {
    match s {
        SuiteArg::CodeDistance => "code-distance",
        SuiteArg::Properties => "properties",
        SuiteArg::LinearClaims => "linear-claims",
        SuiteArg::QuadraticClaims => "quadratic-claims",
        SuiteArg::FamilyCondition => "family-condition",
        SuiteArg::All => "all",
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn build_family_graph(
    params: &CodeParams,
    t: u32,
    family: FamilyArg,
    inst: &DisjointnessInstance,
) -> Result<LowerBoundGraph> {
    Ok(match family {
        FamilyArg::Linear => build_linear_instance(params, t, inst)?,
        FamilyArg::Quadratic => build_quadratic_instance(params, t, inst)?,
    })
}

fn cmd_build(args: BuildArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    fields.push(("family", family_name(args.family).into()));
    fields.push(("unweighted", args.unweighted.to_string()));
    fields.push(("seed", args.instance.seed.to_string()));
    config_line("build", &fields);

    let params = args.params.code()?;
    let inst = args
        .instance
        .load_or_generate(&params, args.params.t, args.family)?;
    let mut g = build_family_graph(&params, args.params.t, args.family, &inst)?;
    if args.unweighted {
        g = expand_unweighted(&g)?;
    }

    eprintln!(
        "graph: {} nodes, {} edges, {} cut edges, instance {}",
        g.node_count(),
        g.edge_count(),
        g.cut_size(),
        inst.digest()
    );
    let content = match args.format {
        FormatArg::Json => {
            let mut v = export::graph_json(&g);
            v["instance"] = serde_json::to_value(&inst)?;
            v["instance_digest"] = json!(inst.digest());
            v["seed"] = json!(args.instance.seed);
            serde_json::to_string_pretty(&v)?
        }
        FormatArg::Dot => export::graph_dot(&g),
        FormatArg::Text => format!(
            "params: {}\nvariant: {:?}\nnodes: {}\nedges: {}\ncut: {}\ninstance: {}",
            params.describe(),
            g.variant(),
            g.node_count(),
            g.edge_count(),
            g.cut_size(),
            inst.digest(),
        ),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

/// Pairs of instances differing in exactly one player's string, for the
/// locality check.
fn differing_pairs(
    t: u32,
    len: usize,
    shape: InstanceShape,
    per_player: usize,
    seed: u64,
) -> Result<Vec<(DisjointnessInstance, DisjointnessInstance)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for player in 0..t as usize {
        for _ in 0..per_player {
            let mut strings = Vec::with_capacity(t as usize);
            for _ in 0..t {
                let mut s = BitString::zeros(len);
                for pos in 0..len {
                    if rng.gen_bool(0.5) {
                        s.set(pos, true);
                    }
                }
                strings.push(s);
            }
            let base = DisjointnessInstance::new(shape, strings.clone())?;
            let mut changed = strings;
            let flip = rng.gen_range(0..len);
            let old = changed[player].get(flip);
            changed[player].set(flip, !old);
            let other = DisjointnessInstance::new(shape, changed)?;
            pairs.push((base, other));
        }
    }
    Ok(pairs)
}

fn sample_claim_instances(
    params: &CodeParams,
    t: u32,
    family: FamilyArg,
    per_side: usize,
    seed: u64,
) -> Result<Vec<DisjointnessInstance>> {
    let k = params.k();
    let (len, shape) = match family {
        FamilyArg::Linear => (k as usize, InstanceShape::Linear),
        FamilyArg::Quadratic => ((k * k) as usize, InstanceShape::Quadratic(k)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(2 * per_side);
    for _ in 0..per_side {
        let common = rng.gen_range(1..=len);
        let density = rng.gen_range(0.0..0.6);
        instances.push(make_intersecting(
            t,
            len,
            shape,
            common,
            density,
            rng.gen(),
        )?);
    }
    for _ in 0..per_side {
        let density = rng.gen_range(0.0..0.6);
        instances.push(make_pairwise_disjoint(t, len, shape, density, rng.gen())?);
    }
    Ok(instances)
}

fn code_distance_report(params: &CodeParams) -> Result<VerifyReport> {
    let measured = params.min_pairwise_distance()?;
    let record = CheckRecord::new(
        "code-distance",
        params.describe(),
        None,
        ">=",
        params.ell() as u64,
        measured as u64,
    );
    Ok(VerifyReport::new("code-distance", vec![record], Vec::new()))
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    fields.push(("suite", suite_name(args.suite).into()));
    fields.push(("samples", args.samples.to_string()));
    fields.push(("seed", args.seed.to_string()));
    config_line("verify", &fields);

    let params = args.params.code()?;
    let t = args.params.t;
    let mut reports: Vec<Value> = Vec::new();
    let mut all_pass = true;
    let mut push = |name: &str, pass: bool, value: Value, summary: String| {
        eprintln!(
            "suite {name}: {}{summary}",
            if pass { "pass" } else { "FAIL" }
        );
        all_pass &= pass;
        reports.push(value);
    };

    let want = |s: SuiteArg| args.suite == s || args.suite == SuiteArg::All;

    if want(SuiteArg::CodeDistance) {
        let report = code_distance_report(&params)?;
        push(
            "code-distance",
            report.pass,
            serde_json::to_value(&report)?,
            format!(
                " (min distance {})",
                report.records[0].measured
            ),
        );
    }
    if want(SuiteArg::Properties) {
        let g = build_linear_fixed(&params, t)?;
        let report = verify_properties(&g)?;
        push(
            "properties",
            report.pass,
            serde_json::to_value(&report)?,
            format!(" ({} checks)", report.records.len()),
        );
    }
    if want(SuiteArg::LinearClaims) {
        let instances =
            sample_claim_instances(&params, t, FamilyArg::Linear, args.samples, args.seed)?;
        let report = verify_linear_claims(&params, t, &instances, args.samples, args.seed)?;
        push(
            "linear-claims",
            report.pass,
            serde_json::to_value(&report)?,
            format!(" ({} checks)", report.records.len()),
        );
    }
    if want(SuiteArg::QuadraticClaims) {
        let instances =
            sample_claim_instances(&params, t, FamilyArg::Quadratic, args.samples, args.seed)?;
        let report = verify_quadratic_claims(&params, t, &instances, args.samples, args.seed)?;
        push(
            "quadratic-claims",
            report.pass,
            serde_json::to_value(&report)?,
            format!(" ({} checks)", report.records.len()),
        );
    }
    if want(SuiteArg::FamilyCondition) {
        let k = params.k();
        for family in [FamilyArg::Linear, FamilyArg::Quadratic] {
            let (len, shape) = match family {
                FamilyArg::Linear => (k as usize, InstanceShape::Linear),
                FamilyArg::Quadratic => ((k * k) as usize, InstanceShape::Quadratic(k)),
            };
            let pairs = differing_pairs(t, len, shape, args.samples, args.seed)?;
            let report = validate_family_condition1(&params, t, family.variant(), &pairs)?;
            push(
                &format!("family-condition[{}]", family_name(family)),
                report.pass,
                serde_json::to_value(&report)?,
                format!(" ({} pairs)", report.entries.len()),
            );
        }
    }

    let doc = serde_json::to_string_pretty(&Value::Array(reports))?;
    emit(&args.out, &doc)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    fields.push(("family", family_name(args.family).into()));
    fields.push(("seed", args.instance.seed.to_string()));
    config_line("solve", &fields);

    let params = args.params.code()?;
    let inst = args
        .instance
        .load_or_generate(&params, args.params.t, args.family)?;
    let mut g = build_family_graph(&params, args.params.t, args.family, &inst)?;
    if args.unweighted {
        g = expand_unweighted(&g)?;
    }
    let result = mwis_exact(&g, &[])?;
    let witness_names: Vec<String> = result
        .witness
        .iter()
        .map(|&v| export::node_name(&g, v))
        .collect();

    match args.format {
        FormatArg::Json => {
            let v = json!({
                "instance_digest": inst.digest(),
                "nodes": g.node_count(),
                "weight": result.weight,
                "witness": result.witness,
                "witness_names": witness_names,
                "explored": result.explored,
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        _ => {
            println!(
                "mwis weight {} on {} nodes (instance {})",
                result.weight,
                g.node_count(),
                inst.digest()
            );
            println!("witness: {}", witness_names.join(" "));
        }
    }
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    fields.push(("family", family_name(args.family).into()));
    fields.push(("seed", args.instance.seed.to_string()));
    fields.push(("multiparty", args.multiparty.to_string()));
    config_line("simulate", &fields);

    let params = args.params.code()?;
    let t = args.params.t;
    let inst = args.instance.load_or_generate(&params, t, args.family)?;
    let g = build_family_graph(&params, t, args.family, &inst)?;
    let n = g.node_count();
    let bits = args.bits_per_message.unwrap_or_else(|| default_bits(n));

    let alg: Box<dyn AlgorithmSpec> = match args.algorithm {
        AlgorithmArg::GatherSolve => {
            let beta = match args.beta {
                Some(b) => b,
                None => gap_threshold(&params, t, args.family.variant())?,
            };
            let gamma = gap_ratio(&params, t, args.family.variant())?;
            Box::new(gather_and_solve_algorithm(beta, gamma))
        }
        AlgorithmArg::FloodMax => Box::new(FloodMax {
            rounds: args.rounds,
        }),
        AlgorithmArg::ScriptedRandom => Box::new(ScriptedRandom {
            seed: args.instance.seed,
            rounds: args.rounds,
        }),
        AlgorithmArg::Silent => Box::new(Silent { value: 0 }),
    };
    let max_rounds = args.max_rounds.unwrap_or_else(|| alg.round_budget(n));

    let transcript: Transcript = if args.multiparty {
        multiparty_simulate(&g, alg.as_ref(), bits, max_rounds)?
    } else {
        run_congest(&g, alg.as_ref(), bits, max_rounds)?
    };

    if let Some(path) = &args.transcript {
        fs::write(path, transcript.messages_jsonl())
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("transcript: {} messages to {}", transcript.messages.len(), path.display());
    }
    println!("{}", serde_json::to_string_pretty(&transcript.summary_json())?);
    Ok(if transcript.completed { 0 } else { 1 })
}

fn report_table(params: &CodeParams, t: u32, families: &[FamilyArg], bits: Option<u32>) -> Result<(Vec<Value>, String)> {
    let mut rows = Vec::new();
    let mut table = String::from(
        "family     | len  | t*log2(t) | cut | log2(V) | ratio      | stated cut | discrepancy\n",
    );
    for &family in families {
        let inst = match family {
            FamilyArg::Linear => make_pairwise_disjoint(
                t,
                params.k() as usize,
                InstanceShape::Linear,
                0.0,
                0,
            )?,
            FamilyArg::Quadratic => make_pairwise_disjoint(
                t,
                (params.k() * params.k()) as usize,
                InstanceShape::Quadratic(params.k()),
                0.0,
                0,
            )?,
        };
        let g = build_family_graph(params, t, family, &inst)?;
        let bits = bits.unwrap_or_else(|| default_bits(g.node_count()));
        let report = lower_bound_report(params, t, &g, bits)?;
        let _ = writeln!(
            table,
            "{:<10} | {:<4} | {:<9.3} | {:<3} | {:<7.3} | {:<10.6} | {:<10.3} | {:+.3}",
            family_name(family),
            report.input_length,
            report.t_log2_t,
            report.cut_measured,
            report.log2_nodes,
            report.ratio,
            report.cut_stated,
            report.cut_discrepancy,
        );
        rows.push(serde_json::to_value(&report)?);
    }
    Ok((rows, table))
}

fn cmd_reduce(args: ReduceArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    fields.push(("family", family_name(args.family).into()));
    fields.push(("trials", args.trials.to_string()));
    fields.push(("seed", args.seed.to_string()));
    config_line("reduce", &fields);

    let params = args.params.code()?;
    let t = args.params.t;

    if args.report_only {
        let (rows, table) = report_table(&params, t, &[args.family], args.bits_per_message)?;
        eprint!("{table}");
        println!("{}", serde_json::to_string_pretty(&Value::Array(rows))?);
        return Ok(0);
    }

    let k = params.k();
    let (len, shape) = match args.family {
        FamilyArg::Linear => (k as usize, InstanceShape::Linear),
        FamilyArg::Quadratic => ((k * k) as usize, InstanceShape::Quadratic(k)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut outcomes = Vec::new();
    let mut matched = 0u32;
    for trial in 0..args.trials {
        let inst = if rng.gen_bool(0.5) {
            let common = rng.gen_range(1..=len);
            make_intersecting(t, len, shape, common, args.density, rng.gen())?
        } else {
            make_pairwise_disjoint(t, len, shape, args.density, rng.gen())?
        };
        let outcome = default_reduction(
            &params,
            t,
            &inst,
            args.family.variant(),
            args.bits_per_message,
        )?;
        matched += outcome.matches as u32;
        eprintln!(
            "trial {trial}: verdict {:?}, truth {:?}, {} rounds, {} blackboard bits{}",
            outcome.verdict,
            outcome.ground_truth,
            outcome.rounds,
            outcome.blackboard_bits,
            if outcome.matches { "" } else { "  << MISMATCH" },
        );
        outcomes.push(outcome);
    }
    eprintln!("matched {matched}/{} trials", args.trials);

    let (rows, table) = report_table(&params, t, &[args.family], args.bits_per_message)?;
    eprint!("{table}");
    let doc = json!({
        "trials": outcomes,
        "matched": matched,
        "total": args.trials,
        "report": rows,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if matched == args.trials { 0 } else { 1 })
}

fn cmd_report(args: ReportArgs) -> Result<i32> {
    let mut fields = param_fields(&args.params);
    if let Some(f) = args.family {
        fields.push(("family", family_name(f).into()));
    }
    config_line("report", &fields);

    let params = args.params.code()?;
    if args.params.t < 2 {
        bail!("the round-bound ratio needs t >= 2");
    }
    let families = match args.family {
        Some(f) => vec![f],
        None => vec![FamilyArg::Linear, FamilyArg::Quadratic],
    };
    let (rows, table) = report_table(&params, args.params.t, &families, args.bits_per_message)?;
    eprint!("{table}");
    println!("{}", serde_json::to_string_pretty(&Value::Array(rows))?);
    Ok(0)
}
