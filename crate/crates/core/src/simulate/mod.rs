//! Synchronous CONGEST simulator and the t-party blackboard harness.
//!
//! [`run_congest`] executes an algorithm in lock-step rounds: every node's
//! sends are computed from pre-round state, then all messages are
//! delivered, then outputs are polled. [`multiparty_simulate`] runs the
//! same algorithm with the node set sliced by player: messages between two
//! nodes of one player stay in that player's inbox, while messages whose
//! endpoints belong to different players are posted to a shared blackboard
//! that every player reads. Only blackboard traffic is charged, bit for
//! bit, to `blackboard_bits`.
//!
//! Reference node programs live in [`algorithms`]; the end-to-end
//! disjointness reduction and the round-bound report live in [`reduction`].

pub mod algorithms;
pub mod reduction;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bits::BitString;
use crate::construct::{ConstructError, LowerBoundGraph};
use crate::instances::InstanceError;
use crate::oracle::{MwisGraph, OracleError, WeightedGraph};

pub use algorithms::{gather_and_solve_algorithm, FloodMax, GatherSolve, ScriptedRandom, Silent};
pub use reduction::{
    default_reduction, gap_ratio, gap_threshold, lower_bound_report, reduction_protocol,
    LowerBoundReport, ReductionOutcome, Verdict,
};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("round {round}: node {from} sent {len} bits to {to}, over the {limit}-bit budget")]
    MessageTooLong {
        round: u32,
        from: usize,
        to: usize,
        len: usize,
        limit: u32,
    },
    #[error("round {round}: node {from} addressed {to}, which is not a neighbor")]
    NotANeighbor { round: u32, from: usize, to: usize },
    #[error("round {round}: node {from} sent two messages to {to}")]
    DuplicateTarget { round: u32, from: usize, to: usize },
    #[error("bits per message must be at least 1")]
    ZeroBits,
    #[error("round budget must be at least 1")]
    ZeroRounds,
    #[error("{algorithm} cannot run on this input: {reason}")]
    Unsupported { algorithm: String, reason: String },
    #[error("the instance violates the promise, so the reduction verdict is undefined")]
    PromiseViolated,
    #[error("the algorithm did not produce all outputs within {budget} rounds")]
    NonTermination { budget: u32 },
    #[error("nodes disagree on the verdict ({accepts} accept, {rejects} reject)")]
    VerdictSplit { accepts: usize, rejects: usize },
    #[error("the round-bound ratio is undefined here: {reason}")]
    RatioUndefined { reason: String },
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A graph the simulator can run on: solver view plus a player partition.
///
/// `player_of` drives the blackboard accounting; a graph whose nodes all
/// belong to one player has no cut and therefore free communication.
pub trait CommGraph: MwisGraph {
    fn player_of(&self, v: usize) -> u32;
}

impl CommGraph for LowerBoundGraph {
    fn player_of(&self, v: usize) -> u32 {
        self.player(v)
    }
}

impl CommGraph for WeightedGraph {
    fn player_of(&self, _v: usize) -> u32 {
        0
    }
}

/// Immutable per-node facts handed to a program at instantiation.
#[derive(Debug, Clone)]
pub struct NodeCtx {
    pub id: usize,
    pub weight: u64,
    /// Sorted, deduplicated neighbor ids.
    pub neighbors: Vec<usize>,
    /// Global node count; CONGEST nodes know `n`.
    pub n: usize,
    pub bits_per_message: u32,
    /// Per-node randomness tape seed, derived from the algorithm seed.
    pub rng_seed: u64,
}

/// One node's state machine. Hooks are called in lock-step: all `send`s of
/// a round see only pre-round state, then every node `receive`s that
/// round's messages, then `output` is polled.
pub trait NodeProgram {
    /// Messages for this round as `(neighbor, payload)` pairs. Each payload
    /// must fit in `bits_per_message` bits and each neighbor may be
    /// addressed at most once.
    fn send(&mut self, round: u32) -> Vec<(usize, BitString)>;
    /// This round's inbox, sorted by sender id. Called every round, with an
    /// empty slice when nothing arrived.
    fn receive(&mut self, round: u32, inbox: &[(usize, BitString)]);
    /// The node's decision once it has terminated, `None` while running.
    fn output(&self) -> Option<u64>;
}

/// An algorithm: a recipe for node programs plus a declared round budget.
pub trait AlgorithmSpec {
    fn name(&self) -> String;
    /// Rounds within which the algorithm promises all outputs on an
    /// `n`-node graph.
    fn round_budget(&self, n: usize) -> u32;
    /// Base seed for the per-node randomness tapes.
    fn seed(&self) -> u64 {
        0
    }
    /// Checks the algorithm's own preconditions against a concrete input.
    fn validate(&self, g: &dyn CommGraph, bits: u32) -> Result<(), SimError> {
        let _ = (g, bits);
        Ok(())
    }
    fn instantiate(&self, ctx: NodeCtx) -> Box<dyn NodeProgram>;
}

/// Default per-message budget: `ceil(log2 n)` bits, at least 1.
pub fn default_bits(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        (n as u64 - 1).ilog2() + 1
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-node tape seed.
pub fn derive_node_seed(base: u64, node: usize) -> u64 {
    splitmix64(base ^ splitmix64(node as u64 + 1))
}

/// Packs `value` into `width` bits, most significant first.
///
/// Panics if the value does not fit.
pub fn encode_uint(value: u64, width: u32) -> BitString {
    assert!(width <= 64, "field width {width} too large");
    assert!(
        width == 64 || value < 1u64 << width,
        "value {value} does not fit in {width} bits"
    );
    let mut out = BitString::zeros(width as usize);
    for i in 0..width {
        if value >> (width - 1 - i) & 1 == 1 {
            out.set(i as usize, true);
        }
    }
    out
}

/// Inverse of [`encode_uint`]; the whole payload is the field.
pub fn decode_uint(bits: &BitString) -> u64 {
    assert!(bits.len() <= 64, "field too wide to decode");
    let mut value = 0u64;
    for i in 0..bits.len() {
        value = value << 1 | bits.get(i) as u64;
    }
    value
}

/// One logged message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MessageRecord {
    pub round: u32,
    pub from: usize,
    pub to: usize,
    /// Payload as a 0/1 literal; its length is the charged bit count.
    pub bits: String,
    pub on_cut: bool,
}

/// Full round-by-round log of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub algorithm: String,
    pub bits_per_message: u32,
    pub rounds_executed: u32,
    /// True when every node produced an output within the budget.
    pub completed: bool,
    /// Total payload bits of messages crossing the player partition.
    pub blackboard_bits: u64,
    pub messages: Vec<MessageRecord>,
    pub node_outputs: BTreeMap<usize, u64>,
}

impl Transcript {
    /// Recomputes the blackboard total from the log; equals
    /// `blackboard_bits` by construction and is asserted in tests.
    pub fn cut_message_bits(&self) -> u64 {
        self.messages
            .iter()
            .filter(|m| m.on_cut)
            .map(|m| m.bits.len() as u64)
            .sum()
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "algorithm": self.algorithm,
            "rounds": self.rounds_executed,
            "completed": self.completed,
            "blackboard_bits": self.blackboard_bits,
            "messages": self.messages.len(),
            "outputs": self.node_outputs,
        })
    }

    /// One JSON object per message, newline separated.
    pub fn messages_jsonl(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            out.push_str(&serde_json::to_string(m).expect("message serializes"));
            out.push('\n');
        }
        out
    }
}

struct Runtime {
    programs: Vec<Box<dyn NodeProgram>>,
    neighbor_sets: Vec<BTreeSet<usize>>,
    outputs: Vec<Option<u64>>,
}

impl Runtime {
    fn build(g: &dyn CommGraph, alg: &dyn AlgorithmSpec, bits: u32) -> Runtime {
        let n = g.node_count();
        let base = alg.seed();
        let mut programs = Vec::with_capacity(n);
        let mut neighbor_sets = Vec::with_capacity(n);
        for v in 0..n {
            let mut neighbors = g.neighbors_of(v);
            neighbors.sort_unstable();
            neighbors.dedup();
            neighbor_sets.push(neighbors.iter().copied().collect());
            programs.push(alg.instantiate(NodeCtx {
                id: v,
                weight: g.node_weight(v),
                neighbors,
                n,
                bits_per_message: bits,
                rng_seed: derive_node_seed(base, v),
            }));
        }
        Runtime {
            programs,
            neighbor_sets,
            outputs: vec![None; n],
        }
    }

    /// Collects and validates one node's sends for a round.
    fn sends(
        &mut self,
        v: usize,
        round: u32,
        bits: u32,
    ) -> Result<Vec<(usize, BitString)>, SimError> {
        let raw = self.programs[v].send(round);
        let mut seen = BTreeSet::new();
        for &(to, ref payload) in &raw {
            if !self.neighbor_sets[v].contains(&to) {
                return Err(SimError::NotANeighbor { round, from: v, to });
            }
            if !seen.insert(to) {
                return Err(SimError::DuplicateTarget { round, from: v, to });
            }
            if payload.len() > bits as usize {
                return Err(SimError::MessageTooLong {
                    round,
                    from: v,
                    to,
                    len: payload.len(),
                    limit: bits,
                });
            }
        }
        let mut out = raw;
        out.sort_by_key(|&(to, _)| to);
        Ok(out)
    }

    fn poll_outputs(&mut self) -> bool {
        let mut all = true;
        for (v, slot) in self.outputs.iter_mut().enumerate() {
            if slot.is_none() {
                *slot = self.programs[v].output();
            }
            all &= slot.is_some();
        }
        all
    }

    fn output_map(&self) -> BTreeMap<usize, u64> {
        self.outputs
            .iter()
            .enumerate()
            .filter_map(|(v, o)| o.map(|d| (v, d)))
            .collect()
    }
}

fn check_run_args(bits: u32, max_rounds: u32) -> Result<(), SimError> {
    if bits == 0 {
        return Err(SimError::ZeroBits);
    }
    if max_rounds == 0 {
        return Err(SimError::ZeroRounds);
    }
    Ok(())
}

/// Runs the algorithm round-by-round on the whole graph.
///
/// Halts as soon as every node has output, or after `max_rounds` rounds;
/// exhausting the budget is reported via `completed = false`, not an
/// error. Deterministic given `(g, alg, bits)`.
pub fn run_congest(
    g: &dyn CommGraph,
    alg: &dyn AlgorithmSpec,
    bits: u32,
    max_rounds: u32,
) -> Result<Transcript, SimError> {
    check_run_args(bits, max_rounds)?;
    alg.validate(g, bits)?;
    let n = g.node_count();
    let mut rt = Runtime::build(g, alg, bits);
    let mut transcript = Transcript {
        algorithm: alg.name(),
        bits_per_message: bits,
        rounds_executed: 0,
        completed: false,
        blackboard_bits: 0,
        messages: Vec::new(),
        node_outputs: BTreeMap::new(),
    };

    for round in 1..=max_rounds {
        let mut outgoing: Vec<(usize, usize, BitString)> = Vec::new();
        for v in 0..n {
            for (to, payload) in rt.sends(v, round, bits)? {
                outgoing.push((v, to, payload));
            }
        }

        let mut inboxes: Vec<Vec<(usize, BitString)>> = vec![Vec::new(); n];
        for (from, to, payload) in outgoing {
            let on_cut = g.player_of(from) != g.player_of(to);
            if on_cut {
                transcript.blackboard_bits += payload.len() as u64;
            }
            transcript.messages.push(MessageRecord {
                round,
                from,
                to,
                bits: payload.to_string01(),
                on_cut,
            });
            inboxes[to].push((from, payload));
        }
        for (program, inbox) in rt.programs.iter_mut().zip(&inboxes) {
            program.receive(round, inbox);
        }

        transcript.rounds_executed = round;
        if rt.poll_outputs() {
            transcript.completed = true;
            break;
        }
    }

    transcript.node_outputs = rt.output_map();
    Ok(transcript)
}

/// Runs the same lock-step rounds with execution sliced by player.
///
/// Each player advances only its own nodes. A message between two nodes of
/// one player goes to that player's private inbox; a message whose
/// endpoints belong to different players is posted to the shared
/// blackboard, where the addressee's player picks it up, and its payload
/// length is charged to `blackboard_bits`. Node outputs match
/// [`run_congest`] exactly; internal traffic is never charged.
pub fn multiparty_simulate(
    g: &dyn CommGraph,
    alg: &dyn AlgorithmSpec,
    bits: u32,
    max_rounds: u32,
) -> Result<Transcript, SimError> {
    check_run_args(bits, max_rounds)?;
    alg.validate(g, bits)?;
    let n = g.node_count();
    let players: Vec<u32> = (0..n).map(|v| g.player_of(v)).collect();
    let mut slices: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, &player) in players.iter().enumerate() {
        slices.entry(player).or_default().push(v);
    }

    let mut rt = Runtime::build(g, alg, bits);
    let mut transcript = Transcript {
        algorithm: alg.name(),
        bits_per_message: bits,
        rounds_executed: 0,
        completed: false,
        blackboard_bits: 0,
        messages: Vec::new(),
        node_outputs: BTreeMap::new(),
    };

    for round in 1..=max_rounds {
        // Each player simulates its nodes' send hooks; traffic splits into
        // per-player internal queues and the shared blackboard.
        let mut internal: BTreeMap<u32, Vec<(usize, usize, BitString)>> = BTreeMap::new();
        let mut blackboard: Vec<(usize, usize, BitString)> = Vec::new();
        for (&p, nodes) in &slices {
            for &v in nodes {
                for (to, payload) in rt.sends(v, round, bits)? {
                    if players[to] == p {
                        internal.entry(p).or_default().push((v, to, payload));
                    } else {
                        blackboard.push((v, to, payload));
                    }
                }
            }
        }
        for (_, _, payload) in &blackboard {
            transcript.blackboard_bits += payload.len() as u64;
        }

        // Delivery: players drain their internal queues and read the
        // blackboard for messages addressed to their nodes.
        let mut inboxes: Vec<Vec<(usize, BitString)>> = vec![Vec::new(); n];
        let mut log: Vec<MessageRecord> = Vec::new();
        for (_, msgs) in internal {
            for (from, to, payload) in msgs {
                log.push(MessageRecord {
                    round,
                    from,
                    to,
                    bits: payload.to_string01(),
                    on_cut: false,
                });
                inboxes[to].push((from, payload));
            }
        }
        for (from, to, payload) in blackboard {
            log.push(MessageRecord {
                round,
                from,
                to,
                bits: payload.to_string01(),
                on_cut: true,
            });
            inboxes[to].push((from, payload));
        }
        log.sort_by_key(|m| (m.from, m.to));
        transcript.messages.extend(log);
        for inbox in &mut inboxes {
            inbox.sort_by_key(|&(from, _)| from);
        }
        for nodes in slices.values() {
            for &v in nodes {
                rt.programs[v].receive(round, &inboxes[v]);
            }
        }

        transcript.rounds_executed = round;
        if rt.poll_outputs() {
            transcript.completed = true;
            break;
        }
    }

    transcript.node_outputs = rt.output_map();
    Ok(transcript)
}
