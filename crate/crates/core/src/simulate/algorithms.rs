//! Reference node programs for the simulator.
//!
//! [`GatherSolve`] is the decider used by the reduction: it elects the
//! maximum id as leader, builds a BFS tree, streams the full weighted
//! edge list to the leader in fixed-width records, solves MWIS locally,
//! and floods the verdict back. [`FloodMax`], [`ScriptedRandom`] and
//! [`Silent`] exercise the harness.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::oracle::{mwis_exact_within, node_guard, WeightedGraph};

use super::{
    decode_uint, default_bits, encode_uint, AlgorithmSpec, CommGraph, NodeCtx, NodeProgram,
    SimError,
};

fn push_uint(q: &mut VecDeque<bool>, value: u64, width: u32) {
    for i in 0..width {
        q.push_back(value >> (width - 1 - i) & 1 == 1);
    }
}

fn take_uint(q: &mut VecDeque<bool>, width: u32) -> u64 {
    let mut value = 0;
    for _ in 0..width {
        value = value << 1 | q.pop_front().expect("buffer underrun") as u64;
    }
    value
}

fn is_connected(g: &dyn CommGraph) -> bool {
    let n = g.node_count();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors_of(v) {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    count == n
}

/// Outputs a fixed value in round one and never sends anything.
pub struct Silent {
    pub value: u64,
}

impl AlgorithmSpec for Silent {
    fn name(&self) -> String {
        format!("silent({})", self.value)
    }

    fn round_budget(&self, _n: usize) -> u32 {
        1
    }

    fn instantiate(&self, _ctx: NodeCtx) -> Box<dyn NodeProgram> {
        Box::new(SilentNode { value: self.value })
    }
}

struct SilentNode {
    value: u64,
}

impl NodeProgram for SilentNode {
    fn send(&mut self, _round: u32) -> Vec<(usize, BitString)> {
        Vec::new()
    }

    fn receive(&mut self, _round: u32, _inbox: &[(usize, BitString)]) {}

    fn output(&self) -> Option<u64> {
        Some(self.value)
    }
}

/// Classic max-id flood: every node repeats the largest id it has seen
/// whenever that value improves, and outputs it after a fixed number of
/// rounds. On a graph of diameter `d`, `rounds >= d + 1` converges.
pub struct FloodMax {
    pub rounds: u32,
}

impl AlgorithmSpec for FloodMax {
    fn name(&self) -> String {
        format!("flood-max({} rounds)", self.rounds)
    }

    fn round_budget(&self, _n: usize) -> u32 {
        self.rounds
    }

    fn validate(&self, g: &dyn CommGraph, bits: u32) -> Result<(), SimError> {
        let need = default_bits(g.node_count());
        if self.rounds == 0 {
            return Err(SimError::Unsupported {
                algorithm: self.name(),
                reason: "needs at least one round".into(),
            });
        }
        if bits < need {
            return Err(SimError::Unsupported {
                algorithm: self.name(),
                reason: format!("ids need {need} bits per message, got {bits}"),
            });
        }
        Ok(())
    }

    fn instantiate(&self, ctx: NodeCtx) -> Box<dyn NodeProgram> {
        let width = default_bits(ctx.n);
        Box::new(FloodMaxNode {
            known: ctx.id as u64,
            ctx,
            rounds: self.rounds,
            width,
            dirty: true,
            finished: false,
        })
    }
}

struct FloodMaxNode {
    ctx: NodeCtx,
    rounds: u32,
    width: u32,
    known: u64,
    dirty: bool,
    finished: bool,
}

impl NodeProgram for FloodMaxNode {
    fn send(&mut self, round: u32) -> Vec<(usize, BitString)> {
        if round > self.rounds || !self.dirty {
            return Vec::new();
        }
        self.dirty = false;
        let payload = encode_uint(self.known, self.width);
        self.ctx
            .neighbors
            .iter()
            .map(|&u| (u, payload.clone()))
            .collect()
    }

    fn receive(&mut self, round: u32, inbox: &[(usize, BitString)]) {
        for (_, payload) in inbox {
            let v = decode_uint(payload);
            if v > self.known {
                self.known = v;
                self.dirty = true;
            }
        }
        if round >= self.rounds {
            self.finished = true;
        }
    }

    fn output(&self) -> Option<u64> {
        self.finished.then_some(self.known)
    }
}

/// Deterministic noise traffic driven by the per-node randomness tape:
/// each round every node flips a coin per neighbor and, on heads, sends a
/// random payload of random length. Outputs a hash of everything received,
/// so any delivery difference shows up in the outputs.
pub struct ScriptedRandom {
    pub seed: u64,
    pub rounds: u32,
}

impl AlgorithmSpec for ScriptedRandom {
    fn name(&self) -> String {
        format!("scripted-random(seed={}, rounds={})", self.seed, self.rounds)
    }

    fn round_budget(&self, _n: usize) -> u32 {
        self.rounds
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn instantiate(&self, ctx: NodeCtx) -> Box<dyn NodeProgram> {
        let rng = ChaCha8Rng::seed_from_u64(ctx.rng_seed);
        Box::new(ScriptedRandomNode {
            ctx,
            rounds: self.rounds,
            rng,
            acc: 0xcbf2_9ce4_8422_2325,
            finished: false,
        })
    }
}

struct ScriptedRandomNode {
    ctx: NodeCtx,
    rounds: u32,
    rng: ChaCha8Rng,
    acc: u64,
    finished: bool,
}

impl ScriptedRandomNode {
    fn mix(&mut self, byte: u8) {
        self.acc ^= byte as u64;
        self.acc = self.acc.wrapping_mul(0x0000_0100_0000_01b3);
    }
}

impl NodeProgram for ScriptedRandomNode {
    fn send(&mut self, round: u32) -> Vec<(usize, BitString)> {
        if round > self.rounds {
            return Vec::new();
        }
        let mut out = Vec::new();
        let neighbors = self.ctx.neighbors.clone();
        for u in neighbors {
            if self.rng.gen_bool(0.5) {
                let len = self.rng.gen_range(1..=self.ctx.bits_per_message as usize);
                let payload: Vec<bool> = (0..len).map(|_| self.rng.gen_bool(0.5)).collect();
                out.push((u, BitString::from_bools(&payload)));
            }
        }
        out
    }

    fn receive(&mut self, round: u32, inbox: &[(usize, BitString)]) {
        for (from, payload) in inbox {
            self.mix(*from as u8);
            self.mix((*from >> 8) as u8);
            for i in 0..payload.len() {
                self.mix(payload.get(i) as u8 + 1);
            }
        }
        if round >= self.rounds {
            self.finished = true;
        }
    }

    fn output(&self) -> Option<u64> {
        self.finished.then_some(self.acc)
    }
}

/// The reference gap decider: gather the whole weighted graph at the
/// maximum-id node, solve MWIS exactly there, and flood ACCEPT (1) when
/// the optimum reaches `beta`, REJECT (0) otherwise.
///
/// Phases, with `n` the node count and `W = ceil(log2 n)`:
///
/// 1. rounds `1..=n`: BFS distance flood from the leader; each node's
///    parent is the smallest-id neighbor one step closer to the leader;
/// 2. round `n + 1`: every non-leader sends one bit to its parent, so
///    every node learns its tree children;
/// 3. rounds `n + 2..`: convergecast. Records are framed as a 2-bit tag
///    (`00` node, `01` edge) followed by `W`-bit fields: node records
///    carry (id, weight, degree), edge records carry (u, v) with `u < v`,
///    emitted by `u`. Nodes stream their queue to their parent up to `B`
///    bits per round and forward only completed records, so frames never
///    interleave. The leader is done when it holds `n` node records and
///    half the degree sum in edge records; it then solves and floods the
///    2-bit verdict frame `1b` away from the tree's parent links.
///
/// `gamma` is a diagnostic gap ratio carried into reports; it does not
/// influence the decision.
pub struct GatherSolve {
    pub beta: u64,
    pub gamma: f64,
}

/// The decider used by the reduction at threshold `beta`.
pub fn gather_and_solve_algorithm(beta: u64, gamma: f64) -> GatherSolve {
    GatherSolve { beta, gamma }
}

impl GatherSolve {
    fn volume_bound(n: u64, w: u64) -> u64 {
        let node_bits = n * (2 + 3 * w);
        let edge_bits = n * (n - 1) / 2 * (2 + 2 * w);
        node_bits + edge_bits
    }
}

impl AlgorithmSpec for GatherSolve {
    fn name(&self) -> String {
        format!("gather-solve(beta={}, gamma={:.3})", self.beta, self.gamma)
    }

    fn round_budget(&self, n: usize) -> u32 {
        let w = default_bits(n) as u64;
        let n = n as u64;
        // Phase bounds: flood + claim, store-and-forward streaming, and
        // the verdict flood, with slack.
        (n + 2 + Self::volume_bound(n, w) + n + 16).min(u32::MAX as u64) as u32
    }

    fn validate(&self, g: &dyn CommGraph, bits: u32) -> Result<(), SimError> {
        let n = g.node_count();
        let unsupported = |reason: String| SimError::Unsupported {
            algorithm: self.name(),
            reason,
        };
        if n == 0 {
            return Err(unsupported("empty graph".into()));
        }
        let guard = node_guard();
        if n > guard {
            return Err(unsupported(format!(
                "the leader's local solve is capped at {guard} nodes, got {n}"
            )));
        }
        if n == 1 {
            // A lone leader solves locally and never transmits, so the
            // field-width checks below do not apply.
            return Ok(());
        }
        if bits < 2 {
            return Err(unsupported(
                "verdict frames need 2 bits per message".into(),
            ));
        }
        let w = default_bits(n);
        if bits < w {
            return Err(unsupported(format!(
                "distance announcements need {w} bits per message, got {bits}"
            )));
        }
        let cap = (1u64 << w) - 1;
        for v in 0..n {
            let weight = g.node_weight(v);
            if weight > cap {
                return Err(unsupported(format!(
                    "weight {weight} of node {v} does not fit a {w}-bit field"
                )));
            }
        }
        if !is_connected(g) {
            return Err(unsupported(
                "the graph is disconnected, so gathering cannot complete".into(),
            ));
        }
        Ok(())
    }

    fn instantiate(&self, ctx: NodeCtx) -> Box<dyn NodeProgram> {
        let n = ctx.n;
        let width = default_bits(n);
        let leader = n - 1;
        let mut node = GatherSolveNode {
            beta: self.beta,
            width,
            leader,
            dist: None,
            announce: false,
            parent: None,
            children: BTreeSet::new(),
            outbox: VecDeque::new(),
            inbufs: BTreeMap::new(),
            node_records: BTreeMap::new(),
            edge_records: BTreeSet::new(),
            verdict: None,
            verdict_announced: false,
            ctx,
        };
        if node.ctx.id == leader {
            node.dist = Some(0);
            node.announce = true;
            node.node_records.insert(
                node.ctx.id,
                (node.ctx.weight, node.ctx.neighbors.len()),
            );
            // The leader is the maximum id, so it owns no edge records;
            // a 1-node graph is already fully gathered.
            node.try_finish();
        }
        Box::new(node)
    }
}

struct GatherSolveNode {
    ctx: NodeCtx,
    beta: u64,
    width: u32,
    leader: usize,
    dist: Option<u64>,
    announce: bool,
    parent: Option<usize>,
    children: BTreeSet<usize>,
    /// Bits queued for the parent: own records first, then forwarded ones.
    outbox: VecDeque<bool>,
    /// Per-child reassembly buffers; only complete records move on.
    inbufs: BTreeMap<usize, VecDeque<bool>>,
    node_records: BTreeMap<usize, (u64, usize)>,
    edge_records: BTreeSet<(usize, usize)>,
    verdict: Option<bool>,
    verdict_announced: bool,
}

impl GatherSolveNode {
    fn is_leader(&self) -> bool {
        self.ctx.id == self.leader
    }

    fn phase_a_end(&self) -> u32 {
        self.ctx.n as u32
    }

    /// Queues this node's own records: its node record, then one edge
    /// record per higher-id neighbor.
    fn queue_own_records(&mut self) {
        let w = self.width;
        push_uint(&mut self.outbox, 0, 2);
        push_uint(&mut self.outbox, self.ctx.id as u64, w);
        push_uint(&mut self.outbox, self.ctx.weight, w);
        push_uint(&mut self.outbox, self.ctx.neighbors.len() as u64, w);
        let higher: Vec<usize> = self
            .ctx
            .neighbors
            .iter()
            .copied()
            .filter(|&u| u > self.ctx.id)
            .collect();
        for u in higher {
            push_uint(&mut self.outbox, 1, 2);
            push_uint(&mut self.outbox, self.ctx.id as u64, w);
            push_uint(&mut self.outbox, u as u64, w);
        }
    }

    /// Moves complete records out of one child's buffer: the leader files
    /// them, everyone else forwards them verbatim.
    fn drain_child(&mut self, child: usize) {
        let w = self.width as usize;
        loop {
            let buf = self.inbufs.entry(child).or_default();
            if buf.len() < 2 {
                return;
            }
            debug_assert!(!buf[0], "unknown record tag");
            let is_edge = buf[1];
            let need = 2 + if is_edge { 2 * w } else { 3 * w };
            if buf.len() < need {
                return;
            }
            if self.is_leader() {
                let buf = self.inbufs.get_mut(&child).expect("buffer exists");
                take_uint(buf, 2);
                if is_edge {
                    let u = take_uint(buf, w as u32) as usize;
                    let v = take_uint(buf, w as u32) as usize;
                    debug_assert!(u < v && v < self.ctx.n, "bad edge record");
                    self.edge_records.insert((u, v));
                } else {
                    let id = take_uint(buf, w as u32) as usize;
                    let weight = take_uint(buf, w as u32);
                    let degree = take_uint(buf, w as u32) as usize;
                    debug_assert!(id < self.ctx.n, "bad node record");
                    self.node_records.insert(id, (weight, degree));
                }
            } else {
                let buf = self.inbufs.get_mut(&child).expect("buffer exists");
                for _ in 0..need {
                    let bit = buf.pop_front().expect("sized above");
                    self.outbox.push_back(bit);
                }
            }
        }
    }

    /// Leader only: solve once every record is in.
    fn try_finish(&mut self) {
        if self.verdict.is_some() || self.node_records.len() != self.ctx.n {
            return;
        }
        let degree_sum: usize = self.node_records.values().map(|&(_, d)| d).sum();
        if !degree_sum.is_multiple_of(2) || self.edge_records.len() != degree_sum / 2 {
            return;
        }
        let mut weights = vec![0u64; self.ctx.n];
        for (&id, &(weight, _)) in &self.node_records {
            weights[id] = weight;
        }
        let mut local = WeightedGraph::new(weights);
        for &(u, v) in &self.edge_records {
            local.add_edge(u, v);
        }
        let result = mwis_exact_within(&local, None, &[], node_guard())
            .expect("validated node count at startup");
        self.verdict = Some(result.weight >= self.beta);
    }

    fn verdict_frame(accept: bool) -> BitString {
        BitString::from_bools(&[true, accept])
    }
}

impl NodeProgram for GatherSolveNode {
    fn send(&mut self, round: u32) -> Vec<(usize, BitString)> {
        let mut out = Vec::new();
        if round <= self.phase_a_end() {
            if self.announce {
                self.announce = false;
                let dist = self.dist.expect("announce implies distance");
                let payload = encode_uint(dist, self.width);
                out.extend(self.ctx.neighbors.iter().map(|&u| (u, payload.clone())));
            }
            return out;
        }
        if round == self.phase_a_end() + 1 {
            if let Some(p) = self.parent {
                out.push((p, BitString::from_bools(&[true])));
            }
            return out;
        }
        // Convergecast stream to the parent.
        if let Some(p) = self.parent {
            if !self.outbox.is_empty() {
                let take = self.outbox.len().min(self.ctx.bits_per_message as usize);
                let bits: Vec<bool> = (0..take)
                    .map(|_| self.outbox.pop_front().expect("sized above"))
                    .collect();
                out.push((p, BitString::from_bools(&bits)));
            }
        }
        // Verdict flood away from the parent link.
        if let Some(v) = self.verdict {
            if !self.verdict_announced {
                self.verdict_announced = true;
                for &u in &self.ctx.neighbors {
                    if Some(u) != self.parent {
                        out.push((u, Self::verdict_frame(v)));
                    }
                }
            }
        }
        out
    }

    fn receive(&mut self, round: u32, inbox: &[(usize, BitString)]) {
        if round <= self.phase_a_end() {
            if self.dist.is_none() && !inbox.is_empty() {
                // All announcements heard first arrive in the same round
                // and carry the same distance; pick the smallest sender.
                let d = decode_uint(&inbox[0].1);
                self.dist = Some(d + 1);
                self.parent = Some(inbox[0].0);
                self.announce = true;
            }
            return;
        }
        if round == self.phase_a_end() + 1 {
            self.children = inbox.iter().map(|&(from, _)| from).collect();
            if !self.is_leader() {
                self.queue_own_records();
            }
            return;
        }
        for (from, payload) in inbox {
            if self.children.contains(from) {
                let buf = self.inbufs.entry(*from).or_default();
                for i in 0..payload.len() {
                    buf.push_back(payload.get(i));
                }
                self.drain_child(*from);
            } else {
                debug_assert!(payload.len() == 2 && payload.get(0), "bad verdict frame");
                if self.verdict.is_none() {
                    self.verdict = Some(payload.get(1));
                }
            }
        }
        if self.is_leader() {
            self.try_finish();
        }
    }

    fn output(&self) -> Option<u64> {
        self.verdict.map(|v| v as u64)
    }
}
