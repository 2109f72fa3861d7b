//! Gadget graph constructions.
//!
//! The base graph `H` holds a clique `A` of `k` message nodes `v_m` plus the
//! code gadget: `q = ell+alpha` cliques `C_1..C_q`, each of size `q`, with
//! node `sigma_(h,r)` the r-th member of `C_h`. The codeword of `m` selects
//! one node per clique (`Code_m`), and `v_m` is wired to every code node
//! outside `Code_m`.
//!
//! The fixed t-player graph `G` is `t` copies of `H` where, for each pair of
//! players and each `h`, the copies of `C_h` are joined by a complete
//! bipartite graph minus the identity matching. The linear family applies a
//! player input as node weights (`w(v^i_m) = ell` iff bit `m` is set); the
//! quadratic family doubles `G` (copies `b = 1, 2`), gives every clique node
//! weight `ell`, and applies inputs as edges `v^(i,1)_m1 - v^(i,2)_m2` for
//! every 0-bit `(m1, m2)`. The unweighted expansion replaces each weight-w
//! node by an independent set of `w` interchangeable unit-weight nodes.

pub mod export;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::codegadget::{CodeError, CodeParams};
use crate::instances::{unpair_index, DisjointnessInstance, InstanceShape};

/// Hard cap on constructed graph size; well above anything the exact solver
/// accepts, it only guards against runaway parameters.
pub const MAX_NODES: u64 = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("player count must be >= 1, got {0}")]
    NoPlayers(u32),
    #[error("construction would have {nodes} nodes, cap is {cap}")]
    TooLarge { nodes: u64, cap: u64 },
    #[error("instance shape must be {want}")]
    WrongShape { want: &'static str },
    #[error("instance has t = {got}, builder called with t = {want}")]
    WrongPlayerCount { want: u32, got: u32 },
    #[error("instance length {got} != required {want}")]
    WrongLength { want: u64, got: usize },
    #[error("instance k = {inst_k} != params k = {params_k}")]
    KMismatch { params_k: u64, inst_k: u64 },
    #[error("graph is already unweighted-expanded")]
    AlreadyExpanded,
    #[error("instance pair {pair}: {reason}")]
    BadPair { pair: usize, reason: String },
}

/// Structural identity of a node, independent of instance overlays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeId {
    /// `v^(i,b)_m`: member `m` of the message clique `A^(i,b)`.
    Clique { player: u32, copy: u8, m: u32 },
    /// `sigma^(i,b)_(h,r)`: member `r` of gadget clique `C^(i,b)_h`.
    Code { player: u32, copy: u8, h: u32, r: u32 },
}

impl NodeId {
    pub fn clique(player: u32, copy: u8, m: u32) -> NodeId {
        NodeId::Clique { player, copy, m }
    }

    pub fn code(player: u32, copy: u8, h: u32, r: u32) -> NodeId {
        NodeId::Code { player, copy, h, r }
    }

    pub fn player(&self) -> u32 {
        match *self {
            NodeId::Clique { player, .. } | NodeId::Code { player, .. } => player,
        }
    }

    pub fn copy(&self) -> u8 {
        match *self {
            NodeId::Clique { copy, .. } | NodeId::Code { copy, .. } => copy,
        }
    }

    /// Dense-id sort order: (player, copy, clique-before-code, indices).
    fn sort_key(&self) -> (u32, u8, u8, u32, u32) {
        match *self {
            NodeId::Clique { player, copy, m } => (player, copy, 0, m, 0),
            NodeId::Code { player, copy, h, r } => (player, copy, 1, h, r),
        }
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A concrete node: structural id plus expansion slot (0 except in
/// unweighted-expanded graphs, where a weight-w source node yields slots
/// `0..w`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeLabel {
    pub id: NodeId,
    pub slot: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphVariant {
    Linear,
    Quadratic,
    UnweightedExpanded,
}

/// Instance-independent part of a graph, shared between overlays.
#[derive(Debug)]
struct Topology {
    labels: Vec<NodeLabel>,
    index: BTreeMap<NodeLabel, usize>,
    player: Vec<u32>,
    adj: Vec<Vec<usize>>,
    /// Fixed edges, `u < v`, lexicographically sorted.
    edges: Vec<(usize, usize)>,
    /// Fixed edges whose endpoints lie with distinct players.
    cut: Vec<(usize, usize)>,
    /// Known clique cover of the node set (the A- and C_h-cliques); empty
    /// for expanded graphs.
    cliques: Vec<Vec<usize>>,
}

impl Topology {
    fn from_parts(
        labels: Vec<NodeLabel>,
        edge_set: BTreeSet<(usize, usize)>,
        cliques: Vec<Vec<usize>>,
    ) -> Topology {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect::<BTreeMap<_, _>>();
        debug_assert_eq!(index.len(), labels.len(), "duplicate node labels");
        let player: Vec<u32> = labels.iter().map(|l| l.id.player()).collect();
        let mut adj = vec![Vec::new(); labels.len()];
        for &(u, v) in &edge_set {
            debug_assert!(u < v);
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let cut = edges
            .iter()
            .copied()
            .filter(|&(u, v)| player[u] != player[v])
            .collect();
        Topology {
            labels,
            index,
            player,
            adj,
            edges,
            cut,
            cliques,
        }
    }
}

/// A constructed graph: shared fixed topology plus the per-instance overlay
/// (weights for the linear family, extra intra-player edges for the
/// quadratic family). Immutable; cheap to clone.
#[derive(Debug, Clone)]
pub struct LowerBoundGraph {
    params: CodeParams,
    t: u32,
    variant: GraphVariant,
    topo: Arc<Topology>,
    weights: Vec<u64>,
    input_adj: Vec<Vec<usize>>,
    input_edges: Vec<(usize, usize)>,
}

impl LowerBoundGraph {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn variant(&self) -> GraphVariant {
        self.variant
    }

    pub fn node_count(&self) -> usize {
        self.topo.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.topo.edges.len() + self.input_edges.len()
    }

    pub fn label(&self, v: usize) -> NodeLabel {
        self.topo.labels[v]
    }

    pub fn player(&self, v: usize) -> u32 {
        self.topo.player[v]
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.topo.adj[v].len() + self.input_adj[v].len()
    }

    /// Neighbors of `v` over fixed and input edges (ascending).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = self.topo.adj[v].clone();
        out.extend(&self.input_adj[v]);
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.topo.adj[u].binary_search(&v).is_ok()
            || self.input_adj[u].binary_search(&v).is_ok()
    }

    /// Every edge, fixed and input, `u < v`, sorted.
    pub fn all_edges(&self) -> Vec<(usize, usize)> {
        let mut out = self.topo.edges.clone();
        out.extend(&self.input_edges);
        out.sort_unstable();
        out
    }

    /// Input-edge overlay (quadratic family only; empty otherwise).
    pub fn input_edges(&self) -> &[(usize, usize)] {
        &self.input_edges
    }

    /// Edges joining distinct players, sorted by endpoint ids. Input edges
    /// never cross players, so this is a property of the fixed topology.
    pub fn cut_edges(&self) -> &[(usize, usize)] {
        &self.topo.cut
    }

    pub fn cut_size(&self) -> usize {
        self.topo.cut.len()
    }

    /// Known clique cover (A-cliques and C_h-cliques); empty for expanded
    /// graphs.
    pub fn clique_cover(&self) -> &[Vec<usize>] {
        &self.topo.cliques
    }

    /// Dense id of an unexpanded node.
    pub fn node_index(&self, id: NodeId) -> Option<usize> {
        self.label_index(NodeLabel { id, slot: 0 })
    }

    pub fn label_index(&self, label: NodeLabel) -> Option<usize> {
        self.topo.index.get(&label).copied()
    }

    /// Dense ids of player `i`'s nodes (ascending; contiguous by
    /// construction order).
    pub fn player_nodes(&self, i: u32) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.topo.player[v] == i)
            .collect()
    }

    /// Dense ids of `Code^(i,b)_m`: the codeword-of-`m` selection, one node
    /// per gadget clique.
    pub fn code_selection(&self, player: u32, copy: u8, m: u64) -> Result<Vec<usize>, ConstructError> {
        let word = self.params.encode(m)?;
        Ok((1..=self.params.sigma_size())
            .map(|h| {
                self.node_index(NodeId::code(player, copy, h, word.symbol(h)))
                    .expect("code node exists")
            })
            .collect())
    }
}

/// Per-(player, copy) node id block in construction order.
fn copy_labels(params: &CodeParams, player: u32, copy: u8) -> Vec<NodeLabel> {
    let q = params.sigma_size();
    let k = params.k() as u32;
    let mut out = Vec::with_capacity((k + q * q) as usize);
    for m in 1..=k {
        out.push(NodeLabel {
            id: NodeId::clique(player, copy, m),
            slot: 0,
        });
    }
    for h in 1..=q {
        for r in 1..=q {
            out.push(NodeLabel {
                id: NodeId::code(player, copy, h, r),
                slot: 0,
            });
        }
    }
    out
}

/// Shared topology for `t` players with the given copy list (`[1]` linear,
/// `[1, 2]` quadratic).
fn build_topology(
    params: &CodeParams,
    t: u32,
    copies: &[u8],
) -> Result<Topology, ConstructError> {
    if t == 0 {
        return Err(ConstructError::NoPlayers(t));
    }
    let q = params.sigma_size();
    let k = params.k();
    let nodes = t as u64 * copies.len() as u64 * (k + (q as u64) * (q as u64));
    if nodes > MAX_NODES {
        return Err(ConstructError::TooLarge {
            nodes,
            cap: MAX_NODES,
        });
    }

    let mut labels = Vec::with_capacity(nodes as usize);
    for i in 1..=t {
        for &b in copies {
            labels.extend(copy_labels(params, i, b));
        }
    }
    let index: BTreeMap<NodeLabel, usize> = labels
        .iter()
        .enumerate()
        .map(|(idx, &l)| (l, idx))
        .collect();
    let at = |id: NodeId| index[&NodeLabel { id, slot: 0 }];

    let words: Vec<_> = (1..=k)
        .map(|m| params.encode(m))
        .collect::<Result<_, _>>()?;

    let mut edges = BTreeSet::new();
    let mut add = |a: usize, b: usize| {
        debug_assert_ne!(a, b);
        edges.insert((a.min(b), a.max(b)));
    };

    let mut cliques = Vec::new();
    for i in 1..=t {
        for &b in copies {
            // A^(i,b) is a clique.
            let a_ids: Vec<usize> = (1..=k as u32)
                .map(|m| at(NodeId::clique(i, b, m)))
                .collect();
            for x in 0..a_ids.len() {
                for y in x + 1..a_ids.len() {
                    add(a_ids[x], a_ids[y]);
                }
            }
            cliques.push(a_ids);
            // Each C^(i,b)_h is a clique.
            for h in 1..=q {
                let c_ids: Vec<usize> =
                    (1..=q).map(|r| at(NodeId::code(i, b, h, r))).collect();
                for x in 0..c_ids.len() {
                    for y in x + 1..c_ids.len() {
                        add(c_ids[x], c_ids[y]);
                    }
                }
                cliques.push(c_ids);
            }
            // v^(i,b)_m is adjacent to Code^(i,b) minus its own codeword
            // selection.
            for (mi, word) in words.iter().enumerate() {
                let vm = at(NodeId::clique(i, b, mi as u32 + 1));
                for h in 1..=q {
                    for r in 1..=q {
                        if word.symbol(h) != r {
                            add(vm, at(NodeId::code(i, b, h, r)));
                        }
                    }
                }
            }
        }
    }
    // Cross-player gadget wiring: complete bipartite between same-(copy, h)
    // cliques of distinct players, minus the identity matching.
    for i in 1..=t {
        for j in i + 1..=t {
            for &b in copies {
                for h in 1..=q {
                    for r1 in 1..=q {
                        for r2 in 1..=q {
                            if r1 != r2 {
                                add(at(NodeId::code(i, b, h, r1)), at(NodeId::code(j, b, h, r2)));
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(Topology::from_parts(labels, edges, cliques))
}

fn unit_weights(topo: &Topology) -> Vec<u64> {
    vec![1; topo.labels.len()]
}

fn graph_from(
    params: &CodeParams,
    t: u32,
    variant: GraphVariant,
    topo: Arc<Topology>,
    weights: Vec<u64>,
) -> LowerBoundGraph {
    let n = topo.labels.len();
    LowerBoundGraph {
        params: params.clone(),
        t,
        variant,
        topo,
        weights,
        input_adj: vec![Vec::new(); n],
        input_edges: Vec::new(),
    }
}

/// The base graph `H`: single player, unit weights.
pub fn build_base_graph(params: &CodeParams) -> Result<LowerBoundGraph, ConstructError> {
    build_linear_fixed(params, 1)
}

/// The fixed graph `G` on `t` players, all weights 1. `t = 1` degenerates
/// to the base graph and is permitted for single-player bound checks.
pub fn build_linear_fixed(params: &CodeParams, t: u32) -> Result<LowerBoundGraph, ConstructError> {
    let topo = build_topology(params, t, &[1])?;
    let weights = unit_weights(&topo);
    Ok(graph_from(params, t, GraphVariant::Linear, Arc::new(topo), weights))
}

fn check_instance(
    params: &CodeParams,
    t: u32,
    inst: &DisjointnessInstance,
    want_shape: GraphVariant,
) -> Result<(), ConstructError> {
    if inst.t() != t {
        return Err(ConstructError::WrongPlayerCount {
            want: t,
            got: inst.t(),
        });
    }
    let k = params.k();
    match (want_shape, inst.shape()) {
        (GraphVariant::Linear, InstanceShape::Linear) => {
            if inst.len() as u64 != k {
                return Err(ConstructError::WrongLength {
                    want: k,
                    got: inst.len(),
                });
            }
        }
        (GraphVariant::Quadratic, InstanceShape::Quadratic(inst_k)) => {
            if inst_k != k {
                return Err(ConstructError::KMismatch {
                    params_k: k,
                    inst_k,
                });
            }
        }
        (GraphVariant::Linear, _) => return Err(ConstructError::WrongShape { want: "linear" }),
        (GraphVariant::Quadratic, _) => {
            return Err(ConstructError::WrongShape { want: "quadratic" })
        }
        (GraphVariant::UnweightedExpanded, _) => unreachable!(),
    }
    Ok(())
}

/// The weighted instance graph `G_x`: fixed topology, `w(v^i_m) = ell` iff
/// player i's bit `m` is set, all other weights 1.
pub fn build_linear_instance(
    params: &CodeParams,
    t: u32,
    inst: &DisjointnessInstance,
) -> Result<LowerBoundGraph, ConstructError> {
    check_instance(params, t, inst, GraphVariant::Linear)?;
    let topo = Arc::new(build_topology(params, t, &[1])?);
    let mut weights = unit_weights(&topo);
    for (v, label) in topo.labels.iter().enumerate() {
        if let NodeId::Clique { player, m, .. } = label.id {
            if inst.bit(player, m as usize) {
                weights[v] = params.ell() as u64;
            }
        }
    }
    Ok(graph_from(params, t, GraphVariant::Linear, topo, weights))
}

/// The quadratic instance graph `F_x`: two fixed copies, clique nodes all
/// weight `ell`, and an input edge `v^(i,1)_m1 - v^(i,2)_m2` for every
/// 0-bit at position `(m1, m2)` of player i.
pub fn build_quadratic_instance(
    params: &CodeParams,
    t: u32,
    inst: &DisjointnessInstance,
) -> Result<LowerBoundGraph, ConstructError> {
    check_instance(params, t, inst, GraphVariant::Quadratic)?;
    let topo = Arc::new(build_topology(params, t, &[1, 2])?);
    let mut weights = unit_weights(&topo);
    for (v, label) in topo.labels.iter().enumerate() {
        if matches!(label.id, NodeId::Clique { .. }) {
            weights[v] = params.ell() as u64;
        }
    }
    let mut g = graph_from(params, t, GraphVariant::Quadratic, topo, weights);
    let k = params.k();
    let mut input_edges = BTreeSet::new();
    for i in 1..=t {
        for flat in 1..=k * k {
            if !inst.bit(i, flat as usize) {
                let (m1, m2) = unpair_index(k, flat).expect("flat index in range");
                let u = g
                    .node_index(NodeId::clique(i, 1, m1 as u32))
                    .expect("copy-1 clique node");
                let v = g
                    .node_index(NodeId::clique(i, 2, m2 as u32))
                    .expect("copy-2 clique node");
                input_edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    for &(u, v) in &input_edges {
        g.input_adj[u].push(v);
        g.input_adj[v].push(u);
    }
    for a in g.input_adj.iter_mut() {
        a.sort_unstable();
    }
    g.input_edges = input_edges.into_iter().collect();
    Ok(g)
}

/// Remark-style unweighted expansion: every node of weight `w` becomes an
/// independent set of `w` unit-weight slot nodes, and each original edge
/// becomes the complete bipartite join of the two slot sets.
pub fn expand_unweighted(g: &LowerBoundGraph) -> Result<LowerBoundGraph, ConstructError> {
    if g.variant == GraphVariant::UnweightedExpanded {
        return Err(ConstructError::AlreadyExpanded);
    }
    let mut labels = Vec::new();
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(g.node_count());
    for v in 0..g.node_count() {
        let w = g.weight(v);
        let mut ids = Vec::with_capacity(w as usize);
        for slot in 0..w as u32 {
            ids.push(labels.len());
            labels.push(NodeLabel {
                id: g.label(v).id,
                slot,
            });
        }
        slots.push(ids);
    }
    if labels.len() as u64 > MAX_NODES {
        return Err(ConstructError::TooLarge {
            nodes: labels.len() as u64,
            cap: MAX_NODES,
        });
    }
    let mut edges = BTreeSet::new();
    for (u, v) in g.all_edges() {
        for &a in &slots[u] {
            for &b in &slots[v] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    let topo = Topology::from_parts(labels, edges, Vec::new());
    let weights = unit_weights(&topo);
    Ok(graph_from(
        &g.params,
        g.t,
        GraphVariant::UnweightedExpanded,
        Arc::new(topo),
        weights,
    ))
}

/// One differenced instance pair in a family-condition report.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyConditionEntry {
    /// 1-based pair number.
    pub pair: usize,
    /// The player whose string differs (0 when the instances are identical).
    pub player: u32,
    pub weight_diffs: usize,
    pub edge_diffs: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyConditionReport {
    pub family: GraphVariant,
    pub entries: Vec<FamilyConditionEntry>,
    pub pass: bool,
}

/// Checks the family locality condition by graph differencing: for each
/// instance pair differing in exactly one player's string, every weight
/// change and every edge change must stay inside that player's node set.
pub fn validate_family_condition1(
    params: &CodeParams,
    t: u32,
    family: GraphVariant,
    pairs: &[(DisjointnessInstance, DisjointnessInstance)],
) -> Result<FamilyConditionReport, ConstructError> {
    let build = |inst: &DisjointnessInstance| match family {
        GraphVariant::Linear => build_linear_instance(params, t, inst),
        GraphVariant::Quadratic => build_quadratic_instance(params, t, inst),
        GraphVariant::UnweightedExpanded => Err(ConstructError::WrongShape {
            want: "linear or quadratic",
        }),
    };
    let mut entries = Vec::new();
    for (pi, (a, b)) in pairs.iter().enumerate() {
        let pair = pi + 1;
        if a.t() != b.t() || a.len() != b.len() || a.shape() != b.shape() {
            return Err(ConstructError::BadPair {
                pair,
                reason: "instances have different shapes".into(),
            });
        }
        let differing: Vec<u32> = (1..=a.t())
            .filter(|&i| a.string(i) != b.string(i))
            .collect();
        let player = match differing.len() {
            0 => 0,
            1 => differing[0],
            _ => {
                return Err(ConstructError::BadPair {
                    pair,
                    reason: format!("instances differ in {} players' strings", differing.len()),
                })
            }
        };
        let ga = build(a)?;
        let gb = build(b)?;
        let mut violations = Vec::new();

        let mut weight_diffs = 0;
        for v in 0..ga.node_count() {
            if ga.weight(v) != gb.weight(v) {
                weight_diffs += 1;
                if ga.player(v) != player {
                    violations.push(format!(
                        "weight of node {v} (player {}) changed",
                        ga.player(v)
                    ));
                }
            }
        }

        let ea: BTreeSet<_> = ga.all_edges().into_iter().collect();
        let eb: BTreeSet<_> = gb.all_edges().into_iter().collect();
        let mut edge_diffs = 0;
        for &(u, v) in ea.symmetric_difference(&eb) {
            edge_diffs += 1;
            if ga.player(u) != player || ga.player(v) != player {
                violations.push(format!(
                    "edge ({u},{v}) (players {},{}) changed",
                    ga.player(u),
                    ga.player(v)
                ));
            }
        }

        entries.push(FamilyConditionEntry {
            pair,
            player,
            weight_diffs,
            edge_diffs,
            violations,
        });
    }
    let pass = entries.iter().all(|e| e.violations.is_empty());
    Ok(FamilyConditionReport {
        family,
        entries,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegadget::{cyclic_shift_table, make_params, Backend};
    use crate::instances::{make_intersecting, make_pairwise_disjoint};
    use crate::bits::BitString;
    use proptest::prelude::*;

    fn shift3() -> CodeParams {
        make_params(2, 1, Backend::ExplicitTable(cyclic_shift_table(3)), true).unwrap()
    }

    fn rs41() -> CodeParams {
        make_params(4, 1, Backend::ReedSolomon, false).unwrap()
    }

    fn linear_inst(params: &CodeParams, t: u32, strs: &[&str]) -> DisjointnessInstance {
        assert_eq!(strs.len(), t as usize);
        let inst = DisjointnessInstance::new(
            InstanceShape::Linear,
            strs.iter().map(|s| BitString::from_bits01(s)).collect(),
        )
        .unwrap();
        assert_eq!(inst.len() as u64, params.k());
        inst
    }

    #[test]
    fn base_graph_structure() {
        let p = shift3();
        let h = build_base_graph(&p).unwrap();
        assert_eq!(h.node_count(), 3 + 9);
        assert_eq!(h.t(), 1);
        assert_eq!(h.cut_size(), 0);

        // v_1 is adjacent to all of Code except its codeword selection
        // {(1,2), (2,3), (3,1)}.
        let v1 = h.node_index(NodeId::clique(1, 1, 1)).unwrap();
        let excluded = [(1, 2), (2, 3), (3, 1)];
        for hh in 1..=3u32 {
            for r in 1..=3u32 {
                let s = h.node_index(NodeId::code(1, 1, hh, r)).unwrap();
                assert_eq!(
                    h.has_edge(v1, s),
                    !excluded.contains(&(hh, r)),
                    "v1 vs sigma({hh},{r})"
                );
            }
        }
        // Degree of v_m within Code is q^2 - q = 6; inside A it is k-1 = 2.
        assert_eq!(h.degree(v1), 6 + 2);

        let big = build_base_graph(&rs41()).unwrap();
        assert_eq!(big.node_count(), 5 + 25);
    }

    #[test]
    fn fixed_graph_counts_and_cut() {
        let p = shift3();
        let g = build_linear_fixed(&p, 2).unwrap();
        assert_eq!(g.node_count(), 24);
        assert_eq!(g.edge_count(), 78);
        assert_eq!(g.cut_size(), 18);

        let g3 = build_linear_fixed(&p, 3).unwrap();
        assert_eq!(g3.node_count(), 36);
        // Three player pairs, 18 each.
        assert_eq!(g3.cut_size(), 54);
    }

    #[test]
    fn cross_player_wiring_is_matching_complement() {
        let p = shift3();
        let g = build_linear_fixed(&p, 2).unwrap();
        for h in 1..=3u32 {
            for r1 in 1..=3u32 {
                let a = g.node_index(NodeId::code(1, 1, h, r1)).unwrap();
                for r2 in 1..=3u32 {
                    let b = g.node_index(NodeId::code(2, 1, h, r2)).unwrap();
                    assert_eq!(g.has_edge(a, b), r1 != r2, "h={h} r1={r1} r2={r2}");
                }
                // No edges to other-h cliques of the other player.
                for h2 in 1..=3u32 {
                    if h2 != h {
                        for r2 in 1..=3u32 {
                            let b = g.node_index(NodeId::code(2, 1, h2, r2)).unwrap();
                            assert!(!g.has_edge(a, b));
                        }
                    }
                }
            }
        }
        // No A-A or A-Code edges across players.
        for m in 1..=3u32 {
            let a = g.node_index(NodeId::clique(1, 1, m)).unwrap();
            for v in g.player_nodes(2) {
                assert!(!g.has_edge(a, v));
            }
        }
    }

    #[test]
    fn cut_edges_are_code_only_same_h() {
        let p = shift3();
        for g in [
            build_linear_fixed(&p, 3).unwrap(),
            build_quadratic_instance(
                &p,
                2,
                &make_pairwise_disjoint(2, 9, InstanceShape::Quadratic(3), 0.3, 5).unwrap(),
            )
            .unwrap(),
        ] {
            for &(u, v) in g.cut_edges() {
                assert_ne!(g.player(u), g.player(v));
                match (g.label(u).id, g.label(v).id) {
                    (
                        NodeId::Code { copy: b1, h: h1, r: r1, .. },
                        NodeId::Code { copy: b2, h: h2, r: r2, .. },
                    ) => {
                        assert_eq!(b1, b2);
                        assert_eq!(h1, h2);
                        assert_ne!(r1, r2);
                    }
                    other => panic!("cut edge between non-code nodes: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn linear_instance_weights() {
        let p = shift3();
        let inst = linear_inst(&p, 2, &["100", "100"]);
        let g = build_linear_instance(&p, 2, &inst).unwrap();
        for i in 1..=2u32 {
            for m in 1..=3u32 {
                let v = g.node_index(NodeId::clique(i, 1, m)).unwrap();
                assert_eq!(g.weight(v), if m == 1 { 2 } else { 1 });
            }
        }
        // All code nodes weight 1.
        for v in 0..g.node_count() {
            if matches!(g.label(v).id, NodeId::Code { .. }) {
                assert_eq!(g.weight(v), 1);
            }
        }

        let zeros = linear_inst(&p, 2, &["000", "000"]);
        let g0 = build_linear_instance(&p, 2, &zeros).unwrap();
        assert!((0..g0.node_count()).all(|v| g0.weight(v) == 1));
    }

    #[test]
    fn linear_topology_is_instance_independent() {
        let p = shift3();
        let a = build_linear_instance(&p, 2, &linear_inst(&p, 2, &["101", "010"])).unwrap();
        let b = build_linear_instance(&p, 2, &linear_inst(&p, 2, &["010", "010"])).unwrap();
        assert_eq!(a.all_edges(), b.all_edges());
        assert_ne!(a.weights, b.weights);
    }

    #[test]
    fn quadratic_structure() {
        let p = shift3();
        // x^1 has only bit (1,1) = 0; x^2 all ones.
        let mut s1 = BitString::zeros(9);
        for pos in 1..9 {
            s1.set(pos, true);
        }
        let mut s2 = BitString::zeros(9);
        for pos in 0..9 {
            s2.set(pos, true);
        }
        let inst =
            DisjointnessInstance::new(InstanceShape::Quadratic(3), vec![s1, s2]).unwrap();
        let g = build_quadratic_instance(&p, 2, &inst).unwrap();
        assert_eq!(g.node_count(), 48);
        assert_eq!(g.cut_size(), 36);
        let u = g.node_index(NodeId::clique(1, 1, 1)).unwrap();
        let v = g.node_index(NodeId::clique(1, 2, 1)).unwrap();
        assert_eq!(g.input_edges(), &[(u.min(v), u.max(v))]);

        // All-ones: no input edges; fixed edge count = 2 * 78.
        let ones = DisjointnessInstance::new(
            InstanceShape::Quadratic(3),
            vec![BitString::from_bits01("111111111"); 2],
        )
        .unwrap();
        let g1 = build_quadratic_instance(&p, 2, &ones).unwrap();
        assert_eq!(g1.edge_count(), 156);

        // All-zeros: 9 input edges per player on top.
        let zeros = DisjointnessInstance::new(
            InstanceShape::Quadratic(3),
            vec![BitString::zeros(9); 2],
        )
        .unwrap();
        let g0 = build_quadratic_instance(&p, 2, &zeros).unwrap();
        assert_eq!(g0.edge_count(), 156 + 18);

        // Clique nodes weigh ell, code nodes 1, in every instance.
        for g in [&g, &g1, &g0] {
            for v in 0..g.node_count() {
                let want = match g.label(v).id {
                    NodeId::Clique { .. } => 2,
                    NodeId::Code { .. } => 1,
                };
                assert_eq!(g.weight(v), want);
            }
        }
    }

    #[test]
    fn builder_validation() {
        let p = shift3();
        let lin = linear_inst(&p, 2, &["010", "010"]);
        assert!(matches!(
            build_linear_instance(&p, 3, &lin),
            Err(ConstructError::WrongPlayerCount { want: 3, got: 2 })
        ));
        assert!(matches!(
            build_quadratic_instance(&p, 2, &lin),
            Err(ConstructError::WrongShape { want: "quadratic" })
        ));
        let quad4 = DisjointnessInstance::new(
            InstanceShape::Quadratic(4),
            vec![BitString::zeros(16); 2],
        )
        .unwrap();
        assert!(matches!(
            build_quadratic_instance(&p, 2, &quad4),
            Err(ConstructError::KMismatch { params_k: 3, inst_k: 4 })
        ));
    }

    #[test]
    fn expansion_counts_and_structure() {
        let p = shift3();
        let inst = linear_inst(&p, 2, &["100", "100"]);
        let g = build_linear_instance(&p, 2, &inst).unwrap();
        let e = expand_unweighted(&g).unwrap();
        // Two weight-2 nodes each gain one extra slot.
        assert_eq!(e.node_count(), 26);
        assert!((0..e.node_count()).all(|v| e.weight(v) == 1));
        assert_eq!(e.cut_size(), g.cut_size());
        assert!(matches!(
            expand_unweighted(&e),
            Err(ConstructError::AlreadyExpanded)
        ));

        // The two slots of an expanded node are non-adjacent and share the
        // original neighborhood.
        let v1 = g.node_index(NodeId::clique(1, 1, 1)).unwrap();
        let id = g.label(v1).id;
        let s0 = e.label_index(NodeLabel { id, slot: 0 }).unwrap();
        let s1 = e.label_index(NodeLabel { id, slot: 1 }).unwrap();
        assert!(!e.has_edge(s0, s1));
        let n0: Vec<_> = e.neighbors(s0).iter().map(|&x| e.label(x)).collect();
        let n1: Vec<_> = e.neighbors(s1).iter().map(|&x| e.label(x)).collect();
        assert_eq!(n0, n1);
        assert_eq!(n0.len(), g.degree(v1));
    }

    #[test]
    fn expansion_bicliques_weight_pairs() {
        // Quadratic graphs put weight ell on adjacent clique nodes; their
        // expansions must form complete bipartite slot joins.
        let p = shift3();
        let zeros = DisjointnessInstance::new(
            InstanceShape::Quadratic(3),
            vec![BitString::zeros(9); 2],
        )
        .unwrap();
        let g = build_quadratic_instance(&p, 2, &zeros).unwrap();
        let e = expand_unweighted(&g).unwrap();
        let u = g.node_index(NodeId::clique(1, 1, 1)).unwrap();
        let v = g.node_index(NodeId::clique(1, 2, 1)).unwrap();
        assert!(g.has_edge(u, v));
        for su in 0..2u32 {
            for sv in 0..2u32 {
                let a = e
                    .label_index(NodeLabel { id: g.label(u).id, slot: su })
                    .unwrap();
                let b = e
                    .label_index(NodeLabel { id: g.label(v).id, slot: sv })
                    .unwrap();
                assert!(e.has_edge(a, b), "slots ({su},{sv})");
            }
        }
    }

    #[test]
    fn family_condition_examples() {
        let p = shift3();
        let a = linear_inst(&p, 2, &["010", "010"]);
        let same = validate_family_condition1(
            &p,
            2,
            GraphVariant::Linear,
            &[(a.clone(), a.clone())],
        )
        .unwrap();
        assert!(same.pass);
        assert_eq!(same.entries[0].player, 0);
        assert_eq!(same.entries[0].weight_diffs, 0);
        assert_eq!(same.entries[0].edge_diffs, 0);

        let b = linear_inst(&p, 2, &["011", "010"]);
        let rep = validate_family_condition1(&p, 2, GraphVariant::Linear, &[(a.clone(), b)])
            .unwrap();
        assert!(rep.pass);
        assert_eq!(rep.entries[0].player, 1);
        assert_eq!(rep.entries[0].weight_diffs, 1);
        assert_eq!(rep.entries[0].edge_diffs, 0);

        let c = linear_inst(&p, 2, &["011", "110"]);
        assert!(matches!(
            validate_family_condition1(&p, 2, GraphVariant::Linear, &[(a, c)]),
            Err(ConstructError::BadPair { pair: 1, .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn node_count_formulas(t in 1u32..4, seed in any::<u64>()) {
            let p = shift3();
            let k = p.k();
            let q = p.sigma_size() as u64;
            let lin = build_linear_fixed(&p, t).unwrap();
            prop_assert_eq!(lin.node_count() as u64, t as u64 * (k + q * q));

            let inst = make_pairwise_disjoint(t, (k * k) as usize, InstanceShape::Quadratic(k), 0.4, seed).unwrap();
            let quad = build_quadratic_instance(&p, t, &inst).unwrap();
            prop_assert_eq!(quad.node_count() as u64, 2 * t as u64 * (k + q * q));
            let pairs = t as u64 * (t as u64 - 1) / 2;
            prop_assert_eq!(quad.cut_size() as u64, pairs * 2 * q * (q * q - q));
        }

        #[test]
        fn quadratic_weights_instance_independent(seed in any::<u64>()) {
            let p = shift3();
            let a = make_pairwise_disjoint(2, 9, InstanceShape::Quadratic(3), 0.5, seed).unwrap();
            let b = make_intersecting(2, 9, InstanceShape::Quadratic(3), 4, 0.5, seed.wrapping_add(1)).unwrap();
            let ga = build_quadratic_instance(&p, 2, &a).unwrap();
            let gb = build_quadratic_instance(&p, 2, &b).unwrap();
            prop_assert_eq!(&ga.weights, &gb.weights);
            // Fixed edges identical; only input edges differ.
            prop_assert_eq!(&ga.topo.edges, &gb.topo.edges);
        }
    }
}
