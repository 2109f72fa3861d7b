//! Exact combinatorial verification engine.
//!
//! The centerpiece is [`mwis_exact`]: branch-and-bound maximum-weight
//! independent set with a clique-cover upper bound. The constructed graphs
//! are unions of known cliques (the A- and C_h-cliques), which makes the
//! bound near-tight and keeps 90-node instances in the milliseconds. The
//! witness is deterministic: the lexicographically smallest maximizer.

pub mod verify;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::codegadget::CodeError;
use crate::construct::{ConstructError, LowerBoundGraph};
use crate::instances::InstanceError;

/// Default node-count guard for exact solves; override per call or via the
/// `CONGEST_LB_GUARD` environment variable.
pub const DEFAULT_NODE_GUARD: usize = 200;

/// Environment variable overriding [`DEFAULT_NODE_GUARD`].
pub const GUARD_ENV: &str = "CONGEST_LB_GUARD";

/// Active solver guard: `CONGEST_LB_GUARD` when set to a valid positive
/// integer, the default otherwise.
pub fn node_guard() -> usize {
    std::env::var(GUARD_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_NODE_GUARD)
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} nodes, exceeding the exact-solve guard {guard} (set {GUARD_ENV} to raise)")]
    GuardExceeded { n: usize, guard: usize },
    #[error("node {v} out of range for a {n}-node graph")]
    UnknownNode { v: usize, n: usize },
    #[error("forced nodes {u} and {v} are adjacent")]
    ForcedNotIndependent { u: usize, v: usize },
    #[error("forced node {v} lies outside the restriction set")]
    ForcedOutsideRestrict { v: usize },
    #[error("node {v} appears on both sides of the bipartition")]
    SetsOverlap { v: usize },
    #[error("expected a {expected} graph")]
    WrongVariant { expected: &'static str },
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Anything the solver can run on: finite node set, positive weights,
/// undirected adjacency, and an optional known clique cover used for the
/// upper bound (cliques need not be disjoint; nodes outside every hint
/// clique get covered greedily).
pub trait MwisGraph {
    fn node_count(&self) -> usize;
    fn node_weight(&self, v: usize) -> u64;
    fn neighbors_of(&self, v: usize) -> Vec<usize>;
    fn clique_cover_hint(&self) -> Vec<Vec<usize>> {
        Vec::new()
    }
}

impl MwisGraph for LowerBoundGraph {
    fn node_count(&self) -> usize {
        self.node_count()
    }

    fn node_weight(&self, v: usize) -> u64 {
        self.weight(v)
    }

    fn neighbors_of(&self, v: usize) -> Vec<usize> {
        self.neighbors(v)
    }

    fn clique_cover_hint(&self) -> Vec<Vec<usize>> {
        self.clique_cover().to_vec()
    }
}

/// A plain adjacency-list weighted graph, for tests and for graphs
/// reconstructed from gathered messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<u64>,
    adj: Vec<BTreeSet<usize>>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<u64>) -> WeightedGraph {
        let n = weights.len();
        WeightedGraph {
            weights,
            adj: vec![BTreeSet::new(); n],
        }
    }

    /// Adds an undirected edge; panics on self-loops or unknown nodes.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.weights.len() && v < self.weights.len());
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }
}

impl MwisGraph for WeightedGraph {
    fn node_count(&self) -> usize {
        self.weights.len()
    }

    fn node_weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    fn neighbors_of(&self, v: usize) -> Vec<usize> {
        self.adj[v].iter().copied().collect()
    }
}

/// Result of an exact solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MwisResult {
    pub weight: u64,
    /// Lexicographically smallest maximum-weight independent set
    /// (ascending node ids).
    pub witness: Vec<usize>,
    /// Search-tree nodes visited (diagnostic).
    pub explored: u64,
}

/// Fixed-capacity bitset over node ids.
#[derive(Clone, PartialEq, Eq)]
struct BlockSet {
    blocks: Vec<u64>,
}

impl BlockSet {
    fn empty(n: usize) -> BlockSet {
        BlockSet {
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, v: usize) {
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    fn min_elem(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
    }

    fn and_not_assign(&mut self, other: &BlockSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    fn and_assign(&mut self, other: &BlockSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            let mut word = b;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(i * 64 + bit)
                }
            })
        })
    }
}

struct Search {
    weights: Vec<u64>,
    adj: Vec<BlockSet>,
    /// Clique-cover id per node (partition of the candidate universe).
    cid: Vec<usize>,
    scratch: Vec<u64>,
    forced: Vec<usize>,
    best_weight: u64,
    best_witness: Vec<usize>,
    explored: u64,
}

impl Search {
    /// Clique-cover upper bound on any independent set inside `p`: each
    /// cover class contributes at most its heaviest member.
    fn bound(&mut self, p: &BlockSet) -> u64 {
        self.scratch.fill(0);
        let mut total = 0;
        for v in p.iter() {
            let c = self.cid[v];
            let w = self.weights[v];
            if w > self.scratch[c] {
                total += w - self.scratch[c];
                self.scratch[c] = w;
            }
        }
        total
    }

    fn run(&mut self, p: BlockSet, cur: u64, chosen: &mut Vec<usize>) {
        self.explored += 1;
        if p.is_empty() {
            if cur > self.best_weight {
                self.best_weight = cur;
                let mut witness = self.forced.clone();
                witness.extend_from_slice(chosen);
                witness.sort_unstable();
                self.best_witness = witness;
            }
            return;
        }
        // Equal-weight completions prune too: the earlier (lex-smaller)
        // incumbent wins ties.
        if cur + self.bound(&p) <= self.best_weight {
            return;
        }
        let v = p.min_elem().unwrap();
        let mut include = p.clone();
        include.remove(v);
        include.and_not_assign(&self.adj[v]);
        chosen.push(v);
        self.run(include, cur + self.weights[v], chosen);
        chosen.pop();
        let mut exclude = p;
        exclude.remove(v);
        self.run(exclude, cur, chosen);
    }
}

/// Exact MWIS restricted to `restrict` (all nodes when `None`) among
/// independent sets containing `forced`, with an explicit node guard.
///
/// Branch order is include-first on the smallest remaining id, which makes
/// the first optimum found the lexicographically smallest maximizer.
pub fn mwis_exact_within(
    g: &impl MwisGraph,
    restrict: Option<&[usize]>,
    forced: &[usize],
    guard: usize,
) -> Result<MwisResult, OracleError> {
    let n = g.node_count();
    if n > guard {
        return Err(OracleError::GuardExceeded { n, guard });
    }
    let check = |v: usize| {
        if v >= n {
            Err(OracleError::UnknownNode { v, n })
        } else {
            Ok(())
        }
    };

    let mut universe = BlockSet::empty(n);
    match restrict {
        None => (0..n).for_each(|v| universe.insert(v)),
        Some(r) => {
            for &v in r {
                check(v)?;
                universe.insert(v);
            }
        }
    }

    let weights: Vec<u64> = (0..n).map(|v| g.node_weight(v)).collect();
    let mut adj = vec![BlockSet::empty(n); n];
    for (v, row) in adj.iter_mut().enumerate() {
        for u in g.neighbors_of(v) {
            check(u)?;
            row.insert(u);
        }
    }

    let mut forced_sorted: Vec<usize> = forced.to_vec();
    forced_sorted.sort_unstable();
    forced_sorted.dedup();
    for &f in &forced_sorted {
        check(f)?;
        if !universe.contains(f) {
            return Err(OracleError::ForcedOutsideRestrict { v: f });
        }
    }
    for (i, &u) in forced_sorted.iter().enumerate() {
        for &v in &forced_sorted[i + 1..] {
            if adj[u].contains(v) {
                return Err(OracleError::ForcedNotIndependent { u, v });
            }
        }
    }

    let mut p = universe.clone();
    let mut base = 0;
    for &f in &forced_sorted {
        base += weights[f];
        p.remove(f);
        p.and_not_assign(&adj[f]);
    }

    // Partition the candidate set into clique classes: known cliques first,
    // then greedy cliques over whatever remains.
    let mut cid = vec![usize::MAX; n];
    let mut clique_count = 0;
    for clique in g.clique_cover_hint() {
        let mut used = false;
        for &v in &clique {
            check(v)?;
            debug_assert!(
                clique.iter().all(|&u| u == v || adj[v].contains(u)),
                "clique hint is not a clique"
            );
            if cid[v] == usize::MAX && p.contains(v) {
                cid[v] = clique_count;
                used = true;
            }
        }
        if used {
            clique_count += 1;
        }
    }
    for v in p.iter().collect::<Vec<_>>() {
        if cid[v] != usize::MAX {
            continue;
        }
        cid[v] = clique_count;
        let mut candidates = adj[v].clone();
        candidates.and_assign(&p);
        loop {
            let Some(u) = candidates.iter().find(|&u| cid[u] == usize::MAX) else {
                break;
            };
            cid[u] = clique_count;
            candidates.and_assign(&adj[u]);
        }
        clique_count += 1;
    }

    let mut search = Search {
        weights,
        adj,
        cid,
        scratch: vec![0; clique_count.max(1)],
        forced: forced_sorted.clone(),
        best_weight: base,
        best_witness: forced_sorted,
        explored: 0,
    };
    let mut chosen = Vec::new();
    search.run(p, base, &mut chosen);
    Ok(MwisResult {
        weight: search.best_weight,
        witness: search.best_witness,
        explored: search.explored,
    })
}

/// Exact MWIS among independent sets containing `forced`, using the
/// environment-configurable guard.
pub fn mwis_exact(g: &impl MwisGraph, forced: &[usize]) -> Result<MwisResult, OracleError> {
    mwis_exact_within(g, None, forced, node_guard())
}

/// Whether `set` is independent in `g` (duplicates tolerated).
pub fn is_independent(g: &impl MwisGraph, set: &[usize]) -> Result<bool, OracleError> {
    let n = g.node_count();
    let mut members = BTreeSet::new();
    for &v in set {
        if v >= n {
            return Err(OracleError::UnknownNode { v, n });
        }
        members.insert(v);
    }
    for &v in &members {
        for u in g.neighbors_of(v) {
            if members.contains(&u) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Maximum matching in the bipartite subgraph induced between disjoint node
/// sets `a` and `b` (edges of `g` with one endpoint in each), via
/// augmenting-path search.
pub fn max_bipartite_matching(
    g: &impl MwisGraph,
    a: &[usize],
    b: &[usize],
) -> Result<usize, OracleError> {
    let n = g.node_count();
    let mut b_index = std::collections::BTreeMap::new();
    for (i, &v) in b.iter().enumerate() {
        if v >= n {
            return Err(OracleError::UnknownNode { v, n });
        }
        b_index.insert(v, i);
    }
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(a.len());
    for &v in a {
        if v >= n {
            return Err(OracleError::UnknownNode { v, n });
        }
        if b_index.contains_key(&v) {
            return Err(OracleError::SetsOverlap { v });
        }
        edges.push(
            g.neighbors_of(v)
                .into_iter()
                .filter_map(|u| b_index.get(&u).copied())
                .collect(),
        );
    }

    fn augment(
        u: usize,
        edges: &[Vec<usize>],
        matched_b: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &bi in &edges[u] {
            if !visited[bi] {
                visited[bi] = true;
                if matched_b[bi].is_none()
                    || augment(matched_b[bi].unwrap(), edges, matched_b, visited)
                {
                    matched_b[bi] = Some(u);
                    return true;
                }
            }
        }
        false
    }

    let mut matched_b: Vec<Option<usize>> = vec![None; b.len()];
    let mut size = 0;
    for u in 0..a.len() {
        let mut visited = vec![false; b.len()];
        if augment(u, &edges, &mut matched_b, &mut visited) {
            size += 1;
        }
    }
    Ok(size)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Reference MWIS by exhaustive subset enumeration (n <= 20 or so),
    /// with the same lex-smallest tie-breaking as the solver.
    pub fn brute_force_mwis(g: &impl MwisGraph) -> (u64, Vec<usize>) {
        let n = g.node_count();
        assert!(n <= 22, "brute force capped");
        let mut adj_mask = vec![0u64; n];
        for (v, mask) in adj_mask.iter_mut().enumerate() {
            for u in g.neighbors_of(v) {
                *mask |= 1 << u;
            }
        }
        let mut best_w = 0u64;
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u64..(1 << n) {
            let mut ok = true;
            let mut m = mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                if adj_mask[v] & mask != 0 {
                    ok = false;
                    break;
                }
                m &= m - 1;
            }
            if !ok {
                continue;
            }
            let witness: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let w: u64 = witness.iter().map(|&v| g.node_weight(v)).sum();
            if w > best_w || (w == best_w && !best.is_empty() && witness < best) {
                best_w = w;
                best = witness;
            }
        }
        (best_w, best)
    }

    /// Reference maximum bipartite matching by exhaustive recursion.
    pub fn brute_force_matching(edges: &[Vec<usize>], b_len: usize) -> usize {
        fn rec(u: usize, edges: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if u == edges.len() {
                return 0;
            }
            let mut best = rec(u + 1, edges, used);
            for &b in &edges[u] {
                if !used[b] {
                    used[b] = true;
                    best = best.max(1 + rec(u + 1, edges, used));
                    used[b] = false;
                }
            }
            best
        }
        rec(0, edges, &mut vec![false; b_len])
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::codegadget::{cyclic_shift_table, make_params, Backend, CodeParams};
    use crate::construct::{build_linear_instance, NodeId};
    use crate::instances::{DisjointnessInstance, InstanceShape};
    use crate::bits::BitString;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shift3() -> CodeParams {
        make_params(2, 1, Backend::ExplicitTable(cyclic_shift_table(3)), true).unwrap()
    }

    fn linear_graph(strs: &[&str]) -> crate::construct::LowerBoundGraph {
        let p = shift3();
        let inst = DisjointnessInstance::new(
            InstanceShape::Linear,
            strs.iter().map(|s| BitString::from_bits01(s)).collect(),
        )
        .unwrap();
        build_linear_instance(&p, strs.len() as u32, &inst).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> WeightedGraph {
        let n = rng.gen_range(1..=max_n);
        let weights = (0..n).map(|_| rng.gen_range(1..=8)).collect();
        let mut g = WeightedGraph::new(weights);
        let p: f64 = rng.gen_range(0.05..0.6);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn path_example() {
        let mut g = WeightedGraph::new(vec![1, 5, 1]);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let r = mwis_exact(&g, &[]).unwrap();
        assert_eq!(r.weight, 5);
        assert_eq!(r.witness, vec![1]);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..60 {
            let g = random_graph(&mut rng, 14);
            let fast = mwis_exact(&g, &[]).unwrap();
            let (bw, bwit) = brute_force_mwis(&g);
            assert_eq!(fast.weight, bw);
            assert_eq!(fast.witness, bwit, "lex tie-break must match");
            let total: u64 = fast.witness.iter().map(|&v| g.node_weight(v)).sum();
            assert_eq!(total, fast.weight);
            assert!(is_independent(&g, &fast.witness).unwrap());
        }
    }

    #[test]
    fn forced_nodes() {
        // Triangle 0-1-2 plus pendant 3 on node 0; weights 4,1,1,1.
        let mut g = WeightedGraph::new(vec![4, 1, 1, 1]);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        g.add_edge(1, 2);
        g.add_edge(0, 3);
        let free = mwis_exact(&g, &[]).unwrap();
        assert_eq!(free.weight, 4);
        assert_eq!(free.witness, vec![0]);
        let forced1 = mwis_exact(&g, &[1]).unwrap();
        assert_eq!(forced1.weight, 2);
        assert_eq!(forced1.witness, vec![1, 3]);
        assert!(matches!(
            mwis_exact(&g, &[0, 1]),
            Err(OracleError::ForcedNotIndependent { u: 0, v: 1 })
        ));
        assert!(matches!(
            mwis_exact(&g, &[9]),
            Err(OracleError::UnknownNode { v: 9, n: 4 })
        ));
    }

    #[test]
    fn forced_monotonicity_and_tightness() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = random_graph(&mut rng, 12);
            let free = mwis_exact(&g, &[]).unwrap();
            for &f in free.witness.iter().take(2) {
                let forced = mwis_exact(&g, &[f]).unwrap();
                assert_eq!(forced.weight, free.weight, "forced inside an optimum");
            }
            let n = g.node_count();
            let v = rng.gen_range(0..n);
            let forced = mwis_exact(&g, &[v]).unwrap();
            assert!(forced.weight <= free.weight);
            assert!(forced.witness.contains(&v));
        }
    }

    #[test]
    fn restricted_solves() {
        let g = linear_graph(&["100", "100"]);
        // Restrict to player 1: one A-clique of max weight 2 plus the
        // forced-out code structure.
        let p1 = g.player_nodes(1);
        let r = mwis_exact_within(&g, Some(&p1), &[], 200).unwrap();
        // Single player: v_m (weight 2) + its codeword selection (3 nodes).
        assert_eq!(r.weight, 5);
        for &v in &r.witness {
            assert!(p1.contains(&v));
        }
        // Forced node outside the restriction errors.
        let p2 = g.player_nodes(2);
        assert!(matches!(
            mwis_exact_within(&g, Some(&p1), &[p2[0]], 200),
            Err(OracleError::ForcedOutsideRestrict { .. })
        ));
    }

    #[test]
    fn guard_trips() {
        let g = WeightedGraph::new(vec![1; 30]);
        assert!(matches!(
            mwis_exact_within(&g, None, &[], 20),
            Err(OracleError::GuardExceeded { n: 30, guard: 20 })
        ));
    }

    #[test]
    fn linear_gap_frozen_values() {
        // Canonical uniquely-intersecting instances: exact optimum 10.
        for m in ["100", "010", "001"] {
            let g = linear_graph(&[m, m]);
            assert_eq!(mwis_exact(&g, &[]).unwrap().weight, 10);
        }
        // All-zero weights: optimum 8.
        assert_eq!(mwis_exact(&linear_graph(&["000", "000"]), &[]).unwrap().weight, 8);
        // A disjoint instance attaining the maximum 9.
        assert_eq!(mwis_exact(&linear_graph(&["100", "010"]), &[]).unwrap().weight, 9);
    }

    #[test]
    fn claim_witness_is_lex_minimal_at_canonical_instance() {
        let g = linear_graph(&["100", "100"]);
        let r = mwis_exact(&g, &[]).unwrap();
        // v^1_1, Code^1_1, v^2_1, Code^2_1 — compute the expected ids.
        let mut expect = Vec::new();
        for i in 1..=2u32 {
            expect.push(g.node_index(NodeId::clique(i, 1, 1)).unwrap());
            expect.extend(g.code_selection(i, 1, 1).unwrap());
        }
        expect.sort_unstable();
        assert_eq!(r.weight, 10);
        assert_eq!(r.witness, expect);
    }

    #[test]
    fn independence_checks() {
        let g = linear_graph(&["100", "100"]);
        assert!(is_independent(&g, &[]).unwrap());
        let a0 = g.node_index(NodeId::clique(1, 1, 1)).unwrap();
        let a1 = g.node_index(NodeId::clique(1, 1, 2)).unwrap();
        assert!(!is_independent(&g, &[a0, a1]).unwrap());
        assert!(is_independent(&g, &[a0, a0]).unwrap());
        assert!(matches!(
            is_independent(&g, &[1000]),
            Err(OracleError::UnknownNode { v: 1000, .. })
        ));
    }

    #[test]
    fn matching_examples() {
        // No edges.
        let g = WeightedGraph::new(vec![1; 4]);
        assert_eq!(max_bipartite_matching(&g, &[0, 1], &[2, 3]).unwrap(), 0);

        // Complete bipartite minus perfect matching on 3+3.
        let mut g = WeightedGraph::new(vec![1; 6]);
        for u in 0..3 {
            for v in 3..6 {
                if v - 3 != u {
                    g.add_edge(u, v);
                }
            }
        }
        assert_eq!(max_bipartite_matching(&g, &[0, 1, 2], &[3, 4, 5]).unwrap(), 3);
        assert!(matches!(
            max_bipartite_matching(&g, &[0, 1], &[1, 4]),
            Err(OracleError::SetsOverlap { v: 1 })
        ));

        // Code selections of distinct messages in the fixed graph.
        let g = linear_graph(&["000", "000"]);
        let a = g.code_selection(1, 1, 1).unwrap();
        let b = g.code_selection(2, 1, 2).unwrap();
        let m = max_bipartite_matching(&g, &a, &b).unwrap();
        assert!(m >= 2, "matching {m} below ell");
    }

    #[test]
    fn matching_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let na = rng.gen_range(1..=5usize);
            let nb = rng.gen_range(1..=5usize);
            let mut g = WeightedGraph::new(vec![1; na + nb]);
            let mut edges = vec![Vec::new(); na];
            for (u, row) in edges.iter_mut().enumerate() {
                for b in 0..nb {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, na + b);
                        row.push(b);
                    }
                }
            }
            let a: Vec<usize> = (0..na).collect();
            let b: Vec<usize> = (na..na + nb).collect();
            let fast = max_bipartite_matching(&g, &a, &b).unwrap();
            assert_eq!(fast, brute_force_matching(&edges, nb));
            assert!(fast <= na.min(nb));
        }
    }

    #[test]
    fn complete_bipartite_minus_matching_sizes() {
        for n in 2..=5usize {
            let mut g = WeightedGraph::new(vec![1; 2 * n]);
            let mut edges = vec![Vec::new(); n];
            for (u, row) in edges.iter_mut().enumerate() {
                for v in 0..n {
                    if u != v {
                        g.add_edge(u, n + v);
                        row.push(v);
                    }
                }
            }
            let a: Vec<usize> = (0..n).collect();
            let b: Vec<usize> = (n..2 * n).collect();
            assert_eq!(max_bipartite_matching(&g, &a, &b).unwrap(), n);
            assert_eq!(brute_force_matching(&edges, n), n);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn monotone_under_edges_and_weights(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, 10);
            let w0 = mwis_exact(&g, &[]).unwrap().weight;
            let n = g.node_count();

            // Adding an edge never increases the optimum.
            let mut with_edge = g.clone();
            if n >= 2 {
                let u = rng.gen_range(0..n - 1);
                let v = rng.gen_range(u + 1..n);
                with_edge.add_edge(u, v);
                prop_assert!(mwis_exact(&with_edge, &[]).unwrap().weight <= w0);
            }

            // Raising a weight never decreases it.
            let v = rng.gen_range(0..n);
            let mut weights: Vec<u64> = (0..n).map(|x| g.node_weight(x)).collect();
            weights[v] += rng.gen_range(1..=5u64);
            let mut heavier = WeightedGraph::new(weights);
            for x in 0..n {
                for y in g.neighbors_of(x) {
                    if x < y {
                        heavier.add_edge(x, y);
                    }
                }
            }
            prop_assert!(mwis_exact(&heavier, &[]).unwrap().weight >= w0);
        }
    }
}
