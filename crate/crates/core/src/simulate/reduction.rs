//! The disjointness-to-MaxIS reduction and the round-bound report.
//!
//! [`reduction_protocol`] closes the loop: from a promise instance it
//! builds the family graph, runs the decider under the player-sliced
//! executor, and maps ACCEPT to "uniquely intersecting" and REJECT to
//! "pairwise disjoint". [`lower_bound_report`] instantiates the
//! constant-free round-bound ratio `len / (t log t * |cut| * log |V|)` on
//! measured quantities.

use serde::Serialize;

use crate::codegadget::CodeParams;
use crate::construct::{
    build_linear_instance, build_quadratic_instance, GraphVariant, LowerBoundGraph,
};
use crate::instances::{verify_promise, DisjointnessInstance, PromiseVerdict};
use crate::oracle::verify::{linear_thresholds, quadratic_thresholds};

use super::{
    default_bits, gather_and_solve_algorithm, multiparty_simulate, AlgorithmSpec, SimError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Intersecting,
    PairwiseDisjoint,
}

fn weighted_family_only(family: GraphVariant, what: &str) -> Result<(), SimError> {
    if family == GraphVariant::UnweightedExpanded {
        return Err(SimError::Unsupported {
            algorithm: what.into(),
            reason: "defined for the weighted families only".into(),
        });
    }
    Ok(())
}

/// The accept threshold `beta` of the family's gap predicate: the weight
/// every intersecting instance is guaranteed to reach.
pub fn gap_threshold(params: &CodeParams, t: u32, family: GraphVariant) -> Result<u64, SimError> {
    weighted_family_only(family, "gap threshold")?;
    Ok(match family {
        GraphVariant::Linear => linear_thresholds(params, t).0,
        _ => quadratic_thresholds(params, t).0,
    })
}

/// Diagnostic ratio between the accept threshold and the disjoint-side
/// bound; > 1 means the closed-form thresholds alone separate the cases.
pub fn gap_ratio(params: &CodeParams, t: u32, family: GraphVariant) -> Result<f64, SimError> {
    weighted_family_only(family, "gap ratio")?;
    let (lo, hi) = match family {
        GraphVariant::Linear => linear_thresholds(params, t),
        _ => quadratic_thresholds(params, t),
    };
    Ok(lo as f64 / hi as f64)
}

/// Outcome of one end-to-end reduction run.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionOutcome {
    pub family: GraphVariant,
    pub algorithm: String,
    pub instance_digest: String,
    pub verdict: Verdict,
    pub ground_truth: Verdict,
    pub matches: bool,
    pub rounds: u32,
    pub blackboard_bits: u64,
    pub bits_per_message: u32,
    pub node_count: usize,
    pub cut_size: usize,
}

/// Builds the family graph for the instance, decides the gap predicate
/// with `alg` under the player-sliced executor, and maps the unanimous
/// node verdict back to the disjointness answer.
///
/// `bits = None` uses the `ceil(log2 |V|)` default. Errors on promise
/// violations, on budget exhaustion, and when nodes disagree.
pub fn reduction_protocol(
    params: &CodeParams,
    t: u32,
    instance: &DisjointnessInstance,
    family: GraphVariant,
    alg: &dyn AlgorithmSpec,
    bits: Option<u32>,
) -> Result<ReductionOutcome, SimError> {
    let ground_truth = match verify_promise(instance) {
        PromiseVerdict::UniquelyIntersecting(_) => Verdict::Intersecting,
        PromiseVerdict::PairwiseDisjoint => Verdict::PairwiseDisjoint,
        PromiseVerdict::PromiseViolated => return Err(SimError::PromiseViolated),
    };
    weighted_family_only(family, "reduction")?;
    let g = match family {
        GraphVariant::Linear => build_linear_instance(params, t, instance)?,
        _ => build_quadratic_instance(params, t, instance)?,
    };
    let n = g.node_count();
    let bits = bits.unwrap_or_else(|| default_bits(n));
    let budget = alg.round_budget(n);
    let transcript = multiparty_simulate(&g, alg, bits, budget)?;
    if !transcript.completed {
        return Err(SimError::NonTermination { budget });
    }

    let accepts = transcript.node_outputs.values().filter(|&&d| d != 0).count();
    let rejects = n - accepts;
    let verdict = if accepts == n {
        Verdict::Intersecting
    } else if rejects == n {
        Verdict::PairwiseDisjoint
    } else {
        return Err(SimError::VerdictSplit { accepts, rejects });
    };

    Ok(ReductionOutcome {
        family,
        algorithm: alg.name(),
        instance_digest: instance.digest(),
        verdict,
        ground_truth,
        matches: verdict == ground_truth,
        rounds: transcript.rounds_executed,
        blackboard_bits: transcript.blackboard_bits,
        bits_per_message: bits,
        node_count: n,
        cut_size: g.cut_size(),
    })
}

/// [`reduction_protocol`] with the gather-and-solve decider at the
/// family's own threshold.
pub fn default_reduction(
    params: &CodeParams,
    t: u32,
    instance: &DisjointnessInstance,
    family: GraphVariant,
    bits: Option<u32>,
) -> Result<ReductionOutcome, SimError> {
    let beta = gap_threshold(params, t, family)?;
    let gamma = gap_ratio(params, t, family)?;
    let alg = gather_and_solve_algorithm(beta, gamma);
    reduction_protocol(params, t, instance, family, &alg, bits)
}

/// Constant-free round-bound quantities for a constructed graph.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub family: GraphVariant,
    pub k: u64,
    /// The communication problem's input length: `k` for the linear
    /// family, `k^2` for the quadratic one.
    pub input_length: u64,
    pub t: u32,
    pub t_log2_t: f64,
    pub node_count: usize,
    pub log2_nodes: f64,
    pub cut_measured: usize,
    /// The asymptotically stated cut size `t^2 log^2 k`, for side-by-side
    /// comparison with the measured value.
    pub cut_stated: f64,
    pub cut_discrepancy: f64,
    pub bits_per_message: u32,
    /// `input_length / (t log2 t * |cut| * log2 |V|)`.
    pub ratio: f64,
}

/// Instantiates the round-bound ratio on measured quantities.
///
/// Undefined for `t < 2` (the `log t` factor vanishes) and for expanded
/// graphs (the input length is a property of the weighted families).
pub fn lower_bound_report(
    params: &CodeParams,
    t: u32,
    g: &LowerBoundGraph,
    bits: u32,
) -> Result<LowerBoundReport, SimError> {
    if g.params().describe() != params.describe() || g.t() != t {
        return Err(SimError::Unsupported {
            algorithm: "lower-bound report".into(),
            reason: "parameters do not match the graph".into(),
        });
    }
    if t < 2 {
        return Err(SimError::RatioUndefined {
            reason: "t log t vanishes for a single player".into(),
        });
    }
    let family = g.variant();
    let k = params.k();
    let input_length = match family {
        GraphVariant::Linear => k,
        GraphVariant::Quadratic => k * k,
        GraphVariant::UnweightedExpanded => {
            return Err(SimError::RatioUndefined {
                reason: "input length is a property of the weighted families".into(),
            })
        }
    };
    let t_log2_t = t as f64 * (t as f64).log2();
    let node_count = g.node_count();
    let log2_nodes = (node_count as f64).log2();
    let cut_measured = g.cut_size();
    let log2_k = (k as f64).log2();
    let cut_stated = (t as f64) * (t as f64) * log2_k * log2_k;
    Ok(LowerBoundReport {
        family,
        k,
        input_length,
        t,
        t_log2_t,
        node_count,
        log2_nodes,
        cut_measured,
        cut_stated,
        cut_discrepancy: cut_measured as f64 - cut_stated,
        bits_per_message: bits,
        ratio: input_length as f64 / (t_log2_t * cut_measured as f64 * log2_nodes),
    })
}
