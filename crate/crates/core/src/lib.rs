//! Construction-and-verification lab for multi-party lower-bound graph
//! families for approximate maximum independent set in the CONGEST model.
//!
//! The crate builds the weighted gadget graphs that tie the value of a
//! maximum-weight independent set to a t-player promise pairwise-disjointness
//! input, checks every structural property and weight threshold with an exact
//! solver, and replays the t-party shared-blackboard simulation with bit-exact
//! cost accounting.
//!
//! Module map:
//! - [`codegadget`]: the code-mapping `C : Sigma^alpha -> Sigma^(ell+alpha)`
//!   with pairwise Hamming distance >= ell that drives gadget geometry.
//! - [`instances`]: promise pairwise-disjointness input generation and
//!   classification.
//! - [`construct`]: the base graph, the fixed t-player graph, the weighted
//!   linear family, the quadratic family, and the unweighted expansion.
//! - [`oracle`]: exact MWIS (branch and bound over a clique cover), bipartite
//!   matching, and the property/claim verifiers.
//! - [`simulate`]: synchronous CONGEST runner, t-party blackboard harness,
//!   reference algorithms, and the end-to-end reduction protocol.
//! - [`cli`]: command implementations behind the `congest-lb` binary.

pub mod bits;
pub mod cli;
pub mod codegadget;
pub mod construct;
pub mod instances;
pub mod oracle;
pub mod simulate;
