//! The code-mapping behind the gadget cliques.
//!
//! A code-mapping `C : [k] -> Sigma^(ell+alpha)` assigns each of the
//! `k = (ell+alpha)^alpha` messages a word of `ell+alpha` symbols over the
//! alphabet `Sigma = [ell+alpha]`, such that distinct words agree in at most
//! `alpha` positions (pairwise Hamming distance >= ell). Two backends are
//! provided: Reed-Solomon polynomial evaluation over GF(ell+alpha), and an
//! explicit validated table for hand-picked small codes.

pub mod gf;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use gf::Gf;

/// Guard for exhaustive pairwise-distance enumeration.
pub const DISTANCE_GUARD: u64 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("ell and alpha must both be >= 1 (got ell={ell}, alpha={alpha})")]
    NonPositiveParam { ell: u32, alpha: u32 },
    #[error("ell={ell} <= alpha={alpha} needs allow_tiny (distance ell no longer dominates agreements)")]
    TinyParams { ell: u32, alpha: u32 },
    #[error("q = ell+alpha = {q} is not a prime power, required by the reed_solomon backend")]
    NonPrimePower { q: u64 },
    #[error("k = {q}^{alpha} overflows")]
    KOverflow { q: u64, alpha: u32 },
    #[error("message index {m} out of range [1, {k}]")]
    MessageOutOfRange { m: u64, k: u64 },
    #[error("explicit table has {got} codewords, expected k = {want}")]
    TableWrongSize { got: usize, want: u64 },
    #[error("explicit table word {index}: {reason}")]
    TableBadWord { index: usize, reason: String },
    #[error("explicit table words {m1} and {m2} are at distance {distance} < ell = {ell}")]
    TableDistance { m1: u64, m2: u64, distance: u32, ell: u32 },
    #[error("pairwise distance enumeration needs k <= {guard}, got k = {k}")]
    DistanceGuard { k: u64, guard: u64 },
}

/// One word of the code: `ell+alpha` symbols, each in `[1, ell+alpha]`,
/// position `h` (1-based) naming the node chosen inside clique `C_h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(pub Vec<u32>);

impl Codeword {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    /// Symbol at 1-based position `h`.
    pub fn symbol(&self, h: u32) -> u32 {
        self.0[h as usize - 1]
    }

    /// Hamming distance; panics on length mismatch.
    pub fn distance(&self, other: &Codeword) -> u32 {
        assert_eq!(self.len(), other.len(), "codeword length mismatch");
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count() as u32
    }

    /// Number of positions where the words agree.
    pub fn agreement(&self, other: &Codeword) -> u32 {
        self.len() as u32 - self.distance(other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    ReedSolomon,
    ExplicitTable,
}

/// Backend selector passed to [`make_params`].
#[derive(Debug, Clone)]
pub enum Backend {
    ReedSolomon,
    ExplicitTable(Vec<Codeword>),
}

/// Validated code parameters; immutable, cheap to clone, thread-safe.
#[derive(Clone)]
pub struct CodeParams {
    ell: u32,
    alpha: u32,
    k: u64,
    kind: BackendKind,
    field: Option<Arc<Gf>>,
    table: Option<Arc<Vec<Codeword>>>,
}

impl std::fmt::Debug for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeParams")
            .field("ell", &self.ell)
            .field("alpha", &self.alpha)
            .field("q", &self.sigma_size())
            .field("k", &self.k)
            .field("backend", &self.kind)
            .finish()
    }
}

impl CodeParams {
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Codeword length `M = ell + alpha`.
    pub fn m_len(&self) -> u32 {
        self.ell + self.alpha
    }

    /// Alphabet size; equal to the codeword length in this construction.
    pub fn sigma_size(&self) -> u32 {
        self.ell + self.alpha
    }

    /// Message count `k = (ell+alpha)^alpha`.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn backend_kind(&self) -> BackendKind {
        self.kind
    }

    /// Encodes message `m` in `[1, k]`.
    pub fn encode(&self, m: u64) -> Result<Codeword, CodeError> {
        if m < 1 || m > self.k {
            return Err(CodeError::MessageOutOfRange { m, k: self.k });
        }
        match self.kind {
            BackendKind::ExplicitTable => {
                Ok(self.table.as_ref().unwrap()[m as usize - 1].clone())
            }
            BackendKind::ReedSolomon => {
                let f = self.field.as_ref().unwrap();
                let q = f.order();
                // m-1 in base q, least significant digit first, as the
                // coefficients of a polynomial of degree < alpha.
                let mut coeffs = Vec::with_capacity(self.alpha as usize);
                let mut v = m - 1;
                for _ in 0..self.alpha {
                    coeffs.push(v % q);
                    v /= q;
                }
                // Evaluate at every field element; symbol = element index + 1.
                let word = (0..q)
                    .map(|x| {
                        let mut acc = 0u64;
                        for &c in coeffs.iter().rev() {
                            acc = f.add(f.mul(acc, x), c);
                        }
                        acc as u32 + 1
                    })
                    .collect();
                Ok(Codeword(word))
            }
        }
    }

    /// Minimum Hamming distance over all pairs of distinct messages,
    /// exhaustively (guarded by [`DISTANCE_GUARD`]).
    pub fn min_pairwise_distance(&self) -> Result<u32, CodeError> {
        if self.k > DISTANCE_GUARD {
            return Err(CodeError::DistanceGuard {
                k: self.k,
                guard: DISTANCE_GUARD,
            });
        }
        let words: Vec<Codeword> = (1..=self.k)
            .map(|m| self.encode(m))
            .collect::<Result<_, _>>()?;
        let mut min = self.m_len();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                min = min.min(words[i].distance(&words[j]));
            }
        }
        Ok(min)
    }

    /// Summary for reports and graph exports.
    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "ell": self.ell,
            "alpha": self.alpha,
            "q": self.sigma_size(),
            "k": self.k,
            "backend": self.kind,
        })
    }
}

/// Validates `(ell, alpha)` and the backend, returning frozen parameters.
///
/// `allow_tiny` permits `ell <= alpha`, where the distance guarantee no
/// longer beats the agreement count; useful only for worked micro-examples.
pub fn make_params(
    ell: u32,
    alpha: u32,
    backend: Backend,
    allow_tiny: bool,
) -> Result<CodeParams, CodeError> {
    if ell < 1 || alpha < 1 {
        return Err(CodeError::NonPositiveParam { ell, alpha });
    }
    if ell <= alpha && !allow_tiny {
        return Err(CodeError::TinyParams { ell, alpha });
    }
    let q = (ell + alpha) as u64;
    let k = q
        .checked_pow(alpha)
        .ok_or(CodeError::KOverflow { q, alpha })?;
    match backend {
        Backend::ReedSolomon => {
            let field = Gf::new(q).ok_or(CodeError::NonPrimePower { q })?;
            Ok(CodeParams {
                ell,
                alpha,
                k,
                kind: BackendKind::ReedSolomon,
                field: Some(Arc::new(field)),
                table: None,
            })
        }
        Backend::ExplicitTable(words) => {
            validate_table(ell, alpha, k, &words)?;
            Ok(CodeParams {
                ell,
                alpha,
                k,
                kind: BackendKind::ExplicitTable,
                field: None,
                table: Some(Arc::new(words)),
            })
        }
    }
}

fn validate_table(ell: u32, alpha: u32, k: u64, words: &[Codeword]) -> Result<(), CodeError> {
    let q = ell + alpha;
    if words.len() as u64 != k {
        return Err(CodeError::TableWrongSize {
            got: words.len(),
            want: k,
        });
    }
    for (i, w) in words.iter().enumerate() {
        if w.len() != q as usize {
            return Err(CodeError::TableBadWord {
                index: i + 1,
                reason: format!("length {} != {}", w.len(), q),
            });
        }
        if let Some(&s) = w.symbols().iter().find(|&&s| s < 1 || s > q) {
            return Err(CodeError::TableBadWord {
                index: i + 1,
                reason: format!("symbol {s} outside [1, {q}]"),
            });
        }
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let d = words[i].distance(&words[j]);
            if d < ell {
                return Err(CodeError::TableDistance {
                    m1: i as u64 + 1,
                    m2: j as u64 + 1,
                    distance: d,
                    ell,
                });
            }
        }
    }
    Ok(())
}

/// The cyclic-shift code over `[q]`: word `m` maps position `h` to
/// `((h + m - 1) mod q) + 1`. Distinct shifts disagree everywhere, so the
/// distance is `q`; with `alpha = 1` this realizes the worked `q = 3`
/// example table `C(1) = (2,3,1)`, `C(2) = (3,1,2)`, `C(3) = (1,2,3)`.
pub fn cyclic_shift_table(q: u32) -> Vec<Codeword> {
    (1..=q)
        .map(|m| Codeword((1..=q).map(|h| (h + m - 1) % q + 1).collect()))
        .collect()
}

/// Parses an explicit table from a JSON array of arrays of 1-based symbols.
pub fn table_from_json(json: &str) -> Result<Vec<Codeword>, serde_json::Error> {
    serde_json::from_str(json)
}
