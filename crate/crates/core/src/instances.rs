//! Promise pairwise-disjointness inputs for t players.
//!
//! An instance is t bit-strings of equal length (k for the linear family,
//! k² for the quadratic family). The promise admits exactly two shapes:
//! either all strings share a single common 1-position and are disjoint
//! everywhere else (uniquely intersecting), or the supports are pairwise
//! disjoint. Generators only ever emit promise-respecting instances;
//! [`verify_promise`] classifies arbitrary ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::{BitString, BitStringError};

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("player count must be >= 1, got {0}")]
    NoPlayers(u32),
    #[error("uniquely-intersecting instances need t >= 2 players, got {0}")]
    TooFewPlayers(u32),
    #[error("string length must be >= 1, got {0}")]
    EmptyStrings(usize),
    #[error("common index {index} out of range [1, {len}]")]
    CommonIndexOutOfRange { index: usize, len: usize },
    #[error("fill density {0} must be a number in [0, 1]")]
    BadDensity(f64),
    #[error("pair component {value} out of range [1, {k}]")]
    PairOutOfRange { value: u64, k: u64 },
    #[error("flat index {flat} out of range [1, {square}] for k = {k}")]
    FlatOutOfRange { flat: u64, k: u64, square: u64 },
    #[error("instance declares {t} players but carries {got} strings")]
    StringCountMismatch { t: u32, got: usize },
    #[error("string {index} has {got} bits, expected {want}")]
    StringLengthMismatch { index: usize, got: usize, want: usize },
    #[error("quadratic shape with k = {k} requires len = {want}, got {len}")]
    QuadraticLength { k: u64, want: u64, len: usize },
    #[error(transparent)]
    Bits(#[from] BitStringError),
}

/// String-indexing shape: positions are plain indices in `[k]`, or row-major
/// pairs `(m1, m2)` over `[k] x [k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "shape", content = "k")]
pub enum InstanceShape {
    Linear,
    Quadratic(u64),
}

/// The t player inputs. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessInstance {
    t: u32,
    len: usize,
    shape: InstanceShape,
    strings: Vec<BitString>,
}

/// Classification of an instance against the promise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum PromiseVerdict {
    /// Exactly one index is 1 for every player and no other index is shared
    /// by any two players; carries the 1-based common index.
    UniquelyIntersecting(usize),
    PairwiseDisjoint,
    PromiseViolated,
}

impl DisjointnessInstance {
    /// Builds an instance from explicit strings, validating counts, lengths,
    /// and the quadratic `len = k²` requirement. `t = 1` is permitted for
    /// the degenerate single-player base cases.
    pub fn new(
        shape: InstanceShape,
        strings: Vec<BitString>,
    ) -> Result<DisjointnessInstance, InstanceError> {
        let t = strings.len() as u32;
        if t == 0 {
            return Err(InstanceError::NoPlayers(0));
        }
        let len = strings[0].len();
        if len == 0 {
            return Err(InstanceError::EmptyStrings(0));
        }
        for (i, s) in strings.iter().enumerate() {
            if s.len() != len {
                return Err(InstanceError::StringLengthMismatch {
                    index: i + 1,
                    got: s.len(),
                    want: len,
                });
            }
        }
        if let InstanceShape::Quadratic(k) = shape {
            let want = k * k;
            if len as u64 != want {
                return Err(InstanceError::QuadraticLength { k, want, len });
            }
        }
        Ok(DisjointnessInstance {
            t,
            len,
            shape,
            strings,
        })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn shape(&self) -> InstanceShape {
        self.shape
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    /// Player `i`'s string, 1-based.
    pub fn string(&self, i: u32) -> &BitString {
        &self.strings[i as usize - 1]
    }

    /// Bit of player `i` (1-based) at position `pos` (1-based).
    pub fn bit(&self, i: u32, pos: usize) -> bool {
        self.string(i).get(pos - 1)
    }

    /// Short content hash used to key report records.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&InstanceDto::from(self)).unwrap());
        let out = hasher.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Wire format: `{ t, len, shape, k (quadratic only), strings: [hex...] }`.
#[derive(Serialize, Deserialize)]
struct InstanceDto {
    t: u32,
    len: usize,
    #[serde(flatten)]
    shape: InstanceShape,
    strings: Vec<String>,
}

impl From<&DisjointnessInstance> for InstanceDto {
    fn from(inst: &DisjointnessInstance) -> Self {
        InstanceDto {
            t: inst.t,
            len: inst.len,
            shape: inst.shape,
            strings: inst.strings.iter().map(|s| s.to_hex()).collect(),
        }
    }
}

impl Serialize for DisjointnessInstance {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        InstanceDto::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DisjointnessInstance {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let dto = InstanceDto::deserialize(de)?;
        let strings = dto
            .strings
            .iter()
            .map(|h| BitString::from_hex(dto.len, h))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        if dto.t as usize != strings.len() {
            return Err(serde::de::Error::custom(InstanceError::StringCountMismatch {
                t: dto.t,
                got: strings.len(),
            }));
        }
        DisjointnessInstance::new(dto.shape, strings).map_err(serde::de::Error::custom)
    }
}

fn check_density(density: f64) -> Result<(), InstanceError> {
    if !(0.0..=1.0).contains(&density) || density.is_nan() {
        return Err(InstanceError::BadDensity(density));
    }
    Ok(())
}

/// Scatters extra disjoint 1-bits: each position in `open` independently
/// becomes a 1 for one uniformly chosen player with probability `density`.
fn scatter(
    strings: &mut [BitString],
    open: impl Iterator<Item = usize>,
    density: f64,
    rng: &mut ChaCha8Rng,
) {
    let t = strings.len();
    for pos in open {
        if density > 0.0 && rng.gen_bool(density) {
            let player = rng.gen_range(0..t);
            strings[player].set(pos, true);
        }
    }
}

/// Uniquely-intersecting instance: every player holds a 1 at `common_index`
/// (1-based) and the remaining 1-bits have pairwise-disjoint supports.
/// Requires `t >= 2`; a lone player cannot share an index with anyone.
pub fn make_intersecting(
    t: u32,
    len: usize,
    shape: InstanceShape,
    common_index: usize,
    fill_density: f64,
    seed: u64,
) -> Result<DisjointnessInstance, InstanceError> {
    if t < 2 {
        return Err(InstanceError::TooFewPlayers(t));
    }
    if common_index < 1 || common_index > len {
        return Err(InstanceError::CommonIndexOutOfRange {
            index: common_index,
            len,
        });
    }
    check_density(fill_density)?;
    let mut strings = vec![BitString::zeros(len); t as usize];
    for s in strings.iter_mut() {
        s.set(common_index - 1, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    scatter(
        &mut strings,
        (0..len).filter(|&p| p != common_index - 1),
        fill_density,
        &mut rng,
    );
    DisjointnessInstance::new(shape, strings)
}

/// Pairwise-disjoint instance: no position is 1 for two distinct players.
pub fn make_pairwise_disjoint(
    t: u32,
    len: usize,
    shape: InstanceShape,
    fill_density: f64,
    seed: u64,
) -> Result<DisjointnessInstance, InstanceError> {
    if t == 0 {
        return Err(InstanceError::NoPlayers(t));
    }
    if len == 0 {
        return Err(InstanceError::EmptyStrings(len));
    }
    check_density(fill_density)?;
    let mut strings = vec![BitString::zeros(len); t as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    scatter(&mut strings, 0..len, fill_density, &mut rng);
    DisjointnessInstance::new(shape, strings)
}

/// Classifies an instance: pairwise disjoint when no two strings share a
/// 1-position; uniquely intersecting when exactly one position is 1 for all
/// players and every pairwise intersection equals exactly that position;
/// [`PromiseVerdict::PromiseViolated`] otherwise (diagnostic only).
///
/// With a single player there are no pairs, so every `t = 1` instance is
/// vacuously pairwise disjoint — the shape expected by the single-player
/// base cases of the weight-bound verifiers.
pub fn verify_promise(inst: &DisjointnessInstance) -> PromiseVerdict {
    let t = inst.t as usize;
    let strings = &inst.strings;
    let mut shared: Option<usize> = None;
    for i in 0..t {
        for j in i + 1..t {
            for pos in strings[i].intersection(&strings[j]) {
                match shared {
                    None => shared = Some(pos),
                    Some(p) if p == pos => {}
                    Some(_) => return PromiseVerdict::PromiseViolated,
                }
            }
        }
    }
    match shared {
        None => PromiseVerdict::PairwiseDisjoint,
        Some(pos) => {
            // Single shared position overall; uniquely intersecting requires
            // every player to hold it (trivial at t = 2, where the sharing
            // pair is all players).
            if (0..t).all(|i| strings[i].get(pos)) {
                PromiseVerdict::UniquelyIntersecting(pos + 1)
            } else {
                PromiseVerdict::PromiseViolated
            }
        }
    }
}

/// Row-major flattening of `(m1, m2)` in `[k] x [k]` to `[k²]`, 1-based.
pub fn pair_index(k: u64, m1: u64, m2: u64) -> Result<u64, InstanceError> {
    for value in [m1, m2] {
        if value < 1 || value > k {
            return Err(InstanceError::PairOutOfRange { value, k });
        }
    }
    Ok((m1 - 1) * k + m2)
}

/// Inverse of [`pair_index`].
pub fn unpair_index(k: u64, flat: u64) -> Result<(u64, u64), InstanceError> {
    let square = k * k;
    if flat < 1 || flat > square {
        return Err(InstanceError::FlatOutOfRange { flat, k, square });
    }
    Ok(((flat - 1) / k + 1, (flat - 1) % k + 1))
}
