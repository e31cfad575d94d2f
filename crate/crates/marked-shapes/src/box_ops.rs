//! The box category: generators, semantic composition, normal forms of face
//! maps, epi/face factorization, and the three involutions.
//!
//! Objects are the posets `[1]^n`; a morphism is stored as its full vertex
//! table, so equality and composition are semantic rather than syntactic.
//! Operator words in the literature are juxtapositions in *function order*:
//! the rightmost factor is applied first, and a cube `x` acted on the right
//! satisfies `x·(u∘v) = (x·u)·v`.  Face maps admit a unique decreasing
//! decomposition `∂_{i₁,ε₁}∘…∘∂_{i_k,ε_k}` with `i₁ > … > i_k`; equivalently,
//! factor `(i,ε)` pins *target coordinate* `i` to the constant `ε`, so a
//! normal form is the same data as a set of pinned coordinates with signs.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Hard cap on cube dimensions; vertex tables have `2^n` entries.
const MAX_DIM: usize = 20;

/// A single generating morphism of the box category.
///
/// Indices are 1-based as in the classical operator calculus.  The ambient
/// dimension is not stored; it is recovered from the position of the
/// generator inside a composite word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `∂_{i,ε} : [1]^{n-1} → [1]^n`, inserting the constant `ε` at
    /// coordinate `i`.
    Face { i: usize, eps: u8 },
    /// `σ_i : [1]^n → [1]^{n-1}`, dropping coordinate `i`.
    Degeneracy { i: usize },
    /// `γ_{i,ε} : [1]^n → [1]^{n-1}`, merging coordinates `i, i+1` by `max`
    /// (`ε = 0`) or `min` (`ε = 1`).
    Connection { i: usize, eps: u8 },
}

/// Which of the three canonical involutions of the box category to apply.
///
/// `Co` reverses the coordinate order, `CoOp` swaps the two endpoints of
/// every interval, and `Op` is their composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Involution {
    Co,
    CoOp,
    Op,
}

/// A morphism `[1]^m → [1]^n` of the box category.
///
/// The `vertex_table` assigns to each vertex of `[1]^m` (an `m`-bit word,
/// coordinate `i` stored in bit `i-1`) a vertex of `[1]^n`.  Equality,
/// hashing and ordering use only `(source_dim, target_dim, vertex_table)`;
/// the generator word is provenance.
#[derive(Debug, Clone)]
pub struct BoxMorphism {
    source_dim: usize,
    target_dim: usize,
    vertex_table: Vec<u32>,
    generator_word: Vec<Generator>,
}

impl PartialEq for BoxMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source_dim == other.source_dim
            && self.target_dim == other.target_dim
            && self.vertex_table == other.vertex_table
    }
}

impl Eq for BoxMorphism {}

impl PartialOrd for BoxMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoxMorphism {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.source_dim, self.target_dim, &self.vertex_table).cmp(&(
            other.source_dim,
            other.target_dim,
            &other.vertex_table,
        ))
    }
}

impl std::hash::Hash for BoxMorphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.source_dim.hash(state);
        self.target_dim.hash(state);
        self.vertex_table.hash(state);
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::IndexRange(format!("dimension {n} exceeds cap {MAX_DIM}")));
    }
    Ok(())
}

fn check_eps(eps: u8) -> Result<()> {
    if eps > 1 {
        return Err(Error::IndexRange(format!("sign {eps} must be 0 or 1")));
    }
    Ok(())
}

/// Low `k` bits set.
fn mask(k: usize) -> u32 {
    if k == 0 {
        0
    } else {
        (1u32 << k) - 1
    }
}

impl BoxMorphism {
    fn from_table(
        source_dim: usize,
        target_dim: usize,
        vertex_table: Vec<u32>,
        generator_word: Vec<Generator>,
    ) -> Self {
        debug_assert_eq!(vertex_table.len(), 1 << source_dim);
        debug_assert!(vertex_table.iter().all(|&v| v <= mask(target_dim)));
        BoxMorphism { source_dim, target_dim, vertex_table, generator_word }
    }

    /// The identity on `[1]^n`.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds cap {MAX_DIM}");
        Self::from_table(n, n, (0..1u32 << n).collect(), Vec::new())
    }

    /// The face `∂_{i,ε} : [1]^{n-1} → [1]^n`, for `1 ≤ i ≤ n`.
    pub fn face(n: usize, i: usize, eps: u8) -> Result<Self> {
        check_dim(n)?;
        check_eps(eps)?;
        if n == 0 || i == 0 || i > n {
            return Err(Error::IndexRange(format!("face index ({i},{eps}) in dimension {n}")));
        }
        let table = (0..1u32 << (n - 1))
            .map(|v| {
                let low = v & mask(i - 1);
                let high = v >> (i - 1);
                low | ((eps as u32) << (i - 1)) | (high << i)
            })
            .collect();
        Ok(Self::from_table(n - 1, n, table, vec![Generator::Face { i, eps }]))
    }

    /// The degeneracy `σ_i : [1]^n → [1]^{n-1}`, for `1 ≤ i ≤ n`.
    pub fn degeneracy(n: usize, i: usize) -> Result<Self> {
        check_dim(n)?;
        if n == 0 || i == 0 || i > n {
            return Err(Error::IndexRange(format!("degeneracy index {i} in dimension {n}")));
        }
        let table = (0..1u32 << n)
            .map(|v| {
                let low = v & mask(i - 1);
                let high = v >> i;
                low | (high << (i - 1))
            })
            .collect();
        Ok(Self::from_table(n, n - 1, table, vec![Generator::Degeneracy { i }]))
    }

    /// The connection `γ_{i,ε} : [1]^n → [1]^{n-1}`, for `1 ≤ i ≤ n-1`;
    /// `ε = 0` merges by `max`, `ε = 1` by `min`.
    pub fn connection(n: usize, i: usize, eps: u8) -> Result<Self> {
        check_dim(n)?;
        check_eps(eps)?;
        if n < 2 || i == 0 || i > n - 1 {
            return Err(Error::IndexRange(format!("connection index ({i},{eps}) in dimension {n}")));
        }
        let table = (0..1u32 << n)
            .map(|v| {
                let a = (v >> (i - 1)) & 1;
                let b = (v >> i) & 1;
                let merged = if eps == 0 { a | b } else { a & b };
                let low = v & mask(i - 1);
                let high = v >> (i + 1);
                low | (merged << (i - 1)) | (high << i)
            })
            .collect();
        Ok(Self::from_table(n, n - 1, table, vec![Generator::Connection { i, eps }]))
    }

    /// Build a single generator at the given source dimension.
    pub fn generator(source_dim: usize, g: Generator) -> Result<Self> {
        match g {
            Generator::Face { i, eps } => Self::face(source_dim + 1, i, eps),
            Generator::Degeneracy { i } => Self::degeneracy(source_dim, i),
            Generator::Connection { i, eps } => Self::connection(source_dim, i, eps),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// The generators this morphism was assembled from, outermost first.
    pub fn generator_word(&self) -> &[Generator] {
        &self.generator_word
    }

    /// Apply to a vertex of the source cube.
    pub fn apply(&self, v: u32) -> u32 {
        self.vertex_table[v as usize]
    }

    /// Semantic composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target_dim != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                got: inner.target_dim,
            });
        }
        let table = inner.vertex_table.iter().map(|&v| self.apply(v)).collect();
        let mut word = self.generator_word.clone();
        word.extend_from_slice(&inner.generator_word);
        Ok(Self::from_table(inner.source_dim, self.target_dim, table, word))
    }

    /// The monoidal product: `f ⊗ g` acts on the first `f.source_dim`
    /// coordinates by `f` and on the rest by `g`.
    pub fn product(&self, other: &Self) -> Self {
        let sd = self.source_dim + other.source_dim;
        assert!(sd <= MAX_DIM, "product dimension {sd} exceeds cap {MAX_DIM}");
        let table = (0..1u32 << sd)
            .map(|v| {
                let x = v & mask(self.source_dim);
                let y = v >> self.source_dim;
                self.apply(x) | (other.apply(y) << self.target_dim)
            })
            .collect();
        let mut word = self.generator_word.clone();
        word.extend(other.generator_word.iter().map(|g| match *g {
            Generator::Face { i, eps } => Generator::Face { i: i + self.source_dim, eps },
            Generator::Degeneracy { i } => Generator::Degeneracy { i: i + self.source_dim },
            Generator::Connection { i, eps } => {
                Generator::Connection { i: i + self.source_dim, eps }
            }
        }));
        Self::from_table(sd, self.target_dim + other.target_dim, table, word)
    }

    /// Whether the vertex table is monotone for the product order.
    pub fn is_monotone(&self) -> bool {
        (0..self.vertex_table.len() as u32).all(|v| {
            (0..self.source_dim).all(|b| {
                let w = v | (1 << b);
                w == v || (self.apply(v) & self.apply(w)) == self.apply(v)
            })
        })
    }

    /// Whether every vertex of the target is hit.
    pub fn is_surjective_on_vertices(&self) -> bool {
        let mut seen = vec![false; 1 << self.target_dim];
        for &v in &self.vertex_table {
            seen[v as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether two sources always map to two distinct targets.
    pub fn is_injective_on_vertices(&self) -> bool {
        let mut sorted = self.vertex_table.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Conjugate by the coordinate-order reversal and/or endpoint swap that
    /// realizes the requested involution.
    pub fn involute(&self, which: Involution) -> Self {
        let tf = |v: u32, dim: usize| -> u32 {
            match which {
                Involution::Co => reverse_bits(v, dim),
                Involution::CoOp => !v & mask(dim),
                Involution::Op => !reverse_bits(v, dim) & mask(dim),
            }
        };
        // Conjugation: involute(f) = tf_target ∘ f ∘ tf_source (each tf is an
        // involutive vertex bijection, so this is well defined).
        let table = (0..1u32 << self.source_dim)
            .map(|v| tf(self.apply(tf(v, self.source_dim)), self.target_dim))
            .collect();
        let word = involute_word(&self.generator_word, self.target_dim, which);
        Self::from_table(self.source_dim, self.target_dim, table, word)
    }
}

fn reverse_bits(v: u32, dim: usize) -> u32 {
    let mut out = 0;
    for b in 0..dim {
        if v & (1 << b) != 0 {
            out |= 1 << (dim - 1 - b);
        }
    }
    out
}

/// Rewrite a generator word through an involution, tracking the ambient
/// dimension of each factor from the target side: `co` sends `∂_{i,ε} ↦
/// ∂_{n+1-i,ε}`, `σ_i ↦ σ_{n+1-i}`, `γ_{i,ε} ↦ γ_{n+1-i,ε}` at ambient `n`,
/// while `co-op` flips the sign of faces and connections and fixes
/// degeneracies.
fn involute_word(word: &[Generator], target_dim: usize, which: Involution) -> Vec<Generator> {
    let mut out = Vec::with_capacity(word.len());
    let mut dim = target_dim; // target dimension of the next factor
    let flip = matches!(which, Involution::CoOp | Involution::Op);
    for g in word {
        let mapped = match *g {
            Generator::Face { i, eps } => {
                // ambient n = dim (target of this face)
                let ni = match which {
                    Involution::CoOp => i,
                    _ => dim + 1 - i,
                };
                let ne = if flip { 1 - eps } else { eps };
                dim -= 1;
                Generator::Face { i: ni, eps: ne }
            }
            Generator::Degeneracy { i } => {
                // superscript n = source dimension = dim + 1
                let n = dim + 1;
                let ni = match which {
                    Involution::CoOp => i,
                    _ => n + 1 - i,
                };
                dim += 1;
                Generator::Degeneracy { i: ni }
            }
            Generator::Connection { i, eps } => {
                let n = dim + 1;
                let ni = match which {
                    Involution::CoOp => i,
                    _ => n - i, // γ^n has indices 1..n-1; reversal sends i ↦ n-i
                };
                let ne = if flip { 1 - eps } else { eps };
                dim += 1;
                Generator::Connection { i: ni, eps: ne }
            }
        };
        out.push(mapped);
    }
    out
}

/// Semantic composition; `f` is applied first.
pub fn compose(g: &BoxMorphism, f: &BoxMorphism) -> Result<BoxMorphism> {
    g.compose(f)
}

/// A face map `[1]^m → [1]^n` in its unique decreasing decomposition.
///
/// Factor `(i, ε)` pins target coordinate `i` to the constant `ε`; the
/// remaining coordinates copy the source coordinates in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceNormalForm {
    ambient_dim: usize,
    factors: Vec<(usize, u8)>,
}

impl FaceNormalForm {
    /// Build from a strictly decreasing factor list.
    pub fn new(ambient_dim: usize, factors: Vec<(usize, u8)>) -> Result<Self> {
        check_dim(ambient_dim)?;
        for &(i, eps) in &factors {
            check_eps(eps)?;
            if i == 0 || i > ambient_dim {
                return Err(Error::IndexRange(format!(
                    "factor index {i} outside ambient dimension {ambient_dim}"
                )));
            }
        }
        if !factors.windows(2).all(|w| w[0].0 > w[1].0) {
            return Err(Error::NotAFace(format!(
                "factor indices not strictly decreasing: {factors:?}"
            )));
        }
        Ok(FaceNormalForm { ambient_dim, factors })
    }

    /// The identity face of `[1]^n` (empty factor list).
    pub fn identity(ambient_dim: usize) -> Self {
        FaceNormalForm { ambient_dim, factors: Vec::new() }
    }

    /// The elementary face `∂_{i,ε}` of `[1]^n`.
    pub fn elementary(ambient_dim: usize, i: usize, eps: u8) -> Result<Self> {
        Self::new(ambient_dim, vec![(i, eps)])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn source_dim(&self) -> usize {
        self.ambient_dim - self.factors.len()
    }

    /// Factors in decreasing index order.
    pub fn factors(&self) -> &[(usize, u8)] {
        &self.factors
    }

    /// The sign at which target coordinate `i` is pinned, if it is.
    pub fn pin(&self, i: usize) -> Option<u8> {
        self.factors.iter().find(|f| f.0 == i).map(|f| f.1)
    }

    /// Whether `(i, ε)` occurs among the factors.
    pub fn contains(&self, i: usize, eps: u8) -> bool {
        self.pin(i) == Some(eps)
    }

    /// Unpinned target coordinates, in increasing order; the `k`-th entry is
    /// the coordinate copying source coordinate `k+1`.
    pub fn free_coords(&self) -> Vec<usize> {
        (1..=self.ambient_dim).filter(|&i| self.pin(i).is_none()).collect()
    }

    /// Realize as a semantic morphism.
    pub fn to_morphism(&self) -> BoxMorphism {
        let free = self.free_coords();
        let m = free.len();
        let mut pinned = 0u32;
        for &(i, eps) in &self.factors {
            if eps == 1 {
                pinned |= 1 << (i - 1);
            }
        }
        let table = (0..1u32 << m)
            .map(|v| {
                let mut out = pinned;
                for (k, &c) in free.iter().enumerate() {
                    if v & (1 << k) != 0 {
                        out |= 1 << (c - 1);
                    }
                }
                out
            })
            .collect();
        let word = self
            .factors
            .iter()
            .map(|&(i, eps)| Generator::Face { i, eps })
            .collect();
        BoxMorphism::from_table(m, self.ambient_dim, table, word)
    }

    /// Extract the normal form of a face map, or report why the morphism is
    /// not one.  Constant target coordinates become factors; the remaining
    /// coordinates must copy the source coordinates in increasing order.
    pub fn from_morphism(f: &BoxMorphism) -> Result<Self> {
        let mut factors = Vec::new();
        let mut copied = Vec::new();
        for j in 1..=f.target_dim {
            let bit = |v: u32| (v >> (j - 1)) & 1;
            let first = bit(f.apply(0));
            if (0..1u32 << f.source_dim).all(|v| bit(f.apply(v)) == first) {
                factors.push((j, first as u8));
                continue;
            }
            // Non-constant: must copy exactly one source coordinate.
            let src = (0..f.source_dim).find(|&s| {
                (0..1u32 << f.source_dim).all(|v| bit(f.apply(v)) == ((v >> s) & 1))
            });
            match src {
                Some(s) => copied.push(s + 1),
                None => {
                    return Err(Error::NotAFace(format!(
                        "target coordinate {j} is neither constant nor a copy of a source coordinate"
                    )))
                }
            }
        }
        let expected: Vec<usize> = (1..=f.source_dim).collect();
        if copied != expected {
            return Err(Error::NotAFace(format!(
                "source coordinates used as {copied:?}, expected {expected:?}"
            )));
        }
        factors.sort_by_key(|f| std::cmp::Reverse(f.0));
        Self::new(f.target_dim, factors)
    }

    /// Compose `self ∘ inner` by identity rewriting: the concatenated factor
    /// word is normalized with `∂_{j,ε'}∘∂_{i,ε} = ∂_{i+1,ε}∘∂_{j,ε'}` for
    /// `j ≤ i`, bubbling each inner factor leftwards and shifting its index.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.ambient_dim != self.source_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim(),
                got: inner.ambient_dim,
            });
        }
        let mut out: Vec<(usize, u8)> = self.factors.clone();
        for &(i, eps) in &inner.factors {
            let mut v = i;
            let mut idx = out.len();
            while idx > 0 && out[idx - 1].0 <= v {
                v += 1;
                idx -= 1;
            }
            out.insert(idx, (v, eps));
        }
        Self::new(self.ambient_dim, out)
    }

    /// Apply an involution: `co` sends a pin `(i,ε)` to `(n+1-i,ε)`, `co-op`
    /// flips signs in place, `op` does both; factors are re-sorted.
    pub fn involute(&self, which: Involution) -> Self {
        let n = self.ambient_dim;
        let mut factors: Vec<(usize, u8)> = self
            .factors
            .iter()
            .map(|&(i, eps)| match which {
                Involution::Co => (n + 1 - i, eps),
                Involution::CoOp => (i, 1 - eps),
                Involution::Op => (n + 1 - i, 1 - eps),
            })
            .collect();
        factors.sort_by_key(|f| std::cmp::Reverse(f.0));
        FaceNormalForm { ambient_dim: n, factors }
    }

    /// All faces of `[1]^n`, identity included, in a fixed deterministic
    /// order (by source dimension descending, then factor list).
    pub fn enumerate(n: usize) -> Vec<FaceNormalForm> {
        let mut out = Vec::new();
        for pinset in 0..1u32 << n {
            let coords: Vec<usize> =
                (1..=n).filter(|&i| pinset & (1 << (i - 1)) != 0).collect();
            let k = coords.len();
            for signs in 0..1u32 << k {
                let mut factors: Vec<(usize, u8)> = coords
                    .iter()
                    .enumerate()
                    .map(|(t, &i)| (i, ((signs >> t) & 1) as u8))
                    .collect();
                factors.sort_by_key(|f| std::cmp::Reverse(f.0));
                out.push(FaceNormalForm { ambient_dim: n, factors });
            }
        }
        out.sort_by(|a, b| {
            (b.source_dim(), &a.factors).cmp(&(a.source_dim(), &b.factors))
        });
        out
    }

    /// All proper faces (at least one factor).
    pub fn enumerate_proper(n: usize) -> Vec<FaceNormalForm> {
        Self::enumerate(n).into_iter().filter(|f| !f.factors.is_empty()).collect()
    }
}

impl fmt::Display for FaceNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "id@{}", self.ambient_dim)
        } else {
            let parts: Vec<String> =
                self.factors.iter().map(|(i, e)| format!("d{i},{e}")).collect();
            write!(f, "{}@{}", parts.join("."), self.ambient_dim)
        }
    }
}

impl FromStr for FaceNormalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, dim) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("face literal `{s}` missing '@dim'")))?;
        let ambient: usize = dim
            .parse()
            .map_err(|_| Error::Parse(format!("bad ambient dimension in `{s}`")))?;
        if body == "id" || body.is_empty() {
            return Ok(FaceNormalForm::identity(ambient));
        }
        let mut factors = Vec::new();
        for part in body.split('.') {
            let rest = part
                .strip_prefix('d')
                .ok_or_else(|| Error::Parse(format!("face factor `{part}` must start with 'd'")))?;
            let (i, e) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("face factor `{part}` missing ','")))?;
            let i: usize =
                i.parse().map_err(|_| Error::Parse(format!("bad index in `{part}`")))?;
            let e: u8 =
                e.parse().map_err(|_| Error::Parse(format!("bad sign in `{part}`")))?;
            factors.push((i, e));
        }
        FaceNormalForm::new(ambient, factors)
    }
}

/// Extract the normal form of a face map (see
/// [`FaceNormalForm::from_morphism`]).
pub fn face_normal_form(f: &BoxMorphism) -> Result<FaceNormalForm> {
    FaceNormalForm::from_morphism(f)
}

/// Compose two face maps by identity rewriting (see
/// [`FaceNormalForm::compose`]).
pub fn face_compose(outer: &FaceNormalForm, inner: &FaceNormalForm) -> Result<FaceNormalForm> {
    outer.compose(inner)
}

/// Apply an involution to a face (see [`FaceNormalForm::involute`]).
pub fn involute(nf: &FaceNormalForm, which: Involution) -> FaceNormalForm {
    nf.involute(which)
}

/// Factor a morphism as `face ∘ epi`, where the face consists of the constant
/// target coordinates and the epi collects the others.  For morphisms built
/// from generators the epi part is a composite of degeneracies and
/// connections and in particular surjective on vertices.
pub fn ez_factor(f: &BoxMorphism) -> (BoxMorphism, FaceNormalForm) {
    let mut factors = Vec::new();
    let mut varying = Vec::new();
    for j in 1..=f.target_dim {
        let bit = |v: u32| (v >> (j - 1)) & 1;
        let first = bit(f.apply(0));
        if (0..1u32 << f.source_dim).all(|v| bit(f.apply(v)) == first) {
            factors.push((j, first as u8));
        } else {
            varying.push(j);
        }
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.0));
    let face = FaceNormalForm { ambient_dim: f.target_dim, factors };
    let k = varying.len();
    let table: Vec<u32> = (0..1u32 << f.source_dim)
        .map(|v| {
            let w = f.apply(v);
            let mut out = 0;
            for (t, &j) in varying.iter().enumerate() {
                if w & (1 << (j - 1)) != 0 {
                    out |= 1 << t;
                }
            }
            out
        })
        .collect();
    let mut epi = BoxMorphism::from_table(f.source_dim, k, table, Vec::new());
    debug_assert!(epi.is_surjective_on_vertices(), "epi part of {f:?} not surjective");
    if let Ok(word) = epi_word(&epi) {
        epi.generator_word = word;
    }
    (epi, face)
}

/// Decompose a vertex-surjective morphism generated by degeneracies and
/// connections into a concrete generator word, by repeatedly peeling an
/// innermost generator.  The choice of word is deterministic but not unique;
/// recomposing it always yields the original morphism.
pub fn epi_word(f: &BoxMorphism) -> Result<Vec<Generator>> {
    if f.source_dim == f.target_dim {
        let ident = BoxMorphism::identity(f.source_dim);
        if *f == ident {
            return Ok(Vec::new());
        }
        return Err(Error::NotGenerated(format!(
            "equal dimensions {} but not the identity",
            f.source_dim
        )));
    }
    if f.source_dim < f.target_dim {
        return Err(Error::NotGenerated("source dimension below target".into()));
    }
    let m = f.source_dim;
    let mut candidates = Vec::new();
    for i in 1..=m {
        candidates.push(Generator::Degeneracy { i });
    }
    for eps in [0u8, 1] {
        for i in 1..m {
            candidates.push(Generator::Connection { i, eps });
        }
    }
    for g in candidates {
        let s = BoxMorphism::generator(m, g).expect("candidate generator in range");
        // f factors through s iff f is constant on the fibers of s.
        let mut quotient = vec![u32::MAX; 1 << (m - 1)];
        let mut ok = true;
        for v in 0..1u32 << m {
            let sv = s.apply(v) as usize;
            let fv = f.apply(v);
            if quotient[sv] == u32::MAX {
                quotient[sv] = fv;
            } else if quotient[sv] != fv {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let rest = BoxMorphism::from_table(m - 1, f.target_dim, quotient, Vec::new());
        let mut word = epi_word(&rest)?;
        word.push(g);
        return Ok(word);
    }
    Err(Error::NotGenerated(format!(
        "no degeneracy or connection peels off a morphism [1]^{} → [1]^{}",
        f.source_dim, f.target_dim
    )))
}

/// Recompose a generator word into a morphism, given the source dimension.
pub fn word_to_morphism(source_dim: usize, word: &[Generator]) -> Result<BoxMorphism> {
    let mut out = BoxMorphism::identity(source_dim);
    for g in word.iter().rev() {
        let step = BoxMorphism::generator(out.target_dim, *g)?;
        out = step.compose(&out)?;
    }
    Ok(out)
}
