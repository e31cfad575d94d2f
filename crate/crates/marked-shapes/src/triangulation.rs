//! The string model for simplices of triangulated cubes, and the
//! triangulation functor on finite marked cubical complexes.
//!
//! An `r`-simplex of the triangulated `n`-cube is a monotone map
//! `[r] → [1]^n`, identified with a string of length `n` over
//! `{1, …, r, ±∞}`: entry `i` records the first time coordinate `i` switches
//! from 0 to 1, with `+∞` for coordinates constant at 0 and `−∞` for those
//! constant at 1.  Simplicial operators act by precomposition and cubical
//! face maps by inserting `±∞`; a simplex is marked exactly when it has no
//! complete substring.

use crate::box_ops::{BoxMorphism, FaceNormalForm};
use crate::cubical_core::{CubeId, MarkedCubicalComplex, MarkedCubicalMap};
use crate::simplicial_core::{
    CellId, ComplexBuilder, FormalSimplex, MarkedSimplicialComplex, MarkedSimplicialMap,
    SimplicialOperator,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// One position of a simplex string: the switching time of a coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Entry {
    /// Coordinate constant at 1 (switched before time 0); printed `-`.
    MinusInf,
    /// Coordinate switches from 0 to 1 at time `p ∈ {1, …, r}`.
    Finite(usize),
    /// Coordinate constant at 0; printed `+`.
    PlusInf,
}

impl Entry {
    fn fmt_char(self) -> String {
        match self {
            Entry::MinusInf => "-".to_string(),
            Entry::PlusInf => "+".to_string(),
            Entry::Finite(v) => v.to_string(),
        }
    }
}

/// An `r`-simplex of the triangulated `n`-cube, as a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexString {
    r: usize,
    entries: Vec<Entry>,
}

impl SimplexString {
    /// Build from entries; finite values must lie in `{1, …, r}`.
    pub fn new(r: usize, entries: Vec<Entry>) -> Result<Self> {
        for e in &entries {
            if let Entry::Finite(v) = e {
                if *v == 0 || *v > r {
                    return Err(Error::IndexRange(format!(
                        "string entry {v} outside 1..={r}"
                    )));
                }
            }
        }
        Ok(SimplexString { r, entries })
    }

    /// The top simplex `ι_n = (1 2 … n)` of the triangulated `n`-cube.
    pub fn iota(n: usize) -> Self {
        SimplexString { r: n, entries: (1..=n).map(Entry::Finite).collect() }
    }

    /// Ambient cube dimension `n`.
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Simplex dimension `r`.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Entry at 1-based position `i`.
    pub fn entry(&self, i: usize) -> Entry {
        self.entries[i - 1]
    }

    /// The vertex visited at time `p ∈ {0, …, r}`, as a bit word.
    pub fn vertex(&self, p: usize) -> u32 {
        let mut out = 0u32;
        for (k, e) in self.entries.iter().enumerate() {
            let on = match e {
                Entry::MinusInf => true,
                Entry::PlusInf => false,
                Entry::Finite(v) => *v <= p,
            };
            if on {
                out |= 1 << k;
            }
        }
        out
    }

    /// Rebuild from the vertex path `[g(0), …, g(r)]` of a monotone map
    /// `[r] → [1]^n`.
    pub fn from_vertex_path(path: &[u32], n: usize) -> Result<Self> {
        if path.is_empty() {
            return Err(Error::IndexRange("empty vertex path".into()));
        }
        if path.windows(2).any(|w| w[0] & w[1] != w[0]) {
            return Err(Error::InvalidMap(format!("vertex path not monotone: {path:?}")));
        }
        let r = path.len() - 1;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let bit = |p: usize| (path[p] >> i) & 1 == 1;
            let e = if bit(0) {
                Entry::MinusInf
            } else if !bit(r) {
                Entry::PlusInf
            } else {
                Entry::Finite((1..=r).find(|&p| bit(p)).expect("switch time exists"))
            };
            entries.push(e);
        }
        Ok(SimplexString { r, entries })
    }

    /// Degenerate iff some value in `{1, …, r}` never occurs.
    pub fn is_degenerate(&self) -> bool {
        let mut seen = vec![false; self.r];
        for e in &self.entries {
            if let Entry::Finite(v) = e {
                seen[v - 1] = true;
            }
        }
        seen.into_iter().any(|s| !s)
    }

    /// Precompose with a simplicial operator `α : [q] → [r]`.
    pub fn act(&self, alpha: &SimplicialOperator) -> Result<SimplexString> {
        if alpha.target_dim() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                got: alpha.target_dim(),
            });
        }
        let q = alpha.source_dim();
        let entries = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::MinusInf => Entry::MinusInf,
                Entry::PlusInf => Entry::PlusInf,
                Entry::Finite(v) => {
                    if v > alpha.apply(q) {
                        Entry::PlusInf
                    } else if v <= alpha.apply(0) {
                        Entry::MinusInf
                    } else {
                        let p = (1..=q)
                            .find(|&p| alpha.apply(p - 1) < v && v <= alpha.apply(p))
                            .expect("monotone operator covers the interval");
                        Entry::Finite(p)
                    }
                }
            })
            .collect();
        Ok(SimplexString { r: q, entries })
    }

    /// The condensation: the unique non-degenerate `ψ` and epi `η` with
    /// `self = ψ · η`.
    pub fn condense(&self) -> (SimplexString, SimplicialOperator) {
        let mut present: Vec<usize> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Finite(v) => Some(*v),
                _ => None,
            })
            .collect();
        present.sort_unstable();
        present.dedup();
        let s = present.len();
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Finite(v) => Entry::Finite(
                    present.binary_search(v).expect("present value") + 1,
                ),
                other => *other,
            })
            .collect();
        let psi = SimplexString { r: s, entries };
        let eta_values = (0..=self.r)
            .map(|p| present.iter().filter(|&&v| v <= p).count())
            .collect();
        let eta = SimplicialOperator::new(eta_values, s).expect("condensation epi");
        (psi, eta)
    }

    /// All complete substrings: strictly increasing 1-based position tuples
    /// `(i_1, …, i_r)` with `entry(i_p) = p`.
    pub fn complete_substrings(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut acc = Vec::with_capacity(self.r);
        self.substring_search(1, 1, &mut acc, &mut out);
        out
    }

    fn substring_search(
        &self,
        p: usize,
        min_pos: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p > self.r {
            out.push(acc.clone());
            return;
        }
        for i in min_pos..=self.n() {
            if self.entry(i) == Entry::Finite(p) {
                acc.push(i);
                self.substring_search(p + 1, i + 1, acc, out);
                acc.pop();
            }
        }
    }

    /// Marked in the minimally marked triangulated cube iff it has no
    /// complete substring.
    pub fn is_marked(&self) -> bool {
        self.complete_substrings().is_empty()
    }

    /// If the simplex is linear — a unique complete substring, with every
    /// off-substring entry infinite — recover the face it is the image of.
    pub fn is_linear(&self) -> Option<FaceNormalForm> {
        let subs = self.complete_substrings();
        if subs.len() != 1 {
            return None;
        }
        let rho = &subs[0];
        let mut factors = Vec::new();
        for i in 1..=self.n() {
            if rho.contains(&i) {
                continue;
            }
            match self.entry(i) {
                Entry::PlusInf => factors.push((i, 0u8)),
                Entry::MinusInf => factors.push((i, 1u8)),
                Entry::Finite(_) => return None,
            }
        }
        factors.sort_by_key(|f| std::cmp::Reverse(f.0));
        Some(FaceNormalForm::new(self.n(), factors).expect("factors in range"))
    }

    /// One linearization per complete substring `ρ`: keep the substring
    /// positions as `1, …, r`, keep infinite entries, and send any other
    /// finite entry to `+∞` or `−∞` according to its side of `ρ_{φ_i}`.
    pub fn linearizations(&self) -> Vec<SimplexString> {
        self.complete_substrings()
            .into_iter()
            .map(|rho| {
                let entries = (1..=self.n())
                    .map(|i| {
                        if let Some(p) = rho.iter().position(|&x| x == i) {
                            return Entry::Finite(p + 1);
                        }
                        match self.entry(i) {
                            Entry::Finite(v) => {
                                if i < rho[v - 1] {
                                    Entry::PlusInf
                                } else {
                                    Entry::MinusInf
                                }
                            }
                            inf => inf,
                        }
                    })
                    .collect();
                SimplexString { r: self.r, entries }
            })
            .collect()
    }

    /// All `r`-simplices of the triangulated `n`-cube, i.e. all strings of
    /// length `n` over `{1, …, r, ±∞}`.
    pub fn enumerate(n: usize, r: usize) -> Vec<SimplexString> {
        let alphabet: Vec<Entry> = std::iter::once(Entry::MinusInf)
            .chain((1..=r).map(Entry::Finite))
            .chain(std::iter::once(Entry::PlusInf))
            .collect();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Entry>| {
                    alphabet.iter().map(move |e| {
                        let mut next = prefix.clone();
                        next.push(*e);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(|entries| SimplexString { r, entries }).collect()
    }
}

impl fmt::Display for SimplexString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.entries.iter().all(|e| match e {
            Entry::Finite(v) => *v <= 9,
            _ => true,
        });
        let body: String = if compact {
            self.entries.iter().map(|e| e.fmt_char()).collect()
        } else {
            let parts: Vec<String> = self.entries.iter().map(|e| e.fmt_char()).collect();
            parts.join(" ")
        };
        write!(f, "{}@{}", body, self.n())
    }
}

impl FromStr for SimplexString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = match s.rsplit_once('@') {
            Some((body, dim)) => {
                let n: usize = dim
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ambient dimension in `{s}`")))?;
                let tokens = tokenize_string_body(body)?;
                if tokens.len() != n {
                    return Err(Error::Parse(format!(
                        "string `{s}` has {} entries but declares ambient {n}",
                        tokens.len()
                    )));
                }
                tokens
            }
            None => tokenize_string_body(s)?,
        };
        let r = body
            .iter()
            .filter_map(|e| match e {
                Entry::Finite(v) => Some(*v),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        SimplexString::new(r, body)
    }
}

fn tokenize_string_body(body: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    if body.contains(char::is_whitespace) {
        for tok in body.split_whitespace() {
            out.push(parse_entry(tok)?);
        }
    } else {
        for c in body.chars() {
            out.push(parse_entry(&c.to_string())?);
        }
    }
    Ok(out)
}

fn parse_entry(tok: &str) -> Result<Entry> {
    match tok {
        "+" => Ok(Entry::PlusInf),
        "-" | "−" => Ok(Entry::MinusInf),
        _ => tok
            .parse::<usize>()
            .map(Entry::Finite)
            .map_err(|_| Error::Parse(format!("bad string entry `{tok}`"))),
    }
}

/// Precompose a string with a simplicial operator (see
/// [`SimplexString::act`]).
pub fn string_face(phi: &SimplexString, alpha: &SimplicialOperator) -> Result<SimplexString> {
    phi.act(alpha)
}

/// All complete substrings of a string (see
/// [`SimplexString::complete_substrings`]).
pub fn complete_substrings(phi: &SimplexString) -> Vec<Vec<usize>> {
    phi.complete_substrings()
}

/// The action of the cubical face `∂_{i,ε}` on strings: insert `+∞` (`ε=0`)
/// or `−∞` (`ε=1`) at position `i`, pushing later entries outward.
pub fn cubical_face_action(i: usize, eps: u8, phi: &SimplexString) -> Result<SimplexString> {
    let n = phi.n() + 1;
    if i == 0 || i > n || eps > 1 {
        return Err(Error::IndexRange(format!(
            "cubical face ({i},{eps}) into ambient {n}"
        )));
    }
    let mut entries = phi.entries().to_vec();
    entries.insert(i - 1, if eps == 0 { Entry::PlusInf } else { Entry::MinusInf });
    SimplexString::new(phi.r(), entries)
}

/// The action of an arbitrary box morphism on strings, by postcomposing the
/// monotone path with the vertex table.
pub fn box_action(f: &BoxMorphism, phi: &SimplexString) -> Result<SimplexString> {
    if f.source_dim() != phi.n() {
        return Err(Error::DimensionMismatch { expected: f.source_dim(), got: phi.n() });
    }
    let path: Vec<u32> = (0..=phi.r()).map(|p| f.apply(phi.vertex(p))).collect();
    SimplexString::from_vertex_path(&path, f.target_dim())
}

/// The linear simplex `ι_δ` of a face `δ : [1]^m → [1]^n`: the image of
/// `ι_m`, computed by inserting one infinite entry per factor.
pub fn linear_simplex(nf: &FaceNormalForm) -> SimplexString {
    let mut out = SimplexString::iota(nf.source_dim());
    for &(i, eps) in nf.factors().iter().rev() {
        out = cubical_face_action(i, eps, &out).expect("factor indices in range");
    }
    out
}

/// Recover the face a linear simplex is the image of (see
/// [`SimplexString::is_linear`]).
pub fn is_linear(phi: &SimplexString) -> Option<FaceNormalForm> {
    phi.is_linear()
}

/// All linearizations of a string (see [`SimplexString::linearizations`]).
pub fn linearizations(phi: &SimplexString) -> Vec<SimplexString> {
    phi.linearizations()
}

/// An interior simplex: all entries finite, none degenerate.
fn is_interior(phi: &SimplexString) -> bool {
    phi.entries().iter().all(|e| matches!(e, Entry::Finite(_)))
}

/// The non-degenerate simplices of the triangulated complex, as pairs of a
/// cube cell and an interior string over its dimension, in dimension order.
pub(crate) fn tri_pairs(x: &MarkedCubicalComplex) -> Vec<(CubeId, SimplexString)> {
    let mut pairs = Vec::new();
    for r in 0..=x.dim() {
        for dim in r..=x.dim() {
            for c in x.cells(dim) {
                for phi in SimplexString::enumerate(dim, r) {
                    if phi.r() == r && is_interior(&phi) && !phi.is_degenerate() {
                        pairs.push((c, phi));
                    }
                }
            }
        }
    }
    pairs
}

pub(crate) fn tri_index(
    pairs: &[(CubeId, SimplexString)],
) -> BTreeMap<(CubeId, SimplexString), CellId> {
    let mut index = BTreeMap::new();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, phi) in pairs {
        let dim = phi.r();
        let idx = counts.entry(dim).or_insert(0);
        index.insert((*c, phi.clone()), CellId { dim, idx: *idx });
        *idx += 1;
    }
    index
}

/// Split a string into the face of the cube it lies in (from its infinite
/// entries) and the interior string over that face.
fn strip_infinities(phi: &SimplexString) -> (FaceNormalForm, SimplexString) {
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for i in 1..=phi.n() {
        match phi.entry(i) {
            Entry::PlusInf => factors.push((i, 0u8)),
            Entry::MinusInf => factors.push((i, 1u8)),
            e => kept.push(e),
        }
    }
    factors.reverse();
    let nf = FaceNormalForm::new(phi.n(), factors).expect("positions in range");
    let interior = SimplexString::new(phi.r(), kept).expect("entries unchanged");
    (nf, interior)
}

/// Resolve an arbitrary string over the cube of a cell to the normalized
/// simplex of the triangulated complex it presents.
pub(crate) fn resolve_string(
    x: &MarkedCubicalComplex,
    index: &BTreeMap<(CubeId, SimplexString), CellId>,
    c: CubeId,
    phi: &SimplexString,
) -> FormalSimplex {
    let (psi, eta) = phi.condense();
    let (nf, interior) = strip_infinities(&psi);
    let fc = x.act(&x.formal(c), &nf.to_morphism());
    let transported = box_action(&fc.epi, &interior).expect("dimensions agree");
    let (psi2, eta2) = transported.condense();
    let cell = index[&(fc.cell, psi2)];
    let epi = eta2.compose(&eta).expect("dimensions agree");
    FormalSimplex { epi, cell }
}

/// Whether every cell of the complex is a face of a single ambient cube, so
/// that simplices can be named by global strings.
fn face_family_ambient(x: &MarkedCubicalComplex) -> Option<usize> {
    let mut ambient = None;
    for id in x.all_cells() {
        let nf: FaceNormalForm = x.name(id).parse().ok()?;
        if nf.source_dim() != id.dim {
            return None;
        }
        match ambient {
            None => ambient = Some(nf.ambient_dim()),
            Some(n) if n == nf.ambient_dim() => {}
            _ => return None,
        }
    }
    ambient
}

/// Triangulate a finite marked cubical complex.
///
/// Non-degenerate simplices are pairs of a cube cell and an interior string
/// over its dimension; a simplex is marked when its string has no complete
/// substring, when it is the top string of a marked cube, or when it is the
/// non-degenerate image of such a simplex under the gluing.
pub fn triangulate(x: &MarkedCubicalComplex) -> MarkedSimplicialComplex {
    let pairs = tri_pairs(x);
    let index = tri_index(&pairs);

    let mut marked: BTreeMap<CellId, bool> = BTreeMap::new();
    for (c, phi) in &pairs {
        let base = phi.is_marked() || (x.is_marked(*c) && *phi == SimplexString::iota(phi.n()));
        marked.insert(index[&(*c, phi.clone())], base && phi.r() >= 1);
    }
    // Marked boundary strings of a cube whose image stays non-degenerate
    // transfer their marking through the gluing.
    for dim in 1..=x.dim() {
        for c in x.cells(dim) {
            for r in 1..dim {
                for phi in SimplexString::enumerate(dim, r) {
                    if phi.r() != r
                        || is_interior(&phi)
                        || phi.is_degenerate()
                        || !phi.is_marked()
                    {
                        continue;
                    }
                    let image = resolve_string(x, &index, c, &phi);
                    if image.epi.is_identity() {
                        marked.insert(image.cell, true);
                    }
                }
            }
        }
    }

    let global_ambient = face_family_ambient(x);
    let mut builder = ComplexBuilder::new();
    for (c, phi) in &pairs {
        let r = phi.r();
        let faces = if r == 0 {
            Vec::new()
        } else {
            (0..=r)
                .map(|j| {
                    let alpha = SimplicialOperator::face(r, j).expect("face index in range");
                    let sub = phi.act(&alpha).expect("dimensions agree");
                    resolve_string(x, &index, *c, &sub)
                })
                .collect()
        };
        let name = match global_ambient {
            Some(_) => {
                let nf: FaceNormalForm = x.name(*c).parse().expect("checked face family");
                let mut global = phi.clone();
                for &(i, eps) in nf.factors().iter().rev() {
                    global = cubical_face_action(i, eps, &global).expect("factors in range");
                }
                global.to_string()
            }
            None => format!("{}:{}", x.name(*c), phi),
        };
        let id = builder.add_cell(r, name, faces, marked[&index[&(*c, phi.clone())]]);
        debug_assert_eq!(id, index[&(*c, phi.clone())]);
    }
    builder.build().expect("triangulation of a valid complex is valid")
}

/// Triangulate a map of marked cubical complexes.
pub fn triangulate_map(f: &MarkedCubicalMap) -> Result<MarkedSimplicialMap> {
    let dom = triangulate(f.dom());
    let cod = triangulate(f.cod());
    let dom_pairs = tri_pairs(f.dom());
    let cod_index = tri_index(&tri_pairs(f.cod()));
    let mut assignment: Vec<Vec<FormalSimplex>> = Vec::new();
    for (c, phi) in &dom_pairs {
        let fc = f.apply_cell(*c);
        let transported = box_action(&fc.epi, phi)?;
        let (psi2, eta2) = transported.condense();
        let cell = cod_index[&(fc.cell, psi2)];
        while assignment.len() <= phi.r() {
            assignment.push(Vec::new());
        }
        assignment[phi.r()].push(FormalSimplex { epi: eta2, cell });
    }
    MarkedSimplicialMap::new(&dom, &cod, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(lit: &str) -> SimplexString {
        lit.parse().unwrap()
    }

    fn face_op(r: usize, i: usize) -> SimplicialOperator {
        SimplicialOperator::face(r, i).unwrap()
    }

    #[test]
    fn elementary_faces_match_worked_strings() {
        let phi = s("123+-@5");
        assert_eq!(phi.r(), 3);
        assert_eq!(string_face(&phi, &face_op(3, 0)).unwrap(), s("-12+-@5"));
        assert_eq!(string_face(&phi, &face_op(3, 1)).unwrap(), s("112+-@5"));
        assert_eq!(string_face(&phi, &face_op(3, 2)).unwrap(), s("122+-@5"));
        assert_eq!(string_face(&phi, &face_op(3, 3)).unwrap(), s("12++-@5"));
    }

    #[test]
    fn substring_examples() {
        assert_eq!(complete_substrings(&s("13323@5")), vec![vec![1, 4, 5]]);
        assert!(complete_substrings(&s("14233@5")).is_empty());
        let iota = SimplexString::iota(4);
        assert_eq!(complete_substrings(&iota), vec![vec![1, 2, 3, 4]]);
        assert!(!iota.is_marked());
        assert!(s("14233@5").is_marked());
    }

    #[test]
    fn degeneracy_detection() {
        assert!(!s("123+-@5").is_degenerate());
        // Value 3 missing out of r = 4.
        let phi = SimplexString::new(
            4,
            vec![Entry::Finite(1), Entry::Finite(2), Entry::Finite(4)],
        )
        .unwrap();
        assert!(phi.is_degenerate());
        let (psi, eta) = phi.condense();
        assert!(!psi.is_degenerate());
        assert!(eta.is_epi());
        assert_eq!(psi.act(&eta).unwrap(), phi);
    }

    #[test]
    fn condensation_is_consistent_exhaustively() {
        for n in 0..=3 {
            for r in 0..=3 {
                for phi in SimplexString::enumerate(n, r) {
                    let (psi, eta) = phi.condense();
                    assert!(!psi.is_degenerate());
                    assert_eq!(psi.act(&eta).unwrap(), phi, "phi = {phi}");
                }
            }
        }
    }

    #[test]
    fn sections_recover_the_string() {
        for n in 0..=4 {
            for r in 0..=3 {
                for phi in SimplexString::enumerate(n, r) {
                    for i in 0..=r {
                        let sigma = SimplicialOperator::degeneracy(r, i).unwrap();
                        let up = phi.act(&sigma).unwrap();
                        let d0 = SimplicialOperator::face(r + 1, i).unwrap();
                        let d1 = SimplicialOperator::face(r + 1, i + 1).unwrap();
                        assert_eq!(up.act(&d0).unwrap(), phi);
                        assert_eq!(up.act(&d1).unwrap(), phi);
                    }
                }
            }
        }
    }

    #[test]
    fn action_is_functorial() {
        // φ·(α∘β) = (φ·α)·β on a grid of operators.
        for r in 0..=3usize {
            for phi in SimplexString::enumerate(3, r) {
                for i in 0..=r {
                    let alpha = face_op(r.max(1), i.min(r.max(1)));
                    if alpha.target_dim() != r {
                        continue;
                    }
                    for j in 0..=alpha.source_dim() {
                        let beta =
                            SimplicialOperator::degeneracy(alpha.source_dim(), j).unwrap();
                        let combined = alpha.compose(&beta).unwrap();
                        assert_eq!(
                            phi.act(&combined).unwrap(),
                            phi.act(&alpha).unwrap().act(&beta).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_faces_preserve_entry_order() {
        for r in 0..=3usize {
            for phi in SimplexString::enumerate(4, r) {
                for i in 0..=r {
                    if r == 0 {
                        continue;
                    }
                    let alpha = face_op(r, i);
                    let psi = phi.act(&alpha).unwrap();
                    for a in 1..=4usize {
                        for b in 1..=4usize {
                            if phi.entry(a) <= phi.entry(b) {
                                assert!(psi.entry(a) <= psi.entry(b));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn linear_simplices_from_faces() {
        assert_eq!(linear_simplex(&FaceNormalForm::identity(4)), SimplexString::iota(4));
        let nf: FaceNormalForm = "d5,0.d2,1.d1,0@6".parse().unwrap();
        assert_eq!(linear_simplex(&nf), s("+-12+3@6"));
        let nf: FaceNormalForm = "d2,0@3".parse().unwrap();
        assert_eq!(linear_simplex(&nf), s("1+2@3"));
    }

    #[test]
    fn linear_recovery() {
        assert_eq!(
            is_linear(&SimplexString::iota(3)),
            Some(FaceNormalForm::identity(3))
        );
        let nf: FaceNormalForm = "d5,0.d2,1.d1,0@6".parse().unwrap();
        assert_eq!(is_linear(&s("+-12+3@6")), Some(nf));
        assert_eq!(is_linear(&s("13323@5")), None);
    }

    #[test]
    fn linear_round_trip_exhaustive() {
        for n in 0..=5 {
            for nf in FaceNormalForm::enumerate(n) {
                let phi = linear_simplex(&nf);
                assert_eq!(is_linear(&phi), Some(nf.clone()), "face {nf}");
                // The same simplex arises from the semantic action.
                let via_action =
                    box_action(&nf.to_morphism(), &SimplexString::iota(nf.source_dim()))
                        .unwrap();
                assert_eq!(via_action, phi);
            }
        }
    }

    #[test]
    fn linearization_examples() {
        assert_eq!(linearizations(&s("21213@5")), vec![s("+12-3@5")]);
        assert_eq!(linearizations(&s("12-2@4")), vec![s("12--@4"), s("1+-2@4")]);
        let phi = SimplexString::new(
            1,
            vec![Entry::Finite(1), Entry::Finite(1), Entry::Finite(1)],
        )
        .unwrap();
        assert_eq!(
            linearizations(&phi),
            vec![s("1--@3"), s("+1-@3"), s("++1@3")]
        );
    }

    #[test]
    fn linearizations_are_linear() {
        for n in 0..=4 {
            for r in 0..=n {
                for phi in SimplexString::enumerate(n, r) {
                    for lin in linearizations(&phi) {
                        assert!(
                            is_linear(&lin).is_some(),
                            "linearization {lin} of {phi} not linear"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cubical_faces_insert_infinities() {
        let phi = SimplexString::iota(2);
        assert_eq!(cubical_face_action(2, 0, &phi).unwrap(), s("1+2@3"));
        assert_eq!(cubical_face_action(1, 1, &phi).unwrap(), s("-12@3"));
        // Insertion at position 1 with ε = 1 realizes the ∂_0-like pattern.
        let bottom = cubical_face_action(1, 1, &SimplexString::iota(3)).unwrap();
        assert_eq!(bottom, s("-123@4"));
    }

    #[test]
    fn cubical_faces_commute_with_linearization() {
        // On all 2-simplices of the triangulated square, inserting an
        // infinity commutes with taking linearizations.
        for phi in SimplexString::enumerate(2, 2) {
            for i in 1..=3usize {
                for eps in [0u8, 1] {
                    let inserted = cubical_face_action(i, eps, &phi).unwrap();
                    let mut lhs = linearizations(&inserted);
                    let mut rhs: Vec<SimplexString> = linearizations(&phi)
                        .into_iter()
                        .map(|l| cubical_face_action(i, eps, &l).unwrap())
                        .collect();
                    lhs.sort();
                    rhs.sort();
                    assert_eq!(lhs, rhs, "phi = {phi}, face ({i},{eps})");
                }
            }
        }
    }

    #[test]
    fn box_action_respects_composition() {
        let phi = s("1212@4");
        let f = BoxMorphism::degeneracy(4, 2).unwrap();
        let g = BoxMorphism::connection(3, 1, 0).unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(
            box_action(&gf, &phi).unwrap(),
            box_action(&g, &box_action(&f, &phi).unwrap()).unwrap()
        );
    }

    #[test]
    fn string_literals_round_trip() {
        for lit in ["12+-3@5", "id", "+-12+3@6", "111@3", "@0"] {
            if lit == "id" || lit == "@0" {
                continue;
            }
            let phi = s(lit);
            assert_eq!(phi.to_string(), lit.replace('−', "-"));
        }
        let empty: SimplexString = "@0".parse().unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.r(), 0);
    }

    use crate::cubical_core::{make_cube_object, CubicalStandard, MarkedCubicalMap};
    use crate::simplicial_core::{
        find_isomorphism, gray_tensor, make_standard, SimplicialStandard,
    };

    fn tcube(n: usize) -> MarkedSimplicialComplex {
        triangulate(&make_cube_object(CubicalStandard::Cube(n)).unwrap())
    }

    fn marked_count(x: &MarkedSimplicialComplex, dim: usize) -> usize {
        x.cells(dim).filter(|&id| x.is_marked(id)).count()
    }

    #[test]
    fn triangulated_cubes_have_the_right_cells() {
        let t2 = tcube(2);
        assert_eq!((0..=2).map(|d| t2.cell_count(d)).collect::<Vec<_>>(), [4, 5, 2]);
        let t3 = tcube(3);
        assert_eq!((0..=3).map(|d| t3.cell_count(d)).collect::<Vec<_>>(), [8, 19, 18, 6]);
        // In the minimal marking the marked top simplices are the
        // non-identity permutation strings.
        assert_eq!(marked_count(&t2, 2), 1);
        assert!(t2.is_marked(t2.find_cell("21@2").unwrap()));
        assert_eq!(marked_count(&t3, 3), 5);
        assert_eq!(marked_count(&t3, 1), 0);
    }

    #[test]
    fn triangulation_matches_the_simplicial_interval_powers() {
        let d1 = make_standard(SimplicialStandard::Delta(1)).unwrap();
        assert!(find_isomorphism(&tcube(1), &d1).is_some());
        let md1 = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let tm1 = triangulate(&make_cube_object(CubicalStandard::MCube(1)).unwrap());
        assert!(find_isomorphism(&tm1, &md1).is_some());
        // T□² agrees with Δ¹ ⊗ Δ¹, markings included.
        assert!(find_isomorphism(&tcube(2), &gray_tensor(&d1, &d1)).is_some());
    }

    #[test]
    fn marked_cube_triangulates_with_all_top_simplices_marked() {
        for n in 1..=3usize {
            let t = triangulate(&make_cube_object(CubicalStandard::MCube(n)).unwrap());
            let permutations: usize = (1..=n).product();
            assert_eq!(t.cell_count(n), permutations);
            assert_eq!(marked_count(&t, n), permutations, "n={n}");
        }
    }

    #[test]
    fn linear_simplices_of_comical_cubes_inherit_the_cube_marking() {
        for n in 1..=3usize {
            for i in 1..=n {
                for eps in [0u8, 1] {
                    let c = make_cube_object(CubicalStandard::Comical(n, i, eps)).unwrap();
                    let t = triangulate(&c);
                    for nf in FaceNormalForm::enumerate(n) {
                        if nf.source_dim() == 0 {
                            continue;
                        }
                        let cell = t.find_cell(&linear_simplex(&nf).to_string()).unwrap();
                        let cube = c.find_cell(&nf.to_string()).unwrap();
                        assert_eq!(t.is_marked(cell), c.is_marked(cube), "{nf} in ({n},{i},{eps})");
                    }
                }
            }
        }
    }

    #[test]
    fn triangulated_rezk_pasting() {
        let l = make_cube_object(CubicalStandard::LRezk(1, 1)).unwrap();
        let t = triangulate(&l);
        assert_eq!((0..=2).map(|d| t.cell_count(d)).collect::<Vec<_>>(), [6, 9, 4]);
        assert_eq!(marked_count(&t, 1), 4);
        assert_eq!(marked_count(&t, 2), 4);
    }

    #[test]
    fn triangulated_maps_keep_their_class() {
        let c1 = make_cube_object(CubicalStandard::Cube(1)).unwrap();
        let m1 = make_cube_object(CubicalStandard::MCube(1)).unwrap();
        let marker = MarkedCubicalMap::by_name_inclusion(&c1, &m1).unwrap();
        let t_marker = triangulate_map(&marker).unwrap();
        assert!(t_marker.is_entire());
        assert!(!t_marker.is_regular());

        let open = make_cube_object(CubicalStandard::OpenBox(2, 1, 0)).unwrap();
        let comical = make_cube_object(CubicalStandard::Comical(2, 1, 0)).unwrap();
        let inc = MarkedCubicalMap::by_name_inclusion(&open, &comical).unwrap();
        let t_inc = triangulate_map(&inc).unwrap();
        assert!(t_inc.is_mono());
        assert!(t_inc.is_regular());
    }
}
