//! Marked simplicial complexes: the operator calculus on finite ordinals,
//! an engine for finite marked simplicial sets presented by non-degenerate
//! cells, the standard complexes, and the saturation/lifting machinery.
//!
//! A complex stores one record per non-degenerate simplex; every other
//! simplex is a pair (degeneracy operator, cell).  Face maps are recorded in
//! that normalized form, so all operator actions stay within the finite
//! presentation.  Degenerate simplices count as marked throughout, and
//! 0-simplices are never marked.

use crate::{Error, Result};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A monotone map `[q] → [r]` between finite ordinals, stored as the image
/// list `values = [α(0), …, α(q)]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplicialOperator {
    values: Vec<usize>,
    target: usize,
}

impl SimplicialOperator {
    /// Build from an explicit image list; rejects empty, non-monotone or
    /// out-of-range data.
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::IndexRange("operator with empty source".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::IndexRange(format!("operator values not monotone: {values:?}")));
        }
        if *values.last().unwrap() > target {
            return Err(Error::IndexRange(format!(
                "operator value {} exceeds target {target}",
                values.last().unwrap()
            )));
        }
        Ok(SimplicialOperator { values, target })
    }

    /// The identity of `[r]`.
    pub fn identity(r: usize) -> Self {
        SimplicialOperator { values: (0..=r).collect(), target: r }
    }

    /// The coface `δ_i : [r-1] → [r]` skipping `i`, for `0 ≤ i ≤ r ≥ 1`.
    pub fn face(r: usize, i: usize) -> Result<Self> {
        if r == 0 || i > r {
            return Err(Error::IndexRange(format!("coface index {i} in [{r}]")));
        }
        Ok(SimplicialOperator {
            values: (0..=r).filter(|&v| v != i).collect(),
            target: r,
        })
    }

    /// The codegeneracy `σ_i : [r+1] → [r]` repeating `i`, for `0 ≤ i ≤ r`.
    pub fn degeneracy(r: usize, i: usize) -> Result<Self> {
        if i > r {
            return Err(Error::IndexRange(format!("codegeneracy index {i} in [{r}]")));
        }
        let mut values = Vec::with_capacity(r + 2);
        for v in 0..=r {
            values.push(v);
            if v == i {
                values.push(v);
            }
        }
        Ok(SimplicialOperator { values, target: r })
    }

    /// Source dimension `q` of `[q] → [r]`.
    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    /// Target dimension `r` of `[q] → [r]`.
    pub fn target_dim(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, p: usize) -> usize {
        self.values[p]
    }

    /// Composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target != self.source_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim(),
                got: inner.target,
            });
        }
        Ok(SimplicialOperator {
            values: inner.values.iter().map(|&v| self.values[v]).collect(),
            target: self.target,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim() == self.target && self.values.iter().enumerate().all(|(p, &v)| p == v)
    }

    /// Injective, i.e. strictly increasing.
    pub fn is_mono(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// Surjective onto `[r]`.
    pub fn is_epi(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// The unique epi-mono factorization `self = mono ∘ epi`.
    pub fn ez_factor(&self) -> (SimplicialOperator, SimplicialOperator) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let epi_values = self
            .values
            .iter()
            .map(|v| image.binary_search(v).expect("value is in its own image"))
            .collect();
        let s = image.len() - 1;
        let epi = SimplicialOperator { values: epi_values, target: s };
        let mono = SimplicialOperator { values: image, target: self.target };
        (epi, mono)
    }

    /// For an epi `[q] ↠ [r]`: the sorted list of `i < q` with
    /// `α(i) = α(i+1)`.  Together with `r` this determines the epi.
    pub fn collapse_set(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(i, _)| i)
            .collect()
    }

    /// Rebuild an epi onto `[r]` from its collapse set.
    pub fn from_collapse_set(r: usize, collapses: &[usize]) -> Result<Self> {
        let q = r + collapses.len();
        let mut values = Vec::with_capacity(q + 1);
        let mut v = 0usize;
        for p in 0..=q {
            values.push(v);
            if !collapses.contains(&p) {
                v += 1;
            }
        }
        if *values.last().unwrap() != r {
            return Err(Error::IndexRange(format!(
                "collapse set {collapses:?} does not yield an epi onto [{r}]"
            )));
        }
        Self::new(values, r)
    }

    /// For a mono `[s] ↪ [r]`: the values of `[r]` not in the image, in
    /// decreasing order (the coface indices of the canonical decomposition).
    pub fn missing_values(&self) -> Vec<usize> {
        (0..=self.target).rev().filter(|v| !self.values.contains(v)).collect()
    }

    /// The reversal `α^op` with `α^op(i) = r − α(q − i)`.
    pub fn reverse(&self) -> Self {
        let q = self.source_dim();
        SimplicialOperator {
            values: (0..=q).map(|i| self.target - self.values[q - i]).collect(),
            target: self.target,
        }
    }

    /// The front face `⊲ : [p] → [p+q]`, `i ↦ i`.
    pub fn front_face(p: usize, q: usize) -> Self {
        SimplicialOperator { values: (0..=p).collect(), target: p + q }
    }

    /// The back face `⊳ : [q] → [p+q]`, `i ↦ p+i`.
    pub fn back_face(p: usize, q: usize) -> Self {
        SimplicialOperator { values: (p..=p + q).collect(), target: p + q }
    }
}

impl fmt::Display for SimplicialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]->{}", vals.join(","), self.target)
    }
}

/// All epis `[m] ↠ [s]`, ordered by their collapse sets.
pub fn enumerate_epis(m: usize, s: usize) -> Vec<SimplicialOperator> {
    if s > m {
        return Vec::new();
    }
    if m == 0 {
        return vec![SimplicialOperator::identity(0)];
    }
    (0..m)
        .combinations(m - s)
        .map(|set| SimplicialOperator::from_collapse_set(s, &set).expect("valid collapse set"))
        .collect()
}

/// A non-degenerate cell of a complex, addressed by dimension and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub idx: usize,
}

/// A possibly-degenerate simplex in normalized form: a non-degenerate cell
/// acted on by a degeneracy operator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FormalSimplex {
    pub epi: SimplicialOperator,
    pub cell: CellId,
}

impl FormalSimplex {
    pub fn dim(&self) -> usize {
        self.epi.source_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.epi.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CellData {
    name: String,
    faces: Vec<FormalSimplex>,
    marked: bool,
}

/// A finite marked simplicial set, presented by its non-degenerate cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSimplicialComplex {
    cells: Vec<Vec<CellData>>,
}

/// Incremental construction of a complex; `build` validates the simplicial
/// identities and marking conventions.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    cells: Vec<Vec<CellData>>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        ComplexBuilder { cells: Vec::new() }
    }

    /// Add a cell; `faces[j]` must be the normalized value of the `j`-th
    /// face, and must reference cells added earlier.
    pub fn add_cell(
        &mut self,
        dim: usize,
        name: impl Into<String>,
        faces: Vec<FormalSimplex>,
        marked: bool,
    ) -> CellId {
        while self.cells.len() <= dim {
            self.cells.push(Vec::new());
        }
        self.cells[dim].push(CellData { name: name.into(), faces, marked });
        CellId { dim, idx: self.cells[dim].len() - 1 }
    }

    pub fn build(self) -> Result<MarkedSimplicialComplex> {
        let complex = MarkedSimplicialComplex { cells: self.cells };
        complex.validate()?;
        Ok(complex)
    }
}

impl MarkedSimplicialComplex {
    /// The empty complex.
    pub fn empty() -> Self {
        MarkedSimplicialComplex { cells: Vec::new() }
    }

    /// Largest dimension with a cell (0 for empty complexes).
    pub fn dim(&self) -> usize {
        self.cells.iter().rposition(|layer| !layer.is_empty()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|layer| layer.is_empty())
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |layer| layer.len())
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|layer| layer.len()).sum()
    }

    /// All cells of a dimension.
    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cell_count(dim)).map(move |idx| CellId { dim, idx })
    }

    /// All cells, in dimension order.
    pub fn all_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).flat_map(move |dim| self.cells(dim))
    }

    fn data(&self, id: CellId) -> &CellData {
        &self.cells[id.dim][id.idx]
    }

    pub fn name(&self, id: CellId) -> &str {
        &self.data(id).name
    }

    pub fn is_marked(&self, id: CellId) -> bool {
        self.data(id).marked
    }

    /// Degenerate simplices count as marked.
    pub fn is_marked_formal(&self, fs: &FormalSimplex) -> bool {
        fs.is_degenerate() || self.is_marked(fs.cell)
    }

    pub(crate) fn set_marked(&mut self, id: CellId, marked: bool) {
        self.cells[id.dim][id.idx].marked = marked;
    }

    /// The normalized `j`-th face of a cell.
    pub fn face(&self, id: CellId, j: usize) -> &FormalSimplex {
        &self.data(id).faces[j]
    }

    pub fn find_cell(&self, name: &str) -> Option<CellId> {
        self.all_cells().find(|&id| self.name(id) == name)
    }

    /// The cell viewed as a formal simplex over itself.
    pub fn formal(&self, id: CellId) -> FormalSimplex {
        FormalSimplex { epi: SimplicialOperator::identity(id.dim), cell: id }
    }

    /// The normalized action of an arbitrary operator on a formal simplex.
    pub fn act(&self, fs: &FormalSimplex, alpha: &SimplicialOperator) -> FormalSimplex {
        assert_eq!(
            alpha.target_dim(),
            fs.dim(),
            "operator target {} does not match simplex dimension {}",
            alpha.target_dim(),
            fs.dim()
        );
        let beta = fs.epi.compose(alpha).expect("dimensions agree");
        let (epi, mono) = beta.ez_factor();
        if mono.is_identity() {
            return FormalSimplex { epi, cell: fs.cell };
        }
        // Peel the outermost missing value: mono = δ_j ∘ mono'.
        let j = mono.missing_values()[0];
        let shifted = SimplicialOperator::new(
            mono.values()
                .iter()
                .map(|&v| if v > j { v - 1 } else { v })
                .collect(),
            mono.target_dim() - 1,
        )
        .expect("shifted mono")
        .compose(&epi)
        .expect("dimensions agree");
        self.act(self.face(fs.cell, j), &shifted)
    }

    /// All formal simplices of a dimension (every cell under every epi).
    pub fn formal_simplices(&self, dim: usize) -> Vec<FormalSimplex> {
        let mut out = Vec::new();
        for s in (0..=dim).rev() {
            for cell in self.cells(s) {
                for epi in enumerate_epis(dim, s) {
                    out.push(FormalSimplex { epi, cell });
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let mut names = std::collections::BTreeSet::new();
        for dim in 0..self.cells.len() {
            for id in self.cells(dim) {
                let data = self.data(id);
                if !names.insert(data.name.clone()) {
                    return Err(Error::InvalidMap(format!("duplicate cell name `{}`", data.name)));
                }
                if dim == 0 {
                    if !data.faces.is_empty() {
                        return Err(Error::InvalidMap(format!(
                            "0-cell `{}` with faces",
                            data.name
                        )));
                    }
                    if data.marked {
                        return Err(Error::InvalidMap(format!("marked 0-cell `{}`", data.name)));
                    }
                    continue;
                }
                if data.faces.len() != dim + 1 {
                    return Err(Error::InvalidMap(format!(
                        "cell `{}` of dimension {dim} has {} faces",
                        data.name,
                        data.faces.len()
                    )));
                }
                for fs in &data.faces {
                    if fs.dim() != dim - 1
                        || fs.cell.dim != fs.epi.target_dim()
                        || fs.cell.dim >= dim
                        || fs.cell.idx >= self.cell_count(fs.cell.dim)
                        || !fs.epi.is_epi()
                    {
                        return Err(Error::InvalidMap(format!(
                            "cell `{}` has malformed face {fs:?}",
                            data.name
                        )));
                    }
                }
            }
        }
        // Simplicial identities: ∂_i ∂_j = ∂_{j-1} ∂_i for i < j, checked as
        // two normalized paths through the face tables.
        for dim in 2..self.cells.len() {
            for id in self.cells(dim) {
                for j in 0..=dim {
                    for i in 0..j {
                        let via_j = self.act(
                            self.face(id, j),
                            &SimplicialOperator::face(dim - 1, i).unwrap(),
                        );
                        let via_i = self.act(
                            self.face(id, i),
                            &SimplicialOperator::face(dim - 1, j - 1).unwrap(),
                        );
                        if via_j != via_i {
                            return Err(Error::InvalidMap(format!(
                                "simplicial identity fails on `{}` at (i,j)=({i},{j})",
                                self.name(id)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the classifying map of `x` factors through the complicial
    /// `k`-marking pattern: every face of `Δ^m` whose image contains
    /// `{k-1,k,k+1} ∩ [m]` must land on a marked or degenerate simplex.
    pub fn is_k_complicial(&self, x: &FormalSimplex, k: usize) -> bool {
        let m = x.dim();
        let required: Vec<usize> = [k.wrapping_sub(1), k, k + 1]
            .into_iter()
            .filter(|&v| v <= m && (v != usize::MAX))
            .collect();
        for s in 0..=m {
            for subset in (0..=m).combinations(s + 1) {
                if !required.iter().all(|v| subset.contains(v)) {
                    continue;
                }
                let beta = SimplicialOperator::new(subset, m).expect("mono in range");
                if !self.is_marked_formal(&self.act(x, &beta)) {
                    return false;
                }
            }
        }
        true
    }

    /// Serialize cells with their normalized boundary data.
    pub fn to_json(&self) -> serde_json::Value {
        let mut cells = Vec::new();
        for id in self.all_cells() {
            let data = self.data(id);
            let faces: Vec<serde_json::Value> = data
                .faces
                .iter()
                .enumerate()
                .map(|(j, fs)| {
                    let mut entry = vec![
                        serde_json::json!(j),
                        serde_json::json!(self.name(fs.cell)),
                    ];
                    for c in fs.epi.collapse_set() {
                        entry.push(serde_json::json!(c));
                    }
                    serde_json::Value::Array(entry)
                })
                .collect();
            cells.push(serde_json::json!({
                "id": data.name,
                "dim": id.dim,
                "faces": faces,
                "marked": data.marked,
            }));
        }
        serde_json::json!({ "dims": self.dim(), "cells": cells })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let cells_json = v
            .get("cells")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("missing `cells` array".into()))?;
        let mut builder = ComplexBuilder::new();
        let mut by_name: BTreeMap<String, CellId> = BTreeMap::new();
        let mut entries: Vec<(&serde_json::Value, usize)> = cells_json
            .iter()
            .map(|c| {
                let dim = c.get("dim").and_then(|d| d.as_u64()).unwrap_or(0) as usize;
                (c, dim)
            })
            .collect();
        entries.sort_by_key(|&(_, dim)| dim);
        for (c, dim) in entries {
            let name = c
                .get("id")
                .and_then(|n| n.as_str())
                .ok_or_else(|| Error::Parse("cell missing `id`".into()))?;
            let marked = c.get("marked").and_then(|m| m.as_bool()).unwrap_or(false);
            let faces_json = c
                .get("faces")
                .and_then(|f| f.as_array())
                .ok_or_else(|| Error::Parse(format!("cell `{name}` missing `faces`")))?;
            let mut faces = vec![None; faces_json.len()];
            for entry in faces_json {
                let arr = entry
                    .as_array()
                    .ok_or_else(|| Error::Parse("face entry not an array".into()))?;
                if arr.len() < 2 {
                    return Err(Error::Parse("face entry too short".into()));
                }
                let j = arr[0]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("face opcode not a number".into()))?
                    as usize;
                let target = arr[1]
                    .as_str()
                    .ok_or_else(|| Error::Parse("face target not a string".into()))?;
                let collapses: Vec<usize> = arr[2..]
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|v| v as usize)
                            .ok_or_else(|| Error::Parse("collapse index not a number".into()))
                    })
                    .collect::<Result<_>>()?;
                let cell = *by_name
                    .get(target)
                    .ok_or_else(|| Error::Parse(format!("unknown face target `{target}`")))?;
                let epi = SimplicialOperator::from_collapse_set(cell.dim, &collapses)?;
                if j >= faces.len() {
                    return Err(Error::Parse(format!("face opcode {j} out of range")));
                }
                faces[j] = Some(FormalSimplex { epi, cell });
            }
            let faces: Vec<FormalSimplex> = faces
                .into_iter()
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("cell `{name}` missing a face entry")))?;
            let id = builder.add_cell(dim, name, faces, marked);
            by_name.insert(name.to_string(), id);
        }
        builder.build()
    }
}

/// A map of marked simplicial complexes: each non-degenerate cell of the
/// domain is sent to a normalized simplex of the codomain; marked cells land
/// on marked (or degenerate) simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSimplicialMap {
    dom: MarkedSimplicialComplex,
    cod: MarkedSimplicialComplex,
    assignment: Vec<Vec<FormalSimplex>>,
}

impl MarkedSimplicialMap {
    pub fn new(
        dom: &MarkedSimplicialComplex,
        cod: &MarkedSimplicialComplex,
        assignment: Vec<Vec<FormalSimplex>>,
    ) -> Result<Self> {
        let map = MarkedSimplicialMap { dom: dom.clone(), cod: cod.clone(), assignment };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<()> {
        if self.assignment.len() < self.dom.cells.len() {
            return Err(Error::InvalidMap("assignment misses dimensions".into()));
        }
        for id in self.dom.all_cells() {
            let image = self.apply_cell(id);
            if image.dim() != id.dim {
                return Err(Error::InvalidMap(format!(
                    "cell `{}` of dimension {} sent to dimension {}",
                    self.dom.name(id),
                    id.dim,
                    image.dim()
                )));
            }
            if self.dom.is_marked(id) && !self.cod.is_marked_formal(image) {
                return Err(Error::InvalidMap(format!(
                    "marked cell `{}` sent to unmarked simplex",
                    self.dom.name(id)
                )));
            }
            if id.dim == 0 {
                continue;
            }
            for j in 0..=id.dim {
                let delta = SimplicialOperator::face(id.dim, j).unwrap();
                let lhs = self.cod.act(image, &delta);
                let rhs = self.apply_formal(self.dom.face(id, j));
                if lhs != rhs {
                    return Err(Error::InvalidMap(format!(
                        "naturality fails on `{}` at face {j}",
                        self.dom.name(id)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &MarkedSimplicialComplex) -> Self {
        let assignment = (0..x.cells.len())
            .map(|dim| x.cells(dim).map(|id| x.formal(id)).collect())
            .collect();
        MarkedSimplicialMap { dom: x.clone(), cod: x.clone(), assignment }
    }

    /// The inclusion matching cells by name.
    pub fn by_name_inclusion(
        dom: &MarkedSimplicialComplex,
        cod: &MarkedSimplicialComplex,
    ) -> Result<Self> {
        let mut assignment = Vec::new();
        for dim in 0..dom.cells.len() {
            let mut layer = Vec::new();
            for id in dom.cells(dim) {
                let target = cod.find_cell(dom.name(id)).ok_or_else(|| {
                    Error::InvalidMap(format!("no codomain cell named `{}`", dom.name(id)))
                })?;
                layer.push(cod.formal(target));
            }
            assignment.push(layer);
        }
        Self::new(dom, cod, assignment)
    }

    /// The unique map to a one-vertex complex.
    pub fn to_point(dom: &MarkedSimplicialComplex, point: &MarkedSimplicialComplex) -> Result<Self> {
        if point.cell_count(0) != 1 || point.total_cells() != 1 {
            return Err(Error::InvalidMap("codomain is not a point".into()));
        }
        let vertex = CellId { dim: 0, idx: 0 };
        let assignment = (0..dom.cells.len())
            .map(|dim| {
                dom.cells(dim)
                    .map(|_| FormalSimplex {
                        epi: SimplicialOperator::new(vec![0; dim + 1], 0).unwrap(),
                        cell: vertex,
                    })
                    .collect()
            })
            .collect();
        Self::new(dom, point, assignment)
    }

    pub fn dom(&self) -> &MarkedSimplicialComplex {
        &self.dom
    }

    pub fn cod(&self) -> &MarkedSimplicialComplex {
        &self.cod
    }

    pub fn apply_cell(&self, id: CellId) -> &FormalSimplex {
        &self.assignment[id.dim][id.idx]
    }

    pub fn apply_formal(&self, fs: &FormalSimplex) -> FormalSimplex {
        self.cod.act(self.apply_cell(fs.cell), &fs.epi)
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.cod != self.dom {
            return Err(Error::InvalidMap("composition domains do not match".into()));
        }
        let assignment = (0..inner.dom.cells.len())
            .map(|dim| {
                inner
                    .dom
                    .cells(dim)
                    .map(|id| self.apply_formal(inner.apply_cell(id)))
                    .collect()
            })
            .collect();
        Self::new(&inner.dom, &self.cod, assignment)
    }

    /// Injective on non-degenerate cells, with no collapsing.
    pub fn is_mono(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for id in self.dom.all_cells() {
            let image = self.apply_cell(id);
            if image.is_degenerate() || !seen.insert(image.cell) {
                return false;
            }
        }
        true
    }

    /// Creates markings: marked iff image marked.
    pub fn is_regular(&self) -> bool {
        self.dom.all_cells().all(|id| {
            self.dom.is_marked(id) == self.cod.is_marked_formal(self.apply_cell(id))
        })
    }

    /// Bijective on underlying cells (markings may grow).
    pub fn is_entire(&self) -> bool {
        if !self.is_mono() {
            return false;
        }
        self.dom.total_cells() == self.cod.total_cells()
    }
}

/// The standard complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplicialStandard {
    /// `Δ^n`, minimally marked.
    Delta(usize),
    /// `Δ̃^n`: the top cell marked.
    MDelta(usize),
    /// `Δ^n_k`: marked iff the image contains `{k-1,k,k+1} ∩ [n]`.
    ADelta(usize, usize),
    /// `Λ^n_k`: the regular `k`-th horn of `Δ^n_k`.
    Horn(usize, usize),
    /// `Δ^n_k` with `∂_{k-1}` and `∂_{k+1}` also marked.
    ADeltaPrime(usize, usize),
    /// `Δ^3` with everything of dimension ≥ 2 marked, plus edges 02 and 13.
    Delta3Eq,
    /// The two outer faces of `Δ^3_eq`.
    L,
    /// `τ_0 L`.
    LPrime,
}

pub(crate) fn subset_name(subset: &[usize]) -> String {
    if subset.iter().all(|&v| v <= 9) {
        subset.iter().map(|v| v.to_string()).collect()
    } else {
        subset.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
    }
}

/// Build a regular subcomplex of `Δ^n` from a downward-closed family of
/// vertex subsets with a marking predicate.
fn subset_complex(
    n: usize,
    included: impl Fn(&[usize]) -> bool,
    marked: impl Fn(&[usize]) -> bool,
) -> Result<MarkedSimplicialComplex> {
    let mut builder = ComplexBuilder::new();
    let mut ids: BTreeMap<Vec<usize>, CellId> = BTreeMap::new();
    for size in 1..=n + 1 {
        for subset in (0..=n).combinations(size) {
            if !included(&subset) {
                continue;
            }
            let dim = size - 1;
            let faces = if dim == 0 {
                Vec::new()
            } else {
                (0..size)
                    .map(|j| {
                        let mut sub = subset.clone();
                        sub.remove(j);
                        let cell = *ids
                            .get(&sub)
                            .unwrap_or_else(|| panic!("family not downward closed at {sub:?}"));
                        FormalSimplex { epi: SimplicialOperator::identity(dim - 1), cell }
                    })
                    .collect()
            };
            let is_marked = dim >= 1 && marked(&subset);
            let id = builder.add_cell(dim, subset_name(&subset), faces, is_marked);
            ids.insert(subset, id);
        }
    }
    builder.build()
}

/// Construct one of the named standard complexes.
pub fn make_standard(kind: SimplicialStandard) -> Result<MarkedSimplicialComplex> {
    match kind {
        SimplicialStandard::Delta(n) => subset_complex(n, |_| true, |_| false),
        SimplicialStandard::MDelta(n) => {
            if n == 0 {
                return Err(Error::ParamRange("marked simplex needs n >= 1".into()));
            }
            subset_complex(n, |_| true, |s| s.len() == n + 1)
        }
        SimplicialStandard::ADelta(n, k) => {
            if n == 0 || k > n {
                return Err(Error::ParamRange(format!("complicial simplex ({n},{k})")));
            }
            subset_complex(n, |_| true, move |s| adelta_marked(n, k, s))
        }
        SimplicialStandard::Horn(n, k) => {
            if n == 0 || k > n {
                return Err(Error::ParamRange(format!("horn ({n},{k})")));
            }
            let top: Vec<usize> = (0..=n).collect();
            let missing: Vec<usize> = (0..=n).filter(|&v| v != k).collect();
            subset_complex(
                n,
                move |s| s != top.as_slice() && s != missing.as_slice(),
                move |s| adelta_marked(n, k, s),
            )
        }
        SimplicialStandard::ADeltaPrime(n, k) => {
            if n == 0 || k > n {
                return Err(Error::ParamRange(format!("primed complicial simplex ({n},{k})")));
            }
            subset_complex(n, |_| true, move |s| {
                if adelta_marked(n, k, s) {
                    return true;
                }
                if s.len() != n {
                    return false;
                }
                let missing = (0..=n).find(|v| !s.contains(v)).unwrap();
                (k > 0 && missing == k - 1) || missing == k + 1
            })
        }
        SimplicialStandard::Delta3Eq => subset_complex(3, |_| true, |s| {
            s.len() >= 3 || s == [0, 2] || s == [1, 3]
        }),
        SimplicialStandard::L => subset_complex(
            3,
            |s| !(s.contains(&0) && s.contains(&3)),
            |s| s.len() == 3 || s == [0, 2] || s == [1, 3],
        ),
        SimplicialStandard::LPrime => Ok(trivialize(&make_standard(SimplicialStandard::L)?, 0)),
    }
}

fn adelta_marked(n: usize, k: usize, subset: &[usize]) -> bool {
    let mut required: Vec<usize> = Vec::new();
    if k > 0 {
        required.push(k - 1);
    }
    required.push(k);
    if k < n {
        required.push(k + 1);
    }
    required.iter().all(|v| subset.contains(v))
}

/// Mark every cell of dimension at least `n+1`.
pub fn trivialize(x: &MarkedSimplicialComplex, n: usize) -> MarkedSimplicialComplex {
    let mut out = x.clone();
    for dim in (n + 1).max(1)..out.cells.len() {
        for idx in 0..out.cells[dim].len() {
            out.cells[dim][idx].marked = true;
        }
    }
    out
}

/// Remove all markings.
pub fn flatten(x: &MarkedSimplicialComplex) -> MarkedSimplicialComplex {
    let mut out = x.clone();
    for layer in &mut out.cells {
        for cell in layer {
            cell.marked = false;
        }
    }
    out
}

/// The order-reversing involution: same cells, faces re-indexed through the
/// reversal of each operator.
pub fn op_involution(x: &MarkedSimplicialComplex) -> MarkedSimplicialComplex {
    let mut out = x.clone();
    for dim in 1..x.cells.len() {
        for idx in 0..x.cells[dim].len() {
            let id = CellId { dim, idx };
            out.cells[dim][idx].faces = (0..=dim)
                .map(|j| {
                    let orig = x.face(id, dim - j);
                    FormalSimplex { epi: orig.epi.reverse(), cell: orig.cell }
                })
                .collect();
        }
    }
    out
}

/// The pushout of `X ←f– A –g→ B` for a monomorphism `f`; returns the
/// colimit and the two legs `X → P`, `B → P`.
pub fn pushout(
    f: &MarkedSimplicialMap,
    g: &MarkedSimplicialMap,
) -> Result<(MarkedSimplicialComplex, MarkedSimplicialMap, MarkedSimplicialMap)> {
    if f.dom() != g.dom() {
        return Err(Error::InvalidMap("pushout legs have different domains".into()));
    }
    if !f.is_mono() {
        return Err(Error::InvalidMap("pushout along a non-monomorphism".into()));
    }
    let a = f.dom();
    let x = f.cod();
    let b = g.cod();

    // Which X-cells are hit by A, and by which A-cell.
    let mut hit: BTreeMap<CellId, CellId> = BTreeMap::new();
    for id in a.all_cells() {
        hit.insert(f.apply_cell(id).cell, id);
    }

    let mut builder = ComplexBuilder::new();
    let mut name_set = std::collections::BTreeSet::new();
    let mut x_index: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut b_index: BTreeMap<CellId, CellId> = BTreeMap::new();

    let fresh_name = |base: &str, used: &mut std::collections::BTreeSet<String>| {
        let mut name = base.to_string();
        while !used.insert(name.clone()) {
            name.push('\'');
        }
        name
    };

    // B-side cells first (their markings absorb marked preimages from X).
    for dim in 0..b.cells.len() {
        for id in b.cells(dim) {
            let marked = b.is_marked(id)
                || a.all_cells().any(|aid| {
                    let gim = g.apply_cell(aid);
                    !gim.is_degenerate() && gim.cell == id && x.is_marked(f.apply_cell(aid).cell)
                });
            let marked = marked && dim >= 1;
            let name = fresh_name(b.name(id), &mut name_set);
            // Faces are filled in by a second pass once all indices exist.
            let new_id = builder.add_cell(dim, name, Vec::new(), marked);
            b_index.insert(id, new_id);
        }
    }
    for dim in 0..x.cells.len() {
        for id in x.cells(dim) {
            if hit.contains_key(&id) {
                continue;
            }
            let name = fresh_name(x.name(id), &mut name_set);
            let new_id = builder.add_cell(dim, name, Vec::new(), x.is_marked(id));
            x_index.insert(id, new_id);
        }
    }

    // Resolve an X-cell to a formal simplex of the pushout.
    let resolve_x = |id: CellId,
                     x_index: &BTreeMap<CellId, CellId>,
                     b_index: &BTreeMap<CellId, CellId>|
     -> FormalSimplex {
        match hit.get(&id) {
            None => FormalSimplex {
                epi: SimplicialOperator::identity(id.dim),
                cell: x_index[&id],
            },
            Some(&aid) => {
                let gim = g.apply_cell(aid);
                FormalSimplex { epi: gim.epi.clone(), cell: b_index[&gim.cell] }
            }
        }
    };

    // Second pass: face data.
    let mut cells = builder.build_unchecked();
    for dim in 1..b.cells.len() {
        for id in b.cells(dim) {
            let new_id = b_index[&id];
            let faces = (0..=dim)
                .map(|j| {
                    let orig = b.face(id, j);
                    FormalSimplex { epi: orig.epi.clone(), cell: b_index[&orig.cell] }
                })
                .collect();
            cells[new_id.dim][new_id.idx].faces = faces;
        }
    }
    for dim in 1..x.cells.len() {
        for id in x.cells(dim) {
            let Some(&new_id) = x_index.get(&id) else { continue };
            let faces = (0..=dim)
                .map(|j| {
                    let orig = x.face(id, j);
                    let resolved = resolve_x(orig.cell, &x_index, &b_index);
                    let epi = resolved.epi.compose(&orig.epi).expect("dimensions agree");
                    FormalSimplex { epi, cell: resolved.cell }
                })
                .collect();
            cells[new_id.dim][new_id.idx].faces = faces;
        }
    }
    let p = MarkedSimplicialComplex { cells };
    p.validate()?;

    let leg_x_assignment = (0..x.cells.len())
        .map(|dim| {
            x.cells(dim)
                .map(|id| resolve_x(id, &x_index, &b_index))
                .collect()
        })
        .collect();
    let leg_b_assignment = (0..b.cells.len())
        .map(|dim| {
            b.cells(dim)
                .map(|id| FormalSimplex {
                    epi: SimplicialOperator::identity(dim),
                    cell: b_index[&id],
                })
                .collect()
        })
        .collect();
    let leg_x = MarkedSimplicialMap::new(x, &p, leg_x_assignment)?;
    let leg_b = MarkedSimplicialMap::new(b, &p, leg_b_assignment)?;
    Ok((p, leg_x, leg_b))
}

impl ComplexBuilder {
    fn build_unchecked(self) -> Vec<Vec<CellData>> {
        self.cells
    }
}

/// The join operator on simplicial operators: `α ⋆ β` acts as `α` on the
/// front block and as `β` (shifted) on the back block.
fn join_op(alpha: &SimplicialOperator, p: usize, beta: &SimplicialOperator, q: usize) -> SimplicialOperator {
    debug_assert_eq!(alpha.target_dim(), p);
    debug_assert_eq!(beta.target_dim(), q);
    let values = alpha
        .values()
        .iter()
        .copied()
        .chain(beta.values().iter().map(|&v| v + p + 1))
        .collect();
    SimplicialOperator::new(values, p + q + 1).expect("join of monotone maps")
}

/// The join `X ⋆ Y`: simplices are pairs with a possibly-absent component on
/// each side; marked iff either component is marked.
pub fn join(x: &MarkedSimplicialComplex, y: &MarkedSimplicialComplex) -> MarkedSimplicialComplex {
    let mut builder = ComplexBuilder::new();
    let mut left: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut right: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut mixed: BTreeMap<(CellId, CellId), CellId> = BTreeMap::new();

    let max_dim = x.cells.len() + y.cells.len();
    for total in 0..=max_dim {
        // Pure left cells of dimension `total`.
        for id in x.cells(total) {
            let faces = if total == 0 {
                Vec::new()
            } else {
                (0..=total)
                    .map(|j| {
                        let orig = x.face(id, j);
                        FormalSimplex { epi: orig.epi.clone(), cell: left[&orig.cell] }
                    })
                    .collect()
            };
            let new_id =
                builder.add_cell(total, format!("{}*", x.name(id)), faces, x.is_marked(id));
            left.insert(id, new_id);
        }
        // Pure right cells.
        for id in y.cells(total) {
            let faces = if total == 0 {
                Vec::new()
            } else {
                (0..=total)
                    .map(|j| {
                        let orig = y.face(id, j);
                        FormalSimplex { epi: orig.epi.clone(), cell: right[&orig.cell] }
                    })
                    .collect()
            };
            let new_id =
                builder.add_cell(total, format!("*{}", y.name(id)), faces, y.is_marked(id));
            right.insert(id, new_id);
        }
        // Mixed cells: p + q + 1 = total.
        if total == 0 {
            continue;
        }
        for p in 0..total {
            let q = total - 1 - p;
            for xc in x.cells(p).collect::<Vec<_>>() {
                for yc in y.cells(q).collect::<Vec<_>>() {
                    let faces = (0..=total)
                        .map(|j| {
                            if j <= p {
                                if p == 0 {
                                    // Dropping the only left vertex.
                                    FormalSimplex {
                                        epi: SimplicialOperator::identity(q),
                                        cell: right[&yc],
                                    }
                                } else {
                                    let orig = x.face(xc, j);
                                    let epi = join_op(
                                        &orig.epi,
                                        orig.cell.dim,
                                        &SimplicialOperator::identity(q),
                                        q,
                                    );
                                    FormalSimplex { epi, cell: mixed[&(orig.cell, yc)] }
                                }
                            } else if q == 0 {
                                FormalSimplex {
                                    epi: SimplicialOperator::identity(p),
                                    cell: left[&xc],
                                }
                            } else {
                                let orig = y.face(yc, j - p - 1);
                                let epi = join_op(
                                    &SimplicialOperator::identity(p),
                                    p,
                                    &orig.epi,
                                    orig.cell.dim,
                                );
                                FormalSimplex { epi, cell: mixed[&(xc, orig.cell)] }
                            }
                        })
                        .collect();
                    let marked = x.is_marked(xc) || y.is_marked(yc);
                    let name = format!("{}*{}", x.name(xc), y.name(yc));
                    let new_id = builder.add_cell(total, name, faces, marked);
                    mixed.insert((xc, yc), new_id);
                }
            }
        }
    }
    builder.build().expect("join of valid complexes is valid")
}

/// The Gray tensor product: underlying cartesian product, a simplex marked
/// iff it is cloven at every index.
pub fn gray_tensor(
    x: &MarkedSimplicialComplex,
    y: &MarkedSimplicialComplex,
) -> MarkedSimplicialComplex {
    let mut builder = ComplexBuilder::new();
    #[allow(clippy::type_complexity)]
    let mut index: BTreeMap<(CellId, Vec<usize>, CellId, Vec<usize>), CellId> = BTreeMap::new();

    let max_dim = (x.cells.len().saturating_sub(1)) + (y.cells.len().saturating_sub(1));
    for n in 0..=max_dim {
        for p in 0..=n.min(x.cells.len().saturating_sub(1)) {
            for q in 0..=n.min(y.cells.len().saturating_sub(1)) {
                if p + q < n || p.max(q) > n {
                    continue;
                }
                for xc in x.cells(p).collect::<Vec<_>>() {
                    for yc in y.cells(q).collect::<Vec<_>>() {
                        for e1 in enumerate_epis(n, p) {
                            for e2 in enumerate_epis(n, q) {
                                let c1 = e1.collapse_set();
                                let c2 = e2.collapse_set();
                                if c1.iter().any(|i| c2.contains(i)) {
                                    continue;
                                }
                                let fx = FormalSimplex { epi: e1.clone(), cell: xc };
                                let fy = FormalSimplex { epi: e2.clone(), cell: yc };
                                let faces = if n == 0 {
                                    Vec::new()
                                } else {
                                    (0..=n)
                                        .map(|j| {
                                            let delta =
                                                SimplicialOperator::face(n, j).unwrap();
                                            let z1 = x.act(&fx, &delta);
                                            let z2 = y.act(&fy, &delta);
                                            joint_normalize(&z1, &z2, &index)
                                        })
                                        .collect()
                                };
                                let marked = n >= 1 && fully_cloven(x, y, &fx, &fy);
                                let name = format!(
                                    "{}{:?}x{}{:?}",
                                    x.name(xc),
                                    c1,
                                    y.name(yc),
                                    c2
                                );
                                let id = builder.add_cell(n, name, faces, marked);
                                index.insert((xc, c1, yc, c2), id);
                            }
                        }
                    }
                }
            }
        }
    }
    builder.build().expect("product of valid complexes is valid")
}

/// Factor a pair of normalized components through their common collapses,
/// producing a normalized simplex of the product complex.
#[allow(clippy::type_complexity)]
fn joint_normalize(
    z1: &FormalSimplex,
    z2: &FormalSimplex,
    index: &BTreeMap<(CellId, Vec<usize>, CellId, Vec<usize>), CellId>,
) -> FormalSimplex {
    let c1 = z1.epi.collapse_set();
    let c2 = z2.epi.collapse_set();
    let common: Vec<usize> = c1.iter().copied().filter(|i| c2.contains(i)).collect();
    let m = z1.dim();
    let e = SimplicialOperator::from_collapse_set(m - common.len(), &common)
        .expect("common collapse set");
    let factor = |z: &SimplicialOperator| -> Vec<usize> {
        // κ(t) = z(min preimage of t under e).
        let mut out = Vec::with_capacity(e.target_dim() + 1);
        let mut next = 0usize;
        for t in 0..=e.target_dim() {
            while e.apply(next) != t {
                next += 1;
            }
            out.push(z.apply(next));
        }
        out
    };
    let k1 = SimplicialOperator::new(factor(&z1.epi), z1.epi.target_dim()).unwrap();
    let k2 = SimplicialOperator::new(factor(&z2.epi), z2.epi.target_dim()).unwrap();
    let cell = index[&(z1.cell, k1.collapse_set(), z2.cell, k2.collapse_set())];
    FormalSimplex { epi: e, cell }
}

fn fully_cloven(
    x: &MarkedSimplicialComplex,
    y: &MarkedSimplicialComplex,
    fx: &FormalSimplex,
    fy: &FormalSimplex,
) -> bool {
    let n = fx.dim();
    (0..=n).all(|i| {
        let front = SimplicialOperator::front_face(i, n - i);
        let back = SimplicialOperator::back_face(i, n - i);
        x.is_marked_formal(&x.act(fx, &front)) || y.is_marked_formal(&y.act(fy, &back))
    })
}

/// The reflection into pre-complicial sets: saturate under the elementary
/// marking extensions, marking `x·∂_k` whenever the classifying pattern of
/// the primed complicial simplex is matched.
pub fn precomplicial_reflection(x: &MarkedSimplicialComplex) -> MarkedSimplicialComplex {
    let mut out = x.clone();
    loop {
        let mut changed = false;
        for dim in 2..out.cells.len() {
            for idx in 0..out.cells[dim].len() {
                let id = CellId { dim, idx };
                let formal = out.formal(id);
                for k in 0..=dim {
                    let target = {
                        let fk = out.face(id, k);
                        if fk.is_degenerate() || out.is_marked(fk.cell) {
                            continue;
                        }
                        fk.cell
                    };
                    if !out.is_k_complicial(&formal, k) {
                        continue;
                    }
                    let side_marked = |j: usize| -> bool {
                        out.is_marked_formal(out.face(id, j))
                    };
                    if k > 0 && !side_marked(k - 1) {
                        continue;
                    }
                    if k < dim && !side_marked(k + 1) {
                        continue;
                    }
                    out.set_marked(target, true);
                    changed = true;
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Search for a marking-preserving isomorphism between two complexes.
pub fn find_isomorphism(
    x: &MarkedSimplicialComplex,
    y: &MarkedSimplicialComplex,
) -> Option<MarkedSimplicialMap> {
    let dims = x.cells.len().max(y.cells.len());
    for dim in 0..dims {
        if x.cell_count(dim) != y.cell_count(dim) {
            return None;
        }
    }
    let order: Vec<CellId> = x.all_cells().collect();
    let mut assignment: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut used: std::collections::BTreeSet<CellId> = std::collections::BTreeSet::new();
    if iso_search(x, y, &order, 0, &mut assignment, &mut used) {
        let map_assignment = (0..x.cells.len())
            .map(|dim| x.cells(dim).map(|id| y.formal(assignment[&id])).collect())
            .collect();
        MarkedSimplicialMap::new(x, y, map_assignment).ok()
    } else {
        None
    }
}

fn iso_search(
    x: &MarkedSimplicialComplex,
    y: &MarkedSimplicialComplex,
    order: &[CellId],
    pos: usize,
    assignment: &mut BTreeMap<CellId, CellId>,
    used: &mut std::collections::BTreeSet<CellId>,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let id = order[pos];
    'candidates: for cand in y.cells(id.dim) {
        if used.contains(&cand) || x.is_marked(id) != y.is_marked(cand) {
            continue;
        }
        if id.dim > 0 {
            for j in 0..=id.dim {
                let xf = x.face(id, j);
                let yf = y.face(cand, j);
                if xf.epi != yf.epi || assignment[&xf.cell] != yf.cell {
                    continue 'candidates;
                }
            }
        }
        assignment.insert(id, cand);
        used.insert(cand);
        if iso_search(x, y, order, pos + 1, assignment, used) {
            return true;
        }
        assignment.remove(&id);
        used.remove(&cand);
    }
    false
}

/// Enumerate maps `dom → cod` by backtracking in dimension order; `forced`
/// pins chosen cells, `extra` adds a per-cell constraint, and `budget`
/// bounds the number of candidate placements examined.
fn search_maps(
    dom: &MarkedSimplicialComplex,
    cod: &MarkedSimplicialComplex,
    forced: &BTreeMap<CellId, FormalSimplex>,
    extra: &dyn Fn(CellId, &FormalSimplex) -> bool,
    budget: &mut u64,
    first_only: bool,
) -> Result<Vec<BTreeMap<CellId, FormalSimplex>>> {
    let order: Vec<CellId> = dom.all_cells().collect();
    let mut found = Vec::new();
    let mut current: BTreeMap<CellId, FormalSimplex> = BTreeMap::new();
    search_maps_rec(
        dom, cod, forced, extra, budget, first_only, &order, 0, &mut current, &mut found,
    )?;
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn search_maps_rec(
    dom: &MarkedSimplicialComplex,
    cod: &MarkedSimplicialComplex,
    forced: &BTreeMap<CellId, FormalSimplex>,
    extra: &dyn Fn(CellId, &FormalSimplex) -> bool,
    budget: &mut u64,
    first_only: bool,
    order: &[CellId],
    pos: usize,
    current: &mut BTreeMap<CellId, FormalSimplex>,
    found: &mut Vec<BTreeMap<CellId, FormalSimplex>>,
) -> Result<bool> {
    if pos == order.len() {
        found.push(current.clone());
        return Ok(first_only);
    }
    let id = order[pos];
    let candidates: Vec<FormalSimplex> = match forced.get(&id) {
        Some(fs) => vec![fs.clone()],
        None => cod.formal_simplices(id.dim),
    };
    for cand in candidates {
        if *budget == 0 {
            return Err(Error::Budget(
                "lifting search exceeded its assignment budget".into(),
            ));
        }
        *budget -= 1;
        if dom.is_marked(id) && !cod.is_marked_formal(&cand) {
            continue;
        }
        if !extra(id, &cand) {
            continue;
        }
        let mut natural = true;
        for j in 0..=id.dim {
            if id.dim == 0 {
                break;
            }
            let delta = SimplicialOperator::face(id.dim, j).unwrap();
            let lhs = cod.act(&cand, &delta);
            let face = dom.face(id, j);
            let rhs = cod.act(&current[&face.cell], &face.epi);
            if lhs != rhs {
                natural = false;
                break;
            }
        }
        if !natural {
            continue;
        }
        current.insert(id, cand);
        let stop = search_maps_rec(
            dom, cod, forced, extra, budget, first_only, order, pos + 1, current, found,
        )?;
        current.remove(&id);
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

fn assignment_to_map(
    dom: &MarkedSimplicialComplex,
    cod: &MarkedSimplicialComplex,
    assignment: &BTreeMap<CellId, FormalSimplex>,
) -> Result<MarkedSimplicialMap> {
    let vec_assignment = (0..dom.cells.len())
        .map(|dim| dom.cells(dim).map(|id| assignment[&id].clone()).collect())
        .collect();
    MarkedSimplicialMap::new(dom, cod, vec_assignment)
}

/// All maps `dom → cod`, within the given assignment budget.
pub fn all_maps(
    dom: &MarkedSimplicialComplex,
    cod: &MarkedSimplicialComplex,
    budget: u64,
) -> Result<Vec<MarkedSimplicialMap>> {
    let mut budget = budget;
    let raw = search_maps(dom, cod, &BTreeMap::new(), &|_, _| true, &mut budget, false)?;
    raw.iter().map(|a| assignment_to_map(dom, cod, a)).collect()
}

/// Whether `p` has the right lifting property against the monomorphism
/// `inc`: every commuting square admits a diagonal filler.  The search is
/// exhaustive and deterministic; `budget` bounds the total number of
/// candidate placements across all squares.
pub fn rlp(inc: &MarkedSimplicialMap, p: &MarkedSimplicialMap, budget: u64) -> Result<bool> {
    if !inc.is_mono() {
        return Err(Error::InvalidMap("left map of a lifting problem must be mono".into()));
    }
    let a = inc.dom();
    let b = inc.cod();
    let x = p.dom();
    let y = p.cod();
    let mut budget = budget;

    let squares_u = search_maps(a, x, &BTreeMap::new(), &|_, _| true, &mut budget, false)?;
    for u in &squares_u {
        // v is constrained on the image of A.
        let mut forced_v: BTreeMap<CellId, FormalSimplex> = BTreeMap::new();
        for id in a.all_cells() {
            let b_cell = inc.apply_cell(id).cell;
            forced_v.insert(b_cell, p.apply_formal(&u[&id]));
        }
        let squares_v = search_maps(b, y, &forced_v, &|_, _| true, &mut budget, false)?;
        for v in &squares_v {
            // Search a filler d: B → X with d∘inc = u and p∘d = v.
            let mut forced_d: BTreeMap<CellId, FormalSimplex> = BTreeMap::new();
            for id in a.all_cells() {
                forced_d.insert(inc.apply_cell(id).cell, u[&id].clone());
            }
            let v_ref = v;
            let constraint = |cell: CellId, cand: &FormalSimplex| -> bool {
                p.apply_formal(cand) == v_ref[&cell]
            };
            let fillers = search_maps(b, x, &forced_d, &constraint, &mut budget, true)?;
            if fillers.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}


#[cfg(test)]
mod complex_tests {
    use super::*;

    fn delta(n: usize) -> MarkedSimplicialComplex {
        make_standard(SimplicialStandard::Delta(n)).unwrap()
    }

    #[test]
    fn standard_simplices_have_binomial_cells() {
        for n in 0..=4usize {
            let d = delta(n);
            for m in 0..=n {
                let mut expect = 1usize;
                for t in 0..m + 1 {
                    expect = expect * (n + 1 - t) / (t + 1);
                }
                assert_eq!(d.cell_count(m), expect, "n={n} m={m}");
            }
            assert!(d.all_cells().all(|id| !d.is_marked(id)));
        }
    }

    #[test]
    fn marked_simplex_marks_only_the_top() {
        let d = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        assert_eq!(d.cell_count(0), 2);
        assert_eq!(d.cell_count(1), 1);
        assert!(d.is_marked(CellId { dim: 1, idx: 0 }));
        let d3 = make_standard(SimplicialStandard::MDelta(3)).unwrap();
        let marked: Vec<_> = d3.all_cells().filter(|&id| d3.is_marked(id)).collect();
        assert_eq!(marked, vec![CellId { dim: 3, idx: 0 }]);
    }

    #[test]
    fn complicial_simplex_markings() {
        // In Δ²₁ exactly the top cell is marked among non-degenerates.
        let d = make_standard(SimplicialStandard::ADelta(2, 1)).unwrap();
        let marked: Vec<String> = d
            .all_cells()
            .filter(|&id| d.is_marked(id))
            .map(|id| d.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["012"]);
        // In Δ³₁: cells whose vertex set contains {0,1,2}.
        let d = make_standard(SimplicialStandard::ADelta(3, 1)).unwrap();
        let marked: Vec<String> = d
            .all_cells()
            .filter(|&id| d.is_marked(id))
            .map(|id| d.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["012", "0123"]);
        // The primed version adds ∂₀ and ∂₂.
        let d = make_standard(SimplicialStandard::ADeltaPrime(3, 1)).unwrap();
        let marked: Vec<String> = d
            .all_cells()
            .filter(|&id| d.is_marked(id))
            .map(|id| d.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["012", "013", "123", "0123"]);
    }

    #[test]
    fn horn_misses_top_and_opposite_face() {
        let h = make_standard(SimplicialStandard::Horn(2, 1)).unwrap();
        assert_eq!(h.cell_count(0), 3);
        assert_eq!(h.cell_count(1), 2);
        assert_eq!(h.cell_count(2), 0);
        assert!(h.find_cell("02").is_none());
        assert!(h.find_cell("01").is_some());
    }

    #[test]
    fn delta_three_eq_markings() {
        let d = make_standard(SimplicialStandard::Delta3Eq).unwrap();
        let marked: Vec<String> = d
            .all_cells()
            .filter(|&id| d.is_marked(id))
            .map(|id| d.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["02", "13", "012", "013", "023", "123", "0123"]);
    }

    #[test]
    fn rezk_l_shape() {
        let l = make_standard(SimplicialStandard::L).unwrap();
        assert_eq!(l.cell_count(0), 4);
        assert_eq!(l.cell_count(1), 5);
        assert_eq!(l.cell_count(2), 2);
        assert_eq!(l.cell_count(3), 0);
        assert!(l.find_cell("03").is_none());
        let marked: Vec<String> = l
            .all_cells()
            .filter(|&id| l.is_marked(id))
            .map(|id| l.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["02", "13", "012", "123"]);
        // L' marks the remaining three edges.
        let lp = make_standard(SimplicialStandard::LPrime).unwrap();
        let marked: usize = lp.all_cells().filter(|&id| lp.is_marked(id)).count();
        assert_eq!(marked, 7);
        assert_eq!(trivialize(&l, 0), lp);
    }

    #[test]
    fn op_involution_behaves() {
        for kind in [
            SimplicialStandard::Delta(3),
            SimplicialStandard::ADelta(3, 1),
            SimplicialStandard::Delta3Eq,
            SimplicialStandard::L,
        ] {
            let x = make_standard(kind).unwrap();
            assert_eq!(op_involution(&op_involution(&x)), x);
        }
        // (Δ^n_k)^op ≅ Δ^n_{n-k}.
        for n in 1..=3usize {
            for k in 0..=n {
                let lhs = op_involution(&make_standard(SimplicialStandard::ADelta(n, k)).unwrap());
                let rhs = make_standard(SimplicialStandard::ADelta(n, n - k)).unwrap();
                assert!(find_isomorphism(&lhs, &rhs).is_some(), "n={n} k={k}");
            }
        }
        // (Δ³_eq)^op ≅ Δ³_eq.
        let eq = make_standard(SimplicialStandard::Delta3Eq).unwrap();
        assert!(find_isomorphism(&op_involution(&eq), &eq).is_some());
    }

    #[test]
    fn join_unit_and_marking() {
        let empty = MarkedSimplicialComplex::empty();
        let y = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let j = join(&empty, &y);
        assert!(find_isomorphism(&j, &y).is_some());

        // Δ⁰ ⋆ Δ⁰ = Δ¹ unmarked.
        let pt = delta(0);
        let j = join(&pt, &pt);
        assert!(find_isomorphism(&j, &delta(1)).is_some());

        // Δ⁰ ⋆ Δ̃¹: the triangle over the marked edge is marked.
        let j = join(&pt, &y);
        assert_eq!(j.cell_count(2), 1);
        let marked: Vec<String> = j
            .all_cells()
            .filter(|&id| j.is_marked(id))
            .map(|id| j.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["*01", "0*01"]);
    }

    #[test]
    fn join_is_associative_on_small_inputs() {
        let a = delta(0);
        let b = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let c = make_standard(SimplicialStandard::Horn(2, 1)).unwrap();
        let lhs = join(&join(&a, &b), &c);
        let rhs = join(&a, &join(&b, &c));
        assert!(find_isomorphism(&lhs, &rhs).is_some());
    }

    #[test]
    fn join_swaps_under_op() {
        let x = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let y = delta(1);
        let lhs = op_involution(&join(&x, &y));
        let rhs = join(&op_involution(&y), &op_involution(&x));
        assert!(find_isomorphism(&lhs, &rhs).is_some());
    }

    #[test]
    fn gray_tensor_unit_and_square() {
        let x = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let g = gray_tensor(&x, &delta(0));
        assert!(find_isomorphism(&g, &x).is_some());
        let g = gray_tensor(&delta(0), &x);
        assert!(find_isomorphism(&g, &x).is_some());

        // Δ¹ ⊗ Δ¹: exactly one of the two triangles is marked.
        let d1 = delta(1);
        let g = gray_tensor(&d1, &d1);
        assert_eq!(g.cell_count(0), 4);
        assert_eq!(g.cell_count(1), 5);
        assert_eq!(g.cell_count(2), 2);
        let marked: Vec<String> = g
            .all_cells()
            .filter(|&id| g.is_marked(id))
            .map(|id| g.name(id).to_string())
            .collect();
        assert_eq!(marked, vec!["01[0]x01[1]"]);
    }

    #[test]
    fn gray_tensor_matches_direct_cloven_rule() {
        // Independent recomputation of the marking rule for Δ¹ ⊗ Δ̃¹.
        let x = delta(1);
        let y = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let g = gray_tensor(&x, &y);
        for id in g.all_cells() {
            if id.dim == 0 {
                continue;
            }
            let name = g.name(id);
            // Recover the components from the cell name produced above.
            let (left, right) = name.split_once('x').unwrap();
            let parse = |part: &str, c: &MarkedSimplicialComplex| -> FormalSimplex {
                let (cell_name, collapses) = part.split_once('[').unwrap();
                let collapses: Vec<usize> = collapses
                    .trim_end_matches(']')
                    .split(", ")
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().unwrap())
                    .collect();
                let cell = c.find_cell(cell_name).unwrap();
                FormalSimplex {
                    epi: SimplicialOperator::from_collapse_set(cell.dim, &collapses).unwrap(),
                    cell,
                }
            };
            let fx = parse(left, &x);
            let fy = parse(right, &y);
            let expect = (0..=id.dim).all(|i| {
                let front = SimplicialOperator::front_face(i, id.dim - i);
                let back = SimplicialOperator::back_face(i, id.dim - i);
                x.is_marked_formal(&x.act(&fx, &front))
                    || y.is_marked_formal(&y.act(&fy, &back))
            });
            assert_eq!(g.is_marked(id), expect, "cell {name}");
        }
    }

    #[test]
    fn pushout_along_identity() {
        let b = make_standard(SimplicialStandard::Delta3Eq).unwrap();
        let id = MarkedSimplicialMap::identity(&b);
        let (p, _, leg_b) = pushout(&id, &id).unwrap();
        assert!(find_isomorphism(&p, &b).is_some());
        assert!(leg_b.is_mono());
    }

    #[test]
    fn pushout_of_rezk_square() {
        // L' ∪_L Δ³_eq: underlying Δ³ with only the 0→3 edge unmarked.
        let l = make_standard(SimplicialStandard::L).unwrap();
        let lp = make_standard(SimplicialStandard::LPrime).unwrap();
        let eq = make_standard(SimplicialStandard::Delta3Eq).unwrap();
        let f = MarkedSimplicialMap::by_name_inclusion(&l, &eq).unwrap();
        let g = MarkedSimplicialMap::by_name_inclusion(&l, &lp).unwrap();
        let (p, leg_x, leg_b) = pushout(&f, &g).unwrap();
        assert_eq!(p.total_cells(), 15);
        let unmarked: Vec<String> = p
            .all_cells()
            .filter(|&id| id.dim >= 1 && !p.is_marked(id))
            .map(|id| p.name(id).to_string())
            .collect();
        assert_eq!(unmarked, vec!["03"]);
        // Legs are jointly surjective on cells.
        let mut covered = std::collections::BTreeSet::new();
        for id in leg_x.dom().all_cells() {
            covered.insert(leg_x.apply_cell(id).cell);
        }
        for id in leg_b.dom().all_cells() {
            covered.insert(leg_b.apply_cell(id).cell);
        }
        assert_eq!(covered.len(), p.total_cells());
    }

    #[test]
    fn glue_two_edges_at_a_vertex() {
        let pt = delta(0);
        let d1 = delta(1);
        let f = MarkedSimplicialMap::new(
            &pt,
            &d1,
            vec![vec![d1.formal(CellId { dim: 0, idx: 1 })]],
        )
        .unwrap();
        let g = MarkedSimplicialMap::new(
            &pt,
            &d1,
            vec![vec![d1.formal(CellId { dim: 0, idx: 0 })]],
        )
        .unwrap();
        let (p, _, _) = pushout(&f, &g).unwrap();
        assert_eq!(p.cell_count(0), 3);
        assert_eq!(p.cell_count(1), 2);
    }

    #[test]
    fn trivialization_and_reflection() {
        // τ₁ Δ³_eq = Δ³_eq (its high-dimensional cells are already marked).
        let eq = make_standard(SimplicialStandard::Delta3Eq).unwrap();
        assert_eq!(trivialize(&eq, 1), eq);

        // The Rezk pushout reflects to the fully marked 3-simplex.
        let l = make_standard(SimplicialStandard::L).unwrap();
        let lp = make_standard(SimplicialStandard::LPrime).unwrap();
        let f = MarkedSimplicialMap::by_name_inclusion(&l, &eq).unwrap();
        let g = MarkedSimplicialMap::by_name_inclusion(&l, &lp).unwrap();
        let (p, _, _) = pushout(&f, &g).unwrap();
        let reflected = precomplicial_reflection(&p);
        assert!(reflected
            .all_cells()
            .filter(|id| id.dim >= 1)
            .all(|id| reflected.is_marked(id)));
        // Idempotence.
        assert_eq!(precomplicial_reflection(&reflected), reflected);

        // Δ²₁ with both outer faces marked reflects to fully marked.
        let mut d = make_standard(SimplicialStandard::ADelta(2, 1)).unwrap();
        let f0 = d.find_cell("12").unwrap();
        let f2 = d.find_cell("01").unwrap();
        d.set_marked(f0, true);
        d.set_marked(f2, true);
        let reflected = precomplicial_reflection(&d);
        assert!(reflected
            .all_cells()
            .filter(|id| id.dim >= 1)
            .all(|id| reflected.is_marked(id)));
        // A complex that is already pre-complicial is untouched.
        let flat = delta(2);
        assert_eq!(precomplicial_reflection(&flat), flat);
    }

    #[test]
    fn complicial_cell_checks() {
        let d = make_standard(SimplicialStandard::ADelta(2, 1)).unwrap();
        let top = d.formal(d.find_cell("012").unwrap());
        assert!(d.is_k_complicial(&top, 1));
        assert!(!d.is_k_complicial(&top, 0));
        // Vertices are vacuously complicial at k = 0 only if unmarked checks
        // pass; the only face is the cell itself, which is unmarked.
        let v = d.formal(d.find_cell("0").unwrap());
        assert!(!d.is_k_complicial(&v, 0));
    }

    #[test]
    fn lifting_examples() {
        // Against an isomorphism, everything lifts.
        let d = make_standard(SimplicialStandard::ADelta(2, 1)).unwrap();
        let h = make_standard(SimplicialStandard::Horn(2, 1)).unwrap();
        let inc = MarkedSimplicialMap::by_name_inclusion(&h, &d).unwrap();
        let idmap = MarkedSimplicialMap::identity(&d);
        assert!(rlp(&inc, &idmap, 1_000_000).unwrap());

        // The marker against the mark-forgetting projection to a point.
        let d1 = delta(1);
        let md1 = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        let marker = MarkedSimplicialMap::by_name_inclusion(&d1, &md1).unwrap();
        let pt = delta(0);
        let proj = MarkedSimplicialMap::to_point(&md1, &pt).unwrap();
        assert!(rlp(&marker, &proj, 1_000_000).unwrap());

        // The complicial horn against a complex with no composite: the horn
        // itself has no filler for its identity square.
        let proj_h = MarkedSimplicialMap::to_point(&h, &pt).unwrap();
        assert!(!rlp(&inc, &proj_h, 10_000_000).unwrap());

        // Budget exhaustion reports an error rather than an answer.
        assert!(matches!(rlp(&inc, &proj_h, 10), Err(Error::Budget(_))));
    }

    #[test]
    fn json_round_trip() {
        for kind in [
            SimplicialStandard::Delta(2),
            SimplicialStandard::ADelta(3, 1),
            SimplicialStandard::Delta3Eq,
            SimplicialStandard::L,
        ] {
            let x = make_standard(kind).unwrap();
            let j = x.to_json();
            let back = MarkedSimplicialComplex::from_json(&j).unwrap();
            assert_eq!(back, x);
            assert_eq!(back.to_json(), j);
        }
    }

    #[test]
    fn maps_validate_markings_and_naturality() {
        let d1 = delta(1);
        let md1 = make_standard(SimplicialStandard::MDelta(1)).unwrap();
        // Marked edge cannot map to the unmarked edge.
        assert!(MarkedSimplicialMap::by_name_inclusion(&md1, &d1).is_err());
        // But the unmarked edge maps fine to the marked one.
        let inc = MarkedSimplicialMap::by_name_inclusion(&d1, &md1).unwrap();
        assert!(inc.is_entire());
        assert!(!inc.is_regular());
    }
}
