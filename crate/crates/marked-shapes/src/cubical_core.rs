//! Marked cubical complexes: an engine for finite marked cubical sets
//! presented by non-degenerate cells, the standard cubes and their comical,
//! strongly comical, open-box, Γ and Rezk variants, the lax Gray tensor
//! product with its Leibniz construction, pushouts, and the involutions.
//!
//! Boundary data is stored in normalized form: the `(i,ε)` face of a cell is
//! a pair (vertex-surjective operator, cell).  Degenerate cubes count as
//! marked throughout, and 0-cubes are never marked.

use crate::box_ops::{
    ez_factor, face_compose, BoxMorphism, FaceNormalForm, Generator, Involution,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A non-degenerate cell of a cubical complex, addressed by dimension and
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CubeId {
    pub dim: usize,
    pub idx: usize,
}

/// A possibly-degenerate cube in normalized form: a non-degenerate cell
/// acted on by a vertex-surjective operator (a composite of degeneracies and
/// connections).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalCube {
    pub epi: BoxMorphism,
    pub cell: CubeId,
}

impl FormalCube {
    pub fn dim(&self) -> usize {
        self.epi.source_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        self.epi.source_dim() != self.epi.target_dim()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CubeData {
    name: String,
    /// Index `2(i-1) + ε` holds the `(i,ε)` face, `1 ≤ i ≤ dim`.
    faces: Vec<FormalCube>,
    marked: bool,
}

/// A finite marked cubical set, presented by its non-degenerate cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedCubicalComplex {
    cells: Vec<Vec<CubeData>>,
}

/// Incremental construction of a cubical complex; `build` validates the
/// cubical identities and marking conventions.
#[derive(Debug, Default)]
pub struct CubicalBuilder {
    cells: Vec<Vec<CubeData>>,
}

impl CubicalBuilder {
    pub fn new() -> Self {
        CubicalBuilder { cells: Vec::new() }
    }

    /// Add a cell; `faces` lists the normalized `(i,ε)` faces in the order
    /// `(1,0), (1,1), …, (dim,0), (dim,1)` and must reference earlier cells.
    pub fn add_cell(
        &mut self,
        dim: usize,
        name: impl Into<String>,
        faces: Vec<FormalCube>,
        marked: bool,
    ) -> CubeId {
        while self.cells.len() <= dim {
            self.cells.push(Vec::new());
        }
        self.cells[dim].push(CubeData { name: name.into(), faces, marked });
        CubeId { dim, idx: self.cells[dim].len() - 1 }
    }

    pub fn build(self) -> Result<MarkedCubicalComplex> {
        let complex = MarkedCubicalComplex { cells: self.cells };
        complex.validate()?;
        Ok(complex)
    }

    fn build_unchecked(self) -> Vec<Vec<CubeData>> {
        self.cells
    }
}

impl MarkedCubicalComplex {
    pub fn empty() -> Self {
        MarkedCubicalComplex { cells: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().rposition(|layer| !layer.is_empty()).unwrap_or(0)
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |layer| layer.len())
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|layer| layer.len()).sum()
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CubeId> + '_ {
        (0..self.cell_count(dim)).map(move |idx| CubeId { dim, idx })
    }

    pub fn all_cells(&self) -> impl Iterator<Item = CubeId> + '_ {
        (0..self.cells.len()).flat_map(move |dim| self.cells(dim))
    }

    fn data(&self, id: CubeId) -> &CubeData {
        &self.cells[id.dim][id.idx]
    }

    pub fn name(&self, id: CubeId) -> &str {
        &self.data(id).name
    }

    pub fn is_marked(&self, id: CubeId) -> bool {
        self.data(id).marked
    }

    /// Degenerate cubes count as marked.
    pub fn is_marked_formal(&self, fc: &FormalCube) -> bool {
        fc.is_degenerate() || self.is_marked(fc.cell)
    }

    /// The normalized `(i,ε)` face of a cell, `1 ≤ i ≤ dim`.
    pub fn face(&self, id: CubeId, i: usize, eps: u8) -> &FormalCube {
        &self.data(id).faces[2 * (i - 1) + eps as usize]
    }

    pub fn find_cell(&self, name: &str) -> Option<CubeId> {
        self.all_cells().find(|&id| self.name(id) == name)
    }

    pub fn formal(&self, id: CubeId) -> FormalCube {
        FormalCube { epi: BoxMorphism::identity(id.dim), cell: id }
    }

    /// The normalized action of an arbitrary box-category operator.
    pub fn act(&self, fc: &FormalCube, alpha: &BoxMorphism) -> FormalCube {
        assert_eq!(
            alpha.target_dim(),
            fc.dim(),
            "operator target {} does not match cube dimension {}",
            alpha.target_dim(),
            fc.dim()
        );
        let beta = fc.epi.compose(alpha).expect("dimensions agree");
        let (epi, nf) = ez_factor(&beta);
        if nf.factors().is_empty() {
            return FormalCube { epi, cell: fc.cell };
        }
        // Peel the outermost pinned coordinate.
        let (i, e) = nf.factors()[0];
        let rest = FaceNormalForm::new(nf.ambient_dim() - 1, nf.factors()[1..].to_vec())
            .expect("tail of a normal form");
        let arg = rest.to_morphism().compose(&epi).expect("dimensions agree");
        self.act(self.face(fc.cell, i, e), &arg)
    }

    fn validate(&self) -> Result<()> {
        let mut names = std::collections::BTreeSet::new();
        for dim in 0..self.cells.len() {
            for id in self.cells(dim) {
                let data = self.data(id);
                if !names.insert(data.name.clone()) {
                    return Err(Error::InvalidMap(format!("duplicate cell name `{}`", data.name)));
                }
                if dim == 0 && data.marked {
                    return Err(Error::InvalidMap(format!("marked 0-cube `{}`", data.name)));
                }
                if data.faces.len() != 2 * dim {
                    return Err(Error::InvalidMap(format!(
                        "cell `{}` of dimension {dim} has {} faces",
                        data.name,
                        data.faces.len()
                    )));
                }
                for fc in &data.faces {
                    if fc.dim() + 1 != dim
                        || fc.cell.dim != fc.epi.target_dim()
                        || fc.cell.idx >= self.cell_count(fc.cell.dim)
                        || !fc.epi.is_surjective_on_vertices()
                    {
                        return Err(Error::InvalidMap(format!(
                            "cell `{}` has malformed face {fc:?}",
                            data.name
                        )));
                    }
                }
            }
        }
        // Cubical face identities, checked as two normalized paths: for
        // coordinates i < j, pinning j then i agrees with pinning i then j-1.
        for dim in 2..self.cells.len() {
            for id in self.cells(dim) {
                for j in 2..=dim {
                    for i in 1..j {
                        for ei in [0u8, 1] {
                            for ej in [0u8, 1] {
                                let di = BoxMorphism::face(dim - 1, i, ei).unwrap();
                                let via_j = self.act(self.face(id, j, ej), &di);
                                let dj = BoxMorphism::face(dim - 1, j - 1, ej).unwrap();
                                let via_i = self.act(self.face(id, i, ei), &dj);
                                if via_j != via_i {
                                    return Err(Error::InvalidMap(format!(
                                        "cubical identity fails on `{}` at ({i},{ei}),({j},{ej})",
                                        self.name(id)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Serialize cells with their normalized boundary data; each face entry
    /// is `[i, ε, target, …operator word]`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut cells = Vec::new();
        for id in self.all_cells() {
            let data = self.data(id);
            let faces: Vec<serde_json::Value> = (1..=id.dim)
                .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
                .map(|(i, eps)| {
                    let fc = self.face(id, i, eps);
                    let mut entry = vec![
                        serde_json::json!(i),
                        serde_json::json!(eps),
                        serde_json::json!(self.name(fc.cell)),
                    ];
                    for g in fc.epi.generator_word() {
                        entry.push(serde_json::json!(generator_code(*g)));
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
        let mut builder = CubicalBuilder::new();
        let mut by_name: BTreeMap<String, CubeId> = BTreeMap::new();
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
            if faces_json.len() != 2 * dim {
                return Err(Error::Parse(format!("cell `{name}` has wrong face count")));
            }
            let mut faces = vec![None; 2 * dim];
            for entry in faces_json {
                let arr = entry
                    .as_array()
                    .ok_or_else(|| Error::Parse("face entry not an array".into()))?;
                if arr.len() < 3 {
                    return Err(Error::Parse("face entry too short".into()));
                }
                let i = arr[0]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("face coordinate not a number".into()))?
                    as usize;
                let eps = arr[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("face sign not a number".into()))?
                    as u8;
                let target = arr[2]
                    .as_str()
                    .ok_or_else(|| Error::Parse("face target not a string".into()))?;
                let word: Vec<Generator> = arr[3..]
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .ok_or_else(|| Error::Parse("operator code not a string".into()))
                            .and_then(parse_generator_code)
                    })
                    .collect::<Result<_>>()?;
                let cell = *by_name
                    .get(target)
                    .ok_or_else(|| Error::Parse(format!("unknown face target `{target}`")))?;
                let epi = crate::box_ops::word_to_morphism(dim - 1, &word)?;
                if epi.target_dim() != cell.dim {
                    return Err(Error::Parse(format!(
                        "operator word for face of `{name}` has wrong target"
                    )));
                }
                if i == 0 || i > dim || eps > 1 {
                    return Err(Error::Parse(format!("face opcode ({i},{eps}) out of range")));
                }
                faces[2 * (i - 1) + eps as usize] = Some(FormalCube { epi, cell });
            }
            let faces: Vec<FormalCube> = faces
                .into_iter()
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("cell `{name}` missing a face entry")))?;
            let id = builder.add_cell(dim, name, faces, marked);
            by_name.insert(name.to_string(), id);
        }
        builder.build()
    }
}

fn generator_code(g: Generator) -> String {
    match g {
        Generator::Face { i, eps } => format!("d{i}:{eps}"),
        Generator::Degeneracy { i } => format!("s{i}"),
        Generator::Connection { i, eps } => format!("g{i}:{eps}"),
    }
}

fn parse_generator_code(code: &str) -> Result<Generator> {
    let err = || Error::Parse(format!("bad operator code `{code}`"));
    let (kind, rest) = code.split_at(1);
    match kind {
        "s" => Ok(Generator::Degeneracy { i: rest.parse().map_err(|_| err())? }),
        "g" | "d" => {
            let (i, eps) = rest.split_once(':').ok_or_else(err)?;
            let i = i.parse().map_err(|_| err())?;
            let eps: u8 = eps.parse().map_err(|_| err())?;
            if kind == "g" {
                Ok(Generator::Connection { i, eps })
            } else {
                Ok(Generator::Face { i, eps })
            }
        }
        _ => Err(err()),
    }
}

/// A map of marked cubical complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedCubicalMap {
    dom: MarkedCubicalComplex,
    cod: MarkedCubicalComplex,
    assignment: Vec<Vec<FormalCube>>,
}

impl MarkedCubicalMap {
    pub fn new(
        dom: &MarkedCubicalComplex,
        cod: &MarkedCubicalComplex,
        assignment: Vec<Vec<FormalCube>>,
    ) -> Result<Self> {
        let map = MarkedCubicalMap { dom: dom.clone(), cod: cod.clone(), assignment };
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
                    "marked cell `{}` sent to unmarked cube",
                    self.dom.name(id)
                )));
            }
            for i in 1..=id.dim {
                for eps in [0u8, 1] {
                    let delta = BoxMorphism::face(id.dim, i, eps).unwrap();
                    let lhs = self.cod.act(image, &delta);
                    let rhs = self.apply_formal(self.dom.face(id, i, eps));
                    if lhs != rhs {
                        return Err(Error::InvalidMap(format!(
                            "naturality fails on `{}` at face ({i},{eps})",
                            self.dom.name(id)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &MarkedCubicalComplex) -> Self {
        let assignment = (0..x.cells.len())
            .map(|dim| x.cells(dim).map(|id| x.formal(id)).collect())
            .collect();
        MarkedCubicalMap { dom: x.clone(), cod: x.clone(), assignment }
    }

    pub fn by_name_inclusion(
        dom: &MarkedCubicalComplex,
        cod: &MarkedCubicalComplex,
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

    pub fn dom(&self) -> &MarkedCubicalComplex {
        &self.dom
    }

    pub fn cod(&self) -> &MarkedCubicalComplex {
        &self.cod
    }

    pub fn apply_cell(&self, id: CubeId) -> &FormalCube {
        &self.assignment[id.dim][id.idx]
    }

    pub fn apply_formal(&self, fc: &FormalCube) -> FormalCube {
        self.cod.act(self.apply_cell(fc.cell), &fc.epi)
    }

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

    pub fn is_regular(&self) -> bool {
        self.dom.all_cells().all(|id| {
            self.dom.is_marked(id) == self.cod.is_marked_formal(self.apply_cell(id))
        })
    }

    pub fn is_entire(&self) -> bool {
        self.is_mono() && self.dom.total_cells() == self.cod.total_cells()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_entire() && self.is_regular()
    }
}

/// Whether the face with the given pinned coordinates is marked in the
/// `(i,ε)`-comical cube of its ambient dimension.
pub fn is_marked_in_comical_cube(nf: &FaceNormalForm, i: usize, eps: u8) -> bool {
    if nf.source_dim() == 0 {
        return false;
    }
    // (a): coordinate i is pinned (to either sign).
    if nf.pin(i).is_some() {
        return false;
    }
    let n = nf.ambient_dim();
    // (b): some j > i pinned to ε with everything strictly between pinned to
    // 1-ε.
    for j in i + 1..=n {
        if nf.contains(j, eps) && (i + 1..j).all(|k| nf.contains(k, 1 - eps)) {
            return false;
        }
    }
    // (c): mirror image below i.
    for j in 1..i {
        if nf.contains(j, eps) && (j + 1..i).all(|k| nf.contains(k, 1 - eps)) {
            return false;
        }
    }
    true
}

/// Whether the face is marked in the strongly `(i,1)`-comical cube: its
/// pinned coordinates avoid `(i-1,1)`, `(i,0)` and `(i,1)`.
pub fn is_marked_in_strong_cube(nf: &FaceNormalForm, i: usize) -> bool {
    if nf.source_dim() == 0 {
        return false;
    }
    if i > 1 && nf.contains(i - 1, 1) {
        return false;
    }
    nf.pin(i).is_none()
}

/// The standard cubical complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicalStandard {
    /// `□^n`, minimally marked.
    Cube(usize),
    /// `□̃^n`: the top cell marked.
    MCube(usize),
    /// `∂□^n`: the boundary, minimally marked.
    Boundary(usize),
    /// `⊓^n_{i,ε}`: the open box, regular in the comical cube.
    OpenBox(usize, usize, u8),
    /// `□^n_{i,ε}`: the comical cube.
    Comical(usize, usize, u8),
    /// `(□^n_{i,ε})'`: all `(n-1)`-cubes except `(i,ε)` marked.
    ComicalPrime(usize, usize, u8),
    /// `□̄^n_{i,1}`: the strongly comical cube.
    StrongComical(usize, usize),
    /// `Γ^n_{i,j}`: negative faces plus outer positive faces.
    Gamma(usize, usize, usize),
    /// `L_{x,y}`: two marked squares pasted along an edge.
    LRezk(usize, usize),
    /// `L'_{x,y} = τ_0 L_{x,y}`.
    LRezkPrime(usize, usize),
}

/// Build a regular subcomplex of `□^n` from a family of face normal forms
/// (closed under taking faces) with a marking predicate.
pub(crate) fn face_subset_complex(
    n: usize,
    included: impl Fn(&FaceNormalForm) -> bool,
    marked: impl Fn(&FaceNormalForm) -> bool,
) -> Result<MarkedCubicalComplex> {
    let mut builder = CubicalBuilder::new();
    let mut ids: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    let mut all = FaceNormalForm::enumerate(n);
    all.sort_by_key(|nf| (nf.source_dim(), nf.factors().to_vec()));
    for nf in all {
        if !included(&nf) {
            continue;
        }
        let dim = nf.source_dim();
        let faces = (1..=dim)
            .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
            .map(|(i, eps)| {
                let sub = face_compose(&nf, &FaceNormalForm::elementary(dim, i, eps).unwrap())
                    .expect("face of a normal form");
                let cell = *ids
                    .get(&sub)
                    .unwrap_or_else(|| panic!("family not closed under faces at {sub}"));
                FormalCube { epi: BoxMorphism::identity(cell.dim), cell }
            })
            .collect();
        let is_marked = dim >= 1 && marked(&nf);
        let id = builder.add_cell(dim, nf.to_string(), faces, is_marked);
        ids.insert(nf, id);
    }
    builder.build()
}

/// Construct one of the named standard cubical complexes.
pub fn make_cube_object(kind: CubicalStandard) -> Result<MarkedCubicalComplex> {
    let check = |n: usize, i: usize| -> Result<()> {
        if n == 0 || i == 0 || i > n {
            return Err(Error::ParamRange(format!("cube parameters (n,i) = ({n},{i})")));
        }
        Ok(())
    };
    match kind {
        CubicalStandard::Cube(n) => face_subset_complex(n, |_| true, |_| false),
        CubicalStandard::MCube(n) => {
            if n == 0 {
                return Err(Error::ParamRange("marked cube needs n >= 1".into()));
            }
            face_subset_complex(n, |_| true, |nf| nf.factors().is_empty())
        }
        CubicalStandard::Boundary(n) => {
            face_subset_complex(n, |nf| !nf.factors().is_empty(), |_| false)
        }
        CubicalStandard::OpenBox(n, i, eps) => {
            check(n, i)?;
            let removed = FaceNormalForm::elementary(n, i, eps)?;
            face_subset_complex(
                n,
                move |nf| !nf.factors().is_empty() && *nf != removed,
                move |nf| is_marked_in_comical_cube(nf, i, eps),
            )
        }
        CubicalStandard::Comical(n, i, eps) => {
            check(n, i)?;
            face_subset_complex(n, |_| true, move |nf| is_marked_in_comical_cube(nf, i, eps))
        }
        CubicalStandard::ComicalPrime(n, i, eps) => {
            check(n, i)?;
            face_subset_complex(n, |_| true, move |nf| {
                if nf.source_dim() + 1 == n && !nf.contains(i, eps) {
                    return true;
                }
                is_marked_in_comical_cube(nf, i, eps)
            })
        }
        CubicalStandard::StrongComical(n, i) => {
            check(n, i)?;
            face_subset_complex(n, |_| true, move |nf| is_marked_in_strong_cube(nf, i))
        }
        CubicalStandard::Gamma(n, i, j) => {
            check(n, i)?;
            if j < i + 1 || j > n + 1 {
                return Err(Error::ParamRange(format!("Γ parameters (n,i,j) = ({n},{i},{j})")));
            }
            face_subset_complex(
                n,
                move |nf| {
                    nf.factors().iter().any(|&(k, e)| {
                        e == 0 || (e == 1 && (k <= i.saturating_sub(1) || k >= j))
                    })
                },
                move |nf| is_marked_in_strong_cube(nf, i),
            )
        }
        CubicalStandard::LRezk(x, y) => make_l_rezk(x, y, false),
        CubicalStandard::LRezkPrime(x, y) => make_l_rezk(x, y, true),
    }
}

/// The pasting of two squares `X` and `Y` along `X∂_{x,1} = Y∂_{y,0}`, with
/// the Rezk marking pattern; `primed` additionally marks the remaining three
/// edges.
fn make_l_rezk(x: usize, y: usize, primed: bool) -> Result<MarkedCubicalComplex> {
    if !(1..=2).contains(&x) || !(1..=2).contains(&y) {
        return Err(Error::ParamRange(format!("Rezk parameters (x,y) = ({x},{y})")));
    }
    let mut builder = CubicalBuilder::new();
    // Shared edge and its endpoints.
    let shared_v: Vec<CubeId> = (0..2)
        .map(|c| builder.add_cell(0, format!("S:v{c}"), Vec::new(), false))
        .collect();
    // Outer vertices: in the X square the shared ones pin coordinate x to 1;
    // in the Y square they pin y to 0.
    let mut x_vertices: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    let mut y_vertices: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    for nf in FaceNormalForm::enumerate(2) {
        if nf.source_dim() != 0 {
            continue;
        }
        if nf.contains(x, 1) {
            let c = nf.pin(3 - x).unwrap();
            x_vertices.insert(nf.clone(), shared_v[c as usize]);
        } else {
            let id = builder.add_cell(0, format!("X:{nf}"), Vec::new(), false);
            x_vertices.insert(nf.clone(), id);
        }
        if nf.contains(y, 0) {
            let c = nf.pin(3 - y).unwrap();
            y_vertices.insert(nf.clone(), shared_v[c as usize]);
        } else {
            let id = builder.add_cell(0, format!("Y:{nf}"), Vec::new(), false);
            y_vertices.insert(nf.clone(), id);
        }
    }
    let shared_e = builder.add_cell(
        1,
        "S:e",
        (0..2)
            .map(|c| FormalCube { epi: BoxMorphism::identity(0), cell: shared_v[c] })
            .collect(),
        primed,
    );
    // Edges of each square; the marked ones are X∂_{x,0}, X∂_{3-x,1},
    // Y∂_{y,1}, Y∂_{3-y,0}.
    let mut x_edges: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    let mut y_edges: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    for (i, eps) in [(1usize, 0u8), (1, 1), (2, 0), (2, 1)] {
        let nf = FaceNormalForm::elementary(2, i, eps)?;
        let endpoint = |vertices: &BTreeMap<FaceNormalForm, CubeId>, c: u8| -> FormalCube {
            let v = face_compose(&nf, &FaceNormalForm::elementary(1, 1, c).unwrap()).unwrap();
            FormalCube { epi: BoxMorphism::identity(0), cell: vertices[&v] }
        };
        if (i, eps) != (x, 1) {
            let marked = primed || (i, eps) == (x, 0) || (i, eps) == (3 - x, 1);
            let faces = (0..2).map(|c| endpoint(&x_vertices, c)).collect();
            let id = builder.add_cell(1, format!("X:{nf}"), faces, marked);
            x_edges.insert(nf.clone(), id);
        }
        if (i, eps) != (y, 0) {
            let marked = primed || (i, eps) == (y, 1) || (i, eps) == (3 - y, 0);
            let faces = (0..2).map(|c| endpoint(&y_vertices, c)).collect();
            let id = builder.add_cell(1, format!("Y:{nf}"), faces, marked);
            y_edges.insert(nf.clone(), id);
        }
    }
    // The two squares.
    let square_faces = |edges: &BTreeMap<FaceNormalForm, CubeId>,
                        shared_at: (usize, u8)|
     -> Vec<FormalCube> {
        (1..=2)
            .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
            .map(|(i, eps)| {
                if (i, eps) == shared_at {
                    FormalCube { epi: BoxMorphism::identity(1), cell: shared_e }
                } else {
                    let nf = FaceNormalForm::elementary(2, i, eps).unwrap();
                    FormalCube { epi: BoxMorphism::identity(1), cell: edges[&nf] }
                }
            })
            .collect()
    };
    builder.add_cell(2, "X:id@2", square_faces(&x_edges, (x, 1)), true);
    builder.add_cell(2, "Y:id@2", square_faces(&y_edges, (y, 0)), true);
    builder.build()
}

/// Mark every cell of dimension at least `n+1`.
pub fn trivialize(x: &MarkedCubicalComplex, n: usize) -> MarkedCubicalComplex {
    let mut out = x.clone();
    for dim in (n + 1).max(1)..out.cells.len() {
        for idx in 0..out.cells[dim].len() {
            out.cells[dim][idx].marked = true;
        }
    }
    out
}

/// Remove all markings.
pub fn flatten(x: &MarkedCubicalComplex) -> MarkedCubicalComplex {
    let mut out = x.clone();
    for layer in &mut out.cells {
        for cell in layer {
            cell.marked = false;
        }
    }
    out
}

fn involute_elementary(n: usize, i: usize, eps: u8, which: Involution) -> (usize, u8) {
    match which {
        Involution::Co => (n + 1 - i, eps),
        Involution::CoOp => (i, 1 - eps),
        Involution::Op => (n + 1 - i, 1 - eps),
    }
}

/// Apply one of the box-category involutions to a complex: cells and
/// markings are kept, boundary data is relabelled.
pub fn cubical_involution(x: &MarkedCubicalComplex, which: Involution) -> MarkedCubicalComplex {
    let mut out = x.clone();
    for dim in 1..x.cells.len() {
        for idx in 0..x.cells[dim].len() {
            let id = CubeId { dim, idx };
            out.cells[dim][idx].faces = (1..=dim)
                .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
                .map(|(i, eps)| {
                    let (oi, oe) = involute_elementary(dim, i, eps, which);
                    let orig = x.face(id, oi, oe);
                    FormalCube { epi: orig.epi.involute(which), cell: orig.cell }
                })
                .collect();
        }
    }
    out
}

/// The pushout of `X ←f– A –g→ B` for a monomorphism `f`; returns the
/// colimit and the two legs.
pub fn pushout(
    f: &MarkedCubicalMap,
    g: &MarkedCubicalMap,
) -> Result<(MarkedCubicalComplex, MarkedCubicalMap, MarkedCubicalMap)> {
    if f.dom() != g.dom() {
        return Err(Error::InvalidMap("pushout legs have different domains".into()));
    }
    if !f.is_mono() {
        return Err(Error::InvalidMap("pushout along a non-monomorphism".into()));
    }
    let a = f.dom();
    let x = f.cod();
    let b = g.cod();

    let mut hit: BTreeMap<CubeId, CubeId> = BTreeMap::new();
    for id in a.all_cells() {
        hit.insert(f.apply_cell(id).cell, id);
    }

    let mut builder = CubicalBuilder::new();
    let mut name_set = std::collections::BTreeSet::new();
    let mut x_index: BTreeMap<CubeId, CubeId> = BTreeMap::new();
    let mut b_index: BTreeMap<CubeId, CubeId> = BTreeMap::new();
    let fresh_name = |base: &str, used: &mut std::collections::BTreeSet<String>| {
        let mut name = base.to_string();
        while !used.insert(name.clone()) {
            name.push('\'');
        }
        name
    };

    for dim in 0..b.cells.len() {
        for id in b.cells(dim) {
            let marked = b.is_marked(id)
                || a.all_cells().any(|aid| {
                    let gim = g.apply_cell(aid);
                    !gim.is_degenerate() && gim.cell == id && x.is_marked(f.apply_cell(aid).cell)
                });
            let name = fresh_name(b.name(id), &mut name_set);
            let new_id = builder.add_cell(dim, name, Vec::new(), marked && dim >= 1);
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

    let resolve_x = |id: CubeId| -> FormalCube {
        match hit.get(&id) {
            None => FormalCube { epi: BoxMorphism::identity(id.dim), cell: x_index[&id] },
            Some(&aid) => {
                let gim = g.apply_cell(aid);
                FormalCube { epi: gim.epi.clone(), cell: b_index[&gim.cell] }
            }
        }
    };

    let mut cells = builder.build_unchecked();
    for dim in 1..b.cells.len() {
        for id in b.cells(dim) {
            let new_id = b_index[&id];
            cells[new_id.dim][new_id.idx].faces = (1..=dim)
                .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
                .map(|(i, eps)| {
                    let orig = b.face(id, i, eps);
                    FormalCube { epi: orig.epi.clone(), cell: b_index[&orig.cell] }
                })
                .collect();
        }
    }
    for dim in 1..x.cells.len() {
        for id in x.cells(dim) {
            let Some(&new_id) = x_index.get(&id) else { continue };
            cells[new_id.dim][new_id.idx].faces = (1..=dim)
                .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
                .map(|(i, eps)| {
                    let orig = x.face(id, i, eps);
                    let resolved = resolve_x(orig.cell);
                    let epi = resolved.epi.compose(&orig.epi).expect("dimensions agree");
                    FormalCube { epi, cell: resolved.cell }
                })
                .collect();
        }
    }
    let p = MarkedCubicalComplex { cells };
    p.validate()?;

    let leg_x_assignment = (0..x.cells.len())
        .map(|dim| x.cells(dim).map(&resolve_x).collect())
        .collect();
    let leg_b_assignment = (0..b.cells.len())
        .map(|dim| {
            b.cells(dim)
                .map(|id| FormalCube { epi: BoxMorphism::identity(dim), cell: b_index[&id] })
                .collect()
        })
        .collect();
    let leg_x = MarkedCubicalMap::new(x, &p, leg_x_assignment)?;
    let leg_b = MarkedCubicalMap::new(b, &p, leg_b_assignment)?;
    Ok((p, leg_x, leg_b))
}

/// The lax Gray tensor product: cells are pairs, faces split at the first
/// factor's dimension, and a non-degenerate product cell is marked iff
/// either factor is marked.
pub fn lax_gray_tensor(
    x: &MarkedCubicalComplex,
    y: &MarkedCubicalComplex,
) -> MarkedCubicalComplex {
    let mut builder = CubicalBuilder::new();
    let mut index: BTreeMap<(CubeId, CubeId), CubeId> = BTreeMap::new();
    let max_dim = x.cells.len().saturating_sub(1) + y.cells.len().saturating_sub(1);
    for n in 0..=max_dim {
        for p in 0..=n {
            let q = n - p;
            for xc in x.cells(p).collect::<Vec<_>>() {
                for yc in y.cells(q).collect::<Vec<_>>() {
                    let faces = (1..=n)
                        .flat_map(|i| [0u8, 1].map(|eps| (i, eps)))
                        .map(|(i, eps)| {
                            if i <= p {
                                let orig = x.face(xc, i, eps);
                                let epi = orig.epi.product(&BoxMorphism::identity(q));
                                FormalCube { epi, cell: index[&(orig.cell, yc)] }
                            } else {
                                let orig = y.face(yc, i - p, eps);
                                let epi = BoxMorphism::identity(p).product(&orig.epi);
                                FormalCube { epi, cell: index[&(xc, orig.cell)] }
                            }
                        })
                        .collect();
                    let marked = n >= 1 && (x.is_marked(xc) || y.is_marked(yc));
                    let name = format!("{}*{}", x.name(xc), y.name(yc));
                    let id = builder.add_cell(n, name, faces, marked);
                    index.insert((xc, yc), id);
                }
            }
        }
    }
    builder.build().expect("product of valid complexes is valid")
}

/// The Gray tensor of two maps.
pub fn gray_map(f: &MarkedCubicalMap, g: &MarkedCubicalMap) -> Result<MarkedCubicalMap> {
    let dom = lax_gray_tensor(f.dom(), g.dom());
    let cod = lax_gray_tensor(f.cod(), g.cod());
    let mut assignment: Vec<Vec<FormalCube>> = vec![Vec::new(); dom.cells.len()];
    // Cells of the product were inserted in (total, p) order; rebuild the
    // same traversal to align assignments.
    let max_dim = f.dom().cells.len().saturating_sub(1) + g.dom().cells.len().saturating_sub(1);
    for n in 0..=max_dim {
        for p in 0..=n {
            let q = n - p;
            for xc in f.dom().cells(p) {
                for yc in g.dom().cells(q) {
                    let fx = f.apply_cell(xc);
                    let gy = g.apply_cell(yc);
                    let target_name =
                        format!("{}*{}", f.cod().name(fx.cell), g.cod().name(gy.cell));
                    let cell = cod
                        .find_cell(&target_name)
                        .ok_or_else(|| Error::InvalidMap("missing product cell".into()))?;
                    let epi = fx.epi.product(&gy.epi);
                    assignment[n].push(FormalCube { epi, cell });
                }
            }
        }
    }
    MarkedCubicalMap::new(&dom, &cod, assignment)
}

/// The Leibniz (pushout-product) construction: for monos `f: A → B` and
/// `g: X → Y`, returns the induced map
/// `(A⊗Y) ∪_{A⊗X} (B⊗X) → B⊗Y` along with its domain and codomain.
pub fn pushout_product(
    f: &MarkedCubicalMap,
    g: &MarkedCubicalMap,
) -> Result<(MarkedCubicalMap, MarkedCubicalComplex, MarkedCubicalComplex)> {
    if !f.is_mono() || !g.is_mono() {
        return Err(Error::InvalidMap("Leibniz product of non-monomorphisms".into()));
    }
    let f_tensor_x = gray_map(f, &MarkedCubicalMap::identity(g.dom()))?;
    let a_tensor_g = gray_map(&MarkedCubicalMap::identity(f.dom()), g)?;
    let (p, leg_bx, leg_ay) = pushout(&f_tensor_x, &a_tensor_g)?;
    let cod = lax_gray_tensor(f.cod(), g.cod());
    let id_b_g = gray_map(&MarkedCubicalMap::identity(f.cod()), g)?;
    let f_id_y = gray_map(f, &MarkedCubicalMap::identity(g.cod()))?;

    let mut assignment: Vec<Vec<Option<FormalCube>>> = (0..p.cells.len())
        .map(|dim| vec![None; p.cell_count(dim)])
        .collect();
    for id in leg_ay.dom().all_cells() {
        let target = leg_ay.apply_cell(id);
        assignment[target.cell.dim][target.cell.idx] = Some(f_id_y.apply_cell(id).clone());
    }
    for id in leg_bx.dom().all_cells() {
        let target = leg_bx.apply_cell(id);
        if !target.is_degenerate() {
            assignment[target.cell.dim][target.cell.idx] = Some(id_b_g.apply_cell(id).clone());
        }
    }
    let assignment: Vec<Vec<FormalCube>> = assignment
        .into_iter()
        .map(|layer| layer.into_iter().collect::<Option<_>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidMap("pushout legs not jointly surjective".into()))?;
    let map = MarkedCubicalMap::new(&p, &cod, assignment)?;
    Ok((map, p, cod))
}

/// Search for a marking-preserving isomorphism between two complexes.
pub fn find_isomorphism(
    x: &MarkedCubicalComplex,
    y: &MarkedCubicalComplex,
) -> Option<MarkedCubicalMap> {
    let dims = x.cells.len().max(y.cells.len());
    for dim in 0..dims {
        if x.cell_count(dim) != y.cell_count(dim) {
            return None;
        }
    }
    let order: Vec<CubeId> = x.all_cells().collect();
    let mut assignment: BTreeMap<CubeId, CubeId> = BTreeMap::new();
    let mut used: std::collections::BTreeSet<CubeId> = std::collections::BTreeSet::new();
    if cube_iso_search(x, y, &order, 0, &mut assignment, &mut used) {
        let map_assignment = (0..x.cells.len())
            .map(|dim| x.cells(dim).map(|id| y.formal(assignment[&id])).collect())
            .collect();
        MarkedCubicalMap::new(x, y, map_assignment).ok()
    } else {
        None
    }
}

fn cube_iso_search(
    x: &MarkedCubicalComplex,
    y: &MarkedCubicalComplex,
    order: &[CubeId],
    pos: usize,
    assignment: &mut BTreeMap<CubeId, CubeId>,
    used: &mut std::collections::BTreeSet<CubeId>,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let id = order[pos];
    'candidates: for cand in y.cells(id.dim) {
        if used.contains(&cand) || x.is_marked(id) != y.is_marked(cand) {
            continue;
        }
        for i in 1..=id.dim {
            for eps in [0u8, 1] {
                let xf = x.face(id, i, eps);
                let yf = y.face(cand, i, eps);
                if xf.epi != yf.epi || assignment[&xf.cell] != yf.cell {
                    continue 'candidates;
                }
            }
        }
        assignment.insert(id, cand);
        used.insert(cand);
        if cube_iso_search(x, y, order, pos + 1, assignment, used) {
            return true;
        }
        assignment.remove(&id);
        used.remove(&cand);
    }
    false
}
