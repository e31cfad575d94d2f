//! Cone quotients of cubes, the cubification functor with its right adjoint,
//! and the retraction/section/homotopy string maps.
//!
//! The `(m,n)`-cone is the quotient of the `(m+n)`-cube that identifies two
//! cubes whenever they agree up to some coordinate `j ≤ n` on which both are
//! constant `0`.  The relation admits a confluent normal form — zero out
//! every coordinate after the first constant-`0` coordinate among the first
//! `n` — which makes the quotient effectively computable: [`cone_complex`]
//! presents it as a finite complex, [`cone_subobjects`] builds the boundary
//! subcomplex and its strongly marked variants, and [`is_cone`] recognizes
//! cone cubes inside an arbitrary complex.
//!
//! Specializing to `m = 0` gives the cubification functor from marked
//! simplicial to marked cubical complexes ([`q_object`], [`q_operator`],
//! [`q_functor`], [`q_map`]), its right adjoint [`integral`], and the
//! [`counit`] inclusion.  The string maps [`rho_map`], [`zeta_map`] and
//! [`h_string`] relate the triangulated cubification of a simplex back to
//! the simplex itself.  [`check_theta`] decides, identity by identity,
//! whether a finite table of candidate cone composites is coherent.

use std::collections::{BTreeMap, BTreeSet};

use crate::box_ops::{self, BoxMorphism, FaceNormalForm, Generator};
use crate::cubical_core::{
    is_marked_in_strong_cube, CubeId, CubicalBuilder, FormalCube, MarkedCubicalComplex,
    MarkedCubicalMap,
};
use crate::simplicial_core::{
    make_standard, subset_name, CellId, ComplexBuilder, FormalSimplex, MarkedSimplicialComplex,
    MarkedSimplicialMap, SimplicialOperator, SimplicialStandard,
};
use crate::triangulation::{triangulate, Entry, SimplexString};
use crate::{Error, Result};

/// A cube of the `(m,n)`-cone, stored by its canonical representative.
///
/// Two cubes of `[1]^{m+n}` represent the same cone cube when they agree up
/// to a coordinate `j ≤ n` on which both are constant `0`; the canonical
/// representative replaces everything after the first such coordinate by
/// constant `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeCube {
    m: usize,
    n: usize,
    rep: BoxMorphism,
}

impl ConeCube {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the cube itself (the source of the representative).
    pub fn dim(&self) -> usize {
        self.rep.source_dim()
    }

    /// The canonical representative, a morphism into `[1]^{m+n}`.
    pub fn rep(&self) -> &BoxMorphism {
        &self.rep
    }
}

/// For each target coordinate, the constant value it takes, if any.
fn constant_coordinates(f: &BoxMorphism) -> Vec<Option<u8>> {
    let verts: Vec<u32> = (0..(1u32 << f.source_dim())).map(|v| f.apply(v)).collect();
    (1..=f.target_dim())
        .map(|c| {
            let bit = |w: u32| ((w >> (c - 1)) & 1) as u8;
            let first = bit(verts[0]);
            verts.iter().all(|&w| bit(w) == first).then_some(first)
        })
        .collect()
}

/// The first coordinate `j ≤ n` on which `f` is constant `0`.
fn first_low_zero(f: &BoxMorphism, n: usize) -> Option<usize> {
    let consts = constant_coordinates(f);
    (1..=n).find(|&j| consts[j - 1] == Some(0))
}

/// The endomorphism of `[1]^dim` that replaces every coordinate after `j` by
/// constant `0` and keeps the rest.
fn zero_after(dim: usize, j: usize) -> BoxMorphism {
    let mut out = BoxMorphism::identity(dim);
    for c in (j + 1)..=dim {
        let insert = BoxMorphism::face(dim, c, 0).expect("coordinate in range");
        let drop = BoxMorphism::degeneracy(dim, c).expect("coordinate in range");
        let zero_c = insert.compose(&drop).expect("dimensions agree");
        out = zero_c.compose(&out).expect("dimensions agree");
    }
    out
}

/// Canonicalize a cube of `[1]^{m+n}` as an `(m,n)`-cone cube.
///
/// Idempotent: canonicalizing the representative again returns it unchanged.
pub fn cone_canonicalize(f: &BoxMorphism, m: usize, n: usize) -> Result<ConeCube> {
    if f.target_dim() != m + n {
        return Err(Error::DimensionMismatch { expected: m + n, got: f.target_dim() });
    }
    let rep = match first_low_zero(f, n) {
        Some(j) => zero_after(m + n, j).compose(f).expect("dimensions agree"),
        None => f.clone(),
    };
    Ok(ConeCube { m, n, rep })
}

/// Whether the quotient onto the `(m,n)`-cone maps this face to a degenerate
/// cube: some coordinate `i ≤ n` is pinned to `0` while a later coordinate is
/// left free.
pub fn cone_face_degenerate(nf: &FaceNormalForm, m: usize, n: usize) -> bool {
    assert_eq!(nf.ambient_dim(), m + n, "face must live in the (m+n)-cube");
    let free = nf.free_coords();
    (1..=n).any(|i| nf.contains(i, 0) && free.iter().any(|&f| f > i))
}

/// Whether the face is its own canonical representative in the `(m,n)`-cone.
fn cone_cell_canonical(nf: &FaceNormalForm, n: usize) -> bool {
    match (1..=n).find(|&i| nf.contains(i, 0)) {
        None => true,
        Some(i) => ((i + 1)..=nf.ambient_dim()).all(|j| nf.contains(j, 0)),
    }
}

/// Membership in the boundary subcomplex: some coordinate pinned to `0`, or
/// one of the first `n + 1` coordinates pinned to `1`.
fn b_member(nf: &FaceNormalForm, n: usize) -> bool {
    let total = nf.ambient_dim();
    (1..=total).any(|c| nf.contains(c, 0)) || (1..=(n + 1).min(total)).any(|c| nf.contains(c, 1))
}

/// Resolve a face of `[1]^{m+n}` to a normalized cube of a cone-shaped
/// complex whose cells are named by their canonical face representatives.
fn resolve_morphism_in(
    x: &MarkedCubicalComplex,
    f: &BoxMorphism,
    m: usize,
    n: usize,
) -> Result<FormalCube> {
    let canon = cone_canonicalize(f, m, n)?;
    let (epi, face) = box_ops::ez_factor(canon.rep());
    let cell = x
        .find_cell(&face.to_string())
        .ok_or_else(|| Error::InvalidMap(format!("no cell named `{face}`")))?;
    Ok(FormalCube { epi, cell })
}

/// Build the cone quotient restricted to a family of canonical cells.
fn cone_complex_with(
    m: usize,
    n: usize,
    included: impl Fn(&FaceNormalForm) -> bool,
    marked: impl Fn(&FaceNormalForm) -> bool,
) -> Result<MarkedCubicalComplex> {
    let total = m + n;
    let mut forms: Vec<FaceNormalForm> = FaceNormalForm::enumerate(total)
        .into_iter()
        .filter(|nf| cone_cell_canonical(nf, n) && included(nf))
        .collect();
    forms.sort_by_key(|nf| (nf.source_dim(), nf.factors().to_vec()));
    let mut builder = CubicalBuilder::new();
    let mut ids: BTreeMap<FaceNormalForm, CubeId> = BTreeMap::new();
    for nf in &forms {
        let dim = nf.source_dim();
        let mut faces = Vec::with_capacity(2 * dim);
        for i in 1..=dim {
            for eps in [0u8, 1] {
                let sub = box_ops::face_compose(
                    nf,
                    &FaceNormalForm::elementary(dim, i, eps).expect("coordinate in range"),
                )?;
                let canon = cone_canonicalize(&sub.to_morphism(), m, n)?;
                let (epi, face) = box_ops::ez_factor(canon.rep());
                let cell = *ids
                    .get(&face)
                    .ok_or_else(|| Error::InvalidMap(format!("family not face-closed at `{face}`")))?;
                faces.push(FormalCube { epi, cell });
            }
        }
        let id = builder.add_cell(dim, nf.to_string(), faces, dim >= 1 && marked(nf));
        ids.insert(nf.clone(), id);
    }
    builder.build()
}

/// The `(m,n)`-cone as a marked cubical complex.
///
/// Cells are the canonical non-degenerate cone cubes, named by their face
/// representatives; `marked_top` additionally marks the image of the top
/// cube.
pub fn cone_complex(m: usize, n: usize, marked_top: bool) -> Result<MarkedCubicalComplex> {
    let total = m + n;
    cone_complex_with(m, n, |_| true, |nf| marked_top && nf.source_dim() == total)
}

/// The boundary subcomplex of the `(m,n)`-cone together with the two strongly
/// marked variants, in the order (boundary, strong cone, strong boundary).
///
/// The strong marking marks the quotient images of the cubes marked in the
/// strongly `(n+1,1)`-comical cube.
pub fn cone_subobjects(
    m: usize,
    n: usize,
) -> Result<(MarkedCubicalComplex, MarkedCubicalComplex, MarkedCubicalComplex)> {
    if m == 0 {
        return Err(Error::ParamRange("the boundary subcomplex needs m >= 1".into()));
    }
    let b = cone_complex_with(m, n, |nf| b_member(nf, n), |_| false)?;
    let cbar = cone_complex_with(m, n, |_| true, |nf| is_marked_in_strong_cube(nf, n + 1))?;
    let bbar = cone_complex_with(
        m,
        n,
        |nf| b_member(nf, n),
        |nf| is_marked_in_strong_cube(nf, n + 1),
    )?;
    Ok((b, cbar, bbar))
}

/// Whether a cube of `x` satisfies the `(m,n)`-cone condition: precomposition
/// with each elementary `(j,0)` face, `j ≤ n`, agrees with its canonicalized
/// form.
pub fn is_cone(x: &MarkedCubicalComplex, fc: &FormalCube, m: usize, n: usize) -> bool {
    assert_eq!(fc.dim(), m + n, "cone test needs a cube of dimension m + n");
    let total = m + n;
    (1..=n).all(|j| {
        let el = BoxMorphism::face(total, j, 0).expect("coordinate in range");
        let collapsed = zero_after(total, j).compose(&el).expect("dimensions agree");
        x.act(fc, &el) == x.act(fc, &collapsed)
    })
}

/// Whether `f` can be written as `rest ∘ γ_{b,ε}`, i.e. is constant on the
/// fibers of the connection.
fn factors_through_connection(f: &BoxMorphism, b: usize, eps: u8) -> bool {
    let s = f.source_dim();
    if s < 2 || b == 0 || b >= s {
        return false;
    }
    let gamma = BoxMorphism::connection(s, b, eps).expect("index in range");
    let mut image: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..(1u32 << s) {
        let key = gamma.apply(v);
        let val = f.apply(v);
        match image.get(&key) {
            Some(&prev) if prev != val => return false,
            Some(_) => {}
            None => {
                image.insert(key, val);
            }
        }
    }
    true
}

/// Whether `f` is independent of its source coordinate `a`.
fn independent_of(f: &BoxMorphism, a: usize) -> bool {
    let s = f.source_dim();
    let bit = 1u32 << (a - 1);
    (0..(1u32 << s)).all(|v| f.apply(v & !bit) == f.apply(v | bit))
}

/// The innermost factor of a non-injective operator: the highest coordinate
/// the operator is independent of (as a degeneracy), otherwise the highest
/// connection it factors through, trying `ε = 0` before `ε = 1`.
pub fn innermost_epi_factor(f: &BoxMorphism) -> Option<Generator> {
    let s = f.source_dim();
    if s == 0 || s == f.target_dim() {
        return None;
    }
    if let Some(a) = (1..=s).rev().find(|&a| independent_of(f, a)) {
        return Some(Generator::Degeneracy { i: a });
    }
    for b in (1..s).rev() {
        for eps in [0u8, 1] {
            if factors_through_connection(f, b, eps) {
                return Some(Generator::Connection { i: b, eps });
            }
        }
    }
    None
}

/// The cube map inducing the `i`-th coface `[t-1] → [t]`, `0 ≤ i ≤ t`.
fn q_face_inducer(t: usize, i: usize) -> Result<BoxMorphism> {
    if i < t {
        BoxMorphism::face(t, i + 1, 1)
    } else {
        BoxMorphism::face(t, t, 0)
    }
}

/// The cube map inducing the `i`-th codegeneracy `[t+1] → [t]`, `0 ≤ i ≤ t`.
fn q_degeneracy_inducer(t: usize, i: usize) -> Result<BoxMorphism> {
    if i < t {
        BoxMorphism::connection(t + 1, i + 1, 1)
    } else {
        BoxMorphism::degeneracy(t + 1, t + 1)
    }
}

/// The cube map inducing an injective operator, built from its coface
/// factorization with descending skipped values.
fn q_mono_inducer(mono: &SimplicialOperator) -> Result<BoxMorphism> {
    let t = mono.target_dim();
    let missing = mono.missing_values();
    let mut out = BoxMorphism::identity(mono.source_dim());
    for (j, &v) in missing.iter().enumerate().rev() {
        out = q_face_inducer(t - j, v)?.compose(&out)?;
    }
    Ok(out)
}

/// The cube map inducing a surjective operator, built by repeatedly peeling
/// the smallest collapsed index.
fn q_epi_inducer(eta: &SimplicialOperator) -> Result<BoxMorphism> {
    let s = eta.source_dim();
    match eta.collapse_set().first() {
        None => Ok(BoxMorphism::identity(s)),
        Some(&i) => {
            let mut values: Vec<usize> = eta.values().to_vec();
            values.remove(i);
            let inner = q_degeneracy_inducer(s - 1, i)?;
            let rest = SimplicialOperator::new(values, eta.target_dim())?;
            q_epi_inducer(&rest)?.compose(&inner)
        }
    }
}

/// The cube map `[1]^s → [1]^t` inducing an arbitrary operator `[s] → [t]`
/// between the corresponding cone quotients.
pub fn q_inducer(alpha: &SimplicialOperator) -> Result<BoxMorphism> {
    let (epi, mono) = alpha.ez_factor();
    q_mono_inducer(&mono)?.compose(&q_epi_inducer(&epi)?)
}

/// The cubified `n`-simplex: the `(0,n)`-cone, optionally with the top cube
/// marked.
pub fn q_object(n: usize, marked: bool) -> Result<MarkedCubicalComplex> {
    cone_complex(0, n, marked)
}

/// The map of cubified simplices induced by an operator `[s] → [t]`.
pub fn q_operator(alpha: &SimplicialOperator) -> Result<MarkedCubicalMap> {
    let t = alpha.target_dim();
    let dom = q_object(alpha.source_dim(), false)?;
    let cod = q_object(t, false)?;
    let ind = q_inducer(alpha)?;
    let mut assignment = Vec::new();
    for d in 0..=dom.dim() {
        let mut row = Vec::new();
        for id in dom.cells(d) {
            let nf: FaceNormalForm = dom.name(id).parse()?;
            row.push(resolve_morphism_in(&cod, &ind.compose(&nf.to_morphism())?, 0, t)?);
        }
        assignment.push(row);
    }
    MarkedCubicalMap::new(&dom, &cod, assignment)
}

/// The simplicial vertices hit by a canonical cone face: its free coordinates
/// shifted down, closed off by the first `0`-pinned coordinate.
fn delta_vertex_classes(delta: &FaceNormalForm) -> Vec<usize> {
    let n = delta.ambient_dim();
    let terminal = match (1..=n).find(|&i| delta.contains(i, 0)) {
        Some(i) => i - 1,
        None => n,
    };
    let mut classes: Vec<usize> = delta.free_coords().iter().map(|&f| f - 1).collect();
    classes.push(terminal);
    debug_assert!(classes.windows(2).all(|w| w[0] < w[1]), "classes must ascend");
    classes
}

/// The normalized cube underlying the `(i,ε)` face of the cubified
/// `r`-simplex `s` of `x`.
fn q_cell_face(
    x: &MarkedSimplicialComplex,
    s: CellId,
    i: usize,
    eps: u8,
) -> Result<FormalCube> {
    let r = s.dim;
    let el = BoxMorphism::face(r, i, eps)?;
    let canon = cone_canonicalize(&el, 0, r)?;
    let (epi_box, delta) = box_ops::ez_factor(canon.rep());
    let beta = SimplicialOperator::new(delta_vertex_classes(&delta), r)?;
    let fs = x.act(&x.formal(s), &beta);
    let epi = q_epi_inducer(&fs.epi)?.compose(&epi_box)?;
    Ok(FormalCube { epi, cell: CubeId { dim: fs.cell.dim, idx: fs.cell.idx } })
}

/// Cubify a marked simplicial complex cell by cell.
///
/// Non-degenerate `r`-simplices become `r`-cubes with the same names and
/// markings; boundaries are transported through the cone quotients.
pub fn q_functor(x: &MarkedSimplicialComplex) -> Result<MarkedCubicalComplex> {
    let mut builder = CubicalBuilder::new();
    for r in 0..=x.dim() {
        for s in x.cells(r) {
            let mut faces = Vec::with_capacity(2 * r);
            for i in 1..=r {
                for eps in [0u8, 1] {
                    faces.push(q_cell_face(x, s, i, eps)?);
                }
            }
            builder.add_cell(r, x.name(s), faces, x.is_marked(s));
        }
    }
    builder.build()
}

/// Cubify a map of marked simplicial complexes.
pub fn q_map(f: &MarkedSimplicialMap) -> Result<MarkedCubicalMap> {
    let dom = q_functor(f.dom())?;
    let cod = q_functor(f.cod())?;
    let mut assignment = Vec::new();
    for r in 0..=f.dom().dim() {
        let mut row = Vec::new();
        for s in f.dom().cells(r) {
            let fs = f.apply_cell(s);
            row.push(FormalCube {
                epi: q_epi_inducer(&fs.epi)?,
                cell: CubeId { dim: fs.cell.dim, idx: fs.cell.idx },
            });
        }
        assignment.push(row);
    }
    MarkedCubicalMap::new(&dom, &cod, assignment)
}

/// All vertex-surjective box operators `[1]^r → [1]^k`.
fn box_epis(r: usize, k: usize) -> Vec<BoxMorphism> {
    let mut level: BTreeSet<BoxMorphism> = BTreeSet::new();
    level.insert(BoxMorphism::identity(r));
    let mut d = r;
    while d > k {
        let mut next = BTreeSet::new();
        for e in &level {
            for i in 1..=d {
                let g = BoxMorphism::degeneracy(d, i).expect("index in range");
                next.insert(g.compose(e).expect("dimensions agree"));
            }
            for i in 1..d {
                for eps in [0u8, 1] {
                    let g = BoxMorphism::connection(d, i, eps).expect("index in range");
                    next.insert(g.compose(e).expect("dimensions agree"));
                }
            }
        }
        level = next;
        d -= 1;
    }
    level.into_iter().collect()
}

/// Whether the cone cube, read as a simplex, is degenerate: some round trip
/// through a codegeneracy and the matching coface fixes it.
fn is_degenerate_simplex(x: &MarkedCubicalComplex, fc: &FormalCube) -> bool {
    let t = fc.dim();
    (0..t).any(|i| {
        let di = q_face_inducer(t, i).expect("index in range");
        let si = q_degeneracy_inducer(t - 1, i).expect("index in range");
        let round = di.compose(&si).expect("dimensions agree");
        x.act(fc, &round) == *fc
    })
}

/// Peel codegeneracies off a cone cube until the underlying simplex is
/// non-degenerate, then look it up in the index.
fn resolve_cone_simplex(
    x: &MarkedCubicalComplex,
    index: &BTreeMap<FormalCube, CellId>,
    y: &FormalCube,
) -> FormalSimplex {
    let t = y.dim();
    for i in 0..t {
        let di = q_face_inducer(t, i).expect("index in range");
        let si = q_degeneracy_inducer(t - 1, i).expect("index in range");
        let round = di.compose(&si).expect("dimensions agree");
        if x.act(y, &round) == *y {
            let inner = resolve_cone_simplex(x, index, &x.act(y, &di));
            let sigma = SimplicialOperator::degeneracy(t - 1, i).expect("index in range");
            let epi = inner.epi.compose(&sigma).expect("dimensions agree");
            return FormalSimplex { epi, cell: inner.cell };
        }
    }
    FormalSimplex { epi: SimplicialOperator::identity(t), cell: index[y] }
}

/// A readable name for a cone cube: the cell name, with a suffix recording
/// the degeneracy word when the cube is degenerate.
fn cone_name(x: &MarkedCubicalComplex, fc: &FormalCube) -> String {
    if !fc.is_degenerate() {
        return x.name(fc.cell).to_string();
    }
    let word = box_ops::epi_word(&fc.epi).expect("vertex-surjective operator");
    let letters: Vec<String> = word
        .iter()
        .map(|g| match *g {
            Generator::Degeneracy { i } => format!("s{i}"),
            Generator::Connection { i, eps } => format!("g{i},{eps}"),
            Generator::Face { i, eps } => format!("d{i},{eps}"),
        })
        .collect();
    format!("{}*{}", x.name(fc.cell), letters.join("."))
}

/// The cone cubes of `x` in each dimension up to `max_dim`, excluding those
/// that are degenerate as simplices.
fn integral_cones(
    x: &MarkedCubicalComplex,
    max_dim: usize,
    budget: usize,
) -> Result<Vec<Vec<FormalCube>>> {
    let mut seen = 0usize;
    let mut by_dim = Vec::with_capacity(max_dim + 1);
    for r in 0..=max_dim {
        let mut level = Vec::new();
        for k in 0..=r.min(x.dim()) {
            for epi in box_epis(r, k) {
                for cell in x.cells(k) {
                    seen += 1;
                    if seen > budget {
                        return Err(Error::Budget(format!(
                            "cone enumeration passed {budget} candidates"
                        )));
                    }
                    let fc = FormalCube { epi: epi.clone(), cell };
                    if is_cone(x, &fc, 0, r) && !is_degenerate_simplex(x, &fc) {
                        level.push(fc);
                    }
                }
            }
        }
        level.sort();
        by_dim.push(level);
    }
    Ok(by_dim)
}

fn integral_with_cones(
    x: &MarkedCubicalComplex,
    max_dim: usize,
    budget: usize,
) -> Result<(MarkedSimplicialComplex, Vec<Vec<FormalCube>>)> {
    let cones = integral_cones(x, max_dim, budget)?;
    let mut index: BTreeMap<FormalCube, CellId> = BTreeMap::new();
    for (r, level) in cones.iter().enumerate() {
        for (idx, fc) in level.iter().enumerate() {
            index.insert(fc.clone(), CellId { dim: r, idx });
        }
    }
    let mut builder = ComplexBuilder::new();
    for (r, level) in cones.iter().enumerate() {
        for fc in level {
            let faces = if r == 0 {
                Vec::new()
            } else {
                (0..=r)
                    .map(|i| {
                        let di = q_face_inducer(r, i).expect("index in range");
                        resolve_cone_simplex(x, &index, &x.act(fc, &di))
                    })
                    .collect()
            };
            builder.add_cell(r, cone_name(x, fc), faces, r >= 1 && x.is_marked_formal(fc));
        }
    }
    Ok((builder.build()?, cones))
}

/// The simplicial complex of cone cubes of `x`: `r`-simplices are the
/// `(0,r)`-cones, marked when the underlying cube of `x` is.
///
/// Enumeration stops with [`Error::Budget`] once more than `budget` candidate
/// cones have been inspected.
pub fn integral(
    x: &MarkedCubicalComplex,
    max_dim: usize,
    budget: usize,
) -> Result<MarkedSimplicialComplex> {
    Ok(integral_with_cones(x, max_dim, budget)?.0)
}

/// The counit at `x`: the inclusion of the cubified cone complex back into
/// `x`, sending each cone simplex to its underlying cube.
pub fn counit(x: &MarkedCubicalComplex, max_dim: usize, budget: usize) -> Result<MarkedCubicalMap> {
    let (ix, cones) = integral_with_cones(x, max_dim, budget)?;
    let qix = q_functor(&ix)?;
    let mut assignment = cones;
    assignment.truncate(qix.dim() + 1);
    MarkedCubicalMap::new(&qix, x, assignment)
}

/// The retraction operator of a string: vertex `p` goes to the longest
/// prefix of entries that are at most `p`.
pub fn rho_operator(phi: &SimplexString) -> SimplicialOperator {
    let n = phi.n();
    let values: Vec<usize> = (0..=phi.r())
        .map(|p| {
            (1..=n)
                .take_while(|&i| phi.entry(i) <= Entry::Finite(p))
                .count()
        })
        .collect();
    SimplicialOperator::new(values, n).expect("prefix lengths are monotone and bounded")
}

/// The retraction from the triangulated cubified `n`-simplex to the
/// `n`-simplex.  With `marked`, both sides carry the marked-top structure
/// (which needs `n ≥ 1`).
pub fn rho_map(n: usize, marked: bool) -> Result<MarkedSimplicialMap> {
    if marked && n == 0 {
        return Err(Error::ParamRange("the marked retraction needs n >= 1".into()));
    }
    let dom = triangulate(&q_object(n, marked)?);
    let standard =
        if marked { SimplicialStandard::MDelta(n) } else { SimplicialStandard::Delta(n) };
    let cod = make_standard(standard)?;
    let mut assignment = Vec::new();
    for d in 0..=dom.dim() {
        let mut row = Vec::new();
        for id in dom.cells(d) {
            let phi: SimplexString = dom.name(id).parse()?;
            let (epi, mono) = rho_operator(&phi).ez_factor();
            let name = subset_name(mono.values());
            let cell = cod
                .find_cell(&name)
                .ok_or_else(|| Error::InvalidMap(format!("no simplex named `{name}`")))?;
            row.push(FormalSimplex { epi, cell });
        }
        assignment.push(row);
    }
    MarkedSimplicialMap::new(&dom, &cod, assignment)
}

/// The string through which an injective operator includes into the
/// triangulated cubified simplex.
fn zeta_string(beta: &SimplicialOperator) -> SimplexString {
    let r = beta.source_dim();
    let entries: Vec<Entry> = (1..=beta.target_dim())
        .map(|i| {
            if i > beta.apply(r) {
                Entry::PlusInf
            } else if i <= beta.apply(0) {
                Entry::MinusInf
            } else {
                let p = (1..=r).find(|&p| i <= beta.apply(p)).expect("i <= beta(r)");
                Entry::Finite(p)
            }
        })
        .collect();
    SimplexString::new(r, entries).expect("entries bounded by r")
}

fn parse_subset(name: &str) -> Result<Vec<usize>> {
    let values: Option<Vec<usize>> = if name.contains('-') {
        name.split('-').map(|t| t.parse().ok()).collect()
    } else {
        name.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
    };
    values.ok_or_else(|| Error::Parse(format!("not a vertex-subset name: `{name}`")))
}

/// The section of [`rho_map`]: each simplex of the `n`-simplex goes to the
/// string whose finite block boundaries follow the simplex's vertices.
pub fn zeta_map(n: usize, marked: bool) -> Result<MarkedSimplicialMap> {
    if marked && n == 0 {
        return Err(Error::ParamRange("the marked section needs n >= 1".into()));
    }
    let standard =
        if marked { SimplicialStandard::MDelta(n) } else { SimplicialStandard::Delta(n) };
    let dom = make_standard(standard)?;
    let cod = triangulate(&q_object(n, marked)?);
    let mut assignment = Vec::new();
    for d in 0..=dom.dim() {
        let mut row = Vec::new();
        for id in dom.cells(d) {
            let beta = SimplicialOperator::new(parse_subset(dom.name(id))?, n)?;
            let phi = zeta_string(&beta);
            let cell = cod
                .find_cell(&phi.to_string())
                .ok_or_else(|| Error::InvalidMap(format!("no string named `{phi}`")))?;
            row.push(FormalSimplex { epi: SimplicialOperator::identity(d), cell });
        }
        assignment.push(row);
    }
    MarkedSimplicialMap::new(&dom, &cod, assignment)
}

/// The homotopy on strings over `n + 1` coordinates: with `q` the last
/// entry, every entry below `q` is replaced by the running maximum capped at
/// `q`, and entries at least `q` are kept.
pub fn h_string(phi: &SimplexString) -> SimplexString {
    let q = phi.entry(phi.n());
    let mut running_max = Entry::MinusInf;
    let entries: Vec<Entry> = (1..=phi.n())
        .map(|i| {
            let e = phi.entry(i);
            running_max = running_max.max(e);
            if e >= q {
                e
            } else {
                running_max.min(q)
            }
        })
        .collect();
    SimplexString::new(phi.r(), entries).expect("entries bounded by r")
}

/// A family of candidate cone composites: `(m, n, cone)` indexes the chosen
/// composite of that `(m,n)`-cone.
pub type ThetaTable = BTreeMap<(usize, usize, FormalCube), FormalCube>;

/// One failed coherence condition of a candidate table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaViolation {
    pub identity: String,
    pub m: usize,
    pub n: usize,
    pub detail: String,
}

fn theta_entry_violations(
    x: &MarkedCubicalComplex,
    table: &ThetaTable,
    m: usize,
    n: usize,
    xc: &FormalCube,
    th: &FormalCube,
) -> Vec<ThetaViolation> {
    let mut out = Vec::new();
    let bad = |identity: &str, detail: String, out: &mut Vec<ThetaViolation>| {
        out.push(ThetaViolation { identity: identity.into(), m, n, detail });
    };
    if m == 0 {
        bad("domain", "composites are indexed by m >= 1".into(), &mut out);
        return out;
    }
    if xc.dim() != m + n || th.dim() != m + n + 1 {
        bad(
            "domain",
            format!("expected dimensions {} and {}", m + n, m + n + 1),
            &mut out,
        );
        return out;
    }
    let total = m + n;
    if !is_cone(x, xc, m, n) {
        bad("domain", format!("{xc:?} is not an (m,n)-cone"), &mut out);
    }
    if !is_cone(x, th, m, n + 1) {
        bad("value", format!("{th:?} is not an (m,n+1)-cone"), &mut out);
    }
    // Marking: the composite must factor through the strongly marked cone.
    for nf in FaceNormalForm::enumerate(total + 1) {
        if nf.source_dim() >= 1
            && is_marked_in_strong_cube(&nf, n + 2)
            && !x.is_marked_formal(&x.act(th, &nf.to_morphism()))
        {
            bad("marking", format!("face `{nf}` of the composite is unmarked"), &mut out);
            break;
        }
    }
    let face = |d: usize, i: usize, e: u8| BoxMorphism::face(d, i, e).expect("index in range");
    // (1): low positive faces of the composite are composites of faces.
    for i in 1..=n {
        if let Some(prev) = table.get(&(m, n - 1, x.act(xc, &face(total, i, 1)))) {
            if x.act(th, &face(total + 1, i, 1)) != *prev {
                bad("theta-1", format!("at i = {i}"), &mut out);
            }
        }
    }
    // (2): the (n+1,1) face recovers the cone itself.
    if x.act(th, &face(total + 1, n + 1, 1)) != *xc {
        bad("theta-2", "the marked face does not recover the cone".into(), &mut out);
    }
    // (3): high negative faces.
    if m >= 2 {
        for i in (n + 2)..=(total + 1) {
            if let Some(prev) = table.get(&(m - 1, n, x.act(xc, &face(total, i - 1, 0)))) {
                if x.act(th, &face(total + 1, i, 0)) != *prev {
                    bad("theta-3", format!("at i = {i}"), &mut out);
                }
            }
        }
    }
    // (4): high degeneracies.
    for i in (n + 2)..=(total + 2) {
        let outer = BoxMorphism::degeneracy(total + 2, i).expect("index in range");
        let inner = BoxMorphism::degeneracy(total + 1, i - 1).expect("index in range");
        if let Some(prev) = table.get(&(m + 1, n, x.act(xc, &inner))) {
            if x.act(th, &outer) != *prev {
                bad("theta-4", format!("at i = {i}"), &mut out);
            }
        }
    }
    // (5): low min-connections.
    for i in 1..=n {
        let outer = BoxMorphism::connection(total + 2, i, 1).expect("index in range");
        let inner = BoxMorphism::connection(total + 1, i, 1).expect("index in range");
        if let Some(prev) = table.get(&(m, n + 1, x.act(xc, &inner))) {
            if x.act(th, &outer) != *prev {
                bad("theta-5", format!("at i = {i}"), &mut out);
            }
        }
    }
    // (6): high connections of either sign.
    for i in (n + 2)..=(total + 1) {
        for eps in [0u8, 1] {
            let outer = BoxMorphism::connection(total + 2, i, eps).expect("index in range");
            let inner = BoxMorphism::connection(total + 1, i - 1, eps).expect("index in range");
            if let Some(prev) = table.get(&(m + 1, n, x.act(xc, &inner))) {
                if x.act(th, &outer) != *prev {
                    bad("theta-6", format!("at i = {i}, eps = {eps}"), &mut out);
                }
            }
        }
    }
    // (7): the composite of the composite is its min-connection.
    if let Some(next) = table.get(&(m, n + 1, th.clone())) {
        let gamma = BoxMorphism::connection(total + 2, n + 1, 1).expect("index in range");
        if *next != x.act(th, &gamma) {
            bad("theta-7", "iterated composite disagrees".into(), &mut out);
        }
    }
    // (8): cones that already shed a cube dimension compose trivially.
    if m >= 1 && is_cone(x, xc, m - 1, n + 1) {
        let gamma = BoxMorphism::connection(total + 1, n + 1, 1).expect("index in range");
        if *th != x.act(xc, &gamma) {
            bad("theta-8", "forced composite disagrees".into(), &mut out);
        }
    }
    out
}

/// Check every decidable coherence condition of a candidate table of cone
/// composites over `x`.  Identities whose counterpart entry is absent from
/// the table are skipped; everything else is reported.
pub fn check_theta(x: &MarkedCubicalComplex, table: &ThetaTable) -> Vec<ThetaViolation> {
    let mut out = Vec::new();
    for ((m, n, xc), th) in table {
        out.extend(theta_entry_violations(x, table, *m, *n, xc, th));
    }
    out
}

/// The forced base family: for every `(1,n)`-cone with `n < n_max`, the
/// composite given by its low min-connection.
pub fn theta_base_table(
    x: &MarkedCubicalComplex,
    n_max: usize,
    budget: usize,
) -> Result<ThetaTable> {
    let mut table = ThetaTable::new();
    let mut seen = 0usize;
    for n in 0..n_max {
        let total = n + 1;
        for k in 0..=total.min(x.dim()) {
            for epi in box_epis(total, k) {
                for cell in x.cells(k) {
                    seen += 1;
                    if seen > budget {
                        return Err(Error::Budget(format!(
                            "cone enumeration passed {budget} candidates"
                        )));
                    }
                    let fc = FormalCube { epi: epi.clone(), cell };
                    if is_cone(x, &fc, 1, n) {
                        let gamma =
                            BoxMorphism::connection(total + 1, n + 1, 1).expect("index in range");
                        let th = x.act(&fc, &gamma);
                        table.insert((1, n, fc), th);
                    }
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical_core::{
        face_subset_complex, find_isomorphism, make_cube_object, pushout, trivialize,
        CubicalStandard,
    };
    use crate::simplicial_core::find_isomorphism as find_simplicial_isomorphism;
    use crate::simplicial_core::trivialize as trivialize_simplicial;

    fn all_face_morphisms(total: usize) -> Vec<BoxMorphism> {
        FaceNormalForm::enumerate(total).into_iter().map(|nf| nf.to_morphism()).collect()
    }

    #[test]
    fn canonicalization_is_idempotent_and_collapses_low_zero_tails() {
        for total in 0..=3 {
            for m in 0..=total {
                let n = total - m;
                for f in all_face_morphisms(total) {
                    let once = cone_canonicalize(&f, m, n).unwrap();
                    let twice = cone_canonicalize(once.rep(), m, n).unwrap();
                    assert_eq!(once, twice);
                }
            }
        }
        // In the (0,2)-cone the two vertices with first coordinate 0 coincide.
        let a = BoxMorphism::face(2, 1, 0).unwrap().compose(&BoxMorphism::face(1, 1, 0).unwrap());
        let b = BoxMorphism::face(2, 2, 1).unwrap().compose(&BoxMorphism::face(1, 1, 0).unwrap());
        assert_eq!(
            cone_canonicalize(&a.unwrap(), 0, 2).unwrap(),
            cone_canonicalize(&b.unwrap(), 0, 2).unwrap()
        );
        // No constant-0 coordinate among the first n: the cube is untouched.
        let c = BoxMorphism::face(2, 1, 1).unwrap();
        assert_eq!(cone_canonicalize(&c, 0, 2).unwrap().rep(), &c);
        let wrong = cone_canonicalize(&c, 0, 1);
        assert!(matches!(wrong, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn canonical_forms_are_stable_under_parameter_shifts() {
        for total in 0..=4 {
            for f in all_face_morphisms(total) {
                for n in 0..=total {
                    let m = total - n;
                    for k in 0..=n {
                        let outer = cone_canonicalize(&f, m + k, n - k).unwrap();
                        assert_eq!(
                            cone_canonicalize(outer.rep(), m, n).unwrap(),
                            cone_canonicalize(&f, m, n).unwrap(),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn face_degeneracy_matches_the_canonicalization_oracle() {
        for total in 0..=4 {
            for m in 0..=total {
                let n = total - m;
                for nf in FaceNormalForm::enumerate(total) {
                    let canon = cone_canonicalize(&nf.to_morphism(), m, n).unwrap();
                    let (epi, _) = box_ops::ez_factor(canon.rep());
                    let degenerate = epi.source_dim() != epi.target_dim();
                    assert_eq!(
                        cone_face_degenerate(&nf, m, n),
                        degenerate,
                        "disagreement at {nf} with (m,n) = ({m},{n})"
                    );
                }
            }
        }
        // Spot checks: no low coordinates, a collapsing pin, a closed tail.
        assert!(!cone_face_degenerate(&FaceNormalForm::identity(2), 2, 0));
        assert!(cone_face_degenerate(&FaceNormalForm::elementary(2, 1, 0).unwrap(), 0, 2));
        let closed = FaceNormalForm::new(2, vec![(2, 1), (1, 0)]).unwrap();
        assert!(!cone_face_degenerate(&closed, 0, 2));
    }

    #[test]
    fn cone_complexes_at_degenerate_parameters_are_cubes() {
        for m in 0..=3 {
            let cone = cone_complex(m, 0, false).unwrap();
            let cube = make_cube_object(CubicalStandard::Cube(m)).unwrap();
            assert!(find_isomorphism(&cone, &cube).is_some(), "failed at m = {m}");
        }
    }

    #[test]
    fn the_lowest_cone_parameters_coincide() {
        for n in 1..=4 {
            let left = cone_complex(0, n, false).unwrap();
            let right = cone_complex(1, n - 1, false).unwrap();
            for d in 0..=left.dim().max(right.dim()) {
                let names = |x: &MarkedCubicalComplex| -> Vec<String> {
                    x.cells(d).map(|id| x.name(id).to_string()).collect()
                };
                assert_eq!(names(&left), names(&right), "cells differ at n = {n}, dim {d}");
            }
            assert!(find_isomorphism(&left, &right).is_some());
        }
    }

    #[test]
    fn cubified_simplices_count_vertex_subsets() {
        // Cells of the cubified n-simplex in dimension t correspond to the
        // (t+1)-element subsets of its vertices.
        let binomial = |n: usize, k: usize| -> usize {
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        };
        for n in 0..=4 {
            let q = q_object(n, false).unwrap();
            assert_eq!(q.dim(), n);
            for t in 0..=n {
                assert_eq!(q.cell_count(t), binomial(n + 1, t + 1), "at n = {n}, t = {t}");
            }
        }
        let marked = q_object(2, true).unwrap();
        let marked_cells: Vec<_> = marked
            .all_cells()
            .filter(|&id| marked.is_marked(id))
            .collect();
        assert_eq!(marked_cells, vec![CubeId { dim: 2, idx: 0 }]);
        assert!(find_isomorphism(
            &q_object(1, false).unwrap(),
            &make_cube_object(CubicalStandard::Cube(1)).unwrap()
        )
        .is_some());
        assert_eq!(q_object(0, false).unwrap().total_cells(), 1);
    }

    #[test]
    fn face_images_sort_by_their_parameters() {
        for total in 1..=3 {
            for m in 0..=total {
                let n = total - m;
                let cod = cone_complex(m, n, false).unwrap();
                let mut include = |dom: &MarkedCubicalComplex, i: usize, eps: u8| {
                    let el = BoxMorphism::face(total, i, eps).unwrap();
                    let mut assignment = Vec::new();
                    for d in 0..=dom.dim() {
                        let row: Vec<FormalCube> = dom
                            .cells(d)
                            .map(|id| {
                                let nf: FaceNormalForm = dom.name(id).parse().unwrap();
                                let f = el.compose(&nf.to_morphism()).unwrap();
                                resolve_morphism_in(&cod, &f, m, n).unwrap()
                            })
                            .collect();
                        assignment.push(row);
                    }
                    MarkedCubicalMap::new(dom, &cod, assignment).unwrap()
                };
                // Positive low faces restrict the cone parameter.
                for i in 1..=n {
                    let dom = cone_complex(m, n - 1, false).unwrap();
                    let map = include(&dom, i, 1);
                    assert!(map.is_mono() && map.is_regular(), "at ({m},{n}), i = {i}");
                }
                // High faces of either sign restrict the cube parameter.
                for i in (n + 1)..=total {
                    for eps in [0u8, 1] {
                        let dom = cone_complex(m - 1, n, false).unwrap();
                        let map = include(&dom, i, eps);
                        assert!(map.is_mono() && map.is_regular(), "at ({m},{n}), i = {i}");
                    }
                }
                // Negative low faces collapse onto the cone point's cube.
                for i in 1..=n {
                    let el = BoxMorphism::face(total, i, 0).unwrap();
                    let fc = resolve_morphism_in(&cod, &el, m, n).unwrap();
                    assert_eq!(fc.cell.dim, i - 1);
                    assert_eq!(fc.is_degenerate(), i < total);
                }
            }
        }
    }

    #[test]
    fn cone_faces_and_degeneracies_follow_the_sort_rules() {
        for total in 1..=3 {
            for m in 0..=total {
                let n = total - m;
                let host = cone_complex(m, n, false).unwrap();
                for k in 0..=total {
                    for epi in box_epis(total, k) {
                        for cell in host.cells(k) {
                            let fc = FormalCube { epi: epi.clone(), cell };
                            if !is_cone(&host, &fc, m, n) {
                                continue;
                            }
                            for i in 1..=n {
                                let f = BoxMorphism::face(total, i, 1).unwrap();
                                assert!(is_cone(&host, &host.act(&fc, &f), m, n - 1));
                            }
                            for i in (n + 1)..=total {
                                let f = BoxMorphism::face(total, i, 1).unwrap();
                                assert!(is_cone(&host, &host.act(&fc, &f), m - 1, n));
                            }
                            if m >= 1 {
                                for i in 1..=total {
                                    let f = BoxMorphism::face(total, i, 0).unwrap();
                                    assert!(is_cone(&host, &host.act(&fc, &f), m - 1, n));
                                }
                            }
                            for i in (n + 1)..=(total + 1) {
                                let s = BoxMorphism::degeneracy(total + 1, i).unwrap();
                                assert!(is_cone(&host, &host.act(&fc, &s), m + 1, n));
                            }
                            for i in 1..=n {
                                let g = BoxMorphism::connection(total + 1, i, 1).unwrap();
                                assert!(is_cone(&host, &host.act(&fc, &g), m, n + 1));
                            }
                            for i in (n + 1)..=total {
                                for eps in [0u8, 1] {
                                    let g = BoxMorphism::connection(total + 1, i, eps).unwrap();
                                    assert!(is_cone(&host, &host.act(&fc, &g), m + 1, n));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_cones_constrain_their_innermost_factor() {
        for total in 1..=4 {
            for m in 1..=total {
                let n = total - m;
                let host = cone_complex(m, n, false).unwrap();
                for k in 0..total {
                    for epi in box_epis(total, k) {
                        for cell in host.cells(k) {
                            let fc = FormalCube { epi: epi.clone(), cell };
                            if !is_cone(&host, &fc, m, n) {
                                continue;
                            }
                            match innermost_epi_factor(&fc.epi) {
                                Some(Generator::Degeneracy { i }) => {
                                    assert!(i >= n + 1, "sigma_{i} at ({m},{n})")
                                }
                                Some(Generator::Connection { i, eps: 0 }) => {
                                    assert!(i >= n + 1, "gamma_{i},0 at ({m},{n})")
                                }
                                Some(_) => {}
                                None => panic!("a proper epi must have a factor"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_subcomplexes_at_minimal_parameters() {
        let (b, cbar, bbar) = cone_subobjects(1, 0).unwrap();
        let endpoint = |eps: u8| FaceNormalForm::elementary(1, 1, eps).unwrap().to_string();
        let names: Vec<String> = b.cells(0).map(|id| b.name(id).to_string()).collect();
        assert_eq!(names, vec![endpoint(0), endpoint(1)]);
        assert_eq!(b.total_cells(), 2);
        // The strong cone at (1,0) marks its only edge; the boundary cannot.
        assert!(cbar.all_cells().any(|id| cbar.is_marked(id)));
        assert!(bbar.all_cells().all(|id| !bbar.is_marked(id)));
        assert!(cone_subobjects(0, 1).is_err());
    }

    #[test]
    fn boundary_subcomplexes_are_spanned_by_the_generating_faces() {
        for (m, n) in [(1, 0), (1, 1), (2, 0), (2, 1), (1, 2)] {
            let total = m + n;
            let (b, _, _) = cone_subobjects(m, n).unwrap();
            assert_eq!(b.cell_count(total), 0);
            assert_eq!(b.cell_count(total - 1), n + 1 + m, "wrong top count at ({m},{n})");
            // Every cell is reachable from a top-dimensional generator.
            let mut reached: BTreeSet<CubeId> = BTreeSet::new();
            let mut queue: Vec<CubeId> = b.cells(total - 1).collect();
            while let Some(id) = queue.pop() {
                if !reached.insert(id) {
                    continue;
                }
                for i in 1..=id.dim {
                    for eps in [0u8, 1] {
                        queue.push(b.face(id, i, eps).cell);
                    }
                }
            }
            assert_eq!(reached.len(), b.total_cells(), "unreachable cells at ({m},{n})");
        }
    }

    #[test]
    fn the_boundary_inclusion_pushes_out_to_the_strong_cone() {
        for total in 1..=3 {
            for m in 1..=total {
                let n = total - m;
                let gamma = face_subset_complex(
                    total,
                    |nf| b_member(nf, n),
                    |nf| is_marked_in_strong_cube(nf, n + 1),
                )
                .unwrap();
                let strong =
                    make_cube_object(CubicalStandard::StrongComical(total, n + 1)).unwrap();
                let f = MarkedCubicalMap::by_name_inclusion(&gamma, &strong).unwrap();
                let (_, cbar, bbar) = cone_subobjects(m, n).unwrap();
                let mut assignment = Vec::new();
                for d in 0..=gamma.dim() {
                    let row: Vec<FormalCube> = gamma
                        .cells(d)
                        .map(|id| {
                            let nf: FaceNormalForm = gamma.name(id).parse().unwrap();
                            resolve_morphism_in(&bbar, &nf.to_morphism(), m, n).unwrap()
                        })
                        .collect();
                    assignment.push(row);
                }
                let g = MarkedCubicalMap::new(&gamma, &bbar, assignment).unwrap();
                let (p, _, _) = pushout(&f, &g).unwrap();
                assert!(
                    find_isomorphism(&p, &cbar).is_some(),
                    "pushout is not the strong cone at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn elementary_operators_induce_the_expected_cube_maps() {
        // Cofaces into [2].
        let delta = |i: usize| SimplicialOperator::face(2, i).unwrap();
        assert_eq!(q_inducer(&delta(0)).unwrap(), BoxMorphism::face(2, 1, 1).unwrap());
        assert_eq!(q_inducer(&delta(1)).unwrap(), BoxMorphism::face(2, 2, 1).unwrap());
        assert_eq!(q_inducer(&delta(2)).unwrap(), BoxMorphism::face(2, 2, 0).unwrap());
        // Codegeneracies out of [2].
        let sigma = |i: usize| SimplicialOperator::degeneracy(1, i).unwrap();
        assert_eq!(q_inducer(&sigma(0)).unwrap(), BoxMorphism::connection(2, 1, 1).unwrap());
        assert_eq!(q_inducer(&sigma(1)).unwrap(), BoxMorphism::degeneracy(2, 2).unwrap());
        // The max-connection does not descend to the quotients: the two
        // vertices 01 and 00 of the square are identified in the cubified
        // 2-simplex, but their images under max differ.
        let bad = BoxMorphism::connection(2, 1, 0).unwrap();
        let identified = |v: u32, w: u32| {
            let vertex = |v: u32| {
                let nf = FaceNormalForm::new(
                    2,
                    vec![(2, (v >> 1 & 1) as u8), (1, (v & 1) as u8)],
                )
                .unwrap();
                cone_canonicalize(&nf.to_morphism(), 0, 2).unwrap()
            };
            vertex(v) == vertex(w)
        };
        assert!(identified(0b00, 0b10));
        assert_ne!(bad.apply(0b00), bad.apply(0b10));
    }

    #[test]
    fn operator_maps_compose_semantically() {
        let check = |outer: &SimplicialOperator, inner: &SimplicialOperator| {
            let qo = q_operator(outer).unwrap();
            let qi = q_operator(inner).unwrap();
            let composite = q_operator(&outer.compose(inner).unwrap()).unwrap();
            assert_eq!(qo.compose(&qi).unwrap(), composite);
        };
        for t in 1..=3usize {
            for i in 0..=t {
                for j in 0..=(t - 1) {
                    check(
                        &SimplicialOperator::face(t, i).unwrap(),
                        &SimplicialOperator::degeneracy(t - 1, j).unwrap(),
                    );
                    check(
                        &SimplicialOperator::degeneracy(t - 1, j).unwrap(),
                        &SimplicialOperator::face(t, i).unwrap(),
                    );
                }
            }
        }
        for i in 0..=3 {
            for j in 0..=2 {
                check(
                    &SimplicialOperator::face(3, i).unwrap(),
                    &SimplicialOperator::face(2, j).unwrap(),
                );
            }
        }
    }

    #[test]
    fn the_induced_cube_maps_preserve_normal_forms() {
        // The generator word of an induced injective map is already the
        // normal form computed by the factorization.
        for n in 0..=5usize {
            for mask in 0..(1u32 << (n + 1)) {
                let subset: Vec<usize> = (0..=n).filter(|p| mask >> p & 1 == 1).collect();
                if subset.is_empty() {
                    continue;
                }
                let mono = SimplicialOperator::new(subset, n).unwrap();
                let ind = q_mono_inducer(&mono).unwrap();
                let (epi, face) = box_ops::ez_factor(&ind);
                assert_eq!(epi.source_dim(), epi.target_dim(), "inducer must be a face");
                let word: Vec<Generator> = face
                    .factors()
                    .iter()
                    .map(|&(i, eps)| Generator::Face { i, eps })
                    .collect();
                assert_eq!(ind.generator_word(), word, "rewriting needed for {mono:?}");
            }
        }
    }

    #[test]
    fn cubifying_standard_simplices_recovers_the_cone_quotients() {
        for n in 0..=3 {
            let via_functor =
                q_functor(&make_standard(SimplicialStandard::Delta(n)).unwrap()).unwrap();
            assert!(find_isomorphism(&via_functor, &q_object(n, false).unwrap()).is_some());
        }
        let marked =
            q_functor(&make_standard(SimplicialStandard::MDelta(2)).unwrap()).unwrap();
        assert!(find_isomorphism(&marked, &q_object(2, true).unwrap()).is_some());
    }

    #[test]
    fn cubified_horn_inclusions_push_out_open_boxes() {
        for n in 1..=3usize {
            for k in 1..=n {
                let (i, eps) = if k < n { (k + 1, 1) } else { (n, 0) };
                let obox = make_cube_object(CubicalStandard::OpenBox(n, i, eps)).unwrap();
                let comical = make_cube_object(CubicalStandard::Comical(n, i, eps)).unwrap();
                let f = MarkedCubicalMap::by_name_inclusion(&obox, &comical).unwrap();
                let horn =
                    q_functor(&make_standard(SimplicialStandard::Horn(n, k)).unwrap()).unwrap();
                let mut assignment = Vec::new();
                for d in 0..=obox.dim() {
                    let row: Vec<FormalCube> = obox
                        .cells(d)
                        .map(|id| {
                            let nf: FaceNormalForm = obox.name(id).parse().unwrap();
                            let canon = cone_canonicalize(&nf.to_morphism(), 0, n).unwrap();
                            let (epi, face) = box_ops::ez_factor(canon.rep());
                            let name = subset_name(&delta_vertex_classes(&face));
                            let cell = horn.find_cell(&name).unwrap();
                            FormalCube { epi, cell }
                        })
                        .collect();
                    assignment.push(row);
                }
                let g = MarkedCubicalMap::new(&obox, &horn, assignment).unwrap();
                let (p, _, _) = pushout(&f, &g).unwrap();
                let filled =
                    q_functor(&make_standard(SimplicialStandard::ADelta(n, k)).unwrap()).unwrap();
                assert!(
                    find_isomorphism(&p, &filled).is_some(),
                    "pushout mismatch at n = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn cubification_commutes_with_trivialization() {
        for d in 0..=2usize {
            for level in 0..=2usize {
                let simp = make_standard(SimplicialStandard::Delta(d)).unwrap();
                let left = q_functor(&trivialize_simplicial(&simp, level)).unwrap();
                let right = trivialize(&q_functor(&simp).unwrap(), level);
                assert!(find_isomorphism(&left, &right).is_some(), "at d = {d}, level {level}");
            }
        }
    }

    #[test]
    fn cone_simplices_of_small_complexes() {
        let point = make_cube_object(CubicalStandard::Cube(0)).unwrap();
        let ipoint = integral(&point, 2, 1_000).unwrap();
        assert!(find_simplicial_isomorphism(
            &ipoint,
            &make_standard(SimplicialStandard::Delta(0)).unwrap()
        )
        .is_some());
        // The square has no non-degenerate cone 2-simplices: its cone
        // complex is the boundary 4-cycle.
        let square = make_cube_object(CubicalStandard::Cube(2)).unwrap();
        let isquare = integral(&square, 3, 100_000).unwrap();
        assert_eq!(isquare.cell_count(0), 4);
        assert_eq!(isquare.cell_count(1), 4);
        assert_eq!(isquare.cell_count(2), 0);
        assert!(matches!(integral(&square, 2, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn the_unit_of_the_cubification_adjunction_is_an_isomorphism() {
        for n in 0..=2usize {
            let q = q_object(n, false).unwrap();
            let iq = integral(&q, n + 1, 1_000_000).unwrap();
            let delta = make_standard(SimplicialStandard::Delta(n)).unwrap();
            assert!(find_simplicial_isomorphism(&iq, &delta).is_some(), "at n = {n}");
        }
        let iq = integral(&q_object(2, true).unwrap(), 3, 1_000_000).unwrap();
        let mdelta = make_standard(SimplicialStandard::MDelta(2)).unwrap();
        assert!(find_simplicial_isomorphism(&iq, &mdelta).is_some());
    }

    #[test]
    fn the_counit_is_a_regular_inclusion() {
        let square = make_cube_object(CubicalStandard::Cube(2)).unwrap();
        let eps = counit(&square, 3, 100_000).unwrap();
        assert!(eps.is_mono());
        assert!(eps.is_regular());
        let boundary = make_cube_object(CubicalStandard::Boundary(2)).unwrap();
        assert!(find_isomorphism(eps.dom(), &boundary).is_some());
    }

    #[test]
    fn cone_recognition_on_the_interval() {
        let interval = make_cube_object(CubicalStandard::Cube(1)).unwrap();
        let top = interval.formal(CubeId { dim: 1, idx: 0 });
        let min = BoxMorphism::connection(2, 1, 1).unwrap();
        let max = BoxMorphism::connection(2, 1, 0).unwrap();
        let s1 = BoxMorphism::degeneracy(2, 1).unwrap();
        let s2 = BoxMorphism::degeneracy(2, 2).unwrap();
        assert!(is_cone(&interval, &interval.act(&top, &min), 0, 2));
        assert!(!is_cone(&interval, &interval.act(&top, &max), 0, 2));
        assert!(!is_cone(&interval, &interval.act(&top, &s1), 0, 2));
        assert!(is_cone(&interval, &interval.act(&top, &s2), 0, 2));
    }

    #[test]
    fn the_retraction_splits_along_the_section() {
        for n in 0..=3usize {
            let rho = rho_map(n, false).unwrap();
            let zeta = zeta_map(n, false).unwrap();
            let composite = rho.compose(&zeta).unwrap();
            let identity = MarkedSimplicialMap::identity(zeta.dom());
            assert_eq!(composite, identity, "at n = {n}");
        }
        for n in 1..=3usize {
            let rho = rho_map(n, true).unwrap();
            let zeta = zeta_map(n, true).unwrap();
            assert_eq!(rho.compose(&zeta).unwrap(), MarkedSimplicialMap::identity(zeta.dom()));
        }
        assert!(rho_map(0, true).is_err());
    }

    #[test]
    fn marked_strings_retract_to_degenerate_simplices() {
        for n in 1..=4usize {
            for r in 1..=n {
                for phi in SimplexString::enumerate(n, r) {
                    if phi.is_degenerate() || !phi.is_marked() {
                        continue;
                    }
                    let alpha = rho_operator(&phi);
                    assert!(
                        alpha.values().windows(2).any(|w| w[0] == w[1]),
                        "marked string {phi} retracts to a non-degenerate simplex"
                    );
                }
            }
        }
    }

    #[test]
    fn the_homotopy_fixes_both_ends() {
        for n in 0..=2usize {
            for r in 0..=(n + 1) {
                for phi in SimplexString::enumerate(n + 1, r) {
                    let chi = h_string(&phi);
                    assert_eq!(chi.entry(n + 1), phi.entry(n + 1));
                    if phi.entry(n + 1) == Entry::MinusInf {
                        // Everything is at least the last entry: identity.
                        assert_eq!(chi, phi);
                    }
                    if phi.entry(n + 1) == Entry::PlusInf {
                        // Entries become the running maximum.
                        let mut max = Entry::MinusInf;
                        for i in 1..=n {
                            max = max.max(phi.entry(i));
                            assert_eq!(chi.entry(i), max);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn the_homotopy_transfers_markings_at_its_endpoints() {
        // At the two ends of the homotopy coordinate the string map is the
        // identity and the running-maximum transform; both preserve the
        // no-complete-substring condition on the remaining coordinates.
        for n in 1..=3usize {
            for r in 0..=(n + 1) {
                for phi in SimplexString::enumerate(n + 1, r) {
                    let chi = h_string(&phi);
                    let head = |s: &SimplexString| {
                        SimplexString::new(s.r(), s.entries()[..n].to_vec()).unwrap()
                    };
                    match phi.entry(n + 1) {
                        Entry::MinusInf | Entry::PlusInf => {
                            if head(&phi).is_marked() {
                                assert!(head(&chi).is_marked(), "marking lost on {phi}");
                            }
                        }
                        Entry::Finite(_) => {}
                    }
                }
            }
        }
    }

    #[test]
    fn the_homotopy_commutes_with_operators() {
        for n in 1..=3usize {
            for r in 0..=(n + 1) {
                for phi in SimplexString::enumerate(n + 1, r) {
                    let chi = h_string(&phi);
                    assert_eq!(chi.entry(n + 1), phi.entry(n + 1));
                    for i in 0..=r {
                        if r >= 1 {
                            let alpha = SimplicialOperator::face(r, i).unwrap();
                            assert_eq!(
                                h_string(&phi.act(&alpha).unwrap()),
                                chi.act(&alpha).unwrap(),
                                "face action differs on {phi}"
                            );
                        }
                        let sigma = SimplicialOperator::degeneracy(r, i).unwrap();
                        assert_eq!(
                            h_string(&phi.act(&sigma).unwrap()),
                            chi.act(&sigma).unwrap(),
                            "degeneracy action differs on {phi}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn the_forced_base_family_is_coherent_and_corruption_is_flagged() {
        let square = make_cube_object(CubicalStandard::Cube(2)).unwrap();
        let table = theta_base_table(&square, 2, 1_000_000).unwrap();
        assert!(!table.is_empty());
        assert_eq!(check_theta(&square, &table), Vec::new());
        // Replacing one composite by the wrong connection breaks identity 2.
        let mut corrupted = table.clone();
        let ((m, n, xc), _) = corrupted
            .iter()
            .find(|((m, _, xc), _)| *m == 1 && !xc.is_degenerate() && xc.dim() >= 1)
            .map(|(k, v)| (k.clone(), v.clone()))
            .unwrap();
        let wrong = square.act(&xc, &BoxMorphism::connection(xc.dim() + 1, n + 1, 0).unwrap());
        corrupted.insert((m, n, xc), wrong);
        let violations = check_theta(&square, &corrupted);
        assert!(violations.iter().any(|v| v.identity == "theta-2"));
    }

    #[test]
    fn the_base_table_respects_budgets() {
        let square = make_cube_object(CubicalStandard::Cube(2)).unwrap();
        assert!(matches!(theta_base_table(&square, 2, 5), Err(Error::Budget(_))));
    }
}
