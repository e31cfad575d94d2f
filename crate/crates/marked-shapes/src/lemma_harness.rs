//! A registry of exhaustive, deterministic verifications of the
//! combinatorial facts the library is built around.
//!
//! The module has two layers.  The lower layer is the bookkeeping of
//! *essential* simplices of a triangulated cube — interior and
//! non-degenerate strings — with their preamble data ([`essential_data`]),
//! the normalization bijection ([`normalize`], [`denormalize`]), the
//! insertion order ([`simplex_order_less`]), the `ω`/`Ω` simplex families
//! ([`omega`], [`big_omega`]) and the filtration complexes built from them
//! ([`xi_complexes`]).  The upper layer is [`verify`]: a table of named
//! checks, each of which enumerates its full finite case space — nothing is
//! sampled — and returns a [`LemmaReport`] whose failure list is empty
//! exactly when the statement held on every case.
//!
//! Case enumeration is deterministic and the checks are independent, so
//! they run on a worker pool; the `MARKED_SHAPES_THREADS` environment
//! variable caps its size.  Reports merge failures in case order, so equal
//! inputs produce identical reports regardless of parallelism.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::box_ops::{
    compose as box_compose, ez_factor, face_compose, BoxMorphism, FaceNormalForm,
};
use crate::cubical_core::{
    find_isomorphism as find_cubical_isomorphism, is_marked_in_comical_cube,
    is_marked_in_strong_cube, make_cube_object, pushout as cubical_pushout,
    trivialize as cubical_trivialize, CubicalStandard, FormalCube, MarkedCubicalMap,
};
use crate::simplicial_core::{
    find_isomorphism, flatten, make_standard, precomplicial_reflection, pushout, CellId,
    ComplexBuilder, FormalSimplex, MarkedSimplicialComplex, MarkedSimplicialMap,
    SimplicialOperator, SimplicialStandard,
};
use crate::triangulation::{linear_simplex, triangulate, Entry, SimplexString};
use crate::{Error, Result};

/// Preamble bookkeeping of an essential simplex: the longest initial
/// segment of entries `1, 2, …, p` each of which occurs nowhere else, the
/// position `Q = p + 1` just past it, and the pivot value `q` found there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialData {
    /// The preamble values `1, …, p`.
    pub preamble: Vec<usize>,
    /// The preamble length `p`; equals `n` exactly for the top simplex.
    pub p: usize,
    /// The position `Q = p + 1` just past the preamble.
    pub q_pos: usize,
    /// The pivot `q`: the entry at position `Q`, or `n + 1` when `Q` falls
    /// outside the string (which happens only for the top simplex).
    pub q: usize,
}

fn occurrences(phi: &SimplexString, v: usize) -> usize {
    phi.entries().iter().filter(|e| **e == Entry::Finite(v)).count()
}

fn is_interior(phi: &SimplexString) -> bool {
    phi.entries().iter().all(|e| matches!(e, Entry::Finite(_)))
}

/// Compute the preamble data of an essential (interior, non-degenerate)
/// simplex.  The pivot always satisfies `q ≥ Q`.
pub fn essential_data(phi: &SimplexString) -> Result<EssentialData> {
    if phi.is_degenerate() || !is_interior(phi) {
        return Err(Error::NotEssential(phi.to_string()));
    }
    let n = phi.n();
    let mut p = 0;
    while p < n && phi.entry(p + 1) == Entry::Finite(p + 1) && occurrences(phi, p + 1) == 1 {
        p += 1;
    }
    let q_pos = p + 1;
    let q = if q_pos <= n {
        match phi.entry(q_pos) {
            Entry::Finite(v) => v,
            _ => unreachable!("interior string has finite entries"),
        }
    } else {
        n + 1
    };
    Ok(EssentialData { preamble: (1..=p).collect(), p, q_pos, q })
}

/// The three classes a non-degenerate simplex of a triangulated cube falls
/// into: boundary (some infinite entry), normal (essential, pivot value
/// occurring exactly once), abnormal (essential, any other multiplicity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SimplexClass {
    Boundary,
    Normal,
    Abnormal,
}

fn classify(phi: &SimplexString) -> SimplexClass {
    match essential_data(phi) {
        Err(_) => SimplexClass::Boundary,
        Ok(d) => {
            if occurrences(phi, d.q) == 1 {
                SimplexClass::Normal
            } else {
                SimplexClass::Abnormal
            }
        }
    }
}

/// Normalization: raise the pivot entry, and every entry exceeding the
/// pivot value, by one.  Defined on abnormal simplices below the top
/// dimension (equivalently: essential simplices whose pivot value repeats);
/// the result is normal, one dimension up, and [`denormalize`] inverts it.
pub fn normalize(phi: &SimplexString) -> Result<SimplexString> {
    let d = essential_data(phi)?;
    if occurrences(phi, d.q) < 2 {
        return Err(Error::WrongClass(format!("{phi} has an unrepeated pivot")));
    }
    let entries = (1..=phi.n())
        .map(|i| match phi.entry(i) {
            Entry::Finite(v) if i == d.q_pos || v > d.q => Entry::Finite(v + 1),
            e => e,
        })
        .collect();
    SimplexString::new(phi.r() + 1, entries)
}

/// The inverse of [`normalize`]: strike the pivot vertex, acting by the
/// face that skips `q - 1`.  Defined on normal simplices.
pub fn denormalize(psi: &SimplexString) -> Result<SimplexString> {
    let d = essential_data(psi)?;
    if occurrences(psi, d.q) != 1 {
        return Err(Error::WrongClass(format!("{psi} is not normal")));
    }
    psi.act(&SimplicialOperator::face(psi.r(), d.q - 1)?)
}

/// The `(n-1)`-simplex `ω^{i,j}` of the triangulated `n`-cube, for
/// `1 ≤ i ≤ j ≤ n`; `ω^{i,n}` is the top simplex of the `(i,0)`-face.
pub fn omega(n: usize, i: usize, j: usize) -> Result<SimplexString> {
    if n == 0 || i == 0 || i > j || j > n {
        return Err(Error::ParamRange(format!("omega({n},{i},{j}) out of range")));
    }
    let entries = (1..=n)
        .map(|k| {
            if k < i {
                Entry::Finite(k)
            } else if k > i {
                Entry::Finite(k - 1)
            } else if j <= n - 1 {
                Entry::Finite(j)
            } else {
                Entry::PlusInf
            }
        })
        .collect();
    SimplexString::new(n - 1, entries)
}

/// The `n`-simplex `Ω^{i,j}` of the triangulated `n`-cube, for
/// `1 ≤ i ≤ j ≤ n`; `Ω^{i,i}` is the top simplex and `Ω^{i,j+1}` is the
/// normalization of `ω^{i,j}`.
pub fn big_omega(n: usize, i: usize, j: usize) -> Result<SimplexString> {
    if n == 0 || i == 0 || i > j || j > n {
        return Err(Error::ParamRange(format!("Omega({n},{i},{j}) out of range")));
    }
    let entries = (1..=n)
        .map(|k| {
            if k == i {
                Entry::Finite(j)
            } else if k > i && k <= j {
                Entry::Finite(k - 1)
            } else {
                Entry::Finite(k)
            }
        })
        .collect();
    SimplexString::new(n, entries)
}

/// The strict order in which non-degenerate simplices of a fixed dimension
/// are adjoined to a triangulated cube: boundary and normal simplices
/// precede all abnormal ones, and abnormal simplices are ordered by
/// preamble length, ties broken by *larger* pivot first.  Degenerate or
/// differently-shaped arguments are incomparable.
pub fn simplex_order_less(phi: &SimplexString, psi: &SimplexString) -> bool {
    if phi.n() != psi.n()
        || phi.r() != psi.r()
        || phi == psi
        || phi.is_degenerate()
        || psi.is_degenerate()
    {
        return false;
    }
    if classify(psi) != SimplexClass::Abnormal {
        return false;
    }
    match classify(phi) {
        SimplexClass::Boundary | SimplexClass::Normal => true,
        SimplexClass::Abnormal => {
            let a = essential_data(phi).expect("abnormal simplices are essential");
            let b = essential_data(psi).expect("abnormal simplices are essential");
            a.p < b.p || (a.p == b.p && a.q > b.q)
        }
    }
}

/// Whether exactly one entry equals `i` and no entry before it equals
/// `i - 1`.  The notion is used for `2 ≤ i ≤ r`; other `i` return `false`.
pub fn is_i_disordered(phi: &SimplexString, i: usize) -> bool {
    if i < 2 || occurrences(phi, i) != 1 {
        return false;
    }
    let pos = (1..=phi.n())
        .find(|&k| phi.entry(k) == Entry::Finite(i))
        .expect("the value occurs");
    (1..pos).all(|k| phi.entry(k) != Entry::Finite(i - 1))
}

/// Build a regular subcomplex of the triangulated `n`-cube from a family of
/// non-degenerate strings (closed under faces) with a marking predicate.
fn string_subcomplex(
    n: usize,
    included: &dyn Fn(&SimplexString) -> bool,
    marked: &dyn Fn(&SimplexString) -> bool,
) -> Result<MarkedSimplicialComplex> {
    let mut builder = ComplexBuilder::new();
    let mut ids: BTreeMap<SimplexString, CellId> = BTreeMap::new();
    for r in 0..=n {
        for phi in SimplexString::enumerate(n, r) {
            if phi.is_degenerate() || !included(&phi) {
                continue;
            }
            let mut faces = Vec::new();
            for j in 0..=r {
                if r == 0 {
                    break;
                }
                let image = phi.act(&SimplicialOperator::face(r, j)?)?;
                let (cell_string, epi) = image.condense();
                let cell = *ids.get(&cell_string).ok_or_else(|| {
                    Error::NotGenerated(format!("face {cell_string} of {phi} not in the family"))
                })?;
                faces.push(FormalSimplex { epi, cell });
            }
            let id = builder.add_cell(r, phi.to_string(), faces, r >= 1 && marked(&phi));
            ids.insert(phi, id);
        }
    }
    builder.build()
}

/// Marking of a simplex in the triangulated `(i,ε)`-comical cube: either no
/// complete substring, or the top simplex of a marked face.
fn marked_in_comical_triangulation(phi: &SimplexString, i: usize, eps: u8) -> bool {
    phi.r() >= 1
        && (phi.is_marked()
            || phi
                .is_linear()
                .is_some_and(|nf| is_marked_in_comical_cube(&nf, i, eps)))
}

fn omega_family(n: usize, i: usize) -> Result<BTreeSet<SimplexString>> {
    let mut family = BTreeSet::new();
    for j in i..=n {
        family.insert(omega(n, i, j)?);
        family.insert(big_omega(n, i, j)?);
    }
    Ok(family)
}

/// The filtration complexes attached to the `(i,0)`-comical `n`-cube: the
/// complex `Ξ` of all non-degenerate simplices except the `ω`/`Ω` family,
/// its boundary part `∂Ξ` (the boundary simplices minus the top simplex of
/// the `(i,0)`-face), and `Ξ̂` — the same cells as `Ξ`, marked as in the
/// triangulated comical cube.  Returned in that order.
pub fn xi_complexes(
    n: usize,
    i: usize,
) -> Result<(MarkedSimplicialComplex, MarkedSimplicialComplex, MarkedSimplicialComplex)> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::ParamRange(format!("xi_complexes({n},{i}) out of range")));
    }
    let family = omega_family(n, i)?;
    let top_of_face = omega(n, i, n)?;
    let xi = string_subcomplex(n, &|phi| !family.contains(phi), &SimplexString::is_marked)?;
    let boundary = string_subcomplex(
        n,
        &|phi| *phi != top_of_face && !is_interior(phi),
        &SimplexString::is_marked,
    )?;
    let hatted = string_subcomplex(n, &|phi| !family.contains(phi), &|phi| {
        marked_in_comical_triangulation(phi, i, 0)
    })?;
    Ok((xi, boundary, hatted))
}

/// Outcome of one registry verification: the parameters it ran with, the
/// number of case units enumerated, the failures (printable witnesses, in
/// case order), and the wall-clock time.  A verification passes exactly
/// when `failures` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub params: BTreeMap<String, usize>,
    pub cases: u64,
    pub failures: Vec<String>,
    pub millis: u64,
}

impl LemmaReport {
    /// No case produced a failure.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Run one closure per case, in parallel on a worker pool whose size is
/// capped by the `MARKED_SHAPES_THREADS` environment variable, and merge
/// the failure lists in case order.
fn run_cases<C, F>(cases: Vec<C>, check: F) -> (u64, Vec<String>)
where
    C: Sync + Send,
    F: Fn(&C) -> Vec<String> + Sync + Send,
{
    let total = cases.len() as u64;
    let capped = std::env::var("MARKED_SHAPES_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k >= 1);
    let failures = match capped {
        Some(1) => cases.iter().flat_map(|c| check(c)).collect(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("worker pool")
            .install(|| cases.par_iter().flat_map_iter(&check).collect()),
        None => cases.par_iter().flat_map_iter(&check).collect(),
    };
    (total, failures)
}

const LEMMAS: &[&str] = &[
    "face-preserve-order",
    "N-bijection",
    "N-order",
    "N-linearization",
    "N-omega",
    "omega-face",
    "omega-linearization",
    "disordered-marked",
    "disordered-face",
    "disordered-complicial",
    "comical-triangulation-marking",
    "Omega-complicial",
    "Box-marking",
    "open-box-xi-anodyne",
    "xi-cube-anodyne",
    "marking-extension-anodyne",
    "strong-comical-degens",
    "strong-comical-iso",
    "strong-comical-anodyne",
    "Rezk-pushout-complicial",
];

/// The verification names accepted by [`verify`].
pub fn lemma_ids() -> &'static [&'static str] {
    LEMMAS
}

/// The largest `n` a verification accepts; requests beyond it would blow
/// the intended time budget and are rejected with [`Error::Budget`].
fn budget_cap(lemma: &str) -> usize {
    match lemma {
        "face-preserve-order" => 5,
        "N-bijection" => 6,
        "N-order" | "N-linearization" => 5,
        "N-omega" | "omega-face" => 8,
        "omega-linearization" => 6,
        "disordered-marked" | "disordered-face" => 6,
        "disordered-complicial" => 5,
        "comical-triangulation-marking" => 5,
        "Omega-complicial" => 5,
        "Box-marking" => 4,
        "open-box-xi-anodyne" => 5,
        "xi-cube-anodyne" => 4,
        "marking-extension-anodyne" => 4,
        "strong-comical-degens" => 5,
        "strong-comical-iso" => 6,
        "strong-comical-anodyne" => 4,
        _ => usize::MAX,
    }
}

/// Run the named verification with ambient-dimension budget `n` and report
/// the outcome.  Unknown names and over-budget parameters error out; a
/// statement that fails on some case comes back as a report with a
/// non-empty failure list, never as an `Err`.
pub fn verify(lemma: &str, n: usize) -> Result<LemmaReport> {
    if !LEMMAS.contains(&lemma) {
        return Err(Error::UnknownLemma(lemma.to_string()));
    }
    let cap = budget_cap(lemma);
    if n > cap {
        return Err(Error::Budget(format!(
            "`{lemma}` is capped at n = {cap}, requested n = {n}"
        )));
    }
    let start = Instant::now();
    let (cases, failures) = match lemma {
        "face-preserve-order" => verify_face_preserve_order(n)?,
        "N-bijection" => verify_n_bijection(n)?,
        "N-order" => verify_n_order(n)?,
        "N-linearization" => verify_n_linearization(n)?,
        "N-omega" => verify_n_omega(n)?,
        "omega-face" => verify_omega_face(n)?,
        "omega-linearization" => verify_omega_linearization(n)?,
        "disordered-marked" => verify_disordered_marked(n)?,
        "disordered-face" => verify_disordered_face(n)?,
        "disordered-complicial" => verify_disordered_complicial(n)?,
        "comical-triangulation-marking" => verify_comical_triangulation_marking(n)?,
        "Omega-complicial" => verify_omega_complicial(n)?,
        "Box-marking" => verify_box_marking(n)?,
        "open-box-xi-anodyne" => verify_open_box_xi(n)?,
        "xi-cube-anodyne" => verify_xi_cube(n)?,
        "marking-extension-anodyne" => verify_marking_extension(n)?,
        "strong-comical-degens" => verify_strong_degens(n)?,
        "strong-comical-iso" => verify_strong_iso(n)?,
        "strong-comical-anodyne" => verify_strong_anodyne(n)?,
        "Rezk-pushout-complicial" => verify_rezk()?,
        _ => unreachable!("registry dispatch is exhaustive"),
    };
    let mut params = BTreeMap::new();
    if lemma != "Rezk-pushout-complicial" {
        params.insert("n".to_string(), n);
    }
    Ok(LemmaReport {
        lemma: lemma.to_string(),
        params,
        cases,
        failures,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// All monomorphisms into `[m]`, smallest image first.
fn monos_into(m: usize) -> Vec<SimplicialOperator> {
    let mut out = Vec::new();
    for size in 1..=m + 1 {
        for subset in (0..=m).combinations(size) {
            out.push(SimplicialOperator::new(subset, m).expect("mono in range"));
        }
    }
    out
}

fn essential_strings(n: usize, m: usize) -> Vec<SimplexString> {
    SimplexString::enumerate(n, m)
        .into_iter()
        .filter(|phi| !phi.is_degenerate() && is_interior(phi))
        .collect()
}

/// Essential `m`-simplices of the triangulated `n`-cube split into the
/// abnormal and normal classes, in that order.
fn split_by_class(n: usize, m: usize) -> (Vec<SimplexString>, Vec<SimplexString>) {
    let mut abnormal = Vec::new();
    let mut normal = Vec::new();
    for phi in essential_strings(n, m) {
        match classify(&phi) {
            SimplexClass::Normal => normal.push(phi),
            SimplexClass::Abnormal => abnormal.push(phi),
            SimplexClass::Boundary => unreachable!("interior strings are essential"),
        }
    }
    (abnormal, normal)
}

/// Entry order is preserved by every composite face action.
fn verify_face_preserve_order(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for r in 0..=n {
        cases.extend(SimplexString::enumerate(n, r));
    }
    Ok(run_cases(cases, |phi| {
        let mut bad = Vec::new();
        for alpha in monos_into(phi.r()) {
            let image = phi.act(&alpha).expect("faces act on strings");
            for i in 1..=phi.n() {
                for j in 1..=phi.n() {
                    if phi.entry(i) <= phi.entry(j) && image.entry(i) > image.entry(j) {
                        bad.push(format!(
                            "{phi} acted by {:?} flips the order of positions ({i},{j})",
                            alpha.values()
                        ));
                    }
                }
            }
        }
        bad
    }))
}

/// Normalization is a bijection from abnormal `m`-simplices to normal
/// `(m+1)`-simplices for every `1 ≤ m ≤ n-1`, inverse to [`denormalize`].
fn verify_n_bijection(n: usize) -> Result<(u64, Vec<String>)> {
    let mut failures = Vec::new();
    let mut cases: Vec<(SimplexString, bool)> = Vec::new();
    let mut count_checks = 0u64;
    for m in 1..n {
        let (abnormal, _) = split_by_class(n, m);
        let (_, normal_above) = split_by_class(n, m + 1);
        count_checks += 1;
        if abnormal.len() != normal_above.len() {
            failures.push(format!(
                "dimension {m}: {} abnormal simplices vs {} normal ones above",
                abnormal.len(),
                normal_above.len()
            ));
        }
        cases.extend(abnormal.into_iter().map(|phi| (phi, true)));
        cases.extend(normal_above.into_iter().map(|psi| (psi, false)));
    }
    let (count, case_failures) = run_cases(cases, |(phi, forward)| {
        let mut bad = Vec::new();
        if *forward {
            match normalize(phi) {
                Err(e) => bad.push(format!("normalize({phi}) failed: {e}")),
                Ok(psi) => {
                    if classify(&psi) != SimplexClass::Normal {
                        bad.push(format!("normalize({phi}) = {psi} is not normal"));
                    }
                    match denormalize(&psi) {
                        Err(e) => bad.push(format!("denormalize({psi}) failed: {e}")),
                        Ok(back) if back != *phi => {
                            bad.push(format!("round trip of {phi} returned {back}"));
                        }
                        Ok(_) => {}
                    }
                }
            }
        } else {
            match denormalize(phi) {
                Err(e) => bad.push(format!("denormalize({phi}) failed: {e}")),
                Ok(chi) => {
                    if classify(&chi) != SimplexClass::Abnormal {
                        bad.push(format!("denormalize({phi}) = {chi} is not abnormal"));
                    }
                    match normalize(&chi) {
                        Err(e) => bad.push(format!("normalize({chi}) failed: {e}")),
                        Ok(back) if back != *phi => {
                            bad.push(format!("round trip of {phi} returned {back}"));
                        }
                        Ok(_) => {}
                    }
                }
            }
        }
        bad
    });
    failures.extend(case_failures);
    Ok((count + count_checks, failures))
}

/// Every face of the normalization, other than the one recovering the
/// simplex itself, is non-degenerate and strictly precedes the simplex in
/// the insertion order.
fn verify_n_order(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for m in 1..n {
        cases.extend(split_by_class(n, m).0.into_iter().map(|phi| (m, phi)));
    }
    Ok(run_cases(cases, |(m, phi)| {
        let mut bad = Vec::new();
        let d = essential_data(phi).expect("abnormal simplices are essential");
        let psi = normalize(phi).expect("abnormal below the top dimension");
        for idx in 0..=m + 1 {
            let face = psi
                .act(&SimplicialOperator::face(m + 1, idx).expect("face"))
                .expect("faces act");
            if face.is_degenerate() {
                bad.push(format!("face {idx} of normalize({phi}) is degenerate"));
                continue;
            }
            if idx == d.q {
                if face != *phi {
                    bad.push(format!("face {idx} of normalize({phi}) is {face}, not {phi}"));
                }
            } else if !simplex_order_less(&face, phi) {
                bad.push(format!("face {idx} of normalize({phi}) = {face} does not precede it"));
            }
        }
        bad
    }))
}

/// The linearizations of the faces of a normalization: the face recovering
/// the simplex splits its linearizations by whether the substring passes
/// through position `Q`, and every other face has none.
fn verify_n_linearization(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for m in 1..n {
        cases.extend(split_by_class(n, m).0.into_iter().map(|phi| (m, phi)));
    }
    Ok(run_cases(cases, |(m, phi)| {
        let mut bad = Vec::new();
        let d = essential_data(phi).expect("abnormal simplices are essential");
        let psi = normalize(phi).expect("abnormal below the top dimension");
        let mut with_q = BTreeSet::new();
        let mut without_q = BTreeSet::new();
        for (rho, lin) in phi.complete_substrings().into_iter().zip(phi.linearizations()) {
            if rho.contains(&d.q_pos) {
                with_q.insert(lin);
            } else {
                without_q.insert(lin);
            }
        }
        let empty = BTreeSet::new();
        for idx in 0..=m + 1 {
            if idx == d.q {
                continue;
            }
            let expected = if idx + 1 == d.q {
                &with_q
            } else if idx == d.q + 1 {
                &without_q
            } else {
                &empty
            };
            let face = psi
                .act(&SimplicialOperator::face(m + 1, idx).expect("face"))
                .expect("faces act");
            let got: BTreeSet<SimplexString> = face.linearizations().into_iter().collect();
            if got != *expected {
                bad.push(format!(
                    "face {idx} of normalize({phi}) has linearizations {:?}, expected {:?}",
                    got.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    expected.iter().map(|s| s.to_string()).collect::<Vec<_>>()
                ));
            }
        }
        bad
    }))
}

/// Normalization carries `ω^{i,j}` to `Ω^{i,j+1}`.
fn verify_n_omega(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for i in 1..n {
        for j in i..n {
            cases.push((i, j));
        }
    }
    Ok(run_cases(cases, |&(i, j)| {
        let mut bad = Vec::new();
        let om = omega(n, i, j).expect("parameters in range");
        let big = big_omega(n, i, j + 1).expect("parameters in range");
        match normalize(&om) {
            Err(e) => bad.push(format!("normalize(omega({n},{i},{j})) failed: {e}")),
            Ok(psi) if psi != big => {
                bad.push(format!("normalize({om}) = {psi}, expected {big}"));
            }
            Ok(_) => {}
        }
        match denormalize(&big) {
            Err(e) => bad.push(format!("denormalize(Omega({n},{i},{})) failed: {e}", j + 1)),
            Ok(chi) if chi != om => {
                bad.push(format!("denormalize({big}) = {chi}, expected {om}"));
            }
            Ok(_) => {}
        }
        bad
    }))
}

/// The distinguished faces of `Ω^{i,j}`: face `j` is `ω^{i,j}`, and face
/// `j-1` is `ω^{i,j-1}` whenever `j ≥ i+1`.
fn verify_omega_face(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            cases.push((i, j));
        }
    }
    Ok(run_cases(cases, |&(i, j)| {
        let mut bad = Vec::new();
        let big = big_omega(n, i, j).expect("parameters in range");
        let at_j = big
            .act(&SimplicialOperator::face(n, j).expect("face"))
            .expect("faces act");
        if at_j != omega(n, i, j).expect("parameters in range") {
            bad.push(format!("face {j} of {big} is {at_j}, not omega({n},{i},{j})"));
        }
        if j >= i + 1 {
            let at_prev = big
                .act(&SimplicialOperator::face(n, j - 1).expect("face"))
                .expect("faces act");
            if at_prev != omega(n, i, j - 1).expect("parameters in range") {
                bad.push(format!(
                    "face {} of {big} is {at_prev}, not omega({n},{i},{})",
                    j - 1,
                    j - 1
                ));
            }
        }
        bad
    }))
}

/// A string of codimension one has the top simplex of the `(i,0)`-face
/// among its linearizations exactly when it belongs to the `ω^{i,-}`
/// family.
fn verify_omega_linearization(n: usize) -> Result<(u64, Vec<String>)> {
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let mut cases = Vec::new();
    for i in 1..=n {
        for phi in SimplexString::enumerate(n, n - 1) {
            cases.push((i, phi));
        }
    }
    Ok(run_cases(cases, |(i, phi)| {
        let target = omega(n, *i, n).expect("parameters in range");
        let has = phi.linearizations().contains(&target);
        let expected = (*i..=n).any(|j| omega(n, *i, j).expect("range") == *phi);
        if has == expected {
            Vec::new()
        } else if has {
            vec![format!("{phi} unexpectedly linearizes to {target}")]
        } else {
            vec![format!("{phi} misses the linearization {target}")]
        }
    }))
}

/// Disordered simplices have no complete substring.
fn verify_disordered_marked(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for m in 2..=n {
        cases.extend(SimplexString::enumerate(n, m));
    }
    Ok(run_cases(cases, |phi| {
        let mut bad = Vec::new();
        for i in 2..=phi.r() {
            if is_i_disordered(phi, i) && !phi.is_marked() {
                bad.push(format!("{phi} is {i}-disordered yet has a complete substring"));
            }
        }
        bad
    }))
}

/// Disorder is stable under late faces, and shifts down under very early
/// faces.
fn verify_disordered_face(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for m in 2..=n {
        cases.extend(SimplexString::enumerate(n, m));
    }
    Ok(run_cases(cases, |phi| {
        let mut bad = Vec::new();
        let m = phi.r();
        for i in 2..=m {
            if !is_i_disordered(phi, i) {
                continue;
            }
            for j in i + 1..=m {
                let face = phi
                    .act(&SimplicialOperator::face(m, j).expect("face"))
                    .expect("faces act");
                if !is_i_disordered(&face, i) {
                    bad.push(format!("face {j} of {i}-disordered {phi} = {face} is not"));
                }
            }
            if i >= 3 {
                for j in 0..=i - 3 {
                    let face = phi
                        .act(&SimplicialOperator::face(m, j).expect("face"))
                        .expect("faces act");
                    if !is_i_disordered(&face, i - 1) {
                        bad.push(format!(
                            "face {j} of {i}-disordered {phi} = {face} is not {}-disordered",
                            i - 1
                        ));
                    }
                }
            }
        }
        bad
    }))
}

/// An `i`-disordered simplex is `(i-1)`-complicial: every face keeping the
/// vertices `i-2`, `i-1`, `i` is degenerate or has no complete substring.
fn verify_disordered_complicial(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for m in 2..=n {
        cases.extend(SimplexString::enumerate(n, m));
    }
    Ok(run_cases(cases, |phi| {
        let mut bad = Vec::new();
        let m = phi.r();
        for i in 2..=m {
            if !is_i_disordered(phi, i) {
                continue;
            }
            let late: Vec<usize> = (i + 1..=m).collect();
            let early: Vec<usize> = if i >= 3 { (0..=i - 3).collect() } else { Vec::new() };
            for a in 0..=late.len() {
                for drop_late in late.iter().copied().combinations(a) {
                    for b in 0..=early.len() {
                        for drop_early in early.iter().copied().combinations(b) {
                            let kept: Vec<usize> = (0..=m)
                                .filter(|v| !drop_late.contains(v) && !drop_early.contains(v))
                                .collect();
                            let alpha =
                                SimplicialOperator::new(kept, m).expect("mono in range");
                            let face = phi.act(&alpha).expect("faces act");
                            if !face.is_degenerate() && !face.is_marked() {
                                bad.push(format!(
                                    "{i}-disordered {phi} has unmarked admissible face {face}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        bad
    }))
}

/// The gap criterion on a linear simplex: position `i` carries a finite
/// value, and every other position strictly between the neighbouring
/// substring positions holds the sign-`ε` infinity.
fn gap_condition(phi: &SimplexString, i: usize, eps: u8) -> bool {
    let subs = phi.complete_substrings();
    if subs.len() != 1 {
        return false;
    }
    let rho = &subs[0];
    let v = match phi.entry(i) {
        Entry::Finite(v) => v,
        _ => return false,
    };
    let lo = if v == 1 { 0 } else { rho[v - 2] };
    let hi = if v == phi.r() { phi.n() + 1 } else { rho[v] };
    let side = if eps == 0 { Entry::MinusInf } else { Entry::PlusInf };
    (lo + 1..hi).filter(|&k| k != i).all(|k| phi.entry(k) == side)
}

/// In the triangulated `(i,ε)`-comical cube, linear simplices passing the
/// gap criterion are marked — and a linear simplex is marked exactly when
/// its underlying face is comically marked.
fn verify_comical_triangulation_marking(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for i in 1..=n {
        for eps in [0u8, 1] {
            cases.push((i, eps));
        }
    }
    Ok(run_cases(cases, |&(i, eps)| {
        let mut bad = Vec::new();
        let x = triangulate(
            &make_cube_object(CubicalStandard::Comical(n, i, eps)).expect("parameters in range"),
        );
        for nf in FaceNormalForm::enumerate(n) {
            if nf.source_dim() == 0 {
                continue;
            }
            let phi = linear_simplex(&nf);
            let Some(cell) = x.find_cell(&phi.to_string()) else {
                bad.push(format!("linear simplex {phi} missing from the triangulation"));
                continue;
            };
            let marked = x.is_marked(cell);
            if gap_condition(&phi, i, eps) && !marked {
                bad.push(format!("({i},{eps}): {phi} passes the gap criterion yet is unmarked"));
            }
            if marked != is_marked_in_comical_cube(&nf, i, eps) {
                bad.push(format!(
                    "({i},{eps}): linear simplex {phi} disagrees with the marking of {nf}"
                ));
            }
        }
        bad
    }))
}

/// `Ω^{i,j}` is `j`-complicial in the triangulated `(i,0)`-comical cube.
fn verify_omega_complicial(n: usize) -> Result<(u64, Vec<String>)> {
    let cases: Vec<usize> = (1..=n).collect();
    Ok(run_cases(cases, |&i| {
        let mut bad = Vec::new();
        let x = triangulate(
            &make_cube_object(CubicalStandard::Comical(n, i, 0)).expect("parameters in range"),
        );
        for j in i..=n {
            let big = big_omega(n, i, j).expect("parameters in range");
            match x.find_cell(&big.to_string()) {
                None => bad.push(format!("{big} missing from the triangulation")),
                Some(cell) => {
                    if !x.is_k_complicial(&x.formal(cell), j) {
                        bad.push(format!("{big} is not {j}-complicial for i = {i}"));
                    }
                }
            }
        }
        bad
    }))
}

/// Rebuild a complex with the same cells and a new marking.
fn remark(
    x: &MarkedSimplicialComplex,
    marked: &dyn Fn(CellId, &str) -> bool,
) -> MarkedSimplicialComplex {
    let mut builder = ComplexBuilder::new();
    for id in x.all_cells() {
        let faces = if id.dim == 0 {
            Vec::new()
        } else {
            (0..=id.dim).map(|j| x.face(id, j).clone()).collect()
        };
        builder.add_cell(id.dim, x.name(id).to_string(), faces, id.dim >= 1 && marked(id, x.name(id)));
    }
    builder.build().expect("identical cell structure")
}

/// The entire extension marking a string cell whenever all its
/// linearizations are marked (vacuously, when it has none).
fn dagger(x: &MarkedSimplicialComplex) -> MarkedSimplicialComplex {
    remark(x, &|_, name| {
        let phi: SimplexString = name.parse().expect("cells are named by strings");
        phi.linearizations().iter().all(|lin| {
            x.find_cell(&lin.to_string()).is_some_and(|c| x.is_marked(c))
        })
    })
}

/// Both the triangulated comical cube and its `Ξ̂` subcomplex are closed
/// under linearization and normalization, and a cell with all
/// linearizations marked becomes marked in the precomplicial reflection.
fn verify_box_marking(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for i in 1..=n {
        for hat in [false, true] {
            cases.push((i, hat));
        }
    }
    Ok(run_cases(cases, |&(i, hat)| {
        let mut bad = Vec::new();
        let label = if hat { "xi-hat" } else { "comical" };
        let x = if hat {
            xi_complexes(n, i).expect("parameters in range").2
        } else {
            triangulate(
                &make_cube_object(CubicalStandard::Comical(n, i, 0)).expect("parameters in range"),
            )
        };
        let reflection = precomplicial_reflection(&x);
        for id in x.all_cells() {
            let phi: SimplexString = x.name(id).parse().expect("string cell names");
            let lins = phi.linearizations();
            for lin in &lins {
                if x.find_cell(&lin.to_string()).is_none() {
                    bad.push(format!("{label} i={i}: {phi} has linearization {lin} outside"));
                }
            }
            if classify(&phi) == SimplexClass::Abnormal && phi.r() < n {
                let psi = normalize(&phi).expect("abnormal below the top dimension");
                if x.find_cell(&psi.to_string()).is_none() {
                    bad.push(format!("{label} i={i}: normalization {psi} of {phi} outside"));
                }
            }
            if id.dim >= 1 {
                let all_marked = lins
                    .iter()
                    .all(|lin| x.find_cell(&lin.to_string()).is_some_and(|c| x.is_marked(c)));
                if all_marked && !reflection.is_marked(id) {
                    bad.push(format!(
                        "{label} i={i}: {phi} has all linearizations marked but stays unmarked"
                    ));
                }
            }
        }
        bad
    }))
}

/// Compare two complexes through a renaming of cells: counts per dimension,
/// marked counts per dimension, then the renaming itself as a
/// marking-reflecting isomorphism.
fn named_isomorphism(
    x: &MarkedSimplicialComplex,
    y: &MarkedSimplicialComplex,
    rename: &dyn Fn(&str) -> String,
    context: &str,
) -> Vec<String> {
    let mut bad = Vec::new();
    for dim in 0..=x.dim().max(y.dim()) {
        if x.cell_count(dim) != y.cell_count(dim) {
            bad.push(format!(
                "{context}: {} cells of dimension {dim} against {}",
                x.cell_count(dim),
                y.cell_count(dim)
            ));
        }
        let xm = x.cells(dim).filter(|&id| x.is_marked(id)).count();
        let ym = y.cells(dim).filter(|&id| y.is_marked(id)).count();
        if xm != ym {
            bad.push(format!(
                "{context}: {xm} marked cells of dimension {dim} against {ym}"
            ));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    let mut used = BTreeSet::new();
    let mut assignment = Vec::new();
    for dim in 0..=x.dim() {
        let mut layer = Vec::new();
        for id in x.cells(dim) {
            let target = rename(x.name(id));
            match y.find_cell(&target) {
                None => {
                    bad.push(format!("{context}: no cell named {target}"));
                    return bad;
                }
                Some(t) => {
                    if !used.insert(t) {
                        bad.push(format!("{context}: two cells rename to {target}"));
                        return bad;
                    }
                    layer.push(y.formal(t));
                }
            }
        }
        assignment.push(layer);
    }
    match MarkedSimplicialMap::new(x, y, assignment) {
        Err(e) => bad.push(format!("{context}: renaming is not a map: {e}")),
        Ok(map) => {
            if !map.is_regular() {
                bad.push(format!("{context}: renaming does not reflect markings"));
            }
        }
    }
    bad
}

fn infinite(e: Entry) -> bool {
    !matches!(e, Entry::Finite(_))
}

/// The boundary filtration of `Ξ`: the image characterizations of the
/// codimension-one complexes, the pushout square assembling `∂Ξ`, and the
/// step inventory pairing abnormal cells with their normalizations.
fn verify_open_box_xi(n: usize) -> Result<(u64, Vec<String>)> {
    if n == 1 {
        let (xi, boundary, hatted) = xi_complexes(1, 1)?;
        let mut bad = Vec::new();
        for (label, x) in [("xi", &xi), ("boundary", &boundary), ("hatted", &hatted)] {
            if x.total_cells() != 1 || x.find_cell("-@1").is_none() {
                bad.push(format!("{label} complex of the interval is not the single vertex"));
            }
        }
        return Ok((1, bad));
    }
    let cases: Vec<usize> = (1..=n).collect();
    Ok(run_cases(cases, |&i| {
        let mut bad = Vec::new();
        let (xi_small, bd_small, _) = xi_complexes(n - 1, n - 1).expect("parameters in range");
        let (xi_big, bd_big, _) = xi_complexes(n, i).expect("parameters in range");
        let push_in = |name: &str| -> String {
            let phi: SimplexString = name.parse().expect("string cell names");
            crate::triangulation::cubical_face_action(i, 0, &phi)
                .expect("face action")
                .to_string()
        };

        // Image characterizations of the two codimension-one complexes.
        let excluded_corner = push_in(&omega(n - 1, n - 1, n - 1).expect("range").to_string());
        let top_of_face = omega(n, i, n).expect("range").to_string();
        let image_xi: BTreeSet<String> =
            xi_small.all_cells().map(|id| push_in(xi_small.name(id))).collect();
        let image_bd: BTreeSet<String> =
            bd_small.all_cells().map(|id| push_in(bd_small.name(id))).collect();
        let mut expected_xi = BTreeSet::new();
        let mut expected_bd = BTreeSet::new();
        let mut box_cells = BTreeSet::new();
        for r in 0..n {
            for psi in SimplexString::enumerate(n, r) {
                if psi.is_degenerate() {
                    continue;
                }
                let name = psi.to_string();
                let at_i = psi.entry(i) == Entry::PlusInf;
                let elsewhere = (1..=n).any(|k| k != i && infinite(psi.entry(k)));
                if at_i && name != excluded_corner && name != top_of_face {
                    expected_xi.insert(name.clone());
                }
                if at_i && elsewhere && name != excluded_corner {
                    expected_bd.insert(name.clone());
                }
                if psi.entry(i) == Entry::MinusInf || elsewhere {
                    box_cells.insert(name);
                }
            }
        }
        if image_xi != expected_xi {
            bad.push(format!("i={i}: image of the small xi complex mischaracterized"));
        }
        if image_bd != expected_bd {
            bad.push(format!("i={i}: image of the small boundary complex mischaracterized"));
        }

        // Intersection and union against the open box.
        let meet: BTreeSet<String> = image_xi.intersection(&box_cells).cloned().collect();
        if meet != image_bd {
            bad.push(format!("i={i}: boundary image is not the open-box intersection"));
        }
        let join: BTreeSet<String> = image_xi.union(&box_cells).cloned().collect();
        let bd_names: BTreeSet<String> =
            bd_big.all_cells().map(|id| bd_big.name(id).to_string()).collect();
        if join != bd_names {
            bad.push(format!("i={i}: union does not exhaust the big boundary complex"));
        }

        // The pushout square.
        let box_complex = string_subcomplex(
            n,
            &|psi| psi.entry(i) == Entry::MinusInf || (1..=n).any(|k| k != i && infinite(psi.entry(k))),
            &SimplexString::is_marked,
        )
        .expect("open box cells are face closed");
        let f = MarkedSimplicialMap::by_name_inclusion(&bd_small, &xi_small)
            .expect("boundary includes");
        let assignment: Vec<Vec<FormalSimplex>> = (0..=bd_small.dim())
            .map(|dim| {
                bd_small
                    .cells(dim)
                    .map(|id| {
                        let cell = box_complex
                            .find_cell(&push_in(bd_small.name(id)))
                            .expect("image lands in the open box");
                        FormalSimplex { epi: SimplicialOperator::identity(dim), cell }
                    })
                    .collect()
            })
            .collect();
        match MarkedSimplicialMap::new(&bd_small, &box_complex, assignment) {
            Err(e) => bad.push(format!("i={i}: face action is not a map: {e}")),
            Ok(g) => match pushout(&f, &g) {
                Err(e) => bad.push(format!("i={i}: pushout failed: {e}")),
                Ok((p, _, _)) => {
                    let rename = |name: &str| -> String {
                        let phi: SimplexString = name.parse().expect("string cell names");
                        if phi.n() == n {
                            name.to_string()
                        } else {
                            push_in(name)
                        }
                    };
                    bad.extend(named_isomorphism(
                        &p,
                        &bd_big,
                        &rename,
                        &format!("i={i}: glued boundary"),
                    ));
                }
            },
        }

        // Step inventory.
        let (_, normal_bottom) = split_by_class(n, 1);
        if !normal_bottom.is_empty() {
            bad.push(format!("i={i}: normal simplices of dimension one exist"));
        }
        let mut added: BTreeSet<String> = BTreeSet::new();
        for m in 1..n {
            let (mut abnormal, _) = split_by_class(n, m);
            let (_, mut normal_above) = split_by_class(n, m + 1);
            if m == n - 1 {
                let family = omega_family(n, i).expect("parameters in range");
                abnormal.retain(|phi| !family.contains(phi));
                normal_above.retain(|psi| !family.contains(psi));
            }
            let images: BTreeSet<SimplexString> = abnormal
                .iter()
                .map(|phi| normalize(phi).expect("abnormal below the top dimension"))
                .collect();
            let targets: BTreeSet<SimplexString> = normal_above.iter().cloned().collect();
            if images != targets {
                bad.push(format!(
                    "i={i}: step {m} pairs {} abnormal cells against {} normal ones",
                    abnormal.len(),
                    normal_above.len()
                ));
            }
            for phi in abnormal.iter().chain(normal_above.iter()) {
                if xi_big.find_cell(&phi.to_string()).is_none() {
                    bad.push(format!("i={i}: step {m} adds {phi} outside the xi complex"));
                }
                if !added.insert(phi.to_string()) {
                    bad.push(format!("i={i}: {phi} added twice in the filtration"));
                }
            }
        }
        let xi_names: BTreeSet<String> =
            xi_big.all_cells().map(|id| xi_big.name(id).to_string()).collect();
        let accounted: BTreeSet<String> = bd_names.union(&added).cloned().collect();
        if xi_names != accounted {
            bad.push(format!("i={i}: the filtration does not exhaust the xi complex"));
        }
        bad
    }))
}

/// The filtration from `Ξ̂` to the full triangulated comical cube: each
/// step adjoins one `ω`/`Ω` pair along a complicial horn whose admissible
/// faces are already present, in the marking extended by linearization.
fn verify_xi_cube(n: usize) -> Result<(u64, Vec<String>)> {
    let cases: Vec<usize> = (1..=n).collect();
    Ok(run_cases(cases, |&i| {
        let mut bad = Vec::new();
        let x = triangulate(
            &make_cube_object(CubicalStandard::Comical(n, i, 0)).expect("parameters in range"),
        );
        let xd = dagger(&x);
        for id in x.all_cells() {
            if x.is_marked(id) && !xd.is_marked(id) {
                bad.push(format!("i={i}: dagger loses the marking of {}", x.name(id)));
            }
        }
        let (_, _, hatted) = xi_complexes(n, i).expect("parameters in range");
        let hatd = dagger(&hatted);
        for id in hatted.all_cells() {
            if hatted.is_marked(id) && !hatd.is_marked(id) {
                bad.push(format!("i={i}: dagger loses the marking of {}", hatted.name(id)));
            }
            let outer = xd.find_cell(hatted.name(id)).expect("subcomplex of the cube");
            if hatd.is_marked(id) != xd.is_marked(outer) {
                bad.push(format!(
                    "i={i}: dagger of the subcomplex disagrees on {}",
                    hatted.name(id)
                ));
            }
        }

        let mut present: BTreeSet<String> =
            hatted.all_cells().map(|id| hatted.name(id).to_string()).collect();
        for j in i..=n {
            let big = big_omega(n, i, j).expect("parameters in range");
            let small = omega(n, i, j).expect("parameters in range");
            let face_of = |idx: usize| -> SimplexString {
                big.act(&SimplicialOperator::face(n, idx).expect("face")).expect("faces act")
            };
            if j == i {
                for k in 1..=n {
                    let face = face_of(k);
                    if face != omega(n, k, k).expect("range") {
                        bad.push(format!("i={i}: face {k} of the top simplex is {face}"));
                    }
                    if k != i && !present.contains(&face.to_string()) {
                        bad.push(format!("i={i}: horn face {face} not yet present"));
                    }
                }
                let zero = face_of(0);
                if !present.contains(&zero.to_string()) {
                    bad.push(format!("i={i}: bottom face {zero} not yet present"));
                }
            } else {
                for k in 0..=n {
                    let face = face_of(k);
                    if face.is_degenerate() {
                        bad.push(format!("i={i},j={j}: face {k} of {big} is degenerate"));
                        continue;
                    }
                    if k == j {
                        if face != small {
                            bad.push(format!("i={i},j={j}: face {k} of {big} is {face}"));
                        }
                    } else if k + 1 == j {
                        if face != omega(n, i, j - 1).expect("range") {
                            bad.push(format!("i={i},j={j}: face {k} of {big} is {face}"));
                        }
                        if !present.contains(&face.to_string()) {
                            bad.push(format!("i={i},j={j}: face {face} not yet present"));
                        }
                    } else if !present.contains(&face.to_string()) {
                        bad.push(format!("i={i},j={j}: horn face {face} not yet present"));
                    }
                }
            }
            if present.contains(&small.to_string()) {
                bad.push(format!("i={i},j={j}: {small} present before its filling step"));
            }
            let cell = xd.find_cell(&big.to_string()).expect("the cube has every string");
            if !xd.is_k_complicial(&xd.formal(cell), j) {
                bad.push(format!("i={i},j={j}: {big} is not {j}-complicial in the dagger"));
            }
            present.insert(small.to_string());
            present.insert(big.to_string());
        }
        let all: BTreeSet<String> = x.all_cells().map(|id| x.name(id).to_string()).collect();
        if present != all {
            bad.push(format!("i={i}: the filtration does not exhaust the cube"));
        }
        bad
    }))
}

/// Marking the primed comical cube up to the `(n-2)`-trivialized one: the
/// unmarked codimension-one cells are exactly the `ω^{i,-}` family, each
/// markable in turn by a complicial marking extension whose side faces are
/// certified marked.
fn verify_marking_extension(n: usize) -> Result<(u64, Vec<String>)> {
    if n < 2 {
        return Ok((0, Vec::new()));
    }
    let cases: Vec<usize> = (1..=n).collect();
    Ok(run_cases(cases, |&i| {
        let mut bad = Vec::new();
        let primed = triangulate(
            &make_cube_object(CubicalStandard::ComicalPrime(n, i, 0))
                .expect("parameters in range"),
        );
        let primed_dagger = dagger(&primed);
        let comical = make_cube_object(CubicalStandard::Comical(n, i, 0)).expect("range");
        let target = triangulate(&cubical_trivialize(&comical, n - 2));
        let target_dagger = dagger(&target);

        // The dagger of the trivialized cube is the trivialized
        // triangulation.
        let tau = crate::simplicial_core::trivialize(&triangulate(&comical), n - 2);
        for id in target_dagger.all_cells() {
            let other = tau.find_cell(target_dagger.name(id)).expect("same cells");
            if target_dagger.is_marked(id) != tau.is_marked(other) {
                bad.push(format!(
                    "i={i}: dagger of the trivialized cube disagrees on {}",
                    target_dagger.name(id)
                ));
            }
        }

        // Unmarked codimension-one cells are exactly the omega family.
        let expected: BTreeSet<String> = (i..=n)
            .map(|j| omega(n, i, j).expect("range").to_string())
            .collect();
        let unmarked: BTreeSet<String> = primed_dagger
            .cells(n - 1)
            .filter(|&id| !primed_dagger.is_marked(id))
            .map(|id| primed_dagger.name(id).to_string())
            .collect();
        if unmarked != expected {
            bad.push(format!(
                "i={i}: unmarked codimension-one cells are {:?}, expected the omega family",
                unmarked.iter().collect::<Vec<_>>()
            ));
        }
        // Away from codimension one the dagger already agrees with the
        // target.
        for id in primed_dagger.all_cells() {
            if id.dim == n - 1 {
                continue;
            }
            let other = target_dagger.find_cell(primed_dagger.name(id)).expect("same cells");
            if primed_dagger.is_marked(id) != target_dagger.is_marked(other) {
                bad.push(format!(
                    "i={i}: markings disagree off codimension one at {}",
                    primed_dagger.name(id)
                ));
            }
        }

        // Replay the induction on j.
        let mut marking: BTreeMap<CellId, bool> = primed_dagger
            .all_cells()
            .map(|id| (id, primed_dagger.is_marked(id)))
            .collect();
        for j in i..=n {
            let current = remark(&primed_dagger, &|id, _| marking[&id]);
            let big = big_omega(n, i, j).expect("parameters in range");
            let big_cell = current.find_cell(&big.to_string()).expect("cube cells");
            let face_of = |idx: usize| -> SimplexString {
                big.act(&SimplicialOperator::face(n, idx).expect("face")).expect("faces act")
            };
            let marked_now = |phi: &SimplexString| -> bool {
                current.find_cell(&phi.to_string()).is_some_and(|c| current.is_marked(c))
            };
            if !current.is_k_complicial(&current.formal(big_cell), j) {
                bad.push(format!("i={i},j={j}: {big} is not {j}-complicial at its step"));
            }
            if j == i {
                // Base case: certify the side faces of the top simplex.
                if i == 1 {
                    let below = face_of(0);
                    let expected_face = linear_simplex(
                        &FaceNormalForm::elementary(n, 1, 1).expect("range"),
                    );
                    if below != expected_face {
                        bad.push(format!("i=1: bottom face is {below}, not {expected_face}"));
                    }
                    if !marked_now(&below) {
                        bad.push(format!("i=1: bottom face {below} is unmarked"));
                    }
                } else {
                    let below = face_of(i - 1);
                    if below != omega(n, i - 1, i - 1).expect("range") {
                        bad.push(format!("i={i}: face {} is {below}", i - 1));
                    }
                    let lins: BTreeSet<SimplexString> =
                        below.linearizations().into_iter().collect();
                    let expected_lins: BTreeSet<SimplexString> = [
                        linear_simplex(&FaceNormalForm::elementary(n, i, 1).expect("range")),
                        linear_simplex(&FaceNormalForm::elementary(n, i - 1, 0).expect("range")),
                    ]
                    .into_iter()
                    .collect();
                    if lins != expected_lins {
                        bad.push(format!("i={i}: linearizations of {below} mischaracterized"));
                    }
                    for lin in &expected_lins {
                        if !marked_now(lin) {
                            bad.push(format!("i={i}: linearization {lin} of {below} unmarked"));
                        }
                    }
                    if !marked_now(&below) {
                        bad.push(format!("i={i}: face {below} is unmarked"));
                    }
                }
                if i < n {
                    let above = face_of(i + 1);
                    if above != omega(n, i + 1, i + 1).expect("range") {
                        bad.push(format!("i={i}: face {} is {above}", i + 1));
                    }
                    if i + 1 == n {
                        let expected_face = linear_simplex(
                            &FaceNormalForm::elementary(n, n, 0).expect("range"),
                        );
                        if above != expected_face {
                            bad.push(format!("i={i}: face {above} is not {expected_face}"));
                        }
                    } else {
                        let lins: BTreeSet<SimplexString> =
                            above.linearizations().into_iter().collect();
                        let expected_lins: BTreeSet<SimplexString> = [
                            linear_simplex(
                                &FaceNormalForm::elementary(n, i + 1, 0).expect("range"),
                            ),
                            linear_simplex(
                                &FaceNormalForm::elementary(n, i + 2, 1).expect("range"),
                            ),
                        ]
                        .into_iter()
                        .collect();
                        if lins != expected_lins {
                            bad.push(format!("i={i}: linearizations of {above} mischaracterized"));
                        }
                    }
                    if !marked_now(&above) {
                        bad.push(format!("i={i}: face {above} is unmarked"));
                    }
                }
            } else {
                let below = face_of(j - 1);
                if below != omega(n, i, j - 1).expect("range") {
                    bad.push(format!("i={i},j={j}: face {} is {below}", j - 1));
                }
                if !marked_now(&below) {
                    bad.push(format!("i={i},j={j}: face {below} unmarked at its step"));
                }
                if j < n {
                    let above = face_of(j + 1);
                    if !above.linearizations().is_empty() {
                        bad.push(format!("i={i},j={j}: face {above} has linearizations"));
                    }
                    if !marked_now(&above) {
                        bad.push(format!("i={i},j={j}: face {above} unmarked"));
                    }
                }
            }
            let struck = current.find_cell(&omega(n, i, j).expect("range").to_string());
            match struck {
                None => bad.push(format!("i={i},j={j}: missing cell for the marked face")),
                Some(cell) => {
                    marking.insert(cell, true);
                }
            }
        }
        let finished = remark(&primed_dagger, &|id, _| marking[&id]);
        for id in finished.all_cells() {
            let other = target_dagger.find_cell(finished.name(id)).expect("same cells");
            if finished.is_marked(id) != target_dagger.is_marked(other) {
                bad.push(format!(
                    "i={i}: extension finishes at the wrong marking on {}",
                    finished.name(id)
                ));
            }
        }
        bad
    }))
}

/// Degeneracies and connections carry strongly marked cubes to degenerate
/// or strongly marked cubes, clause by clause.
fn verify_strong_degens(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for ambient in 1..n {
        for i in 1..=ambient {
            cases.push((ambient, i));
        }
    }
    Ok(run_cases(cases, |&(ambient, i)| {
        let mut bad = Vec::new();
        let deltas = FaceNormalForm::enumerate(ambient + 1);
        let check = |op: &BoxMorphism,
                     hyp_index: usize,
                     always_degenerate: bool,
                     label: &str,
                     bad: &mut Vec<String>| {
            for delta in &deltas {
                if !is_marked_in_strong_cube(delta, hyp_index) {
                    continue;
                }
                let composite =
                    box_compose(op, &delta.to_morphism()).expect("dimensions agree");
                let (epi, face) = ez_factor(&composite);
                let degenerate = epi.source_dim() != epi.target_dim();
                if always_degenerate {
                    if !degenerate {
                        bad.push(format!(
                            "{label}: composite with {delta} is non-degenerate (i = {i})"
                        ));
                    }
                } else if !degenerate && !is_marked_in_strong_cube(&face, i) {
                    bad.push(format!(
                        "{label}: composite with {delta} lands on unmarked {face} (i = {i})"
                    ));
                }
            }
        };
        for j in i..=ambient + 1 {
            let op = BoxMorphism::degeneracy(ambient + 1, j).expect("range");
            check(&op, i, false, &format!("degeneracy {j}"), &mut bad);
        }
        for j in 1..i {
            let op = BoxMorphism::connection(ambient + 1, j, 1).expect("range");
            check(&op, i + 1, false, &format!("positive connection {j}"), &mut bad);
        }
        for j in i..=ambient {
            for eps in [0u8, 1] {
                let op = BoxMorphism::connection(ambient + 1, j, eps).expect("range");
                check(&op, i, false, &format!("connection ({j},{eps})"), &mut bad);
            }
        }
        let op = BoxMorphism::connection(ambient + 1, i, 1).expect("range");
        check(&op, i + 1, true, "pivot connection", &mut bad);
        bad
    }))
}

/// Restriction along a positive face above the pivot preserves and reflects
/// the strong marking.
fn verify_strong_iso(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for ambient in 2..=n {
        for i in 1..ambient {
            for k in i + 1..=ambient {
                cases.push((ambient, i, k));
            }
        }
    }
    Ok(run_cases(cases, |&(ambient, i, k)| {
        let mut bad = Vec::new();
        let outer = FaceNormalForm::elementary(ambient, k, 1).expect("range");
        for delta in FaceNormalForm::enumerate(ambient - 1) {
            let composed = face_compose(&outer, &delta).expect("composable");
            if is_marked_in_strong_cube(&composed, i) != is_marked_in_strong_cube(&delta, i) {
                bad.push(format!(
                    "(k,1)=({k},1): {delta} and {composed} disagree for i = {i}"
                ));
            }
        }
        bad
    }))
}

/// The gamma filtration of the strongly comical cube: each step is a
/// pushout of the previous stage one dimension down, and the final stage
/// fills a comical open box.
fn verify_strong_anodyne(n: usize) -> Result<(u64, Vec<String>)> {
    let mut cases = Vec::new();
    for ambient in 1..=n {
        for i in 1..=ambient {
            cases.push((ambient, i));
        }
    }
    Ok(run_cases(cases, |&(ambient, i)| {
        let mut bad = Vec::new();
        // Final stage: comical markings embed in strong ones, and the
        // remaining inclusion fills the comical open box.
        for nf in FaceNormalForm::enumerate(ambient) {
            if is_marked_in_comical_cube(&nf, i, 1) && !is_marked_in_strong_cube(&nf, i) {
                bad.push(format!("ambient {ambient}: comically marked {nf} not strong"));
            }
        }
        let open_box = make_cube_object(CubicalStandard::OpenBox(ambient, i, 1))
            .expect("parameters in range");
        let comical = make_cube_object(CubicalStandard::Comical(ambient, i, 1)).expect("range");
        let gamma_last = make_cube_object(CubicalStandard::Gamma(ambient, i, i + 1))
            .expect("parameters in range");
        let strong = make_cube_object(CubicalStandard::StrongComical(ambient, i)).expect("range");
        let f = MarkedCubicalMap::by_name_inclusion(&open_box, &comical).expect("inclusion");
        match MarkedCubicalMap::by_name_inclusion(&open_box, &gamma_last) {
            Err(e) => bad.push(format!("ambient {ambient}: open box misses the last stage: {e}")),
            Ok(g) => match cubical_pushout(&f, &g) {
                Err(e) => bad.push(format!("ambient {ambient}: open-box pushout failed: {e}")),
                Ok((p, _, _)) => {
                    if find_cubical_isomorphism(&p, &strong).is_none() {
                        bad.push(format!(
                            "ambient {ambient}: filling the open box does not give the strong cube"
                        ));
                    }
                }
            },
        }
        // Intermediate stages, one dimension down on the reference square.
        for j in i + 2..=ambient + 1 {
            let small_gamma = make_cube_object(CubicalStandard::Gamma(ambient - 1, i, j - 1))
                .expect("parameters in range");
            let small_strong = make_cube_object(CubicalStandard::StrongComical(ambient - 1, i))
                .expect("parameters in range");
            let big_j = make_cube_object(CubicalStandard::Gamma(ambient, i, j)).expect("range");
            let big_prev =
                make_cube_object(CubicalStandard::Gamma(ambient, i, j - 1)).expect("range");
            let outer = FaceNormalForm::elementary(ambient, j - 1, 1).expect("range");
            for delta in FaceNormalForm::enumerate(ambient - 1) {
                let composed = face_compose(&outer, &delta).expect("composable");
                let inside = big_j.find_cell(&composed.to_string());
                let small = small_gamma.find_cell(&delta.to_string());
                match (inside, small) {
                    (Some(_), None) | (None, Some(_)) => bad.push(format!(
                        "j={j}: stage membership of {delta} disagrees across the face"
                    )),
                    (Some(a), Some(b)) if delta.source_dim() >= 1 => {
                        if big_j.is_marked(a) != small_gamma.is_marked(b) {
                            bad.push(format!(
                                "j={j}: stage marking of {delta} disagrees across the face"
                            ));
                        }
                    }
                    _ => {}
                }
            }
            let f = MarkedCubicalMap::by_name_inclusion(&small_gamma, &small_strong)
                .expect("inclusion");
            let assignment: Vec<Vec<FormalCube>> = (0..=small_gamma.dim())
                .map(|dim| {
                    small_gamma
                        .cells(dim)
                        .map(|id| {
                            let name: FaceNormalForm =
                                small_gamma.name(id).parse().expect("face cell names");
                            let composed = face_compose(&outer, &name).expect("composable");
                            let cell = big_j
                                .find_cell(&composed.to_string())
                                .expect("face lands in the stage");
                            FormalCube { epi: BoxMorphism::identity(dim), cell }
                        })
                        .collect()
                })
                .collect();
            match MarkedCubicalMap::new(&small_gamma, &big_j, assignment) {
                Err(e) => bad.push(format!("j={j}: face embedding is not a map: {e}")),
                Ok(g) => match cubical_pushout(&f, &g) {
                    Err(e) => bad.push(format!("j={j}: stage pushout failed: {e}")),
                    Ok((p, _, _)) => {
                        if find_cubical_isomorphism(&p, &big_prev).is_none() {
                            bad.push(format!("j={j}: stage pushout is not the next stage"));
                        }
                    }
                },
            }
        }
        bad
    }))
}

/// The glued equivalence square: its underlying complex is a tetrahedron
/// whose only unmarked cell is the long diagonal, which falls to a
/// complicial marking extension, so the precomplicial reflection is fully
/// marked.
fn verify_rezk() -> Result<(u64, Vec<String>)> {
    let mut bad = Vec::new();
    let l = make_standard(SimplicialStandard::L)?;
    let l_prime = make_standard(SimplicialStandard::LPrime)?;
    let eq = make_standard(SimplicialStandard::Delta3Eq)?;
    let f = MarkedSimplicialMap::by_name_inclusion(&l, &eq)?;
    let g = MarkedSimplicialMap::by_name_inclusion(&l, &l_prime)?;
    let (p, _, _) = pushout(&f, &g)?;
    if find_isomorphism(&flatten(&p), &flatten(&make_standard(SimplicialStandard::Delta(3))?))
        .is_none()
    {
        bad.push("the glued square is not a tetrahedron underneath".to_string());
    }
    let unmarked: Vec<String> = p
        .all_cells()
        .filter(|&id| id.dim >= 1 && !p.is_marked(id))
        .map(|id| p.name(id).to_string())
        .collect();
    if unmarked != ["03"] {
        bad.push(format!("unmarked cells are {unmarked:?}, expected the long diagonal"));
    }
    for name in ["013", "023"] {
        match p.find_cell(name) {
            None => bad.push(format!("missing filler {name}")),
            Some(cell) => {
                let formal = p.formal(cell);
                if !p.is_k_complicial(&formal, 1) {
                    bad.push(format!("filler {name} is not 1-complicial"));
                }
                for side in [0, 2] {
                    if !p.is_marked_formal(p.face(cell, side)) {
                        bad.push(format!("side face {side} of filler {name} is unmarked"));
                    }
                }
            }
        }
    }
    let reflection = precomplicial_reflection(&p);
    for id in reflection.all_cells() {
        if id.dim >= 1 && !reflection.is_marked(id) {
            bad.push(format!("reflection leaves {} unmarked", reflection.name(id)));
        }
    }
    Ok((4, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> SimplexString {
        text.parse().expect("valid string literal")
    }

    #[test]
    fn preamble_data_matches_the_worked_triples() {
        let d = essential_data(&s("12354@5")).unwrap();
        assert_eq!((d.p, d.q_pos, d.q), (3, 4, 5));
        assert_eq!(d.preamble, vec![1, 2, 3]);
        let d = essential_data(&s("12343@5")).unwrap();
        assert_eq!((d.p, d.q_pos, d.q), (2, 3, 3));
        let d = essential_data(&s("23111@5")).unwrap();
        assert_eq!((d.p, d.q_pos, d.q), (0, 1, 2));
        assert!(d.preamble.is_empty());
        // The top simplex exhausts its preamble and pivots past the end.
        let d = essential_data(&s("1234@4")).unwrap();
        assert_eq!((d.p, d.q_pos, d.q), (4, 5, 5));
    }

    #[test]
    fn essential_data_rejects_boundary_and_degenerate_strings() {
        assert!(matches!(essential_data(&s("1-2@3")), Err(Error::NotEssential(_))));
        assert!(matches!(essential_data(&s("+12@3")), Err(Error::NotEssential(_))));
        let degenerate = SimplexString::new(
            2,
            vec![Entry::Finite(2), Entry::Finite(2), Entry::Finite(2)],
        )
        .unwrap();
        assert!(matches!(essential_data(&degenerate), Err(Error::NotEssential(_))));
    }

    #[test]
    fn normalization_matches_the_worked_example() {
        assert_eq!(normalize(&s("1232@4")).unwrap(), s("1342@4"));
        assert_eq!(denormalize(&s("1342@4")).unwrap(), s("1232@4"));
        // A normal simplex cannot be normalized, nor an abnormal one
        // denormalized.
        assert!(matches!(normalize(&s("12@2")), Err(Error::WrongClass(_))));
        assert!(matches!(denormalize(&s("11@2")), Err(Error::WrongClass(_))));
        // Round trips across every abnormal simplex of the 3-cube.
        for m in 1..3 {
            for phi in essential_strings(3, m) {
                if classify(&phi) != SimplexClass::Abnormal {
                    continue;
                }
                let psi = normalize(&phi).unwrap();
                assert_eq!(denormalize(&psi).unwrap(), phi);
            }
        }
    }

    #[test]
    fn the_omega_families_match_their_displayed_values() {
        assert_eq!(omega(5, 3, 3).unwrap(), s("12334@5"));
        assert_eq!(omega(5, 3, 4).unwrap(), s("12434@5"));
        assert_eq!(omega(5, 3, 5).unwrap(), s("12+34@5"));
        assert_eq!(big_omega(5, 3, 3).unwrap(), s("12345@5"));
        assert_eq!(big_omega(5, 3, 4).unwrap(), s("12435@5"));
        assert_eq!(big_omega(5, 3, 5).unwrap(), s("12534@5"));
        for n in 1..=4 {
            for i in 1..=n {
                assert_eq!(big_omega(n, i, i).unwrap(), SimplexString::iota(n));
                let top_of_face =
                    linear_simplex(&FaceNormalForm::elementary(n, i, 0).unwrap());
                assert_eq!(omega(n, i, n).unwrap(), top_of_face);
            }
        }
        assert!(matches!(omega(3, 2, 1), Err(Error::ParamRange(_))));
        assert!(matches!(omega(3, 0, 1), Err(Error::ParamRange(_))));
        assert!(matches!(big_omega(3, 1, 4), Err(Error::ParamRange(_))));
    }

    #[test]
    fn the_insertion_order_ranks_the_two_dimensional_strings() {
        // Normal and boundary strings precede every abnormal one; abnormal
        // strings rank by preamble length, larger pivot first.
        assert!(simplex_order_less(&s("211@3"), &s("122@3")));
        assert!(simplex_order_less(&s("1-2@3"), &s("122@3")));
        assert!(simplex_order_less(&s("212@3"), &s("112@3")));
        assert!(!simplex_order_less(&s("112@3"), &s("212@3")));
        assert!(simplex_order_less(&s("112@3"), &s("122@3")));
        // Nothing precedes a normal simplex, and equal preamble data is
        // incomparable.
        assert!(!simplex_order_less(&s("122@3"), &s("211@3")));
        assert!(!simplex_order_less(&s("112@3"), &s("121@3")));
        // Mismatched shapes are incomparable.
        assert!(!simplex_order_less(&s("11@2"), &s("122@3")));
        // The order is irreflexive, asymmetric and transitive.
        let all: Vec<SimplexString> = (0..=3)
            .flat_map(|m| SimplexString::enumerate(3, m))
            .filter(|phi| !phi.is_degenerate())
            .collect();
        for a in &all {
            assert!(!simplex_order_less(a, a));
            for b in &all {
                if simplex_order_less(a, b) {
                    assert!(!simplex_order_less(b, a));
                }
                for c in &all {
                    if simplex_order_less(a, b) && simplex_order_less(b, c) {
                        assert!(simplex_order_less(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn disorder_is_detected_and_forces_markings() {
        let phi = s("23111@5");
        assert!(is_i_disordered(&phi, 2));
        assert!(!is_i_disordered(&phi, 3));
        assert!(!is_i_disordered(&phi, 1));
        assert!(phi.is_marked());
        // Normalizing an abnormal simplex leaves the raised pivot
        // disordered one step up.
        let phi = s("1232@4");
        let d = essential_data(&phi).unwrap();
        assert!(is_i_disordered(&normalize(&phi).unwrap(), d.q + 1));
    }

    #[test]
    fn xi_complexes_deliver_the_expected_inventories() {
        let (xi, boundary, hatted) = xi_complexes(1, 1).unwrap();
        for x in [&xi, &boundary, &hatted] {
            assert_eq!(x.total_cells(), 1);
            assert!(x.find_cell("-@1").is_some());
        }
        for (n, i) in [(2, 1), (3, 1), (3, 2), (3, 3)] {
            let (xi, boundary, hatted) = xi_complexes(n, i).unwrap();
            let total: usize = (0..=n)
                .flat_map(|r| SimplexString::enumerate(n, r))
                .filter(|phi| !phi.is_degenerate())
                .count();
            assert_eq!(xi.total_cells(), total - 2 * (n - i + 1));
            assert_eq!(hatted.total_cells(), xi.total_cells());
            for j in i..=n {
                assert!(xi.find_cell(&omega(n, i, j).unwrap().to_string()).is_none());
                assert!(xi.find_cell(&big_omega(n, i, j).unwrap().to_string()).is_none());
            }
            // The boundary part keeps every non-interior string except the
            // top simplex of the missing face.
            assert!(boundary.find_cell(&omega(n, i, n).unwrap().to_string()).is_none());
            let boundary_strings: usize = (0..=n)
                .flat_map(|r| SimplexString::enumerate(n, r))
                .filter(|phi| {
                    !phi.is_degenerate()
                        && phi.entries().iter().any(|e| !matches!(e, Entry::Finite(_)))
                })
                .count();
            assert_eq!(boundary.total_cells(), boundary_strings - 1);
        }
    }

    #[test]
    fn string_subcomplexes_agree_with_the_triangulation_functor() {
        for n in 1..=3 {
            for i in 1..=n {
                for eps in [0, 1] {
                    let x = triangulate(
                        &make_cube_object(CubicalStandard::Comical(n, i, eps)).unwrap(),
                    );
                    for id in x.all_cells() {
                        let phi: SimplexString = x.name(id).parse().unwrap();
                        assert_eq!(
                            x.is_marked(id),
                            marked_in_comical_triangulation(&phi, i, eps),
                            "marking of {phi} in the ({i},{eps})-comical {n}-cube"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn disorder_matches_the_complicial_test_on_the_cube() {
        let x = triangulate(&make_cube_object(CubicalStandard::Cube(3)).unwrap());
        let mut found = 0;
        for id in x.all_cells() {
            let phi: SimplexString = x.name(id).parse().unwrap();
            for i in 2..=phi.r() {
                if is_i_disordered(&phi, i) {
                    assert!(x.is_k_complicial(&x.formal(id), i - 1), "{phi} at {i}");
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn the_dagger_extension_marks_by_linearizations() {
        let x = triangulate(&make_cube_object(CubicalStandard::Comical(3, 2, 0)).unwrap());
        let xd = dagger(&x);
        // A substring-free cell stays marked, the top simplex stays marked,
        // and a cell with an unmarked linearization stays unmarked.
        assert!(xd.is_marked(xd.find_cell("231@3").unwrap()));
        assert!(xd.is_marked(xd.find_cell("123@3").unwrap()));
        assert!(!xd.is_marked(xd.find_cell("122@3").unwrap()));
        assert!(!xd.is_marked(xd.find_cell("12+@3").unwrap()));
        // The primed cube marks the positive top face, so its dagger marks
        // the adjacent linear simplex.
        let p =
            triangulate(&make_cube_object(CubicalStandard::ComicalPrime(3, 2, 0)).unwrap());
        let pd = dagger(&p);
        assert!(pd.is_marked(pd.find_cell("12+@3").unwrap()));
        assert!(!pd.is_marked(pd.find_cell("122@3").unwrap()));
    }

    #[test]
    fn the_registry_passes_its_small_instances() {
        for lemma in lemma_ids() {
            for n in 1..=2 {
                let report = verify(lemma, n).unwrap();
                assert!(
                    report.passed(),
                    "{lemma} at n = {n}: {:?}",
                    report.failures
                );
            }
        }
        for lemma in ["N-bijection", "omega-face", "xi-cube-anodyne", "marking-extension-anodyne"]
        {
            let report = verify(lemma, 3).unwrap();
            assert!(report.passed(), "{lemma} at n = 3: {:?}", report.failures);
        }
    }

    #[test]
    fn unknown_and_oversized_requests_are_rejected() {
        assert!(matches!(verify("no-such-lemma", 2), Err(Error::UnknownLemma(_))));
        assert!(matches!(verify("Box-marking", 9), Err(Error::Budget(_))));
    }

    #[test]
    fn reports_serialize_with_their_parameters() {
        let report = verify("omega-face", 3).unwrap();
        let json = report.to_json();
        assert_eq!(json["lemma"], "omega-face");
        assert_eq!(json["params"]["n"], 3);
        assert_eq!(json["cases"], report.cases);
        assert!(json["failures"].as_array().unwrap().is_empty());
        assert!(json["millis"].is_u64());
        let rezk = verify("Rezk-pushout-complicial", 0).unwrap();
        assert!(rezk.params.is_empty());
        assert!(rezk.passed());
    }
}
