//! Star connected sums and star handles.
//!
//! Both operations delete open vertex stars and identify the resulting
//! boundary links through a [`LinkIso`]. Vertex ids of the result are dense;
//! the maps returned alongside the complex say where every surviving input
//! vertex went.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    coherent_orientation, iso_sign, ComplexError, LinkIso, LocalBfs, SimplicialComplex, VertexId, UNREACHED,
};
use crate::flagcheck;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("gluing map is not orientation-reversing (sign {0:+})")]
    OrientationNotReversed(i8),
    #[error("inputs share vertex label {0:?}")]
    SharedVertices(String),
    #[error("facet {0:?} would lie entirely in the glued link")]
    DegenerateGluing(Vec<VertexId>),
    #[error("handle sites are at distance {0}, need at least 5")]
    TooClose(u32),
    #[error("handle sites are at distance {0}, flag-no-square needs at least 7")]
    FnsDistanceViolated(u32),
    #[error("input is not flag-no-square: {0}")]
    InputNotFns(&'static str),
    #[error("glued link is not an induced subcomplex of the result")]
    LinkNotInduced,
    #[error("Euler characteristic {found} differs from the predicted {expected}")]
    IdentityViolated { expected: i64, found: i64 },
}

/// How vertex labels of the inputs are combined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelPolicy {
    /// Prefix left labels with `left` and right labels with `right`
    /// (unlabeled vertices use their id); glued vertices keep the left label.
    Prefixed { left: String, right: String },
    /// Keep labels unchanged; a label present on both sides is an error.
    Keep,
}

impl Default for LabelPolicy {
    fn default() -> Self {
        LabelPolicy::Prefixed { left: "left".into(), right: "right".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryOptions {
    /// Connected sum: require both inputs to be fns. Handle: require the sites
    /// to be at distance at least 7.
    pub enforce_fns: bool,
    pub enforce_orientation_reversing: bool,
    /// Compute the orientation sign of the gluing map even when not enforced.
    pub record_sign: bool,
    /// Check that the glued link is induced in the result.
    pub check_induced: bool,
    pub labels: LabelPolicy,
}

impl Default for SurgeryOptions {
    fn default() -> Self {
        SurgeryOptions {
            enforce_fns: false,
            enforce_orientation_reversing: false,
            record_sign: true,
            check_induced: true,
            labels: LabelPolicy::default(),
        }
    }
}

impl SurgeryOptions {
    /// Settings for building large complexes: no sign, no induced check,
    /// labels kept as they are.
    pub fn fast() -> Self {
        SurgeryOptions {
            record_sign: false,
            check_induced: false,
            labels: LabelPolicy::Keep,
            ..SurgeryOptions::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Glued {
    pub complex: SimplicialComplex,
    /// New id of every left vertex (`None` for the removed one).
    pub left_map: Vec<Option<VertexId>>,
    /// New id of every right vertex (`None` for the removed one).
    pub right_map: Vec<Option<VertexId>>,
    /// New ids of the identified link vertices, sorted.
    pub sphere: Vec<VertexId>,
    pub iso_sign: Option<i8>,
}

#[derive(Clone, Debug)]
pub struct Handled {
    pub complex: SimplicialComplex,
    /// New id of every input vertex (`None` for the two removed ones).
    pub map: Vec<Option<VertexId>>,
    pub sphere: Vec<VertexId>,
    pub iso_sign: Option<i8>,
    /// Graph distance between the two sites before the surgery.
    pub distance: u32,
}

fn relabeled(k: &SimplicialComplex, prefix: &str) -> Vec<Option<String>> {
    k.prefixed_labels(prefix)
}

fn sign_of(
    n: &SimplicialComplex,
    m: &SimplicialComplex,
    iso: &LinkIso,
    opts: &SurgeryOptions,
) -> Result<Option<i8>, SurgeryError> {
    if !(opts.record_sign || opts.enforce_orientation_reversing) {
        return Ok(None);
    }
    let on = coherent_orientation(n);
    let om = if std::ptr::eq(n, m) { on.clone() } else { coherent_orientation(m) };
    let sign = match (on, om) {
        (Ok(on), Ok(om)) => Some(iso_sign(n, &on, m, &om, iso)?),
        (Err(e), _) | (_, Err(e)) if opts.enforce_orientation_reversing => return Err(e.into()),
        _ => None,
    };
    if opts.enforce_orientation_reversing && sign != Some(-1) {
        return Err(SurgeryError::OrientationNotReversed(sign.unwrap_or(0)));
    }
    Ok(sign)
}

/// `N #_φ M`: the antistars of `v ∈ N` and `u ∈ M` glued along `φ: lk_v(N) → lk_u(M)`.
///
/// Left vertices keep their relative order; right vertices off the link are
/// appended after them in order.
pub fn star_connected_sum(
    n: &SimplicialComplex,
    v: VertexId,
    m: &SimplicialComplex,
    u: VertexId,
    iso: &LinkIso,
    opts: &SurgeryOptions,
) -> Result<Glued, SurgeryError> {
    n.check_vertex(v)?;
    m.check_vertex(u)?;
    if n.dim() != m.dim() {
        return Err(ComplexError::NonPure { expected: n.dim() + 1, found: m.dim() + 1 }.into());
    }
    if iso.source != v || iso.target != u {
        return Err(ComplexError::LinkMismatch("map is based at other vertices".into()).into());
    }
    iso.verify(n, m)?;
    if opts.enforce_fns {
        if !flagcheck::is_fns(n) {
            return Err(SurgeryError::InputNotFns("left"));
        }
        if !flagcheck::is_fns(m) {
            return Err(SurgeryError::InputNotFns("right"));
        }
    }
    let sign = sign_of(n, m, iso, opts)?;

    let left_map: Vec<Option<VertexId>> = (0..n.vertex_count() as VertexId)
        .map(|x| match x.cmp(&v) {
            std::cmp::Ordering::Less => Some(x),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(x - 1),
        })
        .collect();
    let mut right_map: Vec<Option<VertexId>> = vec![None; m.vertex_count()];
    for &(x, y) in &iso.pairs {
        right_map[y as usize] = left_map[x as usize];
    }
    let mut next = n.vertex_count() as VertexId - 1;
    for (y, slot) in right_map.iter_mut().enumerate() {
        if y as VertexId != u && slot.is_none() {
            *slot = Some(next);
            next += 1;
        }
    }
    let total = next as usize;
    let mut sphere: Vec<VertexId> = iso.pairs.iter().map(|&(x, _)| left_map[x as usize].unwrap()).collect();
    sphere.sort_unstable();

    let labels = merge_labels(n, m, &left_map, &right_map, total, &opts.labels)?;
    let d1 = n.dim() + 1;
    let mut facets = Vec::with_capacity((n.facet_count() + m.facet_count()) * d1);
    let mut on_sphere = vec![false; total];
    for &s in &sphere {
        on_sphere[s as usize] = true;
    }
    for f in n.facets().filter(|f| !f.contains(&v)) {
        facets.extend(f.iter().map(|&x| left_map[x as usize].unwrap()));
    }
    let mut buf = Vec::with_capacity(d1);
    for f in m.facets().filter(|f| !f.contains(&u)) {
        buf.clear();
        buf.extend(f.iter().map(|&y| right_map[y as usize].unwrap()));
        buf.sort_unstable();
        facets.extend_from_slice(&buf);
    }
    reject_facets_on_sphere(&facets, d1, &on_sphere)?;
    let complex = SimplicialComplex::from_raw_parts(n.dim(), facets, labels);
    if opts.check_induced {
        check_sphere_induced(&complex, &sphere, n, v, &left_map)?;
    }
    Ok(Glued { complex, left_map, right_map, sphere, iso_sign: sign })
}

fn merge_labels(
    n: &SimplicialComplex,
    m: &SimplicialComplex,
    left_map: &[Option<VertexId>],
    right_map: &[Option<VertexId>],
    total: usize,
    policy: &LabelPolicy,
) -> Result<Vec<Option<String>>, SurgeryError> {
    let (left, right) = match policy {
        LabelPolicy::Prefixed { left, right } => (relabeled(n, left), relabeled(m, right)),
        LabelPolicy::Keep => {
            let seen: HashSet<&str> = n.labels().iter().filter_map(|l| l.as_deref()).collect();
            if let Some(l) = m.labels().iter().filter_map(|l| l.as_deref()).find(|l| seen.contains(l)) {
                return Err(SurgeryError::SharedVertices(l.to_string()));
            }
            (n.labels().to_vec(), m.labels().to_vec())
        }
    };
    let mut labels: Vec<Option<String>> = vec![None; total];
    let mut filled = vec![false; total];
    for (x, l) in left.into_iter().enumerate() {
        if let Some(t) = left_map[x] {
            labels[t as usize] = l;
            filled[t as usize] = true;
        }
    }
    for (y, l) in right.into_iter().enumerate() {
        if let Some(t) = right_map[y] {
            if !filled[t as usize] {
                labels[t as usize] = l;
            }
        }
    }
    Ok(labels)
}

fn reject_facets_on_sphere(facets: &[VertexId], d1: usize, on_sphere: &[bool]) -> Result<(), SurgeryError> {
    match facets.chunks_exact(d1).find(|f| f.iter().all(|&x| on_sphere[x as usize])) {
        Some(f) => Err(SurgeryError::DegenerateGluing(f.to_vec())),
        None => Ok(()),
    }
}

/// The faces induced on the sphere vertices must be exactly the image of the link.
fn check_sphere_induced(
    out: &SimplicialComplex,
    sphere: &[VertexId],
    n: &SimplicialComplex,
    v: VertexId,
    map: &[Option<VertexId>],
) -> Result<(), SurgeryError> {
    let induced = out.induced_faces(sphere)?;
    let mut link: Vec<Vec<VertexId>> = n
        .facets()
        .filter(|f| f.contains(&v))
        .map(|f| {
            let mut g: Vec<VertexId> = f.iter().filter(|&&x| x != v).map(|&x| map[x as usize].unwrap()).collect();
            g.sort_unstable();
            g
        })
        .collect();
    link.sort_unstable();
    if induced.faces() == link.as_slice() {
        Ok(())
    } else {
        Err(SurgeryError::LinkNotInduced)
    }
}

/// `h_φ(N)`: remove `v` and `u` and identify `lk_v(N)` with `lk_u(N)` through `φ`.
///
/// Link vertices of `v` survive; those of `u` are merged into them.
pub fn star_handle(
    n: &SimplicialComplex,
    v: VertexId,
    u: VertexId,
    iso: &LinkIso,
    opts: &SurgeryOptions,
) -> Result<Handled, SurgeryError> {
    n.check_vertex(v)?;
    n.check_vertex(u)?;
    if iso.source != v || iso.target != u {
        return Err(ComplexError::LinkMismatch("map is based at other vertices".into()).into());
    }
    let distance = site_distance(n, v, u, 7);
    if distance < 5 {
        return Err(SurgeryError::TooClose(distance));
    }
    if opts.enforce_fns && distance < 7 {
        return Err(SurgeryError::FnsDistanceViolated(distance));
    }
    iso.verify(n, n)?;
    let sign = sign_of(n, n, iso, opts)?;

    let count = n.vertex_count();
    let mut merged_into: Vec<Option<VertexId>> = vec![None; count];
    for &(x, y) in &iso.pairs {
        merged_into[y as usize] = Some(x);
    }
    let mut map: Vec<Option<VertexId>> = vec![None; count];
    let mut next = 0;
    for x in 0..count {
        if x as VertexId == v || x as VertexId == u || merged_into[x].is_some() {
            continue;
        }
        map[x] = Some(next);
        next += 1;
    }
    for y in 0..count {
        if let Some(x) = merged_into[y] {
            map[y] = map[x as usize];
        }
    }
    let total = next as usize;
    let mut sphere: Vec<VertexId> = iso.pairs.iter().map(|&(x, _)| map[x as usize].unwrap()).collect();
    sphere.sort_unstable();
    let mut on_sphere = vec![false; total];
    for &s in &sphere {
        on_sphere[s as usize] = true;
    }

    let labels = {
        let src = match &opts.labels {
            LabelPolicy::Prefixed { left, .. } => relabeled(n, left),
            LabelPolicy::Keep => n.labels().to_vec(),
        };
        let mut labels = vec![None; total];
        for (x, l) in src.into_iter().enumerate() {
            if merged_into[x].is_none() {
                if let Some(t) = map[x] {
                    labels[t as usize] = l;
                }
            }
        }
        labels
    };
    let d1 = n.dim() + 1;
    let mut facets = Vec::with_capacity(n.facet_count() * d1);
    let mut buf = Vec::with_capacity(d1);
    for f in n.facets().filter(|f| !f.contains(&v) && !f.contains(&u)) {
        buf.clear();
        buf.extend(f.iter().map(|&x| map[x as usize].unwrap()));
        buf.sort_unstable();
        facets.extend_from_slice(&buf);
    }
    reject_facets_on_sphere(&facets, d1, &on_sphere)?;
    let complex = SimplicialComplex::from_raw_parts(n.dim(), facets, labels);
    if opts.check_induced {
        check_sphere_induced(&complex, &sphere, n, v, &map)?;
    }
    Ok(Handled { complex, map, sphere, iso_sign: sign, distance })
}

/// `d(v,u)` if it is below `cap`, else `cap`.
pub fn site_distance(k: &SimplicialComplex, v: VertexId, u: VertexId, cap: u32) -> u32 {
    let g = k.skeleton_graph();
    let mut bfs = LocalBfs::new(g.vertex_count());
    bfs.run(&g, &[v], cap);
    match bfs.dist(u) {
        UNREACHED => cap,
        d => d.min(cap),
    }
}

/// Predicted `χ(N #_φ M)`.
pub fn chi_after_sum(chi_n: i64, chi_m: i64, chi_link: i64) -> i64 {
    chi_n + chi_m - 2 + chi_link
}

/// Predicted `χ(h_φ(N))`.
pub fn chi_after_handle(chi_n: i64, chi_link: i64) -> i64 {
    chi_n - 2 + chi_link
}

pub fn euler_identity_check(expected: i64, out: &SimplicialComplex) -> Result<(), SurgeryError> {
    let found = out.euler_characteristic();
    if found == expected {
        Ok(())
    } else {
        Err(SurgeryError::IdentityViolated { expected, found })
    }
}

/// An Euler characteristic `a·n + b` kept symbolic in `n = χ(M)`, for
/// bookkeeping of gluings of copies of an unspecified base manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicChi {
    pub n_coeff: i64,
    pub constant: i64,
}

impl SymbolicChi {
    /// One copy of the base.
    pub const BASE: SymbolicChi = SymbolicChi { n_coeff: 1, constant: 0 };

    pub fn sum(self, other: SymbolicChi, chi_link: i64) -> SymbolicChi {
        SymbolicChi { n_coeff: self.n_coeff + other.n_coeff, constant: self.constant + other.constant - 2 + chi_link }
    }

    pub fn handle(self, chi_link: i64) -> SymbolicChi {
        SymbolicChi { n_coeff: self.n_coeff, constant: self.constant - 2 + chi_link }
    }

    pub fn eval(self, n: i64) -> i64 {
        self.n_coeff * n + self.constant
    }
}

impl std::fmt::Display for SymbolicChi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}n{:+}", self.n_coeff, self.constant)
    }
}
