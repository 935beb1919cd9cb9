//! Seed complexes: cycles, simplex and cross-polytope boundaries, suspensions,
//! the icosahedron and the boundary of the 600-cell.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Graph, SimplicialComplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{name} = {value} is below the minimum {min}")]
    ParameterOutOfRange { name: &'static str, value: usize, min: usize },
}

/// A vertex bijection of a generated complex that maps facets to facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedAutomorphism {
    pub name: String,
    pub map: Vec<VertexId>,
}

fn numbered(n: usize) -> Vec<Option<String>> {
    (0..n).map(|i| Some(i.to_string())).collect()
}

fn check(name: &'static str, value: usize, min: usize) -> Result<(), GeneratorError> {
    if value < min {
        Err(GeneratorError::ParameterOutOfRange { name, value, min })
    } else {
        Ok(())
    }
}

pub fn cycle(n: usize) -> Result<SimplicialComplex, GeneratorError> {
    check("n", n, 3)?;
    let n32 = n as VertexId;
    let facets: Vec<[VertexId; 2]> = (0..n32).map(|i| [i, (i + 1) % n32]).collect();
    Ok(SimplicialComplex::from_labeled_facets(facets, numbered(n)).expect("cycle is valid"))
}

/// Boundary of the `d`-simplex: a `(d-1)`-sphere on `d+1` vertices.
pub fn simplex_boundary(d: usize) -> Result<SimplicialComplex, GeneratorError> {
    check("d", d, 1)?;
    let facets: Vec<Vec<VertexId>> =
        (0..=d as VertexId).map(|skip| (0..=d as VertexId).filter(|&x| x != skip).collect()).collect();
    Ok(SimplicialComplex::from_labeled_facets(facets, numbered(d + 1)).expect("simplex boundary is valid"))
}

/// Boundary of the `d`-dimensional cross-polytope; vertex `2i` is `+e_i`, `2i+1` is `-e_i`.
pub fn cross_polytope_boundary(d: usize) -> Result<SimplicialComplex, GeneratorError> {
    check("d", d, 1)?;
    let facets: Vec<Vec<VertexId>> =
        (0..1u32 << d).map(|mask| (0..d as u32).map(|i| 2 * i + ((mask >> i) & 1)).collect()).collect();
    let labels = (0..d).flat_map(|i| [Some(format!("+{i}")), Some(format!("-{i}"))]).collect();
    Ok(SimplicialComplex::from_labeled_facets(facets, labels).expect("cross-polytope is valid"))
}

/// Join with two new apexes labeled `north` and `south`.
pub fn suspension(k: &SimplicialComplex) -> SimplicialComplex {
    let n = k.vertex_count() as VertexId;
    let mut facets = Vec::with_capacity(2 * k.facet_count());
    for apex in [n, n + 1] {
        for f in k.facets() {
            let mut g = f.to_vec();
            g.push(apex);
            facets.push(g);
        }
    }
    let mut labels = k.labels().to_vec();
    labels.push(Some("north".into()));
    labels.push(Some("south".into()));
    SimplicialComplex::from_labeled_facets(facets, labels).expect("suspension is valid")
}

/// 1-dimensional complete bipartite complex `K_{a,b}`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<SimplicialComplex, GeneratorError> {
    check("a", a, 1)?;
    check("b", b, 1)?;
    let facets: Vec<[VertexId; 2]> =
        (0..a as VertexId).flat_map(|i| (0..b as VertexId).map(move |j| [i, a as VertexId + j])).collect();
    Ok(SimplicialComplex::from_labeled_facets(facets, numbered(a + b)).expect("bipartite graph is valid"))
}

/// The icosahedron: vertex 0 on top, an upper pentagon 1..=5, a lower
/// pentagon 6..=10 and vertex 11 at the bottom.
pub fn icosahedron() -> SimplicialComplex {
    let up = |i: u32| 1 + i % 5;
    let lo = |i: u32| 6 + i % 5;
    let mut facets = Vec::with_capacity(20);
    for i in 0..5 {
        facets.push([0, up(i), up(i + 1)]);
        facets.push([11, lo(i), lo(i + 1)]);
        facets.push([up(i), up(i + 1), lo(i)]);
        facets.push([up(i + 1), lo(i), lo(i + 1)]);
    }
    let labels = std::iter::once("top".to_string())
        .chain((0..5).map(|i| format!("upper{i}")))
        .chain((0..5).map(|i| format!("lower{i}")))
        .chain(std::iter::once("bottom".to_string()))
        .map(Some)
        .collect();
    SimplicialComplex::from_labeled_facets(facets, labels).expect("icosahedron is valid")
}

/// Exact element `a + bφ` of ℤ[φ], φ² = φ + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZPhi {
    pub a: i64,
    pub b: i64,
}

impl ZPhi {
    pub const ZERO: ZPhi = ZPhi { a: 0, b: 0 };
    pub const PHI: ZPhi = ZPhi { a: 0, b: 1 };

    pub const fn int(a: i64) -> ZPhi {
        ZPhi { a, b: 0 }
    }

    /// Floating approximation, for display only.
    pub fn approx(self) -> f64 {
        self.a as f64 + self.b as f64 * (1.0 + 5f64.sqrt()) / 2.0
    }

    fn signum(self) -> Ordering {
        // a + bφ = (p + q√5)/2 with p = 2a + b, q = b.
        let p = 2 * self.a + self.b;
        let q = self.b;
        match (p.cmp(&0), q.cmp(&0)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sp, sq) if sp == sq => sp,
            (sp, _) => {
                let (p2, q2) = (p as i128 * p as i128, 5 * q as i128 * q as i128);
                if p2 > q2 {
                    sp
                } else {
                    sp.reverse()
                }
            }
        }
    }
}

impl Add for ZPhi {
    type Output = ZPhi;
    fn add(self, o: ZPhi) -> ZPhi {
        ZPhi { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for ZPhi {
    type Output = ZPhi;
    fn sub(self, o: ZPhi) -> ZPhi {
        ZPhi { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for ZPhi {
    type Output = ZPhi;
    fn neg(self) -> ZPhi {
        ZPhi { a: -self.a, b: -self.b }
    }
}

impl Mul for ZPhi {
    type Output = ZPhi;
    fn mul(self, o: ZPhi) -> ZPhi {
        ZPhi { a: self.a * o.a + self.b * o.b, b: self.a * o.b + self.b * o.a + self.b * o.b }
    }
}

impl PartialOrd for ZPhi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZPhi {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

pub type Point4 = [ZPhi; 4];

fn dist2(p: &Point4, q: &Point4) -> ZPhi {
    (0..4).fold(ZPhi::ZERO, |acc, i| {
        let d = p[i] - q[i];
        acc + d * d
    })
}

/// The 120 vertices of the 600-cell scaled by 2 (so all coordinates lie in
/// ℤ[φ]), sorted lexicographically.
pub fn cell600_coordinates() -> Vec<Point4> {
    let z = ZPhi::int;
    let mut pts: Vec<Point4> = Vec::with_capacity(120);
    for axis in 0..4 {
        for s in [2, -2] {
            let mut p = [ZPhi::ZERO; 4];
            p[axis] = z(s);
            pts.push(p);
        }
    }
    for mask in 0..16 {
        pts.push(std::array::from_fn(|i| z(if mask >> i & 1 == 1 { -1 } else { 1 })));
    }
    let base = [ZPhi::PHI, z(1), ZPhi::PHI - z(1), ZPhi::ZERO];
    for perm in even_permutations() {
        for mask in 0..8 {
            let signed: [ZPhi; 4] =
                std::array::from_fn(|i| if i < 3 && mask >> i & 1 == 1 { -base[i] } else { base[i] });
            let mut p = [ZPhi::ZERO; 4];
            for (i, &slot) in perm.iter().enumerate() {
                p[slot] = signed[i];
            }
            pts.push(p);
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

fn even_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions =
                            (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        if inversions % 2 == 0 {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Boundary of the 600-cell with the mirror `(x,y,z,w) ↦ (x,y,z,-w)`.
///
/// Edges join points at the minimal nonzero squared distance; facets are the
/// 4-cliques of that graph.
pub fn cell600_boundary() -> (SimplicialComplex, NamedAutomorphism) {
    let pts = cell600_coordinates();
    let n = pts.len();
    let mut min = None;
    for i in 0..n {
        for j in i + 1..n {
            let d = dist2(&pts[i], &pts[j]);
            if min.is_none_or(|m| d < m) {
                min = Some(d);
            }
        }
    }
    let min = min.expect("nonempty point set");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if dist2(&pts[i], &pts[j]) == min {
                edges.push((i as VertexId, j as VertexId));
            }
        }
    }
    let g = Graph::from_edges(n, edges);
    let facets = four_cliques(&g);
    let complex = SimplicialComplex::from_labeled_facets(facets, numbered(n)).expect("600-cell boundary is valid");
    let index: HashMap<Point4, VertexId> = pts.iter().enumerate().map(|(i, p)| (*p, i as VertexId)).collect();
    let map = pts
        .iter()
        .map(|p| {
            let mut q = *p;
            q[3] = -q[3];
            index[&q]
        })
        .collect();
    (complex, NamedAutomorphism { name: "mirror".into(), map })
}

fn four_cliques(g: &Graph) -> Vec<[VertexId; 4]> {
    let mut out = Vec::new();
    for a in 0..g.vertex_count() as VertexId {
        let na: Vec<VertexId> = g.neighbors(a).iter().copied().filter(|&x| x > a).collect();
        for (i, &b) in na.iter().enumerate() {
            for (j, &c) in na.iter().enumerate().skip(i + 1) {
                if !g.has_edge(b, c) {
                    continue;
                }
                for &d in &na[j + 1..] {
                    if g.has_edge(b, d) && g.has_edge(c, d) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}
