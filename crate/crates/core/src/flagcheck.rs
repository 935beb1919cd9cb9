//! Flagness, induced squares and k-largeness.
//!
//! All checks work on anything implementing [`Faces`], so raw non-pure face
//! lists can be tested as well as pure complexes. Witnesses are chosen
//! deterministically (lexicographically first in a fixed scan order) no matter
//! how the scans are scheduled.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{for_each_subset, pack, Face, Faces, Graph, VertexId};

/// Default length bound for induced-cycle searches.
pub const DEFAULT_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A clique of the 1-skeleton that is not a face, all of whose proper subsets are.
    MissingClique(Vec<VertexId>),
    /// A chordless cycle, in cyclic order.
    InducedCycle(Vec<VertexId>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxK {
    Exact(usize),
    /// No induced cycle shorter than this was found (search was capped).
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessReport {
    pub is_flag: bool,
    /// `None` when the complex is not flag.
    pub max_k: Option<MaxK>,
    pub witness: Option<Witness>,
}

impl LargenessReport {
    /// Whether the complex is `k`-large, as far as the capped search can tell.
    pub fn is_k_large(&self, k: usize) -> Option<bool> {
        match self.max_k? {
            MaxK::Exact(m) => Some(k <= m),
            MaxK::AtLeast(m) if k <= m => Some(true),
            MaxK::AtLeast(_) => None,
        }
    }
}

/// Combined flag-no-square verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnsReport {
    pub vertices: usize,
    pub is_flag: bool,
    pub has_induced_square: bool,
    pub is_fns: bool,
    pub witness: Option<Witness>,
}

/// Membership index for all faces of a fixed size.
enum FaceSet {
    Packed(HashSet<u128>),
    Wide(HashSet<Face>),
}

impl FaceSet {
    fn of_size<K: Faces + ?Sized>(k: &K, size: usize) -> FaceSet {
        if k.vertex_count() < (1 << 21) && size <= 6 {
            let mut set = HashSet::new();
            for f in k.maximal_faces() {
                for_each_subset(f, size, |s| {
                    set.insert(pack(s));
                });
            }
            FaceSet::Packed(set)
        } else {
            let mut set = HashSet::new();
            for f in k.maximal_faces() {
                for_each_subset(f, size, |s| {
                    set.insert(s.iter().copied().collect::<Face>());
                });
            }
            FaceSet::Wide(set)
        }
    }

    fn contains(&self, f: &[VertexId]) -> bool {
        match self {
            FaceSet::Packed(s) => s.contains(&pack(f)),
            FaceSet::Wide(s) => s.contains(f),
        }
    }

    fn sorted(&self) -> Vec<Face> {
        let mut out: Vec<Face> = match self {
            FaceSet::Packed(s) => s.iter().map(|&p| unpack(p)).collect(),
            FaceSet::Wide(s) => s.iter().cloned().collect(),
        };
        out.sort_unstable();
        out
    }
}

fn unpack(mut p: u128) -> Face {
    let mut f = Face::new();
    while p != 0 {
        f.push((p & ((1 << 21) - 1)) as VertexId - 1);
        p >>= 21;
    }
    f.reverse();
    f
}

pub fn skeleton<K: Faces + ?Sized>(k: &K) -> Graph {
    let mut edges = Vec::new();
    for f in k.maximal_faces() {
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                edges.push((f[i], f[j]));
            }
        }
    }
    Graph::from_edges(k.vertex_count(), edges)
}

/// Checks that every clique of the 1-skeleton is a face.
///
/// Cliques are grown level by level: once every `s`-clique is known to be a
/// face, every `(s+1)`-clique is an `s`-face extended by a larger common
/// neighbor, so only those extensions need testing.
pub fn is_flag<K: Faces + ?Sized>(k: &K) -> (bool, Option<Witness>) {
    let g = skeleton(k);
    is_flag_with_graph(k, &g)
}

fn is_flag_with_graph<K: Faces + ?Sized>(k: &K, g: &Graph) -> (bool, Option<Witness>) {
    let top = k.max_face_size();
    let mut level: Vec<Face> = (0..g.vertex_count() as VertexId)
        .flat_map(|a| g.neighbors(a).iter().filter(move |&&b| b > a).map(move |&b| Face::from_slice(&[a, b])))
        .collect();
    if top < 2 && !level.is_empty() {
        return (false, Some(Witness::MissingClique(level[0].to_vec())));
    }
    for size in 3..=top + 1 {
        let faces = if size <= top { Some(FaceSet::of_size(k, size)) } else { None };
        let missing = level
            .par_iter()
            .filter_map(|f| {
                let last = *f.last().unwrap();
                let first = f[0];
                g.neighbors(first)
                    .iter()
                    .copied()
                    .filter(|&x| x > last && f[1..].iter().all(|&y| g.has_edge(x, y)))
                    .map(|x| {
                        let mut c = f.clone();
                        c.push(x);
                        c
                    })
                    .find(|c| !faces.as_ref().is_some_and(|s| s.contains(c)))
            })
            .min();
        if let Some(c) = missing {
            return (false, Some(Witness::MissingClique(c.to_vec())));
        }
        match faces {
            Some(s) => level = s.sorted(),
            None => break,
        }
    }
    (true, None)
}

/// Searches for a chordless 4-cycle.
///
/// For each vertex `a` the scan looks at vertices `c` at distance two that
/// have two non-adjacent common neighbors. The witness is the cyclic sequence
/// `(a, b, c, d)` that is lexicographically first with `a` the smallest
/// vertex of the square and `b < d`.
pub fn has_induced_square<K: Faces + ?Sized>(k: &K) -> (bool, Option<Witness>) {
    let g = skeleton(k);
    induced_square_in_graph(&g)
}

pub fn induced_square_in_graph(g: &Graph) -> (bool, Option<Witness>) {
    let found = (0..g.vertex_count() as VertexId).into_par_iter().find_map_first(|a| square_from(g, a));
    match found {
        Some(sq) => {
            debug_assert!(is_chordless_cycle(g, &sq));
            (true, Some(Witness::InducedCycle(sq)))
        }
        None => (false, None),
    }
}

fn square_from(g: &Graph, a: VertexId) -> Option<Vec<VertexId>> {
    let na = g.neighbors(a);
    for &b in na.iter().filter(|&&b| b > a) {
        for &c in g.neighbors(b) {
            if c <= a || g.has_edge(a, c) {
                continue;
            }
            let d = intersect(na, g.neighbors(c)).find(|&d| d > b && !g.has_edge(b, d));
            if let Some(d) = d {
                return Some(vec![a, b, c, d]);
            }
        }
    }
    None
}

fn intersect<'a>(x: &'a [VertexId], y: &'a [VertexId]) -> impl Iterator<Item = VertexId> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    return Some(x[i - 1]);
                }
            }
        }
        None
    })
}

pub fn is_chordless_cycle(g: &Graph, cycle: &[VertexId]) -> bool {
    let m = cycle.len();
    if m < 4 {
        return false;
    }
    let mut seen: Vec<VertexId> = cycle.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    (0..m).all(|i| {
        (i + 1..m).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == m - 1);
            g.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

pub fn is_fns<K: Faces + ?Sized>(k: &K) -> bool {
    verify_fns(k).is_fns
}

pub fn verify_fns<K: Faces + ?Sized>(k: &K) -> FnsReport {
    let g = skeleton(k);
    let (is_flag, flag_witness) = is_flag_with_graph(k, &g);
    let (has_square, square_witness) = induced_square_in_graph(&g);
    FnsReport {
        vertices: k.vertex_count(),
        is_flag,
        has_induced_square: has_square,
        is_fns: is_flag && !has_square,
        witness: flag_witness.or(square_witness),
    }
}

/// Largest `k` (up to `cap`) for which the complex is `k`-large.
///
/// The shortest induced cycle of length at least 4 is found by growing
/// induced paths from their least vertex; lengths are tried in increasing
/// order so the first hit is the shortest.
pub fn k_largeness<K: Faces + ?Sized>(k: &K, cap: usize) -> LargenessReport {
    let cap = cap.max(4);
    let g = skeleton(k);
    let (flag, witness) = is_flag_with_graph(k, &g);
    if !flag {
        return LargenessReport { is_flag: false, max_k: None, witness };
    }
    let starts: Vec<VertexId> = (0..g.vertex_count() as VertexId).collect();
    match shortest_induced_cycle(&g, &starts, cap - 1, true) {
        Some(c) => LargenessReport {
            is_flag: true,
            max_k: Some(MaxK::Exact(c.len())),
            witness: Some(Witness::InducedCycle(c)),
        },
        None => LargenessReport { is_flag: true, max_k: Some(MaxK::AtLeast(cap)), witness: None },
    }
}

/// Shortest chordless cycle of length `4..=max_len` passing through one of
/// `starts`. With `least_start`, only cycles whose least vertex is the start
/// are considered (a full scan); otherwise any cycle through a start counts.
pub fn shortest_induced_cycle(
    g: &Graph,
    starts: &[VertexId],
    max_len: usize,
    least_start: bool,
) -> Option<Vec<VertexId>> {
    for len in 4..=max_len {
        let hit = starts.par_iter().find_map_first(|&s| {
            let mut path = vec![s];
            let mut on_path = HashSet::from([s]);
            cycle_dfs(g, &mut path, &mut on_path, len, least_start)
        });
        if let Some(c) = hit {
            assert!(is_chordless_cycle(g, &c), "emitted cycle {c:?} has a chord");
            return Some(c);
        }
    }
    None
}

fn cycle_dfs(
    g: &Graph,
    path: &mut Vec<VertexId>,
    on_path: &mut HashSet<VertexId>,
    len: usize,
    least_start: bool,
) -> Option<Vec<VertexId>> {
    let s = path[0];
    let last = *path.last().unwrap();
    for &x in g.neighbors(last) {
        if on_path.contains(&x) || (least_start && x < s) {
            continue;
        }
        // x may touch only `last` among the path, plus the start when closing.
        let touches_start = path.len() > 1 && g.has_edge(x, s);
        let inner = if path.len() > 2 { &path[1..path.len() - 1] } else { &[][..] };
        let chord = inner.iter().any(|&p| g.has_edge(x, p));
        if chord {
            continue;
        }
        if path.len() + 1 == len {
            if touches_start && path[1] < x {
                let mut c = path.clone();
                c.push(x);
                return Some(c);
            }
            continue;
        }
        if touches_start {
            continue;
        }
        path.push(x);
        on_path.insert(x);
        let found = cycle_dfs(g, path, on_path, len, least_start);
        path.pop();
        on_path.remove(&x);
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Exhaustive reference implementations for small inputs.
pub mod oracle {
    use super::*;

    /// Tries all 4-subsets and all three cyclic orders.
    pub fn has_induced_square<K: Faces + ?Sized>(k: &K) -> bool {
        let g = skeleton(k);
        let n = g.vertex_count() as VertexId;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        for cyc in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                            if is_chordless_cycle(&g, &cyc) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Enumerates every clique of the 1-skeleton and tests face membership.
    pub fn is_flag<K: Faces + ?Sized>(k: &K) -> bool {
        let g = skeleton(k);
        let faces: Vec<&[VertexId]> = k.maximal_faces().collect();
        let is_face = |c: &[VertexId]| faces.iter().any(|f| crate::complex::is_subset(c, f));
        let mut ok = true;
        let mut clique = Vec::new();
        // Ids that lie in no face are not vertices of the complex.
        for v in (0..g.vertex_count() as VertexId).filter(|&v| is_face(&[v])) {
            clique.push(v);
            extend(&g, &mut clique, &is_face, &mut ok);
            clique.pop();
        }
        ok
    }

    fn extend(g: &Graph, clique: &mut Vec<VertexId>, is_face: &dyn Fn(&[VertexId]) -> bool, ok: &mut bool) {
        if !is_face(clique) {
            *ok = false;
        }
        if !*ok {
            return;
        }
        let last = *clique.last().unwrap();
        for x in last + 1..g.vertex_count() as VertexId {
            if clique.iter().all(|&y| g.has_edge(x, y)) {
                clique.push(x);
                extend(g, clique, is_face, ok);
                clique.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{FaceList, SimplicialComplex};

    fn cycle(n: u32) -> SimplicialComplex {
        SimplicialComplex::from_facets((0..n).map(|i| [i, (i + 1) % n])).unwrap()
    }

    #[test]
    fn square_is_found() {
        let (found, w) = has_induced_square(&cycle(4));
        assert!(found);
        assert_eq!(w, Some(Witness::InducedCycle(vec![0, 1, 2, 3])));
        assert!(oracle::has_induced_square(&cycle(4)));
    }

    #[test]
    fn empty_tetrahedron_is_not_flag() {
        let k = SimplicialComplex::from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(is_flag(&k), (false, Some(Witness::MissingClique(vec![0, 1, 2, 3]))));
        assert!(!oracle::is_flag(&k));
    }

    #[test]
    fn hollow_triangle_in_a_face_list() {
        let k = FaceList::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(is_flag(&k).1, Some(Witness::MissingClique(vec![0, 1, 2])));
    }

    #[test]
    fn cycle_largeness() {
        let r = k_largeness(&cycle(6), DEFAULT_CAP);
        assert_eq!(r.max_k, Some(MaxK::Exact(6)));
        assert_eq!(r.is_k_large(6), Some(true));
        assert_eq!(r.is_k_large(7), Some(false));
        let r = k_largeness(&cycle(9), DEFAULT_CAP);
        assert_eq!(r.max_k, Some(MaxK::AtLeast(8)));
        assert_eq!(r.is_k_large(9), None);
    }

    #[test]
    fn chordless_check() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert!(!is_chordless_cycle(&g, &[0, 1, 2, 3]));
        assert!(!induced_square_in_graph(&g).0);
    }

    #[test]
    fn unpack_inverts_pack() {
        assert_eq!(unpack(pack(&[0, 5, 1 << 20])).to_vec(), vec![0, 5, 1 << 20]);
    }
}
