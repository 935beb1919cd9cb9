//! Isomorphism search between small complexes by refined backtracking.
//!
//! Vertices of the first complex are visited in BFS order so every new vertex
//! (after the first of each component) has an already-mapped neighbor, which
//! restricts its candidates to a neighbor list in the second complex.

use std::collections::HashSet;

use super::{ComplexError, Face, Graph, SimplicialComplex, VertexId};

/// Image of local vertex `i` of the source complex.
pub type VertexMap = Vec<VertexId>;

pub const DEFAULT_SIZE_LIMIT: usize = 1024;

#[derive(Clone, Copy, Debug)]
pub struct IsoSearch {
    /// Stop after this many isomorphisms.
    pub max_results: usize,
    /// Refuse inputs with more vertices than this.
    pub size_limit: usize,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch { max_results: usize::MAX, size_limit: DEFAULT_SIZE_LIMIT }
    }
}

/// Up to `limit` isomorphisms `a → b`, in lexicographic order of the image
/// sequence along the search order.
pub fn iso_search(a: &SimplicialComplex, b: &SimplicialComplex, limit: usize) -> Result<Vec<VertexMap>, ComplexError> {
    IsoSearch { max_results: limit, ..IsoSearch::default() }.run(a, b)
}

struct Side {
    graph: Graph,
    /// (degree, facet count) per vertex.
    invariant: Vec<(usize, usize)>,
}

impl Side {
    fn new(k: &SimplicialComplex) -> Self {
        let graph = k.skeleton_graph();
        let mut stars = vec![0usize; k.vertex_count()];
        for f in k.facets() {
            for &v in f {
                stars[v as usize] += 1;
            }
        }
        let invariant = (0..k.vertex_count()).map(|v| (graph.degree(v as VertexId), stars[v])).collect();
        Side { graph, invariant }
    }
}

impl IsoSearch {
    pub fn run(&self, a: &SimplicialComplex, b: &SimplicialComplex) -> Result<Vec<VertexMap>, ComplexError> {
        for k in [a, b] {
            if k.vertex_count() > self.size_limit {
                return Err(ComplexError::SizeLimit { size: k.vertex_count(), limit: self.size_limit });
            }
        }
        let mut out = Vec::new();
        if a.vertex_count() != b.vertex_count()
            || a.dim() != b.dim()
            || a.facet_count() != b.facet_count()
            || self.max_results == 0
        {
            return Ok(out);
        }
        let sa = Side::new(a);
        let sb = Side::new(b);
        let mut ia = sa.invariant.clone();
        let mut ib = sb.invariant.clone();
        ia.sort_unstable();
        ib.sort_unstable();
        if ia != ib || sa.graph.edge_count() != sb.graph.edge_count() {
            return Ok(out);
        }
        let order = search_order(&sa.graph);
        let facets_b: HashSet<&[VertexId]> = b.facets().collect();
        let mut state = State {
            a,
            sa: &sa,
            sb: &sb,
            order: &order,
            facets_b: &facets_b,
            map: vec![u32::MAX; a.vertex_count()],
            used: vec![false; b.vertex_count()],
            limit: self.max_results,
            out: &mut out,
        };
        state.extend(0);
        Ok(out)
    }
}

/// BFS order from the lowest vertex of each component.
fn search_order(g: &Graph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n as VertexId {
        if seen[s as usize] {
            continue;
        }
        seen[s as usize] = true;
        let start = order.len();
        order.push(s);
        let mut head = start;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in g.neighbors(x) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    order.push(y);
                }
            }
        }
    }
    order
}

struct State<'s> {
    a: &'s SimplicialComplex,
    sa: &'s Side,
    sb: &'s Side,
    order: &'s [VertexId],
    facets_b: &'s HashSet<&'s [VertexId]>,
    map: Vec<VertexId>,
    used: Vec<bool>,
    limit: usize,
    out: &'s mut Vec<VertexMap>,
}

impl State<'_> {
    fn extend(&mut self, depth: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            if self.facets_match() {
                self.out.push(self.map.clone());
            }
            return;
        }
        let x = self.order[depth];
        let anchor = self.sa.graph.neighbors(x).iter().copied().find(|&y| self.map[y as usize] != u32::MAX);
        let candidates: Vec<VertexId> = match anchor {
            Some(y) => self.sb.graph.neighbors(self.map[y as usize]).to_vec(),
            None => (0..self.sb.graph.vertex_count() as VertexId).collect(),
        };
        for c in candidates {
            if self.used[c as usize] || self.sb.invariant[c as usize] != self.sa.invariant[x as usize] {
                continue;
            }
            if !self.consistent(x, c) {
                continue;
            }
            self.map[x as usize] = c;
            self.used[c as usize] = true;
            self.extend(depth + 1);
            self.map[x as usize] = u32::MAX;
            self.used[c as usize] = false;
            if self.out.len() >= self.limit {
                return;
            }
        }
    }

    /// Adjacency to every mapped vertex must be preserved both ways.
    fn consistent(&self, x: VertexId, c: VertexId) -> bool {
        let mut mapped_neighbors = 0;
        for &y in self.sa.graph.neighbors(x) {
            let my = self.map[y as usize];
            if my != u32::MAX {
                if !self.sb.graph.has_edge(c, my) {
                    return false;
                }
                mapped_neighbors += 1;
            }
        }
        let image_neighbors = self.sb.graph.neighbors(c).iter().filter(|&&z| self.used[z as usize]).count();
        mapped_neighbors == image_neighbors
    }

    fn facets_match(&self) -> bool {
        self.a.facets().all(|f| {
            let mut image: Face = f.iter().map(|&v| self.map[v as usize]).collect();
            image.sort_unstable();
            self.facets_b.contains(image.as_slice())
        })
    }
}
