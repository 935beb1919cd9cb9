//! Undirected simple graphs in CSR form with BFS-based distance machinery.

use std::collections::VecDeque;

use super::{ComplexError, VertexId};

/// Distance value for vertices not reached by a search.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `0..n`; loops are dropped and parallel edges merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        for (a, b) in edges {
            if a != b {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let adj = pairs.into_iter().map(|(_, b)| b).collect();
        Graph { offsets, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |a| self.neighbors(a).iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Applies a vertex renaming `i -> perm[i]`.
    pub fn relabel(&self, perm: &[VertexId]) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edges().map(|(a, b)| (perm[a as usize], perm[b as usize])))
    }

    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s as VertexId);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if comp[y as usize] == u32::MAX {
                        comp[y as usize] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.components().0 == 1
    }
}

/// BFS distances from `src`; vertices beyond `cap` (or unreachable) get [`UNREACHED`].
pub fn bfs_distances(g: &Graph, src: VertexId, cap: Option<u32>) -> Vec<u32> {
    multi_source_bfs(g, &[src], cap, None)
}

/// BFS from several sources at once, optionally skipping `blocked` vertices.
pub fn multi_source_bfs(g: &Graph, sources: &[VertexId], cap: Option<u32>, blocked: Option<&[bool]>) -> Vec<u32> {
    let cap = cap.unwrap_or(u32::MAX - 1);
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s as usize] == UNREACHED {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        if dx >= cap {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y as usize] == UNREACHED && !blocked.is_some_and(|b| b[y as usize]) {
                dist[y as usize] = dx + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Eccentricity of `v` and the smallest-id vertex realizing it. Requires a connected graph.
pub fn eccentricity(g: &Graph, v: VertexId) -> (u32, VertexId) {
    let dist = bfs_distances(g, v, None);
    farthest(&dist)
}

fn farthest(dist: &[u32]) -> (u32, VertexId) {
    let mut best = (0, 0);
    for (i, &d) in dist.iter().enumerate() {
        if d != UNREACHED && d > best.0 {
            best = (d, i as VertexId);
        }
    }
    best
}

/// Exact diameter with a witness pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Diameter {
    pub value: u32,
    pub witness: (VertexId, VertexId),
}

/// Exact diameter by eccentricity-bound pruning.
///
/// Every BFS from a vertex `x` with eccentricity `e` bounds the remaining
/// vertices: `max(d(x,w), e - d(x,w)) <= ecc(w) <= e + d(x,w)`. Vertices whose
/// upper bound cannot beat the best diameter found so far are discarded; the
/// loop alternates between the most promising (largest upper bound) and the
/// most central (smallest lower bound) survivor.
pub fn diameter(g: &Graph) -> Result<Diameter, ComplexError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ComplexError::EmptyInput);
    }
    if !g.is_connected() {
        return Err(ComplexError::Disconnected);
    }
    if n == 1 {
        return Ok(Diameter { value: 0, witness: (0, 0) });
    }
    let mut lo = vec![0u32; n];
    let mut hi = vec![u32::MAX; n];
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut best = Diameter { value: 0, witness: (0, 0) };
    let mut upper = u32::MAX;

    // Double sweep from a maximum-degree vertex seeds a good lower bound.
    let start = (0..n as VertexId).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
    let (_, far) = eccentricity(g, start);
    let mut next = Some(far);
    let mut pick_high = false;

    while alive_count > 0 && best.value < upper {
        let x = match next.take() {
            Some(x) => x,
            None => {
                pick_high = !pick_high;
                let candidates = (0..n).filter(|&v| alive[v]);
                let chosen = if pick_high {
                    candidates.max_by_key(|&v| (hi[v], g.degree(v as VertexId), std::cmp::Reverse(v)))
                } else {
                    candidates.min_by_key(|&v| (lo[v], std::cmp::Reverse(g.degree(v as VertexId)), v))
                };
                chosen.unwrap() as VertexId
            }
        };
        let dist = bfs_distances(g, x, None);
        let (ecc, y) = farthest(&dist);
        if ecc > best.value {
            best = Diameter { value: ecc, witness: (x.min(y), x.max(y)) };
        }
        upper = upper.min(2 * ecc);
        if alive[x as usize] {
            alive[x as usize] = false;
            alive_count -= 1;
        }
        for w in 0..n {
            if !alive[w] {
                continue;
            }
            let d = dist[w];
            lo[w] = lo[w].max(d.max(ecc - d));
            hi[w] = hi[w].min(ecc + d);
            if hi[w] <= best.value {
                alive[w] = false;
                alive_count -= 1;
            }
        }
    }
    Ok(best)
}

/// Diameter by BFS from every vertex; quadratic, intended as a test oracle.
pub fn diameter_brute_force(g: &Graph) -> Result<Diameter, ComplexError> {
    if g.vertex_count() == 0 {
        return Err(ComplexError::EmptyInput);
    }
    let mut best = Diameter { value: 0, witness: (0, 0) };
    for x in 0..g.vertex_count() as VertexId {
        let dist = bfs_distances(g, x, None);
        if dist.contains(&UNREACHED) {
            return Err(ComplexError::Disconnected);
        }
        let (e, y) = farthest(&dist);
        if e > best.value {
            best = Diameter { value: e, witness: (x.min(y), x.max(y)) };
        }
    }
    Ok(best)
}

/// A shortest path from `s` to `t` avoiding `blocked` vertices; neighbors are
/// scanned in id order so the result is deterministic.
pub fn shortest_path(g: &Graph, s: VertexId, t: VertexId, blocked: Option<&[bool]>) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut parent = vec![u32::MAX; n];
    parent[s as usize] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            break;
        }
        for &y in g.neighbors(x) {
            if parent[y as usize] == u32::MAX && !blocked.is_some_and(|b| b[y as usize]) {
                parent[y as usize] = x;
                queue.push_back(y);
            }
        }
    }
    if parent[t as usize] == u32::MAX {
        return None;
    }
    let mut path = vec![t];
    let mut cur = t;
    while cur != s {
        cur = parent[cur as usize];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Reusable BFS workspace for many small searches on one large graph.
///
/// Only touched entries are reset between searches, so a capped search costs
/// time proportional to the explored region, not to the graph size.
pub struct LocalBfs {
    dist: Vec<u32>,
    touched: Vec<VertexId>,
}

impl LocalBfs {
    pub fn new(n: usize) -> Self {
        LocalBfs { dist: vec![UNREACHED; n], touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = UNREACHED;
        }
        self.touched.clear();
    }

    /// Runs a capped BFS and returns the visited vertices in BFS order.
    pub fn run(&mut self, g: &Graph, sources: &[VertexId], cap: u32) -> &[VertexId] {
        self.reset();
        for &s in sources {
            if self.dist[s as usize] == UNREACHED {
                self.dist[s as usize] = 0;
                self.touched.push(s);
            }
        }
        let mut head = 0;
        while head < self.touched.len() {
            let x = self.touched[head];
            head += 1;
            let dx = self.dist[x as usize];
            if dx >= cap {
                continue;
            }
            for &y in g.neighbors(x) {
                if self.dist[y as usize] == UNREACHED {
                    self.dist[y as usize] = dx + 1;
                    self.touched.push(y);
                }
            }
        }
        &self.touched
    }

    /// Distance from the last search's sources, or [`UNREACHED`].
    pub fn dist(&self, v: VertexId) -> u32 {
        self.dist[v as usize]
    }

    pub fn visited(&self) -> &[VertexId] {
        &self.touched
    }
}
