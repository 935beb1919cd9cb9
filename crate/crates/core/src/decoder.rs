//! Recovering the permutation of an encoded complex from its bare 1-skeleton.
//!
//! Junctions are recognized by the shape of distance spheres around a vertex:
//! inside a row a sphere splits into two far-apart clusters, at a junction
//! into three. A junction whose surroundings contain a small dead end is a
//! handle junction. No labels are consulted anywhere in this module.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{bfs_distances, diameter, shortest_path, ComplexError, Graph, LocalBfs, VertexId, UNREACHED};
use crate::encoder::{encode, BaseBlock, ConstructionParams, EncodeError, Encoded};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("structure not recognized: {0}")]
    StructureNotRecognized(String),
    #[error("no separating threshold for {what}: positives reach {positive}, negatives start at {negative}")]
    NoSeparation { what: &'static str, positive: u32, negative: u32 },
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderThresholds {
    pub ball_radius: u32,
    pub intra_cluster: u32,
    pub inter_cluster: u32,
    pub small_component: usize,
    pub match_dist: u32,
    pub nonmatch_dist: u32,
}

impl DecoderThresholds {
    /// The constants proved for base diameter `d ≥ 77`.
    pub fn proved(d: u32, base_vertices: usize) -> DecoderThresholds {
        DecoderThresholds {
            ball_radius: (3 * d).div_ceil(2),
            intra_cluster: d + 18,
            inter_cluster: (3 * d).div_ceil(2).saturating_sub(20),
            small_component: 2 * base_vertices,
            match_dist: 7 * d + 51,
            nonmatch_dist: (8 * d).saturating_sub(16),
        }
    }

    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.nonmatch_dist <= self.match_dist {
            return Err(DecodeError::InvalidThresholds(format!(
                "non-match distance {} must exceed match distance {}",
                self.nonmatch_dist, self.match_dist
            )));
        }
        if self.ball_radius == 0 {
            return Err(DecodeError::InvalidThresholds("ball radius must be positive".into()));
        }
        Ok(())
    }

    fn reach(&self) -> u32 {
        self.intra_cluster.max(self.inter_cluster).div_ceil(2) + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    JunctionVertex,
    HandleJunctionVertex,
    Other,
}

impl VertexClass {
    pub fn is_junction(self) -> bool {
        self != VertexClass::Other
    }
}

/// Vertices at distance exactly `r` from `x`.
pub fn sphere(g: &Graph, x: VertexId, r: u32) -> Vec<VertexId> {
    let d = bfs_distances(g, x, Some(r));
    let mut out: Vec<VertexId> = (0..g.vertex_count() as VertexId).filter(|&y| d[y as usize] == r).collect();
    out.sort_unstable();
    out
}

/// Vertices at distance at most `r` from `x`.
pub fn ball(g: &Graph, x: VertexId, r: u32) -> Vec<VertexId> {
    let d = bfs_distances(g, x, Some(r));
    (0..g.vertex_count() as VertexId).filter(|&y| d[y as usize] != UNREACHED).collect()
}

/// Single-linkage grouping of a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clusters {
    pub groups: Vec<Vec<VertexId>>,
    /// Largest linkage distance used inside a group.
    pub max_intra: u32,
    /// Smallest distance between two groups, if below the search reach.
    pub min_inter: Option<u32>,
    /// Spanning-forest edge weights, ascending.
    pub linkage: Vec<u32>,
}

/// Per-thread buffers for probing one large graph many times.
pub struct Scratch {
    ball: LocalBfs,
    dist: Vec<u32>,
    owner: Vec<u32>,
    touched: Vec<VertexId>,
    comp: Vec<u32>,
    comp_touched: Vec<VertexId>,
}

impl Scratch {
    pub fn new(n: usize) -> Scratch {
        Scratch {
            ball: LocalBfs::new(n),
            dist: vec![UNREACHED; n],
            owner: vec![u32::MAX; n],
            touched: Vec::new(),
            comp: vec![0; n],
            comp_touched: Vec::new(),
        }
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Groups `points` by single linkage at `thr` using graph distances. Pairs
/// farther apart than `2·reach` are treated as unlinked.
///
/// A multi-source BFS splits the explored region into cells; the minimum
/// spanning forest of the cell-adjacency graph has the same weights as that
/// of the full distance graph on `points`.
pub fn single_linkage(g: &Graph, points: &[VertexId], thr: u32, reach: u32, s: &mut Scratch) -> Clusters {
    for &v in &s.touched {
        s.dist[v as usize] = UNREACHED;
        s.owner[v as usize] = u32::MAX;
    }
    s.touched.clear();
    for (i, &p) in points.iter().enumerate() {
        if s.dist[p as usize] == UNREACHED {
            s.dist[p as usize] = 0;
            s.owner[p as usize] = i as u32;
            s.touched.push(p);
        }
    }
    let mut head = 0;
    while head < s.touched.len() {
        let x = s.touched[head];
        head += 1;
        let dx = s.dist[x as usize];
        if dx >= reach {
            continue;
        }
        for &y in g.neighbors(x) {
            if s.dist[y as usize] == UNREACHED {
                s.dist[y as usize] = dx + 1;
                s.owner[y as usize] = s.owner[x as usize];
                s.touched.push(y);
            }
        }
    }
    let mut edges: Vec<(u32, u32, u32)> = Vec::new();
    for &x in &s.touched {
        let ox = s.owner[x as usize];
        for &y in g.neighbors(x) {
            if y > x || s.dist[y as usize] == UNREACHED {
                continue;
            }
            let oy = s.owner[y as usize];
            if ox != oy {
                edges.push((s.dist[x as usize] + 1 + s.dist[y as usize], ox.min(oy), ox.max(oy)));
            }
        }
    }
    edges.sort_unstable();
    let mut parent: Vec<u32> = (0..points.len() as u32).collect();
    let mut linkage = Vec::new();
    let mut merged: Vec<u32> = (0..points.len() as u32).collect();
    for (w, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra as usize] = rb;
        linkage.push(w);
        if w <= thr {
            let (ma, mb) = (find(&mut merged, a), find(&mut merged, b));
            merged[ma as usize] = mb;
        }
    }
    let mut by_root: HashMap<u32, Vec<VertexId>> = HashMap::new();
    for (i, &p) in points.iter().enumerate() {
        by_root.entry(find(&mut merged, i as u32)).or_default().push(p);
    }
    let mut groups: Vec<Vec<VertexId>> = by_root.into_values().collect();
    for grp in &mut groups {
        grp.sort_unstable();
    }
    groups.sort();
    Clusters {
        groups,
        max_intra: linkage.iter().copied().filter(|&w| w <= thr).max().unwrap_or(0),
        min_inter: linkage.iter().copied().find(|&w| w > thr),
        linkage,
    }
}

/// The three clusters of `points`, if single linkage at the intra threshold
/// gives exactly three groups pairwise at least the inter threshold apart.
pub fn cluster_partition(g: &Graph, points: &[VertexId], thr: &DecoderThresholds) -> Option<Vec<Vec<VertexId>>> {
    let mut s = Scratch::new(g.vertex_count());
    partition_with(g, points, thr, &mut s).map(|c| c.groups)
}

fn partition_with(g: &Graph, points: &[VertexId], thr: &DecoderThresholds, s: &mut Scratch) -> Option<Clusters> {
    if points.is_empty() {
        return None;
    }
    let c = single_linkage(g, points, thr.intra_cluster, thr.reach(), s);
    let separated = c.min_inter.is_none_or(|m| m >= thr.inter_cluster);
    (c.groups.len() == 3 && separated).then_some(c)
}

/// Outcome of probing one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub vertex: VertexId,
    pub class: VertexClass,
    pub sphere_size: usize,
    pub groups: usize,
    pub max_intra: u32,
    pub min_inter: Option<u32>,
}

pub fn classify_vertex(g: &Graph, x: VertexId, thr: &DecoderThresholds) -> VertexClass {
    probe(g, x, thr, &mut Scratch::new(g.vertex_count())).class
}

/// Classifies `x` reusing `s`.
pub fn probe(g: &Graph, x: VertexId, thr: &DecoderThresholds, s: &mut Scratch) -> Probe {
    let r = thr.ball_radius;
    let shell: Vec<VertexId> = {
        s.ball.run(g, &[x], r);
        let mut v: Vec<VertexId> = s.ball.visited().iter().copied().filter(|&y| s.ball.dist(y) == r).collect();
        v.sort_unstable();
        v
    };
    let c = single_linkage(g, &shell, thr.intra_cluster, thr.reach(), s);
    let separated = c.min_inter.is_none_or(|m| m >= thr.inter_cluster);
    let junction = c.groups.len() == 3 && separated && !shell.is_empty();
    let class = if !junction {
        VertexClass::Other
    } else if has_one_small_component(g, &shell, thr.small_component, s) {
        VertexClass::HandleJunctionVertex
    } else {
        VertexClass::JunctionVertex
    };
    Probe {
        vertex: x,
        class,
        sphere_size: shell.len(),
        groups: c.groups.len(),
        max_intra: c.max_intra,
        min_inter: c.min_inter,
    }
}

/// With the ball of the last `s.ball` search removed: exactly one component
/// of at most `small` vertices, and at least one other component.
fn has_one_small_component(g: &Graph, shell: &[VertexId], small: usize, s: &mut Scratch) -> bool {
    for &v in &s.comp_touched {
        s.comp[v as usize] = 0;
    }
    s.comp_touched.clear();
    let in_ball = |ball: &LocalBfs, y: VertexId| ball.dist(y) != UNREACHED;
    let mut large: Vec<bool> = vec![false];
    let (mut smalls, mut others) = (0usize, 0usize);
    for &b in shell {
        for &start in g.neighbors(b) {
            if in_ball(&s.ball, start) || s.comp[start as usize] != 0 {
                continue;
            }
            let id = large.len() as u32;
            large.push(false);
            let first = s.comp_touched.len();
            s.comp[start as usize] = id;
            s.comp_touched.push(start);
            let mut head = first;
            let mut is_large = false;
            'explore: while head < s.comp_touched.len() {
                let x = s.comp_touched[head];
                head += 1;
                for &y in g.neighbors(x) {
                    if in_ball(&s.ball, y) {
                        continue;
                    }
                    match s.comp[y as usize] {
                        0 => {
                            s.comp[y as usize] = id;
                            s.comp_touched.push(y);
                            if s.comp_touched.len() - first > small {
                                is_large = true;
                                break 'explore;
                            }
                        }
                        c if c != id && large[c as usize] => {
                            is_large = true;
                            break 'explore;
                        }
                        _ => {}
                    }
                }
            }
            large[id as usize] = is_large;
            if is_large {
                others += 1;
            } else {
                smalls += 1;
            }
        }
    }
    smalls == 1 && others >= 1
}

/// A maximal stretch of junction vertices along the decoding path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JunctionRun {
    /// Positions on the path, inclusive.
    pub start: usize,
    pub end: usize,
    pub middle: VertexId,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapStats {
    pub max_intra: u32,
    pub min_inter: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeReport {
    /// `σ(i)` for `i = 1..k`, one-based.
    pub sigma: Vec<usize>,
    /// Path ends, the first on the longer row.
    pub endpoints: (VertexId, VertexId),
    pub diameter: u32,
    pub path_length: usize,
    pub junction_runs: Vec<JunctionRun>,
    /// Sphere statistics at the run middles.
    pub cluster_gap_stats: GapStats,
    /// Vertices excluded from the path as handle junctions.
    pub blocked: usize,
    /// `d(u_i, v_j)` for all `i`, `j`.
    pub distances: Vec<Vec<u32>>,
    pub classification: Vec<(VertexId, VertexClass)>,
}

struct Prober<'a> {
    g: &'a Graph,
    thr: &'a DecoderThresholds,
    cache: HashMap<VertexId, Probe>,
}

impl<'a> Prober<'a> {
    fn ensure(&mut self, xs: &[VertexId]) {
        let todo: Vec<VertexId> = xs.iter().copied().filter(|x| !self.cache.contains_key(x)).collect();
        let n = self.g.vertex_count();
        let (g, thr) = (self.g, self.thr);
        let done: Vec<Probe> = todo.par_iter().map_init(|| Scratch::new(n), |s, &x| probe(g, x, thr, s)).collect();
        for p in done {
            self.cache.insert(p.vertex, p);
        }
    }

    fn class(&self, x: VertexId) -> VertexClass {
        self.cache[&x].class
    }
}

/// Shortest `s`–`e` path avoiding handle junctions. Every handle junction met
/// on a candidate path is blocked together with the handle junctions
/// connected to it, and the path recomputed.
fn avoiding_path(p: &mut Prober, s: VertexId, e: VertexId) -> Result<(Vec<VertexId>, usize), DecodeError> {
    let g = p.g;
    let mut blocked = vec![false; g.vertex_count()];
    let mut count = 0;
    loop {
        let path = shortest_path(g, s, e, Some(&blocked))
            .ok_or_else(|| DecodeError::StructureNotRecognized("endpoints separated by handle junctions".into()))?;
        p.ensure(&path);
        let mut frontier: Vec<VertexId> =
            path.iter().copied().filter(|&x| p.class(x) == VertexClass::HandleJunctionVertex).collect();
        if frontier.is_empty() {
            return Ok((path, count));
        }
        while !frontier.is_empty() {
            for &x in &frontier {
                if !blocked[x as usize] {
                    blocked[x as usize] = true;
                    count += 1;
                }
            }
            let mut next: Vec<VertexId> = frontier
                .iter()
                .flat_map(|&x| g.neighbors(x).iter().copied())
                .filter(|&y| !blocked[y as usize])
                .collect();
            next.sort_unstable();
            next.dedup();
            p.ensure(&next);
            frontier = next.into_iter().filter(|&y| p.class(y) == VertexClass::HandleJunctionVertex).collect();
        }
        if blocked[s as usize] || blocked[e as usize] {
            return Err(DecodeError::StructureNotRecognized("an endpoint is a handle junction".into()));
        }
    }
}

fn junction_runs(path: &[VertexId], p: &Prober) -> Vec<JunctionRun> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < path.len() {
        if !p.class(path[i]).is_junction() {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < path.len() && p.class(path[i + 1]).is_junction() {
            i += 1;
        }
        runs.push(JunctionRun { start, end: i, middle: path[(start + i) / 2] });
        i += 1;
    }
    runs
}

/// Recovers `σ` from the 1-skeleton of an encoded complex with `k` gadgets.
pub fn recover_permutation(g: &Graph, thr: &DecoderThresholds, k: usize) -> Result<DecodeReport, DecodeError> {
    let diam = diameter(g)?;
    recover_with_endpoints(g, thr, k, diam.witness, diam.value)
}

/// As [`recover_permutation`], starting from a given diametric pair.
pub fn recover_with_endpoints(
    g: &Graph,
    thr: &DecoderThresholds,
    k: usize,
    (s, e): (VertexId, VertexId),
    diameter: u32,
) -> Result<DecodeReport, DecodeError> {
    thr.validate()?;
    if k == 0 {
        return Err(DecodeError::StructureNotRecognized("k must be positive".into()));
    }
    let mut prober = Prober { g, thr, cache: HashMap::new() };
    let (mut path, blocked) = avoiding_path(&mut prober, s, e)?;
    let mut runs = junction_runs(&path, &prober);
    if runs.len() != 2 * k {
        return Err(DecodeError::StructureNotRecognized(format!(
            "found {} junction runs along the path, expected {}",
            runs.len(),
            2 * k
        )));
    }
    let lead = runs[0].start;
    let trail = path.len() - 1 - runs[runs.len() - 1].end;
    if lead == trail {
        return Err(DecodeError::StructureNotRecognized("both path ends are equally far from a junction".into()));
    }
    let endpoints = if lead > trail {
        (s, e)
    } else {
        path.reverse();
        let len = path.len();
        runs = runs
            .into_iter()
            .rev()
            .map(|r| JunctionRun { start: len - 1 - r.end, end: len - 1 - r.start, middle: r.middle })
            .collect();
        (e, s)
    };

    let mut stats = GapStats::default();
    for r in &runs {
        let pr = &prober.cache[&r.middle];
        stats.max_intra = stats.max_intra.max(pr.max_intra);
        stats.min_inter = match (stats.min_inter, pr.min_inter) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }

    let us: Vec<VertexId> = runs.iter().step_by(2).map(|r| r.middle).collect();
    let vs: Vec<VertexId> = runs.iter().skip(1).step_by(2).map(|r| r.middle).collect();
    let distances: Vec<Vec<u32>> = us
        .par_iter()
        .map(|&u| {
            let d = bfs_distances(g, u, None);
            vs.iter().map(|&v| d[v as usize]).collect()
        })
        .collect();
    let mut sigma = Vec::with_capacity(k);
    for (i, row) in distances.iter().enumerate() {
        let hits: Vec<usize> = (0..k).filter(|&j| j != i && row[j] <= thr.match_dist).collect();
        match hits.as_slice() {
            [] => sigma.push(i + 1),
            [j] => sigma.push(j + 1),
            _ => {
                return Err(DecodeError::StructureNotRecognized(format!(
                    "gadget {} matches several targets {:?}",
                    i + 1,
                    hits.iter().map(|j| j + 1).collect::<Vec<_>>()
                )))
            }
        }
    }
    let mut seen = vec![false; k + 1];
    if sigma.iter().any(|&j| std::mem::replace(&mut seen[j], true)) {
        return Err(DecodeError::StructureNotRecognized(format!("recovered map {sigma:?} is not a bijection")));
    }
    let classification = path.iter().map(|&x| (x, prober.class(x))).collect();
    Ok(DecodeReport {
        sigma,
        endpoints,
        diameter,
        path_length: path.len(),
        junction_runs: runs,
        cluster_gap_stats: stats,
        blocked,
        distances,
        classification,
    })
}

/// Measured ranges behind a calibrated threshold set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub thresholds: DecoderThresholds,
    /// Largest linkage inside a cluster over all ground-truth junctions.
    pub junction_max_intra: u32,
    /// Smallest distance between clusters over all ground-truth junctions.
    pub junction_min_inter: u32,
    pub max_match: u32,
    pub min_nonmatch: u32,
    /// Ground-truth row vertices that were misread as junctions.
    pub row_false_positives: usize,
}

fn split(lo: u32, hi: u32, what: &'static str) -> Result<(u32, u32), DecodeError> {
    if lo >= hi {
        return Err(DecodeError::NoSeparation { what, positive: lo, negative: hi });
    }
    let third = (hi - lo) / 3;
    Ok((lo + third, hi - third))
}

/// Thresholds separating the measured ranges of an encoded complex with
/// known ground truth. Needs a non-identity permutation on at least three
/// points.
pub fn calibrate(enc: &Encoded) -> Result<Calibration, DecodeError> {
    let truth = &enc.truth;
    let k = truth.sigma.len();
    if k < 3 || truth.sigma.iter().enumerate().all(|(i, &j)| j == i + 1) {
        return Err(DecodeError::InvalidThresholds(
            "calibration needs k ≥ 3 and a permutation that moves some point".into(),
        ));
    }
    let g = enc.complex.skeleton_graph();
    let n = g.vertex_count();
    let base = DecoderThresholds::proved(truth.base_diameter, truth.base_vertices);
    let r = base.ball_radius;
    let centers: Vec<VertexId> =
        truth.u_centers.iter().chain(&truth.v_centers).chain(&truth.handle_centers).copied().collect();
    let linkages: Vec<Vec<u32>> = centers
        .par_iter()
        .map_init(
            || Scratch::new(n),
            |s, &x| {
                let shell = sphere(&g, x, r);
                single_linkage(&g, &shell, 0, 2 * r, s).linkage
            },
        )
        .collect();
    let mut max_intra = 0;
    let mut min_inter = u32::MAX;
    for l in &linkages {
        if l.len() < 3 {
            return Err(DecodeError::StructureNotRecognized("a junction sphere has fewer than three points".into()));
        }
        max_intra = max_intra.max(l[l.len() - 3]);
        min_inter = min_inter.min(l[l.len() - 2]);
    }
    let (intra, inter) = split(max_intra, min_inter, "cluster distances")?;

    let dists: Vec<Vec<u32>> = truth
        .u_centers
        .par_iter()
        .map(|&u| {
            let d = bfs_distances(&g, u, None);
            truth.v_centers.iter().map(|&v| d[v as usize]).collect()
        })
        .collect();
    let mut max_match = 0;
    let mut min_nonmatch = u32::MAX;
    for (i, row) in dists.iter().enumerate() {
        let target = truth.sigma[i] - 1;
        for (j, &d) in row.iter().enumerate() {
            if j == target && j != i {
                max_match = max_match.max(d);
            } else if j != i && j != target {
                min_nonmatch = min_nonmatch.min(d);
            }
        }
    }
    let (match_dist, nonmatch_dist) = split(max_match, min_nonmatch, "gadget distances")?;
    let thresholds = DecoderThresholds {
        ball_radius: r,
        intra_cluster: intra,
        inter_cluster: inter,
        small_component: base.small_component,
        match_dist,
        nonmatch_dist,
    };
    let row_false_positives = truth
        .row_centers
        .par_iter()
        .map_init(|| Scratch::new(n), |s, &x| probe(&g, x, &thresholds, s).class.is_junction())
        .filter(|&b| b)
        .count();
    Ok(Calibration {
        thresholds,
        junction_max_intra: max_intra,
        junction_min_inter: min_inter,
        max_match,
        min_nonmatch,
        row_false_positives,
    })
}

/// Calibrates on the cyclic permutation of `1..=3` built with `params`.
pub fn calibrate_params(params: &ConstructionParams, base: &BaseBlock) -> Result<Calibration, DecodeError> {
    let enc = encode(&[2, 3, 1], params, base)?;
    calibrate(&enc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, icosahedron};

    fn thr(intra: u32, inter: u32) -> DecoderThresholds {
        DecoderThresholds {
            ball_radius: 1,
            intra_cluster: intra,
            inter_cluster: inter,
            small_component: 4,
            match_dist: 1,
            nonmatch_dist: 2,
        }
    }

    #[test]
    fn spheres_and_balls() {
        let c5 = cycle(5).unwrap().skeleton_graph();
        assert_eq!(sphere(&c5, 0, 2).len(), 2);
        assert_eq!(ball(&c5, 0, 0), vec![0]);
        let ico = icosahedron().skeleton_graph();
        assert_eq!(sphere(&ico, 0, 3).len(), 1);
    }

    #[test]
    fn linkage_on_a_cycle() {
        let g = cycle(30).unwrap().skeleton_graph();
        let mut s = Scratch::new(30);
        // Three pairs of neighbors spaced ten apart.
        let pts = [0, 1, 10, 11, 20, 21];
        let c = single_linkage(&g, &pts, 1, 10, &mut s);
        assert_eq!(c.groups, vec![vec![0, 1], vec![10, 11], vec![20, 21]]);
        assert_eq!(c.max_intra, 1);
        assert_eq!(c.min_inter, Some(9));
        assert_eq!(c.linkage, vec![1, 1, 1, 9, 9]);
        assert!(cluster_partition(&g, &pts, &thr(1, 9)).is_some());
        assert!(cluster_partition(&g, &pts, &thr(1, 10)).is_none());
        assert!(cluster_partition(&g, &[], &thr(1, 1)).is_none());
    }

    #[test]
    fn linkage_matches_brute_force() {
        let g = icosahedron().skeleton_graph();
        let pts = [0, 3, 7, 11];
        let mut s = Scratch::new(12);
        let c = single_linkage(&g, &pts, 10, 10, &mut s);
        let d: Vec<Vec<u32>> = pts.iter().map(|&p| bfs_distances(&g, p, None)).collect();
        let mut all: Vec<u32> = vec![];
        for (i, row) in d.iter().enumerate() {
            all.extend(pts[i + 1..].iter().map(|&q| row[q as usize]));
        }
        assert_eq!(c.groups.len(), 1);
        assert!(c.linkage.iter().all(|w| all.contains(w)));
        assert_eq!(c.linkage.len(), 3);
    }

    #[test]
    fn proved_thresholds_separate_from_77() {
        assert!(DecoderThresholds::proved(77, 1).validate().is_ok());
        assert!(DecoderThresholds::proved(66, 1).validate().is_err());
        let t = DecoderThresholds::proved(77, 100);
        assert_eq!((t.ball_radius, t.intra_cluster, t.inter_cluster), (116, 95, 96));
        assert_eq!((t.match_dist, t.nonmatch_dist, t.small_component), (590, 600, 200));
    }
}
