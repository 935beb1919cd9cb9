//! Facet-listed pure simplicial complexes.
//!
//! A [`SimplicialComplex`] stores only its facets (each a sorted tuple of
//! dense vertex ids) together with optional provenance labels. Faces of
//! intermediate dimension are enumerated on demand; the 1-skeleton is
//! materialized as a [`Graph`] when asked for.

pub mod graph;
pub mod iso;
pub mod orientation;
pub mod validate;

use std::collections::HashMap;

use smallvec::SmallVec;
use thiserror::Error;

pub use graph::{bfs_distances, diameter, multi_source_bfs, shortest_path, Diameter, Graph, LocalBfs, UNREACHED};
pub use iso::{iso_search, IsoSearch, VertexMap};
pub use orientation::{automorphism_sign, coherent_orientation, iso_sign, LinkIso, Orientation};
pub use validate::{sphere_proxy, validate_closed_pseudomanifold, validate_facet_list, PseudomanifoldReport};

/// Dense vertex index inside one complex.
pub type VertexId = u32;

/// Small inline buffer for a face or facet.
pub type Face = SmallVec<[VertexId; 6]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty facet list")]
    EmptyInput,
    #[error("facets of unequal size: expected {expected} vertices, found {found}")]
    NonPure { expected: usize, found: usize },
    #[error("facet {index} repeats a vertex")]
    RepeatedVertex { index: usize },
    #[error("facet {index} references vertex {vertex} outside 0..{count}")]
    VertexOutOfRange { index: usize, vertex: VertexId, count: usize },
    #[error("vertex {0} does not occur in any facet")]
    UnusedVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a closed pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("complex is not orientable")]
    NonOrientable,
    #[error("isomorphism search input has {size} vertices, above the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("vertex map is not a link isomorphism: {0}")]
    LinkMismatch(String),
    #[error("permutation is not a bijection on 0..{0}")]
    BadPermutation(usize),
}

/// Face counts f_0..f_dim.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }
}

/// Anything that can answer face-membership queries: implemented by pure
/// complexes and by arbitrary (possibly non-pure) face lists.
pub trait Faces: Sync {
    fn vertex_count(&self) -> usize;
    /// Number of vertices of the largest face.
    fn max_face_size(&self) -> usize;
    fn maximal_faces(&self) -> Box<dyn Iterator<Item = &[VertexId]> + '_>;
}

/// Pure simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    dim: usize,
    n: usize,
    facets: Vec<VertexId>,
    labels: Vec<Option<String>>,
}

/// A complex extracted from an ambient one, with the ambient id of every
/// local vertex.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub complex: SimplicialComplex,
    pub ambient: Vec<VertexId>,
}

impl std::ops::Deref for Subcomplex {
    type Target = SimplicialComplex;
    fn deref(&self) -> &SimplicialComplex {
        &self.complex
    }
}

impl Subcomplex {
    /// Local id of an ambient vertex, if present.
    pub fn local(&self, ambient: VertexId) -> Option<VertexId> {
        self.ambient.binary_search(&ambient).ok().map(|i| i as VertexId)
    }
}

/// Maximal faces of a possibly non-pure complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceList {
    n: usize,
    faces: Vec<Vec<VertexId>>,
}

impl FaceList {
    /// Builds a face list on vertices `0..n` keeping only inclusion-maximal faces.
    pub fn new(n: usize, faces: impl IntoIterator<Item = Vec<VertexId>>) -> Self {
        let mut faces: Vec<Vec<VertexId>> = faces
            .into_iter()
            .filter(|f| !f.is_empty())
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut kept: Vec<Vec<VertexId>> = Vec::new();
        for f in faces {
            if !kept.iter().any(|g| is_subset(&f, g)) {
                kept.push(f);
            }
        }
        kept.sort_unstable();
        FaceList { n, faces: kept }
    }

    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }

    pub fn is_pure(&self) -> bool {
        self.faces.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn skeleton_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for f in &self.faces {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    edges.push((f[i], f[j]));
                }
            }
        }
        Graph::from_edges(self.n, edges)
    }
}

impl Faces for FaceList {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn max_face_size(&self) -> usize {
        self.faces.iter().map(Vec::len).max().unwrap_or(0)
    }
    fn maximal_faces(&self) -> Box<dyn Iterator<Item = &[VertexId]> + '_> {
        Box::new(self.faces.iter().map(Vec::as_slice))
    }
}

impl Faces for SimplicialComplex {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn max_face_size(&self) -> usize {
        self.dim + 1
    }
    fn maximal_faces(&self) -> Box<dyn Iterator<Item = &[VertexId]> + '_> {
        Box::new(self.facets())
    }
}

pub(crate) fn is_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

impl SimplicialComplex {
    /// Canonical complex from arbitrary vertex tuples. Input ids need not be
    /// contiguous; they are compressed to `0..n` preserving order.
    pub fn from_facets<I, F>(facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[VertexId]>,
    {
        let raw: Vec<Vec<VertexId>> = facets.into_iter().map(|f| f.as_ref().to_vec()).collect();
        let mut ids: Vec<VertexId> = raw.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        let n = ids.len();
        let remapped: Vec<Vec<VertexId>> =
            raw.iter().map(|f| f.iter().map(|v| ids.binary_search(v).unwrap() as VertexId).collect()).collect();
        Self::from_labeled_facets(remapped, vec![None; n])
    }

    /// Complex on vertices `0..labels.len()`; every vertex must occur in a facet.
    pub fn from_labeled_facets<I, F>(facets: I, labels: Vec<Option<String>>) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[VertexId]>,
    {
        let n = labels.len();
        let mut size = None;
        let mut rows: Vec<Face> = Vec::new();
        for (index, f) in facets.into_iter().enumerate() {
            let f = f.as_ref();
            if f.is_empty() {
                return Err(ComplexError::EmptyInput);
            }
            match size {
                None => size = Some(f.len()),
                Some(s) if s != f.len() => return Err(ComplexError::NonPure { expected: s, found: f.len() }),
                _ => {}
            }
            let mut face: Face = f.iter().copied().collect();
            face.sort_unstable();
            if face.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex { index });
            }
            if let Some(&v) = face.iter().find(|&&v| v as usize >= n) {
                return Err(ComplexError::VertexOutOfRange { index, vertex: v, count: n });
            }
            rows.push(face);
        }
        let size = size.ok_or(ComplexError::EmptyInput)?;
        rows.sort_unstable();
        rows.dedup();
        let mut used = vec![false; n];
        for f in &rows {
            for &v in f {
                used[v as usize] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(ComplexError::UnusedVertex(v as VertexId));
        }
        Ok(SimplicialComplex { dim: size - 1, n, facets: rows.into_iter().flatten().collect(), labels })
    }

    /// Trusted constructor: facets already sorted, distinct and covering `0..n`.
    pub(crate) fn from_raw_parts(dim: usize, facets: Vec<VertexId>, labels: Vec<Option<String>>) -> Self {
        debug_assert_eq!(facets.len() % (dim + 1), 0);
        SimplicialComplex { dim, n: labels.len(), facets, labels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len() / (self.dim + 1)
    }

    pub fn facets(&self) -> std::slice::ChunksExact<'_, VertexId> {
        self.facets.chunks_exact(self.dim + 1)
    }

    pub fn facet(&self, i: usize) -> &[VertexId] {
        let k = self.dim + 1;
        &self.facets[i * k..(i + 1) * k]
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v as usize).and_then(|l| l.as_deref())
    }

    /// Looks up a vertex by its label (linear scan).
    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label)).map(|i| i as VertexId)
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        assert_eq!(labels.len(), self.n, "label count must match vertex count");
        self.labels = labels;
        self
    }

    /// Replaces every label with `prefix/label` (or `prefix/id` when unlabeled).
    pub fn prefixed_labels(&self, prefix: &str) -> Vec<Option<String>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| match l {
                Some(l) => Some(format!("{prefix}/{l}")),
                None => Some(format!("{prefix}/{i}")),
            })
            .collect()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), ComplexError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(ComplexError::UnknownVertex(v))
        }
    }

    /// Facet indices incident to each vertex, in CSR form.
    pub fn vertex_stars(&self) -> Stars {
        let mut counts = vec![0usize; self.n + 1];
        for &v in &self.facets {
            counts[v as usize + 1] += 1;
        }
        for i in 0..self.n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; self.facets.len()];
        for (fi, f) in self.facets().enumerate() {
            for &v in f {
                items[fill[v as usize]] = fi as u32;
                fill[v as usize] += 1;
            }
        }
        Stars { offsets: counts, items }
    }

    pub fn skeleton_graph(&self) -> Graph {
        let k = self.dim + 1;
        let mut edges = Vec::with_capacity(self.facet_count() * k * (k - 1) / 2);
        for f in self.facets() {
            for i in 0..k {
                for j in i + 1..k {
                    edges.push((f[i], f[j]));
                }
            }
        }
        Graph::from_edges(self.n, edges)
    }

    /// Counts faces of every dimension by enumerating facet subsets.
    pub fn f_vector(&self) -> FVector {
        let mut f = vec![0u64; self.dim + 1];
        f[0] = self.n as u64;
        f[self.dim] = self.facet_count() as u64;
        for size in 2..=self.dim {
            f[size - 1] = self.count_faces_of_size(size) as u64;
        }
        FVector(f)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    fn count_faces_of_size(&self, size: usize) -> usize {
        let k = self.dim + 1;
        if self.n < (1 << 21) && size <= 6 {
            let mut keys: Vec<u128> = Vec::with_capacity(self.facet_count() * binomial(k, size));
            for f in self.facets() {
                for_each_subset(f, size, |s| keys.push(pack(s)));
            }
            keys.sort_unstable();
            keys.dedup();
            keys.len()
        } else {
            let mut keys: Vec<Face> = Vec::new();
            for f in self.facets() {
                for_each_subset(f, size, |s| keys.push(s.iter().copied().collect()));
            }
            keys.sort_unstable();
            keys.dedup();
            keys.len()
        }
    }

    /// All distinct faces with `size` vertices, sorted lexicographically.
    pub fn faces_of_size(&self, size: usize) -> Vec<Face> {
        let mut keys: Vec<Face> = Vec::new();
        if size == 0 || size > self.dim + 1 {
            return keys;
        }
        for f in self.facets() {
            for_each_subset(f, size, |s| keys.push(s.iter().copied().collect()));
        }
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// Link of `v`: faces `σ` with `v ∉ σ` and `σ ∪ {v}` a face.
    pub fn link(&self, v: VertexId) -> Result<Subcomplex, ComplexError> {
        self.check_vertex(v)?;
        if self.dim == 0 {
            return Err(ComplexError::EmptyInput);
        }
        let faces: Vec<Vec<VertexId>> =
            self.facets().filter(|f| f.contains(&v)).map(|f| f.iter().copied().filter(|&x| x != v).collect()).collect();
        self.restrict(faces)
    }

    /// Same as [`link`](Self::link) but reads the star from a precomputed index.
    pub fn link_in(&self, stars: &Stars, v: VertexId) -> Result<Subcomplex, ComplexError> {
        self.check_vertex(v)?;
        if self.dim == 0 {
            return Err(ComplexError::EmptyInput);
        }
        let faces: Vec<Vec<VertexId>> = stars
            .of(v)
            .iter()
            .map(|&fi| self.facet(fi as usize).iter().copied().filter(|&x| x != v).collect())
            .collect();
        self.restrict(faces)
    }

    /// Antistar of `v`: all faces not containing `v`.
    pub fn antistar(&self, v: VertexId) -> Result<Subcomplex, ComplexError> {
        self.check_vertex(v)?;
        let mut faces: Vec<Vec<VertexId>> = Vec::new();
        for f in self.facets() {
            if f.contains(&v) {
                faces.push(f.iter().copied().filter(|&x| x != v).collect());
            } else {
                faces.push(f.to_vec());
            }
        }
        let list = FaceList::new(self.n, faces);
        self.restrict(list.faces)
    }

    /// Maximal faces of the subcomplex induced on `vertices` (possibly non-pure).
    pub fn induced_faces(&self, vertices: &[VertexId]) -> Result<FaceList, ComplexError> {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            self.check_vertex(v)?;
            inside[v as usize] = true;
        }
        let faces = self.facets().map(|f| f.iter().copied().filter(|&x| inside[x as usize]).collect::<Vec<_>>());
        Ok(FaceList::new(self.n, faces))
    }

    /// Induced subcomplex on `vertices`; fails with `NonPure` when the result
    /// has maximal faces of different dimensions.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<Subcomplex, ComplexError> {
        let list = self.induced_faces(vertices)?;
        self.restrict(list.faces)
    }

    /// Builds a subcomplex from faces of `self`, compressing ids and keeping labels.
    fn restrict(&self, faces: Vec<Vec<VertexId>>) -> Result<Subcomplex, ComplexError> {
        let mut ambient: Vec<VertexId> = faces.iter().flatten().copied().collect();
        ambient.sort_unstable();
        ambient.dedup();
        if ambient.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        let local: Vec<Vec<VertexId>> =
            faces.iter().map(|f| f.iter().map(|x| ambient.binary_search(x).unwrap() as VertexId).collect()).collect();
        let labels = ambient.iter().map(|&a| self.labels[a as usize].clone()).collect();
        let complex = SimplicialComplex::from_labeled_facets(local, labels)?;
        Ok(Subcomplex { complex, ambient })
    }

    /// Renames vertex `i` to `perm[i]`; labels travel with their vertices.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self, ComplexError> {
        if perm.len() != self.n {
            return Err(ComplexError::BadPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p as usize >= self.n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(ComplexError::BadPermutation(self.n));
            }
        }
        let mut labels = vec![None; self.n];
        for (i, l) in self.labels.iter().enumerate() {
            labels[perm[i] as usize] = l.clone();
        }
        let facets = self.facets().map(|f| f.iter().map(|&v| perm[v as usize]).collect::<Face>());
        SimplicialComplex::from_labeled_facets(facets, labels)
    }

    /// Disjoint union with `other`, whose ids are shifted past ours.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> Result<Self, ComplexError> {
        if self.dim != other.dim {
            return Err(ComplexError::NonPure { expected: self.dim + 1, found: other.dim + 1 });
        }
        let shift = self.n as VertexId;
        let mut facets = self.facets.clone();
        facets.extend(other.facets.iter().map(|&v| v + shift));
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let rows: Vec<&[VertexId]> = facets.chunks_exact(self.dim + 1).collect();
        SimplicialComplex::from_labeled_facets(rows, labels)
    }

    /// Facets sorted lexicographically (the stored order is not necessarily sorted).
    pub fn sorted_facets(&self) -> Vec<&[VertexId]> {
        let mut rows: Vec<&[VertexId]> = self.facets().collect();
        rows.sort_unstable();
        rows
    }

    /// Map from label to vertex id; labels must be unique.
    pub fn label_index(&self) -> HashMap<&str, VertexId> {
        self.labels.iter().enumerate().filter_map(|(i, l)| l.as_deref().map(|l| (l, i as VertexId))).collect()
    }
}

/// Vertex-to-facet incidence in CSR layout.
#[derive(Clone, Debug)]
pub struct Stars {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl Stars {
    pub fn of(&self, v: VertexId) -> &[u32] {
        &self.items[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn pack(s: &[VertexId]) -> u128 {
    s.iter().fold(0u128, |acc, &v| (acc << 21) | (v as u128 + 1))
}

/// Calls `f` on every `size`-subset of the sorted slice, in lexicographic order.
pub(crate) fn for_each_subset(items: &[VertexId], size: usize, mut f: impl FnMut(&[VertexId])) {
    let n = items.len();
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Face = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..size {
            buf[j] = items[idx[j]];
        }
    }
}
