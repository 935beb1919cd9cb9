//! Coherent facet orientations and oriented link isomorphisms.
//!
//! A facet `(v_0 < … < v_d)` with sign `s` induces the sign `s·(-1)^p` on the
//! ridge obtained by deleting `v_p`; an orientation is coherent when the two
//! facets at every ridge induce opposite signs there.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{pack, ComplexError, Face, SimplicialComplex, Subcomplex, VertexId, VertexMap};

/// Facets incident to one ridge, each with the position of the omitted vertex.
pub(crate) type RidgeGroup = SmallVec<[(u32, u8); 2]>;

/// Groups facets by shared ridges.
pub(crate) fn ridge_groups(k: &SimplicialComplex) -> Vec<RidgeGroup> {
    let d = k.dim();
    if k.vertex_count() < (1 << 21) && d <= 6 {
        let mut items: Vec<(u128, u32, u8)> = Vec::with_capacity(k.facet_count() * (d + 1));
        let mut buf: Face = SmallVec::new();
        for (fi, f) in k.facets().enumerate() {
            for p in 0..=d {
                buf.clear();
                buf.extend(f.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x));
                items.push((pack(&buf), fi as u32, p as u8));
            }
        }
        group_sorted(items)
    } else {
        let mut items: Vec<(Face, u32, u8)> = Vec::with_capacity(k.facet_count() * (d + 1));
        for (fi, f) in k.facets().enumerate() {
            for p in 0..=d {
                let ridge = f.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x).collect();
                items.push((ridge, fi as u32, p as u8));
            }
        }
        group_sorted(items)
    }
}

fn group_sorted<K: Ord + Send>(mut items: Vec<(K, u32, u8)>) -> Vec<RidgeGroup> {
    items.par_sort_unstable();
    let mut groups = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let mut j = i + 1;
        while j < items.len() && items[j].0 == items[i].0 {
            j += 1;
        }
        groups.push(items[i..j].iter().map(|(_, f, p)| (*f, *p)).collect());
        i = j;
    }
    groups
}

fn parity(p: usize) -> i8 {
    if p % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    signs: Vec<i8>,
}

impl Orientation {
    pub fn sign(&self, facet: usize) -> i8 {
        self.signs[facet]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn reversed(&self) -> Orientation {
        Orientation { signs: self.signs.iter().map(|s| -s).collect() }
    }

    /// Sign induced on the link facet `facet ∖ {v}`.
    pub fn link_facet_sign(&self, k: &SimplicialComplex, facet: usize, v: VertexId) -> Option<i8> {
        let pos = k.facet(facet).iter().position(|&x| x == v)?;
        Some(self.signs[facet] * parity(pos))
    }

    /// True iff the two facets at every two-facet ridge induce opposite signs.
    pub fn is_coherent(&self, k: &SimplicialComplex) -> bool {
        self.signs.len() == k.facet_count()
            && ridge_groups(k).iter().all(|g| match g.as_slice() {
                [(f, p), (h, q)] => {
                    self.signs[*f as usize] * parity(*p as usize) == -self.signs[*h as usize] * parity(*q as usize)
                }
                _ => true,
            })
    }
}

/// Propagates a sign from facet 0 across ridges (each strongly connected
/// piece is seeded with `+1` on its lowest facet).
pub fn coherent_orientation(k: &SimplicialComplex) -> Result<Orientation, ComplexError> {
    let d1 = k.dim() + 1;
    let m = k.facet_count();
    let mut across = vec![(u32::MAX, 0u8); m * d1];
    for g in ridge_groups(k) {
        match g.as_slice() {
            [(f, p), (h, q)] => {
                across[*f as usize * d1 + *p as usize] = (*h, *q);
                across[*h as usize * d1 + *q as usize] = (*f, *p);
            }
            other => {
                let (f, p) = other[0];
                let ridge: Vec<VertexId> =
                    k.facet(f as usize).iter().enumerate().filter(|&(i, _)| i != p as usize).map(|(_, &x)| x).collect();
                return Err(ComplexError::NotPseudomanifold(format!("ridge {ridge:?} lies in {} facets", other.len())));
            }
        }
    }
    let mut signs = vec![0i8; m];
    let mut stack = Vec::new();
    for seed in 0..m {
        if signs[seed] != 0 {
            continue;
        }
        signs[seed] = 1;
        stack.push(seed);
        while let Some(f) = stack.pop() {
            for p in 0..d1 {
                let (h, q) = across[f * d1 + p];
                let want = -signs[f] * parity(p) * parity(q as usize);
                let h = h as usize;
                if signs[h] == 0 {
                    signs[h] = want;
                    stack.push(h);
                } else if signs[h] != want {
                    return Err(ComplexError::NonOrientable);
                }
            }
        }
    }
    Ok(Orientation { signs })
}

/// Sign of the permutation sorting `xs` (entries distinct).
pub(crate) fn sort_parity(xs: &[VertexId]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                inversions += 1;
            }
        }
    }
    parity(inversions)
}

fn facet_lookup(k: &SimplicialComplex) -> Vec<(&[VertexId], u32)> {
    let mut idx: Vec<(&[VertexId], u32)> = k.facets().enumerate().map(|(i, f)| (f, i as u32)).collect();
    idx.sort_unstable();
    idx
}

fn find_facet(idx: &[(&[VertexId], u32)], f: &[VertexId]) -> Option<usize> {
    idx.binary_search_by(|probe| probe.0.cmp(f)).ok().map(|i| idx[i].1 as usize)
}

/// Degree of a complex automorphism `perm` relative to orientation `o`:
/// `+1` if it preserves `o`, `-1` if it reverses it.
pub fn automorphism_sign(k: &SimplicialComplex, o: &Orientation, perm: &[VertexId]) -> Result<i8, ComplexError> {
    if perm.len() != k.vertex_count() {
        return Err(ComplexError::BadPermutation(k.vertex_count()));
    }
    let idx = facet_lookup(k);
    let mut sign = None;
    for (fi, f) in k.facets().enumerate() {
        let image: Face = f.iter().map(|&x| perm[x as usize]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        let target = find_facet(&idx, &sorted)
            .ok_or_else(|| ComplexError::LinkMismatch(format!("facet {f:?} has no image facet")))?;
        let s = o.sign(fi) * sort_parity(&image) * o.sign(target);
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => {
                return Err(ComplexError::LinkMismatch("map is not orientation-consistent".into()))
            }
            _ => {}
        }
    }
    Ok(sign.unwrap_or(1))
}

/// Vertex bijection between the link of `source` in one complex and the link
/// of `target` in another (or the same) complex, in ambient ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkIso {
    pub source: VertexId,
    pub target: VertexId,
    /// `(x, φ(x))` sorted by `x`.
    pub pairs: Vec<(VertexId, VertexId)>,
    /// `+1`/`-1` once computed against orientations of both sides.
    pub sign: Option<i8>,
}

impl LinkIso {
    pub fn new(source: VertexId, target: VertexId, mut pairs: Vec<(VertexId, VertexId)>) -> Self {
        pairs.sort_unstable();
        LinkIso { source, target, pairs, sign: None }
    }

    /// Lifts a local-id map between the extracted links of `source` and
    /// `target` to ambient ids.
    pub fn from_local(source: VertexId, target: VertexId, src: &Subcomplex, tgt: &Subcomplex, map: &VertexMap) -> Self {
        let pairs = map.iter().enumerate().map(|(a, &b)| (src.ambient[a], tgt.ambient[b as usize])).collect();
        LinkIso::new(source, target, pairs)
    }

    /// Pairs link vertices of `v` in `n` with link vertices of `u` in `m`
    /// carrying the same key.
    pub fn matching<K: Ord>(
        n: &SimplicialComplex,
        v: VertexId,
        m: &SimplicialComplex,
        u: VertexId,
        key_n: impl Fn(VertexId) -> K,
        key_m: impl Fn(VertexId) -> K,
    ) -> Result<Self, ComplexError> {
        let ln = n.link(v)?;
        let lm = m.link(u)?;
        if ln.vertex_count() != lm.vertex_count() {
            return Err(ComplexError::LinkMismatch(format!(
                "links have {} and {} vertices",
                ln.vertex_count(),
                lm.vertex_count()
            )));
        }
        let mut right: Vec<(K, VertexId)> = lm.ambient.iter().map(|&y| (key_m(y), y)).collect();
        right.sort_by(|a, b| a.0.cmp(&b.0));
        let mut pairs = Vec::with_capacity(ln.vertex_count());
        for &x in &ln.ambient {
            let kx = key_n(x);
            let i = right
                .binary_search_by(|probe| probe.0.cmp(&kx))
                .map_err(|_| ComplexError::LinkMismatch(format!("no partner for link vertex {x}")))?;
            pairs.push((x, right[i].1));
        }
        let iso = LinkIso::new(v, u, pairs);
        iso.verify(n, m)?;
        Ok(iso)
    }

    pub fn image(&self, x: VertexId) -> Option<VertexId> {
        self.pairs.binary_search_by_key(&x, |p| p.0).ok().map(|i| self.pairs[i].1)
    }

    pub fn inverse(&self) -> LinkIso {
        let mut iso = LinkIso::new(self.target, self.source, self.pairs.iter().map(|&(a, b)| (b, a)).collect());
        iso.sign = self.sign;
        iso
    }

    /// Checks that the map is a bijection `V(lk_source) → V(lk_target)`
    /// sending link facets exactly onto link facets.
    pub fn verify(&self, n: &SimplicialComplex, m: &SimplicialComplex) -> Result<(), ComplexError> {
        let ln = n.link(self.source)?;
        let lm = m.link(self.target)?;
        let dom: Vec<VertexId> = self.pairs.iter().map(|p| p.0).collect();
        if dom != ln.ambient || dom.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::LinkMismatch("domain is not the source link".into()));
        }
        let mut img: Vec<VertexId> = self.pairs.iter().map(|p| p.1).collect();
        img.sort_unstable();
        if img != lm.ambient {
            return Err(ComplexError::LinkMismatch("image is not the target link".into()));
        }
        if ln.facet_count() != lm.facet_count() || ln.dim() != lm.dim() {
            return Err(ComplexError::LinkMismatch("links differ in size".into()));
        }
        let idx = facet_lookup(&lm);
        for f in ln.facets() {
            let mut image: Face =
                f.iter().map(|&a| lm.local(self.pairs[a as usize].1).expect("image checked above")).collect();
            image.sort_unstable();
            if find_facet(&idx, &image).is_none() {
                return Err(ComplexError::LinkMismatch(format!(
                    "link facet {:?} maps to a non-face",
                    f.iter().map(|&a| ln.ambient[a as usize]).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }
}

/// Orientation sign of `iso` with respect to orientations of the two
/// ambient complexes: `-1` means orientation-reversing.
pub fn iso_sign(
    n: &SimplicialComplex,
    on: &Orientation,
    m: &SimplicialComplex,
    om: &Orientation,
    iso: &LinkIso,
) -> Result<i8, ComplexError> {
    let (fi, f) =
        n.facets().enumerate().find(|(_, f)| f.contains(&iso.source)).ok_or(ComplexError::UnknownVertex(iso.source))?;
    let eps = on.link_facet_sign(n, fi, iso.source).expect("facet contains source");
    let image: Face = f
        .iter()
        .filter(|&&x| x != iso.source)
        .map(|&x| iso.image(x).ok_or_else(|| ComplexError::LinkMismatch(format!("{x} unmapped"))))
        .collect::<Result<_, _>>()?;
    let mut target: Face = image.clone();
    target.push(iso.target);
    target.sort_unstable();
    let (gi, _) = m
        .facets()
        .enumerate()
        .find(|(_, g)| *g == target.as_slice())
        .ok_or_else(|| ComplexError::LinkMismatch("image of a link facet is not a link facet".into()))?;
    let eps_target = om.link_facet_sign(m, gi, iso.target).expect("facet contains target");
    Ok(eps * sort_parity(&image) * eps_target)
}
