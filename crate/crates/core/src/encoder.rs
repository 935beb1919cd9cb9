//! Rows of glued base copies, the `E` and `H` gadgets, and the assembled
//! complexes `T_σ`.
//!
//! Everything is built from copies of one [`BaseBlock`]. While a complex is
//! being assembled it stays unlabeled; every vertex remembers its copy and its
//! id inside the base, and link identifications pair vertices by those base
//! ids. Labels `copy/base-label` are written once at the end.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    bfs_distances, coherent_orientation, diameter, iso_search, iso_sign, ComplexError, LinkIso, SimplicialComplex,
    VertexId,
};
use crate::generators::{cell600_boundary, icosahedron};
use crate::surgery::{star_connected_sum, star_handle, SurgeryError, SurgeryOptions, SymbolicChi};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("invalid permutation {0:?}: expected the numbers 1..=k each once")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no vertex with a base link found for role {0}")]
    RoleLinkNotFound(&'static str),
    #[error("unknown role {0}")]
    UnknownRole(String),
    #[error("no orientation-reversing link map between {0} and {1}")]
    NoReversingMap(VertexId, VertexId),
    #[error(
        "Euler characteristic {target} is out of reach from base characteristic {base}: need at least {threshold}"
    )]
    TargetUnreachable { target: i64, base: i64, threshold: i64 },
}

/// The three distinguished vertices of a base block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Site {
    U,
    V,
    W,
}

impl Site {
    fn name(self) -> &'static str {
        match self {
            Site::U => "u",
            Site::V => "v",
            Site::W => "w",
        }
    }

    fn other(self) -> Site {
        match self {
            Site::U => Site::V,
            Site::V => Site::U,
            Site::W => Site::W,
        }
    }
}

/// Base-id pairs `(x, φ(x))` of one link isomorphism.
pub type BaseMap = Vec<(VertexId, VertexId)>;

/// A closed fns 3-manifold with distinguished vertices `u`, `v` realizing
/// its diameter and `w` roughly half way between them.
#[derive(Clone, Debug)]
pub struct BaseBlock {
    pub complex: SimplicialComplex,
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    /// Vertices at distance 3 from `v` and `u` on shortest `u`–`v` paths.
    pub v_prime: VertexId,
    pub u_prime: VertexId,
    /// Measured diameter, equal to `d(u, v)`.
    pub diameter: u32,
    /// Diameter of the link of `u`.
    pub link_diameter: u32,
    /// Minimizer of the largest distance to `u`, `v` and `w`.
    pub center: VertexId,
    /// Number of ∂600-cell copies.
    pub copies: usize,
    maps: BTreeMap<(VertexId, VertexId), Vec<BaseMap>>,
}

impl BaseBlock {
    /// One ∂600-cell with an antipodal pair as `u`, `v`.
    pub fn cell600() -> Result<BaseBlock, EncodeError> {
        let (c, _) = cell600_boundary();
        let d = bfs_distances(&c.skeleton_graph(), 0, None);
        let far = d.iter().position(|&x| x == 5).expect("600-cell has antipodes") as VertexId;
        BaseBlock::from_complex(c, 0, far, 1)
    }

    /// Measures `complex` and fixes its roles. `(u, v)` is kept when it
    /// realizes the diameter with base links at both ends.
    pub fn from_complex(
        complex: SimplicialComplex,
        u: VertexId,
        v: VertexId,
        copies: usize,
    ) -> Result<BaseBlock, EncodeError> {
        let ico = icosahedron();
        let g = complex.skeleton_graph();
        let n = complex.vertex_count();
        let good: Vec<bool> = (0..n as VertexId)
            .map(|x| {
                g.degree(x) == ico.vertex_count()
                    && complex.link(x).map(|l| !iso_search(&l, &ico, 1).unwrap_or_default().is_empty()).unwrap_or(false)
            })
            .collect();
        let dist: Vec<Vec<u32>> = (0..n as VertexId).map(|x| bfs_distances(&g, x, None)).collect();
        let diam = diameter(&g)?.value;
        let (u, v) = if dist[u as usize][v as usize] == diam && good[u as usize] && good[v as usize] {
            (u, v)
        } else {
            (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .find(|&(a, b)| good[a] && good[b] && dist[a][b] == diam)
                .map(|(a, b)| (a as VertexId, b as VertexId))
                .ok_or(EncodeError::RoleLinkNotFound("u"))?
        };
        let (du, dv) = (&dist[u as usize], &dist[v as usize]);
        let on_path = |x: usize, from_u: u32| good[x] && du[x] == from_u && dv[x] == diam - from_u;
        let half = diam.div_ceil(2);
        let w = (0..n)
            .find(|&x| on_path(x, half))
            .or_else(|| {
                (0..n).filter(|&x| good[x]).min_by_key(|&x| (du[x].abs_diff(half) + dv[x].abs_diff(diam - half), x))
            })
            .ok_or(EncodeError::RoleLinkNotFound("w"))? as VertexId;
        let v_prime = (0..n).find(|&x| diam >= 6 && on_path(x, diam - 3)).map(|x| x as VertexId).unwrap_or(v);
        let u_prime = (0..n).find(|&x| diam >= 6 && on_path(x, 3)).map(|x| x as VertexId).unwrap_or(u);
        let dw = &dist[w as usize];
        // Sites and their links do not survive gluing unchanged.
        let center = (0..n)
            .filter(|&x| du[x].min(dv[x]).min(dw[x]) >= 2)
            .min_by_key(|&x| (du[x].max(dv[x]).max(dw[x]), x))
            .ok_or(EncodeError::RoleLinkNotFound("center"))? as VertexId;
        let link_diameter = diameter(&complex.link(u)?.skeleton_graph())?.value;

        let sites = [u, v, w, u_prime, v_prime];
        let mut maps = BTreeMap::new();
        for &a in &sites {
            for &b in &sites {
                if a == b || maps.contains_key(&(a, b)) {
                    continue;
                }
                let (la, lb) = (complex.link(a)?, complex.link(b)?);
                let found: Vec<BaseMap> = iso_search(&la, &lb, usize::MAX)?
                    .iter()
                    .map(|m| LinkIso::from_local(a, b, &la, &lb, m).pairs)
                    .collect();
                maps.insert((a, b), found);
            }
        }
        Ok(BaseBlock { complex, u, v, w, v_prime, u_prime, diameter: diam, link_diameter, center, copies, maps })
    }

    pub fn site(&self, s: Site) -> VertexId {
        match s {
            Site::U => self.u,
            Site::V => self.v,
            Site::W => self.w,
        }
    }

    /// All isomorphisms `lk(a) → lk(b)` in base ids, in a fixed order.
    pub fn link_maps(&self, a: VertexId, b: VertexId) -> &[BaseMap] {
        self.maps.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.vertex_count()
    }
}

/// A row of ∂600-cell copies long enough that its measured diameter reaches
/// `target_d`.
pub fn make_base_block(target_d: u32) -> Result<BaseBlock, EncodeError> {
    if target_d < 9 {
        return Err(EncodeError::InvalidParams(format!("target diameter {target_d} is below 9")));
    }
    let seed = BaseBlock::cell600()?;
    for r in 2.. {
        let base = base_block_of_length(&seed, r)?;
        if base.diameter >= target_d {
            return Ok(base);
        }
    }
    unreachable!()
}

/// The row of `r` ∂600-cell copies, measured.
pub fn base_block_of_length(seed: &BaseBlock, r: usize) -> Result<BaseBlock, EncodeError> {
    if r == 0 {
        return Err(EncodeError::InvalidParams("a base block needs at least one copy".into()));
    }
    let row = make_row(seed, r, "c")?;
    let (u, v) = (row.port("u")?, row.port("v")?);
    let complex = row.labeled(seed);
    BaseBlock::from_complex(complex, u, v, r)
}

/// A complex assembled from base copies, with per-vertex provenance.
#[derive(Clone, Debug)]
pub struct Block {
    /// Unlabeled while under construction; see [`Block::labeled`].
    pub complex: SimplicialComplex,
    /// Id of every vertex inside its base copy.
    pub origin: Vec<VertexId>,
    /// Index into `copy_names` of every vertex. Identified link vertices
    /// belong to the copy on the left of the gluing.
    pub copy: Vec<u32>,
    pub copy_names: Vec<String>,
    /// `copy.site` for every surviving base site.
    pub roles: BTreeMap<String, VertexId>,
    /// Named attachment points of this gadget, as role names.
    pub ports: BTreeMap<String, String>,
    /// Characteristic of the four-dimensional analogue, symbolic in `χ(base)`.
    pub symbolic_chi: SymbolicChi,
}

impl Block {
    pub fn single(base: &BaseBlock, name: &str) -> Block {
        let n = base.vertex_count();
        let complex = base.complex.clone().with_labels(vec![None; n]);
        let roles = [Site::U, Site::V, Site::W]
            .into_iter()
            .map(|s| (format!("{name}.{}", s.name()), base.site(s)))
            .chain([(format!("{name}.u'"), base.u_prime), (format!("{name}.v'"), base.v_prime)])
            .collect();
        Block {
            complex,
            origin: (0..n as VertexId).collect(),
            copy: vec![0; n],
            copy_names: vec![name.to_string()],
            roles,
            ports: BTreeMap::new(),
            symbolic_chi: SymbolicChi::BASE,
        }
    }

    /// Prefixes copy names, roles and ports with `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Block {
        for c in &mut self.copy_names {
            *c = format!("{prefix}.{c}");
        }
        self.roles = self.roles.into_iter().map(|(k, v)| (format!("{prefix}.{k}"), v)).collect();
        self.ports = self.ports.into_iter().map(|(k, v)| (k, format!("{prefix}.{v}"))).collect();
        self
    }

    pub fn role(&self, name: &str) -> Result<VertexId, EncodeError> {
        self.roles.get(name).copied().ok_or_else(|| EncodeError::UnknownRole(name.to_string()))
    }

    pub fn port(&self, name: &str) -> Result<VertexId, EncodeError> {
        let role = self.ports.get(name).ok_or_else(|| EncodeError::UnknownRole(name.to_string()))?;
        self.role(role)
    }

    fn port_role(&self, name: &str) -> Result<String, EncodeError> {
        self.ports.get(name).cloned().ok_or_else(|| EncodeError::UnknownRole(name.to_string()))
    }

    pub fn copy_index(&self, name: &str) -> Option<u32> {
        self.copy_names.iter().position(|c| c == name).map(|i| i as u32)
    }

    /// The vertex of copy `copy` coming from base vertex `origin`.
    pub fn find(&self, copy: u32, origin: VertexId) -> Option<VertexId> {
        (0..self.complex.vertex_count())
            .find(|&x| self.copy[x] == copy && self.origin[x] == origin)
            .map(|x| x as VertexId)
    }

    /// The complex with labels `copy/base-label`.
    pub fn labeled(&self, base: &BaseBlock) -> SimplicialComplex {
        let labels = (0..self.complex.vertex_count())
            .map(|x| {
                let o = self.origin[x];
                let copy = &self.copy_names[self.copy[x] as usize];
                Some(match base.complex.label(o) {
                    Some(l) => format!("{copy}/{l}"),
                    None => format!("{copy}/{o}"),
                })
            })
            .collect();
        self.complex.clone().with_labels(labels)
    }
}

fn link_iso(
    left: &Block,
    v: VertexId,
    right: &Block,
    u: VertexId,
    phi: Option<&BaseMap>,
) -> Result<LinkIso, ComplexError> {
    let image = |o: VertexId| match phi {
        None => o,
        Some(p) => p.binary_search_by_key(&o, |q| q.0).map(|i| p[i].1).unwrap_or(VertexId::MAX),
    };
    LinkIso::matching(
        &left.complex,
        v,
        &right.complex,
        u,
        |x| image(left.origin[x as usize]),
        |y| right.origin[y as usize],
    )
}

fn base_map(base: &BaseBlock, a: VertexId, b: VertexId) -> Result<Option<&BaseMap>, EncodeError> {
    if a == b {
        return Ok(None);
    }
    base.link_maps(a, b)
        .first()
        .map(Some)
        .ok_or_else(|| EncodeError::InvalidParams(format!("base vertices {a} and {b} have no link map")))
}

/// Star connected sum of two blocks at the roles `lrole` and `rrole`.
/// Same-site gluings use the identity on base ids; otherwise the first base
/// link isomorphism between the two sites.
pub fn join(base: &BaseBlock, left: Block, lrole: &str, right: Block, rrole: &str) -> Result<Block, EncodeError> {
    let (v, u) = (left.role(lrole)?, right.role(rrole)?);
    let phi = base_map(base, left.origin[v as usize], right.origin[u as usize])?;
    let iso = link_iso(&left, v, &right, u, phi)?;
    let glued = star_connected_sum(&left.complex, v, &right.complex, u, &iso, &SurgeryOptions::fast())?;
    let n = glued.complex.vertex_count();
    let mut origin = vec![0; n];
    let mut copy = vec![u32::MAX; n];
    for (x, t) in glued.left_map.iter().enumerate() {
        if let Some(t) = t {
            origin[*t as usize] = left.origin[x];
            copy[*t as usize] = left.copy[x];
        }
    }
    let offset = left.copy_names.len() as u32;
    for (y, t) in glued.right_map.iter().enumerate() {
        if let Some(t) = t {
            if copy[*t as usize] == u32::MAX {
                origin[*t as usize] = right.origin[y];
                copy[*t as usize] = right.copy[y] + offset;
            }
        }
    }
    let mut roles = BTreeMap::new();
    for (name, x) in left.roles {
        if let Some(t) = glued.left_map[x as usize] {
            roles.insert(name, t);
        }
    }
    for (name, y) in right.roles {
        if let Some(t) = glued.right_map[y as usize] {
            roles.insert(name, t);
        }
    }
    let mut copy_names = left.copy_names;
    copy_names.extend(right.copy_names);
    Ok(Block {
        complex: glued.complex,
        origin,
        copy,
        copy_names,
        roles,
        ports: BTreeMap::new(),
        symbolic_chi: left.symbolic_chi.sum(right.symbolic_chi, 0),
    })
}

/// Star handle between the roles `vrole` and `urole` of one block, through
/// the first base link map that reverses a coherent orientation. The sites
/// must be at distance at least 7.
pub fn handle(base: &BaseBlock, block: Block, vrole: &str, urole: &str) -> Result<Block, EncodeError> {
    let (v, u) = (block.role(vrole)?, block.role(urole)?);
    let (ov, ou) = (block.origin[v as usize], block.origin[u as usize]);
    let orientation = coherent_orientation(&block.complex)?;
    let mut chosen = None;
    for phi in base.link_maps(ov, ou) {
        let mut iso = link_iso(&block, v, &block, u, Some(phi))?;
        let sign = iso_sign(&block.complex, &orientation, &block.complex, &orientation, &iso)?;
        if sign == -1 {
            iso.sign = Some(sign);
            chosen = Some(iso);
            break;
        }
    }
    let iso = chosen.ok_or(EncodeError::NoReversingMap(v, u))?;
    let opts = SurgeryOptions { enforce_fns: true, ..SurgeryOptions::fast() };
    let h = star_handle(&block.complex, v, u, &iso, &opts)?;
    let n = h.complex.vertex_count();
    let mut origin = vec![0; n];
    let mut copy = vec![u32::MAX; n];
    for x in 0..block.complex.vertex_count() {
        if let Some(t) = h.map[x] {
            if iso.pairs.binary_search_by_key(&(x as VertexId), |p| p.1).is_ok() {
                continue;
            }
            origin[t as usize] = block.origin[x];
            copy[t as usize] = block.copy[x];
        }
    }
    let roles = block.roles.into_iter().filter_map(|(name, x)| h.map[x as usize].map(|t| (name, t))).collect();
    Ok(Block {
        complex: h.complex,
        origin,
        copy,
        copy_names: block.copy_names,
        roles,
        ports: block.ports,
        symbolic_chi: block.symbolic_chi.handle(0),
    })
}

/// `R_a`: copies `{prefix}1..{prefix}a` glued in a row, first at `v`–`v`,
/// then alternating. Ports `u` (first copy) and `v` (free end).
pub fn make_row(base: &BaseBlock, a: usize, prefix: &str) -> Result<Block, EncodeError> {
    make_row_from(base, a, prefix, Site::V)
}

/// Like [`make_row`] with the first gluing at `first` (`U` or `V`).
pub fn make_row_from(base: &BaseBlock, a: usize, prefix: &str, first: Site) -> Result<Block, EncodeError> {
    if a == 0 {
        return Err(EncodeError::InvalidParams("a row needs at least one copy".into()));
    }
    if first == Site::W {
        return Err(EncodeError::InvalidParams("rows are glued at u or v".into()));
    }
    let name = |j: usize| format!("{prefix}{j}");
    let mut row = Block::single(base, &name(1));
    let mut site = first;
    for j in 2..=a {
        let glue = format!("{}.{}", name(j - 1), site.name());
        let next = Block::single(base, &name(j));
        row = join(base, row, &glue, next, &format!("{}.{}", name(j), site.name()))?;
        site = site.other();
    }
    let (start, end) = if a == 1 {
        (Site::U, Site::V)
    } else {
        // `site` flipped after the last gluing, so it names the free site.
        (first.other(), site)
    };
    row.ports.insert("u".into(), format!("{}.{}", name(1), start.name()));
    row.ports.insert("v".into(), format!("{}.{}", name(a), end.name()));
    Ok(row)
}

fn make_arm(base: &BaseBlock, prefix: &str) -> Result<Block, EncodeError> {
    let (one, two) = (format!("{prefix}1"), format!("{prefix}2"));
    let arm =
        join(base, Block::single(base, &one), &format!("{one}.v"), Block::single(base, &two), &format!("{two}.v"))?;
    Ok(arm)
}

/// The 17-copy gadget: `R_13` with two-copy arms on the `w` of copies 5 and 9.
/// Ports `u`, `v`, `t` (free end of the upper arm) and `b` (lower arm).
pub fn make_e(base: &BaseBlock) -> Result<Block, EncodeError> {
    let row = make_row(base, 13, "r")?;
    let ports = row.ports.clone();
    let e = join(base, row, "r5.w", make_arm(base, "top")?, "top1.u")?;
    let mut e = join(base, e, "r9.w", make_arm(base, "bottom")?, "bottom1.u")?;
    e.ports = ports;
    e.ports.insert("t".into(), "top2.u".into());
    e.ports.insert("b".into(), "bottom2.u".into());
    Ok(e)
}

/// The 3-copy gadget: the `w` of `bottom` glued to the `u` of `mid`, whose
/// `v` is glued to the `v` of `top`. Ports `u` and `v` of `bottom`.
pub fn make_h(base: &BaseBlock) -> Result<Block, EncodeError> {
    let h = join(base, Block::single(base, "bottom"), "bottom.w", Block::single(base, "mid"), "mid.u")?;
    let mut h = join(base, h, "mid.v", Block::single(base, "top"), "top.v")?;
    h.ports.insert("u".into(), "bottom.u".into());
    h.ports.insert("v".into(), "bottom.v".into());
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// ∂600-cell copies per base block.
    pub base_row_length: usize,
    pub left_row_factor: usize,
    pub right_row_factor: usize,
    /// Refuse base blocks with diameter below 77.
    pub proof_scale: bool,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams { base_row_length: 7, left_row_factor: 15, right_row_factor: 14, proof_scale: false }
    }
}

impl ConstructionParams {
    pub fn validate(&self) -> Result<(), EncodeError> {
        if self.base_row_length < 2 {
            return Err(EncodeError::InvalidParams("base rows need at least 2 copies".into()));
        }
        if self.left_row_factor <= self.right_row_factor || self.right_row_factor == 0 {
            return Err(EncodeError::InvalidParams(format!(
                "row factors {} and {} must satisfy left > right > 0",
                self.left_row_factor, self.right_row_factor
            )));
        }
        Ok(())
    }

    /// Builds and checks the base block.
    pub fn base(&self) -> Result<BaseBlock, EncodeError> {
        self.validate()?;
        let base = base_block_of_length(&BaseBlock::cell600()?, self.base_row_length)?;
        if base.diameter < 9 {
            return Err(EncodeError::InvalidParams(format!("base diameter {} is below 9", base.diameter)));
        }
        if self.proof_scale && base.diameter < 77 {
            return Err(EncodeError::InvalidParams(format!(
                "proof scale needs base diameter at least 77, got {}",
                base.diameter
            )));
        }
        Ok(base)
    }
}

/// Known positions inside an encoded complex, for tests and calibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// `σ(i)` for `i = 1..k`, one-based.
    pub sigma: Vec<usize>,
    pub base_diameter: u32,
    pub link_diameter: u32,
    pub base_vertices: usize,
    /// Central vertex of the junction copy holding `t_i` (copy 5 of `E_i`).
    pub u_centers: Vec<VertexId>,
    /// Central vertex of the junction copy holding `b_i` (copy 9 of `E_i`).
    pub v_centers: Vec<VertexId>,
    /// Central vertex of the bottom copy of `H_i`.
    pub handle_centers: Vec<VertexId>,
    /// Central vertices of copies that are not junctions.
    pub row_centers: Vec<VertexId>,
    /// Free ends of the left and the right row.
    pub left_end: VertexId,
    pub right_end: VertexId,
    pub copies: usize,
    /// `χ` of the four-dimensional analogue as `a·χ(M) + b`.
    pub symbolic_chi: SymbolicChi,
}

#[derive(Clone, Debug)]
pub struct Encoded {
    /// Labeled `copy/base-label`.
    pub complex: SimplicialComplex,
    pub truth: GroundTruth,
}

/// Checks that `sigma` is a one-based permutation.
pub fn check_permutation(sigma: &[usize]) -> Result<(), EncodeError> {
    let mut seen = vec![false; sigma.len() + 1];
    for &s in sigma {
        if s == 0 || s > sigma.len() || seen[s] {
            return Err(EncodeError::InvalidPermutation(sigma.to_vec()));
        }
        seen[s] = true;
    }
    if sigma.is_empty() {
        return Err(EncodeError::InvalidPermutation(vec![]));
    }
    Ok(())
}

/// `T_σ`: the long row `R_{15k} # E_1 # … # E_k # R_{14k}`, then for each `i`
/// a copy of `H` summed onto `t_i` and handled onto `b_{σ(i)}`.
pub fn encode(sigma: &[usize], params: &ConstructionParams, base: &BaseBlock) -> Result<Encoded, EncodeError> {
    check_permutation(sigma)?;
    params.validate()?;
    let k = sigma.len();
    let left_len = params.left_row_factor * k;
    let right_len = params.right_row_factor * k;
    // The free end of the left row has to be a `u` so it meets `E_1.u`
    // through the identity.
    let first = if left_len % 2 == 0 { Site::V } else { Site::U };
    let mut n = make_row_from(base, left_len, "L", first)?;
    let left_end = n.port_role("u")?;
    let mut tail = n.port_role("v")?;
    for i in 1..=k {
        let e = make_e(base)?.prefixed(&format!("E{i}"));
        let (eu, ev) = (e.port_role("u")?, e.port_role("v")?);
        n = join(base, n, &tail, e, &eu)?;
        tail = ev;
    }
    let right = make_row_from(base, right_len, "R", Site::U)?;
    let (ru, rv) = (right.port_role("u")?, right.port_role("v")?);
    n = join(base, n, &tail, right, &ru)?;
    let right_end = rv;
    for (i, &j) in sigma.iter().enumerate() {
        let h = make_h(base)?.prefixed(&format!("H{}", i + 1));
        let (hu, hv) = (h.port_role("u")?, h.port_role("v")?);
        n = join(base, n, &format!("E{}.top2.u", i + 1), h, &hu)?;
        n = handle(base, n, &hv, &format!("E{j}.bottom2.u"))?;
    }

    let copies = n.copy_names.len();
    debug_assert_eq!(copies, (params.left_row_factor + 17 + params.right_row_factor + 3) * k);
    let center = |copy: &str| -> Result<VertexId, EncodeError> {
        let c = n.copy_index(copy).ok_or_else(|| EncodeError::UnknownRole(copy.to_string()))?;
        n.find(c, base.center).ok_or_else(|| EncodeError::UnknownRole(format!("{copy} center")))
    };
    let mut truth = GroundTruth {
        sigma: sigma.to_vec(),
        base_diameter: base.diameter,
        link_diameter: base.link_diameter,
        base_vertices: base.vertex_count(),
        u_centers: vec![],
        v_centers: vec![],
        handle_centers: vec![],
        row_centers: vec![],
        left_end: n.role(&left_end)?,
        right_end: n.role(&right_end)?,
        copies,
        symbolic_chi: n.symbolic_chi,
    };
    for i in 1..=k {
        truth.u_centers.push(center(&format!("E{i}.r5"))?);
        truth.v_centers.push(center(&format!("E{i}.r9"))?);
        truth.handle_centers.push(center(&format!("H{i}.bottom"))?);
        truth.row_centers.push(center(&format!("E{i}.r7"))?);
        truth.row_centers.push(center(&format!("L{}", left_len / 2 + i))?);
        truth.row_centers.push(center(&format!("R{}", right_len / 2 + i))?);
    }
    Ok(Encoded { complex: n.labeled(base), truth })
}

/// Parameters of the characteristic-target row: `k` copies, the last
/// `plain` of them without a handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiTargetPlan {
    pub target: i64,
    pub base_chi: i64,
    pub k: i64,
    pub plain: i64,
    pub symbolic: SymbolicChi,
}

/// Smallest target the scheme reaches for base characteristic `m`.
pub fn chi_target_threshold(m: i64) -> i64 {
    (m - 6) * (m - 4) / 2 + 2
}

/// Solves `k(m−4)+2 ≤ s < (k+1)(m−4)+2` and the number of handle-free copies.
pub fn plan_chi_target(s: i64, m: i64) -> Result<ChiTargetPlan, EncodeError> {
    if m <= 4 || m % 2 != 0 || s % 2 != 0 {
        return Err(EncodeError::InvalidParams(format!(
            "need even s and even base characteristic above 4, got s={s}, m={m}"
        )));
    }
    let threshold = chi_target_threshold(m);
    if s < threshold {
        return Err(EncodeError::TargetUnreachable { target: s, base: m, threshold });
    }
    let k = (s - 2) / (m - 4);
    let plain = (s - k * (m - 4) - 2) / 2;
    if plain > k {
        return Err(EncodeError::TargetUnreachable { target: s, base: m, threshold });
    }
    let handled = SymbolicChi::BASE.handle(0);
    let mut chi = if k - plain > 0 { handled } else { SymbolicChi::BASE };
    for j in 1..k {
        let next = if j < k - plain { handled } else { SymbolicChi::BASE };
        chi = chi.sum(next, 0);
    }
    debug_assert_eq!(chi.eval(m), s);
    Ok(ChiTargetPlan { target: s, base_chi: m, k, plain, symbolic: chi })
}

#[derive(Clone, Debug)]
pub struct ChiTarget {
    pub plan: ChiTargetPlan,
    pub complex: SimplicialComplex,
    /// Face-count characteristic of the built three-dimensional complex.
    pub measured_chi: i64,
}

/// Builds the characteristic-target row from copies of `base`: the first
/// `k − plain` copies carry a handle between `v` and `u`, consecutive copies
/// are glued from `v′` to `u′`.
pub fn make_chi_target(s: i64, m: i64, base: &BaseBlock) -> Result<ChiTarget, EncodeError> {
    let plan = plan_chi_target(s, m)?;
    if base.u_prime == base.u || base.v_prime == base.v {
        return Err(EncodeError::RoleLinkNotFound("u'"));
    }
    let piece = |j: i64| -> Result<Block, EncodeError> {
        let name = format!("g{j}");
        let b = Block::single(base, &name);
        if j <= plan.k - plan.plain {
            handle(base, b, &format!("{name}.v"), &format!("{name}.u"))
        } else {
            Ok(b)
        }
    };
    let mut row = piece(1)?;
    for j in 2..=plan.k {
        row = join(base, row, &format!("g{}.v'", j - 1), piece(j)?, &format!("g{j}.u'"))?;
    }
    debug_assert_eq!(row.symbolic_chi, plan.symbolic);
    let complex = row.labeled(base);
    let measured_chi = complex.euler_characteristic();
    Ok(ChiTarget { plan, complex, measured_chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate_closed_pseudomanifold;
    use crate::flagcheck::is_fns;

    #[test]
    fn two_cell_row_has_226_vertices() {
        let seed = BaseBlock::cell600().unwrap();
        let row = make_row(&seed, 2, "c").unwrap();
        assert_eq!(row.complex.vertex_count(), 226);
        assert!(is_fns(&row.complex));
        assert_eq!(row.complex.euler_characteristic(), 0);
    }

    #[test]
    fn row_ports_follow_the_alternation() {
        let seed = BaseBlock::cell600().unwrap();
        for a in 1..6 {
            let row = make_row(&seed, a, "c").unwrap();
            assert_eq!(row.ports["u"], "c1.u");
            let end = row.port("v").unwrap();
            let want = if a % 2 == 0 { seed.u } else { seed.v };
            assert_eq!(row.origin[end as usize], if a == 1 { seed.v } else { want });
        }
    }

    #[test]
    fn base_block_roles() {
        let base = make_base_block(9).unwrap();
        assert!(base.diameter >= 9);
        let g = base.complex.skeleton_graph();
        let du = bfs_distances(&g, base.u, None);
        assert_eq!(du[base.v as usize], base.diameter);
        assert_eq!(du[base.w as usize], base.diameter.div_ceil(2));
        assert_eq!(base.link_diameter, 3);
        assert_eq!(base.link_maps(base.v, base.u).len(), 120);
    }

    #[test]
    fn gadgets_count_copies() {
        let base = base_block_of_length(&BaseBlock::cell600().unwrap(), 3).unwrap();
        let e = make_e(&base).unwrap();
        assert_eq!(e.copy_names.len(), 17);
        assert!(is_fns(&e.complex));
        let h = make_h(&base).unwrap();
        assert_eq!(h.copy_names.len(), 3);
        assert_eq!(h.symbolic_chi, SymbolicChi { n_coeff: 3, constant: -4 });
    }

    #[test]
    fn chi_target_plans() {
        // m = 10: threshold 14; s = 14 is a pure handled row of 2.
        let p = plan_chi_target(14, 10).unwrap();
        assert_eq!((p.k, p.plain), (2, 0));
        let p = plan_chi_target(18, 10).unwrap();
        assert_eq!((p.k, p.plain), (2, 2));
        assert_eq!(p.symbolic.eval(10), 18);
        assert!(matches!(plan_chi_target(12, 10), Err(EncodeError::TargetUnreachable { .. })));
    }

    #[test]
    fn chi_target_builds_a_closed_complex() {
        let base = base_block_of_length(&BaseBlock::cell600().unwrap(), 3).unwrap();
        let t = make_chi_target(16, 10, &base).unwrap();
        assert_eq!(t.measured_chi, 0);
        assert!(validate_closed_pseudomanifold(&t.complex).is_closed_pseudomanifold());
        assert!(is_fns(&t.complex));
    }
}
