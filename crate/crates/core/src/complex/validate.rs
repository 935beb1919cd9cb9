//! Closed-pseudomanifold checks with link-level sphere proxies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orientation::{coherent_orientation, ridge_groups};
use super::{ComplexError, FaceList, Graph, SimplicialComplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudomanifoldReport {
    pub pure: bool,
    pub ridges_in_two_facets: bool,
    /// 1-skeleton connected.
    pub connected: bool,
    /// Facets connected through ridges.
    pub strongly_connected: bool,
    pub vertex_links_connected: bool,
    pub orientable: bool,
    /// Every vertex link passes the sphere proxy; `None` when links have
    /// dimension 3 or more and no proxy is attempted.
    pub links_spherical: Option<bool>,
    /// First failure found, for diagnostics.
    pub problem: Option<String>,
}

impl PseudomanifoldReport {
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.pure && self.ridges_in_two_facets && self.connected && self.strongly_connected
    }

    /// Closed pseudomanifold whose vertex links are connected and spherical
    /// wherever that could be checked.
    pub fn is_manifold_like(&self) -> bool {
        self.is_closed_pseudomanifold() && self.vertex_links_connected && self.links_spherical != Some(false)
    }

    pub fn require_closed(&self) -> Result<(), ComplexError> {
        if self.is_closed_pseudomanifold() {
            Ok(())
        } else {
            Err(ComplexError::NotPseudomanifold(self.problem.clone().unwrap_or_default()))
        }
    }
}

/// Report for a raw list of maximal faces, which may be non-pure.
pub fn validate_facet_list(faces: &FaceList) -> PseudomanifoldReport {
    if !faces.is_pure() || faces.faces().is_empty() {
        return PseudomanifoldReport {
            pure: false,
            ridges_in_two_facets: false,
            connected: faces.skeleton_graph().is_connected(),
            strongly_connected: false,
            vertex_links_connected: false,
            orientable: false,
            links_spherical: None,
            problem: Some("maximal faces have different dimensions".into()),
        };
    }
    match SimplicialComplex::from_facets(faces.faces()) {
        Ok(k) => validate_closed_pseudomanifold(&k),
        Err(e) => PseudomanifoldReport {
            pure: false,
            ridges_in_two_facets: false,
            connected: false,
            strongly_connected: false,
            vertex_links_connected: false,
            orientable: false,
            links_spherical: None,
            problem: Some(e.to_string()),
        },
    }
}

pub fn validate_closed_pseudomanifold(k: &SimplicialComplex) -> PseudomanifoldReport {
    let mut problem = None;
    let groups = ridge_groups(k);
    let ridges_in_two_facets = match groups.iter().find(|g| g.len() != 2) {
        Some(g) => {
            problem = Some(format!("a ridge of facet {} lies in {} facets", g[0].0, g.len()));
            false
        }
        None => true,
    };
    let strongly_connected = {
        let m = k.facet_count();
        let mut parent: Vec<u32> = (0..m as u32).collect();
        for g in &groups {
            for w in g.windows(2) {
                union(&mut parent, w[0].0, w[1].0);
            }
        }
        (0..m as u32).all(|f| find(&mut parent, f) == find(&mut parent, 0))
    };
    let connected = k.skeleton_graph().is_connected();
    if !connected && problem.is_none() {
        problem = Some("1-skeleton is disconnected".into());
    }
    let orientable = ridges_in_two_facets && coherent_orientation(k).is_ok();

    let (vertex_links_connected, links_spherical) = if k.dim() == 0 {
        (true, Some(true))
    } else {
        let stars = k.vertex_stars();
        let checks: Vec<(bool, Option<bool>)> = (0..k.vertex_count() as VertexId)
            .into_par_iter()
            .map(|v| match k.link_in(&stars, v) {
                Ok(l) => (l.skeleton_graph().is_connected() || l.dim() == 0, sphere_proxy(&l)),
                Err(_) => (false, Some(false)),
            })
            .collect();
        let bad_link = checks.iter().position(|c| !c.0);
        if let (Some(v), None) = (bad_link, &problem) {
            problem = Some(format!("link of vertex {v} is disconnected"));
        }
        let spherical = if checks.iter().any(|c| c.1.is_none()) {
            None
        } else {
            let bad = checks.iter().position(|c| c.1 == Some(false));
            if let (Some(v), None) = (bad, &problem) {
                problem = Some(format!("link of vertex {v} fails the sphere check"));
            }
            Some(bad.is_none())
        };
        (bad_link.is_none(), spherical)
    };
    PseudomanifoldReport {
        pure: true,
        ridges_in_two_facets,
        connected,
        strongly_connected,
        vertex_links_connected,
        orientable,
        links_spherical,
        problem,
    }
}

/// Sphere recognition by dimension: exact up to dimension 2, a homology-free
/// proxy (closed, connected, spherical links, χ = 0) in dimension 3, and
/// `None` above.
pub fn sphere_proxy(k: &SimplicialComplex) -> Option<bool> {
    match k.dim() {
        0 => Some(k.vertex_count() == 2),
        1 => Some(k.skeleton_graph().is_connected() && degrees_all(&k.skeleton_graph(), 2)),
        2 | 3 => {
            let groups = ridge_groups(k);
            if groups.iter().any(|g| g.len() != 2) || !k.skeleton_graph().is_connected() {
                return Some(false);
            }
            let stars = k.vertex_stars();
            for v in 0..k.vertex_count() as VertexId {
                match k.link_in(&stars, v).ok().and_then(|l| sphere_proxy(&l)) {
                    Some(true) => {}
                    _ => return Some(false),
                }
            }
            let want = if k.dim() == 2 { 2 } else { 0 };
            Some(k.euler_characteristic() == want)
        }
        _ => None,
    }
}

fn degrees_all(g: &Graph, d: usize) -> bool {
    (0..g.vertex_count() as VertexId).all(|v| g.degree(v) == d)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb) as usize] = ra.min(rb);
    }
}
