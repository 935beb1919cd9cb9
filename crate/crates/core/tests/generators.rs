use flagstar::complex::graph::{diameter, diameter_brute_force};
use flagstar::complex::{automorphism_sign, coherent_orientation, iso_search, validate_closed_pseudomanifold, FVector};
use flagstar::flagcheck::{self, has_induced_square, is_flag, is_fns, Witness};
use flagstar::generators::*;

#[test]
fn icosahedron_matches_known_counts() {
    let ico = icosahedron();
    assert_eq!(ico.f_vector(), FVector(vec![12, 30, 20]));
    assert_eq!(ico.euler_characteristic(), 2);
    assert!(is_fns(&ico));
    assert!(validate_closed_pseudomanifold(&ico).is_manifold_like());
    let pentagon = cycle(5).unwrap();
    for v in 0..12 {
        let link = ico.link(v).unwrap();
        assert_eq!(iso_search(&link, &pentagon, 1).unwrap().len(), 1);
    }
    assert_eq!(diameter(&ico.skeleton_graph()).unwrap().value, 3);
    assert_eq!(iso_search(&ico, &ico, usize::MAX).unwrap().len(), 120);
}

#[test]
fn cell600_counts() {
    let (c, _) = cell600_boundary();
    assert_eq!(c.f_vector(), FVector(vec![120, 720, 1200, 600]));
    assert_eq!(c.euler_characteristic(), 0);
    let g = c.skeleton_graph();
    assert!((0..120).all(|v| g.degree(v) == 12));
    for e in c.faces_of_size(2) {
        let star = c.facets().filter(|f| f.contains(&e[0]) && f.contains(&e[1])).count();
        assert_eq!(star, 5);
    }
}

#[test]
fn cell600_is_a_flag_no_square_sphere() {
    let (c, _) = cell600_boundary();
    assert!(is_fns(&c));
    assert!(flagcheck::oracle::is_flag(&c));
    let r = validate_closed_pseudomanifold(&c);
    assert!(r.is_manifold_like(), "{r:?}");
    assert!(r.orientable);
    assert_eq!(r.links_spherical, Some(true));
}

#[test]
fn cell600_links_are_icosahedra() {
    let (c, _) = cell600_boundary();
    let ico = icosahedron();
    for v in 0..120 {
        let link = c.link(v).unwrap();
        assert_eq!(iso_search(&link, &ico, 1).unwrap().len(), 1, "vertex {v}");
    }
}

#[test]
fn cell600_diameter_is_five() {
    let (c, _) = cell600_boundary();
    let g = c.skeleton_graph();
    let fast = diameter(&g).unwrap();
    assert_eq!(fast.value, 5);
    assert_eq!(diameter_brute_force(&g).unwrap().value, 5);
    let layers = {
        let d = flagstar::complex::bfs_distances(&g, 0, None);
        (0..=5).map(|r| d.iter().filter(|&&x| x == r).count()).collect::<Vec<_>>()
    };
    assert_eq!(layers, vec![1, 12, 32, 42, 32, 1]);
}

#[test]
fn mirror_reverses_orientation() {
    let (c, mirror) = cell600_boundary();
    let o = coherent_orientation(&c).unwrap();
    assert_eq!(automorphism_sign(&c, &o, &mirror.map).unwrap(), -1);
    let identity: Vec<u32> = (0..120).collect();
    assert_eq!(automorphism_sign(&c, &o, &identity).unwrap(), 1);
    let twice: Vec<u32> = mirror.map.iter().map(|&x| mirror.map[x as usize]).collect();
    assert_eq!(twice, identity);
    let fixed = (0..120).filter(|&v| mirror.map[v] == v as u32).count();
    // Frozen from enumeration: the points with last coordinate zero.
    assert_eq!(fixed, 30);
}

#[test]
fn octahedron_is_flag_with_squares() {
    let oct = cross_polytope_boundary(3).unwrap();
    assert!(is_flag(&oct).0);
    let (found, w) = has_induced_square(&oct);
    assert!(found);
    assert!(matches!(w, Some(Witness::InducedCycle(c)) if c.len() == 4));
    assert!(flagcheck::oracle::has_induced_square(&oct));
}

#[test]
fn suspended_pentagon_has_a_square() {
    let s = suspension(&cycle(5).unwrap());
    assert!(has_induced_square(&s).0);
    assert_eq!(s.euler_characteristic(), 2);
}

#[test]
fn simplex_boundary_is_not_flag() {
    let t = simplex_boundary(3).unwrap();
    assert_eq!(is_flag(&t).1, Some(Witness::MissingClique(vec![0, 1, 2, 3])));
}
