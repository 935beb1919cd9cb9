use flagstar::complex::{iso_search, validate_closed_pseudomanifold, FVector, LinkIso, VertexId};
use flagstar::encoder::{make_row, BaseBlock};
use flagstar::flagcheck::is_fns;
use flagstar::generators::{cell600_boundary, icosahedron};
use flagstar::surgery::{
    chi_after_handle, chi_after_sum, euler_identity_check, site_distance, star_connected_sum, star_handle, LabelPolicy,
    SurgeryError, SurgeryOptions,
};

#[test]
fn two_cells_glue_to_226_vertices() {
    let (c, _) = cell600_boundary();
    let iso = LinkIso::matching(&c, 0, &c, 0, |x| x, |y| y).unwrap();
    let g = star_connected_sum(&c, 0, &c, 0, &iso, &SurgeryOptions::default()).unwrap();
    let k = &g.complex;
    // 2·120 − 2 removed, 12 identified.
    assert_eq!(k.vertex_count(), 226);
    assert_eq!(k.f_vector(), FVector(vec![226, 1386, 2320, 1160]));
    euler_identity_check(chi_after_sum(0, 0, 2), k).unwrap();
    assert!(is_fns(k));
    assert!(validate_closed_pseudomanifold(k).is_manifold_like());
    assert_eq!(g.sphere.len(), 12);
    assert_eq!(g.iso_sign, Some(1));
    assert_eq!(k.label(g.left_map[1].unwrap()), Some("left/1"));
}

#[test]
fn identity_gluing_is_orientation_preserving() {
    let (c, _) = cell600_boundary();
    let iso = LinkIso::matching(&c, 0, &c, 0, |x| x, |y| y).unwrap();
    let opts = SurgeryOptions { enforce_orientation_reversing: true, ..SurgeryOptions::default() };
    assert_eq!(star_connected_sum(&c, 0, &c, 0, &iso, &opts).unwrap_err(), SurgeryError::OrientationNotReversed(1));
}

#[test]
fn mirror_gluing_reverses_orientation() {
    let (c, mirror) = cell600_boundary();
    let v = (0..120).find(|&v| mirror.map[v as usize] == v).unwrap() as VertexId;
    let iso = LinkIso::matching(&c, v, &c, v, |x| x, |y| mirror.map[y as usize]).unwrap();
    let opts = SurgeryOptions { enforce_orientation_reversing: true, ..SurgeryOptions::default() };
    let g = star_connected_sum(&c, v, &c, v, &iso, &opts).unwrap();
    assert_eq!(g.iso_sign, Some(-1));
    assert!(is_fns(&g.complex));
}

#[test]
fn non_fns_input_is_rejected_when_enforced() {
    let oct = flagstar::generators::cross_polytope_boundary(3).unwrap();
    let iso = LinkIso::matching(&oct, 0, &oct, 0, |x| x, |y| y).unwrap();
    let opts = SurgeryOptions { enforce_fns: true, ..SurgeryOptions::default() };
    assert!(matches!(star_connected_sum(&oct, 0, &oct, 0, &iso, &opts), Err(SurgeryError::InputNotFns(_))));
}

#[test]
fn mismatched_links_are_rejected() {
    let ico = icosahedron();
    let (c, _) = cell600_boundary();
    assert!(LinkIso::matching(&ico, 0, &c, 0, |x| x, |y| y).is_err());
    let bogus = LinkIso::new(0, 0, vec![(1, 1)]);
    assert!(matches!(
        star_connected_sum(&ico, 0, &ico, 0, &bogus, &SurgeryOptions::default()),
        Err(SurgeryError::Complex(_))
    ));
}

#[test]
fn handle_on_a_row_of_three_cells() {
    let base = BaseBlock::cell600().unwrap();
    let block = make_row(&base, 3, "x").unwrap();
    let row = block.labeled(&base);
    let (a, b) = (block.port("u").unwrap(), block.port("v").unwrap());
    let d = site_distance(&row, a, b, 100);
    assert!(d >= 7, "distance {d}");
    let (la, lb) = (row.link(a).unwrap(), row.link(b).unwrap());
    let maps = iso_search(&la, &lb, usize::MAX).unwrap();
    assert_eq!(maps.len(), 120);
    let iso = LinkIso::from_local(a, b, &la, &lb, &maps[0]);
    let opts = SurgeryOptions { enforce_fns: true, labels: LabelPolicy::Keep, ..SurgeryOptions::default() };
    let h = star_handle(&row, a, b, &iso, &opts).unwrap();
    assert_eq!(h.complex.vertex_count(), row.vertex_count() - 2 - 12);
    assert_eq!(h.distance, d.min(7));
    euler_identity_check(chi_after_handle(row.euler_characteristic(), 2), &h.complex).unwrap();
    assert!(is_fns(&h.complex));
    assert!(validate_closed_pseudomanifold(&h.complex).is_closed_pseudomanifold());
}

#[test]
fn euler_identity_reports_both_values() {
    let ico = icosahedron();
    assert_eq!(euler_identity_check(3, &ico).unwrap_err(), SurgeryError::IdentityViolated { expected: 3, found: 2 });
}
