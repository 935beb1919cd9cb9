use flagstar::encoder::{make_row, BaseBlock};
use flagstar::generators::cell600_boundary;
use flagstar::io::{canonical_serialize, parse_any, read_complex, write_complex, IoError};

#[test]
fn files_round_trip_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let base = BaseBlock::cell600().unwrap();
    let row = make_row(&base, 2, "x").unwrap().labeled(&base);
    for json in [false, true] {
        let path = dir.path().join(if json { "row.json" } else { "row.cplx" });
        write_complex(&path, &row, json).unwrap();
        let back = read_complex(&path).unwrap();
        assert_eq!(back.sorted_facets(), row.sorted_facets());
        assert_eq!(back.labels(), row.labels());
        assert_eq!(canonical_serialize(&back), canonical_serialize(&row));
    }
}

#[test]
fn serialization_is_stable() {
    let (c, _) = cell600_boundary();
    let a = canonical_serialize(&c);
    assert_eq!(a, canonical_serialize(&parse_any(&a).unwrap()));
    assert!(a.starts_with("dim 3\nvertices 120\n"));
    assert_eq!(a.lines().count(), 2 + 120 + 1 + 600);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# a path of length one\ndim 1\n\nvertices 2\n0 a\n1 b\nfacets 1\n# the edge\n0 1\n";
    let k = parse_any(text).unwrap();
    assert_eq!(k.vertex_count(), 2);
    assert_eq!(k.label(1), Some("b"));
}

#[test]
fn bad_inputs() {
    assert!(matches!(read_complex(std::path::Path::new("/nonexistent/x.cplx")), Err(IoError::Io(_))));
    assert!(matches!(parse_any("{\"dim\": 1}"), Err(IoError::Json(_))));
    assert!(matches!(parse_any("dim 1\nvertices 2\n0\n5\nfacets 1\n0 1\n"), Err(IoError::Parse { .. })));
    assert!(matches!(
        parse_any("dim 1\nvertices 2\n0\n1\nfacets 1\n0 1\nextra\n"),
        Err(IoError::Parse { line: 7, .. })
    ));
}
