//! The three worked examples, transcribed entry by entry into
//! `tests/fixtures/`, against freshly assembled frames.

use std::collections::BTreeSet;

use etf_forge::designs::{incidence_transpose, pair_design, projective_lines};
use etf_forge::etf::{steiner_etf, verify_equiangular, verify_tight, EtfMatrix, ScaleSq};
use etf_forge::flat::{dft_matrix, sylvester, Phase};

/// Unscaled entries: `0` is absent, `+`/`-` are +-1, `1`/`w`/`w2` are powers
/// of `exp(2 pi i/3)`.
fn fixture(name: &str) -> Vec<Vec<Option<Phase>>> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| {
            line.split_whitespace()
                .map(|tok| match tok {
                    "0" => None,
                    "+" | "1" => Some(Phase::ONE),
                    "-" => Some(Phase::MINUS_ONE),
                    "w" => Some(Phase::new(1, 3)),
                    "w2" => Some(Phase::new(2, 3)),
                    other => panic!("unknown token {other}"),
                })
                .collect()
        })
        .collect()
}

fn integer_gram(etf: &EtfMatrix) -> Vec<Vec<i64>> {
    let pattern = etf.unscaled_pattern();
    let n = etf.cols();
    let value = |p: Option<Phase>| p.map_or(0, |p| p.sign().unwrap());
    (0..n)
        .map(|a| (0..n).map(|b| pattern.iter().map(|row| value(row[a]) * value(row[b])).sum()).collect())
        .collect()
}

#[test]
fn six_by_sixteen_matches_entry_for_entry() {
    let etf = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
    assert_eq!(etf.unscaled_pattern(), fixture("golden_6x16.txt"));
    assert_eq!(etf.scale_sq(), ScaleSq::new(1, 3));
    assert!(etf.is_real());
}

#[test]
fn six_by_sixteen_exact_frame_operator() {
    let etf = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
    let pattern = etf.unscaled_pattern();
    let value = |p: Option<Phase>| p.map_or(0i64, |p| p.sign().unwrap());
    for i in 0..6 {
        for j in 0..6 {
            let s: i64 = (0..16).map(|n| value(pattern[i][n]) * value(pattern[j][n])).sum();
            assert_eq!(s, if i == j { 8 } else { 0 }, "({i}, {j})");
        }
    }
    let report = verify_tight(&etf, 1e-12);
    assert!(report.passed);
    assert_eq!(report.exact, Some(true));
}

#[test]
fn six_by_sixteen_inner_products() {
    let etf = steiner_etf(&pair_design(4).unwrap(), true).unwrap();
    let g = integer_gram(&etf);
    let mut same = BTreeSet::new();
    let mut cross = BTreeSet::new();
    for (a, row) in g.iter().enumerate() {
        assert_eq!(row[a], 3);
        for (b, &value) in row.iter().enumerate().skip(a + 1) {
            if a / 4 == b / 4 {
                same.insert(value);
            } else {
                cross.insert(value);
            }
        }
    }
    // Unscaled values; the scale squared is 1/3.
    assert_eq!(same, BTreeSet::from([-1]));
    assert_eq!(cross, BTreeSet::from([-1, 1]));

    let report = verify_equiangular(&etf, 1e-12);
    let exact = report.exact.unwrap();
    assert_eq!(exact.same_block, same);
    assert_eq!(exact.cross_block, cross);
    assert_eq!(exact.denominator, 3);
}

#[test]
fn six_by_sixteen_built_from_its_ingredients() {
    // The incidence pattern and the order-4 Sylvester matrix shown alongside
    // the example.
    let at = incidence_transpose(&pair_design(4).unwrap()).unwrap();
    assert_eq!(
        at.to_dense(),
        vec![
            vec![1, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1]
        ]
    );
    let h = sylvester(2).unwrap();
    let signs: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| h.phase(i, j).sign().unwrap()).collect()).collect();
    assert_eq!(signs, vec![vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1], vec![1, -1, -1, 1]]);
}

#[test]
fn three_by_nine_matches_entry_for_entry() {
    let etf = steiner_etf(&pair_design(3).unwrap(), false).unwrap();
    assert_eq!(etf.unscaled_pattern(), fixture("golden_3x9.txt"));
    assert_eq!(etf.scale_sq(), ScaleSq::new(1, 2));
    assert!(!etf.is_real());
    // The flat matrix: rows 1, (w^2, w), (w, w^2).
    let h = dft_matrix(3).unwrap();
    let w = |k| Phase::new(k, 3);
    let rows: Vec<Vec<Phase>> = (0..3).map(|i| (0..3).map(|j| h.phase(i, j)).collect()).collect();
    assert_eq!(rows, vec![vec![w(0), w(0), w(0)], vec![w(0), w(2), w(1)], vec![w(0), w(1), w(2)]]);
    assert!(verify_tight(&etf, 1e-9).passed);
    let eq = verify_equiangular(&etf, 1e-9);
    assert!(eq.passed);
    assert!((eq.alpha - 0.5).abs() < 1e-15);
}

#[test]
fn fano_frame_matches_entry_for_entry() {
    let etf = steiner_etf(&projective_lines(2, 2).unwrap(), true).unwrap();
    assert_eq!(etf.unscaled_pattern(), fixture("golden_7x28.txt"));
    assert_eq!(etf.scale_sq(), ScaleSq::new(1, 3));
    let tight = verify_tight(&etf, 1e-9);
    assert!(tight.passed);
    assert_eq!(tight.exact, Some(true));
    let eq = verify_equiangular(&etf, 1e-9);
    assert!(eq.passed);
    assert!((eq.alpha - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn different_omitted_row_changes_the_frame_but_not_its_properties() {
    use etf_forge::etf::{assemble_etf, FlatChoice, RowAssignment};
    let design = pair_design(4).unwrap();
    let alt = assemble_etf(&design, &FlatChoice::Shared(sylvester(2).unwrap()), &RowAssignment::OmitRow(3)).unwrap();
    assert_ne!(alt.unscaled_pattern(), fixture("golden_6x16.txt"));
    assert!(verify_tight(&alt, 1e-12).passed);
    assert!(verify_equiangular(&alt, 1e-12).passed);
}
