use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use etf_forge::flat::Realness;
use etf_forge::params::{
    admissible, asymptotic_series, enumerate_families, quadratic_residual, recover_design_params, AdmissibilityVerdict,
    Family, Recovery,
};

struct PrintedRow {
    m: u64,
    n: u64,
    k: u64,
    v: u64,
    r: u64,
    real: bool,
    labels: Vec<String>,
}

fn printed_table() -> Vec<PrintedRow> {
    let path = format!("{}/tests/fixtures/family_table.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| {
            let f: Vec<&str> = line.split('|').collect();
            PrintedRow {
                m: f[0].parse().unwrap(),
                n: f[1].parse().unwrap(),
                k: f[2].parse().unwrap(),
                v: f[3].parse().unwrap(),
                r: f[4].parse().unwrap(),
                real: f[5] == "real",
                labels: f[6].split("; ").map(str::to_owned).collect(),
            }
        })
        .collect()
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[test]
fn enumerated_table_matches_the_printed_one() {
    let printed = printed_table();
    let rows = enumerate_families(100);
    assert_eq!(rows.len(), printed.len());
    for (row, p) in rows.iter().zip(&printed) {
        assert_eq!((row.m, row.n, row.k, row.v), (p.m, p.n, p.k, p.v));
        assert_eq!(row.realness == Realness::Real, p.real, "{}x{}", p.m, p.n);
        if (p.m, p.n) == (82, 451) {
            // Printed as 19; (41 - 1)/(5 - 1) = 10 and N = v(r + 1) = 451.
            assert_eq!(row.r, 10);
            assert_eq!(row.v * (row.r + 1), row.n);
        } else {
            assert_eq!(row.r, p.r, "{}x{}", p.m, p.n);
        }
        let ours: Vec<String> = row.constructions.iter().map(Family::to_string).collect();
        let extra: Vec<&str> = ours.iter().filter(|l| !p.labels.contains(l)).map(String::as_str).collect();
        assert!(p.labels.iter().all(|l| ours.contains(l)), "{}x{} lost a label", p.m, p.n);
        let expected_extra: &[&str] = match (p.m, p.n) {
            (12, 45) => &["Unital with q=2"],
            (63, 280) => &["4-blocks of v=28"],
            _ => &[],
        };
        assert_eq!(extra, expected_extra, "{}x{}", p.m, p.n);
    }
}

#[test]
fn every_row_recovers_its_own_parameters() {
    for row in enumerate_families(100) {
        let Recovery::Steiner(p) = recover_design_params(row.m, row.n).unwrap() else {
            panic!("{}x{} not recovered", row.m, row.n);
        };
        assert_eq!(p.integers(), Some((row.v, row.m, row.r, row.k)));
        assert_eq!(p.alpha, BigRational::new(BigInt::from(1), BigInt::from(row.r)));
        assert!(quadratic_residual(row.m, row.n, &p.v).is_zero());
        assert!(row.redundancy_bounds_hold(), "{}x{}", row.m, row.n);
        assert!(matches!(admissible(row.k, row.v), AdmissibilityVerdict::KnownExists { .. }));
    }
}

#[test]
fn recovery_agrees_with_design_counting() {
    // v, k -> (M, N) by counting, then back.
    for k in 2..=9u64 {
        for v in k + 1..=200 {
            if (v - 1) % (k - 1) != 0 || (v * (v - 1)) % (k * (k - 1)) != 0 {
                continue;
            }
            let r = (v - 1) / (k - 1);
            let (m, n) = (v * (v - 1) / (k * (k - 1)), v * (r + 1));
            if m < 2 {
                continue;
            }
            match recover_design_params(m, n).unwrap() {
                Recovery::Steiner(p) => assert_eq!(p.integers(), Some((v, m, r, k))),
                other => panic!("({k}, {v}): {other}"),
            }
        }
    }
}

#[test]
fn non_steiner_dimensions() {
    let Recovery::NotSteiner(ns) = recover_design_params(19, 76).unwrap() else { panic!() };
    let (v, r, k) = ns.candidates.unwrap();
    assert_eq!(v, BigRational::new(BigInt::from(38), BigInt::from(3)));
    assert_eq!(r, int(5));
    assert_eq!(k, BigRational::new(BigInt::from(10), BigInt::from(3)));
    // The candidate v still solves the quadratic.
    assert!(quadratic_residual(19, 76, &v).is_zero());

    // A real ETF size that no Steiner system gives: 6x16 complement.
    assert!(matches!(recover_design_params(10, 16).unwrap(), Recovery::NotSteiner(_)));
}

#[test]
fn known_nonexistent_parameters() {
    for (k, v) in [(6u64, 16u64), (6, 21), (6, 36), (6, 46), (7, 43)] {
        assert_eq!(admissible(k, v), AdmissibilityVerdict::KnownNonexistent, "({k}, {v})");
    }
    // (6, 36) sits behind a 42 x 288 frame.
    let Recovery::Steiner(p) = recover_design_params(42, 288).unwrap() else { panic!() };
    assert_eq!(p.integers(), Some((36, 42, 7, 6)));
    assert_eq!(p.verdict(), Some(AdmissibilityVerdict::KnownNonexistent));
}

#[test]
fn admissibility_examples() {
    assert!(matches!(admissible(3, 8), AdmissibilityVerdict::Inadmissible { .. }));
    assert!(matches!(admissible(4, 10), AdmissibilityVerdict::Inadmissible { .. }));
    assert_eq!(admissible(4, 28).to_string(), "admissible-known-exists (4-blocks of v=28; Unital with q=3; Denniston with r=2, s=3)");
    assert_eq!(admissible(6, 66), AdmissibilityVerdict::Unknown);
    assert!(matches!(admissible(3, 15), AdmissibilityVerdict::KnownExists { .. }));
}

#[test]
fn series_redundancies_approach_k() {
    for k in 2..=9u64 {
        let mut previous = None;
        for j in 1..=40 {
            let [a, b] = asymptotic_series(k, j).unwrap();
            for s in [&a, &b] {
                assert_eq!(s.redundancy, Ratio::new(s.n, s.m));
                assert!(s.redundancy > Ratio::from_integer(k));
                let Recovery::Steiner(p) = recover_design_params(s.m, s.n).unwrap() else { panic!() };
                assert_eq!(p.integers().map(|t| (t.0, t.3)), Some((s.v, k)));
                assert_eq!(p.integers().unwrap().2 + 1, s.hadamard_order);
            }
            let gap = a.redundancy - Ratio::from_integer(k);
            if let Some(prev) = previous {
                assert!(gap < prev);
            }
            previous = Some(gap);
        }
    }
    assert!(asymptotic_series(1, 1).is_err());
    assert!(asymptotic_series(3, 0).is_err());
}
