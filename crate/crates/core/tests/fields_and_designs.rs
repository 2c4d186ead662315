use std::collections::HashMap;

use etf_forge::designs::{
    affine_lines, hermitian_unital, pair_design, projective_lines, steiner_triple, verify_design, SteinerSystem,
};
use etf_forge::field::Field;
use proptest::prelude::*;

const PRIME_POWERS_TO_64: [u64; 27] =
    [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64];

#[test]
fn field_axioms_exhaustive_up_to_64() {
    for &q in &PRIME_POWERS_TO_64 {
        let f = Field::of_order(q).unwrap();
        let (zero, one) = (f.zero(), f.one());
        for a in f.elements() {
            assert_eq!(f.add(a, zero), a);
            assert_eq!(f.mul(a, one), a);
            assert_eq!(f.add(a, f.neg(a)), zero);
            if a != zero {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), one, "q = {q}, a = {a}");
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if a != zero && b != zero {
                    assert_ne!(f.mul(a, b), zero, "zero divisor in GF({q})");
                }
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for &q in &PRIME_POWERS_TO_64 {
        let f = Field::of_order(q).unwrap();
        let g = f.primitive_element();
        let mut seen = std::collections::HashSet::new();
        let mut x = f.one();
        for _ in 0..q - 1 {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(x, f.one());
        assert_eq!(seen.len() as u64, q - 1, "GF({q})");
    }
}

/// Independent pair count: every unordered pair of points must appear in
/// exactly one block, and every block must have k distinct points.
fn lambda_one(s: &SteinerSystem) -> bool {
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for block in s.blocks() {
        if block.len() != s.k() {
            return false;
        }
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let key = (a.min(b), a.max(b));
                if a == b {
                    return false;
                }
                *counts.entry(key).or_default() += 1;
            }
        }
    }
    let v = s.v();
    counts.len() == v * (v - 1) / 2 && counts.values().all(|&c| c == 1)
}

fn generated_systems_up_to_100() -> Vec<(String, SteinerSystem)> {
    let mut out = Vec::new();
    for v in 2..=100 {
        out.push((format!("pair {v}"), pair_design(v).unwrap()));
        if matches!(v % 6, 1 | 3) {
            out.push((format!("triple {v}"), steiner_triple(v).unwrap()));
        }
    }
    for (q, n) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2), (9, 2)] {
        out.push((format!("AG({n},{q})"), affine_lines(q, n).unwrap()));
    }
    for (q, n) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2), (9, 2)] {
        out.push((format!("PG({n},{q})"), projective_lines(q, n).unwrap()));
    }
    for q in [2u64, 3, 4] {
        out.push((format!("unital {q}"), hermitian_unital(q).unwrap()));
    }
    out
}

#[test]
fn every_generated_system_covers_each_pair_once() {
    let systems = generated_systems_up_to_100();
    assert!(systems.iter().all(|(_, s)| s.v() <= 100));
    for (name, s) in &systems {
        assert!(lambda_one(s), "{name}");
        assert!(verify_design(s).passed(), "{name}");
        let r = (s.v() - 1) / (s.k() - 1);
        assert_eq!(s.b() * s.k(), s.v() * r, "{name}: vr = bk");
    }
}

#[test]
fn triple_system_counts() {
    for v in [7usize, 9, 13, 15, 19, 21, 25, 27] {
        let s = steiner_triple(v).unwrap();
        assert_eq!(s.b(), v * (v - 1) / 6);
    }
    for v in [2usize, 4, 5, 6, 8, 10, 11, 12] {
        assert!(steiner_triple(v).is_err(), "v = {v}");
    }
}

proptest! {
    #[test]
    fn pair_design_blocks_are_all_pairs(v in 2usize..60) {
        let s = pair_design(v).unwrap();
        prop_assert_eq!(s.b(), v * (v - 1) / 2);
        prop_assert!(lambda_one(&s));
    }

    #[test]
    fn removing_a_block_is_detected(v in prop::sample::select(vec![7usize, 9, 13, 15, 19, 21]), pick in 0usize..1000) {
        let s = steiner_triple(v).unwrap();
        let mut blocks = s.blocks().to_vec();
        blocks.remove(pick % blocks.len());
        let broken = SteinerSystem::from_blocks(v, 3, blocks).unwrap();
        prop_assert!(!verify_design(&broken).passed());
        prop_assert!(!lambda_one(&broken));
    }

    #[test]
    fn json_round_trip_preserves_digest(v in prop::sample::select(vec![7usize, 9, 13, 15])) {
        let s = steiner_triple(v).unwrap();
        let back = SteinerSystem::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.digest(), s.digest());
        prop_assert_eq!(back, s);
    }
}
