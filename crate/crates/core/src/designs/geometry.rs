//! Finite-geometry Steiner systems: lines of AG(n,q) and PG(n,q), and the
//! Hermitian unital in PG(2,q^2).

use std::collections::HashMap;

use super::{check_size, SteinerSystem};
use crate::error::DesignError;
use crate::field::Field;

/// Coordinates of vector `idx` of GF(q)^len; the first coordinate is the most
/// significant base-q digit.
fn unpack(mut idx: u64, q: u64, len: usize) -> Vec<u32> {
    let mut coords = vec![0u32; len];
    for c in coords.iter_mut().rev() {
        *c = (idx % q) as u32;
        idx /= q;
    }
    coords
}

fn pack(coords: &[u32], q: u64) -> u64 {
    coords.iter().fold(0, |acc, &c| acc * q + c as u64)
}

/// Scale so the first nonzero coordinate is 1. `None` for the zero vector.
fn normalize(f: &Field, coords: &[u32]) -> Option<Vec<u32>> {
    let lead = *coords.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead).ok()?;
    Some(coords.iter().map(|&c| f.mul(c, inv)).collect())
}

fn is_normalized(coords: &[u32]) -> bool {
    coords.iter().find(|&&c| c != 0) == Some(&1)
}

fn checked_pow(q: u64, e: u32) -> Result<u64, DesignError> {
    q.checked_pow(e).ok_or(DesignError::TooLarge { v: u64::MAX, max: super::MAX_POINTS })
}

/// Lines of the affine geometry AG(n,q): a (2,q,q^n)-Steiner system.
///
/// Point labels are the base-q values of the coordinate vectors.
pub fn affine_lines(q: u64, n: u32) -> Result<SteinerSystem, DesignError> {
    if n < 2 {
        return Err(DesignError::InvalidDimension(n));
    }
    let v = checked_pow(q, n)?;
    check_size(v)?;
    let field = Field::of_order(q)?;
    let len = n as usize;

    let directions: Vec<Vec<u32>> = (1..v).map(|i| unpack(i, q, len)).filter(|d| is_normalized(d)).collect();
    let mut blocks = Vec::new();
    for d in &directions {
        for start in 0..v {
            let p = unpack(start, q, len);
            let mut line: Vec<usize> = field
                .elements()
                .map(|t| {
                    let pt: Vec<u32> = p.iter().zip(d).map(|(&x, &y)| field.add(x, field.mul(t, y))).collect();
                    pack(&pt, q) as usize
                })
                .collect();
            line.sort_unstable();
            // Each line is reached once from each of its points; keep the
            // copy generated from its smallest point.
            if line[0] == start as usize {
                blocks.push(line);
            }
        }
    }
    SteinerSystem::from_blocks(v as usize, q as usize, blocks)
}

/// Normalized points of PG(dim, field), in increasing base-q order.
fn projective_points(field: &Field, dim: usize) -> Result<Vec<Vec<u32>>, DesignError> {
    let q = field.order() as u64;
    let total = checked_pow(q, dim as u32 + 1)?;
    check_size((total - 1) / (q - 1))?;
    Ok((1..total).map(|i| unpack(i, q, dim + 1)).filter(|c| is_normalized(c)).collect())
}

/// Lines of the projective geometry PG(n,q): a (2,q+1,(q^{n+1}-1)/(q-1))
/// Steiner system.
pub fn projective_lines(q: u64, n: u32) -> Result<SteinerSystem, DesignError> {
    if n < 2 {
        return Err(DesignError::InvalidDimension(n));
    }
    let field = Field::of_order(q)?;
    let points = projective_points(&field, n as usize)?;
    let v = points.len();
    let label: HashMap<&[u32], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();

    let mut covered = vec![false; v * v];
    let mut blocks = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            if covered[a * v + b] {
                continue;
            }
            let mut line = vec![a];
            for t in field.elements() {
                let combo: Vec<u32> =
                    points[a].iter().zip(&points[b]).map(|(&x, &y)| field.add(field.mul(t, x), y)).collect();
                let norm = normalize(&field, &combo).expect("distinct projective points are independent");
                line.push(label[norm.as_slice()]);
            }
            line.sort_unstable();
            for (i, &x) in line.iter().enumerate() {
                for &y in &line[i + 1..] {
                    covered[x * v + y] = true;
                }
            }
            blocks.push(line);
        }
    }
    SteinerSystem::from_blocks(v, q as usize + 1, blocks)
}

struct HermitianCurve {
    field: Field,
    points: Vec<Vec<u32>>,
    on_curve: Vec<bool>,
}

impl HermitianCurve {
    fn new(q: u64) -> Result<Self, DesignError> {
        // Validate q itself before squaring it.
        Field::of_order(q)?;
        let field = Field::of_order(q * q)?;
        let points = projective_points(&field, 2)?;
        let on_curve = points
            .iter()
            .map(|p| p.iter().fold(0, |acc, &x| field.add(acc, field.pow(x, q + 1))) == 0)
            .collect();
        Ok(Self { field, points, on_curve })
    }

    /// For each line of PG(2,q^2), in order of its normalized coefficient
    /// vector, the indices (into `points`) of the curve points on it.
    fn line_meetings(&self) -> Vec<Vec<usize>> {
        let f = &self.field;
        self.points
            .iter()
            .map(|coef| {
                self.points
                    .iter()
                    .enumerate()
                    .filter(|(i, p)| {
                        self.on_curve[*i] && coef.iter().zip(p.iter()).fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x))) == 0
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }
}

/// The classical Hermitian unital: points of PG(2,q^2) on
/// `x0^(q+1) + x1^(q+1) + x2^(q+1) = 0`, blocked by the secant lines.
/// A (2,q+1,q^3+1)-Steiner system.
pub fn hermitian_unital(q: u64) -> Result<SteinerSystem, DesignError> {
    let v = checked_pow(q, 3)? + 1;
    check_size(v)?;
    let curve = HermitianCurve::new(q)?;
    let mut relabel = vec![usize::MAX; curve.points.len()];
    let mut next = 0;
    for (i, &on) in curve.on_curve.iter().enumerate() {
        if on {
            relabel[i] = next;
            next += 1;
        }
    }
    let blocks = curve
        .line_meetings()
        .into_iter()
        .filter(|m| m.len() == q as usize + 1)
        .map(|m| m.into_iter().map(|i| relabel[i]).collect())
        .collect();
    SteinerSystem::from_blocks(next, q as usize + 1, blocks)
}

/// Number of curve points on each line of PG(2,q^2).
pub fn hermitian_line_meetings(q: u64) -> Result<Vec<usize>, DesignError> {
    Ok(HermitianCurve::new(q)?.line_meetings().into_iter().map(|m| m.len()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{incidence_transpose, pair_design, verify_design};
    use crate::error::FieldError;

    fn params(s: &SteinerSystem) -> (usize, usize, usize, Option<usize>) {
        (s.v(), s.k(), s.b(), s.r())
    }

    #[test]
    fn affine_parameters() {
        assert_eq!(params(&affine_lines(2, 2).unwrap()), (4, 2, 6, Some(3)));
        assert_eq!(params(&affine_lines(3, 2).unwrap()), (9, 3, 12, Some(4)));
        assert_eq!(params(&affine_lines(2, 3).unwrap()), (8, 2, 28, Some(7)));
        // AG(2,2) is the complete graph on four points.
        assert_eq!(affine_lines(2, 2).unwrap(), pair_design(4).unwrap());
    }

    #[test]
    fn projective_parameters() {
        assert_eq!(params(&projective_lines(2, 2).unwrap()), (7, 3, 7, Some(3)));
        assert_eq!(params(&projective_lines(3, 2).unwrap()), (13, 4, 13, Some(4)));
        assert_eq!(params(&projective_lines(2, 3).unwrap()), (15, 3, 35, Some(7)));
    }

    #[test]
    fn fano_plane_rows() {
        let at = incidence_transpose(&projective_lines(2, 2).unwrap()).unwrap();
        let rows: Vec<&[usize]> = (0..at.n_rows()).map(|i| at.row(i)).collect();
        let expected: [&[usize]; 7] = [&[0, 1, 2], &[0, 3, 4], &[0, 5, 6], &[1, 3, 5], &[1, 4, 6], &[2, 3, 6], &[2, 4, 5]];
        assert_eq!(rows, expected);
    }

    #[test]
    fn geometries_up_to_100_points_verify() {
        for (q, n) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2), (9, 2)] {
            let s = affine_lines(q, n).unwrap();
            let check = verify_design(&s);
            assert!(check.passed(), "AG({n},{q}): {:?}", check.first_failure());
        }
        for (q, n) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2), (9, 2)] {
            let s = projective_lines(q, n).unwrap();
            let check = verify_design(&s);
            assert!(check.passed(), "PG({n},{q}): {:?}", check.first_failure());
        }
    }

    #[test]
    fn unital_parameters() {
        let u2 = hermitian_unital(2).unwrap();
        assert_eq!(params(&u2), (9, 3, 12, Some(4)));
        assert!(verify_design(&u2).passed());
        let u3 = hermitian_unital(3).unwrap();
        assert_eq!(params(&u3), (28, 4, 63, Some(9)));
        assert!(verify_design(&u3).passed());
    }

    #[test]
    fn hermitian_lines_are_tangent_or_secant() {
        for q in [2u64, 3] {
            let meetings = hermitian_line_meetings(q).unwrap();
            assert_eq!(meetings.len() as u64, q.pow(4) + q * q + 1);
            assert!(meetings.iter().all(|&m| m == 1 || m == q as usize + 1), "q = {q}");
            // One tangent per curve point.
            assert_eq!(meetings.iter().filter(|&&m| m == 1).count() as u64, q.pow(3) + 1);
        }
    }

    #[test]
    fn geometry_errors() {
        assert_eq!(affine_lines(3, 1), Err(DesignError::InvalidDimension(1)));
        assert_eq!(projective_lines(6, 2), Err(DesignError::Field(FieldError::NotPrimePower(6))));
        assert!(matches!(affine_lines(2, 13), Err(DesignError::TooLarge { .. })));
        assert!(matches!(hermitian_unital(17), Err(DesignError::TooLarge { .. })));
    }
}
