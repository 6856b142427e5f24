//! Residue-class data for restricted sets of primitive points and the
//! exact orbit counts behind their densities.
//!
//! A restricted set is a union of residue classes of primitive rows
//! modulo m; the principal congruence subgroup of level m acts on it, and
//! the relative density of the corresponding coset set A* inside
//! SL(n+1, Z/m) is what every restricted statistic converges to. The
//! density is kept as an exact rational end to end.

use crate::error::{Error, Result};
use crate::lattice::PrimitivePoint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Desk-scale cap on the number of candidate matrices the brute-force
/// enumeration is willing to walk (m^{(n+1)^2}).
const BRUTE_FORCE_CAP: u128 = 1_000_000;

/// A modulus m with a set of primitive residue rows in (Z/m)^{n+1}.
///
/// m = 1 represents the unrestricted set; it carries the single zero
/// class every row reduces to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSystem {
    n: usize,
    m: u64,
    classes: Vec<Vec<u64>>,
}

impl ResidueSystem {
    /// The unrestricted system (m = 1).
    pub fn full(n: usize) -> Self {
        ResidueSystem {
            n,
            m: 1,
            classes: vec![vec![0; n + 1]],
        }
    }

    /// Builds a system from class representatives given as integer rows of
    /// length n+1. Rows are reduced mod m and deduplicated; each must be
    /// the reduction of a primitive vector, i.e. gcd(row, m) = 1.
    pub fn new(n: usize, m: u64, class_rows: &[Vec<i64>]) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("modulus must be >= 1"));
        }
        if m == 1 {
            return Ok(Self::full(n));
        }
        if class_rows.is_empty() {
            return Err(Error::invalid(
                "a restricted system (modulus > 1) needs at least one class row",
            ));
        }
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for row in class_rows {
            if row.len() != n + 1 {
                return Err(Error::invalid(format!(
                    "class row {row:?} must have n+1 = {} entries",
                    n + 1
                )));
            }
            let reduced: Vec<u64> = row.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect();
            let g = reduced.iter().fold(m, |g, &x| num_integer::gcd(g, x));
            if g != 1 {
                return Err(Error::invalid(format!(
                    "class row {row:?} is not primitive mod {m} (gcd with modulus = {g})"
                )));
            }
            classes.push(reduced);
        }
        classes.sort();
        classes.dedup();
        Ok(ResidueSystem { n, m, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    pub fn is_full(&self) -> bool {
        self.m == 1
    }

    /// Membership of a row (p₁,…,p_n,q) by reduction mod m.
    pub fn contains_row(&self, row: &[i64]) -> bool {
        if self.m == 1 {
            return true;
        }
        let m = self.m as i64;
        self.classes.iter().any(|class| {
            class
                .iter()
                .zip(row)
                .all(|(&c, &x)| x.rem_euclid(m) as u64 == c)
        })
    }

    /// Membership of a primitive point.
    pub fn contains(&self, pt: &PrimitivePoint) -> bool {
        self.contains_row(&pt.row())
    }
}

/// Exact orbit count of a residue system: the number of cosets #A*, the
/// subgroup index, and their ratio in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCount {
    pub astar: u128,
    pub index: u128,
    pub density: Ratio<u128>,
}

impl OrbitCount {
    pub fn density_f64(&self) -> f64 {
        *self.density.numer() as f64 / *self.density.denom() as f64
    }
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn checked_pow(base: u128, exp: u32, what: &'static str) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::Overflow(what))
}

fn checked_mul(a: u128, b: u128, what: &'static str) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

/// Order of SL(k, Z/m), multiplicative over prime powers:
/// |SL(k, Z/p^e)| = p^{(e-1)(k²-1)} · p^{k(k-1)/2} · ∏_{i=2}^{k} (p^i - 1).
pub fn sl_order(k: usize, m: u64) -> Result<u128> {
    if k < 2 {
        return Err(Error::invalid("sl_order needs k >= 2"));
    }
    if m == 0 {
        return Err(Error::invalid("sl_order needs m >= 1"));
    }
    let mut order: u128 = 1;
    for (p, e) in factorize(m) {
        let p = p as u128;
        let k2 = (k * k - 1) as u32;
        let mut local = checked_pow(p, (e - 1) * k2, "sl_order")?;
        local = checked_mul(
            local,
            checked_pow(p, (k * (k - 1) / 2) as u32, "sl_order")?,
            "sl_order",
        )?;
        for i in 2..=k {
            let pi = checked_pow(p, i as u32, "sl_order")?;
            local = checked_mul(local, pi - 1, "sl_order")?;
        }
        order = checked_mul(order, local, "sl_order")?;
    }
    Ok(order)
}

/// Number of rows r in (Z/m)^{n+1} with gcd(r, m) = 1 — the orbit of
/// (0,…,0,1) under SL(n+1, Z/m):
/// U(m) = ∏_{p^e || m} p^{(e-1)(n+1)} (p^{n+1} - 1).
pub fn unimodular_row_count(n: usize, m: u64) -> Result<u128> {
    if m == 0 {
        return Err(Error::invalid("unimodular_row_count needs m >= 1"));
    }
    let k = (n + 1) as u32;
    let mut count: u128 = 1;
    for (p, e) in factorize(m) {
        let p = p as u128;
        let local = checked_mul(
            checked_pow(p, (e - 1) * k, "unimodular_row_count")?,
            checked_pow(p, k, "unimodular_row_count")? - 1,
            "unimodular_row_count",
        )?;
        count = checked_mul(count, local, "unimodular_row_count")?;
    }
    Ok(count)
}

/// Index of the residue sublattice (mZ)^n in Z^n.
pub fn residue_lattice_index(n: usize, m: u64) -> Result<u128> {
    checked_pow(m as u128, n as u32, "residue_lattice_index")
}

/// Closed-form orbit count: each class contributes one stabilizer coset,
/// so #A* = #classes · |SL(n+1, Z/m)| / U(m).
pub fn astar_count(sys: &ResidueSystem) -> Result<OrbitCount> {
    let k = sys.n + 1;
    let index = sl_order(k, sys.m)?;
    let rows = unimodular_row_count(sys.n, sys.m)?;
    debug_assert_eq!(index % rows, 0, "stabilizer size must be integral");
    let stab = index / rows;
    let astar = checked_mul(sys.classes.len() as u128, stab, "astar_count")?;
    Ok(OrbitCount {
        astar,
        index,
        density: Ratio::new(sys.classes.len() as u128, rows),
    })
}

/// Brute-force orbit count by full enumeration of SL(n+1, Z/m): counts
/// group elements sending some class row to (0,…,0,1) mod m.
///
/// Independent oracle for [`astar_count`]; refuses inputs above the
/// desk-scale cap.
pub fn astar_bruteforce(sys: &ResidueSystem) -> Result<OrbitCount> {
    let k = sys.n + 1;
    let m = sys.m;
    let cells = (k * k) as u32;
    let total = checked_pow(m as u128, cells, "astar_bruteforce")?;
    if total > BRUTE_FORCE_CAP {
        return Err(Error::EnumerationTooLarge { k, m, count: total });
    }
    let mut target = vec![0u64; k];
    target[k - 1] = 1 % m;

    let mut mat = vec![0u64; k * k];
    let mut index: u128 = 0;
    let mut astar: u128 = 0;
    loop {
        if det_mod(&mat, k, m) == 1 % m {
            index += 1;
            let hit = sys.classes.iter().any(|class| {
                (0..k).all(|j| {
                    let mut acc: u128 = 0;
                    for (i, &ci) in class.iter().enumerate() {
                        acc += ci as u128 * mat[i * k + j] as u128;
                    }
                    (acc % m as u128) as u64 == target[j]
                })
            });
            if hit {
                astar += 1;
            }
        }
        // odometer step
        let mut pos = 0;
        loop {
            if pos == k * k {
                return Ok(OrbitCount {
                    astar,
                    index,
                    density: Ratio::new(astar, index),
                });
            }
            mat[pos] += 1;
            if mat[pos] < m {
                break;
            }
            mat[pos] = 0;
            pos += 1;
        }
    }
}

/// The system containing every primitive residue row mod m — the whole
/// m-torus copy of the Farey sequence, with vacuous restriction.
pub fn all_classes(n: usize, m: u64) -> Result<ResidueSystem> {
    if m == 0 {
        return Err(Error::invalid("modulus must be >= 1"));
    }
    if m == 1 {
        return Ok(ResidueSystem::full(n));
    }
    let k = n + 1;
    let total = checked_pow(m as u128, k as u32, "all_classes")?;
    if total > BRUTE_FORCE_CAP {
        return Err(Error::EnumerationTooLarge { k, m, count: total });
    }
    let mut classes = Vec::new();
    let mut row = vec![0i64; k];
    loop {
        if row.iter().fold(m, |g, &x| num_integer::gcd(g, x as u64)) == 1 {
            classes.push(row.clone());
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return ResidueSystem::new(n, m, &classes);
            }
            row[pos] += 1;
            if (row[pos] as u64) < m {
                break;
            }
            row[pos] = 0;
            pos += 1;
        }
    }
}

/// Determinant mod m by Laplace expansion; k is small (<= 4 under the cap).
fn det_mod(mat: &[u64], k: usize, m: u64) -> u64 {
    fn rec(mat: &[u64], k: usize, m: u64, row: usize, cols: &mut Vec<usize>) -> i128 {
        if cols.len() == 1 {
            return mat[row * k + cols[0]] as i128;
        }
        let mut acc: i128 = 0;
        for idx in 0..cols.len() {
            let a = mat[row * k + cols[idx]] as i128;
            if a == 0 {
                continue;
            }
            let c = cols.remove(idx);
            let sub = rec(mat, k, m, row + 1, cols);
            cols.insert(idx, c);
            let term = (a * sub).rem_euclid(m as i128);
            if idx % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            acc = acc.rem_euclid(m as i128);
        }
        acc
    }
    let mut cols: Vec<usize> = (0..k).collect();
    rec(mat, k, m, 0, &mut cols).rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_examples() {
        let full = ResidueSystem::full(1);
        assert!(full.contains_row(&[17, 31]));
        assert!(full.contains_row(&[-4, 1]));

        let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
        assert!(sys.contains_row(&[2, 5]));
        assert!(!sys.contains_row(&[1, 2]));
        assert!(sys.contains_row(&[-2, 3])); // -2 ≡ 0 mod 2
        let pt = crate::lattice::PrimitivePoint::new(vec![2], 5).unwrap();
        assert!(sys.contains(&pt));
        let pt = crate::lattice::PrimitivePoint::new(vec![1], 2).unwrap();
        assert!(!sys.contains(&pt));

        let sys3 = ResidueSystem::new(1, 3, &[vec![1, 1]]).unwrap();
        assert!(sys3.contains_row(&[4, 7]));
        assert!(!sys3.contains_row(&[5, 7]));
    }

    #[test]
    fn class_validation() {
        // (0, 2) mod 2 has gcd 2 with the modulus: not a primitive residue
        assert!(ResidueSystem::new(1, 2, &[vec![0, 2]]).is_err());
        assert!(ResidueSystem::new(1, 2, &[vec![0, 1, 1]]).is_err()); // bad length
        assert!(ResidueSystem::new(1, 2, &[]).is_err());
        assert!(ResidueSystem::new(1, 0, &[vec![0, 1]]).is_err());
        // duplicates collapse after reduction: (2,3) and (0,-1) are both (0,1)
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1], vec![2, 3], vec![0, -1]]).unwrap();
        assert_eq!(sys.classes().len(), 1);
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(sys.classes().len(), 2);
    }

    /// Independent enumeration of all k×k matrices mod m counting det ≡ 1.
    fn count_sl_matrices(k: usize, m: u64) -> u128 {
        let cells = k * k;
        let total = (m as u128).pow(cells as u32);
        let mut mat = vec![0u64; cells];
        let mut count = 0u128;
        for code in 0..total {
            let mut c = code;
            for cell in mat.iter_mut() {
                *cell = (c % m as u128) as u64;
                c /= m as u128;
            }
            if det_mod(&mat, k, m) == 1 % m {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn sl_order_matches_enumeration() {
        assert_eq!(sl_order(2, 2).unwrap(), 6);
        assert_eq!(sl_order(2, 3).unwrap(), 24);
        assert_eq!(sl_order(3, 2).unwrap(), 168);
        assert_eq!(sl_order(2, 1).unwrap(), 1);
        for (k, m) in [
            (2usize, 2u64),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 2),
            (3, 3),
        ] {
            assert_eq!(
                sl_order(k, m).unwrap(),
                count_sl_matrices(k, m),
                "sl_order({k}, {m})"
            );
        }
    }

    /// Independent count of rows mod m with gcd(row, m) = 1.
    fn count_unimodular_rows(n: usize, m: u64) -> u128 {
        let k = n + 1;
        let total = (m as u128).pow(k as u32);
        let mut count = 0u128;
        for code in 0..total {
            let mut c = code;
            let mut g = m;
            for _ in 0..k {
                g = num_integer::gcd(g, (c % m as u128) as u64);
                c /= m as u128;
            }
            if g == 1 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn unimodular_row_count_matches_enumeration() {
        assert_eq!(unimodular_row_count(1, 2).unwrap(), 3);
        assert_eq!(unimodular_row_count(1, 4).unwrap(), 12);
        assert_eq!(unimodular_row_count(2, 2).unwrap(), 7);
        for (n, m) in [
            (1usize, 2u64),
            (1, 3),
            (1, 4),
            (1, 6),
            (2, 2),
            (2, 3),
            (2, 4),
        ] {
            assert_eq!(
                unimodular_row_count(n, m).unwrap(),
                count_unimodular_rows(n, m),
                "U({m}) in dim {n}"
            );
        }
    }

    #[test]
    fn astar_count_examples() {
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
        let oc = astar_count(&sys).unwrap();
        assert_eq!(oc.astar, 2);
        assert_eq!(oc.index, 6);
        assert_eq!(oc.density, Ratio::new(1u128, 3));

        let full = astar_count(&ResidueSystem::full(2)).unwrap();
        assert_eq!(full.astar, 1);
        assert_eq!(full.index, 1);
        assert_eq!(full.density, Ratio::new(1u128, 1));

        // all three primitive rows mod 2 make the restriction vacuous
        let all = ResidueSystem::new(1, 2, &[vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(astar_count(&all).unwrap().density, Ratio::new(1u128, 1));
    }

    #[test]
    fn bruteforce_matches_closed_form() {
        let cases: Vec<(usize, u64, Vec<Vec<i64>>)> = vec![
            (1, 2, vec![vec![0, 1]]),
            (1, 2, vec![vec![0, 1], vec![1, 1]]),
            (1, 3, vec![vec![1, 1]]),
            (1, 3, vec![vec![0, 1], vec![1, 2], vec![2, 2]]),
            (1, 4, vec![vec![0, 1]]),
            (1, 4, vec![vec![1, 2], vec![3, 0]]),
            (2, 2, vec![vec![0, 0, 1]]),
            (2, 2, vec![vec![1, 0, 1], vec![0, 1, 1]]),
            (2, 3, vec![vec![0, 0, 1], vec![1, 1, 1]]),
        ];
        for (n, m, rows) in cases {
            let sys = ResidueSystem::new(n, m, &rows).unwrap();
            let fast = astar_count(&sys).unwrap();
            let slow = astar_bruteforce(&sys).unwrap();
            assert_eq!(fast, slow, "n={n} m={m} rows={rows:?}");
        }
        // m = 1 trivially
        let full = ResidueSystem::full(1);
        assert_eq!(
            astar_count(&full).unwrap(),
            astar_bruteforce(&full).unwrap()
        );
    }

    #[test]
    fn density_monotone_per_class() {
        // each added class raises astar by the constant stabilizer size
        let one = astar_count(&ResidueSystem::new(1, 3, &[vec![0, 1]]).unwrap()).unwrap();
        let two =
            astar_count(&ResidueSystem::new(1, 3, &[vec![0, 1], vec![1, 1]]).unwrap()).unwrap();
        let stab = sl_order(2, 3).unwrap() / unimodular_row_count(1, 3).unwrap();
        assert_eq!(two.astar - one.astar, stab);
    }

    #[test]
    fn residue_lattice_index_is_m_to_n() {
        assert_eq!(residue_lattice_index(1, 2).unwrap(), 2);
        assert_eq!(residue_lattice_index(2, 3).unwrap(), 9);
        assert_eq!(residue_lattice_index(3, 10).unwrap(), 1000);
        assert_eq!(residue_lattice_index(2, 1).unwrap(), 1);
    }

    #[test]
    fn bruteforce_cap_enforced() {
        let sys = ResidueSystem::new(2, 5, &[vec![0, 0, 1]]).unwrap();
        assert!(matches!(
            astar_bruteforce(&sys),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn sl_order_overflow_reported() {
        assert!(matches!(sl_order(4, u64::MAX), Err(Error::Overflow(_))));
    }
}
