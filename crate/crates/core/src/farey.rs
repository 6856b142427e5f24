//! Streaming enumeration of (restricted) Farey sequences with canonical
//! torus representatives, growth-rate checks, and one-dimensional gaps.
//!
//! Canonical representative: p ∈ [0, m·q)^n, i.e. the fundamental domain
//! [0, m)^n of the torus R^n/(mZ)^n. Enumeration order is q ascending,
//! then lexicographic in p; dimension one re-sorts by p/q so gap
//! statistics read off directly.

use crate::congruence::{astar_count, residue_lattice_index, ResidueSystem};
use crate::error::{Error, Result};
use crate::zeta::zeta;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A materialized level-Q Farey set. Points are stored flat with stride
/// n+1 as (p₁,…,p_n,q).
#[derive(Debug, Clone)]
pub struct FareySet {
    sys: ResidueSystem,
    q_max: i64,
    rows: Vec<i64>,
}

impl FareySet {
    pub fn n(&self) -> usize {
        self.sys.n()
    }

    pub fn q_max(&self) -> i64 {
        self.q_max
    }

    pub fn system(&self) -> &ResidueSystem {
        &self.sys
    }

    pub fn len(&self) -> usize {
        self.rows.len() / (self.sys.n() + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The i-th point as (p, q).
    pub fn point(&self, i: usize) -> (&[i64], i64) {
        let k = self.sys.n() + 1;
        let row = &self.rows[i * k..(i + 1) * k];
        (&row[..k - 1], row[k - 1])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], i64)> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Torus coordinates p/q of the i-th point.
    pub fn coords(&self, i: usize) -> Vec<f64> {
        let (p, q) = self.point(i);
        p.iter().map(|&v| v as f64 / q as f64).collect()
    }

    /// The window scale (#F)^{-1/n} used by the spacing statistics.
    pub fn scale(&self) -> f64 {
        (self.len() as f64).powf(-1.0 / self.n() as f64)
    }
}

fn check_range(sys: &ResidueSystem, q_max: i64) -> Result<i64> {
    if q_max < 1 {
        return Err(Error::invalid(format!("level Q = {q_max} must be >= 1")));
    }
    let m = i64::try_from(sys.modulus()).map_err(|_| Error::Overflow("modulus"))?;
    m.checked_mul(q_max)
        .ok_or(Error::Overflow("representative range m*q"))?;
    Ok(m)
}

/// Visits every canonical representative for one denominator q, in
/// lexicographic p order.
fn scan_q(sys: &ResidueSystem, q: i64, mut emit: impl FnMut(&[i64])) {
    let n = sys.n();
    let m = sys.modulus() as i64;
    let qm = q.rem_euclid(m) as u64;
    // residue prefixes compatible with this q
    let prefixes: Vec<&[u64]> = sys
        .classes()
        .iter()
        .filter(|c| c[n] == qm)
        .map(|c| &c[..n])
        .collect();
    if prefixes.is_empty() {
        return;
    }
    let hi = m * q;
    let mut row = vec![0i64; n + 1];
    row[n] = q;
    loop {
        let residue_ok = prefixes.iter().any(|pref| {
            pref.iter()
                .zip(&row[..n])
                .all(|(&c, &p)| p.rem_euclid(m) as u64 == c)
        });
        if residue_ok {
            let mut g = q.unsigned_abs();
            for &p in &row[..n] {
                g = num_integer::gcd(g, p.unsigned_abs());
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                emit(&row);
            }
        }
        // odometer over p in [0, m*q)^n
        let mut axis = n;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            row[axis] += 1;
            if row[axis] < hi {
                break;
            }
            row[axis] = 0;
        }
    }
}

/// Streaming visit of the whole set in canonical order (q, then p).
pub fn for_each_point(
    sys: &ResidueSystem,
    q_max: i64,
    mut f: impl FnMut(&[i64], i64),
) -> Result<()> {
    check_range(sys, q_max)?;
    let n = sys.n();
    for q in 1..=q_max {
        scan_q(sys, q, |row| f(&row[..n], q));
    }
    Ok(())
}

/// Count of the set, streaming (no materialization); partitioned by q.
pub fn count(sys: &ResidueSystem, q_max: i64) -> Result<u64> {
    check_range(sys, q_max)?;
    let total: u128 = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut c: u128 = 0;
            scan_q(sys, q, |_| c += 1);
            c
        })
        .sum();
    u64::try_from(total).map_err(|_| Error::Overflow("Farey point count"))
}

/// Materializes the set. In dimension one the points come back sorted by
/// p/q ascending; higher dimensions keep enumeration order.
pub fn enumerate(sys: &ResidueSystem, q_max: i64) -> Result<FareySet> {
    check_range(sys, q_max)?;
    let n = sys.n();
    let chunks: Vec<Vec<i64>> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut rows = Vec::new();
            scan_q(sys, q, |row| rows.extend_from_slice(row));
            rows
        })
        .collect();
    let mut rows = Vec::with_capacity(chunks.iter().map(Vec::len).sum());
    for c in chunks {
        rows.extend_from_slice(&c);
    }
    let mut set = FareySet {
        sys: sys.clone(),
        q_max,
        rows,
    };
    if n == 1 {
        sort_1d(&mut set);
    }
    Ok(set)
}

fn sort_1d(set: &mut FareySet) {
    let mut pairs: Vec<(i64, i64)> = set.rows.chunks_exact(2).map(|r| (r[0], r[1])).collect();
    pairs.sort_unstable_by(|a, b| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128)));
    set.rows.clear();
    for (p, q) in pairs {
        set.rows.push(p);
        set.rows.push(q);
    }
}

/// Asymptotic growth rate of the unrestricted count on the unit torus:
/// σ_Q = Q^{n+1} / ((n+1) ζ(n+1)).
pub fn sigma_q(n: usize, q_max: i64) -> f64 {
    (q_max as f64).powi(n as i32 + 1) / ((n as f64 + 1.0) * zeta(n as f64 + 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub count: u64,
    /// Predicted asymptotic count: density · m^n · σ_Q.
    pub sigma: f64,
    pub ratio: f64,
}

/// Compares the exact count against the predicted growth rate of the
/// restricted set, density · m^n · σ_Q.
pub fn growth_check(set: &FareySet) -> Result<GrowthReport> {
    growth_report(set.system(), set.q_max(), set.len() as u64)
}

/// Growth report from a count obtained elsewhere (e.g. streaming).
pub fn growth_report(sys: &ResidueSystem, q_max: i64, count: u64) -> Result<GrowthReport> {
    let n = sys.n();
    let density = astar_count(sys)?.density_f64();
    let torus = residue_lattice_index(n, sys.modulus())? as f64;
    let sigma = density * torus * sigma_q(n, q_max);
    Ok(GrowthReport {
        count,
        sigma,
        ratio: count as f64 / sigma,
    })
}

/// Normalized gaps of a one-dimensional set on R/mZ, wrap-around gap
/// included, each multiplied by count/m (mean-one normalization).
/// Returned sorted ascending. Empty sets yield no gaps.
pub fn gaps_1d(set: &FareySet) -> Result<Vec<f64>> {
    if set.n() != 1 {
        return Err(Error::UnsupportedDimension(set.n()));
    }
    let count = set.len();
    if count == 0 {
        return Ok(Vec::new());
    }
    let m = set.system().modulus() as f64;
    let norm = count as f64 / m;
    let coord = |i: usize| {
        let (p, q) = set.point(i);
        p[0] as f64 / q as f64
    };
    let mut gaps = Vec::with_capacity(count);
    for i in 1..count {
        gaps.push((coord(i) - coord(i - 1)) * norm);
    }
    gaps.push((m - coord(count - 1) + coord(0)) * norm);
    gaps.sort_unstable_by(f64::total_cmp);
    Ok(gaps)
}

/// Number of consecutive pairs violating the unimodularity relation
/// p'q - pq' = 1 (dimension one, unrestricted unit torus only).
pub fn neighbor_violations(set: &FareySet) -> Result<u64> {
    if set.n() != 1 {
        return Err(Error::UnsupportedDimension(set.n()));
    }
    if !set.system().is_full() {
        return Err(Error::invalid(
            "the neighbor identity applies to the unrestricted unit-torus sequence",
        ));
    }
    let mut bad = 0u64;
    for i in 1..set.len() {
        let (p0, q0) = set.point(i - 1);
        let (p1, q1) = set.point(i);
        if p1[0] as i128 * q0 as i128 - p0[0] as i128 * q1 as i128 != 1 {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::all_classes;

    fn full(n: usize) -> ResidueSystem {
        ResidueSystem::full(n)
    }

    #[test]
    fn unit_torus_level_five() {
        let set = enumerate(&full(1), 5).unwrap();
        assert_eq!(set.len(), 10);
        let expect: Vec<(i64, i64)> = vec![
            (0, 1),
            (1, 5),
            (1, 4),
            (1, 3),
            (2, 5),
            (1, 2),
            (3, 5),
            (2, 3),
            (3, 4),
            (4, 5),
        ];
        let got: Vec<(i64, i64)> = set.iter().map(|(p, q)| (p[0], q)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn restricted_level_one() {
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
        let set = enumerate(&sys, 1).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.point(0), (&[0][..], 1));
    }

    #[test]
    fn two_dimensional_level_two() {
        // q = 1 gives (0,0); q = 2 gives the three rows with an odd entry
        let set = enumerate(&full(2), 2).unwrap();
        assert_eq!(set.len(), 4);
        let got: Vec<(Vec<i64>, i64)> = set.iter().map(|(p, q)| (p.to_vec(), q)).collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 0], 1),
                (vec![0, 1], 2),
                (vec![1, 0], 2),
                (vec![1, 1], 2),
            ]
        );
    }

    #[test]
    fn count_matches_enumeration_and_streaming() {
        for (n, q) in [(1usize, 40i64), (2, 12)] {
            let sys = full(n);
            let set = enumerate(&sys, q).unwrap();
            assert_eq!(count(&sys, q).unwrap() as usize, set.len());
            let mut seen = 0usize;
            for_each_point(&sys, q, |_, _| seen += 1).unwrap();
            assert_eq!(seen, set.len());
        }
    }

    #[test]
    fn full_torus_is_m_to_n_copies() {
        for (n, m, q) in [(1usize, 2u64, 30i64), (1, 3, 20), (2, 2, 8)] {
            let base = count(&full(n), q).unwrap();
            let torus = count(&all_classes(n, m).unwrap(), q).unwrap();
            assert_eq!(torus, base * m.pow(n as u32), "n={n} m={m} q={q}");
        }
    }

    #[test]
    fn restricted_equals_filtered_full_enumeration() {
        let cases = [
            (1usize, 2u64, vec![vec![0i64, 1]], 200i64),
            (1, 3, vec![vec![1, 1], vec![0, 1]], 120),
            (2, 2, vec![vec![1, 0, 1]], 20),
        ];
        for (n, m, rows, q) in cases {
            let sys = ResidueSystem::new(n, m, &rows).unwrap();
            let torus = enumerate(&all_classes(n, m).unwrap(), q).unwrap();
            let filtered = torus
                .iter()
                .filter(|(p, q)| {
                    let mut row = p.to_vec();
                    row.push(*q);
                    sys.contains_row(&row)
                })
                .count() as u64;
            assert_eq!(count(&sys, q).unwrap(), filtered, "n={n} m={m} q={q}");
        }
    }

    #[test]
    fn representatives_are_canonical_and_unique() {
        let sys = ResidueSystem::new(1, 3, &[vec![0, 1], vec![1, 1]]).unwrap();
        let set = enumerate(&sys, 25).unwrap();
        let m = 3i64;
        let mut seen = std::collections::HashSet::new();
        for (p, q) in set.iter() {
            assert!(p[0] >= 0 && p[0] < m * q, "rep out of range");
            // torus point as exact fraction in lowest terms
            let g = num_integer::gcd(p[0], q);
            assert!(seen.insert((p[0] / g, q / g)), "duplicate torus point");
        }
    }

    #[test]
    fn closed_under_residue_lattice_shift() {
        // shifting a member by q*m*e_i lands on the same canonical point
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1], vec![1, 1]]).unwrap();
        let set = enumerate(&sys, 12).unwrap();
        let m = 2i64;
        for (p, q) in set.iter().step_by(3) {
            let shifted = p[0] + q * m;
            let mut row = vec![shifted, q];
            assert!(sys.contains_row(&row));
            // reduce back into [0, mq)
            row[0] = row[0].rem_euclid(m * q);
            assert_eq!(row[0], p[0]);
        }
    }

    #[test]
    fn neighbor_identity_small_levels() {
        for q in [2i64, 7, 50, 200] {
            let set = enumerate(&full(1), q).unwrap();
            assert_eq!(neighbor_violations(&set).unwrap(), 0, "Q = {q}");
        }
    }

    #[test]
    fn growth_ratio_converges() {
        let set = enumerate(&full(1), 1000).unwrap();
        let rep = growth_check(&set).unwrap();
        assert!((rep.ratio - 1.0).abs() < 0.01, "ratio = {}", rep.ratio);

        // restricted: density 1/3 of the doubled torus
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
        let rep = growth_report(&sys, 800, count(&sys, 800).unwrap()).unwrap();
        assert!(
            (rep.ratio - 1.0).abs() < 0.02,
            "restricted ratio = {}",
            rep.ratio
        );
    }

    #[test]
    fn growth_smoke_at_level_one() {
        // no convergence claim at Q = 1; just exercise the report
        let set = enumerate(&full(1), 1).unwrap();
        let rep = growth_check(&set).unwrap();
        assert_eq!(rep.count, 1);
        assert!(rep.sigma > 0.0);
    }

    #[test]
    fn gaps_level_two() {
        let set = enumerate(&full(1), 2).unwrap();
        assert_eq!(gaps_1d(&set).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn gaps_level_five_minimum() {
        let set = enumerate(&full(1), 5).unwrap();
        let gaps = gaps_1d(&set).unwrap();
        assert_eq!(gaps.len(), 10);
        assert!((gaps[0] - 0.5).abs() < 1e-12, "min gap {}", gaps[0]);
        let total: f64 = gaps.iter().sum();
        assert!((total - set.len() as f64).abs() < 1e-9);
    }

    #[test]
    fn gaps_respect_torus_wrap() {
        // restricted to p ≡ 0: points 0/1 and 2/3 etc. on [0, 2)
        let sys = ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap();
        let set = enumerate(&sys, 3).unwrap();
        let gaps = gaps_1d(&set).unwrap();
        let total: f64 = gaps.iter().sum();
        assert!((total - set.len() as f64).abs() < 1e-9);
    }

    #[test]
    fn invalid_level_rejected() {
        assert!(enumerate(&full(1), 0).is_err());
        assert!(count(&full(1), -3).is_err());
    }
}
