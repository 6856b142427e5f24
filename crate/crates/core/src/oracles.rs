//! Brute-force reference computations used by tests and the acceptance
//! suite. Everything here is deliberately naive and independent of the
//! optimized kernels it checks.

use crate::congruence::ResidueSystem;
use crate::farey::FareySet;
use crate::geom::TestSet;
use crate::lattice::is_primitive;

/// Euler totients 0..=q by sieve; slot 0 is unused.
pub fn totient_sieve(q: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=q as u64).collect();
    for p in 2..=q {
        if phi[p] == p as u64 {
            // p prime: multiply through by (1 - 1/p)
            let mut k = p;
            while k <= q {
                phi[k] -= phi[k] / p as u64;
                k += p;
            }
        }
    }
    phi
}

/// Σ_{q<=Q} φ(q) — the size of the level-Q sequence on the unit torus.
pub fn totient_sum(q: usize) -> u64 {
    totient_sieve(q)[1..].iter().sum()
}

/// Representability table of 0..=upto by nonnegative combinations.
pub fn representable_bitmap(a: &[i64], upto: usize) -> Vec<bool> {
    let mut bm = vec![false; upto + 1];
    bm[0] = true;
    for v in 1..=upto {
        for &g in a {
            let g = g as usize;
            if g <= v && bm[v - g] {
                bm[v] = true;
                break;
            }
        }
    }
    bm
}

/// Frobenius number by growing a representability bitmap until a run of
/// min(a) consecutive representable values certifies the top.
pub fn frobenius_bitmap(a: &[i64]) -> i64 {
    let amin = *a.iter().min().expect("nonempty") as usize;
    let amax = *a.iter().max().expect("nonempty") as usize;
    let mut upto = (amin * amax).max(64);
    loop {
        let bm = representable_bitmap(a, upto);
        if bm[upto + 1 - amin..].iter().all(|&b| b) {
            return bm
                .iter()
                .rposition(|&b| !b)
                .expect("1 is never representable when entries >= 2") as i64;
        }
        upto *= 2;
    }
}

/// Window count by linear scan over every point and every plausible
/// torus shift; no spatial index involved.
pub fn window_count_scan(set: &FareySet, x: &[f64], scale: f64, window: &TestSet) -> u32 {
    let n = set.n();
    let m = set.system().modulus() as f64;
    // shifts large enough to reach a window offset anywhere in s·bbox
    let (blo, bhi) = window.bounding_box();
    let offset = blo
        .iter()
        .chain(&bhi)
        .map(|v| (v * scale).abs())
        .fold(0.0f64, f64::max);
    let reach = (((offset + m) / m).ceil() as i64) + 1;
    let mut count = 0u32;
    for i in 0..set.len() {
        let r = set.coords(i);
        let mut shift = vec![-reach; n];
        'shifts: loop {
            let v: Vec<f64> = (0..n)
                .map(|ax| (r[ax] + shift[ax] as f64 * m - x[ax]) / scale)
                .collect();
            if window.contains(&v) {
                count += 1;
                break 'shifts;
            }
            let mut ax = n;
            loop {
                if ax == 0 {
                    break 'shifts;
                }
                ax -= 1;
                shift[ax] += 1;
                if shift[ax] <= reach {
                    break;
                }
                shift[ax] = -reach;
            }
        }
    }
    count
}

fn scan_solutions(
    x: &[f64],
    sys: &ResidueSystem,
    q_lo: i64,
    q_hi: i64,
    radius_of: impl Fn(i64) -> f64,
) -> u64 {
    let n = x.len();
    let mut count = 0u64;
    for q in q_lo..=q_hi {
        let radius = radius_of(q);
        let margin = radius.ceil() as i64 + 2;
        let mut p = vec![0i64; n];
        let lo: Vec<i64> = x
            .iter()
            .map(|&xi| (q as f64 * xi).floor() as i64 - margin)
            .collect();
        let hi: Vec<i64> = x
            .iter()
            .map(|&xi| (q as f64 * xi).ceil() as i64 + margin)
            .collect();
        p.copy_from_slice(&lo);
        'points: loop {
            let d2: f64 = (0..n)
                .map(|ax| {
                    let d = q as f64 * x[ax] - p[ax] as f64;
                    d * d
                })
                .sum();
            if d2 <= radius * radius {
                let mut row = p.clone();
                row.push(q);
                if is_primitive(&row) && sys.contains_row(&row) {
                    count += 1;
                }
            }
            let mut ax = n;
            loop {
                if ax == 0 {
                    break 'points;
                }
                ax -= 1;
                p[ax] += 1;
                if p[ax] <= hi[ax] {
                    break;
                }
                p[ax] = lo[ax];
            }
        }
    }
    count
}

/// Full-scan count of solutions of ‖qx − p‖ <= α q^{-1/n}, Q <= q <= cQ.
pub fn est_scan(x: &[f64], sys: &ResidueSystem, q: i64, alpha: f64, c: f64) -> u64 {
    let n = x.len();
    scan_solutions(x, sys, q, (c * q as f64).floor() as i64, |qq| {
        alpha * (qq as f64).powf(-1.0 / n as f64)
    })
}

/// Full-scan count of solutions of ‖qx − p‖ <= α Q^{-1/n}, 1 <= q <= Q.
pub fn kesten_scan(x: &[f64], sys: &ResidueSystem, q: i64, alpha: f64) -> u64 {
    let n = x.len();
    let radius = alpha * (q as f64).powf(-1.0 / n as f64);
    scan_solutions(x, sys, 1, q, |_| radius)
}
