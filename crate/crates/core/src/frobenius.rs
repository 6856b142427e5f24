//! Frobenius numbers of primitive integer vectors, the unimodular
//! lattice associated to a vector by completion, the covering radius of
//! the standard simplex with respect to such lattices, the pointwise
//! identity tying the two together, and ensemble censuses of normalized
//! Frobenius numbers over restricted sets.

use crate::congruence::ResidueSystem;
use crate::error::{Error, Result};
use crate::geom::TestSet;
use crate::lattice::{complete_to_unimodular, gcd_all, is_primitive, SquareMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest integer not representable as a nonnegative combination of the
/// entries; entries must be >= 2 and coprime as a whole.
///
/// Round-robin over the Apéry set modulo the smallest entry: `table[r]`
/// holds the least representable value congruent to r, and the answer is
/// the largest table entry minus the base.
pub fn frobenius_number(a: &[i64]) -> Result<i64> {
    if a.len() < 2 {
        return Err(Error::invalid(
            "frobenius_number needs at least two entries",
        ));
    }
    if let Some(&bad) = a.iter().find(|&&x| x < 2) {
        return Err(Error::invalid(format!(
            "frobenius_number needs every entry >= 2, got {bad}"
        )));
    }
    if !is_primitive(a) {
        return Err(Error::NonPrimitive(a.to_vec()));
    }
    let base = *a.iter().min().expect("nonempty") as u64;
    // the table has one slot per residue class mod the smallest entry
    if base > 10_000_000 {
        return Err(Error::invalid(format!(
            "smallest entry {base} exceeds the round-robin table cap of 10^7"
        )));
    }
    let mut table = vec![u64::MAX; base as usize];
    table[0] = 0;
    for &g in a {
        let g = g as u64;
        let step = (g % base) as usize;
        if step == 0 {
            continue; // multiples of the base never improve a residue
        }
        let d = num_integer::gcd(base, step as u64) as usize;
        let cycle_len = base as usize / d;
        for r in 0..d {
            // start each cycle at its current minimum; one pass suffices
            let mut pos = r;
            let mut best_pos = r;
            let mut best = table[r];
            for _ in 1..cycle_len {
                pos = (pos + step) % base as usize;
                if table[pos] < best {
                    best = table[pos];
                    best_pos = pos;
                }
            }
            if best == u64::MAX {
                continue;
            }
            let mut cur = best;
            let mut pos = best_pos;
            for _ in 1..cycle_len {
                pos = (pos + step) % base as usize;
                let cand = cur
                    .checked_add(g)
                    .ok_or(Error::Overflow("frobenius round-robin"))?;
                if cand < table[pos] {
                    table[pos] = cand;
                }
                cur = table[pos];
            }
        }
    }
    let max = *table.iter().max().expect("nonempty table");
    debug_assert_ne!(max, u64::MAX, "primitive input reaches every residue");
    i64::try_from(max - base).map_err(|_| Error::Overflow("frobenius number"))
}

/// A vector together with its Frobenius number and the normalized
/// statistic F/(a₁⋯a_{n+1})^{1/n}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusRecord {
    pub a: Vec<i64>,
    pub f: i64,
    pub normalized: f64,
}

pub fn frobenius_record(a: &[i64]) -> Result<FrobeniusRecord> {
    let f = frobenius_number(a)?;
    let n = a.len() - 1;
    Ok(FrobeniusRecord {
        a: a.to_vec(),
        f,
        normalized: f as f64 / entry_product(a)?.powf(1.0 / n as f64),
    })
}

fn entry_product(a: &[i64]) -> Result<f64> {
    let mut prod: i128 = 1;
    for &x in a {
        prod = prod
            .checked_mul(x as i128)
            .ok_or(Error::Overflow("entry product"))?;
    }
    Ok(prod as f64)
}

/// Basis of the unimodular lattice associated to a primitive vector with
/// entries >= 2: rows of (a₁⋯a_{n+1})^{-1/n} · G · diag(a₁,…,a_n), where
/// G is the top-left n×n block of a unimodular completion of a.
///
/// Distinct completions give bases differing by an integer unimodular
/// transform, so the lattice — and its covering radius — is well defined.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    rows: SquareMatrix,
    provenance: Vec<i64>,
}

impl LatticeBasis {
    pub fn rows(&self) -> &SquareMatrix {
        &self.rows
    }

    pub fn provenance(&self) -> &[i64] {
        &self.provenance
    }

    pub fn covering_radius(&self, h: f64) -> Result<CoveringRadius> {
        covering_radius(&self.rows, h)
    }
}

pub fn associated_lattice(a: &[i64]) -> Result<LatticeBasis> {
    if let Some(&bad) = a.iter().find(|&&x| x < 2) {
        return Err(Error::invalid(format!(
            "associated_lattice needs every entry >= 2, got {bad}"
        )));
    }
    let gamma = complete_to_unimodular(a)?;
    let n = a.len() - 1;
    let scale = entry_product(a)?.powf(-1.0 / n as f64);
    let mut rows = SquareMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            rows[(i, j)] = scale * gamma.get(i, j) as f64 * a[j] as f64;
        }
    }
    Ok(LatticeBasis {
        rows,
        provenance: a.to_vec(),
    })
}

/// Grid estimate of the simplex covering radius with a one-sided error
/// bound: rho is a lower bound of the true radius and the true radius is
/// at most rho + error_bound (up to slivers thinner than a grid cell).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringRadius {
    pub rho: f64,
    pub error_bound: f64,
}

/// Covering radius of the standard simplex {x >= 0 : Σx_i <= 1} with
/// respect to the row lattice of `basis`, estimated on a grid of spacing
/// `h` over a fundamental parallelepiped.
///
/// Exact in dimension one; dimension two uses the grid kernel; higher
/// dimensions are not supported.
pub fn covering_radius(basis: &SquareMatrix, h: f64) -> Result<CoveringRadius> {
    let k = basis.order();
    for i in 0..k {
        if basis.row(i).iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("basis entries must be finite"));
        }
    }
    match k {
        1 => {
            let c = basis[(0, 0)].abs();
            if c == 0.0 {
                return Err(Error::invalid("degenerate one-dimensional basis"));
            }
            Ok(CoveringRadius {
                rho: c,
                error_bound: 0.0,
            })
        }
        2 => covering_radius_2d(basis, h),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

fn covering_radius_2d(basis: &SquareMatrix, h: f64) -> Result<CoveringRadius> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::invalid(format!(
            "grid spacing h = {h} must be in (0, 0.5)"
        )));
    }
    let det = basis.det();
    if det.abs() < 1e-12 {
        return Err(Error::invalid("degenerate two-dimensional basis"));
    }
    let (r1, r2) = gauss_reduce(
        [basis[(0, 0)], basis[(0, 1)]],
        [basis[(1, 0)], basis[(1, 1)]],
    );
    let reduced = SquareMatrix::from_rows(&[r1.to_vec(), r2.to_vec()]);
    let inv = reduced.inverse().expect("reduced basis is nonsingular");
    // ‖z − xB⁻¹‖∞ <= ‖zB − x‖∞ · max column abs sum of B⁻¹
    let col_norm = (0..2)
        .map(|j| inv[(0, j)].abs() + inv[(1, j)].abs())
        .fold(0.0f64, f64::max);

    // coarse pass to bracket the radius, then the requested grid
    let coarse_cells = 48usize;
    let start = (r1[0].abs() + r1[1].abs() + r2[0].abs() + r2[1].abs()) + 1.0;
    let coarse = certified_grid_max(&r1, &r2, col_norm, coarse_cells, start);
    let coarse_slack = 2.0 * (norm2(&r1) + norm2(&r2)) / coarse_cells as f64 + 0.5;
    let cells = (1.0 / h).ceil() as usize;
    let rho = certified_grid_max(&r1, &r2, col_norm, cells, coarse + coarse_slack);
    let error_bound = std::f64::consts::SQRT_2 * (norm2(&r1) + norm2(&r2)) / cells as f64;
    Ok(CoveringRadius { rho, error_bound })
}

fn norm2(v: &[f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Lagrange reduction of a rank-two basis; the lattice is unchanged.
fn gauss_reduce(mut r1: [f64; 2], mut r2: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    for _ in 0..256 {
        if r1[0] * r1[0] + r1[1] * r1[1] > r2[0] * r2[0] + r2[1] * r2[1] {
            std::mem::swap(&mut r1, &mut r2);
        }
        let denom = r1[0] * r1[0] + r1[1] * r1[1];
        let mu = ((r2[0] * r1[0] + r2[1] * r1[1]) / denom).round();
        if mu == 0.0 {
            return (r1, r2);
        }
        r2[0] -= mu * r1[0];
        r2[1] -= mu * r1[1];
    }
    (r1, r2)
}

/// Max over the grid of the distance-to-lattice in the simplex gauge,
/// with a certified per-point candidate window. `bound` is an upper
/// bound hypothesis on the radius; if the grid max exceeds it, the
/// window is enlarged and the pass rerun.
fn certified_grid_max(
    r1: &[f64; 2],
    r2: &[f64; 2],
    col_norm: f64,
    cells: usize,
    mut bound: f64,
) -> f64 {
    loop {
        let w = (bound * col_norm).ceil() as i64 + 2;
        // candidate lattice points zB for z in [-w, w+1]^2, sorted by
        // coordinate sum descending: the gauge minimum at x is
        // (x₁+x₂) - max{ℓ₁+ℓ₂ : ℓ <= x componentwise}
        let mut cand: Vec<(f64, f64, f64)> =
            Vec::with_capacity(((2 * w + 2) * (2 * w + 2)) as usize);
        for z1 in -w..=w + 1 {
            for z2 in -w..=w + 1 {
                let l1 = z1 as f64 * r1[0] + z2 as f64 * r2[0];
                let l2 = z1 as f64 * r1[1] + z2 as f64 * r2[1];
                cand.push((l1 + l2, l1, l2));
            }
        }
        cand.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

        let max = (0..cells)
            .into_par_iter()
            .map(|i| {
                let t1 = i as f64 / cells as f64;
                let mut row_max = f64::NEG_INFINITY;
                for j in 0..cells {
                    let t2 = j as f64 / cells as f64;
                    let x1 = t1 * r1[0] + t2 * r2[0];
                    let x2 = t1 * r1[1] + t2 * r2[1];
                    let sum = x1 + x2;
                    let mut val = f64::INFINITY;
                    for &(s, l1, l2) in &cand {
                        if l1 <= x1 && l2 <= x2 {
                            val = sum - s;
                            break;
                        }
                    }
                    if val > row_max {
                        row_max = val;
                    }
                }
                row_max
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);

        if max <= bound {
            return max;
        }
        bound = if max.is_finite() {
            max * 1.25 + 0.5
        } else {
            bound * 2.0 + 1.0
        };
    }
}

/// Residual of the covering-radius identity for one vector:
/// F(a) + Σa_j against (a₁⋯a_{n+1})^{1/n} · ρ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub a: Vec<i64>,
    pub frobenius: i64,
    pub entry_sum: i64,
    pub rho: f64,
    pub rho_error_bound: f64,
    pub residual: f64,
    pub relative_residual: f64,
}

pub fn identity_check(a: &[i64], h: f64) -> Result<IdentityReport> {
    if a.len() < 2 {
        return Err(Error::invalid("identity check needs at least two entries"));
    }
    let n = a.len() - 1;
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let f = frobenius_number(a)?;
    let basis = associated_lattice(a)?;
    let cover = basis.covering_radius(h)?;
    let sum: i64 = a.iter().sum();
    let lhs = (f + sum) as f64;
    let rhs = entry_product(a)?.powf(1.0 / n as f64) * cover.rho;
    let residual = (lhs - rhs).abs();
    Ok(IdentityReport {
        a: a.to_vec(),
        frobenius: f,
        entry_sum: sum,
        rho: cover.rho,
        rho_error_bound: cover.error_bound,
        residual,
        relative_residual: residual / lhs,
    })
}

/// Empirical tail of the normalized Frobenius numbers over one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiEstimate {
    pub schema_version: u32,
    pub n: usize,
    pub t: i64,
    pub modulus: u64,
    pub sample_count: u64,
    pub r_grid: Vec<f64>,
    /// tail[i] = #{a : F(a)/(a₁⋯a_{n+1})^{1/n} > r_grid[i]}
    pub raw_tails: Vec<u64>,
    /// raw tails divided by T^{n+1}
    pub norm_tails: Vec<f64>,
}

/// Census over a box: the restricted ensemble and the companion full
/// (unrestricted) ensemble over the same dilated domain, plus the raw
/// normalized values for distribution comparisons.
#[derive(Debug, Clone)]
pub struct CensusOutput {
    pub restricted: PsiEstimate,
    pub full: PsiEstimate,
    pub restricted_values: Vec<f64>,
    pub full_values: Vec<f64>,
}

/// Walks a ∈ Z^{n+1}, entries >= 2, inside the dilated box T·D, filters
/// primitive vectors, and accumulates normalized-Frobenius tails for the
/// full ensemble and the subset matching the residue system.
pub fn frobenius_census(
    sys: &ResidueSystem,
    domain: &TestSet,
    t: i64,
    r_grid: &[f64],
) -> Result<CensusOutput> {
    let n = sys.n();
    if n < 2 {
        return Err(Error::invalid(
            "the Frobenius census needs dimension n >= 2",
        ));
    }
    if t < 2 {
        return Err(Error::invalid("census dilation T must be >= 2"));
    }
    let (lo, hi) = match domain {
        TestSet::Box { lo, hi } => (lo.clone(), hi.clone()),
        TestSet::Ball { .. } => {
            return Err(Error::invalid("census domain must be a box"));
        }
    };
    if lo.len() != n + 1 {
        return Err(Error::invalid(format!(
            "census domain must be a box in R^{}",
            n + 1
        )));
    }
    if lo.iter().any(|&l| l < 0.0) {
        return Err(Error::invalid(
            "census domain must lie in the nonnegative orthant",
        ));
    }
    if r_grid.is_empty() || r_grid.windows(2).any(|w| w[0] >= w[1]) || r_grid[0] < 0.0 {
        return Err(Error::invalid(
            "R grid must be nonempty, nonnegative, strictly increasing",
        ));
    }
    let bounds: Vec<(i64, i64)> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &u)| {
            let a = ((t as f64 * l).ceil() as i64).max(2);
            let b = (t as f64 * u).floor() as i64;
            (a, b)
        })
        .collect();
    if bounds.iter().any(|&(a, b)| b < a) {
        return Err(Error::invalid(
            "dilated census domain contains no integer vectors >= 2",
        ));
    }

    struct Shard {
        full_buckets: Vec<u64>,
        restricted_buckets: Vec<u64>,
        full_values: Vec<f64>,
        restricted_values: Vec<f64>,
    }

    let nbuckets = r_grid.len() + 1;
    let shards: Vec<Shard> = (bounds[0].0..=bounds[0].1)
        .into_par_iter()
        .map(|a0| {
            let mut shard = Shard {
                full_buckets: vec![0; nbuckets],
                restricted_buckets: vec![0; nbuckets],
                full_values: Vec::new(),
                restricted_values: Vec::new(),
            };
            let mut a = vec![0i64; n + 1];
            a[0] = a0;
            for i in 1..=n {
                a[i] = bounds[i].0;
            }
            'outer: loop {
                if gcd_all(&a) == 1 {
                    let f = frobenius_number(&a).expect("entries >= 2 and primitive");
                    let prod: f64 = a.iter().map(|&x| x as f64).product();
                    let value = f as f64 / prod.powf(1.0 / n as f64);
                    // bucket index = number of grid values strictly below
                    let pos = r_grid.partition_point(|&r| r < value);
                    shard.full_buckets[pos] += 1;
                    shard.full_values.push(value);
                    if sys.contains_row(&a) {
                        shard.restricted_buckets[pos] += 1;
                        shard.restricted_values.push(value);
                    }
                }
                let mut axis = n;
                loop {
                    if axis == 0 {
                        break 'outer;
                    }
                    a[axis] += 1;
                    if a[axis] <= bounds[axis].1 {
                        break;
                    }
                    a[axis] = bounds[axis].0;
                    axis -= 1;
                }
            }
            shard
        })
        .collect();

    let mut full_buckets = vec![0u64; nbuckets];
    let mut restricted_buckets = vec![0u64; nbuckets];
    let mut full_values = Vec::new();
    let mut restricted_values = Vec::new();
    for s in shards {
        for (acc, v) in full_buckets.iter_mut().zip(&s.full_buckets) {
            *acc += v;
        }
        for (acc, v) in restricted_buckets.iter_mut().zip(&s.restricted_buckets) {
            *acc += v;
        }
        full_values.extend_from_slice(&s.full_values);
        restricted_values.extend_from_slice(&s.restricted_values);
    }

    let tails = |buckets: &[u64]| -> Vec<u64> {
        // tail at grid index i counts buckets strictly above r_grid[i]
        let mut tails = vec![0u64; r_grid.len()];
        let mut acc = 0u64;
        for i in (0..r_grid.len()).rev() {
            acc += buckets[i + 1];
            tails[i] = acc;
        }
        tails
    };
    let scale = (t as f64).powi(n as i32 + 1);
    let build = |buckets: &[u64], count: u64| PsiEstimate {
        schema_version: crate::report::SCHEMA_VERSION,
        n,
        t,
        modulus: sys.modulus(),
        sample_count: count,
        r_grid: r_grid.to_vec(),
        raw_tails: tails(buckets),
        norm_tails: tails(buckets).iter().map(|&c| c as f64 / scale).collect(),
    };
    let full_est = build(&full_buckets, full_values.len() as u64);
    let mut restricted_est = build(&restricted_buckets, restricted_values.len() as u64);
    restricted_est.modulus = sys.modulus();
    Ok(CensusOutput {
        restricted: restricted_est,
        full: full_est,
        restricted_values,
        full_values,
    })
}

/// Kolmogorov–Smirnov distance between the empirical CDFs of two samples.
pub fn ks_distance(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(
        !xs.is_empty() && !ys.is_empty(),
        "KS needs nonempty samples"
    );
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n || j < m {
        let v = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        let gap = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        if gap > d {
            d = gap;
        }
    }
    d
}
