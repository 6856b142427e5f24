//! Counting functions for two Diophantine approximation problems over
//! restricted sets of primitive points, and their empirical
//! distributions.
//!
//! For a point x on the torus, the first statistic counts solutions
//! (p,q) of ‖qx − p‖ <= α q^{-1/n} with Q <= q <= cQ; the second counts
//! solutions of ‖qx − p‖ <= α Q^{-1/n} with 1 <= q <= Q. Solutions are
//! restricted to the rows of a residue system. Boundary ties count: the
//! inequalities are closed.

use crate::congruence::{astar_count, ResidueSystem};
use crate::error::{Error, Result};
use crate::geom::TestSet;
use crate::lattice::is_primitive;
use crate::rng::{batched_counts, sample_in, RNG_ALGORITHM};
use crate::zeta::{unit_ball_volume, zeta};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DioKind {
    Est,
    Kesten,
}

/// Parameters of a Diophantine counting run: amplitude α, window ratio c
/// (EST only), level Q, and the residue system restricting solutions.
#[derive(Debug, Clone)]
pub struct DioParams {
    pub sys: ResidueSystem,
    pub q: i64,
    pub alpha: f64,
    /// Denominator window ratio for the EST statistic; ignored by Kesten.
    pub c: f64,
}

impl DioParams {
    fn validate(&self, kind: DioKind) -> Result<()> {
        if self.q < 1 {
            return Err(Error::invalid(format!("level Q = {} must be >= 1", self.q)));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::invalid(format!(
                "amplitude alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if kind == DioKind::Est && !(self.c > 1.0) {
            return Err(Error::invalid(format!(
                "ratio c must be > 1, got {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// Candidate integer points p around qx within radius r on every axis,
/// testing ‖qx − p‖ <= r exactly, plus primitivity and residue
/// membership. Counts solutions for one denominator q.
fn solutions_for_q(x: &[f64], q: i64, radius: f64, sys: &ResidueSystem) -> u64 {
    let n = x.len();
    let mut lo = Vec::with_capacity(n);
    let mut width = Vec::with_capacity(n);
    for &xi in x {
        let center = q as f64 * xi;
        let l = (center - radius).ceil() as i64;
        let h = (center + radius).floor() as i64;
        if h < l {
            return 0;
        }
        lo.push(l);
        width.push((h - l + 1) as usize);
    }
    let r2 = radius * radius;
    let mut row = vec![0i64; n + 1];
    row[n] = q;
    let mut pick = vec![0usize; n];
    let mut count = 0u64;
    loop {
        let mut d2 = 0.0;
        for ax in 0..n {
            row[ax] = lo[ax] + pick[ax] as i64;
            let d = q as f64 * x[ax] - row[ax] as f64;
            d2 += d * d;
        }
        if d2 <= r2 && is_primitive(&row) && sys.contains_row(&row) {
            count += 1;
        }
        let mut ax = n;
        loop {
            if ax == 0 {
                return count;
            }
            ax -= 1;
            pick[ax] += 1;
            if pick[ax] < width[ax] {
                break;
            }
            pick[ax] = 0;
        }
    }
}

/// Number of restricted solutions of ‖qx − p‖ <= α q^{-1/n},
/// Q <= q <= cQ.
pub fn est_count(x: &[f64], params: &DioParams) -> Result<u64> {
    params.validate(DioKind::Est)?;
    let n = params.sys.n();
    if x.len() != n {
        return Err(Error::invalid(
            "point dimension must match system dimension",
        ));
    }
    let q_hi = (params.c * params.q as f64).floor() as i64;
    let mut count = 0u64;
    for q in params.q..=q_hi {
        let radius = params.alpha * (q as f64).powf(-1.0 / n as f64);
        count += solutions_for_q(x, q, radius, &params.sys);
    }
    Ok(count)
}

/// Number of restricted solutions of ‖qx − p‖ <= α Q^{-1/n},
/// 1 <= q <= Q.
pub fn kesten_count(x: &[f64], params: &DioParams) -> Result<u64> {
    params.validate(DioKind::Kesten)?;
    let n = params.sys.n();
    if x.len() != n {
        return Err(Error::invalid(
            "point dimension must match system dimension",
        ));
    }
    let radius = params.alpha * (params.q as f64).powf(-1.0 / n as f64);
    let mut count = 0u64;
    for q in 1..=params.q {
        count += solutions_for_q(x, q, radius, &params.sys);
    }
    Ok(count)
}

/// Empirical distribution of a counting function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DioReport {
    pub schema_version: u32,
    pub kind: DioKind,
    pub n: usize,
    pub modulus: u64,
    pub q: i64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub kmax: u32,
    pub pmf: BTreeMap<u32, f64>,
    pub overflow: f64,
    pub mean: f64,
    /// Limiting expectation: density · V_n α^n (ln c | 1) / ζ(n+1).
    pub predicted_mean: f64,
    pub samples: u64,
    pub seed: u64,
    pub rng: String,
}

/// Limiting expected value of the counting function.
pub fn predicted_mean(kind: DioKind, params: &DioParams) -> Result<f64> {
    params.validate(kind)?;
    let n = params.sys.n();
    let density = astar_count(&params.sys)?.density_f64();
    let vol = unit_ball_volume(n) * params.alpha.powi(n as i32);
    let factor = match kind {
        DioKind::Est => params.c.ln(),
        DioKind::Kesten => 1.0,
    };
    Ok(density * vol * factor / zeta(n as f64 + 1.0))
}

/// Monte Carlo distribution of the counting function over centers
/// sampled uniformly in the domain.
pub fn dio_distribution(
    kind: DioKind,
    domain: &TestSet,
    params: &DioParams,
    kmax: u32,
    samples: u64,
    seed: u64,
) -> Result<DioReport> {
    params.validate(kind)?;
    if samples < 1 {
        return Err(Error::invalid("samples must be >= 1"));
    }
    let n = params.sys.n();
    if domain.dim() != n {
        return Err(Error::invalid(
            "domain dimension must match system dimension",
        ));
    }
    let predicted = predicted_mean(kind, params)?;
    let (hist, total) = batched_counts(samples, seed, kmax, |rng| {
        let x = sample_in(domain, rng);
        let c = match kind {
            DioKind::Est => est_count(&x, params),
            DioKind::Kesten => kesten_count(&x, params),
        };
        c.expect("validated params") as u32
    });
    let mut pmf = BTreeMap::new();
    for k in 0..=kmax {
        pmf.insert(k, hist[k as usize] as f64 / samples as f64);
    }
    Ok(DioReport {
        schema_version: crate::report::SCHEMA_VERSION,
        kind,
        n,
        modulus: params.sys.modulus(),
        q: params.q,
        alpha: params.alpha,
        c: match kind {
            DioKind::Est => Some(params.c),
            DioKind::Kesten => None,
        },
        kmax,
        pmf,
        overflow: hist[kmax as usize + 1] as f64 / samples as f64,
        mean: total as f64 / samples as f64,
        predicted_mean: predicted,
        samples,
        seed,
        rng: RNG_ALGORITHM.to_string(),
    })
}
