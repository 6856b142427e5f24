//! Test sets (windows and sampling domains) and the scaled regions whose
//! indicator functions drive every counting statistic.

use crate::error::{Error, Result};
use crate::zeta::unit_ball_volume;
use serde::{Deserialize, Serialize};

/// A bounded test set with nonempty interior and boundary of measure zero:
/// an axis-aligned box or a Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum TestSet {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl TestSet {
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::invalid(
                "box bounds must be nonempty and same length",
            ));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::invalid("box bounds must be finite"));
        }
        if lo.iter().zip(&hi).any(|(l, u)| !(l < u)) {
            return Err(Error::invalid("box needs l_i < u_i on every axis"));
        }
        Ok(TestSet::Box { lo, hi })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("ball center must be nonempty"));
        }
        if center.iter().any(|v| !v.is_finite()) || !radius.is_finite() {
            return Err(Error::invalid("ball parameters must be finite"));
        }
        if !(radius > 0.0) {
            return Err(Error::invalid("ball radius must be positive"));
        }
        Ok(TestSet::Ball { center, radius })
    }

    /// Unit box [0, 1]^n.
    pub fn unit_box(n: usize) -> Self {
        TestSet::Box {
            lo: vec![0.0; n],
            hi: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestSet::Box { lo, .. } => lo.len(),
            TestSet::Ball { center, .. } => center.len(),
        }
    }

    /// Exact Lebesgue volume.
    pub fn measure(&self) -> f64 {
        match self {
            TestSet::Box { lo, hi } => lo.iter().zip(hi).map(|(l, u)| u - l).product(),
            TestSet::Ball { center, radius } => {
                unit_ball_volume(center.len()) * radius.powi(center.len() as i32)
            }
        }
    }

    /// Closed containment test.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            TestSet::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, u))| *l <= *v && *v <= *u),
            TestSet::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                d2 <= radius * radius
            }
        }
    }

    /// Axis-aligned bounding box as (lo, hi).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            TestSet::Box { lo, hi } => (lo.clone(), hi.clone()),
            TestSet::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match self {
            TestSet::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(l, u)| (u - l) * (u - l))
                .sum::<f64>()
                .sqrt(),
            TestSet::Ball { radius, .. } => 2.0 * radius,
        }
    }
}

/// A region in R^{n+1} = {(x, y)} whose membership encodes one of the
/// counting problems after the horosphere embedding:
///
/// * `C`: x ∈ scale·y·A with 0 < y <= 1 (window statistic),
/// * `Est`: |y|^{1/n} ‖x‖ <= α with 1 <= y <= c,
/// * `Kesten`: ‖x‖ <= α with 0 <= y <= 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    C { window: TestSet, scale: f64 },
    Est { n: usize, alpha: f64, c: f64 },
    Kesten { n: usize, alpha: f64 },
}

impl Region {
    pub fn est(n: usize, alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::invalid(format!(
                "amplitude alpha must be > 0, got {alpha}"
            )));
        }
        if !(c > 1.0) {
            return Err(Error::invalid(format!("ratio c must be > 1, got {c}")));
        }
        Ok(Region::Est { n, alpha, c })
    }

    pub fn kesten(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::invalid(format!(
                "amplitude alpha must be > 0, got {alpha}"
            )));
        }
        Ok(Region::Kesten { n, alpha })
    }

    pub fn window(window: TestSet, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::invalid("window region scale must be > 0"));
        }
        Ok(Region::C { window, scale })
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::C { window, .. } => window.dim() + 1,
            Region::Est { n, .. } | Region::Kesten { n, .. } => n + 1,
        }
    }

    /// Exact Lebesgue volume of the region.
    pub fn measure(&self) -> f64 {
        match self {
            // ∫_0^1 (scale·y)^n vol(A) dy = scale^n vol(A)/(n+1)
            Region::C { window, scale } => {
                let n = window.dim();
                scale.powi(n as i32) * window.measure() / (n as f64 + 1.0)
            }
            // ∫_1^c vol(ball of radius α y^{-1/n}) dy = V_n α^n ln c
            Region::Est { n, alpha, c } => unit_ball_volume(*n) * alpha.powi(*n as i32) * c.ln(),
            Region::Kesten { n, alpha } => unit_ball_volume(*n) * alpha.powi(*n as i32),
        }
    }
}

/// Closed indicator of the region, evaluated at (x₁,…,x_n, y).
pub fn region_contains(region: &Region, point: &[f64]) -> bool {
    assert_eq!(
        point.len(),
        region.dim(),
        "point dimension must match region dimension"
    );
    let (x, y) = point.split_at(point.len() - 1);
    let y = y[0];
    match region {
        Region::C { window, scale } => {
            if !(y > 0.0 && y <= 1.0) {
                return false;
            }
            let s = scale * y;
            let v: Vec<f64> = x.iter().map(|xi| xi / s).collect();
            window.contains(&v)
        }
        Region::Est { n, alpha, c } => {
            if y < 1.0 || y > *c {
                return false;
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.abs().powf(1.0 / *n as f64) * norm <= *alpha
        }
        Region::Kesten { alpha, .. } => {
            if !(0.0..=1.0).contains(&y) {
                return false;
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            norm <= *alpha
        }
    }
}
