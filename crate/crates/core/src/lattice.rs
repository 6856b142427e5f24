//! Exact integer primitives and the small matrix families used by every
//! statistic: the horosphere frame h(x), the diagonal flow a(y), the
//! torus scaling m(y), the dual frame h†(y), and unimodular completion.
//!
//! Row-vector convention throughout: group elements act on integer rows by
//! right multiplication, `row * M`.

use crate::error::{Error, Result};

/// An integer row vector (a₁,…,a_{n+1}); entries must fit in 64 bits and
/// all arithmetic on them is checked.
pub type IntRow = Vec<i64>;

/// gcd of all entries, as a nonnegative integer. Empty or all-zero input
/// yields 0.
pub fn gcd_all(v: &[i64]) -> u64 {
    v.iter()
        .fold(0u64, |g, &x| num_integer::gcd(g, x.unsigned_abs()))
}

/// True iff the entries are coprime as a whole.
pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}

/// A primitive integer point (p, q) with q >= 1; its projection p/q is a
/// Farey point of denominator q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitivePoint {
    p: Vec<i64>,
    q: i64,
}

impl PrimitivePoint {
    pub fn new(p: Vec<i64>, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::invalid(format!("denominator q = {q} must be >= 1")));
        }
        let mut row = p.clone();
        row.push(q);
        if !is_primitive(&row) {
            return Err(Error::NonPrimitive(row));
        }
        Ok(PrimitivePoint { p, q })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[i64] {
        &self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// The full row (p₁,…,p_n,q).
    pub fn row(&self) -> IntRow {
        let mut row = self.p.clone();
        row.push(self.q);
        row
    }

    /// Torus coordinates p/q.
    pub fn coords(&self) -> Vec<f64> {
        self.p.iter().map(|&x| x as f64 / self.q as f64).collect()
    }
}

/// Dense square matrix over f64, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zero(order: usize) -> Self {
        SquareMatrix {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zero(order);
        for i in 0..order {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let order = rows.len();
        let mut m = Self::zero(order);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), order, "row length must equal order");
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order);
        let n = self.order;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix: v * M.
    pub fn mul_row(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        let n = self.order;
        let mut out = vec![0.0; n];
        for (k, &vk) in v.iter().enumerate() {
            if vk == 0.0 {
                continue;
            }
            for j in 0..n {
                out[j] += vk * self[(k, j)];
            }
        }
        out
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.order;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.order;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting; None for singular
    /// input.
    pub fn inverse(&self) -> Option<SquareMatrix> {
        let n = self.order;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col] == 0.0 {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv.data[col * n + j] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= f * a[col * n + j];
                    inv.data[r * n + j] -= f * inv.data[col * n + j];
                }
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.order + j]
    }
}

/// Dense square matrix over i64 with checked arithmetic (products promoted
/// to 128 bits, overflow reported).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    order: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(order: usize) -> Self {
        let mut data = vec![0i64; order * order];
        for i in 0..order {
            data[i * order + i] = 1;
        }
        IntMatrix { order, data }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.order + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    /// Matrix times integer column vector, checked.
    pub fn mul_col(&self, v: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(v.len(), self.order);
        let mut out = Vec::with_capacity(self.order);
        for i in 0..self.order {
            let mut acc: i128 = 0;
            for (j, &vj) in v.iter().enumerate() {
                acc += self.get(i, j) as i128 * vj as i128;
            }
            out.push(i64::try_from(acc).map_err(|_| Error::Overflow("integer matrix product"))?);
        }
        Ok(out)
    }

    /// Replace rows (i, j) by the 2x2 integer combination
    /// (a*row_i + b*row_j, c*row_i + d*row_j), checked.
    fn rows_combine(&mut self, i: usize, j: usize, a: i64, b: i64, c: i64, d: i64) -> Result<()> {
        for col in 0..self.order {
            let ri = self.get(i, col) as i128;
            let rj = self.get(j, col) as i128;
            let ni = a as i128 * ri + b as i128 * rj;
            let nj = c as i128 * ri + d as i128 * rj;
            self.set(
                i,
                col,
                i64::try_from(ni).map_err(|_| Error::Overflow("unimodular completion"))?,
            );
            self.set(
                j,
                col,
                i64::try_from(nj).map_err(|_| Error::Overflow("unimodular completion"))?,
            );
        }
        Ok(())
    }

    /// Exact determinant via Laplace expansion over i128 (intended for
    /// order <= 5).
    pub fn det(&self) -> Result<i64> {
        fn det_rec(n: usize, rows: &[usize], cols: &mut Vec<usize>, m: &IntMatrix) -> i128 {
            if n == 1 {
                return m.get(rows[0], cols[0]) as i128;
            }
            let mut acc: i128 = 0;
            let fixed_row = rows[0];
            for k in 0..n {
                let a = m.get(fixed_row, cols[k]) as i128;
                if a == 0 {
                    continue;
                }
                let c = cols.remove(k);
                let sub = det_rec(n - 1, &rows[1..], cols, m);
                cols.insert(k, c);
                let term = a * sub;
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let rows: Vec<usize> = (0..self.order).collect();
        let mut cols: Vec<usize> = (0..self.order).collect();
        let d = det_rec(self.order, &rows, &mut cols, self);
        i64::try_from(d).map_err(|_| Error::Overflow("integer determinant"))
    }

    pub fn to_f64(&self) -> SquareMatrix {
        SquareMatrix {
            order: self.order,
            data: self.data.iter().map(|&x| x as f64).collect(),
        }
    }
}

/// h(x): identity block, bottom row (-x, 1). Parameterizes the horosphere.
pub fn h_matrix(x: &[f64]) -> SquareMatrix {
    let n = x.len();
    let mut m = SquareMatrix::identity(n + 1);
    for (j, &xj) in x.iter().enumerate() {
        m[(n, j)] = -xj;
    }
    m
}

/// a(y) = diag(y^{1/n} I_n, y^{-1}), the expanding diagonal flow; y > 0.
pub fn a_matrix(n: usize, y: f64) -> Result<SquareMatrix> {
    if n == 0 {
        return Err(Error::invalid("a(y) needs dimension n >= 1"));
    }
    if !(y > 0.0) {
        return Err(Error::invalid(format!("a(y) requires y > 0, got {y}")));
    }
    let mut m = SquareMatrix::zero(n + 1);
    let d = y.powf(1.0 / n as f64);
    for i in 0..n {
        m[(i, i)] = d;
    }
    m[(n, n)] = 1.0 / y;
    Ok(m)
}

/// m(y) = diag((y₁⋯y_n)^{-1/n} diag(y), 1); all y_i > 0. Determinant one.
pub fn m_matrix(y: &[f64]) -> Result<SquareMatrix> {
    let n = y.len();
    if let Some(bad) = y.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::invalid(format!("m(y) requires y_i > 0, got {bad}")));
    }
    let prod: f64 = y.iter().product();
    let scale = prod.powf(-1.0 / n as f64);
    let mut m = SquareMatrix::zero(n + 1);
    for (i, &yi) in y.iter().enumerate() {
        m[(i, i)] = scale * yi;
    }
    m[(n, n)] = 1.0;
    Ok(m)
}

/// h†(y) = [[I_n, yᵗ],[0, 1]], the inverse transpose of h(y).
pub fn h_dagger(y: &[f64]) -> SquareMatrix {
    let n = y.len();
    let mut m = SquareMatrix::identity(n + 1);
    for (i, &yi) in y.iter().enumerate() {
        m[(i, n)] = yi;
    }
    m
}

/// Completes a primitive row a to a matrix γ ∈ SL(n+1, Z) with
/// γ aᵗ = (0,…,0,1)ᵗ, by an extended-gcd cascade of row operations.
///
/// The returned γ is one valid completion; distinct completions differ by
/// left multiplication with a stabilizer of e_{n+1}.
pub fn complete_to_unimodular(a: &[i64]) -> Result<IntMatrix> {
    if a.len() < 2 {
        return Err(Error::invalid("completion needs at least 2 entries"));
    }
    if !is_primitive(a) {
        return Err(Error::NonPrimitive(a.to_vec()));
    }
    let k = a.len();
    let last = k - 1;
    let mut v: Vec<i64> = a.to_vec();
    let mut gamma = IntMatrix::identity(k);
    for i in 0..last {
        if v[i] == 0 {
            continue;
        }
        let (g, s, t) = extended_gcd(v[i], v[last]);
        let (vi_g, vl_g) = (v[i] / g, v[last] / g);
        // det of [[vl_g, -vi_g],[s, t]] is (vl_g*t + vi_g*s) = (t*v[last]+s*v[i])/g = 1
        gamma.rows_combine(i, last, vl_g, -vi_g, s, t)?;
        v[i] = 0;
        v[last] = g;
    }
    debug_assert_eq!(v[last], 1, "primitive input must reduce to gcd 1");
    debug_assert!(v[..last].iter().all(|&x| x == 0));
    Ok(gamma)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    (r0 as i64, s0 as i64, t0 as i64)
}
