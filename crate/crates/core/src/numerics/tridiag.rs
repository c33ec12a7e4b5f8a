use super::NumericsError;

/// Tridiagonal matrix stored by its three diagonals.
///
/// Row `i` reads `sub[i-1] * x[i-1] + diag[i] * x[i] + sup[i] * x[i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiag {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self, NumericsError> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(NumericsError::DimensionMismatch {
                expected: n.saturating_sub(1),
                found: sub.len().max(sup.len()),
            });
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sub: vec![0.0; n.saturating_sub(1)],
            diag: vec![1.0; n],
            sup: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    /// Matrix-vector product.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Smallest row margin `|diag| - |sub| - |sup|`; nonnegative means
    /// (weak) diagonal dominance.
    pub fn dominance_margin(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let off = if i > 0 { self.sub[i - 1].abs() } else { 0.0 }
                    + if i + 1 < n { self.sup[i].abs() } else { 0.0 };
                self.diag[i].abs() - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Default pivot threshold: `1e-14 * max|diag|`.
    pub fn default_pivot_epsilon(&self) -> f64 {
        1e-14 * self.diag.iter().fold(0.0_f64, |m, d| m.max(d.abs()))
    }
}

/// Solves `m x = d` with the Thomas algorithm using the default pivot threshold.
pub fn thomas_solve(m: &Tridiag, d: &[f64]) -> Result<Vec<f64>, NumericsError> {
    thomas_solve_with(m, d, m.default_pivot_epsilon())
}

/// Thomas algorithm with an explicit pivot threshold.
pub fn thomas_solve_with(m: &Tridiag, d: &[f64], pivot_eps: f64) -> Result<Vec<f64>, NumericsError> {
    let n = m.len();
    if d.len() != n {
        return Err(NumericsError::DimensionMismatch { expected: n, found: d.len() });
    }
    let mut c_star = vec![0.0; n];
    let mut x = vec![0.0; n];

    let mut pivot = m.diag[0];
    if !(pivot.abs() > pivot_eps) {
        return Err(NumericsError::SingularPivot { row: 0, pivot });
    }
    if n > 1 {
        c_star[0] = m.sup[0] / pivot;
    }
    x[0] = d[0] / pivot;
    for i in 1..n {
        pivot = m.diag[i] - m.sub[i - 1] * c_star[i - 1];
        if !(pivot.abs() > pivot_eps) {
            return Err(NumericsError::SingularPivot { row: i, pivot });
        }
        if i + 1 < n {
            c_star[i] = m.sup[i] / pivot;
        }
        x[i] = (d[i] - m.sub[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c_star[i] * x[i + 1];
    }
    Ok(x)
}
