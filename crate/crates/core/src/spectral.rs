//! Spectral distribution of a distance-regular network seen from a vertex.
//!
//! Everything is driven by the Jacobi coefficients `(alpha, omega)` of the
//! adjacency operator on the stratification space. From them we get the
//! orthogonal polynomials, the support of the spectral measure (roots of
//! `Q_{d+1}`), the Gauss weights (residues of the Stieltjes transform) and the
//! eigenmatrix `P[i][k] = P_i(x_k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{PstError, Result};
use crate::graph::IntersectionArray;
use crate::tridiag::symmetric_tridiagonal_eigenvalues;

/// Relative gap below which two support points count as coincident.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Allowed deviation of the total Gauss weight from one.
pub const MASS_TOL: f64 = 1e-12;
/// Allowed `max |P W P^t - I|` before the eigenmatrix is rejected.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;
/// Minimum distance of a Stieltjes evaluation point from the support.
pub const POLE_TOL: f64 = 1e-8;

/// Quantum-decomposition (Jacobi) parameters.
///
/// `alpha` holds `alpha_0..=alpha_d`; `omega` holds `omega_1..=omega_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QdParameters {
    alpha: Vec<f64>,
    omega: Vec<f64>,
}

impl QdParameters {
    pub fn new(alpha: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if alpha.len() != omega.len() + 1 || omega.is_empty() {
            return Err(PstError::Domain(format!(
                "need d+1 alphas and d omegas with d >= 1, got {} and {}",
                alpha.len(),
                omega.len()
            )));
        }
        if alpha[0] != 0.0 {
            return Err(PstError::Domain(format!("alpha_0 = {} must be 0", alpha[0])));
        }
        if let Some((k, w)) = omega.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(PstError::Domain(format!("omega_{} = {w} must be positive", k + 1)));
        }
        Ok(Self { alpha, omega })
    }

    /// `alpha_k = kappa - b_k - c_k`, `omega_k = b_{k-1} c_k`, with
    /// `b_d = c_0 = 0`.
    pub fn from_intersection(ia: &IntersectionArray, kappa: u64) -> Result<Self> {
        let d = ia.b.len();
        if ia.c.len() != d || d == 0 {
            return Err(PstError::Domain(format!(
                "malformed intersection array: {} b's and {} c's",
                d,
                ia.c.len()
            )));
        }
        let b = |k: usize| if k < d { ia.b[k] as f64 } else { 0.0 };
        let c = |k: usize| if k == 0 { 0.0 } else { ia.c[k - 1] as f64 };
        let kappa = kappa as f64;
        let alpha = (0..=d).map(|k| kappa - b(k) - c(k)).collect();
        let omega = (1..=d).map(|k| b(k - 1) * c(k)).collect();
        Self::new(alpha, omega)
    }

    /// Closed form for `J(2m, m)`: `alpha_l = 2l(m-l)`, `omega_l = l^2 (m-l+1)^2`.
    pub fn johnson(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(PstError::Domain("m must be at least 1".into()));
        }
        let m = m as f64;
        let alpha = (0..=m as u32)
            .map(|l| {
                let l = l as f64;
                2.0 * l * (m - l)
            })
            .collect();
        let omega = (1..=m as u32)
            .map(|l| {
                let l = l as f64;
                (l * (m - l + 1.0)).powi(2)
            })
            .collect();
        Self::new(alpha, omega)
    }

    /// Diameter `d`.
    pub fn diameter(&self) -> usize {
        self.omega.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `omega_1..=omega_d` (index 0 holds `omega_1`).
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    fn beta(&self, k: usize) -> f64 {
        self.omega[k - 1].sqrt()
    }

    fn beta_dd(&self) -> Vec<TwoFloat> {
        self.omega.iter().map(|&w| TwoFloat::from(w).sqrt()).collect()
    }

    fn inv_beta_dd(&self) -> Vec<TwoFloat> {
        self.beta_dd().into_iter().map(recip_dd).collect()
    }

    /// Coefficients of `P_0, .., P_d` in the monomial basis, lowest degree
    /// first.
    pub fn orthonormal_coefficients(&self) -> Vec<Vec<f64>> {
        let d = self.diameter();
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for k in 0..d {
            // P_{k+1} = ((x - alpha_k) P_k - beta_k P_{k-1}) / beta_{k+1}
            let mut next = vec![0.0; k + 2];
            for (j, &c) in polys[k].iter().enumerate() {
                next[j + 1] += c;
                next[j] -= self.alpha[k] * c;
            }
            if k > 0 {
                for (j, &c) in polys[k - 1].iter().enumerate() {
                    next[j] -= self.beta(k) * c;
                }
            }
            let b = self.beta(k + 1);
            next.iter_mut().for_each(|c| *c /= b);
            polys.push(next);
        }
        polys
    }
}

/// Values of the three polynomial families at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyValues {
    /// `Q_0(x)..=Q_{d+1}(x)`, monic.
    pub q: Vec<f64>,
    /// `Q^(1)_0(x)..=Q^(1)_d(x)`, the associated (numerator) polynomials.
    pub q_assoc: Vec<f64>,
    /// `P_0(x)..=P_d(x)` with `P_k = Q_k / sqrt(omega_1 .. omega_k)`.
    pub p: Vec<f64>,
}

/// Evaluates the recurrences directly at `x`.
pub fn eval_polys(qd: &QdParameters, x: f64) -> PolyValues {
    let d = qd.diameter();
    let (alpha, omega) = (&qd.alpha, &qd.omega);

    let mut q = Vec::with_capacity(d + 2);
    q.push(1.0);
    q.push(x - alpha[0]);
    for k in 1..=d {
        q.push((x - alpha[k]) * q[k] - omega[k - 1] * q[k - 1]);
    }

    let mut q_assoc = Vec::with_capacity(d + 1);
    q_assoc.push(1.0);
    if d >= 1 {
        q_assoc.push(x - alpha[1]);
    }
    for k in 1..d {
        q_assoc.push((x - alpha[k + 1]) * q_assoc[k] - omega[k] * q_assoc[k - 1]);
    }

    PolyValues {
        q,
        q_assoc,
        p: orthonormal_values(qd, x),
    }
}

/// `P_0(x)..=P_d(x)` through the normalized recurrence, which stays in range
/// where the monic values would overflow.
pub fn orthonormal_values(qd: &QdParameters, x: f64) -> Vec<f64> {
    let d = qd.diameter();
    let mut p = Vec::with_capacity(d + 1);
    p.push(1.0);
    for k in 0..d {
        let prev = if k > 0 { qd.beta(k) * p[k - 1] } else { 0.0 };
        p.push(((x - qd.alpha[k]) * p[k] - prev) / qd.beta(k + 1));
    }
    p
}

/// Support of the spectral measure: the `d + 1` roots of `Q_{d+1}`, found as
/// eigenvalues of the Jacobi matrix `tridiag(sqrt(omega), alpha, sqrt(omega))`
/// and then polished by Newton steps on `Q_{d+1}` in double-double
/// arithmetic. Sorted descending.
pub fn eigenvalue_support(qd: &QdParameters) -> Result<Vec<f64>> {
    let off: Vec<f64> = qd.omega.iter().map(|w| w.sqrt()).collect();
    let mut points = symmetric_tridiagonal_eigenvalues(&qd.alpha, &off)?;
    points.reverse();
    let spread = points[0] - points[points.len() - 1];
    for w in points.windows(2) {
        if w[0] - w[1] < DEGENERACY_TOL * spread {
            return Err(PstError::Degenerate(w[0], w[1]));
        }
    }
    let half_gaps: Vec<f64> = (0..points.len())
        .map(|k| {
            let up = if k > 0 { points[k - 1] - points[k] } else { f64::INFINITY };
            let down = points.get(k + 1).map_or(f64::INFINITY, |x| points[k] - x);
            0.5 * up.min(down)
        })
        .collect();
    for (x, gap) in points.iter_mut().zip(half_gaps) {
        *x = polish_root(qd, *x, gap);
        // below the attainable accuracy; avoids printing e.g. 1.7e-260
        if x.abs() < f64::EPSILON * spread {
            *x = 0.0;
        }
    }
    Ok(points)
}

/// Reciprocal to full double-double accuracy. `TwoFloat` division and
/// `recip` only deliver about `f64` precision, so refine with two Newton
/// steps, which use multiplication alone.
fn recip_dd(b: TwoFloat) -> TwoFloat {
    let one = TwoFloat::from(1.0);
    let mut r = TwoFloat::from(b.hi().recip());
    for _ in 0..2 {
        r += r * (one - b * r);
    }
    r
}

/// Newton iteration on the normalized monic top polynomial. Steps that
/// would leave the root's isolation interval are refused.
fn polish_root(qd: &QdParameters, x0: f64, max_shift: f64) -> f64 {
    let start = TwoFloat::from(x0);
    let mut x = start;
    for _ in 0..4 {
        let (value, slope) = monic_top_dd(qd, x);
        if value == 0.0 || slope == 0.0 {
            break;
        }
        let next = x - value * recip_dd(slope);
        let shift: f64 = (next - start).into();
        if !(shift.abs() < max_shift) {
            break;
        }
        x = next;
    }
    x.into()
}

/// `Q_{d+1}(x) / sqrt(omega_1 .. omega_d)` and its derivative, in
/// double-double arithmetic.
fn monic_top_dd(qd: &QdParameters, x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let d = qd.diameter();
    let beta = qd.beta_dd();
    let inv_beta = qd.inv_beta_dd();
    let zero = TwoFloat::from(0.0);
    let (mut p_prev, mut p) = (zero, TwoFloat::from(1.0));
    let (mut dp_prev, mut dp) = (zero, zero);
    for k in 0..=d {
        let back = if k > 0 { beta[k - 1] } else { zero };
        let shift = x - qd.alpha[k];
        let mut next = shift * p - back * p_prev;
        let mut dnext = p + shift * dp - back * dp_prev;
        if k < d {
            next *= inv_beta[k];
            dnext *= inv_beta[k];
        }
        (p_prev, p) = (p, next);
        (dp_prev, dp) = (dp, dnext);
    }
    (p, dp)
}

/// `P_0(x)..=P_d(x)` in double-double arithmetic, for `x` a support point.
///
/// At a root of `Q_{d+1}` the vector `(P_i(x))` is an eigenvector of the
/// Jacobi matrix and also satisfies the recurrence run backwards from its
/// last row. Forward evaluation is used up to the largest entry and the
/// backward sequence, rescaled to match there, beyond it. Near the top of the
/// spectrum the values rise to `sqrt(kappa_i)` and fall back to `P_d = 1`;
/// the falling tail is unrecoverable by forward recurrence alone.
fn support_values_dd(qd: &QdParameters, x: f64) -> Vec<TwoFloat> {
    let d = qd.diameter();
    let beta = qd.beta_dd();
    let inv_beta = qd.inv_beta_dd();
    let xt = TwoFloat::from(x);
    let mut p = Vec::with_capacity(d + 1);
    p.push(TwoFloat::from(1.0));
    for k in 0..d {
        let back = if k > 0 { beta[k - 1] * p[k - 1] } else { TwoFloat::from(0.0) };
        p.push(((xt - qd.alpha[k]) * p[k] - back) * inv_beta[k]);
    }
    let peak = (0..=d)
        .max_by(|&a, &b| f64::from(p[a].abs()).total_cmp(&f64::from(p[b].abs())))
        .unwrap_or(d);
    if peak == d {
        return p;
    }

    // x g_k = beta_{k+1} g_{k+1} + alpha_k g_k + beta_k g_{k-1}, g_d = 1
    let mut g = vec![TwoFloat::from(0.0); d + 1];
    g[d] = TwoFloat::from(1.0);
    g[d - 1] = (xt - qd.alpha[d]) * inv_beta[d - 1];
    for k in (peak + 1..d).rev() {
        g[k - 1] = ((xt - qd.alpha[k]) * g[k] - beta[k] * g[k + 1]) * inv_beta[k - 1];
    }
    if g[peak] == 0.0 {
        return p;
    }
    let scale = p[peak] * recip_dd(g[peak]);
    for i in peak + 1..=d {
        p[i] = g[i] * scale;
    }
    p
}

/// Discrete probability measure `sum_k gamma_k delta(x - x_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralMeasure {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_k gamma_k x_k^j`.
    pub fn moment(&self, j: u32) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, g)| g * x.powi(j as i32))
            .sum()
    }

    /// Partial-fraction form `sum_k gamma_k / (z - x_k)`.
    pub fn stieltjes(&self, z: Complex64) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &g)| g / (z - x))
            .sum()
    }

    /// Reorders support and weights by `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            points: order.iter().map(|&k| self.points[k]).collect(),
            weights: order.iter().map(|&k| self.weights[k]).collect(),
        }
    }
}

/// Gauss weights at the support points.
///
/// At a root `x_l` of `Q_{d+1}` the residue `Q^(1)_d(x_l) / Q'_{d+1}(x_l)` of
/// `G(z) = Q^(1)_d(z) / Q_{d+1}(z)` equals the Christoffel number
/// `1 / sum_i P_i(x_l)^2`. The latter is a sum of positive terms and is
/// evaluated here in double-double arithmetic; [`residue_weight`] gives the
/// residue form directly.
pub fn gauss_weights(qd: &QdParameters, points: &[f64]) -> Result<SpectralMeasure> {
    let d = qd.diameter();
    if points.len() != d + 1 {
        return Err(PstError::Domain(format!(
            "expected {} support points, got {}",
            d + 1,
            points.len()
        )));
    }
    let weights: Vec<f64> = points
        .iter()
        .map(|&x| {
            let norm = support_values_dd(qd, x)
                .into_iter()
                .fold(TwoFloat::from(0.0), |acc, p| acc + p * p);
            f64::from(recip_dd(norm))
        })
        .collect();
    if let Some((k, g)) = weights.iter().enumerate().find(|(_, g)| !(**g > 0.0)) {
        return Err(PstError::Numerical(format!(
            "Gauss weight at x = {} is {g}",
            points[k]
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > MASS_TOL {
        return Err(PstError::WeightSum { sum });
    }
    Ok(SpectralMeasure {
        points: points.to_vec(),
        weights,
    })
}

/// Residue `Q^(1)_d(x) / Q'_{d+1}(x)` of the Stieltjes transform at a pole.
///
/// Numerator and derivative are carried in normalized form: with
/// `beta_k = sqrt(omega_k)`, `Q_{d+1} = beta_1..beta_d * p_{d+1}` and
/// `Q^(1)_d = beta_2..beta_d * r_d`, so the residue is
/// `r_d / (beta_1 p'_{d+1})`. The derivative comes from differentiating the
/// recurrence. Loses relative accuracy at support points with tiny weight
/// once `d` grows past about 20.
pub fn residue_weight(qd: &QdParameters, x: f64) -> f64 {
    let d = qd.diameter();
    let alpha = &qd.alpha;
    let beta = |k: usize| qd.beta(k);

    let (mut r_prev, mut r) = (0.0, 1.0);
    for k in 1..=d {
        let back = if k > 1 { beta(k) } else { 0.0 };
        let scale = if k < d { beta(k + 1) } else { 1.0 };
        let next = ((x - alpha[k]) * r - back * r_prev) / scale;
        (r_prev, r) = (r, next);
    }
    let (_, slope) = monic_top_dd(qd, TwoFloat::from(x));
    r / (beta(1) * f64::from(slope))
}

/// `G(z)` from the finite continued fraction
/// `1 / (z - alpha_0 - omega_1 / (z - alpha_1 - omega_2 / ...))`,
/// evaluated bottom-up.
pub fn stieltjes_value(qd: &QdParameters, z: Complex64) -> Result<Complex64> {
    for x in eigenvalue_support(qd)? {
        let dist = (z - x).norm();
        if dist <= POLE_TOL {
            return Err(PstError::PoleProximity {
                z: z.to_string(),
                pole: x,
                distance: dist,
            });
        }
    }
    let d = qd.diameter();
    let mut tail = z - qd.alpha[d];
    for k in (0..d).rev() {
        tail = z - qd.alpha[k] - qd.omega[k] / tail;
    }
    Ok(1.0 / tail)
}

/// Eigenmatrix `P[i][k] = P_i(x_k)` together with the Gauss weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenMatrix {
    pub p: DMatrix<f64>,
    pub measure: SpectralMeasure,
}

impl EigenMatrix {
    pub fn weight_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            &self.measure.weights,
        ))
    }

    /// `max |P W P^t - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.p.nrows();
        let pwpt = &self.p * self.weight_matrix() * self.p.transpose();
        (pwpt - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// `P^{-1} = W P^t`.
    pub fn inverse(&self) -> DMatrix<f64> {
        self.weight_matrix() * self.p.transpose()
    }

    /// Values of the top polynomial `P_d(x_k)`.
    pub fn last_row(&self) -> Vec<f64> {
        self.p.row(self.p.nrows() - 1).iter().copied().collect()
    }

    /// Reorders columns (support points) by `order[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let p = DMatrix::from_fn(self.p.nrows(), order.len(), |i, k| self.p[(i, order[k])]);
        Self {
            p,
            measure: self.measure.permuted(order),
        }
    }
}

pub fn eigenmatrix(qd: &QdParameters, measure: &SpectralMeasure) -> Result<EigenMatrix> {
    let d = qd.diameter();
    if measure.len() != d + 1 {
        return Err(PstError::Domain(format!(
            "measure has {} points, diameter is {d}",
            measure.len()
        )));
    }
    let columns: Vec<Vec<f64>> = measure
        .points
        .iter()
        .map(|&x| support_values_dd(qd, x).into_iter().map(f64::from).collect())
        .collect();
    let p = DMatrix::from_fn(d + 1, d + 1, |i, k| columns[k][i]);
    let em = EigenMatrix {
        p,
        measure: measure.clone(),
    };
    let residual = em.orthonormality_residual();
    if !(residual <= ORTHONORMALITY_TOL) {
        return Err(PstError::Numerical(format!(
            "P W P^t deviates from identity by {residual:e}"
        )));
    }
    Ok(em)
}

/// Jacobi parameters, measure and eigenmatrix computed together.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub qd: QdParameters,
    pub eigen: EigenMatrix,
}

impl Spectrum {
    pub fn new(qd: QdParameters) -> Result<Self> {
        let points = eigenvalue_support(&qd)?;
        let measure = gauss_weights(&qd, &points)?;
        let eigen = eigenmatrix(&qd, &measure)?;
        Ok(Self { qd, eigen })
    }

    pub fn johnson(m: u32) -> Result<Self> {
        Self::new(QdParameters::johnson(m)?)
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.eigen.measure
    }
}

/// Closed-form adjacency eigenvalues of `J(2m, m)`: `m^2 - k(2m + 1 - k)`,
/// `k = 0..=m`, descending.
pub fn johnson_eigenvalues(m: u32) -> Vec<f64> {
    let m = m as i64;
    (0..=m).map(|k| (m * m - k * (2 * m + 1 - k)) as f64).collect()
}
