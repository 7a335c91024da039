//! Exact rational counterpart of [`crate::spectral`].
//!
//! Works whenever the Jacobi parameters are integers and every partial
//! product `omega_1 .. omega_k` is a perfect square, which holds for the
//! Johnson family. Support points are then integers (rational roots of a
//! monic integer polynomial), weights are rational, and so is `P`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{PstError, Result};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactQd {
    pub alpha: Vec<BigRational>,
    pub omega: Vec<BigRational>,
}

impl ExactQd {
    pub fn johnson(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(PstError::Domain("m must be at least 1".into()));
        }
        let m = m as i64;
        Ok(Self {
            alpha: (0..=m).map(|l| int(2 * l * (m - l))).collect(),
            omega: (1..=m).map(|l| int((l * (m - l + 1)).pow(2))).collect(),
        })
    }

    pub fn diameter(&self) -> usize {
        self.omega.len()
    }

    /// `Q_0(x)..=Q_{d+1}(x)`.
    pub fn q_values(&self, x: &BigRational) -> Vec<BigRational> {
        let d = self.diameter();
        let mut q = vec![BigRational::one(), x - &self.alpha[0]];
        for k in 1..=d {
            let next = (x - &self.alpha[k]) * &q[k] - &self.omega[k - 1] * &q[k - 1];
            q.push(next);
        }
        q
    }

    /// `Q^(1)_0(x)..=Q^(1)_d(x)`.
    pub fn q_assoc_values(&self, x: &BigRational) -> Vec<BigRational> {
        let d = self.diameter();
        let mut q = vec![BigRational::one(), x - &self.alpha[1]];
        for k in 1..d {
            let next = (x - &self.alpha[k + 1]) * &q[k] - &self.omega[k] * &q[k - 1];
            q.push(next);
        }
        q.truncate(d + 1);
        q
    }

    /// `Q'_{d+1}(x)`, by differentiating the recurrence.
    pub fn q_top_derivative(&self, x: &BigRational) -> BigRational {
        let d = self.diameter();
        let (mut q_prev, mut q) = (BigRational::zero(), BigRational::one());
        let (mut dq_prev, mut dq) = (BigRational::zero(), BigRational::zero());
        for k in 0..=d {
            let back = if k > 0 { self.omega[k - 1].clone() } else { BigRational::zero() };
            let shift = x - &self.alpha[k];
            let next = &shift * &q - &back * &q_prev;
            let dnext = &q + &shift * &dq - &back * &dq_prev;
            q_prev = std::mem::replace(&mut q, next);
            dq_prev = std::mem::replace(&mut dq, dnext);
        }
        dq
    }

    fn is_integral(&self) -> bool {
        self.alpha.iter().chain(&self.omega).all(BigRational::is_integer)
    }

    /// Integer roots of `Q_{d+1}`, descending. Fails unless all `d + 1`
    /// roots are integers.
    pub fn support(&self) -> Result<Vec<BigRational>> {
        if !self.is_integral() {
            return Err(PstError::Domain(
                "exact support needs integer Jacobi parameters".into(),
            ));
        }
        let d = self.diameter();
        // Gershgorin radius of the Jacobi matrix, rounded up
        let mut bound = BigInt::zero();
        for k in 0..=d {
            let mut r = self.alpha[k].to_integer().abs();
            for w in [k.checked_sub(1), (k < d).then_some(k)].into_iter().flatten() {
                r += self.omega[w].to_integer().sqrt() + 1;
            }
            bound = bound.max(r);
        }
        let mut roots = Vec::with_capacity(d + 1);
        let mut x = bound.clone();
        while x >= -&bound && roots.len() <= d {
            let xr = BigRational::from_integer(x.clone());
            if self.q_values(&xr)[d + 1].is_zero() {
                roots.push(xr);
            }
            x -= 1;
        }
        if roots.len() != d + 1 {
            return Err(PstError::Numerical(format!(
                "Q_{} has {} integer roots, expected {}",
                d + 1,
                roots.len(),
                d + 1
            )));
        }
        Ok(roots)
    }

    pub fn weights(&self, points: &[BigRational]) -> Result<Vec<BigRational>> {
        let d = self.diameter();
        let weights: Vec<BigRational> = points
            .iter()
            .map(|x| self.q_assoc_values(x)[d].clone() / self.q_top_derivative(x))
            .collect();
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(PstError::WeightSum {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(weights)
    }

    /// `sqrt(omega_1 .. omega_k)` for `k = 0..=d`.
    fn norms(&self) -> Result<Vec<BigRational>> {
        let mut out = vec![BigRational::one()];
        let mut prod = BigRational::one();
        for (k, w) in self.omega.iter().enumerate() {
            prod *= w;
            let root = rational_sqrt(&prod).ok_or_else(|| {
                PstError::Domain(format!(
                    "omega_1..omega_{} = {prod} is not a rational square",
                    k + 1
                ))
            })?;
            out.push(root);
        }
        Ok(out)
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let (n, d) = (x.numer(), x.denom());
    if n.is_negative() {
        return None;
    }
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

/// Support, weights and eigenmatrix in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrum {
    pub qd: ExactQd,
    pub points: Vec<BigRational>,
    pub weights: Vec<BigRational>,
    /// `p[i][k] = P_i(x_k)`.
    pub p: Vec<Vec<BigRational>>,
}

impl ExactSpectrum {
    pub fn new(qd: ExactQd) -> Result<Self> {
        let points = qd.support()?;
        let weights = qd.weights(&points)?;
        let norms = qd.norms()?;
        let d = qd.diameter();
        let columns: Vec<Vec<BigRational>> = points.iter().map(|x| qd.q_values(x)).collect();
        let p = (0..=d)
            .map(|i| columns.iter().map(|q| &q[i] / &norms[i]).collect())
            .collect();
        let spectrum = Self { qd, points, weights, p };
        if !spectrum.is_orthonormal() {
            return Err(PstError::Integrity("P W P^t != I in exact arithmetic".into()));
        }
        Ok(spectrum)
    }

    pub fn johnson(m: u32) -> Result<Self> {
        Self::new(ExactQd::johnson(m)?)
    }

    /// `P W P^t == I`, exactly.
    pub fn is_orthonormal(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s: BigRational = (0..n)
                    .map(|k| &self.weights[k] * &self.p[i][k] * &self.p[j][k])
                    .sum();
                if i == j {
                    s.is_one()
                } else {
                    s.is_zero()
                }
            })
        })
    }

    pub fn points_f64(&self) -> Vec<f64> {
        self.points.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}
