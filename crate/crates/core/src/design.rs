//! Coupling constants for perfect transfer between antipodes.
//!
//! The Hamiltonian is `H = sum_l J_l P_l(A)`, so on the spectral support it
//! acts by `E_k = sum_l J_l P_l(x_k)`, i.e. `E = P^t J`. Transfer from the
//! reference vertex to its antipode at time `t0` with phase `theta` requires
//! `exp(-i t0 E_k) = exp(i theta) P_d(x_k)` for every `k`. Since
//! `P_d(x_k) = +-1` on an antipodal network, the admissible energies are
//!
//! ```text
//! E_k = -(theta + (2 l_k + f_k) pi) / t0,   f_k = (1 - P_d(x_k)) / 2,
//! ```
//!
//! for arbitrary integers `l_k`, and `J = (P^t)^{-1} E = P W E`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PstError, Result};
use crate::spectral::{EigenMatrix, QdParameters, SpectralMeasure, Spectrum};

/// Tolerance for reading `P_d(x_k)` as `+1` or `-1`.
pub const SIGN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignInput {
    pub m: u32,
    pub t0: f64,
    pub theta: f64,
    /// Branch integers `l_0..=l_m`, indexed like the support (descending).
    pub l_offsets: Vec<i64>,
}

impl DesignInput {
    /// Defaults: `t0 = 1`, `theta = 0`, all branch integers zero.
    pub fn new(m: u32) -> Self {
        Self {
            m,
            t0: 1.0,
            theta: 0.0,
            l_offsets: vec![0; m as usize + 1],
        }
    }

    pub fn t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    pub fn theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn offsets(mut self, l_offsets: Vec<i64>) -> Self {
        self.l_offsets = l_offsets;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(PstError::Domain("m must be at least 1".into()));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(PstError::Domain(format!(
                "transfer time must be positive and finite, got {}",
                self.t0
            )));
        }
        if !self.theta.is_finite() {
            return Err(PstError::Domain("theta must be finite".into()));
        }
        if self.l_offsets.len() != self.m as usize + 1 {
            return Err(PstError::Domain(format!(
                "expected {} branch offsets, got {}",
                self.m + 1,
                self.l_offsets.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PstDesign {
    pub input: DesignInput,
    pub f_bits: Vec<u8>,
    /// `J_0..=J_m`, multiplying `P_0(A)..=P_m(A)`.
    pub couplings: Vec<f64>,
    /// `E_k = sum_l J_l P_l(x_k)`.
    pub hamiltonian_eigenvalues: Vec<f64>,
    pub measure: SpectralMeasure,
}

impl PstDesign {
    pub fn m(&self) -> u32 {
        self.input.m
    }

    /// Jacobi parameters of `J(2m, m)`, which every design is built on.
    pub fn qd(&self) -> Result<QdParameters> {
        QdParameters::johnson(self.input.m)
    }

    /// Energies implied by the stored couplings (not the stored energies).
    pub fn energies_from_couplings(&self, eigen: &EigenMatrix) -> Vec<f64> {
        (eigen.p.transpose() * nalgebra::DVector::from_column_slice(&self.couplings))
            .iter()
            .copied()
            .collect()
    }

    /// `sqrt(sum_k gamma_k ((P^t J)_k - E_k)^2)`, which equals
    /// `|J - P W E|` by orthonormality. Weighting by `gamma_k` keeps the
    /// measure meaningful for large `m`, where `P^t J` at support points of
    /// negligible weight is dominated by rounding.
    pub fn coupling_residual(&self, eigen: &EigenMatrix) -> f64 {
        self.energies_from_couplings(eigen)
            .iter()
            .zip(&self.hamiltonian_eigenvalues)
            .zip(&eigen.measure.weights)
            .map(|((a, b), g)| g * (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Same design with different couplings; the energies are recomputed.
    pub fn with_couplings(&self, eigen: &EigenMatrix, couplings: Vec<f64>) -> Self {
        let mut out = self.clone();
        out.couplings = couplings;
        out.hamiltonian_eigenvalues = out.energies_from_couplings(eigen);
        out
    }

    /// `max_k |exp(-i t0 E_k) - exp(i theta) P_d(x_k)|` over the stored
    /// energies.
    pub fn phase_mismatch(&self, eigen: &EigenMatrix) -> f64 {
        let target = Complex64::from_polar(1.0, self.input.theta);
        self.hamiltonian_eigenvalues
            .iter()
            .zip(eigen.last_row())
            .map(|(&e, pd)| {
                (Complex64::from_polar(1.0, -self.input.t0 * e) - target * pd).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Parity bits `f_k`: 0 where `P_d(x_k) = +1`, 1 where it is `-1`.
pub fn phase_targets(eigen: &EigenMatrix) -> Result<Vec<u8>> {
    eigen
        .last_row()
        .iter()
        .zip(&eigen.measure.points)
        .map(|(&v, &x)| {
            if (v - 1.0).abs() <= SIGN_TOL {
                Ok(0)
            } else if (v + 1.0).abs() <= SIGN_TOL {
                Ok(1)
            } else {
                Err(PstError::NotAntipodal { point: x, value: v })
            }
        })
        .collect()
}

pub fn design_couplings(
    qd: &QdParameters,
    measure: &SpectralMeasure,
    eigen: &EigenMatrix,
    input: &DesignInput,
) -> Result<PstDesign> {
    input.validate()?;
    let d = qd.diameter();
    if d != input.m as usize || measure.len() != d + 1 || eigen.p.nrows() != d + 1 {
        return Err(PstError::Domain(format!(
            "inconsistent sizes: m = {}, diameter = {d}, {} support points",
            input.m,
            measure.len()
        )));
    }
    let f_bits = phase_targets(eigen)?;
    let energies: Vec<f64> = f_bits
        .iter()
        .zip(&input.l_offsets)
        // `+ 0.0` turns a negative zero into zero
        .map(|(&f, &l)| -(input.theta + (2 * l + f as i64) as f64 * PI) / input.t0 + 0.0)
        .collect();

    // J = P W E
    let weighted: Vec<f64> = energies
        .iter()
        .zip(&measure.weights)
        .map(|(e, g)| e * g)
        .collect();
    let couplings: Vec<f64> = (0..=d)
        .map(|i| (0..=d).map(|k| eigen.p[(i, k)] * weighted[k]).sum())
        .collect();

    Ok(PstDesign {
        input: input.clone(),
        f_bits,
        couplings,
        hamiltonian_eigenvalues: energies,
        measure: measure.clone(),
    })
}

/// Full pipeline on `J(2m, m)`.
pub fn design(input: &DesignInput) -> Result<(PstDesign, Spectrum)> {
    input.validate()?;
    let spectrum = Spectrum::johnson(input.m)?;
    let design = design_couplings(&spectrum.qd, spectrum.measure(), &spectrum.eigen, input)?;
    Ok((design, spectrum))
}

/// `sum_l J_l P_l(A)` expanded as `c_0 + c_1 A + .. + c_m A^m`.
pub fn hamiltonian_in_adjacency_basis(design: &PstDesign, qd: &QdParameters) -> Vec<f64> {
    let polys = qd.orthonormal_coefficients();
    let mut coeffs = vec![0.0; polys.len()];
    for (j, poly) in design.couplings.iter().zip(&polys) {
        for (c, a) in coeffs.iter_mut().zip(poly) {
            *c += j * a;
        }
    }
    coeffs
}
