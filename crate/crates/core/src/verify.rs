//! Certification of a design against the selected evolution oracles.

use crate::design::PstDesign;
use crate::error::{PstError, Result};
use crate::evolution::{certify_spectral, DenseSectorEvolver, TransferCheck};
use crate::graph::JohnsonGraph;
use crate::spectral::Spectrum;
use crate::spin::{heisenberg_oracle, GhzTransferReport, OracleCaps};
use crate::subset::binomial;

/// Default tolerance for a passing certificate.
pub const CERTIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Oracle {
    Spectral,
    Dense,
    Heisenberg,
}

impl Oracle {
    pub const ALL: [Oracle; 3] = [Oracle::Spectral, Oracle::Dense, Oracle::Heisenberg];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::Spectral => "spectral",
            Oracle::Dense => "dense",
            Oracle::Heisenberg => "heisenberg",
        }
    }

    /// Capacity error if the oracle cannot run for this `m`.
    pub fn feasible(self, m: u32, caps: OracleCaps) -> Result<()> {
        let sector = binomial(2 * m as u64, m as u64).unwrap_or(u128::MAX);
        match self {
            Oracle::Spectral => Ok(()),
            Oracle::Dense if sector > caps.dense => Err(PstError::Capacity {
                what: "dense sector dimension",
                required: sector,
                cap: caps.dense,
            }),
            Oracle::Dense => Ok(()),
            Oracle::Heisenberg => {
                let full = 1u128.checked_shl(2 * m).unwrap_or(u128::MAX);
                if 2 * m >= 64 || full > caps.spin {
                    Err(PstError::Capacity {
                        what: "spin Hilbert space dimension",
                        required: full,
                        cap: caps.spin,
                    })
                } else if sector > caps.dense {
                    Err(PstError::Capacity {
                        what: "spin sector dimension",
                        required: sector,
                        cap: caps.dense,
                    })
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub tol: f64,
    /// Largest deviation of the stored support and weights from recomputed
    /// ones.
    pub measure_deviation: f64,
    /// `|J - P W E|` against the stored energies.
    pub coupling_residual: f64,
    /// Phase matching of the stored energies.
    pub phase_mismatch: f64,
    pub spectral: Option<TransferCheck>,
    pub dense: Option<TransferCheck>,
    pub heisenberg: Option<GhzTransferReport>,
}

impl VerifyReport {
    /// Every selected check within `tol`.
    pub fn passed(&self) -> bool {
        let tol = self.tol;
        self.measure_deviation <= tol
            && self.coupling_residual <= tol
            && self.phase_mismatch <= tol
            && self.spectral.is_none_or(|c| c.passes(tol))
            && self.dense.is_none_or(|c| c.passes(tol))
            && self
                .heisenberg
                .is_none_or(|r| r.ghz_fidelity >= 1.0 - tol && r.ideal_distance <= tol)
    }

    /// Largest `max_{i<m} |f_i(t0)|` across stratum oracles.
    pub fn leakage(&self) -> f64 {
        [self.spectral, self.dense]
            .into_iter()
            .flatten()
            .map(|c| c.leakage)
            .fold(0.0, f64::max)
    }
}

/// Runs the consistency checks and each selected oracle at `t0`.
///
/// Feasibility of every oracle is checked before any of them runs.
pub fn verify_design(
    design: &PstDesign,
    oracles: &[Oracle],
    caps: OracleCaps,
    tol: f64,
) -> Result<VerifyReport> {
    let m = design.m();
    for o in oracles {
        o.feasible(m, caps)?;
    }
    let spectrum = Spectrum::johnson(m)?;
    let eigen = &spectrum.eigen;
    if design.couplings.len() != eigen.p.nrows()
        || design.hamiltonian_eigenvalues.len() != eigen.p.nrows()
        || design.measure.len() != eigen.p.nrows()
    {
        return Err(PstError::Domain("design sizes do not match m".into()));
    }
    let measure = spectrum.measure();
    let measure_deviation = measure
        .points
        .iter()
        .zip(&design.measure.points)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .chain(
            measure
                .weights
                .iter()
                .zip(&design.measure.weights)
                .map(|(a, b)| (a - b).abs()),
        )
        .fold(0.0, f64::max);

    let t0 = design.input.t0;
    let mut report = VerifyReport {
        tol,
        measure_deviation,
        coupling_residual: design.coupling_residual(eigen),
        phase_mismatch: design.phase_mismatch(eigen),
        spectral: None,
        dense: None,
        heisenberg: None,
    };
    for o in oracles {
        match o {
            Oracle::Spectral => report.spectral = Some(certify_spectral(design, eigen)?),
            Oracle::Dense => {
                let g = JohnsonGraph::antipodal(m)?;
                let ev = DenseSectorEvolver::new(&g, design, caps.dense)?;
                report.dense = Some(TransferCheck::from_amplitudes(&ev.stratum_amplitudes(t0)));
            }
            Oracle::Heisenberg => report.heisenberg = Some(heisenberg_oracle(m, design, t0, caps)?),
        }
    }
    Ok(report)
}
