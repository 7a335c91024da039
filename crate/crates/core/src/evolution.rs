//! Time evolution under a designed Hamiltonian.
//!
//! Three independent routes to the stratum amplitudes
//! `f_i(t) = <phi_i| exp(-iHt) |phi_0>`:
//!
//! * the spectral formula `f_i(t) = sum_k gamma_k P_i(x_k) exp(-i E_k t)`,
//!   which only touches `(m+1) x (m+1)` data;
//! * dense evolution on the `C(2m, m)` vertices of `J(2m, m)`;
//! * the many-body spin oracle in [`crate::spin`].

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::design::{hamiltonian_in_adjacency_basis, PstDesign};
use crate::error::{PstError, Result};
use crate::graph::JohnsonGraph;
use crate::spectral::{EigenMatrix, Spectrum};
use crate::subset::binomial;

/// Allowed asymmetry of an assembled Hamiltonian, relative to its largest
/// entry.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Precomputed `gamma_k P_i(x_k)` and `E_k` for repeated evaluation of the
/// spectral formula.
#[derive(Debug, Clone)]
pub struct AmplitudeEvaluator {
    // weighted[(i, k)] = gamma_k P_i(x_k)
    weighted: DMatrix<f64>,
    energies: Vec<f64>,
}

impl AmplitudeEvaluator {
    /// Energies are taken from the couplings, `E = P^t J`, so a design whose
    /// couplings were altered is evaluated as it would actually evolve.
    pub fn new(design: &PstDesign, eigen: &EigenMatrix) -> Result<Self> {
        let d = eigen.p.nrows();
        if design.couplings.len() != d {
            return Err(PstError::Domain(format!(
                "{} couplings for a spectrum of {d} points",
                design.couplings.len()
            )));
        }
        let weighted =
            DMatrix::from_fn(d, d, |i, k| eigen.measure.weights[k] * eigen.p[(i, k)]);
        Ok(Self {
            weighted,
            energies: design.energies_from_couplings(eigen),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `f_0(t), .., f_m(t)`.
    pub fn at(&self, t: f64) -> Vec<Complex64> {
        let phases: Vec<Complex64> = self
            .energies
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * t))
            .collect();
        (0..self.weighted.nrows())
            .map(|i| {
                self.weighted
                    .row(i)
                    .iter()
                    .zip(&phases)
                    .map(|(w, p)| p * *w)
                    .sum()
            })
            .collect()
    }
}

/// Stratum amplitudes at time `t` by the spectral formula.
pub fn spectral_amplitudes(design: &PstDesign, t: f64) -> Result<Vec<Complex64>> {
    let spectrum = Spectrum::johnson(design.m())?;
    Ok(AmplitudeEvaluator::new(design, &spectrum.eigen)?.at(t))
}

/// Per-vertex amplitudes `f_i / sqrt(kappa_i)`, equal on each stratum by
/// symmetry.
pub fn site_amplitudes(m: u32, strata: &[Complex64]) -> Vec<Complex64> {
    strata
        .iter()
        .enumerate()
        .map(|(i, f)| {
            // sqrt(kappa_i) = C(m, i)
            let root = binomial(m as u64, i as u64).unwrap_or(0) as f64;
            f / root
        })
        .collect()
}

/// Transfer quality at the design time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCheck {
    /// `f_m(t0)`.
    pub amplitude: Complex64,
    /// `max_{i<m} |f_i(t0)|`.
    pub leakage: f64,
    /// `|sum_i |f_i|^2 - 1|`.
    pub unitarity_defect: f64,
}

impl TransferCheck {
    pub fn from_amplitudes(f: &[Complex64]) -> Self {
        let (last, rest) = f.split_last().expect("at least one amplitude");
        let total: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        Self {
            amplitude: *last,
            leakage: rest.iter().map(|z| z.norm()).fold(0.0, f64::max),
            unitarity_defect: (total - 1.0).abs(),
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.amplitude.norm() >= 1.0 - tol && self.leakage <= tol
    }
}

/// Spectral check at `t0`.
pub fn certify_spectral(design: &PstDesign, eigen: &EigenMatrix) -> Result<TransferCheck> {
    let f = AmplitudeEvaluator::new(design, eigen)?.at(design.input.t0);
    Ok(TransferCheck::from_amplitudes(&f))
}

/// `exp(-iHt)` for a real symmetric `H`, through one eigendecomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl Propagator {
    /// Fails when `H` is not symmetric to [`HERMITICITY_TOL`] relative to
    /// `max(1, max |H|)`.
    pub fn new(h: DMatrix<f64>) -> Result<Self> {
        if !h.is_square() {
            return Err(PstError::Domain("Hamiltonian must be square".into()));
        }
        let residual = (&h - h.transpose()).amax();
        let scale = h.amax().max(1.0);
        if !(residual <= HERMITICITY_TOL * scale) {
            return Err(PstError::Numerical(format!(
                "Hamiltonian asymmetry {residual:e} exceeds tolerance"
            )));
        }
        let sym = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `exp(-iHt) psi` for a real initial vector.
    pub fn apply(&self, psi: &DVector<f64>, t: f64) -> DVector<Complex64> {
        let coeffs = self.vectors.tr_mul(psi);
        let rotated: DVector<Complex64> = DVector::from_iterator(
            self.dim(),
            coeffs
                .iter()
                .zip(self.eigenvalues.iter())
                .map(|(c, &e)| Complex64::from_polar(*c, -e * t)),
        );
        self.vectors.map(Complex64::from) * rotated
    }
}

/// Sparse symmetric integer operator, rows of `(column, value)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseOperator {
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn to_dense(&self) -> DMatrix<i64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[(i, j)] += v;
            }
        }
        out
    }

    /// `sum_j c_j X^j` by Horner's rule, using sparsity of `X`.
    pub fn polynomial(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        let Some((&top, lower)) = coeffs.split_last() else {
            return DMatrix::zeros(n, n);
        };
        let mut h = DMatrix::from_diagonal_element(n, n, top);
        for &c in lower.iter().rev() {
            // h <- h X + c I, column by column: (h X)[:, v] = sum_u h[:, u] X[u, v]
            let mut next = DMatrix::from_diagonal_element(n, n, c);
            for (u, row) in self.rows.iter().enumerate() {
                let src = h.column(u).clone_owned();
                for &(v, x) in row {
                    next.column_mut(v).axpy(x as f64, &src, 1.0);
                }
            }
            h = next;
        }
        h
    }
}

/// Adjacency of a Johnson graph as a sparse operator.
pub fn adjacency_operator(g: &JohnsonGraph) -> SparseOperator {
    SparseOperator {
        rows: (0..g.len())
            .map(|v| g.neighbors(v).into_iter().map(|u| (u, 1)).collect())
            .collect(),
    }
}

/// Dense evolution on the vertex space of `J(2m, m)`.
#[derive(Debug, Clone)]
pub struct DenseSectorEvolver {
    graph: JohnsonGraph,
    propagator: Propagator,
    strata: Vec<Vec<usize>>,
    reference: usize,
    antipode: usize,
}

impl DenseSectorEvolver {
    pub fn new(graph: &JohnsonGraph, design: &PstDesign, cap: u128) -> Result<Self> {
        if graph.n() != 2 * graph.m() || graph.m() != design.m() {
            return Err(PstError::Domain(format!(
                "design for m = {} needs J({}, {}), got J({}, {})",
                design.m(),
                2 * design.m(),
                design.m(),
                graph.n(),
                graph.m()
            )));
        }
        let n = graph.len() as u128;
        if n > cap {
            return Err(PstError::Capacity {
                what: "dense sector dimension",
                required: n,
                cap,
            });
        }
        let coeffs = hamiltonian_in_adjacency_basis(design, &design.qd()?);
        let h = adjacency_operator(graph).polynomial(&coeffs);
        let reference = 0;
        Ok(Self {
            graph: graph.clone(),
            propagator: Propagator::new(h)?,
            strata: graph.stratify(reference)?.strata,
            reference,
            antipode: graph.antipode(reference)?,
        })
    }

    pub fn graph(&self) -> &JohnsonGraph {
        &self.graph
    }

    pub fn state(&self, t: f64) -> DVector<Complex64> {
        let mut psi = DVector::zeros(self.propagator.dim());
        psi[self.reference] = 1.0;
        self.propagator.apply(&psi, t)
    }

    /// `<antipode| exp(-iHt) |reference>`.
    pub fn antipode_amplitude(&self, t: f64) -> Complex64 {
        self.state(t)[self.antipode]
    }

    /// Projections onto the normalized stratum vectors.
    pub fn stratum_amplitudes(&self, t: f64) -> Vec<Complex64> {
        let psi = self.state(t);
        self.strata
            .iter()
            .map(|s| {
                let sum: Complex64 = s.iter().map(|&v| psi[v]).sum();
                sum / (s.len() as f64).sqrt()
            })
            .collect()
    }

    /// Probability outside the stratum subspace.
    pub fn off_stratum_weight(&self, t: f64) -> f64 {
        let total: f64 = self.state(t).iter().map(|z| z.norm_sqr()).sum();
        let inside: f64 = self.stratum_amplitudes(t).iter().map(|z| z.norm_sqr()).sum();
        (total - inside).abs()
    }
}

/// One-shot `<antipode| exp(-iHt) |reference>` with the default dense cap.
pub fn dense_sector_evolution(g: &JohnsonGraph, design: &PstDesign, t: f64) -> Result<Complex64> {
    Ok(DenseSectorEvolver::new(g, design, crate::graph::DEFAULT_DENSE_CAP)?.antipode_amplitude(t))
}

/// Stratum amplitudes on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Vec<Complex64>>,
}

impl AmplitudeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|sum_i |f_i|^2 - 1|` over the grid.
    pub fn unitarity_defect(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|f| (f.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `(t, |f_m(t)|)` at the grid maximum of `|f_m|`.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.amplitudes)
            .map(|(&t, f)| (t, f.last().map_or(0.0, |z| z.norm())))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Header `t,re_f0,im_f0,..,re_fm,im_fm,abs_fm`, 15 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| PstError::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let width = self.amplitudes.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        for i in 0..width {
            header.push(format!("re_f{i}"));
            header.push(format!("im_f{i}"));
        }
        header.push(format!("abs_f{}", width.saturating_sub(1)));
        w.write_record(&header).map_err(io)?;
        for (t, f) in self.times.iter().zip(&self.amplitudes) {
            let mut row = vec![fmt15(*t)];
            for z in f {
                row.push(fmt15(z.re));
                row.push(fmt15(z.im));
            }
            row.push(fmt15(f.last().map_or(0.0, |z| z.norm())));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| PstError::Io(e.to_string()))
    }
}

fn fmt15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Spectral amplitudes on `steps` equally spaced times in `[t_min, t_max]`.
pub fn fidelity_sweep(
    design: &PstDesign,
    eigen: &EigenMatrix,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<AmplitudeSeries> {
    if steps < 2 {
        return Err(PstError::Domain(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(PstError::Domain(format!(
            "invalid time range [{t_min}, {t_max}]"
        )));
    }
    let eval = AmplitudeEvaluator::new(design, eigen)?;
    let h = (t_max - t_min) / (steps - 1) as f64;
    let times: Vec<f64> = (0..steps)
        .map(|s| if s + 1 == steps { t_max } else { t_min + s as f64 * h })
        .collect();
    let amplitudes = times.iter().map(|&t| eval.at(t)).collect();
    Ok(AmplitudeSeries { times, amplitudes })
}
