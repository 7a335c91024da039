//! Many-body Heisenberg oracle on `2m` spin-1/2 sites.
//!
//! Basis states are bit masks, bit `i` set meaning site `i + 1` is excited.
//! Sites `1..=m` carry the input register `A`, sites `m+1..=2m` the output
//! register `B`. The exchange operator
//!
//! ```text
//! X = 1/2 sum_{i<j} sigma_i . sigma_j + (m/2) I
//! ```
//!
//! restricted to masks of popcount `m` is the adjacency matrix of
//! `J(2m, m)` in colex order, and it acts on the vacuum as `m^2`. Both facts
//! are checked in integer arithmetic before any evolution.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::design::{hamiltonian_in_adjacency_basis, PstDesign};
use crate::error::{PstError, Result};
use crate::evolution::{Propagator, SparseOperator};
use crate::graph::{JohnsonGraph, DEFAULT_DENSE_CAP};
use crate::subset::{binomial, colex_rank};

/// Default cap on `2^(2m)`.
pub const DEFAULT_SPIN_CAP: u128 = 1 << 16;

/// Largest `m` evolved on the full `2^(2m)` space; beyond it only the
/// vacuum and the `m`-excitation sector are kept.
pub const FULL_SPACE_MAX_M: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub dense: u128,
    pub spin: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            dense: DEFAULT_DENSE_CAP,
            spin: DEFAULT_SPIN_CAP,
        }
    }
}

/// `sum_{i<j} P_ij` on the popcount-`m` masks of `n` sites, where `P_ij`
/// swaps sites `i` and `j`. Rows and columns follow colex order.
pub fn exchange_sector_matrix(n: u32, m: u32) -> Result<DMatrix<i64>> {
    let g = JohnsonGraph::with_cap(n, m, DEFAULT_DENSE_CAP)?;
    let masks: Vec<u64> = (0..g.len()).map(|v| g.mask(v)).collect();
    Ok(swap_sum(n, &masks)?.to_dense())
}

fn swap_sum(n: u32, basis: &[u64]) -> Result<SparseOperator> {
    let index = basis_index(basis)?;
    let pairs = (n as i64) * (n as i64 - 1) / 2;
    let rows = basis
        .iter()
        .map(|&s| {
            let mut diag = 0;
            let mut row = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = ((s >> i) & 1, (s >> j) & 1);
                    if a == b {
                        diag += 1;
                    } else {
                        row.push((index(s ^ (1 << i) ^ (1 << j)), 1));
                    }
                }
            }
            debug_assert!(diag <= pairs);
            if diag != 0 {
                row.push((index(s), diag));
            }
            merge(row)
        })
        .collect();
    Ok(SparseOperator { rows })
}

/// `sum_{i<j} sigma_i . sigma_j + m I`, which is `2X`, built from Pauli
/// actions: `sigma^z sigma^z` is diagonal `+-1`, `sigma^x sigma^x +
/// sigma^y sigma^y` flips an unequal pair with weight 2.
fn doubled_exchange(n: u32, m: u32, basis: &[u64]) -> Result<SparseOperator> {
    let index = basis_index(basis)?;
    let rows = basis
        .iter()
        .map(|&s| {
            let mut diag = m as i64;
            let mut row = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = ((s >> i) & 1, (s >> j) & 1);
                    diag += if a == b { 1 } else { -1 };
                    if a != b {
                        row.push((index(s ^ (1 << i) ^ (1 << j)), 2));
                    }
                }
            }
            row.push((index(s), diag));
            merge(row)
        })
        .collect();
    Ok(SparseOperator { rows })
}

fn basis_index(basis: &[u64]) -> Result<impl Fn(u64) -> usize + '_> {
    if basis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PstError::Integrity("spin basis must be strictly increasing".into()));
    }
    Ok(move |s: u64| basis.binary_search(&s).expect("basis closed under swaps"))
}

fn merge(mut row: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(row.len());
    for (j, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Exchange operator `X` on the given basis after the integer identity
/// checks: `2X = 2 sum P_ij - C(n,2) I + m I`, and the
/// popcount-`m` block equals the Johnson adjacency.
fn checked_exchange(m: u32, basis: &[u64], graph: &JohnsonGraph) -> Result<SparseOperator> {
    let n = 2 * m;
    let doubled = doubled_exchange(n, m, basis)?;
    let swaps = swap_sum(n, basis)?;
    let pairs = (n as i64) * (n as i64 - 1) / 2;
    for (s, (dr, pr)) in doubled.rows.iter().zip(&swaps.rows).enumerate() {
        let mut expect: Vec<(usize, i64)> = pr.iter().map(|&(j, v)| (j, 2 * v)).collect();
        expect.push((s, m as i64 - pairs));
        if merge(expect) != *dr {
            return Err(PstError::IdentityViolation(format!(
                "sigma_i . sigma_j != 2 P_ij - I on basis state {:#b}",
                basis[s]
            )));
        }
    }
    let mut rows = Vec::with_capacity(basis.len());
    for (s, row) in doubled.rows.iter().enumerate() {
        let mut half = Vec::with_capacity(row.len());
        for &(j, v) in row {
            if v % 2 != 0 {
                return Err(PstError::IdentityViolation(format!(
                    "exchange operator has a non-integer entry at ({s}, {j})"
                )));
            }
            half.push((j, v / 2));
        }
        rows.push(half);
    }
    let x = SparseOperator { rows };

    let sector: Vec<usize> = (0..basis.len())
        .filter(|&s| basis[s].count_ones() == m)
        .collect();
    if sector.len() != graph.len() {
        return Err(PstError::IdentityViolation("sector size differs from vertex count".into()));
    }
    for (v, &s) in sector.iter().enumerate() {
        if colex_rank(basis[s]) as usize != v || graph.mask(v) != basis[s] {
            return Err(PstError::IdentityViolation("sector ordering is not colex".into()));
        }
        let mut want: Vec<(usize, i64)> =
            graph.neighbors(v).into_iter().map(|u| (sector[u], 1)).collect();
        want.sort_unstable();
        if x.rows[s] != want {
            return Err(PstError::IdentityViolation(format!(
                "exchange sector row {v} differs from the adjacency of J({n}, {m})"
            )));
        }
    }
    let vacuum = basis.binary_search(&0).ok();
    if let Some(z) = vacuum {
        if x.rows[z] != vec![(z, (m * m) as i64)] {
            return Err(PstError::IdentityViolation(format!(
                "vacuum is not an eigenvector of X with eigenvalue {}",
                m * m
            )));
        }
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSpace {
    /// All `2^(2m)` configurations.
    Full,
    /// Vacuum plus the `m`-excitation sector.
    Sector,
}

/// GHZ transfer `(|0..0> + |A>)/sqrt 2 -> (|0..0> + |B>)/sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzTransferReport {
    pub m: u32,
    pub t: f64,
    pub space: SpinSpace,
    pub dimension: usize,
    /// `<B| exp(-iHt) |A>`.
    pub amplitude_to_antipode: Complex64,
    /// `<0| exp(-iHt) |0>`, a unit complex number.
    pub vacuum_phase: Complex64,
    /// `|<target|psi(t)>|^2`.
    pub ghz_fidelity: f64,
    /// `arg <target|psi(t)>`.
    pub global_phase: f64,
    /// `arg(amplitude_to_antipode / vacuum_phase)`.
    pub relative_phase: f64,
    /// `|psi(t) - exp(i theta) target|`.
    pub ideal_distance: f64,
}

/// Heisenberg evolution of the GHZ input for a design on `J(2m, m)`.
pub fn heisenberg_oracle(
    m: u32,
    design: &PstDesign,
    t: f64,
    caps: OracleCaps,
) -> Result<GhzTransferReport> {
    if m == 0 || m != design.m() {
        return Err(PstError::Domain(format!(
            "oracle for m = {m} given a design for m = {}",
            design.m()
        )));
    }
    let sites = 2 * m;
    let full = 1u128.checked_shl(sites).unwrap_or(u128::MAX);
    if sites >= 64 || full > caps.spin {
        return Err(PstError::Capacity {
            what: "spin Hilbert space dimension",
            required: full,
            cap: caps.spin,
        });
    }
    let sector_len = binomial(sites as u64, m as u64).unwrap_or(u128::MAX);
    if sector_len > caps.dense {
        return Err(PstError::Capacity {
            what: "spin sector dimension",
            required: sector_len,
            cap: caps.dense,
        });
    }
    let graph = JohnsonGraph::antipodal(m)?;
    let (space, basis): (SpinSpace, Vec<u64>) = if m <= FULL_SPACE_MAX_M {
        (SpinSpace::Full, (0..full as u64).collect())
    } else {
        let mut b = vec![0];
        b.extend((0..graph.len()).map(|v| graph.mask(v)));
        (SpinSpace::Sector, b)
    };
    let x = checked_exchange(m, &basis, &graph)?;
    let coeffs = hamiltonian_in_adjacency_basis(design, &design.qd()?);
    let propagator = Propagator::new(x.polynomial(&coeffs))?;

    let pos = |s: u64| basis.binary_search(&s).expect("state in basis");
    let a_mask = (1u64 << m) - 1;
    let b_mask = a_mask << m;
    let (z, a, b) = (pos(0), pos(a_mask), pos(b_mask));

    let root = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi0 = DVector::zeros(basis.len());
    psi0[z] = root;
    psi0[a] = root;
    let psi = propagator.apply(&psi0, t);

    let vacuum_phase = psi[z] / root;
    let amplitude_to_antipode = psi[b] / root;
    let overlap = (psi[z] + psi[b]) * root;
    let target_phase = Complex64::from_polar(1.0, design.input.theta);
    let ideal_distance = psi
        .iter()
        .enumerate()
        .map(|(s, c)| {
            let ideal = if s == z || s == b { target_phase * root } else { Complex64::new(0.0, 0.0) };
            (c - ideal).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();

    Ok(GhzTransferReport {
        m,
        t,
        space,
        dimension: basis.len(),
        amplitude_to_antipode,
        vacuum_phase,
        ghz_fidelity: overlap.norm_sqr(),
        global_phase: overlap.arg(),
        relative_phase: (amplitude_to_antipode / vacuum_phase).arg(),
        ideal_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{design, DesignInput};
    use crate::evolution::{adjacency_operator, spectral_amplitudes};
    use crate::subset::small_binomial;

    #[test]
    fn sector_identity() {
        for (n, m) in [(4, 2), (6, 2), (6, 3), (5, 2), (8, 3)] {
            let g = JohnsonGraph::new(n, m).unwrap();
            let a = adjacency_operator(&g).to_dense();
            let shift = (small_binomial(m as u64, 2) + small_binomial((n - m) as u64, 2)) as i64;
            let want = a + DMatrix::from_diagonal_element(g.len(), g.len(), shift);
            assert_eq!(exchange_sector_matrix(n, m).unwrap(), want, "J({n},{m})");
        }
    }

    #[test]
    fn exchange_checks_pass_on_full_space() {
        for m in 1..=3 {
            let g = JohnsonGraph::antipodal(m).unwrap();
            let basis: Vec<u64> = (0..1u64 << (2 * m)).collect();
            checked_exchange(m, &basis, &g).unwrap();
        }
    }

    #[test]
    fn ghz_transfer_small() {
        for m in 1..=3 {
            for theta in [0.0, std::f64::consts::FRAC_PI_3] {
                let (d, _) = design(&DesignInput::new(m).theta(theta)).unwrap();
                let r = heisenberg_oracle(m, &d, 1.0, OracleCaps::default()).unwrap();
                assert_eq!(r.space, SpinSpace::Full);
                assert!((r.ghz_fidelity - 1.0).abs() < 1e-10, "m={m}");
                assert!(r.relative_phase.abs() < 1e-10);
                assert!((r.global_phase - theta).abs() < 1e-10);
                assert!(r.ideal_distance < 1e-9);
            }
        }
    }

    #[test]
    fn sector_mode_agrees_with_spectral() {
        let (d, _) = design(&DesignInput::new(5).theta(0.7).offsets(vec![0, 1, 0, -1, 0, 2])).unwrap();
        let r = heisenberg_oracle(5, &d, 0.6, OracleCaps::default()).unwrap();
        assert_eq!(r.space, SpinSpace::Sector);
        assert_eq!(r.dimension, 253);
        let f = spectral_amplitudes(&d, 0.6).unwrap();
        assert!((r.amplitude_to_antipode - f[5]).norm() < 1e-9);
    }

    #[test]
    fn vacuum_phase_is_top_energy() {
        let (d, _) = design(&DesignInput::new(2).theta(0.3).offsets(vec![1, 0, 2])).unwrap();
        let r = heisenberg_oracle(2, &d, 0.45, OracleCaps::default()).unwrap();
        let e0 = d.hamiltonian_eigenvalues[0];
        assert!((r.vacuum_phase - Complex64::from_polar(1.0, -e0 * 0.45)).norm() < 1e-12);
    }

    #[test]
    fn caps() {
        let (d, _) = design(&DesignInput::new(3)).unwrap();
        let small = OracleCaps { dense: 10_000, spin: 32 };
        assert!(matches!(heisenberg_oracle(3, &d, 1.0, small), Err(PstError::Capacity { .. })));
        assert!(heisenberg_oracle(2, &d, 1.0, OracleCaps::default()).is_err());
    }
}
