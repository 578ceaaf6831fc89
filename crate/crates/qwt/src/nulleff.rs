//! Zero-efficiency (dark) states and stationarity under the unperturbed
//! transport Hamiltonian.
//!
//! A state orthogonal to the Krylov subspace seeded at the trap never
//! develops amplitude there, so its transport efficiency is exactly zero.
//! For the unperturbed families the orthogonality conditions collapse to a
//! few linear constraints per family (trap component zero plus vanishing
//! sums over symmetry classes). Stationarity (eigenstate with real
//! eigenvalue) is sufficient for nullity but not necessary: the bipartite
//! graph admits null states that are not eigenstates when the two sides
//! have different sizes.

use crate::graph::{FamilySpec, Vertex};
use crate::krylov::KrylovBasis;
use crate::linalg::{inner, CVector, OperatorMatrix, C64};
use crate::{Error, Result};

/// Eigenvalues with |Im ε| at or below this are treated as real (stationary
/// rather than decaying).
pub const REAL_EIG_TOL: f64 = 1e-10;

/// Linear constraints `⟨c|ψ₀⟩ = 0` whose joint satisfaction forces η = 0
/// under the family's unperturbed transport Hamiltonian.
#[derive(Clone, Debug)]
pub struct NullCondition {
    pub family: FamilySpec,
    pub constraints: Vec<CVector>,
}

impl NullCondition {
    /// Residuals `|⟨c_i|ψ⟩|` for each constraint.
    pub fn residuals(&self, psi: &CVector) -> Result<Vec<f64>> {
        self.constraints.iter().map(|c| Ok(inner(c, psi)?.norm())).collect()
    }

    pub fn satisfied(&self, psi: &CVector, tol: f64) -> Result<bool> {
        Ok(self.residuals(psi)?.into_iter().all(|r| r <= tol))
    }
}

fn indicator(n: usize, set: impl IntoIterator<Item = Vertex>) -> CVector {
    let mut v = CVector::zeros(n);
    for j in set {
        v.0[j] = C64::new(1.0, 0.0);
    }
    v
}

/// The family's null-efficiency constraint set for trap vertex `w`.
pub fn family_null_conditions(family: FamilySpec, w: Vertex) -> Result<NullCondition> {
    let n = family.vertex_count();
    if w >= n {
        return Err(Error::Index { index: w, n });
    }
    let trap = CVector::unit(n, w);
    let constraints = match family {
        FamilySpec::Complete { n } => {
            vec![trap, indicator(n, (0..n).filter(|&j| j != w))]
        }
        FamilySpec::CompleteBipartite { n1, n2 } => {
            let n = n1 + n2;
            let side1: Vec<Vertex> = (0..n1).collect();
            let side2: Vec<Vertex> = (n1..n).collect();
            let (trap_side, far_side) = if w < n1 { (side1, side2) } else { (side2, side1) };
            vec![
                trap,
                indicator(n, trap_side.into_iter().filter(|&j| j != w)),
                indicator(n, far_side),
            ]
        }
        FamilySpec::Star { n, .. } => {
            let center: Vertex = 0;
            if w == center {
                // same constraints as the complete graph
                vec![trap, indicator(n, (1..n).filter(|&j| j != w))]
            } else {
                vec![
                    trap,
                    CVector::unit(n, center),
                    indicator(n, (1..n).filter(|&j| j != w)),
                ]
            }
        }
    };
    Ok(NullCondition { family, constraints })
}

/// True iff `ψ₀` is orthogonal to every Krylov basis vector within `tol`
/// (default 1e-10), i.e. the walker never reaches the trap.
pub fn is_null_state(basis: &KrylovBasis, psi0: &CVector, tol: f64) -> Result<bool> {
    for e in basis.vectors() {
        if inner(e, psi0)?.norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rayleigh-quotient stationarity test: with `r = Hψ` and `ε = ⟨ψ|r⟩`, the
/// state is stationary iff `‖r − εψ‖ ≤ tol`. Returns the eigenvalue estimate
/// either way.
pub fn is_stationary(h: &OperatorMatrix, psi: &CVector, tol: f64) -> Result<(bool, C64)> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation { norm });
    }
    let r = h.matvec(psi);
    let eps = inner(psi, &r)?;
    let mut defect = r.clone();
    defect.axpy_sub(eps, psi);
    Ok((defect.norm() <= tol, eps))
}
