//! Krylov-subspace dimensionality reduction for the trap amplitude.
//!
//! The trap amplitude `⟨w|exp(-iHt)|ψ₀⟩` only ever explores
//! `span{H^k|w⟩, k ≥ 0}`. Building an orthonormal basis `e₁=|w⟩, e₂, …, e_m`
//! of that subspace by repeated application of `H` and full
//! re-orthogonalization gives a reduced m×m operator that reproduces the
//! amplitude exactly, and the transport efficiency collapses to the overlap
//! `η = Σ_k |⟨e_k|ψ₀⟩|²`.
//!
//! Full re-orthogonalization is used instead of a three-term recurrence: the
//! recurrence is only guaranteed for Hermitian operators, and the trap term
//! makes `H` non-Hermitian. Tridiagonality of the reduced operator is
//! therefore a measured property (see [`KrylovBasis::off_tridiagonal_max`]),
//! not an assumed structure.

use crate::linalg::{self, CVector, OperatorMatrix, C64};
use crate::{Error, Result, Vertex};

/// Default stopping tolerance, relative to `‖H‖_F`.
pub const KRYLOV_TOL: f64 = 1e-10;

/// Orthonormal basis of `span{H^k|w⟩}` plus the reduced operator in it.
#[derive(Clone, Debug)]
pub struct KrylovBasis {
    vectors: Vec<CVector>,
    reduced: OperatorMatrix,
    residual_log: Vec<f64>,
}

impl KrylovBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Reduced operator `R_{ij} = ⟨e_i|H|e_j⟩`.
    pub fn reduced(&self) -> &OperatorMatrix {
        &self.reduced
    }

    /// Residual norm after orthogonalizing each new direction, including the
    /// final sub-threshold one that stopped the construction.
    pub fn residual_log(&self) -> &[f64] {
        &self.residual_log
    }

    /// Largest |R_{ij}| with |i-j| ≥ 2.
    pub fn off_tridiagonal_max(&self) -> f64 {
        let m = self.dim();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                if i.abs_diff(j) >= 2 {
                    worst = worst.max(self.reduced.get(i, j).norm());
                }
            }
        }
        worst
    }

    /// Rank-m projector `Σ_k |e_k⟩⟨e_k|` onto the subspace.
    pub fn projector(&self) -> OperatorMatrix {
        projector_of(&self.vectors)
    }

    /// Coefficients of `ψ` in the basis.
    pub fn project(&self, psi: &CVector) -> Result<CVector> {
        let mut coeffs = CVector::zeros(self.dim());
        for (k, e) in self.vectors.iter().enumerate() {
            coeffs.0[k] = linalg::inner(e, psi)?;
        }
        Ok(coeffs)
    }
}

/// Projector built from any list of orthonormal vectors.
pub fn projector_of(vectors: &[CVector]) -> OperatorMatrix {
    let n = vectors.first().map(|v| v.len()).unwrap_or(0);
    let mut p = OperatorMatrix::zeros(n);
    for e in vectors {
        for i in 0..n {
            for j in 0..n {
                p.add_to(i, j, e.0[i] * e.0[j].conj());
            }
        }
    }
    p
}

/// Frobenius distance between the projectors of two vector sets — the
/// subspace comparison used throughout the tests.
pub fn projector_distance(a: &[CVector], b: &[CVector]) -> f64 {
    let pa = projector_of(a);
    let pb = projector_of(b);
    let mut acc = 0.0f64;
    for i in 0..pa.n() {
        for j in 0..pa.n() {
            acc += (pa.get(i, j) - pb.get(i, j)).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Build the Krylov basis seeded at the trap vertex.
///
/// Starts from `|w⟩`, repeatedly applies `H` to the newest basis vector and
/// orthogonalizes against all previous ones (projection subtraction applied
/// twice); stops when the residual drops below `tol·‖H‖_F`.
pub fn krylov_basis(h: &OperatorMatrix, w: Vertex, tol: f64) -> Result<KrylovBasis> {
    let n = h.n();
    if w >= n {
        return Err(Error::Index { index: w, n });
    }
    if !h.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    let stop = tol * h.frobenius_norm();

    let mut vectors = vec![CVector::unit(n, w)];
    let mut images = vec![h.matvec(&vectors[0])];
    let mut residual_log = Vec::new();
    loop {
        let (r, norm) = linalg::residual(images.last().unwrap(), &vectors);
        residual_log.push(norm);
        if norm <= stop || vectors.len() == n {
            break;
        }
        let next = r.scale(C64::new(1.0 / norm, 0.0));
        images.push(h.matvec(&next));
        vectors.push(next);
    }

    let m = vectors.len();
    let mut reduced = OperatorMatrix::zeros(m);
    for (j, image) in images.iter().enumerate() {
        for (i, vector) in vectors.iter().enumerate() {
            reduced.set(i, j, linalg::inner(vector, image)?);
        }
    }
    Ok(KrylovBasis { vectors, reduced, residual_log })
}

/// Transport efficiency as the overlap of `ψ₀` with the Krylov subspace:
/// `η = Σ_k |⟨e_k|ψ₀⟩|²`, clamped to [0,1] after a 1e-9 sanity check.
pub fn efficiency_overlap(basis: &KrylovBasis, psi0: &CVector) -> Result<f64> {
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation { norm });
    }
    let mut eta = 0.0;
    for e in basis.vectors() {
        eta += linalg::inner(e, psi0)?.norm_sqr();
    }
    if eta > 1.0 + 1e-9 {
        return Err(Error::Value(format!("overlap efficiency {eta} exceeds 1 beyond tolerance")));
    }
    Ok(eta.clamp(0.0, 1.0))
}

/// Trap amplitude from the reduced problem: project `ψ₀`, evolve under the
/// reduced operator, read off the `e₁` component.
pub fn reduced_amplitude(basis: &KrylovBasis, psi0: &CVector, t: f64) -> Result<C64> {
    let coeffs = basis.project(psi0)?;
    let evolved = linalg::expm_apply(basis.reduced(), &coeffs, t)?;
    Ok(evolved.0[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, FamilySpec, StarTrap};
    use crate::hamiltonian::{complete_hamiltonian, initial_state, InitialStateSpec};
    use crate::linalg::expm_apply;

    fn complete_h(n: usize, kappa: f64) -> OperatorMatrix {
        let g = build_family(FamilySpec::Complete { n }).unwrap();
        complete_hamiltonian(&g, 0, kappa).unwrap()
    }

    #[test]
    fn complete_unperturbed_dimension_and_uniform_second_vector() {
        let h = complete_h(7, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.vectors()[0], CVector::unit(7, 0));
        // e₂ is uniform over the other six vertices, up to a global sign
        let e2 = &b.vectors()[1];
        assert!(e2.0[0].norm() < 1e-14);
        let a = e2.0[1];
        assert!((a.norm() - 1.0 / 6.0f64.sqrt()).abs() < 1e-12);
        for j in 2..7 {
            assert!((e2.0[j] - a).norm() < 1e-12);
        }
    }

    #[test]
    fn cbg_unperturbed_dimension_three() {
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b.dim(), 3);
        // e₂ uniform over the second side, e₃ uniform over first side minus trap
        let e2 = &b.vectors()[1];
        for j in 0..4 {
            assert!(e2.0[j].norm() < 1e-12);
        }
        let e3 = &b.vectors()[2];
        for h_ in 4..7 {
            assert!(e3.0[h_].norm() < 1e-12);
        }
        assert!(e3.0[0].norm() < 1e-12);
    }

    #[test]
    fn perturbed_complete_dimension_grows_to_three() {
        let g = build_family(FamilySpec::Complete { n: 7 }).unwrap();
        let g = g.perturb_edge(0, 1, 0.7, 1.1).unwrap();
        let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b.dim(), 3);
    }

    #[test]
    fn perturbed_star_keeps_dimension_but_rotates_span() {
        let g = build_family(FamilySpec::Star { n: 7, trap: StarTrap::Central }).unwrap();
        let h0 = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b0 = krylov_basis(&h0, 0, KRYLOV_TOL).unwrap();
        let gp = g.perturb_edge(0, 1, 0.7, 1.1).unwrap();
        let hp = complete_hamiltonian(&gp, 0, 1.0).unwrap();
        let bp = krylov_basis(&hp, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b0.dim(), 2);
        assert_eq!(bp.dim(), 2);
        let d = projector_distance(b0.vectors(), bp.vectors());
        assert!(d > 1e-2, "perturbation must move the subspace, distance {d}");
    }

    #[test]
    fn overlap_complete_localized() {
        let h = complete_h(7, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        let psi = CVector::unit(7, 3);
        let eta = efficiency_overlap(&b, &psi).unwrap();
        assert!((eta - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_perturbed_complete_localized_is_unity() {
        for &(lambda, theta) in &[(0.3, 0.0), (1.0, 2.0), (4.0, 5.5)] {
            let g = build_family(FamilySpec::Complete { n: 7 }).unwrap();
            let g = g.perturb_edge(0, 1, lambda, theta).unwrap();
            let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
            let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
            let eta = efficiency_overlap(&b, &CVector::unit(7, 1)).unwrap();
            assert!((eta - 1.0).abs() < 1e-10, "λ={lambda} θ={theta}: η={eta}");
        }
    }

    #[test]
    fn overlap_of_trap_state_is_unity() {
        let h = complete_h(5, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert!((efficiency_overlap(&b, &CVector::unit(5, 0)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn overlap_cbg_second_neighbor_perturbed() {
        // trap 0 in side one of K_{4,3}, perturbed edge between side-one
        // vertex 1 and side-two vertex 4; a bystander in side one overlaps
        // 1/(N1-2)
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        let g = g.perturb_edge(4, 1, 0.7, 1.1).unwrap();
        let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b.dim(), 5);
        let eta = efficiency_overlap(&b, &CVector::unit(7, 2)).unwrap();
        assert!((eta - 0.5).abs() < 1e-10);
    }

    #[test]
    fn overlap_rejects_unnormalized_state() {
        let h = complete_h(4, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        let bad = CVector::unit(4, 1).scale(C64::new(1.1, 0.0));
        assert!(matches!(efficiency_overlap(&b, &bad), Err(Error::NormViolation { .. })));
    }

    #[test]
    fn basis_is_orthonormal_and_starts_at_trap() {
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        let g = g.perturb_edge(0, 4, 0.7, 1.1).unwrap();
        let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert_eq!(b.vectors()[0], CVector::unit(7, 0));
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let g_ij = linalg::inner(&b.vectors()[i], &b.vectors()[j]).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g_ij - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn reduced_amplitude_zero_at_t_zero_off_trap() {
        let h = complete_h(5, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        let a = reduced_amplitude(&b, &CVector::unit(5, 2), 0.0).unwrap();
        assert!(a.norm() < 1e-14);
    }

    #[test]
    fn reduced_amplitude_matches_full_space_evolution() {
        let h = complete_h(5, 1.0);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        let psi = initial_state(&InitialStateSpec::Localized { l: 2 }, 5).unwrap();
        for &t in &[0.5, 2.0, 10.0] {
            let full = expm_apply(&h, &psi, t).unwrap().0[0];
            let red = reduced_amplitude(&b, &psi, t).unwrap();
            assert!((full - red).norm() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn reduced_amplitude_short_time_series() {
        // a(t) = ⟨w|e^{-iHt}|w⟩ = 1 - it(deg(w) - iκ) + O(t²)
        let kappa = 1.0;
        let h = complete_h(6, kappa);
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        let t = 1e-4;
        let a = reduced_amplitude(&b, &CVector::unit(6, 0), t).unwrap();
        let first_order = C64::new(1.0, 0.0) - C64::new(0.0, t) * C64::new(5.0, -kappa);
        assert!((a - first_order).norm() < 5.0 * t * t * h.frobenius_norm().powi(2));
    }

    #[test]
    fn kappa_never_changes_the_subspace_or_overlap() {
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        let g = g.perturb_edge(0, 4, 0.7, 1.1).unwrap();
        let psi = initial_state(&InitialStateSpec::Localized { l: 4 }, 7).unwrap();
        let mut etas = Vec::new();
        let mut bases = Vec::new();
        for &kappa in &[0.5, 2.0] {
            let h = complete_hamiltonian(&g, 0, kappa).unwrap();
            let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
            etas.push(efficiency_overlap(&b, &psi).unwrap());
            bases.push(b);
        }
        assert_eq!(etas[0], etas[1], "overlap efficiency is exactly κ-free");
        assert!(projector_distance(bases[0].vectors(), bases[1].vectors()) <= 1e-8);
    }

    #[test]
    fn localized_states_always_overlap() {
        for spec in [
            FamilySpec::Complete { n: 6 },
            FamilySpec::CompleteBipartite { n1: 3, n2: 4 },
            FamilySpec::Star { n: 6, trap: StarTrap::Central },
        ] {
            let g = build_family(spec).unwrap();
            let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
            let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
            for l in 1..g.n() {
                let eta = efficiency_overlap(&b, &CVector::unit(g.n(), l)).unwrap();
                assert!(eta > 0.0, "localized state at {l} must have nonzero efficiency");
            }
        }
    }

    #[test]
    fn reduced_matrix_is_tridiagonal_on_family_scenarios() {
        let g = build_family(FamilySpec::CompleteBipartite { n1: 4, n2: 3 }).unwrap();
        let g = g.perturb_edge(4, 1, 0.7, 1.1).unwrap();
        let h = complete_hamiltonian(&g, 0, 1.0).unwrap();
        let b = krylov_basis(&h, 0, KRYLOV_TOL).unwrap();
        assert!(b.off_tridiagonal_max() <= 5e-9, "off-tridiagonal {}", b.off_tridiagonal_max());
    }
}
