//! Perturbation recommendation and numerical (λ, θ) search.
//!
//! The closed forms already say where the optima are; this module picks the
//! edges to perturb for a given family and initial state (one edge for a
//! localized state, two with phases (0, θ) for a superposition) and then
//! validates the optimum numerically: coarse grid over (λ, θ) with the
//! Krylov overlap as the objective (exact and κ-free), refined by coordinate
//! descent with golden-section line searches. Star-family optima sit at
//! λ → ∞; the search reports a boundary flag instead of chasing them.

use crate::graph::{detect_family, FamilySpec, Vertex};
use crate::hamiltonian::{complete_hamiltonian, TransportProblem};
use crate::krylov::{efficiency_overlap, krylov_basis, KRYLOV_TOL};
use crate::{Error, InitialStateSpec, Result};

/// Whether a recommended edge carries the swept phase θ or stays at phase 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseRole {
    Fixed,
    Swept,
}

/// An edge to perturb, ordered so the weight `λe^{iθ}` lands on the
/// Hamiltonian element `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecommendedEdge {
    pub row: Vertex,
    pub col: Vertex,
    pub role: PhaseRole,
}

/// Search-space controls for [`optimize_perturbation`].
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    /// Uniform θ grid size over [0, 2π); 64 hits both 0 and π exactly.
    pub theta_points: usize,
    pub descent_iters: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            lambda_min: 0.05,
            lambda_max: 50.0,
            lambda_points: 40,
            theta_points: 64,
            descent_iters: 20,
        }
    }
}

/// Result of the numerical search.
#[derive(Clone, Copy, Debug)]
pub struct OptimizeOutcome {
    pub lambda: f64,
    pub theta: f64,
    pub eta: f64,
    /// Objective still improving at the λ boundary (λ → ∞ optimum).
    pub asymptotic: bool,
}

fn far_side_anchor(n1: usize, n2: usize, exclude: &[Vertex]) -> Option<Vertex> {
    // smallest far-side vertex not excluded; sides are {0..n1} and {n1..n1+n2}
    let _ = n2;
    (n1..n1 + n2).find(|v| !exclude.contains(v))
}

/// Edges to perturb for the problem's family and initial state.
///
/// Localized: the single edge toward the trap (or toward the far-side anchor
/// when the start is a second neighbor of a bipartite trap; the star center
/// when the trap is an outer vertex). Superposition: the pair of edges from
/// the same hub, phases (0, θ). The phased weight sits on the `(hub, k)`
/// element so the phase-matching optimum lands at θ = (2π − γ) mod 2π.
pub fn recommend_perturbation(problem: &TransportProblem) -> Result<Vec<RecommendedEdge>> {
    let family = detect_family(&problem.graph)
        .ok_or_else(|| Error::Uncataloged("graph is not one of the catalog families".into()))?;
    let w = problem.trap;
    let fixed = |row, col| RecommendedEdge { row, col, role: PhaseRole::Fixed };
    let swept = |row, col| RecommendedEdge { row, col, role: PhaseRole::Swept };

    match (family, problem.initial) {
        (FamilySpec::Complete { .. }, InitialStateSpec::Localized { l }) => Ok(vec![swept(w, l)]),
        (FamilySpec::Complete { .. }, InitialStateSpec::Superposition { l, k, .. }) => {
            Ok(vec![fixed(w, l), swept(w, k)])
        }
        (FamilySpec::CompleteBipartite { n1, n2 }, init) => {
            let same_side = |a: Vertex, b: Vertex| (a < n1) == (b < n1);
            match init {
                InitialStateSpec::Localized { l } => {
                    if same_side(l, w) {
                        let m = far_side_anchor_for(n1, n2, w, &[l])
                            .ok_or_else(|| Error::Uncataloged("no far-side anchor available".into()))?;
                        Ok(vec![swept(m, l)])
                    } else {
                        Ok(vec![swept(w, l)])
                    }
                }
                InitialStateSpec::Superposition { l, k, .. } => {
                    match (same_side(l, w), same_side(k, w)) {
                        (false, false) => Ok(vec![fixed(w, l), swept(w, k)]),
                        (true, true) => {
                            let m = far_side_anchor_for(n1, n2, w, &[l, k]).ok_or_else(|| {
                                Error::Uncataloged("no far-side anchor available".into())
                            })?;
                            Ok(vec![fixed(m, l), swept(m, k)])
                        }
                        // mixed pair: perturb the edge between the two vertices
                        (true, false) => Ok(vec![swept(k, l)]),
                        (false, true) => Ok(vec![swept(l, k)]),
                    }
                }
            }
        }
        (FamilySpec::Star { .. }, init) => {
            let center: Vertex = 0;
            match init {
                InitialStateSpec::Localized { l } => {
                    if w == center {
                        Ok(vec![swept(w, l)])
                    } else if l == center {
                        // already at unit efficiency unperturbed
                        Ok(vec![])
                    } else {
                        Ok(vec![swept(center, l)])
                    }
                }
                InitialStateSpec::Superposition { l, k, .. } => {
                    if w == center {
                        Ok(vec![fixed(w, l), swept(w, k)])
                    } else if l == center || k == center {
                        Err(Error::Uncataloged("star outer-trap superposition involving the center".into()))
                    } else {
                        Ok(vec![fixed(center, l), swept(center, k)])
                    }
                }
            }
        }
    }
}

/// Far-side anchor relative to the trap's side, skipping excluded vertices.
fn far_side_anchor_for(n1: usize, n2: usize, w: Vertex, exclude: &[Vertex]) -> Option<Vertex> {
    if w < n1 {
        far_side_anchor(n1, n2, exclude)
    } else {
        (0..n1).find(|v| !exclude.contains(v))
    }
}

fn objective(problem: &TransportProblem, edges: &[RecommendedEdge], lambda: f64, theta: f64) -> Result<f64> {
    let mut g = problem.graph.clone();
    for e in edges {
        let th = match e.role {
            PhaseRole::Fixed => 0.0,
            PhaseRole::Swept => theta,
        };
        g = g.perturb_edge(e.row, e.col, lambda, th)?;
    }
    let h = complete_hamiltonian(&g, problem.trap, problem.kappa)?;
    let basis = krylov_basis(&h, problem.trap, KRYLOV_TOL)?;
    efficiency_overlap(&basis, &problem.initial_vector()?)
}

/// Golden-section maximization on [lo, hi].
fn golden_max(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..80 {
        if hi - lo < 1e-10 * hi.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, f(mid)?))
}

/// Grid search plus coordinate-descent refinement of (λ, θ) maximizing the
/// overlap efficiency for the recommended perturbation.
pub fn optimize_perturbation(problem: &TransportProblem, space: &SearchSpace) -> Result<OptimizeOutcome> {
    let edges = recommend_perturbation(problem)?;
    if edges.is_empty() {
        // nothing to perturb: evaluate the unperturbed problem
        let h = problem.hamiltonian()?;
        let basis = krylov_basis(&h, problem.trap, KRYLOV_TOL)?;
        let eta = efficiency_overlap(&basis, &problem.initial_vector()?)?;
        return Ok(OptimizeOutcome { lambda: 0.0, theta: 0.0, eta, asymptotic: false });
    }
    if space.lambda_min <= 0.0 || space.lambda_points == 0 || space.theta_points == 0 {
        return Err(Error::Value("search space needs λ_min > 0 and non-empty grids".into()));
    }

    let lambdas: Vec<f64> = (0..space.lambda_points)
        .map(|i| {
            let t = i as f64 / (space.lambda_points.max(2) - 1) as f64;
            space.lambda_min * (space.lambda_max / space.lambda_min).powf(t)
        })
        .collect();
    let thetas: Vec<f64> =
        (0..space.theta_points).map(|i| i as f64 * std::f64::consts::TAU / space.theta_points as f64).collect();

    let mut best = (lambdas[0], thetas[0], f64::NEG_INFINITY);
    for &lambda in &lambdas {
        for &theta in &thetas {
            let eta = objective(problem, &edges, lambda, theta)?;
            if eta > best.2 + 1e-15 {
                best = (lambda, theta, eta);
            }
        }
    }

    // coordinate descent: λ on a log scale within a grid-neighbor bracket,
    // θ within one grid step either side
    let (mut lambda, mut theta, mut eta) = best;
    let dtheta = std::f64::consts::TAU / space.theta_points as f64;
    for _ in 0..space.descent_iters {
        let before = eta;
        let (lo, hi) = ((lambda / 4.0).max(space.lambda_min), (lambda * 4.0).min(space.lambda_max));
        let (l_new, e_new) =
            golden_max(lo.ln(), hi.ln(), |x| objective(problem, &edges, x.exp(), theta))?;
        if e_new > eta + 1e-15 {
            lambda = l_new.exp();
            eta = e_new;
        }
        let (t_new, e_new) =
            golden_max(theta - dtheta, theta + dtheta, |x| objective(problem, &edges, lambda, x))?;
        if e_new > eta + 1e-15 {
            theta = t_new.rem_euclid(std::f64::consts::TAU);
            eta = e_new;
        }
        if eta - before < 1e-12 {
            break;
        }
    }

    let at_edge = objective(problem, &edges, space.lambda_max, theta)?;
    let at_half = objective(problem, &edges, space.lambda_max / 2.0, theta)?;
    let asymptotic = at_edge - at_half > 1e-6;
    if asymptotic && at_edge > eta {
        lambda = space.lambda_max;
        eta = at_edge;
    }
    Ok(OptimizeOutcome { lambda, theta, eta, asymptotic })
}
