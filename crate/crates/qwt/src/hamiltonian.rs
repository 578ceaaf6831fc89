//! Walk Hamiltonians: Laplacian generator plus trapping sink, plus any
//! recorded edge perturbations.
//!
//! The transport Hamiltonian is `H_t = L - iκ|w⟩⟨w|`: Hermitian Laplacian
//! plus a rank-1 anti-Hermitian loss term at the trap vertex `w`. The
//! assembled ("complete") Hamiltonian adds, for every perturbed edge `(r,s)`,
//! the extra weight `λe^{iθ}` to element `(r,s)` and its conjugate to
//! `(s,r)`, so Hermiticity is broken only by the trap term. Setting
//! `(λ=1, θ=0)` on an edge cancels the `-1` Laplacian entry, i.e. removes
//! the edge.

use crate::graph::{Graph, Vertex};
use crate::linalg::{CVector, OperatorMatrix, C64};
use crate::{Error, Result};

/// Initial walker state, by vertex role: localized `|l⟩` or the two-vertex
/// superposition `(|l⟩ + e^{iγ}|k⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialStateSpec {
    Localized { l: Vertex },
    Superposition { l: Vertex, k: Vertex, gamma: f64 },
}

impl InitialStateSpec {
    pub fn vertices(&self) -> Vec<Vertex> {
        match *self {
            InitialStateSpec::Localized { l } => vec![l],
            InitialStateSpec::Superposition { l, k, .. } => vec![l, k],
        }
    }
}

/// A full transport problem: graph, trap, rate, initial state.
///
/// The initial state never involves the trap; `assemble` rejects it.
#[derive(Clone, Debug)]
pub struct TransportProblem {
    pub graph: Graph,
    pub trap: Vertex,
    pub kappa: f64,
    pub initial: InitialStateSpec,
}

impl TransportProblem {
    pub fn new(graph: Graph, trap: Vertex, kappa: f64, initial: InitialStateSpec) -> Result<Self> {
        let n = graph.n();
        if trap >= n {
            return Err(Error::Index { index: trap, n });
        }
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(Error::Value(format!("trapping rate must be positive, got {kappa}")));
        }
        match initial {
            InitialStateSpec::Localized { l } => {
                if l >= n {
                    return Err(Error::Index { index: l, n });
                }
                if l == trap {
                    return Err(Error::Value("initial state must not involve the trap".into()));
                }
            }
            InitialStateSpec::Superposition { l, k, .. } => {
                for v in [l, k] {
                    if v >= n {
                        return Err(Error::Index { index: v, n });
                    }
                    if v == trap {
                        return Err(Error::Value("initial state must not involve the trap".into()));
                    }
                }
                if l == k {
                    return Err(Error::Value("superposition needs two distinct vertices".into()));
                }
            }
        }
        Ok(TransportProblem { graph, trap, kappa, initial })
    }

    pub fn hamiltonian(&self) -> Result<OperatorMatrix> {
        complete_hamiltonian(&self.graph, self.trap, self.kappa)
    }

    pub fn initial_vector(&self) -> Result<CVector> {
        initial_state(&self.initial, self.graph.n())
    }
}

/// Unperturbed transport Hamiltonian `L - iκ|w⟩⟨w|`; any recorded
/// perturbations on the graph are ignored here.
pub fn transport_hamiltonian(g: &Graph, w: Vertex, kappa: f64) -> Result<OperatorMatrix> {
    if w >= g.n() {
        return Err(Error::Index { index: w, n: g.n() });
    }
    let mut h = g.laplacian();
    h.add_to(w, w, C64::new(0.0, -kappa));
    h.set_hermitian_flag(kappa == 0.0);
    Ok(h)
}

/// Assembled Hamiltonian: transport term plus every recorded perturbation.
pub fn complete_hamiltonian(g: &Graph, w: Vertex, kappa: f64) -> Result<OperatorMatrix> {
    let mut h = transport_hamiltonian(g, w, kappa)?;
    for (&(a, b), p) in g.perturbations() {
        let (r, s) = if p.row == a { (a, b) } else { (b, a) };
        let weight = C64::from_polar(p.lambda, p.theta);
        h.add_to(r, s, weight);
        h.add_to(s, r, weight.conj());
    }
    Ok(h)
}

/// Unit-norm initial vector for a state spec.
pub fn initial_state(spec: &InitialStateSpec, n: usize) -> Result<CVector> {
    match *spec {
        InitialStateSpec::Localized { l } => {
            if l >= n {
                return Err(Error::Index { index: l, n });
            }
            Ok(CVector::unit(n, l))
        }
        InitialStateSpec::Superposition { l, k, gamma } => {
            if l >= n {
                return Err(Error::Index { index: l, n });
            }
            if k >= n {
                return Err(Error::Index { index: k, n });
            }
            if l == k {
                return Err(Error::Value("superposition needs two distinct vertices".into()));
            }
            let mut v = CVector::zeros(n);
            let amp = 1.0 / 2.0f64.sqrt();
            v.0[l] = C64::new(amp, 0.0);
            v.0[k] = C64::from_polar(amp, gamma);
            Ok(v)
        }
    }
}
