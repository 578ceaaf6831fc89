//! Full-state time evolution and the flux-integral efficiency estimator.
//!
//! This module is the independent oracle for the Krylov overlap method. The
//! state evolves under the non-Hermitian walk Hamiltonian, losing norm only
//! through the trap; the transport efficiency is the integrated trapped flux
//!
//! ```text
//! η = ∫₀^∞ 2κ |⟨w|ψ(t)⟩|² dt = 1 − lim_{t→∞} ‖ψ(t)‖²
//! ```
//!
//! Both estimators are computed: the flux integral by windowed composite
//! Simpson quadrature with grid-halving refinement, and the survival
//! complement from the evolved state. They must agree — a gap beyond the
//! bookkeeping tolerance flags an integration fault rather than being
//! averaged away.

use std::collections::HashMap;

use crate::linalg::{expm_apply, propagator, CVector, OperatorMatrix};
use crate::{Error, Result, Vertex};

/// Stopping and refinement controls for [`efficiency_numeric`].
#[derive(Clone, Copy, Debug)]
pub struct HorizonOptions {
    /// Instantaneous flux below which the horizon may close.
    pub eps_flux: f64,
    /// Efficiency change over the last window below which the horizon may close.
    pub eps_window: f64,
    /// Window length (time units) for quadrature and stopping decisions.
    pub window: f64,
    /// Hard horizon; exceeded → horizon error carrying the best estimate.
    pub t_max: f64,
    /// Initial quadrature step inside a window.
    pub base_step: f64,
    /// Per-window refinement target for grid halving.
    pub quad_tol: f64,
    /// Maximum grid halvings per window.
    pub max_refine: u32,
}

impl Default for HorizonOptions {
    fn default() -> Self {
        HorizonOptions {
            eps_flux: 1e-8,
            eps_window: 1e-7,
            window: 10.0,
            t_max: 5000.0,
            base_step: 0.05,
            quad_tol: 1e-9,
            max_refine: 10,
        }
    }
}

/// Tolerance on `survival + trapped = 1` along a trajectory.
pub const BOOKKEEPING_TOL: f64 = 1e-6;

/// Result of the flux-integral estimator.
#[derive(Clone, Copy, Debug)]
pub struct NumericEfficiency {
    /// Integrated trapped flux up to the horizon.
    pub eta: f64,
    /// Complementary estimator `1 − ‖ψ(T)‖²`.
    pub eta_survival: f64,
    /// Horizon actually integrated to.
    pub horizon: f64,
    /// Instantaneous flux at the horizon.
    pub flux_tail: f64,
}

/// Dense-output record of one evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    /// `‖ψ(t)‖²` per grid point.
    pub survival: Vec<f64>,
    /// Cumulative `∫ 2κ|⟨w|ψ⟩|² dt` per grid point.
    pub trapped: Vec<f64>,
}

/// Instantaneous trapping flux `2κ|⟨w|ψ⟩|²`.
pub fn trapping_flux(psi: &CVector, w: Vertex, kappa: f64) -> f64 {
    2.0 * kappa * psi.0[w].norm_sqr()
}

/// Evolve `ψ₀` to time `t` under `H`: `ψ(t) = exp(-iHt)ψ₀`.
///
/// The norm may only shrink (trap losses); growth beyond 1e-9 is an error.
pub fn evolve(h: &OperatorMatrix, psi0: &CVector, t: f64) -> Result<CVector> {
    let psi = expm_apply(h, psi0, t)?;
    let norm = psi.norm();
    if norm > psi0.norm() + 1e-9 {
        return Err(Error::NormViolation { norm });
    }
    Ok(psi)
}

/// Composite Simpson over `samples` spaced `h` apart (even interval count).
fn simpson(samples: &[f64], h: f64) -> f64 {
    let n = samples.len() - 1;
    debug_assert!(n >= 2 && n.is_multiple_of(2));
    let mut acc = samples[0] + samples[n];
    for (i, f) in samples.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * f } else { 2.0 * f };
    }
    acc * h / 3.0
}

struct WindowResult {
    trapped_increment: f64,
    end_state: CVector,
    end_flux: f64,
}

/// Integrate the trapped flux across one window by stepping a cached dense
/// propagator, halving the grid until the Simpson value settles, then
/// Richardson-extrapolating the last two levels.
fn integrate_window(
    h: &OperatorMatrix,
    start: &CVector,
    w: Vertex,
    kappa: f64,
    opts: &HorizonOptions,
    propagators: &mut HashMap<u32, OperatorMatrix>,
) -> Result<WindowResult> {
    let mut base_intervals = (opts.window / opts.base_step).ceil() as usize;
    if base_intervals % 2 == 1 {
        base_intervals += 1;
    }
    let mut previous: Option<(f64, CVector, f64)> = None;
    for level in 0..=opts.max_refine {
        let intervals = base_intervals << level;
        let step = opts.window / intervals as f64;
        let prop = propagators
            .entry(level)
            .or_insert_with(|| propagator(h, step))
            .clone();
        let mut psi = start.clone();
        let mut flux = Vec::with_capacity(intervals + 1);
        flux.push(trapping_flux(&psi, w, kappa));
        for _ in 0..intervals {
            psi = prop.matvec(&psi);
            flux.push(trapping_flux(&psi, w, kappa));
        }
        let integral = simpson(&flux, step);
        if let Some((coarse, _, _)) = previous {
            if (integral - coarse).abs() <= opts.quad_tol {
                let refined = integral + (integral - coarse) / 15.0;
                return Ok(WindowResult {
                    trapped_increment: refined,
                    end_state: psi,
                    end_flux: *flux.last().unwrap(),
                });
            }
        }
        let end_flux = *flux.last().unwrap();
        previous = Some((integral, psi, end_flux));
    }
    Err(Error::Value(format!(
        "window quadrature did not converge to {} within {} halvings",
        opts.quad_tol, opts.max_refine
    )))
}

/// Transport efficiency by trapped-flux integration with adaptive horizon.
///
/// Extends the horizon window by window until the instantaneous flux drops
/// below `eps_flux` and the last window added less than `eps_window`; then
/// checks the flux-integral estimator against `1 − survival` and fails on
/// disagreement beyond [`BOOKKEEPING_TOL`].
pub fn efficiency_numeric(
    h: &OperatorMatrix,
    psi0: &CVector,
    w: Vertex,
    kappa: f64,
    opts: &HorizonOptions,
) -> Result<NumericEfficiency> {
    if kappa <= 0.0 || kappa.is_nan() {
        return Err(Error::Value(format!("trapping rate must be positive, got {kappa}")));
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation { norm });
    }
    let mut propagators = HashMap::new();
    let mut trapped = 0.0f64;
    let mut t = 0.0f64;
    let mut psi = psi0.clone();
    loop {
        let win = integrate_window(h, &psi, w, kappa, opts, &mut propagators)?;
        trapped += win.trapped_increment;
        psi = win.end_state;
        t += opts.window;

        let survival = psi.norm_sqr();
        let gap = (survival + trapped - 1.0).abs();
        if gap > BOOKKEEPING_TOL {
            return Err(Error::Bookkeeping(gap));
        }
        if win.end_flux < opts.eps_flux && win.trapped_increment.abs() < opts.eps_window {
            return Ok(NumericEfficiency {
                eta: trapped,
                eta_survival: 1.0 - survival,
                horizon: t,
                flux_tail: win.end_flux,
            });
        }
        if t >= opts.t_max {
            return Err(Error::Horizon { best_eta: trapped, horizon: t, flux_tail: win.end_flux });
        }
    }
}

/// Dense trajectory on a uniform grid, with per-point survival and cumulative
/// trapped probability (midpoint-Simpson per step).
pub fn trajectory(
    h: &OperatorMatrix,
    psi0: &CVector,
    w: Vertex,
    kappa: f64,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    if step <= 0.0 || t_end <= 0.0 || step.is_nan() || t_end.is_nan() {
        return Err(Error::Value("trajectory needs positive step and end time".into()));
    }
    let steps = (t_end / step).ceil() as usize;
    let half = propagator(h, step / 2.0);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut survival = Vec::with_capacity(steps + 1);
    let mut trapped = Vec::with_capacity(steps + 1);

    let mut psi = psi0.clone();
    times.push(0.0);
    survival.push(psi.norm_sqr());
    trapped.push(0.0);
    states.push(psi.clone());
    let mut acc = 0.0f64;
    for i in 0..steps {
        let f0 = trapping_flux(&psi, w, kappa);
        let mid = half.matvec(&psi);
        let fm = trapping_flux(&mid, w, kappa);
        psi = half.matvec(&mid);
        let f1 = trapping_flux(&psi, w, kappa);
        acc += step / 6.0 * (f0 + 4.0 * fm + f1);
        times.push((i + 1) as f64 * step);
        survival.push(psi.norm_sqr());
        trapped.push(acc);
        states.push(psi.clone());
    }
    Ok(Trajectory { times, states, survival, trapped })
}
