//! Bell-fidelity maximization over passive transformations.
//!
//! Unitaries are parameterized by Givens rotations plus a phase layer
//! (`n^2` real angles for an `n`-mode transform), and maximized by a
//! deterministic random-restart pattern search. Restart zero always starts
//! from the identity; later restarts draw start angles from a counter-based
//! stream so results are reproducible and order-independent.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{bell, fidelity_pure, BellKind};
use crate::elements::{apply_passive, PassiveUnitary};
use crate::error::{Error, Result};
use crate::fock::{ModeId, Pol, PureState, Spatial, AD_MODES};

/// Initial pattern-search step in radians.
pub const INITIAL_STEP: f64 = 0.5;

/// The search stops once the step shrinks below this.
pub const STEP_TOL: f64 = 1e-9;

const MAX_PASSES_PER_LEVEL: usize = 60;

/// Best local (per-path) transform found for one conditioned state.
#[derive(Clone, Debug)]
pub struct LocalOptimum {
    pub fidelity: f64,
    pub bell: BellKind,
    pub unitary_a: PassiveUnitary,
    pub unitary_d: PassiveUnitary,
}

/// Best joint transform over all four analysis modes.
#[derive(Clone, Debug)]
pub struct GlobalOptimum {
    pub fidelity: f64,
    pub bell: BellKind,
    pub unitary: PassiveUnitary,
}

/// Builds an `n`-mode unitary from `n^2` angles: one Givens rotation
/// `(theta, phi)` per mode pair followed by a diagonal phase layer.
pub fn unitary_from_angles(modes: &[ModeId], angles: &[f64]) -> PassiveUnitary {
    let n = modes.len();
    assert_eq!(angles.len(), n * n, "need n^2 angles for an n-mode unitary");
    let mut mat = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        mat[i * n + i] = C64::new(1.0, 0.0);
    }
    let mut next = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let theta = angles[next];
            let phi = angles[next + 1];
            next += 2;
            let c = theta.cos();
            let s = theta.sin();
            let e = C64::from_polar(1.0, phi);
            // Left-multiply the Givens rotation on the (i, j) plane.
            for col in 0..n {
                let top = mat[i * n + col];
                let bot = mat[j * n + col];
                mat[i * n + col] = top * c - bot * e * s;
                mat[j * n + col] = top * e.conj() * s + bot * c;
            }
        }
    }
    for i in 0..n {
        let e = C64::from_polar(1.0, angles[next]);
        next += 1;
        for col in 0..n {
            mat[i * n + col] *= e;
        }
    }
    PassiveUnitary::new(modes.to_vec(), mat).expect("angle construction is unitary")
}

fn derive_restart_seed(seed: u64, restart: u32) -> u64 {
    seed ^ (restart as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Greedy coordinate pattern search; returns the best angles and value.
fn pattern_search<F>(start: Vec<f64>, f: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = start;
    let mut fx = f(&x);
    let mut step = INITIAL_STEP;
    while step >= STEP_TOL {
        for _ in 0..MAX_PASSES_PER_LEVEL {
            let mut improved = false;
            for i in 0..x.len() {
                for delta in [step, -step] {
                    x[i] += delta;
                    let fy = f(&x);
                    if fy > fx {
                        fx = fy;
                        improved = true;
                    } else {
                        x[i] -= delta;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    (x, fx)
}

fn best_bell_for(phi: &PureState) -> (BellKind, f64) {
    let mut best = (BellKind::PhiPlus, f64::NEG_INFINITY);
    for kind in BellKind::ALL {
        let f = fidelity_pure(phi, kind).unwrap_or(0.0);
        if f > best.1 {
            best = (kind, f);
        }
    }
    best
}

fn restart_angles(n_angles: usize, seed: u64, restart: u32) -> Vec<f64> {
    if restart == 0 {
        return vec![0.0; n_angles];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_restart_seed(seed, restart));
    (0..n_angles).map(|_| rng.gen_range(-PI..PI)).collect()
}

fn maximize<F>(n_angles: usize, restarts: u32, seed: u64, objective: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let restarts = restarts.max(1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for r in 0..restarts {
        let start = restart_angles(n_angles, seed, r);
        let (x, fx) = pattern_search(start, &objective);
        match &best {
            Some((_, fb)) if *fb >= fx => {}
            _ => best = Some((x, fx)),
        }
    }
    best.expect("at least one restart")
}

const A_MODES: [ModeId; 2] = [
    ModeId::new(Spatial::A, Pol::X),
    ModeId::new(Spatial::A, Pol::Y),
];
const D_MODES: [ModeId; 2] = [
    ModeId::new(Spatial::D, Pol::X),
    ModeId::new(Spatial::D, Pol::Y),
];

fn check_input(phi: &PureState) -> Result<()> {
    if phi.norm_sqr() < 1e-300 {
        return Err(Error::ZeroNorm);
    }
    for (occ, _) in phi.terms() {
        if !occ.supported_on(&AD_MODES) {
            return Err(Error::BasisOverflow {
                detail: format!("term {occ} has photons outside paths a, d"),
            });
        }
    }
    Ok(())
}

/// Maximizes the best Bell fidelity over independent 2x2 unitaries on the
/// two paths (8 angles). Deterministic for fixed `(restarts, seed)`.
pub fn max_bell_fidelity_local(
    phi: &PureState,
    restarts: u32,
    seed: u64,
) -> Result<LocalOptimum> {
    check_input(phi)?;
    let objective = |angles: &[f64]| -> f64 {
        let ua = unitary_from_angles(&A_MODES, &angles[..4]);
        let ud = unitary_from_angles(&D_MODES, &angles[4..]);
        let moved = apply_passive(&apply_passive(phi, &ua).unwrap(), &ud).unwrap();
        best_bell_for(&moved).1
    };
    let (angles, value) = maximize(8, restarts, seed, objective);
    let unitary_a = unitary_from_angles(&A_MODES, &angles[..4]);
    let unitary_d = unitary_from_angles(&D_MODES, &angles[4..]);
    let moved = apply_passive(&apply_passive(phi, &unitary_a)?, &unitary_d)?;
    let (kind, _) = best_bell_for(&moved);
    Ok(LocalOptimum {
        fidelity: value,
        bell: kind,
        unitary_a,
        unitary_d,
    })
}

/// Maximizes the best Bell fidelity over one joint 4x4 unitary on all four
/// analysis modes (16 angles).
pub fn max_bell_fidelity_global(
    phi: &PureState,
    restarts: u32,
    seed: u64,
) -> Result<GlobalOptimum> {
    check_input(phi)?;
    let objective = |angles: &[f64]| -> f64 {
        let u = unitary_from_angles(&AD_MODES, angles);
        let moved = apply_passive(phi, &u).unwrap();
        best_bell_for(&moved).1
    };
    let (angles, value) = maximize(16, restarts, seed, objective);
    let unitary = unitary_from_angles(&AD_MODES, &angles);
    let moved = apply_passive(phi, &unitary)?;
    let (kind, _) = best_bell_for(&moved);
    Ok(GlobalOptimum {
        fidelity: value,
        bell: kind,
        unitary,
    })
}

/// Singular values (descending) of the symmetric pair-amplitude matrix `M`
/// of a purely two-photon state `sum M_ij f_i^dag f_j^dag |vac>` on the four
/// analysis modes. Passive transforms act by congruence `M -> U M U^T`, so
/// these values are invariant; the state norm fixes their square sum at
/// `<phi|phi> / 2`.
pub fn takagi_spectrum(phi: &PureState) -> Result<[f64; 4]> {
    if phi.is_empty() {
        return Err(Error::NotTwoPhoton {
            detail: "state is zero".into(),
        });
    }
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (occ, amp) in phi.terms() {
        if !occ.supported_on(&AD_MODES) || occ.total() != 2 {
            return Err(Error::NotTwoPhoton {
                detail: format!("term {occ} is not two photons on paths a, d"),
            });
        }
        let counts: Vec<(usize, u8)> = AD_MODES
            .iter()
            .enumerate()
            .map(|(i, &mode)| (i, occ.count(mode)))
            .filter(|&(_, n)| n > 0)
            .collect();
        match counts.as_slice() {
            [(i, 2)] => {
                // sqrt(2) * M_ii equals the ket amplitude.
                m[*i][*i] += amp / std::f64::consts::SQRT_2;
            }
            [(i, 1), (j, 1)] => {
                let half = amp * 0.5;
                m[*i][*j] += half;
                m[*j][*i] += half;
            }
            _ => unreachable!("two photons over four modes"),
        }
    }
    // Singular values via the Hermitian product M^dag M.
    let mut prod = vec![C64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..4 {
                acc += m[k][i].conj() * m[k][j];
            }
            prod[i * 4 + j] = acc;
        }
    }
    let eigs = super::eig_hermitian(&prod, 4)?;
    let mut sv = [0.0; 4];
    for (slot, &lambda) in sv.iter_mut().zip(eigs.iter().rev()) {
        *slot = lambda.max(0.0).sqrt();
    }
    Ok(sv)
}

/// Upper bound on `|<bell| U |phi>|^2` over every passive 4x4 transform `U`,
/// from the trace inequality for unitary congruence: the overlap of two-photon
/// states with pair matrices `N`, `M` is `2 tr(N^dag M)`, maximized at
/// `2 sum_k sv_k(N) sv_k(M)` with both spectra sorted.
pub fn takagi_fidelity_bound(phi: &PureState, kind: BellKind) -> Result<f64> {
    let (unit, _) = phi.normalize()?;
    let sv_phi = takagi_spectrum(&unit)?;
    let sv_bell = takagi_spectrum(&bell(kind))?;
    let dot: f64 = sv_phi.iter().zip(sv_bell.iter()).map(|(a, b)| a * b).sum();
    Ok((2.0 * dot).powi(2).min(1.0))
}
