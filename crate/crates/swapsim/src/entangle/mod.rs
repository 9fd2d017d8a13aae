//! Entanglement analysis of conditioned two-photon states.
//!
//! Conditioned states occupy the four analysis modes (paths `a` and `d`, two
//! polarizations each). Density matrices are stored on the 36-dimensional
//! product basis of per-path occupations with at most two photons per path,
//! which keeps the partial transpose closed: transposing one side maps
//! two-photon-sector entries into other sectors of the same product space.
//!
//! The eigensolver is a cyclic Jacobi iteration for complex Hermitian
//! matrices; an independent cross-check lives in [`crate::oracle`].

mod optim;

pub use optim::{
    max_bell_fidelity_global, max_bell_fidelity_local, takagi_fidelity_bound, takagi_spectrum,
    unitary_from_angles, GlobalOptimum, LocalOptimum, INITIAL_STEP, STEP_TOL,
};

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ModeId, OccupationVector, Pol, PureState, Spatial, AD_MODES};

/// Occupations of one path (x-count, y-count), at most two photons.
pub const SIDE_BASIS: [(u8, u8); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// Dimension of one side's occupation basis.
pub const SIDE_DIM: usize = 6;

/// Dimension of the two-sided product basis.
pub const PROD_DIM: usize = SIDE_DIM * SIDE_DIM;

/// Hermiticity tolerance for eigensolver inputs.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal norm at which the Jacobi iteration stops.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Minimum score at the smallest grid point for an event-ready verdict.
pub const EVENT_READY_MIN_SCORE: f64 = 0.9;

/// Maximum relative residual of the linear infidelity fit.
pub const EVENT_READY_FIT_TOL: f64 = 0.2;

fn side_index(nx: u8, ny: u8) -> Option<usize> {
    SIDE_BASIS.iter().position(|&(x, y)| (x, y) == (nx, ny))
}

fn side_label(i: usize) -> &'static str {
    ["0", "x", "y", "x\u{b2}", "xy", "y\u{b2}"][i]
}

/// Human-readable ket label for a product-basis index.
pub fn ket_label(i: usize) -> String {
    format!("|{},{}\u{27e9}", side_label(i / SIDE_DIM), side_label(i % SIDE_DIM))
}

/// Occupation vector for a product-basis index.
pub fn basis_occupation(i: usize) -> OccupationVector {
    let (ax, ay) = SIDE_BASIS[i / SIDE_DIM];
    let (dx, dy) = SIDE_BASIS[i % SIDE_DIM];
    OccupationVector::from_counts(&[
        (ModeId::new(Spatial::A, Pol::X), ax),
        (ModeId::new(Spatial::A, Pol::Y), ay),
        (ModeId::new(Spatial::D, Pol::X), dx),
        (ModeId::new(Spatial::D, Pol::Y), dy),
    ])
}

/// Expands a state on the analysis modes into product-basis coordinates.
pub fn to_product_vector(state: &PureState) -> Result<Vec<C64>> {
    let mut v = vec![C64::new(0.0, 0.0); PROD_DIM];
    for (occ, amp) in state.terms() {
        if !occ.supported_on(&AD_MODES) {
            return Err(Error::BasisOverflow {
                detail: format!("term {occ} has photons outside paths a, d"),
            });
        }
        let ax = occ.count(ModeId::new(Spatial::A, Pol::X));
        let ay = occ.count(ModeId::new(Spatial::A, Pol::Y));
        let dx = occ.count(ModeId::new(Spatial::D, Pol::X));
        let dy = occ.count(ModeId::new(Spatial::D, Pol::Y));
        let ia = side_index(ax, ay).ok_or_else(|| Error::BasisOverflow {
            detail: format!("path a holds more than two photons in term {occ}"),
        })?;
        let id = side_index(dx, dy).ok_or_else(|| Error::BasisOverflow {
            detail: format!("path d holds more than two photons in term {occ}"),
        })?;
        v[ia * SIDE_DIM + id] = *amp;
    }
    Ok(v)
}

/// Density matrix on the two-sided product basis.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn zero() -> DensityMatrix {
        DensityMatrix {
            entries: vec![C64::new(0.0, 0.0); PROD_DIM * PROD_DIM],
        }
    }

    /// Projector onto a pure state (unnormalized if the state is).
    pub fn from_pure(state: &PureState) -> Result<DensityMatrix> {
        let mut rho = DensityMatrix::zero();
        rho.accumulate_pure(state)?;
        Ok(rho)
    }

    /// Adds `|state><state|`.
    pub fn accumulate_pure(&mut self, state: &PureState) -> Result<()> {
        let v = to_product_vector(state)?;
        for i in 0..PROD_DIM {
            if v[i].norm() == 0.0 {
                continue;
            }
            for j in 0..PROD_DIM {
                self.entries[i * PROD_DIM + j] += v[i] * v[j].conj();
            }
        }
        Ok(())
    }

    /// Identity / 36.
    pub fn maximally_mixed() -> DensityMatrix {
        let mut rho = DensityMatrix::zero();
        for i in 0..PROD_DIM {
            rho.entries[i * PROD_DIM + i] = C64::new(1.0 / PROD_DIM as f64, 0.0);
        }
        rho
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[i * PROD_DIM + j]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..PROD_DIM).map(|i| self.entry(i, i).re).sum()
    }

    /// `tr(rho^2)`; equals 1 exactly for projectors.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Entrywise weighted sum `w1 * self + w2 * other`.
    pub fn mix(&self, w1: f64, other: &DensityMatrix, w2: f64) -> DensityMatrix {
        let mut out = DensityMatrix::zero();
        for (k, e) in out.entries.iter_mut().enumerate() {
            *e = self.entries[k] * w1 + other.entries[k] * w2;
        }
        out
    }

    /// Divides by the trace. Errors when the trace vanishes.
    pub fn normalize_trace(&self) -> Result<DensityMatrix> {
        let t = self.trace();
        if t <= 1e-300 {
            return Err(Error::AllZeroWeights);
        }
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e /= t;
        }
        Ok(out)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eig_hermitian(&self.entries, PROD_DIM)
    }

    /// Count of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(self.eigenvalues()?.iter().filter(|&&x| x > tol).count())
    }
}

/// The four maximally entangled two-photon states on paths `a`, `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "Phi+",
            BellKind::PhiMinus => "Phi-",
            BellKind::PsiPlus => "Psi+",
            BellKind::PsiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Unit-norm Bell state as a pure state on the analysis modes.
pub fn bell(kind: BellKind) -> PureState {
    let ax = ModeId::new(Spatial::A, Pol::X);
    let ay = ModeId::new(Spatial::A, Pol::Y);
    let dx = ModeId::new(Spatial::D, Pol::X);
    let dy = ModeId::new(Spatial::D, Pol::Y);
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let (first, second, sign) = match kind {
        BellKind::PhiPlus => ([(ax, 1), (dx, 1)], [(ay, 1), (dy, 1)], 1.0),
        BellKind::PhiMinus => ([(ax, 1), (dx, 1)], [(ay, 1), (dy, 1)], -1.0),
        BellKind::PsiPlus => ([(ax, 1), (dy, 1)], [(ay, 1), (dx, 1)], 1.0),
        BellKind::PsiMinus => ([(ax, 1), (dy, 1)], [(ay, 1), (dx, 1)], -1.0),
    };
    PureState::from_terms(
        4,
        [
            (OccupationVector::from_counts(&first), h),
            (OccupationVector::from_counts(&second), h * sign),
        ],
    )
}

/// Transposes the `d`-side indices: entry `((A,D),(A',D'))` moves to
/// `((A,D'),(A',D))`. An exact involution.
pub fn partial_transpose(rho: &DensityMatrix) -> DensityMatrix {
    let mut out = DensityMatrix::zero();
    for a1 in 0..SIDE_DIM {
        for d1 in 0..SIDE_DIM {
            for a2 in 0..SIDE_DIM {
                for d2 in 0..SIDE_DIM {
                    let src = (a1 * SIDE_DIM + d1) * PROD_DIM + (a2 * SIDE_DIM + d2);
                    let dst = (a1 * SIDE_DIM + d2) * PROD_DIM + (a2 * SIDE_DIM + d1);
                    out.entries[dst] = rho.entries[src];
                }
            }
        }
    }
    out
}

/// Eigenvalues of a complex Hermitian matrix, ascending, by cyclic Jacobi
/// rotations. Errors if the input is not Hermitian within
/// [`HERMITICITY_TOL`] or the iteration stalls.
pub fn eig_hermitian(entries: &[C64], dim: usize) -> Result<Vec<f64>> {
    assert_eq!(entries.len(), dim * dim, "matrix shape mismatch");
    let mut max_dev: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
            max_dev = max_dev.max(dev);
        }
    }
    if max_dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev });
    }

    // Work on the exactly Hermitian average.
    let mut a = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i * dim + j] = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
        }
    }

    let fro: f64 = a.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    let off_tol = JACOBI_OFF_TOL * fro.max(1.0);
    let skip_tol = off_tol / (dim * dim) as f64;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..dim)
            .flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * dim + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= off_tol {
            let mut eigs: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                let abs = apq.norm();
                if abs <= skip_tol {
                    continue;
                }
                let phase = apq / abs;
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                // Real Jacobi angle on the phase-aligned 2x2 block.
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase_conj = phase.conj();
                for k in 0..dim {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    let new_kp = akp * c - akq * phase_conj * s;
                    let new_kq = akp * s + akq * phase_conj * c;
                    a[k * dim + p] = new_kp;
                    a[p * dim + k] = new_kp.conj();
                    a[k * dim + q] = new_kq;
                    a[q * dim + k] = new_kq.conj();
                }
                let shift = 2.0 * c * s * abs;
                a[p * dim + p] = C64::new(c * c * app + s * s * aqq - shift, 0.0);
                a[q * dim + q] = C64::new(s * s * app + c * c * aqq + shift, 0.0);
                a[p * dim + q] = C64::new(0.0, 0.0);
                a[q * dim + p] = C64::new(0.0, 0.0);
            }
        }
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Eigenvalues of the partial transpose, ascending.
pub fn pt_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    partial_transpose(rho).eigenvalues()
}

/// Sum of the absolute values of the negative partial-transpose eigenvalues.
/// Positive negativity certifies entanglement of the split `a | d`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(pt_spectrum(rho)?
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .sum())
}

/// `<bell| rho |bell>`.
pub fn fidelity(rho: &DensityMatrix, kind: BellKind) -> f64 {
    let v = to_product_vector(&bell(kind)).expect("bell states live on the analysis modes");
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..PROD_DIM {
        if v[i].norm() == 0.0 {
            continue;
        }
        for j in 0..PROD_DIM {
            acc += v[i].conj() * rho.entry(i, j) * v[j];
        }
    }
    acc.re
}

/// `|<bell|phi>|^2 / <phi|phi>` for a pure (possibly unnormalized) state.
pub fn fidelity_pure(phi: &PureState, kind: BellKind) -> Result<f64> {
    let ns = phi.norm_sqr();
    if ns < 1e-300 {
        return Err(Error::ZeroNorm);
    }
    Ok(bell(kind).inner(phi).norm_sqr() / ns)
}

/// Best Bell score of a density matrix and the first kind attaining it.
pub fn best_bell_fidelity(rho: &DensityMatrix) -> (BellKind, f64) {
    let mut best = (BellKind::PhiPlus, f64::NEG_INFINITY);
    for kind in BellKind::ALL {
        let f = fidelity(rho, kind);
        if f > best.1 {
            best = (kind, f);
        }
    }
    best
}

/// Outcome of the event-ready check over a pair-amplitude grid.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EventReadyVerdict {
    /// Bell state with the best score at the smallest grid point.
    pub best_bell: BellKind,
    /// Best Bell score at the smallest grid point.
    pub score: f64,
    /// `(xi, score)` pairs in input order.
    pub xi_series: Vec<(f64, f64)>,
    /// Fitted slope of `1 - score` against `xi` (least squares through zero).
    pub fitted_slope: f64,
    /// Largest fit residual relative to the largest infidelity.
    pub fit_rel_residual: f64,
    pub is_event_ready: bool,
}

/// Decides whether conditioned output approaches a Bell state as the pair
/// amplitude shrinks: the verdict is positive only when the infidelity
/// `1 - score` fits a line through zero in `xi` (relative residual at most
/// [`EVENT_READY_FIT_TOL`]) and the score at the smallest grid point reaches
/// [`EVENT_READY_MIN_SCORE`].
pub fn event_ready_check<F>(xi_grid: &[f64], mut rho_at: F) -> Result<EventReadyVerdict>
where
    F: FnMut(f64) -> Result<DensityMatrix>,
{
    if xi_grid.len() < 3 {
        return Err(Error::Config(
            "event-ready check needs at least three grid points".into(),
        ));
    }
    if xi_grid.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Config(
            "event-ready grid values must be positive".into(),
        ));
    }
    let mut series = Vec::with_capacity(xi_grid.len());
    let mut at_min: Option<(f64, BellKind, f64)> = None;
    for &xi in xi_grid {
        let rho = rho_at(xi)?;
        let (kind, score) = best_bell_fidelity(&rho);
        series.push((xi, score));
        match at_min {
            Some((best_xi, _, _)) if best_xi <= xi => {}
            _ => at_min = Some((xi, kind, score)),
        }
    }
    let (_, best_bell, score) = at_min.expect("grid is nonempty");

    let sxx: f64 = series.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = series.iter().map(|(x, s)| x * (1.0 - s)).sum();
    let slope = sxy / sxx;
    let max_infidelity = series
        .iter()
        .map(|(_, s)| 1.0 - s)
        .fold(0.0_f64, f64::max);
    let max_residual = series
        .iter()
        .map(|(x, s)| ((1.0 - s) - slope * x).abs())
        .fold(0.0_f64, f64::max);
    let fit_rel_residual = if max_infidelity < 1e-12 {
        0.0
    } else {
        max_residual / max_infidelity
    };
    let is_event_ready = score >= EVENT_READY_MIN_SCORE
        && fit_rel_residual <= EVENT_READY_FIT_TOL
        && slope.is_finite();
    Ok(EventReadyVerdict {
        best_bell,
        score,
        xi_series: series,
        fitted_slope: slope,
        fit_rel_residual,
        is_event_ready,
    })
}

/// Reference state for validating the event-ready rule: an ideal singlet
/// with an admixture `xi` of white noise, trace-normalized.
pub fn noisy_singlet(xi: f64) -> DensityMatrix {
    let pure = DensityMatrix::from_pure(&bell(BellKind::PsiMinus))
        .expect("bell states embed in the product basis");
    pure.mix(1.0 / (1.0 + xi), &DensityMatrix::maximally_mixed(), xi / (1.0 + xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn side_basis_indexes_round_trip() {
        for (i, &(nx, ny)) in SIDE_BASIS.iter().enumerate() {
            assert_eq!(side_index(nx, ny), Some(i));
        }
        assert_eq!(side_index(2, 1), None);
        assert_eq!(ket_label(5), "|0,y\u{b2}\u{27e9}");
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for (i, ki) in BellKind::ALL.iter().enumerate() {
            for (j, kj) in BellKind::ALL.iter().enumerate() {
                let ip = bell(*ki).inner(&bell(*kj));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - re(expect)).norm() < 1e-15, "{ki} vs {kj}");
            }
        }
    }

    #[test]
    fn projector_of_a_bell_state_has_unit_trace_and_purity() {
        let rho = DensityMatrix::from_pure(&bell(BellKind::PsiMinus)).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert_eq!(rho.rank(1e-9).unwrap(), 1);
    }

    #[test]
    fn partial_transpose_is_an_exact_involution() {
        let mut rho = DensityMatrix::from_pure(&bell(BellKind::PhiMinus)).unwrap();
        rho = rho.mix(0.7, &DensityMatrix::maximally_mixed(), 0.3);
        let back = partial_transpose(&partial_transpose(&rho));
        for i in 0..PROD_DIM {
            for j in 0..PROD_DIM {
                assert_eq!(rho.entry(i, j), back.entry(i, j));
            }
        }
    }

    #[test]
    fn partial_transpose_preserves_the_trace() {
        let rho = noisy_singlet(0.3);
        let pt = partial_transpose(&rho);
        assert!((pt.trace() - rho.trace()).abs() < 1e-14);
    }

    #[test]
    fn eig_recovers_a_diagonal_spectrum() {
        let mut m = vec![C64::new(0.0, 0.0); 9];
        m[0] = re(3.0);
        m[4] = re(1.0);
        m[8] = re(2.0);
        let eigs = eig_hermitian(&m, 3).unwrap();
        assert_eq!(eigs, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_handles_the_identity() {
        let mut m = vec![C64::new(0.0, 0.0); 16];
        for i in 0..4 {
            m[i * 4 + i] = re(1.0);
        }
        assert_eq!(eig_hermitian(&m, 4).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn eig_solves_a_complex_two_by_two_exactly() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = vec![re(2.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), re(2.0)];
        let eigs = eig_hermitian(&m, 2).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian_input() {
        let m = vec![re(1.0), re(1.0), re(0.0), re(1.0)];
        assert!(matches!(
            eig_hermitian(&m, 2),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn singlet_partial_transpose_spectrum() {
        let rho = DensityMatrix::from_pure(&bell(BellKind::PsiMinus)).unwrap();
        let eigs = pt_spectrum(&rho).unwrap();
        assert!((eigs[0] + 0.5).abs() < 1e-12);
        for &e in &eigs[1..33] {
            assert!(e.abs() < 1e-12);
        }
        for &e in &eigs[33..] {
            assert!((e - 0.5).abs() < 1e-12);
        }
        assert!((negativity(&rho).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn white_noise_has_zero_negativity() {
        let rho = DensityMatrix::maximally_mixed();
        assert!(negativity(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn product_state_has_positive_partial_transpose() {
        let ax = ModeId::new(Spatial::A, Pol::X);
        let dy = ModeId::new(Spatial::D, Pol::Y);
        let product = PureState::vacuum().apply_create(ax).apply_create(dy);
        let rho = DensityMatrix::from_pure(&product).unwrap();
        let eigs = pt_spectrum(&rho).unwrap();
        assert!(eigs[0] > -1e-12);
        assert!(negativity(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn fidelity_of_bell_projectors_is_kronecker() {
        for ki in BellKind::ALL {
            let rho = DensityMatrix::from_pure(&bell(ki)).unwrap();
            for kj in BellKind::ALL {
                let f = fidelity(&rho, kj);
                let expect = if ki == kj { 1.0 } else { 0.0 };
                assert!((f - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fidelity_pure_rejects_the_zero_state() {
        let z = PureState::zero(4);
        assert!(matches!(
            fidelity_pure(&z, BellKind::PsiMinus),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn noisy_singlet_scores_pass_the_event_ready_rule() {
        let verdict =
            event_ready_check(&[0.2, 0.1, 0.05], |xi| Ok(noisy_singlet(xi))).unwrap();
        assert!(verdict.is_event_ready);
        assert_eq!(verdict.best_bell, BellKind::PsiMinus);
        let expect = (1.0 + 0.05 / PROD_DIM as f64) / 1.05;
        assert!((verdict.score - expect).abs() < 1e-12);
    }

    #[test]
    fn constant_low_scores_fail_the_event_ready_rule() {
        let verdict = event_ready_check(&[0.2, 0.1, 0.05], |_| {
            Ok(noisy_singlet(0.0).mix(0.25, &DensityMatrix::maximally_mixed(), 0.75))
        })
        .unwrap();
        assert!(!verdict.is_event_ready);
    }

    #[test]
    fn event_ready_check_validates_the_grid() {
        assert!(event_ready_check(&[0.1, 0.2], |xi| Ok(noisy_singlet(xi))).is_err());
        assert!(event_ready_check(&[0.1, -0.2, 0.3], |xi| Ok(noisy_singlet(xi))).is_err());
    }
}
