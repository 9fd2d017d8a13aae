//! Optical elements: photon-pair sources and passive mode transformations.
//!
//! The pair source emits polarization-entangled photon pairs into a fixed
//! signal/idler path pair via the two-mode squeezing expansion, truncated at a
//! configured pair order. Beam splitters and general passive unitaries act by
//! rewriting creation operators, which preserves total photon number exactly.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ModeId, Pol, PureState, Spatial};

/// Unitarity check tolerance for [`PassiveUnitary`].
pub const UNITARITY_TOL: f64 = 1e-12;

/// One pair source: signal photon into `signal`, idler photon into `idler`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairWiring {
    pub signal: Spatial,
    pub idler: Spatial,
}

/// Configuration of the two-source apparatus.
///
/// Each source contributes `sum_n (xi^n / n!) (K_s^dag)^n` with
/// `K_s^dag = s_x^dag i_y^dag - s_y^dag i_x^dag`, truncated at `order` pairs
/// per source; the photon cutoff `2 * order` truncates the cross products
/// globally. Both pumps share a phase by default; `relative_pump_phase`
/// multiplies the second source's pair amplitude by `exp(i * phase)`, which
/// acts on conditioned states as a phase rotation of the second source's
/// retained path.
#[derive(Clone, Copy, Debug)]
pub struct PdcConfig {
    pub xi: f64,
    pub order: u32,
    pub wiring: [PairWiring; 2],
    pub relative_pump_phase: f64,
}

impl Default for PdcConfig {
    fn default() -> PdcConfig {
        PdcConfig {
            xi: 0.1,
            order: 2,
            wiring: [
                PairWiring {
                    signal: Spatial::A,
                    idler: Spatial::B,
                },
                PairWiring {
                    signal: Spatial::C,
                    idler: Spatial::D,
                },
            ],
            relative_pump_phase: 0.0,
        }
    }
}

impl PdcConfig {
    pub fn with_xi_order(xi: f64, order: u32) -> PdcConfig {
        PdcConfig {
            xi,
            order,
            ..PdcConfig::default()
        }
    }

    /// Photon cutoff implied by the pair order.
    pub fn cutoff(&self) -> u32 {
        2 * self.order
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::Config(format!(
                "pair amplitude xi must lie in (0, 1), got {}",
                self.xi
            )));
        }
        if self.order < 1 {
            return Err(Error::Config("pair order must be at least 1".into()));
        }
        let paths = [
            self.wiring[0].signal,
            self.wiring[0].idler,
            self.wiring[1].signal,
            self.wiring[1].idler,
        ];
        for (i, p) in paths.iter().enumerate() {
            if paths[..i].contains(p) {
                return Err(Error::Config(format!(
                    "source wiring reuses path {p}"
                )));
            }
        }
        Ok(())
    }
}

/// Applies the pair creation operator `K^dag` for one source.
fn apply_pair_create(state: &PureState, w: PairWiring) -> PureState {
    let sx = ModeId::new(w.signal, Pol::X);
    let sy = ModeId::new(w.signal, Pol::Y);
    let ix = ModeId::new(w.idler, Pol::X);
    let iy = ModeId::new(w.idler, Pol::Y);
    let plus = state.apply_create(sx).apply_create(iy);
    let minus = state.apply_create(sy).apply_create(ix);
    plus.add_scaled(&minus, C64::new(-1.0, 0.0))
}

/// Applies one source's truncated pair expansion to `state`.
fn apply_pair_series(state: &PureState, w: PairWiring, amp: C64, order: u32) -> PureState {
    let mut acc = state.clone();
    let mut power = state.clone();
    let mut coeff = C64::new(1.0, 0.0);
    for n in 1..=order {
        power = apply_pair_create(&power, w);
        coeff *= amp / (n as f64);
        acc = acc.add_scaled(&power, coeff);
    }
    acc
}

/// Emission state of both sources, truncated at `cfg.order` pairs per source
/// and at `2 * order` photons overall. The vacuum amplitude is exactly 1.
pub fn pdc_state(cfg: &PdcConfig) -> Result<PureState> {
    cfg.validate()?;
    let vac = PureState::vacuum_with_cutoff(cfg.cutoff());
    let amp0 = C64::new(cfg.xi, 0.0);
    let amp1 = C64::from_polar(cfg.xi, cfg.relative_pump_phase);
    let first = apply_pair_series(&vac, cfg.wiring[0], amp0, cfg.order);
    Ok(apply_pair_series(&first, cfg.wiring[1], amp1, cfg.order))
}

/// Substitution table: each source mode maps to a linear combination of
/// target modes. Applied simultaneously to all photons of the source modes.
type ModeMap = BTreeMap<ModeId, Vec<(ModeId, C64)>>;

/// Rewrites creation operators according to `map`. Photons in unmapped modes
/// are untouched. Total photon number is preserved term by term.
fn substitute_modes(state: &PureState, map: &ModeMap) -> PureState {
    let mut out = PureState::zero(state.cutoff());
    if state.truncated() {
        out.set_truncated();
    }
    for (occ, amp) in state.terms() {
        // Strip photons in mapped modes and divide out their ket factors, so
        // the stripped term carries the creation-monomial coefficient; then
        // rebuild by applying the mapped linear combinations photon by photon.
        let mut base = *occ;
        let mut stripped: Vec<(ModeId, u8)> = Vec::new();
        let mut fock_div = 1.0;
        for (&mode, _) in map.iter() {
            let n = occ.count(mode);
            if n > 0 {
                base = base.with_count(mode, 0);
                stripped.push((mode, n));
                fock_div *= sqrt_fact(n);
            }
        }
        let mut term = PureState::from_terms(state.cutoff(), [(base, amp / fock_div)]);
        for &(mode, n) in &stripped {
            let targets = &map[&mode];
            for _ in 0..n {
                let mut next = PureState::zero(state.cutoff());
                for &(target, coeff) in targets {
                    next = next.add_scaled(&term.apply_create(target), coeff);
                }
                term = next;
            }
        }
        out = out.add_scaled(&term, C64::new(1.0, 0.0));
    }
    out
}

fn sqrt_fact(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product::<f64>().sqrt()
}

/// 50:50 beam splitter taking paths `in1`, `in2` to `out1`, `out2` for both
/// polarizations:
///
/// ```text
/// in1_p^dag -> (out1_p^dag + out2_p^dag) / sqrt(2)
/// in2_p^dag -> (out1_p^dag - out2_p^dag) / sqrt(2)
/// ```
///
/// Output paths that are not also inputs must be unoccupied.
pub fn beam_splitter(
    state: &PureState,
    in1: Spatial,
    in2: Spatial,
    out1: Spatial,
    out2: Spatial,
) -> Result<PureState> {
    if in1 == in2 || out1 == out2 {
        return Err(Error::Config(
            "beam splitter paths must be pairwise distinct".into(),
        ));
    }
    for out in [out1, out2] {
        if out != in1 && out != in2 {
            let occupied = state.terms().any(|(occ, _)| occ.in_path(out) > 0);
            if occupied {
                return Err(Error::OutputOccupied { path: out });
            }
        }
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut map = ModeMap::new();
    for pol in Pol::ALL {
        map.insert(
            ModeId::new(in1, pol),
            vec![(ModeId::new(out1, pol), h), (ModeId::new(out2, pol), h)],
        );
        map.insert(
            ModeId::new(in2, pol),
            vec![(ModeId::new(out1, pol), h), (ModeId::new(out2, pol), -h)],
        );
    }
    Ok(substitute_modes(state, &map))
}

/// A unitary matrix acting on an ordered list of modes by rewriting their
/// creation operators: mode `j` maps to `sum_i U[i][j] * mode_i`.
#[derive(Clone, Debug)]
pub struct PassiveUnitary {
    modes: Vec<ModeId>,
    mat: Vec<C64>,
}

impl PassiveUnitary {
    /// Builds and checks a passive unitary. `mat` is row-major `dim x dim`.
    pub fn new(modes: Vec<ModeId>, mat: Vec<C64>) -> Result<PassiveUnitary> {
        let dim = modes.len();
        if dim == 0 || mat.len() != dim * dim {
            return Err(Error::Config(format!(
                "passive unitary needs a {dim}x{dim} matrix over {dim} modes"
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::Config(format!("duplicate mode {m} in unitary")));
            }
        }
        let u = PassiveUnitary { modes, mat };
        let max_dev = u.unitarity_deviation();
        if max_dev > UNITARITY_TOL {
            return Err(Error::NotUnitary { max_dev });
        }
        Ok(u)
    }

    pub fn identity(modes: Vec<ModeId>) -> PassiveUnitary {
        let dim = modes.len();
        let mut mat = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = C64::new(1.0, 0.0);
        }
        PassiveUnitary { modes, mat }
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[i * self.dim() + j]
    }

    /// Max deviation of `U U^dag` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut max_dev: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entry(i, k) * self.entry(j, k).conj();
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((acc - expect).norm());
            }
        }
        max_dev
    }

    /// Matrix product `self * other` over the same mode list.
    pub fn compose(&self, other: &PassiveUnitary) -> Result<PassiveUnitary> {
        if self.modes != other.modes {
            return Err(Error::Config(
                "cannot compose unitaries over different mode lists".into(),
            ));
        }
        let dim = self.dim();
        let mut mat = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entry(i, k) * other.entry(k, j);
                }
                mat[i * dim + j] = acc;
            }
        }
        PassiveUnitary::new(self.modes.clone(), mat)
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        let dim = self.dim();
        (0..dim)
            .map(|i| (0..dim).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Applies a passive unitary to a state by rewriting creation operators.
pub fn apply_passive(state: &PureState, u: &PassiveUnitary) -> Result<PureState> {
    let max_dev = u.unitarity_deviation();
    if max_dev > UNITARITY_TOL {
        return Err(Error::NotUnitary { max_dev });
    }
    let mut map = ModeMap::new();
    for (j, &src) in u.modes().iter().enumerate() {
        let targets: Vec<(ModeId, C64)> = u
            .modes()
            .iter()
            .enumerate()
            .map(|(i, &tgt)| (tgt, u.entry(i, j)))
            .filter(|(_, c)| c.norm() > 0.0)
            .collect();
        map.insert(src, targets);
    }
    Ok(substitute_modes(state, &map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;

    const AX: ModeId = ModeId::new(Spatial::A, Pol::X);
    const AY: ModeId = ModeId::new(Spatial::A, Pol::Y);
    const BX: ModeId = ModeId::new(Spatial::B, Pol::X);
    const BY: ModeId = ModeId::new(Spatial::B, Pol::Y);
    const CX: ModeId = ModeId::new(Spatial::C, Pol::X);
    const CY: ModeId = ModeId::new(Spatial::C, Pol::Y);
    const DX: ModeId = ModeId::new(Spatial::D, Pol::X);
    const UX: ModeId = ModeId::new(Spatial::U, Pol::X);
    const UY: ModeId = ModeId::new(Spatial::U, Pol::Y);
    const VX: ModeId = ModeId::new(Spatial::V, Pol::X);
    const VY: ModeId = ModeId::new(Spatial::V, Pol::Y);

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn vacuum_amplitude_is_exactly_one() {
        let s = pdc_state(&PdcConfig::with_xi_order(0.3, 2)).unwrap();
        assert_eq!(s.amplitude(&OccupationVector::empty()), re(1.0));
    }

    #[test]
    fn first_order_pair_structure() {
        let xi = 0.2;
        let s = pdc_state(&PdcConfig::with_xi_order(xi, 1)).unwrap();
        let axby = OccupationVector::from_counts(&[(AX, 1), (BY, 1)]);
        let aybx = OccupationVector::from_counts(&[(AY, 1), (BX, 1)]);
        let dycx = OccupationVector::from_counts(&[(DX, 1), (CY, 1)]);
        assert_close(s.amplitude(&axby), re(xi), 1e-15);
        assert_close(s.amplitude(&aybx), re(-xi), 1e-15);
        assert_close(s.amplitude(&dycx), re(-xi), 1e-15);
    }

    #[test]
    fn second_order_single_source_amplitudes() {
        let xi = 0.3;
        let s = pdc_state(&PdcConfig::with_xi_order(xi, 2)).unwrap();
        let xx = OccupationVector::from_counts(&[(AX, 2), (BY, 2)]);
        let quad = OccupationVector::from_counts(&[(AX, 1), (AY, 1), (BX, 1), (BY, 1)]);
        let yy = OccupationVector::from_counts(&[(AY, 2), (BX, 2)]);
        let xi2 = xi * xi;
        assert_close(s.amplitude(&xx), re(xi2), 1e-14);
        assert_close(s.amplitude(&quad), re(-xi2), 1e-14);
        assert_close(s.amplitude(&yy), re(xi2), 1e-14);
    }

    #[test]
    fn cross_source_terms_factorize() {
        let xi = 0.25;
        let s = pdc_state(&PdcConfig::with_xi_order(xi, 2)).unwrap();
        let cross = OccupationVector::from_counts(&[(AX, 1), (BY, 1), (DX, 1), (CY, 1)]);
        // amplitude(pair1) * amplitude(pair2) = xi * (-xi)
        assert_close(s.amplitude(&cross), re(-xi * xi), 1e-14);
    }

    #[test]
    fn order_two_truncates_six_photon_cross_terms() {
        let s = pdc_state(&PdcConfig::with_xi_order(0.3, 2)).unwrap();
        assert!(s.truncated());
        assert!(s.terms().all(|(occ, _)| occ.total() <= 4));
    }

    #[test]
    fn pdc_rejects_bad_config() {
        assert!(pdc_state(&PdcConfig::with_xi_order(0.0, 2)).is_err());
        assert!(pdc_state(&PdcConfig::with_xi_order(1.5, 2)).is_err());
        assert!(pdc_state(&PdcConfig::with_xi_order(0.1, 0)).is_err());
        let mut cfg = PdcConfig::default();
        cfg.wiring[1].signal = Spatial::A;
        assert!(pdc_state(&cfg).is_err());
    }

    #[test]
    fn beam_splitter_splits_a_single_photon_evenly() {
        let s = PureState::vacuum().apply_create(BX);
        let out = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V).unwrap();
        let u = OccupationVector::from_counts(&[(UX, 1)]);
        let v = OccupationVector::from_counts(&[(VX, 1)]);
        assert_close(out.amplitude(&u), re(FRAC_1_SQRT_2), 1e-15);
        assert_close(out.amplitude(&v), re(FRAC_1_SQRT_2), 1e-15);
    }

    #[test]
    fn second_input_carries_the_sign_flip() {
        let s = PureState::vacuum().apply_create(CX);
        let out = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V).unwrap();
        let u = OccupationVector::from_counts(&[(UX, 1)]);
        let v = OccupationVector::from_counts(&[(VX, 1)]);
        assert_close(out.amplitude(&u), re(FRAC_1_SQRT_2), 1e-15);
        assert_close(out.amplitude(&v), re(-FRAC_1_SQRT_2), 1e-15);
    }

    #[test]
    fn same_polarization_photons_bunch() {
        // One photon in each input with equal polarization: the coincidence
        // (one photon per output) amplitude cancels exactly.
        let s = PureState::vacuum().apply_create(BX).apply_create(CX);
        let out = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V).unwrap();
        let coincidence = OccupationVector::from_counts(&[(UX, 1), (VX, 1)]);
        assert_close(out.amplitude(&coincidence), re(0.0), 1e-15);
        let both_u = OccupationVector::from_counts(&[(UX, 2)]);
        let both_v = OccupationVector::from_counts(&[(VX, 2)]);
        assert_close(out.amplitude(&both_u), re(FRAC_1_SQRT_2), 1e-15);
        assert_close(out.amplitude(&both_v), re(-FRAC_1_SQRT_2), 1e-15);
    }

    #[test]
    fn cross_polarized_photons_keep_half_amplitude_coincidences() {
        let s = PureState::vacuum().apply_create(BX).apply_create(CY);
        let out = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V).unwrap();
        let uxvy = OccupationVector::from_counts(&[(UX, 1), (VY, 1)]);
        let uyvx = OccupationVector::from_counts(&[(UY, 1), (VX, 1)]);
        assert!((out.amplitude(&uxvy).norm() - 0.5).abs() < 1e-15);
        assert!((out.amplitude(&uyvx).norm() - 0.5).abs() < 1e-15);
        assert_close(out.amplitude(&uxvy), re(-0.5), 1e-15);
        assert_close(out.amplitude(&uyvx), re(0.5), 1e-15);
    }

    #[test]
    fn beam_splitter_preserves_norm_and_photon_number() {
        let s = pdc_state(&PdcConfig::with_xi_order(0.3, 2)).unwrap();
        let out = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V).unwrap();
        assert!((out.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
        let before = s.photon_number_distribution();
        let after = out.photon_number_distribution();
        for (n, w) in before {
            assert!((after[&n] - w).abs() < 1e-12);
        }
    }

    #[test]
    fn beam_splitter_rejects_occupied_outputs() {
        let s = PureState::vacuum().apply_create(UX).apply_create(BX);
        let err = beam_splitter(&s, Spatial::B, Spatial::C, Spatial::U, Spatial::V);
        assert!(matches!(err, Err(Error::OutputOccupied { path: Spatial::U })));
    }

    #[test]
    fn passive_unitary_rejects_non_unitary_matrices() {
        let mat = vec![re(1.0), re(0.0), re(1.0), re(1.0)];
        assert!(matches!(
            PassiveUnitary::new(vec![AX, AY], mat),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn identity_transform_is_a_no_op() {
        let s = pdc_state(&PdcConfig::default()).unwrap();
        let u = PassiveUnitary::identity(vec![AX, AY]);
        let out = apply_passive(&s, &u).unwrap();
        for (occ, amp) in s.terms() {
            assert_close(out.amplitude(occ), *amp, 1e-14);
        }
    }

    #[test]
    fn mode_swap_relabels_photons() {
        let s = PureState::vacuum().apply_create(AX);
        let swap = PassiveUnitary::new(
            vec![AX, AY],
            vec![re(0.0), re(1.0), re(1.0), re(0.0)],
        )
        .unwrap();
        let out = apply_passive(&s, &swap).unwrap();
        let moved = OccupationVector::from_counts(&[(AY, 1)]);
        assert_close(out.amplitude(&moved), re(1.0), 1e-15);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let theta: f64 = 0.37;
        let rot = PassiveUnitary::new(
            vec![AX, AY],
            vec![
                re(theta.cos()),
                re(-theta.sin()),
                re(theta.sin()),
                re(theta.cos()),
            ],
        )
        .unwrap();
        let phase = PassiveUnitary::new(
            vec![AX, AY],
            vec![
                C64::from_polar(1.0, 0.4),
                re(0.0),
                re(0.0),
                C64::from_polar(1.0, -0.9),
            ],
        )
        .unwrap();
        let s = PureState::vacuum()
            .apply_create(AX)
            .apply_create(AY)
            .apply_create(AX);
        let seq = apply_passive(&apply_passive(&s, &rot).unwrap(), &phase).unwrap();
        let composed = apply_passive(&s, &phase.compose(&rot).unwrap()).unwrap();
        for (occ, amp) in seq.terms() {
            assert_close(composed.amplitude(occ), *amp, 1e-13);
        }
        assert!((seq.norm_sqr() - s.norm_sqr()).abs() < 1e-13);
    }
}
