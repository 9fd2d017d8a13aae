//! Sparse multimode Fock-state algebra.
//!
//! States live on a fixed register of twelve bosonic modes: six spatial paths
//! (`a`, `b`, `c`, `d` and the detector paths `u`, `v`), each carrying two
//! linear polarizations (`x`, `y`). A pure state is a sparse map from
//! occupation vectors to complex amplitudes, stored in a sorted map so that
//! iteration order is the documented basis order and every downstream report
//! is deterministic.
//!
//! All operations are pure: they take states by reference and return new
//! states. Amplitudes below [`PRUNE_TOL`] are dropped after every operation;
//! terms that would exceed the photon cutoff are dropped and recorded in the
//! state's truncation flag rather than silently vanishing.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Number of modes in the register.
pub const NUM_MODES: usize = 12;

/// Amplitudes with magnitude below this are dropped when states are pruned.
pub const PRUNE_TOL: f64 = 1e-14;

/// Default comparison tolerance for amplitude-level checks.
pub const CMP_TOL: f64 = 1e-12;

/// Default photon cutoff (two pairs).
pub const DEFAULT_CUTOFF: u32 = 4;

/// Spatial paths in the fixed basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spatial {
    A,
    B,
    C,
    D,
    U,
    V,
}

impl Spatial {
    pub const ALL: [Spatial; 6] = [
        Spatial::A,
        Spatial::B,
        Spatial::C,
        Spatial::D,
        Spatial::U,
        Spatial::V,
    ];

    pub fn label(self) -> char {
        match self {
            Spatial::A => 'a',
            Spatial::B => 'b',
            Spatial::C => 'c',
            Spatial::D => 'd',
            Spatial::U => 'u',
            Spatial::V => 'v',
        }
    }
}

impl fmt::Display for Spatial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Linear polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pol {
    X,
    Y,
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::X, Pol::Y];

    pub fn label(self) -> char {
        match self {
            Pol::X => 'x',
            Pol::Y => 'y',
        }
    }

    pub fn other(self) -> Pol {
        match self {
            Pol::X => Pol::Y,
            Pol::Y => Pol::X,
        }
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One field mode: a spatial path carrying one polarization.
///
/// Modes are totally ordered by `(spatial, polarization)`; that order defines
/// the layout of [`OccupationVector`] and the basis order everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub spatial: Spatial,
    pub pol: Pol,
}

impl ModeId {
    pub const fn new(spatial: Spatial, pol: Pol) -> ModeId {
        ModeId { spatial, pol }
    }

    /// Position of this mode in the fixed basis order.
    pub fn index(self) -> usize {
        self.spatial as usize * 2 + self.pol as usize
    }

    pub fn from_index(i: usize) -> ModeId {
        assert!(i < NUM_MODES);
        ModeId::new(Spatial::ALL[i / 2], Pol::ALL[i % 2])
    }

    pub fn all() -> impl Iterator<Item = ModeId> {
        (0..NUM_MODES).map(ModeId::from_index)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.spatial, self.pol)
    }
}

/// The four analysis modes (paths `a` and `d`, both polarizations).
pub const AD_MODES: [ModeId; 4] = [
    ModeId::new(Spatial::A, Pol::X),
    ModeId::new(Spatial::A, Pol::Y),
    ModeId::new(Spatial::D, Pol::X),
    ModeId::new(Spatial::D, Pol::Y),
];

/// Photon counts per mode, in the fixed mode order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector([u8; NUM_MODES]);

impl OccupationVector {
    pub fn empty() -> OccupationVector {
        OccupationVector::default()
    }

    /// Builds an occupation from `(mode, count)` pairs; later entries add.
    pub fn from_counts(counts: &[(ModeId, u8)]) -> OccupationVector {
        let mut occ = OccupationVector::empty();
        for &(m, n) in counts {
            occ.0[m.index()] += n;
        }
        occ
    }

    pub fn count(&self, mode: ModeId) -> u8 {
        self.0[mode.index()]
    }

    pub fn with_count(&self, mode: ModeId, n: u8) -> OccupationVector {
        let mut occ = *self;
        occ.0[mode.index()] = n;
        occ
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    /// Photons in one spatial path, both polarizations.
    pub fn in_path(&self, path: Spatial) -> u32 {
        let i = path as usize * 2;
        self.0[i] as u32 + self.0[i + 1] as u32
    }

    /// True when all photons sit inside `modes`.
    pub fn supported_on(&self, modes: &[ModeId]) -> bool {
        ModeId::all().all(|m| self.count(m) == 0 || modes.contains(&m))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (ModeId, u8)> + '_ {
        ModeId::all()
            .map(|m| (m, self.count(m)))
            .filter(|&(_, n)| n > 0)
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            return write!(f, "vac");
        }
        let mut first = true;
        for (m, n) in self.nonzero() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{n}")?;
            }
        }
        Ok(())
    }
}

fn sqrt_factorial(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product::<f64>().sqrt()
}

/// Sparse pure state over the twelve-mode register.
///
/// Unnormalized by construction; callers normalize explicitly when they need
/// to. The cutoff bounds the total photon number of retained terms, and
/// `truncated` records whether any operation ever dropped a term for
/// exceeding it.
#[derive(Clone, Debug)]
pub struct PureState {
    terms: BTreeMap<OccupationVector, C64>,
    cutoff: u32,
    truncated: bool,
}

impl PureState {
    /// The vacuum with the default cutoff: unit amplitude on the empty
    /// occupation and nothing else.
    pub fn vacuum() -> PureState {
        PureState::vacuum_with_cutoff(DEFAULT_CUTOFF)
    }

    pub fn vacuum_with_cutoff(cutoff: u32) -> PureState {
        let mut terms = BTreeMap::new();
        terms.insert(OccupationVector::empty(), C64::new(1.0, 0.0));
        PureState {
            terms,
            cutoff,
            truncated: false,
        }
    }

    /// Empty (zero) state.
    pub fn zero(cutoff: u32) -> PureState {
        PureState {
            terms: BTreeMap::new(),
            cutoff,
            truncated: false,
        }
    }

    /// Builds a state from explicit terms, pruning negligible amplitudes.
    /// Terms above the cutoff are dropped and flagged.
    pub fn from_terms<I>(cutoff: u32, terms: I) -> PureState
    where
        I: IntoIterator<Item = (OccupationVector, C64)>,
    {
        let mut s = PureState::zero(cutoff);
        for (occ, amp) in terms {
            if occ.total() > cutoff {
                s.truncated = true;
                continue;
            }
            let entry = s.terms.entry(occ).or_insert(C64::new(0.0, 0.0));
            *entry += amp;
        }
        s.prune(PRUNE_TOL);
        s
    }

    /// Single basis ket with unit amplitude.
    pub fn basis_ket(cutoff: u32, occ: OccupationVector) -> PureState {
        PureState::from_terms(cutoff, [(occ, C64::new(1.0, 0.0))])
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// True if any operation dropped a term for exceeding the cutoff.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &C64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> C64 {
        self.terms.get(occ).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, amp| amp.norm() >= tol);
    }

    /// Copy with amplitudes below `tol` removed.
    pub fn pruned(&self, tol: f64) -> PureState {
        let mut s = self.clone();
        s.prune(tol);
        s
    }

    /// Applies the creation operator for `mode`: each term picks up
    /// `sqrt(n + 1)` with `n` the prior count. Terms that would exceed the
    /// cutoff are dropped and the truncation flag is raised.
    pub fn apply_create(&self, mode: ModeId) -> PureState {
        let mut out = PureState::zero(self.cutoff);
        out.truncated = self.truncated;
        for (occ, amp) in &self.terms {
            let n = occ.count(mode);
            if occ.total() + 1 > self.cutoff {
                out.truncated = true;
                continue;
            }
            let occ2 = occ.with_count(mode, n + 1);
            let amp2 = amp * ((n as f64) + 1.0).sqrt();
            *out.terms.entry(occ2).or_insert(C64::new(0.0, 0.0)) += amp2;
        }
        out.prune(PRUNE_TOL);
        out
    }

    /// Applies the annihilation operator for `mode`: terms pick up `sqrt(n)`;
    /// terms with no photon in `mode` vanish.
    pub fn apply_annihilate(&self, mode: ModeId) -> PureState {
        let mut out = PureState::zero(self.cutoff);
        out.truncated = self.truncated;
        for (occ, amp) in &self.terms {
            let n = occ.count(mode);
            if n == 0 {
                continue;
            }
            let occ2 = occ.with_count(mode, n - 1);
            let amp2 = amp * (n as f64).sqrt();
            *out.terms.entry(occ2).or_insert(C64::new(0.0, 0.0)) += amp2;
        }
        out.prune(PRUNE_TOL);
        out
    }

    /// Hermitian inner product `<self|other>` (conjugate-linear on the left).
    pub fn inner(&self, other: &PureState) -> C64 {
        let (small, big, swapped) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, false)
        } else {
            (&other.terms, &self.terms, true)
        };
        let mut acc = C64::new(0.0, 0.0);
        for (occ, amp) in small {
            if let Some(other_amp) = big.get(occ) {
                if swapped {
                    // small holds `other`'s terms.
                    acc += other_amp.conj() * amp;
                } else {
                    acc += amp.conj() * other_amp;
                }
            }
        }
        acc
    }

    /// `self + coeff * other`, pruned. Cutoffs merge to the larger one.
    pub fn add_scaled(&self, other: &PureState, coeff: C64) -> PureState {
        let mut out = self.clone();
        out.cutoff = self.cutoff.max(other.cutoff);
        out.truncated = self.truncated || other.truncated;
        for (occ, amp) in &other.terms {
            *out.terms.entry(*occ).or_insert(C64::new(0.0, 0.0)) += coeff * amp;
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn scaled(&self, coeff: C64) -> PureState {
        let mut out = self.clone();
        for amp in out.terms.values_mut() {
            *amp *= coeff;
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|amp| amp.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the unit-norm state and the prior norm. Errors on zero norm,
    /// which signals an impossible post-selection upstream.
    pub fn normalize(&self) -> Result<(PureState, f64)> {
        let n = self.norm();
        if n < PRUNE_TOL {
            return Err(Error::ZeroNorm);
        }
        Ok((self.scaled(C64::new(1.0 / n, 0.0)), n))
    }

    /// Keeps only terms whose photons all sit inside `modes`.
    pub fn restrict(&self, modes: &[ModeId]) -> PureState {
        let mut out = PureState::zero(self.cutoff);
        out.truncated = self.truncated;
        for (occ, amp) in &self.terms {
            if occ.supported_on(modes) {
                out.terms.insert(*occ, *amp);
            }
        }
        out
    }

    /// Probability weight per total photon number.
    pub fn photon_number_distribution(&self) -> BTreeMap<u32, f64> {
        let mut dist = BTreeMap::new();
        for (occ, amp) in &self.terms {
            *dist.entry(occ.total()).or_insert(0.0) += amp.norm_sqr();
        }
        dist
    }

    /// Smallest total photon number with support, if any.
    pub fn min_total_photons(&self) -> Option<u32> {
        self.terms.keys().map(|occ| occ.total()).min()
    }

    /// Marks the state truncated (used by builders that drop terms).
    pub(crate) fn set_truncated(&mut self) {
        self.truncated = true;
    }
}

/// Ket amplitude of the monomial `prod_i (a_i^dag)^{n_i} |vac>`: the product
/// of `sqrt(n_i!)` over the occupation.
pub fn monomial_ket_factor(occ: &OccupationVector) -> f64 {
    occ.nonzero().map(|(_, n)| sqrt_factorial(n)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    const AX: ModeId = ModeId::new(Spatial::A, Pol::X);
    const AY: ModeId = ModeId::new(Spatial::A, Pol::Y);
    const DX: ModeId = ModeId::new(Spatial::D, Pol::X);
    const DY: ModeId = ModeId::new(Spatial::D, Pol::Y);
    const UX: ModeId = ModeId::new(Spatial::U, Pol::X);

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn mode_order_is_path_major() {
        let labels: Vec<String> = ModeId::all().map(|m| m.to_string()).collect();
        assert_eq!(
            labels,
            [
                "a_x", "a_y", "b_x", "b_y", "c_x", "c_y", "d_x", "d_y", "u_x", "u_y", "v_x",
                "v_y"
            ]
        );
        for (i, m) in ModeId::all().enumerate() {
            assert_eq!(m.index(), i);
            assert_eq!(ModeId::from_index(i), m);
        }
    }

    #[test]
    fn vacuum_has_unit_amplitude_on_empty_occupation() {
        let v = PureState::vacuum();
        assert_eq!(v.len(), 1);
        assert_close(v.amplitude(&OccupationVector::empty()), re(1.0), 0.0);
        assert!(!v.truncated());
    }

    #[test]
    fn double_creation_gives_sqrt_two() {
        let s = PureState::vacuum().apply_create(AY).apply_create(AY);
        let occ = OccupationVector::from_counts(&[(AY, 2)]);
        assert_close(s.amplitude(&occ), re(2.0_f64.sqrt()), 1e-15);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn annihilation_of_two_photon_term() {
        let two = PureState::vacuum().apply_create(AY).apply_create(AY);
        let one = two.apply_annihilate(AY);
        let occ = OccupationVector::from_counts(&[(AY, 1)]);
        // sqrt(2) * sqrt(2) = 2
        assert_close(one.amplitude(&occ), re(2.0), 1e-15);
    }

    #[test]
    fn annihilating_the_vacuum_yields_the_zero_state() {
        let z = PureState::vacuum().apply_annihilate(AX);
        assert!(z.is_empty());
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn creation_past_cutoff_truncates_and_flags() {
        let mut s = PureState::vacuum_with_cutoff(2);
        for _ in 0..2 {
            s = s.apply_create(AX);
        }
        assert!(!s.truncated());
        let s3 = s.apply_create(AX);
        assert!(s3.truncated());
        assert!(s3.is_empty());
    }

    #[test]
    fn inner_distinguishes_orthogonal_kets() {
        let x = PureState::vacuum().apply_create(AX);
        let y = PureState::vacuum().apply_create(AY);
        assert_close(x.inner(&y), re(0.0), 0.0);
        assert_close(x.inner(&x), re(1.0), 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_on_the_left() {
        let x = PureState::vacuum().apply_create(AX);
        let ix = x.scaled(C64::new(0.0, 1.0));
        assert_close(x.inner(&ix), C64::new(0.0, 1.0), 1e-15);
        assert_close(ix.inner(&x), C64::new(0.0, -1.0), 1e-15);
    }

    #[test]
    fn add_scaled_cancellation_prunes_to_empty() {
        let x = PureState::vacuum().apply_create(AX);
        let diff = x.add_scaled(&x, re(-1.0));
        assert!(diff.is_empty());
    }

    #[test]
    fn normalize_rejects_the_zero_state() {
        let z = PureState::zero(4);
        assert!(matches!(z.normalize(), Err(Error::ZeroNorm)));
    }

    #[test]
    fn normalize_returns_prior_norm() {
        let s = PureState::vacuum().apply_create(AX).scaled(re(3.0));
        let (unit, n) = s.normalize().unwrap();
        assert!((n - 3.0).abs() < 1e-15);
        assert!((unit.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn restrict_drops_terms_with_photons_elsewhere() {
        let ad = OccupationVector::from_counts(&[(AX, 1), (DY, 1)]);
        let with_u = OccupationVector::from_counts(&[(AX, 1), (UX, 1)]);
        let s = PureState::from_terms(4, [(ad, re(0.5)), (with_u, re(0.5))]);
        let r = s.restrict(&AD_MODES);
        assert_eq!(r.len(), 1);
        assert_close(r.amplitude(&ad), re(0.5), 0.0);
        assert_close(r.amplitude(&with_u), re(0.0), 0.0);
    }

    #[test]
    fn four_unit_terms_have_norm_two() {
        // Pattern of four single-photon-pair kets with unit coefficients.
        let kets = [
            OccupationVector::from_counts(&[(DX, 1), (DY, 1)]),
            OccupationVector::from_counts(&[(AY, 1), (DX, 1)]),
            OccupationVector::from_counts(&[(AX, 1), (DY, 1)]),
            OccupationVector::from_counts(&[(AX, 1), (AY, 1)]),
        ];
        let signs = [1.0, -1.0, 1.0, -1.0];
        let s = PureState::from_terms(
            4,
            kets.iter().zip(signs).map(|(occ, sg)| (*occ, re(sg))),
        );
        assert!((s.norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn photon_number_distribution_tracks_weights() {
        let one = OccupationVector::from_counts(&[(AX, 1)]);
        let two = OccupationVector::from_counts(&[(AX, 1), (DY, 1)]);
        let s = PureState::from_terms(4, [(one, re(0.6)), (two, re(0.8))]);
        let dist = s.photon_number_distribution();
        assert!((dist[&1] - 0.36).abs() < 1e-15);
        assert!((dist[&2] - 0.64).abs() < 1e-15);
        assert_eq!(s.min_total_photons(), Some(1));
    }

    #[test]
    fn occupation_display_is_compact() {
        let occ = OccupationVector::from_counts(&[(AY, 2), (UX, 1)]);
        assert_eq!(occ.to_string(), "a_y^2 u_x");
        assert_eq!(OccupationVector::empty().to_string(), "vac");
    }

    #[test]
    fn monomial_ket_factor_matches_creation_chain() {
        let occ = OccupationVector::from_counts(&[(AX, 2), (DY, 1)]);
        let mut s = PureState::vacuum();
        s = s.apply_create(AX).apply_create(AX).apply_create(DY);
        assert_close(s.amplitude(&occ), re(monomial_ket_factor(&occ)), 1e-15);
    }
}
