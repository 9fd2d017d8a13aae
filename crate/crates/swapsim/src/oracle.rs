//! Independent exact-arithmetic reference for the default apparatus.
//!
//! Every number the floating-point pipeline produces for the default wiring
//! (sources into `a`/`b` and `c`/`d`, splitter `b`,`c` -> `u`,`v`, common
//! pump phase) is recomputed here from scratch. Amplitudes stay in the ring
//! `Q(sqrt 2)` — rationals adjoined `sqrt 2` — which is closed under the
//! pair-source expansion, the balanced splitter rewrite, and the coincidence
//! projection. States are stored as coefficients of raw creation-operator
//! monomials times an explicit power of the pair amplitude `xi`, so the ring
//! never has to absorb a `sqrt(n!)`; kets are converted at the edges, where
//! occupations are at most two per mode.
//!
//! Spectra are computed by shifted power iteration with projection
//! deflation, sharing no code with the cyclic-Jacobi solver used by the
//! engine, so eigenvalue agreement is a genuine cross-check.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detect::DetectionOutcome;
use crate::entangle::{HERMITICITY_TOL, PROD_DIM, SIDE_BASIS, SIDE_DIM};
use crate::error::{Error, Result};
use crate::fock::{ModeId, OccupationVector, Pol, Spatial, AD_MODES};

/// Residual threshold for one power-iteration eigenpair, scaled by the
/// matrix norm. For Hermitian matrices the residual directly bounds the
/// eigenvalue error.
pub const POWER_RESIDUAL_TOL: f64 = 1e-12;

/// Iteration cap per extracted eigenpair.
pub const POWER_MAX_ITERS: usize = 100_000;

/// Base seed for the deterministic power-iteration start vectors.
const POWER_SEED: u64 = 0x0bad_5eed_0f00_d501;

// ---------------------------------------------------------------------------
// Exact ring arithmetic.

/// An element `p + q * sqrt(2)` of the real quadratic ring `Q(sqrt 2)`,
/// with exact rational `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactAmp {
    rational: BigRational,
    surd: BigRational,
}

fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactAmp {
    pub fn zero() -> ExactAmp {
        ExactAmp {
            rational: BigRational::zero(),
            surd: BigRational::zero(),
        }
    }

    pub fn one() -> ExactAmp {
        ExactAmp::from_int(1)
    }

    pub fn from_int(n: i64) -> ExactAmp {
        ExactAmp {
            rational: big_ratio(n, 1),
            surd: BigRational::zero(),
        }
    }

    /// The rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> ExactAmp {
        ExactAmp {
            rational: big_ratio(num, den),
            surd: BigRational::zero(),
        }
    }

    /// The surd `(num / den) * sqrt(2)`.
    pub fn ratio_sqrt2(num: i64, den: i64) -> ExactAmp {
        ExactAmp {
            rational: BigRational::zero(),
            surd: big_ratio(num, den),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational.is_one() && self.surd.is_zero()
    }

    /// Multiplication by `sqrt(2)`: `(p + q sqrt2) sqrt2 = 2q + p sqrt2`.
    pub fn times_sqrt2(&self) -> ExactAmp {
        ExactAmp {
            rational: &self.surd * big_ratio(2, 1),
            surd: self.rational.clone(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> ExactAmp {
        ExactAmp {
            rational: &self.rational * factor,
            surd: &self.surd * factor,
        }
    }

    /// Multiplicative inverse; the norm `p^2 - 2 q^2` vanishes only at zero.
    pub fn inverse(&self) -> Result<ExactAmp> {
        let norm = &self.rational * &self.rational
            - big_ratio(2, 1) * &self.surd * &self.surd;
        if norm.is_zero() {
            return Err(Error::ExactOverflow {
                detail: "division by zero in exact arithmetic".into(),
            });
        }
        Ok(ExactAmp {
            rational: &self.rational / &norm,
            surd: -(&self.surd / &norm),
        })
    }

    pub fn to_f64(&self) -> f64 {
        let p = self
            .rational
            .to_f64()
            .expect("exact rational part fits in f64");
        let q = self.surd.to_f64().expect("exact surd part fits in f64");
        p + q * std::f64::consts::SQRT_2
    }
}

impl Add for &ExactAmp {
    type Output = ExactAmp;
    fn add(self, rhs: &ExactAmp) -> ExactAmp {
        ExactAmp {
            rational: &self.rational + &rhs.rational,
            surd: &self.surd + &rhs.surd,
        }
    }
}

impl Sub for &ExactAmp {
    type Output = ExactAmp;
    fn sub(self, rhs: &ExactAmp) -> ExactAmp {
        ExactAmp {
            rational: &self.rational - &rhs.rational,
            surd: &self.surd - &rhs.surd,
        }
    }
}

impl Mul for &ExactAmp {
    type Output = ExactAmp;
    /// `(p1 + q1 s)(p2 + q2 s) = (p1 p2 + 2 q1 q2) + (p1 q2 + q1 p2) s`.
    fn mul(self, rhs: &ExactAmp) -> ExactAmp {
        ExactAmp {
            rational: &self.rational * &rhs.rational
                + big_ratio(2, 1) * &self.surd * &rhs.surd,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        }
    }
}

impl Neg for &ExactAmp {
    type Output = ExactAmp;
    fn neg(self) -> ExactAmp {
        ExactAmp {
            rational: -self.rational.clone(),
            surd: -self.surd.clone(),
        }
    }
}

impl fmt::Display for ExactAmp {
    /// Canonical form: `0`, `3/4`, `sqrt2/2`, `-5*sqrt2`, `1/2 - sqrt2/4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn surd_str(q: &BigRational) -> String {
            let mag = q.abs();
            let numer = mag.numer();
            let body = if numer.is_one() {
                "sqrt2".to_string()
            } else {
                format!("{numer}*sqrt2")
            };
            if mag.denom().is_one() {
                body
            } else {
                format!("{body}/{}", mag.denom())
            }
        }
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rational),
            (true, false) => {
                if self.surd.is_negative() {
                    write!(f, "-{}", surd_str(&self.surd))
                } else {
                    write!(f, "{}", surd_str(&self.surd))
                }
            }
            (false, false) => {
                let sign = if self.surd.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", self.rational, sign, surd_str(&self.surd))
            }
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `sqrt(n!)` as a ring element; representable only for `n <= 2`.
fn sqrt_factorial_exact(n: u8) -> Result<ExactAmp> {
    match n {
        0 | 1 => Ok(ExactAmp::one()),
        2 => Ok(ExactAmp::ratio_sqrt2(1, 1)),
        _ => Err(Error::ExactOverflow {
            detail: format!("sqrt({n}!) is not in Q(sqrt 2)"),
        }),
    }
}

/// `(sqrt2 / 2)^m`, the splitter attenuation for `m` rewritten operators.
fn inv_sqrt2_pow(m: u8) -> ExactAmp {
    let step = ExactAmp::ratio_sqrt2(1, 2);
    let mut acc = ExactAmp::one();
    for _ in 0..m {
        acc = &acc * &step;
    }
    acc
}

fn ket_factor_f64(occ: &OccupationVector) -> f64 {
    occ.nonzero()
        .map(|(_, n)| factorial(u32::from(n)).to_f64().expect("small factorial"))
        .map(f64::sqrt)
        .product()
}

// ---------------------------------------------------------------------------
// Exact register states.

/// A register state as exact coefficients of creation-operator monomials.
///
/// Each term is `coeff * xi^power * (prod_i adag_i^{n_i}) |vac>`; the map key
/// pairs the `xi` power with the occupation so states remain polynomials in
/// `xi`. The ket amplitude of a term is `coeff * prod_i sqrt(n_i!)`.
#[derive(Clone, Debug, Default)]
pub struct ExactState {
    terms: BTreeMap<(u32, OccupationVector), ExactAmp>,
}

impl ExactState {
    /// The vacuum: unit coefficient on the empty monomial.
    pub fn unit() -> ExactState {
        let mut s = ExactState::default();
        s.add_term(0, OccupationVector::empty(), ExactAmp::one());
        s
    }

    pub fn add_term(&mut self, power: u32, occ: OccupationVector, amp: ExactAmp) {
        if amp.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((power, occ))
            .or_insert_with(ExactAmp::zero);
        *slot = &*slot + &amp;
        if slot.is_zero() {
            self.terms.remove(&(power, occ));
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(
        &self,
    ) -> impl Iterator<Item = (&(u32, OccupationVector), &ExactAmp)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, power: u32, occ: &OccupationVector) -> ExactAmp {
        self.terms
            .get(&(power, *occ))
            .cloned()
            .unwrap_or_else(ExactAmp::zero)
    }

    /// Product state on disjoint mode sets, dropping terms above the photon
    /// cutoff exactly as the engine's truncation does.
    pub fn product(&self, other: &ExactState, max_total: u32) -> ExactState {
        let mut out = ExactState::default();
        for ((p1, occ1), a1) in self.terms() {
            for ((p2, occ2), a2) in other.terms() {
                if occ1.total() + occ2.total() > max_total {
                    continue;
                }
                let mut occ = *occ1;
                for (mode, n) in occ2.nonzero() {
                    occ = occ.with_count(mode, occ.count(mode) + n);
                }
                out.add_term(p1 + p2, occ, a1 * a2);
            }
        }
        out
    }

    /// Floating ket amplitudes at pair amplitude `xi`, in basis order.
    pub fn evaluate_ket(&self, xi: f64) -> Vec<(OccupationVector, f64)> {
        let mut by_occ: BTreeMap<OccupationVector, f64> = BTreeMap::new();
        for ((power, occ), amp) in self.terms() {
            let value = amp.to_f64() * xi.powi(*power as i32) * ket_factor_f64(occ);
            *by_occ.entry(*occ).or_insert(0.0) += value;
        }
        by_occ.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// The exact pipeline.

/// One pair source expanded to `order` pairs: `sum_n (xi^n / n!) (Kdag)^n`
/// with `Kdag = sx dag iy dag - sy dag ix dag`, all coefficients exact.
pub fn exact_source(order: u32, signal: Spatial, idler: Spatial) -> ExactState {
    let mut s = ExactState::default();
    for n in 0..=order {
        let inv_nfact = BigRational::new(BigInt::one(), factorial(n));
        for k in 0..=n {
            let occ = OccupationVector::from_counts(&[
                (ModeId::new(signal, Pol::X), (n - k) as u8),
                (ModeId::new(idler, Pol::Y), (n - k) as u8),
                (ModeId::new(signal, Pol::Y), k as u8),
                (ModeId::new(idler, Pol::X), k as u8),
            ]);
            let mut coeff = BigRational::from_integer(binomial(n, k)) * &inv_nfact;
            if k % 2 == 1 {
                coeff = -coeff;
            }
            s.add_term(n, occ, ExactAmp::one().scale(&coeff));
        }
    }
    s
}

/// Both sources multiplied out, truncated at `2 * order` total photons.
pub fn exact_emission(order: u32) -> ExactState {
    let s1 = exact_source(order, Spatial::A, Spatial::B);
    let s2 = exact_source(order, Spatial::C, Spatial::D);
    s1.product(&s2, 2 * order)
}

/// Rewrites `b` and `c` operators through the balanced splitter:
/// `b_p -> (u_p + v_p)/sqrt2`, `c_p -> (u_p - v_p)/sqrt2`.
pub fn exact_beam_splitter(state: &ExactState) -> ExactState {
    let mut out = ExactState::default();
    for ((power, occ), amp) in state.terms() {
        let mut stripped = *occ;
        let mut rewritten = Vec::new();
        for pol in Pol::ALL {
            for (path, flips_sign) in [(Spatial::B, false), (Spatial::C, true)] {
                let mode = ModeId::new(path, pol);
                let m = occ.count(mode);
                if m > 0 {
                    stripped = stripped.with_count(mode, 0);
                    rewritten.push((pol, flips_sign, m));
                }
            }
        }
        let mut acc = vec![(stripped, amp.clone())];
        for (pol, flips_sign, m) in rewritten {
            let u = ModeId::new(Spatial::U, pol);
            let v = ModeId::new(Spatial::V, pol);
            let atten = inv_sqrt2_pow(m);
            let mut next = Vec::with_capacity(acc.len() * usize::from(m + 1));
            for (occ0, amp0) in &acc {
                for j in 0..=m {
                    let mut coeff = ExactAmp::one()
                        .scale(&BigRational::from_integer(binomial(
                            u32::from(m),
                            u32::from(j),
                        )));
                    if flips_sign && (m - j) % 2 == 1 {
                        coeff = -&coeff;
                    }
                    coeff = &(&coeff * &atten) * amp0;
                    let occ1 = occ0
                        .with_count(u, occ0.count(u) + j)
                        .with_count(v, occ0.count(v) + (m - j));
                    next.push((occ1, coeff));
                }
            }
            acc = next;
        }
        for (occ1, amp1) in acc {
            out.add_term(*power, occ1, amp1);
        }
    }
    out
}

/// The full exact pipeline state after the splitter.
pub fn exact_pipeline(order: u32) -> ExactState {
    exact_beam_splitter(&exact_emission(order))
}

/// One conditioned state with exact ket amplitudes.
///
/// Empty `ket_terms` means the coincidence has no support at this order;
/// otherwise every term shares the single `xi_power` and the squared norm is
/// `norm_coeff * xi^(2 * xi_power)`.
#[derive(Clone, Debug)]
pub struct ExactConditional {
    pub outcome: DetectionOutcome,
    pub xi_power: u32,
    pub ket_terms: Vec<(OccupationVector, ExactAmp)>,
    pub norm_coeff: ExactAmp,
}

/// Projects the exact pipeline state onto one coincidence, keeping the
/// leading photon order, and converts to exact ket amplitudes.
pub fn exact_conditional(
    state: &ExactState,
    outcome: DetectionOutcome,
) -> Result<ExactConditional> {
    let u_hit = ModeId::new(Spatial::U, outcome.at_u);
    let u_miss = ModeId::new(Spatial::U, outcome.at_u.other());
    let v_hit = ModeId::new(Spatial::V, outcome.at_v);
    let v_miss = ModeId::new(Spatial::V, outcome.at_v.other());

    let mut kept: Vec<(u32, OccupationVector, ExactAmp)> = Vec::new();
    for ((power, occ), amp) in state.terms() {
        let matches = occ.count(u_hit) == 1
            && occ.count(u_miss) == 0
            && occ.count(v_hit) == 1
            && occ.count(v_miss) == 0;
        if !matches {
            continue;
        }
        let residual = occ.with_count(u_hit, 0).with_count(v_hit, 0);
        if !residual.supported_on(&AD_MODES) {
            continue;
        }
        kept.push((*power, residual, amp.clone()));
    }
    let Some(min_total) = kept.iter().map(|(_, occ, _)| occ.total()).min() else {
        return Ok(ExactConditional {
            outcome,
            xi_power: 0,
            ket_terms: Vec::new(),
            norm_coeff: ExactAmp::zero(),
        });
    };
    kept.retain(|(_, occ, _)| occ.total() == min_total);

    let xi_power = kept[0].0;
    if kept.iter().any(|(p, _, _)| *p != xi_power) {
        return Err(Error::ExactOverflow {
            detail: "conditioned state mixes xi powers at leading order".into(),
        });
    }
    let mut ket_terms = Vec::with_capacity(kept.len());
    let mut norm_coeff = ExactAmp::zero();
    for (_, occ, coeff) in kept {
        let mut ket = coeff;
        for (_, n) in occ.nonzero() {
            ket = &ket * &sqrt_factorial_exact(n)?;
        }
        norm_coeff = &norm_coeff + &(&ket * &ket);
        ket_terms.push((occ, ket));
    }
    Ok(ExactConditional {
        outcome,
        xi_power,
        ket_terms,
        norm_coeff,
    })
}

/// All four conditioned states of the exact pipeline at this order.
pub fn exact_conditionals(order: u32) -> Result<Vec<ExactConditional>> {
    let state = exact_pipeline(order);
    DetectionOutcome::ALL
        .iter()
        .map(|&outcome| exact_conditional(&state, outcome))
        .collect()
}

/// Gram matrix of the unnormalized conditioned kets: entry `(i, j)` is the
/// coefficient of `xi^(p_i + p_j)` in `<phi_i | phi_j>`.
pub fn exact_gram(conds: &[ExactConditional]) -> Vec<Vec<ExactAmp>> {
    let n = conds.len();
    let mut g = vec![vec![ExactAmp::zero(); n]; n];
    for (i, ci) in conds.iter().enumerate() {
        for (j, cj) in conds.iter().enumerate() {
            let mut acc = ExactAmp::zero();
            for (occ_i, amp_i) in &ci.ket_terms {
                for (occ_j, amp_j) in &cj.ket_terms {
                    if occ_i == occ_j {
                        acc = &acc + &(amp_i * amp_j);
                    }
                }
            }
            g[i][j] = acc;
        }
    }
    g
}

fn side_occupation_index(occ: &OccupationVector, side: Spatial) -> Result<usize> {
    let nx = occ.count(ModeId::new(side, Pol::X));
    let ny = occ.count(ModeId::new(side, Pol::Y));
    SIDE_BASIS
        .iter()
        .position(|&(bx, by)| (bx, by) == (nx, ny))
        .ok_or_else(|| Error::BasisOverflow {
            detail: format!("occupation ({nx},{ny}) on path {side} exceeds two photons"),
        })
}

fn product_index(occ: &OccupationVector) -> Result<usize> {
    let ia = side_occupation_index(occ, Spatial::A)?;
    let id = side_occupation_index(occ, Spatial::D)?;
    Ok(ia * SIDE_DIM + id)
}

/// Weighted mixture of the conditioned states as an exact, trace-one matrix
/// on the two-path product basis. The pair amplitude cancels: every weight
/// carries the same power of `xi`.
pub fn exact_mixture(conds: &[ExactConditional]) -> Result<Vec<ExactAmp>> {
    let mut total = ExactAmp::zero();
    for c in conds {
        if c.xi_power != conds[0].xi_power && !c.ket_terms.is_empty() {
            return Err(Error::ExactOverflow {
                detail: "mixture components carry different xi powers".into(),
            });
        }
        total = &total + &c.norm_coeff;
    }
    if total.is_zero() {
        return Err(Error::AllZeroWeights);
    }
    let inv_total = total.inverse()?;
    let mut rho = vec![ExactAmp::zero(); PROD_DIM * PROD_DIM];
    for c in conds {
        for (occ_r, amp_r) in &c.ket_terms {
            let r = product_index(occ_r)?;
            for (occ_c, amp_c) in &c.ket_terms {
                let col = product_index(occ_c)?;
                let slot = &mut rho[r * PROD_DIM + col];
                *slot = &*slot + &(&(amp_r * amp_c) * &inv_total);
            }
        }
    }
    Ok(rho)
}

/// Partial transpose on the first (path `a`) factor, as an exact entry
/// permutation.
pub fn exact_partial_transpose(rho: &[ExactAmp]) -> Vec<ExactAmp> {
    let mut out = vec![ExactAmp::zero(); PROD_DIM * PROD_DIM];
    for ra in 0..SIDE_DIM {
        for rd in 0..SIDE_DIM {
            for ca in 0..SIDE_DIM {
                for cd in 0..SIDE_DIM {
                    let dst = (ra * SIDE_DIM + rd) * PROD_DIM + (ca * SIDE_DIM + cd);
                    let src = (ca * SIDE_DIM + rd) * PROD_DIM + (ra * SIDE_DIM + cd);
                    out[dst] = rho[src].clone();
                }
            }
        }
    }
    out
}

/// Converts an exact matrix to complex floating entries.
pub fn to_c64_matrix(exact: &[ExactAmp]) -> Vec<C64> {
    exact.iter().map(|a| C64::new(a.to_f64(), 0.0)).collect()
}

// ---------------------------------------------------------------------------
// Independent eigensolver.

fn matvec(a: &[C64], dim: usize, v: &[C64], out: &mut [C64]) {
    for (i, slot) in out.iter_mut().enumerate() {
        let row = &a[i * dim..(i + 1) * dim];
        *slot = row
            .iter()
            .zip(v.iter())
            .map(|(aij, vj)| aij * vj)
            .sum();
    }
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Projects `v` onto the orthogonal complement of the rows in `basis`.
fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for u in basis {
        let overlap = dot(u, v);
        for (vi, ui) in v.iter_mut().zip(u.iter()) {
            *vi -= overlap * ui;
        }
    }
}

fn seeded_start(dim: usize, index: usize) -> Vec<C64> {
    let seed = POWER_SEED ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Full spectrum of a Hermitian matrix by shifted power iteration with
/// projection deflation, sorted ascending.
///
/// The Frobenius-norm shift makes the shifted matrix positive semidefinite,
/// so the dominant eigenvalue of each deflated complement is the largest
/// remaining one. Start vectors are deterministic. This solver is the
/// verification counterpart to the engine's Jacobi routine and shares none
/// of its machinery.
pub fn power_iteration_spectrum(entries: &[C64], dim: usize) -> Result<Vec<f64>> {
    assert_eq!(entries.len(), dim * dim, "square matrix required");
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
    let mut a = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i * dim + j] =
                (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
        }
    }
    let scale = norm(&a);
    if scale == 0.0 {
        return Ok(vec![0.0; dim]);
    }
    let shift = scale;
    for i in 0..dim {
        a[i * dim + i] += shift;
    }
    let tol = POWER_RESIDUAL_TOL * scale.max(1.0);

    let mut found: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let mut spectrum = Vec::with_capacity(dim);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    for k in 0..dim {
        let mut v = seeded_start(dim, k);
        project_out(&mut v, &found);
        let mut retry = 1;
        while norm(&v) < 1e-6 {
            v = seeded_start(dim, k + retry * dim);
            project_out(&mut v, &found);
            retry += 1;
        }
        let inv = 1.0 / norm(&v);
        v.iter_mut().for_each(|z| *z *= inv);

        let mut converged = false;
        for iter in 0..POWER_MAX_ITERS {
            matvec(&a, dim, &v, &mut w);
            project_out(&mut w, &found);
            let lambda = dot(&v, &w).re;
            let residual = v
                .iter()
                .zip(w.iter())
                .map(|(vi, wi)| (wi - lambda * vi).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual <= tol {
                spectrum.push(lambda - shift);
                // Re-orthonormalize before recording, twice for stability.
                project_out(&mut v, &found);
                project_out(&mut v, &found);
                let n = norm(&v);
                if n > 0.0 {
                    v.iter_mut().for_each(|z| *z /= n);
                }
                found.push(std::mem::take(&mut v));
                converged = true;
                break;
            }
            let n = norm(&w);
            if n == 0.0 {
                // The complement is annihilated: remaining eigenvalue is
                // exactly the negated shift.
                spectrum.push(-shift);
                found.push(std::mem::take(&mut v));
                converged = true;
                break;
            }
            v.copy_from_slice(&w);
            v.iter_mut().for_each(|z| *z /= n);
            if iter == POWER_MAX_ITERS - 1 {
                return Err(Error::NoConvergence {
                    sweeps: POWER_MAX_ITERS,
                });
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                sweeps: POWER_MAX_ITERS,
            });
        }
        w = vec![C64::new(0.0, 0.0); dim];
    }
    spectrum.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(spectrum)
}

/// Sum of the magnitudes of the negative eigenvalues.
pub fn negativity_from_spectrum(spectrum: &[f64]) -> f64 {
    spectrum.iter().filter(|&&x| x < 0.0).map(|x| -x).sum()
}
