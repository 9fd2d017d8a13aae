//! Coincidence detection: projecting onto two-fold detector events.
//!
//! Detectors on paths `u` and `v` resolve photon number and polarization. A
//! coincidence fixes exactly one photon at each detector with definite
//! polarizations and nothing else in the detector paths; projecting the
//! pipeline state onto that pattern leaves an unnormalized state on paths
//! `a` and `d` whose squared norm is the event weight.

use std::fmt;
use std::str::FromStr;

use crate::entangle::DensityMatrix;
use crate::error::{Error, Result};
use crate::fock::{ModeId, Pol, PureState, Spatial, AD_MODES};

/// Polarizations seen at the two detectors: `(at_u, at_v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectionOutcome {
    pub at_u: Pol,
    pub at_v: Pol,
}

impl DetectionOutcome {
    pub const fn new(at_u: Pol, at_v: Pol) -> DetectionOutcome {
        DetectionOutcome { at_u, at_v }
    }

    /// All four outcomes in the fixed report order.
    pub const ALL: [DetectionOutcome; 4] = [
        DetectionOutcome::new(Pol::X, Pol::X),
        DetectionOutcome::new(Pol::X, Pol::Y),
        DetectionOutcome::new(Pol::Y, Pol::X),
        DetectionOutcome::new(Pol::Y, Pol::Y),
    ];

    /// Compact two-letter code, e.g. `xy`.
    pub fn code(&self) -> String {
        format!("{}{}", self.at_u.label(), self.at_v.label())
    }
}

impl fmt::Display for DetectionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.at_u, self.at_v)
    }
}

impl FromStr for DetectionOutcome {
    type Err = Error;

    /// Accepts `xy`, `x,y`, or `(x,y)` in any case.
    fn from_str(s: &str) -> Result<DetectionOutcome> {
        let cleaned: String = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .collect::<String>()
            .to_ascii_lowercase();
        let pol = |c: char| match c {
            'x' => Some(Pol::X),
            'y' => Some(Pol::Y),
            _ => None,
        };
        let mut chars = cleaned.chars();
        match (chars.next().and_then(pol), chars.next().and_then(pol), chars.next()) {
            (Some(u), Some(v), None) => Ok(DetectionOutcome::new(u, v)),
            _ => Err(Error::Config(format!(
                "cannot parse detection outcome {s:?}; expected e.g. \"xy\" or \"x,y\""
            ))),
        }
    }
}

/// Projection options; the default keeps only the lowest photon-number
/// contribution that survives, which is the leading pair order.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProjectOptions {
    pub keep_all_orders: bool,
}

/// Unnormalized state on paths `a`, `d` conditioned on one coincidence.
#[derive(Clone, Debug)]
pub struct ConditionalState {
    pub outcome: DetectionOutcome,
    pub state: PureState,
    /// Squared norm: the probability weight of this outcome.
    pub weight: f64,
}

/// Projects onto the coincidence `outcome` with default options.
pub fn project_outcome(state: &PureState, outcome: DetectionOutcome) -> Result<ConditionalState> {
    project_outcome_with(state, outcome, ProjectOptions::default())
}

/// Projects onto one photon at `u` with `outcome.at_u`, one photon at `v`
/// with `outcome.at_v`, and vacuum in the remaining detector modes, then
/// restricts to paths `a`, `d`. Errors when nothing survives.
pub fn project_outcome_with(
    state: &PureState,
    outcome: DetectionOutcome,
    opts: ProjectOptions,
) -> Result<ConditionalState> {
    let u_hit = ModeId::new(Spatial::U, outcome.at_u);
    let u_miss = ModeId::new(Spatial::U, outcome.at_u.other());
    let v_hit = ModeId::new(Spatial::V, outcome.at_v);
    let v_miss = ModeId::new(Spatial::V, outcome.at_v.other());

    let mut kept = Vec::new();
    for (occ, amp) in state.terms() {
        let matches = occ.count(u_hit) == 1
            && occ.count(u_miss) == 0
            && occ.count(v_hit) == 1
            && occ.count(v_miss) == 0;
        if matches {
            let residual = occ.with_count(u_hit, 0).with_count(v_hit, 0);
            kept.push((residual, *amp));
        }
    }
    let mut projected =
        PureState::from_terms(state.cutoff(), kept).restrict(&AD_MODES);
    if !opts.keep_all_orders {
        if let Some(min) = projected.min_total_photons() {
            let leading = projected
                .terms()
                .filter(|(occ, _)| occ.total() == min)
                .map(|(occ, amp)| (*occ, *amp));
            projected = PureState::from_terms(state.cutoff(), leading);
        }
    }
    if projected.is_empty() {
        return Err(Error::NoCoincidenceSupport { outcome });
    }
    let weight = projected.norm_sqr();
    Ok(ConditionalState {
        outcome,
        state: projected,
        weight,
    })
}

/// All four conditioned states in the fixed outcome order.
pub fn all_conditionals(state: &PureState) -> Result<Vec<ConditionalState>> {
    all_conditionals_with(state, ProjectOptions::default())
}

pub fn all_conditionals_with(
    state: &PureState,
    opts: ProjectOptions,
) -> Result<Vec<ConditionalState>> {
    DetectionOutcome::ALL
        .iter()
        .map(|&outcome| project_outcome_with(state, outcome, opts))
        .collect()
}

/// Total probability of any coincidence, summed directly over basis terms.
pub fn total_coincidence_probability(state: &PureState) -> f64 {
    DetectionOutcome::ALL
        .iter()
        .map(|o| {
            let u_hit = ModeId::new(Spatial::U, o.at_u);
            let u_miss = ModeId::new(Spatial::U, o.at_u.other());
            let v_hit = ModeId::new(Spatial::V, o.at_v);
            let v_miss = ModeId::new(Spatial::V, o.at_v.other());
            state
                .terms()
                .filter(|(occ, _)| {
                    occ.count(u_hit) == 1
                        && occ.count(u_miss) == 0
                        && occ.count(v_hit) == 1
                        && occ.count(v_miss) == 0
                        && occ
                            .with_count(u_hit, 0)
                            .with_count(v_hit, 0)
                            .supported_on(&AD_MODES)
                })
                .map(|(_, amp)| amp.norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Mixes conditioned states with their physical weights (squared norms) and
/// normalizes the trace to one.
pub fn mixture(conditionals: &[ConditionalState]) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::zero();
    for cond in conditionals {
        rho.accumulate_pure(&cond.state)?;
    }
    rho.normalize_trace()
}
