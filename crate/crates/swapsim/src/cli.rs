//! Command implementations behind the `swapsim` binary.
//!
//! `run` simulates the full pipeline and reports conditioned states,
//! entanglement measures, optimized fidelities, and the event-ready verdict.
//! `verify` recomputes everything through the exact reference route and
//! compares the two, row by row. `explain` walks one detection outcome from
//! emission to conditioned state with exact coefficients.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detect::{all_conditionals, mixture, ConditionalState, DetectionOutcome};
use crate::elements::{beam_splitter, pdc_state, PdcConfig};
use crate::entangle::{
    best_bell_fidelity, event_ready_check, fidelity, fidelity_pure,
    max_bell_fidelity_global, max_bell_fidelity_local, negativity, pt_spectrum,
    takagi_fidelity_bound, takagi_spectrum, BellKind, DensityMatrix, PROD_DIM,
};
use crate::error::{Error, Result};
use crate::fock::{OccupationVector, PureState, Spatial};
use crate::oracle::{
    self, negativity_from_spectrum, power_iteration_spectrum, to_c64_matrix, ExactAmp,
    ExactConditional,
};
use crate::report::{
    matrix_report, BellFidelity, ConditionedExplain, CrossChecks, ExplainReport,
    GlobalOptimumReport, LocalOptimumReport, MixtureReport, OutcomeReport, Report,
    TermReport, VerifyReport, VerifyRow,
};

/// Fixed tolerance for float-versus-exact amplitude agreement. Spectral
/// comparisons use the configurable [`RunConfig::tolerance`] instead.
pub const AMP_TOL: f64 = 1e-12;

pub const DEFAULT_XI: f64 = 0.1;
pub const DEFAULT_ORDER: u32 = 2;
pub const DEFAULT_XI_GRID: [f64; 3] = [0.2, 0.1, 0.05];
pub const DEFAULT_RESTARTS: u32 = 50;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Fully resolved run configuration, echoed verbatim into reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Pair amplitude of both sources.
    pub xi: f64,
    /// Pair expansion order per source (1 to 3).
    pub order: u32,
    /// Pair amplitudes for the event-ready scaling check.
    pub xi_grid: Vec<f64>,
    /// Optimizer restarts per maximization.
    pub restarts: u32,
    /// Optimizer seed.
    pub seed: u64,
    /// Tolerance for spectral cross-checks.
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            xi: DEFAULT_XI,
            order: DEFAULT_ORDER,
            xi_grid: DEFAULT_XI_GRID.to_vec(),
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::Config(format!(
                "xi must lie strictly between 0 and 1, got {}",
                self.xi
            )));
        }
        if !(1..=3).contains(&self.order) {
            return Err(Error::Config(format!(
                "order must be 1, 2, or 3, got {}",
                self.order
            )));
        }
        if self.xi_grid.len() < 3 {
            return Err(Error::Config(format!(
                "xi grid needs at least three values, got {}",
                self.xi_grid.len()
            )));
        }
        if let Some(bad) = self
            .xi_grid
            .iter()
            .find(|&&x| !(x > 0.0 && x < 1.0))
        {
            return Err(Error::Config(format!(
                "xi grid values must lie strictly between 0 and 1, got {bad}"
            )));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Optional overrides loaded from a TOML config file; command-line flags
/// win over file values.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub xi: Option<f64>,
    pub order: Option<u32>,
    pub xi_grid: Option<Vec<f64>>,
    pub restarts: Option<u32>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let raw = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        toml::from_str(&raw).map_err(|e| {
            Error::Config(format!("invalid config file {}: {e}", path.display()))
        })
    }

    /// Applies the file values onto `cfg` where present.
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(xi) = self.xi {
            cfg.xi = xi;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        if let Some(grid) = &self.xi_grid {
            cfg.xi_grid = grid.clone();
        }
        if let Some(restarts) = self.restarts {
            cfg.restarts = restarts;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(tolerance) = self.tolerance {
            cfg.tolerance = tolerance;
        }
    }
}

/// Emission plus splitter for the default wiring: sources into `a`/`b` and
/// `c`/`d`, splitter `b`,`c` -> `u`,`v`.
pub fn pipeline_state(xi: f64, order: u32) -> Result<PureState> {
    let state = pdc_state(&PdcConfig::with_xi_order(xi, order))?;
    beam_splitter(&state, Spatial::B, Spatial::C, Spatial::U, Spatial::V)
}

fn conditioned_mixture(xi: f64, order: u32) -> Result<DensityMatrix> {
    mixture(&all_conditionals(&pipeline_state(xi, order)?)?)
}

fn bell_fidelity_rows_pure(state: &PureState) -> Result<Vec<BellFidelity>> {
    BellKind::ALL
        .iter()
        .map(|&bell| {
            Ok(BellFidelity {
                bell,
                fidelity: fidelity_pure(state, bell)?,
            })
        })
        .collect()
}

fn exact_term_reports(exact: &ExactConditional, xi: f64) -> Vec<TermReport> {
    exact
        .ket_terms
        .iter()
        .map(|(occ, amp)| TermReport {
            ket: occ.to_string(),
            exact: amp.to_string(),
            xi_power: exact.xi_power,
            amplitude: amp.to_f64() * xi.powi(exact.xi_power as i32),
        })
        .collect()
}

/// Largest disagreement between an engine state and exact `(occ, value)`
/// pairs, over the union of their supports.
fn state_max_delta(state: &PureState, exact: &[(OccupationVector, f64)]) -> f64 {
    let mut delta: f64 = 0.0;
    let mut covered = std::collections::BTreeSet::new();
    for (occ, value) in exact {
        let amp = state.amplitude(occ);
        delta = delta.max((amp.re - value).abs()).max(amp.im.abs());
        covered.insert(*occ);
    }
    for (occ, amp) in state.terms() {
        if !covered.contains(occ) {
            delta = delta.max(amp.norm());
        }
    }
    delta
}

fn conditional_deltas(
    conds: &[ConditionalState],
    exact_conds: &[ExactConditional],
    xi: f64,
) -> (f64, f64) {
    let mut amp_delta: f64 = 0.0;
    let mut weight_delta: f64 = 0.0;
    for (cond, exact) in conds.iter().zip(exact_conds.iter()) {
        let evaluated: Vec<(OccupationVector, f64)> = exact
            .ket_terms
            .iter()
            .map(|(occ, amp)| (*occ, amp.to_f64() * xi.powi(exact.xi_power as i32)))
            .collect();
        amp_delta = amp_delta.max(state_max_delta(&cond.state, &evaluated));
        let exact_weight =
            exact.norm_coeff.to_f64() * xi.powi(2 * exact.xi_power as i32);
        weight_delta = weight_delta.max((cond.weight - exact_weight).abs());
    }
    (amp_delta, weight_delta)
}

/// Runs the full pipeline and assembles the report.
pub fn cmd_run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let state = pipeline_state(cfg.xi, cfg.order)?;
    let conds = all_conditionals(&state)?;
    let total_weight: f64 = conds.iter().map(|c| c.weight).sum();

    let exact_conds = oracle::exact_conditionals(cfg.order)?;
    let (amp_delta, weight_delta) = conditional_deltas(&conds, &exact_conds, cfg.xi);

    let mut outcomes = Vec::with_capacity(conds.len());
    for (cond, exact) in conds.iter().zip(exact_conds.iter()) {
        let local = max_bell_fidelity_local(&cond.state, cfg.restarts, cfg.seed)?;
        let global = max_bell_fidelity_global(&cond.state, cfg.restarts, cfg.seed)?;
        let (normalized, _) = cond.state.normalize()?;
        let singular = takagi_spectrum(&normalized)?;
        let bound = takagi_fidelity_bound(&cond.state, BellKind::PsiMinus)?;
        outcomes.push(OutcomeReport {
            outcome: cond.outcome.code(),
            weight: cond.weight,
            weight_share: cond.weight / total_weight,
            terms: exact_term_reports(exact, cfg.xi),
            bell_fidelities: bell_fidelity_rows_pure(&cond.state)?,
            local_max: LocalOptimumReport {
                fidelity: local.fidelity,
                bell: local.bell,
                unitary_a: matrix_report(&local.unitary_a),
                unitary_d: matrix_report(&local.unitary_d),
            },
            global_max: GlobalOptimumReport {
                fidelity: global.fidelity,
                bell: global.bell,
                unitary: matrix_report(&global.unitary),
            },
            pair_singular_values: singular.to_vec(),
            overlap_bound: bound,
        });
    }

    let rho = mixture(&conds)?;
    let spectrum = rho.eigenvalues()?;
    let pt_spec = pt_spectrum(&rho)?;
    let neg = negativity(&rho)?;
    let (best_bell, best_fidelity) = best_bell_fidelity(&rho);
    let mixture_report = MixtureReport {
        trace: rho.trace(),
        purity: rho.purity(),
        rank: rho.rank(cfg.tolerance)?,
        spectrum: spectrum.clone(),
        pt_spectrum: pt_spec.clone(),
        pt_min: pt_spec[0],
        negativity: neg,
        bell_fidelities: BellKind::ALL
            .iter()
            .map(|&bell| BellFidelity {
                bell,
                fidelity: fidelity(&rho, bell),
            })
            .collect(),
        best_bell,
        best_fidelity,
    };

    let event_ready =
        event_ready_check(&cfg.xi_grid, |xi| conditioned_mixture(xi, cfg.order))?;

    // Exact-reference route for the mixture-level numbers.
    let exact_rho = oracle::exact_mixture(&exact_conds)?;
    let mut mixture_delta: f64 = 0.0;
    for (i, exact_entry) in exact_rho.iter().enumerate() {
        let engine = rho.entries()[i];
        let want = exact_entry.to_f64();
        mixture_delta = mixture_delta
            .max((engine.re - want).abs())
            .max(engine.im.abs());
    }
    let exact_pt = oracle::exact_partial_transpose(&exact_rho);
    let oracle_pt_spec = power_iteration_spectrum(&to_c64_matrix(&exact_pt), PROD_DIM)?;
    let pt_delta = pt_spec
        .iter()
        .zip(oracle_pt_spec.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    let neg_delta = (neg - negativity_from_spectrum(&oracle_pt_spec)).abs();

    Ok(Report {
        config: cfg.clone(),
        truncated: state.truncated(),
        total_coincidence_probability: total_weight,
        outcomes,
        mixture: mixture_report,
        event_ready,
        cross_checks: CrossChecks {
            conditioned_amplitude_max_delta: amp_delta,
            weight_max_delta: weight_delta,
            mixture_entry_max_delta: mixture_delta,
            pt_spectrum_max_delta: pt_delta,
            negativity_delta: neg_delta,
        },
    })
}

fn row(check: &str, max_delta: f64, tolerance: f64, note: &str) -> VerifyRow {
    VerifyRow {
        check: check.to_string(),
        max_delta,
        tolerance,
        pass: max_delta <= tolerance,
        note: note.to_string(),
    }
}

fn skipped_row(check: &str, note: &str) -> VerifyRow {
    VerifyRow {
        check: check.to_string(),
        max_delta: 0.0,
        tolerance: 0.0,
        pass: true,
        note: note.to_string(),
    }
}

/// Recomputes the pipeline through the exact route and compares, row by row.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut rows = Vec::new();

    let state = pipeline_state(cfg.xi, cfg.order)?;
    let exact_state = oracle::exact_pipeline(cfg.order);
    let evaluated = exact_state.evaluate_ket(cfg.xi);
    rows.push(row(
        "pipeline amplitudes",
        state_max_delta(&state, &evaluated),
        AMP_TOL,
        &format!("{} basis terms at order {}", state.len(), cfg.order),
    ));

    let exact_conds = oracle::exact_conditionals(cfg.order)?;
    let exact_empty = exact_conds.iter().all(|c| c.ket_terms.is_empty());
    let engine_conds = match all_conditionals(&state) {
        Ok(conds) => Some(conds),
        Err(Error::NoCoincidenceSupport { .. }) => None,
        Err(e) => return Err(e),
    };

    const NO_SUPPORT: &str = "skipped: no coincidence support at this order";
    match (&engine_conds, exact_empty) {
        (None, true) => {
            rows.push(skipped_row(
                "coincidence support",
                "both routes agree: no support at this order",
            ));
        }
        (Some(conds), false) => {
            let mut mismatches = 0usize;
            for (cond, exact) in conds.iter().zip(exact_conds.iter()) {
                let engine_occs: std::collections::BTreeSet<_> =
                    cond.state.terms().map(|(occ, _)| *occ).collect();
                let exact_occs: std::collections::BTreeSet<_> =
                    exact.ket_terms.iter().map(|(occ, _)| *occ).collect();
                mismatches += engine_occs.symmetric_difference(&exact_occs).count();
            }
            rows.push(row(
                "coincidence support",
                mismatches as f64,
                0.0,
                "symmetric difference of occupation sets",
            ));
        }
        (engine, _) => {
            rows.push(VerifyRow {
                check: "coincidence support".into(),
                max_delta: f64::INFINITY,
                tolerance: 0.0,
                pass: false,
                note: format!(
                    "engine sees {} support, exact route sees {}",
                    if engine.is_some() { "some" } else { "no" },
                    if exact_empty { "none" } else { "some" },
                ),
            });
        }
    }

    if let Some(conds) = &engine_conds {
        let (amp_delta, weight_delta) = conditional_deltas(conds, &exact_conds, cfg.xi);
        rows.push(row("conditioned amplitudes", amp_delta, AMP_TOL, ""));
        rows.push(row("outcome weights", weight_delta, AMP_TOL, ""));

        let gram = oracle::exact_gram(&exact_conds);
        let mut overlap_delta: f64 = 0.0;
        let mut exact_off_diagonal = false;
        for i in 0..conds.len() {
            for j in 0..conds.len() {
                if i == j {
                    continue;
                }
                overlap_delta =
                    overlap_delta.max(conds[i].state.inner(&conds[j].state).norm());
                exact_off_diagonal |= !gram[i][j].is_zero();
            }
        }
        rows.push(VerifyRow {
            check: "pairwise overlaps".into(),
            max_delta: overlap_delta,
            tolerance: AMP_TOL,
            pass: overlap_delta <= AMP_TOL && !exact_off_diagonal,
            note: if exact_off_diagonal {
                "exact Gram matrix is not diagonal".into()
            } else {
                "exact Gram matrix is diagonal".into()
            },
        });

        let rho = mixture(conds)?;
        let exact_rho = oracle::exact_mixture(&exact_conds)?;
        let mut entry_delta: f64 = 0.0;
        for (i, exact_entry) in exact_rho.iter().enumerate() {
            let engine = rho.entries()[i];
            let want = exact_entry.to_f64();
            entry_delta = entry_delta
                .max((engine.re - want).abs())
                .max(engine.im.abs());
        }
        rows.push(row("mixture entries", entry_delta, AMP_TOL, ""));

        let engine_spec = rho.eigenvalues()?;
        let oracle_spec =
            power_iteration_spectrum(&to_c64_matrix(&exact_rho), PROD_DIM)?;
        let spec_delta = engine_spec
            .iter()
            .zip(oracle_spec.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        rows.push(row(
            "mixture spectrum",
            spec_delta,
            cfg.tolerance,
            "Jacobi engine vs power-iteration reference",
        ));

        let engine_pt = pt_spectrum(&rho)?;
        let exact_pt = oracle::exact_partial_transpose(&exact_rho);
        let oracle_pt =
            power_iteration_spectrum(&to_c64_matrix(&exact_pt), PROD_DIM)?;
        let pt_delta = engine_pt
            .iter()
            .zip(oracle_pt.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        rows.push(row(
            "transposed spectrum",
            pt_delta,
            cfg.tolerance,
            "Jacobi engine vs power-iteration reference",
        ));

        let neg_delta =
            (negativity(&rho)? - negativity_from_spectrum(&oracle_pt)).abs();
        rows.push(row("negativity", neg_delta, cfg.tolerance, ""));

        let sqrt3 = 3.0_f64.sqrt();
        let anchor_delta = (engine_pt[0] + sqrt3 / 8.0)
            .abs()
            .max((negativity(&rho)? - (1.0 + sqrt3) / 8.0).abs());
        rows.push(row(
            "closed-form anchors",
            anchor_delta,
            cfg.tolerance,
            "most negative transposed eigenvalue and negativity",
        ));
    } else {
        for check in [
            "conditioned amplitudes",
            "outcome weights",
            "pairwise overlaps",
            "mixture entries",
            "mixture spectrum",
            "transposed spectrum",
            "negativity",
            "closed-form anchors",
        ] {
            rows.push(skipped_row(check, NO_SUPPORT));
        }
    }

    let pass = rows.iter().all(|r| r.pass);
    Ok(VerifyReport { pass, rows })
}

/// Walks one detection outcome through the exact derivation.
pub fn cmd_explain(cfg: &RunConfig, outcome: DetectionOutcome) -> Result<ExplainReport> {
    cfg.validate()?;
    let emission = oracle::exact_emission(cfg.order);
    let split = oracle::exact_beam_splitter(&emission);
    let exact_cond = oracle::exact_conditional(&split, outcome)?;

    // Two-pair emission terms whose detector-path polarizations can match
    // the outcome.
    let mut wanted_pols = [outcome.at_u, outcome.at_v];
    wanted_pols.sort_by_key(|p| p.label());
    let mut emission_terms = Vec::new();
    for ((power, occ), amp) in emission.terms() {
        if occ.total() != 4 {
            continue;
        }
        let mut pols: Vec<_> = occ
            .nonzero()
            .filter(|(mode, _)| {
                matches!(mode.spatial, Spatial::B | Spatial::C)
            })
            .flat_map(|(mode, n)| std::iter::repeat(mode.pol).take(usize::from(n)))
            .collect();
        pols.sort_by_key(|p| p.label());
        if pols != wanted_pols {
            continue;
        }
        let ket_amp = exact_ket_amp(occ, amp)?;
        emission_terms.push(TermReport {
            ket: occ.to_string(),
            exact: ket_amp.to_string(),
            xi_power: *power,
            amplitude: ket_amp.to_f64() * cfg.xi.powi(*power as i32),
        });
    }

    let u_hit = crate::fock::ModeId::new(Spatial::U, outcome.at_u);
    let u_miss = crate::fock::ModeId::new(Spatial::U, outcome.at_u.other());
    let v_hit = crate::fock::ModeId::new(Spatial::V, outcome.at_v);
    let v_miss = crate::fock::ModeId::new(Spatial::V, outcome.at_v.other());
    let mut coincidence_terms = Vec::new();
    for ((power, occ), amp) in split.terms() {
        let matches = occ.count(u_hit) == 1
            && occ.count(u_miss) == 0
            && occ.count(v_hit) == 1
            && occ.count(v_miss) == 0
            && occ.total() == 4;
        if !matches {
            continue;
        }
        let ket_amp = exact_ket_amp(occ, amp)?;
        coincidence_terms.push(TermReport {
            ket: occ.to_string(),
            exact: ket_amp.to_string(),
            xi_power: *power,
            amplitude: ket_amp.to_f64() * cfg.xi.powi(*power as i32),
        });
    }

    let (conditioned, note) = if exact_cond.ket_terms.is_empty() {
        (
            None,
            format!(
                "every two-pair term is dropped by the photon cutoff at order {}, \
                 so this coincidence never fires; raise the order to at least 2",
                cfg.order
            ),
        )
    } else {
        let all_exact = oracle::exact_conditionals(cfg.order)?;
        let mut total = ExactAmp::zero();
        for c in &all_exact {
            total = &total + &c.norm_coeff;
        }
        let share = &exact_cond.norm_coeff * &total.inverse()?;

        let engine_cond = crate::detect::project_outcome(
            &pipeline_state(cfg.xi, cfg.order)?,
            outcome,
        )?;
        let (normalized, _) = engine_cond.state.normalize()?;
        let singular = takagi_spectrum(&normalized)?;
        let bound = takagi_fidelity_bound(&engine_cond.state, BellKind::PsiMinus)?;
        (
            Some(ConditionedExplain {
                terms: exact_term_reports(&exact_cond, cfg.xi),
                weight: engine_cond.weight,
                weight_share: share.to_string(),
                bell_fidelities: bell_fidelity_rows_pure(&engine_cond.state)?,
                pair_singular_values: singular.to_vec(),
                overlap_bound: bound,
            }),
            String::new(),
        )
    };

    Ok(ExplainReport {
        outcome: outcome.code(),
        order: cfg.order,
        xi: cfg.xi,
        emission_terms,
        coincidence_terms,
        conditioned,
        note,
    })
}

fn exact_ket_amp(occ: &OccupationVector, monomial: &ExactAmp) -> Result<ExactAmp> {
    let mut ket = monomial.clone();
    for (_, n) in occ.nonzero() {
        ket = &ket
            * &match n {
                0 | 1 => ExactAmp::one(),
                2 => ExactAmp::ratio_sqrt2(1, 1),
                _ => {
                    return Err(Error::ExactOverflow {
                        detail: format!("sqrt({n}!) is not representable exactly"),
                    })
                }
            };
    }
    Ok(ket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Pol;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn validation_rejects_out_of_range_values() {
        let mut cfg = RunConfig::default();
        cfg.xi = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg = RunConfig::default();
        cfg.order = 4;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg = RunConfig::default();
        cfg.xi_grid = vec![0.1, 0.2];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg = RunConfig::default();
        cfg.xi_grid = vec![0.1, 0.2, -0.3];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg = RunConfig::default();
        cfg.restarts = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg = RunConfig::default();
        cfg.tolerance = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn file_config_applies_only_present_fields() {
        let file: FileConfig = toml::from_str("xi = 0.25\nseed = 7").unwrap();
        let mut cfg = RunConfig::default();
        file.apply(&mut cfg);
        assert_eq!(cfg.xi, 0.25);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.order, DEFAULT_ORDER);
        assert_eq!(cfg.xi_grid, DEFAULT_XI_GRID.to_vec());
    }

    #[test]
    fn file_config_rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("xii = 0.25").is_err());
    }

    #[test]
    fn verify_passes_at_leading_order() {
        let mut cfg = RunConfig::default();
        cfg.restarts = 2;
        let report = cmd_verify(&cfg).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.rows.len() >= 9);
    }

    #[test]
    fn verify_passes_without_coincidence_support() {
        let mut cfg = RunConfig::default();
        cfg.order = 1;
        let report = cmd_verify(&cfg).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report
            .rows
            .iter()
            .any(|r| r.note.contains("no support at this order")));
    }

    #[test]
    fn explain_reports_the_exact_share() {
        let mut cfg = RunConfig::default();
        cfg.restarts = 2;
        let outcome = DetectionOutcome::new(Pol::X, Pol::Y);
        let report = cmd_explain(&cfg, outcome).unwrap();
        let cond = report.conditioned.expect("support at order 2");
        assert_eq!(cond.weight_share, "1/4");
        assert_eq!(cond.terms.len(), 4);
        assert_eq!(report.emission_terms.len(), 4);
        assert!(!report.coincidence_terms.is_empty());
    }

    #[test]
    fn explain_notes_missing_support_at_first_order() {
        let mut cfg = RunConfig::default();
        cfg.order = 1;
        let outcome = DetectionOutcome::new(Pol::X, Pol::X);
        let report = cmd_explain(&cfg, outcome).unwrap();
        assert!(report.conditioned.is_none());
        assert!(report.note.contains("never fires"));
        assert!(report.emission_terms.is_empty());
    }
}
