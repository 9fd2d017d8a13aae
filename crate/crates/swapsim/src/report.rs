//! Run reports: serializable result structures and their text rendering.
//!
//! The structured form is plain serde data with a stable field order and no
//! timestamps, so identical configurations serialize to identical bytes.
//! The text form prints every number with Rust's shortest round-trip float
//! formatting; values shown in text parse back to the exact binary values in
//! the structured output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cli::RunConfig;
use crate::elements::PassiveUnitary;
use crate::entangle::{BellKind, EventReadyVerdict};

/// One basis term of a state, with its exact and floating amplitudes.
#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    /// Occupation label, e.g. `a_y^2` or `a_x d_y`.
    pub ket: String,
    /// Exact ket amplitude with the `xi` power factored out, e.g. `sqrt2/2`.
    pub exact: String,
    /// Power of `xi` multiplying the exact amplitude.
    pub xi_power: u32,
    /// Floating amplitude at the configured `xi`.
    pub amplitude: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BellFidelity {
    pub bell: BellKind,
    pub fidelity: f64,
}

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixReport = Vec<Vec<[f64; 2]>>;

pub fn matrix_report(u: &PassiveUnitary) -> MatrixReport {
    (0..u.dim())
        .map(|i| {
            (0..u.dim())
                .map(|j| {
                    let z = u.entry(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalOptimumReport {
    pub fidelity: f64,
    pub bell: BellKind,
    pub unitary_a: MatrixReport,
    pub unitary_d: MatrixReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalOptimumReport {
    pub fidelity: f64,
    pub bell: BellKind,
    pub unitary: MatrixReport,
}

/// Everything reported for one detection outcome.
#[derive(Clone, Debug, Serialize)]
pub struct OutcomeReport {
    /// Two-letter outcome code, e.g. `xy`.
    pub outcome: String,
    /// Squared norm of the conditioned state: the coincidence probability.
    pub weight: f64,
    /// This outcome's share of all coincidences.
    pub weight_share: f64,
    pub terms: Vec<TermReport>,
    /// Fidelities of the normalized conditioned state with each Bell state.
    pub bell_fidelities: Vec<BellFidelity>,
    /// Best fidelity over independent per-path transforms.
    pub local_max: LocalOptimumReport,
    /// Best fidelity over one joint transform of all four analysis modes.
    pub global_max: GlobalOptimumReport,
    /// Pair-matrix singular values of the normalized state, descending;
    /// invariant under any passive transform.
    pub pair_singular_values: Vec<f64>,
    /// Transform-independent ceiling on any Bell fidelity, from the
    /// singular values.
    pub overlap_bound: f64,
}

/// Spectral summary of the coincidence-weighted mixture.
#[derive(Clone, Debug, Serialize)]
pub struct MixtureReport {
    pub trace: f64,
    pub purity: f64,
    pub rank: usize,
    /// Full spectrum, ascending.
    pub spectrum: Vec<f64>,
    /// Spectrum after partial transposition on the first path, ascending.
    pub pt_spectrum: Vec<f64>,
    pub pt_min: f64,
    pub negativity: f64,
    pub bell_fidelities: Vec<BellFidelity>,
    pub best_bell: BellKind,
    pub best_fidelity: f64,
}

/// Largest deviations between the engine and the exact reference route.
#[derive(Clone, Debug, Serialize)]
pub struct CrossChecks {
    pub conditioned_amplitude_max_delta: f64,
    pub weight_max_delta: f64,
    pub mixture_entry_max_delta: f64,
    pub pt_spectrum_max_delta: f64,
    pub negativity_delta: f64,
}

/// The full `run` report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    /// True when the photon cutoff dropped any term along the way.
    pub truncated: bool,
    pub total_coincidence_probability: f64,
    pub outcomes: Vec<OutcomeReport>,
    pub mixture: MixtureReport,
    pub event_ready: EventReadyVerdict,
    pub cross_checks: CrossChecks,
}

/// One named comparison row of the `verify` command.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub max_delta: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub rows: Vec<VerifyRow>,
}

/// Exact derivation chain for one detection outcome.
#[derive(Clone, Debug, Serialize)]
pub struct ExplainReport {
    pub outcome: String,
    pub order: u32,
    pub xi: f64,
    /// Two-pair emission terms feeding the coincidence, before the splitter.
    pub emission_terms: Vec<TermReport>,
    /// Post-splitter terms matching the detector pattern.
    pub coincidence_terms: Vec<TermReport>,
    pub conditioned: Option<ConditionedExplain>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionedExplain {
    pub terms: Vec<TermReport>,
    pub weight: f64,
    /// Exact share of all coincidences, e.g. `1/4`.
    pub weight_share: String,
    pub bell_fidelities: Vec<BellFidelity>,
    pub pair_singular_values: Vec<f64>,
    pub overlap_bound: f64,
}

fn write_terms(out: &mut String, terms: &[TermReport]) {
    let ket_width = terms.iter().map(|t| t.ket.len()).max().unwrap_or(0).max(5);
    let exact_width = terms
        .iter()
        .map(|t| t.exact.len())
        .max()
        .unwrap_or(0)
        .max(5);
    for t in terms {
        let _ = writeln!(
            out,
            "    |{ket:<kw$}>  {exact:>ew$} * xi^{power}  =  {value}",
            ket = t.ket,
            kw = ket_width,
            exact = t.exact,
            ew = exact_width,
            power = t.xi_power,
            value = t.amplitude,
        );
    }
}

fn write_bell_fidelities(out: &mut String, rows: &[BellFidelity]) {
    for f in rows {
        let _ = writeln!(out, "    {:<5} {}", f.bell.label(), f.fidelity);
    }
}

/// Renders the `run` report as readable text. Every float uses shortest
/// round-trip formatting.
pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let c = &report.config;
    let _ = writeln!(s, "pair amplitude xi      {}", c.xi);
    let _ = writeln!(s, "expansion order        {}", c.order);
    let _ = writeln!(
        s,
        "xi grid                {}",
        c.xi_grid
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(s, "optimizer restarts     {}", c.restarts);
    let _ = writeln!(s, "optimizer seed         {}", c.seed);
    let _ = writeln!(s, "spectral tolerance     {}", c.tolerance);
    let _ = writeln!(s, "cutoff truncation hit  {}", report.truncated);
    let _ = writeln!(
        s,
        "coincidence probability {}",
        report.total_coincidence_probability
    );

    for o in &report.outcomes {
        let _ = writeln!(s, "\noutcome ({},{})", &o.outcome[..1], &o.outcome[1..]);
        let _ = writeln!(s, "  weight {}  (share {})", o.weight, o.weight_share);
        let _ = writeln!(s, "  conditioned state:");
        write_terms(&mut s, &o.terms);
        let _ = writeln!(s, "  bell fidelities:");
        write_bell_fidelities(&mut s, &o.bell_fidelities);
        let _ = writeln!(
            s,
            "  best with per-path transforms   {}  (target {})",
            o.local_max.fidelity,
            o.local_max.bell.label()
        );
        let _ = writeln!(
            s,
            "  best with a joint transform     {}  (target {})",
            o.global_max.fidelity,
            o.global_max.bell.label()
        );
        let _ = writeln!(
            s,
            "  pair singular values            {}",
            o.pair_singular_values
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(s, "  transform-independent ceiling   {}", o.overlap_bound);
    }

    let m = &report.mixture;
    let _ = writeln!(s, "\ncoincidence-weighted mixture");
    let _ = writeln!(s, "  trace      {}", m.trace);
    let _ = writeln!(s, "  purity     {}", m.purity);
    let _ = writeln!(s, "  rank       {}", m.rank);
    let _ = writeln!(s, "  negativity {}", m.negativity);
    let _ = writeln!(s, "  most negative transposed eigenvalue {}", m.pt_min);
    let _ = writeln!(s, "  bell fidelities:");
    write_bell_fidelities(&mut s, &m.bell_fidelities);
    let _ = writeln!(
        s,
        "  best bell  {}  fidelity {}",
        m.best_bell.label(),
        m.best_fidelity
    );

    let e = &report.event_ready;
    let _ = writeln!(s, "\nevent-ready check");
    for (xi, score) in &e.xi_series {
        let _ = writeln!(s, "  xi {:<8} score {}", xi, score);
    }
    let _ = writeln!(s, "  fitted slope          {}", e.fitted_slope);
    let _ = writeln!(s, "  fit rel. residual     {}", e.fit_rel_residual);
    let _ = writeln!(s, "  score at smallest xi  {}", e.score);
    let _ = writeln!(s, "  verdict               {}", verdict_word(e));

    let x = &report.cross_checks;
    let _ = writeln!(s, "\nexact-reference cross-checks (max |delta|)");
    let _ = writeln!(
        s,
        "  conditioned amplitudes {}",
        x.conditioned_amplitude_max_delta
    );
    let _ = writeln!(s, "  outcome weights        {}", x.weight_max_delta);
    let _ = writeln!(s, "  mixture entries        {}", x.mixture_entry_max_delta);
    let _ = writeln!(s, "  transposed spectrum    {}", x.pt_spectrum_max_delta);
    let _ = writeln!(s, "  negativity             {}", x.negativity_delta);
    s
}

fn verdict_word(e: &EventReadyVerdict) -> &'static str {
    if e.is_event_ready {
        "event-ready"
    } else {
        "NOT event-ready"
    }
}

/// Renders the `verify` report: one line per check plus a summary line.
pub fn render_verify_text(report: &VerifyReport) -> String {
    let mut s = String::new();
    let width = report
        .rows
        .iter()
        .map(|r| r.check.len())
        .max()
        .unwrap_or(0);
    for r in &report.rows {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ = write!(
            s,
            "{status}  {check:<width$}  max |delta| {delta:.3e}  tol {tol:.1e}",
            check = r.check,
            delta = r.max_delta,
            tol = r.tolerance,
        );
        if r.note.is_empty() {
            s.push('\n');
        } else {
            let _ = writeln!(s, "  ({})", r.note);
        }
    }
    let _ = writeln!(
        s,
        "\nverification {}",
        if report.pass { "PASSED" } else { "FAILED" }
    );
    s
}

/// Renders the `explain` report as a derivation walk-through.
pub fn render_explain_text(report: &ExplainReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "outcome ({},{}) at order {}, xi = {}",
        &report.outcome[..1],
        &report.outcome[1..],
        report.order,
        report.xi
    );
    if !report.note.is_empty() {
        let _ = writeln!(s, "\n{}", report.note);
    }
    if !report.emission_terms.is_empty() {
        let _ = writeln!(
            s,
            "\ntwo-pair emission terms that can feed this coincidence:"
        );
        write_terms(&mut s, &report.emission_terms);
    }
    if !report.coincidence_terms.is_empty() {
        let _ = writeln!(
            s,
            "\nafter the splitter, terms matching the detector pattern:"
        );
        write_terms(&mut s, &report.coincidence_terms);
    }
    if let Some(c) = &report.conditioned {
        let _ = writeln!(s, "\nconditioned state on the outer paths:");
        write_terms(&mut s, &c.terms);
        let _ = writeln!(
            s,
            "  weight {}  (exact share {})",
            c.weight, c.weight_share
        );
        let _ = writeln!(s, "  bell fidelities:");
        write_bell_fidelities(&mut s, &c.bell_fidelities);
        let _ = writeln!(
            s,
            "  pair singular values  {}",
            c.pair_singular_values
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(s, "  fidelity ceiling      {}", c.overlap_bound);
    }
    s
}
