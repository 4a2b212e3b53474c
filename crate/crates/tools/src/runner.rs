//! Subcommand implementations. Every runner returns a deterministic
//! table plus a flag saying whether any audited check failed.

use std::fmt;

use subshift_core::audit::{
    audit_conformal_equality, audit_corollary_lc, audit_lrn_seeded, audit_mme, audit_obs_thm3,
    audit_stirling, audit_theorem1, AuditCase, AuditError, AuditReport,
};
use subshift_core::equilibrium::{
    markov_export, partition_sum_pressure, transfer_pressure, variational_scan,
};
use subshift_core::group::{almost_partition, box_tiling, folner_box};
use subshift_core::subshift::{
    extender_compare, language_with_cap, ExtenderRelation, LanguageStatus, SubshiftError,
};
use subshift_core::{Dim, Shape, Site};

use crate::report::{fmt_f64, Table};
use crate::specfile::{pattern_to_json, AuditKind, ResolvedCase, ResolvedSpec, SpecError};

#[derive(Debug)]
pub enum ToolError {
    Spec(SpecError),
    /// A requested case id does not exist in the spec.
    UnknownCase(String),
    /// An audit was requested on a case it does not apply to.
    Rejected {
        case: String,
        audit: &'static str,
        reason: String,
    },
    /// A computation failed (cap violations carry the offending size).
    Core(String),
}

impl fmt::Display for ToolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToolError::Spec(e) => write!(f, "{e}"),
            ToolError::UnknownCase(id) => write!(f, "no case with id {id:?} in the spec"),
            ToolError::Rejected { case, audit, reason } => {
                write!(f, "case {case:?}: audit {audit} rejected: {reason}")
            }
            ToolError::Core(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ToolError {}

impl From<SpecError> for ToolError {
    fn from(e: SpecError) -> Self {
        ToolError::Spec(e)
    }
}

fn core_err(e: impl fmt::Display) -> ToolError {
    ToolError::Core(e.to_string())
}

fn subshift_err(e: SubshiftError) -> ToolError {
    match e {
        SubshiftError::ScaleCap(size) => {
            ToolError::Core(format!("scale cap exceeded: enumeration reached {size} patterns"))
        }
        other => ToolError::Core(other.to_string()),
    }
}

/// Run-level knobs taken from the command line; `None` defers to the
/// spec file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub max_radius: Option<u32>,
    pub seed: Option<u64>,
    /// Case-id filter; empty means all cases.
    pub cases: Vec<String>,
}

impl Overrides {
    fn max_radius(&self, spec: &ResolvedSpec) -> u32 {
        self.max_radius.unwrap_or(spec.raw.max_radius)
    }

    fn seed(&self, spec: &ResolvedSpec) -> u64 {
        self.seed.unwrap_or(spec.raw.seed)
    }

    fn select<'a>(&self, spec: &'a ResolvedSpec) -> Result<Vec<&'a ResolvedCase>, ToolError> {
        if self.cases.is_empty() {
            return Ok(spec.cases.iter().collect());
        }
        let mut chosen = Vec::new();
        for id in &self.cases {
            let case = spec
                .cases
                .iter()
                .find(|c| &c.id == id)
                .ok_or_else(|| ToolError::UnknownCase(id.clone()))?;
            chosen.push(case);
        }
        chosen.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(chosen)
    }
}

fn site_str(dim: Dim, s: Site) -> String {
    match dim {
        Dim::One => s.x.to_string(),
        Dim::Two => format!("{} {}", s.x, s.y),
    }
}

fn window_shape(dim: Dim, side: i64) -> Shape {
    match dim {
        Dim::One => Shape::interval(0, side),
        Dim::Two => Shape::rect(0, side, 0, side),
    }
}

// ---------------------------------------------------------------------------
// lang
// ---------------------------------------------------------------------------

pub fn run_lang(spec: &ResolvedSpec, _ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let window = window_shape(spec.subshift.dim(), spec.raw.language_window);
    let cap = spec.scale_cap()?;
    let (lang, status) = language_with_cap(&spec.subshift, &window, cap).map_err(subshift_err)?;
    let status = match status {
        LanguageStatus::Certified => "certified".to_string(),
        LanguageStatus::LocallyAdmissible(r) => format!("locally-admissible-{r}"),
    };
    let alphabet = spec.subshift.alphabet();
    let mut table = Table::new(&["index", "pattern", "status"]);
    for (i, p) in lang.iter().enumerate() {
        table.push(vec![i.to_string(), p.render(&alphabet), status.clone()]);
    }
    Ok((table, false))
}

// ---------------------------------------------------------------------------
// extender
// ---------------------------------------------------------------------------

pub fn run_extender(spec: &ResolvedSpec, ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let alphabet = spec.subshift.alphabet();
    let max_radius = ov.max_radius(spec);
    let mut table = Table::new(&["case_id", "relation", "method", "witness"]);
    for case in ov.select(spec)? {
        let report =
            extender_compare(&spec.subshift, &case.v, &case.w, max_radius).map_err(subshift_err)?;
        let witness = match &report.relation {
            ExtenderRelation::NotContained { witness, .. } => {
                serde_json::to_string(&pattern_to_json(witness, &alphabet))
                    .expect("pattern json serializes")
            }
            _ => String::new(),
        };
        table.push(vec![
            case.id.clone(),
            report.relation.to_string(),
            report.method.to_string(),
            witness,
        ]);
    }
    Ok((table, false))
}

// ---------------------------------------------------------------------------
// pressure
// ---------------------------------------------------------------------------

pub fn run_pressure(spec: &ResolvedSpec, ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let mut table = Table::new(&["method", "window", "value", "status"]);
    let phi = &spec.potential;

    match transfer_pressure(&spec.subshift, phi.working()) {
        Ok((p, _)) => table.push(vec![
            "transfer-exact".to_string(),
            String::new(),
            fmt_f64(p.value),
            "ok".to_string(),
        ]),
        Err(e) => table.push(vec![
            "transfer-exact".to_string(),
            String::new(),
            String::new(),
            e.to_string(),
        ]),
    }

    let f_n = window_shape(spec.subshift.dim(), spec.raw.pressure_window);
    match partition_sum_pressure(&spec.subshift, phi, &f_n) {
        Ok(p) => table.push(vec![
            "partition-sum".to_string(),
            spec.raw.pressure_window.to_string(),
            fmt_f64(p.value),
            "ok".to_string(),
        ]),
        Err(e) => table.push(vec![
            "partition-sum".to_string(),
            spec.raw.pressure_window.to_string(),
            String::new(),
            e.to_string(),
        ]),
    }

    match variational_scan(
        &spec.subshift,
        phi.working(),
        spec.raw.variational_candidates,
        ov.seed(spec),
    ) {
        Ok(p) => table.push(vec![
            "variational-lower-bound".to_string(),
            spec.raw.variational_candidates.to_string(),
            fmt_f64(p.value),
            "ok".to_string(),
        ]),
        Err(e) => table.push(vec![
            "variational-lower-bound".to_string(),
            spec.raw.variational_candidates.to_string(),
            String::new(),
            e.to_string(),
        ]),
    }

    Ok((table, false))
}

// ---------------------------------------------------------------------------
// equilibrium
// ---------------------------------------------------------------------------

pub fn run_equilibrium(spec: &ResolvedSpec, _ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let measure =
        subshift_core::audit::case_measure(&spec.subshift, &spec.potential).map_err(core_err)?;
    let alphabet = spec.subshift.alphabet();
    let mut table = Table::new(&["row_kind", "state", "to_state", "value"]);
    table.push(vec![
        "pressure".to_string(),
        String::new(),
        String::new(),
        fmt_f64(measure.pressure),
    ]);
    table.push(vec![
        "entropy".to_string(),
        String::new(),
        String::new(),
        fmt_f64(measure.entropy),
    ]);
    match markov_export(&measure) {
        Some((states, pi, p)) => {
            let render = |word: &[u8]| -> String {
                word.iter().map(|&s| alphabet.token(s)).collect::<String>()
            };
            for (i, state) in states.iter().enumerate() {
                table.push(vec![
                    "state".to_string(),
                    render(state),
                    String::new(),
                    fmt_f64(pi[i]),
                ]);
            }
            for (i, from) in states.iter().enumerate() {
                for (j, to) in states.iter().enumerate() {
                    if p[i][j] > 0.0 {
                        table.push(vec![
                            "transition".to_string(),
                            render(from),
                            render(to),
                            fmt_f64(p[i][j]),
                        ]);
                    }
                }
            }
        }
        None => {
            table.push(vec![
                "point_mass".to_string(),
                String::new(),
                String::new(),
                String::new(),
            ]);
        }
    }
    Ok((table, false))
}

/// Re-imports an `equilibrium` table (as rendered rows) back into
/// Markov data; inverse of the export above.
pub fn import_markov(
    rows: &[std::collections::BTreeMap<String, String>],
) -> Result<(Vec<String>, Vec<f64>, Vec<(String, String, f64)>), ToolError> {
    let mut states = Vec::new();
    let mut pi = Vec::new();
    let mut transitions = Vec::new();
    for row in rows {
        let kind = row.get("row_kind").ok_or_else(|| core_err("missing row_kind"))?;
        let parse = |key: &str| -> Result<f64, ToolError> {
            row.get(key)
                .ok_or_else(|| core_err(format!("missing {key}")))?
                .parse::<f64>()
                .map_err(|e| core_err(format!("bad float in {key}: {e}")))
        };
        match kind.as_str() {
            "state" => {
                states.push(row["state"].clone());
                pi.push(parse("value")?);
            }
            "transition" => {
                transitions.push((row["state"].clone(), row["to_state"].clone(), parse("value")?));
            }
            _ => {}
        }
    }
    Ok((states, pi, transitions))
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

fn push_report(table: &mut Table, audit: &'static str, report: &AuditReport) -> bool {
    let mut any_fail = false;
    for check in &report.checks {
        any_fail |= !check.pass;
        table.push(vec![
            report.case_id.clone(),
            audit.to_string(),
            check.name.clone(),
            fmt_f64(check.lhs),
            fmt_f64(check.rhs),
            fmt_f64(check.slack),
            check.pass.to_string(),
            report
                .radius_stamp
                .map(|r| r.to_string())
                .unwrap_or_default(),
            report.skipped.to_string(),
            check.provenance.clone(),
        ]);
    }
    any_fail
}

pub fn run_audit(spec: &ResolvedSpec, ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let max_radius = ov.max_radius(spec);
    let seed = ov.seed(spec);
    let mut table = Table::new(&[
        "case_id",
        "audit",
        "check",
        "lhs",
        "rhs",
        "slack",
        "pass",
        "radius_stamp",
        "skipped",
        "detail",
    ]);
    let mut any_fail = false;
    for case in ov.select(spec)? {
        let built = AuditCase::build(
            &case.id,
            &spec.subshift,
            &spec.potential,
            &case.v,
            &case.w,
            max_radius,
        )
        .map_err(core_err)?;
        for kind in &case.audits {
            let outcome = match kind {
                AuditKind::Theorem1 => audit_theorem1(&built),
                AuditKind::Corollary => {
                    let default_window = spec.potential.working().window().clone();
                    let h = case.window.as_ref().unwrap_or(&default_window).clone();
                    audit_corollary_lc(&built, &h)
                }
                AuditKind::Mme => audit_mme(&built),
                AuditKind::Lrn => audit_lrn_seeded(&built, case.max_n, 100, seed),
                AuditKind::Conformal => audit_conformal_equality(&built, case.max_n),
                AuditKind::Obs => audit_obs_thm3(&built),
            };
            match outcome {
                Ok(report) => any_fail |= push_report(&mut table, kind.name(), &report),
                Err(AuditError::CaseRejected(reason)) => {
                    return Err(ToolError::Rejected {
                        case: case.id.clone(),
                        audit: kind.name(),
                        reason,
                    })
                }
                Err(e) => return Err(core_err(e)),
            }
        }
    }
    Ok((table, any_fail))
}

// ---------------------------------------------------------------------------
// tile
// ---------------------------------------------------------------------------

pub fn run_tile(spec: &ResolvedSpec, _ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let Some((box_side, block, epsilon, shape)) = spec.tile.clone() else {
        return Err(ToolError::Core("spec has no tile section".to_string()));
    };
    let dim = spec.subshift.dim();
    let window = folner_box(box_side, dim);
    let mut table = Table::new(&["row_kind", "index", "sites", "value"]);

    let tiling = box_tiling(&window, block).map_err(|e| core_err(format!("tiling: {e:?}")))?;
    for (i, c) in tiling.centers.iter().enumerate() {
        table.push(vec![
            "tile_center".to_string(),
            i.to_string(),
            site_str(dim, *c),
            String::new(),
        ]);
    }

    let part = almost_partition(&shape, epsilon, &window)
        .map_err(|e| core_err(format!("almost partition: {e:?}")))?;
    table.push(vec![
        "coverage".to_string(),
        String::new(),
        String::new(),
        format!("{}", part.coverage()),
    ]);
    for (i, p) in part.parts.iter().enumerate() {
        let sites = p
            .iter()
            .map(|s| site_str(dim, *s))
            .collect::<Vec<_>>()
            .join(";");
        table.push(vec!["part".to_string(), i.to_string(), sites, String::new()]);
    }
    Ok((table, false))
}

// ---------------------------------------------------------------------------
// stirling
// ---------------------------------------------------------------------------

pub fn run_stirling(spec: &ResolvedSpec, _ov: &Overrides) -> Result<(Table, bool), ToolError> {
    let Some((a, b, d, grid)) = spec.stirling else {
        return Err(ToolError::Core("spec has no stirling section".to_string()));
    };
    let report = audit_stirling(a, b, d, grid).map_err(core_err)?;
    let mut table = Table::new(&[
        "case_id",
        "audit",
        "check",
        "lhs",
        "rhs",
        "slack",
        "pass",
        "radius_stamp",
        "skipped",
        "detail",
    ]);
    let any_fail = push_report(&mut table, "stirling", &report);
    Ok((table, any_fail))
}
