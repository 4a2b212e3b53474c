//! Tool spec files: a versioned JSON schema describing the subshift,
//! the potential, the audit cases, and the run parameters, with a
//! strict parse-validate-reject cycle.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use subshift_core::subshift::is_legal_pattern;
use subshift_core::{
    Alphabet, Dim, LocallyConstantPotential, Pattern, Potential, Shape, Site, SubshiftSpec,
    SvPotential,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the spec-level scale cap.
pub const SCALE_CAP_ENV: &str = "SUBSHIFT_SCALE_CAP";

// ---------------------------------------------------------------------------
// JSON surface
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolSpec {
    pub schema_version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_max_radius")]
    pub max_radius: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_cap: Option<usize>,
    pub subshift: SubshiftJson,
    #[serde(default)]
    pub potential: PotentialJson,
    /// Interval (1D) or square (2D) side for the `lang` table.
    #[serde(default = "default_window")]
    pub language_window: i64,
    /// Window length for the partition-sum pressure row.
    #[serde(default = "default_window")]
    pub pressure_window: i64,
    #[serde(default = "default_candidates")]
    pub variational_candidates: usize,
    #[serde(default)]
    pub cases: Vec<CaseJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stirling: Option<StirlingJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tile: Option<TileJson>,
}

fn default_seed() -> u64 {
    0x5eed
}

fn default_max_radius() -> u32 {
    6
}

fn default_window() -> i64 {
    8
}

fn default_candidates() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubshiftJson {
    GoldenMean,
    HardSquare,
    SunnySideUp,
    FullShift {
        alphabet: Vec<String>,
        dim: u8,
    },
    Sft {
        alphabet: Vec<String>,
        dim: u8,
        forbidden: Vec<PatternJson>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialJson {
    #[default]
    Zero,
    BetaSite {
        beta: f64,
    },
    Table {
        window: Vec<Vec<i64>>,
        entries: Vec<TableEntryJson>,
    },
    GeometricPair {
        depth: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryJson {
    pub word: Vec<String>,
    pub value: f64,
}

/// A pattern as parallel site/value lists, sites in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternJson {
    pub sites: Vec<Vec<i64>>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseJson {
    pub id: String,
    pub v: PatternJson,
    pub w: PatternJson,
    pub audits: Vec<String>,
    /// Potential window H for the locally constant corollary audit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<Vec<i64>>>,
    #[serde(default = "default_window_u32")]
    pub max_n: u32,
}

fn default_window_u32() -> u32 {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StirlingJson {
    pub a: String,
    pub b: String,
    pub d: String,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    11
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileJson {
    /// Side of the box window to tile and partition.
    pub box_side: i64,
    /// Block side of the exact tiling.
    pub block: i64,
    /// Almost-partition defect bound, e.g. "1/8".
    pub epsilon: String,
    /// The shape whose translates form the partition parts.
    pub shape: Vec<Vec<i64>>,
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum SpecError {
    Io(std::io::Error),
    /// JSON syntax/shape problem, with serde's line/column diagnostics.
    Parse(String),
    /// Schema-level rejection with the offending field.
    Validation(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Io(e) => write!(f, "spec file unreadable: {e}"),
            SpecError::Parse(msg) => write!(f, "spec parse error: {msg}"),
            SpecError::Validation(msg) => write!(f, "spec validation error: {msg}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<std::io::Error> for SpecError {
    fn from(e: std::io::Error) -> Self {
        SpecError::Io(e)
    }
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Validation(msg.into())
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

/// Which audit a case requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditKind {
    Theorem1,
    Corollary,
    Mme,
    Lrn,
    Conformal,
    Obs,
}

impl AuditKind {
    pub fn name(self) -> &'static str {
        match self {
            AuditKind::Theorem1 => "theorem1",
            AuditKind::Corollary => "corollary",
            AuditKind::Mme => "mme",
            AuditKind::Lrn => "lrn",
            AuditKind::Conformal => "conformal",
            AuditKind::Obs => "obs",
        }
    }

    fn parse(s: &str) -> Result<Self, SpecError> {
        match s {
            "theorem1" => Ok(AuditKind::Theorem1),
            "corollary" => Ok(AuditKind::Corollary),
            "mme" => Ok(AuditKind::Mme),
            "lrn" => Ok(AuditKind::Lrn),
            "conformal" => Ok(AuditKind::Conformal),
            "obs" => Ok(AuditKind::Obs),
            other => Err(invalid(format!("unknown audit kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedCase {
    pub id: String,
    pub v: Pattern,
    pub w: Pattern,
    pub audits: Vec<AuditKind>,
    pub window: Option<Shape>,
    pub max_n: u32,
}

/// A validated spec with everything converted to core types.
#[derive(Debug, Clone)]
pub struct ResolvedSpec {
    pub raw: ToolSpec,
    pub subshift: SubshiftSpec,
    pub potential: Potential,
    /// Cases sorted by id; report rows follow this order.
    pub cases: Vec<ResolvedCase>,
    pub stirling: Option<(Ratio<i64>, Ratio<i64>, Ratio<i64>, usize)>,
    pub tile: Option<(i64, i64, Ratio<i64>, Shape)>,
}

impl ResolvedSpec {
    /// The effective scale cap: environment override, then spec value,
    /// then the library default.
    pub fn scale_cap(&self) -> Result<usize, SpecError> {
        if let Ok(raw) = std::env::var(SCALE_CAP_ENV) {
            let cap: usize = raw
                .parse()
                .map_err(|_| invalid(format!("{SCALE_CAP_ENV} must be a positive integer")))?;
            if cap == 0 {
                return Err(invalid(format!("{SCALE_CAP_ENV} must be positive")));
            }
            return Ok(cap);
        }
        Ok(self
            .raw
            .scale_cap
            .unwrap_or(subshift_core::subshift::DEFAULT_SCALE_CAP))
    }
}

fn parse_dim(d: u8) -> Result<Dim, SpecError> {
    match d {
        1 => Ok(Dim::One),
        2 => Ok(Dim::Two),
        other => Err(invalid(format!("dim must be 1 or 2, got {other}"))),
    }
}

fn parse_site(dim: Dim, coords: &[i64]) -> Result<Site, SpecError> {
    match (dim, coords) {
        (Dim::One, [x]) => Ok(Site::z(*x)),
        (Dim::Two, [x, y]) => Ok(Site::z2(*x, *y)),
        _ => Err(invalid(format!(
            "site {coords:?} does not match dimension {}",
            match dim {
                Dim::One => 1,
                Dim::Two => 2,
            }
        ))),
    }
}

pub fn parse_shape(dim: Dim, sites: &[Vec<i64>]) -> Result<Shape, SpecError> {
    let sites = sites
        .iter()
        .map(|c| parse_site(dim, c))
        .collect::<Result<Vec<_>, _>>()?;
    Shape::from_sites(dim, sites).map_err(|e| invalid(format!("bad shape: {e:?}")))
}

pub fn parse_pattern(
    dim: Dim,
    alphabet: &Alphabet,
    json: &PatternJson,
) -> Result<Pattern, SpecError> {
    if json.sites.len() != json.values.len() {
        return Err(invalid("pattern sites and values differ in length"));
    }
    let shape = parse_shape(dim, &json.sites)?;
    if shape.len() != json.sites.len() {
        return Err(invalid("pattern sites repeat"));
    }
    let mut values = BTreeMap::new();
    for (coords, token) in json.sites.iter().zip(&json.values) {
        let site = parse_site(dim, coords)?;
        let sym = alphabet
            .index_of(token)
            .ok_or_else(|| invalid(format!("symbol {token:?} not in the alphabet")))?;
        values.insert(site, sym);
    }
    Pattern::new(shape, values).map_err(|e| invalid(format!("bad pattern: {e}")))
}

/// Renders a pattern back to its JSON surface form (round-trips
/// through `parse_pattern` to an equal value).
pub fn pattern_to_json(p: &Pattern, alphabet: &Alphabet) -> PatternJson {
    let mut sites = Vec::new();
    let mut values = Vec::new();
    for s in p.shape().sorted_sites() {
        sites.push(match p.shape().dim() {
            Dim::One => vec![s.x],
            Dim::Two => vec![s.x, s.y],
        });
        values.push(alphabet.token(p.get(&s).expect("total")).to_string());
    }
    PatternJson { sites, values }
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, SpecError> {
    let mut parts = s.splitn(2, '/');
    let num: i64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad rational {s:?}")))?;
    let den: i64 = match parts.next() {
        None => 1,
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad rational {s:?}")))?,
    };
    if den == 0 {
        return Err(invalid(format!("zero denominator in {s:?}")));
    }
    Ok(Ratio::new(num, den))
}

fn resolve_subshift(json: &SubshiftJson) -> Result<SubshiftSpec, SpecError> {
    match json {
        SubshiftJson::GoldenMean => Ok(SubshiftSpec::golden_mean()),
        SubshiftJson::HardSquare => Ok(SubshiftSpec::hard_square()),
        SubshiftJson::SunnySideUp => Ok(SubshiftSpec::sunny_side_up()),
        SubshiftJson::FullShift { alphabet, dim } => {
            let dim = parse_dim(*dim)?;
            Ok(SubshiftSpec::full_shift(parse_alphabet(alphabet)?, dim))
        }
        SubshiftJson::Sft {
            alphabet,
            dim,
            forbidden,
        } => {
            let dim = parse_dim(*dim)?;
            let alphabet = parse_alphabet(alphabet)?;
            let forbidden = forbidden
                .iter()
                .map(|p| parse_pattern(dim, &alphabet, p))
                .collect::<Result<Vec<_>, _>>()?;
            if forbidden.iter().any(|p| p.shape().is_empty()) {
                return Err(invalid("forbidden patterns must have nonempty shapes"));
            }
            Ok(SubshiftSpec::Sft {
                alphabet,
                dim,
                forbidden,
            })
        }
    }
}

fn parse_alphabet(tokens: &[String]) -> Result<Alphabet, SpecError> {
    if tokens.is_empty() {
        return Err(invalid("alphabet must be nonempty"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in tokens {
        if !seen.insert(t) {
            return Err(invalid(format!("alphabet token {t:?} repeats")));
        }
    }
    Ok(Alphabet::new(tokens.iter().cloned()))
}

fn resolve_potential(
    json: &PotentialJson,
    subshift: &SubshiftSpec,
) -> Result<Potential, SpecError> {
    let dim = subshift.dim();
    let asize = subshift.alphabet().len();
    match json {
        PotentialJson::Zero => Ok(Potential::zero(dim, asize)),
        PotentialJson::BetaSite { beta } => {
            if asize != 2 {
                return Err(invalid("beta_site needs a binary alphabet"));
            }
            Ok(LocallyConstantPotential::beta_site(dim, *beta).into())
        }
        PotentialJson::Table { window, entries } => {
            let shape = parse_shape(dim, window)?;
            if shape.is_empty() {
                return Err(invalid("table potential needs a nonempty window"));
            }
            let alphabet = subshift.alphabet();
            let mut table: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
            for entry in entries {
                if entry.word.len() != shape.len() {
                    return Err(invalid(format!(
                        "table word {:?} does not fill the {}-site window",
                        entry.word,
                        shape.len()
                    )));
                }
                let word = entry
                    .word
                    .iter()
                    .map(|t| {
                        alphabet
                            .index_of(t)
                            .ok_or_else(|| invalid(format!("symbol {t:?} not in the alphabet")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if table.insert(word, entry.value).is_some() {
                    return Err(invalid(format!("table word {:?} repeats", entry.word)));
                }
            }
            Ok(
                LocallyConstantPotential::from_fn(shape, asize, |w: &[u8]| {
                    table.get(w).copied().unwrap_or(0.0)
                })
                .into(),
            )
        }
        PotentialJson::GeometricPair { depth } => {
            if dim != Dim::One || asize != 2 {
                return Err(invalid("geometric_pair needs the binary 1D setting"));
            }
            if !(1..=5).contains(depth) {
                return Err(invalid("geometric_pair depth must be in 1..=5"));
            }
            Ok(SvPotential::geometric_pair_potential(*depth).into())
        }
    }
}

/// Parses and validates a spec from its JSON text.
pub fn parse_spec(text: &str) -> Result<ResolvedSpec, SpecError> {
    let raw: ToolSpec = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    resolve(raw)
}

/// Reads, parses and validates a spec file.
pub fn load_spec(path: &std::path::Path) -> Result<ResolvedSpec, SpecError> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text)
}

fn resolve(raw: ToolSpec) -> Result<ResolvedSpec, SpecError> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(invalid(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    if raw.max_radius == 0 {
        return Err(invalid("max_radius must be positive"));
    }
    if raw.scale_cap == Some(0) {
        return Err(invalid("scale_cap must be positive"));
    }
    if raw.language_window < 1 || raw.pressure_window < 1 {
        return Err(invalid("window lengths must be positive"));
    }
    let subshift = resolve_subshift(&raw.subshift)?;
    let potential = resolve_potential(&raw.potential, &subshift)?;

    // degenerate-language probe at the origin
    let origin = Shape::from_sites(
        subshift.dim(),
        [match subshift.dim() {
            Dim::One => Site::z(0),
            Dim::Two => Site::z2(0, 0),
        }],
    )
    .expect("single site");
    let probe = subshift_core::subshift::language(&subshift, &origin)
        .map_err(|e| invalid(format!("language probe failed: {e}")))?;
    if probe.is_empty() {
        return Err(invalid("empty language at F={0}"));
    }

    let alphabet = subshift.alphabet();
    let dim = subshift.dim();
    let mut cases = Vec::new();
    let mut seen_ids = std::collections::BTreeSet::new();
    for case in &raw.cases {
        if !seen_ids.insert(case.id.clone()) {
            return Err(invalid(format!("case id {:?} repeats", case.id)));
        }
        let v = parse_pattern(dim, &alphabet, &case.v)
            .map_err(|e| invalid(format!("case {:?}: {e}", case.id)))?;
        let w = parse_pattern(dim, &alphabet, &case.w)
            .map_err(|e| invalid(format!("case {:?}: {e}", case.id)))?;
        if v.shape() != w.shape() {
            return Err(invalid(format!(
                "case {:?}: v and w must share a shape",
                case.id
            )));
        }
        for (name, p) in [("v", &v), ("w", &w)] {
            let legal = is_legal_pattern(&subshift, p)
                .map_err(|e| invalid(format!("case {:?}: {e}", case.id)))?;
            if !legal {
                return Err(invalid(format!(
                    "case {:?}: pattern {name} is not in the language",
                    case.id
                )));
            }
        }
        let audits = case
            .audits
            .iter()
            .map(|s| AuditKind::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        if audits.is_empty() {
            return Err(invalid(format!("case {:?} requests no audits", case.id)));
        }
        let window = case
            .window
            .as_ref()
            .map(|sites| parse_shape(dim, sites))
            .transpose()?;
        if case.max_n == 0 {
            return Err(invalid(format!("case {:?}: max_n must be positive", case.id)));
        }
        cases.push(ResolvedCase {
            id: case.id.clone(),
            v,
            w,
            audits,
            window,
            max_n: case.max_n,
        });
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));

    let stirling = raw
        .stirling
        .as_ref()
        .map(|s| -> Result<_, SpecError> {
            if s.grid < 2 {
                return Err(invalid("stirling grid must be at least 2"));
            }
            Ok((parse_ratio(&s.a)?, parse_ratio(&s.b)?, parse_ratio(&s.d)?, s.grid))
        })
        .transpose()?;

    let tile = raw
        .tile
        .as_ref()
        .map(|t| -> Result<_, SpecError> {
            if t.box_side < 1 || t.block < 1 {
                return Err(invalid("tile sides must be positive"));
            }
            let shape = parse_shape(dim, &t.shape)?;
            if shape.is_empty() {
                return Err(invalid("tile shape must be nonempty"));
            }
            Ok((t.box_side, t.block, parse_ratio(&t.epsilon)?, shape))
        })
        .transpose()?;

    Ok(ResolvedSpec {
        raw,
        subshift,
        potential,
        cases,
        stirling,
        tile,
    })
}
