//! Potentials: locally constant and summable-variation, with Birkhoff
//! sums, variations, the summable-variation norm and the homoclinic
//! cocycle carrying rigorous truncation error.
//!
//! All real arithmetic is double precision. Locally constant paths are
//! exact up to rounding; summable-variation paths return explicit
//! brackets so inequality audits know which side rounding can err on.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::group::{translate_left, Dim, Shape, Site};
use crate::subshift::{language, Pattern, PointApprox, SubshiftError, SubshiftSpec};

/// Errors from potential operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PotentialError {
    /// The two points differ on an infinite set (different backgrounds).
    NonHomoclinic,
    /// Requested approximant depth beyond the available sequence.
    DepthExceeded,
    /// A table lookup on a word the table does not cover.
    TableIncomplete,
    Subshift(SubshiftError),
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::NonHomoclinic => write!(f, "points are not homoclinic"),
            PotentialError::DepthExceeded => write!(f, "approximant depth exceeded"),
            PotentialError::TableIncomplete => write!(f, "potential table lookup failed"),
            PotentialError::Subshift(e) => write!(f, "{e}"),
        }
    }
}

impl From<SubshiftError> for PotentialError {
    fn from(e: SubshiftError) -> Self {
        PotentialError::Subshift(e)
    }
}

/// A potential that depends only on coordinates in a finite window `H`
/// containing the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential {
    window: Shape,
    alphabet_size: usize,
    table: BTreeMap<Vec<u8>, f64>,
}

impl LocallyConstantPotential {
    /// Builds the full table by evaluating `f` on every word over the
    /// window (site order is the window's deterministic order).
    pub fn from_fn<F: Fn(&[u8]) -> f64>(window: Shape, alphabet_size: usize, f: F) -> Self {
        assert!(
            window.contains(&Site::zero(window.dim())),
            "dependence window must contain the identity"
        );
        let n = window.len();
        let mut table = BTreeMap::new();
        let mut word = vec![0u8; n];
        loop {
            table.insert(word.clone(), f(&word));
            let mut carried = false;
            for a in word.iter_mut().rev() {
                if (*a as usize) + 1 < alphabet_size {
                    *a += 1;
                    carried = true;
                    break;
                }
                *a = 0;
            }
            if !carried {
                break;
            }
        }
        LocallyConstantPotential { window, alphabet_size, table }
    }

    /// The zero potential with a single-site window.
    pub fn zero(dim: Dim, alphabet_size: usize) -> Self {
        LocallyConstantPotential::from_fn(Shape::origin(dim), alphabet_size, |_| 0.0)
    }

    /// `phi(x) = values[x_0]`.
    pub fn single_site(dim: Dim, values: &[f64]) -> Self {
        let values = values.to_vec();
        LocallyConstantPotential::from_fn(Shape::origin(dim), values.len(), move |w| {
            values[w[0] as usize]
        })
    }

    /// `phi(x) = beta * x_0` on the binary alphabet.
    pub fn beta_site(dim: Dim, beta: f64) -> Self {
        LocallyConstantPotential::single_site(dim, &[0.0, beta])
    }

    /// `phi(x) = 1` if `x_0 = x_1` else 0, on a 1D binary shift.
    pub fn pair_equal_indicator() -> Self {
        LocallyConstantPotential::from_fn(Shape::interval(0, 2), 2, |w| {
            if w[0] == w[1] {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn window(&self) -> &Shape {
        &self.window
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn table(&self) -> &BTreeMap<Vec<u8>, f64> {
        &self.table
    }

    /// Value on a word over the window.
    pub fn eval_word(&self, word: &[u8]) -> Result<f64, PotentialError> {
        self.table
            .get(word)
            .copied()
            .ok_or(PotentialError::TableIncomplete)
    }

    /// Value of `phi(sigma_g x)`, reading `x` on the translated window.
    pub fn eval_at(&self, x: &PointApprox, g: Site) -> Result<f64, PotentialError> {
        let word: Vec<u8> = self
            .window
            .sites()
            .map(|h| x.value_at(h.checked_add(g).expect("same dim")))
            .collect();
        self.eval_word(&word)
    }

    /// Value of `phi(sigma_g .)` read from a finite pattern that covers
    /// the translated window.
    pub fn eval_in_pattern(&self, u: &Pattern, g: Site) -> Result<f64, PotentialError> {
        let mut word = Vec::with_capacity(self.window.len());
        for h in self.window.sites() {
            let s = h.checked_add(g).expect("same dim");
            match u.get(&s) {
                Some(v) => word.push(v),
                None => return Err(PotentialError::TableIncomplete),
            }
        }
        self.eval_word(&word)
    }

    /// Sup-norm over the table.
    pub fn sup_norm(&self) -> f64 {
        self.table.values().fold(0.0, |m, v| m.max(libm::fabs(*v)))
    }

    /// The potential `phi + c`.
    pub fn plus_const(&self, c: f64) -> Self {
        let table = self.table.iter().map(|(k, v)| (k.clone(), v + c)).collect();
        LocallyConstantPotential {
            window: self.window.clone(),
            alphabet_size: self.alphabet_size,
            table,
        }
    }

    /// The potential `phi ∘ sigma_g`, whose window is `g + H`.
    pub fn shifted(&self, g: Site) -> Self {
        let window = translate_left(&self.window, g).expect("same dim");
        LocallyConstantPotential {
            window,
            alphabet_size: self.alphabet_size,
            table: self.table.clone(),
        }
    }
}

/// A potential of summable variation, presented constructively: an
/// increasing exhaustive sequence of symmetric windows, locally
/// constant approximants on each window (cylinder suprema), certified
/// variation bounds and a computable tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SvPotential {
    windows: Vec<Shape>,
    approximants: Vec<LocallyConstantPotential>,
    /// `Var_{E_n}(phi) <= var_bounds[n]` (0-indexed over the sequence).
    var_bounds: Vec<f64>,
    /// Upper bound on `sum_{k>=n} |E_{k+1} \ E_k| * var_bounds[k]`.
    tail_bounds: Vec<f64>,
}

impl SvPotential {
    pub fn new(
        windows: Vec<Shape>,
        approximants: Vec<LocallyConstantPotential>,
        var_bounds: Vec<f64>,
        tail_bounds: Vec<f64>,
    ) -> Self {
        assert_eq!(windows.len(), approximants.len());
        assert_eq!(windows.len(), var_bounds.len());
        assert_eq!(windows.len(), tail_bounds.len());
        for i in 1..windows.len() {
            assert!(windows[i - 1].is_subset(&windows[i]), "windows must increase");
        }
        SvPotential { windows, approximants, var_bounds, tail_bounds }
    }

    pub fn depth(&self) -> usize {
        self.windows.len()
    }

    pub fn window(&self, n: usize) -> Result<&Shape, PotentialError> {
        self.windows.get(n - 1).ok_or(PotentialError::DepthExceeded)
    }

    /// The locally constant approximant on `E_n` (1-indexed).
    pub fn approximant(&self, n: usize) -> Result<&LocallyConstantPotential, PotentialError> {
        self.approximants.get(n - 1).ok_or(PotentialError::DepthExceeded)
    }

    pub fn var_bound(&self, n: usize) -> Result<f64, PotentialError> {
        self.var_bounds.get(n - 1).copied().ok_or(PotentialError::DepthExceeded)
    }

    /// Upper bound on the sup distance `|phi_n - phi|`.
    pub fn sup_error(&self, n: usize) -> Result<f64, PotentialError> {
        // phi_n is a cylinder supremum over E_n, so the pointwise gap
        // is at most the E_n-variation
        self.var_bound(n)
    }

    /// Upper bound on the summable-variation norm of `phi_n - phi`.
    ///
    /// Splits the norm sum at `n`: below it each variation is bounded
    /// by the triangle inequality through the sup gap, above it the
    /// approximant is constant on cylinders so only `phi` contributes,
    /// and the remainder is covered by the certified tail.
    pub fn approx_error_sv(&self, n: usize) -> Result<f64, PotentialError> {
        let vn = self.var_bound(n)?;
        let e1 = self.windows[0].len() as f64;
        let mut total = 2.0 * e1 * vn;
        for k in 1..n {
            let grow =
                self.windows[k].inverse().difference(&self.windows[k - 1].inverse()).len() as f64;
            total += grow * 2.0 * (self.var_bounds[k - 1] + vn);
        }
        total += self.tail_bounds[n - 1];
        Ok(total)
    }

    /// Bracket for the sup-norm of `phi`, read off the first
    /// approximant's table.
    pub fn sup_norm_bracket(&self) -> (f64, f64) {
        let m = self.approximants[0].sup_norm();
        let v = self.var_bounds[0];
        ((m - v).max(0.0), m + v)
    }

    /// The shipped summable-variation test potential
    /// `phi(x) = sum_{k>=1} 4^{-k} x_k x_{-k}` on the binary 1D full
    /// shift, with `E_n = [-n, n]`.
    pub fn geometric_pair_potential(depth: usize) -> Self {
        assert!((1..=5).contains(&depth));
        let mut windows = Vec::new();
        let mut approximants = Vec::new();
        let mut var_bounds = Vec::new();
        let mut tail_bounds = Vec::new();
        for n in 1..=depth {
            let window = Shape::interval(-(n as i64), n as i64 + 1);
            let sites = window.sorted_sites();
            let nn = n;
            let approx = LocallyConstantPotential::from_fn(window.clone(), 2, move |w| {
                let at = |x: i64| -> f64 {
                    let idx = sites.iter().position(|s| s.x == x).expect("in window");
                    w[idx] as f64
                };
                let mut v = 0.0;
                for k in 1..=nn as i64 {
                    v += libm::pow(4.0, -(k as f64)) * at(k) * at(-k);
                }
                // cylinder supremum of the undetermined tail
                v + libm::pow(4.0, -(nn as f64)) / 3.0
            });
            windows.push(window);
            approximants.push(approx);
            // Var_{E_n} <= sum_{k>n} 4^{-k} = 4^{-n}/3
            var_bounds.push(libm::pow(4.0, -(n as f64)) / 3.0);
            // sum_{k>=n} |E_{k+1}\E_k| * var_bounds[k] = sum 2*4^{-k}/3
            tail_bounds.push(2.0 / 3.0 * libm::pow(4.0, -(n as f64)) * (4.0 / 3.0));
        }
        SvPotential::new(windows, approximants, var_bounds, tail_bounds)
    }
}

/// Either flavor of potential accepted by the generic operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    LocallyConstant(LocallyConstantPotential),
    SummableVariation(SvPotential),
}

impl Potential {
    pub fn zero(dim: Dim, alphabet_size: usize) -> Self {
        Potential::LocallyConstant(LocallyConstantPotential::zero(dim, alphabet_size))
    }

    /// The working locally constant representative: the potential
    /// itself, or the deepest approximant.
    pub fn working(&self) -> &LocallyConstantPotential {
        match self {
            Potential::LocallyConstant(p) => p,
            Potential::SummableVariation(p) => {
                p.approximants.last().expect("nonempty sequence")
            }
        }
    }

    /// Pointwise error bound of the working representative.
    pub fn working_sup_error(&self) -> f64 {
        match self {
            Potential::LocallyConstant(_) => 0.0,
            Potential::SummableVariation(p) => p.sup_error(p.depth()).expect("depth valid"),
        }
    }

    /// Summable-variation-norm error bound of the working
    /// representative.
    pub fn working_sv_error(&self) -> f64 {
        match self {
            Potential::LocallyConstant(_) => 0.0,
            Potential::SummableVariation(p) => {
                p.approx_error_sv(p.depth()).expect("depth valid")
            }
        }
    }
}

/// A real value with a rigorous two-sided error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleValue {
    pub value: f64,
    pub error_bound: f64,
}

impl CocycleValue {
    pub fn exact(value: f64) -> Self {
        CocycleValue { value, error_bound: 0.0 }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }
}

/// The `F`-variation of a locally constant potential over a subshift:
/// the largest value gap between legal configurations agreeing on `F`.
pub fn variation(
    phi: &LocallyConstantPotential,
    f: &Shape,
    x: &SubshiftSpec,
) -> Result<f64, PotentialError> {
    if phi.window().is_subset(f) {
        return Ok(0.0);
    }
    let domain = f.union(phi.window()).map_err(|_| PotentialError::TableIncomplete)?;
    let lang = language(x, &domain)?;
    // group by restriction to F, track min/max of phi per class
    let mut classes: BTreeMap<Vec<u8>, (f64, f64)> = BTreeMap::new();
    for u in &lang {
        let key = u.restrict(f).expect("subset").word();
        let val = phi.eval_in_pattern(u, Site::zero(f.dim()))?;
        let entry = classes.entry(key).or_insert((val, val));
        entry.0 = entry.0.min(val);
        entry.1 = entry.1.max(val);
    }
    Ok(classes
        .values()
        .fold(0.0f64, |m, &(lo, hi)| m.max(hi - lo)))
}

/// Bracket for the summable-variation norm
/// `2|E_1| ||phi||_inf + sum_n |E_{n+1}^{-1} \ E_n^{-1}| Var_{E_n}(phi)`
/// using `up_to` computed terms plus the certified tail.
pub fn sv_norm(phi: &SvPotential, up_to: usize) -> Result<(f64, f64), PotentialError> {
    if up_to == 0 || up_to > phi.depth() {
        return Err(PotentialError::DepthExceeded);
    }
    let (inf_lo, inf_hi) = phi.sup_norm_bracket();
    let e1 = phi.windows[0].len() as f64;
    let mut upper = 2.0 * e1 * inf_hi;
    for k in 0..up_to.saturating_sub(1) {
        let grow =
            phi.windows[k + 1].inverse().difference(&phi.windows[k].inverse()).len() as f64;
        upper += grow * phi.var_bounds[k];
    }
    upper += phi.tail_bounds[up_to - 1];
    let lower = 2.0 * e1 * inf_lo;
    Ok((lower, upper))
}

/// Exact summable-variation norm of a locally constant potential with
/// window inside `E_1`: all variations vanish, leaving `2|E_1| ||phi||_inf`.
pub fn sv_norm_locally_constant(phi: &LocallyConstantPotential, e1: &Shape) -> f64 {
    assert!(phi.window().is_subset(e1));
    2.0 * e1.len() as f64 * phi.sup_norm()
}

/// The Birkhoff sum `phi_F(x) = sum_{g in F} phi(sigma_g x)`.
pub fn birkhoff_sum(
    phi: &Potential,
    f: &Shape,
    x: &PointApprox,
) -> Result<CocycleValue, PotentialError> {
    let rep = phi.working();
    let mut total = 0.0;
    for g in f.sites() {
        total += rep.eval_at(x, g)?;
    }
    Ok(CocycleValue {
        value: total,
        error_bound: f.len() as f64 * phi.working_sup_error(),
    })
}

/// The finite shape on which two same-background points differ.
pub fn difference_shape(x: &PointApprox, y: &PointApprox) -> Result<Shape, PotentialError> {
    if x.background != y.background {
        // different constant symbols or different periodic data mean
        // the difference set may be infinite
        return Err(PotentialError::NonHomoclinic);
    }
    let union = x
        .core
        .shape()
        .union(y.core.shape())
        .map_err(|_| PotentialError::NonHomoclinic)?;
    let diff: Vec<Site> = union
        .sites()
        .filter(|&s| x.value_at(s) != y.value_at(s))
        .collect();
    Shape::from_sites(union.dim(), diff).map_err(|_| PotentialError::NonHomoclinic)
}

/// The homoclinic cocycle
/// `psi_phi(x, y) = sum_g [phi(sigma_g y) - phi(sigma_g x)]`.
///
/// Only finitely many terms are nonzero: those whose translated window
/// meets the difference shape.
pub fn cocycle(
    phi: &Potential,
    _x_space: &SubshiftSpec,
    x: &PointApprox,
    y: &PointApprox,
) -> Result<CocycleValue, PotentialError> {
    let diff = difference_shape(x, y)?;
    if diff.is_empty() {
        return Ok(CocycleValue::exact(0.0));
    }
    let rep = phi.working();
    let support = diff
        .minkowski_sum(&rep.window().inverse())
        .map_err(|_| PotentialError::NonHomoclinic)?;
    let mut total = 0.0;
    for g in support.sites() {
        total += rep.eval_at(y, g)? - rep.eval_at(x, g)?;
    }
    Ok(CocycleValue {
        value: total,
        error_bound: diff.len() as f64 * phi.working_sv_error(),
    })
}

/// Brackets `sup_{x in [v]} psi_phi(x, xi_{v,w}(x))` by enumerating
/// legal margin configurations around the swap window. Exact (upper =
/// lower) for locally constant potentials.
///
/// Assumes the swap is always legal on `[v]`, which holds whenever
/// `E(v) ⊆ E(w)` — callers must have that verdict in hand.
pub fn sup_cocycle_over_cylinder(
    phi: &Potential,
    x_space: &SubshiftSpec,
    v: &Pattern,
    w: &Pattern,
) -> Result<(f64, f64), PotentialError> {
    let rep = phi.working();
    let f = v.shape();
    let support = f
        .minkowski_sum(&rep.window().inverse())
        .map_err(|_| PotentialError::NonHomoclinic)?;
    let domain = support
        .minkowski_sum(rep.window())
        .map_err(|_| PotentialError::NonHomoclinic)?
        .union(f)
        .map_err(|_| PotentialError::NonHomoclinic)?;
    let lang = language(x_space, &domain)?;
    let mut best: Option<f64> = None;
    for u in &lang {
        if u.restrict(f).as_ref() != Ok(v) {
            continue;
        }
        let swapped = u.overwrite(w)?;
        let mut s = 0.0;
        for g in support.sites() {
            // the replaceability constant: original minus swapped
            s += rep.eval_in_pattern(u, g)? - rep.eval_in_pattern(&swapped, g)?;
        }
        best = Some(match best {
            None => s,
            Some(b) => b.max(s),
        });
    }
    let best = best.ok_or(PotentialError::Subshift(SubshiftError::EmptyLanguage))?;
    let err = f.len() as f64 * phi.working_sv_error();
    Ok((best + err, best - err))
}

impl From<LocallyConstantPotential> for Potential {
    fn from(p: LocallyConstantPotential) -> Self {
        Potential::LocallyConstant(p)
    }
}

impl From<SvPotential> for Potential {
    fn from(p: SvPotential) -> Self {
        Potential::SummableVariation(p)
    }
}
