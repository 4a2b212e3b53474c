//! Lattice geometry for `Z^d`, `d` in {1, 2}.
//!
//! Shapes are finite sets of lattice sites. The group operation is
//! written additively; translates, interiors/boundaries, invariance
//! ratios, Folner boxes, exact box tilings and sparse almost-partitions
//! all live here.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use num_rational::Ratio;

/// Lattice dimension. Only `Z` and `Z^2` are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn rank(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

/// A group element of `Z^d`: a 1- or 2-tuple of integers.
///
/// For `Dim::One` the `y` coordinate is fixed to zero. Ordering is
/// row-major (`y` then `x`), which gives the deterministic site order
/// used throughout for reports and pattern words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub dim: Dim,
    pub x: i64,
    pub y: i64,
}

impl Site {
    /// A site of `Z`.
    pub fn z(x: i64) -> Self {
        Site { dim: Dim::One, x, y: 0 }
    }

    /// A site of `Z^2`.
    pub fn z2(x: i64, y: i64) -> Self {
        Site { dim: Dim::Two, x, y }
    }

    /// The identity of the group of the given dimension.
    pub fn zero(dim: Dim) -> Self {
        Site { dim, x: 0, y: 0 }
    }

    /// Component-wise sum; `None` on dimension mismatch.
    pub fn checked_add(self, other: Site) -> Option<Site> {
        if self.dim != other.dim {
            return None;
        }
        Some(Site { dim: self.dim, x: self.x + other.x, y: self.y + other.y })
    }

    /// Component-wise negation (the group inverse).
    pub fn neg(self) -> Site {
        Site { dim: self.dim, x: -self.x, y: -self.y }
    }
}

impl PartialOrd for Site {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Site {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.dim, self.y, self.x).cmp(&(other.dim, other.y, other.x))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            Dim::One => write!(f, "{}", self.x),
            Dim::Two => write!(f, "({},{})", self.x, self.y),
        }
    }
}

/// Errors from lattice-geometry operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    DimensionMismatch,
    EmptyShape,
    /// The window handed to a tiling/partition routine is not a box.
    NonBoxWindow,
    /// Box sides are not multiples of the requested block size.
    NonDivisibleSides,
    /// The window is too small for the requested coverage.
    WindowTooSmall,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DimensionMismatch => write!(f, "dimension mismatch"),
            GeometryError::EmptyShape => write!(f, "empty shape"),
            GeometryError::NonBoxWindow => write!(f, "window is not a box"),
            GeometryError::NonDivisibleSides => {
                write!(f, "box sides are not multiples of the block size")
            }
            GeometryError::WindowTooSmall => write!(f, "window too small; increase window"),
        }
    }
}

/// A finite subset of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    dim: Dim,
    sites: BTreeSet<Site>,
}

impl Shape {
    /// An empty shape of the given dimension.
    pub fn empty(dim: Dim) -> Self {
        Shape { dim, sites: BTreeSet::new() }
    }

    /// Builds a shape from sites; all sites must share `dim`.
    pub fn from_sites<I: IntoIterator<Item = Site>>(
        dim: Dim,
        iter: I,
    ) -> Result<Self, GeometryError> {
        let mut sites = BTreeSet::new();
        for s in iter {
            if s.dim != dim {
                return Err(GeometryError::DimensionMismatch);
            }
            sites.insert(s);
        }
        Ok(Shape { dim, sites })
    }

    /// The 1D interval `[lo, hi)`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Shape {
            dim: Dim::One,
            sites: (lo..hi).map(Site::z).collect(),
        }
    }

    /// The 2D box `[x0, x1) x [y0, y1)`.
    pub fn rect(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let mut sites = BTreeSet::new();
        for y in y0..y1 {
            for x in x0..x1 {
                sites.insert(Site::z2(x, y));
            }
        }
        Shape { dim: Dim::Two, sites }
    }

    /// The singleton `{0}` of the given dimension.
    pub fn origin(dim: Dim) -> Self {
        let mut sites = BTreeSet::new();
        sites.insert(Site::zero(dim));
        Shape { dim, sites }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.contains(s)
    }

    /// Sites in deterministic (row-major) order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.sites.iter().copied()
    }

    pub fn sorted_sites(&self) -> Vec<Site> {
        self.sites.iter().copied().collect()
    }

    pub fn is_subset(&self, other: &Shape) -> bool {
        self.sites.is_subset(&other.sites)
    }

    pub fn union(&self, other: &Shape) -> Result<Shape, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch);
        }
        Ok(Shape {
            dim: self.dim,
            sites: self.sites.union(&other.sites).copied().collect(),
        })
    }

    pub fn difference(&self, other: &Shape) -> Shape {
        Shape {
            dim: self.dim,
            sites: self.sites.difference(&other.sites).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Shape) -> Shape {
        Shape {
            dim: self.dim,
            sites: self.sites.intersection(&other.sites).copied().collect(),
        }
    }

    /// Component-wise negation of every site, `-S`.
    pub fn inverse(&self) -> Shape {
        Shape {
            dim: self.dim,
            sites: self.sites.iter().map(|s| s.neg()).collect(),
        }
    }

    /// `S ∪ (-S)`, the symmetrization used for `H^±`.
    pub fn symmetrize(&self) -> Shape {
        let mut sites = self.sites.clone();
        sites.extend(self.sites.iter().map(|s| s.neg()));
        Shape { dim: self.dim, sites }
    }

    /// Minkowski sum `{ s + t : s in S, t in T }`.
    pub fn minkowski_sum(&self, other: &Shape) -> Result<Shape, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch);
        }
        let mut sites = BTreeSet::new();
        for s in &self.sites {
            for t in &other.sites {
                sites.insert(s.checked_add(*t).expect("dims checked"));
            }
        }
        Ok(Shape { dim: self.dim, sites })
    }

    /// Per-axis `(min, max)` bounds; `None` for the empty shape.
    pub fn bounds(&self) -> Option<(Site, Site)> {
        let first = *self.sites.iter().next()?;
        let mut lo = first;
        let mut hi = first;
        for s in &self.sites {
            lo.x = lo.x.min(s.x);
            lo.y = lo.y.min(s.y);
            hi.x = hi.x.max(s.x);
            hi.y = hi.y.max(s.y);
        }
        Some((lo, hi))
    }

    /// Smallest box (interval / rectangle) containing the shape.
    pub fn hull_box(&self) -> Shape {
        match self.bounds() {
            None => Shape::empty(self.dim),
            Some((lo, hi)) => match self.dim {
                Dim::One => Shape::interval(lo.x, hi.x + 1),
                Dim::Two => Shape::rect(lo.x, hi.x + 1, lo.y, hi.y + 1),
            },
        }
    }

    /// Max axis extent (`max - min + 1` over occupied axes); 0 if empty.
    pub fn max_span(&self) -> i64 {
        match self.bounds() {
            None => 0,
            Some((lo, hi)) => match self.dim {
                Dim::One => hi.x - lo.x + 1,
                Dim::Two => (hi.x - lo.x + 1).max(hi.y - lo.y + 1),
            },
        }
    }

    /// Whether the shape is exactly a full box; returns its bounds.
    pub fn as_box(&self) -> Option<(Site, Site)> {
        let (lo, hi) = self.bounds()?;
        let volume = ((hi.x - lo.x + 1) as u128)
            * if self.dim == Dim::Two { (hi.y - lo.y + 1) as u128 } else { 1 };
        if volume == self.sites.len() as u128 {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Shape dilated by the centered box of radius `r` (Minkowski sum
    /// with `[-r, r]^d`).
    pub fn dilate(&self, r: i64) -> Shape {
        let ball = match self.dim {
            Dim::One => Shape::interval(-r, r + 1),
            Dim::Two => Shape::rect(-r, r + 1, -r, r + 1),
        };
        self.minkowski_sum(&ball).expect("same dim")
    }
}

/// Left translate `g + S`.
pub fn translate_left(shape: &Shape, g: Site) -> Result<Shape, GeometryError> {
    if shape.dim != g.dim {
        return Err(GeometryError::DimensionMismatch);
    }
    Ok(Shape {
        dim: shape.dim,
        sites: shape.sites.iter().map(|s| s.checked_add(g).expect("dims checked")).collect(),
    })
}

/// Right translate `S + g`. In `Z^d` this coincides with the left
/// translate; both entry points exist so call sites can state which
/// side of a (generally non-abelian) identity they realize.
pub fn translate_right(shape: &Shape, g: Site) -> Result<Shape, GeometryError> {
    translate_left(shape, g)
}

/// Whether `S` is left `F`-sparse: the translates `s + F` over `s in S`
/// are pairwise disjoint.
pub fn is_left_sparse<'a, I>(sites: I, f: &Shape) -> bool
where
    I: IntoIterator<Item = &'a Site>,
{
    // s + F and s' + F intersect iff s - s' lies in F - F.
    let diffs: BTreeSet<Site> = f
        .sites()
        .flat_map(|a| f.sites().map(move |b| a.checked_add(b.neg()).expect("same dim")))
        .collect();
    let sites: Vec<Site> = sites.into_iter().copied().collect();
    for (i, s) in sites.iter().enumerate() {
        for s2 in &sites[i + 1..] {
            if s.dim != s2.dim || s.dim != f.dim() {
                return false;
            }
            let d = s.checked_add(s2.neg()).expect("same dim");
            if diffs.contains(&d) {
                return false;
            }
        }
    }
    true
}

/// Right `H`-interior of `F`: `{ f in F : for all h in H, f + h in F }`.
pub fn right_interior(f: &Shape, h: &Shape) -> Shape {
    let sites = f
        .sites()
        .filter(|s| {
            h.sites()
                .all(|hh| f.contains(&s.checked_add(hh).expect("same dim")))
        })
        .collect();
    Shape { dim: f.dim, sites }
}

/// Right `H`-boundary of `F`: `F \ Int_H(F)`.
pub fn right_boundary(f: &Shape, h: &Shape) -> Shape {
    f.difference(&right_interior(f, h))
}

/// `|(T + K) Δ T| / |T|`; `T` is right `(K, ε)`-invariant iff this is
/// below `ε`.
pub fn invariance_ratio(t: &Shape, k: &Shape) -> Result<Ratio<i64>, GeometryError> {
    if t.is_empty() {
        return Err(GeometryError::EmptyShape);
    }
    let tk = t.minkowski_sum(k)?;
    let sym = tk.difference(t).len() + t.difference(&tk).len();
    Ok(Ratio::new(sym as i64, t.len() as i64))
}

/// The Folner box `[0, n)^d`.
pub fn folner_box(n: i64, dim: Dim) -> Shape {
    debug_assert!(n >= 1);
    match dim {
        Dim::One => Shape::interval(0, n),
        Dim::Two => Shape::rect(0, n, 0, n),
    }
}

/// An exact tiling of a box window by congruent box translates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxTiling {
    /// The tile `[0, block)^d`.
    pub shape: Shape,
    /// Translation centers; the translates `shape + c` partition the
    /// window exactly.
    pub centers: BTreeSet<Site>,
}

/// Tiles a box window exactly by `[0, block)^d` translates.
pub fn box_tiling(window: &Shape, block: i64) -> Result<BoxTiling, GeometryError> {
    if block < 1 {
        return Err(GeometryError::NonDivisibleSides);
    }
    let (lo, hi) = window.as_box().ok_or(GeometryError::NonBoxWindow)?;
    let wx = hi.x - lo.x + 1;
    let wy = hi.y - lo.y + 1;
    if wx % block != 0 || (window.dim() == Dim::Two && wy % block != 0) {
        return Err(GeometryError::NonDivisibleSides);
    }
    let shape = match window.dim() {
        Dim::One => Shape::interval(0, block),
        Dim::Two => Shape::rect(0, block, 0, block),
    };
    let mut centers = BTreeSet::new();
    match window.dim() {
        Dim::One => {
            for i in 0..wx / block {
                centers.insert(Site::z(lo.x + i * block));
            }
        }
        Dim::Two => {
            for j in 0..wy / block {
                for i in 0..wx / block {
                    centers.insert(Site::z2(lo.x + i * block, lo.y + j * block));
                }
            }
        }
    }
    Ok(BoxTiling { shape, centers })
}

/// A finite family of pairwise disjoint, left `F`-sparse parts whose
/// union covers at least `(1 - ε)` of the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostPartition {
    pub parts: Vec<BTreeSet<Site>>,
    pub window: Shape,
    pub epsilon: Ratio<i64>,
    /// Block size of the residue-class construction.
    pub block: i64,
}

impl AlmostPartition {
    /// Fraction of the window covered by the union of parts.
    pub fn coverage(&self) -> Ratio<i64> {
        let covered: usize = self.parts.iter().map(|p| p.len()).sum();
        Ratio::new(covered as i64, self.window.len() as i64)
    }
}

/// Builds an almost-partition of the window into residue-class
/// progressions modulo a block at least as large as the extent of `F`,
/// so that every part is left `F`-sparse. In `Z^d` the residue classes
/// cover the window completely, so coverage is 1 for any `ε`.
pub fn almost_partition(
    f: &Shape,
    epsilon: Ratio<i64>,
    window: &Shape,
) -> Result<AlmostPartition, GeometryError> {
    if window.is_empty() {
        return Err(GeometryError::WindowTooSmall);
    }
    if window.as_box().is_none() {
        return Err(GeometryError::NonBoxWindow);
    }
    if f.dim() != window.dim() {
        return Err(GeometryError::DimensionMismatch);
    }
    let block = f.max_span().max(1);
    let mut parts: Vec<BTreeSet<Site>> = Vec::new();
    match window.dim() {
        Dim::One => {
            for r in 0..block {
                let part: BTreeSet<Site> =
                    window.sites().filter(|s| s.x.rem_euclid(block) == r).collect();
                if !part.is_empty() {
                    parts.push(part);
                }
            }
        }
        Dim::Two => {
            for ry in 0..block {
                for rx in 0..block {
                    let part: BTreeSet<Site> = window
                        .sites()
                        .filter(|s| s.x.rem_euclid(block) == rx && s.y.rem_euclid(block) == ry)
                        .collect();
                    if !part.is_empty() {
                        parts.push(part);
                    }
                }
            }
        }
    }
    let ap = AlmostPartition { parts, window: window.clone(), epsilon, block };
    if ap.coverage() < Ratio::new(1, 1) - epsilon {
        return Err(GeometryError::WindowTooSmall);
    }
    Ok(ap)
}
