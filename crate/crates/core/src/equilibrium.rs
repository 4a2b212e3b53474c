//! Pressure and equilibrium measures for 1D subshifts of finite type,
//! plus window-based pressure estimators that also cover 2D.
//!
//! The exact pipeline builds a weighted transition matrix over memory
//! words, extracts Perron eigendata by power iteration and turns them
//! into a stationary Markov measure. Finite-window partition sums, a
//! randomized variational scan and entropy sampling provide independent
//! cross-checks of the same pressure value.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::group::{Shape, Site};
use crate::potential::{
    birkhoff_sum, LocallyConstantPotential, Potential, PotentialError,
};
use crate::rng::{substream, uniform_f64, weighted_index};
use crate::subshift::{
    language, Automaton1D, Pattern, PointApprox, SubshiftError, SubshiftSpec,
};

/// Errors from pressure / measure computations.
#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumError {
    /// The operation needs a 1D SFT.
    Not1dSft,
    /// The measure kind does not support the requested shape.
    UnsupportedShape,
    /// The subshift has no points.
    EmptyLanguage,
    /// Power iteration failed to converge.
    NoConvergence,
    Subshift(SubshiftError),
    Potential(PotentialError),
}

impl fmt::Display for EquilibriumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquilibriumError::Not1dSft => write!(f, "operation needs a 1D SFT"),
            EquilibriumError::UnsupportedShape => {
                write!(f, "measure kind does not support this shape")
            }
            EquilibriumError::EmptyLanguage => write!(f, "empty language"),
            EquilibriumError::NoConvergence => write!(f, "power iteration did not converge"),
            EquilibriumError::Subshift(e) => write!(f, "{e}"),
            EquilibriumError::Potential(e) => write!(f, "{e}"),
        }
    }
}

impl From<SubshiftError> for EquilibriumError {
    fn from(e: SubshiftError) -> Self {
        EquilibriumError::Subshift(e)
    }
}

impl From<PotentialError> for EquilibriumError {
    fn from(e: PotentialError) -> Self {
        EquilibriumError::Potential(e)
    }
}

/// Weighted transition matrix over memory words of a 1D SFT.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    /// Word length of each state.
    pub state_len: usize,
    /// Allowed memory words (bi-infinitely extendable).
    pub states: Vec<Vec<u8>>,
    /// `matrix[s][t] = exp(phi(s . last(t)))` on allowed transitions, 0 otherwise.
    pub matrix: Vec<Vec<f64>>,
    /// Successor indices per state (the nonzero columns).
    pub successors: Vec<Vec<usize>>,
    alphabet_size: usize,
}

/// How a pressure value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureMethod {
    TransferExact,
    PartitionSum,
    VariationalLowerBound,
}

impl fmt::Display for PressureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PressureMethod::TransferExact => write!(f, "transfer-exact"),
            PressureMethod::PartitionSum => write!(f, "partition-sum"),
            PressureMethod::VariationalLowerBound => write!(f, "variational-lower-bound"),
        }
    }
}

/// A pressure value together with the window and method behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureEstimate {
    pub value: f64,
    pub window: Shape,
    pub method: PressureMethod,
}

/// The representable equilibrium / invariant measures.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind {
    /// Stationary Markov chain over memory words.
    Markov {
        state_len: usize,
        alphabet_size: usize,
        states: Vec<Vec<u8>>,
        pi: Vec<f64>,
        p: Vec<Vec<f64>>,
    },
    /// Point mass at a single (finitely described) point.
    PointMass(PointApprox),
    /// Product over independent coordinates of a product alphabet:
    /// symbol `a` decodes to digits via the component sizes.
    Product(Vec<EquilibriumMeasure>),
}

/// An invariant measure with its variational data.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumMeasure {
    pub kind: MeasureKind,
    pub pressure: f64,
    pub entropy: f64,
    pub integral: f64,
}

impl EquilibriumMeasure {
    pub fn point_mass(point: PointApprox, integral: f64) -> Self {
        EquilibriumMeasure {
            kind: MeasureKind::PointMass(point),
            pressure: integral,
            entropy: 0.0,
            integral,
        }
    }

    /// Consistency gap `|pressure - (entropy + integral)|`.
    pub fn variational_gap(&self) -> f64 {
        libm::fabs(self.pressure - (self.entropy + self.integral))
    }
}

/// Builds the weighted transition matrix for a 1D SFT and a locally
/// constant potential. The potential is rebased so its window starts
/// at 0; pressure and the equilibrium measure are unchanged by that.
pub fn build_transfer(
    x: &SubshiftSpec,
    phi: &LocallyConstantPotential,
) -> Result<(TransferOperator, LocallyConstantPotential), EquilibriumError> {
    if !x.is_sft_1d() {
        return Err(EquilibriumError::Not1dSft);
    }
    let (hlo, hhi) = phi
        .window()
        .bounds()
        .ok_or(EquilibriumError::UnsupportedShape)?;
    let rebased = phi.shifted(Site::z(-hlo.x));
    let span = (hhi.x - hlo.x + 1) as usize;
    let min_memory = span.saturating_sub(1).max(1);
    let aut = Automaton1D::build(x, min_memory)?;
    let k = aut.memory;
    let mut states = Vec::new();
    let mut old_to_new: Vec<Option<usize>> = vec![None; aut.states.len()];
    for (i, s) in aut.states.iter().enumerate() {
        if aut.left_inf[i] && aut.right_inf[i] {
            old_to_new[i] = Some(states.len());
            states.push(s.clone());
        }
    }
    if states.is_empty() {
        return Err(EquilibriumError::EmptyLanguage);
    }
    let n = states.len();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut successors = vec![Vec::new(); n];
    for (i, s) in aut.states.iter().enumerate() {
        let Some(si) = old_to_new[i] else { continue };
        for &(a, j) in &aut.successors[i] {
            let Some(sj) = old_to_new[j] else { continue };
            let mut word = s.clone();
            word.push(a);
            // phi reads coordinates [0, span) of the (k+1)-word
            let val = rebased.eval_word(&word[..span])?;
            matrix[si][sj] = libm::exp(val);
            successors[si].push(sj);
        }
    }
    Ok((
        TransferOperator {
            state_len: k,
            states,
            matrix,
            successors,
            alphabet_size: x.alphabet().len(),
        },
        rebased,
    ))
}

/// Power iteration for the dominant eigenpair of a nonnegative matrix,
/// run on `M + I` so periodic classes still converge. Returns
/// `(rho(M), right eigenvector)` normalized to unit l1 mass.
fn perron_right(matrix: &[Vec<f64>]) -> Result<(f64, Vec<f64>), EquilibriumError> {
    let n = matrix.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut acc = v[i]; // the +I term
            for j in 0..n {
                acc += matrix[i][j] * v[j];
            }
            w[i] = acc;
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(EquilibriumError::NoConvergence);
        }
        let next_lambda = total - 1.0; // subtract the +I shift (v has unit mass)
        let mut diff = 0.0f64;
        for i in 0..n {
            w[i] /= total;
            diff = diff.max(libm::fabs(w[i] - v[i]));
        }
        let llast = lambda;
        lambda = next_lambda;
        v = w;
        if diff < 1e-15 && libm::fabs(lambda - llast) < 1e-13 {
            return Ok((lambda, v));
        }
    }
    Err(EquilibriumError::NoConvergence)
}

fn transpose(matrix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = matrix.len();
    let mut t = vec![vec![0.0; n]; n];
    for (i, row) in matrix.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            t[j][i] = m;
        }
    }
    t
}

/// Strongly connected components (iterative Kosaraju), returned as a
/// component id per node.
fn scc_ids(successors: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = successors.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            if *idx < successors[node].len() {
                let next = successors[node][*idx];
                *idx += 1;
                if !seen[next] {
                    seen[next] = true;
                    stack.push((next, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, succ) in successors.iter().enumerate() {
        for &j in succ {
            preds[j].push(i);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(node) = stack.pop() {
            for &p in &preds[node] {
                if comp[p] == usize::MAX {
                    comp[p] = ncomp;
                    stack.push(p);
                }
            }
        }
        ncomp += 1;
    }
    (ncomp, comp)
}

/// Exact pressure and equilibrium Markov measure of a 1D SFT under a
/// locally constant potential. For reducible transition graphs the
/// measure comes from the pressure-maximizing recurrent class.
pub fn transfer_pressure(
    x: &SubshiftSpec,
    phi: &LocallyConstantPotential,
) -> Result<(PressureEstimate, EquilibriumMeasure), EquilibriumError> {
    let (op, rebased) = build_transfer(x, phi)?;
    let span = rebased.window().len();
    let (ncomp, comp) = scc_ids(&op.successors);
    // evaluate each class that carries at least one transition
    let mut best: Option<(f64, Vec<usize>)> = None;
    for c in 0..ncomp {
        let nodes: Vec<usize> = (0..op.states.len()).filter(|&i| comp[i] == c).collect();
        let has_edge = nodes
            .iter()
            .any(|&i| op.successors[i].iter().any(|&j| comp[j] == c));
        if !has_edge {
            continue;
        }
        let sub: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| op.matrix[i][j]).collect())
            .collect();
        let (lam, _) = perron_right(&sub)?;
        if lam <= 0.0 {
            continue;
        }
        let p = libm::log(lam);
        match &best {
            Some((b, _)) if *b >= p => {}
            _ => best = Some((p, nodes)),
        }
    }
    let (pressure, nodes) = best.ok_or(EquilibriumError::EmptyLanguage)?;
    let sub: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| op.matrix[i][j]).collect())
        .collect();
    let (lambda, r) = perron_right(&sub)?;
    let (_, l) = perron_right(&transpose(&sub))?;
    let n = nodes.len();
    // stationary distribution and transition matrix of the equilibrium
    let lr: f64 = (0..n).map(|i| l[i] * r[i]).sum();
    let pi: Vec<f64> = (0..n).map(|i| l[i] * r[i] / lr).collect();
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if sub[i][j] > 0.0 {
                p[i][j] = sub[i][j] * r[j] / (lambda * r[i]);
            }
        }
    }
    let states: Vec<Vec<u8>> = nodes.iter().map(|&i| op.states[i].clone()).collect();
    let mut entropy = 0.0;
    let mut integral = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p[i][j] > 0.0 {
                entropy -= pi[i] * p[i][j] * libm::log(p[i][j]);
                let mut word = states[i].clone();
                word.push(*states[j].last().expect("nonempty state"));
                integral += pi[i] * p[i][j] * rebased.eval_word(&word[..span])?;
            }
        }
    }
    let measure = EquilibriumMeasure {
        kind: MeasureKind::Markov {
            state_len: op.state_len,
            alphabet_size: op.alphabet_size,
            states,
            pi,
            p,
        },
        pressure,
        entropy,
        integral,
    };
    let estimate = PressureEstimate {
        value: pressure,
        window: Shape::interval(0, op.state_len as i64),
        method: PressureMethod::TransferExact,
    };
    Ok((estimate, measure))
}

/// Probability the measure gives to the cylinder of a pattern.
pub fn cylinder_measure(
    mu: &EquilibriumMeasure,
    w: &Pattern,
) -> Result<f64, EquilibriumError> {
    match &mu.kind {
        MeasureKind::PointMass(x) => {
            let restriction = x.restrict(w.shape());
            Ok(if restriction == *w { 1.0 } else { 0.0 })
        }
        MeasureKind::Markov { state_len, alphabet_size, states, pi, p } => {
            if w.shape().is_empty() {
                return Ok(1.0);
            }
            let Some((_, word)) = interval_word(w) else {
                // gapped 1D shape: sum over completions of the hull
                return gap_completion_measure(mu, w, *alphabet_size);
            };
            Ok(markov_word_measure(*state_len, states, pi, p, &word))
        }
        MeasureKind::Product(components) => {
            let sizes: Vec<usize> = components
                .iter()
                .map(|c| match &c.kind {
                    MeasureKind::Markov { alphabet_size, .. } => *alphabet_size,
                    _ => 2,
                })
                .collect();
            let mut total = 1.0;
            for (ci, c) in components.iter().enumerate() {
                // project each symbol onto this component's digit
                let digits: BTreeMap<Site, u8> = w
                    .shape()
                    .sites()
                    .map(|s| {
                        let mut sym = w.get(&s).expect("total") as usize;
                        for size in sizes.iter().skip(ci + 1) {
                            sym /= size;
                        }
                        (s, (sym % sizes[ci]) as u8)
                    })
                    .collect();
                let proj = Pattern::new(w.shape().clone(), digits)
                    .map_err(EquilibriumError::Subshift)?;
                total *= cylinder_measure(c, &proj)?;
            }
            Ok(total)
        }
    }
}

fn interval_word(w: &Pattern) -> Option<(i64, Vec<u8>)> {
    w.as_word_1d()
}

fn gap_completion_measure(
    mu: &EquilibriumMeasure,
    w: &Pattern,
    alphabet_size: usize,
) -> Result<f64, EquilibriumError> {
    let hull = w.shape().hull_box();
    let free: Vec<Site> = hull.sites().filter(|s| !w.shape().contains(s)).collect();
    if free.len() > 20 {
        return Err(EquilibriumError::UnsupportedShape);
    }
    let mut total = 0.0;
    let mut fill = vec![0u8; free.len()];
    loop {
        let mut full = w.clone();
        let extra: BTreeMap<Site, u8> =
            free.iter().copied().zip(fill.iter().copied()).collect();
        let extra_shape = Shape::from_sites(hull.dim(), free.iter().copied())
            .map_err(|_| EquilibriumError::UnsupportedShape)?;
        let extra_pat =
            Pattern::new(extra_shape, extra).map_err(EquilibriumError::Subshift)?;
        full = full.concat(&extra_pat).map_err(EquilibriumError::Subshift)?;
        total += cylinder_measure(mu, &full)?;
        let mut carried = false;
        for a in fill.iter_mut().rev() {
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
    Ok(total)
}

fn markov_word_measure(
    state_len: usize,
    states: &[Vec<u8>],
    pi: &[f64],
    p: &[Vec<f64>],
    word: &[u8],
) -> f64 {
    let index = |w: &[u8]| states.iter().position(|s| s == w);
    if word.len() <= state_len {
        // marginal of the stationary state distribution
        return states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.starts_with(word))
            .map(|(i, _)| pi[i])
            .sum();
    }
    let Some(mut cur) = index(&word[..state_len]) else {
        return 0.0;
    };
    let mut prob = pi[cur];
    for i in state_len..word.len() {
        let next_word = &word[i + 1 - state_len..=i];
        let Some(next) = index(next_word) else { return 0.0 };
        prob *= p[cur][next];
        cur = next;
    }
    prob
}

/// Finite-window pressure estimate
/// `|F|^{-1} log sum_{w in L_F} exp(sup_{x in [w]} phi_F(x))`.
///
/// The supremum is realized by enumerating legal patterns on the
/// window padded by the potential's dependence window.
pub fn partition_sum_pressure(
    x: &SubshiftSpec,
    phi: &Potential,
    f_n: &Shape,
) -> Result<PressureEstimate, EquilibriumError> {
    if f_n.is_empty() {
        return Err(EquilibriumError::UnsupportedShape);
    }
    let rep = phi.working();
    let domain = f_n
        .minkowski_sum(rep.window())
        .map_err(|_| EquilibriumError::UnsupportedShape)?
        .union(f_n)
        .map_err(|_| EquilibriumError::UnsupportedShape)?;
    let lang = language(x, &domain)?;
    if lang.is_empty() {
        return Err(EquilibriumError::EmptyLanguage);
    }
    let mut sups: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
    for u in &lang {
        let key = u.restrict(f_n).map_err(EquilibriumError::Subshift)?.word();
        let mut s = 0.0;
        for g in f_n.sites() {
            s += rep.eval_in_pattern(u, g)?;
        }
        let entry = sups.entry(key).or_insert(f64::NEG_INFINITY);
        *entry = entry.max(s);
    }
    // log-sum-exp with the max factored out for stability
    let m = sups.values().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let z: f64 = sups.values().map(|&s| libm::exp(s - m)).sum();
    let value = (m + libm::log(z)) / f_n.len() as f64;
    Ok(PressureEstimate {
        value,
        window: f_n.clone(),
        method: PressureMethod::PartitionSum,
    })
}

/// Randomized variational lower bound: perturbs the equilibrium
/// transition matrix into `candidates` stationary Markov chains on the
/// SFT graph and reports the best `h(mu) + integral`, which can never
/// exceed the true pressure.
pub fn variational_scan(
    x: &SubshiftSpec,
    phi: &LocallyConstantPotential,
    candidates: usize,
    seed: u64,
) -> Result<PressureEstimate, EquilibriumError> {
    let (_, eq) = transfer_pressure(x, phi)?;
    let MeasureKind::Markov { state_len, states, p, .. } = &eq.kind else {
        return Err(EquilibriumError::Not1dSft);
    };
    let (_, rebased) = build_transfer(x, phi)?;
    let span = rebased.window().len();
    let n = states.len();
    let mut best = f64::NEG_INFINITY;
    for c in 0..candidates.max(1) {
        let mut rng = substream(seed, "variational", c as u64);
        let scale = 0.2 * (c + 1) as f64 / candidates.max(1) as f64;
        // multiplicative perturbation of each row, renormalized
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut total = 0.0;
            for j in 0..n {
                if p[i][j] > 0.0 {
                    let factor = libm::exp(scale * (uniform_f64(&mut rng) - 0.5));
                    q[i][j] = p[i][j] * factor;
                    total += q[i][j];
                }
            }
            if total > 0.0 {
                for j in 0..n {
                    q[i][j] /= total;
                }
            }
        }
        // stationary distribution of the perturbed chain
        let (_, stat) = perron_right(&transpose(&q))?;
        let total: f64 = stat.iter().sum();
        let stat: Vec<f64> = stat.iter().map(|s| s / total).collect();
        let mut score = 0.0;
        for i in 0..n {
            for j in 0..n {
                if q[i][j] > 0.0 {
                    let mut word = states[i].clone();
                    word.push(*states[j].last().expect("nonempty"));
                    let phi_val = rebased.eval_word(&word[..span])?;
                    score += stat[i] * q[i][j] * (phi_val - libm::log(q[i][j]));
                }
            }
        }
        best = best.max(score);
    }
    Ok(PressureEstimate {
        value: best,
        window: Shape::interval(0, *state_len as i64),
        method: PressureMethod::VariationalLowerBound,
    })
}

/// Samples a path of `len` symbols from a stationary Markov measure.
pub fn sample_path<R: RngCore>(
    mu: &EquilibriumMeasure,
    len: usize,
    rng: &mut R,
) -> Result<Vec<u8>, EquilibriumError> {
    let MeasureKind::Markov { states, pi, p, .. } = &mu.kind else {
        return Err(EquilibriumError::UnsupportedShape);
    };
    let mut cur = weighted_index(rng, pi);
    let mut word: Vec<u8> = states[cur].clone();
    while word.len() < len {
        let next = weighted_index(rng, &p[cur]);
        word.push(*states[next].last().expect("nonempty"));
        cur = next;
    }
    word.truncate(len);
    Ok(word)
}

/// Samples a word on `[lo, hi)` from the Markov measure conditioned on
/// matching the given pattern, by backward messages and forward
/// sampling. Returns the sampled pattern, or `None` when the
/// constraint has measure zero.
pub fn sample_conditional<R: RngCore>(
    mu: &EquilibriumMeasure,
    constraint: &Pattern,
    lo: i64,
    hi: i64,
    rng: &mut R,
) -> Result<Option<Pattern>, EquilibriumError> {
    let MeasureKind::Markov { state_len, states, pi, p, .. } = &mu.kind else {
        return Err(EquilibriumError::UnsupportedShape);
    };
    let k = *state_len;
    let len = (hi - lo) as usize;
    if len < k {
        return Err(EquilibriumError::UnsupportedShape);
    }
    if let Some((clo, chi)) = constraint.shape().bounds() {
        if clo.x < lo || chi.x >= hi {
            return Err(EquilibriumError::UnsupportedShape);
        }
    }
    let matches = |pos: i64, sym: u8| -> bool {
        match constraint.get(&Site::z(pos)) {
            Some(c) => c == sym,
            None => true,
        }
    };
    let state_ok =
        |start: i64, s: &[u8]| s.iter().enumerate().all(|(i, &a)| matches(start + i as i64, a));
    let steps = len - k;
    // backward messages: b[j][s] = mass of completing from step j in state s
    let mut b = vec![vec![0.0f64; states.len()]; steps + 1];
    for s in 0..states.len() {
        b[steps][s] = 1.0;
    }
    for j in (0..steps).rev() {
        let newpos = lo + (k + j) as i64;
        for s in 0..states.len() {
            let mut acc = 0.0;
            for t in 0..states.len() {
                if p[s][t] > 0.0 {
                    let sym = *states[t].last().expect("nonempty");
                    if matches(newpos, sym) {
                        acc += p[s][t] * b[j + 1][t];
                    }
                }
            }
            b[j][s] = acc;
        }
    }
    let init: Vec<f64> = (0..states.len())
        .map(|s| {
            if state_ok(lo, &states[s]) {
                pi[s] * b[0][s]
            } else {
                0.0
            }
        })
        .collect();
    if init.iter().sum::<f64>() <= 0.0 {
        return Ok(None);
    }
    let mut cur = weighted_index(rng, &init);
    let mut word: Vec<u8> = states[cur].clone();
    for j in 0..steps {
        let newpos = lo + (k + j) as i64;
        let weights: Vec<f64> = (0..states.len())
            .map(|t| {
                let sym = *states[t].last().expect("nonempty");
                if p[cur][t] > 0.0 && matches(newpos, sym) {
                    p[cur][t] * b[j + 1][t]
                } else {
                    0.0
                }
            })
            .collect();
        let next = weighted_index(rng, &weights);
        word.push(*states[next].last().expect("nonempty"));
        cur = next;
    }
    Ok(Some(Pattern::word_1d(lo, &word)))
}

/// Monte-Carlo pressure estimate
/// `mean of |F_n|^{-1} (phi_{F_n}(x) - log mu([x_{F_n}]))`
/// over sampled points of the measure.
pub fn smb_estimate(
    mu: &EquilibriumMeasure,
    phi: &Potential,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, EquilibriumError> {
    let rep = phi.working();
    let (_, whi) = rep
        .window()
        .bounds()
        .ok_or(EquilibriumError::UnsupportedShape)?;
    let pad = (whi.x.max(0) as usize) + 1;
    let mut total = 0.0;
    for i in 0..samples.max(1) {
        let mut rng = substream(seed, "smb", i as u64);
        let word = sample_path(mu, n + pad, &mut rng)?;
        let x = PointApprox::with_core(Pattern::word_1d(0, &word), 0);
        let f_n = Shape::interval(0, n as i64);
        let phi_sum = birkhoff_sum(phi, &f_n, &x)?.value;
        let mu_word = cylinder_measure(mu, &Pattern::word_1d(0, &word[..n]))?;
        total += (phi_sum - libm::log(mu_word)) / n as f64;
    }
    Ok(total / samples.max(1) as f64)
}

/// Serializes the Markov data for export: `(state word, pi, row)` list.
pub fn markov_export(mu: &EquilibriumMeasure) -> Option<(Vec<Vec<u8>>, Vec<f64>, Vec<Vec<f64>>)> {
    match &mu.kind {
        MeasureKind::Markov { states, pi, p, .. } => {
            Some((states.clone(), pi.clone(), p.clone()))
        }
        _ => None,
    }
}

/// Case-insensitive tag for reports.
pub fn measure_kind_name(mu: &EquilibriumMeasure) -> String {
    match &mu.kind {
        MeasureKind::Markov { .. } => String::from("markov"),
        MeasureKind::PointMass(_) => String::from("point-mass"),
        MeasureKind::Product(_) => String::from("product"),
    }
}
