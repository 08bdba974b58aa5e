//! Desk-scale simulation of entanglement distillation and dilution.
//!
//! Both directions work on the classical-quantum description of `N` copies:
//! the i.i.d. source over symbols `(a, i)` with probability `p_a lambda_i` is
//! cut down to its delta-typical types, each type class carries a fusion space
//! `V^c` for every total charge `c`, and maximally entangled states on
//! `x^{nL}` are described by the dimensions `dim V^c_{x^{nL}}`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::config::Limits;
use crate::entanglement::aee;
use crate::error::{Error, Result};
use crate::fusion::{fusion_dims, push_charge};
use crate::model::{AnyonModel, Charge};
use crate::numeric::{big_to_f64, log2_big, log2_sum_exp2, multinomial};
use crate::state::{BipartiteState, Sector, Symbol};

/// Slack when comparing empirical frequencies against the delta band.
const BAND_EPS: f64 = 1e-12;
/// Slack in majorization comparisons.
pub const MAJORIZATION_TOLERANCE: f64 = 1e-12;
const MAX_LADDER_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Type {
    /// Occurrences of each symbol, in symbol order; sums to `N`.
    pub counts: Vec<u64>,
    /// Number of sequences of this type.
    pub cardinality: BigUint,
    /// `log2` of the probability of one sequence of this type.
    pub log2_sequence_prob: f64,
    /// Probability of the type conditioned on typicality.
    pub probability: f64,
}

impl Type {
    /// Number of copies carrying each charge, indexed by charge.
    pub fn charge_counts(&self, symbols: &[Symbol], model: &AnyonModel) -> Vec<u64> {
        let mut k = vec![0u64; model.len()];
        for (s, &c) in symbols.iter().zip(&self.counts) {
            k[s.charge.index()] += c;
        }
        k
    }

    /// `dim V^c` of the charge multiset of this type, for every `c`.
    fn sector_dims(&self, symbols: &[Symbol], model: &AnyonModel) -> Vec<BigUint> {
        let seq: Vec<Charge> = self
            .charge_counts(symbols, model)
            .iter()
            .enumerate()
            .flat_map(|(a, &k)| std::iter::repeat_n(Charge::new(a), k as usize))
            .collect();
        fusion_dims(model, &seq)
    }

    fn log2_dim_product(&self, symbols: &[Symbol], model: &AnyonModel) -> f64 {
        self.charge_counts(symbols, model)
            .iter()
            .enumerate()
            .map(|(a, &k)| k as f64 * model.qdim(Charge::new(a)).log2())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSet {
    pub n: usize,
    pub delta: f64,
    pub symbols: Vec<Symbol>,
    /// Member types in lexicographic order of their counts.
    pub types: Vec<Type>,
    /// Total probability of the typical sequences.
    pub p_delta: f64,
}

impl TypicalSet {
    /// Most probable member type; the first one in enumeration order on ties.
    pub fn modal(&self) -> Option<&Type> {
        self.types
            .iter()
            .fold(None, |best: Option<&Type>, t| match best {
                Some(b) if b.probability >= t.probability => Some(b),
                _ => Some(t),
            })
    }
}

/// All types of length `n` whose frequencies are within `delta` of the source.
pub fn typical_set(state: &BipartiteState, n: usize, delta: f64) -> Result<TypicalSet> {
    typical_set_with(state, n, delta, &Limits::default())
}

pub fn typical_set_with(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    limits: &Limits,
) -> Result<TypicalSet> {
    if n == 0 {
        return Err(Error::Validation(
            "typical sets need at least one copy".into(),
        ));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Validation(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let symbols = state.symbols();
    let nf = n as f64;
    let ranges: Vec<(u64, u64)> = symbols
        .iter()
        .map(|s| {
            let lo = (nf * (s.prob - delta) - BAND_EPS).ceil().max(0.0) as u64;
            let hi = (nf * (s.prob + delta) + BAND_EPS).floor().min(nf) as u64;
            (lo, hi)
        })
        .collect();

    let mut raw: Vec<Vec<u64>> = Vec::new();
    let mut counts = Vec::with_capacity(symbols.len());
    enumerate(&ranges, n as u64, &mut counts, &mut raw, limits.enum_cap)?;

    let logs: Vec<f64> = symbols.iter().map(|s| s.prob.log2()).collect();
    let mut types: Vec<Type> = raw
        .into_iter()
        .map(|counts| {
            let cardinality = multinomial(&counts);
            let log2_sequence_prob = counts.iter().zip(&logs).map(|(&k, l)| k as f64 * l).sum();
            Type {
                counts,
                cardinality,
                log2_sequence_prob,
                probability: 0.0,
            }
        })
        .collect();
    let log_mass: Vec<f64> = types
        .iter()
        .map(|t| log2_big(&t.cardinality) + t.log2_sequence_prob)
        .collect();
    let log_p = log2_sum_exp2(log_mass.iter().copied());
    for (t, lm) in types.iter_mut().zip(&log_mass) {
        t.probability = (lm - log_p).exp2();
    }
    Ok(TypicalSet {
        n,
        delta,
        symbols,
        types,
        p_delta: log_p.exp2().clamp(0.0, 1.0),
    })
}

fn enumerate(
    ranges: &[(u64, u64)],
    remaining: u64,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cap: u64,
) -> Result<()> {
    let depth = prefix.len();
    if depth + 1 == ranges.len() {
        let (lo, hi) = ranges[depth];
        if (lo..=hi).contains(&remaining) {
            if out.len() as u64 >= cap {
                return Err(Error::Size {
                    what: "typical types".into(),
                    needed: format!("more than {cap}"),
                    cap,
                });
            }
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
        }
        return Ok(());
    }
    let (lo, hi) = ranges[depth];
    // the remaining symbols must be able to absorb what is left
    let rest_lo: u64 = ranges[depth + 1..].iter().map(|r| r.0).sum();
    let rest_hi: u64 = ranges[depth + 1..].iter().map(|r| r.1).sum();
    for k in lo..=hi.min(remaining) {
        let left = remaining - k;
        if left < rest_lo || left > rest_hi {
            continue;
        }
        prefix.push(k);
        enumerate(ranges, left, prefix, out, cap)?;
        prefix.pop();
    }
    Ok(())
}

/// Which type-measurement outcome the distillation report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeSelection {
    #[default]
    Modal,
    /// Average over all typical types, weighted by their probability.
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Distill,
    Dilute,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorReport {
    pub charge: String,
    /// `N_t^c` when distilling, the typical Schmidt rank when diluting.
    #[serde(serialize_with = "as_string")]
    pub available: BigUint,
    /// `M^c = dim V^c_{x^{nL}}`.
    #[serde(serialize_with = "as_string")]
    pub target_dim: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majorized: Option<bool>,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub direction: Direction,
    pub n: usize,
    pub delta: f64,
    pub target: Vec<String>,
    /// Copies of the maximally entangled state produced or consumed.
    pub l: u64,
    pub l_exact: u64,
    pub l_paper: u64,
    pub rate: f64,
    pub success_prob: f64,
    pub fidelity: f64,
    pub p_delta: f64,
    /// Probability of the reported type, when a single type is reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_probability: Option<f64>,
    pub sectors: Vec<SectorReport>,
}

/// A uniform target chain `x^n` of a primitive non-vacuum charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub x: Charge,
    pub n: usize,
}

impl Target {
    pub fn from_chain(model: &AnyonModel, chain: &[Charge]) -> Result<Self> {
        let Some(&x) = chain.first() else {
            return Err(Error::Validation("target chain is empty".into()));
        };
        if chain.iter().any(|&y| y != x) {
            return Err(Error::Validation(
                "target chain must repeat a single charge".into(),
            ));
        }
        if x == model.vacuum() || !model.is_primitive(x) {
            return Err(Error::Primitivity(model.label(x).to_string()));
        }
        Ok(Target { x, n: chain.len() })
    }

    fn log2_dim(&self, model: &AnyonModel) -> f64 {
        self.n as f64 * model.qdim(self.x).log2()
    }

    fn labels(&self, model: &AnyonModel) -> Vec<String> {
        vec![model.label(self.x).to_string(); self.n]
    }
}

/// `dim V^c_{x^{nL}}` for `L = 0, 1, 2, ...`.
struct Ladder<'m> {
    model: &'m AnyonModel,
    target: Target,
    l: u64,
    dims: Vec<BigUint>,
}

impl<'m> Ladder<'m> {
    fn new(model: &'m AnyonModel, target: Target) -> Self {
        Ladder {
            model,
            target,
            l: 0,
            dims: fusion_dims(model, &[]),
        }
    }

    fn step(&mut self) -> Result<()> {
        if self.l >= MAX_LADDER_STEPS {
            return Err(Error::Numeric(
                "copy-number search did not terminate".into(),
            ));
        }
        for _ in 0..self.target.n {
            self.dims = push_charge(self.model, &self.dims, self.target.x);
        }
        self.l += 1;
        Ok(())
    }

    fn at(model: &'m AnyonModel, target: Target, l: u64) -> Result<Self> {
        let mut ladder = Ladder::new(model, target);
        while ladder.l < l {
            ladder.step()?;
        }
        Ok(ladder)
    }
}

fn require_primitive_support(state: &BipartiteState) -> Result<()> {
    let m = state.model();
    if state
        .sectors()
        .iter()
        .any(|s| s.charge != m.vacuum() && m.is_primitive(s.charge))
    {
        Ok(())
    } else {
        Err(Error::Primitivity(
            "no sector with positive weight carries a primitive charge".into(),
        ))
    }
}

fn nonempty(ts: TypicalSet) -> Result<TypicalSet> {
    if ts.types.is_empty() || ts.p_delta <= 0.0 {
        Err(Error::NoTypicalMass)
    } else {
        Ok(ts)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProtocolOptions {
    pub selection: TypeSelection,
    pub limits: Limits,
}

/// The copy count from the asymptotic distillation formula, with the
/// unquantified typicality corrections set to zero. Never negative.
pub fn distill_l_paper(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target: Target,
    num_symbols: usize,
) -> u64 {
    let m = state.model();
    let nf = n as f64;
    let sum_log_d: f64 = m.qdims().iter().map(|d| d.log2()).sum();
    let body =
        nf * aee(state) - (num_symbols as f64 + 1.0) * (nf + 1.0).log2() - nf * delta * sum_log_d;
    (body / target.log2_dim(m)).floor().max(0.0) as u64
}

/// The copy count from the asymptotic dilution formula.
pub fn dilute_l_paper(state: &BipartiteState, n: usize, delta: f64, target: Target) -> u64 {
    let m = state.model();
    let sum_log_d: f64 = m.qdims().iter().map(|d| d.log2()).sum();
    let v = n as f64 * (aee(state) + delta * (1.0 + sum_log_d)) / target.log2_dim(m) + 1.0;
    v.floor().max(0.0) as u64
}

struct DistillOutcome {
    l: u64,
    fidelity: f64,
    fail: f64,
    sectors: Vec<SectorReport>,
}

fn distill_type(
    model: &AnyonModel,
    symbols: &[Symbol],
    t: &Type,
    target: Target,
) -> Result<DistillOutcome> {
    let dims = t.sector_dims(symbols, model);
    let available: Vec<BigUint> = dims.iter().map(|d| d * &t.cardinality).collect();
    let max_available = available.iter().max().cloned().unwrap_or_default();

    let feasible = |d: &[BigUint]| {
        d.iter()
            .zip(&available)
            .all(|(dc, nc)| dc.is_zero() || dc <= nc)
    };
    let mut ladder = Ladder::new(model, target);
    let mut best = 0u64;
    loop {
        ladder.step()?;
        if feasible(&ladder.dims) {
            best = ladder.l;
        }
        // the smallest sector dimension never decreases along the ladder
        let min_dim = ladder.dims.iter().min().expect("non-empty model");
        if *min_dim > max_available {
            break;
        }
    }
    let mes = Ladder::at(model, target, best)?;

    let log_w: Vec<f64> = model
        .charges()
        .map(|c| model.qdim(c).log2() + log2_big(&dims[c.index()]))
        .collect();
    let log_z = log2_sum_exp2(log_w.iter().copied());
    let log_dx = best as f64 * target.log2_dim(model);
    let mut fidelity = 0.0;
    let mut fail = 0.0;
    let mut sectors = Vec::new();
    for c in model.charges() {
        let (mc, nc) = (&mes.dims[c.index()], &available[c.index()]);
        if !mc.is_zero() && !nc.is_zero() {
            let log_v = model.qdim(c).log2() + log2_big(mc) - log_dx;
            fidelity += (0.5 * (log_w[c.index()] - log_z) + 0.5 * log_v).exp2();
            let rem = nc % mc;
            if !rem.is_zero() {
                fail += (log_w[c.index()] - log_z).exp2() * (log2_big(&rem) - log2_big(nc)).exp2();
            }
        }
        if !mc.is_zero() || !nc.is_zero() {
            sectors.push(SectorReport {
                charge: model.label(c).to_string(),
                available: nc.clone(),
                target_dim: mc.clone(),
                majorized: None,
            });
        }
    }
    Ok(DistillOutcome {
        l: best,
        fidelity: fidelity.min(1.0),
        fail,
        sectors,
    })
}

pub fn distill(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
) -> Result<ProtocolReport> {
    distill_with(state, n, delta, target_chain, &ProtocolOptions::default())
}

/// Typical projection, type measurement, subspace cut to `M^c = dim V^c_{x^{nL}}`.
///
/// `L` is the largest copy number whose sector dimensions all fit inside the
/// measured type's sectors. Fidelity is the overlap with `L` maximally
/// entangled states after the cut.
pub fn distill_with(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
    opts: &ProtocolOptions,
) -> Result<ProtocolReport> {
    let model = state.model();
    let target = Target::from_chain(model, target_chain)?;
    require_primitive_support(state)?;
    let ts = nonempty(typical_set_with(state, n, delta, &opts.limits)?)?;
    let l_paper = distill_l_paper(state, n, delta, target, ts.symbols.len());
    let modal = ts.modal().expect("non-empty typical set");

    let (l_exact, rate, fidelity, success, type_probability, sectors) = match opts.selection {
        TypeSelection::Modal => {
            let o = distill_type(model, &ts.symbols, modal, target)?;
            let rate = o.l as f64 / n as f64;
            (
                o.l,
                rate,
                o.fidelity,
                ts.p_delta * (1.0 - o.fail),
                Some(modal.probability),
                o.sectors,
            )
        }
        TypeSelection::Average => {
            let (mut l, mut f, mut ok) = (0.0, 0.0, 0.0);
            let mut sectors = Vec::new();
            for t in &ts.types {
                let o = distill_type(model, &ts.symbols, t, target)?;
                l += t.probability * o.l as f64;
                f += t.probability * o.fidelity;
                ok += t.probability * (1.0 - o.fail);
                if std::ptr::eq(t, modal) {
                    sectors = o.sectors;
                }
            }
            (
                l.floor() as u64,
                l / n as f64,
                f,
                ts.p_delta * ok,
                None,
                sectors,
            )
        }
    };
    Ok(ProtocolReport {
        direction: Direction::Distill,
        n,
        delta,
        target: target.labels(model),
        l: l_exact,
        l_exact,
        l_paper,
        rate,
        success_prob: success,
        fidelity,
        p_delta: ts.p_delta,
        type_probability,
        sectors,
    })
}

/// Per-sector Schmidt data of the normalized typical projection of `N` copies.
struct TypicalSectors {
    /// `Q^c`, indexed by charge.
    weight: Vec<f64>,
    /// Schmidt coefficients of sector `c` as `(value, multiplicity)`, descending.
    runs: Vec<Vec<(f64, BigUint)>>,
    p_delta: f64,
}

impl TypicalSectors {
    fn build(model: &AnyonModel, ts: &TypicalSet) -> Self {
        let m = model.len();
        let log_p = ts.p_delta.log2();
        let mut log_runs: Vec<Vec<(f64, BigUint)>> = vec![Vec::new(); m];
        for t in &ts.types {
            let dims = t.sector_dims(&ts.symbols, model);
            let log_d = t.log2_dim_product(&ts.symbols, model);
            for c in model.charges() {
                let dim = &dims[c.index()];
                if dim.is_zero() {
                    continue;
                }
                // unnormalized value of one Schmidt coefficient, before dividing by Q^c
                let lv = t.log2_sequence_prob + model.qdim(c).log2() - log_p - log_d;
                log_runs[c.index()].push((lv, dim * &t.cardinality));
            }
        }
        let mut weight = vec![0.0; m];
        let mut runs = vec![Vec::new(); m];
        for c in 0..m {
            if log_runs[c].is_empty() {
                continue;
            }
            let log_q = log2_sum_exp2(log_runs[c].iter().map(|(lv, k)| lv + log2_big(k)));
            weight[c] = log_q.exp2();
            let mut r: Vec<(f64, BigUint)> = log_runs[c]
                .drain(..)
                .map(|(lv, k)| ((lv - log_q).exp2(), k))
                .collect();
            r.sort_by(|x, y| y.0.total_cmp(&x.0));
            runs[c] = r;
        }
        TypicalSectors {
            weight,
            runs,
            p_delta: ts.p_delta,
        }
    }

    fn rank(&self, c: usize) -> BigUint {
        self.runs[c].iter().map(|(_, k)| k).sum()
    }

    fn majorized(&self, dims: &[BigUint]) -> Vec<Option<bool>> {
        (0..self.weight.len())
            .map(|c| {
                (self.weight[c] > 0.0).then(|| uniform_majorized_by_runs(&dims[c], &self.runs[c]))
            })
            .collect()
    }

    fn all_majorized(&self, dims: &[BigUint]) -> bool {
        self.majorized(dims).into_iter().all(|v| v.unwrap_or(true))
    }
}

/// Whether `uniform(dim)` is majorized by the vector given as descending runs.
pub fn uniform_majorized_by_runs(dim: &BigUint, runs: &[(f64, BigUint)]) -> bool {
    if dim.is_zero() {
        return runs.is_empty();
    }
    let d = big_to_f64(dim);
    // both partial-sum curves are linear between these breakpoints
    let mut prefix = BigUint::zero();
    let mut sum = 0.0;
    let mut checked_dim = false;
    for (value, count) in runs {
        let end = &prefix + count;
        if !checked_dim && *dim <= end {
            let partial = sum + big_to_f64(&(dim - &prefix)) * value;
            if partial < 1.0 - MAJORIZATION_TOLERANCE {
                return false;
            }
            checked_dim = true;
        }
        sum += big_to_f64(count) * value;
        let k = big_to_f64(&end);
        if sum < (k / d).min(1.0) - MAJORIZATION_TOLERANCE {
            return false;
        }
        prefix = end;
    }
    true
}

pub fn dilute(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
) -> Result<ProtocolReport> {
    dilute_with(state, n, delta, target_chain, &Limits::default())
}

/// `L` maximally entangled states are converted by per-sector majorization into
/// the typical projection of `N` copies. `L` follows the asymptotic formula;
/// `l_exact` is the smallest `L` for which every sector majorization holds.
pub fn dilute_with(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
    limits: &Limits,
) -> Result<ProtocolReport> {
    let model = state.model();
    let target = Target::from_chain(model, target_chain)?;
    require_primitive_support(state)?;
    let ts = nonempty(typical_set_with(state, n, delta, limits)?)?;
    let sectors = TypicalSectors::build(model, &ts);
    let l_exact = dilute_exact_from(model, &sectors, target)?;
    let l_paper = dilute_l_paper(state, n, delta, target);

    let mes = Ladder::at(model, target, l_paper)?;
    let verdicts = sectors.majorized(&mes.dims);
    let log_dx = l_paper as f64 * target.log2_dim(model);
    let mut overlap = 0.0;
    let mut report = Vec::new();
    for c in model.charges() {
        let (dim, q) = (&mes.dims[c.index()], sectors.weight[c.index()]);
        if !dim.is_zero() && q > 0.0 {
            let v = (model.qdim(c).log2() + log2_big(dim) - log_dx).exp2();
            overlap += (v * q).sqrt();
        }
        if !dim.is_zero() || q > 0.0 {
            report.push(SectorReport {
                charge: model.label(c).to_string(),
                available: sectors.rank(c.index()),
                target_dim: dim.clone(),
                majorized: verdicts[c.index()],
            });
        }
    }
    Ok(ProtocolReport {
        direction: Direction::Dilute,
        n,
        delta,
        target: target.labels(model),
        l: l_paper,
        l_exact,
        l_paper,
        rate: l_paper as f64 / n as f64,
        success_prob: 1.0,
        fidelity: (sectors.p_delta.sqrt() * overlap).min(1.0),
        p_delta: ts.p_delta,
        type_probability: None,
        sectors: report,
    })
}

fn dilute_exact_from(model: &AnyonModel, sectors: &TypicalSectors, target: Target) -> Result<u64> {
    let mut ladder = Ladder::new(model, target);
    while !sectors.all_majorized(&ladder.dims) {
        ladder.step()?;
    }
    Ok(ladder.l)
}

/// Smallest number of maximally entangled states that dilute into `N` copies.
pub fn dilute_exact_copies(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
    limits: &Limits,
) -> Result<u64> {
    let model = state.model();
    let target = Target::from_chain(model, target_chain)?;
    let ts = nonempty(typical_set_with(state, n, delta, limits)?)?;
    dilute_exact_from(model, &TypicalSectors::build(model, &ts), target)
}

/// Distills `L_D` maximally entangled states from `N` copies, then finds the
/// largest `N'` (up to `2N`) that dilution recreates from those `L_D`.
/// Returns `N'/N`; a value above one would mean LOCC created entanglement.
pub fn optimality_roundtrip(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
) -> Result<f64> {
    roundtrip_with(state, n, delta, target_chain, &Limits::default())
}

pub fn roundtrip_with(
    state: &BipartiteState,
    n: usize,
    delta: f64,
    target_chain: &[Charge],
    limits: &Limits,
) -> Result<f64> {
    let opts = ProtocolOptions {
        selection: TypeSelection::Modal,
        limits: *limits,
    };
    let l_d = distill_with(state, n, delta, target_chain, &opts)?.l_exact;
    let mut best = 0usize;
    for m in 1..=2 * n {
        match dilute_exact_copies(state, m, delta, target_chain, limits) {
            Ok(l) if l <= l_d => best = m,
            Ok(_) | Err(Error::NoTypicalMass) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best as f64 / n as f64)
}

/// `x` is majorized by `y` (both probability vectors, any order).
pub fn majorized_by(x: &[f64], y: &[f64]) -> bool {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (x, y) = (sorted(x), sorted(y));
    let len = x.len().max(y.len());
    let (mut sx, mut sy) = (0.0, 0.0);
    for k in 0..len {
        sx += x.get(k).copied().unwrap_or(0.0);
        sy += y.get(k).copied().unwrap_or(0.0);
        if sx > sy + MAJORIZATION_TOLERANCE {
            return false;
        }
    }
    true
}

/// Deterministic LOCC convertibility of `source` into `target` under the
/// charge superselection rule: sector weights must agree and every sector's
/// source spectrum must be majorized by the target spectrum.
pub fn locc_convertible(source: &[Sector], target: &[Sector]) -> Result<bool> {
    let key = |s: &[Sector]| {
        let mut v: Vec<(Charge, f64)> = s.iter().map(|x| (x.charge, x.weight)).collect();
        v.sort_by_key(|x| x.0);
        v
    };
    let (ks, kt) = (key(source), key(target));
    if ks.len() != kt.len() || ks.iter().zip(&kt).any(|(a, b)| a.0 != b.0) {
        return Err(Error::SectorMismatch(
            "source and target occupy different sectors".into(),
        ));
    }
    if let Some((a, b)) = ks.iter().zip(&kt).find(|(a, b)| (a.1 - b.1).abs() > 1e-9) {
        return Err(Error::SectorMismatch(format!(
            "sector weights differ ({} vs {}) for charge index {}",
            a.1,
            b.1,
            a.0.index()
        )));
    }
    Ok(source.iter().all(|s| {
        let t = target
            .iter()
            .find(|t| t.charge == s.charge)
            .expect("matched above");
        majorized_by(&s.schmidt, &t.schmidt)
    }))
}

/// Size of the typical-type bound `(N+1)^d`.
pub fn type_count_bound(n: usize, num_symbols: usize) -> BigUint {
    BigUint::from(n + 1).pow(num_symbols as u32)
}

/// Number of types as a `u64`, for reports.
pub fn type_count(ts: &TypicalSet) -> u64 {
    ts.types.len().to_u64().unwrap_or(u64::MAX)
}
