//! Bipartite pure states with vacuum (or abelian) total charge.
//!
//! Such a state decomposes as `|psi> = sum_a sqrt(p_a) |psi_a>` with
//! `|psi_a>` living in `H_A^a (x) H_B^{a-bar}`. Every entanglement quantity of
//! interest depends only on the sector weights `p_a`, the Schmidt spectra
//! `lambda^(a)` of the `|psi_a>` and the fusion data, so that is all a
//! [`BipartiteState`] stores.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fusion::{fusion_dims, weighted_fusion_dp};
use crate::model::{AnyonModel, Charge};

/// Input sums must be within this of one before renormalization.
pub const INPUT_TOLERANCE: f64 = 1e-9;
/// Schmidt coefficients and weights at or below this are dropped.
pub const ZERO_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    /// Local total charge on side A.
    pub charge: Charge,
    pub weight: f64,
    /// Schmidt coefficients of `|psi_a>`, descending.
    pub schmidt: Vec<f64>,
}

impl Sector {
    pub fn new(charge: Charge, weight: f64, schmidt: Vec<f64>) -> Self {
        Sector {
            charge,
            weight,
            schmidt,
        }
    }
}

/// Anyon content of the two halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub a: Vec<Charge>,
    pub b: Vec<Charge>,
}

impl Context {
    /// `A = x_1 ... x_n`, `B = x_1-bar ... x_n-bar`.
    pub fn mirrored(model: &AnyonModel, a: Vec<Charge>) -> Self {
        let b = a.iter().map(|&x| model.dual(x)).collect();
        Context { a, b }
    }
}

#[derive(Debug, Clone)]
pub struct BipartiteState {
    model: Arc<AnyonModel>,
    total: Charge,
    sectors: Vec<Sector>,
    context: Option<Context>,
}

impl BipartiteState {
    /// Validates and normalizes a vacuum-total-charge state.
    pub fn new(
        model: Arc<AnyonModel>,
        sectors: Vec<Sector>,
        context: Option<Context>,
    ) -> Result<Self> {
        let vacuum = model.vacuum();
        Self::with_total(model, vacuum, sectors, context)
    }

    /// As [`BipartiteState::new`] with an abelian total charge; the B-side
    /// sector paired with `a` is the unique outcome of `a-bar x total`.
    pub fn with_total(
        model: Arc<AnyonModel>,
        total: Charge,
        sectors: Vec<Sector>,
        context: Option<Context>,
    ) -> Result<Self> {
        if total.index() >= model.len() {
            return Err(Error::Validation("total charge outside the model".into()));
        }
        if !model.is_abelian(total) {
            return Err(Error::Validation(format!(
                "total charge {} is non-abelian; purify the state instead",
                model.label(total)
            )));
        }
        let mut kept: Vec<Sector> = Vec::with_capacity(sectors.len());
        let mut weight_sum = 0.0;
        for s in sectors {
            if s.charge.index() >= model.len() {
                return Err(Error::Validation("sector charge outside the model".into()));
            }
            if !s.weight.is_finite() || s.weight < 0.0 {
                return Err(Error::Validation(format!(
                    "sector {} has invalid weight {}",
                    model.label(s.charge),
                    s.weight
                )));
            }
            weight_sum += s.weight;
            if s.weight <= ZERO_CUTOFF {
                continue;
            }
            if kept.iter().any(|k| k.charge == s.charge) {
                return Err(Error::Validation(format!(
                    "sector {} listed twice",
                    model.label(s.charge)
                )));
            }
            let schmidt = normalize_schmidt(&model, s.charge, s.schmidt)?;
            kept.push(Sector {
                charge: s.charge,
                weight: s.weight,
                schmidt,
            });
        }
        if kept.is_empty() {
            return Err(Error::Validation(
                "state has no sector with positive weight".into(),
            ));
        }
        if (weight_sum - 1.0).abs() > INPUT_TOLERANCE {
            return Err(Error::Validation(format!(
                "sector weights sum to {weight_sum}, not 1"
            )));
        }
        let kept_sum: f64 = kept.iter().map(|s| s.weight).sum();
        for s in &mut kept {
            s.weight /= kept_sum;
        }
        kept.sort_by_key(|s| s.charge);

        let state = BipartiteState {
            model,
            total,
            sectors: kept,
            context,
        };
        state.check_context()?;
        Ok(state)
    }

    /// A single sector of charge `a` with one Schmidt coefficient: an
    /// `a, a-bar` pair drawn from the vacuum.
    pub fn pure_sector(model: Arc<AnyonModel>, a: Charge) -> Self {
        BipartiteState::new(model, vec![Sector::new(a, 1.0, vec![1.0])], None)
            .expect("pure sector is valid")
    }

    fn check_context(&self) -> Result<()> {
        let Some(ctx) = &self.context else {
            return Ok(());
        };
        let m = self.model.len();
        if ctx.a.iter().chain(&ctx.b).any(|c| c.index() >= m) {
            return Err(Error::Validation(
                "context refers to a charge outside the model".into(),
            ));
        }
        let dims_a = fusion_dims(&self.model, &ctx.a);
        let dims_b = fusion_dims(&self.model, &ctx.b);
        for s in &self.sectors {
            let da = &dims_a[s.charge.index()];
            let db = &dims_b[self.partner(s.charge).index()];
            let cap = da.min(db);
            if BigUint::from(s.schmidt.len()) > *cap {
                return Err(Error::Validation(format!(
                    "sector {} has Schmidt rank {} but the context allows {}",
                    self.model.label(s.charge),
                    s.schmidt.len(),
                    cap
                )));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> &AnyonModel {
        &self.model
    }

    pub fn model_arc(&self) -> &Arc<AnyonModel> {
        &self.model
    }

    pub fn total(&self) -> Charge {
        self.total
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn context(&self) -> Option<&Context> {
        self.context.as_ref()
    }

    /// Sector weights indexed by charge (zero for absent sectors).
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.model.len()];
        for s in &self.sectors {
            w[s.charge.index()] = s.weight;
        }
        w
    }

    /// B-side charge paired with the A-side sector `a`.
    pub fn partner(&self, a: Charge) -> Charge {
        let dual = self.model.dual(a);
        self.model
            .outcomes(dual, self.total)
            .next()
            .map(|(c, _)| c)
            .expect("abelian total charge has exactly one channel")
    }

    /// Block-diagonal spectrum of the reduced state on `side`: block `a`
    /// carries `p_a lambda^(a)_i`.
    pub fn partial_trace_spectrum(&self, side: Side) -> Vec<(Charge, Vec<f64>)> {
        let mut blocks: Vec<(Charge, Vec<f64>)> = self
            .sectors
            .iter()
            .map(|s| {
                let charge = match side {
                    Side::A => s.charge,
                    Side::B => self.partner(s.charge),
                };
                (charge, s.schmidt.iter().map(|l| s.weight * l).collect())
            })
            .collect();
        blocks.sort_by_key(|(c, _)| *c);
        blocks
    }

    /// A single rank-one sector whose charge is abelian.
    pub fn is_separable(&self) -> bool {
        match self.sectors.as_slice() {
            [s] => s.schmidt.len() == 1 && self.model.is_abelian(s.charge),
            _ => false,
        }
    }

    /// Classical-quantum data of the embedded `N`-copy state.
    pub fn ncopy(&self, n: usize) -> NCopyEnsemble {
        assert!(n >= 1, "at least one copy");
        let q = weighted_fusion_dp(&self.model, &self.weights(), n);
        NCopyEnsemble {
            n,
            q,
            symbols: self.symbols(),
        }
    }

    /// Joint symbols `(a, i_a)` with probabilities `p_a lambda_{i_a}`, ordered by charge then index.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.sectors
            .iter()
            .flat_map(|s| {
                s.schmidt.iter().enumerate().map(move |(i, l)| Symbol {
                    charge: s.charge,
                    index: i,
                    prob: s.weight * l,
                })
            })
            .collect()
    }

    /// The embedded state of two independently prepared states.
    ///
    /// Sector `c` collects every `(a, b, mu)` with `N_ab^c > 0`; each fusion
    /// channel contributes Schmidt weight `p_a p_b d_c / (d_a d_b) lambda_i lambda_j`.
    pub fn compose(&self, other: &BipartiteState) -> Result<BipartiteState> {
        if !self.model.same_as(&other.model) {
            return Err(Error::ModelMismatch);
        }
        let model = &self.model;
        let total = model
            .outcomes(self.total, other.total)
            .next()
            .map(|(c, _)| c)
            .expect("abelian totals fuse uniquely");
        let mut entries: Vec<Vec<f64>> = vec![Vec::new(); model.len()];
        for s in &self.sectors {
            for t in &other.sectors {
                let base = s.weight * t.weight / (model.qdim(s.charge) * model.qdim(t.charge));
                for (c, mult) in model.outcomes(s.charge, t.charge) {
                    let scale = base * model.qdim(c);
                    for _ in 0..mult {
                        for l in &s.schmidt {
                            for r in &t.schmidt {
                                entries[c.index()].push(scale * l * r);
                            }
                        }
                    }
                }
            }
        }
        let sectors = model
            .charges()
            .filter_map(|c| {
                let e = std::mem::take(&mut entries[c.index()]);
                let w: f64 = e.iter().sum();
                (w > 0.0).then(|| Sector::new(c, w, e.into_iter().map(|x| x / w).collect()))
            })
            .collect();
        let context = match (&self.context, &other.context) {
            (Some(x), Some(y)) => Some(Context {
                a: x.a.iter().chain(&y.a).copied().collect(),
                b: x.b.iter().chain(&y.b).copied().collect(),
            }),
            _ => None,
        };
        BipartiteState::with_total(self.model.clone(), total, sectors, context)
    }

    /// Random state compatible with `context`: every admissible sector gets a
    /// random weight and a random Schmidt spectrum of rank at most `max_rank`.
    pub fn random<R: Rng + ?Sized>(
        model: Arc<AnyonModel>,
        context: &Context,
        max_rank: usize,
        rng: &mut R,
    ) -> Self {
        let dims_a = fusion_dims(&model, &context.a);
        let dims_b = fusion_dims(&model, &context.b);
        let mut sectors = Vec::new();
        for a in model.charges() {
            let cap = dims_a[a.index()]
                .clone()
                .min(dims_b[model.dual(a).index()].clone());
            if cap.is_zero() {
                continue;
            }
            let cap = usize::try_from(cap)
                .unwrap_or(usize::MAX)
                .min(max_rank.max(1));
            let rank = rng.random_range(1..=cap);
            let mut schmidt: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
            let s: f64 = schmidt.iter().sum();
            schmidt.iter_mut().for_each(|x| *x /= s);
            sectors.push(Sector::new(a, rng.random::<f64>() + 1e-3, schmidt));
        }
        let total: f64 = sectors.iter().map(|s| s.weight).sum();
        sectors.iter_mut().for_each(|s| s.weight /= total);
        BipartiteState::new(model, sectors, Some(context.clone())).expect("random state is valid")
    }
}

fn normalize_schmidt(model: &AnyonModel, charge: Charge, schmidt: Vec<f64>) -> Result<Vec<f64>> {
    if schmidt.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Validation(format!(
            "sector {} has a negative or non-finite Schmidt coefficient",
            model.label(charge)
        )));
    }
    let sum: f64 = schmidt.iter().sum();
    if (sum - 1.0).abs() > INPUT_TOLERANCE {
        return Err(Error::Validation(format!(
            "Schmidt coefficients of sector {} sum to {sum}, not 1",
            model.label(charge)
        )));
    }
    let mut kept: Vec<f64> = schmidt.into_iter().filter(|&x| x > ZERO_CUTOFF).collect();
    // stable: equal values keep their input order
    kept.sort_by(|x, y| y.total_cmp(x));
    let s: f64 = kept.iter().sum();
    Ok(kept.into_iter().map(|x| x / s).collect())
}

/// One letter of the i.i.d. source behind the `N`-copy state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub charge: Charge,
    pub index: usize,
    pub prob: f64,
}

/// Reduced-state data of the embedded `N`-copy state: the sector
/// distribution `q_c` and the per-copy symbol distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct NCopyEnsemble {
    pub n: usize,
    /// Indexed by charge.
    pub q: Vec<f64>,
    pub symbols: Vec<Symbol>,
}
