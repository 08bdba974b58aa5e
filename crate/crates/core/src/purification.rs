//! States with arbitrary total charge and their purification.
//!
//! A state of total charge `c` has amplitude blocks `M_{ab mu}` on
//! `H_A^a (x) H_B^b (x) V_ab^c`. Purification appends a reference charge
//! `c-bar` (rightmost, on the B side) through the one-dimensional space
//! `V_{c c-bar}^1`; amplitudes are unchanged, only the charge bookkeeping moves.
//! The reference never takes part in either party's reduced state.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::entanglement::e1_ncopy;
use crate::error::{Error, Result};
use crate::model::{AnyonModel, Charge};
use crate::state::{BipartiteState, Sector, Side, INPUT_TOLERANCE, ZERO_CUTOFF};

/// Largest copy number accepted by [`GeneralState::aee_numeric`].
pub const MAX_NUMERIC_COPIES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub a: Charge,
    pub b: Charge,
    /// Fusion-channel index, `1..=N_ab^c`.
    pub mu: u32,
    /// Rows index `H_A^a`, columns index `H_B^b`.
    pub amp: DMatrix<f64>,
}

/// One independently prepared system with a definite total charge.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargedState {
    pub total: Charge,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
pub struct GeneralState {
    model: Arc<AnyonModel>,
    factors: Vec<ChargedState>,
    purified: bool,
}

impl GeneralState {
    /// Validates block labels and shapes and normalizes the amplitudes.
    pub fn new(model: Arc<AnyonModel>, total: Charge, blocks: Vec<Block>) -> Result<Self> {
        let m = model.len();
        if total.index() >= m {
            return Err(Error::Validation("total charge outside the model".into()));
        }
        if blocks.is_empty() {
            return Err(Error::Validation("state has no amplitude blocks".into()));
        }
        let mut rows: Vec<Option<usize>> = vec![None; m];
        let mut cols: Vec<Option<usize>> = vec![None; m];
        let mut seen = Vec::new();
        let mut norm = 0.0;
        for blk in &blocks {
            if blk.a.index() >= m || blk.b.index() >= m {
                return Err(Error::Validation("block charge outside the model".into()));
            }
            let (la, lb) = (model.label(blk.a), model.label(blk.b));
            let mult = model.n(blk.a, blk.b, total);
            if blk.mu < 1 || blk.mu > mult {
                return Err(Error::Validation(format!(
                    "block ({la}, {lb}) has channel {} but N = {mult}",
                    blk.mu
                )));
            }
            if seen.contains(&(blk.a, blk.b, blk.mu)) {
                return Err(Error::Validation(format!(
                    "block ({la}, {lb}, {}) listed twice",
                    blk.mu
                )));
            }
            seen.push((blk.a, blk.b, blk.mu));
            if blk.amp.nrows() == 0
                || blk.amp.ncols() == 0
                || blk.amp.iter().any(|x| !x.is_finite())
            {
                return Err(Error::Validation(format!(
                    "block ({la}, {lb}) has an empty or non-finite matrix"
                )));
            }
            for (slot, len, what) in [
                (&mut rows[blk.a.index()], blk.amp.nrows(), la),
                (&mut cols[blk.b.index()], blk.amp.ncols(), lb),
            ] {
                match slot {
                    Some(prev) if *prev != len => {
                        return Err(Error::Validation(format!(
                            "inconsistent local dimension for charge {what}"
                        )))
                    }
                    _ => *slot = Some(len),
                }
            }
            norm += blk.amp.norm_squared();
        }
        if (norm - 1.0).abs() > INPUT_TOLERANCE {
            return Err(Error::Validation(format!(
                "squared amplitudes sum to {norm}, not 1"
            )));
        }
        let scale = norm.sqrt();
        let mut blocks = blocks;
        for blk in &mut blocks {
            blk.amp /= scale;
        }
        blocks.sort_by_key(|b| (b.a, b.b, b.mu));
        Ok(GeneralState {
            model,
            factors: vec![ChargedState { total, blocks }],
            purified: false,
        })
    }

    /// The same state written in block form: sector `a` becomes the block
    /// `(a, a-bar)` holding `sqrt(p_a lambda)` on the diagonal.
    pub fn from_bipartite(state: &BipartiteState) -> Self {
        let blocks = state
            .sectors()
            .iter()
            .map(|s| {
                let diag: Vec<f64> = s.schmidt.iter().map(|l| (s.weight * l).sqrt()).collect();
                Block {
                    a: s.charge,
                    b: state.partner(s.charge),
                    mu: 1,
                    amp: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
                }
            })
            .collect();
        GeneralState::new(state.model_arc().clone(), state.total(), blocks)
            .expect("valid state converts")
    }

    /// Random amplitudes on every admissible block; local dimensions up to `max_dim`.
    pub fn random<R: Rng + ?Sized>(
        model: Arc<AnyonModel>,
        total: Charge,
        max_dim: usize,
        rng: &mut R,
    ) -> Self {
        let m = model.len();
        let dims_a: Vec<usize> = (0..m)
            .map(|_| rng.random_range(1..=max_dim.max(1)))
            .collect();
        let dims_b: Vec<usize> = (0..m)
            .map(|_| rng.random_range(1..=max_dim.max(1)))
            .collect();
        let mut blocks = Vec::new();
        for a in model.charges() {
            for b in model.charges() {
                for mu in 1..=model.n(a, b, total) {
                    let amp = DMatrix::from_fn(dims_a[a.index()], dims_b[b.index()], |_, _| {
                        rng.random_range(-1.0..1.0)
                    });
                    blocks.push(Block { a, b, mu, amp });
                }
            }
        }
        let norm: f64 = blocks.iter().map(|b| b.amp.norm_squared()).sum();
        for blk in &mut blocks {
            blk.amp /= norm.sqrt();
        }
        GeneralState::new(model, total, blocks).expect("random state is valid")
    }

    pub fn model(&self) -> &AnyonModel {
        &self.model
    }

    pub fn factors(&self) -> &[ChargedState] {
        &self.factors
    }

    pub fn is_purified(&self) -> bool {
        self.purified
    }

    /// Total charge of everything including the reference.
    pub fn total(&self) -> Charge {
        match self.factors.as_slice() {
            [f] if !self.purified => f.total,
            _ => self.model.vacuum(),
        }
    }

    /// Reference charges attached by purification, one per non-vacuum factor.
    pub fn references(&self) -> Vec<Charge> {
        if !self.purified {
            return Vec::new();
        }
        let vac = self.model.vacuum();
        self.factors
            .iter()
            .filter(|f| f.total != vac)
            .map(|f| self.model.dual(f.total))
            .collect()
    }

    /// Attaches the reference anti-charge. A vacuum state is returned unchanged.
    pub fn purify(&self) -> GeneralState {
        let mut out = self.clone();
        if self.total() != self.model.vacuum() {
            out.purified = true;
        }
        out
    }

    fn is_closed(&self) -> bool {
        self.purified || self.total() == self.model.vacuum()
    }

    /// The reduced state on one side, written as a sector spectrum.
    pub fn side_view(&self, side: Side) -> Result<BipartiteState> {
        let mut views = self
            .factors
            .iter()
            .map(|f| factor_view(&self.model, f, side));
        let first = views.next().expect("at least one factor")?;
        views.try_fold(first, |acc, v| acc.compose(&v?))
    }

    /// `E1` of the reduced state of `N` copies on `side`, divided by `N`, for `N = 1..=n_max`.
    pub fn aee_numeric(&self, side: Side, n_max: usize) -> Result<Vec<(usize, f64)>> {
        if n_max > MAX_NUMERIC_COPIES {
            return Err(Error::Size {
                what: "copies in the numeric AEE scan".into(),
                needed: n_max.to_string(),
                cap: MAX_NUMERIC_COPIES as u64,
            });
        }
        let view = self.side_view(side)?;
        Ok((1..=n_max)
            .map(|n| (n, e1_ncopy(&view, n) / n as f64))
            .collect())
    }

    /// Two closed (purified or vacuum) systems side by side.
    pub fn combine_purified(&self, other: &GeneralState) -> Result<GeneralState> {
        if !self.model.same_as(&other.model) {
            return Err(Error::ModelMismatch);
        }
        if !self.is_closed() || !other.is_closed() {
            return Err(Error::Validation(
                "only purified or vacuum-charge states can be combined".into(),
            ));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(GeneralState {
            model: self.model.clone(),
            factors,
            purified: self.purified || other.purified,
        })
    }

    /// Real inner product; zero across different charge structures.
    pub fn inner(&self, other: &GeneralState) -> Result<f64> {
        if !self.model.same_as(&other.model) {
            return Err(Error::ModelMismatch);
        }
        if self.factors.len() != other.factors.len() || self.purified != other.purified {
            return Ok(0.0);
        }
        let mut product = 1.0;
        for (f, g) in self.factors.iter().zip(&other.factors) {
            if f.total != g.total {
                return Ok(0.0);
            }
            let mut sum = 0.0;
            for x in &f.blocks {
                if let Some(y) = g
                    .blocks
                    .iter()
                    .find(|y| (y.a, y.b, y.mu) == (x.a, x.b, x.mu))
                {
                    if x.amp.shape() != y.amp.shape() {
                        return Err(Error::Validation(
                            "local dimensions differ between the states".into(),
                        ));
                    }
                    sum += x.amp.dot(&y.amp);
                }
            }
            product *= sum;
        }
        Ok(product)
    }
}

fn factor_view(model: &Arc<AnyonModel>, f: &ChargedState, side: Side) -> Result<BipartiteState> {
    let mut rho: Vec<Option<DMatrix<f64>>> = vec![None; model.len()];
    for blk in &f.blocks {
        let (charge, part) = match side {
            Side::A => (blk.a, &blk.amp * blk.amp.transpose()),
            Side::B => (blk.b, blk.amp.transpose() * &blk.amp),
        };
        let slot = &mut rho[charge.index()];
        *slot = Some(match slot.take() {
            Some(acc) => acc + part,
            None => part,
        });
    }
    let mut sectors = Vec::new();
    for c in model.charges() {
        let Some(r) = rho[c.index()].take() else {
            continue;
        };
        let weight = r.trace();
        if weight <= ZERO_CUTOFF {
            continue;
        }
        let eig = SymmetricEigen::new(r).eigenvalues;
        let mut schmidt: Vec<f64> = eig.iter().map(|&x| x.max(0.0) / weight).collect();
        let sum: f64 = schmidt.iter().sum();
        schmidt.iter_mut().for_each(|x| *x /= sum);
        sectors.push(Sector::new(c, weight, schmidt));
    }
    let total: f64 = sectors.iter().map(|s| s.weight).sum();
    sectors.iter_mut().for_each(|s| s.weight /= total);
    BipartiteState::new(model.clone(), sectors, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::entanglement::{aee, e1_ncopy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one(model: &AnyonModel, a: &str, b: &str) -> Block {
        Block {
            a: model.charge(a).unwrap(),
            b: model.charge(b).unwrap(),
            mu: 1,
            amp: DMatrix::from_element(1, 1, 1.0),
        }
    }

    fn ising_psi() -> GeneralState {
        let m = Arc::new(catalog::ising());
        let psi = m.charge("psi").unwrap();
        GeneralState::new(m.clone(), psi, vec![one(&m, "sigma", "sigma")]).unwrap()
    }

    #[test]
    fn purify_examples() {
        let fib = Arc::new(catalog::fibonacci());
        let tau = fib.charge("tau").unwrap();
        let pair = GeneralState::from_bipartite(&BipartiteState::pure_sector(fib.clone(), tau));
        let p = pair.purify();
        assert!(!p.is_purified());
        assert_eq!(p.factors(), pair.factors());

        let s = ising_psi().purify();
        assert!(s.is_purified());
        assert_eq!(s.total(), s.model().vacuum());
        assert_eq!(s.references(), vec![s.model().charge("psi").unwrap()]);

        let t = GeneralState::new(fib.clone(), tau, vec![one(&fib, "tau", "tau")])
            .unwrap()
            .purify();
        assert_eq!(t.references(), vec![tau]);
        assert_eq!(fib.n(tau, fib.dual(tau), fib.vacuum()), 1);
    }

    #[test]
    fn rejects_invalid_blocks() {
        let m = Arc::new(catalog::ising());
        let psi = m.charge("psi").unwrap();
        assert!(GeneralState::new(m.clone(), psi, vec![one(&m, "sigma", "psi")]).is_err());
        let mut b = one(&m, "sigma", "sigma");
        b.mu = 2;
        assert!(GeneralState::new(m.clone(), psi, vec![b]).is_err());
        let mut b = one(&m, "sigma", "sigma");
        b.amp *= 2.0;
        assert!(GeneralState::new(m.clone(), psi, vec![b]).is_err());
    }

    #[test]
    fn vacuum_states_are_side_symmetric() {
        let fib = Arc::new(catalog::fibonacci());
        let tau = fib.charge("tau").unwrap();
        let s = BipartiteState::new(
            fib.clone(),
            vec![
                Sector::new(fib.vacuum(), 0.5, vec![1.0]),
                Sector::new(tau, 0.5, vec![1.0]),
            ],
            None,
        )
        .unwrap();
        let g = GeneralState::from_bipartite(&s);
        let (a, b) = (
            g.aee_numeric(Side::A, 50).unwrap(),
            g.aee_numeric(Side::B, 50).unwrap(),
        );
        for ((n, x), (_, y)) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
            assert!((x - e1_ncopy(&s, *n) / *n as f64).abs() < 1e-12);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let random = GeneralState::random(fib.clone(), fib.vacuum(), 3, &mut rng);
        let (a, b) = (
            random.aee_numeric(Side::A, 20).unwrap(),
            random.aee_numeric(Side::B, 20).unwrap(),
        );
        for ((_, x), (_, y)) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_trace_matches_closed_form() {
        let fib = Arc::new(catalog::fibonacci());
        let tau = fib.charge("tau").unwrap();
        let g = GeneralState::from_bipartite(&BipartiteState::pure_sector(fib, tau));
        let t = g.aee_numeric(Side::A, 3).unwrap();
        assert_eq!(t[0].1, 0.0);
        assert!((t[1].1 - 0.959_419 / 2.0).abs() < 1e-6);
    }

    #[test]
    fn charged_ising_trace_is_finite() {
        let m = Arc::new(catalog::ising());
        let sigma = m.charge("sigma").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = GeneralState::random(m, sigma, 2, &mut rng).purify();
        let (a, b) = (
            g.aee_numeric(Side::A, 3).unwrap(),
            g.aee_numeric(Side::B, 3).unwrap(),
        );
        assert!(a.iter().chain(&b).all(|(_, v)| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn copy_cap() {
        let g = ising_psi();
        assert!(matches!(
            g.aee_numeric(Side::A, MAX_NUMERIC_COPIES + 1),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn combine_examples() {
        let fib = Arc::new(catalog::fibonacci());
        let tau = fib.charge("tau").unwrap();
        let s1 = BipartiteState::new(
            fib.clone(),
            vec![
                Sector::new(fib.vacuum(), 0.3, vec![0.6, 0.4]),
                Sector::new(tau, 0.7, vec![1.0]),
            ],
            None,
        )
        .unwrap();
        let s2 = BipartiteState::pure_sector(fib.clone(), tau);
        let joint = GeneralState::from_bipartite(&s1)
            .combine_purified(&GeneralState::from_bipartite(&s2))
            .unwrap();
        let composed = s1.compose(&s2).unwrap();
        assert!((aee(&joint.side_view(Side::A).unwrap()) - aee(&composed)).abs() < 1e-12);

        let p = ising_psi().purify();
        let both = p.combine_purified(&p).unwrap();
        assert_eq!(both.total(), both.model().vacuum());
        let view = both.side_view(Side::A).unwrap();
        assert_eq!(view.sectors().len(), 2);
        assert!(view
            .sectors()
            .iter()
            .all(|s| (s.weight - 0.5).abs() < 1e-12));

        let vac = GeneralState::from_bipartite(&BipartiteState::pure_sector(
            p.model.clone(),
            p.model().vacuum(),
        ));
        let same = p.combine_purified(&vac).unwrap();
        assert_eq!(
            same.side_view(Side::B).unwrap().sectors(),
            p.side_view(Side::B).unwrap().sectors()
        );

        assert!(matches!(
            ising_psi().combine_purified(&p),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            p.combine_purified(&GeneralState::from_bipartite(&s2)),
            Err(Error::ModelMismatch)
        ));
    }

    #[test]
    fn purification_preserves_inner_products() {
        let m = Arc::new(catalog::ising());
        let sigma = m.charge("sigma").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = GeneralState::random(m.clone(), sigma, 2, &mut rng);
            let mut y = x.clone();
            for blk in &mut y.factors[0].blocks {
                blk.amp = blk.amp.map(|v| v + 0.1);
            }
            let norm: f64 = y.factors[0]
                .blocks
                .iter()
                .map(|b| b.amp.norm_squared())
                .sum();
            let y = GeneralState::new(
                m.clone(),
                sigma,
                y.factors[0]
                    .blocks
                    .iter()
                    .map(|b| Block {
                        amp: &b.amp / norm.sqrt(),
                        ..b.clone()
                    })
                    .collect(),
            )
            .unwrap();
            let before = x.inner(&y).unwrap();
            let after = x.purify().inner(&y.purify()).unwrap();
            assert!((before - after).abs() < 1e-15);
            assert!((x.purify().inner(&x.purify()).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
