//! Fusion spaces of anyon chains.
//!
//! A chain `a_1 ... a_n` with total charge `c` spans the space of fusion trees
//! `((a_1 a_2 -> b_1) a_3 -> b_2) ... a_n -> c`. Dimensions are counted
//! exactly with big integers by pushing a row vector through the fusion
//! matrices, `v <- v N_{a_k}`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::model::{AnyonModel, Charge};
use crate::numeric::log2_big;

/// An ordered anyon chain with a designated total charge.
#[derive(Debug, Clone)]
pub struct Chain<'m> {
    model: &'m AnyonModel,
    charges: Vec<Charge>,
    total: Charge,
}

impl<'m> Chain<'m> {
    pub fn new(model: &'m AnyonModel, charges: Vec<Charge>, total: Charge) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::Validation("a chain needs at least one anyon".into()));
        }
        let m = model.len();
        if charges.iter().chain([&total]).any(|c| c.index() >= m) {
            return Err(Error::Validation(
                "chain refers to a charge outside the model".into(),
            ));
        }
        Ok(Chain {
            model,
            charges,
            total,
        })
    }

    pub fn from_labels(
        model: &'m AnyonModel,
        labels: &[impl AsRef<str>],
        total: &str,
    ) -> Result<Self> {
        Self::new(model, model.charges_of(labels)?, model.charge(total)?)
    }

    pub fn model(&self) -> &'m AnyonModel {
        self.model
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    pub fn total(&self) -> Charge {
        self.total
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn dim(&self) -> BigUint {
        dim_fusion(self)
    }
}

/// One basis vector of a chain's fusion space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FusionTree {
    /// Intermediate charges `b_1 ... b_{n-2}`.
    pub internal: Vec<Charge>,
    /// 1-based multiplicity index at each of the `n-1` vertices.
    pub mults: Vec<u32>,
}

impl FusionTree {
    /// `(left, right, outcome, mu)` for every vertex, top to bottom.
    pub fn vertices(&self, chain: &Chain<'_>) -> Vec<(Charge, Charge, Charge, u32)> {
        let a = chain.charges();
        let n = a.len();
        (0..n.saturating_sub(1))
            .map(|k| {
                let left = if k == 0 { a[0] } else { self.internal[k - 1] };
                let out = if k == n - 2 {
                    chain.total()
                } else {
                    self.internal[k]
                };
                (left, a[k + 1], out, self.mults[k])
            })
            .collect()
    }
}

/// `dim V^c_{a_1...a_n}` for every `c`, indexed by charge. An empty chain
/// has the vacuum as its only outcome.
pub fn fusion_dims(model: &AnyonModel, charges: &[Charge]) -> Vec<BigUint> {
    let m = model.len();
    let mut v = vec![BigUint::zero(); m];
    match charges.split_first() {
        None => v[model.vacuum().index()] = BigUint::one(),
        Some((first, rest)) => {
            v[first.index()] = BigUint::one();
            for &a in rest {
                v = push_charge(model, &v, a);
            }
        }
    }
    v
}

/// `v N_a`: appends one anyon `a` to a chain whose outcome counts are `v`.
pub fn push_charge(model: &AnyonModel, v: &[BigUint], a: Charge) -> Vec<BigUint> {
    let mut next = vec![BigUint::zero(); model.len()];
    for b in model.charges() {
        let vb = &v[b.index()];
        if vb.is_zero() {
            continue;
        }
        for (c, n) in model.outcomes(b, a) {
            next[c.index()] += vb * n;
        }
    }
    next
}

pub fn dim_fusion(chain: &Chain<'_>) -> BigUint {
    fusion_dims(chain.model, &chain.charges)[chain.total.index()].clone()
}

/// Every fusion tree of `chain`, ordered lexicographically by
/// `(b_1, ..., b_{n-2}, mu_1, ..., mu_{n-1})`.
pub fn enumerate_trees(chain: &Chain<'_>, limits: &Limits) -> Result<Vec<FusionTree>> {
    let dim = dim_fusion(chain);
    if dim > BigUint::from(limits.enum_cap) {
        return Err(Error::Size {
            what: "fusion tree enumeration".into(),
            needed: dim.to_string(),
            cap: limits.enum_cap,
        });
    }
    let model = chain.model;
    let a = &chain.charges;
    let n = a.len();
    if n == 1 {
        return Ok(if a[0] == chain.total {
            vec![FusionTree {
                internal: vec![],
                mults: vec![],
            }]
        } else {
            vec![]
        });
    }

    // reachable[k][b]: an intermediate b at vertex output k can still reach the total
    let mut reachable = vec![vec![false; model.len()]; n - 1];
    reachable[n - 2][chain.total.index()] = true;
    for k in (0..n - 2).rev() {
        for b in model.charges() {
            reachable[k][b.index()] = model
                .outcomes(b, a[k + 2])
                .any(|(c, _)| reachable[k + 1][c.index()]);
        }
    }

    let mut out = Vec::with_capacity(dim.to_usize().unwrap_or(0));
    let mut internal = Vec::with_capacity(n - 2);
    let mut mults = Vec::with_capacity(n - 1);
    descend(
        model,
        a,
        &reachable,
        0,
        a[0],
        &mut internal,
        &mut mults,
        &mut out,
    );
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    model: &AnyonModel,
    a: &[Charge],
    reachable: &[Vec<bool>],
    k: usize,
    left: Charge,
    internal: &mut Vec<Charge>,
    mults: &mut Vec<u32>,
    out: &mut Vec<FusionTree>,
) {
    let last = k == a.len() - 2;
    for (c, n) in model.outcomes(left, a[k + 1]) {
        if !reachable[k][c.index()] {
            continue;
        }
        if !last {
            internal.push(c);
        }
        for mu in 1..=n {
            mults.push(mu);
            if last {
                out.push(FusionTree {
                    internal: internal.clone(),
                    mults: mults.clone(),
                });
            } else {
                descend(model, a, reachable, k + 1, c, internal, mults, out);
            }
            mults.pop();
        }
        if !last {
            internal.pop();
        }
    }
}

/// `|prod_i d_{a_i} - sum_b dim V^b_{a_1...a_n} d_b|`.
pub fn check_lemma1(model: &AnyonModel, charges: &[Charge]) -> f64 {
    let product: f64 = charges.iter().map(|&a| model.qdim(a)).product();
    let dims = fusion_dims(model, charges);
    let weighted: f64 = model
        .charges()
        .map(|b| crate::numeric::big_to_f64(&dims[b.index()]) * model.qdim(b))
        .sum();
    (product - weighted).abs()
}

/// Measured approach of `dim V^b_{a^n}` to `d_a^n d_b / D^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub a: Charge,
    pub b: Charge,
    /// `d_b / D^2`, the coefficient of `d_a^n`.
    pub leading_coefficient: f64,
    /// `(n, dim V^b_{a^n} D^2 / (d_a^n d_b) - 1)` for `n = 2..=n_max`.
    pub residuals: Vec<(usize, f64)>,
}

impl AsymptoticFit {
    /// Geometric decay check: the tail of `|r_n|` sits strictly below its head
    /// and the empirical per-step rate over the scan is below one.
    pub fn decays(&self) -> bool {
        let r: Vec<f64> = self.residuals.iter().map(|&(_, r)| r.abs()).collect();
        if r.len() < 3 {
            return true;
        }
        let third = (r.len() / 3).max(1);
        let head = r[..third].iter().copied().fold(0.0, f64::max);
        let tail = r[r.len() - third..].iter().copied().fold(0.0, f64::max);
        tail == 0.0 || (tail < head && self.rate().is_some_and(|q| q < 1.0))
    }

    /// Empirical geometric rate `(|r_last| / |r_first|)^{1/(n_last - n_first)}`.
    pub fn rate(&self) -> Option<f64> {
        let (&(n0, r0), &(n1, r1)) = (self.residuals.first()?, self.residuals.last()?);
        if n1 <= n0 || r0 == 0.0 {
            return None;
        }
        Some((r1.abs() / r0.abs()).powf(1.0 / (n1 - n0) as f64))
    }
}

pub fn asymptotic_scaling(
    model: &AnyonModel,
    a: Charge,
    b: Charge,
    n_max: usize,
) -> Result<AsymptoticFit> {
    if !model.is_primitive(a) {
        return Err(Error::Primitivity(model.label(a).to_string()));
    }
    let da = model.qdim(a).log2();
    let db = model.qdim(b).log2();
    let d2 = model.total_dim_sq().log2();
    let mut v = fusion_dims(model, &[a]);
    let mut residuals = Vec::new();
    for n in 2..=n_max {
        v = push_charge(model, &v, a);
        let log_ratio = log2_big(&v[b.index()]) + d2 - n as f64 * da - db;
        residuals.push((n, log_ratio.exp2() - 1.0));
    }
    Ok(AsymptoticFit {
        a,
        b,
        leading_coefficient: model.qdim(b) / model.total_dim_sq(),
        residuals,
    })
}

/// Sector distribution `q_c = sum_{a_1..a_N} p_{a_1}...p_{a_N} dim V^c_{a_1...a_N} d_c / (d_{a_1}...d_{a_N})`.
///
/// Evaluated by the recursion `w_c <- sum_{b,a} w_b (p_a / d_a) N_{ba}^c`,
/// `q_c = d_c w_c`, in `O(N m^2)`. `weights` is indexed by charge.
pub fn weighted_fusion_dp(model: &AnyonModel, weights: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(weights.len(), model.len(), "one weight per charge");
    assert!(n >= 1, "at least one copy");
    let scaled: Vec<f64> = model
        .charges()
        .map(|a| weights[a.index()] / model.qdim(a))
        .collect();
    let mut w = scaled.clone();
    for _ in 1..n {
        let mut next = vec![0.0; model.len()];
        for b in model.charges() {
            if w[b.index()] == 0.0 {
                continue;
            }
            for a in model.charges() {
                let pa = scaled[a.index()];
                if pa == 0.0 {
                    continue;
                }
                for (c, mult) in model.outcomes(b, a) {
                    next[c.index()] += w[b.index()] * pa * mult as f64;
                }
            }
        }
        w = next;
    }
    model
        .charges()
        .map(|c| model.qdim(c) * w[c.index()])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    const PHI: f64 = 1.618_033_988_749_895;

    fn chain<'m>(model: &'m AnyonModel, labels: &[&str], total: &str) -> Chain<'m> {
        Chain::from_labels(model, labels, total).unwrap()
    }

    /// Brute-force count straight from the defining sum over intermediate charges.
    fn naive_dim(model: &AnyonModel, a: &[Charge], total: Charge) -> u64 {
        fn go(model: &AnyonModel, left: Charge, rest: &[Charge], total: Charge) -> u64 {
            match rest.split_first() {
                None => u64::from(left == total),
                Some((&x, tail)) => model
                    .charges()
                    .map(|b| model.n(left, x, b) as u64 * go(model, b, tail, total))
                    .sum(),
            }
        }
        go(model, a[0], &a[1..], total)
    }

    #[test]
    fn small_dimensions() {
        let fib = catalog::fibonacci();
        let ising = catalog::ising();
        assert_eq!(
            dim_fusion(&chain(&fib, &["tau"; 4], "1")),
            BigUint::from(2u32)
        );
        assert_eq!(
            dim_fusion(&chain(&ising, &["sigma"; 4], "1")),
            BigUint::from(2u32)
        );
        assert_eq!(dim_fusion(&chain(&fib, &["tau"], "tau")), BigUint::one());
        assert_eq!(dim_fusion(&chain(&fib, &["tau"], "1")), BigUint::zero());
    }

    #[test]
    fn fibonacci_dims_follow_fibonacci_numbers() {
        let fib = catalog::fibonacci();
        let tau = fib.charge("tau").unwrap();
        let (mut f0, mut f1) = (0u64, 1u64); // F_{n-1}, F_n for n = 1
        for n in 1..60 {
            let dims = fusion_dims(&fib, &vec![tau; n]);
            assert_eq!(dims[0], BigUint::from(f0));
            assert_eq!(dims[1], BigUint::from(f1));
            (f0, f1) = (f1, f0 + f1);
        }
    }

    #[test]
    fn tree_enumeration_examples() {
        let fib = catalog::fibonacci();
        let (one, tau) = (fib.vacuum(), fib.charge("tau").unwrap());
        let limits = Limits::default();

        let t3 = enumerate_trees(&chain(&fib, &["tau"; 3], "tau"), &limits).unwrap();
        assert_eq!(t3.len(), 2);
        assert_eq!(t3[0].internal, vec![one]);
        assert_eq!(t3[1].internal, vec![tau]);

        let t4 = enumerate_trees(&chain(&fib, &["tau"; 4], "1"), &limits).unwrap();
        let internals: Vec<_> = t4.iter().map(|t| t.internal.clone()).collect();
        assert_eq!(internals, vec![vec![one, tau], vec![tau, tau]]);

        for model in [
            catalog::fibonacci(),
            catalog::ising(),
            catalog::su2_level(3),
        ] {
            for a in model.charges() {
                let c = Chain::new(&model, vec![a, model.dual(a)], model.vacuum()).unwrap();
                assert_eq!(enumerate_trees(&c, &limits).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn trees_are_valid_and_distinct() {
        let model = catalog::product(&catalog::fibonacci(), &catalog::ising());
        let labels = ["tau:sigma", "tau:1", "1:sigma", "tau:psi", "tau:sigma"];
        let limits = Limits::default();
        for total in model.charges() {
            let c = Chain::new(&model, model.charges_of(&labels).unwrap(), total).unwrap();
            let trees = enumerate_trees(&c, &limits).unwrap();
            assert_eq!(BigUint::from(trees.len()), dim_fusion(&c));
            assert!(trees.windows(2).all(|w| w[0] < w[1]));
            for t in &trees {
                for (l, r, o, mu) in t.vertices(&c) {
                    assert!(mu >= 1 && mu <= model.n(l, r, o));
                }
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let fib = catalog::fibonacci();
        let c = chain(&fib, &["tau"; 30], "1");
        let err = enumerate_trees(&c, &Limits { enum_cap: 1000 }).unwrap_err();
        assert!(matches!(err, Error::Size { .. }));
    }

    #[test]
    fn lemma1_examples() {
        let fib = catalog::fibonacci();
        let ising = catalog::ising();
        let tau = fib.charge("tau").unwrap();
        // phi^3 = 1 * 1 + 2 * phi
        assert!(check_lemma1(&fib, &[tau; 3]) <= 1e-12);
        assert_eq!(check_lemma1(&fib, &[tau]), 0.0);
        let sigma = ising.charge("sigma").unwrap();
        assert!(check_lemma1(&ising, &[sigma, sigma]) <= 1e-12);
        assert!((PHI.powi(3) - (1.0 + 2.0 * PHI)).abs() < 1e-12);
    }

    #[test]
    fn scaling_examples() {
        let fib = catalog::fibonacci();
        let tau = fib.charge("tau").unwrap();
        let fit = asymptotic_scaling(&fib, tau, fib.vacuum(), 20).unwrap();
        assert!(fit.residuals.last().unwrap().1.abs() < 1e-4);
        assert!(fit.decays());
        // closed form for Fibonacci: |r_n| = phi^{-2(n-1)}
        for &(n, r) in &fit.residuals {
            assert!((r.abs() - PHI.powi(-2 * (n as i32 - 1))).abs() < 1e-12);
        }
        let fit = asymptotic_scaling(&fib, tau, tau, 30).unwrap();
        assert!(fit.decays());
        assert!(fit.residuals.last().unwrap().1.abs() < 1e-10);

        let ising = catalog::ising();
        let sigma = ising.charge("sigma").unwrap();
        assert!(matches!(
            asymptotic_scaling(&ising, sigma, ising.vacuum(), 10),
            Err(Error::Primitivity(_))
        ));
    }

    #[test]
    fn weighted_dp_examples() {
        let fib = catalog::fibonacci();
        let q = weighted_fusion_dp(&fib, &[0.0, 1.0], 2);
        assert!((q[0] - 1.0 / (PHI * PHI)).abs() < 1e-12);
        assert!((q[1] - 1.0 / PHI).abs() < 1e-12);

        let q = weighted_fusion_dp(&fib, &[0.3, 0.7], 1);
        assert!((q[0] - 0.3).abs() < 1e-15 && (q[1] - 0.7).abs() < 1e-15);

        let q = weighted_fusion_dp(&fib, &[0.0, 1.0], 100);
        let d2 = fib.total_dim_sq();
        assert!((q[0] - 1.0 / d2).abs() < 1e-4);
        assert!((q[1] - PHI * PHI / d2).abs() < 1e-4);
        assert!((q[0] - 0.27639).abs() < 1e-4);
    }

    #[test]
    fn weighted_dp_long_runs_stay_normalized() {
        let model = catalog::su2_level(4);
        let w = [0.1, 0.2, 0.3, 0.25, 0.15];
        let q = weighted_fusion_dp(&model, &w, 10_000);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(q.iter().all(|&x| x >= 0.0));
    }

    fn model_strategy() -> impl Strategy<Value = AnyonModel> {
        prop_oneof![
            Just(catalog::fibonacci()),
            Just(catalog::ising()),
            Just(catalog::su2_level(3)),
            Just(catalog::product(&catalog::fibonacci(), &catalog::cyclic(2))),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dp_matches_tree_count(model in model_strategy(), idx in prop::collection::vec(0usize..16, 1..7), total in 0usize..16) {
            let charges: Vec<Charge> = idx.iter().map(|&i| Charge::new(i % model.len())).collect();
            let total = Charge::new(total % model.len());
            let c = Chain::new(&model, charges.clone(), total).unwrap();
            let trees = enumerate_trees(&c, &Limits::default()).unwrap();
            prop_assert_eq!(trees.len() as u64, naive_dim(&model, &charges, total));
            prop_assert_eq!(BigUint::from(trees.len()), dim_fusion(&c));
        }

        #[test]
        fn dims_invariant_under_permutation(model in model_strategy(), idx in prop::collection::vec(0usize..16, 1..8), seed in any::<u64>()) {
            let charges: Vec<Charge> = idx.iter().map(|&i| Charge::new(i % model.len())).collect();
            let mut shuffled = charges.clone();
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(fusion_dims(&model, &charges), fusion_dims(&model, &shuffled));
        }

        #[test]
        fn lemma1_holds(model in model_strategy(), idx in prop::collection::vec(0usize..16, 1..9)) {
            let charges: Vec<Charge> = idx.iter().map(|&i| Charge::new(i % model.len())).collect();
            let scale: f64 = charges.iter().map(|&a| model.qdim(a)).product();
            prop_assert!(check_lemma1(&model, &charges) <= 1e-9 * scale);
        }

        #[test]
        fn dp_output_is_a_distribution(raw in prop::collection::vec(0.0f64..1.0, 3), n in 1usize..400) {
            let model = catalog::ising();
            let s: f64 = raw.iter().sum::<f64>().max(1e-9);
            let w: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let q = weighted_fusion_dp(&model, &w, n);
            prop_assert!((q.iter().sum::<f64>() - w.iter().sum::<f64>()).abs() < 1e-9);
        }
    }
}
