//! Entanglement functionals on [`BipartiteState`]s.

use std::sync::Arc;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fusion::fusion_dims;
use crate::model::{AnyonModel, Charge};
use crate::numeric::{big_to_f64, log2_big, shannon};
use crate::state::{BipartiteState, Context, Sector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub e1: f64,
    pub aee: f64,
    /// `sum_a p_a log d_a`.
    pub sector_term: f64,
    /// `(N, E1 of the N-copy state / N)`.
    pub ncopy_trace: Vec<(usize, f64)>,
}

impl EntanglementReport {
    pub fn compute(state: &BipartiteState, ns: impl IntoIterator<Item = usize>) -> Self {
        let e1 = e1(state);
        let sector_term = sector_term(state);
        let ncopy_trace = ns
            .into_iter()
            .map(|n| (n, e1_ncopy(state, n) / n as f64))
            .collect();
        EntanglementReport {
            e1,
            aee: e1 + sector_term,
            sector_term,
            ncopy_trace,
        }
    }
}

/// Single-copy entropy `H(p) + sum_a p_a H(lambda^(a))`.
pub fn e1(state: &BipartiteState) -> f64 {
    shannon(state.sectors().iter().map(|s| s.weight)) + schmidt_term(state)
}

fn schmidt_term(state: &BipartiteState) -> f64 {
    state
        .sectors()
        .iter()
        .map(|s| s.weight * shannon(s.schmidt.iter().copied()))
        .sum()
}

/// `sum_a p_a log d_a`.
pub fn sector_term(state: &BipartiteState) -> f64 {
    let m = state.model();
    state
        .sectors()
        .iter()
        .map(|s| s.weight * m.qdim(s.charge).log2())
        .sum()
}

/// Asymptotic entanglement entropy.
pub fn aee(state: &BipartiteState) -> f64 {
    e1(state) + sector_term(state)
}

/// Exact single-copy entropy of the embedded `N`-copy state.
pub fn e1_ncopy(state: &BipartiteState, n: usize) -> f64 {
    let m = state.model();
    let q = state.ncopy(n).q;
    let boundary: f64 = m.charges().map(|c| q[c.index()] * m.qdim(c).log2()).sum();
    let nf = n as f64;
    nf * (shannon(state.sectors().iter().map(|s| s.weight)) + sector_term(state)) - boundary
        + nf * schmidt_term(state)
}

fn primitive_or_vacuum(model: &AnyonModel, x: Charge) -> bool {
    x == model.vacuum() || model.is_primitive(x)
}

/// Maximally entangled state on `A = chain`, `B = chain-bar`.
pub fn mes(model: Arc<AnyonModel>, chain: &[Charge]) -> Result<BipartiteState> {
    mes_with(model, chain, &Limits::default())
}

/// As [`mes`], refusing sectors whose Schmidt rank exceeds `limits.enum_cap`.
pub fn mes_with(
    model: Arc<AnyonModel>,
    chain: &[Charge],
    limits: &Limits,
) -> Result<BipartiteState> {
    if let Some(&x) = chain.iter().find(|&&x| !primitive_or_vacuum(&model, x)) {
        log::warn!(
            "charge {} is not primitive; the state is built but need not be maximal",
            model.label(x)
        );
    }
    let dims = fusion_dims(&model, chain);
    let log_norm: f64 = chain.iter().map(|&x| model.qdim(x).log2()).sum();
    let mut sectors = Vec::new();
    for a in model.charges() {
        let dim = &dims[a.index()];
        if dim.bits() == 0 {
            continue;
        }
        let rank = u64::try_from(dim)
            .ok()
            .filter(|&r| r <= limits.enum_cap)
            .ok_or_else(|| Error::Size {
                what: format!("Schmidt rank of sector {}", model.label(a)),
                needed: dim.to_string(),
                cap: limits.enum_cap,
            })?;
        let p = (log2_big(dim) + model.qdim(a).log2() - log_norm).exp2();
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Validation(format!(
                "weight of sector {} is {p}",
                model.label(a)
            )));
        }
        let rank = rank as usize;
        sectors.push(Sector::new(a, p, vec![1.0 / rank as f64; rank]));
    }
    let context = Context::mirrored(&model, chain.to_vec());
    BipartiteState::new(model, sectors, Some(context))
}

/// `sum_i log d_{x_i}`, an upper bound on the AEE of any state with this content on A.
pub fn aee_upper_bound(model: &AnyonModel, chain: &[Charge]) -> Result<f64> {
    if let Some(&x) = chain.iter().find(|&&x| !primitive_or_vacuum(model, x)) {
        return Err(Error::Primitivity(model.label(x).to_string()));
    }
    Ok(chain.iter().map(|&x| model.qdim(x).log2()).sum())
}

/// `|AEE(psi_1 psi_2) - AEE(psi_1) - AEE(psi_2)|`.
pub fn check_additivity(s1: &BipartiteState, s2: &BipartiteState) -> Result<f64> {
    let joint = s1.compose(s2)?;
    Ok((aee(&joint) - aee(s1) - aee(s2)).abs())
}

/// `dim V` of a chain as a float; only for tests and reporting.
pub fn chain_dim(model: &AnyonModel, chain: &[Charge], c: Charge) -> f64 {
    big_to_f64(&fusion_dims(model, chain)[c.index()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const LOG_PHI: f64 = 0.694_241_913_630_617_3;

    fn fib() -> Arc<AnyonModel> {
        Arc::new(catalog::fibonacci())
    }

    fn state(model: &Arc<AnyonModel>, sectors: &[(&str, f64, &[f64])]) -> BipartiteState {
        let s = sectors
            .iter()
            .map(|(l, p, sch)| Sector::new(model.charge(l).unwrap(), *p, sch.to_vec()))
            .collect();
        BipartiteState::new(model.clone(), s, None).unwrap()
    }

    /// Shannon entropy of the explicit classical-quantum ensemble of the
    /// embedded `N`-copy state, enumerating every sequence of symbols.
    fn brute_e1_ncopy(s: &BipartiteState, n: usize) -> f64 {
        let m = s.model();
        let symbols = s.symbols();
        let mut entries = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let charges: Vec<Charge> = idx.iter().map(|&i| symbols[i].charge).collect();
            let prob: f64 = idx.iter().map(|&i| symbols[i].prob).product();
            let d_seq: f64 = charges.iter().map(|&a| m.qdim(a)).product();
            let dims = fusion_dims(m, &charges);
            for c in m.charges() {
                let k = big_to_f64(&dims[c.index()]) as usize;
                for _ in 0..k {
                    entries.push(prob * m.qdim(c) / d_seq);
                }
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return shannon(entries);
                }
                idx[pos] += 1;
                if idx[pos] < symbols.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn e1_examples() {
        let m = fib();
        assert_eq!(e1(&state(&m, &[("tau", 1.0, &[1.0])])), 0.0);
        assert!((e1(&state(&m, &[("1", 0.5, &[1.0]), ("tau", 0.5, &[1.0])])) - 1.0).abs() < 1e-15);
        assert!((e1(&state(&m, &[("tau", 1.0, &[0.5, 0.5])])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn aee_examples() {
        let m = fib();
        assert!((aee(&state(&m, &[("tau", 1.0, &[1.0])])) - LOG_PHI).abs() < 1e-12);
        assert!(
            (aee(&state(&m, &[("1", 0.5, &[1.0]), ("tau", 0.5, &[1.0])]))
                - 1.347_120_956_815_308_6)
                .abs()
                < 1e-12
        );
        let z3 = Arc::new(catalog::cyclic(3));
        let s = state(
            &z3,
            &[
                ("0", 0.2, &[0.5, 0.5]),
                ("1", 0.3, &[1.0]),
                ("2", 0.5, &[1.0]),
            ],
        );
        assert_eq!(aee(&s), e1(&s));
    }

    #[test]
    fn ncopy_entropy_examples() {
        let m = fib();
        let pair = state(&m, &[("tau", 1.0, &[1.0])]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let v = e1_ncopy(&pair, 2);
        assert!((v - (2.0 - 1.0 / phi) * LOG_PHI).abs() < 1e-12);
        assert!((v - shannon([0.381_966_011_250_105_1, 0.618_033_988_749_894_9])).abs() < 1e-12);
        assert!((v - 0.959_419).abs() < 1e-6);

        let s = state(&m, &[("1", 0.3, &[0.6, 0.4]), ("tau", 0.7, &[1.0])]);
        assert!((e1_ncopy(&s, 1) - e1(&s)).abs() < 1e-12);

        let gap = 100.0 * LOG_PHI - e1_ncopy(&pair, 100);
        assert!((0.0..=LOG_PHI + 1e-12).contains(&gap));
    }

    #[test]
    fn ncopy_entropy_matches_enumeration() {
        let fib = fib();
        let ising = Arc::new(catalog::ising());
        let su3 = Arc::new(catalog::su2_level(3));
        let states = [
            state(&fib, &[("1", 0.3, &[0.6, 0.4]), ("tau", 0.7, &[1.0])]),
            state(&fib, &[("tau", 1.0, &[1.0])]),
            state(
                &ising,
                &[
                    ("1", 0.2, &[1.0]),
                    ("sigma", 0.5, &[0.7, 0.3]),
                    ("psi", 0.3, &[1.0]),
                ],
            ),
            state(
                &su3,
                &[("1", 0.4, &[1.0]), ("2", 0.35, &[1.0]), ("3", 0.25, &[1.0])],
            ),
        ];
        for s in &states {
            for n in 1..=4 {
                let (fast, slow) = (e1_ncopy(s, n), brute_e1_ncopy(s, n));
                assert!((fast - slow).abs() < 1e-9, "n={n}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn mes_examples() {
        let m = fib();
        let tau = m.charge("tau").unwrap();
        let one = mes(m.clone(), &[tau]).unwrap();
        assert_eq!(one.sectors().len(), 1);
        assert!((aee(&one) - LOG_PHI).abs() < 1e-12);

        let two = mes(m.clone(), &[tau, tau]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((two.sectors()[0].weight - 1.0 / (phi * phi)).abs() < 1e-12);
        assert!((two.sectors()[1].weight - 1.0 / phi).abs() < 1e-12);
        assert!((aee(&two) - 1.388_484).abs() < 1e-6);

        let ising = Arc::new(catalog::ising());
        let sigma = ising.charge("sigma").unwrap();
        let ss = mes(ising.clone(), &[sigma, sigma]).unwrap();
        assert_eq!(ss.sectors().len(), 2);
        assert!(ss.sectors().iter().all(|s| (s.weight - 0.5).abs() < 1e-12));
        assert!((aee(&ss) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mes_attains_bound_on_primitive_chains() {
        let m = fib();
        let tau = m.charge("tau").unwrap();
        let chain = vec![tau; 12];
        let s = mes(m.clone(), &chain).unwrap();
        assert!((aee(&s) - 12.0 * LOG_PHI).abs() < 1e-9);
        assert!((aee(&s) - aee_upper_bound(&m, &chain).unwrap()).abs() < 1e-9);
        // Schmidt ranks are the fusion-space dimensions, 89 and 144
        assert_eq!(
            s.sectors()[1].schmidt.len(),
            chain_dim(&m, &chain, tau) as usize
        );
    }

    #[test]
    fn upper_bound_examples() {
        let m = fib();
        let tau = m.charge("tau").unwrap();
        assert!((aee_upper_bound(&m, &[tau, tau]).unwrap() - 2.0 * LOG_PHI).abs() < 1e-15);
        assert_eq!(aee_upper_bound(&m, &[m.vacuum(); 3]).unwrap(), 0.0);
        assert!(
            (aee_upper_bound(&m, &[tau]).unwrap() - aee(&mes(m.clone(), &[tau]).unwrap())).abs()
                < 1e-12
        );
        let ising = catalog::ising();
        let sigma = ising.charge("sigma").unwrap();
        assert!(matches!(
            aee_upper_bound(&ising, &[sigma]),
            Err(Error::Primitivity(_))
        ));
    }

    #[test]
    fn additivity_examples() {
        let m = fib();
        let pair = state(&m, &[("tau", 1.0, &[1.0])]);
        assert!(check_additivity(&pair, &pair).unwrap() <= 1e-9);
        let vac = state(&m, &[("1", 1.0, &[1.0])]);
        let s = state(&m, &[("1", 0.3, &[0.6, 0.4]), ("tau", 0.7, &[1.0])]);
        assert!(check_additivity(&vac, &s).unwrap() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tau = m.charge("tau").unwrap();
        let ctx = Context::mirrored(&m, vec![tau; 4]);
        for _ in 0..100 {
            let x = BipartiteState::random(m.clone(), &ctx, 3, &mut rng);
            let y = BipartiteState::random(m.clone(), &ctx, 3, &mut rng);
            assert!(check_additivity(&x, &y).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn report_is_consistent() {
        let m = fib();
        let s = state(&m, &[("1", 0.5, &[1.0]), ("tau", 0.5, &[1.0])]);
        let r = EntanglementReport::compute(&s, [1, 10, 100, 1000]);
        assert!((r.aee - r.e1 - r.sector_term).abs() < 1e-12);
        for w in r.ncopy_trace.windows(2) {
            assert!(w[0].1 <= r.aee + 1e-12);
            assert!((r.aee - w[1].1).abs() <= (r.aee - w[0].1).abs() + 1e-12);
        }
    }

    fn arb_state() -> impl Strategy<Value = BipartiteState> {
        (0u64..10_000, 1usize..=4, 0usize..3).prop_map(|(seed, len, which)| {
            let model = Arc::new(match which {
                0 => catalog::fibonacci(),
                1 => catalog::ising(),
                _ => catalog::su2_level(3),
            });
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pool: Vec<Charge> = model.charges().collect();
            let chain: Vec<Charge> = (0..len)
                .map(|_| pool[rand::Rng::random_range(&mut rng, 0..pool.len())])
                .collect();
            let ctx = Context::mirrored(&model, chain);
            BipartiteState::random(model, &ctx, 4, &mut rng)
        })
    }

    proptest! {
        #[test]
        fn superadditivity_gap_is_bounded(s in arb_state(), n in 1usize..400) {
            let log_dmax = s.model().max_qdim().log2();
            let gap = n as f64 * aee(&s) - e1_ncopy(&s, n);
            prop_assert!(gap >= -1e-9 && gap <= log_dmax + 1e-9);
            prop_assert!((e1_ncopy(&s, n) / n as f64 - aee(&s)).abs() <= log_dmax / n as f64 + 1e-9);
        }

        #[test]
        fn aee_is_faithful(s in arb_state()) {
            let v = aee(&s);
            prop_assert!(v >= -1e-12);
            prop_assert_eq!(v.abs() < 1e-12, s.is_separable());
        }

        #[test]
        fn trace_entropy_is_e1(s in arb_state()) {
            let blocks = s.partial_trace_spectrum(crate::state::Side::A);
            let total: f64 = blocks.iter().flat_map(|(_, v)| v.iter()).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            let h = shannon(blocks.iter().flat_map(|(_, v)| v.iter().copied()));
            prop_assert!((h - e1(&s)).abs() < 1e-12);
        }

        #[test]
        fn aee_respects_context_bound(seed in 0u64..10_000, len in 1usize..7) {
            let m = fib();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chain: Vec<Charge> = (0..len).map(|_| Charge::new(rand::Rng::random_range(&mut rng, 0..2))).collect();
            let bound = aee_upper_bound(&m, &chain).unwrap();
            let ctx = Context::mirrored(&m, chain);
            let s = BipartiteState::random(m, &ctx, 8, &mut rng);
            prop_assert!(aee(&s) <= bound + 1e-9);
        }

        #[test]
        fn random_states_are_additive(a in arb_state(), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ctx = a.context().cloned().unwrap();
            let b = BipartiteState::random(a.model_arc().clone(), &ctx, 3, &mut rng);
            prop_assert!(check_additivity(&a, &b).unwrap() <= 1e-9);
        }
    }
}
