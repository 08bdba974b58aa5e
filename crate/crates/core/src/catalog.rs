//! Built-in anyon models and a generator for random valid fusion rings.

use rand::Rng;

use crate::model::{AnyonModel, Charge};

fn build(
    labels: Vec<String>,
    vacuum: usize,
    rule: impl Fn(usize, usize, usize) -> u32,
) -> AnyonModel {
    let m = labels.len();
    let mut fusion = vec![0u32; m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                fusion[(a * m + b) * m + c] = rule(a, b, c);
            }
        }
    }
    AnyonModel::from_table(labels, vacuum, fusion).expect("built-in fusion rules are valid")
}

/// `{1}`.
pub fn trivial() -> AnyonModel {
    build(vec!["1".into()], 0, |_, _, _| 1)
}

/// `{1, tau}` with `tau x tau = 1 + tau`.
pub fn fibonacci() -> AnyonModel {
    build(vec!["1".into(), "tau".into()], 0, |a, b, c| match (a, b) {
        (0, x) | (x, 0) => u32::from(x == c),
        _ => 1,
    })
}

/// `{1, sigma, psi}` with `sigma x sigma = 1 + psi`, `sigma x psi = sigma`, `psi x psi = 1`.
pub fn ising() -> AnyonModel {
    build(
        vec!["1".into(), "sigma".into(), "psi".into()],
        0,
        |a, b, c| {
            let out: &[usize] = match (a, b) {
                (0, x) | (x, 0) => return u32::from(x == c),
                (1, 1) => &[0, 2],
                (1, 2) | (2, 1) => &[1],
                _ => &[0],
            };
            u32::from(out.contains(&c))
        },
    )
}

/// Group ring of `Z_n`; every charge is abelian.
pub fn cyclic(n: usize) -> AnyonModel {
    assert!(n >= 1);
    build((0..n).map(|k| k.to_string()).collect(), 0, |a, b, c| {
        u32::from((a + b) % n == c)
    })
}

/// Truncated `SU(2)_k` fusion rules; charge labels are `2j` for spin `j = 0, 1/2, ..., k/2`.
pub fn su2_level(k: usize) -> AnyonModel {
    build((0..=k).map(|j| j.to_string()).collect(), 0, |a, b, c| {
        let ok = (a + b + c) % 2 == 0 && c >= a.abs_diff(b) && c <= (a + b).min(2 * k - a - b);
        u32::from(ok)
    })
}

/// Deligne-style product: `N_{(a,b)(a',b')}^{(c,c')} = N_{aa'}^c N_{bb'}^{c'}`.
pub fn product(left: &AnyonModel, right: &AnyonModel) -> AnyonModel {
    let mr = right.len();
    let labels = left
        .labels()
        .iter()
        .flat_map(|l| right.labels().iter().map(move |r| format!("{l}:{r}")))
        .collect();
    let vacuum = left.vacuum().index() * mr + right.vacuum().index();
    build(labels, vacuum, |a, b, c| {
        let split = |x: usize| (Charge::new(x / mr), Charge::new(x % mr));
        let ((a1, a2), (b1, b2), (c1, c2)) = (split(a), split(b), split(c));
        left.n(a1, b1, c1) * right.n(a2, b2, c2)
    })
}

/// A random valid model: one or two factors drawn from cyclic groups,
/// `SU(2)_k` for small `k`, Fibonacci and Ising.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R) -> AnyonModel {
    fn factor<R: Rng + ?Sized>(rng: &mut R) -> AnyonModel {
        match rng.random_range(0..4) {
            0 => cyclic(rng.random_range(2..=4)),
            1 => su2_level(rng.random_range(1..=5)),
            2 => fibonacci(),
            _ => ising(),
        }
    }
    let first = factor(rng);
    if rng.random_bool(0.5) {
        product(&first, &factor(rng))
    } else {
        first
    }
}
