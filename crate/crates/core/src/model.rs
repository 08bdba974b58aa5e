//! Anyon models: charge sets, fusion multiplicities, duals and quantum dimensions.
//!
//! A model is loaded from a sparse description ([`ModelDescription`]) and validated
//! against the fusion-ring axioms before anything else can use it. Duals and
//! quantum dimensions are always derived from the fusion tensor. After
//! construction an [`AnyonModel`] is immutable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};

/// Power-iteration tolerance on the normalized Perron vector.
pub const PERRON_TOLERANCE: f64 = 1e-12;
/// Iteration cap for the Perron eigensolve.
pub const PERRON_MAX_ITER: usize = 100_000;
/// Allowed residual in `d_a d_b = sum_c N_ab^c d_c`.
pub const DIMENSION_TOLERANCE: f64 = 1e-9;

/// Index of a charge inside its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Charge(usize);

impl Charge {
    pub const fn new(index: usize) -> Self {
        Charge(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

/// On-disk model description. Unlisted fusion triples are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub charges: Vec<String>,
    pub vacuum: String,
    /// Keys are `"a,b"`, values map each outcome `c` to `N_ab^c`.
    pub fusion: BTreeMap<String, BTreeMap<String, u32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnyonModel {
    labels: Vec<String>,
    vacuum: Charge,
    dual: Vec<Charge>,
    /// Flattened `N[a][b][c]` at `(a * m + b) * m + c`.
    fusion: Vec<u32>,
    qdim: Vec<f64>,
    total_dim_sq: f64,
}

impl AnyonModel {
    /// Builds and validates a model from a dense fusion table.
    pub fn from_table(labels: Vec<String>, vacuum: usize, fusion: Vec<u32>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::axiom(Axiom::NonEmpty, "model declares no charges"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::axiom(
                    Axiom::DistinctLabels,
                    format!("`{l}` declared twice"),
                ));
            }
        }
        if vacuum >= m {
            return Err(Error::axiom(Axiom::Vacuum, "vacuum index out of range"));
        }
        if fusion.len() != m * m * m {
            return Err(Error::Validation(format!(
                "fusion table has {} entries, expected {}",
                fusion.len(),
                m * m * m
            )));
        }
        let at = |a: usize, b: usize, c: usize| fusion[(a * m + b) * m + c];

        for (a, label) in labels.iter().enumerate() {
            for b in 0..m {
                let want = u32::from(a == b);
                if at(vacuum, a, b) != want || at(a, vacuum, b) != want {
                    return Err(Error::axiom(
                        Axiom::VacuumNeutrality,
                        format!("vacuum x {label} must give exactly {label}"),
                    ));
                }
            }
        }

        let mut dual = Vec::with_capacity(m);
        for (a, label) in labels.iter().enumerate() {
            let partners: Vec<usize> = (0..m).filter(|&b| at(a, b, vacuum) > 0).collect();
            match partners.as_slice() {
                [b] if at(a, *b, vacuum) == 1 => dual.push(Charge(*b)),
                _ => {
                    return Err(Error::axiom(
                        Axiom::UniqueDual,
                        format!("{label} needs exactly one anti-charge with N = 1"),
                    ))
                }
            }
        }

        for a in 0..m {
            for b in 0..a {
                for c in 0..m {
                    if at(a, b, c) != at(b, a, c) {
                        return Err(Error::axiom(
                            Axiom::Commutativity,
                            format!(
                                "N[{a}][{b}][{c}] != N[{b}][{a}][{c}]",
                                a = labels[a],
                                b = labels[b],
                                c = labels[c]
                            ),
                        ));
                    }
                }
            }
        }

        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let left: u64 = (0..m)
                            .map(|e| at(a, b, e) as u64 * at(e, c, d) as u64)
                            .sum();
                        let right: u64 = (0..m)
                            .map(|f| at(a, f, d) as u64 * at(b, c, f) as u64)
                            .sum();
                        if left != right {
                            return Err(Error::axiom(
                                Axiom::Associativity,
                                format!(
                                    "({a} x {b}) x {c} and {a} x ({b} x {c}) disagree on {d}",
                                    a = labels[a],
                                    b = labels[b],
                                    c = labels[c],
                                    d = labels[d]
                                ),
                            ));
                        }
                    }
                }
            }
        }

        for a in 0..m {
            if dual[dual[a].0].0 != a {
                return Err(Error::axiom(
                    Axiom::UniqueDual,
                    format!("dual of {} is not an involution", labels[a]),
                ));
            }
        }

        let mut model = AnyonModel {
            labels,
            vacuum: Charge(vacuum),
            dual,
            fusion,
            qdim: Vec::new(),
            total_dim_sq: 0.0,
        };
        model.qdim = quantum_dimensions(&model)?;
        model.total_dim_sq = model.qdim.iter().map(|d| d * d).sum();
        model.check_dimensions()?;
        Ok(model)
    }

    pub fn from_description(desc: &ModelDescription) -> Result<Self> {
        let m = desc.charges.len();
        let lookup = |label: &str| -> Result<usize> {
            desc.charges.iter().position(|l| l == label).ok_or_else(|| {
                Error::axiom(
                    Axiom::KnownLabels,
                    format!("`{label}` is not a declared charge"),
                )
            })
        };
        let vacuum = desc
            .charges
            .iter()
            .position(|l| *l == desc.vacuum)
            .ok_or_else(|| {
                Error::axiom(
                    Axiom::Vacuum,
                    format!("vacuum `{}` is not a declared charge", desc.vacuum),
                )
            })?;
        let mut fusion = vec![0u32; m * m * m];
        for (key, outcomes) in &desc.fusion {
            let (a, b) = key.split_once(',').ok_or_else(|| {
                Error::Validation(format!("fusion key `{key}` is not of the form \"a,b\""))
            })?;
            let (a, b) = (lookup(a.trim())?, lookup(b.trim())?);
            for (c, &n) in outcomes {
                let c = lookup(c.trim())?;
                fusion[(a * m + b) * m + c] = n;
            }
        }
        Self::from_table(desc.charges.clone(), vacuum, fusion)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let desc: ModelDescription = serde_json::from_str(text)?;
        Self::from_description(&desc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Sparse description listing every non-zero triple.
    pub fn to_description(&self) -> ModelDescription {
        let mut fusion = BTreeMap::new();
        for a in self.charges() {
            for b in self.charges() {
                let outcomes: BTreeMap<String, u32> = self
                    .outcomes(a, b)
                    .map(|(c, n)| (self.label(c).to_string(), n))
                    .collect();
                if !outcomes.is_empty() {
                    fusion.insert(format!("{},{}", self.label(a), self.label(b)), outcomes);
                }
            }
        }
        ModelDescription {
            charges: self.labels.clone(),
            vacuum: self.label(self.vacuum).to_string(),
            fusion,
        }
    }

    fn check_dimensions(&self) -> Result<()> {
        for a in self.charges() {
            let d = self.qdim(a);
            if d < 1.0 - DIMENSION_TOLERANCE {
                return Err(Error::axiom(
                    Axiom::DimensionConsistency,
                    format!("d_{} = {d} < 1", self.label(a)),
                ));
            }
            if (d - self.qdim(self.dual(a))).abs() > DIMENSION_TOLERANCE {
                return Err(Error::axiom(
                    Axiom::DimensionConsistency,
                    format!(
                        "d_{0} differs from the dimension of its dual",
                        self.label(a)
                    ),
                ));
            }
        }
        let residual = self.dimension_residual();
        if residual > DIMENSION_TOLERANCE {
            return Err(Error::Numeric(format!(
                "quantum dimensions violate d_a d_b = sum N d_c by {residual:e}"
            )));
        }
        Ok(())
    }

    /// `max_{a,b} |d_a d_b - sum_c N_ab^c d_c|`.
    pub fn dimension_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in self.charges() {
            for b in self.charges() {
                let rhs: f64 = self
                    .outcomes(a, b)
                    .map(|(c, n)| n as f64 * self.qdim(c))
                    .sum();
                worst = worst.max((self.qdim(a) * self.qdim(b) - rhs).abs());
            }
        }
        worst
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn charges(&self) -> impl Iterator<Item = Charge> + Clone {
        (0..self.labels.len()).map(Charge)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Charge) -> &str {
        &self.labels[a.0]
    }

    pub fn charge(&self, label: &str) -> Result<Charge> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Charge)
            .ok_or_else(|| Error::UnknownCharge(label.to_string()))
    }

    pub fn charges_of(&self, labels: &[impl AsRef<str>]) -> Result<Vec<Charge>> {
        labels.iter().map(|l| self.charge(l.as_ref())).collect()
    }

    pub fn vacuum(&self) -> Charge {
        self.vacuum
    }

    pub fn dual(&self, a: Charge) -> Charge {
        self.dual[a.0]
    }

    /// `N_ab^c`.
    pub fn n(&self, a: Charge, b: Charge, c: Charge) -> u32 {
        let m = self.labels.len();
        self.fusion[(a.0 * m + b.0) * m + c.0]
    }

    /// Fusion channels of `a x b` with their multiplicities.
    pub fn outcomes(&self, a: Charge, b: Charge) -> impl Iterator<Item = (Charge, u32)> + '_ {
        let m = self.labels.len();
        let row = &self.fusion[(a.0 * m + b.0) * m..(a.0 * m + b.0 + 1) * m];
        row.iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(c, &n)| (Charge(c), n))
    }

    pub fn qdim(&self, a: Charge) -> f64 {
        self.qdim[a.0]
    }

    pub fn qdims(&self) -> &[f64] {
        &self.qdim
    }

    /// `D^2 = sum_a d_a^2`.
    pub fn total_dim_sq(&self) -> f64 {
        self.total_dim_sq
    }

    pub fn max_qdim(&self) -> f64 {
        self.qdim.iter().copied().fold(1.0, f64::max)
    }

    /// True iff `sum_c N_ab^c = 1` for every `b`.
    pub fn is_abelian(&self, a: Charge) -> bool {
        self.charges()
            .all(|b| self.outcomes(a, b).map(|(_, n)| n).sum::<u32>() == 1)
    }

    /// True iff the fusion matrix `(N_a)_{ij} = N_{ai}^j` is primitive.
    ///
    /// Decided exactly: a non-negative `m x m` matrix is primitive iff its
    /// `(m-1)^2 + 1`-th power is entrywise positive (Wielandt).
    pub fn is_primitive(&self, a: Charge) -> bool {
        let m = self.len();
        let base: Vec<bool> = (0..m * m)
            .map(|k| self.n(a, Charge(k / m), Charge(k % m)) > 0)
            .collect();
        let exponent = (m - 1) * (m - 1) + 1;
        let power = bool_matrix_power(&base, m, exponent);
        power.into_iter().all(|x| x)
    }

    /// Structural identity: same labels, vacuum and fusion tensor.
    pub fn same_as(&self, other: &AnyonModel) -> bool {
        self.labels == other.labels && self.vacuum == other.vacuum && self.fusion == other.fusion
    }
}

impl fmt::Display for AnyonModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

fn bool_matrix_mul(x: &[bool], y: &[bool], m: usize) -> Vec<bool> {
    let mut out = vec![false; m * m];
    for i in 0..m {
        for k in 0..m {
            if x[i * m + k] {
                for j in 0..m {
                    out[i * m + j] |= y[k * m + j];
                }
            }
        }
    }
    out
}

fn bool_matrix_power(base: &[bool], m: usize, mut exponent: usize) -> Vec<bool> {
    let mut result: Vec<bool> = (0..m * m).map(|k| k / m == k % m).collect();
    let mut square = base.to_vec();
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = bool_matrix_mul(&result, &square, m);
        }
        exponent >>= 1;
        if exponent > 0 {
            square = bool_matrix_mul(&square, &square, m);
        }
    }
    result
}

/// Perron eigenvalue of every fusion matrix `N_a`.
///
/// Power iteration runs on `N_a + I`, which has the same Perron vector and a
/// strictly dominant eigenvalue `d_a + 1` even when `N_a` itself is periodic
/// (the Ising `sigma` matrix has eigenvalues `+-sqrt 2`). Fusion matrices are
/// normal, so the Rayleigh quotient of the converged vector is accurate to
/// roughly the square of the vector tolerance.
pub fn quantum_dimensions(model: &AnyonModel) -> Result<Vec<f64>> {
    model
        .charges()
        .map(|a| {
            let m = model.len();
            let mat: Vec<f64> = (0..m * m)
                .map(|k| model.n(a, Charge(k / m), Charge(k % m)) as f64)
                .collect();
            perron_eigenvalue(&mat, m)
                .map(|rho| rho - 1.0)
                .map_err(|iters| {
                    Error::Numeric(format!(
                        "Perron iteration for {} did not converge in {iters} steps",
                        model.label(a)
                    ))
                })
        })
        .collect()
}

/// Spectral radius of `mat + I`; `Err(iterations)` on non-convergence.
fn perron_eigenvalue(mat: &[f64], m: usize) -> std::result::Result<f64, usize> {
    let mut v = vec![1.0; m];
    let mut next = vec![0.0; m];
    for _ in 0..PERRON_MAX_ITER {
        for i in 0..m {
            next[i] = v[i] + (0..m).map(|j| mat[i * m + j] * v[j]).sum::<f64>();
        }
        let norm = next.iter().copied().fold(0.0, f64::max);
        let mut change: f64 = 0.0;
        for i in 0..m {
            next[i] /= norm;
            change = change.max((next[i] - v[i]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if change <= PERRON_TOLERANCE {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..m {
                let av = v[i] + (0..m).map(|j| mat[i * m + j] * v[j]).sum::<f64>();
                num += v[i] * av;
                den += v[i] * v[i];
            }
            return Ok(num / den);
        }
    }
    Err(PERRON_MAX_ITER)
}
