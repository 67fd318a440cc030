//! The action of `U_q(sl2)` on tensor products `V_{d_1} ⊗ ... ⊗ V_{d_r}`.
//!
//! Factors are numbered from the left starting at 0 in code. Iterated
//! comultiplication is left-nested, which in closed form means `E` acts on one
//! factor with `K^{-1}` on every factor to its right, and `F` acts on one factor
//! with `K` on every factor to its left.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{
    quantum_binomial, quantum_factorial, quantum_integer, LaurentSeries, SeriesJson,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    E,
    F,
    K,
    Kinv,
}

/// Colours of the tensor factors; the empty list is the ground ring.
pub type TensorFactorization = Vec<u32>;
/// Basis index `(a_1, ..., a_r)` with `0 <= a_j <= d_j`.
pub type TensorBasisIndex = Vec<u32>;

pub fn dimension(colours: &[u32]) -> usize {
    colours.iter().map(|&d| d as usize + 1).product()
}

pub fn weight(colours: &[u32], idx: &[u32]) -> i64 {
    colours
        .iter()
        .zip(idx)
        .map(|(&d, &a)| 2 * a as i64 - d as i64)
        .sum()
}

/// All basis indices in lexicographic order.
pub fn basis(colours: &[u32]) -> Vec<TensorBasisIndex> {
    let mut out = vec![Vec::with_capacity(colours.len())];
    for &d in colours {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=d).map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out
}

/// Basis of the weight-`mu` space in lexicographic order.
pub fn weight_basis(colours: &[u32], mu: i64) -> Vec<TensorBasisIndex> {
    basis(colours)
        .into_iter()
        .filter(|a| weight(colours, a) == mu)
        .collect()
}

/// Weights occurring in the tensor product, ascending.
pub fn weights(colours: &[u32]) -> Vec<i64> {
    let top: i64 = colours.iter().map(|&d| d as i64).sum();
    (0..=top).map(|j| 2 * j - top).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    colours: TensorFactorization,
    coords: BTreeMap<TensorBasisIndex, LaurentSeries>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementTermJson {
    pub index: Vec<u32>,
    pub series: SeriesJson,
}

impl ModuleElement {
    pub fn zero(colours: &[u32]) -> Self {
        ModuleElement {
            colours: colours.to_vec(),
            coords: BTreeMap::new(),
        }
    }

    pub fn basis_vector(colours: &[u32], idx: &[u32]) -> Result<Self> {
        check_index(colours, idx)?;
        let mut x = Self::zero(colours);
        x.coords.insert(idx.to_vec(), LaurentSeries::one());
        Ok(x)
    }

    pub fn from_terms(
        colours: &[u32],
        terms: impl IntoIterator<Item = (TensorBasisIndex, LaurentSeries)>,
    ) -> Result<Self> {
        let mut x = Self::zero(colours);
        for (idx, c) in terms {
            check_index(colours, &idx)?;
            x.add_term(idx, &c);
        }
        Ok(x)
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn coords(&self) -> &BTreeMap<TensorBasisIndex, LaurentSeries> {
        &self.coords
    }

    pub fn coeff(&self, idx: &[u32]) -> LaurentSeries {
        self.coords
            .get(idx)
            .cloned()
            .unwrap_or_else(LaurentSeries::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Adds `c · v_idx`. Truncated zeros are kept so their windows survive.
    pub fn add_term(&mut self, idx: TensorBasisIndex, c: &LaurentSeries) {
        if c.is_zero() && c.is_exact() {
            return;
        }
        match self.coords.get_mut(&idx) {
            Some(old) => {
                let s = &*old + c;
                if s.is_zero() && s.is_exact() {
                    self.coords.remove(&idx);
                } else {
                    *old = s;
                }
            }
            None => {
                self.coords.insert(idx, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in &other.coords {
            out.add_term(idx.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentSeries::from_ints(0, &[-1])))
    }

    pub fn scale(&self, c: &LaurentSeries) -> Self {
        let mut out = Self::zero(&self.colours);
        for (idx, x) in &self.coords {
            out.add_term(idx.clone(), &(x * c));
        }
        out
    }

    /// Equality on the common validity window of every coordinate.
    pub fn eq_upto(&self, other: &Self) -> bool {
        if self.colours != other.colours {
            return false;
        }
        let zero = LaurentSeries::zero();
        let keys: std::collections::BTreeSet<_> =
            self.coords.keys().chain(other.coords.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.coords.get(k).unwrap_or(&zero);
            let b = other.coords.get(k).unwrap_or(&zero);
            a.eq_upto(b)
        })
    }

    /// Smallest relative precision over all coordinates; `None` when exact.
    pub fn relative_precision(&self) -> Option<i64> {
        self.coords
            .values()
            .filter_map(|c| c.relative_precision())
            .min()
    }

    pub fn to_json(&self) -> Vec<ElementTermJson> {
        self.coords
            .iter()
            .map(|(k, v)| ElementTermJson {
                index: k.clone(),
                series: v.to_json(),
            })
            .collect()
    }

    /// Applies a map defined on basis vectors of the factors in `range`,
    /// extended by the identity on the remaining factors.
    pub fn apply_local<F>(&self, range: Range<usize>, target_colours: &[u32], f: F) -> Self
    where
        F: Fn(&[u32]) -> Vec<(TensorBasisIndex, LaurentSeries)>,
    {
        let mut colours = self.colours[..range.start].to_vec();
        colours.extend_from_slice(target_colours);
        colours.extend_from_slice(&self.colours[range.end..]);
        let mut out = Self::zero(&colours);
        for (idx, c) in &self.coords {
            for (local, d) in f(&idx[range.clone()]) {
                let mut k = idx[..range.start].to_vec();
                k.extend_from_slice(&local);
                k.extend_from_slice(&idx[range.end..]);
                out.add_term(k, &(c * &d));
            }
        }
        out
    }
}

fn check_index(colours: &[u32], idx: &[u32]) -> Result<()> {
    if idx.len() != colours.len() || idx.iter().zip(colours).any(|(a, d)| a > d) {
        return Err(Error::IndexOutOfRange(format!(
            "basis index {idx:?} for colours {colours:?}"
        )));
    }
    Ok(())
}

fn k_scalar(d: u32, a: u32, power: i64) -> i64 {
    power * (2 * a as i64 - d as i64)
}

/// A generator on a single basis vector `v_a` of `V_d`.
fn act_single(gen: Gen, d: u32, a: u32) -> Option<(u32, LaurentSeries)> {
    match gen {
        Gen::K => Some((a, LaurentSeries::q_pow(k_scalar(d, a, 1)))),
        Gen::Kinv => Some((a, LaurentSeries::q_pow(k_scalar(d, a, -1)))),
        Gen::E => (a < d).then(|| (a + 1, quantum_integer(a + 1))),
        Gen::F => (a > 0).then(|| (a - 1, quantum_integer(d - a + 1))),
    }
}

fn act_basis(gen: Gen, colours: &[u32], idx: &[u32]) -> Vec<(TensorBasisIndex, LaurentSeries)> {
    match gen {
        Gen::K | Gen::Kinv => {
            let s = if gen == Gen::K { 1 } else { -1 };
            let e: i64 = colours
                .iter()
                .zip(idx)
                .map(|(&d, &a)| k_scalar(d, a, s))
                .sum();
            vec![(idx.to_vec(), LaurentSeries::q_pow(e))]
        }
        Gen::E => (0..idx.len())
            .filter_map(|j| {
                let (b, c) = act_single(Gen::E, colours[j], idx[j])?;
                let kexp: i64 = (j + 1..idx.len())
                    .map(|t| k_scalar(colours[t], idx[t], -1))
                    .sum();
                let mut out = idx.to_vec();
                out[j] = b;
                Some((out, c.shift(kexp)))
            })
            .collect(),
        Gen::F => (0..idx.len())
            .filter_map(|j| {
                let (b, c) = act_single(Gen::F, colours[j], idx[j])?;
                let kexp: i64 = (0..j).map(|t| k_scalar(colours[t], idx[t], 1)).sum();
                let mut out = idx.to_vec();
                out[j] = b;
                Some((out, c.shift(kexp)))
            })
            .collect(),
    }
}

/// Action of a generator through the iterated comultiplication.
pub fn act(gen: Gen, x: &ModuleElement) -> ModuleElement {
    act_on(gen, x, 0..x.colours.len())
}

/// Action on the sub-tensor of factors in `range`, identity elsewhere.
pub fn act_on(gen: Gen, x: &ModuleElement, range: Range<usize>) -> ModuleElement {
    let cols = x.colours[range.clone()].to_vec();
    x.apply_local(range, &cols.clone(), |idx| act_basis(gen, &cols, idx))
}

/// `K^j` on the factors in `range`, for any integer `j`.
pub fn k_power_on(x: &ModuleElement, j: i64, range: Range<usize>) -> ModuleElement {
    let cols = x.colours[range.clone()].to_vec();
    x.apply_local(range, &cols.clone(), |idx| {
        let e: i64 = cols.iter().zip(idx).map(|(&d, &a)| k_scalar(d, a, j)).sum();
        vec![(idx.to_vec(), LaurentSeries::q_pow(e))]
    })
}

/// Comultiplication split at a chosen factor: `x ∈ (V_left) ⊗ (V_right)` with
/// `V_left` the first `split` factors. Used to test coassociativity.
pub fn act_split(gen: Gen, x: &ModuleElement, split: usize) -> ModuleElement {
    let r = x.colours.len();
    match gen {
        Gen::K | Gen::Kinv => act(gen, x),
        Gen::E => {
            // 1 ⊗ E + E ⊗ K^{-1}
            let a = act_on(Gen::E, x, split..r);
            let b = act_on(Gen::Kinv, &act_on(Gen::E, x, 0..split), split..r);
            a.add(&b)
        }
        Gen::F => {
            // K ⊗ F + F ⊗ 1
            let a = act_on(Gen::K, &act_on(Gen::F, x, split..r), 0..split);
            let b = act_on(Gen::F, x, 0..split);
            a.add(&b)
        }
    }
}

fn divided_single(gen: Gen, k: u32, d: u32, a: u32) -> Option<(u32, LaurentSeries)> {
    let binom = |n, k| quantum_binomial(n, k).expect("k <= n");
    match gen {
        Gen::E => (a + k <= d).then(|| (a + k, binom(a + k, k))),
        Gen::F => (a >= k).then(|| (a - k, binom(d - a + k, k))),
        _ => unreachable!("divided powers exist for E and F only"),
    }
}

/// Closed-form `Δ(E^{(k)}) = Σ_i q^{-i(k-i)} E^{(k-i)} ⊗ E^{(i)} K^{i-k}` and
/// `Δ(F^{(k)}) = Σ_i q^{i(k-i)} K^i F^{(k-i)} ⊗ F^{(i)}`, recursing on the last factor.
fn divided_basis(
    gen: Gen,
    k: u32,
    colours: &[u32],
    idx: &[u32],
) -> Vec<(TensorBasisIndex, LaurentSeries)> {
    let r = idx.len();
    if k == 0 {
        return vec![(idx.to_vec(), LaurentSeries::one())];
    }
    if r == 0 {
        return Vec::new();
    }
    if r == 1 {
        return divided_single(gen, k, colours[0], idx[0])
            .map(|(b, c)| vec![(vec![b], c)])
            .unwrap_or_default();
    }
    let (dl, cl) = (colours[r - 1], &colours[..r - 1]);
    let al = idx[r - 1];
    let mut out = Vec::new();
    for i in 0..=k {
        let Some((b, c_last)) = divided_single(gen, i, dl, al) else {
            continue;
        };
        let ki = (i * (k - i)) as i64;
        for (mut rest, c_rest) in divided_basis(gen, k - i, cl, &idx[..r - 1]) {
            let coeff = match gen {
                // E^{(i)} K^{i-k} on the last factor: K acts first
                Gen::E => c_last.shift(-ki + k_scalar(dl, al, i as i64 - k as i64)),
                // K^i F^{(k-i)} on the rest: K acts on the result
                Gen::F => c_last.shift(ki + k_scalar_sum(cl, &rest, i as i64)),
                _ => unreachable!(),
            };
            rest.push(b);
            out.push((rest, &c_rest * &coeff));
        }
    }
    out
}

fn k_scalar_sum(colours: &[u32], idx: &[u32], power: i64) -> i64 {
    colours
        .iter()
        .zip(idx)
        .map(|(&d, &a)| k_scalar(d, a, power))
        .sum()
}

/// `E^{(k)}` or `F^{(k)}` through the closed-form comultiplication.
pub fn divided_power_act(gen: Gen, k: u32, x: &ModuleElement) -> ModuleElement {
    divided_power_on(gen, k, x, 0..x.colours.len())
}

pub fn divided_power_on(gen: Gen, k: u32, x: &ModuleElement, range: Range<usize>) -> ModuleElement {
    assert!(
        matches!(gen, Gen::E | Gen::F),
        "divided powers exist for E and F only"
    );
    let cols = x.colours[range.clone()].to_vec();
    x.apply_local(range, &cols.clone(), |idx| {
        divided_basis(gen, k, &cols, idx)
    })
}

/// `E^{(k)}` or `F^{(k)}` as `k` applications of the generator divided by `[k]!`.
pub fn divided_power_naive(
    gen: Gen,
    k: u32,
    x: &ModuleElement,
    precision: usize,
) -> Result<ModuleElement> {
    let mut y = x.clone();
    for _ in 0..k {
        y = act(gen, &y);
    }
    let fact = quantum_factorial(k);
    let mut out = ModuleElement::zero(&x.colours);
    for (idx, c) in &y.coords {
        let v = if c.is_exact() {
            c.div_exact(&fact)?
        } else {
            c * &fact.invert(precision)?
        };
        out.add_term(idx.clone(), &v);
    }
    Ok(out)
}

/// `1_mu`: keeps exactly the coordinates of weight `mu`.
pub fn weight_projector(mu: i64, x: &ModuleElement) -> ModuleElement {
    let mut out = ModuleElement::zero(&x.colours);
    for (idx, c) in &x.coords {
        if weight(&x.colours, idx) == mu {
            out.add_term(idx.clone(), c);
        }
    }
    out
}

/// `1_mu` on the factors in `range` only.
pub fn weight_projector_on(mu: i64, x: &ModuleElement, range: Range<usize>) -> ModuleElement {
    let cols = x.colours[range.clone()].to_vec();
    x.apply_local(range, &cols.clone(), |idx| {
        if weight(&cols, idx) == mu {
            vec![(idx.to_vec(), LaurentSeries::one())]
        } else {
            Vec::new()
        }
    })
}

/// `⟨v_k, v_l⟩' = δ_{kl} q^{k(n-k)} [n k]` on `V_n`.
pub fn bilinear_form(n: u32, k: u32, l: u32) -> Result<LaurentSeries> {
    if k > n || l > n {
        return Err(Error::IndexOutOfRange(format!("v_{k}, v_{l} in V_{n}")));
    }
    if k != l {
        return Ok(LaurentSeries::zero());
    }
    Ok(quantum_binomial(n, k)?.shift(k as i64 * (n - k) as i64))
}

/// `(l(a), b(a), |a|)` for a 0/1 sequence: `l` counts pairs `i < j` with
/// `a_i < a_j`, and `b = |a|(n - |a|) - l`.
pub fn seq_stats(a: &[u32]) -> (u32, u32, u32) {
    let n = a.len() as u32;
    let ones = a.iter().filter(|&&x| x == 1).count() as u32;
    let mut l = 0;
    let mut zeros_seen = 0;
    for &x in a {
        if x == 0 {
            zeros_seen += 1;
        } else {
            l += zeros_seen;
        }
    }
    (l, ones * (n - ones) - l, ones)
}
