//! Weight-graded matrices of module maps between tensor products.
//!
//! Blocks are keyed by weight; within a block rows follow the lexicographic
//! order of the target weight basis and columns that of the source.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{quantum_binomial, LaurentSeries, SeriesJson};
use crate::uqsl2::{
    self, act, divided_power_act, divided_power_on, k_power_on, seq_stats, weight, weight_basis,
    weight_projector, weight_projector_on, weights, Gen, ModuleElement, TensorBasisIndex,
};

type Block = Vec<Vec<LaurentSeries>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    source: Vec<u32>,
    target: Vec<u32>,
    blocks: BTreeMap<i64, Block>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockJson {
    pub weight: i64,
    pub rows: Vec<Vec<u32>>,
    pub cols: Vec<Vec<u32>>,
    pub entries: Vec<Vec<SeriesJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntertwinerJson {
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub blocks: Vec<BlockJson>,
}

fn common_weights(source: &[u32], target: &[u32]) -> Vec<i64> {
    let t: Vec<i64> = weights(target);
    weights(source)
        .into_iter()
        .filter(|w| t.contains(w))
        .collect()
}

impl Intertwiner {
    /// Builds a map from the images of the source basis vectors. Fails if an
    /// image leaves the weight space of its source vector.
    pub fn from_columns<F>(source: &[u32], target: &[u32], f: F) -> Result<Self>
    where
        F: Fn(&[u32]) -> ModuleElement,
    {
        let mut blocks = BTreeMap::new();
        for mu in common_weights(source, target) {
            let cols = weight_basis(source, mu);
            let rows = weight_basis(target, mu);
            if cols.is_empty() || rows.is_empty() {
                continue;
            }
            let row_pos: HashMap<&TensorBasisIndex, usize> =
                rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
            let mut block = vec![vec![LaurentSeries::zero(); cols.len()]; rows.len()];
            for (j, c) in cols.iter().enumerate() {
                let image = f(c);
                if image.colours() != target {
                    return Err(Error::Mismatch(format!(
                        "image colours {:?} differ from target {:?}",
                        image.colours(),
                        target
                    )));
                }
                for (idx, v) in image.coords() {
                    let Some(&i) = row_pos.get(idx) else {
                        return Err(Error::Mismatch(format!(
                            "image of {c:?} has a component {idx:?} of weight {}",
                            weight(target, idx)
                        )));
                    };
                    block[i][j] = v.clone();
                }
            }
            blocks.insert(mu, block);
        }
        // columns of weights absent from the target must map to zero
        for mu in weights(source) {
            if !blocks.contains_key(&mu) {
                for c in weight_basis(source, mu) {
                    if !f(&c).is_zero() {
                        return Err(Error::Mismatch(format!(
                            "image of {c:?} leaves weight {mu}"
                        )));
                    }
                }
            }
        }
        Ok(Intertwiner {
            source: source.to_vec(),
            target: target.to_vec(),
            blocks,
        })
    }

    pub fn identity(colours: &[u32]) -> Self {
        Self::from_columns(colours, colours, |c| {
            ModuleElement::basis_vector(colours, c).expect("basis index")
        })
        .expect("identity preserves weights")
    }

    pub fn zero(source: &[u32], target: &[u32]) -> Self {
        Self::from_columns(source, target, |_| ModuleElement::zero(target)).expect("zero map")
    }

    pub fn source(&self) -> &[u32] {
        &self.source
    }

    pub fn target(&self) -> &[u32] {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Block> {
        &self.blocks
    }

    pub fn block(&self, mu: i64) -> Option<&Block> {
        self.blocks.get(&mu)
    }

    /// Image of a source basis vector.
    pub fn column(&self, idx: &[u32]) -> ModuleElement {
        let mu = weight(&self.source, idx);
        let mut out = ModuleElement::zero(&self.target);
        let Some(block) = self.blocks.get(&mu) else {
            return out;
        };
        let cols = weight_basis(&self.source, mu);
        let rows = weight_basis(&self.target, mu);
        let j = cols.iter().position(|c| c == idx).expect("basis index");
        for (i, r) in rows.into_iter().enumerate() {
            out.add_term(r, &block[i][j]);
        }
        out
    }

    /// Images of all source basis vectors, for repeated local application.
    pub fn column_table(
        &self,
    ) -> HashMap<TensorBasisIndex, Vec<(TensorBasisIndex, LaurentSeries)>> {
        let mut table = HashMap::new();
        for (&mu, block) in &self.blocks {
            let cols = weight_basis(&self.source, mu);
            let rows = weight_basis(&self.target, mu);
            for (j, c) in cols.iter().enumerate() {
                let entries: Vec<_> = rows
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !(block[*i][j].is_zero() && block[*i][j].is_exact()))
                    .map(|(i, r)| (r.clone(), block[i][j].clone()))
                    .collect();
                table.insert(c.clone(), entries);
            }
        }
        table
    }

    pub fn apply(&self, x: &ModuleElement) -> Result<ModuleElement> {
        if x.colours() != self.source {
            return Err(Error::Mismatch(format!(
                "element in {:?}, map from {:?}",
                x.colours(),
                self.source
            )));
        }
        let table = self.column_table();
        Ok(x.apply_local(0..self.source.len(), &self.target, |idx| {
            table.get(idx).cloned().unwrap_or_default()
        }))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Intertwiner) -> Result<Intertwiner> {
        if other.target != self.source {
            return Err(Error::Mismatch(format!(
                "cannot compose {:?}->{:?} after {:?}->{:?}",
                self.source, self.target, other.source, other.target
            )));
        }
        let keys: Vec<i64> = other
            .blocks
            .keys()
            .filter(|k| self.blocks.contains_key(k))
            .copied()
            .collect();
        let blocks: BTreeMap<i64, Block> = keys
            .par_iter()
            .map(|mu| (*mu, mat_mul(&self.blocks[mu], &other.blocks[mu])))
            .collect();
        let mut out = Intertwiner {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks,
        };
        out.fill_missing_blocks();
        Ok(out)
    }

    fn fill_missing_blocks(&mut self) {
        for mu in common_weights(&self.source, &self.target) {
            let r = weight_basis(&self.target, mu).len();
            let c = weight_basis(&self.source, mu).len();
            if r > 0 && c > 0 {
                self.blocks
                    .entry(mu)
                    .or_insert_with(|| vec![vec![LaurentSeries::zero(); c]; r]);
            }
        }
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Intertwiner) -> Intertwiner {
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let mut target = self.target.clone();
        target.extend_from_slice(&other.target);
        let n1 = self.source.len();
        let ta = self.column_table();
        let tb = other.column_table();
        Intertwiner::from_columns(&source, &target, |idx| {
            let mut out = ModuleElement::zero(&target);
            let (Some(a), Some(b)) = (ta.get(&idx[..n1]), tb.get(&idx[n1..])) else {
                return out;
            };
            for (ia, ca) in a {
                for (ib, cb) in b {
                    let mut k = ia.clone();
                    k.extend_from_slice(ib);
                    out.add_term(k, &(ca * cb));
                }
            }
            out
        })
        .expect("tensor of weight-preserving maps")
    }

    /// `Id_left ⊗ self ⊗ Id_right`.
    pub fn embed(&self, left: &[u32], right: &[u32]) -> Intertwiner {
        let mut source = left.to_vec();
        source.extend_from_slice(&self.source);
        source.extend_from_slice(right);
        let mut target = left.to_vec();
        target.extend_from_slice(&self.target);
        target.extend_from_slice(right);
        let table = self.column_table();
        let range = left.len()..left.len() + self.source.len();
        let inner_target = self.target.clone();
        Intertwiner::from_columns(&source, &target, |idx| {
            ModuleElement::basis_vector(&source, idx)
                .expect("basis index")
                .apply_local(range.clone(), &inner_target, |l| {
                    table.get(l).cloned().unwrap_or_default()
                })
        })
        .expect("embedding preserves weights")
    }

    fn zip_blocks<F>(&self, other: &Intertwiner, f: F) -> Result<Intertwiner>
    where
        F: Fn(&LaurentSeries, &LaurentSeries) -> LaurentSeries,
    {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch("maps between different modules".into()));
        }
        let mut a = self.clone();
        a.fill_missing_blocks();
        let mut b = other.clone();
        b.fill_missing_blocks();
        for (mu, block) in a.blocks.iter_mut() {
            let ob = &b.blocks[mu];
            for (row, orow) in block.iter_mut().zip(ob) {
                for (x, y) in row.iter_mut().zip(orow) {
                    *x = f(x, y);
                }
            }
        }
        Ok(a)
    }

    pub fn add(&self, other: &Intertwiner) -> Result<Intertwiner> {
        self.zip_blocks(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Intertwiner) -> Result<Intertwiner> {
        self.zip_blocks(other, |x, y| x - y)
    }

    pub fn scale(&self, c: &LaurentSeries) -> Intertwiner {
        let mut out = self.clone();
        for block in out.blocks.values_mut() {
            for row in block.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x * c;
                }
            }
        }
        out
    }

    /// Blockwise equality on the common validity window of each entry.
    pub fn eq_upto(&self, other: &Intertwiner) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero_upto(),
            Err(_) => false,
        }
    }

    pub fn is_zero_upto(&self) -> bool {
        self.blocks
            .values()
            .all(|b| b.iter().all(|r| r.iter().all(|x| x.is_zero())))
    }

    /// Smallest relative precision among the entries; `None` when all exact.
    pub fn relative_precision(&self) -> Option<i64> {
        self.blocks
            .values()
            .flat_map(|b| b.iter().flatten())
            .filter_map(|x| x.relative_precision())
            .min()
    }

    /// Lowest `valid_to` among the entries.
    pub fn valid_to(&self) -> Option<i64> {
        self.blocks
            .values()
            .flat_map(|b| b.iter().flatten())
            .filter_map(|x| x.valid_to())
            .min()
    }

    /// The scalar of a map between ground rings.
    pub fn scalar(&self) -> Option<LaurentSeries> {
        if !self.source.is_empty() || !self.target.is_empty() {
            return None;
        }
        Some(
            self.blocks
                .get(&0)
                .map(|b| b[0][0].clone())
                .unwrap_or_else(LaurentSeries::zero),
        )
    }

    pub fn to_json(&self) -> IntertwinerJson {
        IntertwinerJson {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(&mu, b)| BlockJson {
                    weight: mu,
                    rows: weight_basis(&self.target, mu),
                    cols: weight_basis(&self.source, mu),
                    entries: b
                        .iter()
                        .map(|r| r.iter().map(|x| x.to_json()).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

fn mat_mul(a: &Block, b: &Block) -> Block {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = LaurentSeries::zero();
                    for k in 0..inner {
                        if (row[k].is_zero() && row[k].is_exact())
                            || (b[k][j].is_zero() && b[k][j].is_exact())
                        {
                            continue;
                        }
                        acc = &acc + &(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn ones(n: usize) -> Vec<u32> {
    vec![1; n]
}

fn vec_of(colours: &[u32], terms: &[(&[u32], LaurentSeries)]) -> ModuleElement {
    ModuleElement::from_terms(colours, terms.iter().map(|(i, c)| (i.to_vec(), c.clone())))
        .expect("valid indices")
}

/// `1 ↦ v_1 ⊗ v_0 − q v_0 ⊗ v_1`.
pub fn cup() -> Intertwiner {
    Intertwiner::from_columns(&[], &[1, 1], |_| {
        vec_of(
            &[1, 1],
            &[
                (&[1, 0], LaurentSeries::one()),
                (&[0, 1], LaurentSeries::from_ints(1, &[-1])),
            ],
        )
    })
    .expect("cup")
}

/// `v_0 ⊗ v_1 ↦ 1`, `v_1 ⊗ v_0 ↦ −q^{-1}`, `v_i ⊗ v_i ↦ 0`.
pub fn cap() -> Intertwiner {
    Intertwiner::from_columns(&[1, 1], &[], |idx| match idx {
        [0, 1] => vec_of(&[], &[(&[], LaurentSeries::one())]),
        [1, 0] => vec_of(&[], &[(&[], LaurentSeries::from_ints(-1, &[-1]))]),
        _ => ModuleElement::zero(&[]),
    })
    .expect("cap")
}

/// Cup inserted at strands `i, i+1` (1-based) of `n + 2`.
pub fn cup_at(i: usize, n: usize) -> Result<Intertwiner> {
    if i < 1 || i > n + 1 {
        return Err(Error::IndexOutOfRange(format!("cup at {i} on {n} strands")));
    }
    Ok(cup().embed(&ones(i - 1), &ones(n + 1 - i)))
}

/// Cap joining strands `i, i+1` (1-based) of `n`.
pub fn cap_at(i: usize, n: usize) -> Result<Intertwiner> {
    if i < 1 || i + 1 > n {
        return Err(Error::IndexOutOfRange(format!("cap at {i} on {n} strands")));
    }
    Ok(cap().embed(&ones(i - 1), &ones(n - i - 1)))
}

/// `C_i = ∪_i ∘ ∩_i` on `n` strands.
pub fn turnback(i: usize, n: usize) -> Result<Intertwiner> {
    if n < 2 {
        return Err(Error::IndexOutOfRange(format!(
            "turnback at {i} on {n} strands"
        )));
    }
    cup_at(i, n - 2)?.compose(&cap_at(i, n)?)
}

fn local_crossing(positive: bool) -> Intertwiner {
    let c = cup().compose(&cap()).expect("cup after cap");
    let id = Intertwiner::identity(&[1, 1]);
    let (a, b) = if positive {
        (
            LaurentSeries::from_ints(-1, &[-1]),
            LaurentSeries::from_ints(-2, &[-1]),
        )
    } else {
        (
            LaurentSeries::from_ints(1, &[-1]),
            LaurentSeries::from_ints(2, &[-1]),
        )
    };
    c.scale(&a).add(&id.scale(&b)).expect("same shape")
}

/// Two-strand `Π = −q^{-1} C − q^{-2} Id`.
pub fn pos_local() -> Intertwiner {
    local_crossing(true)
}

/// Two-strand `Ω = −q C − q^2 Id`.
pub fn neg_local() -> Intertwiner {
    local_crossing(false)
}

/// `Π_i` on `n` uncoloured strands.
pub fn crossing_pos(n: usize, i: usize) -> Result<Intertwiner> {
    if i < 1 || i + 1 > n {
        return Err(Error::IndexOutOfRange(format!(
            "crossing at {i} on {n} strands"
        )));
    }
    Ok(pos_local().embed(&ones(i - 1), &ones(n - i - 1)))
}

/// `Ω_i` on `n` uncoloured strands.
pub fn crossing_neg(n: usize, i: usize) -> Result<Intertwiner> {
    if i < 1 || i + 1 > n {
        return Err(Error::IndexOutOfRange(format!(
            "crossing at {i} on {n} strands"
        )));
    }
    Ok(neg_local().embed(&ones(i - 1), &ones(n - i - 1)))
}

type ProjectorCache = Mutex<HashMap<(u32, usize), Intertwiner>>;

fn projection_cache() -> &'static ProjectorCache {
    static CACHE: OnceLock<ProjectorCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn projector_cache() -> &'static ProjectorCache {
    static CACHE: OnceLock<ProjectorCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `π_n(v_a) = q^{-l(a)} [n |a|]^{-1} v_{|a|}`, memoized per precision.
pub fn projection(n: u32, precision: usize) -> Intertwiner {
    if let Some(p) = projection_cache().lock().unwrap().get(&(n, precision)) {
        return p.clone();
    }
    let inverses: Vec<LaurentSeries> = (0..=n)
        .map(|k| {
            let b = quantum_binomial(n, k).expect("k <= n");
            if b == LaurentSeries::one() {
                b
            } else {
                b.invert(precision).expect("nonzero binomial")
            }
        })
        .collect();
    let p = Intertwiner::from_columns(&ones(n as usize), &[n], |a| {
        let (l, _, k) = seq_stats(a);
        vec_of(&[n], &[(&[k], inverses[k as usize].shift(-(l as i64)))])
    })
    .expect("projection preserves weights");
    projection_cache()
        .lock()
        .unwrap()
        .insert((n, precision), p.clone());
    p
}

/// `ι_n(v_k) = Σ_{|a|=k} q^{b(a)} v_a`.
pub fn inclusion(n: u32) -> Intertwiner {
    let strands = ones(n as usize);
    Intertwiner::from_columns(&[n], &strands, |k| {
        let mut out = ModuleElement::zero(&strands);
        for a in uqsl2::basis(&strands) {
            let (_, b, size) = seq_stats(&a);
            if size == k[0] {
                out.add_term(a, &LaurentSeries::q_pow(b as i64));
            }
        }
        out
    })
    .expect("inclusion preserves weights")
}

/// `π_{d_1} ⊗ ... ⊗ π_{d_r}`.
pub fn projection_multi(colours: &[u32], precision: usize) -> Intertwiner {
    colours.iter().fold(Intertwiner::identity(&[]), |acc, &d| {
        acc.tensor(&projection(d, precision))
    })
}

/// `ι_{d_1} ⊗ ... ⊗ ι_{d_r}`.
pub fn inclusion_multi(colours: &[u32]) -> Intertwiner {
    colours.iter().fold(Intertwiner::identity(&[]), |acc, &d| {
        acc.tensor(&inclusion(d))
    })
}

/// `p_n = ι_n ∘ π_n`, memoized per precision.
pub fn jones_wenzl(n: u32, precision: usize) -> Intertwiner {
    if let Some(p) = projector_cache().lock().unwrap().get(&(n, precision)) {
        return p.clone();
    }
    let p = inclusion(n)
        .compose(&projection(n, precision))
        .expect("shapes agree");
    projector_cache()
        .lock()
        .unwrap()
        .insert((n, precision), p.clone());
    p
}

/// `Σ_k E^{(k)} F^{(k)} / [n k] · 1_{-n+2k}`.
pub fn jones_wenzl_divided(n: u32, precision: usize) -> Intertwiner {
    let strands = ones(n as usize);
    let inverses: Vec<LaurentSeries> = (0..=n)
        .map(|k| quantum_binomial(n, k).unwrap().invert(precision).unwrap())
        .collect();
    Intertwiner::from_columns(&strands, &strands, |a| {
        let x = ModuleElement::basis_vector(&strands, a).unwrap();
        let k = a.iter().filter(|&&b| b == 1).count() as u32;
        let y = divided_power_act(Gen::E, k, &divided_power_act(Gen::F, k, &x));
        y.scale(&inverses[k as usize])
    })
    .expect("projector preserves weights")
}

/// `C_n`: `n` nested cups, inserted at positions `1, 2, ..., n` in turn.
pub fn nested_cups(n: usize) -> Intertwiner {
    (1..=n).fold(Intertwiner::identity(&[]), |acc, j| {
        cup_at(j, 2 * (j - 1)).unwrap().compose(&acc).unwrap()
    })
}

/// Equivariance against `E`, `F`, `K` on every basis vector.
pub fn is_intertwiner(a: &Intertwiner) -> bool {
    let src = a.source().to_vec();
    uqsl2::basis(&src).into_iter().all(|idx| {
        let x = ModuleElement::basis_vector(&src, &idx).unwrap();
        [Gen::E, Gen::F, Gen::K].into_iter().all(|g| {
            let lhs = a.apply(&act(g, &x)).unwrap();
            let rhs = act(g, &a.apply(&x).unwrap());
            lhs.eq_upto(&rhs)
        })
    })
}

/// The three identities characterizing the Jones–Wenzl projector:
/// `p ∘ p = p`, `C_i ∘ p = 0` and `p ∘ C_i = 0`.
pub fn charjw_check(p: &Intertwiner) -> bool {
    let n = p.source().len();
    if p.source() != p.target() || p.source().iter().any(|&d| d != 1) {
        return false;
    }
    if !p.compose(p).unwrap().eq_upto(p) {
        return false;
    }
    (1..n).all(|i| {
        let c = turnback(i, n).unwrap();
        c.compose(p).unwrap().is_zero_upto() && p.compose(&c).unwrap().is_zero_upto()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideReport {
    pub n: usize,
    pub k: u32,
    pub f_slide: bool,
    pub e_slide: bool,
    pub divided_square_slide: bool,
    pub weight_slide: bool,
    pub projector_slide: bool,
}

impl SlideReport {
    pub fn all(&self) -> bool {
        self.f_slide
            && self.e_slide
            && self.divided_square_slide
            && self.weight_slide
            && self.projector_slide
    }
}

/// Checks the slide identities of divided powers, weight idempotents and the
/// projector along `n` nested cups, for a given `k <= n`.
pub fn slide_identity_checks(n: usize, k: u32, precision: usize) -> SlideReport {
    let cn = nested_cups(n).column(&[]);
    let left = 0..n;
    let right = n..2 * n;
    let sign = |e: u32| if e.is_multiple_of(2) { 1 } else { -1 };
    let ki = k as i64;

    // (F^{(k)} ⊗ 1) C_n = (−1)^k q^{k(k−1)} (K^k ⊗ F^{(k)}) C_n
    let lhs = divided_power_on(Gen::F, k, &cn, left.clone());
    let rhs = k_power_on(
        &divided_power_on(Gen::F, k, &cn, right.clone()),
        ki,
        left.clone(),
    )
    .scale(&LaurentSeries::from_ints(ki * (ki - 1), &[sign(k)]));
    let f_slide = lhs.eq_upto(&rhs);

    // (E^{(k)} ⊗ 1) C_n = (−1)^k q^{−k(k−1)} (1 ⊗ K^k)(1 ⊗ E^{(k)}) C_n
    let lhs = divided_power_on(Gen::E, k, &cn, left.clone());
    let rhs = k_power_on(
        &divided_power_on(Gen::E, k, &cn, right.clone()),
        ki,
        right.clone(),
    )
    .scale(&LaurentSeries::from_ints(-ki * (ki - 1), &[sign(k)]));
    let e_slide = lhs.eq_upto(&rhs);

    // (E^{(n)} F^{(n)} ⊗ 1) C_n = (1 ⊗ F^{(n)} E^{(n)})(K^n ⊗ K^n) C_n
    let nn = n as u32;
    let lhs = divided_power_on(
        Gen::E,
        nn,
        &divided_power_on(Gen::F, nn, &cn, left.clone()),
        left.clone(),
    );
    let kk = k_power_on(
        &k_power_on(&cn, n as i64, left.clone()),
        n as i64,
        right.clone(),
    );
    let rhs = divided_power_on(
        Gen::F,
        nn,
        &divided_power_on(Gen::E, nn, &kk, right.clone()),
        right.clone(),
    );
    let divided_square_slide = lhs.eq_upto(&rhs);

    // (1_{−n+2k} ⊗ 1) C_n = (1 ⊗ 1_{n−2k}) C_n
    let mu = 2 * ki - n as i64;
    let lhs = weight_projector_on(mu, &cn, left.clone());
    let rhs = weight_projector_on(-mu, &cn, right.clone());
    let weight_slide = lhs.eq_upto(&rhs) && !lhs.is_zero();

    // (p_n ⊗ 1) C_n = (1 ⊗ p_n) C_n
    let p = jones_wenzl(nn, precision);
    let strands = ones(n);
    let lhs = p.embed(&[], &strands).apply(&cn).unwrap();
    let rhs = p.embed(&strands, &[]).apply(&cn).unwrap();
    let projector_slide = lhs.eq_upto(&rhs);

    SlideReport {
        n,
        k,
        f_slide,
        e_slide,
        divided_square_slide,
        weight_slide,
        projector_slide,
    }
}

/// Whole-module weight projector as a map, for completeness of the API.
pub fn weight_idempotent(colours: &[u32], mu: i64) -> Intertwiner {
    Intertwiner::from_columns(colours, colours, |a| {
        weight_projector(mu, &ModuleElement::basis_vector(colours, a).unwrap())
    })
    .expect("weight idempotent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::quantum_integer;

    const P: usize = 24;

    fn s(min: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_ints(min, c)
    }

    #[test]
    fn circle_is_minus_two() {
        let circle = cap().compose(&cup()).unwrap();
        assert_eq!(circle.scalar().unwrap(), -&quantum_integer(2));
        assert!(cap().column(&[0, 0]).is_zero());
        assert_eq!(cup_at(1, 0).unwrap(), cup());
    }

    #[test]
    fn inclusion_and_projection_values() {
        let i2 = inclusion(2).column(&[1]);
        assert_eq!(i2.coeff(&[1, 0]), s(1, &[1]));
        assert_eq!(i2.coeff(&[0, 1]), s(0, &[1]));
        let p = projection(2, P).column(&[0, 1]);
        let expected = quantum_integer(2).invert(P).unwrap().shift(-1);
        assert!(p.coeff(&[1]).eq_upto(&expected));
    }

    #[test]
    fn projection_after_inclusion_is_identity() {
        for n in 1..=4 {
            let id = projection(n, P).compose(&inclusion(n)).unwrap();
            assert!(id.eq_upto(&Intertwiner::identity(&[n])), "n={n}");
        }
    }

    #[test]
    fn p2_on_v01() {
        let col = jones_wenzl(2, P).column(&[0, 1]);
        let inv2 = quantum_integer(2).invert(P).unwrap();
        assert!(col.coeff(&[1, 0]).eq_upto(&inv2));
        assert!(col.coeff(&[0, 1]).eq_upto(&inv2.shift(-1)));
        let divided = jones_wenzl_divided(2, P);
        assert!(divided.eq_upto(&jones_wenzl(2, P)));
    }

    #[test]
    fn crossings() {
        let pi = crossing_pos(2, 1).unwrap();
        assert_eq!(pi.column(&[0, 0]).coeff(&[0, 0]), s(-2, &[-1]));
        let pv = pi.column(&[0, 1]);
        assert_eq!(pv.coeff(&[1, 0]), s(-1, &[-1]));
        assert_eq!(pv.coeff(&[0, 1]), s(-2, &[-1, 0, 1]));
        let omega = crossing_neg(2, 1).unwrap();
        assert!(pi
            .compose(&omega)
            .unwrap()
            .eq_upto(&Intertwiner::identity(&[1, 1])));
        let p1 = crossing_pos(3, 1).unwrap();
        let p2 = crossing_pos(3, 2).unwrap();
        let a = p1.compose(&p2).unwrap().compose(&p1).unwrap();
        let b = p2.compose(&p1).unwrap().compose(&p2).unwrap();
        assert!(a.eq_upto(&b));
        assert!(is_intertwiner(&pi));
    }

    #[test]
    fn characterization_of_projectors() {
        assert!(charjw_check(&jones_wenzl(3, P)));
        assert!(!charjw_check(&Intertwiner::identity(&[1, 1])));
    }

    #[test]
    fn f_slide_base_case() {
        let c1 = cup().column(&[]);
        let lhs = uqsl2::act_on(Gen::F, &c1, 0..1);
        let rhs = uqsl2::act_on(Gen::K, &uqsl2::act_on(Gen::F, &c1, 1..2), 0..1);
        assert_eq!(lhs, rhs.scale(&s(0, &[-1])));
    }

    #[test]
    fn slides_for_two_nested_cups() {
        assert!(slide_identity_checks(2, 2, 48).all());
    }

    #[test]
    fn nested_cups_one_is_cup() {
        assert_eq!(nested_cups(1), cup());
    }

    #[test]
    fn weight_idempotents_sum_to_identity() {
        let c = [1, 2];
        let sum = weights(&c)
            .into_iter()
            .fold(Intertwiner::zero(&c, &c), |acc, mu| {
                acc.add(&weight_idempotent(&c, mu)).unwrap()
            });
        assert!(sum.eq_upto(&Intertwiner::identity(&c)));
    }
}
