//! Evaluation of diagrams to intertwiners and the framing-normalized invariant.
//!
//! Both evaluation modes push basis vectors through a list of local maps
//! acting on a few adjacent tensor factors. Global mode runs on the cabled
//! diagram between one inclusion and one projection; Sliced mode sandwiches
//! every coloured slice between projections and inclusions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intertwiner::{
    cap, cap_at, cup, inclusion, inclusion_multi, jones_wenzl, neg_local, nested_cups, pos_local,
    projection, projection_multi, Intertwiner,
};
use crate::qseries::{LaurentSeries, DEFAULT_PRECISION};
use crate::tangle::{
    apply_move, cable, cable_ops, cable_slice, enumerate_move_sites, move_templates,
    random_diagram_with, writhe_gamma_with, BoundaryPoint, CabledOp, ColouredDiagram,
    GammaConvention, MoveKind, MoveSite, Orientation, RandomConfig, Slice,
};
use crate::uqsl2::{self, ModuleElement, TensorBasisIndex};

type ColumnTable = HashMap<TensorBasisIndex, Vec<(TensorBasisIndex, LaurentSeries)>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    Global,
    Sliced,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Mode::Global),
            "sliced" => Ok(Mode::Sliced),
            _ => Err(Error::Domain(format!("unknown mode `{s}`"))),
        }
    }
}

/// A map on factors `start..start+len` replacing them by `target`.
struct LocalOp {
    start: usize,
    len: usize,
    target: Vec<u32>,
    table: Arc<ColumnTable>,
}

impl LocalOp {
    fn new(start: usize, map: &Intertwiner) -> Self {
        LocalOp {
            start,
            len: map.source().len(),
            target: map.target().to_vec(),
            table: Arc::new(map.column_table()),
        }
    }

    fn with_table(start: usize, len: usize, target: Vec<u32>, table: Arc<ColumnTable>) -> Self {
        LocalOp {
            start,
            len,
            target,
            table,
        }
    }

    fn apply(&self, x: &ModuleElement) -> ModuleElement {
        x.apply_local(self.start..self.start + self.len, &self.target, |idx| {
            self.table.get(idx).cloned().unwrap_or_default()
        })
    }
}

fn run_ops(x: ModuleElement, ops: &[LocalOp]) -> ModuleElement {
    ops.iter().fold(x, |acc, op| op.apply(&acc))
}

/// Builds the intertwiner whose columns are the images of basis vectors.
fn assemble(source: &[u32], target: &[u32], ops: &[LocalOp]) -> Result<Intertwiner> {
    let basis = uqsl2::basis(source);
    let columns: HashMap<TensorBasisIndex, ModuleElement> = basis
        .par_iter()
        .map(|idx| {
            let x = ModuleElement::basis_vector(source, idx).expect("basis index");
            (idx.clone(), run_ops(x, ops))
        })
        .collect();
    Intertwiner::from_columns(source, target, |idx| columns[idx].clone())
}

type TableCache = Mutex<HashMap<(u8, u32, u32, usize), Arc<ColumnTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached_table(
    key: (u8, u32, u32, usize),
    build: impl FnOnce() -> Intertwiner,
) -> Arc<ColumnTable> {
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return t.clone();
    }
    let t = Arc::new(build().column_table());
    table_cache().lock().unwrap().insert(key, t.clone());
    t
}

fn uncoloured_op(s: &Slice) -> LocalOp {
    match *s {
        Slice::Cup { pos, .. } => {
            LocalOp::with_table(pos - 1, 0, vec![1, 1], cached_table((0, 1, 1, 0), cup))
        }
        Slice::Cap { pos } => {
            LocalOp::with_table(pos - 1, 2, vec![], cached_table((1, 1, 1, 0), cap))
        }
        Slice::Pos { pos } => LocalOp::with_table(
            pos - 1,
            2,
            vec![1, 1],
            cached_table((2, 1, 1, 0), pos_local),
        ),
        Slice::Neg { pos } => LocalOp::with_table(
            pos - 1,
            2,
            vec![1, 1],
            cached_table((3, 1, 1, 0), neg_local),
        ),
    }
}

/// `Φ` of an uncoloured diagram: the composite of the slice intertwiners.
pub fn phi(d: &ColouredDiagram) -> Result<Intertwiner> {
    if !d.is_uncoloured() {
        return Err(Error::Domain(
            "Φ takes an uncoloured diagram; cable it first".into(),
        ));
    }
    let top = d.top()?;
    let ops: Vec<LocalOp> = d.slices.iter().map(uncoloured_op).collect();
    assemble(&vec![1; d.bottom.len()], &vec![1; top.len()], &ops)
}

fn colours(points: &[BoundaryPoint]) -> Vec<u32> {
    points.iter().map(|p| p.colour).collect()
}

fn global_ops(d: &ColouredDiagram, precision: usize) -> Result<Vec<LocalOp>> {
    let top = d.top()?;
    let mut ops = Vec::new();
    // inclusions, left to right
    let mut at = 0;
    for p in &d.bottom {
        if p.colour > 1 {
            ops.push(LocalOp::new(at, &inclusion(p.colour)));
        }
        at += p.colour as usize;
    }
    for op in cable_ops(d)? {
        ops.push(match op {
            CabledOp::Slice(s) => uncoloured_op(&s),
            CabledOp::Projector { pos, n } => LocalOp::with_table(
                pos - 1,
                n as usize,
                vec![1; n as usize],
                cached_table((4, n, 0, precision), || jones_wenzl(n, precision)),
            ),
        });
    }
    for (j, p) in top.iter().enumerate() {
        if p.colour > 1 {
            ops.push(LocalOp::with_table(
                j,
                p.colour as usize,
                vec![p.colour],
                cached_table((5, p.colour, 0, precision), || {
                    projection(p.colour, precision)
                }),
            ));
        }
    }
    Ok(ops)
}

/// `π ∘ Φ(cab E) ∘ ι` for a single coloured slice on its own factors.
fn coloured_slice_map(
    state: &[BoundaryPoint],
    s: &Slice,
    precision: usize,
) -> (usize, usize, Vec<u32>, Arc<ColumnTable>) {
    let i = s.pos();
    match *s {
        Slice::Cup { colour: m, .. } => {
            let t = cached_table((6, m, 0, precision), || {
                projection_multi(&[m, m], precision)
                    .compose(&nested_cups(m as usize))
                    .expect("shapes agree")
            });
            (i - 1, 0, vec![m, m], t)
        }
        Slice::Cap { .. } => {
            let m = state[i - 1].colour;
            let t = cached_table((7, m, 0, precision), || {
                let mut acc = inclusion_multi(&[m, m]);
                for j in (1..=m as usize).rev() {
                    acc = cap_at(j, 2 * j).unwrap().compose(&acc).unwrap();
                }
                acc
            });
            (i - 1, 2, vec![], t)
        }
        Slice::Pos { .. } | Slice::Neg { .. } => {
            let (a, b) = (state[i - 1].colour, state[i].colour);
            let kind = if matches!(s, Slice::Pos { .. }) { 8 } else { 9 };
            let t = cached_table((kind, a, b, precision), || {
                let local_state = [BoundaryPoint::up(a), BoundaryPoint::up(b)];
                let local = match s {
                    Slice::Pos { .. } => Slice::Pos { pos: 1 },
                    _ => Slice::Neg { pos: 1 },
                };
                let strands = (a + b) as usize;
                let mut acc = inclusion_multi(&[a, b]);
                for c in cable_slice(&local_state, &local) {
                    let x = match c {
                        Slice::Pos { pos } => crate::intertwiner::crossing_pos(strands, pos),
                        _ => crate::intertwiner::crossing_neg(strands, c.pos()),
                    };
                    acc = x.unwrap().compose(&acc).unwrap();
                }
                projection_multi(&[b, a], precision).compose(&acc).unwrap()
            });
            (i - 1, 2, vec![b, a], t)
        }
    }
}

fn sliced_ops(d: &ColouredDiagram, precision: usize) -> Result<Vec<LocalOp>> {
    let states = d.states()?;
    Ok(d.slices
        .iter()
        .zip(&states)
        .map(|(s, st)| {
            let (start, len, target, table) = coloured_slice_map(st, s, precision);
            LocalOp::with_table(start, len, target, table)
        })
        .collect())
}

fn phi_coloured_at(d: &ColouredDiagram, precision: usize, mode: Mode) -> Result<Intertwiner> {
    let top = d.top()?;
    let ops = match mode {
        Mode::Global => global_ops(d, precision)?,
        Mode::Sliced => sliced_ops(d, precision)?,
    };
    assemble(&colours(&d.bottom), &colours(&top), &ops)
}

/// Precision actually used and reached by an evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub requested: usize,
    pub internal: usize,
    /// Smallest number of known coefficients from the leading term of any
    /// entry; `None` when the value is an exact Laurent polynomial.
    pub achieved: Option<i64>,
}

impl PrecisionReport {
    pub fn meets_request(&self) -> bool {
        self.achieved.is_none_or(|a| a >= self.requested as i64)
    }
}

const MAX_RETRIES: usize = 4;

/// `Φ_col`, widening the internal precision until the requested relative
/// window is reached or the retry budget runs out.
pub fn phi_coloured(
    d: &ColouredDiagram,
    precision: usize,
    mode: Mode,
) -> Result<(Intertwiner, PrecisionReport)> {
    let mut internal = precision;
    let mut last = None;
    for _ in 0..MAX_RETRIES {
        let value = phi_coloured_at(d, internal, mode)?;
        let achieved = value.relative_precision();
        let report = PrecisionReport {
            requested: precision,
            internal,
            achieved,
        };
        match achieved {
            Some(a) if a < precision as i64 => {
                internal += (precision as i64 - a) as usize + 4;
                last = Some((value, report));
            }
            _ => return Ok((value, report)),
        }
    }
    Ok(last.expect("at least one attempt"))
}

#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub value: Intertwiner,
    pub gamma: i64,
    pub normalized: bool,
    pub precision: PrecisionReport,
}

impl InvariantResult {
    /// The scalar value when both boundaries are empty.
    pub fn scalar(&self) -> Option<LaurentSeries> {
        self.value.scalar()
    }
}

/// `q^{3γ(cab D)} Φ_col(D)` in the default mode.
pub fn normalized_invariant(d: &ColouredDiagram, precision: usize) -> Result<InvariantResult> {
    normalized_invariant_with(d, precision, Mode::default(), GammaConvention::Standard)
}

pub fn normalized_invariant_with(
    d: &ColouredDiagram,
    precision: usize,
    mode: Mode,
    convention: GammaConvention,
) -> Result<InvariantResult> {
    let (raw, report) = phi_coloured(d, precision, mode)?;
    let gamma = writhe_gamma_with(&cable(d)?, convention)?;
    Ok(InvariantResult {
        value: raw.scale(&LaurentSeries::q_pow(3 * gamma)),
        gamma,
        normalized: true,
        precision: report,
    })
}

/// The invariant of a closed diagram as a single series.
pub fn link_invariant(d: &ColouredDiagram, precision: usize) -> Result<LaurentSeries> {
    link_invariant_with(d, precision, Mode::default())
}

pub fn link_invariant_with(
    d: &ColouredDiagram,
    precision: usize,
    mode: Mode,
) -> Result<LaurentSeries> {
    if !d.bottom.is_empty() || !d.top()?.is_empty() {
        return Err(Error::Domain(
            "link invariant needs empty bottom and top boundaries".into(),
        ));
    }
    let r = normalized_invariant_with(d, precision, mode, GammaConvention::Standard)?;
    Ok(r.scalar().expect("scalar map"))
}

/// Cabled width above which the harness evaluates in Sliced mode.
pub const GLOBAL_WIDTH_LIMIT: u32 = 10;

fn auto_mode(d: &ColouredDiagram) -> Result<Mode> {
    Ok(if d.max_cabled_width()? <= GLOBAL_WIDTH_LIMIT {
        Mode::Global
    } else {
        Mode::Sliced
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceParams {
    pub max_colour: u32,
    pub trials: usize,
    pub moves: Vec<MoveKind>,
    pub precision: usize,
    pub seed: u64,
    pub n_slices: usize,
    pub max_points: usize,
    pub max_cabled: u32,
    pub convention: GammaConvention,
    /// `None` picks Global mode unless the cabling is wider than
    /// [`GLOBAL_WIDTH_LIMIT`].
    pub mode: Option<Mode>,
}

impl Default for InvarianceParams {
    fn default() -> Self {
        InvarianceParams {
            max_colour: 1,
            trials: 50,
            moves: vec![MoveKind::R2],
            precision: DEFAULT_PRECISION,
            seed: 0,
            n_slices: 8,
            max_points: 6,
            max_cabled: 6,
            convention: GammaConvention::Standard,
            mode: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub kind: MoveKind,
    pub passed: bool,
    pub before: String,
    pub after: String,
    pub site: Option<MoveSite>,
    pub window: Option<i64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub params: InvarianceParams,
    pub passed: usize,
    pub failed: usize,
    pub outcomes: Vec<TrialOutcome>,
}

impl InvarianceReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

fn random_bottom(rng: &mut ChaCha8Rng, max_colour: u32, max_cabled: u32) -> Vec<BoundaryPoint> {
    let n = rng.gen_range(1..=3usize);
    let mut out = Vec::new();
    let mut width = 0;
    for _ in 0..n {
        let c = rng.gen_range(1..=max_colour);
        if width + c > max_cabled.saturating_sub(2).max(c) {
            break;
        }
        width += c;
        let o = if rng.gen_bool(0.5) {
            Orientation::Up
        } else {
            Orientation::Down
        };
        out.push(BoundaryPoint::new(c, o));
    }
    out
}

/// A word undoing `x` when applied after it to `state`.
fn inverse_word(state: &[BoundaryPoint], x: &[Slice]) -> Vec<Slice> {
    let mut st = state.to_vec();
    let mut inv = Vec::with_capacity(x.len());
    for s in x {
        inv.push(match *s {
            Slice::Pos { pos } => Slice::Neg { pos },
            Slice::Neg { pos } => Slice::Pos { pos },
            Slice::Cup { pos, .. } => Slice::Cap { pos },
            Slice::Cap { pos } => Slice::Cup {
                pos,
                colour: st[pos - 1].colour,
                left: st[pos - 1].orientation,
            },
        });
        st = s.apply(&st).expect("template words are valid");
    }
    inv.reverse();
    inv
}

/// Picks a site for `kind`. When none exists, one side of a two-sided
/// pattern is planted together with its inverse word. Returns the (possibly planted) diagram.
fn choose_site(
    d: &ColouredDiagram,
    kind: MoveKind,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(ColouredDiagram, MoveSite)>> {
    let sites = enumerate_move_sites(d, kind)?;
    if let Some(site) = sites.choose(rng) {
        return Ok(Some((d.clone(), site.clone())));
    }
    let states = d.states()?;
    let mut gaps: Vec<usize> = (0..states.len()).collect();
    gaps.shuffle(rng);
    for g in gaps {
        let swaps: Vec<_> = move_templates(kind, &states[g])
            .into_iter()
            .filter(|(x, y)| !x.is_empty() && !y.is_empty())
            .collect();
        if let Some((x, y)) = swaps.choose(rng) {
            let mut planted = d.clone();
            let mut word = x.clone();
            word.extend(inverse_word(&states[g], x));
            planted.slices.splice(g..g, word);
            let site = MoveSite {
                kind,
                at: g,
                old: x.clone(),
                new: y.clone(),
            };
            return Ok(Some((planted, site)));
        }
    }
    Ok(None)
}

/// Trial number `trial` of [`verify_invariance`], reproducible on its own.
pub fn run_trial(params: &InvarianceParams, trial: usize) -> TrialOutcome {
    let seed = params
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = *params
        .moves
        .choose(&mut rng)
        .expect("at least one move kind");
    let cfg = RandomConfig {
        max_colour: params.max_colour,
        max_points: params.max_points,
        max_cabled: params.max_cabled,
    };
    let mut outcome = TrialOutcome {
        trial,
        seed,
        kind,
        passed: false,
        before: String::new(),
        after: String::new(),
        site: None,
        window: None,
        error: None,
    };
    let mut chosen = None;
    for attempt in 0..20u64 {
        let bottom = random_bottom(&mut rng, params.max_colour, params.max_cabled);
        let d = random_diagram_with(&bottom, params.n_slices, &cfg, seed ^ (attempt << 32));
        match choose_site(&d, kind, &mut rng) {
            Ok(Some(x)) => {
                chosen = Some(x);
                break;
            }
            Ok(None) => continue,
            Err(e) => {
                outcome.error = Some(e.to_string());
                return outcome;
            }
        }
    }
    let Some((before, site)) = chosen else {
        outcome.error = Some(format!("no {kind} site found"));
        return outcome;
    };
    outcome.before = before.serialize();
    let evaluate = |d: &ColouredDiagram| -> Result<InvariantResult> {
        let mode = match params.mode {
            Some(m) => m,
            None => auto_mode(d)?,
        };
        normalized_invariant_with(d, params.precision, mode, params.convention)
    };
    let result = (|| -> Result<(bool, Option<i64>, String)> {
        let after = apply_move(&before, &site)?;
        let a = evaluate(&before)?;
        let b = evaluate(&after)?;
        let window = [a.precision.achieved, b.precision.achieved]
            .into_iter()
            .flatten()
            .min();
        Ok((a.value.eq_upto(&b.value), window, after.serialize()))
    })();
    outcome.site = Some(site);
    match result {
        Ok((passed, window, after)) => {
            outcome.passed = passed;
            outcome.window = window;
            outcome.after = after;
        }
        Err(e) => outcome.error = Some(e.to_string()),
    }
    outcome
}

/// Random diagrams, random admissible moves, and exact comparison of the
/// normalized invariants before and after.
pub fn verify_invariance(params: &InvarianceParams) -> InvarianceReport {
    let outcomes: Vec<TrialOutcome> = (0..params.trials)
        .into_par_iter()
        .map(|t| run_trial(params, t))
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    InvarianceReport {
        params: params.clone(),
        passed,
        failed: outcomes.len() - passed,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwiner::crossing_pos;
    use crate::qseries::quantum_integer;
    use crate::tangle::parse;

    const P: usize = 24;

    #[test]
    fn unknot() {
        let u = parse("bottom\ncup 1 1 u\ncap 1").unwrap();
        assert_eq!(phi(&u).unwrap().scalar().unwrap(), -&quantum_integer(2));
        assert_eq!(link_invariant(&u, P).unwrap(), -&quantum_integer(2));
    }

    #[test]
    fn identity_tangle() {
        let d = parse("bottom +1 -1 +1").unwrap();
        assert_eq!(phi(&d).unwrap(), Intertwiner::identity(&[1, 1, 1]));
    }

    #[test]
    fn curls() {
        let right_pos = parse("bottom +1\ncup 2 1 u\npos 1\ncap 2").unwrap();
        let v = phi(&right_pos).unwrap();
        assert_eq!(
            v,
            Intertwiner::identity(&[1]).scale(&LaurentSeries::q_pow(-3))
        );
        let right_neg = parse("bottom +1\ncup 2 1 u\nneg 1\ncap 2").unwrap();
        assert_eq!(
            phi(&right_neg).unwrap(),
            Intertwiner::identity(&[1]).scale(&LaurentSeries::q_pow(3))
        );
        let n = normalized_invariant(&right_pos, P).unwrap();
        assert_eq!(n.gamma, 1);
        assert_eq!(n.value, Intertwiner::identity(&[1]));
    }

    #[test]
    fn kinked_unknot() {
        let d = parse("bottom\ncup 1 1 u\ncup 2 1 u\npos 1\ncap 2\ncap 1").unwrap();
        assert_eq!(link_invariant(&d, P).unwrap(), -&quantum_integer(2));
    }

    #[test]
    fn split_unknots_multiply() {
        let d = parse("bottom\ncup 1 1 u\ncap 1\ncup 1 1 d\ncap 1").unwrap();
        let two = quantum_integer(2);
        assert_eq!(link_invariant(&d, P).unwrap(), &two * &two);
    }

    #[test]
    fn coloured_unknots() {
        let u2 = parse("bottom\ncup 1 2 u\ncap 1").unwrap();
        let v = link_invariant(&u2, P).unwrap();
        assert!(v.eq_upto(&quantum_integer(3)), "{v}");
        let s = link_invariant_with(&u2, P, Mode::Sliced).unwrap();
        assert!(s.eq_upto(&v));
        let u1 = parse("bottom\ncup 1 1 u\ncap 1").unwrap();
        assert_eq!(
            link_invariant_with(&u1, P, Mode::Sliced).unwrap(),
            -&quantum_integer(2)
        );
    }

    #[test]
    fn colour_one_global_equals_phi() {
        let d = parse("bottom +1 +1\npos 1\nneg 1\npos 1").unwrap();
        let (g, _) = phi_coloured(&d, P, Mode::Global).unwrap();
        let expected = crossing_pos(2, 1).unwrap();
        assert!(g.eq_upto(&phi(&d).unwrap()));
        assert!(g.eq_upto(&expected));
    }

    #[test]
    fn r2_trials_pass() {
        let report = verify_invariance(&InvarianceParams {
            trials: 10,
            ..Default::default()
        });
        assert!(report.ok(), "{:?}", report.failures().next());
    }
}
