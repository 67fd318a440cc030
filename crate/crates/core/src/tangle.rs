//! Coloured oriented tangle diagrams as bottom-to-top words of elementary
//! slices, with a line-oriented text format, cabling, the framing count `γ`
//! and local rewriting by Reidemeister-type moves.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    fn letter(self) -> char {
        match self {
            Orientation::Up => 'u',
            Orientation::Down => 'd',
        }
    }

    fn sign(self) -> char {
        match self {
            Orientation::Up => '+',
            Orientation::Down => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub colour: u32,
    pub orientation: Orientation,
}

impl BoundaryPoint {
    pub fn new(colour: u32, orientation: Orientation) -> Self {
        BoundaryPoint {
            colour,
            orientation,
        }
    }

    pub fn up(colour: u32) -> Self {
        Self::new(colour, Orientation::Up)
    }

    pub fn down(colour: u32) -> Self {
        Self::new(colour, Orientation::Down)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.orientation.sign(), self.colour)
    }
}

/// Elementary slice; positions are 1-based strand endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slice {
    /// New points at `pos`, `pos + 1` with orientations `left`, `left.flip()`.
    Cup {
        pos: usize,
        colour: u32,
        left: Orientation,
    },
    Cap {
        pos: usize,
    },
    /// Over strand from bottom-left to top-right.
    Pos {
        pos: usize,
    },
    /// Over strand from bottom-right to top-left.
    Neg {
        pos: usize,
    },
}

impl Slice {
    pub fn pos(&self) -> usize {
        match *self {
            Slice::Cup { pos, .. }
            | Slice::Cap { pos }
            | Slice::Pos { pos }
            | Slice::Neg { pos } => pos,
        }
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Slice::Pos { .. } | Slice::Neg { .. })
    }

    /// Same slice with Pos and Neg exchanged.
    pub fn mirror(&self) -> Slice {
        match *self {
            Slice::Pos { pos } => Slice::Neg { pos },
            Slice::Neg { pos } => Slice::Pos { pos },
            s => s,
        }
    }

    /// Applies the slice to a boundary state.
    pub fn apply(
        &self,
        state: &[BoundaryPoint],
    ) -> std::result::Result<Vec<BoundaryPoint>, String> {
        let w = state.len();
        let mut out = state.to_vec();
        match *self {
            Slice::Cup { pos, colour, left } => {
                if pos < 1 || pos > w + 1 {
                    return Err(format!("cup position {pos} out of range 1..={}", w + 1));
                }
                if colour == 0 {
                    return Err("cup colour must be positive".into());
                }
                out.splice(
                    pos - 1..pos - 1,
                    [
                        BoundaryPoint::new(colour, left),
                        BoundaryPoint::new(colour, left.flip()),
                    ],
                );
            }
            Slice::Cap { pos } => {
                if pos < 1 || pos + 1 > w {
                    return Err(format!("cap position {pos} out of range for {w} points"));
                }
                let (a, b) = (state[pos - 1], state[pos]);
                if a.colour != b.colour {
                    return Err(format!("cap joins colours {} and {}", a.colour, b.colour));
                }
                if a.orientation == b.orientation {
                    return Err("cap joins points of the same orientation".into());
                }
                out.drain(pos - 1..=pos);
            }
            Slice::Pos { pos } | Slice::Neg { pos } => {
                if pos < 1 || pos + 1 > w {
                    return Err(format!(
                        "crossing position {pos} out of range for {w} points"
                    ));
                }
                out.swap(pos - 1, pos);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slice::Cup { pos, colour, left } => write!(f, "cup {pos} {colour} {}", left.letter()),
            Slice::Cap { pos } => write!(f, "cap {pos}"),
            Slice::Pos { pos } => write!(f, "pos {pos}"),
            Slice::Neg { pos } => write!(f, "neg {pos}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColouredDiagram {
    pub name: String,
    pub bottom: Vec<BoundaryPoint>,
    pub slices: Vec<Slice>,
}

impl ColouredDiagram {
    pub fn new(bottom: Vec<BoundaryPoint>, slices: Vec<Slice>) -> Self {
        ColouredDiagram {
            name: String::new(),
            bottom,
            slices,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Boundary states before each slice and after the last one.
    pub fn states(&self) -> Result<Vec<Vec<BoundaryPoint>>> {
        if let Some(p) = self.bottom.iter().find(|p| p.colour == 0) {
            return Err(Error::Validation {
                slice: 0,
                message: format!("boundary point {p} has colour 0"),
            });
        }
        let mut states = Vec::with_capacity(self.slices.len() + 1);
        states.push(self.bottom.clone());
        for (i, s) in self.slices.iter().enumerate() {
            let next = s
                .apply(states.last().unwrap())
                .map_err(|message| Error::Validation {
                    slice: i + 1,
                    message: format!("`{s}`: {message}"),
                })?;
            states.push(next);
        }
        Ok(states)
    }

    pub fn validate(&self) -> Result<()> {
        self.states().map(|_| ())
    }

    pub fn top(&self) -> Result<Vec<BoundaryPoint>> {
        Ok(self.states()?.pop().unwrap())
    }

    pub fn is_uncoloured(&self) -> bool {
        self.bottom.iter().all(|p| p.colour == 1)
            && self
                .slices
                .iter()
                .all(|s| !matches!(s, Slice::Cup { colour, .. } if *colour != 1))
    }

    pub fn max_colour(&self) -> u32 {
        self.bottom
            .iter()
            .map(|p| p.colour)
            .chain(self.slices.iter().filter_map(|s| match s {
                Slice::Cup { colour, .. } => Some(*colour),
                _ => None,
            }))
            .max()
            .unwrap_or(1)
    }

    /// Largest number of cabled strands at any level.
    pub fn max_cabled_width(&self) -> Result<u32> {
        Ok(self
            .states()?
            .iter()
            .map(|s| s.iter().map(|p| p.colour).sum::<u32>())
            .max()
            .unwrap_or(0))
    }

    pub fn crossing_count(&self) -> usize {
        self.slices.iter().filter(|s| s.is_crossing()).count()
    }

    /// Pos and Neg exchanged.
    pub fn mirror(&self) -> Self {
        ColouredDiagram {
            name: self.name.clone(),
            bottom: self.bottom.clone(),
            slices: self.slices.iter().map(Slice::mirror).collect(),
        }
    }

    /// Text form accepted by [`parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!("# name: {}\n", self.name));
        }
        out.push_str("bottom");
        for p in &self.bottom {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
        for s in &self.slices {
            out.push_str(&format!("{s}\n"));
        }
        out
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_point(tok: &str, line: usize, col: usize) -> Result<BoundaryPoint> {
    let orientation = match tok.chars().next() {
        Some('+') => Orientation::Up,
        Some('-') => Orientation::Down,
        _ => {
            return Err(parse_err(
                line,
                col,
                format!("expected `+m` or `-m`, found `{tok}`"),
            ))
        }
    };
    let colour: u32 = tok[1..]
        .parse()
        .map_err(|_| parse_err(line, col + 1, format!("invalid colour in `{tok}`")))?;
    if colour == 0 {
        return Err(parse_err(line, col + 1, "colour must be positive"));
    }
    Ok(BoundaryPoint::new(colour, orientation))
}

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses the tangle text format.
///
/// ```text
/// # name: trefoil-piece
/// bottom +1 +1
/// pos 1
/// cup 1 2 u
/// cap 1
/// expect-top +1 +1
/// ```
pub fn parse(text: &str) -> Result<ColouredDiagram> {
    let mut name = String::new();
    let mut bottom: Option<Vec<BoundaryPoint>> = None;
    let mut slices = Vec::new();
    let mut expect_top: Option<(usize, Vec<BoundaryPoint>)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let (content, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(&raw[i + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(n) = c.trim().strip_prefix("name:") {
                name = n.trim().to_string();
            }
        }
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        if expect_top.is_some() {
            return Err(parse_err(lineno, col, "content after `expect-top`"));
        }
        let args = &toks[1..];
        if bottom.is_none() {
            if head != "bottom" {
                return Err(parse_err(
                    lineno,
                    col,
                    format!("expected `bottom`, found `{head}`"),
                ));
            }
            bottom = Some(
                args.iter()
                    .map(|&(c, t)| parse_point(t, lineno, c))
                    .collect::<Result<_>>()?,
            );
            continue;
        }
        let int_arg = |k: usize, what: &str| -> Result<usize> {
            let &(c, t) = args
                .get(k)
                .ok_or_else(|| parse_err(lineno, col + head.len(), format!("missing {what}")))?;
            t.parse::<usize>()
                .map_err(|_| parse_err(lineno, c, format!("invalid {what} `{t}`")))
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() > n {
                let (c, t) = args[n];
                return Err(parse_err(lineno, c, format!("unexpected token `{t}`")));
            }
            Ok(())
        };
        let slice = match head {
            "cup" => {
                let pos = int_arg(0, "position")?;
                let colour = int_arg(1, "colour")? as u32;
                let &(c, t) = args
                    .get(2)
                    .ok_or_else(|| parse_err(lineno, col, "missing orientation"))?;
                let left = match t {
                    "u" => Orientation::Up,
                    "d" => Orientation::Down,
                    _ => {
                        return Err(parse_err(
                            lineno,
                            c,
                            format!("orientation must be `u` or `d`, found `{t}`"),
                        ))
                    }
                };
                arity(3)?;
                Slice::Cup { pos, colour, left }
            }
            "cap" => {
                let pos = int_arg(0, "position")?;
                arity(1)?;
                Slice::Cap { pos }
            }
            "pos" => {
                let pos = int_arg(0, "position")?;
                arity(1)?;
                Slice::Pos { pos }
            }
            "neg" => {
                let pos = int_arg(0, "position")?;
                arity(1)?;
                Slice::Neg { pos }
            }
            "expect-top" => {
                let pts = args
                    .iter()
                    .map(|&(c, t)| parse_point(t, lineno, c))
                    .collect::<Result<_>>()?;
                expect_top = Some((lineno, pts));
                continue;
            }
            "bottom" => return Err(parse_err(lineno, col, "duplicate `bottom` line")),
            other => return Err(parse_err(lineno, col, format!("unknown slice `{other}`"))),
        };
        slices.push(slice);
    }
    let Some(bottom) = bottom else {
        return Err(parse_err(1, 1, "missing `bottom` line"));
    };
    let d = ColouredDiagram {
        name,
        bottom,
        slices,
    };
    let top = d.top()?;
    if let Some((_, expected)) = expect_top {
        if expected != top {
            let show = |v: &[BoundaryPoint]| {
                v.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            return Err(Error::Validation {
                slice: d.slices.len(),
                message: format!(
                    "top boundary is `{}`, expected `{}`",
                    show(&top),
                    show(&expected)
                ),
            });
        }
    }
    Ok(d)
}

impl FromStr for ColouredDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// An operation on the cabled strands: an uncoloured slice, or a
/// Jones–Wenzl projector on `n` consecutive strands starting at `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CabledOp {
    Slice(Slice),
    Projector { pos: usize, n: u32 },
}

/// First cabled position (1-based) of each coloured point.
pub fn cabled_starts(state: &[BoundaryPoint]) -> Vec<usize> {
    let mut acc = 1;
    state
        .iter()
        .map(|p| {
            let s = acc;
            acc += p.colour as usize;
            s
        })
        .collect()
}

fn cable_point(p: &BoundaryPoint) -> impl Iterator<Item = BoundaryPoint> {
    std::iter::repeat_n(BoundaryPoint::new(1, p.orientation), p.colour as usize)
}

/// Cabled replacement of one coloured slice applied to `state`.
pub fn cable_slice(state: &[BoundaryPoint], slice: &Slice) -> Vec<Slice> {
    let starts = cabled_starts(state);
    let start_of = |i: usize| {
        if i <= starts.len() {
            starts[i - 1]
        } else {
            1 + state.iter().map(|p| p.colour as usize).sum::<usize>()
        }
    };
    match *slice {
        Slice::Cup { pos, colour, left } => {
            let p = start_of(pos);
            (0..colour as usize)
                .map(|j| Slice::Cup {
                    pos: p + j,
                    colour: 1,
                    left,
                })
                .collect()
        }
        Slice::Cap { pos } => {
            let p = start_of(pos);
            let m = state[pos - 1].colour as usize;
            (0..m).rev().map(|j| Slice::Cap { pos: p + j }).collect()
        }
        Slice::Pos { pos } | Slice::Neg { pos } => {
            let p = start_of(pos);
            let m = state[pos - 1].colour as usize;
            let n = state[pos].colour as usize;
            let mut out = Vec::with_capacity(m * n);
            for a in (0..m).rev() {
                for step in 0..n {
                    let at = p + a + step;
                    out.push(match slice {
                        Slice::Pos { .. } => Slice::Pos { pos: at },
                        _ => Slice::Neg { pos: at },
                    });
                }
            }
            out
        }
    }
}

/// The cabling with Jones–Wenzl projectors placed on the left leg of every
/// coloured cup of colour at least two.
pub fn cable_ops(d: &ColouredDiagram) -> Result<Vec<CabledOp>> {
    let states = d.states()?;
    let mut ops = Vec::new();
    for (s, state) in d.slices.iter().zip(&states) {
        ops.extend(cable_slice(state, s).into_iter().map(CabledOp::Slice));
        if let Slice::Cup { pos, colour, .. } = *s {
            if colour >= 2 {
                let p = cabled_starts(state)
                    .get(pos - 1)
                    .copied()
                    .unwrap_or_else(|| 1 + state.iter().map(|p| p.colour as usize).sum::<usize>());
                ops.push(CabledOp::Projector { pos: p, n: colour });
            }
        }
    }
    Ok(ops)
}

/// Replaces every colour-`m` strand by `m` parallel uncoloured strands.
pub fn cable(d: &ColouredDiagram) -> Result<ColouredDiagram> {
    let ops = cable_ops(d)?;
    Ok(ColouredDiagram {
        name: d.name.clone(),
        bottom: d.bottom.iter().flat_map(cable_point).collect(),
        slices: ops
            .into_iter()
            .filter_map(|op| match op {
                CabledOp::Slice(s) => Some(s),
                CabledOp::Projector { .. } => None,
            })
            .collect(),
    })
}

/// Which crossings `γ` counts with which sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaConvention {
    /// `+1` for a Pos crossing of equally oriented strands, `−1` for such a
    /// Neg crossing; crossings of oppositely oriented strands are not counted.
    #[default]
    Standard,
    /// The opposite global sign, kept as a negative control.
    Flipped,
}

/// `γ` of an uncoloured diagram.
pub fn writhe_gamma(d: &ColouredDiagram) -> Result<i64> {
    writhe_gamma_with(d, GammaConvention::Standard)
}

pub fn writhe_gamma_with(d: &ColouredDiagram, convention: GammaConvention) -> Result<i64> {
    if !d.is_uncoloured() {
        return Err(Error::Domain(
            "γ is defined on uncoloured diagrams; cable first".into(),
        ));
    }
    let states = d.states()?;
    let mut g = 0;
    for (s, state) in d.slices.iter().zip(&states) {
        let sign = match s {
            Slice::Pos { .. } => 1,
            Slice::Neg { .. } => -1,
            _ => continue,
        };
        let i = s.pos();
        if state[i - 1].orientation == state[i].orientation {
            g += sign;
        }
    }
    Ok(match convention {
        GammaConvention::Standard => g,
        GammaConvention::Flipped => -g,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    KinkPair,
    R2,
    R3,
    CupCapCrossingSlide,
    ZigZag,
    CrossingPastNestedCups,
    UncolouredR1,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] = [
        MoveKind::KinkPair,
        MoveKind::R2,
        MoveKind::R3,
        MoveKind::CupCapCrossingSlide,
        MoveKind::ZigZag,
        MoveKind::CrossingPastNestedCups,
        MoveKind::UncolouredR1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::KinkPair => "kink-pair",
            MoveKind::R2 => "r2",
            MoveKind::R3 => "r3",
            MoveKind::CupCapCrossingSlide => "cr4",
            MoveKind::ZigZag => "cr5",
            MoveKind::CrossingPastNestedCups => "cr6",
            MoveKind::UncolouredR1 => "r1",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "kink-pair" | "kinkpair" | "cr1" => MoveKind::KinkPair,
            "r2" | "cr2" => MoveKind::R2,
            "r3" | "cr3" => MoveKind::R3,
            "cr4" | "cup-cap-crossing-slide" => MoveKind::CupCapCrossingSlide,
            "cr5" | "zigzag" | "zig-zag" => MoveKind::ZigZag,
            "cr6" | "crossing-past-nested-cups" => MoveKind::CrossingPastNestedCups,
            "r1" | "cr7" | "uncoloured-r1" => MoveKind::UncolouredR1,
            _ => return Err(Error::Domain(format!("unknown move `{s}`"))),
        })
    }
}

/// A local rewrite: the slices `old` starting at index `at` become `new`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveSite {
    pub kind: MoveKind,
    pub at: usize,
    pub old: Vec<Slice>,
    pub new: Vec<Slice>,
}

impl MoveSite {
    /// The rewrite undoing this one on the produced diagram.
    pub fn inverse(&self) -> MoveSite {
        MoveSite {
            kind: self.kind,
            at: self.at,
            old: self.new.clone(),
            new: self.old.clone(),
        }
    }
}

fn pos(p: usize) -> Slice {
    Slice::Pos { pos: p }
}
fn neg(p: usize) -> Slice {
    Slice::Neg { pos: p }
}
fn cap(p: usize) -> Slice {
    Slice::Cap { pos: p }
}
fn cup(p: usize, colour: u32, left: Orientation) -> Slice {
    Slice::Cup {
        pos: p,
        colour,
        left,
    }
}

fn run(state: &[BoundaryPoint], slices: &[Slice]) -> Option<Vec<BoundaryPoint>> {
    let mut s = state.to_vec();
    for sl in slices {
        s = sl.apply(&s).ok()?;
    }
    Some(s)
}

/// Curl on the strand at `i` closing to the right or to the left.
fn curl(
    i: usize,
    colour: u32,
    o: Orientation,
    right: bool,
    crossing: fn(usize) -> Slice,
) -> Vec<Slice> {
    if right {
        vec![cup(i + 1, colour, o), crossing(i), cap(i + 1)]
    } else {
        vec![cup(i, colour, o.flip()), crossing(i + 1), cap(i)]
    }
}

/// Pairs of slice words that the move identifies, valid on the given
/// boundary state. An empty word stands for the identity.
pub fn move_templates(kind: MoveKind, state: &[BoundaryPoint]) -> Vec<(Vec<Slice>, Vec<Slice>)> {
    let w = state.len();
    let mut out: Vec<(Vec<Slice>, Vec<Slice>)> = Vec::new();
    match kind {
        MoveKind::R2 => {
            for i in 1..w {
                out.push((vec![], vec![pos(i), neg(i)]));
                out.push((vec![], vec![neg(i), pos(i)]));
            }
        }
        MoveKind::R3 => {
            for i in 1..w.saturating_sub(1) {
                let j = i + 1;
                out.push((vec![pos(i), pos(j), pos(i)], vec![pos(j), pos(i), pos(j)]));
                out.push((vec![neg(i), neg(j), neg(i)], vec![neg(j), neg(i), neg(j)]));
                out.push((vec![pos(i), pos(j), neg(i)], vec![neg(j), pos(i), pos(j)]));
                out.push((vec![neg(i), neg(j), pos(i)], vec![pos(j), neg(i), neg(j)]));
                out.push((vec![neg(i), pos(j), pos(i)], vec![pos(j), pos(i), neg(j)]));
                out.push((vec![pos(i), neg(j), neg(i)], vec![neg(j), neg(i), pos(j)]));
            }
        }
        MoveKind::CupCapCrossingSlide => {
            for i in 1..w.saturating_sub(1) {
                out.push((vec![pos(i), cap(i + 1)], vec![neg(i + 1), cap(i)]));
                out.push((vec![neg(i), cap(i + 1)], vec![pos(i + 1), cap(i)]));
            }
            let mut colours: Vec<u32> = state.iter().map(|p| p.colour).collect();
            colours.push(1);
            colours.sort_unstable();
            colours.dedup();
            for i in 1..=w {
                for &m in &colours {
                    for o in [Orientation::Up, Orientation::Down] {
                        out.push((
                            vec![cup(i + 1, m, o), pos(i)],
                            vec![cup(i, m, o), neg(i + 1)],
                        ));
                        out.push((
                            vec![cup(i + 1, m, o), neg(i)],
                            vec![cup(i, m, o), pos(i + 1)],
                        ));
                    }
                }
            }
        }
        MoveKind::ZigZag => {
            for i in 1..=w {
                let BoundaryPoint {
                    colour,
                    orientation: o,
                } = state[i - 1];
                out.push((vec![], vec![cup(i + 1, colour, o.flip()), cap(i)]));
                out.push((vec![], vec![cup(i, colour, o), cap(i + 1)]));
            }
        }
        MoveKind::UncolouredR1 => {
            for i in 1..=w {
                let BoundaryPoint {
                    colour,
                    orientation: o,
                } = state[i - 1];
                if colour != 1 {
                    continue;
                }
                for right in [true, false] {
                    for c in [pos as fn(usize) -> Slice, neg] {
                        out.push((vec![], curl(i, 1, o, right, c)));
                    }
                }
            }
        }
        MoveKind::KinkPair => {
            for i in 1..=w {
                let BoundaryPoint {
                    colour,
                    orientation: o,
                } = state[i - 1];
                for right in [true, false] {
                    let p = curl(i, colour, o, right, pos);
                    let n = curl(i, colour, o, right, neg);
                    out.push((vec![], [p.clone(), n.clone()].concat()));
                    out.push((vec![], [n, p].concat()));
                }
            }
        }
        MoveKind::CrossingPastNestedCups => {
            for i in 1..w {
                let a = state[i - 1];
                let b = state[i];
                let lower = |c: fn(usize) -> Slice| {
                    vec![
                        cup(i + 2, a.colour, a.orientation.flip()),
                        cup(i + 3, b.colour, b.orientation.flip()),
                        c(i + 2),
                        cap(i + 1),
                        cap(i),
                    ]
                };
                let upper = |c: fn(usize) -> Slice| {
                    vec![
                        cup(i, a.colour, a.orientation),
                        cup(i + 1, b.colour, b.orientation),
                        c(i + 2),
                        cap(i + 3),
                        cap(i + 2),
                    ]
                };
                let lhs = [lower(neg), upper(pos)].concat();
                let rhs = [lower(pos), upper(neg)].concat();
                out.push((vec![], lhs.clone()));
                out.push((vec![], rhs.clone()));
                out.push((lhs, rhs));
            }
        }
    }
    // keep only pairs valid on this state with matching results
    out.into_iter()
        .filter(|(x, y)| match (run(state, x), run(state, y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
        .collect()
}

/// All places where `kind` applies, in both directions.
pub fn enumerate_move_sites(d: &ColouredDiagram, kind: MoveKind) -> Result<Vec<MoveSite>> {
    let states = d.states()?;
    let mut sites = Vec::new();
    for (g, state) in states.iter().enumerate() {
        for (x, y) in move_templates(kind, state) {
            for (old, new) in [(&x, &y), (&y, &x)] {
                if d.slices[g..].starts_with(old) {
                    let site = MoveSite {
                        kind,
                        at: g,
                        old: old.clone(),
                        new: new.clone(),
                    };
                    if !sites.contains(&site) {
                        sites.push(site);
                    }
                }
            }
        }
    }
    Ok(sites)
}

/// Rewrites `d` at `site`, checking the pattern and both boundaries.
pub fn apply_move(d: &ColouredDiagram, site: &MoveSite) -> Result<ColouredDiagram> {
    if site.at > d.slices.len() || !d.slices[site.at..].starts_with(&site.old) {
        return Err(Error::InvalidMove(format!(
            "{} pattern not found at slice {}",
            site.kind, site.at
        )));
    }
    let mut slices = d.slices[..site.at].to_vec();
    slices.extend_from_slice(&site.new);
    slices.extend_from_slice(&d.slices[site.at + site.old.len()..]);
    let out = ColouredDiagram {
        name: d.name.clone(),
        bottom: d.bottom.clone(),
        slices,
    };
    let top = out
        .top()
        .map_err(|e| Error::InvalidMove(format!("rewrite produces an invalid diagram: {e}")))?;
    if top != d.top()? {
        return Err(Error::InvalidMove(
            "rewrite changes the top boundary".into(),
        ));
    }
    Ok(out)
}

/// Bounds for random diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub max_colour: u32,
    /// Maximum number of coloured points at any level.
    pub max_points: usize,
    /// Maximum number of cabled strands at any level.
    pub max_cabled: u32,
}

impl RandomConfig {
    pub fn new(max_colour: u32) -> Self {
        RandomConfig {
            max_colour,
            max_points: 6,
            max_cabled: 8,
        }
    }
}

fn random_step(state: &[BoundaryPoint], cfg: &RandomConfig, rng: &mut ChaCha8Rng) -> Option<Slice> {
    let w = state.len();
    let cabled: u32 = state.iter().map(|p| p.colour).sum();
    let mut options: Vec<Vec<Slice>> = Vec::new();
    let cups: Vec<Slice> = (1..=cfg.max_colour)
        .filter(|&m| w + 2 <= cfg.max_points && cabled + 2 * m <= cfg.max_cabled)
        .flat_map(|m| {
            (1..=w + 1)
                .flat_map(move |i| [Orientation::Up, Orientation::Down].map(|o| cup(i, m, o)))
        })
        .collect();
    let caps: Vec<Slice> = (1..w)
        .filter(|&i| {
            state[i - 1].colour == state[i].colour
                && state[i - 1].orientation != state[i].orientation
        })
        .map(cap)
        .collect();
    let crossings: Vec<Slice> = (1..w).flat_map(|i| [pos(i), neg(i)]).collect();
    for group in [cups, caps, crossings] {
        if !group.is_empty() {
            options.push(group);
        }
    }
    let group = options.choose(rng)?;
    group.choose(rng).copied()
}

/// A random valid diagram with the given bottom, reproducible from `seed`.
pub fn random_diagram(
    bottom: &[BoundaryPoint],
    n_slices: usize,
    max_colour: u32,
    seed: u64,
) -> ColouredDiagram {
    random_diagram_with(bottom, n_slices, &RandomConfig::new(max_colour), seed)
}

pub fn random_diagram_with(
    bottom: &[BoundaryPoint],
    n_slices: usize,
    cfg: &RandomConfig,
    seed: u64,
) -> ColouredDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = bottom.to_vec();
    let mut slices = Vec::with_capacity(n_slices);
    for _ in 0..n_slices {
        let Some(s) = random_step(&state, cfg, &mut rng) else {
            break;
        };
        state = s.apply(&state).expect("random slices are valid");
        slices.push(s);
    }
    ColouredDiagram::new(bottom.to_vec(), slices).named(&format!("random-{seed}"))
}

/// A random closed diagram: random slices from the empty boundary, then
/// closing crossings and caps until nothing is left.
pub fn random_link(n_slices: usize, cfg: &RandomConfig, seed: u64) -> ColouredDiagram {
    let mut d = random_diagram_with(&[], n_slices, cfg, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut state = d.top().expect("valid");
    while !state.is_empty() {
        let caps: Vec<usize> = (1..state.len())
            .filter(|&i| {
                state[i - 1].colour == state[i].colour
                    && state[i - 1].orientation != state[i].orientation
            })
            .collect();
        let s = if let Some(&i) = caps.choose(&mut rng) {
            cap(i)
        } else {
            // bring the nearest partner of the first point next to it
            let a = state[0];
            let j = (1..state.len())
                .find(|&j| state[j].colour == a.colour && state[j].orientation != a.orientation)
                .expect("boundary of a closed diagram is balanced");
            if rng.gen_bool(0.5) {
                pos(j)
            } else {
                neg(j)
            }
        };
        state = s.apply(&state).expect("closing slices are valid");
        d.slices.push(s);
    }
    d.named(&format!("link-{seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let u = parse("bottom\ncup 1 1 u\ncap 1").unwrap();
        assert!(u.bottom.is_empty());
        assert_eq!(u.slices.len(), 2);
        assert!(u.top().unwrap().is_empty());

        let x = parse("bottom +1 +1\npos 1").unwrap();
        assert_eq!(x.bottom, vec![BoundaryPoint::up(1); 2]);
        assert_eq!(x.slices, vec![Slice::Pos { pos: 1 }]);

        let u2 = parse("bottom\ncup 1 2 u\ncap 1").unwrap();
        assert_eq!(u2.max_colour(), 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("bottom\ncup 1 1 x") {
            Err(Error::Parse {
                line: 2, column: 9, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse("bottom +1 -1\ncap 1\ncap 1") {
            Err(Error::Validation { slice: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("bottom +1 +1\ncap 1"),
            Err(Error::Validation { slice: 1, .. })
        ));
        assert!(matches!(
            parse("bottom +1 +2\ncap 1"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(parse("pos 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse("bottom +1\nexpect-top -1"),
            Err(Error::Validation { .. })
        ));
        assert!(parse("bottom +1 # strand\n\nexpect-top +1").is_ok());
    }

    #[test]
    fn serialize_round_trip() {
        let d = parse("# name: demo\nbottom +2 -1\ncup 2 3 d\nneg 1\npos 2\n").unwrap();
        assert_eq!(parse(&d.serialize()).unwrap(), d);
    }

    #[test]
    fn cabling() {
        let u2 = parse("bottom\ncup 1 2 u\ncap 1").unwrap();
        let c = cable(&u2).unwrap();
        let o = Orientation::Up;
        assert_eq!(
            c.slices,
            vec![
                Slice::Cup {
                    pos: 1,
                    colour: 1,
                    left: o
                },
                Slice::Cup {
                    pos: 2,
                    colour: 1,
                    left: o
                },
                Slice::Cap { pos: 2 },
                Slice::Cap { pos: 1 }
            ]
        );
        let x = parse("bottom +2 +1\npos 1").unwrap();
        assert_eq!(
            cable(&x).unwrap().slices,
            vec![Slice::Pos { pos: 2 }, Slice::Pos { pos: 1 }]
        );
        let one = parse("bottom +1 -1\nneg 1\ncap 1").unwrap();
        assert_eq!(cable(&one).unwrap(), one);
    }

    #[test]
    fn gamma_of_curls() {
        let right = parse("bottom +1\ncup 2 1 u\npos 1\ncap 2").unwrap();
        assert_eq!(writhe_gamma(&right).unwrap(), 1);
        let mirror = parse("bottom +1\ncup 2 1 u\nneg 1\ncap 2").unwrap();
        assert_eq!(writhe_gamma(&mirror).unwrap(), -1);
        assert_eq!(
            writhe_gamma_with(&right, GammaConvention::Flipped).unwrap(),
            -1
        );
        assert_eq!(writhe_gamma(&parse("bottom +1 -1").unwrap()).unwrap(), 0);
    }

    #[test]
    fn zigzag_removal() {
        let d = parse("bottom +1\ncup 2 1 d\ncap 1").unwrap();
        let sites = enumerate_move_sites(&d, MoveKind::ZigZag).unwrap();
        let removal = sites.iter().find(|s| s.new.is_empty()).unwrap();
        let straight = apply_move(&d, removal).unwrap();
        assert!(straight.slices.is_empty());
    }

    #[test]
    fn r2_insert_then_remove() {
        let d = parse("bottom +1 -1\npos 1").unwrap();
        let site = enumerate_move_sites(&d, MoveKind::R2)
            .unwrap()
            .into_iter()
            .find(|s| s.old.is_empty())
            .unwrap();
        let e = apply_move(&d, &site).unwrap();
        assert_eq!(apply_move(&e, &site.inverse()).unwrap(), d);
    }

    #[test]
    fn kink_pair_keeps_cabled_gamma() {
        let d = parse("bottom +2 -1\npos 1").unwrap();
        for site in enumerate_move_sites(&d, MoveKind::KinkPair).unwrap() {
            let e = apply_move(&d, &site).unwrap();
            assert_eq!(
                writhe_gamma(&cable(&e).unwrap()).unwrap(),
                writhe_gamma(&cable(&d).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn uncoloured_r1_only_on_colour_one() {
        let d = parse("bottom +2 -1").unwrap();
        let sites = enumerate_move_sites(&d, MoveKind::UncolouredR1).unwrap();
        assert!(!sites.is_empty());
        assert!(sites.iter().all(|s| s
            .new
            .iter()
            .all(|sl| !matches!(sl, Slice::Cup { colour: 2, .. }))));
    }

    #[test]
    fn random_diagrams_are_reproducible_and_valid() {
        let b = [BoundaryPoint::up(1), BoundaryPoint::down(2)];
        let a = random_diagram(&b, 12, 2, 7);
        assert_eq!(a, random_diagram(&b, 12, 2, 7));
        assert!(a.validate().is_ok());
        assert!(random_diagram(&b, 0, 2, 7).slices.is_empty());
        let l = random_link(8, &RandomConfig::new(2), 3);
        assert!(l.top().unwrap().is_empty());
    }
}
