//! Quivers, relations and differentials of the worked examples. Each
//! unoriented edge stands for a pair of opposite arrows. Paths are written
//! `(i|j|k)` and compose by concatenation, `(2|1)(1|2) = (2|1|2)`.

pub const GL2_VERTICES: &[u8] = &[1, 2];
pub const GL2_EDGES: &[(u8, u8)] = &[(1, 2)];
pub const GL2_RELATIONS: &[&str] = &["(1|2|1) = 0"];

pub const GL3_VERTICES: &[u8] = &[1, 2, 3];
pub const GL3_EDGES: &[(u8, u8)] = &[(1, 2), (2, 3)];
pub const GL3_RELATIONS: &[&str] = &["(1|2|1) = 0"];
/// Not among the listed relations. Without it the algebra is infinite
/// dimensional and `End((3)A)` is not `C[x]/(x^3)`. With the opposite sign
/// `f_1 ∘ f_2 != 0` for the `(1,2)` complex.
pub const GL3_EXTRA_RELATIONS: &[&str] = &["(2|1|2) = (2|3|2)"];

pub const GAMMA_VERTICES: &[u8] = &[1, 2, 3, 4, 5, 6];
pub const GAMMA_EDGES: &[(u8, u8)] = &[(6, 5), (2, 1), (1, 5), (2, 3), (3, 5), (2, 4), (4, 5)];
/// The relations for `Γ` as listed. They span all 17 quadratic relations,
/// but the quotient has dimension 73 with graded pieces
/// `[6, 14, 21, 16, 11, 4, 1]`, and the resolution of `L(1)` below is not a
/// complex over it.
pub const GAMMA_RELATIONS_LISTED: &[&str] = &[
    "(1|2|1) = 0",
    "(1|5|1) = 0",
    "(6|5|1) = 0",
    "(1|5|6) = 0",
    "(3|5|3) = 0",
    "(4|5|4) = 0",
    "(1|2|3) = (1|5|3)",
    "(1|2|4) = (1|5|4)",
    "(4|2|3) = (4|5|3)",
    "(3|2|4) = (3|5|4)",
    "(2|4|5) + (2|1|5)+(2|3|5)=0",
    "(5|4|2) + (5|3|2)+(5|1|2)=0",
    "(5|6|5) -(5|3|5)-(5|4|5)=0",
    "(3|2|1) = (3|5|1)",
    "(4|2|1) = (4|5|1)",
    "(2|3|2) = (2|1|2)",
    "(2|1|2) = (2|4|2)",
];

/// The listed relations with the two mixed `3`/`4` squares anticommuting.
/// The quotient then has graded dimension `[6, 14, 21, 20, 17, 10, 6, 2, 1]`,
/// and every `e_a A e_b` matches the Kazhdan–Lusztig prediction for the
/// `S_2 × S_2`-singular block of `gl_4`.
pub const GAMMA_RELATIONS: &[&str] = &[
    "(1|2|1) = 0",
    "(1|5|1) = 0",
    "(6|5|1) = 0",
    "(1|5|6) = 0",
    "(3|5|3) = 0",
    "(4|5|4) = 0",
    "(1|2|3) = (1|5|3)",
    "(1|2|4) = (1|5|4)",
    "(4|2|3) = -(4|5|3)",
    "(3|2|4) = -(3|5|4)",
    "(2|4|5) + (2|1|5)+(2|3|5)=0",
    "(5|4|2) + (5|3|2)+(5|1|2)=0",
    "(5|6|5) -(5|3|5)-(5|4|5)=0",
    "(3|2|1) = (3|5|1)",
    "(4|2|1) = (4|5|1)",
    "(2|3|2) = (2|1|2)",
    "(2|1|2) = (2|4|2)",
];

/// Vertices of the idempotent truncation `C = eAe`.
pub const GAMMA_TRUNCATION: &[u8] = &[1, 5, 6];

pub const DELTA1_BASIS: &[&str] = &["(1)", "(5|1)", "(5|3|2|1)", "(6|5|3|2|1)"];
pub const DELTA5_BASIS: &[&str] = &[
    "(5)",
    "(5|4|5)",
    "(5|3|5)",
    "(5|6|5|6|5)",
    "(6|5)",
    "(6|5|4|5)",
    "(6|5|6|5)",
    "(6|5|3|2|3|5)",
];
pub const DELTA6_BASIS: &[&str] = &["(6)"];
pub const BAR_DELTA5_BASIS: &[&str] = &["(5)", "(6|5)"];

/// `S_1 ⊂ S_2 ⊂ S_3 ⊂ S_4 = Δ(5)` and the shifts of `S_i / S_{i-1}`.
pub const FILTRATION: &[(&[&str], i64)] = &[
    (&["(5|6|5|6|5)", "(6|5|3|2|3|5)"], 4),
    (&["(5|6|5|6|5)", "(6|5|3|2|3|5)", "(5|4|5)", "(6|5|4|5)"], 2),
    (
        &[
            "(5|6|5|6|5)",
            "(6|5|3|2|3|5)",
            "(5|4|5)",
            "(6|5|4|5)",
            "(5|3|5)",
            "(6|5|6|5)",
        ],
        2,
    ),
    (
        &[
            "(5|6|5|6|5)",
            "(6|5|3|2|3|5)",
            "(5|4|5)",
            "(6|5|4|5)",
            "(5|3|5)",
            "(6|5|6|5)",
            "(5)",
            "(6|5)",
        ],
        0,
    ),
];

/// A term `q^s C(i)` of a complex of projective `C`-modules.
pub type ProjectiveSummand = (u8, i64);

/// Terms of the resolution of `L(1)` in homological degree `h <= 0`.
pub fn l1_resolution_term(h: i64) -> Vec<ProjectiveSummand> {
    match -h {
        0 => vec![(1, 0)],
        1 => vec![(5, 1)],
        2 => vec![(1, 2), (6, 2), (1, 4)],
        3 => vec![(5, 5)],
        m if m % 2 == 0 => {
            let n = m / 2;
            vec![(5, 4 * n - 1), (1, 4 * n)]
        }
        m => {
            let n = (m - 1) / 2;
            vec![(5, 4 * n + 1), (1, 4 * n)]
        }
    }
}

/// Differential from degree `h` to `h + 1`, as `[target][source]` entries.
/// An entry `u` maps `x` to `x·u`.
pub fn l1_resolution_differential(h: i64) -> Vec<Vec<&'static str>> {
    match -h {
        1 => vec![vec!["(51)"]],
        2 => vec![vec!["(15)", "(65)", "(1235)"]],
        3 => vec![
            vec![r"\frac{1}{2} (5321)"],
            vec![r"(5456) - \frac{1}{2} (5656)"],
            vec![r"-\frac{1}{2}(51)"],
        ],
        4 => vec![vec![r"(535)+(545)-\frac{1}{2}(515)", "(1535)"]],
        m if m % 2 == 1 => vec![vec!["(545)-(535)", "(15)"], vec!["-(51)", "0"]],
        _ => vec![
            vec![r"(535)+(545)-\frac{1}{2}(515)", "(1535)"],
            vec!["-(5321)", "0"],
        ],
    }
}

/// A summand `A(i) ⊗ (j)A ⟨s⟩` of a bimodule complex.
pub type BimoduleSummand = (u8, u8, i64);

/// Terms of the complex for the projector on `V_1 ⊗ V_1`.
pub fn gl2_term(n: i64) -> Vec<BimoduleSummand> {
    vec![(2, 2, 2 * n)]
}

/// `f_n((2) ⊗ (2))`.
pub fn gl2_differential(n: i64) -> Vec<((u8, u8), String)> {
    let text = if n % 2 == 1 {
        "(2) ⊗ (2|1|2) - (2|1|2) ⊗ (2)"
    } else {
        "(2) ⊗ (2|1|2) + (2|1|2) ⊗ (2)"
    };
    vec![((2, 2), text.to_string())]
}

pub fn gl3_p3_term(n: i64) -> Vec<BimoduleSummand> {
    vec![(3, 3, 6 * (n / 2) + 2 * (n % 2))]
}

pub fn gl3_p3_differential(n: i64) -> Vec<((u8, u8), String)> {
    let text = if n % 2 == 1 {
        "(3) ⊗ (3|2|3) - (3|2|3) ⊗ (3)"
    } else {
        "(3) ⊗ (3|2|3|2|3) + (3|2|3) ⊗ (3|2|3) + (3|2|3|2|3) ⊗ (3)"
    };
    vec![((3, 3), text.to_string())]
}

pub fn gl3_p21_term(n: i64) -> Vec<BimoduleSummand> {
    match n {
        0 => vec![(2, 2, 0), (3, 3, 0)],
        1 => vec![(2, 3, 1), (3, 2, 1)],
        _ => vec![(2, 2, 2 * n)],
    }
}

pub fn gl3_p21_differential(n: i64) -> Vec<((u8, u8), String)> {
    match n {
        1 => vec![
            ((2, 3), "(2) ⊗ (2|3) - (2|3) ⊗ (3)".into()),
            ((3, 2), "(3|2) ⊗ (2) - (3) ⊗ (3|2)".into()),
        ],
        2 => vec![(
            (2, 2),
            "(2) ⊗ (3|2|3|2) + (2|3|2) ⊗ (3|2) -(2|3) ⊗ (2|3|2) - (2|3|2|3) ⊗ (2)".into(),
        )],
        _ if n % 2 == 1 => vec![((2, 2), "(2) ⊗ (2|3|2) - (2|3|2) ⊗ (2)".into())],
        _ => vec![((2, 2), "(2) ⊗ (2|3|2) + (2|3|2) ⊗ (2)".into())],
    }
}

pub fn gl3_p12_term(n: i64) -> Vec<BimoduleSummand> {
    match n {
        0 => vec![(1, 1, 0), (3, 3, 0)],
        1 => vec![(3, 1, 2), (1, 3, 2), (3, 3, 2)],
        _ => vec![(1, 1, 2 * n), (3, 3, 2 * n), (3, 1, 2 * n), (1, 3, 2 * n)],
    }
}

fn sign(e: i64) -> &'static str {
    if e.rem_euclid(2) == 0 {
        "+"
    } else {
        "-"
    }
}

pub fn gl3_p12_differential(n: i64) -> Vec<((u8, u8), String)> {
    p12(n, (n - 1).div_euclid(2))
}

/// The `(1,2)` differentials with the fewest sign changes that make every
/// composite vanish: three terms of `f_3`, and the last term of
/// `f_n((1) ⊗ (3))` for `n >= 4`.
pub fn gl3_p12_differential_repaired(n: i64) -> Vec<((u8, u8), String)> {
    match n {
        3 => vec![
            ((1, 1), "(1|2|3) ⊗ (1) + (1) ⊗ (3|2|1)".into()),
            (
                (3, 3),
                "-(3) ⊗ (1|2|3) - (3|2|1) ⊗ (3) - (3) ⊗ (3|2|3) + (3|2|3) ⊗ (3)".into(),
            ),
            (
                (3, 1),
                "(3|2|3) ⊗ (1) + (3) ⊗ (3|2|1) - (3|2|1) ⊗ (1)".into(),
            ),
            (
                (1, 3),
                "(1) ⊗ (3|2|3) + (1) ⊗ (1|2|3) - (1|2|3) ⊗ (3)".into(),
            ),
        ],
        _ => p12(n, (n + 1).div_euclid(2)),
    }
}

fn p12(n: i64, last: i64) -> Vec<((u8, u8), String)> {
    match n {
        1 => vec![
            ((3, 1), "(3|2|1) ⊗ (1) - (3) ⊗ (3|2|1)".into()),
            ((1, 3), "(1) ⊗ (1|2|3) - (1|2|3) ⊗ (3)".into()),
            ((3, 3), "(3|2|3) ⊗ (3) - (3) ⊗ (3|2|3)".into()),
        ],
        2 => vec![
            ((1, 1), "(1|2|3) ⊗ (1) -(1) ⊗ (3|2|1)".into()),
            (
                (3, 3),
                "(3) ⊗ (1|2|3) -(3|2|1) ⊗ (3)-(3|2|3) ⊗ (3) - (3) ⊗ (3|2|3)".into(),
            ),
            ((3, 1), "(3|2|3) ⊗ (1) +(3) ⊗ (3|2|1)".into()),
            ((1, 3), "(1) ⊗ (3|2|3) -(1|2|3) ⊗ (3)".into()),
        ],
        _ => {
            let a = sign((n + 4).div_euclid(2));
            let b = sign((n - 1).div_euclid(2));
            vec![
                ((1, 1), "(1|2|3) ⊗ (1) + (1) ⊗ (3|2|1)".into()),
                (
                    (3, 3),
                    format!(
                        "{a}(3) ⊗ (1|2|3) {a} (3|2|1) ⊗ (3) + (3) ⊗ (3|2|3) {} (3|2|3) ⊗ (3)",
                        sign(n)
                    ),
                ),
                (
                    (3, 1),
                    format!("(3|2|3) ⊗ (1) {b} (3) ⊗ (3|2|1) -(3|2|1) ⊗ (1)"),
                ),
                (
                    (1, 3),
                    format!(
                        "{}(1) ⊗ (3|2|3) + (1) ⊗ (1|2|3) {} (1|2|3) ⊗ (3)",
                        sign(n + 1),
                        sign(last)
                    ),
                ),
            ]
        }
    }
}
