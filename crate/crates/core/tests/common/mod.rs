#![allow(dead_code)]

pub const TWO_WAY: &str = "\
S -> A | B
A -> a A d | C
C -> b C c | eps
B -> E F
E -> a E b | eps
F -> c F d | eps
bounds: a, b, c, d
";
pub const BALANCED: &str = "S -> a S b | eps\nbounds: a, b\n";
pub const A_STAR_B_STAR: &str = "S -> A B\nA -> a A | eps\nB -> b B | eps\nbounds: a, b\n";
pub const A_B_A: &str = "S -> A B A\nA -> a A | eps\nB -> b B | eps\nbounds: a, b, a\n";
pub const SINGLE: &str = "S -> a b\nbounds: a, b\n";

/// The test languages with a short name.
pub fn languages() -> Vec<(&'static str, &'static str)> {
    vec![
        ("two-way", TWO_WAY),
        ("balanced", BALANCED),
        ("a*b*", A_STAR_B_STAR),
        ("a*b*a*", A_B_A),
        ("ab", SINGLE),
    ]
}

/// The fixed system suite, by rows.
pub fn system_suite() -> Vec<Vec<Vec<u64>>> {
    vec![
        vec![vec![1, 1]],
        vec![vec![2, 3]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 1, 1], vec![0, 1, 2]],
        vec![vec![2], vec![3]],
        vec![vec![1, 2], vec![2, 1]],
    ]
}
