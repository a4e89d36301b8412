#![allow(dead_code)]

pub mod oracle;

use maskforge::{DigitStrategy, DilationContext, IntMatrix, TrigPoly};
use num_rational::BigRational;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Integer-frequency polynomial with coefficients `n / denom`.
pub fn poly(dim: usize, denom: i64, terms: &[(&[i64], i64)]) -> TrigPoly {
    TrigPoly::from_rational_terms(dim, terms.iter().map(|(f, n)| (f.to_vec(), q(*n, denom))))
}

pub fn worked_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, 2], vec![2, -1]]).unwrap()
}

pub fn worked_ctx() -> DilationContext {
    DilationContext::with_digits(
        worked_matrix(),
        DigitStrategy::UserSupplied(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]),
        DigitStrategy::Canonical,
    )
    .unwrap()
}

/// The four polyphase components of the worked example.
pub fn worked_polyphase() -> Vec<TrigPoly> {
    vec![
        poly(
            2,
            16,
            &[(&[0, 0], 4), (&[1, 0], 4), (&[0, 1], 4), (&[1, 1], 4)],
        ),
        poly(
            2,
            16,
            &[
                (&[0, 0], 5),
                (&[1, 0], 4),
                (&[-1, 0], 1),
                (&[0, 1], 2),
                (&[0, -1], 3),
                (&[1, 1], 1),
            ],
        ),
        poly(
            2,
            16,
            &[
                (&[0, 0], 4),
                (&[1, 0], 1),
                (&[-1, 0], 2),
                (&[0, 1], 5),
                (&[0, -1], 1),
                (&[1, 1], 3),
            ],
        ),
        poly(
            2,
            16,
            &[
                (&[0, 0], 5),
                (&[1, 0], 1),
                (&[-1, 0], 4),
                (&[0, 1], 1),
                (&[0, -1], 3),
                (&[1, 1], 1),
                (&[-1, 1], 1),
            ],
        ),
    ]
}

pub fn worked_mask() -> TrigPoly {
    TrigPoly::polyphase_assemble(&worked_polyphase(), &worked_ctx()).unwrap()
}

/// Printed decomposition table, keyed `(j, k, nu)` with one-based `j, k`.
pub fn worked_table() -> Vec<((usize, usize, usize), TrigPoly)> {
    vec![
        (
            (1, 1, 0),
            poly(
                2,
                16,
                &[
                    (&[0, 0], -1),
                    (&[0, 1], 2),
                    (&[1, 1], 1),
                    (&[0, 2], 2),
                    (&[1, 2], 1),
                ],
            ),
        ),
        ((2, 1, 0), poly(2, 16, &[(&[0, 0], 5), (&[0, 1], 3)])),
        ((1, 1, 1), poly(2, 16, &[(&[-1, 0], 1), (&[0, 1], 3)])),
        ((2, 1, 1), poly(2, 16, &[(&[0, 0], 5), (&[0, -1], 3)])),
        (
            (1, 1, 2),
            poly(
                2,
                16,
                &[
                    (&[0, 0], -1),
                    (&[-1, 0], 2),
                    (&[0, 1], 1),
                    (&[0, 2], 1),
                    (&[-1, 1], -1),
                ],
            ),
        ),
        (
            (2, 1, 2),
            poly(2, 16, &[(&[0, 0], 5), (&[0, 1], 3), (&[0, -1], 1)]),
        ),
        (
            (1, 1, 3),
            poly(2, 16, &[(&[-1, 0], 2), (&[0, 1], 2), (&[-1, 1], 1)]),
        ),
        ((2, 1, 3), poly(2, 16, &[(&[0, 0], 5), (&[0, -1], 2)])),
        (
            (1, 2, 0),
            poly(
                2,
                16,
                &[
                    (&[0, 0], 1),
                    (&[1, 0], 1),
                    (&[0, 1], 4),
                    (&[0, -1], 1),
                    (&[1, 1], 3),
                ],
            ),
        ),
        ((2, 2, 0), poly(2, 16, &[(&[0, -1], 1)])),
        (
            (1, 2, 1),
            poly(
                2,
                16,
                &[
                    (&[0, 0], 2),
                    (&[1, 0], 1),
                    (&[-1, 0], 1),
                    (&[0, 1], 1),
                    (&[0, -1], 3),
                    (&[1, 1], 1),
                ],
            ),
        ),
        ((2, 2, 1), TrigPoly::zero(2)),
        (
            (1, 2, 2),
            poly(2, 16, &[(&[0, 0], 3), (&[0, 1], 1), (&[-1, 0], 2)]),
        ),
        ((2, 2, 2), poly(2, 16, &[(&[0, -1], 1)])),
        (
            (1, 2, 3),
            poly(2, 16, &[(&[0, 0], 3), (&[-1, 0], 3), (&[-1, 1], 1)]),
        ),
        ((2, 2, 3), TrigPoly::zero(2)),
    ]
}

/// Entry names listed in the allowlist of known misprints.
pub fn allowlisted_entries() -> Vec<String> {
    include_str!("../data/worked_example_allowlist.txt")
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}
