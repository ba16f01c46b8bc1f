//! Canonical coordinates: the exponents of two operator words that carry a
//! vertex of `B(H, A)` to the sink.
//!
//! The first word is `F1^n F2^m F1^p F2^q`, the second `F2^q' F1^p' F2^m' F1^n'`.
//! Words act as operator compositions, so the rightmost factor goes first.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, Bounds, Configuration, EqualityPattern, ModelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("case formulas disagree on {config}: {detail}")]
    Disagreement {
        config: Configuration,
        detail: String,
    },
}

pub type Quad = [i64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalCoords {
    /// `(n, m, p, q)`
    pub first: Quad,
    /// `(n', m', p', q')`
    pub second: Quad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cone {
    /// `2m' >= p' >= 2q'`, for the second tuple
    C1,
    /// `p >= m >= n`, for the first tuple
    C2,
}

/// Operator word; factors are listed left to right as written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word(pub Vec<(u8, i64)>);

impl Word {
    pub fn first(c: &Quad) -> Word {
        let [n, m, p, q] = *c;
        Word(vec![(1, n), (2, m), (1, p), (2, q)])
    }

    pub fn second(c: &Quad) -> Word {
        let [n, m, p, q] = *c;
        Word(vec![(2, q), (1, p), (2, m), (1, n)])
    }

    pub fn length(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

/// Case parameters and formulas for one equality pattern.
fn case(f: &Configuration, b: &Bounds, pattern: EqualityPattern) -> CanonicalCoords {
    let (hh, aa) = (b.h_cap, b.a_cap);
    let alpha = f.a;
    match pattern {
        EqualityPattern::A => {
            let (beta, gamma, h) = (f.b, f.c, f.x);
            let first = if 2 * beta <= alpha + gamma {
                [
                    hh - h,
                    (aa - gamma) / 2 + hh - h,
                    hh - h + aa - beta,
                    (aa - alpha) / 2,
                ]
            } else {
                [
                    hh - h,
                    (aa + alpha) / 2 - beta + hh - h,
                    hh - h + aa - beta,
                    (aa - alpha) / 2 + beta - (alpha + gamma) / 2,
                ]
            };
            let second = [
                alpha - beta + hh - h,
                (aa - gamma) / 2 + hh - h,
                hh - h + aa - alpha,
                (aa - alpha) / 2,
            ];
            CanonicalCoords { first, second }
        }
        EqualityPattern::B1 => {
            let (h, g, e) = (f.x, f.y, f.z);
            CanonicalCoords {
                first: [
                    hh - h,
                    hh - h + (aa - alpha) / 2,
                    hh - e + aa - alpha,
                    h - (g + e) / 2 + (aa - alpha) / 2,
                ],
                second: [
                    hh - h,
                    hh - (g + e) / 2 + (aa - alpha) / 2,
                    hh - e + aa - alpha,
                    (aa - alpha) / 2,
                ],
            }
        }
        EqualityPattern::B2 => {
            let (h, g, e) = (f.x, f.z, f.w);
            CanonicalCoords {
                first: [
                    hh - h,
                    hh - h + (aa - alpha) / 2,
                    hh - e + aa - alpha,
                    (h - g) / 2 + (aa - alpha) / 2,
                ],
                second: [
                    g - e + hh - h,
                    hh - (g + h) / 2 + (aa - alpha) / 2,
                    hh - g + aa - alpha,
                    (aa - alpha) / 2,
                ],
            }
        }
        EqualityPattern::C1 => {
            let (beta, h, e) = (f.b, f.x, f.w);
            let fl = (alpha - beta).div_euclid(2);
            CanonicalCoords {
                first: [
                    hh - h,
                    (aa - beta) / 2 + hh - h,
                    hh - e + aa - beta,
                    (aa - alpha) / 2,
                ],
                second: [
                    h - e + alpha - beta + hh - h,
                    fl + hh - h + (aa - alpha) / 2,
                    hh - h + aa - alpha,
                    (aa - beta) / 2 - fl,
                ],
            }
        }
        EqualityPattern::C2 => {
            let (gamma, h, g) = (f.c, f.x, f.y);
            CanonicalCoords {
                first: [
                    hh - h,
                    (aa - alpha) / 2 + hh - h,
                    hh - g + aa - alpha,
                    (alpha - gamma) / 2 + h - g + (aa - alpha) / 2,
                ],
                second: [
                    hh - h,
                    (alpha - gamma) / 2 + hh - g + (aa - alpha) / 2,
                    hh - g + aa - alpha,
                    (aa - alpha) / 2,
                ],
            }
        }
    }
}

/// Coordinates from every pattern `f` realizes, in pattern order.
pub fn coords_by_case(
    f: &Configuration,
    b: &Bounds,
) -> Result<Vec<(EqualityPattern, CanonicalCoords)>, CoordsError> {
    if !model::is_admissible(f) {
        return Err(ModelError::Inadmissible(*f).into());
    }
    if !b.is_interval() || !b.contains(f) {
        return Err(ModelError::OutOfBounds {
            config: *f,
            h: b.h_cap,
            a: b.a_cap,
        }
        .into());
    }
    let patterns = model::equality_patterns(f)?;
    Ok(patterns.iter().map(|p| (p, case(f, b, p))).collect())
}

/// Both tuples, after checking that all matching cases agree.
pub fn coords(f: &Configuration, b: &Bounds) -> Result<CanonicalCoords, CoordsError> {
    let cases = coords_by_case(f, b)?;
    let (p0, c0) = cases[0];
    for (p, c) in &cases[1..] {
        if *c != c0 {
            return Err(CoordsError::Disagreement {
                config: *f,
                detail: format!("{p0} gives {c0:?}, {p} gives {c:?}"),
            });
        }
    }
    Ok(c0)
}

pub fn coords_first(f: &Configuration, b: &Bounds) -> Result<Quad, CoordsError> {
    coords(f, b).map(|c| c.first)
}

pub fn coords_second(f: &Configuration, b: &Bounds) -> Result<Quad, CoordsError> {
    coords(f, b).map(|c| c.second)
}

/// Applies a word, rightmost factor first. `Ok(None)` when some step is undefined.
pub fn apply_word(
    f: &Configuration,
    w: &Word,
    b: &Bounds,
) -> Result<Option<Configuration>, ModelError> {
    let mut cur = *f;
    for &(color, exp) in w.0.iter().rev() {
        if exp < 0 {
            return Ok(None);
        }
        for _ in 0..exp {
            let next = match color {
                1 => model::apply_f1(&cur, b)?,
                _ => model::apply_f2(&cur, b)?,
            };
            match next {
                Some(g) => cur = g,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(cur))
}

/// Cone membership; nonnegativity of all four entries is required as well.
pub fn in_cone(c: &Quad, which: Cone) -> bool {
    let [n, m, p, q] = *c;
    let nonneg = c.iter().all(|&v| v >= 0);
    nonneg
        && match which {
            Cone::C1 => 2 * m >= p && p >= 2 * q,
            Cone::C2 => p >= m && m >= n,
        }
}

/// Piecewise-linear map from the second tuple to the first.
pub fn transform(second: &Quad) -> Quad {
    let [n1, m1, p1, q1] = *second;
    [
        n1.min(2 * m1 - p1).min(p1 - 2 * q1),
        m1.min(2 * m1 - p1 + q1).min(n1 + q1),
        p1.max(n1 + 2 * p1 - 2 * m1).max(2 * q1 + n1),
        q1.max(p1 - m1).max(m1 - n1),
    ]
}

/// `n + p = n' + p'` and `m + q = m' + q'`.
pub fn sums_agree(c: &CanonicalCoords) -> bool {
    let ([n, m, p, q], [n1, m1, p1, q1]) = (c.first, c.second);
    n + p == n1 + p1 && m + q == m1 + q1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoordCheck {
    pub first_word_reaches_sink: bool,
    pub second_word_reaches_sink: bool,
    pub first_in_c2: bool,
    pub second_in_c1: bool,
    pub transform_matches: bool,
    pub sums_agree: bool,
}

impl CoordCheck {
    pub fn passed(&self) -> bool {
        self.first_word_reaches_sink
            && self.second_word_reaches_sink
            && self.first_in_c2
            && self.second_in_c1
            && self.transform_matches
            && self.sums_agree
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.first_word_reaches_sink, "first word"),
            (self.second_word_reaches_sink, "second word"),
            (self.first_in_c2, "cone C2"),
            (self.second_in_c1, "cone C1"),
            (self.transform_matches, "transform"),
            (self.sums_agree, "sums"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

pub fn check_coords(
    f: &Configuration,
    c: &CanonicalCoords,
    b: &Bounds,
) -> Result<CoordCheck, ModelError> {
    let sink = Some(b.sink());
    Ok(CoordCheck {
        first_word_reaches_sink: apply_word(f, &Word::first(&c.first), b)? == sink,
        second_word_reaches_sink: apply_word(f, &Word::second(&c.second), b)? == sink,
        first_in_c2: in_cone(&c.first, Cone::C2),
        second_in_c1: in_cone(&c.second, Cone::C1),
        transform_matches: transform(&c.second) == c.first,
        sums_agree: sums_agree(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(h: i64, a: i64) -> Bounds {
        Bounds::interval(h, a).unwrap()
    }

    #[test]
    fn examples() {
        let f = Configuration::new([2, 1, 0, 0, 0, 0, 0]);
        let c = coords(&f, &b(0, 2)).unwrap();
        assert_eq!(c.first, [0, 1, 1, 0]);
        assert_eq!(c.second, [1, 1, 0, 0]);
        let c = coords(&Configuration::ZERO, &b(1, 2)).unwrap();
        assert_eq!(c.first, [1, 2, 3, 1]);
        assert_eq!(c.second, [1, 2, 3, 1]);
        let bb = b(3, 4);
        let c = coords(&bb.sink(), &bb).unwrap();
        assert_eq!(
            c,
            CanonicalCoords {
                first: [0; 4],
                second: [0; 4]
            }
        );
    }

    #[test]
    fn words() {
        let f = Configuration::new([2, 1, 0, 0, 0, 0, 0]);
        let w = Word(vec![(1, 0), (2, 1), (1, 1), (2, 0)]);
        assert_eq!(
            apply_word(&f, &w, &b(0, 2)).unwrap(),
            Some(Configuration::fat(2, 0))
        );
        let w = Word(vec![(1, 1), (2, 2), (1, 3), (2, 1)]);
        assert_eq!(
            apply_word(&Configuration::ZERO, &w, &b(1, 2)).unwrap(),
            Some(Configuration::fat(2, 1))
        );
        assert_eq!(apply_word(&f, &Word::default(), &b(0, 2)).unwrap(), Some(f));
        // the same word read left to right is stuck at once
        let w = Word(vec![(2, 0), (1, 1), (2, 1), (1, 0)]);
        assert_eq!(apply_word(&f, &w, &b(0, 2)).unwrap(), None);
    }

    #[test]
    fn cones_and_transform() {
        assert!(in_cone(&[1, 2, 3, 1], Cone::C1));
        assert!(in_cone(&[1, 2, 3, 1], Cone::C2));
        assert!(!in_cone(&[3, 2, 1, 0], Cone::C2));
        assert_eq!(transform(&[1, 2, 3, 1]), [1, 2, 3, 1]);
        assert_eq!(transform(&[0; 4]), [0; 4]);
        assert_eq!(transform(&[1, 1, 0, 0]), [0, 1, 1, 0]);
    }

    #[test]
    fn rejects_outside_points() {
        let f = Configuration::new([4, 4, 4, 0, 0, 0, 0]);
        assert!(coords(&f, &b(0, 2)).is_err());
    }
}
