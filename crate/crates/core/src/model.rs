//! The crossing model of the free regular B2 crystal.
//!
//! A vertex is a function on the seven nodes of two chains, the top chain
//! `a >= b >= c` and the bottom chain `x >= y >= z >= w`. Admissible values
//! satisfy parity constraints (`a`, `c` even, `y + z` even) and realize at
//! least one of five equality patterns. The operators `F1` and `F2` raise a
//! configuration by one step of the corresponding color; bounded intervals
//! `B(H, A)` cut the free crystal down to a finite regular crystal.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("chain ordering violated in {0} (need a>=b>=c and x>=y>=z>=w)")]
    Ordering(Configuration),
    #[error("configuration {0} is not admissible")]
    Inadmissible(Configuration),
    #[error("configuration {config} lies outside the interval B({h}, {a})")]
    OutOfBounds {
        config: Configuration,
        h: i64,
        a: i64,
    },
    #[error("invalid bounds: H={h}, A={a} (need H >= 0 and even A >= 0)")]
    InvalidBounds { h: i64, a: i64 },
    #[error("two distinct preimages {} and {} of {} under F{color}", .found[1], .found[2], .found[0])]
    AmbiguousPreimage {
        color: u8,
        /// Target, first preimage, second preimage.
        found: Box<[Configuration; 3]>,
    },
}

/// Seven integer values on the crossing diagram, `[a, b, c | x, y, z, w]`.
///
/// Construction does not validate; use [`is_admissible`] or the operator
/// functions, which reject inadmissible input.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 7]", into = "[i64; 7]")]
pub struct Configuration {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub w: i64,
}

impl Configuration {
    pub const ZERO: Configuration = Configuration::new([0; 7]);

    pub const fn new(v: [i64; 7]) -> Self {
        Configuration {
            a: v[0],
            b: v[1],
            c: v[2],
            x: v[3],
            y: v[4],
            z: v[5],
            w: v[6],
        }
    }

    /// The fat vertex with top chain constant `top` and bottom chain constant `bottom`.
    pub const fn fat(top: i64, bottom: i64) -> Self {
        Configuration::new([top, top, top, bottom, bottom, bottom, bottom])
    }

    pub fn to_array(self) -> [i64; 7] {
        [self.a, self.b, self.c, self.x, self.y, self.z, self.w]
    }

    pub fn chains_ordered(&self) -> bool {
        self.a >= self.b
            && self.b >= self.c
            && self.x >= self.y
            && self.y >= self.z
            && self.z >= self.w
    }

    pub fn parity_ok(&self) -> bool {
        self.a.rem_euclid(2) == 0
            && self.c.rem_euclid(2) == 0
            && (self.y + self.z).rem_euclid(2) == 0
    }

    /// Both chains constant (the top value is even whenever `a` is).
    pub fn is_fat(&self) -> bool {
        self.a == self.b
            && self.b == self.c
            && self.a.rem_euclid(2) == 0
            && self.x == self.y
            && self.y == self.z
            && self.z == self.w
    }

    fn equalities(&self) -> u8 {
        let mut bits = 0;
        for (i, holds) in [
            self.a == self.b,
            self.b == self.c,
            self.x == self.y,
            self.y == self.z,
            self.z == self.w,
        ]
        .into_iter()
        .enumerate()
        {
            if holds {
                bits |= 1 << i;
            }
        }
        bits
    }
}

impl From<[i64; 7]> for Configuration {
    fn from(v: [i64; 7]) -> Self {
        Configuration::new(v)
    }
}

impl From<Configuration> for [i64; 7] {
    fn from(f: Configuration) -> Self {
        f.to_array()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{}|{},{},{},{})",
            self.a, self.b, self.c, self.x, self.y, self.z, self.w
        )
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The five equality combinations a configuration may realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EqualityPattern {
    /// `x = y = z = w`
    A,
    /// `a = b = c`, `z = w`
    B1,
    /// `a = b = c`, `x = y`
    B2,
    /// `b = c`, `x = y = z`
    C1,
    /// `a = b`, `y = z = w`
    C2,
}

// bit positions in `Configuration::equalities`
const AB: u8 = 1 << 0;
const BC: u8 = 1 << 1;
const XY: u8 = 1 << 2;
const YZ: u8 = 1 << 3;
const ZW: u8 = 1 << 4;

impl EqualityPattern {
    pub const ALL: [EqualityPattern; 5] = [
        EqualityPattern::A,
        EqualityPattern::B1,
        EqualityPattern::B2,
        EqualityPattern::C1,
        EqualityPattern::C2,
    ];

    fn required(self) -> u8 {
        match self {
            EqualityPattern::A => XY | YZ | ZW,
            EqualityPattern::B1 => AB | BC | ZW,
            EqualityPattern::B2 => AB | BC | XY,
            EqualityPattern::C1 => BC | XY | YZ,
            EqualityPattern::C2 => AB | YZ | ZW,
        }
    }

    /// Image of the pattern under the star involution.
    pub fn starred(self) -> Self {
        match self {
            EqualityPattern::A => EqualityPattern::A,
            EqualityPattern::B1 => EqualityPattern::B2,
            EqualityPattern::B2 => EqualityPattern::B1,
            EqualityPattern::C1 => EqualityPattern::C2,
            EqualityPattern::C2 => EqualityPattern::C1,
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for EqualityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A subset of [`EqualityPattern`]s.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PatternSet(u8);

impl PatternSet {
    pub fn empty() -> Self {
        PatternSet(0)
    }

    pub fn contains(&self, p: EqualityPattern) -> bool {
        self.0 & p.bit() != 0
    }

    pub fn insert(&mut self, p: EqualityPattern) {
        self.0 |= p.bit();
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = EqualityPattern> + '_ {
        EqualityPattern::ALL
            .into_iter()
            .filter(|p| self.contains(*p))
    }

    pub fn starred(&self) -> PatternSet {
        self.iter().map(EqualityPattern::starred).collect()
    }
}

impl FromIterator<EqualityPattern> for PatternSet {
    fn from_iter<I: IntoIterator<Item = EqualityPattern>>(iter: I) -> Self {
        let mut set = PatternSet::empty();
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Interval,
    Free,
}

/// Caps of an interval `B(H, A)`, or the unbounded free crystal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub h_cap: i64,
    pub a_cap: i64,
    pub mode: Mode,
}

impl Bounds {
    pub fn interval(h: i64, a: i64) -> Result<Self, ModelError> {
        if h < 0 || a < 0 || a % 2 != 0 {
            return Err(ModelError::InvalidBounds { h, a });
        }
        Ok(Bounds {
            h_cap: h,
            a_cap: a,
            mode: Mode::Interval,
        })
    }

    pub fn free() -> Self {
        Bounds {
            h_cap: 0,
            a_cap: 0,
            mode: Mode::Free,
        }
    }

    pub fn is_interval(&self) -> bool {
        self.mode == Mode::Interval
    }

    pub fn contains(&self, f: &Configuration) -> bool {
        match self.mode {
            Mode::Free => true,
            Mode::Interval => f.c >= 0 && f.w >= 0 && f.a <= self.a_cap && f.x <= self.h_cap,
        }
    }

    /// The lowest vertex of the interval (the crystal's source).
    pub fn source(&self) -> Configuration {
        Configuration::ZERO
    }

    /// The highest fat vertex of the interval (the crystal's sink).
    pub fn sink(&self) -> Configuration {
        Configuration::fat(self.a_cap, self.h_cap)
    }
}

/// Every pattern whose equality set holds in `f`.
pub fn equality_patterns(f: &Configuration) -> Result<PatternSet, ModelError> {
    if !f.chains_ordered() {
        return Err(ModelError::Ordering(*f));
    }
    let eq = f.equalities();
    Ok(EqualityPattern::ALL
        .into_iter()
        .filter(|p| eq & p.required() == p.required())
        .collect())
}

pub fn is_admissible(f: &Configuration) -> bool {
    f.parity_ok() && equality_patterns(f).is_ok_and(|p| !p.is_empty())
}

fn check_domain(f: &Configuration, bounds: &Bounds) -> Result<(), ModelError> {
    if !is_admissible(f) {
        return Err(ModelError::Inadmissible(*f));
    }
    if !bounds.contains(f) {
        return Err(ModelError::OutOfBounds {
            config: *f,
            h: bounds.h_cap,
            a: bounds.a_cap,
        });
    }
    Ok(())
}

fn raw_f1(f: &Configuration, bounds: &Bounds) -> Option<Configuration> {
    let mut g = *f;
    if f.w < f.z {
        g.w += 1;
    } else if f.b < f.a {
        g.b += 1;
    } else {
        if bounds.is_interval() && f.x >= bounds.h_cap {
            return None;
        }
        g.x += 1;
    }
    Some(g)
}

fn raw_f2(f: &Configuration, bounds: &Bounds) -> Option<Configuration> {
    let mut g = *f;
    if f.a - f.b < f.b - f.c {
        g.c += 2;
    } else if f.y + 2 <= f.x {
        g.y += 2;
    } else if f.y + 1 == f.x {
        g.y += 1;
        g.z += 1;
    } else if f.z < f.y {
        g.z += 2;
    } else {
        if bounds.is_interval() && f.a >= bounds.a_cap {
            return None;
        }
        g.a += 2;
    }
    Some(g)
}

/// `F1`: raises `w`, else `b`, else `x`. `Ok(None)` when undefined on the interval.
pub fn apply_f1(f: &Configuration, bounds: &Bounds) -> Result<Option<Configuration>, ModelError> {
    check_domain(f, bounds)?;
    Ok(raw_f1(f, bounds))
}

/// `F2`: five branches, tried in order `c+2`, `y+2`, `y+1,z+1`, `z+2`, `a+2`.
pub fn apply_f2(f: &Configuration, bounds: &Bounds) -> Result<Option<Configuration>, ModelError> {
    check_domain(f, bounds)?;
    Ok(raw_f2(f, bounds))
}

fn preimage(
    f: &Configuration,
    bounds: &Bounds,
    color: u8,
    candidates: &[Configuration],
    forward: fn(&Configuration, &Bounds) -> Option<Configuration>,
) -> Result<Option<Configuration>, ModelError> {
    check_domain(f, bounds)?;
    let mut found: Option<Configuration> = None;
    for g in candidates {
        if !is_admissible(g) || !bounds.contains(g) || forward(g, bounds) != Some(*f) {
            continue;
        }
        match found {
            Some(first) if first != *g => {
                return Err(ModelError::AmbiguousPreimage {
                    color,
                    found: Box::new([*f, first, *g]),
                })
            }
            _ => found = Some(*g),
        }
    }
    Ok(found)
}

/// `E1 = F1^{-1}`, found among the single-step decrements of `x`, `b` and `w`.
pub fn apply_e1(f: &Configuration, bounds: &Bounds) -> Result<Option<Configuration>, ModelError> {
    let candidates = [
        Configuration { x: f.x - 1, ..*f },
        Configuration { b: f.b - 1, ..*f },
        Configuration { w: f.w - 1, ..*f },
    ];
    preimage(f, bounds, 1, &candidates, raw_f1)
}

/// `E2 = F2^{-1}`, found among the decrements that undo each `F2` branch.
pub fn apply_e2(f: &Configuration, bounds: &Bounds) -> Result<Option<Configuration>, ModelError> {
    let candidates = [
        Configuration { a: f.a - 2, ..*f },
        Configuration { y: f.y - 2, ..*f },
        Configuration {
            y: f.y - 1,
            z: f.z - 1,
            ..*f
        },
        Configuration { z: f.z - 2, ..*f },
        Configuration { c: f.c - 2, ..*f },
    ];
    preimage(f, bounds, 2, &candidates, raw_f2)
}

/// Kashiwara involution on the free crystal; it reverses edge directions.
pub fn star(f: &Configuration) -> Configuration {
    Configuration::new([-f.c, -f.b, -f.a, -f.w, -f.z, -f.y, -f.x])
}

/// `star` followed by the translation that maps `*B(H, A)` back onto `B(H, A)`.
pub fn star_in_interval(f: &Configuration, bounds: &Bounds) -> Configuration {
    let s = star(f);
    let (h, a) = (bounds.h_cap, bounds.a_cap);
    Configuration::new([
        s.a + a,
        s.b + a,
        s.c + a,
        s.x + h,
        s.y + h,
        s.z + h,
        s.w + h,
    ])
}
