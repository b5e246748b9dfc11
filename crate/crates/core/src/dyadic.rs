//! Exact dyadic rationals `m / 2^k`.
//!
//! Every overlap and outcome probability in this crate has this form, so
//! they are carried exactly and only turned into floats for display.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use rand::Rng;

/// Largest supported denominator exponent.
pub const MAX_EXP: u32 = 127;

/// A non-negative dyadic rational `num / 2^exp`, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    pub fn new(num: u128, exp: u32) -> Self {
        assert!(exp <= MAX_EXP, "dyadic exponent {exp} exceeds {MAX_EXP}");
        if num == 0 {
            return Self::ZERO;
        }
        let shift = num.trailing_zeros().min(exp);
        Dyadic {
            num: num >> shift,
            exp: exp - shift,
        }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Self::new(1, k)
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    /// `k` such that the reduced denominator is `2^k`.
    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// `Some(k)` when the value is exactly `2^-k`.
    pub fn as_pow2_neg(&self) -> Option<u32> {
        (self.num == 1).then_some(self.exp)
    }

    fn aligned(a: Dyadic, b: Dyadic) -> (u128, u128, u32) {
        let e = a.exp.max(b.exp);
        let an = a.num.checked_shl(e - a.exp).filter(|v| v >> (e - a.exp) == a.num);
        let bn = b.num.checked_shl(e - b.exp).filter(|v| v >> (e - b.exp) == b.num);
        (
            an.expect("dyadic numerator overflow"),
            bn.expect("dyadic numerator overflow"),
            e,
        )
    }

    pub fn half(self) -> Dyadic {
        Dyadic::new(self.num, self.exp + 1)
    }

    /// `1 - self` for a probability.
    pub fn complement(self) -> Dyadic {
        Dyadic::ONE - self
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }

    /// Draws `true` with probability exactly `self`, which must lie in `[0, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        assert!(*self <= Dyadic::ONE, "probability above one");
        if self.exp == 0 {
            return self.num == 1;
        }
        let draw: u128 = rng.gen::<u128>() >> (128 - self.exp);
        draw < self.num
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // Compare via floor parts first so large numerators never overflow.
        let ia = self.num >> self.exp.min(127);
        let ib = other.num >> other.exp.min(127);
        if ia != ib {
            return ia.cmp(&ib);
        }
        let (a, b, _) = Self::aligned(
            Dyadic::new(self.num - (ia << self.exp), self.exp),
            Dyadic::new(other.num - (ib << other.exp), other.exp),
        );
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::ZERO
    }
}

/// Reduced fraction `p/q`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, 1u128 << self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl std::str::FromStr for Dyadic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got {s:?}"))?;
        let p: u128 = p.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let q: u128 = q.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if q == 0 || !q.is_power_of_two() {
            return Err(format!("denominator {q} is not a power of two"));
        }
        Ok(Dyadic::new(p, q.trailing_zeros()))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, other: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, other);
        Dyadic::new(a.checked_add(b).expect("dyadic overflow"), e)
    }
}

/// Panics if the result would be negative.
impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, other: Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, other);
        Dyadic::new(a.checked_sub(b).expect("negative dyadic"), e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Dyadic) -> Dyadic {
        Dyadic::new(
            self.num.checked_mul(other.num).expect("dyadic overflow"),
            self.exp + other.exp,
        )
    }
}
