//! Certified enclosures with rational endpoints.
//!
//! Endpoints are rounded outward onto the dyadic grid `2^-bits` after every
//! operation so that sizes stay bounded while enclosures stay rigorous.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_to_grid(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    BigRational::new(
        (x * BigRational::from_integer(scale.clone()))
            .floor()
            .to_integer(),
        scale,
    )
}

fn ceil_to_grid(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    BigRational::new(
        (x * BigRational::from_integer(scale.clone()))
            .ceil()
            .to_integer(),
        scale,
    )
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn round_out(&self, bits: u32) -> Self {
        Interval {
            lo: floor_to_grid(&self.lo, bits),
            hi: ceil_to_grid(&self.hi, bits),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        if k.is_negative() {
            Interval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Interval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    /// Enclosure of `{x^2 : x in self}`.
    pub fn square(&self) -> Interval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let hi = if a > b { a.clone() } else { b.clone() };
        let lo = if self.lo.is_negative() && self.hi.is_positive() {
            BigRational::zero()
        } else if a < b {
            a
        } else {
            b
        };
        Interval { lo, hi }
    }

    /// Enclosure of `sqrt` over the nonnegative part, on the grid `2^-bits`.
    pub fn sqrt(&self, bits: u32) -> Interval {
        let four = BigRational::from_integer(pow2(2 * bits));
        let scale = pow2(bits);
        let lo = if self.lo.is_positive() {
            let s = (&self.lo * &four).floor().to_integer();
            BigRational::new(s.sqrt(), scale.clone())
        } else {
            BigRational::zero()
        };
        let hi_scaled = (&self.hi * &four).ceil().to_integer();
        let mut r = hi_scaled.sqrt();
        if &r * &r < hi_scaled {
            r += 1;
        }
        Interval {
            lo,
            hi: BigRational::new(r, scale),
        }
    }

    /// Strictly below `bound` with certainty.
    pub fn certainly_below(&self, bound: &BigRational) -> bool {
        &self.hi < bound
    }
}

/// Enclosure of `pi` via Machin's formula.
pub fn pi(bits: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&bits) {
        return p.clone();
    }
    let p = pi_uncached(bits);
    cache.lock().unwrap().insert(bits, p.clone());
    p
}

fn pi_uncached(bits: u32) -> Interval {
    let work = bits + 16;
    let a = atan_inv(5, work).scale(&BigRational::from_integer(16.into()));
    let b = atan_inv(239, work).scale(&BigRational::from_integer(4.into()));
    a.sub(&b).round_out(bits + 8)
}

/// `atan(1/n)` for integer `n >= 2` by the alternating series.
fn atan_inv(n: i64, bits: u32) -> Interval {
    let x = BigRational::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let eps = BigRational::new(BigInt::one(), pow2(bits));
    let mut sum = BigRational::zero();
    let mut power = x.clone();
    let mut k = 0i64;
    loop {
        let term = &power / BigRational::from_integer(BigInt::from(2 * k + 1));
        if term < eps {
            // alternating with decreasing terms: remainder bounded by next term
            let (lo, hi) = if k % 2 == 0 {
                (sum.clone(), &sum + &term)
            } else {
                (&sum - &term, sum.clone())
            };
            return Interval::new(lo, hi).round_out(bits);
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power * &x2;
        k += 1;
    }
}

/// Enclosures of `(cos theta, sin theta)` for `theta` in `[0, 2]` given as an interval.
fn cos_sin_small(theta: &Interval, bits: u32) -> (Interval, Interval) {
    // Taylor series on the interval; remainder |theta|^(n+1)/(n+1)!.
    let work = bits + 16;
    let eps = BigRational::new(BigInt::one(), pow2(work));
    let mut cos = Interval::zero();
    let mut sin = Interval::zero();
    let mut term = Interval::point(BigRational::one()); // theta^n / n!
    let mut n: u32 = 0;
    let bound = theta.hi.abs().max(theta.lo.abs());
    let mut bound_term = BigRational::one();
    loop {
        match n % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        n += 1;
        term = term
            .mul(theta)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
            .round_out(work);
        bound_term = &bound_term * &bound / BigRational::from_integer(BigInt::from(n));
        if bound_term < eps && n > 2 {
            break;
        }
    }
    // theta <= 2 and n >= 3: the tail is at most twice its first term
    let tail = &bound_term * BigRational::from_integer(2.into());
    let slack = Interval::new(-&tail, tail.clone());
    (
        cos.add(&slack).round_out(bits),
        sin.add(&slack).round_out(bits),
    )
}

/// Enclosures of `(cos 2 pi f, sin 2 pi f)` for a rational `f`.
pub fn cos_sin_turns(f: &BigRational, bits: u32) -> (Interval, Interval) {
    let frac = f - f.floor();
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut q = 0u8;
    let mut g = frac;
    while g >= quarter {
        g -= &quarter;
        q += 1;
    }
    if g.is_zero() {
        let (c, s) = match q {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        return (
            Interval::point(BigRational::from_integer(c.into())),
            Interval::point(BigRational::from_integer(s.into())),
        );
    }
    let two_pi = pi(bits + 8).scale(&BigRational::from_integer(2.into()));
    let theta = two_pi.scale(&g);
    let (c, s) = cos_sin_small(&theta, bits);
    match q {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(128);
        assert!(p.lo.to_f64().unwrap() <= std::f64::consts::PI + 1e-15);
        assert!(p.hi.to_f64().unwrap() >= std::f64::consts::PI - 1e-15);
        assert!(p.width() < r(1, 1 << 60));
        // 355/113 overestimates pi by ~2.7e-7
        assert!(p.hi < r(355, 113));
    }

    #[test]
    fn trig_enclosures() {
        for (n, d) in [(1, 8), (1, 6), (1, 3), (5, 12), (7, 10), (-1, 5)] {
            let f = r(n, d);
            let angle = 2.0 * std::f64::consts::PI * (n as f64) / (d as f64);
            let (c, s) = cos_sin_turns(&f, 96);
            for (iv, v) in [(c, angle.cos()), (s, angle.sin())] {
                assert!(iv.lo.to_f64().unwrap() <= v + 1e-14, "{iv:?} vs {v}");
                assert!(iv.hi.to_f64().unwrap() >= v - 1e-14, "{iv:?} vs {v}");
                assert!(iv.width() < r(1, 1 << 62));
            }
        }
    }

    #[test]
    fn sqrt_enclosure() {
        let two = Interval::point(r(2, 1));
        let s = two.sqrt(64);
        assert!(s.lo.clone() * s.lo.clone() <= r(2, 1));
        assert!(s.hi.clone() * s.hi.clone() >= r(2, 1));
        assert!(s.width() <= r(1, 1 << 62));
    }
}
