//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored as coordinates on `1, zeta, ..., zeta^{N-1}` reduced
//! modulo the cyclotomic polynomial `Phi_N`, so two elements of the same order
//! are equal iff their coordinates are. Elements that reduce to a rational are
//! demoted to order 1. Mixed-order operations promote to the lcm of the orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{cos_sin_turns, Interval};

/// Coefficients of `Phi_n`, ascending, computed by exact division of `x^n - 1`
/// by `Phi_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = a.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] -= c * bj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Element of `Q(zeta_order)` in canonical reduced form.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coords: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coords: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `zeta_n^k` with `k` taken mod `n`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let mut coords = vec![BigRational::zero(); n as usize];
        coords[k.rem_euclid(n as i64) as usize] = BigRational::one();
        Self::canonical(n, coords)
    }

    /// `e^{2 pi i f}` for a rational `f`.
    pub fn exp_2pi_i(f: &BigRational) -> Self {
        let den = f.denom().to_u64().expect("root of unity order too large");
        let num = f.numer().mod_floor(f.denom()).to_i64().unwrap();
        Self::root_of_unity(den, num)
    }

    /// Builds an element from coordinates of any length (read mod `x^n - 1`).
    pub fn from_coords(n: u64, coords: Vec<BigRational>) -> Self {
        Self::canonical(n, coords)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coords[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.order == 1 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn canonical(n: u64, raw: Vec<BigRational>) -> Self {
        if n == 1 {
            let s = raw.into_iter().fold(BigRational::zero(), |a, b| a + b);
            return Self::from_rational(s);
        }
        let nu = n as usize;
        let mut coords = if raw.len() == nu {
            raw
        } else {
            let mut c = vec![BigRational::zero(); nu];
            for (i, v) in raw.into_iter().enumerate() {
                if !v.is_zero() {
                    c[i % nu] += v;
                }
            }
            c
        };
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for i in (deg..nu).rev() {
            if coords[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut coords[i], BigRational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let idx = i - deg + j;
                    coords[idx] -= &c * rat(pj);
                }
            }
        }
        if coords.iter().skip(1).all(|c| c.is_zero()) {
            return Self::from_rational(coords.swap_remove(0));
        }
        Cyclotomic { order: n, coords }
    }

    /// Re-expresses `self` in `Q(zeta_target)`; `self.order` must divide `target`.
    pub fn promote(&self, target: u64) -> Self {
        assert_eq!(
            target % self.order,
            0,
            "promotion target must be a multiple of the order"
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut coords = vec![BigRational::zero(); target as usize];
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                coords[k * step] = c.clone();
            }
        }
        Self::canonical(target, coords)
    }

    /// Coordinates of `self` in `Q(zeta_target)` without demotion.
    fn coords_in(&self, target: u64) -> Vec<BigRational> {
        let step = (target / self.order) as usize;
        let mut coords = vec![BigRational::zero(); target as usize];
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                coords[k * step] = c.clone();
            }
        }
        coords
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            order: self.order,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Applies the Galois automorphism `zeta -> zeta^j`.
    pub fn galois(&self, j: i64) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as i64;
        let mut coords = vec![BigRational::zero(); self.order as usize];
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                coords[(k as i64 * j).rem_euclid(n) as usize] += c;
            }
        }
        Self::canonical(self.order, coords)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse via the product of the nontrivial Galois conjugates.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let n = self.order as i64;
        let mut others = Self::one();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                others = &others * &self.galois(j);
            }
        }
        let norm = (self * &others)
            .as_rational()
            .cloned()
            .expect("field norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    /// Floating-point value (not certified).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.coords
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                let a = 2.0 * std::f64::consts::PI * k as f64 / n;
                (re + v * a.cos(), im + v * a.sin())
            })
    }

    /// Certified enclosures of the real and imaginary parts.
    pub fn complex_interval(&self, precision_bits: u32) -> (Interval, Interval) {
        if let Some(q) = self.as_rational() {
            return (Interval::point(q.clone()), Interval::zero());
        }
        let mut re = Interval::zero();
        let mut im = Interval::zero();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cs, sn) = cos_sin_turns(
                &BigRational::new(BigInt::from(k), BigInt::from(self.order)),
                precision_bits + 8,
            );
            re = re.add(&cs.scale(c));
            im = im.add(&sn.scale(c));
        }
        (
            re.round_out(precision_bits + 4),
            im.round_out(precision_bits + 4),
        )
    }

    /// Certified enclosure of `|self|`; exact for rationals.
    pub fn magnitude_interval(&self, precision_bits: u32) -> Interval {
        assert!(precision_bits >= 32, "precision must be at least 32 bits");
        if let Some(q) = self.as_rational() {
            return Interval::point(q.abs());
        }
        let (re, im) = self.complex_interval(precision_bits + 8);
        re.square().add(&im.square()).sqrt(precision_bits)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coords == other.coords;
        }
        let l = self.order.lcm(&other.order);
        let a = self.promote(l);
        let b = other.promote(l);
        a.order == b.order && a.coords == b.coords
    }
}

impl Eq for Cyclotomic {}

impl From<BigRational> for Cyclotomic {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 && rhs.order == 1 {
            return Cyclotomic::from_rational(&self.coords[0] + &rhs.coords[0]);
        }
        let l = self.order.lcm(&rhs.order);
        let mut a = self.coords_in(l);
        for (i, c) in rhs.coords_in(l).into_iter().enumerate() {
            if !c.is_zero() {
                a[i] += c;
            }
        }
        Cyclotomic::canonical(l, a)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == 1 && rhs.order == 1 {
            self.coords[0] += &rhs.coords[0];
        } else if self.order == rhs.order {
            for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
                *a += b;
            }
            let coords = std::mem::take(&mut self.coords);
            *self = Cyclotomic::canonical(self.order, coords);
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        let l = self.order.lcm(&rhs.order);
        let a = self.coords_in(l);
        let b = rhs.coords_in(l);
        let lu = l as usize;
        let mut out = vec![BigRational::zero(); lu];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[(i + j) % lu] += x * y;
            }
        }
        Cyclotomic::canonical(l, out)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, `p`, or a plain decimal-free integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&format_rational(q));
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rational(c),
                _ => format!("{}*w{}^{}", format_rational(c), self.order, k),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity() {
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(-1));
        assert!(Cyclotomic::root_of_unity(1, 0).is_one());
        let s = &(&Cyclotomic::root_of_unity(3, 0) + &Cyclotomic::root_of_unity(3, 1))
            + &Cyclotomic::root_of_unity(3, 2);
        assert!(s.is_zero());
        assert!((&Cyclotomic::root_of_unity(8, 1) * &Cyclotomic::root_of_unity(8, 7)).is_one());
    }

    #[test]
    fn arithmetic_examples() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let one = Cyclotomic::one();
        assert_eq!(&(&one + &i) * &(&one - &i), Cyclotomic::from_int(2));
        let m1 = Cyclotomic::root_of_unity(2, 1).promote(4);
        assert_eq!(m1.as_rational(), Some(&q(-1, 1)));
        // zeta_12^3 equals zeta_4 across orders
        assert_eq!(Cyclotomic::root_of_unity(12, 3), i);
    }

    #[test]
    fn inverse() {
        let x = &Cyclotomic::from_int(2) + &Cyclotomic::root_of_unity(5, 1);
        let y = x.inverse().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(Cyclotomic::zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn magnitudes() {
        let m = Cyclotomic::from_rational(q(3, 4)).magnitude_interval(64);
        assert!(m.contains(&q(3, 4)));
        assert!(m.width() < q(1, 1 << 30));
        let x = &Cyclotomic::one() + &Cyclotomic::root_of_unity(4, 1);
        let m = x.magnitude_interval(64);
        let sqrt2 = std::f64::consts::SQRT_2;
        assert!(m.lo.to_f64().unwrap() <= sqrt2 && sqrt2 <= m.hi.to_f64().unwrap());
        assert!(m.width() < q(1, 1 << 30));
        let z = Cyclotomic::zero().magnitude_interval(40);
        assert!(z.hi < q(1, 1 << 30));
    }

    #[test]
    fn rational_roundtrip() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
    }
}
