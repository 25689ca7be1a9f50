//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored in the power basis `1, x, ..., x^{φ(N)-1}` of
//! `Q[x]/Φ_N(x)` with `ζ_N ↦ x`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients of `Φ_n`, lowest degree first. Cached per process.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_monic_exact(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn divide_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coords: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CyclotomicNumber { order, coords: vec![BigRational::zero(); euler_totient(order) as usize] }
    }

    pub fn one(order: u64) -> Self {
        Self::from_integer(order, BigInt::one())
    }

    pub fn from_integer(order: u64, k: BigInt) -> Self {
        Self::from_rational(order, BigRational::from_integer(k))
    }

    pub fn from_rational(order: u64, q: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coords[0] = q;
        z
    }

    /// `ζ_N^a`, reduced into the power basis.
    pub fn embed_root(order: u64, a: i64) -> Self {
        assert!(order >= 1);
        let k = a.rem_euclid(order as i64) as usize;
        let mut buckets = vec![0i64; order as usize];
        buckets[k] = 1;
        Self::from_power_sums(order, &buckets)
    }

    /// Element `Σ c_k ζ_N^k` for `c` indexed by `k` (any length, exponents taken mod `N`).
    pub fn from_power_sums(order: u64, c: &[i64]) -> Self {
        let n = order as usize;
        let mut folded = vec![BigInt::zero(); n];
        for (k, &v) in c.iter().enumerate() {
            folded[k % n] += v;
        }
        Self::from_int_poly(order, folded)
    }

    /// Element given by an integer polynomial in `ζ_N`, reduced mod `Φ_N`.
    pub fn from_int_poly(order: u64, mut poly: Vec<BigInt>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for k in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            for (i, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    let t = &c * p;
                    poly[k - deg + i] -= t;
                }
            }
        }
        poly.resize(deg, BigInt::zero());
        CyclotomicNumber { order, coords: poly.into_iter().map(BigRational::from_integer).collect() }
    }

    fn from_rat_poly(order: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for k in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[k]);
            if c.is_zero() {
                continue;
            }
            for (i, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    let t = &c * BigRational::from_integer(BigInt::from(p));
                    poly[k - deg + i] -= t;
                }
            }
        }
        poly.resize(deg, BigRational::zero());
        CyclotomicNumber { order, coords: poly }
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
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Re-expresses the element in `Q(ζ_M)` for a multiple `M` of the order.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.order) {
            return Err(Error::InvalidArgument(format!("cannot lift order {} to {}", self.order, m)));
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (k, c) in self.coords.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Self::from_rat_poly(m, poly))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = a.order.lcm(&b.order);
        (a.lift(m).unwrap(), b.lift(m).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = Self::common(self, other);
            return a.add(&b);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect();
        CyclotomicNumber { order: self.order, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = Self::common(self, other);
            return a.mul(&b);
        }
        let d = self.coords.len();
        if d == 1 {
            return Self::from_rational(self.order, &self.coords[0] * &other.coords[0]);
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_rat_poly(self.order, prod)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_N`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.order, q.recip()));
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let a = trim(self.coords.clone());
        // invariant: s * a ≡ r (mod Φ)
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // gcd nontrivial: impossible since Φ_N is irreducible and a ≠ 0
                return Err(Error::Inconsistent("non-invertible cyclotomic element".into()));
            }
        }
        let c = r1[0].recip();
        let inv: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        Ok(Self::from_rat_poly(self.order, inv))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Floating-point value at `exp(2πi/N)`; test-only sanity oracle.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coords.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Applies the Galois automorphism `ζ_N ↦ ζ_N^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coords.iter().enumerate() {
            poly[(i * k as usize) % n] += c;
        }
        Self::from_rat_poly(self.order, poly)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b[db].recip();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = &rem[rem.len() - 1] * &lead;
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &c * y;
        }
        q[k] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(q), rem)
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{k}", self.order),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        CyclotomicNumber::add(self, rhs)
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        CyclotomicNumber::sub(self, rhs)
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        CyclotomicNumber::mul(self, rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: u64, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(n, BigInt::from(k))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_totient(12), 4);
    }

    #[test]
    fn spec_examples() {
        let z = CyclotomicNumber::embed_root(3, 1);
        let z2 = CyclotomicNumber::embed_root(3, 2);
        assert!(z.mul(&z2).is_one());
        assert!(int(3, 1).add(&z).add(&z2).is_zero());
        let half = int(5, 2).inv().unwrap();
        assert_eq!(half.as_rational().unwrap(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(CyclotomicNumber::embed_root(2, 1), int(2, -1));
        assert_eq!(CyclotomicNumber::embed_root(4, 2), int(4, -1));
        assert_eq!(CyclotomicNumber::embed_root(6, 3), int(6, -1));
        assert_eq!(int(3, 0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn roots_of_unity_up_to_64() {
        for n in 1..=64u64 {
            let z = CyclotomicNumber::embed_root(n, 1);
            let mut p = CyclotomicNumber::one(n);
            for _ in 0..n {
                p = p.mul(&z);
            }
            assert!(p.is_one(), "ζ_{n}^{n} != 1");
            let phi = cyclotomic_polynomial(n);
            let mut acc = CyclotomicNumber::zero(n);
            let mut pw = CyclotomicNumber::one(n);
            for &c in phi.iter() {
                acc = acc.add(&pw.mul(&int(n, c)));
                pw = pw.mul(&z);
            }
            assert!(acc.is_zero(), "Φ_{n}(ζ) != 0");
        }
    }

    #[test]
    fn inverse_and_lift() {
        for n in [5u64, 7, 8, 9, 12, 15] {
            let a = CyclotomicNumber::from_power_sums(n, &[2, -1, 0, 3]);
            let b = a.inv().unwrap();
            assert!(a.mul(&b).is_one(), "order {n}");
            let la = a.lift(2 * n).unwrap();
            let lb = b.lift(2 * n).unwrap();
            assert!(la.mul(&lb).is_one());
        }
        // mixed orders: ζ_2 + ζ_3 evaluated in Q(ζ_6)
        let s = CyclotomicNumber::embed_root(2, 1).add(&CyclotomicNumber::embed_root(3, 1));
        assert_eq!(s.order(), 6);
        assert_eq!(s, CyclotomicNumber::embed_root(6, 3).add(&CyclotomicNumber::embed_root(6, 2)));
    }
}
