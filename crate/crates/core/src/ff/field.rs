use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::poly;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default upper bound on q.
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

/// Built-in irreducible moduli, little-endian coefficients.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),    // x^3 + x + 1
    (3, 2, &[1, 0, 1]),       // x^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (5, 2, &[2, 1, 1]),       // x^2 + x + 2
    (3, 3, &[1, 2, 0, 1]),    // x^3 + 2x + 1
];

/// Element of F_q, stored as the integer whose little-endian base-p digits
/// are the polynomial-basis coefficients.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Integer encoding (little-endian base-p digits).
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Validated description of F_q with q = p^r plus lookup tables.
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for a primitive element g, i in 0..q-1
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// Shared handle to a [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.0.q, self.0.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, r) with q = p^r, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, r))
}

/// Built-in modulus for (p, r), if shipped. Prime fields use `x`.
pub fn builtin_modulus(p: u32, r: u32) -> Option<Vec<u32>> {
    if r == 1 {
        return Some(vec![0, 1]);
    }
    BUILTIN_MODULI.iter().find(|(bp, br, _)| *bp == p && *br == r).map(|(_, _, m)| m.to_vec())
}

impl Field {
    /// Builds F_{p^r}. When `modulus` is `None` a built-in one is used.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_max(p, r, modulus, DEFAULT_MAX_Q)
    }

    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_q from q alone, using the built-in modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, r, None)
    }

    pub fn with_max(p: u32, r: u32, modulus: Option<&[u32]>, max_q: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::Unsupported("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64)
            .checked_pow(r)
            .filter(|&q| q <= max_q && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge { q: (p as u64).saturating_pow(r), max: max_q })?;
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => poly::trim(m.to_vec()),
            None => builtin_modulus(p, r).ok_or(Error::MissingModulus { p, r })?,
        };
        if modulus.iter().any(|&c| c >= p) || poly::degree(&modulus) != Some(r as usize) || !poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(modulus, p));
        }

        let mut spec = FieldSpec { p, r, q, modulus, exp: Vec::new(), log: Vec::new(), trace: Vec::new(), add: None };
        spec.build_tables();
        Ok(Field(Arc::new(spec)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Element from its integer encoding in `[0, q)`.
    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.0.q as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::InvalidElement(index))
        }
    }

    /// Element from polynomial-basis coefficients (little-endian, length ≤ r).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.0.r as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidElement(coeffs.iter().map(|&c| c as u64).sum()));
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.0.p + c;
        }
        Ok(FieldElem(idx))
    }

    /// Polynomial-basis coefficients, little-endian, length r.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        self.0.digits(a.0)
    }

    /// Image of an integer under Z -> F_p ⊂ F_q.
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.q).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = &*self.0;
        if s.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if s.r == 1 {
            return FieldElem((a.0 + b.0) % s.p);
        }
        if let Some(t) = &s.add {
            return FieldElem(t[(a.0 * s.q + b.0) as usize]);
        }
        FieldElem(s.add_digits(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let s = &*self.0;
        if s.p == 2 || a.0 == 0 {
            return a;
        }
        if s.r == 1 {
            return FieldElem(s.p - a.0);
        }
        let mut idx = 0u32;
        for c in s.digits(a.0).into_iter().rev() {
            idx = idx * s.p + (s.p - c) % s.p;
        }
        FieldElem(idx)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        let s = &*self.0;
        let order = s.q as usize - 1;
        let e = (s.log[a.0 as usize] as usize + s.log[b.0 as usize] as usize) % order;
        FieldElem(s.exp[e])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let s = &*self.0;
        let order = s.q as usize - 1;
        let e = (order - s.log[a.0 as usize] as usize) % order;
        Some(FieldElem(s.exp[e]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let s = &*self.0;
        let order = s.q as u64 - 1;
        let k = (s.log[a.0 as usize] as u64 * (e % order)) % order;
        FieldElem(s.exp[k as usize])
    }

    /// Absolute trace Tr_{F_q/F_p}(z) = z + z^p + ... + z^{p^{r-1}}, as a residue mod p.
    pub fn trace_to_prime(&self, z: FieldElem) -> u32 {
        self.0.trace[z.0 as usize]
    }

    /// Additive character e(z) = exp(2πi Tr(z) / p).
    pub fn char_e<T: Real>(&self, z: FieldElem) -> Complex<T> {
        root_of_unity(self.trace_to_prime(z), self.0.p)
    }

    /// Bilinear pairing x·y = Σ x_i y_i.
    pub fn dot(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        x.iter().zip(y).fold(self.zero(), |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Table of the p-th roots of unity, indexed by trace value.
    pub fn character_table<T: Real>(&self) -> Vec<Complex<T>> {
        (0..self.0.p).map(|k| root_of_unity(k, self.0.p)).collect()
    }
}

pub(crate) fn root_of_unity<T: Real>(k: u32, p: u32) -> Complex<T> {
    // Exact values at the real axis and for p = 2 keep F2 phases at ±1.
    match (k % p, p) {
        (0, _) => Complex::new(T::one(), T::zero()),
        (1, 2) => Complex::new(-T::one(), T::zero()),
        (k, p) => {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / p as f64;
            Complex::new(T::from_f64_lossy(theta.cos()), T::from_f64_lossy(theta.sin()))
        }
    }
}

impl FieldSpec {
    fn digits(&self, mut idx: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.r as usize);
        for _ in 0..self.r {
            out.push(idx % self.p);
            idx /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut idx = 0u32;
        let mut place = 1u32;
        for _ in 0..self.r {
            let d = (a % self.p + b % self.p) % self.p;
            idx += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        idx
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let prod = poly::mul(&poly::trim(self.digits(a)), &poly::trim(self.digits(b)), self.p);
        let mut red = poly::rem(&prod, &self.modulus, self.p);
        red.resize(self.r as usize, 0);
        self.from_digits(&red)
    }

    fn is_primitive(&self, g: u32) -> bool {
        let order = self.q as u64 - 1;
        let mut factors = Vec::new();
        let mut n = order;
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        factors.iter().all(|&f| self.pow_slow(g, order / f) != 1)
    }

    fn pow_slow(&self, g: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        if self.p != 2 && self.r > 1 && q <= 256 {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    t[a * q + b] = self.add_digits(a as u32, b as u32);
                }
            }
            self.add = Some(t);
        }

        let g = if q == 2 { 1 } else { (2..self.q).find(|&g| self.is_primitive(g)).expect("F_q* is cyclic") };
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        self.exp = exp;
        self.log = log;

        // Tr(z) = Σ_{k<r} z^{p^k}, an F_p-linear map; tabulate it on the basis x^i.
        let basis: Vec<u32> = (0..self.r)
            .map(|i| {
                let mut acc = 0u32;
                let mut power = (self.p as u64).pow(i) as u32;
                for _ in 0..self.r {
                    acc = self.add_digits(acc, power);
                    power = self.pow_slow(power, self.p as u64);
                }
                debug_assert!(acc < self.p, "trace must land in F_p");
                acc
            })
            .collect();
        let p = self.p as usize;
        let mut trace = vec![0u32; q];
        for (z, slot) in trace.iter_mut().enumerate() {
            let (mut rest, mut acc) = (z, 0usize);
            for &b in &basis {
                acc += (rest % p) * b as usize;
                rest /= p;
            }
            *slot = (acc % p) as u32;
        }
        self.trace = trace;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        [2u64, 3, 4, 5, 7, 8, 9, 16].iter().map(|&q| Field::of_order(q).unwrap()).collect()
    }

    #[test]
    fn construction_examples() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.q(), 4);
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus(..))));
        assert!(matches!(Field::new(7, 2, None), Err(Error::MissingModulus { p: 7, r: 2 })));
        assert!(Field::new(7, 2, Some(&[1, 0, 1])).is_ok()); // -1 is a non-residue mod 7
        assert!(matches!(Field::new(2, 17, None), Err(Error::FieldTooLarge { .. })));
        for q in [4u64, 8, 9, 16, 25, 27] {
            assert_eq!(Field::of_order(q).unwrap().q() as u64, q);
        }
    }

    #[test]
    fn trace_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.trace_to_prime(f2.one()), 1);
        let f4 = Field::of_order(4).unwrap();
        let omega = f4.from_coeffs(&[0, 1]).unwrap();
        // ω + ω² with ω² = ω + 1 gives 1
        let by_hand = f4.add(omega, f4.mul(omega, omega));
        assert_eq!(by_hand, f4.one());
        assert_eq!(f4.trace_to_prime(omega), 1);
        for f in all_fields() {
            assert_eq!(f.trace_to_prime(f.zero()), 0);
        }
    }

    #[test]
    fn character_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.char_e::<f64>(f2.one()), Complex::new(-1.0, 0.0));
        let f3 = Field::prime(3).unwrap();
        let e1 = f3.char_e::<f64>(f3.one());
        let want = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((e1 - want).norm() < 1e-15);
        let f4 = Field::of_order(4).unwrap();
        let omega = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.char_e::<f64>(omega), Complex::new(-1.0, 0.0));
        for f in all_fields() {
            for z in f.elements() {
                assert!((f.char_e::<f64>(z).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), FieldElem(f.0.mul_slow(a.0, b.0)));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_prime_field_linear() {
        for f in all_fields() {
            let p = f.p();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.trace_to_prime(f.add(a, b));
                    assert_eq!(lhs, (f.trace_to_prime(a) + f.trace_to_prime(b)) % p);
                }
                for c in 0..p {
                    let ce = f.from_int(c as i64);
                    assert_eq!(f.trace_to_prime(f.mul(ce, a)), c * f.trace_to_prime(a) % p);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for f in all_fields() {
            let q = f.q() as f64;
            for y in f.elements() {
                for w in f.elements() {
                    let s: Complex<f64> = f.elements().map(|z| f.char_e::<f64>(f.mul(y, z)).conj() * f.char_e::<f64>(f.mul(w, z))).sum();
                    let want = if y == w { 1.0 } else { 0.0 };
                    assert!((s / q - want).norm() < 1e-10, "q={} y={y} w={w}", f.q());
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(65536), Some((2, 16)));
    }
}
