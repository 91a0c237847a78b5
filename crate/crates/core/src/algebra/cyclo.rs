use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{lcm_order, parse_rational, qpoly, AlgebraError, Rational};

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients (degree ascending) of the n-th cyclotomic polynomial Φ_n.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d, all divisions by monic polynomials.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &den);
        }
    }
    let arc = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = rem[k];
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                rem[k - db + j] -= c * bj;
            }
            quot[k - db] = c;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// An element of the cyclotomic field ℚ(ζ_n), stored as the coefficient
/// vector (length φ(n)) of its residue modulo Φ_n in the root ζ_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclo {
    pub fn zero(order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        Cyclo {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = r;
        out
    }

    pub fn from_int(order: u32, i: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(i)))
    }

    /// Builds the residue of `Σ coeffs[k] ζ^k`; any length is accepted.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        if order == 0 {
            return Err(AlgebraError::ZeroOrder);
        }
        Ok(Self::reduce(order, coeffs))
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::reduce(order, raw)
    }

    fn reduce(order: u32, mut raw: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let d = phi.len() - 1;
        if raw.len() > d {
            for k in (d..raw.len()).rev() {
                if raw[k].is_zero() {
                    continue;
                }
                let c = std::mem::replace(&mut raw[k], Rational::zero());
                for (j, &pj) in phi.iter().enumerate().take(d) {
                    if pj != 0 {
                        raw[k - d + j] -= &c * Rational::from_integer(BigInt::from(pj));
                    }
                }
            }
        }
        raw.resize(d, Rational::zero());
        Cyclo { order, coeffs: raw }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if this element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Cyclo) -> Result<(), AlgebraError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(AlgebraError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn checked_add(&self, other: &Cyclo) -> Result<Cyclo, AlgebraError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyclo {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Cyclo) -> Result<Cyclo, AlgebraError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Cyclo {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Cyclo) -> Result<Cyclo, AlgebraError> {
        self.check_order(other)?;
        if self.coeffs.len() == 1 {
            return Ok(Cyclo {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let raw = qpoly::mul(&self.coeffs, &other.coeffs);
        Ok(Self::reduce(self.order, raw))
    }

    pub fn scale(&self, r: &Rational) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo Φ_n.
    pub fn inverse(&self) -> Result<Cyclo, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let s = qpoly::inverse_mod(&self.coeffs, &modulus).ok_or(AlgebraError::DivisionByZero)?;
        Ok(Self::reduce(self.order, s))
    }

    pub fn checked_div(&self, other: &Cyclo) -> Result<Cyclo, AlgebraError> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under ℚ(ζ_n) ⊆ ℚ(ζ_m), ζ_n ↦ ζ_m^{m/n}.
    pub fn embed(&self, into: u32) -> Result<Cyclo, AlgebraError> {
        if into == 0 || into % self.order != 0 {
            return Err(AlgebraError::NotASubfield {
                from: self.order,
                into,
            });
        }
        if into == self.order {
            return Ok(self.clone());
        }
        let step = (into / self.order) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Ok(Self::reduce(into, raw))
    }

    /// Brings two elements into their common field ℚ(ζ_lcm).
    pub fn unify(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        let m = lcm_order(a.order, b.order);
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{k}", self.order)?,
                (_, false) => write!(f, "{mag}*z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            /// Panics if the operands live in different cyclotomic fields.
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                self.$checked(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $trait<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                (&self).$checked(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloRepr {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Cyclo::from_coeffs(repr.order, coeffs).map_err(serde::de::Error::custom)
    }
}
