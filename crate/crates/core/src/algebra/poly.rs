use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{lcm_order, AlgebraError, Cyclo, Rational};

/// A univariate polynomial in `u` over ℚ(ζ_n), or, when `truncation` is
/// `Some(N)`, a power series known exactly through degree `N`.
///
/// Coefficients are stored degree-ascending with trailing zeros trimmed, so
/// the zero polynomial has no coefficients. Mixing a truncated and an exact
/// operand yields a truncated result.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloPoly {
    order: u32,
    coeffs: Vec<Cyclo>,
    truncation: Option<usize>,
}

fn min_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl CycloPoly {
    pub fn zero(order: u32) -> Self {
        CycloPoly {
            order,
            coeffs: Vec::new(),
            truncation: None,
        }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(Cyclo::one(order))
    }

    pub fn constant(c: Cyclo) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · u^degree`.
    pub fn monomial(c: Cyclo, degree: usize) -> Self {
        let order = c.order();
        let mut coeffs = vec![Cyclo::zero(order); degree];
        coeffs.push(c);
        Self::from_coeffs(order, coeffs)
    }

    /// The polynomial `u`.
    pub fn u(order: u32) -> Self {
        Self::monomial(Cyclo::one(order), 1)
    }

    /// Builds an exact polynomial; every coefficient must have order `order`.
    pub fn from_coeffs(order: u32, coeffs: Vec<Cyclo>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.order() == order),
            "coefficient order mismatch"
        );
        let mut p = CycloPoly {
            order,
            coeffs,
            truncation: None,
        };
        p.trim();
        p
    }

    /// Integer-coefficient polynomial, degree ascending.
    pub fn from_ints(order: u32, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            order,
            coeffs.iter().map(|&c| Cyclo::from_int(order, c)).collect(),
        )
    }

    pub fn from_rationals(order: u32, coeffs: Vec<Rational>) -> Self {
        Self::from_coeffs(
            order,
            coeffs
                .into_iter()
                .map(|c| Cyclo::from_rational(order, c))
                .collect(),
        )
    }

    fn trim(&mut self) {
        if let Some(n) = self.truncation {
            self.coeffs.truncate(n + 1);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.coeffs
    }

    /// Coefficient of `u^k` (zero past the stored length).
    pub fn coeff(&self, k: usize) -> Cyclo {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(self.order))
    }

    /// Degree of the stored representative; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Rational coefficients, if every coefficient lies in ℚ.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    /// Reduces modulo `u^{n+1}` and marks the value as a series known to degree `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut p = self.clone();
        p.truncation = min_trunc(p.truncation, Some(n));
        p.trim();
        p
    }

    /// Forgets the truncation marker, keeping the stored representative.
    pub fn to_exact(&self) -> Self {
        CycloPoly {
            truncation: None,
            ..self.clone()
        }
    }

    /// True when both values agree through degree `n` (inclusive).
    pub fn agrees_to(&self, other: &CycloPoly, n: usize) -> bool {
        (0..=n).all(|k| self.coeff(k) == other.coeff(k))
    }

    pub fn embed(&self, into: u32) -> Result<Self, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(into))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycloPoly {
            order: into,
            coeffs,
            truncation: self.truncation,
        })
    }

    fn check_order(&self, other: &CycloPoly) -> Result<(), AlgebraError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(AlgebraError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn checked_add(&self, other: &CycloPoly) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        let mut p = CycloPoly {
            order: self.order,
            coeffs,
            truncation: min_trunc(self.truncation, other.truncation),
        };
        p.trim();
        Ok(p)
    }

    pub fn checked_sub(&self, other: &CycloPoly) -> Result<Self, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CycloPoly) -> Result<Self, AlgebraError> {
        self.check_order(other)?;
        let truncation = min_trunc(self.truncation, other.truncation);
        if self.is_zero() || other.is_zero() {
            return Ok(CycloPoly {
                order: self.order,
                coeffs: Vec::new(),
                truncation,
            });
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(n) = truncation {
            len = len.min(n + 1);
        }
        let mut coeffs = vec![Cyclo::zero(self.order); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        let mut p = CycloPoly {
            order: self.order,
            coeffs,
            truncation,
        };
        p.trim();
        Ok(p)
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let mut p = CycloPoly {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            truncation: self.truncation,
        };
        p.trim();
        p
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycloPoly {
            truncation: self.truncation,
            ..CycloPoly::one(self.order)
        };
        acc.trim();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power series `q` with `p · q ≡ 1 (mod u^{n+1})`.
    pub fn series_inverse(&self, n: usize) -> Result<Self, AlgebraError> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(AlgebraError::ZeroConstantTerm);
        }
        let inv0 = c0.inverse()?;
        let mut q: Vec<Cyclo> = Vec::with_capacity(n + 1);
        q.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Cyclo::zero(self.order);
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                let pj = &self.coeffs[j];
                if !pj.is_zero() {
                    acc = &acc + &(pj * &q[k - j]);
                }
            }
            q.push(-(&acc * &inv0));
        }
        let mut p = CycloPoly {
            order: self.order,
            coeffs: q,
            truncation: Some(min_trunc(self.truncation, Some(n)).unwrap()),
        };
        p.trim();
        Ok(p)
    }

    /// `q` with `q(u²) = p(u)`; fails if any odd-degree coefficient is nonzero.
    pub fn sqrt_substitute(&self) -> Result<Self, AlgebraError> {
        if let Some(k) = (1..self.coeffs.len())
            .step_by(2)
            .find(|&k| !self.coeffs[k].is_zero())
        {
            return Err(AlgebraError::OddCoefficient { degree: k });
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        let mut p = CycloPoly {
            order: self.order,
            coeffs,
            truncation: self.truncation.map(|n| n / 2),
        };
        p.trim();
        Ok(p)
    }

    /// `p(u^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k > 0);
        let mut coeffs = vec![Cyclo::zero(self.order); self.coeffs.len().saturating_sub(1) * k + 1];
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        let mut p = CycloPoly {
            order: self.order,
            coeffs,
            truncation: self.truncation.map(|n| n * k + (k - 1)),
        };
        p.trim();
        p
    }

    /// Euclidean division of exact polynomials.
    pub fn div_rem(&self, divisor: &CycloPoly) -> Result<(Self, Self), AlgebraError> {
        self.check_order(divisor)?;
        let db = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[db].inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((CycloPoly::zero(self.order), self.to_exact()));
        }
        let mut quot = vec![Cyclo::zero(self.order); rem.len() - db];
        for k in (db..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] * &lead_inv;
            for (j, bj) in divisor.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    rem[k - db + j] = &rem[k - db + j] - &(&c * bj);
                }
            }
            quot[k - db] = c;
        }
        Ok((
            CycloPoly::from_coeffs(self.order, quot),
            CycloPoly::from_coeffs(self.order, rem),
        ))
    }

    /// Quotient of an exact division; fails on a nonzero remainder.
    pub fn exact_div(&self, divisor: &CycloPoly) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision)
        }
    }

    /// Formal derivative (exact part only).
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
            .collect();
        let mut p = CycloPoly {
            order: self.order,
            coeffs,
            truncation: self.truncation.map(|n| n.saturating_sub(1)),
        };
        p.trim();
        p
    }

    /// `exp(self)` as a series through degree `n`; the constant term must vanish.
    pub fn series_exp(&self, n: usize) -> Result<Self, AlgebraError> {
        if !self.coeff(0).is_zero() {
            return Err(AlgebraError::ShapeMismatch(
                "exp needs a series without constant term".into(),
            ));
        }
        // g' = f' g  ⇒  k g_k = Σ_{j=1..k} j f_j g_{k-j}.
        let mut g: Vec<Cyclo> = vec![Cyclo::one(self.order)];
        for k in 1..=n {
            let mut acc = Cyclo::zero(self.order);
            for j in 1..=k {
                let fj = self.coeff(j);
                if !fj.is_zero() {
                    let jr = Rational::from_integer((j as i64).into());
                    acc = &acc + &(&fj.scale(&jr) * &g[k - j]);
                }
            }
            let kr = Rational::from_integer((k as i64).into());
            g.push(acc.scale(&kr.recip()));
        }
        let mut p = CycloPoly {
            order: self.order,
            coeffs: g,
            truncation: Some(n),
        };
        p.trim();
        Ok(p)
    }

    /// Unifies the coefficient fields of two polynomials.
    pub fn unify(a: &CycloPoly, b: &CycloPoly) -> (CycloPoly, CycloPoly) {
        let m = lcm_order(a.order, b.order);
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }
}

impl fmt::Debug for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let needs_parens = c.as_rational().is_none();
            match (k, needs_parens) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "({c})*u^{k}")?,
                (_, false) => write!(f, "{c}*u^{k}")?,
            }
        }
        if let Some(n) = self.truncation {
            write!(f, " + O(u^{})", n + 1)?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycloPoly> for &CycloPoly {
            type Output = CycloPoly;
            /// Panics if the operands live over different cyclotomic fields.
            fn $method(self, rhs: &CycloPoly) -> CycloPoly {
                self.$checked(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $trait<CycloPoly> for CycloPoly {
            type Output = CycloPoly;
            fn $method(self, rhs: CycloPoly) -> CycloPoly {
                (&self).$checked(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycloPoly {
    type Output = CycloPoly;
    fn neg(self) -> CycloPoly {
        CycloPoly {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            truncation: self.truncation,
        }
    }
}

impl Neg for CycloPoly {
    type Output = CycloPoly;
    fn neg(self) -> CycloPoly {
        -&self
    }
}

impl One for CycloPoly {
    fn one() -> Self {
        CycloPoly::one(1)
    }
}

impl Zero for CycloPoly {
    fn zero() -> Self {
        CycloPoly::zero(1)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> CycloPoly {
        CycloPoly::from_ints(1, coeffs)
    }

    #[test]
    fn geometric_series() {
        let inv = p(&[1, -1]).series_inverse(4).unwrap();
        assert_eq!(inv.coeffs(), p(&[1, 1, 1, 1, 1]).coeffs());
        assert_eq!(inv.truncation(), Some(4));
    }

    #[test]
    fn inverse_of_square_of_one_minus_u4() {
        // Σ_k (k+1) u^{4k}, i.e. the self-convolution of Σ u^{4k}.
        let base = p(&[1, 0, 0, 0, -1]).pow(2);
        let inv = base.series_inverse(8).unwrap();
        assert_eq!(inv.coeffs(), p(&[1, 0, 0, 0, 2, 0, 0, 0, 3]).coeffs());
    }

    #[test]
    fn alternating_geometric_series() {
        let inv = p(&[1, 0, 1]).series_inverse(6).unwrap();
        assert_eq!(inv.coeffs(), p(&[1, 0, -1, 0, 1, 0, -1]).coeffs());
    }

    #[test]
    fn series_inverse_needs_a_unit() {
        assert_eq!(
            p(&[0, 1]).series_inverse(3),
            Err(AlgebraError::ZeroConstantTerm)
        );
    }

    #[test]
    fn sqrt_substitute_relabels_exponents() {
        assert_eq!(p(&[1, 0, -2, 0, 1]).sqrt_substitute().unwrap(), p(&[1, -2, 1]));
        let edge_det = p(&[1, 0, 0, 0, -2, 0, 4, 0, 1, 0, -4, 0, 4, 0, 0, 0, -4]);
        assert_eq!(
            edge_det.sqrt_substitute().unwrap(),
            p(&[1, 0, -2, 4, 1, -4, 4, 0, -4])
        );
        assert_eq!(
            p(&[1, 1]).sqrt_substitute(),
            Err(AlgebraError::OddCoefficient { degree: 1 })
        );
    }

    #[test]
    fn truncated_operands_coerce() {
        let a = p(&[1, 2, 3, 4]).truncate(2);
        let b = p(&[1, 1]);
        let c = &a * &b;
        assert_eq!(c.truncation(), Some(2));
        assert_eq!(c.coeffs(), p(&[1, 3, 5]).coeffs());
    }

    #[test]
    fn division() {
        let a = p(&[1, 0, -1]);
        let b = p(&[1, 1]);
        assert_eq!(a.exact_div(&b).unwrap(), p(&[1, -1]));
        assert_eq!(p(&[1, 0, 1]).exact_div(&b), Err(AlgebraError::InexactDivision));
    }

    #[test]
    fn exp_of_log_series() {
        // exp(Σ u^k / k) = 1/(1-u)
        let log: Vec<Rational> = (0..=6)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    Rational::new(1.into(), (k as i64).into())
                }
            })
            .collect();
        let e = CycloPoly::from_rationals(1, log).series_exp(6).unwrap();
        assert_eq!(e.coeffs(), p(&[1, 1, 1, 1, 1, 1, 1]).coeffs());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = CycloPoly> {
            proptest::collection::vec(-5i64..6, 1..8).prop_map(|cs| CycloPoly::from_ints(1, &cs))
        }

        proptest! {
            #[test]
            fn series_inverse_times_p_is_one(mut q in poly(), n in 0usize..12) {
                if q.coeff(0).is_zero() {
                    q = &q + &CycloPoly::one(1);
                }
                let inv = q.series_inverse(n).unwrap();
                let prod = (&inv * &q).truncate(n);
                prop_assert!(prod.agrees_to(&CycloPoly::one(1), n));
            }

            #[test]
            fn sqrt_substitute_inverts_squaring(q in poly()) {
                prop_assert_eq!(q.substitute_power(2).sqrt_substitute().unwrap(), q);
            }

            #[test]
            fn div_rem_reconstructs(a in poly(), b in poly()) {
                prop_assume!(!b.is_zero());
                let (q, r) = a.div_rem(&b).unwrap();
                prop_assert_eq!(&(&q * &b) + &r, a);
                prop_assert!(r.degree() < b.degree() || r.is_zero());
            }
        }
    }
}
