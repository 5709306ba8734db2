//! Exact integer- and rational-coefficient univariate polynomials.
//!
//! Coefficients are stored constant-term first; the degree is always
//! derived from the highest stored nonzero coefficient. The zero
//! polynomial is the empty coefficient vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{display_rational, gcd_many, Rational, RationalInterval};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a known-nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero-padded beyond the stored length.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// `max_j |a_j|`; 0 for the zero polynomial.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Exact evaluation by Horner's scheme.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// `den^deg(P) · P(num/den)` as one integer Horner pass (`den > 0`),
    /// so the result shares the sign of `P(num/den)`.
    pub fn eval_scaled(&self, num: &BigInt, den: &BigInt) -> BigInt {
        debug_assert!(den.is_positive());
        if self.is_zero() {
            return BigInt::zero();
        }
        let n = self.deg();
        let mut acc = self.coeffs[n].clone();
        let mut dpow = BigInt::one();
        for j in (0..n).rev() {
            dpow *= den;
            acc = acc * num + &self.coeffs[j] * &dpow;
        }
        acc
    }

    /// Sign of `P(x)` at a rational point: -1, 0, or 1.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let v = self.eval_scaled(x.numer(), x.denom());
        if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Exact formal derivative.
    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigInt::from(j))
            .collect();
        IntPolynomial::new(coeffs)
    }

    pub fn negate(&self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|j| self.coeff(j) + other.coeff(j)).collect();
        IntPolynomial::new(coeffs)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &BigInt) -> IntPolynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.clone());
        } else {
            coeffs[0] += c;
        }
        IntPolynomial::new(coeffs)
    }

    /// `(content, unit, primitive)` with `content > 0`, `unit ∈ {−1, +1}`,
    /// and `primitive` having gcd-1 coefficients and positive leading
    /// coefficient, so that `P = unit · content · primitive`.
    pub fn content_unit_primitive(&self) -> Result<(BigInt, i8, IntPolynomial)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let content = gcd_many(self.coeffs.iter());
        let unit: i8 = if self.leading().unwrap().is_negative() {
            -1
        } else {
            1
        };
        let sign = BigInt::from(unit);
        let coeffs = self.coeffs.iter().map(|c| c / (&content) * &sign).collect();
        Ok((content, unit, IntPolynomial { coeffs }))
    }

    pub fn is_primitive_positive_lc(&self) -> bool {
        match self.leading() {
            None => false,
            Some(lc) => lc.is_positive() && gcd_many(self.coeffs.iter()).is_one(),
        }
    }

    /// Interval extension: a closed rational interval containing
    /// `{P(t) : t ∈ I}` (outward hull via interval Horner).
    pub fn interval_eval(&self, iv: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            let c = RationalInterval::point(Rational::from_integer(c.clone()));
            acc = acc.mul(iv).add(&c);
        }
        acc
    }

    /// Exact division, `Some(quotient)` iff `other` divides `self` over ℚ.
    pub fn div_exact(&self, other: &IntPolynomial) -> Option<RatPoly> {
        RatPoly::from_int(self).div_rem(&RatPoly::from_int(other)).and_then(
            |(q, r)| {
                r.is_zero().then_some(q)
            },
        )
    }

    /// Resultant of two nonzero polynomials: the determinant of the
    /// Sylvester matrix with `self`'s coefficient rows first, evaluated by
    /// fraction-free (Bareiss) elimination. With this convention
    /// `res(P1, P2) = lc(P1)^{deg P2} · ∏ P2(α)` over the roots of `P1`.
    pub fn resultant(&self, other: &IntPolynomial) -> Result<BigInt> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.deg();
        let n = other.deg();
        if m == 0 && n == 0 {
            return Ok(BigInt::one());
        }
        if m == 0 {
            return Ok(self.coeffs[0].pow(n as u32));
        }
        if n == 0 {
            return Ok(other.coeffs[0].pow(m as u32));
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        Ok(bareiss_determinant(mat))
    }
}

/// Fraction-free determinant; consumes the matrix.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match j {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if j == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Univariate polynomial with exact rational coefficients; used for the
/// curves φ and f and for intermediate rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        RatPoly {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * Rational::from_integer(BigInt::from(j)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|j| self.coeff(j) - other.coeff(j)).collect())
    }

    /// Interval extension over a closed interval (outward hull).
    pub fn interval_eval(&self, iv: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(iv).add(&RationalInterval::point(c.clone()));
        }
        acc
    }

    /// Euclidean division; `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &RatPoly) -> Option<(RatPoly, RatPoly)> {
        if divisor.is_zero() {
            return None;
        }
        let dd = divisor.degree().unwrap();
        let lc = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lc;
            for j in 0..=dd {
                let v = &divisor.coeffs[j] * &q;
                rem[k + j] -= v;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            quot[k] = q;
        }
        Some((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Clears denominators: returns `(P, s)` with integer `P` and positive
    /// integer `s` such that `self = P / s`.
    pub fn clear_denominators(&self) -> (IntPolynomial, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        (IntPolynomial::new(coeffs), lcm)
    }

    /// Parses a minimal polynomial grammar: terms joined by `+`/`-`, each
    /// `coef`, `coef*x^k`, `coef x^k`, `x^k`, or `x`, with integer,
    /// fraction (`a/b`), or decimal coefficients.
    pub fn parse(input: &str) -> Result<RatPoly> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial expression".into()));
        }
        let bytes = s.as_bytes();
        let mut terms: Vec<(usize, usize)> = vec![];
        let mut start = 0;
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 {
                let prev = bytes[i - 1];
                // a sign following ^, /, *, + or - belongs to the number
                if prev != b'^' && prev != b'/' && prev != b'*' && prev != b'+' && prev != b'-' {
                    terms.push((start, i));
                    start = i;
                }
            }
        }
        terms.push((start, s.len()));
        let mut coeffs: Vec<Rational> = vec![];
        for (a, b) in terms {
            let term = &s[a..b];
            let (coef, power) = parse_term(term)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            coeffs[power] += coef;
        }
        Ok(RatPoly::new(coeffs))
    }
}

fn parse_term(term: &str) -> Result<(Rational, usize)> {
    let bad = || Error::Parse(format!("cannot parse polynomial term {term:?}"));
    let (coef_str, var_str) = match term.find(|c| c == 'x' || c == 'X') {
        Some(i) => (&term[..i], &term[i..]),
        None => (term, ""),
    };
    let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
    let coef = match coef_str {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        s => crate::rat::parse_rational(s)?,
    };
    let power = if var_str.is_empty() {
        0
    } else {
        let rest = &var_str[1..];
        if rest.is_empty() {
            1
        } else {
            let rest = rest.strip_prefix('^').ok_or_else(bad)?;
            rest.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok((coef, power))
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let abs_one = abs.is_one();
            match j {
                0 => write!(f, "{}", display_rational(&abs))?,
                _ => {
                    if !abs_one {
                        write!(f, "{}*", display_rational(&abs))?;
                    }
                    if j == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    #[test]
    fn height_examples() {
        assert_eq!(p(&[-2, 0, 1]).height(), BigInt::from(2)); // x^2-2
        assert_eq!(p(&[1, -7, 0, 3]).height(), BigInt::from(7)); // 3x^3-7x+1
        assert_eq!(IntPolynomial::zero().height(), BigInt::from(0));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[-2, 0, 1]).evaluate(&rat(3, 2)), rat(1, 4));
        assert_eq!(p(&[5, 1, 9]).evaluate(&int(0)), int(5));
        assert_eq!(p(&[-3, 2]).evaluate(&rat(3, 2)), int(0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[-2, 0, 1]).derivative(), p(&[0, 2])); // 2x
        assert_eq!(p(&[5]).derivative(), IntPolynomial::zero());
        assert_eq!(p(&[0, 1, 0, 1]).derivative(), p(&[1, 0, 3])); // 3x^2+1
    }

    #[test]
    fn eval_scaled_matches_rational_eval() {
        let q = p(&[-2, 0, 1]);
        let v = q.eval_scaled(&BigInt::from(3), &BigInt::from(2));
        // 2^2 * P(3/2) = 4 * 1/4 = 1
        assert_eq!(v, BigInt::from(1));
        assert_eq!(q.sign_at(&rat(3, 2)), 1);
        assert_eq!(q.sign_at(&rat(7, 5)), -1);
        assert_eq!(p(&[-3, 2]).sign_at(&rat(3, 2)), 0);
    }

    #[test]
    fn resultant_examples() {
        // res(x^2-2, 2x-3) = 1, the 3x3 Sylvester determinant
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[-3, 2])).unwrap(), BigInt::from(1));
        // shared roots
        let f = p(&[-2, 0, 1]);
        assert_eq!(f.resultant(&f).unwrap(), BigInt::from(0));
        // res(x-1, x+1) = (x+1) at 1 = 2
        assert_eq!(p(&[-1, 1]).resultant(&p(&[1, 1])).unwrap(), BigInt::from(2));
        assert!(p(&[1]).resultant(&IntPolynomial::zero()).is_err());
    }

    #[test]
    fn resultant_sign_convention() {
        // res(P1,P2) = lc(P1)^deg(P2) * prod P2(roots of P1).
        // P1 = x^2-1 (roots ±1), P2 = x-3: (1-3)(-1-3) = 8.
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[-3, 1])).unwrap(), BigInt::from(8));
        // Swapped order flips by (-1)^(deg P1 * deg P2): res(P2,P1) = lc^2 * P1(3) = 8.
        assert_eq!(p(&[-3, 1]).resultant(&p(&[-1, 0, 1])).unwrap(), BigInt::from(8));
        // Odd-by-odd swap changes the sign: res(x-1, x+1)=2, res(x+1, x-1)=-2.
        assert_eq!(p(&[1, 1]).resultant(&p(&[-1, 1])).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn content_unit_primitive_examples() {
        let (c, u, prim) = p(&[-4, 0, 2]).content_unit_primitive().unwrap();
        assert_eq!((c, u), (BigInt::from(2), 1));
        assert_eq!(prim, p(&[-2, 0, 1]));

        let (c, u, prim) = p(&[2, 0, -1]).content_unit_primitive().unwrap();
        assert_eq!((c, u), (BigInt::from(1), -1));
        assert_eq!(prim, p(&[-2, 0, 1]));

        let (c, u, prim) = p(&[3, 9, 6]).content_unit_primitive().unwrap();
        assert_eq!((c, u), (BigInt::from(3), 1));
        assert_eq!(prim, p(&[1, 3, 2]));

        assert!(IntPolynomial::zero().content_unit_primitive().is_err());
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let q = p(&[-1, 1, 1]);
        assert_eq!(q.to_string(), "x^2+x-1");
        assert_eq!(p(&[1, -7, 0, 3]).to_string(), "3x^3-7x+1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");

        let r = RatPoly::parse("x^2+x-1").unwrap();
        assert_eq!(r, RatPoly::from_int(&q));
        let r = RatPoly::parse("1/4*x^2 - 1/2").unwrap();
        assert_eq!(r.coeff(2), rat(1, 4));
        assert_eq!(r.coeff(0), rat(-1, 2));
        let r = RatPoly::parse("-x").unwrap();
        assert_eq!(r.coeff(1), int(-1));
        assert!(RatPoly::parse("").is_err());
        assert!(RatPoly::parse("x^").is_err());
    }

    #[test]
    fn ratpoly_division() {
        let f = RatPoly::from_int(&p(&[-1, 0, 1])); // x^2-1
        let g = RatPoly::from_int(&p(&[1, 1])); // x+1
        let (q, r) = f.div_rem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, RatPoly::from_int(&p(&[-1, 1])));
        assert!(p(&[-1, 0, 1]).div_exact(&p(&[1, 1])).is_some());
        assert!(p(&[-2, 0, 1]).div_exact(&p(&[1, 1])).is_none());
    }

    #[test]
    fn interval_eval_contains_range() {
        let f = p(&[-2, 0, 1]);
        let iv = RationalInterval::new(int(1), int(2)).unwrap();
        let h = f.interval_eval(&iv);
        // true range on [1,2] is [-1,2]
        assert!(*h.lo() <= int(-1) && *h.hi() >= int(2));
    }
}
