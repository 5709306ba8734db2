//! Arbitrary-precision rational scalars, intervals, and exact order
//! comparisons against quantities of the form `s · Q^e` with rational
//! exponent `e`.
//!
//! Quantities like region side lengths `c₈·Q^{-γ}` are irrational for
//! fractional `γ`, so they are never materialized as numbers. Instead a
//! [`ScaledPower`] keeps `(s, Q, e)` symbolically and compares itself
//! against rationals exactly by clearing the exponent denominator:
//! for `x, s > 0` and `e = p/q`, `x < s·Q^{p/q}  ⇔  x^q < s^q·Q^p`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Shorthand rational constructor used pervasively in tests.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "3/4", "-2", or decimal "0.75" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse rational from {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.trim_start().starts_with('-');
        let i: BigInt = if i.is_empty() || i == "-" {
            BigInt::zero()
        } else {
            i.parse().map_err(|_| bad())?
        };
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac: BigInt = f.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(f.len() as u32);
        let num = i.abs() * &den + frac;
        let num = if neg { -num } else { num };
        return Ok(Rational::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Renders a rational as `num/den` (or just `num` for integers).
pub fn display_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back through a digit-scaled path for extreme magnitudes.
        let s = x.numer().to_string().len() as i32 - x.denom().to_string().len() as i32;
        if s > 300 {
            f64::INFINITY * x.numer().signum().to_f64().unwrap_or(1.0)
        } else {
            0.0
        }
    })
}

/// Three-valued answer for membership / comparison questions that may be
/// undecidable at the current refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trilean {
    True,
    False,
    Unknown,
}

impl Trilean {
    pub fn is_true(self) -> bool {
        self == Trilean::True
    }
    pub fn is_false(self) -> bool {
        self == Trilean::False
    }
    pub fn and(self, other: Trilean) -> Trilean {
        use Trilean::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }
}

/// Closed rational interval `[lo, hi]` with `lo ≤ hi`.
///
/// Whether the endpoints belong to the modeled set is decided by the user
/// of the interval; counting code works with open regions and treats
/// endpoint hits explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!(
                "interval endpoints out of order: {} > {}",
                display_rational(&lo),
                display_rational(&hi)
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_empty_open(&self) -> bool {
        self.lo >= self.hi
    }

    /// Strict interior membership.
    pub fn contains_open(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_closed(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    pub fn hull(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Interval sum `{a+b : a ∈ self, b ∈ other}`.
    pub fn add(&self, other: &Self) -> Self {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Interval product hull.
    pub fn mul(&self, other: &Self) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        RationalInterval { lo, hi }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_negative() {
            RationalInterval {
                lo: k * &self.hi,
                hi: k * &self.lo,
            }
        } else {
            RationalInterval {
                lo: k * &self.lo,
                hi: k * &self.hi,
            }
        }
    }

    pub fn neg(&self) -> Self {
        RationalInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Hull of `|x|` over the interval.
    pub fn abs_hull(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RationalInterval {
                lo: Rational::zero(),
                hi: (-self.lo.clone()).max(self.hi.clone()),
            }
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            display_rational(&self.lo),
            display_rational(&self.hi)
        )
    }
}

/// Symbolic positive quantity `scale · base^exp` with rational `exp`.
///
/// `scale ≥ 0`, `base ≥ 1`. Supports exact order comparison against
/// rationals and certified rational bracketing.
#[derive(Debug, Clone)]
pub struct ScaledPower {
    scale: Rational,
    base: u64,
    exp: Rational,
}

impl ScaledPower {
    pub fn new(scale: Rational, base: u64, exp: Rational) -> Result<Self> {
        if scale.is_negative() {
            return Err(Error::invalid("ScaledPower scale must be nonnegative"));
        }
        if base == 0 {
            return Err(Error::invalid("ScaledPower base must be >= 1"));
        }
        Ok(ScaledPower { scale, base, exp })
    }

    pub fn exact(value: Rational) -> Self {
        ScaledPower {
            scale: value,
            base: 1,
            exp: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exp(&self) -> &Rational {
        &self.exp
    }

    /// Same power term with the scale multiplied by `k ≥ 0`.
    pub fn scaled_by(&self, k: &Rational) -> ScaledPower {
        ScaledPower {
            scale: &self.scale * k,
            base: self.base,
            exp: self.exp.clone(),
        }
    }

    /// Exact `value.cmp(x)` where value is `scale · base^exp`.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        // value = scale * base^(p/q) with q > 0.
        if self.scale.is_zero() {
            return Rational::zero().cmp(x);
        }
        if !x.is_positive() {
            // value > 0 >= x
            return Ordering::Greater;
        }
        if self.base == 1 || self.exp.is_zero() {
            return self.scale.cmp(x);
        }
        let p = self.exp.numer();
        let q = self.exp.denom().to_u32().expect("exponent denominator fits u32");
        let xq = pow_rational(x, q);
        let sq = pow_rational(&self.scale, q);
        let pa = p.abs().to_u32().expect("exponent numerator fits u32");
        let bp = Rational::from_integer(BigInt::from(self.base).pow(pa));
        if p.is_negative() {
            // s^q * B^-pa  vs  x^q   <=>   s^q  vs  x^q * B^pa
            sq.cmp(&(xq * bp))
        } else {
            (sq * bp).cmp(&xq)
        }
    }

    /// `x.cmp(value)` convenience.
    pub fn cmp_from_rational(&self, x: &Rational) -> Ordering {
        self.cmp_rational(x).reverse()
    }

    /// Certified rational bracket `[lo, hi]` with `hi/lo ≤ 1 + rel` (for
    /// nonzero values).
    pub fn bracket(&self, rel: &Rational) -> (Rational, Rational) {
        if self.scale.is_zero() {
            return (Rational::zero(), Rational::zero());
        }
        if self.base == 1 || self.exp.is_zero() {
            return (self.scale.clone(), self.scale.clone());
        }
        let p = self.exp.numer();
        let q = self.exp.denom().to_u32().expect("exponent denominator fits u32");
        let pa = p.abs().to_u32().expect("exponent numerator fits u32");
        let bp = Rational::from_integer(BigInt::from(self.base).pow(pa));
        // base^|exp| = bp^(1/q)
        let (rlo, rhi) = nth_root_bracket(&bp, q, rel);
        if p.is_negative() {
            (&self.scale / rhi, &self.scale / rlo)
        } else {
            (&self.scale * rlo, &self.scale * rhi)
        }
    }

    /// Certified upper bound within relative error `rel`.
    pub fn upper(&self, rel: &Rational) -> Rational {
        self.bracket(rel).1
    }

    pub fn lower(&self, rel: &Rational) -> Rational {
        self.bracket(rel).0
    }

    pub fn to_f64(&self) -> f64 {
        let r = rat(1, 1 << 20);
        let (lo, hi) = self.bracket(&r);
        (to_f64(&lo) + to_f64(&hi)) / 2.0
    }

    /// The product of two scaled powers over the same base.
    pub fn mul(&self, other: &ScaledPower) -> Result<ScaledPower> {
        let base = if self.base == 1 {
            other.base
        } else if other.base == 1 || other.base == self.base {
            self.base
        } else {
            return Err(Error::invalid("mixed bases in ScaledPower::mul"));
        };
        ScaledPower::new(
            &self.scale * &other.scale,
            base,
            if self.base == 1 {
                other.exp.clone()
            } else if other.base == 1 {
                self.exp.clone()
            } else {
                &self.exp + &other.exp
            },
        )
    }
}

pub fn pow_rational(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Integer power with i64 exponent (negative allowed, x nonzero then).
pub fn pow_rational_i64(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        pow_rational(x, k as u32)
    } else {
        pow_rational(x, (-k) as u32).recip()
    }
}

/// Certified bracket `[lo, hi]` around `x^{1/n}` for `x ≥ 0`, with
/// `hi ≤ lo·(1+rel)` once the value is nonzero.
///
/// The upper bound is produced by a monotone Newton iteration that stays
/// above the true root at every step; the lower bound is recovered as
/// `x / hi^{n-1}`.
pub fn nth_root_bracket(x: &Rational, n: u32, rel: &Rational) -> (Rational, Rational) {
    assert!(n >= 1, "root order must be >= 1");
    assert!(!x.is_negative(), "nth_root_bracket needs x >= 0");
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    if n == 1 {
        return (x.clone(), x.clone());
    }
    // Seed from f64, then push above the root if necessary.
    let mut u = {
        let approx = to_f64(x).powf(1.0 / n as f64);
        if approx.is_finite() && approx > 0.0 {
            parse_rational(&format!("{:.17e}", approx * 1.0000001))
                .ok()
                .filter(|r| r.is_positive())
                .unwrap_or_else(Rational::one)
        } else {
            Rational::one()
        }
    };
    while pow_rational(&u, n) < *x {
        u *= int(2);
    }
    let nr = int(n as i64);
    let one_plus = Rational::one() + rel;
    let stop = x * pow_rational(&one_plus, n);
    // Newton from above: u <- ((n-1)u + x/u^{n-1}) / n, rounded up so the
    // iterate never drops below the root.
    let grid = Rational::from_integer(BigInt::one() << 96);
    for _ in 0..256 {
        if pow_rational(&u, n) <= stop {
            break;
        }
        let next = ((&nr - Rational::one()) * &u + x / pow_rational(&u, n - 1)) / &nr;
        // Snap up to a bounded-denominator grid to keep numbers small.
        let snapped = Rational::new((&next * &grid).ceil().to_integer(), grid.to_integer());
        u = if pow_rational(&snapped, n) >= *x { snapped } else { next };
    }
    let lo = x / pow_rational(&u, n - 1);
    (lo, u)
}

/// Number of integers in the open interval `(lo, hi)`.
///
/// `floor(lo)+1` is the smallest integer strictly above `lo` and
/// `ceil(hi)-1` the largest strictly below `hi`, for integer and
/// non-integer endpoints alike.
pub fn integers_in_open(lo: &Rational, hi: &Rational) -> i64 {
    if lo >= hi {
        return 0;
    }
    let first = lo.floor().to_integer() + 1;
    let last = hi.ceil().to_integer() - 1;
    let count: BigInt = last - first + 1;
    count.max(BigInt::zero()).to_i64().unwrap_or(i64::MAX)
}

/// All integers in the closed interval `[lo, hi]` as an inclusive range.
pub fn integer_range_closed(lo: &Rational, hi: &Rational) -> Option<(BigInt, BigInt)> {
    if lo > hi {
        return None;
    }
    let first = lo.ceil().to_integer();
    let last = hi.floor().to_integer();
    (first <= last).then_some((first, last))
}

pub fn gcd_many<'a>(items: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for it in items {
        g = g.gcd(it);
        if g.is_one() {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn scaled_power_comparisons() {
        // 2 * 10^(1/2) ≈ 6.3246
        let sp = ScaledPower::new(int(2), 10, rat(1, 2)).unwrap();
        assert_eq!(sp.cmp_rational(&int(6)), Ordering::Greater);
        assert_eq!(sp.cmp_rational(&int(7)), Ordering::Less);
        // exact hit: 3 * 4^(1/2) = 6
        let sp = ScaledPower::new(int(3), 4, rat(1, 2)).unwrap();
        assert_eq!(sp.cmp_rational(&int(6)), Ordering::Equal);
        // negative exponent: 10^(-1/2) ≈ 0.3162
        let sp = ScaledPower::new(int(1), 10, rat(-1, 2)).unwrap();
        assert_eq!(sp.cmp_rational(&rat(3, 10)), Ordering::Greater);
        assert_eq!(sp.cmp_rational(&rat(1, 3)), Ordering::Less);
        // zero scale compares below any positive rational
        let sp = ScaledPower::new(int(0), 10, rat(-1, 2)).unwrap();
        assert_eq!(sp.cmp_rational(&rat(1, 1000)), Ordering::Less);
        assert_eq!(sp.cmp_rational(&int(0)), Ordering::Equal);
    }

    #[test]
    fn nth_root_brackets_are_certified() {
        let x = int(5832);
        let rel = rat(1, 1_000_000_000);
        let (lo, hi) = nth_root_bracket(&x, 2, &rel);
        assert!(pow_rational(&lo, 2) <= x && x <= pow_rational(&hi, 2));
        assert!(&hi - &lo <= hi.clone() * rel.clone() * int(2));
        // cube root of 8 is exactly 2
        let (lo, hi) = nth_root_bracket(&int(8), 3, &rel);
        assert!(lo <= int(2) && int(2) <= hi);
    }

    #[test]
    fn scaled_power_bracket_straddles_value() {
        let sp = ScaledPower::new(int(3), 7, rat(-2, 3)).unwrap();
        let (lo, hi) = sp.bracket(&rat(1, 1 << 30));
        // 3*7^(-2/3) ≈ 0.819828
        assert!(to_f64(&lo) < 0.81983 && to_f64(&hi) > 0.81982);
        assert_eq!(sp.cmp_rational(&lo), Ordering::Greater); // value > lo
        assert_eq!(sp.cmp_rational(&hi), Ordering::Less); // value < hi  (irrational)
    }

    #[test]
    fn interval_ops() {
        let a = RationalInterval::new(int(-1), int(2)).unwrap();
        assert_eq!(a.abs_hull(), RationalInterval::new(int(0), int(2)).unwrap());
        let b = RationalInterval::new(int(3), int(4)).unwrap();
        assert_eq!(a.add(&b), RationalInterval::new(int(2), int(6)).unwrap());
        assert_eq!(a.mul(&b), RationalInterval::new(int(-4), int(8)).unwrap());
        assert!(a.intersect(&b).is_none());
    }

    #[test]
    fn counts_integers_in_open_interval() {
        assert_eq!(integers_in_open(&int(0), &int(1)), 0);
        assert_eq!(integers_in_open(&int(0), &int(2)), 1);
        assert_eq!(integers_in_open(&rat(-1, 2), &rat(5, 2)), 3); // 0,1,2
        assert_eq!(integers_in_open(&int(3), &int(3)), 0);
    }
}
