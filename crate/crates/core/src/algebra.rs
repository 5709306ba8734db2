//! Irreducibility over ℚ, canonical minimal polynomials, and algebraic
//! points: ordered pairs of real roots sharing one irreducible minimal
//! polynomial of degree ≥ 2.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::IntPolynomial;
use crate::rat::{Rational, RationalInterval, Trilean};
use crate::roots::{divisors, isolate_real_roots, IsolatedRoot, RootEnclosure};
use crate::{Error, Result};

/// Largest degree the exact irreducibility test supports.
pub const MAX_IRREDUCIBILITY_DEGREE: usize = 5;

/// `(content, unit, primitive)` normalization; see
/// [`IntPolynomial::content_unit_primitive`].
pub fn content_and_primitive(p: &IntPolynomial) -> Result<(BigInt, i8, IntPolynomial)> {
    p.content_unit_primitive()
}

/// Canonical representative used throughout enumeration: primitive with
/// positive leading coefficient.
pub fn canonicalize(p: &IntPolynomial) -> Result<IntPolynomial> {
    Ok(p.content_unit_primitive()?.2)
}

fn has_rational_root(p: &IntPolynomial) -> bool {
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return true; // root 0
    }
    let an = p.leading().unwrap().clone();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1i64, -1i64] {
                let cand = Rational::new(&num * BigInt::from(sign), den.clone());
                if p.sign_at(&cand) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Coefficient bound for a degree-`k` factor of `p` (Mignotte-type):
/// `2^k · ceil(sqrt(deg p + 1)) · H(p)`.
pub fn factor_height_bound(p: &IntPolynomial, k: usize) -> BigInt {
    let n1 = BigInt::from(p.deg() as u64 + 1);
    let s = n1.sqrt();
    let ceil_sqrt = if &s * &s == n1 { s } else { s + BigInt::one() };
    (BigInt::one() << k) * ceil_sqrt * p.height()
}

/// Search for a monic-normalized quadratic factor `b2·x² + b1·x + b0` with
/// `b2 | lc(p)`, `b0 | p(0)` and `|b1|` bounded by the factor-height
/// bound.
fn has_degree2_factor(p: &IntPolynomial) -> bool {
    let a0 = p.coeff(0);
    debug_assert!(!a0.is_zero(), "rational-root test runs first");
    let bound = factor_height_bound(p, 2);
    let lead_divs = divisors(p.leading().unwrap());
    let const_divs = divisors(&a0);
    for b2 in &lead_divs {
        for b0a in &const_divs {
            if b0a > &bound {
                continue;
            }
            for b0 in [b0a.clone(), -b0a.clone()] {
                let mut b1 = -bound.clone();
                while b1 <= bound {
                    let g = IntPolynomial::new(vec![b0.clone(), b1.clone(), b2.clone()]);
                    if p.div_exact(&g).is_some() {
                        return true;
                    }
                    b1 += BigInt::one();
                }
            }
        }
    }
    false
}

/// Exact irreducibility over ℚ for primitive polynomials of degree 1–5.
///
/// Degrees 2 and 3 reduce to the rational-root test; degrees 4 and 5
/// additionally search for a quadratic factor, whose coefficients are
/// bounded by [`factor_height_bound`].
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::invalid("irreducibility needs degree >= 1"));
    }
    if deg > MAX_IRREDUCIBILITY_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: deg,
            max: MAX_IRREDUCIBILITY_DEGREE,
        });
    }
    if !crate::rat::gcd_many(p.coeffs().iter()).is_one() {
        return Err(Error::invalid("irreducibility needs a primitive polynomial"));
    }
    if deg == 1 {
        return Ok(true);
    }
    if deg == 2 {
        // Faster equivalent of the rational-root test: a quadratic is
        // reducible over ℚ exactly when its discriminant is a perfect
        // square.
        let a = p.coeff(2);
        let b = p.coeff(1);
        let c = p.coeff(0);
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if disc.is_negative() {
            return Ok(true);
        }
        let r = disc.sqrt();
        return Ok(&r * &r != disc);
    }
    if has_rational_root(p) {
        return Ok(false);
    }
    if deg <= 3 {
        return Ok(true);
    }
    Ok(!has_degree2_factor(p))
}

/// A real algebraic number of degree ≥ 2: canonical minimal polynomial
/// plus an isolating enclosure for one of its real roots.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    enclosure: RootEnclosure,
}

impl AlgebraicNumber {
    pub fn new(minpoly: IntPolynomial, enclosure: RootEnclosure) -> Result<Self> {
        validate_minimal_polynomial(&minpoly)?;
        Ok(AlgebraicNumber { minpoly, enclosure })
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn enclosure(&self) -> &RootEnclosure {
        &self.enclosure
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn height(&self) -> BigInt {
        self.minpoly.height()
    }
}

fn validate_minimal_polynomial(p: &IntPolynomial) -> Result<()> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < 2 {
        return Err(Error::invalid("minimal polynomial degree must be >= 2"));
    }
    if !p.is_primitive_positive_lc() {
        return Err(Error::invalid(
            "minimal polynomial must be primitive with positive leading coefficient",
        ));
    }
    if !is_irreducible(p)? {
        return Err(Error::invalid("minimal polynomial must be irreducible"));
    }
    Ok(())
}

/// Ordered pair of real roots of one irreducible minimal polynomial.
/// Diagonal pairs (both coordinates the same root) are included.
#[derive(Debug, Clone)]
pub struct AlgebraicPoint {
    minpoly: IntPolynomial,
    root1: RootEnclosure,
    root2: RootEnclosure,
}

impl AlgebraicPoint {
    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn root1(&self) -> &RootEnclosure {
        &self.root1
    }

    pub fn root2(&self) -> &RootEnclosure {
        &self.root2
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn height(&self) -> BigInt {
        self.minpoly.height()
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.root1.root_index(), self.root2.root_index())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.root1.to_f64(), self.root2.to_f64())
    }
}

/// All ordered pairs of real roots of an irreducible polynomial, `r²` of
/// them for `r` real roots.
pub fn algebraic_points(p: &IntPolynomial) -> Result<Vec<AlgebraicPoint>> {
    validate_minimal_polynomial(p)?;
    let roots = isolate_real_roots(p)?;
    let mut out = Vec::with_capacity(roots.len() * roots.len());
    for ri in &roots {
        for rj in &roots {
            out.push(AlgebraicPoint {
                minpoly: p.clone(),
                root1: ri.enclosure.clone(),
                root2: rj.enclosure.clone(),
            });
        }
    }
    Ok(out)
}

/// Checks `∏ |α_i| ≤ (n+1)·2ⁿ·H(P)/|a_n|` over a subset of the distinct
/// real roots (indices into the isolation order). The bound holds for any
/// subset of roots of any nonzero polynomial, so `false` indicates a bug.
pub fn feldman_product_bound_holds(p: &IntPolynomial, subset: &[usize]) -> Result<bool> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let roots = isolate_real_roots(p)?;
    for &i in subset {
        if i >= roots.len() {
            return Err(Error::invalid(format!(
                "root index {i} out of range ({} real roots)",
                roots.len()
            )));
        }
    }
    let bound = Rational::from_integer(BigInt::from(deg as u64 + 1))
        * Rational::from_integer(BigInt::one() << deg)
        * Rational::new(p.height(), p.leading().unwrap().abs());
    let mut encl: Vec<RootEnclosure> = subset.iter().map(|&i| roots[i].enclosure.clone()).collect();
    for _ in 0..128 {
        let mut prod = RationalInterval::point(Rational::one());
        for e in &encl {
            prod = prod.mul(&e.abs_hull());
        }
        if *prod.hi() <= bound {
            return Ok(true);
        }
        if *prod.lo() > bound {
            return Ok(false);
        }
        for e in &mut encl {
            *e = e.halve();
        }
    }
    // Only reachable when the product sits exactly on the bound; the claim
    // is non-strict, so resolve by the lower end.
    let mut prod = RationalInterval::point(Rational::one());
    for e in &encl {
        prod = prod.mul(&e.abs_hull());
    }
    Ok(*prod.lo() <= bound)
}

/// Decides whether `x` belongs to the nearest-root set of the enclosed
/// root: `|x − α| ≤ |x − β|` for every other real root `β` of `P`.
///
/// Complex roots are not compared (callers in this crate work with
/// polynomials whose relevant geometry is real); the answer is exact for
/// the real-root configuration.
pub fn in_nearest_root_set(roots: &[IsolatedRoot], target: usize, x: &Rational) -> Trilean {
    let mut encl: Vec<RootEnclosure> = roots.iter().map(|r| r.enclosure.clone()).collect();
    for _ in 0..96 {
        let dt = dist_hull(x, &encl[target]);
        let mut all_le = true;
        let mut any_lt = false;
        for (i, e) in encl.iter().enumerate() {
            if i == target {
                continue;
            }
            let d = dist_hull(x, e);
            if dt.hi() > d.hi() {
                all_le = false;
            }
            if dt.lo() > d.hi() {
                any_lt = true;
                break;
            }
        }
        if any_lt {
            return Trilean::False;
        }
        if all_le {
            return Trilean::True;
        }
        for e in &mut encl {
            *e = e.halve();
        }
    }
    Trilean::Unknown
}

fn dist_hull(x: &Rational, e: &RootEnclosure) -> RationalInterval {
    if let Some(r) = e.exact_value() {
        return RationalInterval::point((x - r).abs());
    }
    RationalInterval::point(x.clone())
        .add(&e.interval().neg())
        .abs_hull()
}

/// Checks the root-distance inequality `|x − α| ≤ n·|P(x)| / |P′(x)|` for
/// a point `x` in the nearest-root set of the enclosed root.
///
/// The right-hand side is an exact rational; the left-hand side is refined
/// until the comparison decides, with `Unknown` after the step cap.
pub fn root_gap_bound(p: &IntPolynomial, x: &Rational, e: &RootEnclosure) -> Result<Trilean> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::invalid("root gap bound needs degree >= 1"));
    }
    let px = p.evaluate(x).abs();
    let dpx = p.derivative().evaluate(x).abs();
    if dpx.is_zero() {
        return Err(Error::invalid("P'(x) = 0"));
    }
    let rhs = Rational::from_integer(BigInt::from(deg as u64)) * px / dpx;
    if let Some(r) = e.exact_value() {
        return Ok(if (x - r).abs() <= rhs {
            Trilean::True
        } else {
            Trilean::False
        });
    }
    let mut enc = e.clone();
    for _ in 0..96 {
        let d = dist_hull(x, &enc);
        if *d.hi() <= rhs {
            return Ok(Trilean::True);
        }
        if *d.lo() > rhs {
            return Ok(Trilean::False);
        }
        enc = enc.halve();
        if let Some(r) = enc.exact_value() {
            return Ok(if (x - r).abs() <= rhs {
                Trilean::True
            } else {
                Trilean::False
            });
        }
    }
    Ok(Trilean::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    #[test]
    fn irreducibility_small_degrees() {
        assert!(is_irreducible(&p(&[-2, 0, 1])).unwrap()); // x^2-2
        assert!(!is_irreducible(&p(&[-1, 0, 1])).unwrap()); // (x-1)(x+1)
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1])).unwrap()); // x^4+1
        assert!(is_irreducible(&p(&[-1, 1, 1])).unwrap()); // x^2+x-1
        assert!(is_irreducible(&p(&[-2, 0, 0, 1])).unwrap()); // x^3-2
        assert!(!is_irreducible(&p(&[0, 0, 1])).unwrap()); // x^2
        // (x^2+x+1)(x^2-x+1) = x^4+x^2+1
        assert!(!is_irreducible(&p(&[1, 0, 1, 0, 1])).unwrap());
        // (x^2-2)(x^2-3) = x^4-5x^2+6
        assert!(!is_irreducible(&p(&[6, 0, -5, 0, 1])).unwrap());
        // x^5-x-1 is irreducible
        assert!(is_irreducible(&p(&[-1, -1, 0, 0, 0, 1])).unwrap());
        // (x^2-2)(x^3-2)
        let f = p(&[-2, 0, 0, 1]).mul(&p(&[-2, 0, 1]));
        assert!(!is_irreducible(&f).unwrap());
        assert!(matches!(
            is_irreducible(&p(&[1, 0, 0, 0, 0, 0, 1])),
            Err(Error::UnsupportedDegree { .. })
        ));
        assert!(is_irreducible(&p(&[2, 0, 2])).is_err()); // not primitive
    }

    #[test]
    fn algebraic_points_examples() {
        let pts = algebraic_points(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(pts.len(), 4);
        let idx: Vec<_> = pts.iter().map(|q| q.indices()).collect();
        assert_eq!(idx, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(pts[0].degree(), 2);
        assert_eq!(pts[0].height(), BigInt::from(2));

        assert!(algebraic_points(&p(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(algebraic_points(&p(&[-2, 0, 0, 1])).unwrap().len(), 1);

        assert!(algebraic_points(&p(&[-1, 0, 1])).is_err()); // reducible
        assert!(algebraic_points(&p(&[1, 1])).is_err()); // degree 1
    }

    #[test]
    fn feldman_examples() {
        // 2x^2-1: product of |roots| = 1/2 <= 3*4*(1/2) = 6
        assert!(feldman_product_bound_holds(&p(&[-1, 0, 2]), &[0, 1]).unwrap());
        // x^2-2, positive root only: sqrt2 <= 3*4*2 = 24
        assert!(feldman_product_bound_holds(&p(&[-2, 0, 1]), &[1]).unwrap());
        // empty product
        assert!(feldman_product_bound_holds(&p(&[-2, 0, 1]), &[]).unwrap());
        assert!(feldman_product_bound_holds(&p(&[-2, 0, 1]), &[5]).is_err());
    }

    #[test]
    fn root_gap_bound_examples() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        let pos = &roots[1].enclosure;
        // x = 3/2 near sqrt2: |3/2-sqrt2| ≈ 0.0858 <= 2*(1/4)/3 ≈ 0.1667
        assert!(root_gap_bound(&f, &rat(3, 2), pos).unwrap().is_true());
        // x = 7/5: |7/5-sqrt2| ≈ 0.0142 <= 2*(1/25)/(14/5) ≈ 0.0286
        assert!(root_gap_bound(&f, &rat(7, 5), pos).unwrap().is_true());
        // rational root case: x exactly at the root of 2x-3
        let g = p(&[-3, 2]);
        let groots = isolate_real_roots(&g).unwrap();
        assert!(root_gap_bound(&g, &rat(3, 2), &groots[0].enclosure)
            .unwrap()
            .is_true());
        assert!(root_gap_bound(&f, &Rational::zero(), pos).is_err()); // P'(0)=0
    }

    #[test]
    fn nearest_root_set_decisions() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert!(in_nearest_root_set(&roots, 1, &rat(3, 2)).is_true());
        assert!(in_nearest_root_set(&roots, 0, &rat(3, 2)).is_false());
        // exactly equidistant: x = 0 from ±sqrt2 — both are nearest
        assert!(in_nearest_root_set(&roots, 0, &int(0)).is_true());
        assert!(in_nearest_root_set(&roots, 1, &int(0)).is_true());
    }

    #[test]
    fn canonicalization() {
        let (c, u, prim) = content_and_primitive(&p(&[4, 0, -2])).unwrap();
        assert_eq!((c, u), (BigInt::from(2), -1));
        assert_eq!(prim, p(&[-2, 0, 1]));
        assert_eq!(canonicalize(&p(&[4, 0, -2])).unwrap(), p(&[-2, 0, 1]));
    }
}
