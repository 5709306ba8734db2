//! Rigorous real-root isolation and refinement for integer polynomials.
//!
//! Roots are represented by [`RootEnclosure`]s: open rational intervals
//! containing exactly one real root of a square-free polynomial, with
//! endpoints that are never roots themselves, so sign tests stay total.
//! Counting uses Sturm sequences built with positively-scaled
//! pseudo-remainders (scaling by a positive factor keeps every sign
//! pattern intact).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::{IntPolynomial, RatPoly};
use crate::rat::{int, Rational, RationalInterval, Trilean};
use crate::{Error, Result};

/// Isolating interval for one real root of one square-free polynomial.
///
/// Invariants: `poly` is square-free, primitive, with positive leading
/// coefficient; exactly one real root of `poly` lies strictly inside
/// `interval`; neither endpoint is a root. When the root happens to be
/// rational it is also stored exactly, which keeps boundary comparisons
/// decidable.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    poly: IntPolynomial,
    interval: RationalInterval,
    root_index: usize,
    exact: Option<Rational>,
}

impl RootEnclosure {
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn interval(&self) -> &RationalInterval {
        &self.interval
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    /// The root as an exact rational, when it is one.
    pub fn exact_value(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    pub fn width(&self) -> Rational {
        self.interval.width()
    }

    pub fn midpoint(&self) -> Rational {
        self.interval.midpoint()
    }

    pub fn to_f64(&self) -> f64 {
        crate::rat::to_f64(&self.midpoint())
    }

    /// Hull of `|α|` for the enclosed root.
    pub fn abs_hull(&self) -> RationalInterval {
        if let Some(x) = &self.exact {
            return RationalInterval::point(x.abs());
        }
        self.interval.abs_hull()
    }

    /// One bisection step; the returned enclosure has at most half the
    /// width and still contains the root.
    pub fn halve(&self) -> RootEnclosure {
        if let Some(x) = &self.exact {
            let w = self.width() / int(4);
            return RootEnclosure {
                poly: self.poly.clone(),
                interval: RationalInterval::new(x - &w, x + &w).unwrap(),
                root_index: self.root_index,
                exact: self.exact.clone(),
            };
        }
        let m = self.midpoint();
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            // The midpoint is the root itself.
            let w = self.width() / int(8);
            return RootEnclosure {
                poly: self.poly.clone(),
                interval: RationalInterval::new(&m - &w, &m + &w).unwrap(),
                root_index: self.root_index,
                exact: Some(m),
            };
        }
        let slo = self.poly.sign_at(self.interval.lo());
        let (lo, hi) = if slo != sm {
            (self.interval.lo().clone(), m)
        } else {
            (m, self.interval.hi().clone())
        };
        RootEnclosure {
            poly: self.poly.clone(),
            interval: RationalInterval::new(lo, hi).unwrap(),
            root_index: self.root_index,
            exact: None,
        }
    }

    /// Bisects until the width is strictly below `width`. Enclosures that
    /// are already narrow enough are returned unchanged.
    pub fn refined(&self, width: &Rational) -> RootEnclosure {
        let mut e = self.clone();
        while e.width() >= *width {
            e = e.halve();
        }
        e
    }

    /// Position of the root relative to `x`. Refines internally by up to
    /// `max_halvings` bisections; `None` only when still straddling after
    /// the budget (impossible for rational `x`, since either the root is
    /// irrational — strict inequality eventually resolves — or it is
    /// rational and detected exactly).
    pub fn cmp_rational(&self, x: &Rational, max_halvings: u32) -> Option<std::cmp::Ordering> {
        if let Some(r) = &self.exact {
            return Some(r.cmp(x));
        }
        let mut e = self.clone();
        for _ in 0..=max_halvings {
            if e.interval.hi() <= x {
                return Some(std::cmp::Ordering::Less);
            }
            if x <= e.interval.lo() {
                return Some(std::cmp::Ordering::Greater);
            }
            if let Some(r) = &e.exact {
                return Some(r.cmp(x));
            }
            e = e.halve();
        }
        None
    }

    /// Strict membership of the root in the open interval.
    pub fn in_open_interval(&self, iv: &RationalInterval, max_halvings: u32) -> Trilean {
        use std::cmp::Ordering::*;
        let a = self.cmp_rational(iv.lo(), max_halvings);
        if matches!(a, Some(Less | Equal)) {
            return Trilean::False;
        }
        let b = self.cmp_rational(iv.hi(), max_halvings);
        if matches!(b, Some(Greater | Equal)) {
            return Trilean::False;
        }
        match (a, b) {
            (Some(Greater), Some(Less)) => Trilean::True,
            _ => Trilean::Unknown,
        }
    }
}

/// One distinct real root with its multiplicity in the original polynomial.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub enclosure: RootEnclosure,
    pub multiplicity: u32,
}

/// Sturm chain of a square-free polynomial.
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    /// `p` must be square-free; callers normally pass
    /// [`square_free_part`] output.
    pub fn new(p: &IntPolynomial) -> SturmChain {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let r = neg_prem_positive(&chain[chain.len() - 2], &chain[chain.len() - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r);
            }
        }
        SturmChain { chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut prev: i8 = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Number of distinct roots in `(a, b]` for `a < b`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct roots in the open interval, given non-root
    /// endpoints.
    pub fn count_open_nonroot(&self, a: &Rational, b: &Rational) -> usize {
        debug_assert!(self.chain[0].sign_at(a) != 0 && self.chain[0].sign_at(b) != 0);
        self.count_half_open(a, b)
    }
}

/// Negated pseudo-remainder with a guaranteed positive scaling factor (as
/// Sturm chains require), reduced to a primitive representative that keeps
/// the remainder's sign.
fn neg_prem_positive(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let db = b.deg();
    let lcb = b.leading().unwrap().clone();
    let mut r = a.clone();
    let mut steps: u32 = 0;
    while !r.is_zero() && r.deg() >= db {
        let k = r.deg() - db;
        let lead = r.leading().unwrap().clone();
        r = r.scale(&lcb).sub(&b.mul(&IntPolynomial::monomial(lead, k)));
        steps += 1;
    }
    if lcb.is_negative() && steps % 2 == 1 {
        r = r.negate();
    }
    let r = r.negate();
    if r.is_zero() {
        return r;
    }
    // Strip the (positive) content only; keep the sign.
    let (_, unit, prim) = r.content_unit_primitive().unwrap();
    if unit < 0 {
        prim.negate()
    } else {
        prim
    }
}

/// Primitive positive-lc gcd of two integer polynomials.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() {
        return normalize_sign(b);
    }
    if b.is_zero() {
        return normalize_sign(a);
    }
    let mut x = RatPoly::from_int(a);
    let mut y = RatPoly::from_int(b);
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y).unwrap();
        x = y;
        y = r;
    }
    let (p, _) = x.clear_denominators();
    normalize_sign(&p)
}

fn normalize_sign(p: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    let (_, _, prim) = p.content_unit_primitive().unwrap();
    prim
}

/// Square-free part (primitive, positive leading coefficient): the product
/// of the distinct irreducible factors.
pub fn square_free_part(p: &IntPolynomial) -> Result<IntPolynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(IntPolynomial::from_i64(&[1]));
    }
    let g = poly_gcd(p, &p.derivative());
    if g.deg() == 0 {
        return Ok(normalize_sign(p));
    }
    let q = p.div_exact(&g).expect("gcd divides");
    let (qi, _) = q.clear_denominators();
    Ok(normalize_sign(&qi))
}

/// Yun decomposition: returns `(gᵢ, i)` with `p` equal to
/// `unit · content · ∏ gᵢ^i`, each `gᵢ` square-free, pairwise coprime.
pub fn square_free_decomposition(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(vec![]);
    }
    let pn = normalize_sign(p);
    let f = RatPoly::from_int(&pn);
    let g_int = poly_gcd(&pn, &pn.derivative());
    if g_int.deg() == 0 {
        return Ok(vec![(pn, 1)]);
    }
    let g = RatPoly::from_int(&g_int);
    let mut out = vec![];
    let mut w = f.div_rem(&g).unwrap().0;
    let mut y = f.derivative().div_rem(&g).unwrap().0;
    let mut i = 1u32;
    while !w.is_constant() {
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            let (wi, _) = w.clear_denominators();
            out.push((normalize_sign(&wi), i));
            return Ok(out);
        }
        let (wi, _) = w.clear_denominators();
        let (zi, _) = z.clear_denominators();
        let fi = poly_gcd(&wi, &zi);
        if fi.deg() >= 1 {
            out.push((fi.clone(), i));
        }
        let fr = RatPoly::from_int(&fi);
        w = w.div_rem(&fr).unwrap().0;
        y = z.div_rem(&fr).unwrap().0;
        i += 1;
    }
    Ok(out)
}

/// Every real root lies strictly inside `(-B, B)`.
pub fn cauchy_bound(p: &IntPolynomial) -> Rational {
    let lc = p.leading().expect("nonzero").abs();
    Rational::one() + Rational::new(p.height(), lc)
}

/// Number of distinct real roots of `p` in the open interval.
pub fn count_real_roots(p: &IntPolynomial, iv: &RationalInterval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if iv.is_empty_open() || p.deg() == 0 {
        return Ok(0);
    }
    let s = square_free_part(p)?;
    if s.deg() == 0 {
        return Ok(0);
    }
    if s.sign_at(iv.lo()) != 0 && s.sign_at(iv.hi()) != 0 {
        return Ok(SturmChain::new(&s).count_open_nonroot(iv.lo(), iv.hi()));
    }
    // A root sits exactly on an endpoint: fall back to isolation and place
    // each root strictly.
    let roots = isolate_real_roots(p)?;
    let mut n = 0;
    for r in roots {
        if r.enclosure.in_open_interval(iv, 4096).is_true() {
            n += 1;
        }
    }
    Ok(n)
}

/// Isolates all distinct real roots: pairwise-disjoint enclosures in
/// increasing order, with multiplicities from the square-free
/// factorization.
pub fn isolate_real_roots(p: &IntPolynomial) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(vec![]);
    }
    let s = square_free_part(p)?;
    let mut enclosures = isolate_square_free(&s);
    enclosures.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
    for (i, e) in enclosures.iter_mut().enumerate() {
        e.root_index = i;
    }
    // Multiplicities: each enclosure's root belongs to exactly one factor
    // of the square-free decomposition, recognized by its sign change.
    let mults: Vec<u32> = if s == normalize_sign(p) {
        vec![1u32; enclosures.len()]
    } else {
        let decomp = square_free_decomposition(p)?;
        enclosures
            .iter()
            .map(|e| {
                for (f, m) in &decomp {
                    if let Some(x) = &e.exact {
                        if f.sign_at(x) == 0 {
                            return *m;
                        }
                    } else if f.sign_at(e.interval.lo()) * f.sign_at(e.interval.hi()) < 0 {
                        return *m;
                    }
                }
                1
            })
            .collect()
    };
    Ok(enclosures
        .into_iter()
        .zip(mults)
        .map(|(enclosure, multiplicity)| IsolatedRoot {
            enclosure,
            multiplicity,
        })
        .collect())
}

/// Isolation on a square-free polynomial; enclosures unsorted, indices 0.
fn isolate_square_free(s: &IntPolynomial) -> Vec<RootEnclosure> {
    if s.deg() == 0 {
        return vec![];
    }
    if s.deg() == 1 {
        let root = Rational::new(-s.coeff(0), s.coeff(1));
        return vec![exact_enclosure(s, root, &int(1))];
    }
    if s.deg() == 2 {
        if let Some(out) = isolate_quadratic(s) {
            return out;
        }
    }
    let chain = SturmChain::new(s);
    let bound = cauchy_bound(s);
    let mut out = vec![];
    let mut queue = vec![(-bound.clone(), bound.clone())];
    while let Some((a, b)) = queue.pop() {
        let n = chain.count_open_nonroot(&a, &b);
        match n {
            0 => {}
            1 => out.push(RootEnclosure {
                poly: s.clone(),
                interval: RationalInterval::new(a, b).unwrap(),
                root_index: 0,
                exact: None,
            }),
            _ => {
                let m = (&a + &b) / int(2);
                if s.sign_at(&m) == 0 {
                    // Rational root exactly at the midpoint: carve out an
                    // exclusive neighborhood, then recurse on both sides.
                    let mut w = (&b - &a) / int(8);
                    loop {
                        let lo = &m - &w;
                        let hi = &m + &w;
                        if s.sign_at(&lo) != 0
                            && s.sign_at(&hi) != 0
                            && chain.count_open_nonroot(&lo, &hi) == 1
                        {
                            out.push(exact_enclosure(s, m.clone(), &w));
                            queue.push((a.clone(), lo));
                            queue.push((hi, b.clone()));
                            break;
                        }
                        w /= int(2);
                    }
                } else {
                    queue.push((a, m.clone()));
                    queue.push((m, b));
                }
            }
        }
    }
    out
}

fn exact_enclosure(s: &IntPolynomial, root: Rational, halfwidth: &Rational) -> RootEnclosure {
    RootEnclosure {
        poly: s.clone(),
        interval: RationalInterval::new(&root - halfwidth, &root + halfwidth).unwrap(),
        root_index: 0,
        exact: Some(root),
    }
}

/// Closed-form isolation for square-free quadratics with irrational roots;
/// `None` hands rational-root cases to the generic path.
fn isolate_quadratic(s: &IntPolynomial) -> Option<Vec<RootEnclosure>> {
    let a = s.coeff(2);
    let b = s.coeff(1);
    let c = s.coeff(0);
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    if disc.is_negative() {
        return Some(vec![]);
    }
    let r = disc.sqrt();
    if &r * &r == disc {
        return None; // rational roots
    }
    // sqrt(disc) ∈ (r, r+1) strictly, and a > 0 after normalization.
    let two_a = BigInt::from(2) * &a;
    let mk = |num_lo: BigInt, num_hi: BigInt| RootEnclosure {
        poly: s.clone(),
        interval: RationalInterval::new(
            Rational::new(num_lo, two_a.clone()),
            Rational::new(num_hi, two_a.clone()),
        )
        .unwrap(),
        root_index: 0,
        exact: None,
    };
    let minus = mk(-(&b) - (&r + BigInt::one()), -(&b) - &r);
    let plus = mk(-(&b) + &r, -(&b) + &r + BigInt::one());
    Some(vec![minus, plus])
}

/// Refinement entry point: an enclosure of width strictly below `width`
/// containing the same root.
pub fn refine(e: &RootEnclosure, width: &Rational) -> Result<RootEnclosure> {
    if !width.is_positive() {
        return Err(Error::invalid("refinement width must be positive"));
    }
    Ok(e.refined(width))
}

/// Builds an enclosure for a known-square-free polynomial from a candidate
/// interval, verifying that it isolates exactly one root with non-root
/// endpoints.
pub fn enclosure_from_interval(
    s: &IntPolynomial,
    iv: RationalInterval,
    root_index: usize,
) -> Result<RootEnclosure> {
    if s.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if s.sign_at(iv.lo()) == 0 || s.sign_at(iv.hi()) == 0 {
        return Err(Error::invalid("enclosure endpoint is a root"));
    }
    let n = SturmChain::new(s).count_open_nonroot(iv.lo(), iv.hi());
    if n != 1 {
        return Err(Error::invalid(format!("interval contains {n} roots, not 1")));
    }
    Ok(RootEnclosure {
        poly: s.clone(),
        interval: iv,
        root_index,
        exact: None,
    })
}

/// Detects a rational root of the enclosure's polynomial inside it, by the
/// rational root theorem.
pub fn rational_root_in(e: &RootEnclosure) -> Option<Rational> {
    if let Some(x) = &e.exact {
        return Some(x.clone());
    }
    let s = e.poly();
    let a0 = s.coeff(0);
    if a0.is_zero() {
        let zero = Rational::zero();
        return e.interval.contains_open(&zero).then_some(zero);
    }
    let an = s.leading().unwrap().clone();
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(&p * BigInt::from(sign), q.clone());
                if e.interval.contains_open(&cand) && s.sign_at(&cand) == 0 {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Positive divisors of a nonzero integer (unsorted).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = vec![];
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            out.push(d.clone());
            if dd != n {
                out.push(&n / &d);
            }
        }
        d += BigInt::one();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    fn iv(a: i64, b: i64) -> RationalInterval {
        RationalInterval::new(int(a), int(b)).unwrap()
    }

    #[test]
    fn counts_real_roots() {
        let f = p(&[-2, 0, 1]); // x^2-2
        assert_eq!(count_real_roots(&f, &iv(1, 2)).unwrap(), 1);
        assert_eq!(count_real_roots(&p(&[1, 0, 1]), &iv(-10, 10)).unwrap(), 0);
        assert_eq!(count_real_roots(&f, &iv(-2, 2)).unwrap(), 2);
        // endpoint root is excluded from the open interval
        let g = p(&[-1, 0, 1]); // roots ±1
        assert_eq!(count_real_roots(&g, &iv(-1, 1)).unwrap(), 0);
        assert_eq!(count_real_roots(&g, &iv(0, 1)).unwrap(), 0);
        assert_eq!(count_real_roots(&g, &iv(0, 2)).unwrap(), 1);
        // double root counts once
        assert_eq!(count_real_roots(&p(&[1, -2, 1]), &iv(0, 2)).unwrap(), 1);
    }

    #[test]
    fn isolates_sqrt2() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 2);
        let neg = &roots[0].enclosure;
        let pos = &roots[1].enclosure;
        assert!(neg.in_open_interval(&iv(-2, -1), 64).is_true());
        assert!(pos.in_open_interval(&iv(1, 2), 64).is_true());
        assert_eq!(neg.root_index(), 0);
        assert_eq!(pos.root_index(), 1);
        for r in &roots {
            assert_eq!(count_real_roots(&f, r.enclosure.interval()).unwrap(), 1);
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn isolates_empty_and_double() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        let roots = isolate_real_roots(&p(&[1, -2, 1])).unwrap(); // (x-1)^2
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[0].enclosure.exact_value(), Some(&int(1)));
    }

    #[test]
    fn isolates_mixed_rational_roots() {
        // x(x-1)(x+2)^2 = x^4 + 3x^3 + 0x^2 - 4x
        let f = p(&[0, -4, 0, 3, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 3);
        let approx: Vec<f64> = roots
            .iter()
            .map(|r| r.enclosure.refined(&rat(1, 64)).to_f64())
            .collect();
        assert!((approx[0] + 2.0).abs() < 0.1);
        assert!(approx[1].abs() < 0.1);
        assert!((approx[2] - 1.0).abs() < 0.1);
        let mults: Vec<_> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, vec![2, 1, 1]);
    }

    #[test]
    fn refine_shrinks_and_keeps_root() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        let e = &roots[1].enclosure;
        let r = refine(e, &rat(1, 100)).unwrap();
        assert!(r.width() < rat(1, 100));
        assert_eq!(count_real_roots(&f, r.interval()).unwrap(), 1);
        // idempotence when already narrow
        let again = refine(&r, &int(1)).unwrap();
        assert_eq!(again.interval(), r.interval());
        // rational root straddling
        let g = p(&[-3, 2]);
        let roots = isolate_real_roots(&g).unwrap();
        let e = refine(&roots[0].enclosure, &rat(1, 1_000_000)).unwrap();
        assert!(e.interval().contains_open(&rat(3, 2)));
        assert!(e.width() < rat(1, 1_000_000));
        assert!(refine(&e, &int(0)).is_err());
    }

    #[test]
    fn enclosure_comparisons_decide() {
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        let pos = &roots[1].enclosure;
        assert_eq!(pos.cmp_rational(&int(1), 64), Some(std::cmp::Ordering::Greater));
        assert_eq!(pos.cmp_rational(&rat(3, 2), 64), Some(std::cmp::Ordering::Less));
        assert_eq!(pos.cmp_rational(&rat(7, 5), 64), Some(std::cmp::Ordering::Greater));
    }

    #[test]
    fn rational_root_detection() {
        let g = p(&[-3, 2]); // root 3/2
        let roots = isolate_real_roots(&g).unwrap();
        assert_eq!(rational_root_in(&roots[0].enclosure), Some(rat(3, 2)));
        let f = p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(rational_root_in(&roots[1].enclosure), None);
    }

    #[test]
    fn square_free_machinery() {
        let f = p(&[1, -2, 1]); // (x-1)^2
        assert_eq!(square_free_part(&f).unwrap(), p(&[-1, 1]));
        let d = square_free_decomposition(&f).unwrap();
        assert_eq!(d, vec![(p(&[-1, 1]), 2)]);
        let g = poly_gcd(&p(&[-1, 0, 1]), &p(&[1, 1]));
        assert_eq!(g, p(&[1, 1]));
    }
}
