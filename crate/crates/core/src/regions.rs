//! Geometric regions (rectangles, squares, curve strips) and the explicit
//! constants entering the counting bounds.
//!
//! Side lengths of the form `c₈·Q^{-γ}` are irrational for fractional γ
//! and are kept symbolic ([`ScaledPower`]), so region membership and
//! bound comparisons stay exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::RatPoly;
use crate::rat::{int, pow_rational, rat, Rational, RationalInterval, ScaledPower, Trilean};
use crate::roots::count_real_roots;
use crate::{Error, Result};

/// Relative error used when irrational quantities must be rationalized
/// (certified square roots, outer interval approximations).
pub fn default_rel_err() -> Rational {
    rat(1, 1_000_000_000)
}

/// `ρ_n(x) = ((|x|+1)^{n+1} − 1)/|x|`, extended by continuity to
/// `ρ_n(0) = n+1`.
pub fn rho(n: u32, x: &Rational) -> Result<Rational> {
    if n < 1 {
        return Err(Error::invalid("rho needs n >= 1"));
    }
    let ax = x.abs();
    if ax.is_zero() {
        return Ok(int(n as i64 + 1));
    }
    Ok((pow_rational(&(&ax + Rational::one()), n + 1) - Rational::one()) / ax)
}

/// `c₁₀(p,q,n) = q^{n+1} / (2p·(2q+2p)^n·(n+1))` for `p < 2q`, `n ≥ 2`.
pub fn c10(p: u64, q: u64, n: u32) -> Result<Rational> {
    if p == 0 || q == 0 {
        return Err(Error::invalid("c10 needs p, q >= 1"));
    }
    if p >= 2 * q {
        return Err(Error::invalid(format!("c10 needs p < 2q, got p={p}, q={q}")));
    }
    if n < 2 {
        return Err(Error::invalid("c10 needs n >= 2"));
    }
    let num = pow_rational(&int(q as i64), n + 1);
    let den = int(2 * p as i64)
        * pow_rational(&int(2 * (q + p) as i64), n)
        * int(n as i64 + 1);
    Ok(num / den)
}

/// `c₁₂ = 2^{3n+9}·n²·ρ_n(d₁)·ρ_n(d₂)·|d₁−d₂|^{-1}` for `d₁ ≠ d₂`.
pub fn c12(n: u32, d: &(Rational, Rational)) -> Result<Rational> {
    if d.0 == d.1 {
        return Err(Error::invalid("c12 needs d1 != d2"));
    }
    let two_pow = Rational::from_integer(BigInt::one() << (3 * n + 9) as usize);
    Ok(two_pow * int((n as i64) * (n as i64)) * rho(n, &d.0)? * rho(n, &d.1)?
        / (&d.0 - &d.1).abs())
}

/// Exact square of `h_n`: `(3/2)·(|d₁|+|d₂|)·max(1, 3|d₁|, 3|d₂|)^{n²}`.
pub fn h_n_squared(n: u32, d: &(Rational, Rational)) -> Rational {
    let m = Rational::one()
        .max(int(3) * d.0.abs())
        .max(int(3) * d.1.abs());
    rat(3, 2) * (d.0.abs() + d.1.abs()) * pow_rational(&m, n * n)
}

/// Certified rational upper bound of `h_n` (relative error ≤ 1e-9,
/// monotone outward rounding).
pub fn h_n(n: u32, d: &(Rational, Rational)) -> Rational {
    let sq = h_n_squared(n, d);
    crate::rat::nth_root_bracket(&sq, 2, &default_rel_err()).1
}

/// Axis-aligned open rectangle with midpoint `d` and symbolic side
/// lengths, built either from exponents (`sideᵢ = c₈·Q^{-γᵢ}`) or from
/// explicit rational bounds.
#[derive(Debug, Clone)]
pub struct Rect {
    mid: (Rational, Rational),
    side: (ScaledPower, ScaledPower),
    gamma: Option<(Rational, Rational)>,
    q: Option<u64>,
}

impl Rect {
    pub fn scaled(
        mid: (Rational, Rational),
        gamma: (Rational, Rational),
        c8: Rational,
        q: u64,
    ) -> Result<Rect> {
        if q == 0 {
            return Err(Error::invalid("rectangle needs Q >= 1"));
        }
        if c8.is_negative() {
            return Err(Error::invalid("c8 must be nonnegative"));
        }
        let side = (
            ScaledPower::new(c8.clone(), q, -gamma.0.clone())?,
            ScaledPower::new(c8, q, -gamma.1.clone())?,
        );
        Ok(Rect {
            mid,
            side,
            gamma: Some(gamma),
            q: Some(q),
        })
    }

    /// Rectangle from explicit open rational intervals.
    pub fn exact(x: RationalInterval, y: RationalInterval) -> Rect {
        Rect {
            mid: (x.midpoint(), y.midpoint()),
            side: (
                ScaledPower::exact(x.width()),
                ScaledPower::exact(y.width()),
            ),
            gamma: None,
            q: None,
        }
    }

    pub fn midpoint(&self) -> &(Rational, Rational) {
        &self.mid
    }

    pub fn gamma(&self) -> Option<&(Rational, Rational)> {
        self.gamma.as_ref()
    }

    pub fn q(&self) -> Option<u64> {
        self.q
    }

    pub fn side(&self, i: usize) -> &ScaledPower {
        match i {
            0 => &self.side.0,
            _ => &self.side.1,
        }
    }

    fn mid_coord(&self, i: usize) -> &Rational {
        if i == 0 {
            &self.mid.0
        } else {
            &self.mid.1
        }
    }

    /// Placement of a root known to lie in `[lo, hi]` against the open
    /// side `(midᵢ − sideᵢ/2, midᵢ + sideᵢ/2)`; `Unknown` when the bracket
    /// straddles a boundary.
    pub fn side_contains_bracket(
        &self,
        i: usize,
        lo: &Rational,
        hi: &Rational,
    ) -> Trilean {
        let mid = self.mid_coord(i);
        let half = self.side(i).scaled_by(&rat(1, 2));
        // inside: lo above the left boundary and hi below the right one
        let above_left = matches!(
            half.cmp_rational(&(mid - lo)),
            Ordering::Greater | Ordering::Equal
        );
        let below_right = matches!(
            half.cmp_rational(&(hi - mid)),
            Ordering::Greater | Ordering::Equal
        );
        if above_left && below_right {
            return Trilean::True;
        }
        // fully outside: hi at or below the left boundary, or lo at or
        // above the right one (strict region, so touching is out only for
        // exact points; for brackets it stays Unknown unless clear)
        let left_out = matches!(half.cmp_rational(&(mid - hi)), Ordering::Less | Ordering::Equal);
        let right_out = matches!(half.cmp_rational(&(lo - mid)), Ordering::Less | Ordering::Equal);
        if left_out || right_out {
            return Trilean::False;
        }
        Trilean::Unknown
    }

    /// Strict membership of an exact point in the open side interval.
    pub fn side_contains_point(&self, i: usize, x: &Rational) -> bool {
        let mid = self.mid_coord(i);
        let half = self.side(i).scaled_by(&rat(1, 2));
        half.cmp_rational(&(mid - x)) == Ordering::Greater
            && half.cmp_rational(&(x - mid)) == Ordering::Greater
    }

    /// Certified outer rational intervals (`⊇` the true open sides).
    pub fn outer_bounds(&self) -> (RationalInterval, RationalInterval) {
        let rel = default_rel_err();
        let mk = |mid: &Rational, side: &ScaledPower| {
            let half = side.upper(&rel) / int(2);
            RationalInterval::new(mid - &half, mid + &half).unwrap()
        };
        (mk(&self.mid.0, &self.side.0), mk(&self.mid.1, &self.side.1))
    }

    /// Exact area when both sides are rational.
    pub fn exact_area(&self) -> Option<Rational> {
        (self.side.0.exp().is_zero() && self.side.1.exp().is_zero())
            .then(|| self.side.0.scale() * self.side.1.scale())
    }

    /// Area `μ₂Π` as a symbolic scaled power.
    pub fn area(&self) -> ScaledPower {
        self.side.0.mul(&self.side.1).expect("sides share a base")
    }

    pub fn area_f64(&self) -> f64 {
        self.area().to_f64()
    }
}

/// Strip around a polynomial curve: the set of points with `x₁ ∈ J` and
/// `|φ(x₁) − x₂| < c₁·Q^{-γ}`, where `c₁ = (1/2 + c₆)·c₈`.
#[derive(Debug, Clone)]
pub struct CurveStrip {
    phi: RatPoly,
    j: RationalInterval,
    gamma: Rational,
    c8: Rational,
    q: u64,
    c6: Rational,
    c7: usize,
    width: ScaledPower,
}

impl CurveStrip {
    pub fn new(
        phi: RatPoly,
        j: RationalInterval,
        gamma: Rational,
        c8: Rational,
        q: u64,
    ) -> Result<CurveStrip> {
        if q == 0 {
            return Err(Error::invalid("strip needs Q >= 1"));
        }
        if !gamma.is_positive() || gamma >= Rational::one() {
            return Err(Error::invalid("strip needs 0 < gamma < 1"));
        }
        if c8.is_negative() {
            return Err(Error::invalid("c8 must be nonnegative"));
        }
        if j.is_empty_open() {
            return Err(Error::invalid("strip interval J is empty"));
        }
        let c6 = derivative_bound(&phi, &j);
        let c7 = fixed_points_in(&phi, &j)?;
        let c1 = (rat(1, 2) + &c6) * &c8;
        let width = ScaledPower::new(c1, q, -gamma.clone())?;
        Ok(CurveStrip {
            phi,
            j,
            gamma,
            c8,
            q,
            c6,
            c7,
            width,
        })
    }

    pub fn phi(&self) -> &RatPoly {
        &self.phi
    }

    pub fn j(&self) -> &RationalInterval {
        &self.j
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn c8(&self) -> &Rational {
        &self.c8
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Certified upper bound of `sup_J |φ'|`.
    pub fn c6(&self) -> &Rational {
        &self.c6
    }

    /// Number of fixed points of φ on J.
    pub fn c7(&self) -> usize {
        self.c7
    }

    pub fn c1(&self) -> Rational {
        (rat(1, 2) + &self.c6) * &self.c8
    }

    /// Symbolic strip half-width `c₁·Q^{-γ}`.
    pub fn width(&self) -> &ScaledPower {
        &self.width
    }

    /// Strip area (length × full width) as f64, for reporting.
    pub fn area_f64(&self) -> f64 {
        crate::rat::to_f64(&self.j.width()) * 2.0 * self.width.to_f64()
    }
}

/// Exponent ladder and associated constants for special-square checking.
#[derive(Debug, Clone)]
pub struct LadderSpec {
    pub gamma: Rational,
    /// `L = ⌊(3−2γ)/(1−γ)⌋`.
    pub l_cap: i64,
    /// `λ₁ .. λ_{L+3}`; `lambdas[k]` is `λ_{k+1}`.
    pub lambdas: Vec<Rational>,
    /// `δ = 2^{−L−17}·h^{−2}·(d₁−d₂)²`.
    pub delta: Rational,
    pub h: Rational,
}

impl LadderSpec {
    /// 1-based ladder access: `lambda(l)` is `λ_l` for `1 ≤ l ≤ L+3`.
    pub fn lambda(&self, l: usize) -> &Rational {
        &self.lambdas[l - 1]
    }
}

/// Builds the exponent ladder for `1/2 < γ < 1`, midpoint `d` (with
/// `d₁ ≠ d₂`) and scale `h > 0`.
pub fn ladder(gamma: &Rational, d: &(Rational, Rational), h: &Rational) -> Result<LadderSpec> {
    if *gamma <= rat(1, 2) || *gamma >= Rational::one() {
        return Err(Error::invalid("ladder needs 1/2 < gamma < 1"));
    }
    if d.0 == d.1 {
        return Err(Error::invalid("ladder needs d1 != d2"));
    }
    if !h.is_positive() {
        return Err(Error::invalid("ladder needs h > 0"));
    }
    let one = Rational::one();
    let l_cap_rat = (int(3) - int(2) * gamma) / (&one - gamma);
    let l_cap = l_cap_rat
        .floor()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::invalid("ladder L overflow"))?;
    let mut lambdas = Vec::with_capacity(l_cap as usize + 3);
    for l in 1..=(l_cap + 3) {
        let lam = if l <= l_cap + 1 {
            &one - (int(l - 1) * (&one - gamma)) / int(2)
        } else if l == l_cap + 2 {
            gamma - rat(1, 2)
        } else {
            Rational::zero()
        };
        lambdas.push(lam);
    }
    let delta = Rational::new(BigInt::one(), BigInt::one() << (l_cap + 17) as usize)
        * pow_rational(&(&d.0 - &d.1), 2)
        / (h * h);
    Ok(LadderSpec {
        gamma: gamma.clone(),
        l_cap,
        lambdas,
        delta,
        h: h.clone(),
    })
}

/// The explicitly point-free rectangle
/// `(p/q, p/q + c₁₀·Q^{-1}) × (0, p/q)`.
pub fn empty_rectangle(p: u64, q: u64, n: u32, big_q: u64) -> Result<Rect> {
    if big_q == 0 {
        return Err(Error::invalid("empty rectangle needs Q >= 1"));
    }
    let c = c10(p, q, n)?;
    let left = rat(p as i64, q as i64);
    let eps = c / int(big_q as i64);
    let x = RationalInterval::new(left.clone(), &left + &eps)?;
    let y = RationalInterval::new(Rational::zero(), left)?;
    if y.is_empty_open() {
        return Err(Error::invalid("degenerate empty rectangle"));
    }
    Ok(Rect::exact(x, y))
}

/// Certified upper bound for `max_{x ∈ J} |φ′(x)|`: exact at the interval
/// endpoints, outward-rounded over enclosures of the critical points
/// (roots of φ″) inside J.
pub fn derivative_bound(phi: &RatPoly, j: &RationalInterval) -> Rational {
    let dphi = phi.derivative();
    if dphi.is_zero() {
        return Rational::zero();
    }
    let mut best = dphi.evaluate(j.lo()).abs().max(dphi.evaluate(j.hi()).abs());
    let ddphi = dphi.derivative();
    if ddphi.is_zero() {
        return best;
    }
    let (dd_int, _) = ddphi.clear_denominators();
    if let Ok(roots) = crate::roots::isolate_real_roots(&dd_int) {
        for r in roots {
            let enc = r.enclosure.refined(&rat(1, 1 << 30));
            if let Some(clip) = enc.interval().intersect(j) {
                let hull = dphi.interval_eval(&clip).abs_hull();
                best = best.max(hull.hi().clone());
            }
        }
    }
    best
}

/// Certified hull of `{φ(t) : t ∈ J}`: exact at the endpoints, outward
/// over enclosures of interior critical points.
pub fn range_hull(phi: &RatPoly, j: &RationalInterval) -> RationalInterval {
    let at_lo = phi.evaluate(j.lo());
    let at_hi = phi.evaluate(j.hi());
    let mut hull = RationalInterval::point(at_lo).hull(&RationalInterval::point(at_hi));
    let dphi = phi.derivative();
    if dphi.is_zero() {
        return hull;
    }
    let (d_int, _) = dphi.clear_denominators();
    if d_int.degree().map_or(false, |d| d >= 1) {
        if let Ok(roots) = crate::roots::isolate_real_roots(&d_int) {
            for r in roots {
                let enc = r.enclosure.refined(&rat(1, 1 << 30));
                if let Some(clip) = enc.interval().intersect(j) {
                    hull = hull.hull(&phi.interval_eval(&clip));
                }
            }
        }
    }
    hull
}

/// Exact number of fixed points of φ in the open interval J; rejects the
/// identity curve.
pub fn fixed_points_in(phi: &RatPoly, j: &RationalInterval) -> Result<usize> {
    let x = RatPoly::new(vec![Rational::zero(), Rational::one()]);
    let diff = phi.sub(&x);
    if diff.is_zero() {
        return Err(Error::invalid(
            "phi(x) = x identically: infinitely many fixed points",
        ));
    }
    let (p, _) = diff.clear_denominators();
    if p.degree() == Some(0) {
        return Ok(0);
    }
    count_real_roots(&p, j)
}

/// Expected count exponent for rectangles: `n+1−γ₁−γ₂`.
pub fn rect_exponent(n: u32, gamma: &(Rational, Rational)) -> Rational {
    int(n as i64 + 1) - &gamma.0 - &gamma.1
}

/// Expected count exponent for strips: `n+1−γ`.
pub fn strip_exponent(n: u32, gamma: &Rational) -> Rational {
    int(n as i64 + 1) - gamma
}

/// Expected count exponent for the rational baseline: `3−γ`.
pub fn rational_exponent(gamma: &Rational) -> Rational {
    int(3) - gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::to_f64;

    fn d(a: i64, b: i64) -> (Rational, Rational) {
        (int(a), int(b))
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2, &int(1)).unwrap(), int(7));
        assert_eq!(rho(2, &int(0)).unwrap(), int(3));
        assert_eq!(rho(2, &int(2)).unwrap(), int(13));
        assert_eq!(rho(3, &int(0)).unwrap(), int(4));
        assert_eq!(rho(3, &int(1)).unwrap(), int(15));
        // continuity towards 0
        let mut prev = Rational::zero();
        for k in 1..=12 {
            let eps = Rational::new(BigInt::one(), BigInt::from(10u32).pow(k));
            let diff = (rho(2, &eps).unwrap() - int(3)).abs();
            if k > 1 {
                assert!(diff < prev);
            }
            prev = diff;
        }
        assert!(prev < rat(1, 100_000_000_000));
    }

    #[test]
    fn c10_examples() {
        assert_eq!(c10(1, 1, 2).unwrap(), rat(1, 96));
        assert_eq!(c10(1, 2, 2).unwrap(), rat(1, 27));
        assert!(c10(2, 1, 2).is_err()); // p < 2q violated
        assert_eq!(c10(3, 2, 2).unwrap(), rat(1, 225));
    }

    #[test]
    fn c12_examples() {
        assert_eq!(c12(2, &d(0, 1)).unwrap(), int(2_752_512));
        assert_eq!(c12(2, &d(1, 0)).unwrap(), int(2_752_512));
        assert_eq!(c12(3, &d(0, 1)).unwrap(), int(141_557_760));
        assert!(c12(2, &d(1, 1)).is_err());
    }

    #[test]
    fn h_n_examples() {
        // sqrt(4.5 * 6^4) = sqrt(5832) ≈ 76.3675
        let h = h_n(2, &d(1, 2));
        assert!((to_f64(&h) - 76.36753236814714).abs() < 1e-6);
        assert_eq!(h_n_squared(2, &d(1, 2)), int(5832));
        assert_eq!(h_n(1, &d(0, 0)), Rational::zero());
        assert_eq!(h_n_squared(2, &(rat(1, 3), rat(1, 3))), Rational::one());
        assert_eq!(h_n(2, &(rat(1, 3), rat(1, 3))), Rational::one());
    }

    #[test]
    fn ladder_gamma_three_quarters() {
        let spec = ladder(&rat(3, 4), &d(0, 1), &Rational::one()).unwrap();
        assert_eq!(spec.l_cap, 6);
        let expect = [
            int(1),
            rat(7, 8),
            rat(3, 4),
            rat(5, 8),
            rat(1, 2),
            rat(3, 8),
            rat(1, 4),
            rat(1, 4), // λ_{L+2} = γ − 1/2
            int(0),
        ];
        assert_eq!(spec.lambdas.len(), 9);
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(spec.lambda(i + 1), e, "lambda_{}", i + 1);
        }
        assert_eq!(spec.delta, Rational::new(BigInt::one(), BigInt::one() << 23));
    }

    #[test]
    fn ladder_gamma_three_fifths() {
        let spec = ladder(&rat(3, 5), &d(0, 1), &Rational::one()).unwrap();
        assert_eq!(spec.l_cap, 4);
        assert_eq!(*spec.lambda(5), rat(1, 5));
        assert_eq!(*spec.lambda(6), rat(1, 10));
        assert_eq!(*spec.lambda(7), int(0));
        assert!(ladder(&rat(1, 2), &d(0, 1), &Rational::one()).is_err());
        assert!(ladder(&rat(1, 4), &d(0, 1), &Rational::one()).is_err());
        assert!(ladder(&int(1), &d(0, 1), &Rational::one()).is_err());
    }

    #[test]
    fn ladder_monotone_over_grid() {
        for num in 51..100 {
            let gamma = rat(num, 100);
            let spec = ladder(&gamma, &d(0, 1), &Rational::one()).unwrap();
            assert_eq!(*spec.lambda(1), int(1));
            for l in 1..spec.lambdas.len() {
                assert!(
                    spec.lambdas[l - 1] >= spec.lambdas[l],
                    "ladder not monotone at gamma={gamma} l={l}"
                );
            }
            let last = spec.lambdas.len();
            assert_eq!(*spec.lambda(last), int(0));
            assert_eq!(*spec.lambda(last - 1), &gamma - rat(1, 2));
        }
    }

    #[test]
    fn empty_rectangle_examples() {
        let r = empty_rectangle(1, 1, 2, 100).unwrap();
        let (x, y) = r.outer_bounds();
        assert_eq!(*x.lo(), int(1));
        assert_eq!(*x.hi(), int(1) + rat(1, 9600));
        assert_eq!(*y.lo(), int(0));
        assert_eq!(*y.hi(), int(1));
        // area identity: (p/q)·c10/Q
        assert_eq!(r.exact_area().unwrap(), rat(1, 9600));

        let r = empty_rectangle(1, 2, 2, 100).unwrap();
        let (x, y) = r.outer_bounds();
        assert_eq!(*x.lo(), rat(1, 2));
        assert_eq!(*x.hi(), rat(1, 2) + rat(1, 2700));
        assert_eq!(*y.hi(), rat(1, 2));
        assert_eq!(r.exact_area().unwrap(), rat(1, 2) * rat(1, 2700));

        assert!(empty_rectangle(1, 1, 2, 0).is_err());
    }

    #[test]
    fn derivative_bound_examples() {
        let j = RationalInterval::new(int(0), int(1)).unwrap();
        // φ = (x²-2)/4, φ' = x/2, max on [0,1] is 1/2
        let phi = RatPoly::parse("1/4*x^2-1/2").unwrap();
        assert_eq!(derivative_bound(&phi, &j), rat(1, 2));
        let c = RatPoly::constant(int(5));
        assert_eq!(derivative_bound(&c, &j), int(0));
        let lin = RatPoly::parse("-1-x").unwrap();
        assert_eq!(derivative_bound(&lin, &j), int(1));
        // interior critical point: φ' = 1-x² on [-2,2] peaks at ±... use φ = x - x³/3
        let phi = RatPoly::parse("x - 1/3*x^3").unwrap();
        let jj = RationalInterval::new(int(-2), int(2)).unwrap();
        let b = derivative_bound(&phi, &jj);
        assert!(b >= int(3)); // |φ'(±2)| = 3
    }

    #[test]
    fn fixed_points_examples() {
        let j = RationalInterval::new(int(-2), int(2)).unwrap();
        let phi = RatPoly::parse("-1-x").unwrap();
        assert_eq!(fixed_points_in(&phi, &j).unwrap(), 1);
        let shift = RatPoly::parse("x+1").unwrap();
        assert_eq!(fixed_points_in(&shift, &j).unwrap(), 0);
        let ident = RatPoly::parse("x").unwrap();
        assert!(fixed_points_in(&ident, &j).is_err());
    }

    #[test]
    fn rect_membership_decisions() {
        // Q=1 makes scaled sides exact: side = c8
        let r = Rect::scaled(d(0, 1), (rat(3, 5), rat(3, 5)), int(1), 1).unwrap();
        assert!(r.side_contains_point(0, &rat(1, 4)));
        assert!(!r.side_contains_point(0, &rat(1, 2))); // boundary of open side
        assert!(!r.side_contains_point(0, &int(2)));
        // irrational side: Q=4, gamma=1/2 → side = 1/2, boundary at ±1/4
        let r = Rect::scaled(d(0, 0), (rat(1, 2), rat(1, 2)), int(1), 4).unwrap();
        assert!(r.side_contains_point(0, &rat(1, 5)));
        assert!(!r.side_contains_point(0, &rat(1, 4)));
        assert_eq!(
            r.side_contains_bracket(0, &rat(-1, 5), &rat(1, 5)),
            Trilean::True
        );
        assert_eq!(
            r.side_contains_bracket(0, &rat(3, 10), &rat(2, 5)),
            Trilean::False
        );
        assert_eq!(
            r.side_contains_bracket(0, &rat(1, 5), &rat(3, 10)),
            Trilean::Unknown
        );
    }

    #[test]
    fn strip_constants() {
        let j = RationalInterval::new(int(0), int(1)).unwrap();
        let phi = RatPoly::parse("1/4*x^2-1/2").unwrap();
        let s = CurveStrip::new(phi, j, rat(7, 10), int(2), 20).unwrap();
        assert_eq!(*s.c6(), rat(1, 2));
        assert_eq!(s.c1(), int(2)); // (1/2 + 1/2) * 2
        assert_eq!(s.c7(), 0);
        assert!(CurveStrip::new(
            RatPoly::parse("x").unwrap(),
            RationalInterval::new(int(0), int(1)).unwrap(),
            rat(7, 10),
            int(1),
            20
        )
        .is_err());
    }
}
