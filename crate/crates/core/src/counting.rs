//! Exhaustive enumeration of bounded-height integer polynomials and exact
//! counting of algebraic points in rectangles and curve strips, plus the
//! rational-point baseline and scaling-law fits.
//!
//! Counting never subsamples: a polynomial is skipped only when a sound
//! necessary condition proves it cannot contribute. The workhorse filter
//! is the constant-term window: if `P = a₀ + g(t)` has a root in an
//! interval `I`, then `a₀ ∈ −hull(g over I)`, and hulls accumulate
//! incrementally while the outer coefficients are enumerated. Points whose
//! boundary placement stays undecidable at the refinement cap are reported
//! in `uncertain`, never silently assigned.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::is_irreducible;
use crate::poly::{IntPolynomial, RatPoly};
use crate::rat::{
    gcd_many, int, integer_range_closed, rat, Rational, RationalInterval, ScaledPower, Trilean,
};
use crate::regions::{range_hull, rational_exponent, rect_exponent, strip_exponent, CurveStrip,
    Rect};
use crate::roots::{isolate_real_roots, RootEnclosure};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Enumeration request over the class of integer polynomials with
/// `deg ≤ n` and `H ≤ q`, canonicalized to primitive representatives with
/// positive leading coefficient.
#[derive(Debug, Clone)]
pub struct EnumSpec {
    pub n: u32,
    pub q: u64,
    /// Keep only irreducible polynomials (degree ≥ 1).
    pub irreducible_only: bool,
    /// Keep only polynomials that carry algebraic points: irreducible,
    /// degree ≥ 2, at least one real root.
    pub points_only: bool,
    /// Optional leading-coefficient slice (inclusive) for partitioned
    /// runs; slices of `[1, q]` unite to the full enumeration.
    pub lc_range: Option<(u64, u64)>,
}

impl EnumSpec {
    pub fn new(n: u32, q: u64) -> Self {
        EnumSpec {
            n,
            q,
            irreducible_only: false,
            points_only: false,
            lc_range: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("enumeration needs n >= 2"));
        }
        if let Some((lo, hi)) = self.lc_range {
            if lo < 1 || lo > hi {
                return Err(Error::invalid("bad lc slice"));
            }
        }
        Ok(())
    }
}

/// Streams the canonical polynomials in deterministic order: by degree,
/// then leading coefficient, then remaining coefficients lexicographically
/// from the highest power down.
pub fn enumerate(spec: &EnumSpec, mut f: impl FnMut(&IntPolynomial)) -> Result<()> {
    spec.validate()?;
    if spec.q == 0 {
        return Ok(());
    }
    let q = spec.q as i64;
    let (lc_lo, lc_hi) = spec.lc_range.unwrap_or((1, spec.q));
    let lc_hi = lc_hi.min(spec.q);
    let keep = |p: &IntPolynomial, f: &mut dyn FnMut(&IntPolynomial)| -> Result<()> {
        if spec.irreducible_only || spec.points_only {
            let deg = p.deg();
            if deg == 0 {
                return Ok(());
            }
            if !is_irreducible(p)? {
                return Ok(());
            }
            if spec.points_only {
                if deg < 2 {
                    return Ok(());
                }
                if isolate_real_roots(p)?.is_empty() {
                    return Ok(());
                }
            }
        }
        f(p);
        Ok(())
    };
    // Degree 0: the only primitive positive constant is 1.
    if !spec.irreducible_only && !spec.points_only && lc_lo <= 1 {
        keep(&IntPolynomial::from_i64(&[1]), &mut f)?;
    }
    for deg in 1..=spec.n as usize {
        for lc in lc_lo..=lc_hi {
            let mut coeffs = vec![0i64; deg + 1];
            coeffs[deg] = lc as i64;
            enumerate_rec(&mut coeffs, deg - 1, q, &mut |c| {
                let p = IntPolynomial::from_i64(c);
                if p.is_primitive_positive_lc() {
                    keep(&p, &mut f)?;
                }
                Ok(())
            })?;
        }
    }
    Ok(())
}

fn enumerate_rec(
    coeffs: &mut Vec<i64>,
    j: usize,
    q: i64,
    f: &mut impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    for v in -q..=q {
        coeffs[j] = v;
        if j == 0 {
            f(coeffs)?;
        } else {
            enumerate_rec(coeffs, j - 1, q, f)?;
        }
    }
    Ok(())
}

/// Exact counting result. The true count lies in
/// `[count, count + uncertain]`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CountResult {
    pub count: u64,
    pub uncertain: u64,
    /// Per minimal-polynomial degree: (count, uncertain).
    pub per_degree: BTreeMap<u32, (u64, u64)>,
    /// Wall-clock seconds; excluded from determinism comparisons.
    pub seconds: f64,
}

impl CountResult {
    pub fn absorb(&mut self, other: &CountResult) {
        self.count += other.count;
        self.uncertain += other.uncertain;
        for (deg, (c, u)) in &other.per_degree {
            let e = self.per_degree.entry(*deg).or_insert((0, 0));
            e.0 += c;
            e.1 += u;
        }
    }

    fn tally(&mut self, deg: u32, decided: u64, uncertain: u64) {
        self.count += decided;
        self.uncertain += uncertain;
        let e = self.per_degree.entry(deg).or_insert((0, 0));
        e.0 += decided;
        e.1 += uncertain;
    }
}

/// Execution options shared by the counting entry points.
#[derive(Debug, Clone)]
pub struct CountOptions {
    /// `Some(1)` forces the sequential path; `None` uses the ambient
    /// thread pool (all cores unless the caller installed one).
    pub workers: Option<usize>,
    /// Extra bisection halvings allowed per membership decision before a
    /// pair is declared uncertain (the enclosure width shrinks by
    /// `2^-cap`).
    pub refine_cap: u32,
    /// Leading-coefficient slice for partitioned runs.
    pub lc_slice: Option<(u64, u64)>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            workers: None,
            refine_cap: 64,
            lc_slice: None,
        }
    }
}

/// Enumeration feasibility guardrail: exhaustive counting refuses height
/// caps whose raw coefficient space is out of desk range (no sampled mode
/// exists).
fn check_feasible(n: u32, q: u64) -> Result<()> {
    let cap = match n {
        0..=2 => 5_000,
        3 => 1_000,
        4 => 100,
        _ => 30,
    };
    if q > cap {
        return Err(Error::Infeasible(format!(
            "exhaustive enumeration for n={n} supports Q <= {cap}, got {q} \
             (counting is exhaustive-only)"
        )));
    }
    Ok(())
}

fn lc_values(q: u64, slice: Option<(u64, u64)>) -> Vec<u64> {
    let (lo, hi) = slice.unwrap_or((1, q));
    (lo.max(1)..=hi.min(q)).collect()
}

/// Maps every leading coefficient through `per_lc` and merges the partial
/// results by exact addition (bit-identical for any worker count).
fn map_reduce_lcs(
    q: u64,
    opts: &CountOptions,
    per_lc: impl Fn(u64) -> CountResult + Sync + Send,
) -> CountResult {
    let lcs = lc_values(q, opts.lc_slice);
    #[cfg(feature = "parallel")]
    {
        if opts.workers != Some(1) {
            return lcs
                .par_iter()
                .map(|&lc| per_lc(lc))
                .reduce(CountResult::default, |mut a, b| {
                    a.absorb(&b);
                    a
                });
        }
    }
    let mut acc = CountResult::default();
    for lc in lcs {
        acc.absorb(&per_lc(lc));
    }
    acc
}

/// Hull of `t^j` over a closed interval.
fn power_hull(iv: &RationalInterval, j: u32) -> RationalInterval {
    let lo = crate::rat::pow_rational(iv.lo(), j);
    let hi = crate::rat::pow_rational(iv.hi(), j);
    let (mut a, mut b) = if lo <= hi {
        (lo, hi)
    } else {
        (hi, lo)
    };
    if j % 2 == 0 && iv.lo().is_negative() && iv.hi().is_positive() {
        a = Rational::zero();
    }
    let _ = &mut b;
    RationalInterval::new(a, b).unwrap()
}

/// Target region for candidate generation: two outer rational intervals
/// that every contributing polynomial must have a root in (one per
/// coordinate).
struct RootTargets {
    i1: RationalInterval,
    i2: RationalInterval,
}

/// Streams all canonical coefficient tuples of exact degree `deg` with the
/// given leading coefficient that could place roots in both targets.
/// Soundness: a tuple is skipped only when `a₀ ∉ −hull(tail over Iᵢ)` for
/// one of the targets, which contradicts having a root there.
fn candidates_for_lc(
    deg: u32,
    lc: u64,
    q: u64,
    targets: &RootTargets,
    mut emit: impl FnMut(&IntPolynomial),
) {
    let bound = Rational::one() + rat(q as i64, lc as i64);
    let clip = RationalInterval::new(-bound.clone(), bound).unwrap();
    let (Some(i1), Some(i2)) = (targets.i1.intersect(&clip), targets.i2.intersect(&clip)) else {
        return;
    };
    let pows1: Vec<RationalInterval> = (0..=deg).map(|j| power_hull(&i1, j)).collect();
    let pows2: Vec<RationalInterval> = (0..=deg).map(|j| power_hull(&i2, j)).collect();
    let lc_rat = int(lc as i64);
    let acc1 = pows1[deg as usize].scale(&lc_rat);
    let acc2 = pows2[deg as usize].scale(&lc_rat);
    // Optional sum window for quadratics: both targeted roots of
    // a₂t² + a₁t + a₀ satisfy α+β = −a₁/a₂. When the targets are disjoint
    // the contributing pair must split across them, so
    // a₁ ∈ −a₂·(I₁+I₂); otherwise one root may roam up to the Cauchy
    // bound and the window widens accordingly.
    let a1_window = if deg == 2 {
        let split = i1.add(&i2);
        let window = match i1.intersect(&i2) {
            None => split,
            Some(both) => split.hull(&both.add(&clip)),
        };
        let w = window.scale(&-lc_rat.clone());
        integer_range_closed(w.lo(), w.hi())
    } else {
        None
    };
    let q_i = q as i64;
    let mut coeffs = vec![BigInt::zero(); deg as usize + 1];
    coeffs[deg as usize] = BigInt::from(lc);
    nest(
        deg as usize - 1,
        &mut coeffs,
        &acc1,
        &acc2,
        &pows1,
        &pows2,
        q_i,
        &a1_window,
        &mut emit,
    );
}

#[allow(clippy::too_many_arguments)]
fn nest(
    j: usize,
    coeffs: &mut Vec<BigInt>,
    acc1: &RationalInterval,
    acc2: &RationalInterval,
    pows1: &[RationalInterval],
    pows2: &[RationalInterval],
    q: i64,
    a1_window: &Option<(BigInt, BigInt)>,
    emit: &mut impl FnMut(&IntPolynomial),
) {
    if j == 0 {
        // a₀ must land in both negated hulls.
        let w1 = acc1.neg();
        let Some((lo1, hi1)) = integer_range_closed(w1.lo(), w1.hi()) else {
            return;
        };
        let lo1 = lo1.max(BigInt::from(-q));
        let hi1 = hi1.min(BigInt::from(q));
        if lo1 > hi1 {
            return;
        }
        let w2 = acc2.neg();
        let Some((lo2, hi2)) = integer_range_closed(w2.lo(), w2.hi()) else {
            return;
        };
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        let mut a0 = lo;
        while a0 <= hi {
            coeffs[0] = a0.clone();
            let p = IntPolynomial::new(coeffs.clone());
            emit(&p);
            a0 += BigInt::one();
        }
        return;
    }
    let (mut from, mut to) = (-q, q);
    if j == 1 {
        if let Some((lo, hi)) = a1_window {
            from = from.max(lo.to_i64().unwrap_or(i64::MIN));
            to = to.min(hi.to_i64().unwrap_or(i64::MAX));
        }
    }
    for a in from..=to {
        coeffs[j] = BigInt::from(a);
        let term1 = pows1[j].scale(&int(a));
        let term2 = pows2[j].scale(&int(a));
        nest(
            j - 1,
            coeffs,
            &acc1.add(&term1),
            &acc2.add(&term2),
            pows1,
            pows2,
            q,
            a1_window,
            emit,
        );
    }
}

/// Decides strict membership of an enclosed root in a rectangle side with
/// refinement.
fn decide_side(rect: &Rect, i: usize, enc: &RootEnclosure, cap: u32) -> Trilean {
    let mut e = enc.clone();
    for _ in 0..=cap {
        if let Some(x) = e.exact_value() {
            return if rect.side_contains_point(i, x) {
                Trilean::True
            } else {
                Trilean::False
            };
        }
        match rect.side_contains_bracket(i, e.interval().lo(), e.interval().hi()) {
            Trilean::Unknown => e = e.halve(),
            decided => return decided,
        }
    }
    Trilean::Unknown
}

/// Decides `α ∈ J` (open rational interval) with refinement.
fn decide_in_interval(j: &RationalInterval, enc: &RootEnclosure, cap: u32) -> Trilean {
    enc.in_open_interval(j, cap)
}

/// Decides `|φ(α₁) − α₂| < width` with joint refinement.
fn decide_strip_pair(
    phi: &RatPoly,
    width: &ScaledPower,
    e1: &RootEnclosure,
    e2: &RootEnclosure,
    cap: u32,
) -> Trilean {
    let mut a = e1.clone();
    let mut b = e2.clone();
    for _ in 0..=cap {
        if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
            let v = (phi.evaluate(x) - y).abs();
            return match width.cmp_rational(&v) {
                std::cmp::Ordering::Greater => Trilean::True, // |v| < width
                _ => Trilean::False,
            };
        }
        let img = phi.interval_eval(a.interval());
        let diff = img.add(&b.interval().neg()).abs_hull();
        if width.cmp_rational(diff.hi()) == std::cmp::Ordering::Greater {
            return Trilean::True;
        }
        match width.cmp_rational(diff.lo()) {
            std::cmp::Ordering::Less | std::cmp::Ordering::Equal => return Trilean::False,
            _ => {}
        }
        a = a.halve();
        b = b.halve();
    }
    Trilean::Unknown
}

/// Counts ordered root pairs of one canonical polynomial against a
/// per-root membership table.
fn tally_pairs(
    m1: &[Trilean],
    m2: &[Trilean],
) -> (u64, u64) {
    let mut count = 0;
    let mut uncertain = 0;
    for a in m1 {
        for b in m2 {
            match a.and(*b) {
                Trilean::True => count += 1,
                Trilean::Unknown => uncertain += 1,
                Trilean::False => {}
            }
        }
    }
    (count, uncertain)
}

/// Shared candidate verification: canonicalization, irreducibility, root
/// isolation.
fn roots_of_candidate(p: &IntPolynomial) -> Option<Vec<RootEnclosure>> {
    if !gcd_many(p.coeffs().iter()).is_one() {
        return None; // counted at its primitive representative
    }
    if !is_irreducible(p).unwrap_or(false) {
        return None; // roots belong to lower-degree minimal polynomials
    }
    let roots = isolate_real_roots(p).ok()?;
    if roots.is_empty() {
        return None;
    }
    Some(roots.into_iter().map(|r| r.enclosure).collect())
}

/// Exact count of algebraic points of degree ≤ `n`, height ≤ `q` inside
/// the open rectangle.
pub fn count_rect(n: u32, q: u64, rect: &Rect, opts: &CountOptions) -> Result<CountResult> {
    if n < 2 {
        return Err(Error::invalid("count_rect needs n >= 2"));
    }
    check_feasible(n, q)?;
    let started = Instant::now();
    let mut total = CountResult::default();
    if q == 0 {
        return Ok(total);
    }
    let (i1, i2) = rect.outer_bounds();
    // Degenerate (zero-area) rectangles are empty under open semantics.
    if i1.is_empty_open() && rect.side(0).is_zero() {
        return Ok(total);
    }
    if i2.is_empty_open() && rect.side(1).is_zero() {
        return Ok(total);
    }
    for deg in 2..=n {
        let targets = RootTargets {
            i1: i1.clone(),
            i2: i2.clone(),
        };
        let part = map_reduce_lcs(q, opts, |lc| {
            let mut local = CountResult::default();
            candidates_for_lc(deg, lc, q, &targets, |p| {
                let Some(roots) = roots_of_candidate(p) else {
                    return;
                };
                let m1: Vec<Trilean> = roots
                    .iter()
                    .map(|e| decide_side(rect, 0, e, opts.refine_cap))
                    .collect();
                if m1.iter().all(|t| t.is_false()) {
                    return;
                }
                let m2: Vec<Trilean> = roots
                    .iter()
                    .map(|e| decide_side(rect, 1, e, opts.refine_cap))
                    .collect();
                let (c, u) = tally_pairs(&m1, &m2);
                local.tally(deg, c, u);
            });
            local
        });
        total.absorb(&part);
    }
    total.seconds = started.elapsed().as_secs_f64();
    Ok(total)
}

/// Exact count of algebraic points with `α₁ ∈ J` and
/// `|φ(α₁) − α₂| < c₁·Q^{-γ}`.
pub fn count_strip(n: u32, q: u64, strip: &CurveStrip, opts: &CountOptions) -> Result<CountResult> {
    if n < 2 {
        return Err(Error::invalid("count_strip needs n >= 2"));
    }
    if q != strip.q() {
        return Err(Error::invalid("strip was built for a different Q"));
    }
    check_feasible(n, q)?;
    let started = Instant::now();
    let mut total = CountResult::default();
    let j = strip.j().clone();
    // Every counted α₂ lies within the φ-image hull widened by the strip
    // width (outer rational bound).
    let w_upper = strip.width().upper(&crate::regions::default_rel_err());
    let img = range_hull(strip.phi(), &j);
    let i2 = RationalInterval::new(img.lo() - &w_upper, img.hi() + &w_upper).unwrap();
    for deg in 2..=n {
        let targets = RootTargets {
            i1: j.clone(),
            i2: i2.clone(),
        };
        let part = map_reduce_lcs(q, opts, |lc| {
            let mut local = CountResult::default();
            candidates_for_lc(deg, lc, q, &targets, |p| {
                let Some(roots) = roots_of_candidate(p) else {
                    return;
                };
                let m1: Vec<Trilean> = roots
                    .iter()
                    .map(|e| decide_in_interval(&j, e, opts.refine_cap))
                    .collect();
                if m1.iter().all(|t| t.is_false()) {
                    return;
                }
                let mut c = 0;
                let mut u = 0;
                for (i, e1) in roots.iter().enumerate() {
                    if m1[i].is_false() {
                        continue;
                    }
                    for e2 in &roots {
                        let near =
                            decide_strip_pair(strip.phi(), strip.width(), e1, e2, opts.refine_cap);
                        match m1[i].and(near) {
                            Trilean::True => c += 1,
                            Trilean::Unknown => u += 1,
                            Trilean::False => {}
                        }
                    }
                }
                local.tally(deg, c, u);
            });
            local
        });
        total.absorb(&part);
    }
    total.seconds = started.elapsed().as_secs_f64();
    Ok(total)
}

/// Counts distinct rational points `(p₁/q', p₂/q')` with a common
/// denominator `0 < q' ≤ q`, first coordinate in `J`, and
/// `|f(p₁/q') − p₂/q'| < q^{-γ}` (set semantics in ℚ²: each point value
/// counts once, via its minimal common denominator).
pub fn count_rational(
    f: &RatPoly,
    j: &RationalInterval,
    q: u64,
    gamma: &Rational,
    opts: &CountOptions,
) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("count_rational needs Q >= 1"));
    }
    if gamma.is_negative() || *gamma >= int(2) {
        return Err(Error::invalid("count_rational needs 0 <= gamma < 2"));
    }
    if j.is_empty_open() {
        return Ok(0);
    }
    let width = ScaledPower::new(Rational::one(), q, -gamma.clone())?;
    let w_upper = width.upper(&crate::regions::default_rel_err());
    let denoms: Vec<u64> = (1..=q).collect();
    let count_for = |den: u64| -> u64 {
        let d = int(den as i64);
        let mut local = 0u64;
        let p1_lo: BigInt = (j.lo() * &d).floor().to_integer() + 1;
        let p1_hi: BigInt = (j.hi() * &d).ceil().to_integer() - 1;
        let mut p1 = p1_lo;
        while p1 <= p1_hi {
            let x1 = Rational::new(p1.clone(), d.numer().clone());
            if j.contains_open(&x1) {
                let c = f.evaluate(&x1);
                let center = &c * &d;
                let span = &w_upper * &d;
                if let Some((lo, hi)) =
                    integer_range_closed(&(&center - &span), &(&center + &span))
                {
                    let mut p2 = lo;
                    while p2 <= hi {
                        let g = p1.gcd(&p2).gcd(d.numer());
                        if g.is_one() {
                            let x2 = Rational::new(p2.clone(), d.numer().clone());
                            let v = (&c - &x2).abs();
                            if width.cmp_rational(&v) == std::cmp::Ordering::Greater {
                                local += 1;
                            }
                        }
                        p2 += BigInt::one();
                    }
                }
            }
            p1 += BigInt::one();
        }
        local
    };
    #[cfg(feature = "parallel")]
    {
        if opts.workers != Some(1) {
            return Ok(denoms.par_iter().map(|&den| count_for(den)).sum());
        }
    }
    Ok(denoms.iter().map(|&den| count_for(den)).sum())
}

/// One experiment kind for the scaling harness.
#[derive(Debug, Clone)]
pub enum ScalingKind {
    Rect {
        n: u32,
        d: (Rational, Rational),
        gamma: (Rational, Rational),
        c8: Rational,
    },
    Strip {
        n: u32,
        phi: RatPoly,
        j: RationalInterval,
        gamma: Rational,
        c8: Rational,
    },
    Rational {
        f: RatPoly,
        j: RationalInterval,
        gamma: Rational,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub grid: Vec<u64>,
    pub counts: Vec<CountResult>,
    /// Least-squares slope of `log count` against `log Q` over the grid
    /// points with positive counts (needs at least 3).
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residuals: Vec<f64>,
    pub expected_exponent: f64,
}

/// Runs the counter over the grid and fits the log–log slope.
pub fn scaling_experiment(
    kind: &ScalingKind,
    grid: &[u64],
    opts: &CountOptions,
) -> Result<ScalingReport> {
    if grid.len() < 3 {
        return Err(Error::invalid("scaling needs a grid of at least 3 heights"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("scaling grid must be strictly increasing"));
    }
    let mut counts = Vec::with_capacity(grid.len());
    for &q in grid {
        let started = Instant::now();
        let mut c = match kind {
            ScalingKind::Rect { n, d, gamma, c8 } => {
                let rect = Rect::scaled(d.clone(), gamma.clone(), c8.clone(), q)?;
                count_rect(*n, q, &rect, opts)?
            }
            ScalingKind::Strip {
                n,
                phi,
                j,
                gamma,
                c8,
            } => {
                let strip = CurveStrip::new(phi.clone(), j.clone(), gamma.clone(), c8.clone(), q)?;
                count_strip(*n, q, &strip, opts)?
            }
            ScalingKind::Rational { f, j, gamma } => {
                let total = count_rational(f, j, q, gamma, opts)?;
                CountResult {
                    count: total,
                    ..Default::default()
                }
            }
        };
        c.seconds = started.elapsed().as_secs_f64();
        counts.push(c);
    }
    if counts.iter().all(|c| c.count == 0) {
        return Err(Error::NoFit(
            "all grid counts are zero; nothing to fit".into(),
        ));
    }
    let expected_exponent = match kind {
        ScalingKind::Rect { n, gamma, .. } => crate::rat::to_f64(&rect_exponent(*n, gamma)),
        ScalingKind::Strip { n, gamma, .. } => crate::rat::to_f64(&strip_exponent(*n, gamma)),
        ScalingKind::Rational { gamma, .. } => crate::rat::to_f64(&rational_exponent(gamma)),
    };
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(&counts)
        .filter(|(_, c)| c.count > 0)
        .map(|(&q, c)| ((q as f64).ln(), (c.count as f64).ln()))
        .collect();
    let (slope, intercept, residuals) = if pts.len() >= 3 {
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = m * sxx - sx * sx;
        let slope = (m * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / m;
        let residuals = pts
            .iter()
            .map(|(x, y)| y - (slope * x + intercept))
            .collect();
        (Some(slope), Some(intercept), residuals)
    } else {
        (None, None, vec![])
    };
    Ok(ScalingReport {
        grid: grid.to_vec(),
        counts,
        slope,
        intercept,
        residuals,
        expected_exponent,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EmptyRectReport {
    pub x_lo: String,
    pub x_hi: String,
    pub y_lo: String,
    pub y_hi: String,
    pub count: CountResult,
    pub holds: bool,
}

/// Builds the explicit empty rectangle and verifies by exhaustive count
/// that it contains no algebraic points (and no undecided ones).
pub fn verify_empty_rectangle(
    p: u64,
    qq: u64,
    n: u32,
    big_q: u64,
    opts: &CountOptions,
) -> Result<EmptyRectReport> {
    let rect = crate::regions::empty_rectangle(p, qq, n, big_q)?;
    let count = count_rect(n, big_q, &rect, opts)?;
    let (x, y) = rect.outer_bounds();
    Ok(EmptyRectReport {
        x_lo: crate::rat::display_rational(x.lo()),
        x_hi: crate::rat::display_rational(x.hi()),
        y_lo: crate::rat::display_rational(y.lo()),
        y_hi: crate::rat::display_rational(y.hi()),
        holds: count.count == 0 && count.uncertain == 0,
        count,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundReport {
    pub count: CountResult,
    /// `c₁₂ · Q^{n+1} · μ₂Π` as f64 (the comparison itself is exact).
    pub bound: f64,
    pub holds: bool,
}

/// Compares the exhaustive count against `c₁₂·Q^{n+1}·μ₂Π` (exact
/// comparison; `count + uncertain` must stay below the bound).
pub fn verify_upper_bound(
    n: u32,
    q: u64,
    rect: &Rect,
    opts: &CountOptions,
) -> Result<UpperBoundReport> {
    let gamma = rect
        .gamma()
        .ok_or_else(|| Error::invalid("upper-bound check needs a Q-scaled rectangle"))?
        .clone();
    for g in [&gamma.0, &gamma.1] {
        if !g.is_positive() || *g >= Rational::one() {
            return Err(Error::invalid("upper-bound check needs 0 < gamma_i < 1"));
        }
    }
    let d = rect.midpoint().clone();
    let c12 = crate::regions::c12(n, &d)?;
    let count = count_rect(n, q, rect, opts)?;
    // bound = c12 * Q^{n+1} * side1 * side2
    let area = rect.area();
    let bound = ScaledPower::new(
        c12 * area.scale(),
        q,
        int(n as i64 + 1) + area.exp(),
    )?;
    let total = int((count.count + count.uncertain) as i64);
    let holds = bound.cmp_rational(&total) == std::cmp::Ordering::Greater;
    Ok(UpperBoundReport {
        count,
        bound: bound.to_f64(),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CountOptions {
        CountOptions {
            workers: Some(1),
            ..Default::default()
        }
    }

    #[test]
    fn enumerates_q1_points_filter() {
        let mut spec = EnumSpec::new(2, 1);
        spec.points_only = true;
        let mut out = vec![];
        enumerate(&spec, |p| out.push(p.to_string())).unwrap();
        out.sort();
        assert_eq!(out, vec!["x^2+x-1", "x^2-x-1"]);
    }

    #[test]
    fn enumerates_empty_at_q0() {
        let spec = EnumSpec::new(2, 0);
        let mut n = 0;
        enumerate(&spec, |_| n += 1).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn enumeration_partitions_unite() {
        let full = collect_enum(None);
        let mut parts = collect_enum(Some((1, 1)));
        parts.extend(collect_enum(Some((2, 3))));
        let mut full_sorted = full.clone();
        full_sorted.sort();
        parts.sort();
        assert_eq!(full_sorted, parts);
        assert!(full.len() > 100);
    }

    fn collect_enum(slice: Option<(u64, u64)>) -> Vec<String> {
        let mut spec = EnumSpec::new(2, 3);
        spec.lc_range = slice;
        let mut out = vec![];
        enumerate(&spec, |p| out.push(p.to_string())).unwrap();
        out
    }

    #[test]
    fn rect_count_q1_golden_point() {
        // the point ((−1+√5)/2, (−1−√5)/2) from x²+x−1
        let rect = Rect::exact(
            RationalInterval::new(rat(1, 2), rat(7, 10)).unwrap(),
            RationalInterval::new(rat(-17, 10), rat(-3, 2)).unwrap(),
        );
        let r = count_rect(2, 1, &rect, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (1, 0));
    }

    #[test]
    fn rect_count_far_rectangle_is_zero() {
        let rect = Rect::exact(
            RationalInterval::new(int(10), int(11)).unwrap(),
            RationalInterval::new(int(10), int(11)).unwrap(),
        );
        let r = count_rect(2, 1, &rect, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (0, 0));
    }

    #[test]
    fn rect_count_zero_area() {
        let rect = Rect::exact(
            RationalInterval::new(int(0), int(0)).unwrap(),
            RationalInterval::new(int(-2), int(2)).unwrap(),
        );
        let r = count_rect(2, 2, &rect, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (0, 0));
    }

    #[test]
    fn strip_count_q1_examples() {
        let phi = RatPoly::parse("-1-x").unwrap();
        let j = RationalInterval::new(rat(1, 2), rat(7, 10)).unwrap();
        let strip = CurveStrip::new(phi.clone(), j, rat(9, 10), int(1), 1).unwrap();
        let r = count_strip(2, 1, &strip, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (1, 0));

        let j2 = RationalInterval::new(int(2), int(3)).unwrap();
        let strip = CurveStrip::new(phi.clone(), j2, rat(9, 10), int(1), 1).unwrap();
        let r = count_strip(2, 1, &strip, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (0, 0));

        // zero width: strict inequality empties the strip
        let j3 = RationalInterval::new(rat(1, 2), rat(7, 10)).unwrap();
        let strip = CurveStrip::new(phi, j3, rat(9, 10), int(0), 1).unwrap();
        let r = count_strip(2, 1, &strip, &opts()).unwrap();
        assert_eq!((r.count, r.uncertain), (0, 0));
    }

    #[test]
    fn rational_count_examples() {
        let f = RatPoly::parse("x^2").unwrap();
        let j = RationalInterval::new(int(0), int(1)).unwrap();
        assert_eq!(
            count_rational(&f, &j, 2, &Rational::one(), &opts()).unwrap(),
            2
        );
        assert_eq!(
            count_rational(&f, &j, 1, &Rational::one(), &opts()).unwrap(),
            0
        );
        let empty = RationalInterval::new(int(0), int(0)).unwrap();
        assert_eq!(
            count_rational(&f, &empty, 5, &Rational::one(), &opts()).unwrap(),
            0
        );
    }

    #[test]
    fn theorem2_style_verification() {
        let r = verify_empty_rectangle(1, 1, 2, 50, &opts()).unwrap();
        assert!(r.holds, "empty rectangle contains points: {:?}", r.count);
        assert!(verify_empty_rectangle(1, 1, 2, 10_000_000, &opts()).is_err());
    }

    #[test]
    fn theorem3_style_verification() {
        let rect = Rect::scaled((int(0), int(1)), (rat(4, 5), rat(4, 5)), int(1), 10).unwrap();
        let rep = verify_upper_bound(2, 10, &rect, &opts()).unwrap();
        assert!(rep.holds);
        let bad = Rect::scaled((int(1), int(1)), (rat(4, 5), rat(4, 5)), int(1), 10).unwrap();
        assert!(verify_upper_bound(2, 10, &bad, &opts()).is_err());
    }

    #[test]
    fn scaling_validations() {
        let f = RatPoly::parse("x^2").unwrap();
        let j = RationalInterval::new(int(0), int(1)).unwrap();
        let kind = ScalingKind::Rational {
            f,
            j,
            gamma: rat(1, 2),
        };
        assert!(scaling_experiment(&kind, &[100], &opts()).is_err());
        assert!(scaling_experiment(&kind, &[100, 100, 200], &opts()).is_err());
        let rep = scaling_experiment(&kind, &[10, 20, 40], &opts()).unwrap();
        assert!(rep.slope.is_some());
        assert_eq!(rep.expected_exponent, 2.5);
    }

    #[test]
    fn workers_do_not_change_counts() {
        let rect = Rect::exact(
            RationalInterval::new(rat(1, 2), rat(7, 10)).unwrap(),
            RationalInterval::new(rat(-17, 10), rat(-3, 2)).unwrap(),
        );
        let seq = count_rect(2, 3, &rect, &opts()).unwrap();
        let par = count_rect(2, 3, &rect, &CountOptions::default()).unwrap();
        assert_eq!(seq.count, par.count);
        assert_eq!(seq.uncertain, par.uncertain);
        assert_eq!(seq.per_degree, par.per_degree);
    }

    #[test]
    fn lc_slices_unite_in_counting() {
        let rect = Rect::exact(
            RationalInterval::new(int(-2), int(0)).unwrap(),
            RationalInterval::new(int(0), int(2)).unwrap(),
        );
        let full = count_rect(2, 3, &rect, &opts()).unwrap();
        let mut merged = CountResult::default();
        for slice in [(1u64, 1u64), (2, 2), (3, 3)] {
            let o = CountOptions {
                workers: Some(1),
                lc_slice: Some(slice),
                ..Default::default()
            };
            merged.absorb(&count_rect(2, 3, &rect, &o).unwrap());
        }
        assert_eq!(full.count, merged.count);
        assert_eq!(full.uncertain, merged.uncertain);
    }
}
