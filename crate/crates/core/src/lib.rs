//! Exact arithmetic engine for enumerating and counting algebraic points:
//! ordered pairs of real roots of one irreducible integer polynomial of
//! bounded degree and height.
//!
//! The crate is organized bottom-up:
//!
//! * [`rat`] — arbitrary-precision rationals, intervals, and exact
//!   comparisons against scaled integer powers `s·Q^e` with rational `e`;
//! * [`poly`] — integer / rational coefficient polynomials, resultants;
//! * [`roots`] — Sturm-sequence real-root isolation and bisection refinement;
//! * [`algebra`] — irreducibility over ℚ, canonical minimal polynomials,
//!   algebraic points, classical root inequalities;
//! * [`regions`] — rectangles, curve strips, and the named constants used
//!   by the counting bounds;
//! * [`counting`] — exhaustive enumeration of bounded-height polynomials,
//!   point counting in regions, rational-point baseline, scaling fits;
//! * [`special`] — special-square checks, lattice solution counting,
//!   Minkowski witness search, and the exact measure of the bad set where
//!   some polynomial is simultaneously small in value and derivative;
//! * [`report`] — CSV / JSON-lines emission shared with the CLI.
//!
//! All counting results are exact integers; undecidable boundary cases are
//! reported separately as `uncertain` rather than silently resolved.

pub mod algebra;
pub mod counting;
mod error;
pub mod poly;
pub mod rat;
pub mod regions;
pub mod report;
pub mod roots;
pub mod special;

pub use error::{Error, Result};

/// Runs `f` inside a thread pool of the requested size.
///
/// `None` uses all available cores. With the `parallel` feature disabled
/// (or `workers == Some(1)`) the closure simply runs on the current thread.
pub fn run_with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match workers {
            Some(1) => f(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        f()
    }
}
