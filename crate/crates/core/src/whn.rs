//! Breakpoints and thresholds of the weak Harder-Narasimhan filtration.
//!
//! For a function `h` with difference `r`, the upper envelope is
//!
//! ```text
//! envelope(n) = max { h(m) + (n - m) r(m) | m >= n }
//! ```
//!
//! and `t(n)` is the largest maximizer, with `t(n) = +inf` when the linear
//! tail attains the maximum. The finitely many finite values of `t` are the
//! breakpoints `tau_0 < ... < tau_s`; `nu_i` is the first `n` at which `t`
//! reaches `tau_i` (and `nu_{s+1}` the first at which it reaches `+inf`).
//!
//! Two independent routes compute the same [`WhnResult`]:
//!
//! - [`whn_reference`] scans `t` directly from a provably stable starting
//!   point. It is the definitional oracle: slow, obvious, trusted.
//! - [`whn_effective`] recurses over a purged candidate set, finding each
//!   threshold by exact ceiling division. It is the production route.
//!
//! `whn_effective(f) == whn_reference(f)` for every valid input is the
//! central differential test of the crate.

use std::fmt;

use crate::fdh::FdhFunction;
use crate::scalar::{range_incl, Int};

/// An integer extended by `-inf` and `+inf`.
///
/// The envelope argmax only ever takes finite values or `+inf`; `-inf`
/// exists for interval endpoints of graded pieces. At `+inf` the difference
/// function evaluates to the rank and the affine form `h(t) - t*r(t)` to
/// the tail intercept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt<I> {
    NegInf,
    Finite(I),
    PosInf,
}

impl<I> ExtInt<I> {
    pub fn as_finite(&self) -> Option<&I> {
        match self {
            ExtInt::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }
}

impl<I: fmt::Display> fmt::Display for ExtInt<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Finite(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "inf"),
        }
    }
}

impl<I> From<I> for ExtInt<I> {
    fn from(n: I) -> Self {
        ExtInt::Finite(n)
    }
}

/// Slope of the supporting line through `t`: `r(t)`, or the rank at `+inf`.
pub fn slope<I: Int>(f: &FdhFunction<I>, t: &ExtInt<I>) -> I {
    match t {
        ExtInt::Finite(m) => f.r(m),
        ExtInt::PosInf => f.rank().clone(),
        ExtInt::NegInf => panic!("no supporting line at -inf"),
    }
}

/// Intercept of the supporting line through `t`: `h(t) - t*r(t)`, or the
/// tail intercept at `+inf`.
pub fn intercept<I: Int>(f: &FdhFunction<I>, t: &ExtInt<I>) -> I {
    match t {
        ExtInt::Finite(m) => f.h(m) - m.clone() * f.r(m),
        ExtInt::PosInf => f.sigma().clone(),
        ExtInt::NegInf => panic!("no supporting line at -inf"),
    }
}

/// Value at `x` of the supporting line through `t`:
/// `h(t) + (x - t) r(t)`, read as `rank*x + sigma` at `+inf`.
pub fn line_value<I: Int>(f: &FdhFunction<I>, t: &ExtInt<I>, x: &I) -> I {
    slope(f, t) * x.clone() + intercept(f, t)
}

/// Brute-force evaluation of the upper envelope and its largest maximizer
/// at `n`, straight from the definition.
///
/// Candidates are `m` in `[n, hi]` plus the tail value `rank*n + sigma`
/// attained by every `m >= hi`; the argmax is `+inf` exactly when the tail
/// value equals the maximum.
pub fn envelope_at<I: Int>(f: &FdhFunction<I>, n: &I) -> (I, ExtInt<I>) {
    let (lo, hi) = match f.window() {
        Some(w) => w,
        // The zero function: every candidate gives 0, unbounded argmax.
        None => return (I::zero(), ExtInt::PosInf),
    };
    let tail = f.rank().clone() * n.clone() + f.sigma().clone();
    if *n >= hi {
        return (tail, ExtInt::PosInf);
    }
    // Maximize (value, argmax) lexicographically so ties resolve to the
    // largest maximizer, with +inf on top.
    let mut best = (tail, ExtInt::PosInf);
    if *n < lo {
        // All m in [n, lo-1] give value 0; lo-1 is the largest of them.
        let cand = (I::zero(), ExtInt::Finite(lo.clone() - I::one()));
        if cand > best {
            best = cand;
        }
    }
    let from = if *n > lo { n.clone() } else { lo };
    for m in range_incl(&from, &hi) {
        let value = f.h(&m) + (n.clone() - m.clone()) * f.r(&m);
        let cand = (value, ExtInt::Finite(m));
        if cand > best {
            best = cand;
        }
    }
    best
}

/// Breakpoint data of the weak Harder-Narasimhan filtration.
///
/// `taus` lists the finite breakpoints `tau_0 < ... < tau_s` (empty for
/// rank 0, where the argmax is identically `+inf`); the implicit final
/// breakpoint is `+inf`. `nus[i-1] = nu_i` is the first `n` with
/// `t(n) = tau_i` (the last entry being the first `n` with `t(n) = +inf`),
/// and `rhos`/`betas` hold the rank and higher-twist multiplicity of each
/// of the `s+1` torsion-free pieces. `torsion_constant` is `h(tau_0)`, the
/// constant value of the torsion piece (`sigma` when the rank is 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhnResult<I: Int> {
    pub taus: Vec<I>,
    pub nus: Vec<I>,
    pub rhos: Vec<I>,
    pub betas: Vec<I>,
    pub torsion_constant: I,
}

impl<I: Int> WhnResult<I> {
    /// Breakpoint `tau_i` for `i` in `0..=taus.len()`, the last one being
    /// `+inf`.
    pub fn tau(&self, i: usize) -> ExtInt<I> {
        match self.taus.get(i) {
            Some(t) => ExtInt::Finite(t.clone()),
            None => ExtInt::PosInf,
        }
    }

    /// Number of torsion-free pieces (`s + 1`; zero for rank-0 input).
    pub fn piece_count(&self) -> usize {
        self.nus.len()
    }

    /// Structural invariants: strictly increasing breakpoints and
    /// thresholds, the difference chain `0 = r(tau_0) < ... < rho`, piece
    /// ranks summing to the rank, and `0 <= beta_i < rho_i`.
    pub fn validate(&self, f: &FdhFunction<I>) -> Result<(), String> {
        let rho = f.rank().clone();
        if rho.is_zero() {
            if !(self.taus.is_empty() && self.nus.is_empty() && self.rhos.is_empty()) {
                return Err("rank-0 input must have no breakpoints".into());
            }
            if self.torsion_constant != *f.sigma() {
                return Err("torsion constant must equal the tail constant".into());
            }
            return Ok(());
        }
        if self.taus.is_empty() {
            return Err("positive rank requires at least tau_0".into());
        }
        if self.nus.len() != self.taus.len()
            || self.rhos.len() != self.taus.len()
            || self.betas.len() != self.taus.len()
        {
            return Err("taus, nus, rhos, betas must have equal length".into());
        }
        for w in self.taus.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("breakpoints not strictly increasing: {} >= {}", w[0], w[1]));
            }
        }
        for w in self.nus.windows(2) {
            if w[0] >= w[1] {
                return Err(format!("thresholds not strictly increasing: {} >= {}", w[0], w[1]));
            }
        }
        let mut prev = f.r(&self.taus[0]);
        if !prev.is_zero() {
            return Err(format!("r(tau_0) = {prev}, expected 0"));
        }
        for tau in &self.taus[1..] {
            let cur = f.r(tau);
            if cur <= prev {
                return Err(format!("r chain not strictly increasing at tau = {tau}"));
            }
            prev = cur;
        }
        if prev >= rho {
            return Err("r(tau_s) must stay below the rank".into());
        }
        let mut rank_total = I::zero();
        for (rho_i, beta_i) in self.rhos.iter().zip(&self.betas) {
            if !rho_i.is_positive() {
                return Err(format!("piece rank {rho_i} must be >= 1"));
            }
            if beta_i.is_negative() || beta_i >= rho_i {
                return Err(format!("beta = {beta_i} out of range [0, {rho_i})"));
            }
            rank_total = rank_total + rho_i.clone();
        }
        if rank_total != rho {
            return Err(format!("piece ranks sum to {rank_total}, expected {rho}"));
        }
        if self.torsion_constant != f.h(&self.taus[0]) {
            return Err("torsion constant must equal h(tau_0)".into());
        }
        Ok(())
    }
}

/// Rank-0 result shared by both routes: the argmax is identically `+inf`.
fn torsion_result<I: Int>(f: &FdhFunction<I>) -> WhnResult<I> {
    WhnResult {
        taus: Vec::new(),
        nus: Vec::new(),
        rhos: Vec::new(),
        betas: Vec::new(),
        torsion_constant: f.sigma().clone(),
    }
}

/// Piece ranks and higher-twist multiplicities from the breakpoint data:
/// `rho_i = r(tau_i) - r(tau_{i-1})` and `beta_i` the gap of the two
/// supporting lines at `nu_i`.
fn derive_piece_invariants<I: Int>(
    f: &FdhFunction<I>,
    taus: &[I],
    nus: &[I],
) -> (Vec<I>, Vec<I>) {
    let mut rhos = Vec::with_capacity(nus.len());
    let mut betas = Vec::with_capacity(nus.len());
    for (i, nu) in nus.iter().enumerate() {
        let prev = ExtInt::Finite(taus[i].clone());
        let cur = match taus.get(i + 1) {
            Some(t) => ExtInt::Finite(t.clone()),
            None => ExtInt::PosInf,
        };
        rhos.push(slope(f, &cur) - slope(f, &prev));
        betas.push(line_value(f, &cur, nu) - line_value(f, &prev, nu));
    }
    (rhos, betas)
}

/// Largest `n` with `r(n) = 0`; well defined for positive rank.
fn last_zero_of_r<I: Int>(f: &FdhFunction<I>) -> I {
    let (lo, hi) = f.window().expect("positive rank implies nonzero support");
    let mut last = lo.clone() - I::one();
    for n in range_incl(&lo, &hi) {
        if f.r(&n).is_zero() {
            last = n;
        }
    }
    last
}

/// A starting point `n` low enough that the envelope argmax provably equals
/// `tau_0 = max { n | r(n) = 0 }` there: every candidate with positive
/// difference, and the tail, is strictly below `h(tau_0)` at such `n`.
fn stable_scan_floor<I: Int>(f: &FdhFunction<I>) -> I {
    let (lo, hi) = f.window().expect("positive rank implies nonzero support");
    let tau0 = last_zero_of_r(f);
    let mut floor = if tau0 < lo { tau0 } else { lo.clone() - I::one() };
    // Tail line strictly negative: rank*n + sigma <= -1.
    let n_tail = (-I::one() - f.sigma().clone()).div_floor(f.rank());
    if n_tail < floor {
        floor = n_tail;
    }
    // For m with r(m) >= 1, h(m) + (n - m) r(m) <= h(m) + n - m < 0 once
    // n <= m - h(m) - 1.
    for m in range_incl(&lo, &hi) {
        if f.r(&m).is_positive() {
            let bound = m.clone() - f.h(&m) - I::one();
            if bound < floor {
                floor = bound;
            }
        }
    }
    floor
}

/// Definitional computation of the breakpoint data: scans the envelope
/// argmax upward from a provably stable start, recording each change of
/// value and its first attainment. This is the oracle the effective
/// algorithm is tested against.
pub fn whn_reference<I: Int>(f: &FdhFunction<I>) -> WhnResult<I> {
    if f.rank().is_zero() {
        return torsion_result(f);
    }
    let (_, hi) = f.window().expect("positive rank implies nonzero support");
    let tau0 = last_zero_of_r(f);
    let floor = stable_scan_floor(f);
    let below = envelope_at(f, &(floor.clone() - I::one())).1;
    let at_floor = envelope_at(f, &floor).1;
    assert!(
        below == ExtInt::Finite(tau0.clone()) && at_floor == ExtInt::Finite(tau0.clone()),
        "scan floor is not in the stable region"
    );

    let mut taus = vec![tau0.clone()];
    let mut nus = Vec::new();
    let mut cur = ExtInt::Finite(tau0);
    let mut n = floor;
    loop {
        n = n + I::one();
        assert!(n <= hi, "argmax must reach +inf by the top of the support");
        let (_, t) = envelope_at(f, &n);
        if t == cur {
            continue;
        }
        assert!(t > cur, "argmax must be nondecreasing");
        match &t {
            ExtInt::Finite(tau) => {
                taus.push(tau.clone());
                nus.push(n.clone());
            }
            ExtInt::PosInf => {
                nus.push(n.clone());
                break;
            }
            ExtInt::NegInf => unreachable!(),
        }
        cur = t;
    }
    let (rhos, betas) = derive_piece_invariants(f, &taus, &nus);
    let torsion_constant = f.h(&taus[0]);
    WhnResult {
        taus,
        nus,
        rhos,
        betas,
        torsion_constant,
    }
}

/// Candidate breakpoints, in increasing order with `+inf` last.
///
/// Starts from the indices just below each positive jump of the difference
/// function, then purges (descending) every candidate whose difference
/// value is not strictly below that of the smallest kept candidate above
/// it. What survives is the set on which `r` is strictly smaller than at
/// every later point.
pub fn breakpoint_candidates<I: Int>(f: &FdhFunction<I>) -> Vec<ExtInt<I>> {
    let mut kept = vec![ExtInt::PosInf];
    let mut r_min = f.rank().clone();
    for (m, v) in f.diff().iter().rev() {
        if !v.is_positive() {
            continue;
        }
        let n = m.clone() - I::one();
        let rn = f.r(&n);
        if rn < r_min {
            r_min = rn;
            kept.push(ExtInt::Finite(n));
        }
    }
    kept.reverse();
    kept
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ThresholdNumerator {
    /// Numerator derived from the crossing inequality
    /// `h(t) + (x - t) r(t) >= h(tau) + (x - tau) r(tau)`.
    Derived,
    /// Reversed numerator; kept only as a regression-guard test double.
    #[cfg_attr(not(feature = "flipped-threshold"), allow(dead_code))]
    Flipped,
}

fn whn_effective_impl<I: Int>(f: &FdhFunction<I>, numerator: ThresholdNumerator) -> WhnResult<I> {
    if f.rank().is_zero() {
        return torsion_result(f);
    }
    let candidates = breakpoint_candidates(f);
    let tau0 = candidates[0]
        .as_finite()
        .expect("positive rank yields a finite minimal candidate")
        .clone();
    debug_assert!(f.r(&tau0).is_zero());

    let mut taus = vec![tau0];
    let mut nus = Vec::new();
    let mut prev_index = 0usize;
    loop {
        let prev = candidates[prev_index].clone();
        let prev_slope = slope(f, &prev);
        let prev_intercept = intercept(f, &prev);
        // Threshold for each later candidate: least integer x at which its
        // supporting line reaches the current one, by exact ceiling
        // division (the slope difference is positive along the purged set).
        let mut nu: Option<I> = None;
        let mut thresholds = Vec::new();
        for t in &candidates[prev_index + 1..] {
            let den = slope(f, t) - prev_slope.clone();
            debug_assert!(den.is_positive());
            let num = match numerator {
                ThresholdNumerator::Derived => prev_intercept.clone() - intercept(f, t),
                ThresholdNumerator::Flipped => intercept(f, t) - prev_intercept.clone(),
            };
            let x = num.div_ceil(&den);
            if nu.as_ref().is_none_or(|best| x < *best) {
                nu = Some(x.clone());
            }
            thresholds.push(x);
        }
        let nu = nu.expect("the +inf candidate is always available");
        // Among candidates attaining the minimal threshold, the next
        // breakpoint is the one with maximal line value at nu, the largest
        // such on a tie.
        let mut best: Option<(I, usize)> = None;
        for (offset, x) in thresholds.iter().enumerate() {
            if *x != nu {
                continue;
            }
            let index = prev_index + 1 + offset;
            let value = line_value(f, &candidates[index], &nu);
            if best
                .as_ref()
                .is_none_or(|(v, i)| (value.clone(), index) > (v.clone(), *i))
            {
                best = Some((value, index));
            }
        }
        let (_, index) = best.expect("some candidate attains the minimal threshold");
        nus.push(nu);
        match &candidates[index] {
            ExtInt::Finite(tau) => taus.push(tau.clone()),
            ExtInt::PosInf => break,
            ExtInt::NegInf => unreachable!(),
        }
        prev_index = index;
    }
    let (rhos, betas) = derive_piece_invariants(f, &taus, &nus);
    let torsion_constant = f.h(&taus[0]);
    WhnResult {
        taus,
        nus,
        rhos,
        betas,
        torsion_constant,
    }
}

/// Effective computation of the breakpoint data by threshold recursion
/// over the purged candidate set. Must agree with [`whn_reference`] on
/// every valid input.
pub fn whn_effective<I: Int>(f: &FdhFunction<I>) -> WhnResult<I> {
    whn_effective_impl(f, ThresholdNumerator::Derived)
}

/// Test double with the threshold numerator reversed. Exists so the
/// regression suite can demonstrate that the sign matters: this variant
/// must disagree with [`whn_reference`] (already on the rank-3 worked
/// example).
#[cfg(feature = "flipped-threshold")]
pub fn whn_effective_flipped_threshold<I: Int>(f: &FdhFunction<I>) -> WhnResult<I> {
    whn_effective_impl(f, ThresholdNumerator::Flipped)
}

/// The structural laws of the envelope, checked exhaustively on a finite
/// window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvelopeClause {
    /// `0 <= h(n) <= envelope(n)` and `t(n) > n`.
    Bounds,
    /// `m > t(n)` implies `r(m) > r(t(n))`.
    ArgmaxGrowth,
    /// `t` nondecreasing; its distinct values are exactly the breakpoints,
    /// with `0 = r(tau_0) < r(tau_1) < ... < rho`.
    ArgmaxMonotone,
    /// On `[nu_i, nu_{i+1})` the argmax is `tau_i` and the envelope is its
    /// supporting line; `n < nu_i` iff the previous line is still strictly
    /// above.
    IntervalCharacterization,
    /// For `nu_i <= n <= m <= tau_i` the supporting line at `tau_i`
    /// dominates the one at `m`.
    SegmentDominance,
    /// Below `nu_1` the argmax is `tau_0 = max { n | r(n) = 0 }` and the
    /// envelope is constant `h(tau_0)` (zero in the torsion-free case).
    LowerTail,
    /// From `nu_{s+1}` on, the envelope is the linear tail and the argmax
    /// is `+inf`.
    UpperTail,
}

impl EnvelopeClause {
    pub const ALL: [EnvelopeClause; 7] = [
        EnvelopeClause::Bounds,
        EnvelopeClause::ArgmaxGrowth,
        EnvelopeClause::ArgmaxMonotone,
        EnvelopeClause::IntervalCharacterization,
        EnvelopeClause::SegmentDominance,
        EnvelopeClause::LowerTail,
        EnvelopeClause::UpperTail,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EnvelopeClause::Bounds => "bounds",
            EnvelopeClause::ArgmaxGrowth => "argmax_growth",
            EnvelopeClause::ArgmaxMonotone => "argmax_monotone",
            EnvelopeClause::IntervalCharacterization => "interval_characterization",
            EnvelopeClause::SegmentDominance => "segment_dominance",
            EnvelopeClause::LowerTail => "lower_tail",
            EnvelopeClause::UpperTail => "upper_tail",
        }
    }
}

/// Outcome of checking one envelope clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseCheck {
    pub clause: EnvelopeClause,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Per-clause verification report; failures are entries, not panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeReport {
    pub clauses: Vec<ClauseCheck>,
}

impl EnvelopeReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseCheck> {
        self.clauses.iter().filter(|c| !c.pass)
    }
}

/// Checks every envelope clause for `f` against the breakpoint data `w`
/// over a finite window that covers all breakpoints, thresholds, and a
/// margin of the constant regions on both sides.
pub fn check_envelope<I: Int>(f: &FdhFunction<I>, w: &WhnResult<I>) -> EnvelopeReport {
    let mut report = EnvelopeReport { clauses: Vec::new() };
    let fail = |clause: EnvelopeClause, detail: String, out: &mut Vec<ClauseCheck>| {
        out.push(ClauseCheck {
            clause,
            pass: false,
            detail: Some(detail),
        });
    };

    // Window: everything interesting happens between the stable region
    // below and the linear tail above.
    let (start, end) = match f.window() {
        Some((lo, hi)) => {
            let two = I::one() + I::one();
            let mut start = lo - two.clone();
            if f.rank().is_positive() {
                let floor = stable_scan_floor(f);
                if floor < start {
                    start = floor;
                }
            }
            if let Some(nu1) = w.nus.first() {
                let cand = nu1.clone() - two.clone();
                if cand < start {
                    start = cand;
                }
            }
            let mut end = hi + two.clone();
            if let Some(last) = w.nus.last() {
                let cand = last.clone() + two;
                if cand > end {
                    end = cand;
                }
            }
            (start, end)
        }
        None => (-I::one() - I::one(), I::one() + I::one()),
    };

    let ns: Vec<I> = range_incl(&start, &end).collect();
    let env: Vec<(I, ExtInt<I>)> = ns.iter().map(|n| envelope_at(f, n)).collect();
    let hi_ext = f.window().map(|(_, hi)| hi);

    // Bounds: 0 <= h <= envelope, argmax beyond the point.
    let mut clauses = Vec::new();
    let mut ok = true;
    for (n, (value, t)) in ns.iter().zip(&env) {
        let hn = f.h(n);
        if hn.is_negative() || hn > *value {
            ok = false;
            fail(
                EnvelopeClause::Bounds,
                format!("h({n}) = {hn} outside [0, {value}]"),
                &mut clauses,
            );
            break;
        }
        if *t <= ExtInt::Finite(n.clone()) {
            ok = false;
            fail(EnvelopeClause::Bounds, format!("t({n}) = {t} <= {n}"), &mut clauses);
            break;
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::Bounds, pass: true, detail: None });
    }

    // ArgmaxGrowth: r strictly larger after the argmax.
    ok = true;
    'growth: for (n, (_, t)) in ns.iter().zip(&env) {
        if let ExtInt::Finite(tau) = t {
            let r_tau = f.r(tau);
            if let Some(hi) = &hi_ext {
                let top = hi.clone() + I::one();
                for m in range_incl(&(tau.clone() + I::one()), &top) {
                    if f.r(&m) <= r_tau {
                        ok = false;
                        fail(
                            EnvelopeClause::ArgmaxGrowth,
                            format!("r({m}) = {} <= r(t({n})) = {r_tau}", f.r(&m)),
                            &mut clauses,
                        );
                        break 'growth;
                    }
                }
            }
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::ArgmaxGrowth, pass: true, detail: None });
    }

    // ArgmaxMonotone: nondecreasing scan whose distinct values are exactly
    // the recorded breakpoints, with the strictly increasing r chain.
    ok = true;
    let mut seen: Vec<ExtInt<I>> = Vec::new();
    for (n, (_, t)) in ns.iter().zip(&env) {
        if let Some(last) = seen.last() {
            if t < last {
                ok = false;
                fail(
                    EnvelopeClause::ArgmaxMonotone,
                    format!("t({n}) = {t} decreased below {last}"),
                    &mut clauses,
                );
                break;
            }
        }
        if seen.last() != Some(t) {
            seen.push(t.clone());
        }
    }
    if ok {
        let mut expected: Vec<ExtInt<I>> =
            w.taus.iter().map(|tau| ExtInt::Finite(tau.clone())).collect();
        expected.push(ExtInt::PosInf);
        if seen != expected {
            ok = false;
            let seen_str: Vec<String> = seen.iter().map(|t| t.to_string()).collect();
            let expected_str: Vec<String> = expected.iter().map(|t| t.to_string()).collect();
            fail(
                EnvelopeClause::ArgmaxMonotone,
                format!("argmax values [{}] != breakpoints [{}]", seen_str.join(", "), expected_str.join(", ")),
                &mut clauses,
            );
        }
    }
    if ok {
        let mut prev: Option<I> = None;
        for tau in &w.taus {
            let cur = f.r(tau);
            let lower = prev.clone().unwrap_or_else(|| -I::one());
            if cur <= lower || (prev.is_none() && !cur.is_zero()) {
                ok = false;
                fail(
                    EnvelopeClause::ArgmaxMonotone,
                    format!("difference chain broken at tau = {tau}"),
                    &mut clauses,
                );
                break;
            }
            prev = Some(cur);
        }
        if ok {
            if let Some(last) = prev {
                if last >= *f.rank() {
                    ok = false;
                    fail(
                        EnvelopeClause::ArgmaxMonotone,
                        "r(tau_s) not below the rank".to_string(),
                        &mut clauses,
                    );
                }
            }
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::ArgmaxMonotone, pass: true, detail: None });
    }

    // IntervalCharacterization: piecewise-linear description plus the
    // threshold inequality in both directions.
    ok = true;
    'interval: for (n, (value, t)) in ns.iter().zip(&env) {
        // Which interval does n fall into?
        let piece = w.nus.iter().take_while(|nu| *nu <= n).count();
        let expected_t = w.tau(piece);
        if *t != expected_t {
            ok = false;
            fail(
                EnvelopeClause::IntervalCharacterization,
                format!("t({n}) = {t}, expected {expected_t}"),
                &mut clauses,
            );
            break;
        }
        let expected_value = line_value(f, &expected_t, n);
        if *value != expected_value {
            ok = false;
            fail(
                EnvelopeClause::IntervalCharacterization,
                format!("envelope({n}) = {value}, expected line value {expected_value}"),
                &mut clauses,
            );
            break;
        }
        for (i, nu) in w.nus.iter().enumerate() {
            let before = line_value(f, &w.tau(i), n) > line_value(f, &w.tau(i + 1), n);
            if (n < nu) != before {
                ok = false;
                fail(
                    EnvelopeClause::IntervalCharacterization,
                    format!("threshold inequality mismatch at n = {n}, nu = {nu}"),
                    &mut clauses,
                );
                break 'interval;
            }
        }
    }
    if ok {
        clauses.push(ClauseCheck {
            clause: EnvelopeClause::IntervalCharacterization,
            pass: true,
            detail: None,
        });
    }

    // SegmentDominance: the supporting line at tau_i dominates every line
    // based inside the segment. Both sides are linear in n, so endpoints
    // suffice.
    ok = true;
    'dominance: for (i, nu) in w.nus.iter().enumerate() {
        let tau = w.tau(i + 1);
        let m_top = match (&tau, &hi_ext) {
            (ExtInt::Finite(t), _) => t.clone(),
            (ExtInt::PosInf, Some(hi)) => hi.clone() + I::one(),
            _ => continue,
        };
        for m in range_incl(nu, &m_top) {
            for n in [nu.clone(), m.clone()] {
                let lhs = line_value(f, &tau, &n);
                let rhs = f.h(&m) + (n.clone() - m.clone()) * f.r(&m);
                if lhs < rhs {
                    ok = false;
                    fail(
                        EnvelopeClause::SegmentDominance,
                        format!("line at tau_{} below candidate m = {m} at n = {n}", i + 1),
                        &mut clauses,
                    );
                    break 'dominance;
                }
            }
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::SegmentDominance, pass: true, detail: None });
    }

    // LowerTail: constant region below the first threshold.
    ok = true;
    if f.rank().is_positive() {
        let tau0 = &w.taus[0];
        let direct = last_zero_of_r(f);
        if direct != *tau0 {
            ok = false;
            fail(
                EnvelopeClause::LowerTail,
                format!("tau_0 = {tau0} but max {{ n | r(n) = 0 }} = {direct}"),
                &mut clauses,
            );
        }
        let nu1 = &w.nus[0];
        let h_tau0 = f.h(tau0);
        if ok {
            for (n, (value, t)) in ns.iter().zip(&env) {
                if n >= nu1 {
                    break;
                }
                if *t != ExtInt::Finite(tau0.clone()) || *value != h_tau0 {
                    ok = false;
                    fail(
                        EnvelopeClause::LowerTail,
                        format!("below nu_1, envelope({n}) = ({value}, {t}), expected ({h_tau0}, {tau0})"),
                        &mut clauses,
                    );
                    break;
                }
            }
        }
        if ok && f.classify().is_torsion_free && !h_tau0.is_zero() {
            ok = false;
            fail(
                EnvelopeClause::LowerTail,
                format!("torsion-free input must have h(tau_0) = 0, got {h_tau0}"),
                &mut clauses,
            );
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::LowerTail, pass: true, detail: None });
    }

    // UpperTail: linear region from the last threshold on.
    ok = true;
    let tail_start = w.nus.last().cloned().unwrap_or_else(|| start.clone());
    for (n, (value, t)) in ns.iter().zip(&env) {
        if *n < tail_start {
            continue;
        }
        let tail = f.rank().clone() * n.clone() + f.sigma().clone();
        if *t != ExtInt::PosInf || *value != tail {
            ok = false;
            fail(
                EnvelopeClause::UpperTail,
                format!("past nu_{{s+1}}, envelope({n}) = ({value}, {t}), expected ({tail}, inf)"),
                &mut clauses,
            );
            break;
        }
    }
    if ok {
        clauses.push(ClauseCheck { clause: EnvelopeClause::UpperTail, pass: true, detail: None });
    }

    report.clauses = clauses;
    report
}
