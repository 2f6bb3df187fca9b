//! First differences of Hilbert functions and their classification.
//!
//! An [`FdhFunction`] is a function `h: Z -> Z>=0` with nonnegative first
//! difference `r`, vanishing for `n << 0` and eventually linear of the form
//! `rho*n + sigma`. It arises as the first difference of the Hilbert
//! function of a coherent sheaf on the projective plane presented by twists
//! with multiplicities `a(n)` and `b(n)`: `r` and `h` are the first and
//! second running sums of `a - b`.
//!
//! The canonical representation is the difference `diff = a - b`; the split
//! into `a` and `b` only matters when reporting resolutions, so it is not
//! stored here.

use crate::error::Error;
use crate::scalar::{int, range_incl, Int};
use crate::support::SupportSeq;

/// A first-difference-of-Hilbert function, stored by its second difference.
///
/// Invariants, checked on construction:
/// - `r(n) = sum of diff over m <= n` is nonnegative for every `n`
/// - `r(n) = 0` for `n < lo` and `r(n) = rho` for `n >= hi`
/// - `h(n) = 0` for `n < lo` and `h(n) = rho*n + sigma` for `n >= hi`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdhFunction<I: Int> {
    diff: SupportSeq<I>,
    rho: I,
    sigma: I,
}

/// How the generic sheaf with a given function looks, following the
/// filtered Bertini classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangDescription {
    /// Torsion-free with at worst singular points of multiplicity 1.
    TorsionFreeMult1Sing,
    /// Locally free.
    LocallyFree,
    /// A line bundle on a curve with normal crossings.
    LineBundleOnNodalCurve,
    /// A line bundle on a smooth curve.
    LineBundleOnSmoothCurve,
    /// The zero function; no sheaf content.
    None,
}

/// Classification flags of an [`FdhFunction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Rank zero.
    pub is_torsion: bool,
    /// Once `r` reaches 1 it never drops below 1 again.
    pub is_torsion_free: bool,
    /// Torsion-free, and once `r` reaches 2 it never drops below 2 again.
    pub is_locally_free: bool,
    /// No interior split point produces two nonzero pieces.
    pub is_unfilterable: bool,
    pub chang_description: ChangDescription,
}

impl<I: Int> FdhFunction<I> {
    /// Builds the function from its second difference, validating that all
    /// partial sums are nonnegative.
    pub fn from_diff(diff: SupportSeq<I>) -> Result<Self, Error<I>> {
        let mut running = I::zero();
        for (n, v) in diff.iter() {
            running = running + v.clone();
            if running.is_negative() {
                return Err(Error::NotFdh {
                    n: n.clone(),
                    partial_sum: running,
                });
            }
        }
        let rho = running;
        let sigma = match diff.hi() {
            Some(hi) => {
                // h(hi) = sum (hi - m + 1) diff(m), and h(n) = rho*n + sigma
                // from hi on.
                let mut h_hi = I::zero();
                for (m, v) in diff.iter() {
                    h_hi = h_hi + (hi.clone() - m.clone() + I::one()) * v.clone();
                }
                h_hi - rho.clone() * hi.clone()
            }
            None => I::zero(),
        };
        Ok(FdhFunction { diff, rho, sigma })
    }

    /// Builds the function of a free presentation with multiplicities `a`
    /// and `b`. Both must be nonnegative.
    pub fn from_presentation(a: &SupportSeq<I>, b: &SupportSeq<I>) -> Result<Self, Error<I>> {
        assert!(a.is_nonnegative(), "presentation multiplicities a must be nonnegative");
        assert!(b.is_nonnegative(), "presentation multiplicities b must be nonnegative");
        Self::from_diff(a.sub(b))
    }

    /// Recovers the function from a consecutive window of Hilbert-function
    /// values `(n, h0(n))`.
    ///
    /// The window is extended by zero below, so its first value must be 0
    /// and the third difference must vanish again at the top; otherwise the
    /// support of the presentation is not determined and
    /// [`Error::WindowTooNarrow`] is returned. The positive part of the
    /// third difference becomes `a`, the negative part `b`.
    pub fn from_hilbert_window(values: &[(I, I)]) -> Result<Self, Error<I>> {
        let (first_n, first_v) = match values.first() {
            Some(pair) => pair.clone(),
            None => {
                return Err(Error::WindowTooNarrow { boundary: I::zero() });
            }
        };
        let mut expected = first_n.clone();
        for (n, _) in values {
            if *n != expected {
                return Err(Error::NonConsecutiveWindow {
                    expected,
                    found: n.clone(),
                });
            }
            expected = expected + I::one();
        }
        if !first_v.is_zero() {
            return Err(Error::WindowTooNarrow { boundary: first_n });
        }

        // Third difference with zero extension below the window.
        let at = |k: i64| -> I {
            if k < 0 {
                I::zero()
            } else {
                values[k as usize].1.clone()
            }
        };
        let mut diff = SupportSeq::zero();
        let three: I = int(3);
        for k in 0..values.len() as i64 {
            let d3 = at(k) - three.clone() * at(k - 1) + three.clone() * at(k - 2) - at(k - 3);
            diff.add(values[k as usize].0.clone(), d3);
        }
        let top = values.last().expect("nonempty window").0.clone();
        if !diff.get(&top).is_zero() {
            return Err(Error::WindowTooNarrow { boundary: top });
        }
        let a = diff.positive_part();
        let b = diff.negative_part();
        Self::from_presentation(&a, &b)
    }

    /// The zero function.
    pub fn zero() -> Self {
        FdhFunction {
            diff: SupportSeq::zero(),
            rho: I::zero(),
            sigma: I::zero(),
        }
    }

    /// Second difference `a - b`.
    pub fn diff(&self) -> &SupportSeq<I> {
        &self.diff
    }

    /// Rank: the eventual constant value of `r`.
    pub fn rank(&self) -> &I {
        &self.rho
    }

    /// Intercept of the linear tail `h(n) = rho*n + sigma`.
    pub fn sigma(&self) -> &I {
        &self.sigma
    }

    /// Degree `sigma - rho`.
    pub fn degree(&self) -> I {
        self.sigma.clone() - self.rho.clone()
    }

    /// `(rank, degree)` in one call.
    pub fn rank_degree(&self) -> (I, I) {
        (self.rho.clone(), self.degree())
    }

    pub fn is_zero(&self) -> bool {
        self.diff.is_zero()
    }

    /// Support window `[lo, hi]` of the second difference, absent for the
    /// zero function.
    pub fn window(&self) -> Option<(I, I)> {
        Some((self.diff.lo()?.clone(), self.diff.hi()?.clone()))
    }

    /// First difference `r(n)`, exact for every `n` (closed forms outside
    /// the support window).
    pub fn r(&self, n: &I) -> I {
        match self.window() {
            None => I::zero(),
            Some((lo, hi)) => {
                if *n < lo {
                    I::zero()
                } else if *n >= hi {
                    self.rho.clone()
                } else {
                    self.diff.prefix_total(n)
                }
            }
        }
    }

    /// The function value `h(n)`, exact for every `n`.
    pub fn h(&self, n: &I) -> I {
        match self.window() {
            None => I::zero(),
            Some((lo, hi)) => {
                if *n < lo {
                    I::zero()
                } else if *n >= hi {
                    self.rho.clone() * n.clone() + self.sigma.clone()
                } else {
                    // h(n) = sum_{m <= n} (n - m + 1) diff(m)
                    let mut acc = I::zero();
                    for (m, v) in self.diff.iter() {
                        if m > n {
                            break;
                        }
                        acc = acc + (n.clone() - m.clone() + I::one()) * v.clone();
                    }
                    acc
                }
            }
        }
    }

    /// Deficiency `sum over n of (rho*n + sigma)_+ - h(n)`.
    ///
    /// The sum is finite exactly when the rank is positive (or the function
    /// is zero); for a nonzero rank-0 function every `n << 0` contributes
    /// `sigma` and the op reports [`Error::DeficiencyUndefinedForTorsion`].
    pub fn deficiency(&self) -> Result<I, Error<I>> {
        if self.rho.is_zero() {
            return if self.is_zero() {
                Ok(I::zero())
            } else {
                Err(Error::DeficiencyUndefinedForTorsion)
            };
        }
        let (lo, hi) = self.window().expect("positive rank implies nonzero diff");
        // (rho*n + sigma)_+ vanishes for n <= floor(-sigma/rho); h vanishes
        // below lo; above hi both terms agree.
        let first_positive =
            num_integer::Integer::div_floor(&-self.sigma.clone(), &self.rho) + I::one();
        let start = if first_positive < lo { first_positive } else { lo };
        let mut total = I::zero();
        for n in range_incl(&start, &hi) {
            let line = self.rho.clone() * n.clone() + self.sigma.clone();
            let line_pos = if line.is_negative() { I::zero() } else { line };
            total = total + line_pos - self.h(&n);
        }
        Ok(total)
    }

    /// True when `r(n) >= r(m)` for all `n >= m`: the presentation can be
    /// split at twist `m`.
    pub fn is_filterable_at(&self, m: &I) -> bool {
        let (lo, hi) = match self.window() {
            Some(w) => w,
            None => return true,
        };
        if *m < lo || *m >= hi {
            return true;
        }
        let rm = self.r(m);
        if self.rho < rm {
            return false;
        }
        range_incl(m, &hi).all(|n| self.r(&n) >= rm)
    }

    /// Classification flags and the generic-sheaf description.
    pub fn classify(&self) -> Classification {
        let is_torsion = self.rho.is_zero();
        let (is_torsion_free, is_locally_free) = self.monotone_thresholds();
        let is_unfilterable = self.interior_split_points().next().is_none();
        let chang_description = if self.is_zero() {
            ChangDescription::None
        } else if is_torsion {
            if is_unfilterable {
                ChangDescription::LineBundleOnSmoothCurve
            } else {
                ChangDescription::LineBundleOnNodalCurve
            }
        } else if is_locally_free {
            ChangDescription::LocallyFree
        } else {
            ChangDescription::TorsionFreeMult1Sing
        };
        Classification {
            is_torsion,
            is_torsion_free,
            is_locally_free,
            is_unfilterable,
            chang_description,
        }
    }

    /// Interior points `m` in `[lo, hi)` at which the function is
    /// filterable; splitting there yields two nonzero pieces.
    pub fn interior_split_points(&self) -> impl Iterator<Item = I> + '_ {
        let window = self.window();
        let range = window
            .map(|(lo, hi)| range_incl(&lo, &(hi - I::one())))
            .into_iter()
            .flatten();
        range.filter(move |m| self.is_filterable_at(m))
    }

    /// `(torsion_free, locally_free)`: once `r` reaches the threshold k it
    /// must stay there, for k = 1 and k = 2.
    fn monotone_thresholds(&self) -> (bool, bool) {
        let (lo, hi) = match self.window() {
            Some(w) => w,
            None => return (true, true),
        };
        let mut ok = [true, true];
        for (idx, k) in [I::one(), int(2)].into_iter().enumerate() {
            let mut reached = false;
            for n in range_incl(&lo, &hi) {
                let rn = self.r(&n);
                if rn >= k {
                    reached = true;
                } else if reached {
                    ok[idx] = false;
                    break;
                }
            }
            if reached && self.rho < k {
                ok[idx] = false;
            }
        }
        (ok[0], ok[0] && ok[1])
    }

    /// Pointwise scaling of the second difference by `k > 0`; scales rank,
    /// intercept and all values by `k`.
    pub fn scale(&self, k: &I) -> Self {
        assert!(k.is_positive(), "scale factor must be positive");
        FdhFunction {
            diff: self.diff.scale(k),
            rho: self.rho.clone() * k.clone(),
            sigma: self.sigma.clone() * k.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn seq(pairs: &[(i64, i64)]) -> SupportSeq<i64> {
        SupportSeq::from_pairs(pairs.iter().copied())
    }

    fn fdh(a: &[(i64, i64)], b: &[(i64, i64)]) -> FdhFunction<i64> {
        FdhFunction::from_presentation(&seq(a), &seq(b)).expect("valid presentation")
    }

    /// `a = {0:4}, b = {1:1}`: rank 3, intercept 4. Used throughout the
    /// crate as the canonical rank-3 example.
    pub(crate) fn example_a() -> FdhFunction<i64> {
        fdh(&[(0, 4)], &[(1, 1)])
    }

    #[test]
    fn presentation_sums() {
        let f = example_a();
        assert_eq!(*f.rank(), 3);
        assert_eq!(*f.sigma(), 4);
        assert_eq!(f.h(&-1), 0);
        assert_eq!(f.h(&0), 4);
        assert_eq!(f.h(&1), 7);
        assert_eq!(f.h(&5), 19); // 3*5 + 4
        assert_eq!(f.r(&0), 4);
        assert_eq!(f.r(&-10), 0);
        assert_eq!(f.r(&10), 3);
    }

    #[test]
    fn empty_presentation_is_zero() {
        let f = fdh(&[], &[]);
        assert!(f.is_zero());
        assert_eq!(f.rank_degree(), (0, 0));
        assert_eq!(f.h(&7), 0);
        assert_eq!(f.deficiency(), Ok(0));
    }

    #[test]
    fn negative_partial_sum_is_rejected() {
        let err = FdhFunction::from_presentation(&seq(&[(0, 1)]), &seq(&[(0, 2)]));
        assert_eq!(err, Err(Error::NotFdh { n: 0, partial_sum: -1 }));
    }

    #[test]
    fn hilbert_window_of_structure_sheaf() {
        let values: Vec<(i64, i64)> = vec![(-1, 0), (0, 1), (1, 3), (2, 6), (3, 10)];
        let f = FdhFunction::from_hilbert_window(&values).unwrap();
        assert_eq!(f.diff(), &seq(&[(0, 1)]));
        assert_eq!(*f.rank(), 1);
        assert_eq!(*f.sigma(), 1);
    }

    #[test]
    fn hilbert_window_matches_presentation() {
        let values: Vec<(i64, i64)> = vec![(-1, 0), (0, 4), (1, 11), (2, 21), (3, 34)];
        let f = FdhFunction::from_hilbert_window(&values).unwrap();
        assert_eq!(f, example_a());
        assert_eq!(f.diff(), &seq(&[(0, 4), (1, -1)]));
    }

    #[test]
    fn narrow_window_is_rejected() {
        let err = FdhFunction::from_hilbert_window(&[(0, 1), (1, 3)]);
        assert_eq!(err, Err(Error::WindowTooNarrow { boundary: 0 }));
        let err = FdhFunction::from_hilbert_window(&[(0i64, 0), (1, 1), (2, 4)]);
        assert_eq!(err, Err(Error::WindowTooNarrow { boundary: 2 }));
    }

    #[test]
    fn non_consecutive_window_is_rejected() {
        let err = FdhFunction::from_hilbert_window(&[(0, 0), (2, 1)]);
        assert_eq!(err, Err(Error::NonConsecutiveWindow { expected: 1, found: 2 }));
    }

    #[test]
    fn rank_degree_examples() {
        assert_eq!(example_a().rank_degree(), (3, 1));
        let cubic = fdh(&[(0, 1)], &[(3, 1)]);
        assert_eq!(cubic.rank_degree(), (0, 3));
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(example_a().deficiency(), Ok(1));
        let planes = fdh(&[(0, 2)], &[]);
        assert_eq!(planes.deficiency(), Ok(0));
        let cubic = fdh(&[(0, 1)], &[(3, 1)]);
        assert_eq!(cubic.deficiency(), Err(Error::DeficiencyUndefinedForTorsion));
    }

    #[test]
    fn deficiency_of_wide_rank_one() {
        // r jumps to 100 then settles at 1; the positive part of the tail
        // line reaches far below the support window.
        let f = fdh(&[(0, 100)], &[(1, 99)]);
        assert_eq!(f.rank_degree(), (1, 99));
        assert_eq!(f.deficiency(), Ok(4950));
    }

    #[test]
    fn filterability_scan() {
        let f = fdh(&[(0, 1), (2, 2)], &[(3, 1)]);
        assert!(f.is_filterable_at(&1)); // r(1) = 1, later r in {3, 2}
        assert!(!f.is_filterable_at(&2)); // r(2) = 3 > rho = 2
        assert!(f.is_filterable_at(&-5));
        assert!(f.is_filterable_at(&3));
    }

    #[test]
    fn classify_smooth_curve() {
        let c = fdh(&[(0, 1)], &[(3, 1)]).classify();
        assert!(c.is_torsion && c.is_unfilterable);
        assert!(!c.is_torsion_free);
        assert_eq!(c.chang_description, ChangDescription::LineBundleOnSmoothCurve);
    }

    #[test]
    fn classify_nodal_curve() {
        // r returns to zero in the middle, so the curve splits.
        let c = fdh(&[(0, 1), (3, 1)], &[(2, 1), (5, 1)]).classify();
        assert!(c.is_torsion && !c.is_unfilterable);
        assert_eq!(c.chang_description, ChangDescription::LineBundleOnNodalCurve);
    }

    #[test]
    fn classify_locally_free() {
        let c = fdh(&[(0, 2)], &[]).classify();
        assert!(c.is_torsion_free && c.is_locally_free);
        assert_eq!(c.chang_description, ChangDescription::LocallyFree);
    }

    #[test]
    fn classify_rank_drop_above_two_stays_locally_free() {
        // r = 4 then 3: never drops below 2, so the function is locally
        // free; the generic cokernel is a direct sum of line and tangent
        // twists.
        let c = example_a().classify();
        assert!(c.is_torsion_free);
        assert!(c.is_locally_free);
        assert_eq!(c.chang_description, ChangDescription::LocallyFree);
    }

    #[test]
    fn classify_ideal_sheaf_is_singular() {
        // Twisted ideal sheaf of a point: r = 2 then 1.
        let c = fdh(&[(0, 2)], &[(1, 1)]).classify();
        assert!(c.is_torsion_free);
        assert!(!c.is_locally_free);
        assert_eq!(c.chang_description, ChangDescription::TorsionFreeMult1Sing);
    }

    #[test]
    fn classify_zero() {
        let c = FdhFunction::<i64>::zero().classify();
        assert!(c.is_torsion && c.is_unfilterable);
        assert_eq!(c.chang_description, ChangDescription::None);
    }

    #[test]
    fn bigint_instantiation() {
        use num_bigint::BigInt;
        let a = SupportSeq::from_pairs([(BigInt::from(0), BigInt::from(4))]);
        let b = SupportSeq::from_pairs([(BigInt::from(1), BigInt::from(1))]);
        let f = FdhFunction::from_presentation(&a, &b).unwrap();
        assert_eq!(*f.rank(), BigInt::from(3));
        assert_eq!(f.h(&BigInt::from(5)), BigInt::from(19));
    }
}
