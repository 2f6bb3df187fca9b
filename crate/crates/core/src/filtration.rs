//! Splitting a function at filtration points and decomposing the pieces.
//!
//! Splitting restricts the second difference to the interval between
//! consecutive split points; the pieces are again valid functions whenever
//! the original is filterable at every point. Applied at the breakpoints of
//! [`crate::whn::whn_effective`] this yields the graded pieces of the weak
//! Harder-Narasimhan filtration: one torsion piece (possibly zero) and
//! torsion-free pieces whose envelope argmax takes exactly two values.
//! Each torsion-free piece further decomposes into rank-one summands with
//! degrees concentrated on two consecutive twists, and those summands form
//! a chain under the slope order.

use std::fmt;

use crate::error::Error;
use crate::fdh::FdhFunction;
use crate::scalar::{int, range_incl, Int};
use crate::support::SupportSeq;
use crate::whn::{whn_effective, whn_reference, ExtInt, WhnResult};

/// A graded piece of a filtration: the function supported on the interval
/// `(lower, upper]` of the second difference.
///
/// `nu` and `beta` are the normalized tail data `h(n) = rho (n - nu) + beta`
/// with `0 <= beta < rho`, present for pieces of positive rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece<I: Int> {
    pub fdh: FdhFunction<I>,
    pub interval: (ExtInt<I>, ExtInt<I>),
    pub nu: Option<I>,
    pub rho: I,
    pub beta: Option<I>,
}

impl<I: Int> GradedPiece<I> {
    fn new(fdh: FdhFunction<I>, interval: (ExtInt<I>, ExtInt<I>)) -> Self {
        let rho = fdh.rank().clone();
        let (nu, beta) = if rho.is_positive() {
            let (nu, beta) = normalized_tail(&fdh);
            (Some(nu), Some(beta))
        } else {
            (None, None)
        };
        GradedPiece {
            fdh,
            interval,
            nu,
            rho,
            beta,
        }
    }

    /// Constant value of a rank-0 piece; its curve degree.
    pub fn curve_degree(&self) -> I {
        debug_assert!(self.rho.is_zero());
        self.fdh.sigma().clone()
    }
}

/// Tail normalization `h(n) = rho (n - nu) + beta`, `0 <= beta < rho`, for
/// positive rank.
fn normalized_tail<I: Int>(f: &FdhFunction<I>) -> (I, I) {
    let rho = f.rank().clone();
    let nu = (-f.sigma().clone()).div_ceil(&rho);
    let beta = rho * nu.clone() + f.sigma().clone();
    (nu, beta)
}

/// Splits `f` at an ascending list of points, returning `points.len() + 1`
/// pieces whose second differences partition the original by the intervals
/// `(m_{i-1}, m_i]`.
pub fn split_at<I: Int>(
    f: &FdhFunction<I>,
    points: &[I],
) -> Result<Vec<GradedPiece<I>>, Error<I>> {
    for w in points.windows(2) {
        assert!(w[0] < w[1], "split points must be strictly ascending");
    }
    for m in points {
        if !f.is_filterable_at(m) {
            return Err(Error::NotFilterableAt { m: m.clone() });
        }
    }
    let mut pieces = Vec::with_capacity(points.len() + 1);
    let mut lower: Option<I> = None;
    for i in 0..=points.len() {
        let upper = points.get(i).cloned();
        let diff = f.diff().restrict(lower.as_ref(), upper.as_ref());
        let piece = FdhFunction::from_diff(diff)
            .expect("filterable split points keep partial sums nonnegative");
        let interval = (
            lower
                .clone()
                .map(ExtInt::Finite)
                .unwrap_or(ExtInt::NegInf),
            upper
                .clone()
                .map(ExtInt::Finite)
                .unwrap_or(ExtInt::PosInf),
        );
        pieces.push(GradedPiece::new(piece, interval));
        lower = upper;
    }
    Ok(pieces)
}

/// The graded pieces of the weak Harder-Narasimhan filtration: a torsion
/// piece (zero for torsion-free input, everything for rank-0 input) and
/// the torsion-free pieces in slope order, carrying their `nu_i`, `rho_i`,
/// `beta_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhnGraded<I: Int> {
    pub torsion: GradedPiece<I>,
    pub pieces: Vec<GradedPiece<I>>,
}

/// Splits `f` at the breakpoints recorded in `w`.
pub fn whn_graded_with<I: Int>(f: &FdhFunction<I>, w: &WhnResult<I>) -> WhnGraded<I> {
    let mut pieces = split_at(f, &w.taus).expect("breakpoints are filterable by construction");
    let torsion = pieces.remove(0);
    if w.taus.is_empty() {
        // Rank-0 input: the single piece is the torsion piece.
        debug_assert!(pieces.is_empty());
        debug_assert!(torsion.rho.is_zero());
        return WhnGraded { torsion, pieces };
    }
    for (i, piece) in pieces.iter_mut().enumerate() {
        debug_assert_eq!(piece.rho, w.rhos[i], "piece rank disagrees with r-jump");
        debug_assert_eq!(piece.nu.as_ref(), Some(&w.nus[i]), "normalized nu disagrees");
        debug_assert_eq!(piece.beta.as_ref(), Some(&w.betas[i]), "normalized beta disagrees");
        piece.nu = Some(w.nus[i].clone());
        piece.beta = Some(w.betas[i].clone());
        piece.rho = w.rhos[i].clone();
    }
    WhnGraded { torsion, pieces }
}

/// Splits `f` at the breakpoints of its weak Harder-Narasimhan filtration
/// (computed by the effective route).
pub fn whn_graded<I: Int>(f: &FdhFunction<I>) -> WhnGraded<I> {
    whn_graded_with(f, &whn_effective(f))
}

/// True when the piece is torsion-free and its own envelope argmax takes
/// exactly the two values `lower` (its interval bound) and `+inf`, switching
/// at its `nu`. Recomputed with the definitional scan.
pub fn check_trivial_whn<I: Int>(piece: &GradedPiece<I>) -> bool {
    if !piece.rho.is_positive() {
        return false;
    }
    let lower = match piece.interval.0.as_finite() {
        Some(m) => m.clone(),
        None => return false,
    };
    let expected_nu = match &piece.nu {
        Some(nu) => nu.clone(),
        None => normalized_tail(&piece.fdh).0,
    };
    let w = whn_reference(&piece.fdh);
    w.taus == vec![lower] && w.nus == vec![expected_nu]
}

/// A rank-one summand of a torsion-free graded piece.
///
/// `eta` is the first `n` where the summand is positive and `zeta` the
/// first where it reaches its linear ceiling; the degree is `-nu` for the
/// first `beta` summands and `-nu - 1` for the rest, and summands of degree
/// `-nu` have positive deficiency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOnePiece<I: Int> {
    pub fdh: FdhFunction<I>,
    pub degree: I,
    pub deficiency: I,
    pub eta: I,
    pub zeta: I,
}

/// Decomposes a torsion-free piece with trivial filtration into its
/// rank-one summands: the j-th summand is
/// `min { ceiling_j(n), (h(n) - sum of earlier ceilings)_+ }` where the
/// ceiling is `(n - nu + 1)_+` for `j <= beta` and `(n - nu)_+` after.
pub fn rank_one_decompose<I: Int>(
    piece: &GradedPiece<I>,
) -> Result<Vec<RankOnePiece<I>>, Error<I>> {
    if !check_trivial_whn(piece) {
        return Err(Error::NotTrivialWhn);
    }
    let f = &piece.fdh;
    let rho = piece.rho.clone();
    let count = rho.to_usize().expect("rank fits in usize");
    let nu = piece.nu.clone().expect("positive rank has nu");
    let beta = piece
        .beta
        .clone()
        .expect("positive rank has beta")
        .to_usize()
        .expect("beta fits in usize");

    let ceiling = |j: usize, n: &I| -> I {
        let shift = if j < beta { I::one() } else { I::zero() };
        let v = n.clone() - nu.clone() + shift;
        if v.is_negative() {
            I::zero()
        } else {
            v
        }
    };

    // From max(hi, nu + 1) on, h equals the sum of all ceilings, so every
    // summand is exactly its ceiling there.
    let hi = f.window().expect("positive rank has support").1;
    let mut stable = nu.clone() + I::one();
    if hi > stable {
        stable = hi;
    }
    let top = stable.clone() + int(2);

    let mut summands = Vec::with_capacity(count);
    let earlier = |n: &I, j: usize| -> I {
        (0..j).fold(I::zero(), |acc, k| acc + ceiling(k, n))
    };
    for j in 0..count {
        let mut values = Vec::new();
        for n in range_incl(&(nu.clone() - int(2)), &top) {
            let room = f.h(&n) - earlier(&n, j);
            let room = if room.is_negative() { I::zero() } else { room };
            let cj = ceiling(j, &n);
            let v = if cj < room { cj } else { room };
            values.push((n, v));
        }
        let fdh = fdh_from_value_window(&values);
        let degree = fdh.degree();
        let deficiency = fdh
            .deficiency()
            .expect("rank-one summands have defined deficiency");

        let mut eta = None;
        let mut zeta = None;
        for n in range_incl(&nu, &top) {
            if eta.is_none() && f.h(&n) > earlier(&n, j) {
                eta = Some(n.clone());
            }
            let through_j = earlier(&n, j + 1);
            if zeta.is_none() && through_j.is_positive() && f.h(&n) >= through_j {
                zeta = Some(n.clone());
            }
            if eta.is_some() && zeta.is_some() {
                break;
            }
        }
        summands.push(RankOnePiece {
            fdh,
            degree,
            deficiency,
            eta: eta.expect("summand becomes positive by the stable region"),
            zeta: zeta.expect("summand reaches its ceiling by the stable region"),
        });
    }
    Ok(summands)
}

/// Rebuilds a function from a window of its values, assumed zero below the
/// window and exactly linear at the top.
fn fdh_from_value_window<I: Int>(values: &[(I, I)]) -> FdhFunction<I> {
    let at = |k: i64| -> I {
        if k < 0 {
            I::zero()
        } else {
            values[k as usize].1.clone()
        }
    };
    let mut diff = SupportSeq::zero();
    let two: I = int(2);
    for k in 0..values.len() as i64 {
        let d2 = at(k) - two.clone() * at(k - 1) + at(k - 2);
        diff.add(values[k as usize].0.clone(), d2);
    }
    let f = FdhFunction::from_diff(diff).expect("windows of valid functions stay valid");
    debug_assert!(values.iter().all(|(n, v)| f.h(n) == *v));
    f
}

/// Total preorder on torsion-free functions of positive rank: slopes
/// `degree/rank` compared first, normalized deficiencies `deficiency/rank`
/// inversely second. All comparisons are cross-multiplied integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderRelation {
    StrictlyGreater,
    Equivalent,
    StrictlyLess,
}

impl OrderRelation {
    /// `left >= right` in the preorder.
    pub fn at_least(&self) -> bool {
        matches!(self, OrderRelation::StrictlyGreater | OrderRelation::Equivalent)
    }

    /// `left > right` in the preorder.
    pub fn strictly_greater(&self) -> bool {
        matches!(self, OrderRelation::StrictlyGreater)
    }
}

impl fmt::Display for OrderRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderRelation::StrictlyGreater => write!(f, ">"),
            OrderRelation::Equivalent => write!(f, "~"),
            OrderRelation::StrictlyLess => write!(f, "<"),
        }
    }
}

/// Compares two torsion-free functions of positive rank in the slope
/// order.
pub fn order_compare<I: Int>(
    f: &FdhFunction<I>,
    g: &FdhFunction<I>,
) -> Result<OrderRelation, Error<I>> {
    if f.rank().is_zero() || g.rank().is_zero() {
        return Err(Error::OrderUndefined);
    }
    let (rf, df) = f.rank_degree();
    let (rg, dg) = g.rank_degree();
    // d_f / r_f vs d_g / r_g with positive denominators.
    let lhs = df * rg.clone();
    let rhs = dg * rf.clone();
    if lhs != rhs {
        return Ok(if lhs > rhs {
            OrderRelation::StrictlyGreater
        } else {
            OrderRelation::StrictlyLess
        });
    }
    let def_f = f.deficiency()?;
    let def_g = g.deficiency()?;
    // Smaller normalized deficiency ranks higher.
    let lhs = def_f * rg;
    let rhs = def_g * rf;
    Ok(if lhs == rhs {
        OrderRelation::Equivalent
    } else if lhs < rhs {
        OrderRelation::StrictlyGreater
    } else {
        OrderRelation::StrictlyLess
    })
}

/// One comparison in the order chain across the rank-one summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComparison<I: Int> {
    /// `(group, summand)` coordinates, 1-based.
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub strict_required: bool,
    pub relation: Option<OrderRelation>,
    pub pass: bool,
    _marker: std::marker::PhantomData<I>,
}

/// Result of checking the order chain: within each group the summands are
/// nonincreasing, and the last summand of each group strictly dominates the
/// first of the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderChainReport<I: Int> {
    pub comparisons: Vec<OrderComparison<I>>,
}

impl<I: Int> OrderChainReport<I> {
    pub fn pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OrderComparison<I>> {
        self.comparisons.iter().filter(|c| !c.pass)
    }
}

/// Checks the slope-order chain over the decomposed groups of rank-one
/// summands.
pub fn check_order_chain<I: Int>(groups: &[Vec<RankOnePiece<I>>]) -> OrderChainReport<I> {
    let mut comparisons = Vec::new();
    let record = |left: (usize, usize),
                      right: (usize, usize),
                      strict: bool,
                      lhs: &RankOnePiece<I>,
                      rhs: &RankOnePiece<I>,
                      out: &mut Vec<OrderComparison<I>>| {
        let relation = order_compare(&lhs.fdh, &rhs.fdh).ok();
        let pass = relation
            .as_ref()
            .is_some_and(|r| if strict { r.strictly_greater() } else { r.at_least() });
        out.push(OrderComparison {
            left,
            right,
            strict_required: strict,
            relation,
            pass,
            _marker: std::marker::PhantomData,
        });
    };
    for (g, group) in groups.iter().enumerate() {
        for j in 1..group.len() {
            record(
                (g + 1, j),
                (g + 1, j + 1),
                false,
                &group[j - 1],
                &group[j],
                &mut comparisons,
            );
        }
        if g + 1 < groups.len() {
            let next = &groups[g + 1];
            if let (Some(last), Some(first)) = (group.last(), next.first()) {
                record(
                    (g + 1, group.len()),
                    (g + 2, 1),
                    true,
                    last,
                    first,
                    &mut comparisons,
                );
            }
        }
    }
    OrderChainReport { comparisons }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fdh(a: &[(i64, i64)], b: &[(i64, i64)]) -> FdhFunction<i64> {
        FdhFunction::from_presentation(
            &SupportSeq::from_pairs(a.iter().copied()),
            &SupportSeq::from_pairs(b.iter().copied()),
        )
        .expect("valid presentation")
    }

    fn example_a() -> FdhFunction<i64> {
        fdh(&[(0, 4)], &[(1, 1)])
    }

    fn example_b() -> FdhFunction<i64> {
        fdh(&[(0, 1), (2, 2)], &[(3, 1)])
    }

    #[test]
    fn split_two_step_example() {
        let f = example_b();
        let pieces = split_at(&f, &[-1, 1]).unwrap();
        assert_eq!(pieces.len(), 3);
        assert!(pieces[0].fdh.is_zero());
        // h_1(n) = (n+1)_+: rank 1, degree 0, deficiency 0.
        let h1 = &pieces[1].fdh;
        assert_eq!(h1.rank_degree(), (1, 0));
        assert_eq!(h1.deficiency(), Ok(0));
        assert_eq!(h1.h(&0), 1);
        assert_eq!(h1.h(&3), 4);
        // h_2(2) = 2, h_2(n) = n afterwards: rank 1, degree -1, deficiency 1.
        let h2 = &pieces[2].fdh;
        assert_eq!(h2.rank_degree(), (1, -1));
        assert_eq!(h2.deficiency(), Ok(1));
        assert_eq!(h2.h(&2), 2);
        assert_eq!(h2.h(&5), 5);
        // Pointwise additivity.
        for n in -3..8 {
            assert_eq!(
                pieces.iter().map(|p| p.fdh.h(&n)).sum::<i64>(),
                f.h(&n)
            );
        }
    }

    #[test]
    fn split_at_nothing_is_identity() {
        let f = example_a();
        let pieces = split_at(&f, &[]).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].fdh, f);
        assert_eq!(pieces[0].interval, (ExtInt::NegInf, ExtInt::PosInf));
    }

    #[test]
    fn split_below_support_gives_zero_head() {
        let f = example_a();
        let pieces = split_at(&f, &[-1]).unwrap();
        assert!(pieces[0].fdh.is_zero());
        assert_eq!(pieces[1].fdh, f);
    }

    #[test]
    fn split_rejects_bad_point() {
        let f = example_b();
        assert_eq!(split_at(&f, &[2]), Err(Error::NotFilterableAt { m: 2 }));
    }

    #[test]
    fn whn_graded_on_examples() {
        let g = whn_graded(&example_b());
        assert!(g.torsion.fdh.is_zero());
        assert_eq!(g.pieces.len(), 2);
        assert_eq!(g.pieces[0].nu, Some(-1));
        assert_eq!(g.pieces[0].rho, 1);
        assert_eq!(g.pieces[0].beta, Some(0));
        assert_eq!(g.pieces[1].nu, Some(0));
        assert_eq!(g.pieces[1].rho, 1);
        assert_eq!(g.pieces[1].beta, Some(0));

        let g = whn_graded(&example_a());
        assert_eq!(g.pieces.len(), 1);
        assert_eq!(g.pieces[0].nu, Some(-1));
        assert_eq!(g.pieces[0].rho, 3);
        assert_eq!(g.pieces[0].beta, Some(1));

        let g = whn_graded(&fdh(&[(0, 1)], &[(3, 1)]));
        assert!(g.pieces.is_empty());
        assert_eq!(g.torsion.curve_degree(), 3);
    }

    #[test]
    fn whn_pieces_have_trivial_filtrations() {
        for f in [example_a(), example_b(), fdh(&[(0, 2)], &[]), fdh(&[(0, 1), (2, 1)], &[])] {
            let g = whn_graded(&f);
            for piece in &g.pieces {
                assert!(check_trivial_whn(piece), "piece {:?}", piece.interval);
            }
        }
    }

    #[test]
    fn torsion_piece_fails_trivial_whn() {
        let g = whn_graded(&fdh(&[(0, 1)], &[(3, 1)]));
        assert!(!check_trivial_whn(&g.torsion));
        assert_eq!(rank_one_decompose(&g.torsion), Err(Error::NotTrivialWhn));
    }

    #[test]
    fn rank_one_on_example_a() {
        let g = whn_graded(&example_a());
        let summands = rank_one_decompose(&g.pieces[0]).unwrap();
        assert_eq!(summands.len(), 3);
        // deg 1 deficiency 1, then two plain deg-0 pieces.
        assert_eq!(summands[0].degree, 1);
        assert_eq!(summands[0].deficiency, 1);
        assert_eq!(summands[1].degree, 0);
        assert_eq!(summands[1].deficiency, 0);
        assert_eq!(summands[2].degree, 0);
        assert_eq!(summands[2].deficiency, 0);
        // Values at n = 0 split 4 = 2 + 1 + 1.
        assert_eq!(summands[0].fdh.h(&0), 2);
        assert_eq!(summands[1].fdh.h(&0), 1);
        assert_eq!(summands[2].fdh.h(&0), 1);
        assert_eq!(summands[0].eta, 0);
        assert_eq!(summands[0].zeta, 0);
    }

    #[test]
    fn rank_one_on_planes() {
        let g = whn_graded(&fdh(&[(0, 2)], &[]));
        let summands = rank_one_decompose(&g.pieces[0]).unwrap();
        assert_eq!(summands.len(), 2);
        for s in &summands {
            assert_eq!(s.degree, 0);
            assert_eq!(s.deficiency, 0);
        }
    }

    #[test]
    fn rank_one_on_second_piece_of_example_b() {
        let g = whn_graded(&example_b());
        let summands = rank_one_decompose(&g.pieces[1]).unwrap();
        assert_eq!(summands.len(), 1);
        assert_eq!(summands[0].degree, -1);
        assert_eq!(summands[0].deficiency, 1);
        assert_eq!(summands[0].eta, 2);
        assert_eq!(summands[0].zeta, 2);
    }

    #[test]
    fn rank_one_sums_to_piece() {
        for f in [example_a(), example_b(), fdh(&[(0, 1), (2, 1)], &[])] {
            let g = whn_graded(&f);
            for piece in &g.pieces {
                let summands = rank_one_decompose(piece).unwrap();
                for n in -5..10 {
                    let total: i64 = summands.iter().map(|s| s.fdh.h(&n)).sum();
                    assert_eq!(total, piece.fdh.h(&n));
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let i_pt_1 = fdh(&[(0, 2)], &[(1, 1)]); // rank 1, degree 1, deficiency 1
        let o = fdh(&[(0, 1)], &[]); // rank 1, degree 0, deficiency 0
        assert_eq!(order_compare(&i_pt_1, &o), Ok(OrderRelation::StrictlyGreater));
        assert_eq!(order_compare(&o, &o), Ok(OrderRelation::Equivalent));
        let minus = fdh(&[(2, 2)], &[(3, 1)]); // rank 1, degree -1, deficiency 1
        assert_eq!(order_compare(&o, &minus), Ok(OrderRelation::StrictlyGreater));
        let torsion = fdh(&[(0, 1)], &[(3, 1)]);
        assert_eq!(order_compare(&torsion, &o), Err(Error::OrderUndefined));
    }

    #[test]
    fn deficiency_breaks_order_ties() {
        let o = fdh(&[(0, 1)], &[]);
        // Plane plus point ideal: slope 0 like o, but deficiency 1 per rank 2.
        let heavier = fdh(&[(0, 1), (1, 2)], &[(2, 1)]);
        assert_eq!(heavier.rank_degree(), (2, 0));
        assert_eq!(heavier.deficiency(), Ok(1));
        assert_eq!(order_compare(&o, &heavier), Ok(OrderRelation::StrictlyGreater));
        assert_eq!(order_compare(&heavier, &o), Ok(OrderRelation::StrictlyLess));
    }

    #[test]
    fn order_chain_on_examples() {
        let g = whn_graded(&example_a());
        let groups: Vec<_> = g
            .pieces
            .iter()
            .map(|p| rank_one_decompose(p).unwrap())
            .collect();
        let report = check_order_chain(&groups);
        assert!(report.pass());
        assert_eq!(report.comparisons.len(), 2);

        let g = whn_graded(&example_b());
        let groups: Vec<_> = g
            .pieces
            .iter()
            .map(|p| rank_one_decompose(p).unwrap())
            .collect();
        let report = check_order_chain(&groups);
        assert!(report.pass());
        assert_eq!(report.comparisons.len(), 1);
        assert!(report.comparisons[0].strict_required);

        assert!(check_order_chain::<i64>(&[vec![]]).pass());
    }

    #[test]
    fn split_idempotence() {
        // Splitting at [-1, 1] directly agrees with splitting at [-1] and
        // then cutting the upper piece at 1.
        let f = example_b();
        let direct = split_at(&f, &[-1, 1]).unwrap();
        let coarse = split_at(&f, &[-1]).unwrap();
        let refined = split_at(&coarse[1].fdh, &[1]).unwrap();
        assert_eq!(direct[1].fdh, refined[0].fdh);
        assert_eq!(direct[2].fdh, refined[1].fdh);
    }
}
