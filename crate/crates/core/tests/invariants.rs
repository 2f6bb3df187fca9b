//! Property tests over randomized difference profiles.

use proptest::prelude::*;

use whnfilt_core::corpus::RSample;
use whnfilt_core::fdh::FdhFunction;
use whnfilt_core::filtration::{split_at, whn_graded};
use whnfilt_core::scalar::range_incl;
use whnfilt_core::support::SupportSeq;
use whnfilt_core::whn::{whn_effective, whn_reference};

/// Valid instances by construction: a nonnegative difference profile.
fn profiles() -> impl Strategy<Value = RSample<i64>> {
    (
        -8i64..=8,
        prop::collection::vec(0i64..=6, 0..8),
        0i64..=6,
    )
        .prop_map(|(start, steps, tail)| RSample { start, steps, tail })
}

proptest! {
    #[test]
    fn difference_laws(sample in profiles()) {
        let f = sample.fdh();
        let (from, to) = match f.window() {
            Some((lo, hi)) => (lo - 2, hi + 2),
            None => (-2, 2),
        };
        for n in range_incl(&from, &to) {
            let h = f.h(&n);
            let r = f.r(&n);
            prop_assert!(h >= 0);
            prop_assert!(r >= 0);
            prop_assert_eq!(h - f.h(&(n - 1)), r);
            prop_assert_eq!(r - f.r(&(n - 1)), f.diff().get(&n));
        }
        prop_assert!(f.is_filterable_at(&(from - 1)));
        prop_assert!(f.is_filterable_at(&to));
    }

    #[test]
    fn classification_implications(sample in profiles()) {
        let f = sample.fdh();
        let c = f.classify();
        prop_assert_eq!(c.is_torsion, *f.rank() == 0);
        prop_assert!(!c.is_locally_free || c.is_torsion_free);
        if c.is_torsion && !f.is_zero() {
            prop_assert!(f.deficiency().is_err());
        } else {
            // Finite for positive rank; the sign is only constrained for
            // rank-one summands (checked in the rank-one suite), since
            // unbalanced sums like O + O(-2)^4 go negative.
            prop_assert!(f.deficiency().is_ok());
        }
    }

    /// Triple-summing the difference reproduces a Hilbert window that
    /// parses back to the same function.
    #[test]
    fn hilbert_round_trip(sample in profiles()) {
        let f = sample.fdh();
        let (lo, hi) = match f.window() {
            Some(w) => w,
            None => return Ok(()),
        };
        let mut values = Vec::new();
        let mut acc = 0i64;
        for n in range_incl(&(lo - 1), &(hi + 2)) {
            acc += f.h(&n);
            values.push((n, acc));
        }
        let parsed = FdhFunction::from_hilbert_window(&values).unwrap();
        prop_assert_eq!(parsed, f);
    }

    /// Rank, degree and deficiency see only the difference a - b, not the
    /// particular split: padding both sides with a common overlap changes
    /// nothing.
    #[test]
    fn presentation_split_invariance(sample in profiles(), pad in 1i64..=3, at in -6i64..=6) {
        let (a, b) = sample.presentation();
        let f = FdhFunction::from_presentation(&a, &b).unwrap();
        let mut a2 = a.clone();
        let mut b2 = b.clone();
        a2.add(at, pad);
        b2.add(at, pad);
        let g = FdhFunction::from_presentation(&a2, &b2).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(g.rank_degree(), f.rank_degree());
        prop_assert_eq!(g.deficiency().ok(), f.deficiency().ok());
    }

    #[test]
    fn oracle_equivalence(sample in profiles()) {
        let f = sample.fdh();
        prop_assert_eq!(whn_effective(&f), whn_reference(&f));
    }

    /// Splitting at any set of filterable points is additive, and splitting
    /// in two stages agrees with splitting at the union of the points.
    #[test]
    fn split_additivity_and_refinement(sample in profiles(), picks in prop::collection::vec(any::<bool>(), 24)) {
        let f = sample.fdh();
        let (lo, hi) = match f.window() {
            Some(w) => w,
            None => return Ok(()),
        };
        let candidates: Vec<i64> = range_incl(&(lo - 1), &(hi + 1))
            .filter(|m| f.is_filterable_at(m))
            .collect();
        let points: Vec<i64> = candidates
            .iter()
            .zip(&picks)
            .filter(|(_, keep)| **keep)
            .map(|(m, _)| *m)
            .collect();
        let pieces = split_at(&f, &points).unwrap();
        prop_assert_eq!(pieces.len(), points.len() + 1);
        for n in range_incl(&(lo - 2), &(hi + 2)) {
            let total: i64 = pieces.iter().map(|p| p.fdh.h(&n)).sum();
            prop_assert_eq!(total, f.h(&n));
        }
        let mut rebuilt = SupportSeq::zero();
        for p in &pieces {
            for (n, v) in p.fdh.diff().iter() {
                rebuilt.add(*n, *v);
            }
        }
        prop_assert_eq!(&rebuilt, f.diff());

        // Two-stage refinement: cut at the first point, then at the rest.
        if let Some((first, rest)) = points.split_first() {
            let coarse = split_at(&f, &[*first]).unwrap();
            let refined = split_at(&coarse[1].fdh, rest).unwrap();
            prop_assert_eq!(&coarse[0].fdh, &pieces[0].fdh);
            for (i, piece) in refined.iter().enumerate() {
                prop_assert_eq!(&piece.fdh, &pieces[i + 1].fdh);
            }
        }
    }

    /// The graded pieces of the filtration are supported on the breakpoint
    /// intervals of the input presentation.
    #[test]
    fn graded_pieces_partition_presentation(sample in profiles()) {
        let (a, b) = sample.presentation();
        let f = FdhFunction::from_presentation(&a, &b).unwrap();
        let graded = whn_graded(&f);
        let mut total_rank = graded.torsion.fdh.rank().clone();
        for p in &graded.pieces {
            prop_assert!(p.fdh.rank() > &0);
            total_rank += *p.fdh.rank();
        }
        prop_assert_eq!(&total_rank, f.rank());
    }

    #[test]
    fn scaling_invariance(sample in profiles(), k in 2i64..=4) {
        let f = sample.fdh();
        let w = whn_reference(&f);
        let scaled = whn_reference(&f.scale(&k));
        prop_assert_eq!(scaled.taus, w.taus);
        prop_assert_eq!(scaled.nus, w.nus);
    }
}
