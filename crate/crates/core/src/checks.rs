//! The composite per-instance check suite.
//!
//! [`check_instance`] runs every invariant the crate promises on one
//! presentation: agreement of the two breakpoint routes, the envelope
//! laws, the graded-piece and rank-one structure, the order chain, and all
//! model certificates. Failures are collected as named items rather than
//! panics so the differential verifier can aggregate and shrink them.

use crate::fdh::FdhFunction;
use crate::filtration::{
    check_order_chain, check_trivial_whn, rank_one_decompose, whn_graded_with, RankOnePiece,
    WhnGraded,
};
use crate::scalar::{int, range_incl, Int};
use crate::sheaf_model::{
    build_model, ext1_restriction_certificates, hn_compatibility_report,
    hom_vanishing_certificates, resolution_reassembly_check,
};
use crate::support::SupportSeq;
use crate::whn::{check_envelope, whn_effective, whn_reference, WhnResult};

/// One named check with an optional failure detail.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

/// All checks run on a single instance.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    fn push(&mut self, name: &'static str, pass: bool, detail: Option<String>) {
        self.items.push(CheckItem { name, pass, detail });
    }

    fn push_ok(&mut self, name: &'static str) {
        self.push(name, true, None);
    }

    fn push_fail(&mut self, name: &'static str, detail: String) {
        self.push(name, false, Some(detail));
    }
}

/// Evaluation window `[lo - 2, hi + 2]` of a function, with a tiny default
/// for the zero function.
fn value_window<I: Int>(f: &FdhFunction<I>) -> (I, I) {
    match f.window() {
        Some((lo, hi)) => (lo - int(2), hi + int(2)),
        None => (int(-2), int(2)),
    }
}

/// Runs the whole suite on the presentation `(a, b)`.
pub fn check_instance<I: Int>(a: &SupportSeq<I>, b: &SupportSeq<I>) -> CheckReport {
    let mut report = CheckReport::default();
    let f = match FdhFunction::from_presentation(a, b) {
        Ok(f) => {
            report.push_ok("valid_input");
            f
        }
        Err(e) => {
            report.push_fail("valid_input", e.to_string());
            return report;
        }
    };

    // The central differential test: effective recursion vs definitional
    // scan, field by field.
    let reference = whn_reference(&f);
    let effective = whn_effective(&f);
    if effective == reference {
        report.push_ok("oracle_equivalence");
    } else {
        report.push_fail(
            "oracle_equivalence",
            format!("effective {effective:?} != reference {reference:?}"),
        );
    }

    match reference.validate(&f) {
        Ok(()) => report.push_ok("whn_invariants"),
        Err(e) => report.push_fail("whn_invariants", e),
    }

    check_envelope_clauses(&f, &reference, &mut report);
    check_scaling(&f, &reference, &mut report);

    let graded = whn_graded_with(&f, &reference);
    check_graded(&f, &reference, &graded, &mut report);

    let decomposed = check_rank_one(&graded, &mut report);

    match check_order_chain(&decomposed).pass() {
        true => report.push_ok("order_chain"),
        false => report.push_fail("order_chain", "slope order chain broken".into()),
    }

    let model = build_model(&graded, &decomposed);
    check_model(&f, &graded, &decomposed, &model, &mut report);

    let hom = hom_vanishing_certificates(&model);
    let hom_ok = hom.iter().all(|c| c.pass);
    let zero_twist_witnessed = hom
        .iter()
        .filter(|c| c.twist.is_zero() && c.kind == crate::sheaf_model::CertificateKind::HomVanishing)
        .all(|c| c.pass);
    if hom_ok && zero_twist_witnessed {
        report.push_ok("hom_vanishing");
    } else {
        let failing: Vec<String> = hom
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{:?}->{:?} twist {}", c.source, c.target, c.twist))
            .collect();
        report.push_fail("hom_vanishing", failing.join("; "));
    }

    let ext1 = ext1_restriction_certificates(&model);
    if ext1.iter().all(|c| c.pass) {
        report.push_ok("ext1_restriction");
    } else {
        report.push_fail("ext1_restriction", "some restriction twist below -1".into());
    }

    if hn_compatibility_report(&model, &decomposed).pass() {
        report.push_ok("hn_compatibility");
    } else {
        report.push_fail("hn_compatibility", "slope window or chain failure".into());
    }

    let reassembly = resolution_reassembly_check(a, b, &reference.taus);
    if reassembly.pass {
        report.push_ok("resolution_reassembly");
    } else {
        report.push_fail("resolution_reassembly", "partition does not reassemble".into());
    }

    report
}

fn check_envelope_clauses<I: Int>(
    f: &FdhFunction<I>,
    w: &WhnResult<I>,
    report: &mut CheckReport,
) {
    for clause in check_envelope(f, w).clauses {
        // Clause names are static; keep them distinct per clause.
        let name = match clause.clause.name() {
            "bounds" => "envelope_bounds",
            "argmax_growth" => "envelope_argmax_growth",
            "argmax_monotone" => "envelope_argmax_monotone",
            "interval_characterization" => "envelope_interval_characterization",
            "segment_dominance" => "envelope_segment_dominance",
            "lower_tail" => "envelope_lower_tail",
            _ => "envelope_upper_tail",
        };
        report.push(name, clause.pass, clause.detail);
    }
}

/// Scaling the difference by a positive constant scales values and ranks
/// but leaves breakpoints and thresholds alone.
fn check_scaling<I: Int>(f: &FdhFunction<I>, w: &WhnResult<I>, report: &mut CheckReport) {
    let k = int::<I>(2);
    let scaled = whn_reference(&f.scale(&k));
    let expected = WhnResult {
        taus: w.taus.clone(),
        nus: w.nus.clone(),
        rhos: w.rhos.iter().map(|r| r.clone() * k.clone()).collect(),
        betas: w.betas.iter().map(|b| b.clone() * k.clone()).collect(),
        torsion_constant: w.torsion_constant.clone() * k.clone(),
    };
    if scaled == expected {
        report.push_ok("scaling_invariance");
    } else {
        report.push_fail(
            "scaling_invariance",
            format!("doubled input gave {scaled:?}, expected {expected:?}"),
        );
    }
}

fn check_graded<I: Int>(
    f: &FdhFunction<I>,
    w: &WhnResult<I>,
    graded: &WhnGraded<I>,
    report: &mut CheckReport,
) {
    // Pointwise additivity plus rank and degree bookkeeping (the torsion
    // piece contributes its constant as degree).
    let (from, to) = value_window(f);
    let mut ok = true;
    let mut detail = None;
    for n in range_incl(&from, &to) {
        let mut total = graded.torsion.fdh.h(&n);
        for piece in &graded.pieces {
            total = total + piece.fdh.h(&n);
        }
        if total != f.h(&n) {
            ok = false;
            detail = Some(format!("sum of pieces at n = {n} is {total}, expected {}", f.h(&n)));
            break;
        }
    }
    if ok {
        let mut rank = graded.torsion.fdh.rank().clone();
        let mut degree = graded.torsion.curve_degree();
        for piece in &graded.pieces {
            rank = rank + piece.fdh.rank().clone();
            degree = degree + piece.fdh.degree();
        }
        if rank != *f.rank() || degree != f.degree() {
            ok = false;
            detail = Some(format!(
                "piece totals (rank {rank}, degree {degree}) != ({}, {})",
                f.rank(),
                f.degree()
            ));
        }
    }
    report.push("graded_additivity", ok, detail);

    // The piece differences partition the input difference.
    let mut rebuilt = SupportSeq::zero();
    for piece in std::iter::once(&graded.torsion).chain(&graded.pieces) {
        for (n, v) in piece.fdh.diff().iter() {
            rebuilt.add(n.clone(), v.clone());
        }
    }
    if rebuilt == *f.diff() {
        report.push_ok("resolution_partition");
    } else {
        report.push_fail(
            "resolution_partition",
            format!("piece differences rebuild {rebuilt}, expected {}", f.diff()),
        );
    }

    // Torsion piece really is torsion; it vanishes for torsion-free input.
    let torsion_ok = graded.torsion.fdh.rank().is_zero()
        && (!f.classify().is_torsion_free || graded.torsion.fdh.is_zero())
        && graded.torsion.curve_degree() == w.torsion_constant;
    report.push(
        "torsion_piece",
        torsion_ok,
        (!torsion_ok).then(|| "torsion piece malformed".to_string()),
    );

    // Each later piece is torsion-free with the trivial two-value argmax.
    let mut ok = true;
    let mut detail = None;
    for (i, piece) in graded.pieces.iter().enumerate() {
        if !piece.fdh.classify().is_torsion_free {
            ok = false;
            detail = Some(format!("piece {} is not torsion-free", i + 1));
            break;
        }
        if !check_trivial_whn(piece) {
            ok = false;
            detail = Some(format!("piece {} has a nontrivial filtration", i + 1));
            break;
        }
    }
    report.push("trivial_whn", ok, detail);
}

fn check_rank_one<I: Int>(
    graded: &WhnGraded<I>,
    report: &mut CheckReport,
) -> Vec<Vec<RankOnePiece<I>>> {
    let mut decomposed = Vec::with_capacity(graded.pieces.len());
    let mut sum_ok = true;
    let mut shape_ok = true;
    let mut deficiency_ok = true;
    let mut detail_sum = None;
    let mut detail_shape = None;
    let mut detail_def = None;

    for (i, piece) in graded.pieces.iter().enumerate() {
        let summands = match rank_one_decompose(piece) {
            Ok(s) => s,
            Err(e) => {
                report.push_fail("rank_one_sum", format!("piece {}: {e}", i + 1));
                report.push("rank_one_rank_degree", false, None);
                report.push("rank_one_deficiency", false, None);
                decomposed.push(Vec::new());
                continue;
            }
        };
        let nu = piece.nu.clone().expect("torsion-free piece has nu");
        let beta = piece
            .beta
            .clone()
            .expect("torsion-free piece has beta")
            .to_usize()
            .expect("beta fits usize");

        // Summands add up to the piece everywhere.
        let (from, to) = value_window(&piece.fdh);
        for n in range_incl(&from, &to) {
            let total = summands
                .iter()
                .fold(I::zero(), |acc, s| acc + s.fdh.h(&n));
            if total != piece.fdh.h(&n) {
                sum_ok = false;
                detail_sum = Some(format!("piece {} summands differ at n = {n}", i + 1));
                break;
            }
        }

        // Rank one, degrees on the two allowed twists, strictly increasing
        // where positive.
        for (j, s) in summands.iter().enumerate() {
            if !(s.fdh.rank().clone() == I::one()) {
                shape_ok = false;
                detail_shape = Some(format!("summand ({}, {}) has rank {}", i + 1, j + 1, s.fdh.rank()));
                break;
            }
            let expected_degree = if j < beta {
                -nu.clone()
            } else {
                -nu.clone() - I::one()
            };
            if s.degree != expected_degree {
                shape_ok = false;
                detail_shape = Some(format!(
                    "summand ({}, {}) has degree {}, expected {expected_degree}",
                    i + 1,
                    j + 1,
                    s.degree
                ));
                break;
            }
            let (s_from, s_to) = value_window(&s.fdh);
            for n in range_incl(&s_from, &s_to) {
                let here = s.fdh.h(&n);
                let prev = s.fdh.h(&(n.clone() - I::one()));
                if here.is_positive() && here <= prev {
                    shape_ok = false;
                    detail_shape =
                        Some(format!("summand ({}, {}) stalls at n = {n}", i + 1, j + 1));
                    break;
                }
            }
            if !shape_ok {
                break;
            }
        }

        // Deficiencies: nonnegative, positive on the higher twist, and
        // eta <= zeta.
        for (j, s) in summands.iter().enumerate() {
            let recomputed = match s.fdh.deficiency() {
                Ok(d) => d,
                Err(e) => {
                    deficiency_ok = false;
                    detail_def = Some(format!("summand ({}, {}): {e}", i + 1, j + 1));
                    break;
                }
            };
            if recomputed != s.deficiency || s.deficiency.is_negative() {
                deficiency_ok = false;
                detail_def = Some(format!("summand ({}, {}) deficiency mismatch", i + 1, j + 1));
                break;
            }
            if j < beta && !s.deficiency.is_positive() {
                deficiency_ok = false;
                detail_def = Some(format!(
                    "summand ({}, {}) on the higher twist must have points",
                    i + 1,
                    j + 1
                ));
                break;
            }
            if s.eta > s.zeta {
                deficiency_ok = false;
                detail_def = Some(format!("summand ({}, {}) has eta > zeta", i + 1, j + 1));
                break;
            }
        }

        decomposed.push(summands);
    }

    report.push("rank_one_sum", sum_ok, detail_sum);
    report.push("rank_one_rank_degree", shape_ok, detail_shape);
    report.push("rank_one_deficiency", deficiency_ok, detail_def);
    decomposed
}

fn check_model<I: Int>(
    f: &FdhFunction<I>,
    graded: &WhnGraded<I>,
    decomposed: &[Vec<RankOnePiece<I>>],
    model: &crate::sheaf_model::ModelSheaf<I>,
    report: &mut CheckReport,
) {
    let mut ok = true;
    let mut detail = None;

    // Rank and degree reconcile with the model twists.
    let mut rank = I::zero();
    let mut degree = model.torsion.clone().unwrap_or_else(I::zero);
    for group in &model.groups {
        let beta = group.beta();
        let rho = group.rank();
        rank = rank + rho.clone();
        degree = degree
            + beta.clone() * (-group.nu.clone())
            + (rho - beta) * (-group.nu.clone() - I::one());
    }
    if rank != *f.rank() || degree != f.degree() {
        ok = false;
        detail = Some(format!(
            "model totals (rank {rank}, degree {degree}) != ({}, {})",
            f.rank(),
            f.degree()
        ));
    }

    // Point counts are the recomputed summand deficiencies, positive on the
    // higher twist; group nus strictly increase.
    if ok {
        'outer: for (g, (group, summands)) in model.groups.iter().zip(decomposed).enumerate() {
            let high = -group.nu.clone();
            for (j, (mp, s)) in group.pieces.iter().zip(summands).enumerate() {
                if mp.points != s.fdh.deficiency().unwrap_or_else(|_| -I::one()) {
                    ok = false;
                    detail = Some(format!("model points differ at ({}, {})", g + 1, j + 1));
                    break 'outer;
                }
                if mp.twist == high && !mp.points.is_positive() {
                    ok = false;
                    detail = Some(format!("higher-twist piece ({}, {}) has no points", g + 1, j + 1));
                    break 'outer;
                }
            }
        }
    }
    if ok {
        for w in model.groups.windows(2) {
            if w[0].nu >= w[1].nu {
                ok = false;
                detail = Some("group nus not strictly increasing".into());
                break;
            }
        }
    }
    if ok && model.torsion.is_some() != !graded.torsion.fdh.is_zero() {
        ok = false;
        detail = Some("torsion component presence mismatch".into());
    }
    if ok {
        if let Some(d) = &model.torsion {
            if !d.is_positive() {
                ok = false;
                detail = Some(format!("torsion curve degree {d} must be >= 1"));
            }
        }
    }
    report.push("model_reconciliation", ok, detail);
}
