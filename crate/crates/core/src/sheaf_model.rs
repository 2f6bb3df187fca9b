//! The split model sheaf and its integer certificates.
//!
//! Every function admits a model sheaf that is a direct sum of twisted
//! ideal sheaves of general points (one summand per rank-one piece, twist
//! equal to the degree, point count equal to the deficiency) plus a line
//! bundle on a curve for the torsion piece. All the vanishing statements
//! needed by the main structure theorem reduce, on this model, to integer
//! inequalities on twists and point counts; the certificate ops record each
//! inequality explicitly so a report is self-evidencing.
//!
//! Point sets are modeled by cardinality only; disjointness and general
//! position are assumptions of the model, not data.

use crate::filtration::{check_order_chain, OrderChainReport, RankOnePiece, WhnGraded};
use crate::scalar::Int;
use crate::support::SupportSeq;
use crate::whn::ExtInt;

/// One twisted ideal-sheaf summand: `points` general points, twisted by
/// `twist`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPiece<I: Int> {
    pub twist: I,
    pub points: I,
}

/// The summands realizing one torsion-free graded piece: `beta` summands of
/// twist `-nu` (each with at least one point) followed by `rho - beta` of
/// twist `-nu - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelGroup<I: Int> {
    pub nu: I,
    pub pieces: Vec<ModelPiece<I>>,
}

impl<I: Int> ModelGroup<I> {
    /// Rank of the group: its number of summands.
    pub fn rank(&self) -> I {
        self.pieces
            .iter()
            .fold(I::zero(), |acc, _| acc + I::one())
    }

    /// Multiplicity of the higher twist `-nu`.
    pub fn beta(&self) -> I {
        let high = -self.nu.clone();
        self.pieces
            .iter()
            .filter(|p| p.twist == high)
            .fold(I::zero(), |acc, _| acc + I::one())
    }
}

/// The split model sheaf: an optional torsion curve piece plus one group of
/// twisted ideal sheaves per torsion-free graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSheaf<I: Int> {
    /// Degree of the torsion curve, present when the torsion piece is
    /// nonzero.
    pub torsion: Option<I>,
    pub groups: Vec<ModelGroup<I>>,
}

/// Builds the model from the graded pieces and their rank-one
/// decompositions.
pub fn build_model<I: Int>(
    graded: &WhnGraded<I>,
    decomposed: &[Vec<RankOnePiece<I>>],
) -> ModelSheaf<I> {
    assert_eq!(graded.pieces.len(), decomposed.len());
    let torsion = if graded.torsion.fdh.is_zero() {
        None
    } else {
        Some(graded.torsion.curve_degree())
    };
    let groups = graded
        .pieces
        .iter()
        .zip(decomposed)
        .map(|(piece, summands)| {
            let nu = piece.nu.clone().expect("torsion-free pieces carry nu");
            let pieces = summands
                .iter()
                .map(|s| {
                    debug_assert!(
                        s.degree == -nu.clone() || s.degree == -nu.clone() - I::one(),
                        "summand degree must be -nu or -nu-1"
                    );
                    ModelPiece {
                        twist: s.degree.clone(),
                        points: s.deficiency.clone(),
                    }
                })
                .collect();
            ModelGroup { nu, pieces }
        })
        .collect();
    ModelSheaf { torsion, groups }
}

/// Restriction of the model to a general line, as `(twist, multiplicity)`
/// pairs per group (zero multiplicities dropped) plus their concatenation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionType<I: Int> {
    pub per_group: Vec<Vec<(I, I)>>,
    pub total: Vec<(I, I)>,
}

/// Splitting type on a general line: each group restricts to
/// `O(-nu)^beta + O(-nu-1)^(rho-beta)`, and the whole sheaf to the direct
/// sum of the group restrictions.
pub fn restriction_type<I: Int>(model: &ModelSheaf<I>) -> RestrictionType<I> {
    let mut per_group = Vec::with_capacity(model.groups.len());
    let mut total = Vec::new();
    for group in &model.groups {
        let beta = group.beta();
        let low_count = group.rank() - beta.clone();
        let mut entries = Vec::new();
        if beta.is_positive() {
            entries.push((-group.nu.clone(), beta));
        }
        if low_count.is_positive() {
            entries.push((-group.nu.clone() - I::one(), low_count));
        }
        total.extend(entries.iter().cloned());
        per_group.push(entries);
    }
    RestrictionType { per_group, total }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    HomVanishing,
    Ext1Restriction,
    HnCompatibility,
    ResolutionReassembly,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::HomVanishing => "hom-vanishing",
            CertificateKind::Ext1Restriction => "ext1-restriction",
            CertificateKind::HnCompatibility => "hn-compatibility",
            CertificateKind::ResolutionReassembly => "resolution-reassembly",
        }
    }
}

/// Why a certificate passes (or what failed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateReason {
    /// The section space of a negative twist vanishes.
    NegativeTwist,
    /// Twist zero, but the target ideal sheaf has at least one point.
    ZeroTwistNonemptyZ,
    /// Maps from a torsion sheaf into a torsion-free one vanish.
    TorsionSource,
    /// The torsion self-pair is asserted, not decided by model data: a
    /// line bundle twisted down has no sections on any curve component.
    TorsionPieceAsserted,
    /// First cohomology on a line vanishes from twist -1 up.
    TwistAtLeastMinusOne,
    /// The per-piece resolutions reassemble the input exactly.
    PartitionExact,
}

impl CertificateReason {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateReason::NegativeTwist => "negative-twist",
            CertificateReason::ZeroTwistNonemptyZ => "zero-twist-nonempty-z",
            CertificateReason::TorsionSource => "torsion-source",
            CertificateReason::TorsionPieceAsserted => "torsion-piece-asserted",
            CertificateReason::TwistAtLeastMinusOne => "twist-at-least-minus-one",
            CertificateReason::PartitionExact => "partition-exact",
        }
    }
}

/// Coordinates of a summand: group 0 is the torsion piece, torsion-free
/// groups and their summands are 1-based.
pub type PieceCoord = (usize, usize);

/// One recorded vanishing statement with the twist it was decided on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<I: Int> {
    pub kind: CertificateKind,
    pub source: PieceCoord,
    pub target: PieceCoord,
    pub twist: I,
    pub reason: CertificateReason,
    pub pass: bool,
}

/// Certificates for `Hom(gr_i, gr_j(-1)) = 0`, `i <= j`.
///
/// For torsion-free groups the Hom space decomposes over summand pairs
/// into sections of the target ideal sheaf twisted by
/// `k = target_twist - 1 - source_twist`; each pair passes with a negative
/// twist or with twist zero against a nonempty point set. Torsion sources
/// pass structurally; the torsion self-pair is recorded as asserted.
pub fn hom_vanishing_certificates<I: Int>(model: &ModelSheaf<I>) -> Vec<Certificate<I>> {
    let mut certs = Vec::new();
    if model.torsion.is_some() {
        certs.push(Certificate {
            kind: CertificateKind::HomVanishing,
            source: (0, 0),
            target: (0, 0),
            twist: -I::one(),
            reason: CertificateReason::TorsionPieceAsserted,
            pass: true,
        });
        for (j, group) in model.groups.iter().enumerate() {
            for (l, target) in group.pieces.iter().enumerate() {
                certs.push(Certificate {
                    kind: CertificateKind::HomVanishing,
                    source: (0, 0),
                    target: (j + 1, l + 1),
                    twist: target.twist.clone() - I::one(),
                    reason: CertificateReason::TorsionSource,
                    pass: true,
                });
            }
        }
    }
    for (i, source_group) in model.groups.iter().enumerate() {
        for (j, target_group) in model.groups.iter().enumerate().skip(i) {
            for (k, source) in source_group.pieces.iter().enumerate() {
                for (l, target) in target_group.pieces.iter().enumerate() {
                    let twist = target.twist.clone() - I::one() - source.twist.clone();
                    let (reason, pass) = if twist.is_negative() {
                        (CertificateReason::NegativeTwist, true)
                    } else if twist.is_zero() {
                        (
                            CertificateReason::ZeroTwistNonemptyZ,
                            target.points.is_positive(),
                        )
                    } else {
                        (CertificateReason::ZeroTwistNonemptyZ, false)
                    };
                    certs.push(Certificate {
                        kind: CertificateKind::HomVanishing,
                        source: (i + 1, k + 1),
                        target: (j + 1, l + 1),
                        twist,
                        reason,
                        pass,
                    });
                }
            }
        }
    }
    certs
}

/// Certificates for `Ext^1(gr_i|_L, gr_j|_L) = 0`, `i > j`: every
/// restriction summand pair contributes `H^1(O_L(nu_i - nu_j + e))` with
/// `e` in `{-1, 0, 1}`, which vanishes from twist `-1` up. The strictly
/// increasing `nu` sequence makes every such twist nonnegative.
pub fn ext1_restriction_certificates<I: Int>(model: &ModelSheaf<I>) -> Vec<Certificate<I>> {
    let mut certs = Vec::new();
    for (i, higher) in model.groups.iter().enumerate() {
        for (j, lower) in model.groups.iter().enumerate().take(i) {
            for eps in [-I::one(), I::zero(), I::one()] {
                let twist = higher.nu.clone() - lower.nu.clone() + eps;
                let pass = twist >= -I::one();
                certs.push(Certificate {
                    kind: CertificateKind::Ext1Restriction,
                    source: (i + 1, 0),
                    target: (j + 1, 0),
                    twist,
                    reason: CertificateReason::TwistAtLeastMinusOne,
                    pass,
                });
            }
        }
    }
    certs
}

/// One slope-window check of the compatibility report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeWindowCheck<I: Int> {
    pub coord: PieceCoord,
    pub degree: I,
    pub pass: bool,
}

/// Report certifying that the true filtration refines the computed one at
/// the numeric level: every rank-one slope sits in its group's two-twist
/// window, the order chain within groups is nonincreasing, and it drops
/// strictly across groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnCompatibilityReport<I: Int> {
    pub slope_windows: Vec<SlopeWindowCheck<I>>,
    pub chain: OrderChainReport<I>,
}

impl<I: Int> HnCompatibilityReport<I> {
    pub fn pass(&self) -> bool {
        self.slope_windows.iter().all(|c| c.pass) && self.chain.pass()
    }
}

/// Builds the compatibility report from the model and the rank-one
/// decomposition.
pub fn hn_compatibility_report<I: Int>(
    model: &ModelSheaf<I>,
    decomposed: &[Vec<RankOnePiece<I>>],
) -> HnCompatibilityReport<I> {
    assert_eq!(model.groups.len(), decomposed.len());
    let mut slope_windows = Vec::new();
    for (g, (group, summands)) in model.groups.iter().zip(decomposed).enumerate() {
        let high = -group.nu.clone();
        let low = high.clone() - I::one();
        for (j, summand) in summands.iter().enumerate() {
            let pass = summand.degree == high || summand.degree == low;
            slope_windows.push(SlopeWindowCheck {
                coord: (g + 1, j + 1),
                degree: summand.degree.clone(),
                pass,
            });
        }
    }
    HnCompatibilityReport {
        slope_windows,
        chain: check_order_chain(decomposed),
    }
}

/// Checks that cutting the presentation multiplicities at the breakpoints
/// and reassembling the per-piece resolutions recovers the input exactly.
pub fn resolution_reassembly_check<I: Int>(
    a: &SupportSeq<I>,
    b: &SupportSeq<I>,
    taus: &[I],
) -> Certificate<I> {
    let mut rebuilt_a = SupportSeq::zero();
    let mut rebuilt_b = SupportSeq::zero();
    let mut lower: Option<I> = None;
    for i in 0..=taus.len() {
        let upper = taus.get(i).cloned();
        for (n, v) in a.restrict(lower.as_ref(), upper.as_ref()).iter() {
            rebuilt_a.add(n.clone(), v.clone());
        }
        for (n, v) in b.restrict(lower.as_ref(), upper.as_ref()).iter() {
            rebuilt_b.add(n.clone(), v.clone());
        }
        lower = upper;
    }
    let pass = rebuilt_a == *a && rebuilt_b == *b;
    Certificate {
        kind: CertificateKind::ResolutionReassembly,
        source: (0, 0),
        target: (0, 0),
        twist: I::zero(),
        reason: CertificateReason::PartitionExact,
        pass,
    }
}

/// The resolution of one graded piece: the input multiplicities restricted
/// to the piece's interval.
pub fn piece_resolution<I: Int>(
    a: &SupportSeq<I>,
    b: &SupportSeq<I>,
    interval: &(ExtInt<I>, ExtInt<I>),
) -> (SupportSeq<I>, SupportSeq<I>) {
    let lower = interval.0.as_finite();
    let upper = interval.1.as_finite();
    (a.restrict(lower, upper), b.restrict(lower, upper))
}
