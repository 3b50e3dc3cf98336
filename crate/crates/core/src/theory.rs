//! Closed-form Hamming correlation distribution of the cyclotomic FH set and
//! its cross-check against direct counting.
//!
//! The branch conditions are written out exactly as stated for the theorem.
//! Each one is evaluated independently and a prediction is only produced when
//! exactly one fires.
//!
//! The theorem's labels `(k, l)` coincide with the labels produced by
//! [`build_sequence_set`](crate::construction::build_sequence_set). Negating
//! the labels also gives a valid description of the same family, but it
//! evaluates the correlation at `-w`. Since `-1 ∈ D_{e/2}` when `|f1 - f2|` is
//! odd, that reading moves the unit-class branches by `e/2`.
//! [`LabelMapping`] keeps both so the difference can be observed.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::FHSequenceSet;
use crate::correlation::{
    average_bound_check, bounds_report, correlation_table, AverageBoundEntry, BoundsReport,
    CorrelationProfile,
};
use crate::cyclotomy::{CellId, CellLookup, Params};
use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Which theorem case a pair of labels falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossCase {
    /// `l - k = e/2 (mod e)`
    HalfTurn,
    /// `2(l - k) = e/2 (mod e)`
    QuarterTurn,
    /// neither
    Generic,
}

impl CrossCase {
    pub fn of(k: usize, l: usize, e: usize) -> CrossCase {
        let diff = (l + e - k % e) % e;
        if diff == e / 2 {
            CrossCase::HalfTurn
        } else if (2 * diff) % e == e / 2 {
            CrossCase::QuarterTurn
        } else {
            CrossCase::Generic
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CrossCase::HalfTurn => "cross-3.1",
            CrossCase::QuarterTurn => "cross-3.2",
            CrossCase::Generic => "cross-3.3",
        }
    }
}

/// Value of the correlation at one shift together with the branch that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremPrediction {
    pub w: u64,
    pub predicted: u64,
    pub case_tag: String,
}

/// Integer quantities shared by every branch.
struct Terms {
    /// `(pq - 1) / e`
    base: i64,
    /// `(p - q) / e`
    p_minus_q: i64,
    p: i64,
    q: i64,
    e: usize,
    even: bool,
}

impl Terms {
    fn new(pr: &Params) -> Result<Terms> {
        let (p, q, e) = (pr.p as i64, pr.q as i64, pr.e as i64);
        if (p - q) % e != 0 || (p * q - 1) % e != 0 {
            return Err(Error::Inconsistent(format!(
                "e = {e} does not divide p - q or pq - 1"
            )));
        }
        Ok(Terms {
            base: (p * q - 1) / e,
            p_minus_q: (p - q) / e,
            p,
            q,
            e: pr.e_usize(),
            even: pr.parity_even(),
        })
    }
}

struct Branch {
    applies: bool,
    value: i64,
    tag: &'static str,
}

fn br(applies: bool, value: i64, tag: &'static str) -> Branch {
    Branch {
        applies,
        value,
        tag,
    }
}

fn select(prefix: &str, w: u64, branches: &[Branch]) -> Result<TheoremPrediction> {
    let mut hits = branches.iter().filter(|b| b.applies);
    let hit = hits
        .next()
        .ok_or_else(|| Error::Inconsistent(format!("{prefix}: no branch covers w = {w}")))?;
    if let Some(other) = hits.next() {
        return Err(Error::Inconsistent(format!(
            "{prefix}: branches {} and {} both cover w = {w}",
            hit.tag, other.tag
        )));
    }
    if hit.value < 0 {
        return Err(Error::Inconsistent(format!(
            "{prefix}/{}: negative value at w = {w}",
            hit.tag
        )));
    }
    Ok(TheoremPrediction {
        w,
        predicted: hit.value as u64,
        case_tag: format!("{prefix}/{}", hit.tag),
    })
}

/// Out-of-phase autocorrelation `H_{X^(k)}(w)` for `1 <= w < L`; the same for every `k`.
pub fn predict_auto<C: CellLookup + ?Sized>(cells: &C, w: u64) -> Result<TheoremPrediction> {
    if w == 0 {
        return Err(Error::ZeroShift);
    }
    let t = Terms::new(cells.params())?;
    let cell = cells.cell_of(w)?;
    let (b, h) = (t.base, t.e / 2);
    let class = |i: usize| cell == CellId::ClassD(i);
    let other = matches!(cell, CellId::ClassD(i) if i != 0 && i != h);
    select(
        "auto",
        w,
        &[
            br(cell == CellId::InP, b + t.p_minus_q + t.q - t.p - 1, "P"),
            br(cell == CellId::InQ, b - t.p_minus_q + t.p - t.q + 1, "Q"),
            br(class(h) && t.even, b - 1, "D_{e/2}/even"),
            br((class(0) || class(h)) && !t.even, b, "D_0|D_{e/2}/odd"),
            br(class(0) && t.even, b + 1, "D_0/even"),
            br(other, b + 1, "D_i/other"),
        ],
    )
}

/// Crosscorrelation `H_{X^(k), X^(l)}(w)` for theorem labels `k != l` and `0 <= w < L`.
pub fn predict_cross<C: CellLookup + ?Sized>(
    cells: &C,
    k: usize,
    l: usize,
    w: u64,
) -> Result<TheoremPrediction> {
    let t = Terms::new(cells.params())?;
    let e = t.e;
    for label in [k, l] {
        if label >= e {
            return Err(Error::IndexOutOfRange {
                index: label,
                bound: e,
            });
        }
    }
    if k == l {
        return Err(Error::SameLabel(k));
    }
    let cell = cells.cell_of(w)?;
    let (b, h, even) = (t.base, e / 2, t.even);
    let case = CrossCase::of(k, l, e);
    let prefix = case.label();
    let zero = w == 0;
    let in_p = cell == CellId::InP;
    let in_q = cell == CellId::InQ;
    let class = |i: usize| cell == CellId::ClassD(i % e);
    let diff = (l + e - k) % e;
    let neg_diff = (k + e - l) % e;

    match case {
        CrossCase::HalfTurn => {
            let other = matches!(cell, CellId::ClassD(i) if i != 0 && i != h);
            select(
                prefix,
                w,
                &[
                    br(zero, 0, "w=0"),
                    br(in_p, b + t.p_minus_q + 2, "P"),
                    br(in_q, b - t.p_minus_q, "Q"),
                    br(class(h) && even, b + 2, "D_{e/2}/even"),
                    br((class(0) || class(h)) && !even, b + 1, "D_0|D_{e/2}/odd"),
                    br(class(0) && even, b, "D_0/even"),
                    br(other, b + 2, "D_i/other"),
                ],
            )
        }
        CrossCase::QuarterTurn => {
            let (a, a2) = (diff, diff + h);
            let other = matches!(cell, CellId::ClassD(i) if i != a % e && i != a2 % e);
            select(
                prefix,
                w,
                &[
                    br(zero, 0, "w=0"),
                    br(in_p, b + t.p_minus_q, "P"),
                    br(in_q, b - t.p_minus_q, "Q"),
                    br(
                        (class(a) || class(a2)) && even,
                        b - 1,
                        "D_{l-k}|D_{l-k+e/2}/even",
                    ),
                    br(class(a) && !even, b - 2, "D_{l-k}/odd"),
                    br(class(a2) && !even, b, "D_{l-k+e/2}/odd"),
                    br(other, b, "D_i/other"),
                ],
            )
        }
        CrossCase::Generic => {
            let (a, a2, c) = (diff, diff + h, neg_diff + h);
            let other =
                matches!(cell, CellId::ClassD(i) if i != a % e && i != a2 % e && i != c % e);
            select(
                prefix,
                w,
                &[
                    br(zero, 0, "w=0"),
                    br(in_p, b + t.p_minus_q, "P"),
                    br(in_q, b - t.p_minus_q, "Q"),
                    br(class(a) && even, b, "D_{l-k}/even"),
                    br(class(a) && !even, b - 1, "D_{l-k}/odd"),
                    br(class(a2) && even, b - 1, "D_{l-k+e/2}/even"),
                    br(class(a2) && !even, b, "D_{l-k+e/2}/odd"),
                    br(other, b, "D_i/other"),
                    br(class(c), b - 1, "D_{k-l+e/2}"),
                ],
            )
        }
    }
}

/// Closed-form `(A_a, A_c)`.
pub fn predict_averages(params: &Params) -> (Fraction, Fraction) {
    let (num_a, den_a, num_c, den_c) = average_terms(params);
    (Fraction::new(num_a, den_a), Fraction::new(num_c, den_c))
}

/// Unreduced numerators and denominators of the closed-form averages.
/// The numerators equal `S_a` and `2 S_c`.
pub fn average_terms(params: &Params) -> (i128, i128, i128, i128) {
    let (p, q, e) = (params.p as i128, params.q as i128, params.e as i128);
    let n = p * q - 1;
    let num_a =
        n * n + e * (q * q + p * p) + e * (1 - p * q) - 2 * e * q - (q - 1).pow(2) - (p - 1).pow(2);
    let den_a = e * n;
    let num_c =
        (e - 1) * n * n + 2 * e * p * (q - 1) - (e - 1) * (q - 1).pow(2) - (e - 1) * (p - 1).pow(2);
    let den_c = p * q * e * (e - 1);
    (num_a, den_a, num_c, den_c)
}

/// How sequence labels are translated into the theorem's `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMapping {
    /// Label `i` is theorem label `i`.
    #[default]
    Identity,
    /// Label `i` is theorem label `-i mod e`.
    Negated,
}

impl LabelMapping {
    pub fn apply(self, label: usize, e: usize) -> usize {
        match self {
            LabelMapping::Identity => label,
            LabelMapping::Negated => (e - label % e) % e,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub k: usize,
    pub l: usize,
    pub w: u64,
    pub case_tag: String,
    pub predicted: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: Params,
    pub label_mapping: LabelMapping,
    pub total_checks: u64,
    pub mismatches: Vec<Mismatch>,
    /// How often each branch fired across all checks.
    pub case_histogram: BTreeMap<String, u64>,
    pub passed: bool,
}

/// Compares every closed-form value with direct counting, for every ordered
/// pair of sequences (including `k = l`) and every shift.
pub fn verify_theorem1<C: CellLookup + Sync + ?Sized>(
    set: &FHSequenceSet,
    cells: &C,
    mapping: LabelMapping,
) -> Result<VerificationReport> {
    let params = *set.params();
    if cells.params() != &params {
        return Err(Error::Inconsistent(
            "sequence set and tables disagree on parameters".into(),
        ));
    }
    let m = set.family_size();
    let e = params.e_usize();
    let n = set.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (0..m).map(move |l| (k, l))).collect();
    let per_pair: Vec<(Vec<Mismatch>, BTreeMap<String, u64>)> = pairs
        .par_iter()
        .map(|&(k, l)| {
            let actual = correlation_table(&set.sequences()[k], &set.sequences()[l])?;
            let (tk, tl) = (mapping.apply(k, e), mapping.apply(l, e));
            let mut mismatches = Vec::new();
            let mut histogram = BTreeMap::new();
            for (w, &value) in actual.iter().enumerate() {
                let w = w as u64;
                let pred = if k == l {
                    if w == 0 {
                        TheoremPrediction {
                            w,
                            predicted: n as u64,
                            case_tag: "auto/w=0".into(),
                        }
                    } else {
                        predict_auto(cells, w)?
                    }
                } else {
                    predict_cross(cells, tk, tl, w)?
                };
                if pred.predicted != value {
                    mismatches.push(Mismatch {
                        k,
                        l,
                        w,
                        case_tag: pred.case_tag.clone(),
                        predicted: pred.predicted,
                        actual: value,
                    });
                }
                *histogram.entry(pred.case_tag).or_insert(0) += 1;
            }
            Ok((mismatches, histogram))
        })
        .collect::<Result<_>>()?;

    let mut mismatches = Vec::new();
    let mut case_histogram = BTreeMap::new();
    for (mm, hist) in per_pair {
        mismatches.extend(mm);
        for (tag, count) in hist {
            *case_histogram.entry(tag).or_insert(0) += count;
        }
    }
    Ok(VerificationReport {
        params,
        label_mapping: mapping,
        total_checks: (m * m * n) as u64,
        passed: mismatches.is_empty(),
        mismatches,
        case_histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub predicted_a_a: Fraction,
    pub predicted_a_c: Fraction,
    pub observed_a_a: Fraction,
    pub observed_a_c: Fraction,
    pub averages_match: bool,
    pub bound: AverageBoundEntry,
    /// `1 / (e - 1)`
    pub reciprocal: Fraction,
    /// Both sides of the average bound equal `1 / (e - 1)`.
    pub both_sides_reciprocal: bool,
    pub passed: bool,
}

pub fn verify_theorem2(profile: &CorrelationProfile, params: &Params) -> Theorem2Report {
    let (pa, pc) = predict_averages(params);
    let bound = average_bound_check(
        params.l,
        profile.m as u64,
        profile.v as u64,
        profile.a_a,
        profile.a_c,
    );
    let reciprocal = Fraction::new(1, params.e as i128 - 1);
    let averages_match = pa == profile.a_a && pc == profile.a_c;
    let both_sides_reciprocal = bound.lhs == reciprocal && bound.rhs == reciprocal;
    let passed = averages_match && bound.met_with_equality && both_sides_reciprocal;
    Theorem2Report {
        predicted_a_a: pa,
        predicted_a_c: pc,
        observed_a_a: profile.a_a,
        observed_a_c: profile.a_c,
        averages_match,
        bound,
        reciprocal,
        both_sides_reciprocal,
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// Every sequence meets the Lempel-Greenberger bound.
    pub lempel_greenberger_optimal: bool,
    /// `(H_a, H_c)` satisfies the Peng-Fan inequality.
    pub peng_fan_satisfied: bool,
    /// `(H_a, H_c)` is a Pareto-minimal solution of the Peng-Fan inequality.
    pub peng_fan_optimal: bool,
    /// The average bound is met with equality.
    pub average_optimal: bool,
    pub bounds: BoundsReport,
}

impl OptimalityReport {
    pub fn summary(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let pf = &self.bounds.peng_fan;
        format!(
            "average-optimal = {}\nLG-optimal = {}\nPeng-Fan: lhs {} {} rhs {}, minimal pair = {}",
            yn(self.average_optimal),
            yn(self.lempel_greenberger_optimal),
            pf.lhs,
            if pf.satisfied { ">=" } else { "<" },
            pf.rhs,
            yn(self.peng_fan_optimal),
        )
    }
}

pub fn optimality_report(profile: &CorrelationProfile) -> OptimalityReport {
    let bounds = bounds_report(profile);
    OptimalityReport {
        lempel_greenberger_optimal: bounds.lempel_greenberger.iter().all(|e| e.optimal),
        peng_fan_satisfied: bounds.peng_fan.satisfied,
        peng_fan_optimal: bounds.peng_fan.minimal_pair,
        average_optimal: bounds.average_bound.met_with_equality,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_partition, build_sequence_set};
    use crate::correlation::correlation_profile;
    use crate::cyclotomy::{build_params, build_tables, CyclotomicTables, DlogCells};

    fn fixture(p: u64, q: u64) -> (CyclotomicTables, FHSequenceSet) {
        let t = build_tables(build_params(p, q, None).unwrap()).unwrap();
        let s = build_sequence_set(&build_partition(&t).unwrap());
        (t, s)
    }

    #[test]
    fn auto_examples_5_17() {
        let (t, _) = fixture(5, 17);
        let p = predict_auto(&t, 5).unwrap();
        assert_eq!((p.predicted, p.case_tag.as_str()), (29, "auto/P"));
        assert_eq!(predict_auto(&t, 17).unwrap().predicted, 13);
        let p = predict_auto(&t, 2).unwrap();
        assert_eq!((p.predicted, p.case_tag.as_str()), (22, "auto/D_i/other"));
        assert_eq!(predict_auto(&t, 0), Err(Error::ZeroShift));
    }

    #[test]
    fn cross_examples_5_17() {
        let (t, _) = fixture(5, 17);
        let p = predict_cross(&t, 0, 2, 5).unwrap();
        assert_eq!((p.predicted, p.case_tag.as_str()), (20, "cross-3.1/P"));
        let p = predict_cross(&t, 0, 1, 17).unwrap();
        assert_eq!((p.predicted, p.case_tag.as_str()), (24, "cross-3.2/Q"));
        for (k, l) in [(0, 1), (1, 0), (0, 2), (3, 1)] {
            assert_eq!(predict_cross(&t, k, l, 0).unwrap().predicted, 0);
        }
        assert_eq!(predict_cross(&t, 1, 1, 3), Err(Error::SameLabel(1)));
        assert!(predict_cross(&t, 0, 4, 3).is_err());
    }

    #[test]
    fn case_classification() {
        assert_eq!(CrossCase::of(0, 2, 4), CrossCase::HalfTurn);
        assert_eq!(CrossCase::of(0, 1, 4), CrossCase::QuarterTurn);
        assert_eq!(CrossCase::of(0, 3, 4), CrossCase::QuarterTurn);
        assert_eq!(CrossCase::of(0, 1, 6), CrossCase::Generic);
        assert_eq!(CrossCase::of(2, 5, 6), CrossCase::HalfTurn);
        assert_eq!(CrossCase::of(0, 1, 2), CrossCase::HalfTurn);
    }

    #[test]
    fn averages_5_17() {
        let pr = build_params(5, 17, None).unwrap();
        let (num_a, den_a, num_c, den_c) = average_terms(&pr);
        assert_eq!((num_a, den_a), (7568, 336));
        assert_eq!((num_c, den_c), (20992, 1020));
        let (a_a, a_c) = predict_averages(&pr);
        assert_eq!(a_a, Fraction::new(473, 21));
        assert_eq!(a_c, Fraction::new(5248, 255));
    }

    #[test]
    fn averages_reduce_to_reciprocal_bound() {
        for (p, q) in [
            (3, 5),
            (3, 7),
            (5, 13),
            (5, 17),
            (7, 13),
            (7, 19),
            (11, 31),
            (13, 37),
            (997, 1009),
        ] {
            let pr = build_params(p, q, None).unwrap();
            let (a_a, a_c) = predict_averages(&pr);
            let r = average_bound_check(pr.l, pr.e, pr.e, a_a, a_c);
            assert!(r.met_with_equality, "({p},{q})");
            assert_eq!(r.lhs, Fraction::new(1, pr.e as i128 - 1));
        }
    }

    #[test]
    fn theorem1_identity_mapping_matches_brute_force() {
        for (p, q) in [(3, 5), (3, 7), (5, 17), (5, 13), (7, 13), (7, 19)] {
            let (t, s) = fixture(p, q);
            let r = verify_theorem1(&s, &t, LabelMapping::Identity).unwrap();
            assert!(
                r.passed,
                "({p},{q}) first mismatch {:?}",
                r.mismatches.first()
            );
            assert_eq!(r.total_checks, (s.family_size().pow(2) * s.len()) as u64);
            assert_eq!(r.case_histogram.values().sum::<u64>(), r.total_checks);
        }
    }

    #[test]
    fn negated_mapping_agrees_only_when_minus_one_is_in_d0() {
        for (p, q) in [(3, 7), (5, 13), (7, 19)] {
            let (t, s) = fixture(p, q);
            assert!(t.params().parity_even());
            assert!(
                verify_theorem1(&s, &t, LabelMapping::Negated)
                    .unwrap()
                    .passed
            );
        }
        for (p, q) in [(5, 17), (7, 13)] {
            let (t, s) = fixture(p, q);
            assert!(!t.params().parity_even());
            assert!(
                !verify_theorem1(&s, &t, LabelMapping::Negated)
                    .unwrap()
                    .passed
            );
        }
    }

    #[test]
    fn predictors_work_through_dlog_cells() {
        let (t, _) = fixture(7, 13);
        let lazy = DlogCells::new(*t.params());
        for w in 1..t.params().l {
            assert_eq!(
                predict_auto(&lazy, w).unwrap(),
                predict_auto(&t, w).unwrap()
            );
            assert_eq!(
                predict_cross(&lazy, 1, 4, w).unwrap(),
                predict_cross(&t, 1, 4, w).unwrap()
            );
        }
    }

    #[test]
    fn predicted_totals_equal_closed_form_numerators() {
        for (p, q) in [(3, 5), (5, 17), (5, 13), (7, 13), (7, 19), (11, 31)] {
            let (t, _) = fixture(p, q);
            let pr = *t.params();
            let e = pr.e_usize();
            let auto_total: u64 = (1..pr.l)
                .map(|w| predict_auto(&t, w).unwrap().predicted)
                .sum();
            let mut cross_total = 0u64;
            for k in 0..e {
                for l in (0..e).filter(|&l| l != k) {
                    cross_total += (0..pr.l)
                        .map(|w| predict_cross(&t, k, l, w).unwrap().predicted)
                        .sum::<u64>();
                }
            }
            let (num_a, _, num_c, _) = average_terms(&pr);
            assert_eq!((e as u64 * auto_total) as i128, num_a, "({p},{q})");
            assert_eq!(cross_total as i128, num_c, "({p},{q})");
        }
    }

    #[test]
    fn theorem2_and_optimality_5_17() {
        let (t, s) = fixture(5, 17);
        let prof = correlation_profile(&s).unwrap();
        let r = verify_theorem2(&prof, t.params());
        assert!(r.passed);
        assert_eq!(r.reciprocal, Fraction::new(1, 3));
        let o = optimality_report(&prof);
        assert!(o.average_optimal);
        assert!(!o.lempel_greenberger_optimal);
        assert!(o.peng_fan_satisfied);
        assert!(o.summary().contains("average-optimal = yes"));
        assert!(o.summary().contains("LG-optimal = no"));
    }
}
