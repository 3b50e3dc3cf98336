//! Periodic Hamming correlation by direct counting, aggregate statistics and
//! the three classical lower bounds. All arithmetic is exact.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{FHSequenceSet, Symbol};
use crate::cyclotomy::Params;
use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Default largest `L` for which full profiles are computed.
pub const DEFAULT_BRUTE_FORCE_GATE: u64 = 50_000;

/// `H_{X,Y}(τ) = #{ t : X[t] = Y[(t + τ) mod L] }`.
pub fn hamming_correlation(x: &[Symbol], y: &[Symbol], tau: usize) -> Result<u64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if tau >= n {
        return Err(Error::OutOfRange {
            value: tau as u64,
            modulus: n as u64,
        });
    }
    Ok((0..n).filter(|&t| x[t] == y[(t + tau) % n]).count() as u64)
}

/// `H_{X,Y}(τ)` for every shift, by enumerating every coinciding symbol pair.
pub fn correlation_table(x: &[Symbol], y: &[Symbol]) -> Result<Vec<u64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    let alphabet = x
        .iter()
        .chain(y)
        .copied()
        .max()
        .map_or(0, |m| m as usize + 1);
    let mut positions = vec![Vec::new(); alphabet];
    for (t, &s) in y.iter().enumerate() {
        positions[s as usize].push(t);
    }
    let mut table = vec![0u64; n];
    for (a, &s) in x.iter().enumerate() {
        for &b in &positions[s as usize] {
            table[(b + n - a) % n] += 1;
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossTable {
    pub k: usize,
    pub l: usize,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationProfile {
    pub params: Params,
    /// Family size `M`.
    pub m: usize,
    /// Frequency library size `v`.
    pub v: usize,
    /// `auto[i][τ]` for `τ` in `0..L`.
    pub auto: Vec<Vec<u64>>,
    /// Every ordered pair `k != l`, in lexicographic order.
    pub cross: Vec<CrossTable>,
    pub h_a: u64,
    pub h_c: u64,
    pub s_a: u64,
    pub s_c: u64,
    pub a_a: Fraction,
    pub a_c: Fraction,
}

impl CorrelationProfile {
    pub fn cross_table(&self, k: usize, l: usize) -> Option<&[u64]> {
        self.cross
            .iter()
            .find(|c| c.k == k && c.l == l)
            .map(|c| c.values.as_slice())
    }

    /// `H(X^(i))`, the largest sidelobe of sequence `i`.
    pub fn max_sidelobe(&self, i: usize) -> u64 {
        self.auto[i][1..].iter().copied().max().unwrap_or(0)
    }
}

/// Builds every auto and cross table by direct counting, then the aggregates.
pub fn correlation_profile(set: &FHSequenceSet) -> Result<CorrelationProfile> {
    let m = set.family_size();
    if m < 2 {
        return Err(Error::InvalidSequenceSet(
            "a profile needs at least two sequences".into(),
        ));
    }
    let n = set.len();
    if n < 2 {
        return Err(Error::InvalidSequenceSet(
            "sequences must have length at least 2".into(),
        ));
    }
    let seqs = set.sequences();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (0..m).map(move |l| (k, l))).collect();
    let tables: Vec<Vec<u64>> = pairs
        .par_iter()
        .map(|&(k, l)| correlation_table(&seqs[k], &seqs[l]))
        .collect::<Result<_>>()?;

    let mut auto = Vec::with_capacity(m);
    let mut cross = Vec::with_capacity(m * (m - 1));
    for ((k, l), values) in pairs.into_iter().zip(tables) {
        if k == l {
            auto.push(values);
        } else {
            cross.push(CrossTable { k, l, values });
        }
    }

    let h_a = auto
        .iter()
        .flat_map(|a| a[1..].iter().copied())
        .max()
        .unwrap_or(0);
    let h_c = cross
        .iter()
        .flat_map(|c| c.values.iter().copied())
        .max()
        .unwrap_or(0);
    let s_a: u64 = auto.iter().map(|a| a[1..].iter().sum::<u64>()).sum();
    let cross_total: u64 = cross.iter().map(|c| c.values.iter().sum::<u64>()).sum();
    if !cross_total.is_multiple_of(2) {
        return Err(Error::Inconsistent(format!(
            "ordered cross sum {cross_total} is odd"
        )));
    }
    let s_c = cross_total / 2;
    let (mi, li) = (m as i128, n as i128);
    let a_a = Fraction::new(s_a as i128, mi * (li - 1));
    let a_c = Fraction::new(2 * s_c as i128, li * mi * (mi - 1));

    Ok(CorrelationProfile {
        params: *set.params(),
        m,
        v: set.alphabet_size(),
        auto,
        cross,
        h_a,
        h_c,
        s_a,
        s_c,
        a_a,
        a_c,
    })
}

/// `⌈(L - b)(L + b - v) / (v (L - 1))⌉` with `b = L mod v`.
pub fn lempel_greenberger_bound(l: u64, v: u64) -> u64 {
    let b = l % v;
    let (l, b, v) = (l as i128, b as i128, v as i128);
    let num = (l - b) * (l + b - v);
    let den = v * (l - 1);
    if num <= 0 {
        return 0;
    }
    ((num + den - 1) / den) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PengFanEntry {
    pub lhs: u128,
    pub rhs: u128,
    pub satisfied: bool,
    /// `(H_a, H_c)` cannot be lowered in either coordinate while still
    /// satisfying the inequality.
    pub minimal_pair: bool,
    /// All Pareto-minimal solutions inside `[0, H_a] x [0, H_c]`.
    pub pareto_minimal: Vec<(u64, u64)>,
}

struct PengFan {
    auto_coef: u128,
    cross_coef: u128,
    rhs: u128,
}

impl PengFan {
    fn new(l: u64, m: u64, v: u64) -> Self {
        let (l, m, v) = (l as u128, m as u128, v as u128);
        PengFan {
            auto_coef: (l - 1) * v,
            cross_coef: (m - 1) * l * v,
            rhs: (l * m).saturating_sub(v) * l,
        }
    }

    fn lhs(&self, h_a: u64, h_c: u64) -> u128 {
        self.auto_coef * h_a as u128 + self.cross_coef * h_c as u128
    }

    fn holds(&self, h_a: u64, h_c: u64) -> bool {
        self.lhs(h_a, h_c) >= self.rhs
    }

    /// Smallest `h_c` that completes `h_a` to a solution, if any.
    fn min_cross(&self, h_a: u64) -> Option<u64> {
        let have = self.auto_coef * h_a as u128;
        if have >= self.rhs {
            return Some(0);
        }
        if self.cross_coef == 0 {
            return None;
        }
        let need = self.rhs - have;
        Some(need.div_ceil(self.cross_coef) as u64)
    }
}

/// `(L-1) v H_a + (M-1) L v H_c >= (LM - v) L`.
pub fn peng_fan_check(l: u64, m: u64, v: u64, h_a: u64, h_c: u64) -> PengFanEntry {
    let pf = PengFan::new(l, m, v);
    let satisfied = pf.holds(h_a, h_c);
    let minimal_pair =
        satisfied && (h_a == 0 || !pf.holds(h_a - 1, h_c)) && (h_c == 0 || !pf.holds(h_a, h_c - 1));

    let mut pareto_minimal = Vec::new();
    let mut prev: Option<u64> = None;
    for a in 0..=h_a {
        let Some(c) = pf.min_cross(a) else { continue };
        if c <= h_c && prev.is_none_or(|p| c < p) {
            pareto_minimal.push((a, c));
        }
        prev = Some(c);
        if c == 0 {
            break;
        }
    }
    PengFanEntry {
        lhs: pf.lhs(h_a, h_c),
        rhs: pf.rhs,
        satisfied,
        minimal_pair,
        pareto_minimal,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AverageBoundEntry {
    pub lhs: Fraction,
    pub rhs: Fraction,
    pub met_with_equality: bool,
}

/// `A_a / (L (M-1)) + A_c / (L-1) >= (LM - v) / (v (L-1) (M-1))`.
pub fn average_bound_check(
    l: u64,
    m: u64,
    v: u64,
    a_a: Fraction,
    a_c: Fraction,
) -> AverageBoundEntry {
    let (l, m, v) = (l as i128, m as i128, v as i128);
    let lhs = a_a / Fraction::from_integer(l * (m - 1)) + a_c / Fraction::from_integer(l - 1);
    let rhs = Fraction::new(l * m - v, v * (l - 1) * (m - 1));
    AverageBoundEntry {
        lhs,
        rhs,
        met_with_equality: lhs == rhs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LempelGreenbergerEntry {
    pub sequence: usize,
    pub bound: u64,
    pub achieved: u64,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// `L mod v`.
    pub b: u64,
    /// `⌊LM / v⌋`; carried for reference only.
    pub i_floor: u64,
    pub lempel_greenberger: Vec<LempelGreenbergerEntry>,
    pub peng_fan: PengFanEntry,
    pub average_bound: AverageBoundEntry,
}

pub fn bounds_report(profile: &CorrelationProfile) -> BoundsReport {
    let l = profile.params.l;
    let (m, v) = (profile.m as u64, profile.v as u64);
    let bound = lempel_greenberger_bound(l, v);
    let lempel_greenberger = (0..profile.m)
        .map(|i| {
            let achieved = profile.max_sidelobe(i);
            LempelGreenbergerEntry {
                sequence: i,
                bound,
                achieved,
                optimal: achieved == bound,
            }
        })
        .collect();
    BoundsReport {
        b: l % v,
        i_floor: l * m / v,
        lempel_greenberger,
        peng_fan: peng_fan_check(l, m, v, profile.h_a, profile.h_c),
        average_bound: average_bound_check(l, m, v, profile.a_a, profile.a_c),
    }
}
