//! Exhaustive checks of the structural cardinality identities used to derive
//! the correlation distribution.
//!
//! Every left-hand side is counted directly from the cell index; nothing here
//! reuses the closed forms it checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CellId, CyclotomicTables};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub w: Option<u64>,
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub cases_checked: u64,
    pub passed: bool,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Default, Clone)]
struct Tally {
    cases: u64,
    first: Option<Counterexample>,
}

impl Tally {
    fn check(
        &mut self,
        w: Option<u64>,
        i: Option<usize>,
        j: Option<usize>,
        expected: u64,
        actual: u64,
    ) {
        self.cases += 1;
        if expected != actual && self.first.is_none() {
            self.first = Some(Counterexample {
                w,
                i,
                j,
                expected,
                actual,
            });
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn report(self, lemma: &str) -> LemmaReport {
        LemmaReport {
            lemma: lemma.to_string(),
            cases_checked: self.cases,
            passed: self.first.is_none(),
            first_counterexample: self.first,
        }
    }
}

const SHIFT_LEMMAS: [&str; 10] = [
    "unit-self-overlap",
    "unit-class-overlap",
    "q-r-overlap",
    "p-p-overlap",
    "unit-into-q-r",
    "unit-into-p-r",
    "unit-into-p",
    "unit-into-r",
    "p-into-unit",
    "p-into-q-r",
];

// Non-unit cells, offset from e in the dense code.
const P: usize = 0;
const Q: usize = 1;
const R: usize = 2;

/// Transition counts `|(A + w) ∩ B|` between cells at one shift `w`.
struct ShiftCounts {
    /// `diff[k] = sum_i |(D_{i+k} + w) ∩ D_i|`
    diff: Vec<u64>,
    /// `unit_to[i][c] = |(D_i + w) ∩ c|` for `c` in P, Q, R
    unit_to: Vec<[u64; 3]>,
    /// `to_unit[c][i] = |(c + w) ∩ D_i|`
    to_unit: [Vec<u64>; 3],
    /// `other[a][b] = |(a + w) ∩ b|` for non-unit cells
    other: [[u64; 3]; 3],
}

impl ShiftCounts {
    fn count(codes: &[u32], e: usize, w: usize) -> Self {
        let n = codes.len();
        let mut c = ShiftCounts {
            diff: vec![0; e],
            unit_to: vec![[0; 3]; e],
            to_unit: [vec![0; e], vec![0; e], vec![0; e]],
            other: [[0; 3]; 3],
        };
        for t in 0..n {
            let a = codes[t] as usize;
            let b = codes[(t + w) % n] as usize;
            match (a < e, b < e) {
                (true, true) => c.diff[(a + e - b) % e] += 1,
                (true, false) => c.unit_to[a][b - e] += 1,
                (false, true) => c.to_unit[a - e][b] += 1,
                (false, false) => c.other[a - e][b - e] += 1,
            }
        }
        c
    }
}

/// Checks Lemmas 4 through 11 over every applicable shift and class index.
pub fn verify_structure_lemmas(tables: &CyclotomicTables) -> Vec<LemmaReport> {
    let pr = *tables.params();
    let e = pr.e_usize();
    let half = e / 2;
    let base = pr.cyclotomic_base();
    let even = pr.parity_even();
    let codes = tables.codes();
    let mut reports = Vec::new();

    let m = tables.cyclotomic_matrix();
    let mut symmetry = Tally::default();
    let mut column = Tally::default();
    let mut diagonal = Tally::default();
    for i in 0..e {
        for j in 0..e {
            symmetry.check(
                None,
                Some(i),
                Some(j),
                m[(e - i) % e][(j + e - i) % e],
                m[i][j],
            );
        }
    }
    for j in 0..e {
        let sum = (0..e).map(|i| m[i][j]).sum();
        column.check(None, None, Some(j), base + u64::from(j == 0), sum);
    }
    for k in 0..e {
        let sum = (0..e).map(|i| m[(k + i) % e][i]).sum();
        diagonal.check(None, Some(k), None, base + u64::from(k == 0), sum);
    }
    reports.push(symmetry.report("cyclotomic-symmetry"));
    reports.push(column.report("cyclotomic-column-sums"));
    reports.push(diagonal.report("cyclotomic-diagonal-sums"));

    let per_shift: Vec<Vec<Tally>> = (0..pr.period())
        .into_par_iter()
        .map(|w| {
            let counts = ShiftCounts::count(codes, e, w);
            let cell = tables.cell_of(w as u64).expect("shift within range");
            check_shift(&pr, w as u64, cell, &counts, e, half, base, even)
        })
        .collect();
    let mut merged = vec![Tally::default(); SHIFT_LEMMAS.len()];
    for tallies in per_shift {
        for (acc, t) in merged.iter_mut().zip(tallies) {
            acc.merge(t);
        }
    }
    let mut merged = merged.into_iter();
    for name in SHIFT_LEMMAS {
        reports.push(merged.next().unwrap().report(name));
        if name == "unit-into-p-r" {
            reports.push(minus_one_report(tables, even, half));
        }
    }
    reports
}

fn minus_one_report(tables: &CyclotomicTables, even: bool, half: usize) -> LemmaReport {
    let pr = tables.params();
    let e = pr.e_usize();
    let minus_one = pr.l - 1;
    let expected = if even { 0 } else { half };
    let actual = tables.cell_of(minus_one).expect("L - 1 in range").code(e);
    let mut t = Tally::default();
    t.check(Some(minus_one), None, None, expected as u64, actual as u64);
    t.report("minus-one-class")
}

#[allow(clippy::too_many_arguments)]
fn check_shift(
    pr: &super::Params,
    w: u64,
    cell: CellId,
    c: &ShiftCounts,
    e: usize,
    half: usize,
    base: u64,
    even: bool,
) -> Vec<Tally> {
    let (p, q, f1, f2) = (pr.p, pr.q, pr.f1, pr.f2);
    let e64 = pr.e;
    let mut t = vec![Tally::default(); SHIFT_LEMMAS.len()];
    let in_p = cell == CellId::InP;
    let in_q = cell == CellId::InQ;
    let in_r = cell == CellId::InR;
    let unit_class = match cell {
        CellId::ClassD(i) => Some(i),
        _ => None,
    };

    // Defined for w in P, Q and the units.
    if !in_r {
        let expected = match cell {
            CellId::InP => e64 * f1 * (f2 - 1),
            CellId::InQ => e64 * f2 * (f1 - 1),
            _ => base + 1,
        };
        t[0].check(Some(w), None, None, expected, c.diff[0]);
        for k in 1..e {
            let expected = if unit_class.is_some() {
                base
            } else {
                e64 * f1 * f2
            };
            t[1].check(Some(w), Some(k), None, expected, c.diff[k]);
        }
    }

    let qr_qr = c.other[Q][Q] + c.other[Q][R] + c.other[R][Q] + c.other[R][R];
    t[2].check(Some(w), None, None, if in_q || in_r { p } else { 0 }, qr_qr);
    let expected = if in_p {
        q - 2
    } else if in_r {
        q - 1
    } else {
        0
    };
    t[3].check(Some(w), None, None, expected, c.other[P][P]);

    for i in 0..e {
        let to = c.unit_to[i];
        t[4].check(
            Some(w),
            Some(i),
            None,
            if in_q || in_r { 0 } else { f1 },
            to[Q] + to[R],
        );
        t[5].check(
            Some(w),
            Some(i),
            None,
            if in_p || in_r { 0 } else { f2 },
            to[P] + to[R],
        );

        // The unit class that makes -w land in D_i.
        let hit_class = if even { i } else { (i + half) % e };
        let hits_r = unit_class == Some(hit_class);
        let expected = match cell {
            CellId::InP | CellId::InR => 0,
            CellId::InQ => f2,
            CellId::ClassD(_) if hits_r => f2 - 1,
            CellId::ClassD(_) => f2,
        };
        t[6].check(Some(w), Some(i), None, expected, to[P]);
        t[7].check(Some(w), Some(i), None, u64::from(hits_r), to[R]);

        let expected = match cell {
            CellId::InP | CellId::InR => 0,
            CellId::ClassD(j) if j == i => f2 - 1,
            _ => f2,
        };
        t[8].check(Some(w), Some(i), None, expected, c.to_unit[P][i]);
    }

    // Defined for every nonzero shift.
    if !in_r {
        t[9].check(
            Some(w),
            None,
            None,
            if in_q { 0 } else { 1 },
            c.other[P][Q] + c.other[P][R],
        );
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomy::{build_params, build_tables};

    fn reports(p: u64, q: u64) -> Vec<LemmaReport> {
        verify_structure_lemmas(&build_tables(build_params(p, q, None).unwrap()).unwrap())
    }

    #[test]
    fn all_identities_hold_on_small_parameters() {
        for (p, q) in [(3, 5), (3, 7), (5, 17), (5, 13), (7, 13), (7, 19)] {
            for r in reports(p, q) {
                assert!(
                    r.passed,
                    "({p},{q}) {}: {:?}",
                    r.lemma, r.first_counterexample
                );
                assert!(r.cases_checked > 0, "({p},{q}) {} checked nothing", r.lemma);
            }
        }
    }

    #[test]
    fn report_covers_every_identity_once() {
        let names: Vec<String> = reports(5, 17).into_iter().map(|r| r.lemma).collect();
        assert_eq!(names.len(), 14);
        let mut sorted = names.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn minus_one_location() {
        let r = reports(5, 17);
        let m = r.iter().find(|r| r.lemma == "minus-one-class").unwrap();
        assert!(m.passed);
        let t = build_tables(build_params(5, 17, None).unwrap()).unwrap();
        assert_eq!(t.cell_of(84).unwrap(), CellId::ClassD(2));
        let t = build_tables(build_params(5, 13, None).unwrap()).unwrap();
        assert_eq!(t.cell_of(64).unwrap(), CellId::ClassD(0));
    }

    #[test]
    fn non_unit_spot_values() {
        let t = build_tables(build_params(5, 17, None).unwrap()).unwrap();
        let c = ShiftCounts::count(t.codes(), 4, 17);
        assert_eq!(
            c.other[Q][Q] + c.other[Q][R] + c.other[R][Q] + c.other[R][R],
            5
        );
        let c = ShiftCounts::count(t.codes(), 4, 5);
        assert_eq!(c.unit_to[0][Q] + c.unit_to[0][R], 1);
    }

    #[test]
    fn counterexample_serializes_in_report_shape() {
        let mut t = Tally::default();
        t.check(Some(3), Some(1), None, 4, 5);
        let json = serde_json::to_value(t.report("demo")).unwrap();
        assert_eq!(json["lemma"], "demo");
        assert_eq!(json["passed"], false);
        assert_eq!(json["first_counterexample"]["w"], 3);
        assert!(json["first_counterexample"].get("j").is_none());
    }
}
