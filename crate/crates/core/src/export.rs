//! File formats for sequence sets, correlation profiles and cyclotomy tables.

use serde::{Deserialize, Serialize};

use crate::construction::{FHSequenceSet, Symbol};
use crate::correlation::CorrelationProfile;
use crate::cyclotomy::{build_params, CellId, CyclotomicTables, Params};
use crate::error::{Error, Result};

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory csv writer");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// One line of digits per sequence; only defined for alphabets of at most ten symbols.
pub fn sequences_to_digits(set: &FHSequenceSet) -> Result<String> {
    if set.alphabet_size() > 10 {
        return Err(Error::InvalidSequenceSet(format!(
            "digit format needs e <= 10, got e = {}",
            set.alphabet_size()
        )));
    }
    let mut out = String::with_capacity(set.family_size() * (set.len() + 1));
    for s in set.sequences() {
        out.extend(s.iter().map(|&v| char::from(b'0' + v as u8)));
        out.push('\n');
    }
    Ok(out)
}

/// One row per sequence.
pub fn sequences_to_csv(set: &FHSequenceSet) -> String {
    let mut w = csv_writer();
    for s in set.sequences() {
        w.write_record(s.iter().map(|v| v.to_string()))
            .expect("in-memory write");
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    #[serde(flatten)]
    pub params: Params,
    pub sequences: Vec<Vec<Symbol>>,
}

pub fn sequences_to_json(set: &FHSequenceSet) -> String {
    let file = SequenceFile {
        params: *set.params(),
        sequences: set.sequences().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

/// Reads a JSON sequence file, re-deriving the parameters from `(p, q, g)`.
pub fn sequences_from_json(text: &str) -> Result<FHSequenceSet> {
    #[derive(Deserialize)]
    struct Minimal {
        p: u64,
        q: u64,
        g: u64,
        #[serde(default)]
        x: Option<u64>,
        sequences: Vec<Vec<Symbol>>,
    }
    let m: Minimal = serde_json::from_str(text)
        .map_err(|e| Error::InvalidSequenceSet(format!("malformed sequence file: {e}")))?;
    let params = build_params(m.p, m.q, Some(m.g))?;
    if m.x.is_some_and(|x| x != params.x) {
        return Err(Error::InvalidSequenceSet(format!(
            "file records x = {}, but (p, q, g) give x = {}",
            m.x.unwrap(),
            params.x
        )));
    }
    FHSequenceSet::from_parts(params, m.sequences)
}

/// Columns `kind, seq_k, seq_l, tau, value`.
pub fn profile_to_csv(profile: &CorrelationProfile) -> String {
    let mut w = csv_writer();
    w.write_record(["kind", "seq_k", "seq_l", "tau", "value"])
        .expect("in-memory write");
    let mut row = |kind: &str, k: usize, l: usize, values: &[u64]| {
        for (tau, v) in values.iter().enumerate() {
            w.write_record([
                kind,
                &k.to_string(),
                &l.to_string(),
                &tau.to_string(),
                &v.to_string(),
            ])
            .expect("in-memory write");
        }
    };
    for (i, a) in profile.auto.iter().enumerate() {
        row("auto", i, i, a);
    }
    for c in &profile.cross {
        row("cross", c.k, c.l, &c.values);
    }
    finish(w)
}

pub fn profile_to_json(profile: &CorrelationProfile) -> String {
    serde_json::to_string_pretty(profile).expect("serializable") + "\n"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomyExport {
    pub params: Params,
    /// `D_0..D_{e-1}`, each sorted ascending.
    pub classes: Vec<Vec<u32>>,
    pub p_set: Vec<u32>,
    pub q_set: Vec<u32>,
    pub r_set: Vec<u32>,
    /// `matrix[i][j] = (i, j)`.
    pub cyclotomic_matrix: Vec<Vec<u64>>,
    /// `sum_i (i, j)` for each `j`.
    pub column_sums: Vec<u64>,
    pub minus_one: CellId,
}

pub fn cyclotomy_export(tables: &CyclotomicTables) -> CyclotomyExport {
    let pr = *tables.params();
    let matrix = tables.cyclotomic_matrix();
    let e = pr.e_usize();
    let column_sums = (0..e).map(|j| matrix.iter().map(|r| r[j]).sum()).collect();
    let classes = tables
        .classes()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    CyclotomyExport {
        params: pr,
        classes,
        p_set: tables.p_set().to_vec(),
        q_set: tables.q_set().to_vec(),
        r_set: tables.r_set().to_vec(),
        cyclotomic_matrix: matrix,
        column_sums,
        minus_one: tables.cell_of(pr.l - 1).expect("L - 1 in range"),
    }
}
