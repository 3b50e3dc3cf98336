//! The partition `C_0..C_{e-1}` of `Z_L` and the FH sequence set built on it.
//!
//! `C_0 = D_0 ∪ Q ∪ R`, `C_{e/2} = D_{e/2} ∪ P`, and `C_i = D_i` otherwise.
//! Sequence `i` hops to frequency `(c(t) + i) mod e` at time `t`, where `c(t)`
//! is the partition cell of `t`.

use serde::{Deserialize, Serialize};

use crate::cyclotomy::{CellId, CyclotomicTables, DlogCells, Params};
use crate::error::{Error, Result};

/// Frequency symbol in `0..e`.
pub type Symbol = u32;

fn partition_cell(cell: CellId, e: usize) -> usize {
    match cell {
        CellId::ClassD(i) => i,
        CellId::InQ | CellId::InR => 0,
        CellId::InP => e / 2,
    }
}

#[derive(Debug, Clone)]
pub struct Partition {
    params: Params,
    cells: Vec<Vec<u32>>,
    cell_index: Vec<u32>,
}

pub fn build_partition(tables: &CyclotomicTables) -> Result<Partition> {
    let params = *tables.params();
    let e = params.e_usize();
    let mut cells: Vec<Vec<u32>> = tables.classes().to_vec();
    cells[0].extend_from_slice(tables.q_set());
    cells[0].extend_from_slice(tables.r_set());
    cells[e / 2].extend_from_slice(tables.p_set());
    for c in &mut cells {
        c.sort_unstable();
    }

    let mut cell_index = vec![u32::MAX; params.period()];
    for (k, cell) in cells.iter().enumerate() {
        for &t in cell {
            if cell_index[t as usize] != u32::MAX {
                return Err(Error::Inconsistent(format!(
                    "residue {t} in two partition cells"
                )));
            }
            cell_index[t as usize] = k as u32;
        }
    }
    if cell_index.contains(&u32::MAX) {
        return Err(Error::Inconsistent("partition does not cover Z_L".into()));
    }
    Ok(Partition {
        params,
        cells,
        cell_index,
    })
}

impl Partition {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `C_k`, sorted ascending.
    pub fn cell(&self, k: usize) -> Option<&[u32]> {
        self.cells.get(k).map(Vec::as_slice)
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn cell_index(&self) -> &[u32] {
        &self.cell_index
    }

    /// Expected `|C_k|`: `d + p` for `k = 0`, `d + q - 1` for `k = e/2`, `d` otherwise.
    pub fn expected_size(params: &Params, k: usize) -> u64 {
        let e = params.e_usize();
        match k {
            0 => params.d + params.p,
            k if k == e / 2 => params.d + params.q - 1,
            _ => params.d,
        }
    }
}

/// `e` sequences of length `L` over the alphabet `0..e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FHSequenceSet {
    params: Params,
    sequences: Vec<Vec<Symbol>>,
    labels: Vec<usize>,
}

pub fn build_sequence_set(partition: &Partition) -> FHSequenceSet {
    let params = *partition.params();
    let e = params.e as u32;
    let sequences = (0..e)
        .map(|i| partition.cell_index.iter().map(|&c| (c + i) % e).collect())
        .collect();
    FHSequenceSet {
        params,
        sequences,
        labels: (0..params.e_usize()).collect(),
    }
}

impl FHSequenceSet {
    /// Wraps externally supplied sequences after checking their shape.
    pub fn from_parts(params: Params, sequences: Vec<Vec<Symbol>>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::InvalidSequenceSet("no sequences".into()));
        }
        for (k, s) in sequences.iter().enumerate() {
            if s.len() != params.period() {
                return Err(Error::InvalidSequenceSet(format!(
                    "sequence {k} has length {}, expected {}",
                    s.len(),
                    params.l
                )));
            }
            if let Some(&bad) = s.iter().find(|&&v| v as u64 >= params.e) {
                return Err(Error::InvalidSequenceSet(format!(
                    "sequence {k} uses symbol {bad} outside 0..{}",
                    params.e
                )));
            }
        }
        let labels = (0..sequences.len()).collect();
        Ok(FHSequenceSet {
            params,
            sequences,
            labels,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn sequences(&self) -> &[Vec<Symbol>] {
        &self.sequences
    }

    pub fn sequence(&self, i: usize) -> Option<&[Symbol]> {
        self.sequences.get(i).map(Vec::as_slice)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Family size `M`.
    pub fn family_size(&self) -> usize {
        self.sequences.len()
    }

    /// Frequency library size `v`.
    pub fn alphabet_size(&self) -> usize {
        self.params.e_usize()
    }

    pub fn len(&self) -> usize {
        self.params.period()
    }

    pub fn is_empty(&self) -> bool {
        self.params.l == 0
    }

    /// Occurrences of each symbol in sequence `i`.
    pub fn histogram(&self, i: usize) -> Vec<u64> {
        let mut h = vec![0u64; self.alphabet_size()];
        for &s in &self.sequences[i] {
            h[s as usize] += 1;
        }
        h
    }
}

/// Computes `X^(i)[t]` on demand through discrete logarithms, for lengths
/// where dense tables are impractical.
#[derive(Debug, Clone)]
pub struct LazySequenceSet {
    cells: DlogCells,
}

impl LazySequenceSet {
    pub fn new(params: Params) -> Self {
        LazySequenceSet {
            cells: DlogCells::new(params),
        }
    }

    pub fn params(&self) -> &Params {
        self.cells.params()
    }

    pub fn symbol(&self, i: usize, t: u64) -> Result<Symbol> {
        let e = self.params().e_usize();
        if i >= e {
            return Err(Error::IndexOutOfRange { index: i, bound: e });
        }
        let c = partition_cell(self.cells.cell_of(t)?, e);
        Ok(((c + i) % e) as Symbol)
    }
}
