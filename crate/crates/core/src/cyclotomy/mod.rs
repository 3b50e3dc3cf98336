//! Whiteman's generalized cyclotomy of order `e = gcd(p-1, q-1)` over `Z_pq`.
//!
//! The units of `Z_L` split into `e` classes `D_i = { g^s x^i : 0 <= s < d }`.
//! The remaining residues are the nonzero multiples of `p` (`P`), the nonzero
//! multiples of `q` (`Q`) and zero (`R`).

mod lemmas;

pub use lemmas::{verify_structure_lemmas, Counterexample, LemmaReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmath::{self, MAX_MODULUS};

/// Largest `L` for which dense per-residue tables are materialized.
pub const DENSE_TABLE_LIMIT: u64 = 100_000_000;

/// The construction parameters and every quantity derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u64,
    pub q: u64,
    /// `gcd(p-1, q-1)`, always even.
    pub e: u64,
    /// `(p-1)(q-1)/e`, the size of each class.
    pub d: u64,
    pub f1: u64,
    pub f2: u64,
    /// The modulus and sequence length `pq`.
    pub l: u64,
    /// Common primitive root of `p` and `q`.
    pub g: u64,
    /// `x = g (mod p)`, `x = 1 (mod q)`.
    pub x: u64,
}

impl Params {
    pub fn e_usize(&self) -> usize {
        self.e as usize
    }

    /// `L` as an index bound.
    pub fn period(&self) -> usize {
        self.l as usize
    }

    /// True when `|f1 - f2|` is even, which places `-1` in `D_0`.
    pub fn parity_even(&self) -> bool {
        self.f1.abs_diff(self.f2).is_multiple_of(2)
    }

    /// `((p-2)(q-2) - 1) / e`, the common value in the cyclotomic number sums.
    pub fn cyclotomic_base(&self) -> u64 {
        ((self.p - 2) * (self.q - 2) - 1) / self.e
    }
}

/// Validates `p`, `q` and picks `g` (the smallest common primitive root unless overridden).
pub fn build_params(p: u64, q: u64, g_override: Option<u64>) -> Result<Params> {
    modmath::check_odd_prime_pair(p, q)?;
    let l = p
        .checked_mul(q)
        .filter(|&l| l <= MAX_MODULUS)
        .ok_or(Error::ModulusTooLarge(p.saturating_mul(q)))?;
    let g = match g_override {
        Some(g) => {
            let g = g % l;
            let ok = g % p != 0
                && g % q != 0
                && modmath::is_primitive_root(g, p)?
                && modmath::is_primitive_root(g, q)?;
            if !ok {
                return Err(Error::NotCommonPrimitiveRoot { g, p, q });
            }
            g
        }
        None => modmath::find_common_primitive_root(p, q)?,
    };
    let x = modmath::crt_solve_x(g, p, q)?;
    let e = modmath::gcd(p - 1, q - 1);
    Ok(Params {
        p,
        q,
        e,
        d: (p - 1) * (q - 1) / e,
        f1: (p - 1) / e,
        f2: (q - 1) / e,
        l,
        g,
        x,
    })
}

/// The cell of `Z_L` a residue lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellId {
    ClassD(usize),
    InP,
    InQ,
    InR,
}

impl CellId {
    pub fn is_unit(self) -> bool {
        matches!(self, CellId::ClassD(_))
    }

    /// Dense code: classes are `0..e`, then `P`, `Q`, `R`.
    pub(crate) fn code(self, e: usize) -> usize {
        match self {
            CellId::ClassD(i) => i,
            CellId::InP => e,
            CellId::InQ => e + 1,
            CellId::InR => e + 2,
        }
    }

    pub(crate) fn from_code(code: usize, e: usize) -> CellId {
        match code {
            c if c < e => CellId::ClassD(c),
            c if c == e => CellId::InP,
            c if c == e + 1 => CellId::InQ,
            _ => CellId::InR,
        }
    }
}

/// Anything that can answer "which cell holds `w`".
pub trait CellLookup {
    fn params(&self) -> &Params;
    fn cell_of(&self, w: u64) -> Result<CellId>;
}

/// Explicit class lists plus a dense residue-to-cell index.
#[derive(Debug, Clone)]
pub struct CyclotomicTables {
    params: Params,
    classes: Vec<Vec<u32>>,
    p_set: Vec<u32>,
    q_set: Vec<u32>,
    r_set: Vec<u32>,
    cell_index: Vec<u32>,
}

const UNASSIGNED: u32 = u32::MAX;

/// Generates every class by modular exponentiation and checks the partition.
pub fn build_tables(params: Params) -> Result<CyclotomicTables> {
    let l = params.l;
    if l > DENSE_TABLE_LIMIT {
        return Err(Error::TableTooLarge {
            len: l,
            limit: DENSE_TABLE_LIMIT,
        });
    }
    let e = params.e_usize();
    let n = params.period();
    let mut cell_index = vec![UNASSIGNED; n];
    let mut classes = Vec::with_capacity(e);
    let mut leader = 1u64;
    for i in 0..e {
        let mut class = Vec::with_capacity(params.d as usize);
        let mut t = leader;
        for _ in 0..params.d {
            let slot = &mut cell_index[t as usize];
            if *slot != UNASSIGNED {
                return Err(Error::Inconsistent(format!("residue {t} generated twice")));
            }
            *slot = i as u32;
            class.push(t as u32);
            t = t * params.g % l;
        }
        classes.push(class);
        leader = leader * params.x % l;
    }

    let p_set: Vec<u32> = (1..params.q).map(|k| (k * params.p) as u32).collect();
    let q_set: Vec<u32> = (1..params.p).map(|k| (k * params.q) as u32).collect();
    let r_set = vec![0u32];
    for (set, cell) in [
        (&p_set, CellId::InP),
        (&q_set, CellId::InQ),
        (&r_set, CellId::InR),
    ] {
        for &t in set {
            let slot = &mut cell_index[t as usize];
            if *slot != UNASSIGNED {
                return Err(Error::Inconsistent(format!(
                    "residue {t} lies in two cells"
                )));
            }
            *slot = cell.code(e) as u32;
        }
    }
    if let Some(t) = cell_index.iter().position(|&c| c == UNASSIGNED) {
        return Err(Error::Inconsistent(format!("residue {t} lies in no cell")));
    }

    Ok(CyclotomicTables {
        params,
        classes,
        p_set,
        q_set,
        r_set,
        cell_index,
    })
}

impl CyclotomicTables {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `D_i` in generation order (`s = 0, 1, ..., d-1`).
    pub fn class(&self, i: usize) -> Result<&[u32]> {
        self.classes
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                bound: self.classes.len(),
            })
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn p_set(&self) -> &[u32] {
        &self.p_set
    }

    pub fn q_set(&self) -> &[u32] {
        &self.q_set
    }

    pub fn r_set(&self) -> &[u32] {
        &self.r_set
    }

    pub fn cell_of(&self, w: u64) -> Result<CellId> {
        let code = *self.cell_index.get(w as usize).ok_or(Error::OutOfRange {
            value: w,
            modulus: self.params.l,
        })?;
        Ok(CellId::from_code(code as usize, self.params.e_usize()))
    }

    /// Dense cell code of every residue (see [`CellId`] for the encoding).
    pub(crate) fn codes(&self) -> &[u32] {
        &self.cell_index
    }

    /// `(i, j) = |(D_i + 1) ∩ D_j|`, counted directly.
    pub fn cyclotomic_number(&self, i: usize, j: usize) -> Result<u64> {
        let e = self.params.e_usize();
        if j >= e {
            return Err(Error::IndexOutOfRange { index: j, bound: e });
        }
        let l = self.params.l;
        let count = self
            .class(i)?
            .iter()
            .filter(|&&t| self.cell_index[((t as u64 + 1) % l) as usize] as usize == j)
            .count();
        Ok(count as u64)
    }

    /// The full `e x e` matrix of cyclotomic numbers, row `i`, column `j`.
    pub fn cyclotomic_matrix(&self) -> Vec<Vec<u64>> {
        let e = self.params.e_usize();
        let l = self.params.l;
        let mut m = vec![vec![0u64; e]; e];
        for (i, class) in self.classes.iter().enumerate() {
            for &t in class {
                let c = self.cell_index[((t as u64 + 1) % l) as usize] as usize;
                if c < e {
                    m[i][c] += 1;
                }
            }
        }
        m
    }
}

impl CellLookup for CyclotomicTables {
    fn params(&self) -> &Params {
        &self.params
    }

    fn cell_of(&self, w: u64) -> Result<CellId> {
        CyclotomicTables::cell_of(self, w)
    }
}

/// Cell lookup through discrete logarithms modulo `p` and `q`.
///
/// For a unit `t` with `t = g^a (mod p)` and `t = g^b (mod q)`, the class
/// index is `(a - b) mod e`. Memory is `O(p + q)` instead of `O(pq)`.
#[derive(Debug, Clone)]
pub struct DlogCells {
    params: Params,
    log_p: Vec<u32>,
    log_q: Vec<u32>,
}

impl DlogCells {
    pub fn new(params: Params) -> Self {
        let table = |m: u64| {
            let mut logs = vec![0u32; m as usize];
            let mut v = 1u64;
            for s in 0..m - 1 {
                logs[v as usize] = s as u32;
                v = v * params.g % m;
            }
            logs
        };
        DlogCells {
            log_p: table(params.p),
            log_q: table(params.q),
            params,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn cell_of(&self, w: u64) -> Result<CellId> {
        let Params { p, q, e, l, .. } = self.params;
        if w >= l {
            return Err(Error::OutOfRange {
                value: w,
                modulus: l,
            });
        }
        Ok(match (w.is_multiple_of(p), w.is_multiple_of(q)) {
            (true, true) => CellId::InR,
            (true, false) => CellId::InP,
            (false, true) => CellId::InQ,
            (false, false) => {
                let a = self.log_p[(w % p) as usize] as u64 % e;
                let b = self.log_q[(w % q) as usize] as u64 % e;
                CellId::ClassD(((a + e - b) % e) as usize)
            }
        })
    }
}

impl CellLookup for DlogCells {
    fn params(&self) -> &Params {
        &self.params
    }

    fn cell_of(&self, w: u64) -> Result<CellId> {
        DlogCells::cell_of(self, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(p: u64, q: u64) -> CyclotomicTables {
        build_tables(build_params(p, q, None).unwrap()).unwrap()
    }

    #[test]
    fn params_examples() {
        let pr = build_params(5, 17, None).unwrap();
        assert_eq!(
            (pr.e, pr.d, pr.f1, pr.f2, pr.l, pr.g, pr.x),
            (4, 16, 1, 4, 85, 3, 18)
        );
        let pr = build_params(3, 5, None).unwrap();
        assert_eq!(
            (pr.e, pr.d, pr.f1, pr.f2, pr.l, pr.g, pr.x),
            (2, 4, 1, 2, 15, 2, 11)
        );
        assert_eq!(build_params(5, 5, None), Err(Error::EqualPrimes(5)));
        assert_eq!(build_params(9, 17, None), Err(Error::NotPrime(9)));
        assert_eq!(build_params(2, 17, None), Err(Error::EvenPrime(2)));
        assert!(matches!(
            build_params(5, 17, Some(2)),
            Err(Error::NotCommonPrimitiveRoot { g: 2, .. })
        ));
        // 37 = 2 (mod 5) and 37 = 3 (mod 17): primitive mod 5, 3 is primitive mod 17
        assert_eq!(build_params(5, 17, Some(37)).unwrap().g, 37);
        assert!(matches!(
            build_params(46_337, 46_349, None),
            Err(Error::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn table_examples_5_17() {
        let t = tables(5, 17);
        assert_eq!(t.cell_of(1).unwrap(), CellId::ClassD(0));
        assert_eq!(t.cell_of(2).unwrap(), CellId::ClassD(1));
        for i in 0..4 {
            assert_eq!(t.class(i).unwrap().len(), 16);
        }
        assert_eq!(
            (t.p_set().len(), t.q_set().len(), t.r_set().len()),
            (16, 4, 1)
        );
        assert_eq!(t.cell_of(0).unwrap(), CellId::InR);
        assert_eq!(t.cell_of(5).unwrap(), CellId::InP);
        assert_eq!(t.cell_of(17).unwrap(), CellId::InQ);
        assert!(t.cell_of(85).is_err());
        assert!(t.class(4).is_err());
        assert!(t.cyclotomic_number(0, 4).is_err());
    }

    #[test]
    fn classes_are_successive_multiples_by_x() {
        for (p, q) in [(3, 5), (5, 17), (5, 13), (7, 13)] {
            let t = tables(p, q);
            let pr = *t.params();
            for i in 0..t.classes().len() {
                let prev = (i + t.classes().len() - 1) % t.classes().len();
                for &v in t.class(prev).unwrap() {
                    let w = v as u64 * pr.x % pr.l;
                    assert_eq!(t.cell_of(w).unwrap(), CellId::ClassD(i));
                }
            }
        }
    }

    #[test]
    fn dlog_lookup_agrees_with_dense_index() {
        for (p, q) in [(3, 5), (5, 17), (5, 13), (7, 13), (7, 19), (11, 31)] {
            let t = tables(p, q);
            let lazy = DlogCells::new(*t.params());
            for w in 0..t.params().l {
                assert_eq!(lazy.cell_of(w).unwrap(), t.cell_of(w).unwrap(), "w = {w}");
            }
        }
    }

    #[test]
    fn cyclotomic_number_identities() {
        for (p, q) in [(3, 5), (5, 17), (5, 13), (7, 13), (7, 19)] {
            let t = tables(p, q);
            let e = t.params().e_usize();
            let base = t.params().cyclotomic_base();
            let m = t.cyclotomic_matrix();
            for i in 0..e {
                for j in 0..e {
                    assert_eq!(m[i][j], t.cyclotomic_number(i, j).unwrap());
                    assert_eq!(m[i][j], m[(e - i) % e][(j + e - i) % e]);
                }
            }
            for j in 0..e {
                let col: u64 = (0..e).map(|i| m[i][j]).sum();
                assert_eq!(col, base + u64::from(j == 0));
            }
        }
    }

    #[test]
    fn cyclotomic_number_examples_5_17() {
        let t = tables(5, 17);
        let col0: u64 = (0..4).map(|i| t.cyclotomic_number(i, 0).unwrap()).sum();
        assert_eq!(col0, 12);
        assert_eq!(
            t.cyclotomic_number(1, 3).unwrap(),
            t.cyclotomic_number(3, 2).unwrap()
        );
        let diag: u64 = (0..4).map(|i| t.cyclotomic_number(i, i).unwrap()).sum();
        assert_eq!(diag, 12);
    }
}
