use rug::Rational;
use serde::Serialize;

use crate::algebra::{algebraic_basis, algebraic_reduce};
use crate::sums::IndexVector;

use super::catalog::Catalog;

/// A kernel `numerator/denominator` whose Mellin transform is a basic function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFunction {
    pub weight: u32,
    pub numerator: &'static str,
    pub denominator: &'static str,
}

impl BasisFunction {
    /// As an expression in the shared grammar.
    pub fn kernel(&self) -> String {
        format!("({})/({})", self.numerator, self.denominator)
    }
}

const BOTH: &[&str] = &["x-1", "x+1"];
const PLUS: &[&str] = &["x+1"];
const MINUS: &[&str] = &["x-1"];

fn families(w: u32) -> &'static [(&'static str, &'static [&'static str])] {
    match w {
        1 => &[("1", MINUS)],
        2 => &[("ln(1+x)", PLUS)],
        3 => &[("Li2(x)", BOTH)],
        4 => &[("Li3(x)", PLUS), ("S12(x)", BOTH)],
        5 => &[
            ("Li4(x)", BOTH),
            ("S13(x)", BOTH),
            ("S22(x)", BOTH),
            ("Li2(x)^2", BOTH),
            ("ln(x)*S12(-x) - Li2(-x)^2/2", BOTH),
        ],
        6 => &[
            ("Li5(x)", PLUS),
            ("S14(x)", BOTH),
            ("S23(x)", BOTH),
            ("S32(x)", BOTH),
            ("Li2(x)*Li3(x)", BOTH),
            ("A1(x)", PLUS),
            ("A2(x)", BOTH),
            ("A3(x)", PLUS),
            ("H[0,-1,0,1,1](x)", BOTH),
            ("H[0,0,-1,0,1](x)", BOTH),
            ("A1(-x) + 2*S32(-x) - 2*S22(-x)*ln(x)", BOTH),
            ("A1(-x) + 2*S32(-x) - S22(-x)*ln(x) + Li2(-x)^2*ln(x)/4 - Li3(-x)*Li2(-x)", MINUS),
        ],
        _ => &[],
    }
}

/// Basic functions first needed at weight `w` (empty outside 1..=6).
pub fn basis_list(w: u32) -> Vec<BasisFunction> {
    families(w)
        .iter()
        .flat_map(|(num, dens)| dens.iter().map(move |d| BasisFunction { weight: w, numerator: num, denominator: d }))
        .collect()
}

/// Basic functions of weights 3 through `w`.
///
/// Weights 1 and 2 only give `S_1` and the `ln 2` family, which are
/// classical and not counted.
pub fn basis_cumulative(w: u32) -> Vec<BasisFunction> {
    (3..=w).flat_map(basis_list).collect()
}

/// Whether every weight-6 sum of depth at least 2 without index `-1` is
/// reachable from the catalog's left-hand sums through the quasi-shuffle
/// algebra, modulo products and single sums.
#[derive(Clone, Debug, Serialize)]
pub struct Completeness {
    /// Dimension of the space to cover: algebraic basis sums of depth >= 2.
    pub needed: usize,
    /// Rank reached by the catalog.
    pub rank: usize,
    /// Basis sums outside the catalog span.
    #[serde(serialize_with = "ser_vecs")]
    pub missing: Vec<IndexVector>,
}

fn ser_vecs<S: serde::Serializer>(v: &[IndexVector], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Linear part of the reduction of `v` on basis sums of depth >= 2.
fn linear_part(v: &IndexVector, basis: &[IndexVector]) -> Vec<Rational> {
    let p = algebraic_reduce(v);
    basis.iter().map(|b| p.coefficient(std::slice::from_ref(b))).collect()
}

/// Row-reduces `rows` in place and returns the pivot columns.
fn pivots(mut rows: Vec<Vec<Rational>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                    *x -= Rational::from(&f * p);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

pub fn completeness(cat: &Catalog) -> Completeness {
    let basis: Vec<IndexVector> = algebraic_basis(6, true).into_iter().filter(|v| v.depth() >= 2).collect();
    let mut lhs: Vec<&IndexVector> = cat
        .relations()
        .iter()
        .filter(|r| r.is_authoritative())
        .filter_map(|r| r.lhs_sum())
        .filter(|v| v.weight() == 6 && v.depth() >= 2)
        .collect();
    lhs.sort();
    lhs.dedup();
    let rows: Vec<Vec<Rational>> = lhs.iter().map(|v| linear_part(v, &basis)).collect();
    let piv = pivots(rows);
    // Columns without a pivot are not determined by the catalog.
    let missing = (0..basis.len()).filter(|c| !piv.contains(c)).map(|c| basis[c].clone()).collect();
    Completeness { needed: basis.len(), rank: piv.len(), missing }
}
