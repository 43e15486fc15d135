use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::f2::{kernel, BitRow, Echelon};
use super::ring::{tensor_power, toggle, BasisId, GradedRing};

/// Cup-length together with a product of basis elements realising it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupLength {
    pub length: usize,
    /// Positive-degree basis ids whose product is nonzero.
    pub witness: Vec<BasisId>,
}

/// Largest number of positive-degree classes with nonzero product.
pub fn cup_length(r: &GradedRing) -> usize {
    cup_length_with_witness(r).length
}

pub fn cup_length_with_witness(r: &GradedRing) -> CupLength {
    r.warm_cache();
    let positive: Vec<BasisId> = (0..r.dim()).filter(|&b| r.degree(b) > 0).collect();
    if positive.is_empty() {
        return CupLength {
            length: 0,
            witness: Vec::new(),
        };
    }
    // (product, degree, factors)
    let mut level: Vec<(BitRow, usize, Vec<BasisId>)> = positive
        .iter()
        .map(|&b| (BitRow::unit(r.dim(), b), r.degree(b), vec![b]))
        .collect();
    let mut k = 1;
    loop {
        let mut spans: BTreeMap<usize, Echelon> = BTreeMap::new();
        let mut next = Vec::new();
        for (v, d, w) in &level {
            for &b in &positive {
                let e = d + r.degree(b);
                if e > r.top_degree() {
                    continue;
                }
                let p = r.mul_by_basis(v, b);
                if p.is_zero() {
                    continue;
                }
                let span = spans.entry(e).or_insert_with(|| Echelon::new(r.dim()));
                if span.insert(p.clone()) {
                    let mut w = w.clone();
                    w.push(b);
                    next.push((p, e, w));
                }
            }
        }
        if next.is_empty() {
            let witness = level.into_iter().next().map(|t| t.2).unwrap_or_default();
            return CupLength { length: k, witness };
        }
        level = next;
        k += 1;
    }
}

/// Image of a basis element of `r^{⊗n}` under the multiplication map to `r`.
fn multiply_legs(t: &GradedRing, depth: usize, id: BasisId, r: &GradedRing) -> Vec<BasisId> {
    if depth == 0 {
        return vec![id];
    }
    let (left, right) = t.tensor_factors().expect("tensor power structure");
    let w = right.dim();
    let head = multiply_legs(left, depth - 1, id / w, r);
    let mut acc = BTreeSet::new();
    for c in head {
        for p in r.mul_basis(c, id % w) {
            toggle(&mut acc, p);
        }
    }
    acc.into_iter().collect()
}

/// Homogeneous basis of the kernel of `r^{⊗n} → r`, by degree.
pub fn zero_divisor_basis(r: &GradedRing, n: usize) -> (GradedRing, Vec<(usize, BitRow)>) {
    let t = tensor_power(r, n.max(1));
    let mut by_degree: BTreeMap<usize, Vec<BasisId>> = BTreeMap::new();
    for b in 0..t.dim() {
        by_degree.entry(t.degree(b)).or_default().push(b);
    }
    let mut out = Vec::new();
    if n <= 1 {
        return (t, out);
    }
    for (d, cols) in by_degree {
        let images: Vec<BitRow> = cols
            .iter()
            .map(|&c| BitRow::from_indices(r.dim(), multiply_legs(&t, n - 1, c, r)))
            .collect();
        for v in kernel(&images, r.dim()) {
            out.push((d, BitRow::from_indices(t.dim(), v.ones().map(|k| cols[k]))));
        }
    }
    (t, out)
}

/// Cup-length of the kernel of the `n`-fold multiplication map `r^{⊗n} → r`.
pub fn zero_divisor_cup_length(r: &GradedRing, n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let (t, k1) = zero_divisor_basis(r, n);
    if k1.is_empty() {
        return 0;
    }
    t.warm_cache();
    let mul = |a: &BitRow, b: &BitRow| {
        let mut out = BitRow::zeros(t.dim());
        for i in a.ones() {
            for j in b.ones() {
                for c in t.mul_basis(i, j) {
                    out.toggle(c);
                }
            }
        }
        out
    };
    let mut level = k1.clone();
    let mut k = 1;
    loop {
        let mut spans: BTreeMap<usize, Echelon> = BTreeMap::new();
        let mut next = Vec::new();
        for (d, v) in &level {
            for (e, z) in &k1 {
                let deg = d + e;
                if deg > t.top_degree() {
                    continue;
                }
                let p = mul(v, z);
                if p.is_zero() {
                    continue;
                }
                let span = spans.entry(deg).or_insert_with(|| Echelon::new(t.dim()));
                if span.insert(p.clone()) {
                    next.push((deg, p));
                }
            }
        }
        if next.is_empty() {
            return k;
        }
        level = next;
        k += 1;
    }
}
