use std::sync::Arc;

use super::ring::{BasisLabel, GradedBasisElement, GradedRing, Product, Sp2Data};
use super::RingError;

/// Mod-2 cohomology of the symmetric square from that of the space.
///
/// Basis: `1`, `φ(b_i ⊗ b_j)` for `i < j`, and `E_s(b_i)` for `2 <= s <= deg b_i`.
/// Products of φ-elements expand bilinearly:
/// `φ(b_i⊗b_j)·φ(b_u⊗b_v) = φ(b_i b_u ⊗ b_j b_v) + φ(b_i b_v ⊗ b_j b_u)`,
/// with `φ(c⊗c) = Σ_s E_s(Sq^{deg c - s} c)` on the diagonal. Any product
/// with an `E` factor is zero.
pub fn nakaoka_sp2(r: &GradedRing) -> Result<GradedRing, RingError> {
    nakaoka_sp2_arc(Arc::new(r.clone()))
}

pub(crate) fn nakaoka_sp2_arc(base: Arc<GradedRing>) -> Result<GradedRing, RingError> {
    if !base.has_sq() {
        return Err(RingError::MissingSteenrod);
    }
    let n = base.dim();
    // every E_s(c) produced by the diagonal rule must be a basis element
    for a in 0..n {
        let d = base.degree(a);
        for s in 2..=d {
            for &c in base.sq_sparse(d - s, a) {
                if s > base.degree(c) {
                    return Err(RingError::NakaokaClosure(format!(
                        "E_{s}({}) from the diagonal of {} has no basis element",
                        base.label_name(c),
                        base.label_name(a)
                    )));
                }
            }
        }
    }

    let mut basis = vec![GradedBasisElement {
        id: 0,
        degree: 0,
        label: BasisLabel::Unit,
    }];
    let mut phi = vec![Vec::new(); n];
    for (i, row) in phi.iter_mut().enumerate() {
        for j in i + 1..n {
            let id = basis.len();
            row.push(id);
            basis.push(GradedBasisElement {
                id,
                degree: base.degree(i) + base.degree(j),
                label: BasisLabel::Phi { i, j },
            });
        }
    }
    let mut e_start = vec![usize::MAX; n];
    for (i, start) in e_start.iter_mut().enumerate() {
        let d = base.degree(i);
        *start = basis.len();
        for s in 2..=d {
            let id = basis.len();
            basis.push(GradedBasisElement {
                id,
                degree: d + s,
                label: BasisLabel::E { s, i },
            });
        }
    }
    let name = format!("SP²({})", base.name());
    let data = Sp2Data { base, phi, e_start };
    Ok(GradedRing::from_parts(
        name,
        Vec::new(),
        basis,
        0,
        Product::SymmetricSquare(Arc::new(data)),
        None,
    ))
}
