use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::f2::{binomial_is_odd, BitRow};
use super::RingError;

pub type BasisId = usize;

/// Label of a basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum BasisLabel {
    Unit,
    /// Product of generators with the given exponents.
    Monomial { exponents: Vec<u32> },
    /// `φ(b_i ⊗ b_j)` with `i < j`, indices into the base ring.
    Phi { i: BasisId, j: BasisId },
    /// `E_s(b_i)`, index into the base ring.
    E { s: usize, i: BasisId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasisElement {
    pub id: BasisId,
    pub degree: usize,
    pub label: BasisLabel,
}

/// A cohomology class: F₂ coefficients over the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub bits: BitRow,
    pub homogeneous_degree: Option<usize>,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn support(&self) -> Vec<BasisId> {
        self.bits.ones().collect()
    }
}

/// Sparse F₂ combination: sorted distinct ids.
pub(crate) type Sparse = Vec<BasisId>;

/// Adds `id` to an accumulating F₂ sum.
pub(crate) fn toggle(acc: &mut BTreeSet<BasisId>, id: BasisId) {
    if !acc.remove(&id) {
        acc.insert(id);
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Product {
    /// Dense `dim × dim` table.
    Table(Vec<Sparse>),
    /// Ids are `l * right.dim() + r`.
    Tensor {
        left: Arc<GradedRing>,
        right: Arc<GradedRing>,
    },
    SymmetricSquare(Arc<Sp2Data>),
}

#[derive(Clone, Debug)]
pub(crate) struct Sp2Data {
    pub base: Arc<GradedRing>,
    /// phi[i][j - i - 1] for i < j
    pub phi: Vec<Vec<BasisId>>,
    /// e_start[i] is the id of E_2(b_i); E_s(b_i) is e_start[i] + s - 2
    pub e_start: Vec<BasisId>,
}

impl Sp2Data {
    fn phi_id(&self, i: BasisId, j: BasisId) -> BasisId {
        debug_assert!(i < j);
        self.phi[i][j - i - 1]
    }

    /// Adds `φ(b_a ⊗ b_b)` to `acc`, normalized by symmetry and the diagonal rule.
    fn add_phi(&self, a: BasisId, b: BasisId, acc: &mut BTreeSet<BasisId>) {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => toggle(acc, self.phi_id(a, b)),
            Greater => toggle(acc, self.phi_id(b, a)),
            Equal => {
                let d = self.base.degree(a);
                for s in 2..=d {
                    for &k in self.base.sq_sparse(d - s, a) {
                        toggle(acc, self.e_start[k] + s - 2);
                    }
                }
            }
        }
    }
}

/// A finite graded-commutative algebra over F₂, optionally with Steenrod squares.
///
/// Rings are immutable once built and cheap to share behind an [`Arc`].
#[derive(Clone, Debug)]
pub struct GradedRing {
    name: String,
    generators: Vec<String>,
    basis: Vec<GradedBasisElement>,
    unit: BasisId,
    top_degree: usize,
    product: Product,
    /// sq[id][k] = Sq^k(b_id) for 0 <= k <= deg(b_id)
    sq: Option<Vec<Vec<Sparse>>>,
    cache: OnceLock<Vec<Sparse>>,
}

/// Rings up to this size get their products memoised in a dense table.
const CACHE_LIMIT: usize = 1500;

impl GradedRing {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GradedBasisElement] {
        &self.basis
    }

    pub fn unit_id(&self) -> BasisId {
        self.unit
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn degree(&self, id: BasisId) -> usize {
        self.basis[id].degree
    }

    pub fn has_sq(&self) -> bool {
        self.sq.is_some()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// Basis-element counts by degree, `0..=top_degree`.
    pub fn poincare_series(&self) -> Vec<usize> {
        let mut out = vec![0; self.top_degree + 1];
        for b in &self.basis {
            out[b.degree] += 1;
        }
        out
    }

    /// Human-readable Poincaré polynomial such as `1 + 2t^2 + t^4`.
    pub fn poincare_polynomial(&self) -> String {
        let mut terms = Vec::new();
        for (d, &c) in self.poincare_series().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && d > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match d {
                0 => c.to_string(),
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{d}"),
            });
        }
        terms.join(" + ")
    }

    pub fn class(&self, ids: &[BasisId]) -> CohClass {
        let bits = BitRow::from_indices(self.dim(), ids.iter().copied());
        self.wrap(bits)
    }

    fn wrap(&self, bits: BitRow) -> CohClass {
        let homogeneous_degree = {
            let mut degs = bits.ones().map(|i| self.degree(i));
            match degs.next() {
                None => None,
                Some(d) => degs.all(|e| e == d).then_some(d),
            }
        };
        CohClass {
            bits,
            homogeneous_degree,
        }
    }

    /// Product of two basis elements as a sorted list of ids.
    pub fn mul_basis(&self, a: BasisId, b: BasisId) -> Vec<BasisId> {
        if let Some(table) = self.cache.get() {
            return table[a * self.dim() + b].clone();
        }
        self.mul_basis_uncached(a, b)
    }

    /// Fills the product memo table for small rings; no-op otherwise.
    pub fn warm_cache(&self) {
        let n = self.dim();
        if n <= CACHE_LIMIT && !matches!(self.product, Product::Table(_)) {
            self.cache.get_or_init(|| {
                let mut t = vec![Vec::new(); n * n];
                for a in 0..n {
                    for b in a..n {
                        let p = self.mul_basis_uncached(a, b);
                        t[b * n + a] = p.clone();
                        t[a * n + b] = p;
                    }
                }
                t
            });
        }
    }

    fn mul_basis_uncached(&self, a: BasisId, b: BasisId) -> Vec<BasisId> {
        if self.degree(a) + self.degree(b) > self.top_degree {
            return Vec::new();
        }
        match &self.product {
            Product::Table(t) => t[a * self.dim() + b].clone(),
            Product::Tensor { left, right } => {
                let w = right.dim();
                let (la, ra) = (a / w, a % w);
                let (lb, rb) = (b / w, b % w);
                let lp = left.mul_basis(la, lb);
                if lp.is_empty() {
                    return Vec::new();
                }
                let rp = right.mul_basis(ra, rb);
                let mut out = Vec::with_capacity(lp.len() * rp.len());
                for &l in &lp {
                    for &r in &rp {
                        out.push(l * w + r);
                    }
                }
                out
            }
            Product::SymmetricSquare(sp) => {
                if a == self.unit {
                    return vec![b];
                }
                if b == self.unit {
                    return vec![a];
                }
                let (BasisLabel::Phi { i, j }, BasisLabel::Phi { i: u, j: v }) =
                    (&self.basis[a].label, &self.basis[b].label)
                else {
                    // anything times an E element vanishes
                    return Vec::new();
                };
                let base = &sp.base;
                let mut acc = BTreeSet::new();
                for (p, q, r, s) in [(*i, *u, *j, *v), (*i, *v, *j, *u)] {
                    let left = base.mul_basis(p, q);
                    if left.is_empty() {
                        continue;
                    }
                    let right = base.mul_basis(r, s);
                    for &c in &left {
                        for &d in &right {
                            sp.add_phi(c, d, &mut acc);
                        }
                    }
                }
                acc.into_iter().collect()
            }
        }
    }

    /// Product of two classes.
    pub fn mul(&self, x: &CohClass, y: &CohClass) -> CohClass {
        let mut bits = BitRow::zeros(self.dim());
        for a in x.bits.ones() {
            for b in y.bits.ones() {
                for c in self.mul_basis(a, b) {
                    bits.toggle(c);
                }
            }
        }
        self.wrap(bits)
    }

    /// Product of a class with a single basis element.
    pub fn mul_by_basis(&self, x: &BitRow, b: BasisId) -> BitRow {
        let mut bits = BitRow::zeros(self.dim());
        for a in x.ones() {
            for c in self.mul_basis(a, b) {
                bits.toggle(c);
            }
        }
        bits
    }

    pub(crate) fn sq_sparse(&self, k: usize, id: BasisId) -> &[BasisId] {
        let sq = self.sq.as_ref().expect("ring has Steenrod squares");
        sq[id].get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `Sq^k` of a basis element; `None` if the ring carries no squares.
    pub fn sq_basis(&self, k: usize, id: BasisId) -> Option<Vec<BasisId>> {
        self.sq.as_ref()?;
        Some(self.sq_sparse(k, id).to_vec())
    }

    /// `Sq^k` of a class.
    pub fn sq(&self, k: usize, x: &CohClass) -> Option<CohClass> {
        self.sq.as_ref()?;
        let mut bits = BitRow::zeros(self.dim());
        for a in x.bits.ones() {
            for &c in self.sq_sparse(k, a) {
                bits.toggle(c);
            }
        }
        Some(self.wrap(bits))
    }

    /// Looks up a basis element by label.
    pub fn find(&self, label: &BasisLabel) -> Option<BasisId> {
        self.basis.iter().position(|b| &b.label == label)
    }

    /// Display name of a basis element, e.g. `x^2`, `φ(1⊗e2)`, `E_2(e2)`.
    pub fn label_name(&self, id: BasisId) -> String {
        match &self.basis[id].label {
            BasisLabel::Unit => "1".into(),
            BasisLabel::Monomial { exponents } => {
                let mut s = String::new();
                for (g, &e) in self.generators.iter().zip(exponents) {
                    if e == 0 {
                        continue;
                    }
                    if !s.is_empty() {
                        s.push('·');
                    }
                    s.push_str(g);
                    if e > 1 {
                        let _ = write!(s, "^{e}");
                    }
                }
                s
            }
            BasisLabel::Phi { i, j } => {
                let base = self.sp2_base().expect("phi labels only in symmetric squares");
                format!("φ({}⊗{})", base.label_name(*i), base.label_name(*j))
            }
            BasisLabel::E { s, i } => {
                let base = self.sp2_base().expect("E labels only in symmetric squares");
                format!("E_{s}({})", base.label_name(*i))
            }
        }
    }

    /// The input ring when this ring was built as a symmetric square.
    pub fn sp2_base(&self) -> Option<&GradedRing> {
        match &self.product {
            Product::SymmetricSquare(sp) => Some(&sp.base),
            _ => None,
        }
    }

    pub(crate) fn tensor_factors(&self) -> Option<(&Arc<GradedRing>, &Arc<GradedRing>)> {
        match &self.product {
            Product::Tensor { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub(crate) fn from_parts(
        name: String,
        generators: Vec<String>,
        basis: Vec<GradedBasisElement>,
        unit: BasisId,
        product: Product,
        sq: Option<Vec<Vec<Sparse>>>,
    ) -> GradedRing {
        let top_degree = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        GradedRing {
            name,
            generators,
            basis,
            unit,
            top_degree,
            product,
            sq,
            cache: OnceLock::new(),
        }
    }

    /// Checks gradedness, commutativity, unitality, associativity, and the
    /// Steenrod axioms `Sq^0 = id`, `Sq^{deg a} a = a²`.
    ///
    /// Associativity is checked on a deterministic sample of 200 triples
    /// unless `full` is set.
    pub fn check_axioms(&self, full: bool) -> Result<(), RingError> {
        let n = self.dim();
        let fail = |msg: String| Err(RingError::AxiomViolation(msg));
        let mut seen = std::collections::HashSet::new();
        for (k, b) in self.basis.iter().enumerate() {
            if b.id != k {
                return fail(format!("basis element {k} carries id {}", b.id));
            }
            if !seen.insert(&b.label) {
                return fail(format!("duplicate label {:?}", b.label));
            }
        }
        if self.degree(self.unit) != 0 {
            return fail("unit is not in degree 0".into());
        }
        for a in 0..n {
            if self.mul_basis(self.unit, a) != vec![a] {
                return fail(format!("1·{} ≠ {}", self.label_name(a), self.label_name(a)));
            }
            for b in a..n {
                let p = self.mul_basis(a, b);
                let d = self.degree(a) + self.degree(b);
                if let Some(&bad) = p.iter().find(|&&c| self.degree(c) != d) {
                    return fail(format!(
                        "{}·{} has a component {} outside degree {d}",
                        self.label_name(a),
                        self.label_name(b),
                        self.label_name(bad)
                    ));
                }
                if p != self.mul_basis(b, a) {
                    return fail(format!(
                        "{} and {} do not commute",
                        self.label_name(a),
                        self.label_name(b)
                    ));
                }
            }
        }
        let assoc = |a: BasisId, b: BasisId, c: BasisId| {
            let (x, y, z) = (self.class(&[a]), self.class(&[b]), self.class(&[c]));
            self.mul(&self.mul(&x, &y), &z) == self.mul(&x, &self.mul(&y, &z))
        };
        let mut bad = None;
        if full {
            'outer: for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            bad = Some((a, b, c));
                            break 'outer;
                        }
                    }
                }
            }
        } else {
            // fixed LCG so the sample does not depend on any external seed
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) as usize) % n
            };
            for _ in 0..200 {
                let (a, b, c) = (next(), next(), next());
                if !assoc(a, b, c) {
                    bad = Some((a, b, c));
                    break;
                }
            }
        }
        if let Some((a, b, c)) = bad {
            return fail(format!(
                "associativity fails on ({}, {}, {})",
                self.label_name(a),
                self.label_name(b),
                self.label_name(c)
            ));
        }
        if self.sq.is_some() {
            for a in 0..n {
                let d = self.degree(a);
                if self.sq_sparse(0, a) != [a] {
                    return fail(format!("Sq^0 {} ≠ itself", self.label_name(a)));
                }
                if self.sq_sparse(d, a) != self.mul_basis(a, a).as_slice() {
                    return fail(format!("Sq^{d} {} ≠ its square", self.label_name(a)));
                }
                for k in 0..=d {
                    if let Some(&c) = self.sq_sparse(k, a).iter().find(|&&c| self.degree(c) != d + k) {
                        return fail(format!(
                            "Sq^{k} {} has component {} in the wrong degree",
                            self.label_name(a),
                            self.label_name(c)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `H^*(S^m; F₂)`: basis `{1, e_m}`, `e_m² = 0`, trivial squares.
pub fn ring_of_sphere(m: usize) -> Result<GradedRing, RingError> {
    if m == 0 {
        return Err(RingError::InvalidDimension(m));
    }
    let basis = vec![
        GradedBasisElement {
            id: 0,
            degree: 0,
            label: BasisLabel::Unit,
        },
        GradedBasisElement {
            id: 1,
            degree: m,
            label: BasisLabel::Monomial { exponents: vec![1] },
        },
    ];
    let table = vec![vec![0], vec![1], vec![1], vec![]];
    let mut e_sq = vec![Vec::new(); m + 1];
    e_sq[0] = vec![1];
    let sq = vec![vec![vec![0]], e_sq];
    Ok(GradedRing::from_parts(
        format!("S^{m}"),
        vec![format!("e{m}")],
        basis,
        0,
        Product::Table(table),
        Some(sq),
    ))
}

/// `H^*(RP^m; F₂) = F₂[x]/(x^{m+1})` with `Sq^k x^j = C(j,k) x^{j+k}`.
pub fn ring_of_rp(m: usize) -> Result<GradedRing, RingError> {
    if m == 0 {
        return Err(RingError::InvalidDimension(m));
    }
    let n = m + 1;
    let basis = (0..n)
        .map(|j| GradedBasisElement {
            id: j,
            degree: j,
            label: if j == 0 {
                BasisLabel::Unit
            } else {
                BasisLabel::Monomial {
                    exponents: vec![j as u32],
                }
            },
        })
        .collect();
    let mut table = vec![Vec::new(); n * n];
    for a in 0..n {
        for b in 0..n {
            if a + b <= m {
                table[a * n + b] = vec![a + b];
            }
        }
    }
    let sq = (0..n)
        .map(|j| {
            (0..=j)
                .map(|k| {
                    if j + k <= m && binomial_is_odd(j, k) {
                        vec![j + k]
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    Ok(GradedRing::from_parts(
        format!("RP^{m}"),
        vec!["x".into()],
        basis,
        0,
        Product::Table(table),
        Some(sq),
    ))
}

/// Tensor product `a ⊗ b` with componentwise multiplication and, when both
/// factors carry squares, the Cartan formula.
pub fn kunneth(a: &GradedRing, b: &GradedRing) -> GradedRing {
    kunneth_arc(Arc::new(a.clone()), Arc::new(b.clone()))
}

pub(crate) fn kunneth_arc(left: Arc<GradedRing>, right: Arc<GradedRing>) -> GradedRing {
    let w = right.dim();
    let mut generators: Vec<String> = left
        .generators
        .iter()
        .chain(&right.generators)
        .cloned()
        .collect();
    let distinct: BTreeSet<&String> = generators.iter().collect();
    if distinct.len() < generators.len() {
        generators = generators
            .iter()
            .enumerate()
            .map(|(k, g)| format!("{g}_{}", k + 1))
            .collect();
    }
    let exps = |r: &GradedRing, id: BasisId| -> Vec<u32> {
        match &r.basis[id].label {
            BasisLabel::Unit => vec![0; r.generators.len()],
            BasisLabel::Monomial { exponents } => exponents.clone(),
            // a symmetric square has no generator names; treat each basis element as one
            _ => panic!("tensor factors must be monomial rings"),
        }
    };
    let mut basis = Vec::with_capacity(left.dim() * w);
    for l in 0..left.dim() {
        for r in 0..w {
            let id = l * w + r;
            let label = if l == left.unit && r == right.unit {
                BasisLabel::Unit
            } else {
                let mut e = exps(&left, l);
                e.extend(exps(&right, r));
                BasisLabel::Monomial { exponents: e }
            };
            basis.push(GradedBasisElement {
                id,
                degree: left.degree(l) + right.degree(r),
                label,
            });
        }
    }
    let sq = (left.has_sq() && right.has_sq()).then(|| {
        let mut out = Vec::with_capacity(basis.len());
        for l in 0..left.dim() {
            for r in 0..w {
                let d = left.degree(l) + right.degree(r);
                let mut per_k = Vec::with_capacity(d + 1);
                for k in 0..=d {
                    let mut acc = BTreeSet::new();
                    for i in 0..=k.min(left.degree(l)) {
                        if k - i > right.degree(r) {
                            continue;
                        }
                        for &x in left.sq_sparse(i, l) {
                            for &y in right.sq_sparse(k - i, r) {
                                toggle(&mut acc, x * w + y);
                            }
                        }
                    }
                    per_k.push(acc.into_iter().collect());
                }
                out.push(per_k);
            }
        }
        out
    });
    let unit = left.unit * w + right.unit;
    let name = format!("{} ⊗ {}", paren(&left.name), paren(&right.name));
    GradedRing::from_parts(
        name,
        generators,
        basis,
        unit,
        Product::Tensor { left, right },
        sq,
    )
}

fn paren(name: &str) -> String {
    if name.contains(' ') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

/// `r^{⊗k}` for `k >= 1`.
pub fn tensor_power(r: &GradedRing, k: usize) -> GradedRing {
    assert!(k >= 1, "tensor power needs k >= 1");
    let base = Arc::new(r.clone());
    let mut acc = base.clone();
    for _ in 1..k {
        acc = Arc::new(kunneth_arc(acc, base.clone()));
    }
    let mut out = Arc::try_unwrap(acc).unwrap_or_else(|a| (*a).clone());
    if k > 1 {
        out.generators = (1..=k)
            .flat_map(|c| r.generators.iter().map(move |g| format!("{g}_{c}")))
            .collect();
        out.name = format!("({})^{k}", r.name);
    }
    out
}

/// JSON dump of a ring: basis, sparse products (`i <= j`), sparse squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingDump {
    pub name: String,
    pub generators: Vec<String>,
    pub unit: BasisId,
    pub top_degree: usize,
    pub basis: Vec<DumpElement>,
    pub mult: Vec<MultEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sq: Option<Vec<SqEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpElement {
    pub id: BasisId,
    pub degree: usize,
    pub label: BasisLabel,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultEntry {
    pub i: BasisId,
    pub j: BasisId,
    pub product: Vec<BasisId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqEntry {
    pub k: usize,
    pub i: BasisId,
    pub value: Vec<BasisId>,
}

impl GradedRing {
    pub fn dump(&self) -> RingDump {
        let n = self.dim();
        let basis = self
            .basis
            .iter()
            .map(|b| DumpElement {
                id: b.id,
                degree: b.degree,
                label: b.label.clone(),
                name: self.label_name(b.id),
            })
            .collect();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in i..n {
                let product = self.mul_basis(i, j);
                if !product.is_empty() {
                    mult.push(MultEntry { i, j, product });
                }
            }
        }
        let sq = self.sq.as_ref().map(|sq| {
            let mut out = Vec::new();
            for (i, per_k) in sq.iter().enumerate() {
                for (k, value) in per_k.iter().enumerate() {
                    if !value.is_empty() {
                        out.push(SqEntry {
                            k,
                            i,
                            value: value.clone(),
                        });
                    }
                }
            }
            out
        });
        RingDump {
            name: self.name.clone(),
            generators: self.generators.clone(),
            unit: self.unit,
            top_degree: self.top_degree,
            basis,
            mult,
            sq,
        }
    }

    /// Rebuilds a table ring from a dump and checks its axioms.
    pub fn from_dump(dump: &RingDump) -> Result<GradedRing, RingError> {
        let n = dump.basis.len();
        let bad = |m: String| RingError::InvalidDump(m);
        let basis: Vec<GradedBasisElement> = dump
            .basis
            .iter()
            .map(|e| GradedBasisElement {
                id: e.id,
                degree: e.degree,
                label: e.label.clone(),
            })
            .collect();
        if dump.unit >= n {
            return Err(bad(format!("unit id {} out of range", dump.unit)));
        }
        let in_range = |ids: &[BasisId]| ids.iter().all(|&c| c < n);
        let mut table = vec![Vec::new(); n * n];
        for e in &dump.mult {
            if e.i >= n || e.j >= n || !in_range(&e.product) {
                return Err(bad(format!("product entry ({}, {}) out of range", e.i, e.j)));
            }
            let mut p = e.product.clone();
            p.sort_unstable();
            p.dedup();
            table[e.i * n + e.j] = p.clone();
            table[e.j * n + e.i] = p;
        }
        let sq = match &dump.sq {
            None => None,
            Some(entries) => {
                let mut sq: Vec<Vec<Sparse>> = basis
                    .iter()
                    .map(|b| vec![Vec::new(); b.degree + 1])
                    .collect();
                for e in entries {
                    if e.i >= n || !in_range(&e.value) || e.k > basis[e.i].degree {
                        return Err(bad(format!("square entry ({}, {}) out of range", e.k, e.i)));
                    }
                    let mut v = e.value.clone();
                    v.sort_unstable();
                    v.dedup();
                    sq[e.i][e.k] = v;
                }
                Some(sq)
            }
        };
        let ring = GradedRing::from_parts(
            dump.name.clone(),
            dump.generators.clone(),
            basis,
            dump.unit,
            Product::Table(table),
            sq,
        );
        if ring
            .basis
            .iter()
            .any(|b| matches!(b.label, BasisLabel::Phi { .. } | BasisLabel::E { .. }))
        {
            return Err(bad("symmetric-square labels cannot be reloaded without their base ring".into()));
        }
        ring.check_axioms(false)?;
        Ok(ring)
    }
}
