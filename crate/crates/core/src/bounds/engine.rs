use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::registry::Registry;
use super::{BoundsError, Flavor, SpaceSpec};
use crate::cohomology::{cup_length, nakaoka_sp2, zero_divisor_cup_length, GradedRing};

/// Which end of an interval a rule tightens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// One tightening step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub rule: String,
    /// The bound this step tightened, e.g. `TC^β_4(S(3))`.
    pub target: String,
    pub side: Side,
    pub value: u64,
    /// Other bounds and computed invariants this step used.
    pub inputs: Vec<String>,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub space: SpaceSpec,
    pub flavor: Flavor,
    pub n: usize,
    pub lower: u64,
    pub upper: u64,
    /// Steps behind the final bounds, in the order they were applied.
    pub derivations: Vec<RuleApplication>,
    /// Rules that could not run, with the reason.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl BoundInterval {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// `lower ≤ TC^Σ_4 ≤ upper`.
    pub fn summary(&self) -> String {
        format!("{} ≤ {} ≤ {}", self.lower, self.flavor.symbol(self.n), self.upper)
    }
}

/// Size limits that keep ring-based rules tractable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest input ring (basis size) fed to the symmetric-square construction.
    pub sp2_input: usize,
    /// Largest tensor power (basis size) for the zero-divisor cup-length.
    pub zcl_tensor: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sp2_input: 64,
            zcl_tensor: 512,
        }
    }
}

mod cite {
    pub const CHAIN: &str = "TC_n(X) ≤ TC^β_n(X) ≤ TC^Σ_n(X), with TC^β_2 = TC^Σ_2 since β generates Σ_2";
    pub const U1: &str = "TC^Σ_n(X) ≤ n·dim(X) + 1 for a finite CW complex X";
    pub const U2_BETA: &str = "X q-connected: TC^β_n(X) < (n·dim(X) + 1)/(q + 1) + 1";
    pub const U2_SIGMA: &str = "X q-connected: TC^Σ_n(X) < (n·dim(X) + 1)/(q + 1) + 1 (equivariant connectivity bound)";
    pub const U3: &str = "TC^β_{2k}(X) ≤ TC^β_{2k+1}(X): insert a basepoint in the middle slot";
    pub const L3: &str = "TC^Σ_2(X^l) ≤ TC^β_{2l}(X)";
    pub const L4A: &str = "TC^β_{2l}(X) ≥ cl(H^*(SP²(X^l); F₂)) + 1";
    pub const L4B: &str = "TC^Σ_{2k}(X) ≥ k·cl(H^*(SP²(X); F₂)) + 1";
    pub const L0: &str = "TC_n(X) ≥ zcl_n(H^*(X; F₂)) + 1, zero-divisor cup-length of the n-fold product";
    pub const PLANNER: &str = "odd n, odd m: the vector-field waypoint planner covers (S^m)^n with n β-invariant domains";
}

type Key = (SpaceSpec, usize);

#[derive(Clone, Copy, Debug, Default)]
struct Bound {
    value: Option<u64>,
    step: Option<usize>,
}

#[derive(Clone, Debug)]
struct Node {
    lower: [Bound; 3],
    upper: [Bound; 3],
}

impl Node {
    fn new() -> Node {
        let one = Bound {
            value: Some(1),
            step: None,
        };
        Node {
            lower: [one; 3],
            upper: [Bound::default(); 3],
        }
    }
}

struct Step {
    app: RuleApplication,
    deps: Vec<usize>,
}

struct State {
    nodes: BTreeMap<Key, Node>,
    steps: Vec<Step>,
    skipped: Vec<(Key, String)>,
}

fn target(space: &SpaceSpec, n: usize, f: Flavor) -> String {
    format!("{}({space})", f.symbol(n))
}

impl State {
    fn bound(&self, key: &Key, f: Flavor, side: Side) -> Bound {
        let node = &self.nodes[key];
        match side {
            Side::Lower => node.lower[f.index()],
            Side::Upper => node.upper[f.index()],
        }
    }

    /// Applies a bound if it strictly tightens; returns whether it did.
    #[allow(clippy::too_many_arguments)]
    fn tighten(
        &mut self,
        key: &Key,
        f: Flavor,
        side: Side,
        value: u64,
        rule: &str,
        deps: Vec<usize>,
        inputs: Vec<String>,
        citation: &str,
    ) -> Result<bool, BoundsError> {
        let node = self.nodes.get_mut(key).expect("node exists");
        let slot = match side {
            Side::Lower => &mut node.lower[f.index()],
            Side::Upper => &mut node.upper[f.index()],
        };
        let better = match (side, slot.value) {
            (_, None) => true,
            (Side::Lower, Some(v)) => value > v,
            (Side::Upper, Some(v)) => value < v,
        };
        if !better {
            return Ok(false);
        }
        *slot = Bound {
            value: Some(value),
            step: Some(self.steps.len()),
        };
        self.steps.push(Step {
            app: RuleApplication {
                rule: rule.to_string(),
                target: target(&key.0, key.1, f),
                side,
                value,
                inputs,
                citation: citation.to_string(),
            },
            deps,
        });
        let node = &self.nodes[key];
        let (lo, hi) = (node.lower[f.index()].value, node.upper[f.index()].value);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo > hi {
                return Err(BoundsError::Inconsistent {
                    target: target(&key.0, key.1, f),
                    lower: lo,
                    upper: hi,
                    rule: rule.to_string(),
                });
            }
        }
        Ok(true)
    }

    /// Copies one bound onto another if it tightens it.
    #[allow(clippy::too_many_arguments)]
    fn transfer(
        &mut self,
        from: (&Key, Flavor),
        to: (&Key, Flavor),
        side: Side,
        rule: &str,
        citation: &str,
    ) -> Result<bool, BoundsError> {
        let b = self.bound(from.0, from.1, side);
        let Some(v) = b.value else { return Ok(false) };
        let input = target(&from.0 .0, from.0 .1, from.1);
        let word = if side == Side::Lower { "≥" } else { "≤" };
        self.tighten(
            to.0,
            to.1,
            side,
            v,
            rule,
            b.step.into_iter().collect(),
            vec![format!("{input} {word} {v}")],
            citation,
        )
    }
}

/// Derives intervals for TC, TC^β and TC^Σ by fixed-point iteration over
/// the inequality rules, computed cup-lengths and the citation registry.
///
/// Cup-length computations are cached across calls.
pub struct BoundsEngine {
    registry: Registry,
    limits: Limits,
    rings: Mutex<HashMap<SpaceSpec, Arc<GradedRing>>>,
    sp2_cl: Mutex<HashMap<SpaceSpec, usize>>,
    zcl: Mutex<HashMap<(SpaceSpec, usize), usize>>,
}

impl Default for BoundsEngine {
    fn default() -> Self {
        BoundsEngine::new()
    }
}

enum Need {
    Sp2(SpaceSpec),
    Zcl(SpaceSpec, usize),
}

impl BoundsEngine {
    pub fn new() -> BoundsEngine {
        BoundsEngine::with_registry(Registry::builtin(), Limits::default())
    }

    pub fn with_registry(registry: Registry, limits: Limits) -> BoundsEngine {
        BoundsEngine {
            registry,
            limits,
            rings: Mutex::new(HashMap::new()),
            sp2_cl: Mutex::new(HashMap::new()),
            zcl: Mutex::new(HashMap::new()),
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn ring(&self, space: &SpaceSpec) -> Option<Arc<GradedRing>> {
        if let Some(r) = self.rings.lock().unwrap().get(space) {
            return Some(r.clone());
        }
        let r = Arc::new(space.ring()?);
        self.rings.lock().unwrap().insert(space.clone(), r.clone());
        Some(r)
    }

    /// `cl(H^*(SP²(space)))`, or why it was not computed.
    pub fn sp2_cup_length(&self, space: &SpaceSpec) -> Result<usize, String> {
        if let Some(&c) = self.sp2_cl.lock().unwrap().get(space) {
            return Ok(c);
        }
        let dim = match space.ring_dim() {
            None => return Err(format!("no cohomology ring for {space}")),
            Some(d) => d,
        };
        if dim > self.limits.sp2_input {
            return Err(format!(
                "H^*({space}) has {dim} basis elements, above the limit {}",
                self.limits.sp2_input
            ));
        }
        let ring = self.ring(space).ok_or_else(|| format!("no cohomology ring for {space}"))?;
        let sp = nakaoka_sp2(&ring).map_err(|e| e.to_string())?;
        let c = cup_length(&sp);
        self.sp2_cl.lock().unwrap().insert(space.clone(), c);
        Ok(c)
    }

    /// Zero-divisor cup-length of the `n`-fold product, or why it was not computed.
    pub fn zero_divisor_cup_length(&self, space: &SpaceSpec, n: usize) -> Result<usize, String> {
        let key = (space.clone(), n);
        if let Some(&c) = self.zcl.lock().unwrap().get(&key) {
            return Ok(c);
        }
        let dim = space
            .ring_dim()
            .ok_or_else(|| format!("no cohomology ring for {space}"))?;
        let size = dim.checked_pow(n as u32).unwrap_or(usize::MAX);
        if size > self.limits.zcl_tensor {
            return Err(format!(
                "H^*({space})^⊗{n} has {size} basis elements, above the limit {}",
                self.limits.zcl_tensor
            ));
        }
        let ring = self.ring(space).ok_or_else(|| format!("no cohomology ring for {space}"))?;
        let c = zero_divisor_cup_length(&ring, n);
        self.zcl.lock().unwrap().insert(key, c);
        Ok(c)
    }

    /// Interval for `flavor` at `(space, n)` with its derivation.
    pub fn compute_bounds(
        &self,
        space: &SpaceSpec,
        n: usize,
        flavor: Flavor,
    ) -> Result<BoundInterval, BoundsError> {
        Ok(self
            .compute_all(space, n)?
            .into_iter()
            .find(|b| b.flavor == flavor)
            .expect("all flavors computed"))
    }

    /// Intervals for all three flavors at `(space, n)`.
    pub fn compute_all(&self, space: &SpaceSpec, n: usize) -> Result<Vec<BoundInterval>, BoundsError> {
        if n < 2 {
            return Err(BoundsError::InvalidN(n));
        }
        let keys = node_closure(space, n);
        self.precompute(&keys);
        let mut st = State {
            nodes: keys.iter().map(|k| (k.clone(), Node::new())).collect(),
            steps: Vec::new(),
            skipped: Vec::new(),
        };
        for key in &keys {
            self.constant_rules(&mut st, key)?;
        }
        loop {
            let mut changed = false;
            for key in &keys {
                changed |= propagate(&mut st, key)?;
            }
            if !changed {
                break;
            }
        }
        let root = (space.clone(), n);
        Ok(Flavor::ALL
            .iter()
            .map(|&f| finish(&st, &root, f))
            .collect())
    }

    /// Runs the expensive cup-length computations the rules will ask for, in parallel.
    fn precompute(&self, keys: &[Key]) {
        let mut needs = Vec::new();
        for (space, k) in keys {
            if !space.has_ring() {
                continue;
            }
            needs.push(Need::Zcl(space.clone(), *k));
            if k % 2 == 0 {
                needs.push(Need::Sp2(space.power(k / 2)));
                needs.push(Need::Sp2(space.clone()));
            }
        }
        needs.par_iter().for_each(|need| {
            let _ = match need {
                Need::Sp2(s) => self.sp2_cup_length(s),
                Need::Zcl(s, k) => self.zero_divisor_cup_length(s, *k),
            };
        });
    }

    fn constant_rules(&self, st: &mut State, key: &Key) -> Result<(), BoundsError> {
        let (space, n) = (&key.0, key.1);
        let dim = space.dim() as u64;
        let nn = n as u64;

        for f in Flavor::ALL {
            for hit in self.registry.lookup_all(space, n, f)? {
                let input = vec![format!("registry entry {}", hit.entry)];
                st.tighten(key, f, Side::Lower, hit.value, "REGISTRY", vec![], input.clone(), &hit.citation)?;
                st.tighten(key, f, Side::Upper, hit.value, "REGISTRY", vec![], input, &hit.citation)?;
            }
        }

        let u1 = nn * dim + 1;
        for f in Flavor::ALL {
            let inputs = vec![format!("dim {space} = {dim}")];
            st.tighten(key, f, Side::Upper, u1, "U1", vec![], inputs, cite::U1)?;
        }

        let q = space.connectivity() as u64;
        let u2 = strict_upper(nn * dim + 1 + (q + 1), q + 1);
        let inputs = vec![format!("dim {space} = {dim}"), format!("{space} is {q}-connected")];
        st.tighten(key, Flavor::TCbeta, Side::Upper, u2, "U2", vec![], inputs.clone(), cite::U2_BETA)?;
        st.tighten(key, Flavor::TCsigma, Side::Upper, u2, "U2", vec![], inputs, cite::U2_SIGMA)?;

        if let SpaceSpec::Sphere(m) = space {
            if m % 2 == 1 && n % 2 == 1 {
                let inputs = vec![format!("m = {m}, n = {n} odd")];
                st.tighten(key, Flavor::TCbeta, Side::Upper, nn, "PLANNER", vec![], inputs, cite::PLANNER)?;
            }
        }

        let mut skipped = Vec::new();

        match self.zero_divisor_cup_length(space, n) {
            Ok(z) => {
                let inputs = vec![format!("zcl_{n}(H^*({space})) = {z}")];
                st.tighten(key, Flavor::TC, Side::Lower, z as u64 + 1, "L0", vec![], inputs, cite::L0)?;
            }
            Err(why) => skipped.push(skip(key, "L0", why)),
        }

        if n % 2 == 0 {
            let l = n / 2;
            let power = space.power(l);
            match self.sp2_cup_length(&power) {
                Ok(c) => {
                    let inputs = vec![format!("cl(SP²({power})) = {c}")];
                    st.tighten(key, Flavor::TCbeta, Side::Lower, c as u64 + 1, "L4a", vec![], inputs, cite::L4A)?;
                }
                Err(why) => skipped.push(skip(key, "L4a", why)),
            }
            match self.sp2_cup_length(space) {
                Ok(c) => {
                    let inputs = vec![format!("cl(SP²({space})) = {c}"), format!("k = {l}")];
                    let v = l as u64 * c as u64 + 1;
                    st.tighten(key, Flavor::TCsigma, Side::Lower, v, "L4b", vec![], inputs, cite::L4B)?;
                }
                Err(why) => skipped.push(skip(key, "L4b", why)),
            }
        }
        st.skipped.extend(skipped);
        Ok(())
    }
}

fn skip(key: &Key, rule: &str, why: String) -> (Key, String) {
    (key.clone(), format!("{rule}: {why}"))
}

/// Largest integer strictly below `num/den`.
fn strict_upper(num: u64, den: u64) -> u64 {
    if num % den == 0 {
        num / den - 1
    } else {
        num / den
    }
}

/// All (space, n) pairs the rules can connect to the query.
fn node_closure(space: &SpaceSpec, n: usize) -> Vec<Key> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![(space.clone(), n)];
    while let Some(key) = stack.pop() {
        if !seen.insert(key.clone()) {
            continue;
        }
        let (s, k) = &key;
        if k % 2 == 0 {
            stack.push((s.clone(), k + 1));
            if k / 2 >= 2 {
                stack.push((s.power(k / 2), 2));
            }
        }
    }
    seen.into_iter().collect()
}

fn propagate(st: &mut State, key: &Key) -> Result<bool, BoundsError> {
    use Flavor::*;
    let mut changed = false;
    changed |= st.transfer((key, TC), (key, TCbeta), Side::Lower, "CHAIN", cite::CHAIN)?;
    changed |= st.transfer((key, TCbeta), (key, TCsigma), Side::Lower, "CHAIN", cite::CHAIN)?;
    changed |= st.transfer((key, TCsigma), (key, TCbeta), Side::Upper, "CHAIN", cite::CHAIN)?;
    changed |= st.transfer((key, TCbeta), (key, TC), Side::Upper, "CHAIN", cite::CHAIN)?;
    if key.1 == 2 {
        changed |= st.transfer((key, TCsigma), (key, TCbeta), Side::Lower, "CHAIN", cite::CHAIN)?;
        changed |= st.transfer((key, TCbeta), (key, TCsigma), Side::Upper, "CHAIN", cite::CHAIN)?;
    }
    let (space, n) = key;
    if n % 2 == 0 {
        let odd = (space.clone(), n + 1);
        if st.nodes.contains_key(&odd) {
            changed |= st.transfer((&odd, TCbeta), (key, TCbeta), Side::Upper, "U3", cite::U3)?;
            changed |= st.transfer((key, TCbeta), (&odd, TCbeta), Side::Lower, "U3", cite::U3)?;
        }
        let l = n / 2;
        let pw = (space.power(l), 2);
        if l >= 2 && st.nodes.contains_key(&pw) {
            changed |= st.transfer((&pw, TCsigma), (key, TCbeta), Side::Lower, "L3", cite::L3)?;
            changed |= st.transfer((key, TCbeta), (&pw, TCsigma), Side::Upper, "L3", cite::L3)?;
        }
    }
    Ok(changed)
}

fn finish(st: &State, root: &Key, f: Flavor) -> BoundInterval {
    let lo = st.bound(root, f, Side::Lower);
    let hi = st.bound(root, f, Side::Upper);
    let mut used = BTreeSet::new();
    let mut stack: Vec<usize> = lo.step.into_iter().chain(hi.step).collect();
    while let Some(s) = stack.pop() {
        if used.insert(s) {
            stack.extend(&st.steps[s].deps);
        }
    }
    let by_target: HashMap<String, &Key> = st
        .nodes
        .keys()
        .flat_map(|k| Flavor::ALL.iter().map(move |&g| (target(&k.0, k.1, g), k)))
        .collect();
    let involved: BTreeSet<&Key> = used
        .iter()
        .map(|&s| by_target[&st.steps[s].app.target])
        .chain(std::iter::once(root))
        .collect();
    let mut skipped: Vec<String> = st
        .skipped
        .iter()
        .filter(|(k, _)| involved.contains(k))
        .map(|(k, why)| format!("{} at n = {}: {why}", k.0, k.1))
        .collect();
    skipped.dedup();
    BoundInterval {
        space: root.0.clone(),
        flavor: f,
        n: root.1,
        lower: lo.value.unwrap_or(1),
        upper: hi.value.expect("U1 always gives an upper bound"),
        derivations: used.into_iter().map(|s| st.steps[s].app.clone()).collect(),
        skipped,
    }
}

/// Deterministic text report of an interval and the steps behind it.
pub fn explain(interval: &BoundInterval) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  for X = {}", interval.summary(), interval.space);
    if interval.derivations.iter().all(|d| d.side != Side::Lower) {
        let _ = writeln!(out, "  lower bound 1 is trivial");
    }
    for (i, d) in interval.derivations.iter().enumerate() {
        let word = if d.side == Side::Lower { "≥" } else { "≤" };
        let _ = writeln!(out, "  [{}] {:<8} {} {word} {}", i + 1, d.rule, d.target, d.value);
        for input in &d.inputs {
            let _ = writeln!(out, "         from {input}");
        }
        let _ = writeln!(out, "         cite: {}", d.citation);
    }
    for s in &interval.skipped {
        let _ = writeln!(out, "  skipped {s}");
    }
    out
}
