//! Brute-force zero-divisor cup-length for `F₂[x]/(x^{m+1}) ⊗ F₂[y]/(y^{m+1})`.
//!
//! Written directly against polynomial arithmetic, sharing no code with the
//! library: elements are bitmasks over the monomials `x^a y^b`, and every
//! element of the algebra is enumerated.

fn index(m: usize, a: usize, b: usize) -> usize {
    a * (m + 1) + b
}

fn mul(m: usize, p: u64, q: u64) -> u64 {
    let n = (m + 1) * (m + 1);
    let mut out = 0u64;
    for i in 0..n {
        if p >> i & 1 == 0 {
            continue;
        }
        let (a, b) = (i / (m + 1), i % (m + 1));
        for j in 0..n {
            if q >> j & 1 == 0 {
                continue;
            }
            let (c, d) = (j / (m + 1), j % (m + 1));
            if a + c <= m && b + d <= m {
                out ^= 1 << index(m, a + c, b + d);
            }
        }
    }
    out
}

/// Image of `x^a y^b` under `x, y -> x`, as a bitmask over `x^0..x^m`.
fn restrict(m: usize, p: u64) -> u64 {
    let n = (m + 1) * (m + 1);
    let mut out = 0u64;
    for i in 0..n {
        if p >> i & 1 == 1 {
            let deg = i / (m + 1) + i % (m + 1);
            if deg <= m {
                out ^= 1 << deg;
            }
        }
    }
    out
}

/// Longest nonzero product of kernel elements, found by exhaustive search.
pub fn rp_zero_divisor_cup_length(m: usize) -> usize {
    let n = (m + 1) * (m + 1);
    assert!(n <= 16, "enumeration limited to 2^16 elements");
    let kernel: Vec<u64> = (1u64..1 << n).filter(|&z| restrict(m, z) == 0).collect();
    let mut reachable: std::collections::BTreeSet<u64> = kernel.iter().copied().collect();
    let mut k = 0;
    while !reachable.is_empty() {
        k += 1;
        let mut next = std::collections::BTreeSet::new();
        for &p in &reachable {
            for &z in &kernel {
                let q = mul(m, p, z);
                if q != 0 {
                    next.insert(q);
                }
            }
        }
        reachable = next;
    }
    k
}

/// Independent evaluation of products in the symmetric square of
/// `(RP^m)^l`, working with exponent vectors instead of basis ids.
pub mod sp2 {
    use std::collections::BTreeSet;

    pub type Mono = Vec<usize>;

    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
    pub enum Term {
        /// unordered pair, stored sorted, entries distinct
        Phi(Mono, Mono),
        E(usize, Mono),
    }

    pub type Class = BTreeSet<Term>;

    fn flip(c: &mut Class, t: Term) {
        if !c.remove(&t) {
            c.insert(t);
        }
    }

    fn mono_mul(m: usize, a: &Mono, b: &Mono) -> Option<Mono> {
        let out: Mono = a.iter().zip(b).map(|(x, y)| x + y).collect();
        out.iter().all(|&e| e <= m).then_some(out)
    }

    fn binom_odd(n: usize, k: usize) -> bool {
        // C(n, k) mod 2 by Pascal's rule
        let mut row = vec![1u8];
        for _ in 0..n {
            let mut next = vec![1u8; row.len() + 1];
            for i in 1..row.len() {
                next[i] = (row[i - 1] + row[i]) % 2;
            }
            row = next;
        }
        k <= n && row[k] == 1
    }

    /// All monomials in Sq^k(a), by summing over splittings of k.
    fn sq(m: usize, k: usize, a: &Mono) -> BTreeSet<Mono> {
        let mut out = BTreeSet::new();
        fn rec(m: usize, k: usize, a: &Mono, i: usize, cur: &mut Mono, out: &mut BTreeSet<Mono>) {
            if i == a.len() {
                if k == 0 && !out.remove(cur) {
                    out.insert(cur.clone());
                }
                return;
            }
            for ki in 0..=k.min(a[i]) {
                if binom_odd(a[i], ki) && a[i] + ki <= m {
                    cur.push(a[i] + ki);
                    rec(m, k - ki, a, i + 1, cur, out);
                    cur.pop();
                }
            }
        }
        rec(m, k, a, 0, &mut Vec::new(), &mut out);
        out
    }

    fn phi(m: usize, a: Mono, b: Mono, c: &mut Class) {
        if a == b {
            let d: usize = a.iter().sum();
            for s in 2..=d {
                for t in sq(m, d - s, &a) {
                    flip(c, Term::E(s, t));
                }
            }
        } else if a < b {
            flip(c, Term::Phi(a, b));
        } else {
            flip(c, Term::Phi(b, a));
        }
    }

    pub fn phi_one(l: usize, a: Mono) -> Class {
        let mut c = Class::new();
        c.insert(Term::Phi(vec![0; l], a));
        c
    }

    pub fn mul(m: usize, x: &Class, y: &Class) -> Class {
        let mut out = Class::new();
        for s in x {
            for t in y {
                let (Term::Phi(i, j), Term::Phi(u, v)) = (s, t) else { continue };
                for (p, q, r, w) in [(i, u, j, v), (i, v, j, u)] {
                    if let (Some(a), Some(b)) = (mono_mul(m, p, q), mono_mul(m, r, w)) {
                        phi(m, a, b, &mut out);
                    }
                }
            }
        }
        out
    }
}
