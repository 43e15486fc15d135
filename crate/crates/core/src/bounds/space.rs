use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cohomology::{kunneth, ring_of_rp, ring_of_sphere, tensor_power, GradedRing};

/// A space description understood by the bounds engine and the ring builder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceSpec {
    Sphere(usize),
    RP(usize),
    Surface { genus: usize, orientable: bool },
    /// Connected sum of `g` copies of `RP^m`.
    ConnSumRP { g: usize, m: usize },
    Product(Vec<SpaceSpec>),
    Power(Box<SpaceSpec>, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl SpaceSpec {
    pub fn dim(&self) -> usize {
        match self {
            SpaceSpec::Sphere(m) | SpaceSpec::RP(m) => *m,
            SpaceSpec::Surface { .. } => 2,
            SpaceSpec::ConnSumRP { m, .. } => *m,
            SpaceSpec::Product(parts) => parts.iter().map(SpaceSpec::dim).sum(),
            SpaceSpec::Power(s, k) => k * s.dim(),
        }
    }

    /// Largest `q` with `π_i = 0` for `i <= q`, computed structurally:
    /// `m - 1` for `S^m`, the minimum over factors for products, `0` otherwise.
    pub fn connectivity(&self) -> usize {
        match self {
            SpaceSpec::Sphere(m) => m - 1,
            SpaceSpec::Product(parts) => parts.iter().map(SpaceSpec::connectivity).min().unwrap_or(0),
            SpaceSpec::Power(s, _) => s.connectivity(),
            _ => 0,
        }
    }

    /// Whether a mod-2 cohomology ring can be built for this space.
    pub fn has_ring(&self) -> bool {
        match self {
            SpaceSpec::Sphere(_) | SpaceSpec::RP(_) => true,
            SpaceSpec::Surface { .. } | SpaceSpec::ConnSumRP { .. } => false,
            SpaceSpec::Product(parts) => parts.iter().all(SpaceSpec::has_ring),
            SpaceSpec::Power(s, _) => s.has_ring(),
        }
    }

    /// Number of basis elements of the mod-2 cohomology ring, if one is built.
    pub fn ring_dim(&self) -> Option<usize> {
        match self {
            SpaceSpec::Sphere(_) => Some(2),
            SpaceSpec::RP(m) => Some(m + 1),
            SpaceSpec::Product(parts) => parts
                .iter()
                .try_fold(1usize, |acc, p| acc.checked_mul(p.ring_dim()?)),
            SpaceSpec::Power(s, k) => s.ring_dim()?.checked_pow(*k as u32),
            _ => None,
        }
    }

    /// The mod-2 cohomology ring with Steenrod squares.
    pub fn ring(&self) -> Option<GradedRing> {
        Some(match self {
            SpaceSpec::Sphere(m) => ring_of_sphere(*m).ok()?,
            SpaceSpec::RP(m) => ring_of_rp(*m).ok()?,
            SpaceSpec::Product(parts) => {
                let mut rings = parts.iter().map(SpaceSpec::ring);
                let first = rings.next()??;
                rings.try_fold(first, |acc, r| Some(kunneth(&acc, &r?)))?
            }
            SpaceSpec::Power(s, k) => tensor_power(&s.ring()?, *k),
            _ => return None,
        })
    }

    /// `self^k`, flattening nested powers; `self` itself when `k == 1`.
    pub fn power(&self, k: usize) -> SpaceSpec {
        match (self, k) {
            (_, 1) => self.clone(),
            (SpaceSpec::Power(s, a), _) => SpaceSpec::Power(s.clone(), a * k),
            _ => SpaceSpec::Power(Box::new(self.clone()), k),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Sphere(m) => write!(f, "S({m})"),
            SpaceSpec::RP(m) => write!(f, "RP({m})"),
            SpaceSpec::Surface {
                genus,
                orientable: true,
            } => write!(f, "Surface({genus})"),
            SpaceSpec::Surface {
                genus,
                orientable: false,
            } => write!(f, "Surface({genus},nonorientable)"),
            SpaceSpec::ConnSumRP { g, m } => write!(f, "ConnSumRP({g},{m})"),
            SpaceSpec::Product(parts) => {
                f.write_str("Product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            SpaceSpec::Power(s, k) => write!(f, "Power({s},{k})"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_space(s)
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_space(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses the space grammar:
/// `S(m)`, `RP(m)`, `Surface(g)`, `Surface(g,nonorientable)`,
/// `ConnSumRP(g,m)`, `Product(a, b, ...)`, `Power(a, k)`.
pub fn parse_space(text: &str) -> Result<SpaceSpec, ParseError> {
    let term = Parser::new(text, false).parse_all()?;
    to_spec(&term)
}

// ---- generic term syntax, shared with registry patterns ----

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Arg {
    Int(usize, usize),
    Ident(String, usize),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Term {
    pub head: String,
    pub pos: usize,
    pub args: Vec<Arg>,
}

const SPACE_NAMES: &str = "a space (S, RP, Surface, ConnSumRP, Product, Power)";

pub(crate) struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
    allow_vars: bool,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str, allow_vars: bool) -> Self {
        Parser {
            chars: text.char_indices().collect(),
            at: 0,
            end: text.chars().count(),
            allow_vars,
            _text: text,
        }
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].1.is_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|c| c.1)
    }

    fn pos(&self) -> usize {
        self.at.min(self.end)
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        let found = match self.chars.get(self.at) {
            None => "end of input".to_string(),
            Some(_) => {
                let rest: String = self.chars[self.at..].iter().map(|c| c.1).take(12).collect();
                format!("'{rest}'")
            }
        };
        ParseError {
            position: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.chars.len()
            && (self.chars[self.at].1.is_ascii_alphanumeric() || self.chars[self.at].1 == '_')
            && (self.at > start || self.chars[self.at].1.is_ascii_alphabetic())
        {
            self.at += 1;
        }
        (self.at > start).then(|| (self.chars[start..self.at].iter().map(|c| c.1).collect(), start))
    }

    fn int(&mut self) -> Result<Option<(usize, usize)>, ParseError> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.chars.len() && self.chars[self.at].1.is_ascii_digit() {
            self.at += 1;
        }
        if self.at == start {
            return Ok(None);
        }
        let digits: String = self.chars[start..self.at].iter().map(|c| c.1).collect();
        match digits.parse() {
            Ok(v) => Ok(Some((v, start))),
            Err(_) => {
                self.at = start;
                Err(self.error(&["an integer that fits in 64 bits"]))
            }
        }
    }

    pub(crate) fn parse_all(mut self) -> Result<Term, ParseError> {
        let t = self.term()?;
        if self.peek().is_some() {
            return Err(self.error(&["end of input"]));
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let Some((head, pos)) = self.ident() else {
            return Err(self.error(&[SPACE_NAMES]));
        };
        self.expect('(')?;
        let mut args = vec![self.arg()?];
        loop {
            match self.peek() {
                Some(',') => {
                    self.at += 1;
                    args.push(self.arg()?);
                }
                Some(')') => {
                    self.at += 1;
                    return Ok(Term { head, pos, args });
                }
                _ => return Err(self.error(&["','", "')'"])),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        if let Some((v, p)) = self.int()? {
            return Ok(Arg::Int(v, p));
        }
        let save = self.at;
        match self.ident() {
            Some((name, p)) => {
                if self.peek() == Some('(') {
                    self.at = save;
                    Ok(Arg::Term(self.term()?))
                } else if self.allow_vars || name == "nonorientable" || name == "orientable" {
                    Ok(Arg::Ident(name, p))
                } else {
                    self.at = save;
                    Err(self.error(&["an integer", SPACE_NAMES]))
                }
            }
            None => Err(self.error(&["an integer", SPACE_NAMES])),
        }
    }
}

fn err_at(position: usize, expected: &str, found: String) -> ParseError {
    ParseError {
        position,
        expected: vec![expected.to_string()],
        found,
    }
}

fn int_arg(term: &Term, k: usize, min: usize, what: &str) -> Result<usize, ParseError> {
    match term.args.get(k) {
        Some(Arg::Int(v, p)) => {
            if *v < min {
                Err(err_at(*p, &format!("{what} >= {min}"), v.to_string()))
            } else {
                Ok(*v)
            }
        }
        Some(Arg::Ident(name, p)) => Err(err_at(*p, &format!("{what} (an integer)"), format!("'{name}'"))),
        Some(Arg::Term(t)) => Err(err_at(t.pos, &format!("{what} (an integer)"), format!("'{}(...)'", t.head))),
        None => Err(err_at(term.pos, &format!("{what} argument to {}", term.head), "too few arguments".into())),
    }
}

fn arity(term: &Term, allowed: &[usize]) -> Result<(), ParseError> {
    if allowed.contains(&term.args.len()) {
        Ok(())
    } else {
        let want = allowed.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" or ");
        Err(err_at(
            term.pos,
            &format!("{want} argument(s) to {}", term.head),
            format!("{} argument(s)", term.args.len()),
        ))
    }
}

fn space_arg(arg: &Arg) -> Result<SpaceSpec, ParseError> {
    match arg {
        Arg::Term(t) => to_spec(t),
        Arg::Int(v, p) => Err(err_at(*p, SPACE_NAMES, v.to_string())),
        Arg::Ident(n, p) => Err(err_at(*p, SPACE_NAMES, format!("'{n}'"))),
    }
}

fn to_spec(term: &Term) -> Result<SpaceSpec, ParseError> {
    match term.head.as_str() {
        "S" => {
            arity(term, &[1])?;
            Ok(SpaceSpec::Sphere(int_arg(term, 0, 1, "sphere dimension")?))
        }
        "RP" => {
            arity(term, &[1])?;
            Ok(SpaceSpec::RP(int_arg(term, 0, 1, "projective dimension")?))
        }
        "Surface" => {
            arity(term, &[1, 2])?;
            let orientable = match term.args.get(1) {
                None => true,
                Some(Arg::Ident(s, _)) if s == "orientable" => true,
                Some(Arg::Ident(s, _)) if s == "nonorientable" => false,
                Some(Arg::Ident(s, p)) => {
                    return Err(err_at(*p, "'orientable' or 'nonorientable'", format!("'{s}'")))
                }
                Some(Arg::Int(v, p)) => {
                    return Err(err_at(*p, "'orientable' or 'nonorientable'", v.to_string()))
                }
                Some(Arg::Term(t)) => {
                    return Err(err_at(t.pos, "'orientable' or 'nonorientable'", t.head.clone()))
                }
            };
            let genus = int_arg(term, 0, if orientable { 0 } else { 1 }, "genus")?;
            Ok(SpaceSpec::Surface { genus, orientable })
        }
        "ConnSumRP" => {
            arity(term, &[2])?;
            let g = int_arg(term, 0, 2, "number of summands")?;
            let m = int_arg(term, 1, 2, "projective dimension")?;
            Ok(SpaceSpec::ConnSumRP { g, m })
        }
        "Product" => {
            let parts = term.args.iter().map(space_arg).collect::<Result<Vec<_>, _>>()?;
            Ok(SpaceSpec::Product(parts))
        }
        "Power" => {
            arity(term, &[2])?;
            let base = space_arg(&term.args[0])?;
            let k = int_arg(term, 1, 1, "exponent")?;
            Ok(base.power(k))
        }
        other => Err(err_at(term.pos, SPACE_NAMES, format!("'{other}'"))),
    }
}

/// Matches a concrete space against a pattern term whose integer slots may be
/// variables. Returns the variable bindings on success.
pub(crate) fn match_pattern(pattern: &Term, space: &SpaceSpec) -> Option<BTreeMap<String, i64>> {
    let mut env = BTreeMap::new();
    match_term(pattern, space, &mut env).then_some(env)
}

fn bind(arg: &Arg, value: usize, env: &mut BTreeMap<String, i64>) -> bool {
    let value = value as i64;
    match arg {
        Arg::Int(v, _) => *v as i64 == value,
        Arg::Ident(name, _) => match env.get(name) {
            Some(&old) => old == value,
            None => {
                env.insert(name.clone(), value);
                true
            }
        },
        Arg::Term(_) => false,
    }
}

fn match_term(p: &Term, s: &SpaceSpec, env: &mut BTreeMap<String, i64>) -> bool {
    match (p.head.as_str(), s) {
        ("S", SpaceSpec::Sphere(m)) | ("RP", SpaceSpec::RP(m)) => {
            p.args.len() == 1 && bind(&p.args[0], *m, env)
        }
        ("Surface", SpaceSpec::Surface { genus, orientable }) => {
            let want_orientable = match p.args.get(1) {
                None => true,
                Some(Arg::Ident(t, _)) if t == "orientable" => true,
                Some(Arg::Ident(t, _)) if t == "nonorientable" => false,
                _ => return false,
            };
            want_orientable == *orientable && bind(&p.args[0], *genus, env)
        }
        ("ConnSumRP", SpaceSpec::ConnSumRP { g, m }) => {
            p.args.len() == 2 && bind(&p.args[0], *g, env) && bind(&p.args[1], *m, env)
        }
        ("Product", SpaceSpec::Product(parts)) => {
            p.args.len() == parts.len()
                && p.args.iter().zip(parts).all(|(a, part)| match a {
                    Arg::Term(t) => match_term(t, part, env),
                    _ => false,
                })
        }
        ("Power", SpaceSpec::Power(base, k)) => match (&p.args.first(), p.args.get(1)) {
            (Some(Arg::Term(t)), Some(exp)) => match_term(t, base, env) && bind(exp, *k, env),
            _ => false,
        },
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_grammar() {
        assert_eq!(parse_space("S(3)").unwrap(), SpaceSpec::Sphere(3));
        let p = parse_space(" Power( RP(2) , 2 ) ").unwrap();
        assert_eq!(p, SpaceSpec::Power(Box::new(SpaceSpec::RP(2)), 2));
        assert_eq!(p.dim(), 4);
        let q = parse_space("Product(S(2),RP(3),Surface(2,nonorientable))").unwrap();
        assert_eq!(q.dim(), 7);
        assert_eq!(q.to_string(), "Product(S(2),RP(3),Surface(2,nonorientable))");
        assert_eq!(parse_space("ConnSumRP(3,2)").unwrap(), SpaceSpec::ConnSumRP { g: 3, m: 2 });
        assert_eq!(parse_space("Power(S(2),1)").unwrap(), SpaceSpec::Sphere(2));
    }

    #[test]
    fn rejects_bad_input_with_positions() {
        let e = parse_space("S(0)").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_space("Power(RP(2),").unwrap_err();
        assert_eq!(e.position, 12);
        assert_eq!(e.found, "end of input");
        let e = parse_space("Q(2)").unwrap_err();
        assert_eq!(e.position, 0);
        assert!(parse_space("ConnSumRP(1,3)").is_err());
        assert!(parse_space("S(2) x").is_err());
        assert!(parse_space("S(m)").is_err());
        assert!(parse_space("S(2,3)").is_err());
    }

    #[test]
    fn connectivity_and_rings() {
        assert_eq!(parse_space("S(4)").unwrap().connectivity(), 3);
        assert_eq!(parse_space("Power(S(3),2)").unwrap().connectivity(), 2);
        assert_eq!(parse_space("Product(S(3),RP(2))").unwrap().connectivity(), 0);
        let s = parse_space("Product(S(2),RP(2))").unwrap();
        assert_eq!(s.ring().unwrap().poincare_series(), vec![1, 1, 2, 1, 1]);
        assert_eq!(s.ring_dim(), Some(6));
        assert!(parse_space("Surface(2)").unwrap().ring().is_none());
    }

    #[test]
    fn patterns_bind_variables() {
        let pat = Parser::new("Power(S(m),l)", true).parse_all().unwrap();
        let env = match_pattern(&pat, &parse_space("Power(S(4),3)").unwrap()).unwrap();
        assert_eq!(env["m"], 4);
        assert_eq!(env["l"], 3);
        assert!(match_pattern(&pat, &parse_space("S(4)").unwrap()).is_none());
        let pat = Parser::new("Surface(g,nonorientable)", true).parse_all().unwrap();
        assert!(match_pattern(&pat, &parse_space("Surface(3)").unwrap()).is_none());
    }

    #[test]
    fn serde_uses_the_text_form() {
        let s = parse_space("Power(RP(2),3)").unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"Power(RP(2),3)\"");
        assert_eq!(serde_json::from_str::<SpaceSpec>(&json).unwrap(), s);
    }
}
