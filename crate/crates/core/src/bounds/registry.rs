use std::collections::BTreeMap;

use evalexpr::{
    build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node,
    Value,
};
use serde::{Deserialize, Serialize};

use super::space::{match_pattern, Parser, Term};
use super::{BoundsError, Flavor, SpaceSpec};

const BUILTIN: &str = include_str!("../../data/registry.json");

/// Registry file schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryFile {
    pub version: u32,
    pub entries: Vec<RegistryEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    /// Space pattern with variables in integer slots, e.g. `Power(S(m),l)`.
    pub pattern: String,
    /// Boolean expressions over the pattern variables.
    #[serde(default)]
    pub constraints: Vec<String>,
    /// `TC`, `TCbeta`, `TCsigma`, or `all`.
    pub flavor: String,
    /// Boolean expression over `n` and the pattern variables.
    pub n_predicate: String,
    /// Integer expression over `n` and the pattern variables.
    pub value_expression: String,
    pub citation: String,
}

/// A registry value that applies to a query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryHit {
    pub value: u64,
    pub citation: String,
    pub entry: usize,
}

struct Compiled {
    pattern: Term,
    constraints: Vec<Node<DefaultNumericTypes>>,
    flavors: Vec<Flavor>,
    n_predicate: Node<DefaultNumericTypes>,
    value: Node<DefaultNumericTypes>,
    citation: String,
}

/// Cited exact values, loaded from a versioned data file.
pub struct Registry {
    version: u32,
    entries: Vec<Compiled>,
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("version", &self.version)
            .field("entries", &self.entries.len())
            .finish()
    }
}

fn expr(text: &str, k: usize) -> Result<Node<DefaultNumericTypes>, BoundsError> {
    build_operator_tree(text)
        .map_err(|e| BoundsError::Registry(format!("entry {k}: bad expression '{text}': {e}")))
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Registry {
        Registry::from_json(BUILTIN).expect("built-in registry is valid")
    }

    pub fn from_json(text: &str) -> Result<Registry, BoundsError> {
        let file: RegistryFile =
            serde_json::from_str(text).map_err(|e| BoundsError::Registry(e.to_string()))?;
        Registry::from_file(&file)
    }

    pub fn from_file(file: &RegistryFile) -> Result<Registry, BoundsError> {
        let mut entries = Vec::new();
        for (k, e) in file.entries.iter().enumerate() {
            let pattern = Parser::new(&e.pattern, true)
                .parse_all()
                .map_err(|err| BoundsError::Registry(format!("entry {k}: pattern: {err}")))?;
            let flavors = match e.flavor.as_str() {
                "all" => Flavor::ALL.to_vec(),
                f => vec![f
                    .parse()
                    .map_err(|_| BoundsError::Registry(format!("entry {k}: unknown flavor '{f}'")))?],
            };
            entries.push(Compiled {
                pattern,
                constraints: e.constraints.iter().map(|c| expr(c, k)).collect::<Result<_, _>>()?,
                flavors,
                n_predicate: expr(&e.n_predicate, k)?,
                value: expr(&e.value_expression, k)?,
                citation: e.citation.clone(),
            });
        }
        Ok(Registry {
            version: file.version,
            entries,
        })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Every entry whose hypotheses match exactly, in file order.
    pub fn lookup_all(
        &self,
        space: &SpaceSpec,
        n: usize,
        flavor: Flavor,
    ) -> Result<Vec<RegistryHit>, BoundsError> {
        let mut hits = Vec::new();
        for (k, e) in self.entries.iter().enumerate() {
            if !e.flavors.contains(&flavor) {
                continue;
            }
            let Some(env) = match_pattern(&e.pattern, space) else {
                continue;
            };
            let ctx = context(&env, n);
            let holds = |node: &Node<DefaultNumericTypes>| {
                node.eval_boolean_with_context(&ctx)
                    .map_err(|err| BoundsError::Registry(format!("entry {k}: {err}")))
            };
            let mut ok = true;
            for c in &e.constraints {
                ok &= holds(c)?;
            }
            if !ok || !holds(&e.n_predicate)? {
                continue;
            }
            let v = e
                .value
                .eval_int_with_context(&ctx)
                .map_err(|err| BoundsError::Registry(format!("entry {k}: {err}")))?;
            if v < 1 {
                return Err(BoundsError::Registry(format!("entry {k}: value {v} < 1")));
            }
            hits.push(RegistryHit {
                value: v as u64,
                citation: e.citation.clone(),
                entry: k,
            });
        }
        Ok(hits)
    }
}

fn context(env: &BTreeMap<String, i64>, n: usize) -> HashMapContext<DefaultNumericTypes> {
    let mut ctx = HashMapContext::new();
    for (k, &v) in env {
        ctx.set_value(k.clone(), Value::from_int(v))
            .expect("fresh context accepts values");
    }
    ctx.set_value("n".into(), Value::from_int(n as i64))
        .expect("fresh context accepts values");
    ctx
}

/// First registry value for the query in the built-in registry.
pub fn registry_lookup(space: &SpaceSpec, n: usize, flavor: Flavor) -> Option<RegistryHit> {
    Registry::builtin()
        .lookup_all(space, n, flavor)
        .ok()?
        .into_iter()
        .next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_space;

    fn value(s: &str, n: usize, f: Flavor) -> Option<u64> {
        registry_lookup(&parse_space(s).unwrap(), n, f).map(|h| h.value)
    }

    #[test]
    fn cited_values() {
        assert_eq!(value("S(2)", 3, Flavor::TC), Some(4));
        assert_eq!(value("S(3)", 3, Flavor::TC), Some(3));
        assert_eq!(value("Surface(3)", 2, Flavor::TC), Some(5));
        assert_eq!(value("S(4)", 2, Flavor::TCsigma), Some(3));
        assert_eq!(value("S(4)", 4, Flavor::TCsigma), None);
        assert_eq!(value("RP(2)", 3, Flavor::TC), Some(7));
        assert_eq!(value("RP(2)", 2, Flavor::TC), None);
        assert_eq!(value("RP(3)", 5, Flavor::TC), None);
        assert_eq!(value("ConnSumRP(2,3)", 4, Flavor::TCbeta), Some(13));
        assert_eq!(value("Power(S(2),3)", 2, Flavor::TC), Some(7));
        assert_eq!(value("Power(S(3),3)", 2, Flavor::TC), None);
        assert_eq!(value("Surface(1)", 2, Flavor::TC), None);
    }

    #[test]
    fn rejects_malformed_files() {
        let bad = r#"{"version":1,"entries":[{"pattern":"S(m)","flavor":"TCx","n_predicate":"true","value_expression":"1","citation":""}]}"#;
        assert!(Registry::from_json(bad).is_err());
        let bad = r#"{"version":1,"entries":[{"pattern":"S(m","flavor":"TC","n_predicate":"true","value_expression":"1","citation":""}]}"#;
        assert!(Registry::from_json(bad).is_err());
    }
}
