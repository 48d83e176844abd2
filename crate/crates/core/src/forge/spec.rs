use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::theorems::TheoremId;

use super::{
    all_kings_tournament, fixture, losing_cycle_gadget, random_digraph, random_tournament, star_deleted, structured_instance,
    ForgeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("instance spec {0:?}: expected kind:key=value,...")]
    Syntax(String),
    #[error("unknown instance kind {0:?}")]
    UnknownKind(String),
    #[error("instance spec is missing {0:?}")]
    MissingKey(&'static str),
    #[error("bad value for {key:?}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("unexpected key {0:?}")]
    UnexpectedKey(String),
}

/// A reproducible recipe for one digraph.
///
/// Text form: `fixture:LC3`, `random-tournament:n=8,seed=1`,
/// `random-digraph:n=7,seed=2,density=0.5`, `star-deleted:n=10,seed=3,leaves=3+2`,
/// `losing-cycle-gadget:k=4`, `all-kings:n=7`, `family:two-stars,n=10,seed=5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    Fixture {
        name: String,
    },
    RandomTournament {
        n: usize,
        seed: u64,
    },
    RandomDigraph {
        n: usize,
        seed: u64,
        density: f64,
    },
    StarDeleted {
        n: usize,
        seed: u64,
        leaves: Vec<usize>,
    },
    LosingCycleGadget {
        k: usize,
    },
    AllKings {
        n: usize,
    },
    /// First instance the structured generator accepts for a theorem's hypotheses.
    Family {
        theorem: TheoremId,
        n: usize,
        seed: u64,
    },
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Digraph, ForgeError> {
        match self {
            InstanceSpec::Fixture { name } => fixture(name),
            InstanceSpec::RandomTournament { n, seed } => Ok(random_tournament(*n, *seed)),
            InstanceSpec::RandomDigraph { n, seed, density } => Ok(random_digraph(*n, *seed, *density)),
            InstanceSpec::StarDeleted { n, seed, leaves } => star_deleted(*n, leaves, *seed),
            InstanceSpec::LosingCycleGadget { k } => losing_cycle_gadget(*k),
            InstanceSpec::AllKings { n } => all_kings_tournament(*n),
            InstanceSpec::Family { theorem, n, seed } => structured_instance(*theorem, *n, *seed),
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceSpec::Fixture { name } => write!(f, "fixture:{name}"),
            InstanceSpec::RandomTournament { n, seed } => write!(f, "random-tournament:n={n},seed={seed}"),
            InstanceSpec::RandomDigraph { n, seed, density } => {
                write!(f, "random-digraph:n={n},seed={seed},density={density}")
            }
            InstanceSpec::StarDeleted { n, seed, leaves } => {
                let leaves: Vec<String> = leaves.iter().map(|l| l.to_string()).collect();
                write!(f, "star-deleted:n={n},seed={seed},leaves={}", leaves.join("+"))
            }
            InstanceSpec::LosingCycleGadget { k } => write!(f, "losing-cycle-gadget:k={k}"),
            InstanceSpec::AllKings { n } => write!(f, "all-kings:n={n}"),
            InstanceSpec::Family { theorem, n, seed } => write!(f, "family:{theorem},n={n},seed={seed}"),
        }
    }
}

struct Fields {
    positional: Option<String>,
    map: BTreeMap<String, String>,
}

impl Fields {
    fn parse(body: &str, whole: &str) -> Result<Self, SpecError> {
        let mut positional = None;
        let mut map = BTreeMap::new();
        for (i, part) in body.split(',').map(str::trim).filter(|p| !p.is_empty()).enumerate() {
            match part.split_once('=') {
                Some((k, v)) => {
                    map.insert(k.trim().to_string(), v.trim().to_string());
                }
                None if i == 0 => positional = Some(part.to_string()),
                None => return Err(SpecError::Syntax(whole.to_string())),
            }
        }
        Ok(Fields { positional, map })
    }

    fn take<T: FromStr>(&mut self, key: &'static str) -> Result<T, SpecError> {
        let value = self.map.remove(key).ok_or(SpecError::MissingKey(key))?;
        value.parse().map_err(|_| SpecError::BadValue { key: key.to_string(), value })
    }

    fn done(self) -> Result<(), SpecError> {
        match self.map.into_keys().next() {
            Some(k) => Err(SpecError::UnexpectedKey(k)),
            None => Ok(()),
        }
    }
}

impl FromStr for InstanceSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, body) = s.trim().split_once(':').ok_or_else(|| SpecError::Syntax(s.to_string()))?;
        let mut f = Fields::parse(body, s)?;
        let spec = match kind.trim() {
            "fixture" => {
                let name = f.positional.take().ok_or(SpecError::MissingKey("name"))?;
                InstanceSpec::Fixture { name }
            }
            "random-tournament" => InstanceSpec::RandomTournament { n: f.take("n")?, seed: f.take("seed")? },
            "random-digraph" => {
                let density: f64 = f.take("density")?;
                if !(0.0..=1.0).contains(&density) {
                    return Err(SpecError::BadValue { key: "density".into(), value: density.to_string() });
                }
                InstanceSpec::RandomDigraph { n: f.take("n")?, seed: f.take("seed")?, density }
            }
            "star-deleted" => {
                let raw: String = f.take("leaves")?;
                let leaves = raw
                    .split('+')
                    .map(|t| t.trim().parse().map_err(|_| SpecError::BadValue { key: "leaves".into(), value: raw.clone() }))
                    .collect::<Result<Vec<usize>, _>>()?;
                InstanceSpec::StarDeleted { n: f.take("n")?, seed: f.take("seed")?, leaves }
            }
            "losing-cycle-gadget" => InstanceSpec::LosingCycleGadget { k: f.take("k")? },
            "all-kings" => InstanceSpec::AllKings { n: f.take("n")? },
            "family" => {
                let raw = f.positional.take().ok_or(SpecError::MissingKey("theorem"))?;
                let theorem = raw.parse().map_err(|_| SpecError::BadValue { key: "theorem".into(), value: raw })?;
                InstanceSpec::Family { theorem, n: f.take("n")?, seed: f.take("seed")? }
            }
            other => return Err(SpecError::UnknownKind(other.to_string())),
        };
        if f.positional.is_some() {
            return Err(SpecError::Syntax(s.to_string()));
        }
        f.done()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for text in [
            "fixture:LC3",
            "random-tournament:n=8,seed=1",
            "random-digraph:n=7,seed=2,density=0.35",
            "star-deleted:n=10,seed=3,leaves=3+2+1",
            "losing-cycle-gadget:k=4",
            "all-kings:n=7",
            "family:two-stars,n=10,seed=5",
        ] {
            let spec: InstanceSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn same_spec_same_digraph() {
        let spec: InstanceSpec = "star-deleted:n=9,seed=4,leaves=2+2".parse().unwrap();
        assert_eq!(spec.build().unwrap(), spec.build().unwrap());
        assert_eq!("fixture:C3".parse::<InstanceSpec>().unwrap().build().unwrap(), fixture("C3").unwrap());
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!("tournament".parse::<InstanceSpec>(), Err(SpecError::Syntax(_))));
        assert!(matches!("cube:n=3".parse::<InstanceSpec>(), Err(SpecError::UnknownKind(_))));
        assert!(matches!("random-tournament:n=3".parse::<InstanceSpec>(), Err(SpecError::MissingKey("seed"))));
        assert!(matches!("all-kings:n=x".parse::<InstanceSpec>(), Err(SpecError::BadValue { .. })));
        assert!(matches!("all-kings:n=3,q=1".parse::<InstanceSpec>(), Err(SpecError::UnexpectedKey(_))));
        assert!("random-digraph:n=3,seed=1,density=2".parse::<InstanceSpec>().is_err());
    }
}
