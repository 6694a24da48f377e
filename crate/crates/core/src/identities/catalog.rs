use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::sums::IndexVector;

const BUILTIN: &str = include_str!("catalog.json");

/// Where a relation is checked.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Integer `N`, values chosen by the caller.
    N,
    /// Fixed rational points in `[0, 1]`.
    X(Vec<Rational>),
    /// No free variable.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Sums of the given depth.
    Depth(u8),
    Constants,
    Integrals,
    /// Supporting transforms, function identities and continuation material.
    Auxiliary,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Depth(d) => write!(f, "{d}"),
            Group::Constants => f.write_str("constants"),
            Group::Integrals => f.write_str("integrals"),
            Group::Auxiliary => f.write_str("auxiliary"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constants" => Ok(Group::Constants),
            "integrals" => Ok(Group::Integrals),
            "auxiliary" => Ok(Group::Auxiliary),
            d => match d.parse::<u8>() {
                Ok(d @ 2..=6) => Ok(Group::Depth(d)),
                _ => Err(Error::Catalog(format!("unknown group `{s}`"))),
            },
        }
    }
}

/// A selection of groups, as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Depth(u8),
    /// Constants and integrals.
    Appendix,
    Auxiliary,
    All,
}

impl Section {
    pub fn contains(&self, g: Group) -> bool {
        match (self, g) {
            (Section::All, _) => true,
            (Section::Depth(d), Group::Depth(e)) => *d == e,
            (Section::Appendix, Group::Constants | Group::Integrals) => true,
            (Section::Auxiliary, Group::Auxiliary) => true,
            _ => false,
        }
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Section::All),
            "appendix" => Ok(Section::Appendix),
            "auxiliary" => Ok(Section::Auxiliary),
            d => match d.parse::<u8>() {
                Ok(d @ 2..=6) => Ok(Section::Depth(d)),
                _ => Err(Error::Catalog(format!("unknown section `{s}`; expected 2..6, appendix, auxiliary or all"))),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDomain {
    Named(String),
    X { x: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    id: String,
    group: String,
    lhs: String,
    rhs: String,
    domain: RawDomain,
    #[serde(default)]
    family: Option<String>,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    superseded_by: Option<String>,
    #[serde(default)]
    corrects: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawCatalog {
    schema: String,
    relations: Vec<RawRelation>,
}

/// One identity: `lhs = rhs` on its domain.
#[derive(Clone, Debug)]
pub struct Relation {
    pub id: String,
    pub group: Group,
    pub lhs: Expr,
    pub rhs: Expr,
    pub domain: Domain,
    /// Records sharing a family count as one identity (e.g. `Li_k(1)` for several `k`).
    pub family: Option<String>,
    pub note: Option<String>,
    /// Set on a literal transcription that a corrected record replaces.
    pub superseded_by: Option<String>,
    /// Set on the corrected record.
    pub corrects: Option<String>,
}

impl Relation {
    /// Whether this record is the one that must hold.
    pub fn is_authoritative(&self) -> bool {
        self.superseded_by.is_none()
    }

    /// The left side as a bare sum `S[v](N)`, if it is one.
    pub fn lhs_sum(&self) -> Option<&IndexVector> {
        match &self.lhs {
            Expr::Sum(v, a) if !a.is_constant() && a.a == 1 && a.b == 0 => Some(v),
            _ => None,
        }
    }

    pub fn family(&self) -> &str {
        self.family.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationSummary {
    pub id: String,
    pub group: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superseded_by: Option<String>,
}

impl From<&Relation> for RelationSummary {
    fn from(r: &Relation) -> Self {
        Self {
            id: r.id.clone(),
            group: r.group.to_string(),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            superseded_by: r.superseded_by.clone(),
        }
    }
}

/// The relation list.
#[derive(Clone, Debug)]
pub struct Catalog {
    relations: Vec<Relation>,
}

fn parse_field(id: &str, side: &str, text: &str) -> Result<Expr> {
    parse(text).map_err(|e| Error::Catalog(format!("{id}: {side}: {e}")))
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if raw.schema != "hsums-catalog/1" {
            return Err(Error::Catalog(format!("unsupported schema `{}`", raw.schema)));
        }
        let mut relations = Vec::with_capacity(raw.relations.len());
        for r in raw.relations {
            let domain = match r.domain {
                RawDomain::Named(s) if s == "n" => Domain::N,
                RawDomain::Named(s) if s == "constant" => Domain::Constant,
                RawDomain::Named(s) => return Err(Error::Catalog(format!("{}: unknown domain `{s}`", r.id))),
                RawDomain::X { x } => Domain::X(
                    x.iter()
                        .map(|p| p.parse::<Rational>().map_err(|_| Error::Catalog(format!("{}: bad point `{p}`", r.id))))
                        .collect::<Result<_>>()?,
                ),
            };
            relations.push(Relation {
                group: r.group.parse()?,
                lhs: parse_field(&r.id, "lhs", &r.lhs)?,
                rhs: parse_field(&r.id, "rhs", &r.rhs)?,
                domain,
                family: r.family,
                note: r.note,
                superseded_by: r.superseded_by,
                corrects: r.corrects,
                id: r.id,
            });
        }
        let cat = Self { relations };
        cat.check_links()?;
        Ok(cat)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check_links(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for r in &self.relations {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Catalog(format!("duplicate id `{}`", r.id)));
            }
        }
        for r in &self.relations {
            for target in r.superseded_by.iter().chain(&r.corrects) {
                if self.get(target).is_none() {
                    return Err(Error::Catalog(format!("{}: refers to missing `{target}`", r.id)));
                }
            }
        }
        Ok(())
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn get(&self, id: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.id == id)
    }

    pub fn select(&self, section: Section) -> Vec<&Relation> {
        self.relations.iter().filter(|r| section.contains(r.group)).collect()
    }

    /// Distinct authoritative identities in a group, counting families once.
    pub fn count(&self, group: Group) -> usize {
        let fams: std::collections::BTreeSet<&str> = self
            .relations
            .iter()
            .filter(|r| r.group == group && r.is_authoritative())
            .map(|r| r.family())
            .collect();
        fams.len()
    }
}

/// The built-in catalog, parsed once.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::from_json(BUILTIN).expect("built-in catalog is valid"))
}
