//! JSON file formats for algebras and groups.
//!
//! Indices are 1-based and scalars are strings (`"3/2"`, `"4"`).
//!
//! ```text
//! {"field": "Q", "dimension": 2, "basis": ["1", "x"], "unit": 1,
//!  "tau": [[1, 1, 1, "1"], [1, 2, 2, "1"], [2, 1, 2, "1"]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub unit: usize,
    pub tau: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub identity: String,
    pub table: Vec<Vec<String>>,
}

impl AlgebraFile {
    /// Builds and validates the algebra, optionally reading the constants
    /// in another field.
    pub fn to_algebra(&self, field_override: Option<Field>) -> Result<FinAlgebra> {
        let field = match field_override {
            Some(f) => f,
            None => self.field.parse()?,
        };
        if self.basis.len() != self.dimension {
            return Err(Error::InvalidAlgebra(format!(
                "dimension {} but {} basis labels",
                self.dimension,
                self.basis.len()
            )));
        }
        if self.unit != 1 {
            return Err(Error::InvalidAlgebra(format!(
                "unit must be basis element 1, found {}",
                self.unit
            )));
        }
        let n = self.dimension;
        let entries = self
            .tau
            .iter()
            .map(|(i, j, s, v)| {
                if [*i, *j, *s].iter().any(|&k| k == 0 || k > n) {
                    return Err(Error::InvalidAlgebra(format!(
                        "structure constant index ({i},{j},{s}) outside 1..={n}"
                    )));
                }
                Ok((i - 1, j - 1, s - 1, field.parse(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let a = FinAlgebra::new(field, self.basis.clone(), entries)?;
        a.validate()
            .map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        Ok(a)
    }

    pub fn from_algebra(a: &FinAlgebra) -> Self {
        AlgebraFile {
            field: a.field().to_string(),
            dimension: a.dim(),
            basis: a.labels().to_vec(),
            unit: 1,
            tau: a
                .nonzero_constants()
                .map(|(i, j, s, v)| (i + 1, j + 1, s + 1, v.to_string()))
                .collect(),
        }
    }
}

impl GroupFile {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        let index = |l: &str| {
            self.elements
                .iter()
                .position(|e| e == l)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown element {l:?}")))
        };
        let mut sorted = self.elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.elements.len() {
            return Err(Error::InvalidGroup("duplicate element labels".into()));
        }
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|l| index(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(self.elements.clone(), table, index(&self.identity)?)
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            elements: g.labels().to_vec(),
            identity: g.label(g.identity()).to_string(),
            table: g
                .table()
                .iter()
                .map(|row| row.iter().map(|&k| g.label(k).to_string()).collect())
                .collect(),
        }
    }
}

pub fn parse_algebra(text: &str, field_override: Option<Field>) -> Result<FinAlgebra> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
    file.to_algebra(field_override)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let file: GroupFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
    file.to_group()
}

/// `cyclic:m`, or `None` for any other argument.
pub fn parse_group_shorthand(arg: &str) -> Option<Result<FiniteGroup>> {
    let m = arg.strip_prefix("cyclic:")?;
    Some(
        m.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad cyclic group order {m:?}")))
            .and_then(FiniteGroup::cyclic),
    )
}
