//! Finite groups given by Cayley tables.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Checks closure of the table, associativity, the identity law and the
/// existence of inverses. Returns the inverse table.
pub fn validate_group(table: &[Vec<usize>], identity: usize) -> std::result::Result<Vec<usize>, String> {
    let m = table.len();
    if m == 0 {
        return Err("empty group".into());
    }
    if identity >= m {
        return Err(format!("identity index {identity} out of range"));
    }
    for (a, row) in table.iter().enumerate() {
        if row.len() != m {
            return Err(format!("row {a} has {} entries, expected {m}", row.len()));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= m) {
            return Err(format!("row {a} contains out-of-range element {bad}"));
        }
    }
    for a in 0..m {
        if table[identity][a] != a || table[a][identity] != a {
            return Err(format!("identity law fails at element {a}"));
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(format!("associativity fails at ({a}, {b}, {c})"));
                }
            }
        }
    }
    (0..m)
        .map(|a| {
            (0..m)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| format!("element {a} has no inverse"))
        })
        .collect()
}

impl FiniteGroup {
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        if labels.len() != table.len() {
            return Err(Error::InvalidGroup(format!(
                "{} labels for a table with {} rows",
                labels.len(),
                table.len()
            )));
        }
        let inverse = validate_group(&table, identity).map_err(Error::InvalidGroup)?;
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverse,
        })
    }

    /// `C_m` with elements `e, g, g^2, …`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let labels = (0..m)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        Self::from_table(labels, table, 0)
    }

    /// `C_2 × C_2` with elements `e, a, b, ab`.
    pub fn klein_four() -> Self {
        let labels = ["e", "a", "b", "ab"].map(String::from).to_vec();
        let table = (0..4).map(|x: usize| (0..4).map(|y: usize| x ^ y).collect()).collect();
        Self::from_table(labels, table, 0).expect("valid")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_validate() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(c2.order(), 2);
        assert_eq!(c2.inverse(1), 1);
        let c3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(c3.inverse(1), 2);
        assert_eq!(c3.label(2), "g^2");
        let v = FiniteGroup::klein_four();
        assert!((0..4).all(|a| v.inverse(a) == a));
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
    }

    #[test]
    fn broken_tables_are_rejected() {
        // identity and inverses fine, associativity broken: a·a = b, a·b = a
        let table = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 0, 0]];
        assert!(validate_group(&table, 0).is_err());
        assert!(validate_group(&[vec![0, 1], vec![1, 1]], 0).is_err());
        assert!(validate_group(&[vec![0, 2], vec![1, 0]], 0).is_err());
        assert!(FiniteGroup::from_table(vec!["e".into()], vec![vec![0], vec![0]], 0).is_err());
    }
}
