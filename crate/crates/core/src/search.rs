//! Exhaustive search for solutions of small polynomial systems over `F_p`.
//!
//! Variables are assigned in index order; an equation is tested as soon as
//! its last variable is assigned, which prunes every partial assignment
//! that already violates a fully assigned equation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Default cap on the raw search space size.
pub const DEFAULT_MAX_SEARCH: u64 = 1 << 24;

/// Search bound, overridable through `USYM_MAX_SEARCH`.
pub fn max_search() -> u64 {
    std::env::var("USYM_MAX_SEARCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SEARCH)
}

/// `base^exp`, saturating.
pub fn search_size(base: u64, exp: usize) -> u128 {
    (base as u128).saturating_pow(exp as u32)
}

pub fn check_size(size: u128) -> Result<()> {
    let bound = max_search();
    if size > bound as u128 {
        return Err(Error::SearchSizeExceeded { size, bound });
    }
    Ok(())
}

/// A matrix entry in a system: either fixed or an unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Known(u32),
    Var(usize),
}

#[derive(Clone, Debug, Default)]
pub struct EquationBuilder {
    constant: u64,
    terms: BTreeMap<Vec<usize>, u64>,
}

impl EquationBuilder {
    /// Adds `coeff · Π factors` modulo `p`.
    pub fn add_product(&mut self, p: u32, coeff: u32, factors: &[Entry]) {
        let p = p as u64;
        let mut c = coeff as u64 % p;
        let mut vars = Vec::new();
        for f in factors {
            match *f {
                Entry::Known(v) => c = c * v as u64 % p,
                Entry::Var(k) => vars.push(k),
            }
        }
        if c == 0 {
            return;
        }
        if vars.is_empty() {
            self.constant = (self.constant + c) % p;
        } else {
            vars.sort_unstable();
            let slot = self.terms.entry(vars).or_insert(0);
            *slot = (*slot + c) % p;
        }
    }

    fn finish(self) -> Equation {
        let terms: Vec<(u64, Vec<usize>)> = self
            .terms
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(v, c)| (c, v))
            .collect();
        let ready = terms
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        Equation {
            constant: self.constant,
            terms,
            ready,
        }
    }
}

#[derive(Clone, Debug)]
struct Equation {
    constant: u64,
    terms: Vec<(u64, Vec<usize>)>,
    /// Number of leading variables that must be assigned before testing.
    ready: usize,
}

impl Equation {
    fn holds(&self, p: u64, values: &[u32]) -> bool {
        let mut acc = self.constant;
        for (c, vars) in &self.terms {
            let mut m = *c;
            for &v in vars {
                m = m * values[v] as u64 % p;
            }
            acc = (acc + m) % p;
        }
        acc == 0
    }
}

/// Polynomial equations `= 0` in `num_vars` unknowns over `F_p`.
#[derive(Clone, Debug)]
pub struct PolySystem {
    p: u32,
    num_vars: usize,
    by_ready: Vec<Vec<Equation>>,
}

impl PolySystem {
    pub fn new(p: u32, num_vars: usize, equations: impl IntoIterator<Item = EquationBuilder>) -> Self {
        let mut by_ready = vec![Vec::new(); num_vars + 1];
        for b in equations {
            let e = b.finish();
            if e.terms.is_empty() && e.constant == 0 {
                continue;
            }
            by_ready[e.ready].push(e);
        }
        PolySystem { p, num_vars, by_ready }
    }

    pub fn raw_size(&self) -> u128 {
        search_size(self.p as u64, self.num_vars)
    }

    /// All solutions in lexicographic order of the value vector, reading
    /// variable 0 as the most significant digit.
    pub fn solve(&self) -> Vec<Vec<u32>> {
        let p = self.p as u64;
        let mut out = Vec::new();
        if !self.by_ready[0].iter().all(|e| e.holds(p, &[])) {
            return out;
        }
        let mut values = vec![0u32; self.num_vars];
        self.dfs(0, &mut values, &mut out);
        out
    }

    fn dfs(&self, k: usize, values: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == self.num_vars {
            out.push(values.clone());
            return;
        }
        let p = self.p as u64;
        for v in 0..self.p {
            values[k] = v;
            if self.by_ready[k + 1].iter().all(|e| e.holds(p, values)) {
                self.dfs(k + 1, values, out);
            }
        }
        values[k] = 0;
    }
}
