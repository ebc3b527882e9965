//! Finite-dimensional unital associative algebras given by structure
//! constants `e_i e_j = Σ_s τ(i,j,s) e_s`.
//!
//! Indices are 0-based in the API; basis index 0 is always the unit.
//! Rendering (labels, reports) is 1-based.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;

/// Coordinates of an algebra element in the fixed basis.
pub type AlgElem = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    field: Field,
    labels: Vec<String>,
    tau: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

/// First failing index tuple found by [`FinAlgebra::validate`], 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LeftUnit { j: usize, s: usize },
    RightUnit { j: usize, s: usize },
    Associativity { i: usize, j: usize, l: usize, a: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::LeftUnit { j, s } => {
                write!(f, "left unit axiom fails: tau(1,{},{}) is wrong", j + 1, s + 1)
            }
            Violation::RightUnit { j, s } => {
                write!(f, "right unit axiom fails: tau({},1,{}) is wrong", j + 1, s + 1)
            }
            Violation::Associativity { i, j, l, a } => write!(
                f,
                "associativity fails at (i,j,l,a) = ({},{},{},{})",
                i + 1,
                j + 1,
                l + 1,
                a + 1
            ),
        }
    }
}

impl FinAlgebra {
    /// Builds an algebra from sparse `(i, j, s, value)` entries. Repeated
    /// index triples are summed. The axioms are not checked here.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        let mut dense: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for (i, j, s, v) in entries {
            if i >= n || j >= n || s >= n {
                return Err(Error::InvalidAlgebra(format!(
                    "structure constant index ({},{},{}) outside 1..={n}",
                    i + 1,
                    j + 1,
                    s + 1
                )));
            }
            if v.field() != field {
                return Err(Error::InvalidScalar(format!("{v} is not in {field}")));
            }
            let slot = dense.entry((i, j, s)).or_insert_with(|| field.zero());
            *slot = &*slot + &v;
        }
        let mut tau: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for ((i, j, s), v) in dense {
            if !v.is_zero() {
                tau.entry((i, j)).or_default().push((s, v));
            }
        }
        Ok(FinAlgebra { field, labels, tau })
    }

    /// The base field as a one-dimensional algebra.
    pub fn base_field(field: Field) -> Self {
        Self::new(field, vec!["1".into()], [(0, 0, 0, field.one())]).expect("valid")
    }

    /// `k[X]/(X^2)` with basis `{1, x}`.
    pub fn dual_numbers(field: Field) -> Self {
        let one = field.one();
        Self::new(field, vec!["1".into(), "x".into()], unit_constants(2, &one)).expect("valid")
    }

    /// Three-dimensional algebra with nonzero constants
    /// `τ(1,j,j) = τ(j,1,j) = τ(2,3,2) = τ(3,3,3) = 1` (1-based).
    pub fn triangular(field: Field) -> Self {
        let one = field.one();
        let mut entries = unit_constants(3, &one);
        entries.push((1, 2, 1, one.clone()));
        entries.push((2, 2, 2, one));
        Self::new(field, vec!["e1".into(), "e2".into(), "e3".into()], entries).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Nonzero `(s, τ(i,j,s))` pairs of the product `e_i e_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.tau.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn structure_constant(&self, i: usize, j: usize, s: usize) -> Scalar {
        self.product_terms(i, j)
            .iter()
            .find(|(t, _)| *t == s)
            .map_or_else(|| self.field.zero(), |(_, v)| v.clone())
    }

    /// All nonzero constants as `(i, j, s, value)`, sorted by index.
    pub fn nonzero_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.tau
            .iter()
            .flat_map(|(&(i, j), terms)| terms.iter().map(move |(s, v)| (i, j, *s, v)))
    }

    /// Reinterprets the structure constants in another field.
    pub fn over(&self, field: Field) -> Result<Self> {
        if field == self.field {
            return Ok(self.clone());
        }
        let entries = self
            .nonzero_constants()
            .map(|(i, j, s, v)| {
                let w = match v {
                    Scalar::Rational(q) => field.from_rational(q)?,
                    Scalar::Mod { .. } => {
                        return Err(Error::InvalidField(format!(
                            "cannot move constants from {} to {field}",
                            self.field
                        )))
                    }
                };
                Ok((i, j, s, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, self.labels.clone(), entries)
    }

    pub fn basis_vector(&self, i: usize) -> AlgElem {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn unit(&self) -> AlgElem {
        self.basis_vector(0)
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> AlgElem {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (s, t) in self.product_terms(i, j) {
                    out[*s] = &out[*s] + &(&c * t);
                }
            }
        }
        out
    }

    /// Checks the unit axiom for `e_1` and associativity of the constants.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim();
        for j in 0..n {
            for s in 0..n {
                let expected = if j == s { self.field.one() } else { self.field.zero() };
                if self.structure_constant(0, j, s) != expected {
                    return Err(Violation::LeftUnit { j, s });
                }
                if self.structure_constant(j, 0, s) != expected {
                    return Err(Violation::RightUnit { j, s });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    // (e_i e_j) e_l versus e_i (e_j e_l)
                    let left = self.multiply(
                        &self.multiply(&self.basis_vector(i), &self.basis_vector(j)),
                        &self.basis_vector(l),
                    );
                    let right = self.multiply(
                        &self.basis_vector(i),
                        &self.multiply(&self.basis_vector(j), &self.basis_vector(l)),
                    );
                    if let Some(a) = (0..n).find(|&a| left[a] != right[a]) {
                        return Err(Violation::Associativity { i, j, l, a });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

/// `τ(1,j,j) = τ(j,1,j) = 1`, each triple once.
pub(crate) fn unit_constants(n: usize, one: &Scalar) -> Vec<(usize, usize, usize, Scalar)> {
    let mut v = vec![(0, 0, 0, one.clone())];
    for j in 1..n {
        v.push((0, j, j, one.clone()));
        v.push((j, 0, j, one.clone()));
    }
    v
}

/// Whether `f: source → target` (a `dim target × dim source` matrix) is a
/// unit-preserving algebra map.
pub fn is_algebra_map(source: &FinAlgebra, target: &FinAlgebra, f: &Matrix) -> Result<bool> {
    if f.rows() != target.dim() || f.cols() != source.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", target.dim(), source.dim()),
            found: format!("{}x{}", f.rows(), f.cols()),
        });
    }
    if f.column(0) != target.unit() {
        return Ok(false);
    }
    let images: Vec<AlgElem> = (0..source.dim()).map(|i| f.column(i)).collect();
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            let lhs = f.apply(&source.multiply(&source.basis_vector(i), &source.basis_vector(j)));
            let rhs = target.multiply(&images[i], &images[j]);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
