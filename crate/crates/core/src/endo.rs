//! Algebra maps `a(A) → k` as matrices, the convolution monoid they form,
//! and its identification with `End(A)` and `Aut(A)` over finite fields.
//!
//! A point is the matrix `M[s][i] = θ(x[s,i])`. Read with the column
//! convention it is also the matrix of the endomorphism
//! `e_i ↦ Σ_s θ(x[s,i]) e_s`, and convolution of points is the matrix
//! product.

use crate::algebra::{is_algebra_map, FinAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;
use crate::ncpoly::{GenId, NCPoly};
use crate::search::{check_size, search_size, Entry, EquationBuilder, PolySystem};
use crate::universal::{build_measuring_relations, build_relations};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndoPoint(Matrix);

impl EndoPoint {
    /// Wraps a matrix after checking it satisfies the relations of `a(A)`.
    pub fn new(a: &FinAlgebra, m: Matrix) -> Result<Self> {
        if is_point(a, &m) {
            Ok(EndoPoint(m))
        } else {
            Err(Error::InvalidAlgebra(format!("{m} is not a point of a(A)")))
        }
    }

    /// The counit `ε(x[i,j]) = δ(i,j)`.
    pub fn counit(field: Field, n: usize) -> Self {
        EndoPoint(Matrix::identity(field, n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_invertible(&self) -> bool {
        !self.0.determinant().expect("square").is_zero()
    }
}

fn evaluate_at(rel: &NCPoly, m: &Matrix) -> Scalar {
    rel.evaluate(&|g| m.get(g.row(), g.col()).clone())
}

/// True iff `M` satisfies every relation of `a(A)` evaluated in `k`.
pub fn is_point(a: &FinAlgebra, m: &Matrix) -> bool {
    if m.rows() != a.dim() || m.cols() != a.dim() || m.field() != a.field() {
        return false;
    }
    build_relations(a).iter().all(|r| evaluate_at(r, m).is_zero())
}

/// The endomorphism `w(e_i) = Σ_s θ(x[s,i]) e_s`.
pub fn gamma(point: &EndoPoint) -> Matrix {
    point.0.clone()
}

/// `(θ₁ ⋆ θ₂)(x[s,j]) = Σ_t θ₁(x[s,t]) θ₂(x[t,j])`.
pub fn convolve(first: &EndoPoint, second: &EndoPoint) -> EndoPoint {
    EndoPoint(first.0.mul(&second.0).expect("square matrices of equal size"))
}

/// Turns relations into equations over `F_p` by evaluating each generator
/// at a fixed value or an unknown.
pub(crate) fn equations(p: u32, relations: &[NCPoly], entry: impl Fn(GenId) -> Entry) -> Vec<EquationBuilder> {
    relations
        .iter()
        .map(|rel| {
            let mut eq = EquationBuilder::default();
            for (w, c) in rel.terms() {
                let factors: Vec<Entry> = w.letters().iter().map(|g| entry(*g)).collect();
                eq.add_product(p, c.residue().expect("prime field"), &factors);
            }
            eq
        })
        .collect()
}

fn prime_of(field: Field) -> Result<u32> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rationals => Err(Error::NotFinite(field.to_string())),
    }
}

/// Matrices `rows × cols` solving the given relations, first column fixed
/// to `e_1`; unknowns walk column-major.
fn solve_points(field: Field, rows: usize, cols: usize, relations: &[NCPoly]) -> Result<Vec<Matrix>> {
    let p = prime_of(field)?;
    let num_vars = rows * (cols - 1);
    check_size(search_size(p as u64, num_vars))?;
    let entry = |g: GenId| {
        if g.col() == 0 {
            Entry::Known(u32::from(g.row() == 0))
        } else {
            Entry::Var((g.col() - 1) * rows + g.row())
        }
    };
    let sys = PolySystem::new(p, num_vars, equations(p, relations, entry));
    let mut out: Vec<Matrix> = sys
        .solve()
        .into_iter()
        .map(|vals| {
            let mut m = Matrix::zeros(field, rows, cols);
            m.set(0, 0, field.one());
            for i in 1..cols {
                for s in 0..rows {
                    m.set(s, i, field.residue(vals[(i - 1) * rows + s]));
                }
            }
            m
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The endomorphism monoid of `A` realized as points, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoMonoid {
    points: Vec<EndoPoint>,
    identity: usize,
}

impl EndoMonoid {
    fn from_points(field: Field, n: usize, mut points: Vec<EndoPoint>) -> Self {
        points.sort();
        points.dedup();
        let id = EndoPoint::counit(field, n);
        let identity = points.binary_search(&id).expect("the counit is a point");
        EndoMonoid { points, identity }
    }

    pub fn points(&self) -> &[EndoPoint] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, p: &EndoPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// `table[i][j]` is the index of `points[i] ⋆ points[j]`, or `None`
    /// if the product falls outside the set.
    pub fn cayley_table(&self) -> Vec<Vec<Option<usize>>> {
        self.points
            .iter()
            .map(|a| self.points.iter().map(|b| self.index_of(&convolve(a, b))).collect())
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.cayley_table().iter().flatten().all(Option::is_some)
    }

    /// Every element has an inverse in the set that is itself a point.
    pub fn has_inverses(&self, a: &FinAlgebra) -> bool {
        self.points.iter().all(|p| {
            p.0.inverse().is_some_and(|inv| is_point(a, &inv) && self.index_of(&EndoPoint(inv)).is_some())
        })
    }
}

pub fn enumerate_endomorphisms(a: &FinAlgebra) -> Result<EndoMonoid> {
    let pts = solve_points(a.field(), a.dim(), a.dim(), &build_relations(a))?;
    Ok(EndoMonoid::from_points(
        a.field(),
        a.dim(),
        pts.into_iter().map(EndoPoint).collect(),
    ))
}

/// Invertible points, with the group axioms checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    pub group: EndoMonoid,
    pub closed: bool,
    pub inverses: bool,
}

impl AutGroup {
    pub fn verified(&self) -> bool {
        self.closed && self.inverses
    }
}

pub fn automorphism_group(a: &FinAlgebra) -> Result<AutGroup> {
    let endo = enumerate_endomorphisms(a)?;
    Ok(automorphisms_of(a, &endo))
}

pub fn automorphisms_of(a: &FinAlgebra, endo: &EndoMonoid) -> AutGroup {
    let units: Vec<EndoPoint> = endo.points.iter().filter(|p| p.is_invertible()).cloned().collect();
    let group = EndoMonoid::from_points(a.field(), a.dim(), units);
    AutGroup {
        closed: group.is_closed(),
        inverses: group.has_inverses(a),
        group,
    }
}

/// Unit-preserving algebra maps `source → target` from the points of
/// `a(target, source)`: `dim target × dim source` matrices.
pub fn enumerate_homs(source: &FinAlgebra, target: &FinAlgebra) -> Result<Vec<Matrix>> {
    let rels = build_measuring_relations(target, source)?;
    solve_points(target.field(), target.dim(), source.dim(), &rels)
}

/// Independent route: every `dim target × dim source` matrix tested with
/// [`is_algebra_map`]. No relations involved.
pub fn brute_force_homs(source: &FinAlgebra, target: &FinAlgebra) -> Result<Vec<Matrix>> {
    let field = target.field();
    let p = prime_of(field)?;
    let (rows, cols) = (target.dim(), source.dim());
    check_size(search_size(p as u64, rows * cols))?;
    let elems = field.elements().expect("finite");
    let mut counter = vec![0usize; rows * cols];
    let mut out = Vec::new();
    loop {
        let mut m = Matrix::zeros(field, rows, cols);
        for (k, &v) in counter.iter().enumerate() {
            m.set(k / cols, k % cols, elems[v].clone());
        }
        if is_algebra_map(source, target, &m)? {
            out.push(m);
        }
        if !crate::linalg::advance(&mut counter, elems.len()) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::Prime(p)
    }

    fn mat(field: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn point_membership() {
        let q = Field::Rationals;
        let d = FinAlgebra::dual_numbers(q);
        assert!(is_point(&d, &Matrix::identity(q, 2)));
        assert!(is_point(&d, &mat(q, &[&[1, 0], &[0, 7]])));
        assert!(!is_point(&d, &mat(q, &[&[1, 2], &[0, 7]])));
        let d5 = FinAlgebra::dual_numbers(f(5));
        assert!(is_point(&d5, &mat(f(5), &[&[1, 0], &[0, 3]])));
        assert!(!is_point(&d5, &mat(f(5), &[&[0, 0], &[1, 3]])));
    }

    #[test]
    fn convolution_examples() {
        let field = f(7);
        let d = FinAlgebra::dual_numbers(field);
        let a = EndoPoint::new(&d, mat(field, &[&[1, 0], &[0, 2]])).unwrap();
        let b = EndoPoint::new(&d, mat(field, &[&[1, 0], &[0, 3]])).unwrap();
        assert_eq!(convolve(&a, &b).matrix(), &mat(field, &[&[1, 0], &[0, 6]]));
        let id = EndoPoint::counit(field, 2);
        assert_eq!(convolve(&a, &id), a);
        assert_eq!(gamma(&id), Matrix::identity(field, 2));
        let zero = EndoPoint::new(&d, mat(field, &[&[1, 0], &[0, 0]])).unwrap();
        assert!(!zero.is_invertible());
        assert!(!convolve(&zero, &a).is_invertible());
        assert!(!convolve(&a, &zero).is_invertible());
    }

    #[test]
    fn dual_numbers_monoid() {
        for p in [2, 3, 5, 7] {
            let d = FinAlgebra::dual_numbers(f(p));
            let endo = enumerate_endomorphisms(&d).unwrap();
            assert_eq!(endo.order(), p as usize);
            assert!(endo.is_closed());
            let aut = automorphisms_of(&d, &endo);
            assert_eq!(aut.group.order(), p as usize - 1);
            assert!(aut.verified());
        }
    }

    #[test]
    fn base_field_is_trivial() {
        let k = FinAlgebra::base_field(f(3));
        assert_eq!(enumerate_endomorphisms(&k).unwrap().order(), 1);
        assert_eq!(automorphism_group(&k).unwrap().group.order(), 1);
        let d = FinAlgebra::dual_numbers(f(3));
        assert_eq!(enumerate_homs(&k, &d).unwrap().len(), 1);
    }

    #[test]
    fn rationals_are_rejected() {
        let d = FinAlgebra::dual_numbers(Field::Rationals);
        assert!(matches!(enumerate_endomorphisms(&d), Err(Error::NotFinite(_))));
    }

    #[test]
    fn two_routes_agree_on_small_cases() {
        for p in [2, 3] {
            let d = FinAlgebra::dual_numbers(f(p));
            let t = FinAlgebra::triangular(f(p));
            assert_eq!(enumerate_homs(&d, &d).unwrap(), brute_force_homs(&d, &d).unwrap());
            assert_eq!(enumerate_homs(&d, &t).unwrap(), brute_force_homs(&d, &t).unwrap());
            assert_eq!(enumerate_homs(&t, &d).unwrap(), brute_force_homs(&t, &d).unwrap());
        }
        assert_eq!(enumerate_homs(&FinAlgebra::dual_numbers(f(3)), &FinAlgebra::dual_numbers(f(3))).unwrap().len(), 3);
    }

    #[test]
    fn search_bound_is_respected() {
        // 65521^2 exceeds the default bound
        let d = FinAlgebra::dual_numbers(Field::Prime(65521));
        assert!(matches!(brute_force_homs(&d, &d), Err(Error::SearchSizeExceeded { .. })));
    }
}
