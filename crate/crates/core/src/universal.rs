//! Presentations of the universal coacting bialgebra `a(A)` and of the
//! measuring algebra `a(A, B)`, their coalgebra tables, the canonical
//! coaction `η(e_i) = Σ_s e_s ⊗ x[s,i]`, and bounded-degree axiom checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::ncpoly::{complete, interreduce, GenId, NCPoly, RewriteSystem, Rule, TensorPoly, Word};

/// Default completion and checking degree.
pub const DEFAULT_DEGREE: usize = 4;

/// Relations of `a(target, source)`:
/// `Σ_u β(i,j,u) x[a,u] − Σ_{s,t} τ(s,t,a) x[s,i] x[t,j]` for all `(a,i,j)`
/// in lexicographic order, then `x[a,1] − δ(a,1)` for every `a`.
/// Zero relations are kept so the count is always `n·m² + n`.
pub fn build_measuring_relations(target: &FinAlgebra, source: &FinAlgebra) -> Result<Vec<NCPoly>> {
    let field = target.field();
    if source.field() != field {
        return Err(Error::InvalidField(format!(
            "algebras over different fields: {} and {}",
            target.field(),
            source.field()
        )));
    }
    let (n, m) = (target.dim(), source.dim());
    let x = |s: usize, i: usize| GenId::new(s, i);
    let mut rels = Vec::with_capacity(n * m * m + n);
    for a in 0..n {
        for i in 0..m {
            for j in 0..m {
                let mut r = NCPoly::zero(field);
                for (u, beta) in source.product_terms(i, j) {
                    r.add_term(Word::from_gens([x(a, *u)]), beta.clone());
                }
                for s in 0..n {
                    for t in 0..n {
                        let tau = target.structure_constant(s, t, a);
                        if !tau.is_zero() {
                            r.add_term(Word::from_gens([x(s, i), x(t, j)]), -tau);
                        }
                    }
                }
                rels.push(r);
            }
        }
    }
    for a in 0..n {
        let delta = if a == 0 { field.one() } else { field.zero() };
        rels.push(NCPoly::gen(field, x(a, 0)).sub(&NCPoly::constant(delta)));
    }
    Ok(rels)
}

/// The `n³ + n` defining relations of `a(A)`.
pub fn build_relations(a: &FinAlgebra) -> Vec<NCPoly> {
    build_measuring_relations(a, a).expect("same field")
}

/// Reduced relations on generators `x[s,i]`, `s < rows`, `i < cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuringPresentation {
    rows: usize,
    cols: usize,
    field: Field,
    survivors: Vec<GenId>,
    eliminated: Vec<(GenId, NCPoly)>,
    system: RewriteSystem,
}

impl MeasuringPresentation {
    fn reduce(field: Field, rows: usize, cols: usize, relations: &[NCPoly], degree: usize) -> Result<Self> {
        let system = complete(&interreduce(field, relations)?, degree)?;
        let mut eliminated = Vec::new();
        let mut survivors = Vec::new();
        for i in 0..cols {
            for s in 0..rows {
                let g = GenId::new(s, i);
                match system.rules().iter().find(|r| r.lhs == Word::from_gens([g])) {
                    Some(rule) => eliminated.push((g, rule.rhs.clone())),
                    None => survivors.push(g),
                }
            }
        }
        Ok(MeasuringPresentation {
            rows,
            cols,
            field,
            survivors,
            eliminated,
            system,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `(dim A, dim B)` for `a(A, B)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Generators not eliminated, in increasing generator order.
    pub fn survivors(&self) -> &[GenId] {
        &self.survivors
    }

    /// Eliminated generators with the value substituted for them.
    pub fn eliminated(&self) -> &[(GenId, NCPoly)] {
        &self.eliminated
    }

    /// The full rewrite system, including the elimination rules.
    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    /// Rules whose left side has degree at least two.
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.system.rules().iter().filter(|r| r.lhs.degree() > 1)
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.system.normal_form(p)
    }

    /// Normal form of a single generator.
    pub fn generator_value(&self, g: GenId) -> NCPoly {
        self.normal_form(&NCPoly::gen(self.field, g))
    }

    /// Substitutes eliminated generators only; other words are untouched.
    pub fn eliminate(&self, p: &NCPoly) -> NCPoly {
        let subst: BTreeMap<GenId, &NCPoly> = self.eliminated.iter().map(|(g, v)| (*g, v)).collect();
        p.substitute(&|g| match subst.get(&g) {
            Some(v) => (*v).clone(),
            None => NCPoly::gen(self.field, g),
        })
    }

    /// All words over the surviving generators of degree ≤ `max_degree`,
    /// in increasing order.
    pub fn words_up_to(&self, max_degree: usize) -> Vec<Word> {
        let mut layer = vec![Word::one()];
        let mut all = layer.clone();
        for _ in 0..max_degree {
            layer = layer
                .iter()
                .flat_map(|w| {
                    self.survivors
                        .iter()
                        .map(move |g| w.concat(&Word::from_gens([*g])))
                })
                .collect();
            all.extend(layer.iter().cloned());
        }
        all.sort();
        all
    }

    /// Coefficient vectors of `{w − NF(w)}` over all reducible words of
    /// degree ≤ `max_degree`: a spanning set for the degree-filtered part
    /// of the relation ideal, in the coordinates of [`Self::words_up_to`].
    pub fn relation_span_rows(&self, max_degree: usize) -> Vec<Vec<Scalar>> {
        let words = self.words_up_to(max_degree);
        words
            .iter()
            .filter(|w| self.system.is_reducible(w))
            .map(|w| {
                let p = NCPoly::monomial(self.field.one(), w.clone());
                coordinates(&p.sub(&self.normal_form(&p)), &words)
            })
            .collect()
    }
}

/// Coefficients of `p` on the listed words. Terms outside the list are
/// ignored, so callers should pass a list covering `p`.
pub fn coordinates(p: &NCPoly, words: &[Word]) -> Vec<Scalar> {
    words.iter().map(|w| p.coefficient(w)).collect()
}

pub fn build_measuring(target: &FinAlgebra, source: &FinAlgebra, degree: usize) -> Result<MeasuringPresentation> {
    let rels = build_measuring_relations(target, source)?;
    MeasuringPresentation::reduce(target.field(), target.dim(), source.dim(), &rels, degree)
}

/// `a(A)` with its bialgebra structure and the canonical coaction on `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    algebra: FinAlgebra,
    inner: MeasuringPresentation,
    delta: BTreeMap<GenId, TensorPoly>,
    eps: BTreeMap<GenId, Scalar>,
    coaction: Vec<Vec<(usize, NCPoly)>>,
}

pub fn build_presentation(a: &FinAlgebra, degree: usize) -> Result<Presentation> {
    let inner = MeasuringPresentation::reduce(a.field(), a.dim(), a.dim(), &build_relations(a), degree)?;
    let mut p = Presentation {
        algebra: a.clone(),
        inner,
        delta: BTreeMap::new(),
        eps: BTreeMap::new(),
        coaction: Vec::new(),
    };
    let field = a.field();
    for &g in p.inner.survivors() {
        let d = p.full_delta(g);
        p.delta.insert(g, d);
        let e = if g.s == g.i { field.one() } else { field.zero() };
        p.eps.insert(g, e);
    }
    p.coaction = (0..a.dim())
        .map(|i| {
            (0..a.dim())
                .map(|s| (s, p.inner.generator_value(GenId::new(s, i))))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    Ok(p)
}

impl Presentation {
    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn measuring(&self) -> &MeasuringPresentation {
        &self.inner
    }

    pub fn survivors(&self) -> &[GenId] {
        self.inner.survivors()
    }

    pub fn eliminated(&self) -> &[(GenId, NCPoly)] {
        self.inner.eliminated()
    }

    pub fn system(&self) -> &RewriteSystem {
        self.inner.system()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.inner.rules()
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.inner.normal_form(p)
    }

    pub fn delta_table(&self) -> &BTreeMap<GenId, TensorPoly> {
        &self.delta
    }

    pub fn eps_table(&self) -> &BTreeMap<GenId, Scalar> {
        &self.eps
    }

    /// `η(e_i)` as nonzero `(s, coefficient of e_s)` pairs.
    pub fn coaction(&self, i: usize) -> &[(usize, NCPoly)] {
        &self.coaction[i]
    }

    /// `Σ_s x[i,s] ⊗ x[s,j]` with both legs in normal form; defined for
    /// eliminated generators too.
    pub fn full_delta(&self, g: GenId) -> TensorPoly {
        let field = self.field();
        let mut out = TensorPoly::zero(field, 2);
        for s in 0..self.dim() {
            let left = self.inner.generator_value(GenId::new(g.row(), s));
            let right = self.inner.generator_value(GenId::new(s, g.col()));
            out = out.add(&TensorPoly::from_legs(field, &[left, right]));
        }
        out
    }

    /// Multiplicative extension of `Δ` to a free polynomial, unreduced.
    pub fn delta_hat(&self, p: &NCPoly) -> TensorPoly {
        let field = self.field();
        let mut cache: BTreeMap<GenId, TensorPoly> = BTreeMap::new();
        let mut out = TensorPoly::zero(field, 2);
        for (w, c) in p.terms() {
            let mut acc = TensorPoly::scalar(c.clone(), 2);
            for g in w.letters() {
                let d = cache.entry(*g).or_insert_with(|| self.full_delta(*g));
                acc = acc.mul(d);
            }
            out = out.add(&acc);
        }
        out
    }

    fn delta_hat_word(&self, w: &Word) -> TensorPoly {
        self.delta_hat(&NCPoly::monomial(self.field().one(), w.clone()))
    }

    /// Multiplicative extension of `ε(x[i,j]) = δ(i,j)`.
    pub fn eps_hat(&self, p: &NCPoly) -> Scalar {
        let field = self.field();
        p.evaluate(&|g| if g.s == g.i { field.one() } else { field.zero() })
    }

    fn eps_hat_word(&self, w: &Word) -> Scalar {
        self.eps_hat(&NCPoly::monomial(self.field().one(), w.clone()))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.survivors().iter().map(ToString::to_string).collect();
        writeln!(f, "generators:{}", gens.iter().map(|g| format!(" {g}")).collect::<String>())?;
        writeln!(f, "eliminated:")?;
        for (g, v) in self.eliminated() {
            writeln!(f, "  {g} = {v}")?;
        }
        writeln!(f, "rules:")?;
        for r in self.rules() {
            writeln!(f, "  {r}")?;
        }
        writeln!(f, "delta:")?;
        for (g, d) in &self.delta {
            writeln!(f, "  {g} |-> {d}")?;
        }
        writeln!(f, "epsilon:")?;
        for (g, e) in &self.eps {
            writeln!(f, "  {g} |-> {e}")?;
        }
        writeln!(f, "coaction:")?;
        for (i, terms) in self.coaction.iter().enumerate() {
            let parts: Vec<String> = terms
                .iter()
                .map(|(s, p)| format!("e{} (x) ({p})", s + 1))
                .collect();
            writeln!(f, "  e{} |-> {}", i + 1, parts.join(" + "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    /// Nonzero residue when the check fails.
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    fn push(&mut self, name: String, residue: Option<String>) {
        self.entries.push(CheckEntry {
            name,
            passed: residue.is_none(),
            detail: residue.unwrap_or_default(),
        });
    }

    fn push_tensor(&mut self, name: String, t: &TensorPoly) {
        self.push(name, (!t.is_zero()).then(|| t.to_string()));
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }
}

fn certification_entry(report: &mut CheckReport, sys: &RewriteSystem, degree: usize) {
    let ok = sys.certified_degree().is_some_and(|d| d >= degree);
    report.push(
        format!("completion certified to degree {degree}"),
        (!ok).then(|| format!("certified degree {:?}", sys.certified_degree())),
    );
}

/// `Δ̂(r)` and `ε̂(r)` vanish for every defining relation and rule;
/// coassociativity and counit hold on every surviving generator.
pub fn check_bialgebra(p: &Presentation, degree: usize) -> CheckReport {
    let mut report = CheckReport::default();
    let sys = p.system();
    certification_entry(&mut report, sys, degree);
    let raw = build_relations(p.algebra());
    let n = p.dim();
    for (k, r) in raw.iter().enumerate() {
        let label = if k < n * n * n {
            let (a, i, j) = (k / (n * n), (k / n) % n, k % n);
            format!("relation (a,i,j)=({},{},{})", a + 1, i + 1, j + 1)
        } else {
            format!("unit relation a={}", k - n * n * n + 1)
        };
        report.push_tensor(format!("delta {label}"), &sys.tensor_normal_form(&p.delta_hat(r)));
        let e = p.eps_hat(r);
        report.push(format!("epsilon {label}"), (!e.is_zero()).then(|| e.to_string()));
    }
    for rule in p.rules() {
        let rel = rule.relation();
        report.push_tensor(
            format!("delta rule {}", rule.lhs),
            &sys.tensor_normal_form(&p.delta_hat(&rel)),
        );
        let e = p.eps_hat(&rel);
        report.push(format!("epsilon rule {}", rule.lhs), (!e.is_zero()).then(|| e.to_string()));
    }
    let field = p.field();
    for (&g, d) in p.delta_table() {
        let left = d.expand_leg(0, &|w| p.delta_hat_word(w));
        let right = d.expand_leg(1, &|w| p.delta_hat_word(w));
        report.push_tensor(
            format!("coassociativity {g}"),
            &sys.tensor_normal_form(&left.sub(&right)),
        );
        let gen = TensorPoly::pure(field.one(), vec![Word::from_gens([g])]);
        let l = d.contract_leg(0, &|w| p.eps_hat_word(w));
        let r = d.contract_leg(1, &|w| p.eps_hat_word(w));
        report.push_tensor(format!("left counit {g}"), &sys.tensor_normal_form(&l.sub(&gen)));
        report.push_tensor(format!("right counit {g}"), &sys.tensor_normal_form(&r.sub(&gen)));
    }
    report
}

/// The canonical coaction is coassociative, counital, unital and
/// multiplicative modulo the relations.
pub fn check_comodule(p: &Presentation, degree: usize) -> CheckReport {
    let mut report = CheckReport::default();
    let sys = p.system();
    certification_entry(&mut report, sys, degree);
    let a = p.algebra();
    let field = p.field();
    let n = p.dim();
    // c[s][i] = coefficient of e_s in η(e_i)
    let c: Vec<Vec<NCPoly>> = (0..n)
        .map(|s| (0..n).map(|i| p.normal_form(&NCPoly::gen(field, GenId::new(s, i)))).collect())
        .collect();
    for i in 0..n {
        for t in 0..n {
            let mut lhs = TensorPoly::zero(field, 2);
            for s in 0..n {
                lhs = lhs.add(&TensorPoly::from_legs(field, &[c[t][s].clone(), c[s][i].clone()]));
            }
            let rhs = p.delta_hat(&c[t][i]);
            report.push_tensor(
                format!("coaction coassociativity e{} component e{}", i + 1, t + 1),
                &sys.tensor_normal_form(&lhs.sub(&rhs)),
            );
        }
        let counit: Vec<Scalar> = (0..n).map(|t| p.eps_hat(&c[t][i])).collect();
        report.push(
            format!("coaction counit e{}", i + 1),
            (counit != a.basis_vector(i)).then(|| format!("{counit:?}")),
        );
    }
    let unit_ok = (0..n).all(|t| {
        let expected = if t == 0 { NCPoly::one(field) } else { NCPoly::zero(field) };
        c[t][0] == expected
    });
    report.push("coaction unit".into(), (!unit_ok).then(|| "eta(e1) != e1 (x) 1".into()));
    for i in 0..n {
        for j in 0..n {
            for target in 0..n {
                let mut lhs = NCPoly::zero(field);
                for (u, tau) in a.product_terms(i, j) {
                    lhs = lhs.add(&c[target][*u].scale(tau));
                }
                let mut rhs = NCPoly::zero(field);
                for s in 0..n {
                    for t in 0..n {
                        let tau = a.structure_constant(s, t, target);
                        if !tau.is_zero() {
                            rhs = rhs.add(&c[s][i].mul(&c[t][j]).scale(&tau));
                        }
                    }
                }
                let nf = p.normal_form(&lhs.sub(&rhs));
                report.push(
                    format!(
                        "coaction multiplicativity (e{}, e{}) component e{}",
                        i + 1,
                        j + 1,
                        target + 1
                    ),
                    (!nf.is_zero()).then(|| nf.to_string()),
                );
            }
        }
    }
    report
}
