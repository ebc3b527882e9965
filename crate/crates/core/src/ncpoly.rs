//! Noncommutative polynomials on generators `x[s,i]`, deglex rewriting,
//! interreduction, and degree-bounded overlap completion.
//!
//! Generators are ordered column-major: `x[s,i] < x[s',i']` iff `i < i'`,
//! or `i = i'` and `s < s'`. Words are ordered by degree first, then
//! lexicographically by that generator order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Generator `x[s+1, i+1]`; both indices are stored 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenId {
    pub s: u16,
    pub i: u16,
}

impl GenId {
    pub fn new(s: usize, i: usize) -> Self {
        GenId {
            s: s as u16,
            i: i as u16,
        }
    }

    pub fn row(&self) -> usize {
        self.s as usize
    }

    pub fn col(&self) -> usize {
        self.i as usize
    }
}

impl Ord for GenId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.i, self.s).cmp(&(other.i, other.s))
    }
}

impl PartialOrd for GenId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.s + 1, self.i + 1)
    }
}

/// A monomial of the free algebra. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn from_gens(gens: impl IntoIterator<Item = GenId>) -> Self {
        Word(gens.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Positions where `pattern` occurs as a factor, leftmost first.
    pub fn occurrences<'a>(&'a self, pattern: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let (n, m) = (self.0.len(), pattern.0.len());
        let last = if m <= n { n - m + 1 } else { 0 };
        (0..last).filter(move |&p| self.0[p..p + m] == pattern.0[..])
    }

    pub fn contains_factor(&self, pattern: &Word) -> bool {
        self.occurrences(pattern).next().is_some()
    }

    fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Noncommutative polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPoly {
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(field: Field) -> Self {
        NCPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, Word::one())
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn monomial(c: Scalar, w: Word) -> Self {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { field, terms }
    }

    pub fn gen(field: Field, g: GenId) -> Self {
        Self::monomial(field.one(), Word(vec![g]))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::degree)
    }

    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_one)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero(self.field);
        }
        NCPoly {
            field: self.field,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// `left · self · right` for words.
    pub fn sandwich(&self, left: &Word, right: &Word) -> NCPoly {
        NCPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (left.concat(w).concat(right), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> NCPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Applies the algebra map sending each generator to `image(g)`.
    pub fn substitute(&self, image: &impl Fn(GenId) -> NCPoly) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for g in w.letters() {
                acc = acc.mul(&image(*g));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Evaluates in a commutative target by sending each generator to a scalar.
    pub fn evaluate(&self, value: &impl Fn(GenId) -> Scalar) -> Scalar {
        self.terms.iter().fold(self.field.zero(), |acc, (w, c)| {
            let m = w.letters().iter().fold(c.clone(), |p, g| p * value(*g));
            acc + m
        })
    }

    /// Every generator occurring in some term.
    pub fn generators(&self) -> BTreeSet<GenId> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    /// Parses the serialization produced by `Display`, and more loosely
    /// any sum like `x[1,2] x[1,3] - 2 x[1,2] + 1/2`.
    pub fn parse(field: Field, s: &str) -> Result<NCPoly> {
        let mut out = NCPoly::zero(field);
        let mut coeff = field.one();
        let mut word: Vec<GenId> = Vec::new();
        let mut have_factor = false;
        let bytes = s.as_bytes();
        let mut pos = 0;
        let err = |msg: &str| Error::Parse(format!("{msg} in polynomial `{s}`"));
        while pos < bytes.len() {
            let ch = bytes[pos] as char;
            match ch {
                ' ' | '\t' | '*' => pos += 1,
                '+' | '-' => {
                    if have_factor {
                        out.add_term(Word(std::mem::take(&mut word)), coeff);
                        coeff = field.one();
                        have_factor = false;
                    }
                    if ch == '-' {
                        coeff = -coeff;
                    }
                    pos += 1;
                }
                '0'..='9' => {
                    let start = pos;
                    while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                        pos += 1;
                    }
                    coeff = coeff * field.parse(&s[start..pos])?;
                    have_factor = true;
                }
                'x' => {
                    let close = s[pos..].find(']').ok_or_else(|| err("unclosed generator"))? + pos;
                    let inner = s[pos + 1..close]
                        .strip_prefix('[')
                        .ok_or_else(|| err("expected `[` after `x`"))?;
                    let (a, b) = inner.split_once(',').ok_or_else(|| err("expected `x[s,i]`"))?;
                    let a: usize = a.trim().parse().map_err(|_| err("bad generator index"))?;
                    let b: usize = b.trim().parse().map_err(|_| err("bad generator index"))?;
                    if a == 0 || b == 0 {
                        return Err(err("generator indices are 1-based"));
                    }
                    word.push(GenId::new(a - 1, b - 1));
                    have_factor = true;
                    pos = close + 1;
                }
                _ => return Err(err(&format!("unexpected character `{ch}`"))),
            }
        }
        if !have_factor {
            return Err(err("dangling sign or empty input"));
        }
        out.add_term(Word(word), coeff);
        Ok(out)
    }
}

impl fmt::Display for NCPoly {
    /// Terms from the leading one down, `coeff * word` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {w}")?;
            }
        }
        Ok(())
    }
}

/// Oriented rule `lhs → rhs` with every word of `rhs` below `lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

impl Rule {
    /// The relation `lhs − rhs` this rule orients.
    pub fn relation(&self) -> NCPoly {
        NCPoly::monomial(self.rhs.field().one(), self.lhs.clone()).sub(&self.rhs)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Which reducible word and which rule to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Greatest reducible word, lowest rule index, leftmost match.
    Leftmost,
    /// Smallest reducible word, highest rule index, rightmost match.
    Rightmost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    field: Field,
    rules: Vec<Rule>,
    /// Degree up to which all overlaps are resolved, once completed.
    certified_degree: Option<usize>,
}

impl RewriteSystem {
    pub fn empty(field: Field) -> Self {
        RewriteSystem {
            field,
            rules: Vec::new(),
            certified_degree: None,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn certified_degree(&self) -> Option<usize> {
        self.certified_degree
    }

    pub fn max_degree(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.degree()).max().unwrap_or(0)
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        self.rules.iter().any(|r| w.contains_factor(&r.lhs))
    }

    fn rewrite_once(&self, w: &Word, strategy: ReductionOrder) -> Option<NCPoly> {
        let hit = match strategy {
            ReductionOrder::Leftmost => self
                .rules
                .iter()
                .find_map(|r| w.occurrences(&r.lhs).next().map(|p| (r, p))),
            ReductionOrder::Rightmost => self
                .rules
                .iter()
                .rev()
                .find_map(|r| w.occurrences(&r.lhs).last().map(|p| (r, p))),
        };
        hit.map(|(r, p)| {
            let left = w.slice(0, p);
            let right = w.slice(p + r.lhs.degree(), w.degree());
            r.rhs.sandwich(&left, &right)
        })
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.normal_form_with(p, ReductionOrder::Leftmost)
    }

    pub fn normal_form_with(&self, p: &NCPoly, strategy: ReductionOrder) -> NCPoly {
        let mut cur = p.clone();
        loop {
            let step = {
                let mut words: Box<dyn Iterator<Item = (&Word, &Scalar)>> = match strategy {
                    ReductionOrder::Leftmost => Box::new(cur.terms.iter().rev()),
                    ReductionOrder::Rightmost => Box::new(cur.terms.iter()),
                };
                words.find_map(|(w, c)| {
                    self.rewrite_once(w, strategy)
                        .map(|rep| (w.clone(), c.clone(), rep))
                })
            };
            match step {
                None => return cur,
                Some((w, c, rep)) => {
                    cur.terms.remove(&w);
                    cur = cur.add(&rep.scale(&c));
                }
            }
        }
    }

    /// Membership test valid for polynomials of degree ≤ the certified degree.
    pub fn ideal_member_bounded(&self, p: &NCPoly) -> Membership {
        let nf = self.normal_form(p);
        if nf.is_zero() {
            Membership::Yes
        } else {
            Membership::NoAtBound(nf)
        }
    }

    /// Reduces every leg independently, then re-aggregates coefficients.
    pub fn tensor_normal_form(&self, t: &TensorPoly) -> TensorPoly {
        let mut leg_cache: BTreeMap<Word, NCPoly> = BTreeMap::new();
        let mut out = TensorPoly::zero(t.field, t.arity);
        for (legs, c) in &t.terms {
            let mut partial: Vec<(Vec<Word>, Scalar)> = vec![(Vec::new(), c.clone())];
            for w in legs {
                let nf = leg_cache
                    .entry(w.clone())
                    .or_insert_with(|| self.normal_form(&NCPoly::monomial(self.field.one(), w.clone())))
                    .clone();
                let mut next = Vec::new();
                for (prefix, pc) in &partial {
                    for (nw, nc) in nf.terms() {
                        let mut legs = prefix.clone();
                        legs.push(nw.clone());
                        next.push((legs, pc * nc));
                    }
                }
                partial = next;
            }
            for (legs, c) in partial {
                out.add_term(legs, c);
            }
        }
        out
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    /// Carries the nonzero normal form.
    NoAtBound(NCPoly),
}

/// Turns relations into an interreduced, monic rewrite system generating
/// the same two-sided ideal. Relations with a single-generator leading
/// word eliminate that generator everywhere.
pub fn interreduce(field: Field, relations: &[NCPoly]) -> Result<RewriteSystem> {
    let mut sys = RewriteSystem::empty(field);
    let mut queue: VecDeque<NCPoly> = relations.iter().filter(|p| !p.is_zero()).cloned().collect();
    while let Some(p) = queue.pop_front() {
        let r = sys.normal_form(&p);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Err(Error::Contradiction(p.to_string()));
        }
        let r = r.monic();
        let (lead, _) = r.leading().expect("nonzero");
        let lead = lead.clone();
        let mut rest = r.clone();
        rest.terms.remove(&lead);
        sys.rules.retain(|rule| {
            if rule.lhs.contains_factor(&lead) {
                queue.push_back(rule.relation());
                false
            } else {
                true
            }
        });
        sys.rules.push(Rule {
            lhs: lead,
            rhs: rest.neg(),
        });
    }
    for k in 0..sys.rules.len() {
        let rhs = sys.normal_form(&sys.rules[k].rhs);
        sys.rules[k].rhs = rhs;
    }
    sys.rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
    Ok(sys)
}

/// An overlap ambiguity `u·m·v` where `lhs1 = u·m` and `lhs2 = m·v`.
#[derive(Clone, Debug)]
struct Overlap {
    first: usize,
    second: usize,
    shared: usize,
}

fn overlaps(rules: &[Rule], bound: usize) -> Vec<Overlap> {
    let mut out = Vec::new();
    for (a, r1) in rules.iter().enumerate() {
        for (b, r2) in rules.iter().enumerate() {
            let (l1, l2) = (r1.lhs.letters(), r2.lhs.letters());
            for k in 1..l1.len().min(l2.len()) {
                if l1.len() + l2.len() - k > bound {
                    continue;
                }
                if l1[l1.len() - k..] == l2[..k] {
                    out.push(Overlap {
                        first: a,
                        second: b,
                        shared: k,
                    });
                }
            }
        }
    }
    out
}

impl RewriteSystem {
    /// The two one-step reductions of an overlap word, subtracted.
    fn s_poly(&self, o: &Overlap) -> NCPoly {
        let r1 = &self.rules[o.first];
        let r2 = &self.rules[o.second];
        let u = r1.lhs.slice(0, r1.lhs.degree() - o.shared);
        let v = r2.lhs.slice(o.shared, r2.lhs.degree());
        r1.rhs
            .sandwich(&Word::one(), &v)
            .sub(&r2.rhs.sandwich(&u, &Word::one()))
    }

    /// Overlap words of degree ≤ `bound` whose two reductions disagree.
    pub fn unresolved_overlaps(&self, bound: usize) -> Vec<(Word, NCPoly)> {
        overlaps(&self.rules, bound)
            .into_iter()
            .filter_map(|o| {
                let nf = self.normal_form(&self.s_poly(&o));
                if nf.is_zero() {
                    None
                } else {
                    let r1 = &self.rules[o.first].lhs;
                    let v = self.rules[o.second].lhs.slice(o.shared, self.rules[o.second].lhs.degree());
                    Some((r1.concat(&v), nf))
                }
            })
            .collect()
    }
}

/// Resolves all overlap ambiguities of degree ≤ `bound`, adding rules as
/// needed, so that normal forms are canonical for inputs of degree ≤ `bound`.
pub fn complete(system: &RewriteSystem, bound: usize) -> Result<RewriteSystem> {
    if let Some(r) = system.rules.iter().find(|r| r.lhs.degree() > bound) {
        return Err(Error::BoundExceeded {
            degree: r.lhs.degree(),
            bound,
        });
    }
    let mut sys = system.clone();
    loop {
        let fresh: Vec<NCPoly> = overlaps(&sys.rules, bound)
            .iter()
            .map(|o| sys.normal_form(&sys.s_poly(o)))
            .filter(|nf| !nf.is_zero())
            .collect();
        if fresh.is_empty() {
            sys.certified_degree = Some(bound);
            return Ok(sys);
        }
        let mut all: Vec<NCPoly> = sys.rules.iter().map(Rule::relation).collect();
        all.extend(fresh);
        let next = interreduce(sys.field, &all)?;
        if let Some(r) = next.rules.iter().find(|r| r.lhs.degree() > bound) {
            return Err(Error::BoundExceeded {
                degree: r.lhs.degree(),
                bound,
            });
        }
        sys = next;
    }
}

/// Element of a tensor power of the free algebra; all keys share one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    field: Field,
    arity: usize,
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl TensorPoly {
    pub fn zero(field: Field, arity: usize) -> Self {
        TensorPoly {
            field,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn pure(c: Scalar, legs: Vec<Word>) -> Self {
        let mut t = Self::zero(c.field(), legs.len());
        t.add_term(legs, c);
        t
    }

    /// `1 ⊗ … ⊗ 1` scaled by `c`.
    pub fn scalar(c: Scalar, arity: usize) -> Self {
        Self::pure(c, vec![Word::one(); arity])
    }

    /// `p₁ ⊗ p₂ ⊗ …` expanded.
    pub fn from_legs(field: Field, legs: &[NCPoly]) -> Self {
        let mut partial: Vec<(Vec<Word>, Scalar)> = vec![(Vec::new(), field.one())];
        for leg in legs {
            let mut next = Vec::new();
            for (prefix, c) in &partial {
                for (w, d) in leg.terms() {
                    let mut v = prefix.clone();
                    v.push(w.clone());
                    next.push((v, c * d));
                }
            }
            partial = next;
        }
        let mut t = Self::zero(field, legs.len());
        for (legs, c) in partial {
            t.add_term(legs, c);
        }
        t
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, legs: Vec<Word>, c: Scalar) {
        assert_eq!(legs.len(), self.arity, "tensor arity mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(legs).or_insert_with(|| self.field.zero());
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = Self::zero(self.field, self.arity);
        for (l, v) in &self.terms {
            out.add_term(l.clone(), v * c);
        }
        out
    }

    /// Componentwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = Self::zero(self.field, self.arity);
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                let legs = l1.iter().zip(l2).map(|(a, b)| a.concat(b)).collect();
                out.add_term(legs, c1 * c2);
            }
        }
        out
    }

    /// Replaces leg `leg` by its image under a linear map into `k`-fold
    /// tensors, splicing the new legs in place.
    pub fn expand_leg(&self, leg: usize, image: &impl Fn(&Word) -> TensorPoly) -> TensorPoly {
        let mut out: Option<TensorPoly> = None;
        for (legs, c) in &self.terms {
            let img = image(&legs[leg]);
            let mut acc = Self::zero(self.field, self.arity - 1 + img.arity);
            for (new_legs, d) in &img.terms {
                let mut v: Vec<Word> = legs[..leg].to_vec();
                v.extend(new_legs.iter().cloned());
                v.extend(legs[leg + 1..].iter().cloned());
                acc.add_term(v, c * d);
            }
            out = Some(match out {
                None => acc,
                Some(o) => o.add(&acc),
            });
        }
        out.unwrap_or_else(|| Self::zero(self.field, self.arity))
    }

    /// Applies a scalar-valued map to leg `leg`, dropping it.
    pub fn contract_leg(&self, leg: usize, value: &impl Fn(&Word) -> Scalar) -> TensorPoly {
        let mut out = Self::zero(self.field, self.arity - 1);
        for (legs, c) in &self.terms {
            let mut v = legs.clone();
            let w = v.remove(leg);
            out.add_term(v, c * value(&w));
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (legs, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * ")?;
            for (j, w) in legs.iter().enumerate() {
                if j > 0 {
                    write!(f, " (x) ")?;
                }
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn x() -> GenId {
        GenId::new(1, 0)
    }

    fn y() -> GenId {
        GenId::new(0, 0)
    }

    fn p(s: &str) -> NCPoly {
        NCPoly::parse(Q, s).unwrap()
    }

    /// x = x[2,1] > y = x[1,1]; rules x² → 0, xy → −yx.
    fn anti_system(field: Field) -> RewriteSystem {
        interreduce(
            field,
            &[
                NCPoly::parse(field, "x[2,1] x[2,1]").unwrap(),
                NCPoly::parse(field, "x[2,1] x[1,1] + x[1,1] x[2,1]").unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn generator_order_is_column_major() {
        assert!(GenId::new(2, 0) < GenId::new(0, 1));
        assert!(GenId::new(0, 1) < GenId::new(1, 1));
        let short = Word::from_gens([GenId::new(2, 2)]);
        let long = Word::from_gens([GenId::new(0, 0), GenId::new(0, 0)]);
        assert!(short < long);
    }

    #[test]
    fn arithmetic_examples() {
        let xy = NCPoly::gen(Q, x()).mul(&NCPoly::gen(Q, y()));
        assert_eq!(xy.len(), 1);
        assert_eq!(xy.leading().unwrap().0, &Word::from_gens([x(), y()]));
        let s = NCPoly::gen(Q, x()).add(&NCPoly::gen(Q, y()));
        let d = NCPoly::gen(Q, x()).sub(&NCPoly::gen(Q, y()));
        let prod = s.mul(&d);
        assert_eq!(prod, p("x[2,1] x[2,1] - x[2,1] x[1,1] + x[1,1] x[2,1] - x[1,1] x[1,1]"));
        assert_eq!(prod.len(), 4);
        assert!(prod.scale(&Q.zero()).is_zero());
    }

    #[test]
    fn display_round_trips() {
        let q = p("3/2 x[1,2] x[2,2] - x[2,2] + 7");
        assert_eq!(q.to_string(), "3/2 * x[1,2] x[2,2] + -1 * x[2,2] + 7");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(NCPoly::zero(Q).to_string(), "0");
        assert!(NCPoly::parse(Q, "x[0,1]").is_err());
        assert!(NCPoly::parse(Q, "x[1,2").is_err());
        assert!(NCPoly::parse(Q, "").is_err());
    }

    #[test]
    fn anticommuting_rules() {
        let r = anti_system(Q);
        assert_eq!(r.rules().len(), 2);
        assert!(r.normal_form(&p("x[2,1] x[2,1]")).is_zero());
        // xyx → −yx² → 0
        assert!(r.normal_form(&p("x[2,1] x[1,1] x[2,1]")).is_zero());
        let q = p("x[2,1] x[1,1] + 5");
        assert_eq!(RewriteSystem::empty(Q).normal_form(&q), q);
        assert_eq!(r.normal_form(&p("x[2,1] x[1,1]")), p("-x[1,1] x[2,1]"));
    }

    #[test]
    fn interreduce_eliminates_linear_generators() {
        let rels = [p("x[2,1]"), p("x[1,1] - 1"), p("x[1,2] x[1,2]")];
        let r = interreduce(Q, &rels).unwrap();
        let x11 = Word::from_gens([GenId::new(0, 0)]);
        let x21 = Word::from_gens([GenId::new(1, 0)]);
        let sq = Word::from_gens([GenId::new(0, 1), GenId::new(0, 1)]);
        let lhs: Vec<&Word> = r.rules().iter().map(|r| &r.lhs).collect();
        assert_eq!(lhs, vec![&x11, &x21, &sq]);
        assert_eq!(r.rules()[0].rhs, NCPoly::one(Q));
        assert!(r.rules()[1].rhs.is_zero());
        assert!(r.rules()[2].rhs.is_zero());
        for rel in &rels {
            assert!(r.normal_form(rel).is_zero());
        }
        assert!(interreduce(Q, &[]).unwrap().rules().is_empty());
        assert!(matches!(
            interreduce(Q, &[p("x[1,1] - 1"), p("x[1,1]")]),
            Err(Error::Contradiction(_))
        ));
    }

    #[test]
    fn completion_examples() {
        let r = anti_system(Q);
        assert!(r.unresolved_overlaps(3).is_empty());
        let c = complete(&r, 3).unwrap();
        assert_eq!(c.rules(), r.rules());
        assert_eq!(c.certified_degree(), Some(3));

        let single = interreduce(Q, &[p("x[1,2] x[1,2] x[2,2] - x[2,2]")]).unwrap();
        let c = complete(&single, 4).unwrap();
        assert!(c.unresolved_overlaps(4).is_empty());

        let f2 = Field::Prime(2);
        let comm = interreduce(
            f2,
            &[
                NCPoly::parse(f2, "x[2,1] x[2,1]").unwrap(),
                NCPoly::parse(f2, "x[2,1] x[1,1] - x[1,1] x[2,1]").unwrap(),
            ],
        )
        .unwrap();
        // in characteristic 2 the commutation and anticommutation rules coincide
        assert_eq!(comm, anti_system(f2));
        assert_eq!(complete(&comm, 3).unwrap().rules(), comm.rules());
    }

    #[test]
    fn completion_adds_missing_consequences() {
        // xy → y, yx → x (x = x[2,1] > y = x[1,1]): the overlap xyx gives
        // y x → x and x x ... check that completion terminates and certifies
        let r = interreduce(Q, &[p("x[2,1] x[1,1] - x[1,1]"), p("x[1,1] x[2,1] - x[2,1]")]).unwrap();
        assert!(!r.unresolved_overlaps(3).is_empty());
        let c = complete(&r, 4).unwrap();
        assert!(c.unresolved_overlaps(4).is_empty());
        for rule in r.rules() {
            assert!(c.normal_form(&rule.relation()).is_zero());
        }
    }

    #[test]
    fn bound_is_enforced() {
        let r = interreduce(Q, &[p("x[1,2] x[1,2] x[1,2]")]).unwrap();
        assert!(matches!(complete(&r, 2), Err(Error::BoundExceeded { degree: 3, bound: 2 })));
    }

    #[test]
    fn membership_examples() {
        let r = complete(&anti_system(Q), 4).unwrap();
        assert_eq!(
            r.ideal_member_bounded(&p("x[2,1] x[2,1] + x[2,1] x[1,1] + x[1,1] x[2,1]")),
            Membership::Yes
        );
        assert_eq!(r.ideal_member_bounded(&NCPoly::zero(Q)), Membership::Yes);
        assert_eq!(
            r.ideal_member_bounded(&p("x[1,1]")),
            Membership::NoAtBound(p("x[1,1]"))
        );
    }

    #[test]
    fn tensor_reduction_examples() {
        let r = anti_system(Q);
        let xx = Word::from_gens([x(), x()]);
        let xy = Word::from_gens([x(), y()]);
        let yx = Word::from_gens([y(), x()]);
        let yw = Word::from_gens([y()]);
        assert!(r
            .tensor_normal_form(&TensorPoly::pure(Q.one(), vec![xx, yw]))
            .is_zero());
        let c = Q.from_i64(7);
        let unit = TensorPoly::scalar(c, 2);
        assert_eq!(r.tensor_normal_form(&unit), unit);
        let t = TensorPoly::pure(Q.one(), vec![xy, Word::one()])
            .add(&TensorPoly::pure(Q.one(), vec![yx, Word::one()]));
        assert!(r.tensor_normal_form(&t).is_zero());
    }

    fn gens() -> Vec<GenId> {
        vec![GenId::new(0, 1), GenId::new(1, 1), GenId::new(0, 2), GenId::new(1, 2)]
    }

    fn random_poly(field: Field, max_deg: usize) -> impl Strategy<Value = NCPoly> {
        let g = gens();
        proptest::collection::vec(
            (-3i64..4, proptest::collection::vec(0..g.len(), 0..=max_deg)),
            0..6,
        )
        .prop_map(move |terms| {
            let mut out = NCPoly::zero(field);
            for (c, w) in terms {
                out.add_term(Word::from_gens(w.into_iter().map(|k| g[k])), field.from_i64(c));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative_and_distributive(
            a in random_poly(Q, 2), b in random_poly(Q, 2), c in random_poly(Q, 2)
        ) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }

        #[test]
        fn parse_inverts_display(a in random_poly(Q, 3)) {
            prop_assert_eq!(NCPoly::parse(Q, &a.to_string()).unwrap(), a);
        }
    }
}
