//! Finitely presented graded-commutative rings over `Z/p^k`.
//!
//! Every relation rewrites a pure power `v^a` of a single generator into a
//! combination of monomials that involve only earlier generators, or `v`
//! itself with a smaller exponent. Leading monomials of distinct relations are
//! coprime, so the relations form a Gröbner basis for the lexicographic order
//! that ranks later generators higher, and the normal form is the unique
//! representative on the monomial basis `{ v^e : e < a_v }`. Construction
//! still runs an explicit overlap test on every pair of relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{ModScalar, PrimePower};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// First Chern classes pulled back from a base: `λ`, `η`, `κ`.
    BundleClass,
    /// Tautological classes of a fiber: `z`, `c`, `γ`, `y`.
    Tautological,
}

impl GeneratorKind {
    fn as_str(&self) -> &'static str {
        match self {
            GeneratorKind::BundleClass => "bundle",
            GeneratorKind::Tautological => "tautological",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub kind: GeneratorKind,
}

/// `generator^exponent = replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub exponent: u32,
    pub replacement: BTreeMap<Monomial, u64>,
}

/// Which reducible generator of a monomial is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    name: String,
    modulus: PrimePower,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    truncation: Option<u32>,
    index: HashMap<String, usize>,
    relation_of: Vec<Option<usize>>,
}

/// Incremental construction of a [`RingPresentation`].
pub struct PresentationBuilder {
    name: String,
    modulus: PrimePower,
    generators: Vec<Generator>,
    relations: Vec<(usize, u32, Vec<(Monomial, i64)>)>,
    truncation: Option<u32>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>, modulus: PrimePower) -> Self {
        PresentationBuilder {
            name: name.into(),
            modulus,
            generators: Vec::new(),
            relations: Vec::new(),
            truncation: None,
        }
    }

    pub fn generator(
        &mut self,
        name: impl Into<String>,
        degree: u32,
        kind: GeneratorKind,
    ) -> usize {
        self.generators.push(Generator {
            name: name.into(),
            degree,
            kind,
        });
        self.generators.len() - 1
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Adds `v^exponent = Σ c·m`, with monomials given as full exponent
    /// vectors over the generators declared so far (shorter vectors are
    /// padded with zeros).
    pub fn relation(
        &mut self,
        v: usize,
        exponent: u32,
        replacement: Vec<(Monomial, i64)>,
    ) -> &mut Self {
        self.relations.push((v, exponent, replacement));
        self
    }

    pub fn truncation(&mut self, dim: u32) -> &mut Self {
        self.truncation = Some(dim);
        self
    }

    pub fn build(self) -> Result<Arc<RingPresentation>> {
        let n = self.generators.len();
        let mut index = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.name.is_empty()
                || !g
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::InvalidParameter(format!(
                    "bad generator name `{}`",
                    g.name
                )));
            }
            if g.degree == 0 {
                return Err(Error::InvalidParameter(format!(
                    "generator `{}` has degree 0",
                    g.name
                )));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        let mut relation_of = vec![None; n];
        let mut relations = Vec::new();
        for (v, a, repl) in self.relations {
            let gname = self
                .generators
                .get(v)
                .map(|g| g.name.clone())
                .ok_or_else(|| Error::UnknownGenerator(format!("#{v}")))?;
            let bad = |reason: String| Error::InvalidRelation {
                generator: gname.clone(),
                reason,
            };
            if a < 2 {
                return Err(bad(format!("exponent {a} must be at least 2")));
            }
            if relation_of[v].is_some() {
                return Err(bad("more than one relation".into()));
            }
            let lead_deg = self.generators[v].degree * a;
            let mut replacement = BTreeMap::new();
            for (mut m, c) in repl {
                if m.len() > n {
                    return Err(bad("monomial longer than generator list".into()));
                }
                m.resize(n, 0);
                let deg: u32 = m
                    .iter()
                    .zip(&self.generators)
                    .map(|(e, g)| e * g.degree)
                    .sum();
                if deg != lead_deg {
                    return Err(bad(format!(
                        "replacement degree {deg} differs from {lead_deg}"
                    )));
                }
                if m[v + 1..].iter().any(|&e| e > 0) || m[v] >= a {
                    return Err(bad("replacement uses a later generator".into()));
                }
                let c = self.modulus.reduce_i64(c);
                let m_mod = self.modulus.modulus();
                let e = replacement.entry(m).or_insert(0u64);
                *e = (*e + c) % m_mod;
            }
            replacement.retain(|_, c| *c != 0);
            relation_of[v] = Some(relations.len());
            relations.push(Relation {
                generator: v,
                exponent: a,
                replacement,
            });
        }
        let pres = RingPresentation {
            name: self.name,
            modulus: self.modulus,
            generators: self.generators,
            relations,
            truncation: self.truncation,
            index,
            relation_of,
        };
        pres.check_confluence()?;
        Ok(Arc::new(pres))
    }
}

type Terms = BTreeMap<Monomial, u64>;

struct Reducer<'a> {
    pres: &'a RingPresentation,
    strategy: Strategy,
    cache: HashMap<Monomial, Vec<(Monomial, u64)>>,
}

impl<'a> Reducer<'a> {
    fn new(pres: &'a RingPresentation, strategy: Strategy) -> Self {
        Reducer {
            pres,
            strategy,
            cache: HashMap::new(),
        }
    }

    fn reducible(&self, m: &[u32]) -> Option<usize> {
        let hit = |i: &usize| {
            self.pres.relation_of[*i]
                .map(|r| m[*i] >= self.pres.relations[r].exponent)
                .unwrap_or(false)
        };
        match self.strategy {
            Strategy::Leftmost => (0..m.len()).find(hit),
            Strategy::Rightmost => (0..m.len()).rev().find(hit),
        }
    }

    fn reduce(&mut self, m: &Monomial) -> Vec<(Monomial, u64)> {
        if let Some(t) = self.pres.truncation {
            if self.pres.monomial_degree(m) > t {
                return Vec::new();
            }
        }
        let Some(v) = self.reducible(m) else {
            return vec![(m.clone(), 1)];
        };
        if let Some(hit) = self.cache.get(m) {
            return hit.clone();
        }
        let modulus = self.pres.modulus.modulus();
        let rel = &self.pres.relations[self.pres.relation_of[v].expect("reducible")];
        let mut acc: Terms = BTreeMap::new();
        let mut rest = m.clone();
        rest[v] -= rel.exponent;
        for (rm, rc) in &rel.replacement {
            let next: Monomial = rest.iter().zip(rm).map(|(a, b)| a + b).collect();
            for (nm, nc) in self.reduce(&next) {
                let e = acc.entry(nm).or_insert(0);
                *e = ((*e as u128 + nc as u128 * *rc as u128) % modulus as u128) as u64;
            }
        }
        let out: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.cache.insert(m.clone(), out.clone());
        out
    }

    fn reduce_terms(&mut self, raw: impl IntoIterator<Item = (Monomial, u64)>) -> Terms {
        let modulus = self.pres.modulus.modulus();
        let mut acc: Terms = BTreeMap::new();
        for (m, c) in raw {
            if c % modulus == 0 {
                continue;
            }
            for (nm, nc) in self.reduce(&m) {
                let e = acc.entry(nm).or_insert(0);
                *e = ((*e as u128 + nc as u128 * c as u128) % modulus as u128) as u64;
            }
        }
        acc.retain(|_, c| *c != 0);
        acc
    }
}

impl RingPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// The exponent bound a generator has in normal form, if it has a relation.
    pub fn exponent_bound(&self, v: usize) -> Option<u32> {
        self.relation_of[v].map(|r| self.relations[r].exponent)
    }

    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    pub fn is_normal_monomial(&self, m: &[u32]) -> bool {
        m.len() == self.generators.len()
            && (0..m.len()).all(|i| self.exponent_bound(i).is_none_or(|b| m[i] < b))
            && self
                .truncation
                .is_none_or(|t| self.monomial_degree(m) <= t)
    }

    /// The monomials `∏ v^{e_v}` with `e_v` below the bound of each
    /// generator that has a relation; generators without a relation are
    /// fixed at exponent 0. For a tower this is the free basis over the
    /// polynomial ring of the unconstrained classes.
    pub fn relation_basis(&self) -> Vec<Monomial> {
        let mut out = vec![vec![0u32; self.generators.len()]];
        for v in 0..self.generators.len() {
            if let Some(b) = self.exponent_bound(v) {
                out = out
                    .into_iter()
                    .flat_map(|m| {
                        (0..b).map(move |e| {
                            let mut m = m.clone();
                            m[v] = e;
                            m
                        })
                    })
                    .collect();
            }
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        RingElement {
            pres: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(self: &Arc<Self>, c: i64) -> RingElement {
        self.monomial_element(vec![0; self.generators.len()], c)
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        self.constant(1)
    }

    pub fn gen(self: &Arc<Self>, name: &str) -> Result<RingElement> {
        let v = self.generator_index(name)?;
        Ok(self.gen_at(v))
    }

    pub fn gen_at(self: &Arc<Self>, v: usize) -> RingElement {
        let mut m = vec![0; self.generators.len()];
        m[v] = 1;
        self.monomial_element(m, 1)
    }

    /// `c·m`, brought to normal form.
    pub fn monomial_element(self: &Arc<Self>, m: Monomial, c: i64) -> RingElement {
        let c = self.modulus.reduce_i64(c);
        self.from_raw(vec![(m, c)], Strategy::Rightmost)
    }

    fn from_raw(self: &Arc<Self>, raw: Vec<(Monomial, u64)>, strategy: Strategy) -> RingElement {
        let terms = Reducer::new(self, strategy).reduce_terms(raw);
        RingElement {
            pres: Arc::clone(self),
            terms,
        }
    }

    /// Normal form of a raw element given as `(factors, coefficient)` pairs,
    /// each factor a generator name with an exponent.
    pub fn normal_form(self: &Arc<Self>, raw: &[(Vec<(&str, u32)>, i64)]) -> Result<RingElement> {
        self.normal_form_with(raw, Strategy::Rightmost)
    }

    pub fn normal_form_with(
        self: &Arc<Self>,
        raw: &[(Vec<(&str, u32)>, i64)],
        strategy: Strategy,
    ) -> Result<RingElement> {
        let mut terms = Vec::with_capacity(raw.len());
        for (factors, c) in raw {
            let mut m = vec![0; self.generators.len()];
            for (name, e) in factors {
                m[self.generator_index(name)?] += e;
            }
            terms.push((m, self.modulus.reduce_i64(*c)));
        }
        Ok(self.from_raw(terms, strategy))
    }

    /// Parses an element written as `2*z_1_1^2*lambda_0 + z_1_2 + 1`; a
    /// leading `-` on a term negates it.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<RingElement> {
        let terms = parse_terms(self, text.trim(), 0)?;
        Ok(self.from_raw(
            terms
                .into_iter()
                .map(|(m, c)| (m, self.modulus.reduce_i64(c)))
                .collect(),
            Strategy::Rightmost,
        ))
    }

    fn check_confluence(&self) -> Result<()> {
        let n = self.generators.len();
        let ruled: Vec<&Relation> = self.relations.iter().collect();
        for (i, r) in ruled.iter().enumerate() {
            for s in ruled.iter().skip(i) {
                let mut m = vec![0u32; n];
                m[r.generator] += r.exponent;
                m[s.generator] += s.exponent;
                if r.generator == s.generator {
                    m[r.generator] = r.exponent + 1;
                }
                let left =
                    Reducer::new(self, Strategy::Leftmost).reduce_terms(vec![(m.clone(), 1)]);
                let right =
                    Reducer::new(self, Strategy::Rightmost).reduce_terms(vec![(m.clone(), 1)]);
                if left != right {
                    return Err(Error::NotConfluent {
                        name: self.name.clone(),
                        overlap: self.format_monomial(&m),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn format_terms(&self, terms: &Terms) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let zero = vec![0u32; self.generators.len()];
        terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if *m == zero {
                    c.to_string()
                } else if *c == 1 {
                    self.format_monomial(m)
                } else {
                    format!("{c}*{}", self.format_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Structured text form; [`RingPresentation::from_text`] inverts it
    /// exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("presentation {}\n", self.name));
        out.push_str(&format!(
            "modulus {} {}\n",
            self.modulus.p(),
            self.modulus.k()
        ));
        match self.truncation {
            Some(t) => out.push_str(&format!("truncation {t}\n")),
            None => out.push_str("truncation none\n"),
        }
        for g in &self.generators {
            out.push_str(&format!(
                "generator {} {} {}\n",
                g.name,
                g.degree,
                g.kind.as_str()
            ));
        }
        for r in &self.relations {
            let mut lead = vec![0; self.generators.len()];
            lead[r.generator] = r.exponent;
            out.push_str(&format!(
                "relation {} = {}\n",
                self.format_monomial(&lead),
                self.format_terms(&r.replacement)
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Arc<Self>> {
        let mut builder: Option<PresentationBuilder> = None;
        let mut name = None;
        let mut modulus = None;
        let mut truncation = None;
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let perr = |msg: &str| Error::Parse {
                line: ln,
                msg: msg.to_string(),
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').ok_or_else(|| perr("missing value"))?;
            match key {
                "presentation" => name = Some(rest.to_string()),
                "modulus" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 2 {
                        return Err(perr("modulus needs p and k"));
                    }
                    let p = v[0].parse().map_err(|_| perr("bad prime"))?;
                    let k = v[1].parse().map_err(|_| perr("bad exponent"))?;
                    modulus = Some(PrimePower::new(p, k)?);
                }
                "truncation" => {
                    truncation = if rest == "none" {
                        None
                    } else {
                        Some(rest.parse::<u32>().map_err(|_| perr("bad truncation"))?)
                    }
                }
                "generator" => {
                    let b = match builder.as_mut() {
                        Some(b) => b,
                        None => {
                            let n = name
                                .clone()
                                .ok_or_else(|| perr("presentation line missing"))?;
                            let m = modulus.ok_or_else(|| perr("modulus line missing"))?;
                            builder.insert(PresentationBuilder::new(n, m))
                        }
                    };
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 3 {
                        return Err(perr("generator needs name, degree, kind"));
                    }
                    let degree = v[1].parse().map_err(|_| perr("bad degree"))?;
                    let kind = match v[2] {
                        "bundle" => GeneratorKind::BundleClass,
                        "tautological" => GeneratorKind::Tautological,
                        _ => return Err(perr("unknown generator kind")),
                    };
                    b.generator(v[0], degree, kind);
                }
                "relation" => {
                    let b = builder
                        .as_mut()
                        .ok_or_else(|| perr("relation before generators"))?;
                    let (lhs, rhs) = rest.split_once(" = ").ok_or_else(|| perr("missing `=`"))?;
                    let names: HashMap<String, usize> = b
                        .generators
                        .iter()
                        .enumerate()
                        .map(|(i, g)| (g.name.clone(), i))
                        .collect();
                    let lookup = |s: &str| names.get(s).copied();
                    let n = b.generators.len();
                    let (gname, e) = match lhs.split_once('^') {
                        Some((g, e)) => (g, e.parse::<u32>().map_err(|_| perr("bad exponent"))?),
                        None => (lhs, 1),
                    };
                    let v = lookup(gname).ok_or_else(|| Error::UnknownGenerator(gname.into()))?;
                    let repl = parse_terms_with(&lookup, n, rhs, ln)?;
                    b.relation(v, e, repl);
                }
                _ => return Err(perr("unknown key")),
            }
        }
        let mut b = match builder {
            Some(b) => b,
            None => PresentationBuilder::new(
                name.ok_or(Error::Parse {
                    line: 0,
                    msg: "empty presentation".into(),
                })?,
                modulus.ok_or(Error::Parse {
                    line: 0,
                    msg: "modulus line missing".into(),
                })?,
            ),
        };
        b.truncation = truncation;
        b.build()
    }
}

fn parse_terms(pres: &RingPresentation, text: &str, line: usize) -> Result<Vec<(Monomial, i64)>> {
    let lookup = |s: &str| pres.index.get(s).copied();
    parse_terms_with(&lookup, pres.generators.len(), text, line)
}

fn parse_terms_with(
    lookup: &dyn Fn(&str) -> Option<usize>,
    n: usize,
    text: &str,
    line: usize,
) -> Result<Vec<(Monomial, i64)>> {
    let perr = |msg: String| Error::Parse { line, msg };
    let text = text.trim();
    if text == "0" {
        return Ok(Vec::new());
    }
    let normalized = text.replace(" - ", " + -");
    let mut out = Vec::new();
    for term in normalized.split(" + ") {
        let mut term = term.trim();
        let mut sign = 1i64;
        if let Some(t) = term.strip_prefix('-') {
            sign = -1;
            term = t.trim();
        }
        let mut coeff = 1i64;
        let mut m = vec![0u32; n];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(perr(format!("empty factor in `{term}`")));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                coeff *= factor
                    .parse::<i64>()
                    .map_err(|_| perr(format!("bad coefficient `{factor}`")))?;
                continue;
            }
            let (g, e) = match factor.split_once('^') {
                Some((g, e)) => (
                    g,
                    e.parse::<u32>()
                        .map_err(|_| perr(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let v = lookup(g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            m[v] += e;
        }
        out.push((m, sign * coeff));
    }
    Ok(out)
}

/// An element in normal form.
#[derive(Clone)]
pub struct RingElement {
    pres: Arc<RingPresentation>,
    terms: Terms,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres)
            && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pres.format_terms(&self.terms))
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.pres.name, self)
    }
}

impl RingElement {
    pub fn presentation(&self) -> &Arc<RingPresentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, ModScalar)> + '_ {
        let m = self.pres.modulus;
        self.terms.iter().map(move |(k, &c)| (k, m.elem(c as i64)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The set of degrees of the monomials present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .map(|m| self.pres.monomial_degree(m))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres {
            Ok(())
        } else {
            Err(Error::PresentationMismatch(
                self.pres.name.clone(),
                other.pres.name.clone(),
            ))
        }
    }

    fn with_terms(&self, terms: Terms) -> RingElement {
        RingElement {
            pres: Arc::clone(&self.pres),
            terms,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let m = self.pres.modulus.modulus();
        let mut terms = self.terms.clone();
        for (k, &c) in &other.terms {
            let e = terms.entry(k.clone()).or_insert(0);
            *e = (*e + c) % m;
        }
        terms.retain(|_, c| *c != 0);
        Ok(self.with_terms(terms))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let m = self.pres.modulus.modulus();
        self.with_terms(
            self.terms
                .iter()
                .map(|(k, &c)| (k.clone(), (m - c) % m))
                .collect(),
        )
    }

    pub fn scale(&self, c: i64) -> Self {
        let modulus = self.pres.modulus;
        let c = modulus.reduce_i64(c) as u128;
        let m = modulus.modulus() as u128;
        let mut terms: Terms = self
            .terms
            .iter()
            .map(|(k, &x)| (k.clone(), ((x as u128 * c) % m) as u64))
            .collect();
        terms.retain(|_, c| *c != 0);
        self.with_terms(terms)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.mul_with(other, Strategy::Rightmost))
    }

    pub fn mul_with(&self, other: &Self, strategy: Strategy) -> Self {
        let m = self.pres.modulus.modulus() as u128;
        let mut raw: HashMap<Monomial, u64> = HashMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let k: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let e = raw.entry(k).or_insert(0);
                *e = ((*e as u128 + ca as u128 * cb as u128) % m) as u64;
            }
        }
        let mut reducer = Reducer::new(&self.pres, strategy);
        let mut raw: Vec<(Monomial, u64)> = raw.into_iter().collect();
        raw.sort();
        self.with_terms(reducer.reduce_terms(raw))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = self.pres.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_with(&base, Strategy::Rightmost);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_with(&base, Strategy::Rightmost);
            }
        }
        acc
    }

    /// Re-reduces the stored terms with the given strategy. On a confluent
    /// presentation this is the identity.
    pub fn renormalize(&self, strategy: Strategy) -> Self {
        let raw: Vec<(Monomial, u64)> = self.terms.iter().map(|(k, &c)| (k.clone(), c)).collect();
        self.with_terms(Reducer::new(&self.pres, strategy).reduce_terms(raw))
    }

    pub fn coefficient_of(&self, m: &[u32]) -> Result<ModScalar> {
        if !self.pres.is_normal_monomial(m) {
            return Err(Error::NotNormalForm(format!("{m:?}")));
        }
        let c = self.terms.get(m).copied().unwrap_or(0);
        Ok(self.pres.modulus.elem(c as i64))
    }

    /// Coefficient of a monomial written as `gen^e*gen…`.
    pub fn coefficient_of_named(&self, m: &str) -> Result<ModScalar> {
        let mono = parse_terms(&self.pres, m, 0)?;
        match mono.as_slice() {
            [(m, 1)] => self.coefficient_of(m),
            _ => Err(Error::NotNormalForm(m.to_string())),
        }
    }

    /// The pushforward along a `P^1`-bundle whose tautological class is
    /// `taut`: writing `self = a + b·taut` returns `-b`.
    pub fn pushforward_step(&self, taut: usize) -> Result<RingElement> {
        let g = self
            .pres
            .generators
            .get(taut)
            .ok_or_else(|| Error::UnknownGenerator(format!("#{taut}")))?;
        if g.kind != GeneratorKind::Tautological || self.pres.exponent_bound(taut) != Some(2) {
            return Err(Error::NotTautological(g.name.clone()));
        }
        let m = self.pres.modulus.modulus();
        let mut terms = Terms::new();
        for (k, &c) in &self.terms {
            if k[taut] == 1 {
                let mut k = k.clone();
                k[taut] = 0;
                terms.insert(k, (m - c) % m);
            }
        }
        Ok(self.with_terms(terms))
    }

    /// Iterated pushforward along `steps`, applied last entry first, down to
    /// a point. The element must be homogeneous of degree `steps.len()`.
    pub fn degree(&self, steps: &[usize]) -> Result<ModScalar> {
        let zero_base = |m: &Monomial| -> Option<ModScalar> {
            if m.iter().all(|&e| e == 0) {
                Some(self.pres.modulus.elem(1))
            } else {
                None
            }
        };
        self.degree_over(steps, 0, &zero_base)
    }

    /// Iterated pushforward along `steps` followed by a degree functional on
    /// the remaining base classes of dimension `base_dim`.
    pub fn degree_over(
        &self,
        steps: &[usize],
        base_dim: u32,
        base_degree: &dyn Fn(&Monomial) -> Option<ModScalar>,
    ) -> Result<ModScalar> {
        let top: u32 = steps
            .iter()
            .map(|&s| self.pres.generators[s].degree)
            .sum::<u32>()
            + base_dim;
        let degs = self.degrees();
        if degs.iter().any(|&d| d != top) {
            return Err(Error::NotTopDegree {
                expected: top,
                found: degs.into_iter().collect(),
            });
        }
        let mut e = self.clone();
        for &s in steps.iter().rev() {
            e = e.pushforward_step(s)?;
        }
        let modulus = self.pres.modulus;
        let mut acc = modulus.elem(0);
        for (m, &c) in &e.terms {
            let d = base_degree(m).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "no base degree for {}",
                    self.pres.format_monomial(m)
                ))
            })?;
            acc = acc + d * modulus.elem(c as i64);
        }
        Ok(acc)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("presentation mismatch")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs).expect("presentation mismatch")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("presentation mismatch")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimePower {
        PrimePower::prime(3).unwrap()
    }

    /// `F_3[a, b]/(a^2, b^2 - ab)`.
    fn small() -> Arc<RingPresentation> {
        let mut b = PresentationBuilder::new("small", f3());
        let a = b.generator("a", 1, GeneratorKind::Tautological);
        let bb = b.generator("b", 1, GeneratorKind::Tautological);
        b.relation(a, 2, vec![]);
        b.relation(bb, 2, vec![(vec![1, 1], 1)]);
        b.build().unwrap()
    }

    #[test]
    fn rewrites_and_identity() {
        let r = small();
        let b = r.gen("b").unwrap();
        assert!(b.pow(2) == r.parse_element("a*b").unwrap());
        assert!(b.pow(3).is_zero());
        assert_eq!(&r.one() * &b, b);
    }

    #[test]
    fn relation_validation() {
        let mut b = PresentationBuilder::new("bad", f3());
        let x = b.generator("x", 1, GeneratorKind::Tautological);
        let _y = b.generator("y", 1, GeneratorKind::Tautological);
        b.relation(x, 2, vec![(vec![1, 1], 1)]);
        assert!(matches!(b.build(), Err(Error::InvalidRelation { .. })));

        let mut b = PresentationBuilder::new("bad", f3());
        let x = b.generator("x", 1, GeneratorKind::Tautological);
        b.relation(x, 2, vec![(vec![1], 1)]);
        assert!(matches!(b.build(), Err(Error::InvalidRelation { .. })));
    }

    #[test]
    fn unknown_generator_is_structural() {
        let r = small();
        assert!(matches!(
            r.normal_form(&[(vec![("q", 1)], 1)]),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn coefficient_of_rejects_non_normal() {
        let r = small();
        let e = r.gen("a").unwrap();
        assert!(e.coefficient_of(&[2, 0]).is_err());
        assert_eq!(e.coefficient_of(&[1, 0]).unwrap().residue(), 1);
        assert!(r.zero().coefficient_of(&[0, 1]).unwrap().residue() == 0);
    }

    #[test]
    fn pushforward_basics() {
        let r = small();
        let a = r.generator_index("a").unwrap();
        assert_eq!(
            r.gen("a").unwrap().pushforward_step(a).unwrap(),
            r.constant(-1)
        );
        assert!(r.one().pushforward_step(a).unwrap().is_zero());
        assert!(r.one().degree(&[a]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = small();
        let text = r.to_text();
        let back = RingPresentation::from_text(&text).unwrap();
        assert_eq!(*back, *r);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn element_display_parses_back() {
        let r = small();
        let e = r.parse_element("2*a + b + 1").unwrap().pow(2);
        assert_eq!(r.parse_element(&e.to_string()).unwrap(), e);
    }
}
