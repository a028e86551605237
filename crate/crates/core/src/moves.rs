//! Formal mod-`p` Milnor symbols over a free abelian group of atoms, the
//! moves of type `C_m`, and symbol invariance as membership in the span of
//! norm relators.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{guarded, CheckReport};
use crate::scalars::{check_odd_prime, checked_pow};

pub type AtomId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomKind {
    /// The unit `a_i`.
    Base(usize),
    /// The value of `Ψ_{level−1}` created by the `step`-th move of type
    /// `C_level`.
    Norm { level: usize, step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: AtomId,
    pub kind: AtomKind,
    /// Entries `g_1, …, g_{level−1}` with `{g_1, …, g_{level−1}, Ψ} = 0`.
    pub kill_list: Vec<GroupElement>,
}

impl Atom {
    pub fn name(&self) -> String {
        match self.kind {
            AtomKind::Base(i) => format!("a{i}"),
            AtomKind::Norm { level, step } => format!("Psi[{level}.{step}]"),
        }
    }
}

/// An element of the multiplicative group written additively.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupElement(BTreeMap<AtomId, i64>);

impl GroupElement {
    pub fn atom(id: AtomId) -> Self {
        GroupElement(BTreeMap::from([(id, 1)]))
    }

    pub fn terms(&self) -> impl Iterator<Item = (AtomId, i64)> + '_ {
        self.0.iter().map(|(&a, &c)| (a, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&a, &c) in &other.0 {
            let e = m.entry(a).or_insert(0);
            *e += c;
            if *e == 0 {
                m.remove(&a);
            }
        }
        GroupElement(m)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return GroupElement::default();
        }
        GroupElement(self.0.iter().map(|(&a, &c)| (a, c * k)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn display(&self, registry: &[Atom]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(&a, &c)| match c {
                1 => registry[a].name(),
                -1 => format!("-{}", registry[a].name()),
                c => format!("{c}*{}", registry[a].name()),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Sorts `atoms` in place; returns the sign of the permutation, or `None`
/// if an atom repeats.
pub fn sort_with_sign(atoms: &mut [AtomId]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..atoms.len() {
        let mut j = i;
        while j > 0 && atoms[j - 1] > atoms[j] {
            atoms.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if atoms.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// A sparse `F_p`-combination of pure symbols with sorted, distinct atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSum {
    pub p: u64,
    pub arity: usize,
    pub terms: BTreeMap<Vec<AtomId>, u64>,
}

impl SymbolSum {
    pub fn zero(p: u64, arity: usize) -> Self {
        SymbolSum {
            p,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, atoms: Vec<AtomId>, c: i64) {
        let p = self.p as i64;
        let c = c.rem_euclid(p) as u64;
        if c == 0 {
            return;
        }
        let e = self.terms.entry(atoms.clone()).or_insert(0);
        *e = (*e + c) % self.p;
        if *e == 0 {
            self.terms.remove(&atoms);
        }
    }

    pub fn add_scaled(&mut self, other: &SymbolSum, k: u64) {
        for (s, &c) in &other.terms {
            self.add_term(s.clone(), (c * k % self.p) as i64);
        }
    }

    pub fn sub(&self, other: &SymbolSum) -> SymbolSum {
        let mut out = self.clone();
        out.add_scaled(other, self.p - 1);
        out
    }

    pub fn display(&self, registry: &[Atom]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, c)| {
                let names: Vec<String> = s.iter().map(|&a| registry[a].name()).collect();
                format!("{c}{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Multilinear expansion of the symbol `{g_1, …, g_n}` mod `p`.
pub fn expand(p: u64, tuple: &[GroupElement]) -> Result<SymbolSum> {
    if tuple.len() < 2 {
        return Err(Error::InvalidParameter(
            "symbols need arity at least 2".into(),
        ));
    }
    let mut out = SymbolSum::zero(p, tuple.len());
    let mut partial: Vec<(Vec<AtomId>, i64)> = vec![(Vec::new(), 1)];
    for g in tuple {
        let mut next = Vec::new();
        for (atoms, c) in &partial {
            for (a, k) in g.terms() {
                let k = k.rem_euclid(p as i64);
                if k == 0 || atoms.contains(&a) {
                    continue;
                }
                let mut v = atoms.clone();
                v.push(a);
                next.push((v, c * k % p as i64));
            }
        }
        partial = next;
    }
    for (mut atoms, c) in partial {
        if let Some(sign) = sort_with_sign(&mut atoms) {
            out.add_term(atoms, sign * c);
        }
    }
    Ok(out)
}

/// Current tuple, atom registry and fresh-variable count of a chain.
#[derive(Debug, Clone)]
pub struct MoveState {
    pub p: u64,
    pub tuple: Vec<GroupElement>,
    pub registry: Vec<Atom>,
    pub variables: u64,
    pub trace: Vec<String>,
}

impl MoveState {
    /// `(a_1, …, a_n)` with no moves applied.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        check_odd_prime(p)?;
        if n < 2 {
            return Err(Error::InvalidParameter("arity must be at least 2".into()));
        }
        let registry: Vec<Atom> = (0..n)
            .map(|i| Atom {
                id: i,
                kind: AtomKind::Base(i + 1),
                kill_list: Vec::new(),
            })
            .collect();
        let tuple = (0..n).map(GroupElement::atom).collect();
        let mut s = MoveState {
            p,
            tuple,
            registry,
            variables: 0,
            trace: Vec::new(),
        };
        s.trace.push(format!("start {}", s.tuple_string()));
        Ok(s)
    }

    pub fn arity(&self) -> usize {
        self.tuple.len()
    }

    pub fn tuple_string(&self) -> String {
        let parts: Vec<String> = self
            .tuple
            .iter()
            .map(|g| g.display(&self.registry))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// A move of type `C_m` on the first `m` entries:
/// `(g_1, …, g_m) ↦ (g_1, …, g_{m−2}, g_m + Ψ, −g_{m−1})` with a fresh `Ψ`
/// killed by `(g_1, …, g_{m−1})`.
pub fn apply_cn_move(state: &MoveState, m: usize) -> Result<MoveState> {
    if m < 2 || m > state.arity() {
        return Err(Error::InvalidParameter(format!(
            "move C_{m} on a tuple of arity {}",
            state.arity()
        )));
    }
    let mut s = state.clone();
    let step = s
        .registry
        .iter()
        .filter(|a| matches!(a.kind, AtomKind::Norm { level, .. } if level == m))
        .count()
        + 1;
    let id = s.registry.len();
    let kill_list = s.tuple[..m - 1].to_vec();
    s.registry.push(Atom {
        id,
        kind: AtomKind::Norm { level: m, step },
        kill_list: kill_list.clone(),
    });
    let psi = GroupElement::atom(id);
    let new_last = s.tuple[m - 2].neg();
    s.tuple[m - 2] = s.tuple[m - 1].add(&psi);
    s.tuple[m - 1] = new_last;
    let fresh = checked_pow(s.p, m as u32 - 1)? - checked_pow(s.p, m as u32 - 2)?;
    s.variables += fresh;
    let kills: Vec<String> = kill_list.iter().map(|g| g.display(&s.registry)).collect();
    s.trace.push(format!(
        "C_{m}: new {} kills ({}), +{fresh} variables -> {}",
        s.registry[id].name(),
        kills.join(", "),
        s.tuple_string()
    ));
    Ok(s)
}

/// Norm relators `{g_1, …, g_r, Ψ, b_1, …, b_k}` for every norm atom with
/// kill list `(g_1, …, g_r)` and every set of distinct atoms `b_i`; the
/// kill list and `Ψ` come first, all other placements differ by a sign.
pub fn relator_basis(p: u64, registry: &[Atom], arity: usize) -> Result<Vec<(String, SymbolSum)>> {
    let mut jobs: Vec<(usize, Vec<AtomId>)> = Vec::new();
    for atom in registry {
        if !matches!(atom.kind, AtomKind::Norm { .. }) {
            continue;
        }
        let free = arity.checked_sub(atom.kill_list.len() + 1).ok_or_else(|| {
            Error::InvalidParameter(format!("{} has too many kill entries", atom.name()))
        })?;
        for combo in combinations(registry.len(), free) {
            jobs.push((atom.id, combo));
            if jobs.len() > 1_000_000 {
                return Err(Error::Capacity {
                    what: "relator count".into(),
                    needed: jobs.len() as u128,
                    limit: 1_000_000,
                });
            }
        }
    }
    jobs.par_iter()
        .map(|(id, combo)| {
            let atom = &registry[*id];
            let mut entries = atom.kill_list.clone();
            entries.push(GroupElement::atom(*id));
            entries.extend(combo.iter().map(|&b| GroupElement::atom(b)));
            let names: Vec<String> = entries.iter().map(|g| g.display(registry)).collect();
            Ok((format!("{{{}}}", names.join(", ")), expand(p, &entries)?))
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// A combination of relators: `(relator index, coefficient)`.
pub type Certificate = Vec<(usize, u64)>;

/// Solves `target = Σ c_i relators[i]` over `F_p`, if possible.
pub fn span_membership(p: u64, relators: &[SymbolSum], target: &SymbolSum) -> Option<Certificate> {
    // Echelon rows keyed by pivot (largest symbol), each with its
    // combination of original relators.
    type Row = (SymbolSum, BTreeMap<usize, u64>);
    let mut basis: BTreeMap<Vec<AtomId>, Row> = BTreeMap::new();
    let reduce =
        |mut v: SymbolSum, mut comb: BTreeMap<usize, u64>, basis: &BTreeMap<Vec<AtomId>, Row>| {
            while let Some((lead, c)) = v.terms.iter().next_back().map(|(l, &c)| (l.clone(), c)) {
                let Some((row, rc)) = basis.get(&lead) else {
                    break;
                };
                let k = p - c; // row is monic at its pivot
                v.add_scaled(row, k);
                for (&i, &x) in rc {
                    let e = comb.entry(i).or_insert(0);
                    *e = (*e + x * k) % p;
                }
            }
            comb.retain(|_, x| *x != 0);
            (v, comb)
        };
    for (i, r) in relators.iter().enumerate() {
        let (v, comb) = reduce(r.clone(), BTreeMap::from([(i, 1)]), &basis);
        if let Some((lead, c)) = v.terms.iter().next_back().map(|(l, &c)| (l.clone(), c)) {
            let inv = inv_mod(c, p);
            let mut nv = SymbolSum::zero(p, v.arity);
            nv.add_scaled(&v, inv);
            let comb = comb.into_iter().map(|(i, x)| (i, x * inv % p)).collect();
            basis.insert(lead, (nv, comb));
        }
    }
    let (rest, comb) = reduce(target.clone(), BTreeMap::new(), &basis);
    if !rest.is_zero() {
        return None;
    }
    // target − Σ comb = 0, so target = Σ (−comb).
    Some(
        comb.into_iter()
            .map(|(i, x)| (i, (p - x) % p))
            .filter(|(_, x)| *x != 0)
            .collect(),
    )
}

/// `{before} − {after}` lies in the span of the norm relators.
pub fn verify_symbol_invariance(
    p: u64,
    before: &[GroupElement],
    after: &[GroupElement],
    registry: &[Atom],
) -> CheckReport {
    let base = CheckReport::new("symbol_invariance", "eq:moves; eq:pmoves; Lemma 3.2")
        .param("p", p)
        .param("n", before.len());
    guarded(base, |rep| {
        if before.len() != after.len() {
            return Err(Error::DimensionMismatch {
                expected: before.len(),
                got: after.len(),
            });
        }
        let diff = expand(p, before)?.sub(&expand(p, after)?);
        let relators = relator_basis(p, registry, before.len())?;
        let sums: Vec<SymbolSum> = relators.iter().map(|(_, s)| s.clone()).collect();
        match span_membership(p, &sums, &diff) {
            Some(cert) => {
                let mut check = SymbolSum::zero(p, diff.arity);
                for &(i, c) in &cert {
                    check.add_scaled(&sums[i], c);
                }
                let used: Vec<String> = cert
                    .iter()
                    .map(|&(i, c)| format!("{c}*{}", relators[i].0))
                    .collect();
                Ok(rep
                    .computed(format!(
                        "difference in relator span: {} relators used of {}{}",
                        cert.len(),
                        relators.len(),
                        if used.is_empty() {
                            String::new()
                        } else {
                            format!(": {}", used.join(" + "))
                        }
                    ))
                    .pass_if(check == diff))
            }
            None => Ok(rep
                .computed(format!(
                    "difference {} is not in the relator span",
                    diff.display(registry)
                ))
                .pass_if(false)),
        }
    })
}

/// `p` moves of type `C_m` for `m = n, n−1, …, 2`, checking invariance
/// after every move, at every level boundary and end to end.
pub fn run_full_chain(p: u64, n: usize) -> (MoveState, CheckReport) {
    let base = CheckReport::new("full_chain", "eq:moves; eq:pmoves; Def 3.3")
        .param("p", p)
        .param("n", n);
    let mut final_state = None;
    let rep = guarded(base, |rep| {
        check_odd_prime(p)?;
        if p > 5 || n > 4 {
            return Err(Error::Capacity {
                what: format!("move chain for p={p}, n={n}"),
                needed: checked_pow(p, n as u32)? as u128,
                limit: 625,
            });
        }
        let start = MoveState::new(p, n)?;
        let mut state = start.clone();
        let mut checks = 0;
        let mut failures = Vec::new();
        for m in (2..=n).rev() {
            let level_start = state.clone();
            for _ in 0..p {
                let next = apply_cn_move(&state, m)?;
                let r = verify_symbol_invariance(p, &state.tuple, &next.tuple, &next.registry);
                checks += 1;
                if r.status != crate::report::Status::Pass {
                    failures.push(format!("C_{m}: {}", r.computed));
                }
                state = next;
            }
            let r = verify_symbol_invariance(p, &level_start.tuple, &state.tuple, &state.registry);
            checks += 1;
            if r.status != crate::report::Status::Pass {
                failures.push(format!("level {m}: {}", r.computed));
            }
        }
        let r = verify_symbol_invariance(p, &start.tuple, &state.tuple, &state.registry);
        checks += 1;
        if r.status != crate::report::Status::Pass {
            failures.push(format!("end to end: {}", r.computed));
        }
        let expected = checked_pow(p, n as u32)? - p;
        let ok = failures.is_empty() && state.variables == expected;
        let computed = format!(
            "{checks} invariance checks, {} failed; {} fresh variables; final {}",
            failures.len(),
            state.variables,
            state.tuple_string()
        );
        final_state = Some(state);
        Ok(rep
            .computed(computed)
            .claim(format!(
                "{{a_1..a_n}} preserved; p^n - p = {expected} variables"
            ))
            .pass_if(ok))
    });
    let state = final_state.unwrap_or_else(|| MoveState {
        p,
        tuple: Vec::new(),
        registry: Vec::new(),
        variables: 0,
        trace: Vec::new(),
    });
    (state, rep)
}

impl fmt::Display for MoveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.trace {
            writeln!(f, "{line}")?;
        }
        for atom in &self.registry {
            let kills: Vec<String> = atom
                .kill_list
                .iter()
                .map(|g| g.display(&self.registry))
                .collect();
            writeln!(f, "atom {} kill ({})", atom.name(), kills.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn g(id: usize) -> GroupElement {
        GroupElement::atom(id)
    }

    #[test]
    fn expansion_examples() {
        let s = expand(3, &[g(0), g(1)]).unwrap();
        assert_eq!(s.terms.len(), 1);
        let s = expand(3, &[g(0), g(1).add(&g(2))]).unwrap();
        assert_eq!(s.terms.len(), 2);
        assert!(expand(3, &[g(0), g(1).scale(3)]).unwrap().is_zero());
        assert!(expand(3, &[g(0), g(0)]).unwrap().is_zero());
        let ab = expand(3, &[g(0), g(1)]).unwrap();
        let ba = expand(3, &[g(1), g(0)]).unwrap();
        let mut sum = ab.clone();
        sum.add_scaled(&ba, 1);
        assert!(sum.is_zero());
        assert!(expand(3, &[g(0)]).is_err());
    }

    #[test]
    fn first_moves_trace() {
        let s0 = MoveState::new(3, 2).unwrap();
        let s1 = apply_cn_move(&s0, 2).unwrap();
        assert_eq!(s1.tuple, vec![g(1).add(&g(2)), g(0).neg()]);
        assert_eq!(s1.registry[2].kill_list, vec![g(0)]);
        assert_eq!(s1.variables, 2);
        let s2 = apply_cn_move(&s1, 2).unwrap();
        assert_eq!(s2.tuple, vec![g(0).neg().add(&g(3)), g(1).add(&g(2)).neg()]);
        assert_eq!(s2.registry[3].kill_list, vec![g(1).add(&g(2))]);
        let r = verify_symbol_invariance(3, &s0.tuple, &s1.tuple, &s1.registry);
        assert_eq!(r.status, Status::Pass, "{}", r.computed);
        let r = verify_symbol_invariance(3, &s0.tuple, &s0.tuple, &s0.registry);
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn non_invariant_change_is_rejected() {
        let s1 = apply_cn_move(&MoveState::new(3, 2).unwrap(), 2).unwrap();
        let r = verify_symbol_invariance(3, &[g(0), g(1)], &[g(0), g(2)], &s1.registry);
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn sort_sign_is_consistent() {
        let mut v = vec![3, 1, 2];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut w = vec![2, 1, 3];
        assert_eq!(sort_with_sign(&mut w), Some(-1));
        assert_eq!(sort_with_sign(&mut [1, 2, 1]), None);
    }
}
