//! Sparse multivariate polynomials over any [`Coefficient`] ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::Coefficient;

/// An exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// A polynomial in a fixed number of variables. The `zero` field carries the
/// coefficient ring's context so that constants can be produced on demand.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Coefficient> {
    nvars: usize,
    zero: C,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn zero(nvars: usize, ring: &C) -> Self {
        Poly {
            nvars,
            zero: ring.zero_like(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars, &c);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize, ring: &C) -> Self {
        assert!(i < nvars, "variable {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, ring);
        p.add_term(e, ring.one_like());
        p
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let mut p = Self::zero(exps.len(), &c);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> &C {
        &self.zero
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> C {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn add_term(&mut self, exps: Exponents, c: C) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn pow(&self, e: u64) -> Self {
        let one = Self::constant(self.nvars, self.zero.one_like());
        let mut acc = one;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at a point of the coefficient ring.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = self.zero.clone();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.pow_u64(k as u64);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes a polynomial for every variable.
    pub fn compose(&self, images: &[Poly<C>]) -> Poly<C> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(target, &self.zero);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &img.pow(k as u64);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Applies a ring map to every coefficient.
    pub fn map_coefficients<D: Coefficient>(&self, ring: &D, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars, ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        let mut out = Poly::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars, &self.zero);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coefficient> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: Coefficient> Coefficient for Poly<C> {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars, &self.zero)
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.nvars, self.zero.one_like())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Poly::constant(self.nvars, self.zero.from_int_like(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn binomial_square() {
        let x = Poly::var(2, 0, &z(0));
        let y = Poly::var(2, 1, &z(0));
        let s = (&x + &y).pow(2);
        assert_eq!(s.coefficient(&[1, 1]), z(2));
        assert_eq!(s.coefficient(&[2, 0]), z(1));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn eval_and_compose_agree() {
        let x = Poly::var(2, 0, &z(0));
        let y = Poly::var(2, 1, &z(0));
        let f = &(&x * &x) - &(&y * &Poly::constant(2, z(3)));
        let g = f.compose(&[&x + &y, &x * &y]);
        let pt = [z(2), z(-5)];
        let inner = [z(-3), z(-10)];
        assert_eq!(g.eval(&pt), f.eval(&inner));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let x = Poly::var(1, 0, &z(0));
        let d = &x - &x;
        assert!(d.is_empty());
        assert_eq!(d.to_string(), "0");
    }
}
