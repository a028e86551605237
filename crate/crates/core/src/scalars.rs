//! Exact coefficient arithmetic.
//!
//! Three families of scalars back every other module:
//!
//! * [`ModScalar`]: residues modulo `p` or `p^2` for an odd prime `p`;
//! * [`FqElem`]: elements of a finite field `F_q`, `q <= 2^20`, built on the
//!   lexicographically first monic irreducible polynomial of the right degree;
//! * [`Rational`]: arbitrary precision rationals.
//!
//! The [`Coefficient`] trait is the common ring interface. Types that carry a
//! runtime context (a modulus, a field) cannot implement `num_traits::Zero`,
//! so constants are produced from an existing value with `zero_like` and
//! `one_like`.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rationals, always kept in lowest terms.
pub type Rational = BigRational;

/// A commutative ring of exact scalars.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// The image of the integer `n` in the ring of `self`.
    fn from_int_like(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A field of exact scalars in which `p`-th powers are decidable.
pub trait FieldScalar: Coefficient {
    fn inverse(&self) -> Option<Self>;

    /// True iff `self = y^p` for some `y` in the same field. Zero counts as a
    /// `p`-th power.
    fn is_pth_power(&self, p: u64) -> bool;
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `base^exp` for small integers, with overflow reported as a capacity error.
pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or_else(|| Error::Capacity {
        what: format!("{base}^{exp}"),
        needed: u128::MAX,
        limit: u64::MAX as u128,
    })
}

// ---------------------------------------------------------------------------
// Residues modulo p^k
// ---------------------------------------------------------------------------

/// The modulus `p^k` with `p` an odd prime and `k` in `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    k: u32,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if !(1..=2).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "exponent {k} must be 1 or 2"
            )));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidParameter(format!("prime {p} too large")));
        }
        Ok(PrimePower { p, k })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus() as i64) as u64
    }

    pub fn elem(&self, n: i64) -> ModScalar {
        ModScalar {
            residue: self.reduce_i64(n),
            modulus: *self,
        }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// A residue modulo `p^k`, always reduced into `[0, p^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModScalar {
    residue: u64,
    modulus: PrimePower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModOp {
    Add,
    Mul,
    Neg,
    /// Raise the first operand to the power given by the second operand's
    /// residue.
    Pow,
}

impl ModScalar {
    pub fn new(residue: i64, modulus: PrimePower) -> Self {
        modulus.elem(residue)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    /// The residue in `(-m/2, m/2]`.
    pub fn signed_residue(&self) -> i64 {
        let m = self.modulus.modulus() as i64;
        let r = self.residue as i64;
        if r > m / 2 {
            r - m
        } else {
            r
        }
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.to_string(),
                right: other.modulus.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let m = self.modulus.modulus();
        Ok(ModScalar {
            residue: (self.residue + other.residue) % m,
            modulus: self.modulus,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let m = self.modulus.modulus() as u128;
        Ok(ModScalar {
            residue: ((self.residue as u128 * other.residue as u128) % m) as u64,
            modulus: self.modulus,
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_u64(e)
    }

    /// A unit modulo `p^k` is anything prime to `p`.
    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.modulus.p())
    }

    pub fn inverse_unit(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let m = self.modulus.modulus() as i64;
        let ext = (self.residue as i64).extended_gcd(&m);
        Some(self.modulus.elem(ext.x))
    }
}

/// Checked arithmetic on residues; the only failure is a modulus mismatch.
pub fn mod_arith(a: &ModScalar, b: &ModScalar, op: ModOp) -> Result<ModScalar> {
    match op {
        ModOp::Add => a.try_add(b),
        ModOp::Mul => a.try_mul(b),
        ModOp::Neg => {
            a.same_modulus(b)?;
            Ok(-*a)
        }
        ModOp::Pow => {
            a.same_modulus(b)?;
            Ok(a.pow(b.residue))
        }
    }
}

impl fmt::Display for ModScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

// Operator forms panic on mismatched moduli; use `mod_arith` for the checked path.
impl Add for ModScalar {
    type Output = ModScalar;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("modulus mismatch")
    }
}

impl Sub for ModScalar {
    type Output = ModScalar;
    fn sub(self, rhs: Self) -> Self {
        self.try_add(&-rhs).expect("modulus mismatch")
    }
}

impl Mul for ModScalar {
    type Output = ModScalar;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("modulus mismatch")
    }
}

impl Neg for ModScalar {
    type Output = ModScalar;
    fn neg(self) -> Self {
        let m = self.modulus.modulus();
        ModScalar {
            residue: (m - self.residue) % m,
            modulus: self.modulus,
        }
    }
}

impl Coefficient for ModScalar {
    fn zero_like(&self) -> Self {
        self.modulus.elem(0)
    }
    fn one_like(&self) -> Self {
        self.modulus.elem(1)
    }
    fn is_zero(&self) -> bool {
        self.residue == 0
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.modulus.elem(n)
    }
}

impl FieldScalar for ModScalar {
    fn inverse(&self) -> Option<Self> {
        if self.modulus.k() != 1 {
            return None;
        }
        self.inverse_unit()
    }

    fn is_pth_power(&self, p: u64) -> bool {
        let q = self.modulus.modulus();
        if self.residue == 0 {
            return true;
        }
        let g = p.gcd(&(q - 1));
        self.pow((q - 1) / g).is_one()
    }
}

// ---------------------------------------------------------------------------
// Integers and rationals
// ---------------------------------------------------------------------------

impl Coefficient for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

fn exact_root(n: &BigInt, p: u64) -> Option<BigInt> {
    if n.is_negative() {
        if p.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, p).map(|r| -r);
    }
    let e = u32::try_from(p).ok()?;
    let r = n.nth_root(e);
    if num_traits::pow(r.clone(), e as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl FieldScalar for Rational {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_pth_power(&self, p: u64) -> bool {
        if Zero::is_zero(self) {
            return true;
        }
        exact_root(self.numer(), p).is_some() && exact_root(self.denom(), p).is_some()
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Finite fields F_q
// ---------------------------------------------------------------------------

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let ext = (a as i64).extended_gcd(&(p as i64));
    ext.x.rem_euclid(p as i64) as u64
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(out)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = fp_rem(&fp_mul(&b, &b, p), m, p);
        }
    }
    acc
}

/// Ben-Or irreducibility test for a monic polynomial over `F_p`.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xpow = x.clone();
    for _ in 1..=d / 2 {
        xpow = fp_powmod(&xpow, p, f, p);
        let g = fp_gcd(f, &fp_sub(&xpow, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `d`
/// over `F_p`, comparing coefficient vectors from the constant term upward
/// read as a base-`p` number with the constant term least significant.
pub fn lex_first_irreducible(p: u64, d: u32) -> Vec<u64> {
    let total = p.pow(d);
    for code in 0..total {
        let mut f = Vec::with_capacity(d as usize + 1);
        let mut c = code;
        for _ in 0..d {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if d > 1 && f[0] == 0 {
            continue;
        }
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The field `F_q`, `q = p^d`, with elements packed as base-`p` integers
/// (coefficient of `t^i` is the `i`-th digit). Multiplication goes through
/// discrete log tables.
pub struct FqField {
    p: u64,
    degree: u32,
    q: u64,
    irreducible: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqField")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("irreducible", &self.irreducible)
            .finish()
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}

impl FqField {
    /// Builds `F_{p^d}`. Characteristic 2 is allowed here since nothing in a
    /// field needs an odd prime.
    pub fn new(p: u64, d: u32) -> Result<Arc<Self>> {
        if !is_prime(p) || d == 0 {
            return Err(Error::InvalidParameter(format!(
                "F_{{{p}^{d}}} is not a field"
            )));
        }
        let q = p
            .checked_pow(d)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::Capacity {
                what: format!("field order {p}^{d}"),
                needed: (p as u128).saturating_pow(d),
                limit: MAX_FIELD_ORDER as u128,
            })?;
        let irreducible = lex_first_irreducible(p, d);
        let mut field = FqField {
            p,
            degree: d,
            q,
            irreducible,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// Builds `F_q` from the order `q` (a prime power).
    pub fn with_order(q: u64) -> Result<Arc<Self>> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        let mut p = 2;
        while !q.is_multiple_of(p) {
            p += 1;
        }
        let mut d = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            d += 1;
        }
        if r != 1 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        Self::new(p, d)
    }

    fn unpack(&self, mut v: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(v as u64 % self.p);
            v /= self.p as u32;
        }
        fp_trim(out)
    }

    fn pack(&self, c: &[u64]) -> u32 {
        c.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as u32
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = fp_mul(&self.unpack(a), &self.unpack(b), self.p);
        self.pack(&fp_rem(&prod, &self.irreducible, self.p))
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as usize;
        let mut candidate = 2u32.min(self.q as u32 - 1);
        if self.q == 2 {
            candidate = 1;
        }
        loop {
            let mut exp = Vec::with_capacity(order);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.slow_mul(x, candidate);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
            candidate += 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn irreducible(&self) -> &[u64] {
        &self.irreducible
    }

    pub fn elem(self: &Arc<Self>, packed: u64) -> FqElem {
        FqElem {
            field: Arc::clone(self),
            v: (packed % self.q) as u32,
        }
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FqElem {
        self.elem(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn zero(self: &Arc<Self>) -> FqElem {
        self.elem(0)
    }

    pub fn one(self: &Arc<Self>) -> FqElem {
        self.elem(1)
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |v| self.elem(v))
    }

    pub(crate) fn add_packed(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_packed(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    /// Discrete logarithm of a nonzero packed element.
    pub(crate) fn log_packed(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    fn mul_packed(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[l as usize]
    }
}

/// An element of a finite field.
#[derive(Clone)]
pub struct FqElem {
    field: Arc<FqField>,
    v: u32,
}

impl FqElem {
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn packed(&self) -> u64 {
        self.v as u64
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field,
            "field mismatch"
        );
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && *self.field == *other.field
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            return write!(f, "{}", self.v);
        }
        let c = self.field.unpack(self.v);
        if c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| match i {
                0 => format!("{x}"),
                1 => format!("{x}t"),
                _ => format!("{x}t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let v = self.field.add_packed(self.v, rhs.v);
        FqElem {
            field: self.field,
            v,
        }
    }
}

impl Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let v = self.field.add_packed(self.v, self.field.neg_packed(rhs.v));
        FqElem {
            field: self.field,
            v,
        }
    }
}

impl Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let v = self.field.mul_packed(self.v, rhs.v);
        FqElem {
            field: self.field,
            v,
        }
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> Self {
        let v = self.field.neg_packed(self.v);
        FqElem {
            field: self.field,
            v,
        }
    }
}

impl Coefficient for FqElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
    fn pow_u64(&self, e: u64) -> Self {
        if self.v == 0 {
            return if e == 0 {
                self.one_like()
            } else {
                self.clone()
            };
        }
        let order = self.field.q - 1;
        let l = (self.field.log[self.v as usize] as u128 * e as u128 % order as u128) as usize;
        FqElem {
            field: Arc::clone(&self.field),
            v: self.field.exp[l],
        }
    }
}

impl FieldScalar for FqElem {
    fn inverse(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        Some(self.pow_u64(self.field.q - 2))
    }

    fn is_pth_power(&self, p: u64) -> bool {
        if self.v == 0 {
            return true;
        }
        let q = self.field.q;
        let g = p.gcd(&(q - 1));
        self.pow_u64((q - 1) / g).is_one()
    }
}

/// Lossy conversion used for report rendering of small integers.
pub fn bigint_to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_arith_examples() {
        let m9 = PrimePower::new(3, 2).unwrap();
        let eight = m9.elem(8);
        assert_eq!(mod_arith(&eight, &eight, ModOp::Mul).unwrap().residue(), 1);
        let two = m9.elem(2);
        assert_eq!(two.pow(8).residue(), 4);
        assert_eq!(two.pow(9 - 3).residue(), 1);
        let m5 = PrimePower::prime(5).unwrap();
        assert!(mod_arith(&m5.elem(3), &m5.elem(2), ModOp::Add)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let a = PrimePower::prime(3).unwrap().elem(1);
        let b = PrimePower::new(3, 2).unwrap().elem(1);
        for op in [ModOp::Add, ModOp::Mul, ModOp::Neg, ModOp::Pow] {
            assert!(matches!(
                mod_arith(&a, &b, op),
                Err(Error::ModulusMismatch { .. })
            ));
        }
    }

    #[test]
    fn prime_power_validation() {
        assert!(PrimePower::new(2, 1).is_err());
        assert!(PrimePower::new(9, 1).is_err());
        assert!(PrimePower::new(3, 3).is_err());
        assert_eq!(PrimePower::new(7, 2).unwrap().modulus(), 49);
    }

    #[test]
    fn ring_axioms_exhaustive_mod_9_and_3() {
        for k in 1..=2 {
            let m = PrimePower::new(3, k).unwrap();
            let n = m.modulus() as i64;
            let all: Vec<ModScalar> = (0..n).map(|i| m.elem(i)).collect();
            for &a in &all {
                assert_eq!(a + a.zero_like(), a);
                assert_eq!(a * a.one_like(), a);
                assert!((a + -a).is_zero());
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(
                        (a + b).residue(),
                        ((a.residue() + b.residue()) as i64 % n) as u64
                    );
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn cubes_in_f7() {
        let f = FqField::new(7, 1).unwrap();
        // Oracle: the set of cubes by exhaustive table.
        let cubes: Vec<u64> = (0..7u64).map(|x| x * x * x % 7).collect();
        for x in f.elements() {
            assert_eq!(x.is_pth_power(3), cubes.contains(&x.packed()), "x = {x}");
        }
        assert!(f.elem(6).is_pth_power(3));
        assert!(!f.elem(2).is_pth_power(3));
    }

    #[test]
    fn pth_power_count_in_fq() {
        for (q, p) in [
            (7u64, 3u64),
            (13, 3),
            (11, 5),
            (49, 3),
            (29, 7),
            (31, 5),
            (81, 5),
        ] {
            let f = FqField::with_order(q).unwrap();
            let count = f.elements().filter(|x| x.is_pth_power(p)).count() as u64;
            assert_eq!(count, (q - 1) / p + 1, "q = {q}, p = {p}");
        }
    }

    #[test]
    fn rational_pth_powers() {
        assert!(rational(8, 27).is_pth_power(3));
        assert!(rational(-8, 27).is_pth_power(3));
        assert!(!rational(2, 27).is_pth_power(3));
        assert!(!rational(-4, 9).is_pth_power(2));
        assert!(Rational::zero().is_pth_power(5));
    }

    #[test]
    fn lex_first_irreducibles() {
        // x^2 + 1 is irreducible over F_3 and is the first candidate with nonzero constant.
        assert_eq!(lex_first_irreducible(3, 2), vec![1, 0, 1]);
        // Over F_7, x^2 + 1 is reducible (−1 is not a square mod 7? it is not) -> irreducible.
        assert_eq!(lex_first_irreducible(7, 2), vec![1, 0, 1]);
        // Over F_5, −1 = 4 = 2^2 so x^2 + 1 splits; x^2 + 2 is the first irreducible.
        assert_eq!(lex_first_irreducible(5, 2), vec![2, 0, 1]);
    }

    #[test]
    fn fq_field_axioms_small() {
        let f = FqField::new(3, 2).unwrap();
        let all: Vec<FqElem> = f.elements().collect();
        for a in &all {
            if !a.is_zero() {
                assert!((a.clone() * a.inverse().unwrap()).is_one());
            }
            for b in &all {
                assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
                for c in &all {
                    assert_eq!(
                        a.clone() * (b.clone() + c.clone()),
                        a.clone() * b.clone() + a.clone() * c.clone()
                    );
                }
            }
        }
    }

    #[test]
    fn field_capacity() {
        assert!(matches!(FqField::new(3, 13), Err(Error::Capacity { .. })));
        assert!(FqField::with_order(12).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rational_inverse_is_exact(n in -10_000i64..10_000, d in 1i64..10_000) {
            prop_assume!(n != 0);
            let a = rational(n, d);
            let b = rational(d, n);
            prop_assert!(Coefficient::is_one(&(a.clone() * b)));
            prop_assert_eq!(a.clone() * a.inverse().unwrap(), Rational::one());
        }

        #[test]
        fn fq_mul_matches_polynomial_product(a in 0u64..2401, b in 0u64..2401) {
            let f = FqField::new(7, 4).unwrap();
            let x = f.elem(a);
            let y = f.elem(b);
            let slow = f.slow_mul(a as u32, b as u32);
            prop_assert_eq!((x * y).packed(), slow as u64);
        }
    }
}
