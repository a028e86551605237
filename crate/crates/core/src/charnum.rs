//! The characteristic number `s_d`: additive evaluation on split classes,
//! the coefficient computation in `Z/p²[x,y]/(∏(y − ix))`, and
//! `p² ∤ s_d(P(A))`.
//!
//! `s_d` here is the unnormalized class; the Levine–Morel class of the same
//! name is `s_d/p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::report::{guarded, CheckReport};
use crate::scalars::{check_odd_prime, ModScalar, PrimePower};
use crate::towers::pipeline_degrees;

/// Largest number of terms an element of `CoeffRing` may hold.
pub const TERM_CAPACITY: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Split bundle classes over Z[h]/(h^{d+1})
// ---------------------------------------------------------------------------

/// An element of `Z[h]/(h^{top+1})`, coefficients indexed by `h`-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncated {
    pub top: usize,
    pub coeffs: Vec<BigInt>,
}

impl Truncated {
    pub fn monomial(top: usize, c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); top + 1];
        if k <= top {
            coeffs[k] = BigInt::from(c);
        }
        Truncated { top, coeffs }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.top + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(self.top + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Truncated {
            top: self.top,
            coeffs,
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Truncated::monomial(self.top, 1, 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The coefficient of `h^top`, the degree of a zero-cycle on `P^top`.
    pub fn degree(&self) -> BigInt {
        self.coeffs[self.top].clone()
    }
}

/// A virtual sum `Σ m_j·[L_j]` of line bundles, recorded by first Chern
/// classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundleClass {
    pub lines: Vec<(Truncated, i64)>,
}

impl SplitBundleClass {
    pub fn rank(&self) -> i64 {
        self.lines.iter().map(|l| l.1).sum()
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut lines = self.lines.clone();
        lines.extend(o.lines.iter().cloned());
        SplitBundleClass { lines }
    }

    /// `s_d = Σ m_j·deg(c_1(L_j)^d)`.
    pub fn s_d(&self, d: usize) -> BigInt {
        self.lines
            .iter()
            .map(|(c, m)| c.pow(d).degree() * BigInt::from(*m))
            .sum()
    }
}

/// `T_{P^d} = (d+1)·[O(1)] − [O]`.
pub fn tangent_class_projective_space(d: usize) -> SplitBundleClass {
    SplitBundleClass {
        lines: vec![
            (Truncated::monomial(d, 1, 1), d as i64 + 1),
            (Truncated::monomial(d, 0, 0), -1),
        ],
    }
}

/// `s_d(P^d)`.
pub fn s_d_projective_space(d: usize) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    Ok(tangent_class_projective_space(d).s_d(d))
}

/// `s_d(P^d) = d + 1` for `d ≤ d_max`, and `P^{p−1}` is a `ν_1`-variety.
pub fn check_s_d_projective(d_max: usize, p: u64) -> CheckReport {
    let base = CheckReport::new("s_d_projective_space", "Def 1.16")
        .param("d_max", d_max)
        .param("p", p);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        let mut bad = Vec::new();
        for d in 1..=d_max {
            if s_d_projective_space(d)? != BigInt::from(d + 1) {
                bad.push(d);
            }
        }
        let s = s_d_projective_space(p as usize - 1)?;
        let pb = BigInt::from(p);
        let nu1 = (&s % &pb).is_zero() && !(&s % (&pb * &pb)).is_zero();
        Ok(rep
            .computed(format!(
                "s_d(P^d) = d+1 for d <= {d_max}: {}; s_{}(P^{}) = {s}, nu_1: {nu1}",
                bad.is_empty(),
                p - 1,
                p - 1
            ))
            .claim("s_d(P^d) = d+1; P^(p-1) is a nu_1-variety")
            .pass_if(bad.is_empty() && nu1))
    })
}

// ---------------------------------------------------------------------------
// Z/p²[x,y]/(∏(y − ix))
// ---------------------------------------------------------------------------

/// `Z/p²[x,y]/(∏_{i<p}(y − ix))`, elements reduced to `y`-degree `< p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRing {
    p: u64,
    modulus: u64,
    /// `y^p = Σ_{k<p} rel[k]·x^{p−k}·y^k`.
    rel: Vec<u64>,
}

/// An element of `CoeffRing`: `(x-degree, y-degree) → coefficient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffElem {
    pub terms: BTreeMap<(u32, u32), u64>,
}

impl CoeffRing {
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let modulus = p * p;
        // ∏(y − ix) as coefficients of y^k (each multiplied by x^{p−k}).
        let mut poly = vec![1u64];
        for i in 0..p {
            let mut next = vec![0u64; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % modulus;
                next[k] = (next[k] + modulus - c * i % modulus) % modulus;
            }
            poly = next;
        }
        let rel = (0..p as usize)
            .map(|k| (modulus - poly[k]) % modulus)
            .collect();
        Ok(CoeffRing { p, modulus, rel })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> CoeffElem {
        CoeffElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(&self, c: i64, xd: u32, yd: u32) -> CoeffElem {
        let mut e = self.zero();
        self.add_term(
            &mut e.terms,
            xd,
            yd,
            c.rem_euclid(self.modulus as i64) as u64,
        );
        self.reduce(e)
    }

    /// `y − ix`.
    pub fn line(&self, i: u64) -> CoeffElem {
        let mut e = self.monomial(1, 0, 1);
        self.add_term(
            &mut e.terms,
            1,
            0,
            (self.modulus - i % self.modulus) % self.modulus,
        );
        e
    }

    fn add_term(&self, t: &mut BTreeMap<(u32, u32), u64>, xd: u32, yd: u32, c: u64) {
        let e = t.entry((xd, yd)).or_insert(0);
        *e = (*e + c) % self.modulus;
        if *e == 0 {
            t.remove(&(xd, yd));
        }
    }

    /// Rewrites `y^p`, highest `y`-degree first.
    pub fn reduce(&self, mut e: CoeffElem) -> CoeffElem {
        let p = self.p as u32;
        while let Some((&(xd, yd), &c)) = e
            .terms
            .iter()
            .filter(|(k, _)| k.1 >= p)
            .max_by_key(|(k, _)| (k.1, k.0))
        {
            e.terms.remove(&(xd, yd));
            for (k, &r) in self.rel.iter().enumerate() {
                if r != 0 {
                    self.add_term(
                        &mut e.terms,
                        xd + p - k as u32,
                        yd - p + k as u32,
                        c * r % self.modulus,
                    );
                }
            }
        }
        e
    }

    pub fn add(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        let mut t = a.terms.clone();
        for (&(xd, yd), &c) in &b.terms {
            self.add_term(&mut t, xd, yd, c);
        }
        CoeffElem { terms: t }
    }

    pub fn scale(&self, a: &CoeffElem, k: i64) -> CoeffElem {
        let k = k.rem_euclid(self.modulus as i64) as u64;
        let mut t = BTreeMap::new();
        for (&(xd, yd), &c) in &a.terms {
            self.add_term(&mut t, xd, yd, c * k % self.modulus);
        }
        CoeffElem { terms: t }
    }

    pub fn mul(&self, a: &CoeffElem, b: &CoeffElem) -> Result<CoeffElem> {
        let needed = a.terms.len() * b.terms.len();
        if needed > TERM_CAPACITY {
            return Err(Error::Capacity {
                what: "terms in Z/p^2[x,y] product".into(),
                needed: needed as u128,
                limit: TERM_CAPACITY as u128,
            });
        }
        let mut t = BTreeMap::new();
        for (&(x1, y1), &c1) in &a.terms {
            for (&(x2, y2), &c2) in &b.terms {
                self.add_term(&mut t, x1 + x2, y1 + y2, c1 * c2 % self.modulus);
            }
        }
        Ok(self.reduce(CoeffElem { terms: t }))
    }

    /// Binary powering with reduction after every product.
    pub fn pow(&self, a: &CoeffElem, mut e: u64) -> Result<CoeffElem> {
        let mut acc = self.monomial(1, 0, 0);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `(y − ix)^e` by the binomial theorem, reduced once at the end
    /// through a table of reduced powers `y^k`.
    pub fn line_power_binomial(&self, i: u64, e: u64) -> Result<CoeffElem> {
        let m = self.modulus;
        let mut row = vec![1u64];
        for _ in 0..e {
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = (row[k - 1] + row[k]) % m;
            }
            row = next;
        }
        let mut ypow = vec![self.monomial(1, 0, 0)];
        let y = self.monomial(1, 0, 1);
        for _ in 0..e {
            let last = ypow.last().expect("nonempty");
            ypow.push(self.mul(last, &y)?);
        }
        let mut out = self.zero();
        let neg_i = (m - i % m) % m;
        let mut ipow = 1u64;
        for k in 0..=e {
            // C(e, k) y^{e−k} (−ix)^k
            let c = row[k as usize] * ipow % m;
            if c != 0 {
                for (&(xd, yd), &v) in &ypow[(e - k) as usize].terms {
                    self.add_term(&mut out.terms, xd + k as u32, yd, v * c % m);
                }
            }
            ipow = ipow * neg_i % m;
        }
        Ok(out)
    }

    /// The `y^k` coefficient as `x-degree → coefficient`.
    pub fn y_coefficient(&self, a: &CoeffElem, k: u32) -> BTreeMap<u32, u64> {
        a.terms
            .iter()
            .filter(|((_, yd), _)| *yd == k)
            .map(|(&(xd, _), &c)| (xd, c))
            .collect()
    }

    /// Image under `x ↦ 1` in `Z/p²[y]/(∏(y − i))`, indexed by `y`-degree.
    pub fn at_x_one(&self, a: &CoeffElem) -> Vec<u64> {
        let mut v = vec![0u64; self.p as usize];
        for (&(_, yd), &c) in &a.terms {
            v[yd as usize] = (v[yd as usize] + c) % self.modulus;
        }
        v
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(xd, yd), &c)| format!("{c}*x^{xd}*y^{yd}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_um_range(p: u64, m: u32) -> Result<()> {
    check_odd_prime(p)?;
    if p > 7 || m == 0 || m > 3 {
        return Err(Error::Capacity {
            what: format!("u_m expansion for p={p}, m={m}"),
            needed: p.pow(m.min(8)) as u128,
            limit: 7u128.pow(3),
        });
    }
    Ok(())
}

/// `u_m = Σ_{i<p} (y − ix)^{p^m − 1}` by binary powering.
pub fn um(ring: &CoeffRing, m: u32) -> Result<CoeffElem> {
    check_um_range(ring.p, m)?;
    let e = ring.p.pow(m) - 1;
    let mut acc = ring.zero();
    for i in 0..ring.p {
        acc = ring.add(&acc, &ring.pow(&ring.line(i), e)?);
    }
    Ok(acc)
}

/// `u_m` by binomial expansion and a single reduction pass.
pub fn um_binomial(ring: &CoeffRing, m: u32) -> Result<CoeffElem> {
    check_um_range(ring.p, m)?;
    let e = ring.p.pow(m) - 1;
    let mut acc = ring.zero();
    for i in 0..ring.p {
        acc = ring.add(&acc, &ring.line_power_binomial(i, e)?);
    }
    Ok(acc)
}

/// The `y^{p−1}` coefficient of `u_m`, as `x-degree → coefficient mod p²`.
pub fn um_coefficient(p: u64, m: u32) -> Result<BTreeMap<u32, u64>> {
    let ring = CoeffRing::new(p)?;
    let u = um(&ring, m)?;
    Ok(ring.y_coefficient(&u, p as u32 - 1))
}

fn render_x_poly(c: &BTreeMap<u32, u64>) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter()
        .rev()
        .map(|(d, v)| format!("{v}*x^{d}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `[y^{p−1}] u_m = p·x^{p^m − p}`, the two reduction orders agree, and
/// `u_m ≡ u_1` after `x ↦ 1`.
pub fn check_um_coefficient(p: u64, m: u32) -> CheckReport {
    let base = CheckReport::new("um_coefficient", "Lemma 8.2")
        .param("p", p)
        .param("m", m);
    guarded(base, |rep| {
        let ring = CoeffRing::new(p)?;
        let u = um(&ring, m)?;
        let coefficient = ring.y_coefficient(&u, p as u32 - 1);
        let expected: BTreeMap<u32, u64> = [((p.pow(m) - p) as u32, p)].into_iter().collect();
        let orders_agree = um_binomial(&ring, m)? == u;
        let specialization = ring.at_x_one(&u) == ring.at_x_one(&um(&ring, 1)?);
        Ok(rep
            .computed(format!(
                "[y^{}]u_{m} = {} mod {}; reduction orders agree: {orders_agree}; u_{m} = u_1 at x=1: {specialization}",
                p - 1,
                render_x_poly(&coefficient),
                p * p
            ))
            .claim(format!("p*x^(p^m-p) = {}*x^{}", p, p.pow(m) - p))
            .pass_if(coefficient == expected && orders_agree && specialization))
    })
}

/// `s_d(P(A))` modulo `p²` and whether `p² ∤ s_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdPA {
    /// `a_{p−1}`, the scalar in front of `x^{dim S}` in `[y^{p−1}] u_n`.
    pub a: ModScalar,
    pub s_d: ModScalar,
    pub not_divisible_by_p2: bool,
}

/// Assembles `s_d(P(A))` for `dim P(A) = p^n − 1` from the vertical tangent
/// class `Σ_i [O(1) ⊗ J^{−i}] − [O]` in `CH*(S)[y]/(∏(y − ix))`, with
/// `π_*(y^{p−1}) = [S]` and `deg x^{dim S} = deg_x_top`.
pub fn s_d_pa(p: u64, n: u32, deg_x_top: &ModScalar) -> Result<SdPA> {
    if deg_x_top.modulus().p() != p || !deg_x_top.is_unit() {
        return Err(Error::Inconsistent(format!(
            "deg x^(dim S) = {deg_x_top} is not a unit mod {p}"
        )));
    }
    let ring = CoeffRing::new(p)?;
    let d = p.pow(n) - 1;
    let dim_s = (p.pow(n) - p) as u32;
    // Σ_i (y − ix)^d − 0^d: the trivial summand contributes nothing.
    let mut total = ring.zero();
    for i in 0..p {
        total = ring.add(&total, &ring.pow(&ring.line(i), d)?);
    }
    let top = ring.y_coefficient(&total, p as u32 - 1);
    if top.keys().any(|&k| k != dim_s) {
        return Err(Error::NotTopDegree {
            expected: dim_s,
            found: top.keys().copied().collect(),
        });
    }
    let p2 = PrimePower::new(p, 2)?;
    let a = p2.elem(top.get(&dim_s).copied().unwrap_or(0) as i64);
    let lift = p2.elem(deg_x_top.signed_residue());
    let s_d = a * lift;
    Ok(SdPA {
        a,
        s_d,
        not_divisible_by_p2: s_d.residue() != 0,
    })
}

/// `a_{p−1} ≡ p (mod p²)` and `p ∣ s_d(P(A))`, `p² ∤ s_d(P(A))`, with the
/// degree of `x^{dim S}` taken from the degree pipeline.
pub fn check_s_d_pa(p: u64, n: u32) -> CheckReport {
    let base = CheckReport::new("s_d_PA", "Thm 8.1; Lemma 8.2")
        .param("p", p)
        .param("n", n);
    guarded(base, |rep| {
        let levels = pipeline_degrees(p, n)?;
        let deg_c1 = levels.last().expect("n >= 2").degree;
        let dim_s = p.pow(n) - p;
        // x = −c_1(J)
        let deg_x = if dim_s.is_multiple_of(2) { deg_c1 } else { -deg_c1 };
        let r = s_d_pa(p, n, &deg_x)?;
        let divisible_by_p = r.s_d.residue() % p == 0;
        Ok(rep
            .computed(format!(
                "a_{} = {} mod {}; deg x^{dim_s} = {} mod {p}; s_d = {} mod {}",
                p - 1,
                r.a.residue(),
                p * p,
                deg_x.residue(),
                r.s_d.residue(),
                p * p
            ))
            .claim("a_(p-1) = p mod p^2; p^2 does not divide s_d(P(A))")
            .pass_if(r.a.residue() == p && divisible_by_p && r.not_divisible_by_p2))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_space_values() {
        assert_eq!(s_d_projective_space(1).unwrap(), BigInt::from(2));
        assert_eq!(s_d_projective_space(2).unwrap(), BigInt::from(3));
        assert!(s_d_projective_space(0).is_err());
    }

    #[test]
    fn relation_for_p3() {
        // ∏(y − ix) = y(y − x)(y − 2x) = y³ − 3xy² + 2x²y, so y³ = 3xy² − 2x²y.
        let r = CoeffRing::new(3).unwrap();
        assert_eq!(r.rel, vec![0, 7, 3]);
        let y3 = r.monomial(1, 0, 3);
        assert_eq!(y3, r.add(&r.monomial(3, 1, 2), &r.monomial(-2, 2, 1)));
    }

    #[test]
    fn u1_coefficient() {
        let c = um_coefficient(3, 1).unwrap();
        assert_eq!(c, [(0, 3)].into_iter().collect());
    }
}
