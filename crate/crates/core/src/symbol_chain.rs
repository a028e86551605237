//! The norm forms `Φ_r`, `Ψ_r`, Kummer-algebra norms, tautological
//! `p`-forms on `P(O ⊕ K)` and the forms `φ_r` on the k-tower.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::{guarded, CheckReport};
use crate::scalars::{
    check_odd_prime, checked_pow, Coefficient, FieldScalar, FqElem, FqField, Rational,
};

/// Units `a_1, …, a_r` defining `Φ_r` and `Ψ_r` for a prime `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec<F> {
    pub p: u64,
    pub units: Vec<F>,
}

impl<F: Coefficient> PhiSpec<F> {
    pub fn new(p: u64, units: Vec<F>) -> Result<Self> {
        if p < 2 || !crate::scalars::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if units.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidParameter("units must be nonzero".into()));
        }
        Ok(PhiSpec { p, units })
    }

    pub fn level(&self) -> u32 {
        self.units.len() as u32
    }

    /// `p^r`.
    pub fn phi_vars(&self) -> usize {
        (self.p as usize).pow(self.level())
    }

    /// `p^r − p^{r−1}`; zero at level 0.
    pub fn psi_vars(&self) -> usize {
        match self.level() {
            0 => 0,
            r => (self.p as usize).pow(r) - (self.p as usize).pow(r - 1),
        }
    }
}

fn phi_rec<C: Coefficient>(p: u64, units: &[C], x: &[C]) -> C {
    match units.split_last() {
        None => x[0].pow_u64(p),
        Some((_, lower)) => {
            let block = x.len() / p as usize;
            phi_rec(p, lower, &x[..block]) * psi_rec(p, units, &x[block..])
        }
    }
}

fn psi_rec<C: Coefficient>(p: u64, units: &[C], x: &[C]) -> C {
    let (a, lower) = units.split_last().expect("Ψ needs level >= 1");
    let block = x.len() / (p as usize - 1);
    let one = a.one_like();
    x.chunks(block)
        .map(|xi| one.clone() - a.clone() * phi_rec(p, lower, xi))
        .fold(one.clone(), |acc, f| acc * f)
}

/// `Φ_r(x)` with `Φ_0(t) = t^p` and `Φ_{r+1}(x_0, …) = Φ_r(x_0)Ψ_{r+1}(x_1, …)`.
/// Variable `j = (j_1, …, j_r)` sits at position `Σ j_t p^{r−t}`.
pub fn phi_eval<C: Coefficient>(spec: &PhiSpec<C>, point: &[C]) -> Result<C> {
    if point.len() != spec.phi_vars() {
        return Err(Error::DimensionMismatch {
            expected: spec.phi_vars(),
            got: point.len(),
        });
    }
    Ok(phi_rec(spec.p, &spec.units, point))
}

/// `Ψ_r(x_1, …, x_{p−1}) = ∏[1 − a_r Φ_{r−1}(x_i)]`.
pub fn psi_eval<C: Coefficient>(spec: &PhiSpec<C>, point: &[C]) -> Result<C> {
    if spec.level() == 0 {
        return Err(Error::InvalidParameter("Ψ_0 is not defined".into()));
    }
    if point.len() != spec.psi_vars() {
        return Err(Error::DimensionMismatch {
            expected: spec.psi_vars(),
            got: point.len(),
        });
    }
    Ok(psi_rec(spec.p, &spec.units, point))
}

/// `Φ_r` evaluated bottom-up over the index tree instead of by recursion.
/// Level-1 factors `1 − a_1x^p` are taken as Kummer norms `N(1 − xu)`.
pub fn phi_eval_levelwise<F: Coefficient>(spec: &PhiSpec<F>, point: &[F]) -> Result<F> {
    if point.len() != spec.phi_vars() {
        return Err(Error::DimensionMismatch {
            expected: spec.phi_vars(),
            got: point.len(),
        });
    }
    let p = spec.p as usize;
    let mut vals: Vec<F> = match spec.units.first() {
        None => point.iter().map(|x| x.pow_u64(spec.p)).collect(),
        Some(a1) => point
            .chunks(p)
            .map(|blk| {
                let mut acc = blk[0].pow_u64(spec.p);
                for x in &blk[1..] {
                    acc = acc * KummerElement::one_minus_xu(a1.clone(), spec.p, x.clone()).norm();
                }
                acc
            })
            .collect(),
    };
    for a in spec.units.iter().skip(1) {
        let one = a.one_like();
        vals = vals
            .chunks(p)
            .map(|blk| {
                blk[1..].iter().fold(blk[0].clone(), |acc, v| {
                    acc * (one.clone() - a.clone() * v.clone())
                })
            })
            .collect();
    }
    Ok(vals.pop().expect("nonempty"))
}

/// `Φ_r` as a polynomial over `Z` in `x_0, …, x_{p^r−1}, a_1, …, a_r`.
pub fn phi_symbolic(p: u64, r: u32) -> Result<Poly<BigInt>> {
    let nx = checked_pow(p, r)? as usize;
    if nx > 9 {
        return Err(Error::Capacity {
            what: format!("symbolic expansion of Phi_{r} in {nx} variables"),
            needed: nx as u128,
            limit: 9,
        });
    }
    let n = nx + r as usize;
    let z = BigInt::from(0);
    let xs: Vec<Poly<BigInt>> = (0..nx).map(|i| Poly::var(n, i, &z)).collect();
    let spec = PhiSpec {
        p,
        units: (nx..n).map(|i| Poly::var(n, i, &z)).collect(),
    };
    phi_eval(&spec, &xs)
}

// ---------------------------------------------------------------------------
// Kummer algebras
// ---------------------------------------------------------------------------

/// `β = Σ c_i u^i` in `k[u]/(u^p − a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerElement<C> {
    pub a: C,
    pub coeffs: Vec<C>,
}

impl<C: Coefficient> KummerElement<C> {
    pub fn new(a: C, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two coefficients".into(),
            ));
        }
        Ok(KummerElement { a, coeffs })
    }

    pub fn scalar(a: C, p: u64, c: C) -> Self {
        let mut coeffs = vec![a.zero_like(); p as usize];
        coeffs[0] = c;
        KummerElement { a, coeffs }
    }

    /// `1 − xu`.
    pub fn one_minus_xu(a: C, p: u64, x: C) -> Self {
        let mut e = Self::scalar(a.clone(), p, a.one_like());
        e.coeffs[1] = -x;
        e
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.a != other.a || self.degree() != other.degree() {
            return Err(Error::PresentationMismatch(
                format!("k[u]/(u^{} - {})", self.degree(), self.a),
                format!("k[u]/(u^{} - {})", other.degree(), other.a),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.clone() + y.clone())
            .collect();
        Ok(KummerElement {
            a: self.a.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.degree();
        let mut out = vec![self.a.zero_like(); p];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                let t = x.clone() * y.clone();
                if i + j >= p {
                    out[i + j - p] = out[i + j - p].clone() + self.a.clone() * t;
                } else {
                    out[i + j] = out[i + j].clone() + t;
                }
            }
        }
        Ok(KummerElement {
            a: self.a.clone(),
            coeffs: out,
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        KummerElement {
            a: self.a.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Matrix of multiplication by `self` on `1, u, …, u^{p−1}`: entry
    /// `(i, j)` is the `u^i` coefficient of `self·u^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<C>> {
        let p = self.degree();
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if i >= j {
                            self.coeffs[i - j].clone()
                        } else {
                            self.a.clone() * self.coeffs[i + p - j].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The norm `det(m_β)`, computed without division.
    pub fn norm(&self) -> C {
        determinant(&self.multiplication_matrix(), &self.a)
    }
}

/// Division-free determinant by expansion along rows over column subsets.
pub fn determinant<C: Coefficient>(m: &[Vec<C>], ring: &C) -> C {
    let n = m.len();
    assert!(n <= 16, "determinant size {n} too large");
    let mut d: Vec<C> = vec![ring.zero_like(); 1 << n];
    d[0] = ring.one_like();
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = ring.zero_like();
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let term = m[row][j].clone() * d[mask ^ (1 << j)].clone();
            acc = if above % 2 == 0 {
                acc + term
            } else {
                acc - term
            };
        }
        d[mask] = acc;
    }
    d[(1 << n) - 1].clone()
}

/// Determinant over a field by Gaussian elimination.
pub fn determinant_gauss<F: FieldScalar>(m: &[Vec<F>], ring: &F) -> F {
    let mut m: Vec<Vec<F>> = m.to_vec();
    let n = m.len();
    let mut det = ring.one_like();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ring.zero_like();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let inv = m[col][col].inverse().expect("nonzero pivot");
        det = det * m[col][col].clone();
        for r in col + 1..n {
            let f = m[r][col].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

fn prod_one_minus_xu<C: Coefficient>(a: &C, p: u64, xs: &[C]) -> Result<KummerElement<C>> {
    let mut e = KummerElement::scalar(a.clone(), p, a.one_like());
    for x in xs {
        e = e.try_mul(&KummerElement::one_minus_xu(a.clone(), p, x.clone()))?;
    }
    Ok(e)
}

/// `(Ψ_1 identity, Φ_1 identity)` at `x = (x_0, …, x_{p−1})`, with the
/// Kummer side `N(x_0∏(1 − x_iu))` and the recursion side `Φ_1(x)`.
fn witness_sides<C: Coefficient>(p: u64, a1: &C, x: &[C]) -> Result<[(C, C); 2]> {
    let spec = PhiSpec {
        p,
        units: vec![a1.clone()],
    };
    let prod = prod_one_minus_xu(a1, p, &x[1..])?;
    let psi_norm = prod.norm();
    let phi_norm = prod.scale(&x[0]).norm();
    Ok([
        (psi_norm, psi_eval(&spec, &x[1..])?),
        (phi_norm, phi_eval(&spec, x)?),
    ])
}

/// `N(∏(1 − x_iu)) = Ψ_1(x)` and `N(x_0∏(1 − x_iu)) = Φ_1(x)` at one point.
pub fn psi1_witness_check<F: FieldScalar>(p: u64, a1: &F, x: &[F]) -> CheckReport {
    let base = CheckReport::new("psi1_witness", "Ex 3.1").param("p", p);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        if a1.is_zero() {
            return Err(Error::InvalidParameter("a_1 must be nonzero".into()));
        }
        if x.len() != p as usize {
            return Err(Error::DimensionMismatch {
                expected: p as usize,
                got: x.len(),
            });
        }
        let [(n1, psi), (n2, phi)] = witness_sides(p, a1, x)?;
        Ok(rep
            .computed(format!("N={n1}, Psi_1={psi}; N={n2}, Phi_1={phi}"))
            .claim("N(prod(1-x_i u)) = Psi_1(x), N(x_0 prod(1-x_i u)) = Phi_1(x)")
            .pass_if(n1 == psi && n2 == phi))
    })
}

/// The witness identity as polynomials over `Z[a_1, x_0, …, x_{p−1}]`.
pub fn psi1_symbolic_check(p: u64) -> CheckReport {
    let base = CheckReport::new("psi1_witness_symbolic", "Ex 3.1").param("p", p);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        if p > 5 {
            return Err(Error::Capacity {
                what: format!("symbolic norm for p={p}"),
                needed: p as u128,
                limit: 5,
            });
        }
        let n = p as usize + 1;
        let z = BigInt::from(0);
        let a = Poly::var(n, 0, &z);
        let xs: Vec<Poly<BigInt>> = (1..n).map(|i| Poly::var(n, i, &z)).collect();
        let [(n1, psi), (n2, phi)] = witness_sides(p, &a, &xs)?;
        let ok = n1 == psi && n2 == phi;
        Ok(rep
            .computed(format!(
                "Psi_1 identity: {} ({} terms); Phi_1 identity: {} ({} terms)",
                if n1 == psi { "exact" } else { "differs" },
                psi.len(),
                if n2 == phi { "exact" } else { "differs" },
                phi.len()
            ))
            .claim("polynomial identity over Z[a_1]")
            .pass_if(ok))
    })
}

/// The `F_q` of order `q`, which must satisfy `q ≡ 1 mod p`.
pub fn kummer_field(p: u64, q: u64) -> Result<Arc<FqField>> {
    if q % p != 1 {
        return Err(Error::InvalidParameter(format!(
            "q={q} is not 1 mod p={p}: F_q lacks the p-th roots of unity"
        )));
    }
    FqField::with_order(q)
}

/// Smallest prime `q ≡ 1 mod p`.
pub fn default_field_order(p: u64) -> u64 {
    (1..)
        .map(|k| k * p + 1)
        .find(|&q| crate::scalars::is_prime(q))
        .expect("Dirichlet")
}

fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_fq(f: &Arc<FqField>, rng: &mut ChaCha8Rng) -> FqElem {
    f.elem(rng.gen_range(0..f.order()))
}

fn random_unit(f: &Arc<FqField>, rng: &mut ChaCha8Rng) -> FqElem {
    f.elem(rng.gen_range(1..f.order()))
}

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=5);
        if !(nonzero && n == 0) {
            return Rational::new(n.into(), d.into());
        }
    }
}

/// Ex 3.1 at sampled `F_q` points, and `Φ_r` by recursion vs level-wise
/// evaluation for `r ≤ r_max`.
pub fn forms_sampled_check(p: u64, q: u64, r_max: u32, samples: usize, seed: u64) -> CheckReport {
    let base = CheckReport::new("forms_sampled", "Ex 3.1; eq:Phi")
        .param("p", p)
        .param("field", q)
        .param("r", r_max)
        .param("samples", samples)
        .param("seed", seed);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        let f = kummer_field(p, q)?;
        let failures: Vec<String> = (0..samples as u64)
            .into_par_iter()
            .map(|i| -> Result<Option<String>> {
                let mut rng = point_rng(seed, i);
                let a1 = random_unit(&f, &mut rng);
                let x: Vec<FqElem> = (0..p).map(|_| random_fq(&f, &mut rng)).collect();
                let [(n1, psi), (n2, phi)] = witness_sides(p, &a1, &x)?;
                if n1 != psi || n2 != phi {
                    return Ok(Some(format!(
                        "sample {i}: witness N={n1}/{n2}, forms {psi}/{phi}"
                    )));
                }
                for r in 1..=r_max {
                    let units: Vec<FqElem> = (0..r).map(|_| random_unit(&f, &mut rng)).collect();
                    let spec = PhiSpec::new(p, units)?;
                    let pt: Vec<FqElem> = (0..spec.phi_vars())
                        .map(|_| random_fq(&f, &mut rng))
                        .collect();
                    let (v1, v2) = (phi_eval(&spec, &pt)?, phi_eval_levelwise(&spec, &pt)?);
                    if v1 != v2 {
                        return Ok(Some(format!("sample {i}, r={r}: {v1} vs {v2}")));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(rep
            .computed(match failures.first() {
                None => format!("{samples} of {samples} points agree"),
                Some(w) => format!("{} mismatches, first: {w}", failures.len()),
            })
            .claim("Kummer norm equals Phi_1/Psi_1; Phi_r recursion is path independent")
            .pass_if(samples > 0 && failures.is_empty()))
    })
}

// ---------------------------------------------------------------------------
// p-forms on line bundles
// ---------------------------------------------------------------------------

/// A 1-dimensional `p`-form `φ(tv) = at^p` in the trivialization `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PFormValue<F> {
    pub p: u64,
    pub a: F,
}

impl<F: Coefficient> PFormValue<F> {
    pub fn eval(&self, t: &F) -> F {
        self.a.clone() * t.pow_u64(self.p)
    }

    /// The same form read in the generator `λv`.
    pub fn rescale(&self, lambda: &F) -> Self {
        PFormValue {
            p: self.p,
            a: self.eval(lambda),
        }
    }
}

/// `ε` on the tautological line of `P(O ⊕ K)` at `(t : s)`: `t^p − s^pφ(u)`.
pub fn taut_form_value<F: Coefficient>(t: &F, s: &F, phi_u: &PFormValue<F>) -> Result<F> {
    if t.is_zero() && s.is_zero() {
        return Err(Error::InvalidParameter("(t : s) = (0 : 0)".into()));
    }
    Ok(t.pow_u64(phi_u.p) - phi_u.eval(s))
}

/// Whether `ε` vanishes at `(t : s)`.
pub fn pth_power_criterion<F: Coefficient>(t: &F, s: &F, phi_u: &PFormValue<F>) -> Result<bool> {
    Ok(taut_form_value(t, s, phi_u)?.is_zero())
}

/// For every `φ(u) ∈ F_q`: `ε` vanishes somewhere on `P^1(F_q)` iff
/// `φ(u)` is a `p`-th power.
pub fn lemma16_check(p: u64, q: u64) -> CheckReport {
    let base = CheckReport::new("pth_power_criterion", "Lemma 1.6")
        .param("p", p)
        .param("field", q);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        let f = FqField::with_order(q)?;
        let mut points: Vec<(FqElem, FqElem)> = f.elements().map(|t| (t, f.one())).collect();
        points.push((f.one(), f.zero()));
        let mut agree = 0;
        let mut powers = 0;
        let mut witness = None;
        for a in f.elements() {
            let form = PFormValue { p, a: a.clone() };
            let mut vanishes = false;
            for (t, s) in &points {
                vanishes |= pth_power_criterion(t, s, &form)?;
            }
            let is_power = a.is_pth_power(p);
            powers += usize::from(is_power);
            if vanishes == is_power {
                agree += 1;
            } else if witness.is_none() {
                witness = Some(a);
            }
        }
        let total = f.order() as usize;
        Ok(rep
            .computed(format!(
                "{agree} of {total} values agree over {} points; {powers} are p-th powers{}",
                points.len(),
                witness.map_or(String::new(), |w| format!("; mismatch at {w}"))
            ))
            .claim("epsilon vanishes at a point iff phi(u) is a p-th power")
            .pass_if(agree == total))
    })
}

// ---------------------------------------------------------------------------
// Forms on the k-tower
// ---------------------------------------------------------------------------

/// `φ_r(u_r)` at the point with fiber coordinates `(1 : x_{i,j})` at each
/// level `i ≤ r`, via `φ_i = φ_{i−2}·∏_j(1 − φ_{i−1}(x_{i,j}))`.
pub fn tower_form_levelwise<F: Coefficient>(p: u64, a1: &F, a2: &F, point: &[Vec<F>]) -> Vec<F> {
    let mut vals = vec![a1.clone(), a2.clone()];
    for (i, xs) in point.iter().enumerate() {
        let prev = PFormValue {
            p,
            a: vals[i + 1].clone(),
        };
        let psi = xs.iter().fold(a1.one_like(), |acc, x| {
            acc * taut_form_value(&a1.one_like(), x, &prev).expect("affine point")
        });
        vals.push(vals[i].clone() * psi);
    }
    vals
}

/// The same values through `Φ_1` with unit `φ_{i−1}(u_{i−1})` at each level.
pub fn tower_form_closed<F: Coefficient>(
    p: u64,
    a1: &F,
    a2: &F,
    point: &[Vec<F>],
) -> Result<Vec<F>> {
    let mut vals = vec![a1.clone(), a2.clone()];
    for (i, xs) in point.iter().enumerate() {
        let spec = PhiSpec {
            p,
            units: vec![vals[i + 1].clone()],
        };
        let mut x = vec![a1.one_like()];
        x.extend(xs.iter().cloned());
        let v = vals[i].clone() * phi_eval(&spec, &x)?;
        vals.push(v);
    }
    Ok(vals)
}

/// `φ_r` by both routes at one point.
pub fn tower_form_check<F: Coefficient>(
    p: u64,
    a1: &F,
    a2: &F,
    r: u32,
    point: &[Vec<F>],
) -> CheckReport {
    let base = CheckReport::new("tower_form", "Def 2.7; Lemma 4.5")
        .param("p", p)
        .param("r", r);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        if point.len() != r as usize || point.iter().any(|xs| xs.len() != p as usize - 1) {
            return Err(Error::DimensionMismatch {
                expected: r as usize * (p as usize - 1),
                got: point.iter().map(Vec::len).sum(),
            });
        }
        let v1 = tower_form_levelwise(p, a1, a2, point);
        let v2 = tower_form_closed(p, a1, a2, point)?;
        Ok(rep
            .computed(format!(
                "phi_{r} = {} (levelwise), {} (closed form)",
                v1[r as usize + 1],
                v2[r as usize + 1]
            ))
            .pass_if(v1 == v2))
    })
}

fn tower_sampled<F: Coefficient>(
    p: u64,
    r: u32,
    samples: usize,
    seed: u64,
    unit: impl Fn(&mut ChaCha8Rng) -> F + Sync,
    any: impl Fn(&mut ChaCha8Rng) -> F + Sync,
) -> Result<usize> {
    let bad =
        (0..samples as u64)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let mut rng = point_rng(seed, i);
                let (a1, a2) = (unit(&mut rng), unit(&mut rng));
                let point: Vec<Vec<F>> = (0..r)
                    .map(|_| (1..p).map(|_| any(&mut rng)).collect())
                    .collect();
                Ok(tower_form_levelwise(p, &a1, &a2, &point)
                    == tower_form_closed(p, &a1, &a2, &point)?)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|ok| !ok)
            .count();
    Ok(bad)
}

/// The two routes for `φ_r` at sampled points over `F_q` and over `Q`.
pub fn tower_form_sampled_check(p: u64, q: u64, r: u32, samples: usize, seed: u64) -> CheckReport {
    let base = CheckReport::new("tower_form_sampled", "Def 2.7; Lemma 4.5")
        .param("p", p)
        .param("field", q)
        .param("r", r)
        .param("samples", samples)
        .param("seed", seed);
    guarded(base, |rep| {
        check_odd_prime(p)?;
        let f = FqField::with_order(q)?;
        let bad_fq = tower_sampled(
            p,
            r,
            samples,
            seed,
            |g| random_unit(&f, g),
            |g| random_fq(&f, g),
        )?;
        let bad_q = tower_sampled(
            p,
            r,
            samples,
            seed,
            |g| random_rational(g, true),
            |g| random_rational(g, false),
        )?;
        Ok(rep
            .computed(format!(
                "F_{q}: {}/{samples} agree; Q: {}/{samples} agree",
                samples - bad_fq,
                samples - bad_q
            ))
            .claim("levelwise phi_r equals the closed-form specialization")
            .pass_if(samples > 0 && bad_fq == 0 && bad_q == 0))
    })
}

/// `Φ_1(x_0, x_1) = x_0²(1 − a_1x_1²)` against `u² − a_1v²` at
/// `u = x_0, v = x_0x_1` for `p = 2`, over sampled rationals.
pub fn p2_norm_form_check(samples: usize, seed: u64) -> CheckReport {
    let base = CheckReport::new("p2_norm_form", "Remark 3.1.2")
        .param("samples", samples)
        .param("seed", seed);
    guarded(base, |rep| {
        let mut bad = 0;
        for i in 0..samples as u64 {
            let mut rng = point_rng(seed, i);
            let a1 = random_rational(&mut rng, true);
            let (x0, x1) = (
                random_rational(&mut rng, false),
                random_rational(&mut rng, false),
            );
            let spec = PhiSpec::new(2, vec![a1.clone()])?;
            let phi = phi_eval(&spec, &[x0.clone(), x1.clone()])?;
            let v = x0.clone() * x1;
            let form = x0.clone() * x0 - a1 * v.clone() * v;
            bad += usize::from(phi != form);
        }
        Ok(rep
            .computed(format!("{}/{samples} points agree", samples - bad))
            .pass_if(samples > 0 && bad == 0))
    })
}
