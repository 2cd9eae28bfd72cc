//! The base ring `A`: a univariate polynomial ring `k[x]`, or a skew
//! polynomial ring `k[x; τ]` with `x·c = τ(c)·x` for a power `τ` of the
//! Frobenius of a finite field `k`, together with a regular normal element
//! `ω` and the automorphism `σ` it induces (`ω·a = σ(a)·ω`).
//!
//! In the skew case `ω` must be a monomial `c·x^m` with `τ(c) = c`; then `σ`
//! acts on coefficients as `τ^m` and fixes `x`. In the commutative case `σ`
//! is the identity.

use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};

/// Dense polynomial, coefficients low-to-high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// Builds a polynomial, trimming trailing zeros.
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for zero, handy in comparisons.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.coeffs.get(i)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }
}

#[derive(Debug)]
pub struct Ring {
    field: Field,
    frobenius_power: u32,
    omega: Poly,
    sigma_frobenius: u32,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.frobenius_power == other.frobenius_power
            && self.omega == other.omega
    }
}
impl Eq for Ring {}

pub type RingRef = Arc<Ring>;

impl Ring {
    /// Builds `k[x; Frob^frobenius_power]` with normal element `omega`.
    pub fn new(field_spec: FieldSpec, frobenius_power: u32, omega: Vec<Scalar>) -> Result<RingRef> {
        let field = Field::new(field_spec)?;
        Self::with_field(field, frobenius_power, omega)
    }

    pub fn with_field(field: Field, frobenius_power: u32, omega: Vec<Scalar>) -> Result<RingRef> {
        let e = field.degree();
        if frobenius_power >= e.max(1) && frobenius_power != 0 {
            return Err(Error::InvalidInput(format!(
                "frobenius power {} must be below the field degree {}",
                frobenius_power, e
            )));
        }
        if omega.iter().any(|c| !field.contains(c)) {
            return Err(Error::InvalidInput("omega coefficient outside the field".into()));
        }
        let omega = Poly::from_coeffs(&field, omega);
        if omega.is_zero() {
            return Err(Error::InvalidInput("omega must be nonzero (regular)".into()));
        }
        let m = omega.degree().unwrap() as u32;
        let sigma_frobenius = if e > 1 { (frobenius_power * m) % e } else { 0 };
        let ring = Ring { field, frobenius_power, omega, sigma_frobenius };
        if !ring.is_commutative() {
            let lead = ring.omega.lead().unwrap().clone();
            let monomial = ring.omega.coeffs[..m as usize].iter().all(|c| ring.field.is_zero(c));
            if !monomial {
                return Err(Error::InvalidInput(
                    "in a skew polynomial ring omega must be a monomial c*x^m".into(),
                ));
            }
            if ring.field.frobenius(&lead, frobenius_power as i64) != lead {
                return Err(Error::InvalidInput(
                    "the coefficient of omega must be fixed by the skew automorphism".into(),
                ));
            }
        }
        ring.check_normal()?;
        Ok(Arc::new(ring))
    }

    /// Normality on generators and `σ(ω) = ω`.
    fn check_normal(&self) -> Result<()> {
        let w = &self.omega;
        let x = self.x();
        let mut gens = vec![x];
        if let Some(u) = self.field.primitive_element() {
            gens.push(self.constant(u));
        }
        for g in gens {
            if self.mul(w, &g) != self.mul(&self.apply_sigma(&g, 1), w) {
                return Err(Error::InvalidInput("omega is not normal".into()));
            }
        }
        if self.apply_sigma(w, 1) != *w {
            return Err(Error::InvalidInput("sigma(omega) != omega".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn omega(&self) -> &Poly {
        &self.omega
    }

    pub fn omega_degree(&self) -> usize {
        self.omega.degree().unwrap()
    }

    /// Power of the Frobenius defining the skew multiplication.
    pub fn frobenius_power(&self) -> u32 {
        self.frobenius_power
    }

    /// Power of the Frobenius by which `σ` acts on coefficients.
    pub fn sigma_frobenius(&self) -> u32 {
        self.sigma_frobenius
    }

    pub fn is_commutative(&self) -> bool {
        self.frobenius_power == 0
    }

    /// True when `σ` is the identity.
    pub fn sigma_is_identity(&self) -> bool {
        self.sigma_frobenius == 0
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn x(&self) -> Poly {
        self.monomial(self.field.one(), 1)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::from_coeffs(&self.field, vec![c])
    }

    pub fn monomial(&self, c: Scalar, d: usize) -> Poly {
        let mut v = vec![self.field.zero(); d];
        v.push(c);
        Poly::from_coeffs(&self.field, v)
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(&self.field, coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn poly(&self, coeffs: Vec<Scalar>) -> Poly {
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn is_one(&self, a: &Poly) -> bool {
        a.coeffs.len() == 1 && self.field.is_one(&a.coeffs[0])
    }

    /// Units of `A` are the nonzero constants.
    pub fn is_unit(&self, a: &Poly) -> bool {
        a.coeffs.len() == 1
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(f, out)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    /// `c·a` for a scalar `c` on the left.
    pub fn scale_left(&self, c: &Scalar, a: &Poly) -> Poly {
        Poly::from_coeffs(&self.field, a.coeffs.iter().map(|x| self.field.mul(c, x)).collect())
    }

    /// `(c x^d)·b`, the left multiplication by a monomial.
    fn monomial_times(&self, c: &Scalar, d: usize, b: &Poly) -> Poly {
        let f = &self.field;
        let mut out = vec![f.zero(); d];
        let tw = self.frobenius_power as i64 * d as i64;
        for bj in &b.coeffs {
            out.push(f.mul(c, &f.frobenius(bj, tw)));
        }
        Poly::from_coeffs(f, out)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        let skew = !self.is_commutative();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let bj = if skew { f.frobenius(bj, self.frobenius_power as i64 * i as i64) } else { bj.clone() };
                let t = f.mul(ai, &bj);
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        Poly::from_coeffs(f, out)
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Coefficientwise `σ^power`; fixes `x`.
    pub fn apply_sigma(&self, a: &Poly, power: i64) -> Poly {
        if self.sigma_frobenius == 0 || power == 0 {
            return a.clone();
        }
        let k = self.sigma_frobenius as i64 * power;
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.frobenius(c, k)).collect() }
    }

    /// Left division: `a = q·b + r` with `deg r < deg b`.
    pub fn left_divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let db = b.degree().unwrap();
        let blead = b.lead().unwrap();
        let mut r = a.clone();
        let mut q = vec![f.zero(); a.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let d = dr - db;
            let tw = f.frobenius(blead, self.frobenius_power as i64 * d as i64);
            let t = f.div(r.lead().unwrap(), &tw);
            let sub = self.monomial_times(&t, d, b);
            r = self.sub(&r, &sub);
            q[d] = f.add(&q[d], &t);
            debug_assert!(r.degree().is_none_or(|x| x < dr));
        }
        Ok((Poly::from_coeffs(f, q), r))
    }

    /// Exact left quotient `a / b` if `b` divides `a` on the right (`a = q·b`).
    pub fn exact_left_quotient(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        let (q, r) = self.left_divmod(a, b).ok()?;
        r.is_zero().then_some(q)
    }

    /// Canonical representative modulo the two-sided ideal `(ω)`.
    pub fn quotient_reduce(&self, a: &Poly) -> Poly {
        self.left_divmod(a, &self.omega).expect("omega nonzero").1
    }

    /// Scales a nonzero polynomial on the left so that it is monic.
    pub fn monic(&self, a: &Poly) -> (Poly, Scalar) {
        match a.lead() {
            None => (a.clone(), self.field.one()),
            Some(l) => {
                let inv = self.field.inv(l);
                (self.scale_left(&inv, a), inv)
            }
        }
    }

    /// Commutative gcd (monic), with Bezout coefficients `s·a + t·b = g`.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        debug_assert!(self.is_commutative());
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.left_divmod(&r0, &r1).unwrap();
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let (g, inv) = self.monic(&r0);
        (g, self.scale_left(&inv, &s0), self.scale_left(&inv, &t0))
    }

    pub fn random_poly<R: rand::Rng + ?Sized>(&self, rng: &mut R, max_deg: usize) -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs = (0..=deg).map(|_| self.random_scalar(rng)).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// Small random scalar: integers in `[-3, 3]` over the rationals,
    /// uniform over finite fields.
    pub fn random_scalar<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self.field.order() {
            None => self.field.from_i64(rng.gen_range(-3..=3)),
            Some(q) => Scalar::Fin(rng.gen_range(0..q)),
        }
    }

    pub fn random_nonzero_scalar<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random_scalar(rng);
            if !self.field.is_zero(&s) {
                return s;
            }
        }
    }

    pub fn fmt_poly(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = match self.field.to_json(c) {
                serde_json::Value::String(s) => s.trim_end_matches("/1").to_string(),
                other => other.to_string(),
            };
            let mon = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{}", i),
            };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mon,
                _ => format!("{}*{}", cs, mon),
            });
        }
        terms.join(" + ")
    }
}

/// An element of a specific ring; arithmetic checks ring compatibility.
#[derive(Clone, Debug)]
pub struct RingElem {
    ring: RingRef,
    poly: Poly,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.poly == other.poly
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl RingElem {
    pub fn new(ring: &RingRef, poly: Poly) -> Self {
        RingElem { ring: ring.clone(), poly }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::IncompatibleRing)
        }
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem::new(&self.ring, self.ring.add(&self.poly, &other.poly)))
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem::new(&self.ring, self.ring.mul(&self.poly, &other.poly)))
    }

    pub fn apply_sigma(&self, power: i64) -> RingElem {
        RingElem::new(&self.ring, self.ring.apply_sigma(&self.poly, power))
    }

    pub fn left_divmod(&self, other: &RingElem) -> Result<(RingElem, RingElem)> {
        self.check(other)?;
        let (q, r) = self.ring.left_divmod(&self.poly, &other.poly)?;
        Ok((RingElem::new(&self.ring, q), RingElem::new(&self.ring, r)))
    }

    pub fn quotient_reduce(&self) -> RingElem {
        RingElem::new(&self.ring, self.ring.quotient_reduce(&self.poly))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_poly(&self.poly))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qx(omega: &[i64]) -> RingRef {
        let f = Field::rationals();
        let w = omega.iter().map(|&c| f.from_i64(c)).collect();
        Ring::with_field(f, 0, w).unwrap()
    }

    fn f4_skew(omega_deg: usize) -> RingRef {
        let spec = FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] };
        let mut w = vec![Scalar::Fin(0); omega_deg];
        w.push(Scalar::Fin(1));
        Ring::new(spec, 1, w).unwrap()
    }

    #[test]
    fn skew_relation_x_times_u() {
        let r = f4_skew(1);
        let u = r.constant(Scalar::Fin(2));
        let xu = r.mul(&r.x(), &u);
        let u2 = r.field().mul(&Scalar::Fin(2), &Scalar::Fin(2));
        assert_eq!(xu, r.monomial(u2, 1));
    }

    #[test]
    fn skew_x2_times_ux() {
        let r = f4_skew(1);
        let ux = r.monomial(Scalar::Fin(2), 1);
        let x2 = r.monomial(Scalar::Fin(1), 2);
        // Frob^2 = id on F_4
        assert_eq!(r.mul(&x2, &ux), r.monomial(Scalar::Fin(2), 3));
    }

    #[test]
    fn commutative_difference_of_squares() {
        let r = qx(&[0, 0, 1]);
        let a = r.from_ints(&[1, 1]);
        let b = r.from_ints(&[-1, 1]);
        assert_eq!(r.mul(&a, &b), r.from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn sigma_examples() {
        let r = f4_skew(1);
        let x3 = r.monomial(Scalar::Fin(1), 3);
        assert_eq!(r.apply_sigma(&x3, 5), x3);
        let u = r.constant(Scalar::Fin(2));
        assert_eq!(r.apply_sigma(&u, 1), r.constant(Scalar::Fin(3)));
        assert_eq!(r.apply_sigma(r.omega(), 1), *r.omega());
        // ω = x^2 induces the identity on F_4 even though the ring is skew
        let r2 = f4_skew(2);
        assert!(r2.sigma_is_identity());
        assert!(!r2.is_commutative());
    }

    #[test]
    fn division_examples() {
        let r = qx(&[0, 0, 0, 1]);
        let (q, rem) = r.left_divmod(&r.from_ints(&[0, 0, 0, 1]), &r.x()).unwrap();
        assert_eq!(q, r.from_ints(&[0, 0, 1]));
        assert!(rem.is_zero());
        let (q, rem) = r.left_divmod(&r.from_ints(&[1, 0, 1]), &r.from_ints(&[1, 1])).unwrap();
        assert_eq!(q, r.from_ints(&[-1, 1]));
        assert_eq!(rem, r.from_ints(&[2]));
        assert_eq!(r.left_divmod(&r.one(), &r.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn quotient_reduce_examples() {
        let r = qx(&[0, 0, 0, 1]);
        assert!(r.quotient_reduce(r.omega()).is_zero());
        assert_eq!(r.quotient_reduce(&r.from_ints(&[0, 1, 0, 1])), r.x());
    }

    #[test]
    fn rejects_non_normal_skew_omega() {
        let spec = FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] };
        // x + 1 is not normal in F_4[x; Frob]
        assert!(Ring::new(spec.clone(), 1, vec![Scalar::Fin(1), Scalar::Fin(1)]).is_err());
        // u*x: Frob(u) != u
        assert!(Ring::new(spec, 1, vec![Scalar::Fin(0), Scalar::Fin(2)]).is_err());
        assert!(Ring::new(FieldSpec::Rationals, 0, vec![]).is_err());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = RingElem::new(&qx(&[0, 1]), qx(&[0, 1]).x());
        let b = RingElem::new(&f4_skew(1), f4_skew(1).x());
        assert_eq!(a.mul(&b), Err(Error::IncompatibleRing));
    }

    #[test]
    fn normality_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in [f4_skew(1), f4_skew(2), qx(&[0, 0, -1, 1])] {
            for _ in 0..1000 {
                let a = r.random_poly(&mut rng, 5);
                assert_eq!(r.mul(r.omega(), &a), r.mul(&r.apply_sigma(&a, 1), r.omega()));
            }
        }
    }
}
