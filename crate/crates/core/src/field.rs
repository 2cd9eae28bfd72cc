//! Coefficient fields: the rationals, prime fields F_p and small extension
//! fields F_{p^e} given by an irreducible modulus.
//!
//! Elements of a finite field are stored as `u32` indices whose base-`p`
//! digits are the coordinates over F_p in the power basis `1, u, u^2, ...`
//! where `u` is the class of the variable modulo the irreducible polynomial.
//! Multiplication goes through discrete-log tables, so `p^e` is capped at
//! [`MAX_FIELD_ORDER`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported finite field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fin(u32),
}

impl Scalar {
    pub fn as_fin(&self) -> u32 {
        match self {
            Scalar::Fin(v) => *v,
            Scalar::Rat(_) => panic!("rational scalar in finite-field context"),
        }
    }

    pub fn as_rat(&self) -> &BigRational {
        match self {
            Scalar::Rat(r) => r,
            Scalar::Fin(_) => panic!("finite-field scalar in rational context"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Fin(v) => write!(f, "{}", v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime { p: u32 },
    /// `modulus` is monic of degree `e`, coefficients low-to-high over F_p.
    Finite { p: u32, e: u32, modulus: Vec<u32> },
}

#[derive(Clone, Debug)]
struct Tables {
    p: u32,
    e: u32,
    q: u32,
    // exp[k] = g^k for k in 0..q-1, log[exp[k]] = k; log[0] unused.
    exp: Vec<u32>,
    log: Vec<u32>,
    // frob[j][a] = a^(p^j)
    frob: Vec<Vec<u32>>,
}

/// A field context. All arithmetic on [`Scalar`] values goes through it.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over F_p used only while building tables.
fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    let inv_lead = fp_inv(m[dm], p);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = (lead as u64 * inv_lead as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    fp_pow(a as u64, p as u64 - 2, p as u64) as u32
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(v % p);
        v /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * p + x)
}

fn has_factor_of_degree(f: &[u32], d: u32, p: u32) -> bool {
    // enumerate monic polynomials of degree d
    let count = (p as u64).pow(d);
    for idx in 0..count {
        let mut g = digits(idx as u32, p, d);
        g.push(1);
        if fp_poly_rem(f, &g, p).is_empty() {
            return true;
        }
    }
    false
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        match &spec {
            FieldSpec::Rationals => Ok(Field { spec, tables: None }),
            FieldSpec::Prime { p } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidInput(format!("{} is not prime", p)));
                }
                if *p as u64 > MAX_FIELD_ORDER {
                    return Err(Error::InvalidInput(format!("prime {} too large", p)));
                }
                let tables = Self::build_tables(*p, 1, &[0, 1])?;
                Ok(Field { spec, tables: Some(tables) })
            }
            FieldSpec::Finite { p, e, modulus } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidInput(format!("{} is not prime", p)));
                }
                if *e == 0 || modulus.len() != *e as usize + 1 || modulus[*e as usize] != 1 {
                    return Err(Error::InvalidInput(
                        "modulus must be monic of degree e".into(),
                    ));
                }
                if modulus.iter().any(|&c| c >= *p) {
                    return Err(Error::InvalidInput("modulus coefficient out of range".into()));
                }
                if (*p as u64).checked_pow(*e).is_none_or(|q| q > MAX_FIELD_ORDER) {
                    return Err(Error::InvalidInput("field order too large".into()));
                }
                for d in 1..=(*e / 2) {
                    if has_factor_of_degree(modulus, d, *p) {
                        return Err(Error::InvalidInput(format!(
                            "modulus {:?} is reducible over F_{}",
                            modulus, p
                        )));
                    }
                }
                let tables = Self::build_tables(*p, *e, modulus)?;
                Ok(Field { spec, tables: Some(tables) })
            }
        }
    }

    pub fn rationals() -> Self {
        Field { spec: FieldSpec::Rationals, tables: None }
    }

    fn build_tables(p: u32, e: u32, modulus: &[u32]) -> Result<Tables> {
        let q = p.pow(e);
        let mul_raw = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return (a as u64 * b as u64 % p as u64) as u32;
            }
            let da = digits(a, p, e);
            let db = digits(b, p, e);
            let mut prod = vec![0u32; 2 * e as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = fp_poly_rem(&prod, modulus, p);
            r.resize(e as usize, 0);
            undigits(&r, p)
        };
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        'search: for g in 1..q {
            let mut cur = 1u32;
            for k in 0..(q - 1) {
                if k > 0 && cur == 1 {
                    continue 'search;
                }
                exp[k as usize] = cur;
                cur = mul_raw(cur, g);
            }
            if cur != 1 {
                continue;
            }
            found = true;
            break;
        }
        if !found {
            return Err(Error::InvalidInput("no primitive element; modulus not irreducible".into()));
        }
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let mut frob = Vec::with_capacity(e as usize);
        for j in 0..e {
            let pj = (p as u64).pow(j) % (q as u64 - 1).max(1);
            let mut t = vec![0u32; q as usize];
            for a in 1..q {
                let l = log[a as usize] as u64;
                t[a as usize] = exp[((l * pj) % (q as u64 - 1)) as usize];
            }
            frob.push(t);
        }
        Ok(Tables { p, e, q, exp, log, frob })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_rational(&self) -> bool {
        self.tables.is_none()
    }

    /// Characteristic (0 for the rationals).
    pub fn characteristic(&self) -> u32 {
        self.tables.as_ref().map_or(0, |t| t.p)
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.tables.as_ref().map_or(1, |t| t.e)
    }

    /// Number of elements (`None` for the rationals).
    pub fn order(&self) -> Option<u32> {
        self.tables.as_ref().map(|t| t.q)
    }

    pub fn zero(&self) -> Scalar {
        match self.tables {
            None => Scalar::Rat(BigRational::zero()),
            Some(_) => Scalar::Fin(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.tables {
            None => Scalar::Rat(BigRational::one()),
            Some(_) => Scalar::Fin(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match &self.tables {
            None => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Some(t) => {
                let p = t.p as i64;
                Scalar::Fin((((v % p) + p) % p) as u32)
            }
        }
    }

    pub fn rational(&self, num: i64, den: i64) -> Scalar {
        match self.tables {
            None => Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Some(_) => self.div(&self.from_i64(num), &self.from_i64(den)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fin(v) => *v == 1,
        }
    }

    /// Checks that a scalar belongs to this field.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (a, &self.tables) {
            (Scalar::Rat(_), None) => true,
            (Scalar::Fin(v), Some(t)) => *v < t.q,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                let t = self.tables.as_ref().unwrap();
                Scalar::Fin(Self::fin_add(t, *x, *y))
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    fn fin_add(t: &Tables, x: u32, y: u32) -> u32 {
        if t.e == 1 {
            return (x + y) % t.p;
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..t.e {
            out += ((x % t.p + y % t.p) % t.p) * place;
            x /= t.p;
            y /= t.p;
            place *= t.p;
        }
        out
    }

    fn fin_neg(t: &Tables, x: u32) -> u32 {
        if t.e == 1 {
            return (t.p - x) % t.p;
        }
        let mut x = x;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..t.e {
            out += ((t.p - x % t.p) % t.p) * place;
            x /= t.p;
            place *= t.p;
        }
        out
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Fin(x) => Scalar::Fin(Self::fin_neg(self.tables.as_ref().unwrap(), *x)),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fin(x), Scalar::Fin(y)) => {
                if *x == 0 || *y == 0 {
                    return Scalar::Fin(0);
                }
                let t = self.tables.as_ref().unwrap();
                if t.e == 1 {
                    return Scalar::Fin((*x as u64 * *y as u64 % t.p as u64) as u32);
                }
                let l = (t.log[*x as usize] + t.log[*y as usize]) % (t.q - 1);
                Scalar::Fin(t.exp[l as usize])
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rat(x.recip())
            }
            Scalar::Fin(x) => {
                assert!(*x != 0, "inverse of zero");
                let t = self.tables.as_ref().unwrap();
                let l = (t.q - 1 - t.log[*x as usize]) % (t.q - 1);
                Scalar::Fin(t.exp[l as usize])
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Applies the `power`-th power of the Frobenius `a -> a^p`; negative
    /// powers invert it. Identity on the rationals and prime fields.
    pub fn frobenius(&self, a: &Scalar, power: i64) -> Scalar {
        match (a, &self.tables) {
            (Scalar::Fin(v), Some(t)) if t.e > 1 => {
                let j = power.rem_euclid(t.e as i64) as usize;
                Scalar::Fin(t.frob[j][*v as usize])
            }
            _ => a.clone(),
        }
    }

    /// Coordinates of `a` over the prime field (length `degree()`).
    pub fn prime_coords(&self, a: &Scalar) -> Vec<Scalar> {
        match (a, &self.tables) {
            (Scalar::Fin(v), Some(t)) => digits(*v, t.p, t.e).into_iter().map(Scalar::Fin).collect(),
            _ => vec![a.clone()],
        }
    }

    /// Inverse of [`Field::prime_coords`].
    pub fn from_prime_coords(&self, coords: &[Scalar]) -> Scalar {
        match &self.tables {
            Some(t) => {
                let d: Vec<u32> = coords.iter().map(|c| c.as_fin()).collect();
                Scalar::Fin(undigits(&d, t.p))
            }
            None => coords[0].clone(),
        }
    }

    /// Basis of the field over its prime field: `1, u, ..., u^{e-1}`.
    pub fn prime_basis(&self) -> Vec<Scalar> {
        match &self.tables {
            Some(t) => (0..t.e).map(|j| Scalar::Fin(t.p.pow(j))).collect(),
            None => vec![self.one()],
        }
    }

    /// The prime subfield as a field context of its own.
    pub fn prime_field(&self) -> Field {
        match &self.tables {
            None => Field::rationals(),
            Some(t) if t.e == 1 => self.clone(),
            Some(t) => Field::new(FieldSpec::Prime { p: t.p }).expect("prime subfield"),
        }
    }

    /// All elements (finite fields only).
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.tables.as_ref().map(|t| (0..t.q).map(Scalar::Fin).collect())
    }

    /// A deterministic generator of the multiplicative group (finite fields).
    pub fn primitive_element(&self) -> Option<Scalar> {
        self.tables.as_ref().map(|t| Scalar::Fin(if t.q == 2 { 1 } else { t.exp[1] }))
    }

    /// Renders a scalar in the canonical JSON form.
    pub fn to_json(&self, a: &Scalar) -> serde_json::Value {
        match (a, &self.tables) {
            (Scalar::Rat(r), _) => match r.is_integer().then(|| r.numer().to_i64()).flatten() {
                Some(i) => serde_json::Value::from(i),
                None => serde_json::Value::String(format!("{}/{}", r.numer(), r.denom())),
            },
            (Scalar::Fin(v), Some(t)) if t.e == 1 => serde_json::Value::from(*v),
            (Scalar::Fin(v), Some(t)) => {
                serde_json::Value::from(digits(*v, t.p, t.e))
            }
            (Scalar::Fin(v), None) => serde_json::Value::from(*v),
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<Scalar> {
        use serde_json::Value;
        match (&self.tables, v) {
            (None, Value::String(s)) => parse_rational(s).map(Scalar::Rat),
            (None, Value::Number(n)) => n
                .as_i64()
                .map(|i| Scalar::Rat(BigRational::from_integer(BigInt::from(i))))
                .ok_or_else(|| Error::Parse(format!("bad rational {}", n))),
            (Some(t), Value::Number(n)) if t.e == 1 => {
                let i = n.as_i64().ok_or_else(|| Error::Parse(format!("bad element {}", n)))?;
                Ok(self.from_i64(i))
            }
            (Some(t), Value::Array(items)) if items.len() == t.e as usize => {
                let mut d = Vec::with_capacity(items.len());
                for it in items {
                    let i = it
                        .as_i64()
                        .ok_or_else(|| Error::Parse(format!("bad coordinate {}", it)))?;
                    d.push(i.rem_euclid(t.p as i64) as u32);
                }
                Ok(Scalar::Fin(undigits(&d, t.p)))
            }
            (Some(t), Value::Number(n)) if t.e > 1 => {
                // plain integers embed through the prime field
                let i = n.as_i64().ok_or_else(|| Error::Parse(format!("bad element {}", n)))?;
                Ok(Scalar::Fin(i.rem_euclid(t.p as i64) as u32))
            }
            _ => Err(Error::Parse(format!("cannot parse field element {}", v))),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {:?}", s));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Rough size of a scalar, used to keep random generation tame.
pub fn scalar_height(a: &Scalar) -> u64 {
    match a {
        Scalar::Rat(r) => r.numer().abs().bits() + r.denom().bits(),
        Scalar::Fin(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }).unwrap()
    }

    #[test]
    fn f4_frobenius_squares() {
        let f = f4();
        let u = Scalar::Fin(2); // the class of the variable
        let u2 = f.mul(&u, &u);
        assert_eq!(f.frobenius(&u, 1), u2);
        assert_eq!(f.frobenius(&u, 2), u);
        assert_eq!(f.frobenius(&f.frobenius(&u, 1), -1), u);
        // u^2 = u + 1
        assert_eq!(u2, Scalar::Fin(3));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(Field::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 0, 1] }).is_err());
        assert!(Field::new(FieldSpec::Prime { p: 9 }).is_err());
    }

    #[test]
    fn inverses_in_f9() {
        let f = Field::new(FieldSpec::Finite { p: 3, e: 2, modulus: vec![1, 0, 1] }).unwrap();
        for a in f.elements().unwrap().into_iter().skip(1) {
            assert!(f.is_one(&f.mul(&a, &f.inv(&a))));
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        }
    }

    #[test]
    fn rational_json_roundtrip() {
        let f = Field::rationals();
        let a = f.rational(-3, 6);
        let j = f.to_json(&a);
        assert_eq!(j, serde_json::json!("-1/2"));
        assert_eq!(f.from_json(&j).unwrap(), a);
        assert!(f.from_json(&serde_json::json!("1/0")).is_err());
    }
}
