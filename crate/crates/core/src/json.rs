//! JSON encodings of rings, objects, morphisms, presentations and chains.
//!
//! Rings are `{"field": F, "sigma_power": k, "omega": [c0, c1, ...]}` with
//! `F` one of `{"kind": "rational"}`, `{"kind": "prime", "p": p}` or
//! `{"kind": "finite", "p": p, "e": e, "modulus": [...]}`. Matrices use
//! [`TwistedMatrix::to_json`]. Any document may carry its ring under the
//! key `"ring"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::ChainModule;
use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::field::FieldSpec;
use crate::gamma::GammaModuleData;
use crate::homotopy::HomotopyWitness;
use crate::matrix::TwistedMatrix;
use crate::presentation::ModulePresentation;
use crate::ring::{Ring, RingRef};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FieldJson {
    Rational,
    Prime { p: u32 },
    Finite { p: u32, e: u32, modulus: Vec<u32> },
}

impl From<&FieldSpec> for FieldJson {
    fn from(s: &FieldSpec) -> Self {
        match s {
            FieldSpec::Rationals => FieldJson::Rational,
            FieldSpec::Prime { p } => FieldJson::Prime { p: *p },
            FieldSpec::Finite { p, e, modulus } => FieldJson::Finite { p: *p, e: *e, modulus: modulus.clone() },
        }
    }
}

impl From<FieldJson> for FieldSpec {
    fn from(f: FieldJson) -> Self {
        match f {
            FieldJson::Rational => FieldSpec::Rationals,
            FieldJson::Prime { p } => FieldSpec::Prime { p },
            FieldJson::Finite { p, e, modulus } => FieldSpec::Finite { p, e, modulus },
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| Error::Parse(format!("field {key:?} must be an array")))
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn ring_to_json(ring: &RingRef) -> Value {
    let f = ring.field();
    json!({
        "field": serde_json::to_value(FieldJson::from(f.spec())).expect("field spec serializes"),
        "sigma_power": ring.frobenius_power(),
        "omega": ring.omega().coeffs().iter().map(|c| f.to_json(c)).collect::<Vec<_>>(),
    })
}

pub fn ring_from_json(v: &Value) -> Result<RingRef> {
    let spec: FieldJson = serde_json::from_value(field(v, "field")?.clone()).map_err(parse_err)?;
    let spec = FieldSpec::from(spec);
    let k = v.get("sigma_power").map_or(Some(0), Value::as_u64).ok_or_else(|| Error::Parse("bad sigma_power".into()))?;
    let f = crate::field::Field::new(spec)?;
    let omega = array(v, "omega")?.iter().map(|c| f.from_json(c)).collect::<Result<Vec<_>>>()?;
    Ring::with_field(f, k as u32, omega)
}

/// The ring of a document: its `"ring"` entry if present, else `fallback`.
/// Both present and different is an error.
pub fn document_ring(v: &Value, fallback: Option<&RingRef>) -> Result<RingRef> {
    match (v.get("ring"), fallback) {
        (Some(r), Some(fb)) => {
            let r = ring_from_json(r)?;
            if !crate::ring::same_ring(&r, fb) {
                return Err(Error::IncompatibleRing);
            }
            Ok(fb.clone())
        }
        (Some(r), None) => ring_from_json(r),
        (None, Some(fb)) => Ok(fb.clone()),
        (None, None) => Err(Error::Parse("no ring given (use --ring or a \"ring\" entry)".into())),
    }
}

fn matrices(ring: &RingRef, v: &Value, key: &str) -> Result<Vec<TwistedMatrix>> {
    array(v, key)?.iter().map(|m| TwistedMatrix::from_json(ring, m)).collect()
}

pub fn object_to_json(x: &NFactorization) -> Value {
    json!({
        "n": x.n(),
        "ranks": x.ranks(),
        "maps": x.maps().iter().map(TwistedMatrix::to_json).collect::<Vec<_>>(),
    })
}

/// Parses and validates an object; the rotation identities must hold.
pub fn object_from_json(ring: &RingRef, v: &Value) -> Result<NFactorization> {
    let maps = matrices(ring, v, "maps")?;
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != maps.len() {
            return Err(Error::Parse(format!("n = {n} but {} maps given", maps.len())));
        }
    }
    let x = NFactorization::validated(ring, maps)?;
    if let Some(ranks) = v.get("ranks").and_then(Value::as_array) {
        let ranks: Vec<usize> = ranks.iter().filter_map(Value::as_u64).map(|r| r as usize).collect();
        if ranks != x.ranks() {
            return Err(Error::Parse(format!("declared ranks {:?} do not match the maps {:?}", ranks, x.ranks())));
        }
    }
    Ok(x)
}

/// Parses an object without checking the rotation identities.
pub fn object_from_json_unchecked(ring: &RingRef, v: &Value) -> Result<NFactorization> {
    NFactorization::new(ring, matrices(ring, v, "maps")?)
}

pub fn morphism_to_json(f: &FactorMorphism) -> Value {
    json!({
        "source": object_to_json(f.source()),
        "target": object_to_json(f.target()),
        "components": f.components().iter().map(TwistedMatrix::to_json).collect::<Vec<_>>(),
    })
}

/// A morphism document carries its source and target unless they are
/// supplied by the caller.
pub fn morphism_from_json(
    ring: &RingRef,
    v: &Value,
    source: Option<&NFactorization>,
    target: Option<&NFactorization>,
) -> Result<FactorMorphism> {
    let src = match source {
        Some(x) => x.clone(),
        None => object_from_json(ring, field(v, "source")?)?,
    };
    let tgt = match target {
        Some(y) => y.clone(),
        None => object_from_json(ring, field(v, "target")?)?,
    };
    FactorMorphism::new(&src, &tgt, matrices(ring, v, "components")?)
}

pub fn witness_to_json(w: &HomotopyWitness) -> Value {
    json!({ "maps": w.maps.iter().map(TwistedMatrix::to_json).collect::<Vec<_>>() })
}

pub fn witness_from_json(ring: &RingRef, v: &Value) -> Result<HomotopyWitness> {
    Ok(HomotopyWitness { maps: matrices(ring, v, "maps")? })
}

pub fn presentation_to_json(p: &ModulePresentation) -> Value {
    json!({ "generators": p.generators(), "relations": p.relations().to_json() })
}

pub fn presentation_from_json(ring: &RingRef, v: &Value) -> Result<ModulePresentation> {
    let g = field(v, "generators")?.as_u64().ok_or_else(|| Error::Parse("bad generator count".into()))? as usize;
    let rel = match v.get("relations") {
        Some(r) => TwistedMatrix::from_json(ring, r)?,
        None => TwistedMatrix::zero(ring, 0, g, 0),
    };
    ModulePresentation::new(ring, g, rel)
}

pub fn chain_to_json(c: &ChainModule) -> Value {
    json!({
        "modules": c.modules().iter().map(presentation_to_json).collect::<Vec<_>>(),
        "maps": c.maps().iter().map(TwistedMatrix::to_json).collect::<Vec<_>>(),
    })
}

pub fn chain_from_json(ring: &RingRef, v: &Value) -> Result<ChainModule> {
    let modules = array(v, "modules")?.iter().map(|m| presentation_from_json(ring, m)).collect::<Result<Vec<_>>>()?;
    ChainModule::new(ring, modules, matrices(ring, v, "maps")?)
}

/// `{"ranks": [...], "maps": [[f_11, f_12, ...], ...]}` with `null` on the diagonal.
pub fn gamma_to_json(g: &GammaModuleData) -> Value {
    let n = g.n();
    let grid: Vec<Vec<Value>> = (1..=n)
        .map(|i| (1..=n).map(|j| if i == j { Value::Null } else { g.f(i, j).to_json() }).collect())
        .collect();
    json!({ "ranks": (1..=n).map(|p| g.rank(p)).collect::<Vec<_>>(), "maps": grid })
}

pub fn gamma_from_json(ring: &RingRef, v: &Value) -> Result<GammaModuleData> {
    let ranks: Vec<usize> = array(v, "ranks")?
        .iter()
        .map(|r| r.as_u64().map(|r| r as usize).ok_or_else(|| Error::Parse("bad rank".into())))
        .collect::<Result<_>>()?;
    let rows = array(v, "maps")?;
    let mut grid = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::Parse("structure map row is not an array".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for (j, m) in row.iter().enumerate() {
            out.push(if m.is_null() || i == j {
                TwistedMatrix::identity(ring, ranks.get(i).copied().unwrap_or(0))
            } else {
                TwistedMatrix::from_json(ring, m)?
            });
        }
        grid.push(out);
    }
    GammaModuleData::new(ring, ranks, grid)
}

/// Attaches the ring to a document.
pub fn with_ring(ring: &RingRef, mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("ring".into(), ring_to_json(ring));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::cok0;
    use crate::factorization::tests::qx;
    use crate::field::Scalar;
    use crate::random::{self, Bounds};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> RingRef {
        Ring::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }, 1, vec![
            Scalar::Fin(0),
            Scalar::Fin(0),
            Scalar::Fin(1),
        ])
        .unwrap()
    }

    #[test]
    fn ring_round_trip() {
        for r in [qx(&[0, 0, -1, 1]), f4()] {
            let back = ring_from_json(&ring_to_json(&r)).unwrap();
            assert!(crate::ring::same_ring(&r, &back));
        }
        let v = parse(r#"{"field": {"kind": "prime", "p": 5}, "sigma_power": 0, "omega": [0, 0, 1]}"#).unwrap();
        assert_eq!(ring_from_json(&v).unwrap().omega_degree(), 2);
        let bad = parse(r#"{"field": {"kind": "prime", "p": 4}, "omega": [0, 1]}"#).unwrap();
        assert!(ring_from_json(&bad).is_err());
    }

    #[test]
    fn object_and_morphism_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for r in [qx(&[0, 0, 0, 1]), f4()] {
            let x = random::random_object(&r, Bounds { n: 3, max_rank: 2, max_deg: 2 }, &mut rng);
            let text = serde_json::to_string(&with_ring(&r, object_to_json(&x))).unwrap();
            let v = parse(&text).unwrap();
            let ring = document_ring(&v, None).unwrap();
            assert_eq!(object_from_json(&ring, &v).unwrap(), x);
            let (_, f, _) = random::conjugate(&x, 1, &mut rng);
            assert_eq!(morphism_from_json(&r, &morphism_to_json(&f), None, None).unwrap(), f);
        }
    }

    #[test]
    fn invalid_objects_are_rejected() {
        let r = qx(&[0, 0, 1]);
        let v = parse(
            r#"{"n": 2, "maps": [
                {"rows": 1, "cols": 1, "twist": 0, "entries": [[[0, 1]]]},
                {"rows": 1, "cols": 1, "twist": 1, "entries": [[[1]]]}]}"#,
        )
        .unwrap();
        assert!(object_from_json(&r, &v).is_err());
        assert!(object_from_json_unchecked(&r, &v).is_ok());
        assert!(document_ring(&with_ring(&f4(), json!({})), Some(&r)).is_err());
    }

    #[test]
    fn chain_round_trip() {
        let r = qx(&[0, 0, 0, 1]);
        let c = cok0(&random::monomial_object(&r, &[1, 1, 1])).unwrap();
        assert_eq!(chain_from_json(&r, &chain_to_json(&c)).unwrap(), c);
        let g = crate::gamma::phi(&random::monomial_object(&r, &[1, 2])).unwrap();
        assert_eq!(gamma_from_json(&r, &gamma_to_json(&g)).unwrap(), g);
    }
}
