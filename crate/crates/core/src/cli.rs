//! Command implementations behind the `nfold` binary. Each command takes
//! parsed JSON documents and returns a report with a JSON body, a short
//! human summary and an outcome that maps to the process exit code.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chain::{self, ChainIsoVerdict};
use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::functors::{self, Composite, Functor};
use crate::gamma;
use crate::homotopy::{self, HomotopyVerdict};
use crate::json;
use crate::laws::{self, Scenario};
use crate::matrix::poly_to_json;
use crate::random::{self, Bounds};
use crate::recollement::Recollement;
use crate::ring::RingRef;
use crate::stable::{self, NullClass};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_BOUNDED: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    PropertyFailure,
    /// The answer rests on a degree-bounded search.
    Bounded,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => EXIT_PASS,
            Outcome::PropertyFailure => EXIT_PROPERTY_FAILURE,
            Outcome::Bounded => EXIT_BOUNDED,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommandReport {
    pub outcome: Outcome,
    pub summary: String,
    pub json: Value,
}

impl CommandReport {
    fn new(outcome: Outcome, summary: impl Into<String>, json: Value) -> Self {
        CommandReport { outcome, summary: summary.into(), json }
    }

    /// A report whose body is a document over `ring`, printed as its summary.
    fn data(ring: &RingRef, json: Value) -> Self {
        let json = json::with_ring(ring, json);
        let summary = serde_json::to_string_pretty(&json).expect("JSON values serialize");
        CommandReport { outcome: Outcome::Pass, summary, json }
    }
}

pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        Error::Internal(_) => EXIT_PROPERTY_FAILURE,
        _ => EXIT_INPUT_ERROR,
    }
}

fn verdict_json(v: &HomotopyVerdict) -> Value {
    match v {
        HomotopyVerdict::Witness(w) => json!({"null_homotopic": true, "definitive": true, "witness": json::witness_to_json(w)}),
        HomotopyVerdict::NoWitness => json!({"null_homotopic": false, "definitive": true}),
        HomotopyVerdict::NoWitnessUpToDegree(d) => {
            json!({"null_homotopic": false, "definitive": false, "searched_degree": d})
        }
    }
}

fn verdict_outcome(v: &HomotopyVerdict) -> Outcome {
    if v.is_definitive() {
        Outcome::Pass
    } else {
        Outcome::Bounded
    }
}

fn verdict_line(v: &HomotopyVerdict) -> String {
    match v {
        HomotopyVerdict::Witness(_) => "null-homotopic (witness re-verified)".into(),
        HomotopyVerdict::NoWitness => "not null-homotopic".into(),
        HomotopyVerdict::NoWitnessUpToDegree(d) => format!("no witness of degree ≤ {d} (bounded search)"),
    }
}

pub fn cmd_validate(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let x = json::object_from_json_unchecked(ring, doc)?;
    let rep = x.validate();
    let failures: Vec<String> = rep.failures.iter().map(ToString::to_string).collect();
    let body = json!({"valid": rep.is_valid(), "n": x.n(), "ranks": x.ranks(), "failures": failures});
    if rep.is_valid() {
        Ok(CommandReport::new(Outcome::Pass, format!("valid {}-fold factorization, ranks {:?}", x.n(), x.ranks()), body))
    } else {
        Ok(CommandReport::new(Outcome::PropertyFailure, format!("invalid: {}", failures.join("; ")), body))
    }
}

/// Elementary functors by name: `shift`, `twist` (take `power`), `face`,
/// `degeneracy` (take `index`), and the recollement composites `inc`,
/// `inc-left`, `inc-right`, `quotient`, `left-section`, `right-section`
/// (take `n`, `k`).
pub fn functor_by_name(name: &str, power: i64, index: usize, n: usize, k: usize) -> Result<Composite> {
    let single = |f| Ok(Composite(vec![f]));
    match name {
        "shift" => single(Functor::Shift(power)),
        "twist" => single(Functor::Twist(power)),
        "face" => single(Functor::Face(index)),
        "degeneracy" => single(Functor::Degeneracy(index)),
        _ => {
            let r = Recollement::new(n, k)?;
            match name {
                "inc" => Ok(r.inc()),
                "inc-left" => Ok(r.inc_left()),
                "inc-right" => Ok(r.inc_right()),
                "quotient" => Ok(r.quotient()),
                "left-section" => Ok(r.left_section()),
                "right-section" => Ok(r.right_section()),
                _ => Err(Error::InvalidInput(format!("unknown functor {name:?}"))),
            }
        }
    }
}

/// Applies a functor to an object or, if the document has `components`,
/// to a morphism.
pub fn cmd_functor(ring: &RingRef, functor: &Composite, doc: &Value) -> Result<CommandReport> {
    if doc.get("components").is_some() {
        let f = json::morphism_from_json(ring, doc, None, None)?;
        let g = functor.apply_morphism(&f)?;
        if !g.is_valid() {
            return Err(Error::Internal(format!("{} did not produce a morphism", functor.describe())));
        }
        Ok(CommandReport::data(ring, json::morphism_to_json(&g)))
    } else {
        let x = json::object_from_json(ring, doc)?;
        let y = functor.apply(&x)?;
        if !y.is_valid() {
            return Err(Error::Internal(format!("{} did not produce a factorization", functor.describe())));
        }
        Ok(CommandReport::data(ring, json::object_to_json(&y)))
    }
}

/// `θ^i(A^m)` in `F_n`.
pub fn cmd_theta(ring: &RingRef, n: usize, i: usize, m: usize) -> Result<CommandReport> {
    Ok(CommandReport::data(ring, json::object_to_json(&functors::theta(ring, n, i, m)?)))
}

pub fn cmd_homotopy(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let f = json::morphism_from_json(ring, doc, None, None)?;
    let v = homotopy::is_p_null_homotopic(&f)?;
    let mut body = verdict_json(&v);
    let mut outcome = verdict_outcome(&v);
    let mut summary = verdict_line(&v);
    let through = homotopy::factors_through_trivials(&f)?;
    body["factors_through_trivials"] = json!(through.is_some());
    if v.is_definitive() && through.is_some() != v.is_null() {
        outcome = Outcome::PropertyFailure;
        summary.push_str("; disagrees with the factorization through trivial objects");
    }
    Ok(CommandReport::new(outcome, summary, body))
}

pub fn cmd_stably_zero(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let x = json::object_from_json(ring, doc)?;
    let v = homotopy::is_stably_zero(&x)?;
    let summary = format!("identity: {}", verdict_line(&v));
    Ok(CommandReport::new(verdict_outcome(&v), summary, verdict_json(&v)))
}

pub fn cmd_stable_hom(ring: &RingRef, x: &Value, y: &Value, class: NullClass) -> Result<CommandReport> {
    let (x, y) = (json::object_from_json(ring, x)?, json::object_from_json(ring, y)?);
    let rep = stable::stable_hom(&x, &y, class)?;
    let factors: Vec<Value> = rep.invariant_factors.iter().map(|p| poly_to_json(ring, p)).collect();
    let factor_text: Vec<String> = rep.invariant_factors.iter().map(|p| ring.fmt_poly(p)).collect();
    let body = json!({
        "hom_rank": rep.hom_rank,
        "invariant_factors": factors,
        "k_dimension": rep.k_dimension,
        "omega_torsion": rep.omega_torsion,
        "representatives": rep.representatives.iter().map(json::morphism_to_json).collect::<Vec<_>>(),
    });
    let dim = rep.k_dimension.map_or("infinite".to_string(), |d| d.to_string());
    let summary = format!(
        "Hom rank {}; stable quotient ≅ {} (dimension {dim})",
        rep.hom_rank,
        if factor_text.is_empty() { "0".to_string() } else { factor_text.iter().map(|f| format!("A/({f})")).collect::<Vec<_>>().join(" ⊕ ") }
    );
    let outcome = if rep.omega_torsion { Outcome::Pass } else { Outcome::PropertyFailure };
    Ok(CommandReport::new(outcome, summary, body))
}

pub fn cmd_cok0(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let x = json::object_from_json(ring, doc)?;
    Ok(CommandReport::data(ring, json::chain_to_json(&chain::cok0(&x)?)))
}

pub fn cmd_lift(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let c = json::chain_from_json(ring, doc)?;
    let x = chain::lift(&c, c.len() + 1)?;
    Ok(CommandReport::data(ring, json::object_to_json(&x)))
}

pub fn cmd_chain_iso(ring: &RingRef, c: &Value, d: &Value, seed: u64) -> Result<CommandReport> {
    let (c, d) = (json::chain_from_json(ring, c)?, json::chain_from_json(ring, d)?);
    Ok(match chain::chain_iso(&c, &d, seed)? {
        ChainIsoVerdict::Isomorphic { forward, .. } => {
            let f = ring.field();
            let maps: Vec<Value> = forward
                .iter()
                .map(|m| {
                    let rows: Vec<Vec<Value>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| f.to_json(m.get(i, j))).collect()).collect();
                    json!(rows)
                })
                .collect();
            CommandReport::new(Outcome::Pass, "isomorphic", json!({"isomorphic": true, "forward": maps}))
        }
        ChainIsoVerdict::NotIsomorphic(why) => {
            CommandReport::new(Outcome::Pass, format!("not isomorphic: {why}"), json!({"isomorphic": false, "reason": why}))
        }
        ChainIsoVerdict::NotFound => CommandReport::new(
            Outcome::Bounded,
            "no isomorphism found within the sampling budget",
            json!({"isomorphic": null}),
        ),
    })
}

pub fn cmd_phi(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let x = json::object_from_json(ring, doc)?;
    Ok(CommandReport::data(ring, json::gamma_to_json(&gamma::phi(&x)?)))
}

pub fn cmd_psi(ring: &RingRef, doc: &Value) -> Result<CommandReport> {
    let g = json::gamma_from_json(ring, doc)?;
    Ok(CommandReport::data(ring, json::object_to_json(&gamma::psi(&g)?)))
}

/// Checks the recollement identities on `x` (random if absent) and random
/// objects of the two outer categories.
pub fn cmd_recollement(ring: &RingRef, n: usize, k: usize, x: Option<&Value>, seed: u64, bounds: Bounds) -> Result<CommandReport> {
    let r = Recollement::new(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = |m| Bounds { n: m, ..bounds };
    let x = match x {
        Some(doc) => json::object_from_json(ring, doc)?,
        None => random::random_object(ring, b(n), &mut rng),
    };
    if x.n() != n {
        return Err(Error::InvalidInput(format!("object has {} components, expected {n}", x.n())));
    }
    let z = random::random_object(ring, b(r.sub_n()), &mut rng);
    let w = random::random_object(ring, b(k), &mut rng);
    let c = r.check(&z, &x, &w)?;
    let body = json!({
        "n": n,
        "k": k,
        "functors": {
            "inc": r.inc().describe(),
            "inc_left": r.inc_left().describe(),
            "inc_right": r.inc_right().describe(),
            "quotient": r.quotient().describe(),
            "left_section": r.left_section().describe(),
            "right_section": r.right_section().describe(),
        },
        "failures": c.failures,
        "kernel": verdict_json(&c.kernel),
        "passed": c.passed(),
    });
    let outcome = if !c.passed() {
        Outcome::PropertyFailure
    } else if !c.kernel.is_null() {
        Outcome::Bounded
    } else {
        Outcome::Pass
    };
    let summary = if c.passed() {
        format!("recollement ({n}, {k}): adjunction triangles hold, quotient∘inc(z) {}", verdict_line(&c.kernel))
    } else {
        format!("recollement ({n}, {k}) failed: {}", c.failures.join("; "))
    };
    Ok(CommandReport::new(outcome, summary, body))
}

pub fn cmd_laws(s: &Scenario) -> CommandReport {
    let rep = laws::run(s);
    let outcome = if !rep.passed() {
        Outcome::PropertyFailure
    } else if rep.bounded() > 0 {
        Outcome::Bounded
    } else {
        Outcome::Pass
    };
    CommandReport::new(outcome, rep.summary(), rep.to_json())
}

/// Runs the suites over each ring of the default instance set.
pub fn cmd_laws_default(seed: u64, bounds: Bounds, suites: &[laws::Suite], cases: usize) -> CommandReport {
    let mut outcome = Outcome::Pass;
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for (name, ring) in laws::default_rings() {
        let s = Scenario { ring, seed, bounds, suites: suites.to_vec(), cases };
        let r = cmd_laws(&s);
        outcome = match (outcome, r.outcome) {
            (Outcome::PropertyFailure, _) | (_, Outcome::PropertyFailure) => Outcome::PropertyFailure,
            (Outcome::Bounded, _) | (_, Outcome::Bounded) => Outcome::Bounded,
            _ => Outcome::Pass,
        };
        lines.push(format!("== {name}\n{}", r.summary));
        reports.push(json!({"instance": name, "report": r.json}));
    }
    CommandReport::new(outcome, lines.join("\n"), Value::Array(reports))
}

/// Identity morphism document for an object, handy for `homotopy-check`.
pub fn identity_document(x: &NFactorization) -> Value {
    json::morphism_to_json(&FactorMorphism::identity(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::tests::qx;

    #[test]
    fn classical_object_commands() {
        let r = qx(&[0, 0, 0, 1]);
        let x = random::monomial_object(&r, &[1, 1, 1]);
        let doc = json::object_to_json(&x);
        assert_eq!(cmd_validate(&r, &doc).unwrap().outcome, Outcome::Pass);
        let h = cmd_homotopy(&r, &identity_document(&x)).unwrap();
        assert_eq!(h.json["null_homotopic"], json!(false));
        let s = cmd_stably_zero(&r, &json::object_to_json(&functors::theta(&r, 3, 1, 2).unwrap())).unwrap();
        assert_eq!(s.json["null_homotopic"], json!(true));
        let c = cmd_cok0(&r, &doc).unwrap();
        let back = cmd_lift(&r, &c.json).unwrap();
        let c2 = cmd_cok0(&r, &back.json).unwrap();
        assert_eq!(cmd_chain_iso(&r, &c.json, &c2.json, 0).unwrap().json["isomorphic"], json!(true));
        let g = cmd_phi(&r, &doc).unwrap();
        assert_eq!(cmd_psi(&r, &g.json).unwrap().json, json::with_ring(&r, doc));
    }

    #[test]
    fn functor_and_error_codes() {
        let r = qx(&[0, 0, 1]);
        let x = random::monomial_object(&r, &[1, 1]);
        let f = functor_by_name("face", 0, 1, 0, 0).unwrap();
        let out = cmd_functor(&r, &f, &json::object_to_json(&x)).unwrap();
        assert_eq!(out.json["n"], json!(3));
        assert!(functor_by_name("inc", 0, 0, 3, 3).is_err());
        assert_eq!(exit_code_for_error(&Error::Unsupported("x".into())), EXIT_UNSUPPORTED);
        assert_eq!(exit_code_for_error(&Error::Parse("x".into())), EXIT_INPUT_ERROR);
        let bad = json!({"maps": [{"rows": 1, "cols": 1, "twist": 0, "entries": [[[0, 1]]]},
                                  {"rows": 1, "cols": 1, "twist": 1, "entries": [[[1]]]}]});
        assert_eq!(cmd_validate(&r, &bad).unwrap().outcome, Outcome::PropertyFailure);
        let rep = cmd_recollement(&r, 2, 1, Some(&json::object_to_json(&x)), 1, Bounds { n: 2, max_rank: 2, max_deg: 1 }).unwrap();
        assert_eq!(rep.outcome, Outcome::Pass);
    }
}
