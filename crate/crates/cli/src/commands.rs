//! Command implementations. Each returns a result payload and a verdict;
//! [`execute`] wraps them into a [`Report`] and picks the exit code.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use towergroup::abelian::{abelian_from_group, exterior_square, AbelianGroup};
use towergroup::arith::factorize;
use towergroup::extensions::{fc_model, is_isoclinic, IsoclinismSide};
use towergroup::fqlin::analyze_sylow_linear;
use towergroup::group::{
    center, conjugacy_classes, derived_series, element_orders, is_solvable, normal_subgroups,
    sylow_subgroup,
};
use towergroup::monomial::{action_from_q8_triple, type_descriptor, verify_action};
use towergroup::special::{
    is_special, verify_certificate, SpecialCertificate, SpecialFailure, SpecialOutcome,
};
use towergroup::tower::{
    build_tower, untwist_central, verify_tower, TowerCertificate, UntwistCover, VerificationMode,
};
use towergroup::{GroupError, GroupRef, Limits};

use crate::literal::{build, parse, parse_invariants, GroupLiteral, ParseError};
use crate::report::{limits_json, Report, SCHEMA_VERSION};
use crate::{Command, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};

/// Why a command stopped without a result.
#[derive(Debug)]
pub enum Failure {
    Parse(ParseError),
    Group(GroupError),
    Verification(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Group(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_USAGE,
            Failure::Group(e) if e.is_limit() => EXIT_LIMIT,
            Failure::Group(_) => EXIT_USAGE,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Parse(e) => json!({
                "kind": "parse",
                "message": e.to_string(),
                "position": e.position,
                "expected": e.expected,
            }),
            Failure::Group(e) => json!({
                "kind": if e.is_limit() { "limit" } else { "invalid_input" },
                "message": e.to_string(),
            }),
            Failure::Verification(m) => json!({
                "kind": "verification",
                "message": m,
            }),
        }
    }
}

type Outcome = Result<(Option<String>, Value), Failure>;

pub fn execute(cmd: &Command, limits: &Limits, verify: bool) -> (Report, i32) {
    let start = Instant::now();
    let outcome = match cmd {
        Command::Analyze { literal } => analyze(literal, limits),
        Command::Special { literal } => special(literal, limits, verify),
        Command::Tower { literal } => tower(literal, limits, verify),
        Command::Untwist { literal } => untwist(literal, limits, verify),
        Command::Fc { invariants } => fc(invariants, limits),
        Command::Isoclinic { left, right } => isoclinic(left, right, limits, verify),
        Command::Sylow { literal, prime } => sylow(literal, *prime, limits, verify),
        Command::Monomial => monomial(),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let (verdict, result, error, code) = match outcome {
        Ok((verdict, result)) => {
            let code = if verdict.as_deref() == Some("inconclusive") {
                EXIT_LIMIT
            } else {
                EXIT_OK
            };
            (verdict, result, None, code)
        }
        Err(f) => (None, Value::Null, Some(f.to_json()), f.exit_code()),
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: cmd.name().to_string(),
        input: cmd.inputs(),
        limits: limits_json(limits),
        verdict,
        result,
        error,
        timing: json!({ "elapsed_ms": (elapsed * 1000.0).round() / 1000.0 }),
    };
    (report, code)
}

fn load(src: &str, limits: &Limits) -> Result<(GroupLiteral, GroupRef), Failure> {
    let lit = parse(src)?;
    let g = build(&lit, limits)?;
    Ok((lit, g))
}

fn invariants(a: &AbelianGroup) -> Value {
    json!(a.invariant_factors())
}

fn certificate_json(cert: &SpecialCertificate) -> Value {
    let steps: Vec<Value> = cert
        .steps
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "quotient_before_order": s.quotient_before().order(),
                "quotient_after_order": s.quotient_after().order(),
                "kernel_order": s.kernel.order(),
                "kernel_invariants": invariants(&s.kernel_structure),
                "complement_order": s.complement.order(),
            })
        })
        .collect();
    json!({
        "length": cert.length(),
        "chain_orders": cert.chain.iter().map(|c| c.order()).collect::<Vec<_>>(),
        "steps": steps,
    })
}

fn failure_json(f: &SpecialFailure) -> Value {
    json!({
        "exhaustive": f.is_exhaustive(),
        "explored_chain_count": f.explored_chain_count,
        "limits_hit": f.limits_hit,
        "reason": f.reason,
    })
}

fn verdict_of(outcome: &SpecialOutcome) -> &'static str {
    match outcome {
        SpecialOutcome::Special(_) => "special",
        SpecialOutcome::NotSpecial(f) if f.is_exhaustive() => "not_special",
        SpecialOutcome::NotSpecial(_) => "inconclusive",
    }
}

fn outcome_json(outcome: &SpecialOutcome, verify: bool) -> Result<Value, Failure> {
    Ok(match outcome {
        SpecialOutcome::Special(cert) => {
            let mut v = json!({ "certificate": certificate_json(cert) });
            if verify {
                verify_certificate(cert).map_err(Failure::Verification)?;
                v["verification"] = json!("passed");
            }
            v
        }
        SpecialOutcome::NotSpecial(f) => json!({ "failure": failure_json(f) }),
    })
}

fn analyze(src: &str, limits: &Limits) -> Outcome {
    let (lit, g) = load(src, limits)?;
    let mut limits_hit = Vec::new();
    let normal_count = match normal_subgroups(&g, limits) {
        Ok(ns) => Some(ns.len()),
        Err(e) if e.is_limit() => {
            limits_hit.push(e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut class_sizes: Vec<usize> = conjugacy_classes(&g).iter().map(Vec::len).collect();
    class_sizes.sort_unstable();
    let mut sylow = Vec::new();
    for (p, _) in factorize(g.order() as u64) {
        let s = sylow_subgroup(&g, p as usize, limits)?;
        sylow.push(json!({ "prime": p, "order": s.order() }));
    }
    let orders: BTreeMap<String, usize> = element_orders(&g)
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let abelian = g.is_abelian();
    let invariants = if abelian {
        json!(abelian_from_group(&g)?.invariant_factors())
    } else {
        Value::Null
    };
    Ok((
        None,
        json!({
            "literal": lit.to_string(),
            "order": g.order(),
            "degree": g.degree(),
            "abelian": abelian,
            "abelian_invariants": invariants,
            "exponent": g.exponent(),
            "solvable": is_solvable(&g),
            "center_order": center(&g).order(),
            "derived_series_orders": derived_series(&g).iter().map(|s| s.order()).collect::<Vec<_>>(),
            "conjugacy_class_sizes": class_sizes,
            "element_orders": orders,
            "sylow_orders": sylow,
            "normal_subgroup_count": normal_count,
            "limits_hit": limits_hit,
        }),
    ))
}

fn special(src: &str, limits: &Limits, verify: bool) -> Outcome {
    let (lit, g) = load(src, limits)?;
    let outcome = is_special(&g, limits);
    let mut result = outcome_json(&outcome, verify)?;
    result["literal"] = json!(lit.to_string());
    result["order"] = json!(g.order());
    Ok((Some(verdict_of(&outcome).into()), result))
}

fn tower_json(tc: &TowerCertificate) -> Value {
    let steps: Vec<Value> = tc
        .steps
        .iter()
        .map(|s| {
            let mode = match s.mode {
                VerificationMode::Exhaustive => json!("exhaustive"),
                VerificationMode::Sampled { pairs, seed } => {
                    json!({ "sampled": { "pairs": pairs, "seed": seed } })
                }
            };
            json!({
                "index": s.index,
                "quotient_before_order": s.quotient_before.order(),
                "quotient_after_order": s.quotient_after.order(),
                "kernel_invariants": invariants(&s.kernel_structure),
                "exponent": s.exponent,
                "generator_count": s.generator_count(),
                "rank": s.rank(),
                "module_order": s.module_order.to_string(),
                "cover_order": s.cover_order.to_string(),
                "kernel_order": s.kernel_order.to_string(),
                "verification_mode": mode,
            })
        })
        .collect();
    json!({
        "semantics": tc.semantics,
        "module_convention": tc.module_convention,
        "generator_count_label": tc.generator_count_label,
        "length": tc.steps.len(),
        "steps": steps,
    })
}

fn tower(src: &str, limits: &Limits, verify: bool) -> Outcome {
    let (lit, g) = load(src, limits)?;
    let outcome = is_special(&g, limits);
    let mut result = outcome_json(&outcome, verify)?;
    result["literal"] = json!(lit.to_string());
    result["order"] = json!(g.order());
    result["tower"] = Value::Null;
    if let SpecialOutcome::Special(cert) = &outcome {
        let tc = build_tower(cert, limits)?;
        result["tower"] = tower_json(&tc);
        if verify {
            verify_tower(&tc).map_err(Failure::Verification)?;
            result["tower_verification"] = json!("passed");
        }
    }
    Ok((Some(verdict_of(&outcome).into()), result))
}

fn untwist(src: &str, limits: &Limits, verify: bool) -> Outcome {
    let (lit, g) = load(src, limits)?;
    let r = untwist_central(&g, limits)?;
    let mut result = outcome_json(&r.special, verify)?;
    result["literal"] = json!(lit.to_string());
    result["order"] = json!(g.order());
    result["prime"] = json!(r.prime);
    result["abelian_quotient"] = invariants(&r.abelian_quotient);
    result["central_kernel_order"] = json!(r.central_kernel_order);
    result["cover"] = json!(match r.cover {
        UntwistCover::Identity => "identity",
        UntwistCover::Pullback(_) => "pullback",
    });
    result["cover_order"] = json!(r.cover_group.order());
    result["cover_kernel_order"] = json!(r.cover_kernel.order());
    result["tower"] = match &r.tower {
        None => Value::Null,
        Some(Ok(tc)) => {
            if verify {
                verify_tower(tc).map_err(Failure::Verification)?;
                result["tower_verification"] = json!("passed");
            }
            tower_json(tc)
        }
        Some(Err(e)) => json!({ "error": e }),
    };
    Ok((Some(verdict_of(&r.special).into()), result))
}

fn fc(src: &str, limits: &Limits) -> Outcome {
    let orders = parse_invariants(src)?;
    if orders.contains(&0) {
        return Err(GroupError::InvalidInput("cyclic orders must be positive".into()).into());
    }
    let base = AbelianGroup::from_cyclic_orders(&orders);
    let (model, g) = fc_model(&base, limits.max_order)?;
    Ok((
        None,
        json!({
            "literal": GroupLiteral::Fc(orders).to_string(),
            "base_invariants": invariants(&base),
            "exterior_square_invariants": invariants(&exterior_square(&base)),
            "order": model.order().to_string(),
            "derived_order": model.derived_order(),
            "degree": g.degree(),
            "verified": true,
        }),
    ))
}

fn side_json(s: &IsoclinismSide) -> Value {
    json!({
        "order": s.group.order(),
        "central_quotient_order": s.central_quotient().order(),
        "derived_order": s.derived.order(),
    })
}

fn isoclinic(left: &str, right: &str, limits: &Limits, verify: bool) -> Outcome {
    let (ll, g) = load(left, limits)?;
    let (rl, h) = load(right, limits)?;
    let witness = is_isoclinic(&g, &h, limits)?;
    let (l_side, r_side) = match &witness {
        Some(w) => (side_json(&w.left), side_json(&w.right)),
        None => (
            side_json(&IsoclinismSide::new(&g, limits)?),
            side_json(&IsoclinismSide::new(&h, limits)?),
        ),
    };
    let mut result = json!({
        "left_literal": ll.to_string(),
        "right_literal": rl.to_string(),
        "left": l_side,
        "right": r_side,
        "witness_found": witness.is_some(),
    });
    if let (Some(w), true) = (&witness, verify) {
        w.verify().map_err(|e| Failure::Verification(e.to_string()))?;
        result["verification"] = json!("passed");
    }
    let verdict = if witness.is_some() { "isoclinic" } else { "not_isoclinic" };
    Ok((Some(verdict.into()), result))
}

fn sylow(src: &str, prime: u64, limits: &Limits, verify: bool) -> Outcome {
    let (lit, g) = load(src, limits)?;
    let s = sylow_subgroup(&g, prime as usize, limits)?;
    let sg = Arc::new(s.to_group(&g));
    let outcome = is_special(&sg, limits);
    let mut result = outcome_json(&outcome, verify)?;
    result["literal"] = json!(lit.to_string());
    result["group_order"] = json!(g.order());
    result["prime"] = json!(prime);
    result["sylow_order"] = json!(s.order());
    result["special"] = json!(matches!(outcome, SpecialOutcome::Special(_)));
    result["unitriangular_match"] = Value::Null;
    if let GroupLiteral::Pgl(n, q) = lit {
        let report = analyze_sylow_linear(n as usize, q, prime, limits)?;
        result["unitriangular_match"] = json!(report.unitriangular_match);
    }
    Ok((Some(verdict_of(&outcome).into()), result))
}

fn monomial() -> Outcome {
    let act = action_from_q8_triple()?;
    let verified = verify_action(&act);
    if !verified {
        return Err(Failure::Verification("monomial action is not a homomorphism".into()));
    }
    let gens: Vec<Vec<String>> = act
        .generators
        .iter()
        .map(|&g| act.map(g).coordinate_strings())
        .collect();
    let maps: Vec<Vec<String>> = act.assignment.iter().map(|m| m.coordinate_strings()).collect();
    let d = type_descriptor(&act);
    let multiset: BTreeMap<String, usize> =
        d.multiset.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Ok((
        None,
        json!({
            "group_order": act.group.order(),
            "group_exponent": act.group.exponent(),
            "faithful": act.is_faithful(),
            "verified": verified,
            "sign_coefficients": act.assignment.iter().all(|m| m.has_sign_coefficients()),
            "generator_images": gens,
            "maps": maps,
            "type_descriptor": {
                "per_element": d.per_element,
                "multiset": multiset,
            },
        }),
    ))
}
