//! JSON form of reduction traces, walls and no-wall certificates: canonical
//! emission (sorted keys, no whitespace variance) and a full parser, so
//! emitted traces round-trip exactly.

use mukai_walls::check::NamedCheck;
use mukai_walls::mukai::{IsoGen, MukaiVector, NSLattice};
use mukai_walls::reduction::{ReductionStep, ReductionTrace, StepKind, Terminal};
use mukai_walls::walls::{
    Bounds, ContradictionBand, NoWallCertificate, Reason, Wall, WallShape,
};
use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::json::*;
use crate::problem::{lattice_from_value, lattice_to_value, vector_from_value, vector_to_value};

fn obj(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_owned(), v);
    }
    Value::Object(m)
}

pub fn wall_to_value(w: &Wall) -> Value {
    match &w.shape {
        WallShape::Semicircle { center, radius_sq } => obj(vec![
            ("shape", Value::String("semicircle".to_owned())),
            ("center", rational_to_value(center)),
            ("radius_sq", rational_to_value(radius_sq)),
            ("destabilizer", vector_to_value(&w.destabilizer)),
        ]),
        WallShape::Vertical { beta } => obj(vec![
            ("shape", Value::String("vertical".to_owned())),
            ("beta", rational_to_value(beta)),
        ]),
    }
}

/// Parses a wall for the reference vector `(1, 0, 1-n)`. Vertical walls
/// carry no destabilizer in their JSON form; the canonical point-class
/// representative is reconstructed.
pub fn wall_from_value(v: &Value, n: &BigInt, at: &Path) -> Result<Wall, ParseError> {
    let o = as_object(v, at)?;
    let shape = string_from(get(o, "shape", at)?, &at.key("shape"))?;
    let for_vector = MukaiVector::new(BigInt::from(1), vec![BigInt::from(0)], BigInt::from(1) - n);
    match shape.as_str() {
        "semicircle" => {
            deny_unknown(o, &["shape", "center", "radius_sq", "destabilizer"], at)?;
            let center = rational(get(o, "center", at)?, &at.key("center"))?;
            let radius_sq = rational(get(o, "radius_sq", at)?, &at.key("radius_sq"))?;
            let destabilizer =
                vector_from_value(get(o, "destabilizer", at)?, &at.key("destabilizer"))?;
            Ok(Wall {
                shape: WallShape::Semicircle { center, radius_sq },
                destabilizer,
                for_vector,
            })
        }
        "vertical" => {
            deny_unknown(o, &["shape", "beta"], at)?;
            let beta = rational(get(o, "beta", at)?, &at.key("beta"))?;
            Ok(Wall {
                shape: WallShape::Vertical { beta },
                destabilizer: MukaiVector::new(
                    BigInt::from(0),
                    vec![BigInt::from(0)],
                    BigInt::from(1),
                ),
                for_vector,
            })
        }
        other => Err(at.key("shape").err(format!("unknown wall shape \"{other}\""))),
    }
}

fn reason_str(r: Reason) -> &'static str {
    match r {
        Reason::MeetsWallFreeLine => "meets_wall_free_line",
        Reason::FailsHyperbolicity => "fails_hyperbolicity",
        Reason::NonPositiveRadius => "non_positive_radius",
    }
}

fn reason_from(s: &str, at: &Path) -> Result<Reason, ParseError> {
    match s {
        "meets_wall_free_line" => Ok(Reason::MeetsWallFreeLine),
        "fails_hyperbolicity" => Ok(Reason::FailsHyperbolicity),
        "non_positive_radius" => Ok(Reason::NonPositiveRadius),
        other => Err(at.err(format!("unknown contradiction reason \"{other}\""))),
    }
}

fn named_check_to_value(c: &NamedCheck) -> Value {
    obj(vec![
        ("name", Value::String(c.name.clone())),
        ("ok", Value::Bool(c.ok)),
    ])
}

fn named_check_from(v: &Value, at: &Path) -> Result<NamedCheck, ParseError> {
    let o = as_object(v, at)?;
    deny_unknown(o, &["name", "ok"], at)?;
    Ok(NamedCheck::new(
        string_from(get(o, "name", at)?, &at.key("name"))?,
        bool_from(get(o, "ok", at)?, &at.key("ok"))?,
    ))
}

pub fn certificate_to_value(c: &NoWallCertificate) -> Value {
    obj(vec![
        ("n", Value::from(c.n)),
        ("k", Value::from(c.k)),
        ("d", bigint_to_value(&c.d)),
        (
            "bounds",
            crate::problem::bounds_to_value(&c.bounds),
        ),
        ("candidates_checked", Value::from(c.candidates_checked as u64)),
        (
            "contradictions",
            Value::Array(
                c.contradictions
                    .iter()
                    .map(|b| {
                        obj(vec![
                            ("c", Value::from(b.c)),
                            ("s_from", Value::from(b.s_from)),
                            ("s_to", Value::from(b.s_to)),
                            ("count", Value::from(b.count)),
                            ("reason", Value::String(reason_str(b.reason).to_owned())),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "surviving",
            Value::Array(c.surviving.iter().map(wall_to_value).collect()),
        ),
        (
            "line_checks",
            Value::Array(c.line_checks.iter().map(named_check_to_value).collect()),
        ),
        ("valid", Value::Bool(c.valid)),
    ])
}

pub fn certificate_from_value(v: &Value, at: &Path) -> Result<NoWallCertificate, ParseError> {
    let o = as_object(v, at)?;
    deny_unknown(
        o,
        &[
            "n",
            "k",
            "d",
            "bounds",
            "candidates_checked",
            "contradictions",
            "surviving",
            "line_checks",
            "valid",
        ],
        at,
    )?;
    let n = u64_from(get(o, "n", at)?, &at.key("n"))?;
    let k = u64_from(get(o, "k", at)?, &at.key("k"))?;
    let d = bigint(get(o, "d", at)?, &at.key("d"))?;
    let bounds_at = at.key("bounds");
    let bounds_obj = as_object(get(o, "bounds", at)?, &bounds_at)?;
    let bounds = Bounds {
        c_max: u64_from(get(bounds_obj, "c_max", &bounds_at)?, &bounds_at.key("c_max"))?,
        s_max: u64_from(get(bounds_obj, "s_max", &bounds_at)?, &bounds_at.key("s_max"))?,
    };
    let candidates_checked =
        u64_from(get(o, "candidates_checked", at)?, &at.key("candidates_checked"))? as u128;
    let bands_at = at.key("contradictions");
    let mut contradictions = Vec::new();
    for (i, bv) in as_array(get(o, "contradictions", at)?, &bands_at)?.iter().enumerate() {
        let b_at = bands_at.index(i);
        let bo = as_object(bv, &b_at)?;
        deny_unknown(bo, &["c", "s_from", "s_to", "count", "reason"], &b_at)?;
        let c = u64_from(get(bo, "c", &b_at)?, &b_at.key("c"))?;
        let s_from = bigint(get(bo, "s_from", &b_at)?, &b_at.key("s_from"))?;
        let s_to = bigint(get(bo, "s_to", &b_at)?, &b_at.key("s_to"))?;
        let count = u64_from(get(bo, "count", &b_at)?, &b_at.key("count"))?;
        let reason = reason_from(
            &string_from(get(bo, "reason", &b_at)?, &b_at.key("reason"))?,
            &b_at.key("reason"),
        )?;
        contradictions.push(ContradictionBand {
            c,
            s_from: i64::try_from(&s_from).map_err(|_| b_at.key("s_from").err("out of range"))?,
            s_to: i64::try_from(&s_to).map_err(|_| b_at.key("s_to").err("out of range"))?,
            count,
            reason,
        });
    }
    let n_big = BigInt::from(n);
    let surv_at = at.key("surviving");
    let mut surviving = Vec::new();
    for (i, wv) in as_array(get(o, "surviving", at)?, &surv_at)?.iter().enumerate() {
        surviving.push(wall_from_value(wv, &n_big, &surv_at.index(i))?);
    }
    let checks_at = at.key("line_checks");
    let mut line_checks = Vec::new();
    for (i, cv) in as_array(get(o, "line_checks", at)?, &checks_at)?.iter().enumerate() {
        line_checks.push(named_check_from(cv, &checks_at.index(i))?);
    }
    let valid = bool_from(get(o, "valid", at)?, &at.key("valid"))?;
    Ok(NoWallCertificate {
        n,
        k,
        d,
        bounds,
        candidates_checked,
        contradictions,
        surviving,
        line_checks,
        valid,
    })
}

fn isogen_to_value(g: &IsoGen) -> Value {
    match g {
        IsoGen::Shift => obj(vec![("action", Value::String("shift".to_owned()))]),
        IsoGen::SphericalTwistO => obj(vec![(
            "action",
            Value::String("spherical_twist_o".to_owned()),
        )]),
        IsoGen::Dual => obj(vec![("action", Value::String("dual".to_owned()))]),
        IsoGen::TensorBy(d) => obj(vec![
            ("action", Value::String("tensor_by".to_owned())),
            (
                "divisor",
                Value::Array(d.iter().map(bigint_to_value).collect()),
            ),
        ]),
        IsoGen::Reflect(delta) => obj(vec![
            ("action", Value::String("reflect".to_owned())),
            ("class", vector_to_value(delta)),
        ]),
        IsoGen::FmAbstract => obj(vec![("action", Value::String("fm_abstract".to_owned()))]),
    }
}

fn isogen_from(v: &Value, at: &Path) -> Result<IsoGen, ParseError> {
    let o = as_object(v, at)?;
    let action = string_from(get(o, "action", at)?, &at.key("action"))?;
    match action.as_str() {
        "shift" => Ok(IsoGen::Shift),
        "spherical_twist_o" => Ok(IsoGen::SphericalTwistO),
        "dual" => Ok(IsoGen::Dual),
        "fm_abstract" => Ok(IsoGen::FmAbstract),
        "tensor_by" => {
            let d_at = at.key("divisor");
            let arr = as_array(get(o, "divisor", at)?, &d_at)?;
            let mut d = Vec::with_capacity(arr.len());
            for (i, x) in arr.iter().enumerate() {
                d.push(bigint(x, &d_at.index(i))?);
            }
            Ok(IsoGen::TensorBy(d))
        }
        "reflect" => Ok(IsoGen::Reflect(vector_from_value(
            get(o, "class", at)?,
            &at.key("class"),
        )?)),
        other => Err(at.key("action").err(format!("unknown action \"{other}\""))),
    }
}

fn kind_to_value(k: &StepKind) -> Value {
    match k {
        StepKind::Normalize => obj(vec![("kind", Value::String("normalize".to_owned()))]),
        StepKind::DeformToElliptic { d1_detour } => obj(vec![
            ("kind", Value::String("deform_to_elliptic".to_owned())),
            ("d1_detour", Value::Bool(*d1_detour)),
        ]),
        StepKind::CoprimeTwist { k, prime_witness } => obj(vec![
            ("kind", Value::String("coprime_twist".to_owned())),
            ("k", bigint_to_value(k)),
            ("prime_witness", bigint_to_value(prime_witness)),
        ]),
        StepKind::FmStep { w, w_prime, t } => obj(vec![
            ("kind", Value::String("fm_step".to_owned())),
            ("w", vector_to_value(w)),
            ("w_prime", vector_to_value(w_prime)),
            ("t", vector_to_value(t)),
        ]),
        StepKind::FinalDeformation { k, d } => obj(vec![
            ("kind", Value::String("final_deformation".to_owned())),
            ("k", bigint_to_value(k)),
            ("d", bigint_to_value(d)),
        ]),
        StepKind::WallCertificate => {
            obj(vec![("kind", Value::String("wall_certificate".to_owned()))])
        }
    }
}

fn kind_from(v: &Value, at: &Path) -> Result<StepKind, ParseError> {
    let o = as_object(v, at)?;
    let kind = string_from(get(o, "kind", at)?, &at.key("kind"))?;
    match kind.as_str() {
        "normalize" => Ok(StepKind::Normalize),
        "deform_to_elliptic" => Ok(StepKind::DeformToElliptic {
            d1_detour: bool_from(get(o, "d1_detour", at)?, &at.key("d1_detour"))?,
        }),
        "coprime_twist" => Ok(StepKind::CoprimeTwist {
            k: bigint(get(o, "k", at)?, &at.key("k"))?,
            prime_witness: bigint(get(o, "prime_witness", at)?, &at.key("prime_witness"))?,
        }),
        "fm_step" => Ok(StepKind::FmStep {
            w: vector_from_value(get(o, "w", at)?, &at.key("w"))?,
            w_prime: vector_from_value(get(o, "w_prime", at)?, &at.key("w_prime"))?,
            t: vector_from_value(get(o, "t", at)?, &at.key("t"))?,
        }),
        "final_deformation" => Ok(StepKind::FinalDeformation {
            k: bigint(get(o, "k", at)?, &at.key("k"))?,
            d: bigint(get(o, "d", at)?, &at.key("d"))?,
        }),
        "wall_certificate" => Ok(StepKind::WallCertificate),
        other => Err(at.key("kind").err(format!("unknown step kind \"{other}\""))),
    }
}

fn state_to_value(state: &(NSLattice, MukaiVector)) -> Value {
    obj(vec![
        ("lattice", lattice_to_value(&state.0)),
        ("vector", vector_to_value(&state.1)),
    ])
}

fn state_from(v: &Value, at: &Path) -> Result<(NSLattice, MukaiVector), ParseError> {
    let o = as_object(v, at)?;
    deny_unknown(o, &["lattice", "vector"], at)?;
    Ok((
        lattice_from_value(get(o, "lattice", at)?, &at.key("lattice"))?,
        vector_from_value(get(o, "vector", at)?, &at.key("vector"))?,
    ))
}

fn step_to_value(s: &ReductionStep) -> Value {
    obj(vec![
        ("kind", kind_to_value(&s.kind)),
        ("before", state_to_value(&s.before)),
        ("after", state_to_value(&s.after)),
        (
            "isometry_word",
            Value::Array(s.word.iter().map(isogen_to_value).collect()),
        ),
        (
            "checks",
            Value::Array(s.checks.iter().map(named_check_to_value).collect()),
        ),
        (
            "assumptions",
            Value::Array(
                s.assumptions
                    .iter()
                    .map(|a| Value::String(a.clone()))
                    .collect(),
            ),
        ),
    ])
}

fn step_from(v: &Value, at: &Path) -> Result<ReductionStep, ParseError> {
    let o = as_object(v, at)?;
    deny_unknown(
        o,
        &["kind", "before", "after", "isometry_word", "checks", "assumptions"],
        at,
    )?;
    let kind = kind_from(get(o, "kind", at)?, &at.key("kind"))?;
    let before = state_from(get(o, "before", at)?, &at.key("before"))?;
    let after = state_from(get(o, "after", at)?, &at.key("after"))?;
    let word_at = at.key("isometry_word");
    let mut word = Vec::new();
    for (i, g) in as_array(get(o, "isometry_word", at)?, &word_at)?.iter().enumerate() {
        word.push(isogen_from(g, &word_at.index(i))?);
    }
    let checks_at = at.key("checks");
    let mut checks = Vec::new();
    for (i, c) in as_array(get(o, "checks", at)?, &checks_at)?.iter().enumerate() {
        checks.push(named_check_from(c, &checks_at.index(i))?);
    }
    let asm_at = at.key("assumptions");
    let mut assumptions = Vec::new();
    for (i, a) in as_array(get(o, "assumptions", at)?, &asm_at)?.iter().enumerate() {
        assumptions.push(string_from(a, &asm_at.index(i))?);
    }
    Ok(ReductionStep {
        kind,
        before,
        after,
        word,
        checks,
        assumptions,
    })
}

fn terminal_str(t: Terminal) -> &'static str {
    match t {
        Terminal::SphericalPoint => "spherical_point",
        Terminal::IsotropicK3 => "isotropic_k3",
        Terminal::HilbertScheme => "hilbert_scheme",
    }
}

fn terminal_from(s: &str, at: &Path) -> Result<Terminal, ParseError> {
    match s {
        "spherical_point" => Ok(Terminal::SphericalPoint),
        "isotropic_k3" => Ok(Terminal::IsotropicK3),
        "hilbert_scheme" => Ok(Terminal::HilbertScheme),
        other => Err(at.err(format!("unknown terminal \"{other}\""))),
    }
}

pub fn trace_to_value(t: &ReductionTrace) -> Value {
    let mut entries = vec![
        ("input", state_to_value(&t.input)),
        (
            "steps",
            Value::Array(t.steps.iter().map(step_to_value).collect()),
        ),
        ("n", bigint_to_value(&t.n)),
        (
            "terminal",
            Value::String(terminal_str(t.terminal).to_owned()),
        ),
    ];
    if let Some(cert) = &t.certificate {
        entries.push(("certificate", certificate_to_value(cert)));
    }
    obj(entries)
}

/// Canonical JSON text of a trace: sorted keys, compact separators.
pub fn emit_trace_json(t: &ReductionTrace) -> String {
    to_canonical_string(&trace_to_value(t))
}

pub fn parse_trace_json(text: &str) -> Result<ReductionTrace, ParseError> {
    let root = parse_value(text)?;
    let at = Path::root();
    let o = as_object(&root, &at)?;
    deny_unknown(o, &["input", "steps", "n", "terminal", "certificate"], &at)?;
    let input = state_from(get(o, "input", &at)?, &at.key("input"))?;
    let steps_at = at.key("steps");
    let mut steps = Vec::new();
    for (i, s) in as_array(get(o, "steps", &at)?, &steps_at)?.iter().enumerate() {
        steps.push(step_from(s, &steps_at.index(i))?);
    }
    let n = bigint(get(o, "n", &at)?, &at.key("n"))?;
    let terminal = terminal_from(
        &string_from(get(o, "terminal", &at)?, &at.key("terminal"))?,
        &at.key("terminal"),
    )?;
    let certificate = match o.get("certificate") {
        Some(c) => Some(certificate_from_value(c, &at.key("certificate"))?),
        None => None,
    };
    Ok(ReductionTrace {
        input,
        steps,
        n,
        terminal,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mukai_walls::reduction::{run_reduction, ReductionOptions};

    #[test]
    fn trace_round_trip() {
        let lat = NSLattice::rank1(1);
        let v = MukaiVector::from_i64(2, &[1], -1);
        let opts = ReductionOptions {
            k_final: BigInt::from(2),
            cert_bounds: Bounds {
                c_max: 20,
                s_max: 500,
            },
        };
        let trace = run_reduction(&lat, &v, &opts).unwrap();
        let text = emit_trace_json(&trace);
        let back = parse_trace_json(&text).unwrap();
        assert_eq!(back, trace);
        // canonical: emitting again is byte-identical
        assert_eq!(emit_trace_json(&back), text);
        assert!(text.contains("\"terminal\":\"hilbert_scheme\""));
        // the certificate is embedded verbatim
        let cert = trace.certificate.as_ref().unwrap();
        let cert_text = to_canonical_string(&certificate_to_value(cert));
        assert!(text.contains(&cert_text));
    }

    #[test]
    fn terminal_point_trace_marks_spherical() {
        let lat = NSLattice::rank1(1);
        let v = MukaiVector::from_i64(1, &[0], 1);
        let trace = run_reduction(&lat, &v, &ReductionOptions::default()).unwrap();
        let text = emit_trace_json(&trace);
        assert!(text.contains("\"terminal\":\"spherical_point\""));
        assert_eq!(parse_trace_json(&text).unwrap(), trace);
    }

    #[test]
    fn wall_json_matches_schema() {
        use mukai_walls::walls::{wall_from_destabilizer, WallOutcome};
        let d = BigInt::from(1);
        let n = BigInt::from(2);
        let u = MukaiVector::from_i64(0, &[1], -3);
        let WallOutcome::Wall(w) = wall_from_destabilizer(&d, &n, &u).unwrap() else {
            panic!("expected a wall");
        };
        let v = wall_to_value(&w);
        let text = to_canonical_string(&v);
        assert_eq!(
            text,
            "{\"center\":[-3,2],\"destabilizer\":{\"delta\":[1],\"r\":0,\"s\":-3},\"radius_sq\":[5,4],\"shape\":\"semicircle\"}"
        );
        let back = wall_from_value(&parse_value(&text).unwrap(), &n, &Path::root()).unwrap();
        assert_eq!(back, w);
    }
}
