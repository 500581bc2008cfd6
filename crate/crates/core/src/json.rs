// SPDX-License-Identifier: Apache-2.0

//! JSON in and out.
//!
//! Documents carry `"schema": "bch-spec/1"`. Complex numbers are written as
//! `[re, im]`; on input a bare number is also accepted as a real value.
//!
//! ```json
//! {"schema": "bch-spec/1", "spec": {"u": [0.1, 0.0], "n": 0.5}}
//! ```
//!
//! Parameters missing from `spec` are zero.

use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraSpec, Param};
use crate::closed_form::ClosedForm;
use crate::error::{Error, Result};

pub const SCHEMA: &str = "bch-spec/1";

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|x| C64::new(x, 0.0))
            .ok_or_else(|| Error::InvalidArgument(format!("not a finite number: {n}"))),
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::InvalidArgument(format!("complex pair must hold two numbers: {v}"))),
        },
        _ => Err(Error::InvalidArgument(format!("expected a number or [re, im], got {v}"))),
    }
}

pub fn spec_to_json(spec: &AlgebraSpec) -> Value {
    let mut m = Map::new();
    for p in Param::ALL {
        m.insert(p.name().to_string(), complex_to_json(spec.get(p)));
    }
    Value::Object(m)
}

/// Parse `{"schema": .., "spec": {..}}` or a bare parameter object.
pub fn parse_spec(text: &str) -> Result<AlgebraSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("invalid JSON: {e}")))?;
    spec_from_value(&v)
}

pub fn spec_from_value(v: &Value) -> Result<AlgebraSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidArgument("top level must be an object".into()))?;
    if let Some(s) = obj.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return Err(Error::InvalidArgument(format!("unsupported schema {s}, expected \"{SCHEMA}\"")));
        }
    }
    let params = match obj.get("spec") {
        Some(Value::Object(m)) => m,
        Some(other) => return Err(Error::InvalidArgument(format!("\"spec\" must be an object, got {other}"))),
        None => obj,
    };
    let mut spec = AlgebraSpec::default();
    for (key, val) in params {
        if key == "schema" {
            continue;
        }
        let p: Param = key
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown parameter \"{key}\"")))?;
        spec.set(p, complex_from_json(val)?);
    }
    if !spec.is_finite() {
        return Err(Error::InvalidArgument("parameters must be finite".into()));
    }
    Ok(spec)
}

/// Wrap a spec in a versioned document.
pub fn spec_document(spec: &AlgebraSpec) -> Value {
    json!({ "schema": SCHEMA, "spec": spec_to_json(spec) })
}

/// One closed form; `verified` lists named oracle checks and their outcomes.
pub fn closed_form_to_json(cf: &ClosedForm, verified: &[(&str, bool)]) -> Value {
    let mut flags = Map::new();
    for (name, ok) in verified {
        flags.insert((*name).to_string(), Value::Bool(*ok));
    }
    json!({
        "A": complex_to_json(cf.a),
        "B": complex_to_json(cf.b),
        "C": complex_to_json(cf.c),
        "D": complex_to_json(cf.d),
        "alpha": complex_to_json(cf.alpha.alpha),
        "beta": complex_to_json(cf.alpha.beta),
        "branch": cf.alpha.branch,
        "admissible": cf.alpha.admissible,
        "u_tilde": complex_to_json(cf.tilde.u_tilde),
        "v_tilde": complex_to_json(cf.tilde.v_tilde),
        "c_tilde": complex_to_json(cf.tilde.c_tilde),
        "type": cf.algebra_type.tag.name(),
        "product": if cf.two_factor { "XZ" } else { "XYZ" },
        "residual": cf.alpha.residual,
        "verified": Value::Object(flags),
    })
}
