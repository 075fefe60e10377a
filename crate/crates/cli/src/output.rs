//! Output envelope and value rendering.
//!
//! Every numeric field in a JSON payload is an exact integer (a JSON
//! number when it fits in 64 bits, a decimal string beyond), an exact
//! fraction rendered as `"a/b"`, or an approximate value tagged with its
//! precision. Rationals are never rendered as decimals.

use autsurf_core::defect::ApproxReal;
use autsurf_core::Rational;
use serde_json::{json, Value};

/// Exact rational as JSON: integers become numbers when they fit in i64,
/// everything else becomes a string (`"a/b"` for proper fractions).
pub fn rational_json(r: &Rational) -> Value {
    if r.is_integer() {
        let n = r.to_integer();
        match i64::try_from(&n) {
            Ok(v) => json!(v),
            Err(_) => json!(n.to_string()),
        }
    } else {
        json!(format!("{r}"))
    }
}

/// Arbitrary-precision unsigned integer as JSON, numeric when possible.
pub fn biguint_json(n: &num_bigint::BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

/// Approximate value with its precision tag.
pub fn approx_json(a: &ApproxReal) -> Value {
    json!({
        "value": a.to_string(),
        "bits": a.frac_bits(),
        "err_exp": a.err_exp(),
    })
}

/// The envelope wrapping every `--json` response.
pub struct Envelope {
    pub subcommand: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub citations: Vec<(&'static str, &'static str)>,
}

impl Envelope {
    pub fn render(&self) -> String {
        let citations: Vec<Value> = self
            .citations
            .iter()
            .map(|(rule, citation)| json!({ "rule": rule, "citation": citation }))
            .collect();
        let value = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "result": self.result,
            "citations": citations,
        });
        serde_json::to_string_pretty(&value).expect("serializable")
    }
}
