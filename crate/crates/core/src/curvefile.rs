//! The curve-spec text format: key = value lines describing a model.
//!
//! ```text
//! model = hyperelliptic | elliptic
//! base  = Q | F(p) | F(p,n)
//! f     = [c0, c1, ...]            (hyperelliptic; or an expression in x)
//! a_invariants = [a1, a2, a3, a4, a6]   (elliptic)
//! label = free text                (optional)
//! ```
//!
//! Lines starting with `#` are comments. Parse errors name the offending
//! line and token.

use num_bigint::BigInt;

use crate::curves::{Base, CurveModel, EllipticModel, HyperellipticModel};
use crate::error::Error;
use crate::poly::{parse_int_poly, IntPoly};
use crate::Result;

pub fn parse_curve_spec(text: &str) -> Result<CurveModel> {
    let mut model: Option<String> = None;
    let mut base: Option<Base> = None;
    let mut f: Option<IntPoly> = None;
    let mut a_inv: Option<[BigInt; 5]> = None;
    let mut label: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Parse {
            line: line_no,
            col: 1,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let perr = |msg: String| Error::Parse {
            line: line_no,
            col: key.len() + 2,
            msg,
        };
        match key {
            "model" => match value {
                "hyperelliptic" | "elliptic" => model = Some(value.to_string()),
                other => return Err(perr(format!("unknown model '{other}'"))),
            },
            "base" => base = Some(parse_base(value).map_err(|m| perr(m))?),
            "f" => {
                f = Some(parse_int_poly(value).map_err(|e| match e {
                    Error::Parse { col, msg, .. } => Error::Parse {
                        line: line_no,
                        col,
                        msg,
                    },
                    other => other,
                })?)
            }
            "a_invariants" => {
                let p = parse_int_poly(value).map_err(|e| match e {
                    Error::Parse { col, msg, .. } => Error::Parse {
                        line: line_no,
                        col,
                        msg,
                    },
                    other => other,
                })?;
                // a bracket list [a1,a2,a3,a4,a6]; trailing zeros are
                // significant, so re-split the raw text instead
                let raw_items: Vec<&str> = value
                    .trim_start_matches('[')
                    .trim_end_matches(']')
                    .split(',')
                    .map(|s| s.trim())
                    .collect();
                if raw_items.len() != 5 {
                    return Err(perr(format!(
                        "a_invariants needs exactly 5 entries, got {}",
                        raw_items.len()
                    )));
                }
                let _ = p;
                let mut arr = [
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(0),
                    BigInt::from(0),
                ];
                for (i, item) in raw_items.iter().enumerate() {
                    arr[i] = item.parse().map_err(|_| {
                        perr(format!("bad integer '{item}' in a_invariants"))
                    })?;
                }
                a_inv = Some(arr);
            }
            "label" => label = Some(value.to_string()),
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: format!("unknown key: {other}"),
                })
            }
        }
    }

    let model = model.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing key: model".into(),
    })?;
    let base = base.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing key: base".into(),
    })?;
    match model.as_str() {
        "hyperelliptic" => {
            let f = f.ok_or(Error::Parse {
                line: 1,
                col: 1,
                msg: "missing key: f (hyperelliptic model)".into(),
            })?;
            Ok(CurveModel::Hyperelliptic(HyperellipticModel::new(
                f, base, label,
            )?))
        }
        _ => {
            let a = a_inv.ok_or(Error::Parse {
                line: 1,
                col: 1,
                msg: "missing key: a_invariants (elliptic model)".into(),
            })?;
            Ok(CurveModel::Elliptic(EllipticModel::new(a, base, label)?))
        }
    }
}

fn parse_base(value: &str) -> std::result::Result<Base, String> {
    if value == "Q" {
        return Ok(Base::Rational);
    }
    let inner = value
        .strip_prefix("F(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("base must be Q, F(p) or F(p,n), got '{value}'"))?;
    let parts: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
    let p: u64 = parts[0]
        .parse()
        .map_err(|_| format!("bad characteristic '{}'", parts[0]))?;
    let n: usize = match parts.len() {
        1 => 1,
        2 => parts[1]
            .parse()
            .map_err(|_| format!("bad extension degree '{}'", parts[1]))?,
        _ => return Err("base takes at most two parameters".into()),
    };
    Ok(Base::Finite { p, n })
}

/// Canonical re-serialization (bracket lists, one key per line).
pub fn curve_spec_to_text(model: &CurveModel) -> String {
    let mut out = String::new();
    let base_str = |b: &Base| match b {
        Base::Rational => "Q".to_string(),
        Base::Finite { p, n: 1 } => format!("F({p})"),
        Base::Finite { p, n } => format!("F({p},{n})"),
    };
    match model {
        CurveModel::Hyperelliptic(h) => {
            out.push_str("model = hyperelliptic\n");
            out.push_str(&format!("base = {}\n", base_str(&h.base)));
            let coeffs: Vec<String> = h.f.0.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("f = [{}]\n", coeffs.join(", ")));
            if let Some(l) = &h.label {
                out.push_str(&format!("label = {l}\n"));
            }
        }
        CurveModel::Elliptic(e) => {
            out.push_str("model = elliptic\n");
            out.push_str(&format!("base = {}\n", base_str(&e.base)));
            let a: Vec<String> = e.a.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("a_invariants = [{}]\n", a.join(", ")));
            if let Some(l) = &e.label {
                out.push_str(&format!("label = {l}\n"));
            }
        }
    }
    out
}
