//! JSON file formats: rationals as "p/q" strings, graded spaces as degree →
//! dimension maps, operations as entry lists, matrices as row arrays.
//! Serialization is canonical (sorted keys, two-space indent, trailing
//! newline) so that parse-then-serialize is byte-identical on canonical
//! files.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use hainfty::classical::ClassicalAlgebra;
use hainfty::coder::{Coderivation, Flavor};
use hainfty::graded::{BasisElement, GradedSpace};
use hainfty::hainf::HAInfStructure;
use hainfty::hlinf::HLInfStructure;
use hainfty::linalg::Matrix;
use hainfty::multiop::MultiOp;
use hainfty::rational::Rat;
use hainfty::transfer::Contraction;
use hainfty::twoterm::{CrossedModule, HomAss2Algebra, TwoTermHA};

pub type ParseResult<T> = Result<T, String>;

pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

pub fn rat_str(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(v: &Value) -> ParseResult<Rat> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format!("expected a rational, got {v}")),
    };
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s.as_str(), "1"),
    };
    let p = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let q = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if q == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(p, q))
}

fn field<'a>(v: &'a Value, name: &str) -> ParseResult<&'a Value> {
    v.get(name).ok_or_else(|| format!("missing field {name:?}"))
}

fn usize_field(v: &Value, name: &str) -> ParseResult<usize> {
    field(v, name)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| format!("field {name:?} must be a nonnegative integer"))
}

fn i64_field(v: &Value, name: &str) -> ParseResult<i64> {
    field(v, name)?
        .as_i64()
        .ok_or_else(|| format!("field {name:?} must be an integer"))
}

pub fn space_to_json(s: &GradedSpace) -> Value {
    let mut dims = Map::new();
    for (deg, dim) in s.dims() {
        if *dim > 0 {
            dims.insert(deg.to_string(), json!(dim));
        }
    }
    json!({ "dims": dims })
}

pub fn space_from_json(v: &Value) -> ParseResult<GradedSpace> {
    let dims = field(v, "dims")?
        .as_object()
        .ok_or("\"dims\" must be an object mapping degree to dimension")?;
    let mut pairs = BTreeMap::new();
    for (k, dim) in dims {
        let deg: i64 = k.parse().map_err(|e| format!("bad degree key {k:?}: {e}"))?;
        let n = dim
            .as_u64()
            .ok_or_else(|| format!("dimension for degree {k} must be a nonnegative integer"))?;
        pairs.insert(deg, n as usize);
    }
    Ok(GradedSpace::new(pairs))
}

pub fn op_to_json(op: &MultiOp) -> Value {
    let mut entries = Vec::new();
    for (inputs, out) in op.entries() {
        let ins: Vec<Value> = inputs.iter().map(|e| json!([e.degree, e.index])).collect();
        let outs: Vec<Value> = out
            .iter()
            .map(|(e, c)| json!([e.degree, e.index, rat_str(c)]))
            .collect();
        entries.push(json!({ "in": ins, "out": outs }));
    }
    json!({
        "arity": op.arity(),
        "degree": op.degree(),
        "entries": entries,
    })
}

fn basis_element(v: &Value) -> ParseResult<BasisElement> {
    let pair = v.as_array().ok_or("basis element must be [degree, index]")?;
    if pair.len() != 2 {
        return Err(format!("basis element must be [degree, index], got {v}"));
    }
    let deg = pair[0].as_i64().ok_or("basis-element degree must be an integer")?;
    let idx = pair[1].as_u64().ok_or("basis-element index must be a nonnegative integer")?;
    Ok(BasisElement::new(deg, idx as usize))
}

pub fn op_from_json(v: &Value, source: &GradedSpace, target: &GradedSpace) -> ParseResult<MultiOp> {
    let arity = usize_field(v, "arity")?;
    let degree = i64_field(v, "degree")?;
    let mut op = MultiOp::new(arity, degree, source.clone(), target.clone());
    let entries = field(v, "entries")?.as_array().ok_or("\"entries\" must be an array")?;
    for entry in entries {
        let ins = field(entry, "in")?.as_array().ok_or("\"in\" must be an array")?;
        let inputs: Vec<BasisElement> =
            ins.iter().map(basis_element).collect::<ParseResult<_>>()?;
        let outs = field(entry, "out")?.as_array().ok_or("\"out\" must be an array")?;
        for o in outs {
            let triple = o.as_array().ok_or("output term must be [degree, index, coeff]")?;
            if triple.len() != 3 {
                return Err(format!("output term must be [degree, index, coeff], got {o}"));
            }
            let e = basis_element(&json!([triple[0], triple[1]]))?;
            let c = parse_rat(&triple[2])?;
            op.add_term(&inputs, e, c).map_err(|e| format!("bad operation entry: {e}"))?;
        }
    }
    Ok(op)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| json!(rat_str(m.get(i, j)))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value) -> ParseResult<Matrix> {
    let rows = v.as_array().ok_or("matrix must be an array of rows")?;
    let mut out = Vec::new();
    for row in rows {
        let cells = row.as_array().ok_or("matrix row must be an array")?;
        out.push(cells.iter().map(parse_rat).collect::<ParseResult<Vec<Rat>>>()?);
    }
    Matrix::from_rows(out).map_err(|e| format!("bad matrix: {e}"))
}

pub fn kind_of(v: &Value) -> ParseResult<String> {
    field(v, "kind")?
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| "field \"kind\" must be a string".into())
}

fn ops_map(v: &Value, space: &GradedSpace) -> ParseResult<Vec<MultiOp>> {
    let ops = field(v, "ops")?.as_object().ok_or("\"ops\" must be an object")?;
    let mut out = Vec::new();
    for (k, op_v) in ops {
        let arity: usize = k.parse().map_err(|e| format!("bad arity key {k:?}: {e}"))?;
        let op = op_from_json(op_v, space, space)?;
        if op.arity() != arity {
            return Err(format!("op stored under arity {arity} declares arity {}", op.arity()));
        }
        out.push(op);
    }
    Ok(out)
}

pub fn ha_to_json(s: &HAInfStructure) -> Value {
    let mut ops = Map::new();
    for (k, op) in s.ops() {
        ops.insert(k.to_string(), op_to_json(op));
    }
    json!({
        "kind": "ha",
        "max_arity": s.max_arity(),
        "ops": ops,
        "shifted": s.is_shifted(),
        "space": space_to_json(s.space()),
        "alpha": op_to_json(s.alpha()),
    })
}

pub fn ha_from_json(v: &Value) -> ParseResult<HAInfStructure> {
    let space = space_from_json(field(v, "space")?)?;
    let alpha = op_from_json(field(v, "alpha")?, &space, &space)?;
    let max_arity = usize_field(v, "max_arity")?;
    let shifted = v.get("shifted").and_then(Value::as_bool).unwrap_or(false);
    let mut s = if shifted {
        HAInfStructure::new_shifted(alpha, max_arity)
    } else {
        HAInfStructure::new(alpha, max_arity)
    }
    .map_err(|e| format!("bad structure: {e}"))?;
    for op in ops_map(v, &space)? {
        s.set_op(op).map_err(|e| format!("bad operation: {e}"))?;
    }
    Ok(s)
}

pub fn hl_to_json(s: &HLInfStructure) -> Value {
    let mut ops = Map::new();
    for (k, op) in s.ops() {
        ops.insert(k.to_string(), op_to_json(op));
    }
    json!({
        "kind": "hl",
        "max_arity": s.max_arity(),
        "ops": ops,
        "space": space_to_json(s.space()),
        "alpha": op_to_json(s.alpha()),
    })
}

pub fn hl_from_json(v: &Value) -> ParseResult<HLInfStructure> {
    let space = space_from_json(field(v, "space")?)?;
    let alpha = op_from_json(field(v, "alpha")?, &space, &space)?;
    let max_arity = usize_field(v, "max_arity")?;
    let mut s =
        HLInfStructure::new(alpha, max_arity).map_err(|e| format!("bad structure: {e}"))?;
    for op in ops_map(v, &space)? {
        s.set_op(op).map_err(|e| format!("bad operation: {e}"))?;
    }
    Ok(s)
}

pub fn coder_to_json(d: &Coderivation) -> Value {
    let mut components = Map::new();
    for (k, op) in d.components() {
        components.insert(k.to_string(), op_to_json(op));
    }
    json!({
        "kind": "coderivation",
        "flavor": match d.flavor() { Flavor::Tensor => "tensor", Flavor::Symmetric => "symmetric" },
        "degree": d.degree(),
        "max_arity": d.max_arity(),
        "components": components,
        "space": space_to_json(d.space()),
        "alpha": op_to_json(d.alpha()),
    })
}

pub fn coder_from_json(v: &Value) -> ParseResult<Coderivation> {
    let space = space_from_json(field(v, "space")?)?;
    let alpha = op_from_json(field(v, "alpha")?, &space, &space)?;
    let flavor = match field(v, "flavor")?.as_str() {
        Some("tensor") => Flavor::Tensor,
        Some("symmetric") => Flavor::Symmetric,
        other => return Err(format!("flavor must be \"tensor\" or \"symmetric\", got {other:?}")),
    };
    let degree = i64_field(v, "degree")?;
    let max_arity = usize_field(v, "max_arity")?;
    let mut d = Coderivation::new(flavor, degree, alpha, max_arity)
        .map_err(|e| format!("bad coderivation: {e}"))?;
    let comps =
        field(v, "components")?.as_object().ok_or("\"components\" must be an object")?;
    for (k, op_v) in comps {
        let arity: usize = k.parse().map_err(|e| format!("bad arity key {k:?}: {e}"))?;
        let op = op_from_json(op_v, &space, &space)?;
        if op.arity() != arity {
            return Err(format!(
                "component stored under arity {arity} declares arity {}",
                op.arity()
            ));
        }
        d.set_component(op).map_err(|e| format!("bad component: {e}"))?;
    }
    Ok(d)
}

pub fn series_to_json(terms: &[Coderivation]) -> Value {
    json!({
        "kind": "series",
        "terms": terms.iter().map(coder_to_json).collect::<Vec<Value>>(),
    })
}

pub fn series_from_json(v: &Value) -> ParseResult<Vec<Coderivation>> {
    field(v, "terms")?
        .as_array()
        .ok_or_else(|| "\"terms\" must be an array".to_string())?
        .iter()
        .map(coder_from_json)
        .collect()
}

pub fn contraction_to_json(c: &Contraction) -> Value {
    json!({
        "kind": "contraction",
        "big": space_to_json(c.big()),
        "small": space_to_json(c.small()),
        "d_a": op_to_json(c.d_a()),
        "d_h": op_to_json(c.d_h()),
        "alpha": op_to_json(c.alpha()),
        "p": op_to_json(c.p()),
        "i": op_to_json(c.i()),
        "h": op_to_json(c.h()),
    })
}

pub fn contraction_from_json(v: &Value) -> ParseResult<Contraction> {
    let big = space_from_json(field(v, "big")?)?;
    let small = space_from_json(field(v, "small")?)?;
    Contraction::new(
        op_from_json(field(v, "d_a")?, &big, &big)?,
        op_from_json(field(v, "d_h")?, &small, &small)?,
        op_from_json(field(v, "alpha")?, &big, &big)?,
        op_from_json(field(v, "p")?, &big, &small)?,
        op_from_json(field(v, "i")?, &small, &big)?,
        op_from_json(field(v, "h")?, &big, &big)?,
    )
    .map_err(|e| format!("bad contraction: {e}"))
}

pub fn twoterm_to_json(t: &TwoTermHA) -> Value {
    json!({
        "kind": "twoterm",
        "d": matrix_to_json(t.d()),
        "mu00": matrix_to_json(t.mu00()),
        "mu01": matrix_to_json(t.mu01()),
        "mu10": matrix_to_json(t.mu10()),
        "mu3": matrix_to_json(t.mu3()),
        "alpha0": matrix_to_json(t.alpha0()),
        "alpha1": matrix_to_json(t.alpha1()),
    })
}

pub fn twoterm_from_json(v: &Value) -> ParseResult<TwoTermHA> {
    TwoTermHA::new(
        matrix_from_json(field(v, "d")?)?,
        matrix_from_json(field(v, "mu00")?)?,
        matrix_from_json(field(v, "mu01")?)?,
        matrix_from_json(field(v, "mu10")?)?,
        matrix_from_json(field(v, "mu3")?)?,
        matrix_from_json(field(v, "alpha0")?)?,
        matrix_from_json(field(v, "alpha1")?)?,
    )
    .map_err(|e| format!("bad two-term structure: {e}"))
}

fn algebra_to_json(a: &ClassicalAlgebra) -> Value {
    json!({
        "dim": a.dim(),
        "mu": matrix_to_json(a.mu()),
        "alpha": matrix_to_json(a.alpha()),
    })
}

fn algebra_from_json(v: &Value) -> ParseResult<ClassicalAlgebra> {
    ClassicalAlgebra::new(
        usize_field(v, "dim")?,
        matrix_from_json(field(v, "mu")?)?,
        matrix_from_json(field(v, "alpha")?)?,
    )
    .map_err(|e| format!("bad algebra: {e}"))
}

pub fn crossed_to_json(c: &CrossedModule) -> Value {
    json!({
        "kind": "crossed",
        "a": algebra_to_json(c.a()),
        "b": algebra_to_json(c.b()),
        "dt": matrix_to_json(c.dt()),
        "phi_left": matrix_to_json(c.phi_left()),
        "phi_right": matrix_to_json(c.phi_right()),
    })
}

pub fn crossed_from_json(v: &Value) -> ParseResult<CrossedModule> {
    CrossedModule::new(
        algebra_from_json(field(v, "a")?)?,
        algebra_from_json(field(v, "b")?)?,
        matrix_from_json(field(v, "dt")?)?,
        matrix_from_json(field(v, "phi_left")?)?,
        matrix_from_json(field(v, "phi_right")?)?,
    )
    .map_err(|e| format!("bad crossed module: {e}"))
}

pub fn homass2_to_json(c: &HomAss2Algebra) -> Value {
    json!({
        "kind": "homass2",
        "s": matrix_to_json(c.s()),
        "t": matrix_to_json(c.t()),
        "i": matrix_to_json(c.i()),
        "mu_obj": matrix_to_json(c.mu_obj()),
        "mu_mor": matrix_to_json(c.mu_mor()),
        "phi0": matrix_to_json(c.phi0()),
        "phi1": matrix_to_json(c.phi1()),
        "assoc": matrix_to_json(c.assoc()),
    })
}

pub fn homass2_from_json(v: &Value) -> ParseResult<HomAss2Algebra> {
    HomAss2Algebra::new(
        matrix_from_json(field(v, "s")?)?,
        matrix_from_json(field(v, "t")?)?,
        matrix_from_json(field(v, "i")?)?,
        matrix_from_json(field(v, "mu_obj")?)?,
        matrix_from_json(field(v, "mu_mor")?)?,
        matrix_from_json(field(v, "phi0")?)?,
        matrix_from_json(field(v, "phi1")?)?,
        matrix_from_json(field(v, "assoc")?)?,
    )
    .map_err(|e| format!("bad 2-algebra: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hainfty::fixtures;

    #[test]
    fn structure_files_roundtrip() {
        for s in [fixtures::yau_poly(2, 3), fixtures::dg_twisted(3, 3)] {
            let v = ha_to_json(&s);
            assert_eq!(ha_from_json(&v).unwrap(), s);
            // canonical text re-parses to the same document
            let text = canonical(&v);
            let v2: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(canonical(&v2), text);
        }
    }

    #[test]
    fn coderivation_files_roundtrip() {
        let d = fixtures::yau_poly(2, 3).to_coderivation().unwrap();
        let v = coder_to_json(&d);
        let back = coder_from_json(&v).unwrap();
        assert_eq!(canonical(&coder_to_json(&back)), canonical(&v));
    }

    #[test]
    fn matrix_files_roundtrip() {
        let t = fixtures::skeletal_twoterm(3);
        let v = twoterm_to_json(&t);
        assert_eq!(canonical(&twoterm_to_json(&twoterm_from_json(&v).unwrap())), canonical(&v));

        let c = fixtures::dg_contraction(2);
        let v = contraction_to_json(&c);
        let text = canonical(&v);
        let back = contraction_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(canonical(&contraction_to_json(&back)), text);
    }

    #[test]
    fn zero_denominators_are_rejected() {
        assert!(parse_rat(&json!("1/0")).is_err());
        assert!(parse_rat(&json!("3/4")).is_ok());
        assert_eq!(rat_str(&parse_rat(&json!("-6/4")).unwrap()), "-3/2");
    }
}
