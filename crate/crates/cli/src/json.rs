//! JSON encodings of the core types.
//!
//! Rationals are strings `"p/q"` (or `"p"`), words are arrays of symbol names,
//! and every tensor carries its alphabet and truncation.

use std::sync::{Arc, OnceLock};

use jtl_core::fox::{Expansion, FreeGroupAutomorphism, GroupLetter, GroupWord};
use jtl_core::magnus::QuotientAlgebra;
use jtl_core::scalar::parse_scalar;
use jtl_core::trees::{Node, Tree};
use jtl_core::{
    Alphabet, CyclicElement, Derivation, FilteredAutomorphism, RMatrix, Rational, Scalar, SymElement, Tensor, Word,
};
use serde_json::{json, Map, Value};

use crate::error::{input_error, CliError, CliResult};

const DEFAULT_TRUNC_MAX: usize = 16;

/// The largest truncation accepted from input, read once from `JTL_TRUNC_MAX`.
pub fn trunc_max() -> CliResult<usize> {
    static MAX: OnceLock<Result<usize, String>> = OnceLock::new();
    MAX.get_or_init(|| match std::env::var("JTL_TRUNC_MAX") {
        Ok(v) => v.trim().parse().map_err(|_| format!("JTL_TRUNC_MAX must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_TRUNC_MAX),
    })
    .clone()
    .map_err(CliError::Input)
}

pub fn check_trunc(trunc: usize) -> CliResult<()> {
    let max = trunc_max()?;
    if trunc > max {
        return input_error(format!("truncation {trunc} exceeds JTL_TRUNC_MAX={max}"));
    }
    Ok(())
}

/// `a1..ag, b1..bg` become the symplectic alphabet of genus `g`; anything else is unpaired.
pub fn alphabet_from_names(names: Vec<String>) -> CliResult<Arc<Alphabet>> {
    if !names.is_empty() && names.len().is_multiple_of(2) {
        let candidate = Alphabet::symplectic(names.len() / 2);
        if candidate.names() == names.as_slice() {
            return Ok(candidate);
        }
    }
    Ok(Alphabet::new(names)?)
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn parse_rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse_scalar(s).ok_or_else(|| CliError::Input(format!("invalid rational `{s}`"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_i64(i)),
            None => input_error(format!("coefficient {n} is not an integer; write it as \"p/q\"")),
        },
        _ => input_error("coefficient must be a string \"p/q\" or an integer"),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::Input(format!("missing field `{key}`")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::Input(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::Input(format!("{what} must be an object")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| CliError::Input(format!("{what} must be a string")))
}

fn as_usize(v: &Value, what: &str) -> CliResult<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| CliError::Input(format!("{what} must be a non-negative integer")))
}

fn names(v: &Value, what: &str) -> CliResult<Vec<String>> {
    as_array(v, what)?.iter().map(|s| as_str(s, what).map(str::to_string)).collect()
}

fn word(alphabet: &Alphabet, v: &Value) -> CliResult<Word> {
    Ok(alphabet.parse_word(&names(v, "word")?)?)
}

fn terms(items: Vec<(Vec<String>, String)>) -> Value {
    Value::Array(items.into_iter().map(|(w, c)| json!({ "word": w, "coeff": c })).collect())
}

fn parse_terms(alphabet: &Alphabet, v: &Value) -> CliResult<Vec<(Word, Rational)>> {
    as_array(v, "terms")?
        .iter()
        .map(|t| Ok((word(alphabet, field(t, "word")?)?, parse_rational(field(t, "coeff")?)?)))
        .collect()
}

pub fn tensor(t: &Tensor) -> Value {
    json!({
        "alphabet": t.alphabet().names(),
        "trunc": t.trunc(),
        "terms": terms(t.render()),
    })
}

/// Reads a tensor; with `expected`, its alphabet must have the same symbols.
pub fn parse_tensor(v: &Value, expected: Option<&Arc<Alphabet>>) -> CliResult<Tensor> {
    let names = names(field(v, "alphabet")?, "alphabet")?;
    let alphabet = match expected {
        Some(a) if a.names() == names.as_slice() => a.clone(),
        Some(a) => return input_error(format!("alphabet {names:?} differs from {:?}", a.names())),
        None => alphabet_from_names(names)?,
    };
    let trunc = as_usize(field(v, "trunc")?, "trunc")?;
    check_trunc(trunc)?;
    Ok(Tensor::from_terms(&alphabet, trunc, parse_terms(&alphabet, field(v, "terms")?)?))
}

pub fn cyclic(c: &CyclicElement) -> Value {
    json!({ "terms": terms(c.render()) })
}

pub fn sym(s: &SymElement) -> Value {
    json!({ "terms": terms(s.render()) })
}

fn images_json(alphabet: &Alphabet, images: &[Tensor]) -> Value {
    let map: Map<String, Value> = alphabet.names().iter().cloned().zip(images.iter().map(tensor)).collect();
    json!({ "images": map })
}

pub fn derivation(d: &Derivation) -> Value {
    images_json(d.alphabet(), d.images())
}

/// Images keyed by symbol, all sharing one alphabet and truncation.
fn parse_images(v: &Value) -> CliResult<(Arc<Alphabet>, usize, Vec<Tensor>)> {
    let map = as_object(field(v, "images")?, "images")?;
    let first = map.values().next().ok_or_else(|| CliError::Input("`images` is empty".into()))?;
    let alphabet = parse_tensor(first, None)?.alphabet().clone();
    let mut images = Vec::with_capacity(alphabet.len());
    for name in alphabet.names() {
        let img = map.get(name).ok_or_else(|| CliError::Input(format!("no image given for `{name}`")))?;
        images.push(parse_tensor(img, Some(&alphabet))?);
    }
    if let Some(extra) = map.keys().find(|k| alphabet.index_of(k).is_err()) {
        return input_error(format!("image given for unknown symbol `{extra}`"));
    }
    let trunc = images[0].trunc();
    if images.iter().any(|t| t.trunc() != trunc) {
        return input_error("all images must share one truncation");
    }
    Ok((alphabet, trunc, images))
}

pub fn parse_derivation(v: &Value) -> CliResult<Derivation> {
    let (alphabet, trunc, images) = parse_images(v)?;
    Ok(Derivation::new(&alphabet, trunc, images)?)
}

fn group_word(alphabet: &Alphabet, v: &Value) -> CliResult<GroupWord> {
    let letters = as_array(v, "group word")?
        .iter()
        .map(|s| {
            let s = as_str(s, "group letter")?;
            let (name, inverse) = match s.strip_prefix('-') {
                Some(rest) => (rest, true),
                None => (s, false),
            };
            Ok(GroupLetter { generator: alphabet.index_of(name)?, inverse })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(GroupWord::new(letters))
}

/// Either tensor images, or free-group images with `inverse_images` and `trunc`
/// (induced through the exponential expansion, or `"expansion": "magnus"`).
pub fn parse_automorphism(v: &Value) -> CliResult<FilteredAutomorphism> {
    let images = as_object(field(v, "images")?, "images")?;
    if !images.values().all(Value::is_array) {
        let (alphabet, trunc, images) = parse_images(v)?;
        return Ok(FilteredAutomorphism::new(&alphabet, trunc, images)?);
    }
    let alphabet = alphabet_from_names(images.keys().cloned().collect())?;
    let trunc = as_usize(field(v, "trunc")?, "trunc")?;
    check_trunc(trunc)?;
    let inverse = as_object(field(v, "inverse_images")?, "inverse_images")?;
    let lookup = |map: &Map<String, Value>| -> CliResult<Vec<GroupWord>> {
        alphabet
            .names()
            .iter()
            .map(|n| {
                let w = map.get(n).ok_or_else(|| CliError::Input(format!("no image given for `{n}`")))?;
                group_word(&alphabet, w)
            })
            .collect()
    };
    let f = FreeGroupAutomorphism::new(lookup(images)?, lookup(inverse)?)?;
    let theta = match v.get("expansion").map(|e| as_str(e, "expansion")).transpose()? {
        None | Some("exponential") => Expansion::exponential(&alphabet, trunc),
        Some("magnus") => Expansion::magnus(&alphabet, trunc),
        Some(other) => return input_error(format!("unknown expansion `{other}` (expected exponential or magnus)")),
    };
    Ok(jtl_core::fox::induced_automorphism(&theta, &f)?)
}

pub fn rmatrix(p: &RMatrix) -> Value {
    let rows: Vec<Value> = p.rows().iter().map(|r| Value::Array(r.iter().map(tensor).collect())).collect();
    json!({ "m": p.algebra().m(), "trunc": p.algebra().trunc(), "entries": rows })
}

pub fn parse_rmatrix(v: &Value) -> CliResult<RMatrix> {
    let m = as_usize(field(v, "m")?, "m")?;
    let trunc = as_usize(field(v, "trunc")?, "trunc")?;
    check_trunc(trunc)?;
    let rows = as_array(field(v, "entries")?, "entries")?;
    let mut alphabet: Option<Arc<Alphabet>> = None;
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let mut out = Vec::new();
        for e in as_array(row, "matrix row")? {
            let t = parse_tensor(e, alphabet.as_ref())?;
            if t.trunc() != trunc {
                return input_error(format!("entry truncation {} differs from {trunc}", t.trunc()));
            }
            alphabet.get_or_insert_with(|| t.alphabet().clone());
            out.push(t);
        }
        parsed.push(out);
    }
    let alphabet = alphabet.ok_or_else(|| CliError::Input("matrix has no entries".into()))?;
    let algebra = Arc::new(QuotientAlgebra::new(&alphabet, m, trunc)?);
    Ok(RMatrix::new(&algebra, parsed)?)
}

pub fn expansion(theta: &Expansion<Rational>, genus: usize) -> Value {
    let images: Vec<Value> = theta.images().iter().map(tensor).collect();
    json!({ "alpha": images[..genus], "beta": images[genus..], "N": theta.trunc() })
}

/// Trees use the symplectic alphabet whose genus is the largest index among `a<i>`/`b<i>` leaves.
pub fn parse_tree(v: &Value) -> CliResult<Tree> {
    let mut leaves = Vec::new();
    if let Some(c) = v.get("caterpillar") {
        leaves = names(c, "caterpillar")?;
    } else {
        leaves.push(as_str(field(v, "root")?, "root")?.to_string());
        collect_leaves(field(v, "body")?, &mut leaves)?;
    }
    let genus = leaves
        .iter()
        .map(|l| {
            l.strip_prefix('a')
                .or_else(|| l.strip_prefix('b'))
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| CliError::Input(format!("leaf `{l}` is not a symplectic symbol a<i> or b<i>")))
        })
        .try_fold(1, |g, i| i.map(|i| g.max(i)))?;
    if genus > 128 {
        return input_error("genus above 128 is not supported");
    }
    let alphabet = Alphabet::symplectic(genus);
    if let Some(c) = v.get("caterpillar") {
        return Ok(Tree::caterpillar(&alphabet, &names(c, "caterpillar")?)?);
    }
    let root = alphabet.index_of(as_str(field(v, "root")?, "root")?)?;
    Ok(Tree::new(&alphabet, root, parse_node(&alphabet, field(v, "body")?)?)?)
}

fn collect_leaves(v: &Value, out: &mut Vec<String>) -> CliResult<()> {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(a) if a.len() == 2 => {
            collect_leaves(&a[0], out)?;
            collect_leaves(&a[1], out)?;
        }
        _ => return input_error("tree body nodes must be leaf names or two-element arrays"),
    }
    Ok(())
}

fn parse_node(alphabet: &Alphabet, v: &Value) -> CliResult<Node> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Node::branch(parse_node(alphabet, &a[0])?, parse_node(alphabet, &a[1])?)),
        Value::String(s) => Ok(Node::Leaf(alphabet.index_of(s)?)),
        _ => input_error("tree body nodes must be leaf names or two-element arrays"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_roundtrip() {
        let h = Alphabet::symplectic(1);
        let t = Tensor::from_symbols(&h, 3, &[(&["a1", "b1"], 2), (&["b1"], -1)]).unwrap();
        let t = &t + &Tensor::scalar(&h, 3, "1/3".parse().unwrap());
        let v = tensor(&t);
        assert_eq!(v["terms"][0], json!({ "word": [], "coeff": "1/3" }));
        let back = parse_tensor(&v, None).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.alphabet().genus(), Some(1));
    }

    #[test]
    fn rationals_accept_integers_and_fractions() {
        assert_eq!(parse_rational(&json!(3)).unwrap(), Rational::from_i64(3));
        assert_eq!(parse_rational(&json!("-2/4")).unwrap().to_string(), "-1/2");
        assert!(parse_rational(&json!("x")).is_err());
        assert!(parse_rational(&json!(0.5)).is_err());
    }

    #[test]
    fn nested_and_caterpillar_trees_agree() {
        let cat = parse_tree(&json!({ "caterpillar": ["a1", "b1", "a1", "b1"] })).unwrap();
        let nested = parse_tree(&json!({ "root": "a1", "body": ["b1", ["a1", "b1"]] })).unwrap();
        assert_eq!(cat, nested);
        assert_eq!(parse_tree(&json!({ "caterpillar": ["a2", "b1", "a1"] })).unwrap().alphabet().genus(), Some(2));
        assert!(parse_tree(&json!({ "root": "a1", "body": ["b1"] })).is_err());
        assert!(parse_tree(&json!({ "caterpillar": ["x", "b1", "a1"] })).is_err());
    }

    #[test]
    fn derivation_roundtrip_and_missing_image() {
        let h = Alphabet::standard(2);
        let d = Derivation::elementary(&h, 3, 0, &Word::from_slice(&[0, 1]));
        assert_eq!(parse_derivation(&derivation(&d)).unwrap(), d);
        let mut v = derivation(&d);
        v["images"].as_object_mut().unwrap().remove("x2");
        assert!(parse_derivation(&v).is_err());
    }

    #[test]
    fn group_automorphism_is_induced() {
        let v = json!({
            "images": { "g1": ["g2", "g1", "-g2"], "g2": ["g2"] },
            "inverse_images": { "g1": ["-g2", "g1", "g2"], "g2": ["g2"] },
            "trunc": 3,
        });
        let psi = parse_automorphism(&v).unwrap();
        assert!(psi.is_iaut());
        assert_eq!(psi.alphabet().names(), ["g1", "g2"]);
    }
}
