//! File formats: structure documents, successor files and reports.
//!
//! A structure document is JSON:
//!
//! ```json
//! {"signature": {"E": 2}, "universe": 3, "relations": {"E": [[0, 1], [1, 2], [2, 0]]}}
//! ```
//!
//! `universe` is either a size `n` (elements `0..n`) or a list of labels,
//! which are renumbered in list order. An optional `succ` field lists
//! successor pairs.
//!
//! A successor file lists one `i -> succ(i)` line per element, optional
//! annotation lines describing the construction, and a closing SHA-256 of
//! everything before it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::logic::{VerificationReport, WeaveCertificate};
use crate::structure::{Elem, Signature, Structure, LIN_SUCC, SUCC};
use crate::weaver::{Branch, WeaveResult};

/// A parsed structure document together with the original element labels.
#[derive(Clone, Debug)]
pub struct ParsedStructure {
    pub structure: Structure,
    /// `labels[i]` is the document label of element `i`.
    pub labels: Vec<String>,
}

pub fn read_structure(path: &Path) -> Result<ParsedStructure> {
    let text = read_file(path)?;
    parse_structure(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_structure(text: &str) -> Result<ParsedStructure> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        Error::input(format!("malformed document at line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let doc = doc
        .as_object()
        .ok_or_else(|| Error::input("document must be a JSON object"))?;
    if let Some(k) = doc
        .keys()
        .find(|k| !["signature", "universe", "relations", "succ"].contains(&k.as_str()))
    {
        return Err(Error::input(format!("unknown field {k:?}")));
    }

    let sig_obj = field(doc, "signature")?
        .as_object()
        .ok_or_else(|| Error::input("field \"signature\" must map relation names to arities"))?;
    let mut sig = Vec::new();
    for (name, arity) in sig_obj {
        if name == SUCC || name == LIN_SUCC {
            return Err(Error::input(format!(
                "signature.{name}: the name is reserved for the successor relation"
            )));
        }
        let a = arity
            .as_u64()
            .filter(|&a| a >= 1)
            .ok_or_else(|| Error::input(format!("signature.{name}: arity must be a positive integer")))?;
        sig.push((name.clone(), a as usize));
    }
    let signature = Arc::new(Signature::new(sig)?);

    let (labels, lookup) = match field(doc, "universe")? {
        Value::Number(n) => {
            let n = n
                .as_u64()
                .ok_or_else(|| Error::input("universe: size must be a non-negative integer"))?;
            let n = usize::try_from(n)
                .ok()
                .filter(|&n| n <= Elem::MAX as usize)
                .ok_or_else(|| Error::input("universe: size too large"))?;
            ((0..n).map(|i| i.to_string()).collect::<Vec<_>>(), None)
        }
        Value::Array(items) => {
            let mut labels = Vec::with_capacity(items.len());
            let mut lookup = HashMap::new();
            for (i, v) in items.iter().enumerate() {
                let l = label_of(v).ok_or_else(|| {
                    Error::input(format!("universe[{i}]: labels must be strings or integers"))
                })?;
                if lookup.insert(l.clone(), i as Elem).is_some() {
                    return Err(Error::input(format!("universe[{i}]: duplicate label {l:?}")));
                }
                labels.push(l);
            }
            (labels, Some(lookup))
        }
        _ => return Err(Error::input("universe: expected a size or a list of labels")),
    };
    let n = labels.len();
    let resolve = |v: &Value, path: &dyn Fn() -> String| -> Result<Elem> {
        match &lookup {
            None => v
                .as_u64()
                .filter(|&e| (e as usize) < n)
                .map(|e| e as Elem)
                .ok_or_else(|| Error::input(format!("{}: {v} is not an element of 0..{n}", path()))),
            Some(map) => label_of(v)
                .and_then(|l| map.get(&l).copied())
                .ok_or_else(|| Error::input(format!("{}: {v} is not a universe label", path()))),
        }
    };

    let rel_obj = match doc.get("relations") {
        None => Map::new(),
        Some(v) => v
            .as_object()
            .cloned()
            .ok_or_else(|| Error::input("field \"relations\" must map relation names to tuple lists"))?,
    };
    if let Some(name) = rel_obj.keys().find(|k| signature.index_of(k).is_none()) {
        return Err(Error::input(format!("relations.{name}: relation not declared in the signature")));
    }
    let mut tables = Vec::with_capacity(signature.len());
    for (name, arity) in signature.relations() {
        let mut tuples = Vec::new();
        if let Some(list) = rel_obj.get(name) {
            let list = list
                .as_array()
                .ok_or_else(|| Error::input(format!("relations.{name}: expected a list of tuples")))?;
            for (ti, t) in list.iter().enumerate() {
                let t = t
                    .as_array()
                    .ok_or_else(|| Error::input(format!("relations.{name}[{ti}]: expected a tuple")))?;
                if t.len() != *arity {
                    return Err(Error::input(format!(
                        "relations.{name}[{ti}]: tuple of length {} for a relation of arity {arity}",
                        t.len()
                    )));
                }
                let tuple = t
                    .iter()
                    .enumerate()
                    .map(|(k, v)| resolve(v, &|| format!("relations.{name}[{ti}][{k}]")))
                    .collect::<Result<Vec<Elem>>>()?;
                tuples.push(tuple);
            }
        }
        tables.push(tuples);
    }
    let mut structure = Structure::new(signature, n, tables)?;
    if let Some(succ) = doc.get("succ") {
        let list = succ
            .as_array()
            .ok_or_else(|| Error::input("succ: expected a list of pairs"))?;
        let mut pairs = Vec::with_capacity(list.len());
        for (i, p) in list.iter().enumerate() {
            match p.as_array().map(Vec::as_slice) {
                Some([a, b]) => pairs.push((
                    resolve(a, &|| format!("succ[{i}][0]"))?,
                    resolve(b, &|| format!("succ[{i}][1]"))?,
                )),
                _ => return Err(Error::input(format!("succ[{i}]: expected a pair"))),
            }
        }
        structure = structure.with_succ(&pairs)?;
    }
    Ok(ParsedStructure { structure, labels })
}

fn field<'a>(doc: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    doc.get(name)
        .ok_or_else(|| Error::input(format!("missing field {name:?}")))
}

fn label_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) if n.is_u64() || n.is_i64() => Some(n.to_string()),
        _ => None,
    }
}

/// The document for `s`, with elements written as `0..n`.
pub fn structure_to_json(s: &Structure) -> String {
    let sig = s.signature();
    let mut signature = Map::new();
    let mut relations = Map::new();
    for (i, (name, arity)) in sig.relations().iter().enumerate() {
        signature.insert(name.clone(), json!(arity));
        let tuples: Vec<Value> = s.relation(i).tuples().map(|t| json!(t)).collect();
        relations.insert(name.clone(), Value::Array(tuples));
    }
    let mut doc = Map::new();
    doc.insert("signature".into(), Value::Object(signature));
    doc.insert("universe".into(), json!(s.size()));
    doc.insert("relations".into(), Value::Object(relations));
    if s.succ().is_some() {
        let pairs: Vec<Value> = s.succ_pairs().iter().map(|&(a, b)| json!([a, b])).collect();
        doc.insert("succ".into(), Value::Array(pairs));
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
    out.push('\n');
    out
}

/// A successor relation with the construction data of one side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuccessorFile {
    pub succ: Vec<Elem>,
    pub branch: Option<Branch>,
    pub rare: BTreeSet<Elem>,
    pub anchors: Vec<(Elem, Elem)>,
    pub core: BTreeSet<Elem>,
    /// The transfer map on the core (first structure only).
    pub transfer: Vec<(Elem, Elem)>,
}

const SUCC_HEADER: &str = "succinv successor v1";

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::General => "general",
        Branch::Isomorphism => "isomorphism",
        Branch::TrivialRadius => "trivial_radius",
    }
}

fn join_elems<'a>(it: impl IntoIterator<Item = &'a Elem>) -> String {
    it.into_iter().map(|e| format!(" {e}")).collect()
}

fn join_pairs(pairs: &[(Elem, Elem)]) -> String {
    pairs.iter().map(|(a, b)| format!(" {a}:{b}")).collect()
}

pub fn write_successor(f: &SuccessorFile) -> String {
    let mut body = format!("{SUCC_HEADER}\nuniverse {}\n", f.succ.len());
    for (i, s) in f.succ.iter().enumerate() {
        body.push_str(&format!("{i} -> {s}\n"));
    }
    if let Some(b) = f.branch {
        body.push_str(&format!("branch {}\n", branch_name(b)));
        body.push_str(&format!("rare{}\n", join_elems(&f.rare)));
        body.push_str(&format!("anchors{}\n", join_pairs(&f.anchors)));
        body.push_str(&format!("core{}\n", join_elems(&f.core)));
        body.push_str(&format!("transfer{}\n", join_pairs(&f.transfer)));
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(&format!("sha256 {digest}\n"));
    body
}

pub fn parse_successor(text: &str) -> Result<SuccessorFile> {
    let Some(pos) = text.rfind("sha256 ") else {
        return Err(Error::input("successor file: missing sha256 line"));
    };
    let (body, tail) = text.split_at(pos);
    if !(body.is_empty() || body.ends_with('\n')) {
        return Err(Error::input("successor file: sha256 must start a line"));
    }
    let claimed = tail["sha256 ".len()..].trim();
    let actual = hex::encode(Sha256::digest(body.as_bytes()));
    if claimed != actual {
        return Err(Error::input(format!(
            "successor file: content hash mismatch (file says {claimed}, content hashes to {actual})"
        )));
    }
    let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l));
    let err = |line: usize, msg: &str| Error::input(format!("successor file, line {line}: {msg}"));
    match lines.next() {
        Some((_, l)) if l == SUCC_HEADER => {}
        _ => return Err(err(1, &format!("expected header {SUCC_HEADER:?}"))),
    }
    let n: usize = match lines.next() {
        Some((ln, l)) => l
            .strip_prefix("universe ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| err(ln, "expected \"universe <n>\""))?,
        None => return Err(err(2, "expected \"universe <n>\"")),
    };
    let mut f = SuccessorFile {
        succ: Vec::with_capacity(n),
        ..Default::default()
    };
    let num = |ln: usize, s: &str| -> Result<Elem> {
        s.parse::<Elem>()
            .ok()
            .filter(|&e| (e as usize) < n)
            .ok_or_else(|| err(ln, &format!("{s:?} is not an element of 0..{n}")))
    };
    let pair = |ln: usize, s: &str| -> Result<(Elem, Elem)> {
        let (a, b) = s.split_once(':').ok_or_else(|| err(ln, &format!("expected a:b, got {s:?}")))?;
        Ok((num(ln, a)?, num(ln, b)?))
    };
    for (ln, line) in lines {
        let mut words = line.split_whitespace();
        let Some(head) = words.next() else { continue };
        let rest: Vec<&str> = words.collect();
        match head {
            "branch" => {
                f.branch = Some(match rest.as_slice() {
                    ["general"] => Branch::General,
                    ["isomorphism"] => Branch::Isomorphism,
                    ["trivial_radius"] => Branch::TrivialRadius,
                    _ => return Err(err(ln, "unknown branch")),
                })
            }
            "rare" => f.rare = rest.iter().map(|s| num(ln, s)).collect::<Result<_>>()?,
            "core" => f.core = rest.iter().map(|s| num(ln, s)).collect::<Result<_>>()?,
            "anchors" => f.anchors = rest.iter().map(|s| pair(ln, s)).collect::<Result<_>>()?,
            "transfer" => f.transfer = rest.iter().map(|s| pair(ln, s)).collect::<Result<_>>()?,
            _ => match rest.as_slice() {
                ["->", to] => {
                    let from = num(ln, head)?;
                    if from as usize != f.succ.len() {
                        return Err(err(ln, &format!("expected the line for element {}", f.succ.len())));
                    }
                    f.succ.push(num(ln, to)?);
                }
                _ => return Err(err(ln, &format!("unrecognized line {line:?}"))),
            },
        }
    }
    if f.succ.len() != n {
        return Err(Error::input(format!(
            "successor file lists {} of {n} elements",
            f.succ.len()
        )));
    }
    Ok(f)
}

pub fn read_successor(path: &Path) -> Result<SuccessorFile> {
    parse_successor(&read_file(path)?).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        e => e,
    })
}

/// Splits a certificate into the two per-side successor files.
pub fn successor_files(cert: &WeaveCertificate) -> (SuccessorFile, SuccessorFile) {
    (
        SuccessorFile {
            succ: cert.succ1.clone(),
            branch: cert.branch,
            rare: cert.rare1.clone(),
            anchors: cert.anchors1.clone(),
            core: cert.core1.clone(),
            transfer: cert.transfer.clone(),
        },
        SuccessorFile {
            succ: cert.succ2.clone(),
            branch: cert.branch,
            rare: cert.rare2.clone(),
            anchors: cert.anchors2.clone(),
            core: cert.core2.clone(),
            transfer: Vec::new(),
        },
    )
}

/// Reassembles a certificate from the two per-side files.
pub fn certificate_from_files(f1: &SuccessorFile, f2: &SuccessorFile) -> Result<WeaveCertificate> {
    if f1.branch != f2.branch {
        return Err(Error::input("the two successor files come from different constructions"));
    }
    Ok(WeaveCertificate {
        succ1: f1.succ.clone(),
        succ2: f2.succ.clone(),
        rare1: f1.rare.clone(),
        rare2: f2.rare.clone(),
        anchors1: f1.anchors.clone(),
        anchors2: f2.anchors.clone(),
        core1: f1.core.clone(),
        core2: f2.core.clone(),
        transfer: f1.transfer.clone(),
        branch: f1.branch,
    })
}

#[derive(Serialize)]
struct WeaveSection<'a> {
    branch: Branch,
    sizes: [usize; 2],
    params: &'a crate::params::ParamsBundle,
    classification: &'a crate::weaver::Classification,
    diagnostics: [&'a crate::weaver::Diagnostics; 2],
    successor_sha256: [String; 2],
}

/// JSON report of a weave and its verification.
pub fn weave_report(res: &WeaveResult, verification: &VerificationReport) -> String {
    let cert = WeaveCertificate::from_result(res);
    let (f1, f2) = successor_files(&cert);
    let digest = |f: &SuccessorFile| hex::encode(Sha256::digest(write_successor(f).as_bytes()));
    let section = WeaveSection {
        branch: res.branch,
        sizes: [res.succ1.len(), res.succ2.len()],
        params: &res.params,
        classification: &res.classification,
        diagnostics: [&res.state1.diagnostics, &res.state2.diagnostics],
        successor_sha256: [digest(&f1), digest(&f2)],
    };
    render(&BTreeMap::from([
        ("verification", to_value(verification)),
        ("weave", to_value(&section)),
    ]))
}

/// JSON report of a stand-alone verification; its `verification` section is
/// identical to the one in [`weave_report`] for the same successors.
pub fn verify_report(verification: &VerificationReport) -> String {
    render(&BTreeMap::from([("verification", to_value(verification))]))
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types always serialize")
}
