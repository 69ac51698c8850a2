//! First-order formulas and their parenthesized prefix syntax:
//! `(exists x (and (E x y) (not (= x y))))`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// The empty conjunction is true.
    And(Vec<Formula>),
    /// The empty disjunction is false.
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Eq(String, String),
    Atom(String, Vec<String>),
}

const KEYWORDS: [&str; 6] = ["exists", "forall", "and", "or", "not", "="];

impl Formula {
    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not(Box::new(body))
    }

    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn atom(rel: impl Into<String>, vars: &[&str]) -> Self {
        Formula::Atom(rel.into(), vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let f = parse_formula(&tokens, &mut pos)?;
        if let Some(tok) = tokens.get(pos) {
            return Err(Error::input(format!(
                "formula: unexpected trailing input at line {}, column {}",
                tok.line, tok.col
            )));
        }
        Ok(f)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Not(b) => b.collect_free(bound, out),
            Formula::Eq(a, b) => {
                for v in [a, b] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Atom(_, vs) => {
                for v in vs {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Not(b) => b.quantifier_rank(),
            Formula::Eq(..) | Formula::Atom(..) => 0,
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Atom(_, vs) => out.extend(vs.iter().cloned()),
            _ => {}
        });
        out
    }

    pub fn relation_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(r, _) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    pub fn uses_relation(&self, name: &str) -> bool {
        self.relation_names().contains(name)
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Exists(_, b) | Formula::Forall(_, b) | Formula::Not(b) => b.visit(f),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.visit(f)),
            Formula::Eq(..) | Formula::Atom(..) => {}
        }
    }

    /// Rebuilds the formula bottom-up, replacing nodes through `f`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&str, &[String]) -> Option<Formula>) -> Formula {
        match self {
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(b.map_atoms(f))),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.map_atoms(f))),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Not(b) => Formula::Not(Box::new(b.map_atoms(f))),
            Formula::Eq(..) => self.clone(),
            Formula::Atom(r, vs) => f(r, vs).unwrap_or_else(|| self.clone()),
        }
    }

    /// A variable name not occurring in `self`, based on `base`.
    pub fn fresh_variable(&self, base: &str) -> String {
        let used = self.variables();
        if !used.contains(base) && !KEYWORDS.contains(&base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|v| !used.contains(v))
            .expect("unbounded supply of names")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Exists(v, b) => write!(f, "(exists {v} {b})"),
            Formula::Forall(v, b) => write!(f, "(forall {v} {b})"),
            Formula::And(fs) | Formula::Or(fs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            Formula::Not(b) => write!(f, "(not {b})"),
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Atom(r, vs) => {
                write!(f, "({r}")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(ci, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c == '(' || c == ')' {
                tokens.push(Token {
                    text: c.to_string(),
                    line: li + 1,
                    col: ci + 1,
                });
                chars.next();
            } else {
                let start = ci;
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                if !word.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '=' || c == '\'') {
                    return Err(Error::input(format!(
                        "formula: invalid identifier {word:?} at line {}, column {}",
                        li + 1,
                        start + 1
                    )));
                }
                tokens.push(Token {
                    text: word,
                    line: li + 1,
                    col: start + 1,
                });
            }
        }
    }
    Ok(tokens)
}

fn parse_formula(tokens: &[Token], pos: &mut usize) -> Result<Formula> {
    let at = |p: usize| -> String {
        tokens
            .get(p)
            .map_or("end of input".to_string(), |t| format!("line {}, column {}", t.line, t.col))
    };
    let open = tokens.get(*pos).ok_or_else(|| Error::input("formula: unexpected end of input"))?;
    if open.text != "(" {
        return Err(Error::input(format!(
            "formula: expected '(' but found {:?} at {}",
            open.text,
            at(*pos)
        )));
    }
    *pos += 1;
    let head = tokens
        .get(*pos)
        .ok_or_else(|| Error::input("formula: unexpected end of input"))?;
    if head.text == "(" || head.text == ")" {
        return Err(Error::input(format!("formula: expected an operator at {}", at(*pos))));
    }
    let head_text = head.text.clone();
    *pos += 1;
    let ident = |pos: &mut usize| -> Result<String> {
        let t = tokens
            .get(*pos)
            .ok_or_else(|| Error::input("formula: unexpected end of input"))?;
        if t.text == "(" || t.text == ")" || KEYWORDS.contains(&t.text.as_str()) {
            return Err(Error::input(format!(
                "formula: expected a variable but found {:?} at {}",
                t.text,
                at(*pos)
            )));
        }
        *pos += 1;
        Ok(t.text.clone())
    };
    let f = match head_text.as_str() {
        "exists" | "forall" => {
            let v = ident(pos)?;
            let body = parse_formula(tokens, pos)?;
            if head_text == "exists" {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
        "and" | "or" => {
            let mut parts = Vec::new();
            while tokens.get(*pos).is_some_and(|t| t.text == "(") {
                parts.push(parse_formula(tokens, pos)?);
            }
            if head_text == "and" {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        "not" => Formula::not(parse_formula(tokens, pos)?),
        "=" => {
            let a = ident(pos)?;
            let b = ident(pos)?;
            Formula::Eq(a, b)
        }
        rel => {
            let mut vars = Vec::new();
            while tokens.get(*pos).is_some_and(|t| t.text != ")") {
                vars.push(ident(pos)?);
            }
            if vars.is_empty() {
                return Err(Error::input(format!(
                    "formula: atom {rel:?} needs at least one variable at {}",
                    at(*pos)
                )));
            }
            Formula::Atom(rel.to_string(), vars)
        }
    };
    match tokens.get(*pos) {
        Some(t) if t.text == ")" => {
            *pos += 1;
            Ok(f)
        }
        _ => Err(Error::input(format!("formula: expected ')' at {}", at(*pos)))),
    }
}
