//! Formulas built from atoms with `\`, `/` and the commutative product.
//!
//! Text syntax: `\` and `/` for the implications, `*` for the product,
//! parentheses for grouping. `*` binds tightest and `/` loosest; `\` and `*`
//! associate to the right, `/` to the left, so `case \ v / d` reads
//! `(case \ v) / d` and `wh * case * d` reads `wh * (case * d)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    /// `arg \ result`
    Under(Box<Formula>, Box<Formula>),
    /// `result / arg`
    Over(Box<Formula>, Box<Formula>),
    Product(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn under(arg: Formula, result: Formula) -> Self {
        Formula::Under(Box::new(arg), Box::new(result))
    }

    pub fn over(result: Formula, arg: Formula) -> Self {
        Formula::Over(Box::new(result), Box::new(arg))
    }

    pub fn product(a: Formula, b: Formula) -> Self {
        Formula::Product(Box::new(a), Box::new(b))
    }

    /// Right-nested product of `factors`; panics on an empty slice.
    pub fn product_of(factors: &[Formula]) -> Self {
        let (last, init) = factors.split_last().expect("at least one factor");
        init.iter()
            .rev()
            .fold(last.clone(), |acc, f| Formula::product(f.clone(), acc))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of `\` and `/` connectives.
    pub fn implication_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Under(a, b) | Formula::Over(a, b) => 1 + a.implication_count() + b.implication_count(),
            Formula::Product(a, b) => a.implication_count() + b.implication_count(),
        }
    }

    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Under(a, b) | Formula::Over(a, b) | Formula::Product(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Under(a, b) | Formula::Over(a, b) | Formula::Product(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Factors of a right-nested product; a non-product is its own single
    /// factor.
    pub fn factors(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut f = self;
        while let Formula::Product(a, b) = f {
            out.push(a.as_ref());
            f = b;
        }
        out.push(f);
        out
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaParseError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let f = p.over()?;
        match p.tokens.get(p.pos) {
            None => Ok(f),
            Some((col, tok)) => Err(FormulaParseError {
                column: *col,
                message: format!("unexpected `{tok}`"),
            }),
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// Display precedence: 3 atom, 2 product, 1 under, 0 over.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) => 3,
        Formula::Product(..) => 2,
        Formula::Under(..) => 1,
        Formula::Over(..) => 0,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, x: &Formula, bare: impl Fn(&Formula) -> bool) -> fmt::Result {
    if bare(x) {
        write!(f, "{x}")
    } else {
        write!(f, "({x})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            // products are bracketed as implication arguments, as in `(case * d) / n`
            Formula::Over(r, a) => {
                write_at(f, r, |x| !matches!(x, Formula::Product(..)))?;
                f.write_str(" / ")?;
                write_at(f, a, Formula::is_atom)
            }
            Formula::Under(a, r) => {
                write_at(f, a, Formula::is_atom)?;
                f.write_str(" \\ ")?;
                write_at(f, r, |x| matches!(x, Formula::Atom(_) | Formula::Under(..)))
            }
            Formula::Product(a, b) => {
                write_at(f, a, Formula::is_atom)?;
                f.write_str(" * ")?;
                write_at(f, b, |x| level(x) >= 2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct FormulaParseError {
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

fn tokenize(text: &str) -> Result<Vec<(usize, String)>, FormulaParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if matches!(c, '\\' | '/' | '*' | '(' | ')') {
            out.push((i + 1, c.to_string()));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '-' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push((start + 1, chars[start..i].iter().collect()));
        } else {
            return Err(FormulaParseError {
                column: i + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, String)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|(_, t)| t.as_str())
    }

    fn column(&self) -> usize {
        match self.tokens.get(self.pos) {
            Some((c, _)) => *c,
            None => self.tokens.last().map_or(1, |(c, t)| c + t.chars().count()),
        }
    }

    fn over(&mut self) -> Result<Formula, FormulaParseError> {
        let mut f = self.under()?;
        while self.peek() == Some("/") {
            self.pos += 1;
            let arg = self.under()?;
            f = Formula::over(f, arg);
        }
        Ok(f)
    }

    fn under(&mut self) -> Result<Formula, FormulaParseError> {
        let arg = self.product()?;
        if self.peek() == Some("\\") {
            self.pos += 1;
            let result = self.under()?;
            return Ok(Formula::under(arg, result));
        }
        Ok(arg)
    }

    fn product(&mut self) -> Result<Formula, FormulaParseError> {
        let a = self.primary()?;
        if self.peek() == Some("*") {
            self.pos += 1;
            let b = self.product()?;
            return Ok(Formula::product(a, b));
        }
        Ok(a)
    }

    fn primary(&mut self) -> Result<Formula, FormulaParseError> {
        let column = self.column();
        match self.peek() {
            Some("(") => {
                self.pos += 1;
                let f = self.over()?;
                if self.peek() != Some(")") {
                    return Err(FormulaParseError {
                        column: self.column(),
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(f)
            }
            Some(t) if !matches!(t, "\\" | "/" | "*" | ")") => {
                let name = t.to_string();
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Some(t) => Err(FormulaParseError {
                column,
                message: format!("expected an atom or `(`, found `{t}`"),
            }),
            None => Err(FormulaParseError {
                column,
                message: "unexpected end of formula".into(),
            }),
        }
    }
}

/// Constituent atoms (`p1`) and move atoms (`p2`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AtomPartition {
    pub p1: BTreeSet<String>,
    pub p2: BTreeSet<String>,
}

impl AtomPartition {
    pub fn new<I, J, S, T>(p1: I, p2: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        AtomPartition {
            p1: p1.into_iter().map(Into::into).collect(),
            p2: p2.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_p1(&self, f: &Formula) -> bool {
        f.as_atom().is_some_and(|a| self.p1.contains(a))
    }

    pub fn is_p2(&self, f: &Formula) -> bool {
        f.as_atom().is_some_and(|a| self.p2.contains(a))
    }

    /// `B1 * ... * Bn * D` with every `Bi` in p2 and `D` in p1, n >= 0.
    pub fn is_constituent(&self, f: &Formula) -> bool {
        let fs = f.factors();
        let (last, init) = fs.split_last().expect("non-empty");
        self.is_p1(last) && init.iter().all(|b| self.is_p2(b))
    }

    /// A movable packet `A * B`: `A` in p2 and `B` a constituent.
    pub fn is_packet(&self, f: &Formula) -> bool {
        match f {
            Formula::Product(a, b) => self.is_p2(a) && self.is_constituent(b),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{subformula}` is not {expected}")]
pub struct FormulaViolation {
    pub subformula: String,
    pub expected: &'static str,
}

fn violation(f: &Formula, expected: &'static str) -> FormulaViolation {
    FormulaViolation {
        subformula: f.to_string(),
        expected,
    }
}

/// Checks that `f` has the lexical shape
/// `(cm \ ... \ c1 \ (b1 * ... * bn * a)) / d`, or is a bare constituent
/// `b1 * ... * bn * a`, with `a`, `d` in p1, `bi` in p2 and each `ci` in either.
pub fn validate_formula(f: &Formula, partition: &AtomPartition) -> Result<(), FormulaViolation> {
    match f {
        Formula::Over(b, d) => {
            if !partition.is_p1(d) {
                return Err(violation(d, "a constituent atom (the `/` argument)"));
            }
            validate_body(b, partition)
        }
        _ => validate_constituent(f, partition),
    }
}

fn validate_body(f: &Formula, partition: &AtomPartition) -> Result<(), FormulaViolation> {
    match f {
        Formula::Under(c, rest) => {
            if !(partition.is_p1(c) || partition.is_p2(c)) {
                return Err(violation(c, "an atom of either kind (a `\\` argument)"));
            }
            validate_body(rest, partition)
        }
        _ => validate_constituent(f, partition),
    }
}

fn validate_constituent(f: &Formula, partition: &AtomPartition) -> Result<(), FormulaViolation> {
    match f {
        Formula::Product(a, b) => {
            if !partition.is_p2(a) {
                return Err(violation(a, "a move atom (a product factor)"));
            }
            validate_constituent(b, partition)
        }
        Formula::Atom(_) if partition.is_p1(f) => Ok(()),
        Formula::Atom(_) => Err(violation(f, "a constituent atom")),
        _ => Err(violation(f, "a product of move atoms ending in a constituent atom")),
    }
}
