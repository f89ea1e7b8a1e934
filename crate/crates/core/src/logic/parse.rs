//! Concrete ASCII syntax for formulas.
//!
//! Precedence, tightest first: `!`; `*` and `&`; `+` and `|`; `->` (right
//! associative); `<->`. The Unicode symbols `¬ ⊗ ⊕ ⇒ ∧ ∨ ⇔` are accepted as
//! aliases. Variables are `x<digits>` or free identifiers.

use thiserror::Error;

use super::formula::{Connective, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown token {found:?} at position {pos}")]
    UnknownToken { pos: usize, found: String },
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input: expected {expected}")]
    UnexpectedEnd { expected: &'static str },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Not,
    Bin(Connective),
    Zero,
    One,
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Not => "'!'".into(),
            Tok::Bin(c) => format!("'{}'", c.symbol()),
            Tok::Zero => "'0'".into(),
            Tok::One => "'1'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '=' | '?')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' | '¬' => Tok::Not,
            '*' | '⊗' => Tok::Bin(Connective::Otimes),
            '&' | '∧' => Tok::Bin(Connective::And),
            '+' | '⊕' => Tok::Bin(Connective::Oplus),
            '|' | '∨' => Tok::Bin(Connective::Or),
            '⇒' => Tok::Bin(Connective::Implies),
            '⇔' => Tok::Bin(Connective::Iff),
            '-' if next == Some('>') => {
                i += 1;
                Tok::Bin(Connective::Implies)
            }
            '<' if next == Some('-') && chars.get(i + 2).map(|&(_, c)| c) == Some('>') => {
                i += 2;
                Tok::Bin(Connective::Iff)
            }
            '0' | '1' if !next.is_some_and(|n| n.is_ascii_digit()) => {
                if c == '0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            c if is_ident_start(c) => {
                let start = i;
                while i + 1 < chars.len() && is_ident_continue(chars[i + 1].1) {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().map(|&(_, c)| c).collect();
                Tok::Ident(s)
            }
            _ => {
                let mut end = i;
                while end + 1 < chars.len() && chars[end + 1].1.is_ascii_digit() {
                    end += 1;
                }
                let found: String = chars[i..=end].iter().map(|&(_, c)| c).collect();
                return Err(ParseError::UnknownToken { pos, found });
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

/// `x<digits>` names a variable by index.
fn indexed_var(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// A parsed formula together with the variable names it was written with.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedFormula {
    pub formula: Formula,
    /// `names[i]` is the display name bound to variable `i`.
    pub names: Vec<String>,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    bindings: Vec<(String, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.at) {
            Some((pos, t)) => ParseError::Syntax {
                pos: *pos,
                expected,
                found: t.describe(),
            },
            None => ParseError::UnexpectedEnd { expected },
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::Bin(Connective::Iff)) {
            self.at += 1;
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.sum()?;
        if self.peek() == Some(&Tok::Bin(Connective::Implies)) {
            self.at += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.product()?;
        while let Some(Tok::Bin(c @ (Connective::Oplus | Connective::Or))) = self.peek() {
            let c = *c;
            self.at += 1;
            let rhs = self.product()?;
            lhs = c.build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Bin(c @ (Connective::Otimes | Connective::And))) = self.peek() {
            let c = *c;
            self.at += 1;
            let rhs = self.unary()?;
            lhs = c.build(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.at += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Zero) => {
                self.at += 1;
                Ok(Formula::Const0)
            }
            Some(Tok::One) => {
                self.at += 1;
                Ok(Formula::Const1)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let idx = self
                    .bindings
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|&(_, i)| i)
                    .expect("every identifier is bound before parsing");
                Ok(Formula::Var(idx))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a variable, constant, '!' or '('")),
        }
    }
}

/// Parses a formula, binding `x<digits>` to its index and free identifiers to
/// fresh indices in first-occurrence order.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &[]).map(|p| p.formula)
}

/// Like [`parse_formula`], but identifiers found in `known` are bound to their
/// position there first. Fresh identifiers are numbered after both the known
/// names and the largest `x<digits>` index.
pub fn parse_formula_with(text: &str, known: &[String]) -> Result<ParsedFormula, ParseError> {
    let toks = lex(text)?;

    let mut bindings: Vec<(String, usize)> = Vec::new();
    let mut next_free = known.len();
    for (_, t) in &toks {
        if let Tok::Ident(name) = t {
            if let Some(i) = known.iter().position(|k| k == name) {
                bindings.push((name.clone(), i));
            } else if let Some(i) = indexed_var(name) {
                next_free = next_free.max(i + 1);
                bindings.push((name.clone(), i));
            }
        }
    }
    for (_, t) in &toks {
        if let Tok::Ident(name) = t {
            if !bindings.iter().any(|(n, _)| n == name) {
                bindings.push((name.clone(), next_free));
                next_free += 1;
            }
        }
    }

    let mut p = Parser {
        toks,
        at: 0,
        bindings,
    };
    let formula = p.iff()?;
    if p.at < p.toks.len() {
        return Err(p.unexpected("end of input"));
    }

    let arity = formula.arity().max(known.len());
    let mut names: Vec<String> = (0..arity)
        .map(|i| known.get(i).cloned().unwrap_or_else(|| format!("x{i}")))
        .collect();
    for (name, i) in &p.bindings {
        if *i < names.len() && *i >= known.len() {
            names[*i] = name.clone();
        }
    }
    Ok(ParsedFormula { formula, names })
}

/// Formats a formula with `x<i>` variable names.
pub fn format_formula(f: &Formula) -> String {
    format_formula_named(f, &[])
}

/// Formats a formula, printing variable `i` as `names[i]` when present.
///
/// Binary operands are parenthesized unless they continue a left-associative
/// chain of the same connective, so `x0 * x1 * x2` stays flat while
/// `(x0 * x1) -> x2` keeps its parentheses.
pub fn format_formula_named(f: &Formula, names: &[String]) -> String {
    let mut out = String::new();
    write_formula(f, names, &mut out);
    out
}

fn write_formula(f: &Formula, names: &[String], out: &mut String) {
    match f {
        Formula::Var(i) => match names.get(*i) {
            Some(n) => out.push_str(n),
            None => out.push_str(&format!("x{i}")),
        },
        Formula::Const0 => out.push('0'),
        Formula::Const1 => out.push('1'),
        Formula::Not(inner) => {
            out.push('!');
            write_operand(inner, names, out, inner.as_binary().is_some());
        }
        _ => {
            let (c, l, r) = f.as_binary().expect("binary node");
            let left_chain = c != Connective::Implies && l.as_binary().is_some_and(|(lc, _, _)| lc == c);
            write_operand(l, names, out, l.as_binary().is_some() && !left_chain);
            out.push(' ');
            out.push_str(c.symbol());
            out.push(' ');
            write_operand(r, names, out, r.as_binary().is_some());
        }
    }
}

fn write_operand(f: &Formula, names: &[String], out: &mut String, parens: bool) {
    if parens {
        out.push('(');
        write_formula(f, names, out);
        out.push(')');
    } else {
        write_formula(f, names, out);
    }
}
