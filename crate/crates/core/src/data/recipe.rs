use super::{DataError, Dataset, NominalTable, Provenance};

/// The eight Mushroom propositions A1–A8.
pub const MUSHROOM_A1_A8: &str = "\
A1: bruises=t
A2: odor=a | odor=l | odor=n
A3: odor=c
A4: ring.type=e
A5: spore.print.color=r
A6: population=c
A7: habitat=w
A8: habitat=g | habitat=m | habitat=u | habitat=d | habitat=p | habitat=l
";

/// A boolean expression over `attr=value` tests.
#[derive(Clone, Debug, PartialEq)]
pub enum FeatureExpr {
    Is { attribute: String, value: String },
    Not(Box<FeatureExpr>),
    And(Box<FeatureExpr>, Box<FeatureExpr>),
    Or(Box<FeatureExpr>, Box<FeatureExpr>),
}

/// Named derived features, one per line as `NAME: EXPR`.
///
/// `EXPR` combines `attr=value` tests with `!`, `&`, `|` and parentheses;
/// `#` starts a comment.
#[derive(Clone, Debug, PartialEq)]
pub struct Recipe {
    pub features: Vec<(String, FeatureExpr)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn lex(line: usize, text: &str) -> Result<Vec<Tok>, DataError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let single = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push(t);
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else {
            let mut atom = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || "!&|()".contains(c) {
                    break;
                }
                atom.push(c);
                chars.next();
            }
            out.push(Tok::Atom(atom));
        }
    }
    if out.is_empty() {
        return Err(DataError::Recipe {
            line,
            msg: "empty expression".into(),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    at: usize,
    line: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> DataError {
        DataError::Recipe {
            line: self.line,
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.toks.get(self.at) == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<FeatureExpr, DataError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = FeatureExpr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<FeatureExpr, DataError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = FeatureExpr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FeatureExpr, DataError> {
        if self.eat(&Tok::Not) {
            return Ok(FeatureExpr::Not(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Open) {
            let e = self.or()?;
            if !self.eat(&Tok::Close) {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        match self.toks.get(self.at).cloned() {
            Some(Tok::Atom(a)) => {
                self.at += 1;
                match a.split_once('=') {
                    Some((attr, value)) if !attr.is_empty() && !value.is_empty() => Ok(FeatureExpr::Is {
                        attribute: attr.to_string(),
                        value: value.to_string(),
                    }),
                    _ => Err(self.err(&format!("expected attr=value, found {a:?}"))),
                }
            }
            _ => Err(self.err("expected attr=value, '!' or '('")),
        }
    }
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe, DataError> {
        let mut features = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (name, expr) = body.split_once(':').ok_or(DataError::Recipe {
                line,
                msg: "expected NAME: EXPR".into(),
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(DataError::Recipe {
                    line,
                    msg: "empty feature name".into(),
                });
            }
            let mut p = Parser {
                toks: lex(line, expr)?,
                at: 0,
                line,
            };
            let e = p.or()?;
            if p.at != p.toks.len() {
                return Err(p.err("trailing input"));
            }
            features.push((name.to_string(), e));
        }
        Ok(Recipe { features })
    }

    pub fn mushroom() -> Recipe {
        Recipe::parse(MUSHROOM_A1_A8).expect("built-in recipe parses")
    }
}

fn check(e: &FeatureExpr, t: &NominalTable) -> Result<(), DataError> {
    match e {
        FeatureExpr::Is { attribute, value } => {
            let a = t
                .attribute_index(attribute)
                .ok_or_else(|| DataError::UnknownColumn(attribute.clone()))?;
            if !t.vocabulary(a).iter().any(|v| v == value) {
                return Err(DataError::UnknownValue(format!("{attribute}={value}")));
            }
            Ok(())
        }
        FeatureExpr::Not(x) => check(x, t),
        FeatureExpr::And(x, y) | FeatureExpr::Or(x, y) => {
            check(x, t)?;
            check(y, t)
        }
    }
}

fn holds(e: &FeatureExpr, t: &NominalTable, r: usize) -> bool {
    match e {
        FeatureExpr::Is { attribute, value } => {
            let a = t.attribute_index(attribute).expect("checked");
            t.cell(r, a) == Some(value.as_str())
        }
        FeatureExpr::Not(x) => !holds(x, t, r),
        FeatureExpr::And(x, y) => holds(x, t, r) && holds(y, t, r),
        FeatureExpr::Or(x, y) => holds(x, t, r) || holds(y, t, r),
    }
}

/// One 0/1 column per recipe feature; missing cells fail every test.
pub fn apply_recipe(t: &NominalTable, recipe: &Recipe) -> Result<Dataset, DataError> {
    for (_, e) in &recipe.features {
        check(e, t)?;
    }
    let names = recipe.features.iter().map(|(n, _)| n.clone()).collect();
    let rows = (0..t.len())
        .map(|r| {
            recipe
                .features
                .iter()
                .map(|(_, e)| if holds(e, t, r) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let targets = (0..t.len())
        .map(|r| if t.is_positive(r) { 1.0 } else { 0.0 })
        .collect();
    Dataset::new(names, rows, targets, Provenance::Binarized)
}
