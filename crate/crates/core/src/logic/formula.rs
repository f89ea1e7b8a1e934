use std::fmt;

use super::LogicError;

/// A propositional formula of Łukasiewicz logic.
///
/// Variables are 0-based indices; the arity of a formula is one more than the
/// largest index it mentions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(usize),
    Const0,
    Const1,
    Not(Box<Formula>),
    /// Strong conjunction `x ⊗ y = max(0, x + y - 1)`.
    Otimes(Box<Formula>, Box<Formula>),
    /// Strong disjunction `x ⊕ y = min(1, x + y)`.
    Oplus(Box<Formula>, Box<Formula>),
    /// Residual implication `x ⇒ y = min(1, 1 - x + y)`.
    Implies(Box<Formula>, Box<Formula>),
    /// Weak conjunction, `min`.
    And(Box<Formula>, Box<Formula>),
    /// Weak disjunction, `max`.
    Or(Box<Formula>, Box<Formula>),
    /// Equivalence `1 - |x - y|`.
    Iff(Box<Formula>, Box<Formula>),
}

/// Binary connectives, used when walking or generating formulas generically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Otimes,
    Oplus,
    Implies,
    And,
    Or,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 6] = [
        Connective::Otimes,
        Connective::Oplus,
        Connective::Implies,
        Connective::And,
        Connective::Or,
        Connective::Iff,
    ];

    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            Connective::Otimes => otimes(x, y),
            Connective::Oplus => oplus(x, y),
            Connective::Implies => implies(x, y),
            Connective::And => x.min(y),
            Connective::Or => x.max(y),
            Connective::Iff => 1.0 - (x - y).abs(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Otimes => "*",
            Connective::Oplus => "+",
            Connective::Implies => "->",
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Iff => "<->",
        }
    }

    pub fn build(self, l: Formula, r: Formula) -> Formula {
        let (l, r) = (Box::new(l), Box::new(r));
        match self {
            Connective::Otimes => Formula::Otimes(l, r),
            Connective::Oplus => Formula::Oplus(l, r),
            Connective::Implies => Formula::Implies(l, r),
            Connective::And => Formula::And(l, r),
            Connective::Or => Formula::Or(l, r),
            Connective::Iff => Formula::Iff(l, r),
        }
    }
}

#[inline]
pub fn otimes(x: f64, y: f64) -> f64 {
    (x + y - 1.0).max(0.0)
}

#[inline]
pub fn oplus(x: f64, y: f64) -> f64 {
    (x + y).min(1.0)
}

#[inline]
pub fn implies(x: f64, y: f64) -> f64 {
    (1.0 - x + y).min(1.0)
}

#[inline]
pub fn negate(x: f64) -> f64 {
    1.0 - x
}

impl Formula {
    pub fn var(i: usize) -> Self {
        Formula::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn otimes(l: Formula, r: Formula) -> Self {
        Formula::Otimes(Box::new(l), Box::new(r))
    }

    pub fn oplus(l: Formula, r: Formula) -> Self {
        Formula::Oplus(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Splits a binary node into its connective and operands.
    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::Otimes(l, r) => Some((Connective::Otimes, l, r)),
            Formula::Oplus(l, r) => Some((Connective::Oplus, l, r)),
            Formula::Implies(l, r) => Some((Connective::Implies, l, r)),
            Formula::And(l, r) => Some((Connective::And, l, r)),
            Formula::Or(l, r) => Some((Connective::Or, l, r)),
            Formula::Iff(l, r) => Some((Connective::Iff, l, r)),
            _ => None,
        }
    }

    /// One more than the largest variable index, or 0 for closed formulas.
    pub fn arity(&self) -> usize {
        match self {
            Formula::Var(i) => i + 1,
            Formula::Const0 | Formula::Const1 => 0,
            Formula::Not(f) => f.arity(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.arity().max(r.arity())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const0 | Formula::Const1 => 0,
            Formula::Not(f) => 1 + f.depth(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const0 | Formula::Const1 => 1,
            Formula::Not(f) => 1 + f.size(),
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                1 + l.size() + r.size()
            }
        }
    }

    /// Evaluates the formula at `assignment`, which must cover every variable.
    pub fn eval(&self, assignment: &[f64]) -> Result<f64, LogicError> {
        let arity = self.arity();
        if assignment.len() < arity {
            return Err(LogicError::AssignmentTooShort {
                needed: arity,
                got: assignment.len(),
            });
        }
        if let Some(&v) = assignment.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(LogicError::OutOfRange(v));
        }
        Ok(self.eval_unchecked(assignment))
    }

    /// Evaluation without the length and range checks of [`Formula::eval`].
    ///
    /// Panics if a variable index is out of bounds.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Formula::Var(i) => x[*i],
            Formula::Const0 => 0.0,
            Formula::Const1 => 1.0,
            Formula::Not(f) => negate(f.eval_unchecked(x)),
            _ => {
                let (c, l, r) = self.as_binary().expect("binary node");
                c.apply(l.eval_unchecked(x), r.eval_unchecked(x))
            }
        }
    }

    /// Rewrites every connective in terms of `⊗`, `⇒` and `0`.
    pub fn expand_derived(&self) -> Formula {
        match self {
            Formula::Var(i) => Formula::Var(*i),
            Formula::Const0 => Formula::Const0,
            Formula::Const1 => Formula::implies(Formula::Const0, Formula::Const0),
            Formula::Not(f) => Formula::implies(f.expand_derived(), Formula::Const0),
            Formula::Otimes(l, r) => Formula::otimes(l.expand_derived(), r.expand_derived()),
            Formula::Implies(l, r) => Formula::implies(l.expand_derived(), r.expand_derived()),
            // x ⊕ y = ¬x ⇒ y
            Formula::Oplus(l, r) => Formula::implies(
                Formula::implies(l.expand_derived(), Formula::Const0),
                r.expand_derived(),
            ),
            Formula::And(l, r) => weak_and(l.expand_derived(), r.expand_derived()),
            // x ∨ y = ((x ⇒ y) ⇒ y) ∧ ((y ⇒ x) ⇒ x)
            Formula::Or(l, r) => {
                let (l, r) = (l.expand_derived(), r.expand_derived());
                let left = Formula::implies(Formula::implies(l.clone(), r.clone()), r.clone());
                let right = Formula::implies(Formula::implies(r, l.clone()), l);
                weak_and(left, right)
            }
            Formula::Iff(l, r) => {
                let (l, r) = (l.expand_derived(), r.expand_derived());
                Formula::otimes(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
            }
        }
    }

    /// True when the formula only uses `Var`, `Const0`, `Otimes` and `Implies`.
    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Const0 => true,
            Formula::Otimes(l, r) | Formula::Implies(l, r) => l.is_primitive() && r.is_primitive(),
            _ => false,
        }
    }

    /// Renames variables through `map` (old index → new index).
    pub fn remap_vars(&self, map: &dyn Fn(usize) -> usize) -> Formula {
        match self {
            Formula::Var(i) => Formula::Var(map(*i)),
            Formula::Const0 => Formula::Const0,
            Formula::Const1 => Formula::Const1,
            Formula::Not(f) => Formula::not(f.remap_vars(map)),
            _ => {
                let (c, l, r) = self.as_binary().expect("binary node");
                c.build(l.remap_vars(map), r.remap_vars(map))
            }
        }
    }

    /// Replaces each variable `i` with `subst[i]`.
    pub fn substitute(&self, subst: &[Formula]) -> Formula {
        match self {
            Formula::Var(i) => subst[*i].clone(),
            Formula::Const0 => Formula::Const0,
            Formula::Const1 => Formula::Const1,
            Formula::Not(f) => Formula::not(f.substitute(subst)),
            _ => {
                let (c, l, r) = self.as_binary().expect("binary node");
                c.build(l.substitute(subst), r.substitute(subst))
            }
        }
    }
}

// x ∧ y = x ⊗ (x ⇒ y)
fn weak_and(l: Formula, r: Formula) -> Formula {
    Formula::otimes(l.clone(), Formula::implies(l, r))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Formula {
        Formula::Var(i)
    }

    #[test]
    fn connective_values() {
        let f = Formula::otimes(x(0), x(1));
        assert_eq!(f.eval(&[0.5, 0.75]).unwrap(), 0.25);
        let f = Formula::implies(x(0), x(1));
        assert_eq!(f.eval(&[1.0, 0.0]).unwrap(), 0.0);
        let f = Formula::and(x(0), x(1));
        assert_eq!(f.eval(&[0.25, 0.75]).unwrap(), 0.25);
    }

    #[test]
    fn assignment_too_short() {
        let f = Formula::otimes(x(0), x(3));
        assert!(matches!(
            f.eval(&[0.0, 0.0]),
            Err(LogicError::AssignmentTooShort { needed: 4, got: 2 })
        ));
    }

    #[test]
    fn out_of_range_assignment() {
        assert!(matches!(x(0).eval(&[1.5]), Err(LogicError::OutOfRange(_))));
    }

    #[test]
    fn arity_counts_max_index() {
        assert_eq!(Formula::Const1.arity(), 0);
        assert_eq!(Formula::oplus(x(0), x(4)).arity(), 5);
    }

    #[test]
    fn expansion_rules() {
        assert_eq!(
            Formula::and(x(0), x(1)).expand_derived(),
            Formula::otimes(x(0), Formula::implies(x(0), x(1)))
        );
        assert_eq!(
            Formula::Const1.expand_derived(),
            Formula::implies(Formula::Const0, Formula::Const0)
        );
        assert_eq!(
            Formula::not(x(0)).expand_derived(),
            Formula::implies(x(0), Formula::Const0)
        );
    }

    #[test]
    fn weak_connectives_are_min_and_max_on_s4() {
        let pts: Vec<f64> = (0..=4).map(|k| k as f64 / 4.0).collect();
        let and = Formula::and(x(0), x(1));
        let or = Formula::or(x(0), x(1));
        for &a in &pts {
            for &b in &pts {
                assert_eq!(and.eval(&[a, b]).unwrap(), a.min(b));
                assert_eq!(or.eval(&[a, b]).unwrap(), a.max(b));
                // and through the primitive definitions
                assert!((and.expand_derived().eval(&[a, b]).unwrap() - a.min(b)).abs() < 1e-12);
                assert!((or.expand_derived().eval(&[a, b]).unwrap() - a.max(b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn iff_direct_matches_expansion() {
        let f = Formula::iff(x(0), x(1));
        for i in 0..=10 {
            for j in 0..=10 {
                let v = [i as f64 / 10.0, j as f64 / 10.0];
                let direct = f.eval(&v).unwrap();
                let expanded = f.expand_derived().eval(&v).unwrap();
                assert!((direct - expanded).abs() < 1e-12);
            }
        }
    }
}
