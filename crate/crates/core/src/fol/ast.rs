use std::fmt;
use std::ops::Range;

/// A predicate argument. Function terms are not part of the language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Variable(n) | Term::Constant(n) => n,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symbol used for identity atoms (`x = y`).
pub const EQUALITY: &str = "=";

/// A predicate applied to terms.
///
/// `span` records the character range the atom occupied in the parsed text.
/// It does not take part in equality: two atoms are equal when predicate and
/// arguments agree.
#[derive(Clone, Debug)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
    pub span: Option<Range<usize>>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args, span: None }
    }

    pub fn equality(lhs: Term, rhs: Term) -> Self {
        Atom::new(EQUALITY, vec![lhs, rhs])
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_equality(&self) -> bool {
        self.predicate == EQUALITY
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.predicate == other.predicate && self.args == other.args
    }
}

impl Eq for Atom {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    ForAll,
    Exists,
}

/// First-order formula. Conjunction and disjunction are binary; longer chains
/// are left-nested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atomic(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atomic(Atom::new(predicate, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn binary(op: BinaryOp, l: Formula, r: Formula) -> Self {
        match op {
            BinaryOp::And => Formula::and(l, r),
            BinaryOp::Or => Formula::or(l, r),
            BinaryOp::Implies => Formula::implies(l, r),
            BinaryOp::Iff => Formula::iff(l, r),
        }
    }

    pub fn quantified(q: Quantifier, var: impl Into<String>, body: Formula) -> Self {
        match q {
            Quantifier::ForAll => Formula::forall(var, body),
            Quantifier::Exists => Formula::exists(var, body),
        }
    }

    /// Operator and operands when this is a binary node.
    pub fn as_binary(&self) -> Option<(BinaryOp, &Formula, &Formula)> {
        match self {
            Formula::And(l, r) => Some((BinaryOp::And, l, r)),
            Formula::Or(l, r) => Some((BinaryOp::Or, l, r)),
            Formula::Implies(l, r) => Some((BinaryOp::Implies, l, r)),
            Formula::Iff(l, r) => Some((BinaryOp::Iff, l, r)),
            _ => None,
        }
    }

    pub fn as_quantified(&self) -> Option<(Quantifier, &str, &Formula)> {
        match self {
            Formula::ForAll(v, b) => Some((Quantifier::ForAll, v, b)),
            Formula::Exists(v, b) => Some((Quantifier::Exists, v, b)),
            _ => None,
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atomic(_) => vec![],
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                vec![l, r]
            }
        }
    }

    /// Atoms in left-to-right textual order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Atomic(a) => out.push(a),
                _ => stack.extend(f.children().into_iter().rev()),
            }
        }
        out
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}
