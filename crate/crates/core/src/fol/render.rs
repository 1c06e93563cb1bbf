use std::fmt;

use super::ast::{Atom, BinaryOp, Formula, Quantifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Unicode,
    Ascii,
}

impl Style {
    fn binary(self, op: BinaryOp) -> &'static str {
        match (self, op) {
            (Style::Unicode, BinaryOp::And) => "∧",
            (Style::Unicode, BinaryOp::Or) => "∨",
            (Style::Unicode, BinaryOp::Implies) => "→",
            (Style::Unicode, BinaryOp::Iff) => "↔",
            (Style::Ascii, BinaryOp::And) => "&",
            (Style::Ascii, BinaryOp::Or) => "|",
            (Style::Ascii, BinaryOp::Implies) => "->",
            (Style::Ascii, BinaryOp::Iff) => "<->",
        }
    }

    fn not(self) -> &'static str {
        match self {
            Style::Unicode => "¬",
            Style::Ascii => "~",
        }
    }

    fn quantifier(self, q: Quantifier) -> &'static str {
        match (self, q) {
            (Style::Unicode, Quantifier::ForAll) => "∀",
            (Style::Unicode, Quantifier::Exists) => "∃",
            (Style::Ascii, Quantifier::ForAll) => "forall ",
            (Style::Ascii, Quantifier::Exists) => "exists ",
        }
    }
}

fn precedence(op: BinaryOp) -> u8 {
    match op {
        BinaryOp::Iff => 1,
        BinaryOp::Implies => 2,
        BinaryOp::Or => 3,
        BinaryOp::And => 4,
    }
}

/// A quantifier's scope swallows everything to its right, so such formulas
/// need parentheses when anything follows them.
fn is_right_open(f: &Formula) -> bool {
    match f {
        Formula::ForAll(..) | Formula::Exists(..) => true,
        Formula::Not(inner) => is_right_open(inner),
        _ => false,
    }
}

fn render_atom(a: &Atom, out: &mut String) {
    if a.is_equality() && a.args.len() == 2 {
        out.push_str(a.args[0].name());
        out.push_str(" = ");
        out.push_str(a.args[1].name());
        return;
    }
    out.push_str(&a.predicate);
    out.push('(');
    for (i, t) in a.args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(t.name());
    }
    out.push(')');
}

/// `tail` is true when nothing follows `f` up to the end of the text or the
/// enclosing closing parenthesis.
fn render_operand(f: &Formula, parent: BinaryOp, right: bool, tail: bool, style: Style, out: &mut String) {
    let parens = match f.as_binary() {
        Some((op, _, _)) => {
            let (p, q) = (precedence(op), precedence(parent));
            // and/or associate left, implies/iff associate right
            let left_assoc = matches!(parent, BinaryOp::And | BinaryOp::Or);
            p < q || (p == q && (right == left_assoc))
        }
        None => !(right && tail) && is_right_open(f),
    };
    if parens {
        out.push('(');
        render_into(f, style, true, out);
        out.push(')');
    } else {
        render_into(f, style, right && tail, out);
    }
}

fn render_into(f: &Formula, style: Style, tail: bool, out: &mut String) {
    match f {
        Formula::Atomic(a) => render_atom(a, out),
        Formula::Not(inner) => {
            out.push_str(style.not());
            let wrap = inner.as_binary().is_some() || matches!(&**inner, Formula::Atomic(a) if a.is_equality());
            if wrap {
                out.push('(');
                render_into(inner, style, true, out);
                out.push(')');
            } else {
                render_into(inner, style, tail, out);
            }
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::ForAll(..)) { Quantifier::ForAll } else { Quantifier::Exists };
            out.push_str(style.quantifier(q));
            out.push_str(v);
            if body.as_binary().is_some() {
                out.push_str(" (");
                render_into(body, style, true, out);
                out.push(')');
            } else {
                out.push(' ');
                render_into(body, style, tail, out);
            }
        }
        _ => {
            let (op, l, r) = f.as_binary().expect("binary node");
            render_operand(l, op, false, false, style, out);
            out.push(' ');
            out.push_str(style.binary(op));
            out.push(' ');
            render_operand(r, op, true, tail, style, out);
        }
    }
}

/// Renders a formula with the minimum parentheses needed to parse back to
/// the same tree.
pub fn render_formula(f: &Formula, style: Style) -> String {
    let mut out = String::new();
    render_into(f, style, true, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, Style::Unicode))
    }
}
