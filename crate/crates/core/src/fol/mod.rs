//! First-order logic formulas: syntax tree, parser, renderer and structural
//! queries used by the feature extractors.

mod analysis;
mod ast;
mod parser;
mod render;

pub use analysis::{
    connective_census, contains_biconditional, free_and_bound_variables, has_vacuous_quantifier, predicate_occurrences,
    ConnectiveCensus, PredicateOccurrence, VariableSets,
};
pub use ast::{Atom, BinaryOp, Formula, Quantifier, Term, EQUALITY};
pub use parser::{is_free_variable_name, is_variable_name, parse_formula, ParseError, MAX_NESTING};
pub use render::{render_formula, Style};
