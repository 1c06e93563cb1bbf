use crate::fol::{connective_census, Formula};

use super::FeatureError;

/// Inputs to the logic rule table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogicFeatures {
    pub num_implications: usize,
    pub num_quantifiers: usize,
    pub has_forall: bool,
    pub has_exists: bool,
    /// Distinct kinds among not, and, or, implies.
    pub num_distinct_connectives: usize,
}

pub fn extract_logic_features(f: &Formula) -> Result<LogicFeatures, FeatureError> {
    let c = connective_census(f);
    if c.iff > 0 {
        return Err(FeatureError::ContainsBiconditional);
    }
    let distinct = [c.not, c.and, c.or, c.implies].iter().filter(|&&n| n > 0).count();
    Ok(LogicFeatures {
        num_implications: c.implies,
        num_quantifiers: c.quantifiers(),
        has_forall: c.forall > 0,
        has_exists: c.exists > 0,
        num_distinct_connectives: distinct,
    })
}

/// Mean number of arguments over all atom occurrences.
pub fn avg_predicate_arity(f: &Formula) -> f64 {
    let atoms = f.atoms();
    debug_assert!(!atoms.is_empty(), "parsed formulas always contain an atom");
    atoms.iter().map(|a| a.arity()).sum::<usize>() as f64 / atoms.len() as f64
}

/// Every non-identity predicate takes exactly one argument.
pub fn is_monadic(f: &Formula) -> bool {
    f.atoms().iter().filter(|a| !a.is_equality()).all(|a| a.arity() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn logic_feature_examples() {
        assert_eq!(
            extract_logic_features(&p("forall x (Cube(x) -> exists y Next(x,y))")).unwrap(),
            LogicFeatures {
                num_implications: 1,
                num_quantifiers: 2,
                has_forall: true,
                has_exists: true,
                num_distinct_connectives: 1,
            }
        );
        assert_eq!(extract_logic_features(&p("Cube(a)")).unwrap(), LogicFeatures::default());
        assert_eq!(
            extract_logic_features(&p("Fed(M,F,t1) & (Gave(M,F,C,t1) -> ~Hungry(F,t2))")).unwrap(),
            LogicFeatures { num_implications: 1, num_distinct_connectives: 3, ..Default::default() }
        );
        assert_eq!(extract_logic_features(&p("P(a) <-> Q(a)")), Err(FeatureError::ContainsBiconditional));
    }

    #[test]
    fn arity_examples() {
        assert_eq!(avg_predicate_arity(&p("Fed(M,F,t1) & (Gave(M,F,C,t1) -> ~Hungry(F,t2))")), 3.0);
        assert_eq!(avg_predicate_arity(&p("Cube(a)")), 1.0);
        assert_eq!(avg_predicate_arity(&p("FrontOf(a,b) & Cube(a)")), 1.5);
    }

    #[test]
    fn monadic_examples() {
        assert!(is_monadic(&p("forall x (Cube(x) -> Small(x))")));
        assert!(!is_monadic(&p("exists x exists y FrontOf(x,y)")));
        assert!(is_monadic(&p("Cube(a) & a = b")));
    }
}
