use super::Formula;

/// Negation normal form: negation only on atoms, no `Implies`.
///
/// `F` and `G` stay as primitive nodes. There is no release operator, so a
/// negated until is expanded with `!(a U b) == (!b U (!a & !b)) | G !b`.
pub fn nnf(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => negate(g),
        Formula::And(a, b) => Formula::and(nnf(a), nnf(b)),
        Formula::Or(a, b) => Formula::or(nnf(a), nnf(b)),
        Formula::Implies(a, b) => Formula::or(negate(a), nnf(b)),
        Formula::Next(a) => Formula::next(nnf(a)),
        Formula::Until(a, b) => Formula::until(nnf(a), nnf(b)),
        Formula::Eventually(a) => Formula::eventually(nnf(a)),
        Formula::Always(a) => Formula::always(nnf(a)),
    }
}

/// NNF of `!f`.
fn negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(g) => nnf(g),
        Formula::And(a, b) => Formula::or(negate(a), negate(b)),
        Formula::Or(a, b) => Formula::and(negate(a), negate(b)),
        Formula::Implies(a, b) => Formula::and(nnf(a), negate(b)),
        Formula::Next(a) => Formula::next(negate(a)),
        Formula::Eventually(a) => Formula::always(negate(a)),
        Formula::Always(a) => Formula::eventually(negate(a)),
        Formula::Until(a, b) => {
            let not_a = negate(a);
            let not_b = negate(b);
            Formula::or(
                Formula::until(not_b.clone(), Formula::and(not_a, not_b.clone())),
                Formula::always(not_b),
            )
        }
    }
}

pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(g) => matches!(**g, Formula::Atom(_)),
        Formula::Implies(..) => false,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => is_nnf(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{holds_on_lasso, labels, parse, LassoTrace};

    #[test]
    fn duality_examples() {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        assert_eq!(nnf(&Formula::not(Formula::eventually(a.clone()))), Formula::always(Formula::not(a.clone())));
        assert_eq!(nnf(&Formula::implies(a.clone(), b.clone())), Formula::or(Formula::not(a), b));
    }

    #[test]
    fn negated_until_is_equivalent_on_all_small_lassos() {
        let f = parse("!(a U b)").unwrap();
        let g = nnf(&f);
        assert!(is_nnf(&g));
        for w in LassoTrace::enumerate(&labels(["a", "b"]), 3, 2) {
            assert_eq!(holds_on_lasso(&f, &w), holds_on_lasso(&g, &w), "{w:?}");
        }
    }

    #[test]
    fn implication_inside_always() {
        let f = parse("G (b -> F g) & !(X a)").unwrap();
        let g = nnf(&f);
        assert!(is_nnf(&g));
        assert_eq!(g, parse("G (!b | F g) & X !a").unwrap());
    }
}
