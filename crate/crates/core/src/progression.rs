//! Formula progression: rewriting an obligation against one observed label
//! set to the obligation that remains on the rest of the trace.

use serde::{Deserialize, Serialize};

use crate::ltl::{implies, nnf, Formula, LabelSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Open,
}

impl Verdict {
    pub fn of(f: &Formula) -> Verdict {
        match f {
            Formula::True => Verdict::Satisfied,
            Formula::False => Verdict::Violated,
            _ => Verdict::Open,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Open
    }
}

/// One progression step followed by [`simplify`]. Expects NNF input; other
/// negations and implications are normalized on the fly.
pub fn progress(f: &Formula, sigma: &LabelSet) -> Formula {
    simplify(&step(f, sigma))
}

fn step(f: &Formula, sigma: &LabelSet) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(p) => constant(sigma.contains(p)),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(p) => constant(!sigma.contains(p)),
            _ => step(&nnf(f), sigma),
        },
        Formula::Implies(..) => step(&nnf(f), sigma),
        Formula::And(a, b) => Formula::and(step(a, sigma), step(b, sigma)),
        Formula::Or(a, b) => Formula::or(step(a, sigma), step(b, sigma)),
        Formula::Next(a) => a.as_ref().clone(),
        Formula::Until(a, b) => Formula::or(step(b, sigma), Formula::and(step(a, sigma), f.clone())),
        Formula::Eventually(a) => Formula::or(step(a, sigma), f.clone()),
        Formula::Always(a) => Formula::and(step(a, sigma), f.clone()),
    }
}

fn constant(v: bool) -> Formula {
    if v {
        Formula::True
    } else {
        Formula::False
    }
}

/// Syntactic simplification: constant folding, double negation,
/// idempotence, complementary literals, absorption via [`implies`], and
/// sorted commutative operands. Preserves semantics.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => match simplify(a) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        },
        Formula::And(..) => {
            let mut parts = Vec::new();
            f.flatten_and(&mut parts);
            simplify_chain(parts.into_iter().map(simplify).collect(), Chain::And)
        }
        Formula::Or(..) => {
            let mut parts = Vec::new();
            f.flatten_or(&mut parts);
            simplify_chain(parts.into_iter().map(simplify).collect(), Chain::Or)
        }
        Formula::Next(a) => match simplify(a) {
            c @ (Formula::True | Formula::False) => c,
            other => Formula::next(other),
        },
        Formula::Eventually(a) => match simplify(a) {
            c @ (Formula::True | Formula::False) => c,
            inner @ Formula::Eventually(_) => inner,
            other => Formula::eventually(other),
        },
        Formula::Always(a) => match simplify(a) {
            c @ (Formula::True | Formula::False) => c,
            inner @ Formula::Always(_) => inner,
            other => Formula::always(other),
        },
        Formula::Until(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (_, Formula::True) => Formula::True,
                (_, Formula::False) => Formula::False,
                (Formula::False, _) => b,
                (Formula::True, _) => simplify(&Formula::eventually(b)),
                _ if implies(&a, &b) => b,
                _ => Formula::until(a, b),
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::False) => simplify(&Formula::not(a)),
                _ if implies(&a, &b) => Formula::True,
                _ => Formula::implies(a, b),
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Chain {
    And,
    Or,
}

fn simplify_chain(parts: Vec<Formula>, kind: Chain) -> Formula {
    let (unit, zero) = match kind {
        Chain::And => (Formula::True, Formula::False),
        Chain::Or => (Formula::False, Formula::True),
    };
    // Children may themselves have collapsed into chains of the same kind.
    let mut flat = Vec::with_capacity(parts.len());
    for p in parts {
        match (&p, kind) {
            (Formula::And(..), Chain::And) => {
                let mut inner = Vec::new();
                p.flatten_and(&mut inner);
                flat.extend(inner.into_iter().cloned());
            }
            (Formula::Or(..), Chain::Or) => {
                let mut inner = Vec::new();
                p.flatten_or(&mut inner);
                flat.extend(inner.into_iter().cloned());
            }
            _ => flat.push(p),
        }
    }
    if flat.contains(&zero) {
        return zero;
    }
    flat.retain(|p| *p != unit);
    flat.sort();
    flat.dedup();
    for p in &flat {
        if let Formula::Not(inner) = p {
            if flat.binary_search(inner).is_ok() {
                return zero;
            }
        }
    }
    // Absorption: in a conjunction drop operands entailed by another one; in
    // a disjunction drop operands that entail another one.
    let mut keep = vec![true; flat.len()];
    for i in 0..flat.len() {
        let redundant = (0..flat.len()).any(|j| {
            j != i
                && keep[j]
                && match kind {
                    Chain::And => implies(&flat[j], &flat[i]),
                    Chain::Or => implies(&flat[i], &flat[j]),
                }
        });
        if redundant {
            keep[i] = false;
        }
    }
    let kept = flat.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p);
    match kind {
        Chain::And => Formula::conjunction(kept),
        Chain::Or => Formula::disjunction(kept),
    }
}

/// Folds [`progress`] over `trace`, stopping at the first decided symbol.
/// Returns the verdict and the 1-based index of the deciding symbol (`0`
/// when the formula is constant before any symbol is read).
pub fn run_progression(f: &Formula, trace: &[LabelSet]) -> (Verdict, Option<usize>) {
    let mut p = Progressor::new(f);
    if p.verdict().is_decided() {
        return (p.verdict(), Some(0));
    }
    for (i, sigma) in trace.iter().enumerate() {
        if p.step(sigma).is_decided() {
            return (p.verdict(), Some(i + 1));
        }
    }
    (Verdict::Open, None)
}

/// Online progression monitor.
#[derive(Debug, Clone)]
pub struct Progressor {
    current: Formula,
}

impl Progressor {
    pub fn new(f: &Formula) -> Self {
        Progressor { current: simplify(&nnf(f)) }
    }

    pub fn formula(&self) -> &Formula {
        &self.current
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::of(&self.current)
    }

    /// Consumes one symbol. Once decided the formula is a fixed point.
    pub fn step(&mut self, sigma: &LabelSet) -> Verdict {
        if !self.verdict().is_decided() {
            self.current = progress(&self.current, sigma);
        }
        self.verdict()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{holds_on_lasso, labels, parse, LassoTrace};

    fn p(s: &str) -> Formula {
        nnf(&parse(s).unwrap())
    }

    #[test]
    fn progress_examples() {
        assert_eq!(progress(&p("F a"), &labels(["a"])), Formula::True);
        assert_eq!(progress(&p("!a U b"), &labels(["a"])), Formula::False);
        let f = p("!(g | y) U (m & (!g U b))");
        assert_eq!(progress(&f, &labels(["m"])), p("!g U b"));
    }

    #[test]
    fn zone_progression_example_is_semantically_exact() {
        // Every one-step extension agrees with the oracle.
        let f = p("!(g | y) U (m & (!g U b))");
        let sigma = labels(["m"]);
        let rest = progress(&f, &sigma);
        let alphabet = labels(["g", "y", "m", "b"]);
        for w in LassoTrace::enumerate(&alphabet, 1, 1) {
            assert_eq!(holds_on_lasso(&f, &w.prepend(sigma.clone())), holds_on_lasso(&rest, &w));
        }
    }

    #[test]
    fn simplify_examples() {
        let a = Formula::atom("a");
        assert_eq!(simplify(&Formula::and(Formula::True, a.clone())), a);
        assert_eq!(simplify(&Formula::or(a.clone(), a.clone())), a);
        let fa = Formula::eventually(a.clone());
        let f = Formula::and(fa.clone(), Formula::and(Formula::True, fa.clone()));
        assert_eq!(simplify(&f), fa);
        assert_eq!(simplify(&p("a & !a")), Formula::False);
        assert_eq!(simplify(&p("a | !a")), Formula::True);
        assert_eq!(simplify(&p("true U a")), p("F a"));
        assert_eq!(simplify(&p("F F a")), p("F a"));
        assert_eq!(simplify(&p("b & a")), simplify(&p("a & b")));
    }

    #[test]
    fn run_progression_examples() {
        let t = |sets: &[&[&str]]| sets.iter().map(|s| labels(s.iter().copied())).collect::<Vec<_>>();
        assert_eq!(run_progression(&p("F a"), &t(&[&[], &["a"]])), (Verdict::Satisfied, Some(2)));
        assert_eq!(run_progression(&p("!a U b"), &t(&[&[], &["a"]])), (Verdict::Violated, Some(2)));
        assert_eq!(
            run_progression(&p("F (a & F l)"), &t(&[&["a"], &[], &["l"]])),
            (Verdict::Satisfied, Some(3))
        );
        assert_eq!(run_progression(&p("G F a"), &t(&[&["a"], &["a"]])), (Verdict::Open, None));
        assert_eq!(run_progression(&Formula::True, &[]), (Verdict::Satisfied, Some(0)));
    }

    #[test]
    fn decided_formulas_are_fixed_points() {
        let mut m = Progressor::new(&p("F a"));
        assert_eq!(m.step(&labels(["a"])), Verdict::Satisfied);
        assert_eq!(m.step(&labels([])), Verdict::Satisfied);
        let mut m = Progressor::new(&p("G !y"));
        assert_eq!(m.step(&labels(["y"])), Verdict::Violated);
        assert_eq!(m.step(&labels([])), Verdict::Violated);
    }
}
