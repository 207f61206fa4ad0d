use super::{Formula, LassoTrace};

/// Standard LTL satisfaction of `f` by the infinite word `w`.
///
/// Each subformula is evaluated once into a truth table over the
/// `|prefix| + |loop|` distinct positions. Until and Eventually are least
/// fixpoints, Always a greatest fixpoint, both computed by iterating the
/// one-step unfolding until the table stops changing.
pub fn holds_on_lasso(f: &Formula, w: &LassoTrace) -> bool {
    table(f, w)[0]
}

fn table(f: &Formula, w: &LassoTrace) -> Vec<bool> {
    let n = w.positions();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => (0..n).map(|i| w.symbol(i).contains(p)).collect(),
        Formula::Not(a) => table(a, w).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => zip(table(a, w), table(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip(table(a, w), table(b, w), |x, y| x || y),
        Formula::Implies(a, b) => zip(table(a, w), table(b, w), |x, y| !x || y),
        Formula::Next(a) => {
            let t = table(a, w);
            (0..n).map(|i| t[w.successor(i)]).collect()
        }
        Formula::Until(a, b) => {
            let ta = table(a, w);
            let tb = table(b, w);
            fixpoint(w, false, |i, next| tb[i] || (ta[i] && next))
        }
        Formula::Eventually(a) => {
            let t = table(a, w);
            fixpoint(w, false, |i, next| t[i] || next)
        }
        Formula::Always(a) => {
            let t = table(a, w);
            fixpoint(w, true, |i, next| t[i] && next)
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn fixpoint(w: &LassoTrace, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = w.positions();
    let mut v = vec![init; n];
    loop {
        let mut changed = false;
        // Sweeping backwards settles prefix positions in one pass.
        for i in (0..n).rev() {
            let nv = step(i, v[w.successor(i)]);
            if nv != v[i] {
                v[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{labels, parse};

    fn lasso(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::new(
            prefix.iter().map(|s| labels(s.iter().copied())).collect(),
            cycle.iter().map(|s| labels(s.iter().copied())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eventually_in_loop() {
        assert!(holds_on_lasso(&parse("F a").unwrap(), &lasso(&[&[]], &[&["a"]])));
    }

    #[test]
    fn always_broken_in_loop() {
        assert!(!holds_on_lasso(&parse("G a").unwrap(), &lasso(&[&["a"]], &[&[]])));
    }

    #[test]
    fn two_recurrences() {
        let f = parse("G F a & G F b").unwrap();
        assert!(holds_on_lasso(&f, &lasso(&[], &[&["a"], &["b"]])));
        assert!(!holds_on_lasso(&f, &lasso(&[&["b"]], &[&["a"]])));
    }

    #[test]
    fn until_requires_witness() {
        let f = parse("a U b").unwrap();
        assert!(!holds_on_lasso(&f, &lasso(&[], &[&["a"]])));
        assert!(holds_on_lasso(&f, &lasso(&[&["a"], &["a"]], &[&["b"]])));
        assert!(!holds_on_lasso(&f, &lasso(&[&["a"], &[]], &[&["b"]])));
    }

    #[test]
    fn next_wraps_into_loop() {
        let f = parse("X X X a").unwrap();
        assert!(holds_on_lasso(&f, &lasso(&[&[]], &[&["a"], &[]])));
        assert!(!holds_on_lasso(&f, &lasso(&[&[]], &[&[], &["a"]])));
    }

    #[test]
    fn persistence() {
        let f = parse("F G a").unwrap();
        assert!(holds_on_lasso(&f, &lasso(&[&[], &[]], &[&["a"]])));
        assert!(!holds_on_lasso(&f, &lasso(&[], &[&["a"], &[]])));
    }
}
