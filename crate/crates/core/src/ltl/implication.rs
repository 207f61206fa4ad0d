use super::Formula;

/// Sound but incomplete syntactic check that `p` entails `q` on every word.
///
/// A `true` answer is always semantically valid; `false` only means no rule
/// applied. Used for absorption in the simplifier and for dropping redundant
/// obligations in tableau states.
pub fn implies(p: &Formula, q: &Formula) -> bool {
    if p == q || matches!(q, Formula::True) || matches!(p, Formula::False) {
        return true;
    }
    if let Formula::And(q1, q2) = q {
        return implies(p, q1) && implies(p, q2);
    }
    if let Formula::Or(p1, p2) = p {
        return implies(p1, q) && implies(p2, q);
    }
    if let Formula::And(p1, p2) = p {
        if implies(p1, q) || implies(p2, q) {
            return true;
        }
    }
    if let Formula::Or(q1, q2) = q {
        if implies(p, q1) || implies(p, q2) {
            return true;
        }
    }
    match p {
        // G a entails a.
        Formula::Always(p1) if implies(p1, q) => return true,
        // a U b entails a | b at the current position.
        Formula::Until(p1, p2) if implies(p1, q) && implies(p2, q) => return true,
        _ => {}
    }
    match q {
        Formula::Eventually(q1) => {
            implies(p, q1)
                || matches!(p, Formula::Eventually(p1) if implies(p1, q1))
                || matches!(p, Formula::Until(_, p2) if implies(p2, q1) || implies(p2, q))
        }
        Formula::Until(q1, q2) => {
            implies(p, q2)
                || matches!(p, Formula::Until(p1, p2)
                    if implies(p1, q1) && (implies(p2, q2) || implies(p2, q)))
        }
        Formula::Always(q1) => matches!(p, Formula::Always(p1) if implies(p1, q1)),
        Formula::Next(q1) => matches!(p, Formula::Next(p1) if implies(p1, q1)),
        _ => false,
    }
}
