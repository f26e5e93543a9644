//! Application of strategies to terms. `None` is the failure value.

use crate::formula::{eval_formula, BoolFormula, Valuation};
use crate::pce::{apply_entry, eval_tuple};
use crate::strategy::{unfold, Entry, Strategy};
use crate::term::{Position, Term};

/// `⟦S⟧(t)` for a closed, well-founded strategy.
pub fn apply_ce(s: &Strategy, t: Option<&Term>) -> Option<Term> {
    let t = t?;
    match s {
        Strategy::Fail | Strategy::Var(_) => None,
        Strategy::Guard(u, b) => {
            if u.matches(t) {
                apply_ce(b, Some(t))
            } else {
                None
            }
        }
        Strategy::GuardInsert(u, tau) => u.matches(t).then(|| eval_tuple(tau).plug(t)),
        Strategy::Choice(a, b) => apply_ce(a, Some(t)).or_else(|| apply_ce(b, Some(t))),
        Strategy::Mu(x, b) => apply_ce(&unfold(x, b), Some(t)),
        Strategy::At(p, b) => apply_at(p, b, t),
        Strategy::AtInsert(p, tau) => apply_entry(p, tau, t),
        Strategy::Gated(entries, phi) => apply_gated(entries, phi, t),
    }
}

fn apply_at(p: &Position, b: &Strategy, t: &Term) -> Option<Term> {
    let r = apply_ce(b, Some(t.subterm(p)?))?;
    t.replace_at(p, r).ok()
}

/// Result of one entry on the input term, as the whole rewritten term.
fn apply_list_entry(p: &Position, e: &Entry, t: &Term) -> Option<Term> {
    match e {
        Entry::Strategy(b) => apply_at(p, b, t),
        Entry::Insert(tau) => apply_entry(p, tau, t),
    }
}

/// The valuation of a gated list on `t`: `x_p` is false iff the entry at
/// `p` fails on `t`.
pub fn valuation(entries: &[(Position, Entry)], t: &Term) -> Valuation {
    entries
        .iter()
        .map(|(p, e)| (p.clone(), apply_list_entry(p, e, t).is_some()))
        .collect()
}

fn apply_gated(entries: &[(Position, Entry)], phi: &BoolFormula, t: &Term) -> Option<Term> {
    // Strategy entries sit at parallel positions below every insertion, so
    // they are applied first; insertions then go deepest first.
    let mut results = Vec::with_capacity(entries.len());
    let mut nu = Valuation::new();
    for (p, e) in entries {
        let r = apply_list_entry(p, e, t);
        nu.insert(p.clone(), r.is_some());
        results.push(r);
    }
    if !eval_formula(&nu, phi).unwrap_or(false) {
        return None;
    }
    let mut out = t.clone();
    for ((p, e), r) in entries.iter().zip(&results) {
        if let (Entry::Strategy(_), Some(r)) = (e, r) {
            let sub = r.subterm(p).expect("rewritten at p").clone();
            out = out.replace_at(p, sub).expect("parallel positions survive");
        }
    }
    for ((p, e), r) in entries.iter().zip(&results).rev() {
        if let (Entry::Insert(tau), Some(_)) = (e, r) {
            out = apply_entry(p, tau, &out).expect("insertion position survives");
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::ContextTuple;
    use crate::strategy::{one_left, top_down};
    use crate::term::{Context, Signature};

    fn a() -> Term {
        Term::constant("a")
    }
    fn b() -> Term {
        Term::constant("b")
    }
    fn f1(t: Term) -> Term {
        Term::app("f", vec![t])
    }
    fn g(t: Term) -> Term {
        Term::app("g", vec![t])
    }
    fn g_tuple() -> ContextTuple {
        ContextTuple::single(Context::new(g(Term::Hole)).unwrap())
    }
    fn p(i: u32) -> Position {
        Position::single(i)
    }
    fn example1() -> Strategy {
        Strategy::mu(
            "X",
            Strategy::choice(
                Strategy::GuardInsert(f1(a()), g_tuple()),
                Strategy::at(p(1), Strategy::var("X")),
            ),
        )
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(apply_ce(&example1(), Some(&f1(f1(a())))), Some(f1(g(f1(a())))));
        assert_eq!(apply_ce(&example1(), Some(&b())), None);
    }

    #[test]
    fn gated_list_example() {
        let entry = || Entry::Strategy(Strategy::GuardInsert(a(), g_tuple()));
        let s = Strategy::Gated(
            vec![(p(1), entry()), (p(2), entry())],
            BoolFormula::or(BoolFormula::Var(p(1)), BoolFormula::Var(p(2))),
        );
        let t = Term::app("f", vec![a(), b()]);
        assert_eq!(apply_ce(&s, Some(&t)), Some(Term::app("f", vec![g(a()), b()])));
        let s2 = Strategy::Gated(
            vec![(p(1), entry()), (p(2), entry())],
            BoolFormula::and(BoolFormula::Var(p(1)), BoolFormula::Var(p(2))),
        );
        assert_eq!(apply_ce(&s2, Some(&t)), None);
    }

    #[test]
    fn gated_list_inserts_wrap_rewritten_children() {
        let h = ContextTuple::single(Context::new(Term::app("h", vec![Term::Hole])).unwrap());
        let s = Strategy::Gated(
            vec![
                (Position::root(), Entry::Insert(h)),
                (p(1), Entry::Strategy(Strategy::GuardInsert(a(), g_tuple()))),
            ],
            BoolFormula::True,
        );
        assert_eq!(apply_ce(&s, Some(&f1(a()))), Some(Term::app("h", vec![f1(g(a()))])));
    }

    #[test]
    fn traversal_examples() {
        let sig = Signature::new([("f", 1), ("a", 0)]).unwrap();
        let s = Strategy::GuardInsert(a(), g_tuple());
        assert_eq!(apply_ce(&top_down(&s, &sig), Some(&f1(a()))), Some(f1(g(a()))));
        let sb = Strategy::GuardInsert(b(), g_tuple());
        assert_eq!(apply_ce(&top_down(&sb, &sig), Some(&f1(a()))), None);
        let at_root = Strategy::GuardInsert(f1(a()), g_tuple());
        assert_eq!(
            apply_ce(&one_left(&at_root, &sig), Some(&f1(a()))),
            apply_ce(&at_root, Some(&f1(a())))
        );
    }

    #[test]
    fn failure_absorbs() {
        assert_eq!(apply_ce(&example1(), None), None);
        assert_eq!(apply_ce(&Strategy::Fail, Some(&a())), None);
    }
}
