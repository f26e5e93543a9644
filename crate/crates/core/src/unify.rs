//! Unification and combination of strategies in canonical form.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::canon::{check_canonical, to_canonical};
use crate::error::CeError;
use crate::formula::BoolFormula;
use crate::strategy::{unfold, Entry, NameGen, Strategy};
use crate::term::{meet, Position, Term};

/// The clauses of the unification definition, numbered in order.
pub const CLAUSE_COUNT: usize = 17;

pub const CLAUSE_NAMES: [&str; CLAUSE_COUNT] = [
    "fail-left",
    "fail-right",
    "insert-insert-same",
    "insert-insert-distinct",
    "insert-jump-same",
    "insert-jump-distinct",
    "guard-insert-vs-position",
    "guard-insert-vs-position-out-of-arity",
    "guard-vs-position",
    "guard-vs-position-out-of-arity",
    "guard-insert-vs-guard",
    "guard-vs-guard",
    "list-vs-list",
    "guard-vs-list",
    "choice",
    "mu-vs-mu",
    "mu-vs-other",
];

/// How often each clause fired.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseStats {
    pub counts: [u64; CLAUSE_COUNT],
}

impl ClauseStats {
    fn hit(&mut self, clause: usize) {
        self.counts[clause - 1] += 1;
    }

    pub fn merge(&mut self, other: &ClauseStats) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    /// Names of the clauses that never fired.
    pub fn uncovered(&self) -> Vec<&'static str> {
        self.counts
            .iter()
            .zip(CLAUSE_NAMES)
            .filter(|(c, _)| **c == 0)
            .map(|(_, n)| n)
            .collect()
    }
}

impl fmt::Display for ClauseStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, n)) in self.counts.iter().zip(CLAUSE_NAMES).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}={c}")?;
        }
        Ok(())
    }
}

/// State threaded through unification: fresh names, the table of operand
/// pairs currently being unfolded, and clause counters.
#[derive(Debug, Default)]
pub struct Unifier {
    gen: NameGen,
    pending: HashMap<(Strategy, Strategy), (String, bool)>,
    pub stats: ClauseStats,
    budget: Option<u64>,
    steps: u64,
}

impl Unifier {
    pub fn new() -> Self {
        Unifier::default()
    }

    /// A unifier that gives up after `steps` recursive steps; outputs can
    /// grow exponentially in the nesting depth of the operands.
    pub fn with_budget(steps: u64) -> Self {
        Unifier {
            budget: Some(steps),
            ..Unifier::default()
        }
    }

    fn over_budget(&self) -> bool {
        self.budget.is_some_and(|b| self.steps > b)
    }

    /// `S ⊞ S'` on canonical, closed, well-founded operands.
    pub fn unify(&mut self, s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
        check_canonical(s)?;
        check_canonical(s2)?;
        self.gen.avoid(s);
        self.gen.avoid(s2);
        self.steps = 0;
        let out = self.go(s, s2);
        match self.budget {
            Some(b) if self.over_budget() => Err(CeError::BudgetExceeded(b)),
            _ => Ok(out),
        }
    }

    /// `S ⊎ S' = (S ⊞ S') ⊕ S ⊕ S'`.
    pub fn combine(&mut self, s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
        let u = self.unify(s, s2)?;
        Ok(Strategy::choice_all(vec![u, s.clone(), s2.clone()]))
    }

    fn go(&mut self, s: &Strategy, s2: &Strategy) -> Strategy {
        use Strategy as S;
        self.steps += 1;
        if self.over_budget() {
            return S::Fail;
        }
        match (s, s2) {
            (S::Fail, _) => {
                self.stats.hit(1);
                S::Fail
            }
            (_, S::Fail) => {
                self.stats.hit(2);
                S::Fail
            }
            (S::Choice(a, b), _) => {
                self.stats.hit(15);
                let l = self.go(a, s2);
                let r = self.go(b, s2);
                choice_pruned(vec![l, r])
            }
            (_, S::Choice(a, b)) => {
                self.stats.hit(15);
                let l = self.go(s, a);
                let r = self.go(s, b);
                choice_pruned(vec![l, r])
            }
            _ if guard_view(s).is_some() || guard_view(s2).is_some() => self.guards(s, s2),
            (S::Mu(..), _) | (_, S::Mu(..)) => self.fixed_points(s, s2),
            (S::At(p, b), _) if p.is_root() => self.go(b, s2),
            (_, S::At(p, b)) if p.is_root() => self.go(s, b),
            _ if try_body(s).is_some() => {
                let body = try_body(s).expect("checked");
                let both = self.go(body, s2);
                choice_pruned(vec![both, s2.clone()])
            }
            _ if try_body(s2).is_some() => {
                let body = try_body(s2).expect("checked");
                let both = self.go(s, body);
                choice_pruned(vec![both, s.clone()])
            }
            (S::Var(_), _) | (_, S::Var(_)) => S::Fail,
            _ => self.lists(s, s2),
        }
    }

    fn guards(&mut self, s: &Strategy, s2: &Strategy) -> Strategy {
        match (guard_view(s), guard_view(s2)) {
            (Some((u, b)), Some((u2, b2))) => {
                let inserts = matches!(s, Strategy::GuardInsert(..)) || matches!(s2, Strategy::GuardInsert(..));
                self.stats.hit(if inserts { 11 } else { 12 });
                match meet(u, u2) {
                    Some(m) => make_guard(m, self.go(&b, &b2)),
                    None => Strategy::Fail,
                }
            }
            (Some((u, b)), None) => {
                if let Some(r) = self.arity_check(s, u, s2) {
                    return r;
                }
                make_guard(u.clone(), self.go(&b, s2))
            }
            (None, Some((u2, b2))) => {
                if let Some(r) = self.arity_check(s2, u2, s) {
                    return r;
                }
                make_guard(u2.clone(), self.go(s, &b2))
            }
            (None, None) => unreachable!("caller checked for a guard"),
        }
    }

    /// Counts the guard-versus-other clause and short-cuts jumps below the
    /// arity of the guard's root symbol.
    fn arity_check(&mut self, guard: &Strategy, u: &Term, other: &Strategy) -> Option<Strategy> {
        let inserts = matches!(guard, Strategy::GuardInsert(..));
        match other {
            Strategy::At(p, _) | Strategy::AtInsert(p, _) => {
                let out_of_arity = excludes(u, p);
                let clause = match (inserts, out_of_arity) {
                    (true, false) => 7,
                    (true, true) => 8,
                    (false, false) => 9,
                    (false, true) => 10,
                };
                self.stats.hit(clause);
                out_of_arity.then_some(Strategy::Fail)
            }
            Strategy::Gated(..) => {
                self.stats.hit(14);
                let view = ListView::of(other)?;
                view.required.iter().any(|p| excludes(u, p)).then_some(Strategy::Fail)
            }
            _ => None,
        }
    }

    fn fixed_points(&mut self, s: &Strategy, s2: &Strategy) -> Strategy {
        let both = matches!((s, s2), (Strategy::Mu(..), Strategy::Mu(..)));
        self.stats.hit(if both { 16 } else { 17 });
        let key = (s.clone(), s2.clone());
        if let Some((z, used)) = self.pending.get_mut(&key) {
            *used = true;
            return Strategy::var(z.clone());
        }
        let z = self.gen.fresh();
        self.pending.insert(key.clone(), (z.clone(), false));
        let l = match s {
            Strategy::Mu(x, b) => unfold(x, b),
            _ => s.clone(),
        };
        let r = match s2 {
            Strategy::Mu(x, b) => unfold(x, b),
            _ => s2.clone(),
        };
        let body = self.go(&l, &r);
        let (_, used) = self.pending.remove(&key).expect("inserted above");
        if used && body != Strategy::Fail {
            Strategy::mu(z, body)
        } else {
            body
        }
    }

    fn lists(&mut self, s: &Strategy, s2: &Strategy) -> Strategy {
        let (Some(l), Some(r)) = (ListView::of(s), ListView::of(s2)) else {
            return Strategy::Fail;
        };
        self.count_list_clause(s, s2);
        let mut out: BTreeMap<Position, Entry> = BTreeMap::new();
        let mut required: BTreeSet<Position> = BTreeSet::new();
        let positions: BTreeSet<&Position> = l.entries.keys().chain(r.entries.keys()).collect();
        for p in positions {
            let (r1, r2) = (l.required.contains(p), r.required.contains(p));
            let entry = match (l.entries.get(p), r.entries.get(p)) {
                (Some(e), None) | (None, Some(e)) => e.clone(),
                (Some(Entry::Insert(t1)), Some(Entry::Insert(t2))) => Entry::Insert(t2.concat(t1)),
                (Some(e1), Some(e2)) => {
                    let (a, b) = (entry_strategy(e1), entry_strategy(e2));
                    let ab = self.go(&a, &b);
                    let m = match (r1, r2) {
                        (true, true) => ab,
                        (true, false) => choice_pruned(vec![ab, a]),
                        (false, true) => choice_pruned(vec![ab, b]),
                        (false, false) => choice_pruned(vec![ab, a, b]),
                    };
                    if m == Strategy::Fail {
                        if r1 || r2 {
                            return Strategy::Fail;
                        }
                        continue;
                    }
                    Entry::Strategy(m)
                }
                (None, None) => unreachable!("position comes from one side"),
            };
            if (r1 || r2) && !p.is_root() {
                required.insert(p.clone());
            }
            out.insert(p.clone(), entry);
        }
        make_list(out, required)
    }

    fn count_list_clause(&mut self, s: &Strategy, s2: &Strategy) {
        use Strategy as S;
        let clause = match (s, s2) {
            (S::AtInsert(p, _), S::AtInsert(q, _)) => {
                if p == q {
                    3
                } else {
                    4
                }
            }
            (S::AtInsert(p, _), S::At(q, _)) | (S::At(q, _), S::AtInsert(p, _)) => {
                if p == q {
                    5
                } else {
                    6
                }
            }
            _ => 13,
        };
        self.stats.hit(clause);
    }
}

/// No term matching `u` has position `p`.
fn excludes(u: &Term, p: &Position) -> bool {
    let mut cur = u;
    for &i in p.steps() {
        match cur {
            Term::App(_, args) if i as usize <= args.len() => cur = &args[i as usize - 1],
            Term::App(..) => return true,
            _ => return false,
        }
    }
    false
}

/// `(u, S)` for guards; a guarded insertion reads as `(u, @ε.τ⃗)`.
fn guard_view(s: &Strategy) -> Option<(&Term, Strategy)> {
    match s {
        Strategy::Guard(u, b) => Some((u, (**b).clone())),
        Strategy::GuardInsert(u, t) => Some((u, Strategy::AtInsert(Position::root(), t.clone()))),
        _ => None,
    }
}

fn make_guard(u: Term, body: Strategy) -> Strategy {
    match body {
        Strategy::Fail => Strategy::Fail,
        Strategy::AtInsert(p, t) if p.is_root() => Strategy::GuardInsert(u, t),
        b => Strategy::guard(u, b),
    }
}

/// `⟨[@ε.S], true⟩`: apply `S` if it succeeds, otherwise do nothing.
fn try_body(s: &Strategy) -> Option<&Strategy> {
    match s {
        Strategy::Gated(entries, BoolFormula::True) => match entries.as_slice() {
            [(p, Entry::Strategy(b))] if p.is_root() => Some(b),
            _ => None,
        },
        _ => None,
    }
}

fn entry_strategy(e: &Entry) -> Strategy {
    match e {
        Entry::Strategy(s) => s.clone(),
        Entry::Insert(t) => Strategy::AtInsert(Position::root(), t.clone()),
    }
}

/// Flat left choice over the non-failing operands.
fn choice_pruned(items: Vec<Strategy>) -> Strategy {
    let mut seen = HashSet::new();
    let mut flat: Vec<Strategy> = Vec::new();
    for s in items.iter().flat_map(Strategy::choice_operands) {
        // A repeated operand only runs after its first copy failed on the
        // same term, and nothing after an infallible operand ever runs.
        if *s == Strategy::Fail || !seen.insert(s) {
            continue;
        }
        flat.push(s.clone());
        if never_fails(s) {
            break;
        }
    }
    Strategy::choice_all(flat)
}

fn never_fails(s: &Strategy) -> bool {
    match s {
        Strategy::AtInsert(p, _) => p.is_root(),
        Strategy::Gated(_, phi) => *phi == BoolFormula::True,
        Strategy::Choice(a, b) => never_fails(a) || never_fails(b),
        Strategy::Mu(_, b) => never_fails(b),
        Strategy::At(p, b) => p.is_root() && never_fails(b),
        _ => false,
    }
}

/// A positional strategy read as a gated list: entries by position and the
/// positions whose entry must succeed.
struct ListView {
    entries: BTreeMap<Position, Entry>,
    required: BTreeSet<Position>,
}

impl ListView {
    fn of(s: &Strategy) -> Option<ListView> {
        let single = |p: &Position, e: Entry| ListView {
            entries: BTreeMap::from([(p.clone(), e)]),
            required: if p.is_root() { BTreeSet::new() } else { BTreeSet::from([p.clone()]) },
        };
        match s {
            Strategy::AtInsert(p, t) => Some(single(p, Entry::Insert(t.clone()))),
            Strategy::At(p, b) => Some(single(p, Entry::Strategy((**b).clone()))),
            Strategy::Gated(entries, phi) => Some(ListView {
                entries: entries.iter().cloned().collect(),
                required: phi.as_conjunction()?,
            }),
            _ => None,
        }
    }
}

fn make_list(entries: BTreeMap<Position, Entry>, required: BTreeSet<Position>) -> Strategy {
    if entries.len() == 1 {
        let (p, e) = entries.iter().next().expect("one entry");
        match e {
            Entry::Insert(t) if p.is_root() || required.contains(p) => {
                return Strategy::AtInsert(p.clone(), t.clone());
            }
            Entry::Strategy(b) if required.contains(p) => return Strategy::at(p.clone(), b.clone()),
            _ => {}
        }
    }
    Strategy::Gated(entries.into_iter().collect(), BoolFormula::conj(required))
}

/// `S ⊞ S'` with a fresh unifier.
pub fn unify_ce(s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
    Unifier::new().unify(s, s2)
}

/// `S ⊎ S'` with a fresh unifier.
pub fn combine_ce(s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
    Unifier::new().combine(s, s2)
}

/// Canonicalizes both operands, then unifies.
pub fn unify_general(s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
    unify_ce(&to_canonical(s)?, &to_canonical(s2)?)
}

/// Canonicalizes both operands, then combines.
pub fn combine_general(s: &Strategy, s2: &Strategy) -> Result<Strategy, CeError> {
    combine_ce(&to_canonical(s)?, &to_canonical(s2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::{combine_pce, eq_pce, unify_pce, ContextTuple};
    use crate::psi::psi;
    use crate::semantics::apply_ce;
    use crate::strategy::is_well_founded_ce;
    use crate::term::Context;
    use crate::testgen;
    use proptest::{prop_assert, proptest};

    fn ctx(t: Term) -> ContextTuple {
        ContextTuple::single(Context::new(t).unwrap())
    }
    fn unary(f: &str) -> ContextTuple {
        ctx(Term::app(f, vec![Term::Hole]))
    }
    fn p(i: u32) -> Position {
        Position::single(i)
    }
    fn terms() -> Vec<Term> {
        let a = Term::constant("a");
        let b = Term::constant("b");
        let f = |x: Term, y: Term| Term::app("f", vec![x, y]);
        let g = |x: Term| Term::app("g", vec![x]);
        vec![
            a.clone(),
            b.clone(),
            g(a.clone()),
            g(g(b.clone())),
            f(a.clone(), b.clone()),
            f(g(a.clone()), f(b.clone(), a.clone())),
            g(f(a.clone(), a.clone())),
        ]
    }

    fn same_psi(x: &Strategy, y: &Strategy) -> bool {
        terms().iter().all(|t| eq_pce(&psi(x, t), &psi(y, t)))
    }

    #[test]
    fn neutral_element() {
        let neutral = Strategy::AtInsert(Position::root(), ContextTuple::hole());
        let s = Strategy::mu(
            "X",
            Strategy::choice(
                Strategy::GuardInsert(Term::constant("a"), unary("g")),
                Strategy::at(p(1), Strategy::var("X")),
            ),
        );
        assert!(same_psi(&unify_ce(&neutral, &s).unwrap(), &s));
        assert!(same_psi(&unify_ce(&s, &neutral).unwrap(), &s));
    }

    #[test]
    fn out_of_arity_jump_fails() {
        let u = Term::app("f", vec![Term::var("Y"), Term::var("Z")]);
        let s = Strategy::GuardInsert(u, unary("g"));
        let s2 = Strategy::AtInsert(p(3), unary("h"));
        let mut un = Unifier::new();
        assert_eq!(un.unify(&s, &s2).unwrap(), Strategy::Fail);
        assert_eq!(un.stats.counts[7], 1);
    }

    #[test]
    fn worked_fixed_point_example() {
        let u = Term::app("f", vec![Term::var("Y"), Term::constant("a")]);
        let u2 = Term::app("f", vec![Term::constant("b"), Term::var("W")]);
        let (t1, t2) = (unary("g"), unary("h"));
        let body = |u: &Term, t: &ContextTuple, x: &str| {
            Strategy::choice(Strategy::GuardInsert(u.clone(), t.clone()), Strategy::at(p(1), Strategy::var(x)))
        };
        let s = Strategy::mu("X", body(&u, &t1, "X"));
        let s2 = Strategy::mu("V", body(&u2, &t2, "V"));
        let out = unify_ce(&s, &s2).unwrap();
        let list = |rec: &Strategy, t: &ContextTuple| {
            Strategy::Gated(
                vec![
                    (Position::root(), Entry::Insert(t.clone())),
                    (p(1), Entry::Strategy(rec.clone())),
                ],
                BoolFormula::Var(p(1)),
            )
        };
        let met = meet(&u, &u2).unwrap();
        let expected = Strategy::mu(
            "X0",
            Strategy::choice_all(vec![
                Strategy::GuardInsert(met, t2.concat(&t1)),
                Strategy::guard(u.clone(), list(&s2, &t1)),
                Strategy::guard(u2.clone(), list(&s, &t2)),
                Strategy::at(p(1), Strategy::var("X0")),
            ]),
        );
        assert_eq!(out, expected);
        assert!(is_well_founded_ce(&out));
    }

    #[test]
    fn combine_is_three_way_choice() {
        let s = Strategy::AtInsert(p(1), unary("g"));
        let out = combine_ce(&s, &Strategy::Fail).unwrap();
        assert_eq!(out, Strategy::choice_all(vec![Strategy::Fail, s.clone(), Strategy::Fail]));
        for t in terms() {
            assert_eq!(apply_ce(&out, Some(&t)), apply_ce(&s, Some(&t)));
        }
    }

    #[test]
    fn non_canonical_operand_is_rejected() {
        let s = Strategy::AtInsert(Position::new(vec![1, 1]).unwrap(), unary("g"));
        assert!(matches!(unify_ce(&s, &s), Err(CeError::NotCanonical(_))));
        assert!(unify_general(&s, &s).is_ok());
    }

    proptest! {
        #[test]
        fn unification_commutes_with_psi(
            s in testgen::strategy(),
            s2 in testgen::strategy(),
            t in testgen::ground_term(),
        ) {
            let (c, c2) = (to_canonical(&s).unwrap(), to_canonical(&s2).unwrap());
            let u = unify_ce(&c, &c2).unwrap();
            prop_assert!(is_well_founded_ce(&u), "not well-founded: {:?}", u);
            prop_assert!(u.is_closed());
            prop_assert!(crate::canon::is_canonical(&u));
            prop_assert!(eq_pce(&psi(&u, &t), &unify_pce(&psi(&c, &t), &psi(&c2, &t))));
            let m = combine_ce(&c, &c2).unwrap();
            prop_assert!(eq_pce(&psi(&m, &t), &combine_pce(&psi(&c, &t), &psi(&c2, &t))));
        }
    }
}
