//! The strategy language: guards, left choice, fixed points, jumps to
//! positions and gated lists of sub-strategies.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::CeError;
use crate::formula::BoolFormula;
use crate::pce::ContextTuple;
use crate::term::{Position, Signature, Term};

/// A member of a gated list: a sub-strategy or a plain insertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Strategy(Strategy),
    Insert(ContextTuple),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Fail,
    Var(String),
    /// `(u ; S)`
    Guard(Term, Box<Strategy>),
    /// `S₁ ⊕ S₂`, left-biased.
    Choice(Box<Strategy>, Box<Strategy>),
    /// `(u => τ⃗)`
    GuardInsert(Term, ContextTuple),
    Mu(String, Box<Strategy>),
    /// `@p.S`
    At(Position, Box<Strategy>),
    /// `@p.τ⃗`
    AtInsert(Position, ContextTuple),
    /// `⟨[@p₁.S₁, …], φ⟩`
    Gated(Vec<(Position, Entry)>, BoolFormula),
}

impl Strategy {
    pub fn guard(u: Term, s: Strategy) -> Self {
        Strategy::Guard(u, Box::new(s))
    }

    pub fn choice(a: Strategy, b: Strategy) -> Self {
        Strategy::Choice(Box::new(a), Box::new(b))
    }

    /// Right-nested choice; `Fail` when empty.
    pub fn choice_all<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Strategy>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .reduce(|acc, s| Strategy::choice(s, acc))
            .unwrap_or(Strategy::Fail)
    }

    pub fn mu(x: impl Into<String>, s: Strategy) -> Self {
        Strategy::Mu(x.into(), Box::new(s))
    }

    pub fn at(p: Position, s: Strategy) -> Self {
        Strategy::At(p, Box::new(s))
    }

    pub fn var(x: impl Into<String>) -> Self {
        Strategy::Var(x.into())
    }

    /// Flattens a right- or left-nested choice into its operands.
    pub fn choice_operands(&self) -> Vec<&Strategy> {
        match self {
            Strategy::Choice(a, b) => {
                let mut v = a.choice_operands();
                v.extend(b.choice_operands());
                v
            }
            s => vec![s],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Strategy::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Strategy::Mu(x, s) => {
                bound.push(x.clone());
                s.collect_free(bound, out);
                bound.pop();
            }
            _ => self.children().for_each(|c| c.collect_free(bound, out)),
        }
    }

    /// All fixed-point names, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Strategy::Var(x) => {
                out.insert(x.clone());
            }
            Strategy::Mu(x, s) => {
                out.insert(x.clone());
                s.collect_names(out);
            }
            _ => self.children().for_each(|c| c.collect_names(out)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Direct sub-strategies, left to right.
    pub fn children(&self) -> Box<dyn Iterator<Item = &Strategy> + '_> {
        match self {
            Strategy::Guard(_, s) | Strategy::Mu(_, s) | Strategy::At(_, s) => {
                Box::new(std::iter::once(s.as_ref()))
            }
            Strategy::Choice(a, b) => Box::new([a.as_ref(), b.as_ref()].into_iter()),
            Strategy::Gated(entries, _) => Box::new(entries.iter().filter_map(|(_, e)| match e {
                Entry::Strategy(s) => Some(s),
                Entry::Insert(_) => None,
            })),
            _ => Box::new(std::iter::empty()),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().map(Strategy::size).sum::<usize>()
    }

    /// Rebuilds the node with `f` applied to each direct sub-strategy.
    pub fn map_children(&self, mut f: impl FnMut(&Strategy) -> Strategy) -> Strategy {
        match self {
            Strategy::Guard(u, s) => Strategy::guard(u.clone(), f(s)),
            Strategy::Choice(a, b) => {
                let a = f(a);
                Strategy::choice(a, f(b))
            }
            Strategy::Mu(x, s) => Strategy::mu(x.clone(), f(s)),
            Strategy::At(p, s) => Strategy::at(p.clone(), f(s)),
            Strategy::Gated(entries, phi) => Strategy::Gated(
                entries
                    .iter()
                    .map(|(p, e)| {
                        let e = match e {
                            Entry::Strategy(s) => Entry::Strategy(f(s)),
                            Entry::Insert(t) => Entry::Insert(t.clone()),
                        };
                        (p.clone(), e)
                    })
                    .collect(),
                phi.clone(),
            ),
            s => s.clone(),
        }
    }
}

/// Deterministic supply of fixed-point names `X0, X1, …`, skipping names
/// already in use.
#[derive(Clone, Debug, Default)]
pub struct NameGen {
    next: usize,
    avoid: BTreeSet<String>,
}

impl NameGen {
    pub fn new() -> Self {
        NameGen::default()
    }

    pub fn avoiding<'a, I: IntoIterator<Item = &'a Strategy>>(strategies: I) -> Self {
        let mut g = NameGen::new();
        for s in strategies {
            g.avoid.extend(s.all_names());
        }
        g
    }

    pub fn avoid(&mut self, s: &Strategy) {
        self.avoid.extend(s.all_names());
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let cand = format!("X{}", self.next);
            self.next += 1;
            if self.avoid.insert(cand.clone()) {
                return cand;
            }
        }
    }
}

/// `S[S'/X]`, renaming binders that would capture a free name of `S'`.
pub fn subst_fixvar(s: &Strategy, x: &str, by: &Strategy) -> Strategy {
    let mut gen = NameGen::avoiding([s, by]);
    let by_free = by.free_vars();
    subst_with(s, x, by, &by_free, &mut gen)
}

fn subst_with(
    s: &Strategy,
    x: &str,
    by: &Strategy,
    by_free: &BTreeSet<String>,
    gen: &mut NameGen,
) -> Strategy {
    match s {
        Strategy::Var(y) if y == x => by.clone(),
        Strategy::Mu(y, _) if y == x => s.clone(),
        Strategy::Mu(y, body) if by_free.contains(y) && body.free_vars().contains(x) => {
            let z = gen.fresh();
            let renamed = rename_var(body, y, &z);
            Strategy::mu(z, subst_with(&renamed, x, by, by_free, gen))
        }
        _ => s.map_children(|c| subst_with(c, x, by, by_free, gen)),
    }
}

fn rename_var(s: &Strategy, from: &str, to: &str) -> Strategy {
    match s {
        Strategy::Var(y) if y == from => Strategy::var(to),
        Strategy::Mu(y, _) if y == from => s.clone(),
        _ => s.map_children(|c| rename_var(c, from, to)),
    }
}

/// `S^i(∅)`: `i` nested copies of the body `s` with `∅` innermost.
pub fn iterate(s: &Strategy, x: &str, i: usize) -> Strategy {
    (0..i).fold(Strategy::Fail, |acc, _| subst_fixvar(s, x, &acc))
}

/// One unfolding `S[μX.S/X]` of `μX.S`.
pub fn unfold(x: &str, body: &Strategy) -> Strategy {
    subst_fixvar(body, x, &Strategy::mu(x, body.clone()))
}

/// Lexicographic depth measure: (fixed-point nesting, height).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Delta(pub usize, pub usize);

impl Delta {
    fn plus_height(self) -> Delta {
        Delta(self.0, self.1 + 1)
    }
}

pub fn delta_measure(s: &Strategy) -> Delta {
    match s {
        Strategy::Fail | Strategy::Var(_) | Strategy::GuardInsert(..) | Strategy::AtInsert(..) => {
            Delta(0, 0)
        }
        Strategy::Guard(_, b) => delta_measure(b).plus_height(),
        Strategy::At(_, b) => delta_measure(b),
        Strategy::Choice(..) => s
            .choice_operands()
            .into_iter()
            .map(delta_measure)
            .max()
            .unwrap_or_default()
            .plus_height(),
        Strategy::Gated(..) => s.children().map(delta_measure).max().unwrap_or_default().plus_height(),
        Strategy::Mu(_, b) => {
            let d = delta_measure(b);
            Delta(d.0 + 1, d.1)
        }
    }
}

/// `Φ(S)`.
pub fn formulas_of(s: &Strategy) -> BTreeSet<BoolFormula> {
    let mut out = BTreeSet::new();
    if let Strategy::Gated(_, phi) = s {
        out.insert(phi.clone());
    }
    for c in s.children() {
        out.extend(formulas_of(c));
    }
    out
}

/// `PPos(S)`.
pub fn positions_of_ce(s: &Strategy) -> BTreeSet<Position> {
    let mut out = BTreeSet::new();
    match s {
        Strategy::AtInsert(p, _) | Strategy::At(p, _) => {
            out.insert(p.clone());
        }
        Strategy::Gated(entries, _) => out.extend(entries.iter().map(|(p, _)| p.clone())),
        _ => {}
    }
    for c in s.children() {
        out.extend(positions_of_ce(c));
    }
    out
}

/// Checks well-foundedness, reporting the first violation.
pub fn check_well_founded(s: &Strategy) -> Result<(), CeError> {
    let mut moved: BTreeMap<String, Vec<bool>> = BTreeMap::new();
    wf(s, &mut moved)
}

pub fn is_well_founded_ce(s: &Strategy) -> bool {
    check_well_founded(s).is_ok()
}

/// `moved[X]` records, for each enclosing binder of `X`, whether a non-root
/// position has been crossed since it.
fn wf(s: &Strategy, moved: &mut BTreeMap<String, Vec<bool>>) -> Result<(), CeError> {
    match s {
        Strategy::Var(x) => {
            if moved.get(x).and_then(|v| v.last()) == Some(&false) {
                return Err(CeError::NotWellFounded(format!(
                    "the cycle through {x} does not pass through a position"
                )));
            }
            Ok(())
        }
        Strategy::Mu(x, b) => {
            moved.entry(x.clone()).or_default().push(false);
            let r = wf(b, moved);
            moved.get_mut(x).expect("pushed").pop();
            r
        }
        Strategy::At(p, b) => with_position(p, moved, |m| wf(b, m)),
        Strategy::Gated(entries, phi) => {
            check_gated(entries, phi)?;
            for (p, e) in entries {
                if let Entry::Strategy(b) = e {
                    with_position(p, moved, |m| wf(b, m))?;
                }
            }
            Ok(())
        }
        _ => s.children().try_for_each(|c| wf(c, moved)),
    }
}

fn with_position<R>(
    p: &Position,
    moved: &mut BTreeMap<String, Vec<bool>>,
    f: impl FnOnce(&mut BTreeMap<String, Vec<bool>>) -> R,
) -> R {
    if p.is_root() {
        return f(moved);
    }
    let saved = moved.clone();
    for v in moved.values_mut() {
        v.iter_mut().for_each(|b| *b = true);
    }
    let r = f(moved);
    *moved = saved;
    r
}

fn check_gated(entries: &[(Position, Entry)], phi: &BoolFormula) -> Result<(), CeError> {
    let bad = |m: String| Err(CeError::NotWellFounded(m));
    let positions: BTreeSet<&Position> = entries.iter().map(|(p, _)| p).collect();
    if positions.len() != entries.len() {
        return bad("gated list repeats a position".into());
    }
    for v in phi.vars() {
        if v.is_root() {
            return bad("gate mentions x(eps)".into());
        }
        if !positions.contains(&v) {
            return Err(CeError::UnboundGateVariable(v));
        }
    }
    let inserts: Vec<&Position> = entries
        .iter()
        .filter(|(_, e)| matches!(e, Entry::Insert(_)))
        .map(|(p, _)| p)
        .collect();
    let strategies: Vec<&Position> = entries
        .iter()
        .filter(|(_, e)| matches!(e, Entry::Strategy(_)))
        .map(|(p, _)| p)
        .collect();
    for (i, q) in inserts.iter().enumerate() {
        if inserts[i + 1..].iter().any(|q2| !q.before(q2)) {
            return bad(format!("insertion at {q} is not ordered before a later insertion"));
        }
        if strategies.iter().any(|p| !q.before(p)) {
            return bad(format!("insertion at {q} is not above or beside every strategy entry"));
        }
    }
    for (i, p) in strategies.iter().enumerate() {
        if strategies[i + 1..].iter().any(|p2| !p.is_parallel(p2)) {
            return bad(format!("strategy entries at {p} overlap"));
        }
    }
    if strategies.iter().any(|p| p.is_root()) && entries.len() > 1 {
        return bad("a strategy entry at eps must be alone".into());
    }
    Ok(())
}

fn symbol_pattern(f: &str, n: usize) -> Term {
    Term::app(f, (1..=n).map(|i| Term::var(format!("X{i}"))).collect())
}

fn traversal(s: &Strategy, sig: &Signature, per_symbol: impl Fn(usize, &Strategy) -> Strategy) -> Strategy {
    let mut gen = NameGen::avoiding([s]);
    let x = gen.fresh();
    let rec = Strategy::var(x.clone());
    let branches = sig
        .symbols()
        .filter(|(_, n)| *n > 0)
        .map(|(f, n)| Strategy::guard(symbol_pattern(f, n), per_symbol(n, &rec)));
    let body = Strategy::choice_all(std::iter::once(s.clone()).chain(branches).collect::<Vec<_>>());
    Strategy::mu(x, body)
}

/// Applies `s` at the leftmost-outermost subterm where it succeeds.
pub fn one_left(s: &Strategy, sig: &Signature) -> Strategy {
    traversal(s, sig, |n, rec| {
        Strategy::choice_all(
            (1..=n as u32)
                .map(|i| {
                    let p = Position::single(i);
                    Strategy::Gated(vec![(p.clone(), Entry::Strategy(rec.clone()))], BoolFormula::Var(p))
                })
                .collect::<Vec<_>>(),
        )
    })
}

/// Applies `s` at every outermost subterm where it succeeds; fails if it
/// succeeds nowhere.
pub fn top_down(s: &Strategy, sig: &Signature) -> Strategy {
    traversal(s, sig, |n, rec| {
        let positions: Vec<Position> = (1..=n as u32).map(Position::single).collect();
        Strategy::Gated(
            positions.iter().map(|p| (p.clone(), Entry::Strategy(rec.clone()))).collect(),
            BoolFormula::disj(positions),
        )
    })
}
