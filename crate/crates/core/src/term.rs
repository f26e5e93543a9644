//! First-order terms, contexts, positions, substitutions, matching and
//! unification.
//!
//! Every operation is persistent: trees are never mutated in place, and
//! positions are plain values that always refer to the tree they were taken
//! from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TermError;

/// A path from the root of a tree: a sequence of 1-based child indices.
/// The empty sequence is the root position `eps`.
///
/// The derived ordering is numeric-lexicographic, which puts every position
/// before its extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u32>);

/// How two positions relate under the prefix order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosRelation {
    Equal,
    /// The left position is a strict prefix of the right one.
    StrictPrefix,
    /// The left position strictly extends the right one.
    StrictExtension,
    Parallel,
}

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    /// Builds a position, rejecting zero components.
    pub fn new(steps: Vec<u32>) -> Result<Self, TermError> {
        if steps.contains(&0) {
            return Err(TermError::ZeroStep);
        }
        Ok(Position(steps))
    }

    pub fn single(i: u32) -> Self {
        assert!(i >= 1, "positions are 1-based");
        Position(vec![i])
    }

    pub fn steps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True for `eps` and for one-step positions.
    pub fn is_single_step(&self) -> bool {
        self.0.len() <= 1
    }

    /// Splits `i·q` into `(i, q)`; `None` at the root.
    pub fn split_first(&self) -> Option<(u32, Position)> {
        self.0
            .split_first()
            .map(|(h, rest)| (*h, Position(rest.to_vec())))
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        Position(steps)
    }

    pub fn child(&self, i: u32) -> Position {
        assert!(i >= 1, "positions are 1-based");
        let mut steps = self.0.clone();
        steps.push(i);
        Position(steps)
    }

    /// `self ≤ other`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn relation(&self, other: &Position) -> PosRelation {
        if self == other {
            PosRelation::Equal
        } else if self.is_prefix_of(other) {
            PosRelation::StrictPrefix
        } else if other.is_prefix_of(self) {
            PosRelation::StrictExtension
        } else {
            PosRelation::Parallel
        }
    }

    pub fn is_parallel(&self, other: &Position) -> bool {
        self.relation(other) == PosRelation::Parallel
    }

    /// `self ⊏ other`: strict prefix or parallel.
    pub fn before(&self, other: &Position) -> bool {
        matches!(
            self.relation(other),
            PosRelation::StrictPrefix | PosRelation::Parallel
        )
    }

    /// `self ⊑ other`: prefix (possibly equal) or parallel.
    pub fn before_eq(&self, other: &Position) -> bool {
        self.relation(other) != PosRelation::StrictExtension
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A first-order term. `Hole` only appears inside contexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
    Hole,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    /// Number of children of the root node.
    pub fn arity(&self) -> usize {
        self.args().len()
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// `Pos(t)`, in numeric-lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_positions(self, &mut path, &mut out);
        out
    }

    pub fn has_position(&self, p: &Position) -> bool {
        self.subterm(p).is_some()
    }

    /// `t|p`, or `None` when `p ∉ Pos(t)`.
    pub fn subterm(&self, p: &Position) -> Option<&Term> {
        let mut cur = self;
        for &step in p.steps() {
            cur = cur.args().get(step as usize - 1)?;
        }
        Some(cur)
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        self.subterm(p)
            .ok_or_else(|| TermError::PositionOutOfRange(p.clone()))
    }

    /// `t[s]_p`.
    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        fn go(t: &Term, steps: &[u32], s: Term) -> Option<Term> {
            match steps.split_first() {
                None => Some(s),
                Some((&i, rest)) => match t {
                    Term::App(f, args) if (i as usize) <= args.len() => {
                        let mut args = args.clone();
                        let k = i as usize - 1;
                        args[k] = go(&args[k], rest, s)?;
                        Some(Term::App(f.clone(), args))
                    }
                    _ => None,
                },
            }
        }
        go(self, p.steps(), s).ok_or_else(|| TermError::PositionOutOfRange(p.clone()))
    }

    /// `δ(t)`: 0 on leaves, one more than the deepest child otherwise.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) if !args.is_empty() => {
                1 + args.iter().map(Term::depth).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Hole => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
            Term::Hole => true,
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Term::Hole => 1,
            Term::App(_, args) => args.iter().map(Term::hole_count).sum(),
            Term::Var(_) => 0,
        }
    }

    /// Position of the first hole in pre-order, if any.
    pub fn hole_position(&self) -> Option<Position> {
        fn go(t: &Term, path: &mut Vec<u32>) -> bool {
            match t {
                Term::Hole => true,
                Term::App(_, args) => {
                    for (k, a) in args.iter().enumerate() {
                        path.push(k as u32 + 1);
                        if go(a, path) {
                            return true;
                        }
                        path.pop();
                    }
                    false
                }
                Term::Var(_) => false,
            }
        }
        let mut path = Vec::new();
        go(self, &mut path).then_some(Position(path))
    }

    /// Replaces every hole by `filler`. On a context this is `τ[s]`.
    pub fn fill_holes(&self, filler: &Term) -> Term {
        match self {
            Term::Hole => filler.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.fill_holes(filler)).collect())
            }
            Term::Var(_) => self.clone(),
        }
    }

    pub fn apply_subst(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.apply_subst(sigma)).collect())
            }
            Term::Hole => Term::Hole,
        }
    }

    /// `self ≼ t`: some substitution maps this pattern onto `t`.
    pub fn matches(&self, t: &Term) -> bool {
        match_term(self, t).is_some()
    }

    fn rename_vars(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(x) => Term::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.rename_vars(map)).collect())
            }
            Term::Hole => Term::Hole,
        }
    }
}

fn collect_positions(t: &Term, path: &mut Vec<u32>, out: &mut Vec<Position>) {
    out.push(Position(path.clone()));
    for (k, a) in t.args().iter().enumerate() {
        path.push(k as u32 + 1);
        collect_positions(a, path, out);
        path.pop();
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Hole => f.write_str("[]"),
            Term::App(name, args) => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A term with exactly one hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Term);

impl Context {
    pub fn new(t: Term) -> Result<Self, TermError> {
        match t.hole_count() {
            1 => Ok(Context(t)),
            n => Err(TermError::HoleCount(n)),
        }
    }

    /// The bare hole `[]`.
    pub fn hole() -> Self {
        Context(Term::Hole)
    }

    pub fn is_hole(&self) -> bool {
        self.0 == Term::Hole
    }

    pub fn as_term(&self) -> &Term {
        &self.0
    }

    pub fn hole_position(&self) -> Position {
        self.0.hole_position().expect("context has a hole")
    }

    /// Plugs a term into the hole.
    pub fn plug(&self, t: &Term) -> Term {
        self.0.fill_holes(t)
    }

    /// `τ[τ']`: plugs another context, giving a context.
    pub fn compose(&self, inner: &Context) -> Context {
        Context(self.0.fill_holes(&inner.0))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite signature. Symbols are identified by name *and* arity, so `x/0`
/// and `x/1` may coexist.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeSet<(String, usize)>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let symbols: BTreeSet<(String, usize)> =
            symbols.into_iter().map(|(s, n)| (s.into(), n)).collect();
        if !symbols.iter().any(|(_, n)| *n == 0) {
            return Err(TermError::NoConstants);
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(s, n)| (s.as_str(), *n))
    }

    pub fn contains(&self, name: &str, arity: usize) -> bool {
        self.symbols.contains(&(name.to_string(), arity))
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }

    /// Checks that every application node uses a declared symbol.
    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::App(f, args) => {
                if !self.contains(f, args.len()) {
                    return Err(TermError::UnknownSymbol(f.clone(), args.len()));
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            _ => Ok(()),
        }
    }

    /// The signature of the differential-operator example:
    /// `∂/2, v/2, x/0, x/1, list/2, nil/0, i/0, j/0`.
    pub fn figure() -> Self {
        Signature::new([
            ("∂", 2),
            ("v", 2),
            ("x", 0),
            ("x", 1),
            ("list", 2),
            ("nil", 0),
            ("i", 0),
            ("j", 0),
        ])
        .expect("has constants")
    }

    /// `f/2, g/1, a/0, b/0`.
    pub fn abstract_small() -> Self {
        Signature::new([("f", 2), ("g", 1), ("a", 0), ("b", 0)]).expect("has constants")
    }
}

/// A finite map from variables to terms; identity bindings are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, Term)>>(pairs: I) -> Self {
        let mut s = Substitution::new();
        for (x, t) in pairs {
            s.insert(x, t);
        }
        s
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn insert(&mut self, x: String, t: Term) {
        if t == Term::Var(x.clone()) {
            self.0.remove(&x);
        } else {
            self.0.insert(x, t);
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Applies `sigma` to every right-hand side. Used to keep the
    /// substitution idempotent while solving.
    fn compose_in_place(&mut self, x: &str, t: &Term) {
        let single = Substitution::from_pairs([(x.to_string(), t.clone())]);
        let keys: Vec<String> = self.0.keys().cloned().collect();
        for k in keys {
            let v = self.0[&k].apply_subst(&single);
            self.insert(k, v);
        }
        self.insert(x.to_string(), t.clone());
    }

    /// `true` when `other` is an instance of `self`: `other = rho ∘ self` on
    /// the variables of `vars`.
    pub fn subsumes_on(&self, other: &Substitution, vars: &BTreeSet<String>) -> bool {
        // Matching the tuple of images decides the existence of rho.
        let lhs = Term::App(
            "#".into(),
            vars.iter().map(|x| Term::Var(x.clone()).apply_subst(self)).collect(),
        );
        let rhs = Term::App(
            "#".into(),
            vars.iter().map(|x| Term::Var(x.clone()).apply_subst(other)).collect(),
        );
        lhs.matches(&rhs)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (x, t)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{t}")?;
        }
        f.write_str("}")
    }
}

/// One-sided matching: the unique `σ` with `σ(u) = t`, binding only
/// variables of `u`.
pub fn match_term(u: &Term, t: &Term) -> Option<Substitution> {
    fn go(u: &Term, t: &Term, acc: &mut BTreeMap<String, Term>) -> bool {
        match (u, t) {
            (Term::Var(x), _) => match acc.get(x) {
                Some(bound) => bound == t,
                None => {
                    acc.insert(x.clone(), t.clone());
                    true
                }
            },
            (Term::App(f, us), Term::App(g, ts)) => {
                f == g
                    && us.len() == ts.len()
                    && us.iter().zip(ts).all(|(a, b)| go(a, b, acc))
            }
            (Term::Hole, Term::Hole) => true,
            _ => false,
        }
    }
    let mut acc = BTreeMap::new();
    go(u, t, &mut acc).then(|| Substitution::from_pairs(acc))
}

/// Syntactic most general unifier of two terms over a shared variable
/// namespace, with occurs check. The result is idempotent. When two
/// variables meet, the right one is bound to the left one.
pub fn mgu(u: &Term, v: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    let mut stack = vec![(u.clone(), v.clone())];
    while let Some((a, b)) = stack.pop() {
        let a = a.apply_subst(&sigma);
        let b = b.apply_subst(&sigma);
        if a == b {
            continue;
        }
        match (a, b) {
            (l, Term::Var(y)) => {
                if l.vars().contains(&y) {
                    return None;
                }
                sigma.compose_in_place(&y, &l);
            }
            (Term::Var(x), r) => {
                if r.vars().contains(&x) {
                    return None;
                }
                sigma.compose_in_place(&x, &r);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                stack.extend(xs.into_iter().zip(ys).rev());
            }
            _ => return None,
        }
    }
    Some(sigma)
}

/// Renames the variables of `v` so that none occurs in `u`.
pub fn rename_apart(u: &Term, v: &Term) -> Term {
    let taken: BTreeSet<String> = u.vars().union(&v.vars()).cloned().collect();
    let mut map = BTreeMap::new();
    let blocked = u.vars();
    for x in v.vars() {
        if blocked.contains(&x) {
            let mut k = 1;
            let fresh = loop {
                let cand = format!("{x}_{k}");
                if !taken.contains(&cand) && !map.values().any(|m: &String| *m == cand) {
                    break cand;
                }
                k += 1;
            };
            map.insert(x, fresh);
        }
    }
    v.rename_vars(&map)
}

/// `u ∧ u'`: the most general common instance of two patterns, computed by
/// unifying `u` with a renamed-apart copy of `u'`. A ground term `t` is an
/// instance of the result iff it is an instance of both patterns.
pub fn meet(u: &Term, v: &Term) -> Option<Term> {
    let v = rename_apart(u, v);
    mgu(u, &v).map(|gamma| u.apply_subst(&gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::constant("a")
    }
    fn b() -> Term {
        Term::constant("b")
    }
    fn f(args: Vec<Term>) -> Term {
        Term::app("f", args)
    }
    fn pos(steps: &[u32]) -> Position {
        Position::new(steps.to_vec()).unwrap()
    }
    fn fig() -> Term {
        Term::app(
            "∂",
            vec![
                Term::app("v", vec![Term::constant("x"), Term::constant("nil")]),
                Term::app("x", vec![Term::constant("nil")]),
            ],
        )
    }

    #[test]
    fn positions_of_examples() {
        assert_eq!(a().positions(), vec![Position::root()]);
        assert_eq!(
            fig().positions(),
            vec![
                Position::root(),
                pos(&[1]),
                pos(&[1, 1]),
                pos(&[1, 2]),
                pos(&[2]),
                pos(&[2, 1])
            ]
        );
        let fga = Term::app("f", vec![Term::app("g", vec![a()])]);
        assert_eq!(fga.positions(), vec![Position::root(), pos(&[1]), pos(&[1, 1])]);
    }

    #[test]
    fn compare_positions_examples() {
        assert_eq!(Position::root().relation(&pos(&[2, 1])), PosRelation::StrictPrefix);
        assert_eq!(pos(&[1, 2]).relation(&pos(&[2, 1])), PosRelation::Parallel);
        assert_eq!(pos(&[2, 1]).relation(&pos(&[2, 1])), PosRelation::Equal);
        assert_eq!(pos(&[2, 1]).relation(&pos(&[2])), PosRelation::StrictExtension);
        assert!(pos(&[1]).before(&pos(&[2])));
        assert!(!pos(&[1]).before(&pos(&[1])));
        assert!(pos(&[1]).before_eq(&pos(&[1])));
    }

    #[test]
    fn zero_step_rejected() {
        assert!(Position::new(vec![1, 0]).is_err());
    }

    #[test]
    fn subterm_and_replace() {
        assert_eq!(fig().subterm_at(&pos(&[2, 1])).unwrap(), &Term::constant("nil"));
        assert_eq!(fig().subterm_at(&Position::root()).unwrap(), &fig());
        assert_eq!(f(vec![a(), b()]).subterm_at(&pos(&[2])).unwrap(), &b());
        assert!(matches!(
            a().subterm_at(&pos(&[3])),
            Err(TermError::PositionOutOfRange(_))
        ));
        assert_eq!(
            f(vec![a(), b()]).replace_at(&pos(&[2]), Term::constant("c")).unwrap(),
            f(vec![a(), Term::constant("c")])
        );
        assert_eq!(fig().replace_at(&Position::root(), a()).unwrap(), a());
        let list = Term::app("list", vec![Term::constant("nil"), Term::constant("j")]);
        let expected = Term::app(
            "∂",
            vec![
                Term::app("v", vec![Term::constant("x"), Term::constant("nil")]),
                Term::app("x", vec![list.clone()]),
            ],
        );
        assert_eq!(fig().replace_at(&pos(&[2, 1]), list).unwrap(), expected);
        assert!(a().replace_at(&pos(&[1]), b()).is_err());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(a().depth(), 0);
        assert_eq!(Term::app("f", vec![a()]).depth(), 1);
        assert_eq!(fig().depth(), 2);
        assert_eq!(Term::var("X").depth(), 0);
    }

    #[test]
    fn plug_examples() {
        let s = f(vec![a(), b()]);
        assert_eq!(Context::hole().plug(&s), s);
        let ctx = Context::new(Term::app("list", vec![Term::Hole, Term::constant("j")])).unwrap();
        assert_eq!(
            ctx.plug(&Term::constant("nil")),
            Term::app("list", vec![Term::constant("nil"), Term::constant("j")])
        );
        let fc = Context::new(Term::app("f", vec![Term::Hole])).unwrap();
        let gc = Context::new(Term::app("g", vec![Term::Hole])).unwrap();
        assert_eq!(
            fc.compose(&gc).as_term(),
            &Term::app("f", vec![Term::app("g", vec![Term::Hole])])
        );
        assert!(Context::new(f(vec![Term::Hole, Term::Hole])).is_err());
        assert!(Context::new(a()).is_err());
    }

    #[test]
    fn substitution_examples() {
        let x = Term::var("X");
        let y = Term::var("Y");
        let s = Substitution::from_pairs([("X".to_string(), a())]);
        assert_eq!(f(vec![x.clone(), y.clone()]).apply_subst(&s), f(vec![a(), y.clone()]));
        let t = f(vec![x.clone(), y.clone()]);
        assert_eq!(t.apply_subst(&Substitution::new()), t);
        let gy = Term::app("g", vec![y.clone()]);
        let s = Substitution::from_pairs([("X".to_string(), gy.clone())]);
        assert_eq!(f(vec![x.clone(), x]).apply_subst(&s), f(vec![gy.clone(), gy]));
        // identity bindings are dropped
        let s = Substitution::from_pairs([("X".to_string(), Term::var("X"))]);
        assert!(s.is_empty());
    }

    #[test]
    fn matching_examples() {
        let fx = Term::app("f", vec![Term::var("X")]);
        assert_eq!(
            match_term(&fx, &Term::app("f", vec![a()])),
            Some(Substitution::from_pairs([("X".to_string(), a())]))
        );
        assert_eq!(match_term(&Term::app("f", vec![a()]), &Term::app("f", vec![b()])), None);
        let fxx = f(vec![Term::var("X"), Term::var("X")]);
        assert_eq!(match_term(&fxx, &f(vec![a(), b()])), None);
        assert!(fxx.matches(&f(vec![a(), a()])));
    }

    #[test]
    fn unification_examples() {
        let u = f(vec![Term::var("X"), b()]);
        let v = f(vec![a(), Term::var("Y")]);
        assert_eq!(meet(&u, &v), Some(f(vec![a(), b()])));
        assert_eq!(meet(&u, &u), Some(u.clone()));
        let x = Term::var("X");
        assert_eq!(mgu(&x, &Term::app("g", vec![x.clone()])), None);
        assert_eq!(meet(&a(), &b()), None);
    }

    #[test]
    fn meet_renames_apart() {
        // With a shared namespace these two would not unify.
        let u = f(vec![Term::var("X"), a()]);
        let v = f(vec![b(), Term::var("X")]);
        assert_eq!(mgu(&u, &v), None);
        assert_eq!(meet(&u, &v), Some(f(vec![b(), a()])));
    }

    #[test]
    fn mgu_is_a_unifier() {
        let u = f(vec![Term::var("X"), Term::app("g", vec![Term::var("Y")])]);
        let v = f(vec![Term::app("g", vec![Term::var("Z")]), Term::var("X")]);
        let s = mgu(&u, &v).unwrap();
        assert_eq!(u.apply_subst(&s), v.apply_subst(&s));
    }

    #[test]
    fn signature_requires_constant() {
        assert!(Signature::new([("f", 1)]).is_err());
        let sig = Signature::figure();
        assert!(sig.contains("x", 0) && sig.contains("x", 1));
        assert!(sig.check_term(&fig()).is_ok());
        assert!(sig.check_term(&Term::app("v", vec![a()])).is_err());
    }
}
