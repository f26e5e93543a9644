//! Compiling a strategy against a term into a position-based embedding.

use std::collections::HashMap;

use crate::formula::{eval_formula, BoolFormula, Valuation};
use crate::pce::{apply_pce, unify_pce, ContextTuple, Pce};
use crate::strategy::{Entry, Strategy};
use crate::term::{Position, Term};

/// `Ψ(S, t)`: the insertions `S` performs on `t`, or `Fail`.
pub fn psi(s: &Strategy, t: &Term) -> Pce {
    Psi::new(s).at(t)
}

/// `Ψ(S, t)(t)`.
pub fn psi_apply(s: &Strategy, t: &Term) -> Option<Term> {
    apply_pce(&psi(s, t), Some(t))
}

/// `Ψ(S, ·)` for one strategy and many terms.
///
/// Fixed points are tied into cycles rather than unfolded, and the result of
/// each fixed point on each subterm is computed once.
pub struct Psi<'s> {
    graph: Graph<'s>,
    root: NodeId,
}

impl<'s> Psi<'s> {
    pub fn new(s: &'s Strategy) -> Self {
        let mut graph = Graph::default();
        let root = graph.compile(s, &mut Vec::new());
        Psi { graph, root }
    }

    pub fn at(&self, t: &Term) -> Pce {
        Eval {
            graph: &self.graph,
            memo: HashMap::new(),
        }
        .psi(self.root, t)
    }
}

type NodeId = usize;

enum Node<'s> {
    Fail,
    GuardInsert(&'s Term, &'s ContextTuple),
    Guard(&'s Term, NodeId),
    Choice(NodeId, NodeId),
    /// A fixed point; its body is filled in after compilation.
    Mu(NodeId),
    At(&'s Position, NodeId),
    AtInsert(&'s Position, &'s ContextTuple),
    Gated(Vec<(&'s Position, GatedEntry<'s>)>, &'s BoolFormula),
}

enum GatedEntry<'s> {
    Strategy(NodeId),
    Insert(&'s ContextTuple),
}

#[derive(Default)]
struct Graph<'s> {
    nodes: Vec<Node<'s>>,
}

impl<'s> Graph<'s> {
    fn push(&mut self, n: Node<'s>) -> NodeId {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn compile(&mut self, s: &'s Strategy, scope: &mut Vec<(&'s str, NodeId)>) -> NodeId {
        match s {
            Strategy::Fail => self.push(Node::Fail),
            // A free variable behaves like `Fail`.
            Strategy::Var(x) => match scope.iter().rev().find(|(y, _)| y == x) {
                Some(&(_, id)) => id,
                None => self.push(Node::Fail),
            },
            Strategy::GuardInsert(u, tau) => self.push(Node::GuardInsert(u, tau)),
            Strategy::Guard(u, b) => {
                let b = self.compile(b, scope);
                self.push(Node::Guard(u, b))
            }
            Strategy::Choice(a, b) => {
                let a = self.compile(a, scope);
                let b = self.compile(b, scope);
                self.push(Node::Choice(a, b))
            }
            Strategy::Mu(x, b) => {
                let id = self.push(Node::Mu(usize::MAX));
                scope.push((x, id));
                let body = self.compile(b, scope);
                scope.pop();
                self.nodes[id] = Node::Mu(body);
                id
            }
            Strategy::At(p, b) => {
                let b = self.compile(b, scope);
                self.push(Node::At(p, b))
            }
            Strategy::AtInsert(p, tau) => self.push(Node::AtInsert(p, tau)),
            Strategy::Gated(entries, phi) => {
                let entries = entries
                    .iter()
                    .map(|(p, e)| {
                        let e = match e {
                            Entry::Strategy(b) => GatedEntry::Strategy(self.compile(b, scope)),
                            Entry::Insert(tau) => GatedEntry::Insert(tau),
                        };
                        (p, e)
                    })
                    .collect();
                self.push(Node::Gated(entries, phi))
            }
        }
    }
}

/// Memo keys use subterm addresses, which are stable for one top-level call.
struct Eval<'g, 's> {
    graph: &'g Graph<'s>,
    memo: HashMap<(NodeId, *const Term), Pce>,
}

impl Eval<'_, '_> {
    fn psi(&mut self, n: NodeId, t: &Term) -> Pce {
        match &self.graph.nodes[n] {
            Node::Fail => Pce::Fail,
            Node::GuardInsert(u, tau) => {
                if u.matches(t) {
                    Pce::single(Position::root(), (*tau).clone())
                } else {
                    Pce::Fail
                }
            }
            Node::Guard(u, b) => {
                if u.matches(t) {
                    self.psi(*b, t)
                } else {
                    Pce::Fail
                }
            }
            Node::Choice(a, b) => match self.psi(*a, t) {
                Pce::Fail => self.psi(*b, t),
                e => e,
            },
            Node::Mu(b) => {
                let key = (n, t as *const Term);
                if let Some(e) = self.memo.get(&key) {
                    return e.clone();
                }
                let e = self.psi(*b, t);
                self.memo.insert(key, e.clone());
                e
            }
            Node::At(p, b) => self.at(p, *b, t),
            Node::AtInsert(p, tau) => insert(p, tau, t),
            Node::Gated(entries, phi) => {
                let results: Vec<(&Position, Pce)> = entries
                    .iter()
                    .map(|(p, e)| {
                        let r = match e {
                            GatedEntry::Strategy(b) => self.at(p, *b, t),
                            GatedEntry::Insert(tau) => insert(p, tau, t),
                        };
                        (*p, r)
                    })
                    .collect();
                let nu: Valuation = results.iter().map(|(p, r)| ((*p).clone(), !r.is_fail())).collect();
                if !eval_formula(&nu, phi).unwrap_or(false) {
                    return Pce::Fail;
                }
                results
                    .into_iter()
                    .filter(|(_, r)| !r.is_fail())
                    .fold(Pce::identity(), |acc, (_, r)| unify_pce(&acc, &r))
            }
        }
    }

    fn at(&mut self, p: &Position, b: NodeId, t: &Term) -> Pce {
        match t.subterm(p) {
            Some(sub) => self.psi(b, sub).prefixed(p),
            None => Pce::Fail,
        }
    }
}

fn insert(p: &Position, tau: &ContextTuple, t: &Term) -> Pce {
    if t.has_position(p) {
        Pce::single(p.clone(), tau.clone())
    } else {
        Pce::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::{eq_pce, is_well_founded_pce};
    use crate::semantics::apply_ce;
    use crate::strategy::is_well_founded_ce;
    use crate::term::Context;
    use crate::testgen;
    use proptest::{prop_assert, prop_assert_eq, proptest};

    fn ctx(t: Term) -> ContextTuple {
        ContextTuple::single(Context::new(t).unwrap())
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
    fn list_j() -> ContextTuple {
        ctx(Term::app("list", vec![Term::Hole, Term::constant("j")]))
    }

    #[test]
    fn guard_insert_on_match() {
        let tau = ctx(Term::app("g", vec![Term::Hole]));
        let s = Strategy::GuardInsert(Term::var("X"), tau.clone());
        assert_eq!(psi(&s, &Term::constant("a")), Pce::single(Position::root(), tau));
    }

    #[test]
    fn insertion_clause() {
        let p = Position::new(vec![2, 1]).unwrap();
        let s = Strategy::AtInsert(p.clone(), list_j());
        assert_eq!(psi(&s, &fig()), Pce::single(p, list_j()));
        let expected = Term::app(
            "∂",
            vec![
                Term::app("v", vec![Term::constant("x"), Term::constant("nil")]),
                Term::app("x", vec![Term::app("list", vec![Term::constant("nil"), Term::constant("j")])]),
            ],
        );
        assert_eq!(psi_apply(&s, &fig()), Some(expected));
    }

    #[test]
    fn fixed_point_clause() {
        let a = Term::constant("a");
        let f = |t: Term| Term::app("f", vec![t]);
        let g = ctx(Term::app("g", vec![Term::Hole]));
        let s = Strategy::mu(
            "X",
            Strategy::choice(
                Strategy::GuardInsert(f(a.clone()), g.clone()),
                Strategy::at(Position::single(1), Strategy::var("X")),
            ),
        );
        let t = f(f(a));
        let e = psi(&s, &t);
        assert!(eq_pce(&e, &Pce::single(Position::single(1), g)));
        assert_eq!(apply_pce(&e, Some(&t)), apply_ce(&s, Some(&t)));
    }

    #[test]
    fn failing_psi_fails_application() {
        assert_eq!(psi_apply(&Strategy::Fail, &Term::constant("a")), None);
    }

    proptest! {
        #[test]
        fn psi_preserves_semantics(s in testgen::strategy(), t in testgen::ground_term()) {
            prop_assert!(is_well_founded_ce(&s));
            prop_assert!(s.is_closed());
            let e = psi(&s, &t);
            prop_assert!(is_well_founded_pce(&e));
            prop_assert_eq!(apply_pce(&e, Some(&t)), apply_ce(&s, Some(&t)));
        }
    }
}
