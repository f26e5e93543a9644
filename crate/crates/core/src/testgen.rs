//! Proptest generators shared by the unit tests.

use proptest::prelude::*;

use crate::formula::BoolFormula;
use crate::pce::{ContextTuple, Pce};
use crate::strategy::{Entry, Strategy as CeStrategy};
use crate::term::{Context, Position, Term};

pub fn ground_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant("a")), Just(Term::constant("b"))];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("g", vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::app("f", vec![l, r])),
        ]
    })
}

pub fn pattern() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::constant("a")),
        Just(Term::constant("b")),
        Just(Term::var("X")),
        Just(Term::var("Y")),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("g", vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::app("f", vec![l, r])),
        ]
    })
}

pub fn context() -> impl Strategy<Value = Context> {
    let h = || Term::Hole;
    prop_oneof![
        Just(Term::app("g", vec![h()])),
        Just(Term::app("f", vec![h(), Term::constant("a")])),
        Just(Term::app("f", vec![Term::constant("b"), h()])),
        Just(h()),
    ]
    .prop_map(|t| Context::new(t).unwrap())
}

pub fn tuple() -> impl Strategy<Value = ContextTuple> {
    prop::collection::vec(context(), 1..4).prop_map(|v| ContextTuple::new(v).unwrap())
}

pub fn position() -> impl Strategy<Value = Position> {
    prop_oneof![
        Just(vec![]),
        Just(vec![1]),
        Just(vec![2]),
        Just(vec![1, 1]),
        Just(vec![1, 2]),
        Just(vec![2, 1]),
    ]
    .prop_map(|v| Position::new(v).unwrap())
}

pub fn pce() -> impl Strategy<Value = Pce> {
    prop_oneof![
        1 => Just(Pce::Fail),
        6 => prop::collection::btree_map(position(), tuple(), 0..4)
            .prop_map(|m| Pce::from_entries(m.into_iter().collect())),
    ]
}

fn pos(v: &[u32]) -> Position {
    Position::new(v.to_vec()).unwrap()
}

/// Formulas over the given variables, built from a random shape.
fn formula_over(vars: Vec<Position>) -> impl Strategy<Value = BoolFormula> {
    let n = vars.len();
    prop_oneof![
        Just(BoolFormula::True),
        Just(BoolFormula::conj(vars.clone())),
        Just(BoolFormula::disj(vars.clone())),
        prop::collection::vec((any::<bool>(), any::<bool>()), n).prop_map(move |bits| {
            // x₁ op₁ (x₂ op₂ (…)), with some variables left out.
            let mut phi: Option<BoolFormula> = None;
            for (p, (keep, and)) in vars.iter().zip(bits).rev() {
                if !keep {
                    continue;
                }
                let v = BoolFormula::Var(p.clone());
                phi = Some(match phi {
                    None => v,
                    Some(rest) if and => BoolFormula::and(v, rest),
                    Some(rest) => BoolFormula::or(v, rest),
                });
            }
            phi.unwrap_or(BoolFormula::True)
        }),
    ]
}

/// Well-founded shapes: (strategy positions, insertion positions).
fn list_shapes() -> Vec<(Vec<Position>, Vec<Position>)> {
    let e = Position::root;
    vec![
        (vec![pos(&[1])], vec![]),
        (vec![pos(&[2])], vec![e()]),
        (vec![pos(&[1]), pos(&[2])], vec![]),
        (vec![pos(&[1]), pos(&[2])], vec![e()]),
        (vec![pos(&[1, 1]), pos(&[1, 2])], vec![pos(&[1])]),
        (vec![pos(&[1, 1]), pos(&[2])], vec![e(), pos(&[1])]),
        (vec![pos(&[2, 1])], vec![e(), pos(&[2])]),
        (vec![], vec![e()]),
        (vec![], vec![pos(&[1]), pos(&[2])]),
        (vec![], vec![pos(&[2, 1])]),
        (vec![e()], vec![]),
    ]
}

fn gated(inner: BoxedStrategy<CeStrategy>) -> impl Strategy<Value = CeStrategy> {
    proptest::sample::select(list_shapes()).prop_flat_map(move |(strats, inserts)| {
        let vars: Vec<Position> = strats
            .iter()
            .chain(&inserts)
            .filter(|p| !p.is_root())
            .cloned()
            .collect();
        (
            prop::collection::vec(inner.clone(), strats.len()),
            prop::collection::vec(tuple(), inserts.len()),
            formula_over(vars),
        )
            .prop_map(move |(ss, ts, phi)| {
                let mut entries: Vec<(Position, Entry)> = inserts
                    .iter()
                    .cloned()
                    .zip(ts.into_iter().map(Entry::Insert))
                    .collect();
                entries.extend(strats.iter().cloned().zip(ss.into_iter().map(Entry::Strategy)));
                CeStrategy::Gated(entries, phi)
            })
    })
}

fn recursive(body: CeStrategy, shape: u8) -> CeStrategy {
    let x = || CeStrategy::var("R");
    let p1 = pos(&[1]);
    let p2 = pos(&[2]);
    let rec = match shape % 4 {
        0 => CeStrategy::at(p1, x()),
        1 => CeStrategy::guard(
            Term::app("f", vec![Term::var("Y"), Term::var("Z")]),
            CeStrategy::Gated(
                vec![(p1.clone(), Entry::Strategy(x())), (p2.clone(), Entry::Strategy(x()))],
                BoolFormula::or(BoolFormula::Var(p1), BoolFormula::Var(p2)),
            ),
        ),
        2 => CeStrategy::guard(Term::app("g", vec![Term::var("Y")]), CeStrategy::at(p1, x())),
        _ => CeStrategy::choice(
            CeStrategy::Gated(vec![(p1.clone(), Entry::Strategy(x()))], BoolFormula::Var(p1)),
            CeStrategy::Gated(vec![(p2.clone(), Entry::Strategy(x()))], BoolFormula::Var(p2)),
        ),
    };
    CeStrategy::mu("R", CeStrategy::choice(body, rec))
}

/// Closed, well-founded strategies over `f/2, g/1, a, b`.
pub fn strategy() -> impl Strategy<Value = CeStrategy> {
    let leaf = prop_oneof![
        1 => Just(CeStrategy::Fail),
        3 => (pattern(), tuple()).prop_map(|(u, t)| CeStrategy::GuardInsert(u, t)),
        3 => (position(), tuple()).prop_map(|(p, t)| CeStrategy::AtInsert(p, t)),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (pattern(), inner.clone()).prop_map(|(u, s)| CeStrategy::guard(u, s)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| CeStrategy::choice(a, b)),
            (position(), inner.clone()).prop_map(|(p, s)| CeStrategy::at(p, s)),
            gated(inner.clone()),
            (inner, any::<u8>()).prop_map(|(s, k)| recursive(s, k)),
        ]
    })
}
