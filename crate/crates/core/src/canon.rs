//! Canonical forms: every gate a conjunction of one-step position variables,
//! every position one step long.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::CeError;
use crate::formula::BoolFormula;
use crate::strategy::{Entry, Strategy};
use crate::term::Position;

/// Default bound on the gated entries a disjunctive gate may range over.
pub const DEFAULT_SUBSET_LIMIT: usize = 4;

/// `φ` in disjunctive normal form, as a list of conjunctions.
pub fn to_dnf(phi: &BoolFormula) -> Vec<BoolFormula> {
    phi.to_dnf()
        .into_iter()
        .map(BoolFormula::conj)
        .collect()
}

/// Rewrites `⟨L, φ⟩` for an arbitrary `φ` into a left choice of gated lists
/// with conjunctive gates: one branch per subset of the non-root entries
/// that satisfies `φ`, largest subsets first. Root entries are kept in
/// every branch.
pub fn expand_disjunction(
    entries: &[(Position, Entry)],
    phi: &BoolFormula,
    limit: usize,
) -> Result<Strategy, CeError> {
    let gated: Vec<&Position> = entries.iter().map(|(p, _)| p).filter(|p| !p.is_root()).collect();
    if gated.len() > limit {
        return Err(CeError::GateTooWide(gated.len(), limit));
    }
    let mut subsets: Vec<Vec<&Position>> = (0u32..1 << gated.len())
        .map(|mask| {
            gated
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, p)| *p)
                .collect()
        })
        .collect();
    subsets.sort_by(|a: &Vec<&Position>, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let branches: Vec<Strategy> = subsets
        .into_iter()
        .filter(|sub| phi.holds_for(&sub.iter().map(|p| (*p).clone()).collect()))
        .map(|sub| {
            let kept = entries
                .iter()
                .filter(|(p, _)| p.is_root() || sub.contains(&p))
                .cloned()
                .collect();
            Strategy::Gated(kept, BoolFormula::conj(sub.into_iter().cloned()))
        })
        .collect();
    Ok(Strategy::choice_all(branches))
}

/// Replaces every multi-step position by nested one-step jumps. Gated-list
/// entries sharing a first step are grouped under one entry at that step.
pub fn split_positions(s: &Strategy) -> Strategy {
    match s {
        Strategy::At(p, b) => nest_at(p, split_positions(b)),
        Strategy::AtInsert(p, tau) => match p.split_first() {
            Some((i, rest)) if !rest.is_root() => Strategy::at(
                Position::single(i),
                split_positions(&Strategy::AtInsert(rest, tau.clone())),
            ),
            _ => s.clone(),
        },
        Strategy::Gated(entries, phi) => split_gated(entries, phi),
        _ => s.map_children(split_positions),
    }
}

fn nest_at(p: &Position, inner: Strategy) -> Strategy {
    if p.is_root() {
        return Strategy::at(Position::root(), inner);
    }
    p.steps()
        .iter()
        .rev()
        .fold(inner, |acc, &i| Strategy::at(Position::single(i), acc))
}

fn split_entry(e: &Entry) -> Entry {
    match e {
        Entry::Strategy(b) => Entry::Strategy(split_positions(b)),
        Entry::Insert(t) => Entry::Insert(t.clone()),
    }
}

fn split_gated(entries: &[(Position, Entry)], phi: &BoolFormula) -> Strategy {
    let required = phi.as_conjunction().unwrap_or_default();
    let needs_split = entries.iter().any(|(p, _)| !p.is_single_step());
    if !needs_split {
        return Strategy::Gated(
            entries.iter().map(|(p, e)| (p.clone(), split_entry(e))).collect(),
            phi.clone(),
        );
    }
    let mut out: Vec<(Position, Entry)> = Vec::new();
    let mut groups: BTreeMap<u32, Vec<(Position, &Entry, bool)>> = BTreeMap::new();
    for (p, e) in entries {
        match p.split_first() {
            None => out.push((p.clone(), split_entry(e))),
            Some((i, rest)) => groups
                .entry(i)
                .or_default()
                .push((rest, e, required.contains(p))),
        }
    }
    let mut gate = BTreeSet::new();
    for (i, group) in groups {
        let head = Position::single(i);
        if group.iter().any(|(_, _, r)| *r) {
            gate.insert(head.clone());
        }
        if let [(rest, e, _)] = group.as_slice() {
            if rest.is_root() {
                out.push((head, split_entry(e)));
                continue;
            }
        }
        let inner_gate = BoolFormula::conj(
            group
                .iter()
                .filter(|(q, _, r)| *r && !q.is_root())
                .map(|(q, _, _)| q.clone()),
        );
        let inner_entries = group.into_iter().map(|(q, e, _)| (q, e.clone())).collect::<Vec<_>>();
        let inner = split_gated(&inner_entries, &inner_gate);
        out.push((head, Entry::Strategy(inner)));
    }
    Strategy::Gated(out, BoolFormula::conj(gate))
}

/// Removes disjunctive gates, bottom-up.
fn expand_gates(s: &Strategy, limit: usize) -> Result<Strategy, CeError> {
    let mut err = None;
    let rebuilt = s.map_children(|c| match expand_gates(c, limit) {
        Ok(c) => c,
        Err(e) => {
            err.get_or_insert(e);
            Strategy::Fail
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    match &rebuilt {
        Strategy::Gated(entries, phi) if phi.as_conjunction().is_none() => {
            expand_disjunction(entries, phi, limit)
        }
        _ => Ok(rebuilt),
    }
}

/// An equivalent strategy in canonical form.
pub fn to_canonical(s: &Strategy) -> Result<Strategy, CeError> {
    to_canonical_with_limit(s, DEFAULT_SUBSET_LIMIT)
}

pub fn to_canonical_with_limit(s: &Strategy, limit: usize) -> Result<Strategy, CeError> {
    Ok(prune_failures(&split_positions(&expand_gates(s, limit)?)))
}

/// Removes `Fail` wherever its effect is local: choice operands, guard and
/// jump bodies, and gated entries. A failing entry the gate requires makes
/// the whole list fail.
pub fn prune_failures(s: &Strategy) -> Strategy {
    use Strategy as S;
    match s.map_children(prune_failures) {
        S::Choice(a, b) => match (*a, *b) {
            (S::Fail, b) => b,
            (a, S::Fail) => a,
            (a, b) => S::choice(a, b),
        },
        S::Guard(_, b) | S::At(_, b) | S::Mu(_, b) if *b == S::Fail => S::Fail,
        S::Gated(entries, phi) => {
            let mentioned = phi.vars();
            let required = phi.as_conjunction().unwrap_or_default();
            let mut kept = Vec::with_capacity(entries.len());
            for (p, e) in entries {
                if e == Entry::Strategy(S::Fail) {
                    if required.contains(&p) {
                        return S::Fail;
                    }
                    if !mentioned.contains(&p) {
                        continue;
                    }
                }
                kept.push((p, e));
            }
            S::Gated(kept, phi)
        }
        other => other,
    }
}

pub fn is_canonical(s: &Strategy) -> bool {
    check_canonical(s).is_ok()
}

/// Reports the first non-canonical node.
pub fn check_canonical(s: &Strategy) -> Result<(), CeError> {
    let bad = |m: String| Err(CeError::NotCanonical(m));
    match s {
        Strategy::At(p, _) | Strategy::AtInsert(p, _) if !p.is_single_step() => {
            return bad(format!("position {p} has more than one step"));
        }
        Strategy::Gated(entries, phi) => {
            if let Some((p, _)) = entries.iter().find(|(p, _)| !p.is_single_step()) {
                return bad(format!("position {p} has more than one step"));
            }
            if phi.as_conjunction().is_none() {
                return bad(format!("gate {phi} is not a conjunction"));
            }
        }
        _ => {}
    }
    s.children().try_for_each(check_canonical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::ContextTuple;
    use crate::semantics::apply_ce;
    use crate::strategy::{is_well_founded_ce, top_down};
    use crate::term::{Context, Signature, Term};
    use crate::testgen;
    use proptest::{prop_assert, prop_assert_eq, proptest};

    fn pos(v: &[u32]) -> Position {
        Position::new(v.to_vec()).unwrap()
    }
    fn x(v: &[u32]) -> BoolFormula {
        BoolFormula::Var(pos(v))
    }
    fn g_tuple() -> ContextTuple {
        ContextTuple::single(Context::new(Term::app("g", vec![Term::Hole])).unwrap())
    }
    fn s_a() -> Strategy {
        Strategy::GuardInsert(Term::constant("a"), g_tuple())
    }
    fn s_b() -> Strategy {
        Strategy::GuardInsert(Term::constant("b"), g_tuple())
    }
    fn entries() -> Vec<(Position, Entry)> {
        vec![(pos(&[1]), Entry::Strategy(s_a())), (pos(&[2]), Entry::Strategy(s_b()))]
    }

    #[test]
    fn dnf_examples() {
        assert_eq!(to_dnf(&BoolFormula::or(x(&[1]), x(&[2]))), vec![x(&[1]), x(&[2])]);
        let phi = BoolFormula::and(BoolFormula::or(x(&[1]), x(&[2])), x(&[3]));
        assert_eq!(
            to_dnf(&phi),
            vec![BoolFormula::and(x(&[1]), x(&[3])), BoolFormula::and(x(&[2]), x(&[3]))]
        );
        assert_eq!(to_dnf(&BoolFormula::True), vec![BoolFormula::True]);
    }

    #[test]
    fn expand_disjunction_example() {
        let out = expand_disjunction(&entries(), &BoolFormula::or(x(&[1]), x(&[2])), 4).unwrap();
        let expected = Strategy::choice_all(vec![
            Strategy::Gated(entries(), BoolFormula::and(x(&[1]), x(&[2]))),
            Strategy::Gated(vec![entries()[0].clone()], x(&[1])),
            Strategy::Gated(vec![entries()[1].clone()], x(&[2])),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn expand_with_true_disjunct() {
        let phi = BoolFormula::Or(Box::new(x(&[1])), Box::new(BoolFormula::True));
        let out = expand_disjunction(&entries(), &phi, 4).unwrap();
        let first = out.choice_operands()[0].clone();
        assert_eq!(first, Strategy::Gated(entries(), BoolFormula::and(x(&[1]), x(&[2]))));
        // The canonical form of a gate that is always true is equivalent to
        // the list with gate true.
        let plain = Strategy::Gated(entries(), BoolFormula::True);
        let (a, b) = (Term::constant("a"), Term::constant("b"));
        for t in [Term::app("f", vec![a.clone(), b.clone()]), Term::app("f", vec![b, a.clone()]), a] {
            assert_eq!(apply_ce(&out, Some(&t)), apply_ce(&plain, Some(&t)));
        }
    }

    #[test]
    fn singleton_is_unchanged() {
        let s = Strategy::Gated(vec![entries()[0].clone()], x(&[1]));
        assert_eq!(to_canonical(&s).unwrap(), s);
    }

    #[test]
    fn split_examples() {
        let s = Strategy::AtInsert(pos(&[2, 1]), g_tuple());
        assert_eq!(
            split_positions(&s),
            Strategy::at(pos(&[2]), Strategy::AtInsert(pos(&[1]), g_tuple()))
        );
        let grouped = Strategy::Gated(
            vec![(pos(&[1, 1]), Entry::Strategy(s_a())), (pos(&[1, 2]), Entry::Strategy(s_b()))],
            BoolFormula::and(x(&[1, 1]), x(&[1, 2])),
        );
        let expected = Strategy::Gated(
            vec![(
                pos(&[1]),
                Entry::Strategy(Strategy::Gated(entries(), BoolFormula::and(x(&[1]), x(&[2])))),
            )],
            x(&[1]),
        );
        assert_eq!(split_positions(&grouped), expected);
        let root = Strategy::at(Position::root(), s_a());
        assert_eq!(split_positions(&root), root);
    }

    #[test]
    fn canonical_fixpoints() {
        let s = Strategy::AtInsert(Position::root(), ContextTuple::hole());
        assert_eq!(to_canonical(&s).unwrap(), s);
        let sig = Signature::new([("f", 2), ("a", 0)]).unwrap();
        let td = top_down(&s_a(), &sig);
        let c = to_canonical(&td).unwrap();
        assert!(is_canonical(&c));
        assert!(is_well_founded_ce(&c));
        assert!(!is_canonical(&td));
    }

    #[test]
    fn too_wide_gate_is_rejected() {
        let wide: Vec<(Position, Entry)> =
            (1..=5).map(|i| (pos(&[i]), Entry::Strategy(s_a()))).collect();
        let phi = BoolFormula::disj((1..=5).map(|i| pos(&[i])));
        assert_eq!(
            expand_disjunction(&wide, &phi, 4),
            Err(CeError::GateTooWide(5, 4))
        );
    }

    proptest! {
        #[test]
        fn canonical_form_preserves_semantics(s in testgen::strategy(), t in testgen::ground_term()) {
            let c = to_canonical(&s).unwrap();
            prop_assert!(is_canonical(&c));
            prop_assert!(is_well_founded_ce(&c));
            prop_assert_eq!(apply_ce(&c, Some(&t)), apply_ce(&s, Some(&t)));
            prop_assert_eq!(to_canonical(&c).unwrap(), c);
        }
    }
}
