//! Position-based context embeddings: lists of context insertions at fixed
//! positions, their application, and the unification and combination
//! operators on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Context, Position, Term};

/// A non-empty sequence of contexts, inserted outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextTuple(Vec<Context>);

impl ContextTuple {
    /// `None` on an empty sequence.
    pub fn new(contexts: Vec<Context>) -> Option<Self> {
        (!contexts.is_empty()).then_some(ContextTuple(contexts))
    }

    pub fn single(c: Context) -> Self {
        ContextTuple(vec![c])
    }

    /// The tuple `(□)`.
    pub fn hole() -> Self {
        ContextTuple(vec![Context::hole()])
    }

    pub fn contexts(&self) -> &[Context] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self · other`.
    pub fn concat(&self, other: &ContextTuple) -> ContextTuple {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        ContextTuple(v)
    }

    /// Drops holes, then removes repeated adjacent blocks until none remain.
    pub fn reduced(&self) -> Vec<Context> {
        let mut v: Vec<Context> = self.0.iter().filter(|c| !c.is_hole()).cloned().collect();
        'outer: loop {
            let n = v.len();
            for len in (1..=n / 2).rev() {
                for i in 0..=n - 2 * len {
                    if v[i..i + len] == v[i + len..i + 2 * len] {
                        v.drain(i + len..i + 2 * len);
                        continue 'outer;
                    }
                }
            }
            return v;
        }
    }

    /// The reduced tuple; `(□)` when nothing is left.
    pub fn normalized(&self) -> ContextTuple {
        ContextTuple::new(self.reduced()).unwrap_or_else(ContextTuple::hole)
    }

    pub fn is_identity(&self) -> bool {
        self.reduced().is_empty()
    }
}

impl fmt::Display for ContextTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// `eval(τ⃗)`: nests the reduced tuple into a single context.
pub fn eval_tuple(tau: &ContextTuple) -> Context {
    tau.reduced()
        .iter()
        .rev()
        .fold(Context::hole(), |inner, outer| outer.compose(&inner))
}

/// A position-based embedding. `List(vec![])` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pce {
    Fail,
    List(Vec<(Position, ContextTuple)>),
}

impl Pce {
    pub fn identity() -> Self {
        Pce::List(Vec::new())
    }

    pub fn single(p: Position, tau: ContextTuple) -> Self {
        Pce::List(vec![(p, tau)])
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Pce::Fail)
    }

    pub fn entries(&self) -> &[(Position, ContextTuple)] {
        match self {
            Pce::Fail => &[],
            Pce::List(v) => v,
        }
    }

    /// `p.E`: every position prefixed by `p`.
    pub fn prefixed(&self, p: &Position) -> Pce {
        match self {
            Pce::Fail => Pce::Fail,
            Pce::List(v) => Pce::List(v.iter().map(|(q, t)| (p.concat(q), t.clone())).collect()),
        }
    }

    /// Builds a list from entries at pairwise distinct positions, sorted into
    /// well-founded order.
    pub fn from_entries(mut entries: Vec<(Position, ContextTuple)>) -> Pce {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Pce::List(entries)
    }
}

impl fmt::Display for Pce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pce::Fail => f.write_str("fail"),
            Pce::List(v) => {
                f.write_str("[")?;
                for (k, (p, t)) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "@{p}.{t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Distinct positions, and every earlier position is a strict prefix of or
/// parallel to every later one.
pub fn is_well_founded_pce(e: &Pce) -> bool {
    let v = e.entries();
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i].0.before(&v[j].0)))
}

/// `⟦@p.τ⃗⟧(t)`.
pub fn apply_entry(p: &Position, tau: &ContextTuple, t: &Term) -> Option<Term> {
    let sub = t.subterm(p)?;
    let wrapped = eval_tuple(tau).plug(sub);
    t.replace_at(p, wrapped).ok()
}

/// `⟦E⟧(t)`, with `None` as the failure value. Entries are applied from the
/// last to the first, so every position addresses the input term.
pub fn apply_pce(e: &Pce, t: Option<&Term>) -> Option<Term> {
    let t = t?;
    match e {
        Pce::Fail => None,
        Pce::List(v) => v
            .iter()
            .rev()
            .try_fold(t.clone(), |acc, (p, tau)| apply_entry(p, tau, &acc)),
    }
}

/// `E ⊞ E'`. At a shared position the second operand's contexts come first.
pub fn unify_pce(e: &Pce, e2: &Pce) -> Pce {
    match (e, e2) {
        (Pce::List(a), Pce::List(b)) => {
            let mut merged: BTreeMap<Position, ContextTuple> = a.iter().cloned().collect();
            for (p, t2) in b {
                let t = match merged.remove(p) {
                    Some(t1) => t2.concat(&t1),
                    None => t2.clone(),
                };
                merged.insert(p.clone(), t);
            }
            Pce::List(merged.into_iter().collect())
        }
        _ => Pce::Fail,
    }
}

/// `E ⊎ E'`: like `⊞`, but a failing operand is ignored.
pub fn combine_pce(e: &Pce, e2: &Pce) -> Pce {
    match (e, e2) {
        (Pce::Fail, _) => e2.clone(),
        (_, Pce::Fail) => e.clone(),
        _ => unify_pce(e, e2),
    }
}

/// Reduces every tuple, drops identity insertions at the root and sorts the
/// entries.
pub fn normalize_pce(e: &Pce) -> Pce {
    match e {
        Pce::Fail => Pce::Fail,
        Pce::List(v) => Pce::from_entries(
            v.iter()
                .map(|(p, t)| (p.clone(), t.normalized()))
                .filter(|(p, t)| !(p.is_root() && t.is_identity()))
                .collect(),
        ),
    }
}

pub fn eq_pce(e: &Pce, e2: &Pce) -> bool {
    normalize_pce(e) == normalize_pce(e2)
}
