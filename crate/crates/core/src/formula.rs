//! Negation-free Boolean formulas over position variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::term::Position;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolFormula {
    True,
    False,
    /// `x_p`
    Var(Position),
    And(Box<BoolFormula>, Box<BoolFormula>),
    Or(Box<BoolFormula>, Box<BoolFormula>),
}

pub type Valuation = BTreeMap<Position, bool>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("x({0}) is not bound by the valuation")]
pub struct UnboundVariable(pub Position);

impl BoolFormula {
    pub fn var(p: Position) -> Self {
        BoolFormula::Var(p)
    }

    /// `a ∧ b`, simplifying constants.
    pub fn and(a: BoolFormula, b: BoolFormula) -> Self {
        match (a, b) {
            (BoolFormula::True, x) | (x, BoolFormula::True) => x,
            (BoolFormula::False, _) | (_, BoolFormula::False) => BoolFormula::False,
            (a, b) => BoolFormula::And(Box::new(a), Box::new(b)),
        }
    }

    /// `a ∨ b`, simplifying constants.
    pub fn or(a: BoolFormula, b: BoolFormula) -> Self {
        match (a, b) {
            (BoolFormula::False, x) | (x, BoolFormula::False) => x,
            (BoolFormula::True, _) | (_, BoolFormula::True) => BoolFormula::True,
            (a, b) => BoolFormula::Or(Box::new(a), Box::new(b)),
        }
    }

    /// Conjunction of the given variables; `True` when empty.
    pub fn conj<I: IntoIterator<Item = Position>>(vars: I) -> Self {
        vars.into_iter()
            .map(BoolFormula::Var)
            .reduce(BoolFormula::and)
            .unwrap_or(BoolFormula::True)
    }

    /// Disjunction of the given variables; `False` when empty.
    pub fn disj<I: IntoIterator<Item = Position>>(vars: I) -> Self {
        vars.into_iter()
            .map(BoolFormula::Var)
            .reduce(BoolFormula::or)
            .unwrap_or(BoolFormula::False)
    }

    /// `var(φ)`.
    pub fn vars(&self) -> BTreeSet<Position> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Position>) {
        match self {
            BoolFormula::Var(p) => {
                out.insert(p.clone());
            }
            BoolFormula::And(a, b) | BoolFormula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Truth value when exactly the variables in `set` are true.
    pub fn holds_for(&self, set: &BTreeSet<Position>) -> bool {
        match self {
            BoolFormula::True => true,
            BoolFormula::False => false,
            BoolFormula::Var(p) => set.contains(p),
            BoolFormula::And(a, b) => a.holds_for(set) && b.holds_for(set),
            BoolFormula::Or(a, b) => a.holds_for(set) || b.holds_for(set),
        }
    }

    /// A conjunction of variables, with `True` as the empty conjunction.
    pub fn as_conjunction(&self) -> Option<BTreeSet<Position>> {
        match self {
            BoolFormula::True => Some(BTreeSet::new()),
            BoolFormula::Var(p) => Some(BTreeSet::from([p.clone()])),
            BoolFormula::And(a, b) => {
                let mut s = a.as_conjunction()?;
                s.extend(b.as_conjunction()?);
                Some(s)
            }
            _ => None,
        }
    }

    /// Disjunctive normal form: a set of monomials, each a set of variables.
    /// Subsumed monomials are removed. `False` is the empty set, `True` the
    /// set holding only the empty monomial.
    pub fn to_dnf(&self) -> BTreeSet<BTreeSet<Position>> {
        let raw: BTreeSet<BTreeSet<Position>> = match self {
            BoolFormula::True => BTreeSet::from([BTreeSet::new()]),
            BoolFormula::False => BTreeSet::new(),
            BoolFormula::Var(p) => BTreeSet::from([BTreeSet::from([p.clone()])]),
            BoolFormula::Or(a, b) => a.to_dnf().union(&b.to_dnf()).cloned().collect(),
            BoolFormula::And(a, b) => {
                let (da, db) = (a.to_dnf(), b.to_dnf());
                da.iter()
                    .flat_map(|m| db.iter().map(move |n| m.union(n).cloned().collect()))
                    .collect()
            }
        };
        raw.iter()
            .filter(|m| !raw.iter().any(|n| n != *m && n.is_subset(m)))
            .cloned()
            .collect()
    }
}

/// `ν ⊨ φ`.
pub fn eval_formula(nu: &Valuation, phi: &BoolFormula) -> Result<bool, UnboundVariable> {
    Ok(match phi {
        BoolFormula::True => true,
        BoolFormula::False => false,
        BoolFormula::Var(p) => *nu.get(p).ok_or_else(|| UnboundVariable(p.clone()))?,
        BoolFormula::And(a, b) => eval_formula(nu, a)? && eval_formula(nu, b)?,
        BoolFormula::Or(a, b) => eval_formula(nu, a)? || eval_formula(nu, b)?,
    })
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(phi: &BoolFormula, f: &mut fmt::Formatter<'_>, in_and: bool) -> fmt::Result {
            match phi {
                BoolFormula::True => f.write_str("true"),
                BoolFormula::False => f.write_str("false"),
                BoolFormula::Var(p) => write!(f, "x({p})"),
                BoolFormula::And(a, b) => {
                    go(a, f, true)?;
                    f.write_str(" /\\ ")?;
                    match **b {
                        BoolFormula::And(..) => {
                            f.write_str("(")?;
                            go(b, f, true)?;
                            f.write_str(")")
                        }
                        _ => go(b, f, true),
                    }
                }
                BoolFormula::Or(a, b) => {
                    if in_and {
                        f.write_str("(")?;
                    }
                    go(a, f, false)?;
                    f.write_str(" \\/ ")?;
                    match **b {
                        BoolFormula::Or(..) => {
                            f.write_str("(")?;
                            go(b, f, false)?;
                            f.write_str(")")?;
                        }
                        _ => go(b, f, false)?,
                    }
                    if in_and {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}
