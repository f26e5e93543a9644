//! Deterministic enumeration and seeded generation of terms, patterns,
//! position-based embeddings and strategies.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::HarnessError;
use crate::formula::BoolFormula;
use crate::pce::{is_well_founded_pce, ContextTuple, Pce};
use crate::strategy::{is_well_founded_ce, one_left, top_down, Entry, Strategy};
use crate::term::{Context, Position, Signature, Term};

/// Upper bound on enumerated terms unless a caller asks for another.
pub const DEFAULT_TERM_CAP: usize = 100_000;

/// All ground terms over `sig` of depth at most `max_depth`, by increasing
/// depth.
pub fn enumerate_terms(sig: &Signature, max_depth: usize) -> Result<Vec<Term>, HarnessError> {
    enumerate_terms_capped(sig, max_depth, DEFAULT_TERM_CAP)
}

pub fn enumerate_terms_capped(
    sig: &Signature,
    max_depth: usize,
    cap: usize,
) -> Result<Vec<Term>, HarnessError> {
    enumerate_with_leaves(sig, &[], max_depth, cap)
}

/// Linear and non-linear patterns over `sig` using the given variables.
pub fn enumerate_patterns(
    sig: &Signature,
    vars: &[&str],
    max_depth: usize,
    cap: usize,
) -> Result<Vec<Term>, HarnessError> {
    enumerate_with_leaves(sig, vars, max_depth, cap)
}

fn enumerate_with_leaves(
    sig: &Signature,
    vars: &[&str],
    max_depth: usize,
    cap: usize,
) -> Result<Vec<Term>, HarnessError> {
    let too_many = || HarnessError::TooManyTerms(cap, max_depth);
    let mut all: Vec<Term> = sig
        .symbols()
        .filter(|(_, n)| *n == 0)
        .map(|(c, _)| Term::constant(c))
        .chain(vars.iter().map(|x| Term::var(*x)))
        .collect();
    if all.len() > cap {
        return Err(too_many());
    }
    let mut prev_len = 0;
    for _ in 1..=max_depth {
        let below = all.clone();
        let level_start = prev_len;
        prev_len = below.len();
        for (f, n) in sig.symbols().filter(|(_, n)| *n > 0) {
            let count = below.len().checked_pow(n as u32).ok_or_else(too_many)?;
            if count.saturating_sub((level_start).saturating_pow(n as u32)) + all.len() > cap {
                return Err(too_many());
            }
            for idx in 0..count {
                let mut rest = idx;
                let mut args = Vec::with_capacity(n);
                let mut fresh = false;
                for _ in 0..n {
                    let k = rest % below.len();
                    rest /= below.len();
                    fresh |= k >= level_start;
                    args.push(below[k].clone());
                }
                if fresh {
                    args.reverse();
                    all.push(Term::app(f, args));
                }
            }
        }
        if all.len() == prev_len {
            break;
        }
    }
    Ok(all)
}

/// Sizes of the pieces the generators produce.
#[derive(Clone, Copy, Debug)]
pub struct GenBounds {
    /// Nesting depth of randomly built strategies.
    pub size: usize,
    /// Strategies with more nodes than this are discarded.
    pub max_nodes: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds { size: 3, max_nodes: 40 }
    }
}

/// Seeded source of random terms, contexts and strategies over a signature.
pub struct Generator<'a> {
    sig: &'a Signature,
    rng: ChaCha8Rng,
    constants: Vec<Term>,
    functions: Vec<(String, usize)>,
    contexts: Vec<Context>,
}

impl<'a> Generator<'a> {
    pub fn new(sig: &'a Signature, seed: u64) -> Self {
        let constants: Vec<Term> = sig
            .symbols()
            .filter(|(_, n)| *n == 0)
            .map(|(c, _)| Term::constant(c))
            .collect();
        let functions: Vec<(String, usize)> = sig
            .symbols()
            .filter(|(_, n)| *n > 0)
            .map(|(f, n)| (f.to_string(), n))
            .collect();
        let mut contexts = Vec::new();
        for (f, n) in &functions {
            for i in 0..*n {
                for (k, c) in constants.iter().take(2).enumerate() {
                    if k > 0 && *n == 1 {
                        break;
                    }
                    let args = (0..*n)
                        .map(|j| if j == i { Term::Hole } else { c.clone() })
                        .collect();
                    contexts.push(Context::new(Term::app(f.clone(), args)).expect("one hole"));
                }
            }
        }
        Generator {
            sig,
            rng: ChaCha8Rng::seed_from_u64(seed),
            constants,
            functions,
            contexts,
        }
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    /// Single-hole contexts built from each function symbol.
    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    fn max_arity(&self) -> u32 {
        self.sig.max_arity().max(1) as u32
    }

    /// A ground term of depth at most `depth`, biased towards full depth.
    pub fn term(&mut self, depth: usize) -> Term {
        if depth == 0 || self.functions.is_empty() || self.rng.gen_ratio(1, 5) {
            return self.constants.choose(&mut self.rng).expect("constants").clone();
        }
        let (f, n) = self.functions.choose(&mut self.rng).expect("functions").clone();
        Term::app(f, (0..n).map(|_| self.term(depth - 1)).collect())
    }

    /// A pattern of depth at most 2 over the variables `X` and `Y`.
    pub fn pattern(&mut self) -> Term {
        self.pattern_at(2)
    }

    fn pattern_at(&mut self, depth: usize) -> Term {
        if depth == 0 || self.functions.is_empty() || self.rng.gen_ratio(1, 2) {
            return match self.rng.gen_range(0..4) {
                0 => Term::var("X"),
                1 => Term::var("Y"),
                _ => self.constants.choose(&mut self.rng).expect("constants").clone(),
            };
        }
        let (f, n) = self.functions.choose(&mut self.rng).expect("functions").clone();
        Term::app(f, (0..n).map(|_| self.pattern_at(depth - 1)).collect())
    }

    pub fn context(&mut self) -> Context {
        if self.contexts.is_empty() || self.rng.gen_ratio(1, 8) {
            return Context::hole();
        }
        self.contexts.choose(&mut self.rng).expect("contexts").clone()
    }

    pub fn tuple(&mut self) -> ContextTuple {
        let n = self.rng.gen_range(1..=3);
        ContextTuple::new((0..n).map(|_| self.context()).collect()).expect("non-empty")
    }

    /// A position of length at most 2.
    pub fn position(&mut self) -> Position {
        let len = self.rng.gen_range(0..=2);
        let a = self.max_arity();
        Position::new((0..len).map(|_| self.rng.gen_range(1..=a)).collect()).expect("non-zero")
    }

    /// A well-founded embedding with up to three entries, or `Fail`.
    pub fn pce(&mut self) -> Pce {
        if self.rng.gen_ratio(1, 12) {
            return Pce::Fail;
        }
        loop {
            let n = self.rng.gen_range(0..=3);
            let mut positions = BTreeSet::new();
            for _ in 0..n {
                positions.insert(self.position());
            }
            let e = Pce::from_entries(positions.into_iter().map(|p| (p, self.tuple())).collect());
            if is_well_founded_pce(&e) {
                return e;
            }
        }
    }

    fn formula_over(&mut self, vars: &[Position]) -> BoolFormula {
        match self.rng.gen_range(0..4) {
            0 => BoolFormula::True,
            1 => BoolFormula::conj(vars.iter().cloned()),
            2 => BoolFormula::disj(vars.iter().cloned()),
            _ => {
                let mut phi: Option<BoolFormula> = None;
                for p in vars.iter().rev() {
                    if self.rng.gen_ratio(1, 4) {
                        continue;
                    }
                    let v = BoolFormula::Var(p.clone());
                    phi = Some(match phi {
                        None => v,
                        Some(rest) if self.rng.gen() => BoolFormula::and(v, rest),
                        Some(rest) => BoolFormula::or(v, rest),
                    });
                }
                phi.unwrap_or(BoolFormula::True)
            }
        }
    }

    fn leaf(&mut self) -> Strategy {
        match self.rng.gen_range(0..7) {
            0 => Strategy::Fail,
            1..=3 => Strategy::GuardInsert(self.pattern(), self.tuple()),
            _ => Strategy::AtInsert(self.position(), self.tuple()),
        }
    }

    fn gated(&mut self, size: usize) -> Strategy {
        let (strats, inserts) = list_shapes().choose(&mut self.rng).expect("shapes").clone();
        let vars: Vec<Position> = strats
            .iter()
            .chain(&inserts)
            .filter(|p| !p.is_root())
            .cloned()
            .collect();
        let mut entries: Vec<(Position, Entry)> =
            inserts.into_iter().map(|p| (p, Entry::Insert(self.tuple()))).collect();
        for p in strats {
            entries.push((p, Entry::Strategy(self.strategy(size))));
        }
        let phi = self.formula_over(&vars);
        Strategy::Gated(entries, phi)
    }

    fn recursive(&mut self, size: usize) -> Strategy {
        let body = self.strategy(size);
        let x = || Strategy::var("R");
        let p1 = Position::single(1);
        let p2 = Position::single(2);
        let rec = match self.rng.gen_range(0..4) {
            0 => Strategy::at(p1, x()),
            1 => {
                let (f, n) = self.functions.choose(&mut self.rng).expect("functions").clone();
                let pattern = Term::app(f, (1..=n).map(|i| Term::var(format!("Y{i}"))).collect());
                let ps: Vec<Position> = (1..=n as u32).map(Position::single).collect();
                Strategy::guard(
                    pattern,
                    Strategy::Gated(
                        ps.iter().map(|p| (p.clone(), Entry::Strategy(x()))).collect(),
                        BoolFormula::disj(ps.iter().cloned()),
                    ),
                )
            }
            2 => Strategy::guard(self.pattern(), Strategy::at(p1, x())),
            _ => Strategy::choice(
                Strategy::Gated(vec![(p1.clone(), Entry::Strategy(x()))], BoolFormula::Var(p1)),
                Strategy::Gated(vec![(p2.clone(), Entry::Strategy(x()))], BoolFormula::Var(p2)),
            ),
        };
        Strategy::mu("R", Strategy::choice(body, rec))
    }

    /// A random strategy of nesting depth at most `size`; may be ill-formed
    /// only in ways `is_well_founded_ce` rejects.
    pub fn strategy(&mut self, size: usize) -> Strategy {
        if size == 0 || self.rng.gen_ratio(1, 4) {
            return self.leaf();
        }
        let s = size - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => Strategy::guard(self.pattern(), self.strategy(s)),
            2 | 3 => Strategy::choice(self.strategy(s), self.strategy(s)),
            4 => Strategy::at(self.position(), self.strategy(s)),
            5 | 6 => self.gated(s),
            _ if self.functions.is_empty() => self.leaf(),
            _ => self.recursive(s),
        }
    }

    /// Fixed shapes: the neutral insertion, the leaf-seeking fixpoint for
    /// every unary symbol, traversals, and one instance of each construct.
    pub fn templates(&mut self) -> Vec<Strategy> {
        let mut out = vec![Strategy::AtInsert(Position::root(), ContextTuple::hole())];
        let tau = |g: &mut Self| ContextTuple::single(g.contexts.first().cloned().unwrap_or_else(Context::hole));
        for (f, n) in self.functions.clone() {
            if n != 1 {
                continue;
            }
            for c in self.constants.clone().into_iter().take(2) {
                let t = tau(self);
                out.push(Strategy::mu(
                    "X",
                    Strategy::choice(
                        Strategy::GuardInsert(Term::app(f.clone(), vec![c]), t),
                        Strategy::at(Position::single(1), Strategy::var("X")),
                    ),
                ));
            }
        }
        for c in self.constants.clone().into_iter().take(2) {
            let base = Strategy::GuardInsert(c, tau(self));
            out.push(one_left(&base, self.sig));
            out.push(top_down(&base, self.sig));
        }
        for (f, n) in self.functions.clone() {
            let pattern = Term::app(f, (1..=n).map(|i| Term::var(format!("X{i}"))).collect());
            out.push(Strategy::GuardInsert(pattern, tau(self)));
        }
        if self.sig.max_arity() >= 2 {
            let p1 = Position::single(1);
            let p2 = Position::single(2);
            let e1 = Entry::Insert(tau(self));
            let e2 = Entry::Insert(tau(self));
            out.push(Strategy::Gated(
                vec![(p1.clone(), e1), (p2.clone(), e2)],
                BoolFormula::or(BoolFormula::Var(p1), BoolFormula::Var(p2)),
            ));
        }
        out
    }
}

fn list_shapes() -> Vec<(Vec<Position>, Vec<Position>)> {
    let p = |v: &[u32]| Position::new(v.to_vec()).expect("non-zero");
    let e = Position::root;
    vec![
        (vec![p(&[1])], vec![]),
        (vec![p(&[2])], vec![e()]),
        (vec![p(&[1]), p(&[2])], vec![]),
        (vec![p(&[1]), p(&[2])], vec![e()]),
        (vec![p(&[1, 1]), p(&[1, 2])], vec![p(&[1])]),
        (vec![p(&[1, 1]), p(&[2])], vec![e(), p(&[1])]),
        (vec![p(&[2, 1])], vec![e(), p(&[2])]),
        (vec![], vec![e()]),
        (vec![], vec![p(&[1]), p(&[2])]),
        (vec![], vec![p(&[2, 1])]),
        (vec![e()], vec![]),
    ]
}

/// `count` distinct closed, well-founded strategies: the templates first,
/// then random ones of nesting depth at most `size`.
pub fn generate_strategies(sig: &Signature, size: usize, seed: u64, count: usize) -> Vec<Strategy> {
    generate_strategies_with(sig, GenBounds { size, ..GenBounds::default() }, seed, count)
}

pub fn generate_strategies_with(
    sig: &Signature,
    bounds: GenBounds,
    seed: u64,
    count: usize,
) -> Vec<Strategy> {
    let mut g = Generator::new(sig, seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut push = |s: Strategy, out: &mut Vec<Strategy>| {
        if out.len() < count && s.is_closed() && is_well_founded_ce(&s) && seen.insert(s.clone()) {
            out.push(s);
        }
    };
    for s in g.templates() {
        push(s, &mut out);
    }
    let mut attempts = 0;
    while out.len() < count && attempts < count * 500 {
        attempts += 1;
        let s = g.strategy(bounds.size);
        if s.size() <= bounds.max_nodes {
            push(s, &mut out);
        }
    }
    out
}

/// `count` distinct well-founded embeddings, smallest first: `fail`, the
/// identity, single insertions, then random lists.
pub fn generate_pces(sig: &Signature, seed: u64, count: usize) -> Vec<Pce> {
    let mut g = Generator::new(sig, seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |e: Pce, out: &mut Vec<Pce>| {
        if out.len() < count && seen.insert(e.clone()) {
            out.push(e);
        }
    };
    push(Pce::Fail, &mut out);
    push(Pce::identity(), &mut out);
    let a = g.max_arity();
    let mut positions = vec![Position::root()];
    positions.extend((1..=a).map(Position::single));
    for c in g.contexts().to_vec() {
        for p in &positions {
            push(Pce::single(p.clone(), ContextTuple::single(c.clone())), &mut out);
        }
    }
    let mut attempts = 0;
    while out.len() < count && attempts < count * 100 {
        attempts += 1;
        let e = g.pce();
        push(e, &mut out);
    }
    out
}

/// Seeded ground terms: every term of depth at most 1 (when there are few),
/// full trees of each depth, then random terms up to `max_depth`.
pub fn sample_terms(sig: &Signature, max_depth: usize, seed: u64, count: usize) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |t: Term, out: &mut Vec<Term>| {
        if out.len() < count && seen.insert(t.clone()) {
            out.push(t);
        }
    };
    let shallow = enumerate_terms_capped(sig, max_depth.min(1), count / 2)
        .or_else(|_| enumerate_terms_capped(sig, 0, count))
        .unwrap_or_default();
    for t in shallow {
        push(t, &mut out);
    }
    if let (Some((f, n)), Some((c, _))) = (
        sig.symbols().filter(|(_, n)| *n > 0).max_by_key(|(_, n)| *n),
        sig.symbols().find(|(_, n)| *n == 0),
    ) {
        let mut full = Term::constant(c);
        for _ in 0..max_depth {
            full = Term::app(f, vec![full; n]);
            push(full.clone(), &mut out);
        }
    }
    let mut g = Generator::new(sig, seed);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 100 {
        attempts += 1;
        let t = g.term(max_depth);
        push(t, &mut out);
    }
    out
}
