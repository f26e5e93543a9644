//! Text syntax for terms, positions, signatures, position-based embeddings,
//! formulas and strategies.
//!
//! ```text
//! term     ::= Var | name | name '(' term (',' term)* ')' | '[]'
//! pos      ::= 'eps' | nat ('.' nat)*
//! tuple    ::= '{' term (',' term)* '}'
//! pce      ::= 'fail' | '[' (entry (',' entry)*)? ']'      entry ::= '@' pos '.' tuple
//! choice   ::= prefix ('<+' choice)?
//! prefix   ::= 'mu' Var '.' choice | '@' pos '.' (tuple | prefix) | atom
//! atom     ::= 'fail' | Var | '(' term ';' choice ')' | '(' term '=>' tuple ')'
//!            | '(' choice ')' | '[' (item (',' item)*)? '|' phi ']'
//! item     ::= '@' pos '.' (tuple | choice)
//! phi      ::= conj ('\/' conj)*      conj ::= lit ('/\' lit)*
//! lit      ::= 'true' | 'false' | 'x' '(' pos ')' | '(' phi ')'
//! ```
//!
//! Identifiers starting with an upper-case letter are variables.

use std::fmt;

use crate::error::ParseError;
use crate::formula::BoolFormula;
use crate::pce::{ContextTuple, Pce};
use crate::strategy::{Entry, Strategy};
use crate::term::{Context, Position, Signature, Term};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || (!c.is_ascii() && !c.is_whitespace())
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(tok)
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.at(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    /// Accepts `word` only when it is not followed by more identifier chars.
    fn eat_keyword(&mut self, word: &str) -> bool {
        if !self.at(word) {
            return false;
        }
        let after = self.rest()[word.len()..].chars().next();
        if after.is_some_and(is_ident_char) {
            return false;
        }
        self.pos += word.len();
        true
    }

    fn end(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let r = self.rest();
        let first = r.chars().next();
        if !first.is_some_and(|c| is_ident_char(c) && !c.is_ascii_digit() && c != '\'') {
            return self.err("expected an identifier");
        }
        let len = r.find(|c: char| !is_ident_char(c)).unwrap_or(r.len());
        self.pos += len;
        Ok(r[..len].to_string())
    }

    fn nat(&mut self) -> PResult<u32> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return self.err("expected a number");
        }
        let n: u32 = r[..len].parse().or_else(|_| self.err("number too large"))?;
        if n == 0 {
            return self.err("positions are 1-based");
        }
        self.pos += len;
        Ok(n)
    }

    fn position(&mut self) -> PResult<Position> {
        if self.eat_keyword("eps") {
            return Ok(Position::root());
        }
        let mut steps = vec![self.nat()?];
        // A dot followed by a digit continues the position; any other dot
        // belongs to the caller.
        while self.rest().starts_with('.')
            && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit())
        {
            self.pos += 1;
            steps.push(self.nat()?);
        }
        Ok(Position::new(steps).expect("steps are non-zero"))
    }

    fn term(&mut self) -> PResult<Term> {
        if self.eat("[]") {
            return Ok(Term::Hole);
        }
        let start = self.pos;
        let name = self.ident()?;
        if name.chars().next().is_some_and(char::is_uppercase) {
            if self.at("(") {
                self.pos = start;
                return self.err("a variable cannot take arguments");
            }
            return Ok(Term::Var(name));
        }
        if !self.eat("(") {
            return Ok(Term::constant(name));
        }
        let mut args = vec![self.term()?];
        while self.eat(",") {
            args.push(self.term()?);
        }
        self.expect(")")?;
        Ok(Term::App(name, args))
    }

    fn pattern(&mut self) -> PResult<Term> {
        let start = self.pos;
        let t = self.term()?;
        if t.hole_count() > 0 {
            self.pos = start;
            return self.err("a pattern cannot contain a hole");
        }
        Ok(t)
    }

    fn context(&mut self) -> PResult<Context> {
        self.skip_ws();
        let start = self.pos;
        let t = self.term()?;
        Context::new(t).or_else(|_| {
            self.pos = start;
            self.err("a context needs exactly one hole")
        })
    }

    fn tuple(&mut self) -> PResult<ContextTuple> {
        self.expect("{")?;
        let mut cs = vec![self.context()?];
        while self.eat(",") {
            cs.push(self.context()?);
        }
        self.expect("}")?;
        Ok(ContextTuple::new(cs).expect("non-empty"))
    }

    fn pce(&mut self) -> PResult<Pce> {
        if self.eat_keyword("fail") {
            return Ok(Pce::Fail);
        }
        self.expect("[")?;
        let mut entries = Vec::new();
        if !self.eat("]") {
            loop {
                self.expect("@")?;
                let p = self.position()?;
                self.expect(".")?;
                entries.push((p, self.tuple()?));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]")?;
        }
        Ok(Pce::List(entries))
    }

    fn formula(&mut self) -> PResult<BoolFormula> {
        let mut phi = self.conj()?;
        while self.eat("\\/") {
            phi = BoolFormula::Or(Box::new(phi), Box::new(self.conj()?));
        }
        Ok(phi)
    }

    fn conj(&mut self) -> PResult<BoolFormula> {
        let mut phi = self.literal()?;
        while self.eat("/\\") {
            phi = BoolFormula::And(Box::new(phi), Box::new(self.literal()?));
        }
        Ok(phi)
    }

    fn literal(&mut self) -> PResult<BoolFormula> {
        if self.eat_keyword("true") {
            Ok(BoolFormula::True)
        } else if self.eat_keyword("false") {
            Ok(BoolFormula::False)
        } else if self.eat("(") {
            let phi = self.formula()?;
            self.expect(")")?;
            Ok(phi)
        } else if self.eat_keyword("x") {
            self.expect("(")?;
            let p = self.position()?;
            self.expect(")")?;
            Ok(BoolFormula::Var(p))
        } else {
            self.err("expected a formula")
        }
    }

    fn choice(&mut self) -> PResult<Strategy> {
        let left = self.prefix()?;
        if self.eat("<+") {
            Ok(Strategy::choice(left, self.choice()?))
        } else {
            Ok(left)
        }
    }

    fn prefix(&mut self) -> PResult<Strategy> {
        if self.eat_keyword("mu") {
            let x = self.fixvar()?;
            self.expect(".")?;
            return Ok(Strategy::mu(x, self.choice()?));
        }
        if self.eat("@") {
            let p = self.position()?;
            self.expect(".")?;
            if self.at("{") {
                return Ok(Strategy::AtInsert(p, self.tuple()?));
            }
            return Ok(Strategy::at(p, self.prefix()?));
        }
        self.atom()
    }

    fn fixvar(&mut self) -> PResult<String> {
        let start = self.pos;
        let x = self.ident()?;
        if !x.chars().next().is_some_and(char::is_uppercase) {
            self.pos = start;
            return self.err("fixed-point variables start with an upper-case letter");
        }
        Ok(x)
    }

    fn atom(&mut self) -> PResult<Strategy> {
        if self.eat_keyword("fail") {
            return Ok(Strategy::Fail);
        }
        match self.peek() {
            Some('(') => self.paren(),
            Some('[') => self.gated(),
            Some(c) if c.is_uppercase() => Ok(Strategy::Var(self.fixvar()?)),
            _ => self.err("expected a strategy"),
        }
    }

    fn paren(&mut self) -> PResult<Strategy> {
        self.expect("(")?;
        let start = self.pos;
        if let Ok(u) = self.pattern() {
            if self.eat(";") {
                let s = self.choice()?;
                self.expect(")")?;
                return Ok(Strategy::guard(u, s));
            }
            if self.eat("=>") {
                let t = self.tuple()?;
                self.expect(")")?;
                return Ok(Strategy::GuardInsert(u, t));
            }
        }
        self.pos = start;
        let s = self.choice()?;
        self.expect(")")?;
        Ok(s)
    }

    fn gated(&mut self) -> PResult<Strategy> {
        self.expect("[")?;
        let mut entries = Vec::new();
        if !self.at("|") {
            loop {
                self.expect("@")?;
                let p = self.position()?;
                self.expect(".")?;
                let e = if self.at("{") {
                    Entry::Insert(self.tuple()?)
                } else {
                    Entry::Strategy(self.choice()?)
                };
                entries.push((p, e));
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("|")?;
        let phi = self.formula()?;
        self.expect("]")?;
        Ok(Strategy::Gated(entries, phi))
    }

    fn signature(&mut self) -> PResult<Signature> {
        let mut symbols = Vec::new();
        loop {
            self.skip_ws();
            if self.pos >= self.src.len() {
                break;
            }
            let name = self.ident()?;
            self.expect("/")?;
            self.skip_ws();
            let r = self.rest();
            let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            if len == 0 {
                return self.err("expected an arity");
            }
            let n: usize = r[..len].parse().or_else(|_| self.err("arity too large"))?;
            self.pos += len;
            symbols.push((name, n));
            self.eat(",");
        }
        Signature::new(symbols).or_else(|e| self.err(e.to_string()))
    }
}

fn whole<'a, T>(src: &'a str, f: impl FnOnce(&mut Parser<'a>) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src);
    let v = f(&mut p)?;
    p.end()?;
    Ok(v)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    whole(src, |p| {
        let t = p.term()?;
        if t.hole_count() > 0 {
            return p.err("a term cannot contain a hole");
        }
        Ok(t)
    })
}

pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    whole(src, Parser::context)
}

pub fn parse_position(src: &str) -> Result<Position, ParseError> {
    whole(src, Parser::position)
}

pub fn parse_pce(src: &str) -> Result<Pce, ParseError> {
    whole(src, Parser::pce)
}

pub fn parse_formula(src: &str) -> Result<BoolFormula, ParseError> {
    whole(src, Parser::formula)
}

pub fn parse_strategy(src: &str) -> Result<Strategy, ParseError> {
    whole(src, Parser::choice)
}

/// `name/arity` items separated by whitespace or commas; `#` starts a comment.
pub fn parse_signature(src: &str) -> Result<Signature, ParseError> {
    whole(src, Parser::signature)
}

impl ParseError {
    /// 1-based line and column of the error in `src`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let before = &src[..self.offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    ChoiceRight,
    Tight,
}

fn write_strategy(s: &Strategy, ctx: Ctx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = match s {
        Strategy::Choice(..) => ctx == Ctx::Tight,
        Strategy::Mu(..) => ctx == Ctx::Tight,
        _ => false,
    };
    if needs_parens {
        f.write_str("(")?;
    }
    match s {
        Strategy::Fail => f.write_str("fail")?,
        Strategy::Var(x) => f.write_str(x)?,
        Strategy::Guard(u, b) => {
            write!(f, "({u} ; ")?;
            write_strategy(b, Ctx::Top, f)?;
            f.write_str(")")?;
        }
        Strategy::GuardInsert(u, t) => write!(f, "({u} => {t})")?,
        Strategy::Choice(a, b) => {
            write_strategy(a, Ctx::Tight, f)?;
            f.write_str(" <+ ")?;
            write_strategy(b, Ctx::ChoiceRight, f)?;
        }
        Strategy::Mu(x, b) => {
            write!(f, "mu {x} . ")?;
            write_strategy(b, Ctx::Top, f)?;
        }
        Strategy::At(p, b) => {
            write!(f, "@{p}.")?;
            write_strategy(b, Ctx::Tight, f)?;
        }
        Strategy::AtInsert(p, t) => write!(f, "@{p}.{t}")?,
        Strategy::Gated(entries, phi) => {
            f.write_str("[")?;
            for (k, (p, e)) in entries.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "@{p}.")?;
                match e {
                    Entry::Insert(t) => write!(f, "{t}")?,
                    Entry::Strategy(b) => write_strategy(b, Ctx::Tight, f)?,
                }
            }
            if entries.is_empty() {
                write!(f, "| {phi}]")?;
            } else {
                write!(f, " | {phi}]")?;
            }
        }
    }
    if needs_parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_strategy(self, Ctx::Top, f)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, n)) in self.symbols().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}/{n}")?;
        }
        Ok(())
    }
}
