//! Recursive-descent parser for terms, programs, queries, and expressions.
//!
//! Shared term grammar: variables start uppercase or `_`, constants start
//! lowercase or are integers, `f(t1,...,tn)` builds compounds, `[a,b|T]` is
//! list sugar over `'.'/2` and `[]`, and `X-Y` is an infix (left-associative)
//! pair.
//!
//! Program files are Prolog-like clause lists plus directives: `#rel name/2.`
//! declares a relation variable, `#universe a, b, f/1.` and `#depth 2.`
//! declare the ground-term universe, and `%` starts a line comment. A
//! `#universe` without an explicit `#depth` gets the default depth bound 2.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::engine::{Atom, Clause, Program, Query};
use crate::error::{Error, ParseError, Result};
use crate::term::Term;
use crate::universe::Universe;

use super::ast::{Expr, Inclusion, ProgRef};
use super::lexer::{tokenize, Spanned, Token};

pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_query(src: &str) -> Result<Query> {
    let mut p = Parser::new(src)?;
    let q = p.query()?;
    p.expect_eof()?;
    Ok(q)
}

pub fn parse_program(src: &str) -> Result<Program> {
    let mut p = Parser::new(src)?;
    let prog = p.program_items(None)?;
    p.expect_eof()?;
    Ok(prog)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a single `name >= rhs` inclusion (the `check` subcommand input).
pub fn parse_inclusion(src: &str) -> Result<Inclusion> {
    let mut p = Parser::new(src)?;
    let inc = p.inclusion()?;
    p.expect_eof()?;
    Ok(inc)
}

/// Recursion cap for nested parentheses/brackets, so pathological input
/// reports an error instead of exhausting the stack.
const MAX_NESTING: usize = 200;

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    /// Counter for anonymous `_` variables; the `_#<n>` names it generates
    /// cannot be written as identifiers, so they never collide.
    anon: usize,
    nesting: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(src).map_err(Error::Parse)?,
            pos: 0,
            anon: 0,
            nesting: 0,
        })
    }

    fn enter(&mut self) -> Result<()> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(self.error(&["a less deeply nested expression"]));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.nesting -= 1;
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|s| &s.token)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|s| s.token.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let (line, column, found) = match self.tokens.get(self.pos) {
            Some(s) => (s.line, s.column, s.token.describe()),
            None => {
                let (l, c) = self
                    .tokens
                    .last()
                    .map(|s| (s.line, s.column + 1))
                    .unwrap_or((1, 1));
                (l, c, "end of input".to_string())
            }
        };
        Error::Parse(ParseError {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        })
    }

    fn eat(&mut self, tok: &Token, expected: &str) -> Result<()> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[expected]))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    // ---- terms ------------------------------------------------------

    fn term(&mut self) -> Result<Term> {
        let mut t = self.primary_term()?;
        while self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            let rhs = self.primary_term()?;
            t = Term::pair(t, rhs);
        }
        Ok(t)
    }

    fn primary_term(&mut self) -> Result<Term> {
        self.enter()?;
        let out = self.primary_term_inner();
        self.leave();
        out
    }

    fn primary_term_inner(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Token::UIdent(name)) => {
                self.pos += 1;
                Ok(Term::var(name))
            }
            Some(Token::Underscore) => {
                self.pos += 1;
                self.anon += 1;
                Ok(Term::var(format!("_#{}", self.anon)))
            }
            Some(Token::Int(text)) => {
                self.pos += 1;
                Ok(Term::constant(text))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Token::LParen) {
                    self.pos += 1;
                    let args = self.term_list(Token::RParen)?;
                    if args.is_empty() {
                        // compounds have arity >= 1; a 0-ary name is a constant
                        return Err(self.error(&["a term"]));
                    }
                    self.eat(&Token::RParen, "')'")?;
                    Ok(Term::comp(name, args))
                } else {
                    Ok(Term::constant(name))
                }
            }
            Some(Token::LBracket) => {
                self.pos += 1;
                if self.peek() == Some(&Token::RBracket) {
                    self.pos += 1;
                    return Ok(Term::constant(crate::term::NIL));
                }
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                let tail = if self.peek() == Some(&Token::Bar) {
                    self.pos += 1;
                    self.term()?
                } else {
                    Term::constant(crate::term::NIL)
                };
                self.eat(&Token::RBracket, "']'")?;
                Ok(Term::list_with_tail(items, tail))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.eat(&Token::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.error(&["a term"])),
        }
    }

    fn term_list(&mut self, terminator: Token) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        if self.peek() == Some(&terminator) {
            return Ok(out);
        }
        out.push(self.term()?);
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            out.push(self.term()?);
        }
        Ok(out)
    }

    // ---- atoms, clauses, programs ------------------------------------

    fn pred_name(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) | Some(Token::UIdent(name)) => {
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error(&["a predicate name"])),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let pred = self.pred_name()?;
        let args = if self.peek() == Some(&Token::LParen) {
            self.pos += 1;
            let args = self.term_list(Token::RParen)?;
            self.eat(&Token::RParen, "')'")?;
            args
        } else {
            Vec::new()
        };
        Ok(Atom::new(pred, args))
    }

    fn query(&mut self) -> Result<Query> {
        self.eat(&Token::QueryDash, "'?-'")?;
        let mut goals = vec![self.atom()?];
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            goals.push(self.atom()?);
        }
        Query::new(goals)
    }

    fn clause(&mut self) -> Result<Clause> {
        let head = self.atom()?;
        let body = if self.peek() == Some(&Token::ColonDash) {
            self.pos += 1;
            let mut body = vec![self.atom()?];
            while self.peek() == Some(&Token::Comma) {
                self.pos += 1;
                body.push(self.atom()?);
            }
            body
        } else {
            Vec::new()
        };
        self.eat(&Token::Dot, "'.'")?;
        Ok(Clause { head, body })
    }

    /// Clauses and directives until `terminator` (or end of input).
    fn program_items(&mut self, terminator: Option<&Token>) -> Result<Program> {
        let mut clauses = Vec::new();
        let mut rel_vars: BTreeMap<String, usize> = BTreeMap::new();
        let mut universe: Option<Universe> = None;
        let mut depth_declared = false;
        loop {
            match self.peek() {
                None => break,
                Some(t) if Some(t) == terminator => break,
                Some(Token::Hash) => {
                    self.pos += 1;
                    self.directive(&mut rel_vars, &mut universe, &mut depth_declared)?;
                }
                Some(_) => clauses.push(self.clause()?),
            }
        }
        if let (Some(u), false) = (&mut universe, depth_declared) {
            u.depth_bound = 2;
        }
        Program::new(clauses, rel_vars, universe)
    }

    fn directive(
        &mut self,
        rel_vars: &mut BTreeMap<String, usize>,
        universe: &mut Option<Universe>,
        depth_declared: &mut bool,
    ) -> Result<()> {
        let name = match self.advance() {
            Some(Token::Ident(n)) => n,
            _ => return Err(self.error(&["'rel'", "'universe'", "'depth'"])),
        };
        match name.as_str() {
            "rel" => loop {
                let rel_name = self.pred_name()?;
                self.eat(&Token::Slash, "'/'")?;
                let arity = self.integer()?;
                rel_vars.insert(rel_name, arity);
                if self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    continue;
                }
                self.eat(&Token::Dot, "'.'")?;
                break;
            },
            "universe" => {
                let u = universe.get_or_insert_with(Universe::default);
                loop {
                    match self.advance() {
                        Some(Token::Ident(c)) => {
                            if self.peek() == Some(&Token::Slash) {
                                self.pos += 1;
                                let arity = self.integer()?;
                                u.functors.insert((c, arity));
                            } else {
                                u.constants.insert(c);
                            }
                        }
                        Some(Token::Int(c)) => {
                            u.constants.insert(c);
                        }
                        _ => return Err(self.error(&["a constant", "functor/arity"])),
                    }
                    if self.peek() == Some(&Token::Comma) {
                        self.pos += 1;
                        continue;
                    }
                    self.eat(&Token::Dot, "'.'")?;
                    break;
                }
            }
            "depth" => {
                let d = self.integer()?;
                universe.get_or_insert_with(Universe::default).depth_bound = d;
                *depth_declared = true;
                self.eat(&Token::Dot, "'.'")?;
            }
            other => {
                return Err(Error::InvalidProgram(format!(
                    "unknown directive #{other}"
                )))
            }
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<usize> {
        match self.advance() {
            Some(Token::Int(text)) => text
                .parse()
                .map_err(|_| self.error(&["an integer"])),
            _ => Err(self.error(&["an integer"])),
        }
    }

    // ---- expressions -------------------------------------------------

    fn expr(&mut self) -> Result<Expr> {
        self.union_level()
    }

    fn union_level(&mut self) -> Result<Expr> {
        let mut e = self.intersect_level()?;
        while self.peek() == Some(&Token::Vee) {
            self.pos += 1;
            let rhs = self.intersect_level()?;
            e = Expr::Union(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn intersect_level(&mut self) -> Result<Expr> {
        let mut e = self.postfix_level()?;
        while self.peek() == Some(&Token::Wedge) {
            self.pos += 1;
            let rhs = self.postfix_level()?;
            e = Expr::Intersect(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    /// A primary expression followed by `: (t1,...,tn)` applications.
    fn postfix_level(&mut self) -> Result<Expr> {
        let mut e = self.primary_expr()?;
        while self.peek() == Some(&Token::Colon) {
            self.pos += 1;
            let tuple = self.tuple()?;
            e = Expr::Apply(Box::new(e), tuple);
        }
        Ok(e)
    }

    fn tuple(&mut self) -> Result<Vec<Term>> {
        self.eat(&Token::LParen, "'('")?;
        let mut items = vec![self.term()?];
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            items.push(self.term()?);
        }
        self.eat(&Token::RParen, "')'")?;
        Ok(items)
    }

    fn primary_expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let out = self.primary_expr_inner();
        self.leave();
        out
    }

    fn primary_expr_inner(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Top) => {
                self.pos += 1;
                Ok(Expr::Top)
            }
            Some(Token::Bot) => {
                self.pos += 1;
                Ok(Expr::Bottom)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Token::LBrace) => self.rel_literal(),
            Some(Token::Mu) => {
                self.pos += 1;
                let name = match self.advance() {
                    Some(Token::Ident(n)) => n,
                    _ => return Err(self.error(&["a relation variable name"])),
                };
                self.eat(&Token::Dot, "'.'")?;
                let mut incs = vec![self.inclusion()?];
                while self.peek() == Some(&Token::Semicolon) {
                    self.pos += 1;
                    incs.push(self.inclusion()?);
                }
                Ok(Expr::Mu(name, incs))
            }
            Some(Token::Nu) => {
                self.pos += 1;
                let pred = self.pred_name()?;
                self.eat(&Token::Dot, "'.'")?;
                let pr = self.progref()?;
                Ok(Expr::Nu(pred, pr))
            }
            Some(Token::LParen) => self.paren_expr(),
            _ => Err(self.error(&["an expression"])),
        }
    }

    /// Forms that start with `(`: a `(?- ... where P)` table, a
    /// `(lam x.P)(r)` application, a `(t1,...,tn) / T` projection, or a
    /// parenthesized expression.
    fn paren_expr(&mut self) -> Result<Expr> {
        let open = self.pos;
        self.pos += 1; // consume '('
        match self.peek() {
            Some(Token::QueryDash) => {
                let query = self.query()?;
                self.eat(&Token::Where, "'where'")?;
                let pr = self.progref()?;
                self.eat(&Token::RParen, "')'")?;
                Ok(Expr::Where(query, pr))
            }
            Some(Token::Lam) => {
                self.pos += 1;
                let param = match self.advance() {
                    Some(Token::Ident(n)) => n,
                    _ => return Err(self.error(&["a relation variable name"])),
                };
                self.eat(&Token::Dot, "'.'")?;
                let pr = self.progref()?;
                self.eat(&Token::RParen, "')'")?;
                self.eat(&Token::LParen, "'('")?;
                let arg = self.expr()?;
                self.eat(&Token::RParen, "')'")?;
                Ok(Expr::App(
                    Box::new(Expr::Lam(param, pr)),
                    Box::new(arg),
                ))
            }
            _ => {
                // Try a term tuple first; `(q)` backtracks to a
                // parenthesized expression when no '/' follows.
                self.pos = open;
                let anon_save = self.anon;
                if let Ok(tuple) = self.try_tuple() {
                    if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        let tab = self.postfix_level()?;
                        return Ok(Expr::Project(tuple, Box::new(tab)));
                    }
                    if tuple.len() > 1 {
                        return Err(self.error(&["'/'"]));
                    }
                }
                self.pos = open + 1;
                self.anon = anon_save;
                let e = self.expr()?;
                self.eat(&Token::RParen, "')'")?;
                Ok(e)
            }
        }
    }

    fn try_tuple(&mut self) -> Result<Vec<Term>> {
        let save = self.pos;
        let anon_save = self.anon;
        match self.tuple() {
            Ok(t) => Ok(t),
            Err(e) => {
                self.pos = save;
                self.anon = anon_save;
                Err(e)
            }
        }
    }

    fn rel_literal(&mut self) -> Result<Expr> {
        self.eat(&Token::LBrace, "'{'")?;
        let mut tuples = Vec::new();
        if self.peek() != Some(&Token::RBrace) {
            loop {
                self.eat(&Token::LParen, "'('")?;
                let tuple = self.term_list(Token::RParen)?;
                self.eat(&Token::RParen, "')'")?;
                tuples.push(tuple);
                if self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                    continue;
                }
                break;
            }
        }
        self.eat(&Token::RBrace, "'}'")?;
        Ok(Expr::RelLit(tuples))
    }

    fn inclusion(&mut self) -> Result<Inclusion> {
        let name = match self.advance() {
            Some(Token::Ident(n)) => n,
            _ => return Err(self.error(&["a relation variable name"])),
        };
        self.eat(&Token::Supseteq, "'>='")?;
        let rhs = self.union_level()?;
        Ok(Inclusion { name, rhs })
    }

    fn progref(&mut self) -> Result<ProgRef> {
        match self.peek().cloned() {
            Some(Token::Ident(n)) | Some(Token::UIdent(n)) => {
                self.pos += 1;
                Ok(ProgRef::Named(n))
            }
            Some(Token::LBrace) => {
                self.pos += 1;
                let prog = self.program_items(Some(&Token::RBrace))?;
                self.eat(&Token::RBrace, "'}'")?;
                Ok(ProgRef::Inline(Arc::new(prog)))
            }
            _ => Err(self.error(&["a program name", "'{'"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preview_formula_parses_as_projection_of_intersection() {
        let e = parse_expr(r"(X,Z)/(q:(X,Y) /\ r:(Y,Z))").unwrap();
        match e {
            Expr::Project(tuple, tab) => {
                assert_eq!(tuple.len(), 2);
                match *tab {
                    Expr::Intersect(l, r) => {
                        assert!(matches!(*l, Expr::Apply(_, _)));
                        assert!(matches!(*r, Expr::Apply(_, _)));
                    }
                    other => panic!("expected intersection, got {other:?}"),
                }
            }
            other => panic!("expected projection, got {other:?}"),
        }
    }

    #[test]
    fn mu_with_union_of_branches() {
        let e = parse_expr(r"mu q . q >= (X,Z)/(e:(X,Y) /\ q:(Y,Z)) \/ (X,Y)/(e:(X,Y))")
            .unwrap();
        match e {
            Expr::Mu(name, incs) => {
                assert_eq!(name, "q");
                assert_eq!(incs.len(), 1);
                assert!(matches!(incs[0].rhs, Expr::Union(_, _)));
            }
            other => panic!("expected mu, got {other:?}"),
        }
    }

    #[test]
    fn truncated_input_reports_position() {
        let err = parse_expr("q : (X").unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.found, "end of input");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn zero_arity_compounds_are_rejected() {
        assert!(matches!(parse_term("f()"), Err(Error::Parse(_))));
        assert!(matches!(parse_program("p(f())."), Err(Error::Parse(_))));
    }

    #[test]
    fn pathological_nesting_reports_an_error() {
        let deep = "(".repeat(100_000);
        assert!(matches!(parse_expr(&deep), Err(Error::Parse(_))));
        let deep_term = format!("{}a{}", "f(".repeat(100_000), ")".repeat(100_000));
        assert!(matches!(parse_term(&deep_term), Err(Error::Parse(_))));
    }

    #[test]
    fn where_form_and_inline_programs() {
        let e = parse_expr("(?- q(X,Y) where { q(a,b). q(b,c). })").unwrap();
        match e {
            Expr::Where(q, ProgRef::Inline(p)) => {
                assert_eq!(q.goals().len(), 1);
                assert_eq!(p.clauses().len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lam_application_form() {
        let e = parse_expr("(lam order.P)(nu leq.ords)").unwrap();
        match e {
            Expr::App(lam, arg) => {
                assert!(matches!(*lam, Expr::Lam(ref p, ProgRef::Named(_)) if p == "order"));
                assert!(matches!(*arg, Expr::Nu(ref p, _) if p == "leq"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parenthesized_relation_variable_can_be_applied() {
        let e = parse_expr("(q):(X,Y)").unwrap();
        assert!(matches!(e, Expr::Apply(b, _) if matches!(*b, Expr::Var(_))));
    }

    #[test]
    fn rel_literals() {
        let e = parse_expr("{(a,b),(b,c)}").unwrap();
        assert!(matches!(e, Expr::RelLit(ts) if ts.len() == 2));
        let empty = parse_expr("{}").unwrap();
        assert!(matches!(empty, Expr::RelLit(ts) if ts.is_empty()));
    }

    #[test]
    fn directives_parse() {
        let p = parse_program(
            "#rel order/2.\n#universe a, b, f/1.\n#depth 2.\nq(a,b).",
        )
        .unwrap();
        assert_eq!(p.rel_vars().get("order"), Some(&2));
        let u = p.universe_decl.clone().unwrap();
        assert!(u.constants.contains("a"));
        assert!(u.functors.contains(&("f".to_string(), 1)));
        assert_eq!(u.depth_bound, 2);
    }

    #[test]
    fn uppercase_relation_variable_declarations() {
        let p = parse_program("#rel Order/2. p(X,Y) :- Order(X,Y).").unwrap();
        assert_eq!(p.rel_vars().get("Order"), Some(&2));
    }

    #[test]
    fn anonymous_variables_are_distinct() {
        let q = parse_query("?- p(_, _)").unwrap();
        let vars = q.all_vars();
        assert_eq!(vars.len(), 2);
        assert!(q.heading_vars().is_empty());
    }

    #[test]
    fn qsort_program_parses() {
        let src = "
            #rel order/2.
            qsort([], U-U).
            qsort([X|Xs], U-W) :-
                partition(X, Xs, Y1, Y2),
                qsort(Y1, U-[X|V]),
                qsort(Y2, V-W).
            partition(_, [], [], []).
            partition(X, [Y|Ys], [Y|Ls], Rs) :- order(Y,X), partition(X, Ys, Ls, Rs).
            partition(X, [Y|Ys], Ls, [Y|Rs]) :- order(X,Y), partition(X, Ys, Ls, Rs).
        ";
        let p = parse_program(src).unwrap();
        assert_eq!(p.clauses().len(), 5);
    }
}
