use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, SourcePos, EXPECT_TAGS};
use crate::logic::{
    AgentId, Atom, Axiom, Formula, OpKind, Problem, Query, QueryKind, RelId, Signature, TheoryId,
    RESERVED_WORDS,
};
use crate::theories::TheorySpec;

/// Nesting limit; deeper input is rejected rather than overflowing the stack.
const MAX_DEPTH: usize = 200;

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    tokens: &'a [Token],
    i: usize,
    sig: &'a Signature,
    theory: &'a TheorySpec,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.i + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> SourcePos {
        self.tokens[self.i].pos
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.i];
        if self.i + 1 < self.tokens.len() {
            self.i += 1;
        }
        t
    }

    fn error(&self, what: &str, expected: &[&str]) -> Diagnostic {
        let found = self.peek().describe();
        let mut d = Diagnostic::new(self.pos(), format!("expected {what}, found {found}"));
        if !expected.is_empty() {
            d.expected = Some(expected.iter().map(|s| s.to_string()).collect());
        }
        d
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let sym = tok.symbol();
            Err(self.error(&format!("`{sym}`"), &[sym]))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, SourcePos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error(what, &["identifier"])),
        }
    }

    fn is_ident(&self, k: usize, word: &str) -> bool {
        matches!(self.peek_at(k), Tok::Ident(s) if s == word)
    }

    fn allow(&self, op: OpKind, pos: SourcePos) -> PResult<()> {
        if self.theory.operators.contains(&op) {
            Ok(())
        } else {
            Err(Diagnostic::ill_formed(
                pos,
                format!("operator {op} is not part of theory {}", self.theory.id),
            ))
        }
    }

    fn agent(&mut self) -> PResult<AgentId> {
        let (name, pos) = self.ident("an agent name")?;
        let agent: AgentId = name.parse().map_err(|e| Diagnostic::new(pos, format!("{e}")))?;
        if !self.sig.has_agent(&agent) {
            return Err(Diagnostic::ill_formed(pos, format!("undeclared agent `{agent}`")));
        }
        Ok(agent)
    }

    /// `formula`; with `slot` set, `|` at the top level is left for the
    /// enclosing `O{ . | . }`.
    fn formula(&mut self, slot: bool) -> PResult<Formula> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Diagnostic::new(self.pos(), "formula nested too deeply".into()));
        }
        let f = self.iff(slot);
        self.depth -= 1;
        f
    }

    fn iff(&mut self, slot: bool) -> PResult<Formula> {
        let mut lhs = self.implies(slot)?;
        while *self.peek() == Tok::DoubleArrow {
            let pos = self.pos();
            self.bump();
            self.allow(OpKind::Iff, pos)?;
            let rhs = self.implies(slot)?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self, slot: bool) -> PResult<Formula> {
        let lhs = self.or(slot)?;
        if *self.peek() == Tok::Arrow {
            let pos = self.pos();
            self.bump();
            self.allow(OpKind::Implies, pos)?;
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(Diagnostic::new(self.pos(), "formula nested too deeply".into()));
            }
            let rhs = self.implies(slot);
            self.depth -= 1;
            return Ok(Formula::implies(lhs, rhs?));
        }
        Ok(lhs)
    }

    fn or(&mut self, slot: bool) -> PResult<Formula> {
        let mut lhs = self.and()?;
        while !slot && *self.peek() == Tok::Bar {
            let pos = self.pos();
            self.bump();
            self.allow(OpKind::Or, pos)?;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            let pos = self.pos();
            self.bump();
            self.allow(OpKind::And, pos)?;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Diagnostic::new(self.pos(), "formula nested too deeply".into()));
        }
        let f = self.unary_inner();
        self.depth -= 1;
        f
    }

    fn unary_inner(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                self.allow(OpKind::Not, pos)?;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                self.allow(OpKind::Poss, pos)?;
                Ok(Formula::poss(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula(false)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::LBracket => {
                self.bump();
                if *self.peek() == Tok::RBracket {
                    self.bump();
                    self.allow(OpKind::Nec, pos)?;
                    return Ok(Formula::nec(self.unary()?));
                }
                if self.is_ident(0, "av") || self.is_ident(0, "pv") {
                    let av = self.is_ident(0, "av");
                    self.bump();
                    self.expect(Tok::RBracket)?;
                    self.allow(if av { OpKind::AvNec } else { OpKind::PvNec }, pos)?;
                    let g = self.unary()?;
                    return Ok(if av { Formula::av_nec(g) } else { Formula::pv_nec(g) });
                }
                if self.is_ident(0, "rel") {
                    self.bump();
                    let (name, npos) = self.ident("a relation name")?;
                    self.expect(Tok::RBracket)?;
                    self.allow(OpKind::RelNec, pos)?;
                    let rel: RelId = name.parse().map_err(|e| Diagnostic::new(npos, format!("{e}")))?;
                    if self.theory.relation(&rel).is_none() {
                        return Err(Diagnostic::ill_formed(
                            npos,
                            format!("theory {} has no relation `{rel}`", self.theory.id),
                        ));
                    }
                    return Ok(Formula::RelNec(rel, Box::new(self.unary()?)));
                }
                Err(self.error("`]`, `av`, `pv` or `rel`", &["]", "av", "pv", "rel"]))
            }
            Tok::Lt => {
                self.bump();
                let av = self.is_ident(0, "av");
                if !av && !self.is_ident(0, "pv") {
                    return Err(self.error("`av` or `pv`", &["av", "pv"]));
                }
                self.bump();
                self.expect(Tok::Gt)?;
                self.allow(OpKind::Not, pos)?;
                self.allow(if av { OpKind::AvNec } else { OpKind::PvNec }, pos)?;
                let g = Formula::not(self.unary()?);
                let boxed = if av { Formula::av_nec(g) } else { Formula::pv_nec(g) };
                Ok(Formula::not(boxed))
            }
            Tok::Ident(word) if !is_structural(&word) => {
                self.bump();
                self.word(&word, pos)
            }
            _ => Err(self.error("a formula", &["formula"])),
        }
    }

    fn slots(&mut self) -> PResult<(Formula, Formula)> {
        self.expect(Tok::LBrace)?;
        let body = self.formula(true)?;
        self.expect(Tok::Bar)?;
        let context = self.formula(true)?;
        self.expect(Tok::RBrace)?;
        Ok((body, context))
    }

    fn word(&mut self, word: &str, pos: SourcePos) -> PResult<Formula> {
        match word {
            "true" => {
                self.allow(OpKind::True, pos)?;
                Ok(Formula::True)
            }
            "false" => {
                self.allow(OpKind::False, pos)?;
                Ok(Formula::False)
            }
            "O" => {
                if *self.peek() == Tok::LBrace {
                    self.allow(OpKind::CondOb, pos)?;
                    let (body, context) = self.slots()?;
                    return Ok(Formula::CondOb { body: Box::new(body), context: Box::new(context) });
                }
                let agent_bracket = *self.peek() == Tok::LBracket
                    && matches!(self.peek_at(1), Tok::Ident(s) if !matches!(s.as_str(), "av" | "pv" | "rel"));
                if agent_bracket {
                    self.bump();
                    let agent = self.agent()?;
                    self.expect(Tok::RBracket)?;
                    if *self.peek() == Tok::LBrace {
                        self.allow(OpKind::AgentCondOb, pos)?;
                        let (body, context) = self.slots()?;
                        return Ok(Formula::AgentCondOb {
                            agent,
                            body: Box::new(body),
                            context: Box::new(context),
                        });
                    }
                    self.allow(OpKind::AgentOb, pos)?;
                    return Ok(Formula::AgentOb(agent, Box::new(self.unary()?)));
                }
                self.allow(OpKind::Ob, pos)?;
                Ok(Formula::ob(self.unary()?))
            }
            "Oa" | "Op" | "P" | "Fb" => {
                let (op, make): (OpKind, fn(Formula) -> Formula) = match word {
                    "Oa" => (OpKind::ActualOb, Formula::actual_ob),
                    "Op" => (OpKind::PrimaryOb, Formula::primary_ob),
                    "P" => (OpKind::Perm, Formula::perm),
                    _ => (OpKind::Forb, Formula::forb),
                };
                self.allow(op, pos)?;
                Ok(make(self.unary()?))
            }
            "stit" => {
                self.allow(OpKind::Stit, pos)?;
                self.expect(Tok::LParen)?;
                let agent = self.agent()?;
                self.expect(Tok::Comma)?;
                let g = self.formula(false)?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Stit(agent, Box::new(g)))
            }
            _ => {
                let atom: Atom = word.parse().map_err(|_| {
                    Diagnostic::new(pos, format!("`{word}` is neither an operator nor a valid atom"))
                })?;
                if !self.sig.has_atom(&atom) {
                    return Err(Diagnostic::ill_formed(pos, format!("undeclared atom `{atom}`")));
                }
                self.allow(OpKind::Prop, pos)?;
                Ok(Formula::Prop(atom))
            }
        }
    }
}

/// Parses one formula against `sig`. The result is well formed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, Diagnostic> {
    let (tokens, diags) = lex(text);
    if let Some(d) = diags.into_iter().next() {
        return Err(d);
    }
    let theory = sig.theory_spec();
    let mut p = Parser { tokens: &tokens, i: 0, sig, theory: &theory, depth: 0 };
    let f = p.formula(false)?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("an operator or end of input", &[]));
    }
    debug_assert!(crate::logic::well_formed_in(&f, sig, &theory).is_ok());
    Ok(f)
}

/// Reserved words that never start a formula.
fn is_structural(word: &str) -> bool {
    RESERVED_WORDS.contains(&word) && !matches!(word, "true" | "false" | "stit")
}

const SECTION_WORDS: [&str; 6] = ["theory", "atom", "agent", "global", "local", "query"];

/// Parses a `.deon` problem file, collecting every diagnostic.
pub fn parse_problem(text: &str) -> Result<Problem, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(text);
    let placeholder = Signature::new(TheoryId::Sdl);
    let placeholder_theory = placeholder.theory_spec();
    let mut p = Parser { tokens: &tokens, i: 0, sig: &placeholder, theory: &placeholder_theory, depth: 0 };

    let theory = match header(&mut p) {
        Ok(t) => t,
        Err(d) => {
            diags.push(d);
            skip_to_section(&mut p);
            TheoryId::Sdl
        }
    };
    let mut sig = Signature::new(theory);
    let mut seen_section = false;
    // declarations
    loop {
        let pos = p.pos();
        let start = p.i;
        let res = match p.peek() {
            Tok::Ident(w) if w == "atom" || w == "agent" => {
                let is_atom = w == "atom";
                p.bump();
                declaration(&mut p, &mut sig, is_atom, seen_section, pos)
            }
            Tok::Ident(w) if w == "global" || w == "local" || w == "query" => break,
            Tok::Eof => break,
            _ => {
                seen_section = true;
                Err(p.error("a declaration or section", &SECTION_WORDS[1..]))
            }
        };
        if let Err(d) = res {
            diags.push(d);
            if p.i == start {
                p.bump();
            }
            skip_to_section(&mut p);
        }
    }

    let spec = sig.theory_spec();
    let mut problem = Problem::new(sig.clone());
    let mut p = Parser { tokens: &tokens, i: p.i, sig: &sig, theory: &spec, depth: 0 };
    let mut labels = BTreeSet::new();
    while *p.peek() != Tok::Eof {
        let start = p.i;
        if let Err(d) = section(&mut p, &mut problem, &mut labels) {
            diags.push(d);
            if p.i == start {
                p.bump();
            }
            skip_to_section(&mut p);
        }
    }
    if diags.is_empty() {
        Ok(problem)
    } else {
        Err(diags)
    }
}

fn header(p: &mut Parser) -> PResult<TheoryId> {
    if !p.is_ident(0, "theory") {
        return Err(p.error("`theory` declaration", &["theory"]));
    }
    p.bump();
    let (name, pos) = p.ident("a theory name")?;
    name.parse().map_err(|_| {
        Diagnostic::new(pos, format!("unknown theory `{name}`"))
            .with_expected(TheoryId::ALL.iter().map(|t| t.keyword().to_string()).collect())
    })
}

fn declaration(
    p: &mut Parser,
    sig: &mut Signature,
    is_atom: bool,
    late: bool,
    pos: SourcePos,
) -> PResult<()> {
    if late {
        return Err(Diagnostic::new(pos, "declarations must precede axioms and queries".into()));
    }
    let (name, npos) = p.ident(if is_atom { "an atom name" } else { "an agent name" })?;
    let added = if is_atom {
        let atom: Atom = name.parse().map_err(|e| Diagnostic::new(npos, format!("{e}")))?;
        sig.add_atom(atom)
    } else {
        let agent: AgentId = name.parse().map_err(|e| Diagnostic::new(npos, format!("{e}")))?;
        sig.add_agent(agent)
    };
    added.map_err(|e| Diagnostic::new(npos, e.to_string()))
}

fn section(p: &mut Parser, problem: &mut Problem, labels: &mut BTreeSet<String>) -> PResult<()> {
    let pos = p.pos();
    let kind = match p.peek() {
        Tok::Ident(w) if matches!(w.as_str(), "global" | "local" | "query") => w.clone(),
        Tok::Ident(w) if w == "atom" || w == "agent" => {
            return Err(Diagnostic::new(pos, "declarations must precede axioms and queries".into()))
        }
        _ => return Err(p.error("`global`, `local` or `query`", &["global", "local", "query"])),
    };
    p.bump();
    let (label, lpos) = p.ident("a label")?;
    p.expect(Tok::Colon)?;
    if !labels.insert(label.clone()) {
        return Err(Diagnostic::ill_formed(lpos, format!("label `{label}` used twice")));
    }
    match kind.as_str() {
        "global" | "local" => {
            let formula = p.formula(false)?;
            end_of_section(p)?;
            let axiom = Axiom { label, formula };
            if kind == "global" {
                problem.globals.push(axiom);
            } else {
                problem.locals.push(axiom);
            }
        }
        _ => {
            let qkind = if p.is_ident(0, "consistent") {
                p.bump();
                QueryKind::Consistent
            } else if p.is_ident(0, "entails") {
                p.bump();
                QueryKind::Entails(p.formula(false)?)
            } else {
                return Err(p.error("`consistent` or `entails`", &["consistent", "entails"]));
            };
            let mut without = Vec::new();
            if p.is_ident(0, "without") {
                p.bump();
                loop {
                    let (name, npos) = p.ident("a local label")?;
                    if !problem.locals.iter().any(|a| a.label == name) {
                        return Err(Diagnostic::ill_formed(npos, format!("no local assumption `{name}`")));
                    }
                    without.push(name);
                    if *p.peek() != Tok::Comma {
                        break;
                    }
                    p.bump();
                }
            }
            let mut expected = None;
            if p.is_ident(0, "expect") {
                p.bump();
                let (tag, tpos) = p.ident("a verdict tag")?;
                if !EXPECT_TAGS.contains(&tag.as_str()) {
                    return Err(Diagnostic::new(tpos, format!("unknown verdict tag `{tag}`"))
                        .with_expected(EXPECT_TAGS.iter().map(|s| s.to_string()).collect()));
                }
                expected = Some(tag);
            }
            end_of_section(p)?;
            problem.queries.push(Query { label, kind: qkind, without, expected });
        }
    }
    Ok(())
}

fn end_of_section(p: &Parser) -> PResult<()> {
    match p.peek() {
        Tok::Eof => Ok(()),
        Tok::Ident(w) if SECTION_WORDS.contains(&w.as_str()) => Ok(()),
        _ => Err(p.error("an operator or the next section", &[])),
    }
}

fn skip_to_section(p: &mut Parser) {
    loop {
        match p.peek() {
            Tok::Eof => return,
            Tok::Ident(w) if SECTION_WORDS.contains(&w.as_str()) => return,
            _ => {
                p.bump();
            }
        }
    }
}
