use std::fmt::Write;

use crate::logic::{Formula, Problem, QueryKind};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Prints `f` in the concrete syntax with as few parentheses as the
/// precedence table allows. The output reparses to `f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, IFF, false);
    out
}

/// `min` is the loosest level allowed unparenthesized here; `slot` marks a
/// position inside `O{ . | . }` where a top-level `|` would be misread.
fn write_formula(out: &mut String, f: &Formula, min: u8, slot: bool) {
    let lvl = level(f);
    if lvl < min || (slot && lvl == OR) {
        out.push('(');
        write_formula(out, f, IFF, false);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Prop(a) => out.push_str(a.as_str()),
        Formula::Iff(a, b) => binary(out, a, " <-> ", b, IFF, IFF + 1, slot),
        Formula::Implies(a, b) => binary(out, a, " -> ", b, IMPLIES + 1, IMPLIES, slot),
        Formula::Or(a, b) => binary(out, a, " | ", b, OR, OR + 1, slot),
        Formula::And(a, b) => binary(out, a, " & ", b, AND, AND + 1, slot),
        Formula::Not(g) => match diamond_form(g) {
            Some((name, inner)) => prefix(out, &format!("<{name}> "), inner),
            None => prefix(out, "~", g),
        },
        Formula::Nec(g) => prefix(out, "[] ", g),
        Formula::Poss(g) => prefix(out, "<> ", g),
        Formula::RelNec(r, g) => prefix(out, &format!("[rel {r}] "), g),
        Formula::AvNec(g) => prefix(out, "[av] ", g),
        Formula::PvNec(g) => prefix(out, "[pv] ", g),
        Formula::Ob(g) => prefix(out, "O ", g),
        Formula::Perm(g) => prefix(out, "P ", g),
        Formula::Forb(g) => prefix(out, "Fb ", g),
        Formula::ActualOb(g) => prefix(out, "Oa ", g),
        Formula::PrimaryOb(g) => prefix(out, "Op ", g),
        Formula::AgentOb(a, g) => prefix(out, &format!("O[{a}] "), g),
        Formula::CondOb { body, context } => slots(out, "O", body, context),
        Formula::AgentCondOb { agent, body, context } => slots(out, &format!("O[{agent}]"), body, context),
        Formula::Stit(a, g) => {
            let _ = write!(out, "stit({a}, ");
            write_formula(out, g, IFF, false);
            out.push(')');
        }
    }
}

/// `~[av]~g` prints as `<av> g`.
fn diamond_form(g: &Formula) -> Option<(&'static str, &Formula)> {
    match g {
        Formula::AvNec(inner) => match &**inner {
            Formula::Not(h) => Some(("av", h)),
            _ => None,
        },
        Formula::PvNec(inner) => match &**inner {
            Formula::Not(h) => Some(("pv", h)),
            _ => None,
        },
        _ => None,
    }
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula, la: u8, lb: u8, slot: bool) {
    write_formula(out, a, la, slot);
    out.push_str(op);
    write_formula(out, b, lb, slot);
}

fn prefix(out: &mut String, op: &str, g: &Formula) {
    out.push_str(op);
    write_formula(out, g, UNARY, false);
}

fn slots(out: &mut String, head: &str, body: &Formula, context: &Formula) {
    out.push_str(head);
    out.push('{');
    write_formula(out, body, IFF, true);
    out.push_str(" | ");
    write_formula(out, context, IFF, true);
    out.push('}');
}

/// Prints a problem as a `.deon` file that parses back to it.
pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theory {}", p.theory());
    for a in p.signature.atoms() {
        let _ = writeln!(out, "atom {a}");
    }
    for a in p.signature.agents() {
        let _ = writeln!(out, "agent {a}");
    }
    for (kw, axioms) in [("global", &p.globals), ("local", &p.locals)] {
        for ax in axioms {
            let _ = writeln!(out, "{kw} {}: {}", ax.label, print_formula(&ax.formula));
        }
    }
    for q in &p.queries {
        let _ = write!(out, "query {}: ", q.label);
        match &q.kind {
            QueryKind::Consistent => out.push_str("consistent"),
            QueryKind::Entails(g) => {
                let _ = write!(out, "entails {}", print_formula(g));
            }
        }
        if !q.without.is_empty() {
            let _ = write!(out, " without {}", q.without.join(", "));
        }
        if let Some(tag) = &q.expected {
            let _ = write!(out, " expect {tag}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }
    fn q() -> Formula {
        Formula::prop("q")
    }
    fn r() -> Formula {
        Formula::prop("r")
    }

    #[test]
    fn examples() {
        assert_eq!(print_formula(&Formula::cond_ob(p(), q())), "O{p | q}");
        assert_eq!(print_formula(&Formula::implies(Formula::and(p(), q()), r())), "p & q -> r");
        assert_eq!(print_formula(&Formula::and(p(), Formula::or(q(), r()))), "p & (q | r)");
    }

    #[test]
    fn associativity() {
        let right = Formula::implies(p(), Formula::implies(q(), r()));
        assert_eq!(print_formula(&right), "p -> q -> r");
        let left = Formula::implies(Formula::implies(p(), q()), r());
        assert_eq!(print_formula(&left), "(p -> q) -> r");
        let and_right = Formula::and(p(), Formula::and(q(), r()));
        assert_eq!(print_formula(&and_right), "p & (q & r)");
    }

    #[test]
    fn slots_guard_disjunction() {
        let f = Formula::cond_ob(Formula::implies(p(), Formula::or(q(), r())), Formula::or(p(), q()));
        assert_eq!(print_formula(&f), "O{p -> (q | r) | (p | q)}");
        let g = Formula::cond_ob(Formula::and(p(), q()), Formula::not(r()));
        assert_eq!(print_formula(&g), "O{p & q | ~r}");
    }

    #[test]
    fn diamonds() {
        let f = Formula::not(Formula::av_nec(Formula::not(Formula::and(p(), q()))));
        assert_eq!(print_formula(&f), "<av> (p & q)");
        assert_eq!(print_formula(&Formula::not(Formula::av_nec(p()))), "~[av] p");
        assert_eq!(print_formula(&Formula::stit("d", Formula::or(p(), q()))), "stit(d, p | q)");
    }
}
