//! Restricted PDDL front end.
//!
//! Accepts `:predicates`, `:functions`, `:constants` and typed parameter lists
//! (types are erased). `:action` bodies are read as s-expressions and dropped.
//! Identifiers are case-insensitive and lowercased on input.

use std::fmt::Write as _;

use crate::error::{Error, Result, SourceSpan};
use crate::task_model::{
    BinaryOp, Comparator, Domain, Expr, NumericCondition, Problem, ProblemBuilder, Symbol,
};

const SUPPORTED_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":numeric-fluents",
    ":negative-preconditions",
    ":equality",
];

#[derive(Debug, Clone, PartialEq)]
enum SExpr {
    Atom(String, SourceSpan),
    List(Vec<SExpr>, SourceSpan),
}

impl SExpr {
    fn span(&self) -> &SourceSpan {
        match self {
            SExpr::Atom(_, s) | SExpr::List(_, s) => s,
        }
    }

    fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// The leading atom of a list, e.g. `:predicates` in `(:predicates ...)`.
    fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

fn syntax(span: &SourceSpan, message: impl Into<String>) -> Error {
    Error::Syntax {
        span: span.clone(),
        message: message.into(),
    }
}

fn read_sexpr(text: &str) -> Result<SExpr> {
    let mut stack: Vec<(Vec<SExpr>, SourceSpan)> = Vec::new();
    let mut result: Option<SExpr> = None;
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    let mut token = String::new();
    let mut token_span = SourceSpan::new(1, 1);

    fn flush(
        token: &mut String,
        span: &SourceSpan,
        stack: &mut [(Vec<SExpr>, SourceSpan)],
    ) -> Result<()> {
        if token.is_empty() {
            return Ok(());
        }
        let atom = SExpr::Atom(token.to_lowercase(), span.clone());
        token.clear();
        match stack.last_mut() {
            Some((items, _)) => {
                items.push(atom);
                Ok(())
            }
            None => Err(syntax(span, "expected `(`")),
        }
    }

    while let Some(c) = chars.next() {
        let here = SourceSpan::new(line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        match c {
            ';' => {
                flush(&mut token, &token_span, &mut stack)?;
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 1;
                        break;
                    }
                }
            }
            '(' => {
                flush(&mut token, &token_span, &mut stack)?;
                if result.is_some() {
                    return Err(syntax(&here, "trailing input after top-level expression"));
                }
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut token, &token_span, &mut stack)?;
                let (items, span) = stack.pop().ok_or_else(|| syntax(&here, "unbalanced `)`"))?;
                let list = SExpr::List(items, span);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => result = Some(list),
                }
            }
            c if c.is_whitespace() => flush(&mut token, &token_span, &mut stack)?,
            c => {
                if token.is_empty() {
                    token_span = here;
                }
                token.push(c);
            }
        }
    }
    flush(&mut token, &token_span, &mut stack)?;
    if let Some((_, span)) = stack.last() {
        return Err(syntax(span, "unclosed `(`"));
    }
    result.ok_or_else(|| syntax(&SourceSpan::new(line, col), "empty input"))
}

/// Splits a typed list (`?a ?b - block c`) into its names.
fn typed_names(items: &[SExpr]) -> Result<Vec<String>> {
    let mut names = Vec::new();
    let mut i = 0;
    while i < items.len() {
        match &items[i] {
            SExpr::Atom(a, _) if a == "-" => {
                if i + 1 >= items.len() {
                    return Err(syntax(items[i].span(), "missing type after `-`"));
                }
                i += 2;
            }
            SExpr::Atom(a, _) => {
                names.push(a.clone());
                i += 1;
            }
            SExpr::List(_, span) => return Err(syntax(span, "unexpected list in typed list")),
        }
    }
    Ok(names)
}

fn define_header<'a>(root: &'a SExpr, kind: &str) -> Result<(String, &'a [SExpr])> {
    let items = root
        .as_list()
        .ok_or_else(|| syntax(root.span(), "expected `(define ...)`"))?;
    if items.first().and_then(SExpr::as_atom) != Some("define") {
        return Err(syntax(root.span(), "expected `define`"));
    }
    let header = items
        .get(1)
        .and_then(SExpr::as_list)
        .filter(|h| h.len() == 2 && h[0].as_atom() == Some(kind))
        .ok_or_else(|| syntax(root.span(), format!("expected `({kind} NAME)`")))?;
    let name = header[1]
        .as_atom()
        .ok_or_else(|| syntax(header[1].span(), "expected a name"))?;
    Ok((name.to_string(), &items[2..]))
}

fn check_requirements(items: &[SExpr]) -> Result<()> {
    for flag in items {
        let f = flag
            .as_atom()
            .ok_or_else(|| syntax(flag.span(), "expected a requirement flag"))?;
        if !SUPPORTED_REQUIREMENTS.contains(&f) {
            return Err(Error::UnsupportedRequirement(format!(
                "{f} at {}",
                flag.span()
            )));
        }
    }
    Ok(())
}

fn symbol_decl(decl: &SExpr) -> Result<Symbol> {
    let items = decl
        .as_list()
        .ok_or_else(|| syntax(decl.span(), "expected `(name ?params...)`"))?;
    let name = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or_else(|| syntax(decl.span(), "expected a symbol name"))?;
    let params = typed_names(&items[1..])?;
    Ok(Symbol::new(name, params.len()))
}

pub fn parse_domain(text: &str) -> Result<Domain> {
    let root = read_sexpr(text)?;
    let (name, sections) = define_header(&root, "domain")?;
    let mut predicates = Vec::new();
    let mut functions = Vec::new();
    let mut constants = Vec::new();
    for section in sections {
        let items = section
            .as_list()
            .ok_or_else(|| syntax(section.span(), "expected a section"))?;
        match section.head() {
            Some(":requirements") => check_requirements(&items[1..])?,
            Some(":types") => {
                typed_names(&items[1..])?;
            }
            Some(":constants") => constants.extend(typed_names(&items[1..])?),
            Some(":predicates") => {
                for decl in &items[1..] {
                    predicates.push(symbol_decl(decl)?);
                }
            }
            Some(":functions") => {
                let mut i = 1;
                while i < items.len() {
                    if items[i].as_atom() == Some("-") {
                        // return type, e.g. `- number`
                        i += 2;
                        continue;
                    }
                    functions.push(symbol_decl(&items[i])?);
                    i += 1;
                }
            }
            Some(":action") => {}
            Some(other) => {
                return Err(syntax(
                    section.span(),
                    format!("unsupported section `{other}`"),
                ))
            }
            None => return Err(syntax(section.span(), "expected a section keyword")),
        }
    }
    Domain::new(name, predicates, functions, constants)
}

fn atom_parts(expr: &SExpr) -> Result<(&str, Vec<&str>)> {
    let items = expr
        .as_list()
        .ok_or_else(|| syntax(expr.span(), "expected an atom `(name args...)`"))?;
    let name = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or_else(|| syntax(expr.span(), "expected a symbol name"))?;
    let args = items[1..]
        .iter()
        .map(|a| {
            a.as_atom()
                .ok_or_else(|| syntax(a.span(), "expected an object name"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name, args))
}

fn parse_number(expr: &SExpr) -> Option<f64> {
    expr.as_atom().and_then(|a| a.parse::<f64>().ok())
}

fn parse_expr(b: &ProblemBuilder<'_>, expr: &SExpr) -> Result<Expr> {
    if let Some(v) = parse_number(expr) {
        return Ok(Expr::Const(v));
    }
    let items = match expr {
        SExpr::Atom(a, span) => {
            return Err(syntax(span, format!("unexpected `{a}` in expression")))
        }
        SExpr::List(items, _) => items,
    };
    let head = items
        .first()
        .and_then(SExpr::as_atom)
        .ok_or_else(|| syntax(expr.span(), "expected an operator or function"))?;
    if let Some(op) = BinaryOp::from_symbol(head) {
        let args = items[1..]
            .iter()
            .map(|e| parse_expr(b, e))
            .collect::<Result<Vec<_>>>()?;
        return match (op, args.len()) {
            (BinaryOp::Sub, 1) => Ok(Expr::binary(
                BinaryOp::Sub,
                Expr::Const(0.0),
                args.into_iter().next().unwrap(),
            )),
            (_, n) if n >= 2 => {
                let mut it = args.into_iter();
                let first = it.next().unwrap();
                Ok(it.fold(first, |acc, e| Expr::binary(op, acc, e)))
            }
            _ => Err(syntax(expr.span(), format!("`{head}` needs two operands"))),
        };
    }
    let (name, args) = atom_parts(expr)?;
    Ok(Expr::Var(b.variable(name, &args)?))
}

fn mentions_fluent(expr: &Expr) -> bool {
    !expr.variables().is_empty()
}

fn parse_comparison(
    b: &ProblemBuilder<'_>,
    items: &[SExpr],
    span: &SourceSpan,
) -> Result<NumericCondition> {
    let op = items[0].as_atom().unwrap_or_default();
    if items.len() != 3 {
        return Err(syntax(span, format!("`{op}` needs two operands")));
    }
    let lhs = parse_expr(b, &items[1])?;
    let rhs = parse_expr(b, &items[2])?;
    if !mentions_fluent(&lhs) && !mentions_fluent(&rhs) {
        return Err(syntax(span, "comparison mentions no numeric fluent"));
    }
    let (comparator, pos, neg) = match op {
        ">=" => (Comparator::Ge, lhs, rhs),
        ">" => (Comparator::Gt, lhs, rhs),
        "=" => (Comparator::Eq, lhs, rhs),
        "<=" => (Comparator::Ge, rhs, lhs),
        "<" => (Comparator::Gt, rhs, lhs),
        _ => unreachable!(),
    };
    let expression = match neg {
        Expr::Const(0.0) => pos,
        neg => Expr::binary(BinaryOp::Sub, pos, neg),
    };
    Ok(NumericCondition::new(expression, comparator))
}

fn parse_goal(b: &mut ProblemBuilder<'_>, goal: &SExpr) -> Result<()> {
    let items = goal
        .as_list()
        .ok_or_else(|| syntax(goal.span(), "expected a goal condition"))?;
    match goal.head() {
        Some("and") => {
            for g in &items[1..] {
                parse_goal(b, g)?;
            }
        }
        Some("not") => {
            let inner = items
                .get(1)
                .filter(|_| items.len() == 2)
                .ok_or_else(|| syntax(goal.span(), "`not` takes one atom"))?;
            let (name, args) = atom_parts(inner)?;
            b.goal(name, &args, false)?;
        }
        Some(">=" | ">" | "=" | "<=" | "<") => {
            let cond = parse_comparison(b, items, goal.span())?;
            b.numeric_goal(cond);
        }
        Some(_) => {
            let (name, args) = atom_parts(goal)?;
            b.goal(name, &args, true)?;
        }
        None => {
            if !items.is_empty() {
                return Err(syntax(goal.span(), "expected a goal condition"));
            }
        }
    }
    Ok(())
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem> {
    let root = read_sexpr(text)?;
    let (name, sections) = define_header(&root, "problem")?;
    let mut b = ProblemBuilder::new(domain, name);
    let find = |key: &'static str| sections.iter().filter(move |s| s.head() == Some(key));

    for section in sections {
        match section.head() {
            Some(":domain" | ":requirements" | ":objects" | ":init" | ":goal" | ":metric") => {}
            Some(other) => {
                return Err(syntax(
                    section.span(),
                    format!("unsupported section `{other}`"),
                ))
            }
            None => return Err(syntax(section.span(), "expected a section keyword")),
        }
    }
    if let Some(d) = find(":domain").next() {
        let dn = d.as_list().and_then(|l| l.get(1)).and_then(SExpr::as_atom);
        match dn {
            Some(dn) if dn == domain.name => {}
            Some(dn) => {
                return Err(Error::DomainMismatch {
                    expected: domain.name.clone(),
                    found: dn.to_string(),
                })
            }
            None => return Err(syntax(d.span(), "expected `(:domain NAME)`")),
        }
    }
    for r in find(":requirements") {
        check_requirements(&r.as_list().unwrap()[1..])?;
    }
    for o in find(":objects") {
        for name in typed_names(&o.as_list().unwrap()[1..])? {
            b.object(&name)?;
        }
    }
    for init in find(":init") {
        for fact in &init.as_list().unwrap()[1..] {
            match fact.head() {
                Some("=") => {
                    let items = fact.as_list().unwrap();
                    if items.len() != 3 {
                        return Err(syntax(fact.span(), "expected `(= (f args) value)`"));
                    }
                    let (fname, args) = atom_parts(&items[1])?;
                    let value = parse_number(&items[2])
                        .ok_or_else(|| syntax(items[2].span(), "expected a number"))?;
                    b.init_fluent(fname, &args, value)?;
                }
                Some("not") => {
                    return Err(syntax(
                        fact.span(),
                        "negative facts are not allowed in :init",
                    ))
                }
                _ => {
                    let (pname, args) = atom_parts(fact)?;
                    b.init_proposition(pname, &args)?;
                }
            }
        }
    }
    for g in find(":goal") {
        for cond in &g.as_list().unwrap()[1..] {
            parse_goal(&mut b, cond)?;
        }
    }
    b.build()
}

fn params(arity: usize) -> String {
    (0..arity).map(|i| format!(" ?x{i}")).collect()
}

/// Renders a domain as PDDL that [`parse_domain`] reads back to an equal value.
pub fn domain_to_pddl(domain: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", domain.name);
    if domain.functions().is_empty() {
        out.push_str("  (:requirements :strips)\n");
    } else {
        out.push_str("  (:requirements :strips :numeric-fluents)\n");
    }
    if !domain.constants().is_empty() {
        let _ = writeln!(out, "  (:constants {})", domain.constants().join(" "));
    }
    out.push_str("  (:predicates");
    for p in domain.predicates() {
        let _ = write!(out, "\n    ({}{})", p.name, params(p.arity));
    }
    out.push_str(")\n");
    if !domain.functions().is_empty() {
        out.push_str("  (:functions");
        for f in domain.functions() {
            let _ = write!(out, "\n    ({}{})", f.name, params(f.arity));
        }
        out.push_str(")\n");
    }
    out.push_str(")\n");
    out
}

fn sexpr_atom(
    domain: &Domain,
    problem: &Problem,
    atom: &crate::task_model::GroundAtom,
    numeric: bool,
) -> String {
    let symbols = if numeric {
        domain.functions()
    } else {
        domain.predicates()
    };
    let mut s = format!("({}", symbols[atom.symbol as usize].name);
    for &o in &atom.args {
        s.push(' ');
        s.push_str(&problem.objects()[o as usize]);
    }
    s.push(')');
    s
}

pub(crate) fn expr_to_pddl(domain: &Domain, problem: &Problem, e: &Expr) -> String {
    match e {
        Expr::Const(v) => format!("{v}"),
        Expr::Var(a) => sexpr_atom(domain, problem, a, true),
        Expr::Binary(op, l, r) => format!(
            "({} {} {})",
            op.symbol(),
            expr_to_pddl(domain, problem, l),
            expr_to_pddl(domain, problem, r)
        ),
    }
}

/// Renders a problem as PDDL. Constants are left to the domain.
pub fn problem_to_pddl(domain: &Domain, problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    let _ = writeln!(out, "  (:domain {})", domain.name);
    let objects: Vec<&str> = problem
        .objects()
        .iter()
        .filter(|o| domain.constant_index(o).is_none())
        .map(String::as_str)
        .collect();
    let _ = writeln!(out, "  (:objects {})", objects.join(" "));
    out.push_str("  (:init");
    let state = problem.initial_state();
    for p in state.propositions() {
        let _ = write!(out, "\n    {}", sexpr_atom(domain, problem, p, false));
    }
    for (f, v) in state.fluents() {
        let _ = write!(
            out,
            "\n    (= {} {})",
            sexpr_atom(domain, problem, f, true),
            v
        );
    }
    out.push_str(")\n  (:goal (and");
    for g in problem.goals() {
        let atom = sexpr_atom(domain, problem, &g.atom, false);
        if g.positive {
            let _ = write!(out, "\n    {atom}");
        } else {
            let _ = write!(out, "\n    (not {atom})");
        }
    }
    for c in problem.numeric_goals() {
        let _ = write!(
            out,
            "\n    ({} {} 0)",
            c.comparator.symbol(),
            expr_to_pddl(domain, problem, &c.expression)
        );
    }
    out.push_str("))\n)\n");
    out
}
