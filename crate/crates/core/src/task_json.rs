//! Canonical JSON encoding of domains, problems, states and datasets.
//!
//! ```text
//! {"domain": {"name", "predicates": [[name, arity]...], "functions": [[name, arity]...], "constants": [name...]},
//!  "problem": {"objects": [...],
//!              "init": {"props": [[pred, [args]]...], "fluents": [[[func, [args]], value]...]},
//!              "goal": {"props": [[sign, pred, [args]]...], "numeric": [[comparator, expr]...]}}}
//! ```
//!
//! Expressions are prefix lists: `["-", ["var", "capacity", ["x"]], ["const", 1]]`.
//! Goal signs are `"+"` or `"-"` (booleans are accepted on input).

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::features::{Dataset, DatasetEntry};
use crate::task_model::{
    BinaryOp, Comparator, Domain, Expr, GroundAtom, NumericCondition, Problem, ProblemBuilder,
    State, Symbol,
};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{ctx}: missing key `{key}`")))
}

fn array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(format!("{ctx}: expected an array")))
}

fn string<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| schema(format!("{ctx}: expected a string")))
}

fn number(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| schema(format!("{ctx}: expected a number")))
}

fn optional_array<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a [Value]> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(v) => Ok(array(v, ctx)?),
    }
}

fn symbols(v: &Value, ctx: &str) -> Result<Vec<Symbol>> {
    array(v, ctx)?
        .iter()
        .map(|pair| {
            let pair = array(pair, ctx)?;
            if pair.len() != 2 {
                return Err(schema(format!("{ctx}: expected [name, arity]")));
            }
            let arity = pair[1]
                .as_u64()
                .ok_or_else(|| schema(format!("{ctx}: arity must be a non-negative integer")))?;
            Ok(Symbol::new(string(&pair[0], ctx)?, arity as usize))
        })
        .collect()
}

pub fn domain_from_value(v: &Value) -> Result<Domain> {
    let name = string(field(v, "name", "domain")?, "domain.name")?;
    let predicates = symbols(field(v, "predicates", "domain")?, "domain.predicates")?;
    let functions = match v.get("functions") {
        None | Some(Value::Null) => Vec::new(),
        Some(f) => symbols(f, "domain.functions")?,
    };
    let constants = optional_array(v, "constants", "domain.constants")?
        .iter()
        .map(|c| string(c, "domain.constants").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    Domain::new(name, predicates, functions, constants)
}

pub fn domain_to_value(d: &Domain) -> Value {
    json!({
        "name": d.name,
        "predicates": d.predicates().iter().map(|p| json!([p.name, p.arity])).collect::<Vec<_>>(),
        "functions": d.functions().iter().map(|f| json!([f.name, f.arity])).collect::<Vec<_>>(),
        "constants": d.constants(),
    })
}

/// `[name, [args...]]` starting at `items[offset]`.
fn name_args<'a>(items: &'a [Value], offset: usize, ctx: &str) -> Result<(&'a str, Vec<&'a str>)> {
    if items.len() != offset + 2 {
        return Err(schema(format!("{ctx}: expected [name, [args...]]")));
    }
    let name = string(&items[offset], ctx)?;
    let args = array(&items[offset + 1], ctx)?
        .iter()
        .map(|a| string(a, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok((name, args))
}

fn expr_from_value(b: &ProblemBuilder<'_>, v: &Value) -> Result<Expr> {
    let items = array(v, "expression")?;
    let head = items
        .first()
        .map(|h| string(h, "expression"))
        .transpose()?
        .ok_or_else(|| schema("expression: empty list"))?;
    match head {
        "const" if items.len() == 2 => Ok(Expr::Const(number(&items[1], "const")?)),
        "var" => {
            let (name, args) = name_args(items, 1, "var")?;
            Ok(Expr::Var(b.variable(name, &args)?))
        }
        op => {
            let op = BinaryOp::from_symbol(op)
                .ok_or_else(|| schema(format!("expression: unknown operator `{op}`")))?;
            if items.len() != 3 {
                return Err(schema(format!(
                    "expression: `{}` needs two operands",
                    op.symbol()
                )));
            }
            Ok(Expr::binary(
                op,
                expr_from_value(b, &items[1])?,
                expr_from_value(b, &items[2])?,
            ))
        }
    }
}

fn expr_to_value(d: &Domain, p: &Problem, e: &Expr) -> Value {
    match e {
        Expr::Const(v) => json!(["const", v]),
        Expr::Var(a) => atom_value(d.functions(), p, a, Some("var")),
        Expr::Binary(op, l, r) => {
            json!([op.symbol(), expr_to_value(d, p, l), expr_to_value(d, p, r)])
        }
    }
}

fn atom_value(symbols: &[Symbol], p: &Problem, a: &GroundAtom, tag: Option<&str>) -> Value {
    let args: Vec<&str> = a
        .args
        .iter()
        .map(|&o| p.objects()[o as usize].as_str())
        .collect();
    let name = &symbols[a.symbol as usize].name;
    match tag {
        Some(t) => json!([t, name, args]),
        None => json!([name, args]),
    }
}

fn sign(v: &Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(*b),
        Value::String(s) if s == "+" => Ok(true),
        Value::String(s) if s == "-" || s == "\u{2212}" => Ok(false),
        _ => Err(schema("goal.props: sign must be \"+\" or \"-\"")),
    }
}

pub fn problem_from_value(domain: &Domain, v: &Value) -> Result<Problem> {
    let name = match v.get("name") {
        Some(n) => string(n, "problem.name")?,
        None => "problem",
    };
    let mut b = ProblemBuilder::new(domain, name);
    for o in array(field(v, "objects", "problem")?, "problem.objects")? {
        b.object(string(o, "problem.objects")?)?;
    }
    let init = state_with(&b, v.get("init").unwrap_or(&Value::Null))?;
    b.set_initial_state(init);
    let goal = v.get("goal").unwrap_or(&Value::Null);
    for g in optional_array(goal, "props", "goal.props")? {
        let items = array(g, "goal.props")?;
        if items.is_empty() {
            return Err(schema("goal.props: expected [sign, pred, [args]]"));
        }
        let positive = sign(&items[0])?;
        let (name, args) = name_args(items, 1, "goal.props")?;
        b.goal(name, &args, positive)?;
    }
    for n in optional_array(goal, "numeric", "goal.numeric")? {
        let items = array(n, "goal.numeric")?;
        if items.len() != 2 {
            return Err(schema("goal.numeric: expected [comparator, expr]"));
        }
        let cmp = string(&items[0], "goal.numeric")?;
        let comparator = Comparator::from_symbol(cmp)
            .ok_or_else(|| schema(format!("goal.numeric: unknown comparator `{cmp}`")))?;
        let expression = expr_from_value(&b, &items[1])?;
        b.numeric_goal(NumericCondition::new(expression, comparator));
    }
    b.build()
}

fn state_with(b: &ProblemBuilder<'_>, v: &Value) -> Result<State> {
    let mut sb = b.state_builder();
    if v.is_null() {
        return Ok(sb.build());
    }
    for p in optional_array(v, "props", "state.props")? {
        let (name, args) = name_args(array(p, "state.props")?, 0, "state.props")?;
        sb.proposition(name, &args)?;
    }
    for f in optional_array(v, "fluents", "state.fluents")? {
        let items = array(f, "state.fluents")?;
        if items.len() != 2 {
            return Err(schema("state.fluents: expected [[func, [args]], value]"));
        }
        let (name, args) = name_args(array(&items[0], "state.fluents")?, 0, "state.fluents")?;
        sb.fluent(name, &args, number(&items[1], "state.fluents")?)?;
    }
    Ok(sb.build())
}

/// Reads a state object against an already built problem.
pub fn state_from_value(domain: &Domain, problem: &Problem, v: &Value) -> Result<State> {
    let mut state = State::new();
    for p in optional_array(v, "props", "state.props")? {
        let (name, args) = name_args(array(p, "state.props")?, 0, "state.props")?;
        state.add_proposition(crate::task_model::resolve_proposition(
            domain, problem, name, &args,
        )?);
    }
    for f in optional_array(v, "fluents", "state.fluents")? {
        let items = array(f, "state.fluents")?;
        if items.len() != 2 {
            return Err(schema("state.fluents: expected [[func, [args]], value]"));
        }
        let (name, args) = name_args(array(&items[0], "state.fluents")?, 0, "state.fluents")?;
        let atom = crate::task_model::resolve_variable(domain, problem, name, &args)?;
        state.assign(atom, number(&items[1], "state.fluents")?)?;
    }
    problem.check_state(domain, &state)?;
    Ok(state)
}

pub fn state_to_value(domain: &Domain, problem: &Problem, state: &State) -> Value {
    json!({
        "props": state.propositions().map(|a| atom_value(domain.predicates(), problem, a, None)).collect::<Vec<_>>(),
        "fluents": state.fluents().map(|(a, v)| json!([atom_value(domain.functions(), problem, a, None), v])).collect::<Vec<_>>(),
    })
}

pub fn problem_to_value(domain: &Domain, problem: &Problem) -> Value {
    let goal_props: Vec<Value> = problem
        .goals()
        .iter()
        .map(|g| {
            let sign = if g.positive { "+" } else { "-" };
            let args: Vec<&str> = g
                .atom
                .args
                .iter()
                .map(|&o| problem.objects()[o as usize].as_str())
                .collect();
            json!([sign, domain.predicates()[g.atom.symbol as usize].name, args])
        })
        .collect();
    let numeric: Vec<Value> = problem
        .numeric_goals()
        .iter()
        .map(|c| {
            json!([
                c.comparator.symbol(),
                expr_to_value(domain, problem, &c.expression)
            ])
        })
        .collect();
    json!({
        "name": problem.name,
        "objects": problem.objects(),
        "init": state_to_value(domain, problem, problem.initial_state()),
        "goal": {"props": goal_props, "numeric": numeric},
    })
}

pub fn parse_json_task(text: &str) -> Result<(Domain, Problem)> {
    let v: Value = serde_json::from_str(text)?;
    let domain = domain_from_value(field(&v, "domain", "task")?)?;
    let problem = problem_from_value(&domain, field(&v, "problem", "task")?)?;
    Ok((domain, problem))
}

pub fn task_to_json(domain: &Domain, problem: &Problem) -> String {
    let v =
        json!({"domain": domain_to_value(domain), "problem": problem_to_value(domain, problem)});
    serde_json::to_string_pretty(&v).expect("task values serialise")
}

pub fn parse_json_dataset(text: &str) -> Result<Dataset> {
    let v: Value = serde_json::from_str(text)?;
    let domain = domain_from_value(field(&v, "domain", "dataset")?)?;
    let mut entries = Vec::new();
    for (i, e) in array(field(&v, "entries", "dataset")?, "dataset.entries")?
        .iter()
        .enumerate()
    {
        let problem = problem_from_value(&domain, field(e, "problem", "entry")?)?;
        let states = array(field(e, "states", "entry")?, "entry.states")?
            .iter()
            .map(|s| state_from_value(&domain, &problem, s))
            .collect::<Result<Vec<_>>>()?;
        let labels = match e.get("labels") {
            None | Some(Value::Null) => None,
            Some(l) => Some(
                array(l, "entry.labels")?
                    .iter()
                    .map(|x| number(x, "entry.labels"))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        if let Some(l) = &labels {
            if l.len() != states.len() {
                return Err(schema(format!(
                    "entry {i}: {} labels for {} states",
                    l.len(),
                    states.len()
                )));
            }
        }
        entries.push(DatasetEntry {
            problem,
            states,
            labels,
        });
    }
    Ok(Dataset { domain, entries })
}

pub fn dataset_to_json(dataset: &Dataset) -> String {
    let d = &dataset.domain;
    let entries: Vec<Value> = dataset
        .entries
        .iter()
        .map(|e| {
            let mut obj = json!({
                "problem": problem_to_value(d, &e.problem),
                "states": e.states.iter().map(|s| state_to_value(d, &e.problem, s)).collect::<Vec<_>>(),
            });
            if let Some(l) = &e.labels {
                obj["labels"] = json!(l);
            }
            obj
        })
        .collect();
    let v = json!({"domain": domain_to_value(d), "entries": entries});
    serde_json::to_string_pretty(&v).expect("dataset values serialise")
}
