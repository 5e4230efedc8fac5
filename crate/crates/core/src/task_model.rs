//! Lifted domains, grounded problems and states.
//!
//! Objects and symbols are interned to dense ids when a [`Problem`] is built;
//! everything downstream works with ids. Names are only kept for display and
//! serialisation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A predicate or function declaration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    predicates: Vec<Symbol>,
    functions: Vec<Symbol>,
    constants: Vec<String>,
}

impl Domain {
    /// Builds a domain, rejecting duplicate names within each list.
    pub fn new(
        name: impl Into<String>,
        predicates: Vec<Symbol>,
        functions: Vec<Symbol>,
        constants: Vec<String>,
    ) -> Result<Self> {
        check_distinct("predicate", predicates.iter().map(|s| s.name.as_str()))?;
        check_distinct("function", functions.iter().map(|s| s.name.as_str()))?;
        check_distinct("constant", constants.iter().map(String::as_str))?;
        Ok(Domain {
            name: name.into(),
            predicates,
            functions,
            constants,
        })
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }
}

fn check_distinct<'a>(kind: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(Error::DuplicateSymbol(format!("{kind} `{name}`")));
        }
    }
    Ok(())
}

/// A predicate or function applied to objects. `symbol` indexes the domain's
/// predicate list for propositions and its function list for numeric variables;
/// `args` index the owning problem's object list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub symbol: u32,
    pub args: Vec<u32>,
}

impl GroundAtom {
    pub fn new(symbol: u32, args: Vec<u32>) -> Self {
        GroundAtom { symbol, args }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comparator {
    Ge,
    Gt,
    Eq,
}

impl Comparator {
    pub const ALL: [Comparator; 3] = [Comparator::Ge, Comparator::Gt, Comparator::Eq];

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
            Comparator::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            ">=" => Some(Comparator::Ge),
            ">" => Some(Comparator::Gt),
            "=" => Some(Comparator::Eq),
            _ => None,
        }
    }

    /// `value ⊵ 0`. Equality is exact.
    pub fn holds(self, value: f64) -> bool {
        match self {
            Comparator::Ge => value >= 0.0,
            Comparator::Gt => value > 0.0,
            Comparator::Eq => value == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(BinaryOp::Add),
            "-" | "\u{2212}" => Some(BinaryOp::Sub),
            "*" => Some(BinaryOp::Mul),
            "/" => Some(BinaryOp::Div),
            _ => None,
        }
    }
}

/// Arithmetic expression over numeric variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(GroundAtom),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn evaluate(&self, state: &State) -> Result<f64> {
        match self {
            Expr::Const(v) => Ok(*v),
            Expr::Var(atom) => state
                .value(atom)
                .ok_or_else(|| Error::UnassignedVariable(format!("{atom:?}"))),
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.evaluate(state)?;
                let b = rhs.evaluate(state)?;
                match op {
                    BinaryOp::Add => Ok(a + b),
                    BinaryOp::Sub => Ok(a - b),
                    BinaryOp::Mul => Ok(a * b),
                    BinaryOp::Div if b == 0.0 => Err(Error::DivisionByZero),
                    BinaryOp::Div => Ok(a / b),
                }
            }
        }
    }

    /// The distinct variables of the expression, in first-occurrence order.
    pub fn variables(&self) -> Vec<&GroundAtom> {
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a GroundAtom>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(a) => {
                    if !out.contains(&a) {
                        out.push(a);
                    }
                }
                Expr::Binary(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// `expression ⊵ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCondition {
    pub expression: Expr,
    pub comparator: Comparator,
}

impl NumericCondition {
    pub fn new(expression: Expr, comparator: Comparator) -> Self {
        NumericCondition {
            expression,
            comparator,
        }
    }

    pub fn is_satisfied(&self, state: &State) -> Result<bool> {
        Ok(self.comparator.holds(self.expression.evaluate(state)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalLiteral {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl GoalLiteral {
    pub fn holds(&self, state: &State) -> bool {
        state.holds(&self.atom) == self.positive
    }
}

/// True propositions and numeric assignments. Closed world for propositions;
/// numeric variables without a value are absent, not zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct State {
    propositions: BTreeSet<GroundAtom>,
    fluents: BTreeMap<GroundAtom, f64>,
}

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_proposition(&mut self, atom: GroundAtom) {
        self.propositions.insert(atom);
    }

    /// Fails if the variable already has a value.
    pub fn assign(&mut self, atom: GroundAtom, value: f64) -> Result<()> {
        if self.fluents.contains_key(&atom) {
            return Err(Error::DuplicateAssignment(format!("{atom:?}")));
        }
        self.fluents.insert(atom, value);
        Ok(())
    }

    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.propositions.contains(atom)
    }

    pub fn value(&self, atom: &GroundAtom) -> Option<f64> {
        self.fluents.get(atom).copied()
    }

    pub fn propositions(&self) -> impl Iterator<Item = &GroundAtom> {
        self.propositions.iter()
    }

    pub fn fluents(&self) -> impl Iterator<Item = (&GroundAtom, f64)> {
        self.fluents.iter().map(|(a, v)| (a, *v))
    }

    pub fn num_propositions(&self) -> usize {
        self.propositions.len()
    }

    pub fn num_fluents(&self) -> usize {
        self.fluents.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    objects: Vec<String>,
    object_index: HashMap<String, u32>,
    goals: Vec<GoalLiteral>,
    numeric_goals: Vec<NumericCondition>,
    initial_state: State,
}

impl Problem {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_id(&self, name: &str) -> Option<u32> {
        self.object_index.get(name).copied()
    }

    pub fn goals(&self) -> &[GoalLiteral] {
        &self.goals
    }

    pub fn numeric_goals(&self) -> &[NumericCondition] {
        &self.numeric_goals
    }

    pub fn initial_state(&self) -> &State {
        &self.initial_state
    }

    /// All propositional literals hold and all numeric conditions are satisfied.
    pub fn goal_satisfied(&self, state: &State) -> Result<bool> {
        if !self.goals.iter().all(|g| g.holds(state)) {
            return Ok(false);
        }
        for cond in &self.numeric_goals {
            if !cond.is_satisfied(state)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that a state refers only to known objects and assigns every
    /// variable a numeric goal mentions.
    pub fn check_state(&self, domain: &Domain, state: &State) -> Result<()> {
        let n = self.objects.len() as u32;
        for atom in state.propositions() {
            check_atom(domain.predicates(), atom, n)?;
        }
        for (atom, _) in state.fluents() {
            check_atom(domain.functions(), atom, n)?;
        }
        for cond in &self.numeric_goals {
            for var in cond.expression.variables() {
                if state.value(var).is_none() {
                    return Err(Error::UnassignedGoalFluent(
                        self.display_atom(domain.functions(), var),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `pred(o1, o2)` style rendering of an atom.
    pub fn display_atom(&self, symbols: &[Symbol], atom: &GroundAtom) -> String {
        let name = symbols
            .get(atom.symbol as usize)
            .map(|s| s.name.as_str())
            .unwrap_or("?");
        let args: Vec<&str> = atom
            .args
            .iter()
            .map(|&o| {
                self.objects
                    .get(o as usize)
                    .map(String::as_str)
                    .unwrap_or("?")
            })
            .collect();
        format!("{}({})", name, args.join(","))
    }
}

fn check_atom(symbols: &[Symbol], atom: &GroundAtom, num_objects: u32) -> Result<()> {
    let sym = symbols
        .get(atom.symbol as usize)
        .ok_or_else(|| Error::UnknownSymbol(format!("symbol id {}", atom.symbol)))?;
    if sym.arity != atom.args.len() {
        return Err(Error::ArityMismatch {
            symbol: sym.name.clone(),
            expected: sym.arity,
            found: atom.args.len(),
        });
    }
    if let Some(&bad) = atom.args.iter().find(|&&o| o >= num_objects) {
        return Err(Error::UnknownSymbol(format!("object id {bad}")));
    }
    Ok(())
}

/// Name-based construction of a [`Problem`] against a domain. Constants are
/// added as objects first, in declaration order.
#[derive(Debug)]
pub struct ProblemBuilder<'d> {
    domain: &'d Domain,
    name: String,
    objects: Vec<String>,
    object_index: HashMap<String, u32>,
    goals: Vec<GoalLiteral>,
    numeric_goals: Vec<NumericCondition>,
    init: State,
}

impl<'d> ProblemBuilder<'d> {
    pub fn new(domain: &'d Domain, name: impl Into<String>) -> Self {
        let mut builder = ProblemBuilder {
            domain,
            name: name.into(),
            objects: Vec::new(),
            object_index: HashMap::new(),
            goals: Vec::new(),
            numeric_goals: Vec::new(),
            init: State::new(),
        };
        for c in domain.constants() {
            builder.intern(c);
        }
        builder
    }

    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.object_index.get(name) {
            return id;
        }
        let id = self.objects.len() as u32;
        self.objects.push(name.to_string());
        self.object_index.insert(name.to_string(), id);
        id
    }

    /// Declares an object. Redeclaring a constant is allowed; redeclaring any
    /// other object is a duplicate.
    pub fn object(&mut self, name: &str) -> Result<u32> {
        if let Some(&id) = self.object_index.get(name) {
            if self.domain.constant_index(name).is_some() {
                return Ok(id);
            }
            return Err(Error::DuplicateSymbol(format!("object `{name}`")));
        }
        Ok(self.intern(name))
    }

    fn resolve_args(&self, symbol: &Symbol, args: &[&str]) -> Result<Vec<u32>> {
        if symbol.arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: symbol.name.clone(),
                expected: symbol.arity,
                found: args.len(),
            });
        }
        args.iter()
            .map(|a| {
                self.object_index
                    .get(*a)
                    .copied()
                    .ok_or_else(|| Error::UnknownSymbol(format!("object `{a}`")))
            })
            .collect()
    }

    pub fn proposition(&self, predicate: &str, args: &[&str]) -> Result<GroundAtom> {
        let idx = self
            .domain
            .predicate_index(predicate)
            .ok_or_else(|| Error::UnknownSymbol(format!("predicate `{predicate}`")))?;
        let args = self.resolve_args(&self.domain.predicates()[idx], args)?;
        Ok(GroundAtom::new(idx as u32, args))
    }

    pub fn variable(&self, function: &str, args: &[&str]) -> Result<GroundAtom> {
        let idx = self
            .domain
            .function_index(function)
            .ok_or_else(|| Error::UnknownSymbol(format!("function `{function}`")))?;
        let args = self.resolve_args(&self.domain.functions()[idx], args)?;
        Ok(GroundAtom::new(idx as u32, args))
    }

    pub fn init_proposition(&mut self, predicate: &str, args: &[&str]) -> Result<&mut Self> {
        let atom = self.proposition(predicate, args)?;
        self.init.add_proposition(atom);
        Ok(self)
    }

    pub fn init_fluent(&mut self, function: &str, args: &[&str], value: f64) -> Result<&mut Self> {
        let atom = self.variable(function, args)?;
        self.init.assign(atom, value)?;
        Ok(self)
    }

    pub fn goal(&mut self, predicate: &str, args: &[&str], positive: bool) -> Result<&mut Self> {
        let atom = self.proposition(predicate, args)?;
        self.goals.push(GoalLiteral { atom, positive });
        Ok(self)
    }

    /// Replaces the initial state built so far. Validated in [`build`](Self::build).
    pub fn set_initial_state(&mut self, state: State) -> &mut Self {
        self.init = state;
        self
    }

    pub fn numeric_goal(&mut self, condition: NumericCondition) -> &mut Self {
        self.numeric_goals.push(condition);
        self
    }

    /// Name-based state construction for this problem's objects.
    pub fn state_builder(&self) -> StateBuilder<'_, 'd> {
        StateBuilder {
            problem: self,
            state: State::new(),
        }
    }

    pub fn build(self) -> Result<Problem> {
        let problem = Problem {
            name: self.name,
            domain_name: self.domain.name.clone(),
            objects: self.objects,
            object_index: self.object_index,
            goals: self.goals,
            numeric_goals: self.numeric_goals,
            initial_state: self.init,
        };
        problem.check_state(self.domain, &problem.initial_state)?;
        Ok(problem)
    }
}

pub struct StateBuilder<'b, 'd> {
    problem: &'b ProblemBuilder<'d>,
    state: State,
}

impl StateBuilder<'_, '_> {
    pub fn proposition(&mut self, predicate: &str, args: &[&str]) -> Result<&mut Self> {
        let atom = self.problem.proposition(predicate, args)?;
        self.state.add_proposition(atom);
        Ok(self)
    }

    pub fn fluent(&mut self, function: &str, args: &[&str], value: f64) -> Result<&mut Self> {
        let atom = self.problem.variable(function, args)?;
        self.state.assign(atom, value)?;
        Ok(self)
    }

    pub fn build(self) -> State {
        self.state
    }
}

/// Resolves names against an already built problem.
pub fn resolve_proposition(
    domain: &Domain,
    problem: &Problem,
    predicate: &str,
    args: &[&str],
) -> Result<GroundAtom> {
    resolve(domain.predicates(), "predicate", problem, predicate, args)
}

pub fn resolve_variable(
    domain: &Domain,
    problem: &Problem,
    function: &str,
    args: &[&str],
) -> Result<GroundAtom> {
    resolve(domain.functions(), "function", problem, function, args)
}

fn resolve(
    symbols: &[Symbol],
    kind: &str,
    problem: &Problem,
    name: &str,
    args: &[&str],
) -> Result<GroundAtom> {
    let idx = symbols
        .iter()
        .position(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSymbol(format!("{kind} `{name}`")))?;
    if symbols[idx].arity != args.len() {
        return Err(Error::ArityMismatch {
            symbol: name.to_string(),
            expected: symbols[idx].arity,
            found: args.len(),
        });
    }
    let args = args
        .iter()
        .map(|a| {
            problem
                .object_id(a)
                .ok_or_else(|| Error::UnknownSymbol(format!("object `{a}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundAtom::new(idx as u32, args))
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
