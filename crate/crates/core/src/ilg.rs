//! Numeric instance learning graphs (νILG).
//!
//! One node per object, per true proposition or propositional goal, per
//! assigned numeric variable, and per numeric goal condition. Atom nodes link to
//! their arguments (label = 1-based position); numeric goal nodes link to the
//! variables in their expression (label 0).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};
use crate::pddl::expr_to_pddl;
use crate::task_model::{Comparator, Domain, GroundAtom, Problem, State};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropositionStatus {
    /// True and a goal.
    AchievedGoal,
    /// A goal that does not hold.
    UnachievedGoal,
    /// True but not a goal.
    AchievedNonGoal,
}

impl PropositionStatus {
    const ALL: [PropositionStatus; 3] = [
        PropositionStatus::AchievedGoal,
        PropositionStatus::UnachievedGoal,
        PropositionStatus::AchievedNonGoal,
    ];

    fn offset(self) -> u32 {
        self as u32
    }

    pub fn tag(self) -> &'static str {
        match self {
            PropositionStatus::AchievedGoal => "apg",
            PropositionStatus::UnachievedGoal => "upg",
            PropositionStatus::AchievedNonGoal => "apn",
        }
    }
}

/// Categorical feature of a νILG node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeColour {
    Object,
    Constant(String),
    Proposition(String, PropositionStatus),
    Function(String),
    NumericGoal(Comparator, bool),
}

impl fmt::Display for NodeColour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeColour::Object => f.write_str("object"),
            NodeColour::Constant(c) => write!(f, "const({c})"),
            NodeColour::Proposition(p, s) => write!(f, "pred({p},{})", s.tag()),
            NodeColour::Function(fun) => write!(f, "func({fun})"),
            NodeColour::NumericGoal(c, achieved) => {
                write!(f, "goal({c},{})", if *achieved { "ang" } else { "ung" })
            }
        }
    }
}

/// The enumeration of categorical node features for one domain:
/// `object`, each constant, `(P, apg) (P, upg) (P, apn)` per predicate, each
/// function, then `(⊵, ung) (⊵, ang)` for `⊵` in `>=, >, =`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourTable {
    colours: Vec<NodeColour>,
    num_constants: u32,
    num_predicates: u32,
    num_functions: u32,
}

impl ColourTable {
    pub fn for_domain(domain: &Domain) -> Self {
        let mut colours = vec![NodeColour::Object];
        colours.extend(domain.constants().iter().cloned().map(NodeColour::Constant));
        for p in domain.predicates() {
            for s in PropositionStatus::ALL {
                colours.push(NodeColour::Proposition(p.name.clone(), s));
            }
        }
        colours.extend(
            domain
                .functions()
                .iter()
                .map(|f| NodeColour::Function(f.name.clone())),
        );
        for c in Comparator::ALL {
            colours.push(NodeColour::NumericGoal(c, false));
            colours.push(NodeColour::NumericGoal(c, true));
        }
        ColourTable {
            colours,
            num_constants: domain.constants().len() as u32,
            num_predicates: domain.predicates().len() as u32,
            num_functions: domain.functions().len() as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colours(&self) -> &[NodeColour] {
        &self.colours
    }

    pub fn get(&self, id: Colour) -> Option<&NodeColour> {
        self.colours.get(id as usize)
    }

    /// Readable name for DOT output; ids past the table are shown raw.
    pub fn describe(&self, id: Colour) -> String {
        match self.get(id) {
            Some(c) => c.to_string(),
            None => format!("#{id}"),
        }
    }

    pub fn object(&self) -> Colour {
        0
    }

    pub fn constant(&self, index: usize) -> Colour {
        1 + index as u32
    }

    pub fn proposition(&self, predicate: u32, status: PropositionStatus) -> Colour {
        1 + self.num_constants + 3 * predicate + status.offset()
    }

    pub fn function(&self, function: u32) -> Colour {
        1 + self.num_constants + 3 * self.num_predicates + function
    }

    pub fn numeric_goal(&self, comparator: Comparator, achieved: bool) -> Colour {
        let c = Comparator::ALL
            .iter()
            .position(|&x| x == comparator)
            .unwrap() as u32;
        1 + self.num_constants
            + 3 * self.num_predicates
            + self.num_functions
            + 2 * c
            + achieved as u32
    }
}

#[derive(Debug, Clone)]
struct Layout {
    problem: Problem,
    object_colours: Vec<Colour>,
    /// Distinct goal atoms in goal order, with all literal signs on each.
    goal_atoms: Vec<(GroundAtom, Vec<bool>)>,
    goal_index: HashMap<GroundAtom, usize>,
}

/// Turns `(problem, state)` pairs of one domain into νILGs.
#[derive(Debug, Clone)]
pub struct IlgGenerator {
    domain: Domain,
    table: ColourTable,
    layout: Option<Layout>,
    node_budget: usize,
}

impl IlgGenerator {
    pub fn new(domain: Domain) -> Self {
        let table = ColourTable::for_domain(&domain);
        IlgGenerator {
            domain,
            table,
            layout: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn with_node_budget(mut self, budget: usize) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn colour_table(&self) -> &ColourTable {
        &self.table
    }

    pub fn problem(&self) -> Option<&Problem> {
        self.layout.as_ref().map(|l| &l.problem)
    }

    /// Fixes the object and goal layout used by later [`to_graph`](Self::to_graph) calls.
    pub fn set_problem(&mut self, problem: &Problem) -> Result<()> {
        if problem.domain_name != self.domain.name {
            return Err(Error::DomainMismatch {
                expected: self.domain.name.clone(),
                found: problem.domain_name.clone(),
            });
        }
        let object_colours = problem
            .objects()
            .iter()
            .map(|o| match self.domain.constant_index(o) {
                Some(i) => self.table.constant(i),
                None => self.table.object(),
            })
            .collect();
        let mut goal_atoms: Vec<(GroundAtom, Vec<bool>)> = Vec::new();
        let mut goal_index: HashMap<GroundAtom, usize> = HashMap::new();
        for g in problem.goals() {
            match goal_index.get(&g.atom) {
                Some(&i) => goal_atoms[i].1.push(g.positive),
                None => {
                    goal_index.insert(g.atom.clone(), goal_atoms.len());
                    goal_atoms.push((g.atom.clone(), vec![g.positive]));
                }
            }
        }
        self.layout = Some(Layout {
            problem: problem.clone(),
            object_colours,
            goal_atoms,
            goal_index,
        });
        Ok(())
    }

    fn status(holds: bool, signs: Option<&Vec<bool>>) -> PropositionStatus {
        match signs {
            None => PropositionStatus::AchievedNonGoal,
            // negative literals are achieved when the atom is false
            Some(signs) if signs.iter().all(|&pos| pos == holds) => PropositionStatus::AchievedGoal,
            Some(_) => PropositionStatus::UnachievedGoal,
        }
    }

    /// Builds the νILG of the current problem in `state`.
    pub fn to_graph(&self, state: &State) -> Result<Graph> {
        let layout = self.layout.as_ref().ok_or(Error::ProblemNotSet)?;
        let problem = &layout.problem;
        problem.check_state(&self.domain, state)?;

        let extra_goal_atoms = layout
            .goal_atoms
            .iter()
            .filter(|(a, _)| !state.holds(a))
            .count();
        let node_count = layout.object_colours.len()
            + state.num_propositions()
            + extra_goal_atoms
            + state.num_fluents()
            + problem.numeric_goals().len();
        if node_count > self.node_budget {
            return Err(Error::NodeBudgetExceeded {
                needed: node_count,
                budget: self.node_budget,
            });
        }

        let mut categorical = Vec::with_capacity(node_count);
        let mut continuous = Vec::with_capacity(node_count);
        let mut names = Vec::with_capacity(node_count);
        let mut edges = Vec::new();

        for (o, &c) in layout.object_colours.iter().enumerate() {
            categorical.push(c);
            continuous.push(0.0);
            names.push(problem.objects()[o].clone());
        }

        let preds = self.domain.predicates();
        let mut add_atom = |atom: &GroundAtom, colour: Colour, value: f64, name: String| {
            let node = categorical.len();
            categorical.push(colour);
            continuous.push(value);
            names.push(name);
            for (i, &o) in atom.args.iter().enumerate() {
                edges.push((node, o as usize, i as u32 + 1));
            }
            node
        };

        for atom in state.propositions() {
            let signs = layout
                .goal_index
                .get(atom)
                .map(|&i| &layout.goal_atoms[i].1);
            let status = Self::status(true, signs);
            let colour = self.table.proposition(atom.symbol, status);
            add_atom(atom, colour, 0.0, problem.display_atom(preds, atom));
        }
        for (atom, signs) in &layout.goal_atoms {
            if state.holds(atom) {
                continue;
            }
            let colour = self
                .table
                .proposition(atom.symbol, Self::status(false, Some(signs)));
            add_atom(atom, colour, 0.0, problem.display_atom(preds, atom));
        }

        let funcs = self.domain.functions();
        let mut variable_nodes = HashMap::with_capacity(state.num_fluents());
        for (atom, value) in state.fluents() {
            let node = add_atom(
                atom,
                self.table.function(atom.symbol),
                value,
                problem.display_atom(funcs, atom),
            );
            variable_nodes.insert(atom, node);
        }

        for cond in problem.numeric_goals() {
            let value = cond.expression.evaluate(state)?;
            let achieved = cond.comparator.holds(value);
            let node = categorical.len();
            categorical.push(self.table.numeric_goal(cond.comparator, achieved));
            continuous.push(if achieved { 0.0 } else { value });
            names.push(format!(
                "({} {} 0)",
                cond.comparator,
                expr_to_pddl(&self.domain, problem, &cond.expression)
            ));
            for var in cond.expression.variables() {
                edges.push((node, variable_nodes[var], 0));
            }
        }

        Graph::from_edges(categorical, continuous, &edges)?.with_names(names)
    }
}
