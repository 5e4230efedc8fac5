//! Random domains, tasks, states and graphs for benchmarks and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Colour, Graph};
use crate::task_model::{
    BinaryOp, Comparator, Domain, Expr, GroundAtom, NumericCondition, Problem, ProblemBuilder,
    State, Symbol,
};

/// Size knobs for [`random_task`].
#[derive(Debug, Clone, Copy)]
pub struct TaskShape {
    pub predicates: usize,
    pub functions: usize,
    pub constants: usize,
    pub objects: usize,
    pub goals: usize,
    pub numeric_goals: usize,
}

impl Default for TaskShape {
    fn default() -> Self {
        TaskShape {
            predicates: 3,
            functions: 2,
            constants: 1,
            objects: 5,
            goals: 3,
            numeric_goals: 1,
        }
    }
}

pub fn random_domain<R: Rng + ?Sized>(rng: &mut R, shape: &TaskShape) -> Domain {
    let predicates = (0..shape.predicates)
        .map(|i| Symbol::new(format!("p{i}"), rng.gen_range(0..=3)))
        .collect();
    let functions = (0..shape.functions)
        .map(|i| Symbol::new(format!("f{i}"), rng.gen_range(0..=2)))
        .collect();
    let constants = (0..shape.constants).map(|i| format!("k{i}")).collect();
    Domain::new("synth", predicates, functions, constants).expect("generated names are distinct")
}

fn random_atom<R: Rng + ?Sized>(rng: &mut R, symbols: &[Symbol], objects: usize) -> GroundAtom {
    let s = rng.gen_range(0..symbols.len());
    let args = (0..symbols[s].arity)
        .map(|_| rng.gen_range(0..objects) as u32)
        .collect();
    GroundAtom::new(s as u32, args)
}

fn random_expr<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &Domain,
    objects: usize,
    depth: usize,
) -> Expr {
    if depth == 0 || rng.gen_bool(0.5) {
        return Expr::Var(random_atom(rng, domain.functions(), objects));
    }
    let op = *[BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul]
        .choose(rng)
        .expect("non-empty");
    let lhs = random_expr(rng, domain, objects, depth - 1);
    let rhs = if rng.gen_bool(0.5) {
        Expr::Const(rng.gen_range(-5..=5) as f64)
    } else {
        random_expr(rng, domain, objects, depth - 1)
    };
    Expr::binary(op, lhs, rhs)
}

/// A problem over `domain` whose initial state is a random state.
pub fn random_problem<R: Rng + ?Sized>(rng: &mut R, domain: &Domain, shape: &TaskShape) -> Problem {
    let mut b = ProblemBuilder::new(domain, "synth");
    for i in 0..shape.objects {
        b.object(&format!("o{i}")).expect("fresh object");
    }
    let objects = domain.constants().len() + shape.objects;
    let mut goals = Vec::new();
    let mut conditions = Vec::new();
    if objects > 0 && !domain.predicates().is_empty() {
        for _ in 0..shape.goals {
            let atom = random_atom(rng, domain.predicates(), objects);
            let names: Vec<String> = atom.args.iter().map(|&a| object_name(domain, a)).collect();
            let args: Vec<&str> = names.iter().map(String::as_str).collect();
            let name = &domain.predicates()[atom.symbol as usize].name;
            b.goal(name, &args, rng.gen_bool(0.8)).expect("valid goal");
            goals.push(atom);
        }
    }
    if objects > 0 && !domain.functions().is_empty() {
        for _ in 0..shape.numeric_goals {
            let expr = random_expr(rng, domain, objects, 2);
            let cmp = *Comparator::ALL.choose(rng).expect("non-empty");
            let condition = NumericCondition::new(expr, cmp);
            conditions.push(condition.clone());
            b.numeric_goal(condition);
        }
    }
    b.set_initial_state(fill_state(rng, domain, objects, &goals, &conditions));
    b.build().expect("goal fluents are assigned")
}

fn object_name(domain: &Domain, id: u32) -> String {
    let k = domain.constants().len() as u32;
    if id < k {
        domain.constants()[id as usize].clone()
    } else {
        format!("o{}", id - k)
    }
}

/// A state assigning every goal fluent plus random extra atoms.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, domain: &Domain, problem: &Problem) -> State {
    let goals: Vec<GroundAtom> = problem.goals().iter().map(|g| g.atom.clone()).collect();
    fill_state(
        rng,
        domain,
        problem.objects().len(),
        &goals,
        problem.numeric_goals(),
    )
}

fn fill_state<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &Domain,
    objects: usize,
    goals: &[GroundAtom],
    conditions: &[NumericCondition],
) -> State {
    let mut state = State::new();
    if objects == 0 {
        return state;
    }
    for atom in goals {
        if rng.gen_bool(0.5) {
            state.add_proposition(atom.clone());
        }
    }
    if !domain.predicates().is_empty() {
        for _ in 0..rng.gen_range(0..=2 * objects) {
            state.add_proposition(random_atom(rng, domain.predicates(), objects));
        }
    }
    let assign = |rng: &mut R, state: &mut State, atom: &GroundAtom| {
        if state.value(atom).is_none() {
            let x = rng.gen_range(-3..=6) as f64;
            state.assign(atom.clone(), x).expect("unassigned");
        }
    };
    for condition in conditions {
        for v in condition.expression.variables() {
            assign(rng, &mut state, v);
        }
    }
    if !domain.functions().is_empty() {
        for _ in 0..rng.gen_range(0..=objects) {
            let atom = random_atom(rng, domain.functions(), objects);
            assign(rng, &mut state, &atom);
        }
    }
    state
}

/// Domain, problem and `states` random states of that problem.
pub fn random_task<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &TaskShape,
    states: usize,
) -> (Domain, Problem, Vec<State>) {
    let domain = random_domain(rng, shape);
    let problem = random_problem(rng, &domain, shape);
    let states = (0..states)
        .map(|_| random_state(rng, &domain, &problem))
        .collect();
    (domain, problem, states)
}

/// An undirected graph with `n` nodes, colours in `0..colours` and roughly
/// `degree * n / 2` edges with labels in `0..labels`.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    colours: Colour,
    labels: u32,
    degree: f64,
) -> Graph {
    let categorical = (0..n).map(|_| rng.gen_range(0..colours)).collect();
    let continuous = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                rng.gen_range(-4..=4) as f64
            } else {
                0.0
            }
        })
        .collect();
    let mut g = Graph::new(categorical, continuous).expect("lengths agree");
    if n < 2 {
        return g;
    }
    let p = (degree / (n - 1) as f64).clamp(0.0, 1.0);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v, rng.gen_range(0..labels))
                    .expect("fresh edge");
            }
        }
    }
    g
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
