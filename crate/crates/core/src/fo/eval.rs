//! Tarskian satisfaction by structural recursion.
//!
//! Formulas are compiled against a structure first: variables become slot
//! indices and relations become lookup tables. Quantified subformulas are
//! memoized on the values of their free slots.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::structure::{FiniteStructure, Relation};
use super::syntax::{Formula, PartitionedFormula};
use crate::error::{invalid, Error, Result};

/// Dense tables are used up to this many cells.
const DENSE_TABLE_LIMIT: usize = 1 << 22;

enum Table {
    Dense(Vec<bool>),
    Sparse(BTreeSet<Vec<usize>>),
}

enum Node {
    Atom { table: usize, args: Vec<usize> },
    Equal(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant {
        id: usize,
        universal: bool,
        slot: usize,
        free: Vec<usize>,
        body: Box<Node>,
    },
}

/// A formula compiled against one structure.
pub struct Evaluator<'a> {
    structure: &'a FiniteStructure,
    formula: &'a PartitionedFormula,
    root: Node,
    tables: Vec<Table>,
    slots: usize,
    memo: BTreeMap<(usize, Vec<usize>), bool>,
}

struct Compiler<'a> {
    structure: &'a FiniteStructure,
    tables: Vec<Table>,
    table_ids: BTreeMap<String, usize>,
    scope: Vec<(String, usize)>,
    slots: usize,
    quantifiers: usize,
}

impl Compiler<'_> {
    fn lookup(&self, var: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == var)
            .map(|&(_, slot)| slot)
            .ok_or_else(|| Error::Eval(format!("variable {var} is not bound")))
    }

    fn table(&mut self, name: &str, arity: usize) -> Result<usize> {
        let relation: &Relation = self
            .structure
            .relation(name)
            .ok_or_else(|| Error::Eval(format!("unknown relation {name}")))?;
        if relation.arity != arity {
            return Err(Error::Eval(format!(
                "relation {name} has arity {} but is applied to {arity} arguments",
                relation.arity
            )));
        }
        if let Some(&id) = self.table_ids.get(name) {
            return Ok(id);
        }
        let n = self.structure.universe_size();
        let cells = (0..arity).try_fold(1usize, |acc, _| acc.checked_mul(n));
        let table = match cells {
            Some(cells) if cells <= DENSE_TABLE_LIMIT => {
                let mut dense = vec![false; cells];
                for t in &relation.tuples {
                    dense[t.iter().fold(0, |acc, &e| acc * n + e)] = true;
                }
                Table::Dense(dense)
            }
            _ => Table::Sparse(relation.tuples.clone()),
        };
        let id = self.tables.len();
        self.tables.push(table);
        self.table_ids.insert(name.into(), id);
        Ok(id)
    }

    /// Returns the node and the set of slots it reads freely.
    fn compile(&mut self, f: &Formula) -> Result<(Node, BTreeSet<usize>)> {
        let pair = |a: &mut Self, x: &Formula, y: &Formula| -> Result<(Box<Node>, Box<Node>, BTreeSet<usize>)> {
            let (l, mut fl) = a.compile(x)?;
            let (r, fr) = a.compile(y)?;
            fl.extend(fr);
            Ok((Box::new(l), Box::new(r), fl))
        };
        Ok(match f {
            Formula::Atom { relation, args } => {
                let table = self.table(relation, args.len())?;
                let args = args.iter().map(|a| self.lookup(a)).collect::<Result<Vec<_>>>()?;
                let free = args.iter().copied().collect();
                (Node::Atom { table, args }, free)
            }
            Formula::Equal(a, b) => {
                let (a, b) = (self.lookup(a)?, self.lookup(b)?);
                (Node::Equal(a, b), [a, b].into_iter().collect())
            }
            Formula::Not(inner) => {
                let (n, free) = self.compile(inner)?;
                (Node::Not(Box::new(n)), free)
            }
            Formula::And(x, y) => {
                let (l, r, free) = pair(self, x, y)?;
                (Node::And(l, r), free)
            }
            Formula::Or(x, y) => {
                let (l, r, free) = pair(self, x, y)?;
                (Node::Or(l, r), free)
            }
            Formula::Implies(x, y) => {
                let (l, r, free) = pair(self, x, y)?;
                (Node::Implies(l, r), free)
            }
            Formula::Iff(x, y) => {
                let (l, r, free) = pair(self, x, y)?;
                (Node::Iff(l, r), free)
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let (body, mut free) = self.compile(body)?;
                self.scope.pop();
                free.remove(&slot);
                let id = self.quantifiers;
                self.quantifiers += 1;
                let node = Node::Quant {
                    id,
                    universal: matches!(f, Formula::Forall(..)),
                    slot,
                    free: free.iter().copied().collect(),
                    body: Box::new(body),
                };
                (node, free)
            }
        })
    }
}

impl<'a> Evaluator<'a> {
    /// Resolves relations and variables; unknown relations and arity
    /// mismatches are reported here.
    pub fn new(structure: &'a FiniteStructure, formula: &'a PartitionedFormula) -> Result<Self> {
        let mut compiler = Compiler {
            structure,
            tables: Vec::new(),
            table_ids: BTreeMap::new(),
            scope: Vec::new(),
            slots: 0,
            quantifiers: 0,
        };
        for v in formula.x_vars.iter().chain(formula.y_vars.iter()) {
            let slot = compiler.slots;
            compiler.scope.push((v.clone(), slot));
            compiler.slots += 1;
        }
        let (root, _) = compiler.compile(&formula.ast)?;
        Ok(Evaluator {
            structure,
            formula,
            root,
            tables: compiler.tables,
            slots: compiler.slots,
            memo: BTreeMap::new(),
        })
    }

    /// Truth of `phi(a; b)`.
    pub fn eval(&mut self, a: &[usize], b: &[usize]) -> Result<bool> {
        if a.len() != self.formula.x_vars.len() || b.len() != self.formula.y_vars.len() {
            return Err(invalid!(
                "expected {} object and {} parameter values, got {} and {}",
                self.formula.x_vars.len(),
                self.formula.y_vars.len(),
                a.len(),
                b.len()
            ));
        }
        let n = self.structure.universe_size();
        if let Some(&bad) = a.iter().chain(b.iter()).find(|&&e| e >= n) {
            return Err(invalid!("element {bad} is outside the universe 0..{n}"));
        }
        let mut env = vec![0usize; self.slots];
        env[..a.len()].copy_from_slice(a);
        env[a.len()..a.len() + b.len()].copy_from_slice(b);
        let root = core::mem::replace(&mut self.root, Node::Equal(0, 0));
        let result = self.sat(&root, &mut env);
        self.root = root;
        Ok(result)
    }

    fn sat(&mut self, node: &Node, env: &mut Vec<usize>) -> bool {
        match node {
            Node::Atom { table, args } => match &self.tables[*table] {
                Table::Dense(cells) => {
                    let n = self.structure.universe_size();
                    cells[args.iter().fold(0, |acc, &s| acc * n + env[s])]
                }
                Table::Sparse(set) => {
                    let tuple: Vec<usize> = args.iter().map(|&s| env[s]).collect();
                    set.contains(&tuple)
                }
            },
            Node::Equal(a, b) => env[*a] == env[*b],
            Node::Not(inner) => !self.sat(inner, env),
            Node::And(l, r) => self.sat(l, env) && self.sat(r, env),
            Node::Or(l, r) => self.sat(l, env) || self.sat(r, env),
            Node::Implies(l, r) => !self.sat(l, env) || self.sat(r, env),
            Node::Iff(l, r) => self.sat(l, env) == self.sat(r, env),
            Node::Quant {
                id,
                universal,
                slot,
                free,
                body,
            } => {
                let key = (*id, free.iter().map(|&s| env[s]).collect::<Vec<_>>());
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let saved = env[*slot];
                let mut result = *universal;
                for e in 0..self.structure.universe_size() {
                    env[*slot] = e;
                    if self.sat(body, env) != *universal {
                        result = !*universal;
                        break;
                    }
                }
                env[*slot] = saved;
                self.memo.insert(key, result);
                result
            }
        }
    }
}

/// Truth of `phi(a; b)` in `structure`.
pub fn evaluate(
    structure: &FiniteStructure,
    formula: &PartitionedFormula,
    a: &[usize],
    b: &[usize],
) -> Result<bool> {
    Evaluator::new(structure, formula)?.eval(a, b)
}
