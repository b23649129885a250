//! Term evaluation and exhaustive identity checking on a finite algebra.

use std::fmt;

use itertools::Itertools;
use smallvec::SmallVec;
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::term::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown operation symbol `{0}`")]
    UnknownOperation(String),
    #[error("operation `{op}` has arity {expected} but is applied to {got} arguments")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },
    #[error("variable x{0} is not assigned")]
    UnassignedVariable(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("parameters out of range (n = {n}, m = {m}): {reason}")]
    ParameterRange {
        n: usize,
        m: usize,
        reason: &'static str,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Values of `x1..xn`, stored 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<Element>);

impl Assignment {
    pub fn get(&self, var: usize) -> Option<Element> {
        var.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A term with operation symbols resolved against one algebra.
#[derive(Debug, Clone)]
pub struct CompiledTerm<'a> {
    alg: &'a FiniteAlgebra,
    root: Node,
    max_var: usize,
}

#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    App(usize, Vec<Node>),
}

fn compile_node(alg: &FiniteAlgebra, t: &Term) -> Result<Node, EvalError> {
    match t {
        Term::Var(i) => Ok(Node::Var(*i)),
        Term::App(name, children) => {
            let idx = alg
                .operation_index(name)
                .ok_or_else(|| EvalError::UnknownOperation(name.clone()))?;
            let expected = alg.operations()[idx].arity();
            if expected != children.len() {
                return Err(EvalError::ArityMismatch {
                    op: name.clone(),
                    expected,
                    got: children.len(),
                });
            }
            let kids = children
                .iter()
                .map(|c| compile_node(alg, c))
                .collect::<Result<_, _>>()?;
            Ok(Node::App(idx, kids))
        }
    }
}

impl<'a> CompiledTerm<'a> {
    pub fn new(alg: &'a FiniteAlgebra, t: &Term) -> Result<Self, EvalError> {
        Ok(CompiledTerm {
            alg,
            root: compile_node(alg, t)?,
            max_var: t.max_var(),
        })
    }

    pub fn max_var(&self) -> usize {
        self.max_var
    }

    /// Evaluates with `values[i - 1]` as the value of `x_i`. The caller guarantees that
    /// `values` covers every variable of the term.
    pub fn eval(&self, values: &[Element]) -> Element {
        self.eval_node(&self.root, values)
    }

    fn eval_node(&self, node: &Node, values: &[Element]) -> Element {
        match node {
            Node::Var(i) => values[i - 1],
            Node::App(op, kids) => {
                let args: SmallVec<[Element; 8]> =
                    kids.iter().map(|k| self.eval_node(k, values)).collect();
                self.alg.apply(*op, &args)
            }
        }
    }

    /// Applies the term coordinatewise to tuples: `x_i` ranges over `inputs[i - 1]`.
    pub fn eval_columns(&self, inputs: &[Vec<Element>]) -> Vec<Element> {
        let len = inputs.first().map_or(0, Vec::len);
        let mut row = vec![0; inputs.len()];
        (0..len)
            .map(|c| {
                for (slot, col) in row.iter_mut().zip(inputs) {
                    *slot = col[c];
                }
                self.eval(&row)
            })
            .collect()
    }
}

/// Value of `t` under `sigma`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, sigma: &Assignment) -> Result<Element, EvalError> {
    let compiled = CompiledTerm::new(alg, t)?;
    if compiled.max_var() > sigma.len() {
        return Err(EvalError::UnassignedVariable(sigma.len() + 1));
    }
    Ok(compiled.eval(&sigma.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityVerdict {
    Pass,
    Fail {
        assignment: Assignment,
        lhs: Element,
        rhs: Element,
    },
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityVerdict::Pass)
    }
}

/// Every assignment of `0..size` to `nvars` variables, lexicographic with `x1` slowest.
pub(crate) fn assignments(size: usize, nvars: usize) -> impl Iterator<Item = Vec<Element>> {
    (0..nvars)
        .map(|_| 0..size as Element)
        .multi_cartesian_product()
}

/// Checks `lhs = rhs` under all `size^nvars` assignments and returns the first failure.
pub fn check_identity(
    alg: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
    nvars: usize,
) -> Result<IdentityVerdict, EvalError> {
    let l = CompiledTerm::new(alg, lhs)?;
    let r = CompiledTerm::new(alg, rhs)?;
    let needed = l.max_var().max(r.max_var());
    if needed > nvars {
        return Err(EvalError::UnassignedVariable(needed));
    }
    for values in assignments(alg.size(), nvars) {
        let (lv, rv) = (l.eval(&values), r.eval(&values));
        if lv != rv {
            return Ok(IdentityVerdict::Fail {
                assignment: Assignment(values),
                lhs: lv,
                rhs: rv,
            });
        }
    }
    Ok(IdentityVerdict::Pass)
}

/// A failed instance of a two-value majority equation: positions in `pattern` (1-indexed)
/// carry `a`, all others carry `b`, and the term returned `got` instead of `want`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MajorityCounterexample {
    pub pattern: Vec<usize>,
    pub a: Element,
    pub b: Element,
    pub got: Element,
    pub want: Element,
}

impl MajorityCounterexample {
    /// The argument tuple the counterexample describes.
    pub fn arguments(&self, n: usize) -> Vec<Element> {
        pattern_arguments(n, &self.pattern, self.a, self.b)
    }
}

impl fmt::Display for MajorityCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "J={{{}}} a={} b={} got={} want={}",
            self.pattern.iter().join(","),
            self.a,
            self.b,
            self.got,
            self.want
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MajorityVerdict {
    Pass,
    Fail(MajorityCounterexample),
}

impl MajorityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MajorityVerdict::Pass)
    }

    pub fn counterexample(&self) -> Option<&MajorityCounterexample> {
        match self {
            MajorityVerdict::Pass => None,
            MajorityVerdict::Fail(c) => Some(c),
        }
    }
}

pub(crate) fn pattern_arguments(
    n: usize,
    pattern: &[usize],
    a: Element,
    b: Element,
) -> Vec<Element> {
    let mut args = vec![b; n];
    for &j in pattern {
        args[j - 1] = a;
    }
    args
}

/// Checks `u(args) = a` for every given pattern `J` and every pair `(a, b)`, where `args` has
/// `a` at the positions of `J` and `b` elsewhere. Pairs run lexicographically (`a` slowest)
/// within each pattern; the first failure is returned.
pub fn check_majority_patterns<I>(
    alg: &FiniteAlgebra,
    u: &Term,
    n: usize,
    patterns: I,
) -> Result<MajorityVerdict, CheckError>
where
    I: IntoIterator<Item = Vec<usize>>,
{
    let compiled = CompiledTerm::new(alg, u)?;
    if compiled.max_var() > n {
        return Err(EvalError::UnassignedVariable(compiled.max_var()).into());
    }
    let size = alg.size() as Element;
    for pattern in patterns {
        for a in 0..size {
            for b in 0..size {
                let args = pattern_arguments(n, &pattern, a, b);
                let got = compiled.eval(&args);
                if got != a {
                    return Ok(MajorityVerdict::Fail(MajorityCounterexample {
                        pattern,
                        a,
                        b,
                        got,
                        want: a,
                    }));
                }
            }
        }
    }
    Ok(MajorityVerdict::Pass)
}

/// All `m`-subsets of `1..=n` in lexicographic order.
pub fn patterns(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(m)
}

/// Exact-`m`-majority check for an `n`-ary term: whenever exactly `m` arguments equal `a` and
/// the rest equal `b`, the result must be `a`. Pairs with `a = b` are included, so idempotence
/// is part of the check and `m = n` is exactly idempotence.
pub fn check_exact_majority(
    alg: &FiniteAlgebra,
    u: &Term,
    n: usize,
    m: usize,
) -> Result<MajorityVerdict, CheckError> {
    if m == 0 || m > n {
        return Err(CheckError::ParameterRange {
            n,
            m,
            reason: "need 1 <= m <= n",
        });
    }
    check_majority_patterns(alg, u, n, patterns(n, m))
}

/// Non-exact `m`-majority check: the same equations for every pattern of size at least `m`.
/// Only defined for `n/2 < m <= n`. Patterns run by size, then lexicographically.
pub fn check_m_majority(
    alg: &FiniteAlgebra,
    u: &Term,
    n: usize,
    m: usize,
) -> Result<MajorityVerdict, CheckError> {
    if m > n || 2 * m <= n {
        return Err(CheckError::ParameterRange {
            n,
            m,
            reason: "need n/2 < m <= n",
        });
    }
    check_majority_patterns(alg, u, n, (m..=n).flat_map(move |s| patterns(n, s)))
}
