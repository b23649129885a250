//! Explicit term constructions around exact-majority terms.
//!
//! Derived terms are built by substituting variables into `u`, so each of them is `u` applied
//! to exactly `n` variables. Slot layouts read left to right: x-blocks, then y, then z.
//! Flat sums, meets and joins are left-nested.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, FiniteAlgebra, Operation};
use crate::check::{
    check_identity, check_m_majority, Assignment, CheckError, EvalError, MajorityVerdict,
};
use crate::term::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("Maltsev derivation needs 2m < n, got n = {n}, m = {m} (n - 2m = {})", *n as isize - 2 * *m as isize)]
    MaltsevRange { n: usize, m: usize },
    #[error("need n/2 < m <= n, got n = {n}, m = {m} (2m = {} vs n = {n})", 2 * m)]
    AboveHalf { n: usize, m: usize },
    #[error("collapse factor k = {k} must divide both m = {m} (m mod k = {}) and n = {n} (n mod k = {})", if *k == 0 { 0 } else { m % k }, if *k == 0 { 0 } else { n % k })]
    Collapse { n: usize, m: usize, k: usize },
    #[error("near-unanimity derivation needs 0 < n - m dividing n, got n = {n}, m = {m}")]
    NearUnanimity { n: usize, m: usize },
    #[error("need 1 <= m <= n, got n = {n}, m = {m}")]
    Range { n: usize, m: usize },
    #[error(
        "group sum term needs h*m = 1 (mod q): h*m = {product}, {product} mod {q} = {residue}"
    )]
    GroupCongruence {
        product: usize,
        q: usize,
        residue: usize,
    },
    #[error("group sum term needs h, m, q >= 1 (h = {h}, m = {m}, q = {q})")]
    GroupParams { h: usize, m: usize, q: usize },
    #[error("generic operation needs m != n/2 on a universe with two or more elements (n = {n}, m = {m})")]
    HalfOnNontrivial { n: usize, m: usize },
    #[error("anchor {anchor} is outside the universe of size {size}")]
    Anchor { anchor: Element, size: usize },
    #[error("input term is not a non-exact {m}-majority term of arity {n}: {verdict}")]
    NotMMajority { n: usize, m: usize, verdict: String },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn range(n: usize, m: usize) -> Result<(), ConstructionError> {
    if m == 0 || m > n {
        return Err(ConstructionError::Range { n, m });
    }
    Ok(())
}

fn repeated(var: usize, times: usize) -> impl Iterator<Item = usize> {
    std::iter::repeat_n(var, times)
}

/// `t(x, y, z) = u(x^m, y^(n-2m), z^m)`.
pub fn maltsev_slots(n: usize, m: usize) -> Result<Vec<usize>, ConstructionError> {
    range(n, m)?;
    if 2 * m >= n {
        return Err(ConstructionError::MaltsevRange { n, m });
    }
    Ok(repeated(1, m)
        .chain(repeated(2, n - 2 * m))
        .chain(repeated(3, m))
        .collect())
}

pub fn derive_maltsev(u: &Term, n: usize, m: usize) -> Result<Term, ConstructionError> {
    Ok(u.with_slots(&maltsev_slots(n, m)?))
}

/// An equation between two terms, with a human label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteVerdict {
    Pass,
    Fail {
        identity: String,
        assignment: Assignment,
        lhs: Element,
        rhs: Element,
    },
}

impl SuiteVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SuiteVerdict::Pass)
    }
}

impl fmt::Display for SuiteVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteVerdict::Pass => write!(f, "pass"),
            SuiteVerdict::Fail {
                identity,
                assignment,
                lhs,
                rhs,
            } => write!(f, "FAIL {identity} at (x,y,z)={assignment}: {lhs} != {rhs}"),
        }
    }
}

/// Checks every identity exhaustively over three variables, stopping at the first failure.
pub fn check_suite(
    alg: &FiniteAlgebra,
    identities: &[Identity],
) -> Result<SuiteVerdict, EvalError> {
    for id in identities {
        let nvars = id.lhs.max_var().max(id.rhs.max_var()).max(3);
        if let crate::check::IdentityVerdict::Fail {
            assignment,
            lhs,
            rhs,
        } = check_identity(alg, &id.lhs, &id.rhs, nvars)?
        {
            return Ok(SuiteVerdict::Fail {
                identity: id.label.clone(),
                assignment,
                lhs,
                rhs,
            });
        }
    }
    Ok(SuiteVerdict::Pass)
}

/// `t(x, z, z) = x` and `t(x, x, z) = z`.
pub fn maltsev_identities(t: &Term) -> Vec<Identity> {
    vec![
        Identity {
            label: "t(x,z,z) = x".into(),
            lhs: t.with_slots(&[1, 3, 3]),
            rhs: Term::Var(1),
        },
        Identity {
            label: "t(x,x,z) = z".into(),
            lhs: t.with_slots(&[1, 1, 3]),
            rhs: Term::Var(3),
        },
    ]
}

pub fn check_maltsev_identities(alg: &FiniteAlgebra, t: &Term) -> Result<SuiteVerdict, EvalError> {
    check_suite(alg, &maltsev_identities(t))
}

/// Meet over all `m`-subsets `J` (lexicographic) of the join of the variables in `J`.
pub fn build_lattice_majority_term(n: usize, m: usize) -> Result<Term, ConstructionError> {
    if m > n || 2 * m <= n {
        return Err(ConstructionError::AboveHalf { n, m });
    }
    let blocks = (1..=n)
        .combinations(m)
        .map(|j| Term::left_nested("join", j.into_iter().map(Term::Var)).expect("m >= 1"));
    Ok(Term::left_nested("meet", blocks).expect("at least one subset"))
}

/// `t(x_1, ..., x_{n/k}) = u(x_1^k, ..., x_{n/k}^k)`.
pub fn derive_collapse(u: &Term, n: usize, m: usize, k: usize) -> Result<Term, ConstructionError> {
    range(n, m)?;
    if k == 0 || !m.is_multiple_of(k) || !n.is_multiple_of(k) {
        return Err(ConstructionError::Collapse { n, m, k });
    }
    let slots: Vec<usize> = (1..=n / k).flat_map(|v| repeated(v, k)).collect();
    Ok(u.with_slots(&slots))
}

/// Collapse with `k = n - m`; the result has arity `n / (n - m)` and is near-unanimity.
pub fn derive_near_unanimity(
    u: &Term,
    n: usize,
    m: usize,
) -> Result<(Term, usize), ConstructionError> {
    range(n, m)?;
    let k = n - m;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(ConstructionError::NearUnanimity { n, m });
    }
    Ok((derive_collapse(u, n, m, k)?, n / k))
}

/// `v(x_1, ..., x_{m+1}) = u(x_1, ..., x_m, x_{m+1}, ..., x_{m+1})`; requires `u` to be a
/// non-exact `m`-majority term on `alg`.
pub fn derive_nu_from_nonexact(
    alg: &FiniteAlgebra,
    u: &Term,
    n: usize,
    m: usize,
) -> Result<Term, ConstructionError> {
    if m >= n || 2 * m <= n {
        return Err(ConstructionError::AboveHalf { n, m });
    }
    if let MajorityVerdict::Fail(cx) = check_m_majority(alg, u, n, m)? {
        return Err(ConstructionError::NotMMajority {
            n,
            m,
            verdict: cx.to_string(),
        });
    }
    let slots: Vec<usize> = (1..=m).chain(repeated(m + 1, n - m)).collect();
    Ok(u.with_slots(&slots))
}

/// Directed Gumm terms `d_1, ..., d_{ℓ-1}, q` obtained from an exact-`m`-majority term with
/// `m > n/2`, where `k = n - m`, `h = n mod k` and `ℓ = n div k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GummSystem {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub h: usize,
    pub ell: usize,
    pub d: Vec<Term>,
    pub q: Term,
    /// Argument variables of `u` in each `d_i`, then in `q`; each has length `n`.
    pub d_slots: Vec<Vec<usize>>,
    pub q_slots: Vec<usize>,
}

impl GummSystem {
    /// All identities of the chain, in a fixed order.
    pub fn identities(&self) -> Vec<Identity> {
        let mut ids = Vec::new();
        for (i, d) in self.d.iter().enumerate() {
            ids.push(Identity {
                label: format!("d{}(x,y,x) = x", i + 1),
                lhs: d.with_slots(&[1, 2, 1]),
                rhs: Term::Var(1),
            });
        }
        if let Some(d1) = self.d.first() {
            ids.push(Identity {
                label: "d1(x,x,z) = x".into(),
                lhs: d1.with_slots(&[1, 1, 3]),
                rhs: Term::Var(1),
            });
        }
        for (i, pair) in self.d.windows(2).enumerate() {
            ids.push(Identity {
                label: format!("d{}(x,z,z) = d{}(x,x,z)", i + 1, i + 2),
                lhs: pair[0].with_slots(&[1, 3, 3]),
                rhs: pair[1].with_slots(&[1, 1, 3]),
            });
        }
        if let Some(last) = self.d.last() {
            ids.push(Identity {
                label: format!("d{}(x,z,z) = q(x,z,z)", self.d.len()),
                lhs: last.with_slots(&[1, 3, 3]),
                rhs: self.q.with_slots(&[1, 3, 3]),
            });
        }
        ids.push(Identity {
            label: "q(x,x,z) = z".into(),
            lhs: self.q.with_slots(&[1, 1, 3]),
            rhs: Term::Var(3),
        });
        ids
    }
}

pub fn gumm_slots(n: usize, m: usize) -> Result<(Vec<Vec<usize>>, Vec<usize>), ConstructionError> {
    if m > n || 2 * m <= n {
        return Err(ConstructionError::AboveHalf { n, m });
    }
    let k = n - m;
    if k == 0 {
        // m = n: no chain exists
        return Err(ConstructionError::NearUnanimity { n, m });
    }
    let (h, ell) = (n % k, n / k);
    let d_slots = (1..ell)
        .map(|i| {
            repeated(1, h)
                .chain(repeated(1, (ell - 1 - i) * k))
                .chain(repeated(2, k))
                .chain(repeated(3, i * k))
                .collect()
        })
        .collect();
    let q_slots = repeated(1, h)
        .chain(repeated(2, k - h))
        .chain(repeated(3, h))
        .chain(repeated(3, (ell - 1) * k))
        .collect();
    Ok((d_slots, q_slots))
}

pub fn derive_gumm(u: &Term, n: usize, m: usize) -> Result<GummSystem, ConstructionError> {
    let (d_slots, q_slots) = gumm_slots(n, m)?;
    let k = n - m;
    Ok(GummSystem {
        n,
        m,
        k,
        h: n % k,
        ell: n / k,
        d: d_slots.iter().map(|s| u.with_slots(s)).collect(),
        q: u.with_slots(&q_slots),
        d_slots,
        q_slots,
    })
}

pub fn check_gumm_identities(
    alg: &FiniteAlgebra,
    g: &GummSystem,
) -> Result<SuiteVerdict, EvalError> {
    check_suite(alg, &g.identities())
}

/// `h x_1 + h x_2 + ... + h x_n` with `n = m + k q`, left-nested over `+`.
pub fn build_group_sum_term(
    h: usize,
    q: usize,
    k: usize,
    m: usize,
) -> Result<(Term, usize), ConstructionError> {
    if h == 0 || m == 0 || q == 0 {
        return Err(ConstructionError::GroupParams { h, m, q });
    }
    let product = h * m;
    if product % q != 1 % q {
        return Err(ConstructionError::GroupCongruence {
            product,
            q,
            residue: product % q,
        });
    }
    let n = m + k * q;
    let summands = (1..=n).flat_map(|v| repeated(v, h)).map(Term::Var);
    Ok((Term::left_nested("+", summands).expect("n >= 1"), n))
}

/// The three-clause operation on `0..size`: if exactly two values occur and `b` occurs
/// exactly `m` times, return `b`; if all arguments equal `b`, return `b`; otherwise `anchor`.
pub fn build_generic_majority_operation(
    size: usize,
    n: usize,
    m: usize,
    anchor: Element,
) -> Result<Operation, ConstructionError> {
    range(n, m)?;
    if size >= 2 && 2 * m == n {
        return Err(ConstructionError::HalfOnNontrivial { n, m });
    }
    if anchor as usize >= size {
        return Err(ConstructionError::Anchor { anchor, size });
    }
    let op = Operation::from_fn("u", size, n, |args| {
        let distinct: Vec<Element> = args.iter().copied().unique().collect();
        match distinct.as_slice() {
            [only] => *only,
            [x, y] => {
                let count_x = args.iter().filter(|&&v| v == *x).count();
                if count_x == m {
                    *x
                } else if n - count_x == m {
                    *y
                } else {
                    anchor
                }
            }
            _ => anchor,
        }
    })?;
    Ok(op)
}
