//! Deciding whether a finite algebra has an `n`-ary exact-`m`-majority term.
//!
//! One coordinate per equation instance `(J, a, b)`: generator `g_j` reads `a` at that
//! coordinate when `j ∈ J` and `b` otherwise, and the target reads `a`. A term `w` satisfies
//! every instance exactly when `w(g_1, ..., g_n)` computed coordinatewise equals the target,
//! so the question becomes membership of the target in the subpower generated by the `g_j`.

use std::fmt;

use indexmap::IndexMap;
use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::check::{check_exact_majority, patterns};
use crate::subpower::{generate_subpower_until, PowerTuple, SubpowerError, DEFAULT_CAP};
use crate::term::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("parameters out of range (n = {n}, m = {m}): need 1 <= m <= n")]
    ParameterRange { n: usize, m: usize },
    #[error(transparent)]
    Subpower(SubpowerError),
    #[error("witness failed its re-check: {0}")]
    Unsound(String),
}

/// One equation instance: positions `pattern` carry `a`, the others `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub pattern: Vec<usize>,
    pub a: Element,
    pub b: Element,
}

/// The coordinates of the search power. Each class collects instances with identical generator
/// columns and identical targets; without deduplication every class is a singleton.
#[derive(Debug, Clone)]
pub struct CoordinateSet {
    n: usize,
    m: usize,
    classes: Vec<Vec<Coordinate>>,
}

impl CoordinateSet {
    pub fn new(size: usize, n: usize, m: usize, dedup: bool) -> CoordinateSet {
        let mut classes: Vec<Vec<Coordinate>> = Vec::new();
        let mut index: IndexMap<(Vec<Element>, Element), usize> = IndexMap::new();
        let size = size as Element;
        for pattern in patterns(n, m) {
            for (a, b) in (0..size).cartesian_product(0..size) {
                let coord = Coordinate {
                    pattern: pattern.clone(),
                    a,
                    b,
                };
                if dedup {
                    let key = (crate::check::pattern_arguments(n, &pattern, a, b), a);
                    if let Some(&c) = index.get(&key) {
                        classes[c].push(coord);
                        continue;
                    }
                    index.insert(key, classes.len());
                }
                classes.push(vec![coord]);
            }
        }
        CoordinateSet { n, m, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Coordinate>] {
        &self.classes
    }

    /// Total number of equation instances covered.
    pub fn instances(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Generator `g_j` for `j` in `1..=n`.
    pub fn generator(&self, j: usize) -> PowerTuple {
        self.classes
            .iter()
            .map(|class| {
                let c = &class[0];
                if c.pattern.contains(&j) {
                    c.a
                } else {
                    c.b
                }
            })
            .collect()
    }

    pub fn generators(&self) -> Vec<PowerTuple> {
        (1..=self.n).map(|j| self.generator(j)).collect()
    }

    pub fn target(&self) -> PowerTuple {
        self.classes.iter().map(|class| class[0].a).collect()
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self) -> usize {
        self.m
    }
}

/// Two instances that demand different outputs on the same arguments: `pattern` with
/// `(a, b)` and its complement with `(b, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialCertificate {
    pub pattern: Vec<usize>,
    pub complement: Vec<usize>,
    pub a: Element,
    pub b: Element,
}

impl fmt::Display for TrivialCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "J={{{}}} (a={}, b={}) and J={{{}}} (a={}, b={}) share arguments but want {} vs {}",
            self.pattern.iter().join(","),
            self.a,
            self.b,
            self.complement.iter().join(","),
            self.b,
            self.a,
            self.a,
            self.b
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        term: Term,
        closure_size: usize,
        coordinates: usize,
    },
    NotFound {
        closure_size: usize,
        coordinates: usize,
    },
    /// Only a one-element algebra can satisfy the equations.
    TrivialOnly(TrivialCertificate),
    Overflow {
        cap: usize,
    },
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found { .. } => "FOUND",
            SearchOutcome::NotFound { .. } => "NOT-FOUND",
            SearchOutcome::TrivialOnly(_) => "TRIVIAL-ONLY",
            SearchOutcome::Overflow { .. } => "OVERFLOW",
        }
    }

    pub fn term(&self) -> Option<&Term> {
        match self {
            SearchOutcome::Found { term, .. } => Some(term),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub cap: usize,
    pub dedup: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cap: DEFAULT_CAP,
            dedup: true,
        }
    }
}

/// The conflict certificate when `n = 2m` and the universe has at least two elements.
pub fn trivial_certificate(size: usize, n: usize, m: usize) -> Option<TrivialCertificate> {
    if size < 2 || n != 2 * m || m == 0 {
        return None;
    }
    Some(TrivialCertificate {
        pattern: (1..=m).collect(),
        complement: (m + 1..=n).collect(),
        a: 0,
        b: 1,
    })
}

pub fn find_exact_majority_term(
    alg: &FiniteAlgebra,
    n: usize,
    m: usize,
    opts: SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if m == 0 || m > n {
        return Err(SearchError::ParameterRange { n, m });
    }
    if let Some(cert) = trivial_certificate(alg.size(), n, m) {
        return Ok(SearchOutcome::TrivialOnly(cert));
    }
    let coords = CoordinateSet::new(alg.size(), n, m, opts.dedup);
    let gens = coords.generators();
    let target = coords.target();
    let sub = match generate_subpower_until(alg, coords.len(), &gens, opts.cap, Some(&target)) {
        Ok(sub) => sub,
        Err(SubpowerError::Overflow { cap }) => return Ok(SearchOutcome::Overflow { cap }),
        Err(e) => return Err(SearchError::Subpower(e)),
    };
    match sub.extract_witness(&target) {
        Ok(term) => {
            match check_exact_majority(alg, &term, n, m) {
                Ok(v) if v.passed() => {}
                Ok(v) => {
                    return Err(SearchError::Unsound(format!(
                        "{term}: {}",
                        v.counterexample().expect("failed verdict")
                    )))
                }
                Err(e) => return Err(SearchError::Unsound(e.to_string())),
            }
            Ok(SearchOutcome::Found {
                term,
                closure_size: sub.len(),
                coordinates: coords.len(),
            })
        }
        Err(_) => Ok(SearchOutcome::NotFound {
            closure_size: sub.len(),
            coordinates: coords.len(),
        }),
    }
}
