//! Subalgebras of finite powers `A^K`, generated by breadth-first closure.
//!
//! Every tuple in a closed set remembers how it was first produced, so any member can be
//! unfolded into a term over the generators. Rounds are semi-naive: round `r` applies each
//! basic operation to argument vectors that use at least one tuple first added in round
//! `r - 1`. Candidate computation within a round is split across rayon workers; insertion
//! happens sequentially in a fixed order, so the closed set, its indices and every derivation
//! are the same for any number of workers.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexSet;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashSet};
use thiserror::Error;

use crate::algebra::{table_len, Element, FiniteAlgebra};
use crate::term::Term;

/// An element of a finite power: one component per coordinate.
pub type PowerTuple = Box<[Element]>;

type TupleSet = IndexSet<PowerTuple, FxBuildHasher>;

pub const DEFAULT_CAP: usize = 5_000_000;

const CHUNK: usize = 2048;
const BATCH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubpowerError {
    #[error("closure exceeded the cap of {cap} tuples")]
    Overflow { cap: usize },
    #[error("generator {index} has length {got}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("generator {index} has component {value} outside the universe")]
    ComponentOutOfRange { index: usize, value: Element },
    #[error("cap must be positive")]
    ZeroCap,
    #[error("tuple is not in the closed set")]
    NotInSet,
    #[error("power A^{arity} of a size-{size} algebra is too large to enumerate")]
    PowerTooLarge { size: usize, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Origin {
    /// The `j`-th generator, 1-indexed.
    Generator(usize),
    /// Basic operation (by index in the algebra) applied to earlier members.
    Derived { op: usize, parents: Vec<usize> },
}

/// First derivation of every member of a closed set, indexed like the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationDag {
    width: usize,
    op_names: Vec<String>,
    origins: Vec<Origin>,
}

impl DerivationDag {
    pub fn origin(&self, node: usize) -> Option<&Origin> {
        self.origins.get(node)
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    /// Unfolds the derivation of `node` into a term: `Generator(j)` becomes `x_j`.
    pub fn unfold(&self, node: usize) -> Term {
        let mut memo: HashMap<usize, Term> = HashMap::new();
        self.unfold_memo(node, &mut memo)
    }

    fn unfold_memo(&self, node: usize, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(t) = memo.get(&node) {
            return t.clone();
        }
        let t = match &self.origins[node] {
            Origin::Generator(j) => Term::Var(*j),
            Origin::Derived { op, parents } => Term::App(
                self.op_names[*op].clone(),
                parents.iter().map(|&p| self.unfold_memo(p, memo)).collect(),
            ),
        };
        memo.insert(node, t.clone());
        t
    }

    /// Recomputes the components of `node` from the generators along its derivation.
    pub fn replay(
        &self,
        alg: &FiniteAlgebra,
        generators: &[PowerTuple],
        node: usize,
    ) -> PowerTuple {
        let mut memo: HashMap<usize, PowerTuple> = HashMap::new();
        self.replay_memo(alg, generators, node, &mut memo)
    }

    fn replay_memo(
        &self,
        alg: &FiniteAlgebra,
        generators: &[PowerTuple],
        node: usize,
        memo: &mut HashMap<usize, PowerTuple>,
    ) -> PowerTuple {
        if let Some(t) = memo.get(&node) {
            return t.clone();
        }
        let t: PowerTuple = match &self.origins[node] {
            Origin::Generator(j) => generators[j - 1].clone(),
            Origin::Derived { op, parents } => {
                let ps: Vec<PowerTuple> = parents
                    .iter()
                    .map(|&p| self.replay_memo(alg, generators, p, memo))
                    .collect();
                let mut args = vec![0; ps.len()];
                (0..self.width)
                    .map(|c| {
                        for (a, p) in args.iter_mut().zip(&ps) {
                            *a = p[c];
                        }
                        alg.apply(*op, &args)
                    })
                    .collect()
            }
        };
        memo.insert(node, t.clone());
        t
    }
}

/// A generated subpower together with the derivation of each member.
#[derive(Debug, Clone)]
pub struct Subpower {
    width: usize,
    generators: Vec<PowerTuple>,
    tuples: TupleSet,
    dag: DerivationDag,
    rounds: usize,
    complete: bool,
}

impl Subpower {
    /// Number of coordinates.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// False when generation stopped early because a sought tuple appeared.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn generators(&self) -> &[PowerTuple] {
        &self.generators
    }

    pub fn contains(&self, t: &[Element]) -> bool {
        self.tuples.contains(t)
    }

    pub fn index_of(&self, t: &[Element]) -> Option<usize> {
        self.tuples.get_index_of(t)
    }

    pub fn tuple(&self, index: usize) -> Option<&[Element]> {
        self.tuples.get_index(index).map(|t| &t[..])
    }

    /// Members in insertion (breadth-first) order.
    pub fn iter(&self) -> impl Iterator<Item = &[Element]> {
        self.tuples.iter().map(|t| &t[..])
    }

    pub fn dag(&self) -> &DerivationDag {
        &self.dag
    }

    /// A term whose coordinatewise evaluation on the generators is `target`.
    pub fn extract_witness(&self, target: &[Element]) -> Result<Term, SubpowerError> {
        let node = self.index_of(target).ok_or(SubpowerError::NotInSet)?;
        Ok(self.dag.unfold(node))
    }
}

pub fn extract_witness(sub: &Subpower, target: &[Element]) -> Result<Term, SubpowerError> {
    sub.extract_witness(target)
}

/// One operation/position block of a round's argument space. Argument vectors use old
/// tuples before `first_new`, a frontier tuple at `first_new`, and anything after it.
#[derive(Clone, Copy)]
struct Job {
    op: usize,
    arity: usize,
    first_new: usize,
    count: usize,
}

struct Engine<'a> {
    alg: &'a FiniteAlgebra,
    width: usize,
    cap: usize,
    tuples: TupleSet,
    origins: Vec<Origin>,
}

type Candidate = (PowerTuple, usize, Vec<usize>);

impl<'a> Engine<'a> {
    fn decode(&self, job: &Job, mut index: usize, old: usize, len: usize, out: &mut Vec<usize>) {
        out.clear();
        out.resize(job.arity, 0);
        for pos in (0..job.arity).rev() {
            let (radix, offset) = if pos < job.first_new {
                (old, 0)
            } else if pos == job.first_new {
                (len - old, old)
            } else {
                (len, 0)
            };
            out[pos] = offset + index % radix;
            index /= radix;
        }
    }

    fn apply(&self, op: usize, parents: &[usize]) -> PowerTuple {
        let size = self.alg.size();
        let table = self.alg.operations()[op].table();
        let rows: Vec<&[Element]> = parents.iter().map(|&p| &self.tuples[p][..]).collect();
        match rows.as_slice() {
            [x] => x.iter().map(|&a| table[a as usize]).collect(),
            [x, y] => x
                .iter()
                .zip(y.iter())
                .map(|(&a, &b)| table[a as usize * size + b as usize])
                .collect(),
            _ => (0..self.width)
                .map(|c| {
                    let idx = rows
                        .iter()
                        .fold(0usize, |acc, r| acc * size + r[c] as usize);
                    table[idx]
                })
                .collect(),
        }
    }

    /// New tuples produced by the argument vectors `range` of `job`, first occurrence only.
    fn chunk(
        &self,
        job: &Job,
        range: std::ops::Range<usize>,
        old: usize,
        len: usize,
    ) -> Vec<Candidate> {
        let mut seen: FxHashSet<PowerTuple> = FxHashSet::default();
        let mut out = Vec::new();
        let mut parents = Vec::with_capacity(job.arity);
        for i in range {
            self.decode(job, i, old, len, &mut parents);
            let t = self.apply(job.op, &parents);
            if self.tuples.contains(&t) || seen.contains(&t) {
                continue;
            }
            seen.insert(t.clone());
            out.push((t, job.op, parents.clone()));
        }
        out
    }

    /// Inserts a tuple; returns true if it is `target`.
    fn insert(
        &mut self,
        t: PowerTuple,
        origin: Origin,
        target: Option<&[Element]>,
    ) -> Result<bool, SubpowerError> {
        if self.tuples.contains(&t) {
            return Ok(false);
        }
        if self.tuples.len() >= self.cap {
            return Err(SubpowerError::Overflow { cap: self.cap });
        }
        let hit = target.is_some_and(|x| x == &t[..]);
        self.tuples.insert(t);
        self.origins.push(origin);
        Ok(hit)
    }

    fn run(
        &mut self,
        generators: &[PowerTuple],
        target: Option<&[Element]>,
    ) -> Result<(usize, bool), SubpowerError> {
        for (j, g) in generators.iter().enumerate() {
            if self.insert(g.clone(), Origin::Generator(j + 1), target)? {
                return Ok((0, true));
            }
        }
        let mut old = 0usize;
        let mut round = 0usize;
        loop {
            let len = self.tuples.len();
            round += 1;
            if round == 1 {
                for (op, o) in self.alg.operations().iter().enumerate() {
                    if o.arity() == 0 {
                        let t: PowerTuple = vec![o.table()[0]; self.width].into();
                        let origin = Origin::Derived {
                            op,
                            parents: Vec::new(),
                        };
                        if self.insert(t, origin, target)? {
                            return Ok((round, true));
                        }
                    }
                }
            }
            // constants inserted above count as frontier for this round
            let len = len.max(self.tuples.len());
            if old == len {
                return Ok((round - 1, false));
            }
            let jobs = self.jobs(old, len);
            let units: Vec<(usize, std::ops::Range<usize>)> = jobs
                .iter()
                .enumerate()
                .flat_map(|(ji, job)| {
                    (0..job.count.div_ceil(CHUNK)).map(move |c| {
                        let lo = c * CHUNK;
                        (ji, lo..(lo + CHUNK).min(job.count))
                    })
                })
                .collect();
            for batch in units.chunks(BATCH) {
                let results: Vec<Vec<Candidate>> = batch
                    .par_iter()
                    .map(|(ji, range)| self.chunk(&jobs[*ji], range.clone(), old, len))
                    .collect();
                for (t, op, parents) in results.into_iter().flatten() {
                    if self.insert(t, Origin::Derived { op, parents }, target)? {
                        return Ok((round, true));
                    }
                }
            }
            old = len;
        }
    }

    fn jobs(&self, old: usize, len: usize) -> Vec<Job> {
        let mut jobs = Vec::new();
        for (op, o) in self.alg.operations().iter().enumerate() {
            let arity = o.arity();
            for first_new in 0..arity {
                let count = old
                    .saturating_pow(first_new as u32)
                    .saturating_mul(len - old)
                    .saturating_mul(len.saturating_pow((arity - 1 - first_new) as u32));
                if count == 0 {
                    continue;
                }
                jobs.push(Job {
                    op,
                    arity,
                    first_new,
                    count,
                });
            }
        }
        jobs
    }
}

fn validate(
    alg: &FiniteAlgebra,
    width: usize,
    generators: &[PowerTuple],
    cap: usize,
) -> Result<(), SubpowerError> {
    if cap == 0 {
        return Err(SubpowerError::ZeroCap);
    }
    for (i, g) in generators.iter().enumerate() {
        if g.len() != width {
            return Err(SubpowerError::LengthMismatch {
                index: i + 1,
                expected: width,
                got: g.len(),
            });
        }
        if let Some(&value) = g.iter().find(|&&v| v as usize >= alg.size()) {
            return Err(SubpowerError::ComponentOutOfRange {
                index: i + 1,
                value,
            });
        }
    }
    Ok(())
}

/// Closure of `generators` in `A^width`, stopping as soon as `target` (if any) is inserted.
pub fn generate_subpower_until(
    alg: &FiniteAlgebra,
    width: usize,
    generators: &[PowerTuple],
    cap: usize,
    target: Option<&[Element]>,
) -> Result<Subpower, SubpowerError> {
    validate(alg, width, generators, cap)?;
    let mut engine = Engine {
        alg,
        width,
        cap,
        tuples: TupleSet::default(),
        origins: Vec::new(),
    };
    let (rounds, hit) = engine.run(generators, target)?;
    Ok(Subpower {
        width,
        generators: generators.to_vec(),
        tuples: engine.tuples,
        dag: DerivationDag {
            width,
            op_names: alg
                .operations()
                .iter()
                .map(|o| o.name().to_string())
                .collect(),
            origins: engine.origins,
        },
        rounds,
        complete: !hit,
    })
}

/// The subalgebra of `A^width` generated by `generators` (which may be empty).
pub fn generate_subpower_of_width(
    alg: &FiniteAlgebra,
    width: usize,
    generators: &[PowerTuple],
    cap: usize,
) -> Result<Subpower, SubpowerError> {
    generate_subpower_until(alg, width, generators, cap, None)
}

/// The subalgebra generated by a non-empty list of equal-length tuples.
pub fn generate_subpower(
    alg: &FiniteAlgebra,
    generators: &[PowerTuple],
    cap: usize,
) -> Result<Subpower, SubpowerError> {
    let width = generators.first().map_or(0, |g| g.len());
    generate_subpower_until(alg, width, generators, cap, None)
}

/// The `i`-th projection of arity `arity` as a table over `A^arity` (last argument fastest).
pub fn projection_table(size: usize, arity: usize, i: usize) -> Option<PowerTuple> {
    let width = table_len(size, arity)?;
    let stride = table_len(size, arity - 1 - i)?;
    Some(
        (0..width)
            .map(|c| ((c / stride) % size) as Element)
            .collect(),
    )
}

/// Every `arity`-ary term operation of `A`, as tables in lexicographic argument order:
/// the subpower of `A^(A^arity)` generated by the projections.
pub fn enumerate_term_operations(
    alg: &FiniteAlgebra,
    arity: usize,
    cap: usize,
) -> Result<BTreeSet<Vec<Element>>, SubpowerError> {
    let size = alg.size();
    let width = table_len(size, arity)
        .filter(|&w| w <= 1 << 24)
        .ok_or(SubpowerError::PowerTooLarge { size, arity })?;
    let gens: Vec<PowerTuple> = (0..arity)
        .map(|i| projection_table(size, arity, i).expect("width already checked"))
        .collect();
    let sub = generate_subpower_of_width(alg, width, &gens, cap)?;
    Ok(sub.iter().map(|t| t.to_vec()).collect())
}
