//! Congruence lattices of finite algebras and the permutability, modularity and
//! distributivity checks.

use std::cmp::Reverse;
use std::fmt;

use thiserror::Error;

use crate::algebra::{table_len, Element, FiniteAlgebra};
use crate::partition::{all_partitions, Partition, UnionFind};
use crate::subpower::{generate_subpower_of_width, PowerTuple};

/// Largest universe the brute-force oracle accepts (Bell(6) = 203 partitions).
pub const ORACLE_MAX_SIZE: usize = 6;

pub const DEFAULT_LATTICE_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("brute-force congruence enumeration supports size <= {ORACLE_MAX_SIZE}, got {0}")]
    TooLarge(usize),
    #[error("congruence lattice exceeded the cap of {0} congruences")]
    Overflow(usize),
}

/// Compatibility with every basic operation. Checked one argument position at a time, which
/// for an equivalence relation is equivalent to checking all related argument vectors.
pub fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
    let size = alg.size();
    if p.size() != size {
        return false;
    }
    for op in alg.operations() {
        let arity = op.arity();
        let table = op.table();
        if arity == 0 {
            continue;
        }
        let rest = table_len(size, arity - 1).expect("table exists");
        for pos in 0..arity {
            let stride = table_len(size, arity - 1 - pos).expect("table exists");
            for other in 0..rest {
                // `other` enumerates the remaining positions; splice in slot `pos`
                let high = other / stride;
                let low = other % stride;
                let base = high * stride * size + low;
                for x in 0..size {
                    for y in (x + 1)..size {
                        if p.related(x, y)
                            && !p.related_elems(table[base + x * stride], table[base + y * stride])
                        {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The least congruence containing `(a, b)`: transitive closure of the subalgebra of `A²`
/// generated by the diagonal, `(a, b)` and `(b, a)`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: Element, b: Element) -> Partition {
    let size = alg.size();
    if a == b {
        return Partition::bottom(size);
    }
    let mut gens: Vec<PowerTuple> = vec![vec![a, b].into(), vec![b, a].into()];
    gens.extend((0..size as Element).map(|x| PowerTuple::from(vec![x, x])));
    let sub = generate_subpower_of_width(alg, 2, &gens, size * size)
        .expect("a subset of A² never exceeds |A|² tuples");
    let mut uf = UnionFind::new(size);
    for pair in sub.iter() {
        uf.union(pair[0] as usize, pair[1] as usize);
    }
    Partition::from_union_find(&mut uf, size)
}

fn canonical_order(ps: &mut [Partition]) {
    ps.sort_by_key(|p| (Reverse(p.block_count()), p.reps().to_vec()));
}

/// All congruences of one algebra, in canonical order: most blocks first, then by
/// representative vector. The bottom congruence comes first and the top last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceLattice {
    size: usize,
    congruences: Vec<Partition>,
}

impl CongruenceLattice {
    pub fn from_partitions(size: usize, mut congruences: Vec<Partition>) -> Self {
        canonical_order(&mut congruences);
        congruences.dedup();
        CongruenceLattice { size, congruences }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn congruences(&self) -> &[Partition] {
        &self.congruences
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.congruences.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Partition> {
        self.congruences.iter()
    }
}

/// The congruence lattice as the join closure of the principal congruences and the bottom.
pub fn congruence_lattice(
    alg: &FiniteAlgebra,
    cap: usize,
) -> Result<CongruenceLattice, CongruenceError> {
    let size = alg.size();
    let mut elems: Vec<Partition> = vec![Partition::bottom(size)];
    let push = |elems: &mut Vec<Partition>, p: Partition| -> Result<(), CongruenceError> {
        if !elems.contains(&p) {
            if elems.len() >= cap {
                return Err(CongruenceError::Overflow(cap));
            }
            elems.push(p);
        }
        Ok(())
    };
    for a in 0..size as Element {
        for b in (a + 1)..size as Element {
            push(&mut elems, principal_congruence(alg, a, b))?;
        }
    }
    let mut done = 0;
    while done < elems.len() {
        let p = elems[done].clone();
        for i in 0..done {
            let j = p.join(&elems[i]);
            push(&mut elems, j)?;
        }
        done += 1;
    }
    Ok(CongruenceLattice::from_partitions(size, elems))
}

/// Ground truth: every partition that passes [`is_congruence`].
pub fn all_congruences_bruteforce(alg: &FiniteAlgebra) -> Result<Vec<Partition>, CongruenceError> {
    if alg.size() > ORACLE_MAX_SIZE {
        return Err(CongruenceError::TooLarge(alg.size()));
    }
    let mut out: Vec<Partition> = all_partitions(alg.size())
        .into_iter()
        .filter(|p| is_congruence(alg, p))
        .collect();
    canonical_order(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutabilityVerdict {
    Pass,
    /// `pair` lies in `alpha ∘ beta` but not in `beta ∘ alpha`.
    Fail {
        alpha: Partition,
        beta: Partition,
        pair: (usize, usize),
    },
}

impl PermutabilityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, PermutabilityVerdict::Pass)
    }
}

impl fmt::Display for PermutabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutabilityVerdict::Pass => write!(f, "pass"),
            PermutabilityVerdict::Fail { alpha, beta, pair } => {
                write!(f, "alpha={alpha} beta={beta} pair=({},{})", pair.0, pair.1)
            }
        }
    }
}

pub fn check_permutable(lattice: &CongruenceLattice) -> PermutabilityVerdict {
    let cs = lattice.congruences();
    let n = lattice.universe_size();
    for (i, alpha) in cs.iter().enumerate() {
        for beta in &cs[i + 1..] {
            let ab = alpha.compose(beta);
            let ba = beta.compose(alpha);
            if let Some(k) = (0..n * n).find(|&k| ab[k] && !ba[k]) {
                return PermutabilityVerdict::Fail {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    pair: (k / n, k % n),
                };
            }
        }
    }
    PermutabilityVerdict::Pass
}

/// A triple of congruences violating a lattice law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawVerdict {
    Pass,
    Fail {
        alpha: Partition,
        beta: Partition,
        gamma: Partition,
        lhs: Partition,
        rhs: Partition,
    },
}

impl LawVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LawVerdict::Pass)
    }
}

impl fmt::Display for LawVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawVerdict::Pass => write!(f, "pass"),
            LawVerdict::Fail {
                alpha,
                beta,
                gamma,
                lhs,
                rhs,
            } => write!(
                f,
                "alpha={alpha} beta={beta} gamma={gamma} lhs={lhs} rhs={rhs}"
            ),
        }
    }
}

fn scan_triples<F>(lattice: &CongruenceLattice, mut law: F) -> LawVerdict
where
    F: FnMut(&Partition, &Partition, &Partition) -> Option<(Partition, Partition)>,
{
    let cs = lattice.congruences();
    for alpha in cs {
        for beta in cs {
            for gamma in cs {
                if let Some((lhs, rhs)) = law(alpha, beta, gamma) {
                    if lhs != rhs {
                        return LawVerdict::Fail {
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            gamma: gamma.clone(),
                            lhs,
                            rhs,
                        };
                    }
                }
            }
        }
    }
    LawVerdict::Pass
}

/// `γ ≤ α ⟹ α ∧ (β ∨ γ) = (α ∧ β) ∨ γ` for all triples.
pub fn check_modular(lattice: &CongruenceLattice) -> LawVerdict {
    scan_triples(lattice, |alpha, beta, gamma| {
        gamma
            .le(alpha)
            .then(|| (alpha.meet(&beta.join(gamma)), alpha.meet(beta).join(gamma)))
    })
}

/// `α ∧ (β ∨ γ) = (α ∧ β) ∨ (α ∧ γ)` for all triples.
pub fn check_distributive(lattice: &CongruenceLattice) -> LawVerdict {
    scan_triples(lattice, |alpha, beta, gamma| {
        Some((
            alpha.meet(&beta.join(gamma)),
            alpha.meet(beta).join(&alpha.meet(gamma)),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Operation;

    fn z(q: usize) -> FiniteAlgebra {
        let qe = q as Element;
        FiniteAlgebra::new(
            format!("z{q}"),
            q,
            vec![
                Operation::from_fn("+", q, 2, |a| (a[0] + a[1]) % qe).unwrap(),
                Operation::from_fn("-", q, 1, |a| (qe - a[0]) % qe).unwrap(),
                Operation::new("0", 0, vec![0]),
            ],
        )
        .unwrap()
    }

    fn klein() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "klein",
            4,
            vec![Operation::from_fn("+", 4, 2, |a| a[0] ^ a[1]).unwrap()],
        )
        .unwrap()
    }

    fn chain(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::new(
            format!("chain{n}"),
            n,
            vec![
                Operation::from_fn("meet", n, 2, |a| a[0].min(a[1])).unwrap(),
                Operation::from_fn("join", n, 2, |a| a[0].max(a[1])).unwrap(),
            ],
        )
        .unwrap()
    }

    fn bare(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::new(format!("bare{n}"), n, vec![]).unwrap()
    }

    fn p(size: usize, blocks: &[&[usize]]) -> Partition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        Partition::from_blocks(size, &blocks).unwrap()
    }

    /// Direct definition: all pairs of related argument vectors.
    fn is_congruence_naive(alg: &FiniteAlgebra, part: &Partition) -> bool {
        use itertools::Itertools;
        let size = alg.size() as Element;
        alg.operations().iter().enumerate().all(|(oi, op)| {
            let vecs: Vec<Vec<Element>> = (0..op.arity())
                .map(|_| 0..size)
                .multi_cartesian_product()
                .collect();
            vecs.iter().all(|xs| {
                vecs.iter().all(|ys| {
                    !xs.iter().zip(ys).all(|(&x, &y)| part.related_elems(x, y))
                        || part.related_elems(alg.apply(oi, xs), alg.apply(oi, ys))
                })
            })
        })
    }

    #[test]
    fn congruence_examples() {
        assert!(is_congruence(&z(4), &p(4, &[&[0, 2], &[1, 3]])));
        assert!(!is_congruence(&chain(3), &p(3, &[&[0, 2], &[1]])));
        assert!(is_congruence(&chain(3), &Partition::bottom(3)));
    }

    #[test]
    fn single_position_check_matches_definition() {
        for alg in [z(4), chain(3), klein(), z(3), chain(4)] {
            for part in all_partitions(alg.size()) {
                assert_eq!(
                    is_congruence(&alg, &part),
                    is_congruence_naive(&alg, &part),
                    "{alg} {part}"
                );
            }
        }
    }

    #[test]
    fn principal_examples() {
        assert_eq!(principal_congruence(&chain(3), 1, 1), Partition::bottom(3));
        assert_eq!(
            principal_congruence(&chain(3), 0, 1).to_string(),
            "{{0,1},{2}}"
        );
        assert_eq!(
            principal_congruence(&z(4), 0, 2).to_string(),
            "{{0,2},{1,3}}"
        );
        assert_eq!(principal_congruence(&chain(3), 0, 2), Partition::top(3));
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(congruence_lattice(&bare(2), 100).unwrap().len(), 2);
        assert_eq!(congruence_lattice(&bare(4), 100).unwrap().len(), 15);
        assert_eq!(congruence_lattice(&klein(), 100).unwrap().len(), 5);
        assert_eq!(
            congruence_lattice(&bare(4), 10),
            Err(CongruenceError::Overflow(10))
        );
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(all_congruences_bruteforce(&bare(1)).unwrap().len(), 1);
        let c3: Vec<String> = all_congruences_bruteforce(&chain(3))
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            c3,
            vec!["{{0},{1},{2}}", "{{0,1},{2}}", "{{0},{1,2}}", "{{0,1,2}}"]
        );
        assert_eq!(
            all_congruences_bruteforce(&z(3)).unwrap(),
            vec![Partition::bottom(3), Partition::top(3)]
        );
        assert_eq!(
            all_congruences_bruteforce(&bare(7)),
            Err(CongruenceError::TooLarge(7))
        );
    }

    #[test]
    fn permutability_examples() {
        assert!(check_permutable(&congruence_lattice(&klein(), 100).unwrap()).passed());
        let v = check_permutable(&congruence_lattice(&chain(3), 100).unwrap());
        assert_eq!(
            v,
            PermutabilityVerdict::Fail {
                alpha: principal_congruence(&chain(3), 0, 1),
                beta: principal_congruence(&chain(3), 1, 2),
                pair: (0, 2),
            }
        );
        // a two-element lattice of congruences: bottom and top permute with everything
        assert!(check_permutable(&congruence_lattice(&z(3), 100).unwrap()).passed());
    }

    #[test]
    fn law_examples() {
        let c3 = congruence_lattice(&chain(3), 100).unwrap();
        assert!(check_distributive(&c3).passed());
        let pi4 = congruence_lattice(&bare(4), 100).unwrap();
        let v = check_modular(&pi4);
        match &v {
            LawVerdict::Fail {
                alpha,
                gamma,
                lhs,
                rhs,
                ..
            } => {
                assert!(gamma.le(alpha));
                assert_ne!(lhs, rhs);
            }
            LawVerdict::Pass => panic!("partition lattice of a 4-set is not modular"),
        }
        let m3 = congruence_lattice(&klein(), 100).unwrap();
        assert!(check_modular(&m3).passed());
        assert!(!check_distributive(&m3).passed());
    }

    #[test]
    fn canonical_order_has_bottom_first_and_top_last() {
        let l = congruence_lattice(&z(4), 100).unwrap();
        assert_eq!(l.congruences().first(), Some(&Partition::bottom(4)));
        assert_eq!(l.congruences().last(), Some(&Partition::top(4)));
        assert_eq!(l.len(), 3);
    }
}
