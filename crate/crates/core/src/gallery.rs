//! Built-in fixture algebras, addressed by short names such as `z_mod:3` or `chain:4`.

use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra, Operation};
use crate::check::CompiledTerm;
use crate::constructions::{
    build_generic_majority_operation, build_lattice_majority_term, ConstructionError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("unknown gallery algebra `{0}`")]
    Unknown(String),
    #[error("bad parameters for `{name}`: {reason}")]
    Parameters { name: String, reason: String },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Names accepted by [`gallery`], with parameter placeholders.
pub const CATALOG: &[(&str, &str)] = &[
    ("z_mod:<q>", "cyclic group Z_q with +, -, 0"),
    ("klein", "Klein four-group Z2 x Z2 with +, -, 0"),
    ("sym:<n>", "symmetric group S_n (n <= 5) with *, inv, e"),
    ("chain:<n>", "n-element chain lattice with meet, join"),
    ("n5", "pentagon lattice N5"),
    ("m3", "diamond lattice M3"),
    ("bare:<n>", "n-element set without operations"),
    (
        "example4b:<size>:<n>:<m>:<anchor>",
        "set with the three-clause n-ary exact-m-majority operation u",
    ),
    (
        "v35_lattice_witness",
        "2-element chain with only u = the 5-ary 3-majority lattice term",
    ),
    (
        "v35_chain_witness",
        "3-element chain with only u = the 5-ary 3-majority lattice term",
    ),
    (
        "v35_group_witness",
        "Klein group with only u(x1..x5) = x1+x2+x3+x4+x5",
    ),
];

/// Small fixtures for sweeps over "every gallery algebra of size at most 5".
pub fn small_fixtures() -> Vec<&'static str> {
    vec![
        "z_mod:1",
        "z_mod:2",
        "z_mod:3",
        "z_mod:4",
        "z_mod:5",
        "klein",
        "chain:1",
        "chain:2",
        "chain:3",
        "chain:4",
        "chain:5",
        "n5",
        "m3",
        "bare:1",
        "bare:2",
        "bare:3",
        "bare:4",
        "bare:5",
        "example4b:3:4:1:0",
        "example4b:2:3:2:1",
        "example4b:3:3:1:2",
        "v35_lattice_witness",
        "v35_chain_witness",
        "v35_group_witness",
    ]
}

fn param(name: &str, text: &str, what: &str) -> Result<usize, GalleryError> {
    text.parse().map_err(|_| GalleryError::Parameters {
        name: name.to_string(),
        reason: format!("{what} must be a non-negative integer, got `{text}`"),
    })
}

fn positive(name: &str, text: &str, what: &str) -> Result<usize, GalleryError> {
    let v = param(name, text, what)?;
    if v == 0 {
        return Err(GalleryError::Parameters {
            name: name.to_string(),
            reason: format!("{what} must be positive"),
        });
    }
    Ok(v)
}

fn op(name: &str, size: usize, arity: usize, f: impl FnMut(&[Element]) -> Element) -> Operation {
    Operation::from_fn(name, size, arity, f).expect("fixture tables are small")
}

fn build(name: &str, size: usize, ops: Vec<Operation>) -> FiniteAlgebra {
    FiniteAlgebra::new(name, size, ops).expect("fixture tables are valid")
}

pub fn cyclic_group(q: usize) -> FiniteAlgebra {
    let qe = q as Element;
    build(
        &format!("z_mod:{q}"),
        q,
        vec![
            op("+", q, 2, |a| (a[0] + a[1]) % qe),
            op("-", q, 1, |a| (qe - a[0]) % qe),
            Operation::new("0", 0, vec![0]),
        ],
    )
}

/// Elements `2a + b` for `(a, b)` in `Z2 x Z2`.
pub fn klein_group() -> FiniteAlgebra {
    build(
        "klein",
        4,
        vec![
            op("+", 4, 2, |a| a[0] ^ a[1]),
            op("-", 4, 1, |a| a[0]),
            Operation::new("0", 0, vec![0]),
        ],
    )
}

/// Permutations of `0..n` in lexicographic order; `(p * q)(i) = p(q(i))`.
pub fn symmetric_group(n: usize) -> FiniteAlgebra {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation") as Element;
    let size = perms.len();
    let mul = op("*", size, 2, |a| {
        let (p, q) = (&perms[a[0] as usize], &perms[a[1] as usize]);
        index(&(0..n).map(|i| p[q[i]]).collect::<Vec<_>>())
    });
    let inv = op("inv", size, 1, |a| {
        let p = &perms[a[0] as usize];
        let mut r = vec![0; n];
        for (i, &pi) in p.iter().enumerate() {
            r[pi] = i;
        }
        index(&r)
    });
    build(
        &format!("sym:{n}"),
        size,
        vec![mul, inv, Operation::new("e", 0, vec![0])],
    )
}

/// The lattice of a finite bounded poset given by its order relation.
fn lattice_from_order(
    name: &str,
    size: usize,
    leq: impl Fn(usize, usize) -> bool,
) -> FiniteAlgebra {
    let bound = |a: usize, b: usize, lower: bool| -> Element {
        let candidates: Vec<usize> = (0..size)
            .filter(|&c| {
                if lower {
                    leq(c, a) && leq(c, b)
                } else {
                    leq(a, c) && leq(b, c)
                }
            })
            .collect();
        let best = candidates
            .iter()
            .copied()
            .find(|&c| {
                candidates
                    .iter()
                    .all(|&d| if lower { leq(d, c) } else { leq(c, d) })
            })
            .expect("poset is a lattice");
        best as Element
    };
    build(
        name,
        size,
        vec![
            op("meet", size, 2, |a| {
                bound(a[0] as usize, a[1] as usize, true)
            }),
            op("join", size, 2, |a| {
                bound(a[0] as usize, a[1] as usize, false)
            }),
        ],
    )
}

pub fn chain(n: usize) -> FiniteAlgebra {
    lattice_from_order(&format!("chain:{n}"), n, |a, b| a <= b)
}

/// `0 < 1 < 2 < 4` and `0 < 3 < 4`.
pub fn pentagon() -> FiniteAlgebra {
    let below: &[(usize, usize)] = &[
        (0, 1),
        (1, 2),
        (2, 4),
        (0, 3),
        (3, 4),
        (0, 2),
        (0, 4),
        (1, 4),
    ];
    lattice_from_order("n5", 5, |a, b| a == b || below.contains(&(a, b)))
}

/// Bottom 0, atoms 1, 2, 3, top 4.
pub fn diamond() -> FiniteAlgebra {
    lattice_from_order("m3", 5, |a, b| a == b || a == 0 || b == 4)
}

pub fn bare(n: usize) -> FiniteAlgebra {
    build(&format!("bare:{n}"), n, vec![])
}

pub fn generic_majority(
    size: usize,
    n: usize,
    m: usize,
    anchor: Element,
) -> Result<FiniteAlgebra, GalleryError> {
    let op = build_generic_majority_operation(size, n, m, anchor)?;
    Ok(build(
        &format!("example4b:{size}:{n}:{m}:{anchor}"),
        size,
        vec![op],
    ))
}

/// `base` reduced to the single 5-ary operation `u` computed by `term` (in `base`'s signature).
fn five_ary_reduct(name: &str, base: &FiniteAlgebra, term: &crate::term::Term) -> FiniteAlgebra {
    let compiled = CompiledTerm::new(base, term).expect("term fits the base signature");
    let u = op("u", base.size(), 5, |a| compiled.eval(a));
    build(name, base.size(), vec![u])
}

pub fn v35_lattice_witness() -> FiniteAlgebra {
    let u = build_lattice_majority_term(5, 3).expect("5/2 < 3");
    five_ary_reduct("v35_lattice_witness", &chain(2), &u)
}

pub fn v35_chain_witness() -> FiniteAlgebra {
    let u = build_lattice_majority_term(5, 3).expect("5/2 < 3");
    five_ary_reduct("v35_chain_witness", &chain(3), &u)
}

pub fn v35_group_witness() -> FiniteAlgebra {
    let u = crate::term::Term::left_nested("+", (1..=5).map(crate::term::Term::Var))
        .expect("five summands");
    five_ary_reduct("v35_group_witness", &klein_group(), &u)
}

/// Looks up a gallery algebra by name.
pub fn gallery(name: &str) -> Result<FiniteAlgebra, GalleryError> {
    let parts: Vec<&str> = name.split(':').collect();
    let wrong_arity = || GalleryError::Parameters {
        name: name.to_string(),
        reason: "wrong number of parameters".into(),
    };
    match parts[0] {
        "z_mod" => match parts.as_slice() {
            [_, q] => Ok(cyclic_group(positive(name, q, "q")?)),
            _ => Err(wrong_arity()),
        },
        "chain" => match parts.as_slice() {
            [_, n] => Ok(chain(positive(name, n, "n")?)),
            _ => Err(wrong_arity()),
        },
        "bare" => match parts.as_slice() {
            [_, n] => Ok(bare(positive(name, n, "n")?)),
            _ => Err(wrong_arity()),
        },
        "sym" => match parts.as_slice() {
            [_, n] => {
                let n = positive(name, n, "n")?;
                if n > 5 {
                    return Err(GalleryError::Parameters {
                        name: name.to_string(),
                        reason: "n must be at most 5".into(),
                    });
                }
                Ok(symmetric_group(n))
            }
            _ => Err(wrong_arity()),
        },
        "example4b" => match parts.as_slice() {
            [_, size, n, m, anchor] => {
                let size = positive(name, size, "size")?;
                let n = positive(name, n, "n")?;
                let m = positive(name, m, "m")?;
                let anchor = param(name, anchor, "anchor")?;
                if size.checked_pow(n as u32).is_none_or(|len| len > 1 << 24) {
                    return Err(GalleryError::Parameters {
                        name: name.to_string(),
                        reason: format!("table of size {size}^{n} is too large"),
                    });
                }
                generic_majority(size, n, m, anchor as Element)
            }
            _ => Err(wrong_arity()),
        },
        "klein"
        | "n5"
        | "m3"
        | "v35_lattice_witness"
        | "v35_chain_witness"
        | "v35_group_witness"
            if parts.len() > 1 =>
        {
            Err(wrong_arity())
        }
        "klein" => Ok(klein_group()),
        "n5" => Ok(pentagon()),
        "m3" => Ok(diamond()),
        "v35_lattice_witness" => Ok(v35_lattice_witness()),
        "v35_chain_witness" => Ok(v35_chain_witness()),
        "v35_group_witness" => Ok(v35_group_witness()),
        _ => Err(GalleryError::Unknown(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_exact_majority, check_identity};
    use crate::format::{format_algebra, parse_algebra};
    use crate::term::{parse_term, Term};

    fn holds(alg: &FiniteAlgebra, lhs: &str, rhs: &str) -> bool {
        let (l, r) = (parse_term(lhs).unwrap(), parse_term(rhs).unwrap());
        let nvars = l.max_var().max(r.max_var());
        check_identity(alg, &l, &r, nvars).unwrap().passed()
    }

    fn is_group(alg: &FiniteAlgebra, mul: &str, inv: &str, unit: &str) -> bool {
        holds(
            alg,
            &format!("({mul} ({mul} x1 x2) x3)"),
            &format!("({mul} x1 ({mul} x2 x3))"),
        ) && holds(alg, &format!("({mul} x1 {unit})"), "x1")
            && holds(alg, &format!("({mul} {unit} x1)"), "x1")
            && holds(alg, &format!("({mul} x1 ({inv} x1))"), unit)
    }

    fn is_lattice(alg: &FiniteAlgebra) -> bool {
        ["meet", "join"].iter().all(|op| {
            holds(alg, &format!("({op} x1 x2)"), &format!("({op} x2 x1)"))
                && holds(
                    alg,
                    &format!("({op} ({op} x1 x2) x3)"),
                    &format!("({op} x1 ({op} x2 x3))"),
                )
                && holds(alg, &format!("({op} x1 x1)"), "x1")
        }) && holds(alg, "(meet x1 (join x1 x2))", "x1")
            && holds(alg, "(join x1 (meet x1 x2))", "x1")
    }

    #[test]
    fn groups_satisfy_group_axioms() {
        for name in [
            "z_mod:1", "z_mod:2", "z_mod:3", "z_mod:4", "z_mod:6", "klein",
        ] {
            assert!(is_group(&gallery(name).unwrap(), "+", "-", "0"), "{name}");
        }
        for n in 1..=4 {
            assert!(is_group(&symmetric_group(n), "*", "inv", "e"));
        }
        assert_eq!(symmetric_group(3).size(), 6);
        assert!(!holds(&symmetric_group(3), "(* x1 x2)", "(* x2 x1)"));
    }

    #[test]
    fn lattices_satisfy_lattice_axioms() {
        for name in ["chain:1", "chain:2", "chain:3", "chain:5", "n5", "m3"] {
            assert!(is_lattice(&gallery(name).unwrap()), "{name}");
        }
        let n5 = pentagon();
        // N5 is not modular as a lattice: a <= b but a v (c ^ b) != (a v c) ^ b
        assert_ne!(
            n5.apply(1, &[1, n5.apply(0, &[3, 2])]),
            n5.apply(0, &[n5.apply(1, &[1, 3]), 2])
        );
        let m3 = diamond();
        assert_eq!(m3.apply(1, &[1, 2]), 4);
        assert_eq!(m3.apply(0, &[1, 2]), 0);
    }

    #[test]
    fn majority_fixtures_pass_their_checks() {
        let u5 = Term::basic("u", 5);
        for name in [
            "v35_lattice_witness",
            "v35_chain_witness",
            "v35_group_witness",
        ] {
            let a = gallery(name).unwrap();
            assert_eq!(a.operations().len(), 1);
            assert!(
                check_exact_majority(&a, &u5, 5, 3).unwrap().passed(),
                "{name}"
            );
        }
        let a = gallery("example4b:3:4:1:0").unwrap();
        assert!(check_exact_majority(&a, &Term::basic("u", 4), 4, 1)
            .unwrap()
            .passed());
    }

    #[test]
    fn every_fixture_round_trips() {
        let mut names = small_fixtures();
        names.extend(["sym:3", "z_mod:7", "example4b:3:6:2:0"]);
        for name in names {
            let a = gallery(name).unwrap();
            let text = format_algebra(&a);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, a, "{name}");
            assert_eq!(format_algebra(&back), text);
            assert_eq!(a.name(), name);
        }
    }

    #[test]
    fn gallery_errors() {
        assert!(matches!(gallery("nope"), Err(GalleryError::Unknown(_))));
        assert!(matches!(
            gallery("z_mod:0"),
            Err(GalleryError::Parameters { .. })
        ));
        assert!(matches!(
            gallery("z_mod"),
            Err(GalleryError::Parameters { .. })
        ));
        assert!(matches!(
            gallery("klein:2"),
            Err(GalleryError::Parameters { .. })
        ));
        assert!(matches!(
            gallery("sym:6"),
            Err(GalleryError::Parameters { .. })
        ));
        assert!(matches!(
            gallery("example4b:2:4:2:0"),
            Err(GalleryError::Construction(
                ConstructionError::HalfOnNontrivial { n: 4, m: 2 }
            ))
        ));
    }

    #[test]
    fn emitted_bytes_are_stable() {
        assert_eq!(
            format_algebra(&gallery("z_mod:3").unwrap()),
            "algebra z_mod:3\nsize 3\nop + 2\n0 1 2\n1 2 0\n2 0 1\nop - 1\n0 2 1\nop 0 0\n0\n"
        );
    }
}
