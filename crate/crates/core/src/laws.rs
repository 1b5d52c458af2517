//! Machine checking of the algebraic laws: the composition-operator table
//! (identity, commutativity, associativity) and the eight reduction laws.
//!
//! Composition laws are checked as canonical-key equalities; the expected
//! non-associativity of sequencing and parallelisation is checked through
//! the standard witness computons. Reduction laws are checked by bounded
//! extensional equivalence: two spaces count as equal when they give
//! identical membership verdicts over an enumeration prefix of the bases
//! plus a seeded random sample of members.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::compose::{agg, difference, intersect, par, seq};
use crate::computon::Computon;
use crate::dsl::pretty;
use crate::enumerate::{enumerate, member};
use crate::formula::{reduce, Formula};
use crate::sample::{
    compose_kind, primitive_pool, random_formula, random_member, random_space, rng_from_seed,
    CompositeKind, COMPOSITE_KINDS,
};
use crate::space::{Space, SpaceKind};

/// Configuration for a law-checking run.
#[derive(Debug, Clone)]
pub struct LawConfig {
    /// Enumeration prefix size per space.
    pub budget: usize,
    /// Random member samples per space.
    pub samples: usize,
    pub seed: u64,
    /// Random (space, φ, ψ) triples per space kind for the reduction laws.
    pub triples_per_kind: usize,
    /// Random spaces added to the composition-law pool.
    pub random_spaces: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            budget: 500,
            samples: 200,
            seed: 42,
            triples_per_kind: 50,
            random_spaces: 24,
        }
    }
}

/// Outcome of one law row.
#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: &'static str,
    pub passed: bool,
    /// Witness note on expected-failure laws, counterexample on failure.
    pub detail: String,
}

/// Check all thirteen laws over the given named spaces plus generated random
/// spaces. Returns one report per law.
pub fn check_laws(named: &[(String, Space)], cfg: &LawConfig) -> Vec<LawReport> {
    let mut rng = rng_from_seed(cfg.seed);
    let prims = primitive_pool(4);
    let mut pool: Vec<Space> = named.iter().map(|(_, s)| s.clone()).collect();
    pool.extend(prims.iter().cloned());
    for _ in 0..cfg.random_spaces {
        pool.push(random_space(&mut rng, &prims, 3));
    }

    let mut reports = vec![
        commutativity_row(&pool),
        aggregation_identity_row(&pool),
        aggregation_associativity_row(&pool, &mut rng),
        sequencing_witness_row(),
        parallelisation_witness_row(),
    ];
    reports.extend(reduction_rows(named, cfg, &mut rng));
    reports
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        let mut rest: Vec<T> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut perm = vec![first.clone()];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

fn composite_kind_of(s: &Space) -> Option<CompositeKind> {
    match s.kind() {
        SpaceKind::Sequential(_) => Some(CompositeKind::Sequential),
        SpaceKind::Parallel(_) => Some(CompositeKind::Parallel),
        SpaceKind::Aggregated(_) => Some(CompositeKind::Aggregated),
        _ => None,
    }
}

/// Operand order never matters: rebuilding any composite from a permutation
/// of its operands gives the identical space.
fn commutativity_row(pool: &[Space]) -> LawReport {
    for s in pool {
        let Some(kind) = composite_kind_of(s) else { continue };
        let ops = s.operands();
        if ops.len() > 5 {
            continue;
        }
        for perm in permutations(ops) {
            match compose_kind(kind, &perm) {
                Ok(rebuilt) if rebuilt == *s => {}
                Ok(rebuilt) => {
                    return LawReport {
                        law: "commutativity",
                        passed: false,
                        detail: format!(
                            "{} != {} under operand permutation",
                            pretty::space_text(s, None),
                            pretty::space_text(&rebuilt, None)
                        ),
                    }
                }
                Err(e) => {
                    return LawReport {
                        law: "commutativity",
                        passed: false,
                        detail: format!("rebuild failed: {e}"),
                    }
                }
            }
        }
    }
    LawReport {
        law: "commutativity",
        passed: true,
        detail: String::new(),
    }
}

fn aggregation_identity_row(pool: &[Space]) -> LawReport {
    for s in pool {
        match agg(&[s.clone(), Space::empty()]) {
            Ok(u) if u == *s => {}
            Ok(u) => {
                return LawReport {
                    law: "aggregation identity",
                    passed: false,
                    detail: format!(
                        "agg({}, empty) = {}",
                        pretty::space_text(s, None),
                        pretty::space_text(&u, None)
                    ),
                }
            }
            Err(e) => {
                return LawReport {
                    law: "aggregation identity",
                    passed: false,
                    detail: format!("agg(s, empty) failed: {e}"),
                }
            }
        }
    }
    LawReport {
        law: "aggregation identity",
        passed: true,
        detail: String::new(),
    }
}

fn aggregation_associativity_row(pool: &[Space], rng: &mut StdRng) -> LawReport {
    for _ in 0..64 {
        let a = pool.choose(rng).unwrap();
        let b = pool.choose(rng).unwrap();
        let c = pool.choose(rng).unwrap();
        let left = agg(&[a.clone(), agg(&[b.clone(), c.clone()]).unwrap()]).unwrap();
        let right = agg(&[agg(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        if left != right {
            return LawReport {
                law: "aggregation associativity",
                passed: false,
                detail: format!(
                    "agg({0}, agg({1}, {2})) != agg(agg({0}, {1}), {2})",
                    pretty::space_text(a, None),
                    pretty::space_text(b, None),
                    pretty::space_text(c, None)
                ),
            };
        }
    }
    LawReport {
        law: "aggregation associativity",
        passed: true,
        detail: String::new(),
    }
}

/// Sequencing must NOT be associative: `<S1,S1>` is a member of
/// `seq(S1, seq(S2, S3))` but not of `seq(seq(S1, S2), S3)`.
fn sequencing_witness_row() -> LawReport {
    let p = primitive_pool(3);
    let right = seq(&[p[0].clone(), seq(&[p[1].clone(), p[2].clone()]).unwrap()]).unwrap();
    let left = seq(&[seq(&[p[0].clone(), p[1].clone()]).unwrap(), p[2].clone()]).unwrap();
    let w = Computon::sequential(vec![p[0].clone(), p[0].clone()]).unwrap();
    let holds = member(&w, &right) && !member(&w, &left) && left != right;
    LawReport {
        law: "sequencing associativity",
        passed: holds,
        detail: if holds {
            "not associative (witness <S1,S1>)".to_string()
        } else {
            "expected witness <S1,S1> to separate the two groupings".to_string()
        },
    }
}

/// Parallelisation must NOT be associative: witness `{S1:5}`.
fn parallelisation_witness_row() -> LawReport {
    let p = primitive_pool(3);
    let right = par(&[p[0].clone(), par(&[p[1].clone(), p[2].clone()]).unwrap()]).unwrap();
    let left = par(&[par(&[p[0].clone(), p[1].clone()]).unwrap(), p[2].clone()]).unwrap();
    let w = Computon::parallel(vec![(p[0].clone(), 5)]).unwrap();
    let holds = member(&w, &right) && !member(&w, &left) && left != right;
    LawReport {
        law: "parallelisation associativity",
        passed: holds,
        detail: if holds {
            "not associative (witness {S1:5})".to_string()
        } else {
            "expected witness {S1:5} to separate the two groupings".to_string()
        },
    }
}

/// Membership probes for a space: its enumeration prefix plus seeded random
/// members, deduplicated.
fn probes(s: &Space, cfg: &LawConfig, rng: &mut StdRng) -> Vec<Computon> {
    let mut out: Vec<Computon> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    if let Ok(stream) = enumerate(s, cfg.budget) {
        for item in stream.flatten() {
            if seen.insert(item.encoding()) {
                out.push(item);
            }
        }
    }
    for _ in 0..cfg.samples {
        if let Some(c) = random_member(rng, s) {
            if seen.insert(c.encoding()) {
                out.push(c);
            }
        }
    }
    out
}

struct Triple {
    base: Space,
    phi: Formula,
    psi: Formula,
    /// Same-kind pair with shared operands for the binary laws, plus a
    /// formula restricted to the shared operands.
    pair: Option<(Space, Space, Formula)>,
}

fn make_triples(named: &[(String, Space)], cfg: &LawConfig, rng: &mut StdRng) -> Vec<Triple> {
    let mut triples = Vec::new();
    for kind in COMPOSITE_KINDS {
        for i in 0..cfg.triples_per_kind {
            let pool = primitive_pool(rng.gen_range(3..=5));
            let base = match kind {
                CompositeKind::Aggregated => {
                    // Mix a composite child in sometimes; membership terms
                    // accept any direct child.
                    let mut children = pool.clone();
                    if children.len() > 2 && rng.gen_bool(0.4) {
                        let sub = seq(&children[..2]).unwrap();
                        children[0] = sub;
                        children.truncate(3);
                    }
                    agg(&children).unwrap()
                }
                _ => compose_kind(kind, &pool).unwrap(),
            };
            let allowed: Vec<Space> = base.operands().to_vec();
            let phi = random_formula(rng, &base, &allowed);
            let psi = random_formula(rng, &base, &allowed);

            // Shared-operand pair of the same kind.
            let shared = primitive_pool(4);
            let left_ops = &shared[..3];
            let right_ops = &shared[1..4];
            let shared_ops = &shared[1..3];
            let pair = compose_kind(kind, left_ops)
                .ok()
                .zip(compose_kind(kind, right_ops).ok())
                .map(|(s1, s2)| {
                    let f = random_formula(rng, &s1, shared_ops);
                    (s1, s2, f)
                });
            let mut triple = Triple { base, phi, psi, pair };

            // Fold the program's own spaces in as bases now and then.
            if i % 7 == 0 {
                if let Some((_, s)) = named
                    .iter()
                    .find(|(_, s)| composite_kind_of(s) == Some(kind))
                {
                    let allowed: Vec<Space> = s.operands().to_vec();
                    if !allowed.is_empty() {
                        triple.base = s.clone();
                        triple.phi = random_formula(rng, s, &allowed);
                        triple.psi = random_formula(rng, s, &allowed);
                    }
                }
            }
            triples.push(triple);
        }
    }
    triples
}

/// Verdict-equality check of two spaces over a probe set.
fn equivalent_over(
    probes: &[Computon],
    lhs: &Space,
    rhs: impl Fn(&Computon) -> bool,
) -> Result<(), Computon> {
    for p in probes {
        if member(p, lhs) != rhs(p) {
            return Err(p.clone());
        }
    }
    Ok(())
}

fn reduction_rows(
    named: &[(String, Space)],
    cfg: &LawConfig,
    rng: &mut StdRng,
) -> Vec<LawReport> {
    let names: [&'static str; 8] = [
        "reduction conjunction",
        "reduction disjunction",
        "reduction negation",
        "reduction over union",
        "reduction over intersection",
        "reduction intersection left",
        "reduction intersection right",
        "reduction commutation",
    ];
    let mut failures: [Option<String>; 8] = Default::default();
    let triples = make_triples(named, cfg, rng);

    for t in &triples {
        let s = &t.base;
        let base_probes = probes(s, cfg, rng);
        let sel_phi = reduce(s, &t.phi).expect("generated formula is well-formed");
        let sel_psi = reduce(s, &t.psi).expect("generated formula is well-formed");

        let fail = |probe: &Computon, law: &str| {
            format!(
                "{law} failed on probe {} over {}",
                pretty::computon_text(probe, None),
                pretty::space_text(s, None)
            )
        };

        if failures[0].is_none() {
            let lhs = reduce(s, &Formula::and(t.phi.clone(), t.psi.clone())).unwrap();
            let rhs_space = intersect(&sel_phi, &sel_psi);
            if let Err(p) = equivalent_over(&base_probes, &lhs, |c| member(c, &rhs_space)) {
                failures[0] = Some(fail(&p, names[0]));
            }
        }
        if failures[1].is_none() {
            let lhs = reduce(s, &Formula::or(t.phi.clone(), t.psi.clone())).unwrap();
            if let Err(p) = equivalent_over(&base_probes, &lhs, |c| {
                member(c, &sel_phi) || member(c, &sel_psi)
            }) {
                failures[1] = Some(fail(&p, names[1]));
            }
        }
        if failures[2].is_none() {
            let lhs = reduce(s, &Formula::not(t.phi.clone())).unwrap();
            let rhs_space = difference(s, &sel_phi);
            if let Err(p) = equivalent_over(&base_probes, &lhs, |c| member(c, &rhs_space)) {
                failures[2] = Some(fail(&p, names[2]));
            }
        }
        if failures[7].is_none() {
            let lhs = reduce(&reduce(s, &t.psi).unwrap(), &t.phi).unwrap();
            let rhs = reduce(&sel_phi, &t.psi).unwrap();
            if let Err(p) = equivalent_over(&base_probes, &lhs, |c| member(c, &rhs)) {
                failures[7] = Some(fail(&p, names[7]));
            }
        }

        if let Some((s1, s2, f)) = &t.pair {
            let mut pair_probes = probes(s1, cfg, rng);
            pair_probes.extend(probes(s2, cfg, rng));
            let sel1 = reduce(s1, f).expect("well-formed for left");
            let sel2 = reduce(s2, f).expect("well-formed for right");
            let pair_fail = |probe: &Computon, law: &str| {
                format!(
                    "{law} failed on probe {} over {} / {}",
                    pretty::computon_text(probe, None),
                    pretty::space_text(s1, None),
                    pretty::space_text(s2, None)
                )
            };

            if failures[3].is_none() {
                let union = agg(&[s1.clone(), s2.clone()]).unwrap();
                if !union.is_empty_space() {
                    let lhs = reduce(&union, f).expect("well-formed for union");
                    if let Err(p) = equivalent_over(&pair_probes, &lhs, |c| {
                        member(c, &sel1) || member(c, &sel2)
                    }) {
                        failures[3] = Some(pair_fail(&p, names[3]));
                    }
                }
            }
            let both = intersect(s1, s2);
            let lhs = reduce(&both, f).expect("well-formed for intersection");
            if failures[4].is_none() {
                let rhs_space = intersect(&sel1, &sel2);
                if let Err(p) = equivalent_over(&pair_probes, &lhs, |c| member(c, &rhs_space)) {
                    failures[4] = Some(pair_fail(&p, names[4]));
                }
            }
            if failures[5].is_none() {
                let rhs_space = intersect(&sel1, s2);
                if let Err(p) = equivalent_over(&pair_probes, &lhs, |c| member(c, &rhs_space)) {
                    failures[5] = Some(pair_fail(&p, names[5]));
                }
            }
            if failures[6].is_none() {
                let rhs_space = intersect(s1, &sel2);
                if let Err(p) = equivalent_over(&pair_probes, &lhs, |c| member(c, &rhs_space)) {
                    failures[6] = Some(pair_fail(&p, names[6]));
                }
            }
        }
    }

    names
        .iter()
        .zip(failures)
        .map(|(law, failure)| match failure {
            None => LawReport {
                law,
                passed: true,
                detail: String::new(),
            },
            Some(detail) => LawReport {
                law,
                passed: false,
                detail,
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_thirteen_laws_pass_on_a_small_run() {
        let cfg = LawConfig {
            budget: 60,
            samples: 30,
            seed: 7,
            triples_per_kind: 4,
            random_spaces: 8,
        };
        let prims = primitive_pool(3);
        let named = vec![
            ("S6".to_string(), seq(&prims[..2]).unwrap()),
            ("S7".to_string(), par(&prims[..2]).unwrap()),
            ("S8".to_string(), agg(&prims).unwrap()),
        ];
        let reports = check_laws(&named, &cfg);
        assert_eq!(reports.len(), 13);
        for r in &reports {
            assert!(r.passed, "law `{}` failed: {}", r.law, r.detail);
        }
    }

    #[test]
    fn witness_rows_carry_their_witnesses() {
        let reports = check_laws(&[], &LawConfig {
            budget: 20,
            samples: 10,
            seed: 1,
            triples_per_kind: 1,
            random_spaces: 2,
        });
        let seq_row = reports
            .iter()
            .find(|r| r.law == "sequencing associativity")
            .unwrap();
        assert!(seq_row.detail.contains("witness <S1,S1>"));
        let par_row = reports
            .iter()
            .find(|r| r.law == "parallelisation associativity")
            .unwrap();
        assert!(par_row.detail.contains("witness {S1:5}"));
    }
}
