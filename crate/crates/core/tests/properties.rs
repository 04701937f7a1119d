use proptest::prelude::*;
use weaklog_core::algebra::{coarsest_stable_partition, product, projection, FiniteAlgebra, Partition};
use weaklog_core::bimatrix::{bimatrix_entails, leibniz_reduce, Bimatrix};
use weaklog_core::heyting::{check_residuation, posets_up_to_iso, upset_algebra, ipc_equiv_bounded};
use weaklog_core::proofsys::{check_derivation, dnf, AxiomSystem, Derivation, DerivationLine, Justification, SystemName};
use weaklog_core::syntax::{parse, Formula, Signature, Substitution};
use weaklog_core::team::{inqb_entails, kripke_models, supports_classical, supports_kripke, TeamSpace};

fn formula(atoms: u32, tensor: bool, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![(0..atoms).prop_map(Formula::atom), Just(Formula::bot())];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        let bin = prop_oneof![Just(0u8), Just(1), Just(2), Just(if tensor { 3 } else { 2 })];
        (bin, inner.clone(), inner).prop_map(|(k, a, b)| match k {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::imp(a, b),
            _ => Formula::tensor(a, b),
        })
    })
}

fn heyting_chain(n: usize) -> FiniteAlgebra {
    let sig = Signature::int();
    FiniteAlgebra::from_fn(sig, n, |op, args| {
        let top = n as u32 - 1;
        match op {
            0 => args[0].min(args[1]),
            1 => args[0].max(args[1]),
            2 if args[0] <= args[1] => top,
            2 => args[1],
            _ => 0,
        }
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_round_trips(f in formula(4, true, 5)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, &Signature::inq()).unwrap(), f);
    }

    #[test]
    fn substitution_composes(f in formula(3, false, 4), a in formula(3, false, 2), b in formula(3, false, 2)) {
        let s = Substitution::single(0, a);
        let t = Substitution::from_pairs([(0, b.clone()), (1, b)]);
        prop_assert_eq!(s.apply(&t.apply(&f)), s.compose(&t).apply(&f));
    }

    #[test]
    fn team_space_agrees_with_recursion(f in formula(3, true, 4), team in 0u32..256) {
        let space = TeamSpace::new(3).unwrap();
        let p = space.denote(&f).unwrap();
        prop_assert_eq!(p.contains(team), supports_classical(3, team, &f).unwrap());
    }

    #[test]
    fn support_is_downward_closed(f in formula(2, true, 4)) {
        let space = TeamSpace::new(2).unwrap();
        let p = space.denote(&f).unwrap();
        prop_assert!(p.contains(0));
        for t in p.teams() {
            for s in 0..16u32 {
                if s & t == s {
                    prop_assert!(p.contains(s));
                }
            }
        }
    }

    #[test]
    fn dnf_is_standard_and_equivalent(f in formula(3, true, 3)) {
        if let Ok(ds) = dnf(&f) {
            prop_assert!(ds.iter().all(Formula::is_or_free));
            let joined = Formula::disjunction(ds).unwrap();
            prop_assert!(inqb_entails(&[f.clone()], &joined).unwrap().is_none());
            prop_assert!(inqb_entails(&[joined], &f).unwrap().is_none());
        }
    }

    #[test]
    fn ipc_equivalence_is_symmetric(f in formula(2, false, 3), g in formula(2, false, 3)) {
        let a = ipc_equiv_bounded(&f, &g, 3).unwrap().is_equivalent();
        let b = ipc_equiv_bounded(&g, &f, 3).unwrap().is_equivalent();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn axiom_instances_are_sound(idx in 0usize..16, a in formula(3, true, 2), b in formula(3, true, 2),
                                 c in formula(3, true, 2), d in formula(3, true, 2)) {
        let sys = AxiomSystem::new(SystemName::InqBt);
        let (label, schema) = &sys.schemas()[idx];
        let pick = [a, b, c, d];
        let assignment = schema
            .metavariables()
            .map(|m| {
                let g = &pick[m as usize % 4];
                let g = if schema.sort(m) == weaklog_core::syntax::Sort::Standard {
                    dnf(g).map(|v| v[0].clone()).unwrap_or_else(|_| Formula::atom(m % 3))
                } else {
                    g.clone()
                };
                (m, g)
            })
            .collect();
        let inst = schema.instantiate(&assignment);
        let d = Derivation {
            lines: vec![DerivationLine {
                formula: inst.clone(),
                justification: Justification::Axiom { schema: label.clone(), assignment: Some(assignment) },
            }],
        };
        prop_assert!(check_derivation(&sys, &[], &d, None).unwrap().is_valid());
        prop_assert!(inqb_entails(&[], &inst).unwrap().is_none(), "{} instance {}", label, inst);
    }

    #[test]
    fn products_project_homomorphically(m in 2usize..4, n in 2usize..4) {
        let (a, b) = (heyting_chain(m), heyting_chain(n));
        let p = product(&[&a, &b], 1000).unwrap();
        prop_assert!(p.is_homomorphism(&a, &projection(&[m, n], 0)));
        prop_assert!(p.is_homomorphism(&b, &projection(&[m, n], 1)));
    }

    #[test]
    fn stable_partitions_are_congruences(n in 2usize..6, labels in proptest::collection::vec(0u32..3, 6)) {
        let a = heyting_chain(n);
        let init = Partition::from_labels(&labels[..n]);
        let p = coarsest_stable_partition(&a, &init);
        prop_assert!(p.refines(&init));
        prop_assert!(p.is_congruence(&a));
    }

    #[test]
    fn reduction_is_idempotent_and_sound(n in 2usize..5, truth in 0u32..16, core in 1u32..16,
                                         g in formula(2, false, 2), f in formula(2, false, 2)) {
        let pick = |mask: u32| (0..n as u32).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>();
        let core = if pick(core).is_empty() { vec![0] } else { pick(core) };
        let m = Bimatrix::new(heyting_chain(n), &pick(truth), &core).unwrap();
        let (r, _) = leibniz_reduce(&m).unwrap();
        let (rr, id) = leibniz_reduce(&r).unwrap();
        prop_assert_eq!(&rr, &r);
        prop_assert_eq!(id, (0..r.size() as u32).collect::<Vec<_>>());
        let before = bimatrix_entails(std::slice::from_ref(&m), std::slice::from_ref(&g), &f).unwrap().is_none();
        let after = bimatrix_entails(&[r], &[g], &f).unwrap().is_none();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn upset_algebras_are_heyting() {
    for n in 1..=4 {
        for p in posets_up_to_iso(n) {
            check_residuation(upset_algebra(&p).unwrap().alg()).unwrap();
        }
    }
}

#[test]
fn kripke_denotation_agrees_with_recursion() {
    let fs: Vec<Formula> = ["p0 -> p1", "~~p0 -> p0", "(p0 -> p1 | bot) -> (p0 -> p1) | (p0 -> bot)", "p0 * ~p0", "~(p0 * p1)"]
        .iter()
        .map(|s| parse(s, &Signature::inq()).unwrap())
        .collect();
    for m in kripke_models(3, 2).unwrap() {
        for f in &fs {
            let d = m.denote(f).unwrap();
            for t in 0..1u64 << m.poset().len() {
                assert_eq!(d >> t & 1 == 1, supports_kripke(&m, t, f).unwrap(), "{f} team {t:b}");
            }
        }
    }
}
