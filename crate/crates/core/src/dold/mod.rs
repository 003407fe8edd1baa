//! Simplicial GF(2)-modules (FD-modules): models, products, symmetric
//! quotients and their normalized and unnormalized chain complexes.

mod complex;
mod models;
mod module;
mod quotient;
mod random;
mod route;
mod sparse;

pub use complex::{
    alternating_complex, degenerate_dim, homology_through_degree, moore_complex, TruncatedHomology,
};
pub use models::{pointed, pointed_sphere_set, sphere_model, wedge_model};
pub use module::{direct_sum, point_module, product, zero_module, FdModule, FdModuleDoc};
pub use quotient::{
    sym_quotient, sym_quotient2, sym_quotient3, QuotientReport, SymQuotient, TensorPower,
    DEFAULT_TENSOR_CAP,
};
pub use random::{random_fd_module, scramble};
pub use route::{dold_rd_power, dold_rd_power_capped, DoldRoute};
pub use sparse::SparseMap;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{rd3_bouquet_assembly, BouquetSpec};
    use crate::error::Error;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn sphere_model_moore_homology() {
        for m in 1..=3 {
            let h = homology_through_degree(&sphere_model(m, m + 2).unwrap(), m + 1).unwrap();
            let mut expect = vec![0; m + 2];
            expect[m] = 1;
            assert_eq!(h.betti.values, expect);
        }
        let h = homology_through_degree(&sphere_model(2, 4).unwrap(), 3).unwrap();
        assert_eq!(h.betti.values, vec![0, 0, 1, 0]);
        assert_eq!(h.unreliable_from, 3);
    }

    #[test]
    fn truncation_too_shallow() {
        let k = sphere_model(1, 3).unwrap();
        assert!(matches!(
            homology_through_degree(&k, 3),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn circle_level_two_kernel() {
        // Level 2 of the circle model is {001, 011}; d_0 kills 001 and sends
        // 011 to 01, d_1 sends both to 01. The joint kernel of d_0, d_1 is 0.
        let k = sphere_model(1, 3).unwrap();
        assert_eq!(k.levels()[2], 2);
        let c = moore_complex(&k).unwrap();
        assert_eq!(c.dims()[..3], [0, 1, 0]);
    }

    #[test]
    fn zero_module_gives_zero_complex() {
        let z = zero_module(3);
        assert!(moore_complex(&z).unwrap().dims().iter().all(|&d| d == 0));
        assert!(alternating_complex(&z)
            .unwrap()
            .dims()
            .iter()
            .all(|&d| d == 0));
        let q = sym_quotient3(&z).unwrap();
        assert!(q.module.is_zero());
    }

    #[test]
    fn corrupted_face_is_caught() {
        let k = sphere_model(1, 3).unwrap();
        let bad = SparseMap::zero(k.levels()[1], k.levels()[2]);
        let k = k.with_face(2, 0, bad).unwrap();
        match k.check_axioms() {
            Err(Error::Axiom { axiom, .. }) => assert!(!axiom.is_empty()),
            other => panic!("expected an axiom violation, got {other:?}"),
        }
        assert!(moore_complex(&k).is_err());
    }

    #[test]
    fn products() {
        let s1 = sphere_model(1, 4).unwrap();
        let pt = point_module(4);
        let unit = product(&s1, &pt).unwrap();
        assert_eq!(
            moore_complex(&unit).unwrap().betti().unwrap(),
            moore_complex(&s1).unwrap().betti().unwrap()
        );
        // Reduced models multiply to the smash product: S^1 ^ S^1 = S^2.
        let smash = product(&s1, &s1).unwrap();
        let h = homology_through_degree(&smash, 3).unwrap();
        assert_eq!(h.betti.values, vec![0, 0, 1, 0]);
        let s = sphere_model(1, 3).unwrap();
        let cube = product(&product(&s, &s).unwrap(), &s).unwrap();
        for q in 0..=3 {
            assert_eq!(cube.levels()[q], s.levels()[q].pow(3));
        }
        assert!(matches!(
            product(&s1, &point_module(3)),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn lazy_tensor_matches_materialized_cube() {
        let base = pointed(&sphere_model(1, 3).unwrap()).unwrap();
        let cube = product(&product(&base, &base).unwrap(), &base).unwrap();
        let tp = TensorPower::new(&base, 3, DEFAULT_TENSOR_CAP).unwrap();
        for q in 1..=3 {
            for i in 0..=q {
                for t in 0..tp.level_size(q) as u32 {
                    assert_eq!(tp.face(q, i, &[t]), cube.face(q, i).column(t as usize));
                }
            }
        }
    }

    #[test]
    fn quotient_dims_match_orbit_count() {
        let base = pointed(&wedge_model(&BouquetSpec::new(1, vec![2], false).unwrap(), 4).unwrap())
            .unwrap();
        let q = sym_quotient3(&base).unwrap();
        for (lvl, &n) in base.levels().iter().enumerate() {
            // Orbits of triples with distinct entries under the symmetric group.
            let mut orbits = std::collections::BTreeSet::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if a != b && b != c && a != c {
                            let mut t = [a, b, c];
                            t.sort_unstable();
                            orbits.insert(t);
                        }
                    }
                }
            }
            assert_eq!(q.module.levels()[lvl], orbits.len());
            assert_eq!(orbits.len(), binom(n, 3));
        }
        assert_eq!(q.report.extra_repeats_outside_span, 0);
        assert!(q.report.extra_repeats_checked > 0);
        assert_eq!(q.report.residual_generators, 0);
        assert!(q.report.descent_checks > 0);
        q.module.check_axioms().unwrap();
    }

    #[test]
    fn circle_cube_total_two() {
        let r = dold_rd_power(&BouquetSpec::sphere(1), 3).unwrap();
        assert_eq!(r.betti.values, vec![0, 0, 1, 1]);
        assert_eq!(r.total, 2);
    }

    #[test]
    fn square_routes() {
        let r = dold_rd_power(&BouquetSpec::sphere(1), 2).unwrap();
        assert_eq!(r.betti.values, vec![0, 1, 1]);
        let r = dold_rd_power(&BouquetSpec::sphere(2), 2).unwrap();
        assert_eq!(r.betti.values, vec![0, 0, 1, 1, 1]);
    }

    #[test]
    fn two_circle_wedge_matches_assembly() {
        let spec = BouquetSpec::new(1, vec![2], false).unwrap();
        let w = wedge_model(&spec, 4).unwrap();
        let h = homology_through_degree(&w, 1).unwrap();
        assert_eq!(h.betti.values, vec![0, 2]);
        let r = dold_rd_power(&spec, 3).unwrap();
        let a = rd3_bouquet_assembly(&spec).unwrap();
        assert_eq!(r.total as i64, a.total);
        assert_eq!(r.total, 7);
    }

    #[test]
    fn reduced_cube_misses_a_class() {
        // Without the disjoint basepoint the quotient loses the classes that
        // involve the basepoint, so the basepoint summand is required.
        let s = sphere_model(1, 5).unwrap();
        let q = sym_quotient3(&s).unwrap();
        let h = homology_through_degree(&q.module, 3).unwrap();
        assert_ne!(h.betti.sum(), 2);
    }

    #[test]
    fn pointed_set_agrees_with_direct_sum() {
        let a = sym_quotient3(&pointed_sphere_set(1, 5).unwrap()).unwrap();
        let b = sym_quotient3(&pointed(&sphere_model(1, 5).unwrap()).unwrap()).unwrap();
        assert_eq!(
            homology_through_degree(&a.module, 3).unwrap().betti,
            homology_through_degree(&b.module, 3).unwrap().betti
        );
    }

    #[test]
    fn relabeled_wedges_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = BouquetSpec::new(1, vec![2], false).unwrap();
        let base = pointed(&wedge_model(&spec, 5).unwrap()).unwrap();
        let plain = homology_through_degree(&sym_quotient3(&base).unwrap().module, 3).unwrap();
        let shuffled = scramble(&base, &mut rng).unwrap();
        shuffled.check_axioms().unwrap();
        let other = homology_through_degree(&sym_quotient3(&shuffled).unwrap().module, 3).unwrap();
        assert_eq!(plain.betti, other.betti);
    }

    #[test]
    fn moore_and_alternating_agree_on_random_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let q_max = 3 + trial % 2;
            let k = random_fd_module(&mut rng, q_max, 4).unwrap();
            k.check_axioms().unwrap();
            let moore = moore_complex(&k).unwrap().betti().unwrap();
            let alt = alternating_complex(&k).unwrap().betti().unwrap();
            assert_eq!(moore.values[..q_max], alt.values[..q_max], "trial {trial}");
        }
    }

    #[test]
    fn normalized_plus_degenerate_fills_each_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = random_fd_module(&mut rng, 4, 4).unwrap();
        let moore = moore_complex(&k).unwrap();
        for q in 0..=k.q_max() {
            assert_eq!(
                moore.dims()[q] + degenerate_dim(&k, q),
                k.levels()[q],
                "level {q}"
            );
        }
    }

    #[test]
    fn json_roundtrip() {
        let k = sphere_model(2, 4).unwrap();
        let doc = k.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back = FdModule::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, k);
    }
}
