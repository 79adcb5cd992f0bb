use ctp_core::enumerate::{cyclic_transversals, incidence, transversals, vertices};
use ctp_core::extform::{build_flownet, lp_model, optimize_over_flow, paths};
use ctp_core::ineq::{all_los, lift, los, LosSpec};
use ctp_core::lpfile::LpModel;
use ctp_core::rational::int;
use ctp_core::{BitMatrix, BitVec, BlockConfiguration, Limits, Rational};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = BlockConfiguration> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(d, n)| {
        let block = prop::collection::btree_set(0u64..1 << d, 1..=3);
        prop::collection::vec(block, n).prop_map(move |bs| {
            let blocks = bs
                .into_iter()
                .map(|s| s.into_iter().map(|e| BitVec::new(d, e).unwrap()).collect())
                .collect();
            BlockConfiguration::new(d, blocks).unwrap()
        })
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(0u64..1 << cols, rows)
        .prop_map(move |rs| BitMatrix::from_rows(cols, &rs.into_iter().map(|r| BitVec::new(cols, r).unwrap()).collect::<Vec<_>>()).unwrap())
}

fn objective(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-6i64..=6, len).prop_map(|v| v.into_iter().map(int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclic_transversals_are_the_zero_sum_transversals(b in config()) {
        let lim = Limits::default();
        let mut all: Vec<_> = transversals(&b, &lim).unwrap().into_iter().filter(|t| t.is_cyclic()).collect();
        let mut ct = cyclic_transversals(&b, &lim).unwrap();
        all.sort();
        ct.sort();
        prop_assert_eq!(all, ct);
    }

    #[test]
    fn incidence_vectors_sum_to_one_per_block(b in config()) {
        for xi in cyclic_transversals(&b, &Limits::default()).unwrap() {
            let p = incidence(&xi, &b).unwrap().to_point();
            for i in 0..b.len() {
                let s: Rational = b.block_range(i).map(|k| p[k].clone()).sum();
                prop_assert_eq!(s, int(1));
            }
        }
    }

    #[test]
    fn transpose_is_adjoint(phi in matrix(3, 4), eta in 0u64..8, w in 0u64..16) {
        let eta = BitVec::new(3, eta).unwrap();
        let w = BitVec::new(4, w).unwrap();
        let lhs = eta.dot(&phi.apply(&w).unwrap()).unwrap();
        let rhs = phi.transpose_apply(&eta).unwrap().dot(&w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn los_inequalities_are_valid(b in config()) {
        let lim = Limits::default();
        let verts = vertices(&b, &lim).unwrap();
        for (_, q) in all_los(&b, false, &lim).unwrap() {
            for v in &verts {
                prop_assert!(q.evaluate(&b, v).unwrap().satisfied());
            }
        }
    }

    #[test]
    fn lifted_los_is_valid(b in config(), phi_bits in prop::collection::vec(0u64..8, 2), eta in 1u64..4) {
        let d = b.d();
        let rows: Vec<BitVec> = phi_bits.iter().map(|r| BitVec::new(d, r & ((1 << d) - 1)).unwrap()).collect();
        let phi = BitMatrix::from_rows(d, &rows).unwrap();
        let image = b.image(&phi).unwrap();
        let spec = LosSpec::new(BitVec::new(2, eta).unwrap(), [0]).unwrap();
        let lifted = lift(&phi, &b, &los(&image, &spec).unwrap()).unwrap();
        for v in vertices(&b, &Limits::default()).unwrap() {
            prop_assert!(lifted.evaluate(&b, &v).unwrap().satisfied());
        }
    }

    #[test]
    fn flow_paths_match_cyclic_transversals(b in config(), prune in any::<bool>()) {
        let lim = Limits::default();
        let net = build_flownet(&b, prune, &lim).unwrap();
        let mut from_paths: Vec<_> = paths(&net, &lim).unwrap().iter().map(|p| net.path_transversal(p)).collect();
        let mut ct = cyclic_transversals(&b, &lim).unwrap();
        from_paths.sort();
        ct.sort();
        prop_assert_eq!(from_paths, ct);
    }

    #[test]
    fn flow_optimum_is_vertex_minimum((b, c) in config().prop_flat_map(|b| { let n = b.size(); (Just(b), objective(n)) })) {
        let lim = Limits::default();
        let net = build_flownet(&b, true, &lim).unwrap();
        let lp = optimize_over_flow(&net, &c, &lim).unwrap().map(|(v, _)| v);
        let brute = vertices(&b, &lim)
            .unwrap()
            .iter()
            .map(|v| v.iter().zip(&c).map(|(x, y)| x * y).sum::<Rational>())
            .min();
        prop_assert_eq!(lp, brute);
    }

    #[test]
    fn lp_export_round_trips(b in config()) {
        let net = build_flownet(&b, false, &Limits::default()).unwrap();
        let model = lp_model(&net, None);
        let parsed = LpModel::parse(&model.write(&[])).unwrap();
        prop_assert_eq!(parsed, model);
    }
}
