use ghz_distill::induce::Placement;
use ghz_distill::protocol::{ChannelModel, InjectedErrors, ProtocolConfig, ProtocolEngine, Topology};
use ghz_distill::tableau::RandomOutcomes;
use ghz_distill::{BitVec, PauliOperator, StabilizerCode};
use ghz_oracle::checks::{self, core_multiply};
use ghz_oracle::dense::{dense_pauli, DenseState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n), 0u8..4).prop_map(|(x, z, ph)| {
        PauliOperator::new(BitVec::from_bools(&x), BitVec::from_bools(&z), ph).unwrap()
    })
}

fn pair() -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
    (1usize..=3).prop_flat_map(|n| (pauli(n), pauli(n)))
}

proptest! {
    #[test]
    fn dense_product_matches((p, q) in pair()) {
        prop_assert!(checks::check_product(&p, &q, core_multiply).unwrap() < 1e-12);
    }

    #[test]
    fn dense_transpose_matches(p in (1usize..=3).prop_flat_map(pauli)) {
        prop_assert!(checks::check_transpose(&p).unwrap() < 1e-12);
    }

    #[test]
    fn commutation_matches_dense((p, q) in pair()) {
        let (dp, dq) = (dense_pauli(&p).unwrap(), dense_pauli(&q).unwrap());
        let pq = &dp * &dq;
        let qp = &dq * &dp;
        let dev = if p.anticommutes(&q) { (&pq + &qp).max_deviation(&(&pq - &pq)) } else { pq.max_deviation(&qp) };
        prop_assert!(dev < 1e-12);
    }
}

fn replay_deviation(code: StabilizerCode, placement: Placement, topology: Topology, seed: u64) -> f64 {
    let n = code.n();
    let config = ProtocolConfig::ghz(code, placement, topology, ChannelModel::noiseless());
    let engine = ProtocolEngine::new(config).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = InjectedErrors::none(engine.config());
    errors.first = ChannelModel::depolarizing(0.3).unwrap().sample(2 * n, &mut rng);
    if topology == Topology::Chain {
        errors.second = ChannelModel::depolarizing(0.3).unwrap().sample(n, &mut rng);
    }
    let mut trace = Vec::new();
    let mut coins = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    engine.run_injected(&errors, &mut RandomOutcomes(&mut coins), Some(&mut trace)).unwrap();
    let mut coins = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    let last = engine.final_tableau(&errors, &mut RandomOutcomes(&mut coins)).unwrap();
    checks::check_trace(&DenseState::ghz(n).unwrap(), &trace, &last).unwrap()
}

#[test]
fn protocol_traces_match_dense_replay() {
    for placement in Placement::ALL {
        for topology in [Topology::Chain, Topology::SplitAtSource] {
            for seed in 0..6 {
                let dev = replay_deviation(StabilizerCode::yy3(), placement, topology, seed);
                assert!(dev < 1e-9, "{placement} {topology} seed {seed}: {dev}");
            }
        }
    }
}

#[test]
fn bitflip_trace_matches_dense_replay() {
    for seed in 0..4 {
        assert!(replay_deviation(StabilizerCode::bitflip3(), Placement::BobApplies, Topology::Chain, seed) < 1e-9);
    }
}

#[test]
fn tampered_trace_is_detected() {
    let code = StabilizerCode::yy3();
    let engine = ProtocolEngine::new(ProtocolConfig::ghz(code, Placement::BobApplies, Topology::Chain, ChannelModel::noiseless())).unwrap();
    let errors = InjectedErrors::none(engine.config());
    let mut trace = Vec::new();
    engine.run_injected(&errors, &mut ghz_distill::tableau::ConstantOutcome(false), Some(&mut trace)).unwrap();
    let last = engine.final_tableau(&errors, &mut ghz_distill::tableau::ConstantOutcome(false)).unwrap();
    let ghz = DenseState::ghz(3).unwrap();
    assert!(checks::check_trace(&ghz, &trace, &last).unwrap() < 1e-9);
    // a Z on A_1 flips the sign of a row of the final state
    let bad = last.rows().iter().find(|r| r.x().get(0)).expect("some row acts with X on A_1");
    assert!(bad.x().get(0));
    trace.push(ghz_distill::protocol::TraceOp::Pauli("ZIIIIIIII".parse().unwrap()));
    assert!(checks::check_trace(&ghz, &trace, &last).unwrap() > 0.5);
}
