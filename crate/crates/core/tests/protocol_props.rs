mod common;

use common::{code_params, random_code};
use ghz_distill::induce::Placement;
use ghz_distill::protocol::{
    estimate, ChannelModel, InjectedErrors, ProtocolConfig, ProtocolEngine, ProtocolKind, Topology,
};
use ghz_distill::tableau::ConstantOutcome;
use ghz_distill::{PauliOperator, StabilizerCode};
use proptest::prelude::*;

const TOPOLOGIES: [Topology; 2] = [Topology::Chain, Topology::SplitAtSource];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Noiseless channels never fail, for any code, placement and topology.
    #[test]
    fn noiseless_random_codes_succeed((n, r, seed) in code_params(4), trial_seed in any::<u64>()) {
        let code = random_code(n, r, seed);
        for placement in Placement::ALL {
            for topology in TOPOLOGIES {
                let cfg = ProtocolConfig::ghz(code.clone(), placement, topology, ChannelModel::noiseless())
                    .with_trials(8, trial_seed);
                prop_assert_eq!(estimate(&cfg).unwrap().failures, 0);
            }
        }
        let bell = ProtocolConfig::bell(code, ChannelModel::noiseless()).with_trials(8, trial_seed);
        prop_assert_eq!(estimate(&bell).unwrap().failures, 0);
    }

    /// A stabilizer of the transmitted state is invisible: injecting Z_{B_i}Z_{C_i}
    /// never causes a failure.
    #[test]
    fn stabilizer_errors_are_harmless((n, r, seed) in code_params(4), q in 0usize..4) {
        let code = random_code(n, r, seed);
        let q = q % n;
        for placement in Placement::ALL {
            let cfg = ProtocolConfig::ghz(code.clone(), placement, Topology::Chain, ChannelModel::noiseless());
            let engine = ProtocolEngine::new(cfg).unwrap();
            let mut errs = InjectedErrors::none(engine.config());
            let mut letters = vec!['I'; 2 * n];
            letters[q] = 'Z';
            letters[n + q] = 'Z';
            errs.first = letters.iter().collect::<String>().parse().unwrap();
            let r = engine.run_injected(&errs, &mut ConstantOutcome(false), None).unwrap();
            prop_assert!(r.success);
        }
    }
}

#[test]
fn report_is_independent_of_thread_count() {
    let cfg = ProtocolConfig::ghz(
        StabilizerCode::five_qubit(),
        Placement::AliceApplies,
        Topology::Chain,
        ChannelModel::depolarizing(0.04).unwrap(),
    )
    .with_trials(3000, 77);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| estimate(&cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn bell_logical_error_is_a_failure() {
    let code = StabilizerCode::five_qubit();
    let engine = ProtocolEngine::new(ProtocolConfig::bell(code.clone(), ChannelModel::noiseless())).unwrap();
    assert_eq!(engine.config().protocol, ProtocolKind::Bell);
    let mut errs = InjectedErrors::none(engine.config());
    errs.first = code.logicals().unwrap().zbar[0].clone();
    let r = engine.run_injected(&errs, &mut ConstantOutcome(true), None).unwrap();
    assert!(!r.success);
    errs.first = "XZZXI".parse::<PauliOperator>().unwrap();
    assert!(engine.run_injected(&errs, &mut ConstantOutcome(true), None).unwrap().success);
}
