use std::path::PathBuf;

use movq::survival::survival_time_adaptive;
use movq::witness::witness_optimized;
use movq::{von_neumann_entropy, AmplitudeSolution, PhysicalParams, QubitEvolution, Survival};

const THRESHOLD: f64 = 0.05;
const GAMMA_DT: f64 = 0.25;

fn survival<F: Fn(&QubitEvolution, f64) -> f64>(beta: f64, observable: F) -> f64 {
    let evo = QubitEvolution::new(PhysicalParams::reference(beta).unwrap()).unwrap();
    let f = |gt: f64| observable(&evo, evo.params().seconds(gt));
    match survival_time_adaptive(f, GAMMA_DT, THRESHOLD, 1000.0, 4e6).unwrap() {
        Survival::Time(t) => t,
        Survival::BeyondHorizon => panic!("beta {beta}: no decay within horizon"),
    }
}

fn entropy(evo: &QubitEvolution, t: f64) -> f64 {
    von_neumann_entropy(&evo.state(t)).unwrap()
}

#[test]
fn optimised_witness_lives_longer_with_speed() {
    let times: Vec<f64> =
        [0.0, 0.05e-9, 0.1e-9, 0.5e-9, 1e-9].iter().map(|&b| survival(b, |e, t| witness_optimized(t, e))).collect();
    assert!(times.windows(2).all(|w| w[1] > w[0]), "{times:?}");
}

#[test]
fn entanglement_lives_longer_with_speed_above_slow_limit() {
    let times: Vec<f64> = [0.05e-9, 0.1e-9, 0.5e-9, 0.7e-9, 1e-9].iter().map(|&b| survival(b, entropy)).collect();
    assert!(times.windows(2).all(|w| w[1] > w[0]), "{times:?}");
    assert!(times[4] >= 50.0 * times[1], "{times:?}");
}

#[test]
fn entropy_vanishes_at_start_and_after_full_decay() {
    let evo = QubitEvolution::new(PhysicalParams::reference(0.0).unwrap()).unwrap();
    assert!(entropy(&evo, 0.0) < 1e-12);
    assert!(entropy(&evo, evo.params().seconds(5000.0)) < 1e-3);
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/amplitude_beta_1e-10.txt")
}

#[test]
fn amplitude_record_matches_golden() {
    let computed = AmplitudeSolution::new(&PhysicalParams::reference(0.1e-9).unwrap()).unwrap();
    if std::env::var_os("MOVQ_BLESS").is_some() {
        std::fs::write(golden_path(), computed.to_record()).unwrap();
    }
    let golden = AmplitudeSolution::from_record(&std::fs::read_to_string(golden_path()).unwrap()).unwrap();
    assert_eq!(golden.gamma(), computed.gamma());
    for (g, c) in golden.roots().iter().zip(computed.roots()).chain(golden.residues().iter().zip(computed.residues())) {
        assert!((g - c).norm() <= 1e-10 * g.norm().max(1e-6), "{g} vs {c}");
    }
}
