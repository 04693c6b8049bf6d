//! The generic predict/update recursion against direct enumeration of the
//! joint posterior over state paths.

use dbf_core::filter::{predict, update, DiscreteBelief};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct System {
    initial: Vec<f64>,
    transition: Vec<Vec<f64>>,
    likelihood: Vec<Vec<f64>>,
}

/// Filtered marginal at every frame, by summing path weights
/// `p(s_1) Π p(s_t | s_{t-1}) Π p(z_t | s_t)` over all paths of each prefix.
fn brute_force(sys: &System) -> Vec<Vec<f64>> {
    let n = sys.initial.len();
    let frames = sys.likelihood.len();
    let mut out = Vec::new();
    for t in 1..=frames {
        let mut marginal = vec![0.0; n];
        let mut path = vec![0usize; t];
        loop {
            let mut w = sys.initial[path[0]] * sys.likelihood[0][path[0]];
            for k in 1..t {
                w *= sys.transition[path[k - 1]][path[k]] * sys.likelihood[k][path[k]];
            }
            marginal[path[t - 1]] += w;
            // Odometer increment over the n^t paths.
            let mut k = 0;
            while k < t {
                path[k] += 1;
                if path[k] < n {
                    break;
                }
                path[k] = 0;
                k += 1;
            }
            if k == t {
                break;
            }
        }
        let z: f64 = marginal.iter().sum();
        out.push(marginal.into_iter().map(|m| m / z).collect());
    }
    out
}

fn recursion(sys: &System) -> Vec<DiscreteBelief<usize>> {
    let states: Vec<usize> = (0..sys.initial.len()).collect();
    let prior = DiscreteBelief::new(states, sys.initial.clone()).unwrap();
    let mut belief = update(&prior, &sys.likelihood[0]).unwrap();
    let mut out = vec![belief.clone()];
    for lik in &sys.likelihood[1..] {
        let predicted = predict(&belief, |i, j| sys.transition[*i][*j]).unwrap();
        belief = update(&predicted, lik).unwrap();
        out.push(belief.clone());
    }
    out
}

fn row_stochastic(rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.into_iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

fn arb_system(max_states: usize, max_frames: usize) -> impl Strategy<Value = System> {
    (1..=max_states, 1..=max_frames).prop_flat_map(|(n, t)| {
        (
            prop::collection::vec(0.01f64..1.0, n),
            prop::collection::vec(prop::collection::vec(0.01f64..1.0, n), n),
            prop::collection::vec(prop::collection::vec(1e-3f64..1.0, n), t),
        )
            .prop_map(|(initial, rows, likelihood)| System { initial, transition: row_stochastic(rows), likelihood })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_path_enumeration(sys in arb_system(5, 6)) {
        let truth = brute_force(&sys);
        for (b, exact) in recursion(&sys).iter().zip(&truth) {
            for (w, e) in b.weights().iter().zip(exact) {
                prop_assert!((w - e).abs() < 1e-10, "{w} vs {e}");
            }
            prop_assert!((b.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn likelihood_rescaling_is_absorbed(sys in arb_system(8, 1), c in prop::sample::select(vec![1e-6, 0.3, 1.0, 1e6])) {
        let states: Vec<usize> = (0..sys.initial.len()).collect();
        let prior = DiscreteBelief::new(states, sys.initial.clone()).unwrap();
        let scaled: Vec<f64> = sys.likelihood[0].iter().map(|l| l * c).collect();
        let a = update(&prior, &sys.likelihood[0]).unwrap();
        let b = update(&prior, &scaled).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn resuming_from_exported_belief_is_bit_exact(sys in arb_system(6, 8), cut in 0usize..8) {
        let full = recursion(&sys);
        let cut = cut.min(full.len() - 1);
        let exported: (Vec<usize>, Vec<f64>) = (full[cut].states().to_vec(), full[cut].weights().to_vec());
        let mut belief = DiscreteBelief::from_normalized(exported.0, exported.1).unwrap();
        for (t, lik) in sys.likelihood.iter().enumerate().skip(cut + 1) {
            let predicted = predict(&belief, |i, j| sys.transition[*i][*j]).unwrap();
            belief = update(&predicted, lik).unwrap();
            prop_assert_eq!(belief.weights(), full[t].weights());
        }
    }
}

#[test]
fn two_state_hand_example() {
    // Sticky chain, observations favour state 1 twice.
    let sys = System {
        initial: vec![0.5, 0.5],
        transition: vec![vec![0.9, 0.1], vec![0.2, 0.8]],
        likelihood: vec![vec![0.2, 0.6], vec![0.3, 0.9]],
    };
    // Frame 1: (0.1, 0.3) / 0.4 = (0.25, 0.75).
    // Predict: (0.25·0.9 + 0.75·0.2, 0.25·0.1 + 0.75·0.8) = (0.375, 0.625).
    // Update: (0.1125, 0.5625) / 0.675.
    let b = recursion(&sys);
    assert!((b[0].weights()[0] - 0.25).abs() < 1e-15);
    assert!((b[1].weights()[0] - 0.1125 / 0.675).abs() < 1e-15);
    assert!((brute_force(&sys)[1][1] - 0.5625 / 0.675).abs() < 1e-15);
}
