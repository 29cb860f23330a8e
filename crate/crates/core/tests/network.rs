//! Forward pass against an independent implementation of the layout.

use evomarket_core::neural::{decode, forward, Activation, Genome, NetInput, PARAM_COUNT};
use proptest::prelude::*;

/// Straight-line evaluation from the documented layout:
/// `W1 (20×6) | W2 (10×20) | W3 (3×10) | b1 | b2 | b3`, row-major.
fn oracle(p: &[f64], x: [f64; 6]) -> [f64; 3] {
    let (w1, rest) = p.split_at(120);
    let (w2, rest) = rest.split_at(200);
    let (w3, rest) = rest.split_at(30);
    let (b1, rest) = rest.split_at(20);
    let (b2, b3) = rest.split_at(10);
    assert_eq!(b3.len(), 3);

    let mut h1 = [0.0; 20];
    for i in 0..20 {
        let mut z = b1[i];
        for j in 0..6 {
            z += w1[i * 6 + j] * x[j];
        }
        h1[i] = z.tanh();
    }
    let mut h2 = [0.0; 10];
    for i in 0..10 {
        let mut z = b2[i];
        for j in 0..20 {
            z += w2[i * 20 + j] * h1[j];
        }
        h2[i] = z.tanh();
    }
    let mut out = [0.0; 3];
    for i in 0..3 {
        let mut z = b3[i];
        for j in 0..10 {
            z += w3[i * 10 + j] * h2[j];
        }
        out[i] = z;
    }
    out
}

fn genome_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, PARAM_COUNT)
}

fn input_strategy() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-50.0f64..50.0)
}

proptest! {
    #[test]
    fn forward_matches_oracle(params in genome_strategy(), x in input_strategy()) {
        let g = Genome::from_vec(params.clone()).unwrap();
        let input = NetInput {
            d_price: x[0],
            d_interest_bid: x[1],
            d_interest_ask: x[2],
            d_cash: x[3],
            d_shares: x[4],
            d_profit: x[5],
        };
        let got = forward(&g, &input, Activation::Tanh).unwrap();
        let want = oracle(&params, x);
        for k in 0..3 {
            prop_assert!((got[k] - want[k]).abs() <= 1e-9, "output {k}: {} vs {}", got[k], want[k]);
        }
    }

    #[test]
    fn decoded_actions_stay_in_range(raw in prop::array::uniform3(-1e6f64..1e6)) {
        let a = decode(raw);
        prop_assert!(a.shares <= 1000);
        prop_assert!(a.d_price_ticks.abs() <= 100);
    }

    #[test]
    fn wrong_lengths_rejected(len in 0usize..800) {
        prop_assume!(len != PARAM_COUNT);
        prop_assert!(Genome::from_vec(vec![0.0; len]).is_err());
    }
}
