#![allow(dead_code)]

use pppca::likelihood::SigmaProfile;
use pppca::spectrum::EigenSpectrum;
use proptest::prelude::*;

pub const FIG1_A: [f64; 10] = [20.0, 15.0, 9.0, 7.0, 6.0, 5.0, 4.0, 2.5, 1.0, 0.5];
pub const FIG1_B: [f64; 10] = [15.0, 12.0, 11.0, 8.0, 7.0, 6.0, 5.0, 3.0, 2.0, 1.0];

pub fn population(d2: &[f64], s2: f64, n: usize, m: usize) -> SigmaProfile<f64> {
    let mut v: Vec<f64> = d2.iter().map(|d| d + s2).collect();
    v.resize(n, s2);
    SigmaProfile::new(EigenSpectrum::new(v, m).unwrap())
}

/// Sorts, rescales to trace `n` and rejects ties.
pub fn decreasing_trace_n(mut v: Vec<f64>) -> Option<Vec<f64>> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = v.len() as f64;
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x *= n / s);
    v.windows(2).all(|w| w[0] > w[1] * (1.0 + 1e-9)).then_some(v)
}

/// Strictly decreasing positive spectra with trace `n`, `n ∈ {5, 20, 100}`.
pub fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![Just(5usize), Just(20), Just(100)]
        .prop_flat_map(|n| prop::collection::vec(0.01f64..10.0, n))
        .prop_filter_map("ties", decreasing_trace_n)
}

/// Spiked spectra: a few large values over a noisy floor.
pub fn spiked_strategy() -> impl Strategy<Value = Vec<f64>> {
    (
        prop_oneof![Just(20usize), Just(50)],
        1usize..6,
        prop::collection::vec(1.0f64..8.0, 6),
        prop::collection::vec(0.2f64..0.4, 50),
    )
        .prop_filter_map("ties", |(n, k, spikes, floor)| {
            let mut v: Vec<f64> = spikes[..k].iter().map(|s| s + 0.5).collect();
            v.extend_from_slice(&floor[..n - k]);
            decreasing_trace_n(v)
        })
}

pub fn profile(v: Vec<f64>, m: usize) -> SigmaProfile<f64> {
    SigmaProfile::new(EigenSpectrum::new(v, m).unwrap())
}
