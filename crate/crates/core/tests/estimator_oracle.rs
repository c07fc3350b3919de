//! Streaming and batch estimators against a brute-force recomputation of every
//! prefix density.

use dcchaos_core::distribution::{estimate_df, Checkpoint, DfAccumulator};
use dcchaos_core::{rat, DistanceSeries, Rational};
use proptest::prelude::*;

fn brute(values: &[Rational], delta: &Rational, window: usize) -> (Rational, Rational) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for n in window.max(1)..=values.len() {
        let c = values[..n].iter().filter(|v| *v < delta).count();
        let f = rat(c as i64, n as i64);
        lo = Some(lo.map_or(f.clone(), |l| Rational::min(l, f.clone())));
        hi = Some(hi.map_or(f.clone(), |h| Rational::max(h, f)));
    }
    (lo.unwrap(), hi.unwrap())
}

proptest! {
    #[test]
    fn estimators_match_brute_force(
        raw in proptest::collection::vec(0i64..=8, 2..200),
        window_frac in 0usize..100,
        cp in 1usize..200,
    ) {
        let values: Vec<Rational> = raw.iter().map(|&v| rat(v, 4)).collect();
        let h = values.len();
        let window = (window_frac * h / 100).min(h - 1).max(1);
        let cp = cp.min(h) as u64;
        let grid: Vec<Rational> = (1..=9).map(|j| rat(j, 4)).collect();
        let series = DistanceSeries::new(values.clone(), "random").unwrap();
        let cps = [Checkpoint::plain(cp)];

        let batch = estimate_df(&series, &grid, window as u64, &cps).unwrap();
        let mut acc = DfAccumulator::new(grid.clone(), window as u64, h as u64, &cps).unwrap();
        for v in &values {
            acc.push(v);
        }
        let streamed = acc.finish().unwrap();
        prop_assert_eq!(&batch, &streamed);

        for (j, d) in grid.iter().enumerate() {
            let (lo, hi) = brute(&values, d, window);
            prop_assert_eq!(&batch.lower[j], &lo);
            prop_assert_eq!(&batch.upper[j], &hi);
            let c = values[..cp as usize].iter().filter(|v| *v < d).count();
            prop_assert_eq!(&batch.checkpoints[0].densities[j], &rat(c as i64, cp as i64));
        }
    }
}
