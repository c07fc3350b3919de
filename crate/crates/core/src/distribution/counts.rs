use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::DistanceSeries;

/// `#{0 <= i < n : values[i] < s}`.
pub fn xi_count(series: &DistanceSeries, s: &Rational, n: usize) -> Result<usize> {
    let v = prefix(series, n)?;
    Ok(v.iter().filter(|d| *d < s).count())
}

/// `#{0 <= i < n : values[i] >= s}`.
pub fn delta_count(series: &DistanceSeries, s: &Rational, n: usize) -> Result<usize> {
    let v = prefix(series, n)?;
    Ok(v.iter().filter(|d| *d >= s).count())
}

fn prefix(series: &DistanceSeries, n: usize) -> Result<&[Rational]> {
    series
        .values()
        .get(..n)
        .ok_or(Error::PrefixOutOfRange { n, len: series.horizon() })
}

/// Running `xi` counts for every prefix: `out[n] = xi_n`, `out.len() == horizon + 1`.
pub fn xi_prefix_counts(values: &[Rational], s: &Rational) -> Vec<u64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut c = 0u64;
    out.push(0);
    for v in values {
        if v < s {
            c += 1;
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(v: &[i64]) -> DistanceSeries {
        DistanceSeries::new(v.iter().map(|&x| rat(x, 1)).collect(), "test").unwrap()
    }

    #[test]
    fn examples() {
        let s = series(&[1, 0, 2, 0, 1]);
        assert_eq!(xi_count(&s, &rat(1, 1), 5).unwrap(), 2);
        assert_eq!(delta_count(&s, &rat(1, 1), 5).unwrap(), 3);
        assert_eq!(delta_count(&s, &rat(1, 1), 0).unwrap(), 0);
        let zeros = series(&[0; 9]);
        assert_eq!(xi_count(&zeros, &rat(1, 1000), 9).unwrap(), 9);
    }

    #[test]
    fn prefix_out_of_range() {
        let s = series(&[1, 2]);
        assert!(matches!(xi_count(&s, &rat(1, 1), 3), Err(Error::PrefixOutOfRange { .. })));
        assert!(delta_count(&s, &rat(1, 1), 3).is_err());
    }

    #[test]
    fn count_identity_on_random_prefixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let values: Vec<Rational> = (0..2000).map(|_| rat(rng.gen_range(0..40), 8)).collect();
        let s = DistanceSeries::new(values, "random").unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(0..=2000);
            let t = rat(rng.gen_range(1..48), 8);
            assert_eq!(xi_count(&s, &t, n).unwrap() + delta_count(&s, &t, n).unwrap(), n);
        }
        let t = rat(17, 8);
        let prefix = xi_prefix_counts(s.values(), &t);
        for n in [0, 1, 10, 999, 2000] {
            assert_eq!(prefix[n] as usize, xi_count(&s, &t, n).unwrap());
        }
    }
}
