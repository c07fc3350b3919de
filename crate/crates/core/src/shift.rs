//! Binary full-shift sequences built from run-length rules, with the metric
//! `d(u, v) = 2^{-r}` where `r` is the first index at which `u` and `v` differ.
//!
//! Pairs `(u, 0^∞)` are used as concrete DC1 and strict DC2½ witnesses: for
//! `δ ∈ (1/2, 1]` the event `d(σ^i u, σ^i 0^∞) < δ` is exactly `u_i = 0`, so the
//! distribution functions near `δ = 1` are the lower/upper densities of zeros in `u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::DistanceSeries;

/// Symbols compared beyond position `i` before two sequences are declared equal.
pub const LOOKAHEAD: usize = 64;

/// How run lengths `L_1, L_2, …` are generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BlockRule {
    /// `L_j = length`
    Constant { length: u64 },
    /// `L_j = base^j`
    Power { base: u64 },
    /// `L_j = base^(2^j)`
    DoublyExponential { base: u64 },
    /// First run has length `first`; afterwards each run of zeros is the shortest
    /// that lifts the running zero-density to at least `high`, and each run of ones
    /// the shortest that lowers it to at most `low`.
    TargetDensity { first: u64, low: Rational, high: Rational },
    /// Like `TargetDensity` with targets `1/(offset + j)` and `1 - 1/(offset + j)`
    /// for run `j`, so the oscillation widens towards `[0, 1]`.
    ShrinkingTargets { first: u64, offset: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    #[serde(flatten)]
    pub rule: BlockRule,
    pub start_symbol: u8,
}

impl BlockSpec {
    pub fn new(rule: BlockRule, start_symbol: u8) -> Result<Self> {
        if start_symbol > 1 {
            return Err(Error::Invalid(format!("start symbol must be 0 or 1, got {start_symbol}")));
        }
        match &rule {
            BlockRule::Constant { length: 0 } => {
                return Err(Error::Invalid("run length must be positive".into()))
            }
            BlockRule::Power { base: 0 } | BlockRule::DoublyExponential { base: 0 } => {
                return Err(Error::Invalid("base must be positive".into()))
            }
            BlockRule::TargetDensity { first, low, high } => {
                if *first == 0
                    || !low.is_positive()
                    || low >= high
                    || *high >= Rational::one()
                {
                    return Err(Error::Invalid(
                        "target densities need first > 0 and 0 < low < high < 1".into(),
                    ));
                }
            }
            BlockRule::ShrinkingTargets { first, offset } => {
                if *first == 0 || *offset < 2 {
                    return Err(Error::Invalid("shrinking targets need first > 0 and offset >= 2".into()));
                }
            }
            _ => {}
        }
        Ok(BlockSpec { rule, start_symbol })
    }

    /// Run lengths, paired with the symbol of each run.
    pub fn runs(&self) -> Runs<'_> {
        Runs { spec: self, j: 0, zeros: 0, total: 0 }
    }

    /// `u_0 … u_{n-1}`.
    pub fn prefix(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        for (sym, len) in self.runs() {
            let take = (len as usize).min(n - out.len());
            out.extend(std::iter::repeat(sym).take(take));
            if out.len() == n {
                break;
            }
        }
        out
    }
}

/// Iterator over `(symbol, run length)`.
pub struct Runs<'a> {
    spec: &'a BlockSpec,
    j: u32,
    zeros: u128,
    total: u128,
}

fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

// shortest L >= 1 with (zeros + L)/(total + L) >= p/q, given zeros/total < p/q
fn lift_to(zeros: u128, total: u128, p: u128, q: u128) -> u128 {
    // q(zeros + L) >= p(total + L)  <=>  L >= (p·total - q·zeros)/(q - p)
    let need = (p * total).saturating_sub(q * zeros);
    ceil_div(need, q - p).max(1)
}

// shortest L >= 1 with zeros/(total + L) <= p/q
fn lower_to(zeros: u128, total: u128, p: u128, q: u128) -> u128 {
    // q·zeros <= p(total + L)  <=>  L >= (q·zeros - p·total)/p
    let need = (q * zeros).saturating_sub(p * total);
    ceil_div(need, p).max(1)
}

fn as_fraction(r: &Rational) -> (u128, u128) {
    (
        u128::try_from(r.numer()).expect("target numerator too large"),
        u128::try_from(r.denom()).expect("target denominator too large"),
    )
}

impl Iterator for Runs<'_> {
    type Item = (u8, u64);

    fn next(&mut self) -> Option<(u8, u64)> {
        self.j += 1;
        let j = self.j;
        let sym = if j % 2 == 1 { self.spec.start_symbol } else { 1 - self.spec.start_symbol };
        let len: u128 = match &self.spec.rule {
            BlockRule::Constant { length } => *length as u128,
            BlockRule::Power { base } => (*base as u128).checked_pow(j)?,
            BlockRule::DoublyExponential { base } => {
                (*base as u128).checked_pow(1u32.checked_shl(j)?)?
            }
            BlockRule::TargetDensity { first, low, high } => {
                if j == 1 {
                    *first as u128
                } else if sym == 0 {
                    let (p, q) = as_fraction(high);
                    lift_to(self.zeros, self.total, p, q)
                } else {
                    let (p, q) = as_fraction(low);
                    lower_to(self.zeros, self.total, p, q)
                }
            }
            BlockRule::ShrinkingTargets { first, offset } => {
                let q = *offset as u128 + j as u128;
                if j == 1 {
                    *first as u128
                } else if sym == 0 {
                    lift_to(self.zeros, self.total, q - 1, q)
                } else {
                    lower_to(self.zeros, self.total, 1, q)
                }
            }
        };
        let len = u64::try_from(len).ok()?;
        if sym == 0 {
            self.zeros += len as u128;
        }
        self.total += len as u128;
        Some((sym, len))
    }
}

/// A materialized prefix of a binary sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftPoint {
    pub spec: Option<BlockSpec>,
    symbols: Vec<u8>,
}

impl ShiftPoint {
    pub fn from_spec(spec: BlockSpec, len: usize) -> Self {
        let symbols = spec.prefix(len);
        ShiftPoint { spec: Some(spec), symbols }
    }

    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self> {
        if symbols.iter().any(|&s| s > 1) {
            return Err(Error::Invalid("symbols must be 0 or 1".into()));
        }
        Ok(ShiftPoint { spec: None, symbols })
    }

    pub fn zeros(len: usize) -> Self {
        ShiftPoint { spec: None, symbols: vec![0; len] }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `σ^j(u)`, truncated to what is materialized.
    pub fn shifted(&self, j: usize) -> ShiftPoint {
        ShiftPoint {
            spec: None,
            symbols: self.symbols.get(j..).unwrap_or(&[]).to_vec(),
        }
    }

    /// Grow the prefix to `len` symbols; only possible for spec-generated points.
    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        if len <= self.symbols.len() {
            return Ok(());
        }
        let spec = self
            .spec
            .as_ref()
            .ok_or_else(|| Error::Invalid("cannot extend a point without a block spec".into()))?;
        self.symbols = spec.prefix(len);
        Ok(())
    }
}

/// `2^{-r}` with `r` the first offset at which `σ^i u` and `σ^i v` differ; `0` when
/// they agree on the next `min(LOOKAHEAD, remaining)` symbols.
pub fn shift_distance(u: &ShiftPoint, v: &ShiftPoint, i: usize) -> Rational {
    let len = u.len().min(v.len());
    if i >= len {
        return Rational::zero();
    }
    let look = LOOKAHEAD.min(len - i);
    (0..look)
        .find(|&k| u.symbols[i + k] != v.symbols[i + k])
        .map(|r| Rational::pow2_neg(r as u32))
        .unwrap_or_else(Rational::zero)
}

/// Running zero-density: entry `n - 1` is `#{i < n : u_i = 0} / n` for `n = 1..=horizon`.
pub fn zero_density_profile(u: &ShiftPoint, horizon: usize) -> Result<Vec<Rational>> {
    if horizon == 0 {
        return Err(Error::HorizonTooSmall { min: 1, got: 0 });
    }
    if horizon > u.len() {
        return Err(Error::PrefixOutOfRange { n: horizon, len: u.len() });
    }
    let mut zeros = 0i64;
    Ok(u.symbols[..horizon]
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            if s == 0 {
                zeros += 1;
            }
            Rational::new(zeros, i as i64 + 1)
        })
        .collect())
}

/// Two points of the full shift, materialized far enough for a given horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftPair {
    pub u: ShiftPoint,
    pub v: ShiftPoint,
}

impl ShiftPair {
    pub fn new(u: ShiftPoint, v: ShiftPoint) -> Result<Self> {
        let n = u.len().min(v.len());
        if u.symbols[..n] == v.symbols[..n] {
            return Err(Error::DegeneratePair);
        }
        Ok(ShiftPair { u, v })
    }

    /// Longest horizon with full lookahead available.
    pub fn max_horizon(&self) -> usize {
        self.u.len().min(self.v.len()).saturating_sub(LOOKAHEAD)
    }

    /// `(σ^j u, σ^j v)`.
    pub fn shifted(&self, j: usize) -> ShiftPair {
        ShiftPair { u: self.u.shifted(j), v: self.v.shifted(j) }
    }

    /// `d(σ^i u, σ^i v)` for `i < horizon`, in one backward pass.
    pub fn distance_series(&self, horizon: usize) -> Result<DistanceSeries> {
        if horizon == 0 {
            return Err(Error::HorizonTooSmall { min: 1, got: 0 });
        }
        let len = self.u.len().min(self.v.len());
        if horizon > len {
            return Err(Error::PrefixOutOfRange { n: horizon, len });
        }
        let mut values = vec![Rational::zero(); horizon];
        // next_diff = first index >= i where the sequences differ, or len
        let mut next_diff = len;
        for i in (0..len).rev() {
            if self.u.symbols[i] != self.v.symbols[i] {
                next_diff = i;
            }
            if i < horizon {
                let r = next_diff - i;
                if r < LOOKAHEAD.min(len - i) {
                    values[i] = Rational::pow2_neg(r as u32);
                }
            }
        }
        DistanceSeries::new(values, "shift pair")
    }
}

/// Which distributional chaos class a constructed pair witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DcKind {
    #[serde(rename = "dc1")]
    Dc1,
    #[serde(rename = "dc2half-strict")]
    Dc2HalfStrict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DcPair {
    pub kind: DcKind,
    pub pair: ShiftPair,
    pub spec: BlockSpec,
    /// Limit (liminf, limsup) of the zero-density of `u`.
    pub expected: (Rational, Rational),
}

impl DcKind {
    pub fn spec(self) -> BlockSpec {
        match self {
            // zero-density swings between 1/(20+j) and 1 - 1/(20+j)
            DcKind::Dc1 => BlockSpec::new(BlockRule::ShrinkingTargets { first: 1, offset: 20 }, 0),
            DcKind::Dc2HalfStrict => BlockSpec::new(
                BlockRule::TargetDensity {
                    first: 1,
                    low: Rational::new(1, 4),
                    high: Rational::new(3, 4),
                },
                0,
            ),
        }
        .expect("built-in block spec is valid")
    }

    pub fn expected(self) -> (Rational, Rational) {
        match self {
            DcKind::Dc1 => (Rational::zero(), Rational::one()),
            DcKind::Dc2HalfStrict => (Rational::new(1, 4), Rational::new(3, 4)),
        }
    }
}

/// `(u, 0^∞)` for the requested class, materialized for `horizon` steps plus lookahead.
pub fn make_dc_pair(kind: DcKind, horizon: usize) -> DcPair {
    let spec = kind.spec();
    let len = horizon + LOOKAHEAD;
    let u = ShiftPoint::from_spec(spec.clone(), len);
    let pair = ShiftPair::new(u, ShiftPoint::zeros(len)).expect("constructed pair is not degenerate");
    DcPair { kind, pair, spec, expected: kind.expected() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::xi_prefix_counts;
    use crate::rational::rat;

    fn bits(s: &str) -> ShiftPoint {
        ShiftPoint::from_symbols(s.bytes().map(|b| b - b'0').collect()).unwrap()
    }

    fn render(v: &[u8]) -> String {
        v.iter().map(|b| char::from(b'0' + b)).collect()
    }

    #[test]
    fn block_sequences() {
        let alt = BlockSpec::new(BlockRule::Constant { length: 1 }, 0).unwrap();
        assert_eq!(render(&alt.prefix(6)), "010101");
        let pow2 = BlockSpec::new(BlockRule::Power { base: 2 }, 0).unwrap();
        assert_eq!(render(&pow2.prefix(6)), "001111");
        let pow4 = BlockSpec::new(BlockRule::Power { base: 4 }, 1).unwrap();
        assert_eq!(render(&pow4.prefix(5)), "11110");
        let dexp = BlockSpec::new(BlockRule::DoublyExponential { base: 2 }, 0).unwrap();
        let lens: Vec<u64> = dexp.runs().take(4).map(|(_, l)| l).collect();
        assert_eq!(lens, vec![4, 16, 256, 65536]);
    }

    #[test]
    fn invalid_specs() {
        assert!(BlockSpec::new(BlockRule::Constant { length: 0 }, 0).is_err());
        assert!(BlockSpec::new(BlockRule::Constant { length: 1 }, 2).is_err());
        assert!(BlockSpec::new(
            BlockRule::TargetDensity { first: 1, low: rat(3, 4), high: rat(1, 4) },
            0
        )
        .is_err());
    }

    #[test]
    fn distances() {
        let zeros = ShiftPoint::zeros(8);
        assert_eq!(shift_distance(&bits("10000000"), &zeros, 0), rat(1, 1));
        assert_eq!(shift_distance(&bits("00100000"), &zeros, 0), rat(1, 4));
        assert_eq!(shift_distance(&bits("00100000"), &zeros, 1), rat(1, 2));
        assert_eq!(shift_distance(&zeros, &zeros, 3), Rational::zero());
        // beyond the lookahead the sequences are indistinguishable
        let mut far = vec![0u8; 200];
        far[LOOKAHEAD] = 1;
        let far = ShiftPoint::from_symbols(far).unwrap();
        let z = ShiftPoint::zeros(200);
        assert_eq!(shift_distance(&far, &z, 0), Rational::zero());
        assert_eq!(shift_distance(&far, &z, 1), Rational::pow2_neg(LOOKAHEAD as u32 - 1));
    }

    #[test]
    fn series_matches_pointwise_distance() {
        let spec = BlockSpec::new(BlockRule::Power { base: 3 }, 1).unwrap();
        let u = ShiftPoint::from_spec(spec, 3000);
        let v = ShiftPoint::from_spec(BlockSpec::new(BlockRule::Constant { length: 7 }, 0).unwrap(), 3000);
        let pair = ShiftPair::new(u.clone(), v.clone()).unwrap();
        let s = pair.distance_series(2900).unwrap();
        for i in 0..2900 {
            assert_eq!(s.values()[i], shift_distance(&u, &v, i), "i = {i}");
        }
    }

    #[test]
    fn degenerate_pair_rejected() {
        let z = ShiftPoint::zeros(10);
        assert!(matches!(ShiftPair::new(z.clone(), z), Err(Error::DegeneratePair)));
    }

    #[test]
    fn density_profiles() {
        let alt = ShiftPoint::from_spec(BlockSpec::new(BlockRule::Constant { length: 1 }, 0).unwrap(), 4);
        assert_eq!(
            zero_density_profile(&alt, 4).unwrap(),
            vec![rat(1, 1), rat(1, 2), rat(2, 3), rat(1, 2)]
        );
        let z = ShiftPoint::zeros(50);
        assert!(zero_density_profile(&z, 50).unwrap().iter().all(|d| *d == Rational::one()));
        let pow4 = ShiftPoint::from_spec(BlockSpec::new(BlockRule::Power { base: 4 }, 0).unwrap(), 30);
        assert_eq!(zero_density_profile(&pow4, 20).unwrap()[19], rat(1, 5));
        assert!(zero_density_profile(&pow4, 31).is_err());
    }

    #[test]
    fn target_density_runs_hit_targets_exactly() {
        let spec = DcKind::Dc2HalfStrict.spec();
        let mut zeros = 0u64;
        let mut total = 0u64;
        for (j, (sym, len)) in spec.runs().take(14).enumerate() {
            if sym == 0 {
                zeros += len;
            }
            total += len;
            if j >= 1 {
                let d = rat(zeros as i64, total as i64);
                let target = if sym == 0 { rat(3, 4) } else { rat(1, 4) };
                assert_eq!(d, target, "run {}", j + 1);
            }
        }
    }

    fn tail_extremes(profile: &[Rational], from: usize) -> (Rational, Rational) {
        let tail = &profile[from - 1..];
        (tail.iter().min().unwrap().clone(), tail.iter().max().unwrap().clone())
    }

    #[test]
    fn dc_pair_density_oracles() {
        let horizon = 1_000_000;
        let window = 10_000;
        let dc1 = make_dc_pair(DcKind::Dc1, horizon);
        let (lo, hi) = tail_extremes(&zero_density_profile(&dc1.pair.u, horizon).unwrap(), window);
        assert!(lo <= rat(5, 100) && hi >= rat(95, 100), "dc1 tail ({lo}, {hi})");
        // run ends 11088 and 265650 carry the extremes: 462/11088 = 1/24, 255024/265650 = 24/25
        assert_eq!((lo, hi), (rat(1, 24), rat(24, 25)));

        let dc2h = make_dc_pair(DcKind::Dc2HalfStrict, horizon);
        let (lo, hi) = tail_extremes(&zero_density_profile(&dc2h.pair.u, horizon).unwrap(), window);
        assert_eq!((lo, hi), (rat(1, 4), rat(3, 4)));
    }

    #[test]
    fn hits_near_one_count_zeros() {
        let dc = make_dc_pair(DcKind::Dc2HalfStrict, 100_000);
        let s = dc.pair.distance_series(100_000).unwrap();
        let zeros_prefix: Vec<u64> = std::iter::once(0)
            .chain(dc.pair.u.symbols()[..100_000].iter().scan(0u64, |c, &b| {
                *c += (b == 0) as u64;
                Some(*c)
            }))
            .collect();
        for delta in [rat(3, 4), rat(1, 1), rat(51, 100)] {
            assert_eq!(xi_prefix_counts(s.values(), &delta), zeros_prefix);
        }
    }

    #[test]
    fn small_delta_hits_lose_at_most_r_per_run() {
        let horizon = 100_000;
        let dc = make_dc_pair(DcKind::Dc1, horizon);
        let s = dc.pair.distance_series(horizon).unwrap();
        let syms = dc.pair.u.symbols();
        for r in 1..=10u32 {
            let hits = xi_prefix_counts(s.values(), &Rational::pow2_neg(r));
            let mut zeros = 0u64;
            let mut runs = 0u64;
            for n in 1..=horizon {
                if syms[n - 1] == 0 {
                    zeros += 1;
                }
                if n == 1 || syms[n - 1] != syms[n - 2] {
                    runs += 1;
                }
                // a run boundary inside the lookahead window also costs up to r hits
                let pending = (n..n + r as usize).any(|i| syms[i] != syms[i - 1]) as u64;
                let lost = zeros - hits[n];
                assert!(lost <= r as u64 * (runs + pending), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn spec_json_roundtrip() {
        for kind in [DcKind::Dc1, DcKind::Dc2HalfStrict] {
            let spec = kind.spec();
            let json = serde_json::to_string(&spec).unwrap();
            let back: BlockSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
        let json = serde_json::to_string(&DcKind::Dc1.spec()).unwrap();
        assert_eq!(json, r#"{"rule":"shrinking_targets","first":1,"offset":20,"start_symbol":0}"#);
    }

    #[test]
    fn replay_determinism() {
        let a = make_dc_pair(DcKind::Dc1, 50_000);
        let b = make_dc_pair(DcKind::Dc1, 50_000);
        assert_eq!(a, b);
        let mut p = ShiftPoint::from_spec(DcKind::Dc1.spec(), 100);
        p.extend_to(50_064).unwrap();
        assert_eq!(p.symbols(), a.pair.u.symbols());
    }
}
