//! Edge-colourings of finite chaotic sets by iterate phase, and monochromatic
//! cliques in them.
//!
//! A pair `{a, b}` gets colour `j` when `(f^j a, f^j b)` is detected as DC3 under
//! `f^N`. The pivot recursion from the infinite Ramsey theorem then extracts a
//! monochromatic subset; an exhaustive search serves as its oracle on small graphs.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, implication_check};
use crate::distribution::default_grid;
use crate::error::{Error, Result};
use crate::iteration::{phase_estimates, PairSource};
use crate::oscillator::SystemHandle;
use crate::point::LadderPoint;
use crate::rational::Rational;
use crate::shift::{BlockSpec, ShiftPair, ShiftPoint, LOOKAHEAD};

/// Largest vertex count accepted by the exhaustive clique search.
pub const EXACT_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredCompleteGraph {
    labels: Vec<String>,
    n_colors: usize,
    // colour of {a, b}, a < b, row-major over the upper triangle
    colors: Vec<usize>,
}

fn tri_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    n_colors: usize,
    /// `[a, b, colour]` with `a < b`
    edges: Vec<(usize, usize, usize)>,
}

impl ColoredCompleteGraph {
    pub fn new(
        labels: Vec<String>,
        n_colors: usize,
        mut color: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        if n_colors == 0 {
            return Err(Error::InvalidGraph("at least one colour is needed".into()));
        }
        let n = labels.len();
        let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                let c = color(a, b);
                if c >= n_colors {
                    return Err(Error::InvalidGraph(format!("edge {{{a}, {b}}} has colour {c} >= {n_colors}")));
                }
                colors.push(c);
            }
        }
        Ok(ColoredCompleteGraph { labels, n_colors, colors })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, a: usize, b: usize) -> usize {
        assert!(a != b && a < self.len() && b < self.len(), "no edge {{{a}, {b}}}");
        self.colors[tri_index(self.len(), a, b)]
    }

    pub fn to_json(&self) -> Result<String> {
        let n = self.len();
        let edges = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .map(|(a, b)| (a, b, self.color(a, b)))
            .collect();
        let g = GraphJson { vertices: self.labels.clone(), n_colors: self.n_colors, edges };
        serde_json::to_string_pretty(&g).map_err(|e| Error::Invalid(e.to_string()))
    }

    /// Every unordered pair must appear exactly once.
    pub fn from_json(s: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        let n = g.vertices.len();
        let mut colors: Vec<Option<usize>> = vec![None; n * n.saturating_sub(1) / 2];
        for (a, b, c) in g.edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("bad edge ({a}, {b})")));
            }
            let slot = &mut colors[tri_index(n, a, b)];
            if slot.replace(c).is_some() {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) listed twice")));
            }
        }
        let colors: Vec<usize> = colors
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidGraph("some pair has no colour".into()))?;
        let mut it = colors.into_iter();
        ColoredCompleteGraph::new(g.vertices, g.n_colors, |_, _| it.next().unwrap())
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown", "gray"];
        let mut out = String::from("graph colored {\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                let c = self.color(a, b);
                let _ = writeln!(out, "  {a} -- {b} [label=\"{c}\", color={}];", PALETTE[c % PALETTE.len()]);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn is_monochromatic(&self, subset: &[usize], color: usize) -> bool {
        subset
            .iter()
            .enumerate()
            .all(|(i, &a)| subset[i + 1..].iter().all(|&b| a != b && self.color(a, b) == color))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotResult {
    pub vertices: Vec<usize>,
    pub color: usize,
    /// Number of pivots chosen by the recursion.
    pub pivots: usize,
}

/// Pick a pivot, keep its largest single-colour neighbourhood, repeat; then keep
/// the pivots of the most frequent colour together with the final pivot.
pub fn pivot_monochromatic(g: &ColoredCompleteGraph) -> Result<PivotResult> {
    if g.len() < 2 {
        return Err(Error::TooFewVertices { min: 2, got: g.len() });
    }
    let mut remaining: Vec<usize> = (0..g.len()).collect();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let last = loop {
        let v = remaining.remove(0);
        if remaining.is_empty() {
            break v;
        }
        let mut by_color = vec![Vec::new(); g.n_colors()];
        for &w in &remaining {
            by_color[g.color(v, w)].push(w);
        }
        // ties go to the smallest colour
        let c = (0..g.n_colors()).rev().max_by_key(|&c| by_color[c].len()).unwrap();
        chosen.push((v, c));
        remaining = std::mem::take(&mut by_color[c]);
    };
    let mut freq = vec![0usize; g.n_colors()];
    for &(_, c) in &chosen {
        freq[c] += 1;
    }
    let color = (0..g.n_colors()).rev().max_by_key(|&c| freq[c]).unwrap();
    let mut vertices: Vec<usize> = chosen.iter().filter(|(_, c)| *c == color).map(|(v, _)| *v).collect();
    vertices.push(last);
    vertices.sort_unstable();
    debug_assert!(g.is_monochromatic(&vertices, color));
    Ok(PivotResult { vertices, color, pivots: chosen.len() + 1 })
}

/// Exact largest monochromatic clique (ties: smallest colour, then first found).
pub fn max_monochromatic_clique(g: &ColoredCompleteGraph) -> Result<(Vec<usize>, usize)> {
    let n = g.len();
    if n > EXACT_CAP {
        return Err(Error::SizeCapExceeded { cap: EXACT_CAP, got: n });
    }
    if n < 2 {
        return Err(Error::TooFewVertices { min: 2, got: n });
    }
    let best = (0..g.n_colors())
        .into_par_iter()
        .map(|c| {
            let adj: Vec<u32> = (0..n)
                .map(|a| (0..n).filter(|&b| b != a && g.color(a, b) == c).fold(0u32, |m, b| m | 1 << b))
                .collect();
            let mut best = 0u32;
            grow(&adj, 0, (1u32 << n) - 1, &mut best);
            (best, c)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0u32, 0usize), |acc, (m, c)| if m.count_ones() > acc.0.count_ones() { (m, c) } else { acc });
    let vertices = (0..n).filter(|&v| best.0 >> v & 1 == 1).collect();
    Ok((vertices, best.1))
}

fn grow(adj: &[u32], clique: u32, candidates: u32, best: &mut u32) {
    if candidates == 0 {
        if clique.count_ones() > best.count_ones() {
            *best = clique;
        }
        return;
    }
    if clique.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    grow(adj, clique | 1 << v, candidates & adj[v], best);
    grow(adj, clique, candidates & !(1 << v), best);
}

/// A finite set of points of one system.
#[derive(Clone, Debug)]
pub enum PointSet {
    Orbit { system: SystemHandle, points: Vec<LadderPoint> },
    Shift(Vec<ShiftPoint>),
}

impl PointSet {
    pub fn len(&self) -> usize {
        match self {
            PointSet::Orbit { points, .. } => points.len(),
            PointSet::Shift(points) => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            PointSet::Orbit { points, .. } => points.iter().map(ToString::to_string).collect(),
            PointSet::Shift(points) => (0..points.len()).map(|i| format!("u{i}")).collect(),
        }
    }

    pub fn pair(&self, a: usize, b: usize) -> Result<PairSource> {
        Ok(match self {
            PointSet::Orbit { system, points } => {
                PairSource::Orbit { system: system.clone(), p: points[a].clone(), q: points[b].clone() }
            }
            PointSet::Shift(points) => PairSource::Shift(ShiftPair::new(points[a].clone(), points[b].clone())?),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorChoice {
    /// Smallest qualifying phase.
    Smallest,
    /// Uniform among the qualifying phases, from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDetail {
    pub a: usize,
    pub b: usize,
    pub base_dc3: bool,
    /// Phases `j < N` for which `(f^j a, f^j b)` is DC3 under `f^N`.
    pub qualifying: Vec<usize>,
    /// Every verdict computed for this pair passed the implication check.
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct Coloring {
    pub graph: ColoredCompleteGraph,
    pub edges: Vec<EdgeDetail>,
    /// Pairs that are not DC3 under the base system at this tolerance.
    pub precondition_failures: Vec<(usize, usize)>,
}

/// Colour every pair of `set` by a phase `j < N` whose shifted pair is DC3 under `f^N`.
pub fn color_by_iterate(
    set: &PointSet,
    n: u64,
    tau: &Rational,
    horizon: u64,
    choice: ColorChoice,
) -> Result<Coloring> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    let k = set.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let edges = pairs
        .par_iter()
        .map(|&(a, b)| {
            let src = set.pair(a, b)?;
            let grid = default_grid(&src.diameter());
            let est = phase_estimates(&src, n, horizon, &grid, n as usize)?;
            let base = classify(&est.base, tau)?;
            let mut consistent = implication_check(&base);
            let mut qualifying = Vec::new();
            for (j, e) in est.phases.iter().enumerate() {
                let v = classify(e, tau)?;
                consistent &= implication_check(&v);
                if v.dc3 {
                    qualifying.push(j);
                }
            }
            Ok(EdgeDetail { a, b, base_dc3: base.dc3, qualifying, consistent })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rng = match choice {
        ColorChoice::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ColorChoice::Smallest => None,
    };
    let mut colors = Vec::with_capacity(edges.len());
    for e in &edges {
        let c = match &mut rng {
            None => e.qualifying.first().copied(),
            Some(r) => e.qualifying.choose(r).copied(),
        };
        colors.push(c.ok_or(Error::NoQualifyingColor(e.a, e.b))?);
    }
    let precondition_failures = edges.iter().filter(|e| !e.base_dc3).map(|e| (e.a, e.b)).collect();
    let mut it = colors.into_iter();
    let graph = ColoredCompleteGraph::new(set.labels(), n as usize, |_, _| it.next().unwrap())?;
    Ok(Coloring { graph, edges, precondition_failures })
}

/// Eight shift points whose pairwise distances alternate between long stretches of
/// agreement and long stretches where every pair differs within three symbols.
///
/// Point `a` is zero on the agreement runs and `bit_{i mod 3}(a)` at position `i`
/// of the disagreement runs; run lengths follow `runs`.
pub fn separated_shift_set(runs: &BlockSpec, horizon: usize) -> Vec<ShiftPoint> {
    let len = horizon + LOOKAHEAD;
    let template = runs.prefix(len);
    (0..8u8)
        .map(|a| {
            let symbols = template
                .iter()
                .enumerate()
                .map(|(i, &t)| if t == 0 { 0 } else { (a >> (i % 3)) & 1 })
                .collect();
            ShiftPoint::from_symbols(symbols).expect("binary symbols")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarnessReport {
    pub subset: Vec<usize>,
    pub color: usize,
    pub pivots: usize,
    /// Every pair of `f^j(R)` re-classified as DC3 under `f^N`.
    pub image_dc3: bool,
}

/// Colour a finite set, extract a monochromatic subset `R` of colour `j`, and
/// re-check every pair of `f^j(R)` under `f^N` on an independent path.
pub fn monochromatic_harness(set: &PointSet, n: u64, tau: &Rational, horizon: u64) -> Result<(Coloring, HarnessReport)> {
    let coloring = color_by_iterate(set, n, tau, horizon, ColorChoice::Smallest)?;
    let pivot = pivot_monochromatic(&coloring.graph)?;
    let j = pivot.color;
    let r = &pivot.vertices;
    let pairs: Vec<(usize, usize)> =
        r.iter().enumerate().flat_map(|(i, &a)| r[i + 1..].iter().map(move |&b| (a, b))).collect();
    let image_dc3 = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<bool> {
            let shifted = match set.pair(a, b)? {
                PairSource::Shift(p) => PairSource::Shift(p.shifted(j)),
                PairSource::Orbit { system, p, q } => {
                    let step = |x: &LadderPoint| -> Result<LadderPoint> {
                        system.orbit_iter(x)?.nth(j).expect("unbounded orbit")
                    };
                    PairSource::Orbit { p: step(&p)?, q: step(&q)?, system }
                }
            };
            let est = phase_estimates(&shifted, n, horizon - j as u64, &default_grid(&shifted.diameter()), 1)?;
            Ok(classify(&est.phases[0], tau)?.dc3)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| ok);
    let report = HarnessReport { subset: r.clone(), color: j, pivots: pivot.pivots, image_dc3 };
    Ok((coloring, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::shift::DcKind;
    use rand::Rng;

    fn uniform(n: usize, c: usize) -> ColoredCompleteGraph {
        ColoredCompleteGraph::new((0..n).map(|i| i.to_string()).collect(), c.max(1), |_, _| 0).unwrap()
    }

    fn by_rule(n: usize, c: usize, f: impl FnMut(usize, usize) -> usize) -> ColoredCompleteGraph {
        ColoredCompleteGraph::new((0..n).map(|i| i.to_string()).collect(), c, f).unwrap()
    }

    // oracle: try every subset
    fn brute_max(g: &ColoredCompleteGraph) -> usize {
        let n = g.len();
        (1u32..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|v| m >> v & 1 == 1).collect();
                s.len() >= 2 && (0..g.n_colors()).any(|c| g.is_monochromatic(&s, c))
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn uniform_graph() {
        let g = uniform(4, 1);
        let p = pivot_monochromatic(&g).unwrap();
        assert_eq!((p.vertices, p.color), (vec![0, 1, 2, 3], 0));
        assert_eq!(max_monochromatic_clique(&g).unwrap(), (vec![0, 1, 2, 3], 0));
    }

    #[test]
    fn single_edge() {
        let g = by_rule(2, 3, |_, _| 2);
        let p = pivot_monochromatic(&g).unwrap();
        assert_eq!((p.vertices, p.color), (vec![0, 1], 2));
        assert_eq!(max_monochromatic_clique(&g).unwrap().0.len(), 2);
        assert!(pivot_monochromatic(&uniform(1, 1)).is_err());
    }

    #[test]
    fn parity_coloring_of_k5() {
        let g = by_rule(5, 2, |a, b| (a + b) % 2);
        // same-parity labels give even sums: {0, 2, 4}
        assert_eq!(brute_max(&g), 3);
        assert_eq!(max_monochromatic_clique(&g).unwrap(), (vec![0, 2, 4], 0));
    }

    #[test]
    fn every_two_coloring_of_k6_has_a_triangle() {
        let edges = 15;
        for mask in 0u32..1 << edges {
            let g = by_rule(6, 2, |a, b| (mask >> tri_index(6, a, b) & 1) as usize);
            let (s, c) = max_monochromatic_clique(&g).unwrap();
            assert!(s.len() >= 3 && g.is_monochromatic(&s, c));
            if mask % 997 == 0 {
                let p = pivot_monochromatic(&g).unwrap();
                assert!(p.vertices.len() >= 2 && g.is_monochromatic(&p.vertices, p.color));
            }
        }
    }

    #[test]
    fn pivot_against_exact_on_random_colorings() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let c = rng.gen_range(1..=4);
            let g = by_rule(n, c, |_, _| rng.gen_range(0..c));
            let p = pivot_monochromatic(&g).unwrap();
            assert!(g.is_monochromatic(&p.vertices, p.color));
            assert!(p.vertices.len() >= p.pivots.div_ceil(c));
            if c > 1 {
                assert!(p.pivots >= (n as f64).log(c as f64).floor() as usize);
            }
            let (best, bc) = max_monochromatic_clique(&g).unwrap();
            assert!(g.is_monochromatic(&best, bc));
            assert_eq!(best.len(), brute_max(&g));
            assert!(p.vertices.len() <= best.len());
        }
    }

    #[test]
    fn exact_search_cap() {
        assert!(matches!(
            max_monochromatic_clique(&uniform(17, 1)),
            Err(Error::SizeCapExceeded { cap: 16, got: 17 })
        ));
        assert_eq!(max_monochromatic_clique(&uniform(16, 1)).unwrap().0.len(), 16);
    }

    #[test]
    fn json_and_dot() {
        let g = by_rule(4, 3, |a, b| (a * b) % 3);
        let back = ColoredCompleteGraph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        let missing = r#"{"vertices":["a","b","c"],"n_colors":2,"edges":[[0,1,0],[0,2,1]]}"#;
        assert!(ColoredCompleteGraph::from_json(missing).is_err());
        let twice = r#"{"vertices":["a","b"],"n_colors":2,"edges":[[0,1,0],[1,0,1]]}"#;
        assert!(ColoredCompleteGraph::from_json(twice).is_err());
        let dot = g.to_dot();
        assert!(dot.starts_with("graph colored {") && dot.contains("2 -- 3 [label=\"0\""));
    }

    #[test]
    fn singleton_set_has_no_edges() {
        let set = PointSet::Shift(vec![ShiftPoint::zeros(100)]);
        let c = color_by_iterate(&set, 2, &rat(1, 20), 10_000, ColorChoice::Smallest).unwrap();
        assert_eq!(c.graph.edge_count(), 0);
    }

    #[test]
    fn separated_set_yields_dc3_subset_under_square() {
        let horizon = 200_000;
        let set = PointSet::Shift(separated_shift_set(&DcKind::Dc1.spec(), horizon));
        let tau = rat(1, 20);
        let (coloring, report) = monochromatic_harness(&set, 2, &tau, horizon as u64).unwrap();
        assert!(coloring.precondition_failures.is_empty());
        assert_eq!(coloring.graph.edge_count(), 28);
        assert!(report.subset.len() >= 2);
        assert!(coloring.graph.is_monochromatic(&report.subset, report.color));
        assert!(report.image_dc3);

        let seeded = color_by_iterate(&set, 2, &tau, horizon as u64, ColorChoice::Seeded(9)).unwrap();
        let again = color_by_iterate(&set, 2, &tau, horizon as u64, ColorChoice::Seeded(9)).unwrap();
        assert_eq!(seeded.graph, again.graph);
        for e in &seeded.edges {
            assert!(e.qualifying.contains(&seeded.graph.color(e.a, e.b)));
        }
    }
}
