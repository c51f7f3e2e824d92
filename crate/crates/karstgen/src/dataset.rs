//! Dataset construction by subgraph augmentation, bandwidth estimation,
//! feature standardization, and neighbor-mean imputation of missing values.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{bfs_order, max_edge_span, Graph};
use crate::rng;
use crate::scalar::Scalar;

/// How a training set is sampled from the main graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub n_graphs: usize,
    pub node_count_mean: f64,
    pub node_count_std: f64,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_graphs < 1 {
            return Err(Error::InvalidArgument("n_graphs must be ≥ 1".into()));
        }
        if !(self.node_count_mean > self.node_count_std && self.node_count_std >= 0.0) {
            return Err(Error::InvalidArgument(
                "need node_count_mean > node_count_std ≥ 0".into(),
            ));
        }
        Ok(())
    }

    /// Draw a node count: Normal(μ, σ²) rounded to nearest, clamped to
    /// [2, max_nodes].
    pub fn draw_node_count<R: Rng + ?Sized>(&self, rng: &mut R, max_nodes: usize) -> usize {
        let z = f64::standard_normal(rng);
        let raw = (self.node_count_mean + self.node_count_std * z).round();
        (raw.max(2.0) as usize).min(max_nodes).max(2)
    }
}

/// Take the first `n` nodes of a fresh BFS ordering of `main`, induce the
/// subgraph, and translate the spatial columns so each has mean zero.
/// The result is connected because BFS prefixes of a connected graph are.
pub fn sample_subgraph<S: Scalar, R: Rng + ?Sized>(
    main: &Graph<S>,
    n: usize,
    rng: &mut R,
) -> Result<Graph<S>> {
    if n < 2 || n > main.num_nodes() {
        return Err(Error::InvalidArgument(format!(
            "subgraph size {n} outside [2, {}]",
            main.num_nodes()
        )));
    }
    let order = bfs_order(main, rng)?;
    let mut keep_by_pos = vec![usize::MAX; n];
    for v in 0..main.num_nodes() {
        let p = order.position(v);
        if p < n {
            keep_by_pos[p] = v;
        }
    }
    let mut sub = main.induced(&keep_by_pos)?;
    center_spatial(&mut sub);
    Ok(sub)
}

fn center_spatial<S: Scalar>(graph: &mut Graph<S>) {
    let (n, d, k) = (
        graph.num_nodes(),
        graph.num_features(),
        graph.spatial_dims(),
    );
    if n == 0 || k == 0 {
        return;
    }
    let mut means = vec![0.0f64; k];
    for v in 0..n {
        for (f, m) in means.iter_mut().enumerate() {
            *m += graph.feature(v, f).to_f64();
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut features = graph.features().to_vec();
    for v in 0..n {
        for (f, m) in means.iter_mut().enumerate() {
            features[v * d + f] = S::from_f64(features[v * d + f].to_f64() - *m);
        }
    }
    *graph = graph
        .with_features(features, k, graph.feature_names().to_vec())
        .expect("centering preserves shape");
}

/// Build the training set: `spec.n_graphs` centered connected subgraphs with
/// node counts drawn per the spec. Deterministic given the seed; elements use
/// independent streams so the build parallelizes.
pub fn build_dataset<S: Scalar>(main: &Graph<S>, spec: &DatasetSpec) -> Result<Vec<Graph<S>>> {
    spec.validate()?;
    if main.num_nodes() < 2 {
        return Err(Error::InvalidArgument("main graph needs ≥ 2 nodes".into()));
    }
    (0..spec.n_graphs)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng::stream(spec.seed, "dataset-element", i as u64);
            let n = spec.draw_node_count(&mut stream, main.num_nodes());
            sample_subgraph(main, n, &mut stream)
        })
        .collect()
}

/// Estimate the banded-encoding width: repeat {draw a subgraph per `spec`,
/// draw a BFS ordering, record the maximal edge span} and return the ceiling
/// of the requested percentile of the span distribution.
pub fn estimate_bandwidth<S: Scalar>(
    main: &Graph<S>,
    spec: &DatasetSpec,
    trials: usize,
    percentile: f64,
) -> Result<usize> {
    spec.validate()?;
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be ≥ 1".into()));
    }
    if !(percentile > 0.0 && percentile <= 100.0) {
        return Err(Error::InvalidArgument(
            "percentile must lie in (0, 100]".into(),
        ));
    }
    let mut spans: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng::stream(spec.seed, "bandwidth-trial", i as u64);
            let n = spec.draw_node_count(&mut stream, main.num_nodes());
            let sub = sample_subgraph(main, n, &mut stream)?;
            let order = bfs_order(&sub, &mut stream)?;
            Ok(max_edge_span(&sub, &order))
        })
        .collect::<Result<_>>()?;
    spans.sort_unstable();
    Ok((percentile_interpolated(&spans, percentile).ceil() as usize).max(1))
}

/// Linear-interpolation percentile of a sorted integer sample.
fn percentile_interpolated(sorted: &[usize], percentile: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0] as f64;
    }
    let rank = percentile / 100.0 * (n - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] as f64 * (1.0 - frac) + sorted[hi.min(n - 1)] as f64 * frac
}

/// Per-feature pooled mean and standard deviation over a dataset, together
/// with the feature schema they were computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats<S: Scalar> {
    pub feature_names: Vec<String>,
    pub spatial_dims: usize,
    pub mean: Vec<S>,
    pub std: Vec<S>,
}

impl<S: Scalar> FeatureStats<S> {
    pub fn num_features(&self) -> usize {
        self.mean.len()
    }

    /// z-score a graph's features in place.
    pub fn standardize(&self, graph: &Graph<S>) -> Result<Graph<S>> {
        self.map_features(graph, |x, mean, std| (x - mean) / std)
    }

    /// Inverse transform s ↦ μ + σ·s.
    pub fn destandardize(&self, graph: &Graph<S>) -> Result<Graph<S>> {
        self.map_features(graph, |x, mean, std| mean + std * x)
    }

    fn map_features(
        &self,
        graph: &Graph<S>,
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> Result<Graph<S>> {
        let d = self.num_features();
        if graph.num_features() != d {
            return Err(Error::dim("feature stats", d, graph.num_features()));
        }
        let mut features = graph.features().to_vec();
        for v in 0..graph.num_nodes() {
            for c in 0..d {
                let x = features[v * d + c].to_f64();
                features[v * d + c] =
                    S::from_f64(f(x, self.mean[c].to_f64(), self.std[c].to_f64()));
            }
        }
        graph.with_features(features, self.spatial_dims, self.feature_names.clone())
    }
}

/// Compute pooled per-feature stats and z-score every graph.
/// Errors if any feature has zero pooled variance.
pub fn standardize_features<S: Scalar>(
    dataset: &[Graph<S>],
) -> Result<(Vec<Graph<S>>, FeatureStats<S>)> {
    standardize_impl(dataset, None)
}

/// Like [`standardize_features`] but degenerate features get their standard
/// deviation floored instead of erroring.
pub fn standardize_features_with_floor<S: Scalar>(
    dataset: &[Graph<S>],
    floor: f64,
) -> Result<(Vec<Graph<S>>, FeatureStats<S>)> {
    standardize_impl(dataset, Some(floor))
}

fn standardize_impl<S: Scalar>(
    dataset: &[Graph<S>],
    floor: Option<f64>,
) -> Result<(Vec<Graph<S>>, FeatureStats<S>)> {
    let first = dataset
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty dataset".into()))?;
    let d = first.num_features();
    for g in dataset {
        if g.num_features() != d || g.feature_names() != first.feature_names() {
            return Err(Error::InvalidArgument(
                "dataset graphs disagree on feature schema".into(),
            ));
        }
    }
    let mut count = 0usize;
    let mut sum = vec![0.0f64; d];
    let mut sum_sq = vec![0.0f64; d];
    for g in dataset {
        for v in 0..g.num_nodes() {
            for c in 0..d {
                let x = g.feature(v, c).to_f64();
                sum[c] += x;
                sum_sq[c] += x * x;
            }
        }
        count += g.num_nodes();
    }
    let mut mean = Vec::with_capacity(d);
    let mut std = Vec::with_capacity(d);
    for c in 0..d {
        let mu = sum[c] / count as f64;
        let var = (sum_sq[c] / count as f64 - mu * mu).max(0.0);
        let mut sigma = var.sqrt();
        match floor {
            Some(fl) => sigma = sigma.max(fl),
            None => {
                if sigma == 0.0 {
                    return Err(Error::ZeroVarianceFeature(
                        first.feature_names()[c].clone(),
                    ));
                }
            }
        }
        mean.push(S::from_f64(mu));
        std.push(S::from_f64(sigma));
    }
    let stats = FeatureStats {
        feature_names: first.feature_names().to_vec(),
        spatial_dims: first.spatial_dims(),
        mean,
        std,
    };
    let transformed = dataset
        .iter()
        .map(|g| stats.standardize(g))
        .collect::<Result<_>>()?;
    Ok((transformed, stats))
}

/// Entry-level missing mask, row-major n×d like the feature matrix.
pub type MissingMask = Vec<bool>;

/// Mask entries of the given columns that are exactly zero or non-finite.
pub fn mask_zero_entries<S: Scalar>(graph: &Graph<S>, columns: &[usize]) -> MissingMask {
    let d = graph.num_features();
    let mut mask = vec![false; graph.num_nodes() * d];
    for v in 0..graph.num_nodes() {
        for &c in columns {
            let x = graph.feature(v, c);
            if x == S::zero() || !x.is_finite() {
                mask[v * d + c] = true;
            }
        }
    }
    mask
}

/// Replace masked entries by iterating the neighbor-mean update to a fixed
/// point: each masked entry converges to the harmonic interpolation of the
/// known values around it.
pub fn impute_missing_features<S: Scalar>(graph: &Graph<S>, mask: &MissingMask) -> Result<Graph<S>> {
    let (n, d) = (graph.num_nodes(), graph.num_features());
    if mask.len() != n * d {
        return Err(Error::dim("missing mask", n * d, mask.len()));
    }
    if !mask.iter().any(|&m| m) {
        return Ok(graph.clone());
    }
    let mut features: Vec<f64> = graph.features().iter().map(|x| x.to_f64()).collect();
    for c in 0..d {
        let masked: Vec<usize> = (0..n).filter(|&v| mask[v * d + c]).collect();
        if masked.is_empty() {
            continue;
        }
        // Every component must hold at least one known value for this column.
        for comp in graph.components() {
            if comp.iter().all(|&v| mask[v * d + c]) {
                return Err(Error::MaskedComponent(graph.feature_names()[c].clone()));
            }
        }
        let known: Vec<f64> = (0..n)
            .filter(|&v| !mask[v * d + c])
            .map(|v| features[v * d + c])
            .collect();
        let init = known.iter().sum::<f64>() / known.len() as f64;
        let scale = known.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        for &v in &masked {
            features[v * d + c] = init;
        }
        let tol = 1e-9f64.max(8.0 * S::epsilon().to_f64() * (1.0 + scale));
        let mut next = vec![0.0f64; masked.len()];
        let mut converged = false;
        for _ in 0..100_000 {
            let mut max_delta = 0.0f64;
            for (slot, &v) in masked.iter().enumerate() {
                let nbrs = graph.neighbors(v);
                let mean = nbrs.iter().map(|&u| features[u * d + c]).sum::<f64>()
                    / nbrs.len() as f64;
                max_delta = max_delta.max((mean - features[v * d + c]).abs());
                next[slot] = mean;
            }
            for (slot, &v) in masked.iter().enumerate() {
                features[v * d + c] = next[slot];
            }
            if max_delta <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::InvalidArgument(format!(
                "imputation did not converge for feature '{}'",
                graph.feature_names()[c]
            )));
        }
    }
    graph.with_features(
        features.into_iter().map(S::from_f64).collect(),
        graph.spatial_dims(),
        graph.feature_names().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn spec(n_graphs: usize, mean: f64, std: f64, seed: u64) -> DatasetSpec {
        DatasetSpec {
            n_graphs,
            node_count_mean: mean,
            node_count_std: std,
            seed,
        }
    }

    #[test]
    fn subgraph_full_size_recenters() {
        let main = synth::grid_graph::<f64>(4, 4, 1.0);
        let mut stream = rng::stream(5, "t", 0);
        let sub = sample_subgraph(&main, 16, &mut stream).unwrap();
        assert_eq!(sub.num_nodes(), 16);
        assert_eq!(sub.num_edges(), main.num_edges());
        for c in 0..2 {
            let mean: f64 = (0..16).map(|v| sub.feature(v, c)).sum::<f64>() / 16.0;
            assert!(mean.abs() < 1e-9);
        }
    }

    #[test]
    fn subgraph_of_two_is_single_edge() {
        let main = synth::grid_graph::<f64>(4, 4, 1.0);
        for i in 0..20 {
            let mut stream = rng::stream(6, "t2", i);
            let sub = sample_subgraph(&main, 2, &mut stream).unwrap();
            assert_eq!(sub.num_nodes(), 2);
            assert_eq!(sub.num_edges(), 1);
        }
    }

    #[test]
    fn subgraphs_are_connected_with_exact_size() {
        let main = synth::grid_graph::<f64>(20, 20, 1.0);
        for i in 0..1000 {
            let mut stream = rng::stream(7, "conn", i);
            let sub = sample_subgraph(&main, 30, &mut stream).unwrap();
            assert_eq!(sub.num_nodes(), 30);
            assert!(sub.is_connected());
        }
    }

    #[test]
    fn dataset_degenerate_sigma_gives_constant_counts() {
        let main = synth::grid_graph::<f64>(10, 10, 1.0);
        let ds = build_dataset(&main, &spec(500, 30.0, 0.0, 1)).unwrap();
        assert!(ds.iter().all(|g| g.num_nodes() == 30));
    }

    #[test]
    fn dataset_mean_near_mu() {
        // Standard-error bound computed up front: 3·σ/√N = 3·7.5/√500 ≈ 1.006.
        let main = synth::grid_graph::<f64>(40, 40, 1.0);
        let ds = build_dataset(&main, &spec(500, 75.0, 7.5, 2)).unwrap();
        let mean: f64 = ds.iter().map(|g| g.num_nodes() as f64).sum::<f64>() / 500.0;
        assert!((mean - 75.0).abs() < 1.5, "sample mean {mean}");
    }

    #[test]
    fn dataset_is_deterministic() {
        let main = synth::grid_graph::<f64>(10, 10, 1.0);
        let a = build_dataset(&main, &spec(50, 20.0, 2.0, 77)).unwrap();
        let b = build_dataset(&main, &spec(50, 20.0, 2.0, 77)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bandwidth_of_path_is_one() {
        let main = synth::path_graph::<f64>(100, 1.0);
        let m = estimate_bandwidth(&main, &spec(1, 30.0, 3.0, 3), 200, 99.9).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn bandwidth_of_star_hits_subgraph_size_minus_one() {
        let main = synth::star_graph::<f64>(50);
        let m = estimate_bandwidth(&main, &spec(1, 20.0, 0.0, 4), 2000, 99.9).unwrap();
        assert_eq!(m, 19);
    }

    #[test]
    fn bandwidth_matches_direct_scan_and_is_monotone() {
        let main = synth::grid_graph::<f64>(20, 20, 1.0);
        let sp = spec(1, 30.0, 3.0, 5);
        let m999 = estimate_bandwidth(&main, &sp, 2000, 99.9).unwrap();
        // Independent recomputation of the same sampled span distribution.
        let mut spans: Vec<usize> = (0..2000)
            .map(|i| {
                let mut stream = rng::stream(sp.seed, "bandwidth-trial", i);
                let n = sp.draw_node_count(&mut stream, main.num_nodes());
                let sub = sample_subgraph(&main, n, &mut stream).unwrap();
                let order = bfs_order(&sub, &mut stream).unwrap();
                sub.edges()
                    .iter()
                    .map(|&(u, v)| {
                        (order.position(u) as i64 - order.position(v) as i64).unsigned_abs()
                            as usize
                    })
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        spans.sort_unstable();
        let expect = (super::percentile_interpolated(&spans, 99.9).ceil() as usize).max(1);
        assert_eq!(m999, expect);
        let mut last = 0;
        for p in [10.0, 50.0, 90.0, 99.0, 99.9, 100.0] {
            let m = estimate_bandwidth(&main, &sp, 500, p).unwrap();
            assert!(m >= last, "percentile {p} gave {m} < {last}");
            last = m;
        }
    }

    #[test]
    fn standardize_round_trip_and_moments() {
        let main = synth::grid_graph::<f64>(8, 8, 1.0);
        let ds = build_dataset(&main, &spec(20, 12.0, 2.0, 6)).unwrap();
        let (zs, stats) = standardize_features(&ds).unwrap();
        let d = stats.num_features();
        let mut count = 0usize;
        let mut sum = vec![0.0; d];
        let mut sum_sq = vec![0.0; d];
        for g in &zs {
            for v in 0..g.num_nodes() {
                for c in 0..d {
                    sum[c] += g.feature(v, c);
                    sum_sq[c] += g.feature(v, c) * g.feature(v, c);
                }
            }
            count += g.num_nodes();
        }
        for c in 0..d {
            let mu = sum[c] / count as f64;
            let var = sum_sq[c] / count as f64 - mu * mu;
            assert!(mu.abs() < 1e-9);
            assert!((var.sqrt() - 1.0).abs() < 1e-9);
        }
        for (orig, z) in ds.iter().zip(&zs) {
            let back = stats.destandardize(z).unwrap();
            for (a, b) in orig.features().iter().zip(back.features()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn standardize_two_point_feature() {
        let g = crate::graph::Graph::<f64>::new(
            2,
            vec![0.0, 2.0],
            0,
            vec!["w".into()],
            vec![(0, 1)],
        )
        .unwrap();
        let (zs, _) = standardize_features(&[g]).unwrap();
        assert!((zs[0].feature(0, 0) + 1.0).abs() < 1e-12);
        assert!((zs[0].feature(1, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standardize_rejects_constant_feature() {
        let g = crate::graph::Graph::<f64>::new(
            2,
            vec![3.5, 3.5],
            0,
            vec!["cw".into()],
            vec![(0, 1)],
        )
        .unwrap();
        match standardize_features(&[g]) {
            Err(Error::ZeroVarianceFeature(name)) => assert_eq!(name, "cw"),
            other => panic!("expected zero-variance error, got {other:?}"),
        }
    }

    #[test]
    fn impute_simple_mean() {
        let g = crate::graph::Graph::<f64>::new(
            3,
            vec![1.0, 0.0, 3.0],
            0,
            vec!["w".into()],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        let mask = mask_zero_entries(&g, &[0]);
        let fixed = impute_missing_features(&g, &mask).unwrap();
        assert!((fixed.feature(1, 0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn impute_no_mask_is_identity() {
        let g = synth::grid_graph::<f64>(3, 3, 1.0);
        let mask = vec![false; 9 * 2];
        let fixed = impute_missing_features(&g, &mask).unwrap();
        assert_eq!(&g, &fixed);
    }

    #[test]
    fn impute_two_adjacent_matches_linear_solve() {
        // Path a–b–c–d with b, c masked: the fixed point solves
        //   b = (a + c)/2,  c = (b + d)/2  →  b = (2a + d)/3, c = (a + 2d)/3.
        let (a, d) = (1.0, 7.0);
        let g = crate::graph::Graph::<f64>::new(
            4,
            vec![a, 0.0, 0.0, d],
            0,
            vec!["w".into()],
            vec![(0, 1), (1, 2), (2, 3)],
        )
        .unwrap();
        let mask = mask_zero_entries(&g, &[0]);
        let fixed = impute_missing_features(&g, &mask).unwrap();
        assert!((fixed.feature(1, 0) - (2.0 * a + d) / 3.0).abs() < 1e-7);
        assert!((fixed.feature(2, 0) - (a + 2.0 * d) / 3.0).abs() < 1e-7);
    }

    #[test]
    fn impute_fully_masked_component_errors() {
        let g = crate::graph::Graph::<f64>::new(
            2,
            vec![0.0, 0.0],
            0,
            vec!["w".into()],
            vec![(0, 1)],
        )
        .unwrap();
        let mask = mask_zero_entries(&g, &[0]);
        assert!(matches!(
            impute_missing_features(&g, &mask),
            Err(Error::MaskedComponent(_))
        ));
    }
}
