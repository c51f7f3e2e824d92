//! Synthetic graph generators used by tests, benchmarks, and examples.

use rand::Rng;

use crate::graph::Graph;
use crate::scalar::Scalar;

fn coord_names(k: usize) -> Vec<String> {
    ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
}

/// Path of `n` nodes along the x axis with the given spacing.
pub fn path_graph<S: Scalar>(n: usize, spacing: f64) -> Graph<S> {
    let mut features = Vec::with_capacity(n * 2);
    for i in 0..n {
        features.push(S::from_f64(i as f64 * spacing));
        features.push(S::zero());
    }
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::new(n, features, 2, coord_names(2), edges).expect("valid path graph")
}

/// Star with `n` nodes: node 0 is the hub, leaves sit on a unit circle.
pub fn star_graph<S: Scalar>(n: usize) -> Graph<S> {
    let mut features = vec![S::zero(); 2];
    for i in 1..n {
        let angle = 2.0 * std::f64::consts::PI * (i as f64) / ((n - 1) as f64);
        features.push(S::from_f64(angle.cos()));
        features.push(S::from_f64(angle.sin()));
    }
    let edges = (1..n).map(|i| (0, i)).collect();
    Graph::new(n, features, 2, coord_names(2), edges).expect("valid star graph")
}

/// Cycle of `n` nodes on a circle of the given radius.
pub fn cycle_graph<S: Scalar>(n: usize, radius: f64) -> Graph<S> {
    let mut features = Vec::with_capacity(n * 2);
    for i in 0..n {
        let angle = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
        features.push(S::from_f64(radius * angle.cos()));
        features.push(S::from_f64(radius * angle.sin()));
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    Graph::new(n, features, 2, coord_names(2), edges).expect("valid cycle graph")
}

/// `w`×`h` grid with unit-square spacing scaled by `spacing`.
pub fn grid_graph<S: Scalar>(w: usize, h: usize, spacing: f64) -> Graph<S> {
    let n = w * h;
    let mut features = Vec::with_capacity(n * 2);
    let mut edges = Vec::new();
    for row in 0..h {
        for col in 0..w {
            features.push(S::from_f64(col as f64 * spacing));
            features.push(S::from_f64(row as f64 * spacing));
            let v = row * w + col;
            if col + 1 < w {
                edges.push((v, v + 1));
            }
            if row + 1 < h {
                edges.push((v, v + w));
            }
        }
    }
    Graph::new(n, features, 2, coord_names(2), edges).expect("valid grid graph")
}

/// Random connected graph on `n` nodes: a random spanning tree plus a few
/// extra edges. Node coordinates are uniform in the unit square.
pub fn random_connected_graph<S: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph<S> {
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        edges.push((parent, v));
    }
    let extra = if n > 2 { rng.gen_range(0..n) } else { 0 };
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    let mut features = Vec::with_capacity(n * 2);
    for _ in 0..n {
        features.push(S::uniform(rng, 0.0, 1.0));
        features.push(S::uniform(rng, 0.0, 1.0));
    }
    Graph::new(n, features, 2, coord_names(2), edges).expect("valid random graph")
}
