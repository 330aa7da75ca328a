//! Brute-force reference checks, independent of the library's search code.

#![allow(dead_code)]

use online_rainbow::{Graph, VertexId};

/// Every simple path between every pair `s < t`, as lists of edge positions.
pub fn all_simple_paths(g: &Graph) -> Vec<Vec<Vec<usize>>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u().index()].push((e.v().index(), i));
        adj[e.v().index()].push((e.u().index(), i));
    }
    let mut out = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            let mut paths = Vec::new();
            let mut on_path = vec![false; n];
            let mut edges = Vec::new();
            walk(&adj, s, t, &mut on_path, &mut edges, &mut paths);
            out.push(paths);
        }
    }
    out
}

fn walk(
    adj: &[Vec<(usize, usize)>],
    x: usize,
    t: usize,
    on_path: &mut [bool],
    edges: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    if x == t {
        paths.push(edges.clone());
        return;
    }
    on_path[x] = true;
    for &(y, e) in &adj[x] {
        if !on_path[y] {
            edges.push(e);
            walk(adj, y, t, on_path, edges, paths);
            edges.pop();
        }
    }
    on_path[x] = false;
}

/// Rainbow check by exhaustive path enumeration; `colors` follows `g.edges()`.
pub fn brute_rainbow(paths: &[Vec<Vec<usize>>], colors: &[u32]) -> bool {
    paths.iter().all(|pair| {
        pair.iter().any(|p| {
            let mut seen: Vec<u32> = p.iter().map(|&e| colors[e]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    })
}

/// Smallest k such that some coloring among all k^m passes the brute check.
pub fn naive_rc(g: &Graph) -> usize {
    let paths = all_simple_paths(g);
    let m = g.m();
    for k in 1..=m as u32 {
        let mut colors = vec![0u32; m];
        loop {
            if brute_rainbow(&paths, &colors) {
                return k as usize;
            }
            // Odometer increment over {0..k}^m.
            let mut i = 0;
            while i < m && colors[i] + 1 == k {
                colors[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            colors[i] += 1;
        }
    }
    unreachable!("m colors always suffice")
}

pub fn label_pairs(g: &Graph) -> Vec<(String, String)> {
    g.labelled_edges()
}

pub fn vid(g: &Graph, label: &str) -> VertexId {
    g.vertex(label).expect("label present")
}
