#![allow(dead_code)]

use std::sync::Arc;

use median_fraisse::fraisse::{enumerate_convex_covers, split_extension};
use median_fraisse::median::MedianAlgebra;
use median_fraisse::morphism::check_epimorphism;

/// Grows an algebra from the point by split extensions, each `choice`
/// picking a cover; stops before exceeding `max_points`.
pub fn grown(choices: &[u32], max_points: usize) -> Arc<MedianAlgebra> {
    let mut k = Arc::new(MedianAlgebra::one_point());
    for &c in choices {
        let covers = enumerate_convex_covers(&k).unwrap();
        let cover = &covers[c as usize % covers.len()];
        if cover.a().len() + cover.b().len() > max_points {
            continue;
        }
        k = split_extension(&k, cover.a(), cover.b()).unwrap().0;
    }
    k
}

/// Every map `m → n` in lexicographic order, kept when it is an epimorphism.
pub fn brute_force_epis(m: &MedianAlgebra, n: &MedianAlgebra) -> Vec<Vec<usize>> {
    let (a, b) = (m.len(), n.len());
    let total = b.pow(a as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut map = vec![0; a];
        let mut c = code;
        for slot in map.iter_mut().rev() {
            *slot = c % b;
            c /= b;
        }
        if check_epimorphism(m, n, &map).is_ok() {
            out.push(map);
        }
    }
    out
}

/// Median-preserving maps `t → x` (not necessarily onto), at most `limit`.
pub fn homomorphisms(t: &MedianAlgebra, x: &MedianAlgebra, limit: usize) -> Vec<Vec<usize>> {
    fn go(
        t: &MedianAlgebra,
        x: &MedianAlgebra,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let k = map.len();
        if k == t.len() {
            out.push(map.clone());
            return;
        }
        for v in 0..x.len() {
            map.push(v);
            // triples involving k, or whose median is k
            let ok = (0..=k).all(|a| {
                (a..=k).all(|b| {
                    (b..=k).all(|c| {
                        let m = t.median_index(a, b, c);
                        (c != k && m != k)
                            || m > k
                            || map[m] == x.median_index(map[a], map[b], map[c])
                    })
                })
            });
            if ok {
                go(t, x, map, out, limit);
            }
            map.pop();
        }
    }
    let mut out = Vec::new();
    go(t, x, &mut Vec::new(), &mut out, limit);
    out
}

/// Maximal linked systems on an n-set as maximal cliques of the
/// intersection graph on nonempty subsets (Bron–Kerbosch with pivoting).
pub fn mls_by_cliques(n: usize) -> Vec<Vec<u32>> {
    let verts: Vec<u32> = (1..1u32 << n).collect();
    let adj: Vec<u64> = verts
        .iter()
        .map(|&a| {
            verts
                .iter()
                .enumerate()
                .filter(|&(_, &b)| a & b != 0 && a != b)
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    fn bk(r: u64, mut p: u64, mut x: u64, adj: &[u64], out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            bk(r | 1 << v, p & adj[v], x & adj[v], adj, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut cliques = Vec::new();
    let all = if verts.len() == 64 {
        u64::MAX
    } else {
        (1u64 << verts.len()) - 1
    };
    bk(0, all, 0, &adj, &mut cliques);
    let mut out: Vec<Vec<u32>> = cliques
        .into_iter()
        .map(|c| {
            (0..verts.len())
                .filter(|&j| c >> j & 1 == 1)
                .map(|j| verts[j])
                .collect()
        })
        .collect();
    out.sort();
    out
}
