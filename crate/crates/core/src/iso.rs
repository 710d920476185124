//! Graph isomorphism for small graphs and balls.
//!
//! Both graphs are refined together (color refinement with a shared
//! signature table, so equal colors mean the same thing on both sides),
//! then one vertex of the smallest ambiguous class is individualized and
//! the search backtracks over its possible images. Leaves are checked edge
//! by edge, so a `true` answer always comes with a verified bijection.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};

/// `true` iff `a` and `b` are isomorphic.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    isomorphism(a, b, None).is_some()
}

/// `true` iff some isomorphism maps `root_a` to `root_b`.
pub fn are_isomorphic_rooted(a: &Graph, root_a: Vertex, b: &Graph, root_b: Vertex) -> bool {
    isomorphism(a, b, Some((root_a, root_b))).is_some()
}

/// An isomorphism `a → b` as a table indexed by `a`'s vertex ids
/// (entry 0 unused), optionally pinning one root pair.
pub fn isomorphism(a: &Graph, b: &Graph, roots: Option<(Vertex, Vertex)>) -> Option<Vec<Vertex>> {
    if a.n() != b.n() || a.m() != b.m() {
        return None;
    }
    let mut da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let mut ca = vec![0u32; a.n() + 1];
    let mut cb = vec![0u32; b.n() + 1];
    if let Some((ra, rb)) = roots {
        ca[ra as usize] = 1;
        cb[rb as usize] = 1;
    }
    search(a, b, ca, cb)
}

/// Weisfeiler–Leman style invariant: isomorphic (rooted) graphs hash
/// equally. Used to bucket candidates before the exact test.
pub fn wl_hash(g: &Graph, root: Option<Vertex>) -> u64 {
    let mut colors: Vec<u64> = (0..=g.n()).map(|_| 1).collect();
    if let Some(r) = root {
        colors[r as usize] = 2;
    }
    let mut classes = count_classes(&colors[1..]);
    for _ in 0..g.n() {
        let next: Vec<u64> = (0..=g.n())
            .map(|v| {
                if v == 0 {
                    return 0;
                }
                let mut nb: Vec<u64> = g.neighbors(v as Vertex).iter().map(|&w| colors[w as usize]).collect();
                nb.sort_unstable();
                nb.iter().fold(mixh(colors[v]), |h, &x| mixh(h ^ x))
            })
            .collect();
        colors = next;
        let now = count_classes(&colors[1..]);
        if now == classes {
            break;
        }
        classes = now;
    }
    let mut all = colors[1..].to_vec();
    all.sort_unstable();
    all.iter().fold(mixh(g.n() as u64 ^ ((g.m() as u64) << 32)), |h, &x| mixh(h ^ x))
}

fn mixh(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn count_classes(colors: &[u64]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Refines both colorings to the coarsest stable partition. Returns
/// `false` as soon as the class histograms disagree.
fn refine(a: &Graph, b: &Graph, ca: &mut [u32], cb: &mut [u32]) -> bool {
    loop {
        let before = class_count(ca, cb);
        let sig = |g: &Graph, c: &[u32], v: usize| {
            let mut nb: Vec<u32> = g.neighbors(v as Vertex).iter().map(|&w| c[w as usize]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sa: Vec<(u32, Vec<u32>)> = (1..=a.n()).map(|v| sig(a, ca, v)).collect();
        let sb: Vec<(u32, Vec<u32>)> = (1..=b.n()).map(|v| sig(b, cb, v)).collect();
        let mut table: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            table.insert(s, 0);
        }
        for (i, slot) in table.values_mut().enumerate() {
            *slot = i as u32;
        }
        let mut hist = vec![0i64; table.len()];
        for (v, s) in sa.iter().enumerate() {
            ca[v + 1] = table[s];
            hist[ca[v + 1] as usize] += 1;
        }
        for (v, s) in sb.iter().enumerate() {
            cb[v + 1] = table[s];
            hist[cb[v + 1] as usize] -= 1;
        }
        if hist.iter().any(|&h| h != 0) {
            return false;
        }
        if class_count(ca, cb) == before {
            return true;
        }
    }
}

fn class_count(ca: &[u32], cb: &[u32]) -> usize {
    let mut c: Vec<u32> = ca[1..].iter().chain(cb[1..].iter()).copied().collect();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(a: &Graph, b: &Graph, mut ca: Vec<u32>, mut cb: Vec<u32>) -> Option<Vec<Vertex>> {
    if !refine(a, b, &mut ca, &mut cb) {
        return None;
    }
    // Class sizes (identical on both sides after a successful refine).
    let mut size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &ca[1..] {
        *size.entry(c).or_default() += 1;
    }
    let target = size.iter().filter(|(_, &s)| s > 1).min_by_key(|(&c, &s)| (s, c)).map(|(&c, _)| c);
    let Some(class) = target else {
        // Discrete: the bijection is forced.
        let mut by_color = vec![0 as Vertex; a.n() + 1];
        for v in 1..=b.n() {
            by_color[cb[v] as usize] = v as Vertex;
        }
        let map: Vec<Vertex> = (0..=a.n()).map(|v| if v == 0 { 0 } else { by_color[ca[v] as usize] }).collect();
        return a.edges().all(|(u, v)| b.has_edge(map[u as usize], map[v as usize])).then_some(map);
    };
    let fresh = ca[1..].iter().chain(cb[1..].iter()).copied().max().unwrap_or(0) + 1;
    let x = (1..=a.n()).find(|&v| ca[v] == class).expect("class is non-empty");
    for y in (1..=b.n()).filter(|&v| cb[v] == class) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[x] = fresh;
        nb[y] = fresh;
        if let Some(map) = search(a, b, na, nb) {
            return Some(map);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn relabel(g: &Graph, perm: &[Vertex]) -> Graph {
        Graph::from_edges(g.n(), g.edges().map(|(u, v)| (perm[u as usize - 1], perm[v as usize - 1]))).unwrap()
    }

    #[test]
    fn random_relabelings_are_recognized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let mut edges = Vec::new();
            for u in 1..=n as Vertex {
                for v in u + 1..=n as Vertex {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let mut perm: Vec<Vertex> = (1..=n as Vertex).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            let map = isomorphism(&g, &h, None).expect("relabeling is isomorphic");
            assert!(g.edges().all(|(u, v)| h.has_edge(map[u as usize], map[v as usize])));
            assert_eq!(wl_hash(&g, None), wl_hash(&h, None));
            assert!(are_isomorphic_rooted(&g, 1, &h, perm[0]));
        }
    }

    #[test]
    fn regular_non_isomorphic_pair() {
        // C6 and two disjoint triangles are both 2-regular on 6 vertices.
        let c6 = Graph::cycle(6);
        let two_triangles = Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        assert!(!are_isomorphic(&c6, &two_triangles));
        assert!(are_isomorphic(&c6, &Graph::cycle(6)));
    }

    #[test]
    fn rooted_distinguishes_roots() {
        let p3 = Graph::path(3);
        assert!(are_isomorphic_rooted(&p3, 1, &p3, 3));
        assert!(!are_isomorphic_rooted(&p3, 1, &p3, 2));
        assert_ne!(wl_hash(&p3, Some(1)), wl_hash(&p3, Some(2)));
    }
}
