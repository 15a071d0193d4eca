//! Exhaustive enumeration of small complexes and their stratifications.
#![allow(dead_code)]

use std::collections::BTreeSet;

use strata_core::{build_from_maximal_simplices, FiniteSpace};

/// Face posets of all complexes with at most `max_simplices` simplices and at
/// most `max_pairs` covering pairs, one per isomorphism class.
pub fn small_complexes(max_simplices: usize, max_pairs: usize) -> Vec<FiniteSpace> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_simplices {
        let all_edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
            .collect();
        let budget = max_simplices - n;
        if all_edges.len() > 20 {
            // only the edgeless complex and a single edge fit the budget here
            if budget >= 1 {
                push_complex(n, &[(0, 1)], &mut seen, &mut out, max_simplices, max_pairs);
            }
            push_complex(n, &[], &mut seen, &mut out, max_simplices, max_pairs);
            continue;
        }
        for mask in 0u32..(1 << all_edges.len()) {
            if mask.count_ones() as usize > budget {
                continue;
            }
            let edges: Vec<(u32, u32)> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            push_complex(n, &edges, &mut seen, &mut out, max_simplices, max_pairs);
        }
    }
    out
}

fn push_complex(
    n: usize,
    edges: &[(u32, u32)],
    seen: &mut BTreeSet<Vec<Vec<u32>>>,
    out: &mut Vec<FiniteSpace>,
    max_simplices: usize,
    max_pairs: usize,
) {
    let has = |a: u32, b: u32| edges.contains(&(a.min(b), a.max(b)));
    let triangles: Vec<[u32; 3]> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).flat_map(move |b| (b + 1..n as u32).map(move |c| [a, b, c])))
        .filter(|&[a, b, c]| has(a, b) && has(b, c) && has(a, c))
        .collect();
    for tmask in 0u32..(1 << triangles.len()) {
        let chosen: Vec<[u32; 3]> = triangles
            .iter()
            .enumerate()
            .filter(|(i, _)| tmask >> i & 1 == 1)
            .map(|(_, &t)| t)
            .collect();
        if n + edges.len() + chosen.len() > max_simplices {
            continue;
        }
        let mut simplices: Vec<Vec<u32>> = (0..n as u32).map(|v| vec![v]).collect();
        simplices.extend(edges.iter().map(|&(a, b)| vec![a, b]));
        simplices.extend(chosen.iter().map(|t| t.to_vec()));
        let key = canonical(n, &simplices);
        if !seen.insert(key) {
            continue;
        }
        let x = build_from_maximal_simplices(simplices).unwrap();
        if x.covering_pairs().len() <= max_pairs {
            out.push(x);
        }
    }
}

fn canonical(n: usize, simplices: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best: Option<Vec<Vec<u32>>> = None;
    loop {
        let mut img: Vec<Vec<u32>> = simplices
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|&v| perm[v as usize]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        img.sort();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `leq[x][y]` for the face order, from the simplex labels.
pub fn order(x: &FiniteSpace) -> Vec<Vec<bool>> {
    (0..x.len())
        .map(|a| {
            (0..x.len())
                .map(|b| x.label(a).unwrap().is_face_of(x.label(b).unwrap()))
                .collect()
        })
        .collect()
}

/// Canonical block labels: first occurrence order.
pub fn canonical_blocks(ids: &[usize]) -> Vec<u8> {
    let mut map = std::collections::HashMap::new();
    ids.iter()
        .map(|id| {
            let next = map.len() as u8;
            *map.entry(*id).or_insert(next)
        })
        .collect()
}

/// A decomposition into pieces, with the covering pairs inside a piece.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub blocks: Vec<u8>,
    pub inner_pairs: u64,
}

fn inner_mask(x: &FiniteSpace, same: impl Fn(usize, usize) -> bool) -> u64 {
    x.covering_pairs()
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| same(a, b))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Comparability components of each label class.
pub fn pieces_of_labeling(leq: &[Vec<bool>], labels: &[u8]) -> Vec<u8> {
    let n = labels.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], a: usize) -> usize {
        if c[a] != a {
            let r = find(c, c[a]);
            c[a] = r;
        }
        c[a]
    }
    for a in 0..n {
        for b in 0..n {
            if labels[a] == labels[b] && (leq[a][b] || leq[b][a]) {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                comp[ra] = rb;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|a| find(&mut comp, a)).collect();
    canonical_blocks(&roots)
}

/// Every assignment `x ↦ level` in `0..levels` that is monotone for the order,
/// so that each `X_i = {x : level(x) ≤ i}` is closed.
pub fn monotone_labelings(leq: &[Vec<bool>], levels: u8) -> Vec<Vec<u8>> {
    let n = leq.len();
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(i: usize, n: usize, levels: u8, leq: &[Vec<bool>], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..levels {
            let ok = (0..i).all(|j| (!leq[j][i] || cur[j] <= l) && (!leq[i][j] || l <= cur[j]));
            if ok {
                cur[i] = l;
                rec(i + 1, n, levels, leq, cur, out);
            }
        }
    }
    rec(0, n, levels, leq, &mut cur, &mut out);
    out
}

/// All piece decompositions produced by some filtration by closed sets: set
/// partitions whose blocks are comparability-connected and whose quotient
/// order has no cycle.
pub fn realizable_decompositions(x: &FiniteSpace) -> Vec<Candidate> {
    let leq = order(x);
    let n = x.len();
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    fn rec(i: usize, max: u8, rgs: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        if i == rgs.len() {
            f(rgs);
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, f);
        }
    }
    let mut visit = |blocks: &[u8]| {
        if pieces_of_labeling(&leq, blocks) != blocks {
            return;
        }
        let k = *blocks.iter().max().unwrap() as usize + 1;
        let mut above = vec![vec![false; k]; k];
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] && blocks[a] != blocks[b] {
                    above[blocks[a] as usize][blocks[b] as usize] = true;
                }
            }
        }
        if has_cycle(&above) {
            return;
        }
        out.push(Candidate {
            blocks: blocks.to_vec(),
            inner_pairs: inner_mask(x, |a, b| blocks[a] == blocks[b]),
        });
    };
    if n > 0 {
        rgs[0] = 0;
        rec(1, 0, &mut rgs, &mut visit);
    }
    out
}

fn has_cycle(adj: &[Vec<bool>]) -> bool {
    let k = adj.len();
    let mut indeg: Vec<usize> = (0..k).map(|j| (0..k).filter(|&i| adj[i][j]).count()).collect();
    let mut stack: Vec<usize> = (0..k).filter(|&j| indeg[j] == 0).collect();
    let mut seen = 0;
    while let Some(i) = stack.pop() {
        seen += 1;
        for j in 0..k {
            if adj[i][j] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
    }
    seen < k
}

/// Whether every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &[u8], coarse: &[u8]) -> bool {
    let mut map = [u8::MAX; 256];
    fine.iter().zip(coarse).all(|(&f, &c)| {
        let m = &mut map[f as usize];
        if *m == u8::MAX {
            *m = c;
        }
        *m == c
    })
}

/// Maximal chains of the order restricted to `set`, as cardinalities.
fn maximal_chain_lengths(leq: &[Vec<bool>], set: &[usize]) -> Vec<usize> {
    let lt = |a: usize, b: usize| a != b && leq[a][b];
    let minimal: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&a| !set.iter().any(|&b| lt(b, a)))
        .collect();
    let mut lengths = Vec::new();
    let mut stack: Vec<(usize, usize)> = minimal.into_iter().map(|a| (a, 1)).collect();
    while let Some((a, len)) = stack.pop() {
        // next elements that cover `a` inside `set`
        let covers: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&b| lt(a, b) && !set.iter().any(|&c| lt(a, c) && lt(c, b)))
            .collect();
        if covers.is_empty() {
            lengths.push(len);
        }
        stack.extend(covers.into_iter().map(|b| (b, len + 1)));
    }
    lengths
}

/// A monotone labeling into `0..=top` with its lex key and homogeneity.
#[derive(Clone, Debug)]
pub struct Labeled {
    pub labels: Vec<u8>,
    pub pieces: Vec<u8>,
    pub inner_pairs: u64,
    /// `(|X_top|, ..., |X_0|)`.
    pub lex_key: Vec<usize>,
    pub homogeneous: bool,
}

pub fn labeled_stratifications(x: &FiniteSpace, top: u8) -> Vec<Labeled> {
    let leq = order(x);
    monotone_labelings(&leq, top + 1)
        .into_iter()
        .map(|labels| {
            let lex_key = (0..=top)
                .rev()
                .map(|i| labels.iter().filter(|&&l| l <= i).count())
                .collect();
            let homogeneous = is_homogeneous_labeling(&leq, &labels, top);
            Labeled {
                pieces: pieces_of_labeling(&leq, &labels),
                inner_pairs: inner_mask(x, |a, b| labels[a] == labels[b]),
                labels,
                lex_key,
                homogeneous,
            }
        })
        .collect()
}

/// Whether the closure of each `S_i` inside `X_i` has only maximal chains of
/// cardinality `i + 1`.
pub fn is_homogeneous_labeling(leq: &[Vec<bool>], labels: &[u8], top: u8) -> bool {
    let n = labels.len();
    (0..=top).all(|i| {
        let closure: Vec<usize> = (0..n)
            .filter(|&a| labels[a] <= i && (0..n).any(|s| labels[s] == i && leq[a][s]))
            .collect();
        closure.is_empty()
            || maximal_chain_lengths(leq, &closure)
                .iter()
                .all(|&c| c == i as usize + 1)
    })
}

/// Stratum index of each element and its piece decomposition.
pub fn strat_labels(x: &FiniteSpace, s: &strata_core::Stratification) -> (Vec<u8>, Vec<u8>) {
    let labels: Vec<u8> = (0..x.len()).map(|a| s.stratum_of(a) as u8).collect();
    let mut piece = vec![usize::MAX; x.len()];
    for (k, (_, p)) in s.all_pieces().enumerate() {
        for a in p.iter() {
            piece[a] = k;
        }
    }
    (labels, canonical_blocks(&piece))
}

/// Covering pairs inside one block.
pub fn inner_pairs_of(x: &FiniteSpace, blocks: &[u8]) -> u64 {
    inner_mask(x, |a, b| blocks[a] == blocks[b])
}
