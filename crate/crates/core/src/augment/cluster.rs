//! Agglomerative clustering of binary missingness patterns.
//!
//! Hamming distance, complete linkage. Among equally close cluster pairs the
//! pair whose smallest row indices are lexicographically smallest merges
//! first. Identical rows are at distance zero, so they always merge before
//! anything else; the implementation collapses them up front and clusters
//! only the distinct patterns.

use std::collections::HashMap;

/// A merge of two clusters, each named by its smallest row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: usize,
}

/// Full merge history over `n` rows (`n - 1` merges when `n > 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl Dendrogram {
    pub fn build(rows: &[Vec<bool>]) -> Dendrogram {
        let n = rows.len();
        let mut index: HashMap<&[bool], usize> = HashMap::new();
        // members of each distinct pattern, in order of first appearance
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            match index.get(row.as_slice()) {
                Some(&g) => groups[g].push(r),
                None => {
                    index.insert(row.as_slice(), groups.len());
                    groups.push(vec![r]);
                }
            }
        }

        let mut merges = Vec::with_capacity(n.saturating_sub(1));
        for g in &groups {
            for &r in &g[1..] {
                merges.push(Merge { left: g[0], right: r, height: 0 });
            }
        }

        let u = groups.len();
        let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
        let mut dist = vec![vec![0usize; u]; u];
        for i in 0..u {
            for j in i + 1..u {
                let d = hamming(&rows[reps[i]], &rows[reps[j]]);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        // cluster id = slot of its smallest pattern; reps are ascending in slot order
        let mut active: Vec<usize> = (0..u).collect();
        while active.len() > 1 {
            let mut best: Option<(usize, usize, usize)> = None;
            for (ai, &i) in active.iter().enumerate() {
                for &j in &active[ai + 1..] {
                    let d = dist[i][j];
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
            let (height, i, j) = best.expect("at least two active clusters");
            merges.push(Merge { left: reps[i], right: reps[j], height });
            for &x in &active {
                let d = dist[i][x].max(dist[j][x]);
                dist[i][x] = d;
                dist[x][i] = d;
            }
            active.retain(|&x| x != j);
        }
        Dendrogram { n, merges }
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Labels `1..=k` after stopping at `k` clusters, numbered by each
    /// cluster's smallest row index.
    pub fn cut(&self, k: usize) -> Vec<usize> {
        assert!(k >= 1 && k <= self.n.max(1));
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for m in &self.merges[..self.n.saturating_sub(k)] {
            let a = find(&mut parent, m.left);
            let b = find(&mut parent, m.right);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
        let mut label_of_root: HashMap<usize, usize> = HashMap::new();
        (0..self.n)
            .map(|r| {
                let root = find(&mut parent, r);
                let next = label_of_root.len() + 1;
                *label_of_root.entry(root).or_insert(next)
            })
            .collect()
    }

    /// Leaf order of the full tree; each merge places the cluster holding the
    /// smaller row index first.
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut leaves: HashMap<usize, Vec<usize>> = (0..self.n).map(|r| (r, vec![r])).collect();
        for m in &self.merges {
            let (lo, hi) = if m.left < m.right { (m.left, m.right) } else { (m.right, m.left) };
            let mut right = leaves.remove(&hi).expect("merged cluster exists");
            leaves.get_mut(&lo).expect("merged cluster exists").append(&mut right);
        }
        leaves.into_values().next().unwrap_or_default()
    }
}
