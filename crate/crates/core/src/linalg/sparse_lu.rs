use std::collections::VecDeque;

use super::CsrMatrix;
use crate::error::{Error, Result};

/// Left-looking sparse LU without pivoting, on a reverse Cuthill–McKee
/// reordering of the input.
///
/// Skipping pivoting is only safe for matrices whose leading principal
/// minors are well away from zero. Strictly row diagonally dominant
/// matrices such as `I − P̃` qualify.
#[derive(Debug, Clone)]
pub struct SparseLu {
    n: usize,
    /// new index -> original index
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
    up: Vec<usize>,
    ui: Vec<usize>,
    ux: Vec<f64>,
    diag: Vec<f64>,
}

impl SparseLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        assert_eq!(a.n_rows(), a.n_cols(), "square matrix required");
        let n = a.n_rows();
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for i in 0..n {
            for (j, v) in a.row(i) {
                cols[inv[j]].push((inv[i], v));
            }
        }
        let scale = cols
            .iter()
            .flatten()
            .fold(0.0f64, |m, e| m.max(e.1.abs()))
            .max(f64::MIN_POSITIVE);

        let mut lu = SparseLu {
            n,
            perm,
            lp: vec![0],
            li: Vec::new(),
            lx: Vec::new(),
            up: vec![0],
            ui: Vec::new(),
            ux: Vec::new(),
            diag: Vec::with_capacity(n),
        };
        let mut x = vec![0.0; n];
        let mut mark = vec![usize::MAX; n];
        let mut topo: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();

        for j in 0..n {
            // Nonzero pattern of L \ b_j, in topological order (reversed).
            topo.clear();
            for &(i0, _) in &cols[j] {
                if mark[i0] == j {
                    continue;
                }
                mark[i0] = j;
                stack.push(lu.children(i0, j));
                while let Some(top) = stack.last_mut() {
                    if top.1 < top.2 {
                        let c = lu.li[top.1];
                        top.1 += 1;
                        if mark[c] != j {
                            mark[c] = j;
                            let next = lu.children(c, j);
                            stack.push(next);
                        }
                    } else {
                        topo.push(top.0);
                        stack.pop();
                    }
                }
            }
            for &(i, v) in &cols[j] {
                x[i] = v;
            }
            for &k in topo.iter().rev() {
                if k >= j {
                    continue;
                }
                let xk = x[k];
                if xk != 0.0 {
                    for p in lu.lp[k]..lu.lp[k + 1] {
                        x[lu.li[p]] -= lu.lx[p] * xk;
                    }
                }
            }
            let pivot = x[j];
            if !(pivot.abs() > scale * 1e-14) {
                return Err(Error::Singular {
                    column: lu.perm[j],
                    pivot,
                });
            }
            for &k in &topo {
                let v = x[k];
                x[k] = 0.0;
                if v == 0.0 || k == j {
                    continue;
                }
                if k < j {
                    lu.ui.push(k);
                    lu.ux.push(v);
                } else {
                    lu.li.push(k);
                    lu.lx.push(v / pivot);
                }
            }
            lu.diag.push(pivot);
            lu.lp.push(lu.li.len());
            lu.up.push(lu.ui.len());
        }
        Ok(lu)
    }

    /// DFS frame `(node, next child, end)`; nodes at or past `j` have no
    /// computed L column yet and hence no children.
    fn children(&self, k: usize, j: usize) -> (usize, usize, usize) {
        if k < j {
            (k, self.lp[k], self.lp[k + 1])
        } else {
            (k, 0, 0)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries of L and U including the diagonal.
    pub fn fill(&self) -> usize {
        self.li.len() + self.ui.len() + self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut c: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..self.n {
            let cj = c[j];
            if cj != 0.0 {
                for p in self.lp[j]..self.lp[j + 1] {
                    c[self.li[p]] -= self.lx[p] * cj;
                }
            }
        }
        for j in (0..self.n).rev() {
            c[j] /= self.diag[j];
            let cj = c[j];
            if cj != 0.0 {
                for p in self.up[j]..self.up[j + 1] {
                    c[self.ui[p]] -= self.ux[p] * cj;
                }
            }
        }
        let mut x = vec![0.0; self.n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = c[new];
        }
        x
    }

    /// Solves `Aᵀ y = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let mut c: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..self.n {
            let mut s = c[j];
            for p in self.up[j]..self.up[j + 1] {
                s -= self.ux[p] * c[self.ui[p]];
            }
            c[j] = s / self.diag[j];
        }
        for j in (0..self.n).rev() {
            let mut s = c[j];
            for p in self.lp[j]..self.lp[j + 1] {
                s -= self.lx[p] * c[self.li[p]];
            }
            c[j] = s;
        }
        let mut y = vec![0.0; self.n];
        for (new, &old) in self.perm.iter().enumerate() {
            y[old] = c[new];
        }
        y
    }
}

/// Reverse Cuthill–McKee ordering of the symmetrised pattern of `a`.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n_rows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for (j, _) in a.row(i) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    for l in &mut adj {
        l.sort_by_key(|&v| (deg[v], v));
    }

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (deg[v], v));

    let bfs = |start: usize, visited: &mut Vec<bool>, out: &mut Vec<usize>| {
        let mut q = VecDeque::from([start]);
        visited[start] = true;
        while let Some(u) = q.pop_front() {
            out.push(u);
            for &v in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    q.push_back(v);
                }
            }
        }
    };

    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        // One sweep towards a pseudo-peripheral start: the last BFS level's
        // lowest-degree node.
        let mut probe_seen = visited.clone();
        let mut probe = Vec::new();
        bfs(seed, &mut probe_seen, &mut probe);
        let mut level = vec![usize::MAX; n];
        level[seed] = 0;
        let mut far = 0;
        for &u in &probe {
            for &v in &adj[u] {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    far = far.max(level[v]);
                }
            }
        }
        let start = probe
            .iter()
            .copied()
            .filter(|&u| level[u] == far)
            .min_by_key(|&u| (deg[u], u))
            .unwrap_or(seed);
        bfs(start, &mut visited, &mut order);
    }
    order.reverse();
    order
}
