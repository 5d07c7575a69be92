//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use adaptive_ccb::env::{CausalInstance, StructuredMap};

/// Expected outcome of a kernel at a fixed realization.
pub fn eval_map(map: &StructuredMap<Vec<f64>>, x: &[bool]) -> Vec<f64> {
    match map {
        StructuredMap::LinearMix { weights, tables } => {
            let dim = tables[0][0].len();
            let mut out = vec![0.0; dim];
            for (j, w) in weights.iter().enumerate() {
                for (o, v) in out.iter_mut().zip(&tables[j][x[j] as usize]) {
                    *o += w * v;
                }
            }
            out
        }
        StructuredMap::FirstOne { per_variable, default } => match x.iter().position(|&b| b) {
            Some(j) => per_variable[j].clone(),
            None => default.clone(),
        },
        StructuredMap::Lookup { subset, table } => {
            let mut idx = 0;
            for (t, &v) in subset.iter().enumerate() {
                if x[v] {
                    idx |= 1 << t;
                }
            }
            table[idx].clone()
        }
    }
}

pub fn scalar_map(map: &StructuredMap<f64>) -> StructuredMap<Vec<f64>> {
    match map {
        StructuredMap::LinearMix { weights, tables } => StructuredMap::LinearMix {
            weights: weights.clone(),
            tables: tables.iter().map(|[a, b]| [vec![*a], vec![*b]]).collect(),
        },
        StructuredMap::FirstOne { per_variable, default } => StructuredMap::FirstOne {
            per_variable: per_variable.iter().map(|v| vec![*v]).collect(),
            default: vec![*default],
        },
        StructuredMap::Lookup { subset, table } => StructuredMap::Lookup {
            subset: subset.clone(),
            table: table.iter().map(|v| vec![*v]).collect(),
        },
    }
}

/// Every realization of `q.len()` variables with its probability, where `fix`
/// forces one coordinate.
pub fn realizations(q: &[f64], fix: Option<(usize, bool)>) -> Vec<(Vec<bool>, f64)> {
    let n = q.len();
    (0u32..1 << n)
        .map(|bits| {
            let x: Vec<bool> = (0..n).map(|j| bits >> j & 1 == 1).collect();
            let p = x
                .iter()
                .enumerate()
                .map(|(j, &b)| match fix {
                    Some((fj, fv)) if fj == j => (b == fv) as u8 as f64,
                    _ => {
                        if b {
                            q[j]
                        } else {
                            1.0 - q[j]
                        }
                    }
                })
                .product();
            (x, p)
        })
        .collect()
}

/// `E[outcome | a]` by enumeration; `a = None` is `do()`.
pub fn enumerate_row(map: &StructuredMap<Vec<f64>>, q: &[f64], a: Option<(usize, bool)>) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    for (x, p) in realizations(q, a) {
        let v = eval_map(map, &x);
        if acc.is_empty() {
            acc = vec![0.0; v.len()];
        }
        for (s, o) in acc.iter_mut().zip(&v) {
            *s += p * o;
        }
    }
    acc
}

/// `E[outcome | X_j = v]` under `do()` by enumeration, `None` if the event is null.
pub fn enumerate_conditional(map: &StructuredMap<Vec<f64>>, q: &[f64], j: usize, v: bool) -> Option<Vec<f64>> {
    let mut acc: Vec<f64> = Vec::new();
    let mut mass = 0.0;
    for (x, p) in realizations(q, None) {
        if x[j] != v {
            continue;
        }
        let o = eval_map(map, &x);
        if acc.is_empty() {
            acc = vec![0.0; o.len()];
        }
        for (s, val) in acc.iter_mut().zip(&o) {
            *s += p * val;
        }
        mass += p;
    }
    (mass > 0.0).then(|| acc.into_iter().map(|s| s / mass).collect())
}

/// Rows of the transition matrix by enumeration, canonical order.
pub fn enumerate_transitions(inst: &CausalInstance) -> Vec<Vec<f64>> {
    let mut rows = vec![enumerate_row(&inst.transition_map, &inst.q0, None)];
    for j in 0..inst.n {
        for v in [false, true] {
            rows.push(enumerate_row(&inst.transition_map, &inst.q0, Some((j, v))));
        }
    }
    rows
}

/// Reward matrix by enumeration, `rows[a][i]`.
pub fn enumerate_rewards(inst: &CausalInstance) -> Vec<Vec<f64>> {
    let n_int = 2 * inst.n + 1;
    let mut out = vec![vec![0.0; inst.k]; n_int];
    for (i, c) in inst.contexts.iter().enumerate() {
        let map = scalar_map(&c.reward_map);
        out[0][i] = enumerate_row(&map, &c.q, None)[0];
        for j in 0..inst.n {
            for v in [false, true] {
                out[1 + 2 * j + v as usize][i] = enumerate_row(&map, &c.q, Some((j, v)))[0];
            }
        }
    }
    out
}

/// `max_a Σ_i P_ai √m_i / √y_i` with all-zero columns skipped.
pub fn minmax_objective(rows: &[Vec<f64>], m: &[f64], y: &[f64]) -> f64 {
    let k = m.len();
    let live: Vec<bool> = (0..k).map(|i| rows.iter().any(|r| r[i] > 0.0)).collect();
    let mut best = f64::NEG_INFINITY;
    for r in rows {
        let mut s = 0.0;
        for i in 0..k {
            if !live[i] || r[i] == 0.0 {
                continue;
            }
            if y[i] <= 0.0 {
                return f64::INFINITY;
            }
            s += r[i] * m[i].sqrt() / y[i].sqrt();
        }
        best = best.max(s);
    }
    best
}

/// `min_i y_i` over columns that are not identically zero.
pub fn coverage(rows: &[Vec<f64>], y: &[f64]) -> f64 {
    (0..y.len())
        .filter(|&i| rows.iter().any(|r| r[i] > 0.0))
        .map(|i| y[i])
        .fold(f64::INFINITY, f64::min)
}

/// Minimum of `obj(Pᵀf)` over the simplex by grid search.
///
/// The objective only depends on `y = Pᵀf`, and for `k ≤ 3` every reachable
/// `y` is a convex combination of three rows, so it suffices to search every
/// triple of rows on the barycentric grid with `steps` divisions, then refine
/// around each triple's best point on a 100× finer grid.
pub fn grid_min(rows: &[Vec<f64>], steps: usize, obj: impl Fn(&[f64]) -> f64) -> f64 {
    let n = rows.len();
    let k = rows[0].len();
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                if (a < b && b < c) || n < 3 {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    let mut y = vec![0.0; k];
    let mut eval = |tri: &[usize; 3], w: [f64; 3]| {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = w[0] * rows[tri[0]][i] + w[1] * rows[tri[1]][i] + w[2] * rows[tri[2]][i];
        }
        obj(&y)
    };
    let mut best = f64::INFINITY;
    for tri in &triples {
        let h = 1.0 / steps as f64;
        let mut local = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=steps {
            for j in 0..=steps - i {
                let (u, v) = (i as f64 * h, j as f64 * h);
                let val = eval(tri, [u, v, (1.0 - u - v).max(0.0)]);
                if val < local.0 {
                    local = (val, u, v);
                }
            }
        }
        let fine = h / 100.0;
        for di in -100i32..=100 {
            for dj in -100i32..=100 {
                let u = local.1 + di as f64 * fine;
                let v = local.2 + dj as f64 * fine;
                if u < 0.0 || v < 0.0 || u + v > 1.0 {
                    continue;
                }
                let val = eval(tri, [u, v, (1.0 - u - v).max(0.0)]);
                if val < local.0 {
                    local.0 = val;
                }
            }
        }
        best = best.min(local.0);
    }
    best
}

/// Total variation distance.
pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Empirical distribution from counts.
pub fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect()
}
