//! Second-order difference stencils for physical first and second
//! derivatives at grid nodes.

use nalgebra::{Matrix2, SMatrix, SVector, Vector2};

use super::grid::Grid;

/// How the straight sides are treated when differentiating along `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideMode {
    /// Ghost values mirrored across the side (homogeneous Neumann data).
    Reflect,
    /// Second-order one-sided differences.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilEntry {
    pub node: usize,
    /// Contribution to the gradient.
    pub a: Vector2<f64>,
    /// Contribution to the Hessian.
    pub b: Matrix2<f64>,
}

/// `Du = sum a_k u_k`, `D^2u = sum B_k u_k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeStencil {
    pub entries: Vec<StencilEntry>,
}

impl NodeStencil {
    pub fn apply(&self, u: &[f64]) -> (Vector2<f64>, Matrix2<f64>) {
        let mut g = Vector2::zeros();
        let mut h = Matrix2::zeros();
        for e in &self.entries {
            g += e.a * u[e.node];
            h += e.b * u[e.node];
        }
        (g, h)
    }

    pub fn gradient(&self, u: &[f64]) -> Vector2<f64> {
        self.entries.iter().fold(Vector2::zeros(), |g, e| g + e.a * u[e.node])
    }
}

type Taps = Vec<(isize, f64)>;

fn central(h: f64) -> (Taps, Taps) {
    (vec![(-1, -0.5 / h), (1, 0.5 / h)], vec![(-1, 1.0 / (h * h)), (0, -2.0 / (h * h)), (1, 1.0 / (h * h))])
}

/// One-sided taps pointing in direction `dir` (+1 forward, -1 backward).
fn one_sided(h: f64, dir: isize) -> (Taps, Taps) {
    let d = dir as f64;
    (
        vec![(0, -1.5 * d / h), (dir, 2.0 * d / h), (2 * dir, -0.5 * d / h)],
        vec![(0, 2.0 / (h * h)), (dir, -5.0 / (h * h)), (2 * dir, 4.0 / (h * h)), (3 * dir, -1.0 / (h * h))],
    )
}

fn s_taps(grid: &Grid, i: usize, mode: SideMode) -> (Vec<(usize, f64)>, Vec<(usize, f64)>) {
    let h = grid.h_s();
    let last = grid.ns - 1;
    let (d1, d2) = match () {
        _ if i == 0 && mode == SideMode::OneSided => one_sided(h, 1),
        _ if i == last && mode == SideMode::OneSided => one_sided(h, -1),
        _ => central(h),
    };
    let map = |off: isize| -> usize {
        let m = i as isize + off;
        if m < 0 {
            (-m) as usize
        } else if m as usize > last {
            2 * last - m as usize
        } else {
            m as usize
        }
    };
    let conv = |t: Taps| t.into_iter().map(|(o, c)| (map(o), c)).collect();
    (conv(d1), conv(d2))
}

fn eta_taps(grid: &Grid, j: usize) -> (Vec<(usize, f64)>, Vec<(usize, f64)>) {
    let h = grid.h_eta();
    let (d1, d2) = if j == grid.nt - 1 { one_sided(h, -1) } else { central(h) };
    let conv = |t: Taps| t.into_iter().map(|(o, c)| ((j as isize + o) as usize, c)).collect();
    (conv(d1), conv(d2))
}

fn push(entries: &mut Vec<StencilEntry>, node: usize, a: Vector2<f64>, b: Matrix2<f64>) {
    if let Some(e) = entries.iter_mut().find(|e| e.node == node) {
        e.a += a;
        e.b += b;
    } else {
        entries.push(StencilEntry { node, a, b });
    }
}

/// Weighted least-squares quadratic fit over the surrounding 3x3 block of
/// nodes, in physical coordinates.
///
/// Used on the ray through the arc junction, where the map is only
/// Lipschitz in `s` and parametric differences are not consistent. Weights
/// `|d|^-4` make the fit scale invariant.
fn fitted_stencil(grid: &Grid, i: usize, j: usize) -> NodeStencil {
    let k0 = grid.idx(i, j);
    let x0 = grid.nodes[k0];
    let js: [isize; 3] = if j == grid.nt - 1 { [-2, -1, 0] } else { [-1, 0, 1] };
    let mut nodes: Vec<usize> = Vec::with_capacity(8);
    for di in [-1isize, 0, 1] {
        for dj in js {
            let ii = i as isize + di;
            let jj = j as isize + dj;
            if ii < 0 || ii >= grid.ns as isize {
                continue;
            }
            let k = grid.idx(ii as usize, jj as usize);
            if k != k0 && !nodes.contains(&k) {
                nodes.push(k);
            }
        }
    }
    let mut normal = SMatrix::<f64, 5, 5>::zeros();
    let rows: Vec<(SVector<f64, 5>, f64)> = nodes
        .iter()
        .map(|&k| {
            let d = [grid.nodes[k][0] - x0[0], grid.nodes[k][1] - x0[1]];
            let r2 = d[0] * d[0] + d[1] * d[1];
            let row = SVector::<f64, 5>::from([d[0], d[1], 0.5 * d[0] * d[0], d[0] * d[1], 0.5 * d[1] * d[1]]);
            (row, 1.0 / (r2 * r2))
        })
        .collect();
    for (row, wt) in &rows {
        normal += row * row.transpose() * *wt;
    }
    let inv = normal.try_inverse().expect("fit nodes span a quadratic");
    let mut entries = Vec::with_capacity(nodes.len() + 1);
    let (mut a0, mut b0) = (Vector2::zeros(), Matrix2::zeros());
    for (&k, (row, wt)) in nodes.iter().zip(&rows) {
        let c = inv * row * *wt;
        let a = Vector2::new(c[0], c[1]);
        let b = Matrix2::new(c[2], c[3], c[3], c[4]);
        a0 -= a;
        b0 -= b;
        entries.push(StencilEntry { node: k, a, b });
    }
    entries.push(StencilEntry { node: k0, a: a0, b: b0 });
    NodeStencil { entries }
}

/// Stencil at node `(i, j)` with `j >= 1`.
pub fn node_stencil(grid: &Grid, i: usize, j: usize, mode: SideMode) -> NodeStencil {
    if matches!(grid.kink, Some((k, _)) if k == i) {
        return fitted_stencil(grid, i, j);
    }
    let m = &grid.metric[grid.idx(i, j)];
    let jac = Matrix2::from_columns(&[m.xs, m.xe]);
    let jinv = jac.try_inverse().expect("grid Jacobian is positive at j >= 1");
    let jit = jinv.transpose();
    let (s1, s2) = s_taps(grid, i, mode);
    let (e1, e2) = eta_taps(grid, j);

    // Parametric taps: (node, [c_s, c_e], [c_ss, c_se, c_ee]).
    let mut raw: Vec<(usize, [f64; 2], [f64; 3])> = Vec::new();
    let mut add = |node: usize, c1: [f64; 2], c2: [f64; 3]| {
        if let Some(r) = raw.iter_mut().find(|r| r.0 == node) {
            for q in 0..2 {
                r.1[q] += c1[q];
            }
            for q in 0..3 {
                r.2[q] += c2[q];
            }
        } else {
            raw.push((node, c1, c2));
        }
    };
    for &(ii, c) in &s1 {
        add(grid.idx(ii, j), [c, 0.0], [0.0; 3]);
    }
    for &(ii, c) in &s2 {
        add(grid.idx(ii, j), [0.0; 2], [c, 0.0, 0.0]);
    }
    for &(jj, c) in &e1 {
        add(grid.idx(i, jj), [0.0, c], [0.0; 3]);
    }
    for &(jj, c) in &e2 {
        add(grid.idx(i, jj), [0.0; 2], [0.0, 0.0, c]);
    }
    for &(ii, cs) in &s1 {
        for &(jj, ce) in &e1 {
            add(grid.idx(ii, jj), [0.0; 2], [0.0, cs * ce, 0.0]);
        }
    }

    let mut entries = Vec::with_capacity(raw.len());
    for (node, c1, c2) in raw {
        let a = jit * Vector2::new(c1[0], c1[1]);
        let mm = Matrix2::new(
            c2[0] - a.dot(&m.xss),
            c2[1] - a.dot(&m.xse),
            c2[1] - a.dot(&m.xse),
            c2[2] - a.dot(&m.xee),
        );
        push(&mut entries, node, a, jit * mm * jinv);
    }
    entries.retain(|e| e.a.iter().chain(e.b.iter()).any(|v| *v != 0.0));
    NodeStencil { entries }
}

/// Stencils at every node with `j >= 1`; `None` at the corner row.
pub fn build_stencils(grid: &Grid, mode: SideMode) -> Vec<Option<NodeStencil>> {
    (0..grid.len())
        .map(|k| {
            let (i, j) = grid.ij(k);
            (j > 0).then(|| node_stencil(grid, i, j, mode))
        })
        .collect()
}

/// Laplacian at O from the first ring, assuming `u - u_O ~ (lap/4) r^2`:
/// a trapezoid-weighted least-squares fit over the sector.
pub fn corner_laplacian(grid: &Grid) -> Vec<(usize, f64)> {
    let mut taps = Vec::with_capacity(grid.ns + 1);
    let mut den = 0.0;
    let w = |i: usize| if i == 0 || i == grid.ns - 1 { 0.5 } else { 1.0 };
    for i in 0..grid.ns {
        let x = grid.nodes[grid.idx(i, 1)];
        let r2 = x[0] * x[0] + x[1] * x[1];
        den += w(i) * r2 * r2;
    }
    let mut center = 0.0;
    for i in 0..grid.ns {
        let x = grid.nodes[grid.idx(i, 1)];
        let c = 4.0 * w(i) * (x[0] * x[0] + x[1] * x[1]) / den;
        taps.push((grid.idx(i, 1), c));
        center -= c;
    }
    taps.push((0, center));
    taps
}
