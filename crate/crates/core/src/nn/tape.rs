//! Reverse-mode automatic differentiation over a flat list of recorded ops.
//!
//! Values are dense matrices. Graph-dependent ops (neighbor mean, attention)
//! take the graph at record time and again at backward time; a tape must
//! only ever be used with a single graph.

use super::matrix::Matrix;
use super::params::Grads;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type NodeId = usize;

const LEAKY_SLOPE: f64 = 0.2;

enum Op {
    Leaf,
    Param(usize),
    MatMul(NodeId, NodeId),
    AddRow(NodeId, NodeId),
    Add(NodeId, NodeId),
    Tanh(NodeId),
    NeighborMean(NodeId),
    /// Single-head attention over `N(i) ∪ {i}`. Entries for node `i` live at
    /// `g.offset(i) + i ..`, self first, then neighbors in adjacency order.
    GatAttend {
        h: NodeId,
        src: NodeId,
        dst: NodeId,
        alpha: Vec<f64>,
        pre: Vec<f64>,
    },
    MaskedLogSoftmax(NodeId, Vec<bool>),
    MeanPool(NodeId),
    AttentionPool {
        gate: NodeId,
        x: NodeId,
        weights: Vec<f64>,
    },
}

#[derive(Default)]
pub struct Tape {
    values: Vec<Matrix>,
    ops: Vec<Op>,
}

fn gat_slot(g: &Graph, i: usize) -> usize {
    g.offset(i) + i
}

fn leaky(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        LEAKY_SLOPE * x
    }
}

fn softmax_in_place(xs: &mut [f64]) {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in xs.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in xs.iter_mut() {
        *x /= sum;
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, id: NodeId) -> &Matrix {
        &self.values[id]
    }

    fn push(&mut self, value: Matrix, op: Op) -> NodeId {
        self.values.push(value);
        self.ops.push(op);
        self.values.len() - 1
    }

    pub fn constant(&mut self, m: Matrix) -> NodeId {
        self.push(m, Op::Leaf)
    }

    pub fn param(&mut self, index: usize, value: &Matrix) -> NodeId {
        self.push(value.clone(), Op::Param(index))
    }

    /// Copies a value with no gradient path back to its source.
    pub fn detach(&mut self, a: NodeId) -> NodeId {
        let v = self.values[a].clone();
        self.push(v, Op::Leaf)
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let (x, y) = (&self.values[a], &self.values[b]);
        if x.cols() != y.rows() {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                x.rows(),
                x.cols(),
                y.rows(),
                y.cols()
            )));
        }
        let v = x.matmul(y);
        Ok(self.push(v, Op::MatMul(a, b)))
    }

    /// Adds the single row `bias` to every row of `a`.
    pub fn add_row(&mut self, a: NodeId, bias: NodeId) -> Result<NodeId> {
        let (x, b) = (&self.values[a], &self.values[bias]);
        if b.rows() != 1 || b.cols() != x.cols() {
            return Err(Error::DimensionMismatch(format!(
                "bias {}x{} for {} columns",
                b.rows(),
                b.cols(),
                x.cols()
            )));
        }
        let mut v = x.clone();
        for r in 0..v.rows() {
            for (o, &bb) in v.row_mut(r).iter_mut().zip(b.data()) {
                *o += bb;
            }
        }
        Ok(self.push(v, Op::AddRow(a, bias)))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let (x, y) = (&self.values[a], &self.values[b]);
        if (x.rows(), x.cols()) != (y.rows(), y.cols()) {
            return Err(Error::DimensionMismatch("add of different shapes".into()));
        }
        let mut v = x.clone();
        v.add_assign(y);
        Ok(self.push(v, Op::Add(a, b)))
    }

    pub fn tanh(&mut self, a: NodeId) -> NodeId {
        let v = self.values[a].map(f64::tanh);
        self.push(v, Op::Tanh(a))
    }

    /// Row `i` becomes the mean of the rows of `i`'s neighbors (zero when
    /// `i` is isolated).
    pub fn neighbor_mean(&mut self, g: &Graph, a: NodeId) -> Result<NodeId> {
        let x = &self.values[a];
        if x.rows() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for {} nodes",
                x.rows(),
                g.n()
            )));
        }
        let mut v = Matrix::zeros(x.rows(), x.cols());
        for i in 0..g.n() {
            let nb = g.neighbors(i);
            if nb.is_empty() {
                continue;
            }
            let inv = 1.0 / nb.len() as f64;
            let out = v.row_mut(i);
            for &j in nb {
                for (o, &s) in out.iter_mut().zip(x.row(j)) {
                    *o += s * inv;
                }
            }
        }
        Ok(self.push(v, Op::NeighborMean(a)))
    }

    /// Attention-weighted aggregation of the rows of `h`. Logits are
    /// `LeakyReLU(h_i · dst + h_j · src)`, normalized over `N(i) ∪ {i}`.
    pub fn gat_attend(&mut self, g: &Graph, h: NodeId, src: NodeId, dst: NodeId) -> Result<NodeId> {
        let (x, a_src, a_dst) = (&self.values[h], &self.values[src], &self.values[dst]);
        let c = x.cols();
        if x.rows() != g.n()
            || a_src.rows() != c
            || a_dst.rows() != c
            || a_src.cols() != 1
            || a_dst.cols() != 1
        {
            return Err(Error::DimensionMismatch(
                "attention vectors do not match features".into(),
            ));
        }
        let dot =
            |row: &[f64], w: &Matrix| row.iter().zip(w.data()).map(|(p, q)| p * q).sum::<f64>();
        let s_src: Vec<f64> = (0..g.n()).map(|j| dot(x.row(j), a_src)).collect();
        let s_dst: Vec<f64> = (0..g.n()).map(|i| dot(x.row(i), a_dst)).collect();
        let total = g.total_volume() + g.n();
        let mut pre = vec![0.0; total];
        let mut alpha = vec![0.0; total];
        let mut v = Matrix::zeros(g.n(), c);
        for i in 0..g.n() {
            let base = gat_slot(g, i);
            let k = g.degree(i) + 1;
            pre[base] = s_dst[i] + s_src[i];
            for (t, &j) in g.neighbors(i).iter().enumerate() {
                pre[base + 1 + t] = s_dst[i] + s_src[j];
            }
            let a = &mut alpha[base..base + k];
            for (slot, &p) in a.iter_mut().zip(&pre[base..base + k]) {
                *slot = leaky(p);
            }
            softmax_in_place(a);
            let out = v.row_mut(i);
            for (t, j) in std::iter::once(i)
                .chain(g.neighbors(i).iter().copied())
                .enumerate()
            {
                let w = alpha[base + t];
                for (o, &s) in out.iter_mut().zip(x.row(j)) {
                    *o += w * s;
                }
            }
        }
        Ok(self.push(
            v,
            Op::GatAttend {
                h,
                src,
                dst,
                alpha,
                pre,
            },
        ))
    }

    /// Log-softmax of an `n x 1` score column; masked rows get `-inf`.
    pub fn masked_log_softmax(&mut self, a: NodeId, mask: &[bool]) -> Result<NodeId> {
        let x = &self.values[a];
        if x.cols() != 1 || x.rows() != mask.len() {
            return Err(Error::DimensionMismatch(
                "scores must be one column per node".into(),
            ));
        }
        let v = Matrix::from_vec(x.rows(), 1, masked_log_softmax(x.data(), mask)?);
        Ok(self.push(v, Op::MaskedLogSoftmax(a, mask.to_vec())))
    }

    pub fn mean_pool(&mut self, a: NodeId) -> NodeId {
        let x = &self.values[a];
        let mut v = Matrix::zeros(1, x.cols());
        let inv = 1.0 / x.rows().max(1) as f64;
        for r in 0..x.rows() {
            for (o, &s) in v.row_mut(0).iter_mut().zip(x.row(r)) {
                *o += s * inv;
            }
        }
        self.push(v, Op::MeanPool(a))
    }

    /// Gated global attention pooling: `softmax(gate)ᵀ x`.
    pub fn attention_pool(&mut self, gate: NodeId, x: NodeId) -> Result<NodeId> {
        let (gv, xv) = (&self.values[gate], &self.values[x]);
        if gv.cols() != 1 || gv.rows() != xv.rows() {
            return Err(Error::DimensionMismatch(
                "gate must be one column per row".into(),
            ));
        }
        let mut weights = gv.data().to_vec();
        softmax_in_place(&mut weights);
        let mut v = Matrix::zeros(1, xv.cols());
        for (r, &w) in weights.iter().enumerate() {
            for (o, &s) in v.row_mut(0).iter_mut().zip(xv.row(r)) {
                *o += w * s;
            }
        }
        Ok(self.push(v, Op::AttentionPool { gate, x, weights }))
    }

    /// Propagates the seeded output gradients back to every parameter leaf
    /// and accumulates them into `grads`.
    pub fn backward(&self, g: &Graph, seeds: &[(NodeId, Matrix)], grads: &mut Grads) {
        let mut adj: Vec<Option<Matrix>> = vec![None; self.values.len()];
        for (id, m) in seeds {
            accumulate(&mut adj, *id, m);
        }
        for id in (0..self.values.len()).rev() {
            let Some(gout) = adj[id].take() else { continue };
            match &self.ops[id] {
                Op::Leaf => {}
                Op::Param(p) => grads.accumulate(*p, &gout),
                Op::MatMul(a, b) => {
                    let da = gout.matmul_t(&self.values[*b]);
                    let db = self.values[*a].t_matmul(&gout);
                    accumulate(&mut adj, *a, &da);
                    accumulate(&mut adj, *b, &db);
                }
                Op::AddRow(a, bias) => {
                    let mut db = Matrix::zeros(1, gout.cols());
                    for r in 0..gout.rows() {
                        for (o, &s) in db.row_mut(0).iter_mut().zip(gout.row(r)) {
                            *o += s;
                        }
                    }
                    accumulate(&mut adj, *bias, &db);
                    accumulate(&mut adj, *a, &gout);
                }
                Op::Add(a, b) => {
                    accumulate(&mut adj, *a, &gout);
                    accumulate(&mut adj, *b, &gout);
                }
                Op::Tanh(a) => {
                    let y = &self.values[id];
                    let mut d = gout;
                    for (o, &t) in d.data_mut().iter_mut().zip(y.data()) {
                        *o *= 1.0 - t * t;
                    }
                    accumulate(&mut adj, *a, &d);
                }
                Op::NeighborMean(a) => {
                    let mut d = Matrix::zeros(gout.rows(), gout.cols());
                    for i in 0..g.n() {
                        let nb = g.neighbors(i);
                        if nb.is_empty() {
                            continue;
                        }
                        let inv = 1.0 / nb.len() as f64;
                        for &j in nb {
                            for (o, &s) in d.row_mut(j).iter_mut().zip(gout.row(i)) {
                                *o += s * inv;
                            }
                        }
                    }
                    accumulate(&mut adj, *a, &d);
                }
                Op::GatAttend {
                    h,
                    src,
                    dst,
                    alpha,
                    pre,
                } => {
                    let x = &self.values[*h];
                    let (a_src, a_dst) = (self.values[*src].data(), self.values[*dst].data());
                    let c = x.cols();
                    let mut dx = Matrix::zeros(x.rows(), c);
                    let mut d_src = Matrix::zeros(c, 1);
                    let mut d_dst = Matrix::zeros(c, 1);
                    let mut d_alpha = Vec::new();
                    for i in 0..g.n() {
                        let base = gat_slot(g, i);
                        let gi = gout.row(i);
                        let members: Vec<usize> = std::iter::once(i)
                            .chain(g.neighbors(i).iter().copied())
                            .collect();
                        d_alpha.clear();
                        for (t, &j) in members.iter().enumerate() {
                            let w = alpha[base + t];
                            let xj = x.row(j);
                            d_alpha.push(gi.iter().zip(xj).map(|(p, q)| p * q).sum::<f64>());
                            for (o, &s) in dx.row_mut(j).iter_mut().zip(gi) {
                                *o += w * s;
                            }
                        }
                        let mean: f64 = (0..members.len())
                            .map(|t| alpha[base + t] * d_alpha[t])
                            .sum();
                        let mut ds_dst_total = 0.0;
                        for (t, &j) in members.iter().enumerate() {
                            let de = alpha[base + t] * (d_alpha[t] - mean);
                            let ds = if pre[base + t] > 0.0 {
                                de
                            } else {
                                LEAKY_SLOPE * de
                            };
                            if ds == 0.0 {
                                continue;
                            }
                            ds_dst_total += ds;
                            for (k, o) in dx.row_mut(j).iter_mut().enumerate() {
                                *o += ds * a_src[k];
                            }
                            for (o, &s) in d_src.data_mut().iter_mut().zip(x.row(j)) {
                                *o += ds * s;
                            }
                        }
                        if ds_dst_total != 0.0 {
                            for (k, o) in dx.row_mut(i).iter_mut().enumerate() {
                                *o += ds_dst_total * a_dst[k];
                            }
                            for (o, &s) in d_dst.data_mut().iter_mut().zip(x.row(i)) {
                                *o += ds_dst_total * s;
                            }
                        }
                    }
                    accumulate(&mut adj, *h, &dx);
                    accumulate(&mut adj, *src, &d_src);
                    accumulate(&mut adj, *dst, &d_dst);
                }
                Op::MaskedLogSoftmax(a, mask) => {
                    let y = self.values[id].data();
                    let total: f64 = (0..y.len())
                        .filter(|&i| !mask[i])
                        .map(|i| gout.data()[i])
                        .sum();
                    let d: Vec<f64> = (0..y.len())
                        .map(|i| {
                            if mask[i] {
                                0.0
                            } else {
                                gout.data()[i] - y[i].exp() * total
                            }
                        })
                        .collect();
                    accumulate(&mut adj, *a, &Matrix::from_vec(y.len(), 1, d));
                }
                Op::MeanPool(a) => {
                    let rows = self.values[*a].rows();
                    let inv = 1.0 / rows.max(1) as f64;
                    let mut d = Matrix::zeros(rows, gout.cols());
                    for r in 0..rows {
                        for (o, &s) in d.row_mut(r).iter_mut().zip(gout.row(0)) {
                            *o = s * inv;
                        }
                    }
                    accumulate(&mut adj, *a, &d);
                }
                Op::AttentionPool { gate, x, weights } => {
                    let xv = &self.values[*x];
                    let g0 = gout.row(0);
                    let mut dx = Matrix::zeros(xv.rows(), xv.cols());
                    let dw: Vec<f64> = (0..xv.rows())
                        .map(|r| xv.row(r).iter().zip(g0).map(|(p, q)| p * q).sum())
                        .collect();
                    for (r, &w) in weights.iter().enumerate() {
                        for (o, &s) in dx.row_mut(r).iter_mut().zip(g0) {
                            *o = w * s;
                        }
                    }
                    let mean: f64 = weights.iter().zip(&dw).map(|(w, d)| w * d).sum();
                    let dgate: Vec<f64> = weights
                        .iter()
                        .zip(&dw)
                        .map(|(w, d)| w * (d - mean))
                        .collect();
                    accumulate(&mut adj, *x, &dx);
                    accumulate(&mut adj, *gate, &Matrix::from_vec(weights.len(), 1, dgate));
                }
            }
        }
    }
}

fn accumulate(adj: &mut [Option<Matrix>], id: NodeId, m: &Matrix) {
    match &mut adj[id] {
        Some(acc) => acc.add_assign(m),
        slot @ None => *slot = Some(m.clone()),
    }
}

/// Numerically stable log-softmax over the unmasked entries; masked entries
/// are `-inf`.
pub fn masked_log_softmax(scores: &[f64], mask: &[bool]) -> Result<Vec<f64>> {
    let max = scores
        .iter()
        .zip(mask)
        .filter(|(_, &m)| !m)
        .map(|(&s, _)| s)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::AllMasked);
    }
    let lse = max
        + scores
            .iter()
            .zip(mask)
            .filter(|(_, &m)| !m)
            .map(|(&s, _)| (s - max).exp())
            .sum::<f64>()
            .ln();
    Ok(scores
        .iter()
        .zip(mask)
        .map(|(&s, &m)| if m { f64::NEG_INFINITY } else { s - lse })
        .collect())
}
