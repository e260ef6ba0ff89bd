//! Dense desk-scale network with the aggregation topology of a DAG.
//!
//! The virtual input node emits a linear projection of the sample. Every interior
//! node sums its predecessors, each scaled by `sigmoid(s_e)` for a learnable edge
//! scalar `s_e`, then applies `relu(W a + b)`. The output node averages its
//! `sigmoid(s_e)`-scaled predecessors and feeds a linear classifier.
//!
//! Parameters are one flat vector laid out as
//! `[proj_w (d x in) | proj_b (d) | per interior node: W (d x d), b (d) | s (edges) | cls_w (classes x d) | cls_b (classes)]`.

use std::ops::Range;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Split};
use super::EvalReport;
use crate::error::{Error, Result};
use crate::flow::{flops_estimate, CostModel};
use crate::graph::Dag;

#[derive(Debug, Clone, PartialEq)]
pub struct TinyNet {
    dag: Dag,
    width: usize,
    input_dim: usize,
    classes: usize,
    /// Incoming `(source, edge index)` per node.
    preds: Vec<Vec<(usize, usize)>>,
    params: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Per-sample activations kept for the backward pass.
struct Trace {
    h: Vec<Vec<f64>>,
    agg: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
    out_agg: Vec<f64>,
    logits: Vec<f64>,
}

impl TinyNet {
    /// Unit weights uniform in `±1/sqrt(d)`, projection uniform in
    /// `±1/sqrt(input_dim)`, edge scalars, biases and the classifier zero.
    pub fn new(dag: &Dag, width: usize, input_dim: usize, classes: usize, seed: u64) -> Result<Self> {
        if width == 0 || input_dim == 0 || classes < 2 {
            return Err(Error::Param("width and input_dim must be positive, classes >= 2".into()));
        }
        let preds = {
            let mut p = vec![Vec::new(); dag.node_count()];
            for (i, e) in dag.edges().iter().enumerate() {
                p[e.v].push((e.u, i));
            }
            p
        };
        let mut net = Self {
            dag: dag.clone(),
            width,
            input_dim,
            classes,
            preds,
            params: Vec::new(),
        };
        net.params = vec![0.0; net.param_count()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let proj_bound = 1.0 / (input_dim as f64).sqrt();
        let proj = net.proj_w();
        for w in &mut net.params[proj] {
            *w = rng.random_range(-proj_bound..proj_bound);
        }
        let unit_bound = 1.0 / (width as f64).sqrt();
        for x in dag.interior_nodes() {
            let range = net.unit_w(x);
            for w in &mut net.params[range] {
                *w = rng.random_range(-unit_bound..unit_bound);
            }
        }
        Ok(net)
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.cls_b().end
    }

    fn proj_w(&self) -> Range<usize> {
        0..self.width * self.input_dim
    }

    fn proj_b(&self) -> Range<usize> {
        let s = self.proj_w().end;
        s..s + self.width
    }

    fn unit_base(&self, x: usize) -> usize {
        self.proj_b().end + x * (self.width * self.width + self.width)
    }

    /// Weight matrix of interior node `x`, row-major `d x d`.
    pub fn unit_w(&self, x: usize) -> Range<usize> {
        let s = self.unit_base(x);
        s..s + self.width * self.width
    }

    fn unit_b(&self, x: usize) -> Range<usize> {
        let s = self.unit_w(x).end;
        s..s + self.width
    }

    fn edge_s(&self) -> Range<usize> {
        let s = self.unit_base(self.dag.interior_count());
        s..s + self.dag.edges().len()
    }

    fn cls_w(&self) -> Range<usize> {
        let s = self.edge_s().end;
        s..s + self.classes * self.width
    }

    fn cls_b(&self) -> Range<usize> {
        let s = self.cls_w().end;
        s..s + self.classes
    }

    /// Number of node-unit matrix entries (the prunable weights).
    pub fn weights_total(&self) -> usize {
        self.dag.interior_count() * self.width * self.width
    }

    pub fn weights_remaining(&self) -> usize {
        self.dag
            .interior_nodes()
            .map(|x| self.params[self.unit_w(x)].iter().filter(|w| **w != 0.0).count())
            .sum()
    }

    fn matvec(&self, w: Range<usize>, b: Range<usize>, x: &[f64], rows: usize) -> Vec<f64> {
        let cols = x.len();
        let w = &self.params[w];
        let b = &self.params[b];
        (0..rows)
            .map(|r| w[r * cols..(r + 1) * cols].iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b[r])
            .collect()
    }

    fn forward_trace(&self, sample: &[f64]) -> Trace {
        let d = self.width;
        let n = self.dag.node_count();
        let (input, output) = (self.dag.input_node(), self.dag.output_node());
        let s = &self.params[self.edge_s()];
        let mut h = vec![Vec::new(); n];
        let mut agg = vec![Vec::new(); n];
        let mut z = vec![Vec::new(); n];
        h[input] = self.matvec(self.proj_w(), self.proj_b(), sample, d);
        for x in self.dag.interior_nodes() {
            let mut a = vec![0.0; d];
            for &(u, e) in &self.preds[x] {
                let g = sigmoid(s[e]);
                for (ai, hi) in a.iter_mut().zip(&h[u]) {
                    *ai += g * hi;
                }
            }
            let zx = self.matvec(self.unit_w(x), self.unit_b(x), &a, d);
            h[x] = zx.iter().map(|v| v.max(0.0)).collect();
            agg[x] = a;
            z[x] = zx;
        }
        let k = self.preds[output].len().max(1) as f64;
        let mut out_agg = vec![0.0; d];
        for &(u, e) in &self.preds[output] {
            let g = sigmoid(s[e]) / k;
            for (ai, hi) in out_agg.iter_mut().zip(&h[u]) {
                *ai += g * hi;
            }
        }
        let logits = self.matvec(self.cls_w(), self.cls_b(), &out_agg, self.classes);
        Trace { h, agg, z, out_agg, logits }
    }

    /// Class logits for one sample.
    pub fn forward(&self, sample: &[f64]) -> Vec<f64> {
        self.forward_trace(sample).logits
    }

    fn softmax_xent(logits: &[f64], label: usize) -> (f64, Vec<f64>) {
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        let loss = z.ln() + max - logits[label];
        let mut grad: Vec<f64> = exps.iter().map(|e| e / z).collect();
        grad[label] -= 1.0;
        (loss, grad)
    }

    /// Cross-entropy loss of one sample; gradient accumulated into `grad`.
    pub fn backprop(&self, sample: &[f64], label: usize, grad: &mut [f64]) -> f64 {
        let d = self.width;
        let (input, output) = (self.dag.input_node(), self.dag.output_node());
        let t = self.forward_trace(sample);
        let (loss, dlogits) = Self::softmax_xent(&t.logits, label);
        let s_range = self.edge_s();
        let s = &self.params[s_range.clone()];

        let cls_w = self.cls_w();
        let mut d_out = vec![0.0; d];
        for c in 0..self.classes {
            for j in 0..d {
                grad[cls_w.start + c * d + j] += dlogits[c] * t.out_agg[j];
                d_out[j] += self.params[cls_w.start + c * d + j] * dlogits[c];
            }
            grad[self.cls_b().start + c] += dlogits[c];
        }

        let mut dh = vec![vec![0.0; d]; self.dag.node_count()];
        let k = self.preds[output].len().max(1) as f64;
        for &(u, e) in &self.preds[output] {
            let g = sigmoid(s[e]);
            let dot: f64 = t.h[u].iter().zip(&d_out).map(|(a, b)| a * b).sum();
            grad[s_range.start + e] += g * (1.0 - g) * dot / k;
            for (dhu, dv) in dh[u].iter_mut().zip(&d_out) {
                *dhu += g * dv / k;
            }
        }

        for x in self.dag.interior_nodes().rev() {
            let dz: Vec<f64> = dh[x].iter().zip(&t.z[x]).map(|(g, z)| if *z > 0.0 { *g } else { 0.0 }).collect();
            let (w, b) = (self.unit_w(x), self.unit_b(x));
            let mut da = vec![0.0; d];
            for r in 0..d {
                if dz[r] == 0.0 {
                    continue;
                }
                for c in 0..d {
                    grad[w.start + r * d + c] += dz[r] * t.agg[x][c];
                    da[c] += self.params[w.start + r * d + c] * dz[r];
                }
                grad[b.start + r] += dz[r];
            }
            for &(u, e) in &self.preds[x] {
                let g = sigmoid(s[e]);
                let dot: f64 = t.h[u].iter().zip(&da).map(|(a, b)| a * b).sum();
                grad[s_range.start + e] += g * (1.0 - g) * dot;
                for (dhu, dv) in dh[u].iter_mut().zip(&da) {
                    *dhu += g * dv;
                }
            }
        }

        let (pw, pb) = (self.proj_w(), self.proj_b());
        for r in 0..d {
            for (c, xv) in sample.iter().enumerate() {
                grad[pw.start + r * self.input_dim + c] += dh[input][r] * xv;
            }
            grad[pb.start + r] += dh[input][r];
        }
        loss
    }

    /// Mean cross-entropy over a split.
    pub fn loss(&self, split: &Split) -> f64 {
        (0..split.len())
            .map(|i| Self::softmax_xent(&self.forward(split.sample(i)), split.labels[i]).0)
            .sum::<f64>()
            / split.len() as f64
    }

    /// Top-one accuracy; ties go to the lowest class index.
    pub fn accuracy(&self, split: &Split) -> f64 {
        let correct = (0..split.len())
            .filter(|&i| {
                let logits = self.forward(split.sample(i));
                let pred = logits
                    .iter()
                    .enumerate()
                    .fold(0, |best, (c, &l)| if l > logits[best] { c } else { best });
                pred == split.labels[i]
            })
            .count();
        correct as f64 / split.len() as f64
    }

    /// One epoch of minibatch SGD in the order given; returns the mean loss seen.
    pub fn train_epoch(&mut self, split: &Split, order: &[usize], batch: usize, lr: f64) -> Result<f64> {
        let mut total = 0.0;
        let mut grad = vec![0.0; self.params.len()];
        for chunk in order.chunks(batch.max(1)) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &i in chunk {
                total += self.backprop(split.sample(i), split.labels[i], &mut grad);
            }
            if !total.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::NonFinite(format!("training loss {total}")));
            }
            let scale = lr / chunk.len() as f64;
            for (p, g) in self.params.iter_mut().zip(&grad) {
                *p -= scale * g;
            }
        }
        Ok(total / order.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { epochs: 40, batch: 64, lr: 0.05, seed: 0 }
    }
}

/// Trains `net` in place with minibatch SGD on softmax cross-entropy and reports
/// test accuracy, FLOPs from the shared cost model and unit-weight counts.
pub fn train_eval(net: &mut TinyNet, data: &Dataset, cfg: &TrainConfig) -> Result<EvalReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.train.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        net.train_epoch(&data.train, &order, cfg.batch, cfg.lr)?;
    }
    Ok(report(net, data, start))
}

/// Report for a network as it stands, without training.
pub fn evaluate_net(net: &TinyNet, data: &Dataset) -> EvalReport {
    report(net, data, Instant::now())
}

fn report(net: &TinyNet, data: &Dataset, start: Instant) -> EvalReport {
    let cost = CostModel { width: net.width, classes: net.classes };
    EvalReport {
        accuracy: net.accuracy(&data.test),
        flops: flops_estimate(&net.dag, &cost),
        weights_total: net.weights_total(),
        weights_remaining: net.weights_remaining(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_dag, Edge, Graph};

    fn chain(n: usize) -> Dag {
        let edges = (1..n).map(|i| Edge::new(i - 1, i, 1.0)).collect();
        to_dag(&Graph::new(n, false, edges).unwrap()).unwrap()
    }

    #[test]
    fn parameter_count_by_hand() {
        // 3 interior nodes in a triangle: edges 0-1, 1-2, 0-2 plus in->0 and 2->out
        let dag = to_dag(
            &Graph::new(3, false, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)]).unwrap(),
        )
        .unwrap();
        let net = TinyNet::new(&dag, 4, 5, 3, 0).unwrap();
        let units = 3 * (16 + 4);
        let edges = 5;
        let io = (5 * 4 + 4) + (4 * 3 + 3);
        assert_eq!(net.param_count(), units + edges + io);
        assert_eq!(net.weights_total(), 48);
    }

    #[test]
    fn single_node_chain_is_a_two_layer_perceptron() {
        let net = TinyNet::new(&chain(1), 3, 2, 2, 7).unwrap();
        let mut net = net;
        for (i, p) in net.params_mut().iter_mut().enumerate() {
            *p = ((i * 37 % 11) as f64 - 5.0) / 7.0;
        }
        let x = [0.3, -1.2];
        let p = net.params().to_vec();
        // hidden = relu(W * (g_in * (P x + pb)) + b), logits = C * (g_out * hidden) + c
        let proj: Vec<f64> = (0..3).map(|r| p[2 * r] * x[0] + p[2 * r + 1] * x[1] + p[6 + r]).collect();
        let (w, b) = (&p[9..18], &p[18..21]);
        let s = &p[21..23];
        // edge order: (0, out) then (in, 0)
        let (g_out, g_in) = (sigmoid(s[0]), sigmoid(s[1]));
        let hidden: Vec<f64> = (0..3)
            .map(|r| ((0..3).map(|c| w[3 * r + c] * g_in * proj[c]).sum::<f64>() + b[r]).max(0.0))
            .collect();
        let (cw, cb) = (&p[23..29], &p[29..31]);
        let expect: Vec<f64> = (0..2)
            .map(|k| (0..3).map(|j| cw[3 * k + j] * g_out * hidden[j]).sum::<f64>() + cb[k])
            .collect();
        let got = net.forward(&x);
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fresh_network_predicts_uniformly() {
        let net = TinyNet::new(&chain(4), 8, 16, 3, 1).unwrap();
        let logits = net.forward(&[0.5; 16]);
        assert_eq!(logits, vec![0.0; 3]);
    }
}
