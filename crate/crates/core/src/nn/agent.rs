use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use super::params::ParamStore;
use super::tape::{NodeId, Tape};
use crate::error::{Error, Result};
use crate::graph::Graph;

const GAT_UNITS: usize = 10;
const LINEAR_UNITS: usize = 5;
const GAT_LAYERS: usize = 4;

/// Which network an [`Agent`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaskKind {
    /// Edge-separator refinement, 5 input channels.
    Edge,
    /// Coarsest-level edge partitioner, 2 input channels.
    Coarse,
    /// Vertex-separator refinement, 7 input channels.
    Vertex,
}

impl TaskKind {
    pub fn channels(self) -> usize {
        match self {
            TaskKind::Edge => 5,
            TaskKind::Coarse => 2,
            TaskKind::Vertex => 7,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            TaskKind::Edge => 0,
            TaskKind::Coarse => 1,
            TaskKind::Vertex => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(TaskKind::Edge),
            1 => Some(TaskKind::Coarse),
            2 => Some(TaskKind::Vertex),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Edge => "edge",
            TaskKind::Coarse => "coarse",
            TaskKind::Vertex => "vertex",
        }
    }
}

impl std::str::FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(TaskKind::Edge),
            "coarse" => Ok(TaskKind::Coarse),
            "vertex" => Ok(TaskKind::Vertex),
            _ => Err(Error::InvalidInput(format!("unknown task '{s}'"))),
        }
    }
}

struct Entry {
    name: String,
    rows: usize,
    cols: usize,
    fan_in: usize,
}

fn entry(name: String, rows: usize, cols: usize, fan_in: usize) -> Entry {
    Entry {
        name,
        rows,
        cols,
        fan_in,
    }
}

fn sage_entries(out: &mut Vec<Entry>, prefix: &str, c_in: usize, c_out: usize) {
    out.push(entry(format!("{prefix}.w_root"), c_in, c_out, c_in));
    out.push(entry(format!("{prefix}.w_neigh"), c_in, c_out, c_in));
    out.push(entry(format!("{prefix}.bias"), 1, c_out, c_in));
}

fn linear_entries(out: &mut Vec<Entry>, prefix: &str, c_in: usize, c_out: usize) {
    out.push(entry(format!("{prefix}.w"), c_in, c_out, c_in));
    out.push(entry(format!("{prefix}.b"), 1, c_out, c_in));
}

fn layout(kind: TaskKind) -> Vec<Entry> {
    let mut out = Vec::new();
    match kind {
        TaskKind::Edge | TaskKind::Vertex => {
            let c = kind.channels();
            sage_entries(&mut out, "conv1", c, c);
            sage_entries(&mut out, "conv2", c, c);
            sage_entries(&mut out, "actor", c, 1);
            sage_entries(&mut out, "critic_conv", c, c);
            linear_entries(&mut out, "critic_lin", c, 1);
        }
        TaskKind::Coarse => {
            let mut c_in = kind.channels();
            for l in 0..GAT_LAYERS {
                let p = format!("gat{}", l + 1);
                out.push(entry(format!("{p}.w"), c_in, GAT_UNITS, c_in));
                out.push(entry(format!("{p}.att_src"), GAT_UNITS, 1, GAT_UNITS));
                out.push(entry(format!("{p}.att_dst"), GAT_UNITS, 1, GAT_UNITS));
                out.push(entry(format!("{p}.bias"), 1, GAT_UNITS, c_in));
                c_in = GAT_UNITS;
            }
            linear_entries(&mut out, "shared1", GAT_UNITS, LINEAR_UNITS);
            linear_entries(&mut out, "shared2", LINEAR_UNITS, LINEAR_UNITS);
            linear_entries(&mut out, "actor1", LINEAR_UNITS, LINEAR_UNITS);
            linear_entries(&mut out, "actor2", LINEAR_UNITS, 1);
            linear_entries(&mut out, "gate1", LINEAR_UNITS, LINEAR_UNITS);
            linear_entries(&mut out, "gate2", LINEAR_UNITS, 1);
            linear_entries(&mut out, "critic1", LINEAR_UNITS, LINEAR_UNITS);
            linear_entries(&mut out, "critic2", LINEAR_UNITS, 1);
        }
    }
    out
}

/// Tape handles of one recorded forward pass.
#[derive(Clone, Copy, Debug)]
pub struct Forward {
    /// `n x 1` log-probabilities.
    pub log_probs: NodeId,
    /// `1 x 1` critic value, present only in training mode.
    pub value: Option<NodeId>,
}

/// Plain values of one forward pass.
#[derive(Clone, Debug)]
pub struct AgentOutput {
    pub log_probs: Vec<f64>,
    pub value: Option<f64>,
}

/// One policy/value network and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Agent {
    kind: TaskKind,
    params: ParamStore,
}

impl Agent {
    /// Uniform initialization in `±1/√fan_in`.
    pub fn new(kind: TaskKind, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ParamStore::new();
        for e in layout(kind) {
            let bound = 1.0 / (e.fan_in as f64).sqrt();
            let data = (0..e.rows * e.cols)
                .map(|_| rng.gen_range(-bound..bound))
                .collect();
            params.push(e.name, Matrix::from_vec(e.rows, e.cols, data));
        }
        Self { kind, params }
    }

    pub fn zeros(kind: TaskKind) -> Self {
        let mut params = ParamStore::new();
        for e in layout(kind) {
            params.push(e.name, Matrix::zeros(e.rows, e.cols));
        }
        Self { kind, params }
    }

    /// Wraps an existing store, checking it against the layout of `kind`.
    pub fn from_params(kind: TaskKind, params: ParamStore) -> Result<Self> {
        let want: Vec<(String, usize, usize)> = layout(kind)
            .into_iter()
            .map(|e| (e.name, e.rows, e.cols))
            .collect();
        if params.shapes() != want {
            return Err(Error::VersionMismatch(format!(
                "parameter layout does not match the {} network",
                kind.name()
            )));
        }
        Ok(Self { kind, params })
    }

    pub fn kind(&self) -> TaskKind {
        self.kind
    }

    pub fn channels(&self) -> usize {
        self.kind.channels()
    }

    pub fn params(&self) -> &ParamStore {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.num_params()
    }

    fn p(&self, tape: &mut Tape, name: &str) -> NodeId {
        let i = self.params.index_of(name).expect("layout entry");
        tape.param(i, self.params.get(i))
    }

    fn sage(&self, tape: &mut Tape, g: &Graph, x: NodeId, prefix: &str) -> Result<NodeId> {
        let w_root = self.p(tape, &format!("{prefix}.w_root"));
        let w_neigh = self.p(tape, &format!("{prefix}.w_neigh"));
        let bias = self.p(tape, &format!("{prefix}.bias"));
        let root = tape.matmul(x, w_root)?;
        let root = tape.add_row(root, bias)?;
        let mean = tape.neighbor_mean(g, x)?;
        let neigh = tape.matmul(mean, w_neigh)?;
        tape.add(root, neigh)
    }

    fn linear(&self, tape: &mut Tape, x: NodeId, prefix: &str) -> Result<NodeId> {
        let w = self.p(tape, &format!("{prefix}.w"));
        let b = self.p(tape, &format!("{prefix}.b"));
        let y = tape.matmul(x, w)?;
        tape.add_row(y, b)
    }

    fn gat(&self, tape: &mut Tape, g: &Graph, x: NodeId, prefix: &str) -> Result<NodeId> {
        let w = self.p(tape, &format!("{prefix}.w"));
        let src = self.p(tape, &format!("{prefix}.att_src"));
        let dst = self.p(tape, &format!("{prefix}.att_dst"));
        let bias = self.p(tape, &format!("{prefix}.bias"));
        let h = tape.matmul(x, w)?;
        let h = tape.gat_attend(g, h, src, dst)?;
        tape.add_row(h, bias)
    }

    /// Records a forward pass. `mask[v]` removes node `v` from the action
    /// distribution. The critic is only evaluated when `training` is set.
    pub fn record(
        &self,
        tape: &mut Tape,
        g: &Graph,
        features: Matrix,
        mask: &[bool],
        training: bool,
    ) -> Result<Forward> {
        if features.cols() != self.channels() {
            return Err(Error::DimensionMismatch(format!(
                "{} feature channels, the {} network takes {}",
                features.cols(),
                self.kind.name(),
                self.channels()
            )));
        }
        if features.rows() != g.n() || mask.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} feature rows and {} mask entries for {} nodes",
                features.rows(),
                mask.len(),
                g.n()
            )));
        }
        let x = tape.constant(features);
        match self.kind {
            TaskKind::Edge | TaskKind::Vertex => {
                let h = self.sage(tape, g, x, "conv1")?;
                let h = tape.tanh(h);
                let h = self.sage(tape, g, h, "conv2")?;
                let h = tape.tanh(h);
                let scores = self.sage(tape, g, h, "actor")?;
                let log_probs = tape.masked_log_softmax(scores, mask)?;
                let value = if training {
                    let d = tape.detach(h);
                    let c = self.sage(tape, g, d, "critic_conv")?;
                    let c = tape.tanh(c);
                    let c = self.linear(tape, c, "critic_lin")?;
                    let pooled = tape.mean_pool(c);
                    Some(tape.tanh(pooled))
                } else {
                    None
                };
                Ok(Forward { log_probs, value })
            }
            TaskKind::Coarse => {
                let mut h = x;
                for l in 0..GAT_LAYERS {
                    h = self.gat(tape, g, h, &format!("gat{}", l + 1))?;
                    h = tape.tanh(h);
                }
                for name in ["shared1", "shared2"] {
                    h = self.linear(tape, h, name)?;
                    h = tape.tanh(h);
                }
                let a = self.linear(tape, h, "actor1")?;
                let a = tape.tanh(a);
                let a = self.linear(tape, a, "actor2")?;
                let a = tape.tanh(a);
                let log_probs = tape.masked_log_softmax(a, mask)?;
                let value = if training {
                    let gate = self.linear(tape, h, "gate1")?;
                    let gate = tape.tanh(gate);
                    let gate = self.linear(tape, gate, "gate2")?;
                    let pooled = tape.attention_pool(gate, h)?;
                    let v = self.linear(tape, pooled, "critic1")?;
                    let v = tape.tanh(v);
                    Some(self.linear(tape, v, "critic2")?)
                } else {
                    None
                };
                Ok(Forward { log_probs, value })
            }
        }
    }

    /// Forward pass returning plain values.
    pub fn evaluate(
        &self,
        g: &Graph,
        features: Matrix,
        mask: &[bool],
        training: bool,
    ) -> Result<AgentOutput> {
        let mut tape = Tape::new();
        let fwd = self.record(&mut tape, g, features, mask, training)?;
        Ok(AgentOutput {
            log_probs: tape.value(fwd.log_probs).data().to_vec(),
            value: fwd.value.map(|v| tape.value(v).get(0, 0)),
        })
    }
}

/// Mask that hides every node whose feature in any of `indices` is nonzero.
pub fn mask_from_features(features: &Matrix, indices: &[usize]) -> Vec<bool> {
    (0..features.rows())
        .map(|r| indices.iter().any(|&c| features.get(r, c) != 0.0))
        .collect()
}
