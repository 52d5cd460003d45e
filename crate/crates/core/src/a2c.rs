//! Advantage actor-critic: returns, loss, gradient windows and SGD updates.

use std::sync::Mutex;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nn::{Agent, Forward, Grads, Matrix, Tape};

/// How per-step returns are accumulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReturnMode {
    /// `R_t = r_t + γ R_{t+1}`.
    #[default]
    RewardToGo,
    /// `R_t = r_t + γ R_{t-1}`, the forward accumulation order.
    AccumulatedPast,
}

/// Optimizer and loss hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct A2cParams {
    pub gamma: f64,
    pub alpha: f64,
    pub lr: f64,
    /// Gradient step every this many environment steps (and at episode end).
    pub update_every: usize,
    pub return_mode: ReturnMode,
}

impl Default for A2cParams {
    fn default() -> Self {
        Self {
            gamma: 0.9,
            alpha: 0.1,
            lr: 1e-3,
            update_every: 20,
            return_mode: ReturnMode::RewardToGo,
        }
    }
}

impl A2cParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidInput(format!(
                "gamma {} outside [0, 1]",
                self.gamma
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha {} outside (0, 1]",
                self.alpha
            )));
        }
        if self.lr.is_nan() || self.lr <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "learning rate {} must be positive",
                self.lr
            )));
        }
        if self.update_every == 0 {
            return Err(Error::InvalidInput(
                "update interval must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

pub fn discounted_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for t in (0..rewards.len()).rev() {
        acc = rewards[t] + gamma * acc;
        out[t] = acc;
    }
    out
}

pub fn accumulated_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut acc = 0.0;
    rewards
        .iter()
        .map(|&r| {
            acc = r + gamma * acc;
            acc
        })
        .collect()
}

pub fn returns(rewards: &[f64], gamma: f64, mode: ReturnMode) -> Vec<f64> {
    match mode {
        ReturnMode::RewardToGo => discounted_returns(rewards, gamma),
        ReturnMode::AccumulatedPast => accumulated_returns(rewards, gamma),
    }
}

/// `(R - mean) / (std + 1e-8)` with the population standard deviation.
pub fn normalize_returns(r: &[f64]) -> Vec<f64> {
    if r.len() <= 1 {
        return vec![0.0; r.len()];
    }
    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let std = (r.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt();
    r.iter().map(|x| (x - mean) / (std + 1e-8)).collect()
}

/// `-Σ log π(a_t) (R_t - v_t) + α Σ (R_t - v_t)²`.
pub fn a2c_loss(log_probs: &[f64], values: &[f64], returns: &[f64], alpha: f64) -> f64 {
    log_probs
        .iter()
        .zip(values)
        .zip(returns)
        .map(|((&lp, &v), &r)| -lp * (r - v) + alpha * (r - v) * (r - v))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionMode {
    Sample,
    Greedy,
}

/// Lowest-id argmax over the finite log-probabilities.
pub fn greedy_action(log_probs: &[f64]) -> Result<usize> {
    log_probs
        .iter()
        .enumerate()
        .filter(|(_, lp)| lp.is_finite())
        .fold(None, |acc: Option<(usize, f64)>, (i, &lp)| match acc {
            Some((_, b)) if b >= lp => acc,
            _ => Some((i, lp)),
        })
        .map(|(i, _)| i)
        .ok_or(Error::AllMasked)
}

/// Greedy picks the lowest-id argmax; sampling draws from `exp(log_probs)`.
pub fn sample_action<R: Rng + ?Sized>(
    log_probs: &[f64],
    mode: ActionMode,
    rng: &mut R,
) -> Result<usize> {
    let argmax = greedy_action(log_probs)?;
    if mode == ActionMode::Greedy {
        return Ok(argmax);
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = argmax;
    for (i, &lp) in log_probs.iter().enumerate() {
        if !lp.is_finite() {
            continue;
        }
        acc += lp.exp();
        last = i;
        if u < acc {
            return Ok(i);
        }
    }
    // rounding left the cumulative mass just under u
    Ok(last)
}

/// Per-step record of one episode.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Episode {
    pub actions: Vec<usize>,
    pub rewards: Vec<f64>,
    pub log_probs: Vec<f64>,
    pub values: Vec<f64>,
}

impl Episode {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().sum()
    }
}

struct Step {
    tape: Tape,
    fwd: Forward,
    action: usize,
    reward: f64,
}

/// Recorded steps awaiting the next gradient update.
#[derive(Default)]
pub struct Window {
    steps: Vec<Step>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, tape: Tape, fwd: Forward, action: usize, reward: f64) {
        self.steps.push(Step {
            tape,
            fwd,
            action,
            reward,
        });
    }

    /// Gradient of the window's loss and the loss value. The window is
    /// emptied. Returns are normalized within the window.
    pub fn gradients(&mut self, g: &Graph, agent: &Agent, p: &A2cParams) -> (Grads, f64) {
        let rewards: Vec<f64> = self.steps.iter().map(|s| s.reward).collect();
        let rets = normalize_returns(&returns(&rewards, p.gamma, p.return_mode));
        let mut grads = agent.params().zero_grads();
        let mut loss = 0.0;
        for (s, &ret) in self.steps.iter().zip(&rets) {
            let lp = s.tape.value(s.fwd.log_probs);
            let v = s.fwd.value.map_or(0.0, |v| s.tape.value(v).get(0, 0));
            let adv = ret - v;
            loss += -lp.get(s.action, 0) * adv + p.alpha * adv * adv;
            let mut seed = Matrix::zeros(lp.rows(), 1);
            seed.set(s.action, 0, -adv);
            let mut seeds = vec![(s.fwd.log_probs, seed)];
            if let Some(vid) = s.fwd.value {
                seeds.push((vid, Matrix::from_vec(1, 1, vec![-2.0 * p.alpha * adv])));
            }
            s.tape.backward(g, &seeds, &mut grads);
        }
        self.steps.clear();
        (grads, loss)
    }
}

/// Applies a gradient and refreshes the worker's parameters.
pub trait Updater {
    fn update(&mut self, local: &mut Agent, grads: &Grads, lr: f64);
}

/// Single worker: step the worker's own parameters.
pub struct LocalSgd;

impl Updater for LocalSgd {
    fn update(&mut self, local: &mut Agent, grads: &Grads, lr: f64) {
        local.params_mut().sgd_step(grads, lr);
    }
}

/// Shared model: the step is applied to the shared parameters under the lock
/// and the worker then continues from the updated copy.
pub struct SharedSgd<'a> {
    pub shared: &'a Mutex<Agent>,
}

impl Updater for SharedSgd<'_> {
    fn update(&mut self, local: &mut Agent, grads: &Grads, lr: f64) {
        let mut shared = self.shared.lock().unwrap_or_else(|e| e.into_inner());
        shared.params_mut().sgd_step(grads, lr);
        local.clone_from(&shared);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::grid;
    use crate::nn::TaskKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn return_examples() {
        assert!(close(
            &discounted_returns(&[1.0, 0.0, 2.0], 0.9),
            &[2.62, 1.8, 2.0],
            1e-12
        ));
        assert_eq!(
            discounted_returns(&[1.0, -2.0, 3.0], 0.0),
            vec![1.0, -2.0, 3.0]
        );
        assert_eq!(discounted_returns(&[0.0; 4], 0.9), vec![0.0; 4]);
        assert!(close(
            &accumulated_returns(&[1.0, 0.0, 2.0], 0.9),
            &[1.0, 0.9, 2.81],
            1e-12
        ));
    }

    #[test]
    fn normalization_examples() {
        let z = normalize_returns(&[1.0, 2.0, 3.0]);
        let s = (1.5f64).sqrt();
        assert!(close(&z, &[-s, 0.0, s], 1e-7));
        assert_eq!(normalize_returns(&[4.0, 4.0, 4.0]), vec![0.0; 3]);
        assert_eq!(normalize_returns(&[7.0]), vec![0.0]);
    }

    #[test]
    fn loss_examples() {
        assert_eq!(a2c_loss(&[-0.3, -2.0], &[0.5, 0.1], &[0.5, 0.1], 0.1), 0.0);
        assert!((a2c_loss(&[-1.0], &[0.0], &[1.0], 0.1) - 1.1).abs() < 1e-15);
        assert!(
            (a2c_loss(&[-1.0, -0.5], &[0.2, 0.0], &[1.0, 1.0], 0.0) - (0.8 + 0.5)).abs() < 1e-15
        );
    }

    #[test]
    fn action_selection() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let lp = [f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY];
        assert_eq!(sample_action(&lp, ActionMode::Greedy, &mut rng).unwrap(), 1);
        assert_eq!(sample_action(&lp, ActionMode::Sample, &mut rng).unwrap(), 1);
        let u = [(0.25f64).ln(); 4];
        assert_eq!(sample_action(&u, ActionMode::Greedy, &mut rng).unwrap(), 0);
        assert!(matches!(
            sample_action(&[f64::NEG_INFINITY], ActionMode::Sample, &mut rng),
            Err(Error::AllMasked)
        ));
        let lp = [(0.25f64).ln(), (0.75f64).ln()];
        let trials = 100_000;
        let ones = (0..trials)
            .filter(|_| sample_action(&lp, ActionMode::Sample, &mut rng).unwrap() == 1)
            .count();
        let sigma = (trials as f64 * 0.75 * 0.25).sqrt();
        assert!((ones as f64 - 0.75 * trials as f64).abs() < 3.0 * sigma);
    }

    fn recorded_window(agent: &Agent, g: &Graph, rewards: &[f64], rng: &mut ChaCha8Rng) -> Window {
        let mut w = Window::default();
        for &r in rewards {
            let f = Matrix::from_vec(
                g.n(),
                5,
                (0..g.n() * 5).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            );
            let mut tape = Tape::new();
            let fwd = agent
                .record(&mut tape, g, f, &vec![false; g.n()], true)
                .unwrap();
            let a =
                sample_action(tape.value(fwd.log_probs).data(), ActionMode::Sample, rng).unwrap();
            w.push(tape, fwd, a, r);
        }
        w
    }

    #[test]
    fn gradient_step_lowers_loss_on_frozen_episode() {
        let g = grid(3, 3);
        let agent = Agent::new(TaskKind::Edge, 5);
        let p = A2cParams::default();
        let rewards = [0.3, -0.1, 0.5, 0.0, 0.2];
        // frozen episode: same features and actions re-evaluated under θ'
        let (grads, loss) =
            recorded_window(&agent, &g, &rewards, &mut ChaCha8Rng::seed_from_u64(1))
                .gradients(&g, &agent, &p);
        let mut stepped = agent.clone();
        stepped.params_mut().sgd_step(&grads, p.lr);
        let (_, loss_after) = recorded_window_with_actions(
            &stepped,
            &agent,
            &g,
            &rewards,
            &mut ChaCha8Rng::seed_from_u64(1),
        )
        .gradients(&g, &stepped, &p);
        assert!(loss_after < loss, "{loss_after} !< {loss}");
    }

    // replays the random stream of `recorded_window` for `reference`, but
    // records forward passes of `agent`
    fn recorded_window_with_actions(
        agent: &Agent,
        reference: &Agent,
        g: &Graph,
        rewards: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> Window {
        let mut w = Window::default();
        for &r in rewards {
            let f = Matrix::from_vec(
                g.n(),
                5,
                (0..g.n() * 5).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            );
            let mut ref_tape = Tape::new();
            let rf = reference
                .record(&mut ref_tape, g, f.clone(), &vec![false; g.n()], true)
                .unwrap();
            let a = sample_action(ref_tape.value(rf.log_probs).data(), ActionMode::Sample, rng)
                .unwrap();
            let mut tape = Tape::new();
            let fwd = agent
                .record(&mut tape, g, f, &vec![false; g.n()], true)
                .unwrap();
            w.push(tape, fwd, a, r);
        }
        w
    }

    #[test]
    fn zero_advantage_leaves_parameters_unchanged() {
        let g = grid(2, 3);
        let agent = Agent::zeros(TaskKind::Edge);
        let p = A2cParams::default();
        // one step: normalized return 0 and critic 0
        let (grads, loss) = recorded_window(&agent, &g, &[0.4], &mut ChaCha8Rng::seed_from_u64(2))
            .gradients(&g, &agent, &p);
        assert_eq!(loss, 0.0);
        assert_eq!(grads.max_abs(), 0.0);
    }

    #[test]
    fn two_small_steps_differ_from_one_big_step() {
        let g = grid(3, 3);
        let agent = Agent::new(TaskKind::Edge, 8);
        let p = A2cParams {
            lr: 0.5,
            ..A2cParams::default()
        };
        let rewards = [0.3, -0.2, 0.6];
        let (g1, _) = recorded_window(&agent, &g, &rewards, &mut ChaCha8Rng::seed_from_u64(3))
            .gradients(&g, &agent, &p);
        let mut seq = agent.clone();
        seq.params_mut().sgd_step(&g1, p.lr);
        let (g2, _) = recorded_window_with_actions(
            &seq,
            &agent,
            &g,
            &rewards,
            &mut ChaCha8Rng::seed_from_u64(3),
        )
        .gradients(&g, &seq, &p);
        seq.params_mut().sgd_step(&g2, p.lr);
        let mut once = agent.clone();
        let mut doubled = g1.clone();
        doubled.add(&g1);
        once.params_mut().sgd_step(&doubled, p.lr);
        assert_ne!(seq.params().flatten(), once.params().flatten());
    }

    #[test]
    fn shared_updater_syncs_worker() {
        let shared = Mutex::new(Agent::new(TaskKind::Edge, 1));
        let mut local = Agent::new(TaskKind::Edge, 2);
        let mut grads = local.params().zero_grads();
        grads.0[0].set(0, 0, 1.0);
        SharedSgd { shared: &shared }.update(&mut local, &grads, 0.1);
        assert_eq!(&local, &*shared.lock().unwrap());
    }

    #[test]
    fn returns_are_linear() {
        let a = [0.1, -0.4, 0.7, 0.0];
        let b = [1.0, 0.2, -0.3, 0.5];
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = discounted_returns(&sum, 0.9);
        let rhs: Vec<f64> = discounted_returns(&a, 0.9)
            .iter()
            .zip(discounted_returns(&b, 0.9))
            .map(|(x, y)| x + y)
            .collect();
        assert!(close(&lhs, &rhs, 1e-12));
    }
}
