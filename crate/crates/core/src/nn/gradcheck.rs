use super::agent::{Agent, TaskKind};
use super::matrix::Matrix;
use super::tape::Tape;
use crate::error::Result;
use crate::graph::Graph;

/// Worst relative error between the tape gradient and central differences.
#[derive(Clone, Debug)]
pub struct GradCheck {
    pub max_rel_error: f64,
    pub worst_param: String,
    pub checked: usize,
}

// central differences at h = 1e-6 carry about 1e-10 of roundoff, so tiny
// derivatives are compared absolutely below 1e-5
fn rel_error(a: f64, f: f64) -> f64 {
    (a - f).abs() / a.abs().max(f.abs()).max(1e-5)
}

fn actor_loss(
    agent: &Agent,
    g: &Graph,
    f: &Matrix,
    mask: &[bool],
    action: usize,
    adv: f64,
) -> Result<f64> {
    let out = agent.evaluate(g, f.clone(), mask, false)?;
    Ok(-adv * out.log_probs[action])
}

fn critic_loss(
    agent: &Agent,
    g: &Graph,
    f: &Matrix,
    mask: &[bool],
    ret: f64,
    alpha: f64,
) -> Result<f64> {
    let v = agent
        .evaluate(g, f.clone(), mask, true)?
        .value
        .unwrap_or(0.0);
    Ok(alpha * (ret - v) * (ret - v))
}

/// Checks every parameter of `agent` on the single-step actor-critic loss
/// `-(R - v) log π(a) + α (R - v)²` with the advantage held constant.
///
/// The actor and critic terms are checked separately. For the refinement
/// networks the critic reads detached features, so only critic parameters
/// are differentiated through the critic term and every other parameter must
/// receive an exactly zero gradient from it.
pub fn gradient_check(
    agent: &Agent,
    g: &Graph,
    features: &Matrix,
    mask: &[bool],
    action: usize,
    ret: f64,
    alpha: f64,
    h: f64,
) -> Result<GradCheck> {
    let mut tape = Tape::new();
    let fwd = agent.record(&mut tape, g, features.clone(), mask, true)?;
    let v0 = fwd.value.map_or(0.0, |v| tape.value(v).get(0, 0));
    let adv = ret - v0;
    let n = g.n();

    let mut seed = Matrix::zeros(n, 1);
    seed.set(action, 0, -adv);
    let mut actor_grads = agent.params().zero_grads();
    tape.backward(g, &[(fwd.log_probs, seed)], &mut actor_grads);
    let mut critic_grads = agent.params().zero_grads();
    if let Some(v) = fwd.value {
        let seed = Matrix::from_vec(1, 1, vec![-2.0 * alpha * adv]);
        tape.backward(g, &[(v, seed)], &mut critic_grads);
    }

    let detached = agent.kind() != TaskKind::Coarse;
    let mut report = GradCheck {
        max_rel_error: 0.0,
        worst_param: String::new(),
        checked: 0,
    };
    let mut probe = agent.clone();
    for i in 0..agent.params().len() {
        let name = agent.params().name(i).to_string();
        let critic_param = name.starts_with("critic") || name.starts_with("gate");
        for k in 0..agent.params().get(i).data().len() {
            let x0 = agent.params().get(i).data()[k];
            let mut eval = |delta: f64| -> Result<(f64, f64)> {
                probe.params_mut().get_mut(i).data_mut()[k] = x0 + delta;
                let la = actor_loss(&probe, g, features, mask, action, adv)?;
                let lc = critic_loss(&probe, g, features, mask, ret, alpha)?;
                Ok((la, lc))
            };
            let (pa, pc) = eval(h)?;
            let (ma, mc) = eval(-h)?;
            probe.params_mut().get_mut(i).data_mut()[k] = x0;
            let fd_actor = (pa - ma) / (2.0 * h);
            let fd_critic = (pc - mc) / (2.0 * h);
            let an_actor = actor_grads.0[i].data()[k];
            let an_critic = critic_grads.0[i].data()[k];
            let mut err = rel_error(an_actor, fd_actor);
            if !detached || critic_param {
                err = err.max(rel_error(an_critic, fd_critic));
            } else if an_critic != 0.0 {
                err = f64::INFINITY;
            }
            report.checked += 1;
            if err > report.max_rel_error {
                report.max_rel_error = err;
                report.worst_param = format!("{name}[{k}]");
            }
        }
    }
    Ok(report)
}
