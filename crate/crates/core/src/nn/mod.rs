//! Dense matrices, a reverse-mode tape and the two agent networks.
//!
//! The refinement network is two shared SAGE layers, a one-channel SAGE actor
//! and a SAGE + linear critic that reads a detached copy of the shared
//! features. The coarse network is four GAT layers followed by small dense
//! heads, with a gated attention pool for the critic.

mod agent;
mod checkpoint;
mod gradcheck;
mod matrix;
mod params;
mod tape;

pub use agent::{mask_from_features, Agent, AgentOutput, Forward, TaskKind};
pub use checkpoint::{
    load_checkpoint, load_checkpoint_for, read_checkpoint, save_checkpoint, write_checkpoint,
    FORMAT_VERSION,
};
pub use gradcheck::{gradient_check, GradCheck};
pub use matrix::Matrix;
pub use params::{Grads, ParamStore};
pub use tape::{masked_log_softmax, NodeId, Tape};
