use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
    S,
}

impl Label {
    fn slot(self) -> usize {
        match self {
            Label::A => 0,
            Label::B => 1,
            Label::S => 2,
        }
    }
}

/// Three-way labeling into two sides and a vertex separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator3 {
    label: Vec<Label>,
    card: [usize; 3],
}

impl Separator3 {
    /// Builds and validates a separator.
    pub fn new(g: &Graph, label: Vec<Label>) -> Result<Self> {
        let s = Self::new_unchecked(g, label)?;
        s.validate(g)?;
        Ok(s)
    }

    /// Builds a labeling without checking for A-B edges.
    pub fn new_unchecked(g: &Graph, label: Vec<Label>) -> Result<Self> {
        if label.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} nodes",
                label.len(),
                g.n()
            )));
        }
        let mut card = [0; 3];
        for l in &label {
            card[l.slot()] += 1;
        }
        Ok(Self { label, card })
    }

    pub fn label(&self, v: usize) -> Label {
        self.label[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.label
    }

    pub fn card(&self, l: Label) -> usize {
        self.card[l.slot()]
    }

    pub fn nodes(&self, l: Label) -> Vec<usize> {
        (0..self.label.len())
            .filter(|&v| self.label[v] == l)
            .collect()
    }

    /// Errors with the first A-B edge found, if any.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (u, v) in g.edges() {
            let (a, b) = (self.label[u], self.label[v]);
            if (a == Label::A && b == Label::B) || (a == Label::B && b == Label::A) {
                return Err(Error::InvalidSeparator(u, v));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.validate(g).is_ok()
    }

    /// `|S| (1/|A| + 1/|B|)` from the cached cardinalities.
    pub fn normalized_separator(&self) -> Result<f64> {
        let [a, b, s] = self.card;
        if a == 0 || b == 0 {
            return Err(Error::DegeneratePartition(
                "a side of the separator is empty",
            ));
        }
        Ok(s as f64 * (1.0 / a as f64 + 1.0 / b as f64))
    }

    /// A separator node is essential when it touches both A and B.
    pub fn is_essential(&self, g: &Graph, v: usize) -> bool {
        if self.label[v] != Label::S {
            return false;
        }
        let mut touches = [false; 2];
        for &w in g.neighbors(v) {
            match self.label[w] {
                Label::A => touches[0] = true,
                Label::B => touches[1] = true,
                Label::S => {}
            }
        }
        touches[0] && touches[1]
    }

    /// True when applying the action at `v` would leave A or B empty.
    pub fn action_empties_side(&self, v: usize) -> bool {
        match self.label[v] {
            Label::A => self.card[0] <= 1,
            Label::B => self.card[1] <= 1,
            Label::S => false,
        }
    }

    /// Applies the three-way action at node `a` and returns the decrease in
    /// normalized separator.
    ///
    /// A and B nodes move into the separator. A separator node leaves it for
    /// the side it already touches (A first), or for the smaller side when it
    /// touches neither (ties go to A). Essential nodes are rejected.
    pub fn apply_action(&mut self, g: &Graph, a: usize) -> Result<f64> {
        if self.is_essential(g, a) {
            return Err(Error::EssentialNode(a));
        }
        if self.action_empties_side(a) {
            return Err(Error::DegeneratePartition("action would empty a side"));
        }
        let before = self.normalized_separator()?;
        let target = match self.label[a] {
            Label::A | Label::B => Label::S,
            Label::S => {
                let nbrs = g.neighbors(a);
                if nbrs.iter().any(|&w| self.label[w] == Label::A) {
                    Label::A
                } else if nbrs.iter().any(|&w| self.label[w] == Label::B) {
                    Label::B
                } else if self.card[0] <= self.card[1] {
                    Label::A
                } else {
                    Label::B
                }
            }
        };
        self.relabel(a, target);
        Ok(before - self.normalized_separator()?)
    }

    pub(crate) fn relabel(&mut self, v: usize, to: Label) {
        self.card[self.label[v].slot()] -= 1;
        self.card[to.slot()] += 1;
        self.label[v] = to;
    }
}

/// Normalized separator after checking validity.
pub fn normalized_separator(g: &Graph, s: &Separator3) -> Result<f64> {
    s.validate(g)?;
    s.normalized_separator()
}

/// Separator nodes adjacent to both A and B, ascending.
pub fn essential_separator_nodes(g: &Graph, s: &Separator3) -> Vec<usize> {
    (0..g.n()).filter(|&v| s.is_essential(g, v)).collect()
}
