use super::matrix::Matrix;

/// Named parameter matrices in declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamStore {
    names: Vec<String>,
    values: Vec<Matrix>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self {
            names: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: Matrix) -> usize {
        self.names.push(name.into());
        self.values.push(value);
        self.values.len() - 1
    }

    /// Number of tensors.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of scalar parameters.
    pub fn num_params(&self) -> usize {
        self.values.iter().map(|m| m.data().len()).sum()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.values[i]
    }

    pub fn get_mut(&mut self, i: usize) -> &mut Matrix {
        &mut self.values[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Matrix)> {
        self.names.iter().map(String::as_str).zip(&self.values)
    }

    /// `(name, rows, cols)` per tensor.
    pub fn shapes(&self) -> Vec<(String, usize, usize)> {
        self.iter()
            .map(|(n, m)| (n.to_string(), m.rows(), m.cols()))
            .collect()
    }

    pub fn zero_grads(&self) -> Grads {
        Grads(
            self.values
                .iter()
                .map(|m| Matrix::zeros(m.rows(), m.cols()))
                .collect(),
        )
    }

    /// Plain gradient step `θ ← θ − lr·g`.
    pub fn sgd_step(&mut self, grads: &Grads, lr: f64) {
        for (p, g) in self.values.iter_mut().zip(&grads.0) {
            for (x, d) in p.data_mut().iter_mut().zip(g.data()) {
                *x -= lr * d;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(Matrix::is_finite)
    }

    /// All parameters flattened in declaration order.
    pub fn flatten(&self) -> Vec<f64> {
        self.values
            .iter()
            .flat_map(|m| m.data().iter().copied())
            .collect()
    }
}

impl Default for ParamStore {
    fn default() -> Self {
        Self::new()
    }
}

/// Gradient buffers shaped like a [`ParamStore`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grads(pub Vec<Matrix>);

impl Grads {
    pub fn accumulate(&mut self, i: usize, m: &Matrix) {
        self.0[i].add_assign(m);
    }

    pub fn add(&mut self, other: &Grads) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_assign(b);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|m| m.data().iter())
            .fold(0.0, |a, &b| a.max(b.abs()))
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.0
            .iter()
            .flat_map(|m| m.data().iter().copied())
            .collect()
    }
}
