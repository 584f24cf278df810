use crate::kernel::PauliString;

/// As-soon-as-possible packing of an ordered list of Pauli rotations into
/// layers of pairwise disjoint support.
///
/// Depth counts rotation blocks, not native gates; each weight-`w` rotation
/// with `w ≥ 2` costs `2(w − 1)` CNOTs (staircase decomposition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitLayout {
    n_qubits: usize,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
    /// `prefix_depth[k]`: depth of the circuit made of unitaries `0..=k`.
    prefix_depth: Vec<usize>,
    /// Next free layer on each qubit.
    frontier: Vec<usize>,
    cnot_count: usize,
}

pub fn cnot_cost(p: &PauliString) -> usize {
    match p.weight() {
        0 | 1 => 0,
        w => 2 * (w - 1),
    }
}

impl CircuitLayout {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            layers: Vec::new(),
            layer_of: Vec::new(),
            prefix_depth: Vec::new(),
            frontier: vec![0; n_qubits],
            cnot_count: 0,
        }
    }

    /// Earliest layer a rotation on `support` can occupy.
    fn slot(&self, support: u64) -> usize {
        (0..self.n_qubits)
            .filter(|&q| support >> q & 1 == 1)
            .map(|q| self.frontier[q])
            .max()
            .unwrap_or(0)
    }

    /// Appends a rotation and returns the layer it lands in.
    pub fn push(&mut self, p: &PauliString) -> usize {
        let support = p.support();
        let layer = self.slot(support);
        for q in (0..self.n_qubits).filter(|&q| support >> q & 1 == 1) {
            self.frontier[q] = layer + 1;
        }
        if layer == self.layers.len() {
            self.layers.push(Vec::new());
        }
        let index = self.layer_of.len();
        self.layers[layer].push(index);
        self.layer_of.push(layer);
        self.prefix_depth.push(self.layers.len());
        self.cnot_count += cnot_cost(p);
        layer
    }

    /// Depth after appending `p`, without modifying the layout.
    pub fn depth_if_appended(&self, p: &PauliString) -> usize {
        self.depth().max(self.slot(p.support()) + 1)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn cnot_count(&self) -> usize {
        self.cnot_count
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_of(&self, index: usize) -> Option<usize> {
        self.layer_of.get(index).copied()
    }

    pub fn n_unitaries(&self) -> usize {
        self.layer_of.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Qubits not touched by any unitary in the last layer; all qubits for an
    /// empty circuit.
    pub fn idle_in_last_layer(&self, generators: &[PauliString]) -> u64 {
        let all = if self.n_qubits == 64 { u64::MAX } else { (1u64 << self.n_qubits) - 1 };
        match self.layers.last() {
            None => all,
            Some(last) => {
                let busy = last.iter().fold(0u64, |m, &i| m | generators[i].support());
                all & !busy
            }
        }
    }

    /// Depth of the circuit fragment made of unitaries `0..=max(mu, nu)`.
    pub fn fragment_depth(&self, mu: usize, nu: usize) -> Option<usize> {
        self.prefix_depth.get(mu.max(nu)).copied()
    }
}

/// Lays out `generators` in order.
pub fn layout(n_qubits: usize, generators: &[PauliString]) -> CircuitLayout {
    let mut l = CircuitLayout::empty(n_qubits);
    for g in generators {
        l.push(g);
    }
    l
}
