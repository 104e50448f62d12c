//! Network construction, validation, serialization, and energy evaluation.
//!
//! Two network classes are supported: symmetric (undirected) networks for
//! energy-minimization optimization, and directed acyclic networks for
//! probabilistic graphical inference. Built-in networks cover an
//! invertible AND gate, an invertible full adder, random symmetric
//! networks, and layered family-tree Bayesian networks.

use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::device::PBitParams;
use crate::error::NetworkError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NetworkKind {
    /// Symmetric coupling; ground states of the energy encode solutions.
    Emoa,
    /// Directed acyclic coupling; correlations encode inference results.
    Pga,
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetworkKind::Emoa => write!(f, "emoa"),
            NetworkKind::Pga => write!(f, "pga"),
        }
    }
}

/// A p-bit network: synapse matrix J, bias vector h, and update order.
///
/// `J[i][j]` is the weight with which device `j`'s output feeds device
/// `i`'s input. The diagonal is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    n: usize,
    j: Vec<f64>,
    h: Vec<f64>,
    kind: NetworkKind,
    update_order: Vec<usize>,
}

/// A state together with its energy under the network's quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySample {
    pub state: Vec<i8>,
    pub energy: f64,
}

/// One invariant violation found by [`NetworkSpec::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonzeroDiagonal { index: usize, value: f64 },
    AsymmetricEmoa { i: usize, j: usize },
    CyclicPga,
    OrderNotPermutation,
    OrderNotTopological { child: usize, parent: usize },
    BadDimensions { j_len: usize, h_len: usize, n: usize },
    NonFiniteEntry { i: usize, j: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonzeroDiagonal { index, value } => {
                write!(f, "J[{index}][{index}] = {value}, diagonal must be zero")
            }
            Violation::AsymmetricEmoa { i, j } => {
                write!(f, "EMOA network has J[{i}][{j}] != J[{j}][{i}]")
            }
            Violation::CyclicPga => write!(f, "PGA network contains a directed cycle"),
            Violation::OrderNotPermutation => {
                write!(f, "update_order is not a permutation of 0..n")
            }
            Violation::OrderNotTopological { child, parent } => write!(
                f,
                "update_order places device {child} before its parent {parent}"
            ),
            Violation::BadDimensions { j_len, h_len, n } => write!(
                f,
                "expected J of length {} and h of length {n}, got {j_len} and {h_len}",
                n * n
            ),
            Violation::NonFiniteEntry { i, j } => write!(f, "J[{i}][{j}] is not finite"),
        }
    }
}

impl NetworkSpec {
    /// Build a network from raw parts, checking all invariants.
    pub fn new(
        n: usize,
        j: Vec<f64>,
        h: Vec<f64>,
        kind: NetworkKind,
        update_order: Vec<usize>,
    ) -> Result<Self, NetworkError> {
        let net = NetworkSpec {
            n,
            j,
            h,
            kind,
            update_order,
        };
        let violations = net.validate();
        if violations.is_empty() {
            Ok(net)
        } else {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(NetworkError::Invalid(msgs.join("; ")))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    #[inline]
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.j[i * self.n + j]
    }

    /// Row `i` of the synapse matrix: the input weights of device `i`.
    #[inline]
    pub fn couplings_into(&self, i: usize) -> &[f64] {
        &self.j[i * self.n..(i + 1) * self.n]
    }

    pub fn bias(&self) -> &[f64] {
        &self.h
    }

    pub fn update_order(&self) -> &[usize] {
        &self.update_order
    }

    /// Check all structural invariants, collecting every violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n;
        if self.j.len() != n * n || self.h.len() != n {
            out.push(Violation::BadDimensions {
                j_len: self.j.len(),
                h_len: self.h.len(),
                n,
            });
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                if !self.coupling(i, j).is_finite() {
                    out.push(Violation::NonFiniteEntry { i, j });
                }
            }
        }
        for i in 0..n {
            if self.coupling(i, i) != 0.0 {
                out.push(Violation::NonzeroDiagonal {
                    index: i,
                    value: self.coupling(i, i),
                });
            }
        }
        let mut order_ok = self.update_order.len() == n;
        if order_ok {
            let mut seen = vec![false; n];
            for &i in &self.update_order {
                if i >= n || seen[i] {
                    order_ok = false;
                    break;
                }
                seen[i] = true;
            }
        }
        if !order_ok {
            out.push(Violation::OrderNotPermutation);
        }
        match self.kind {
            NetworkKind::Emoa => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        if self.coupling(i, j) != self.coupling(j, i) {
                            out.push(Violation::AsymmetricEmoa { i, j });
                        }
                    }
                }
            }
            NetworkKind::Pga => {
                if !self.is_dag() {
                    out.push(Violation::CyclicPga);
                } else if order_ok {
                    // edge j -> i requires j to update before i
                    let mut pos = vec![0usize; n];
                    for (p, &i) in self.update_order.iter().enumerate() {
                        pos[i] = p;
                    }
                    'outer: for i in 0..n {
                        for j in 0..n {
                            if self.coupling(i, j) != 0.0 && pos[j] >= pos[i] {
                                out.push(Violation::OrderNotTopological {
                                    child: i,
                                    parent: j,
                                });
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn is_dag(&self) -> bool {
        // Kahn's algorithm on edges parent j -> child i (J[i][j] != 0)
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if self.coupling(i, j) != 0.0 {
                    indeg[i] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(j) = queue.pop() {
            removed += 1;
            for i in 0..n {
                if self.coupling(i, j) != 0.0 {
                    indeg[i] -= 1;
                    if indeg[i] == 0 {
                        queue.push(i);
                    }
                }
            }
        }
        removed == n
    }

    /// Ising energy E(m) = -(1/2 sum_ij J_ij m_i m_j + sum_i h_i m_i).
    /// Defined only for symmetric (EMOA) networks.
    pub fn energy(&self, state: &[i8]) -> Result<f64, NetworkError> {
        if self.kind == NetworkKind::Pga {
            return Err(NetworkError::NoEnergyForPga);
        }
        if state.len() != self.n {
            return Err(NetworkError::StateLengthMismatch {
                got: state.len(),
                n: self.n,
            });
        }
        if state.iter().any(|&s| s != 1 && s != -1) {
            return Err(NetworkError::InvalidState);
        }
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..self.n {
            let mi = state[i] as f64;
            lin += self.h[i] * mi;
            let row = self.couplings_into(i);
            for j in 0..self.n {
                quad += row[j] * mi * state[j] as f64;
            }
        }
        Ok(-(0.5 * quad + lin))
    }

    /// Enumerate all states and return the minimal-energy set. Intended
    /// for oracle checks on small networks (n <= 24).
    pub fn ground_states(&self) -> Result<Vec<EnergySample>, NetworkError> {
        assert!(self.n <= 24, "ground-state enumeration limited to n <= 24");
        let mut best = f64::INFINITY;
        let mut set: Vec<EnergySample> = Vec::new();
        for code in 0u64..(1u64 << self.n) {
            let state = decode_state(code, self.n);
            let e = self.energy(&state)?;
            if e < best - 1e-9 {
                best = e;
                set.clear();
                set.push(EnergySample { state, energy: e });
            } else if (e - best).abs() <= 1e-9 {
                set.push(EnergySample { state, energy: e });
            }
        }
        Ok(set)
    }
}

/// Spin vector from a bit code: bit i set means device i is +1.
pub fn decode_state(code: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if code >> i & 1 == 1 { 1 } else { -1 })
        .collect()
}

/// Bit code of a spin vector, inverse of [`decode_state`].
pub fn encode_state(state: &[i8]) -> u64 {
    state
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &s)| acc | ((s == 1) as u64) << i)
}

/// Network input voltage of device `i`:
/// V_in_i = kappa * (h_i + sum_j J_ij * V_out_j / (vdd/2)).
pub fn input_voltage(
    i: usize,
    net: &NetworkSpec,
    outputs: &[f64],
    params: &PBitParams,
) -> Result<f64, NetworkError> {
    if i >= net.n() {
        return Err(NetworkError::IndexOutOfRange {
            index: i,
            n: net.n(),
        });
    }
    if outputs.len() != net.n() {
        return Err(NetworkError::OutputLengthMismatch {
            got: outputs.len(),
            n: net.n(),
        });
    }
    let half = params.half_swing();
    let row = net.couplings_into(i);
    let mut sum = net.bias()[i];
    for (j, &w) in row.iter().enumerate() {
        sum += w * outputs[j] / half;
    }
    Ok(params.kappa * sum)
}

/// 3-device invertible AND gate. Devices 0 and 1 are the inputs, device 2
/// the output; the four AND-consistent states share the minimal energy.
pub fn and_gate() -> NetworkSpec {
    let j = vec![
        0.0, -1.0, 2.0, //
        -1.0, 0.0, 2.0, //
        2.0, 2.0, 0.0,
    ];
    let h = vec![1.0, 1.0, -2.0];
    NetworkSpec::new(3, j, h, NetworkKind::Emoa, (0..3).collect())
        .expect("AND gate table is valid")
}

/// Device roles in the 14-device full adder built by [`full_adder`]:
/// inputs A, B, Cin and outputs Sum, Cout.
pub const FULL_ADDER_IO: [usize; 5] = [0, 1, 2, 12, 13];

// Composition of invertible-logic gadgets: AND/OR cells, inverter pairs,
// and ferromagnetic output buffers. Devices 0..2 are A, B, Cin; 3..11 are
// intermediate nodes; 12, 13 are the buffered Sum and Cout terminals.
#[rustfmt::skip]
const FULL_ADDER_J: [[f64; 14]; 14] = [
    [0., -2.,  0.,  2.,  2.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.],
    [-2., 0.,  0.,  2.,  2.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.],
    [0.,  0.,  0.,  0.,  0.,  0., -2.,  2.,  2.,  0.,  0.,  0.,  0.,  0.],
    [2.,  2.,  0.,  0.,  0., -2.,  0., -1.,  0.,  0.,  0.,  2.,  0.,  0.],
    [2.,  2.,  0.,  0.,  0., -1.,  2.,  0.,  0.,  0.,  0.,  0.,  0.,  0.],
    [0.,  0.,  0., -2., -1.,  0.,  2.,  0.,  0.,  0.,  0.,  0.,  0.,  0.],
    [0.,  0., -2.,  0.,  2.,  2.,  0.,  2.,  2.,  0.,  0.,  0.,  0.,  0.],
    [0.,  0.,  2., -1.,  0.,  0.,  2.,  0.,  0., -2.,  0.,  2.,  0.,  0.],
    [0.,  0.,  2.,  0.,  0.,  0.,  2.,  0.,  0., -1.,  2.,  0.,  0.,  0.],
    [0.,  0.,  0.,  0.,  0.,  0.,  0., -2., -1.,  0.,  2.,  0.,  0.,  0.],
    [0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  2.,  2.,  0.,  0.,  2.,  0.],
    [0.,  0.,  0.,  2.,  0.,  0.,  0.,  2.,  0.,  0.,  0.,  0.,  0.,  2.],
    [0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  2.,  0.,  0.,  0.],
    [0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  0.,  2.,  0.,  0.],
];
const FULL_ADDER_H: [f64; 14] = [
    0., 0., 0., -3., 3., 1., -2., -3., 3., 1., -2., 2., 0., 0.,
];

/// 14-device invertible full adder. The minimal-energy states project
/// exactly onto the 8 valid (A, B, Cin, Sum, Cout) truth-table rows on
/// the devices named in [`FULL_ADDER_IO`].
pub fn full_adder() -> Result<NetworkSpec, NetworkError> {
    let n = 14;
    let mut j = Vec::with_capacity(n * n);
    for row in &FULL_ADDER_J {
        j.extend_from_slice(row);
    }
    // fail loudly on a corrupt table before handing it to callers
    for i in 0..n {
        for k in 0..n {
            if j[i * n + k] != j[k * n + i] {
                return Err(NetworkError::CorruptTable(format!(
                    "asymmetric entry at ({i}, {k})"
                )));
            }
        }
        if j[i * n + i] != 0.0 {
            return Err(NetworkError::CorruptTable(format!(
                "nonzero diagonal at {i}"
            )));
        }
    }
    NetworkSpec::new(n, j, FULL_ADDER_H.to_vec(), NetworkKind::Emoa, (0..n).collect())
}

/// Random symmetric network: J_ij = J_ji uniform on [-weight_range,
/// +weight_range] for i < j, zero bias. Deterministic for a fixed seed.
pub fn random_symmetric(
    n: usize,
    weight_range: f64,
    seed: u64,
) -> Result<NetworkSpec, NetworkError> {
    if n < 2 {
        return Err(NetworkError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j = vec![0.0; n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            let w = rng.random_range(-weight_range..=weight_range);
            j[a * n + b] = w;
            j[b * n + a] = w;
        }
    }
    NetworkSpec::new(n, j, vec![0.0; n], NetworkKind::Emoa, (0..n).collect())
}

/// Layered family-tree Bayesian network on 8, 20, or 50 devices.
///
/// The 8-node tree is the canonical genealogy: two grandparents feed two
/// parents, which feed four children. Larger trees extend the layering
/// deterministically from the seed: each node in a new generation picks
/// two distinct parents from the previous one. Edges carry weight
/// `coupling` from parent to child only, so the network is a DAG and
/// indices are already in topological order.
pub fn family_tree_bn(n: usize, coupling: f64, seed: u64) -> Result<NetworkSpec, NetworkError> {
    let layers: Vec<usize> = match n {
        8 => vec![2, 2, 4],
        20 => vec![2, 2, 4, 8, 4],
        50 => vec![2, 2, 4, 8, 8, 8, 8, 8, 2],
        other => return Err(NetworkError::UnsupportedBnSize(other)),
    };
    debug_assert_eq!(layers.iter().sum::<usize>(), n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j = vec![0.0; n * n];
    let mut start = 0usize;
    let mut prev: Vec<usize> = Vec::new();
    for &size in &layers {
        let layer: Vec<usize> = (start..start + size).collect();
        if !prev.is_empty() {
            for &child in &layer {
                if n == 8 {
                    // canonical tree: every child of both members above
                    for &parent in &prev {
                        j[child * n + parent] = coupling;
                    }
                } else {
                    for k in index_sample(&mut rng, prev.len(), 2) {
                        j[child * n + prev[k]] = coupling;
                    }
                }
            }
        }
        start += size;
        prev = layer;
    }
    NetworkSpec::new(n, j, vec![0.0; n], NetworkKind::Pga, (0..n).collect())
}

/// Serialize a network to the `pbitnet v1` text format.
pub fn save_network(net: &NetworkSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("pbitnet v1 kind={} n={}\n", net.kind(), net.n()));
    for i in 0..net.n() {
        let row: Vec<String> = net
            .couplings_into(i)
            .iter()
            .map(|v| format!("{v}"))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let bias: Vec<String> = net.bias().iter().map(|v| format!("{v}")).collect();
    out.push_str(&bias.join(" "));
    out.push('\n');
    let order: Vec<String> = net.update_order().iter().map(|v| format!("{v}")).collect();
    out.push_str("order: ");
    out.push_str(&order.join(" "));
    out.push('\n');
    out
}

/// Parse a network from the `pbitnet v1` text format.
pub fn load_network(text: &str) -> Result<NetworkSpec, NetworkError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| NetworkError::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let mut kind = None;
    let mut n = None;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("pbitnet") || fields.next() != Some("v1") {
        return Err(NetworkError::Parse {
            line: 1,
            column: 1,
            message: "expected header `pbitnet v1 kind=<emoa|pga> n=<N>`".into(),
        });
    }
    for field in fields {
        if let Some(v) = field.strip_prefix("kind=") {
            kind = Some(match v {
                "emoa" => NetworkKind::Emoa,
                "pga" => NetworkKind::Pga,
                other => {
                    return Err(NetworkError::Parse {
                        line: 1,
                        column: header.find(other).map_or(1, |c| c + 1),
                        message: format!("unknown kind `{other}`"),
                    })
                }
            });
        } else if let Some(v) = field.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|e| NetworkError::Parse {
                line: 1,
                column: header.find(field).map_or(1, |c| c + 1),
                message: format!("bad device count: {e}"),
            })?);
        }
    }
    let (kind, n) = match (kind, n) {
        (Some(k), Some(n)) => (k, n),
        _ => {
            return Err(NetworkError::Parse {
                line: 1,
                column: 1,
                message: "header must declare both kind= and n=".into(),
            })
        }
    };

    let parse_row = |line_no: usize, line: &str, expect: usize| -> Result<Vec<f64>, NetworkError> {
        let mut vals = Vec::with_capacity(expect);
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|e| NetworkError::Parse {
                line: line_no + 1,
                column: line.find(tok).map_or(1, |c| c + 1),
                message: format!("bad number `{tok}`: {e}"),
            })?;
            vals.push(v);
        }
        if vals.len() != expect {
            return Err(NetworkError::Parse {
                line: line_no + 1,
                column: 1,
                message: format!("expected {expect} entries, found {}", vals.len()),
            });
        }
        Ok(vals)
    };

    let mut j = Vec::with_capacity(n * n);
    for row_idx in 0..n {
        let (line_no, line) = lines.next().ok_or_else(|| NetworkError::Parse {
            line: row_idx + 2,
            column: 1,
            message: format!("missing matrix row {row_idx}"),
        })?;
        j.extend(parse_row(line_no, line, n)?);
    }
    let (line_no, line) = lines.next().ok_or_else(|| NetworkError::Parse {
        line: n + 2,
        column: 1,
        message: "missing bias row".into(),
    })?;
    let h = parse_row(line_no, line, n)?;

    let (line_no, line) = lines.next().ok_or_else(|| NetworkError::Parse {
        line: n + 3,
        column: 1,
        message: "missing order line".into(),
    })?;
    let rest = line.strip_prefix("order:").ok_or_else(|| NetworkError::Parse {
        line: line_no + 1,
        column: 1,
        message: "expected `order:` line".into(),
    })?;
    let mut order = Vec::with_capacity(n);
    for tok in rest.split_whitespace() {
        order.push(tok.parse::<usize>().map_err(|e| NetworkError::Parse {
            line: line_no + 1,
            column: line.find(tok).map_or(1, |c| c + 1),
            message: format!("bad index `{tok}`: {e}"),
        })?);
    }
    NetworkSpec::new(n, j, h, kind, order)
}
