//! Dynkin quivers, dimension vectors and the bilinear forms on them.
//!
//! Vertices are stored 0-based internally and rendered 1-based. A [`Quiver`]
//! is always renumbered so that every arrow points from a larger label to a
//! smaller one (heads before tails).

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("quiver has no vertices")]
    Empty,
    #[error("vertex label {0} out of range 1..={1}")]
    InvalidVertex(usize, usize),
    #[error("underlying graph is not a tree: {0}")]
    NotATree(String),
    #[error("tree is not of type A, D or E: {0}")]
    NotADE(String),
    #[error("dimension vector has length {found}, quiver has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("bilinear form value does not fit in 64 bits")]
    Overflow,
    #[error("invalid quiver JSON: {0}")]
    Json(String),
}

/// A dimension vector: one non-negative integer per vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The simple dimension vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Sum of the entries.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// Sum of squares of the entries.
    pub fn square_sum(&self) -> u64 {
        self.0.iter().map(|&x| (x as u64) * (x as u64)).sum()
    }

    pub fn scaled(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|&x| x * k).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// Every dimension vector of length `n` with entries summing to `total`,
    /// in lexicographic order.
    pub fn all_with_total(n: usize, total: u32) -> Vec<DimVector> {
        fn go(n: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<DimVector>) {
            if cur.len() + 1 == n {
                cur.push(rest);
                out.push(DimVector(cur.clone()));
                cur.pop();
                return;
            }
            for x in 0..=rest {
                cur.push(x);
                go(n, rest - x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if total == 0 {
                out.push(DimVector(Vec::new()));
            }
            return out;
        }
        go(n, total, &mut Vec::new(), &mut out);
        out
    }

    /// Parses `1,0,2` (whitespace tolerated).
    pub fn parse(s: &str) -> Result<DimVector, String> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(DimVector(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| format!("bad entry {:?}: {e}", t.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(DimVector)
    }
}

impl Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vector length mismatch");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl DynkinType {
    /// Number of positive roots.
    pub fn root_count(&self) -> usize {
        match *self {
            DynkinType::A(n) => n * (n + 1) / 2,
            DynkinType::D(n) => n * (n - 1),
            DynkinType::E6 => 36,
            DynkinType::E7 => 63,
            DynkinType::E8 => 120,
        }
    }

    /// Largest coefficient of the highest root.
    pub fn max_mark(&self) -> u32 {
        match *self {
            DynkinType::A(_) => 1,
            DynkinType::D(_) => 2,
            DynkinType::E6 => 3,
            DynkinType::E7 => 4,
            DynkinType::E8 => 6,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A_{n}"),
            DynkinType::D(n) => write!(f, "D_{n}"),
            DynkinType::E6 => write!(f, "E_6"),
            DynkinType::E7 => write!(f, "E_7"),
            DynkinType::E8 => write!(f, "E_8"),
        }
    }
}

/// Quiver as read from disk: 1-based labels, arbitrary numbering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawQuiver {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl RawQuiver {
    pub fn from_json(text: &str) -> Result<RawQuiver, QuiverError> {
        serde_json::from_str(text).map_err(|e| QuiverError::Json(e.to_string()))
    }
}

/// A Dynkin quiver in admissible numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    /// `(tail, head)` pairs, 0-based, sorted.
    edges: Vec<(usize, usize)>,
    dynkin: DynkinType,
    /// `permutation[old - 1] = new` (both 1-based).
    permutation: Vec<usize>,
}

impl Quiver {
    pub fn from_json(text: &str) -> Result<Quiver, QuiverError> {
        validate_dynkin(&RawQuiver::from_json(text)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn dynkin_type(&self) -> DynkinType {
        self.dynkin
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Vertices `j` with an arrow `j -> i`.
    pub fn tails_into(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, h)| h == i)
            .map(|&(t, _)| t)
            .collect()
    }

    /// Number of arrows `from -> to`.
    pub fn arrows(&self, from: usize, to: usize) -> usize {
        self.edges.iter().filter(|&&(t, h)| t == from && h == to).count()
    }

    fn check_len(&self, v: &DimVector) -> Result<(), QuiverError> {
        if v.len() != self.n {
            return Err(QuiverError::LengthMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Dimension of `V_gamma`.
    pub fn rep_space_dim(&self, gamma: &DimVector) -> u64 {
        self.edges
            .iter()
            .map(|&(t, h)| gamma[t] as u64 * gamma[h] as u64)
            .sum()
    }

    /// Symmetric Cartan matrix entry `(i, j)`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else {
            -((self.arrows(i, j) + self.arrows(j, i)) as i64)
        }
    }

    /// The quiver with all arrows at `k` reversed (labels unchanged, so the
    /// result is generally not admissibly numbered).
    pub(crate) fn reflected_edges(edges: &[(usize, usize)], k: usize) -> Vec<(usize, usize)> {
        edges
            .iter()
            .map(|&(t, h)| if t == k || h == k { (h, t) } else { (t, h) })
            .collect()
    }

    /// Renders as the JSON quiver format (in the admissible numbering).
    pub fn to_raw(&self) -> RawQuiver {
        RawQuiver {
            vertices: self.n,
            edges: self.edges.iter().map(|&(t, h)| [t + 1, h + 1]).collect(),
        }
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.dynkin)?;
        for (k, (t, h)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", t + 1, h + 1)?;
        }
        write!(f, "]")
    }
}

/// Checks that `raw` is an orientation of an ADE graph and renumbers it
/// admissibly, choosing the lexicographically smallest order of original
/// labels.
pub fn validate_dynkin(raw: &RawQuiver) -> Result<Quiver, QuiverError> {
    let n = raw.vertices;
    if n == 0 {
        return Err(QuiverError::Empty);
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    for &[t, h] in &raw.edges {
        for v in [t, h] {
            if v == 0 || v > n {
                return Err(QuiverError::InvalidVertex(v, n));
            }
        }
        if t == h {
            return Err(QuiverError::NotATree(format!("loop at vertex {t}")));
        }
        edges.push((t - 1, h - 1));
    }
    if edges.len() != n - 1 {
        return Err(QuiverError::NotATree(format!(
            "{} vertices need {} edges, found {}",
            n,
            n - 1,
            edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for &(t, h) in &edges {
        if adj[t].contains(&h) {
            return Err(QuiverError::NotATree(format!(
                "multiple edges between {} and {}",
                t + 1,
                h + 1
            )));
        }
        adj[t].push(h);
        adj[h].push(t);
    }
    // n - 1 edges plus connectivity means a tree.
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(QuiverError::NotATree(format!(
            "disconnected: vertex {} unreachable from vertex 1",
            v + 1
        )));
    }
    let dynkin = classify_tree(&adj)?;

    // Kahn's algorithm: a vertex is ready once all heads of its outgoing
    // arrows are placed.
    let mut pending_heads = vec![0usize; n];
    for &(t, _) in &edges {
        pending_heads[t] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| pending_heads[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &(t, h) in &edges {
            if h == v {
                pending_heads[t] -= 1;
                if pending_heads[t] == 0 {
                    ready.push(Reverse(t));
                }
            }
        }
    }
    debug_assert_eq!(order.len(), n, "a tree has no oriented cycles");
    let mut new_label = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        new_label[old] = new;
    }
    let mut renamed: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(t, h)| (new_label[t], new_label[h]))
        .collect();
    renamed.sort_unstable();
    Ok(Quiver {
        n,
        edges: renamed,
        dynkin,
        permutation: new_label.iter().map(|&x| x + 1).collect(),
    })
}

fn classify_tree(adj: &[Vec<usize>]) -> Result<DynkinType, QuiverError> {
    let n = adj.len();
    if let Some(v) = adj.iter().position(|a| a.len() > 3) {
        return Err(QuiverError::NotADE(format!(
            "vertex {} has degree {}",
            v + 1,
            adj[v].len()
        )));
    }
    let branches: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
    match branches.len() {
        0 => Ok(DynkinType::A(n)),
        1 => {
            let c = branches[0];
            let mut arms: Vec<usize> = adj[c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (c, start, 1);
                    loop {
                        let next = adj[cur].iter().copied().find(|&w| w != prev);
                        match next {
                            Some(w) if adj[cur].len() == 2 => {
                                prev = cur;
                                cur = w;
                                len += 1;
                            }
                            _ => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(DynkinType::D(n)),
                [1, 2, 2] => Ok(DynkinType::E6),
                [1, 2, 3] => Ok(DynkinType::E7),
                [1, 2, 4] => Ok(DynkinType::E8),
                other => Err(QuiverError::NotADE(format!("arm lengths {other:?}"))),
            }
        }
        k => Err(QuiverError::NotADE(format!("{k} branch vertices"))),
    }
}

/// `chi(g1, g2) = sum_i g1(i) g2(i) - sum_a g1(t(a)) g2(h(a))`.
pub fn euler_form(q: &Quiver, g1: &DimVector, g2: &DimVector) -> Result<i64, QuiverError> {
    q.check_len(g1)?;
    q.check_len(g2)?;
    let diag: i128 = (0..q.n).map(|i| g1[i] as i128 * g2[i] as i128).sum();
    let off: i128 = q
        .edges
        .iter()
        .map(|&(t, h)| g1[t] as i128 * g2[h] as i128)
        .sum();
    i64::try_from(diag - off).map_err(|_| QuiverError::Overflow)
}

/// `lambda(g1, g2) = chi(g2, g1) - chi(g1, g2)`.
pub fn lambda_form(q: &Quiver, g1: &DimVector, g2: &DimVector) -> Result<i64, QuiverError> {
    let a = euler_form(q, g2, g1)?;
    let b = euler_form(q, g1, g2)?;
    a.checked_sub(b).ok_or(QuiverError::Overflow)
}

/// Tits form `chi(d, d)`.
pub fn tits_form(q: &Quiver, d: &DimVector) -> i64 {
    euler_form(q, d, d).expect("length checked by caller")
}
