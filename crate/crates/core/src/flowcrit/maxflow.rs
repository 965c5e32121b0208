//! Single-pair maximum flow on capacitated digraphs.
//!
//! Two solvers share one residual representation: Dinic's blocking-flow
//! augmenting paths (which also yields the arc flows) and FIFO push-relabel
//! with an exact initial labelling and the gap heuristic (value only).
//! Both work directly on `f64` capacities; every augmentation or push either
//! saturates an arc or empties an excess exactly, so termination does not
//! depend on rounding.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multinet::DenseMatrix;

/// Capacitated digraph. Parallel arcs are merged by adding capacities and
/// self-loops are dropped (they never carry source-to-target flow). Arcs
/// are kept sorted by `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<(usize, usize, f64)>,
}

impl FlowNetwork {
    pub fn new<I>(node_count: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list = Vec::new();
        for (u, v, c) in arcs {
            if u >= node_count || v >= node_count {
                return Err(Error::validation(format!("arc ({u}, {v}) references a node outside 0..{node_count}")));
            }
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::validation(format!("arc ({u}, {v}) has invalid capacity {c}")));
            }
            if u != v {
                list.push((u, v, c));
            }
        }
        list.sort_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(list.len());
        for (u, v, c) in list {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += c,
                _ => merged.push((u, v, c)),
            }
        }
        Ok(Self { node_count, arcs: merged })
    }

    /// Nonzero off-diagonal entries of a square matrix become arcs.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.n_rows != m.n_cols {
            return Err(Error::validation("flow network matrix must be square"));
        }
        let n = m.n_rows;
        Self::new(
            n,
            (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| m.get(u, v) != 0.0)
                .map(|(u, v)| (u, v, m.get(u, v))),
        )
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[(usize, usize, f64)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Copy with arc number `index` removed.
    pub fn without_arc(&self, index: usize) -> Self {
        let mut arcs = self.arcs.clone();
        arcs.remove(index);
        Self { node_count: self.node_count, arcs }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { node_count: self.node_count, arcs: self.arcs.iter().map(|&(u, v, c)| (u, v, c * factor)).collect() }
    }

    pub fn out_capacity(&self, v: usize) -> f64 {
        self.arcs.iter().filter(|a| a.0 == v).map(|a| a.2).sum()
    }

    pub fn in_capacity(&self, v: usize) -> f64 {
        self.arcs.iter().filter(|a| a.1 == v).map(|a| a.2).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MaxFlowAlgorithm {
    #[default]
    Dinic,
    PushRelabel,
}

/// A maximum flow with its arc flows and the source side of a minimum cut.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxFlowSolution {
    pub value: f64,
    /// Flow on each arc of the network, in arc order.
    pub arc_flows: Vec<f64>,
    /// `true` for nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

impl MaxFlowSolution {
    /// Checks capacity bounds, conservation away from the terminals, that
    /// the value leaves the source, and that the residual cut has the same
    /// capacity as the value. `tol` is relative to the total capacity.
    pub fn verify(&self, net: &FlowNetwork, source: usize, target: usize, tol: f64) -> Result<()> {
        let scale = tol * (1.0 + net.arcs.iter().map(|a| a.2).sum::<f64>());
        let mut balance = vec![0.0; net.node_count];
        for (&(u, v, c), &f) in net.arcs.iter().zip(&self.arc_flows) {
            if f < -scale || f > c + scale {
                return Err(Error::validation(format!("flow {f} on arc ({u}, {v}) violates capacity {c}")));
            }
            balance[u] -= f;
            balance[v] += f;
        }
        for (n, b) in balance.iter().enumerate() {
            if n != source && n != target && b.abs() > scale {
                return Err(Error::validation(format!("flow not conserved at node {n} (imbalance {b})")));
            }
        }
        if (-balance[source] - self.value).abs() > scale {
            return Err(Error::validation("flow value does not match the source outflow"));
        }
        let cut: f64 = net.arcs.iter().filter(|a| self.source_side[a.0] && !self.source_side[a.1]).map(|a| a.2).sum();
        if !self.source_side[source] || self.source_side[target] || (cut - self.value).abs() > scale {
            return Err(Error::validation(format!(
                "residual cut capacity {cut} differs from flow value {}",
                self.value
            )));
        }
        Ok(())
    }
}

/// Residual graph in CSR form, reusable across source/target pairs.
#[derive(Debug, Clone)]
pub struct FlowSolver {
    n: usize,
    start: Vec<usize>,
    to: Vec<usize>,
    rev: Vec<usize>,
    cap: Vec<f64>,
    residual: Vec<f64>,
    /// Residual slot of each forward arc, in network arc order.
    arc_slot: Vec<usize>,
    level: Vec<usize>,
    cursor: Vec<usize>,
    excess: Vec<f64>,
    height: Vec<usize>,
    count: Vec<usize>,
}

impl FlowSolver {
    pub fn new(net: &FlowNetwork) -> Self {
        let n = net.node_count;
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in &net.arcs {
            degree[u + 1] += 1;
            degree[v + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let start = degree.clone();
        let mut fill = degree;
        let m2 = 2 * net.arcs.len();
        let mut to = vec![0; m2];
        let mut rev = vec![0; m2];
        let mut cap = vec![0.0; m2];
        let mut arc_slot = Vec::with_capacity(net.arcs.len());
        for &(u, v, c) in &net.arcs {
            let a = fill[u];
            fill[u] += 1;
            let b = fill[v];
            fill[v] += 1;
            to[a] = v;
            rev[a] = b;
            cap[a] = c;
            to[b] = u;
            rev[b] = a;
            cap[b] = 0.0;
            arc_slot.push(a);
        }
        Self {
            n,
            start,
            to,
            rev,
            residual: cap.clone(),
            cap,
            arc_slot,
            level: vec![0; n],
            cursor: vec![0; n],
            excess: vec![0.0; n],
            height: vec![0; n],
            count: vec![0; 2 * n + 2],
        }
    }

    fn check(&self, source: usize, target: usize) -> Result<()> {
        if source >= self.n || target >= self.n {
            return Err(Error::validation(format!("terminal ({source}, {target}) outside 0..{}", self.n)));
        }
        if source == target {
            return Err(Error::validation("source and target must differ"));
        }
        Ok(())
    }

    pub fn max_flow(&mut self, source: usize, target: usize, algorithm: MaxFlowAlgorithm) -> Result<f64> {
        self.check(source, target)?;
        self.residual.copy_from_slice(&self.cap);
        Ok(match algorithm {
            MaxFlowAlgorithm::Dinic => self.dinic(source, target),
            MaxFlowAlgorithm::PushRelabel => self.push_relabel(source, target),
        })
    }

    /// Dinic's algorithm, returning the arc flows and residual cut too.
    pub fn solve(&mut self, source: usize, target: usize) -> Result<MaxFlowSolution> {
        self.check(source, target)?;
        self.residual.copy_from_slice(&self.cap);
        let value = self.dinic(source, target);
        let arc_flows = self.arc_slot.iter().map(|&a| (self.cap[a] - self.residual[a]).max(0.0)).collect();
        let source_side = self.reachable_from(source);
        Ok(MaxFlowSolution { value, arc_flows, source_side })
    }

    /// Forward arcs (network arc indices) carrying positive flow after the
    /// last [`FlowSolver::solve`] / Dinic run.
    pub fn used_arcs(&self) -> impl Iterator<Item = usize> + '_ {
        self.arc_slot.iter().enumerate().filter(|(_, &a)| self.residual[a] < self.cap[a]).map(|(i, _)| i)
    }

    fn reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for e in self.start[u]..self.start[u + 1] {
                let v = self.to[e];
                if self.residual[e] > 0.0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn bfs_levels(&mut self, source: usize, target: usize) -> bool {
        self.level.fill(usize::MAX);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for e in self.start[u]..self.start[u + 1] {
                let v = self.to[e];
                if self.residual[e] > 0.0 && self.level[v] == usize::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[target] != usize::MAX
    }

    fn augment(&mut self, u: usize, target: usize, limit: f64) -> f64 {
        if u == target {
            return limit;
        }
        while self.cursor[u] < self.start[u + 1] {
            let e = self.cursor[u];
            let v = self.to[e];
            if self.residual[e] > 0.0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.augment(v, target, limit.min(self.residual[e]));
                if pushed > 0.0 {
                    self.residual[e] -= pushed;
                    self.residual[self.rev[e]] += pushed;
                    return pushed;
                }
            }
            self.cursor[u] += 1;
        }
        0.0
    }

    fn dinic(&mut self, source: usize, target: usize) -> f64 {
        let mut total = 0.0;
        while self.bfs_levels(source, target) {
            self.cursor.copy_from_slice(&self.start[..self.n]);
            loop {
                let pushed = self.augment(source, target, f64::INFINITY);
                if pushed <= 0.0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn push_relabel(&mut self, source: usize, target: usize) -> f64 {
        let n = self.n;
        self.excess.fill(0.0);
        self.count.fill(0);
        // exact distance-to-target labels; unreachable nodes start at n
        self.height.fill(n);
        self.height[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for e in self.start[v]..self.start[v + 1] {
                let u = self.to[e];
                if u != source && self.height[u] == n && self.residual[self.rev[e]] > 0.0 {
                    self.height[u] = self.height[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        self.height[source] = n;
        for &h in &self.height {
            self.count[h.min(2 * n + 1)] += 1;
        }
        let mut active = VecDeque::new();
        for e in self.start[source]..self.start[source + 1] {
            let c = self.residual[e];
            if c > 0.0 {
                let v = self.to[e];
                self.residual[e] = 0.0;
                self.residual[self.rev[e]] += c;
                if v != target && v != source && self.excess[v] == 0.0 && self.height[v] < n {
                    active.push_back(v);
                }
                self.excess[v] += c;
            }
        }
        self.cursor.copy_from_slice(&self.start[..n]);
        while let Some(u) = active.pop_front() {
            self.discharge(u, source, target, &mut active);
        }
        self.excess[target]
    }

    fn discharge(&mut self, u: usize, source: usize, target: usize, active: &mut VecDeque<usize>) {
        let n = self.n;
        while self.excess[u] > 0.0 && self.height[u] < n {
            if self.cursor[u] == self.start[u + 1] {
                self.relabel(u);
                continue;
            }
            let e = self.cursor[u];
            let v = self.to[e];
            if self.residual[e] > 0.0 && self.height[u] == self.height[v] + 1 {
                let delta = self.excess[u].min(self.residual[e]);
                self.residual[e] -= delta;
                self.residual[self.rev[e]] += delta;
                self.excess[u] -= delta;
                if v != source && v != target && self.excess[v] == 0.0 && self.height[v] < n {
                    active.push_back(v);
                }
                self.excess[v] += delta;
            } else {
                self.cursor[u] += 1;
            }
        }
    }

    fn relabel(&mut self, u: usize) {
        let n = self.n;
        let old = self.height[u];
        let mut lowest = 2 * n;
        for e in self.start[u]..self.start[u + 1] {
            if self.residual[e] > 0.0 {
                lowest = lowest.min(self.height[self.to[e]]);
            }
        }
        let new = (lowest + 1).min(2 * n + 1);
        self.count[old] -= 1;
        self.height[u] = new;
        self.count[new] += 1;
        self.cursor[u] = self.start[u];
        if old < n && self.count[old] == 0 {
            // gap: nobody above `old` can reach the target any more
            for v in 0..n {
                let h = self.height[v];
                if h > old && h < n {
                    self.count[h] -= 1;
                    self.height[v] = n + 1;
                    self.count[n + 1] += 1;
                }
            }
        }
    }
}

/// Value of a maximum `source → target` flow.
pub fn max_flow(net: &FlowNetwork, source: usize, target: usize) -> Result<f64> {
    FlowSolver::new(net).max_flow(source, target, MaxFlowAlgorithm::Dinic)
}

pub fn max_flow_with(net: &FlowNetwork, source: usize, target: usize, algorithm: MaxFlowAlgorithm) -> Result<f64> {
    FlowSolver::new(net).max_flow(source, target, algorithm)
}
