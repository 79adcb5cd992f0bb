//! The layered flow network whose source-sink paths are the cyclic
//! transversals, its flow system, the projection to `x`-space and LP export.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use num_traits::{One, Zero};

use crate::config::{BlockConfiguration, CoordIndex};
use crate::enumerate::Transversal;
use crate::gf2::BitVec;
use crate::ineq::LinearForm;
use crate::lpfile::LpModel;
use crate::rational::{Rational, RationalPoint};
use crate::verify::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::{CtpError, Limits, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlowNode {
    pub layer: usize,
    pub sigma: BitVec,
}

/// Arc from layer `block` to `block + 1` labeled by an element of `B(block)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub block: usize,
    pub label: BitVec,
}

#[derive(Clone, Debug)]
pub struct FlowNet {
    config: BlockConfiguration,
    nodes: Vec<FlowNode>,
    arcs: Vec<FlowArc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
    pruned: bool,
}

fn set_sum(layer: &HashSet<u64>, block: &[BitVec]) -> HashSet<u64> {
    layer
        .iter()
        .flat_map(|s| block.iter().map(move |w| s ^ w.encoding()))
        .collect()
}

/// Builds the network. With `prune`, only nodes on some source-sink path are
/// kept; otherwise every inner layer holds all of `span(B)`.
pub fn build_flownet(b: &BlockConfiguration, prune: bool, limits: &Limits) -> Result<FlowNet> {
    let rank = b.rank();
    limits.check_width(rank)?;
    let bound = (1u64 << rank).saturating_mul(b.size() as u64);
    if bound > limits.max_arcs {
        return Err(CtpError::CapExceeded {
            what: "flow network arcs",
            limit: limits.max_arcs,
        });
    }
    let n = b.len();
    let d = b.d();
    let zero: HashSet<u64> = [0].into_iter().collect();
    let layers: Vec<HashSet<u64>> = if prune {
        let mut fwd = vec![zero.clone()];
        for i in 0..n {
            let next = set_sum(&fwd[i], b.block(i));
            fwd.push(next);
        }
        let mut bwd = vec![HashSet::new(); n + 1];
        bwd[n] = zero.clone();
        for i in (0..n).rev() {
            bwd[i] = set_sum(&bwd[i + 1], b.block(i));
        }
        (0..=n)
            .map(|i| {
                if i == 0 || i == n {
                    zero.clone()
                } else {
                    fwd[i].intersection(&bwd[i]).copied().collect()
                }
            })
            .collect()
    } else {
        let span: HashSet<u64> = b.span().iter().map(|w| w.encoding()).collect();
        (0..=n)
            .map(|i| if i == 0 || i == n { zero.clone() } else { span.clone() })
            .collect()
    };

    let mut nodes = Vec::new();
    let mut index: HashMap<(usize, u64), usize> = HashMap::new();
    for (layer, set) in layers.iter().enumerate() {
        let mut sigmas: Vec<u64> = set.iter().copied().collect();
        sigmas.sort_unstable();
        for s in sigmas {
            index.insert((layer, s), nodes.len());
            nodes.push(FlowNode {
                layer,
                sigma: BitVec::new(d, s)?,
            });
        }
    }
    let source = index[&(0, 0)];
    let sink = index[&(n, 0)];

    let mut arcs = Vec::new();
    for i in 0..n {
        let mut tails: Vec<u64> = layers[i].iter().copied().collect();
        tails.sort_unstable();
        for s in tails {
            let tail = index[&(i, s)];
            for w in b.block(i) {
                if let Some(&head) = index.get(&(i + 1, s ^ w.encoding())) {
                    arcs.push(FlowArc {
                        tail,
                        head,
                        block: i,
                        label: *w,
                    });
                }
            }
        }
    }
    let mut out_arcs = vec![Vec::new(); nodes.len()];
    let mut in_arcs = vec![Vec::new(); nodes.len()];
    for (k, a) in arcs.iter().enumerate() {
        out_arcs[a.tail].push(k);
        in_arcs[a.head].push(k);
    }
    Ok(FlowNet {
        config: b.clone(),
        nodes,
        arcs,
        out_arcs,
        in_arcs,
        source,
        sink,
        pruned: prune,
    })
}

impl FlowNet {
    pub fn config(&self) -> &BlockConfiguration {
        &self.config
    }

    pub fn nodes(&self) -> &[FlowNode] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out_arcs[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[usize] {
        &self.in_arcs[node]
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&v| v != self.source && v != self.sink)
    }

    /// `y_<block>_<tail sigma>_<label>`, block 1-based.
    pub fn var_name(&self, arc: usize) -> String {
        let a = &self.arcs[arc];
        format!("y_{}_{}_{}", a.block + 1, self.nodes[a.tail].sigma, a.label)
    }

    pub fn node_name(&self, node: usize) -> String {
        let v = &self.nodes[node];
        format!("n_{}_{}", v.layer, v.sigma)
    }

    /// Cost of each arc under an objective on `x`, via the projection.
    pub fn arc_costs(&self, objective: &LinearForm) -> Vec<Rational> {
        self.arcs
            .iter()
            .map(|a| objective.get(&CoordIndex::new(a.block, a.label)))
            .collect()
    }

    pub fn arc_costs_dense(&self, objective: &[Rational]) -> Result<Vec<Rational>> {
        if objective.len() != self.config.size() {
            return Err(CtpError::DimensionMismatch(format!(
                "objective has {} entries, configuration has {} coordinates",
                objective.len(),
                self.config.size()
            )));
        }
        self.arcs
            .iter()
            .map(|a| {
                let k = self.config.require_index(&CoordIndex::new(a.block, a.label))?;
                Ok(objective[k].clone())
            })
            .collect()
    }

    /// Indicator vector of a path given as arc indices.
    pub fn path_indicator(&self, path: &[usize]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.arcs.len()];
        for &a in path {
            y[a] = Rational::one();
        }
        y
    }

    pub fn path_transversal(&self, path: &[usize]) -> Transversal {
        Transversal(path.iter().map(|&a| self.arcs[a].label).collect())
    }

    /// The path following the prefix sums of `xi`, if all its arcs exist.
    pub fn path_of(&self, xi: &Transversal) -> Option<Vec<usize>> {
        let mut node = self.source;
        let mut path = Vec::with_capacity(xi.len());
        for w in xi.entries() {
            let &a = self.out_arcs[node].iter().find(|&&a| self.arcs[a].label == *w)?;
            path.push(a);
            node = self.arcs[a].head;
        }
        (node == self.sink).then_some(path)
    }
}

/// Every source-sink path as a list of arc indices, in depth-first order.
pub fn paths(net: &FlowNet, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    walk(net, net.source, &mut stack, &mut out, limits.max_transversals)?;
    Ok(out)
}

fn walk(net: &FlowNet, node: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: u64) -> Result<()> {
    if node == net.sink {
        if out.len() as u64 >= cap {
            return Err(CtpError::CapExceeded {
                what: "path enumeration",
                limit: cap,
            });
        }
        out.push(stack.clone());
        return Ok(());
    }
    for &a in net.out_arcs(node) {
        stack.push(a);
        walk(net, net.arcs[a].head, stack, out, cap)?;
        stack.pop();
    }
    Ok(())
}

/// `sum_a coeff * y_a = rhs` over arc indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowEquation {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Source out-flow one and conservation at every internal node that touches
/// an arc; `y >= 0` is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSystem {
    pub nvars: usize,
    pub equations: Vec<FlowEquation>,
}

pub fn flow_system(net: &FlowNet) -> FlowSystem {
    let mut equations = vec![FlowEquation {
        name: "src".into(),
        terms: net.out_arcs(net.source).iter().map(|&a| (a, Rational::one())).collect(),
        rhs: Rational::one(),
    }];
    for v in net.internal_nodes() {
        let mut terms: Vec<(usize, Rational)> = net.in_arcs(v).iter().map(|&a| (a, Rational::one())).collect();
        terms.extend(net.out_arcs(v).iter().map(|&a| (a, -Rational::one())));
        if terms.is_empty() {
            continue;
        }
        equations.push(FlowEquation {
            name: net.node_name(v),
            terms,
            rhs: Rational::zero(),
        });
    }
    FlowSystem {
        nvars: net.arcs.len(),
        equations,
    }
}

impl FlowSystem {
    pub fn is_satisfied(&self, y: &[Rational]) -> bool {
        y.len() == self.nvars
            && y.iter().all(|v| *v >= Rational::zero())
            && self.equations.iter().all(|e| {
                let lhs: Rational = e.terms.iter().map(|(a, c)| c * &y[*a]).sum();
                lhs == e.rhs
            })
    }

    pub fn to_lp(&self, costs: &[Rational], sense: Sense) -> LinearProgram {
        let mut lp = LinearProgram::new(self.nvars, sense);
        lp.set_objective_dense(costs);
        for e in &self.equations {
            lp.add_row(e.terms.clone(), Relation::Eq, e.rhs.clone());
        }
        lp
    }
}

/// `x(i, omega)` is the total flow on arcs of layer `i` labeled `omega`.
pub fn project_to_x(net: &FlowNet, y: &[Rational]) -> Result<RationalPoint> {
    if y.len() != net.arcs.len() {
        return Err(CtpError::DimensionMismatch(format!(
            "flow vector has {} entries, network has {} arcs",
            y.len(),
            net.arcs.len()
        )));
    }
    let b = &net.config;
    let mut x = RationalPoint::zeros(b.size());
    for (a, v) in net.arcs.iter().zip(y) {
        if !v.is_zero() {
            let k = b.require_index(&CoordIndex::new(a.block, a.label))?;
            x.0[k] += v;
        }
    }
    Ok(x)
}

/// Minimum of `c . x` over the projection of the flow polytope, or `None`
/// when the network has no source-sink path.
pub fn optimize_over_flow(net: &FlowNet, objective: &[Rational], limits: &Limits) -> Result<Option<(Rational, Vec<Rational>)>> {
    let costs = net.arc_costs_dense(objective)?;
    let lp = flow_system(net).to_lp(&costs, Sense::Min);
    match lp.solve(limits)? {
        LpOutcome::Optimal(s) => Ok(Some((s.value, s.x))),
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => Err(CtpError::Unbounded),
    }
}

pub fn lp_model(net: &FlowNet, objective: Option<&LinearForm>) -> LpModel {
    let names: Vec<String> = (0..net.arcs.len()).map(|a| net.var_name(a)).collect();
    let mut m = LpModel::new(Sense::Min, names.clone());
    if let Some(obj) = objective {
        m.set_objective(names.iter().cloned().zip(net.arc_costs(obj)).collect());
    }
    for e in flow_system(net).equations {
        let terms = e.terms.into_iter().map(|(a, c)| (names[a].clone(), c)).collect();
        m.add_constraint(e.name, terms, Relation::Eq, e.rhs);
    }
    m
}

pub fn export_lp(net: &FlowNet, objective: Option<&LinearForm>, path: &Path) -> Result<()> {
    let b = net.config();
    let header = format!(
        "flow formulation: d={} blocks={} arcs={} pruned={}",
        b.d(),
        b.len(),
        net.arcs.len(),
        net.pruned
    );
    lp_model(net, objective).write_to(path, &[&header])
}
