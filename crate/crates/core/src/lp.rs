//! Export of the extended spanning-tree MIQP in CPLEX LP text format.
//!
//! Variables are the edge flows `f_e` (free), edge selectors `x_e` and, for
//! every edge `{v,w}` and node `u ∉ {v,w}`, the directed indicators
//! `z_v_w_u` and `z_w_v_u`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::network::{EdgeId, Network, NodeId};

/// Variable and row counts of an exported model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LpCounts {
    pub flow_vars: usize,
    pub x_vars: usize,
    pub z_vars: usize,
    pub conservation_rows: usize,
    pub cardinality_rows: usize,
    pub coupling_rows: usize,
    pub degree_rows: usize,
    pub big_m_rows: usize,
}

impl LpCounts {
    /// Counts implied by the formulation for `n` nodes and `m` edges.
    pub fn expected(n: usize, m: usize) -> Self {
        let outside = n.saturating_sub(2);
        Self {
            flow_vars: m,
            x_vars: m,
            z_vars: 2 * m * outside,
            conservation_rows: n,
            cardinality_rows: 1,
            coupling_rows: m * outside,
            degree_rows: 2 * m,
            big_m_rows: 2 * m,
        }
    }

    pub fn variables(&self) -> usize {
        self.flow_vars + self.x_vars + self.z_vars
    }

    pub fn binaries(&self) -> usize {
        self.x_vars + self.z_vars
    }

    pub fn rows(&self) -> usize {
        self.conservation_rows + self.cardinality_rows + self.coupling_rows + self.degree_rows + self.big_m_rows
    }
}

fn z(v: NodeId, w: NodeId, u: NodeId) -> String {
    format!("z_{v}_{w}_{u}")
}

/// Appends `terms` as ` + a` / ` - a` pieces, wrapping long rows.
fn push_terms(out: &mut String, terms: &[(f64, String)]) {
    for (i, (coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % 8 == 0 {
            out.push_str("\n  ");
        }
        let sign = if *coef < 0.0 { '-' } else { '+' };
        let mag = coef.abs();
        if i == 0 && sign == '+' {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        if mag == 1.0 {
            out.push_str(var);
        } else {
            let _ = write!(out, "{mag} {var}");
        }
    }
}

fn row(out: &mut String, name: &str, terms: &[(f64, String)], sense: &str, rhs: f64) {
    let _ = write!(out, " {name}:");
    push_terms(out, terms);
    let _ = writeln!(out, " {sense} {rhs}");
}

/// Renders the model as LP text and reports its size.
pub fn martin_lp(net: &Network) -> (String, LpCounts) {
    let n = net.node_count();
    let m = net.edge_count();
    let mut counts = LpCounts {
        flow_vars: m,
        x_vars: m,
        z_vars: 0,
        conservation_rows: 0,
        cardinality_rows: 0,
        coupling_rows: 0,
        degree_rows: 0,
        big_m_rows: 0,
    };
    let big_m = net.total_demand();
    let mut out = String::new();
    let _ = writeln!(out, "\\ spanning-tree reconfiguration: {n} nodes, {m} edges, root {}", net.root());
    out.push_str("Minimize\n obj: [");
    let quad: Vec<String> = net
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| format!("{} f_{id} ^ 2", 2.0 * e.resistance))
        .collect();
    for (i, t) in quad.iter().enumerate() {
        if i > 0 {
            out.push_str(if i % 8 == 0 { "\n  + " } else { " + " });
        } else {
            out.push(' ');
        }
        out.push_str(t);
    }
    out.push_str(" ] / 2\nSubject To\n");

    // Flow into u minus flow out of u equals d_u, with edges oriented tail to head.
    for u in 0..n {
        let terms: Vec<(f64, String)> = net
            .incident(u)
            .iter()
            .filter(|&&id| net.edge(id).u != net.edge(id).v)
            .map(|&id| {
                let coef = if net.edge(id).head() == u { 1.0 } else { -1.0 };
                (coef, format!("f_{id}"))
            })
            .collect();
        let d = if u == net.root() { -big_m } else { net.demand(u) };
        if terms.is_empty() {
            let _ = writeln!(out, " bal_{u}: 0 f_0 = {d}");
        } else {
            row(&mut out, &format!("bal_{u}"), &terms, "=", d);
        }
        counts.conservation_rows += 1;
    }

    let all_x: Vec<(f64, String)> = (0..m).map(|id| (1.0, format!("x_{id}"))).collect();
    row(&mut out, "card", &all_x, "=", n.saturating_sub(1) as f64);
    counts.cardinality_rows = 1;

    let mut z_names = Vec::new();
    for (id, e) in net.edges().iter().enumerate() {
        let (v, w) = (e.tail(), e.head());
        for u in (0..n).filter(|&u| u != v && u != w) {
            let (a, b) = (z(v, w, u), z(w, v, u));
            row(
                &mut out,
                &format!("link_{id}_{u}"),
                &[(1.0, format!("x_{id}")), (-1.0, a.clone()), (-1.0, b.clone())],
                "=",
                0.0,
            );
            z_names.push(a);
            z_names.push(b);
            counts.coupling_rows += 1;
        }
    }
    counts.z_vars = z_names.len();

    for (id, e) in net.edges().iter().enumerate() {
        for (v, w) in [(e.tail(), e.head()), (e.head(), e.tail())] {
            let mut terms = vec![(1.0, format!("x_{id}"))];
            terms.extend(neighbours(net, v, w).map(|u| (1.0, z(v, u, w))));
            row(&mut out, &format!("deg_{v}_{w}_{id}"), &terms, "=", 1.0);
            counts.degree_rows += 1;
        }
    }

    for id in 0..m {
        let (f, x) = (format!("f_{id}"), format!("x_{id}"));
        row(&mut out, &format!("ub_{id}"), &[(1.0, f.clone()), (-big_m, x.clone())], "<=", 0.0);
        row(&mut out, &format!("lb_{id}"), &[(1.0, f), (big_m, x)], ">=", 0.0);
        counts.big_m_rows += 2;
    }

    out.push_str("Bounds\n");
    for id in 0..m {
        let _ = writeln!(out, " f_{id} free");
    }
    out.push_str("Binaries\n");
    let binaries: Vec<String> = (0..m).map(|id| format!("x_{id}")).chain(z_names).collect();
    for chunk in binaries.chunks(8) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    (out, counts)
}

/// Other endpoints `u ∉ {v, w}` of edges at `v`, once per edge.
fn neighbours(net: &Network, v: NodeId, w: NodeId) -> impl Iterator<Item = NodeId> + '_ {
    net.incident(v)
        .iter()
        .map(move |&id: &EdgeId| net.edge(id).other(v))
        .filter(move |&u| u != v && u != w)
}

/// Writes the model to `path`.
pub fn export_martin_lp(net: &Network, path: &Path) -> io::Result<LpCounts> {
    let (text, counts) = martin_lp(net);
    fs::write(path, text)?;
    Ok(counts)
}
