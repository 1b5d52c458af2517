//! DOT rendering of space expression trees.
//!
//! Operator nodes (SEQ/PAR/AGG/σ and the set combinators) are diamonds,
//! primitive leaves are boxes, and every composite subtree sits inside a
//! dashed cluster mirroring the usual box-diagram presentation. Node and
//! cluster ids are assigned in preorder, so output is byte-stable.

use cspace_core::dsl::pretty;
use cspace_core::dsl::Scope;
use cspace_core::space::{Space, SpaceKind};

pub fn space_to_dot(space: &Space, scope: Option<&Scope>) -> String {
    let mut w = Writer {
        out: String::new(),
        scope,
        next_node: 0,
        next_cluster: 0,
        edges: Vec::new(),
    };
    w.out.push_str("digraph space {\n");
    w.out.push_str("  rankdir=TB;\n");
    w.out.push_str("  node [fontname=\"Helvetica\"];\n");
    w.emit(space, 1);
    for e in &w.edges {
        w.out.push_str(e);
    }
    w.out.push_str("}\n");
    w.out
}

struct Writer<'a> {
    out: String,
    scope: Option<&'a Scope>,
    next_node: usize,
    next_cluster: usize,
    edges: Vec<String>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl<'a> Writer<'a> {
    fn indent(&mut self, depth: usize) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
    }

    fn leaf(&mut self, label: &str, depth: usize) -> usize {
        let id = self.next_node;
        self.next_node += 1;
        self.indent(depth);
        self.out
            .push_str(&format!("n{id} [label=\"{}\", shape=box];\n", escape(label)));
        id
    }

    fn operator(&mut self, label: &str, depth: usize) -> usize {
        let id = self.next_node;
        self.next_node += 1;
        self.indent(depth);
        self.out.push_str(&format!(
            "n{id} [label=\"{}\", shape=diamond];\n",
            escape(label)
        ));
        id
    }

    fn open_cluster(&mut self, space: &Space, depth: usize) {
        let id = self.next_cluster;
        self.next_cluster += 1;
        self.indent(depth);
        self.out.push_str(&format!("subgraph cluster{id} {{\n"));
        self.indent(depth + 1);
        self.out.push_str("style=dashed;\n");
        if let Some(name) = self.scope.and_then(|sc| sc.name_of(space)) {
            self.indent(depth + 1);
            self.out
                .push_str(&format!("label=\"{}\";\n", escape(name)));
        }
    }

    fn close_cluster(&mut self, depth: usize) {
        self.indent(depth);
        self.out.push_str("}\n");
    }

    fn edge(&mut self, from: usize, to: usize) {
        self.edges.push(format!("  n{from} -> n{to};\n"));
    }

    fn emit(&mut self, space: &Space, depth: usize) -> usize {
        match space.kind() {
            SpaceKind::Empty => self.leaf("empty", depth),
            SpaceKind::Primitive(label) => self.leaf(&label.clone(), depth),
            SpaceKind::Sequential(_) | SpaceKind::Parallel(_) | SpaceKind::Aggregated(_) => {
                let tag = match space.kind() {
                    SpaceKind::Sequential(_) => "SEQ",
                    SpaceKind::Parallel(_) => "PAR",
                    _ => "AGG",
                };
                self.open_cluster(space, depth);
                let id = self.operator(tag, depth + 1);
                let children: Vec<Space> = space.operands().to_vec();
                for child in &children {
                    let cid = self.emit(child, depth + 1);
                    self.edge(id, cid);
                }
                self.close_cluster(depth);
                id
            }
            SpaceKind::Reduced { base, formula } => {
                let label = format!("σ[{}]", pretty::formula_text(formula, self.scope));
                self.open_cluster(space, depth);
                let id = self.operator(&label, depth + 1);
                let base = base.clone();
                let cid = self.emit(&base, depth + 1);
                self.edge(id, cid);
                self.close_cluster(depth);
                id
            }
            SpaceKind::Intersect(a, b) => {
                let (a, b) = (a.clone(), b.clone());
                self.open_cluster(space, depth);
                let id = self.operator("INTERSECT", depth + 1);
                let ca = self.emit(&a, depth + 1);
                let cb = self.emit(&b, depth + 1);
                self.edge(id, ca);
                self.edge(id, cb);
                self.close_cluster(depth);
                id
            }
            SpaceKind::Difference(a, b) => {
                let (a, b) = (a.clone(), b.clone());
                self.open_cluster(space, depth);
                let id = self.operator("DIFFERENCE", depth + 1);
                let ca = self.emit(&a, depth + 1);
                let cb = self.emit(&b, depth + 1);
                self.edge(id, ca);
                self.edge(id, cb);
                self.close_cluster(depth);
                id
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cspace_core::compose::{agg, par, seq};

    #[test]
    fn expanded_second_order_tree_has_the_expected_shape() {
        let p: Vec<Space> = (1..=5).map(|i| Space::primitive(format!("S{i}"))).collect();
        let s6 = seq(&[p[0].clone(), p[1].clone()]).unwrap();
        let s7 = agg(&[p[2].clone(), p[3].clone()]).unwrap();
        let s8 = par(&[p[4].clone(), s6, s7]).unwrap();
        let dot = space_to_dot(&s8, None);
        assert_eq!(dot.matches("shape=diamond").count(), 3);
        assert_eq!(dot.matches("shape=box").count(), 5);
        assert_eq!(dot.matches("->").count(), 7);
        assert_eq!(dot, space_to_dot(&s8, None));
    }

    #[test]
    fn primitive_renders_as_a_single_node() {
        let dot = space_to_dot(&Space::primitive("S1"), None);
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches("->").count(), 0);
    }
}
