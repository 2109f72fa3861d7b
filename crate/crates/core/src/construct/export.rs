//! JSON and DOT serialization of constructed graphs.

use serde_json::{json, Value};

use super::{GraphVariant, LowerBoundGraph, NodeId, NodeLabel};

/// Human-readable node name, e.g. `v1_2`, `s(2,1)_(3,1)`, or `v1_2.1` for
/// expansion slot 1.
pub fn node_name(g: &LowerBoundGraph, v: usize) -> String {
    let NodeLabel { id, slot } = g.label(v);
    let quadratic_ids = g.variant() != GraphVariant::Linear;
    let mut name = match id {
        NodeId::Clique { player, copy, m } => {
            if quadratic_ids {
                format!("v({player},{copy})_{m}")
            } else {
                format!("v{player}_{m}")
            }
        }
        NodeId::Code { player, copy, h, r } => {
            if quadratic_ids {
                format!("s({player},{copy})_({h},{r})")
            } else {
                format!("s{player}_({h},{r})")
            }
        }
    };
    if slot > 0 {
        name.push_str(&format!(".{slot}"));
    }
    name
}

fn role_json(id: NodeId) -> Value {
    match id {
        NodeId::Clique { m, .. } => json!({ "kind": "clique", "m": m }),
        NodeId::Code { h, r, .. } => json!({ "kind": "code", "h": h, "r": r }),
    }
}

/// Full graph as a JSON value: parameters, node records, edge list, player
/// partition, and the cut.
pub fn graph_json(g: &LowerBoundGraph) -> Value {
    let nodes: Vec<Value> = (0..g.node_count())
        .map(|v| {
            let NodeLabel { id, slot } = g.label(v);
            json!({
                "id": v,
                "name": node_name(g, v),
                "player": id.player(),
                "copy": id.copy(),
                "role": role_json(id),
                "slot": slot,
                "weight": g.weight(v),
            })
        })
        .collect();
    let edges: Vec<Value> = g.all_edges().iter().map(|&(u, v)| json!([u, v])).collect();
    let mut partition = serde_json::Map::new();
    for i in 1..=g.t() {
        partition.insert(i.to_string(), json!(g.player_nodes(i)));
    }
    let cut: Vec<Value> = g.cut_edges().iter().map(|&(u, v)| json!([u, v])).collect();
    json!({
        "params": g.params().describe(),
        "t": g.t(),
        "variant": g.variant(),
        "node_count": g.node_count(),
        "edge_count": g.edge_count(),
        "nodes": nodes,
        "edges": edges,
        "partition": Value::Object(partition),
        "cut": cut,
    })
}

const PLAYER_COLORS: [&str; 6] = [
    "lightblue", "lightpink", "lightgreen", "khaki", "plum", "lightsalmon",
];

/// DOT rendering: one filled cluster per player, box-shaped message-clique
/// nodes, ellipse code nodes, dashed cut edges.
pub fn graph_dot(g: &LowerBoundGraph) -> String {
    let mut out = String::from("graph lower_bound_graph {\n");
    out.push_str("  overlap=false;\n  node [fontsize=10];\n");
    for i in 1..=g.t() {
        let color = PLAYER_COLORS[(i as usize - 1) % PLAYER_COLORS.len()];
        out.push_str(&format!(
            "  subgraph cluster_player_{i} {{\n    label=\"player {i}\";\n    style=filled;\n    color={color};\n"
        ));
        for v in g.player_nodes(i) {
            let shape = match g.label(v).id {
                NodeId::Clique { .. } => "box",
                NodeId::Code { .. } => "ellipse",
            };
            let weight = g.weight(v);
            let label = if weight == 1 {
                node_name(g, v)
            } else {
                format!("{} w={}", node_name(g, v), weight)
            };
            out.push_str(&format!(
                "    n{v} [label=\"{label}\", shape={shape}];\n"
            ));
        }
        out.push_str("  }\n");
    }
    let cut: std::collections::BTreeSet<(usize, usize)> =
        g.cut_edges().iter().copied().collect();
    for (u, v) in g.all_edges() {
        if cut.contains(&(u, v)) {
            out.push_str(&format!("  n{u} -- n{v} [style=dashed];\n"));
        } else {
            out.push_str(&format!("  n{u} -- n{v};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegadget::{cyclic_shift_table, make_params, Backend};
    use crate::construct::{build_linear_fixed, build_linear_instance, expand_unweighted};
    use crate::instances::{make_intersecting, InstanceShape};

    fn sample() -> LowerBoundGraph {
        let p = make_params(2, 1, Backend::ExplicitTable(cyclic_shift_table(3)), true).unwrap();
        let inst = make_intersecting(2, 3, InstanceShape::Linear, 1, 0.0, 0).unwrap();
        build_linear_instance(&p, 2, &inst).unwrap()
    }

    #[test]
    fn json_shape() {
        let g = sample();
        let v = graph_json(&g);
        assert_eq!(v["node_count"], 24);
        assert_eq!(v["edge_count"], 78);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 24);
        assert_eq!(v["edges"].as_array().unwrap().len(), 78);
        assert_eq!(v["cut"].as_array().unwrap().len(), 18);
        assert_eq!(v["partition"]["1"].as_array().unwrap().len(), 12);
        assert_eq!(v["partition"]["2"].as_array().unwrap().len(), 12);
        assert_eq!(v["variant"], "linear");
        // Node 0 is v1_1 with weight ell.
        assert_eq!(v["nodes"][0]["name"], "v1_1");
        assert_eq!(v["nodes"][0]["weight"], 2);
        assert_eq!(v["nodes"][0]["role"]["kind"], "clique");
    }

    #[test]
    fn dot_shape() {
        let g = sample();
        let dot = graph_dot(&g);
        assert!(dot.starts_with("graph lower_bound_graph {"));
        assert!(dot.contains("subgraph cluster_player_1"));
        assert!(dot.contains("subgraph cluster_player_2"));
        assert!(dot.contains("v1_1 w=2"));
        assert_eq!(dot.matches("style=dashed").count(), 18);
        assert_eq!(dot.matches(" -- ").count(), 78);
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn names_cover_variants() {
        let p = make_params(2, 1, Backend::ExplicitTable(cyclic_shift_table(3)), true).unwrap();
        let g = build_linear_fixed(&p, 2).unwrap();
        assert_eq!(node_name(&g, 0), "v1_1");
        assert_eq!(node_name(&g, 3), "s1_(1,1)");
        let e = expand_unweighted(&sample()).unwrap();
        // Slot-1 names carry the suffix.
        let names: Vec<String> = (0..e.node_count()).map(|v| node_name(&e, v)).collect();
        assert!(names.iter().any(|n| n.ends_with(".1")));
    }
}
