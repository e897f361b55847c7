//! Naming conventions shared by the graph builder and the executors.
//!
//! A read instance is identified everywhere by `(node, port, iteration
//! vector)`. The sequential interpreter emits trace events under these
//! names and the graph builder assigns them to node inputs, so the two
//! sides must derive them from the program text in exactly the same
//! way. That derivation lives here and nowhere else.

/// Name of the node holding an array's initial contents.
pub fn input_node(array: &str) -> String {
    format!("{array}_ini")
}

/// Name of the node observing an array's final contents.
pub fn output_node(array: &str) -> String {
    format!("{array}_out")
}

/// Name of the node evaluating the `k`-th data-dependent condition
/// (textual order, counted from zero).
pub fn pred_node(ordinal: usize) -> String {
    format!("P{ordinal}")
}

/// The node that seeds execution: it feeds every node whose statement
/// reads nothing, so that even constant assignments have a trigger.
pub const START: &str = "Start";

/// Input port names for a node, one per read occurrence in textual
/// order. Each port is the read array's name lowercased plus a 1-based
/// counter; the counter is kept per lowercased stem so that arrays
/// whose names differ only by case still get distinct ports.
pub fn read_ports<'a>(reads: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut seen: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    reads
        .into_iter()
        .map(|name| {
            let stem = name.to_lowercase();
            let k = seen.entry(stem.clone()).or_insert(0);
            *k += 1;
            format!("{stem}{k}")
        })
        .collect()
}

/// Port carrying the boolean verdict of a condition node.
pub const VERDICT_PORT: &str = "val";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ports_count_per_stem() {
        let ports = read_ports(vec!["S", "X", "X"]);
        assert_eq!(ports, vec!["s1", "x1", "x2"]);
    }

    #[test]
    fn case_collisions_stay_distinct() {
        let ports = read_ports(vec!["X", "x", "X"]);
        assert_eq!(ports, vec!["x1", "x2", "x3"]);
    }
}
