use std::collections::HashMap;

use super::deck::Polarity;
use crate::elements::{Element, ElementKind, Level};

/// Index into a circuit's node table. Index 0 is ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const GROUND: NodeId = NodeId(0);

    pub fn is_ground(self) -> bool {
        self.0 == 0
    }
}

/// Case-insensitive node interner. Ground ("0") is always present at index 0;
/// other nodes are numbered in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeTable {
    names: Vec<String>,
    lookup: HashMap<String, NodeId>,
}

impl Default for NodeTable {
    fn default() -> Self {
        let mut lookup = HashMap::new();
        lookup.insert("0".to_string(), NodeId::GROUND);
        NodeTable {
            names: vec!["0".to_string()],
            lookup,
        }
    }
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> NodeId {
        let key = name.to_ascii_lowercase();
        if let Some(&id) = self.lookup.get(&key) {
            return id;
        }
        let id = NodeId(self.names.len());
        self.names.push(name.to_string());
        self.lookup.insert(key, id);
        id
    }

    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.lookup.get(&name.to_ascii_lowercase()).copied()
    }

    /// Spelling of the node's first appearance.
    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id.0]
    }

    /// Number of nodes including ground.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.len() <= 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (NodeId(i), n.as_str()))
    }
}

/// External view of a conveyor that was replaced by its macro-model, so
/// port probes keep working after expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroPorts {
    pub name: String,
    pub polarity: Polarity,
    pub y: NodeId,
    /// Element index of the 0 V source sensing the X-port current.
    pub sense: usize,
    pub ry: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub title: String,
    pub nodes: NodeTable,
    pub elements: Vec<Element>,
    pub macros: Vec<MacroPorts>,
}

impl Circuit {
    pub fn element(&self, name: &str) -> Option<(usize, &Element)> {
        self.elements
            .iter()
            .enumerate()
            .find(|(_, e)| e.name.eq_ignore_ascii_case(name))
    }

    pub fn macro_ports(&self, name: &str) -> Option<&MacroPorts> {
        self.macros.iter().find(|m| m.name.eq_ignore_ascii_case(name))
    }

    /// True when no macro-level conveyor is left to expand.
    pub fn is_expanded(&self) -> bool {
        !self
            .elements
            .iter()
            .any(|e| matches!(&e.kind, ElementKind::Conveyor(c) if c.level == Level::Macro))
    }
}
