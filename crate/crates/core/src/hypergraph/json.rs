use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Edge, EdgeId, Hypergraph, HypergraphError, NodeId};

/// Wire form of a hypergraph: string ids, attachments by node id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphDoc {
    pub nodes: Vec<String>,
    pub ext: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub label: String,
    pub att: Vec<String>,
}

impl Hypergraph {
    /// Serializes with ids `v0, v1, …` and `e0, e1, …`.
    pub fn to_doc(&self) -> HypergraphDoc {
        HypergraphDoc {
            nodes: self.nodes().map(|n| n.to_string()).collect(),
            ext: self.ext.iter().map(|n| n.to_string()).collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeDoc {
                    id: EdgeId(i).to_string(),
                    label: e.label.to_string(),
                    att: e.att.iter().map(|n| n.to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &HypergraphDoc) -> Result<Self, HypergraphError> {
        Self::from_doc_with_edge_ids(doc).map(|(h, _)| h)
    }

    /// Also returns the mapping from the document's edge ids to dense ids.
    pub fn from_doc_with_edge_ids(
        doc: &HypergraphDoc,
    ) -> Result<(Self, HashMap<String, EdgeId>), HypergraphError> {
        let mut nodes = HashMap::with_capacity(doc.nodes.len());
        for (i, name) in doc.nodes.iter().enumerate() {
            if nodes.insert(name.as_str(), NodeId(i)).is_some() {
                return Err(HypergraphError::DuplicateNodeId(name.clone()));
            }
        }
        let lookup = |name: &String| {
            nodes
                .get(name.as_str())
                .copied()
                .ok_or_else(|| HypergraphError::UnknownNodeId(name.clone()))
        };
        let mut edge_ids = HashMap::with_capacity(doc.edges.len());
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (i, e) in doc.edges.iter().enumerate() {
            if edge_ids.insert(e.id.clone(), EdgeId(i)).is_some() {
                return Err(HypergraphError::DuplicateEdgeId(e.id.clone()));
            }
            let att = e.att.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
            edges.push(Edge::new(e.label.as_str(), att));
        }
        let ext = doc.ext.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        Ok((Hypergraph::new(doc.nodes.len(), edges, ext), edge_ids))
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = HypergraphDoc::deserialize(deserializer)?;
        Hypergraph::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}
