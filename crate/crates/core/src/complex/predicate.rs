use std::fmt;
use std::sync::Arc;

use super::ComplexError;
use crate::serre_graph::{rose, GraphBuilder, SerreGraph};

/// Finite, connected, with at least one edge.
pub fn is_suitable(g: &SerreGraph) -> bool {
    g.edge_count() > 0 && g.is_connected()
}

type Test = Arc<dyn Fn(&SerreGraph) -> bool + Send + Sync>;

/// A suitable class `Π` of link graphs. Every predicate also insists on
/// suitability, whatever the custom test says.
#[derive(Clone)]
pub enum LinkPredicate {
    /// Circles: connected, every vertex of valence 2.
    Surface,
    /// Connected, at least two vertices, no vertex of valence below 2.
    Irreducible,
    Custom { name: String, test: Test },
}

impl fmt::Debug for LinkPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinkPredicate({})", self.name())
    }
}

impl LinkPredicate {
    /// `surface` or `irreducible`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "surface" => Some(LinkPredicate::Surface),
            "irreducible" => Some(LinkPredicate::Irreducible),
            _ => None,
        }
    }

    /// Wraps a custom test after probing it on small unsuitable graphs: an
    /// edgeless vertex, two isolated vertices, and two disjoint circles.
    pub fn custom<F>(name: &str, test: F) -> Result<Self, ComplexError>
    where
        F: Fn(&SerreGraph) -> bool + Send + Sync + 'static,
    {
        let two_circles = {
            let mut b = GraphBuilder::with_vertices(4);
            for (u, v) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
                b.add_edge(u, v);
            }
            b.build()
        };
        let probes = [
            SerreGraph::empty(),
            rose(0),
            GraphBuilder::with_vertices(2).build(),
            rose(1).disjoint_union(&rose(1)),
            two_circles,
        ];
        if probes.iter().any(&test) {
            return Err(ComplexError::UnsuitablePredicate(name.to_string()));
        }
        Ok(LinkPredicate::Custom {
            name: name.to_string(),
            test: Arc::new(test),
        })
    }

    pub fn name(&self) -> &str {
        match self {
            LinkPredicate::Surface => "surface",
            LinkPredicate::Irreducible => "irreducible",
            LinkPredicate::Custom { name, .. } => name,
        }
    }

    pub fn accepts(&self, g: &SerreGraph) -> bool {
        if !is_suitable(g) {
            return false;
        }
        match self {
            LinkPredicate::Surface => g.vertices().all(|v| g.valence(v) == 2),
            LinkPredicate::Irreducible => {
                g.vertex_count() >= 2 && g.vertices().all(|v| g.valence(v) >= 2)
            }
            LinkPredicate::Custom { test, .. } => test(g),
        }
    }

    /// Bounds on vertex valence implied by the predicate, used to prune
    /// enumeration. `None` means unbounded above.
    pub fn valence_bounds(&self) -> (usize, Option<usize>) {
        match self {
            LinkPredicate::Surface => (2, Some(2)),
            LinkPredicate::Irreducible => (2, None),
            LinkPredicate::Custom { .. } => (1, None),
        }
    }
}
