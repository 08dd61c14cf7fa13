use crate::digraph::{conforms_to, Digraph, Sign, SignPattern, VertexId, VertexSet, Walk};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub vertex: VertexId,
    pub parent: Option<usize>,
    /// Sign of the step parent -> vertex.
    pub sign: Option<Sign>,
}

/// Rooted tree in which every root-to-leaf path is a walk realizing a prefix
/// of the tree's pattern. Leaves are kept in creation order; extending leaf
/// `j` produces leaves `2j` and `2j + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaTree {
    pub root: VertexId,
    pub nodes: Vec<TreeNode>,
    leaf_nodes: Vec<usize>,
    pub depth: usize,
}

impl SigmaTree {
    pub fn new(root: VertexId) -> Self {
        SigmaTree {
            root,
            nodes: vec![TreeNode { vertex: root, parent: None, sign: None }],
            leaf_nodes: vec![0],
            depth: 0,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    pub fn leaf_vertices(&self) -> Vec<VertexId> {
        self.leaf_nodes.iter().map(|&i| self.nodes[i].vertex).collect()
    }

    pub fn leaves(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.leaf_vertices())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.nodes.iter().map(|x| x.vertex)
    }

    /// Root-to-leaf vertex sequence for leaf `j`.
    pub fn path_to(&self, j: usize) -> Vec<VertexId> {
        let mut at = Some(self.leaf_nodes[j]);
        let mut out = Vec::with_capacity(self.depth + 1);
        while let Some(i) = at {
            out.push(self.nodes[i].vertex);
            at = self.nodes[i].parent;
        }
        out.reverse();
        out
    }

    /// Gives leaf `j` the two children `children[j]` along arcs of `sign`.
    pub fn extend(&mut self, children: &[[VertexId; 2]], sign: Sign) {
        assert_eq!(children.len(), self.leaf_nodes.len(), "one child pair per leaf");
        let mut next = Vec::with_capacity(2 * children.len());
        for (&leaf, pair) in self.leaf_nodes.iter().zip(children) {
            for &c in pair {
                self.nodes.push(TreeNode { vertex: c, parent: Some(leaf), sign: Some(sign) });
                next.push(self.nodes.len() - 1);
            }
        }
        self.leaf_nodes = next;
        self.depth += 1;
    }

    /// Every root-to-leaf path realizes the first `depth` signs of `pattern`
    /// and every stored edge sign agrees with it.
    pub fn conforms(&self, g: &Digraph, pattern: &SignPattern) -> bool {
        if self.depth == 0 {
            return self.leaf_nodes == [0];
        }
        let Ok(pre) = pattern.prefix(self.depth) else { return false };
        (0..self.leaf_count()).all(|j| {
            let path = self.path_to(j);
            path.len() == self.depth + 1 && conforms_to(g, &Walk::new(path, pre.clone()))
        }) && self.nodes.iter().all(|x| match (x.parent, x.sign) {
            (Some(p), Some(s)) => g.has_signed(self.nodes[p].vertex, s, x.vertex),
            (None, None) => true,
            _ => false,
        })
    }
}
