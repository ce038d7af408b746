use std::collections::VecDeque;

use super::{ConceptName, RoleName, Signature};

/// A database over anonymous, densely numbered individuals.
///
/// This is the working representation for simulations, products and
/// saturation. [`super::Database`] attaches names to the nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Structure {
    labels: Vec<Vec<ConceptName>>,
    succ: Vec<Vec<(RoleName, u32)>>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes(n: usize) -> Self {
        Structure {
            labels: vec![Vec::new(); n],
            succ: vec![Vec::new(); n],
        }
    }

    pub fn add_node(&mut self) -> u32 {
        self.labels.push(Vec::new());
        self.succ.push(Vec::new());
        (self.labels.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Adds `A(u)`; returns false if it was already present.
    pub fn add_label(&mut self, u: u32, a: ConceptName) -> bool {
        let row = &mut self.labels[u as usize];
        match row.binary_search(&a) {
            Ok(_) => false,
            Err(pos) => {
                row.insert(pos, a);
                true
            }
        }
    }

    /// Adds `r(u, v)`; returns false if it was already present.
    pub fn add_edge(&mut self, u: u32, r: RoleName, v: u32) -> bool {
        let row = &mut self.succ[u as usize];
        match row.binary_search(&(r, v)) {
            Ok(_) => false,
            Err(pos) => {
                row.insert(pos, (r, v));
                true
            }
        }
    }

    pub fn labels(&self, u: u32) -> &[ConceptName] {
        &self.labels[u as usize]
    }

    pub fn succ(&self, u: u32) -> &[(RoleName, u32)] {
        &self.succ[u as usize]
    }

    pub fn has_label(&self, u: u32, a: ConceptName) -> bool {
        self.labels[u as usize].binary_search(&a).is_ok()
    }

    pub fn has_edge(&self, u: u32, r: RoleName, v: u32) -> bool {
        self.succ[u as usize].binary_search(&(r, v)).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> {
        0..self.labels.len() as u32
    }

    pub fn concept_assertion_count(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn role_assertion_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn assertion_count(&self) -> usize {
        self.concept_assertion_count() + self.role_assertion_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, RoleName, u32)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&(r, v)| (u as u32, r, v)))
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for row in &self.labels {
            sig.concepts.extend(row.iter().copied());
        }
        for row in &self.succ {
            sig.roles.extend(row.iter().map(|&(r, _)| r));
        }
        sig
    }

    /// Predecessor lists: `pred[v]` holds every `(r, u)` with `r(u, v)`.
    pub fn predecessors(&self) -> Vec<Vec<(RoleName, u32)>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (u, r, v) in self.edges() {
            pred[v as usize].push((r, u));
        }
        pred
    }

    /// BFS distances from `root` following edges whose role passes
    /// `follow`. Unreachable nodes get `None`.
    pub fn distances(&self, root: u32, follow: impl Fn(RoleName) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[root as usize] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].expect("queued nodes have a distance");
            for &(r, v) in self.succ(u) {
                if follow(r) && dist[v as usize].is_none() {
                    dist[v as usize] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Keeps the nodes flagged in `keep` (renumbered in order) together
    /// with the labels passing `keep_label`, and the edges between kept
    /// nodes passing `keep_edge`. Returns the new structure and the
    /// old-to-new index map.
    pub fn restrict(
        &self,
        keep: &[bool],
        keep_label: impl Fn(ConceptName) -> bool,
        keep_edge: impl Fn(u32, RoleName, u32) -> bool,
    ) -> (Structure, Vec<Option<u32>>) {
        let mut map = vec![None; self.len()];
        let mut out = Structure::new();
        for u in self.nodes() {
            if keep[u as usize] {
                map[u as usize] = Some(out.add_node());
            }
        }
        for u in self.nodes() {
            let Some(nu) = map[u as usize] else { continue };
            out.labels[nu as usize] = self
                .labels(u)
                .iter()
                .copied()
                .filter(|&a| keep_label(a))
                .collect();
            out.succ[nu as usize] = self
                .succ(u)
                .iter()
                .filter_map(|&(r, v)| match map[v as usize] {
                    Some(nv) if keep_edge(u, r, v) => Some((r, nv)),
                    _ => None,
                })
                .collect();
            out.succ[nu as usize].sort_unstable();
        }
        (out, map)
    }

    /// True if the nodes reachable from `root` (via edges passing
    /// `follow`) induce an acyclic graph.
    pub fn is_dag_from(&self, root: u32, follow: impl Fn(RoleName) -> bool) -> bool {
        // iterative DFS with three colours
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut colour = vec![WHITE; self.len()];
        let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
        colour[root as usize] = GREY;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let row = self.succ(u);
            let mut advanced = false;
            while *next < row.len() {
                let (r, v) = row[*next];
                *next += 1;
                if !follow(r) {
                    continue;
                }
                match colour[v as usize] {
                    GREY => return false,
                    WHITE => {
                        colour[v as usize] = GREY;
                        stack.push((v, 0));
                        advanced = true;
                        break;
                    }
                    _ => {}
                }
            }
            if !advanced {
                colour[u as usize] = BLACK;
                stack.pop();
            }
        }
        true
    }

    /// True if every node is reachable from `root`, `root` has no incoming
    /// edge, and every other node has exactly one.
    pub fn is_tree_from(&self, root: u32) -> bool {
        let mut indeg = vec![0usize; self.len()];
        for (_, _, v) in self.edges() {
            indeg[v as usize] += 1;
        }
        if indeg[root as usize] != 0 {
            return false;
        }
        if self.nodes().any(|u| u != root && indeg[u as usize] != 1) {
            return false;
        }
        self.distances(root, |_| true).iter().all(Option::is_some)
    }

    /// Disjoint union; returns the offset at which `other`'s nodes start.
    pub fn append(&mut self, other: &Structure) -> u32 {
        let offset = self.len() as u32;
        self.labels.extend(other.labels.iter().cloned());
        for row in &other.succ {
            self.succ
                .push(row.iter().map(|&(r, v)| (r, v + offset)).collect());
        }
        offset
    }
}
