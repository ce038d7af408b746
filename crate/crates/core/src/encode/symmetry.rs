//! Rooted unordered trees and their canonical numbering.

/// A rooted unordered tree in canonical form: children sorted by
/// `(size, encoding)` descending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape {
    pub children: Vec<Shape>,
}

impl Shape {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Shape::size).sum::<usize>()
    }

    /// Parenthesis encoding, e.g. `(()())`.
    pub fn encoding(&self) -> String {
        let mut s = String::from("(");
        for c in &self.children {
            s.push_str(&c.encoding());
        }
        s.push(')');
        s
    }

    /// BFS numbering from 1 with children visited in canonical order.
    /// Entry `i` of the result is the parent of node `i + 2`.
    pub fn parents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::from([(self, 1u32)]);
        let mut next = 2u32;
        while let Some((t, id)) = queue.pop_front() {
            for c in &t.children {
                out.push(id);
                queue.push_back((c, next));
                next += 1;
            }
        }
        out
    }
}

fn key(t: &Shape) -> (usize, String) {
    (t.size(), t.encoding())
}

/// All rooted unordered trees with `n ≥ 1` nodes, each exactly once.
pub fn rooted_trees(n: usize) -> Vec<Shape> {
    let mut by_size: Vec<Vec<Shape>> = vec![Vec::new(), vec![Shape { children: Vec::new() }]];
    for m in 2..=n {
        let mut out = Vec::new();
        let mut forest = Vec::new();
        forests(m - 1, None, &by_size, &mut forest, &mut out);
        out.sort_by_key(key);
        by_size.push(out);
    }
    by_size.swap_remove(n)
}

/// Enumerates multisets of trees with `total` nodes as non-increasing
/// sequences under `(size, index)`.
fn forests(
    total: usize,
    bound: Option<(usize, usize)>,
    by_size: &[Vec<Shape>],
    forest: &mut Vec<Shape>,
    out: &mut Vec<Shape>,
) {
    if total == 0 {
        let mut children = forest.clone();
        children.sort_by_key(|t| std::cmp::Reverse(key(t)));
        out.push(Shape { children });
        return;
    }
    let max_size = bound.map_or(total, |(s, _)| s.min(total));
    for size in (1..=max_size).rev() {
        let count = by_size[size].len();
        let max_idx = match bound {
            Some((s, i)) if s == size => i + 1,
            _ => count,
        };
        for idx in 0..max_idx {
            forest.push(by_size[size][idx].clone());
            forests(total - size, Some((size, idx)), by_size, forest, out);
            forest.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_rooted_tree_sequence() {
        let expected = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842];
        for (k, &c) in expected.iter().enumerate() {
            let ts = rooted_trees(k + 1);
            assert_eq!(ts.len(), c, "n={}", k + 1);
            let mut enc: Vec<String> = ts.iter().map(Shape::encoding).collect();
            enc.sort();
            enc.dedup();
            assert_eq!(enc.len(), c);
        }
    }

    #[test]
    fn three_nodes() {
        let ts = rooted_trees(3);
        let ps: Vec<Vec<u32>> = ts.iter().map(Shape::parents).collect();
        assert!(ps.contains(&vec![1, 2]));
        assert!(ps.contains(&vec![1, 1]));
    }

    #[test]
    fn parents_precede_children() {
        for t in rooted_trees(7) {
            for (k, &p) in t.parents().iter().enumerate() {
                assert!(p < k as u32 + 2);
            }
        }
    }
}
