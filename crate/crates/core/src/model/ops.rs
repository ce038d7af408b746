use std::collections::HashMap;

use super::{Concept, Database, Individual, ModelError, PointedDatabase, Structure};

pub fn concept_to_pointed_db(c: &Concept) -> PointedDatabase {
    c.to_pointed_db()
}

pub fn pointed_db_to_concept(p: &PointedDatabase) -> Result<Concept, ModelError> {
    Concept::from_pointed_db(p)
}

/// Product of two structures, restricted to the pairs reachable from
/// `(r1, r2)`. Node 0 of the result is the root pair; the second component
/// lists the pair behind each node.
pub fn product_structure(s1: &Structure, r1: u32, s2: &Structure, r2: u32) -> (Structure, Vec<(u32, u32)>) {
    let mut out = Structure::new();
    let mut pairs = Vec::new();
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut stack = Vec::new();
    let mut intern = |out: &mut Structure, pairs: &mut Vec<(u32, u32)>, stack: &mut Vec<u32>, p: (u32, u32)| {
        *index.entry(p).or_insert_with(|| {
            let u = out.add_node();
            pairs.push(p);
            stack.push(u);
            u
        })
    };
    intern(&mut out, &mut pairs, &mut stack, (r1, r2));
    while let Some(u) = stack.pop() {
        let (a, b) = pairs[u as usize];
        // labels: sorted intersection
        let (la, lb) = (s1.labels(a), s2.labels(b));
        let (mut i, mut j) = (0, 0);
        while i < la.len() && j < lb.len() {
            match la[i].cmp(&lb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.add_label(u, la[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        for &(r, a2) in s1.succ(a) {
            for &(q, b2) in s2.succ(b) {
                if q == r {
                    let v = intern(&mut out, &mut pairs, &mut stack, (a2, b2));
                    out.add_edge(u, r, v);
                }
            }
        }
    }
    (out, pairs)
}

/// `p1 × p2` restricted to the part reachable from the root pair.
/// Individuals are named `(a,b)`; such names lie outside the identifier
/// syntax and cannot clash with parsed input.
pub fn direct_product(p1: &PointedDatabase, p2: &PointedDatabase) -> PointedDatabase {
    let (s, pairs) = product_structure(p1.structure(), p1.root_index(), p2.structure(), p2.root_index());
    let name = |i: u32| {
        let (a, b) = pairs[i as usize];
        Individual::internal(&format!("({},{})", p1.db.name(a), p2.db.name(b)))
    };
    let root = name(0);
    let db = Database::from_structure(s, name);
    PointedDatabase::new(db, root)
}

/// The unraveling of `p` truncated at `depth`, as a tree-shaped pointed
/// database with individuals named by preorder position.
pub fn unravel(p: &PointedDatabase, depth: usize) -> PointedDatabase {
    Concept::unravel(p.structure(), p.root_index(), depth).to_pointed_db()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ind, Database};

    fn pdb(text: &str, root: &str) -> PointedDatabase {
        PointedDatabase::new(Database::parse(text).unwrap(), ind(root))
    }

    #[test]
    fn product_intersects_labels() {
        let p = direct_product(&pdb("A(a)", "a"), &pdb("A(b)\nB(b)", "b"));
        assert_eq!(p.db.to_string(), "A((a,b))\n");
        assert_eq!(p.root.as_str(), "(a,b)");
    }

    #[test]
    fn product_pairs_edges_componentwise() {
        let p = direct_product(&pdb("r(a,a)", "a"), &pdb("r(b,c)", "b"));
        assert_eq!(p.db.to_string(), "r((a,b),(a,c))\n");
    }

    #[test]
    fn product_drops_unreachable_pairs() {
        let p = direct_product(&pdb("r(a,b)\nA(c)", "a"), &pdb("r(x,y)\nA(z)", "x"));
        assert_eq!(p.db.adom().len(), 2);
    }

    #[test]
    fn unravel_tree_is_identity_on_reachable_part() {
        let p = pdb("r(a,b)\nB(b)\ns(a,c)\nA(z)", "a");
        let u = unravel(&p, 5);
        let c = pointed_db_to_concept(&u).unwrap();
        assert_eq!(c.to_string(), "(and (ex r B) (ex s top))");
    }

    #[test]
    fn unravel_depth_zero_keeps_root_labels() {
        let p = pdb("A(a)\nr(a,a)", "a");
        let u = unravel(&p, 0);
        assert_eq!(u.db.to_string(), "A(a0)\n");
    }
}
