use std::collections::BTreeMap;

use crate::model::{Label, LabeledExampleSet, Signature, Structure};

use super::catalog::VarCatalog;
use super::symmetry::rooted_trees;

/// Symmetry clauses are only emitted below this round bound.
pub const SYMMETRY_LIMIT: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeOptions {
    pub symmetry: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions { symmetry: true }
    }
}

/// A CNF instance for one round, clauses in DIMACS literal form.
#[derive(Clone, Debug)]
pub struct CnfInstance {
    pub catalog: VarCatalog,
    pub clauses: Vec<Vec<i32>>,
    /// Clause counts per group: `"1"` … `"12"`, `"sym"`, `"units"`.
    pub stats: BTreeMap<String, usize>,
    /// Disjoint union of the example databases.
    pub domain: Structure,
    /// Root of each example in `domain`, with its label.
    pub roots: Vec<(u32, Label)>,
}

impl CnfInstance {
    pub fn num_vars(&self) -> u32 {
        self.catalog.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

struct Builder {
    clauses: Vec<Vec<i32>>,
    stats: BTreeMap<String, usize>,
}

impl Builder {
    fn add(&mut self, group: &str, clause: Vec<i32>) {
        debug_assert!(!clause.is_empty());
        *self.stats.entry(group.to_string()).or_default() += 1;
        self.clauses.push(clause);
    }
}

/// Disjoint union of the example databases; returns the structure, the
/// origin of each element and the indexed roots.
pub fn disjoint_union(e: &LabeledExampleSet) -> (Structure, Vec<(usize, crate::model::Individual)>, Vec<(u32, Label)>) {
    let mut s = Structure::new();
    let mut origin = Vec::new();
    let mut roots = Vec::new();
    for (k, x) in e.examples.iter().enumerate() {
        let off = s.append(x.example.structure());
        origin.extend(x.example.db.adom().iter().map(|&a| (k, a)));
        roots.push((off + x.example.root_index(), x.label));
    }
    (s, origin, roots)
}

/// The propositional instance for round `n`: satisfiable iff some ELQ over
/// `sigma` with at most `n−1` existential restrictions fits `e`.
pub fn build_cnf(e: &LabeledExampleSet, sigma: &Signature, n: u32, opts: EncodeOptions) -> CnfInstance {
    let (domain, origin, roots) = disjoint_union(e);
    let mut cat = VarCatalog::new(n, sigma, &domain, origin);
    let mut b = Builder {
        clauses: Vec::new(),
        stats: BTreeMap::new(),
    };
    let nc = cat.concepts.len();
    let nr = cat.roles.len();
    let m = cat.adom_len();

    // z: no node besides the root is used, which admits queries with no
    // restriction at all
    let z = if n >= 2 { Some(cat.add_z() as i32) } else { None };

    for i in 2..=n {
        let mut c1: Vec<i32> = (1..i).map(|j| cat.y(j, i)).collect();
        c1.extend(z);
        b.add("1", c1);
        for j1 in 1..i {
            for j2 in j1 + 1..i {
                b.add("2", vec![-cat.y(j1, i), -cat.y(j2, i)]);
            }
        }
        let mut c3: Vec<i32> = (0..nr).map(|r| cat.x(i, r)).collect();
        c3.extend(z);
        b.add("3", c3);
        for r1 in 0..nr {
            for r2 in r1 + 1..nr {
                b.add("4", vec![-cat.x(i, r1), -cat.x(i, r2)]);
            }
        }
        if let Some(z) = z {
            for j in 1..i {
                b.add("z", vec![-z, -cat.y(j, i)]);
            }
        }
    }

    // type linking: t(i,τ) iff the names of C_i lie within τ
    for i in 1..=n {
        for (k, tau) in cat.types.iter().enumerate() {
            let t = cat.t(i, k as u32);
            let outside: Vec<usize> = (0..nc).filter(|&a| !tau.contains(&cat.concepts[a])).collect();
            for &a in &outside {
                b.add("5", vec![-t, -cat.c(i, a)]);
            }
            let mut c6 = vec![t];
            c6.extend(outside.iter().map(|&a| cat.c(i, a)));
            b.add("6", c6);
        }
    }

    let role_index = |r| cat.roles.iter().position(|&q| q == r);
    for i in 1..=n {
        for a in 0..m {
            let ta = cat.t(i, cat.type_of[a as usize]);
            b.add("7", vec![-cat.s(i, a), ta]);
            let mut c8 = vec![cat.s(i, a), -ta];
            c8.extend((i + 1..=n).map(|k| cat.d(i, k, a)));
            b.add("8", c8);
        }
    }
    for j in 2..=n {
        for i in 1..j {
            for r in 0..nr {
                for a in 0..m {
                    let mut c9 = vec![cat.d(i, j, a), -cat.y(i, j), -cat.x(j, r)];
                    c9.extend(
                        domain
                            .succ(a)
                            .iter()
                            .filter(|&&(q, _)| q == cat.roles[r])
                            .map(|&(_, c)| cat.s(j, c)),
                    );
                    b.add("9", c9);
                }
            }
            for a in 0..m {
                b.add("10", vec![-cat.s(i, a), -cat.d(i, j, a)]);
                b.add("11", vec![-cat.d(i, j, a), cat.y(i, j)]);
            }
            for (a, r, c) in domain.edges() {
                if let Some(r) = role_index(r) {
                    b.add("12", vec![-cat.d(i, j, a), -cat.x(j, r), -cat.s(j, c)]);
                }
            }
        }
    }

    for &(root, label) in &roots {
        let s = cat.s(1, root);
        b.add("units", vec![if label.is_positive() { s } else { -s }]);
    }

    if opts.symmetry && (2..SYMMETRY_LIMIT).contains(&n) {
        let mut big = Vec::new();
        for shape in rooted_trees(n as usize) {
            let g = cat.add_selector() as i32;
            big.push(g);
            for (k, &p) in shape.parents().iter().enumerate() {
                b.add("sym", vec![-g, cat.y(p, k as u32 + 2)]);
            }
        }
        big.extend(z);
        b.add("sym", big);
    }

    CnfInstance {
        catalog: cat,
        clauses: b.clauses,
        stats: b.stats,
        domain,
        roots,
    }
}
