//! Σ-simulation duals of pointed databases whose reachable Σ-part is a DAG.

use thiserror::Error;

use crate::model::{ind, Concept, ConceptName, Database, Individual, PointedDatabase, RoleName, Signature, Structure};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualError {
    #[error("no finite dual: the reachable Σ-part is cyclic")]
    NoFiniteDual,
}

/// A finite Σ-simulation dual of `source`.
#[derive(Clone, Debug)]
pub struct DualSet {
    pub members: Vec<PointedDatabase>,
    pub source: PointedDatabase,
    pub sigma: Signature,
    /// For every individual of the dual database other than `btop`: the
    /// source individual and assertion it stands for.
    pub manifest: Vec<(Individual, String)>,
}

impl DualSet {
    /// `||M||`: total number of assertions over all members.
    pub fn size(&self) -> usize {
        self.members.iter().map(|m| m.db.size()).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `D^{↓a}_Σ`: individuals reachable from the root along Σ-roles, with
/// only Σ-assertions kept. Node 0 of the result is the root.
fn reachable_sigma_part(p: &PointedDatabase, sigma: &Signature) -> (Structure, Vec<u32>) {
    let s = p.structure();
    let dist = s.distances(p.root_index(), |r| sigma.has_role(r));
    // BFS order puts the root first
    let mut order: Vec<u32> = s.nodes().filter(|&u| dist[u as usize].is_some()).collect();
    order.sort_by_key(|&u| (dist[u as usize], u));
    let mut index = vec![None; s.len()];
    let mut out = Structure::with_nodes(order.len());
    for (k, &u) in order.iter().enumerate() {
        index[u as usize] = Some(k as u32);
    }
    for (k, &u) in order.iter().enumerate() {
        for &a in s.labels(u) {
            if sigma.has_concept(a) {
                out.add_label(k as u32, a);
            }
        }
        for &(r, v) in s.succ(u) {
            if sigma.has_role(r) {
                out.add_edge(k as u32, r, index[v as usize].expect("reachable"));
            }
        }
    }
    (out, order)
}

pub fn is_dag_reachable(p: &PointedDatabase, sigma: &Signature) -> bool {
    p.structure().is_dag_from(p.root_index(), |r| sigma.has_role(r))
}

enum Elem {
    Top,
    Label(u32, ConceptName),
    Edge(u32, RoleName, u32),
}

/// Builds `D*` and returns the members `(D*, ⟨a,α⟩)` for the assertions
/// `α` mentioning the root, each cut down to its reachable part.
pub fn simulation_dual(p: &PointedDatabase, sigma: &Signature) -> Result<DualSet, DualError> {
    if !is_dag_reachable(p, sigma) {
        return Err(DualError::NoFiniteDual);
    }
    let (d, order) = reachable_sigma_part(p, sigma);
    let mut elems = vec![Elem::Top];
    let mut of_node: Vec<Vec<u32>> = vec![Vec::new(); d.len()];
    for b in d.nodes() {
        for &a in d.labels(b) {
            of_node[b as usize].push(elems.len() as u32);
            elems.push(Elem::Label(b, a));
        }
        for &(r, c) in d.succ(b) {
            of_node[b as usize].push(elems.len() as u32);
            elems.push(Elem::Edge(b, r, c));
        }
    }

    let mut star = Structure::with_nodes(elems.len());
    let top = 0u32;
    for &b in &sigma.concepts {
        star.add_label(top, b); // (i)
    }
    for &s in &sigma.roles {
        star.add_edge(top, s, top); // (ii)
    }
    for (k, e) in elems.iter().enumerate() {
        let k = k as u32;
        match *e {
            Elem::Top => {}
            Elem::Label(_, a) => {
                for &b in &sigma.concepts {
                    if b != a {
                        star.add_label(k, b); // (iii)
                    }
                }
                for &s in &sigma.roles {
                    star.add_edge(k, s, top); // (iv)
                }
            }
            Elem::Edge(_, r, c) => {
                for &b in &sigma.concepts {
                    star.add_label(k, b); // (v)
                }
                for &s in &sigma.roles {
                    if s != r {
                        star.add_edge(k, s, top); // (vi)
                    }
                }
                for &t in &of_node[c as usize] {
                    star.add_edge(k, r, t); // (vii)
                }
            }
        }
    }

    let name = |k: u32| if k == 0 { ind("btop") } else { ind(&format!("d{k}")) };
    let source_name = |b: u32| p.db.name(order[b as usize]);
    let manifest = elems
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, e)| {
            let desc = match *e {
                Elem::Label(b, a) => format!("{}: {a}({})", source_name(b), source_name(b)),
                Elem::Edge(b, r, c) => format!("{}: {r}({},{})", source_name(b), source_name(b), source_name(c)),
                Elem::Top => unreachable!(),
            };
            (name(k as u32), desc)
        })
        .collect();

    let members = of_node
        .first()
        .map(|roots| {
            roots
                .iter()
                .map(|&k| {
                    let dist = star.distances(k, |_| true);
                    let keep: Vec<bool> = dist.iter().map(Option::is_some).collect();
                    let (sub, map) = star.restrict(&keep, |_| true, |_, _, _| true);
                    let mut back = vec![0u32; sub.len()];
                    for (old, new) in map.iter().enumerate() {
                        if let Some(n) = new {
                            back[*n as usize] = old as u32;
                        }
                    }
                    let db = Database::from_structure(sub, |i| name(back[i as usize]));
                    PointedDatabase::new(db, name(k))
                })
                .collect()
        })
        .unwrap_or_default();

    Ok(DualSet {
        members,
        source: p.clone(),
        sigma: sigma.clone(),
        manifest,
    })
}

/// The dual of `(D_q, a_q)`.
pub fn concept_dual(q: &Concept, sigma: &Signature) -> DualSet {
    simulation_dual(&q.to_pointed_db(), sigma).expect("concept databases are trees")
}

/// The size bound for a dual: `3·|Σ|·||D||²` for tree-shaped sources and
/// `3·|Σ|·||D||³` otherwise, with `||D||` taken over the reachable Σ-part.
pub fn size_bound(p: &PointedDatabase, sigma: &Signature) -> usize {
    let (d, _) = reachable_sigma_part(p, sigma);
    let n = d.assertion_count();
    let k = sigma.len();
    if d.is_tree_from(0) {
        3 * k * n * n
    } else {
        3 * k * n * n * n
    }
}
