//! Distributions on which most general and most specific fitting fail to
//! generalize.

use std::sync::Arc;

use crate::duals::concept_dual;
use crate::model::{cn, ind, rn, Concept, Database, Ontology, PointedDatabase, Signature, Structure};
use crate::sim;

use super::{ExampleDistribution, Learner, Task};

/// `C_0 = ⊤`, `C_i = ∃r.(A ⊓ B ⊓ C_{i−1})`.
pub fn c_path(n: usize) -> Concept {
    (0..n).fold(Concept::top(), |c, _| {
        Concept::exists(rn("r"), Concept::conj([Concept::name(cn("A")), Concept::name(cn("B")), c]))
    })
}

/// The member of `S_n` whose level `i` (from 1) carries `B` iff bit
/// `i−1` of `bits` is set, `A` otherwise.
pub fn s_query(n: usize, bits: u32) -> Concept {
    (1..=n).rev().fold(Concept::top(), |c, i| {
        let a = if bits >> (i - 1) & 1 == 1 { "B" } else { "A" };
        Concept::exists(rn("r"), Concept::conj([Concept::name(cn(a)), c]))
    })
}

#[derive(Clone, Debug)]
pub struct MostGeneralSuite {
    pub n: usize,
    pub sigma: Signature,
    pub target: Concept,
    /// `S_n`, indexed like the support of `dist`.
    pub queries: Vec<Concept>,
    /// Uniform over the singleton duals of `S_n`; all negative.
    pub dist: ExampleDistribution,
}

pub const MOST_GENERAL_MAX_N: usize = 14;

pub fn adversarial_most_general_suite(n: usize) -> MostGeneralSuite {
    assert!((1..=MOST_GENERAL_MAX_N).contains(&n), "n must lie in 1..={MOST_GENERAL_MAX_N}");
    let sigma = Signature::from_parts([cn("A"), cn("B")], [rn("r")]);
    let queries: Vec<Concept> = (0..1u32 << n).map(|b| s_query(n, b)).collect();
    let points = crate::par::map(&queries, |q| {
        let d = concept_dual(q, &sigma);
        assert_eq!(d.len(), 1, "S-queries have singleton duals");
        d.members.into_iter().next().unwrap()
    });
    MostGeneralSuite {
        n,
        target: c_path(n),
        dist: ExampleDistribution::uniform(points).expect("nonempty"),
        queries,
        sigma,
    }
}

impl MostGeneralSuite {
    pub fn task(&self) -> Task {
        Task::new(self.target.clone(), Ontology::new(), self.dist.clone())
    }

    /// The most general fitting of a sample: the conjunction of the
    /// S-queries whose duals were drawn.
    pub fn analytic_fitter(&self) -> Learner {
        let points = Arc::new(self.dist.points.clone());
        let queries = Arc::new(self.queries.clone());
        Learner::custom("most-general", move |e, _| {
            let parts = e.negatives().map(|x| {
                let i = points.iter().position(|p| p == x).expect("sampled from the suite");
                queries[i].clone()
            });
            Some(sim::minimize(&Concept::conj(parts.collect::<Vec<_>>())))
        })
    }
}

/// `D_S = {r(b_0,b_1),…,r(b_{n−1},b_n)} ∪ {A(b_i) | i ∈ S}`, rooted at `b_0`.
pub fn d_s(n: usize, s: &[usize]) -> PointedDatabase {
    let mut st = Structure::with_nodes(n + 1);
    for i in 0..n {
        st.add_edge(i as u32, rn("r"), i as u32 + 1);
    }
    for &i in s {
        st.add_label(i as u32, cn("A"));
    }
    PointedDatabase::new(Database::from_structure(st, |i| ind(&format!("b{i}"))), ind("b0"))
}

/// `{A(a_0)}` plus, for every `i ∈ S`, a copy of `D_{{1..n}∖{i}}` glued at
/// its root to `a_0`.
pub fn d_prime_s(n: usize, s: &[usize]) -> PointedDatabase {
    let mut st = Structure::with_nodes(1);
    st.add_label(0, cn("A"));
    let mut names = vec!["a0".to_string()];
    for &i in s {
        let mut prev = 0;
        for j in 1..=n {
            let v = st.add_node();
            names.push(format!("c{i}_{j}"));
            st.add_edge(prev, rn("r"), v);
            if j != i {
                st.add_label(v, cn("A"));
            }
            prev = v;
        }
    }
    PointedDatabase::new(Database::from_structure(st, |k| ind(&names[k as usize])), ind("a0"))
}

/// Subsets of `{1..n}` of size `k`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..=n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 1, &mut Vec::new(), &mut out);
    out
}

/// The restricted duality: `D_S ⪯ D_{S'}` iff `D_{S'} ⋠ D'_S`.
pub fn restricted_duality_holds(n: usize, s: &[usize], s2: &[usize]) -> bool {
    let sigma = Signature::from_parts([cn("A")], [rn("r")]);
    let left = sim::simulates(&d_s(n, s), &d_s(n, s2), Some(&sigma));
    let right = !sim::simulates(&d_s(n, s2), &d_prime_s(n, s), Some(&sigma));
    left == right
}

#[derive(Clone, Debug)]
pub struct MostSpecificSuite {
    pub n: usize,
    pub target: Concept,
    /// The half-size subsets, indexed like the support of `dist`.
    pub sets: Vec<Vec<usize>>,
    /// Uniform over `(D'_S, a_0)` for `|S| = n/2`; all positive.
    pub dist: ExampleDistribution,
}

pub const MOST_SPECIFIC_MAX_N: usize = 12;

pub fn adversarial_most_specific_suite(n: usize) -> MostSpecificSuite {
    assert!(n >= 2 && n.is_multiple_of(2) && n <= MOST_SPECIFIC_MAX_N, "n must be even and in 2..={MOST_SPECIFIC_MAX_N}");
    let sets = subsets(n, n / 2);
    let points = sets.iter().map(|s| d_prime_s(n, s)).collect();
    MostSpecificSuite {
        n,
        target: Concept::name(cn("A")),
        dist: ExampleDistribution::uniform(points).expect("nonempty"),
        sets,
    }
}

impl MostSpecificSuite {
    pub fn task(&self) -> Task {
        Task::new(self.target.clone(), Ontology::new(), self.dist.clone())
    }
}
