use crate::model::Concept;

use super::catalog::VarCatalog;

/// Reads `C_1` off a model. `model[v - 1]` is the value of variable `v`.
pub fn decode(model: &[bool], cat: &VarCatalog) -> Concept {
    let val = |v: i32| model.get(v as usize - 1).copied().unwrap_or(false);
    let unused = cat.z.is_some_and(|z| val(z as i32));
    node(cat, 1, unused, &val)
}

fn node(cat: &VarCatalog, i: u32, leaf: bool, val: &dyn Fn(i32) -> bool) -> Concept {
    let names = (0..cat.concepts.len())
        .filter(|&a| val(cat.c(i, a)))
        .map(|a| cat.concepts[a]);
    let mut children = Vec::new();
    if !leaf {
        for j in i + 1..=cat.n {
            if !val(cat.y(i, j)) {
                continue;
            }
            let role = (0..cat.roles.len()).find(|&r| val(cat.x(j, r)));
            if let Some(r) = role {
                children.push((cat.roles[r], node(cat, j, false, val)));
            }
        }
    }
    Concept::new(names, children)
}
