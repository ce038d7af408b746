use std::fmt;
use std::str::FromStr;

use crate::model::{ConceptName, Individual, RoleName, Signature, Structure};

use super::EncodeError;

/// A named propositional variable of the fitting encoding. Node indices
/// `i, j` are 1-based; `a` indexes the disjoint-union domain and `k`
/// indexes the type list (or the symmetry selector list for `G`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarName {
    C(u32, ConceptName),
    X(u32, RoleName),
    Y(u32, u32),
    T(u32, u32),
    S(u32, u32),
    D(u32, u32, u32),
    Z,
    G(u32),
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::C(i, a) => write!(f, "c({i},{a})"),
            VarName::X(i, r) => write!(f, "x({i},{r})"),
            VarName::Y(j, i) => write!(f, "y({j},{i})"),
            VarName::T(i, k) => write!(f, "t({i},{k})"),
            VarName::S(i, a) => write!(f, "s({i},{a})"),
            VarName::D(i, j, a) => write!(f, "d({i},{j},{a})"),
            VarName::Z => f.write_str("z"),
            VarName::G(k) => write!(f, "g({k})"),
        }
    }
}

impl FromStr for VarName {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EncodeError::Format(format!("bad variable name {s:?}"));
        if s == "z" {
            return Ok(VarName::Z);
        }
        let open = s.find('(').ok_or_else(bad)?;
        let args = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let parts: Vec<&str> = args.split(',').collect();
        let num = |k: usize| -> Result<u32, EncodeError> { parts.get(k).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let arity = |n: usize| if parts.len() == n { Ok(()) } else { Err(bad()) };
        let v = match &s[..open] {
            "c" => {
                arity(2)?;
                VarName::C(num(0)?, ConceptName::new(parts[1]).map_err(|_| bad())?)
            }
            "x" => {
                arity(2)?;
                VarName::X(num(0)?, RoleName::new(parts[1]).map_err(|_| bad())?)
            }
            "y" => {
                arity(2)?;
                VarName::Y(num(0)?, num(1)?)
            }
            "t" => {
                arity(2)?;
                VarName::T(num(0)?, num(1)?)
            }
            "s" => {
                arity(2)?;
                VarName::S(num(0)?, num(1)?)
            }
            "d" => {
                arity(3)?;
                VarName::D(num(0)?, num(1)?, num(2)?)
            }
            "g" => {
                arity(1)?;
                VarName::G(num(0)?)
            }
            _ => return Err(bad()),
        };
        Ok(v)
    }
}

/// Dense numbering of the encoding variables for one round.
///
/// Blocks in order: `c`, `x`, `y`, `t`, `s`, `d`; auxiliary variables
/// (`z`, symmetry selectors) are numbered after them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarCatalog {
    pub n: u32,
    pub concepts: Vec<ConceptName>,
    pub roles: Vec<RoleName>,
    /// Distinct Σ_C-restricted types occurring in the domain.
    pub types: Vec<Vec<ConceptName>>,
    pub type_of: Vec<u32>,
    /// Example index and individual behind each domain element.
    pub origin: Vec<(usize, Individual)>,
    base: [u32; 6],
    total: u32,
    pub z: Option<u32>,
    pub selectors: Vec<u32>,
}

fn pairs(n: u32) -> u32 {
    n * n.saturating_sub(1) / 2
}

/// Index of the pair `lo < hi` among all pairs, ordered by `hi` then `lo`.
fn pair_index(lo: u32, hi: u32) -> u32 {
    debug_assert!(1 <= lo && lo < hi);
    (hi - 1) * (hi - 2) / 2 + (lo - 1)
}

impl VarCatalog {
    pub fn new(n: u32, sigma: &Signature, s: &Structure, origin: Vec<(usize, Individual)>) -> VarCatalog {
        assert!(n >= 1);
        let concepts: Vec<ConceptName> = sigma.concepts.iter().copied().collect();
        let roles: Vec<RoleName> = sigma.roles.iter().copied().collect();
        let mut types: Vec<Vec<ConceptName>> = Vec::new();
        let mut type_of = Vec::with_capacity(s.len());
        for u in s.nodes() {
            let t: Vec<ConceptName> = s.labels(u).iter().copied().filter(|a| sigma.has_concept(*a)).collect();
            let k = match types.iter().position(|x| *x == t) {
                Some(k) => k,
                None => {
                    types.push(t);
                    types.len() - 1
                }
            };
            type_of.push(k as u32);
        }
        let m = s.len() as u32;
        let sizes = [
            n * concepts.len() as u32,
            (n - 1) * roles.len() as u32,
            pairs(n),
            n * types.len() as u32,
            n * m,
            pairs(n) * m,
        ];
        let mut base = [1u32; 6];
        for k in 1..6 {
            base[k] = base[k - 1] + sizes[k - 1];
        }
        VarCatalog {
            n,
            concepts,
            roles,
            types,
            type_of,
            origin,
            base,
            total: sizes.iter().sum(),
            z: None,
            selectors: Vec::new(),
        }
    }

    pub fn adom_len(&self) -> u32 {
        self.type_of.len() as u32
    }

    /// Number of cataloged (non-auxiliary) variables.
    pub fn base_vars(&self) -> u32 {
        self.total
    }

    /// All variables including auxiliaries.
    pub fn num_vars(&self) -> u32 {
        self.total + self.z.is_some() as u32 + self.selectors.len() as u32
    }

    pub(crate) fn add_z(&mut self) -> u32 {
        let v = self.total + 1;
        self.z = Some(v);
        v
    }

    pub(crate) fn add_selector(&mut self) -> u32 {
        let v = self.total + self.z.is_some() as u32 + self.selectors.len() as u32 + 1;
        self.selectors.push(v);
        v
    }

    pub fn c(&self, i: u32, a: usize) -> i32 {
        (self.base[0] + (i - 1) * self.concepts.len() as u32 + a as u32) as i32
    }

    pub fn x(&self, i: u32, r: usize) -> i32 {
        debug_assert!(i >= 2);
        (self.base[1] + (i - 2) * self.roles.len() as u32 + r as u32) as i32
    }

    /// `y(j,i)`: node `i` is a child of node `j < i`.
    pub fn y(&self, j: u32, i: u32) -> i32 {
        (self.base[2] + pair_index(j, i)) as i32
    }

    pub fn t(&self, i: u32, k: u32) -> i32 {
        (self.base[3] + (i - 1) * self.types.len() as u32 + k) as i32
    }

    pub fn s(&self, i: u32, a: u32) -> i32 {
        (self.base[4] + (i - 1) * self.adom_len() + a) as i32
    }

    pub fn d(&self, i: u32, j: u32, a: u32) -> i32 {
        (self.base[5] + pair_index(i, j) * self.adom_len() + a) as i32
    }

    /// Variable number of a named variable, if it exists in this catalog.
    pub fn var(&self, v: VarName) -> Option<i32> {
        let n = self.n;
        let node = |i: u32| (1..=n).contains(&i);
        match v {
            VarName::C(i, a) => {
                let k = self.concepts.iter().position(|&b| b == a)?;
                node(i).then(|| self.c(i, k))
            }
            VarName::X(i, r) => {
                let k = self.roles.iter().position(|&q| q == r)?;
                (i >= 2 && node(i)).then(|| self.x(i, k))
            }
            VarName::Y(j, i) => (j >= 1 && j < i && node(i)).then(|| self.y(j, i)),
            VarName::T(i, k) => (node(i) && (k as usize) < self.types.len()).then(|| self.t(i, k)),
            VarName::S(i, a) => (node(i) && a < self.adom_len()).then(|| self.s(i, a)),
            VarName::D(i, j, a) => (i >= 1 && i < j && node(j) && a < self.adom_len()).then(|| self.d(i, j, a)),
            VarName::Z => self.z.map(|z| z as i32),
            VarName::G(k) => self.selectors.get(k as usize).map(|&g| g as i32),
        }
    }

    /// Name of variable `v` (1-based).
    pub fn name(&self, v: i32) -> Option<VarName> {
        let v = u32::try_from(v).ok()?;
        if v == 0 || v > self.num_vars() {
            return None;
        }
        if v > self.total {
            if self.z == Some(v) {
                return Some(VarName::Z);
            }
            let k = self.selectors.iter().position(|&g| g == v)?;
            return Some(VarName::G(k as u32));
        }
        let block = (0..6).rev().find(|&k| v >= self.base[k])?;
        let off = v - self.base[block];
        let m = self.adom_len();
        let pair = |p: u32| {
            // inverse of pair_index
            let mut hi = 2;
            while pair_index(1, hi + 1) <= p {
                hi += 1;
            }
            (p - pair_index(1, hi) + 1, hi)
        };
        Some(match block {
            0 => {
                let w = self.concepts.len() as u32;
                VarName::C(off / w + 1, self.concepts[(off % w) as usize])
            }
            1 => {
                let w = self.roles.len() as u32;
                VarName::X(off / w + 2, self.roles[(off % w) as usize])
            }
            2 => {
                let (j, i) = pair(off);
                VarName::Y(j, i)
            }
            3 => {
                let w = self.types.len() as u32;
                VarName::T(off / w + 1, off % w)
            }
            4 => VarName::S(off / m + 1, off % m),
            _ => {
                let (i, j) = pair(off / m);
                VarName::D(i, j, off % m)
            }
        })
    }

    /// Variable counts per block `c, x, y, t, s, d`.
    pub fn block_sizes(&self) -> [u32; 6] {
        let mut out = [0; 6];
        for k in 0..6 {
            let end = if k == 5 { self.total + 1 } else { self.base[k + 1] };
            out[k] = end - self.base[k];
        }
        out
    }
}
