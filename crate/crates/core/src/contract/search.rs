//! Monomial-ansatz contraction search.
//!
//! Every hat entry is either 0 or c·ε^p with c from a small coefficient pool
//! and |p| ≤ bound. Columns of Â are filled one at a time; once column i is
//! complete, the image entries (j, i) for j ≤ i are fixed and checked
//! (no negative powers of ε, and in strict mode the constant term must equal
//! the target). Iterative deepening on a cost (sum of |p|, plus one for each
//! off-diagonal entry and each coefficient other than 1) returns the
//! simplest family first.

use super::{obstruction, verify_contraction, ContractionFamily, ContractionVerdict, LaurentGrid, ObstructionCertificate};
use crate::error::Result;
use crate::exactnum::{FieldElem, LaurentScalar, LAURENT_BOUND};
use crate::forms::SymForm;
use serde::Serialize;

const ENTRIES: [(usize, usize); 10] =
    [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2), (0, 3), (1, 3), (3, 3)];

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub bound: i32,
    pub pool: Vec<FieldElem>,
    pub max_cost: u32,
    pub node_budget: u64,
    /// Also accept limits that only share the target's canonical label.
    pub allow_orbit: bool,
    /// Degree of the invariant identities tried before searching.
    pub invariant_degree: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bound: 3,
            pool: ["1", "-1", "i", "-i", "1/2", "-1/2", "2"].iter().map(|s| s.parse().unwrap()).collect(),
            max_cost: 10,
            node_budget: 3_000_000,
            allow_orbit: true,
            invariant_degree: 2,
        }
    }
}

impl SearchOptions {
    pub fn with_bound(bound: i32) -> Self {
        SearchOptions { bound, ..Default::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome")]
pub enum SearchOutcome {
    Found {
        family: ContractionFamily,
        verdict: ContractionVerdict,
        cost: u32,
        nodes: u64,
    },
    /// The ansatz class (exponents within `bound`, pool coefficients, cost up
    /// to `max_cost`) holds no witness. With a certificate attached this is a
    /// proof of non-existence for all families; without one it is evidence only.
    AnsatzExhausted {
        bound: i32,
        max_cost: u32,
        nodes: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<ObstructionCertificate>,
    },
    BudgetExceeded {
        nodes: u64,
        /// Highest cost level searched completely.
        completed_cost: Option<u32>,
    },
}

impl SearchOutcome {
    pub fn family(&self) -> Option<&ContractionFamily> {
        match self {
            SearchOutcome::Found { family, .. } => Some(family),
            _ => None,
        }
    }
}

struct Stop;

type Choice = (Option<(FieldElem, i32)>, u32);

struct Ctx<'a> {
    s: &'a SymForm,
    t: &'a SymForm,
    strict: bool,
    options: Vec<Vec<Choice>>,
    hat: LaurentGrid,
    nodes: u64,
    budget: u64,
}

fn dot(a: &[LaurentScalar; 4], b: &[LaurentScalar; 4]) -> LaurentScalar {
    let mut acc = LaurentScalar::zero();
    for k in 0..4 {
        if !a[k].is_zero() && !b[k].is_zero() {
            acc = acc.add(&a[k].mul(&b[k]).expect("exponents stay within the Laurent bound"));
        }
    }
    acc
}

impl Ctx<'_> {
    fn col(&self, c: usize) -> [LaurentScalar; 4] {
        std::array::from_fn(|r| self.hat[r][c].clone())
    }

    fn column_ok(&self, c: usize) -> bool {
        if c == 1 {
            let h = &self.hat;
            let det = h[0][0].mul(&h[1][1]).unwrap().sub(&h[0][1].mul(&h[1][0]).unwrap());
            if det.is_zero() {
                return false;
            }
        }
        let v = self.col(c);
        let sv: [LaurentScalar; 4] = std::array::from_fn(|k| {
            let mut acc = LaurentScalar::zero();
            for (l, vl) in v.iter().enumerate() {
                let skl = self.s.get(k, l);
                if !skl.is_zero() && !vl.is_zero() {
                    acc = acc.add(&vl.scale(skl));
                }
            }
            acc
        });
        for j in 0..=c {
            let x = dot(&self.col(j), &sv);
            if x.valuation().is_some_and(|v| v < 0) {
                return false;
            }
            if self.strict && &x.coeff(0) != self.t.get(j, c) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, k: usize, left: u32) -> std::result::Result<Option<(ContractionFamily, ContractionVerdict)>, Stop> {
        if k == ENTRIES.len() {
            let Ok(f) = ContractionFamily::from_hat(self.hat.clone()) else {
                return Ok(None);
            };
            let v = verify_contraction(&f, self.s, self.t).map_err(|_| Stop)?;
            return Ok(v.status.verified().then_some((f, v)));
        }
        let (i, j) = ENTRIES[k];
        for n in 0..self.options[k].len() {
            let (choice, cost) = self.options[k][n].clone();
            if cost > left {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Stop);
            }
            self.hat[i][j] = match choice {
                None => LaurentScalar::zero(),
                Some((c, p)) => LaurentScalar::monomial(c, p).unwrap(),
            };
            if matches!(k, 1 | 3 | 6 | 9) && !self.column_ok(j) {
                continue;
            }
            if let Some(hit) = self.dfs(k + 1, left - cost)? {
                return Ok(Some(hit));
            }
        }
        self.hat[i][j] = LaurentScalar::zero();
        Ok(None)
    }
}

fn entry_options(i: usize, j: usize, opts: &SearchOptions) -> Vec<Choice> {
    let diag = i == j;
    let mut out: Vec<Choice> = Vec::new();
    if !(diag && i >= 2) {
        out.push((None, if diag { 1 } else { 0 }));
    }
    let one = FieldElem::one();
    for p in -opts.bound..=opts.bound {
        for c in &opts.pool {
            let cost = p.unsigned_abs() + u32::from(!diag) + u32::from(c != &one);
            out.push((Some((c.clone(), p)), cost));
        }
    }
    out.sort_by_key(|x| x.1);
    out
}

pub fn search_contraction(source: &SymForm, target: &SymForm, opts: &SearchOptions) -> Result<SearchOutcome> {
    let bound = opts.bound.clamp(0, LAURENT_BOUND / 2);
    if let Some(cert) = obstruction(source, target, opts.invariant_degree)? {
        return Ok(SearchOutcome::AnsatzExhausted { bound, max_cost: opts.max_cost, nodes: 0, certificate: Some(cert) });
    }
    let opts = SearchOptions { bound, ..opts.clone() };
    let options: Vec<Vec<Choice>> = ENTRIES.iter().map(|&(i, j)| entry_options(i, j, &opts)).collect();
    let mut nodes = 0u64;
    let modes: &[bool] = if opts.allow_orbit { &[true, false] } else { &[true] };
    for &strict in modes {
        let mut completed = None;
        for cost in 0..=opts.max_cost {
            let mut ctx = Ctx {
                s: source,
                t: target,
                strict,
                options: options.clone(),
                hat: Default::default(),
                nodes: 0,
                budget: opts.node_budget.saturating_sub(nodes),
            };
            let res = ctx.dfs(0, cost);
            nodes += ctx.nodes;
            match res {
                Ok(Some((family, verdict))) => return Ok(SearchOutcome::Found { family, verdict, cost, nodes }),
                Ok(None) => completed = Some(cost),
                Err(Stop) => return Ok(SearchOutcome::BudgetExceeded { nodes, completed_cost: completed }),
            }
        }
    }
    Ok(SearchOutcome::AnsatzExhausted { bound, max_cost: opts.max_cost, nodes, certificate: None })
}
