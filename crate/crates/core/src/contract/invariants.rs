//! Polynomial identities satisfied by every congruence image of a form.
//!
//! If P(z·ÂᵗBÂ) vanishes identically in the entries of Â, then P vanishes on
//! the closure of the orbit of B, so any target with P(T) ≠ 0 is not a
//! contraction of B. The torus of diagonal Â scales entry (i,j) by tᵢtⱼ, so
//! the vanishing ideal is graded by index counts and each grade can be
//! searched separately with plain linear algebra.

use crate::error::Result;
use crate::exactnum::FieldElem;
use crate::forms::SymForm;
use crate::linalg;
use crate::poisson::MPoly;
use std::collections::BTreeMap;
use std::fmt;

const NV: usize = 10;

fn var_of(i: usize, j: usize) -> Option<usize> {
    match (i, j) {
        (0 | 1, _) => Some(i * 4 + j),
        (2, 2) => Some(8),
        (3, 3) => Some(9),
        _ => None,
    }
}

fn upper() -> Vec<(usize, usize)> {
    (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect()
}

/// Entries of ÂᵗBÂ as polynomials in the ten free entries of Â.
pub fn generic_image(b: &SymForm) -> BTreeMap<(usize, usize), MPoly> {
    let hat = |k: usize, i: usize| var_of(k, i).map(|v| MPoly::var(NV, v));
    let mut out = BTreeMap::new();
    for (i, j) in upper() {
        let mut acc = MPoly::zero(NV);
        for k in 0..4 {
            for l in 0..4 {
                let s = b.get(k, l);
                if s.is_zero() {
                    continue;
                }
                if let (Some(x), Some(y)) = (hat(k, i), hat(l, j)) {
                    acc = acc.add(&x.mul(&y).scale(s));
                }
            }
        }
        out.insert((i, j), acc);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCertificate {
    /// P = Σ coeff · Π b_ij over the listed 0-based upper-triangle positions.
    pub terms: Vec<(FieldElem, Vec<(usize, usize)>)>,
    pub target_value: FieldElem,
}

impl InvariantCertificate {
    pub fn eval(&self, m: &SymForm) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (c, mono) in &self.terms {
            let mut t = c.clone();
            for &(i, j) in mono {
                t = &t * m.get(i, j);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-check that P vanishes identically on the orbit of `source`.
    pub fn vanishes_on_orbit(&self, source: &SymForm) -> bool {
        let img = generic_image(source);
        let mut acc = MPoly::zero(NV);
        for (c, mono) in &self.terms {
            let mut t = MPoly::constant(NV, c.clone());
            for p in mono {
                t = t.mul(&img[p]);
            }
            acc = acc.add(&t);
        }
        acc.is_zero()
    }
}

impl fmt::Display for InvariantCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, mono)| {
                let m: Vec<String> = mono.iter().map(|(i, j)| format!("b{}{}", i + 1, j + 1)).collect();
                format!("({c})*{}", m.join("*"))
            })
            .collect();
        write!(f, "P = {} vanishes on the source orbit; P(target) = {}", parts.join(" + "), self.target_value)
    }
}

fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(n, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Search homogeneous orbit invariants up to `max_degree` separating the
/// source orbit closure from the target.
pub fn invariant_obstruction(source: &SymForm, target: &SymForm, max_degree: usize) -> Result<Option<InvariantCertificate>> {
    Ok(invariant_obstructions(source, std::slice::from_ref(target), max_degree)?.pop().flatten())
}

/// Batch form of [`invariant_obstruction`]: each grade's kernel is computed
/// once and tried against every target not yet separated.
pub fn invariant_obstructions(
    source: &SymForm,
    targets: &[SymForm],
    max_degree: usize,
) -> Result<Vec<Option<InvariantCertificate>>> {
    let pos = upper();
    let img = generic_image(source);
    let mut out: Vec<Option<InvariantCertificate>> = vec![None; targets.len()];
    for d in 1..=max_degree {
        let mut groups: BTreeMap<[usize; 4], Vec<Vec<usize>>> = BTreeMap::new();
        for ms in multisets(pos.len(), d) {
            let mut key = [0usize; 4];
            for &k in &ms {
                key[pos[k].0] += 1;
                key[pos[k].1] += 1;
            }
            groups.entry(key).or_default().push(ms);
        }
        for monos in groups.values() {
            let open: Vec<(usize, Vec<FieldElem>)> = (0..targets.len())
                .filter(|&t| out[t].is_none())
                .map(|t| {
                    let vals = monos
                        .iter()
                        .map(|ms| ms.iter().fold(FieldElem::one(), |acc, &k| &acc * targets[t].get(pos[k].0, pos[k].1)))
                        .collect();
                    (t, vals)
                })
                .filter(|(_, vals): &(usize, Vec<FieldElem>)| vals.iter().any(|v| !v.is_zero()))
                .collect();
            if open.is_empty() {
                continue;
            }
            let polys: Vec<MPoly> = monos
                .iter()
                .map(|ms| ms.iter().fold(MPoly::constant(NV, FieldElem::one()), |acc, &k| acc.mul(&img[&pos[k]])))
                .collect();
            let mut rows: BTreeMap<Vec<u32>, Vec<FieldElem>> = BTreeMap::new();
            for (c, p) in polys.iter().enumerate() {
                for (m, v) in p.terms() {
                    rows.entry(m.clone()).or_insert_with(|| vec![FieldElem::zero(); monos.len()])[c] = v.clone();
                }
            }
            let mat: Vec<Vec<FieldElem>> = rows.into_values().collect();
            let kernel = if mat.is_empty() {
                (0..monos.len())
                    .map(|k| (0..monos.len()).map(|c| if c == k { FieldElem::one() } else { FieldElem::zero() }).collect())
                    .collect()
            } else {
                linalg::nullspace(&mat, monos.len())
            };
            for (t, tvals) in open {
                for v in &kernel {
                    let val = v.iter().zip(&tvals).fold(FieldElem::zero(), |acc, (a, b)| &acc + &(a * b));
                    if !val.is_zero() {
                        let terms = v
                            .iter()
                            .zip(monos)
                            .filter(|(c, _)| !c.is_zero())
                            .map(|(c, ms)| (c.clone(), ms.iter().map(|&k| pos[k]).collect()))
                            .collect();
                        out[t] = Some(InvariantCertificate { terms, target_value: val });
                        break;
                    }
                }
            }
            if out.iter().all(Option::is_some) {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{catalog_form, SystemId};

    fn form(id: SystemId) -> SymForm {
        catalog_form(id).unwrap().0
    }

    #[test]
    fn e5_does_not_reach_e6() {
        let c = invariant_obstruction(&form(SystemId::E5), &form(SystemId::E6), 2).unwrap().unwrap();
        assert!(c.vanishes_on_orbit(&form(SystemId::E5)));
        assert_eq!(c.eval(&form(SystemId::E6)), c.target_value);
        assert!(!c.target_value.is_zero());
    }

    #[test]
    fn no_certificate_for_real_contraction() {
        // S6 → E18 is a genuine contraction, so no invariant can separate them
        assert!(invariant_obstruction(&form(SystemId::S6), &form(SystemId::E18), 2).unwrap().is_none());
    }
}
