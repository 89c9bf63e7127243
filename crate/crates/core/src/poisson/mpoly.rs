use crate::exactnum::FieldElem;
use std::collections::BTreeMap;

pub type Monomial = Vec<u32>;

/// Sparse polynomial over the field in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut m = vec![0; nvars];
        m[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, FieldElem::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElem) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(FieldElem::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, FieldElem::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[k] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[k] -= 1;
            out.add_term(m2, c * &FieldElem::from_int(m[k] as i64));
        }
        out
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|m| m[k]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, k: usize) -> bool {
        self.terms.keys().any(|m| m[k] > 0)
    }

    /// Weighted degrees of all terms.
    pub fn weighted_degrees(&self, w: &[u32]) -> Vec<u32> {
        self.terms.keys().map(|m| m.iter().zip(w).map(|(e, w)| e * w).sum()).collect()
    }

    /// Substitute polynomials (all in a common target ring) for every variable.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = MPoly::zero(target);
        let mut cache: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((k, e)).or_insert_with(|| images[k].pow(e)).clone();
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, x: &[FieldElem]) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &x[k];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Render with the given variable names, highest weighted degree first.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { names[k].to_string() } else { format!("{}^{}", names[k], e) })
                .collect();
            let cs = c.to_string();
            let simple = !cs[1..].contains(['+', '-']);
            let (neg, mag) = if simple && cs.starts_with('-') { (true, cs[1..].to_string()) } else { (false, cs.clone()) };
            let mag = if simple { mag } else { format!("({mag})") };
            let body = if mono.is_empty() {
                mag
            } else if mag == "1" {
                mono.join("*")
            } else {
                format!("{}*{}", mag, mono.join("*"))
            };
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        out
    }
}
