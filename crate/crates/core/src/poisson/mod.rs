//! Poisson brackets on phase space, abstract structure equations, realization
//! checks and the Stäckel-class reduction.

mod abstract_poly;
mod mpoly;
mod phase;

pub use abstract_poly::{AbstractPoly, Sym, GENERATORS, NSYM, PARAMETERS, SYMBOLS};
pub use mpoly::{MPoly, Monomial};
pub use phase::{pbracket, random_phase_poly, Chart, PhasePoly};

use crate::error::{Error, Result};
use crate::exactnum::FieldElem;
use crate::forms::SymForm;
use crate::linalg;
use serde::Serialize;

fn gen(s: Sym) -> AbstractPoly {
    AbstractPoly::sym(s)
}

/// Casimir polynomial Σ B_ij L_i L_j with L4 = X².
pub fn poly_from_form(b: &SymForm) -> AbstractPoly {
    let x = gen(Sym::X);
    let l = [gen(Sym::L1), gen(Sym::L2), gen(Sym::H), x.mul(&x)];
    let mut g = AbstractPoly::zero();
    for i in 0..4 {
        for j in i..4 {
            let c = b.get(i, j);
            if c.is_zero() {
                continue;
            }
            let k = if i == j { c.clone() } else { c * &FieldElem::from_int(2) };
            g = g.add(&l[i].mul(&l[j]).scale(&k));
        }
    }
    g
}

/// Read B(G) off a parameter-free homogeneous Casimir, halving cross terms.
pub fn form_from_poly(g: &AbstractPoly) -> Result<SymForm> {
    let mut e: crate::forms::Mat4 = Default::default();
    for (m, c) in g.inner().terms() {
        if m[4..].iter().any(|&k| k > 0) {
            return Err(Error::InvalidForm(format!("parameters present in {g}")));
        }
        if m[3] % 2 == 1 {
            return Err(Error::InvalidForm(format!("odd power of X in {g}")));
        }
        let mut idx = Vec::new();
        for (k, &p) in [m[0], m[1], m[2], m[3] / 2].iter().enumerate() {
            for _ in 0..p {
                idx.push(k);
            }
        }
        if idx.len() != 2 {
            return Err(Error::InvalidForm(format!("{g} is not homogeneous of degree 2 in (L1, L2, H, X^2)")));
        }
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            e[i][i] = c.clone();
        } else {
            let h = c * &FieldElem::frac(1, 2);
            e[i][j] = h.clone();
            e[j][i] = h;
        }
    }
    SymForm::new(e)
}

/// G must involve at least two of L1, L2, X for the brackets to be nondegenerate.
pub fn dependence_ok(g: &AbstractPoly) -> bool {
    [Sym::L1, Sym::L2, Sym::X].iter().filter(|s| g.depends_on(**s)).count() >= 2
}

/// Brackets ({X,L1}, {X,L2}, {L1,L2}) = (K ∂G/∂L2, −K ∂G/∂L1, K ∂G/∂X).
pub fn structure_equations(g: &AbstractPoly, k: &FieldElem) -> Result<[AbstractPoly; 3]> {
    if k.is_zero() {
        return Err(Error::DegenerateCasimir("K must be nonzero".into()));
    }
    if !dependence_ok(g) {
        return Err(Error::DegenerateCasimir(format!("{g} depends on fewer than two of L1, L2, X")));
    }
    Ok([
        g.derivative(Sym::L2).scale(k),
        g.derivative(Sym::L1).scale(k).neg(),
        g.derivative(Sym::X).scale(k),
    ])
}

/// ({X,G}, {L1,G}, {L2,G}) computed by the chain rule from the structure
/// equations; all three vanish for a genuine Casimir.
pub fn casimir_brackets(g: &AbstractPoly, k: &FieldElem) -> Result<[AbstractPoly; 3]> {
    let [xl1, xl2, l1l2] = structure_equations(g, k)?;
    let gl1 = g.derivative(Sym::L1);
    let gl2 = g.derivative(Sym::L2);
    let gx = g.derivative(Sym::X);
    Ok([
        gl1.mul(&xl1).add(&gl2.mul(&xl2)),
        gl2.mul(&l1l2).sub(&gx.mul(&xl1)),
        gl1.mul(&l1l2).neg().sub(&gx.mul(&xl2)),
    ])
}

#[derive(Clone, Debug)]
pub struct GeneratorQuadruple {
    pub x: PhasePoly,
    pub l1: PhasePoly,
    pub l2: PhasePoly,
    pub h: PhasePoly,
}

impl GeneratorQuadruple {
    pub fn new(x: PhasePoly, l1: PhasePoly, l2: PhasePoly, h: PhasePoly) -> Result<Self> {
        let chart = x.chart();
        if [&l1, &l2, &h].iter().any(|p| p.chart() != chart) {
            return Err(Error::ChartMismatch);
        }
        let graded = |p: &PhasePoly, d: u32, name: &str| -> Result<()> {
            let degs = p.momentum_degrees();
            if degs.is_empty() || degs.iter().any(|&k| k != d) {
                return Err(Error::GradingViolation(format!("{name} = {p} must be homogeneous of degree {d} in momenta")));
            }
            Ok(())
        };
        graded(&x, 1, "X")?;
        graded(&l1, 2, "L1")?;
        graded(&l2, 2, "L2")?;
        graded(&h, 2, "H")?;
        let x2 = x.mul(&x)?;
        let polys = [&l1, &l2, &h, &x2];
        let mut monos: Vec<&Monomial> = polys.iter().flat_map(|p| p.inner().terms().map(|(m, _)| m)).collect();
        monos.sort();
        monos.dedup();
        let rows: Vec<Vec<FieldElem>> =
            polys.iter().map(|p| monos.iter().map(|m| p.inner().coeff(m)).collect()).collect();
        if linalg::rank(&rows) < 4 {
            return Err(Error::LinearlyDependent);
        }
        Ok(GeneratorQuadruple { x, l1, l2, h })
    }

    /// Evaluate an abstract polynomial (parameter-free) on the generators.
    pub fn evaluate(&self, g: &AbstractPoly) -> Result<PhasePoly> {
        if g.has_parameters() {
            return Err(Error::InvalidForm(format!("{g} still carries parameters")));
        }
        let chart = self.x.chart();
        let mut images: Vec<MPoly> = vec![
            self.l1.inner().clone(),
            self.l2.inner().clone(),
            self.h.inner().clone(),
            self.x.inner().clone(),
        ];
        images.resize(NSYM, MPoly::zero(chart.nvars()));
        Ok(PhasePoly::from_mpoly(chart, g.inner().compose(&images)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationReport {
    pub closure_ok: bool,
    pub casimir_ok: bool,
    pub structure_ok: bool,
    #[serde(rename = "K")]
    pub k: Option<FieldElem>,
    pub diagnostics: Vec<String>,
}

impl RealizationReport {
    pub fn all_ok(&self) -> bool {
        self.closure_ok && self.casimir_ok && self.structure_ok
    }
}

pub fn verify_realization(gens: &GeneratorQuadruple, g: &AbstractPoly) -> Result<RealizationReport> {
    let mut diagnostics = Vec::new();
    let mut closure_ok = true;
    for (name, p) in [("X", &gens.x), ("L1", &gens.l1), ("L2", &gens.l2)] {
        let b = pbracket(&gens.h, p)?;
        if !b.is_zero() {
            closure_ok = false;
            diagnostics.push(format!("{{H,{name}}} = {b}"));
        }
    }
    let on_gens = gens.evaluate(g)?;
    let casimir_ok = on_gens.is_zero();
    if !casimir_ok {
        diagnostics.push(format!("G on generators = {on_gens}"));
    }
    let brackets = [
        pbracket(&gens.x, &gens.l1)?,
        pbracket(&gens.x, &gens.l2)?,
        pbracket(&gens.l1, &gens.l2)?,
    ];
    let (mut structure_ok, mut k) = (false, None);
    match structure_equations(g, &FieldElem::one()) {
        Err(e) => diagnostics.push(e.to_string()),
        Ok(expected) => {
            let expected: Vec<PhasePoly> = expected.iter().map(|e| gens.evaluate(e)).collect::<Result<_>>()?;
            // K from the leading monomial of the first nonzero expected bracket
            if let Some(pos) = expected.iter().position(|e| !e.is_zero()) {
                let (m, c) = expected[pos].inner().terms().last().unwrap();
                let kk = brackets[pos].inner().coeff(m).div(c)?;
                if kk.is_zero() {
                    diagnostics.push("structure constant would be zero".into());
                } else {
                    structure_ok = true;
                    for (i, (b, e)) in brackets.iter().zip(&expected).enumerate() {
                        if b != &e.scale(&kk) {
                            structure_ok = false;
                            let names = ["{X,L1}", "{X,L2}", "{L1,L2}"];
                            diagnostics.push(format!("{} = {b}, expected K*({e}) with K = {kk}", names[i]));
                        }
                    }
                    if structure_ok {
                        k = Some(kk);
                    }
                }
            } else {
                diagnostics.push("structure equations vanish identically on the generators".into());
            }
        }
    }
    Ok(RealizationReport { closure_ok, casimir_ok, structure_ok, k, diagnostics })
}

/// 2×2 Stäckel transform matrix C = (c_jk), numeric or symbolic.
#[derive(Clone, Debug)]
pub struct StackelMatrix {
    c: [[AbstractPoly; 2]; 2],
}

impl StackelMatrix {
    pub fn symbolic() -> Self {
        StackelMatrix {
            c: [[gen(Sym::C11), gen(Sym::C12)], [gen(Sym::C21), gen(Sym::C22)]],
        }
    }

    pub fn numeric(c: [[FieldElem; 2]; 2]) -> Result<Self> {
        let det = &(&c[0][0] * &c[1][1]) - &(&c[0][1] * &c[1][0]);
        if det.is_zero() {
            return Err(Error::SingularStackelMatrix);
        }
        Ok(StackelMatrix { c: c.map(|r| r.map(AbstractPoly::constant)) })
    }

    pub fn identity() -> Self {
        let o = FieldElem::one;
        let z = FieldElem::zero;
        Self::numeric([[o(), z()], [z(), o()]]).unwrap()
    }
}

/// Free class Casimir of a parametrized Casimir:
/// a_j → Σ c_jk b_k, then H → −b2 and b2 → −H together, then b_j → 0.
pub fn stackel_class(g_param: &AbstractPoly, c: &StackelMatrix) -> Result<AbstractPoly> {
    let det = c.c[0][0].mul(&c.c[1][1]).sub(&c.c[0][1].mul(&c.c[1][0]));
    if det.is_zero() {
        return Err(Error::SingularStackelMatrix);
    }
    for s in [Sym::B1, Sym::B2, Sym::C11, Sym::C12, Sym::C21, Sym::C22] {
        if g_param.depends_on(s) {
            return Err(Error::InvalidForm(format!("parametrized Casimir may only use a1, a2 (found {:?})", s)));
        }
    }
    let b = [gen(Sym::B1), gen(Sym::B2)];
    let step1 = g_param.substitute(&[
        (Sym::A1, c.c[0][0].mul(&b[0]).add(&c.c[0][1].mul(&b[1]))),
        (Sym::A2, c.c[1][0].mul(&b[0]).add(&c.c[1][1].mul(&b[1]))),
    ]);
    let step2 = step1.substitute(&[(Sym::H, gen(Sym::B2).neg()), (Sym::B2, gen(Sym::H).neg())]);
    Ok(step2.substitute(&[(Sym::B1, AbstractPoly::zero()), (Sym::B2, AbstractPoly::zero())]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> AbstractPoly {
        s.parse().unwrap()
    }

    #[test]
    fn form_roundtrip() {
        let g = p("L1^2+L2^2+H^2+2*(-1+i)*H*X^2-2*i*X^4");
        let b = form_from_poly(&g).unwrap();
        assert_eq!(b.get(2, 3), &"-1+i".parse().unwrap());
        assert_eq!(poly_from_form(&b), g);
        assert!(form_from_poly(&p("L1*X")).is_err());
        assert!(form_from_poly(&p("a1*L1^2")).is_err());
    }

    #[test]
    fn structure_examples() {
        let one = FieldElem::one();
        let [a, b, c] = structure_equations(&p("L1^2+L2^2+H^2"), &one).unwrap();
        assert_eq!((a, b, c), (p("2*L2"), p("-2*L1"), p("0")));
        let [a, b, c] = structure_equations(&p("L1^2+2*L2*X^2+H^2"), &one).unwrap();
        assert_eq!((a, b, c), (p("2*X^2"), p("-2*L1"), p("4*L2*X")));
        assert!(matches!(structure_equations(&p("H^2+X^4"), &one), Err(Error::DegenerateCasimir(_))));
    }

    #[test]
    fn stackel_s3_class() {
        let g = p("L1^2+L2^2-L1*H+L1*X^2+a1*X^2+(a1+a2)*L1");
        let out = stackel_class(&g, &StackelMatrix::symbolic()).unwrap();
        assert_eq!(out, p("L1^2+L2^2+L1*X^2-c12*H*X^2-(c12+c22)*H*L1"));
        let sing = StackelMatrix::numeric([[FieldElem::one(), FieldElem::one()], [FieldElem::one(), FieldElem::one()]]);
        assert!(matches!(sing, Err(Error::SingularStackelMatrix)));
    }
}
