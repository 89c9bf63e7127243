use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, Rational};
use crate::expr::{self, EvalRing};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Chart {
    /// (x, y, px, py)
    Flat,
    /// (s1, s2, s3, ps1, ps2, ps3)
    Ambient3,
}

impl Chart {
    pub fn names(self) -> &'static [&'static str] {
        match self {
            Chart::Flat => &["x", "y", "px", "py"],
            Chart::Ambient3 => &["s1", "s2", "s3", "ps1", "ps2", "ps3"],
        }
    }

    pub fn nvars(self) -> usize {
        self.names().len()
    }

    /// Number of conjugate pairs; coordinate k pairs with momentum k + pairs.
    pub fn pairs(self) -> usize {
        self.nvars() / 2
    }

    pub fn is_momentum(self, k: usize) -> bool {
        k >= self.pairs()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PhasePoly {
    chart: Chart,
    p: MPoly,
}

impl PhasePoly {
    pub fn zero(chart: Chart) -> Self {
        PhasePoly { chart, p: MPoly::zero(chart.nvars()) }
    }

    pub fn constant(chart: Chart, c: FieldElem) -> Self {
        PhasePoly { chart, p: MPoly::constant(chart.nvars(), c) }
    }

    pub fn var(chart: Chart, name: &str) -> Result<Self> {
        let k = chart
            .names()
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::Parse(format!("'{name}' is not a {chart:?} variable")))?;
        Ok(PhasePoly { chart, p: MPoly::var(chart.nvars(), k) })
    }

    pub fn from_mpoly(chart: Chart, p: MPoly) -> Self {
        assert_eq!(p.nvars(), chart.nvars());
        PhasePoly { chart, p }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn inner(&self) -> &MPoly {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.chart == o.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(PhasePoly { chart: self.chart, p: self.p.add(&o.p) })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(PhasePoly { chart: self.chart, p: self.p.sub(&o.p) })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(PhasePoly { chart: self.chart, p: self.p.mul(&o.p) })
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        PhasePoly { chart: self.chart, p: self.p.scale(k) }
    }

    pub fn neg(&self) -> Self {
        PhasePoly { chart: self.chart, p: self.p.neg() }
    }

    /// Degrees in momenta of all terms.
    pub fn momentum_degrees(&self) -> Vec<u32> {
        let w: Vec<u32> = (0..self.chart.nvars()).map(|k| self.chart.is_momentum(k) as u32).collect();
        self.p.weighted_degrees(&w)
    }

    pub fn parse(chart: Chart, s: &str) -> Result<Self> {
        let e = expr::parse(s)?;
        CHART.with(|c| c.set(Some(chart)));
        let out = expr::eval::<PhaseEval>(&e);
        CHART.with(|c| c.set(None));
        out.map(|v| v.0)
    }

    /// Angular momenta J1, J2, J3 on the ambient chart.
    pub fn angular_momenta() -> [PhasePoly; 3] {
        let v = |n: &str| PhasePoly::var(Chart::Ambient3, n).unwrap();
        let j = |a: &str, pb: &str, b: &str, pa: &str| v(a).mul(&v(pb)).unwrap().sub(&v(b).mul(&v(pa)).unwrap()).unwrap();
        [j("s2", "ps3", "s3", "ps2"), j("s3", "ps1", "s1", "ps3"), j("s1", "ps2", "s2", "ps1")]
    }
}

/// Canonical bracket Σ (∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q).
pub fn pbracket(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly> {
    f.same(g)?;
    let n = f.chart.pairs();
    let mut out = MPoly::zero(f.chart.nvars());
    for k in 0..n {
        let a = f.p.derivative(k).mul(&g.p.derivative(k + n));
        let b = f.p.derivative(k + n).mul(&g.p.derivative(k));
        out = out.add(&a).sub(&b);
    }
    Ok(PhasePoly { chart: f.chart, p: out })
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.p.render(self.chart.names()))
    }
}

impl fmt::Debug for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.chart, self)
    }
}

/// Seeded random polynomial with up to `terms` monomials of total degree
/// at most `max_degree` and small Gaussian-rational coefficients.
pub fn random_phase_poly<R: rand::Rng>(rng: &mut R, chart: Chart, max_degree: u32, terms: usize) -> PhasePoly {
    let n = chart.nvars();
    let mut p = MPoly::zero(n);
    for _ in 0..terms {
        let mut m = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=max_degree) {
            m[rng.gen_range(0..n)] += 1;
        }
        let re = FieldElem::frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let im = FieldElem::frac(rng.gen_range(-2..=2), 1);
        p.add_term(m, &re + &(&im * &FieldElem::i()));
    }
    PhasePoly { chart, p }
}

thread_local! {
    static CHART: std::cell::Cell<Option<Chart>> = const { std::cell::Cell::new(None) };
}

#[derive(Clone)]
struct PhaseEval(PhasePoly);

fn current_chart() -> Chart {
    CHART.with(|c| c.get()).expect("chart set during parse")
}

impl EvalRing for PhaseEval {
    fn from_rational(q: Rational) -> Self {
        PhaseEval(PhasePoly::constant(current_chart(), FieldElem::from_rational(q)))
    }

    fn ident(name: &str) -> Result<Self> {
        let chart = current_chart();
        if let Ok(v) = PhasePoly::var(chart, name) {
            return Ok(PhaseEval(v));
        }
        if chart == Chart::Ambient3 {
            let j = PhasePoly::angular_momenta();
            match name {
                "J1" => return Ok(PhaseEval(j[0].clone())),
                "J2" => return Ok(PhaseEval(j[1].clone())),
                "J3" => return Ok(PhaseEval(j[2].clone())),
                _ => {}
            }
        }
        // coordinate names shadow field units (s2 is a coordinate on the sphere)
        FieldElem::ident(name)
            .map(|c| PhaseEval(PhasePoly::constant(chart, c)))
            .map_err(|_| Error::Parse(format!("unknown symbol '{name}' for chart {chart:?}")))
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(PhaseEval(self.0.add(&o.0)?))
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(PhaseEval(self.0.sub(&o.0)?))
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(PhaseEval(self.0.mul(&o.0)?))
    }

    fn neg(&self) -> Self {
        PhaseEval(self.0.neg())
    }

    fn div(&self, o: &Self) -> Result<Self> {
        let c = o.0.p.as_constant().ok_or_else(|| Error::Parse("division only by constants".into()))?;
        Ok(PhaseEval(self.0.scale(&c.inv()?)))
    }

    fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return Err(Error::Parse("negative power in phase-space polynomial".into()));
        }
        Ok(PhaseEval(PhasePoly { chart: self.0.chart, p: self.0.p.pow(e as u32) }))
    }

    fn call(name: &str, arg: &Self) -> Result<Self> {
        let c = arg.0.p.as_constant().ok_or_else(|| Error::Parse(format!("{name}() needs a constant")))?;
        Ok(PhaseEval(PhasePoly::constant(arg.0.chart, FieldElem::call(name, &c)?)))
    }
}
