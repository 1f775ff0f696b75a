//! Generalized functions on `[0, ∞)`: a finite delta train at the origin plus
//! a regular exp-poly-trig part `Σ c·tᵖ·e^{λt}`.

use num::complex::Complex64;
use num::Zero;

use crate::algebra::scalar::{binomial, factorial};
use crate::algebra::{Cplx, Poly, RatFn, Q, QComplex};
use crate::error::{Error, Result};

/// `Σ cₖ δ⁽ᵏ⁾(t)` supported at `t = 0`; `coeffs[k]` is the coefficient of `δ⁽ᵏ⁾`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SingDist {
    coeffs: Vec<Q>,
}

impl SingDist {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SingDist { coeffs }
    }

    pub fn zero() -> Self {
        SingDist::default()
    }

    /// `c · δ⁽ᵏ⁾`
    pub fn delta(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k];
        coeffs.push(c);
        SingDist::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest derivative order present, `None` for the zero distribution.
    pub fn max_order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `k`-th distributional derivative: `δ⁽ᵖ⁾ ↦ δ⁽ᵖ⁺ᵏ⁾`.
    pub fn derivative(&self, k: usize) -> Self {
        if self.is_zero() {
            return SingDist::zero();
        }
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        SingDist { coeffs }
    }

    /// Singular part of the `r`-fold integral: `δ⁽ᵖ⁾ ↦ δ⁽ᵖ⁻ʳ⁾`; orders that
    /// integrate down to steps are regular and dropped.
    pub fn antiderivative(&self, r: usize) -> Self {
        SingDist::new(self.coeffs.iter().skip(r).cloned().collect())
    }

    /// `∫₀₋^∞` of the train, i.e. the `δ` coefficient.
    pub fn integral_total(&self) -> Q {
        self.coeff(0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        SingDist::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `ℒ₋` transform `Σ cₖ sᵏ`.
    pub fn laplace_minus(&self) -> Poly<Q> {
        Poly::new(self.coeffs.clone())
    }

    pub fn from_poly(p: &Poly<Q>) -> Self {
        SingDist::new(p.coeffs().to_vec())
    }
}

impl std::ops::Add for &SingDist {
    type Output = SingDist;
    fn add(self, rhs: &SingDist) -> SingDist {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SingDist::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl std::ops::Sub for &SingDist {
    type Output = SingDist;
    fn sub(self, rhs: &SingDist) -> SingDist {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        SingDist::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

/// `coeff · t^power · e^{rate·t}` on `t ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub coeff: Cplx,
    pub power: u32,
    pub rate: Cplx,
}

impl Atom {
    pub fn new(coeff: Cplx, power: u32, rate: Cplx) -> Self {
        Atom { coeff, power, rate }
    }

    fn same_mode(&self, other: &Atom) -> bool {
        self.power == other.power && self.rate.approx_eq(&other.rate, 1e-12)
    }

    fn eval_c64(&self, t: f64) -> Complex64 {
        let c = self.coeff.to_c64();
        let rate = self.rate.to_c64();
        c * t.powi(self.power as i32) * (rate * t).exp()
    }

    /// `dᵏ/dtᵏ (tᵖ e^{λt})` at `0` is `C(k,p)·p!·λ^{k-p}` for `k ≥ p`, else 0.
    fn derivative_at_zero(&self, k: u32) -> Cplx {
        if k < self.power {
            return Cplx::zero();
        }
        let p = self.power;
        let weight = binomial(k, p) * factorial(p);
        &(&self.coeff * &Cplx::real(weight)) * &self.rate.powu(k - p)
    }
}

/// Regular part of a signal plus its constant pre-initial baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct RegSig {
    atoms: Vec<Atom>,
    pre_value: Q,
}

impl Default for RegSig {
    fn default() -> Self {
        RegSig::zero()
    }
}

impl RegSig {
    /// Builds a signal, merging atoms with the same `(power, rate)` and dropping zeros.
    pub fn new(atoms: Vec<Atom>, pre_value: Q) -> Self {
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.iter_mut().find(|m| m.same_mode(&atom)) {
                Some(m) => m.coeff = &m.coeff + &atom.coeff,
                None => merged.push(atom),
            }
        }
        merged.retain(|a| !a.coeff.is_zero());
        merged.sort_by(|a, b| {
            let (x, y) = (a.rate.to_c64(), b.rate.to_c64());
            y.re.total_cmp(&x.re)
                .then(y.im.total_cmp(&x.im))
                .then(a.power.cmp(&b.power))
        });
        RegSig {
            atoms: merged,
            pre_value,
        }
    }

    pub fn zero() -> Self {
        RegSig {
            atoms: Vec::new(),
            pre_value: Q::zero(),
        }
    }

    /// Constant `c` on `t ≥ 0` with zero baseline (a scaled unit step).
    pub fn step(c: Q) -> Self {
        RegSig::new(vec![Atom::new(Cplx::real(c), 0, Cplx::zero())], Q::zero())
    }

    pub fn exponential(c: Q, rate: Q) -> Self {
        RegSig::new(vec![Atom::new(Cplx::real(c), 0, Cplx::real(rate))], Q::zero())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pre_value(&self) -> &Q {
        &self.pre_value
    }

    pub fn with_pre_value(mut self, pre_value: Q) -> Self {
        self.pre_value = pre_value;
        self
    }

    /// True when the part on `t ≥ 0` vanishes.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.atoms
            .iter()
            .all(|a| a.coeff.is_exact() && a.rate.is_exact())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let mut sum = Complex64::zero();
        let mut magnitude = 0.0;
        for atom in &self.atoms {
            let v = atom.eval_c64(t);
            magnitude += v.norm();
            sum += v;
        }
        if sum.im.abs() > 1e-9 * magnitude.max(1.0) {
            return Err(Error::ImaginaryResidue { t, imag: sum.im });
        }
        Ok(sum.re)
    }

    /// `k`-th derivative at `0⁺`, term-wise; exact when every atom is exact.
    pub fn derivative_at_zero_plus(&self, k: u32) -> Cplx {
        self.atoms
            .iter()
            .fold(Cplx::zero(), |acc, a| &acc + &a.derivative_at_zero(k))
    }

    /// Real exact `k`-th derivative at `0⁺`, when the signal is exact.
    pub fn exact_derivative_at_zero_plus(&self, k: u32) -> Option<Q> {
        self.derivative_at_zero_plus(k).as_exact_real().cloned()
    }

    /// Time derivative on `t > 0`; the result has a zero baseline.
    pub fn derivative(&self) -> Self {
        let mut atoms = Vec::with_capacity(2 * self.atoms.len());
        for a in &self.atoms {
            if a.power > 0 {
                atoms.push(Atom::new(
                    &a.coeff * &Cplx::real(Q::from_integer(a.power.into())),
                    a.power - 1,
                    a.rate.clone(),
                ));
            }
            if !a.rate.is_zero() {
                atoms.push(Atom::new(&a.coeff * &a.rate, a.power, a.rate.clone()));
            }
        }
        RegSig::new(atoms, Q::zero())
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |s, _| s.derivative())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let cc = Cplx::real(c.clone());
        RegSig::new(
            self.atoms
                .iter()
                .map(|a| Atom::new(&a.coeff * &cc, a.power, a.rate.clone()))
                .collect(),
            &self.pre_value * c,
        )
    }

    pub fn add(&self, other: &RegSig) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        RegSig::new(atoms, &self.pre_value + &other.pre_value)
    }

    /// `ℒ₊` transform `Σ c·p!/(s-λ)^{p+1}` as an exact real rational function.
    pub fn laplace(&self) -> Result<RatFn<Q>> {
        let mut acc: RatFn<QComplex> = RatFn::zero();
        for a in &self.atoms {
            let (Some(c), Some(rate)) = (a.coeff.as_exact(), a.rate.as_exact()) else {
                return Err(Error::UnsupportedInput(
                    "exact transform requested for a signal with float atoms".into(),
                ));
            };
            let num = c.clone() * QComplex::new(factorial(a.power), Q::zero());
            let den = Poly::linear_factor(rate.clone()).pow(a.power + 1);
            acc = &acc + &RatFn::new(Poly::constant(num), den)?;
        }
        acc.to_real().ok_or_else(|| {
            Error::UnsupportedInput("complex atoms are not conjugate-paired".into())
        })
    }

    /// Transform evaluated directly at a complex point; valid for float atoms too.
    pub fn laplace_eval(&self, z: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| {
                let fact = crate::algebra::q_to_f64(&factorial(a.power));
                a.coeff.to_c64() * fact / (z - a.rate.to_c64()).powu(a.power + 1)
            })
            .sum()
    }

    /// Largest coefficient magnitude, used to judge float cancellation.
    pub fn max_abs_coeff(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.coeff.to_c64().norm())
            .fold(0.0, f64::max)
    }
}

/// Full signal: regular part plus singular part at the origin.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GenSignal {
    pub regular: RegSig,
    pub singular: SingDist,
}

impl GenSignal {
    pub fn new(regular: RegSig, singular: SingDist) -> Self {
        GenSignal { regular, singular }
    }

    pub fn impulse(c: Q) -> Self {
        GenSignal::new(RegSig::zero(), SingDist::delta(c, 0))
    }
}
