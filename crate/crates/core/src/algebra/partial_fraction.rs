//! Partial-fraction expansion over linear pole factors.
//!
//! Residues at an order-k pole come from the Taylor expansion of the deflated
//! function `num / (den / (s - p)^k)` around `p`, obtained by shifting both
//! polynomials to powers of `(s - p)` and dividing the series.

use num::complex::Complex64;

use super::cplx::Cplx;
use super::poly::Poly;
use super::ratfn::RatFn;
use super::roots::{poly_roots, poly_roots_exact};
use super::scalar::{Scalar, Q, QComplex};
use crate::error::Result;

/// `residue / (s - pole)^order`
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Cplx,
    pub order: usize,
    pub residue: Cplx,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionForm<T> {
    pub terms: Vec<PoleTerm>,
    pub polynomial_part: Poly<T>,
}

impl<T: Scalar> PartialFractionForm<T> {
    /// Evaluate the recombined expansion at a complex point.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = self.polynomial_part.eval_c64(z);
        for t in &self.terms {
            acc += t.residue.to_c64() / (z - t.pole.to_c64()).powu(t.order as u32);
        }
        acc
    }

    pub fn is_exact(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.pole.is_exact() && t.residue.is_exact())
    }
}

impl PartialFractionForm<Q> {
    /// Exact recombination into a canonical rational function, when every term is exact.
    pub fn recombine_exact(&self) -> Option<RatFn<Q>> {
        let mut acc: RatFn<QComplex> = RatFn::from_poly(self.polynomial_part.to_qcomplex());
        for t in &self.terms {
            let pole = t.pole.as_exact()?.clone();
            let residue = t.residue.as_exact()?.clone();
            let den = Poly::linear_factor(pole).pow(t.order as u32);
            let term = RatFn::new(Poly::constant(residue), den).ok()?;
            acc = &acc + &term;
        }
        acc.to_real()
    }
}

/// Taylor-series residues at `pole` of multiplicity `order`, highest order first.
fn pole_residues<C: Scalar>(num: &Poly<C>, den: &Poly<C>, pole: &C, order: usize) -> Vec<(usize, C)> {
    let r = num.taylor_at(pole);
    let d = den.taylor_at(pole);
    let qd: Vec<C> = d.into_iter().skip(order).collect();
    let q0 = qd[0].clone();
    let mut g: Vec<C> = Vec::with_capacity(order);
    for j in 0..order {
        let mut acc = r.get(j).cloned().unwrap_or_else(C::zero);
        for i in 1..=j {
            if let Some(qi) = qd.get(i) {
                acc = acc - qi.clone() * g[j - i].clone();
            }
        }
        g.push(acc / q0.clone());
    }
    g.into_iter()
        .enumerate()
        .map(|(j, c)| (order - j, c))
        .collect()
}

fn push_terms(terms: &mut Vec<PoleTerm>, pole: Cplx, residues: Vec<(usize, Cplx)>) {
    for (order, residue) in residues {
        if !residue.is_zero() {
            terms.push(PoleTerm {
                pole: pole.clone(),
                order,
                residue,
            });
        }
    }
}

/// Mirror residues from upper-half-plane float poles onto their conjugates.
fn float_pole_terms(
    num: &Poly<Complex64>,
    den: &Poly<Complex64>,
    poles: &[(Complex64, usize)],
    terms: &mut Vec<PoleTerm>,
) {
    for &(z, m) in poles {
        if z.im < 0.0 {
            continue;
        }
        let res = pole_residues(num, den, &z, m);
        if z.im > 0.0 {
            let conj: Vec<(usize, Cplx)> = res.iter().map(|(k, c)| (*k, Cplx::Float(c.conj()))).collect();
            push_terms(terms, Cplx::Float(z.conj()), conj);
        }
        let res = res.into_iter().map(|(k, c)| (k, Cplx::Float(c))).collect();
        push_terms(terms, Cplx::Float(z), res);
    }
}

fn sort_terms(terms: &mut [PoleTerm]) {
    terms.sort_by(|a, b| {
        let (x, y) = (a.pole.to_c64(), b.pole.to_c64());
        x.re.total_cmp(&y.re)
            .then(y.im.total_cmp(&x.im))
            .then(a.order.cmp(&b.order))
    });
}

impl RatFn<Q> {
    /// Expansion with exact residues at every exactly known pole.
    pub fn partial_fractions(&self) -> Result<PartialFractionForm<Q>> {
        let (polynomial_part, proper) = self.split_proper();
        let mut terms = Vec::new();
        if !proper.is_zero() {
            let roots = poly_roots_exact(proper.den())?;
            let num_q = proper.num().to_qcomplex();
            let den_q = proper.den().to_qcomplex();
            let mut float_poles = Vec::new();
            for root in &roots.roots {
                match &root.value {
                    Cplx::Exact(p) => {
                        let res = pole_residues(&num_q, &den_q, p, root.multiplicity)
                            .into_iter()
                            .map(|(k, c)| (k, Cplx::Exact(c)))
                            .collect();
                        push_terms(&mut terms, root.value.clone(), res);
                    }
                    Cplx::Float(z) => float_poles.push((*z, root.multiplicity)),
                }
            }
            if !float_poles.is_empty() {
                float_pole_terms(
                    &proper.num().to_c64(),
                    &proper.den().to_c64(),
                    &float_poles,
                    &mut terms,
                );
            }
        }
        sort_terms(&mut terms);
        Ok(PartialFractionForm {
            terms,
            polynomial_part,
        })
    }
}

impl RatFn<f64> {
    pub fn partial_fractions(&self) -> Result<PartialFractionForm<f64>> {
        let (polynomial_part, proper) = self.split_proper();
        let mut terms = Vec::new();
        if !proper.is_zero() {
            let roots = poly_roots(proper.den())?;
            let poles: Vec<(Complex64, usize)> = roots
                .roots
                .iter()
                .map(|r| (r.value.to_c64(), r.multiplicity))
                .collect();
            float_pole_terms(
                &proper.num().to_c64(),
                &proper.den().to_c64(),
                &poles,
                &mut terms,
            );
        }
        sort_terms(&mut terms);
        Ok(PartialFractionForm {
            terms,
            polynomial_part,
        })
    }
}
