//! Polynomial roots.
//!
//! Float polynomials go through Aberth–Ehrlich simultaneous iteration, then
//! conjugate pairing and clustering of nearly coincident roots. Exact
//! polynomials are first split into square-free factors so multiplicities are
//! known exactly; each factor's simple roots are located numerically and then
//! snapped to Gaussian rationals whenever an exact check confirms the snap.

use num::complex::Complex64;
use num::Zero;

use super::cplx::Cplx;
use super::poly::{gcd, Poly};
use super::scalar::{rationalize, Q, QComplex};
use crate::error::{Error, Result};

/// Relative distance under which two float roots are the same root.
pub const CLUSTER_TOL: f64 = 1e-7;

const SNAP_MAX_DEN: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Cplx,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All complex roots of a real float polynomial with clustered multiplicities.
pub fn poly_roots(p: &Poly<f64>) -> Result<RootSet> {
    let deg = p.degree().ok_or(Error::ConstantPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let cp = p.to_c64();
    let mut zs = aberth(&cp);
    for z in zs.iter_mut() {
        *z = polish(&cp, *z);
    }
    pair_conjugates(&mut zs);
    let mut clusters = cluster(&zs);
    // A root of multiplicity m is a simple root of the (m-1)-th derivative.
    for (z, m) in clusters.iter_mut() {
        if *m > 1 {
            let mut d = cp.clone();
            for _ in 1..*m {
                d = d.derivative();
            }
            *z = polish(&d, *z);
        }
    }
    let mut zs: Vec<Complex64> = clusters.iter().map(|c| c.0).collect();
    pair_conjugates(&mut zs);
    let mut roots: Vec<Root> = zs
        .into_iter()
        .zip(clusters.iter().map(|c| c.1))
        .map(|(mut z, m)| {
            if z.im.abs() <= CLUSTER_TOL * (1.0 + z.norm()) {
                z.im = 0.0;
            }
            Root {
                value: Cplx::Float(z),
                multiplicity: m,
            }
        })
        .collect();
    sort_roots(&mut roots);
    Ok(RootSet { roots })
}

/// Roots of an exact polynomial. Multiplicities are exact; root values are
/// exact whenever they are Gaussian rationals with modest denominators.
pub fn poly_roots_exact(p: &Poly<Q>) -> Result<RootSet> {
    let deg = p.degree().ok_or(Error::ConstantPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let mut roots = Vec::new();
    for (factor, mult) in square_free(p) {
        for value in simple_roots_exact(&factor) {
            roots.push(Root {
                value,
                multiplicity: mult,
            });
        }
    }
    sort_roots(&mut roots);
    Ok(RootSet { roots })
}

/// Yun's square-free decomposition: `p = c * Π fᵢ^i` with monic, pairwise coprime `fᵢ`.
pub fn square_free(p: &Poly<Q>) -> Vec<(Poly<Q>, usize)> {
    let mut out = Vec::new();
    let f = p.monic();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut g = gcd(&f, &f.derivative());
    let mut w = f.divmod(&g).expect("nonzero").0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = gcd(&w, &g);
        let z = w.divmod(&y).expect("nonzero").0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        g = g.divmod(&y).expect("nonzero").0;
        w = y;
        i += 1;
    }
    out
}

fn simple_roots_exact(f: &Poly<Q>) -> Vec<Cplx> {
    let deg = f.degree().unwrap_or(0);
    if deg == 1 {
        let c = f.coeffs();
        return vec![Cplx::real(-c[0].clone() / c[1].clone())];
    }
    let cf = f.to_c64();
    let mut zs: Vec<Complex64> = aberth(&cf).into_iter().map(|z| polish(&cf, z)).collect();
    pair_conjugates(&mut zs);
    let fq = f.to_qcomplex();
    zs.into_iter()
        .map(|z| match snap(&fq, z) {
            Some(exact) => Cplx::Exact(exact),
            None => Cplx::Float(z),
        })
        .collect()
}

fn snap(f: &Poly<QComplex>, z: Complex64) -> Option<QComplex> {
    let scale = 1.0 + z.norm();
    let re = if z.re.abs() <= 1e-12 * scale {
        Q::zero()
    } else {
        rationalize(z.re, SNAP_MAX_DEN)?
    };
    let im = if z.im.abs() <= 1e-12 * scale {
        Q::zero()
    } else {
        rationalize(z.im, SNAP_MAX_DEN)?
    };
    let cand = QComplex::new(re, im);
    if f.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        let (x, y) = (a.value.to_c64(), b.value.to_c64());
        x.re.total_cmp(&y.re).then(y.im.total_cmp(&x.im))
    });
}

fn eval_with_derivative(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut d = Complex64::zero();
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

fn aberth(p: &Poly<Complex64>) -> Vec<Complex64> {
    let c = p.coeffs();
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Fujiwara bound for the starting circle.
    let mut radius: f64 = 0.0;
    for k in 0..n {
        let mut term = monic[k].norm();
        if k == 0 {
            term /= 2.0;
        }
        radius = radius.max(term.powf(1.0 / (n - k) as f64));
    }
    let radius = (2.0 * radius).max(1e-3);
    let center = -monic[n - 1] / n as f64;
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (v, d) = eval_with_derivative(&monic, zs[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut repulsion = Complex64::zero();
            for j in 0..n {
                if j != k {
                    let diff = zs[k] - zs[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                zs[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + zs[k].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    zs
}

/// A few Newton steps, keeping only those that reduce the residual.
fn polish(p: &Poly<Complex64>, mut z: Complex64) -> Complex64 {
    let c = p.coeffs();
    for _ in 0..4 {
        let (v, d) = eval_with_derivative(c, z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let next = z - v / d;
        let (vn, _) = eval_with_derivative(c, next);
        if vn.norm() < v.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// Force exact conjugate symmetry on the roots of a real polynomial.
fn pair_conjugates(zs: &mut [Complex64]) {
    let n = zs.len();
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| zs[b].im.total_cmp(&zs[a].im));
    for &i in &order {
        if used[i] || zs[i].im <= 0.0 {
            continue;
        }
        let target = zs[i].conj();
        let partner = (0..n)
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| (zs[a] - target).norm().total_cmp(&(zs[b] - target).norm()));
        let Some(j) = partner else { continue };
        if (zs[j] - target).norm() > 1e-6 * (1.0 + target.norm()) {
            continue;
        }
        let re = 0.5 * (zs[i].re + zs[j].re);
        let im = 0.5 * (zs[i].im - zs[j].im).abs();
        zs[i] = Complex64::new(re, im);
        zs[j] = Complex64::new(re, -im);
        used[i] = true;
        used[j] = true;
    }
    for (i, z) in zs.iter_mut().enumerate() {
        if !used[i] {
            z.im = 0.0;
        }
    }
}

fn cluster(zs: &[Complex64]) -> Vec<(Complex64, usize)> {
    let n = zs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let tol = CLUSTER_TOL * (1.0 + zs[i].norm().max(zs[j].norm()));
            if (zs[i] - zs[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += zs[i];
                g.2 += 1;
            }
            None => groups.push((r, zs[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, m)| (sum / m as f64, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, qi};

    fn pf(c: &[f64]) -> Poly<f64> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn perfect_square_gives_double_root() {
        let r = poly_roots(&pf(&[1.0, 2.0, 1.0])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.roots[0].multiplicity, 2);
        assert!((r.roots[0].value.to_c64() - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn unit_imaginary_pair() {
        let r = poly_roots(&pf(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.len(), 2);
        let a = r.roots[0].value.to_c64();
        let b = r.roots[1].value.to_c64();
        assert!((a - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(b, a.conj());
    }

    #[test]
    fn linear_root() {
        let r = poly_roots(&pf(&[1.0, 1.0])).unwrap();
        assert_eq!(r.roots[0].value.to_c64(), Complex64::new(-1.0, 0.0));
        assert_eq!(r.roots[0].multiplicity, 1);
    }

    #[test]
    fn constant_polynomial_rejected() {
        assert!(matches!(poly_roots(&pf(&[3.0])), Err(Error::ConstantPolynomial)));
        assert!(matches!(
            poly_roots_exact(&Poly::from_i64s(&[3])),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn distant_real_roots_are_not_paired() {
        // 3/4 s⁴ − 9/4 s³ − 1/2 s² + 5/3 s − 19/4: two real roots and one complex pair
        let p = Poly::new(vec![-19.0 / 4.0, 5.0 / 3.0, -0.5, -9.0 / 4.0, 0.75]);
        let r = poly_roots(&p).unwrap();
        let real: Vec<f64> = r.roots.iter().filter(|x| x.value.im_f64() == 0.0).map(|x| x.value.re_f64()).collect();
        assert_eq!(real.len(), 2, "{:?}", r.roots);
        for x in [3.18614437, -1.34300725] {
            assert!(real.iter().any(|y| (y - x).abs() < 1e-7));
        }
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (s+1)^3 (s-2) (s^2+1)^2
        let p = &(&Poly::from_i64s(&[1, 1]).pow(3) * &Poly::from_i64s(&[-2, 1]))
            * &Poly::from_i64s(&[1, 0, 1]).pow(2);
        let parts = square_free(&p);
        assert_eq!(
            parts,
            vec![
                (Poly::from_i64s(&[-2, 1]), 1),
                (Poly::from_i64s(&[1, 0, 1]), 2),
                (Poly::from_i64s(&[1, 1]), 3)
            ]
        );
    }

    #[test]
    fn exact_roots_snap_gaussian_rationals() {
        // (2s+3)^2 (s^2 + 2s + 5) (s^2 - 2)
        let p = &(&Poly::from_i64s(&[3, 2]).pow(2) * &Poly::from_i64s(&[5, 2, 1]))
            * &Poly::from_i64s(&[-2, 0, 1]);
        let r = poly_roots_exact(&p).unwrap();
        assert_eq!(r.total_multiplicity(), 6);
        let exact: Vec<_> = r.roots.iter().filter(|x| x.value.is_exact()).collect();
        assert_eq!(exact.len(), 3);
        assert!(r
            .roots
            .iter()
            .any(|x| x.value == Cplx::real(q(-3, 2)) && x.multiplicity == 2));
        assert!(r.roots.iter().any(|x| x.value == Cplx::exact(qi(-1), qi(2))));
        assert!(r.roots.iter().any(|x| x.value == Cplx::exact(qi(-1), qi(-2))));
        let irr: Vec<f64> = r
            .roots
            .iter()
            .filter(|x| !x.value.is_exact())
            .map(|x| x.value.re_f64())
            .collect();
        assert_eq!(irr.len(), 2);
        assert!(irr.iter().any(|v| (v - 2f64.sqrt()).abs() < 1e-14));
    }
}
