#![allow(dead_code)]

use laplace_init::algebra::{Cplx, Poly, RatFn, Q};
use laplace_init::signals::{Atom, GenSignal, RegSig, SingDist};
use laplace_init::SysSpec;
use num::{BigInt, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Rational in `[-5, 5]` with denominator at most 4.
pub fn rand_q(rng: &mut TestRng) -> Q {
    let d = rng.gen_range(1..=4);
    q(rng.gen_range(-5 * d..=5 * d), d)
}

pub fn rand_nonzero_q(rng: &mut TestRng) -> Q {
    loop {
        let v = rand_q(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

fn rand_regular_input(rng: &mut TestRng) -> RegSig {
    let c = rand_nonzero_q(rng);
    let rate = rand_q(rng);
    let sig = match rng.gen_range(0..3) {
        0 => RegSig::step(c),
        1 => RegSig::exponential(c, rate),
        _ => RegSig::new(vec![Atom::new(Cplx::real(c), 1, Cplx::real(rate))], Q::zero()),
    };
    sig.with_pre_value(rand_q(rng))
}

/// `n ≤ 5`, `m ≤ n`, rational coefficients in `[-5, 5]`, a δ-train of order at most `m`,
/// random pre-initial values; half of the systems also get a regular input with a jump.
pub fn random_system(rng: &mut TestRng) -> SysSpec {
    let n = rng.gen_range(0..=5usize);
    let m = rng.gen_range(0..=n);
    let mut a = vec![rand_nonzero_q(rng)];
    a.extend((0..n).map(|_| rand_q(rng)));
    let mut b = vec![rand_nonzero_q(rng)];
    b.extend((0..m).map(|_| rand_q(rng)));
    let y_pre = (0..n).map(|_| rand_q(rng)).collect();
    let mut deltas: Vec<Q> = (0..=m)
        .map(|_| if rng.gen_bool(0.7) { rand_q(rng) } else { Q::zero() })
        .collect();
    if deltas.iter().all(|c| c.is_zero()) {
        deltas[0] = qi(1);
    }
    let regular = if rng.gen_bool(0.5) { rand_regular_input(rng) } else { RegSig::zero() };
    let input = GenSignal::new(regular, SingDist::new(deltas));
    SysSpec::new(a, b, y_pre, input).expect("generator respects the invariants")
}

pub fn random_systems(seed: u64, count: usize) -> Vec<SysSpec> {
    let mut r = rng(seed);
    (0..count).map(|_| random_system(&mut r)).collect()
}

/// Denominator factor with a known root structure.
#[derive(Clone, Debug)]
pub enum Factor {
    Real(Q, u32),
    /// Roots `re ± i·im`.
    Pair(Q, Q, u32),
    /// Roots `shift ± √c` with `c` not a perfect square.
    Irrational(Q, i64, u32),
}

impl Factor {
    pub fn poly(&self) -> Poly<Q> {
        match self {
            Factor::Real(r, k) => Poly::new(vec![-r.clone(), qi(1)]).pow(*k),
            Factor::Pair(re, im, k) => {
                Poly::new(vec![re * re + im * im, -(re + re), qi(1)]).pow(*k)
            }
            Factor::Irrational(shift, c, k) => {
                Poly::new(vec![shift * shift - qi(*c), -(shift + shift), qi(1)]).pow(*k)
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self, Factor::Irrational(..))
    }
}

pub struct KnownRatFn {
    pub f: RatFn<Q>,
    pub factors: Vec<Factor>,
}

impl KnownRatFn {
    pub fn rational_path(&self) -> bool {
        self.factors.iter().all(Factor::is_rational)
    }
}

/// Strictly proper, denominator built from 1–3 random factors: repeated reals,
/// complex pairs, and quadratics with irrational roots.
pub fn random_known_ratfn(rng: &mut TestRng) -> KnownRatFn {
    let count = rng.gen_range(1..=3);
    let mut factors = Vec::new();
    for _ in 0..count {
        let f = match rng.gen_range(0..5) {
            0 | 1 => Factor::Real(rand_q(rng), rng.gen_range(1..=3)),
            2 | 3 => Factor::Pair(rand_q(rng), rand_nonzero_q(rng), rng.gen_range(1..=2)),
            _ => Factor::Irrational(rand_q(rng), [2, 3, 5, 6, 7][rng.gen_range(0..5)], 1),
        };
        factors.push(f);
    }
    let den = factors.iter().fold(Poly::new(vec![qi(1)]), |acc, f| &acc * &f.poly());
    let deg = den.degree().expect("nonconstant");
    let num_deg = rng.gen_range(0..deg);
    let mut coeffs: Vec<Q> = (0..=num_deg).map(|_| rand_q(rng)).collect();
    if coeffs.iter().all(|c| c.is_zero()) {
        coeffs[0] = qi(1);
    }
    let f = RatFn::new(Poly::new(coeffs), den).expect("nonzero denominator");
    KnownRatFn { f, factors }
}
