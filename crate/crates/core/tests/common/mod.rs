#![allow(dead_code)]

use ddcalc::funcspec::{DomainSpec, FunctionSpec};
use ddcalc::numkit::{singular_values, MatrixC};
use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Expression text paired with a hand-written scalar evaluation.
pub struct Entry {
    pub text: &'static str,
    pub eval: fn(C) -> C,
}

pub const CORPUS: [Entry; 5] = [
    Entry { text: "exp(z)", eval: |z| z.exp() },
    Entry { text: "sin(z)", eval: |z| z.sin() },
    Entry { text: "cos(z) + z^2", eval: |z| z.cos() + z * z },
    Entry { text: "z^3 - 2*z", eval: |z| z * z * z - 2.0 * z },
    Entry { text: "1/(z - 4)", eval: |z| 1.0 / (z - 4.0) },
];

pub fn spec(e: &Entry) -> FunctionSpec {
    FunctionSpec::expression(e.text, DomainSpec::WholePlane).unwrap()
}

/// Sum of f(z_i) / prod_{j != i} (z_i - z_j); distinct nodes only.
pub fn lagrange_dd(f: fn(C) -> C, z: &[C]) -> C {
    let mut s = C::new(0.0, 0.0);
    for (i, &zi) in z.iter().enumerate() {
        let mut p = C::new(1.0, 0.0);
        for (j, &zj) in z.iter().enumerate() {
            if i != j {
                p *= zi - zj;
            }
        }
        s += f(zi) / p;
    }
    s
}

pub fn in_disk(rng: &mut ChaCha8Rng, r: f64) -> C {
    loop {
        let z = C::new(rng.random_range(-r..r), rng.random_range(-r..r));
        if z.norm() <= r {
            return z;
        }
    }
}

/// `k` points of the disk of radius `r`, pairwise at least `sep` apart.
pub fn separated_nodes(rng: &mut ChaCha8Rng, k: usize, r: f64, sep: f64) -> Vec<C> {
    let mut out: Vec<C> = Vec::with_capacity(k);
    while out.len() < k {
        let z = in_disk(rng, r);
        if out.iter().all(|w| (w - z).norm() >= sep) {
            out.push(z);
        }
    }
    out
}

pub fn cond(m: &MatrixC) -> f64 {
    let s = singular_values(m);
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// Random invertible matrix with condition number at most `cond_max`.
pub fn random_basis(rng: &mut ChaCha8Rng, k: usize, spread: f64, cond_max: f64) -> MatrixC {
    loop {
        let mut p = MatrixC::identity(k);
        for i in 0..k {
            for j in 0..k {
                let e = p.get(i, j) + C::new(rng.random_range(-spread..spread), rng.random_range(-spread..spread));
                p.set(i, j, e);
            }
        }
        if cond(&p) <= cond_max {
            return p;
        }
    }
}

/// `P D P^-1` together with `P` and the diagonal of `D`.
pub struct Diagonalizable {
    pub x: MatrixC,
    pub p: MatrixC,
    pub p_inv: MatrixC,
    pub eigs: Vec<C>,
}

impl Diagonalizable {
    pub fn random(rng: &mut ChaCha8Rng, k: usize, sep: f64, cond_max: f64) -> Self {
        let eigs = separated_nodes(rng, k, 2.0, sep);
        let p = random_basis(rng, k, 0.6, cond_max);
        let p_inv = p.inverse().unwrap();
        let x = &(&p * &MatrixC::diagonal(&eigs)) * &p_inv;
        Self { x, p, p_inv, eigs }
    }

    /// `P f(D) P^-1`.
    pub fn apply(&self, f: fn(C) -> C) -> MatrixC {
        let fd: Vec<C> = self.eigs.iter().map(|&z| f(z)).collect();
        &(&self.p * &MatrixC::diagonal(&fd)) * &self.p_inv
    }
}
