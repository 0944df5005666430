#![allow(dead_code)]

use misome::ensembles::channel_for_trial;
use misome::ChannelRealization;
use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C64 = Complex<f64>;
pub type Mat = DMatrix<C64>;
pub type Vct = DVector<C64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish complex Gaussian via Box–Muller, independent of the library sampler.
pub fn gauss(r: &mut ChaCha8Rng) -> C64 {
    let u1: f64 = r.random::<f64>().max(1e-300);
    let u2: f64 = r.random::<f64>();
    let rad = (-u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    C64::new(rad * th.cos(), rad * th.sin())
}

pub fn random_matrix(rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Mat {
    DMatrix::from_fn(rows, cols, |_, _| gauss(r))
}

pub fn random_unit(n: usize, r: &mut ChaCha8Rng) -> Vct {
    let v = DVector::from_fn(n, |_, _| gauss(r));
    let nrm = v.norm();
    v / C64::new(nrm, 0.0)
}

pub fn quad(m: &Mat, v: &Vct) -> f64 {
    v.dotc(&(m * v)).re
}

pub fn rayleigh(a: &Mat, b: &Mat, v: &Vct) -> f64 {
    quad(a, v) / quad(b, v)
}

/// `max_ψ ψ†Aψ / ψ†Bψ` by random search over `samples` unit vectors followed
/// by gradient ascent on the sphere with backtracking.
pub fn oracle_lambda_max(a: &Mat, b: &Mat, samples: usize, seed: u64) -> f64 {
    let n = a.nrows();
    let mut r = rng(seed);
    let mut best = random_unit(n, &mut r);
    let mut best_val = rayleigh(a, b, &best);
    for _ in 0..samples {
        let v = random_unit(n, &mut r);
        let val = rayleigh(a, b, &v);
        if val > best_val {
            best = v;
            best_val = val;
        }
    }
    let mut step = 1.0;
    for _ in 0..200_000 {
        let bq = quad(b, &best);
        let g = (a * &best - (b * &best) * C64::new(best_val, 0.0)) * C64::new(2.0 / bq, 0.0);
        if g.norm() < 1e-15 * best_val.abs().max(1.0) {
            break;
        }
        let mut moved = false;
        let mut t = step;
        while t > 1e-18 {
            let cand = &best + &g * C64::new(t, 0.0);
            let cand = &cand / C64::new(cand.norm(), 0.0);
            let v = rayleigh(a, b, &cand);
            if v > best_val {
                best = cand;
                best_val = v;
                moved = true;
                step = t * 2.0;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    best_val
}

pub fn pencil(p: f64, ch: &ChannelRealization) -> (Mat, Mat) {
    let n = ch.n_t();
    let h = ch.h_r();
    let he = ch.h_e();
    let a = Mat::identity(n, n) + h * h.adjoint() * C64::new(p, 0.0);
    let gram = if he.nrows() == 0 { Mat::zeros(n, n) } else { he.adjoint() * he };
    let b = Mat::identity(n, n) + gram * C64::new(p, 0.0);
    (a, b)
}

/// Capacity from the oracle, in bits.
pub fn oracle_capacity(p: f64, ch: &ChannelRealization, seed: u64) -> f64 {
    let (a, b) = pencil(p, ch);
    oracle_lambda_max(&a, &b, 20_000, seed).log2().max(0.0)
}

pub fn channel(n_t: usize, n_e: usize, seed: u64, k: u64) -> ChannelRealization {
    channel_for_trial(n_t, n_e, seed, k).expect("valid dims")
}

pub fn example(n_e: usize) -> ChannelRealization {
    misome::capacity::example_channel::<f64>().with_eavesdropper_rows(n_e).unwrap()
}

/// Random Hermitian `A` (possibly indefinite) and positive definite `B`.
pub fn random_pair(n: usize, seed: u64) -> (Mat, Mat) {
    let mut r = rng(seed);
    let x = random_matrix(n, n, &mut r);
    let a = (&x + x.adjoint()) * C64::new(0.5, 0.0);
    let y = random_matrix(n, n, &mut r);
    let b = &y * y.adjoint() + Mat::identity(n, n) * C64::new(0.1, 0.0);
    (a, b)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
