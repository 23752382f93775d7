//! Seeded, reproducible point sets: isotropic sphere directions and uniform
//! points in a ball.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::Point;
use crate::vector::norm;

/// Independent ChaCha streams per purpose, so that e.g. changing the number
/// of probe directions never perturbs solver start points.
#[derive(Debug, Clone, Copy)]
pub enum Stream {
    Directions = 1,
    BallPoints = 2,
    SolverStarts = 3,
}

pub fn rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

pub fn gaussian_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-150 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

/// `m` normalized standard-normal directions; in the plane an `m`-point
/// equispaced angular grid is appended.
pub fn sphere_directions(dim: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng(seed, Stream::Directions);
    let mut dirs: Vec<Vec<f64>> = (0..m).map(|_| gaussian_direction(&mut rng, dim)).collect();
    if dim == 2 {
        dirs.extend((0..m).map(|k| {
            let theta = TAU * k as f64 / m as f64;
            vec![theta.cos(), theta.sin()]
        }));
    }
    dirs
}

/// Uniform sample of `rng`'s choice in the closed ball of `radius`.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let d = gaussian_direction(rng, dim);
    let u: f64 = rng.gen();
    let r = radius * u.powf(1.0 / dim as f64);
    d.into_iter().map(|c| c * r).collect()
}

pub fn ball_points(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Point> {
    let mut rng = rng(seed, Stream::BallPoints);
    (0..count)
        .map(|_| Point::new(uniform_in_ball(&mut rng, dim, radius)).expect("finite sample"))
        .collect()
}
