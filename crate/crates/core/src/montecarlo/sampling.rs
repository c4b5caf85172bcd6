use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use super::region::SimRegion;
use crate::analytic::PathLoss;
use crate::error::{invalid, Result};

pub type Point = [f64; 2];

/// Interfering pairs around the typical link. `tx[i]` and `rx[i]` belong to
/// the same pair and are exactly `d` apart.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairSample {
    tx: Vec<Point>,
    rx: Vec<Point>,
}

fn dist2(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

impl PairSample {
    /// Builds a sample from explicit positions, checking the pair distance.
    pub fn new(tx: Vec<Point>, rx: Vec<Point>, pl: &PathLoss) -> Result<Self> {
        if tx.len() != rx.len() {
            return Err(invalid(
                "rx_points",
                format!("{} transmitters but {} receivers", tx.len(), rx.len()),
            ));
        }
        let d = pl.d();
        for (i, (t, r)) in tx.iter().zip(&rx).enumerate() {
            let sep = dist2(*t, *r).sqrt();
            if (sep - d).abs() > 1e-9 * d {
                return Err(invalid(
                    "rx_points",
                    format!("pair {i} is {sep} m apart, expected {d}"),
                ));
            }
        }
        Ok(Self { tx, rx })
    }

    pub fn len(&self) -> usize {
        self.tx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tx.is_empty()
    }

    pub fn tx_points(&self) -> &[Point] {
        &self.tx
    }

    pub fn rx_points(&self) -> &[Point] {
        &self.rx
    }

    /// Distances from each interfering transmitter to `Rx0`.
    pub fn forward_distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.tx.iter().map(|t| dist2(*t, [0.0, 0.0]).sqrt())
    }

    /// Distances from each interfering receiver to `Tx0`.
    pub fn reverse_distances<'a>(&'a self, pl: &PathLoss) -> impl Iterator<Item = f64> + 'a {
        let tx0 = [pl.d(), 0.0];
        self.rx.iter().map(move |r| dist2(*r, tx0).sqrt())
    }

    /// Path-loss weights `dist^-alpha` seen by `Rx0` and `Tx0`.
    pub(crate) fn weights(&self, pl: &PathLoss) -> (Vec<f64>, Vec<f64>) {
        let tx0 = [pl.d(), 0.0];
        let half = -0.5 * pl.alpha();
        let fwd = self.tx.iter().map(|t| dist2(*t, [0.0, 0.0]).powf(half)).collect();
        let rev = self.rx.iter().map(|r| dist2(*r, tx0).powf(half)).collect();
        (fwd, rev)
    }

    pub(crate) fn retain_within(&self, center: Point, radius: f64) -> (Self, Vec<bool>) {
        let keep: Vec<bool> = self
            .tx
            .iter()
            .map(|t| dist2(*t, center) <= radius * radius)
            .collect();
        let pick = |v: &[Point]| {
            v.iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(p, _)| *p)
                .collect()
        };
        (
            Self {
                tx: pick(&self.tx),
                rx: pick(&self.rx),
            },
            keep,
        )
    }
}

pub(crate) fn region_center(pl: &PathLoss) -> Point {
    [0.5 * pl.d(), 0.0]
}

/// Uniform point in the disk plus its partner at distance `d` in a uniform direction.
pub(crate) fn draw_pair<R: Rng + ?Sized>(
    center: Point,
    radius: f64,
    d: f64,
    rng: &mut R,
) -> (Point, Point) {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    let tx = [center[0] + r * theta.cos(), center[1] + r * theta.sin()];
    let phi = 2.0 * PI * rng.random::<f64>();
    (tx, [tx[0] + d * phi.cos(), tx[1] + d * phi.sin()])
}

/// Poisson number of interfering pairs with intensity `lambda` on `region`.
pub fn sample_interferer_pairs<R: Rng + ?Sized>(
    lambda: f64,
    region: &SimRegion,
    pl: &PathLoss,
    rng: &mut R,
) -> PairSample {
    let mean = lambda * region.area();
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("finite positive mean").sample(rng) as usize
    } else {
        0
    };
    let center = region_center(pl);
    let (tx, rx) = (0..count)
        .map(|_| draw_pair(center, region.radius(), pl.d(), rng))
        .unzip();
    PairSample { tx, rx }
}

/// Independent unit-mean exponential powers, `|CN(0,1)|^2`.
pub fn draw_fade_powers<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| Exp1.sample(rng)).collect()
}

/// Fade powers of one band: the desired link and every interferer.
#[derive(Debug, Clone, PartialEq)]
pub struct BandFades {
    pub desired: f64,
    pub interferers: Vec<f64>,
}

impl BandFades {
    pub fn draw<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Self {
        let desired = Exp1.sample(rng);
        Self {
            desired,
            interferers: draw_fade_powers(count, rng),
        }
    }

    /// All fades equal to one.
    pub fn unit(count: usize) -> Self {
        Self {
            desired: 1.0,
            interferers: vec![1.0; count],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pl() -> PathLoss {
        PathLoss::new(4.0, 5.0).unwrap()
    }

    #[test]
    fn zero_density_is_empty() {
        let region = SimRegion::new(100.0, &pl()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_interferer_pairs(0.0, &region, &pl(), &mut rng).is_empty());
    }

    #[test]
    fn pairs_are_d_apart_and_inside_the_disk() {
        let p = pl();
        let region = SimRegion::new(100.0, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = sample_interferer_pairs(1e-2, &region, &p, &mut rng);
        assert!(s.len() > 100);
        let c = region_center(&p);
        for (t, r) in s.tx_points().iter().zip(s.rx_points()) {
            assert!((dist2(*t, *r).sqrt() - 5.0).abs() < 1e-9);
            assert!(dist2(*t, c) <= 100.0 * 100.0);
        }
        assert!(PairSample::new(s.tx_points().to_vec(), s.rx_points().to_vec(), &p).is_ok());
    }

    #[test]
    fn mean_count_is_poisson() {
        let p = pl();
        let region = SimRegion::new(100.0, &p).unwrap();
        let lambda = 1e-3;
        let draws = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let total: usize = (0..draws)
            .map(|_| sample_interferer_pairs(lambda, &region, &p, &mut rng).len())
            .sum();
        let mean = lambda * region.area();
        let sigma = (mean / draws as f64).sqrt();
        let got = total as f64 / draws as f64;
        assert!((got - mean).abs() < 3.0 * sigma, "{got} vs {mean}");
    }

    #[test]
    fn small_pair_distance_makes_distances_nearly_equal() {
        let p = PathLoss::new(4.0, 0.01).unwrap();
        let region = SimRegion::new(50.0, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = sample_interferer_pairs(0.05, &region, &p, &mut rng);
        let fwd: Vec<f64> = s.forward_distances().collect();
        let rev: Vec<f64> = s.reverse_distances(&p).collect();
        let min = fwd.iter().chain(&rev).cloned().fold(f64::INFINITY, f64::min);
        let gap = fwd
            .iter()
            .zip(&rev)
            .map(|(a, b)| (a - b).abs() / a.min(*b))
            .fold(0.0, f64::max);
        assert!(gap <= 2.0 * 0.01 / min + 1e-12, "gap {gap}, min distance {min}");
    }

    #[test]
    fn mismatched_pairs_are_rejected() {
        let p = pl();
        assert!(PairSample::new(vec![[0.0, 10.0]], vec![], &p).is_err());
        assert!(PairSample::new(vec![[0.0, 10.0]], vec![[0.0, 14.0]], &p).is_err());
        assert!(PairSample::new(vec![[0.0, 10.0]], vec![[0.0, 15.0]], &p).is_ok());
    }

    #[test]
    fn fade_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1_000_000;
        let fades = draw_fade_powers(n, &mut rng);
        let mean = fades.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 3.0 / (n as f64).sqrt());
        let tail = fades.iter().filter(|&&x| x > 1.0).count() as f64 / n as f64;
        let p = (-1.0f64).exp();
        assert!((tail - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt());
    }
}
