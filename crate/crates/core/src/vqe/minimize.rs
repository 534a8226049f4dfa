use serde::Serialize;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum<T> {
    pub theta: T,
    pub energy: T,
}

/// Grid minimization with sub-grid refinement.
///
/// `thetas` must be increasing; `None` energies (empty postselection) are
/// skipped. A grid running from −π to π is treated as periodic: the two
/// endpoint values are averaged and reported at +π. The grid argmin (ties
/// toward smaller |θ|) is refined by fitting `A + P cos y + Q sin y` through
/// it and its two neighbours, which is exact for noiseless energies. The
/// refinement is dropped when the neighbours are missing, unevenly spaced,
/// or the fitted minimum leaves the bracketing interval.
pub fn minimize_energy<T: Real>(thetas: &[T], energies: &[Option<T>]) -> Option<Minimum<T>> {
    assert_eq!(thetas.len(), energies.len(), "one energy per grid angle");
    let pi = T::PI();
    let eps = T::lit(1e-12);
    let mut th = thetas.to_vec();
    let mut en = energies.to_vec();
    let periodic = th.len() >= 3 && (th[0] + pi).abs() < eps && (th[th.len() - 1] - pi).abs() < eps;
    if periodic {
        let last = en.len() - 1;
        en[last] = match (en[0], en[last]) {
            (Some(a), Some(b)) => Some((a + b) / T::lit(2.0)),
            (a, b) => a.or(b),
        };
        th.remove(0);
        en.remove(0);
    }
    let n = th.len();

    let tie_tol = |e: T| eps * e.abs().max(T::one());
    let mut best: Option<usize> = None;
    for k in 0..n {
        let Some(e) = en[k] else { continue };
        best = match best {
            None => Some(k),
            Some(b) => {
                let eb = en[b].expect("best index has an energy");
                if e < eb - tie_tol(eb) || ((e - eb).abs() <= tie_tol(eb) && th[k].abs() < th[b].abs()) {
                    Some(k)
                } else {
                    Some(b)
                }
            }
        };
    }
    let k = best?;
    let f0 = en[k].expect("argmin has an energy");
    let grid = Minimum { theta: th[k], energy: f0 };

    let (left, right) = if periodic {
        ((k + n - 1) % n, (k + 1) % n)
    } else if k == 0 || k + 1 == n {
        return Some(grid);
    } else {
        (k - 1, k + 1)
    };
    let (Some(fm), Some(fp)) = (en[left], en[right]) else { return Some(grid) };
    let two_pi = pi + pi;
    let wrap = |d: T| if d < T::zero() { d + two_pi } else { d };
    let (hl, hr) = if periodic { (wrap(th[k] - th[left]), wrap(th[right] - th[k])) } else { (th[k] - th[left], th[right] - th[k]) };
    if (hl - hr).abs() > T::lit(1e-9) * hl.max(hr) || fm < f0 || fp < f0 {
        return Some(grid);
    }
    let h = hr;
    let p = (f0 - (fp + fm) / T::lit(2.0)) / (T::one() - h.cos());
    let q = (fp - fm) / (T::lit(2.0) * h.sin());
    let rho = (p * p + q * q).sqrt();
    if rho <= T::zero() {
        return Some(grid);
    }
    let y = (-q).atan2(-p);
    if y.abs() > h {
        return Some(grid);
    }
    let mut theta = th[k] + y;
    if theta > pi {
        theta -= two_pi;
    } else if theta <= -pi {
        theta += two_pi;
    }
    Some(Minimum { theta, energy: (f0 - p) - rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| -PI + 2.0 * PI * j as f64 / (n - 1) as f64).collect()
    }

    fn analytic(g: [f64; 5], thetas: &[f64]) -> Vec<Option<f64>> {
        thetas.iter().map(|t| Some(g[0] + g[3] + (g[1] + g[2]) * t.cos() + g[4] * t.sin())).collect()
    }

    #[test]
    fn cosine_minimum_at_pi() {
        let th = grid(257);
        let m = minimize_energy(&th, &analytic([0.0, 1.0, 1.0, 0.0, 0.0], &th)).unwrap();
        assert!((m.theta - PI).abs() < 1e-9);
        assert!((m.energy + 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_grid_prefers_zero() {
        let th = grid(257);
        let m = minimize_energy(&th, &vec![Some(0.5); 257]).unwrap();
        assert_eq!(m.theta, 0.0);
        assert_eq!(m.energy, 0.5);
    }

    #[test]
    fn closed_form_minimum_on_random_coefficients() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let th = grid(257);
        for _ in 0..200 {
            let g: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let m = minimize_energy(&th, &analytic(g, &th)).unwrap();
            let expect = g[0] + g[3] - ((g[1] + g[2]).powi(2) + g[4].powi(2)).sqrt();
            assert!((m.energy - expect).abs() < 1e-9, "{g:?}");
        }
    }

    #[test]
    fn skips_missing_points() {
        let th = grid(9);
        let mut e = analytic([0.0, 1.0, 0.0, 0.0, 0.0], &th);
        e[0] = None;
        e[8] = None;
        let m = minimize_energy(&th, &e).unwrap();
        assert!((m.theta.abs() - PI).abs() > 0.1);
        assert!(minimize_energy(&th, &[None; 9]).is_none());
    }

    #[test]
    fn open_grid_edge_minimum_is_unrefined() {
        let th = [0.0, 0.5, 1.0];
        let m = minimize_energy(&th, &[Some(1.0), Some(2.0), Some(3.0)]).unwrap();
        assert_eq!((m.theta, m.energy), (0.0, 1.0));
    }
}
