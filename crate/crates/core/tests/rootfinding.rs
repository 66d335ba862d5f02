use chebcontour::chebcore::monomial_to_chebyshev;
use chebcontour::{
    build_colleague, eigen_roots, registry_lookup, roots_in_interval, roots_of_derivative, ChebSeries,
    NodeRule, RootOptions, Strategy,
};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monomial coefficients (ascending) of `prod (x - r)`.
fn from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &v) in c.iter().enumerate() {
            next[k + 1] += v;
            next[k] -= v * r;
        }
        c = next;
    }
    c.iter().map(|v| v.re).collect()
}

fn horner(mono: &[f64], x: f64) -> f64 {
    mono.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `g` on a fine grid of `[-1, 1]`, refined by bisection.
fn bisection_roots(g: impl Fn(f64) -> f64) -> Vec<f64> {
    let k = 4000;
    let xs: Vec<f64> = (0..=k).map(|i| -1.0 + 2.0 * i as f64 / k as f64).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (g(w[0]), g(w[1]));
        if a == 0.0 {
            out.push(w[0]);
        } else if (a < 0.0) != (b < 0.0) && b != 0.0 {
            out.push(bisect(&g, w[0], w[1]));
        }
    }
    if g(1.0) == 0.0 {
        out.push(1.0);
    }
    out
}

struct Case {
    series: ChebSeries,
    mono: Vec<f64>,
    all_roots: Vec<Complex64>,
}

/// Separated real roots inside the interval plus complex pairs near it.
fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let degree = rng.gen_range(1..=12usize);
    let pairs = rng.gen_range(0..=degree / 2);
    let reals = degree - 2 * pairs;
    let mut slots: Vec<usize> = (0..20).collect();
    slots.shuffle(rng);
    let mut roots: Vec<Complex64> = slots[..reals]
        .iter()
        .map(|&s| Complex64::new(-0.95 + 0.1 * s as f64 + rng.gen_range(-0.02..0.02), 0.0))
        .collect();
    for _ in 0..pairs {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..0.8));
        roots.push(z);
        roots.push(z.conj());
    }
    let mono = from_roots(&roots);
    let mut plain = monomial_to_chebyshev(&mono);
    plain[0] *= 2.0;
    Case {
        series: ChebSeries::first_kind(plain).unwrap(),
        mono,
        all_roots: roots,
    }
}

/// Greedy nearest matching; returns the worst distance, or infinity when
/// the sizes differ.
fn multiset_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    let mut left: Vec<Complex64> = want.to_vec();
    let mut worst: f64 = 0.0;
    for g in got {
        let (i, d) = left
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (g - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(i);
    }
    worst
}

#[test]
fn colleague_roots_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..100 {
        let case = random_case(&mut rng);
        let eig = eigen_roots(&build_colleague(&case.series).unwrap()).unwrap();
        let d = multiset_distance(&eig, &case.all_roots);
        assert!(d <= 1e-9, "trial {trial}: eigenvalues off by {d}");

        let found = roots_in_interval(&case.series, &RootOptions::default()).unwrap();
        let oracle = bisection_roots(|x| horner(&case.mono, x));
        let as_c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        let d = multiset_distance(&as_c(&found.roots), &as_c(&oracle));
        assert!(d <= 1e-9, "trial {trial}: interval roots off by {d}");
    }
}

#[test]
fn residuals_are_small_relative_to_the_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..100 {
        let case = random_case(&mut rng);
        let peak = (0..=2000)
            .map(|i| case.series.eval(-1.0 + i as f64 / 1000.0).abs())
            .fold(0.0, f64::max);
        let found = roots_in_interval(&case.series, &RootOptions::default()).unwrap();
        assert_eq!(found.residuals.len(), found.roots.len());
        for r in &found.residuals {
            assert!(*r <= 1e-10 * peak, "residual {r} vs peak {peak}");
        }
        assert!(found.roots.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn trailing_noise_does_not_move_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..50 {
        let case = random_case(&mut rng);
        let base = roots_in_interval(&case.series, &RootOptions::default()).unwrap();
        let peak = case.series.coeffs().iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let mut noisy = case.series.coeffs().to_vec();
        noisy.extend((0..10).map(|_| rng.gen_range(-1e-15..1e-15) * peak));
        let perturbed =
            roots_in_interval(&ChebSeries::first_kind(noisy).unwrap(), &RootOptions::default()).unwrap();
        assert_eq!(base.roots.len(), perturbed.roots.len());
        for (a, b) in base.roots.iter().zip(&perturbed.roots) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

/// Worst distance from each reported root to the exact roots of `f^(s)`.
fn root_error(found: &[f64], exact: &[f64]) -> f64 {
    assert_eq!(found.len(), exact.len(), "{found:?} vs {exact:?}");
    found
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[test]
fn exp2cos_first_derivative_root() {
    let f = registry_lookup("exp2cos", &[]).unwrap();
    let opt = Strategy::Optimal { nodes: NodeRule::Fixed(100) };
    let found = roots_of_derivative(&f, 1, 60, &opt, &RootOptions::default()).unwrap();
    let exact = bisection_roots(|x| 2.0 * (2.0 * x).exp() - 2.0 * (2.0 * x + 3.0).sin());
    assert_eq!(found.roots.len(), 1);
    assert!(root_error(&found.roots, &exact) <= 1e-11);
}

#[test]
fn optimal_strategy_dominates_unit_radius_for_high_derivatives() {
    let f = registry_lookup("exp2cos", &[]).unwrap();
    let opt = Strategy::Optimal { nodes: NodeRule::Fixed(100) };
    let unit = Strategy::FixedRho { rho: 1.0, m: 100 };
    for s in [4, 5] {
        let exact = bisection_roots(|x| f.derivative(x, s).unwrap());
        let a = roots_of_derivative(&f, s, 60, &opt, &RootOptions::default()).unwrap();
        let b = roots_of_derivative(&f, s, 60, &unit, &RootOptions::default()).unwrap();
        let (ea, eb) = (root_error(&a.roots, &exact), root_error(&b.roots, &exact));
        assert!(ea <= 0.1 * eb, "s={s}: optimal {ea:e} vs unit radius {eb:e}");
    }
}
