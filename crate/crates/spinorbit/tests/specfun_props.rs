//! Special-function cross-checks against independent oracles: an exact
//! big-rational evaluation of the Laguerre series, the defining ODE of
//! Dawson's integral, and symmetry/domain properties.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use spinorbit::specfun::{dawson, laguerre, radial_quadrature, sinc};

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Exact L_n^α(x) = Σ_k (−1)^k · C(n+α, n−k) · x^k / k! in rational
/// arithmetic, together with the exact sum of the terms' absolute values
/// (the conditioning scale of the alternating series).
fn laguerre_exact(n: u64, alpha: u64, x: &BigRational) -> (BigRational, BigRational) {
    let mut total = BigRational::zero();
    let mut scale = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut k_factorial = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            k_factorial *= big(k);
            x_pow *= x.clone();
        }
        // C(n+alpha, n-k) computed exactly.
        let mut binomial = BigInt::one();
        for j in 0..(n - k) {
            binomial = binomial * big(n + alpha - j) / big(j + 1);
        }
        let term = BigRational::from(binomial) * &x_pow
            / BigRational::from(k_factorial.clone());
        scale += term.abs();
        total += if k % 2 == 0 { term } else { -term };
    }
    (total, scale)
}

#[test]
fn laguerre_matches_exact_rational_series() {
    // Grid spans the oscillatory region and the far tail used by the
    // radial quadrature (ξ² up to 144).
    let xs: [(i64, i64); 10] = [
        (0, 1),
        (1, 4),
        (1, 2),
        (1, 1),
        (2, 1),
        (7, 2),
        (5, 1),
        (10, 1),
        (20, 1),
        (40, 1),
    ];
    for n in [0u64, 1, 2, 3, 5, 10, 15, 20, 25, 30] {
        for alpha in [0u64, 1, 2, 5] {
            for (num, den) in xs {
                let x = BigRational::new(BigInt::from(num), BigInt::from(den));
                let (exact, scale) = laguerre_exact(n, alpha, &x);
                let want = exact.to_f64().unwrap();
                let scale = scale.to_f64().unwrap();
                let got = laguerre(n as usize, alpha as f64, num as f64 / den as f64).unwrap();
                let error = (got - want).abs();
                // Relative accuracy where the series is well conditioned;
                // absolute accuracy at the conditioning scale near roots.
                if want.abs() > 1e-8 * scale {
                    assert!(
                        error <= 1e-10 * want.abs(),
                        "L_{n}^{alpha}({num}/{den}): got {got:.15e}, exact {want:.15e}"
                    );
                } else {
                    assert!(
                        error <= 1e-12 * scale,
                        "L_{n}^{alpha}({num}/{den}) near root: |err| {error:.3e} vs scale {scale:.3e}"
                    );
                }
            }
        }
    }
}

#[test]
fn laguerre_domain_errors() {
    assert!(laguerre(500, 3.0, 1.0).is_ok());
    assert!(laguerre(501, 3.0, 1.0).is_err());
    assert!(laguerre(4, f64::NAN, 1.0).is_err());
    assert!(laguerre(4, 1.0, f64::INFINITY).is_err());
}

#[test]
fn dawson_satisfies_its_ode() {
    // F'(x) = 1 − 2xF(x); central differences at h = 1e-5 contribute
    // O(h²·F''') ≈ 1e-10 themselves.
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut x = -5.0;
    while x <= 5.0 {
        let derivative = (dawson(x + h).unwrap() - dawson(x - h).unwrap()) / (2.0 * h);
        let residual = (derivative - (1.0 - 2.0 * x * dawson(x).unwrap())).abs();
        worst = worst.max(residual);
        x += 0.25;
    }
    assert!(worst <= 1e-8, "worst ODE residual {worst:.3e}");
}

#[test]
fn dawson_is_continuous_at_the_switchover() {
    // Series below |x| = 6, continued fraction above. The genuine variation
    // across the seam is F'(6)·2ε (with F' = 1 − 2xF from the ODE); any
    // branch mismatch would show up on top of it.
    let eps = 1e-9;
    let below = dawson(6.0 - eps).unwrap();
    let above = dawson(6.0 + eps).unwrap();
    let slope = 1.0 - 12.0 * dawson(6.0).unwrap();
    assert!((above - below - 2.0 * eps * slope).abs() < 1e-12);
}

#[test]
fn dawson_domain_cap() {
    assert!(dawson(50.0).is_ok());
    assert!(dawson(-50.0).is_ok());
    assert!(dawson(50.0 + 1e-9).is_err());
    assert!(dawson(f64::NAN).is_err());
    // Near the cap the asymptotic tail 1/(2x) is already excellent.
    let f = dawson(49.0).unwrap();
    assert!((f - 1.0 / 98.0).abs() < 1e-5);
}

#[test]
fn sinc_small_argument_bridge() {
    // The Taylor bridge and the direct quotient agree across the 1e-4 seam.
    let below = sinc(1e-4 - 1e-12);
    let above = sinc(1e-4 + 1e-12);
    assert!((below - above).abs() < 1e-15);
    assert_eq!(sinc(0.0), 1.0);
    assert!((sinc(std::f64::consts::PI)).abs() < 1e-16);
}

#[test]
fn quadrature_moments_are_exact() {
    // Odd Gaussian moments ∫₀^∞ ξ^{2m+1} e^{−ξ²} dξ = m!/2: the workhorse
    // integrals behind every radial overlap in the crate.
    let rule = radial_quadrature(128).unwrap();
    let mut m_factorial = 1.0f64;
    for m in 0..=20u32 {
        if m > 0 {
            m_factorial *= m as f64;
        }
        let got = rule.integrate(|xi| xi.powi(2 * m as i32 + 1) * (-xi * xi).exp());
        let want = m_factorial / 2.0;
        assert!(
            ((got - want) / want).abs() < 1e-13,
            "moment m = {m}: got {got:.15e}, want {want:.15e}"
        );
    }
}

#[test]
fn quadrature_order_bounds() {
    assert!(radial_quadrature(7).is_err());
    assert!(radial_quadrature(8).is_ok());
    assert!(radial_quadrature(512).is_ok());
    assert!(radial_quadrature(513).is_err());
    let rule = radial_quadrature(96).unwrap();
    assert_eq!(rule.order(), 96);
    assert_eq!(rule.nodes().len(), 96);
    assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    assert!(rule.weights().iter().all(|&w| w > 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dawson_is_odd(x in -50.0f64..50.0) {
        let plus = dawson(x).unwrap();
        let minus = dawson(-x).unwrap();
        prop_assert!((plus + minus).abs() <= 1e-15);
    }

    #[test]
    fn dawson_stays_bounded(x in -50.0f64..50.0) {
        // Global bounds: |F| < 0.5410443, sign follows x.
        let f = dawson(x).unwrap();
        prop_assert!(f.abs() <= 0.5410444);
        if x.abs() > 1e-12 {
            prop_assert!(f * x >= 0.0);
        }
    }

    #[test]
    fn sinc_is_even_and_bounded(x in -100.0f64..100.0) {
        prop_assert!((sinc(x) - sinc(-x)).abs() <= 1e-15);
        prop_assert!(sinc(x).abs() <= 1.0 + 1e-12);
    }
}
