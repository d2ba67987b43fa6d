//! Property tests for the algebraic invariants: homogeneity of symbols and
//! kernels, transform round trips, and the serialization format.

use num_complex::Complex64;
use proptest::prelude::*;
use rieszlab_core::fft::{continuous_ft, continuous_ift};
use rieszlab_core::multi_index::MultiIndex;
use rieszlab_core::symbols::{kernel_derivative, kernel_from_radial_symbol, HomogeneousSymbol};
use rieszlab_core::{DomainTag, Grid, SampledField};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbol_homogeneity(
        rho in -2.0f64..2.0,
        m0 in 0usize..3,
        m1 in 0usize..3,
        x0 in prop::num::f64::NORMAL.prop_filter("nonzero", |v| v.abs() > 1e-3 && v.abs() < 1e3),
        x1 in prop::num::f64::NORMAL.prop_filter("nonzero", |v| v.abs() > 1e-3 && v.abs() < 1e3),
        t in 0.01f64..100.0,
    ) {
        let s = HomogeneousSymbol { radial_exponent: rho, monomial: MultiIndex(vec![m0, m1]) };
        let xi = [x0, x1];
        let txi = [t * x0, t * x1];
        let lhs = s.eval(&txi);
        let rhs = s.eval(&xi) * t.powf(s.degree());
        let denom = rhs.norm().max(1e-300);
        prop_assert!((lhs - rhs).norm() / denom < 1e-12,
            "rho={rho} m=({m0},{m1}) t={t}: {lhs} vs {rhs}");
    }

    #[test]
    fn kernel_homogeneity_after_derivatives(
        g in 0.1f64..0.9,
        order in 0usize..3,
        x in prop::num::f64::NORMAL.prop_filter("away from 0", |v| v.abs() > 1e-2 && v.abs() < 1e2),
        t in 0.1f64..10.0,
    ) {
        let k0 = kernel_from_radial_symbol(g, 1).unwrap();
        let k = kernel_derivative(&k0, &MultiIndex(vec![order])).unwrap();
        let lhs = k.eval(&[t * x]).unwrap();
        let rhs = k.eval(&[x]).unwrap() * t.powf(k.degree());
        let denom = rhs.norm().max(1e-300);
        prop_assert!((lhs - rhs).norm() / denom < 1e-11);
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 16)) {
        let grid = Grid::new(1, 3.0, 16).unwrap();
        let f = SampledField::new(
            grid,
            values.iter().map(|&(a, b)| Complex64::new(a, b)).collect(),
            DomainTag::Frequency,
        )
        .unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = SampledField::read_csv(&mut std::io::BufReader::new(&buf[..])).unwrap();
        prop_assert_eq!(back.tag, f.tag);
        for (a, b) in back.values.iter().zip(&f.values) {
            prop_assert!((a - b).norm() <= 1e-16 * b.norm().max(1.0));
        }
    }

    #[test]
    fn ft_round_trip_gaussian_mixtures(
        c0 in -10.0f64..10.0,
        c1 in -10.0f64..10.0,
        w0 in 0.5f64..2.0,
        w1 in 0.5f64..2.0,
        a1 in -2.0f64..2.0,
    ) {
        // random two-bump field, decayed at the box edge by construction
        let grid = Grid::new(1, 40.0, 512).unwrap();
        let f = SampledField::from_fn(grid, |x| {
            (-(x[0] - c0).powi(2) / (2.0 * w0 * w0)).exp()
                + a1 * (-(x[0] - c1).powi(2) / (2.0 * w1 * w1)).exp()
        });
        let back = continuous_ift(&continuous_ft(&f).unwrap()).unwrap();
        let sup = f.sup_norm().max(1e-12);
        for (a, b) in back.values.iter().zip(&f.values) {
            prop_assert!((a - b).norm() <= 1e-10 * sup);
        }
    }
}
