use bdris_core::channel::bs_ris_channel;
use bdris_core::geometry::ArrayGeometry;
use bdris_core::metrics::{cav, cav_of_amplitudes, snr_bdris_closed_form, snr_drris_closed_form};
use bdris_core::ris_config::{
    configure_bdris, configure_bdris_with, configure_dris, make_grouping, takagi, Grouping,
    GroupingStrategy, TakagiRoute,
};
use bdris_core::{units, CMatrix, CVector, C64};
use proptest::prelude::*;

fn complex_vec(n: usize) -> impl Strategy<Value = CVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| CVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| C64::new(a, b))))
}

fn lambda() -> f64 {
    units::wavelength(28e9)
}

fn per_group_nonzero(x: &CVector, grouping: &Grouping) -> bool {
    grouping
        .groups()
        .iter()
        .all(|g| g.iter().map(|&m| x[m].norm_sqr()).sum::<f64>() > 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bdris_is_unitary_symmetric_and_lossless(
        (g, b) in (1usize..=4).prop_flat_map(|k| (complex_vec(4 * k * 3), complex_vec(4 * k * 3))),
        groups_sel in 0usize..4,
        dense in any::<bool>(),
    ) {
        let n = g.len();
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let groups = divisors[groups_sel % divisors.len()];
        let grouping = Grouping::linear(n, groups).unwrap();
        prop_assume!(per_group_nonzero(&g, &grouping) && per_group_nonzero(&b, &grouping));
        let route = if dense { TakagiRoute::Dense } else { TakagiRoute::Structured };
        let omega = configure_bdris_with(&g, &b, &grouping, route).unwrap();
        prop_assert!(omega.unitarity_error() < 1e-9);
        prop_assert!(omega.symmetry_error() < 1e-9);
        let out = omega.apply(&g).unwrap();
        prop_assert!((out.norm() - g.norm()).abs() < 1e-10 * g.norm());
        for idx in grouping.groups() {
            let a: CVector = CVector::from_iterator(idx.len(), idx.iter().map(|&m| b[m]));
            let gq: CVector = CVector::from_iterator(idx.len(), idx.iter().map(|&m| g[m]));
            let oq: CVector = CVector::from_iterator(idx.len(), idx.iter().map(|&m| out[m]));
            let inner = a.dotc(&oq).norm();
            prop_assert!((inner - a.norm() * gq.norm()).abs() < 1e-8 * a.norm() * gq.norm());
        }
    }

    #[test]
    fn fully_connected_beats_diagonal(g in complex_vec(16), h in complex_vec(16)) {
        let b = h.map(|z| z.conj()) / C64::new(h.norm(), 0.0);
        let bd = h.dot(&configure_bdris(&g, &b, &Grouping::linear(16, 1).unwrap()).unwrap().apply(&g).unwrap());
        prop_assume!(g.iter().all(|z| z.norm() > 1e-6));
        let d = h.dot(&configure_dris(&g, &b).unwrap().apply(&g).unwrap());
        prop_assert!(bd.norm_sqr() >= d.norm_sqr() * (1.0 - 1e-10));
        prop_assert!((bd.norm() - h.norm() * g.norm()).abs() < 1e-8 * h.norm() * g.norm());
        prop_assert!(snr_bdris_closed_form(&h, &g).unwrap() >= snr_drris_closed_form(&h, &g).unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn cav_is_scale_invariant(amps in proptest::collection::vec(0.01f64..10.0, 1..50), c in 1e-6f64..1e6) {
        let a = cav_of_amplitudes(&amps).unwrap().cav;
        let scaled: Vec<f64> = amps.iter().map(|x| x * c).collect();
        let b = cav_of_amplitudes(&scaled).unwrap().cav;
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }

    #[test]
    fn equal_amplitude_ratio_is_one_plus_cav_squared(g in complex_vec(25), phases in proptest::collection::vec(0.0f64..6.3, 25)) {
        prop_assume!(g.iter().all(|z| z.norm() > 1e-3));
        let h = CVector::from_iterator(25, phases.iter().map(|&p| C64::from_polar(0.7, p)));
        let ratio = snr_bdris_closed_form(&h, &g).unwrap() / snr_drris_closed_form(&h, &g).unwrap();
        let c = cav(&g).unwrap().cav;
        prop_assert!((ratio - (1.0 + c * c)).abs() < 1e-12 * ratio);
    }

    #[test]
    fn takagi_reconstructs_symmetric_matrices(b in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36)) {
        let m = CMatrix::from_iterator(6, 6, b.into_iter().map(|(x, y)| C64::new(x, y)));
        let a = &m + m.transpose();
        let t = takagi(&a).unwrap();
        let s = CMatrix::from_diagonal(&t.sigma.map(|x| C64::new(x, 0.0)));
        prop_assert!((&a - &t.q * s * t.q.transpose()).norm() < 1e-9 * a.norm());
        prop_assert!((t.q.adjoint() * &t.q - CMatrix::identity(6, 6)).norm() < 1e-10);
        prop_assert!(t.sigma.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn symmetric_groups_keep_full_array_cav() {
    let geom = ArrayGeometry::half_wavelength(10, 10, lambda() / 2.0, lambda()).unwrap();
    let g = bs_ris_channel(&geom).g;
    let full = cav(&g).unwrap().cav;
    let grouping = make_grouping(&geom, 2, GroupingStrategy::MirrorSymmetric).unwrap();
    for idx in grouping.groups() {
        let amps: Vec<f64> = idx.iter().map(|&m| g[m].norm()).collect();
        let c = cav_of_amplitudes(&amps).unwrap().cav;
        assert!((c - full).abs() < 1e-12 * full);
    }
}

#[test]
fn cav_trends_over_size_and_separation() {
    let l = lambda();
    let by_size: Vec<f64> = (1..=5)
        .map(|k| {
            cav(
                &bs_ris_channel(&ArrayGeometry::half_wavelength(2 * k, 2 * k, l / 2.0, l).unwrap())
                    .g,
            )
            .unwrap()
            .cav
        })
        .collect();
    assert!(by_size[0] < 1e-12);
    assert!(by_size.windows(2).all(|w| w[1] > w[0]));
    let by_sep: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|s| {
            cav(&bs_ris_channel(&ArrayGeometry::half_wavelength(10, 10, s * l, l).unwrap()).g)
                .unwrap()
                .cav
        })
        .collect();
    assert!(by_sep.windows(2).all(|w| w[1] < w[0]));
}
