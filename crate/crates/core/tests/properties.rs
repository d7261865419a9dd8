//! Invariants of the triplet model, the aggregated beam and the output
//! layer, checked over randomized inputs.

use std::sync::LazyLock;

use num_complex::Complex64;
use proptest::prelude::*;

use twinbeam_core::dynamics::{closed_form_transfer, evolve, integrated_transfer, ClassicalTrajectory, TripletParams};
use twinbeam_core::experiment::{format_float, parse_config, PowerSweep, RunConfig, SweepContext};
use twinbeam_core::fock::trilinear_propagate;
use twinbeam_core::interference::{hom_profiles, sfg_profile, BeamSplitter};
use twinbeam_core::ode::Tolerance;
use twinbeam_core::statistics::{evolve_state, propagate_state};
use twinbeam_core::{Field, Pair};

/// Vacuum-seeded triplet with unit coupling, parameterized by the gain
/// `K z √n` rather than the length.
fn triplet(n: f64, gain: f64, gamma: f64) -> (TripletParams, f64) {
    let z = gain / n.sqrt();
    (TripletParams::vacuum_seeded(1.0, n, gamma, z).unwrap(), z)
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

static SMALL: LazyLock<(RunConfig, SweepContext)> = LazyLock::new(|| {
    let mut cfg = RunConfig::default();
    cfg.schmidt.n_q = 6;
    cfg.schmidt.n_m = 3;
    cfg.schmidt.n_l = 2;
    cfg.grids.time_oversample = 2;
    let ctx = SweepContext::new(&cfg).unwrap();
    (cfg, ctx)
});

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn evolution_stays_symplectic(n in log_uniform(1.0, 1e8), gain in log_uniform(1e-3, 3.0), gamma in 0.0..=1.0f64) {
        let (p, z) = triplet(n, gain, gamma);
        let ev = evolve(&p, z).unwrap();
        prop_assert!(ev.relative_symplectic_residual() < 1e-10);
    }

    #[test]
    fn closed_forms_match_integration(n in log_uniform(1.0, 1e6), frac in 0.01..1.0f64, pick in any::<bool>()) {
        let gamma = if pick { 1.0 } else { 0.0 };
        let (p, _) = triplet(n, 1.0, gamma);
        let z = frac * ClassicalTrajectory::new(&p).z0();
        let exact = closed_form_transfer(&p, z).unwrap();
        let numeric = integrated_transfer(&p, z, Tolerance::default()).unwrap();
        let scale = 1.0 + exact.big_f_q.amax().max(exact.big_f_p.amax()).max(exact.f_q.abs()).max(exact.f_p.abs());
        prop_assert!(exact.max_difference(&numeric) / scale < 1e-10);
    }

    #[test]
    fn classical_energy_is_conserved(n in log_uniform(1.0, 1e8), frac in 0.0..4.0f64) {
        let (p, _) = triplet(n, 1.0, 0.5);
        let t = ClassicalTrajectory::new(&p);
        let (a_p, a_s) = t.signed_amplitudes(frac * t.z0());
        let total = p.a_p0 * p.a_p0 + p.a_s0 * p.a_s0;
        prop_assert!(((a_p * a_p + a_s * a_s) / total - 1.0).abs() < 1e-12);
        prop_assert!(a_s >= p.a_s0 * (1.0 - 1e-12));
    }

    #[test]
    fn pure_pairing_without_mixing(n in log_uniform(1.0, 1e8), gain in log_uniform(1e-3, 1.0)) {
        let (p, z) = triplet(n, gain, 0.0);
        let st = evolve_state(&p, z, n.sqrt()).unwrap();
        prop_assert_eq!(st.coherent(Field::Signal), 0.0);
        let i = st.intensity(Field::Signal) + st.intensity(Field::Idler);
        // normally ordered, so perfect pairs give -(I_s + I_i)
        prop_assert!((st.difference_variance() + i).abs() <= 1e-9 * (1.0 + i));
    }

    #[test]
    fn reduced_states_obey_uncertainty(n in log_uniform(1.0, 1e6), gain in log_uniform(1e-3, 2.0), gamma in 0.0..=1.0f64) {
        let (p, z) = triplet(n, gain, gamma);
        let st = propagate_state(&evolve(&p, z).unwrap(), [Complex64::new(0.0, 0.0); 3]);
        for f in Field::ALL {
            let b = st.b[f.index()];
            let c = st.c[f.index()].norm();
            prop_assert!(b >= 0.0);
            // (1/2 + B)² - |C|² >= 1/4, relative to the size of the terms
            prop_assert!((0.5 + b).powi(2) - c * c - 0.25 >= -1e-9 * (1.0 + b).powi(2));
        }
        // Cauchy-Schwarz for the pair amplitude
        let d = st.d_total(Pair::SignalIdler).norm_sqr();
        prop_assert!(d <= st.intensity(Field::Signal) * (st.intensity(Field::Idler) + 1.0) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn fock_dynamics_conserve_norm_and_photons(n in 1usize..=12, gain in 0.0..1.0f64) {
        let z = gain / (n as f64).sqrt();
        let st = trilinear_propagate(1.0, n, z, n).unwrap();
        prop_assert!((st.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((st.mean_signal() + st.mean_pump() - n as f64).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn floats_keep_twelve_digits(v in prop::num::f64::NORMAL) {
        let back: f64 = format_float(v).parse().unwrap();
        prop_assert!((back / v - 1.0).abs() < 5e-12);
    }

    #[test]
    fn config_round_trips(gammas in prop::collection::vec(0.0..=1.0f64, 1..5), lo in log_uniform(1e-9, 1e-3), n_points in 1usize..60) {
        let base = RunConfig::default();
        let cfg = RunConfig {
            gamma_list: gammas,
            power_sweep: PowerSweep { min: lo, n_points, ..base.power_sweep },
            ..base
        };
        prop_assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn sfg_terms_add_up(power in log_uniform(1e-8, 0.5), gamma in 0.0..=1.0f64) {
        let (_, ctx) = &*SMALL;
        let tb = ctx.state(gamma, power).unwrap();
        let (shifts, _) = ctx.delays();
        let prof = sfg_profile(&tb, &ctx.temporal, &shifts).unwrap();
        let scale = prof.total.iter().fold(0.0f64, |m, v| m.max(*v));
        for k in 0..prof.tau.len() {
            let sum = prof.baseline[k] + prof.pair[k] + prof.linear[k] - prof.coherent[k];
            prop_assert!(prof.total[k] >= 0.0);
            prop_assert!((prof.total[k] - sum.max(0.0)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn hom_terms_add_up_and_decay(power in log_uniform(1e-8, 0.5), gamma in 0.0..=1.0f64) {
        let (_, ctx) = &*SMALL;
        let tb = ctx.state(gamma, power).unwrap();
        let (_, taus) = ctx.delays();
        let h = hom_profiles(&tb, &BeamSplitter::balanced(), &taus).unwrap();
        for k in 0..taus.len() {
            let sum = 1.0 + h.term_coherent[k] + h.term_pair[k] + h.term_chaotic[k];
            prop_assert!((h.r_n_delta[k] - sum).abs() < 1e-9 * (1.0 + sum.abs()));
        }
        for k in [0, taus.len() - 1] {
            prop_assert!((h.r_n_delta[k] - 1.0).abs() < 1e-3, "edge {} -> {}", taus[k], h.r_n_delta[k]);
        }
    }
}
