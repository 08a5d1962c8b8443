//! Property suites that need no training.

mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use qgaa::adversarial::{per_label_loss, qgan_loss, DiscriminatorSpec, GeneratorSpec};
use qgaa::circuit::{AnsatzFamily, AnsatzSpec, LabelEncoding};
use qgaa::ensemble::LabeledEnsemble;
use qgaa::linalg::{eig_hermitian, partial_trace, tensor_product, CMatrix, DensityMatrix, StateVector};
use qgaa::metrics::{
    bloch_overlap, bloch_vector, entanglement_entropy, fidelity, fidelity_pure, swap_overlap, swap_overlap_circuit,
    trace_distance,
};
use qgaa::optim::{adam_step, AdamState};
use qgaa::pipeline::entangled_state;
use qgaa::qae::{DecoderLayout, QaeCircuits, QaeConfig, QaeOptimizer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn fidelity_axioms(a in arb_density(2), b in arb_density(2)) {
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fidelity_is_unitarily_invariant(a in arb_density(2), b in arb_density(2), u in arb_unitary(2)) {
        let before = fidelity(&a, &b).unwrap();
        let after = fidelity(&u.conjugate(&a).unwrap(), &u.conjugate(&b).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-9, "{before} vs {after}");
    }

    #[test]
    fn pure_fidelity_matches_overlap(a in arb_state(3), b in arb_state(3), rho in arb_density(3)) {
        let oracle = overlap_sq(&a, &b);
        prop_assert!((fidelity(&a.to_density(), &b.to_density()).unwrap() - oracle).abs() < 1e-9);
        prop_assert!((fidelity_pure(&a, &b.to_density()).unwrap() - oracle).abs() < 1e-12);
        // mixed second argument: both routes through the library agree
        prop_assert!((fidelity_pure(&a, &rho).unwrap() - fidelity(&a.to_density(), &rho).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn tensor_then_trace_round_trips(a in arb_density(2), b in arb_density(1)) {
        let ab = tensor_product(&a, &b);
        prop_assert!(ab.matrix().max_abs_diff(&kron_oracle(a.matrix(), b.matrix())) < 1e-12);
        prop_assert!(partial_trace(&ab, &[0, 1]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-9);
        prop_assert!(partial_trace(&ab, &[2]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-9);
    }

    #[test]
    fn partial_trace_matches_index_sums(rho in arb_density(3)) {
        let head = partial_trace(&rho, &[0]).unwrap();
        prop_assert!(head.matrix().max_abs_diff(&trace_out_tail(rho.matrix(), 3, 1)) < 1e-12);
        let tail = partial_trace(&rho, &[1, 2]).unwrap();
        prop_assert!(tail.matrix().max_abs_diff(&trace_out_head(rho.matrix(), 3, 2)) < 1e-12);
        prop_assert!((tail.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_circuit_matches_trace(a in arb_density(2), b in arb_density(2)) {
        let direct = swap_overlap(&a, &b).unwrap();
        let circuit = swap_overlap_circuit(&a, &b).unwrap();
        prop_assert!((direct - circuit).abs() < 1e-10, "{direct} vs {circuit}");
    }

    #[test]
    fn bloch_overlap_is_pure_fidelity(a in arb_state(1), b in arb_state(1)) {
        let (va, vb) = (bloch_vector(&a.to_density()).unwrap(), bloch_vector(&b.to_density()).unwrap());
        prop_assert!((bloch_overlap(&va, &vb) - overlap_sq(&a, &b)).abs() < 1e-10);
    }

    #[test]
    fn trace_distance_matches_oracle(a in arb_density(2), b in arb_density(2)) {
        let d = trace_distance(&a, &b).unwrap();
        prop_assert!((d - trace_distance_oracle(a.matrix(), b.matrix())).abs() < 1e-9);
    }

    #[test]
    fn eigen_reconstructs(rho in arb_density(3)) {
        let m = rho.matrix();
        let e = eig_hermitian(m).unwrap();
        let back = e.map_values(|x| x);
        prop_assert!(back.max_abs_diff(m) < 1e-8 * m.frobenius_norm().max(1.0));
        let oracle = eigenvalues_oracle(m);
        prop_assert!(max_abs_diff(&e.values, &oracle) < 1e-9);
    }

    #[test]
    fn qae_loss_is_bounded(p in arb_params(24), raw in prop::collection::vec(arb_state(3), 1..4)) {
        let spec = AnsatzSpec::new(AnsatzFamily::LinearEntangling, 3, 1);
        let cfg = QaeConfig {
            n_qubits: 3,
            latent_qubits: 1,
            encoder: spec,
            decoder: spec,
            optimizer: QaeOptimizer::Adam { lr: 0.1, iterations: 1, schedule: None },
            seed: 0,
            restarts: 1,
            decoder_layout: DecoderLayout::Mirrored,
            init: None,
        };
        let c = QaeCircuits::new(&cfg).unwrap();
        let ens = LabeledEnsemble::from_pure(3, raw.into_iter().enumerate().map(|(i, s)| (vec![i as f64], s))).unwrap();
        let (e, d) = p.split_at(12);
        let l = c.loss(e, d, &ens).unwrap();
        prop_assert!((0.0..=1.0).contains(&l));
    }

    #[test]
    fn eq15_label_k1_moves_only_the_phase(g in arb_params(2), k0 in 0.0..PI, k1a in 0.0..2.0 * PI, k1b in 0.0..2.0 * PI) {
        let gen = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::EntangledGenerator, 1, 1), g).unwrap();
        // the trailing RY(g₁) mixes x into z, so compare before it:
        // undoing RY(θ) sends the Bloch z to x·sin θ + z·cos θ
        let pre_z = |k1: f64| {
            let v = bloch_vector(&gen.generate(&[k0, k1]).unwrap()).unwrap();
            v.x * gen.theta[1].sin() + v.z * gen.theta[1].cos()
        };
        prop_assert!((pre_z(k1a) - pre_z(k1b)).abs() < 1e-12);
        prop_assert!((pre_z(k1a) - k0.cos()).abs() < 1e-12);
        // with g₁ = 0 the generated state itself keeps its z
        let flat = GeneratorSpec { theta: vec![gen.theta[0], 0.0], ..gen.clone() };
        let za = bloch_vector(&flat.generate(&[k0, k1a]).unwrap()).unwrap().z;
        let zb = bloch_vector(&flat.generate(&[k0, k1b]).unwrap()).unwrap().z;
        prop_assert!((za - zb).abs() < 1e-12);
    }

    #[test]
    fn generated_states_are_pure(theta in arb_params(20), r in 0.2..4.0f64) {
        let gen = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::GeneratorMeta, 1, 8), theta).unwrap();
        prop_assert!((gen.generate(&[r]).unwrap().purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adam_first_step_scales_with_lr(g in prop::collection::vec(-5.0..5.0f64, 4), x in arb_params(4)) {
        let (_, p1) = adam_step(&AdamState::new(4, 0.01), &g, &x).unwrap();
        let (_, p2) = adam_step(&AdamState::new(4, 0.02), &g, &x).unwrap();
        for j in 0..4 {
            prop_assert!(((p2[j] - x[j]) - 2.0 * (p1[j] - x[j])).abs() < 1e-12);
        }
    }
}

fn random_disc(rng: &mut ChaCha8Rng, spec: AnsatzSpec, enc: LabelEncoding, input: usize) -> DiscriminatorSpec {
    let n = enc.param_count(input) + spec.param_count().unwrap();
    DiscriminatorSpec::new(input, spec, enc, (0..n).map(|_| rng.random_range(-PI..PI)).collect()).unwrap()
}

fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let raw: Vec<(f64, f64)> = (0..1 << n).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    state_from(&raw).unwrap()
}

/// `L_K ≤ ½(1 + D_tr(η, ν))` over 200 random discriminators per pair.
#[test]
fn helstrom_ceiling_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = [
        (AnsatzSpec::new(AnsatzFamily::EntangledDiscriminator, 2, 1), LabelEncoding::None),
        (AnsatzSpec::new(AnsatzFamily::CompactDiscriminator, 2, 1), LabelEncoding::Affine),
    ];
    for (spec, enc) in cases {
        for pair in 0..5 {
            let theta_g: Vec<f64> = match spec.family {
                AnsatzFamily::EntangledDiscriminator => (0..2).map(|_| rng.random_range(-PI..PI)).collect(),
                _ => (0..6).map(|_| rng.random_range(-PI..PI)).collect(),
            };
            let (g, label) = match spec.family {
                AnsatzFamily::EntangledDiscriminator => {
                    (GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::EntangledGenerator, 1, 1), theta_g).unwrap(), vec![1.3, 0.7])
                }
                _ => (GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::GeneratorMeta, 1, 1), theta_g).unwrap(), vec![0.9]),
            };
            let eta = if pair == 0 { random_pure(&mut rng, 1).to_density() } else {
                let a = random_pure(&mut rng, 1).to_density();
                let b = random_pure(&mut rng, 1).to_density();
                DensityMatrix::mixture(&[&a, &b]).unwrap()
            };
            let nu = g.generate(&label).unwrap();
            let ceiling = 0.5 * (1.0 + trace_distance_oracle(eta.matrix(), nu.matrix()));
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..200 {
                let d = random_disc(&mut rng, spec, enc, 1);
                worst = worst.max(per_label_loss(&d, &g, &eta, &label).unwrap());
            }
            assert!(worst <= ceiling + 1e-9, "{spec:?}: {worst} > {ceiling}");
        }
    }
}

/// Orthogonal real/fake pair with a CX-only body: the ceiling of 1 is reached.
#[test]
fn orthogonal_pair_reaches_unit_loss() {
    // zero angles leave the ring CX(input → probe)·CX(probe → input):
    // |0⟩ keeps the probe at |0⟩, |1⟩ ends with the probe at |1⟩
    let d = DiscriminatorSpec::new(1, AnsatzSpec::new(AnsatzFamily::CircularEntangling, 2, 1), LabelEncoding::None, vec![0.0; 4]).unwrap();
    let g = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::EntangledGenerator, 1, 1), vec![0.0, PI]).unwrap();
    let nu = g.generate(&[0.0, 0.0]).unwrap();
    assert!((nu.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
    let l = per_label_loss(&d, &g, &DensityMatrix::zero(1), &[0.0, 0.0]).unwrap();
    assert!((l - 1.0).abs() < 1e-12, "{l}");
}

/// Identical real and fake families give exactly one half for any discriminator.
#[test]
fn half_is_a_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::GeneratorMeta, 1, 2), (0..8).map(|_| rng.random_range(-PI..PI)).collect()).unwrap();
    let mut real = LabeledEnsemble::new(1);
    for r in [0.3, 0.9, 1.5, 2.1] {
        real.push_pure(vec![r], g.generate_state(&[r]).unwrap()).unwrap();
    }
    for _ in 0..50 {
        let d = random_disc(&mut rng, AnsatzSpec::new(AnsatzFamily::CompactDiscriminator, 2, 1), LabelEncoding::Affine, 1);
        assert!((qgan_loss(&d, &g, &real).unwrap() - 0.5).abs() < 1e-12);
    }
    let g2 = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::EntangledGenerator, 1, 1), vec![0.4, -1.2]).unwrap();
    let mut real2 = LabeledEnsemble::new(1);
    for k1 in [0.0, 1.0, 4.0] {
        real2.push_mixed(vec![1.5, k1], g2.generate(&[1.5, k1]).unwrap()).unwrap();
    }
    for _ in 0..50 {
        let d = random_disc(&mut rng, AnsatzSpec::new(AnsatzFamily::EntangledDiscriminator, 2, 1), LabelEncoding::None, 1);
        assert!((qgan_loss(&d, &g2, &real2).unwrap() - 0.5).abs() < 1e-12);
    }
}

/// Rebuilds `T̂` from probabilities on an informationally complete set of
/// inputs and checks it is a valid POVM element reproducing every probability.
#[test]
fn tomographic_povm_element_is_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..20 {
        let d = random_disc(&mut rng, AnsatzSpec::new(AnsatzFamily::CompactDiscriminator, 2, 1), LabelEncoding::Affine, 1);
        let label = [rng.random_range(0.2..2.0)];
        let p = |psi: StateVector| d.prob_real_pure(&label, &psi).unwrap();
        let zero = c(0.0, 0.0);
        let p0 = p(StateVector::new(vec![c(1.0, 0.0), zero]).unwrap());
        let p1 = p(StateVector::new(vec![zero, c(1.0, 0.0)]).unwrap());
        let px = p(StateVector::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap());
        let py = p(StateVector::new(vec![c(s, 0.0), c(0.0, s)]).unwrap());
        // ⟨+|T|+⟩ = (T00 + T11)/2 + Re T01, ⟨+i|T|+i⟩ = (T00 + T11)/2 − Im T01
        let re = px - 0.5 * (p0 + p1);
        let im = 0.5 * (p0 + p1) - py;
        let t = CMatrix::from_vec(2, 2, vec![c(p0, 0.0), c(re, im), c(re, -im), c(p1, 0.0)]);
        let ev = eigenvalues_oracle(&t);
        assert!(ev[0] >= -1e-9 && ev[1] <= 1.0 + 1e-9, "{ev:?}");
        let f = &CMatrix::identity(2) - &t;
        let fev = eigenvalues_oracle(&f);
        assert!(fev[0] >= -1e-9);
        for _ in 0..5 {
            let a = random_pure(&mut rng, 1).to_density();
            let b = random_pure(&mut rng, 1).to_density();
            let rho = DensityMatrix::mixture(&[&a, &b]).unwrap();
            let predicted = t.trace_product(rho.matrix()).re;
            let direct = d.prob_real(&label, &rho).unwrap();
            assert!((predicted - direct).abs() < 1e-9);
            assert!((predicted + f.trace_product(rho.matrix()).re - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn entropy_checkpoints() {
    let bell = entangled_state(PI / 2.0, 0.3);
    assert!((entanglement_entropy(&bell, &[0]).unwrap() - 1.0).abs() < 0.005);
    let k0 = 0.5 * PI - 0.06 * PI;
    let edge = entanglement_entropy(&entangled_state(k0, 1.1), &[0]).unwrap();
    assert!((edge - 0.97).abs() < 0.005, "{edge}");
    assert!((edge - h2((k0 / 2.0).cos().powi(2))).abs() < 1e-12);
}

#[test]
fn eq_chi_bloch_vector() {
    // RZ(k1) RY(k0)|0⟩ at K = (π/2, π/2) points along +y
    let g = GeneratorSpec::new(AnsatzSpec::new(AnsatzFamily::EntangledGenerator, 1, 1), vec![0.0, 0.0]).unwrap();
    let b = bloch_vector(&g.generate(&[PI / 2.0, PI / 2.0]).unwrap()).unwrap();
    assert!(b.x.abs() < 1e-12 && (b.y - 1.0).abs() < 1e-12 && b.z.abs() < 1e-12);
}
