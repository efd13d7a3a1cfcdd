//! Simulator kernel against a dense Kronecker-product model built from scratch.

use num_complex::Complex64 as C;
use qbench_core::sim::{final_state, run_noisy, sample, unitary_of, Channel, NoiseModel};
use qbench_core::{Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

type Dense = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn single(g: &Gate) -> [[C; 2]; 2] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let h = FRAC_1_SQRT_2;
    let phase = |t: f64| C::from_polar(1.0, t);
    match g {
        Gate::X(_) => [[o, l], [l, o]],
        Gate::Y(_) => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        Gate::Z(_) => [[l, o], [o, -l]],
        Gate::H(_) => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        Gate::S(_) => [[l, o], [o, c(0.0, 1.0)]],
        Gate::Sdg(_) => [[l, o], [o, c(0.0, -1.0)]],
        Gate::T(_) => [[l, o], [o, phase(PI / 4.0)]],
        Gate::Tdg(_) => [[l, o], [o, phase(-PI / 4.0)]],
        Gate::U1 { lambda, .. } => [[l, o], [o, phase(*lambda)]],
        other => panic!("not a single-qubit gate: {other:?}"),
    }
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn eye2() -> Dense {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]
}

/// Full operator with `op` on qubit `q`; qubit 0 is the rightmost Kronecker factor.
fn embed(op: Dense, q: usize, n: usize) -> Dense {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for k in (0..n).rev() {
        m = kron(&m, &if k == q { op.clone() } else { eye2() });
    }
    m
}

fn dense(g: &Gate, n: usize) -> Dense {
    match g {
        Gate::CX { control, target } => {
            let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
            let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
            let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
            let keep = embed(p0, *control, n);
            let mut flip = embed(p1, *control, n);
            flip = mul(&embed(x, *target, n), &flip);
            keep.iter()
                .zip(&flip)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a + b).collect())
                .collect()
        }
        other => {
            let m = single(other);
            embed(m.iter().map(|r| r.to_vec()).collect(), other.qubits()[0], n)
        }
    }
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut circ = Circuit::new(n, n);
    for _ in 0..len {
        let q = rng.random_range(0..n);
        let g = match rng.random_range(0..10) {
            0 => Gate::X(q),
            1 => Gate::Y(q),
            2 => Gate::Z(q),
            3 => Gate::H(q),
            4 => Gate::S(q),
            5 => Gate::Sdg(q),
            6 => Gate::T(q),
            7 => Gate::Tdg(q),
            8 => Gate::u1(q, rng.random_range(-4.0..4.0)),
            _ if n > 1 => Gate::cx(q, (q + rng.random_range(1..n)) % n),
            _ => Gate::H(q),
        };
        circ.append(g).unwrap();
    }
    circ
}

fn dense_unitary(circ: &Circuit) -> Dense {
    let n = circ.num_qubits();
    let dim = 1 << n;
    let mut u: Dense = (0..dim)
        .map(|i| (0..dim).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    for g in circ.gates() {
        u = mul(&dense(g, n), &u);
    }
    u
}

#[test]
fn state_vector_matches_dense_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..40 {
        let n = rng.random_range(1..=5);
        let circ = random_circuit(&mut rng, n, 30);
        let u = dense_unitary(&circ);
        let s = final_state(&circ);
        for (i, a) in s.amplitudes().iter().enumerate() {
            assert!((a - u[i][0]).norm() < 1e-12, "trial {trial} index {i}");
        }
    }
}

#[test]
fn unitary_matches_dense_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let n = rng.random_range(1..=4);
        let circ = random_circuit(&mut rng, n, 25);
        let u = dense_unitary(&circ);
        let got = unitary_of(&circ).unwrap();
        for i in 0..u.len() {
            for j in 0..u.len() {
                assert!((got[(i, j)] - u[i][j]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn sampling_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut circ = random_circuit(&mut rng, 4, 30);
    circ.measure_all().unwrap();
    let a = sample(&circ, 4096, 99).unwrap();
    let b = sample(&circ, 4096, 99).unwrap();
    assert_eq!(a.counts, b.counts);
    let other = sample(&circ, 4096, 100).unwrap();
    assert_ne!(a.counts, other.counts);
}

#[test]
fn noiseless_noise_model_matches_ideal_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut circ = random_circuit(&mut rng, 3, 20);
    circ.measure_all().unwrap();
    for channel in [Channel::BitFlip, Channel::Depolarizing] {
        let noise = NoiseModel::new(1.0, channel).unwrap();
        assert_eq!(run_noisy(&circ, &noise, 2048, 5).unwrap().counts, sample(&circ, 2048, 5).unwrap().counts);
    }
}

#[test]
fn sampled_frequencies_track_exact_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut circ = random_circuit(&mut rng, 3, 25);
    let dense_u = dense_unitary(&circ);
    circ.measure_all().unwrap();
    let shots = 8192;
    let counts = sample(&circ, shots, 8).unwrap();
    let bound = 5.0 / (shots as f64).sqrt();
    for (i, row) in dense_u.iter().enumerate() {
        let p = row[0].norm_sqr();
        let key = format!("{i:03b}");
        let f = counts.count(&key) as f64 / shots as f64;
        assert!((f - p).abs() <= bound, "{key}: {f} vs {p}");
    }
}
