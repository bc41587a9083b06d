use mvlab::ff::{Field, Matrix};
use mvlab::oracles::{MvPhaseFromVmv, Oracle, TransposedMv, VmvFromMv};
use mvlab::qsim::{operator_distance, operator_distance_on, Label, SimOptions};
use mvlab::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type State = StateVector;

const TOL: f64 = 1e-10;

fn transpose_distance(m: &Matrix, opts: &SimOptions) -> f64 {
    let o = Oracle::mv_standard(m.clone());
    let sim = TransposedMv::new(&o).unwrap();
    let direct = Oracle::mv_standard(m.transpose());
    let layout = sim.layout();
    let d: f64 = operator_distance(&sim, &direct, &layout, opts).unwrap();
    let inputs = layout.dimension().unwrap();
    assert_eq!(o.queries(), inputs);
    d
}

#[test]
fn transpose_simulation_exhaustive_small() {
    for (q, m, n) in [(2u64, 2, 2), (3, 2, 2), (2, 1, 3), (2, 2, 3), (2, 3, 2), (2, 3, 3), (2, 3, 4), (4, 2, 3), (5, 1, 2)] {
        let f = Field::of_order(q).unwrap();
        let opts = if q.pow((m * n) as u32) <= 512 { SimOptions::dense() } else { SimOptions::framed() };
        for a in Matrix::all(&f, m, n).unwrap() {
            let d = transpose_distance(&a, &opts);
            assert!(d < TOL, "q={q} M={a:?} d={d}");
        }
    }
}

#[test]
fn transpose_simulation_random_larger() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..100 {
        let (q, m, n) = [(2u64, 4, 5), (3, 3, 3), (5, 2, 3), (8, 2, 2), (9, 2, 2)][i % 5];
        let f = Field::of_order(q).unwrap();
        let a = Matrix::random(&f, m, n, &mut rng);
        assert!(transpose_distance(&a, &SimOptions::framed()) < TOL);
    }
}

#[test]
fn symmetric_matrix_transpose_matches_original() {
    let f = Field::prime(3).unwrap();
    let a = Matrix::from_rows(&f, &[vec![1, 2], vec![2, 0]]).unwrap();
    let o = Oracle::mv_standard(a.clone());
    let sim = TransposedMv::new(&o).unwrap();
    let d: f64 = operator_distance(&sim, &Oracle::mv_standard(a), &sim.layout(), &SimOptions::dense()).unwrap();
    assert!(d < TOL);
}

#[test]
fn double_transpose_is_original() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, m, n) in [(2u64, 2, 3), (3, 2, 2), (4, 1, 2)] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..10 {
            let a = Matrix::random(&f, m, n, &mut rng);
            let o = Oracle::mv_standard(a.clone());
            let direct = Oracle::mv_standard(a);
            let inner = TransposedMv::new(&o).unwrap();
            // the transpose of the transposed oracle, expanded with the same circuit
            let twice = |s: &mut State| {
                s.apply_qft(1, false)?;
                s.apply_qft(0, true)?;
                inner.apply_on(s, 1, 0, false)?;
                s.apply_qft(0, false)?;
                s.apply_qft(1, true)
            };
            let layout = o.layout();
            for opts in [SimOptions::dense(), SimOptions::framed()] {
                assert!(operator_distance(&twice, &direct, &layout, &opts).unwrap() < TOL);
            }
        }
    }
}

fn check_vmv_from_mv(a: &Matrix, opts: &SimOptions) {
    let o = Oracle::mv_standard(a.clone());
    let sim = VmvFromMv::new(&o).unwrap();
    let direct = Oracle::vmv_standard(a.clone());
    let layout = sim.layout();
    let m = a.rows();
    let inputs: Vec<Label> = layout.basis_labels().unwrap().filter(|l| l[l.len() - m..].iter().all(|e| e.is_zero())).collect();
    let b = |s: &mut State| direct.apply(s, &[0, 1, 2], false);
    assert!(operator_distance_on(&sim, &b, &layout, &inputs, opts).unwrap() < TOL);
    assert_eq!(o.queries(), 2 * inputs.len() as u64);
    for l in &inputs {
        let mut s = State::basis_state(&layout, l, opts).unwrap();
        sim.apply_on(&mut s, [0, 1, 2, 3], false).unwrap();
        let zero = vec![a.field().zero(); m];
        assert!(s.weight_outside(3, &zero).unwrap() < 1e-12);
    }
}

#[test]
fn vmv_from_mv_exhaustive() {
    for (q, m, n) in [(2u64, 2, 2), (3, 1, 2), (2, 1, 3)] {
        let f = Field::of_order(q).unwrap();
        for a in Matrix::all(&f, m, n).unwrap() {
            check_vmv_from_mv(&a, &SimOptions::dense());
            check_vmv_from_mv(&a, &SimOptions::framed());
        }
    }
}

#[test]
fn vmv_from_mv_counts_two_per_call() {
    let f = Field::prime(2).unwrap();
    let o = Oracle::mv_standard(Matrix::identity(&f, 2));
    let sim = VmvFromMv::new(&o).unwrap();
    let mut s = State::basis_state(&sim.layout(), &[f.zero(); 7], &SimOptions::default()).unwrap();
    for k in 1..=5 {
        sim.apply_on(&mut s, [0, 1, 2, 3], false).unwrap();
        assert_eq!(o.queries(), 2 * k);
    }
    let z = Oracle::mv_standard(Matrix::zeros(&f, 2, 2));
    let id = |_: &mut State| Ok(());
    let zsim = VmvFromMv::new(&z).unwrap();
    let layout = zsim.layout();
    let clean: Vec<Label> = layout.basis_labels().unwrap().filter(|l| l[5..].iter().all(|e| e.is_zero())).collect();
    assert!(operator_distance_on(&zsim, &id, &layout, &clean, &SimOptions::dense()).unwrap() < TOL);
}

#[test]
fn mv_phase_from_vmv_exhaustive() {
    for (q, m, n) in [(2u64, 2, 2), (3, 2, 1), (4, 1, 2)] {
        let f = Field::of_order(q).unwrap();
        for a in Matrix::all(&f, m, n).unwrap() {
            let o = Oracle::vmv_standard(a.clone());
            let sim = MvPhaseFromVmv::new(&o).unwrap();
            let direct = Oracle::mv_phase(a.clone());
            let layout = sim.layout();
            let inputs: Vec<Label> = layout.basis_labels().unwrap().filter(|l| l[n + m] == f.one()).collect();
            let b = |s: &mut State| direct.apply(s, &[0, 1], false);
            for opts in [SimOptions::dense(), SimOptions::framed()] {
                assert!(operator_distance_on(&sim, &b, &layout, &inputs, &opts).unwrap() < TOL);
            }
            assert_eq!(o.queries(), 2 * inputs.len() as u64);
        }
    }
}
