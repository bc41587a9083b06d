//! Query oracles over a hidden matrix, with per-oracle query counters, and
//! the circuits that trade one oracle type for another.
//!
//! Register conventions (sizes for M ∈ F_q^{m×n}):
//!
//! | kind | registers            | standard action         |
//! |------|----------------------|-------------------------|
//! | MV   | x: n, y: m           | y += Mx                 |
//! | VM   | x: m, y: n           | y += Mᵀx                |
//! | VMV  | x: n, y: m, a: 1     | a += yᵀMx               |
//!
//! Phase flavours multiply by e(⟨y, Mx⟩), e(⟨y, Mᵀx⟩) and e(a·yᵀMx).

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem, Matrix, Vector};
use crate::qsim::{Circuit, FnMap, QueryMap, RegisterLayout, StateVector};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Mv,
    Vm,
    Vmv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Standard,
    Phase,
}

/// Oracle access to a hidden matrix. Every application, forward or inverse,
/// quantum or classical, costs one query.
#[derive(Debug)]
pub struct Oracle {
    matrix: Matrix,
    kind: OracleKind,
    flavor: Flavor,
    counter: AtomicU64,
}

struct Bilinear<'a>(&'a Matrix);

impl QueryMap for Bilinear<'_> {
    fn input_len(&self) -> usize {
        self.0.cols() + self.0.rows()
    }

    fn output_len(&self) -> usize {
        1
    }

    fn eval(&self, input: &[FieldElem]) -> Vector {
        let (x, y) = input.split_at(self.0.cols());
        vec![self.0.bilinear(y, x).expect("lengths checked by the simulator")]
    }
}

impl Oracle {
    fn new(matrix: Matrix, kind: OracleKind, flavor: Flavor) -> Self {
        Oracle { matrix, kind, flavor, counter: AtomicU64::new(0) }
    }

    pub fn mv_standard(m: Matrix) -> Self {
        Self::new(m, OracleKind::Mv, Flavor::Standard)
    }

    pub fn mv_phase(m: Matrix) -> Self {
        Self::new(m, OracleKind::Mv, Flavor::Phase)
    }

    pub fn vm_standard(m: Matrix) -> Self {
        Self::new(m, OracleKind::Vm, Flavor::Standard)
    }

    pub fn vm_phase(m: Matrix) -> Self {
        Self::new(m, OracleKind::Vm, Flavor::Phase)
    }

    pub fn vmv_standard(m: Matrix) -> Self {
        Self::new(m, OracleKind::Vmv, Flavor::Standard)
    }

    pub fn vmv_phase(m: Matrix) -> Self {
        Self::new(m, OracleKind::Vmv, Flavor::Phase)
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    /// (m, n) for the hidden M ∈ F_q^{m×n}.
    pub fn dims(&self) -> (usize, usize) {
        (self.matrix.rows(), self.matrix.cols())
    }

    pub fn queries(&self) -> u64 {
        self.counter.load(Ordering::SeqCst)
    }

    pub fn reset_queries(&self) {
        self.counter.store(0, Ordering::SeqCst);
    }

    fn bump(&self) {
        self.counter.fetch_add(1, Ordering::SeqCst);
    }

    /// Register sizes the oracle acts on, in the order of the table above.
    pub fn register_sizes(&self) -> Vec<usize> {
        let (m, n) = self.dims();
        match self.kind {
            OracleKind::Mv => vec![n, m],
            OracleKind::Vm => vec![m, n],
            OracleKind::Vmv => vec![n, m, 1],
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.field(), &self.register_sizes())
    }

    fn require(&self, kind: OracleKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Oracle(format!("{:?} access requested from a {:?} oracle", kind, self.kind)))
        }
    }

    /// Applies the oracle (or its inverse) to the registers `regs`, given in
    /// the order of the table above.
    pub fn apply<T: Real>(&self, state: &mut StateVector<T>, regs: &[usize], inverse: bool) -> Result<()> {
        let want = self.register_sizes();
        if regs.len() != want.len() {
            return Err(Error::DimensionMismatch(format!("{:?} oracle takes {} registers, got {}", self.kind, want.len(), regs.len())));
        }
        for (&r, &k) in regs.iter().zip(&want) {
            let have = state.layout().register_size(r)?;
            if have != k {
                return Err(Error::DimensionMismatch(format!("register {r} has size {have}, oracle expects {k}")));
            }
        }
        if state.layout().field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let transposed;
        let result = match (self.kind, self.flavor) {
            (OracleKind::Mv, Flavor::Standard) => state.apply_standard_query(&self.matrix, &regs[..1], regs[1], inverse),
            (OracleKind::Mv, Flavor::Phase) => state.apply_phase_query(&self.matrix, &regs[..1], regs[1], inverse),
            (OracleKind::Vm, flavor) => {
                transposed = self.matrix.transpose();
                if flavor == Flavor::Standard {
                    state.apply_standard_query(&transposed, &regs[..1], regs[1], inverse)
                } else {
                    state.apply_phase_query(&transposed, &regs[..1], regs[1], inverse)
                }
            }
            (OracleKind::Vmv, Flavor::Standard) => state.apply_standard_query(&Bilinear(&self.matrix), &regs[..2], regs[2], inverse),
            (OracleKind::Vmv, Flavor::Phase) => state.apply_phase_query(&Bilinear(&self.matrix), &regs[..2], regs[2], inverse),
        };
        self.bump();
        result
    }

    /// Classical MV query x ↦ Mx.
    pub fn mv_query(&self, x: &[FieldElem]) -> Result<Vector> {
        self.require(OracleKind::Mv)?;
        let out = self.matrix.mul_vec(x)?;
        self.bump();
        Ok(out)
    }

    /// Classical VM query y ↦ yᵀM.
    pub fn vm_query(&self, y: &[FieldElem]) -> Result<Vector> {
        self.require(OracleKind::Vm)?;
        let out = self.matrix.vec_mul(y)?;
        self.bump();
        Ok(out)
    }

    /// Classical VMV query (x, y) ↦ yᵀMx.
    pub fn vmv_query(&self, x: &[FieldElem], y: &[FieldElem]) -> Result<FieldElem> {
        self.require(OracleKind::Vmv)?;
        let out = self.matrix.bilinear(y, x)?;
        self.bump();
        Ok(out)
    }
}

impl<T: Real> Circuit<T> for Oracle {
    fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        let regs: Vec<usize> = (0..self.register_sizes().len()).collect();
        Oracle::apply(self, state, &regs, false)
    }
}

/// U^{MV}(Mᵀ) from one query to a standard MV oracle over M.
///
/// F_y then F†_x turn the pair into Fourier labels, the M-oracle is applied
/// with the roles of the registers exchanged, and F_x, F†_y undo the frames.
/// Registers: x ∈ F_q^m, y ∈ F_q^n.
pub struct TransposedMv<'a> {
    oracle: &'a Oracle,
}

impl<'a> TransposedMv<'a> {
    pub fn new(oracle: &'a Oracle) -> Result<Self> {
        if oracle.kind != OracleKind::Mv || oracle.flavor != Flavor::Standard {
            return Err(Error::Oracle("transpose simulation needs a standard MV oracle".into()));
        }
        Ok(TransposedMv { oracle })
    }

    pub fn layout(&self) -> RegisterLayout {
        let (m, n) = self.oracle.dims();
        RegisterLayout::new(self.oracle.field(), &[m, n])
    }

    pub fn apply_on<T: Real>(&self, state: &mut StateVector<T>, x: usize, y: usize, inverse: bool) -> Result<()> {
        let (m, n) = self.oracle.dims();
        state.apply_qft(y, false)?;
        state.apply_qft(x, true)?;
        if m == n && x != y {
            state.swap_registers(x, y)?;
            self.oracle.apply(state, &[x, y], inverse)?;
            state.swap_registers(x, y)?;
        } else {
            self.oracle.apply(state, &[y, x], inverse)?;
        }
        state.apply_qft(x, false)?;
        state.apply_qft(y, true)
    }
}

impl<T: Real> Circuit<T> for TransposedMv<'_> {
    fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        self.apply_on(state, 0, 1, false)
    }
}

/// U^{VMV}(M) from two queries (U and U†) to a standard MV oracle over M.
/// Registers: x ∈ F_q^n, y ∈ F_q^m, a ∈ F_q, ancilla ∈ F_q^m (starts and
/// ends at 0).
pub struct VmvFromMv<'a> {
    oracle: &'a Oracle,
}

impl<'a> VmvFromMv<'a> {
    pub fn new(oracle: &'a Oracle) -> Result<Self> {
        if oracle.kind != OracleKind::Mv || oracle.flavor != Flavor::Standard {
            return Err(Error::Oracle("VMV simulation needs a standard MV oracle".into()));
        }
        Ok(VmvFromMv { oracle })
    }

    pub fn layout(&self) -> RegisterLayout {
        let (m, n) = self.oracle.dims();
        RegisterLayout::new(self.oracle.field(), &[n, m, 1, m])
    }

    pub fn apply_on<T: Real>(&self, state: &mut StateVector<T>, regs: [usize; 4], inverse: bool) -> Result<()> {
        let [x, y, a, anc] = regs;
        let field = self.oracle.field().clone();
        let m = self.oracle.dims().0;
        let pair = FnMap::new(2 * m, 1, move |v: &[FieldElem]| vec![field.dot(&v[..m], &v[m..])]);
        self.oracle.apply(state, &[x, anc], false)?;
        state.apply_standard_query(&pair, &[y, anc], a, inverse)?;
        self.oracle.apply(state, &[x, anc], true)
    }
}

impl<T: Real> Circuit<T> for VmvFromMv<'_> {
    fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        self.apply_on(state, [0, 1, 2, 3], false)
    }
}

/// e(a·yᵀMx) from one query to a standard VMV oracle, by conjugating the
/// scalar register with F. On the a = 1 sector this is U^{MVphase}(M).
/// Registers: x ∈ F_q^n, y ∈ F_q^m, a ∈ F_q.
pub struct MvPhaseFromVmv<'a> {
    oracle: &'a Oracle,
}

impl<'a> MvPhaseFromVmv<'a> {
    pub fn new(oracle: &'a Oracle) -> Result<Self> {
        if oracle.kind != OracleKind::Vmv || oracle.flavor != Flavor::Standard {
            return Err(Error::Oracle("MV-phase simulation needs a standard VMV oracle".into()));
        }
        Ok(MvPhaseFromVmv { oracle })
    }

    pub fn layout(&self) -> RegisterLayout {
        self.oracle.layout()
    }

    pub fn apply_on<T: Real>(&self, state: &mut StateVector<T>, regs: [usize; 3], inverse: bool) -> Result<()> {
        let [x, y, a] = regs;
        state.apply_qft(a, true)?;
        self.oracle.apply(state, &[x, y, a], inverse)?;
        state.apply_qft(a, false)
    }
}

impl<T: Real> Circuit<T> for MvPhaseFromVmv<'_> {
    fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        self.apply_on(state, [0, 1, 2], false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{operator_distance, Label, SimOptions};

    type State = StateVector<f64>;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn label(f: &Field, v: &[u64]) -> Label {
        v.iter().map(|&x| f.elem(x).unwrap()).collect()
    }

    #[test]
    fn mv_example_by_hand() {
        let f = f2();
        let m = Matrix::from_rows(&f, &[vec![1, 0], vec![1, 1]]).unwrap();
        let o = Oracle::mv_standard(m.clone());
        for opts in [SimOptions::dense(), SimOptions::framed()] {
            let mut s = State::basis_state(&o.layout(), &label(&f, &[0, 1, 0, 0]), &opts).unwrap();
            Circuit::apply(&o, &mut s).unwrap();
            assert!((s.amplitude(&label(&f, &[0, 1, 0, 1])).unwrap().norm() - 1.0).abs() < 1e-12);

            let t = TransposedMv::new(&o).unwrap();
            let mut s = State::basis_state(&t.layout(), &label(&f, &[0, 1, 0, 0]), &opts).unwrap();
            Circuit::apply(&t, &mut s).unwrap();
            assert!((s.amplitude(&label(&f, &[0, 1, 1, 1])).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(o.queries(), 4);
    }

    #[test]
    fn zero_matrix_oracles_are_identity() {
        let f = Field::prime(3).unwrap();
        let id = |_: &mut State| Ok(());
        let z = Matrix::zeros(&f, 2, 2);
        for o in
            [Oracle::mv_standard(z.clone()), Oracle::mv_phase(z.clone()), Oracle::vmv_standard(z.clone()), Oracle::vmv_phase(z.clone())]
        {
            assert!(operator_distance::<f64>(&o, &id, &o.layout(), &SimOptions::dense()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn vmv_phase_on_unit_scalar() {
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_rows(&f, &[vec![1, 2], vec![0, 1]]).unwrap();
        let o = Oracle::vmv_phase(m.clone());
        for lbl in RegisterLayout::new(&f, &[2, 2]).basis_labels().unwrap() {
            let mut full = lbl.clone();
            full.push(f.one());
            let mut s = State::basis_state(&o.layout(), &full, &SimOptions::default()).unwrap();
            Circuit::apply(&o, &mut s).unwrap();
            let want = f.char_e::<f64>(m.bilinear(&lbl[2..], &lbl[..2]).unwrap());
            assert!((s.amplitude(&full).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn classical_queries_count() {
        let f = f2();
        let m = Matrix::identity(&f, 3);
        let o = Oracle::vmv_standard(m);
        let e = label(&f, &[1, 0, 0]);
        assert_eq!(o.vmv_query(&e, &e).unwrap(), f.one());
        assert!(o.mv_query(&e).is_err());
        assert_eq!(o.queries(), 1);
    }

    #[test]
    fn oracle_rejects_wrong_registers() {
        let f = f2();
        let o = Oracle::mv_standard(Matrix::zeros(&f, 2, 3));
        let layout = RegisterLayout::new(&f, &[2, 3]);
        let mut s = State::basis_state(&layout, &[f.zero(); 5], &SimOptions::default()).unwrap();
        assert!(o.apply(&mut s, &[0, 1], false).is_err());
        assert!(o.apply(&mut s, &[1, 0], false).is_ok());
    }

    #[test]
    fn mv_phase_from_vmv_gives_standard_mv_after_conjugation() {
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_rows(&f, &[vec![2, 1]]).unwrap();
        let vmv = Oracle::vmv_standard(m.clone());
        let sim = MvPhaseFromVmv::new(&vmv).unwrap();
        let direct = Oracle::mv_standard(m.clone());
        let layout = vmv.layout();
        let a = |s: &mut State| {
            s.apply_qft(1, false)?;
            sim.apply_on(s, [0, 1, 2], false)?;
            s.apply_qft(1, true)
        };
        let b = |s: &mut State| direct.apply(s, &[0, 1], false);
        let inputs: Vec<Label> = layout.basis_labels().unwrap().filter(|l| l[3] == f.one()).collect();
        let d = crate::qsim::operator_distance_on::<f64>(&a, &b, &layout, &inputs, &SimOptions::dense()).unwrap();
        assert!(d < 1e-10, "distance {d}");
    }
}
