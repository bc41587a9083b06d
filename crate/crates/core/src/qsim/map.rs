use crate::ff::{FieldElem, Matrix, Vector};

/// Classical function f evaluated inside a standard or phase query.
///
/// Linear maps also expose their transpose, which lets a sparse state act on
/// Fourier-frame inputs without expanding them.
pub trait QueryMap: Sync {
    fn input_len(&self) -> usize;
    fn output_len(&self) -> usize;
    fn eval(&self, input: &[FieldElem]) -> Vector;

    /// Aᵀ·b when the map is x ↦ A·x; `None` for nonlinear maps.
    fn transpose_eval(&self, _b: &[FieldElem]) -> Option<Vector> {
        None
    }
}

impl QueryMap for Matrix {
    fn input_len(&self) -> usize {
        self.cols()
    }

    fn output_len(&self) -> usize {
        self.rows()
    }

    fn eval(&self, input: &[FieldElem]) -> Vector {
        self.mul_vec(input).expect("input length checked by the simulator")
    }

    fn transpose_eval(&self, b: &[FieldElem]) -> Option<Vector> {
        Some(self.vec_mul(b).expect("output length checked by the simulator"))
    }
}

/// Arbitrary function wrapped as a [`QueryMap`].
pub struct FnMap<F> {
    input_len: usize,
    output_len: usize,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(&[FieldElem]) -> Vector + Sync,
{
    pub fn new(input_len: usize, output_len: usize, f: F) -> Self {
        FnMap { input_len, output_len, f }
    }
}

impl<F> QueryMap for FnMap<F>
where
    F: Fn(&[FieldElem]) -> Vector + Sync,
{
    fn input_len(&self) -> usize {
        self.input_len
    }

    fn output_len(&self) -> usize {
        self.output_len
    }

    fn eval(&self, input: &[FieldElem]) -> Vector {
        (self.f)(input)
    }
}
