use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::layout::{Label, RegisterLayout};
use super::map::QueryMap;
use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem};
use crate::scalar::Real;

/// Amplitudes below this magnitude are dropped from sparse states.
pub const PRUNE_THRESHOLD: f64 = 1e-13;

/// Basis a sparse register is currently expressed in. A term labelled `a`
/// on a Fourier-frame register stands for F|a⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Computational,
    Fourier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Dense,
    Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOptions {
    /// Representation chosen at construction.
    pub representation: Representation,
    /// Largest dimension allowed for dense storage.
    pub dense_cap: u64,
    /// Largest number of stored sparse terms.
    pub sparse_cap: usize,
    /// Sparse QFTs flip register frames instead of expanding terms.
    pub lazy_fourier: bool,
    /// Sparse states switch to dense storage once more than a quarter of
    /// the amplitudes are nonzero.
    pub auto_promote: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            representation: Representation::Sparse,
            dense_cap: 1 << 24,
            sparse_cap: 1 << 24,
            lazy_fourier: true,
            auto_promote: true,
        }
    }
}

impl SimOptions {
    /// Explicit dense state vectors.
    pub fn dense() -> Self {
        SimOptions { representation: Representation::Dense, ..Self::default() }
    }

    /// Sparse maps with explicitly expanded Fourier transforms.
    pub fn sparse_explicit() -> Self {
        SimOptions { lazy_fourier: false, auto_promote: false, ..Self::default() }
    }

    /// Sparse maps with per-register frames (the default).
    pub fn framed() -> Self {
        Self::default()
    }
}

#[derive(Clone, Debug)]
enum Storage<T> {
    Dense(Vec<Complex<T>>),
    Sparse(BTreeMap<Label, Complex<T>>),
}

/// Pure state over a [`RegisterLayout`].
#[derive(Clone, Debug)]
pub struct StateVector<T: Real> {
    layout: RegisterLayout,
    storage: Storage<T>,
    frames: Vec<Frame>,
    options: SimOptions,
}

fn prune<T: Real>() -> T {
    T::from_f64_lossy(PRUNE_THRESHOLD)
}

/// Table of q^{-1/2} e(±xy), row y, column x.
fn fourier_table<T: Real>(field: &Field, inverse: bool) -> Vec<Complex<T>> {
    let q = field.q() as usize;
    let chars = field.character_table::<T>();
    let norm = T::one() / T::from_f64_lossy(q as f64).sqrt();
    let mut t = Vec::with_capacity(q * q);
    for y in field.elements() {
        for x in field.elements() {
            let c = chars[field.trace_to_prime(field.mul(x, y)) as usize];
            let c = if inverse { c.conj() } else { c };
            t.push(c * norm);
        }
    }
    t
}

impl<T: Real> StateVector<T> {
    /// Unit amplitude on one basis label.
    pub fn basis_state(layout: &RegisterLayout, label: &[FieldElem], options: &SimOptions) -> Result<Self> {
        layout.check_label(label)?;
        let mut map = BTreeMap::new();
        map.insert(label.to_vec(), Complex::one());
        Self::from_map(layout, map, options)
    }

    /// Normalized superposition of the given (label, amplitude) terms.
    pub fn superposition(layout: &RegisterLayout, terms: &[(Label, Complex<T>)], options: &SimOptions) -> Result<Self> {
        let mut map: BTreeMap<Label, Complex<T>> = BTreeMap::new();
        for (label, amp) in terms {
            layout.check_label(label)?;
            *map.entry(label.clone()).or_insert_with(Complex::zero) += *amp;
        }
        map.retain(|_, a| a.norm() > prune::<T>());
        let norm = map.values().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm <= prune::<T>() {
            return Err(Error::DimensionMismatch("superposition has zero norm".into()));
        }
        for a in map.values_mut() {
            *a /= norm;
        }
        Self::from_map(layout, map, options)
    }

    fn from_map(layout: &RegisterLayout, map: BTreeMap<Label, Complex<T>>, options: &SimOptions) -> Result<Self> {
        let mut s = StateVector {
            layout: layout.clone(),
            storage: Storage::Sparse(map),
            frames: vec![Frame::Computational; layout.num_registers()],
            options: options.clone(),
        };
        if options.representation == Representation::Dense {
            s.make_dense()?;
        }
        Ok(s)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn options(&self) -> &SimOptions {
        &self.options
    }

    pub fn representation(&self) -> Representation {
        match self.storage {
            Storage::Dense(_) => Representation::Dense,
            Storage::Sparse(_) => Representation::Sparse,
        }
    }

    pub fn frame(&self, reg: usize) -> Result<Frame> {
        self.frames.get(reg).copied().ok_or(Error::InvalidRegister(reg))
    }

    /// Number of stored amplitudes (nonzero terms for sparse storage).
    pub fn num_terms(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.len(),
            Storage::Sparse(m) => m.len(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        match &self.storage {
            Storage::Dense(v) => v.iter().map(|a| a.norm_sqr()).sum(),
            Storage::Sparse(m) => m.values().map(|a| a.norm_sqr()).sum(),
        }
    }

    fn field(&self) -> &Field {
        self.layout.field()
    }

    fn dense_dimension(&self) -> Result<usize> {
        self.layout.dimension().filter(|&d| d <= self.options.dense_cap && d <= usize::MAX as u64).map(|d| d as usize).ok_or_else(|| {
            Error::CapExceeded(format!("dense state of q^{} amplitudes exceeds cap {}", self.layout.num_symbols(), self.options.dense_cap))
        })
    }

    /// Switches to dense storage, expanding any Fourier frames.
    pub fn make_dense(&mut self) -> Result<()> {
        if let Storage::Dense(_) = self.storage {
            return Ok(());
        }
        let dim = self.dense_dimension()?;
        self.materialize()?;
        let Storage::Sparse(map) = &self.storage else { unreachable!() };
        let mut v = vec![Complex::zero(); dim];
        for (label, &a) in map {
            v[self.layout.index_of(label)] = a;
        }
        self.storage = Storage::Dense(v);
        Ok(())
    }

    /// Switches to sparse storage in the computational frame.
    pub fn make_sparse(&mut self) {
        if let Storage::Dense(v) = &self.storage {
            let map = v.iter().enumerate().filter(|(_, a)| a.norm() > prune::<T>()).map(|(i, &a)| (self.layout.label_of(i), a)).collect();
            self.storage = Storage::Sparse(map);
        }
    }

    /// Re-expresses every register in the computational basis.
    pub fn materialize(&mut self) -> Result<()> {
        for reg in 0..self.frames.len() {
            self.materialize_register(reg)?;
        }
        Ok(())
    }

    fn materialize_register(&mut self, reg: usize) -> Result<()> {
        if self.frames[reg] == Frame::Fourier {
            let range = self.layout.range(reg)?;
            self.sparse_explicit_qft(range, false)?;
            self.frames[reg] = Frame::Computational;
        }
        Ok(())
    }

    fn reframe_fourier(&mut self, reg: usize) -> Result<()> {
        if self.frames[reg] == Frame::Computational {
            let range = self.layout.range(reg)?;
            // |v⟩ = F (F†|v⟩): expand F†|v⟩ and relabel as Fourier
            self.sparse_explicit_qft(range, true)?;
            self.frames[reg] = Frame::Fourier;
        }
        Ok(())
    }

    fn sparse_map_mut(&mut self) -> &mut BTreeMap<Label, Complex<T>> {
        match &mut self.storage {
            Storage::Sparse(m) => m,
            Storage::Dense(_) => unreachable!("sparse-only path"),
        }
    }

    fn sparse_explicit_qft(&mut self, range: std::ops::Range<usize>, inverse: bool) -> Result<()> {
        let field = self.field().clone();
        let table = fourier_table::<T>(&field, inverse);
        let q = field.q() as usize;
        let cap = self.options.sparse_cap;
        let map = self.sparse_map_mut();
        let mut current = std::mem::take(map);
        for pos in range {
            let mut next: HashMap<Label, Complex<T>> = HashMap::with_capacity(current.len() * q);
            for (label, a) in current {
                let x = label[pos].index() as usize;
                for y in 0..q {
                    let mut l = label.clone();
                    l[pos] = field.elem(y as u64)?;
                    *next.entry(l).or_insert_with(Complex::zero) += a * table[y * q + x];
                }
            }
            if next.len() > cap {
                return Err(Error::CapExceeded(format!("sparse state would hold {} terms (cap {cap})", next.len())));
            }
            current = next.into_iter().filter(|(_, a)| a.norm() > prune::<T>()).collect();
        }
        *self.sparse_map_mut() = current;
        Ok(())
    }

    fn after_op(&mut self) -> Result<()> {
        if let Storage::Sparse(m) = &self.storage {
            if m.len() > self.options.sparse_cap {
                return Err(Error::CapExceeded(format!("sparse state holds {} terms", m.len())));
            }
            let all_comp = self.frames.iter().all(|&f| f == Frame::Computational);
            if self.options.auto_promote && all_comp {
                if let Some(dim) = self.layout.dimension() {
                    if dim <= self.options.dense_cap && (m.len() as u64) * 4 > dim {
                        self.make_dense()?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies F_{F_q}^{⊗k} (or its inverse) to one register.
    pub fn apply_qft(&mut self, reg: usize, inverse: bool) -> Result<()> {
        let range = self.layout.range(reg)?;
        match &mut self.storage {
            Storage::Dense(v) => {
                dense_qft(v, &self.layout, range, inverse);
            }
            Storage::Sparse(_) if self.options.lazy_fourier => {
                let field = self.field().clone();
                let (negate, frame) = match (self.frames[reg], inverse) {
                    (Frame::Computational, false) => (false, Frame::Fourier),
                    (Frame::Computational, true) => (true, Frame::Fourier),
                    (Frame::Fourier, false) => (true, Frame::Computational),
                    (Frame::Fourier, true) => (false, Frame::Computational),
                };
                if negate {
                    let map = std::mem::take(self.sparse_map_mut());
                    *self.sparse_map_mut() = map
                        .into_iter()
                        .map(|(mut l, a)| {
                            for s in &mut l[range.clone()] {
                                *s = field.neg(*s);
                            }
                            (l, a)
                        })
                        .collect();
                }
                self.frames[reg] = frame;
            }
            Storage::Sparse(_) => {
                self.materialize_register(reg)?;
                self.sparse_explicit_qft(range, inverse)?;
            }
        }
        self.after_op()
    }

    fn query_positions(&self, map: &dyn QueryMap, in_regs: &[usize], out_reg: usize) -> Result<(Vec<usize>, std::ops::Range<usize>)> {
        let out = self.layout.range(out_reg)?;
        let mut ins = Vec::new();
        for (i, &r) in in_regs.iter().enumerate() {
            if r == out_reg || in_regs[..i].contains(&r) {
                return Err(Error::DimensionMismatch(format!("register {r} used twice in one query")));
            }
            ins.extend(self.layout.range(r)?);
        }
        if ins.len() != map.input_len() || out.len() != map.output_len() {
            return Err(Error::DimensionMismatch(format!(
                "map F_q^{} -> F_q^{} applied to registers of sizes {} -> {}",
                map.input_len(),
                map.output_len(),
                ins.len(),
                out.len()
            )));
        }
        Ok((ins, out))
    }

    /// Standard query |x, y⟩ ↦ |x, y ± f(x)⟩ (minus for `inverse`). The input
    /// x is the concatenation of `in_regs`.
    pub fn apply_standard_query(&mut self, map: &dyn QueryMap, in_regs: &[usize], out_reg: usize, inverse: bool) -> Result<()> {
        let (ins, out) = self.query_positions(map, in_regs, out_reg)?;
        let field = self.field().clone();
        if let Storage::Dense(v) = &mut self.storage {
            let mut next = vec![Complex::zero(); v.len()];
            for (i, &a) in v.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut l = self.layout.label_of(i);
                shift_output(&field, map, &mut l, &ins, out.clone(), inverse);
                next[self.layout.index_of(&l)] = a;
            }
            *v = next;
            return Ok(());
        }

        let in_frames: Vec<Frame> = in_regs.iter().map(|&r| self.frames[r]).collect();
        let all_comp = in_frames.iter().all(|&f| f == Frame::Computational);
        let all_fourier = !in_frames.is_empty() && in_frames.iter().all(|&f| f == Frame::Fourier);
        let linear = map.transpose_eval(&vec![field.zero(); map.output_len()]).is_some();

        if !all_comp && !(all_fourier && linear) {
            for &r in in_regs {
                self.materialize_register(r)?;
            }
            return self.apply_standard_query(map, in_regs, out_reg, inverse);
        }
        if all_fourier {
            self.reframe_fourier(out_reg)?;
        }
        let out_frame = self.frames[out_reg];
        let chars = field.character_table::<T>();
        let terms = std::mem::take(self.sparse_map_mut());
        let next: BTreeMap<Label, Complex<T>> = if all_comp && out_frame == Frame::Computational {
            terms
                .into_iter()
                .map(|(mut l, a)| {
                    shift_output(&field, map, &mut l, &ins, out.clone(), inverse);
                    (l, a)
                })
                .collect()
        } else if all_comp {
            // F|b⟩ on the output picks up e(∓ b·f(x))
            terms
                .into_iter()
                .map(|(l, a)| {
                    let x: Vec<FieldElem> = ins.iter().map(|&i| l[i]).collect();
                    let fx = map.eval(&x);
                    let pair = field.dot(&l[out.clone()], &fx);
                    let pair = if inverse { pair } else { field.neg(pair) };
                    let ph = chars[field.trace_to_prime(pair) as usize];
                    (l, a * ph)
                })
                .collect()
        } else {
            // Fourier input and output: F|a⟩F|b⟩ ↦ F|a ∓ Aᵀb⟩F|b⟩
            terms
                .into_iter()
                .map(|(mut l, a)| {
                    let shift = map.transpose_eval(&l[out.clone()]).expect("linear map");
                    for (&pos, s) in ins.iter().zip(shift) {
                        l[pos] = if inverse { field.add(l[pos], s) } else { field.sub(l[pos], s) };
                    }
                    (l, a)
                })
                .collect()
        };
        *self.sparse_map_mut() = next;
        self.after_op()
    }

    /// Phase query |x, y⟩ ↦ e(±⟨y, f(x)⟩)|x, y⟩.
    pub fn apply_phase_query(&mut self, map: &dyn QueryMap, in_regs: &[usize], out_reg: usize, inverse: bool) -> Result<()> {
        let (ins, out) = self.query_positions(map, in_regs, out_reg)?;
        let field = self.field().clone();
        let chars = field.character_table::<T>();
        let phase = |l: &[FieldElem]| {
            let x: Vec<FieldElem> = ins.iter().map(|&i| l[i]).collect();
            let pair = field.dot(&l[out.clone()], &map.eval(&x));
            let pair = if inverse { field.neg(pair) } else { pair };
            chars[field.trace_to_prime(pair) as usize]
        };
        match &mut self.storage {
            Storage::Dense(v) => {
                for (i, a) in v.iter_mut().enumerate() {
                    if !a.is_zero() {
                        *a *= phase(&self.layout.label_of(i));
                    }
                }
                Ok(())
            }
            Storage::Sparse(_) => {
                let all_comp = in_regs.iter().chain(std::iter::once(&out_reg)).all(|&r| self.frames[r] == Frame::Computational);
                if all_comp {
                    for (l, a) in self.sparse_map_mut().iter_mut() {
                        *a *= phase(l);
                    }
                    self.after_op()
                } else {
                    // F · U · F† on the output register
                    self.apply_qft(out_reg, true)?;
                    self.apply_standard_query(map, in_regs, out_reg, inverse)?;
                    self.apply_qft(out_reg, false)
                }
            }
        }
    }

    /// Exchanges the contents of two equally sized registers.
    pub fn swap_registers(&mut self, i: usize, j: usize) -> Result<()> {
        let (ri, rj) = (self.layout.range(i)?, self.layout.range(j)?);
        if ri.len() != rj.len() {
            return Err(Error::DimensionMismatch(format!("cannot swap registers of sizes {} and {}", ri.len(), rj.len())));
        }
        if i == j {
            return Ok(());
        }
        let swap = |l: &mut Label| {
            for (a, b) in ri.clone().zip(rj.clone()) {
                l.swap(a, b);
            }
        };
        match &mut self.storage {
            Storage::Dense(v) => {
                let mut next = vec![Complex::zero(); v.len()];
                for (idx, &a) in v.iter().enumerate() {
                    let mut l = self.layout.label_of(idx);
                    swap(&mut l);
                    next[self.layout.index_of(&l)] = a;
                }
                *v = next;
            }
            Storage::Sparse(m) => {
                let terms = std::mem::take(m);
                *m = terms
                    .into_iter()
                    .map(|(mut l, a)| {
                        swap(&mut l);
                        (l, a)
                    })
                    .collect();
                self.frames.swap(i, j);
            }
        }
        Ok(())
    }

    /// Multiplies every amplitude by `phase` (expected to have modulus 1).
    pub fn apply_global_phase(&mut self, phase: Complex<T>) {
        match &mut self.storage {
            Storage::Dense(v) => v.iter_mut().for_each(|a| *a *= phase),
            Storage::Sparse(m) => m.values_mut().for_each(|a| *a *= phase),
        }
    }

    /// Computational-basis amplitudes as a sparse map.
    pub fn computational_terms(&self) -> Result<Cow<'_, BTreeMap<Label, Complex<T>>>> {
        match &self.storage {
            Storage::Sparse(m) if self.frames.iter().all(|&f| f == Frame::Computational) => Ok(Cow::Borrowed(m)),
            Storage::Sparse(_) => {
                let mut c = self.clone();
                c.materialize()?;
                let Storage::Sparse(m) = c.storage else { unreachable!() };
                Ok(Cow::Owned(m))
            }
            Storage::Dense(v) => {
                Ok(Cow::Owned(v.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, &a)| (self.layout.label_of(i), a)).collect()))
            }
        }
    }

    /// Amplitude ⟨label|ψ⟩ in the computational basis.
    pub fn amplitude(&self, label: &[FieldElem]) -> Result<Complex<T>> {
        self.layout.check_label(label)?;
        match &self.storage {
            Storage::Dense(v) => Ok(v[self.layout.index_of(label)]),
            Storage::Sparse(m) => {
                let field = self.field();
                let chars = field.character_table::<T>();
                let inv_sqrt_q = T::one() / T::from_f64_lossy(field.q() as f64).sqrt();
                let ranges: Vec<_> = (0..self.frames.len()).map(|r| self.layout.range(r)).collect::<Result<_>>()?;
                let mut total = Complex::zero();
                'terms: for (t, &a) in m {
                    let mut amp = a;
                    for (r, range) in ranges.iter().enumerate() {
                        match self.frames[r] {
                            Frame::Computational => {
                                if t[range.clone()] != label[range.clone()] {
                                    continue 'terms;
                                }
                            }
                            Frame::Fourier => {
                                let pair = field.dot(&t[range.clone()], &label[range.clone()]);
                                amp = amp * chars[field.trace_to_prime(pair) as usize] * inv_sqrt_q.powi(range.len() as i32);
                            }
                        }
                    }
                    total += amp;
                }
                Ok(total)
            }
        }
    }

    fn check_same_layout(&self, other: &Self) -> Result<()> {
        if self.layout == other.layout {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("states live on different layouts".into()))
        }
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_layout(other)?;
        if let (Storage::Dense(a), Storage::Dense(b)) = (&self.storage, &other.storage) {
            return Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum());
        }
        if let (Storage::Sparse(a), Storage::Sparse(b)) = (&self.storage, &other.storage) {
            if self.frames == other.frames {
                return Ok(sparse_inner(a, b));
            }
        }
        let (a, b) = (self.computational_terms()?, other.computational_terms()?);
        Ok(sparse_inner(&a, &b))
    }

    /// Euclidean distance ‖self − other‖.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_same_layout(other)?;
        if let (Storage::Dense(a), Storage::Dense(b)) = (&self.storage, &other.storage) {
            return Ok(a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<T>().sqrt());
        }
        if let (Storage::Sparse(a), Storage::Sparse(b)) = (&self.storage, &other.storage) {
            if self.frames == other.frames {
                return Ok(sparse_distance(a, b));
            }
        }
        let (a, b) = (self.computational_terms()?, other.computational_terms()?);
        Ok(sparse_distance(&a, &b))
    }

    /// Total probability outside the sector where register `reg` holds `label`.
    pub fn weight_outside(&self, reg: usize, label: &[FieldElem]) -> Result<T> {
        let dist = self.register_distribution(reg)?;
        let inside = dist.get(label).copied().unwrap_or_else(T::zero);
        Ok((self.norm_sqr() - inside).max(T::zero()))
    }

    /// Marginal distribution of a computational-basis measurement of one register.
    pub fn register_distribution(&self, reg: usize) -> Result<BTreeMap<Label, T>> {
        let range = self.layout.range(reg)?;
        let mut out: BTreeMap<Label, T> = BTreeMap::new();
        match &self.storage {
            Storage::Dense(v) => {
                for (i, a) in v.iter().enumerate() {
                    if !a.is_zero() {
                        let l = self.layout.label_of(i);
                        *out.entry(l[range.clone()].to_vec()).or_insert_with(T::zero) += a.norm_sqr();
                    }
                }
            }
            Storage::Sparse(_) => {
                // other registers' frames are local basis changes and leave the marginal intact
                let owned;
                let map = if self.frames[reg] == Frame::Fourier {
                    let mut c = self.clone();
                    c.materialize_register(reg)?;
                    owned = c;
                    match &owned.storage {
                        Storage::Sparse(m) => m,
                        Storage::Dense(_) => unreachable!(),
                    }
                } else {
                    match &self.storage {
                        Storage::Sparse(m) => m,
                        Storage::Dense(_) => unreachable!(),
                    }
                };
                for (l, a) in map {
                    *out.entry(l[range.clone()].to_vec()).or_insert_with(T::zero) += a.norm_sqr();
                }
            }
        }
        Ok(out)
    }

    /// Keeps only the sector where `reg` holds `label` and renormalizes.
    pub(crate) fn project_register(&mut self, reg: usize, label: &[FieldElem]) -> Result<()> {
        let range = self.layout.range(reg)?;
        if let Storage::Sparse(_) = self.storage {
            self.materialize_register(reg)?;
        }
        let norm;
        match &mut self.storage {
            Storage::Dense(v) => {
                for (i, a) in v.iter_mut().enumerate() {
                    if self.layout.label_of(i)[range.clone()] != *label {
                        *a = Complex::zero();
                    }
                }
                norm = v.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
                v.iter_mut().for_each(|a| *a /= norm);
            }
            Storage::Sparse(m) => {
                m.retain(|l, _| l[range.clone()] == *label);
                norm = m.values().map(|a| a.norm_sqr()).sum::<T>().sqrt();
                m.values_mut().for_each(|a| *a /= norm);
            }
        }
        if norm <= prune::<T>() {
            return Err(Error::DimensionMismatch("projection onto a zero-probability outcome".into()));
        }
        Ok(())
    }
}

fn sparse_inner<T: Real>(a: &BTreeMap<Label, Complex<T>>, b: &BTreeMap<Label, Complex<T>>) -> Complex<T> {
    let (small, large, flip) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
    let s: Complex<T> = small.iter().filter_map(|(l, x)| large.get(l).map(|y| x.conj() * y)).sum();
    if flip {
        s.conj()
    } else {
        s
    }
}

fn sparse_distance<T: Real>(a: &BTreeMap<Label, Complex<T>>, b: &BTreeMap<Label, Complex<T>>) -> T {
    let mut acc = T::zero();
    for (l, x) in a {
        let y = b.get(l).copied().unwrap_or_else(Complex::zero);
        acc += (x - y).norm_sqr();
    }
    for (l, y) in b {
        if !a.contains_key(l) {
            acc += y.norm_sqr();
        }
    }
    acc.sqrt()
}

fn shift_output(field: &Field, map: &dyn QueryMap, l: &mut Label, ins: &[usize], out: std::ops::Range<usize>, inverse: bool) {
    let x: Vec<FieldElem> = ins.iter().map(|&i| l[i]).collect();
    let fx = map.eval(&x);
    for (pos, v) in out.zip(fx) {
        l[pos] = if inverse { field.sub(l[pos], v) } else { field.add(l[pos], v) };
    }
}

fn dense_qft<T: Real>(v: &mut [Complex<T>], layout: &RegisterLayout, range: std::ops::Range<usize>, inverse: bool) {
    let field = layout.field();
    let q = field.q() as usize;
    let table = fourier_table::<T>(field, inverse);
    let total = layout.num_symbols();
    let mut buf = vec![Complex::zero(); q];
    for pos in range {
        let stride = q.pow((total - 1 - pos) as u32);
        let block = stride * q;
        for base in (0..v.len()).step_by(block) {
            for off in 0..stride {
                for (x, slot) in buf.iter_mut().enumerate() {
                    *slot = v[base + off + x * stride];
                }
                for y in 0..q {
                    let row = &table[y * q..(y + 1) * q];
                    v[base + off + y * stride] = row.iter().zip(&buf).map(|(c, a)| c * a).sum();
                }
            }
        }
    }
}
