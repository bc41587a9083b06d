use std::ops::Range;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElem};

/// Basis label: the concatenated symbols of every register, register 0 first.
pub type Label = Vec<FieldElem>;

/// Registers of F_q symbols; register i holds a vector in F_q^{k_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    field: Field,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    symbols: usize,
}

impl RegisterLayout {
    pub fn new(field: &Field, sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &k in sizes {
            offsets.push(acc);
            acc += k;
        }
        RegisterLayout { field: field.clone(), sizes: sizes.to_vec(), offsets, symbols: acc }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_registers(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn register_size(&self, reg: usize) -> Result<usize> {
        self.sizes.get(reg).copied().ok_or(Error::InvalidRegister(reg))
    }

    /// Symbol positions of a register within a label.
    pub fn range(&self, reg: usize) -> Result<Range<usize>> {
        let k = self.register_size(reg)?;
        let o = self.offsets[reg];
        Ok(o..o + k)
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols
    }

    /// q^{Σ k_i}, or `None` past u64.
    pub fn dimension(&self) -> Option<u64> {
        (self.field.q() as u64).checked_pow(self.symbols as u32)
    }

    pub fn check_label(&self, label: &[FieldElem]) -> Result<()> {
        if label.len() != self.symbols {
            return Err(Error::DimensionMismatch(format!("label has {} symbols, layout has {}", label.len(), self.symbols)));
        }
        if let Some(bad) = label.iter().find(|e| e.index() >= self.field.q()) {
            return Err(Error::InvalidElement(bad.index() as u64));
        }
        Ok(())
    }

    /// Builds a label from per-register vectors.
    pub fn label(&self, parts: &[&[FieldElem]]) -> Result<Label> {
        if parts.len() != self.sizes.len() {
            return Err(Error::DimensionMismatch(format!("{} register values for {} registers", parts.len(), self.sizes.len())));
        }
        let mut out = Vec::with_capacity(self.symbols);
        for (i, part) in parts.iter().enumerate() {
            if part.len() != self.sizes[i] {
                return Err(Error::DimensionMismatch(format!("register {i} expects {} symbols, got {}", self.sizes[i], part.len())));
            }
            out.extend_from_slice(part);
        }
        self.check_label(&out)?;
        Ok(out)
    }

    /// Dense index: labels ordered lexicographically, symbol 0 most significant.
    pub(crate) fn index_of(&self, label: &[FieldElem]) -> usize {
        let q = self.field.q() as usize;
        label.iter().fold(0usize, |acc, e| acc * q + e.index() as usize)
    }

    pub(crate) fn label_of(&self, mut index: usize) -> Label {
        let q = self.field.q() as usize;
        let mut out = vec![FieldElem::ZERO; self.symbols];
        for slot in out.iter_mut().rev() {
            *slot = self.field.elem((index % q) as u64).expect("digit below q");
            index /= q;
        }
        out
    }

    /// Every basis label, in lexicographic order.
    pub fn basis_labels(&self) -> Result<impl Iterator<Item = Label> + '_> {
        let dim = self
            .dimension()
            .filter(|&d| d <= usize::MAX as u64)
            .ok_or_else(|| Error::CapExceeded("layout too large to enumerate".into()))?;
        Ok((0..dim as usize).map(move |i| self.label_of(i)))
    }
}
