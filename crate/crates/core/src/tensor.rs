//! Dense complex tensors of uniform dimension per slot.
//!
//! A [`Tensor`] of order `n` over a site space with `S` sites stores `S^n`
//! complex entries in row-major order. Order 0 is a single scalar. All
//! Fock-level data in this crate lives in these tensors; nothing is ever
//! stored symmetry-reduced, which keeps every operation auditable by direct
//! index arithmetic.

use crate::{Error, Result, C64};

/// Global cap on the number of complex entries a single tensor may hold.
pub const ENTRY_CAP: usize = 10_000_000;

/// Dense order-`n` complex array over `dim` sites per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dim: usize,
    order: usize,
    data: Vec<C64>,
}

impl Tensor {
    /// Zero tensor of the given order. Fails if `dim^order` exceeds
    /// [`ENTRY_CAP`].
    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        let len = checked_len(dim, order)?;
        Ok(Tensor {
            dim,
            order,
            data: vec![C64::new(0.0, 0.0); len],
        })
    }

    /// Order-0 tensor holding a single scalar.
    pub fn scalar(value: C64) -> Self {
        Tensor {
            dim: 1,
            order: 0,
            data: vec![value],
        }
    }

    /// Wrap raw data (row-major, length must be `dim^order`).
    pub fn from_data(dim: usize, order: usize, data: Vec<C64>) -> Result<Self> {
        let len = checked_len(dim, order)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "tensor data length {} != {}^{}",
                data.len(),
                dim,
                order
            )));
        }
        Ok(Tensor { dim, order, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Value of the order-0 tensor.
    pub fn as_scalar(&self) -> C64 {
        debug_assert_eq!(self.order, 0);
        self.data[0]
    }

    /// Linear offset of a multi-index.
    #[inline]
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        let mut off = 0usize;
        for &i in idx {
            debug_assert!(i < self.dim);
            off = off * self.dim + i;
        }
        off
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], value: C64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    /// Decode a linear offset into the multi-index buffer `idx`.
    #[inline]
    pub fn decode(&self, mut off: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = off % self.dim;
            off /= self.dim;
        }
    }

    /// In-place scaling.
    pub fn scale(&mut self, factor: C64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// In-place sum; shapes must match.
    pub fn add_assign(&mut self, other: &Tensor) {
        debug_assert_eq!(self.order, other.order);
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
    }

    /// Entry-wise difference `self - other`.
    pub fn sub(&self, other: &Tensor) -> Tensor {
        debug_assert_eq!(self.order, other.order);
        debug_assert_eq!(self.data.len(), other.data.len());
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        Tensor {
            dim: self.dim,
            order: self.order,
            data,
        }
    }

    /// Largest absolute entry.
    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True if every entry is below `tol` in modulus.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.sup_norm() <= tol
    }

    /// Tensor product `self ⊗ other` (orders add). Order-0 operands act as
    /// plain scalar factors regardless of their nominal dimension.
    pub fn outer(&self, other: &Tensor) -> Result<Tensor> {
        if other.order == 0 {
            let mut out = self.clone();
            out.scale(other.as_scalar());
            return Ok(out);
        }
        if self.order == 0 {
            let mut out = other.clone();
            out.scale(self.as_scalar());
            return Ok(out);
        }
        debug_assert_eq!(self.dim, other.dim);
        let order = self.order + other.order;
        let len = checked_len(self.dim, order)?;
        let mut data = Vec::with_capacity(len);
        for &a in &self.data {
            for &b in &other.data {
                data.push(a * b);
            }
        }
        Ok(Tensor {
            dim: self.dim,
            order,
            data,
        })
    }
}

fn checked_len(dim: usize, order: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..order {
        len = len.checked_mul(dim).ok_or(Error::ResourceCap {
            requested: usize::MAX,
            cap: ENTRY_CAP,
        })?;
        if len > ENTRY_CAP {
            return Err(Error::ResourceCap {
                requested: len,
                cap: ENTRY_CAP,
            });
        }
    }
    Ok(len)
}
