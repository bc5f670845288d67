use std::fmt;
use std::sync::{RwLockReadGuard, RwLockWriteGuard};

use crate::model::{AccessMode, ElemType, MAX_DIMS};

use super::config::DeviceKind;
use super::error::RegError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandleId(pub u64);

impl fmt::Display for HandleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Typed contents of a data handle, flattened in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub enum Buffer {
    Int(Vec<i32>),
    Float(Vec<f32>),
    Double(Vec<f64>),
    Char(Vec<i8>),
    WChar(Vec<i32>),
    Long(Vec<i64>),
    Short(Vec<i16>),
    Unsigned(Vec<u32>),
}

macro_rules! buffer_views {
    ($($variant:ident => $ty:ty, $get:ident, $get_mut:ident;)*) => {
        impl Buffer {
            $(
                pub fn $get(&self) -> Option<&[$ty]> {
                    match self {
                        Buffer::$variant(v) => Some(v),
                        _ => None,
                    }
                }

                pub fn $get_mut(&mut self) -> Option<&mut [$ty]> {
                    match self {
                        Buffer::$variant(v) => Some(v),
                        _ => None,
                    }
                }
            )*
        }
    };
}

buffer_views! {
    Int => i32, as_int, as_int_mut;
    Float => f32, as_float, as_float_mut;
    Double => f64, as_double, as_double_mut;
    Char => i8, as_char, as_char_mut;
    Long => i64, as_long, as_long_mut;
    Short => i16, as_short, as_short_mut;
    Unsigned => u32, as_unsigned, as_unsigned_mut;
}

impl Buffer {
    pub fn zeros(elem_type: ElemType, len: usize) -> Buffer {
        match elem_type {
            ElemType::Int => Buffer::Int(vec![0; len]),
            ElemType::Float => Buffer::Float(vec![0.0; len]),
            ElemType::Double => Buffer::Double(vec![0.0; len]),
            ElemType::Char => Buffer::Char(vec![0; len]),
            ElemType::WChar => Buffer::WChar(vec![0; len]),
            ElemType::Long => Buffer::Long(vec![0; len]),
            ElemType::Short => Buffer::Short(vec![0; len]),
            ElemType::Unsigned => Buffer::Unsigned(vec![0; len]),
        }
    }

    pub fn elem_type(&self) -> ElemType {
        match self {
            Buffer::Int(_) => ElemType::Int,
            Buffer::Float(_) => ElemType::Float,
            Buffer::Double(_) => ElemType::Double,
            Buffer::Char(_) => ElemType::Char,
            Buffer::WChar(_) => ElemType::WChar,
            Buffer::Long(_) => ElemType::Long,
            Buffer::Short(_) => ElemType::Short,
            Buffer::Unsigned(_) => ElemType::Unsigned,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Buffer::Int(v) | Buffer::WChar(v) => v.len(),
            Buffer::Float(v) => v.len(),
            Buffer::Double(v) => v.len(),
            Buffer::Char(v) => v.len(),
            Buffer::Long(v) => v.len(),
            Buffer::Short(v) => v.len(),
            Buffer::Unsigned(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Element type and extents of a datum to register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDesc {
    pub elem_type: ElemType,
    pub extents: Vec<usize>,
}

impl DataDesc {
    pub fn new(elem_type: ElemType, extents: impl Into<Vec<usize>>) -> Self {
        DataDesc {
            elem_type,
            extents: extents.into(),
        }
    }

    pub fn vector(elem_type: ElemType, len: usize) -> Self {
        DataDesc::new(elem_type, vec![len])
    }

    pub fn matrix(elem_type: ElemType, rows: usize, cols: usize) -> Self {
        DataDesc::new(elem_type, vec![rows, cols])
    }

    pub fn elements(&self) -> usize {
        self.extents.iter().product()
    }

    /// Element size times the product of extents.
    pub fn footprint(&self) -> usize {
        self.elem_type.size_bytes() * self.elements()
    }

    pub(crate) fn validate(&self) -> Result<(), RegError> {
        if self.extents.is_empty() || self.extents.len() > MAX_DIMS {
            return Err(RegError::BadRank(self.extents.len()));
        }
        if let Some(axis) = self.extents.iter().position(|&e| e == 0) {
            return Err(RegError::ZeroExtent { axis });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandleInfo {
    pub id: HandleId,
    pub desc: DataDesc,
    pub footprint: usize,
    /// Device classes holding a valid copy.
    pub resident_on: Vec<DeviceKind>,
    /// Number of completed writer tasks.
    pub write_epoch: u64,
    pub pending_tasks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Int(i64),
    Float(f64),
}

impl Scalar {
    pub fn as_i64(self) -> i64 {
        match self {
            Scalar::Int(v) => v,
            Scalar::Float(v) => v as i64,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Scalar::Int(v) => v as f64,
            Scalar::Float(v) => v,
        }
    }
}

/// One positional argument of a task, in interface parameter order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaskArg {
    Handle(HandleId),
    Scalar(Scalar),
}

pub(crate) enum Slot<'a> {
    Read(RwLockReadGuard<'a, Buffer>),
    Write(RwLockWriteGuard<'a, Buffer>),
}

/// What a kernel sees: the task's buffers (indexed like the interface's
/// buffer parameters) and scalars (indexed like its scalar parameters).
pub struct KernelArgs<'a> {
    pub(crate) slots: Vec<Slot<'a>>,
    pub(crate) modes: Vec<AccessMode>,
    pub(crate) extents: Vec<Vec<usize>>,
    pub(crate) scalars: &'a [Scalar],
}

impl KernelArgs<'_> {
    pub fn buffer_count(&self) -> usize {
        self.slots.len()
    }

    pub fn buffer(&self, index: usize) -> &Buffer {
        match &self.slots[index] {
            Slot::Read(g) => g,
            Slot::Write(g) => g,
        }
    }

    /// Mutable access to a buffer bound with `write` or `readwrite`.
    ///
    /// # Panics
    /// If the buffer was bound read-only. The runtime reports the panic as a
    /// task failure.
    pub fn buffer_mut(&mut self, index: usize) -> &mut Buffer {
        match &mut self.slots[index] {
            Slot::Write(g) => g,
            Slot::Read(_) => panic!("buffer {index} is bound read-only"),
        }
    }

    /// Two distinct buffers, the first read-only and the second writable.
    pub fn read_write_pair(&mut self, read: usize, write: usize) -> (&Buffer, &mut Buffer) {
        assert_ne!(read, write, "a buffer cannot be both sides of a pair");
        let (lo, hi) = self.slots.split_at_mut(read.max(write));
        let (r, w) = if read < write {
            (&lo[read], &mut hi[0])
        } else {
            (&hi[0], &mut lo[write])
        };
        let r: &Buffer = match r {
            Slot::Read(g) => g,
            Slot::Write(g) => g,
        };
        let w: &mut Buffer = match w {
            Slot::Write(g) => g,
            Slot::Read(_) => panic!("buffer {write} is bound read-only"),
        };
        (r, w)
    }

    pub fn mode(&self, index: usize) -> AccessMode {
        self.modes[index]
    }

    pub fn extents(&self, index: usize) -> &[usize] {
        &self.extents[index]
    }

    pub fn scalar(&self, index: usize) -> Scalar {
        self.scalars[index]
    }

    pub fn scalar_count(&self) -> usize {
        self.scalars.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn footprints() {
        assert_eq!(DataDesc::vector(ElemType::Float, 1024).footprint(), 4096);
        assert_eq!(
            DataDesc::matrix(ElemType::Float, 8192, 8192).footprint(),
            4 * 8192 * 8192
        );
        assert_eq!(
            DataDesc::new(ElemType::Double, vec![2, 3, 4]).footprint(),
            192
        );
    }

    #[test]
    fn validation() {
        assert_eq!(
            DataDesc::vector(ElemType::Int, 0).validate(),
            Err(RegError::ZeroExtent { axis: 0 })
        );
        assert_eq!(
            DataDesc::new(ElemType::Int, vec![]).validate(),
            Err(RegError::BadRank(0))
        );
        assert_eq!(
            DataDesc::new(ElemType::Int, vec![1; 5]).validate(),
            Err(RegError::BadRank(5))
        );
        assert!(DataDesc::new(ElemType::Int, vec![1; 4]).validate().is_ok());
    }
}
