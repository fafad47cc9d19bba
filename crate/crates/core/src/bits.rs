use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 63;

/// An `n`-bit input. Bit index 1 is the least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVector {
    width: usize,
    value: u64,
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidWidth(width))
    }
}

#[inline]
pub(crate) fn mask(width: usize) -> u64 {
    (1u64 << width) - 1
}

impl BitVector {
    pub fn new(width: usize, value: u64) -> Result<Self> {
        check_width(width)?;
        if value > mask(width) {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(BitVector { width, value })
    }

    pub fn zeros(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.width {
            Err(Error::IndexOutOfRange {
                index: i,
                width: self.width,
            })
        } else {
            Ok(())
        }
    }

    pub fn bit(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        Ok(self.value >> (i - 1) & 1 == 1)
    }

    /// `x` with bit `i` inverted.
    pub fn flip(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        Ok(BitVector {
            width: self.width,
            value: self.value ^ (1 << (i - 1)),
        })
    }

    /// `x` with bit `i` forced to `bit`.
    pub fn with_bit(&self, i: usize, bit: bool) -> Result<Self> {
        self.check_index(i)?;
        let m = 1 << (i - 1);
        let value = if bit { self.value | m } else { self.value & !m };
        Ok(BitVector {
            width: self.width,
            value,
        })
    }

    pub fn complement(&self) -> Self {
        BitVector {
            width: self.width,
            value: !self.value & mask(self.width),
        }
    }

    /// Every vector of the given width in increasing value order.
    pub fn all(width: usize) -> Result<impl Iterator<Item = BitVector>> {
        check_width(width)?;
        Ok((0..=mask(width)).map(move |value| BitVector { width, value }))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width)
    }
}
