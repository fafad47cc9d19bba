use std::collections::HashSet;

use rand::{Rng, RngCore};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{check_width, mask};
use crate::error::{invalid, Error, Result};

/// `N` values of `n` bits each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortInstance {
    width: usize,
    elements: Vec<u64>,
    distinct: bool,
}

impl SortInstance {
    pub fn new(width: usize, elements: Vec<u64>) -> Result<Self> {
        check_width(width)?;
        if let Some(&value) = elements.iter().find(|&&v| v > mask(width)) {
            return Err(Error::ValueOutOfRange { value, width });
        }
        let distinct = elements.iter().collect::<HashSet<_>>().len() == elements.len();
        Ok(SortInstance {
            width,
            elements,
            distinct,
        })
    }

    /// `len` distinct values drawn uniformly by rejection.
    pub fn random_distinct<R: RngCore + ?Sized>(width: usize, len: usize, rng: &mut R) -> Result<Self> {
        check_width(width)?;
        if width < 63 && len as u64 > 1u64 << width {
            return Err(invalid(
                "N",
                format!("cannot draw {len} distinct values of {width} bits"),
            ));
        }
        let mut seen = HashSet::with_capacity(len);
        let mut elements = Vec::with_capacity(len);
        while elements.len() < len {
            let v = rng.random::<u64>() & mask(width);
            if seen.insert(v) {
                elements.push(v);
            }
        }
        Ok(SortInstance {
            width,
            elements,
            distinct: true,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    #[serde(rename = "N")]
    len: usize,
    elements: Vec<u64>,
}

/// `{"n": .., "N": .., "elements": [..]}`.
impl Serialize for SortInstance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceFile {
            n: self.width,
            len: self.elements.len(),
            elements: self.elements.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SortInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = InstanceFile::deserialize(d)?;
        if file.len != file.elements.len() {
            return Err(D::Error::custom(format!(
                "N = {} but {} elements given",
                file.len,
                file.elements.len()
            )));
        }
        SortInstance::new(file.n, file.elements).map_err(D::Error::custom)
    }
}
