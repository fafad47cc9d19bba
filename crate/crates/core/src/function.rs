//! Boolean functions `f: {0,1}^n -> N` and their signed view.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::{check_width, BitVector};
use crate::error::{Error, Result};

/// Largest arity a truth-table file may declare (2^26 outputs).
pub const MAX_TABLE_ARITY: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Codomain {
    Natural,
    /// Inputs read as `(-1)^bit`, outputs mapped `0 -> +1`, nonzero `-> -1`.
    Signed,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Unsigned value of the input.
    BinaryEvaluation,
    Parity,
    Or,
    And,
    /// Strict majority: more than half of the bits set.
    Majority,
    /// At least `t` bits set.
    Threshold(u32),
    /// Copies bit `i`.
    Dictator(usize),
    Constant(u64),
    Table(Arc<[u64]>),
}

/// A named, total, deterministic function on `n`-bit inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDescriptor {
    name: String,
    arity: usize,
    kind: Kind,
}

/// On-disk truth table: `outputs[x]` is `f(x)` for the input with unsigned value `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub name: String,
    pub n: usize,
    pub outputs: Vec<u64>,
}

impl FunctionDescriptor {
    /// Names understood by [`FunctionDescriptor::builtin`].
    pub const BUILTINS: &'static [&'static str] = &[
        "be",
        "xor",
        "or",
        "and",
        "majority",
        "threshold:<t>",
        "dictator[:<i>]",
        "const:<c>",
    ];

    /// Looks up a built-in by name: `be`, `xor`, `or`, `and`, `majority`,
    /// `threshold:t`, `dictator` (bit 1) or `dictator:i`, and `const:c`.
    pub fn builtin(name: &str, arity: usize) -> Result<Self> {
        check_width(arity)?;
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let parse_arg = |what: &str| -> Result<u64> {
            arg.and_then(|a| a.trim().parse().ok())
                .ok_or_else(|| Error::UnknownFunction(format!("{name} (expected {what})")))
        };
        let kind = match (head, arg) {
            ("be", None) => Kind::BinaryEvaluation,
            ("xor" | "parity", None) => Kind::Parity,
            ("or", None) => Kind::Or,
            ("and", None) => Kind::And,
            ("majority" | "maj", None) => Kind::Majority,
            ("threshold", Some(_)) => {
                let t = parse_arg("threshold:<t>")?;
                Kind::Threshold(u32::try_from(t).map_err(|_| Error::UnknownFunction(name.into()))?)
            }
            ("dictator", None) => Kind::Dictator(1),
            ("dictator", Some(_)) => {
                let i = parse_arg("dictator:<i>")? as usize;
                if i == 0 || i > arity {
                    return Err(Error::IndexOutOfRange { index: i, width: arity });
                }
                Kind::Dictator(i)
            }
            ("const", Some(_)) => Kind::Constant(parse_arg("const:<c>")?),
            _ => return Err(Error::UnknownFunction(name.to_string())),
        };
        Ok(FunctionDescriptor {
            name: name.to_string(),
            arity,
            kind,
        })
    }

    pub fn from_table(table: TruthTable) -> Result<Self> {
        if table.n == 0 || table.n > MAX_TABLE_ARITY {
            return Err(Error::TruthTable(format!(
                "n = {} is outside 1..={MAX_TABLE_ARITY}",
                table.n
            )));
        }
        let expected = 1usize << table.n;
        if table.outputs.len() != expected {
            return Err(Error::TruthTable(format!(
                "expected 2^{} = {expected} outputs, found {}",
                table.n,
                table.outputs.len()
            )));
        }
        Ok(FunctionDescriptor {
            name: table.name,
            arity: table.n,
            kind: Kind::Table(table.outputs.into()),
        })
    }

    pub fn from_table_json(json: &str) -> Result<Self> {
        let table: TruthTable = serde_json::from_str(json)?;
        Self::from_table(table)
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_table_json(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// True for the built-ins that only depend on the number of set bits.
    pub fn is_symmetric(&self) -> bool {
        matches!(
            self.kind,
            Kind::Parity | Kind::Or | Kind::And | Kind::Majority | Kind::Threshold(_) | Kind::Constant(_)
        )
    }

    /// Evaluates on the raw input value. Bits above the arity are ignored.
    #[inline]
    pub fn eval_raw(&self, x: u64) -> u64 {
        let x = x & crate::bits::mask(self.arity);
        match &self.kind {
            Kind::BinaryEvaluation => x,
            Kind::Parity => u64::from(x.count_ones() & 1),
            Kind::Or => u64::from(x != 0),
            Kind::And => u64::from(x == crate::bits::mask(self.arity)),
            Kind::Majority => u64::from(2 * x.count_ones() as usize > self.arity),
            Kind::Threshold(t) => u64::from(x.count_ones() >= *t),
            Kind::Dictator(i) => x >> (i - 1) & 1,
            Kind::Constant(c) => *c,
            Kind::Table(outputs) => outputs[x as usize],
        }
    }

    pub fn eval(&self, x: &BitVector) -> Result<u64> {
        self.check(x)?;
        Ok(self.eval_raw(x.value()))
    }

    /// `+1` when `f(x) = 0`, `-1` otherwise.
    #[inline]
    pub fn eval_signed_raw(&self, x: u64) -> i8 {
        if self.eval_raw(x) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn eval_signed(&self, x: &BitVector) -> Result<i8> {
        self.check(x)?;
        Ok(self.eval_signed_raw(x.value()))
    }

    pub fn eval_in(&self, x: &BitVector, codomain: Codomain) -> Result<i64> {
        match codomain {
            Codomain::Natural => Ok(self.eval(x)? as i64),
            Codomain::Signed => Ok(i64::from(self.eval_signed(x)?)),
        }
    }

    fn check(&self, x: &BitVector) -> Result<()> {
        if x.width() != self.arity {
            Err(Error::LengthMismatch {
                expected: self.arity,
                found: x.width(),
            })
        } else {
            Ok(())
        }
    }

    /// Materialises the truth table. Refuses arities above [`MAX_TABLE_ARITY`].
    pub fn to_table(&self) -> Result<TruthTable> {
        if self.arity > MAX_TABLE_ARITY {
            return Err(Error::ArityTooLarge {
                n: self.arity,
                max: MAX_TABLE_ARITY,
            });
        }
        Ok(TruthTable {
            name: self.name.clone(),
            n: self.arity,
            outputs: (0..1u64 << self.arity).map(|x| self.eval_raw(x)).collect(),
        })
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}
