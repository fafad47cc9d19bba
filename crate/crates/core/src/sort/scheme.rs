use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bits::check_width;
use crate::energy::{energy_to_probs, EnergyVector};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeKind {
    /// `e_i = i`: bit `i` (1 = least significant) gets energy `i`.
    Aware,
    /// `e_i = (n + 1) / 2` on every bit; same total as `Aware`.
    Oblivious,
    /// Top `floor(n / k)` bits get `n k / 2` each, the rest nothing.
    Truncated(f64),
    Custom,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Aware => f.write_str("aware"),
            SchemeKind::Oblivious => f.write_str("oblivious"),
            SchemeKind::Truncated(k) => write!(f, "truncated:{k}"),
            SchemeKind::Custom => f.write_str("custom"),
        }
    }
}

impl Serialize for SchemeKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Energy per bit for a comparator. `energy()[0]` belongs to bit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyScheme {
    kind: SchemeKind,
    energy: EnergyVector,
    probs: Vec<f64>,
}

impl EnergyScheme {
    fn build(kind: SchemeKind, energy: EnergyVector) -> Result<Self> {
        check_width(energy.len())?;
        let probs = energy_to_probs(&energy).entries().to_vec();
        Ok(EnergyScheme { kind, energy, probs })
    }

    pub fn aware(n: usize) -> Result<Self> {
        check_width(n)?;
        let e: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        Self::build(SchemeKind::Aware, EnergyVector::spending_all(e)?)
    }

    pub fn oblivious(n: usize) -> Result<Self> {
        check_width(n)?;
        let level = (n as f64 + 1.0) / 2.0;
        Self::build(SchemeKind::Oblivious, EnergyVector::spending_all(vec![level; n])?)
    }

    pub fn truncated(n: usize, k: f64) -> Result<Self> {
        check_width(n)?;
        if !k.is_finite() || k < 1.0 {
            return Err(invalid("k", format!("{k} must be at least 1")));
        }
        let funded = (n as f64 / k).floor() as usize;
        if funded == 0 {
            return Err(invalid("k", format!("n / k = {} leaves no funded bit", n as f64 / k)));
        }
        let per_bit = n as f64 * k / 2.0;
        let e: Vec<f64> = (1..=n).map(|i| if i > n - funded { per_bit } else { 0.0 }).collect();
        Self::build(SchemeKind::Truncated(k), EnergyVector::spending_all(e)?)
    }

    /// The same energy on every bit; large values give a near-noiseless comparator.
    pub fn uniform(n: usize, energy: f64) -> Result<Self> {
        check_width(n)?;
        Self::build(SchemeKind::Custom, EnergyVector::spending_all(vec![energy; n])?)
    }

    pub fn custom(energy: EnergyVector) -> Result<Self> {
        Self::build(SchemeKind::Custom, energy)
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.probs.len()
    }

    pub fn energy(&self) -> &EnergyVector {
        &self.energy
    }

    /// Flip probability of each bit, bit 1 first.
    pub fn flip_probabilities(&self) -> &[f64] {
        &self.probs
    }
}

/// Parses `aware`, `oblivious`, `truncated:<k>` and `uniform:<e>` for width `n`.
pub fn parse_scheme(spec: &str, n: usize) -> Result<EnergyScheme> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let num = |a: Option<&str>| -> Result<f64> {
        a.and_then(|s| f64::from_str(s.trim()).ok())
            .ok_or_else(|| invalid("scheme", format!("`{spec}` needs a numeric argument")))
    };
    match head {
        "aware" if arg.is_none() => EnergyScheme::aware(n),
        "oblivious" if arg.is_none() => EnergyScheme::oblivious(n),
        "truncated" => EnergyScheme::truncated(n, num(arg)?),
        "uniform" => EnergyScheme::uniform(n, num(arg)?),
        _ => Err(Error::InvalidParameter {
            name: "scheme",
            reason: format!("unknown scheme `{spec}` (aware, oblivious, truncated:<k>, uniform:<e>)"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn aware_and_oblivious_share_total() {
        for n in [1usize, 4, 12, 16] {
            let a = EnergyScheme::aware(n).unwrap();
            let o = EnergyScheme::oblivious(n).unwrap();
            assert_eq!(a.energy().entries()[n - 1], n as f64);
            assert_eq!(a.energy().entries()[0], 1.0);
            let total = (n * (n + 1)) as f64 / 2.0;
            assert_abs_diff_eq!(a.energy().spent(), total);
            assert_abs_diff_eq!(o.energy().spent(), total);
        }
    }

    #[test]
    fn truncated_layout() {
        let t = EnergyScheme::truncated(12, 2.0).unwrap();
        let e = t.energy().entries();
        assert!(e[..6].iter().all(|&x| x == 0.0));
        assert!(e[6..].iter().all(|&x| x == 12.0));
        assert_abs_diff_eq!(t.energy().spent(), 72.0);
        assert_eq!(t.flip_probabilities()[0], 1.0);

        let t = EnergyScheme::truncated(18, 6.0).unwrap();
        assert_eq!(t.energy().entries().iter().filter(|&&x| x > 0.0).count(), 3);
        assert_abs_diff_eq!(t.energy().entries()[17], 54.0);

        assert!(EnergyScheme::truncated(4, 5.0).is_err());
        assert!(EnergyScheme::truncated(4, 0.5).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_scheme("aware", 5).unwrap().kind(), SchemeKind::Aware);
        assert_eq!(
            parse_scheme("truncated:2", 8).unwrap().kind(),
            SchemeKind::Truncated(2.0)
        );
        assert_eq!(parse_scheme("uniform:40", 8).unwrap().kind(), SchemeKind::Custom);
        assert!(parse_scheme("truncated", 8).is_err());
        assert!(parse_scheme("bogus", 8).is_err());
        assert_eq!(SchemeKind::Truncated(2.0).to_string(), "truncated:2");
        assert_eq!(SchemeKind::Truncated(2.5).to_string(), "truncated:2.5");
    }
}
