use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::entangle::power_denominator;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

/// Counts of permutations per exact entangling power, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassHistogram {
    d: usize,
    mode: Mode,
    classes: BTreeMap<Rational, u64>,
    total: u64,
}

/// Summary of a sampled run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean_epsilon: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl ClassHistogram {
    pub fn empty(d: usize, mode: Mode) -> Self {
        ClassHistogram {
            d,
            mode,
            classes: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn add(&mut self, epsilon: Rational, count: u64) {
        *self.classes.entry(epsilon).or_default() += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &ClassHistogram) -> Result<()> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: other.d,
            });
        }
        for (&e, &c) in &other.classes {
            self.add(e, c);
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn classes(&self) -> &BTreeMap<Rational, u64> {
        &self.classes
    }

    pub fn count(&self, epsilon: Rational) -> u64 {
        self.classes.get(&epsilon).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Exact count-weighted mean, `None` when empty.
    pub fn mean(&self) -> Result<Option<Rational>> {
        if self.total == 0 {
            return Ok(None);
        }
        let overflow = || Error::Overflow {
            what: "histogram mean".into(),
        };
        let den = power_denominator(self.d) as i128;
        let mut num: i128 = 0;
        for (e, &c) in &self.classes {
            let scale = den / e.den() as i128;
            let term = (e.num() as i128)
                .checked_mul(scale)
                .and_then(|x| x.checked_mul(c as i128))
                .ok_or_else(overflow)?;
            num = num.checked_add(term).ok_or_else(overflow)?;
        }
        let full_den = den.checked_mul(self.total as i128).ok_or_else(overflow)?;
        let g = num.gcd(&full_den);
        let (n, d) = (num / g, full_den / g);
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Ok(Some(Rational::new(n, d))),
            _ => Err(overflow()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rows `epsilon_num,epsilon_den,epsilon_float,count`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["epsilon_num", "epsilon_den", "epsilon_float", "count"])
            .map_err(csv_err)?;
        for (e, c) in &self.classes {
            out.write_record([
                e.num().to_string(),
                e.den().to_string(),
                e.to_f64().to_string(),
                c.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

impl fmt::Display for ClassHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Exhaustive => writeln!(f, "d={} exhaustive total={}", self.d, self.total)?,
            Mode::Sampled { seed, samples } => {
                writeln!(f, "d={} sampled samples={samples} seed={seed}", self.d)?
            }
        }
        for (e, c) in &self.classes {
            writeln!(f, "{:>10}  {:>12.10}  {c}", e.to_string(), e.to_f64())?;
        }
        match self.mean() {
            Ok(Some(m)) => writeln!(f, "mean {m} ({:.10})", m.to_f64()),
            _ => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    num: i64,
    den: i64,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct HistogramRepr {
    d: usize,
    mode: String,
    total: u64,
    classes: Vec<ClassRepr>,
    mean: Option<Rational>,
    seed: Option<u64>,
}

impl Serialize for ClassHistogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (mode, seed) = match self.mode {
            Mode::Exhaustive => ("exhaustive", None),
            Mode::Sampled { seed, .. } => ("sampled", Some(seed)),
        };
        HistogramRepr {
            d: self.d,
            mode: mode.into(),
            total: self.total,
            classes: self
                .classes
                .iter()
                .map(|(e, &count)| ClassRepr {
                    num: e.num(),
                    den: e.den(),
                    count,
                })
                .collect(),
            mean: self.mean().map_err(serde::ser::Error::custom)?,
            seed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassHistogram {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = HistogramRepr::deserialize(de)?;
        let mode = match (r.mode.as_str(), r.seed) {
            ("exhaustive", _) => Mode::Exhaustive,
            ("sampled", Some(seed)) => Mode::Sampled {
                seed,
                samples: r.total,
            },
            ("sampled", None) => return Err(D::Error::custom("sampled histogram without seed")),
            (other, _) => return Err(D::Error::custom(format!("unknown mode {other:?}"))),
        };
        let mut h = ClassHistogram::empty(r.d, mode);
        for c in r.classes {
            if c.den <= 0 {
                return Err(D::Error::custom("non-positive denominator"));
            }
            h.add(Rational::new(c.num, c.den), c.count);
        }
        if h.total != r.total {
            return Err(D::Error::custom(format!(
                "class counts sum to {} but total is {}",
                h.total, r.total
            )));
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ClassHistogram {
        let mut h = ClassHistogram::empty(2, Mode::Exhaustive);
        h.add(Rational::ZERO, 8);
        h.add(Rational::new(4, 9), 16);
        h
    }

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        assert_eq!(v["d"], 2);
        assert_eq!(v["mode"], "exhaustive");
        assert_eq!(v["total"], 24);
        assert_eq!(v["classes"][1]["num"], 4);
        assert_eq!(v["classes"][1]["den"], 9);
        assert_eq!(v["classes"][1]["count"], 16);
        assert_eq!(v["mean"]["num"], 8);
        assert_eq!(v["mean"]["den"], 27);
        assert!(v["seed"].is_null());
    }

    #[test]
    fn json_round_trip() {
        let h = sample();
        assert_eq!(ClassHistogram::from_json(&h.to_json().unwrap()).unwrap(), h);
        let mut s = ClassHistogram::empty(3, Mode::Sampled { seed: 7, samples: 3 });
        s.add(Rational::new(1, 3), 3);
        assert_eq!(ClassHistogram::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn json_rejects_inconsistent_total() {
        let bad = r#"{"d":2,"mode":"exhaustive","total":5,"classes":[{"num":0,"den":1,"count":4}],"mean":null,"seed":null}"#;
        assert!(ClassHistogram::from_json(bad).is_err());
    }

    #[test]
    fn csv_rows() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "epsilon_num,epsilon_den,epsilon_float,count");
        assert_eq!(lines[1], "0,1,0,8");
        assert!(lines[2].starts_with("4,9,0.444"));
        assert!(lines[2].ends_with(",16"));
    }

    #[test]
    fn empty_mean() {
        assert_eq!(ClassHistogram::empty(3, Mode::Exhaustive).mean().unwrap(), None);
    }

    #[test]
    fn merge_checks_dimension() {
        let mut a = sample();
        assert!(a.merge(&ClassHistogram::empty(3, Mode::Exhaustive)).is_err());
        a.merge(&sample()).unwrap();
        assert_eq!(a.total(), 48);
        assert_eq!(a.mean().unwrap(), Some(Rational::new(8, 27)));
    }
}
