//! Measured quantities paired with the asymptotic bound expressions they are
//! compared against. Pass/fail flags here are informational: the bounds only
//! hold for large `n`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

/// An exact non-negative rational `num / den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRatio {
    #[serde(with = "biguint_string")]
    pub num: BigUint,
    #[serde(with = "biguint_string")]
    pub den: BigUint,
}

impl ExactRatio {
    pub fn new(num: BigUint, den: BigUint) -> Self {
        assert!(den > BigUint::from(0u8), "zero denominator");
        ExactRatio { num, den }
    }

    pub fn from_u128(num: u128, den: u128) -> Self {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::INFINITY);
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        n / d
    }

    /// `self^exp` as a float.
    pub fn powf(&self, exp: f64) -> f64 {
        (exp * self.to_f64().ln()).exp()
    }

    /// Exact `value <= self`.
    pub fn ge_int(&self, value: u128) -> bool {
        BigUint::from(value) * &self.den <= self.num
    }

    pub fn is_integer(&self) -> bool {
        (&self.num % &self.den) == BigUint::from(0u8)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        })
    }
}

/// One measured value against one bound expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    /// The bound as written, e.g. `d^(1-eps)`.
    pub expression: String,
    /// The bound with parameters substituted, e.g. `1728^(1-0.142857)`.
    pub substituted: String,
    pub bound: f64,
    pub pass: bool,
    /// Vertex, tile or conflict attaining the measured value, when known.
    pub witness: Option<String>,
}

impl BoundCheck {
    pub fn new(
        name: impl Into<String>,
        measured: f64,
        relation: Relation,
        expression: impl Into<String>,
        substituted: impl Into<String>,
        bound: f64,
    ) -> Self {
        let pass = match relation {
            Relation::AtMost => measured <= bound,
            Relation::AtLeast => measured >= bound,
        };
        BoundCheck {
            name: name.into(),
            measured,
            relation,
            expression: expression.into(),
            substituted: substituted.into(),
            bound,
            pass,
            witness: None,
        }
    }

    /// Overrides the float comparison with an exact one.
    pub fn with_exact_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:>14} {} {:<24} = {:<14.4} [{}]",
            self.name,
            self.measured,
            self.relation,
            self.expression,
            self.bound,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub system: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<BoundCheck>,
}

impl ConditionReport {
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.system)?;
        for (k, v) in &self.parameters {
            writeln!(f, "  {k} = {v}")?;
        }
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
