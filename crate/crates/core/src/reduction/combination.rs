use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::series::rational::format_rational;
use crate::series::{QSeries, Rational};
use crate::special::{bibracket, BiBracketIndex};

/// A bi-bracket or a product of two bi-brackets.
pub type BiBracketKey = (BiBracketIndex, Option<BiBracketIndex>);

/// Finite rational combination of bi-brackets and products of two
/// bi-brackets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiBracketCombination {
    terms: BTreeMap<BiBracketKey, Rational>,
}

/// Orders the factors of a product and drops an empty factor.
pub fn normalize_key(x: BiBracketIndex, y: Option<BiBracketIndex>) -> BiBracketKey {
    match y {
        None => (x, None),
        Some(y) if y.depth() == 0 => (x, None),
        Some(y) if x.depth() == 0 => (y, None),
        Some(y) if y < x => (y, Some(x)),
        Some(y) => (x, Some(y)),
    }
}

impl BiBracketCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(x: BiBracketIndex, y: Option<BiBracketIndex>, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(x, y, c);
        out
    }

    pub fn add_term(&mut self, x: BiBracketIndex, y: Option<BiBracketIndex>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = normalize_key(x, y);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &BiBracketCombination, c: &Rational) {
        for ((x, y), v) in &other.terms {
            self.add_term(x.clone(), y.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BiBracketKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &BiBracketIndex, y: Option<&BiBracketIndex>) -> Rational {
        let key = normalize_key(x.clone(), y.cloned());
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total weight of a term (sum over both factors).
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|(x, y)| x.weight() + y.as_ref().map_or(0, BiBracketIndex::weight)).max()
    }

    /// Every nonempty factor has first top entry at least 2.
    pub fn factors_in_qbd(&self) -> bool {
        self.terms.keys().all(|(x, y)| x.in_qbd() && y.as_ref().is_none_or(BiBracketIndex::in_qbd))
    }

    pub fn evaluate(&self, order: usize) -> QSeries {
        let mut acc = QSeries::zero(order);
        for ((x, y), c) in &self.terms {
            let mut s = bibracket(x, order);
            if let Some(y) = y {
                s = &s * &bibracket(y, order);
            }
            acc.add_assign_ref(&s.scale(c));
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((x, y), c)| {
                    let mut factors = vec![x.to_string()];
                    factors.extend(y.iter().map(ToString::to_string));
                    json!({"coeff": format_rational(c), "factors": factors})
                })
                .collect(),
        )
    }
}

impl fmt::Display for BiBracketCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((x, y), c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = match y {
                Some(y) => format!("{x}*{y}"),
                None if x.depth() == 0 => "1".to_string(),
                None => x.to_string(),
            };
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}
