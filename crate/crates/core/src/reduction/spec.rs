//! Constrained lattice sums and their brute-force evaluation.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{QSeries, Rational};

/// Default cap on the number of tuples visited by [`sumspec_eval`].
pub const DEFAULT_EVAL_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainOrdering {
    /// `n_1 > n_2 > ... > n_k`.
    Strict,
    /// No relation among the `n_i`.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    A,
    B,
}

/// Comparison of `sum of d over group A` with `sum of d over group B`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    #[default]
    None,
    Eq,
    Lt,
    Gt,
}

/// A run of positions `(n_k, d_k)` with `n_k >= start`, `d_k >= 1` and
/// weight `n_k^{u_k} d_k^{t_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainSpec {
    pub start: u8,
    pub ordering: ChainOrdering,
    /// `(u_k, t_k)` per position.
    pub exponents: Vec<(u32, u32)>,
    #[serde(default)]
    pub group: Option<Group>,
}

impl ChainSpec {
    pub fn strict(start: u8, exponents: Vec<(u32, u32)>, group: Option<Group>) -> Self {
        ChainSpec { start, ordering: ChainOrdering::Strict, exponents, group }
    }

    pub fn free(start: u8, exponents: Vec<(u32, u32)>, group: Option<Group>) -> Self {
        ChainSpec { start, ordering: ChainOrdering::Free, exponents, group }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// `sum prod n^u d^t q^{sum n d}` over the admissible tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SumSpec {
    pub chains: Vec<ChainSpec>,
    #[serde(default)]
    pub constraint: Constraint,
}

impl SumSpec {
    pub fn new(chains: Vec<ChainSpec>, constraint: Constraint) -> Result<Self> {
        let s = SumSpec { chains, constraint };
        s.validate()?;
        Ok(s)
    }

    /// `sum_{n_1 > .. > n_r >= 0} sum_{n_{r+1} > .. > n_{r+s} >= 1}` with
    /// `d_1 + .. + d_r = d_{r+1} + .. + d_{r+s}`.
    pub fn w_form(a: Vec<(u32, u32)>, b: Vec<(u32, u32)>) -> Result<Self> {
        SumSpec::new(
            vec![ChainSpec::strict(0, a, Some(Group::A)), ChainSpec::strict(1, b, Some(Group::B))],
            Constraint::Eq,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: SumSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("sum spec: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sum spec serializes")
    }

    /// `sum (u + t + 1)` over all positions.
    pub fn weight(&self) -> u32 {
        self.chains.iter().flat_map(|c| &c.exponents).map(|(u, t)| u + t + 1).sum()
    }

    pub fn positions(&self) -> usize {
        self.chains.iter().map(ChainSpec::len).sum()
    }

    pub fn all_t_positive(&self) -> bool {
        self.chains.iter().flat_map(|c| &c.exponents).all(|&(_, t)| t >= 1)
    }

    pub fn group_len(&self, g: Group) -> usize {
        self.chains.iter().filter(|c| c.group == Some(g)).map(ChainSpec::len).sum()
    }

    fn group_solid(&self, g: Group) -> bool {
        self.chains.iter().filter(|c| c.group == Some(g)).all(|c| c.start >= 1 || c.is_empty())
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.chains {
            if c.start > 1 {
                return Err(Error::InvalidArgument(format!("chain start must be 0 or 1, got {}", c.start)));
            }
        }
        Ok(())
    }

    /// Every position that may take `n = 0` must have its `d` bounded by a
    /// group whose positions all have `n >= 1`.
    pub fn check_bounded(&self) -> Result<()> {
        self.validate()?;
        for c in self.chains.iter().filter(|c| c.start == 0 && !c.is_empty()) {
            let bounded = match (c.group, self.constraint) {
                (Some(g), Constraint::Eq) => Some(g),
                (Some(Group::A), Constraint::Lt) => Some(Group::A),
                (Some(Group::B), Constraint::Gt) => Some(Group::B),
                _ => None,
            };
            let ok = bounded.is_some_and(|g| {
                let other = if g == Group::A { Group::B } else { Group::A };
                self.group_solid(other) && self.group_len(other) > 0
            });
            if !ok {
                return Err(Error::Unbounded(format!(
                    "a chain starting at n = 0 needs its d-variables bounded by the constraint: {self}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chains
            .iter()
            .map(|c| {
                let e: Vec<String> = c.exponents.iter().map(|(u, t)| format!("{u}:{t}")).collect();
                let ord = if c.ordering == ChainOrdering::Strict { ">" } else { "~" };
                let g = match c.group {
                    Some(Group::A) => "A",
                    Some(Group::B) => "B",
                    None => "-",
                };
                format!("{g}{ord}{}({})", c.start, e.join(","))
            })
            .collect();
        write!(f, "{} {:?}", parts.join(" "), self.constraint)
    }
}

struct Pos {
    chain: usize,
    first: bool,
    strict: bool,
    start: u64,
    u: u32,
    t: u32,
    group: Option<Group>,
}

struct Walk<'a> {
    pos: &'a [Pos],
    order: u64,
    constraint: Constraint,
    acc: Vec<i128>,
    visited: u64,
    budget: u64,
}

fn pow(x: u64, e: u32) -> Option<i128> {
    (x as i128).checked_pow(e)
}

impl Walk<'_> {
    fn go(&mut self, k: usize, used: u64, prev_n: u64, sums: [u64; 2], weight: i128) -> Result<()> {
        if k == self.pos.len() {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::Budget(format!("sum evaluation visited more than {} tuples", self.budget)));
            }
            let ok = match self.constraint {
                Constraint::None => true,
                Constraint::Eq => sums[0] == sums[1],
                Constraint::Lt => sums[0] < sums[1],
                Constraint::Gt => sums[0] > sums[1],
            };
            if ok {
                self.acc[used as usize] += weight;
            }
            return Ok(());
        }
        let p = &self.pos[k];
        let rem = self.order - used;
        let n_max = if p.strict && !p.first { prev_n.saturating_sub(1).min(rem) } else { rem };
        if p.strict && !p.first && prev_n == 0 {
            return Ok(());
        }
        for n in p.start..=n_max {
            let nu = if n == 0 && p.u == 0 { 1 } else { pow(n, p.u).ok_or_else(overflow)? };
            if nu == 0 {
                continue;
            }
            let d_max = if n == 0 { self.order } else { rem / n };
            for d in 1..=d_max {
                let w = pow(d, p.t)
                    .and_then(|dt| dt.checked_mul(nu))
                    .and_then(|x| x.checked_mul(weight))
                    .ok_or_else(overflow)?;
                let mut s = sums;
                match p.group {
                    Some(Group::A) => s[0] += d,
                    Some(Group::B) => s[1] += d,
                    None => {}
                }
                self.go(k + 1, used + n * d, n, s, w)?;
            }
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Budget("integer weight overflow in sum evaluation".into())
}

/// Direct enumeration of every admissible tuple with `sum n d <= N`.
pub fn sumspec_eval(s: &SumSpec, order: usize) -> Result<QSeries> {
    sumspec_eval_budget(s, order, DEFAULT_EVAL_BUDGET)
}

pub fn sumspec_eval_budget(s: &SumSpec, order: usize, budget: u64) -> Result<QSeries> {
    s.check_bounded()?;
    let mut pos = Vec::new();
    for (ci, c) in s.chains.iter().enumerate() {
        for (k, &(u, t)) in c.exponents.iter().enumerate() {
            pos.push(Pos {
                chain: ci,
                first: k == 0,
                strict: c.ordering == ChainOrdering::Strict,
                start: c.start as u64,
                u,
                t,
                group: c.group,
            });
        }
    }
    debug_assert!(pos.windows(2).all(|w| w[0].chain <= w[1].chain));
    let mut walk = Walk { pos: &pos, order: order as u64, constraint: s.constraint, acc: vec![0; order + 1], visited: 0, budget };
    walk.go(0, 0, 0, [0, 0], 1)?;
    Ok(QSeries::from_coeffs(walk.acc.into_iter().map(|c| Rational::from_integer(BigInt::from(c))).collect(), order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::int;

    #[test]
    fn empty_spec_is_one() {
        assert_eq!(sumspec_eval(&SumSpec::default(), 6).unwrap(), QSeries::one(6));
    }

    #[test]
    fn single_chain_is_divisor_count() {
        let s = SumSpec::new(vec![ChainSpec::strict(1, vec![(0, 0)], None)], Constraint::None).unwrap();
        assert_eq!(sumspec_eval(&s, 6).unwrap(), QSeries::from_ints(&[0, 1, 2, 2, 3, 2, 4], 6));
    }

    #[test]
    fn unbounded_is_rejected() {
        let s = SumSpec::new(vec![ChainSpec::strict(0, vec![(0, 0)], None)], Constraint::None).unwrap();
        assert!(matches!(sumspec_eval(&s, 4), Err(Error::Unbounded(_))));
        let both = SumSpec::new(
            vec![ChainSpec::strict(0, vec![(0, 0)], Some(Group::A)), ChainSpec::strict(0, vec![(0, 0)], Some(Group::B))],
            Constraint::Eq,
        )
        .unwrap();
        assert!(sumspec_eval(&both, 4).is_err());
        assert!(SumSpec::new(vec![ChainSpec::strict(2, vec![], None)], Constraint::None).is_err());
    }

    #[test]
    fn w_form_one_one() {
        // sum_{n1 >= 0, n2 >= 1, d} d^2 q^{(n1 + n2) d}
        let s = SumSpec::w_form(vec![(0, 1)], vec![(0, 1)]).unwrap();
        let got = sumspec_eval(&s, 8).unwrap();
        let mut oracle = vec![int(0); 9];
        for m in 1..=8usize {
            for d in 1..=m {
                if m % d == 0 {
                    // n1 + n2 = m / d with n2 >= 1: m / d choices
                    oracle[m] += int((d * d * (m / d)) as i64);
                }
            }
        }
        assert_eq!(got, QSeries::from_coeffs(oracle, 8));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"chains":[{"start":0,"ordering":"strict","exponents":[[0,1]],"group":"A"},
                       {"start":1,"ordering":"free","exponents":[[1,0],[0,2]],"group":"B"}],"constraint":"eq"}"#;
        let s = SumSpec::from_json(text).unwrap();
        assert_eq!(s.chains[1].exponents, vec![(1, 0), (0, 2)]);
        assert_eq!(SumSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(SumSpec::from_json(r#"{"chains":[{"start":3,"ordering":"strict","exponents":[]}]}"#).is_err());
    }
}
