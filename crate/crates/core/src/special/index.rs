use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[s_1, ..., s_l]` with every `s_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BracketIndex {
    pub s: Vec<u32>,
}

impl BracketIndex {
    pub fn new(s: Vec<u32>) -> Result<Self> {
        if s.contains(&0) {
            return Err(Error::InvalidArgument(format!("bracket entries must be >= 1: {s:?}")));
        }
        Ok(BracketIndex { s })
    }

    pub fn empty() -> Self {
        BracketIndex { s: Vec::new() }
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn to_bibracket(&self) -> BiBracketIndex {
        BiBracketIndex { s: self.s.clone(), r: vec![0; self.s.len()] }
    }
}

impl fmt::Display for BracketIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.s.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A bi-bracket index: top row `s` (each `>= 1`), bottom row `r` (each
/// `>= 0`), of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiBracketIndex {
    pub s: Vec<u32>,
    pub r: Vec<u32>,
}

impl BiBracketIndex {
    pub fn new(s: Vec<u32>, r: Vec<u32>) -> Result<Self> {
        if s.len() != r.len() {
            return Err(Error::InvalidArgument(format!(
                "bi-bracket rows differ in length: {s:?} / {r:?}"
            )));
        }
        if s.contains(&0) {
            return Err(Error::InvalidArgument(format!("bi-bracket top row must be >= 1: {s:?}")));
        }
        Ok(BiBracketIndex { s, r })
    }

    pub fn empty() -> Self {
        BiBracketIndex { s: Vec::new(), r: Vec::new() }
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum::<u32>() + self.r.iter().sum::<u32>()
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    /// Member of the spanning set of qBD: empty, or `s_1 > 1`.
    pub fn in_qbd(&self) -> bool {
        self.s.first().is_none_or(|&s1| s1 > 1)
    }

    /// All bottom entries zero, i.e. an ordinary bracket.
    pub fn is_bracket(&self) -> bool {
        self.r.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for BiBracketIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.s.iter().map(u32::to_string).collect();
        let r: Vec<String> = self.r.iter().map(u32::to_string).collect();
        write!(f, "[{};{}]", s.join(","), r.join(","))
    }
}

impl FromStr for BiBracketIndex {
    type Err = Error;

    /// Parses `[3,1;1,0]` (brackets optional) or `3:1,1:0`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']');
        let nums = |p: &str| -> Result<Vec<u32>> {
            p.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad bi-bracket entry {x:?}"))))
                .collect()
        };
        if let Some((s, r)) = t.split_once(';') {
            return BiBracketIndex::new(nums(s)?, nums(r)?);
        }
        let mut s = Vec::new();
        let mut r = Vec::new();
        for pair in t.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (a, b) = pair.split_once(':').ok_or_else(|| Error::Parse(format!("expected s:r, got {pair:?}")))?;
            s.push(a.trim().parse().map_err(|_| Error::Parse(format!("bad entry {a:?}")))?);
            r.push(b.trim().parse().map_err(|_| Error::Parse(format!("bad entry {b:?}")))?);
        }
        BiBracketIndex::new(s, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_flags() {
        let b = BiBracketIndex::new(vec![3, 1], vec![1, 0]).unwrap();
        assert_eq!(b.weight(), 5);
        assert_eq!(b.depth(), 2);
        assert!(b.in_qbd());
        assert!(!BiBracketIndex::new(vec![1], vec![2]).unwrap().in_qbd());
        assert!(BiBracketIndex::empty().in_qbd());
        assert!(BiBracketIndex::new(vec![1], vec![]).is_err());
        assert!(BiBracketIndex::new(vec![0], vec![0]).is_err());
    }

    #[test]
    fn parse_forms() {
        let a: BiBracketIndex = "[3,1;1,0]".parse().unwrap();
        let b: BiBracketIndex = "3:1,1:0".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[3,1;1,0]");
        assert_eq!("[;]".parse::<BiBracketIndex>().unwrap(), BiBracketIndex::empty());
    }
}
