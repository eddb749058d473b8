//! Unordered chains as sums of strictly ordered chains.

use num_traits::{One, Zero};

use super::powers::composition_sum;
use super::spec::{ChainOrdering, ChainSpec, SumSpec};
use crate::error::Result;
use crate::series::Rational;

/// Ordered set partitions of `{0, .., k-1}`, blocks listed from the
/// largest `n` down.
fn ordered_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(rest: u32, k: usize, prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        // every nonempty submask of `rest`
        let mut sub = rest;
        while sub != 0 {
            prefix.push((0..k).filter(|i| sub >> i & 1 == 1).collect());
            go(rest & !sub, k, prefix, out);
            prefix.pop();
            sub = (sub - 1) & rest;
        }
    }
    let mut out = Vec::new();
    go(if k == 0 { 0 } else { (1u32 << k) - 1 }, k, &mut Vec::new(), &mut out);
    out
}

/// Strict chains whose weighted sum equals the given free chain.
fn decompose_chain(c: &ChainSpec) -> Vec<(Rational, ChainSpec)> {
    if c.ordering == ChainOrdering::Strict || c.len() <= 1 {
        return vec![(Rational::one(), ChainSpec { ordering: ChainOrdering::Strict, ..c.clone() })];
    }
    let mut out = Vec::new();
    for blocks in ordered_partitions(c.len()) {
        // options per block: (coefficient, merged (u, t))
        let per_block: Vec<Vec<(Rational, (u32, u32))>> = blocks
            .iter()
            .map(|b| {
                let u: u32 = b.iter().map(|&i| c.exponents[i].0).sum();
                let ts: Vec<u32> = b.iter().map(|&i| c.exponents[i].1).collect();
                composition_sum(&ts)
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (x.clone(), (u, j as u32)))
                    .collect()
            })
            .collect();
        let mut partial: Vec<(Rational, Vec<(u32, u32)>)> = vec![(Rational::one(), Vec::new())];
        for opts in &per_block {
            let mut next = Vec::new();
            for (c0, e0) in &partial {
                for (c1, e1) in opts {
                    let mut e = e0.clone();
                    e.push(*e1);
                    next.push((c0 * c1, e));
                }
            }
            partial = next;
        }
        for (coef, exps) in partial {
            out.push((coef, ChainSpec { ordering: ChainOrdering::Strict, exponents: exps, ..c.clone() }));
        }
    }
    out
}

/// Rewrites every free chain as a combination of strict chains: equal
/// `n`-values are merged (exponents of `n` add) and the `d`-values of a
/// merged block are replaced by their sum via composition power sums.
pub fn order_decompose(s: &SumSpec) -> Result<Vec<(Rational, SumSpec)>> {
    s.validate()?;
    let mut acc: Vec<(Rational, Vec<ChainSpec>)> = vec![(Rational::one(), Vec::new())];
    for c in &s.chains {
        let opts = decompose_chain(c);
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for (c0, chains) in &acc {
            for (c1, ch) in &opts {
                let mut v = chains.clone();
                v.push(ch.clone());
                next.push((c0 * c1, v));
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(c, chains)| (c, SumSpec { chains, constraint: s.constraint })).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fubini_counts() {
        let counts: Vec<usize> = (0..5).map(|k| ordered_partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 13, 75]);
    }

    #[test]
    fn length_one_is_identity() {
        let s = SumSpec { chains: vec![ChainSpec::free(1, vec![(2, 1)], None)], ..Default::default() };
        let d = order_decompose(&s).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[0].0.is_one());
        assert_eq!(d[0].1.chains[0].exponents, vec![(2, 1)]);
        assert_eq!(d[0].1.chains[0].ordering, ChainOrdering::Strict);
    }
}
