//! Weight-graded spanning sets of the families.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::QSeries;
use crate::special::{bibracket, bracket, eisenstein, zvalue, BiBracketIndex, BracketIndex, FamilyTag};

/// Default cap on the number of basis elements.
pub const DEFAULT_BASIS_BUDGET: usize = 20_000;

/// How a basis element is built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Bracket(BracketIndex),
    BiBracket(BiBracketIndex),
    /// Product of Z-values.
    ZMonomial(Vec<Vec<u32>>),
    /// Product of single-entry brackets `[k]`, `k >= 2`.
    BracketMonomial(Vec<u32>),
    /// Product of Eisenstein series `G_k`.
    GMonomial(Vec<u32>),
}

impl Generator {
    pub fn weight(&self) -> u32 {
        match self {
            Generator::Bracket(b) => b.weight(),
            Generator::BiBracket(b) => b.weight(),
            Generator::ZMonomial(fs) => fs.iter().flatten().sum(),
            Generator::BracketMonomial(ks) | Generator::GMonomial(ks) => ks.iter().sum(),
        }
    }

    pub fn in_qbd(&self) -> bool {
        match self {
            Generator::Bracket(b) => b.to_bibracket().in_qbd(),
            Generator::BiBracket(b) => b.in_qbd(),
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        fn power_product(items: Vec<String>) -> String {
            if items.is_empty() {
                return "1".into();
            }
            let mut parts: Vec<String> = Vec::new();
            let mut i = 0;
            while i < items.len() {
                let j = (i..items.len()).find(|&j| items[j] != items[i]).unwrap_or(items.len());
                let k = j - i;
                parts.push(if k == 1 { items[i].clone() } else { format!("{}^{k}", items[i]) });
                i = j;
            }
            parts.join("*")
        }
        match self {
            Generator::Bracket(b) if b.depth() == 0 => "1".into(),
            Generator::BiBracket(b) if b.depth() == 0 => "1".into(),
            Generator::Bracket(b) => b.to_string(),
            Generator::BiBracket(b) => b.to_string(),
            Generator::ZMonomial(fs) => power_product(
                fs.iter()
                    .map(|f| format!("Z({})", f.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
                    .collect(),
            ),
            Generator::BracketMonomial(ks) => power_product(ks.iter().map(|k| format!("[{k}]")).collect()),
            Generator::GMonomial(ks) => power_product(ks.iter().map(|k| format!("G{k}")).collect()),
        }
    }

    pub fn series(&self, order: usize) -> Result<QSeries> {
        let product = |fs: Vec<QSeries>| fs.iter().fold(QSeries::one(order), |acc, f| &acc * f);
        Ok(match self {
            Generator::Bracket(b) => bracket(b, order),
            Generator::BiBracket(b) => bibracket(b, order),
            Generator::ZMonomial(fs) => product(fs.iter().map(|f| zvalue(f, order)).collect::<Result<_>>()?),
            Generator::BracketMonomial(ks) => {
                product(ks.iter().map(|&k| bracket(&BracketIndex { s: vec![k] }, order)).collect())
            }
            Generator::GMonomial(ks) => product(ks.iter().map(|&k| eisenstein(k, order)).collect::<Result<_>>()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub weight: u32,
    pub in_qbd: bool,
    pub generator: Generator,
    pub series: QSeries,
}

/// Compositions of `w` with parts `>= min_part`, in lexicographic order.
fn compositions(w: u32, min_part: u32) -> Vec<Vec<u32>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in min_part.max(1)..=w {
        for mut rest in compositions(w - first, min_part) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Non-increasing sequences of items from `gens` (sorted) with total
/// weight `w`; each multiset appears once.
fn multisets<T: Clone>(gens: &[(u32, T)], w: u32, start: usize) -> Vec<Vec<T>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, (gw, g)) in gens.iter().enumerate().skip(start) {
        if *gw == 0 || *gw > w {
            continue;
        }
        for mut rest in multisets(gens, w - gw, i) {
            rest.insert(0, g.clone());
            out.push(rest);
        }
    }
    out
}

/// Generators of exact weight `w`, in deterministic order.
fn generators_of_weight(family: FamilyTag, w: u32) -> Vec<Generator> {
    let mut gens: Vec<Generator> = match family {
        FamilyTag::Md | FamilyTag::QMd => compositions(w, 1)
            .into_iter()
            .filter(|s| family == FamilyTag::Md || s.first().is_none_or(|&s1| s1 >= 2))
            .map(|s| Generator::Bracket(BracketIndex { s }))
            .collect(),
        FamilyTag::Bd | FamilyTag::QBd => {
            let mut out = Vec::new();
            // split w into columns of (s_i + r_i) >= 1, then each column into s_i >= 1, r_i >= 0
            for cols in compositions(w, 1) {
                let mut partial: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![], vec![])];
                for &c in &cols {
                    let mut next = Vec::new();
                    for (s, r) in &partial {
                        for si in (1..=c).rev() {
                            let (mut s2, mut r2) = (s.clone(), r.clone());
                            s2.push(si);
                            r2.push(c - si);
                            next.push((s2, r2));
                        }
                    }
                    partial = next;
                }
                for (s, r) in partial {
                    let b = BiBracketIndex { s, r };
                    if family == FamilyTag::Bd || b.in_qbd() {
                        out.push(Generator::BiBracket(b));
                    }
                }
            }
            out
        }
        FamilyTag::QMzv => {
            // generators Z(s) with every s_i >= 2, of any weight <= w
            let mut gens: Vec<(u32, Vec<u32>)> = Vec::new();
            for v in 2..=w {
                for s in compositions(v, 2) {
                    gens.push((v, s));
                }
            }
            multisets(&gens, w, 0).into_iter().map(Generator::ZMonomial).collect()
        }
        FamilyTag::Qm => {
            let gens: Vec<(u32, u32)> = vec![(2, 2), (4, 4), (6, 6)];
            multisets(&gens, w, 0).into_iter().map(Generator::GMonomial).collect()
        }
    };
    gens.sort_by_key(|g| match g {
        Generator::Bracket(b) => (b.depth(), b.s.clone(), vec![]),
        Generator::BiBracket(b) => (b.depth(), b.s.clone(), b.r.clone()),
        Generator::ZMonomial(fs) => {
            let depth = fs.iter().map(|f| f.len() as u32).sum::<u32>();
            (fs.len(), std::iter::once(depth).chain(fs.iter().flatten().copied()).collect(), vec![])
        }
        Generator::BracketMonomial(ks) | Generator::GMonomial(ks) => (ks.len(), ks.clone(), vec![]),
    });
    gens
}

/// Products of single-entry brackets `[k]` (`k >= 2`) of weight exactly `w`.
fn bracket_monomials(w: u32) -> Vec<Generator> {
    let gens: Vec<(u32, u32)> = (2..=w).map(|k| (k, k)).collect();
    let mut out: Vec<Generator> = multisets(&gens, w, 0).into_iter().map(Generator::BracketMonomial).collect();
    out.sort_by_key(|g| match g {
        Generator::BracketMonomial(ks) => (ks.len(), ks.clone()),
        _ => unreachable!(),
    });
    out
}

fn materialize(gens: Vec<Generator>, order: usize, budget: usize) -> Result<Vec<BasisElement>> {
    if gens.len() > budget {
        return Err(Error::Budget(format!("basis of {} elements exceeds the budget {budget}", gens.len())));
    }
    gens.into_par_iter()
        .map(|g| {
            Ok(BasisElement { label: g.label(), weight: g.weight(), in_qbd: g.in_qbd(), series: g.series(order)?, generator: g })
        })
        .collect()
}

/// All family members of weight `<= max_weight`, graded then lexicographic.
pub fn enumerate_basis(family: FamilyTag, max_weight: u32, order: usize) -> Result<Vec<BasisElement>> {
    enumerate_basis_budget(family, max_weight, order, DEFAULT_BASIS_BUDGET)
}

pub fn enumerate_basis_budget(family: FamilyTag, max_weight: u32, order: usize, budget: usize) -> Result<Vec<BasisElement>> {
    let mut gens = Vec::new();
    for w in 0..=max_weight {
        gens.extend(generators_of_weight(family, w));
        if gens.len() > budget {
            return Err(Error::Budget(format!("basis exceeds the budget {budget} at weight {w}")));
        }
    }
    materialize(gens, order, budget)
}

/// Family members of weight exactly `weight`.
pub fn enumerate_basis_exact(family: FamilyTag, weight: u32, order: usize) -> Result<Vec<BasisElement>> {
    materialize(generators_of_weight(family, weight), order, DEFAULT_BASIS_BUDGET)
}

/// Monomials in the single brackets `[k]`, `k >= 2`, of weight exactly
/// `weight`; weights of products add.
pub fn bracket_monomial_basis(weight: u32, order: usize) -> Result<Vec<BasisElement>> {
    materialize(bracket_monomials(weight), order, DEFAULT_BASIS_BUDGET)
}
