//! Möbius function of the subgroup lattice and Hall's Dirichlet series
//! `P(G, s) = sum over H of mu(H, G) [G:H]^-s`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;

use crate::complex::order_complex;
use crate::error::Result;
use crate::families::{cosets_of_family, family_all_proper};
use crate::group::{FiniteGroup, Subgroup};
use crate::scalar::Ring;

/// `mu(H, G)` for every subgroup `H`, keyed by member list.
#[derive(Debug, Clone)]
pub struct MoebiusTable<T> {
    /// Subgroups in lattice order with their Möbius value.
    entries: Vec<(Subgroup, T)>,
}

impl<T: Ring> MoebiusTable<T> {
    pub fn entries(&self) -> &[(Subgroup, T)] {
        &self.entries
    }

    pub fn mu(&self, h: &Subgroup) -> Option<&T> {
        self.entries.iter().find(|(k, _)| k == h).map(|(_, v)| v)
    }
}

/// Computes `mu(G, G) = 1` and `mu(H, G) = -sum_{K > H} mu(K, G)` top-down.
pub fn moebius_table<T: Ring>(g: &FiniteGroup) -> Result<MoebiusTable<T>> {
    let subs = g.all_subgroups()?;
    let n = subs.len();
    let mut mu: Vec<T> = vec![T::zero(); n];
    // subgroups are sorted by size, so every strict overgroup comes later
    for i in (0..n).rev() {
        if i == n - 1 {
            mu[i] = T::one();
            continue;
        }
        let mut acc = T::zero();
        for j in i + 1..n {
            if subs[j].order() > subs[i].order() && subs[i].is_subset_of(&subs[j]) {
                acc = acc.add_c(&mu[j])?;
            }
        }
        mu[i] = -acc;
    }
    Ok(MoebiusTable {
        entries: subs.iter().cloned().zip(mu).collect(),
    })
}

/// Finite Dirichlet series `sum c_n n^-s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletSeries<T> {
    terms: BTreeMap<u64, T>,
}

impl<T: Ring> DirichletSeries<T> {
    /// Drops zero coefficients except at `n = 1`.
    pub fn new(terms: BTreeMap<u64, T>) -> Self {
        let mut terms: BTreeMap<u64, T> = terms
            .into_iter()
            .filter(|(n, c)| *n == 1 || !c.is_zero())
            .collect();
        terms.entry(1).or_insert_with(T::zero);
        DirichletSeries { terms }
    }

    pub fn terms(&self) -> &BTreeMap<u64, T> {
        &self.terms
    }

    pub fn coefficient(&self, n: u64) -> T {
        self.terms.get(&n).cloned().unwrap_or_else(T::zero)
    }

    /// Exact value at an integer `s`.
    pub fn eval(&self, s: i64) -> Result<Ratio<T>> {
        let mut num = T::zero();
        let mut den = T::one();
        for (&n, c) in &self.terms {
            let base = T::from_u64(n).ok_or(crate::Error::ArithmeticOverflow)?;
            let mut power = T::one();
            for _ in 0..s.unsigned_abs() {
                power = power.mul_c(&base)?;
            }
            if s <= 0 {
                num = num.add_c(&c.mul_c(&power)?)?;
            } else {
                // num/den + c/power
                let l = den.lcm(&power);
                let scaled = num.mul_c(&(l.clone() / den))?;
                num = scaled.add_c(&c.mul_c(&(l.clone() / power))?)?;
                den = l;
            }
        }
        Ok(Ratio::new(num, den))
    }
}

impl<T: Ring> fmt::Display for DirichletSeries<T> {
    /// `1 - 3*2^-s + 2*4^-s`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&n, c) in &self.terms {
            if c.is_zero() && n != 1 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if n == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{n}^-s")?;
            } else {
                write!(f, "{mag}*{n}^-s")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Hall's series from the Möbius table: `c_n = sum of mu(H, G)` over `[G:H] = n`.
pub fn hall_series<T: Ring>(
    g: &FiniteGroup,
    table: &MoebiusTable<T>,
) -> Result<DirichletSeries<T>> {
    let mut terms: BTreeMap<u64, T> = BTreeMap::new();
    for (h, mu) in &table.entries {
        let index = (g.order() / h.order()) as u64;
        let slot = terms.entry(index).or_insert_with(T::zero);
        *slot = slot.add_c(mu)?;
    }
    Ok(DirichletSeries::new(terms))
}

/// `P(G, s)` at an integer `s`.
pub fn eval_p<T: Ring>(g: &FiniteGroup, s: i64) -> Result<Ratio<T>> {
    let table = moebius_table::<T>(g)?;
    hall_series(g, &table)?.eval(s)
}

/// Whether `P(G, -1)` equals minus the reduced Euler characteristic of the
/// coset poset of all proper subgroups.
pub fn bouc_check(g: &FiniteGroup, simplex_cap: usize) -> Result<bool> {
    let p = eval_p::<crate::Integer>(g, -1)?;
    let poset = order_complex(&cosets_of_family(&family_all_proper(g)?), simplex_cap)?;
    Ok(p == Ratio::from_integer(crate::Integer::from(-poset.reduced_euler())))
}

/// Probability that a uniform ordered `k`-tuple generates `G`, by direct
/// count over all `|G|^k` tuples (grouped by the subgroup generated so far).
pub fn generation_probability(g: &FiniteGroup, k: u32) -> Result<Ratio<crate::Integer>> {
    let cyclic: Vec<Subgroup> = (0..g.order()).map(|x| g.subgroup_generated(&[x])).collect();
    let mut layer: HashMap<Subgroup, crate::Integer> =
        HashMap::from([(g.trivial_subgroup(), crate::Integer::from(1))]);
    for _ in 0..k {
        let mut next: HashMap<Subgroup, crate::Integer> = HashMap::new();
        for (h, count) in &layer {
            for c in &cyclic {
                let joined = if c.is_subset_of(h) {
                    h.clone()
                } else {
                    g.join(h, c)
                };
                *next.entry(joined).or_default() += count;
            }
        }
        layer = next;
    }
    let hits = layer.get(&g.whole()).cloned().unwrap_or_default();
    let total = num_traits::pow(crate::Integer::from(g.order()), k as usize);
    Ok(Ratio::new(hits, total))
}
