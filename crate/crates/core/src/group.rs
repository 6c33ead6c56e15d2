//! Concrete finite groups on canonically indexed elements.
//!
//! Elements are the integers `0..order` with `0` the identity. Products come
//! from a dense multiplication table (orders up to [`DENSE_TABLE_LIMIT`]) or,
//! for larger permutation groups, from composing permutations directly.
//!
//! Permutations multiply left to right: `p * q` first applies `p`, then `q`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::error::{Error, Result};

pub const DENSE_TABLE_LIMIT: usize = 4096;

/// Orders up to this are checked for associativity exhaustively.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;

/// A subgroup, stored as the strictly increasing list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a member list without checking closure.
    ///
    /// The list is sorted and deduplicated; use [`FiniteGroup::is_subgroup`]
    /// when the closure invariant is not already known.
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        is_sorted_subset(&self.members, &other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: sorted_intersection(&self.members, &other.members),
        }
    }

    /// Membership mask over `0..order`.
    pub fn mask(&self, order: usize) -> Vec<bool> {
        let mut mask = vec![false; order];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

enum Backing {
    Table(Vec<u32>),
    Perms {
        perms: Vec<Vec<u16>>,
        lookup: HashMap<Vec<u16>, u32>,
    },
}

struct GroupData {
    label: String,
    order: usize,
    backing: Backing,
    inv: Vec<u32>,
    subgroup_cap: usize,
    lattice: OnceLock<Result<Vec<Subgroup>>>,
}

/// A finite group with elements `0..order`. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.data.label)
            .field("order", &self.data.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table.
    ///
    /// Index 0 must be a two-sided identity and every element needs an
    /// inverse; associativity is not checked here (see
    /// [`FiniteGroup::check_axioms`]).
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        Self::from_table_with_cap(label, order, table, Caps::default().subgroup_order)
    }

    pub(crate) fn from_table_with_cap(
        label: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        subgroup_cap: usize,
    ) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::Invalid("table size does not match order".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::Invalid("table entry out of range".into()));
        }
        for x in 0..order {
            if table[x] as usize != x || table[x * order] as usize != x {
                return Err(Error::Invalid("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            match row.iter().position(|&y| y == 0) {
                Some(y) => inv[x] = y as u32,
                None => return Err(Error::Invalid(format!("element {x} has no inverse"))),
            }
        }
        Ok(FiniteGroup {
            data: Arc::new(GroupData {
                label: label.into(),
                order,
                backing: Backing::Table(table),
                inv,
                subgroup_cap,
                lattice: OnceLock::new(),
            }),
        })
    }

    /// Builds a group from its complete list of permutations.
    ///
    /// The list is reindexed by image sequence, so the identity lands at 0.
    pub(crate) fn from_perm_list(
        label: impl Into<String>,
        mut perms: Vec<Vec<u16>>,
        subgroup_cap: usize,
    ) -> Result<Self> {
        perms.sort_unstable();
        perms.dedup();
        let order = perms.len();
        let lookup: HashMap<Vec<u16>, u32> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let compose =
            |a: &[u16], b: &[u16]| -> Vec<u16> { a.iter().map(|&x| b[x as usize]).collect() };
        let find = |p: &Vec<u16>| -> Result<u32> {
            lookup
                .get(p)
                .copied()
                .ok_or_else(|| Error::Invalid("permutation list is not closed".into()))
        };
        let mut inv = vec![0u32; order];
        for (i, p) in perms.iter().enumerate() {
            let mut q = vec![0u16; p.len()];
            for (x, &y) in p.iter().enumerate() {
                q[y as usize] = x as u16;
            }
            inv[i] = find(&q)?;
        }
        let backing = if order <= DENSE_TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in &perms {
                for b in &perms {
                    table.push(find(&compose(a, b))?);
                }
            }
            Backing::Table(table)
        } else {
            Backing::Perms { perms, lookup }
        };
        Ok(FiniteGroup {
            data: Arc::new(GroupData {
                label: label.into(),
                order,
                backing,
                inv,
                subgroup_cap,
                lattice: OnceLock::new(),
            }),
        })
    }

    pub fn label(&self) -> &str {
        &self.data.label
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn is_trivial(&self) -> bool {
        self.data.order == 1
    }

    /// Cap on the order for which the subgroup lattice may be enumerated.
    pub fn subgroup_cap(&self) -> usize {
        self.data.subgroup_cap
    }

    /// Same group with a different subgroup-enumeration cap.
    pub fn with_subgroup_cap(&self, cap: usize) -> Self {
        let backing = match &self.data.backing {
            Backing::Table(t) => Backing::Table(t.clone()),
            Backing::Perms { perms, lookup } => Backing::Perms {
                perms: perms.clone(),
                lookup: lookup.clone(),
            },
        };
        FiniteGroup {
            data: Arc::new(GroupData {
                label: self.data.label.clone(),
                order: self.data.order,
                backing,
                inv: self.data.inv.clone(),
                subgroup_cap: cap,
                lattice: OnceLock::new(),
            }),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.data.backing {
            Backing::Table(t) => t[a * self.data.order + b] as usize,
            Backing::Perms { perms, lookup } => {
                let p: Vec<u16> = perms[a].iter().map(|&x| perms[b][x as usize]).collect();
                lookup[&p] as usize
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.data.inv[a] as usize
    }

    /// `g * x * g^-1`
    pub fn conjugate_element(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn power(&self, x: usize, k: u64) -> usize {
        let (mut acc, mut base, mut k) = (0, x, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut n = 1;
        while y != 0 {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, x| num_integer::lcm(acc, self.element_order(x)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Full multiplication table, row-major; used as a memoization key.
    pub fn table(&self) -> Vec<u32> {
        match &self.data.backing {
            Backing::Table(t) => t.clone(),
            Backing::Perms { .. } => {
                let n = self.order();
                let mut t = Vec::with_capacity(n * n);
                for a in 0..n {
                    for b in 0..n {
                        t.push(self.mul(a, b) as u32);
                    }
                }
                t
            }
        }
    }

    /// Checks identity, inverse and associativity laws.
    ///
    /// Associativity is exhaustive up to [`EXHAUSTIVE_AXIOM_LIMIT`] and sampled
    /// with `seed` above it.
    pub fn check_axioms(&self, seed: u64) -> std::result::Result<(), String> {
        let n = self.order();
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(format!("identity law fails at {x}"));
            }
            if self.mul(x, self.inv(x)) != 0 || self.mul(self.inv(x), x) != 0 {
                return Err(format!("inverse law fails at {x}"));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(format!("associativity fails at ({a},{b},{c})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20_000 {
                let (a, b, c) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !assoc(a, b, c) {
                    return Err(format!("associativity fails at ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_generated(&self, seed: &[usize]) -> Subgroup {
        let n = self.order();
        let gens: Vec<usize> = seed.iter().copied().filter(|&g| g != 0).collect();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seed = a.members.clone();
        seed.extend_from_slice(&b.members);
        self.subgroup_generated(&seed)
    }

    /// Whether a member list is closed under products and inverses.
    pub fn is_subgroup(&self, h: &Subgroup) -> bool {
        if !h.contains(0) {
            return false;
        }
        let mask = h.mask(self.order());
        h.members
            .iter()
            .all(|&a| mask[self.inv(a)] && h.members.iter().all(|&b| mask[self.mul(a, b)]))
    }

    /// Every subgroup exactly once, ordered by `(size, members)`.
    ///
    /// Starts from the cyclic subgroups and closes under joins with cyclic
    /// subgroups; every subgroup is a join of cyclic ones, so the closure
    /// under pairwise joins is reached this way. Cached per group.
    pub fn all_subgroups(&self) -> Result<&[Subgroup]> {
        self.data
            .lattice
            .get_or_init(|| self.enumerate_subgroups())
            .as_deref()
            .map_err(Clone::clone)
    }

    fn enumerate_subgroups(&self) -> Result<Vec<Subgroup>> {
        if self.order() > self.data.subgroup_cap {
            return Err(Error::OverCap {
                what: "group order for subgroup enumeration",
                limit: self.data.subgroup_cap,
            });
        }
        let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for x in 0..self.order() {
            let c = self.subgroup_generated(&[x]);
            if seen.insert(c.members.clone()) {
                cyclic.push((x, c));
            }
        }
        // (subgroup, generators)
        let mut found: Vec<(Subgroup, Vec<usize>)> =
            cyclic.iter().map(|(x, c)| (c.clone(), vec![*x])).collect();
        let mut frontier: Vec<usize> = (0..found.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &i in &frontier {
                let (h, gens) = found[i].clone();
                for (x, c) in &cyclic {
                    if c.is_subset_of(&h) {
                        continue;
                    }
                    let mut g2 = gens.clone();
                    g2.push(*x);
                    let j = self.subgroup_generated(&g2);
                    if seen.insert(j.members.clone()) {
                        next.push(found.len());
                        found.push((j, g2));
                    }
                }
            }
            frontier = next;
        }
        let mut subs: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
        subs.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(subs)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let mask = h.mask(self.order());
        (0..self.order()).all(|g| {
            h.members
                .iter()
                .all(|&x| mask[self.conjugate_element(x, g)])
        })
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        Ok(self
            .all_subgroups()?
            .iter()
            .filter(|h| self.is_normal(h))
            .cloned()
            .collect())
    }

    /// `g H g^-1`
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup::from_members(
            h.members
                .iter()
                .map(|&x| self.conjugate_element(x, g))
                .collect(),
        )
    }

    /// Quotient by a normal subgroup, with cosets indexed by increasing least
    /// member, together with the projection.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let order = self.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut reps = Vec::new();
        for x in 0..order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &m in &n.members {
                coset_of[self.mul(x, m)] = idx;
            }
        }
        let q = reps.len();
        let mut table = Vec::with_capacity(q * q);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[self.mul(a, b)] as u32);
            }
        }
        let label = format!("({})/{}", self.label(), n.order());
        let target = FiniteGroup::from_table_with_cap(label, q, table, self.data.subgroup_cap)?;
        let hom = GroupHom {
            source: self.clone(),
            target: target.clone(),
            image_of: coset_of,
        };
        Ok((target, hom))
    }

    /// A subgroup as a group in its own right, elements indexed by increasing
    /// member index, with the inclusion homomorphism.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        let pos: HashMap<usize, usize> =
            h.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let k = h.order();
        let mut table = Vec::with_capacity(k * k);
        for &a in &h.members {
            for &b in &h.members {
                let p = pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::Invalid("member list is not closed".into()))?;
                table.push(*p as u32);
            }
        }
        let label = format!("{}<{}>", self.label(), h);
        let sub = FiniteGroup::from_table_with_cap(label, k, table, self.data.subgroup_cap)?;
        let hom = GroupHom {
            source: sub.clone(),
            target: self.clone(),
            image_of: h.members.clone(),
        };
        Ok((sub, hom))
    }

    pub fn is_simple(&self) -> Result<bool> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        if self.is_abelian() {
            return Ok(is_prime(self.order()));
        }
        Ok(self.normal_subgroups()?.len() == 2)
    }

    /// Nontrivial normal subgroups minimal under inclusion, in lattice order.
    pub fn minimal_normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        if self.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        let normals: Vec<Subgroup> = self
            .normal_subgroups()?
            .into_iter()
            .filter(|h| !h.is_trivial())
            .collect();
        Ok(normals
            .iter()
            .filter(|h| {
                !normals
                    .iter()
                    .any(|k| k.order() < h.order() && k.is_subset_of(h))
            })
            .cloned()
            .collect())
    }

    /// Whether the products `h * k` cover the whole group, with `k` proper.
    pub fn product_is_group_complement(&self, h: &Subgroup, k: &Subgroup) -> bool {
        if k.order() == self.order() {
            return false;
        }
        let mut covered = vec![false; self.order()];
        let mut count = 0;
        for &a in &h.members {
            for &b in &k.members {
                let p = self.mul(a, b);
                if !covered[p] {
                    covered[p] = true;
                    count += 1;
                }
            }
        }
        count == self.order()
    }

    /// Largest normal subgroup inside `h`: the intersection of its conjugates.
    pub fn coset_action_kernel(&self, h: &Subgroup) -> Subgroup {
        let mut core = h.members.clone();
        for g in 0..self.order() {
            if core.len() == 1 {
                break;
            }
            let conj = self.conjugate(h, g);
            core = sorted_intersection(&core, &conj.members);
        }
        Subgroup { members: core }
    }

    /// Subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut seed = HashSet::new();
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                seed.insert(c);
            }
        }
        let mut seed: Vec<usize> = seed.into_iter().collect();
        seed.sort_unstable();
        self.subgroup_generated(&seed)
    }

    /// Invariant factors `d1 | d2 | ...` of the abelianization, omitting 1s.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        let derived = self.derived_subgroup();
        let (ab, _) = self.quotient(&derived)?;
        Ok(abelian_group_invariants(&ab))
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.order()).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for x in by_order {
            if current.order() == self.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Brute-force isomorphism test by extending generator images.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let histogram = |g: &FiniteGroup| {
            let mut h = BTreeMap::new();
            for x in 0..g.order() {
                *h.entry(g.element_order(x)).or_insert(0usize) += 1;
            }
            h
        };
        if histogram(self) != histogram(other) || self.is_abelian() != other.is_abelian() {
            return false;
        }
        let gens = self.generating_set();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                (0..other.order())
                    .filter(|&y| other.element_order(y) == o)
                    .collect()
            })
            .collect();
        let mut images = Vec::with_capacity(gens.len());
        self.extend_iso(other, &gens, &candidates, &mut images)
    }

    fn extend_iso(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
    ) -> bool {
        if images.len() == gens.len() {
            return self.images_define_isomorphism(other, gens, images);
        }
        for &y in &candidates[images.len()] {
            images.push(y);
            if self.extend_iso(other, gens, candidates, images) {
                return true;
            }
            images.pop();
        }
        false
    }

    fn images_define_isomorphism(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> bool {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        map[0] = 0;
        hit[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], img);
                if map[y] == usize::MAX {
                    if hit[fy] {
                        return false;
                    }
                    map[y] = fy;
                    hit[fy] = true;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        map.iter().all(|&m| m != usize::MAX)
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of an abelian group, from counts of `p^k`-torsion.
fn abelian_group_invariants(g: &FiniteGroup) -> Vec<u64> {
    let n = g.order() as u64;
    // per prime: exponents of the cyclic p-factors, largest first
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for p in prime_factors(n) {
        let mut counts = vec![1usize];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = (0..g.order()).filter(|&x| g.power(x, pk) == 0).count();
            if c == *counts.last().unwrap() {
                break;
            }
            counts.push(c);
        }
        // number of factors of order >= p^k is log_p(counts[k] / counts[k-1])
        let mut at_least: Vec<u32> = Vec::new();
        for k in 1..counts.len() {
            let mut ratio = counts[k] / counts[k - 1];
            let mut e = 0;
            while ratio > 1 {
                ratio /= p as usize;
                e += 1;
            }
            at_least.push(e);
        }
        let factors = at_least.first().copied().unwrap_or(0) as usize;
        let exps: Vec<u32> = (0..factors)
            .map(|i| at_least.iter().filter(|&&c| c as usize > i).count() as u32)
            .collect();
        primary.push((p, exps));
    }
    let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            primary
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    out.reverse();
    out
}

/// A homomorphism given by the images of all source elements.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub image_of: Vec<usize>,
}

impl GroupHom {
    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            image_of: (0..g.order()).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image_of[x]
    }

    pub fn is_homomorphism(&self) -> bool {
        let s = &self.source;
        self.image_of[0] == 0
            && (0..s.order()).all(|a| {
                (0..s.order()).all(|b| {
                    self.image_of[s.mul(a, b)]
                        == self.target.mul(self.image_of[a], self.image_of[b])
                })
            })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.image_of {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_members(
            (0..self.source.order())
                .filter(|&x| self.image_of[x] == 0)
                .collect(),
        )
    }

    pub fn image(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_members(h.members.iter().map(|&x| self.image_of[x]).collect())
    }

    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        let mask = h.mask(self.target.order());
        Subgroup::from_members(
            (0..self.source.order())
                .filter(|&x| mask[self.image_of[x]])
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{build_group, GroupSpec};

    fn g(text: &str) -> FiniteGroup {
        build_group(&text.parse::<GroupSpec>().unwrap(), &Caps::default()).unwrap()
    }

    /// Subgroups by testing every subset whose size divides the order.
    fn subgroups_by_subsets(grp: &FiniteGroup) -> usize {
        let n = grp.order();
        assert!(n <= 12);
        (0u32..1 << n)
            .filter(|&mask| {
                let size = mask.count_ones() as usize;
                if mask & 1 == 0 || !n.is_multiple_of(size) {
                    return false;
                }
                let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                grp.is_subgroup(&Subgroup::from_members(members))
            })
            .count()
    }

    #[test]
    fn subgroup_counts_match_subset_oracle() {
        for (spec, expected) in [
            ("product:cyclic:2,cyclic:2", 5),
            ("symmetric:3", 6),
            ("cyclic:6", 4),
        ] {
            let grp = g(spec);
            assert_eq!(subgroups_by_subsets(&grp), expected, "{spec}");
            assert_eq!(grp.all_subgroups().unwrap().len(), expected, "{spec}");
        }
        assert_eq!(
            g("dihedral:4").all_subgroups().unwrap().len(),
            subgroups_by_subsets(&g("dihedral:4"))
        );
        assert_eq!(
            g("dihedral:6").all_subgroups().unwrap().len(),
            subgroups_by_subsets(&g("dihedral:6"))
        );
    }

    #[test]
    fn subgroup_generated_edges() {
        let s3 = g("perm:3:(0 1),(0 1 2)");
        assert_eq!(s3.order(), 6);
        let three_cycle = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        assert_eq!(s3.subgroup_generated(&[three_cycle]).order(), 3);
        assert!(s3.subgroup_generated(&[]).is_trivial());
        let klein = g("product:cyclic:2,cyclic:2");
        assert_eq!(klein.subgroup_generated(&[0, 1, 2, 3]), klein.whole());
    }

    #[test]
    fn normal_subgroups_and_simplicity() {
        let s3 = g("symmetric:3");
        let normals = s3.normal_subgroups().unwrap();
        assert_eq!(
            normals.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 3, 6]
        );
        assert!(!s3.is_simple().unwrap());
        let mins = s3.minimal_normal_subgroups().unwrap();
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 3);

        let q8 = g("q8");
        assert_eq!(q8.normal_subgroups().unwrap().len(), 6);
        assert_eq!(q8.all_subgroups().unwrap().len(), 6);

        assert!(g("cyclic:5").is_simple().unwrap());
        let klein = g("product:cyclic:2,cyclic:2");
        let mins = klein.minimal_normal_subgroups().unwrap();
        assert_eq!(mins.len(), 3);
        assert!(mins.iter().all(|m| m.order() == 2));

        assert_eq!(
            g("cyclic:1").minimal_normal_subgroups(),
            Err(Error::TrivialGroup)
        );
        assert_eq!(g("cyclic:1").is_simple(), Err(Error::TrivialGroup));
        let a5 = g("alternating:5");
        assert_eq!(a5.order(), 60);
        assert!(a5.is_simple().unwrap());
    }

    #[test]
    fn quotient_examples() {
        let s3 = g("symmetric:3");
        let a3 = s3.normal_subgroups().unwrap()[1].clone();
        let (q, p) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(p.is_homomorphism() && p.is_surjective());
        assert_eq!(p.kernel(), a3);

        let (q, _) = s3.quotient(&s3.whole()).unwrap();
        assert!(q.is_trivial());

        let z4 = g("cyclic:4");
        let (q, p) = z4.quotient(&Subgroup::from_members(vec![0, 2])).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(p.apply(1), 1);
        assert_eq!(p.apply(2), 0);

        let t = s3.subgroup_generated(&[1]);
        assert_eq!(t.order(), 2);
        assert_eq!(s3.quotient(&t).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn complements_and_kernels() {
        let s3 = g("symmetric:3");
        let subs = s3.all_subgroups().unwrap().to_vec();
        let a3 = subs.iter().find(|h| h.order() == 3).unwrap();
        let t = subs.iter().find(|h| h.order() == 2).unwrap();
        assert!(s3.product_is_group_complement(a3, t));
        assert!(!s3.product_is_group_complement(t, t));
        assert!(!s3.product_is_group_complement(&s3.trivial_subgroup(), a3));
        assert!(s3.coset_action_kernel(t).is_trivial());
        assert_eq!(&s3.coset_action_kernel(a3), a3);
        assert_eq!(s3.coset_action_kernel(&s3.whole()), s3.whole());

        let klein = g("product:cyclic:2,cyclic:2");
        let h = klein.subgroup_generated(&[1]);
        assert!(!klein.product_is_group_complement(&h, &h));
    }

    #[test]
    fn abelian_invariants_examples() {
        assert_eq!(g("cyclic:6").abelian_invariants().unwrap(), vec![6]);
        assert_eq!(
            g("product:cyclic:2,cyclic:4").abelian_invariants().unwrap(),
            vec![2, 4]
        );
        assert_eq!(
            g("product:cyclic:2,cyclic:2,cyclic:2")
                .abelian_invariants()
                .unwrap(),
            vec![2, 2, 2]
        );
        assert_eq!(g("symmetric:3").abelian_invariants().unwrap(), vec![2]);
        assert_eq!(g("q8").abelian_invariants().unwrap(), vec![2, 2]);
        assert!(g("alternating:5").abelian_invariants().unwrap().is_empty());
    }

    #[test]
    fn isomorphism_brute_force() {
        assert!(g("cyclic:6").is_isomorphic(&g("product:cyclic:2,cyclic:3")));
        assert!(!g("cyclic:4").is_isomorphic(&g("product:cyclic:2,cyclic:2")));
        assert!(g("symmetric:3").is_isomorphic(&g("dihedral:3")));
        assert!(!g("dihedral:4").is_isomorphic(&g("q8")));
    }

    #[test]
    fn large_perm_group_uses_perm_backing() {
        let s7 = g("perm:7:(0 1),(0 1 2 3 4 5 6)");
        assert_eq!(s7.order(), 5040);
        assert!(s7.check_axioms(7).is_ok());
        let x = 5;
        assert_eq!(s7.mul(x, s7.inv(x)), 0);
    }
}
