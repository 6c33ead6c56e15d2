//! Group construction descriptors and their text syntax.
//!
//! ```text
//! cyclic:6   dihedral:4   symmetric:4   alternating:4   q8
//! product:cyclic:2,cyclic:2        product:[product:cyclic:2,cyclic:2],cyclic:3
//! perm:3:(0 1),(0 1 2)             perm:4:(0 1)(2 3),(0 2)(1 3)
//! ```
//!
//! Whitespace around tokens is ignored; inside a cycle it separates points.
//! `dihedral:n` has order `2n`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    Product(Vec<GroupSpec>),
    /// Degree and generators, each generator a list of cycles.
    Perm {
        degree: usize,
        gens: Vec<Vec<Vec<usize>>>,
    },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alternating:{n}"),
            GroupSpec::Quaternion8 => write!(f, "q8"),
            GroupSpec::Product(parts) => {
                write!(f, "product:")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match p {
                        GroupSpec::Product(_) => write!(f, "[{p}]")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            GroupSpec::Perm { degree, gens } => {
                write!(f, "perm:{degree}:")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if g.is_empty() {
                        write!(f, "()")?;
                    }
                    for cycle in g {
                        let pts: Vec<String> = cycle.iter().map(usize::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a group constructor"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "expected a number"))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let start = self.pos;
        let name = self.word()?;
        match name.as_str() {
            "q8" => Ok(GroupSpec::Quaternion8),
            "cyclic" | "dihedral" | "symmetric" | "alternating" => {
                self.expect(b':')?;
                let at = self.pos;
                let n = self.number()?;
                match name.as_str() {
                    "cyclic" if n >= 1 => Ok(GroupSpec::Cyclic(n)),
                    "dihedral" if n >= 2 => Ok(GroupSpec::Dihedral(n)),
                    "symmetric" if (1..=6).contains(&n) => Ok(GroupSpec::Symmetric(n)),
                    "alternating" if (1..=6).contains(&n) => Ok(GroupSpec::Alternating(n)),
                    _ => Err(Error::parse(
                        at,
                        format!("parameter {n} out of range for {name}"),
                    )),
                }
            }
            "product" => {
                self.expect(b':')?;
                let mut parts = vec![self.product_item()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    parts.push(self.product_item()?);
                }
                Ok(GroupSpec::Product(parts))
            }
            "perm" => {
                self.expect(b':')?;
                let degree = self.number()?;
                if degree == 0 || degree > u16::MAX as usize {
                    return Err(Error::parse(self.pos, "degree out of range"));
                }
                self.expect(b':')?;
                let mut gens = vec![self.cycles(degree)?];
                loop {
                    let save = self.pos;
                    if self.peek() != Some(b',') {
                        break;
                    }
                    self.pos += 1;
                    if self.peek() == Some(b'(') {
                        gens.push(self.cycles(degree)?);
                    } else {
                        // next product factor
                        self.pos = save;
                        break;
                    }
                }
                Ok(GroupSpec::Perm { degree, gens })
            }
            _ => Err(Error::parse(
                start,
                format!("unknown group constructor `{name}`"),
            )),
        }
    }

    fn product_item(&mut self) -> Result<GroupSpec> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let s = self.spec()?;
            self.expect(b']')?;
            Ok(s)
        } else {
            self.spec()
        }
    }

    /// One generator: a juxtaposition of cycles, `()` for the identity.
    fn cycles(&mut self, degree: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut used = HashSet::new();
        if self.peek() != Some(b'(') {
            return Err(Error::parse(self.pos, "expected `(`"));
        }
        while self.peek() == Some(b'(') {
            self.pos += 1;
            let mut cycle = Vec::new();
            loop {
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let at = self.pos;
                        let x = self.number()?;
                        if x >= degree {
                            return Err(Error::parse(
                                at,
                                format!("point {x} not below degree {degree}"),
                            ));
                        }
                        if !used.insert(x) {
                            return Err(Error::parse(at, format!("point {x} repeated")));
                        }
                        cycle.push(x);
                    }
                    _ => return Err(Error::parse(self.pos, "malformed cycle")),
                }
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        Ok(out)
    }
}

fn cycles_to_perm(degree: usize, cycles: &[Vec<usize>]) -> Vec<u16> {
    let mut p: Vec<u16> = (0..degree as u16).collect();
    for c in cycles {
        for (i, &x) in c.iter().enumerate() {
            p[x] = c[(i + 1) % c.len()] as u16;
        }
    }
    p
}

fn closure(gens: &[Vec<u16>], degree: usize, cap: usize) -> Result<Vec<Vec<u16>>> {
    let id: Vec<u16> = (0..degree as u16).collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u16> = p.iter().map(|&x| g[x as usize]).collect();
            if !seen.contains(&q) {
                if seen.len() >= cap {
                    return Err(Error::OverCap {
                        what: "permutation group order",
                        limit: cap,
                    });
                }
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn all_perms(n: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur: Vec<u16> = (0..n as u16).collect();
    loop {
        out.push(cur.clone());
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn is_even(p: &[u16]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

/// Builds the described group with canonical element indexing.
///
/// Constructors index elements by mixed-radix coordinates (first product
/// factor most significant); permutation groups by image sequence.
pub fn build_group(spec: &GroupSpec, caps: &Caps) -> Result<FiniteGroup> {
    let label = spec.to_string();
    let cap = caps.subgroup_order;
    match spec {
        GroupSpec::Cyclic(n) => {
            let n = *n;
            if n > caps.group_order {
                return Err(Error::OverCap {
                    what: "group order",
                    limit: caps.group_order,
                });
            }
            let table = (0..n)
                .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
                .collect();
            FiniteGroup::from_table_with_cap(label, n, table, cap)
        }
        GroupSpec::Dihedral(n) => {
            // r^x s^y at index y*n + x
            let n = *n;
            let order = 2 * n;
            if order > caps.group_order {
                return Err(Error::OverCap {
                    what: "group order",
                    limit: caps.group_order,
                });
            }
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                let (x1, y1) = (a % n, a / n);
                for b in 0..order {
                    let (x2, y2) = (b % n, b / n);
                    let x = if y1 == 0 {
                        (x1 + x2) % n
                    } else {
                        (x1 + n - x2) % n
                    };
                    let y = (y1 + y2) % 2;
                    table.push((y * n + x) as u32);
                }
            }
            FiniteGroup::from_table_with_cap(label, order, table, cap)
        }
        GroupSpec::Quaternion8 => {
            // a^x b^y at index y*4 + x, with a^4 = 1, b^2 = a^2, b a b^-1 = a^-1
            let mut table = Vec::with_capacity(64);
            for a in 0..8 {
                let (x1, y1) = (a % 4, a / 4);
                for b in 0..8 {
                    let (x2, y2) = (b % 4, b / 4);
                    let mut x = if y1 == 0 { x1 + x2 } else { x1 + 4 - x2 };
                    let mut y = y1 + y2;
                    if y == 2 {
                        y = 0;
                        x += 2;
                    }
                    table.push((y * 4 + x % 4) as u32);
                }
            }
            FiniteGroup::from_table_with_cap(label, 8, table, cap)
        }
        GroupSpec::Symmetric(n) => FiniteGroup::from_perm_list(label, all_perms(*n), cap),
        GroupSpec::Alternating(n) => {
            let perms = all_perms(*n).into_iter().filter(|p| is_even(p)).collect();
            FiniteGroup::from_perm_list(label, perms, cap)
        }
        GroupSpec::Perm { degree, gens } => {
            let gens: Vec<Vec<u16>> = gens.iter().map(|g| cycles_to_perm(*degree, g)).collect();
            let perms = closure(&gens, *degree, caps.group_order)?;
            FiniteGroup::from_perm_list(label, perms, cap)
        }
        GroupSpec::Product(parts) => {
            let factors = parts
                .iter()
                .map(|p| build_group(p, caps))
                .collect::<Result<Vec<_>>>()?;
            let order = factors.iter().try_fold(1usize, |acc, f| {
                acc.checked_mul(f.order())
                    .filter(|&o| o <= caps.group_order)
            });
            let order = order.ok_or(Error::OverCap {
                what: "group order",
                limit: caps.group_order,
            })?;
            let coords = |mut idx: usize| -> Vec<usize> {
                let mut c = vec![0; factors.len()];
                for (k, f) in factors.iter().enumerate().rev() {
                    c[k] = idx % f.order();
                    idx /= f.order();
                }
                c
            };
            let all: Vec<Vec<usize>> = (0..order).map(coords).collect();
            let mut table = Vec::with_capacity(order * order);
            for a in &all {
                for b in &all {
                    let mut idx = 0;
                    for (k, f) in factors.iter().enumerate() {
                        idx = idx * f.order() + f.mul(a[k], b[k]);
                    }
                    table.push(idx as u32);
                }
            }
            FiniteGroup::from_table_with_cap(label, order, table, cap)
        }
    }
}

/// Parses and builds in one step with default caps.
pub fn group(text: &str) -> Result<FiniteGroup> {
    build_group(&text.parse()?, &Caps::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S3 multiplication by composing the six permutations directly.
    fn s3_oracle() -> Vec<Vec<u16>> {
        let mut perms = Vec::new();
        for a in 0..3u16 {
            for b in 0..3u16 {
                for c in 0..3u16 {
                    if a != b && b != c && a != c {
                        perms.push(vec![a, b, c]);
                    }
                }
            }
        }
        perms
    }

    #[test]
    fn perm_closure_matches_s3_cayley_table() {
        let g = group("perm:3:(0 1),(0 1 2)").unwrap();
        assert_eq!(g.order(), 6);
        let perms = s3_oracle();
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let ab: Vec<u16> = a.iter().map(|&x| b[x as usize]).collect();
                let k = perms.iter().position(|p| *p == ab).unwrap();
                assert_eq!(g.mul(i, j), k);
            }
        }
        assert_eq!(g.table(), group("symmetric:3").unwrap().table());
    }

    #[test]
    fn constructors_have_expected_orders() {
        for (text, order, exponent) in [
            ("cyclic:1", 1, 1),
            ("cyclic:6", 6, 6),
            ("dihedral:4", 8, 4),
            ("dihedral:6", 12, 6),
            ("q8", 8, 4),
            ("symmetric:4", 24, 12),
            ("alternating:4", 12, 6),
            ("product:cyclic:2,cyclic:2", 4, 2),
            ("product:cyclic:2,cyclic:2,cyclic:2", 8, 2),
            ("product:[product:cyclic:2,cyclic:2],cyclic:3", 12, 6),
            ("product:perm:3:(0 1),(0 1 2),cyclic:2", 12, 6),
        ] {
            let g = group(text).unwrap();
            assert_eq!(g.order(), order, "{text}");
            assert_eq!(g.exponent(), exponent, "{text}");
            assert!(g.check_axioms(0).is_ok(), "{text}");
        }
        assert!(!group("q8").unwrap().is_abelian());
    }

    #[test]
    fn indexing_is_canonical() {
        for text in [
            "dihedral:5",
            "perm:4:(0 1 2 3),(0 2)",
            "product:q8,cyclic:3",
        ] {
            assert_eq!(group(text).unwrap().table(), group(text).unwrap().table());
        }
    }

    #[test]
    fn parse_round_trip_and_whitespace() {
        let spec: GroupSpec = " perm : 4 : (0 1)(2 3) , (0 2 )".parse().unwrap();
        assert_eq!(spec.to_string(), "perm:4:(0 1)(2 3),(0 2)");
        let again: GroupSpec = spec.to_string().parse().unwrap();
        assert_eq!(again, spec);
        let p: GroupSpec = "product:[product:cyclic:2,q8],cyclic:3".parse().unwrap();
        assert_eq!(p.to_string().parse::<GroupSpec>().unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "perm:3:(0 3)".parse::<GroupSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "perm:3:(0 1".parse::<GroupSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "perm:3:(0 1 0)".parse::<GroupSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "cyclic:0".parse::<GroupSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "symmetric:9".parse::<GroupSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "klein".parse::<GroupSpec>(),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            "cyclic:2 x".parse::<GroupSpec>(),
            Err(Error::Parse { pos: 9, .. })
        ));
    }

    #[test]
    fn closure_respects_cap() {
        let caps = Caps {
            group_order: 100,
            ..Caps::default()
        };
        let spec: GroupSpec = "perm:5:(0 1),(0 1 2 3 4)".parse().unwrap();
        assert!(matches!(
            build_group(&spec, &caps),
            Err(Error::OverCap { .. })
        ));
        assert!(matches!(
            build_group(&GroupSpec::Cyclic(101), &caps),
            Err(Error::OverCap { .. })
        ));
    }
}
