//! Finite groups on dense element indices, and generator sets.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest order accepted for table-backed groups.
pub const TABLE_ORDER_GUARD: usize = 4096;
/// Associativity is checked on every triple up to this order.
pub const FULL_ASSOC_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 100_000;
const ASSOC_SEED: u64 = 0x5eed_a550c;

#[derive(Clone)]
enum Law {
    /// Z/r₀ × Z/r₁ × ..., mixed radix with the first factor most significant.
    Cyclic { radices: Vec<usize> },
    Table { table: Vec<u32>, inverse: Vec<u32> },
}

/// A finite group with elements `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    law: Law,
    description: String,
}

impl FiniteGroup {
    /// Z/r₀ × Z/r₁ × ...; element `(x₀, x₁, ...)` has index `((x₀·r₁)+x₁)·r₂ + ...`.
    pub fn cyclic_product(radices: &[usize]) -> Result<Self> {
        if radices.is_empty() || radices.contains(&0) {
            return Err(Error::Group("cyclic factors must be a nonempty list of positive orders".into()));
        }
        let order = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::Group("order overflows".into()))?;
        let description = radices
            .iter()
            .map(|r| format!("Z/{r}"))
            .collect::<Vec<_>>()
            .join(" x ");
        Ok(FiniteGroup {
            order,
            identity: 0,
            law: Law::Cyclic {
                radices: radices.to_vec(),
            },
            description,
        })
    }

    /// Group given by a full multiplication table, `table[g][h] = g·h`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::Group("empty multiplication table".into()));
        }
        if order > TABLE_ORDER_GUARD {
            return Err(Error::capacity("group-table-order", TABLE_ORDER_GUARD, order));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Group(format!("row {g} has {} entries, expected {order}", row.len())));
            }
            let mut seen = vec![false; order];
            for (h, &x) in row.iter().enumerate() {
                if x >= order {
                    return Err(Error::Group(format!("entry {g}*{h} = {x} is out of range")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Group(format!("row {g} repeats element {x}; not a Latin square")));
                }
                flat.push(x as u32);
            }
        }
        for h in 0..order {
            let mut seen = vec![false; order];
            for (g, row) in table.iter().enumerate() {
                if std::mem::replace(&mut seen[row[h]], true) {
                    return Err(Error::Group(format!(
                        "column {h} repeats element {} (at row {g}); not a Latin square",
                        row[h]
                    )));
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Group("no two-sided identity".into()))?;
        let mut inverse = vec![0u32; order];
        for g in 0..order {
            let h = (0..order)
                .find(|&h| table[g][h] == identity)
                .ok_or_else(|| Error::Group(format!("element {g} has no right inverse")))?;
            if table[h][g] != identity {
                return Err(Error::Group(format!("element {g}: right inverse {h} is not a left inverse")));
            }
            inverse[g] = h as u32;
        }
        let group = FiniteGroup {
            order,
            identity,
            law: Law::Table { table: flat, inverse },
            description: format!("table group of order {order}"),
        };
        group.check_associativity()?;
        Ok(group)
    }

    /// Group generated by permutations of `0..degree`, written in one-line
    /// image notation. The product `p·q` applies `q` first, then `p`.
    /// Element 0 is the identity; the rest are numbered in breadth-first
    /// order from the generators.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (i, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree
                || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
            {
                return Err(Error::Group(format!("generator {i} is not a permutation of 0..{degree}")));
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for gen in generators {
                let next = compose(gen, &elements[i]);
                if !index.contains_key(&next) {
                    if elements.len() == TABLE_ORDER_GUARD {
                        return Err(Error::capacity("group-table-order", TABLE_ORDER_GUARD, TABLE_ORDER_GUARD + 1));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let order = elements.len();
        let mut table = vec![0u32; order * order];
        let mut inverse = vec![0u32; order];
        for (g, p) in elements.iter().enumerate() {
            for (h, q) in elements.iter().enumerate() {
                let gh = index[&compose(p, q)];
                table[g * order + h] = gh as u32;
                if gh == 0 {
                    inverse[g] = h as u32;
                }
            }
        }
        Ok(FiniteGroup {
            order,
            identity: 0,
            law: Law::Table { table, inverse },
            description: format!("permutation group of degree {degree}, order {order}"),
        })
    }

    /// Symmetries of the regular n-gon. Element 1 is the rotation r and
    /// element 2 the reflection s when n ≥ 3.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Group("dihedral groups need n >= 3".into()));
        }
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        let mut g = Self::from_permutations(n, &[r, s])?;
        g.description = format!("dihedral group of order {}", 2 * n);
        Ok(g)
    }

    /// The group with reversed multiplication, `g ∘ h = h·g`.
    pub fn opposite(&self) -> Result<Self> {
        if self.order > TABLE_ORDER_GUARD {
            return Err(Error::capacity("group-table-order", TABLE_ORDER_GUARD, self.order));
        }
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for g in 0..n {
            for h in 0..n {
                table[g * n + h] = self.mul(h, g) as u32;
            }
        }
        Ok(FiniteGroup {
            order: n,
            identity: self.identity,
            law: Law::Table {
                table,
                inverse: (0..n).map(|g| self.inv(g) as u32).collect(),
            },
            description: format!("opposite of {}", self.description),
        })
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Group(format!("associativity fails for ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= FULL_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        match &self.law {
            Law::Cyclic { radices } => {
                let (mut x, mut y, mut out, mut scale) = (g, h, 0, 1);
                for &r in radices.iter().rev() {
                    out += ((x % r + y % r) % r) * scale;
                    x /= r;
                    y /= r;
                    scale *= r;
                }
                out
            }
            Law::Table { table, .. } => table[g * self.order + h] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        match &self.law {
            Law::Cyclic { radices } => {
                let (mut x, mut out, mut scale) = (g, 0, 1);
                for &r in radices.iter().rev() {
                    out += ((r - x % r) % r) * scale;
                    x /= r;
                    scale *= r;
                }
                out
            }
            Law::Table { inverse, .. } => inverse[g] as usize,
        }
    }

    /// Index of a tuple in a cyclic product.
    pub fn element_from_coords(&self, coords: &[usize]) -> Result<usize> {
        let Law::Cyclic { radices } = &self.law else {
            return Err(Error::Group("coordinates only apply to cyclic products".into()));
        };
        if coords.len() != radices.len() || coords.iter().zip(radices).any(|(c, r)| c >= r) {
            return Err(Error::Group(format!("coordinates {coords:?} do not fit factors {radices:?}")));
        }
        Ok(coords.iter().zip(radices).fold(0, |acc, (c, r)| acc * r + c))
    }

    /// Human-readable name: a tuple for cyclic products, the index otherwise.
    pub fn label(&self, g: usize) -> String {
        match &self.law {
            Law::Cyclic { radices } => {
                let mut coords = vec![0; radices.len()];
                let mut x = g;
                for (i, &r) in radices.iter().enumerate().rev() {
                    coords[i] = x % r;
                    x /= r;
                }
                let parts: Vec<String> = coords.iter().map(usize::to_string).collect();
                format!("({})", parts.join(","))
            }
            Law::Table { .. } => g.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Parses a group file: `cyclic r₀ r₁ ...`, `table <order>` followed by
    /// the table rows, or `perm <degree>` followed by generator permutations.
    /// Permutations may use 0-based or 1-based images; a file that never
    /// mentions 0 is read as 1-based.
    pub fn parse_text(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let Some(&(hline, header)) = lines.first() else {
            return Err(Error::parse(1, "empty group file"));
        };
        let mut words = header.split_whitespace();
        let kind = words.next().unwrap_or("").to_ascii_lowercase();
        let nums: Vec<usize> = words
            .map(|w| w.parse::<usize>().map_err(|e| Error::parse(hline, format!("bad number {w:?}: {e}"))))
            .collect::<Result<_>>()?;
        let body = &lines[1..];
        let parse_row = |(line, l): &(usize, &str)| -> Result<Vec<usize>> {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .map(|w| w.parse::<usize>().map_err(|e| Error::parse(*line, format!("bad number {w:?}: {e}"))))
                .collect()
        };
        let at_line = |line: usize, e: Error| match e {
            Error::Group(m) => Error::parse(line, m),
            other => other,
        };
        match kind.as_str() {
            "cyclic" => {
                if !body.is_empty() {
                    return Err(Error::parse(body[0].0, "unexpected content after `cyclic` header"));
                }
                Self::cyclic_product(&nums).map_err(|e| at_line(hline, e))
            }
            "table" => {
                let [order] = nums[..] else {
                    return Err(Error::parse(hline, "expected `table <order>`"));
                };
                if body.len() != order {
                    return Err(Error::parse(hline, format!("expected {order} table rows, found {}", body.len())));
                }
                let rows: Vec<Vec<usize>> = body.iter().map(parse_row).collect::<Result<_>>()?;
                Self::from_table(&rows).map_err(|e| at_line(hline, e))
            }
            "perm" => {
                let [degree] = nums[..] else {
                    return Err(Error::parse(hline, "expected `perm <degree>`"));
                };
                let mut perms: Vec<Vec<usize>> = body.iter().map(parse_row).collect::<Result<_>>()?;
                let one_based = perms.iter().flatten().all(|&x| x != 0);
                if one_based {
                    for p in &mut perms {
                        for x in p.iter_mut() {
                            *x -= 1;
                        }
                    }
                }
                for (p, (line, _)) in perms.iter().zip(body) {
                    let mut seen = vec![false; degree];
                    if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                        return Err(Error::parse(*line, format!("not a permutation of degree {degree}")));
                    }
                }
                Self::from_permutations(degree, &perms).map_err(|e| at_line(hline, e))
            }
            other => Err(Error::parse(
                hline,
                format!("unknown group kind `{other}`; expected cyclic, table or perm"),
            )),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.description)
    }
}

/// Which side a generator set multiplies from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// An ordered list of distinct group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    elements: Vec<usize>,
    side: Side,
}

impl GeneratorSet {
    pub fn new(group: &FiniteGroup, elements: Vec<usize>, side: Side) -> Result<Self> {
        let mut seen = vec![false; group.order()];
        for &e in &elements {
            if e >= group.order() {
                return Err(Error::Group(format!("element {e} is outside a group of order {}", group.order())));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::Group(format!("element {e} is listed twice")));
            }
        }
        Ok(GeneratorSet { elements, side })
    }

    /// Element indices separated by whitespace or commas; `#` starts a comment.
    pub fn parse_text(group: &FiniteGroup, text: &str, side: Side) -> Result<Self> {
        let mut elements = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            for w in content.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()) {
                let e = w
                    .parse::<usize>()
                    .map_err(|err| Error::parse(i + 1, format!("bad element {w:?}: {err}")))?;
                if e >= group.order() {
                    return Err(Error::parse(i + 1, format!("element {e} is outside a group of order {}", group.order())));
                }
                if elements.contains(&e) {
                    return Err(Error::parse(i + 1, format!("element {e} is listed twice")));
                }
                elements.push(e);
            }
        }
        Self::new(group, elements, side)
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.iter().position(|&e| e == g)
    }

    /// Positions of the inverses, when the set is inverse-closed.
    pub fn inverse_positions(&self, group: &FiniteGroup) -> Option<Vec<usize>> {
        self.elements.iter().map(|&e| self.position(group.inv(e))).collect()
    }
}

/// True when the set is closed under inverses and avoids the identity.
pub fn check_symmetric_set(group: &FiniteGroup, set: &GeneratorSet) -> bool {
    !set.elements.contains(&group.identity()) && set.inverse_positions(group).is_some()
}

/// Outcome of the total no-conjugacy scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tnc", rename_all = "lowercase")]
pub enum TncVerdict {
    Holds,
    /// First triple (in order g, then a, then b) with a·g = g·b.
    Violated { a: usize, g: usize, b: usize },
}

impl TncVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, TncVerdict::Holds)
    }
}

/// Checks a·g ≠ g·b for all a ∈ A, b ∈ B, g ∈ G.
pub fn check_tnc(group: &FiniteGroup, a_set: &GeneratorSet, b_set: &GeneratorSet) -> Result<TncVerdict> {
    if a_set.side() != Side::Left || b_set.side() != Side::Right {
        return Err(Error::Contract("TNC expects A on the left and B on the right".into()));
    }
    for g in 0..group.order() {
        for &a in a_set.elements() {
            let ag = group.mul(a, g);
            // a·g = g·b  ⟺  b = g⁻¹·a·g
            let conj = group.mul(group.inv(g), ag);
            if b_set.elements().contains(&conj) {
                return Ok(TncVerdict::Violated { a, g, b: conj });
            }
        }
    }
    Ok(TncVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z8z2() -> FiniteGroup {
        FiniteGroup::cyclic_product(&[8, 2]).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(FiniteGroup::cyclic_product(&[2]).unwrap().order(), 2);
        let g = z8z2();
        assert_eq!(g.order(), 16);
        let x = g.element_from_coords(&[1, 0]).unwrap();
        assert_eq!(g.inv(x), g.element_from_coords(&[7, 0]).unwrap());
        assert_eq!(g.label(g.inv(x)), "(7,0)");
        assert_eq!(g.mul(g.element_from_coords(&[5, 1]).unwrap(), g.element_from_coords(&[6, 1]).unwrap()),
                   g.element_from_coords(&[3, 0]).unwrap());
        assert!(g.is_abelian());
    }

    #[test]
    fn symmetric_group_on_four_points() {
        let s4 = FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(!s4.is_abelian());
        let text = "perm 4\n2 1 3 4\n2 3 4 1\n";
        assert_eq!(FiniteGroup::parse_text(text).unwrap().order(), 24);
    }

    #[test]
    fn table_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_table(&z3).unwrap();
        assert_eq!(g.inv(1), 2);
        let not_latin = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(matches!(FiniteGroup::from_table(&not_latin), Err(Error::Group(_))));
        // A Latin square with identity and inverses that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&loop5).unwrap_err();
        assert!(err.to_string().contains("associativity fails for ("), "{err}");
    }

    #[test]
    fn group_file_errors_carry_lines() {
        assert!(matches!(FiniteGroup::parse_text("cyclic 8 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(FiniteGroup::parse_text("# c\nsphere 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(FiniteGroup::parse_text("perm 3\n1 2 3\n1 1 2\n"), Err(Error::Parse { line: 3, .. })));
        assert_eq!(FiniteGroup::parse_text("table 2\n0 1\n1 0\n").unwrap().order(), 2);
    }

    #[test]
    fn symmetric_sets_in_z8z2() {
        let g = z8z2();
        let a: Vec<usize> = (1..8).map(|x| g.element_from_coords(&[x, 0]).unwrap()).collect();
        let a = GeneratorSet::new(&g, a, Side::Left).unwrap();
        assert!(check_symmetric_set(&g, &a));
        let b_sym: Vec<usize> = (0..8).filter(|&x| x != 4).map(|x| g.element_from_coords(&[x, 1]).unwrap()).collect();
        assert!(check_symmetric_set(&g, &GeneratorSet::new(&g, b_sym, Side::Right).unwrap()));
        // Excluding b = 1 leaves (1,1)⁻¹ = (7,1) without its inverse.
        let b_asym: Vec<usize> = (0..8).filter(|&x| x != 1).map(|x| g.element_from_coords(&[x, 1]).unwrap()).collect();
        assert!(!check_symmetric_set(&g, &GeneratorSet::new(&g, b_asym, Side::Right).unwrap()));
        let single = GeneratorSet::new(&g, vec![g.element_from_coords(&[1, 0]).unwrap()], Side::Left).unwrap();
        assert!(!check_symmetric_set(&g, &single));
        assert!(GeneratorSet::new(&g, vec![3, 3], Side::Left).is_err());
    }

    #[test]
    fn tnc_examples() {
        let g = z8z2();
        let a = GeneratorSet::new(&g, (1..8).map(|x| x * 2).collect(), Side::Left).unwrap();
        let b = GeneratorSet::new(&g, vec![1, 3, 5, 7, 11, 13, 15], Side::Right).unwrap();
        assert_eq!(check_tnc(&g, &a, &b).unwrap(), TncVerdict::Holds);
        let b_overlap = GeneratorSet::new(&g, vec![4, 12], Side::Right).unwrap();
        assert_eq!(
            check_tnc(&g, &a, &b_overlap).unwrap(),
            TncVerdict::Violated { a: 4, g: 0, b: 4 }
        );
        assert!(check_tnc(&g, &b, &a).is_err());
    }

    #[test]
    fn dihedral_tnc_by_exhaustive_scan() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        let (r, s) = (1, 2);
        let r2 = d4.mul(r, r);
        let r3 = d4.mul(r2, r);
        let r2s = d4.mul(r2, s);
        let a = GeneratorSet::new(&d4, vec![r, r3], Side::Left).unwrap();
        let b = GeneratorSet::new(&d4, vec![s, r2s], Side::Right).unwrap();
        assert!(check_symmetric_set(&d4, &a) && check_symmetric_set(&d4, &b));
        let mut violations = 0;
        for g in 0..8 {
            for &x in a.elements() {
                for &y in b.elements() {
                    violations += usize::from(d4.mul(x, g) == d4.mul(g, y));
                }
            }
        }
        assert_eq!(violations, 0);
        assert_eq!(check_tnc(&d4, &a, &b).unwrap(), TncVerdict::Holds);
    }

    proptest! {
        #[test]
        fn inverse_of_product(n in 3usize..9, g in any::<prop::sample::Index>(), h in any::<prop::sample::Index>()) {
            let d = FiniteGroup::dihedral(n).unwrap();
            let (g, h) = (g.index(d.order()), h.index(d.order()));
            prop_assert_eq!(d.inv(d.mul(g, h)), d.mul(d.inv(h), d.inv(g)));
            let c = FiniteGroup::cyclic_product(&[n, 3, 2]).unwrap();
            let (g, h) = (g % c.order(), h % c.order());
            prop_assert_eq!(c.inv(c.mul(g, h)), c.mul(c.inv(h), c.inv(g)));
        }

        #[test]
        fn tnc_agrees_on_the_opposite_group(n in 3usize..7, a_mask in any::<u16>(), b_mask in any::<u16>()) {
            let d = FiniteGroup::dihedral(n).unwrap();
            let op = d.opposite().unwrap();
            let pick = |mask: u16| (1..d.order()).filter(|i| (mask >> (i % 16)) & 1 == 1).collect::<Vec<_>>();
            let a = pick(a_mask);
            let b = pick(b_mask);
            let (ga, gb) = (GeneratorSet::new(&d, a.clone(), Side::Left).unwrap(), GeneratorSet::new(&d, b.clone(), Side::Right).unwrap());
            let (oa, ob) = (GeneratorSet::new(&op, a, Side::Left).unwrap(), GeneratorSet::new(&op, b, Side::Right).unwrap());
            prop_assert_eq!(check_tnc(&d, &ga, &gb).unwrap().holds(), check_tnc(&op, &oa, &ob).unwrap().holds());
        }
    }
}
