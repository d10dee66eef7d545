//! Exact arithmetic for the supported group families, presentations and
//! Cayley graphs, and right-coset tilings of the dihedral groups.
//!
//! Elements are kept in a unique integer normal form, so equality and hashing
//! are exact. Floating point only enters through transition amplitudes.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A supported family of finitely generated groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupFamily {
    /// `Z^d`.
    FreeAbelian(usize),
    /// `Z_{i_1} x ... x Z_{i_n} x Z^d`.
    FiniteAbelianTimesFree { orders: Vec<u64>, rank: usize },
    /// `Z x| Z_2` with the inversion automorphism.
    InfiniteDihedral,
    /// `Z_n x| Z_2`.
    FiniteDihedral(u64),
}

impl GroupFamily {
    pub fn free_abelian(d: usize) -> Self {
        GroupFamily::FreeAbelian(d)
    }

    pub fn finite_abelian_times_free(orders: Vec<u64>, rank: usize) -> Result<Self> {
        let fam = GroupFamily::FiniteAbelianTimesFree { orders, rank };
        fam.validate()?;
        Ok(fam)
    }

    pub fn finite_dihedral(n: u64) -> Result<Self> {
        let fam = GroupFamily::FiniteDihedral(n);
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupFamily::FiniteAbelianTimesFree { orders, .. } => {
                if let Some(o) = orders.iter().find(|&&o| o < 2) {
                    return Err(Error::InvalidFamily(format!(
                        "cyclic factor of order {o} (need >= 2)"
                    )));
                }
                Ok(())
            }
            GroupFamily::FiniteDihedral(n) if *n < 4 => Err(Error::InvalidFamily(format!(
                "dihedral group of order 2*{n} (need n >= 4)"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(
            self,
            GroupFamily::FreeAbelian(_) | GroupFamily::FiniteAbelianTimesFree { .. }
        )
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(
            self,
            GroupFamily::InfiniteDihedral | GroupFamily::FiniteDihedral(_)
        )
    }

    /// Orders of the finite cyclic factors of an Abelian family.
    pub fn cyclic_orders(&self) -> &[u64] {
        match self {
            GroupFamily::FiniteAbelianTimesFree { orders, .. } => orders,
            _ => &[],
        }
    }

    /// Rank `d` of the free part of an Abelian family.
    pub fn free_rank(&self) -> Option<usize> {
        match self {
            GroupFamily::FreeAbelian(d) => Some(*d),
            GroupFamily::FiniteAbelianTimesFree { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    /// Number of integer coordinates in the normal form.
    pub fn coord_len(&self) -> usize {
        match self {
            GroupFamily::FreeAbelian(d) => *d,
            GroupFamily::FiniteAbelianTimesFree { orders, rank } => orders.len() + rank,
            GroupFamily::InfiniteDihedral | GroupFamily::FiniteDihedral(_) => 2,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupFamily::FreeAbelian(d) => *d == 0,
            GroupFamily::FiniteAbelianTimesFree { rank, .. } => *rank == 0,
            GroupFamily::InfiniteDihedral => false,
            GroupFamily::FiniteDihedral(_) => true,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            family: self.clone(),
            coords: vec![0; self.coord_len()],
        }
    }

    /// Element from raw coordinates, reduced to normal form.
    ///
    /// Abelian families take the residues of the finite factors followed by
    /// the free coordinates; dihedral families take `(n, eps)` for `a^n r^eps`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.coord_len() {
            return Err(Error::InvalidElement {
                family: self.to_string(),
                detail: format!("expected {} coordinates, got {}", self.coord_len(), coords.len()),
            });
        }
        if self.is_dihedral() && !(coords[1] == 0 || coords[1] == 1) {
            return Err(Error::InvalidElement {
                family: self.to_string(),
                detail: format!("reflection bit must be 0 or 1, got {}", coords[1]),
            });
        }
        let mut g = GroupElement {
            family: self.clone(),
            coords: coords.to_vec(),
        };
        g.normalize();
        Ok(g)
    }

    /// `a^n r^eps` in a dihedral family.
    pub fn dihedral(&self, n: i64, reflection: bool) -> Result<GroupElement> {
        if !self.is_dihedral() {
            return Err(Error::FamilyMismatch(self.to_string(), "dihedral".into()));
        }
        self.element(&[n, reflection as i64])
    }

    /// Resolves a letter of the family's canonical alphabet.
    ///
    /// Dihedral: `a`, `r`. Abelian: `g1..gn` for the cyclic factors and
    /// `t1..td` for the free basis (`t` alone when `d = 1`). `e` is the identity.
    pub fn letter(&self, name: &str) -> Option<GroupElement> {
        if name == "e" {
            return Some(self.identity());
        }
        match self {
            GroupFamily::InfiniteDihedral | GroupFamily::FiniteDihedral(_) => match name {
                "a" => self.dihedral(1, false).ok(),
                "r" => self.dihedral(0, true).ok(),
                _ => None,
            },
            _ => {
                let n = self.cyclic_orders().len();
                let d = self.free_rank().unwrap_or(0);
                let unit = |pos: usize| {
                    let mut v = vec![0; n + d];
                    v[pos] = 1;
                    self.element(&v).ok()
                };
                if name == "t" && d == 1 {
                    return unit(n);
                }
                let (prefix, idx) = name.split_at(1.min(name.len()));
                let idx: usize = idx.parse().ok()?;
                match prefix {
                    "g" if (1..=n).contains(&idx) => unit(idx - 1),
                    "t" if (1..=d).contains(&idx) => unit(n + idx - 1),
                    _ => None,
                }
            }
        }
    }

    /// Evaluates a word over the canonical alphabet.
    pub fn evaluate_word(&self, word: &Word) -> Result<GroupElement> {
        word.evaluate(|name| {
            self.letter(name)
                .ok_or_else(|| Error::Parse(format!("`{name}` is not a letter of {self}")))
        })
    }

    /// All elements of a finite family, in normal form.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if !self.is_finite() {
            return None;
        }
        match self {
            GroupFamily::FiniteDihedral(n) => Some(
                (0..*n as i64)
                    .flat_map(|k| [false, true].map(|r| self.dihedral(k, r).unwrap()))
                    .collect(),
            ),
            _ => {
                let orders = self.cyclic_orders();
                let mut out = vec![self.identity()];
                for (pos, &o) in orders.iter().enumerate() {
                    out = out
                        .into_iter()
                        .flat_map(|g| {
                            (0..o as i64).map(move |m| {
                                let mut c = g.coords.clone();
                                c[pos] = m;
                                GroupElement { family: g.family.clone(), coords: c }
                            })
                        })
                        .collect();
                }
                Some(out)
            }
        }
    }

    /// Whether `elements` generate the whole group.
    pub fn generated_by(&self, elements: &[GroupElement]) -> bool {
        match self {
            GroupFamily::InfiniteDihedral | GroupFamily::FiniteDihedral(_) => {
                let mut g = match self {
                    GroupFamily::FiniteDihedral(n) => *n as i64,
                    _ => 0,
                };
                let reflections: Vec<i64> = elements
                    .iter()
                    .filter(|e| e.coords[1] == 1)
                    .map(|e| e.coords[0])
                    .collect();
                if reflections.is_empty() {
                    return false;
                }
                for e in elements.iter().filter(|e| e.coords[1] == 0) {
                    g = gcd(g, e.coords[0]);
                }
                for r in &reflections[1..] {
                    g = gcd(g, r - reflections[0]);
                }
                g == 1
            }
            _ => {
                let n = self.cyclic_orders().len();
                let m = self.coord_len();
                let mut rows: Vec<Vec<i128>> = elements
                    .iter()
                    .map(|e| e.coords.iter().map(|&x| x as i128).collect())
                    .collect();
                for (l, &o) in self.cyclic_orders().iter().enumerate() {
                    let mut row = vec![0i128; m];
                    row[l] = o as i128;
                    rows.push(row);
                }
                debug_assert!(n <= m);
                lattice_is_full(rows, m)
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether the integer row vectors span all of `Z^m`, via Hermite-style
/// row reduction.
#[allow(clippy::needless_range_loop, clippy::explicit_counter_loop)]
fn lattice_is_full(mut rows: Vec<Vec<i128>>, m: usize) -> bool {
    let mut pivot_row = 0;
    for col in 0..m {
        loop {
            // smallest nonzero |entry| in this column at or below pivot_row
            let best = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = best else {
                return false;
            };
            rows.swap(pivot_row, best);
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                let q = rows[r][col] / p;
                if q != 0 {
                    for c in col..m {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].abs() != 1 {
            return false;
        }
        pivot_row += 1;
    }
    true
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::FreeAbelian(d) => write!(f, "free_abelian({d})"),
            GroupFamily::FiniteAbelianTimesFree { orders, rank } => {
                let o: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                write!(f, "abelian({};{rank})", o.join(","))
            }
            GroupFamily::InfiniteDihedral => write!(f, "dihedral_inf"),
            GroupFamily::FiniteDihedral(n) => write!(f, "dihedral({n})"),
        }
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown group family `{s}`"));
        if s == "dihedral_inf" {
            return Ok(GroupFamily::InfiniteDihedral);
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let int = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let fam = match name.trim() {
            "free_abelian" => GroupFamily::FreeAbelian(int(args)? as usize),
            "dihedral" => GroupFamily::FiniteDihedral(int(args)?),
            "abelian" => {
                let (orders, rank) = args.split_once(';').ok_or_else(bad)?;
                let orders = orders
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(int)
                    .collect::<Result<Vec<_>>>()?;
                GroupFamily::FiniteAbelianTimesFree {
                    orders,
                    rank: int(rank)? as usize,
                }
            }
            _ => return Err(bad()),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// An element of a supported group in normal form.
///
/// Abelian: residues of the finite factors (in `0..i_l`) followed by the free
/// coordinates. Dihedral: `(n, eps)` standing for `a^n r^eps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    family: GroupFamily,
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `(n, reflection)` for `a^n r^eps`; `None` outside dihedral families.
    pub fn dihedral_parts(&self) -> Option<(i64, bool)> {
        self.family
            .is_dihedral()
            .then(|| (self.coords[0], self.coords[1] == 1))
    }

    /// Free part of an Abelian element.
    pub fn free_part(&self) -> Option<&[i64]> {
        let n = self.family.cyclic_orders().len();
        self.family.is_abelian().then(|| &self.coords[n..])
    }

    /// Residues of the finite factors of an Abelian element.
    pub fn finite_part(&self) -> Option<&[i64]> {
        let n = self.family.cyclic_orders().len();
        self.family.is_abelian().then(|| &self.coords[..n])
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn normalize(&mut self) {
        match &self.family {
            GroupFamily::FiniteAbelianTimesFree { orders, .. } => {
                for (c, &o) in self.coords.iter_mut().zip(orders) {
                    *c = c.rem_euclid(o as i64);
                }
            }
            GroupFamily::FiniteDihedral(n) => {
                self.coords[0] = self.coords[0].rem_euclid(*n as i64);
            }
            _ => {}
        }
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch(
                self.family.to_string(),
                other.family.to_string(),
            ));
        }
        Ok(self.mul(other))
    }

    /// Product for elements already known to share a family.
    pub(crate) fn mul(&self, other: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.family, other.family);
        let coords = if self.family.is_dihedral() {
            let (n, eps) = (self.coords[0], self.coords[1]);
            let (m, delta) = (other.coords[0], other.coords[1]);
            let shift = if eps == 1 { n - m } else { n + m };
            vec![shift, eps ^ delta]
        } else {
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect()
        };
        let mut g = GroupElement {
            family: self.family.clone(),
            coords,
        };
        g.normalize();
        g
    }

    pub fn inverse(&self) -> GroupElement {
        let coords = if self.family.is_dihedral() {
            if self.coords[1] == 1 {
                self.coords.clone()
            } else {
                vec![-self.coords[0], 0]
            }
        } else {
            self.coords.iter().map(|c| -c).collect()
        };
        let mut g = GroupElement {
            family: self.family.clone(),
            coords,
        };
        g.normalize();
        g
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.family.identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A word `x_1^{k_1} x_2^{k_2} ...` over some alphabet of labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<(String, i64)>);

impl Word {
    pub fn evaluate<F>(&self, mut lookup: F) -> Result<GroupElement>
    where
        F: FnMut(&str) -> Result<GroupElement>,
    {
        let mut acc: Option<GroupElement> = None;
        for (name, k) in &self.0 {
            let g = lookup(name)?.pow(*k);
            acc = Some(match acc {
                None => g,
                Some(a) => a.compose(&g)?,
            });
        }
        acc.ok_or_else(|| Error::Parse("cannot evaluate the empty word without a family".into()))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Tokens separated by whitespace or `*`, each `name` or `name^k`
    /// (`name^{k}` also accepted). `e` and `1` denote the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_start_matches('{').trim_end_matches('}');
                    let k: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, k)
                }
                None => (tok, 1),
            };
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if name == "1" {
                continue;
            }
            if !valid {
                return Err(Error::Parse(format!("bad letter `{name}`")));
            }
            if name == "e" || exp == 0 {
                continue;
            }
            letters.push((name.to_string(), exp));
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, k)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A labelled generator of a Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub label: String,
    pub element: GroupElement,
}

/// Cayley graph `Gamma(G, S_+)`: an ordered, labelled generating set plus
/// relators kept for validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    family: GroupFamily,
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl CayleyGraph {
    /// Builds a graph from resolved elements.
    ///
    /// Rejects duplicate elements, the identity under any label other than
    /// `e`, and sets that do not generate the group.
    pub fn new(family: GroupFamily, generators: Vec<(String, GroupElement)>) -> Result<Self> {
        family.validate()?;
        let mut seen: Vec<&(String, GroupElement)> = Vec::new();
        let mut labels = HashSet::new();
        for entry in &generators {
            let (label, g) = entry;
            if g.family != family {
                return Err(Error::FamilyMismatch(family.to_string(), g.family.to_string()));
            }
            if !labels.insert(label.as_str()) {
                return Err(Error::Parse(format!("duplicate generator label `{label}`")));
            }
            if g.is_identity() && label != "e" {
                return Err(Error::IdentityGenerator(label.clone()));
            }
            if let Some((other, _)) = seen.iter().find(|(_, h)| h == g) {
                return Err(Error::DuplicateGenerator(other.clone(), label.clone()));
            }
            seen.push(entry);
        }
        let elements: Vec<GroupElement> = generators.iter().map(|(_, g)| g.clone()).collect();
        if !family.generated_by(&elements) {
            return Err(Error::NotGenerating(family.to_string()));
        }
        Ok(CayleyGraph {
            family,
            generators: generators
                .into_iter()
                .map(|(label, element)| Generator { label, element })
                .collect(),
            relators: Vec::new(),
        })
    }

    /// Builds a graph from labelled words over the family's canonical alphabet.
    pub fn from_words(family: GroupFamily, generators: &[(&str, &str)]) -> Result<Self> {
        let resolved = generators
            .iter()
            .map(|(label, word)| {
                let w: Word = word.parse()?;
                let g = if w.0.is_empty() {
                    family.identity()
                } else {
                    family.evaluate_word(&w)?
                };
                Ok((label.to_string(), g))
            })
            .collect::<Result<Vec<_>>>()?;
        CayleyGraph::new(family, resolved)
    }

    /// Attaches relators (words over generator labels), checking that each
    /// composes to the identity.
    pub fn with_relators(mut self, relators: Vec<Word>) -> Result<Self> {
        for w in &relators {
            if !self.evaluate_relator(w)?.is_identity() {
                return Err(Error::BadRelator(w.to_string()));
            }
        }
        self.relators = relators;
        Ok(self)
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.generators.iter().map(|g| g.label.as_str())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn element(&self, label: &str) -> Option<&GroupElement> {
        self.generators
            .iter()
            .find(|g| g.label == label)
            .map(|g| &g.element)
    }

    /// Value of a word over generator labels.
    pub fn evaluate_relator(&self, w: &Word) -> Result<GroupElement> {
        if w.0.is_empty() {
            return Ok(self.family.identity());
        }
        w.evaluate(|name| {
            self.element(name)
                .cloned()
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        })
    }

    /// Whether `S_+` differs from the set of inverses `S_-`.
    pub fn is_monoidal(&self) -> bool {
        let plus: HashSet<&GroupElement> = self.generators.iter().map(|g| &g.element).collect();
        self.generators
            .iter()
            .any(|g| !plus.contains(&g.element.inverse()))
    }

    /// Parses the presentation text format, e.g.
    /// `family=dihedral_inf; gens: a=(1,0), b=(1,1), c=(-1,1), d=(0,1); rels: b^2`.
    ///
    /// Generator values are normal-form tuples or words over the canonical
    /// alphabet.
    pub fn parse_presentation(text: &str) -> Result<Self> {
        let mut family = None;
        let mut gens: Vec<(String, String)> = Vec::new();
        let mut rels: Vec<Word> = Vec::new();
        for part in split_top_level(text, ';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if let Some(rest) = part.strip_prefix("family") {
                let tag = rest.trim_start().strip_prefix('=').ok_or_else(|| {
                    Error::Parse(format!("expected `family=<tag>`, got `{part}`"))
                })?;
                family = Some(tag.parse::<GroupFamily>()?);
            } else if let Some(rest) = part.strip_prefix("gens:") {
                for g in split_top_level(rest, ',') {
                    let g = g.trim();
                    if g.is_empty() {
                        continue;
                    }
                    let (label, value) = g
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected `label=value`, got `{g}`")))?;
                    gens.push((label.trim().to_string(), value.trim().to_string()));
                }
            } else if let Some(rest) = part.strip_prefix("rels:") {
                for r in rest.split(',').filter(|r| !r.trim().is_empty()) {
                    rels.push(r.parse()?);
                }
            } else {
                return Err(Error::Parse(format!("unrecognised presentation clause `{part}`")));
            }
        }
        let family = family.ok_or_else(|| Error::Parse("missing `family=` clause".into()))?;
        let resolved = gens
            .into_iter()
            .map(|(label, value)| {
                let g = if let Some(inner) = value.strip_prefix('(') {
                    let inner = inner
                        .strip_suffix(')')
                        .ok_or_else(|| Error::Parse(format!("unclosed tuple `{value}`")))?;
                    let coords = inner
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| {
                            t.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::Parse(format!("bad integer in `{value}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    family.element(&coords)?
                } else {
                    let w: Word = value.parse()?;
                    if w.0.is_empty() {
                        family.identity()
                    } else {
                        family.evaluate_word(&w)?
                    }
                };
                Ok((label, g))
            })
            .collect::<Result<Vec<_>>>()?;
        CayleyGraph::new(family, resolved)?.with_relators(rels)
    }
}

impl fmt::Display for CayleyGraph {
    /// Emits the presentation text format accepted by
    /// [`CayleyGraph::parse_presentation`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}={}", g.label, g.element))
            .collect();
        write!(f, "family={}; gens: {}", self.family, gens.join(", "))?;
        if !self.relators.is_empty() {
            let rels: Vec<String> = self.relators.iter().map(|w| w.to_string()).collect();
            write!(f, "; rels: {}", rels.join(", "))?;
        }
        Ok(())
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Right-coset tiling `G = H c_1 u H c_2` of a dihedral group with
/// `H = <a>`, `c_1 = a^m` and `c_2 = a^{m'} r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTiling {
    family: GroupFamily,
    m: i64,
    m_prime: i64,
}

impl CosetTiling {
    pub fn new(family: GroupFamily, m: i64, m_prime: i64) -> Result<Self> {
        if !family.is_dihedral() {
            return Err(Error::Unsupported(format!(
                "coset tilings are only defined for dihedral families, not {family}"
            )));
        }
        Ok(CosetTiling { family, m, m_prime })
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    /// `(m, m')`.
    pub fn offsets(&self) -> (i64, i64) {
        (self.m, self.m_prime)
    }

    pub fn index(&self) -> usize {
        2
    }

    /// `[c_1, c_2]`.
    pub fn representatives(&self) -> [GroupElement; 2] {
        [
            self.family.dihedral(self.m, false).unwrap(),
            self.family.dihedral(self.m_prime, true).unwrap(),
        ]
    }

    /// Writes `g = a^x c_j`, returning `(x, j)` with `j` zero-based.
    pub fn decompose(&self, g: &GroupElement) -> Result<(i64, usize)> {
        let (n, refl) = g
            .dihedral_parts()
            .filter(|_| g.family == self.family)
            .ok_or_else(|| Error::FamilyMismatch(self.family.to_string(), g.family.to_string()))?;
        let (x, j) = if refl { (n - self.m_prime, 1) } else { (n - self.m, 0) };
        let x = match self.family {
            GroupFamily::FiniteDihedral(order) => x.rem_euclid(order as i64),
            _ => x,
        };
        Ok((x, j))
    }

    /// `a^x c_j`.
    pub fn compose_from(&self, x: i64, j: usize) -> GroupElement {
        let a_x = self.family.dihedral(x, false).unwrap();
        a_x.mul(&self.representatives()[j])
    }
}

/// The tiling with `c_1 = e`, `c_2 = r`.
pub fn default_tiling(graph: &CayleyGraph) -> Result<CosetTiling> {
    CosetTiling::new(graph.family().clone(), 0, 0)
}
