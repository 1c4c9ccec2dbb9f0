//! Finite groups realized as full Cayley tables.
//!
//! Every group built here uses element id `0` for the identity. The encodings
//! of the built-in families are fixed so ids are stable across runs:
//!
//! * `cyc:n`: id `i` is `g^i`.
//! * `dih:k` (order `2k`): id `i + k*j` is `r^i s^j` with `0 <= i < k`, `j` in `{0,1}`.
//! * `sym:k`: permutations of `0..k` in one-line notation, ranked
//!   lexicographically. Products compose as functions, `(a*b)(x) = a(b(x))`.
//! * `prod:(G1,G2,...)`: tuples ranked lexicographically, so the first factor
//!   is the most significant digit of the mixed-radix id.
//! * `file:<path>`: a JSON Cayley table `{"n": .., "table": [[..], ..]}`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

/// Element identifier inside a [`Group`].
pub type Elem = u32;

/// Default upper bound on the order of a constructed group.
pub const DEFAULT_ORDER_CAP: usize = 5040;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cannot parse group spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: String, cap: usize },
    #[error("Cayley table is not square: {0}")]
    NonSquare(String),
    #[error("table is not a group: {0}")]
    Axiom(AxiomFailure),
    #[error("element id {id} out of range for group of order {order}")]
    OutOfRange { id: u64, order: usize },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed Cayley table file {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// The first group axiom a table violates, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    Closure { a: usize, b: usize, value: u64 },
    Identity { a: usize },
    Inverse { a: usize },
    Associativity { a: usize, b: usize, c: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AxiomFailure::Closure { a, b, value } => {
                write!(f, "closure fails: {a}*{b} = {value} is not an element")
            }
            AxiomFailure::Identity { a } => write!(f, "0 is not an identity for {a}"),
            AxiomFailure::Inverse { a } => write!(f, "{a} has no two-sided inverse"),
            AxiomFailure::Associativity { a, b, c } => {
                write!(f, "associativity fails: ({a}*{b})*{c} != {a}*({b}*{c})")
            }
        }
    }
}

/// Parsed group descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Vec<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    fn parse_err(spec: &str, reason: impl Into<String>) -> GroupError {
        GroupError::Parse {
            spec: spec.to_string(),
            reason: reason.into(),
        }
    }

    /// Order of the described group, or `None` on overflow. File specs are
    /// only known after reading the table.
    fn declared_order(&self) -> Option<Option<usize>> {
        match self {
            GroupSpec::Cyclic(n) => Some(Some(*n)),
            GroupSpec::Dihedral(k) => Some(k.checked_mul(2)),
            GroupSpec::Symmetric(k) => Some((1..=*k).try_fold(1usize, |acc, i| acc.checked_mul(i))),
            GroupSpec::Product(fs) => {
                let mut acc = Some(1usize);
                for f in fs {
                    let o = f.declared_order()?;
                    acc = acc.zip(o).and_then(|(a, b)| a.checked_mul(b));
                }
                Some(acc)
            }
            GroupSpec::File(_) => None,
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Self::parse_err(raw, "expected `<family>:<argument>`"))?;
        let int_arg = |min: usize| -> Result<usize, GroupError> {
            let v: usize = arg
                .trim()
                .parse()
                .map_err(|_| Self::parse_err(raw, format!("`{arg}` is not a non-negative integer")))?;
            if v < min {
                return Err(Self::parse_err(raw, format!("parameter must be at least {min}")));
            }
            Ok(v)
        };
        match kind.trim() {
            "cyc" => Ok(GroupSpec::Cyclic(int_arg(1)?)),
            "dih" => Ok(GroupSpec::Dihedral(int_arg(1)?)),
            "sym" => Ok(GroupSpec::Symmetric(int_arg(1)?)),
            "file" => {
                let path = arg.trim();
                if path.is_empty() {
                    return Err(Self::parse_err(raw, "empty file path"));
                }
                Ok(GroupSpec::File(PathBuf::from(path)))
            }
            "prod" => {
                let inner = arg
                    .trim()
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Self::parse_err(raw, "product factors must be wrapped in parentheses"))?;
                let mut depth = 0i32;
                for c in inner.chars() {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    if depth < 0 {
                        return Err(Self::parse_err(raw, "unbalanced parentheses"));
                    }
                }
                if depth != 0 {
                    return Err(Self::parse_err(raw, "unbalanced parentheses"));
                }
                let factors = split_top_level(inner)
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<GroupSpec>, _>>()?;
                if factors.len() < 2 {
                    return Err(Self::parse_err(raw, "a product needs at least two factors"));
                }
                Ok(GroupSpec::Product(factors))
            }
            other => Err(Self::parse_err(raw, format!("unknown group family `{other}`"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyc:{n}"),
            GroupSpec::Dihedral(k) => write!(f, "dih:{k}"),
            GroupSpec::Symmetric(k) => write!(f, "sym:{k}"),
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
            GroupSpec::Product(fs) => {
                write!(f, "prod:(")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A finite group stored as its Cayley table. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
    names: Vec<String>,
    spec: String,
}

impl Group {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    /// Construction descriptor this group was built from.
    pub fn spec(&self) -> &str {
        &self.spec
    }

    /// Product `a*b`. Panics on out-of-range ids; see [`Group::try_mul`].
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn try_mul(&self, a: Elem, b: Elem) -> Result<Elem, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem, GroupError> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    pub fn check(&self, a: Elem) -> Result<(), GroupError> {
        if (a as usize) < self.order {
            Ok(())
        } else {
            Err(GroupError::OutOfRange {
                id: a as u64,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a + 1..n).all(|b| self.table[a * n + b] == self.table[b * n + a]))
    }

    /// Human-readable name of an element (`g^2`, `r s`, `[1 0 2]`, ...).
    pub fn name(&self, a: Elem) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inverse_table(&self) -> &[Elem] {
        &self.inverse
    }

    /// The Cayley table as rows.
    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order).map(<[Elem]>::to_vec).collect()
    }

    /// Product of a left-to-right sequence of elements.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, word: I) -> Elem {
        word.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    fn from_parts(order: usize, table: Vec<Elem>, names: Vec<String>, spec: String) -> Result<Group, GroupError> {
        if let Some(failure) = axioms_flat(order, &table) {
            return Err(GroupError::Axiom(failure));
        }
        let inverse = inverses_flat(order, &table).expect("axioms checked");
        Ok(Group {
            order,
            table,
            inverse,
            names,
            spec,
        })
    }
}

/// Builds a group with the default order cap.
pub fn build_group(spec: &str) -> Result<Group, GroupError> {
    build_group_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn build_group_with_cap(spec: &str, cap: usize) -> Result<Group, GroupError> {
    let parsed: GroupSpec = spec.parse()?;
    build_from_spec(&parsed, cap)
}

pub fn build_from_spec(spec: &GroupSpec, cap: usize) -> Result<Group, GroupError> {
    if let Some(order) = spec.declared_order() {
        match order {
            None => {
                return Err(GroupError::OrderCap {
                    order: "overflow".into(),
                    cap,
                })
            }
            Some(o) if o > cap => {
                return Err(GroupError::OrderCap {
                    order: o.to_string(),
                    cap,
                })
            }
            _ => {}
        }
    }
    let (order, table, names) = raw_table(spec, cap)?;
    Group::from_parts(order, table, names, spec.to_string())
}

type RawTable = (usize, Vec<Elem>, Vec<String>);

fn raw_table(spec: &GroupSpec, cap: usize) -> Result<RawTable, GroupError> {
    match spec {
        GroupSpec::Cyclic(n) => Ok(cyclic(*n)),
        GroupSpec::Dihedral(k) => Ok(dihedral(*k)),
        GroupSpec::Symmetric(k) => Ok(symmetric(*k)),
        GroupSpec::File(path) => {
            let (n, table) = read_table_file(path, cap)?;
            let names = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("x{i}") }).collect();
            Ok((n, table, names))
        }
        GroupSpec::Product(factors) => {
            let raws = factors.iter().map(|f| raw_table(f, cap)).collect::<Result<Vec<_>, _>>()?;
            let mut order = 1;
            let mut table = vec![0];
            for (n2, t2, _) in &raws {
                table = direct_product(order, &table, *n2, t2);
                order *= n2;
            }
            let names = (0..order)
                .map(|mut a| {
                    let mut parts = Vec::with_capacity(raws.len());
                    for (n2, _, names2) in raws.iter().rev() {
                        parts.push(names2[a % n2].as_str());
                        a /= n2;
                    }
                    parts.reverse();
                    format!("({})", parts.join(","))
                })
                .collect();
            Ok((order, table, names))
        }
    }
}

fn cyclic(n: usize) -> RawTable {
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(((a + b) % n) as Elem);
        }
    }
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    (n, table, names)
}

fn dihedral(k: usize) -> RawTable {
    let n = 2 * k;
    let mut table = Vec::with_capacity(n * n);
    // r^i s^j * r^i' s^j' = r^(i + (-1)^j i') s^(j + j')
    for a in 0..n {
        let (i, j) = (a % k, a / k);
        for b in 0..n {
            let (i2, j2) = (b % k, b / k);
            let rot = if j == 0 { (i + i2) % k } else { (i + k - i2) % k };
            table.push((rot + k * ((j + j2) % 2)) as Elem);
        }
    }
    let names = (0..n)
        .map(|a| {
            let (i, j) = (a % k, a / k);
            let r = match i {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{i}"),
            };
            match (r.is_empty(), j) {
                (true, 0) => "e".to_string(),
                (true, _) => "s".to_string(),
                (false, 0) => r,
                (false, _) => format!("{r} s"),
            }
        })
        .collect();
    (n, table, names)
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations_lex(k: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..k as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot has a successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Lexicographic rank of a permutation (Lehmer code in factorial base).
pub(crate) fn perm_rank(p: &[u8]) -> usize {
    let k = p.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (k - i) + smaller;
    }
    rank
}

fn symmetric(k: usize) -> RawTable {
    let perms = permutations_lex(k);
    let n = perms.len();
    let mut table = vec![0 as Elem; n * n];
    let mut buf = vec![0u8; k];
    for (row, pa) in table.chunks_mut(n).zip(&perms) {
        for (slot, pb) in row.iter_mut().zip(&perms) {
            for (out, &x) in buf.iter_mut().zip(pb) {
                *out = pa[x as usize];
            }
            *slot = perm_rank(&buf) as Elem;
        }
    }
    let names = perms
        .iter()
        .map(|p| {
            let body: Vec<String> = p.iter().map(u8::to_string).collect();
            format!("[{}]", body.join(" "))
        })
        .collect();
    (n, table, names)
}

fn direct_product(n1: usize, t1: &[Elem], n2: usize, t2: &[Elem]) -> Vec<Elem> {
    let n = n1 * n2;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (a1, a2) = (a / n2, a % n2);
        for b in 0..n {
            let (b1, b2) = (b / n2, b % n2);
            let c1 = t1[a1 * n1 + b1] as usize;
            let c2 = t2[a2 * n2 + b2] as usize;
            table.push((c1 * n2 + c2) as Elem);
        }
    }
    table
}

#[derive(Deserialize)]
struct TableFile {
    n: usize,
    table: Vec<Vec<i64>>,
}

fn read_table_file(path: &Path, cap: usize) -> Result<(usize, Vec<Elem>), GroupError> {
    let text = std::fs::read_to_string(path).map_err(|source| GroupError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: TableFile = serde_json::from_str(&text).map_err(|source| GroupError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if file.n > cap {
        return Err(GroupError::OrderCap {
            order: file.n.to_string(),
            cap,
        });
    }
    if file.table.len() != file.n {
        return Err(GroupError::NonSquare(format!(
            "declared n = {} but table has {} rows",
            file.n,
            file.table.len()
        )));
    }
    let rows = file.table;
    let flat = flatten_checked(&rows)?;
    Ok((file.n, flat))
}

/// Flattens a square table, reporting closure failures (negative or too large
/// entries) as axiom failures.
fn flatten_checked(rows: &[Vec<i64>]) -> Result<Vec<Elem>, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::NonSquare("empty table".into()));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (a, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NonSquare(format!("row {a} has {} entries, expected {n}", row.len())));
        }
        for (b, &v) in row.iter().enumerate() {
            if v < 0 || v as u64 >= n as u64 {
                return Err(GroupError::Axiom(AxiomFailure::Closure {
                    a,
                    b,
                    value: v as u64,
                }));
            }
            flat.push(v as Elem);
        }
    }
    Ok(flat)
}

/// Checks closure, identity at id 0, two-sided inverses and associativity of
/// a raw square table. Returns the first failing axiom with a witness, or
/// `None` when the table is a group.
///
/// Associativity is decided with Light's test over a generating set: if
/// `x*(g*y) = (x*g)*y` for every generator `g` and all `x, y`, the operation
/// is associative. This is exact, and costs `O(n^2 * |gens|)` instead of `O(n^3)`.
pub fn verify_group_axioms(table: &[Vec<u64>]) -> Result<Option<AxiomFailure>, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::NonSquare("empty table".into()));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NonSquare(format!("row {a} has {} entries, expected {n}", row.len())));
        }
        for (b, &v) in row.iter().enumerate() {
            if v >= n as u64 {
                return Ok(Some(AxiomFailure::Closure { a, b, value: v }));
            }
            flat.push(v as Elem);
        }
    }
    Ok(axioms_flat(n, &flat))
}

fn axioms_flat(n: usize, t: &[Elem]) -> Option<AxiomFailure> {
    for a in 0..n {
        for b in 0..n {
            let v = t[a * n + b];
            if v as usize >= n {
                return Some(AxiomFailure::Closure { a, b, value: v as u64 });
            }
        }
    }
    for a in 0..n {
        if t[a] as usize != a || t[a * n] as usize != a {
            return Some(AxiomFailure::Identity { a });
        }
    }
    if let Err(a) = inverses_flat(n, t) {
        return Some(AxiomFailure::Inverse { a });
    }
    let mul = |a: usize, b: usize| t[a * n + b] as usize;
    for g in generating_set(n, t) {
        for x in 0..n {
            let xg = mul(x, g);
            for y in 0..n {
                if mul(x, mul(g, y)) != mul(xg, y) {
                    return Some(AxiomFailure::Associativity { a: x, b: g, c: y });
                }
            }
        }
    }
    None
}

fn inverses_flat(n: usize, t: &[Elem]) -> Result<Vec<Elem>, usize> {
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| t[a * n + b] == 0 && t[b * n + a] == 0)
                .map(|b| b as Elem)
                .ok_or(a)
        })
        .collect()
}

/// Greedy generating set of the magma defined by `t`.
fn generating_set(n: usize, t: &[Elem]) -> Vec<usize> {
    let mut inside = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        let mut queue = vec![x];
        inside[x] = true;
        while let Some(z) = queue.pop() {
            members.push(z);
            for &c in &members {
                for v in [t[z * n + c], t[c * n + z]] {
                    let v = v as usize;
                    if !inside[v] {
                        inside[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_associative(t: &[Vec<u64>]) -> bool {
        let n = t.len();
        let m = |a: usize, b: usize| t[a][b] as usize;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m(m(a, b), c) == m(a, m(b, c)))))
    }

    fn as_u64(g: &Group) -> Vec<Vec<u64>> {
        g.rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
    }

    #[test]
    fn orders_of_builtin_families() {
        assert_eq!(build_group("cyc:6").unwrap().order(), 6);
        assert_eq!(build_group("sym:3").unwrap().order(), 6);
        assert_eq!(build_group("dih:4").unwrap().order(), 8);
        assert_eq!(build_group("prod:(cyc:2,cyc:2,cyc:2)").unwrap().order(), 8);
        assert_eq!(build_group("prod:(cyc:2,prod:(cyc:3,dih:2))").unwrap().order(), 24);
        assert_eq!(build_group("cyc:1").unwrap().order(), 1);
    }

    #[test]
    fn cyclic_mul_and_inv() {
        let g = build_group("cyc:6").unwrap();
        assert_eq!(g.mul(1, 5), 0);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.inv(0), 0);
        for a in g.elements() {
            assert_eq!(g.mul(0, a), a);
        }
        assert!(g.try_mul(6, 0).is_err());
        assert!(g.try_inv(7).is_err());
    }

    #[test]
    fn dihedral_reflections_are_involutions() {
        let g = build_group("dih:3").unwrap();
        for s in 3..6 {
            assert_eq!(g.inv(s), s);
        }
        // s r s = r^-1
        assert_eq!(g.product([3, 1, 3]), 2);
        assert!(!g.is_abelian());
        assert_eq!(g.name(4), "r s");
    }

    #[test]
    fn sym3_transpositions_compose_to_three_cycle() {
        let g = build_group("sym:3").unwrap();
        // lexicographic ranks: 0=[0 1 2] 1=[0 2 1] 2=[1 0 2] 3=[1 2 0] 4=[2 0 1] 5=[2 1 0]
        assert_eq!(g.name(1), "[0 2 1]");
        assert_eq!(g.name(2), "[1 0 2]");
        // (a*b)(x) = a(b(x)) with a = [0 2 1], b = [1 0 2]:
        // x=0 -> a(1)=2, x=1 -> a(0)=0, x=2 -> a(2)=1, giving [2 0 1] = id 4
        assert_eq!(g.mul(1, 2), 4);
        assert_eq!(g.mul(2, 1), 3);
        assert_eq!(g.name(3), "[1 2 0]");
    }

    #[test]
    fn abelian_detection() {
        assert!(build_group("cyc:6").unwrap().is_abelian());
        assert!(!build_group("sym:3").unwrap().is_abelian());
        assert!(build_group("prod:(cyc:2,cyc:3)").unwrap().is_abelian());
    }

    #[test]
    fn product_encoding_is_mixed_radix_first_factor_major() {
        let g = build_group("prod:(cyc:2,cyc:3)").unwrap();
        // id = x0 * 3 + x1
        assert_eq!(g.mul(3, 1), 4);
        assert_eq!(g.mul(5, 1), 3);
        assert_eq!(g.name(5), "(g,g^2)");
        let h = build_group("prod:(cyc:2,cyc:2,cyc:2)").unwrap();
        assert_eq!(h.name(5), "(g,e,g)");
    }

    #[test]
    fn builtin_groups_pass_brute_force_axioms() {
        for spec in ["cyc:5", "dih:4", "sym:3", "sym:4", "prod:(cyc:2,dih:3)"] {
            let g = build_group(spec).unwrap();
            let t = as_u64(&g);
            assert!(brute_force_associative(&t), "{spec}");
            assert_eq!(verify_group_axioms(&t).unwrap(), None);
            for a in g.elements() {
                assert_eq!(g.inv(g.inv(a)), a);
                assert_eq!(g.mul(a, g.inv(a)), 0);
            }
        }
    }

    #[test]
    fn corrupted_table_reports_associativity_witness() {
        let mut t = as_u64(&build_group("cyc:3").unwrap());
        t[1][1] = 1;
        assert!(!brute_force_associative(&t));
        match verify_group_axioms(&t).unwrap() {
            Some(AxiomFailure::Associativity { a, b, c }) => {
                let m = |x: usize, y: usize| t[x][y] as usize;
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn axiom_diagnostics() {
        assert_eq!(verify_group_axioms(&[vec![0]]).unwrap(), None);
        assert!(matches!(verify_group_axioms(&[vec![0, 1], vec![1]]), Err(GroupError::NonSquare(_))));
        assert_eq!(
            verify_group_axioms(&[vec![0, 1], vec![1, 2]]).unwrap(),
            Some(AxiomFailure::Closure { a: 1, b: 1, value: 2 })
        );
        assert_eq!(
            verify_group_axioms(&[vec![1, 0], vec![0, 1]]).unwrap(),
            Some(AxiomFailure::Identity { a: 0 })
        );
        assert_eq!(
            verify_group_axioms(&[vec![0, 1], vec![1, 1]]).unwrap(),
            Some(AxiomFailure::Inverse { a: 1 })
        );
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("cyc:4".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(4));
        assert_eq!(
            " prod:( cyc:2 , sym:3 ) ".parse::<GroupSpec>().unwrap(),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Symmetric(3)])
        );
        for bad in ["cyc:0", "cyc", "foo:3", "prod:(cyc:2)", "prod:cyc:2,cyc:3", "prod:((cyc:2,cyc:3)", "dih:-1", "file:"] {
            assert!(bad.parse::<GroupSpec>().is_err(), "{bad}");
        }
        let s = "prod:(cyc:2,prod:(dih:3,sym:2))";
        assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
    }

    #[test]
    fn order_cap_is_enforced_before_construction() {
        assert!(matches!(build_group("sym:8"), Err(GroupError::OrderCap { .. })));
        assert!(matches!(build_group_with_cap("cyc:10", 9), Err(GroupError::OrderCap { .. })));
        assert!(matches!(build_group("sym:40"), Err(GroupError::OrderCap { .. })));
        assert!(build_group_with_cap("cyc:10", 10).is_ok());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build_group("prod:(dih:3,cyc:2)").unwrap();
        let b = build_group("prod:(dih:3,cyc:2)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn file_tables() {
        let dir = tempfile::tempdir().unwrap();
        let ok = dir.path().join("c3.json");
        std::fs::write(&ok, r#"{"n": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
        let g = build_group(&format!("file:{}", ok.display())).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);

        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, r#"{"n": 3, "table": [[0,1,2],[1,1,0],[2,0,1]]}"#).unwrap();
        assert!(matches!(build_group(&format!("file:{}", bad.display())), Err(GroupError::Axiom(_))));

        let ragged = dir.path().join("ragged.json");
        std::fs::write(&ragged, r#"{"n": 2, "table": [[0,1],[1]]}"#).unwrap();
        assert!(matches!(build_group(&format!("file:{}", ragged.display())), Err(GroupError::NonSquare(_))));

        let nested = format!("prod:(cyc:2,file:{})", ok.display());
        assert_eq!(build_group(&nested).unwrap().order(), 6);
    }

    #[test]
    fn permutation_ranking_round_trips() {
        for (r, p) in permutations_lex(5).iter().enumerate() {
            assert_eq!(perm_rank(p), r);
        }
    }
}
