//! Matrix multiplication through the group algebra of a TPP triple.
//!
//! `A` (m×p) is embedded at the elements `s_i^-1 t_j`, `B` (p×q) at
//! `t_j^-1 u_k`. Their convolution product, read back at `s_i^-1 u_k`, is
//! `AB` whenever `(S, T, U)` has the TPP. Coefficients are exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{check_tpp_quotient, Subset, TppError, TppTriple};
use crate::group::{Elem, Group};

pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("map {map} is not injective: ({i},{j}) and ({i2},{j2}) both land on element {element}")]
    NotInjective {
        map: &'static str,
        i: usize,
        j: usize,
        i2: usize,
        j2: usize,
        element: Elem,
    },
    #[error("the triple does not satisfy the triple product property")]
    NotTpp,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("algebra elements belong to different groups")]
    GroupMismatch,
    #[error("malformed matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Tpp(#[from] TppError),
}

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Matrix, AlgebraError> {
        if rows == 0 || cols == 0 {
            return Err(AlgebraError::Dimension("matrices must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Result<Matrix, AlgebraError> {
        Matrix::new(rows, cols, values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn parse_json(text: &str) -> Result<Matrix, AlgebraError> {
        serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One matrix entry on the wire: an integer, or a string `"a"` / `"a/b"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum WireEntry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
struct WireMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<WireEntry>>,
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = WireMatrix::deserialize(d)?;
        if wire.entries.len() != wire.rows || wire.entries.iter().any(|r| r.len() != wire.cols) {
            return Err(de::Error::custom(format!(
                "entries do not form a {}x{} array",
                wire.rows, wire.cols
            )));
        }
        let mut flat = Vec::with_capacity(wire.rows * wire.cols);
        for e in wire.entries.into_iter().flatten() {
            flat.push(match e {
                WireEntry::Int(v) => Rational::from_integer(v.into()),
                WireEntry::Text(s) => parse_rational(&s).map_err(de::Error::custom)?,
            });
        }
        Matrix::new(wire.rows, wire.cols, flat).map_err(de::Error::custom)
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not an integer or a/b rational");
    match s.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn wire_value(v: &Rational) -> serde_json::Value {
    if v.is_integer() {
        if let Some(i) = v.to_integer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::from(v.to_string())
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| wire_value(self.get(i, j))).collect())
            .collect();
        #[derive(Serialize)]
        struct Wire {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<serde_json::Value>>,
        }
        Wire {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

/// Standard triple-loop product.
pub fn direct_matmul(a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    if a.cols != b.rows {
        return Err(AlgebraError::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut c = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..b.cols {
            let mut acc = Rational::zero();
            for j in 0..a.cols {
                acc += a.get(i, j) * b.get(j, k);
            }
            c.set(i, k, acc);
        }
    }
    Ok(c)
}

/// Element of the group algebra: one rational coefficient per group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement<'g> {
    group: &'g Group,
    coeffs: Vec<Rational>,
}

impl<'g> AlgebraElement<'g> {
    pub fn zero(group: &'g Group) -> Self {
        AlgebraElement {
            group,
            coeffs: vec![Rational::zero(); group.order()],
        }
    }

    /// The basis element `e_a`.
    pub fn basis(group: &'g Group, a: Elem) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[a as usize] = Rational::from_integer(1.into());
        x
    }

    pub fn from_coeffs(group: &'g Group, coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        if coeffs.len() != group.order() {
            return Err(AlgebraError::Dimension(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(AlgebraElement { group, coeffs })
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn coeff(&self, a: Elem) -> &Rational {
        &self.coeffs[a as usize]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &AlgebraElement<'_>) -> Result<(), AlgebraError> {
        if std::ptr::eq(self.group, other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &AlgebraElement<'_>) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement {
            group: self.group,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraElement {
            group: self.group,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Group-algebra product `(xy)[g] = sum over a*b = g of x[a] y[b]`.
    ///
    /// Each output coefficient is accumulated in a fixed order over `a`.
    pub fn convolve(&self, other: &AlgebraElement<'_>) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let g = self.group;
        let support: Vec<Elem> = g.elements().filter(|&a| !self.coeffs[a as usize].is_zero()).collect();
        let coeffs = g
            .elements()
            .map(|target| {
                let mut acc = Rational::zero();
                for &a in &support {
                    let b = g.mul(g.inv(a), target) as usize;
                    if !other.coeffs[b].is_zero() {
                        acc += &self.coeffs[a as usize] * &other.coeffs[b];
                    }
                }
                acc
            })
            .collect();
        Ok(AlgebraElement { group: g, coeffs })
    }
}

pub fn convolve<'g>(x: &AlgebraElement<'g>, y: &AlgebraElement<'_>) -> Result<AlgebraElement<'g>, AlgebraError> {
    x.convolve(y)
}

/// Element ids `x_i^-1 y_j` laid out row-major, or the first collision.
fn embedding_positions(g: &Group, left: &Subset, right: &Subset, map: &'static str) -> Result<Vec<Elem>, AlgebraError> {
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; g.order()];
    let mut out = Vec::with_capacity(left.len() * right.len());
    for (i, &x) in left.elements().iter().enumerate() {
        let xi = g.inv(x);
        for (j, &y) in right.elements().iter().enumerate() {
            let e = g.mul(xi, y);
            if let Some((i2, j2)) = owner[e as usize] {
                return Err(AlgebraError::NotInjective {
                    map,
                    i: i2,
                    j: j2,
                    i2: i,
                    j2: j,
                    element: e,
                });
            }
            owner[e as usize] = Some((i, j));
            out.push(e);
        }
    }
    Ok(out)
}

fn embed<'g>(
    g: &'g Group,
    m: &Matrix,
    left: &Subset,
    right: &Subset,
    map: &'static str,
) -> Result<AlgebraElement<'g>, AlgebraError> {
    if m.rows != left.len() || m.cols != right.len() {
        return Err(AlgebraError::Dimension(format!(
            "{}x{} matrix against subsets of sizes {} and {}",
            m.rows,
            m.cols,
            left.len(),
            right.len()
        )));
    }
    let positions = embedding_positions(g, left, right, map)?;
    let mut x = AlgebraElement::zero(g);
    for (e, v) in positions.into_iter().zip(&m.entries) {
        x.coeffs[e as usize] = v.clone();
    }
    Ok(x)
}

/// Places `A[i][j]` at `s_i^-1 t_j`.
pub fn embed_left<'g>(g: &'g Group, a: &Matrix, s: &Subset, t: &Subset) -> Result<AlgebraElement<'g>, AlgebraError> {
    embed(g, a, s, t, "eps_mp")
}

/// Places `B[j][k]` at `t_j^-1 u_k`.
pub fn embed_right<'g>(g: &'g Group, b: &Matrix, t: &Subset, u: &Subset) -> Result<AlgebraElement<'g>, AlgebraError> {
    embed(g, b, t, u, "eps_pq")
}

/// Reads entry `(i, k)` from the coefficient of `s_i^-1 u_k`. Coefficients
/// outside that image are ignored.
pub fn extract(c: &AlgebraElement<'_>, s: &Subset, u: &Subset) -> Result<Matrix, AlgebraError> {
    Ok(extract_with_diagnostics(c, s, u)?.0)
}

/// Like [`extract`], also returning the nonzero coefficients that were
/// discarded because they lie outside `{s^-1 u}`. For a TPP triple these
/// are the cross terms of the product and carry no matrix information.
pub fn extract_with_diagnostics(
    c: &AlgebraElement<'_>,
    s: &Subset,
    u: &Subset,
) -> Result<(Matrix, Vec<(Elem, Rational)>), AlgebraError> {
    let g = c.group;
    let positions = embedding_positions(g, s, u, "eps_mq")?;
    let mut used = vec![false; g.order()];
    let entries = positions
        .iter()
        .map(|&e| {
            used[e as usize] = true;
            c.coeffs[e as usize].clone()
        })
        .collect();
    let dropped = g
        .elements()
        .filter(|&e| !used[e as usize] && !c.coeffs[e as usize].is_zero())
        .map(|e| (e, c.coeffs[e as usize].clone()))
        .collect();
    Ok((Matrix::new(s.len(), u.len(), entries)?, dropped))
}

fn check_dims(t: &TppTriple, a: &Matrix, b: &Matrix) -> Result<(), AlgebraError> {
    let (m, p, q) = t.sizes();
    if (a.rows, a.cols, b.rows, b.cols) != (m, p, p, q) {
        return Err(AlgebraError::Dimension(format!(
            "triple sizes ({m},{p},{q}) need {m}x{p} and {p}x{q} matrices, got {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `AB` computed in the group algebra of `g` through the triple `t`.
/// Refuses triples without the TPP.
pub fn multiply_via_group(g: &Group, t: &TppTriple, a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    check_dims(t, a, b)?;
    if !check_tpp_quotient(g, t)? {
        return Err(AlgebraError::NotTpp);
    }
    multiply_via_group_unchecked(g, t, a, b)
}

/// The same pipeline without the TPP precondition. Only the embedding maps
/// must be injective; the result need not equal `AB`.
pub fn multiply_via_group_unchecked(g: &Group, t: &TppTriple, a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    check_dims(t, a, b)?;
    let x = embed_left(g, a, &t.s, &t.t)?;
    let y = embed_right(g, b, &t.t, &t.u)?;
    extract(&x.convolve(&y)?, &t.s, &t.u)
}
