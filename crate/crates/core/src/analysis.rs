//! Triple product property checks and the disjointness structure of subset
//! triples.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Elem, Group, GroupError};

#[derive(Debug, Error)]
pub enum TppError {
    #[error("subsets must be nonempty")]
    EmptySubset,
    #[error("element {0} listed twice")]
    Duplicate(Elem),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed triple file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A nonempty subset of a group, stored as strictly increasing ids.
///
/// The order of `elements` is also the row/column order used when matrices
/// are embedded through this subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Subset(Vec<Elem>);

impl Subset {
    /// Validates ids against `g` and sorts them. Duplicates are rejected
    /// rather than merged.
    pub fn new(g: &Group, ids: impl IntoIterator<Item = Elem>) -> Result<Subset, TppError> {
        let mut v: Vec<Elem> = ids.into_iter().collect();
        if v.is_empty() {
            return Err(TppError::EmptySubset);
        }
        for &x in &v {
            g.check(x)?;
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(TppError::Duplicate(w[0]));
        }
        Ok(Subset(v))
    }

    /// Caller guarantees `ids` is strictly increasing, nonempty and in range.
    pub(crate) fn from_sorted(ids: Vec<Elem>) -> Subset {
        debug_assert!(!ids.is_empty() && ids.windows(2).all(|w| w[0] < w[1]));
        Subset(ids)
    }

    /// The whole group as a subset.
    pub fn full(g: &Group) -> Subset {
        Subset(g.elements().collect())
    }

    pub fn singleton(g: &Group, x: Elem) -> Result<Subset, TppError> {
        Subset::new(g, [x])
    }

    pub fn elements(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn intersection_size(&self, other: &Subset) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    fn check_in(&self, g: &Group) -> Result<(), GroupError> {
        g.check(*self.0.last().expect("nonempty"))
    }

    /// Right-quotient set `{x' * x^-1 : x', x in self}` as a membership mask.
    pub fn right_quotients(&self, g: &Group) -> Vec<bool> {
        let mut mask = vec![false; g.order()];
        for &a in &self.0 {
            for &b in &self.0 {
                mask[g.mul(a, g.inv(b)) as usize] = true;
            }
        }
        mask
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Three subsets `(S, T, U)` of one group with sizes `(m, p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TppTriple {
    pub s: Subset,
    pub t: Subset,
    pub u: Subset,
}

impl TppTriple {
    pub fn new(s: Subset, t: Subset, u: Subset) -> TppTriple {
        TppTriple { s, t, u }
    }

    /// Builds a triple from raw id lists, validating each against `g`.
    pub fn from_ids(g: &Group, s: &[Elem], t: &[Elem], u: &[Elem]) -> Result<TppTriple, TppError> {
        Ok(TppTriple {
            s: Subset::new(g, s.iter().copied())?,
            t: Subset::new(g, t.iter().copied())?,
            u: Subset::new(g, u.iter().copied())?,
        })
    }

    pub fn m(&self) -> usize {
        self.s.len()
    }

    pub fn p(&self) -> usize {
        self.t.len()
    }

    pub fn q(&self) -> usize {
        self.u.len()
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.m(), self.p(), self.q())
    }

    /// Multiplicative size `m*p*q`.
    pub fn mpq(&self) -> u64 {
        (self.m() * self.p() * self.q()) as u64
    }

    fn check_in(&self, g: &Group) -> Result<(), TppError> {
        self.s.check_in(g)?;
        self.t.check_in(g)?;
        self.u.check_in(g)?;
        Ok(())
    }
}

impl fmt::Display for TppTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.t, self.u)
    }
}

/// On-disk triple: `{"group": "<spec>", "S": [..], "T": [..], "U": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TripleFile {
    pub group: String,
    #[serde(rename = "S")]
    pub s: Vec<Elem>,
    #[serde(rename = "T")]
    pub t: Vec<Elem>,
    #[serde(rename = "U")]
    pub u: Vec<Elem>,
}

impl TripleFile {
    pub fn parse(text: &str) -> Result<TripleFile, TppError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_triple(&self, g: &Group) -> Result<TppTriple, TppError> {
        TppTriple::from_ids(g, &self.s, &self.t, &self.u)
    }
}

/// Direct transcription of the definition: every sextuple
/// `(s', s, t', t, u', u)` with `s' s^-1 t' t^-1 u' u^-1 = 1` must have
/// `s = s'`, `t = t'` and `u = u'`. Costs `O(m^2 p^2 q^2)`; used as the oracle.
pub fn check_tpp_naive(g: &Group, triple: &TppTriple) -> Result<bool, TppError> {
    triple.check_in(g)?;
    let (ss, ts, us) = (triple.s.elements(), triple.t.elements(), triple.u.elements());
    for &s1 in ss {
        for &s in ss {
            let a = g.mul(s1, g.inv(s));
            for &t1 in ts {
                let b = g.mul(a, t1);
                for &t in ts {
                    let c = g.mul(b, g.inv(t));
                    for &u1 in us {
                        let d = g.mul(c, u1);
                        for &u in us {
                            if g.mul(d, g.inv(u)) == 0 && (s1 != s || t1 != t || u1 != u) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// TPP via right-quotient sets: no `q1 q2 q3 = 1` with `qi` in `RQ(S)`,
/// `RQ(T)`, `RQ(U)` unless all three are the identity.
pub fn check_tpp_quotient(g: &Group, triple: &TppTriple) -> Result<bool, TppError> {
    triple.check_in(g)?;
    let rq = |x: &Subset| -> Vec<Elem> {
        let mask = x.right_quotients(g);
        g.elements().filter(|&e| mask[e as usize]).collect()
    };
    let (rs, rt) = (rq(&triple.s), rq(&triple.t));
    let ru = triple.u.right_quotients(g);
    for &q1 in &rs {
        for &q2 in &rt {
            if q1 == 0 && q2 == 0 {
                continue;
            }
            // q3 must equal (q1 q2)^-1 to close the product
            if ru[g.inv(g.mul(q1, q2)) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Image sizes of the three embedding maps
/// `(s,t) -> s^-1 t`, `(t,u) -> t^-1 u` and `(s,u) -> s^-1 u`.
pub fn epsilon_image_sizes(g: &Group, triple: &TppTriple) -> Result<(usize, usize, usize), TppError> {
    triple.check_in(g)?;
    Ok((
        image_size(g, &triple.s, &triple.t),
        image_size(g, &triple.t, &triple.u),
        image_size(g, &triple.s, &triple.u),
    ))
}

/// Size of `{x^-1 y : x in left, y in right}`.
pub fn image_size(g: &Group, left: &Subset, right: &Subset) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for &x in left.elements() {
        let xi = g.inv(x);
        for &y in right.elements() {
            let v = g.mul(xi, y) as usize;
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
    }
    count
}

/// Injectivity of `eps_mp`, `eps_pq` and `eps_mq`, in that order.
pub fn epsilon_injectivity(g: &Group, triple: &TppTriple) -> Result<(bool, bool, bool), TppError> {
    let (a, b, c) = epsilon_image_sizes(g, triple)?;
    let (m, p, q) = triple.sizes();
    Ok((a == m * p, b == p * q, c == m * q))
}

/// Every pair of the triple shares at most one element.
pub fn minimal_disjointness(triple: &TppTriple) -> bool {
    triple.s.intersection_size(&triple.t) <= 1
        && triple.t.intersection_size(&triple.u) <= 1
        && triple.s.intersection_size(&triple.u) <= 1
}

/// Disjointness case of a triple.
///
/// Within each type number the labels are fixed as: `II` = only S,T meet,
/// `III` = only T,U meet, `IV` = only S,U meet; `V` = one element common to
/// all three; `VI` = only T,U disjoint, `VII` = only S,U disjoint,
/// `VIII` = only S,T disjoint; `IX` = three distinct shared elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    ViolatesMinimalDisjointness,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 10] = [
        CaseLabel::I,
        CaseLabel::II,
        CaseLabel::III,
        CaseLabel::IV,
        CaseLabel::V,
        CaseLabel::VI,
        CaseLabel::VII,
        CaseLabel::VIII,
        CaseLabel::IX,
        CaseLabel::ViolatesMinimalDisjointness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
            CaseLabel::V => "v",
            CaseLabel::VI => "vi",
            CaseLabel::VII => "vii",
            CaseLabel::VIII => "viii",
            CaseLabel::IX => "ix",
            CaseLabel::ViolatesMinimalDisjointness => "violates-minimal-disjointness",
        }
    }

    /// Type number implied by the case, if minimal disjointness holds.
    pub fn type_number(self) -> Option<usize> {
        match self {
            CaseLabel::I => Some(0),
            CaseLabel::II | CaseLabel::III | CaseLabel::IV => Some(1),
            CaseLabel::V | CaseLabel::VI | CaseLabel::VII | CaseLabel::VIII => Some(2),
            CaseLabel::IX => Some(3),
            CaseLabel::ViolatesMinimalDisjointness => None,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisjointnessReport {
    #[serde(rename = "case")]
    pub case_label: CaseLabel,
    /// `m + p + q - |S ∪ T ∪ U|`.
    pub w: usize,
    /// Size of the remainder set `G - (S ∪ T ∪ U)`.
    pub r: usize,
    pub union_size: usize,
    pub a_st: usize,
    pub a_tu: usize,
    pub a_su: usize,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub minimal_disjointness: bool,
}

pub fn classify(g: &Group, triple: &TppTriple) -> Result<DisjointnessReport, TppError> {
    triple.check_in(g)?;
    let (s, t, u) = (&triple.s, &triple.t, &triple.u);
    let (m, p, q) = triple.sizes();
    let a_st = s.intersection_size(t);
    let a_tu = t.intersection_size(u);
    let a_su = s.intersection_size(u);

    let mut in_union = vec![false; g.order()];
    for &x in s.elements().iter().chain(t.elements()).chain(u.elements()) {
        in_union[x as usize] = true;
    }
    let union_size = in_union.iter().filter(|&&b| b).count();
    let w = m + p + q - union_size;

    let minimal = a_st <= 1 && a_tu <= 1 && a_su <= 1;
    let case_label = if !minimal {
        CaseLabel::ViolatesMinimalDisjointness
    } else {
        match (a_st == 1, a_tu == 1, a_su == 1) {
            (false, false, false) => CaseLabel::I,
            (true, false, false) => CaseLabel::II,
            (false, true, false) => CaseLabel::III,
            (false, false, true) => CaseLabel::IV,
            (true, false, true) => CaseLabel::VI,
            (true, true, false) => CaseLabel::VII,
            (false, true, true) => CaseLabel::VIII,
            (true, true, true) => {
                // with every pairwise intersection a single element, either
                // one element lies in all three sets or the three are distinct
                let common = s.elements().iter().any(|&x| t.contains(x) && u.contains(x));
                if common {
                    CaseLabel::V
                } else {
                    CaseLabel::IX
                }
            }
        }
    };

    Ok(DisjointnessReport {
        n: g.order(),
        m,
        p,
        q,
        a_st,
        a_tu,
        a_su,
        w,
        case_label,
        union_size,
        r: g.order() - union_size,
        minimal_disjointness: minimal,
    })
}

/// The six arrangements `(S,T,U), (S,U,T), (T,S,U), (T,U,S), (U,S,T), (U,T,S)`.
pub fn sym3_orbit(triple: &TppTriple) -> [TppTriple; 6] {
    let (s, t, u) = (&triple.s, &triple.t, &triple.u);
    let mk = |a: &Subset, b: &Subset, c: &Subset| TppTriple::new(a.clone(), b.clone(), c.clone());
    [
        mk(s, t, u),
        mk(s, u, t),
        mk(t, s, u),
        mk(t, u, s),
        mk(u, s, t),
        mk(u, t, s),
    ]
}

/// Lexicographically least arrangement of the triple. Two triples are
/// permutations of each other iff their canonical forms agree.
pub fn canonicalize(triple: &TppTriple) -> TppTriple {
    let mut parts = [triple.s.clone(), triple.t.clone(), triple.u.clone()];
    parts.sort();
    let [s, t, u] = parts;
    TppTriple::new(s, t, u)
}

pub fn is_canonical(triple: &TppTriple) -> bool {
    triple.s <= triple.t && triple.t <= triple.u
}
