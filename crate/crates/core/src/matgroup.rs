//! Square matrices over commutative polynomial rings: determinants, the GE_2
//! membership test by leading-term elimination, Euclidean decomposition over
//! K[z], elementary transcripts and their verification, and 3x3 stabilization.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{term_divide, CommPoly, MonomialOrder, Ring};
use crate::scalar::Scalar;

/// Upper bound on elimination steps for the n x n heuristic.
const HEURISTIC_STEP_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: Vec<Vec<CommPoly>>,
}

impl PolyMatrix {
    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<CommPoly>>) -> Result<PolyMatrix> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|p| p.ring() != ring) {
                return Err(Error::Context("matrix entries from different rings".into()));
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows,
        })
    }

    pub fn zero(ring: &Arc<Ring>, n: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            rows: vec![vec![CommPoly::zero(ring); n]; n],
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ring, n);
        for i in 0..n {
            m.rows[i][i] = CommPoly::one(ring);
        }
        m
    }

    pub fn diag(ring: &Arc<Ring>, units: &[Scalar]) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ring, units.len());
        for (i, u) in units.iter().enumerate() {
            m.rows[i][i] = CommPoly::constant(ring, u.clone());
        }
        m
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &CommPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CommPoly) {
        assert_eq!(p.ring(), &self.ring);
        self.rows[i][j] = p;
    }

    pub fn rows(&self) -> &[Vec<CommPoly>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMatrix::identity(&self.ring, self.n())
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.ring != other.ring {
            return Err(Error::Context("matrix product across rings".into()));
        }
        if self.n() != other.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: other.n(),
            });
        }
        let n = self.n();
        let mut out = PolyMatrix::zero(&self.ring, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = CommPoly::zero(&self.ring);
                for k in 0..n {
                    if !self.rows[i][k].is_zero() && !other.rows[k][j].is_zero() {
                        acc = &acc + &(&self.rows[i][k] * &other.rows[k][j]);
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        Ok(out)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        PolyMatrix {
            ring: self.ring.clone(),
            rows,
        }
    }

    /// Laplace expansion along the first row.
    pub fn det(&self) -> CommPoly {
        match self.n() {
            0 => CommPoly::one(&self.ring),
            1 => self.rows[0][0].clone(),
            2 => &(&self.rows[0][0] * &self.rows[1][1]) - &(&self.rows[0][1] * &self.rows[1][0]),
            n => {
                let mut acc = CommPoly::zero(&self.ring);
                for j in 0..n {
                    if self.rows[0][j].is_zero() {
                        continue;
                    }
                    let t = &self.rows[0][j] * &self.minor(0, j).det();
                    acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                acc
            }
        }
    }

    pub fn adjugate(&self) -> PolyMatrix {
        let n = self.n();
        let mut out = PolyMatrix::zero(&self.ring, n);
        if n == 1 {
            out.rows[0][0] = CommPoly::one(&self.ring);
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det();
                out.rows[i][j] = if (i + j) % 2 == 0 { c } else { -&c };
            }
        }
        out
    }

    /// True iff the determinant is a unit of the polynomial ring, i.e. a nonzero constant.
    pub fn is_gl(&self) -> bool {
        self.det().as_unit().is_some()
    }

    /// The inverse matrix, when it exists over the polynomial ring.
    pub fn inverse(&self) -> Result<PolyMatrix> {
        let det = self.det();
        let u = det.as_unit().ok_or_else(|| Error::NotInvertible { det: det.to_string() })?;
        let inv = u.inv().expect("unit");
        let mut adj = self.adjugate();
        for row in adj.rows.iter_mut() {
            for p in row.iter_mut() {
                *p = p.scale(&inv);
            }
        }
        Ok(adj)
    }

    /// Entrywise ring homomorphism into the common ring of `images`.
    pub fn subst(&self, images: &[CommPoly]) -> Result<PolyMatrix> {
        let target = images
            .first()
            .map(|p| p.ring().clone())
            .ok_or_else(|| Error::Context("empty substitution".into()))?;
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.subst(images)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(&target, rows)
    }

    /// Block embedding `diag(self, I)` of size `n`.
    pub fn embed(&self, n: usize) -> PolyMatrix {
        assert!(n >= self.n());
        let mut out = PolyMatrix::identity(&self.ring, n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                out.rows[i][j] = p.clone();
            }
        }
        out
    }

    fn row_axpy(&mut self, target: usize, factor: &CommPoly, source: usize) {
        // row[target] -= factor * row[source]
        for k in 0..self.n() {
            if self.rows[source][k].is_zero() {
                continue;
            }
            let d = factor * &self.rows[source][k];
            self.rows[target][k] = &self.rows[target][k] - &d;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }
}

/// One row per line: `[1+z1*z2, z2^2]`.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A generator of GE_n. Indices are 0-based; text forms are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `I + p * e_{ij}`, `i != j`.
    Elem(usize, usize, CommPoly),
    /// Diagonal matrix of nonzero constants.
    Diag(Vec<Scalar>),
    /// Row/column permutation of `i` and `j`.
    Swap(usize, usize),
}

impl Factor {
    pub fn to_matrix(&self, ring: &Arc<Ring>, n: usize) -> PolyMatrix {
        match self {
            Factor::Elem(i, j, p) => {
                let mut m = PolyMatrix::identity(ring, n);
                m.rows[*i][*j] = p.clone();
                m
            }
            Factor::Diag(units) => PolyMatrix::diag(ring, units),
            Factor::Swap(i, j) => {
                let mut m = PolyMatrix::identity(ring, n);
                m.swap_rows(*i, *j);
                m
            }
        }
    }

    /// Rewrites `Swap` as `E_ij(1) E_ji(-1) E_ij(1) D` with `-1` at position `i`.
    pub fn expand(&self, ring: &Arc<Ring>, n: usize) -> Vec<Factor> {
        match self {
            Factor::Swap(i, j) => {
                let one = CommPoly::one(ring);
                let mut units = vec![ring.field().one(); n];
                units[*i] = -ring.field().one();
                vec![
                    Factor::Elem(*i, *j, one.clone()),
                    Factor::Elem(*j, *i, -&one),
                    Factor::Elem(*i, *j, one),
                    Factor::Diag(units),
                ]
            }
            f => vec![f.clone()],
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = match self {
            Factor::Elem(i, j, _) | Factor::Swap(i, j) => *i < n && *j < n && i != j,
            Factor::Diag(u) => u.len() == n && u.iter().all(|c| !c.is_zero()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("factor `{self}` is not a valid {n}x{n} generator")))
        }
    }

    /// The same generator inside a larger identity block.
    pub fn embed(&self, ring: &Arc<Ring>, n: usize) -> Factor {
        match self {
            Factor::Diag(u) => {
                let mut u = u.clone();
                u.resize(n, ring.field().one());
                Factor::Diag(u)
            }
            f => f.clone(),
        }
    }
}

/// `E i j <poly>`, `D <unit> ...`, `S i j`.
impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Elem(i, j, p) => write!(f, "E {} {} {}", i + 1, j + 1, p),
            Factor::Diag(u) => {
                write!(f, "D")?;
                for c in u {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
            Factor::Swap(i, j) => write!(f, "S {} {}", i + 1, j + 1),
        }
    }
}

/// An ordered factor list; certifies the left-to-right product of its factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transcript {
    pub n: usize,
    pub factors: Vec<Factor>,
}

impl Transcript {
    pub fn empty(n: usize) -> Transcript {
        Transcript { n, factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, ring: &Arc<Ring>) -> Result<PolyMatrix> {
        let mut acc = PolyMatrix::identity(ring, self.n);
        for f in &self.factors {
            f.check(self.n)?;
            if let Factor::Elem(_, _, p) = f {
                if p.ring() != ring {
                    return Err(Error::Context("transcript factor over a different ring".into()));
                }
            }
            acc = acc.checked_mul(&f.to_matrix(ring, self.n))?;
        }
        Ok(acc)
    }

    /// Swaps rewritten into elementary and diagonal factors.
    pub fn expanded(&self, ring: &Arc<Ring>) -> Transcript {
        Transcript {
            n: self.n,
            factors: self.factors.iter().flat_map(|f| f.expand(ring, self.n)).collect(),
        }
    }

    pub fn embed(&self, ring: &Arc<Ring>, n: usize) -> Transcript {
        Transcript {
            n,
            factors: self.factors.iter().map(|f| f.embed(ring, n)).collect(),
        }
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

/// Whether the left-to-right product of `t` equals `m` exactly.
pub fn verify_transcript(t: &Transcript, m: &PolyMatrix) -> Result<bool> {
    if t.n != m.n() {
        return Err(Error::Dimension {
            expected: m.n(),
            found: t.n,
        });
    }
    Ok(t.product(m.ring())? == *m)
}

fn require_gl(m: &PolyMatrix) -> Result<Scalar> {
    let det = m.det();
    det.as_unit().ok_or_else(|| Error::NotInvertible { det: det.to_string() })
}

fn require_size(m: &PolyMatrix, n: usize) -> Result<()> {
    if m.n() == n {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: n,
            found: m.n(),
        })
    }
}

/// Collects left row operations: the input equals `prefix * work`.
struct Reduction {
    ring: Arc<Ring>,
    work: PolyMatrix,
    prefix: Vec<Factor>,
}

impl Reduction {
    fn new(m: &PolyMatrix) -> Reduction {
        Reduction {
            ring: m.ring.clone(),
            work: m.clone(),
            prefix: Vec::new(),
        }
    }

    /// row[target] -= q * row[source], recording `E_{target,source}(q)`.
    fn subtract(&mut self, target: usize, q: CommPoly, source: usize) {
        self.work.row_axpy(target, &q, source);
        self.prefix.push(Factor::Elem(target, source, q));
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.work.swap_rows(a, b);
        self.prefix.push(Factor::Swap(a, b));
    }

    /// Closes a 2x2 reduction whose work matrix is upper triangular with unit diagonal.
    fn finish_triangular(mut self) -> Result<Transcript> {
        let a = self.work.rows[0][0].as_unit();
        let d = self.work.rows[1][1].as_unit();
        let (Some(a), Some(d)) = (a, d) else {
            return Err(Error::NotInvertible { det: self.work.det().to_string() });
        };
        let b = self.work.rows[0][1].clone();
        if !b.is_zero() {
            self.prefix.push(Factor::Elem(0, 1, b.scale(&d.inv().unwrap())));
        }
        if !(a.is_one() && d.is_one()) {
            self.prefix.push(Factor::Diag(vec![a, d]));
        }
        Ok(Transcript {
            n: 2,
            factors: self.prefix,
        })
    }

    /// Closes an n x n reduction whose work matrix is diagonal.
    fn finish_diagonal(mut self) -> Transcript {
        let n = self.work.n();
        let units: Vec<Scalar> = (0..n)
            .map(|i| self.work.rows[i][i].as_unit().expect("diagonal of units"))
            .collect();
        if units.iter().any(|u| !u.is_one()) {
            self.prefix.push(Factor::Diag(units));
        }
        Transcript {
            n,
            factors: self.prefix,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ge2Verdict {
    /// Product equals the input.
    Tame(Transcript),
    /// Reduced matrix whose first-column leading terms are mutually indivisible.
    Wild(PolyMatrix),
}

/// Decides membership in GE_2 by leading-term elimination on the first column.
pub fn ge2_decide(m: &PolyMatrix, ord: &MonomialOrder) -> Result<Ge2Verdict> {
    require_size(m, 2)?;
    require_gl(m)?;
    if ord.priority.len() != m.ring.nvars() {
        return Err(Error::Context("monomial order arity differs from the ring".into()));
    }
    let mut red = Reduction::new(m);
    loop {
        let a = &red.work.rows[0][0];
        let c = &red.work.rows[1][0];
        if c.is_zero() {
            return red.finish_triangular().map(Ge2Verdict::Tame);
        }
        if a.is_zero() {
            red.swap(0, 1);
            continue;
        }
        let (ac, am) = a.leading_term(ord)?;
        let (cc, cm) = c.leading_term(ord)?;
        if let Some((qc, qm)) = term_divide((&ac, &am), (&cc, &cm)) {
            let q = CommPoly::term(&red.ring, qc, qm);
            red.subtract(0, q, 1);
        } else if let Some((qc, qm)) = term_divide((&cc, &cm), (&ac, &am)) {
            let q = CommPoly::term(&red.ring, qc, qm);
            red.subtract(1, q, 0);
        } else {
            return Ok(Ge2Verdict::Wild(red.work));
        }
    }
}

/// Checks the wildness witness condition: both first-column entries nonzero
/// with mutually indivisible leading monomials under `ord`.
pub fn is_stuck(w: &PolyMatrix, ord: &MonomialOrder) -> bool {
    let (a, c) = (&w.rows[0][0], &w.rows[1][0]);
    match (a.leading_term(ord), c.leading_term(ord)) {
        (Ok((_, am)), Ok((_, cm))) => !am.divides(&cm) && !cm.divides(&am),
        _ => false,
    }
}

/// Decomposes an invertible 2x2 matrix over K[z] by the Euclidean algorithm.
pub fn gl2_univariate_decompose(m: &PolyMatrix) -> Result<Transcript> {
    require_size(m, 2)?;
    if m.ring.nvars() != 1 {
        return Err(Error::Context("univariate decomposition needs a matrix over K[z]".into()));
    }
    require_gl(m)?;
    let mut red = Reduction::new(m);
    loop {
        let a = red.work.rows[0][0].clone();
        let c = red.work.rows[1][0].clone();
        if c.is_zero() {
            return red.finish_triangular();
        }
        if a.is_zero() {
            red.swap(0, 1);
            continue;
        }
        if a.total_degree() >= c.total_degree() {
            let (q, _) = a.div_rem_univariate(&c)?;
            red.subtract(0, q, 1);
        } else {
            let (q, _) = c.div_rem_univariate(&a)?;
            red.subtract(1, q, 0);
        }
    }
}

/// Greedy column-by-column leading-term elimination for any n. Returns a
/// transcript when the matrix reduces to a diagonal one.
pub fn eliminate(m: &PolyMatrix, ord: &MonomialOrder) -> Result<Option<Transcript>> {
    require_gl(m)?;
    let n = m.n();
    let mut red = Reduction::new(m);
    let mut steps = 0usize;
    for k in 0..n {
        loop {
            steps += 1;
            if steps > HEURISTIC_STEP_LIMIT {
                return Ok(None);
            }
            let live: Vec<usize> = (k..n).filter(|&r| !red.work.rows[r][k].is_zero()).collect();
            if let Some(&pivot) = live.iter().find(|&&r| red.work.rows[r][k].as_unit().is_some()) {
                let u = red.work.rows[pivot][k].as_unit().unwrap();
                let inv = u.inv().unwrap();
                for &r in live.iter().filter(|&&r| r != pivot) {
                    let q = red.work.rows[r][k].scale(&inv);
                    red.subtract(r, q, pivot);
                }
                if pivot != k {
                    red.swap(k, pivot);
                }
                break;
            }
            // Reduce the entry with the largest leading monomial by any other.
            let mut leads: Vec<(usize, Scalar, crate::poly::Monomial)> = live
                .iter()
                .map(|&r| {
                    let (c, mm) = red.work.rows[r][k].leading_term(ord).unwrap();
                    (r, c, mm)
                })
                .collect();
            leads.sort_by(|a, b| ord.cmp(&b.2, &a.2));
            let mut step = None;
            'search: for (r, rc, rm) in &leads {
                for (s, sc, sm) in &leads {
                    if r == s {
                        continue;
                    }
                    if let Some((qc, qm)) = term_divide((rc, rm), (sc, sm)) {
                        step = Some((*r, CommPoly::term(&red.ring, qc, qm), *s));
                        break 'search;
                    }
                }
            }
            match step {
                Some((r, q, s)) => red.subtract(r, q, s),
                None => return Ok(None),
            }
        }
        let u = red.work.rows[k][k].as_unit().expect("unit pivot");
        let inv = u.inv().unwrap();
        for p in 0..k {
            if !red.work.rows[p][k].is_zero() {
                let q = red.work.rows[p][k].scale(&inv);
                red.subtract(p, q, k);
            }
        }
    }
    Ok(Some(red.finish_diagonal()))
}

/// The printed Mennicke sequence `E13(-q)E23(-p)E31(p)E32(-q)E13(q)E23(p)E31(-p)E32(q)`
/// with the parameters `p`, `q` in place of z1, z2.
///
/// Its product is `diag(C(-p, q), 1)` where `C(a, b) = [[1+ab, b^2], [-a^2, 1-ab]]`.
pub fn mennicke_factors(p: &CommPoly, q: &CommPoly) -> Vec<Factor> {
    let (np, nq) = (-p, -q);
    vec![
        Factor::Elem(0, 2, nq.clone()),
        Factor::Elem(1, 2, np.clone()),
        Factor::Elem(2, 0, p.clone()),
        Factor::Elem(2, 1, nq),
        Factor::Elem(0, 2, q.clone()),
        Factor::Elem(1, 2, p.clone()),
        Factor::Elem(2, 0, np),
        Factor::Elem(2, 1, q.clone()),
    ]
}

/// `C(a, b) = [[1+ab, b^2], [-a^2, 1-ab]]`, determinant 1.
pub fn cohn_matrix(a: &CommPoly, b: &CommPoly) -> PolyMatrix {
    let ring = a.ring().clone();
    let one = CommPoly::one(&ring);
    let ab = a * b;
    PolyMatrix {
        ring,
        rows: vec![
            vec![&one + &ab, b * b],
            vec![-&(a * a), &one - &ab],
        ],
    }
}

/// Recovers `(a, b)` with `m = C(a, b)`, if `m` belongs to the Cohn family.
pub fn cohn_parameters(m: &PolyMatrix) -> Option<(CommPoly, CommPoly)> {
    if m.n() != 2 {
        return None;
    }
    let b = m.rows[0][1].sqrt()?;
    let s = (-&m.rows[1][0]).sqrt()?;
    [s.clone(), -&s]
        .into_iter()
        .map(|a| (a, b.clone()))
        .find(|(a, b)| cohn_matrix(a, b) == *m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilized {
    /// 3x3 transcript whose product is `diag(M, 1)`.
    Tame(Transcript),
    Unknown,
}

/// Decomposes `diag(M, 1)` into 3x3 elementary and diagonal factors.
pub fn stabilize3(m: &PolyMatrix, ord: &MonomialOrder) -> Result<Stabilized> {
    require_size(m, 2)?;
    require_gl(m)?;
    if m.is_identity() {
        return Ok(Stabilized::Tame(Transcript::empty(3)));
    }
    if let Ge2Verdict::Tame(t) = ge2_decide(m, ord)? {
        return Ok(Stabilized::Tame(t.embed(&m.ring, 3)));
    }
    if let Some((a, b)) = cohn_parameters(m) {
        return Ok(Stabilized::Tame(Transcript {
            n: 3,
            factors: mennicke_factors(&-&a, &b),
        }));
    }
    Ok(match eliminate(&m.embed(3), ord)? {
        Some(t) => Stabilized::Tame(t),
        None => Stabilized::Unknown,
    })
}

/// Matrix-level verdict for an invertible n x n matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixVerdict {
    Tame(Transcript),
    Wild(PolyMatrix),
    /// n >= 3: in GE_n by Suslin's theorem, but no transcript was found.
    TameByTheorem,
}

pub fn decide_ge(m: &PolyMatrix, ord: &MonomialOrder) -> Result<MatrixVerdict> {
    match m.n() {
        1 => {
            let u = require_gl(m)?;
            Ok(MatrixVerdict::Tame(Transcript {
                n: 1,
                factors: if u.is_one() { vec![] } else { vec![Factor::Diag(vec![u])] },
            }))
        }
        2 => Ok(match ge2_decide(m, ord)? {
            Ge2Verdict::Tame(t) => MatrixVerdict::Tame(t),
            Ge2Verdict::Wild(w) => MatrixVerdict::Wild(w),
        }),
        _ => Ok(match eliminate(m, ord)? {
            Some(t) => MatrixVerdict::Tame(t),
            None => MatrixVerdict::TameByTheorem,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::OrderKind;
    use crate::scalar::Field;

    fn q2() -> Arc<Ring> {
        Ring::bivariate(Field::Rational)
    }

    fn zv(r: &Arc<Ring>, i: usize) -> CommPoly {
        CommPoly::var(r, i)
    }

    fn cohn(r: &Arc<Ring>) -> PolyMatrix {
        cohn_matrix(&zv(r, 0), &zv(r, 1))
    }

    fn all_orders() -> Vec<MonomialOrder> {
        let mut v = Vec::new();
        for kind in [OrderKind::DegLex, OrderKind::Lex] {
            for pr in [vec![0, 1], vec![1, 0]] {
                v.push(MonomialOrder::new(kind, pr).unwrap());
            }
        }
        v
    }

    #[test]
    fn determinants() {
        let r = q2();
        for n in 1..5 {
            assert!(PolyMatrix::identity(&r, n).det().is_one());
        }
        let c = cohn(&r);
        assert_eq!(c.to_string(), "[1+z1*z2, z2^2]\n[-z1^2, 1-z1*z2]");
        assert!(c.det().is_one());
        let mut printed = c.clone();
        printed.set(1, 0, zv(&r, 0).pow(2));
        assert_eq!(printed.det().to_string(), "1-2*z1^2*z2^2");
        assert!(!printed.is_gl());
    }

    #[test]
    fn general_linear_membership() {
        let r = q2();
        let q = Field::Rational;
        assert!(PolyMatrix::diag(&r, &[q.int(2), q.int(3)]).is_gl());
        let mut m = PolyMatrix::identity(&r, 2);
        m.set(0, 0, zv(&r, 0));
        assert!(!m.is_gl());
        assert!(cohn(&r).is_gl());
        assert!(matches!(ge2_decide(&m, &MonomialOrder::deglex(2)), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn three_by_three_det_and_adjugate() {
        let r = q2();
        let m = cohn(&r).embed(3);
        assert!(m.det().is_one());
        let inv = m.inverse().unwrap();
        assert!(m.checked_mul(&inv).unwrap().is_identity());
        let ci = cohn(&r).inverse().unwrap();
        assert_eq!(ci.to_string(), "[1-z1*z2, -z2^2]\n[z1^2, 1+z1*z2]");
    }

    #[test]
    fn cohn_matrix_is_wild_in_every_order() {
        let r = q2();
        for ord in all_orders() {
            match ge2_decide(&cohn(&r), &ord).unwrap() {
                Ge2Verdict::Wild(w) => {
                    assert_eq!(w, cohn(&r), "stuck immediately");
                    assert!(is_stuck(&w, &ord));
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn tame_round_trip() {
        let r = q2();
        let q = Field::Rational;
        let p = &zv(&r, 0).pow(2) * &zv(&r, 1);
        let s = CommPoly::term(&r, q.int(3), crate::poly::Monomial(vec![0, 3]));
        let t = Transcript {
            n: 2,
            factors: vec![
                Factor::Elem(1, 0, p),
                Factor::Diag(vec![q.one(), q.int(-1)]),
                Factor::Elem(0, 1, s),
            ],
        };
        let m = t.product(&r).unwrap();
        for ord in all_orders() {
            match ge2_decide(&m, &ord).unwrap() {
                Ge2Verdict::Tame(out) => assert!(verify_transcript(&out, &m).unwrap()),
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn identity_has_empty_transcript() {
        let r = q2();
        let id = PolyMatrix::identity(&r, 2);
        assert_eq!(
            ge2_decide(&id, &MonomialOrder::deglex(2)).unwrap(),
            Ge2Verdict::Tame(Transcript::empty(2))
        );
        assert!(verify_transcript(&Transcript::empty(2), &id).unwrap());
        assert_eq!(stabilize3(&id, &MonomialOrder::deglex(2)).unwrap(), Stabilized::Tame(Transcript::empty(3)));
    }

    #[test]
    fn zero_corner_uses_swap() {
        let r = q2();
        let m = PolyMatrix::from_rows(
            &r,
            vec![
                vec![CommPoly::zero(&r), CommPoly::int(&r, 2)],
                vec![CommPoly::int(&r, 3), zv(&r, 0)],
            ],
        )
        .unwrap();
        let Ge2Verdict::Tame(t) = ge2_decide(&m, &MonomialOrder::deglex(2)).unwrap() else { panic!() };
        assert!(t.factors.iter().any(|f| matches!(f, Factor::Swap(..))));
        assert!(verify_transcript(&t, &m).unwrap());
        let e = t.expanded(&r);
        assert!(e.factors.iter().all(|f| !matches!(f, Factor::Swap(..))));
        assert!(verify_transcript(&e, &m).unwrap());
    }

    #[test]
    fn swap_expansion_for_every_pair() {
        let r = q2();
        for n in 2..5 {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let s = Factor::Swap(i, j);
                    let t = Transcript { n, factors: s.expand(&r, n) };
                    assert_eq!(t.product(&r).unwrap(), s.to_matrix(&r, n));
                }
            }
        }
    }

    #[test]
    fn perturbed_transcript_fails() {
        let r = q2();
        let t = Transcript {
            n: 2,
            factors: vec![Factor::Elem(0, 1, zv(&r, 0)), Factor::Elem(1, 0, zv(&r, 1))],
        };
        let m = t.product(&r).unwrap();
        assert!(verify_transcript(&t, &m).unwrap());
        let mut bad = t.clone();
        bad.factors[1] = Factor::Elem(1, 0, &zv(&r, 1) + &CommPoly::one(&r));
        assert!(!verify_transcript(&bad, &m).unwrap());
        assert!(verify_transcript(&Transcript::empty(3), &m).is_err());
    }

    #[test]
    fn univariate_decomposition() {
        let r = Ring::univariate(Field::Rational);
        let z2 = CommPoly::var(&r, 0).pow(2);
        let one = CommPoly::one(&r);
        let m = PolyMatrix::from_rows(&r, vec![vec![&one + &z2, z2.clone()], vec![-&z2, &one - &z2]]).unwrap();
        let t = gl2_univariate_decompose(&m).unwrap();
        assert!(verify_transcript(&t, &m).unwrap());

        let q = Field::Rational;
        let d = PolyMatrix::diag(&r, &[q.int(2), q.int(5)]);
        let t = gl2_univariate_decompose(&d).unwrap();
        assert_eq!(t.factors, vec![Factor::Diag(vec![q.int(2), q.int(5)])]);

        assert!(gl2_univariate_decompose(&cohn(&q2())).is_err());
    }

    #[test]
    fn mennicke_product_is_twisted_cohn() {
        let r = q2();
        let (z1, z2) = (zv(&r, 0), zv(&r, 1));
        let t = Transcript { n: 3, factors: mennicke_factors(&z1, &z2) };
        assert_eq!(t.product(&r).unwrap(), cohn_matrix(&-&z1, &z2).embed(3));
    }

    #[test]
    fn stabilize_cohn_matrix() {
        let r = q2();
        let c = cohn(&r);
        assert_eq!(cohn_parameters(&c), Some((zv(&r, 0), zv(&r, 1))));
        match stabilize3(&c, &MonomialOrder::deglex(2)).unwrap() {
            Stabilized::Tame(t) => {
                assert_eq!(t.len(), 8);
                assert!(verify_transcript(&t, &c.embed(3)).unwrap());
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn stabilize_ge2_member_embeds() {
        let r = q2();
        let t = Transcript {
            n: 2,
            factors: vec![Factor::Elem(0, 1, zv(&r, 0).pow(2)), Factor::Elem(1, 0, zv(&r, 1))],
        };
        let m = t.product(&r).unwrap();
        let Stabilized::Tame(s) = stabilize3(&m, &MonomialOrder::deglex(2)).unwrap() else { panic!() };
        assert!(verify_transcript(&s, &m.embed(3)).unwrap());
    }

    #[test]
    fn heuristic_elimination_three_by_three() {
        let r = q2();
        let (z1, z2) = (zv(&r, 0), zv(&r, 1));
        let t = Transcript {
            n: 3,
            factors: vec![
                Factor::Elem(0, 2, &z1 * &z2),
                Factor::Elem(2, 1, z2.pow(2)),
                Factor::Elem(1, 0, &z1 + &CommPoly::one(&r)),
                Factor::Diag(vec![Field::Rational.int(2), Field::Rational.one(), Field::Rational.int(-1)]),
            ],
        };
        let m = t.product(&r).unwrap();
        let out = eliminate(&m, &MonomialOrder::deglex(2)).unwrap().unwrap();
        assert!(verify_transcript(&out, &m).unwrap());
        assert!(eliminate(&cohn(&r).embed(3), &MonomialOrder::deglex(2)).unwrap().is_none());
    }
}
