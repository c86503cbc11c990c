//! The free associative algebra K<x_1, ..., x_n, z>, its K[z]-endomorphisms,
//! and the x-degree grading.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{CommPoly, Monomial, Ring};
use crate::scalar::{Field, Scalar};

/// A generator of the free algebra. `X(i)` is x_{i+1}; `Z` is the fixed variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X(usize),
    Z,
}

/// A monomial of the free algebra; the empty word is 1.
///
/// Words are ordered by length, then lexicographically with x_1 < ... < x_n < z.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn one() -> Word {
        Word(Vec::new())
    }

    pub fn z_pow(k: usize) -> Word {
        Word(vec![Letter::Z; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn x_degree(&self) -> usize {
        self.0.iter().filter(|l| matches!(l, Letter::X(_))).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_z_power(&self) -> bool {
        self.0.iter().all(|l| *l == Letter::Z)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Names and field of a free algebra K<x_1..x_n, z>.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraCtx {
    field: Field,
    x_names: Vec<String>,
    z_name: String,
}

impl AlgebraCtx {
    pub fn new<S: AsRef<str>>(field: Field, x_names: &[S], z_name: &str) -> Result<Arc<AlgebraCtx>> {
        if x_names.is_empty() {
            return Err(Error::Domain("at least one X-variable is required".into()));
        }
        let x_names: Vec<String> = x_names.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, name) in x_names.iter().enumerate() {
            if name == z_name || x_names[..k].contains(name) {
                return Err(Error::Domain(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Arc::new(AlgebraCtx {
            field,
            x_names,
            z_name: z_name.to_string(),
        }))
    }

    /// Variables x, y, t for n <= 3 (the first n of them), x1..xn otherwise; z fixed.
    pub fn standard(field: Field, n: usize) -> Arc<AlgebraCtx> {
        let names: Vec<String> = if n <= 3 {
            ["x", "y", "t"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        AlgebraCtx::new(field, &names, "z").expect("standard names are distinct")
    }

    /// The same algebra with one more X-variable appended.
    pub fn extend(&self, name: &str) -> Result<Arc<AlgebraCtx>> {
        let mut names = self.x_names.clone();
        names.push(name.to_string());
        AlgebraCtx::new(self.field, &names, &self.z_name)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.x_names.len()
    }

    pub fn x_names(&self) -> &[String] {
        &self.x_names
    }

    pub fn z_name(&self) -> &str {
        &self.z_name
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        match l {
            Letter::X(i) => &self.x_names[i],
            Letter::Z => &self.z_name,
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        if name == self.z_name {
            return Some(Letter::Z);
        }
        self.x_names.iter().position(|s| s == name).map(Letter::X)
    }

    /// K[z] over the same field.
    pub fn z_ring(&self) -> Arc<Ring> {
        Ring::univariate(self.field)
    }

    /// K[z1, z2] over the same field.
    pub fn bi_ring(&self) -> Arc<Ring> {
        Ring::bivariate(self.field)
    }
}

/// A noncommutative polynomial: a finite linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPoly {
    ctx: Arc<AlgebraCtx>,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(ctx: &Arc<AlgebraCtx>) -> NCPoly {
        NCPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<AlgebraCtx>) -> NCPoly {
        NCPoly::monomial(ctx, ctx.field.one(), Word::one())
    }

    pub fn constant(ctx: &Arc<AlgebraCtx>, c: Scalar) -> NCPoly {
        NCPoly::monomial(ctx, c, Word::one())
    }

    pub fn letter(ctx: &Arc<AlgebraCtx>, l: Letter) -> NCPoly {
        NCPoly::monomial(ctx, ctx.field.one(), Word(vec![l]))
    }

    pub fn x(ctx: &Arc<AlgebraCtx>, i: usize) -> NCPoly {
        assert!(i < ctx.n(), "x index out of range");
        NCPoly::letter(ctx, Letter::X(i))
    }

    pub fn z(ctx: &Arc<AlgebraCtx>) -> NCPoly {
        NCPoly::letter(ctx, Letter::Z)
    }

    pub fn monomial(ctx: &Arc<AlgebraCtx>, c: Scalar, w: Word) -> NCPoly {
        let mut p = NCPoly::zero(ctx);
        p.add_term(w, c);
        p
    }

    pub fn from_terms(ctx: &Arc<AlgebraCtx>, terms: impl IntoIterator<Item = (Word, Scalar)>) -> NCPoly {
        let mut p = NCPoly::zero(ctx);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Embeds a polynomial of K[z] as a polynomial in the letter z.
    pub fn from_z_poly(ctx: &Arc<AlgebraCtx>, p: &CommPoly) -> Result<NCPoly> {
        if p.ring().nvars() != 1 || p.field() != ctx.field {
            return Err(Error::Context("expected a polynomial of K[z] over the algebra's field".into()));
        }
        Ok(NCPoly::from_terms(
            ctx,
            p.terms().map(|(m, c)| (Word::z_pow(m.0[0] as usize), c.clone())),
        ))
    }

    pub fn ctx(&self) -> &Arc<AlgebraCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.ctx.field.zero())
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(w, s);
        }
    }

    fn check_ctx(&self, other: &NCPoly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::Context("noncommutative polynomials from different algebras".into()))
        }
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_ctx(other)?;
        let mut out = NCPoly::zero(&self.ctx);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        NCPoly::from_terms(&self.ctx, self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        let mut acc = NCPoly::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Re-homes the polynomial into `ctx`, mapping x_i to x_i. `ctx` must have at
    /// least as many X-variables and the same field.
    pub fn embed(&self, ctx: &Arc<AlgebraCtx>) -> Result<NCPoly> {
        if ctx.field != self.ctx.field || ctx.n() < self.ctx.n() {
            return Err(Error::Context("cannot embed into a smaller algebra".into()));
        }
        Ok(NCPoly {
            ctx: ctx.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Splits into x-degree 0, exactly 1, and at least 2 parts.
    pub fn x_split(&self) -> XDegreeSplit {
        let mut parts = [
            NCPoly::zero(&self.ctx),
            NCPoly::zero(&self.ctx),
            NCPoly::zero(&self.ctx),
        ];
        for (w, c) in &self.terms {
            parts[w.x_degree().min(2)].terms.insert(w.clone(), c.clone());
        }
        let [f0, f1, f2] = parts;
        XDegreeSplit { f0, f1, f2 }
    }

    /// Text of one term, for diagnostics.
    pub fn term_string(&self, w: &Word, c: &Scalar) -> String {
        NCPoly::monomial(&self.ctx, c.clone(), w.clone()).to_string()
    }
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        self.checked_add(rhs).expect("algebra mismatch")
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self.checked_sub(rhs).expect("algebra mismatch")
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.checked_mul(rhs).expect("algebra mismatch")
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

pub(crate) fn write_word(f: &mut impl fmt::Write, ctx: &AlgebraCtx, w: &Word) -> fmt::Result {
    let mut first = true;
    let mut k = 0;
    while k < w.0.len() {
        let l = w.0[k];
        let run = w.0[k..].iter().take_while(|&&m| m == l).count();
        if !first {
            f.write_char(' ')?;
        }
        first = false;
        f.write_str(ctx.letter_name(l))?;
        if run > 1 {
            write!(f, "^{run}")?;
        }
        k += run;
    }
    Ok(())
}

/// Words in increasing order, runs of a letter collapsed to powers:
/// `x + z x z - z^2 y`.
impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            write_word(f, &self.ctx, w)?;
        }
        Ok(())
    }
}

/// x-degree grading of a polynomial: `f0 + f1 + f2` reconstructs it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XDegreeSplit {
    pub f0: NCPoly,
    pub f1: NCPoly,
    pub f2: NCPoly,
}

/// A K[z]-endomorphism, given by the images of x_1..x_n; z is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KzEndo {
    ctx: Arc<AlgebraCtx>,
    images: Vec<NCPoly>,
}

impl KzEndo {
    pub fn new(ctx: &Arc<AlgebraCtx>, images: Vec<NCPoly>) -> Result<KzEndo> {
        if images.len() != ctx.n() {
            return Err(Error::Dimension {
                expected: ctx.n(),
                found: images.len(),
            });
        }
        if images.iter().any(|f| f.ctx != *ctx) {
            return Err(Error::Context("endomorphism image from a different algebra".into()));
        }
        Ok(KzEndo {
            ctx: ctx.clone(),
            images,
        })
    }

    pub fn identity(ctx: &Arc<AlgebraCtx>) -> KzEndo {
        KzEndo {
            ctx: ctx.clone(),
            images: (0..ctx.n()).map(|i| NCPoly::x(ctx, i)).collect(),
        }
    }

    pub fn ctx(&self) -> &Arc<AlgebraCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[NCPoly] {
        &self.images
    }

    pub fn image(&self, j: usize) -> &NCPoly {
        &self.images[j]
    }

    pub fn is_identity(&self) -> bool {
        *self == KzEndo::identity(&self.ctx)
    }

    /// Applies the endomorphism to `f`.
    pub fn apply(&self, f: &NCPoly) -> Result<NCPoly> {
        if f.ctx != self.ctx {
            return Err(Error::Context("polynomial and endomorphism from different algebras".into()));
        }
        let z = NCPoly::z(&self.ctx);
        let mut out = NCPoly::zero(&self.ctx);
        for (w, c) in &f.terms {
            let mut t = NCPoly::constant(&self.ctx, c.clone());
            for l in &w.0 {
                t = match l {
                    Letter::X(i) => &t * &self.images[*i],
                    Letter::Z => &t * &z,
                };
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// The same endomorphism over a larger algebra, fixing the new variables.
    pub fn extend_to(&self, ctx: &Arc<AlgebraCtx>) -> Result<KzEndo> {
        let mut images = self
            .images
            .iter()
            .map(|f| f.embed(ctx))
            .collect::<Result<Vec<_>>>()?;
        images.extend((self.n()..ctx.n()).map(|i| NCPoly::x(ctx, i)));
        KzEndo::new(ctx, images)
    }

    /// The x-degree-one part of every image.
    pub fn linear_part(&self) -> KzEndo {
        KzEndo {
            ctx: self.ctx.clone(),
            images: self.images.iter().map(|f| f.x_split().f1).collect(),
        }
    }

    /// Cell `(i, j)` lists the pairs `(b, c)` with `b(z) x_i c(z)` a term of
    /// image `j`; the scalar coefficient is carried by `b`.
    pub fn linear_profile(&self) -> Result<Vec<Vec<Vec<(CommPoly, CommPoly)>>>> {
        let n = self.n();
        let ring = self.ctx.z_ring();
        let mut cells = vec![vec![Vec::new(); n]; n];
        for (j, f) in self.images.iter().enumerate() {
            for (w, c) in &f.terms {
                if w.x_degree() != 1 {
                    return Err(Error::NotXLinear {
                        image: j + 1,
                        term: f.term_string(w, c),
                    });
                }
                let pos = w.0.iter().position(|l| matches!(l, Letter::X(_))).unwrap();
                let Letter::X(i) = w.0[pos] else { unreachable!() };
                let left = pos as u32;
                let right = (w.len() - pos - 1) as u32;
                cells[i][j].push((
                    CommPoly::term(&ring, c.clone(), Monomial(vec![left])),
                    CommPoly::term(&ring, self.ctx.field.one(), Monomial(vec![right])),
                ));
            }
        }
        Ok(cells)
    }
}

/// The endomorphism `x -> phi(psi(x))`.
pub fn compose(phi: &KzEndo, psi: &KzEndo) -> Result<KzEndo> {
    if phi.ctx != psi.ctx {
        return Err(Error::Context("composing endomorphisms of different algebras".into()));
    }
    let images = psi
        .images
        .iter()
        .map(|g| phi.apply(g))
        .collect::<Result<Vec<_>>>()?;
    KzEndo::new(&phi.ctx, images)
}

/// Rebuilds an endomorphism from a linear profile.
pub fn endo_from_profile(
    ctx: &Arc<AlgebraCtx>,
    cells: &[Vec<Vec<(CommPoly, CommPoly)>>],
) -> Result<KzEndo> {
    let n = ctx.n();
    let mut images = vec![NCPoly::zero(ctx); n];
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for (b, c) in cell {
                let t = &(&NCPoly::from_z_poly(ctx, b)? * &NCPoly::x(ctx, i)) * &NCPoly::from_z_poly(ctx, c)?;
                images[j] = &images[j] + &t;
            }
        }
    }
    KzEndo::new(ctx, images)
}
