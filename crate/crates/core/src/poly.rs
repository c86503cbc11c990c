//! Commutative multivariate polynomials over a [`Field`], with deglex and lex
//! monomial orders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A polynomial ring K[v_1, ..., v_k]: the field and the variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S]) -> Arc<Ring> {
        Arc::new(Ring {
            field,
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        })
    }

    /// K[z].
    pub fn univariate(field: Field) -> Arc<Ring> {
        Ring::new(field, &["z"])
    }

    /// K[z1, z2], the ring receiving Jacobian entries of linear endomorphisms.
    pub fn bivariate(field: Field) -> Arc<Ring> {
        Ring::new(field, &["z1", "z2"])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Exponent vector, one slot per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self` componentwise.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    DegLex,
    Lex,
}

/// A monomial order: deglex or lex, comparing variables in `priority` order
/// (first entry is the most significant variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn deglex(nvars: usize) -> MonomialOrder {
        MonomialOrder {
            kind: OrderKind::DegLex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> MonomialOrder {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: (0..nvars).collect(),
        }
    }

    /// Fails unless `priority` is a permutation of `0..priority.len()`.
    pub fn new(kind: OrderKind, priority: Vec<usize>) -> Result<MonomialOrder> {
        let mut seen = vec![false; priority.len()];
        for &p in &priority {
            if p >= seen.len() || seen[p] {
                return Err(Error::Domain(format!(
                    "variable priority {priority:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let lex = || {
            self.priority
                .iter()
                .map(|&i| a.0[i].cmp(&b.0[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        match self.kind {
            OrderKind::DegLex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Lex => lex(),
        }
    }
}

/// Divides a term by another, returning the quotient term when the
/// denominator's monomial divides the numerator's.
pub fn term_divide(num: (&Scalar, &Monomial), den: (&Scalar, &Monomial)) -> Option<(Scalar, Monomial)> {
    let m = num.1.div(den.1)?;
    Some((num.0.checked_div(den.0).ok()?, m))
}

/// A commutative polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CommPoly {
    pub fn zero(ring: &Arc<Ring>) -> CommPoly {
        CommPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> CommPoly {
        CommPoly::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> CommPoly {
        CommPoly::term(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn int(ring: &Arc<Ring>, c: i64) -> CommPoly {
        CommPoly::constant(ring, ring.field.int(c))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> CommPoly {
        CommPoly::term(ring, ring.field.one(), Monomial::var(ring.nvars(), i, 1))
    }

    pub fn term(ring: &Arc<Ring>, c: Scalar, m: Monomial) -> CommPoly {
        assert_eq!(m.0.len(), ring.nvars(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CommPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> CommPoly {
        let mut p = CommPoly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Nonzero constant, i.e. a unit of the polynomial ring.
    pub fn as_unit(&self) -> Option<Scalar> {
        self.as_constant().filter(|c| !c.is_zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &CommPoly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "polynomials over {:?}/{} and {:?}/{}",
                self.ring.vars, self.ring.field, other.ring.vars, other.ring.field
            )))
        }
    }

    pub fn checked_add(&self, other: &CommPoly) -> Result<CommPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &CommPoly) -> Result<CommPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CommPoly) -> Result<CommPoly> {
        self.check_ring(other)?;
        let mut out = CommPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        CommPoly::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), a * c)),
        )
    }

    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> CommPoly {
        CommPoly::from_terms(
            &self.ring,
            self.terms.iter().map(|(mm, a)| (mm.mul(m), a * c)),
        )
    }

    pub fn pow(&self, e: u32) -> CommPoly {
        let mut acc = CommPoly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient and monomial maximal under `ord`.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Scalar, Monomial)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(m, c)| (c.clone(), m.clone()))
            .ok_or_else(|| Error::Domain("leading term of the zero polynomial".into()))
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn subst(&self, images: &[CommPoly]) -> Result<CommPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Context(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            // no variables: nothing to substitute
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| p.ring != target) {
            return Err(Error::Context("substitution images in different rings".into()));
        }
        if self.field() != target.field {
            return Err(Error::Context("substitution changes the coefficient field".into()));
        }
        let mut out = CommPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = CommPoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Euclidean division in a univariate ring: `self = q * d + r`, `deg r < deg d`.
    pub fn div_rem_univariate(&self, d: &CommPoly) -> Result<(CommPoly, CommPoly)> {
        self.check_ring(d)?;
        if self.ring.nvars() != 1 {
            return Err(Error::Context("Euclidean division needs a univariate ring".into()));
        }
        let ord = MonomialOrder::deglex(1);
        let (dc, dm) = d.leading_term(&ord)?;
        let mut q = CommPoly::zero(&self.ring);
        let mut r = self.clone();
        while let Ok((rc, rm)) = r.leading_term(&ord) {
            let Some((tc, tm)) = term_divide((&rc, &rm), (&dc, &dm)) else { break };
            r = &r - &d.mul_term(&tc, &tm);
            q = &q + &CommPoly::term(&self.ring, tc, tm);
        }
        Ok((q, r))
    }

    /// Exact square root, if `self` is the square of a polynomial.
    /// Of the two roots, the one with positive leading coefficient under deglex
    /// is returned when that notion makes sense.
    pub fn sqrt(&self) -> Option<CommPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let ord = MonomialOrder::deglex(self.ring.nvars());
        let two = self.field().int(2);
        if two.is_zero() {
            return None;
        }
        let (c, m) = self.leading_term(&ord).ok()?;
        if m.0.iter().any(|e| e % 2 != 0) {
            return None;
        }
        let lead = (c.sqrt()?, Monomial(m.0.iter().map(|e| e / 2).collect()));
        let two_lead = (&two * &lead.0, lead.1.clone());
        let mut root = CommPoly::term(&self.ring, lead.0.clone(), lead.1.clone());
        let mut last = lead.1.clone();
        loop {
            let rem = self - &(&root * &root);
            if rem.is_zero() {
                return Some(root);
            }
            let (rc, rm) = rem.leading_term(&ord).ok()?;
            let (qc, qm) = term_divide((&rc, &rm), (&two_lead.0, &two_lead.1))?;
            if ord.cmp(&qm, &last) != Ordering::Less {
                return None;
            }
            last = qm.clone();
            root = &root + &CommPoly::term(&self.ring, qc, qm);
        }
    }

    /// Terms in the deterministic display order: ascending total degree, then
    /// descending lex with the ring's declared variable order.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(a.0)));
        v
    }
}

impl<'a> Add<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<'a> Sub<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> Mul<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        CommPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Compact token form without whitespace, e.g. `1+z1*z2`, `-1/2*z2^3`.
impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if neg {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> Arc<Ring> {
        Ring::bivariate(Field::Rational)
    }

    fn z(r: &Arc<Ring>, i: usize) -> CommPoly {
        CommPoly::var(r, i)
    }

    #[test]
    fn difference_of_squares() {
        let r = q2();
        let u = &z(&r, 0) * &z(&r, 1);
        let one = CommPoly::one(&r);
        let p = &(&one + &u) * &(&one - &u);
        assert_eq!(p, &one - &u.pow(2));
        assert_eq!(p.to_string(), "1-z1^2*z2^2");
    }

    #[test]
    fn zero_annihilates() {
        let r = q2();
        let p = &CommPoly::zero(&r) * &z(&r, 1).pow(2);
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn square_in_characteristic_two() {
        let r = Ring::bivariate(Field::prime(2).unwrap());
        let s = &z(&r, 0) + &z(&r, 1);
        assert_eq!(&s * &s, &z(&r, 0).pow(2) + &z(&r, 1).pow(2));
    }

    #[test]
    fn mismatched_rings() {
        let a = CommPoly::var(&q2(), 0);
        let b = CommPoly::var(&Ring::univariate(Field::Rational), 0);
        assert!(matches!(a.checked_mul(&b), Err(Error::Context(_))));
        let c = CommPoly::var(&Ring::bivariate(Field::Prime(5)), 0);
        assert!(matches!(a.checked_add(&c), Err(Error::Context(_))));
    }

    #[test]
    fn leading_terms() {
        let r = q2();
        let one = CommPoly::one(&r);
        let deglex = MonomialOrder::deglex(2);
        let lex = MonomialOrder::lex(2);
        let p = &one + &(&z(&r, 0) * &z(&r, 1));
        assert_eq!(p.leading_term(&deglex).unwrap(), (Field::Rational.one(), Monomial(vec![1, 1])));
        let p = &z(&r, 0).pow(2) + &z(&r, 1).pow(3);
        assert_eq!(p.leading_term(&deglex).unwrap().1, Monomial(vec![0, 3]));
        assert_eq!(p.leading_term(&lex).unwrap().1, Monomial(vec![2, 0]));
        let rev = MonomialOrder::new(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(p.leading_term(&rev).unwrap().1, Monomial(vec![0, 3]));
        assert!(CommPoly::zero(&r).leading_term(&deglex).is_err());
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn term_division() {
        let q = Field::Rational;
        let (c, m) = term_divide(
            (&q.one(), &Monomial(vec![2, 1])),
            (&q.int(2), &Monomial(vec![2, 0])),
        )
        .unwrap();
        assert_eq!(c.to_string(), "1/2");
        assert_eq!(m, Monomial(vec![0, 1]));
        assert!(term_divide((&q.one(), &Monomial(vec![1, 1])), (&q.one(), &Monomial(vec![2, 0]))).is_none());
        let (c, m) = term_divide((&q.int(5), &Monomial(vec![0, 0])), (&q.int(5), &Monomial(vec![0, 0]))).unwrap();
        assert!(c.is_one() && m.is_one());
    }

    #[test]
    fn substitution() {
        let r = q2();
        let kz = Ring::univariate(Field::Rational);
        let zz = CommPoly::var(&kz, 0);
        let one = CommPoly::one(&r);
        let p = &one + &(&z(&r, 0) * &z(&r, 1));
        let ab = p.subst(&[zz.clone(), zz.clone()]).unwrap();
        assert_eq!(ab, &CommPoly::one(&kz) + &zz.pow(2));

        let d = &z(&r, 0).pow(2) - &z(&r, 1).pow(2);
        assert_eq!(d.subst(&[z(&r, 1), z(&r, 0)]).unwrap(), -&d);

        let p = &one - &(&CommPoly::int(&r, 2) * &(&z(&r, 0) * &z(&r, 1)).pow(2));
        let ones = [CommPoly::one(&kz), CommPoly::one(&kz)];
        assert_eq!(p.subst(&ones).unwrap(), CommPoly::int(&kz, -1));
        assert!(p.subst(&[zz]).is_err());
    }

    #[test]
    fn univariate_division() {
        let r = Ring::univariate(Field::Rational);
        let z = CommPoly::var(&r, 0);
        let a = &(&z.pow(3) + &z) + &CommPoly::int(&r, 5);
        let d = &(&CommPoly::int(&r, 2) * &z.pow(2)) - &CommPoly::one(&r);
        let (q, rem) = a.div_rem_univariate(&d).unwrap();
        assert_eq!(&(&q * &d) + &rem, a);
        assert!(rem.total_degree().unwrap() < 2);
        assert!(a.div_rem_univariate(&CommPoly::zero(&r)).is_err());
        assert!(CommPoly::var(&q2(), 0).div_rem_univariate(&CommPoly::one(&q2())).is_err());
    }

    #[test]
    fn polynomial_square_root() {
        let r = q2();
        let a = &(&z(&r, 0) * &z(&r, 1)) - &CommPoly::int(&r, 3);
        let b = &z(&r, 1).pow(2) + &z(&r, 0);
        for p in [a, b, CommPoly::int(&r, 4)] {
            let s = (&p * &p).sqrt().unwrap();
            assert!(s == p || s == -&p);
        }
        assert!(z(&r, 0).sqrt().is_none());
        assert!((&z(&r, 0).pow(2) + &CommPoly::one(&r)).sqrt().is_none());
    }
}
