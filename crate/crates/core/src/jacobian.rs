//! Dicks–Lewin partial derivatives valued in F^op ⊗ F, Jacobian matrices of
//! K[z]-endomorphisms, and their specializations to K[z1, z2] and K[z].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{write_word, AlgebraCtx, KzEndo, Letter, NCPoly, Word};
use crate::matgroup::PolyMatrix;
use crate::poly::{CommPoly, Monomial, Ring};
use crate::scalar::Scalar;

/// An element of F^op ⊗ F as a reduced list of `(coefficient, left, right)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElem {
    ctx: Arc<AlgebraCtx>,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorElem {
    pub fn zero(ctx: &Arc<AlgebraCtx>) -> TensorElem {
        TensorElem {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_triples(ctx: &Arc<AlgebraCtx>, triples: impl IntoIterator<Item = (Scalar, Word, Word)>) -> TensorElem {
        let mut t = TensorElem::zero(ctx);
        for (c, l, r) in triples {
            t.add(l, r, c);
        }
        t
    }

    fn add(&mut self, l: Word, r: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let s = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The reduced triples, sorted by `(left, right)`.
    pub fn triples(&self) -> Vec<(Scalar, Word, Word)> {
        self.terms
            .iter()
            .map(|((l, r), c)| (c.clone(), l.clone(), r.clone()))
            .collect()
    }

    /// Maps `z^a ⊗ z^b` to `z1^a z2^b`; `None` if some word has an X-letter.
    pub fn to_bivariate(&self) -> Option<CommPoly> {
        let ring = self.ctx.bi_ring();
        let mut out = CommPoly::zero(&ring);
        for ((l, r), c) in &self.terms {
            if !l.is_z_power() || !r.is_z_power() {
                return None;
            }
            let m = Monomial(vec![l.len() as u32, r.len() as u32]);
            out = &out + &CommPoly::term(&ring, c.clone(), m);
        }
        Some(out)
    }
}

/// `1⊗z y + x y⊗1`.
impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((l, r), c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            let side = |w: &Word, f: &mut fmt::Formatter<'_>| {
                if w.is_empty() {
                    write!(f, "1")
                } else {
                    write_word(f, &self.ctx, w)
                }
            };
            side(l, f)?;
            write!(f, "⊗")?;
            side(r, f)?;
        }
        Ok(())
    }
}

/// `∂f/∂v`: for every occurrence of `v` in a word, prefix ⊗ suffix.
pub fn partial_derivative(f: &NCPoly, v: Letter) -> Result<TensorElem> {
    let ctx = f.ctx();
    if let Letter::X(i) = v {
        if i >= ctx.n() {
            return Err(Error::Domain(format!("no variable x{} in an algebra with {} generators", i + 1, ctx.n())));
        }
    }
    let mut out = TensorElem::zero(ctx);
    for (w, c) in f.terms() {
        for (p, l) in w.0.iter().enumerate() {
            if *l == v {
                out.add(Word(w.0[..p].to_vec()), Word(w.0[p + 1..].to_vec()), c.clone());
            }
        }
    }
    Ok(out)
}

/// Entry `(i, j)` is `∂f_j/∂x_i`; the z row and column are omitted.
pub fn jacobian_full(phi: &KzEndo) -> Vec<Vec<TensorElem>> {
    let n = phi.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| partial_derivative(phi.image(j), Letter::X(i)).expect("index in range"))
                .collect()
        })
        .collect()
}

/// Jacobian of an X-linear endomorphism as a matrix over K[z1, z2], with
/// `z ⊗ 1 -> z1` and `1 ⊗ z -> z2`.
pub fn jacobian_linear(phi: &KzEndo) -> Result<PolyMatrix> {
    let cells = phi.linear_profile()?;
    let ring = phi.ctx().bi_ring();
    let n = phi.n();
    let mut m = PolyMatrix::zero(&ring, n);
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let mut acc = CommPoly::zero(&ring);
            for (b, c) in cell {
                let left = b.subst(&[CommPoly::var(&ring, 0)])?;
                let right = c.subst(&[CommPoly::var(&ring, 1)])?;
                acc = &acc + &(&left * &right);
            }
            m.set(i, j, acc);
        }
    }
    Ok(m)
}

/// A linear K[z]-endomorphism of the commutative algebra K[X, z]: entry `(i, j)`
/// of `coeffs` is the coefficient of x_i in the image of x_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommLinearEndo {
    pub x_names: Vec<String>,
    pub coeffs: PolyMatrix,
}

impl CommLinearEndo {
    pub fn image_string(&self, j: usize) -> String {
        let mut out = String::new();
        for (i, name) in self.x_names.iter().enumerate() {
            let c = self.coeffs.get(i, j);
            if c.is_zero() {
                continue;
            }
            let piece = if c.is_one() {
                name.clone()
            } else if c.num_terms() == 1 {
                let s = c.to_string();
                if s == "-1" { format!("-{name}") } else { format!("{s}*{name}") }
            } else {
                format!("({c})*{name}")
            };
            if out.is_empty() {
                out = piece;
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for CommLinearEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, name) in self.x_names.iter().enumerate() {
            if j > 0 {
                writeln!(f)?;
            }
            write!(f, "{name} -> {}", self.image_string(j))?;
        }
        Ok(())
    }
}

/// The induced linear endomorphism of K[X, z] (each `b(z) x_i c(z)` becomes
/// `b(z) c(z) x_i`) and its Jacobian over K[z].
pub fn abelianize_endo(phi: &KzEndo) -> Result<(CommLinearEndo, PolyMatrix)> {
    let cells = phi.linear_profile()?;
    let ring: Arc<Ring> = phi.ctx().z_ring();
    let n = phi.n();
    let mut m = PolyMatrix::zero(&ring, n);
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let mut acc = CommPoly::zero(&ring);
            for (b, c) in cell {
                acc = &acc + &(b * c);
            }
            m.set(i, j, acc);
        }
    }
    let endo = CommLinearEndo {
        x_names: phi.ctx().x_names().to_vec(),
        coeffs: m.clone(),
    };
    Ok((endo, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn ctx2() -> Arc<AlgebraCtx> {
        AlgebraCtx::standard(Field::Rational, 2)
    }

    fn w(ctx: &Arc<AlgebraCtx>, s: &str) -> Word {
        Word(s.chars().map(|c| ctx.lookup(&c.to_string()).unwrap()).collect())
    }

    fn p(ctx: &Arc<AlgebraCtx>, words: &[(i64, &str)]) -> NCPoly {
        NCPoly::from_terms(ctx, words.iter().map(|(c, s)| (w(ctx, s), ctx.field().int(*c))))
    }

    #[test]
    fn single_and_double_occurrences() {
        let ctx = ctx2();
        let (x, y, z) = (Letter::X(0), Letter::X(1), Letter::Z);
        let f = p(&ctx, &[(1, "xzy")]);
        assert_eq!(partial_derivative(&f, x).unwrap().to_string(), "1⊗z y");
        assert_eq!(partial_derivative(&f, y).unwrap().to_string(), "x z⊗1");
        let f = p(&ctx, &[(1, "xyx")]);
        assert_eq!(partial_derivative(&f, x).unwrap().to_string(), "1⊗y x + x y⊗1");
        let f = p(&ctx, &[(1, "zxz")]);
        assert_eq!(partial_derivative(&f, x).unwrap().to_string(), "z⊗z");
        assert_eq!(partial_derivative(&f, z).unwrap().to_string(), "1⊗x z + z x⊗1");
        assert!(partial_derivative(&f, y).unwrap().is_zero());
        assert!(partial_derivative(&f, Letter::X(2)).is_err());
    }

    #[test]
    fn full_jacobians() {
        let ctx = ctx2();
        let show = |j: Vec<Vec<TensorElem>>| {
            j.iter()
                .map(|r| r.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "))
                .collect::<Vec<_>>()
                .join("; ")
        };
        assert_eq!(show(jacobian_full(&KzEndo::identity(&ctx))), "1⊗1, 0; 0, 1⊗1");
        let phi = KzEndo::new(&ctx, vec![p(&ctx, &[(1, "x"), (1, "zyz")]), p(&ctx, &[(1, "y")])]).unwrap();
        assert_eq!(show(jacobian_full(&phi)), "1⊗1, 0; z⊗z, 1⊗1");
        let phi = KzEndo::new(&ctx, vec![p(&ctx, &[(1, "x"), (1, "yy")]), p(&ctx, &[(1, "y")])]).unwrap();
        assert_eq!(show(jacobian_full(&phi)), "1⊗1, 0; 1⊗y + y⊗1, 1⊗1");
    }

    #[test]
    fn anick_variant_jacobian() {
        let ctx = ctx2();
        let phi = KzEndo::new(
            &ctx,
            vec![
                p(&ctx, &[(1, "x"), (1, "zxz"), (-1, "zzy")]),
                p(&ctx, &[(1, "y"), (1, "xzz"), (-1, "zyz")]),
            ],
        )
        .unwrap();
        let j = jacobian_linear(&phi).unwrap();
        assert_eq!(j.to_string(), "[1+z1*z2, z2^2]\n[-z1^2, 1-z1*z2]");
        assert!(j.det().is_one());
        // derivative route
        for (i, row) in jacobian_full(&phi).iter().enumerate() {
            for (k, t) in row.iter().enumerate() {
                assert_eq!(&t.to_bivariate().unwrap(), j.get(i, k));
            }
        }
        let (ab, m) = abelianize_endo(&phi).unwrap();
        assert_eq!(m.to_string(), "[1+z^2, z^2]\n[-z^2, 1-z^2]");
        assert!(m.det().is_one());
        assert_eq!(ab.to_string(), "x -> (1+z^2)*x - z^2*y\ny -> z^2*x + (1-z^2)*y");
    }

    #[test]
    fn elementary_and_scaling_jacobians() {
        let ctx = AlgebraCtx::standard(Field::Rational, 3);
        let q = Field::Rational;
        // x_3 -> x_3 + 5 z^2 x_1 z
        let img = &NCPoly::x(&ctx, 2) + &p(&ctx, &[(5, "zzxz")]);
        let phi = KzEndo::new(&ctx, vec![NCPoly::x(&ctx, 0), NCPoly::x(&ctx, 1), img]).unwrap();
        let j = jacobian_linear(&phi).unwrap();
        let mut expect = PolyMatrix::identity(&ctx.bi_ring(), 3);
        expect.set(0, 2, CommPoly::term(&ctx.bi_ring(), q.int(5), Monomial(vec![2, 1])));
        assert_eq!(j, expect);

        let sc = KzEndo::new(
            &ctx,
            (0..3).map(|i| NCPoly::x(&ctx, i).scale(&q.int(i as i64 + 2))).collect(),
        )
        .unwrap();
        assert_eq!(
            jacobian_linear(&sc).unwrap(),
            PolyMatrix::diag(&ctx.bi_ring(), &[q.int(2), q.int(3), q.int(4)])
        );
    }

    #[test]
    fn abelianization_of_non_unit() {
        let ctx = ctx2();
        let phi = KzEndo::new(&ctx, vec![p(&ctx, &[(1, "zxz")]), p(&ctx, &[(1, "y")])]).unwrap();
        let (_, m) = abelianize_endo(&phi).unwrap();
        assert_eq!(m.to_string(), "[z^2, 0]\n[0, 1]");
        assert!(!m.is_gl());
        assert!(abelianize_endo(&KzEndo::identity(&ctx)).unwrap().1.is_identity());
    }
}
