//! Automorphism-level API for linear K[z]-endomorphisms: automorphism and
//! tameness decisions, inversion, elementary decompositions, abelianization,
//! stable tameness, and the named built-in endomorphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::freealg::{compose, AlgebraCtx, KzEndo, NCPoly};
use crate::jacobian::{abelianize_endo, jacobian_linear, CommLinearEndo};
use crate::matgroup::{
    cohn_matrix, decide_ge, gl2_univariate_decompose, stabilize3, Factor, MatrixVerdict, PolyMatrix, Stabilized,
    Transcript,
};
use crate::poly::{CommPoly, Monomial, MonomialOrder, Ring};
use crate::scalar::{Field, Scalar};

/// An elementary linear automorphism. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AutoFactor {
    /// `x_j -> x_j + a(z) x_i b(z)`, `i != j`.
    Elem { i: usize, j: usize, a: CommPoly, b: CommPoly },
    /// `x_k -> u_k x_k`.
    Scale(Vec<Scalar>),
    /// Exchanges `x_i` and `x_j`.
    Swap(usize, usize),
}

impl AutoFactor {
    pub fn to_endo(&self, ctx: &Arc<AlgebraCtx>) -> Result<KzEndo> {
        let n = ctx.n();
        let mut images: Vec<NCPoly> = (0..n).map(|k| NCPoly::x(ctx, k)).collect();
        match self {
            AutoFactor::Elem { i, j, a, b } => {
                if i == j || *i >= n || *j >= n {
                    return Err(Error::Domain(format!("invalid elementary automorphism {self}")));
                }
                let t = &(&NCPoly::from_z_poly(ctx, a)? * &NCPoly::x(ctx, *i)) * &NCPoly::from_z_poly(ctx, b)?;
                images[*j] = &images[*j] + &t;
            }
            AutoFactor::Scale(u) => {
                if u.len() != n || u.iter().any(Scalar::is_zero) {
                    return Err(Error::Domain("scaling needs n nonzero constants".into()));
                }
                for (k, c) in u.iter().enumerate() {
                    images[k] = images[k].scale(c);
                }
            }
            AutoFactor::Swap(i, j) => {
                if i == j || *i >= n || *j >= n {
                    return Err(Error::Domain(format!("invalid swap {self}")));
                }
                images.swap(*i, *j);
            }
        }
        KzEndo::new(ctx, images)
    }

    /// Rewrites `Swap` through the matrix identity used for transcripts.
    pub fn expand(&self, ctx: &Arc<AlgebraCtx>) -> Vec<AutoFactor> {
        match self {
            AutoFactor::Swap(i, j) => {
                let ring = ctx.bi_ring();
                auto_factors(&Transcript {
                    n: ctx.n(),
                    factors: Factor::Swap(*i, *j).expand(&ring, ctx.n()),
                })
            }
            f => vec![f.clone()],
        }
    }
}

/// `A i j <a(z)> <b(z)>` and `AS <units>`; swaps print as `ASW i j`.
impl fmt::Display for AutoFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutoFactor::Elem { i, j, a, b } => write!(f, "A {} {} {} {}", i + 1, j + 1, a, b),
            AutoFactor::Scale(u) => {
                write!(f, "AS")?;
                for c in u {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
            AutoFactor::Swap(i, j) => write!(f, "ASW {} {}", i + 1, j + 1),
        }
    }
}

/// One elementary automorphism per monomial `α z1^a z2^b` of each elementary
/// matrix factor, as `x_j -> x_j + α z^a x_i z^b`.
pub fn auto_factors(t: &Transcript) -> Vec<AutoFactor> {
    let mut out = Vec::new();
    for f in &t.factors {
        match f {
            Factor::Elem(i, j, p) => {
                let zr = Ring::univariate(p.field());
                for (m, c) in p.terms() {
                    out.push(AutoFactor::Elem {
                        i: *i,
                        j: *j,
                        a: CommPoly::term(&zr, c.clone(), Monomial(vec![m.0[0]])),
                        b: CommPoly::term(&zr, p.field().one(), Monomial(vec![m.0[1]])),
                    });
                }
            }
            Factor::Diag(u) => out.push(AutoFactor::Scale(u.clone())),
            Factor::Swap(i, j) => out.push(AutoFactor::Swap(*i, *j)),
        }
    }
    out
}

/// Composes the factors left to right: `f_1 ∘ f_2 ∘ ... ∘ f_k`.
pub fn recompose(ctx: &Arc<AlgebraCtx>, factors: &[AutoFactor]) -> Result<KzEndo> {
    let mut acc = KzEndo::identity(ctx);
    for f in factors {
        acc = compose(&acc, &f.to_endo(ctx)?)?;
    }
    Ok(acc)
}

/// The linear endomorphism whose Jacobian is `m`; `z1^a z2^b` at `(i, j)`
/// contributes `z^a x_i z^b` to the image of x_j.
pub fn matrix_to_endo(ctx: &Arc<AlgebraCtx>, m: &PolyMatrix) -> Result<KzEndo> {
    if m.n() != ctx.n() {
        return Err(Error::Dimension {
            expected: ctx.n(),
            found: m.n(),
        });
    }
    if **m.ring() != *ctx.bi_ring() {
        return Err(Error::Context("expected a matrix over K[z1, z2] with the algebra's field".into()));
    }
    let n = ctx.n();
    let z = NCPoly::z(ctx);
    let mut images = vec![NCPoly::zero(ctx); n];
    for i in 0..n {
        for j in 0..n {
            for (mono, c) in m.get(i, j).terms() {
                let t = &(&z.pow(mono.0[0]) * &NCPoly::x(ctx, i)) * &z.pow(mono.0[1]);
                images[j] = &images[j] + &t.scale(c);
            }
        }
    }
    KzEndo::new(ctx, images)
}

pub fn is_automorphism_linear(phi: &KzEndo) -> Result<bool> {
    Ok(jacobian_linear(phi)?.is_gl())
}

fn require_automorphism(phi: &KzEndo) -> Result<PolyMatrix> {
    let j = jacobian_linear(phi)?;
    let det = j.det();
    if det.as_unit().is_none() {
        return Err(Error::NotInvertible { det: det.to_string() });
    }
    Ok(j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TameVerdict {
    /// Recomposing the factors gives the queried automorphism.
    Tame(Vec<AutoFactor>),
    /// Stuck Jacobian: the automorphism is not a product of elementary ones.
    Wild(PolyMatrix),
    /// n >= 3: tame by Suslin's theorem, no explicit factorization found.
    TameByTheorem,
}

/// The matrix-level verdict on the Jacobian, with the transcript when tame.
pub fn tame_transcript(phi: &KzEndo, ord: &MonomialOrder) -> Result<MatrixVerdict> {
    let j = require_automorphism(phi)?;
    decide_ge(&j, ord)
}

pub fn is_tame(phi: &KzEndo, ord: &MonomialOrder) -> Result<TameVerdict> {
    Ok(match tame_transcript(phi, ord)? {
        MatrixVerdict::Tame(t) => TameVerdict::Tame(auto_factors(&t)),
        MatrixVerdict::Wild(w) => TameVerdict::Wild(w),
        MatrixVerdict::TameByTheorem => TameVerdict::TameByTheorem,
    })
}

pub fn invert_linear(phi: &KzEndo) -> Result<KzEndo> {
    let j = require_automorphism(phi)?;
    matrix_to_endo(phi.ctx(), &j.inverse()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StableTame {
    /// Factors over the algebra extended by `t`, with the 3x3 transcript they
    /// came from.
    Tame {
        ctx: Arc<AlgebraCtx>,
        transcript: Transcript,
        factors: Vec<AutoFactor>,
    },
    Unknown,
}

/// The algebra with one extra fixed variable, named `t` when available.
pub fn extended_ctx(ctx: &Arc<AlgebraCtx>) -> Result<Arc<AlgebraCtx>> {
    let name = std::iter::once("t".to_string())
        .chain((1..).map(|k| format!("t{k}")))
        .find(|s| ctx.lookup(s).is_none())
        .unwrap();
    ctx.extend(&name)
}

pub fn stable_tame(phi: &KzEndo, ord: &MonomialOrder) -> Result<StableTame> {
    if phi.n() != 2 {
        return Err(Error::Domain("stable tameness is implemented for two X-variables".into()));
    }
    let j = require_automorphism(phi)?;
    Ok(match stabilize3(&j, ord)? {
        Stabilized::Tame(t) => StableTame::Tame {
            ctx: extended_ctx(phi.ctx())?,
            factors: auto_factors(&t),
            transcript: t,
        },
        Stabilized::Unknown => StableTame::Unknown,
    })
}

/// The abelianized automorphism of K[X, z] and its Euclidean decomposition
/// over K[z]; the factors are elementary linear automorphisms `x_j -> x_j + p(z) x_i`
/// and scalings.
pub fn abelianized_tame_decomposition(phi: &KzEndo) -> Result<(CommLinearEndo, Transcript)> {
    if phi.n() != 2 {
        return Err(Error::Domain("abelianized decomposition is implemented for two X-variables".into()));
    }
    require_automorphism(phi)?;
    let (endo, m) = abelianize_endo(phi)?;
    let t = gl2_univariate_decompose(&m)?;
    Ok((endo, t))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "anick_variant",
    "cohn_endo",
    "elem(i,j,a,b)",
    "scale(u1,...,un)",
    "triangular_sample",
];

/// A named endomorphism over `field`.
pub fn builtin(name: &str, field: Field) -> Result<KzEndo> {
    let name = name.trim();
    let ctx2 = AlgebraCtx::standard(field, 2);
    match name {
        "anick_variant" => endo_from_strs(&ctx2, &["x + z(xz - zy)", "y + (xz - zy)z"]),
        "cohn_endo" => {
            let r = ctx2.bi_ring();
            matrix_to_endo(&ctx2, &cohn_matrix(&CommPoly::var(&r, 0), &CommPoly::var(&r, 1)))
        }
        "triangular_sample" => endo_from_strs(&ctx2, &["x + y^2 + z y z", "y"]),
        _ => {
            let (head, args) = split_call(name)?;
            match head {
                "elem" => {
                    if args.len() != 4 {
                        return Err(Error::Domain("elem takes (i, j, a, b)".into()));
                    }
                    let idx = |s: &str| -> Result<usize> {
                        s.trim()
                            .parse::<usize>()
                            .ok()
                            .filter(|&v| v >= 1)
                            .ok_or_else(|| Error::Domain(format!("bad generator index `{s}`")))
                    };
                    let (i, j) = (idx(args[0])?, idx(args[1])?);
                    let ctx = AlgebraCtx::standard(field, i.max(j).max(2));
                    let zr = ctx.z_ring();
                    let a = parse_expr(&zr, args[2])?;
                    let b = parse_expr(&zr, args[3])?;
                    AutoFactor::Elem { i: i - 1, j: j - 1, a, b }.to_endo(&ctx)
                }
                "scale" => {
                    if args.is_empty() {
                        return Err(Error::Domain("scale needs at least one unit".into()));
                    }
                    let ctx = AlgebraCtx::standard(field, args.len());
                    let k = Ring::new(field, &[] as &[&str]);
                    let units = args
                        .iter()
                        .map(|s| {
                            let c = parse_expr(&k, s)?.as_constant().unwrap();
                            Ok(c)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    AutoFactor::Scale(units).to_endo(&ctx)
                }
                _ => Err(Error::Domain(format!(
                    "unknown builtin `{name}` (known: {})",
                    BUILTIN_NAMES.join(", ")
                ))),
            }
        }
    }
}

fn split_call(s: &str) -> Result<(&str, Vec<&str>)> {
    let bad = || Error::Domain(format!("unknown builtin `{s}` (known: {})", BUILTIN_NAMES.join(", ")));
    let open = s.find('(').ok_or_else(bad)?;
    let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    Ok((s[..open].trim(), inner.split(',').collect()))
}

fn endo_from_strs(ctx: &Arc<AlgebraCtx>, images: &[&str]) -> Result<KzEndo> {
    let images = images
        .iter()
        .map(|s| parse_expr(ctx, s))
        .collect::<Result<Vec<_>>>()?;
    KzEndo::new(ctx, images)
}
