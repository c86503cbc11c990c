#![allow(dead_code)]

use std::sync::Arc;

use kzaut::{
    matrix_to_endo, AlgebraCtx, CommPoly, Factor, Field, KzEndo, Letter, Monomial, NCPoly, Ring, Transcript, Word,
};
use proptest::prelude::*;
use rand::Rng;

pub fn rand_scalar<R: Rng>(rng: &mut R, field: Field, nonzero: bool) -> kzaut::Scalar {
    loop {
        let c = match field {
            Field::Rational => {
                let n = rng.gen_range(-5i64..=5);
                let d = rng.gen_range(1i64..=3);
                field.ratio(&n.into(), &d.into()).unwrap()
            }
            Field::Prime(p) => field.int(rng.gen_range(0..p as i64)),
        };
        if !nonzero || !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial with every exponent at most `max_deg`.
pub fn rand_poly<R: Rng>(rng: &mut R, ring: &Arc<Ring>, max_deg: u32, max_terms: usize) -> CommPoly {
    let k = rng.gen_range(0..=max_terms);
    CommPoly::from_terms(
        ring,
        (0..k).map(|_| {
            let m = Monomial((0..ring.nvars()).map(|_| rng.gen_range(0..=max_deg)).collect());
            (m, rand_scalar(rng, ring.field(), true))
        }),
    )
}

/// Random transcript of at most `max_factors` elementary, diagonal and swap factors.
pub fn rand_transcript<R: Rng>(rng: &mut R, ring: &Arc<Ring>, n: usize, max_factors: usize, max_deg: u32) -> Transcript {
    let k = rng.gen_range(0..=max_factors);
    let factors = (0..k)
        .map(|_| {
            let roll = rng.gen_range(0..10);
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            match roll {
                0 => Factor::Diag((0..n).map(|_| rand_scalar(rng, ring.field(), true)).collect()),
                1 => Factor::Swap(i, j),
                _ => {
                    let mut p = rand_poly(rng, ring, max_deg, 3);
                    if p.is_zero() {
                        p = CommPoly::one(ring);
                    }
                    Factor::Elem(i, j, p)
                }
            }
        })
        .collect();
    Transcript { n, factors }
}

/// Random X-linear endomorphism with z-exponents at most `max_deg` on each side.
pub fn rand_linear_endo<R: Rng>(rng: &mut R, ctx: &Arc<AlgebraCtx>, max_deg: usize, max_terms: usize) -> KzEndo {
    let n = ctx.n();
    let images = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=max_terms);
            NCPoly::from_terms(
                ctx,
                (0..k).map(|_| {
                    let i = rng.gen_range(0..n);
                    let a = rng.gen_range(0..=max_deg);
                    let b = rng.gen_range(0..=max_deg);
                    let mut w = vec![Letter::Z; a];
                    w.push(Letter::X(i));
                    w.extend(std::iter::repeat_n(Letter::Z, b));
                    (Word(w), rand_scalar(rng, ctx.field(), true))
                }),
            )
        })
        .collect();
    KzEndo::new(ctx, images).unwrap()
}

/// Random tame linear automorphism built from a random transcript.
pub fn rand_tame_auto<R: Rng>(rng: &mut R, ctx: &Arc<AlgebraCtx>, max_factors: usize, max_deg: u32) -> KzEndo {
    let ring = ctx.bi_ring();
    let t = rand_transcript(rng, &ring, ctx.n(), max_factors, max_deg);
    matrix_to_endo(ctx, &t.product(&ring).unwrap()).unwrap()
}

/// Random linear automorphism of K<x,y,z>; about half are wild (the Anick
/// variant conjugated by tame ones).
pub fn rand_auto2<R: Rng>(rng: &mut R, field: Field) -> KzEndo {
    let ctx = AlgebraCtx::standard(field, 2);
    let a = rand_tame_auto(rng, &ctx, 3, 2);
    if rng.gen_bool(0.5) {
        let w = kzaut::builtin("anick_variant", field).unwrap();
        let b = rand_tame_auto(rng, &ctx, 3, 2);
        kzaut::compose(&kzaut::compose(&a, &w).unwrap(), &b).unwrap()
    } else {
        a
    }
}

pub fn rand_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word(
        (0..len)
            .map(|_| {
                let k = rng.gen_range(0..=n);
                if k == n {
                    Letter::Z
                } else {
                    Letter::X(k)
                }
            })
            .collect(),
    )
}

pub fn rand_ncpoly<R: Rng>(rng: &mut R, ctx: &Arc<AlgebraCtx>, max_len: usize, max_terms: usize) -> NCPoly {
    let k = rng.gen_range(0..=max_terms);
    NCPoly::from_terms(
        ctx,
        (0..k).map(|_| (rand_word(rng, ctx.n(), max_len), rand_scalar(rng, ctx.field(), true))),
    )
}

// proptest strategies

pub fn arb_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(7)), Just(Field::Prime(2))]
}

pub fn arb_poly(ring: Arc<Ring>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = CommPoly> {
    let nv = ring.nvars();
    proptest::collection::vec((proptest::collection::vec(0..=max_deg, nv), -6i64..=6, 1i64..=4), 0..=max_terms)
        .prop_map(move |terms| {
            let f = ring.field();
            CommPoly::from_terms(
                &ring,
                terms
                    .into_iter()
                    .map(|(e, n, d)| (Monomial(e), f.ratio(&n.into(), &d.into()).unwrap_or_else(|_| f.int(n)))),
            )
        })
}

pub fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..=n, 0..=max_len).prop_map(move |v| {
        Word(v.into_iter().map(|k| if k == n { Letter::Z } else { Letter::X(k) }).collect())
    })
}

pub fn arb_ncpoly(ctx: Arc<AlgebraCtx>, max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> {
    let n = ctx.n();
    proptest::collection::vec((arb_word(n, max_len), -6i64..=6, 1i64..=4), 0..=max_terms).prop_map(move |terms| {
        let f = ctx.field();
        NCPoly::from_terms(
            &ctx,
            terms
                .into_iter()
                .map(|(w, a, b)| (w, f.ratio(&a.into(), &b.into()).unwrap_or_else(|_| f.int(a)))),
        )
    })
}
