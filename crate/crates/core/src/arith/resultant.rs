//! Resultants of bivariate polynomials with respect to `y`.
//!
//! Computed with the subresultant pseudo-remainder sequence over `Q[x]`.
//! The sign agrees with the Sylvester determinant of `f` and `g` taken in
//! that order, so `Res(f, g) = (-1)^(deg f * deg g) Res(g, f)`.

use super::bipoly::BiPoly;
use super::poly::UniPoly;
use super::ArithError;

fn lc(p: &[UniPoly]) -> &UniPoly {
    p.last().expect("nonzero polynomial")
}

fn deg(p: &[UniPoly]) -> usize {
    p.len() - 1
}

fn trim(mut p: Vec<UniPoly>) -> Vec<UniPoly> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`, without division.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let lb = lc(b).clone();
    let mut r = a.to_vec();
    let mut e = deg(a) + 1 - deg(b);
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = lc(&r).clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&lr * bc);
        }
        r.pop();
        r = trim(r);
        e -= 1;
    }
    let scale = lb.pow(e);
    trim(r.iter().map(|c| c * &scale).collect())
}

/// `Res_y(f, g)` as a polynomial in `x`.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Result<UniPoly, ArithError> {
    if f.is_zero() || g.is_zero() {
        return Ok(UniPoly::zero());
    }
    let (df, dg) = (f.deg_y(), g.deg_y());
    match (df, dg) {
        (0, 0) => return Err(ArithError::BothConstantInY),
        (_, 0) => return Ok(g.row(0).pow(df)),
        (0, _) => return Ok(f.row(0).pow(dg)),
        _ => {}
    }
    let mut a: Vec<UniPoly> = f.rows().to_vec();
    let mut b: Vec<UniPoly> = g.rows().to_vec();
    let mut s_neg = false;
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s_neg = true;
        }
    }
    let mut gg = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s_neg = !s_neg;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return Ok(UniPoly::zero());
        }
        let div = &gg * &h.pow(delta);
        a = b;
        b = r.iter().map(|c| c.exact_div(&div)).collect();
        gg = lc(&a).clone();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => gg.pow(delta).exact_div(&h.pow(delta - 1)),
        };
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a);
    let res = lc(&b).pow(da).exact_div(&h.pow(da - 1));
    Ok(if s_neg { -res } else { res })
}

/// `Res_x(f, g)` as a polynomial in `y`.
pub fn resultant_x(f: &BiPoly, g: &BiPoly) -> Result<UniPoly, ArithError> {
    resultant_y(&f.swap_vars(), &g.swap_vars())
}
