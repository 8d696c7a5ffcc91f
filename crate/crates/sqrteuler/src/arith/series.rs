use num::One;

use super::poly::Poly;
use super::{rat, ArithError, Rat};

/// Square root of a truncated series with constant term 1, by graded
/// coefficient recursion: writing `g = sum of homogeneous parts g_d`,
/// `g_d = (f_d - sum_{0<i<d} g_i g_{d-i}) / 2`.
///
/// The result `g` satisfies `g^2 = f` modulo degree `> cap` and has
/// constant term 1.
pub fn series_sqrt(f: &Poly, cap: i64) -> Result<Poly, ArithError> {
    if !f.constant_term().is_one() {
        return Err(ArithError::NonUnitConstant(f.constant_term().to_string()));
    }
    let f = f.truncate(cap);
    let vars = f.vars().clone();
    let mut g = Poly::one(&vars).with_cap(Some(cap));
    let half = Rat::new(1.into(), 2.into());
    for d in 1..=cap {
        let mut cross = Poly::zero(&vars);
        for i in 1..d {
            let gi = g.component(i);
            let gdi = g.component(d - i);
            if gi.is_zero() || gdi.is_zero() {
                continue;
            }
            cross = &cross + &(&gi * &gdi);
        }
        let gd = (&f.component(d) - &cross.component(d)).scale(&half);
        g = &g + &gd;
    }
    Ok(g)
}

/// Multiplicative inverse of a truncated series with nonzero constant
/// term, modulo degree `> cap`.
pub fn series_inverse(f: &Poly, cap: i64) -> Result<Poly, ArithError> {
    let c0 = f.constant_term();
    if c0 == rat(0) {
        return Err(ArithError::ZeroConstant);
    }
    let f = f.truncate(cap);
    let vars = f.vars().clone();
    let c0_inv = Rat::one() / c0;
    // h_d = -c0^{-1} * sum_{0<i<=d} f_i h_{d-i}
    let mut h = Poly::constant(&vars, c0_inv.clone()).with_cap(Some(cap));
    for d in 1..=cap {
        let mut acc = Poly::zero(&vars);
        for i in 1..=d {
            let fi = f.component(i);
            let hdi = h.component(d - i);
            if fi.is_zero() || hdi.is_zero() {
                continue;
            }
            acc = &acc + &(&fi * &hdi);
        }
        let hd = acc.component(d).scale(&-c0_inv.clone());
        h = &h + &hd;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::super::{ratio, VarSet};
    use super::*;

    fn x_table() -> VarSet {
        VarSet::new(&[("x", 1)])
    }

    #[test]
    fn sqrt_of_one() {
        let t = x_table();
        let g = series_sqrt(&Poly::one(&t), 6).unwrap();
        assert_eq!(g, Poly::one(&t).with_cap(Some(6)));
    }

    #[test]
    fn sqrt_of_one_minus_x() {
        // Taylor oracle: sqrt(1-x) = 1 - x/2 - x^2/8 - x^3/16 - 5x^4/128
        let t = x_table();
        let x = Poly::var_named(&t, "x").unwrap();
        let f = &Poly::one(&t) - &x;
        let g = series_sqrt(&f, 4).unwrap();
        let expect = Poly::from_terms(
            &t,
            vec![
                (crate::arith::Monomial::one(), rat(1)),
                (crate::arith::Monomial::var(&t, t.id("x").unwrap(), 1), ratio(-1, 2)),
                (crate::arith::Monomial::var(&t, t.id("x").unwrap(), 2), ratio(-1, 8)),
                (crate::arith::Monomial::var(&t, t.id("x").unwrap(), 3), ratio(-1, 16)),
                (crate::arith::Monomial::var(&t, t.id("x").unwrap(), 4), ratio(-5, 128)),
            ],
        )
        .with_cap(Some(4));
        assert_eq!(g, expect);
    }

    #[test]
    fn sqrt_of_perfect_square() {
        let t = x_table();
        let x = Poly::var_named(&t, "x").unwrap();
        let f = &(&Poly::one(&t) + &x.scale(&rat(2))) + &x.pow(2);
        let g = series_sqrt(&f, 2).unwrap();
        assert_eq!(g, (&Poly::one(&t) + &x).with_cap(Some(2)));
    }

    #[test]
    fn sqrt_requires_unit_constant() {
        let t = x_table();
        let x = Poly::var_named(&t, "x").unwrap();
        assert!(matches!(
            series_sqrt(&x, 3),
            Err(ArithError::NonUnitConstant(_))
        ));
    }

    #[test]
    fn inverse_of_geometric() {
        let t = x_table();
        let x = Poly::var_named(&t, "x").unwrap();
        let f = &Poly::one(&t) - &x;
        let h = series_inverse(&f, 5).unwrap();
        let prod = (&f * &h).truncate(5);
        assert_eq!(prod, Poly::one(&t).with_cap(Some(5)));
    }
}
