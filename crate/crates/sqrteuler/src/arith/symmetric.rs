use std::collections::BTreeMap;

use super::monomial::Monomial;
use super::poly::Poly;
use super::vars::{VarId, VarSet};
use super::{ArithError, Rat};

/// The elementary symmetric polynomial `e_i` in the given variables.
pub fn elementary_poly(vars: &VarSet, u_vars: &[VarId], i: usize) -> Poly {
    let n = u_vars.len();
    if i > n {
        return Poly::zero(vars);
    }
    let mut out = Poly::zero(vars);
    let mut idx: Vec<usize> = (0..i).collect();
    loop {
        let m = Monomial::from_pairs(vars, idx.iter().map(|&k| (u_vars[k], 1)).collect());
        out.add_term(m, Rat::from_integer(1.into()));
        // next combination
        let mut j = i;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if idx[j] != j + n - i {
                break;
            }
            if j == 0 {
                return out;
            }
        }
        idx[j] += 1;
        for k in j + 1..i {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Rewrite a polynomial, symmetric in `u_vars` up to its cap, in the
/// elementary symmetric polynomials `s_vars` of the target table
/// (classical Gauss descent on the lex-leading exponent).
///
/// Non-`u` variables of `f` are carried over through the `carry` pairs
/// `(source var, target var)`. Fails with [`ArithError::NotSymmetric`]
/// when the input is not symmetric.
pub fn to_elementary_symmetric(
    f: &Poly,
    u_vars: &[VarId],
    target: &VarSet,
    s_vars: &[VarId],
    carry: &[(VarId, VarId)],
) -> Result<Poly, ArithError> {
    let n = u_vars.len();
    if s_vars.len() != n {
        return Err(ArithError::Domain(format!(
            "need {n} elementary variables, got {}",
            s_vars.len()
        )));
    }
    let cap = f.cap();
    let carry_map: BTreeMap<VarId, VarId> = carry.iter().copied().collect();

    let mut rest = f.clone();
    let mut out = Poly::zero(target);
    while !rest.is_zero() {
        // group terms by u-exponent vector, pick the lex-greatest vector
        let mut groups: BTreeMap<Vec<u32>, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in rest.terms() {
            let key: Vec<u32> = u_vars.iter().map(|&v| m.exponent(v)).collect();
            groups.entry(key).or_default().push((m.clone(), c.clone()));
        }
        let (lead, terms) = groups.into_iter().next_back().expect("nonempty");
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(ArithError::NotSymmetric);
        }
        // s-monomial exponents: lead_i - lead_{i+1}
        let mut s_exps: Vec<(VarId, u32)> = Vec::new();
        let mut e_factor = Poly::one(f.vars()).with_cap(cap);
        for i in 0..n {
            let next = if i + 1 < n { lead[i + 1] } else { 0 };
            let e = lead[i] - next;
            if e > 0 {
                s_exps.push((s_vars[i], e));
                e_factor = e_factor
                    .checked_mul(&elementary_poly(f.vars(), u_vars, i + 1).pow(e), cap)
                    .expect("same table");
            }
        }
        let s_mono = Monomial::from_pairs(target, s_exps);
        for (m, c) in terms {
            // cofactor: the non-u part of the term, carried into the target
            let mut carried: Vec<(VarId, u32)> = Vec::new();
            for (v, e) in m.iter() {
                if u_vars.contains(&v) {
                    continue;
                }
                let tv = carry_map.get(&v).copied().ok_or_else(|| {
                    ArithError::Domain(format!(
                        "variable {} has no image in the target table",
                        f.vars().name(v)
                    ))
                })?;
                carried.push((tv, e));
            }
            let full = s_mono.mul(&Monomial::from_pairs(target, carried));
            out.add_term(full, c.clone());
            // subtract c * cofactor * prod e_i^{..} from the remainder
            let cof = Monomial::from_pairs(
                f.vars(),
                m.iter().filter(|(v, _)| !u_vars.contains(v)).collect(),
            );
            let sub = e_factor
                .checked_mul(&Poly::term(f.vars(), cof, -c.clone()), cap)
                .expect("same table");
            rest = &rest + &sub;
        }
    }
    Ok(out.with_cap(cap))
}

/// Back-substitution `s_i -> e_i(u)`; inverse of [`to_elementary_symmetric`]
/// on symmetric inputs up to the cap.
pub fn from_elementary_symmetric(
    g: &Poly,
    s_vars: &[VarId],
    target: &VarSet,
    u_vars: &[VarId],
    carry: &[(VarId, VarId)],
) -> Poly {
    let carry_map: BTreeMap<VarId, VarId> = carry.iter().copied().collect();
    let mut images: Vec<Poly> = Vec::with_capacity(g.vars().len());
    for v in g.vars().ids() {
        if let Some(pos) = s_vars.iter().position(|&s| s == v) {
            images.push(elementary_poly(target, u_vars, pos + 1));
        } else if let Some(&tv) = carry_map.get(&v) {
            images.push(Poly::var(target, tv));
        } else {
            images.push(Poly::zero(target));
        }
    }
    g.substitute(target, &images, g.cap())
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn setup2() -> (VarSet, Vec<VarId>, VarSet, Vec<VarId>) {
        let ut = VarSet::new(&[("u1", 1), ("u2", 1)]);
        let st = VarSet::new(&[("s1", 1), ("s2", 2)]);
        let uv = vec![ut.id("u1").unwrap(), ut.id("u2").unwrap()];
        let sv = vec![st.id("s1").unwrap(), st.id("s2").unwrap()];
        (ut, uv, st, sv)
    }

    #[test]
    fn e1_and_e2() {
        let (ut, uv, st, sv) = setup2();
        let u1 = Poly::var(&ut, uv[0]);
        let u2 = Poly::var(&ut, uv[1]);
        let s1 = Poly::var(&st, sv[0]);
        let s2 = Poly::var(&st, sv[1]);
        assert_eq!(
            to_elementary_symmetric(&(&u1 + &u2), &uv, &st, &sv, &[]).unwrap(),
            s1
        );
        assert_eq!(
            to_elementary_symmetric(&(&u1 * &u2), &uv, &st, &sv, &[]).unwrap(),
            s2
        );
    }

    #[test]
    fn power_sum_via_newton() {
        // p_2 = e_1^2 - 2 e_2
        let (ut, uv, st, sv) = setup2();
        let u1 = Poly::var(&ut, uv[0]);
        let u2 = Poly::var(&ut, uv[1]);
        let s1 = Poly::var(&st, sv[0]);
        let s2 = Poly::var(&st, sv[1]);
        let p2 = &u1.pow(2) + &u2.pow(2);
        let got = to_elementary_symmetric(&p2, &uv, &st, &sv, &[]).unwrap();
        let expect = &s1.pow(2) - &s2.scale(&rat(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn rejects_non_symmetric() {
        let (ut, uv, st, sv) = setup2();
        let u1 = Poly::var(&ut, uv[0]);
        assert_eq!(
            to_elementary_symmetric(&u1, &uv, &st, &sv, &[]).unwrap_err(),
            ArithError::NotSymmetric
        );
    }

    #[test]
    fn round_trip() {
        let (ut, uv, st, sv) = setup2();
        let u1 = Poly::var(&ut, uv[0]);
        let u2 = Poly::var(&ut, uv[1]);
        let f = &(&(&u1 + &u2).pow(3) + &(&u1 * &u2)) + &Poly::one(&ut);
        let g = to_elementary_symmetric(&f, &uv, &st, &sv, &[]).unwrap();
        let back = from_elementary_symmetric(&g, &sv, &ut, &uv, &[]);
        assert_eq!(back, f);
    }
}
