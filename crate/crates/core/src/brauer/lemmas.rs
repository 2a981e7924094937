use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{
    add_absorbed, power_step, same_b, same_omega, strip, twist_step, BrauerSymbol, Derivation,
    Rule, Step, StepParam,
};
use crate::coeff::{inv_mod, ResidueElem};
use crate::error::{Error, Result};
use crate::extension::{classify, witt_reduce, Classification, RamReport};
use crate::valued::LaurentElem;
use crate::witt::{factorial_ratio, WittVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl HypothesisCheck {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `b^e` for any integer `e`.
fn powi(b: &LaurentElem, e: i64) -> Result<LaurentElem> {
    b.powi(e)
}

fn scalar(spec_like: &LaurentElem, n: i64) -> LaurentElem {
    LaurentElem::from_int(spec_like.spec(), n)
}

/// The split derivation of `[(0, r c^(pi) b^(p-i)), b)`.
///
/// After stripping the zero, with `n = p - i mod p` and `A = n^(-1) R`:
/// `[R, b) = n[A, b) = [A, b^n) ≅ [A, b^(p-i)) = [A, A) + [A, n r^(-1) c^(-pi))`,
/// where the first summand is absorbed and the second has a `p`-th power in
/// its second slot.
pub fn lemma53_split(r: i64, i: i64, c: &LaurentElem, b: &LaurentElem) -> Result<Derivation> {
    let p = b.p() as i64;
    let big_r = &(&scalar(b, r) * &powi(c, p * i)?) * &powi(b, p - i)?;
    let zero = LaurentElem::exact_zero(b.spec());
    let s = BrauerSymbol::new(WittVector::new(vec![zero, big_r]), b.clone())?;
    lemma53_on(&s, r, i, c)
}

fn lemma53_on(s: &BrauerSymbol, r: i64, i: i64, c: &LaurentElem) -> Result<Derivation> {
    let b = s.b().clone();
    let p = s.p() as i64;
    if s.m() != 2 {
        return Err(Error::HypothesisViolation(format!(
            "length-2 symbol expected, got {s}"
        )));
    }
    if i.rem_euclid(p) == 0 {
        return Err(Error::HypothesisViolation(format!(
            "i = {i} is divisible by p = {p}"
        )));
    }
    let mut d = Derivation::trivial(s);
    let (step, short) = strip(s)?;
    d.push(step)?;
    let r_mod = r.rem_euclid(p);
    if c.is_zero() || r_mod == 0 {
        d.push(Step::new(Rule::ZeroOmega, vec![short], vec![]))?;
        return Ok(d);
    }
    let n = (p - i).rem_euclid(p);
    let big_r = short.omega().component(0).clone();
    let a = big_r.scale(&b.spec().from_int(inv_mod(n as u64, p as u64) as i64))?;
    let piece = BrauerSymbol::new(WittVector::new(vec![a.clone()]), b.clone())?;
    // split [R, b) into n copies of [A, b)
    let mut rest = short;
    for _ in 1..n {
        let remaining = BrauerSymbol::new(
            WittVector::new(vec![rest.omega().component(0) - &a]),
            b.clone(),
        )?;
        let (step, merged) = same_b(&piece, &remaining)?;
        debug_assert!(merged.approx_eq(&rest));
        d.push(
            Step {
                lhs: step.lhs,
                rhs: vec![rest.clone()],
                ..step
            }
            .reversed(),
        )?;
        rest = remaining;
    }
    // merge them into [A, b^n)
    let mut acc = rest;
    for _ in 1..n {
        let (step, merged) = same_omega(&acc, &piece)?;
        d.push(step)?;
        acc = merged;
    }
    let q = Integer::div_floor(&(p - i - n), &p);
    if q != 0 {
        let (step, adjusted) = power_step(&acc, &powi(&b, q)?)?;
        d.push(step)?;
        acc = adjusted;
    }
    // [A, b^(p-i)) = [A, A) + [A, b^(p-i)/A)
    let first = BrauerSymbol::new(acc.omega().clone(), a.clone())?;
    let second = BrauerSymbol::new(acc.omega().clone(), acc.b().checked_div(&a)?)?;
    d.push(
        Step::new(
            Rule::SameOmega,
            vec![first.clone(), second.clone()],
            vec![acc],
        )
        .reversed(),
    )?;
    d.push(Step::new(Rule::Absorb, vec![first], vec![]))?;
    let unit = (n * inv_mod(r_mod as u64, p as u64) as i64).rem_euclid(p);
    let root = powi(c, -i)?.scale(&b.spec().from_int(unit))?;
    d.push(Step::new(Rule::NormSplit, vec![second], vec![]).with_param(StepParam::Root(root)))?;
    Ok(d)
}

/// `[(ω1, ω2), b) ≅ [(ω1 + b, ω2), b)` when `ω1 = c^p`.
///
/// Adds the split symbol `[(b, 0), b)`, then cancels the cross terms
/// `κ_i c^(pi) b^(p-i)` of the Witt sum with split symbols of the shape
/// handled by [`lemma53_split`].
pub fn lemma54_rewrite(s: &BrauerSymbol) -> Result<(BrauerSymbol, Derivation)> {
    if s.m() != 2 {
        return Err(Error::HypothesisViolation(format!(
            "length-2 symbol expected, got {s}"
        )));
    }
    let c = s.omega().component(0).pth_root()?;
    let b = s.b().clone();
    let p = s.p() as i64;
    let mut d = add_absorbed(s)?;
    let mut cur = d.result().expect("single symbol").clone();
    if !c.is_zero() {
        for i in 1..p {
            let kappa = (factorial_ratio(p as u64, i as u64) % p).to_i64().unwrap();
            let sub = lemma53_split(kappa, i, &c, &b)?;
            let corr = sub.start[0].clone();
            d.push(
                Step::new(Rule::Lemma53, vec![corr.clone()], vec![])
                    .with_sub(sub)
                    .reversed(),
            )?;
            let (step, merged) = same_b(&cur, &corr)?;
            d.push(step)?;
            cur = merged;
        }
    }
    let target = BrauerSymbol::new(
        WittVector::new(vec![
            s.omega().component(0) + &b,
            s.omega().component(1).clone(),
        ]),
        b,
    )?;
    if !cur.approx_eq(&target) {
        return Err(Error::RuleViolation(format!(
            "rewrite reached {cur}, expected {target}"
        )));
    }
    Ok((target, d))
}

/// Wraps a finished sub-derivation from `s` to `t` as one `Lemma54` step.
pub(crate) fn lemma54_step(s: &BrauerSymbol) -> Result<(Step, BrauerSymbol)> {
    let (t, sub) = lemma54_rewrite(s)?;
    Ok((
        Step::new(Rule::Lemma54, vec![s.clone()], vec![t.clone()]).with_sub(sub),
        t,
    ))
}

fn check_b_coprime(s: &BrauerSymbol) -> Result<i64> {
    let vb = s.b().val()?;
    if vb.rem_euclid(s.p() as i64) == 0 {
        return Err(Error::HypothesisViolation(format!(
            "p = {} divides v(b) = {vb}",
            s.p()
        )));
    }
    Ok(vb)
}

fn adjust_below(s: &BrauerSymbol, bound: i64, d: &mut Derivation) -> Result<BrauerSymbol> {
    let vb = s.b().val()?;
    let q = (s.p() as i64).pow(s.m() as u32);
    // smallest r >= 0 with vb - q r < bound
    let r = if vb < bound {
        0
    } else {
        Integer::div_floor(&(vb - bound), &q) + 1
    };
    if r == 0 {
        return Ok(s.clone());
    }
    let (step, t) = power_step(s, &LaurentElem::t_pow(s.spec(), -r))?;
    d.push(step)?;
    Ok(t)
}

/// Twists `ω` by Frobenius when some component is not a `p`-th power, then
/// pushes `v(b)` below `min(0, v(ω_i))`. Already normalized symbols come
/// back unchanged with an empty derivation.
pub fn normalize_symbol(s: &BrauerSymbol) -> Result<(BrauerSymbol, Derivation)> {
    check_b_coprime(s)?;
    let mut d = Derivation::trivial(s);
    let mut cur = s.clone();
    if cur
        .omega()
        .components()
        .iter()
        .any(|c| c.pth_root().is_err())
    {
        let (step, t) = twist_step(&cur, 1);
        d.push(step)?;
        cur = t;
    }
    let bound = cur
        .omega()
        .components()
        .iter()
        .map(LaurentElem::val_lower_bound)
        .fold(0, i64::min);
    let out = adjust_below(&cur, bound, &mut d)?;
    Ok((out, d))
}

/// Pushes `v(b)` below `min(0, v(ω1))` only.
pub fn normalize_first_component(s: &BrauerSymbol) -> Result<(BrauerSymbol, Derivation)> {
    check_b_coprime(s)?;
    let mut d = Derivation::trivial(s);
    let bound = s.omega().component(0).val_lower_bound().min(0);
    let out = adjust_below(s, bound, &mut d)?;
    Ok((out, d))
}

#[derive(Debug, Clone, Serialize)]
pub enum SplitCheck {
    Split(Derivation),
    Unknown,
}

impl SplitCheck {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitCheck::Split(_))
    }
}

/// Sufficient conditions for `[ω, b)` to be split; `Unknown` otherwise.
pub fn is_split_quick(s: &BrauerSymbol) -> Result<SplitCheck> {
    let mut d = Derivation::trivial(s);
    if s.omega().is_zero() {
        d.push(Step::new(Rule::ZeroOmega, vec![s.clone()], vec![]))?;
        return Ok(SplitCheck::Split(d));
    }
    if let Ok(root) = s.b().pth_root_iter(s.m() as u32) {
        d.push(
            Step::new(Rule::NormSplit, vec![s.clone()], vec![]).with_param(StepParam::Root(root)),
        )?;
        return Ok(SplitCheck::Split(d));
    }
    if let Ok(red) = witt_reduce(s.omega()) {
        if red.reduced.is_zero() {
            let t = BrauerSymbol::new(red.reduced.clone(), s.b().clone())?;
            let step = Step::new(Rule::ArtinSchreier, vec![s.clone()], vec![t.clone()])
                .with_param(StepParam::WittGamma(red.gamma));
            d.push(step)?;
            d.push(Step::new(Rule::ZeroOmega, vec![t], vec![]))?;
            return Ok(SplitCheck::Split(d));
        }
    }
    if s.m() == 2 && s.omega().component(0).is_zero() {
        let p = s.p() as i64;
        let q = s.omega().component(1).checked_div(&s.b().powi(p - 1)?)?;
        if let Ok(c) = q.pth_root() {
            if let Ok(sub) = lemma53_on(s, 1, 1, &c) {
                return Ok(SplitCheck::Split(sub));
            }
        }
    }
    Ok(SplitCheck::Unknown)
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisionCertificate {
    pub symbol: BrauerSymbol,
    /// Constant terms of the reduced `ω`.
    pub residue: WittVector<ResidueElem>,
    pub v_b: i64,
    pub report: RamReport,
    pub hypotheses: Vec<HypothesisCheck>,
    pub valuation_argument: String,
    pub semiramified: String,
}

impl DivisionCertificate {
    /// Re-runs the analyzer and the valuation check.
    pub fn revalidate(&self) -> Result<()> {
        let again = division_certificate(self.symbol.omega(), self.symbol.b())?;
        if again.report.classification != self.report.classification || again.v_b != self.v_b {
            return Err(Error::HypothesisNotVerified(
                "certificate does not reproduce".into(),
            ));
        }
        Ok(())
    }
}

/// Issues a certificate that `[ω, b)` is a division algebra when `K_ω/K` is
/// unramified and `v(b)` is prime to `p`.
pub fn division_certificate(
    omega: &WittVector<LaurentElem>,
    b: &LaurentElem,
) -> Result<DivisionCertificate> {
    let s = BrauerSymbol::new(omega.clone(), b.clone())?;
    let p = s.p() as i64;
    let m = s.m() as u32;
    let v_b = b.val()?;
    let g = v_b.gcd(&p);
    let gcd_check = HypothesisCheck::new(
        "gcd(v(b), p) = 1",
        g == 1,
        format!("v(b) = {v_b}, gcd = {g}"),
    );
    if !gcd_check.passed {
        return Err(Error::HypothesisNotVerified(format!(
            "gcd(v(b), p) = 1 fails: v(b) = {v_b}"
        )));
    }
    let report = classify(omega)?;
    let unram = HypothesisCheck::new(
        "K_ω/K unramified",
        report.classification == Classification::Unramified,
        format!("{:?}", report.classification),
    );
    if !unram.passed {
        return Err(Error::HypothesisNotVerified(format!(
            "K_ω/K unramified fails: analyzer reports {:?}",
            report.classification
        )));
    }
    let residue = WittVector::new(
        report
            .reduced
            .components()
            .iter()
            .map(|c| c.coeff(0))
            .collect(),
    );
    let q = p.pow(m);
    Ok(DivisionCertificate {
        symbol: s,
        residue,
        v_b,
        valuation_argument: format!(
            "a zero divisor would give r·v(b) = {q}·v(α) with 0 < r < {q}; impossible since gcd({v_b}, {p}) = 1"
        ),
        semiramified: "D contains the unramified K_ω and the totally ramified K(b^(1/p^m)); its residue algebra \
                       is the residue field of K_ω"
            .into(),
        hypotheses: vec![gcd_check, unram],
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::valued::LaurentElem;

    fn t(k: crate::coeff::FieldSpec, e: i64) -> LaurentElem {
        LaurentElem::t_pow(k, e)
    }

    fn sym(omega: Vec<LaurentElem>, b: LaurentElem) -> BrauerSymbol {
        BrauerSymbol::new(WittVector::new(omega), b).unwrap()
    }

    #[test]
    fn lemma53_traces_are_self_certifying() {
        for (p, r, i) in [
            (2u64, 1i64, 1i64),
            (3, 2, 1),
            (3, 1, 2),
            (5, 3, -2),
            (3, 1, 4),
        ] {
            let k = FieldSpec::rational_function_field(p).unwrap();
            let u = LaurentElem::constant(k.u().unwrap());
            let c = &t(k, -1) + &u;
            let b = &(&t(k, 1) * &u) + &t(k, 3);
            let d = lemma53_split(r, i, &c, &b).unwrap();
            d.validate().unwrap();
            assert!(d.is_split());
            assert!(d.steps.len() >= 3, "p={p} r={r} i={i}");
        }
    }

    #[test]
    fn lemma53_degenerate_inputs() {
        let k = FieldSpec::prime_field(2).unwrap();
        let z = LaurentElem::exact_zero(k);
        let d = lemma53_split(1, 1, &z, &t(k, 1)).unwrap();
        assert!(d.is_split());
        assert!(d.start[0].omega().is_zero());
        assert!(matches!(
            lemma53_split(1, 2, &t(k, 1), &t(k, 1)),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn lemma54_examples() {
        let k = FieldSpec::prime_field(2).unwrap();
        let z = LaurentElem::exact_zero(k);
        let w2 = &t(k, 5) + &t(k, -7);
        let s = sym(vec![z.clone(), w2.clone()], t(k, 1));
        let (out, d) = lemma54_rewrite(&s).unwrap();
        assert!(out
            .omega()
            .approx_eq(&WittVector::new(vec![t(k, 1), w2.clone()])));
        d.validate().unwrap();

        let s = sym(vec![t(k, 2), w2.clone()], t(k, -1));
        let (out, d) = lemma54_rewrite(&s).unwrap();
        assert!(out
            .omega()
            .approx_eq(&WittVector::new(vec![&t(k, 2) + &t(k, -1), w2.clone()])));
        d.validate().unwrap();
        assert!(d.total_steps() > d.steps.len());

        let ku = FieldSpec::rational_function_field(2).unwrap();
        let s = sym(
            vec![
                &t(ku, 1) * &LaurentElem::constant(ku.u().unwrap()),
                LaurentElem::exact_zero(ku),
            ],
            t(ku, 1),
        );
        assert!(matches!(lemma54_rewrite(&s), Err(Error::NoRoot)));
    }

    #[test]
    fn lemma54_for_p3() {
        let k = FieldSpec::rational_function_field(3).unwrap();
        let u = LaurentElem::constant(k.u().unwrap());
        let c = &t(k, 2) + &u;
        let s = sym(vec![c.pth_power(), &t(k, -1) * &u], &t(k, -5) + &t(k, 1));
        let (out, d) = lemma54_rewrite(&s).unwrap();
        d.validate().unwrap();
        assert!(out.omega().component(1).approx_eq(s.omega().component(1)));
    }

    #[test]
    fn normalize_examples() {
        let k = FieldSpec::prime_field(2).unwrap();
        let s = sym(vec![t(k, -1), LaurentElem::one(k)], t(k, 1));
        let (out, d) = normalize_symbol(&s).unwrap();
        assert!(out
            .omega()
            .approx_eq(&WittVector::new(vec![t(k, -2), LaurentElem::one(k)])));
        assert_eq!(out.b().val().unwrap(), -3);
        d.validate().unwrap();
        let s = sym(vec![t(k, 2), t(k, 4)], t(k, -3));
        let (out, d) = normalize_symbol(&s).unwrap();
        assert_eq!(out, s);
        assert!(d.steps.is_empty());

        let k3 = FieldSpec::prime_field(3).unwrap();
        let s = sym(vec![t(k3, -9)], t(k3, 1));
        let (out, _) = normalize_symbol(&s).unwrap();
        assert_eq!(out.b().val().unwrap(), -11);

        let bad = sym(vec![t(k, -1)], t(k, 2));
        assert!(matches!(
            normalize_symbol(&bad),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn quick_split_examples() {
        let k = FieldSpec::prime_field(2).unwrap();
        let s = sym(vec![t(k, -1), t(k, -3)], t(k, 4));
        assert!(is_split_quick(&s).unwrap().is_split());
        let z = sym(vec![LaurentElem::exact_zero(k)], t(k, 1));
        assert!(is_split_quick(&z).unwrap().is_split());
        let g = sym(vec![t(k, -1)], t(k, 1));
        assert!(!is_split_quick(&g).unwrap().is_split());
        let g = &t(k, -1) + &t(k, 2);
        let as_image = sym(vec![&g.pth_power() - &g], t(k, 1));
        match is_split_quick(&as_image).unwrap() {
            SplitCheck::Split(d) => d.validate().unwrap(),
            SplitCheck::Unknown => panic!("Artin-Schreier image not detected"),
        }
        let d = lemma53_split(1, 1, &t(k, -2), &t(k, 3)).unwrap();
        assert!(is_split_quick(&d.start[0]).unwrap().is_split());
    }

    #[test]
    fn division_certificates() {
        let k = FieldSpec::rational_function_field(2).unwrap();
        let u = LaurentElem::constant(k.u().unwrap());
        let cert = division_certificate(&WittVector::new(vec![u.clone()]), &t(k, 1)).unwrap();
        assert!(cert.hypotheses.iter().all(|h| h.passed));
        cert.revalidate().unwrap();
        let e = division_certificate(&WittVector::new(vec![u.clone()]), &t(k, 2)).unwrap_err();
        assert!(matches!(e, Error::HypothesisNotVerified(ref m) if m.contains("gcd")));
        let e = division_certificate(&WittVector::new(vec![t(k, -1)]), &t(k, 1)).unwrap_err();
        assert!(matches!(e, Error::HypothesisNotVerified(ref m) if m.contains("unramified")));
    }
}
