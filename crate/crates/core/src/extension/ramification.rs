//! Ramification of Artin-Schreier-Witt data over `K = k((t))`.
//!
//! Every verdict is reached after reducing `η` modulo `F(γ) - γ`, which does
//! not change the extension; the reduction steps are recorded so that the
//! reduced vector can be recomputed from the input.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::AsMembership;
use crate::error::{Error, Result};
use crate::valued::{LaurentElem, RationalValue, DEFAULT_PRECISION};
use crate::witt::WittVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Split,
    Unramified,
    TotallyRamified,
    /// Outside the criteria implemented here.
    Unclassified,
    /// Only the first layer has been shown to be totally ramified.
    PartialEvidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AsStepKind {
    /// Cancels a pole `a·t^(pe)` with `a` a `p`-th power.
    Pole,
    /// Cancels the part of positive valuation.
    Tail,
    /// Cancels a constant in `P(k)`.
    Constant,
}

/// Subtraction of `F(w) - w` with `w = c` placed at Witt position `position`.
#[derive(Debug, Clone, Serialize)]
pub struct AsStep {
    pub position: usize,
    pub kind: AsStepKind,
    pub c: LaurentElem,
}

#[derive(Debug, Clone)]
pub struct AsReduction {
    pub reduced: LaurentElem,
    pub steps: Vec<AsStep>,
}

impl AsReduction {
    /// `input - Σ (c^p - c)`.
    pub fn replay(&self, input: &LaurentElem) -> LaurentElem {
        self.steps
            .iter()
            .fold(input.clone(), |acc, s| &acc - &(&s.c.pth_power() - &s.c))
    }
}

/// Reduces `a` modulo `P(K)`, absorbing a constant term that lies in `P(k)`.
pub fn as_reduce(a: &LaurentElem) -> Result<AsReduction> {
    as_reduce_with(a, true)
}

/// Reduction modulo `P(K)`.
///
/// Poles `a·t^(pe)` whose coefficient has a `p`-th root are cancelled from the
/// most negative upwards; the positive-valuation tail is always in `P(K)` and
/// is cancelled by `c = -Σ tail^(p^k)`; with `absorb_constant` a constant in
/// `P(k)` is cancelled too. What remains is zero, a constant outside `P(k)`,
/// or has a pole the reduction cannot touch.
pub fn as_reduce_with(a: &LaurentElem, absorb_constant: bool) -> Result<AsReduction> {
    if a.raw_precision() < 1 {
        return Err(Error::PrecisionExhausted(format!(
            "{a} does not determine its terms of valuation <= 0"
        )));
    }
    let p = a.p() as i64;
    let spec = a.spec();
    let mut cur = a.clone();
    let mut steps = Vec::new();
    let mut apply = |cur: &mut LaurentElem, c: LaurentElem, kind| {
        *cur = &*cur - &(&c.pth_power() - &c);
        steps.push(AsStep {
            position: 0,
            kind,
            c,
        });
    };
    loop {
        let pole = cur
            .terms()
            .take_while(|(e, _)| *e < 0)
            .filter(|(e, _)| e % p == 0)
            .find_map(|(e, c)| c.pth_root().ok().map(|r| (e, r)));
        match pole {
            Some((e, r)) => apply(&mut cur, LaurentElem::monomial(r, e / p), AsStepKind::Pole),
            None => break,
        }
    }
    let tail = cur.tail_above(0);
    if !tail.is_zero() {
        let prec = if cur.is_exact() {
            DEFAULT_PRECISION
        } else {
            cur.raw_precision()
        };
        let tail = tail.with_precision(prec);
        let mut sum = LaurentElem::zero(spec, prec);
        let mut pw = tail;
        while pw.val_lower_bound() < prec {
            sum = &sum + &pw;
            pw = pw.pth_power();
        }
        apply(&mut cur, -&sum, AsStepKind::Tail);
    }
    if absorb_constant {
        let a0 = cur.coeff(0);
        if !a0.is_zero() {
            if let AsMembership::Yes(g) = a0.in_as_image()? {
                apply(&mut cur, LaurentElem::constant(g), AsStepKind::Constant);
            }
        }
    }
    Ok(AsReduction {
        reduced: cur,
        steps,
    })
}

/// Applies `η ← η - (F(w) - w)` for each step, in order.
pub fn replay_witt(
    eta: &WittVector<LaurentElem>,
    steps: &[AsStep],
) -> Result<WittVector<LaurentElem>> {
    steps.iter().try_fold(eta.clone(), |acc, s| {
        let w = placed(eta, s.position, s.c.clone());
        acc.witt_sub(&w.frobenius_twist(1).witt_sub(&w)?)
    })
}

fn placed(
    like: &WittVector<LaurentElem>,
    position: usize,
    c: LaurentElem,
) -> WittVector<LaurentElem> {
    let mut comps = vec![LaurentElem::exact_zero(c.spec()); like.len()];
    comps[position] = c;
    WittVector::new(comps)
}

#[derive(Debug, Clone)]
pub struct WittReduction {
    pub reduced: WittVector<LaurentElem>,
    pub steps: Vec<AsStep>,
    /// `Σ w` over all steps, so that `reduced = η - (F(γ) - γ)`.
    pub gamma: WittVector<LaurentElem>,
}

/// Reduces each component in turn, lowest position first.
///
/// A step at position `j` subtracts `V^j(c^p - c)`, which leaves components
/// below `j` untouched.
pub fn witt_reduce(eta: &WittVector<LaurentElem>) -> Result<WittReduction> {
    let mut cur = eta.clone();
    let mut steps = Vec::new();
    let mut gamma = WittVector::zero(eta.component(0), eta.len());
    for j in 0..eta.len() {
        let r = as_reduce(cur.component(j))?;
        for mut s in r.steps {
            s.position = j;
            let w = placed(eta, j, s.c.clone());
            cur = cur.witt_sub(&w.frobenius_twist(1).witt_sub(&w)?)?;
            gamma = gamma.witt_add(&w)?;
            steps.push(s);
        }
    }
    Ok(WittReduction {
        reduced: cur,
        steps,
        gamma,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RamReport {
    pub classification: Classification,
    pub input: WittVector<LaurentElem>,
    pub reduced: WittVector<LaurentElem>,
    pub trace: Vec<AsStep>,
    pub gamma: WittVector<LaurentElem>,
    pub evidence: BTreeMap<String, RationalValue>,
    pub notes: Vec<String>,
}

impl RamReport {
    fn new(
        input: &WittVector<LaurentElem>,
        red: WittReduction,
        classification: Classification,
    ) -> Self {
        RamReport {
            classification,
            input: input.clone(),
            reduced: red.reduced,
            trace: red.steps,
            gamma: red.gamma,
            evidence: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn with(mut self, key: &str, v: RationalValue) -> Self {
        self.evidence.insert(key.to_string(), v);
        self
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    /// Recomputes the reduced vector from the input and the trace.
    pub fn replay_matches(&self) -> Result<bool> {
        Ok(replay_witt(&self.input, &self.trace)?.approx_eq(&self.reduced))
    }
}

fn is_integral(a: &LaurentElem) -> bool {
    a.terms().all(|(e, _)| e >= 0)
}

/// Degree-`p` classification of `x^p - x = ω1`.
pub fn classify_deg_p(omega1: &LaurentElem) -> Result<RamReport> {
    let input = WittVector::new(vec![omega1.clone()]);
    let red = witt_reduce(&input)?;
    let r = red.reduced.component(0).clone();
    let p = omega1.p() as i64;
    let report = RamReport::new(&input, red, Classification::Split);
    let Some((v, lead)) = r.leading() else {
        return Ok(report.note("ω1 lies in P(K)"));
    };
    let report = report.with("v(omega1')", RationalValue::integer(v));
    Ok(if v < 0 && v % p != 0 {
        RamReport {
            classification: Classification::TotallyRamified,
            ..report
        }
        .with("v(x1)", RationalValue::new(v, p))
    } else if v < 0 {
        RamReport {
            classification: Classification::Unclassified,
            ..report
        }
        .note(format!(
            "reduction stalls: leading coefficient {lead} is not a p-th power"
        ))
    } else {
        RamReport {
            classification: Classification::Unramified,
            ..report
        }
        .with("v(x1)", RationalValue::integer(0))
        .note(format!("residue class {lead} lies outside P(k)"))
    })
}

/// Checks the valuation criterion `v(η1) < 0`, `p ∤ v(η1)`, `v(η2) > v(η1)`.
pub fn lemma52_holds(eta: &WittVector<LaurentElem>) -> bool {
    if eta.len() != 2 {
        return false;
    }
    let p = eta.p() as i64;
    match eta.component(0).leading() {
        Some((v1, _)) => v1 < 0 && v1 % p != 0 && eta.component(1).val_lower_bound() > v1,
        None => false,
    }
}

/// `(v(x1), v(x2))` for `η` meeting the valuation criterion.
pub fn newton_valuations(eta: &WittVector<LaurentElem>) -> Result<(RationalValue, RationalValue)> {
    if !lemma52_holds(eta) {
        return Err(Error::HypothesisViolation(format!(
            "{eta} needs v(η1) < 0, p ∤ v(η1) and v(η2) > v(η1)"
        )));
    }
    let p = eta.p() as i64;
    let v1 = eta.component(0).val()?;
    let x1 = RationalValue::new(v1, p);
    let x2 = RationalValue::integer((p - 1) * v1).add(&x1).div_int(p);
    Ok((x1, x2))
}

/// Length-2 classification.
pub fn classify_len2(eta: &WittVector<LaurentElem>) -> Result<RamReport> {
    if eta.len() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "expected length 2, got {}",
            eta.len()
        )));
    }
    let red = witt_reduce(eta)?;
    let (r1, r2) = (
        red.reduced.component(0).clone(),
        red.reduced.component(1).clone(),
    );
    let p = eta.p() as i64;
    let perfect = r1.spec().is_perfect();
    let reduced = red.reduced.clone();
    let report = RamReport::new(eta, red, Classification::Unclassified);
    let Some((v1, lead)) = r1.leading() else {
        return Ok(if r2.is_zero() {
            RamReport {
                classification: Classification::Split,
                ..report
            }
        } else {
            report.note("first component lies in P(K); K_η is not a field")
        });
    };
    let report = report.with("v(eta1')", RationalValue::integer(v1));
    if v1 < 0 && v1 % p != 0 {
        // Reduction carries can push poles into the second component, so the
        // raw vector may meet the criterion when the reduced one does not.
        if let Some(w) = [&reduced, eta].into_iter().find(|w| lemma52_holds(w)) {
            let (x1, x2) = newton_valuations(w)?;
            return Ok(RamReport {
                classification: Classification::TotallyRamified,
                ..report
            }
            .with("v(x1)", x1)
            .with("v(x2)", x2));
        }
        if perfect {
            // The inertia group of a cyclic extension with perfect residue
            // field is all of it once the degree-p layer is totally ramified.
            return Ok(RamReport {
                classification: Classification::TotallyRamified,
                ..report
            }
            .with("v(x1)", RationalValue::new(v1, p))
            .note(
                "perfect residue field: totally ramified first layer forces total ramification",
            ));
        }
        return Ok(
            report.note("first layer totally ramified; second component too negative to conclude")
        );
    }
    if v1 < 0 {
        return Ok(report.note(format!(
            "reduction stalls: leading coefficient {lead} is not a p-th power"
        )));
    }
    if is_integral(&r2) {
        return Ok(RamReport {
            classification: Classification::Unramified,
            ..report
        }
        .note(format!(
            "integral with residue class {lead} outside P(k): inertial lift"
        )));
    }
    Ok(report.note("first layer unramified; second component has poles"))
}

/// Dispatches on the length of `η`; lengths 3 and 4 get first-layer evidence only.
pub fn classify(eta: &WittVector<LaurentElem>) -> Result<RamReport> {
    match eta.len() {
        1 => classify_deg_p(eta.component(0)),
        2 => classify_len2(eta),
        _ => classify_long(eta),
    }
}

fn classify_long(eta: &WittVector<LaurentElem>) -> Result<RamReport> {
    let red = witt_reduce(eta)?;
    let reduced = red.reduced.clone();
    let p = eta.p() as i64;
    let report = RamReport::new(eta, red, Classification::Unclassified);
    let Some((v1, _)) = reduced.component(0).leading() else {
        return Ok(if reduced.is_zero() {
            RamReport {
                classification: Classification::Split,
                ..report
            }
        } else {
            report.note("first component lies in P(K); K_η is not a field")
        });
    };
    let report = report.with("v(eta1')", RationalValue::integer(v1));
    if v1 < 0 && v1 % p != 0 {
        return Ok(RamReport {
            classification: Classification::PartialEvidence,
            ..report
        }
        .with("v(x1)", RationalValue::new(v1, p))
        .note("degree-p layer totally ramified"));
    }
    if v1 >= 0 && reduced.components().iter().all(is_integral) {
        return Ok(RamReport {
            classification: Classification::Unramified,
            ..report
        }
        .note("integral with first residue component outside P(k): inertial lift"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::ring::CharPRing;

    fn t(k: FieldSpec, e: i64) -> LaurentElem {
        LaurentElem::t_pow(k, e)
    }

    fn u(k: FieldSpec) -> LaurentElem {
        LaurentElem::constant(k.u().unwrap())
    }

    #[test]
    fn reduce_even_pole_over_f2() {
        let k = FieldSpec::prime_field(2).unwrap();
        let r = as_reduce(&t(k, -2)).unwrap();
        assert_eq!(r.reduced, t(k, -1));
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].c, t(k, -1));
        assert!(r.replay(&t(k, -2)).approx_eq(&r.reduced));
    }

    #[test]
    fn artin_schreier_images_collapse() {
        let k = FieldSpec::rational_function_field(3).unwrap();
        let g = &(&t(k, -2) * &u(k)) + &(&t(k, 1) + &u(k));
        let a = &CharPRing::pow(&g, 3) - &g;
        let r = as_reduce(&a).unwrap();
        assert!(r.reduced.is_zero(), "{}", r.reduced);
        assert!(r.replay(&a).approx_eq(&r.reduced));
    }

    #[test]
    fn non_root_coefficient_is_left_alone() {
        let k = FieldSpec::rational_function_field(2).unwrap();
        let a = &t(k, -2) * &u(k);
        let r = as_reduce(&a).unwrap();
        assert_eq!(r.reduced, a);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn degree_p_examples() {
        let k = FieldSpec::prime_field(2).unwrap();
        let rep = classify_deg_p(&t(k, -1)).unwrap();
        assert_eq!(rep.classification, Classification::TotallyRamified);
        assert_eq!(rep.evidence["v(x1)"], RationalValue::new(-1, 2));
        let ku = FieldSpec::rational_function_field(2).unwrap();
        assert_eq!(
            classify_deg_p(&u(ku)).unwrap().classification,
            Classification::Unramified
        );
        let tail = &t(k, 2) + &t(k, 5);
        assert_eq!(
            classify_deg_p(&tail).unwrap().classification,
            Classification::Split
        );
        let stalled = &t(ku, -2) * &u(ku);
        assert_eq!(
            classify_deg_p(&stalled).unwrap().classification,
            Classification::Unclassified
        );
    }

    #[test]
    fn length_two_examples() {
        let k = FieldSpec::prime_field(2).unwrap();
        let eta = WittVector::new(vec![t(k, -1), LaurentElem::exact_zero(k)]);
        let rep = classify_len2(&eta).unwrap();
        assert_eq!(rep.classification, Classification::TotallyRamified);
        assert_eq!(rep.evidence["v(x1)"], RationalValue::new(-1, 2));
        assert_eq!(rep.evidence["v(x2)"], RationalValue::new(-3, 4));

        let ku = FieldSpec::rational_function_field(2).unwrap();
        let u3 = CharPRing::pow(&u(ku), 3);
        let eta = WittVector::new(vec![u(ku), u3]);
        assert_eq!(
            classify_len2(&eta).unwrap().classification,
            Classification::Unramified
        );

        let eta = WittVector::new(vec![&t(ku, -2) * &u(ku), t(ku, -5)]);
        assert_eq!(
            classify_len2(&eta).unwrap().classification,
            Classification::Unclassified
        );
    }

    #[test]
    fn criterion_checked_before_reduction_carries() {
        // removing the t^-2 term carries a pole of order below 5 into η2
        let k = FieldSpec::rational_function_field(2).unwrap();
        let eta = WittVector::new(vec![&(&t(k, -5) + &t(k, -2)) + &t(k, 3), u(k)]);
        let red = witt_reduce(&eta).unwrap();
        assert!(lemma52_holds(&eta) && !lemma52_holds(&red.reduced));
        let rep = classify_len2(&eta).unwrap();
        assert_eq!(rep.classification, Classification::TotallyRamified);
        assert_eq!(rep.evidence["v(x2)"], RationalValue::new(-15, 4));
    }

    #[test]
    fn newton_valuation_examples() {
        let cases = [
            (2u64, -1i64, (-1, 2), (-3, 4)),
            (3, -1, (-1, 3), (-7, 9)),
            (2, -3, (-3, 2), (-9, 4)),
        ];
        for (p, v, x1, x2) in cases {
            let k = FieldSpec::prime_field(p).unwrap();
            let eta = WittVector::new(vec![t(k, v), LaurentElem::exact_zero(k)]);
            let (a, b) = newton_valuations(&eta).unwrap();
            assert_eq!(a, RationalValue::new(x1.0, x1.1));
            assert_eq!(b, RationalValue::new(x2.0, x2.1));
        }
        let k = FieldSpec::prime_field(2).unwrap();
        let bad = WittVector::new(vec![t(k, -1), t(k, -3)]);
        assert!(matches!(
            newton_valuations(&bad),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn witt_reduction_replays() {
        let k = FieldSpec::prime_field(3).unwrap();
        let eta = WittVector::new(vec![&t(k, -3) + &t(k, -1), &t(k, -6) + &t(k, 2)]);
        let red = witt_reduce(&eta).unwrap();
        assert!(replay_witt(&eta, &red.steps)
            .unwrap()
            .approx_eq(&red.reduced));
        let via_gamma = eta
            .witt_sub(&red.gamma.frobenius_twist(1).witt_sub(&red.gamma).unwrap())
            .unwrap();
        assert!(via_gamma.approx_eq(&red.reduced));
        let rep = classify_len2(&eta).unwrap();
        assert_eq!(rep.classification, Classification::TotallyRamified);
        assert!(rep.replay_matches().unwrap());
    }

    #[test]
    fn low_precision_is_reported() {
        let k = FieldSpec::prime_field(2).unwrap();
        let a = LaurentElem::zero(k, 0);
        assert!(matches!(
            classify_deg_p(&a),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn long_vectors_get_partial_evidence() {
        let k = FieldSpec::prime_field(2).unwrap();
        let z = LaurentElem::exact_zero(k);
        let eta = WittVector::new(vec![t(k, -1), z.clone(), z]);
        assert_eq!(
            classify(&eta).unwrap().classification,
            Classification::PartialEvidence
        );
    }
}
