use palg_core::brauer::{add_absorbed, lemma54_rewrite, normalize_symbol, StepParam};
use palg_core::extension::{classify, classify_deg_p};
use palg_core::oracle::{ghost_check, newton_classify, NewtonVerdict};
use palg_core::theorems::{
    build_disjoint_division_pair, conjecture_roundtrip, cyclic_to_insep, insep_to_cyclic_p,
    insep_to_cyclic_p2, insep_to_cyclic_perfect, DivisionPair,
};
use palg_core::{
    parse_laurent, parse_symbol, parse_witt, random, BrauerSymbol, Derivation, DivisionCertificate,
    Error, EvidenceBundle, FieldSpec, LaurentElem, Printer, RamReport, Step, SubfieldWitness,
    WittVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, to_value, Value};

use crate::report::{Outcome, SessionConfig};

type Res = Result<Outcome, Error>;

pub struct Ctx<'a> {
    pub cfg: &'a SessionConfig,
    pub k: FieldSpec,
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    to_value(x).expect("serializable")
}

impl Ctx<'_> {
    fn pr(&self) -> Printer {
        Printer {
            default_prec: Some(self.cfg.precision),
        }
    }

    fn check_len(&self, what: &str, m: usize) -> Result<(), Error> {
        if m != self.cfg.m {
            return Err(Error::ShapeMismatch(format!(
                "{what} has length {m} but --m is {}",
                self.cfg.m
            )));
        }
        Ok(())
    }

    fn laurent(&self, src: &str) -> Result<LaurentElem, Error> {
        parse_laurent(src, self.k, self.cfg.precision)
    }

    /// A Witt vector; for `m = 1` a bare series is accepted too.
    fn witt(&self, src: &str) -> Result<WittVector<LaurentElem>, Error> {
        let w = if src.trim_start().starts_with('[') {
            parse_witt(src, self.k, self.cfg.precision)?
        } else {
            WittVector::new(vec![self.laurent(src)?])
        };
        self.check_len(&format!("Witt vector {src}"), w.len())?;
        Ok(w)
    }

    fn symbol(&self, src: &str) -> Result<BrauerSymbol, Error> {
        let s = parse_symbol(src, self.k, self.cfg.precision)?;
        self.check_len(&format!("symbol {src}"), s.m())?;
        Ok(s)
    }

    fn step_line(&self, s: &Step) -> String {
        let pr = self.pr();
        let side = |v: &[BrauerSymbol]| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter()
                    .map(|x| pr.symbol(x))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        let mut line = format!(
            "{:?}: {} => {}",
            s.rule,
            side(s.consumed()),
            side(s.produced())
        );
        if s.reversed {
            line.push_str(" (reversed)");
        }
        match &s.param {
            Some(StepParam::Twist(r)) => line.push_str(&format!(" [r = {r}]")),
            Some(StepParam::Gamma(g)) => line.push_str(&format!(" [γ = {}]", pr.laurent(g))),
            Some(StepParam::Root(g)) => line.push_str(&format!(" [root = {}]", pr.laurent(g))),
            Some(StepParam::WittGamma(g)) => line.push_str(&format!(" [γ = {}]", pr.witt(g))),
            None => {}
        }
        if let Some(sub) = &s.sub {
            line.push_str(&format!(" [sub-derivation: {} steps]", sub.total_steps()));
        }
        line
    }

    fn derivation_lines(&self, out: &mut Outcome, d: &Derivation) {
        out.line(format!(
            "derivation: {} steps ({} with sub-derivations)",
            d.steps.len(),
            d.total_steps()
        ));
        for (i, s) in d.steps.iter().enumerate() {
            out.line(format!("  {}. {}", i + 1, self.step_line(s)));
        }
    }

    fn report_lines(&self, out: &mut Outcome, r: &RamReport, indent: &str) {
        let pr = self.pr();
        out.line(format!("{indent}classification: {:?}", r.classification));
        out.line(format!("{indent}reduced: {}", pr.witt(&r.reduced)));
        for (k, v) in &r.evidence {
            out.line(format!("{indent}{k} = {v}"));
        }
        for n in &r.notes {
            out.line(format!("{indent}note: {n}"));
        }
    }

    pub fn witt_add(&self, a: &str, b: &str) -> Res {
        let (x, y) = (self.witt(a)?, self.witt(b)?);
        let r = x.witt_add(&y)?;
        let mut out = Outcome::new("ok");
        out.line(self.pr().witt(&r));
        out.evidence = json!({ "result": self.pr().witt(&r) });
        Ok(out)
    }

    pub fn witt_neg(&self, a: &str) -> Res {
        let r = self.witt(a)?.witt_neg()?;
        let mut out = Outcome::new("ok");
        out.line(self.pr().witt(&r));
        out.evidence = json!({ "result": self.pr().witt(&r) });
        Ok(out)
    }

    pub fn ram_analyze(&self, omega: &str) -> Res {
        let w = self.witt(omega)?;
        let r = classify(&w)?;
        let replay = r.replay_matches()?;
        let mut out = Outcome::new(format!("{:?}", r.classification));
        out.line(format!("omega: {}", self.pr().witt(&w)));
        for s in &r.trace {
            out.line(format!(
                "  reduce position {}: {:?} with c = {}",
                s.position,
                s.kind,
                self.pr().laurent(&s.c)
            ));
        }
        self.report_lines(&mut out, &r, "");
        out.line(format!(
            "trace replays: {}",
            if replay { "yes" } else { "no" }
        ));
        out.trace = value(&r.trace);
        out.evidence = json!({ "report": value(&r), "replay_matches": replay });
        if !replay {
            out.exit = 1;
        }
        Ok(out)
    }

    pub fn symbol_normalize(&self, src: &str) -> Res {
        let s = self.symbol(src)?;
        let (t, d) = normalize_symbol(&s)?;
        let mut out = Outcome::new("normalized");
        self.derivation_lines(&mut out, &d);
        out.line(format!("result: {}", self.pr().symbol(&t)));
        out.trace = value(&d.steps);
        out.evidence = json!({ "result": self.pr().symbol(&t), "derivation": value(&d) });
        Ok(out)
    }

    pub fn symbol_rewrite(&self, src: &str) -> Res {
        let s = self.symbol(src)?;
        let d = match s.m() {
            1 => add_absorbed(&s)?,
            2 => lemma54_rewrite(&s)?.1,
            m => {
                return Err(Error::UnsupportedCase(format!(
                    "rewrite is implemented for m <= 2, got {m}"
                )))
            }
        };
        d.validate()?;
        let t = d.result().expect("one symbol").clone();
        let mut out = Outcome::new("rewritten");
        self.derivation_lines(&mut out, &d);
        out.line(format!("result: {}", self.pr().symbol(&t)));
        out.trace = value(&d.steps);
        out.evidence = json!({ "result": self.pr().symbol(&t), "derivation": value(&d) });
        Ok(out)
    }

    fn bundle_lines(&self, out: &mut Outcome, b: &EvidenceBundle) {
        let pr = self.pr();
        out.line(format!("pipeline: {}", b.pipeline));
        out.line(format!("input: {}", pr.symbol(&b.input)));
        self.derivation_lines(out, &b.derivation);
        out.line(format!("symbol: {}", pr.symbol(&b.symbol)));
        match &b.witness {
            SubfieldWitness::PurelyInseparable {
                b,
                m,
                root_valuation,
            } => {
                let q = b.p().pow(*m as u32);
                out.line(format!(
                    "witness: K(c^(1/{q})) with c = {}, v(c^(1/{q})) = {root_valuation}",
                    pr.laurent(b)
                ));
            }
            SubfieldWitness::Cyclic { omega, report } => {
                out.line(format!("witness: K_ω′ with ω′ = {}", pr.witt(omega)));
                self.report_lines(out, report, "  ");
            }
        }
        for (k, v) in &b.extra {
            out.line(format!("{k}: {v}"));
        }
        out.line("checks:");
        for c in &b.checks {
            out.line(format!(
                "  [{}] {}: {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
    }

    fn bundle_outcome(&self, b: EvidenceBundle) -> Res {
        b.revalidate()?;
        let mut out = Outcome::new("success");
        self.bundle_lines(&mut out, &b);
        out.line("revalidated: yes");
        out.trace = value(&b.derivation.steps);
        out.evidence = value(&b);
        Ok(out)
    }

    pub fn cyclic_to_insep(&self, omega: &str, b: &str) -> Res {
        let (w, b) = (self.witt(omega)?, self.laurent(b)?);
        self.bundle_outcome(cyclic_to_insep(&w, &b)?)
    }

    pub fn insep_to_cyclic(&self, omega: &str, b: &str) -> Res {
        let (w, b) = (self.witt(omega)?, self.laurent(b)?);
        let bundle = match w.len() {
            1 => insep_to_cyclic_p(w.component(0), &b)?,
            2 => insep_to_cyclic_p2(&w, &b)?,
            m => {
                return Err(Error::UnsupportedCase(format!(
                    "m = {m}; use `thm perfect` over F_p"
                )))
            }
        };
        self.bundle_outcome(bundle)
    }

    pub fn perfect(&self, omega: &str, b: &str) -> Res {
        let (w, b) = (self.witt(omega)?, self.laurent(b)?);
        self.bundle_outcome(insep_to_cyclic_perfect(&w, &b)?)
    }

    pub fn roundtrip(&self, omega: &str, b: &str) -> Res {
        let (w, b) = (self.witt(omega)?, self.laurent(b)?);
        let r = conjecture_roundtrip(&w, &b)?;
        let mut out = Outcome::new("success");
        out.line("forward:");
        self.bundle_lines(&mut out, &r.forward);
        out.line("backward:");
        self.bundle_lines(&mut out, &r.backward);
        for c in &r.checks {
            out.line(format!(
                "[{}] {}: {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.line("revalidated: yes");
        let mut trace = r.forward.derivation.steps.clone();
        trace.extend(r.backward.derivation.steps.iter().cloned());
        out.trace = value(&trace);
        out.evidence = value(&r);
        Ok(out)
    }

    fn certificate_lines(&self, out: &mut Outcome, name: &str, c: &DivisionCertificate) {
        out.line(format!(
            "{name}: {} is a division algebra",
            self.pr().symbol(&c.symbol)
        ));
        out.line(format!("  residue class: {}", c.residue));
        for h in &c.hypotheses {
            out.line(format!(
                "  [{}] {}: {}",
                if h.passed { "pass" } else { "FAIL" },
                h.name,
                h.detail
            ));
        }
        out.line(format!("  {}", c.valuation_argument));
    }

    pub fn disjoint_pair(&self, b: &str) -> Res {
        let b = self.laurent(b)?;
        let pair: DivisionPair = build_disjoint_division_pair(&b, self.cfg.m)?;
        pair.revalidate()?;
        let mut out = Outcome::new("success");
        self.certificate_lines(&mut out, "D1", &pair.first);
        self.certificate_lines(&mut out, "D2", &pair.second);
        out.line("residue independence:");
        for h in &pair.independence {
            out.line(format!(
                "  [{}] {}",
                if h.passed { "pass" } else { "FAIL" },
                h.name
            ));
        }
        out.line(format!(
            "shared cyclic maximal subfield: {}",
            pair.shared_subfield
        ));
        out.line("revalidated: yes");
        out.evidence = value(&pair);
        Ok(out)
    }

    pub fn ghost_check(&self, samples: usize) -> Res {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let g = ghost_check(self.cfg.p, self.cfg.m, samples, &mut rng)?;
        let mut out = Outcome::new(if g.passed() { "pass" } else { "fail" });
        for n in 0..g.m {
            out.line(format!(
                "w_{n}: sum {} / negation {}",
                if g.sum_identities[n] {
                    "exact"
                } else {
                    "FAILED"
                },
                if g.neg_identities[n] {
                    "exact"
                } else {
                    "FAILED"
                }
            ));
        }
        out.line(format!(
            "sampled points: {} ({} failures)",
            g.samples, g.sample_failures
        ));
        out.evidence = value(&g);
        out.exit = if g.passed() { 0 } else { 1 };
        Ok(out)
    }

    pub fn newton_check(&self, omega1: Option<&str>, count: usize) -> Res {
        let perfect = self.k.is_perfect();
        let cases: Vec<LaurentElem> = match omega1 {
            Some(src) => vec![self.laurent(src)?],
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
                (0..count)
                    .map(|_| random::laurent(self.k, &mut rng, -6, 6, 4))
                    .collect()
            }
        };
        let mut rows = Vec::new();
        let mut disagreements = 0;
        let mut out = Outcome::new("agree");
        for w in &cases {
            let analyzer = classify_deg_p(w)?.classification;
            let newton = newton_classify(w);
            let ok = newton.agrees_with(analyzer, perfect);
            if !ok {
                disagreements += 1;
            }
            let shown = match &newton {
                NewtonVerdict::Undetermined(why) => format!("Undetermined ({why})"),
                v => format!("{v:?}"),
            };
            if omega1.is_some() || !ok {
                out.line(format!(
                    "{}: analyzer {analyzer:?}, Newton polygon {shown}",
                    self.pr().laurent(w)
                ));
            }
            rows.push(json!({ "omega1": self.pr().laurent(w), "analyzer": value(&analyzer), "newton": value(&newton), "agree": ok }));
        }
        out.line(format!(
            "agreement: {}/{}",
            cases.len() - disagreements,
            cases.len()
        ));
        if disagreements > 0 {
            out.verdict = "disagree".into();
            out.exit = 1;
        }
        out.trace = Value::Array(rows);
        out.evidence = json!({ "cases": cases.len(), "disagreements": disagreements });
        Ok(out)
    }
}
