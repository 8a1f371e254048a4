//! Checks over corpora of terms.

use std::cell::OnceCell;
use std::sync::Arc;
use std::time::Instant;

use super::{Corpus, Counterexample, PropertyReport};
use crate::gradual::{clabel_leq, interior_type, precision_type, Evidence, GLabel, GType};
use crate::gradual_statics::{elaborate, typecheck_gradual};
use crate::intrinsic::{check_intrinsic, EvTerm, IKind, ITerm};
use crate::lattice::SecurityLattice;
use crate::runtime::{run, substitute, BareValue, EvalError, Halt, RuntimeValue, DEFAULT_FUEL};
use crate::static_eval::{eval_big, eval_small, step_static, RawValue};
use crate::statics::{subtype, type_of, typecheck_static, SType, StaticTerm, TypeEnv, TypeError};
use crate::syntax::{print, Span, SurfaceLabel, SurfaceType, Term, TermKind};

/// One corpus term, with its types computed on first use.
pub struct Instance<'a> {
    pub term: &'a Term,
    pub lattice: &'a SecurityLattice,
    pub static_env: &'a TypeEnv<SType>,
    pub gradual_env: &'a TypeEnv<GType>,
    static_ty: OnceCell<Result<SType, TypeError>>,
    gradual_ty: OnceCell<Result<GType, TypeError>>,
}

impl<'a> Instance<'a> {
    pub fn new(
        term: &'a Term,
        lattice: &'a SecurityLattice,
        static_env: &'a TypeEnv<SType>,
        gradual_env: &'a TypeEnv<GType>,
    ) -> Self {
        Instance {
            term,
            lattice,
            static_env,
            gradual_env,
            static_ty: OnceCell::new(),
            gradual_ty: OnceCell::new(),
        }
    }

    pub fn static_ty(&self) -> &Result<SType, TypeError> {
        self.static_ty
            .get_or_init(|| typecheck_static(self.static_env, self.term, self.lattice))
    }

    pub fn gradual_ty(&self) -> &Result<GType, TypeError> {
        self.gradual_ty
            .get_or_init(|| typecheck_gradual(self.gradual_env, self.term, self.lattice))
    }

    pub fn input(&self) -> String {
        let mut out = String::new();
        for (x, ty) in self.gradual_env.iter() {
            out.push_str(&format!("{x}:{} |- ", self.lattice.render(ty)));
        }
        out.push_str(&print(self.term));
        out
    }
}

/// A property checked one corpus term at a time.
pub trait TermProperty {
    fn visit(&mut self, inst: &Instance);
    fn finish(self: Box<Self>) -> PropertyReport;
}

fn envs(corpus: &Corpus) -> (TypeEnv<SType>, TypeEnv<GType>) {
    let mut s = TypeEnv::new();
    let mut g = TypeEnv::new();
    for (x, ty) in &corpus.params.free {
        if let Some(st) = ty.to_static() {
            s = s.with(x, st);
        }
        g = g.with(x, ty.clone());
    }
    (s, g)
}

/// Run every property over every corpus term in one pass.
pub fn sweep(corpus: &Corpus, props: Vec<Box<dyn TermProperty>>) -> Vec<PropertyReport> {
    let start = Instant::now();
    let (senv, genv) = envs(corpus);
    let mut props = props;
    corpus.for_each(|t| {
        let inst = Instance::new(t, &corpus.lattice, &senv, &genv);
        for p in props.iter_mut() {
            p.visit(&inst);
        }
    });
    finish_all(props, start)
}

/// Run every property over `count` random well-typed terms of the corpus.
pub fn sweep_sampled(
    corpus: &Corpus,
    seed: u64,
    count: usize,
    props: Vec<Box<dyn TermProperty>>,
) -> Vec<PropertyReport> {
    let start = Instant::now();
    let (senv, genv) = envs(corpus);
    let mut props = props;
    for (t, ty) in corpus.sample_typed(seed, count) {
        let inst = Instance::new(&t, &corpus.lattice, &senv, &genv);
        let _ = inst.gradual_ty.set(Ok(ty));
        for p in props.iter_mut() {
            p.visit(&inst);
        }
    }
    finish_all(props, start)
}

/// Run every property over the well-typed corpus terms in one pass. The
/// gradual type of each instance is known up front.
pub fn sweep_typed(corpus: &Corpus, props: Vec<Box<dyn TermProperty>>) -> Vec<PropertyReport> {
    let start = Instant::now();
    let (senv, genv) = envs(corpus);
    let mut props = props;
    corpus.for_each_typed(|t, ty| {
        let inst = Instance::new(t, &corpus.lattice, &senv, &genv);
        let _ = inst.gradual_ty.set(Ok(ty.clone()));
        for p in props.iter_mut() {
            p.visit(&inst);
        }
    });
    finish_all(props, start)
}

fn finish_all(props: Vec<Box<dyn TermProperty>>, start: Instant) -> Vec<PropertyReport> {
    let elapsed = start.elapsed();
    props
        .into_iter()
        .map(|p| {
            let mut r = p.finish();
            r.elapsed = elapsed;
            r
        })
        .collect()
}

fn show_result<T: crate::lattice::InLattice>(
    lat: &SecurityLattice,
    r: &Result<T, TypeError>,
) -> String {
    match r {
        Ok(t) => lat.render(t),
        Err(e) => format!("rejected ({e})"),
    }
}

/// Both checkers accept the same label-precise terms, at the same types.
pub struct ConservativeExtension(PropertyReport);

impl Default for ConservativeExtension {
    fn default() -> Self {
        ConservativeExtension(PropertyReport::new("conservative-extension"))
    }
}

impl TermProperty for ConservativeExtension {
    fn visit(&mut self, inst: &Instance) {
        if inst.term.is_gradual() {
            return;
        }
        let (s, g) = (inst.static_ty(), inst.gradual_ty());
        let ok = match (s, g) {
            (Ok(s), Ok(g)) => GType::from(s) == *g,
            (Err(_), Err(_)) => true,
            _ => false,
        };
        let lat = inst.lattice;
        self.0.record(ok, || {
            Counterexample::new(inst.input(), show_result(lat, s), show_result(lat, g))
        });
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        self.0
    }
}

fn label_count(t: &Term) -> usize {
    let known = |l: &SurfaceLabel| matches!(l, SurfaceLabel::Known(_)) as usize;
    fn in_type(ty: &SurfaceType, known: &dyn Fn(&SurfaceLabel) -> usize) -> usize {
        match ty {
            SurfaceType::Bool(l) => known(l),
            SurfaceType::Fun(a, b, l) => in_type(a, known) + in_type(b, known) + known(l),
        }
    }
    match &t.kind {
        TermKind::Bool(_, l) => known(l),
        TermKind::Var(_) => 0,
        TermKind::Lam {
            annot, body, label, ..
        } => in_type(annot, &known) + label_count(body) + known(label),
        TermKind::App(a, b) | TermKind::BinOp(_, a, b) => label_count(a) + label_count(b),
        TermKind::If(c, a, b) => label_count(c) + label_count(a) + label_count(b),
        TermKind::Ascribe(a, ty) => label_count(a) + in_type(ty, &known),
    }
}

/// Replace the `n`th known label (in the order of [`label_count`]) by `?`.
fn relax_label(l: &SurfaceLabel, n: &mut usize) -> SurfaceLabel {
    if let SurfaceLabel::Known(_) = l {
        if *n == 0 {
            *n = usize::MAX;
            return SurfaceLabel::Unknown;
        }
        *n = n.wrapping_sub(1);
    }
    l.clone()
}

fn relax_type(ty: &SurfaceType, n: &mut usize) -> SurfaceType {
    match ty {
        SurfaceType::Bool(l) => SurfaceType::Bool(relax_label(l, n)),
        SurfaceType::Fun(a, b, l) => {
            let a = relax_type(a, n);
            let b = relax_type(b, n);
            SurfaceType::Fun(Arc::new(a), Arc::new(b), relax_label(l, n))
        }
    }
}

fn relax_term(t: &Term, n: &mut usize) -> Term {
    let sub = |t: &Arc<Term>, n: &mut usize| Arc::new(relax_term(t, n));
    let kind = match &t.kind {
        TermKind::Bool(b, l) => TermKind::Bool(*b, relax_label(l, n)),
        TermKind::Var(_) => t.kind.clone(),
        TermKind::Lam {
            param,
            annot,
            body,
            label,
        } => {
            let annot = relax_type(annot, n);
            let body = sub(body, n);
            TermKind::Lam {
                param: param.clone(),
                annot,
                body,
                label: relax_label(label, n),
            }
        }
        TermKind::App(a, b) => {
            let a = sub(a, n);
            TermKind::App(a, sub(b, n))
        }
        TermKind::BinOp(op, a, b) => {
            let a = sub(a, n);
            TermKind::BinOp(*op, a, sub(b, n))
        }
        TermKind::If(c, a, b) => {
            let c = sub(c, n);
            let a = sub(a, n);
            TermKind::If(c, a, sub(b, n))
        }
        TermKind::Ascribe(a, ty) => {
            let a = sub(a, n);
            TermKind::Ascribe(a, relax_type(ty, n))
        }
    };
    Term { kind, span: t.span }
}

/// Every term obtained by replacing exactly one known label by `?`.
pub fn relaxations(t: &Term) -> Vec<Term> {
    (0..label_count(t))
        .map(|i| relax_term(t, &mut { i }))
        .collect()
}

fn label_precision(a: &SurfaceLabel, b: &SurfaceLabel) -> bool {
    *b == SurfaceLabel::Unknown || a == b
}

fn type_precision(a: &SurfaceType, b: &SurfaceType) -> bool {
    match (a, b) {
        (SurfaceType::Bool(l1), SurfaceType::Bool(l2)) => label_precision(l1, l2),
        (SurfaceType::Fun(a1, b1, l1), SurfaceType::Fun(a2, b2, l2)) => {
            label_precision(l1, l2) && type_precision(a1, a2) && type_precision(b1, b2)
        }
        _ => false,
    }
}

/// `a ⊑ b` on terms: the same skeleton, with every label and annotation of
/// `a` at least as precise as the one in the same position of `b`.
pub fn term_precision(a: &Term, b: &Term) -> bool {
    match (&a.kind, &b.kind) {
        (TermKind::Bool(x, l1), TermKind::Bool(y, l2)) => x == y && label_precision(l1, l2),
        (TermKind::Var(x), TermKind::Var(y)) => x == y,
        (
            TermKind::Lam {
                param: p1,
                annot: a1,
                body: b1,
                label: l1,
            },
            TermKind::Lam {
                param: p2,
                annot: a2,
                body: b2,
                label: l2,
            },
        ) => {
            p1 == p2 && type_precision(a1, a2) && term_precision(b1, b2) && label_precision(l1, l2)
        }
        (TermKind::App(f1, a1), TermKind::App(f2, a2)) => {
            term_precision(f1, f2) && term_precision(a1, a2)
        }
        (TermKind::BinOp(o1, x1, y1), TermKind::BinOp(o2, x2, y2)) => {
            o1 == o2 && term_precision(x1, x2) && term_precision(y1, y2)
        }
        (TermKind::If(c1, x1, y1), TermKind::If(c2, x2, y2)) => {
            term_precision(c1, c2) && term_precision(x1, x2) && term_precision(y1, y2)
        }
        (TermKind::Ascribe(x1, t1), TermKind::Ascribe(x2, t2)) => {
            term_precision(x1, x2) && type_precision(t1, t2)
        }
        _ => false,
    }
}

/// Making one label of a typed term unknown keeps it typed, at a less
/// precise type.
pub struct StaticGuarantee(PropertyReport);

impl Default for StaticGuarantee {
    fn default() -> Self {
        StaticGuarantee(PropertyReport::new("static-guarantee"))
    }
}

impl TermProperty for StaticGuarantee {
    fn visit(&mut self, inst: &Instance) {
        let Ok(ty) = inst.gradual_ty() else {
            return;
        };
        let lat = inst.lattice;
        for relaxed in relaxations(inst.term) {
            let got = typecheck_gradual(inst.gradual_env, &relaxed, lat);
            let ok = term_precision(inst.term, &relaxed)
                && got.as_ref().is_ok_and(|g| precision_type(ty, g));
            self.0.record(ok, || {
                Counterexample::new(
                    print(&relaxed),
                    format!("a type less precise than {}", lat.render(ty)),
                    show_result(lat, &got),
                )
            });
        }
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        self.0
    }
}

fn resolve(inst: &Instance) -> Option<StaticTerm> {
    inst.static_ty().as_ref().ok()?;
    StaticTerm::from_surface(inst.term, inst.lattice).ok()
}

/// Big-step and small-step evaluation give the same value and label.
pub struct BigStepSmallStep(PropertyReport);

impl Default for BigStepSmallStep {
    fn default() -> Self {
        BigStepSmallStep(PropertyReport::new("bigstep-smallstep"))
    }
}

impl TermProperty for BigStepSmallStep {
    fn visit(&mut self, inst: &Instance) {
        if !inst.static_env.is_empty() {
            return;
        }
        let Some(t) = resolve(inst) else {
            return;
        };
        let lat = inst.lattice;
        let small = eval_small(&t, lat);
        let big = eval_big(&t, lat);
        let show = |r: &Result<_, _>| match r {
            Ok(v) => lat.render(v),
            Err(e) => format!("{e}"),
        };
        self.0.record(small.is_ok() && small == big, || {
            Counterexample::new(inst.input(), show(&small), show(&big))
        });
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        self.0
    }
}

/// Static small steps never get stuck and only move to subtypes.
pub struct StaticSafety(PropertyReport);

impl Default for StaticSafety {
    fn default() -> Self {
        StaticSafety(PropertyReport::new("static-safety"))
    }
}

impl TermProperty for StaticSafety {
    fn visit(&mut self, inst: &Instance) {
        if !inst.static_env.is_empty() {
            return;
        }
        let Some(mut cur) = resolve(inst) else {
            return;
        };
        let lat = inst.lattice;
        let Ok(ty) = inst.static_ty() else {
            return;
        };
        let env = TypeEnv::new();
        let mut failure = None;
        for _ in 0..DEFAULT_FUEL {
            match step_static(&cur, lat) {
                Ok(None) => break,
                Ok(Some(next)) => {
                    match type_of(&env, &next, lat) {
                        Ok(s) if subtype(lat, &s, ty) => {}
                        other => {
                            failure = Some((
                                lat.render(&next),
                                match other {
                                    Ok(s) => lat.render(&s),
                                    Err(e) => format!("{e}"),
                                },
                            ));
                            break;
                        }
                    }
                    cur = next;
                }
                Err(e) => {
                    failure = Some((lat.render(&cur), format!("{e}")));
                    break;
                }
            }
        }
        if failure.is_none() && !cur.is_value() {
            failure = Some((lat.render(&cur), "out of fuel".into()));
        }
        self.0.record(failure.is_none(), || {
            let (at, what) = failure.unwrap();
            Counterexample::new(
                inst.input(),
                format!("steps typed below {}", lat.render(ty)),
                format!("{at}: {what}"),
            )
        });
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        self.0
    }
}

/// A label-precise program never fails at runtime, and yields the bare
/// value of static evaluation. Its simple value's label lies below the
/// static result's label, which lies below the label of its type.
pub struct StaticEmbedding(PropertyReport);

impl Default for StaticEmbedding {
    fn default() -> Self {
        StaticEmbedding(PropertyReport::new("static-embedding"))
    }
}

fn static_bare(raw: &RawValue) -> BareValue {
    match raw {
        RawValue::Bool(b) => BareValue::Bool(*b),
        RawValue::Lam { .. } => BareValue::Function,
    }
}

impl TermProperty for StaticEmbedding {
    fn visit(&mut self, inst: &Instance) {
        if !inst.static_env.is_empty() {
            return;
        }
        let Some(t) = resolve(inst) else {
            return;
        };
        let lat = inst.lattice;
        let Ok(expected) = eval_small(&t, lat) else {
            return;
        };
        let outcome = elaborate(inst.gradual_env, inst.term, lat)
            .map_err(|e| e.to_string())
            .and_then(|it| {
                run(&it, lat, DEFAULT_FUEL, |_, _| {})
                    .map(|e| (e.halt, it.ty))
                    .map_err(|e| e.to_string())
            });
        let ok = match &outcome {
            Ok((Halt::Value(v), ty)) => {
                let u = v.simple().label().and_then(GLabel::known);
                v.bval() == static_bare(&expected.raw)
                    && u.is_some_and(|u| lat.leq(u, expected.label))
                    && ty
                        .label()
                        .known()
                        .is_some_and(|l| lat.leq(expected.label, l))
                    && match v {
                        RuntimeValue::Simple(_) => u == Some(expected.label),
                        RuntimeValue::Ascribed { target, .. } => target == ty,
                    }
            }
            _ => false,
        };
        self.0.record(ok, || {
            let actual = match &outcome {
                Ok((h, _)) => lat.render(h),
                Err(e) => e.clone(),
            };
            Counterexample::new(inst.input(), lat.render(&expected), actual)
        });
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        self.0
    }
}

/// Elaboration yields a well-formed intrinsic term of the checker's type;
/// every reduction step keeps it well-formed at exactly that type; no run
/// gets stuck or exceeds the step budget.
pub struct PreservationProgress {
    report: PropertyReport,
    fuel: usize,
    pub steps: u64,
    pub errors: u64,
    pub longest: usize,
}

impl PreservationProgress {
    pub fn new(fuel: usize) -> Self {
        PreservationProgress {
            report: PropertyReport::new("preservation"),
            fuel,
            steps: 0,
            errors: 0,
            longest: 0,
        }
    }
}

impl Default for PreservationProgress {
    fn default() -> Self {
        Self::new(DEFAULT_FUEL)
    }
}

impl TermProperty for PreservationProgress {
    fn visit(&mut self, inst: &Instance) {
        let lat = inst.lattice;
        let Ok(ty) = inst.gradual_ty() else {
            return;
        };
        if !inst.gradual_env.is_empty() {
            return;
        }
        let it = match elaborate(inst.gradual_env, inst.term, lat) {
            Ok(it) => it,
            Err(e) => {
                self.report.record(false, || {
                    Counterexample::new(
                        inst.input(),
                        lat.render(ty),
                        format!("elaboration failed: {e}"),
                    )
                });
                return;
            }
        };
        let env = TypeEnv::new();
        let mut problem: Option<(String, String)> = match check_intrinsic(&env, &it, lat) {
            Ok(t) if t == *ty => None,
            Ok(t) => Some((lat.render(&it), lat.render(&t))),
            Err(e) => Some((lat.render(&it), e.to_string())),
        };
        let result = run(&it, lat, self.fuel, |_, next| {
            if problem.is_some() || contains_error(next) {
                return;
            }
            match check_intrinsic(&env, next, lat) {
                Ok(t) if t == *ty => {}
                Ok(t) => problem = Some((lat.render(next), lat.render(&t))),
                Err(e) => problem = Some((lat.render(next), e.to_string())),
            }
        });
        match &result {
            Ok(eval) => {
                self.steps += eval.steps as u64;
                self.longest = self.longest.max(eval.steps);
                if let Halt::Error(_) = eval.halt {
                    self.errors += 1;
                }
            }
            Err(e) => {
                problem = problem.or(Some(("evaluation".into(), e.to_string())));
            }
        }
        self.report.record(problem.is_none(), || {
            let (at, what) = problem.unwrap();
            Counterexample::new(
                inst.input(),
                format!("every step at {}", lat.render(ty)),
                format!("{at}: {what}"),
            )
        });
    }

    fn finish(self: Box<Self>) -> PropertyReport {
        let mut r = self.report;
        r.note(format!(
            "{} steps, {} runtime errors, longest run {} steps",
            self.steps, self.errors, self.longest
        ));
        r
    }
}

fn contains_error(t: &ITerm) -> bool {
    let ev = |e: &EvTerm| contains_error(&e.term);
    match &t.kind {
        IKind::Error => true,
        IKind::Var(_) | IKind::Bool(..) => false,
        IKind::Lam { body, .. } => contains_error(body),
        IKind::Op { lhs, rhs, .. } => ev(lhs) || ev(rhs),
        IKind::App { fun, arg, .. } => ev(fun) || ev(arg),
        IKind::If {
            cond, then, els, ..
        } => ev(cond) || ev(then) || ev(els),
        IKind::Asc { inner, .. } => ev(inner),
    }
}

/// Every runtime value of type `ty`: the literals of that type, and each
/// literal ascribed to `ty` through every evidence that justifies it.
/// Only boolean types have finitely many values.
pub fn values_of_type(lat: &SecurityLattice, ty: &GType) -> Option<Vec<ITerm>> {
    let GType::Bool(target) = ty else {
        return None;
    };
    let span = Span::default();
    let glabels = GLabel::all(lat);
    let mut out = Vec::new();
    for b in [true, false] {
        out.push(ITerm::new(IKind::Bool(b, *target), ty.clone(), span));
        for &l in &glabels {
            let from = GType::Bool(l);
            let Some(interior) = interior_type(lat, &from, ty) else {
                continue;
            };
            for &left in &glabels {
                for &right in &glabels {
                    let ev = Evidence::new(GType::Bool(left), GType::Bool(right));
                    if !clabel_leq(lat, left, right) || !ev.refines(&interior) {
                        continue;
                    }
                    let u = ITerm::new(IKind::Bool(b, l), from.clone(), span);
                    out.push(ITerm::new(
                        IKind::Asc {
                            inner: Box::new(EvTerm { ev, term: u }),
                            target: ty.clone(),
                        },
                        ty.clone(),
                        span,
                    ));
                }
            }
        }
    }
    Some(out)
}

/// Whether an observer at `observer` may not see data of type `secret`:
/// the secret's top-level label is not consistently below it.
pub fn hidden_from(lat: &SecurityLattice, secret: &GType, observer: &GType) -> bool {
    !clabel_leq(lat, secret.label(), observer.label())
}

/// Noninterference for one body with a single free variable: substituting
/// any two values of the variable's type gives the same bare value whenever
/// both runs produce a value.
pub fn noninterference_instance(
    lat: &SecurityLattice,
    body: &Term,
    var: &str,
    var_ty: &GType,
    values: &[ITerm],
) -> Result<(), Counterexample> {
    let env = TypeEnv::new().with(var, var_ty.clone());
    let input = || format!("{var}:{} |- {}", lat.render(var_ty), print(body));
    let it = elaborate(&env, body, lat)
        .map_err(|e| Counterexample::new(input(), "a well-typed body", e.to_string()))?;
    let mut seen: Option<(BareValue, &ITerm)> = None;
    for v in values {
        let t = substitute(&it, var, v);
        match run(&t, lat, DEFAULT_FUEL, |_, _| {}) {
            Ok(eval) => {
                let Halt::Value(result) = eval.halt else {
                    continue;
                };
                let bare = result.bval();
                match seen {
                    None => seen = Some((bare, v)),
                    Some((first, w)) if first != bare => {
                        return Err(Counterexample::new(
                            input(),
                            format!("{first:?} with {var} = {}", lat.render(w)),
                            format!("{bare:?} with {var} = {}", lat.render(v)),
                        ))
                    }
                    Some(_) => {}
                }
            }
            Err(e @ (EvalError::Stuck { .. } | EvalError::OutOfFuel(_))) => {
                return Err(Counterexample::new(
                    input(),
                    "a value or a runtime error",
                    format!("{e} with {var} = {}", lat.render(v)),
                ))
            }
        }
    }
    Ok(())
}

/// Noninterference over the well-typed bodies of a corpus with exactly one
/// free variable of boolean type, for every body whose type is hidden from
/// the variable.
pub fn check_noninterference(corpus: &Corpus) -> PropertyReport {
    noninterference_over(corpus, |f| corpus.for_each_typed(f))
}

/// [`check_noninterference`] over `count` random bodies.
pub fn check_noninterference_sampled(corpus: &Corpus, seed: u64, count: usize) -> PropertyReport {
    noninterference_over(corpus, |f| {
        for (t, ty) in corpus.sample_typed(seed, count) {
            f(&t, &ty);
        }
    })
}

fn noninterference_over(
    corpus: &Corpus,
    source: impl FnOnce(&mut dyn FnMut(&Term, &GType)),
) -> PropertyReport {
    let start = Instant::now();
    let lat = &corpus.lattice;
    let mut report = PropertyReport::new("noninterference");
    let [(var, var_ty)] = corpus.params.free.as_slice() else {
        report.fail(Counterexample::new(
            "corpus",
            "one free variable",
            format!("{}", corpus.params.free.len()),
        ));
        return report;
    };
    let Some(values) = values_of_type(lat, var_ty) else {
        report.fail(Counterexample::new(
            "corpus",
            "a boolean variable",
            lat.render(var_ty),
        ));
        return report;
    };
    let mut mentioning = 0u64;
    source(&mut |body, ty| {
        if !hidden_from(lat, var_ty, ty) {
            return;
        }
        if !body.free_vars().is_empty() {
            mentioning += 1;
        }
        let result = noninterference_instance(lat, body, var, var_ty, &values);
        report.record(result.is_ok(), || result.unwrap_err());
    });
    report.note(format!(
        "{} values of {}; {} bodies mention {var}",
        values.len(),
        lat.render(var_ty),
        mentioning
    ));
    report.elapsed = start.elapsed();
    report
}
