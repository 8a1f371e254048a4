//! The gradual checker and elaboration into intrinsic terms.
//!
//! Both follow the static rules with consistent subtyping, gradual join and
//! gradual stamping in place of their static counterparts. Elaboration
//! attaches the interior of each consistent judgment as its initial evidence.

use crate::gradual::{
    csub_join, csubtype, glabel_join, gstamp, interior_type, Evidence, GLabel, GType,
};
use crate::intrinsic::{EvTerm, IKind, ITerm};
use crate::lattice::SecurityLattice;
use crate::statics::{Rule, TypeEnv, TypeError, TypeErrorKind};
use crate::syntax::{Span, SurfaceLabel, SurfaceType, Term, TermKind};

/// Resolve a surface label, keeping `?`.
pub fn resolve_label(lattice: &SecurityLattice, l: &SurfaceLabel) -> Result<GLabel, TypeErrorKind> {
    match l {
        SurfaceLabel::Known(name) => lattice
            .label(name)
            .map(GLabel::Known)
            .ok_or_else(|| TypeErrorKind::UnknownLabel(name.clone())),
        SurfaceLabel::Unknown => Ok(GLabel::Unknown),
    }
}

pub fn resolve_type(lattice: &SecurityLattice, ty: &SurfaceType) -> Result<GType, TypeErrorKind> {
    Ok(match ty {
        SurfaceType::Bool(l) => GType::Bool(resolve_label(lattice, l)?),
        SurfaceType::Fun(a, b, l) => GType::fun(
            resolve_type(lattice, a)?,
            resolve_type(lattice, b)?,
            resolve_label(lattice, l)?,
        ),
    })
}

/// Type a program in the gradual language.
pub fn typecheck_gradual(
    env: &TypeEnv<GType>,
    t: &Term,
    lattice: &SecurityLattice,
) -> Result<GType, TypeError> {
    let mut env = env.clone();
    Elaborator { lattice }.check(&mut env, t)
}

/// Type a program and elaborate it to an intrinsic term.
pub fn elaborate(
    env: &TypeEnv<GType>,
    t: &Term,
    lattice: &SecurityLattice,
) -> Result<ITerm, TypeError> {
    let mut env = env.clone();
    Elaborator { lattice }.elab(&mut env, t)
}

struct Elaborator<'a> {
    lattice: &'a SecurityLattice,
}

impl Elaborator<'_> {
    fn show(&self, t: &GType) -> String {
        self.lattice.render(t)
    }

    fn label(&self, rule: Rule, span: Span, l: &SurfaceLabel) -> Result<GLabel, TypeError> {
        resolve_label(self.lattice, l).map_err(|kind| TypeError { rule, kind, span })
    }

    fn ty(&self, rule: Rule, span: Span, ty: &SurfaceType) -> Result<GType, TypeError> {
        resolve_type(self.lattice, ty).map_err(|kind| TypeError { rule, kind, span })
    }

    /// Wrap `t` with the interior of `t.ty ≲ target`.
    fn coerce(
        &self,
        rule: Rule,
        span: Span,
        t: ITerm,
        target: &GType,
    ) -> Result<EvTerm, TypeError> {
        let Some(ev) = interior_type(self.lattice, &t.ty, target) else {
            let kind = if csubtype(self.lattice, &t.ty, target) {
                TypeErrorKind::NoInterior(self.show(&t.ty), self.show(target))
            } else {
                TypeErrorKind::NotConsistentSubtype {
                    actual: self.show(&t.ty),
                    expected: self.show(target),
                }
            };
            return Err(TypeError { rule, kind, span });
        };
        Ok(EvTerm { ev, term: t })
    }

    /// Exact evidence for a subterm used at its own type.
    fn exact(&self, t: ITerm) -> EvTerm {
        let ev = Evidence::new(t.ty.clone(), t.ty.clone());
        EvTerm { ev, term: t }
    }

    fn bool_label(&self, rule: Rule, t: &ITerm) -> Result<GLabel, TypeError> {
        match t.ty {
            GType::Bool(l) => Ok(l),
            ref other => Err(TypeError {
                rule,
                kind: TypeErrorKind::NotBool(self.show(other)),
                span: t.span,
            }),
        }
    }

    fn not_bool(&self, rule: Rule, ty: &GType, span: Span) -> TypeError {
        TypeError {
            rule,
            kind: TypeErrorKind::NotBool(self.show(ty)),
            span,
        }
    }

    fn not_csub(&self, rule: Rule, span: Span, actual: &GType, expected: &GType) -> TypeError {
        TypeError {
            rule,
            kind: TypeErrorKind::NotConsistentSubtype {
                actual: self.show(actual),
                expected: self.show(expected),
            },
            span,
        }
    }

    /// The typing rules alone, without building the intrinsic term.
    fn check(&self, env: &mut TypeEnv<GType>, t: &Term) -> Result<GType, TypeError> {
        let lat = self.lattice;
        let span = t.span;
        match &t.kind {
            TermKind::Bool(_, l) => Ok(GType::Bool(self.label(Rule::Bool, span, l)?)),
            TermKind::Var(x) => env.lookup(x).cloned().ok_or_else(|| TypeError {
                rule: Rule::Var,
                kind: TypeErrorKind::Unbound(x.clone()),
                span,
            }),
            TermKind::Lam {
                param,
                annot,
                body,
                label,
            } => {
                let param_ty = self.ty(Rule::Lam, span, annot)?;
                let label = self.label(Rule::Lam, span, label)?;
                env.push(param.clone(), param_ty.clone());
                let body = self.check(env, body);
                env.pop();
                Ok(GType::fun(param_ty, body?, label))
            }
            TermKind::BinOp(_, a, b) => {
                let ta = self.check(env, a)?;
                let &GType::Bool(la) = &ta else {
                    return Err(self.not_bool(Rule::Op, &ta, a.span));
                };
                let tb = self.check(env, b)?;
                let &GType::Bool(lb) = &tb else {
                    return Err(self.not_bool(Rule::Op, &tb, b.span));
                };
                Ok(GType::Bool(glabel_join(lat, la, lb)))
            }
            TermKind::App(f, a) => {
                let tf = self.check(env, f)?;
                let GType::Fun(dom, cod, l) = &tf else {
                    return Err(TypeError {
                        rule: Rule::App,
                        kind: TypeErrorKind::NotFunction(self.show(&tf)),
                        span: f.span,
                    });
                };
                let ta = self.check(env, a)?;
                if !csubtype(lat, &ta, dom) {
                    return Err(self.not_csub(Rule::App, span, &ta, dom));
                }
                Ok(gstamp(lat, cod, *l))
            }
            TermKind::If(c, a, b) => {
                let tc = self.check(env, c)?;
                let &GType::Bool(guard) = &tc else {
                    return Err(self.not_bool(Rule::If, &tc, c.span));
                };
                let ta = self.check(env, a)?;
                let tb = self.check(env, b)?;
                let Some(joined) = csub_join(lat, &ta, &tb) else {
                    return Err(TypeError {
                        rule: Rule::If,
                        kind: TypeErrorKind::NoJoin(self.show(&ta), self.show(&tb)),
                        span,
                    });
                };
                Ok(gstamp(lat, &joined, guard))
            }
            TermKind::Ascribe(a, ty) => {
                let target = self.ty(Rule::Ascribe, span, ty)?;
                let ta = self.check(env, a)?;
                if !csubtype(lat, &ta, &target) {
                    return Err(self.not_csub(Rule::Ascribe, span, &ta, &target));
                }
                Ok(target)
            }
        }
    }

    fn elab(&self, env: &mut TypeEnv<GType>, t: &Term) -> Result<ITerm, TypeError> {
        let lat = self.lattice;
        let span = t.span;
        let node = |kind, ty| Ok(ITerm::new(kind, ty, span));
        match &t.kind {
            TermKind::Bool(b, l) => {
                let l = self.label(Rule::Bool, span, l)?;
                node(IKind::Bool(*b, l), GType::Bool(l))
            }
            TermKind::Var(x) => match env.lookup(x) {
                Some(ty) => node(IKind::Var(x.clone()), ty.clone()),
                None => Err(TypeError {
                    rule: Rule::Var,
                    kind: TypeErrorKind::Unbound(x.clone()),
                    span,
                }),
            },
            TermKind::Lam {
                param,
                annot,
                body,
                label,
            } => {
                let param_ty = self.ty(Rule::Lam, span, annot)?;
                let label = self.label(Rule::Lam, span, label)?;
                env.push(param.clone(), param_ty.clone());
                let body = self.elab(env, body);
                env.pop();
                let body = body?;
                let ty = GType::fun(param_ty.clone(), body.ty.clone(), label);
                node(
                    IKind::Lam {
                        param: param.clone(),
                        param_ty,
                        body: Box::new(body),
                        label,
                    },
                    ty,
                )
            }
            TermKind::BinOp(op, a, b) => {
                let a = self.elab(env, a)?;
                let la = self.bool_label(Rule::Op, &a)?;
                let b = self.elab(env, b)?;
                let lb = self.bool_label(Rule::Op, &b)?;
                node(
                    IKind::Op {
                        op: *op,
                        lhs: Box::new(self.exact(a)),
                        rhs: Box::new(self.exact(b)),
                        lhs_label: la,
                        rhs_label: lb,
                    },
                    GType::Bool(glabel_join(lat, la, lb)),
                )
            }
            TermKind::App(f, a) => {
                let f = self.elab(env, f)?;
                let GType::Fun(dom, cod, l) = f.ty.clone() else {
                    return Err(TypeError {
                        rule: Rule::App,
                        kind: TypeErrorKind::NotFunction(self.show(&f.ty)),
                        span: f.span,
                    });
                };
                let a = self.elab(env, a)?;
                let arg = self.coerce(Rule::App, span, a, &dom)?;
                let index = f.ty.clone();
                node(
                    IKind::App {
                        fun: Box::new(self.exact(f)),
                        arg: Box::new(arg),
                        index,
                    },
                    gstamp(lat, &cod, l),
                )
            }
            TermKind::If(c, a, b) => {
                let c = self.elab(env, c)?;
                let guard = self.bool_label(Rule::If, &c)?;
                let a = self.elab(env, a)?;
                let b = self.elab(env, b)?;
                let Some(joined) = csub_join(lat, &a.ty, &b.ty) else {
                    return Err(TypeError {
                        rule: Rule::If,
                        kind: TypeErrorKind::NoJoin(self.show(&a.ty), self.show(&b.ty)),
                        span,
                    });
                };
                let target = gstamp(lat, &joined, guard);
                let then = self.coerce(Rule::If, span, a, &target)?;
                let els = self.coerce(Rule::If, span, b, &target)?;
                node(
                    IKind::If {
                        cond: Box::new(self.exact(c)),
                        then: Box::new(then),
                        els: Box::new(els),
                        guard,
                        target: target.clone(),
                    },
                    target,
                )
            }
            TermKind::Ascribe(a, ty) => {
                let target = self.ty(Rule::Ascribe, span, ty)?;
                let a = self.elab(env, a)?;
                let inner = self.coerce(Rule::Ascribe, span, a, &target)?;
                node(
                    IKind::Asc {
                        inner: Box::new(inner),
                        target: target.clone(),
                    },
                    target,
                )
            }
        }
    }
}
