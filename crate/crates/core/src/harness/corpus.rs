//! Bounded enumeration of surface terms.
//!
//! Terms are visited one at a time. Subterms of smaller depth are built
//! once per scope and shared through `Arc`, so visiting a term allocates
//! only its root.

use std::collections::HashMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::gradual::{csub_join, csubtype, glabel_join, gstamp, GLabel, GType};
use crate::lattice::SecurityLattice;
use crate::syntax::{BinOp, Name, Span, SurfaceLabel, SurfaceType, Term, TermKind};

const BINDERS: [&str; 8] = ["x", "y", "z", "w", "u", "v", "p", "q"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_term_depth: usize,
    pub max_type_depth: usize,
    /// Allow `?` at every label position.
    pub gradual: bool,
    /// Free variables every term may mention, with the types used by typed
    /// enumeration.
    pub free: Vec<(Name, GType)>,
}

impl CorpusParams {
    pub fn closed(max_term_depth: usize, max_type_depth: usize, gradual: bool) -> Self {
        CorpusParams {
            max_term_depth,
            max_type_depth,
            gradual,
            free: Vec::new(),
        }
    }

    pub fn with_free(mut self, name: &str, ty: GType) -> Self {
        self.free.push((name.into(), ty));
        self
    }
}

/// All terms over a lattice within the given bounds, in a fixed order:
/// literals, variables, lambdas, operators, applications, conditionals,
/// ascriptions.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub lattice: SecurityLattice,
    pub params: CorpusParams,
    labels: Vec<(SurfaceLabel, GLabel)>,
    types: Vec<(SurfaceType, GType)>,
    binders: Vec<Name>,
}

fn node(kind: TermKind) -> Term {
    Term {
        kind,
        span: Span::default(),
    }
}

impl Corpus {
    pub fn new(lattice: &SecurityLattice, params: CorpusParams) -> Self {
        assert!(params.max_term_depth >= 1 && params.max_type_depth >= 1);
        let labels: Vec<(SurfaceLabel, GLabel)> = GLabel::all(lattice)
            .into_iter()
            .filter(|l| params.gradual || *l != GLabel::Unknown)
            .map(|l| (surface_label(lattice, l), l))
            .collect();
        let types = GType::enumerate(lattice, params.max_type_depth)
            .into_iter()
            .filter(|t| params.gradual || t.to_static().is_some())
            .map(|t| (surface_type(lattice, &t), t))
            .collect();
        let binders = BINDERS
            .iter()
            .filter(|b| params.free.iter().all(|(f, _)| &**f != **b))
            .map(|b| Name::from(*b))
            .collect();
        Corpus {
            lattice: lattice.clone(),
            params,
            labels,
            types,
            binders,
        }
    }

    /// The variable bound at nesting `k`, counting free variables first.
    fn var(&self, k: usize) -> Name {
        let free = self.params.free.len();
        if k < free {
            self.params.free[k].0.clone()
        } else {
            self.binders[k - free].clone()
        }
    }

    /// Visit every term up to the depth bound.
    pub fn for_each(&self, mut f: impl FnMut(&Term)) {
        let mut memo = HashMap::new();
        self.visit(
            self.params.max_term_depth,
            self.params.free.len(),
            &mut memo,
            &mut f,
        );
    }

    /// Collect every term up to the depth bound.
    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.for_each(|t| out.push(t.clone()));
        out
    }

    fn materialize(
        &self,
        depth: usize,
        scope: usize,
        memo: &mut HashMap<(usize, usize), Arc<Vec<Arc<Term>>>>,
    ) -> Arc<Vec<Arc<Term>>> {
        if let Some(v) = memo.get(&(depth, scope)) {
            return v.clone();
        }
        let mut out = Vec::new();
        self.visit(depth, scope, memo, &mut |t| out.push(Arc::new(t.clone())));
        let out = Arc::new(out);
        memo.insert((depth, scope), out.clone());
        out
    }

    fn visit(
        &self,
        depth: usize,
        scope: usize,
        memo: &mut HashMap<(usize, usize), Arc<Vec<Arc<Term>>>>,
        f: &mut dyn FnMut(&Term),
    ) {
        for b in [true, false] {
            for (l, _) in &self.labels {
                f(&node(TermKind::Bool(b, l.clone())));
            }
        }
        for k in 0..scope {
            f(&node(TermKind::Var(self.var(k))));
        }
        if depth == 1 {
            return;
        }
        let subs = self.materialize(depth - 1, scope, memo);
        let bodies = self.materialize(depth - 1, scope + 1, memo);
        let param = self.var(scope);
        for (annot, _) in &self.types {
            for (label, _) in &self.labels {
                for body in bodies.iter() {
                    f(&node(TermKind::Lam {
                        param: param.clone(),
                        annot: annot.clone(),
                        body: body.clone(),
                        label: label.clone(),
                    }));
                }
            }
        }
        for op in BinOp::ALL {
            for a in subs.iter() {
                for b in subs.iter() {
                    f(&node(TermKind::BinOp(op, a.clone(), b.clone())));
                }
            }
        }
        for a in subs.iter() {
            for b in subs.iter() {
                f(&node(TermKind::App(a.clone(), b.clone())));
            }
        }
        for c in subs.iter() {
            for a in subs.iter() {
                for b in subs.iter() {
                    f(&node(TermKind::If(c.clone(), a.clone(), b.clone())));
                }
            }
        }
        for a in subs.iter() {
            for (ty, _) in &self.types {
                f(&node(TermKind::Ascribe(a.clone(), ty.clone())));
            }
        }
    }

    /// Visit exactly the terms that the gradual checker accepts, with their
    /// types, in a fixed order. Ill-typed subterms are never combined, since
    /// every subterm of a typed term is typed.
    pub fn for_each_typed(&self, mut f: impl FnMut(&Term, &GType)) {
        let env: Vec<GType> = self.params.free.iter().map(|(_, t)| t.clone()).collect();
        let mut memo = HashMap::new();
        self.visit_typed(self.params.max_term_depth, &env, &mut memo, &mut f);
    }

    fn materialize_typed(&self, depth: usize, env: &[GType], memo: &mut TypedMemo) -> Arc<Groups> {
        let key = (depth, env.to_vec());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut groups: Groups = Vec::new();
        let mut index: HashMap<GType, usize> = HashMap::new();
        self.visit_typed(depth, env, memo, &mut |t, ty| {
            let i = *index.entry(ty.clone()).or_insert_with(|| {
                groups.push((ty.clone(), Vec::new()));
                groups.len() - 1
            });
            groups[i].1.push(Arc::new(t.clone()));
        });
        let groups = Arc::new(groups);
        memo.insert(key, groups.clone());
        groups
    }

    fn visit_typed(
        &self,
        depth: usize,
        env: &[GType],
        memo: &mut TypedMemo,
        f: &mut dyn FnMut(&Term, &GType),
    ) {
        let lat = &self.lattice;
        for b in [true, false] {
            for (l, gl) in &self.labels {
                f(&node(TermKind::Bool(b, l.clone())), &GType::Bool(*gl));
            }
        }
        for (k, ty) in env.iter().enumerate() {
            f(&node(TermKind::Var(self.var(k))), ty);
        }
        if depth == 1 {
            return;
        }
        let subs = self.materialize_typed(depth - 1, env, memo);
        let param = self.var(env.len());
        for (annot, gannot) in &self.types {
            let mut inner = env.to_vec();
            inner.push(gannot.clone());
            let bodies = self.materialize_typed(depth - 1, &inner, memo);
            for (label, glabel) in &self.labels {
                for (cod, group) in bodies.iter() {
                    let ty = GType::fun(gannot.clone(), cod.clone(), *glabel);
                    for body in group {
                        let t = node(TermKind::Lam {
                            param: param.clone(),
                            annot: annot.clone(),
                            body: body.clone(),
                            label: label.clone(),
                        });
                        f(&t, &ty);
                    }
                }
            }
        }
        let bools: Vec<(GLabel, &Vec<Arc<Term>>)> = subs
            .iter()
            .filter_map(|(ty, g)| match ty {
                GType::Bool(l) => Some((*l, g)),
                _ => None,
            })
            .collect();
        for op in BinOp::ALL {
            for (la, ga) in &bools {
                for (lb, gb) in &bools {
                    let ty = GType::Bool(glabel_join(lat, *la, *lb));
                    for a in ga.iter() {
                        for b in gb.iter() {
                            f(&node(TermKind::BinOp(op, a.clone(), b.clone())), &ty);
                        }
                    }
                }
            }
        }
        for (tf, gf) in subs.iter() {
            let GType::Fun(dom, cod, l) = tf else {
                continue;
            };
            let ty = gstamp(lat, cod, *l);
            for (ta, ga) in subs.iter() {
                if !csubtype(lat, ta, dom) {
                    continue;
                }
                for a in gf {
                    for b in ga {
                        f(&node(TermKind::App(a.clone(), b.clone())), &ty);
                    }
                }
            }
        }
        for (guard, gc) in &bools {
            for (ta, ga) in subs.iter() {
                for (tb, gb) in subs.iter() {
                    let Some(joined) = csub_join(lat, ta, tb) else {
                        continue;
                    };
                    let ty = gstamp(lat, &joined, *guard);
                    for c in gc.iter() {
                        for a in ga {
                            for b in gb {
                                let t = node(TermKind::If(c.clone(), a.clone(), b.clone()));
                                f(&t, &ty);
                            }
                        }
                    }
                }
            }
        }
        for (ta, ga) in subs.iter() {
            for (ty, gty) in &self.types {
                if !csubtype(lat, ta, gty) {
                    continue;
                }
                for a in ga {
                    f(&node(TermKind::Ascribe(a.clone(), ty.clone())), gty);
                }
            }
        }
    }
}

type Groups = Vec<(GType, Vec<Arc<Term>>)>;
type TypedMemo = HashMap<(usize, Vec<GType>), Arc<Groups>>;

pub fn surface_label(lattice: &SecurityLattice, l: GLabel) -> SurfaceLabel {
    match l {
        GLabel::Known(l) => SurfaceLabel::known(lattice.name(l)),
        GLabel::Unknown => SurfaceLabel::Unknown,
    }
}

pub fn surface_type(lattice: &SecurityLattice, t: &GType) -> SurfaceType {
    match t {
        GType::Bool(l) => SurfaceType::Bool(surface_label(lattice, *l)),
        GType::Fun(a, b, l) => SurfaceType::Fun(
            Arc::new(surface_type(lattice, a)),
            Arc::new(surface_type(lattice, b)),
            surface_label(lattice, *l),
        ),
    }
}

/// Attempts at finding a subterm of a required shape before falling back
/// to a literal.
const RETRIES: usize = 8;

impl Corpus {
    /// `count` well-typed terms drawn at random within the bounds, built
    /// bottom-up so that every combination satisfies its typing rule. The
    /// same seed gives the same terms.
    pub fn sample_typed(&self, seed: u64, count: usize) -> Vec<(Term, GType)> {
        let mut rng = StdRng::seed_from_u64(seed);
        let env: Vec<GType> = self.params.free.iter().map(|(_, t)| t.clone()).collect();
        (0..count)
            .map(|_| self.random_typed(&mut rng, self.params.max_term_depth, &env))
            .collect()
    }

    fn random_leaf(&self, rng: &mut StdRng, env: &[GType]) -> (Term, GType) {
        if !env.is_empty() && rng.gen_bool(0.4) {
            let k = rng.gen_range(0..env.len());
            return (node(TermKind::Var(self.var(k))), env[k].clone());
        }
        let (l, gl) = self.labels.choose(rng).expect("labels").clone();
        (node(TermKind::Bool(rng.gen(), l)), GType::Bool(gl))
    }

    fn random_where(
        &self,
        rng: &mut StdRng,
        depth: usize,
        env: &[GType],
        ok: impl Fn(&GType) -> bool,
    ) -> Option<(Term, GType)> {
        (0..RETRIES)
            .map(|_| self.random_typed(rng, depth, env))
            .find(|(_, ty)| ok(ty))
    }

    fn random_typed(&self, rng: &mut StdRng, depth: usize, env: &[GType]) -> (Term, GType) {
        if depth == 1 || rng.gen_bool(0.15) {
            return self.random_leaf(rng, env);
        }
        let lat = &self.lattice;
        let below = rng.gen_range(1..depth);
        let full = depth - 1;
        let sub = |rng: &mut StdRng| if rng.gen_bool(0.5) { full } else { below };
        let is_bool = |t: &GType| matches!(t, GType::Bool(_));
        let built = match rng.gen_range(0..6) {
            0 => {
                let (annot, gannot) = self.types.choose(rng).expect("types").clone();
                let (label, glabel) = self.labels.choose(rng).expect("labels").clone();
                let mut inner = env.to_vec();
                inner.push(gannot.clone());
                let (body, cod) = self.random_typed(rng, full, &inner);
                Some((
                    node(TermKind::Lam {
                        param: self.var(env.len()),
                        annot,
                        body: Arc::new(body),
                        label,
                    }),
                    GType::fun(gannot, cod, glabel),
                ))
            }
            1 => {
                let d = sub(rng);
                let a = self.random_where(rng, full, env, is_bool);
                let b = self.random_where(rng, d, env, is_bool);
                a.zip(b).map(|((a, ta), (b, tb))| {
                    let op = *BinOp::ALL.choose(rng).expect("ops");
                    let ty = GType::Bool(glabel_join(lat, ta.label(), tb.label()));
                    (node(TermKind::BinOp(op, Arc::new(a), Arc::new(b))), ty)
                })
            }
            2 => {
                let d = sub(rng);
                let f = self.random_where(rng, full, env, |t| matches!(t, GType::Fun(..)));
                f.and_then(|(f, tf)| {
                    let GType::Fun(dom, cod, l) = &tf else {
                        unreachable!()
                    };
                    let (a, _) = self.random_where(rng, d, env, |t| csubtype(lat, t, dom))?;
                    let ty = gstamp(lat, cod, *l);
                    Some((node(TermKind::App(Arc::new(f), Arc::new(a))), ty))
                })
            }
            3 => {
                let (dc, da, db) = (sub(rng), sub(rng), sub(rng));
                let c = self.random_where(rng, dc, env, is_bool);
                let a = self.random_typed(rng, da, env);
                let b = self.random_where(rng, db, env, |t| csub_join(lat, &a.1, t).is_some());
                c.zip(b).map(|((c, tc), (b, tb))| {
                    let joined = csub_join(lat, &a.1, &tb).expect("joinable");
                    let ty = gstamp(lat, &joined, tc.label());
                    let t = TermKind::If(Arc::new(c), Arc::new(a.0), Arc::new(b));
                    (node(t), ty)
                })
            }
            4 => {
                let (a, ta) = self.random_typed(rng, full, env);
                let targets: Vec<&(SurfaceType, GType)> = self
                    .types
                    .iter()
                    .filter(|(_, t)| csubtype(lat, &ta, t))
                    .collect();
                targets.choose(rng).map(|(ty, gty)| {
                    (
                        node(TermKind::Ascribe(Arc::new(a), ty.clone())),
                        gty.clone(),
                    )
                })
            }
            _ => None,
        };
        built.unwrap_or_else(|| self.random_leaf(rng, env))
    }
}
