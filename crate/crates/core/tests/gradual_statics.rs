use gsec::gradual::{interior_type, precision_type};
use gsec::harness::{relaxations, Corpus, CorpusParams};
use gsec::intrinsic::justifies;
use gsec::syntax::{print, TermKind};
use gsec::{
    check_intrinsic, elaborate, parse, typecheck_gradual, typecheck_static, EvTerm, GLabel, GType,
    IKind, ITerm, SecurityLattice, TypeEnv,
};

const FGV: &str = r"(\x:Bool@L. x)@L ((\x:Bool@?. x)@L false@H)";
const FV: &str = r"(\x:Bool@L. x)@L false@H";

fn two() -> SecurityLattice {
    SecurityLattice::two_point()
}

fn gtype(src: &str, lat: &SecurityLattice) -> Result<GType, gsec::TypeError> {
    typecheck_gradual(&TypeEnv::new(), &parse(src, lat).unwrap(), lat)
}

fn elab(src: &str, lat: &SecurityLattice) -> ITerm {
    elaborate(&TypeEnv::new(), &parse(src, lat).unwrap(), lat).unwrap()
}

#[test]
fn worked_example_types() {
    let lat = two();
    assert_eq!(lat.render(&gtype(FGV, &lat).unwrap()), "Bool@L");
    assert!(gtype(FV, &lat).is_err());
}

#[test]
fn worked_example_elaboration() {
    let lat = two();
    let it = elab(FGV, &lat);
    assert_eq!(
        lat.render(&it),
        "(<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>(\\x:Bool@L. x)@L) \
         (<Bool@L, Bool@L>((<(Bool@? -> Bool@?)@L, (Bool@? -> Bool@?)@L>(\\x:Bool@?. x)@L) \
         (<Bool@H, Bool@H>false@H)))"
    );
    let IKind::App { fun, arg, index } = &it.kind else {
        panic!("not an application");
    };
    assert_eq!(lat.render(&fun.ev.left), "(Bool@L -> Bool@L)@L");
    assert_eq!(lat.render(&arg.ev), "<Bool@L, Bool@L>");
    assert_eq!(lat.render(index), "(Bool@L -> Bool@L)@L");
    assert_eq!(check_intrinsic(&TypeEnv::new(), &it, &lat).unwrap(), it.ty);
}

#[test]
fn literal_passes_through() {
    let lat = two();
    let it = elab("true@L", &lat);
    assert_eq!(
        it.kind,
        IKind::Bool(true, GLabel::Known(lat.label("L").unwrap()))
    );
    assert_eq!(lat.render(&it), "true@L");
}

#[test]
fn ascription_uses_interior_evidence() {
    let lat = two();
    let it = elab("true@H :: Bool@?", &lat);
    let IKind::Asc { inner, target } = &it.kind else {
        panic!("not an ascription");
    };
    let EvTerm { ev, term } = inner.as_ref();
    assert_eq!(Some(ev.clone()), interior_type(&lat, &term.ty, target));
    assert_eq!(lat.render(ev), "<Bool@H, Bool@H>");
    assert_eq!(lat.render(&it), "<Bool@H, Bool@H>true@H :: Bool@?");
    let it = elab("true@? :: Bool@L", &lat);
    assert_eq!(lat.render(&it), "<Bool@L, Bool@L>true@? :: Bool@L");
}

#[test]
fn if_targets_stamped_branch_join() {
    let lat = two();
    let it = elab("if true@? then true@L else false@H", &lat);
    let IKind::If {
        target,
        guard,
        then,
        ..
    } = &it.kind
    else {
        panic!("not an if");
    };
    assert_eq!(*guard, GLabel::Unknown);
    assert_eq!(lat.render(target), "Bool@H");
    assert_eq!(lat.render(&it.ty), "Bool@H");
    assert!(justifies(&lat, &then.ev, &then.term.ty, target));
    let it = elab("if true@? then true@L else false@L", &lat);
    assert_eq!(lat.render(&it.ty), "Bool@?");
}

#[test]
fn gradual_rejections() {
    let lat = two();
    for src in [
        "x",
        "true@L true@L",
        r"(\x:Bool@L. x)@L false@H",
        "true@H :: Bool@L",
        r"if true@L then true@L else (\x:Bool@L. x)@L",
        r"(\x:Bool@L. x)@L (\y:Bool@?. y)@?",
    ] {
        assert!(gtype(src, &lat).is_err(), "{src}");
    }
    for src in [
        "true@? :: Bool@L",
        r"(\x:Bool@L. x)@L (true@H :: Bool@?)",
        "true@H && x",
    ] {
        let env = TypeEnv::new().with("x", GType::Bool(GLabel::Unknown));
        assert!(
            typecheck_gradual(&env, &parse(src, &lat).unwrap(), &lat).is_ok(),
            "{src}"
        );
    }
}

#[test]
fn static_terms_type_alike() {
    let lat = two();
    let corpus = Corpus::new(&lat, CorpusParams::closed(2, 2, false));
    let mut typed = 0;
    corpus.for_each(|t| {
        let s = typecheck_static(&TypeEnv::new(), t, &lat);
        let g = typecheck_gradual(&TypeEnv::new(), t, &lat);
        match (s, g) {
            (Ok(s), Ok(g)) => {
                typed += 1;
                assert_eq!(g.to_static(), Some(s), "{}", print(t));
            }
            (Err(_), Err(_)) => {}
            (s, g) => panic!("{}: {s:?} vs {g:?}", print(t)),
        }
    });
    assert!(typed > 0);
}

#[test]
fn relaxing_a_label_keeps_typing() {
    let lat = two();
    let t = parse("true@L", &lat).unwrap();
    let rs = relaxations(&t);
    assert_eq!(rs.len(), 1);
    assert_eq!(print(&rs[0]), "true@?");
    let (a, b) = (
        gtype("true@L", &lat).unwrap(),
        gtype("true@?", &lat).unwrap(),
    );
    assert!(precision_type(&a, &b));
    let t = parse(FGV, &lat).unwrap();
    for r in relaxations(&t) {
        let ty = typecheck_gradual(&TypeEnv::new(), &r, &lat).unwrap();
        assert!(precision_type(&a, &ty), "{}", print(&r));
    }
    assert!(relaxations(&parse("x", &lat).unwrap()).is_empty());
}

#[test]
fn elaboration_is_well_formed_on_sampled_terms() {
    let lat = SecurityLattice::diamond();
    let corpus = Corpus::new(&lat, CorpusParams::closed(4, 2, true));
    for (t, ty) in corpus.sample_typed(5, 2000) {
        let it = elaborate(&TypeEnv::new(), &t, &lat).unwrap();
        assert_eq!(it.ty, ty, "{}", print(&t));
        assert_eq!(
            check_intrinsic(&TypeEnv::new(), &it, &lat).unwrap(),
            ty,
            "{}",
            print(&t)
        );
    }
}

#[test]
fn free_variables_elaborate_with_their_types() {
    let lat = two();
    let env = TypeEnv::new().with("x", GType::Bool(GLabel::Known(lat.top())));
    let t = parse(r"(\y:Bool@?. y)@L x", &lat).unwrap();
    let it = elaborate(&env, &t, &lat).unwrap();
    assert_eq!(lat.render(&it.ty), "Bool@?");
    assert!(matches!(&t.kind, TermKind::App(..)));
    assert_eq!(check_intrinsic(&env, &it, &lat).unwrap(), it.ty);
}
