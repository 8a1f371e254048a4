use std::sync::Arc;

use gsec::harness::{Corpus, CorpusParams};
use gsec::syntax::{print, BinOp, SurfaceLabel, SurfaceType, TermKind};
use gsec::{parse, SecurityLattice, Term};
use proptest::prelude::*;

fn two() -> SecurityLattice {
    SecurityLattice::two_point()
}

fn bool_ty(l: &str) -> SurfaceType {
    SurfaceType::Bool(label(l))
}

fn label(l: &str) -> SurfaceLabel {
    if l == "?" {
        SurfaceLabel::Unknown
    } else {
        SurfaceLabel::known(l)
    }
}

#[test]
fn parses_public_channel() {
    let t = parse(r"(\x:Bool@L. x)@L", &two()).unwrap();
    assert_eq!(t, Term::lam("x", bool_ty("L"), Term::var("x"), label("L")));
}

#[test]
fn parses_binop() {
    let t = parse("true@H && false@L", &two()).unwrap();
    assert_eq!(
        t,
        Term::binop(
            BinOp::And,
            Term::bool(true, label("H")),
            Term::bool(false, label("L"))
        )
    );
}

#[test]
fn ascription_binds_loosest() {
    let t = parse(r"((\x:Bool@?. x)@L false@H) :: Bool@L", &two()).unwrap();
    let g = Term::lam("x", bool_ty("?"), Term::var("x"), label("L"));
    let expected = Term::ascribe(Term::app(g, Term::bool(false, label("H"))), bool_ty("L"));
    assert_eq!(t, expected);
    assert_eq!(parse(&print(&t), &two()).unwrap(), t);
    let u = parse("true@L && false@L :: Bool@H", &two()).unwrap();
    assert!(matches!(u.kind, TermKind::Ascribe(..)));
}

#[test]
fn operators_are_left_associative_and_application_binds_tightest() {
    let t = parse("a || b && c", &two()).unwrap();
    let TermKind::BinOp(BinOp::And, lhs, _) = &t.kind else {
        panic!("{t:?}");
    };
    assert!(matches!(lhs.kind, TermKind::BinOp(BinOp::Or, ..)));
    let t = parse("f x => g y", &two()).unwrap();
    let TermKind::BinOp(BinOp::Implies, lhs, rhs) = &t.kind else {
        panic!("{t:?}");
    };
    assert!(matches!(lhs.kind, TermKind::App(..)));
    assert!(matches!(rhs.kind, TermKind::App(..)));
    let t = parse("f x y", &two()).unwrap();
    let TermKind::App(fun, _) = &t.kind else {
        panic!("{t:?}");
    };
    assert!(matches!(fun.kind, TermKind::App(..)));
}

#[test]
fn unannotated_values_default_to_bottom() {
    assert_eq!(parse("true", &two()).unwrap(), Term::bool(true, label("L")));
    let diamond = SecurityLattice::diamond();
    assert_eq!(
        parse("false", &diamond).unwrap(),
        Term::bool(false, label("Bot"))
    );
    let t = parse(r"(\x:Bool@H. x)", &two()).unwrap();
    assert_eq!(t, Term::lam("x", bool_ty("H"), Term::var("x"), label("L")));
}

#[test]
fn parses_if_and_function_types() {
    let t = parse(
        r"if true@H then (\f:(Bool@L -> Bool@?)@H. f)@L else x",
        &two(),
    )
    .unwrap();
    let TermKind::If(_, then, _) = &t.kind else {
        panic!("{t:?}");
    };
    let TermKind::Lam { annot, .. } = &then.kind else {
        panic!("{then:?}");
    };
    assert_eq!(
        *annot,
        SurfaceType::Fun(Arc::new(bool_ty("L")), Arc::new(bool_ty("?")), label("H"))
    );
}

#[test]
fn prints_worked_example() {
    let src = r"(\x:Bool@L. x)@L ((\x:Bool@?. x)@L false@H)";
    assert_eq!(print(&parse(src, &two()).unwrap()), src);
    assert_eq!(print(&Term::var("x")), "x");
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse("", &two()).unwrap_err();
    assert_eq!((e.line, e.col), (1, 1));
    let e = parse("true@L &&\n  ", &two()).unwrap_err();
    assert_eq!(e.line, 2);
    let e = parse("true@L & false@L", &two()).unwrap_err();
    assert_eq!((e.line, e.col), (1, 8));
    assert!(parse(r"(\x:Bool. x)", &two()).is_err());
    assert!(parse("true@L)", &two()).is_err());
}

#[test]
fn spans_cover_source() {
    let t = parse("  true@L  ", &two()).unwrap();
    assert_eq!((t.span.line, t.span.col, t.span.end_col), (1, 3, 9));
}

#[test]
fn round_trip_on_enumerated_terms() {
    let lat = two();
    let corpus = Corpus::new(&lat, CorpusParams::closed(2, 2, true));
    let terms = corpus.terms();
    assert!(terms.len() >= 1000);
    let step = terms.len() / 1000;
    let mut checked = 0;
    for t in terms.iter().step_by(step.max(1)) {
        assert_eq!(&parse(&print(t), &lat).unwrap(), t, "{}", print(t));
        checked += 1;
    }
    assert!(checked >= 1000);
    let deep = Corpus::new(&lat, CorpusParams::closed(5, 2, true));
    for (t, _) in deep.sample_typed(11, 500) {
        assert_eq!(parse(&print(&t), &lat).unwrap(), t, "{}", print(&t));
    }
}

fn arb_label() -> impl Strategy<Value = SurfaceLabel> {
    prop_oneof![
        Just(label("L")),
        Just(label("H")),
        Just(SurfaceLabel::Unknown)
    ]
}

fn arb_type() -> impl Strategy<Value = SurfaceType> {
    arb_label()
        .prop_map(SurfaceType::Bool)
        .prop_recursive(3, 8, 2, |inner| {
            (inner.clone(), inner, arb_label())
                .prop_map(|(a, b, l)| SurfaceType::Fun(Arc::new(a), Arc::new(b), l))
        })
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (any::<bool>(), arb_label()).prop_map(|(b, l)| Term::bool(b, l)),
        prop_oneof![Just("x"), Just("y"), Just("thenx")].prop_map(Term::var),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (inner.clone(), arb_type(), arb_label())
                .prop_map(|(b, ty, l)| Term::lam("x", ty, b, l)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (
                prop_oneof![Just(BinOp::And), Just(BinOp::Or), Just(BinOp::Implies)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Term::binop(op, a, b)),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(c, a, b)| Term::if_(c, a, b)),
            (inner, arb_type()).prop_map(|(t, ty)| Term::ascribe(t, ty)),
        ]
    })
}

proptest! {
    #[test]
    fn round_trip_on_random_terms(t in arb_term()) {
        let text = print(&t);
        prop_assert_eq!(parse(&text, &two()).unwrap(), t, "{}", text);
    }

    #[test]
    fn printing_is_stable(t in arb_term()) {
        let once = print(&t);
        prop_assert_eq!(print(&parse(&once, &two()).unwrap()), once);
    }
}
