use gsec::lattice::{LatticeError, SecurityLattice};
use proptest::prelude::*;

/// Reflexive-transitive closure of declared edges, by Floyd-Warshall.
fn closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Least upper bound by exhaustive search over upper bounds.
fn brute_lub(r: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = r.len();
    let ubs: Vec<usize> = (0..n).filter(|&u| r[a][u] && r[b][u]).collect();
    let least: Vec<usize> = ubs
        .iter()
        .copied()
        .filter(|&u| ubs.iter().all(|&v| r[u][v]))
        .collect();
    (least.len() == 1).then(|| least[0])
}

fn brute_glb(r: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = r.len();
    let lbs: Vec<usize> = (0..n).filter(|&l| r[l][a] && r[l][b]).collect();
    let greatest: Vec<usize> = lbs
        .iter()
        .copied()
        .filter(|&l| lbs.iter().all(|&m| r[m][l]))
        .collect();
    (greatest.len() == 1).then(|| greatest[0])
}

fn json(names: &[&str], edges: &[(usize, usize)]) -> String {
    let elements: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
    let order: Vec<String> = edges
        .iter()
        .map(|(a, b)| format!("[\"{}\", \"{}\"]", names[*a], names[*b]))
        .collect();
    format!(
        "{{\"elements\": [{}], \"order\": [{}]}}",
        elements.join(", "),
        order.join(", ")
    )
}

/// Compare a loaded lattice against the brute-force closure.
fn assert_matches_oracle(names: &[&str], edges: &[(usize, usize)]) {
    let lat = SecurityLattice::from_json(&json(names, edges)).unwrap();
    let r = closure(names.len(), edges);
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            let (la, lb) = (lat.label(a).unwrap(), lat.label(b).unwrap());
            assert_eq!(lat.leq(la, lb), r[i][j], "{a} <= {b}");
            assert_eq!(
                lat.name(lat.join(la, lb)),
                names[brute_lub(&r, i, j).unwrap()]
            );
            assert_eq!(
                lat.name(lat.meet(la, lb)),
                names[brute_glb(&r, i, j).unwrap()]
            );
        }
    }
}

#[test]
fn two_point_from_config() {
    let lat =
        SecurityLattice::from_json(r#"{"elements": ["L", "H"], "order": [["L", "H"]]}"#).unwrap();
    assert_eq!(lat.name(lat.bottom()), "L");
    assert_eq!(lat.name(lat.top()), "H");
    let (l, h) = (lat.label("L").unwrap(), lat.label("H").unwrap());
    assert_eq!(lat.join(l, h), h);
    assert!(!lat.leq(h, l));
}

#[test]
fn one_point_lattice() {
    let lat = SecurityLattice::from_json(r#"{"elements": ["X"], "order": []}"#).unwrap();
    assert_eq!(lat.len(), 1);
    assert_eq!(lat.top(), lat.bottom());
}

#[test]
fn diamond_join_and_meet() {
    let lat = SecurityLattice::diamond();
    let m1 = lat.label("M1").unwrap();
    let m2 = lat.label("M2").unwrap();
    assert_eq!(lat.join(m1, m2), lat.top());
    assert_eq!(lat.meet(m1, m2), lat.bottom());
    assert!(!lat.leq(m1, m2) && !lat.leq(m2, m1));
    assert_matches_oracle(
        &["Bot", "M1", "M2", "Top"],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
    );
}

#[test]
fn builtins_match_oracle() {
    assert_matches_oracle(&["L", "H"], &[(0, 1)]);
    assert!(SecurityLattice::builtin("two-point").is_some());
    assert!(SecurityLattice::builtin("diamond").is_some());
    assert!(SecurityLattice::builtin("three-point").is_none());
}

#[test]
fn closure_of_chain_edges() {
    assert_matches_oracle(&["A", "B", "C", "D"], &[(0, 1), (1, 2), (2, 3)]);
}

#[test]
fn powerset_of_three() {
    let names = ["E", "A", "B", "C", "AB", "AC", "BC", "ABC"];
    let mut edges = Vec::new();
    for i in 0..8usize {
        for j in 0..8usize {
            if i != j && i & j == i && (j & !i).count_ones() == 1 {
                edges.push((i, j));
            }
        }
    }
    // names are indexed by bitmask
    let names: Vec<&str> = (0..8)
        .map(|m| *names.iter().find(|n| mask(n) == m).unwrap())
        .collect();
    assert_matches_oracle(&names, &edges);
}

fn mask(name: &str) -> usize {
    if name == "E" {
        return 0;
    }
    name.chars().map(|c| 1 << (c as usize - 'A' as usize)).sum()
}

#[test]
fn rejects_malformed_configs() {
    let err = |text: &str| SecurityLattice::from_json(text).unwrap_err();
    assert!(matches!(err("not json"), LatticeError::Parse(_)));
    assert!(matches!(
        err(r#"{"elements": [], "order": []}"#),
        LatticeError::Empty
    ));
    assert!(matches!(
        err(r#"{"elements": ["A", "A"], "order": []}"#),
        LatticeError::Duplicate(_)
    ));
    assert!(matches!(
        err(r#"{"elements": ["A"], "order": [["A", "Z"]]}"#),
        LatticeError::UnknownElement(_)
    ));
    assert!(matches!(
        err(r#"{"elements": ["A", "B"], "order": [["A", "B"], ["B", "A"]]}"#),
        LatticeError::Cycle(..)
    ));
    assert!(matches!(
        err(r#"{"elements": ["?"], "order": []}"#),
        LatticeError::BadName(_)
    ));
    assert!(matches!(
        err(r#"{"elements": ["true"], "order": []}"#),
        LatticeError::BadName(_)
    ));
}

#[test]
fn rejects_posets_that_are_not_lattices() {
    let err = |text: &str| SecurityLattice::from_json(text).unwrap_err();
    // two incomparable elements with no bounds
    let e = err(r#"{"elements": ["A", "B"], "order": []}"#);
    assert!(matches!(
        e,
        LatticeError::NoJoin(..) | LatticeError::NoTop | LatticeError::NoBottom
    ));
    // A, B both below C and D: no least upper bound
    let e = err(r#"{"elements": ["Bot", "A", "B", "C", "D", "Top"],
            "order": [["Bot","A"],["Bot","B"],["A","C"],["A","D"],["B","C"],["B","D"],["C","Top"],["D","Top"]]}"#);
    assert!(matches!(
        e,
        LatticeError::NoJoin(..) | LatticeError::NoMeet(..)
    ));
}

fn lattices() -> Vec<SecurityLattice> {
    vec![SecurityLattice::two_point(), SecurityLattice::diamond()]
}

#[test]
fn algebraic_laws_exhaustive() {
    for lat in lattices() {
        let ls: Vec<_> = lat.labels().collect();
        for &x in &ls {
            assert!(lat.leq(lat.bottom(), x) && lat.leq(x, lat.top()));
            assert_eq!(lat.join(x, x), x);
            assert_eq!(lat.meet(x, x), x);
            for &y in &ls {
                assert_eq!(lat.join(x, y), lat.join(y, x));
                assert_eq!(lat.meet(x, y), lat.meet(y, x));
                assert_eq!(lat.join(x, lat.meet(x, y)), x);
                assert_eq!(lat.meet(x, lat.join(x, y)), x);
                assert_eq!(lat.leq(x, y), lat.join(x, y) == y);
                assert_eq!(lat.leq(x, y), lat.meet(x, y) == x);
                if lat.leq(x, y) && lat.leq(y, x) {
                    assert_eq!(x, y);
                }
                for &z in &ls {
                    assert_eq!(lat.join(x, lat.join(y, z)), lat.join(lat.join(x, y), z));
                    assert_eq!(lat.meet(x, lat.meet(y, z)), lat.meet(lat.meet(x, y), z));
                    if lat.leq(x, y) && lat.leq(y, z) {
                        assert!(lat.leq(x, z));
                    }
                }
            }
        }
    }
}

proptest! {
    /// Random chains: every total order is a lattice whose join is the later
    /// element.
    #[test]
    fn chains_load_with_max_join(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let names: Vec<String> = (0..6).map(|i| format!("C{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let edges: Vec<(usize, usize)> = perm.windows(2).map(|w| (w[0], w[1])).collect();
        let lat = SecurityLattice::from_json(&json(&refs, &edges)).unwrap();
        let rank = |i: usize| perm.iter().position(|&p| p == i).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = (lat.label(refs[i]).unwrap(), lat.label(refs[j]).unwrap());
                let expect = if rank(i) >= rank(j) { refs[i] } else { refs[j] };
                prop_assert_eq!(lat.name(lat.join(a, b)), expect);
            }
        }
    }
}
