use hsums::algebra::basis_census;
use hsums::expr::Expr;
use hsums::identities::{catalog, check_weight, completeness, Group, Outcome, Section, Verifier};
use hsums::num::Precision;
use hsums::sums::enumerate;

#[test]
fn enumeration_counts() {
    for w in 1..=6u32 {
        assert_eq!(enumerate(w, false).len(), 2 * 3usize.pow(w - 1), "weight {w}");
    }
    assert_eq!(enumerate(6, true).len(), 99);
    assert_eq!(basis_census(6, true).algebraic_basis_count, 30);
}

#[test]
fn depth_records_have_weight_six() {
    for r in catalog().relations().iter().filter(|r| matches!(r.group, Group::Depth(_))) {
        assert_eq!(check_weight(r).unwrap(), 6, "{}", r.id);
    }
}

#[test]
fn every_weight_six_sum_is_covered() {
    let c = completeness(catalog());
    assert!(c.missing.is_empty(), "{:?}", c.missing);
    assert_eq!(c.rank, c.needed);
}

#[test]
fn alternating_records_hold_at_both_parities() {
    let v = Verifier::new(Precision::digits(40));
    let rels: Vec<_> = catalog()
        .select(Section::All)
        .into_iter()
        .filter(|r| r.is_authoritative() && matches!(r.group, Group::Depth(_)))
        .filter(|r| {
            let mut parity = false;
            r.rhs.visit(&mut |e| parity |= matches!(e, Expr::Parity(_)));
            parity
        })
        .collect();
    assert!(!rels.is_empty());
    let s = v.verify_all(&rels, &[1, 2, 7, 8]).unwrap();
    assert!(s.all_pass(), "{}", s.to_text());
}

#[test]
fn superseded_transcriptions_are_reported_not_counted() {
    let s = Verifier::new(Precision::digits(30)).verify_all(&catalog().select(Section::Depth(2)), &[1, 2, 3, 4]).unwrap();
    assert_eq!(s.failed, 0);
    assert!(s.superseded_failing > 0);
    for r in s.reports.iter().filter(|r| r.superseded) {
        assert_ne!(r.outcome, Outcome::Pass, "{} holds although it is marked superseded", r.id);
    }
}
