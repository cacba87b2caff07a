use std::sync::Arc;

use polecalc::corpus::{lattices_up_to, standard_corpus};
use polecalc::{verify_corpus, verify_suite, CheckRecord, Suite};

fn failures(records: &[CheckRecord]) -> Vec<String> {
    records.iter().filter(|r| !r.passed).map(|r| format!("{} [{}] {}", r.name, r.anchor, r.detail)).collect()
}

#[test]
fn every_suite_holds_on_lattices_up_to_five() {
    for l in lattices_up_to(5).unwrap() {
        let records = verify_suite(&l.lattice, Suite::All);
        assert!(!records.is_empty(), "{}", l.name);
        assert_eq!(failures(&records), Vec::<String>::new(), "{}", l.name);
    }
}

#[test]
fn epsilon_and_opposites_hold_on_the_standard_corpus() {
    for l in standard_corpus().unwrap() {
        for suite in [Suite::Epsilon, Suite::Opposites, Suite::Idempotents] {
            let records = verify_suite(&Arc::clone(&l.lattice), suite);
            assert_eq!(failures(&records), Vec::<String>::new(), "{} {suite}", l.name);
        }
    }
}

#[test]
fn corpus_suite_up_to_five() {
    let records = verify_corpus(5);
    assert_eq!(failures(&records), Vec::<String>::new());
}
