use relkit::zoo::{zoo_check, zoo_list};

#[test]
fn every_entry_matches_its_decider() {
    for entry in zoo_list() {
        let start = std::time::Instant::now();
        let report = zoo_check(&entry.name, entry.check_bound).unwrap();
        eprintln!("{} ({:.1?})", report.to_string().trim_end(), start.elapsed());
        assert!(report.verified(), "{report}");
    }
}
