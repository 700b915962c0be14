use gaussmap::verify::{property_names, run, run_filtered, summary_table, Suite};

#[test]
fn substrate_suites_pass() {
    for suite in [Suite::Algebra, Suite::Jets, Suite::Engine] {
        let checks = run(suite, 7);
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.passed, "{}: {:?}", c.name, c.failure);
            assert!(c.cases > 0 && c.worst <= c.tolerance);
        }
    }
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let strip = |s: Suite, seed| {
        run(s, seed).into_iter().map(|c| (c.name, c.cases, c.worst.to_bits())).collect::<Vec<_>>()
    };
    assert_eq!(strip(Suite::Algebra, 11), strip(Suite::Algebra, 11));
    assert_eq!(strip(Suite::Jets, 11), strip(Suite::Jets, 11));
    assert_ne!(strip(Suite::Algebra, 11), strip(Suite::Algebra, 12));
}

#[test]
fn suite_names_parse() {
    for name in Suite::NAMES {
        assert_eq!(name.parse::<Suite>().unwrap().name(), name);
    }
    let err = "bogus".parse::<Suite>().unwrap_err().to_string();
    for name in Suite::NAMES {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn property_listing_and_filter() {
    let all = property_names(Suite::All);
    let mut names: Vec<_> = all.iter().map(|(_, n)| *n).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), all.len());
    assert!(all.iter().any(|(s, n)| *s == Suite::Algebra && *n == "plucker-identity"));
    let only = run_filtered(Suite::Algebra, 1, Some("plucker"));
    assert_eq!(only.len(), 1);
    assert_eq!(only[0].cases, 1000);
    let table = summary_table(&only);
    assert!(table.contains("plucker-identity") && table.contains("PASS"));
    assert!(table.ends_with("1 properties, 0 failed\n"));
}
