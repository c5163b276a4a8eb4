use flowmut_core::dsl::parse_source;

#[test]
fn all_fixture_programs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/programs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        if let Err(diags) = parse_source(path.to_str(), &src) {
            for d in &diags {
                eprintln!("{d}");
            }
            panic!("{} failed to parse", path.display());
        }
    }
}
