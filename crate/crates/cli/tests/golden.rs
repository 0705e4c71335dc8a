use std::fs;
use std::path::Path;

use incentive_chain_cli::figures;
use incentive_chain_cli::output::Format;

fn golden_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"))
}

#[test]
fn figures_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let written = figures::write_all(dir.path(), Format::Csv).unwrap();
    assert_eq!(written.len(), 7);
    for path in written {
        let name = path.file_name().unwrap();
        let got = fs::read(&path).unwrap();
        let want = fs::read(golden_dir().join(name))
            .unwrap_or_else(|e| panic!("missing golden {name:?}: {e}"));
        assert!(got == want, "{name:?} differs from its golden file");
    }
}

#[test]
fn figures_are_byte_stable_across_runs() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let a = figures::write_all(first.path(), Format::Csv).unwrap();
    let b = figures::write_all(second.path(), Format::Csv).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

#[test]
fn golden_files_carry_the_schema_line() {
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(text.starts_with("# incentive-chain v1\n"));
    }
}
