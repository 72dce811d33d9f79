//! Byte-level golden-file checks for every chart subcommand.
//!
//! Each invocation below must reproduce the committed SVG exactly.
//! To regenerate after an intentional rendering change:
//!
//! ```text
//! UPDATE_GOLDEN=1 cargo test -p tempoviz-cli --test golden
//! ```

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// The seven chart subcommands with their canonical fixture invocations.
fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let fx = fixtures();
    let input = fx.join("two_recordings.csv");
    let sections = fx.join("sections.csv");
    let meta = fx.join("meta.csv");
    let s = |p: &Path| p.to_string_lossy().into_owned();
    let base = |sub: &str| vec![sub.to_string(), "--input".into(), s(&input)];
    let with_meta = |mut v: Vec<String>| {
        v.extend(["--meta".into(), s(&meta)]);
        v
    };
    let with_sections = |mut v: Vec<String>| {
        v.extend(["--sections".into(), s(&sections)]);
        v
    };
    vec![
        (
            "tempograph",
            with_meta(with_sections(base("tempograph"))),
        ),
        ("multiples", with_meta(base("multiples"))),
        ("histogram", {
            let mut v = with_meta(base("histogram"));
            v.extend(["--ids".into(), "historic1930".into()]);
            v
        }),
        ("ridgeline", with_meta(base("ridgeline"))),
        ("stackedbar", with_meta(with_sections(base("stackedbar")))),
        ("combo", {
            let mut v = with_meta(with_sections(base("combo")));
            v.extend(["--section".into(), "Exposition".into()]);
            v
        }),
        ("panel", with_meta(with_sections(base("panel")))),
    ]
}

#[test]
fn chart_subcommands_match_golden_files() {
    let golden_dir = fixtures().join("golden");
    std::fs::create_dir_all(&golden_dir).unwrap();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let tmp = tempfile::tempdir().unwrap();

    for (name, mut args) in golden_cases() {
        let out = tmp.path().join(format!("{name}.svg"));
        args.extend(["--out".into(), out.to_string_lossy().into_owned()]);
        let status = Command::new(env!("CARGO_BIN_EXE_tempoviz"))
            .args(&args)
            .status()
            .unwrap();
        assert!(status.success(), "{name}: exit {status}");
        let produced = std::fs::read(&out).unwrap();

        let golden_path = golden_dir.join(format!("{name}.svg"));
        if update {
            std::fs::write(&golden_path, &produced).unwrap();
            continue;
        }
        let expected = std::fs::read(&golden_path)
            .unwrap_or_else(|e| panic!("{name}: missing golden file ({e}); run with UPDATE_GOLDEN=1"));
        assert!(
            produced == expected,
            "{name}: output differs from {} ({} vs {} bytes); \
             run with UPDATE_GOLDEN=1 if the change is intentional",
            golden_path.display(),
            produced.len(),
            expected.len()
        );
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (name, args) = golden_cases().remove(0);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = tmp.path().join(format!("{name}-{run}.svg"));
        let mut full = args.clone();
        full.extend(["--out".into(), out.to_string_lossy().into_owned()]);
        let status = Command::new(env!("CARGO_BIN_EXE_tempoviz"))
            .args(&full)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
