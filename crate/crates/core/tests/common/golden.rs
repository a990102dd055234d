//! Every emitted file format at a fixed resolution, with the command that
//! produces it. Outputs are compared byte for byte with `tests/golden/`;
//! set `UPDATE_GOLDEN=1` to rewrite the stored copies.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const COMB: [&str; 4] = ["--c0", "-0.117,-0.76", "--c1", "-0.62,-0.62"];

pub fn cases() -> Vec<(&'static str, Vec<&'static str>)> {
    let comb = |cmd: &'static str, depth: &'static str, extra: &[&'static str]| {
        let mut v = vec![cmd];
        v.extend(COMB);
        v.extend(["--depth", depth]);
        v.extend(extra);
        v
    };
    let hybrid_origin = vec!["hybrid", "--c0", "0,0", "--grid", "-2,2,-2,2,64,64", "--depth", "8"];
    let hybrid_m075 = vec!["hybrid", "--c0", "-0.75,0", "--grid", "-2,2,-2,2,32,32", "--depth", "8", "--mode", "multicritical"];
    vec![
        ("fixed_map_basilica_n12.csv", vec!["fixed-map", "--c0", "0,0", "--c1", "-1,0", "--depth", "12", "--mode", "regular"]),
        (
            "fixed_map_basilica_n12_multicritical.csv",
            vec!["fixed-map", "--c0", "0,0", "--c1", "-1,0", "--depth", "12", "--mode", "multicritical"],
        ),
        ("fixed_map_comb_n10.csv", comb("fixed-map", "10", &[])),
        ("fixed_map_comb_n10_multicritical.csv", comb("fixed-map", "10", &["--mode", "multicritical"])),
        ("accum_origin_n4.csv", vec!["accum", "--c0", "0,0", "--c1", "0,0", "--depth", "4"]),
        ("accum_comb_n12.csv", comb("accum", "12", &[])),
        ("plateaus_comb_n16.csv", comb("plateaus", "16", &[])),
        ("loglog_comb_n16.csv", comb("loglog", "16", &[])),
        ("loglog_comb_n10_all.csv", comb("loglog", "10", &["--include-unrepresented"])),
        ("hybrid_origin_n8.pgm", hybrid_origin.clone()),
        ("hybrid_origin_n8.png", hybrid_origin),
        ("hybrid_m075_n8_multicritical.csv", hybrid_m075.clone()),
        ("hybrid_m075_n8_plateau.pgm", [hybrid_m075.as_slice(), &["--plateau"]].concat()),
        ("contour_n6.pgm", vec!["contour", "--grid-c0", "-2,2,-2,2,24,24", "--grid-c1", "-2,2,-2,2,12,12", "--depth", "6"]),
        (
            "contour_n6_multicritical.csv",
            vec!["contour", "--grid-c0", "-2,2,-2,2,12,12", "--grid-c1", "-2,2,-2,2,12,12", "--depth", "6", "--mode", "multicritical"],
        ),
        ("multi_fix_c0_n8.csv", vec!["multi", "--fix-c0", "-0.75,0", "--grid", "-2,2,-2,2,32,32", "--depth", "8"]),
        ("multi_fix_c1_n8.pgm", vec!["multi", "--fix-c1", "0,0.1", "--grid", "-2,2,-2,2,32,32", "--depth", "8"]),
        (
            "multi_voxels_16.csv",
            vec!["multi", "--line", "-2,1", "--samples", "16", "--im-offset", "0", "--grid", "-2,2,-2,2,16,16", "--depth", "8"],
        ),
        ("classical_96_n20.pgm", vec!["classical", "--grid", "-2,2,-2,2,96,96", "--iters", "20"]),
        (
            "julia_mask_c1_02i.pgm",
            vec!["julia-mask", "--c0", "0,0", "--c1", "0,0.2", "--p", "0.5", "--len", "50", "--seed", "3", "--grid", "-2.1,2.1,-2.1,2.1,201,201"],
        ),
        (
            "julia_connect_6x6.csv",
            vec![
                "julia-connect", "--c0", "0,0", "--c1-grid", "-1.5,1.5,-1.5,1.5,6,6",
                "--root", "0110100110010110011010011001011001101001", "--z-grid", "-2.1,2.1,-2.1,2.1,101,101",
            ],
        ),
        ("random_root_p05_n20_s42.txt", vec!["random-root", "--p", "0.5", "--len", "20", "--seed", "42"]),
    ]
}

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_template-mset"));
    cmd.env_remove("TEMPLATE_MSET_THREADS");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct CaseRun {
    pub bytes: Vec<u8>,
    pub summary: serde_json::Value,
    pub matches_golden: bool,
}

/// Runs the named case into a temp dir and compares with the stored copy.
pub fn run_case(name: &str) -> CaseRun {
    let args = cases()
        .into_iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no golden case {name}"))
        .1;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join(name);
    let out_str = out.to_str().unwrap().to_string();
    let mut full = args.clone();
    full.extend(["--out", out_str.as_str()]);
    let o = run(&full);
    assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).expect("JSON summary");
    assert_eq!(summary["subcommand"], args[0]);
    assert_eq!(summary["output_files"][0], out_str.as_str());

    let bytes = std::fs::read(&out).unwrap();
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &bytes).unwrap();
    }
    let matches_golden = std::fs::read(&path).map(|g| g == bytes).unwrap_or(false);
    CaseRun {
        bytes,
        summary,
        matches_golden,
    }
}
