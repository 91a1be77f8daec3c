//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on the PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "sdepth.h"

int main(void) {
    SdepthMap *map = NULL;
    if (sdepth_phi_build(6, 3, SDEPTH_PHI_METHOD_AUTO, &map) != SDEPTH_STATUS_OK) return 10;
    if (sdepth_map_len(map) != 20) return 11;
    uint32_t image = 0;
    if (sdepth_map_image(map, 0x7, &image) != SDEPTH_STATUS_OK || image != 0x38) return 12;
    sdepth_map_free(map);

    if (sdepth_phi_build(3, 2, SDEPTH_PHI_METHOD_AUTO, &map) != SDEPTH_STATUS_INVALID_ARGUMENT) return 13;
    if (sdepth_last_error() == NULL) return 14;

    SdepthPartition *p = NULL;
    if (sdepth_partition_veronese(7, 3, &p) != SDEPTH_STATUS_OK) return 15;
    uint32_t s = 0;
    if (sdepth_partition_verify(p, &s) != SDEPTH_STATUS_OK || s != 4) return 16;
    char *json = sdepth_partition_to_json(p);
    if (json == NULL || strstr(json, "\"veronese\"") == NULL) return 17;
    sdepth_string_free(json);
    sdepth_partition_free(p);

    uint32_t lo = 0, hi = 0;
    if (sdepth_exact_value(SDEPTH_POSET_KIND_VERONESE, 3, 1, 0, 0, &lo, &hi, NULL) != SDEPTH_STATUS_OK) return 18;
    if (lo != 2 || hi != 2) return 19;
    printf("ok\n");
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sdepth.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 10);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let lib = target_dir().join("libsdepth_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
