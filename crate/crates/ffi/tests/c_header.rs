//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is available.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "afsterm.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    if (!f) return 10;
    static char text[1 << 16];
    size_t n = fread(text, 1, sizeof text - 1, f);
    fclose(f);
    text[n] = 0;

    AfstermSystem *sys = NULL;
    if (afsterm_system_parse(text, &sys) != AFSTERM_STATUS_OK) return 11;
    char *cert = NULL;
    if (afsterm_check(sys, NULL, &cert) != AFSTERM_STATUS_OK) return 12;
    if (afsterm_verify(sys, cert) != AFSTERM_STATUS_OK) return 13;
    char *nf = NULL;
    size_t steps = 0;
    if (afsterm_normalize(sys, "map (\\x:nat. s x) (cons 0 nil)", 100, &nf, &steps) != AFSTERM_STATUS_OK) return 14;
    printf("%s|%zu\n", nf, steps);
    if (afsterm_verify(sys, "CERT v1\n") != AFSTERM_STATUS_REJECTED) return 15;
    if (afsterm_last_error() == NULL) return 16;
    afsterm_string_free(nf);
    afsterm_string_free(cert);
    afsterm_system_free(sys);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn compiler() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            Command::new(c)
                .arg("--version")
                .output()
                .is_ok_and(|o| o.status.success())
        })
        .map(String::from)
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = target_dir().join("libafsterm_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
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
    assert!(status.success(), "C compilation failed");
    let map = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus/map.afs");
    let out = Command::new(&exe).arg(&map).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout), "cons (s 0) nil|3\n");
}
