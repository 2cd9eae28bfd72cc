use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nfold_ffi::*;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> CString {
    let p = crate_dir().join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn exported_names() -> Vec<String> {
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.split_once("extern \"C\" fn ").map(|(_, rest)| rest))
        .map(|rest| rest.split('(').next().unwrap().to_string())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/nfold.h")).unwrap();
    let names = exported_names();
    assert!(names.len() >= 10);
    for name in names {
        assert!(header.contains(&format!(" {name}(")) || header.contains(&format!("*{name}(")), "{name} missing");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("main.c");
    std::fs::write(&main, "#include \"nfold.h\"\nint main(void) { return nfold_last_error() == 0 ? 0 : 1; }\n").unwrap();
    let out = Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(crate_dir().join("include"))
        .arg(&main)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}

#[test]
fn shipped_fixtures_through_the_abi() {
    unsafe {
        let mut ring = ptr::null_mut();
        assert_eq!(nfold_ring_from_json(fixture("ring_q_x3.json").as_ptr(), &mut ring), NfoldStatus::Ok);
        let mut x = ptr::null_mut();
        assert_eq!(nfold_object_from_json(ring, fixture("xxx_q_x3.json").as_ptr(), &mut x), NfoldStatus::Ok);
        let mut shifted = ptr::null_mut();
        assert_eq!(nfold_object_apply_functor(x, c"shift".as_ptr(), 1, 0, &mut shifted), NfoldStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(nfold_object_apply_functor(shifted, c"shift".as_ptr(), -1, 0, &mut back), NfoldStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(nfold_object_to_json(x, &mut a), NfoldStatus::Ok);
        assert_eq!(nfold_object_to_json(back, &mut b), NfoldStatus::Ok);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));
        nfold_string_free(a);
        nfold_string_free(b);

        let mut f = ptr::null_mut();
        let other = fixture("identity_xx_q_x2.json");
        assert_eq!(nfold_morphism_from_json(ring, other.as_ptr(), &mut f), NfoldStatus::IncompatibleRing);
        assert_eq!(nfold_morphism_from_json(ptr::null(), other.as_ptr(), &mut f), NfoldStatus::Ok);
        let mut v = NfoldVerdict::Unknown;
        assert_eq!(nfold_morphism_is_null_homotopic(f, &mut v), NfoldStatus::Ok);
        assert_eq!(v, NfoldVerdict::No);
        let mut s = ptr::null_mut();
        assert_eq!(nfold_morphism_to_json(f, &mut s), NfoldStatus::Ok);
        assert!(CStr::from_ptr(s).to_str().unwrap().contains("components"));
        nfold_string_free(s);

        let mut bad = ptr::null_mut();
        assert_eq!(nfold_object_from_json(ring, fixture("invalid_q_x3.json").as_ptr(), &mut bad), NfoldStatus::InvalidInput);
        assert!(bad.is_null());
        assert!(!nfold_last_error().is_null());
        assert_eq!(nfold_object_apply_functor(x, c"face".as_ptr(), 0, 9, &mut bad), NfoldStatus::InvalidInput);

        nfold_morphism_free(f);
        nfold_object_free(back);
        nfold_object_free(shifted);
        nfold_object_free(x);
        nfold_ring_free(ring);
    }
}
