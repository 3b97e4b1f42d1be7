use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR is not set"));

    let mut config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("SHUTTLE_SIM_H".to_string()),
        cpp_compat: true,
        documentation: true,
        ..Default::default()
    };
    config.enumeration.rename_variants = cbindgen::RenameRule::QualifiedScreamingSnakeCase;
    config.header = Some("/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */".to_string());

    let bindings = cbindgen::generate_with_config(&crate_dir, config).expect("unable to generate C bindings");
    std::fs::create_dir_all(crate_dir.join("include")).expect("cannot create include/");
    bindings.write_to_file(crate_dir.join("include").join("shuttle_sim.h"));

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
