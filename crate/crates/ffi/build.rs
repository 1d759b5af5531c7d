use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR"));
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("cbindgen.toml is valid");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate_with_config(&crate_dir, config) {
        // write_to_file leaves the header untouched when nothing changed
        Ok(bindings) => {
            bindings.write_to_file(crate_dir.join("include/anxiety.h"));
        }
        Err(e) => panic!("cannot generate C header: {e}"),
    }
}
