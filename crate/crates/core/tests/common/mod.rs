#![allow(dead_code)]

pub mod gen;

use std::fs;
use std::path::{Path, PathBuf};

use coconstruct::Document;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn read_fixture(name: &str) -> String {
    let path = fixture_path(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path.display(), e))
}

pub fn load(name: &str) -> Document {
    read_fixture(name)
        .parse()
        .unwrap_or_else(|e| panic!("{}: {}", name, e))
}

/// `.conllu` files directly under `dir`, sorted by name.
pub fn conllu_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("{}: {}", dir.display(), e))
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "conllu"))
        .collect();
    files.sort();
    files
}

/// Compare `actual` with `golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = fixtures_dir().join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().expect("golden dir")).map_err(|e| e.to_string())?;
        fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {}", path.display(), e))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs from output:\n--- expected\n{}--- actual\n{}",
            name, expected, actual
        ))
    }
}

/// Single root, every head in range, no cycles. Written without the
/// crate's own tree checker.
pub fn is_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    if heads.iter().filter(|&&h| h == 0).count() != 1 || heads.iter().any(|&h| h > n) {
        return false;
    }
    (1..=n).all(|start| {
        let mut node = start;
        for _ in 0..=n {
            if node == 0 {
                return true;
            }
            node = heads[node - 1];
        }
        false
    })
}
