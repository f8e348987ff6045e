//! The bundled fixtures are regenerated from the library catalogs with
//! `UPDATE_FIXTURES=1 cargo test -p qframe-cli --test fixtures`.

mod common;

use common::{corpus, fixtures_dir, render};

#[test]
fn fixtures_are_current() {
    let dir = fixtures_dir();
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    let mut stale = Vec::new();
    for (name, value) in corpus() {
        let p = dir.join(&name);
        let want = render(&value);
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&p, &want).unwrap();
        } else if std::fs::read_to_string(&p).ok().as_deref() != Some(want.as_str()) {
            stale.push(name);
        }
    }
    assert!(stale.is_empty(), "stale fixtures (rerun with UPDATE_FIXTURES=1): {stale:?}");
}
