mod common;

use std::process::{Command, Stdio};
use std::time::Duration;

use retrofit_core::advisor::PrototypeStore;

const BIN: &str = env!("CARGO_BIN_EXE_retrofit-advisor");

#[test]
fn unreadable_store_fails_fast() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.jsonl");
    let out = Command::new(BIN)
        .arg("--store")
        .arg(&missing)
        .arg("--port")
        .arg("0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read store"));

    let garbage = dir.path().join("garbage.jsonl");
    std::fs::write(&garbage, "{\"schema\":\"something-else\"}\n").unwrap();
    let out = Command::new(BIN)
        .env("RETROFIT_STORE", &garbage)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[tokio::test]
async fn serves_from_env_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prototypes.jsonl");
    PrototypeStore::new(common::synthetic(8, 3).prototypes)
        .unwrap()
        .save(&path)
        .unwrap();
    let port = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let mut child = Command::new(BIN)
        .env("RETROFIT_STORE", &path)
        .env("RETROFIT_BIND", "127.0.0.1")
        .env("RETROFIT_PORT", port.to_string())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let url = format!("http://127.0.0.1:{port}/health");
    let mut body = None;
    for _ in 0..100 {
        if let Ok(r) = reqwest::get(&url).await {
            body = Some(r.json::<serde_json::Value>().await.unwrap());
            break;
        }
        tokio::time::sleep(Duration::from_millis(50)).await;
    }
    child.kill().unwrap();
    child.wait().unwrap();
    assert_eq!(body.expect("server came up")["prototypes"], 8);
}
