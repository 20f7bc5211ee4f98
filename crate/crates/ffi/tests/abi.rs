use std::ffi::{CStr, CString};
use std::ptr;

use ddos_sim_ffi::*;

fn last_error() -> String {
    let p = ddos_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn preset(name: &str) -> *mut DdosConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { ddos_config_preset(c(name).as_ptr(), &mut cfg) }, DdosStatus::Ok);
    cfg
}

#[test]
fn run_matches_the_library() {
    let cfg = preset("sim2");
    unsafe {
        assert_eq!(ddos_config_set(cfg, c("seed").as_ptr(), c("9").as_ptr()), DdosStatus::Ok);
        let mut run = ptr::null_mut();
        assert_eq!(ddos_run(cfg, &mut run), DdosStatus::Ok);
        let mut m = DdosMetrics::default();
        assert_eq!(ddos_run_metrics(run, &mut m), DdosStatus::Ok);

        let direct = ddos_sim::harness::run_simulation(&ddos_sim::ScenarioConfig {
            seed: 9,
            ..ddos_sim::ScenarioConfig::simulation_two()
        })
        .unwrap();
        assert_eq!(m.correctly_identified_attackers, direct.metrics.correctly_identified_attackers);
        assert_eq!(m.has_detection_time, direct.metrics.detection_time_after_tstar.is_some());
        assert_eq!(m.detection_time_after_tstar, direct.metrics.detection_time_after_tstar.unwrap_or(0));

        let mut log = ptr::null_mut();
        assert_eq!(ddos_run_log(run, &mut log), DdosStatus::Ok);
        assert_eq!(CStr::from_ptr(log).to_str().unwrap(), direct.log.to_text());
        ddos_string_free(log);
        ddos_run_free(run);
        ddos_config_free(cfg);
    }
}

#[test]
fn config_errors_are_reported() {
    let cfg = preset("sim2");
    unsafe {
        assert_eq!(ddos_config_set(cfg, c("nope").as_ptr(), c("1").as_ptr()), DdosStatus::Config);
        assert!(last_error().contains("nope"));
        assert_eq!(ddos_config_set(cfg, c("mu").as_ptr(), c("x").as_ptr()), DdosStatus::Config);
        assert_eq!(ddos_config_set(cfg, c("mu").as_ptr(), c("0").as_ptr()), DdosStatus::Config);

        // A rejected value leaves the config untouched.
        let mut text = ptr::null_mut();
        assert_eq!(ddos_config_to_string(cfg, &mut text), DdosStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("mu = 8"));
        ddos_string_free(text);

        let mut other = ptr::null_mut();
        assert_eq!(ddos_config_parse(c("w_s = ten").as_ptr(), &mut other), DdosStatus::Config);
        assert!(other.is_null());
        assert_eq!(ddos_config_preset(c("sim9").as_ptr(), &mut other), DdosStatus::NotFound);
        ddos_config_free(cfg);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(ddos_config_preset(ptr::null(), &mut ptr::null_mut()), DdosStatus::NullPointer);
        assert_eq!(ddos_run(ptr::null(), &mut ptr::null_mut()), DdosStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(ddos_sample_mean(ptr::null(), 3, &mut x), DdosStatus::NullPointer);
        ddos_config_free(ptr::null_mut());
        ddos_run_free(ptr::null_mut());
        ddos_batch_free(ptr::null_mut());
        ddos_string_free(ptr::null_mut());
    }
    // Free functions leave the error slot alone.
    assert!(last_error().contains("null sample"));
}

#[test]
fn batch_summary() {
    let cfg = preset("sim2");
    unsafe {
        let mut batch = ptr::null_mut();
        assert_eq!(ddos_batch(cfg, 1, 0, &mut batch), DdosStatus::Config);
        assert_eq!(ddos_batch(cfg, 4, 10, &mut batch), DdosStatus::Ok);
        assert_eq!(ddos_batch_len(batch), 4);
        let mut m = DdosMetrics::default();
        assert_eq!(ddos_batch_metrics(batch, 3, &mut m), DdosStatus::Ok);
        assert_eq!(ddos_batch_metrics(batch, 4, &mut m), DdosStatus::NotFound);
        let mut s = DdosMetricSummary::default();
        assert_eq!(ddos_batch_summary(batch, c("dropped_packets").as_ptr(), &mut s), DdosStatus::Ok);
        assert_eq!(s.count, 4);
        assert!(s.min <= s.mean && s.mean <= s.max && s.ci95_halfwidth >= 0.0);
        assert_eq!(ddos_batch_summary(batch, c("nothing").as_ptr(), &mut s), DdosStatus::NotFound);
        ddos_batch_free(batch);
        ddos_config_free(cfg);
    }
}

#[test]
fn statistics() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let b = [2.0, 4.0, 6.0, 8.0, 10.0];
    unsafe {
        let mut v = 0.0;
        assert_eq!(ddos_sample_mean(a.as_ptr(), a.len(), &mut v), DdosStatus::Ok);
        assert_eq!(v, 3.0);
        assert_eq!(ddos_sample_std(a.as_ptr(), a.len(), &mut v), DdosStatus::Ok);
        assert!((v - 2.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(ddos_normal_quantile(0.975, &mut v), DdosStatus::Ok);
        assert!((v - 1.959964).abs() < 1e-6);
        assert_eq!(ddos_normal_quantile(1.5, &mut v), DdosStatus::Stats);

        let (mut t, mut reject) = (0.0, false);
        assert_eq!(ddos_pooled_t(a.as_ptr(), 5, b.as_ptr(), 5, 0.05, &mut t, &mut reject), DdosStatus::Ok);
        assert!(t < 0.0);
        assert_eq!(ddos_levene(a.as_ptr(), 5, b.as_ptr(), 5, 0.05, &mut t, &mut reject), DdosStatus::Ok);
        assert!(t > 0.0);
        assert_eq!(ddos_sample_mean(ptr::null(), 0, &mut v), DdosStatus::Stats);
        assert!(last_error().contains("empty"));
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/ddos_sim.h")).unwrap();
    for name in ["ddos_run", "ddos_batch_summary", "ddos_levene", "DDOS_STATUS_CONFIG", "typedef struct DdosConfig"] {
        assert!(header.contains(name), "{name} missing from header");
    }

    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(lib_dir.join("libddos_sim_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("mean=2.50"));
}
