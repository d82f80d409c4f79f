//! Exercises the C ABI surface through the exported functions.

use std::ffi::{CStr, CString};
use std::ptr;

use mla_ffi::*;

fn last_error() -> String {
    let message = mla_last_error();
    assert!(!message.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(message) }
        .to_string_lossy()
        .to_string()
}

fn take_string(raw: *mut std::ffi::c_char) -> String {
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_string_lossy().to_string();
    unsafe { mla_string_free(raw) };
    text
}

#[test]
fn full_pipeline_through_the_c_abi() {
    unsafe {
        let mut graph = ptr::null_mut();
        assert_eq!(mla_graph_k4(&mut graph), MlaStatus::Ok);
        assert_eq!(mla_graph_vertex_count(graph), 4);

        let mut instance = ptr::null_mut();
        let mut blockmap = ptr::null_mut();
        assert_eq!(
            mla_reduce(graph, &mut instance, &mut blockmap),
            MlaStatus::Ok
        );
        assert_eq!(mla_instance_columns(instance), 234);
        let mut max_occurrence = 0usize;
        assert_eq!(
            mla_instance_max_occurrence(instance, &mut max_occurrence),
            MlaStatus::Ok
        );
        assert_eq!(max_occurrence, 5);

        let mut cover = ptr::null_mut();
        assert_eq!(mla_vc_exact(graph, &mut cover), MlaStatus::Ok);
        assert_eq!(mla_cover_size(cover), 3);

        let mut labeling = ptr::null_mut();
        assert_eq!(
            mla_cover_to_labeling(graph, cover, instance, blockmap, &mut labeling),
            MlaStatus::Ok
        );
        let mut cost = 0u64;
        assert_eq!(mla_labeling_cost(labeling, &mut cost), MlaStatus::Ok);
        assert_eq!(cost, 43);

        let mut cover_valid = false;
        let mut feasible = false;
        assert_eq!(
            mla_labeling_verify(instance, labeling, &mut cover_valid, &mut feasible),
            MlaStatus::Ok
        );
        assert!(cover_valid && feasible);

        let mut recovered = ptr::null_mut();
        assert_eq!(
            mla_labeling_to_cover(graph, instance, blockmap, labeling, &mut recovered),
            MlaStatus::Ok
        );
        assert_eq!(mla_cover_size(recovered), 3);
        let cover_json = {
            let mut raw = ptr::null_mut();
            assert_eq!(mla_cover_to_json(recovered, &mut raw), MlaStatus::Ok);
            take_string(raw)
        };
        let parsed: serde_json::Value = serde_json::from_str(&cover_json).unwrap();
        assert_eq!(parsed["vertices"], serde_json::json!([1, 2, 3]));

        let mut all_passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(
            mla_check_lemmas(graph, &mut all_passed, &mut report),
            MlaStatus::Ok
        );
        assert!(all_passed);
        let report = take_string(report);
        assert!(report.contains("optimum-identity"));

        mla_cover_free(recovered);
        mla_labeling_free(labeling);
        mla_cover_free(cover);
        mla_blockmap_free(blockmap);
        mla_instance_free(instance);
        mla_graph_free(graph);
    }
}

#[test]
fn json_round_trips_cross_the_boundary() {
    unsafe {
        let mut graph = ptr::null_mut();
        assert_eq!(mla_graph_random_cubic(8, 11, &mut graph), MlaStatus::Ok);
        let json = {
            let mut raw = ptr::null_mut();
            assert_eq!(mla_graph_to_json(graph, &mut raw), MlaStatus::Ok);
            take_string(raw)
        };
        let mut reparsed = ptr::null_mut();
        let c_json = CString::new(json).unwrap();
        assert_eq!(
            mla_graph_from_json(c_json.as_ptr(), &mut reparsed),
            MlaStatus::Ok
        );
        assert_eq!(mla_graph_vertex_count(reparsed), 8);
        mla_graph_free(reparsed);
        mla_graph_free(graph);
    }
}

#[test]
fn solvers_agree_on_a_small_instance() {
    let document = serde_json::json!({
        "columns": 7,
        "rowX": ["p:a", "p:b", "p:m", "p:m", "p:m", "p:a", "p:b"],
        "rowY": ["-", "-", "p:m", "p:m", "p:m", "-", "-"],
    })
    .to_string();
    let c_document = CString::new(document).unwrap();
    unsafe {
        let mut instance = ptr::null_mut();
        assert_eq!(
            mla_instance_from_json(c_document.as_ptr(), &mut instance),
            MlaStatus::Ok
        );
        let mut exact_labeling = ptr::null_mut();
        let mut exact_cost = 0u64;
        let mut proven = false;
        assert_eq!(
            mla_solve_exact(
                instance,
                1_000_000,
                &mut exact_labeling,
                &mut exact_cost,
                &mut proven
            ),
            MlaStatus::Ok
        );
        assert!(proven);
        let mut oracle_labeling = ptr::null_mut();
        let mut oracle_cost = 0u64;
        let mut oracle_proven = false;
        assert_eq!(
            mla_solve_oracle(
                instance,
                &mut oracle_labeling,
                &mut oracle_cost,
                &mut oracle_proven
            ),
            MlaStatus::Ok
        );
        assert_eq!(exact_cost, oracle_cost);
        assert_eq!(exact_cost, 3);
        mla_labeling_free(exact_labeling);
        mla_labeling_free(oracle_labeling);
        mla_instance_free(instance);
    }
}

#[test]
fn error_paths_set_codes_and_messages() {
    unsafe {
        // Null arguments.
        assert_eq!(mla_graph_k4(ptr::null_mut()), MlaStatus::NullArgument);
        assert!(last_error().contains("null"));
        assert_eq!(mla_graph_vertex_count(ptr::null()), 0);

        // Odd vertex count.
        let mut graph = ptr::null_mut();
        assert_eq!(
            mla_graph_random_cubic(7, 0, &mut graph),
            MlaStatus::InvalidInput
        );
        assert!(last_error().contains("even"));

        // Malformed JSON.
        let bad = CString::new("{\"n\": 4}").unwrap();
        assert_eq!(
            mla_graph_from_json(bad.as_ptr(), &mut graph),
            MlaStatus::ParseError
        );

        // Infeasible labeling flagged by verify.
        let instance_doc = serde_json::json!({
            "columns": 7,
            "rowX": ["p:a", "p:b", "p:m", "p:m", "p:m", "p:a", "p:b"],
            "rowY": ["-", "-", "p:m", "p:m", "p:m", "-", "-"],
        })
        .to_string();
        let labeling_doc = serde_json::json!({
            "events": [
                {"genome": "X", "kind": "dup", "target": [5, 7], "source": [0, 2]},
                {"genome": "X", "kind": "dup", "target": [0, 2], "source": [5, 7]},
            ]
        })
        .to_string();
        let instance_doc = CString::new(instance_doc).unwrap();
        let labeling_doc = CString::new(labeling_doc).unwrap();
        let mut instance = ptr::null_mut();
        let mut labeling = ptr::null_mut();
        assert_eq!(
            mla_instance_from_json(instance_doc.as_ptr(), &mut instance),
            MlaStatus::Ok
        );
        assert_eq!(
            mla_labeling_from_json(labeling_doc.as_ptr(), &mut labeling),
            MlaStatus::Ok
        );
        let mut cover_valid = false;
        let mut feasible = true;
        assert_eq!(
            mla_labeling_verify(instance, labeling, &mut cover_valid, &mut feasible),
            MlaStatus::CheckFailed
        );
        assert!(cover_valid);
        assert!(!feasible);
        assert!(last_error().contains("infeasible"));

        // A success clears the error slot.
        let mut json = ptr::null_mut();
        assert_eq!(mla_labeling_to_json(labeling, &mut json), MlaStatus::Ok);
        take_string(json);
        assert!(mla_last_error().is_null());

        mla_labeling_free(labeling);
        mla_instance_free(instance);
        mla_graph_free(graph);
    }
}

#[test]
fn oversized_instance_hits_the_cap() {
    let tokens: Vec<String> = (0..49).map(|i| format!("p:t{i}")).collect();
    let gaps: Vec<&str> = vec!["-"; 49];
    let document = serde_json::json!({
        "columns": 49,
        "rowX": tokens,
        "rowY": gaps,
    })
    .to_string();
    let document = CString::new(document).unwrap();
    unsafe {
        let mut instance = ptr::null_mut();
        assert_eq!(
            mla_instance_from_json(document.as_ptr(), &mut instance),
            MlaStatus::Ok
        );
        let mut labeling = ptr::null_mut();
        let mut cost = 0u64;
        let mut proven = false;
        assert_eq!(
            mla_solve_exact(instance, 1_000, &mut labeling, &mut cost, &mut proven),
            MlaStatus::CapExceeded
        );
        mla_instance_free(instance);
    }
}
