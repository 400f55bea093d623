use bibcorpus_wasm::ops;
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn ranks_pasted_documents() {
    let text = "Workflow scheduling in clouds.\n\nDeadline-aware workflow scheduling.\n\nCloud storage tiering.";
    let v = parse(ops::rank_keywords(text, 3, 1.0));
    assert_eq!(v["documents"], 3);
    let entries = v["ranking"]["entries"].as_array().unwrap();
    assert_eq!(entries[0]["keyword"], "cloud");
    assert_eq!(entries.len(), 3);
}

#[test]
fn empty_input_is_an_error() {
    assert!(ops::rank_keywords("  \n\n ", 5, 0.9).is_err());
    assert!(ops::emerging_keywords("", 5, 0.9, None).is_err());
}

#[test]
fn emerging_keywords_from_year_lines() {
    let text = "2010 grid workflow\n2011 grid workflow\n2012 cloud workflow\n2013 cloud deadline";
    let v = parse(ops::emerging_keywords(text, 2, 1.0, Some(2012)));
    assert_eq!(v["split_year"], 2012);
    assert_eq!(v["new_keywords"], serde_json::json!(["cloud", "deadline"]));
    assert_eq!(v["per_year"]["2010"], serde_json::json!(["grid", "workflow"]));
    assert!(ops::emerging_keywords("twenty ten grid", 2, 1.0, None).is_err());
}

#[test]
fn community_from_author_lines() {
    let text = "Ann, Bo\nAnn; Bo; Cy\nCy\nDee";
    let v = parse(ops::coauthor_community(text));
    assert_eq!(v["summary"]["articles"], 4);
    assert_eq!(v["summary"]["authors"], 4);
    assert_eq!(v["summary"]["coauthorship_relations"], 4);
    assert_eq!(v["summary"]["unique_relations"], 3);
    assert_eq!(v["cliques"], serde_json::json!([["Ann", "Bo", "Cy"]]));
    assert_eq!(v["edges"][0], serde_json::json!(["Ann", "Bo", 2]));
}
