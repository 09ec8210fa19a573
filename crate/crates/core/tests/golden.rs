use symgraph::classify::{classify_report, ClassifyConfig};

fn rendered(d: u32) -> String {
    let cfg = ClassifyConfig::default();
    let report = classify_report(d, &cfg).unwrap();
    report.verify(&cfg).unwrap();
    serde_json::to_string(&report.to_json()).unwrap() + "\n"
}

#[test]
fn degree_four_report_is_stable() {
    assert_eq!(rendered(4), include_str!("golden/classify_d4.json"));
}

#[test]
fn degree_six_report_is_stable() {
    assert_eq!(rendered(6), include_str!("golden/classify_d6.json"));
}
