use migrate_sched_web::{adversary_json, profile_json, simulate_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn profile_for_three_machines() {
    let v = parse(profile_json(3, 11).unwrap());
    assert_eq!(v["alpha"], "15/11");
    assert_eq!(v["mu"], 9);
    assert_eq!(v["beta"].as_array().unwrap().len(), 3);
    let curve = v["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 10);
    assert!((curve[0].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    assert!(profile_json(1, 5).is_err());
}

#[test]
fn simulate_pair_of_unit_jobs() {
    let v = parse(simulate_json("opt", 2, "1, 1").unwrap());
    assert_eq!(v["makespan"], "1/1");
    assert_eq!(v["opt"], "1/1");
    assert_eq!(v["machines"].as_array().unwrap().len(), 2);
    assert_eq!(v["events"].as_array().unwrap().len(), 4);
    assert!(v["violations"].as_array().unwrap().is_empty());

    let list = parse(simulate_json("list", 3, "3/2 2.5\n4").unwrap());
    assert_eq!(list["migrations"], 0);
    assert!(simulate_json("opt", 2, "1, x").is_err());
    assert!(simulate_json("greedy", 2, "1").is_err());
}

#[test]
fn adversary_rounds_n_prime() {
    let v = parse(adversary_json("list", 2, 99).unwrap());
    assert_eq!(v["n_prime"], 100);
    assert_eq!(v["ratio_lb"], "3/2");
    assert!(adversary_json("lpt", 2, 10).is_err());
}
