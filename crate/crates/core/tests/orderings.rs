use kwgmin::order_stats::{log_sf_ratio, min_log_hazard};
use kwgmin::ordering::scan::DEFAULT_SLOPE_TOL;
use kwgmin::ordering::{check, monotonicity_scan, CheckOptions, Grid, Outcome, Relation};
use kwgmin::scenario::RunOptions;
use kwgmin::theorems::{generate_config, TheoremId};
use kwgmin::{make_uniform01, HeterogeneousSeries};

#[test]
fn order_chain_on_outlier_configurations() {
    let opts = CheckOptions::default();
    let mut exceptions = Vec::new();
    for i in 0..100 {
        let id = if i % 2 == 0 {
            TheoremId::T3_4
        } else {
            TheoremId::T3_5
        };
        let cfg = generate_config(id, 2024, i / 2, 2001).unwrap();
        let (u, v) = cfg.series().unwrap();
        let grid = cfg.build_grid(2001).unwrap();
        let lr = check(Relation::LikelihoodRatio, &u, &v, &grid, &opts).unwrap();
        assert!(
            matches!(lr.result, Outcome::HoldsLeq | Outcome::HoldsGeq),
            "{}",
            cfg.scenario_text()
        );
        let hr = check(Relation::HazardRate, &u, &v, &grid, &opts).unwrap();
        let st = check(Relation::UsualStochastic, &u, &v, &grid, &opts).unwrap();
        if !hr.supports(lr.result) || !st.supports(lr.result) {
            exceptions.push(cfg.scenario_text());
        }
    }
    assert!(exceptions.is_empty(), "{}", exceptions.join("\n"));
}

fn hr_criteria_agree(u: &HeterogeneousSeries, v: &HeterogeneousSeries, grid: &Grid) -> bool {
    let scan = monotonicity_scan(|x| Ok(log_sf_ratio(u, v, x)), grid, DEFAULT_SLOPE_TOL).unwrap();
    let pointwise = grid
        .points()
        .iter()
        .all(|&x| min_log_hazard(u, x) >= min_log_hazard(v, x) - 1e-10);
    scan.nondecreasing() == pointwise
}

#[test]
fn hazard_criteria_agree_on_suite_configurations() {
    for id in [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T4_3,
        TheoremId::T4_4,
    ] {
        for i in 0..20 {
            let cfg = generate_config(id, 99, i, 2001).unwrap();
            let (u, v) = cfg.series().unwrap();
            let grid = cfg.build_grid(2001).unwrap();
            assert!(hr_criteria_agree(&u, &v, &grid), "{}", cfg.scenario_text());
            assert!(hr_criteria_agree(&v, &u, &grid), "{}", cfg.scenario_text());
        }
    }
}

#[test]
fn hazard_criteria_agree_on_counterexamples() {
    let p = make_uniform01();
    let u = HeterogeneousSeries::new(p.clone(), vec![6.2, 4.1, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
    let v = HeterogeneousSeries::new(p.clone(), vec![5.2, 5.1, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
    let grid = Grid::default_u(&p).unwrap();
    assert!(hr_criteria_agree(&u, &v, &grid));
    assert!(hr_criteria_agree(&v, &u, &grid));
}

#[test]
fn theorem_three_five_covers_both_branches() {
    let r =
        kwgmin::theorems::verify_theorem(TheoremId::T3_5, 20, 8, &RunOptions::default()).unwrap();
    assert!(r.all_passed(), "{}", r.text());
    let geq = r
        .outcomes
        .iter()
        .filter(|o| o.config.expected == Outcome::HoldsGeq)
        .count();
    assert_eq!(geq, 10);
}
