use std::time::Instant;
use exactbasis::selftest::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");
    let checks: Vec<(&str, fn() -> CriterionResult)> = vec![
        ("oracle", || criterion_oracle_agreement(Scale::Quick)),
        ("lp", || criterion_lp_correctness(Scale::Quick)),
        ("prox", || criterion_proximity_bound(Scale::Quick)),
        ("sens", || criterion_sensitivity_bound(Scale::Quick)),
        ("lower", criterion_lower_bounds),
        ("algebraic", || criterion_algebraic(Scale::Quick)),
        ("reduce", || criterion_reductions(Scale::Quick)),
        ("agg", || criterion_aggregation(Scale::Quick)),
        ("det", criterion_determinism),
        ("smoke", criterion_smoke_large),
    ];
    for (name, f) in checks {
        if which != "all" && which != name { continue; }
        let t = Instant::now();
        let r = f();
        println!("[{:>7.1}s] {}", t.elapsed().as_secs_f64(), r.line());
    }
}
