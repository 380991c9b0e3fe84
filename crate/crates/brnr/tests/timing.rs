use std::time::Instant;

#[test]
fn time_selftest_rows() {
    let t0 = Instant::now();
    let rows = brnr::selftest::run();
    println!("total: {:?} for {} rows", t0.elapsed(), rows.len());
}
