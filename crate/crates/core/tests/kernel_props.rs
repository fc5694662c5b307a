mod support;

use support::kernel::{self, CASES_PER_PROPERTY};

fn run(p: kernel::Property, seed: u8) {
    let mut r = kernel::runner(CASES_PER_PROPERTY, seed);
    p(&mut r).unwrap();
}

#[test]
fn rational_field() {
    run(kernel::rational_field, 1);
}

#[test]
fn exp_log_round_trip() {
    run(kernel::exp_log_round_trip, 2);
}

#[test]
fn mixed_product() {
    run(kernel::mixed_product, 3);
}

#[test]
fn eps_truncation() {
    run(kernel::eps_truncation, 4);
}

#[test]
fn coassociativity() {
    run(kernel::coassociativity, 5);
}
