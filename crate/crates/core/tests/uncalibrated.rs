//! Runs in its own process, so no calibration has happened yet.

use rankgain_core::numfield::primes_above;
use rankgain_core::search::{calibration, fast_split_test};
use rankgain_core::{Curve, Error, QuadFieldDesc};

#[test]
fn cube_criteria_need_calibration() {
    let k = QuadFieldDesc::eisenstein();
    let e = Curve::new(k.int(0), k.int(1)).unwrap();
    let prime = primes_above(k, 13).unwrap()[0];
    assert!(calibration().is_none());
    for n in [3, 6] {
        assert!(matches!(
            fast_split_test(&e, n, &k.int(2), &prime),
            Err(Error::NotCalibrated)
        ));
    }
    assert!(fast_split_test(&e, 2, &k.int(2), &prime).is_ok());
    assert!(fast_split_test(&e, 4, &k.int(2), &prime).is_ok());
}
