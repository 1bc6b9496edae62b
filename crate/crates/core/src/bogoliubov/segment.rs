use super::geometry::RindlerGeometry;
use super::oracle::OracleCache;
use super::pair::{compose, BogoliubovPair};
use crate::error::Result;

/// One finite interval of constant acceleration, entered and left suddenly:
/// `inverse(B) o R(tau) o B` with `B` the switch-on coefficients and `R` the
/// free Rindler evolution over proper time `tau_s` at the centre.
pub fn one_segment_transform(tau_s: f64, h: f64, cache: &OracleCache) -> Result<BogoliubovPair> {
    let rindler = RindlerGeometry::new(h)?;
    let switch_on = cache.get(h)?;
    let evolve = BogoliubovPair::phase_evolution_rindler(tau_s, cache.geometry(), &rindler);
    compose(&switch_on.inverse(), &compose(&evolve, &switch_on)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::geometry::CavityGeometry;

    #[test]
    fn zero_duration_is_identity() {
        let cache = OracleCache::new(CavityGeometry::circuit_qed());
        let t = one_segment_transform(0.0, 0.1, &cache).unwrap();
        let b = cache.get(0.1).unwrap();
        assert!(t.max_distance_trusted(&BogoliubovPair::identity(10)) <= 2.0 * b.truncation_defect);
    }

    #[test]
    fn tiny_acceleration_is_minkowski() {
        let g = CavityGeometry::circuit_qed();
        let cache = OracleCache::new(g);
        for tau in [0.13e-10, 0.77e-10, 3.1e-10] {
            let t = one_segment_transform(tau, 1e-6, &cache).unwrap();
            let m = BogoliubovPair::phase_evolution_minkowski(tau, &g);
            assert!(t.max_distance(&m) < 1e-4, "{}", t.max_distance(&m));
        }
    }
}
