/// Time grid with the per-time Gaussian law of the state and its entropies.
///
/// Column vectors all share the grid length. `conditional` is present only
/// when the model supplies a reference density to compare against: the
/// stationary density when one exists, or the explicitly chosen unit
/// Gaussian in the zero-noise marginal regime.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub gibbs: Vec<f64>,
    pub conditional: Option<Vec<f64>>,
}

impl EntropyCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Number of strict local extrema in `values`: sign changes between
/// consecutive finite differences whose magnitudes both exceed `band`.
///
/// Differences within `band` of zero are skipped rather than counted, so
/// quadrature-level wiggle on a flat stretch does not register as an
/// extremum. Use `band = 1e-9` for entropy curves.
pub fn count_strict_extrema(values: &[f64], band: f64) -> usize {
    assert!(band >= 0.0, "band must be nonnegative");
    let mut count = 0;
    let mut last_sign = 0i8;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= band {
            continue;
        }
        let sign = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_sequences_have_no_extrema() {
        assert_eq!(count_strict_extrema(&[1.0, 2.0, 3.0, 4.0], 1e-9), 0);
        assert_eq!(count_strict_extrema(&[4.0, 1.0, 0.5, 0.2], 1e-9), 0);
        assert_eq!(count_strict_extrema(&[], 1e-9), 0);
        assert_eq!(count_strict_extrema(&[7.0], 1e-9), 0);
    }

    #[test]
    fn peaks_and_troughs_are_counted() {
        assert_eq!(count_strict_extrema(&[0.0, 1.0, 0.0], 1e-9), 1);
        assert_eq!(count_strict_extrema(&[0.0, 1.0, 0.0, 1.0], 1e-9), 2);
    }

    #[test]
    fn wiggle_below_the_band_is_ignored() {
        let values = [0.0, 1.0, 1.0 - 1e-12, 2.0];
        assert_eq!(count_strict_extrema(&values, 1e-9), 0);
        // The same dip counts once the band no longer hides it.
        assert_eq!(count_strict_extrema(&values, 1e-15), 2);
    }
}
