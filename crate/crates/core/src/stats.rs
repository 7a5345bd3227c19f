//! Prime-sum statistics.  The quantity tracked everywhere is a partial sum
//! over primes up to geometric checkpoints:
//!
//! * `Σ_{p≤x} |a_p|²/p` — grows like `n_F · log log x`, where the positive
//!   integer `n_F` counts primitive factors with multiplicity (1 exactly
//!   for primitive candidates),
//! * `Σ_{p≤x} a_p(F) conj(a_p(G))/p` — bounded when `F` and `G` are
//!   distinct primitives,
//! * `Σ_{p≤x} a_p/p^{1+iα}` — diverges at `α = 0` exactly when the
//!   candidate carries the pole.
//!
//! Slopes against `log log x` are extracted by least squares over a
//! geometric checkpoint ladder in `[√X, X]`.

use crate::lfunc::SelbergFunction;
use crate::specfun::Compensated;
use crate::{Complex, Error, Result};

/// Plain sieve of Eratosthenes with a sorted prime list.
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        let mut i = 2usize;
        while i <= n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        PrimeTable { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Primes `p <= x`.
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }
}

/// Which prime statistic a series tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatKind {
    /// `Σ |a_p|²/p`
    SelbergVariance,
    /// `Σ a_p(F) conj(a_p(G))/p`
    Orthogonality,
    /// `Σ a_p/p^{1+iα}`
    PoleDivergence,
}

/// Cumulative prime sums at each checkpoint.
#[derive(Clone, Debug)]
pub struct StatSeries {
    pub kind: StatKind,
    pub checkpoints: Vec<u64>,
    pub partial_sums: Vec<Complex>,
}

impl StatSeries {
    /// Rows `(x, Re sum, Im sum, log log x)` — the natural export format.
    pub fn rows(&self) -> Vec<(u64, f64, f64, f64)> {
        self.checkpoints
            .iter()
            .zip(&self.partial_sums)
            .map(|(&x, s)| (x, s.re, s.im, (x as f64).ln().ln()))
            .collect()
    }
}

fn validate_checkpoints(checkpoints: &[u64], n_max: usize) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidInput {
            what: "checkpoints",
            detail: "need at least one checkpoint".into(),
        });
    }
    if checkpoints[0] < 3 {
        return Err(Error::InvalidInput {
            what: "checkpoints",
            detail: "checkpoints below 3 make log log x meaningless".into(),
        });
    }
    if !checkpoints.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput {
            what: "checkpoints",
            detail: "checkpoints must be strictly increasing".into(),
        });
    }
    let last = *checkpoints.last().unwrap();
    if last as usize > n_max {
        return Err(Error::InsufficientData {
            what: "checkpoints",
            detail: format!("checkpoint {last} beyond the realized range {n_max}"),
        });
    }
    Ok(())
}

/// Geometric ladder of `count ≥ 4` checkpoints spanning `[√x, x]`.
pub fn geometric_checkpoints(x: u64, count: usize) -> Result<Vec<u64>> {
    if count < 4 {
        return Err(Error::ParameterDegeneracy {
            detail: format!("{count} checkpoints cannot support a slope fit (need ≥ 4)"),
        });
    }
    if x < 1000 {
        return Err(Error::InvalidInput {
            what: "geometric_checkpoints",
            detail: format!("X = {x} below the minimum 1000"),
        });
    }
    let lo = (x as f64).sqrt();
    let hi = x as f64;
    let mut points = Vec::with_capacity(count);
    for j in 0..count {
        let t = j as f64 / (count - 1) as f64;
        let v = (lo.ln() * (1.0 - t) + hi.ln() * t).exp().round() as u64;
        points.push(v);
    }
    points.dedup();
    if points.len() < 4 {
        return Err(Error::ParameterDegeneracy {
            detail: "checkpoint ladder collapsed after rounding".into(),
        });
    }
    Ok(points)
}

/// Shared walk: accumulates `Σ_p term(p, a_p)` over primes at checkpoints.
fn prime_cumulative<T: Fn(u64, Complex) -> Complex>(
    f: &SelbergFunction,
    checkpoints: &[u64],
    kind: StatKind,
    term: T,
) -> Result<StatSeries> {
    validate_checkpoints(checkpoints, f.n_max())?;
    let table = PrimeTable::new(*checkpoints.last().unwrap());
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut sums = Vec::with_capacity(checkpoints.len());
    let mut idx = 0usize;
    for &x in checkpoints {
        while idx < table.primes().len() && table.primes()[idx] <= x {
            let p = table.primes()[idx];
            let t = term(p, f.coeff(p)?);
            re.add(t.re);
            im.add(t.im);
            idx += 1;
        }
        sums.push(Complex::new(re.value(), im.value()));
    }
    Ok(StatSeries { kind, checkpoints: checkpoints.to_vec(), partial_sums: sums })
}

/// `Σ_{p≤x} |a_p|²/p` at each checkpoint.
pub fn selberg_sum(f: &SelbergFunction, checkpoints: &[u64]) -> Result<StatSeries> {
    prime_cumulative(f, checkpoints, StatKind::SelbergVariance, |p, a| {
        Complex::new(a.norm_sqr() / p as f64, 0.0)
    })
}

/// `Σ_{p≤x} a_p(F) conj(a_p(G))/p` at each checkpoint.
pub fn orthogonality_sum(
    f: &SelbergFunction,
    g: &SelbergFunction,
    checkpoints: &[u64],
) -> Result<StatSeries> {
    validate_checkpoints(checkpoints, g.n_max())?;
    prime_cumulative(f, checkpoints, StatKind::Orthogonality, |p, a| {
        a * g.coeff(p).map(|b| b.conj()).unwrap_or(Complex::new(0.0, 0.0)) / p as f64
    })
}

/// `Σ_{p≤x} a_p / p^{1+iα}` at each checkpoint.
pub fn pole_divergence_sum(
    f: &SelbergFunction,
    alpha: f64,
    checkpoints: &[u64],
) -> Result<StatSeries> {
    prime_cumulative(f, checkpoints, StatKind::PoleDivergence, |p, a| {
        let lp = (p as f64).ln();
        let (s, c) = (-alpha * lp).sin_cos();
        a * Complex::new(c, s) / p as f64
    })
}

/// Least-squares line through `(log log x_j, Re sum_j)`.
fn slope_fit(series: &StatSeries) -> (f64, f64, f64) {
    let n = series.checkpoints.len() as f64;
    let mut st = 0.0;
    let mut sy = 0.0;
    for (&x, s) in series.checkpoints.iter().zip(&series.partial_sums) {
        st += (x as f64).ln().ln();
        sy += s.re;
    }
    let (tb, yb) = (st / n, sy / n);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, s) in series.checkpoints.iter().zip(&series.partial_sums) {
        let dt = (x as f64).ln().ln() - tb;
        num += dt * (s.re - yb);
        den += dt * dt;
    }
    let slope = num / den;
    let intercept = yb - slope * tb;
    let mut max_resid = 0.0f64;
    for (&x, s) in series.checkpoints.iter().zip(&series.partial_sums) {
        let t = (x as f64).ln().ln();
        max_resid = max_resid.max((s.re - slope * t - intercept).abs());
    }
    (slope, intercept, max_resid)
}

/// Slope estimate for the primitive-factor count.
#[derive(Clone, Debug)]
pub struct NfEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of the data from the fitted line.
    pub fit_residual: f64,
    pub series: StatSeries,
}

/// Fits `Σ_{p≤x} |a_p|²/p ≈ n_F log log x + const` over a geometric ladder
/// of `checkpoint_count ≥ 4` points in `[√X, X]`, `X ≥ 1000`.
pub fn estimate_nf(f: &SelbergFunction, x: u64, checkpoint_count: usize) -> Result<NfEstimate> {
    let checkpoints = geometric_checkpoints(x, checkpoint_count)?;
    let series = selberg_sum(f, &checkpoints)?;
    let (slope, intercept, fit_residual) = slope_fit(&series);
    Ok(NfEstimate { slope, intercept, fit_residual, series })
}

/// Additivity probe: for the formal combination `Σ e_i F_i` the variance
/// slope should approach `Σ e_i²` when the `F_i` are distinct primitives.
#[derive(Clone, Debug)]
pub struct AdditivityReport {
    pub predicted: f64,
    pub measured: f64,
    pub gap: f64,
    pub series: StatSeries,
}

/// Measures the slope of `Σ_p |Σ_i e_i a_p(F_i)|²/p` against the predicted
/// `Σ e_i²`.
pub fn nf_additivity_check(
    factors: &[(&SelbergFunction, f64)],
    x: u64,
    checkpoint_count: usize,
) -> Result<AdditivityReport> {
    if factors.is_empty() {
        return Err(Error::InvalidInput {
            what: "nf_additivity_check",
            detail: "need at least one factor".into(),
        });
    }
    let checkpoints = geometric_checkpoints(x, checkpoint_count)?;
    for (f, _) in factors {
        validate_checkpoints(&checkpoints, f.n_max())?;
    }
    let table = PrimeTable::new(*checkpoints.last().unwrap());
    let mut sums = Vec::with_capacity(checkpoints.len());
    let mut acc = Compensated::default();
    let mut idx = 0usize;
    for &xc in &checkpoints {
        while idx < table.primes().len() && table.primes()[idx] <= xc {
            let p = table.primes()[idx];
            let mut combined = Complex::new(0.0, 0.0);
            for (f, e) in factors {
                combined += f.coeff(p)? * *e;
            }
            acc.add(combined.norm_sqr() / p as f64);
            idx += 1;
        }
        sums.push(Complex::new(acc.value(), 0.0));
    }
    let series = StatSeries {
        kind: StatKind::SelbergVariance,
        checkpoints,
        partial_sums: sums,
    };
    let (measured, _, _) = slope_fit(&series);
    let predicted: f64 = factors.iter().map(|(_, e)| e * e).sum();
    Ok(AdditivityReport {
        predicted,
        measured,
        gap: (measured - predicted).abs(),
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterGroup;

    #[test]
    fn prime_counts_cross_checked_two_ways() {
        let table = PrimeTable::new(1_000_000);
        // Reference counts at decades.
        for (limit, want) in [(1000u64, 168usize), (10_000, 1229), (100_000, 9592), (1_000_000, 78_498)]
        {
            assert_eq!(table.primes_up_to(limit).len(), want, "pi({limit})");
        }
        // Second, independent route: an odd-only sieve of Sundaram.
        let n = 500_000usize; // covers odds below 1e6
        let mut excluded = vec![false; n + 1];
        for i in 1..=n {
            let mut j = i;
            loop {
                let v = i + j + 2 * i * j;
                if v > n {
                    break;
                }
                excluded[v] = true;
                j += 1;
            }
        }
        let sundaram_count = 1 + (1..=n).filter(|&k| !excluded[k] && 2 * k + 1 <= 999_999).count();
        assert_eq!(sundaram_count, 78_498);
        // Spot check primality agreement near the top.
        for n in 999_980u64..=1_000_000 {
            let by_trial = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(table.is_prime(n), by_trial, "primality of {n}");
        }
    }

    #[test]
    fn reciprocal_prime_sum_frozen_value() {
        let table = PrimeTable::new(100);
        let sum: f64 = table.primes().iter().map(|&p| 1.0 / p as f64).sum();
        assert!((sum - 1.8028172010488709399).abs() < 1e-15, "sum = {sum}");
    }

    #[test]
    fn selberg_sum_of_zeta_is_the_reciprocal_prime_sum() {
        let zeta = SelbergFunction::zeta(200).unwrap();
        let series = selberg_sum(&zeta, &[100, 200]).unwrap();
        assert_eq!(series.checkpoints, vec![100, 200]);
        assert!((series.partial_sums[0].re - 1.8028172010488709399).abs() < 1e-14);
        assert!(series.partial_sums[0].im.abs() < 1e-18);
        assert!(series.partial_sums[1].re > series.partial_sums[0].re);
    }

    #[test]
    fn checkpoint_ladder_shape_and_errors() {
        let pts = geometric_checkpoints(1_000_000, 11).unwrap();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 1000);
        assert_eq!(*pts.last().unwrap(), 1_000_000);
        // ratio about 2 between consecutive points
        for w in pts.windows(2) {
            let r = w[1] as f64 / w[0] as f64;
            assert!((r - 2.0).abs() < 0.01, "ratio {r}");
        }
        assert!(matches!(
            geometric_checkpoints(1_000_000, 3),
            Err(Error::ParameterDegeneracy { .. })
        ));
        assert!(matches!(
            geometric_checkpoints(999, 11),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn zeta_slope_is_one() {
        let zeta = SelbergFunction::zeta(1_000_000).unwrap();
        let est = estimate_nf(&zeta, 1_000_000, 11).unwrap();
        assert!(
            (est.slope - 1.0).abs() < 0.1,
            "slope {} intercept {}",
            est.slope,
            est.intercept
        );
        assert!(est.fit_residual < 0.05, "residual {}", est.fit_residual);
    }

    #[test]
    fn character_slope_is_one() {
        let g5 = CharacterGroup::new(5).unwrap();
        let chi = g5
            .characters()
            .into_iter()
            .find(|c| (c.eval(2) - Complex::new(0.0, 1.0)).norm() < 1e-12)
            .unwrap();
        let l5 = SelbergFunction::dirichlet(&chi, 1_000_000).unwrap();
        let est = estimate_nf(&l5, 1_000_000, 11).unwrap();
        assert!((est.slope - 1.0).abs() < 0.2, "slope {}", est.slope);
    }

    #[test]
    fn orthogonality_of_distinct_characters_stays_bounded() {
        let g7 = CharacterGroup::new(7).unwrap();
        let prims: Vec<_> = g7
            .characters()
            .into_iter()
            .filter(|c| c.is_primitive())
            .collect();
        assert!(prims.len() >= 2);
        let f = SelbergFunction::dirichlet(&prims[0], 100_000).unwrap();
        let g = SelbergFunction::dirichlet(&prims[1], 100_000).unwrap();
        let pts = geometric_checkpoints(100_000, 8).unwrap();
        let series = orthogonality_sum(&f, &g, &pts).unwrap();
        let sup = series
            .partial_sums
            .iter()
            .map(|s| s.norm())
            .fold(0.0f64, f64::max);
        assert!(sup < 2.0, "sup = {sup}");
    }

    #[test]
    fn pole_divergence_increases_for_zeta() {
        let zeta = SelbergFunction::zeta(100_000).unwrap();
        let pts = geometric_checkpoints(100_000, 10).unwrap();
        let series = pole_divergence_sum(&zeta, 0.0, &pts).unwrap();
        for w in series.partial_sums.windows(2) {
            assert!(w[1].re > w[0].re, "not increasing");
        }
        // Off the pole the same sum stays bounded and rotates.
        let off = pole_divergence_sum(&zeta, 5.0, &pts).unwrap();
        let sup = off.partial_sums.iter().map(|s| s.norm()).fold(0.0f64, f64::max);
        assert!(sup < 3.0, "sup = {sup}");
    }

    #[test]
    fn additivity_of_the_variance_slope() {
        let zeta = SelbergFunction::zeta(1_000_000).unwrap();
        let g5 = CharacterGroup::new(5).unwrap();
        let chi = g5
            .characters()
            .into_iter()
            .find(|c| (c.eval(2) - Complex::new(0.0, 1.0)).norm() < 1e-12)
            .unwrap();
        let l5 = SelbergFunction::dirichlet(&chi, 1_000_000).unwrap();

        // One factor squared: slope 4.
        let squared = nf_additivity_check(&[(&zeta, 2.0)], 1_000_000, 11).unwrap();
        assert!((squared.predicted - 4.0).abs() < 1e-15);
        assert!(squared.gap < 0.4, "measured {}", squared.measured);

        // Two distinct primitives: slope 2.
        let pair = nf_additivity_check(&[(&zeta, 1.0), (&l5, 1.0)], 1_000_000, 11).unwrap();
        assert!((pair.predicted - 2.0).abs() < 1e-15);
        assert!(pair.gap < 0.3, "measured {}", pair.measured);
    }

    #[test]
    fn series_rows_expose_loglog() {
        let zeta = SelbergFunction::zeta(1000).unwrap();
        let series = selberg_sum(&zeta, &[10, 100, 1000]).unwrap();
        let rows = series.rows();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].0, 1000);
        assert!((rows[2].3 - (1000f64).ln().ln()).abs() < 1e-15);
    }

    #[test]
    fn checkpoint_validation() {
        let zeta = SelbergFunction::zeta(100).unwrap();
        assert!(selberg_sum(&zeta, &[]).is_err());
        assert!(selberg_sum(&zeta, &[2]).is_err());
        assert!(selberg_sum(&zeta, &[50, 50]).is_err());
        assert!(matches!(
            selberg_sum(&zeta, &[50, 101]),
            Err(Error::InsufficientData { .. })
        ));
    }
}
