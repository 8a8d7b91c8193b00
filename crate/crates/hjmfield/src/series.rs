//! Geometric-series helpers used by the recursion drifts, the likelihood
//! and the limit formulas.

/// Sum of the geometric series `1 + rho + ... + rho^m`.
///
/// Evaluated in closed form `(1 - rho^{m+1}) / (1 - rho)`, with a
/// direct-summation fallback when `|1 - rho| < 1e-6` where the closed form
/// cancels badly. The autoregression parameter may sit anywhere in the
/// stable region and arbitrarily close to its boundary.
pub fn geom_sum(rho: f64, m: usize) -> f64 {
    if (1.0 - rho).abs() < 1e-6 {
        let mut acc = 0.0;
        let mut p = 1.0;
        for _ in 0..=m {
            acc += p;
            p *= rho;
        }
        acc
    } else {
        (1.0 - rho.powi(m as i32 + 1)) / (1.0 - rho)
    }
}

/// Table `p[i] = rho^i` for `i = 0 ..= m_max`.
pub fn power_table(rho: f64, m_max: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(m_max + 1);
    let mut cur = 1.0;
    for _ in 0..=m_max {
        p.push(cur);
        cur *= rho;
    }
    p
}

/// Table `g[m] = 1 + rho + ... + rho^m` built incrementally from a power
/// table, so no cancellation occurs for any `rho`.
pub fn geom_table(powers: &[f64]) -> Vec<f64> {
    let mut g = Vec::with_capacity(powers.len());
    let mut acc = 0.0;
    for &p in powers {
        acc += p;
        g.push(acc);
    }
    g
}

/// Table of first derivatives `d/drho (1 + ... + rho^m) = sum_i i rho^{i-1}`.
pub fn geom_deriv_table(powers: &[f64]) -> Vec<f64> {
    let mut g = Vec::with_capacity(powers.len());
    let mut acc = 0.0;
    g.push(0.0);
    for m in 1..powers.len() {
        acc += m as f64 * powers[m - 1];
        g.push(acc);
    }
    g
}

/// Table of second derivatives `sum_i i (i-1) rho^{i-2}`.
pub fn geom_deriv2_table(powers: &[f64]) -> Vec<f64> {
    let mut g = Vec::with_capacity(powers.len());
    let mut acc = 0.0;
    g.push(0.0);
    if powers.len() > 1 {
        g.push(0.0);
    }
    for m in 2..powers.len() {
        acc += (m * (m - 1)) as f64 * powers[m - 2];
        g.push(acc);
    }
    g
}
