//! Triangular forward-rate surfaces and their no-arbitrage simulation.
//!
//! A surface holds the initial curve `f_{0,.}` as row 0 plus `K` observed
//! rows; row `k` carries maturities `0 ..= K + L - k`, which is exactly the
//! panel the likelihood consumes. Rates are unconstrained reals (negative
//! values permitted).

use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{HjmError, Result};
use crate::noise::NoiseField;
use crate::params::ModelParams;
use crate::series::geom_sum;

/// Triangular panel of forward rates plus the initial curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSurface {
    k_rows: usize,
    l_max: usize,
    /// Rows 0..=K flattened, row k of length K + L - k + 1.
    values: Vec<f64>,
}

impl ForwardSurface {
    /// An all-zero surface with the given initial curve (length `K + L + 1`).
    pub fn new(k_rows: usize, l_max: usize, initial_curve: &[f64]) -> Result<Self> {
        if k_rows == 0 || l_max == 0 {
            return Err(HjmError::InvalidParameter {
                name: "K/L",
                reason: "surface needs K >= 1 and L >= 1".to_string(),
            });
        }
        if initial_curve.len() != k_rows + l_max + 1 {
            return Err(HjmError::DimensionMismatch(format!(
                "initial curve: expected {} entries for K={k_rows}, L={l_max}, got {}",
                k_rows + l_max + 1,
                initial_curve.len()
            )));
        }
        let mut values = vec![0.0; Self::len_for(k_rows, l_max)];
        values[..initial_curve.len()].copy_from_slice(initial_curve);
        Ok(Self {
            k_rows,
            l_max,
            values,
        })
    }

    fn len_for(k_rows: usize, l_max: usize) -> usize {
        (0..=k_rows).map(|k| k_rows + l_max - k + 1).sum()
    }

    #[inline]
    fn offset(&self, k: usize) -> usize {
        let d = self.k_rows + self.l_max + 1;
        k * d - k * (k - 1) / 2
    }

    /// Number of observed time rows `K`.
    pub fn k_rows(&self) -> usize {
        self.k_rows
    }

    /// Maximum maturity column `L` of the sample.
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Length of row `k`.
    pub fn row_len(&self, k: usize) -> usize {
        self.k_rows + self.l_max - k + 1
    }

    /// Forward rate `f_{k, ell}`.
    #[inline]
    pub fn get(&self, k: usize, ell: usize) -> f64 {
        debug_assert!(k <= self.k_rows && ell < self.row_len(k));
        self.values[self.offset(k) + ell]
    }

    /// Checked access.
    pub fn try_get(&self, k: usize, ell: usize) -> Result<f64> {
        if k > self.k_rows || ell >= self.row_len(k) {
            return Err(HjmError::OutOfDomain { k, ell });
        }
        Ok(self.get(k, ell))
    }

    /// Overwrites `f_{k, ell}`.
    pub fn set(&mut self, k: usize, ell: usize, value: f64) -> Result<()> {
        if k > self.k_rows || ell >= self.row_len(k) {
            return Err(HjmError::OutOfDomain { k, ell });
        }
        let idx = self.offset(k) + ell;
        self.values[idx] = value;
        Ok(())
    }

    /// Row `k` as a slice (row 0 is the initial curve).
    pub fn row(&self, k: usize) -> &[f64] {
        let o = self.offset(k);
        &self.values[o..o + self.row_len(k)]
    }

    /// Initial curve `f_{0, 0 ..= K+L}`.
    pub fn initial_curve(&self) -> &[f64] {
        self.row(0)
    }

    /// Writes the surface as CSV with header `k,ell,f`, row `k = 0`
    /// carrying the initial curve. Numbers use the shortest decimal
    /// representation that round-trips binary64 exactly.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        writeln!(w, "k,ell,f")?;
        for k in 0..=self.k_rows {
            for ell in 0..self.row_len(k) {
                writeln!(w, "{},{},{}", k, ell, self.get(k, ell))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the surface to a file.
    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(f)
    }

    /// Parses a surface from `k,ell,f` CSV, validating that the triangular
    /// domain is complete and free of duplicates.
    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(BufReader::new(input));
        {
            let headers = rdr.headers()?;
            let expect = ["k", "ell", "f"];
            if headers.len() != 3 || headers.iter().zip(expect).any(|(h, e)| h.trim() != e) {
                return Err(HjmError::FileFormat(format!(
                    "surface CSV must have header `k,ell,f`, got `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                )));
            }
        }
        let mut cells: Vec<(usize, usize, f64)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize, name: &str| -> Result<&str> {
                rec.get(i).ok_or_else(|| {
                    HjmError::FileFormat(format!("surface CSV row missing field `{name}`"))
                })
            };
            let k: usize = parse(0, "k")?.trim().parse().map_err(|e| {
                HjmError::FileFormat(format!("surface CSV field `k`: {e} in {rec:?}"))
            })?;
            let ell: usize = parse(1, "ell")?.trim().parse().map_err(|e| {
                HjmError::FileFormat(format!("surface CSV field `ell`: {e} in {rec:?}"))
            })?;
            let f: f64 = parse(2, "f")?.trim().parse().map_err(|e| {
                HjmError::FileFormat(format!("surface CSV field `f`: {e} in {rec:?}"))
            })?;
            cells.push((k, ell, f));
        }
        if cells.is_empty() {
            return Err(HjmError::FileFormat("surface CSV has no data rows".into()));
        }
        let k_rows = cells.iter().map(|c| c.0).max().unwrap();
        let row0_len = cells.iter().filter(|c| c.0 == 0).count();
        if k_rows == 0 || row0_len <= k_rows + 1 {
            return Err(HjmError::FileFormat(format!(
                "surface CSV: initial row has {row0_len} maturities which cannot cover K={k_rows} \
                 observation rows with L >= 1"
            )));
        }
        let l_max = row0_len - k_rows - 1;
        let mut surf = Self::new(k_rows, l_max, &vec![0.0; k_rows + l_max + 1])?;
        let mut seen = vec![false; surf.values.len()];
        for (k, ell, f) in cells {
            if k > k_rows || ell >= surf.row_len(k) {
                return Err(HjmError::FileFormat(format!(
                    "surface CSV: point (k={k}, ell={ell}) outside the triangle for K={k_rows}, L={l_max}"
                )));
            }
            let idx = surf.offset(k) + ell;
            if seen[idx] {
                return Err(HjmError::FileFormat(format!(
                    "surface CSV: duplicate point (k={k}, ell={ell})"
                )));
            }
            seen[idx] = true;
            surf.values[idx] = f;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            let (mut k, mut rem) = (0usize, missing);
            while rem >= surf.row_len(k) {
                rem -= surf.row_len(k);
                k += 1;
            }
            return Err(HjmError::FileFormat(format!(
                "surface CSV: missing point (k={k}, ell={rem})"
            )));
        }
        Ok(surf)
    }

    /// Reads a surface from a file.
    pub fn load_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(f)
    }
}

/// Simulates a forward surface under the no-arbitrage dynamics.
///
/// Row `k` follows from row `k - 1` through
/// `f_{k,0} = f_{k-1,1} + beta eta_{k,0} + beta^2/2 - beta sum_j b_j rho^j`
/// and, for `ell >= 1`,
/// `f_{k,ell} = f_{k-1,ell+1} + rho (f_{k,ell-1} - f_{k-1,ell})
///             + beta eta_{k,ell} + (beta^2/2) sum_{i<=2 ell} rho^i
///             - beta sum_{j=ell}^{J} b_j rho^{j-ell}`.
pub fn simulate_surface(
    params: &ModelParams,
    initial_curve: &[f64],
    noise: &NoiseField,
) -> Result<ForwardSurface> {
    simulate_surface_inner(params, initial_curve, noise, true)
}

/// Same recursion with the convexity drift `(beta^2/2) sum rho^i` removed.
/// Negative control for the martingale check; prices computed from such a
/// surface are not arbitrage-free.
pub(crate) fn simulate_surface_without_convexity(
    params: &ModelParams,
    initial_curve: &[f64],
    noise: &NoiseField,
) -> Result<ForwardSurface> {
    simulate_surface_inner(params, initial_curve, noise, false)
}

fn simulate_surface_inner(
    params: &ModelParams,
    initial_curve: &[f64],
    noise: &NoiseField,
    convexity_drift: bool,
) -> Result<ForwardSurface> {
    let (k_rows, l_max) = (noise.k_max(), noise.horizon());
    let mut surf = ForwardSurface::new(k_rows, l_max, initial_curve)?;
    let (beta, rho) = (params.beta, params.rho);
    let j_order = params.j_order();
    // risk_premium[ell] = sum_{j=ell}^{J} b_j rho^{j-ell}
    let risk_premium: Vec<f64> = (0..=j_order)
        .map(|ell| {
            (ell..=j_order)
                .map(|j| params.b[j] * rho.powi((j - ell) as i32))
                .sum()
        })
        .collect();
    let half_beta2 = 0.5 * beta * beta;
    for k in 1..=k_rows {
        let row_len = surf.row_len(k);
        for ell in 0..row_len {
            let drift = if convexity_drift {
                if ell == 0 {
                    half_beta2
                } else {
                    half_beta2 * geom_sum(rho, 2 * ell)
                }
            } else {
                0.0
            };
            let risk = if ell <= j_order {
                beta * risk_premium[ell]
            } else {
                0.0
            };
            let prev_next = surf.get(k - 1, ell + 1);
            let ar = if ell == 0 {
                0.0
            } else {
                rho * (surf.get(k, ell - 1) - surf.get(k - 1, ell))
            };
            let value = prev_next + ar + beta * noise.eta(k, ell) + drift - risk;
            surf.set(k, ell, value)?;
        }
    }
    Ok(surf)
}

/// Closed form for the increment `f_{k, ell-1} - f_{k-1, ell}`, `k, ell >= 1`:
/// the recursion unrolled along row `k`.
pub fn closed_form_increment(
    params: &ModelParams,
    noise: &NoiseField,
    k: usize,
    ell: usize,
) -> Result<f64> {
    if k == 0 || ell == 0 {
        return Err(HjmError::OutOfDomain { k, ell });
    }
    let (beta, rho) = (params.beta, params.rho);
    let j_order = params.j_order();
    let mut noise_part = 0.0;
    for i in 0..ell {
        noise_part += rho.powi((ell - i - 1) as i32) * noise.eta(k, i);
    }
    let g = geom_sum(rho, ell - 1);
    let mut risk_part = 0.0;
    for j in 0..=j_order {
        for i in 0..=j.min(ell - 1) {
            risk_part += params.b[j] * rho.powi((ell + j - 1 - 2 * i) as i32);
        }
    }
    Ok(beta * noise_part + 0.5 * beta * beta * g * g - beta * risk_part)
}

/// Closed form for the level `f_{k, ell} - f_{0, k+ell}`, `k >= 1`:
/// the per-row increments accumulated down the anti-diagonal.
pub fn closed_form_level(
    params: &ModelParams,
    noise: &NoiseField,
    k: usize,
    ell: usize,
) -> Result<f64> {
    if k == 0 {
        return Err(HjmError::OutOfDomain { k, ell });
    }
    let (beta, rho) = (params.beta, params.rho);
    let j_order = params.j_order();
    let mut total = 0.0;
    for n in 1..=k {
        let m = k + ell - n;
        let g = geom_sum(rho, m);
        let mut noise_part = 0.0;
        for i in 0..=m {
            noise_part += rho.powi((m - i) as i32) * noise.eta(n, i);
        }
        let mut risk_part = 0.0;
        for j in 0..=j_order {
            for i in 0..=j.min(m) {
                risk_part += params.b[j] * rho.powi((m + j - 2 * i) as i32);
            }
        }
        total += 0.5 * beta * beta * g * g + beta * noise_part - beta * risk_part;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::generate_noise;
    use approx::assert_relative_eq;

    fn zero_curve(k: usize, l: usize) -> Vec<f64> {
        vec![0.0; k + l + 1]
    }

    #[test]
    fn zero_noise_zero_rho_accumulates_half_beta2_per_row() {
        let params = ModelParams::new(1.0, 0.0, vec![0.0]).unwrap();
        let noise = NoiseField::constant(4, 3, 0.0);
        let surf = simulate_surface(&params, &zero_curve(4, 3), &noise).unwrap();
        for k in 1..=4usize {
            for ell in 0..surf.row_len(k) {
                assert_relative_eq!(surf.get(k, ell), k as f64 / 2.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn row_zero_is_the_input_curve() {
        let params = ModelParams::new(0.7, 0.4, vec![0.1]).unwrap();
        let noise = NoiseField::constant(3, 2, 0.0);
        let curve: Vec<f64> = (0..6).map(|i| 0.01 * i as f64).collect();
        let surf = simulate_surface(&params, &curve, &noise).unwrap();
        assert_eq!(surf.initial_curve(), &curve[..]);
    }

    #[test]
    fn triangular_row_lengths() {
        let noise = generate_noise(5, 3, 1).unwrap();
        let params = ModelParams::new(0.5, 0.2, vec![0.0]).unwrap();
        let surf = simulate_surface(&params, &zero_curve(5, 3), &noise).unwrap();
        for k in 0..=5usize {
            assert_eq!(surf.row(k).len(), 5 + 3 - k + 1);
        }
    }

    #[test]
    fn increment_collapses_for_zero_rho() {
        let params = ModelParams::new(0.8, 0.0, vec![0.0, 0.0]).unwrap();
        let noise = generate_noise(4, 4, 11).unwrap();
        for k in 1..=4usize {
            for ell in 1..=4usize {
                let v = closed_form_increment(&params, &noise, k, ell).unwrap();
                let expect = 0.8 * noise.eta(k, ell - 1) + 0.5 * 0.8 * 0.8;
                assert_relative_eq!(v, expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn increment_hand_value() {
        // beta=1, rho=0.5, b=0, eta=0, ell=2 -> (1/2)(1 + 0.5)^2 = 1.125
        let params = ModelParams::new(1.0, 0.5, vec![0.0]).unwrap();
        let noise = NoiseField::constant(3, 3, 0.0);
        let v = closed_form_increment(&params, &noise, 1, 2).unwrap();
        assert_relative_eq!(v, 1.125, epsilon = 1e-14);
    }

    #[test]
    fn level_deterministic_case_is_sum_of_squared_geom() {
        let params = ModelParams::new(0.6, 0.3, vec![0.0]).unwrap();
        let noise = NoiseField::constant(3, 3, 0.0);
        for k in 1..=3usize {
            for ell in 0..=2usize {
                let v = closed_form_level(&params, &noise, k, ell).unwrap();
                let expect: f64 = (1..=k)
                    .map(|n| {
                        let g = geom_sum(0.3, k + ell - n);
                        0.5 * 0.36 * g * g
                    })
                    .sum();
                assert_relative_eq!(v, expect, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn closed_forms_match_the_recursion() {
        let params = ModelParams::new(0.9, -0.6, vec![0.3, -0.2, 0.1]).unwrap();
        let noise = generate_noise(6, 5, 77).unwrap();
        let curve: Vec<f64> = (0..12).map(|i| 0.02 * (i as f64) - 0.05).collect();
        let surf = simulate_surface(&params, &curve, &noise).unwrap();
        for k in 1..=6usize {
            for ell in 1..surf.row_len(k - 1) {
                let inc = closed_form_increment(&params, &noise, k, ell).unwrap();
                let direct = surf.get(k, ell - 1) - surf.get(k - 1, ell);
                assert!(
                    (inc - direct).abs() < 1e-10,
                    "increment mismatch at ({k},{ell}): {inc} vs {direct}"
                );
            }
            for ell in 0..surf.row_len(k) {
                let lvl = closed_form_level(&params, &noise, k, ell).unwrap();
                let direct = surf.get(k, ell) - surf.get(0, k + ell);
                assert!(
                    (lvl - direct).abs() < 1e-10,
                    "level mismatch at ({k},{ell}): {lvl} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn level_row_one_equals_first_row_minus_curve() {
        let params = ModelParams::new(0.5, 0.25, vec![0.1, 0.05]).unwrap();
        let noise = generate_noise(3, 3, 5).unwrap();
        let curve: Vec<f64> = (0..7).map(|i| -0.01 * i as f64).collect();
        let surf = simulate_surface(&params, &curve, &noise).unwrap();
        for ell in 0..surf.row_len(1) {
            let lvl = closed_form_level(&params, &noise, 1, ell).unwrap();
            assert_relative_eq!(lvl, surf.get(1, ell) - curve[1 + ell], epsilon = 1e-12);
        }
    }

    #[test]
    fn out_of_domain_indices_rejected() {
        let params = ModelParams::new(1.0, 0.0, vec![0.0]).unwrap();
        let noise = NoiseField::constant(2, 2, 0.0);
        assert!(closed_form_increment(&params, &noise, 0, 1).is_err());
        assert!(closed_form_increment(&params, &noise, 1, 0).is_err());
        assert!(closed_form_level(&params, &noise, 0, 0).is_err());
    }

    #[test]
    fn curve_length_mismatch_rejected() {
        let params = ModelParams::new(1.0, 0.0, vec![0.0]).unwrap();
        let noise = NoiseField::constant(2, 2, 0.0);
        assert!(simulate_surface(&params, &[0.0; 4], &noise).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let params = ModelParams::new(0.41, 0.37, vec![0.13]).unwrap();
        let noise = generate_noise(4, 3, 9).unwrap();
        let surf = simulate_surface(&params, &zero_curve(4, 3), &noise).unwrap();
        let mut buf = Vec::new();
        surf.write_csv(&mut buf).unwrap();
        let back = ForwardSurface::read_csv(&buf[..]).unwrap();
        assert_eq!(surf, back);
    }

    #[test]
    fn csv_rejects_missing_and_duplicate_points() {
        let text = "k,ell,f\n0,0,0.0\n0,1,0.0\n0,2,0.0\n1,0,0.5\n";
        // K=1, L=1 complete needs (0,0),(0,1),(0,2),(1,0),(1,1)
        assert!(ForwardSurface::read_csv(text.as_bytes()).is_err());
        let dup = "k,ell,f\n0,0,0.0\n0,1,0.0\n0,2,0.0\n1,0,0.5\n1,1,0.5\n1,1,0.5\n";
        assert!(ForwardSurface::read_csv(dup.as_bytes()).is_err());
    }
}
