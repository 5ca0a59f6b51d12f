//! Soft-margin C-SVM with RBF kernel, trained by sequential minimal
//! optimization, wrapped one-vs-one for multi-class problems.
//!
//! Attributes are linearly rescaled to [-1, +1] with parameters fitted
//! on the training set; test vectors reuse those parameters unchanged.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::FeatureSet;

/// Per-feature (min, max) over a training set, mapping onto [-1, +1].
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleParams {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

/// Fit scaling parameters on training rows.
pub fn scale_fit(rows: &[Vec<f64>]) -> Result<ScaleParams> {
    let first = rows
        .first()
        .ok_or_else(|| Error::Invalid("cannot fit scaling on an empty set".into()))?;
    let dim = first.len();
    let mut mins = vec![f64::INFINITY; dim];
    let mut maxs = vec![f64::NEG_INFINITY; dim];
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
        for (i, &v) in row.iter().enumerate() {
            mins[i] = mins[i].min(v);
            maxs[i] = maxs[i].max(v);
        }
    }
    Ok(ScaleParams { mins, maxs })
}

impl ScaleParams {
    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    /// x' = -1 + 2 (x - min) / (max - min); constant features map to 0.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .enumerate()
            .map(|(i, &v)| {
                let span = self.maxs[i] - self.mins[i];
                if span == 0.0 {
                    0.0
                } else {
                    -1.0 + 2.0 * (v - self.mins[i]) / span
                }
            })
            .collect())
    }
}

/// RBF kernel exp(-gamma * ||x - z||^2).
pub fn rbf(x: &[f64], z: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: z.len(),
        });
    }
    let mut d2 = 0.0;
    for (a, b) in x.iter().zip(z) {
        let d = a - b;
        d2 += d * d;
    }
    Ok((-gamma * d2).exp())
}

/// A trained binary machine: only support vectors (alpha > 0) are
/// kept, with `coefficients[i] = y_i * alpha_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SVMBinary {
    pub support_vectors: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    pub c: f64,
    /// False when the solver hit its pass budget before the KKT
    /// conditions held everywhere.
    pub converged: bool,
}

/// f(x) = sum_i coefficients_i K(sv_i, x) + bias. Classify by sign;
/// an exact zero counts as the positive class.
pub fn decision_function(m: &SVMBinary, x: &[f64]) -> Result<f64> {
    let mut f = m.bias;
    for (sv, &coef) in m.support_vectors.iter().zip(&m.coefficients) {
        f += coef * rbf(sv, x, m.gamma)?;
    }
    Ok(f)
}

/// Raw SMO output: one multiplier per training row plus the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
}

struct Solver<'a> {
    y: &'a [f64],
    kernel: Vec<f64>,
    n: usize,
    c: f64,
    /// Working margin tolerance; half the advertised KKT tolerance so
    /// the guarantee survives the final bias refit.
    tol: f64,
    alpha: Vec<f64>,
    err: Vec<f64>,
    bias: f64,
}

impl<'a> Solver<'a> {
    #[inline]
    fn k(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    #[inline]
    fn is_free(&self, i: usize) -> bool {
        self.alpha[i] > 1e-12 && self.alpha[i] < self.c - 1e-12
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (e1, e2) = (self.err[i1], self.err[i2]);
        let s = y1 * y2;
        let (lo, hi) = if s < 0.0 {
            ((a2 - a1).max(0.0), (self.c + a2 - a1).min(self.c))
        } else {
            ((a1 + a2 - self.c).max(0.0), (a1 + a2).min(self.c))
        };
        if hi - lo < 1e-15 {
            return false;
        }
        let eta = self.k(i1, i1) + self.k(i2, i2) - 2.0 * self.k(i1, i2);
        if eta <= 0.0 {
            // coincident points; no progress possible along this pair
            return false;
        }
        let a2_new = (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi);
        if (a2_new - a2).abs() < 1e-12 * (a2_new + a2 + 1e-12) {
            return false;
        }
        let a1_new = a1 + s * (a2 - a2_new);

        let d1 = a1_new - a1;
        let d2 = a2_new - a2;
        let b1 = self.bias - e1 - y1 * d1 * self.k(i1, i1) - y2 * d2 * self.k(i1, i2);
        let b2 = self.bias - e2 - y1 * d1 * self.k(i1, i2) - y2 * d2 * self.k(i2, i2);
        let free1 = a1_new > 1e-12 && a1_new < self.c - 1e-12;
        let free2 = a2_new > 1e-12 && a2_new < self.c - 1e-12;
        let b_new = if free1 {
            b1
        } else if free2 {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = b_new - self.bias;
        for i in 0..self.n {
            self.err[i] += y1 * d1 * self.k(i1, i) + y2 * d2 * self.k(i2, i) + db;
        }
        self.bias = b_new;
        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        true
    }

    fn examine(&mut self, i2: usize, rng: &mut ChaCha8Rng) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let r2 = self.err[i2] * y2;
        if !((r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        // second-choice heuristic: the partner with the largest |E1 - E2|
        // among free multipliers
        let e2 = self.err[i2];
        let mut best: Option<usize> = None;
        let mut best_gap = 0.0;
        for i in 0..self.n {
            if i != i2 && self.is_free(i) {
                let gap = (self.err[i] - e2).abs();
                if gap > best_gap {
                    best_gap = gap;
                    best = Some(i);
                }
            }
        }
        if let Some(i1) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        // fall back to all free multipliers from a seeded start, then to
        // every multiplier
        let start = rng.random_range(0..self.n);
        for off in 0..self.n {
            let i1 = (start + off) % self.n;
            if i1 != i2 && self.is_free(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        let start = rng.random_range(0..self.n);
        for off in 0..self.n {
            let i1 = (start + off) % self.n;
            if i1 != i2 && self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }
}

/// Solve the soft-margin dual on pre-scaled rows with labels in
/// {-1, +1}. On return the multipliers satisfy the box constraints,
/// `sum alpha_i y_i = 0` to rounding, and the KKT conditions within
/// `tol`; if `max_passes` sweeps were not enough the best-so-far state
/// comes back with `converged = false`.
pub fn smo_solve(
    rows: &[Vec<f64>],
    labels: &[f64],
    c: f64,
    gamma: f64,
    tol: f64,
    max_passes: usize,
    seed: u64,
) -> Result<SmoSolution> {
    let n = rows.len();
    if n != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: labels.len(),
        });
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::Invalid("labels must be +1 or -1".into()));
    }
    if !labels.iter().any(|&y| y > 0.0) || !labels.iter().any(|&y| y < 0.0) {
        return Err(Error::SingleClass);
    }
    if c <= 0.0 || gamma <= 0.0 {
        return Err(Error::Invalid(format!(
            "C and gamma must be positive, got C={c}, gamma={gamma}"
        )));
    }

    let mut kernel = vec![0.0f64; n * n];
    for i in 0..n {
        kernel[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = rbf(&rows[i], &rows[j], gamma)?;
            kernel[i * n + j] = v;
            kernel[j * n + i] = v;
        }
    }

    let mut solver = Solver {
        y: labels,
        kernel,
        n,
        c,
        tol: tol * 0.5,
        alpha: vec![0.0; n],
        err: labels.iter().map(|&y| -y).collect(),
        bias: 0.0,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examine_all = true;
    let mut converged = false;
    let mut passes = 0usize;
    while passes < max_passes {
        passes += 1;
        let mut changed = 0usize;
        for i in 0..n {
            if examine_all || solver.is_free(i) {
                changed += solver.examine(i, &mut rng) as usize;
            }
        }
        if examine_all {
            if changed == 0 {
                converged = true;
                break;
            }
            examine_all = false;
        } else if changed == 0 {
            examine_all = true;
        }
    }

    // refit the bias from the converged multipliers
    let g: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| labels[j] * solver.alpha[j] * solver.k(j, i))
                .sum::<f64>()
        })
        .collect();
    let free: Vec<usize> = (0..n).filter(|&i| solver.is_free(i)).collect();
    let bias = if !free.is_empty() {
        free.iter().map(|&i| labels[i] - g[i]).sum::<f64>() / free.len() as f64
    } else {
        // midpoint of the interval the bound multipliers allow
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..n {
            let v = labels[i] - g[i];
            let at_zero = solver.alpha[i] <= 1e-12;
            if (at_zero && labels[i] > 0.0) || (!at_zero && labels[i] < 0.0) {
                lo = lo.max(v);
            } else {
                hi = hi.min(v);
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => solver.bias,
        }
    };

    Ok(SmoSolution {
        alpha: solver.alpha,
        bias,
        converged,
    })
}

/// Train a binary machine, keeping only the support vectors.
#[allow(clippy::too_many_arguments)]
pub fn smo_train(
    rows: &[Vec<f64>],
    labels: &[f64],
    c: f64,
    gamma: f64,
    tol: f64,
    max_passes: usize,
    seed: u64,
) -> Result<SVMBinary> {
    let sol = smo_solve(rows, labels, c, gamma, tol, max_passes, seed)?;
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (i, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(rows[i].clone());
            coefficients.push(labels[i] * a);
        }
    }
    Ok(SVMBinary {
        support_vectors,
        coefficients,
        bias: sol.bias,
        gamma,
        c,
        converged: sol.converged,
    })
}

/// Hyperparameters for multi-class training. `gamma = None` means
/// 1 / feature-dimension (1/204 for the default feature vector).
#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 8.0,
            gamma: None,
            tol: 1e-3,
            max_passes: 1000,
            seed: 0,
        }
    }
}

/// One binary machine within a one-vs-one ensemble; a positive
/// decision votes for `pos` (always the lower class index).
#[derive(Debug, Clone, PartialEq)]
pub struct PairMachine {
    pub pos: usize,
    pub neg: usize,
    pub machine: SVMBinary,
}

/// One-vs-one multi-class SVM: N(N-1)/2 binary machines plus the
/// training-set scaling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SVMMulti {
    pub class_count: usize,
    pub machines: Vec<PairMachine>,
    pub scale: ScaleParams,
}

/// Train one machine per unordered class pair on that pair's rows.
pub fn ovo_train(data: &FeatureSet, params: &SvmParams) -> Result<SVMMulti> {
    if data.class_count < 2 {
        return Err(Error::SingleClass);
    }
    if data.is_empty() {
        return Err(Error::Invalid("cannot train on an empty feature set".into()));
    }
    let gamma = params.gamma.unwrap_or(1.0 / data.dim as f64);
    let scale = scale_fit(&data.rows)?;
    let scaled: Vec<Vec<f64>> = data
        .rows
        .iter()
        .map(|r| scale.apply(r))
        .collect::<Result<_>>()?;

    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); data.class_count];
    for (i, &l) in data.labels.iter().enumerate() {
        by_class[l].push(i);
    }
    if by_class.iter().any(|c| c.is_empty()) {
        return Err(Error::SingleClass);
    }

    let n_classes = data.class_count;
    let mut machines = Vec::with_capacity(n_classes * (n_classes - 1) / 2);
    for pos in 0..n_classes {
        for neg in pos + 1..n_classes {
            let mut rows = Vec::with_capacity(by_class[pos].len() + by_class[neg].len());
            let mut labels = Vec::with_capacity(rows.capacity());
            for &i in &by_class[pos] {
                rows.push(scaled[i].clone());
                labels.push(1.0);
            }
            for &i in &by_class[neg] {
                rows.push(scaled[i].clone());
                labels.push(-1.0);
            }
            let seed = params
                .seed
                .wrapping_add(((pos * n_classes + neg) as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let machine = smo_train(
                &rows,
                &labels,
                params.c,
                gamma,
                params.tol,
                params.max_passes,
                seed,
            )?;
            machines.push(PairMachine { pos, neg, machine });
        }
    }
    Ok(SVMMulti {
        class_count: n_classes,
        machines,
        scale,
    })
}

/// Majority vote over all pair machines; ties break to the lowest
/// class index. `x` is an unscaled feature vector.
pub fn ovo_predict(m: &SVMMulti, x: &[f64]) -> Result<usize> {
    let xs = m.scale.apply(x)?;
    let mut votes = vec![0usize; m.class_count];
    for pm in &m.machines {
        let f = decision_function(&pm.machine, &xs)?;
        if f >= 0.0 {
            votes[pm.pos] += 1;
        } else {
            votes[pm.neg] += 1;
        }
    }
    let mut best = 0usize;
    for (k, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = k;
        }
    }
    Ok(best)
}

impl SVMMulti {
    /// Text model file: a header with the ensemble parameters
    /// (classes, c, gamma) and the scaling table, then one section per
    /// pair machine whose support vectors use the sparse 1-based
    /// `index:value` encoding.
    pub fn save(&self, path: &Path) -> Result<()> {
        let first = self
            .machines
            .first()
            .ok_or_else(|| Error::Invalid("cannot save an ensemble with no machines".into()))?;
        let (c, gamma) = (first.machine.c, first.machine.gamma);
        if self
            .machines
            .iter()
            .any(|pm| pm.machine.c != c || pm.machine.gamma != gamma)
        {
            return Err(Error::Invalid(
                "ensemble machines disagree on c/gamma; cannot serialize".into(),
            ));
        }
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "svmmulti v1")?;
        writeln!(w, "classes {}", self.class_count)?;
        writeln!(w, "c {c}")?;
        writeln!(w, "gamma {gamma}")?;
        writeln!(w, "dim {}", self.scale.dim())?;
        writeln!(w, "machines {}", self.machines.len())?;
        writeln!(w, "scale")?;
        for i in 0..self.scale.dim() {
            writeln!(w, "{} {}", self.scale.mins[i], self.scale.maxs[i])?;
        }
        for pm in &self.machines {
            let m = &pm.machine;
            writeln!(w, "machine {} {}", pm.pos, pm.neg)?;
            writeln!(w, "bias {}", m.bias)?;
            writeln!(w, "converged {}", u8::from(m.converged))?;
            writeln!(w, "nsv {}", m.support_vectors.len())?;
            for (sv, coef) in m.support_vectors.iter().zip(&m.coefficients) {
                write!(w, "{coef}")?;
                for (i, &v) in sv.iter().enumerate() {
                    if v != 0.0 {
                        write!(w, " {}:{v}", i + 1)?;
                    }
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let fail = |msg: &str| Error::format(&display, msg);

        let mut next = |what: &str| -> Result<&str> {
            lines
                .next()
                .ok_or_else(|| Error::format(&display, format!("truncated before {what}")))
        };
        if next("magic")? != "svmmulti v1" {
            return Err(fail("bad magic; expected `svmmulti v1`"));
        }
        let field = |line: &str, key: &str| -> Result<String> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| Error::format(&display, format!("expected `{key} ...`, got {line:?}")))
        };
        let class_count: usize = field(next("classes")?, "classes")?
            .parse()
            .map_err(|_| fail("bad class count"))?;
        let c: f64 = field(next("c")?, "c")?.parse().map_err(|_| fail("bad c"))?;
        let gamma: f64 = field(next("gamma")?, "gamma")?
            .parse()
            .map_err(|_| fail("bad gamma"))?;
        let dim: usize = field(next("dim")?, "dim")?
            .parse()
            .map_err(|_| fail("bad dim"))?;
        let n_machines: usize = field(next("machines")?, "machines")?
            .parse()
            .map_err(|_| fail("bad machine count"))?;
        if next("scale")? != "scale" {
            return Err(fail("expected `scale`"));
        }
        let mut mins = Vec::with_capacity(dim);
        let mut maxs = Vec::with_capacity(dim);
        for _ in 0..dim {
            let line = next("scale row")?;
            let (a, b) = line
                .split_once(' ')
                .ok_or_else(|| Error::format(&display, "bad scale row"))?;
            mins.push(a.parse().map_err(|_| fail("bad scale min"))?);
            maxs.push(b.parse().map_err(|_| fail("bad scale max"))?);
        }

        let mut machines = Vec::with_capacity(n_machines);
        for _ in 0..n_machines {
            let head = field(next("machine")?, "machine")?;
            let (p, n) = head
                .split_once(' ')
                .ok_or_else(|| Error::format(&display, "bad machine header"))?;
            let pos: usize = p.parse().map_err(|_| fail("bad machine class"))?;
            let neg: usize = n.parse().map_err(|_| fail("bad machine class"))?;
            let bias: f64 = field(next("bias")?, "bias")?
                .parse()
                .map_err(|_| fail("bad bias"))?;
            let converged = field(next("converged")?, "converged")? == "1";
            let nsv: usize = field(next("nsv")?, "nsv")?
                .parse()
                .map_err(|_| fail("bad nsv"))?;
            let mut support_vectors = Vec::with_capacity(nsv);
            let mut coefficients = Vec::with_capacity(nsv);
            for _ in 0..nsv {
                let line = next("support vector")?;
                let mut parts = line.split_whitespace();
                let coef: f64 = parts
                    .next()
                    .ok_or_else(|| Error::format(&display, "empty support vector row"))?
                    .parse()
                    .map_err(|_| fail("bad coefficient"))?;
                let mut sv = vec![0.0f64; dim];
                for tok in parts {
                    let (i, v) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::format(&display, "expected index:value"))?;
                    let idx: usize = i.parse().map_err(|_| fail("bad sv index"))?;
                    if idx == 0 || idx > dim {
                        return Err(fail("sv index out of range"));
                    }
                    sv[idx - 1] = v.parse().map_err(|_| fail("bad sv value"))?;
                }
                support_vectors.push(sv);
                coefficients.push(coef);
            }
            machines.push(PairMachine {
                pos,
                neg,
                machine: SVMBinary {
                    support_vectors,
                    coefficients,
                    bias,
                    gamma,
                    c,
                    converged,
                },
            });
        }
        Ok(SVMMulti {
            class_count,
            machines,
            scale: ScaleParams { mins, maxs },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_maps_min_mid_max() {
        let rows = vec![vec![2.0], vec![6.0]];
        let p = scale_fit(&rows).unwrap();
        assert_eq!(p.apply(&[4.0]).unwrap(), vec![0.0]);
        assert_eq!(p.apply(&[2.0]).unwrap(), vec![-1.0]);
        assert_eq!(p.apply(&[6.0]).unwrap(), vec![1.0]);
        // test rows reuse the fitted params even outside the range
        assert_eq!(p.apply(&[8.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn scale_constant_feature_maps_to_zero() {
        let rows = vec![vec![3.0, 1.0], vec![3.0, 2.0]];
        let p = scale_fit(&rows).unwrap();
        assert_eq!(p.apply(&[3.0, 1.5]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(p.apply(&[99.0, 1.5]).unwrap()[0], 0.0);
    }

    #[test]
    fn rbf_identities() {
        let x = vec![0.3, -0.7, 2.0];
        assert_eq!(rbf(&x, &x, 0.8).unwrap(), 1.0);
        let v = rbf(&[0.0, 0.0], &[1.0, 1.0], 0.5).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
        assert!(rbf(&[1.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn two_point_instance_recovers_analytic_solution() {
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let labels = vec![1.0, -1.0];
        let sol = smo_solve(&rows, &labels, 100.0, 0.5, 1e-3, 1000, 0).unwrap();
        let expect = 1.0 / (1.0 - (-2.0f64).exp());
        assert!(sol.converged);
        assert!((sol.alpha[0] - expect).abs() < 1e-6, "alpha0 {}", sol.alpha[0]);
        assert!((sol.alpha[1] - expect).abs() < 1e-6);
        assert!(sol.bias.abs() < 1e-6);

        let m = smo_train(&rows, &labels, 100.0, 0.5, 1e-3, 1000, 0).unwrap();
        let f1 = decision_function(&m, &rows[0]).unwrap();
        assert!((f1 - 1.0).abs() < 1e-6);
        let fm = decision_function(&m, &[0.0, 0.0]).unwrap();
        assert!(fm.abs() < 1e-9);
    }

    #[test]
    fn flipping_labels_flips_the_decision() {
        let rows = vec![
            vec![0.0, 0.5],
            vec![0.4, -0.2],
            vec![-0.6, 0.1],
            vec![0.9, 0.9],
        ];
        let labels = vec![1.0, 1.0, -1.0, -1.0];
        let flipped: Vec<f64> = labels.iter().map(|&y| -y).collect();
        let a = smo_train(&rows, &labels, 10.0, 1.0, 1e-3, 1000, 3).unwrap();
        let b = smo_train(&rows, &flipped, 10.0, 1.0, 1e-3, 1000, 3).unwrap();
        let probe = vec![0.2, 0.3];
        let fa = decision_function(&a, &probe).unwrap();
        let fb = decision_function(&b, &probe).unwrap();
        assert!((fa + fb).abs() < 1e-6, "fa={fa} fb={fb}");
    }

    #[test]
    fn smo_rejects_single_class() {
        let rows = vec![vec![0.0], vec![1.0]];
        assert!(matches!(
            smo_solve(&rows, &[1.0, 1.0], 1.0, 1.0, 1e-3, 10, 0),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn smo_separates_xor_with_rbf() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ];
        let labels = vec![1.0, 1.0, -1.0, -1.0];
        let m = smo_train(&rows, &labels, 100.0, 1.0, 1e-3, 1000, 0).unwrap();
        for (row, &y) in rows.iter().zip(&labels) {
            let f = decision_function(&m, row).unwrap();
            assert!(f * y > 0.0, "row {row:?} got f={f}");
        }
    }

    fn blob_set() -> FeatureSet {
        // three well-separated clusters in the plane
        let centers = [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)];
        let offsets = [(-0.2, 0.0), (0.2, 0.0), (0.0, -0.2), (0.0, 0.2), (0.1, 0.1)];
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (k, &(cx, cy)) in centers.iter().enumerate() {
            for &(dx, dy) in &offsets {
                rows.push(vec![cx + dx, cy + dy]);
                labels.push(k);
            }
        }
        FeatureSet::new(2, 3, labels, rows).unwrap()
    }

    #[test]
    fn ovo_machine_count_and_blob_accuracy() {
        let data = blob_set();
        let params = SvmParams {
            c: 10.0,
            gamma: Some(0.5),
            ..SvmParams::default()
        };
        let m = ovo_train(&data, &params).unwrap();
        assert_eq!(m.machines.len(), 3);
        for (row, &label) in data.rows.iter().zip(&data.labels) {
            assert_eq!(ovo_predict(&m, row).unwrap(), label);
        }
    }

    #[test]
    fn ovo_two_classes_is_one_machine_sign_decision() {
        let rows = vec![vec![0.0, 0.0], vec![0.2, 0.1], vec![3.0, 3.0], vec![3.1, 2.9]];
        let data = FeatureSet::new(2, 2, vec![0, 0, 1, 1], rows.clone()).unwrap();
        let m = ovo_train(&data, &SvmParams::default()).unwrap();
        assert_eq!(m.machines.len(), 1);
        for (row, want) in rows.iter().zip([0usize, 0, 1, 1]) {
            let xs = m.scale.apply(row).unwrap();
            let f = decision_function(&m.machines[0].machine, &xs).unwrap();
            let by_sign = if f >= 0.0 { 0 } else { 1 };
            assert_eq!(ovo_predict(&m, row).unwrap(), by_sign);
            assert_eq!(by_sign, want);
        }
    }

    #[test]
    fn ovo_93_classes_yield_4278_machines() {
        // two nearly identical samples per class on a coarse grid
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for k in 0..93usize {
            let x = (k % 10) as f64;
            let y = (k / 10) as f64;
            rows.push(vec![x, y]);
            rows.push(vec![x + 0.05, y - 0.05]);
            labels.push(k);
            labels.push(k);
        }
        let data = FeatureSet::new(2, 93, labels, rows).unwrap();
        let params = SvmParams {
            c: 10.0,
            gamma: Some(2.0),
            max_passes: 200,
            ..SvmParams::default()
        };
        let m = ovo_train(&data, &params).unwrap();
        assert_eq!(m.machines.len(), 93 * 92 / 2);
        assert_eq!(m.class_count, 93);
    }

    #[test]
    fn model_file_roundtrip_preserves_predictions() {
        let dir = tempfile::tempdir().unwrap();
        let data = blob_set();
        let m = ovo_train(
            &data,
            &SvmParams {
                c: 10.0,
                gamma: Some(0.5),
                ..SvmParams::default()
            },
        )
        .unwrap();
        let path = dir.path().join("model.svm");
        m.save(&path).unwrap();
        let back = SVMMulti::load(&path).unwrap();
        assert_eq!(back.class_count, m.class_count);
        assert_eq!(back.machines.len(), m.machines.len());
        for row in &data.rows {
            assert_eq!(ovo_predict(&m, row).unwrap(), ovo_predict(&back, row).unwrap());
        }
        // exact float round-trip through the text format
        assert_eq!(m, back);
    }
}
