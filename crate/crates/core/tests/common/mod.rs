//! Brute-force oracles kept deliberately independent of the library's
//! implementation paths: runs are enumerated as explicit cell lists,
//! shadows accumulate hash sets per pixel, gradients come from central
//! finite differences and the SVM dual is maximized by a refining grid
//! search.

#![allow(dead_code)]

use std::collections::HashSet;

use glyphrec::mlp::MLPModel;
use glyphrec::raster::{BinaryImage, Rect};
use glyphrec::svm::rbf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random binary image with roughly `density` black pixels.
pub fn random_image(h: usize, w: usize, density: f64, seed: u64) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..h * w).map(|_| rng.random::<f64>() < density).collect();
    BinaryImage::new(h, w, data).unwrap()
}

/// Seeded random sub-rectangle of an image.
pub fn random_rect(h: usize, w: usize, seed: u64) -> Rect {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = rng.random_range(0..h);
    let bottom = rng.random_range(top..h);
    let left = rng.random_range(0..w);
    let right = rng.random_range(left..w);
    Rect::new(top, left, bottom, right).unwrap()
}

// ---------------------------------------------------------------------
// Longest-run oracle
// ---------------------------------------------------------------------

type Cell = (usize, usize);

/// All cells of every full scan line of an image in one direction.
fn parent_lines(h: usize, w: usize, dir: usize) -> Vec<Vec<Cell>> {
    let mut lines = Vec::new();
    match dir {
        0 => {
            for r in 0..h {
                lines.push((0..w).map(|c| (r, c)).collect());
            }
        }
        1 => {
            for c in 0..w {
                lines.push((0..h).map(|r| (r, c)).collect());
            }
        }
        2 => {
            // constant r - c, stepping down-right
            for k in 0..h + w - 1 {
                let (mut r, mut c) = if k >= w - 1 { (k - (w - 1), 0) } else { (0, w - 1 - k) };
                let mut line = Vec::new();
                while r < h && c < w {
                    line.push((r, c));
                    r += 1;
                    c += 1;
                }
                lines.push(line);
            }
        }
        _ => {
            // constant r + c, stepping down-left
            for k in 0..h + w - 1 {
                let (mut r, mut c) = if k < w { (0, k as isize) } else { (k - (w - 1), (w - 1) as isize) };
                let mut line = Vec::new();
                while r < h && c >= 0 {
                    line.push((r, c as usize));
                    r += 1;
                    c -= 1;
                }
                lines.push(line);
            }
        }
    }
    lines
}

/// Every maximal black run of the image in one direction, as explicit
/// cell lists.
fn maximal_runs(img: &BinaryImage, dir: usize) -> Vec<Vec<Cell>> {
    let mut runs = Vec::new();
    for line in parent_lines(img.height, img.width, dir) {
        let mut current: Vec<Cell> = Vec::new();
        for &(r, c) in &line {
            if img.get(r, c) {
                current.push((r, c));
            } else if !current.is_empty() {
                runs.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            runs.push(current);
        }
    }
    runs
}

/// Scan-line cell lists of a region, in the same direction encoding.
fn region_lines(bounds: Rect, dir: usize) -> Vec<Vec<Cell>> {
    parent_lines(bounds.height(), bounds.width(), dir)
        .into_iter()
        .map(|line| {
            line.into_iter()
                .map(|(r, c)| (bounds.top + r, bounds.left + c))
                .collect()
        })
        .collect()
}

/// Brute-force longest-run sums: for each region line, the longest
/// maximal parent run sharing at least one cell with it.
pub fn oracle_run_sums(img: &BinaryImage, bounds: Rect) -> [usize; 4] {
    let mut sums = [0usize; 4];
    for dir in 0..4 {
        let runs = maximal_runs(img, dir);
        for line in region_lines(bounds, dir) {
            let segment: HashSet<Cell> = line.into_iter().collect();
            let best = runs
                .iter()
                .filter(|run| run.iter().any(|cell| segment.contains(cell)))
                .map(Vec::len)
                .max()
                .unwrap_or(0);
            sums[dir] += best;
        }
    }
    sums
}

// ---------------------------------------------------------------------
// Shadow oracle
// ---------------------------------------------------------------------

fn oracle_octant(r: usize, c: usize, h: usize, w: usize) -> usize {
    let (rf, cf) = (r as f64, c as f64);
    let (hm, wm) = (h as f64 - 1.0, w as f64 - 1.0);
    let top = rf <= hm / 2.0;
    let left = cf <= wm / 2.0;
    let above_main = rf * wm <= cf * hm;
    let above_anti = rf * wm + cf * hm <= hm * wm;
    if top && left {
        if above_main {
            0
        } else {
            7
        }
    } else if top {
        if above_anti {
            1
        } else {
            2
        }
    } else if !left {
        if above_main {
            3
        } else {
            4
        }
    } else if above_anti {
        6
    } else {
        5
    }
}

fn oracle_projection(octant: usize, side: usize, r: i64, c: i64) -> i64 {
    // side 0 = box edge, 1 = midline, 2 = diagonal
    let horizontal_edge = matches!(octant, 0 | 1 | 4 | 5);
    match side {
        0 => {
            if horizontal_edge {
                c
            } else {
                r
            }
        }
        1 => {
            if horizontal_edge {
                r
            } else {
                c
            }
        }
        _ => match octant {
            0 | 3 | 4 | 7 => r - c, // main-diagonal sides
            _ => r + c,             // anti-diagonal sides
        },
    }
}

/// Brute-force shadow counts: per (octant, side), hash sets of
/// projection indices over black pixels and over all pixels.
pub fn oracle_shadow_counts(img: &BinaryImage, bounds: Rect) -> (Vec<usize>, Vec<usize>) {
    let (h, w) = (bounds.height(), bounds.width());
    let mut covered: Vec<HashSet<i64>> = vec![HashSet::new(); 24];
    let mut total: Vec<HashSet<i64>> = vec![HashSet::new(); 24];
    for r in 0..h {
        for c in 0..w {
            let oct = oracle_octant(r, c, h, w);
            let black = img.get(bounds.top + r, bounds.left + c);
            for side in 0..3 {
                let idx = oracle_projection(oct, side, r as i64, c as i64);
                total[oct * 3 + side].insert(idx);
                if black {
                    covered[oct * 3 + side].insert(idx);
                }
            }
        }
    }
    (
        covered.iter().map(HashSet::len).collect(),
        total.iter().map(HashSet::len).collect(),
    )
}

// ---------------------------------------------------------------------
// MLP gradient oracle
// ---------------------------------------------------------------------

/// Central finite differences of E = 1/2 sum (t - o)^2 over every
/// weight, matching the layout of the model's weight arrays.
pub fn fd_gradient(
    model: &MLPModel,
    x: &[f64],
    targets: &[f64],
    step: f64,
) -> (Vec<f64>, Vec<f64>) {
    let energy = |m: &MLPModel| -> f64 {
        let (_, o) = m.forward(x).unwrap();
        0.5 * o
            .iter()
            .zip(targets)
            .map(|(ov, tv)| (tv - ov) * (tv - ov))
            .sum::<f64>()
    };
    let probe = |hidden: bool, i: usize| -> f64 {
        let mut plus = model.clone();
        let mut minus = model.clone();
        if hidden {
            plus.w_hidden[i] += step;
            minus.w_hidden[i] -= step;
        } else {
            plus.w_output[i] += step;
            minus.w_output[i] -= step;
        }
        (energy(&plus) - energy(&minus)) / (2.0 * step)
    };
    let g_hidden = (0..model.w_hidden.len()).map(|i| probe(true, i)).collect();
    let g_output = (0..model.w_output.len()).map(|i| probe(false, i)).collect();
    (g_hidden, g_output)
}

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, 1e-8)
pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-8))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------
// SVM dual oracle
// ---------------------------------------------------------------------

/// W(alpha) = sum alpha_i - 1/2 sum_ij y_i y_j alpha_i alpha_j K_ij
pub fn dual_objective(rows: &[Vec<f64>], labels: &[f64], alpha: &[f64], gamma: f64) -> f64 {
    let n = rows.len();
    let mut w = alpha.iter().sum::<f64>();
    for i in 0..n {
        if alpha[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if alpha[j] == 0.0 {
                continue;
            }
            let k = rbf(&rows[i], &rows[j], gamma).unwrap();
            w -= 0.5 * labels[i] * labels[j] * alpha[i] * alpha[j] * k;
        }
    }
    w
}

/// Maximize the dual by exhaustive grid search over the free
/// multipliers (the last one is eliminated through the equality
/// constraint), refining the grid around the incumbent. Returns the
/// best objective found.
pub fn grid_max_dual(rows: &[Vec<f64>], labels: &[f64], c: f64, gamma: f64) -> f64 {
    let n = rows.len();
    assert!(n >= 2);
    let dep = n - 1;
    let free: Vec<usize> = (0..n - 1).collect();
    let points_per_dim = 13usize;

    let mut centers = vec![c / 2.0; free.len()];
    let mut half_width = c / 2.0;
    let mut best_obj = f64::NEG_INFINITY;
    let mut best_alpha = vec![0.0; n];

    for _pass in 0..8 {
        let step = 2.0 * half_width / (points_per_dim - 1) as f64;
        let mut counter = vec![0usize; free.len()];
        loop {
            let mut alpha = vec![0.0f64; n];
            let mut feasible = true;
            for (d, &idx) in free.iter().enumerate() {
                let v = centers[d] - half_width + counter[d] as f64 * step;
                let v = v.clamp(0.0, c);
                alpha[idx] = v;
            }
            let sum_free: f64 = free.iter().map(|&i| labels[i] * alpha[i]).sum();
            let mut dep_v = -labels[dep] * sum_free;
            if dep_v < -1e-9 || dep_v > c + 1e-9 {
                feasible = false;
            } else {
                dep_v = dep_v.clamp(0.0, c);
            }
            if feasible {
                alpha[dep] = dep_v;
                let obj = dual_objective(rows, labels, &alpha, gamma);
                if obj > best_obj {
                    best_obj = obj;
                    best_alpha = alpha;
                }
            }
            // mixed-radix increment
            let mut d = 0;
            loop {
                if d == free.len() {
                    break;
                }
                counter[d] += 1;
                if counter[d] < points_per_dim {
                    break;
                }
                counter[d] = 0;
                d += 1;
            }
            if d == free.len() {
                break;
            }
        }
        for (d, &idx) in free.iter().enumerate() {
            centers[d] = best_alpha[idx];
        }
        half_width = step;
    }
    best_obj
}

/// Largest KKT violation over all training points given a solution:
/// zero multipliers want margin >= 1, bound ones <= 1, free ones == 1.
pub fn kkt_violation(
    rows: &[Vec<f64>],
    labels: &[f64],
    alpha: &[f64],
    bias: f64,
    c: f64,
    gamma: f64,
) -> f64 {
    let n = rows.len();
    let eps = 1e-8 * c.max(1.0);
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut f = bias;
        for j in 0..n {
            if alpha[j] > 0.0 {
                f += labels[j] * alpha[j] * rbf(&rows[j], &rows[i], gamma).unwrap();
            }
        }
        let margin = labels[i] * f;
        let violation = if alpha[i] <= eps {
            (1.0 - margin).max(0.0)
        } else if alpha[i] >= c - eps {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(violation);
    }
    worst
}

/// Seeded random small SVM instance with both labels present.
pub fn random_svm_instance(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 + (seed as usize) % 4;
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(vec![
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ]);
        labels.push(match i {
            0 => 1.0,
            1 => -1.0,
            _ => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        });
    }
    let c = if seed % 2 == 0 { 1.0 } else { 10.0 };
    let gamma = if (seed / 2) % 2 == 0 { 0.5 } else { 1.5 };
    (rows, labels, c, gamma)
}
