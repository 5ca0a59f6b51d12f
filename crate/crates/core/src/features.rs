//! Center-of-gravity quad-tree partitioning and the shadow /
//! longest-run feature extractors.
//!
//! The default configuration builds a depth-1 tree for shadow features
//! (5 nodes x 24 values) and a depth-2 tree for longest-run features
//! (21 nodes x 4 values), a 204-element vector per glyph.
//!
//! # Shadow geometry
//!
//! A region is cut into eight triangular octants by its horizontal
//! midline, vertical midline and the two corner-to-corner diagonals.
//! Octants are numbered clockwise starting from the upper half of the
//! upper-left quadrant. Every pixel belongs to exactly one octant;
//! boundary pixels resolve with integer sign tests: the middle row goes
//! to the top half, the middle column to the left half, and pixels on a
//! diagonal go to the octant nearer the top (upper quadrants) or listed
//! first in clockwise order (lower quadrants).
//!
//! Each octant contributes one value per side, in the order box edge,
//! midline, diagonal. A side's value is the number of distinct
//! projection indices covered by the octant's black pixels divided by
//! the number of indices its pixels could cover at all. Horizontal
//! sides project to the column index, vertical sides to the row index,
//! main-diagonal sides to `row - col` and anti-diagonal sides to
//! `row + col`. An octant that owns no pixels (possible only in
//! degenerate 1- or 2-pixel-wide regions) contributes zeros.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{bounding_box, crop, BinaryImage, Dataset, Rect};

/// A rectangular view into a parent image. Longest-run features may
/// look outside the rectangle (but never outside the parent).
#[derive(Debug, Clone, Copy)]
pub struct Region<'a> {
    image: &'a BinaryImage,
    bounds: Rect,
}

impl<'a> Region<'a> {
    pub fn new(image: &'a BinaryImage, bounds: Rect) -> Result<Self> {
        if !bounds.fits_in(image.height, image.width) {
            return Err(Error::OutOfBounds {
                top: bounds.top,
                left: bounds.left,
                bottom: bounds.bottom,
                right: bounds.right,
                height: image.height,
                width: image.width,
            });
        }
        Ok(Region { image, bounds })
    }

    /// View covering the whole image.
    pub fn full(image: &'a BinaryImage) -> Self {
        Region {
            image,
            bounds: Rect::full(image.height, image.width),
        }
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn image(&self) -> &'a BinaryImage {
        self.image
    }

    pub fn height(&self) -> usize {
        self.bounds.height()
    }

    pub fn width(&self) -> usize {
        self.bounds.width()
    }

    /// Black test in region-relative coordinates.
    #[inline]
    pub fn is_black(&self, rel_row: usize, rel_col: usize) -> bool {
        self.image
            .get(self.bounds.top + rel_row, self.bounds.left + rel_col)
    }
}

/// Center of gravity of the region's black pixels in region-relative
/// real coordinates (row, col). An empty region yields its geometric
/// center.
pub fn center_of_gravity(r: &Region) -> (f64, f64) {
    let (h, w) = (r.height(), r.width());
    let mut sum_r = 0usize;
    let mut sum_c = 0usize;
    let mut n = 0usize;
    for rr in 0..h {
        for cc in 0..w {
            if r.is_black(rr, cc) {
                sum_r += rr;
                sum_c += cc;
                n += 1;
            }
        }
    }
    if n == 0 {
        ((h - 1) as f64 / 2.0, (w - 1) as f64 / 2.0)
    } else {
        (sum_r as f64 / n as f64, sum_c as f64 / n as f64)
    }
}

/// Quad-tree node: a region recursively split at the CG of its black
/// pixels. `children` holds exactly 0 or 4 nodes.
#[derive(Debug, Clone)]
pub struct QuadTree {
    pub bounds: Rect,
    /// CG in region-relative (row, col) coordinates.
    pub cg: (f64, f64),
    pub children: Vec<QuadTree>,
    pub depth_below: usize,
}

impl QuadTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(QuadTree::node_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(QuadTree::leaf_count).sum()
        }
    }

    /// Nodes in breadth-first order, root first.
    pub fn breadth_first(&self) -> Vec<&QuadTree> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            for child in &out[i].children {
                out.push(child);
            }
            i += 1;
        }
        out
    }
}

/// Recursively split a region into four quadrants at the CG of its
/// black pixels: rows `0..=floor(cg_row)` form the upper half and
/// columns `0..=floor(cg_col)` the left half. A split that would leave
/// a side empty is clamped so every child keeps at least one row and
/// one column; 1-pixel-wide sides make all children alias the same
/// slab, keeping the node count fixed at every depth.
pub fn quad_partition(r: &Region, depth: usize) -> QuadTree {
    let cg = center_of_gravity(r);
    let b = r.bounds();
    if depth == 0 {
        return QuadTree {
            bounds: b,
            cg,
            children: Vec::new(),
            depth_below: 0,
        };
    }
    let (h, w) = (b.height(), b.width());
    let rows = if h == 1 {
        [(b.top, b.top), (b.top, b.top)]
    } else {
        let split = (cg.0.floor() as usize).min(h - 2);
        [(b.top, b.top + split), (b.top + split + 1, b.bottom)]
    };
    let cols = if w == 1 {
        [(b.left, b.left), (b.left, b.left)]
    } else {
        let split = (cg.1.floor() as usize).min(w - 2);
        [(b.left, b.left + split), (b.left + split + 1, b.right)]
    };
    let mut children = Vec::with_capacity(4);
    for &(top, bottom) in &rows {
        for &(left, right) in &cols {
            let child = Region {
                image: r.image,
                bounds: Rect {
                    top,
                    left,
                    bottom,
                    right,
                },
            };
            children.push(quad_partition(&child, depth - 1));
        }
    }
    QuadTree {
        bounds: b,
        cg,
        children,
        depth_below: depth,
    }
}

// ---------------------------------------------------------------------
// Longest-run features
// ---------------------------------------------------------------------

fn count_black_ray(img: &BinaryImage, mut r: isize, mut c: isize, dr: isize, dc: isize) -> usize {
    let mut n = 0;
    while img.get_checked(r, c) {
        n += 1;
        r += dr;
        c += dc;
    }
    n
}

/// Longest black run touching one scan line of a region. Runs that
/// reach the segment boundary keep growing through the parent image.
fn max_run_on_line(
    img: &BinaryImage,
    start_r: usize,
    start_c: usize,
    dr: isize,
    dc: isize,
    len: usize,
) -> usize {
    let cell = |i: usize| {
        (
            start_r as isize + dr * i as isize,
            start_c as isize + dc * i as isize,
        )
    };
    let mut best = 0usize;
    let mut i = 0usize;
    while i < len {
        let (r, c) = cell(i);
        if !img.get(r as usize, c as usize) {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < len && {
            let (r, c) = cell(i);
            img.get(r as usize, c as usize)
        } {
            i += 1;
        }
        let mut run_len = i - run_start;
        if run_start == 0 {
            let (r, c) = cell(0);
            run_len += count_black_ray(img, r - dr, c - dc, -dr, -dc);
        }
        if i == len {
            let (r, c) = cell(len);
            run_len += count_black_ray(img, r, c, dr, dc);
        }
        best = best.max(run_len);
    }
    best
}

/// Raw per-direction sums of longest runs, before normalization, in
/// the order row, column, main-diagonal, anti-diagonal.
pub fn longest_run_sums(r: &Region) -> [usize; 4] {
    let b = r.bounds();
    let img = r.image();
    let (h, w) = (b.height(), b.width());
    let mut sums = [0usize; 4];
    for y in b.top..=b.bottom {
        sums[0] += max_run_on_line(img, y, b.left, 0, 1, w);
    }
    for x in b.left..=b.right {
        sums[1] += max_run_on_line(img, b.top, x, 1, 0, h);
    }
    for k in 0..h + w - 1 {
        // main diagonal: steps down-right
        let (mr, mc) = if k >= w - 1 { (k - (w - 1), 0) } else { (0, w - 1 - k) };
        let mlen = (h - mr).min(w - mc);
        sums[2] += max_run_on_line(img, b.top + mr, b.left + mc, 1, 1, mlen);
        // anti diagonal: steps down-left
        let (ar, ac) = if k < w { (0, k) } else { (k - (w - 1), w - 1) };
        let alen = (h - ar).min(ac + 1);
        sums[3] += max_run_on_line(img, b.top + ar, b.left + ac, 1, -1, alen);
    }
    sums
}

/// Longest-run features: each direction's sum of per-line longest runs
/// divided by the region area h*w. Runs extending past the region can
/// push a sum above h*w, so values clamp to 1.0.
pub fn longest_run_features(r: &Region) -> [f64; 4] {
    let area = (r.height() * r.width()) as f64;
    let sums = longest_run_sums(r);
    let mut out = [0.0f64; 4];
    for (o, &s) in out.iter_mut().zip(sums.iter()) {
        *o = (s as f64 / area).min(1.0);
    }
    out
}

// ---------------------------------------------------------------------
// Shadow features
// ---------------------------------------------------------------------

/// Which quantity a pixel projects to for one octant side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Horizontal sides: column index.
    Col,
    /// Vertical sides: row index.
    Row,
    /// Main-diagonal sides: row - col.
    Diff,
    /// Anti-diagonal sides: row + col.
    Sum,
}

/// Per octant (clockwise from the upper-left-upper one), the projection
/// of its box-edge, midline and diagonal side, in that order.
pub const OCTANT_SIDES: [[Projection; 3]; 8] = [
    [Projection::Col, Projection::Row, Projection::Diff],
    [Projection::Col, Projection::Row, Projection::Sum],
    [Projection::Row, Projection::Col, Projection::Sum],
    [Projection::Row, Projection::Col, Projection::Diff],
    [Projection::Col, Projection::Row, Projection::Diff],
    [Projection::Col, Projection::Row, Projection::Sum],
    [Projection::Row, Projection::Col, Projection::Sum],
    [Projection::Row, Projection::Col, Projection::Diff],
];

/// Octant of a region-relative pixel; see the module docs for the
/// numbering and tie rules.
pub fn octant_of(r: usize, c: usize, h: usize, w: usize) -> usize {
    let top = 2 * r < h; // the exact middle row counts as top
    let left = 2 * c < w;
    let above_main = r * (w - 1) <= c * (h - 1);
    let above_anti = r * (w - 1) + c * (h - 1) <= (h - 1) * (w - 1);
    match (top, left) {
        (true, true) => {
            if above_main {
                0
            } else {
                7
            }
        }
        (true, false) => {
            if above_anti {
                1
            } else {
                2
            }
        }
        (false, false) => {
            if above_main {
                3
            } else {
                4
            }
        }
        (false, true) => {
            if above_anti {
                6
            } else {
                5
            }
        }
    }
}

#[inline]
fn projection_index(p: Projection, r: usize, c: usize, w: usize) -> usize {
    match p {
        Projection::Col => c,
        Projection::Row => r,
        Projection::Diff => r + (w - 1) - c,
        Projection::Sum => r + c,
    }
}

#[inline]
fn projection_size(p: Projection, h: usize, w: usize) -> usize {
    match p {
        Projection::Col => w,
        Projection::Row => h,
        Projection::Diff | Projection::Sum => h + w - 1,
    }
}

/// Integer numerators/denominators behind [`shadow_features`]:
/// `covered[k]` counts distinct projection indices hit by black pixels
/// of side `k = octant * 3 + side`, `total[k]` counts the indices the
/// octant's pixels span at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowCounts {
    pub covered: [usize; 24],
    pub total: [usize; 24],
}

pub fn shadow_counts(r: &Region) -> ShadowCounts {
    let (h, w) = (r.height(), r.width());
    let mut covered_sets: Vec<Vec<bool>> = Vec::with_capacity(24);
    let mut total_sets: Vec<Vec<bool>> = Vec::with_capacity(24);
    for sides in OCTANT_SIDES.iter() {
        for &p in sides {
            let size = projection_size(p, h, w);
            covered_sets.push(vec![false; size]);
            total_sets.push(vec![false; size]);
        }
    }
    for rr in 0..h {
        for cc in 0..w {
            let oct = octant_of(rr, cc, h, w);
            let black = r.is_black(rr, cc);
            for (side, &p) in OCTANT_SIDES[oct].iter().enumerate() {
                let k = oct * 3 + side;
                let idx = projection_index(p, rr, cc, w);
                total_sets[k][idx] = true;
                if black {
                    covered_sets[k][idx] = true;
                }
            }
        }
    }
    let mut counts = ShadowCounts {
        covered: [0; 24],
        total: [0; 24],
    };
    for k in 0..24 {
        counts.covered[k] = covered_sets[k].iter().filter(|&&b| b).count();
        counts.total[k] = total_sets[k].iter().filter(|&&b| b).count();
    }
    counts
}

/// The 24 shadow features of a region: per octant and side, covered
/// projection indices over attainable ones.
pub fn shadow_features(r: &Region) -> [f64; 24] {
    let counts = shadow_counts(r);
    let mut out = [0.0f64; 24];
    for k in 0..24 {
        if counts.total[k] > 0 {
            out[k] = counts.covered[k] as f64 / counts.total[k] as f64;
        }
    }
    out
}

// ---------------------------------------------------------------------
// Full vector assembly
// ---------------------------------------------------------------------

/// Quad-tree depths for the two feature families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureConfig {
    pub shadow_depth: usize,
    pub run_depth: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            shadow_depth: 1,
            run_depth: 2,
        }
    }
}

fn tree_nodes(depth: usize) -> usize {
    (0..=depth).map(|i| 4usize.pow(i as u32)).sum()
}

impl FeatureConfig {
    /// 24 values per shadow-tree node plus 4 per run-tree node.
    pub fn feature_len(&self) -> usize {
        24 * tree_nodes(self.shadow_depth) + 4 * tree_nodes(self.run_depth)
    }
}

/// Describes the fixed (node, family) ordering of a feature vector:
/// all shadow-tree nodes in breadth-first order, 24 values each, then
/// all run-tree nodes in breadth-first order, 4 values each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureLayout {
    pub config: FeatureConfig,
}

impl FeatureLayout {
    pub fn len(&self) -> usize {
        self.config.feature_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shadow_len(&self) -> usize {
        24 * tree_nodes(self.config.shadow_depth)
    }

    pub fn run_len(&self) -> usize {
        4 * tree_nodes(self.config.run_depth)
    }

    /// Human-readable name of one vector slot.
    pub fn describe(&self, index: usize) -> String {
        const SIDES: [&str; 3] = ["edge", "midline", "diagonal"];
        const DIRS: [&str; 4] = ["row", "column", "main-diagonal", "anti-diagonal"];
        if index < self.shadow_len() {
            let node = index / 24;
            let oct = (index % 24) / 3;
            let side = index % 3;
            format!("shadow[node={node},octant={oct},side={}]", SIDES[side])
        } else {
            let rel = index - self.shadow_len();
            let node = rel / 4;
            format!("run[node={node},dir={}]", DIRS[rel % 4])
        }
    }
}

/// A fixed-length feature vector with every value in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: FeatureLayout,
}

/// Extract the full feature vector of a glyph: crop to the black-pixel
/// bounding box, build one quad-tree per family, and emit per-node
/// features in breadth-first order.
pub fn extract_feature_vector(img: &BinaryImage, cfg: FeatureConfig) -> Result<FeatureVector> {
    let glyph = crop(img, bounding_box(img)?)?;
    let root = Region::full(&glyph);
    let mut values = Vec::with_capacity(cfg.feature_len());
    let shadow_tree = quad_partition(&root, cfg.shadow_depth);
    for node in shadow_tree.breadth_first() {
        let region = Region::new(&glyph, node.bounds)?;
        values.extend_from_slice(&shadow_features(&region));
    }
    let run_tree = quad_partition(&root, cfg.run_depth);
    for node in run_tree.breadth_first() {
        let region = Region::new(&glyph, node.bounds)?;
        values.extend_from_slice(&longest_run_features(&region));
    }
    debug_assert_eq!(values.len(), cfg.feature_len());
    Ok(FeatureVector {
        values,
        layout: FeatureLayout { config: cfg },
    })
}

// ---------------------------------------------------------------------
// Feature tables and their on-disk formats
// ---------------------------------------------------------------------

/// Extracted features for a whole dataset: one row per sample plus its
/// label.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub dim: usize,
    pub class_count: usize,
    pub labels: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureSet {
    pub fn new(
        dim: usize,
        class_count: usize,
        labels: Vec<usize>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: rows.len(),
            });
        }
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        for &l in &labels {
            if l >= class_count {
                return Err(Error::LabelOutOfRange {
                    label: l,
                    classes: class_count,
               });
            }
        }
        Ok(FeatureSet {
            dim,
            class_count,
            labels,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Remap every label through `map` (new label = map[old]) and shrink
    /// the class count to `merged_count`.
    pub fn relabeled(&self, map: &[usize], merged_count: usize) -> Result<FeatureSet> {
        let mut labels = Vec::with_capacity(self.labels.len());
        for &l in &self.labels {
            let new = *map.get(l).ok_or(Error::LabelOutOfRange {
                label: l,
                classes: map.len(),
            })?;
            labels.push(new);
        }
        FeatureSet::new(self.dim, merged_count, labels, self.rows.clone())
    }

    /// Dense CSV: optional `# key = value` comment lines, then one
    /// `label,v0,...` row per sample with 10 significant digits.
    pub fn write_csv(&self, path: &Path, comments: &[(String, String)]) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "# dim = {}", self.dim)?;
        writeln!(w, "# classes = {}", self.class_count)?;
        for (k, v) in comments {
            writeln!(w, "# {k} = {v}")?;
        }
        for (label, row) in self.labels.iter().zip(&self.rows) {
            write!(w, "{label}")?;
            for v in row {
                write!(w, ",{v:.9e}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)?;
        let mut declared_classes = 0usize;
        let mut labels = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    if k.trim() == "classes" {
                        declared_classes = v.trim().parse().unwrap_or(0);
                    }
                }
                continue;
            }
            let mut parts = line.split(',');
            let label: usize = parts
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| Error::format(&display, format!("line {}: bad label", lineno + 1)))?;
            let row: Vec<f64> = parts
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::format(&display, format!("line {}: bad value", lineno + 1)))?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::format(
                        &display,
                        format!("line {}: ragged row width", lineno + 1),
                    ));
                }
            }
            labels.push(label);
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::format(&display, "no feature rows"));
        }
        let dim = rows[0].len();
        let classes = declared_classes.max(labels.iter().max().map_or(0, |&m| m + 1));
        FeatureSet::new(dim, classes, labels, rows)
    }

    /// Sparse text rows `label index:value ...` with 1-based indices and
    /// exact zeros omitted, as common SVM tools expect.
    pub fn write_sparse(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "# dim = {}", self.dim)?;
        writeln!(w, "# classes = {}", self.class_count)?;
        for (label, row) in self.labels.iter().zip(&self.rows) {
            write!(w, "{label}")?;
            for (i, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    write!(w, " {}:{v:.9e}", i + 1)?;
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_sparse(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)?;
        let mut declared_dim = 0usize;
        let mut declared_classes = 0usize;
        let mut labels = Vec::new();
        let mut sparse_rows: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut max_index = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    match k.trim() {
                        "dim" => declared_dim = v.trim().parse().unwrap_or(0),
                        "classes" => declared_classes = v.trim().parse().unwrap_or(0),
                        _ => {}
                    }
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let label: usize = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::format(&display, format!("line {}: bad label", lineno + 1)))?;
            let mut row = Vec::new();
            for tok in parts {
                let (i, v) = tok.split_once(':').ok_or_else(|| {
                    Error::format(&display, format!("line {}: expected index:value", lineno + 1))
                })?;
                let idx: usize = i.parse().map_err(|_| {
                    Error::format(&display, format!("line {}: bad index {i:?}", lineno + 1))
                })?;
                if idx == 0 {
                    return Err(Error::format(
                        &display,
                        format!("line {}: indices are 1-based", lineno + 1),
                    ));
                }
                let val: f64 = v.parse().map_err(|_| {
                    Error::format(&display, format!("line {}: bad value {v:?}", lineno + 1))
                })?;
                max_index = max_index.max(idx);
                row.push((idx - 1, val));
            }
            labels.push(label);
            sparse_rows.push(row);
        }
        if sparse_rows.is_empty() {
            return Err(Error::format(&display, "no feature rows"));
        }
        let dim = declared_dim.max(max_index);
        let mut rows = Vec::with_capacity(sparse_rows.len());
        for sparse in sparse_rows {
            let mut row = vec![0.0f64; dim];
            for (i, v) in sparse {
                row[i] = v;
            }
            rows.push(row);
        }
        let classes = declared_classes.max(labels.iter().max().map_or(0, |&m| m + 1));
        FeatureSet::new(dim, classes, labels, rows)
    }

    /// Read a feature file in either format, sniffing for `index:value`
    /// tokens.
    pub fn read_auto(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let sparse = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.contains(':'));
        if sparse {
            Self::read_sparse(path)
        } else {
            Self::read_csv(path)
        }
    }
}

/// Extract features for every sample of a dataset.
pub fn extract_dataset(d: &Dataset, cfg: FeatureConfig) -> Result<FeatureSet> {
    let mut labels = Vec::with_capacity(d.len());
    let mut rows = Vec::with_capacity(d.len());
    for s in &d.samples {
        let fv = extract_feature_vector(&s.image, cfg)?;
        labels.push(s.label);
        rows.push(fv.values);
    }
    FeatureSet::new(cfg.feature_len(), d.class_count, labels, rows)
}
