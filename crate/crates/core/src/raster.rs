//! Image representation, binarization, bounding boxes, dataset manifests
//! and stratified train/test splitting.
//!
//! Images are row-major with `(row, col)` indexing from the top-left
//! corner. In a [`BinaryImage`] `true` is black, i.e. foreground ink.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Grayscale raster, one byte per pixel, 0 = darkest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub height: usize,
    pub width: usize,
    pub data: Vec<u8>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, data: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 || data.len() != height * width {
            return Err(Error::Invalid(format!(
                "gray image {}x{} needs {} pixels, got {}",
                height,
                width,
                height * width,
                data.len()
            )));
        }
        Ok(GrayImage {
            height,
            width,
            data,
        })
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }
}

/// Black/white raster; `true` means black (foreground).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    pub height: usize,
    pub width: usize,
    pub data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(height: usize, width: usize, data: Vec<bool>) -> Result<Self> {
        if height == 0 || width == 0 || data.len() != height * width {
            return Err(Error::Invalid(format!(
                "binary image {}x{} needs {} pixels, got {}",
                height,
                width,
                height * width,
                data.len()
            )));
        }
        Ok(BinaryImage {
            height,
            width,
            data,
        })
    }

    /// All-white image.
    pub fn blank(height: usize, width: usize) -> Self {
        BinaryImage {
            height,
            width,
            data: vec![false; height * width],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, black: bool) {
        self.data[row * self.width + col] = black;
    }

    /// Black pixel lookup that treats out-of-image coordinates as white.
    #[inline]
    pub fn get_checked(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.get(row as usize, col as usize)
    }

    pub fn black_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// Axis-aligned rectangle with inclusive pixel bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl Rect {
    pub fn new(top: usize, left: usize, bottom: usize, right: usize) -> Result<Self> {
        if top > bottom || left > right {
            return Err(Error::Invalid(format!(
                "degenerate rectangle ({top},{left})-({bottom},{right})"
            )));
        }
        Ok(Rect {
            top,
            left,
            bottom,
            right,
        })
    }

    /// Rectangle spanning a full `height`x`width` image.
    pub fn full(height: usize, width: usize) -> Self {
        Rect {
            top: 0,
            left: 0,
            bottom: height - 1,
            right: width - 1,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn fits_in(&self, height: usize, width: usize) -> bool {
        self.bottom < height && self.right < width
    }
}

/// Thresholding rule used by [`binarize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Black iff intensity < t.
    Fixed(u8),
    /// Threshold chosen by maximizing between-class variance of the
    /// 256-bin histogram.
    Otsu,
}

/// Otsu's threshold for a 256-bin histogram: the `t` (black iff
/// intensity < t) that maximizes between-class variance, lowest such `t`
/// on ties. A single-intensity histogram yields 0, i.e. an all-white
/// result.
pub fn otsu_threshold(hist: &[u64; 256]) -> u8 {
    let total: f64 = hist.iter().map(|&h| h as f64).sum();
    if total == 0.0 {
        return 0;
    }
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &h)| v as f64 * h as f64)
        .sum();

    let mut best_t = 0usize;
    let mut best_var = -1.0f64;
    let mut w_below = 0.0f64;
    let mut sum_below = 0.0f64;
    for t in 1..=255usize {
        // class "black" = intensities < t, "white" = intensities >= t
        w_below += hist[t - 1] as f64;
        sum_below += (t - 1) as f64 * hist[t - 1] as f64;
        let w_above = total - w_below;
        if w_below == 0.0 {
            continue;
        }
        if w_above == 0.0 {
            break;
        }
        let m_below = sum_below / w_below;
        let m_above = (sum_all - sum_below) / w_above;
        let var = w_below * w_above * (m_below - m_above) * (m_below - m_above);
        if var > best_var {
            best_var = var;
            best_t = t;
        }
    }
    if best_var <= 0.0 {
        // single populated bin: nothing to separate
        return 0;
    }
    best_t as u8
}

/// Binarize a gray image; a pixel is black iff its intensity is below
/// the (fixed or Otsu-derived) threshold.
pub fn binarize(img: &GrayImage, method: Threshold) -> BinaryImage {
    let t = match method {
        Threshold::Fixed(t) => t,
        Threshold::Otsu => {
            let mut hist = [0u64; 256];
            for &v in &img.data {
                hist[v as usize] += 1;
            }
            otsu_threshold(&hist)
        }
    };
    BinaryImage {
        height: img.height,
        width: img.width,
        data: img.data.iter().map(|&v| v < t).collect(),
    }
}

/// Smallest rectangle containing every black pixel.
pub fn bounding_box(img: &BinaryImage) -> Result<Rect> {
    let mut top = usize::MAX;
    let mut bottom = 0usize;
    let mut left = usize::MAX;
    let mut right = 0usize;
    for r in 0..img.height {
        for c in 0..img.width {
            if img.get(r, c) {
                top = top.min(r);
                bottom = bottom.max(r);
                left = left.min(c);
                right = right.max(c);
            }
        }
    }
    if top == usize::MAX {
        return Err(Error::EmptyImage);
    }
    Ok(Rect {
        top,
        left,
        bottom,
        right,
    })
}

/// Copy the pixels under `r` into a fresh image.
pub fn crop(img: &BinaryImage, r: Rect) -> Result<BinaryImage> {
    if !r.fits_in(img.height, img.width) {
        return Err(Error::OutOfBounds {
            top: r.top,
            left: r.left,
            bottom: r.bottom,
            right: r.right,
            height: img.height,
            width: img.width,
        });
    }
    let mut data = Vec::with_capacity(r.height() * r.width());
    for row in r.top..=r.bottom {
        let start = row * img.width + r.left;
        data.extend_from_slice(&img.data[start..start + r.width()]);
    }
    Ok(BinaryImage {
        height: r.height(),
        width: r.width(),
        data,
    })
}

/// One glyph image with its class label and provenance tag.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub image: BinaryImage,
    pub label: usize,
    pub source_id: String,
}

/// An ordered collection of labeled samples. Class counts need not be
/// equal.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub samples: Vec<LabeledSample>,
    pub class_count: usize,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>, class_count: usize) -> Result<Self> {
        for s in &samples {
            if s.label >= class_count {
                return Err(Error::LabelOutOfRange {
                    label: s.label,
                    classes: class_count,
                });
            }
        }
        Ok(Dataset {
            samples,
            class_count,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples per class, indexed by label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_count];
        for s in &self.samples {
            counts[s.label] += 1;
        }
        counts
    }
}

/// Exact rational in (0, 1), so per-class train counts floor without
/// floating-point surprises (6 samples at 2/3 must yield exactly 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num >= den {
            return Err(Error::Invalid(format!(
                "train fraction {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        Ok(Fraction { num, den })
    }

    /// floor(count * num / den)
    pub fn floor_of(&self, count: usize) -> usize {
        count * self.num as usize / self.den as usize
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::str::FromStr for Fraction {
    type Err = Error;

    /// Parses "2/3" style ratios.
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| Error::Invalid(format!("expected a ratio like 2/3, got {s:?}")))?;
        let num: u32 = n
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad ratio numerator {n:?}")))?;
        let den: u32 = d
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad ratio denominator {d:?}")))?;
        Fraction::new(num, den)
    }
}

/// Stratified split: per class with `c` samples, floor(c * fraction) go
/// to train and the remainder to test. Shuffling is driven entirely by
/// `seed`, so identical inputs give identical member lists.
pub fn split_train_test(
    d: &Dataset,
    train_fraction: Fraction,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let counts = d.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < 2 {
            return Err(Error::ClassTooSmall { class, count });
        }
    }

    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); d.class_count];
    for (i, s) in d.samples.iter().enumerate() {
        per_class[s.label].push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for indices in per_class.iter_mut() {
        indices.shuffle(&mut rng);
        let n_train = train_fraction.floor_of(indices.len());
        for (pos, &i) in indices.iter().enumerate() {
            if pos < n_train {
                train.push(d.samples[i].clone());
            } else {
                test.push(d.samples[i].clone());
            }
        }
    }

    Ok((
        Dataset {
            samples: train,
            class_count: d.class_count,
        },
        Dataset {
            samples: test,
            class_count: d.class_count,
        },
    ))
}

/// Independent stratified splits, one per seed. These are repeated
/// hold-out pairs, not a disjoint k-fold partition.
pub fn make_fold_pairs(
    d: &Dataset,
    train_fraction: Fraction,
    seeds: &[u64],
) -> Result<Vec<(Dataset, Dataset)>> {
    seeds
        .iter()
        .map(|&s| split_train_test(d, train_fraction, s))
        .collect()
}

// ---------------------------------------------------------------------
// PGM / PBM files and dataset manifests
// ---------------------------------------------------------------------

/// A decoded netpbm file: P5 grayscale or P4 bilevel.
#[derive(Debug, Clone)]
pub enum PnmImage {
    Gray(GrayImage),
    Binary(BinaryImage),
}

fn pnm_tokens(path: &str, bytes: &[u8], count: usize) -> Result<(Vec<usize>, usize)> {
    // Reads `count` whitespace-separated ASCII integers starting after
    // the magic, skipping '#' comments. Returns values and the offset of
    // the byte after the single whitespace that terminates the header.
    let mut values = Vec::with_capacity(count);
    let mut i = 2; // past magic
    while values.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(Error::format(path, "truncated netpbm header"));
        }
        let text = std::str::from_utf8(&bytes[start..i]).unwrap();
        values.push(
            text.parse::<usize>()
                .map_err(|_| Error::format(path, format!("bad header value {text:?}")))?,
        );
    }
    if i >= bytes.len() || !bytes[i].is_ascii_whitespace() {
        return Err(Error::format(path, "missing whitespace before pixel data"));
    }
    Ok((values, i + 1))
}

/// Read a binary PGM ("P5", maxval <= 255) or PBM ("P4") file.
pub fn read_pnm(path: &Path) -> Result<PnmImage> {
    let display = path.display().to_string();
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 2 {
        return Err(Error::format(&display, "not a netpbm file"));
    }
    match &bytes[..2] {
        b"P5" => {
            let (vals, offset) = pnm_tokens(&display, &bytes, 3)?;
            let (width, height, maxval) = (vals[0], vals[1], vals[2]);
            if maxval == 0 || maxval > 255 {
                return Err(Error::format(&display, format!("unsupported maxval {maxval}")));
            }
            let need = width * height;
            if bytes.len() < offset + need {
                return Err(Error::format(&display, "truncated pixel data"));
            }
            Ok(PnmImage::Gray(GrayImage::new(
                height,
                width,
                bytes[offset..offset + need].to_vec(),
            )?))
        }
        b"P4" => {
            let (vals, offset) = pnm_tokens(&display, &bytes, 2)?;
            let (width, height) = (vals[0], vals[1]);
            let row_bytes = width.div_ceil(8);
            if bytes.len() < offset + row_bytes * height {
                return Err(Error::format(&display, "truncated pixel data"));
            }
            let mut data = Vec::with_capacity(width * height);
            for r in 0..height {
                let row = &bytes[offset + r * row_bytes..offset + (r + 1) * row_bytes];
                for c in 0..width {
                    // PBM: set bit = black, most significant bit first
                    data.push(row[c / 8] & (0x80 >> (c % 8)) != 0);
                }
            }
            Ok(PnmImage::Binary(BinaryImage::new(height, width, data)?))
        }
        _ => Err(Error::format(&display, "unsupported magic (want P5 or P4)")),
    }
}

/// Load one image file as a binary raster, thresholding P5 input with
/// `method` and taking P4 input as-is.
pub fn read_image_as_binary(path: &Path, method: Threshold) -> Result<BinaryImage> {
    match read_pnm(path)? {
        PnmImage::Gray(g) => Ok(binarize(&g, method)),
        PnmImage::Binary(b) => Ok(b),
    }
}

/// Write a binary PGM (maxval 255). Black pixels become 0, white 255.
pub fn write_pgm(path: &Path, img: &BinaryImage) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", img.width, img.height)?;
    let bytes: Vec<u8> = img.data.iter().map(|&b| if b { 0u8 } else { 255u8 }).collect();
    w.write_all(&bytes)?;
    Ok(())
}

/// One `path,label` row of a dataset manifest.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    /// Path resolved against the manifest's directory.
    pub path: PathBuf,
    pub label: usize,
}

/// Read a `path,label` CSV manifest; paths are interpreted relative to
/// the manifest file itself.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "path,label" => {}
        _ => return Err(Error::format(&display, "manifest must start with `path,label`")),
    }
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (p, l) = line.rsplit_once(',').ok_or_else(|| {
            Error::format(&display, format!("line {}: expected `path,label`", lineno + 1))
        })?;
        let label: usize = l.trim().parse().map_err(|_| {
            Error::format(&display, format!("line {}: bad label {l:?}", lineno + 1))
        })?;
        entries.push(ManifestEntry {
            path: base.join(p.trim()),
            label,
        });
    }
    Ok(entries)
}

/// Write a manifest of (relative path, label) rows.
pub fn write_manifest(path: &Path, rows: &[(String, usize)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "path,label")?;
    for (p, l) in rows {
        writeln!(w, "{p},{l}")?;
    }
    Ok(())
}

/// Load every manifest entry into a [`Dataset`].
pub fn load_dataset(manifest: &Path, method: Threshold) -> Result<Dataset> {
    let entries = read_manifest(manifest)?;
    let mut samples = Vec::with_capacity(entries.len());
    let mut class_count = 0;
    for e in &entries {
        let image = read_image_as_binary(&e.path, method)?;
        class_count = class_count.max(e.label + 1);
        samples.push(LabeledSample {
            image,
            label: e.label,
            source_id: e.path.display().to_string(),
        });
    }
    Dataset::new(samples, class_count)
}
