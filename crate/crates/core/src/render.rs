//! Domain colouring: hue follows `arg f`, lightness or contour lines follow
//! `|f|`. Pixels are evaluated independently and in parallel.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gamma::{classify_un_tilde, gamma, RegionSpec};

pub type Rgb = [u8; 3];

/// Colour of pixels where the function fails or is not finite.
pub const ERROR_COLOR: Rgb = [128, 128, 128];

/// Darkening factor applied to contour pixels.
const CONTOUR_SHADE: f64 = 0.35;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Lightness `|f|²/(|f|² + 1)`: black at zeros, white at poles.
    Gradient,
    /// Fixed lightness with dark lines where `log₂|f|` crosses a level.
    Contour,
}

pub type Predicate = Arc<dyn Fn(Complex64) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct Overlay {
    pub predicate: Predicate,
    pub shade: Rgb,
    pub opacity: f64,
}

#[derive(Clone)]
pub struct RenderSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: usize,
    pub height: usize,
    pub style: Style,
    /// Sorted `log₂|f|` levels; `None` means every integer.
    pub contour_levels: Option<Vec<f64>>,
    pub overlays: Vec<Overlay>,
}

impl RenderSpec {
    pub fn new(window: (f64, f64, f64, f64), width: usize, height: usize, style: Style) -> Result<Self> {
        let (x_min, x_max, y_min, y_max) = window;
        if !(x_min < x_max && y_min < y_max) || !(x_max - x_min).is_finite() || !(y_max - y_min).is_finite() {
            return Err(Error::Parameter(format!("degenerate window {window:?}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!("resolution {width}x{height} must be positive")));
        }
        Ok(Self { x_min, x_max, y_min, y_max, width, height, style, contour_levels: None, overlays: Vec::new() })
    }

    pub fn with_levels(mut self, mut levels: Vec<f64>) -> Self {
        levels.sort_by(f64::total_cmp);
        self.contour_levels = Some(levels);
        self
    }

    pub fn with_overlay(mut self, predicate: Predicate, shade: Rgb, opacity: f64) -> Self {
        self.overlays.push(Overlay { predicate, shade, opacity });
        self
    }

    /// Centre of pixel `(i, j)`, row 0 at the top. Offsets are taken from the
    /// window centre so symmetric windows give exactly symmetric samples.
    pub fn pixel_point(&self, i: usize, j: usize) -> Complex64 {
        let cx = 0.5 * (self.x_min + self.x_max);
        let cy = 0.5 * (self.y_min + self.y_max);
        let dx = (self.x_max - self.x_min) / (2 * self.width) as f64;
        let dy = (self.y_max - self.y_min) / (2 * self.height) as f64;
        let ox = (2 * i + 1) as f64 - self.width as f64;
        let oy = self.height as f64 - (2 * j + 1) as f64;
        Complex64::new(cx + ox * dx, cy + oy * dy)
    }

    fn level_index(&self, log2_mod: f64) -> i64 {
        match &self.contour_levels {
            None => log2_mod.floor() as i64,
            Some(levels) => levels.partition_point(|&l| l <= log2_mod) as i64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Self { width, height, pixels: vec![fill; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, i: usize, j: usize) -> Rgb {
        self.pixels[j * self.width + i]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Rgb) {
        self.pixels[j * self.width + i] = c;
    }
}

fn hsl_to_rgb(hue: f64, lightness: f64) -> Rgb {
    let chroma = (1.0 - (2.0 * lightness - 1.0).abs()).max(0.0);
    let h6 = hue.rem_euclid(1.0) * 6.0;
    let x = chroma * (1.0 - (h6 % 2.0 - 1.0).abs());
    let (r, g, b) = match h6 as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = lightness - 0.5 * chroma;
    let to_u8 = |v: f64| ((v + m).clamp(0.0, 1.0) * 255.0).round() as u8;
    [to_u8(r), to_u8(g), to_u8(b)]
}

/// Hue of `w` on the colour circle, red at `arg w = 0`.
fn hue(w: Complex64) -> f64 {
    w.arg() / (2.0 * PI)
}

fn sample<F>(f: &F, z: Complex64) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    match f(z) {
        Ok(w) if w.re.is_finite() && w.im.is_finite() => Some(w),
        _ => None,
    }
}

/// Colours `f` over the window of `spec`, then applies its overlays.
pub fn domain_color<F>(f: F, spec: &RenderSpec) -> ImageBuffer
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let (w, h) = (spec.width, spec.height);
    let values: Vec<Option<Complex64>> =
        (0..w * h).into_par_iter().map(|k| sample(&f, spec.pixel_point(k % w, k / w))).collect();
    let mut pixels: Vec<Rgb> = match spec.style {
        Style::Gradient => values
            .par_iter()
            .map(|v| match v {
                Some(v) => {
                    let m2 = v.norm_sqr();
                    let l = if m2.is_finite() { m2 / (m2 + 1.0) } else { 1.0 };
                    hsl_to_rgb(hue(*v), l)
                }
                None => ERROR_COLOR,
            })
            .collect(),
        Style::Contour => {
            let levels: Vec<Option<i64>> = values
                .par_iter()
                .map(|v| v.filter(|v| v.norm() > 0.0).map(|v| spec.level_index(v.norm().log2())))
                .collect();
            (0..w * h)
                .into_par_iter()
                .map(|k| {
                    let Some(v) = values[k] else { return ERROR_COLOR };
                    let (i, j) = (k % w, k / w);
                    let here = levels[k];
                    let right = (i + 1 < w).then(|| levels[k + 1]);
                    let below = (j + 1 < h).then(|| levels[k + w]);
                    let crossing = [right, below].into_iter().flatten().any(|n| n != here);
                    let l = if crossing { 0.5 * CONTOUR_SHADE } else { 0.5 };
                    hsl_to_rgb(hue(v), l)
                })
                .collect()
        }
    };
    for o in &spec.overlays {
        blend_where(&mut pixels, spec, &o.predicate, o.shade, o.opacity);
    }
    ImageBuffer { width: w, height: h, pixels }
}

fn blend_where(pixels: &mut [Rgb], spec: &RenderSpec, predicate: &Predicate, shade: Rgb, opacity: f64) {
    let a = opacity.clamp(0.0, 1.0);
    let w = spec.width;
    pixels.par_iter_mut().enumerate().for_each(|(k, p)| {
        if predicate(spec.pixel_point(k % w, k / w)) {
            for c in 0..3 {
                p[c] = (f64::from(p[c]) * (1.0 - a) + f64::from(shade[c]) * a).round() as u8;
            }
        }
    });
}

/// Blends the pixels whose centres satisfy `predicate` toward `shade`.
pub fn overlay_region(
    img: &ImageBuffer,
    spec: &RenderSpec,
    predicate: &Predicate,
    shade: Rgb,
    opacity: f64,
) -> Result<ImageBuffer> {
    if img.width != spec.width || img.height != spec.height {
        return Err(Error::DimensionMismatch { expected: spec.width * spec.height, got: img.width * img.height });
    }
    let mut out = img.clone();
    blend_where(&mut out.pixels, spec, predicate, shade, opacity);
    Ok(out)
}

/// Writes a lossless PNG.
pub fn write_image(img: &ImageBuffer, path: &Path) -> Result<()> {
    let raw: Vec<u8> = img.pixels.iter().flatten().copied().collect();
    let buf = image::RgbImage::from_raw(img.width as u32, img.height as u32, raw)
        .ok_or(Error::DimensionMismatch { expected: img.width * img.height * 3, got: img.pixels.len() * 3 })?;
    buf.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

pub fn read_image(path: &Path) -> Result<ImageBuffer> {
    let buf = image::open(path)?.to_rgb8();
    let (w, h) = (buf.width() as usize, buf.height() as usize);
    let pixels = buf.pixels().map(|p| p.0).collect();
    Ok(ImageBuffer { width: w, height: h, pixels })
}

/// Boolean pixel mask over a render window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn from_predicate(spec: &RenderSpec, predicate: &Predicate) -> Self {
        let w = spec.width;
        let bits = (0..w * spec.height).into_par_iter().map(|k| predicate(spec.pixel_point(k % w, k / w))).collect();
        Self { width: w, height: spec.height, bits }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of 4-connected components.
    pub fn components(&self) -> usize {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; w * h];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.bits[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (i, j) = (k % w, k / w);
                let mut visit = |n: usize| {
                    if self.bits[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                };
                if i > 0 {
                    visit(k - 1);
                }
                if i + 1 < w {
                    visit(k + 1);
                }
                if j > 0 {
                    visit(k - w);
                }
                if j + 1 < h {
                    visit(k + w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }
}

/// Sector radius and aperture of the region overlay figure.
pub const REGION_FIGURE_RADIUS: f64 = 2.0 / 3.0;
pub const REGION_FIGURE_ALPHA: f64 = 14.0 * PI / 30.0;

/// Window of the region overlay figure, centred near the critical point of `Γ`
/// and symmetric about the real axis.
pub const REGION_FIGURE_WINDOW: (f64, f64, f64, f64) = (-5.5, 8.5, -7.0, 7.0);

/// `Γ` in contour style with `S^∞(R, α)` shaded white and `Ũ_n` black.
/// Returns the image and the `Ũ_n` mask. An odd height puts a pixel row on
/// the real axis, where `Ũ_0` is pinched to a line.
pub fn region_figure(width: usize, height: usize, n: i64) -> Result<(ImageBuffer, Mask)> {
    let region = RegionSpec::new(REGION_FIGURE_RADIUS, REGION_FIGURE_ALPHA, n)?;
    let sector: Predicate = Arc::new(move |z| region.in_sector(z));
    let strip: Predicate = Arc::new(move |z| matches!(classify_un_tilde(z, &region), Ok(Some(k)) if k == region.n));
    let spec = RenderSpec::new(REGION_FIGURE_WINDOW, width, height, Style::Contour)?
        .with_overlay(sector, [255, 255, 255], 0.6)
        .with_overlay(strip.clone(), [0, 0, 0], 0.85);
    let img = domain_color(gamma, &spec);
    let mask = Mask::from_predicate(&spec, &strip);
    Ok((img, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(z: Complex64) -> Result<Complex64> {
        Ok(z)
    }

    #[test]
    fn hsl_primaries() {
        assert_eq!(hsl_to_rgb(0.0, 0.5), [255, 0, 0]);
        assert_eq!(hsl_to_rgb(1.0 / 3.0, 0.5), [0, 255, 0]);
        assert_eq!(hsl_to_rgb(2.0 / 3.0, 0.5), [0, 0, 255]);
        assert_eq!(hsl_to_rgb(0.3, 0.0), [0, 0, 0]);
        assert_eq!(hsl_to_rgb(0.3, 1.0), [255, 255, 255]);
    }

    #[test]
    fn symmetric_window_has_axis_row() {
        let spec = RenderSpec::new((-1.0, 1.0, -7.0, 7.0), 5, 513, Style::Gradient).unwrap();
        assert_eq!(spec.pixel_point(2, 256), Complex64::new(0.0, 0.0));
        assert_eq!(spec.pixel_point(0, 0).im, -spec.pixel_point(0, 512).im);
    }

    #[test]
    fn identity_coloring() {
        let spec = RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 65, 65, Style::Gradient).unwrap();
        let img = domain_color(identity, &spec);
        // centre pixel is the origin: black
        assert_eq!(img.get(32, 32), [0, 0, 0]);
        // positive real axis is red, negative real axis cyan
        let right = img.get(60, 32);
        assert!(right[0] > 0 && right[1] == 0 && right[2] == 0);
        let left = img.get(4, 32);
        assert!(left[0] == 0 && left[1] == left[2] && left[1] > 0);
        // lightness grows outward
        let sum = |c: Rgb| c.iter().map(|&v| u32::from(v)).sum::<u32>();
        assert!(sum(img.get(40, 32)) < sum(img.get(60, 32)));
    }

    #[test]
    fn failing_pixels_get_error_color() {
        let spec = RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 3, 3, Style::Gradient).unwrap();
        let img = domain_color(|z: Complex64| if z.re < 0.0 { Err(Error::Domain("x".into())) } else { Ok(z) }, &spec);
        assert_eq!(img.get(0, 1), ERROR_COLOR);
        let img = domain_color(|_| Ok(Complex64::new(f64::NAN, 0.0)), &spec);
        assert!(img.pixels().iter().all(|&p| p == ERROR_COLOR));
    }

    #[test]
    fn contour_lines_follow_levels() {
        let spec = RenderSpec::new((-4.0, 4.0, -4.0, 4.0), 64, 64, Style::Contour).unwrap();
        let img = domain_color(identity, &spec);
        let dark = img.pixels().iter().filter(|p| p.iter().all(|&c| c < 100)).count();
        assert!(dark > 0);
        // a single explicit level draws fewer lines than every integer level
        let one = domain_color(identity, &spec.clone().with_levels(vec![1.0]));
        let dark_one = one.pixels().iter().filter(|p| p.iter().all(|&c| c < 100)).count();
        assert!(dark_one > 0 && dark_one < dark);
    }

    #[test]
    fn gamma_poles_are_light() {
        let spec = RenderSpec::new((-7.0, 7.0, -7.0, 7.0), 141, 141, Style::Gradient).unwrap();
        let img = domain_color(gamma, &spec);
        // pixel centres x = -7 + (i + 0.5) * 0.0993, row 70 is the real axis
        let near_pole = img.get(50, 70);
        let z = spec.pixel_point(50, 70);
        assert!((z.re + 2.0).abs() < 0.1 && z.im == 0.0);
        assert!(near_pole.iter().all(|&c| c > 200), "{near_pole:?}");
    }

    #[test]
    fn conjugate_symmetry_of_gamma_render() {
        let spec = RenderSpec::new((-3.0, 5.0, -4.0, 4.0), 33, 33, Style::Gradient).unwrap();
        let img = domain_color(gamma, &spec);
        let conj = domain_color(|z: Complex64| Ok(gamma(z.conj())?.conj()), &spec);
        assert_eq!(img, conj);
        for i in 0..33 {
            for j in 0..33 {
                let a = img.get(i, j);
                let b = img.get(i, 32 - j);
                // same lightness, mirrored hue
                let la = u32::from(*a.iter().max().unwrap()) + u32::from(*a.iter().min().unwrap());
                let lb = u32::from(*b.iter().max().unwrap()) + u32::from(*b.iter().min().unwrap());
                assert!(la.abs_diff(lb) <= 2);
            }
        }
    }

    #[test]
    fn overlays() {
        let spec = RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 16, 16, Style::Gradient).unwrap();
        let img = domain_color(identity, &spec);
        let none: Predicate = Arc::new(|_| false);
        assert_eq!(overlay_region(&img, &spec, &none, [0, 0, 0], 0.7).unwrap(), img);
        let all: Predicate = Arc::new(|_| true);
        let flat = overlay_region(&img, &spec, &all, [10, 20, 30], 1.0).unwrap();
        assert!(flat.pixels().iter().all(|&p| p == [10, 20, 30]));
        let small = ImageBuffer::new(2, 2, [0, 0, 0]);
        assert!(overlay_region(&small, &spec, &all, [0, 0, 0], 1.0).is_err());
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut img = ImageBuffer::new(2, 2, [0, 0, 0]);
        img.set(1, 0, [255, 1, 2]);
        img.set(0, 1, [3, 4, 250]);
        let path = dir.path().join("a.png");
        write_image(&img, &path).unwrap();
        assert_eq!(read_image(&path).unwrap(), img);
        assert!(write_image(&img, &dir.path().join("missing/dir/a.png")).is_err());
    }

    #[test]
    fn mask_connectivity() {
        let mask = Mask { width: 3, height: 3, bits: vec![true, false, true, true, false, true, true, true, true] };
        assert!(mask.is_connected());
        let mask = Mask { width: 3, height: 2, bits: vec![true, false, true, false, true, false] };
        assert_eq!(mask.components(), 3);
    }

    #[test]
    fn small_region_figure() {
        let (img, mask) = region_figure(65, 65, 0).unwrap();
        assert_eq!((img.width(), img.height()), (65, 65));
        assert!(mask.count() > 0);
        assert!(mask.is_connected());
    }
}
