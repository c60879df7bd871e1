//! Grayscale PGM codec (P2 and P5) and conversion to sample grids.
//!
//! Pixel `(row, col)` is the sample at `x = col/M`, `y = row/M`.

use anyhow::{bail, ensure, Context, Result};
use qtl_core::{Complex64, SampleGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major, `height` rows of `width` pixels.
    pub pixels: Vec<u16>,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        ensure!(self.pos > start, "malformed PGM: unexpected end of data");
        std::str::from_utf8(&self.bytes[start..self.pos]).context("malformed PGM: non-ASCII token")
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse().with_context(|| format!("malformed PGM: bad {what} {tok:?}"))
    }
}

impl Pgm {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut h = Header { bytes, pos: 0 };
        let magic = h.token()?;
        let binary = match magic {
            "P2" => false,
            "P5" => true,
            other => bail!("malformed PGM: magic {other:?} is neither P2 nor P5"),
        };
        let width = h.number("width")?;
        let height = h.number("height")?;
        let maxval = h.number("maxval")?;
        ensure!(width > 0 && height > 0, "malformed PGM: empty image {width}x{height}");
        ensure!((1..=65535).contains(&maxval), "malformed PGM: maxval {maxval} outside 1..=65535");
        let count = width * height;

        let pixels: Vec<u16> = if binary {
            // exactly one whitespace byte separates the header from the raster
            let start = h.pos + 1;
            let depth = if maxval < 256 { 1 } else { 2 };
            let raster = bytes.get(start..start + count * depth).with_context(|| {
                format!("malformed PGM: raster needs {} bytes", count * depth)
            })?;
            if depth == 1 {
                raster.iter().map(|&b| b as u16).collect()
            } else {
                raster.chunks_exact(2).map(|p| u16::from_be_bytes([p[0], p[1]])).collect()
            }
        } else {
            (0..count)
                .map(|_| h.number("pixel").map(|v| v as u16))
                .collect::<Result<_>>()?
        };
        if let Some(&v) = pixels.iter().find(|&&v| v as usize > maxval) {
            bail!("malformed PGM: pixel {v} exceeds maxval {maxval}");
        }
        Ok(Self { width, height, maxval: maxval as u16, pixels })
    }

    #[cfg(test)]
    pub fn encode_p2(&self) -> Vec<u8> {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.into_bytes()
    }

    #[cfg(test)]
    pub fn encode_p5(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for &v in &self.pixels {
            if self.maxval < 256 {
                out.push(v as u8);
            } else {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        out
    }

    fn pixel(&self, row: isize, col: isize) -> u16 {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            0
        } else {
            self.pixels[row as usize * self.width + col as usize]
        }
    }

    /// Center-crops (or zero-pads) to `side × side` and normalizes to `[0, 1]`.
    /// Returns the samples and any warnings raised on the way.
    pub fn to_samples(&self, side: usize) -> (SampleGrid, Vec<String>) {
        let mut warnings = Vec::new();
        if self.width != self.height {
            warnings.push(format!(
                "image is {}x{}, not square; center-cropping",
                self.width, self.height
            ));
        }
        if self.width.min(self.height) < side {
            warnings.push(format!(
                "image {}x{} is smaller than {side}x{side}; zero-padding",
                self.width, self.height
            ));
        }
        let row0 = (self.height as isize - side as isize).div_euclid(2);
        let col0 = (self.width as isize - side as isize).div_euclid(2);
        let scale = 1.0 / self.maxval as f64;
        let mut values = vec![Complex64::new(0.0, 0.0); side * side];
        for i in 0..side {
            for j in 0..side {
                let v = self.pixel(row0 + j as isize, col0 + i as isize);
                values[i * side + j] = Complex64::new(v as f64 * scale, 0.0);
            }
        }
        let grid = SampleGrid::new(side, values).expect("side x side values");
        (grid, warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Pgm {
        Pgm { width: 3, height: 2, maxval: 255, pixels: vec![0, 10, 20, 30, 40, 255] }
    }

    #[test]
    fn p2_and_p5_round_trip() {
        let img = tiny();
        assert_eq!(Pgm::parse(&img.encode_p2()).unwrap(), img);
        assert_eq!(Pgm::parse(&img.encode_p5()).unwrap(), img);
    }

    #[test]
    fn sixteen_bit_raster() {
        let img = Pgm { width: 2, height: 1, maxval: 1000, pixels: vec![999, 3] };
        assert_eq!(Pgm::parse(&img.encode_p5()).unwrap(), img);
    }

    #[test]
    fn comments_in_header() {
        let text = b"P2\n# made by hand\n2 1\n# max\n9\n1 9\n";
        let img = Pgm::parse(text).unwrap();
        assert_eq!(img.pixels, vec![1, 9]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(Pgm::parse(b"P3\n1 1\n255\n0\n").is_err());
        assert!(Pgm::parse(b"P2\n2 2\n255\n0 1 2\n").is_err());
        assert!(Pgm::parse(b"P2\n1 1\n9\n10\n").is_err());
        assert!(Pgm::parse(b"P5\n4 4\n255\n\x00\x01").is_err());
        assert!(Pgm::parse(b"").is_err());
    }

    #[test]
    fn crop_and_pad() {
        let img = Pgm { width: 5, height: 3, maxval: 4, pixels: (0..15).map(|v| v % 5).collect() };
        let (s, warnings) = img.to_samples(3);
        assert_eq!(warnings.len(), 1);
        // column 1..4 of each row, sample index i is the column
        assert_eq!(s.at(0, 0).re, 0.25);
        assert_eq!(s.at(2, 0).re, 0.75);
        let (s, warnings) = img.to_samples(5);
        assert_eq!(warnings.len(), 2);
        assert_eq!(s.at(0, 0).re, 0.0);
        assert_eq!(s.at(4, 1).re, 1.0);
    }
}
