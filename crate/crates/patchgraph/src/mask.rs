//! Dense segmentation masks with binary PGM (P5) I/O.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major float mask; values in [0, 1], 1 = road.
#[derive(Debug, Clone, PartialEq)]
pub struct SegMask {
    width: u32,
    height: u32,
    data: Vec<f32>,
}

impl SegMask {
    pub fn new(width: u32, height: u32) -> Self {
        SegMask {
            width,
            height,
            data: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn from_data(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if data.len() != width as usize * height as usize {
            return Err(Error::ShapeMismatch(format!(
                "mask data length {} for {width}x{height}",
                data.len()
            )));
        }
        Ok(SegMask {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: f32) {
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    /// True if every value is exactly 0.0 or 1.0.
    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Number of pixels with value > 0.5.
    pub fn count_on(&self) -> usize {
        self.data.iter().filter(|&&v| v > 0.5).count()
    }

    /// New binary mask: 1.0 where value > `tau`, else 0.0.
    pub fn threshold(&self, tau: f32) -> SegMask {
        SegMask {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .map(|&v| if v > tau { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// Writes binary PGM (P5, maxval 255); values round to the nearest level.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self
            .data
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    /// Reads binary PGM (P5). `#` comments are allowed in the header.
    pub fn read_pgm<R: Read>(r: R) -> Result<Self> {
        let mut r = std::io::BufReader::new(r);
        let mut header = Vec::with_capacity(4);
        let mut token = String::new();
        // Header is 4 whitespace-separated tokens: magic, width, height, maxval.
        while header.len() < 4 {
            let mut byte = [0u8; 1];
            if r.read(&mut byte)? == 0 {
                return Err(Error::format("pgm", "truncated header"));
            }
            let c = byte[0] as char;
            if c == '#' {
                let mut line = String::new();
                r.read_line(&mut line)?;
                continue;
            }
            if c.is_whitespace() {
                if !token.is_empty() {
                    header.push(std::mem::take(&mut token));
                }
                continue;
            }
            token.push(c);
        }
        if header[0] != "P5" {
            return Err(Error::format(
                "pgm",
                format!("expected magic P5, got {:?}", header[0]),
            ));
        }
        let width: u32 = header[1]
            .parse()
            .map_err(|_| Error::format("pgm", format!("bad width {:?}", header[1])))?;
        let height: u32 = header[2]
            .parse()
            .map_err(|_| Error::format("pgm", format!("bad height {:?}", header[2])))?;
        let maxval: u32 = header[3]
            .parse()
            .map_err(|_| Error::format("pgm", format!("bad maxval {:?}", header[3])))?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::format(
                "pgm",
                format!("unsupported maxval {maxval}"),
            ));
        }
        let n = width as usize * height as usize;
        let mut bytes = vec![0u8; n];
        r.read_exact(&mut bytes)
            .map_err(|_| Error::format("pgm", format!("expected {n} pixel bytes")))?;
        let data = bytes
            .into_iter()
            .map(|b| b as f32 / maxval as f32)
            .collect();
        Ok(SegMask {
            width,
            height,
            data,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_pgm(std::fs::File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_pgm(std::fs::File::open(path)?)
    }
}
