//! PNG output for rendered images.

use std::path::{Path, PathBuf};

use luxfield_core::render::RenderedImage;

#[derive(Debug, thiserror::Error)]
pub enum PngError {
    #[error("pixel buffer has {found} bytes, expected {expected} for {width}x{height}")]
    LengthMismatch {
        width: usize,
        height: usize,
        expected: usize,
        found: usize,
    },
    #[error("image dimensions {0}x{1} are not encodable")]
    Dimensions(usize, usize),
    #[error("png encoding: {0}")]
    Encoding(#[from] png::EncodingError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Encodes an 8-bit RGB PNG. The output depends only on the pixels.
pub fn encode_png(img: &RenderedImage) -> Result<Vec<u8>, PngError> {
    let expected = img.width * img.height * 3;
    if img.rgb8.len() != expected {
        return Err(PngError::LengthMismatch {
            width: img.width,
            height: img.height,
            expected,
            found: img.rgb8.len(),
        });
    }
    let (w, h) = match (u32::try_from(img.width), u32::try_from(img.height)) {
        (Ok(w), Ok(h)) if w > 0 && h > 0 => (w, h),
        _ => return Err(PngError::Dimensions(img.width, img.height)),
    };
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, w, h);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header()?;
        writer.write_image_data(&img.rgb8)?;
        writer.finish()?;
    }
    Ok(out)
}

pub fn write_png(img: &RenderedImage, path: &Path) -> Result<(), PngError> {
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|source| PngError::Io {
        path: path.to_path_buf(),
        source,
    })
}
