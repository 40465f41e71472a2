pub mod angles;
pub mod bounds;
pub mod check_schema;
pub mod evaluate;
pub mod flip_stream;
pub mod generate;
pub mod profile;
pub mod sample;
pub mod threshold;

/// Bit b of the basis index is vertex b's side, so position v of the text
/// form is vertex v. The external-solver protocol reads the same layout.
pub fn bits_to_string(z: u64, n: u32) -> String {
    (0..n)
        .map(|b| if z >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn side_to_string(side: &[bool]) -> String {
    side.iter().map(|&s| if s { '1' } else { '0' }).collect()
}

/// File stem for naming rows; falls back to the full path text.
pub fn stem(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
