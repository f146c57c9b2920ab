//! Ellipsoid brackets for F on the segment (0, p) of a non-convex egg.
use suita_lab::suita::{segment_csv, segment_scan};

fn main() -> suita_lab::Result<()> {
    let ps = [0.0, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999];
    print!("{}", segment_csv(&segment_scan(&[0.25], &ps)?));
    Ok(())
}
