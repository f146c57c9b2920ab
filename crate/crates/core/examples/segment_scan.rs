//! What the brackets on the representative segment do and do not prove.
use suita_lab::suita::orbit_value_note;

fn main() -> suita_lab::Result<()> {
    let ps: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).chain([0.9999]).collect();
    for mu in [0.1, 0.25, 0.45, 0.7] {
        let note = orbit_value_note(mu, &ps)?;
        println!("mu = {mu}: {}", note.statement);
    }
    Ok(())
}
