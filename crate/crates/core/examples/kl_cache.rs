//! Saving and reloading the W(B4) Kazhdan-Lusztig table.
use hecke_pieces::cli::{kl_table_cached, load_kl_cache};
use hecke_pieces::coxeter::CoxeterSystem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = CoxeterSystem::type_b(4)?;
    let path = std::env::temp_dir().join("hecke-pieces-b4.kl");
    let _ = std::fs::remove_file(&path);
    let built = kl_table_cached(&w, Some(&path))?;
    let loaded = load_kl_cache(&w, &path)?;
    println!("{} pairs written to {}", built.num_pairs(), path.display());
    println!("round trip exact: {}", built == loaded);
    std::fs::remove_file(&path)?;
    Ok(())
}
