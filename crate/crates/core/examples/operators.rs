//! The operators E_{w,J,n} and their compatibility with τ_w.
use hecke_pieces::coxeter::{CoxeterSystem, DiagramAutomorphism, GenSet};
use hecke_pieces::hecke::HeckeAlgebra;
use hecke_pieces::pieces::{bedard_sequence, e_operator, tau_hecke};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = CoxeterSystem::type_b(4)?;
    let alg = HeckeAlgebra::geometric(&w);
    let j = GenSet::from_labels([1, 2]);
    let delta = DiagramAutomorphism::identity(4);
    let x = w.parse_id("3")?;
    let data = bedard_sequence(&w, j, &delta, x)?;
    println!("w = 3: n0 = {}, J_inf = {}", data.n0, data.j_infinity);
    for y in ["3", "31", "2134", "32123"] {
        let t = alg.basis(w.parse_id(y)?);
        let e0 = e_operator(&alg, &t, &data, data.n0)?;
        let e1 = e_operator(&alg, &t, &data, data.n0 + 1)?;
        println!(
            "T_{y}: E_n0 = {}, E_(n0+1) = {}, equals τ(E_n0): {}",
            e0.display(&w),
            e1.display(&w),
            e1 == tau_hecke(&w, &data, &e0)?
        );
    }
    Ok(())
}
