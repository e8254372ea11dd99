//! Canonical basis of the Hecke algebra of B2 with weights L(e) = 1, L(f) = 3.
use hecke_pieces::coxeter::CoxeterSystem;
use hecke_pieces::hecke::{canonical_basis_weighted, HeckeAlgebra, WeightFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nj = CoxeterSystem::type_b(2)?.with_generator_names(&["e", "f"])?;
    let weights = WeightFunction::new(&nj, vec![1, 3])?;
    let basis = canonical_basis_weighted(&nj, &weights)?;
    let alg = HeckeAlgebra::weighted(&nj, weights);
    for z in nj.ids() {
        let c = basis.element(z);
        let fixed = alg.bar_element(c)? == *c;
        println!("c_{} = {}   (bar-invariant: {fixed})", nj.word_string_id(z), c.display(&nj));
    }
    let (t, z) = (nj.parse_id("∅")?, nj.parse_id("fef")?);
    println!("p(∅, fef) = {}", basis.p(t, z));
    Ok(())
}
