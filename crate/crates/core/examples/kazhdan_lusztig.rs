//! Kazhdan-Lusztig polynomials of W(B3) and their inverse on a parabolic.
use hecke_pieces::cli::format_q;
use hecke_pieces::coxeter::{CoxeterSystem, GenSet};
use hecke_pieces::hecke::{inverse_kl, KLTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = CoxeterSystem::type_b(3)?;
    let table = KLTable::build(&w);
    table.check_invariants(&w)?;
    println!("{} Bruhat pairs", table.num_pairs());
    for (y, x, p) in table.entries().filter(|(_, _, p)| !p.is_one()).take(8) {
        println!("P({}, {}) = {}", w.word_string_id(y), w.word_string_id(x), format_q(p));
    }

    let wj = w.parabolic_ids(GenSet::from_labels([1, 2]));
    let inv = inverse_kl(&w, &table, &wj)?;
    let (e, top) = (wj[0], *wj.last().unwrap());
    println!("P'(∅, {}) = {}", w.word_string_id(top), inv.get(e, top));
    Ok(())
}
