//! Bédard sequences, piece dimensions and the closure order for B4, J = {1,2}.
use hecke_pieces::coxeter::{CoxeterSystem, DiagramAutomorphism, GenSet};
use hecke_pieces::pieces::{bedard_sequence, closure_hasse, enumerate_n, hasse_dot, piece_dimension};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = CoxeterSystem::type_b(4)?;
    let j = GenSet::from_labels([1, 2]);
    let delta = DiagramAutomorphism::identity(4);
    for x in w.left_quotient(j).into_iter().take(10) {
        let d = bedard_sequence(&w, j, &delta, x)?;
        let seq: Vec<String> =
            d.sequence.iter().map(|(jn, wn)| format!("({jn}, {})", w.word_string_id(*wn))).collect();
        println!(
            "{:>12}  n0 = {}  dim = {:>2}  {}",
            w.word_string_id(x),
            d.n0,
            piece_dimension(&w, j, &delta, x)?,
            seq.join(" ")
        );
    }
    let n: Vec<String> = enumerate_n(&w, j, &delta).into_iter().map(|x| w.word_string_id(x)).collect();
    println!("N_J: {}", n.join(" "));

    let quotient = w.left_quotient(j);
    let edges = closure_hasse(&w, j, &delta);
    println!(
        "{} covering relations; DOT has {} lines",
        edges.len(),
        hasse_dot(&w, &quotient, &edges).lines().count()
    );
    Ok(())
}
