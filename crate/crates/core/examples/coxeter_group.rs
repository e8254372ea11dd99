//! W(B4) as signed permutations: reduced words, Bruhat order, cosets.
use hecke_pieces::coxeter::{CoxeterSystem, GenSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = CoxeterSystem::type_b(4)?;
    println!("|W(B4)| = {}, longest element {}", w.order(), w.word_string_id(w.longest_id()));

    let x = w.parse_id("4321234")?;
    let y = w.parse_id("2123")?;
    println!("l({}) = {}", w.word_string_id(x), w.len_id(x));
    println!("{} <= {}: {}", w.word_string_id(y), w.word_string_id(x), w.bruhat_leq_id(y, x));
    println!("left descents of {}: {}", w.word_string_id(x), w.left_descents_id(x));

    let j = GenSet::from_labels([1, 2]);
    let z = w.parse_id("4321234121")?;
    let (head, tail) = w.right_coset_decomposition(z, j);
    println!(
        "{} = {} · {} with the head in W^J",
        w.word_string_id(z),
        w.word_string_id(head),
        w.word_string_id(tail)
    );
    let reps: Vec<String> = w.double_coset_reps(j, j).into_iter().map(|r| w.word_string_id(r)).collect();
    println!("^JW^J ({}): {}", reps.len(), reps.join(" "));
    Ok(())
}
