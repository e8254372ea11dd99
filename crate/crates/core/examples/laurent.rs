//! Exact Laurent polynomials in `v`.
use hecke_pieces::laurent::{lp, LaurentPolynomial};

fn main() {
    let a = lp("v^-1 + v");
    let b = lp("1 - v^2");
    println!("a = {a}");
    println!("b = {b}");
    println!("a * b = {}", &a * &b);
    println!("bar(b) = {}", b.bar());
    println!("a is bar-invariant: {}", a.is_palindromic());
    let q = LaurentPolynomial::from_q_coeffs(&[1, 2, 1]);
    println!("1 + 2q + q^2 in v: {q}");
    println!("divided by 1 + v^2: {:?}", q.div_exact(&lp("1 + v^2")).map(|p| p.to_string()));
}
