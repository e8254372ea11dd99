//! Restrictions to the pieces indexed by N_J, χ-values and the X = ±p check.
use hecke_pieces::charsheaf_b4::{CsSymbol, ExampleContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = ExampleContext::new()?;
    let (t, z) = (ctx.nj_parse("f")?, ctx.nj_parse("fef")?);
    for u in ["121", "1"] {
        let u = ctx.wj_parse(u)?;
        println!("[z^-1 {}]_(t) ~ {}", ctx.wj_name(u), ctx.piece_restriction(t, z, u)?.mod_unit());
    }
    let sol = ctx.solve_chi(t, z)?;
    for c in CsSymbol::BLOCK {
        println!("χ_f({c}_fef) ~ {}", sol.value(c));
    }
    println!(
        "X = {}, p = {}, ε(z)ε(t) = {}",
        ctx.extract_x(&sol)?,
        ctx.p(t, z),
        ctx.epsilon(t) * ctx.epsilon(z)
    );

    let report = ctx.conjecture_report();
    println!("all 64 pairs pass: {}", report.all_passed());
    print!("{}", ctx.restriction_text_table()?.lines().take(8).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
