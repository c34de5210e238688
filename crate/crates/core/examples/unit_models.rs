//! Re-derives the distillation unit error polynomials by enumerating input
//! errors and prints them next to the built-in models.

use dqre::distillation::{enumerate_unit_model, tabulated_model, UnitKind};

fn main() -> dqre::Result<()> {
    for kind in UnitKind::ALL {
        let derived = enumerate_unit_model(kind, 3)?;
        let stored = tabulated_model(kind);
        println!("{kind}");
        for (name, (d, s)) in ["reject", "X", "Y", "Z"]
            .into_iter()
            .zip(derived.polynomials().into_iter().zip(stored.polynomials()))
        {
            let s_in = s.input_part();
            let same = d.input_part().truncate(s_in.degree()) == s_in;
            println!(
                "  {name:>6}: {s}   [{}]",
                if same { "inputs match" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
