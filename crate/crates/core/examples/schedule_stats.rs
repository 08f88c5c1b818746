//! Region-operation counts of the ring schedule against the binary-matrix
//! baseline, and a schedule dump for a tiny code.

use pyrit::schedule::{
    compile_crs_schedule, compile_schedule, compile_schedule_with, Representative,
};
use pyrit::{cauchy_parity_matrix, choose_transform, CodeSpec, FieldSpec};

fn main() -> pyrit::Result<()> {
    for (k, r, field) in [
        (8, 4, FieldSpec::gf16()),
        (40, 20, FieldSpec::gf64()),
        (20, 40, FieldSpec::gf64()),
    ] {
        let code = CodeSpec::new(k, r, field, choose_transform(k, r))?;
        let m = cauchy_parity_matrix(&code)?;
        let sparse = compile_schedule(&m, code.transform());
        let dense = compile_schedule_with(&m, code.transform(), Representative::Idempotent);
        let crs = compile_crs_schedule(&m, code.transform());
        println!(
            "{} k={k} r={r} {}: sparse {} / idempotent {} / crs {} region ops",
            field.id(),
            code.transform(),
            sparse.stats().total_region_ops,
            dense.stats().total_region_ops,
            crs.stats().total_region_ops
        );
    }

    let code = CodeSpec::new(2, 1, FieldSpec::gf16(), choose_transform(2, 1))?;
    let m = cauchy_parity_matrix(&code)?;
    print!("{}", compile_schedule(&m, code.transform()).dump());
    Ok(())
}
