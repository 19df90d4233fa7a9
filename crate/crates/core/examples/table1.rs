use cbsig::costmodel::{table1, TABLE1};

fn main() {
    for row in table1(&TABLE1).unwrap() {
        for (col, cell) in row.cells() {
            println!(
                "{:<9}{:<5}{:<42}{:>14} (published {}, err {:.2}%)",
                row.scheme,
                col,
                cell.formula,
                cell.display_reproduced(),
                cell.display_published(),
                100.0 * cell.relative_error()
            );
        }
    }
}
