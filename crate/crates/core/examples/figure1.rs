//! Universal dispersion curve u(s) in reduced units s = 2Dt/lambda_T^2,
//! u = sigma^2/lambda_T^2: numerical self-similar solution against the
//! Lambert-W approximation and the classical line u = s.
//!
//! Writes `figure1.csv` and `figure1.svg` to the current directory.

use qfp::automodel::figure1_curves;
use qfp::cli::output::{line_chart, LineStyle, Series, Table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fig = figure1_curves(100.0, 200)?;
    println!("c2* = {}", fig.c2);

    let mut table = Table::new(&["s", "u_numeric", "u_lambert", "u_classical"]);
    let rows = fig.numeric.samples().iter().zip(fig.lambert.samples()).zip(fig.classical.samples());
    for ((n, l), c) in rows {
        table.push(vec![n.0, n.1, l.1, c.1]);
    }
    std::fs::write("figure1.csv", table.to_csv(""))?;

    let series: Vec<Series> = [
        (&fig.numeric, LineStyle::Solid),
        (&fig.lambert, LineStyle::Dashed),
        (&fig.classical, LineStyle::Dotted),
    ]
    .into_iter()
    .map(|(c, style)| Series {
        label: c.label().to_string(),
        points: c.samples().to_vec(),
        style,
    })
    .collect();
    std::fs::write("figure1.svg", line_chart("u(s)", "s", "u", &series))?;

    for k in [0, 50, 100, 150, 199] {
        let r = &table.rows[k];
        println!("s = {:9.3e}  numeric {:9.4e}  lambert {:9.4e}  classical {:9.4e}", r[0], r[1], r[2], r[3]);
    }
    Ok(())
}
