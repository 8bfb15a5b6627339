//! OA, AA and kappa for a hand-written confusion matrix, or for a pair of
//! label maps given on the command line.
//!
//! cargo run --example metrics_report [pred.pgm gt.pgm]

use dmlcrf::hsi::read_pgm;
use dmlcrf::metrics::{confusion, report, ConfusionMatrix};

fn main() -> dmlcrf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cm = if let [pred, gt] = args.as_slice() {
        confusion(&read_pgm(pred)?, &read_pgm(gt)?)?
    } else {
        // rows are groundtruth, columns predictions
        ConfusionMatrix::from_counts(3, vec![45, 3, 2, 4, 30, 6, 0, 5, 55])?
    };
    for t in 1..=cm.classes() {
        let row: Vec<String> = (1..=cm.classes())
            .map(|p| format!("{:>5}", cm.get(t, p)))
            .collect();
        println!("{}", row.join(""));
    }
    let r = report(&cm)?;
    println!();
    print!("{}", r.to_table());
    println!();
    print!("{}", r.to_csv());
    Ok(())
}
