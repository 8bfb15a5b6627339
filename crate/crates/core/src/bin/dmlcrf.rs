use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};

use dmlcrf::pipeline::{self, EvalSummary, RunConfig, CONFIG_KEYS};
use dmlcrf::Error;

fn command() -> Command {
    let keys: Vec<Arg> = CONFIG_KEYS
        .iter()
        .map(|&k| Arg::new(k).long(k).value_name("VALUE").global(true))
        .collect();
    Command::new("dmlcrf")
        .about("Hyperspectral classification with center-loss features and a windowed CRF")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .help("key = value file; flags override its entries"),
        )
        .args(keys)
        .subcommand(Command::new("synth").about("Write a synthetic cube and label map"))
        .subcommand(Command::new("train").about("Train the feature network"))
        .subcommand(Command::new("infer").about("Extract features and run CRF inference"))
        .subcommand(Command::new("eval").about("Score predictions, or repeat train+infer runs"))
        .subcommand(Command::new("sweep").about("Vary one CRF parameter on cached features"))
}

fn build_config(m: &ArgMatches) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = m.get_one::<String>("config") {
        cfg.apply_file(path)?;
    }
    for &key in CONFIG_KEYS {
        if m.value_source(key) == Some(ValueSource::CommandLine) {
            cfg.apply(key, m.get_one::<String>(key).unwrap())?;
        }
    }
    Ok(cfg)
}

fn run(name: &str, m: &ArgMatches) -> Result<(), Error> {
    let cfg = build_config(m)?;
    match name {
        "synth" => {
            let (cube, labels) = pipeline::cmd_synth(&cfg)?;
            println!("wrote {} and {}", cube.display(), labels.display());
        }
        "train" => {
            let s = pipeline::cmd_train(&cfg)?;
            if let Some(loss) = s.final_loss {
                println!(
                    "epoch {}: softmax {:.5} center {:.5} joint {:.5}",
                    loss.epoch, loss.softmax, loss.center, loss.joint
                );
            }
            println!(
                "trained on {} samples, training OA {:.4}, {} test pixels; wrote {}",
                s.train_samples,
                s.train_oa,
                s.test_pixels,
                s.checkpoint.display()
            );
        }
        "infer" => {
            let s = pipeline::cmd_infer(&cfg)?;
            match s.filter_size {
                Some(k) => println!("crf inference with k = {k}"),
                None => println!("crf disabled, labels are the network argmax"),
            }
            println!("{}", s.timing_line());
        }
        "eval" => match pipeline::cmd_eval(&cfg)? {
            EvalSummary::Single(r) => print!("{}", r.to_table()),
            EvalSummary::Repeated { runs, rows } => {
                println!("{runs} runs");
                for r in rows {
                    println!(
                        "{:<8} {:<6} {:.6} ± {:.6}",
                        r.method, r.metric, r.mean, r.std
                    );
                }
            }
        },
        "sweep" => {
            for r in pipeline::cmd_sweep(&cfg)? {
                println!("{:>10} oa {:.4} aa {:.4}", r.value, r.oa, r.aa);
            }
        }
        _ => unreachable!("clap rejects unknown subcommands"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = match command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    match run(name, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmlcrf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
