// Config parsing with overrides, CSV series, sparklines and checkpoints.

use anidecay::io::{
    emit_record, load_checkpoint, parse_config_str, read_norm_rows, save_checkpoint, Format,
};
use anidecay::solver::run;

pub fn run_example() -> anidecay::Result<()> {
    let text = "n_h = 16\nn_v = 16\nl_h = 25.132741228718345\nt_end = 1.0\nc0 = 0.5\nfit_t0 = 0.2\nfit_t1 = 1.0\n";
    let config = parse_config_str(text, &["dt=0.02".to_string(), "seed=3".to_string()])?;
    println!("dt = {}, seed = {}", config.dt, config.seed);
    if let Err(e) = parse_config_str(text, &["s=0.4".to_string()]) {
        println!("rejected: {e}");
    }

    let dir = std::env::temp_dir().join(format!("anidecay-artifacts-{}", std::process::id()));
    let record = run(&config)?;
    for path in emit_record(&dir, &record, &[Format::Csv, Format::Svg])? {
        println!("wrote {}", path.display());
    }
    let rows = read_norm_rows(std::fs::File::open(dir.join("rows.csv")).expect("rows.csv"))?;
    println!("read back {} rows, identical: {}", rows.len(), rows == record.rows);

    let ckpt = dir.join("final.ansd");
    save_checkpoint(&ckpt, &record.final_field, config.t_end)?;
    let (v, t) = load_checkpoint(&ckpt)?;
    println!("checkpoint at t = {t}: identical field {}", v.sub(&record.final_field)?.max_abs() == 0.0);
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
