//! Running a named verification suite and rendering the report.
use w2n::cli::{render_report, run_suite, Format, Options};

fn main() -> anyhow::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "duality".into());
    let opts = Options { n_max: 3, ..Options::default() };
    let report = run_suite(&name, &opts, &|_| {})?;
    print!("{}", render_report(&report, Format::Text));
    Ok(())
}
