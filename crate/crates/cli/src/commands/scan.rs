use std::fs::File;
use std::io::{BufWriter, Write};

use trunclc::diagnostics::{scan_safety, ScanConfig, ScanMethod};

use crate::cli::{ReportFormat, ScanArgs, ScanMethodArg};
use crate::error::{usage, CliResult};
use crate::output::write_json;
use crate::{parse, target};

pub fn run(args: &ScanArgs, out: &mut impl Write) -> CliResult<u8> {
    let fixed = target::params(&args.params)?;
    let axes = args
        .grids
        .iter()
        .map(|g| parse::grid_axis(g))
        .collect::<CliResult<Vec<_>>>()?;
    let grid = parse::expand_grid(&args.dist, &fixed, &axes)?;
    if !args.resolution.is_finite() || args.resolution <= 0.0 {
        return Err(usage("--resolution must be positive"));
    }
    let cfg = ScanConfig {
        method: match args.method {
            ScanMethodArg::Devroye => ScanMethod::Devroye,
            ScanMethodArg::Its => ScanMethod::Its,
            ScanMethodArg::Both => ScanMethod::Both,
        },
        probes: parse::probes(&args.probe, args.absolute)?,
        n_probe: args.n_probe,
        seed: args.seed.seed,
        resolution: args.resolution,
        dprime: args.dprime,
        max_probes: args.max_probes,
        ..ScanConfig::default()
    };
    let report = scan_safety(&args.dist, &grid, &cfg)?;
    let emit = |w: &mut dyn Write| -> CliResult<()> {
        match args.format {
            ReportFormat::Csv => report.write_csv(w)?,
            ReportFormat::Json => write_json(w, &report.to_json())?,
        }
        Ok(())
    };
    match &args.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit(&mut w)?;
            w.flush()?;
        }
        None => emit(out)?,
    }
    Ok(0)
}
