//! Energy CSV and plain-text reports.

use std::io::Write;

use crate::energy::EnergyReport;
use crate::error::{Error, Result};

use super::checkpoint::fmt_g17;

pub const ENERGY_COLUMNS: [&str; 18] = [
    "t",
    "E_sigma_0",
    "E_sigma_1",
    "E_sigma_2",
    "E_sigma_3",
    "E_sigma_4",
    "E_sigma_total",
    "calE_sigma_1",
    "calE_sigma_2",
    "calE_sigma_total",
    "solverE_3_5",
    "solverE_4_5",
    "A1_min",
    "taylor_min",
    "kappa_linf",
    "sigma13_kappa_linf",
    "blowup_q",
    "residual_fund",
];

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

fn solver(r: &EnergyReport, i: usize) -> String {
    r.solver.get(i).map(|&x| fmt_g17(x)).unwrap_or_default()
}

pub fn energy_row(r: &EnergyReport) -> Vec<String> {
    let mut row = vec![fmt_g17(r.t)];
    row.extend(r.e_sigma.iter().map(|&x| fmt_g17(x)));
    row.push(fmt_g17(r.e_sigma_total));
    row.extend(r.cal_e_sigma.iter().map(|&x| fmt_g17(x)));
    row.push(fmt_g17(r.cal_e_sigma_total));
    row.push(solver(r, 0));
    row.push(solver(r, 1));
    for x in [
        r.a1_min,
        r.taylor_min,
        r.kappa_linf,
        r.sigma13_kappa_linf,
        r.blowup,
    ] {
        row.push(fmt_g17(x));
    }
    row.push(r.residual_fundamental.map(fmt_g17).unwrap_or_default());
    row
}

/// Writes a header and one row per record; every cell goes through `%.17g`.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_energy_csv<W: Write>(out: W, reports: &[EnergyReport]) -> Result<()> {
    let rows: Vec<_> = reports.iter().map(energy_row).collect();
    write_table(out, &ENERGY_COLUMNS, &rows)
}

/// `key = value` lines, one per CSV column.
pub fn render_report(r: &EnergyReport) -> String {
    ENERGY_COLUMNS
        .iter()
        .zip(energy_row(r))
        .map(|(k, v)| format!("{k} = {}\n", if v.is_empty() { "-" } else { &v }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::state::SurfaceState;

    #[test]
    fn flat_report_row() {
        let grid = Grid::periodic(32).unwrap();
        let r = EnergyReport::compute(&SurfaceState::flat(&grid), 0.5, true).unwrap();
        let row = energy_row(&r);
        assert_eq!(row.len(), ENERGY_COLUMNS.len());
        assert_eq!(row[12], "1");
        assert_eq!(row[17], "");
        let mut buf = Vec::new();
        write_energy_csv(&mut buf, &[r.clone(), r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("t,E_sigma_0,"));
    }
}
