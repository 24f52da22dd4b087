use serde::Serialize;
use twoway_core::appendix::{
    appendix_rows, omega_grid, relative_variations, AppendixRow, RelativeVariation,
};
use twoway_core::export::{curves_to_csv, format_number, to_csv, to_json, CsvRecord};
use twoway_core::oneway::oneway_keyrate;
use twoway_core::rates::keyrate_report;
use twoway_core::scan::{minimise, scan_grid};
use twoway_core::security::{t_grid, threshold_curve, CurveSource};
use twoway_core::{attack_from_class, AttackClass, AttackParams, DEFAULT_MODULATION};

use crate::options::{Format, Options};
use crate::CliError;

const DEFAULT_SCAN_STEP: f64 = 0.05;

/// Rendered output plus whether the computed key rate was positive.
pub struct Outcome {
    pub text: String,
    pub secure: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn single_t(o: &Options, command: &str) -> Result<f64, CliError> {
    match o.t.as_slice() {
        [t] => Ok(*t),
        [] => Err(usage(format!("{command} needs --T"))),
        _ => Err(usage(format!("{command} takes a single --T"))),
    }
}

fn required_omega(o: &Options, command: &str) -> Result<f64, CliError> {
    o.omega
        .ok_or_else(|| usage(format!("{command} needs --omega")))
}

fn no_custom_correlations(o: &Options, command: &str) -> Result<(), CliError> {
    if o.g.is_some() || o.g_prime.is_some() {
        return Err(usage(format!(
            "--g/--g-prime only apply to keyrate, not {command}"
        )));
    }
    Ok(())
}

fn classes(o: &Options) -> Result<Vec<AttackClass>, CliError> {
    o.attack
        .iter()
        .map(|s| s.parse().map_err(CliError::from))
        .collect()
}

fn render<T: Serialize + ?Sized>(
    format: Format,
    value: &T,
    csv: impl FnOnce() -> twoway_core::Result<String>,
) -> Result<String, CliError> {
    Ok(match format {
        Format::Csv => csv()?,
        Format::Json => to_json(value)?,
    })
}

pub fn keyrate(o: &Options) -> Result<Outcome, CliError> {
    let t = single_t(o, "keyrate")?;
    let omega = required_omega(o, "keyrate")?;
    let mu = o.mu.unwrap_or(DEFAULT_MODULATION);
    let attack = match (o.attack.as_slice(), o.g, o.g_prime) {
        ([], None, None) => return Err(usage("keyrate needs --attack or --g/--g-prime")),
        ([name], None, None) => attack_from_class(name.parse()?, omega)?,
        ([], g, g_prime) => {
            let a = AttackParams::new(omega, g.unwrap_or(0.0), g_prime.unwrap_or(0.0))?;
            a.check_physical()?;
            a
        }
        ([_], _, _) => return Err(usage("give either --attack or --g/--g-prime, not both")),
        _ => return Err(usage("keyrate takes a single --attack")),
    };
    let report = keyrate_report(t, &attack, mu)?;
    let text = render(o.format.unwrap_or_default(), &report, || {
        to_csv(std::slice::from_ref(&report))
    })?;
    Ok(Outcome {
        text,
        secure: report.R > 0.0,
    })
}

pub fn threshold(o: &Options) -> Result<Outcome, CliError> {
    no_custom_correlations(o, "threshold")?;
    let classes = classes(o)?;
    if classes.is_empty() {
        return Err(usage("threshold needs at least one --attack class"));
    }
    let grid = t_grid(
        o.t_min.unwrap_or(0.3),
        o.t_max.unwrap_or(0.99),
        o.t_step.unwrap_or(0.01),
    )?;
    let mut sources: Vec<CurveSource> = classes.into_iter().map(CurveSource::TwoWay).collect();
    if o.with_oneway {
        sources.push(CurveSource::OneWay);
    }
    let curves = sources
        .into_iter()
        .map(|s| threshold_curve(s, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let text = render(o.format.unwrap_or_default(), &curves, || {
        curves_to_csv(&curves)
    })?;
    Ok(Outcome { text, secure: true })
}

pub fn scan(o: &Options) -> Result<Outcome, CliError> {
    no_custom_correlations(o, "scan")?;
    let t = single_t(o, "scan")?;
    let omega = required_omega(o, "scan")?;
    let step = o.step.unwrap_or(DEFAULT_SCAN_STEP);
    let grid = scan_grid(t, omega, step)?;
    let best = minimise(t, omega, step, &grid);

    #[derive(Serialize)]
    struct FullScan<'a> {
        minimum: &'a twoway_core::scan::ScanResult,
        grid: &'a [twoway_core::scan::ScanPoint],
    }
    let format = o.format.unwrap_or_default();
    let text = if o.full_grid {
        render(
            format,
            &FullScan {
                minimum: &best,
                grid: &grid,
            },
            || to_csv(&grid),
        )?
    } else {
        render(format, &best, || to_csv(std::slice::from_ref(&best)))?
    };
    Ok(Outcome {
        text,
        secure: best.R_min > 0.0,
    })
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize)]
pub struct OnewayRow {
    pub T: f64,
    pub omega: f64,
    pub R: f64,
}

impl CsvRecord for OnewayRow {
    const HEADER: &'static [&'static str] = &["T", "omega", "R"];

    fn fields(&self) -> Vec<String> {
        [self.T, self.omega, self.R]
            .into_iter()
            .map(format_number)
            .collect()
    }
}

pub fn oneway(o: &Options) -> Result<Outcome, CliError> {
    no_custom_correlations(o, "oneway")?;
    if o.t.is_empty() {
        return Err(usage("oneway needs --T"));
    }
    let omega = required_omega(o, "oneway")?;
    let rows =
        o.t.iter()
            .map(|&t| {
                Ok(OnewayRow {
                    T: t,
                    omega,
                    R: oneway_keyrate(t, omega)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
    let text = render(o.format.unwrap_or_default(), &rows, || to_csv(&rows))?;
    Ok(Outcome {
        text,
        secure: rows.iter().all(|r| r.R > 0.0),
    })
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize)]
pub struct AppendixTable {
    pub T: f64,
    pub information: Vec<AppendixRow>,
    pub variations: Vec<RelativeVariation>,
}

pub fn appendix(o: &Options) -> Result<Outcome, CliError> {
    no_custom_correlations(o, "appendix")?;
    if o.t.is_empty() {
        return Err(usage("appendix needs --T"));
    }
    let mu = o.mu.unwrap_or(DEFAULT_MODULATION);
    let omegas = omega_grid(
        o.omega_min.unwrap_or(1.0),
        o.omega_max.unwrap_or(5.0),
        o.omega_step.unwrap_or(0.5),
    )?;
    let tables =
        o.t.iter()
            .map(|&t| {
                Ok(AppendixTable {
                    T: t,
                    information: appendix_rows(t, mu, &omegas)?,
                    variations: relative_variations(t, mu, &omegas)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
    let text = render(o.format.unwrap_or_default(), &tables, || {
        let information: Vec<AppendixRow> =
            tables.iter().flat_map(|t| t.information.clone()).collect();
        let variations: Vec<RelativeVariation> =
            tables.iter().flat_map(|t| t.variations.clone()).collect();
        Ok(format!(
            "{}\n{}",
            to_csv(&information)?,
            to_csv(&variations)?
        ))
    })?;
    Ok(Outcome { text, secure: true })
}
