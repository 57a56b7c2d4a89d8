//! Parsers for the compact range syntaxes used on the command line.

use trunclc::diagnostics::ProbeSchedule;
use trunclc::distributions::{builtin_registry, Constraint};
use trunclc::ParamSet;

use crate::error::{usage, CliResult};

fn number(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("{what}: `{s}` is not a number")))
}

/// `name=value`.
pub fn param(s: &str) -> CliResult<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| usage(format!("--param expects name=value, got `{s}`")))?;
    Ok((k.trim().to_string(), number(v, k)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scale {
    Linear,
    Log,
    Logit,
}

type Map = fn(f64) -> f64;

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn expit(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `axis=start:stop:steps:{linear|log|logit}` into the axis name and its
/// `steps` points, endpoints included exactly.
pub fn grid_axis(s: &str) -> CliResult<(String, Vec<f64>)> {
    let bad = || {
        usage(format!(
            "--grid expects axis=start:stop:steps:{{linear|log|logit}}, got `{s}`"
        ))
    };
    let (name, spec) = s.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let (start, stop) = (number(parts[0], name)?, number(parts[1], name)?);
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(usage("--grid needs at least one step"));
    }
    let scale = match parts[3] {
        "linear" => Scale::Linear,
        "log" => Scale::Log,
        "logit" => Scale::Logit,
        other => return Err(usage(format!("unknown grid scale `{other}`"))),
    };
    let (fwd, back): (Map, Map) = match scale {
        Scale::Linear => (|x| x, |x| x),
        Scale::Log if start > 0.0 && stop > 0.0 => (f64::ln, f64::exp),
        Scale::Logit if (0.0..1.0).contains(&start) && start > 0.0 && stop > 0.0 && stop < 1.0 => (logit, expit),
        _ => return Err(usage(format!("grid `{s}`: endpoints outside the domain of the scale"))),
    };
    let (t0, t1) = (fwd(start), fwd(stop));
    let values = (0..steps)
        .map(|k| match k {
            0 => start,
            k if k == steps - 1 => stop,
            k => back(t0 + (t1 - t0) * k as f64 / (steps - 1) as f64),
        })
        .collect();
    Ok((name.trim().to_string(), values))
}

/// Cartesian product of the grid axes (first axis outermost), each cell
/// completed with the fixed parameters. Integer-valued parameters are
/// rounded to the nearest integer.
pub fn expand_grid(family: &str, fixed: &[(String, f64)], axes: &[(String, Vec<f64>)]) -> CliResult<Vec<ParamSet>> {
    let spec = builtin_registry()
        .get(family)
        .ok_or_else(|| trunclc::Error::UnknownFamily(family.into()))?;
    let integer = |name: &str| {
        spec.params
            .iter()
            .any(|p| p.name == name && matches!(p.constraint, Constraint::PositiveInteger))
    };
    let mut cells = vec![fixed.iter().map(|(k, v)| (k.clone(), *v)).collect::<ParamSet>()];
    for (name, values) in axes {
        if fixed.iter().any(|(k, _)| k == name) {
            return Err(usage(format!("parameter `{name}` given both as --param and --grid")));
        }
        cells = cells
            .into_iter()
            .flat_map(|c| values.iter().map(move |&v| c.clone().with(name.clone(), v)))
            .collect();
    }
    for c in &mut cells {
        let rounded: Vec<(String, f64)> = c
            .iter()
            .filter(|(k, _)| integer(k))
            .map(|(k, v)| (k.to_string(), v.round()))
            .collect();
        for (k, v) in rounded {
            c.set(k, v);
        }
    }
    Ok(cells)
}

/// `auto`, `geometric-progression`, or `lo:hi:step:linear`. Linear probes
/// are depths in base standard deviations unless `absolute`.
pub fn probes(s: &str, absolute: bool) -> CliResult<ProbeSchedule> {
    match s {
        "auto" => return Ok(ProbeSchedule::Auto),
        "geometric-progression" => return Ok(ProbeSchedule::GeometricProgression),
        _ => {}
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 || parts[3] != "linear" {
        return Err(usage(format!(
            "--probe expects auto, geometric-progression or lo:hi:step:linear, got `{s}`"
        )));
    }
    let values = stepped(parts[0], parts[1], parts[2], "--probe")?;
    Ok(if absolute {
        ProbeSchedule::Values(values)
    } else {
        ProbeSchedule::Standardized(values)
    })
}

/// `start:stop:step`.
pub fn lower_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("--lower-grid expects start:stop:step, got `{s}`")));
    }
    stepped(parts[0], parts[1], parts[2], "--lower-grid")
}

/// `start, start + step, ...` up to `stop`, each point rounded to the
/// number of decimals written in the arguments so that `0:38:0.05` gives
/// `0.15` rather than `0.15000000000000002`.
fn stepped(start: &str, stop: &str, step: &str, what: &str) -> CliResult<Vec<f64>> {
    let (a, b, h) = (number(start, what)?, number(stop, what)?, number(step, what)?);
    if !h.is_finite() || h <= 0.0 || !a.is_finite() || !b.is_finite() || b < a {
        return Err(usage(format!("{what}: need finite start <= stop and step > 0")));
    }
    let decimals = [start, step]
        .iter()
        .map(|s| s.split_once('.').map_or(0, |(_, f)| f.trim().len()))
        .max()
        .unwrap_or(0);
    let count = ((b - a) / h + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(usage(format!("{what}: more than a million points")));
    }
    (0..=count)
        .map(|k| {
            let x = a + k as f64 * h;
            format!("{x:.decimals$}")
                .parse::<f64>()
                .map_err(|_| usage(format!("{what}: bad point")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_axes() {
        let (n, v) = grid_axis("lambda=0.1:1000:16:log").unwrap();
        assert_eq!(n, "lambda");
        assert_eq!(v.len(), 16);
        assert_eq!((v[0], v[15]), (0.1, 1000.0));
        assert!((v[1] / v[0] - v[2] / v[1]).abs() < 1e-12);
        let (_, v) = grid_axis("p=0.01:0.99:20:logit").unwrap();
        assert_eq!(v.len(), 20);
        assert!((logit(v[10]) + logit(v[9])).abs() < 1e-12);
        let (_, v) = grid_axis("mu=0:1:3:linear").unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
        assert!(grid_axis("p=0:1:5:logit").is_err());
        assert!(grid_axis("p=0.1:0.5:5").is_err());
        assert!(grid_axis("lambda=-1:4:3:log").is_err());
    }

    #[test]
    fn grid_product_rounds_integer_parameters() {
        let axes = vec![
            grid_axis("n=10:1000:3:log").unwrap(),
            grid_axis("p=0.2:0.8:2:linear").unwrap(),
        ];
        let cells = expand_grid("binomial", &[], &axes).unwrap();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[2].get("n"), Some(100.0));
        assert_eq!(cells[3].get("p"), Some(0.8));
        let fixed = vec![("sigma".to_string(), 2.0)];
        let cells = expand_grid("normal", &fixed, &[grid_axis("mu=0:1:2:linear").unwrap()]).unwrap();
        assert_eq!(cells[1].get("sigma"), Some(2.0));
        assert!(expand_grid("normal", &fixed, &[grid_axis("sigma=1:2:2:linear").unwrap()]).is_err());
    }

    #[test]
    fn probe_and_lower_grids() {
        assert_eq!(probes("auto", false).unwrap(), ProbeSchedule::Auto);
        match probes("0:50:1:linear", false).unwrap() {
            ProbeSchedule::Standardized(v) => assert_eq!(v.len(), 51),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            probes("0:5:1:linear", true).unwrap(),
            ProbeSchedule::Values(_)
        ));
        assert!(probes("0:5:1:log", false).is_err());
        let v = lower_grid("0:38:0.05").unwrap();
        assert_eq!(v.len(), 761);
        assert_eq!(v[3], 0.15);
        assert_eq!(*v.last().unwrap(), 38.0);
        assert_eq!(lower_grid("0:38:0.5").unwrap().len(), 77);
        assert!(lower_grid("1:0:1").is_err());
    }

    #[test]
    fn params() {
        assert_eq!(param("lambda=5").unwrap(), ("lambda".into(), 5.0));
        assert!(param("lambda").is_err());
        assert!(param("lambda=x").is_err());
    }
}
