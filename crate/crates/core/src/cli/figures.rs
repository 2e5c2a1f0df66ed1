//! Named presets that reproduce the standard plots as data files. Each
//! preset is an ordinary command line, so its output can be regenerated by
//! hand.

use super::output::{render, Format, Table};
use super::{commands, Cli, FigureArgs, EXIT_OK};
use crate::{Error, Result};
use clap::Parser;
use serde_json::json;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub args: &'static str,
}

pub fn presets() -> Vec<Preset> {
    let p = |name, description, args| Preset { name, description, args };
    vec![
        p("ho_wavefunction_rho4_s4", "horocyclic wavefunction along y~ at x~ = 0, rho = s = 4", "eval ho --rho 4 --s 4 --xt 0 --yt 0.01:3:300"),
        p("ps_potential_m0_m1_m2", "pseudo-spherical centrifugal potential, m = 0, 1, 2", "potential ps --m 0,1,2 --tau 0.05:3:300"),
        p("ps_wavefunction_rho1_m0_m2", "pseudo-spherical wavefunction, rho = 1, R = 1, m = 0 and 2", "eval ps --rho 1 --m 0,2 --tau 0:3:300 --phi 0"),
        p("eq_potential_nu0_nu05_nu1", "equidistant potential, nu = 0, 1/2, 1", "potential eq --nu 0,0.5,1 --tau -4:4:401"),
        p("eq_even_rho1_nu2", "even equidistant wavefunction, rho = 1, nu = 2", "eval eq+ --rho 1 --nu 2 --tau1 -4:4:401 --tau2 0"),
        p("eq_odd_rho1_nu2", "odd equidistant wavefunction, rho = 1, nu = 2", "eval eq- --rho 1 --nu 2 --tau1 -4:4:401 --tau2 0"),
        p("eq1_rho1_nu2", "equidistant (1) wavefunction, rho = 1, nu = 2", "eval eq1 --rho 1 --nu 2 --tau1 -4:4:401 --tau2 0"),
        p("eq2_rho1_nu2", "equidistant (2) wavefunction, rho = 1, nu = 2", "eval eq2 --rho 1 --nu 2 --tau1 -4:4:401 --tau2 0"),
        p("u_plus_even_m_rho2", "U+ against nu, rho = 2, m = 2, 4, 6", "coeff U+ --rho 2 --m 2,4,6 --nu -6:6:600"),
        p("u_plus_odd_m_rho2", "U+ against nu, rho = 2, m = 1, 3, 5", "coeff U+ --rho 2 --m 1,3,5 --nu -6:6:600"),
        p("u_minus_even_m_rho2", "U- against nu, rho = 2, m = -2, 4, 6", "coeff U- --rho 2 --m -2,4,6 --nu -6:6:600"),
        p("u_minus_odd_m_rho2", "U- against nu, rho = 2, m = -1, 3, 5", "coeff U- --rho 2 --m -1,3,5 --nu -6:6:600"),
        p("contract_ps_R10", "scaled pseudo-spherical wavefunction against the Bessel limit, k = 1, m = 2, R = 10", "contract ps --k 1 --m 2 --R 10 --r 0:10:201 --samples"),
        p("contract_ps_R100", "scaled pseudo-spherical wavefunction against the Bessel limit, k = 1, m = 2, R = 100", "contract ps --k 1 --m 2 --R 100 --r 0:10:201 --samples"),
        p("contract_eq_R5", "scaled even equidistant wavefunction against the cosine limit, k = 1, k1 = 0.2, R = 5", "contract eq --k 1 --k1 0.2 --parity even --R 5 --x 0 --y -6:6:241 --samples"),
        p("contract_eq_R50", "scaled even equidistant wavefunction against the cosine limit, k = 1, k1 = 0.2, R = 50", "contract eq --k 1 --k1 0.2 --parity even --R 50 --x 0 --y -6:6:241 --samples"),
        p("contract_ho_x1", "scaled horocyclic wavefunction against the sine limit over R, k = 1, k2 = 1/sqrt2, x = 1", "contract ho --k 1 --k2 0.7071067811865476 --x 1 --y 0 --R 3:60:58 --samples"),
        p("contract_u_plus_m2_R4", "U+ against its flat limit over alpha, k = 1, m = 2, R = 4", "contract U --k 1 --m 2 --parity even --R 4 --alpha 0.02:3.1215926535897931:300 --samples"),
        p("contract_u_plus_m2_R20", "U+ against its flat limit over alpha, k = 1, m = 2, R = 20", "contract U --k 1 --m 2 --parity even --R 20 --alpha 0.02:3.1215926535897931:300 --samples"),
        p("contract_u_plus_m3_R4", "U+ against its flat limit over alpha, k = 1, m = 3, R = 4", "contract U --k 1 --m 3 --parity even --R 4 --alpha 0.02:3.1215926535897931:300 --samples"),
        p("contract_u_plus_m3_R20", "U+ against its flat limit over alpha, k = 1, m = 3, R = 20", "contract U --k 1 --m 3 --parity even --R 20 --alpha 0.02:3.1215926535897931:300 --samples"),
        p("contract_w", "W+ against its stationary-phase form over R, k = 1, k1 = k2' = 1/sqrt2", "contract W --k 1 --k1 0.7071067811865476 --k2p 0.7071067811865476 --R 1:60:60 --samples"),
        p("contract_v_m2", "V against its trigonometric limit over R, k = 1, k2 = 1/sqrt2, m = 2", "contract V --k 1 --k2 0.7071067811865476 --m 2 --R 1:40:40 --samples --single-k2"),
        p("contract_v_m1", "V against its trigonometric limit over R, k = 1, k2 = 1/sqrt2, m = 1", "contract V --k 1 --k2 0.7071067811865476 --m 1 --R 1:40:40 --samples --single-k2"),
    ]
}

fn find(name: &str) -> Result<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("unknown figure '{name}' (try `figure list`)")))
}

/// Renders one preset.
pub fn render_preset(p: &Preset, format: Format) -> Result<String> {
    let argv = std::iter::once("hyperbasis").chain(p.args.split_whitespace());
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Internal(format!("preset {}: {e}", p.name)))?;
    let mut out = commands::dispatch(&cli)?;
    out.provenance.quantity = format!("{}: {}", p.name, p.description);
    if let serde_json::Value::Object(m) = &mut out.provenance.config {
        m.insert("preset".into(), json!(p.name));
        m.insert("args".into(), json!(p.args));
    }
    Ok(render(&out.table, &out.provenance, format))
}

pub(super) fn run_figure(a: &FigureArgs, format: Format) -> Result<i32> {
    if a.name == "list" {
        let mut t = Table::new(&["name", "description", "args"]);
        for p in presets() {
            t.push(vec![p.name.into(), p.description.into(), p.args.into()]);
        }
        let prov = super::output::Provenance { quantity: "figure presets".into(), config: json!({"command": "figure", "name": "list"}) };
        print!("{}", render(&t, &prov, format));
        return Ok(EXIT_OK);
    }
    let chosen = if a.name == "all" { presets() } else { vec![find(&a.name)?] };
    let ext = match format {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    };
    // everything is computed before the first file is written
    let rendered: Vec<(String, String)> =
        chosen.iter().map(|p| Ok((format!("{}.{ext}", p.name), render_preset(p, format)?))).collect::<Result<_>>()?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", a.out_dir.display())))?;
    for (file, text) in rendered {
        let path = a.out_dir.join(&file);
        std::fs::write(&path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_unique_and_parse() {
        let ps = presets();
        let mut names: Vec<&str> = ps.iter().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), ps.len());
        for p in &ps {
            let argv = std::iter::once("hyperbasis").chain(p.args.split_whitespace());
            assert!(Cli::try_parse_from(argv).is_ok(), "{}", p.name);
        }
    }
}
