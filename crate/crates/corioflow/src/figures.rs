//! CSV emission for the two standard instability plots: growth rate versus η
//! at fixed l, and the (η, l) map of the unstable set S with its core S′.

use std::fmt::Write as _;
use std::path::Path;

use corioflow_regimes::growth_rate;

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// rate(η) at fixed l: columns `eta,rate`.
    EigenCurve,
    /// rate over an (η, l) lattice with membership flags:
    /// columns `eta,l,rate,in_S,in_Sprime`.
    InstabilityMap,
}

#[derive(Debug, Clone, Copy)]
pub struct FigureParams {
    pub beta: f64,
    pub nu: f64,
    /// Transverse wavenumber for the curve figure.
    pub l: i64,
    pub eta_min: f64,
    pub eta_max: f64,
    pub n_eta: usize,
    /// Lattice half-width in l for the map figure.
    pub l_max: i64,
}

impl FigureParams {
    /// Growth-rate curve at β = ½, l = 2 over η ∈ [0, 30].
    pub fn rate_curve(nu: f64) -> Self {
        FigureParams {
            beta: 0.5,
            nu,
            l: 2,
            eta_min: 0.0,
            eta_max: 30.0,
            n_eta: 601,
            l_max: 0,
        }
    }

    /// Unstable-set map over η ∈ [−16, 16], |l| ≤ 8 at ν = 10⁻³.
    pub fn set_map(beta: f64) -> Self {
        FigureParams {
            beta,
            nu: 1e-3,
            l: 0,
            eta_min: -16.0,
            eta_max: 16.0,
            n_eta: 321,
            l_max: 8,
        }
    }

    fn etas(&self) -> Vec<f64> {
        let n = self.n_eta.max(2);
        (0..n)
            .map(|i| {
                self.eta_min + (self.eta_max - self.eta_min) * i as f64 / (n - 1) as f64
            })
            .collect()
    }
}

pub fn figure_csv(which: FigureKind, params: &FigureParams) -> Result<String> {
    let mut out = String::new();
    match which {
        FigureKind::EigenCurve => {
            out.push_str("eta,rate\n");
            for eta in params.etas() {
                let rate = growth_rate(params.beta, params.nu, eta, params.l)?;
                writeln!(out, "{eta},{rate}").expect("string write");
            }
        }
        FigureKind::InstabilityMap => {
            out.push_str("eta,l,rate,in_S,in_Sprime\n");
            let threshold =
                0.5 * ((params.beta * (1.0 - params.beta)).sqrt() - params.nu);
            for l in -params.l_max..=params.l_max {
                for eta in params.etas() {
                    if eta == 0.0 && l == 0 {
                        continue; // rate undefined at the origin of the lattice
                    }
                    let rate = growth_rate(params.beta, params.nu, eta, l)?;
                    writeln!(
                        out,
                        "{eta},{l},{rate},{},{}",
                        u8::from(rate > 0.0),
                        u8::from(rate > threshold)
                    )
                    .expect("string write");
                }
            }
        }
    }
    Ok(out)
}

pub fn emit_figure_data(which: FigureKind, params: &FigureParams, path: &Path) -> Result<()> {
    let csv = figure_csv(which, params)?;
    std::fs::write(path, csv)?;
    Ok(())
}
