//! The one-shot anchor table: every headline number this project claims,
//! recomputed from scratch and checked against its acceptance window.
//!
//! Default windows absorb rounding in the quoted values (0.6 m is quoted
//! where 0.593 m is computed); `--strict-tol` instead demands the quote
//! itself to a relative tolerance, so rows whose quotes were rounded fail
//! loudly and print what the computation actually gives.

use anyhow::Result;
use spatialbb::bound::{
    delta_bound, delta_closed, figure_curve, gamma_quadrature, rough_estimate_bilinear,
    rough_estimate_linear, BoundQuery, SpectralDensity, SPEED_OF_LIGHT,
};
use spatialbb::control::DeviceSequence;
use spatialbb::fiber::{BathMode, FiberModel, FiberParams};
use spatialbb::monomial::{eliminates_all, survival_weight, Monomial};
use spatialbb::propagate::compare;

const FIBER_VELOCITY: f64 = SPEED_OF_LIGHT / 1.6;
const TRANSIT_1KM: f64 = 1000.0 / FIBER_VELOCITY;
const DEBYE_CUTOFF: f64 = 2e13;
const DEFICIT: f64 = 1e-4;

/// How a computed value is judged.
enum Acceptance {
    /// Inside `[lo, hi]`; under `--strict-tol` the quoted value takes over.
    Window { lo: f64, hi: f64, quoted: f64 },
    /// Inside `[lo, hi]` always; there is no independently quoted number
    /// (consistency checks between two internal routes).
    WindowOnly { lo: f64, hi: f64 },
    /// A yes/no claim.
    Holds,
}

pub struct Row {
    pub id: &'static str,
    pub description: &'static str,
    accept: Acceptance,
    compute: fn() -> Result<f64>,
}

fn anchor_query() -> Result<BoundQuery> {
    Ok(BoundQuery::with_transit_time(DEFICIT, FIBER_VELOCITY, TRANSIT_1KM)?)
}

fn spacing(exponent: u32) -> Result<f64> {
    let sd = SpectralDensity::new(exponent, 1.0, DEBYE_CUTOFF)?;
    Ok(delta_bound(&sd, &anchor_query()?)?.delta_m)
}

fn bool_value(ok: bool) -> f64 {
    if ok {
        1.0
    } else {
        0.0
    }
}

fn elimination_ladder(seq: &DeviceSequence, killed: &[Monomial], survivors: &[Monomial]) -> Result<f64> {
    let mut ok = eliminates_all(seq, killed)?;
    for m in survivors {
        ok &= !survival_weight(seq, m)?.is_zero;
    }
    Ok(bool_value(ok))
}

fn seeded_protection_ratio() -> Result<f64> {
    let model = FiberModel::new(FiberParams {
        omega: [1.0, 1.0],
        baths: vec![BathMode { frequency: 0.6, coupling: 0.01 }],
        dim_per_mode: 3,
        epsilon: 0.0,
        seed: 7,
    })?;
    let report = compare(&model, &DeviceSequence::omega12(), 16, 0.5)?;
    let free = 1.0 - report.unprotected.fidelity;
    let protected = 1.0 - report.protected.fidelity;
    Ok(bool_value(free > 0.0 && protected <= 0.1 * free))
}

pub fn rows() -> Vec<Row> {
    vec![
        Row {
            id: "spacing_ohmic_n1_m",
            description: "shifter spacing, Ohmic bath (n=1), Debye cutoff, 1 km span",
            accept: Acceptance::Window { lo: 5.5e5, hi: 6.5e5, quoted: 6e5 },
            compute: || spacing(1),
        },
        Row {
            id: "spacing_superohmic_n2_m",
            description: "shifter spacing, super-Ohmic bath (n=2)",
            accept: Acceptance::Window { lo: 0.55, hi: 0.65, quoted: 0.6 },
            compute: || spacing(2),
        },
        Row {
            id: "spacing_debye_n3_m",
            description: "shifter spacing, Debye-type bath (n=3)",
            accept: Acceptance::Window { lo: 1.0e-7, hi: 1.6e-7, quoted: 1e-7 },
            compute: || spacing(3),
        },
        Row {
            id: "estimate_linear_spacing_m",
            description: "rough estimate, linear budget: spacing over 1 km",
            accept: Acceptance::Window { lo: 20.0 - 1e-9, hi: 20.0 + 1e-9, quoted: 20.0 },
            compute: || Ok(rough_estimate_linear(0.95, 1e-4, 1000.0)?.spacing_m),
        },
        Row {
            id: "estimate_linear_cycles",
            description: "rough estimate, linear budget: cycle count N",
            accept: Acceptance::Window { lo: 25.0 - 1e-9, hi: 25.0 + 1e-9, quoted: 25.0 },
            compute: || Ok(rough_estimate_linear(0.95, 1e-4, 1000.0)?.cycles),
        },
        Row {
            id: "estimate_linear_shifters",
            description: "rough estimate, linear budget: shifter count",
            accept: Acceptance::Window { lo: 50.0 - 1e-9, hi: 50.0 + 1e-9, quoted: 50.0 },
            compute: || Ok(rough_estimate_linear(0.95, 1e-4, 1000.0)?.shifters),
        },
        Row {
            id: "estimate_bilinear_cycles",
            description: "rough estimate, bilinear budget: cycle count 5/sqrt(20)",
            accept: Acceptance::Window { lo: 1.1180 - 1e-3, hi: 1.1180 + 1e-3, quoted: 1.2 },
            compute: || Ok(rough_estimate_bilinear(0.95, 1e-4, 1000.0)?.cycles),
        },
        Row {
            id: "estimate_bilinear_spacing_m",
            description: "rough estimate, bilinear budget: spacing over 1 km",
            accept: Acceptance::Window { lo: 90.0, hi: 112.0, quoted: 100.0 },
            compute: || Ok(rough_estimate_bilinear(0.95, 1e-4, 1000.0)?.spacing_m),
        },
        Row {
            id: "eliminate_linear_pairs",
            description: "parity pairs kill all linear terms; bilinears survive",
            accept: Acceptance::Holds,
            compute: || {
                let survivors: Vec<Monomial> = Monomial::set_a()
                    .into_iter()
                    .chain(Monomial::set_b())
                    .chain(Monomial::set_c())
                    .collect();
                elimination_ladder(
                    &DeviceSequence::omega12(),
                    &Monomial::linear_set(),
                    &survivors,
                )
            },
        },
        Row {
            id: "eliminate_bilinear_fourstep",
            description: "four-step cycle also kills mode-mixing/squeezing bilinears",
            accept: Acceptance::Holds,
            compute: || {
                let killed: Vec<Monomial> = Monomial::linear_set()
                    .into_iter()
                    .chain(Monomial::set_a())
                    .collect();
                let survivors: Vec<Monomial> =
                    Monomial::set_b().into_iter().chain(Monomial::set_c()).collect();
                elimination_ladder(&DeviceSequence::omega1234(), &killed, &survivors)
            },
        },
        Row {
            id: "eliminate_all_eightstep",
            description: "eight-step cycle kills every non-occupation bilinear",
            accept: Acceptance::Holds,
            compute: || {
                let killed: Vec<Monomial> = Monomial::linear_set()
                    .into_iter()
                    .chain(Monomial::set_a())
                    .chain(Monomial::set_b())
                    .collect();
                elimination_ladder(&DeviceSequence::eight_step(), &killed, &Monomial::set_c())
            },
        },
        Row {
            id: "gamma_quarter_checkpoint",
            description: "dephasing integral, n=2 at x=1: exactly 1/4",
            accept: Acceptance::Window { lo: 0.25 - 1e-8, hi: 0.25 + 1e-8, quoted: 0.25 },
            compute: || Ok(gamma_quadrature(&SpectralDensity::new(2, 1.0, 1.0)?, 1.0)?),
        },
        Row {
            id: "solver_routes_agree_rel",
            description: "bisection vs closed-form spacing, n=2 anchor (relative gap)",
            accept: Acceptance::WindowOnly { lo: 0.0, hi: 1e-8 },
            compute: || {
                let sd = SpectralDensity::new(2, 1.0, DEBYE_CUTOFF)?;
                let q = anchor_query()?;
                let closed = delta_closed(&sd, &q)?;
                Ok((delta_bound(&sd, &q)?.delta_m / closed - 1.0).abs())
            },
        },
        Row {
            id: "protected_beats_free_seeded",
            description: "16-segment run: paired kicks cut the deficit 10x (seeded)",
            accept: Acceptance::Holds,
            compute: seeded_protection_ratio,
        },
    ]
}

pub struct Report {
    pub text: String,
    pub all_pass: bool,
}

pub fn list() -> String {
    let mut out = String::new();
    for row in rows() {
        out.push_str(&format!("{:<28} {}\n", row.id, row.description));
    }
    out
}

pub fn run(strict_tol: Option<f64>) -> Result<Report> {
    let mut text = String::new();
    let mut passed = 0usize;
    let all = rows();
    let total = all.len();
    for row in all {
        let value = (row.compute)()?;
        let (ok, detail) = judge(&row.accept, value, strict_tol);
        if ok {
            passed += 1;
        }
        let status = if ok { "pass" } else { "FAIL" };
        text.push_str(&format!("{status}  {:<28} {detail}\n", row.id));
    }
    let all_pass = passed == total;
    text.push_str(&format!(
        "overall: {} ({passed}/{total} rows)\n",
        if all_pass { "pass" } else { "FAIL" }
    ));
    Ok(Report { text, all_pass })
}

fn judge(accept: &Acceptance, value: f64, strict_tol: Option<f64>) -> (bool, String) {
    match accept {
        Acceptance::Holds => (
            value == 1.0,
            if value == 1.0 { "holds".to_string() } else { "violated".to_string() },
        ),
        Acceptance::WindowOnly { lo, hi } => (
            (*lo..=*hi).contains(&value),
            format!("computed {value:.11e}, window [{lo:.4e}, {hi:.4e}]"),
        ),
        Acceptance::Window { lo, hi, quoted } => match strict_tol {
            None => (
                (*lo..=*hi).contains(&value),
                format!("computed {value:.11e}, window [{lo:.4e}, {hi:.4e}]"),
            ),
            Some(tol) => {
                let rel = (value / quoted - 1.0).abs();
                (
                    rel <= tol,
                    format!(
                        "computed {} vs quoted {} (rel {rel:.3e}, tol {tol:.1e})",
                        short(value),
                        short(*quoted)
                    ),
                )
            }
        },
    }
}

/// Three-significant-digit rendering that stays readable across scales
/// (`0.593`, `6.163e5`, `1.325e-7`).
fn short(value: f64) -> String {
    let magnitude = value.abs();
    if magnitude == 0.0 || (1e-3..1e4).contains(&magnitude) {
        format!("{value:.3}")
    } else {
        format!("{value:.3e}")
    }
}

/// The spacing-versus-cutoff tables behind the headline anchors, as CSV.
pub fn curve_csv(exponent: u32) -> Result<String> {
    let q = anchor_query()?;
    let points = figure_curve(exponent, 1.0, 1e12, 1e14, 25, &q)?;
    let mut out = String::from("omega_c_rad_s,delta_m\n");
    for (omega_c, delta_m) in points {
        out.push_str(&format!("{omega_c:.11e},{delta_m:.11e}\n"));
    }
    Ok(out)
}
