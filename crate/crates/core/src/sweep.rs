//! One-parameter sweeps and their CSV encoding.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::lqu_closed_at;
use crate::error::{Error, Result};
use crate::metrology::qfi_closed;
use crate::params::DetectorParams;
use crate::vacuum::{kms_defect, ratio};

pub const CSV_HEADER: &str = "omega,beta,alpha_abs,tau,t_ratio,qfi,lqu,theta11,theta33,kms_defect";

/// Default β abscissa for figure curves.
pub const BETA_RANGE: (f64, f64) = (0.1, 30.0);
pub const BETA_STEPS: usize = 300;
/// Default |α| abscissa for figure curves.
pub const ALPHA_RANGE: (f64, f64) = (0.5, 12.0);
pub const ALPHA_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Varying {
    Beta,
    AlphaAbs,
    Omega,
    Tau,
}

impl Varying {
    pub fn name(self) -> &'static str {
        match self {
            Varying::Beta => "beta",
            Varying::AlphaAbs => "alpha_abs",
            Varying::Omega => "omega",
            Varying::Tau => "tau",
        }
    }
}

impl fmt::Display for Varying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Varying {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "beta" => Ok(Varying::Beta),
            "alpha_abs" | "alpha" => Ok(Varying::AlphaAbs),
            "omega" => Ok(Varying::Omega),
            "tau" => Ok(Varying::Tau),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected beta, alpha_abs, omega or tau)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(format!("unknown scale `{other}` (expected linear or log)")),
        }
    }
}

/// A validated one-parameter grid. `base` holds the three fixed parameters;
/// its value for the varying one is a placeholder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    varying: Varying,
    from: f64,
    to: f64,
    steps: usize,
    scale: Scale,
    base: DetectorParams,
}

impl SweepSpec {
    /// `omega`, `beta`, `alpha_abs`, `tau` are the fixed values; the one named
    /// by `varying` is ignored and may be anything.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        varying: Varying,
        from: f64,
        to: f64,
        steps: usize,
        scale: Scale,
        omega: f64,
        beta: f64,
        alpha_abs: f64,
        tau: f64,
    ) -> Result<Self> {
        if !(from.is_finite() && to.is_finite() && from < to) {
            return Err(Error::OutOfDomain {
                field: "from",
                value: from,
                allowed: "finite and strictly below `to`",
            });
        }
        if steps < 2 {
            return Err(Error::OutOfDomain {
                field: "steps",
                value: steps as f64,
                allowed: ">= 2",
            });
        }
        if scale == Scale::Log && from <= 0.0 {
            return Err(Error::OutOfDomain {
                field: "from",
                value: from,
                allowed: "> 0 on a log scale",
            });
        }
        let spec = SweepSpec {
            varying,
            from,
            to,
            steps,
            scale,
            base: DetectorParams::with_alpha_abs(1.0, 1.0, 1.0, 0.0)?,
        };
        // Both ends must be admissible, which covers every interior point too.
        let at = |v: f64| spec.point_with(v, omega, beta, alpha_abs, tau);
        at(to)?;
        let base = at(from)?;
        Ok(SweepSpec { base, ..spec })
    }

    fn point_with(
        &self,
        v: f64,
        omega: f64,
        beta: f64,
        alpha_abs: f64,
        tau: f64,
    ) -> Result<DetectorParams> {
        match self.varying {
            Varying::Beta => DetectorParams::with_alpha_abs(omega, v, alpha_abs, tau),
            Varying::AlphaAbs => DetectorParams::with_alpha_abs(omega, beta, v, tau),
            Varying::Omega => DetectorParams::with_alpha_abs(v, beta, alpha_abs, tau),
            Varying::Tau => DetectorParams::with_alpha_abs(omega, beta, alpha_abs, v),
        }
    }

    /// Log-spaced β sweep over the default range.
    pub fn beta_default(omega: f64, alpha_abs: f64, tau: f64) -> Result<Self> {
        Self::new(
            Varying::Beta,
            BETA_RANGE.0,
            BETA_RANGE.1,
            BETA_STEPS,
            Scale::Log,
            omega,
            1.0,
            alpha_abs,
            tau,
        )
    }

    /// Linear |α| sweep over the default range.
    pub fn alpha_default(omega: f64, beta: f64, tau: f64) -> Result<Self> {
        Self::new(
            Varying::AlphaAbs,
            ALPHA_RANGE.0,
            ALPHA_RANGE.1,
            ALPHA_STEPS,
            Scale::Linear,
            omega,
            beta,
            1.0,
            tau,
        )
    }

    pub fn varying(&self) -> Varying {
        self.varying
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// The abscissa. End points are exact.
    pub fn abscissa(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| match (i, self.scale) {
                (0, _) => self.from,
                (i, _) if i == n => self.to,
                (i, Scale::Linear) => self.from + i as f64 * (self.to - self.from) / n as f64,
                (i, Scale::Log) => {
                    self.from * ((self.to / self.from).ln() * i as f64 / n as f64).exp()
                }
            })
            .collect()
    }

    pub fn points(&self) -> Result<Vec<DetectorParams>> {
        let b = &self.base;
        self.abscissa()
            .into_iter()
            .map(|v| self.point_with(v, b.omega(), b.beta(), b.alpha_abs(), b.tau()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub omega: f64,
    pub beta: f64,
    pub alpha_abs: f64,
    pub tau: f64,
    pub t_ratio: f64,
    pub qfi: f64,
    pub lqu: f64,
    pub theta11: f64,
    pub theta33: f64,
    pub kms_defect: f64,
}

impl SweepRow {
    pub fn evaluate(p: &DetectorParams) -> Result<Self> {
        let r = ratio(p);
        let lqu = lqu_closed_at(r, p.tau())?;
        Ok(SweepRow {
            omega: p.omega(),
            beta: p.beta(),
            alpha_abs: p.alpha_abs(),
            tau: p.tau(),
            t_ratio: r.value(),
            qfi: qfi_closed(p)?.value(),
            lqu: lqu.value,
            theta11: lqu.theta11,
            theta33: lqu.theta33,
            kms_defect: kms_defect(p)?,
        })
    }

    pub fn fields(&self) -> [f64; 10] {
        [
            self.omega,
            self.beta,
            self.alpha_abs,
            self.tau,
            self.t_ratio,
            self.qfi,
            self.lqu,
            self.theta11,
            self.theta33,
            self.kms_defect,
        ]
    }

    /// One CSV line without the trailing newline.
    pub fn to_csv(&self) -> String {
        self.fields()
            .iter()
            .map(|v| format_float(*v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows in abscissa order. Evaluation is parallel; the order is not.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.points()?.par_iter().map(SweepRow::evaluate).collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.to_csv().as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// What a figure curve plots against its abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Qfi,
    Lqu,
}

/// One figure curve: an observable along a default sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub observable: Observable,
    pub varying: Varying,
    pub omega: f64,
    /// β for |α| sweeps, |α| for β sweeps.
    pub fixed: f64,
    pub tau: f64,
}

impl Curve {
    pub fn spec(&self) -> Result<SweepSpec> {
        match self.varying {
            Varying::Beta => SweepSpec::beta_default(self.omega, self.fixed, self.tau),
            Varying::AlphaAbs => SweepSpec::alpha_default(self.omega, self.fixed, self.tau),
            Varying::Omega | Varying::Tau => Err(Error::OutOfDomain {
                field: "varying",
                value: f64::NAN,
                allowed: "beta or alpha_abs for figure curves",
            }),
        }
    }

    /// e.g. `qfi_vs_beta_omega3_alpha6_tau-2.csv`.
    pub fn file_name(&self) -> String {
        let obs = match self.observable {
            Observable::Qfi => "qfi",
            Observable::Lqu => "lqu",
        };
        let fixed = match self.varying {
            Varying::Beta => format!("alpha{}", self.fixed),
            _ => format!("beta{}", self.fixed),
        };
        let axis = match self.varying {
            Varying::AlphaAbs => "alpha",
            v => v.name(),
        };
        format!(
            "{obs}_vs_{axis}_omega{}_{fixed}_tau{}.csv",
            self.omega, self.tau
        )
    }
}

const TAUS_ALL: [f64; 4] = [-2.0, -1.0, 0.5, 1.0];
const TAUS_GRID: [f64; 3] = [-2.0, 0.5, 1.0];
const OMEGAS: [f64; 4] = [1.0, 3.0, 5.0, 10.0];

/// Every curve of the published figure set, each listed once even when two
/// panels share it.
pub fn figure_curves() -> Vec<Curve> {
    use Observable::*;
    use Varying::*;
    let mut curves = Vec::new();
    let mut push = |c: Curve| {
        if !curves.contains(&c) {
            curves.push(c);
        }
    };
    let curve = |observable, varying, omega, fixed, tau| Curve {
        observable,
        varying,
        omega,
        fixed,
        tau,
    };

    // QFI against β at |α| = 6.
    for tau in TAUS_ALL {
        for omega in [3.0, 5.0, 10.0] {
            push(curve(Qfi, Beta, omega, 6.0, tau));
        }
    }
    for tau in [-2.0, 1.0] {
        for omega in OMEGAS {
            push(curve(Qfi, Beta, omega, 6.0, tau));
        }
    }
    // QFI against β at ω = 10 for several |α|.
    for tau in [-2.0, 1.0] {
        for alpha in [1.0, 3.0, 5.0, 10.0] {
            push(curve(Qfi, Beta, 10.0, alpha, tau));
        }
    }
    // LQU at ω = 3.
    for tau in TAUS_ALL {
        push(curve(Lqu, AlphaAbs, 3.0, 10.0, tau));
    }
    for tau in TAUS_ALL {
        push(curve(Lqu, Beta, 3.0, 6.0, tau));
    }
    // LQU over the ω × τ grid.
    for omega in OMEGAS {
        for tau in TAUS_GRID {
            push(curve(Lqu, AlphaAbs, omega, 10.0, tau));
        }
    }
    for omega in OMEGAS {
        for tau in TAUS_GRID {
            push(curve(Lqu, Beta, omega, 6.0, tau));
        }
    }
    curves
}
