use serde::{Deserialize, Serialize};
use systolic::diameter::{estimate_diameter_with, sampling_slack_tolerance, DiamEstimate, DiamOptions};
use systolic::fuchsian::{BallOptions, SurfaceModel};
use systolic::hplane::{bigon_holonomy, IsometryKind};
use systolic::hyptrig::*;
use systolic::systole::{compute_systole_with, BoundSource, SystoleOptions};
use systolic::{Exec, Result};

use crate::surface::SurfaceChoice;
use crate::SCHEMA;

/// Knobs shared by the surface commands.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub grid: usize,
    pub radius_slack: f64,
    pub cap: usize,
    pub exec: Exec,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            grid: systolic::diameter::DEFAULT_GRID,
            radius_slack: 1.0,
            cap: systolic::tol::DEFAULT_ELEMENT_CAP,
            exec: Exec::default(),
        }
    }
}

impl RunOptions {
    fn ball(&self) -> BallOptions {
        BallOptions { cap: self.cap, exec: self.exec, ..BallOptions::default() }
    }

    fn systole(&self) -> SystoleOptions {
        SystoleOptions { radius_slack: self.radius_slack, ball: self.ball(), ..SystoleOptions::default() }
    }

    fn diameter(&self) -> DiamOptions {
        DiamOptions { grid_resolution: self.grid, exec: self.exec, cap: self.cap }
    }
}

fn schema() -> String {
    SCHEMA.to_string()
}

/// One row of `bounds` / `table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    #[serde(default = "schema")]
    pub schema: String,
    #[serde(flatten)]
    pub bounds: BoundsReport,
}

impl BoundsRow {
    pub fn new(genus: u64) -> Result<Self> {
        Ok(BoundsRow { schema: schema(), bounds: BoundsReport::new(genus)? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigReport {
    pub schema: String,
    pub side: Side,
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
    pub cosh_half: f64,
    /// `None` when the curve has no geodesic representative.
    pub length: Option<f64>,
    pub oracle_kind: IsometryKind,
    pub oracle_length: Option<f64>,
    pub oracle_diff: Option<f64>,
}

impl TrigReport {
    pub fn new(side: Side, alpha: f64, beta: f64, d: f64) -> Result<Self> {
        let cfg = BigonConfig::new(alpha, beta, d, side)?;
        let cosh_half = bigon_cosh_half(&cfg)?;
        let length = bigon_geodesic_length(&cfg)?.length();
        let oracle = bigon_holonomy(&cfg);
        let oracle_diff = length.zip(oracle.translation_length).map(|(a, b)| (a - b).abs());
        Ok(TrigReport {
            schema: schema(),
            side,
            alpha,
            beta,
            d,
            cosh_half,
            length,
            oracle_kind: oracle.kind,
            oracle_length: oracle.translation_length,
            oracle_diff,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SysReport {
    pub schema: String,
    pub surface: SurfaceChoice,
    pub length: f64,
    pub word: String,
    pub certified_radius: f64,
    pub r_dom: f64,
    pub l0: f64,
    pub l0_source: BoundSource,
    pub ball_size: usize,
}

impl SysReport {
    pub fn compute(choice: SurfaceChoice, s: &SurfaceModel, opts: &RunOptions) -> Result<Self> {
        let r = compute_systole_with(s, &opts.systole())?;
        Ok(SysReport {
            schema: schema(),
            surface: choice,
            length: r.length,
            word: r.word.to_string(),
            certified_radius: r.certified_radius,
            r_dom: r.certificate.r_dom,
            l0: r.certificate.l0,
            l0_source: r.certificate.l0_source,
            ball_size: r.certificate.ball_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamReport {
    pub schema: String,
    pub surface: SurfaceChoice,
    #[serde(flatten)]
    pub estimate: DiamEstimate,
}

impl DiamReport {
    pub fn compute(choice: SurfaceChoice, s: &SurfaceModel, opts: &RunOptions) -> Result<Self> {
        Ok(DiamReport { schema: schema(), surface: choice, estimate: estimate_diameter_with(s, &opts.diameter())? })
    }
}

/// Signed slacks of the inequalities at `(sys, diam_upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slacks {
    pub main: f64,
    pub weak: f64,
    pub pants: f64,
    pub torus: f64,
    pub combined_bavard: f64,
    /// Main slack at the lower end of the diameter interval.
    pub main_at_lower: f64,
    /// How far `main_at_lower` may fall below zero given the sampling.
    pub sampling_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub surface: SurfaceChoice,
    pub genus: u64,
    pub sys: f64,
    pub sys_word: String,
    pub diam_lower: f64,
    pub diam_upper: f64,
    pub covering_radius: f64,
    pub sample_count: usize,
    pub relator_residual: f64,
    pub domain_area: f64,
    pub slacks: Slacks,
    pub bounds: BoundsReport,
    pub pass: bool,
}

impl VerificationReport {
    /// The pass rule: the main inequality holds at the upper diameter
    /// bound, the systole is below its genus bound and the diameter
    /// interval reaches the genus floor.
    pub fn passes(&self) -> bool {
        self.slacks.main >= 0.0
            && self.sys <= self.bounds.sys_upper() + 1e-9
            && self.diam_upper >= self.bounds.bavard_diam_lower - 1e-9
    }
}

/// Systole, diameter and all slacks for one surface.
pub fn verify(choice: SurfaceChoice, opts: &RunOptions) -> Result<VerificationReport> {
    let s = choice.build()?;
    let sys = compute_systole_with(&s, &opts.systole())?;
    let diam = estimate_diameter_with(&s, &opts.diameter())?;
    let (l, u) = (sys.length, diam.upper);
    let slacks = Slacks {
        main: main_inequality_slack(l, u),
        weak: weak_inequality_slack(l, u),
        pants: pants_case_slack(l, u),
        torus: torus_case_slack(l, u),
        combined_bavard: combined_bavard_slack(l, u),
        main_at_lower: main_inequality_slack(l, diam.lower),
        sampling_tolerance: sampling_slack_tolerance(diam.lower, diam.covering_radius),
    };
    let mut report = VerificationReport {
        schema: schema(),
        surface: choice,
        genus: s.genus(),
        sys: l,
        sys_word: sys.word.to_string(),
        diam_lower: diam.lower,
        diam_upper: u,
        covering_radius: diam.covering_radius,
        sample_count: diam.sample_count,
        relator_residual: s.relator_residual(),
        domain_area: s.domain()?.area(),
        slacks,
        bounds: BoundsReport::new(s.genus())?,
        pass: false,
    };
    report.pass = report.passes();
    Ok(report)
}
