use num_complex::Complex64;

use crate::error::{Error, Result};

/// Circle `R e^{iθ} + μ` sampled at `θ_n = 2πn/N`, n = 1..N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub radius: f64,
    pub center: Complex64,
    pub num_poles: usize,
    /// Real point the circle was built through, when constructed from points.
    pub p0: Option<f64>,
    /// |Im p±1| of the imaginary-axis points, when constructed from points.
    pub p1_imag: Option<f64>,
}

impl ContourSpec {
    pub fn circle(radius: f64, center: Complex64, num_poles: usize) -> Result<Self> {
        let spec = ContourSpec {
            radius,
            center,
            num_poles,
            p0: None,
            p1_imag: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Contour(format!("radius must be positive, got {}", self.radius)));
        }
        if self.num_poles == 0 {
            return Err(Error::Contour("at least one pole is required".into()));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::Contour("non-finite contour center".into()));
        }
        Ok(())
    }

    pub fn with_num_poles(mut self, n: usize) -> Self {
        self.num_poles = n;
        self
    }

    /// Node angle θ_n for n = 1..N.
    pub fn theta(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 / self.num_poles as f64
    }

    /// Largest real part on the contour.
    pub fn max_real(&self) -> f64 {
        self.center.re + self.radius
    }
}

/// Circle through `p0` and `±i·p1_imag` with its center on the real axis.
pub fn shifted_contour_from_points(p0: f64, p1_imag: f64, num_poles: usize) -> Result<ContourSpec> {
    if p0 == 0.0 {
        return Err(Error::Contour(
            "p0 = 0 gives a circle of infinite radius".into(),
        ));
    }
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::Contour(format!("p0 must be positive, got {p0}")));
    }
    if !(p1_imag > 0.0 && p1_imag.is_finite()) {
        return Err(Error::Contour(format!("p1_imag must be positive, got {p1_imag}")));
    }
    let r = (p0 * p0 + p1_imag * p1_imag) / (2.0 * p0);
    let spec = ContourSpec {
        radius: r,
        center: Complex64::new(p0 - r, 0.0),
        num_poles,
        p0: Some(p0),
        p1_imag: Some(p1_imag),
    };
    spec.validate()?;
    Ok(spec)
}

pub const DEFAULT_BASE_RADIUS: f64 = 30.0;
pub const DEFAULT_BASE_DT: f64 = 480.0;
pub const DEFAULT_MIN_RADIUS: f64 = 5.0;

/// `max(min_radius, base_radius·dt/base_dt)`.
pub fn scale_radius_with_dt(dt: f64, base_radius: f64, base_dt: f64, min_radius: f64) -> f64 {
    assert!(dt > 0.0, "dt must be positive");
    min_radius.max(base_radius * dt / base_dt)
}

/// How a stepper obtains its contour for a given Δt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RexiConfig {
    /// Δt-independent circle through `p0` and `±i·p1_imag`.
    Shifted { p0: f64, p1_imag: f64, num_poles: usize },
    /// Origin-centered circle whose radius follows [`scale_radius_with_dt`].
    ScaledCircle {
        base_radius: f64,
        base_dt: f64,
        min_radius: f64,
        num_poles: usize,
    },
    /// Fixed circle.
    Circle { radius: f64, center: Complex64, num_poles: usize },
}

impl Default for RexiConfig {
    fn default() -> Self {
        RexiConfig::Shifted {
            p0: 10.0,
            p1_imag: 30.0,
            num_poles: 128,
        }
    }
}

impl RexiConfig {
    pub fn scaled_circle() -> Self {
        RexiConfig::ScaledCircle {
            base_radius: DEFAULT_BASE_RADIUS,
            base_dt: DEFAULT_BASE_DT,
            min_radius: DEFAULT_MIN_RADIUS,
            num_poles: 32,
        }
    }

    pub fn num_poles(&self) -> usize {
        match *self {
            RexiConfig::Shifted { num_poles, .. }
            | RexiConfig::ScaledCircle { num_poles, .. }
            | RexiConfig::Circle { num_poles, .. } => num_poles,
        }
    }

    pub fn with_num_poles(self, n: usize) -> Self {
        match self {
            RexiConfig::Shifted { p0, p1_imag, .. } => RexiConfig::Shifted {
                p0,
                p1_imag,
                num_poles: n,
            },
            RexiConfig::ScaledCircle {
                base_radius,
                base_dt,
                min_radius,
                ..
            } => RexiConfig::ScaledCircle {
                base_radius,
                base_dt,
                min_radius,
                num_poles: n,
            },
            RexiConfig::Circle { radius, center, .. } => RexiConfig::Circle {
                radius,
                center,
                num_poles: n,
            },
        }
    }

    pub fn contour(&self, dt: f64) -> Result<ContourSpec> {
        match *self {
            RexiConfig::Shifted {
                p0,
                p1_imag,
                num_poles,
            } => shifted_contour_from_points(p0, p1_imag, num_poles),
            RexiConfig::ScaledCircle {
                base_radius,
                base_dt,
                min_radius,
                num_poles,
            } => {
                if !(dt > 0.0) {
                    return Err(Error::config(format!("dt must be positive, got {dt}")));
                }
                let r = scale_radius_with_dt(dt, base_radius, base_dt, min_radius);
                ContourSpec::circle(r, Complex64::new(0.0, 0.0), num_poles)
            }
            RexiConfig::Circle {
                radius,
                center,
                num_poles,
            } => ContourSpec::circle(radius, center, num_poles),
        }
    }

    /// Short human-readable description, e.g. `shifted(p0=10,p1=30,N=128)`.
    pub fn describe(&self) -> String {
        match *self {
            RexiConfig::Shifted {
                p0,
                p1_imag,
                num_poles,
            } => format!("shifted(p0={p0},p1={p1_imag},N={num_poles})"),
            RexiConfig::ScaledCircle {
                base_radius,
                base_dt,
                min_radius,
                num_poles,
            } => format!(
                "scaled_circle(R={base_radius}@{base_dt}s,min={min_radius},N={num_poles})"
            ),
            RexiConfig::Circle {
                radius,
                center,
                num_poles,
            } => format!("circle(R={radius},mu={}{:+}i,N={num_poles})", center.re, center.im),
        }
    }
}
