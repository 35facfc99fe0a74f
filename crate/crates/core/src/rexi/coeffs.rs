use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{ContourSpec, FunctionId};
use crate::error::{Error, Result};

/// Poles α_n and weights β_n of `f(x) ≈ Σ β_n/(x + α_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RexiCoefficients {
    alphas: Vec<Complex64>,
    betas: Vec<Complex64>,
    function_id: FunctionId,
    contour: ContourSpec,
}

impl RexiCoefficients {
    pub fn from_parts(
        alphas: Vec<Complex64>,
        betas: Vec<Complex64>,
        function_id: FunctionId,
        contour: ContourSpec,
    ) -> Result<Self> {
        if alphas.len() != betas.len() || alphas.is_empty() {
            return Err(Error::Contour(format!(
                "need matching nonempty coefficient lists, got {} poles and {} weights",
                alphas.len(),
                betas.len()
            )));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !alphas.iter().all(finite) || !betas.iter().all(finite) {
            return Err(Error::Contour("non-finite coefficient".into()));
        }
        Ok(RexiCoefficients {
            alphas,
            betas,
            function_id,
            contour,
        })
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Complex64] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn function_id(&self) -> FunctionId {
        self.function_id
    }

    pub fn contour(&self) -> &ContourSpec {
        &self.contour
    }

    pub fn max_abs_beta(&self) -> f64 {
        self.betas.iter().fold(0.0, |a, b| a.max(b.norm()))
    }

    /// `Σ β_n/(x + α_n)` summed in index order.
    pub fn eval_rational(&self, x: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, (a, b)) in self.alphas.iter().zip(&self.betas).enumerate() {
            let d = x + a;
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::PoleCollision { index: n });
            }
            acc += b / d;
        }
        Ok(acc)
    }

    /// Same sum with compensated (double-double style) accumulation, for
    /// observing cancellation at large radii.
    pub fn eval_rational_compensated(&self, x: Complex64) -> Result<Complex64> {
        let mut re = TwoSum::default();
        let mut im = TwoSum::default();
        for (n, (a, b)) in self.alphas.iter().zip(&self.betas).enumerate() {
            let d = x + a;
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::PoleCollision { index: n });
            }
            let t = b / d;
            re.add(t.re);
            im.add(t.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut w = std::io::BufWriter::new(w);
        let c = &self.contour;
        let io = |e| Error::io("<csv>", e);
        writeln!(w, "# function_id={}", self.function_id.as_str()).map_err(io)?;
        writeln!(w, "# radius={}", c.radius).map_err(io)?;
        writeln!(w, "# center_re={}", c.center.re).map_err(io)?;
        writeln!(w, "# center_im={}", c.center.im).map_err(io)?;
        writeln!(w, "# num_poles={}", c.num_poles).map_err(io)?;
        if let Some(p0) = c.p0 {
            writeln!(w, "# p0={p0}").map_err(io)?;
        }
        if let Some(p1) = c.p1_imag {
            writeln!(w, "# p1_imag={p1}").map_err(io)?;
        }
        let mut cw = csv::Writer::from_writer(w);
        cw.write_record(["re_alpha", "im_alpha", "re_beta", "im_beta"])?;
        for (a, b) in self.alphas.iter().zip(&self.betas) {
            cw.write_record(&[
                a.re.to_string(),
                a.im.to_string(),
                b.re.to_string(),
                b.im.to_string(),
            ])?;
        }
        cw.flush().map_err(io)?;
        Ok(())
    }

    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let text = std::io::read_to_string(r).map_err(|e| Error::io("<csv>", e))?;
        let mut meta = std::collections::HashMap::new();
        for line in text.lines() {
            if let Some(rest) = line.trim().strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
        }
        let get = |k: &str| -> Result<f64> {
            meta.get(k)
                .ok_or_else(|| Error::data(format!("coefficient file lacks '{k}'")))?
                .parse::<f64>()
                .map_err(|e| Error::data(format!("bad '{k}': {e}")))
        };
        let fid_str = meta
            .get("function_id")
            .ok_or_else(|| Error::data("coefficient file lacks 'function_id'"))?;
        let function_id = FunctionId::parse(fid_str)
            .ok_or_else(|| Error::data(format!("unknown function_id '{fid_str}'")))?;
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(Error::data(format!("expected 4 columns, got {}", rec.len())));
            }
            let v: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::data(format!("bad coefficient value: {e}")))?;
            alphas.push(Complex64::new(v[0], v[1]));
            betas.push(Complex64::new(v[2], v[3]));
        }
        let contour = ContourSpec {
            radius: get("radius")?,
            center: Complex64::new(get("center_re")?, get("center_im")?),
            num_poles: get("num_poles")? as usize,
            p0: get("p0").ok(),
            p1_imag: get("p1_imag").ok(),
        };
        if contour.num_poles != alphas.len() {
            return Err(Error::data(format!(
                "header says {} poles, file has {}",
                contour.num_poles,
                alphas.len()
            )));
        }
        Self::from_parts(alphas, betas, function_id, contour)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}

#[derive(Default)]
struct TwoSum {
    hi: f64,
    lo: f64,
}

impl TwoSum {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Trapezoidal Cauchy-integral coefficients on `contour`:
/// `α_n = −(R e^{iθ_n} + μ)`, `β_n = −(1/N) R e^{iθ_n} f(R e^{iθ_n} + μ)`.
pub fn circle_contour_coeffs(function_id: FunctionId, contour: &ContourSpec) -> Result<RexiCoefficients> {
    contour.validate()?;
    let n_poles = contour.num_poles;
    let mut alphas = Vec::with_capacity(n_poles);
    let mut betas = Vec::with_capacity(n_poles);
    for n in 1..=n_poles {
        // mirror the lower half of the circle so conjugate nodes are exact
        let k = n % n_poles;
        let w = if 2 * k == n_poles {
            Complex64::new(-contour.radius, 0.0)
        } else if 2 * k > n_poles {
            Complex64::from_polar(contour.radius, contour.theta(n_poles - k)).conj()
        } else {
            Complex64::from_polar(contour.radius, contour.theta(k))
        };
        let z = w + contour.center;
        let fz = function_id.eval(z);
        if !(fz.re.is_finite() && fz.im.is_finite()) {
            return Err(Error::Contour(format!(
                "{} overflows at contour node {n} (z = {}{:+}i)",
                function_id.as_str(),
                z.re,
                z.im
            )));
        }
        alphas.push(-z);
        betas.push(-(w * fz) / n_poles as f64);
    }
    RexiCoefficients::from_parts(alphas, betas, function_id, *contour)
}

/// Growth of the weights on an origin-centered circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationReport {
    pub radius: f64,
    pub num_poles: usize,
    pub max_abs_beta: f64,
}

pub fn cancellation_diagnostic(radius: f64, num_poles: usize) -> Result<CancellationReport> {
    let contour = ContourSpec::circle(radius, Complex64::new(0.0, 0.0), num_poles)?;
    let c = circle_contour_coeffs(FunctionId::Psi0, &contour)?;
    Ok(CancellationReport {
        radius,
        num_poles,
        max_abs_beta: c.max_abs_beta(),
    })
}
