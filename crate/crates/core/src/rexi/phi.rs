use num_complex::Complex64;

/// Below this modulus ψ₁ and ψ₂ switch to their Taylor series.
pub const TAYLOR_SWITCH: f64 = 1e-2;
const TAYLOR_TERMS: usize = 8;

/// Which function a set of rational coefficients approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    /// ψ₀(z) = eᶻ
    Psi0,
    /// ψ₁(z) = (eᶻ − 1)/z
    Psi1,
    /// ψ₂(z) = (eᶻ − 1 − z)/z²
    Psi2,
}

impl FunctionId {
    pub fn order(self) -> usize {
        match self {
            FunctionId::Psi0 => 0,
            FunctionId::Psi1 => 1,
            FunctionId::Psi2 => 2,
        }
    }

    pub fn from_order(k: usize) -> Option<Self> {
        match k {
            0 => Some(FunctionId::Psi0),
            1 => Some(FunctionId::Psi1),
            2 => Some(FunctionId::Psi2),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionId::Psi0 => "psi0",
            FunctionId::Psi1 => "psi1",
            FunctionId::Psi2 => "psi2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "psi0" | "exp" => Some(FunctionId::Psi0),
            "psi1" => Some(FunctionId::Psi1),
            "psi2" => Some(FunctionId::Psi2),
            _ => None,
        }
    }

    pub fn eval(self, z: Complex64) -> Complex64 {
        phi_function(self.order(), z)
    }
}

/// `eᶻ − 1` without cancellation for small |z|.
fn exp_m1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// ψ_k(z) for k ∈ {0, 1, 2}.
///
/// # Panics
/// If `k > 2`.
pub fn phi_function(k: usize, z: Complex64) -> Complex64 {
    assert!(k <= 2, "psi_{k} is not provided");
    if k == 0 {
        z.exp()
    } else if z.norm() < TAYLOR_SWITCH {
        taylor(k, z)
    } else {
        closed_form(k, z)
    }
}

/// ψ_k(z) = Σ_j z^j/(j+k)!
fn taylor(k: usize, z: Complex64) -> Complex64 {
    let fact = (1..=k).map(|i| i as f64).product::<f64>();
    let mut term = Complex64::new(1.0 / fact, 0.0);
    let mut sum = term;
    for j in 1..TAYLOR_TERMS {
        term = term * z / (j + k) as f64;
        sum += term;
    }
    sum
}

fn closed_form(k: usize, z: Complex64) -> Complex64 {
    let p1 = exp_m1(z) / z;
    match k {
        1 => p1,
        _ => (p1 - 1.0) / z,
    }
}
