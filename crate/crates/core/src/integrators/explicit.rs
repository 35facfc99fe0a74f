use super::StateVector;

/// Classical midpoint RK2: `U* = U + Δt/2·f(U)`, `U′ = U + Δt·f(U*)`.
pub fn erk2_step<S: StateVector>(rhs: &mut impl FnMut(&S) -> S, u: &S, dt: f64) -> S {
    let k1 = rhs(u);
    let mut mid = u.clone();
    mid.axpy(0.5 * dt, &k1);
    let k2 = rhs(&mid);
    let mut out = u.clone();
    out.axpy(dt, &k2);
    out
}

/// Classical four-stage RK4.
pub fn rk4_step<S: StateVector>(rhs: &mut impl FnMut(&S) -> S, u: &S, dt: f64) -> S {
    let k1 = rhs(u);
    let mut s = u.clone();
    s.axpy(0.5 * dt, &k1);
    let k2 = rhs(&s);
    let mut s = u.clone();
    s.axpy(0.5 * dt, &k2);
    let k3 = rhs(&s);
    let mut s = u.clone();
    s.axpy(dt, &k3);
    let k4 = rhs(&s);
    let mut out = u.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    out
}

/// Explicit RK of order 1 (forward Euler), 2, or 4.
pub fn erk_step<S: StateVector>(order: usize, rhs: &mut impl FnMut(&S) -> S, u: &S, dt: f64) -> S {
    match order {
        1 => {
            let k = rhs(u);
            let mut out = u.clone();
            out.axpy(dt, &k);
            out
        }
        2 => erk2_step(rhs, u, dt),
        4 => rk4_step(rhs, u, dt),
        _ => panic!("explicit RK of order {order} is not provided"),
    }
}
