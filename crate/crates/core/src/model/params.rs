use std::fmt;

/// Exponent bookkeeping of the bootstrap argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parameters {
    pub eps0: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta_n: f64,
    pub big_n: u32,
    pub l: f64,
}

impl Parameters {
    /// Derives `α`, `β`, `δ_N` and `l` from `(ε₀, δ, N)`.
    pub fn new(eps0: f64, delta: f64, big_n: u32) -> Self {
        let alpha = 1.0 / 6.0 - 2.0 * delta;
        Parameters {
            eps0,
            delta,
            alpha,
            beta: 1.0 - 3.0 * alpha,
            delta_n: 2.0 / (big_n as f64 - 2.0),
            big_n,
            l: 1.0 / 3.0 - 1.0 / 60.0,
        }
    }
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters::new(0.05, 1.0 / 480.0, 2400)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed amount by which the relation is violated (`≤ 0` when it holds).
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterReport {
    pub checks: Vec<RelationCheck>,
}

impl ParameterReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for ParameterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {} lhs={:.17e} rhs={:.17e} residual={:.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.lhs,
                c.rhs,
                c.residual
            )?;
        }
        Ok(())
    }
}

const REL_TOL: f64 = 1e-14;

fn equality(name: &'static str, lhs: f64, rhs: f64) -> RelationCheck {
    let residual = (lhs - rhs).abs();
    RelationCheck {
        name,
        lhs,
        rhs,
        residual,
        pass: residual <= REL_TOL * rhs.abs().max(1.0),
    }
}

fn at_most(name: &'static str, lhs: f64, rhs: f64) -> RelationCheck {
    let residual = lhs - rhs;
    RelationCheck {
        name,
        lhs,
        rhs,
        residual,
        pass: residual <= REL_TOL * rhs.abs().max(lhs.abs()),
    }
}

fn positive(name: &'static str, value: f64) -> RelationCheck {
    RelationCheck {
        name,
        lhs: value,
        rhs: 0.0,
        residual: -value,
        pass: value > 0.0,
    }
}

/// Checks every relation tying the exponents together.
pub fn validate_parameters(p: &Parameters) -> ParameterReport {
    let n = p.big_n as f64;
    let checks = vec![
        positive("eps0_positive", p.eps0),
        positive("delta_positive", p.delta),
        equality("alpha", p.alpha, 1.0 / 6.0 - 2.0 * p.delta),
        equality("beta", p.beta, 1.0 - 3.0 * p.alpha),
        at_most("delta_ge_5_over_N", 5.0 / n, p.delta),
        equality("delta_N", p.delta_n, 2.0 / (n - 2.0)),
        at_most("two_delta_N_le_delta", 2.0 * p.delta_n, p.delta),
        at_most("delta_le_1_over_480", p.delta, 1.0 / 480.0),
        equality("l", p.l, 1.0 / 3.0 - 1.0 / 60.0),
    ];
    ParameterReport { checks }
}
