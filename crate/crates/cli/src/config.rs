//! Line-oriented config files describing either a Dirichlet series with its
//! gamma data or a two-variable Bessel-series candidate.
//!
//! Format: `#` comments, `[section]` headers, `key = value` lines; list
//! values are comma-separated.  Sections:
//!
//! ```text
//! [function]            # Dirichlet-series data
//! builtin = zeta        # or: delta | zeta-squared | dirichlet, q, k
//! name = my-function    # custom functions: free-form label
//! pole_order = 1
//! residue_re = 1.0
//! residue_im = 0.0
//! theta_bound = 0.0
//! ramanujan_eps = 0.0
//!
//! [gamma]               # custom functions only
//! epsilon_re = 1.0
//! epsilon_im = 0.0
//! Q = 0.5641895835477563
//! factor = 0.5, 0.0, 0.0        # weight, Re mu, Im mu (repeatable)
//!
//! [coefficients]        # custom functions only
//! a = 1, 1.0, 0.0               # index, Re, Im (repeatable)
//! euler = 2, -1.0, 0.0, ...     # prime, then A_1, A_2, ... as Re, Im pairs
//! zeta_background = false       # unlisted primes behave like the zeta factor
//!
//! [gl2]                 # Bessel-series candidate
//! builtin = delta
//! n = 256               # coefficient budget for the builtin
//! alpha = 0.5           # custom: orders, scale, growth claim
//! beta_re = 0.5
//! beta_im = 0.0
//! q = 1.0
//! growth_c = 1.0
//! growth_eps = 0.0
//!
//! [check]               # per-file defaults, overridden by CLI flags
//! tol = 1e-8            # residual tolerance (fe-check, converse-check)
//! grid = 0.7, 1.0, 1.4  # fe-check scales, or converse-check radii
//! xmax = 1000000        # largest stats checkpoint
//! max_terms = 100000    # realized coefficient budget
//! ```
//!
//! `dirichlet, q, k` selects the `k`-th primitive non-principal character
//! of modulus `q` (0-based, enumeration order of the character group).

use selberg_core::characters::CharacterGroup;
use selberg_core::converse::GL2Params;
use selberg_core::lfunc::{product, CoefficientSource, GammaFactor, SelbergFunction};
use selberg_core::Complex;

use std::collections::BTreeMap;

/// Parsed config: a Dirichlet-series description or a Bessel-series one.
#[derive(Debug)]
pub enum Parsed {
    Function(FunctionSpec),
    Gl2(Gl2Spec),
}

impl Parsed {
    pub fn check(&self) -> &CheckDefaults {
        match self {
            Parsed::Function(f) => &f.check,
            Parsed::Gl2(g) => &g.check,
        }
    }

    pub fn into_function(self) -> Result<FunctionSpec, String> {
        match self {
            Parsed::Function(f) => Ok(f),
            Parsed::Gl2(_) => {
                Err("this command needs a [function] config, found a [gl2] one".into())
            }
        }
    }

    pub fn into_gl2(self) -> Result<Gl2Spec, String> {
        match self {
            Parsed::Gl2(g) => Ok(g),
            Parsed::Function(_) => {
                Err("this command needs a [gl2] config, found a [function] one".into())
            }
        }
    }
}

/// Optional per-file defaults from the `[check]` section.
#[derive(Clone, Debug, Default)]
pub struct CheckDefaults {
    pub tol: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub xmax: Option<f64>,
    pub max_terms: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Builtin {
    Zeta,
    ZetaSquared,
    Delta,
    Dirichlet { modulus: u64, index: usize },
}

/// Dirichlet-series description prior to realizing coefficients.
#[derive(Debug)]
pub struct FunctionSpec {
    pub builtin: Option<Builtin>,
    name: Option<String>,
    pole_order: u32,
    residue: Option<Complex>,
    theta_bound: f64,
    ramanujan_eps: f64,
    gamma: Option<GammaData>,
    explicit: Vec<(usize, Complex)>,
    euler: BTreeMap<u64, Vec<Complex>>,
    zeta_background: bool,
    pub check: CheckDefaults,
}

#[derive(Debug)]
struct GammaData {
    epsilon: Complex,
    q_scale: Option<f64>,
    factors: Vec<(f64, Complex)>,
}

impl FunctionSpec {
    /// Builds the function with `n_max` realized coefficients (explicit
    /// coefficient tables cap `n_max` at the table length).
    pub fn realize(&self, n_max: usize) -> Result<SelbergFunction, String> {
        if let Some(builtin) = &self.builtin {
            return realize_builtin(builtin, n_max);
        }
        let gamma_data = self
            .gamma
            .as_ref()
            .ok_or("custom functions need a [gamma] section")?;
        let q_scale = gamma_data.q_scale.ok_or("missing key Q in [gamma]")?;
        let gamma = GammaFactor::new(gamma_data.epsilon, q_scale, gamma_data.factors.clone())
            .map_err(|e| format!("[gamma]: {e}"))?;

        let (source, n_max) = if !self.explicit.is_empty() {
            if !self.euler.is_empty() {
                return Err("[coefficients] mixes explicit `a` entries with `euler` lines".into());
            }
            let len = self.explicit.iter().map(|&(n, _)| n).max().unwrap_or(0);
            let mut table = vec![Complex::new(0.0, 0.0); len];
            for &(n, v) in &self.explicit {
                table[n - 1] = v;
            }
            (CoefficientSource::Explicit(table), n_max.min(len))
        } else if !self.euler.is_empty() {
            (
                CoefficientSource::Euler {
                    locals: self.euler.clone(),
                    zeta_background: self.zeta_background,
                },
                n_max,
            )
        } else {
            return Err("custom functions need a [coefficients] section".into());
        };

        SelbergFunction::new(
            self.name.clone().unwrap_or_else(|| "custom".into()),
            source,
            gamma,
            self.pole_order,
            self.residue,
            self.theta_bound,
            self.ramanujan_eps,
            n_max,
        )
        .map_err(|e| format!("[function]: {e}"))
    }
}

fn realize_builtin(builtin: &Builtin, n_max: usize) -> Result<SelbergFunction, String> {
    match builtin {
        Builtin::Zeta => SelbergFunction::zeta(n_max).map_err(|e| e.to_string()),
        Builtin::ZetaSquared => {
            let z = SelbergFunction::zeta(n_max).map_err(|e| e.to_string())?;
            product(&z, &z).map_err(|e| e.to_string())
        }
        Builtin::Delta => SelbergFunction::ramanujan_delta(n_max).map_err(|e| e.to_string()),
        Builtin::Dirichlet { modulus, index } => {
            let chi = primitive_character(*modulus, *index)?;
            SelbergFunction::dirichlet(&chi, n_max).map_err(|e| e.to_string())
        }
    }
}

/// The `index`-th primitive non-principal character of the given modulus,
/// in the deterministic enumeration order of the character group.
pub fn primitive_character(
    modulus: u64,
    index: usize,
) -> Result<selberg_core::characters::DirichletCharacter, String> {
    let group = CharacterGroup::new(modulus).map_err(|e| e.to_string())?;
    let primitives: Vec<_> = group
        .characters()
        .into_iter()
        .filter(|chi| !chi.is_principal() && chi.is_primitive())
        .collect();
    primitives.get(index).cloned().ok_or(format!(
        "modulus {modulus} has {} primitive non-principal characters; index {index} is out of range",
        primitives.len()
    ))
}

/// Bessel-series description.
#[derive(Debug)]
pub struct Gl2Spec {
    builtin_delta: bool,
    n: Option<usize>,
    alpha: Option<f64>,
    beta: Complex,
    q: f64,
    growth_c: f64,
    growth_eps: f64,
    explicit: Vec<(usize, Complex)>,
    pub check: CheckDefaults,
}

impl Gl2Spec {
    pub fn realize(&self) -> Result<GL2Params, String> {
        if self.builtin_delta {
            return GL2Params::delta(self.n.unwrap_or(256)).map_err(|e| e.to_string());
        }
        let alpha = self.alpha.ok_or("missing key alpha in [gl2]")?;
        if self.explicit.is_empty() {
            return Err("custom [gl2] needs a [coefficients] section with `a` entries".into());
        }
        let len = self.explicit.iter().map(|&(n, _)| n).max().unwrap();
        let mut table = vec![Complex::new(0.0, 0.0); len];
        for &(n, v) in &self.explicit {
            table[n - 1] = v;
        }
        GL2Params::new(alpha, self.beta, self.q, table, self.growth_c, self.growth_eps)
            .map_err(|e| e.to_string())
    }
}

/// Parses the documented line-oriented format.
pub fn parse_config(text: &str) -> Result<Parsed, String> {
    let mut section: Option<String> = None;
    let mut saw_function = false;
    let mut saw_gl2 = false;

    let mut f = FunctionSpec {
        builtin: None,
        name: None,
        pole_order: 0,
        residue: None,
        theta_bound: 0.0,
        ramanujan_eps: 0.0,
        gamma: None,
        explicit: Vec::new(),
        euler: BTreeMap::new(),
        zeta_background: false,
        check: CheckDefaults::default(),
    };
    let mut g = Gl2Spec {
        builtin_delta: false,
        n: None,
        alpha: None,
        beta: Complex::new(0.5, 0.0),
        q: 1.0,
        growth_c: 1.0,
        growth_eps: 0.0,
        explicit: Vec::new(),
        check: CheckDefaults::default(),
    };
    let mut residue_re: Option<f64> = None;
    let mut residue_im: Option<f64> = None;
    let mut eps_re = 1.0f64;
    let mut eps_im = 0.0f64;
    let mut q_scale: Option<f64> = None;
    let mut factors: Vec<(f64, Complex)> = Vec::new();
    let mut saw_gamma = false;
    let mut beta_re = 0.5f64;
    let mut beta_im = 0.0f64;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(format!("line {lineno}: malformed section header `{line}`"));
            }
            let name = line[1..line.len() - 1].trim().to_ascii_lowercase();
            match name.as_str() {
                "function" => saw_function = true,
                "gl2" => saw_gl2 = true,
                "gamma" => {
                    saw_function = true;
                    saw_gamma = true;
                }
                "coefficients" | "check" => {}
                other => return Err(format!("line {lineno}: unknown section [{other}]")),
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(format!("line {lineno}: expected `key = value`, got `{line}`"))?;
        let key = key.trim();
        let values: Vec<&str> = value.split(',').map(str::trim).collect();
        let scalar = || -> Result<f64, String> {
            if values.len() != 1 {
                return Err(format!("line {lineno}: key `{key}` takes a single value"));
            }
            values[0]
                .parse::<f64>()
                .map_err(|_| format!("line {lineno}: `{}` is not a number", values[0]))
        };
        let nth = |i: usize| -> Result<f64, String> {
            values
                .get(i)
                .ok_or(format!("line {lineno}: key `{key}` needs more values"))?
                .parse::<f64>()
                .map_err(|_| format!("line {lineno}: `{}` is not a number", values[i]))
        };

        match section.as_deref() {
            Some("function") => match key {
                "builtin" => f.builtin = Some(parse_builtin(&values, lineno)?),
                "name" => f.name = Some(values.join(",").trim().to_string()),
                "pole_order" => f.pole_order = scalar()? as u32,
                "residue_re" => residue_re = Some(scalar()?),
                "residue_im" => residue_im = Some(scalar()?),
                "theta_bound" => f.theta_bound = scalar()?,
                "ramanujan_eps" => f.ramanujan_eps = scalar()?,
                other => return Err(format!("line {lineno}: unknown key `{other}` in [function]")),
            },
            Some("gamma") => match key {
                "epsilon_re" => eps_re = scalar()?,
                "epsilon_im" => eps_im = scalar()?,
                "Q" | "q" => q_scale = Some(scalar()?),
                "factor" => {
                    if values.len() != 3 {
                        return Err(format!(
                            "line {lineno}: `factor` takes weight, Re mu, Im mu"
                        ));
                    }
                    let (w, mu_re, mu_im) = (nth(0)?, nth(1)?, nth(2)?);
                    if mu_re < 0.0 {
                        return Err(format!(
                            "line {lineno}: gamma shifts require Re mu >= 0, got {mu_re}"
                        ));
                    }
                    factors.push((w, Complex::new(mu_re, mu_im)));
                }
                other => return Err(format!("line {lineno}: unknown key `{other}` in [gamma]")),
            },
            Some("coefficients") => match key {
                "a" => {
                    if values.len() != 3 {
                        return Err(format!("line {lineno}: `a` takes index, Re, Im"));
                    }
                    let n = nth(0)? as usize;
                    if n == 0 {
                        return Err(format!("line {lineno}: coefficient index must be >= 1"));
                    }
                    let entry = (n, Complex::new(nth(1)?, nth(2)?));
                    if saw_gl2 {
                        g.explicit.push(entry);
                    } else {
                        f.explicit.push(entry);
                    }
                }
                "euler" => {
                    if values.len() < 3 || values.len() % 2 == 0 {
                        return Err(format!(
                            "line {lineno}: `euler` takes a prime then Re, Im pairs"
                        ));
                    }
                    let p = nth(0)? as u64;
                    let mut local = vec![Complex::new(1.0, 0.0)];
                    for pair in (1..values.len()).step_by(2) {
                        local.push(Complex::new(nth(pair)?, nth(pair + 1)?));
                    }
                    f.euler.insert(p, local);
                }
                "zeta_background" => {
                    f.zeta_background = parse_bool(values[0], lineno)?;
                }
                other => {
                    return Err(format!("line {lineno}: unknown key `{other}` in [coefficients]"))
                }
            },
            Some("gl2") => match key {
                "builtin" => {
                    if values != ["delta"] {
                        return Err(format!(
                            "line {lineno}: the only [gl2] builtin is `delta`"
                        ));
                    }
                    g.builtin_delta = true;
                }
                "n" => g.n = Some(scalar()? as usize),
                "alpha" => g.alpha = Some(scalar()?),
                "beta_re" => beta_re = scalar()?,
                "beta_im" => beta_im = scalar()?,
                "q" | "Q" => g.q = scalar()?,
                "growth_c" => g.growth_c = scalar()?,
                "growth_eps" => g.growth_eps = scalar()?,
                other => return Err(format!("line {lineno}: unknown key `{other}` in [gl2]")),
            },
            Some("check") => {
                let check = if saw_gl2 { &mut g.check } else { &mut f.check };
                match key {
                    "tol" => check.tol = Some(scalar()?),
                    "xmax" => check.xmax = Some(scalar()?),
                    "max_terms" => check.max_terms = Some(scalar()? as usize),
                    "grid" => {
                        let mut grid = Vec::new();
                        for v in &values {
                            grid.push(v.parse::<f64>().map_err(|_| {
                                format!("line {lineno}: `{v}` is not a number")
                            })?);
                        }
                        check.grid = Some(grid);
                    }
                    other => return Err(format!("line {lineno}: unknown key `{other}` in [check]")),
                }
            }
            _ => return Err(format!("line {lineno}: `{key}` appears before any section")),
        }
    }

    if saw_gl2 && saw_function {
        return Err("config mixes [function] and [gl2] sections".into());
    }
    if saw_gl2 {
        g.beta = Complex::new(beta_re, beta_im);
        return Ok(Parsed::Gl2(g));
    }
    if !saw_function {
        return Err("config defines neither [function] nor [gl2]".into());
    }
    if f.builtin.is_some() && (saw_gamma || !f.explicit.is_empty() || !f.euler.is_empty()) {
        return Err("builtin functions must not also define [gamma] or [coefficients]".into());
    }
    if saw_gamma {
        f.gamma = Some(GammaData {
            epsilon: Complex::new(eps_re, eps_im),
            q_scale,
            factors,
        });
    }
    if residue_re.is_some() || residue_im.is_some() {
        f.residue = Some(Complex::new(
            residue_re.unwrap_or(0.0),
            residue_im.unwrap_or(0.0),
        ));
    }
    Ok(Parsed::Function(f))
}

fn parse_builtin(values: &[&str], lineno: usize) -> Result<Builtin, String> {
    match values[0].to_ascii_lowercase().as_str() {
        "zeta" => Ok(Builtin::Zeta),
        "zeta-squared" | "zeta2" => Ok(Builtin::ZetaSquared),
        "delta" => Ok(Builtin::Delta),
        "dirichlet" => {
            if values.len() != 3 {
                return Err(format!(
                    "line {lineno}: use `builtin = dirichlet, modulus, index`"
                ));
            }
            let modulus = values[1]
                .parse::<u64>()
                .map_err(|_| format!("line {lineno}: bad modulus `{}`", values[1]))?;
            let index = values[2]
                .parse::<usize>()
                .map_err(|_| format!("line {lineno}: bad index `{}`", values[2]))?;
            Ok(Builtin::Dirichlet { modulus, index })
        }
        other => Err(format!(
            "line {lineno}: unknown builtin `{other}` (try zeta, zeta-squared, delta, dirichlet)"
        )),
    }
}

fn parse_bool(value: &str, lineno: usize) -> Result<bool, String> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("line {lineno}: `{other}` is not a boolean")),
    }
}
