use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Dimension limits applied before any computation starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub n: usize,
    pub m: usize,
    pub order: u32,
    pub degree: u32,
    /// Lie algebra and representation dimensions for Chevalley–Eilenberg input.
    pub lie_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            n: 4,
            m: 3,
            order: 4,
            degree: 6,
            lie_dim: 6,
        }
    }
}

fn over(what: &str, found: usize, cap: usize) -> CliResult<()> {
    if found > cap {
        Err(CliError::Cap {
            what: what.to_string(),
            found,
            cap,
        })
    } else {
        Ok(())
    }
}

impl Caps {
    pub fn nm(&self, n: usize, m: usize) -> CliResult<()> {
        over("n", n, self.n)?;
        over("m", m, self.m)
    }

    pub fn order(&self, k: u32) -> CliResult<()> {
        over("order", k as usize, self.order as usize)
    }

    pub fn degree(&self, d: u32) -> CliResult<()> {
        over("D", d as usize, self.degree as usize)
    }

    pub fn lie_dim(&self, dim: usize, rep_dim: usize) -> CliResult<()> {
        over("dim", dim, self.lie_dim)?;
        over("rep_dim", rep_dim, self.lie_dim)
    }
}

/// `n=4,m=3,order=4,D=6`; omitted keys keep their defaults.
impl FromStr for Caps {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value in --max-dim, got '{part}'")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad --max-dim value '{value}'")))?;
            let small = || u32::try_from(value).map_err(|_| CliError::Usage(format!("--max-dim {key} too large")));
            match key.trim() {
                "n" => caps.n = value,
                "m" => caps.m = value,
                "order" => caps.order = small()?,
                "D" => caps.degree = small()?,
                "dim" => caps.lie_dim = value,
                other => return Err(CliError::Usage(format!("unknown --max-dim key '{other}'"))),
            }
        }
        Ok(caps)
    }
}
