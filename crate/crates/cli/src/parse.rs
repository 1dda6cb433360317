//! Flag value parsers.

use num_complex::Complex64;

pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<Complex64>().map_err(|_| format!("invalid complex number {s:?}; expected a form like 0.3+0.1i"))
}

/// `"z,w"`.
pub fn pair(s: &str) -> Result<[Complex64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated complex numbers, got {s:?}"));
    }
    Ok([complex(parts[0])?, complex(parts[1])?])
}

pub fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// Linear path through `C²`: each coordinate is a constant or a range `a..b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub z: (Complex64, Complex64),
    pub w: (Complex64, Complex64),
}

impl PathSpec {
    /// `count` equispaced points including both ends.
    pub fn points(&self, count: usize) -> Vec<(f64, Complex64, Complex64)> {
        (0..count)
            .map(|i| {
                let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                (t, self.z.0 + (self.z.1 - self.z.0) * t, self.w.0 + (self.w.1 - self.w.0) * t)
            })
            .collect()
    }
}

/// `"z:0..0.999,w:0"`; a missing coordinate is held at zero.
pub fn path(s: &str) -> Result<PathSpec, String> {
    let zero = Complex64::new(0.0, 0.0);
    let mut z = None;
    let mut w = None;
    for part in s.split(',') {
        let (name, spec) = part.split_once(':').ok_or_else(|| format!("path segment {part:?} lacks a coordinate name"))?;
        let range = match spec.split_once("..") {
            Some((a, b)) => (complex(a)?, complex(b)?),
            None => {
                let v = complex(spec)?;
                (v, v)
            }
        };
        let slot = match name.trim() {
            "z" => &mut z,
            "w" => &mut w,
            other => return Err(format!("unknown path coordinate {other:?}; use z or w")),
        };
        if slot.replace(range).is_some() {
            return Err(format!("coordinate {name} given twice in path"));
        }
    }
    Ok(PathSpec { z: z.unwrap_or((zero, zero)), w: w.unwrap_or((zero, zero)) })
}
