use std::fs::File;
use std::io::{self, BufWriter, Write};

use crate::Failure;

/// Shortest decimal that parses back to the same `f64`; exponent form for
/// very small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `--out` target, standard output when absent.
pub fn open(out: Option<&str>) -> Result<Box<dyn Write>, Failure> {
    match out {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::io(path, e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

/// Canonical command line for the comment header, built from parsed values.
pub struct Invocation(Vec<String>);

impl Invocation {
    pub fn new(command: &str) -> Self {
        Self(vec!["quantret".into(), command.into()])
    }

    pub fn flag(mut self, name: &str, value: impl ToString) -> Self {
        self.0.push(format!("--{name}"));
        self.0.push(value.to_string());
        self
    }

    pub fn opt(self, name: &str, value: Option<impl ToString>) -> Self {
        match value {
            Some(v) => self.flag(name, v),
            None => self,
        }
    }

    pub fn line(&self) -> String {
        self.0.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [
            0.0,
            1.0,
            -2.5,
            0.1,
            1e-7,
            3.0e-300,
            1e20,
            0.3989422804014327,
            123456.789,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(2e-9), "2e-9");
    }
}
