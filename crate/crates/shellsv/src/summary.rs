//! Deterministic run-summary writer: a TOML-compatible nested map with a
//! fixed section and key order and floats at 17 significant digits, so the
//! same configuration always produces identical bytes.

use std::fmt::Write as _;

use crate::algebra::Vec3;
use crate::table::fmt_float;

/// Append-only summary document builder.
#[derive(Debug, Default)]
pub struct Summary {
    buf: String,
    in_section: bool,
}

impl Summary {
    pub fn new() -> Self {
        Summary::default()
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        if self.in_section || !self.buf.is_empty() {
            let _ = writeln!(self.buf);
        }
        let _ = writeln!(self.buf, "[{name}]");
        self.in_section = true;
        self
    }

    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        let _ = writeln!(self.buf, "{key} = {}", fmt_float(value));
        self
    }

    pub fn integer(&mut self, key: &str, value: i64) -> &mut Self {
        let _ = writeln!(self.buf, "{key} = {value}");
        self
    }

    pub fn boolean(&mut self, key: &str, value: bool) -> &mut Self {
        let _ = writeln!(self.buf, "{key} = {value}");
        self
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        let _ = writeln!(self.buf, "{key} = \"{value}\"");
        self
    }

    pub fn vec3(&mut self, key: &str, value: Vec3) -> &mut Self {
        let _ = writeln!(
            self.buf,
            "{key} = [{}, {}, {}]",
            fmt_float(value.x),
            fmt_float(value.y),
            fmt_float(value.z)
        );
        self
    }

    pub fn floats(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let items: Vec<String> = values.iter().map(|&v| fmt_float(v)).collect();
        let _ = writeln!(self.buf, "{key} = [{}]", items.join(", "));
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_order_and_parseable() {
        let mut s = Summary::new();
        s.section("run");
        s.text("mode", "exact").integer("grid_s", 512);
        s.section("coefficients");
        s.float("k_twist", -41.378_906_25)
            .vec3("a", Vec3::new(1.0, 2.0, 3.0));
        let text = s.finish();
        let parsed: toml::Value = toml::from_str(&text).expect("summary must stay valid TOML");
        assert_eq!(parsed["run"]["grid_s"].as_integer(), Some(512));
        assert!(text.find("[run]").unwrap() < text.find("[coefficients]").unwrap());
    }

    #[test]
    fn identical_inputs_identical_bytes() {
        let build = || {
            let mut s = Summary::new();
            s.section("a");
            s.float("x", 0.1 + 0.2);
            s.finish()
        };
        assert_eq!(build(), build());
    }
}
