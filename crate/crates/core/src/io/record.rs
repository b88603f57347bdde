//! Minimal TOML writer for result records. Every number is printed with 12
//! significant digits so records are stable and diff-friendly.

use std::fmt::Write;

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

#[derive(Debug, Default)]
pub(crate) struct Record {
    out: String,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    fn line(&mut self, key: &str, value: String) {
        writeln!(self.out, "{key} = {value}").expect("writing to a String");
    }

    pub fn num(&mut self, key: &str, x: f64) {
        self.line(key, format_number(x));
    }

    pub fn int(&mut self, key: &str, v: usize) {
        self.line(key, v.to_string());
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        self.line(key, v.to_string());
    }

    pub fn text(&mut self, key: &str, v: &str) {
        self.line(key, quote(v));
    }

    pub fn nums(&mut self, key: &str, xs: &[f64]) {
        self.line(key, num_array(xs));
    }

    pub fn ints(&mut self, key: &str, xs: &[usize]) {
        let items: Vec<String> = xs.iter().map(|v| v.to_string()).collect();
        self.line(key, format!("[{}]", items.join(", ")));
    }

    pub fn matrix(&mut self, key: &str, rows: &[Vec<f64>]) {
        let items: Vec<String> = rows.iter().map(|r| num_array(r)).collect();
        self.line(key, format!("[{}]", items.join(", ")));
    }

    pub fn table(&mut self, name: &str) {
        writeln!(self.out, "\n[{name}]").expect("writing to a String");
    }

    pub fn array_table(&mut self, name: &str) {
        writeln!(self.out, "\n[[{name}]]").expect("writing to a String");
    }

    pub fn finish(self) -> String {
        self.out
    }
}

fn num_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|v| format_number(*v)).collect();
    format!("[{}]", items.join(", "))
}
