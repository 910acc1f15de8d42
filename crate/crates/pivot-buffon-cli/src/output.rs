//! Deterministic JSON and CSV rendering.
//!
//! Floats are printed with 17 significant digits (`{:.16e}`), enough to
//! round-trip any f64, and field order is fixed, so repeated invocations
//! with the same inputs are byte-identical.

pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Float(x) => fmt_f64(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
        }
    }
}

/// An ordered set of named scalars.
pub struct Record {
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    pub fn float(&mut self, name: &'static str, value: f64) {
        self.fields.push((name, Value::Float(value)));
    }

    pub fn int(&mut self, name: &'static str, value: u64) {
        self.fields.push((name, Value::Int(value)));
    }

    pub fn bool(&mut self, name: &'static str, value: bool) {
        self.fields.push((name, Value::Bool(value)));
    }
}

pub enum Section {
    Object(Record),
    Array(Vec<Record>),
}

/// One output document: named sections in insertion order.
pub struct Document {
    sections: Vec<(&'static str, Section)>,
}

impl Document {
    pub fn new() -> Self {
        Self {
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &'static str, section: Section) {
        self.sections.push((name, section));
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (name, section)) in self.sections.iter().enumerate() {
            out.push_str(&format!("  \"{name}\": "));
            match section {
                Section::Object(record) => render_json_object(&mut out, record, "  "),
                Section::Array(rows) => {
                    out.push_str("[\n");
                    for (j, row) in rows.iter().enumerate() {
                        out.push_str("    ");
                        render_json_object(&mut out, row, "    ");
                        if j + 1 < rows.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    out.push_str("  ]");
                }
            }
            if i + 1 < self.sections.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }

    /// CSV with a header row. Array sections render one line per record;
    /// otherwise all object sections flatten into a single row.
    pub fn to_csv(&self) -> String {
        if let Some(rows) = self.sections.iter().find_map(|(_, s)| match s {
            Section::Array(rows) => Some(rows),
            Section::Object(_) => None,
        }) {
            let mut out = String::new();
            if let Some(first) = rows.first() {
                let header: Vec<&str> = first.fields.iter().map(|(n, _)| *n).collect();
                out.push_str(&header.join(","));
                out.push('\n');
                for row in rows {
                    let cells: Vec<String> = row.fields.iter().map(|(_, v)| v.render()).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            return out;
        }

        let mut names = Vec::new();
        let mut cells = Vec::new();
        for (_, section) in &self.sections {
            if let Section::Object(record) = section {
                for (name, value) in &record.fields {
                    names.push(*name);
                    cells.push(value.render());
                }
            }
        }
        format!("{}\n{}\n", names.join(","), cells.join(","))
    }
}

fn render_json_object(out: &mut String, record: &Record, indent: &str) {
    if record.fields.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (name, value)) in record.fields.iter().enumerate() {
        out.push_str(indent);
        out.push_str(&format!("  \"{name}\": {}", value.render()));
        if i + 1 < record.fields.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(indent);
    out.push('}');
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_at_17_digits() {
        for x in [
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            4.052_847_345_693_510_9e-1,
            1e-300,
            6.0e22,
        ] {
            let printed = fmt_f64(x);
            let parsed: f64 = printed.parse().unwrap();
            assert_eq!(parsed, x, "{printed} did not round-trip");
        }
    }

    #[test]
    fn json_shape() {
        let mut params = Record::new();
        params.float("a", 0.5);
        params.int("n", 3);
        params.bool("flag", true);
        let mut doc = Document::new();
        doc.push("params", Section::Object(params));
        let json = doc.to_json();
        assert!(json.starts_with("{\n  \"params\": {\n"));
        assert!(json.contains("\"a\": 5.0000000000000000e-1"));
        assert!(json.contains("\"n\": 3"));
        assert!(json.contains("\"flag\": true"));
    }

    #[test]
    fn csv_single_row_flattens_sections() {
        let mut a = Record::new();
        a.float("x", 1.0);
        let mut b = Record::new();
        b.int("y", 2);
        let mut doc = Document::new();
        doc.push("first", Section::Object(a));
        doc.push("second", Section::Object(b));
        assert_eq!(doc.to_csv(), "x,y\n1.0000000000000000e0,2\n");
    }

    #[test]
    fn csv_array_renders_per_row() {
        let mut row1 = Record::new();
        row1.int("i", 0);
        let mut row2 = Record::new();
        row2.int("i", 1);
        let mut doc = Document::new();
        let mut params = Record::new();
        params.int("steps", 1);
        doc.push("params", Section::Object(params));
        doc.push("rows", Section::Array(vec![row1, row2]));
        assert_eq!(doc.to_csv(), "i\n0\n1\n");
    }
}
