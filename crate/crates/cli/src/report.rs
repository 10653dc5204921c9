use serde::Serialize;
use serde_json::Value as Json;

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeSummary {
    pub source: String,
    pub v: usize,
    pub d: usize,
    pub valencies: Vec<usize>,
    pub multiplicities: Option<Vec<usize>>,
    /// Vertex labels in internal index order.
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Arithmetic {
    pub mode: String,
    pub tol_eigen: f64,
    pub tol_int: f64,
}

/// One verdict together with the arithmetic that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: String,
    pub mode: String,
    pub tolerance: Option<f64>,
    pub details: Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub scheme: Option<SchemeSummary>,
    pub arithmetic: Option<Arithmetic>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub exit_status: i32,
    pub error: Option<ErrorInfo>,
    /// Human-readable rendering, one entry per output line.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            tool: "equipart".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            inputs: Vec::new(),
            scheme: None,
            arithmetic: None,
            checks: Vec::new(),
            warnings: Vec::new(),
            exit_status: EXIT_POSITIVE,
            error: None,
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("equipart {}: {}\n", self.version, self.command.join(" "));
        for input in &self.inputs {
            out += &format!("input {} {} sha256:{}\n", input.role, input.path, input.sha256);
        }
        if let Some(s) = &self.scheme {
            out += &format!("scheme: {} (v={}, d={})\n", s.source, s.v, s.d);
            out += &format!("valencies: {}\n", tuple(&s.valencies));
            if let Some(m) = &s.multiplicities {
                out += &format!("multiplicities: {}\n", tuple(m));
            }
        }
        if let Some(a) = &self.arithmetic {
            out += &format!("mode: {} (tol-eigen {:e}, tol-int {:e})\n", a.mode, a.tol_eigen, a.tol_int);
        }
        for line in &self.lines {
            out += line;
            out.push('\n');
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        if let Some(e) = &self.error {
            out += &format!("error ({}): {}\n", e.kind, e.message);
        }
        out += &format!("exit status: {}\n", self.exit_status);
        out
    }
}

pub fn tuple<T: ToString>(xs: &[T]) -> String {
    format!("({})", xs.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

pub fn matrix_lines<T: ToString>(name: &str, rows: &[Vec<T>]) -> Vec<String> {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(T::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = vec![format!("{name} =")];
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push(format!("  [{}]", padded.join(" ")));
    }
    out
}
