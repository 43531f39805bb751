//! CSV emission with a stable, locale-free number format. NaN and infinite
//! values serialize as empty fields.

/// Documented CSV headers, checked by the `verify` schema-stability test.
pub const SIMULATE_HEADER: &str = "N,sigma,weight,n_draws,mean,stderr,predictor,ratio";
pub const CUBE_HEADER: &str = "N,tau,sigma,weight,e_sup,band_lo,band_hi,thm31b,ratio";
pub const CUBE_BLOCKS_HEADER: &str = "N,tau,j,L_size,m_j,sqrt_m_j,E_abs_S_j,band_lower,band_upper";
pub const PROFILE_HEADER: &str = "M,D1,D2,D1_tilde,D2_tilde";
pub const BOUNDS_HEADER: &str = "name,N,sigma,tau,b,value";

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt_float(v: Option<f64>) -> Cell {
        match v {
            Some(x) => Cell::Float(x),
            None => Cell::Empty,
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Cell::Int(v) => out.push_str(&v.to_string()),
            Cell::Float(v) => {
                if v.is_finite() {
                    out.push_str(&format_float(*v));
                }
                // non-finite values serialize as an empty field
            }
            Cell::Text(s) => out.push_str(s),
            Cell::Empty => {}
        }
    }
}

/// Shortest round-trip decimal form; always uses `.` and never a locale.
pub fn format_float(v: f64) -> String {
    let mut s = format!("{v}");
    // keep integers visually numeric ("3" not "3.0" is fine for CSV, but
    // float columns read better with an explicit point)
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(header: &str) -> Self {
        let mut text = String::with_capacity(4096);
        text.push_str(header);
        text.push('\n');
        CsvTable { text }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            c.write(&mut self.text);
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
