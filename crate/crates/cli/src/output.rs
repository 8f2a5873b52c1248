use fislab::rational::{self, Rational};

/// Places shown in decimal approximations. Display only.
pub const DECIMAL_PLACES: u32 = 6;

pub fn decimal(r: &Rational) -> String {
    rational::to_decimal(r, DECIMAL_PLACES)
}

/// Exact value with its rounded decimal, e.g. `5/12 (0.416667)`.
pub fn exact_and_decimal(r: &Rational) -> String {
    format!("{} ({})", rational::to_string(r), decimal(r))
}

/// Quotes a CSV field when it contains a separator or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let row: Vec<String> = fields.into_iter().map(|f| csv_field(f.as_ref())).collect();
    format!("{}\n", row.join(","))
}

/// Left-aligned plain-text table.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header);
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

pub fn json(value: &serde_json::Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use fislab::rational::frac;

    #[test]
    fn decimals_round_half_even() {
        assert_eq!(decimal(&frac(5, 12)), "0.416667");
        assert_eq!(decimal(&frac(1, 2_000_000)), "0.000000");
        assert_eq!(decimal(&frac(3, 2_000_000)), "0.000002");
        assert_eq!(exact_and_decimal(&frac(-1, 3)), "-1/3 (-0.333333)");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_row(["a", "{1,2}"]), "a,\"{1,2}\"\n");
    }
}
