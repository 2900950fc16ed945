use std::io::{self, Write};

use crate::numfmt::sig9;
use crate::table::{Axis, Table};

/// Header row, then one row per point. Operating points use a literal `0`
/// in the first field.
pub fn write_csv(table: &Table, out: &mut impl Write) -> io::Result<()> {
    let mut line = String::from(table.axis.label());
    for c in &table.columns {
        line.push(',');
        line.push_str(c);
    }
    line.push('\n');
    out.write_all(line.as_bytes())?;
    for (x, row) in table.xs.iter().zip(&table.rows) {
        line.clear();
        line.push_str(&match table.axis {
            Axis::Op => "0".to_string(),
            _ => sig9(*x),
        });
        for v in row {
            line.push(',');
            line.push_str(&sig9(*v));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn csv_string(table: &Table) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
