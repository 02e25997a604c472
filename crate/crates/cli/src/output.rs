//! Deterministic output encoding: every float is written with 17
//! significant digits so double-precision values round-trip exactly and
//! repeated runs produce byte-identical files.

use std::io;

/// 17-significant-digit scientific form (one leading digit + 16 after the
/// point).
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        // Avoid the -0 wobble in outputs.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// serde_json formatter that writes all f64 values through g17.
pub struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(g17(value).as_bytes())
    }
}

pub fn to_json_g17<T: serde::Serialize>(value: &T) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value
        .serialize(&mut ser)
        .map_err(io::Error::other)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("json is utf8"))
}
