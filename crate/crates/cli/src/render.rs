//! Output rendering: 17-significant-digit floats, JSON with the same float
//! policy, and atomic file writes.
//!
//! Every float in a CSV or JSON output goes through [`fmt_f64`], which emits
//! 17 significant digits so parsing the text recovers the original 64-bit
//! value exactly. Files are written to a sibling temp path and renamed into
//! place, so a crash never leaves a partial output behind.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{CliError, CliResult};

/// 17 significant digits: 1 before the point, 16 after, exponent form.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Pretty JSON with [`fmt_f64`] applied to every f64.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let formatter = SigDigits {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = Serializer::with_formatter(&mut out, formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization does not fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

struct SigDigits<F> {
    inner: F,
}

impl<F: Formatter> Formatter for SigDigits<F> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Writes via a sibling temp file and a rename. Errors name the target path.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Sibling path `<name>.<suffix>` next to `path` (extension replaced).
pub fn sibling(path: &Path, suffix: &str) -> std::path::PathBuf {
    path.with_extension(suffix)
}
