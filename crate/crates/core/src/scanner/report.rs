//! Machine-readable record formats. CSV columns are fixed; JSON output
//! is one object per record, line-delimited. Both are byte-stable for
//! a given record.

use super::ScanRecord;

pub fn csv_header() -> &'static str {
    "n,factorization,r_signed,s_signed,near_miss,ratio"
}

pub fn to_csv_line(r: &ScanRecord) -> String {
    let s = r.s_signed.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        r.n, r.factorization, r.r_signed, s, r.near_miss, r.ratio
    )
}

pub fn to_json_line(r: &ScanRecord) -> String {
    serde_json::to_string(r).expect("records serialize")
}
