use serde::Serialize;

use orientcalc::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct Document<'a> {
    version: &'static str,
    cap_default: u32,
    reports: &'a [Report],
}

/// Renders reports; both formats end with a newline unless empty text.
pub fn emit(reports: &[Report], format: Format, cap_default: u32) -> String {
    match format {
        Format::Json => {
            let doc = Document { version: "1", cap_default, reports };
            let mut s = serde_json::to_string(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json() {
        assert_eq!(emit(&[], Format::Json, 6), "{\"version\":\"1\",\"cap_default\":6,\"reports\":[]}\n");
    }

    #[test]
    fn text_and_json_lines() {
        let reps = [Report::pass("fgl_axioms", 6), Report::fail("equal", 4, "x^2")];
        assert_eq!(emit(&reps, Format::Text, 6), "PASS fgl_axioms (cap 6)\nFAIL equal (cap 4) [x^2]\n");
        let json = emit(&reps[1..], Format::Json, 6);
        assert_eq!(
            json,
            "{\"version\":\"1\",\"cap_default\":6,\"reports\":[{\"check\":\"equal\",\"status\":\"fail\",\"cap\":4,\"witness\":\"x^2\",\"elapsed_ms\":0}]}\n"
        );
    }
}
