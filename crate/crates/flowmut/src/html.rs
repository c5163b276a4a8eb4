//! Static HTML rendering of a report.

use std::fmt::Write;

use crate::report::Report;

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn opt(v: Option<f64>, decimals: usize) -> String {
    v.map(|x| format!("{x:.decimals$}")).unwrap_or_else(|| "-".into())
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em}table{border-collapse:collapse;margin-bottom:2em}\
td,th{border:1px solid #ccc;padding:4px 8px;vertical-align:top}th{background:#eee}\
pre{margin:0;white-space:pre-wrap}.killed{color:#1a7f37}.survived{color:#cf222e}\
.equivalent{color:#8250df}.removed{color:#6e7781}";

pub fn render(report: &Report) -> String {
    let mut h = String::new();
    let title = format!("Mutation report: {}", esc(&report.program));
    let _ = write!(h, "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{title}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<h1>{title}</h1>\n");

    let s = &report.mutation_score;
    h.push_str("<h2>Metrics</h2>\n<table>\n<tr><th>Mutants</th><th>Killed</th><th>Equivalent</th><th>Removed</th><th>Mutation score</th></tr>\n");
    let _ = writeln!(
        h,
        "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>\n</table>",
        s.total,
        s.killed,
        s.equivalent,
        s.removed,
        opt(s.ms, 2)
    );

    h.push_str("<h2>Operators</h2>\n<table>\n<tr><th>Operator</th><th>#M</th><th>#E</th><th>#R</th><th>KR (%)</th></tr>\n");
    for o in report.operators.iter().filter(|o| o.generated > 0) {
        let _ = writeln!(
            h,
            "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
            esc(&o.operator),
            o.generated,
            o.equivalent,
            o.removed,
            opt(o.killed_ratio, 2)
        );
    }
    h.push_str("</table>\n<h2>Mutants</h2>\n");

    if report.mutants.is_empty() {
        h.push_str("<p>no mutants</p>\n");
    } else {
        h.push_str("<table>\n<tr><th>Id</th><th>Operator</th><th>Status</th><th>Description</th><th>Original</th><th>Mutant</th><th>Killed by</th></tr>\n");
        for m in &report.mutants {
            let status = match &m.removed_by {
                Some(rule) => format!("{} ({})", m.status, esc(rule)),
                None => m.status.clone(),
            };
            let _ = writeln!(
                h,
                "<tr id=\"m{id}\"><td>{id}</td><td>{}</td><td class=\"{}\">{status}</td><td>{}</td><td><pre>{}</pre></td><td><pre>{}</pre></td><td>{}</td></tr>",
                esc(&m.operator),
                esc(&m.status),
                esc(&m.description),
                esc(&m.original),
                esc(&m.mutated),
                esc(&m.killed_by.join(", ")),
                id = m.id,
            );
        }
        h.push_str("</table>\n");
    }
    let t = &report.timings;
    let _ = write!(
        h,
        "<p>flowmut {} &middot; source {} &middot; generation {:.3}s, execution {:.3}s, total {:.3}s</p>\n</body>\n</html>\n",
        esc(&report.tool_version),
        esc(&report.source_hash[..report.source_hash.len().min(12)]),
        t.generation_s,
        t.execution_s,
        t.total_s
    );
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(esc("a < b && \"c\""), "a &lt; b &amp;&amp; &quot;c&quot;");
    }
}
