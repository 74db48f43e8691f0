use lieclass_core::invclass::Table3Audit;
use lieclass_core::optsys::{AuditReport, SampleOutcome, TraceOutcome};

use crate::Format;

/// Plain rows with a header, rendered as Markdown or CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<String>, rows: Vec<Vec<String>>) -> Table {
        Table { headers, rows }
    }

    /// Rows and columns labelled by `names`.
    pub fn square(corner: &str, names: &[String], cells: &[Vec<String>]) -> Table {
        let mut headers = vec![corner.to_string()];
        headers.extend(names.iter().cloned());
        let rows = names
            .iter()
            .zip(cells)
            .map(|(n, r)| std::iter::once(n.clone()).chain(r.iter().cloned()).collect())
            .collect();
        Table { headers, rows }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            _ => self.markdown(),
        }
    }

    fn markdown(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|");
        let mut out = format!("| {} |\n", self.headers.iter().map(|h| cell(h)).collect::<Vec<_>>().join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for r in &self.rows {
            out.push_str(&format!("| {} |\n", r.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | ")));
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

pub fn paint(text: &str, good: bool, color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let code = if good { 32 } else { 31 };
    format!("\x1b[{}m{}\x1b[0m", code, text)
}

fn mark(ok: bool, color: bool) -> String {
    paint(if ok { "pass" } else { "FAIL" }, ok, color)
}

fn outcome(o: &TraceOutcome) -> String {
    match o {
        TraceOutcome::Representative { item, name } => format!("{} (item {})", name, item),
        TraceOutcome::Family { descriptor } => descriptor.clone(),
    }
}

fn sample_row(s: &SampleOutcome) -> Vec<String> {
    vec![
        s.input.to_string(),
        s.trace.case.label.to_string(),
        s.trace.output.to_string(),
        outcome(&s.trace.outcome),
        format!("{:?}", s.category),
        s.trace.moves.len().to_string(),
    ]
}

pub fn optsys(r: &AuditReport, format: Format, color: bool) -> String {
    if format == Format::Csv {
        let mut rows = vec![
            vec!["seed".into(), r.seed.to_string()],
            vec!["samples".into(), r.samples.to_string()],
            vec!["reflections".into(), r.reflections.to_string()],
            vec!["matched".into(), r.counts.matched.to_string()],
            vec!["matched_with_residue".into(), r.counts.matched_with_residue.to_string()],
            vec!["unmatched".into(), r.counts.unmatched.to_string()],
            vec!["replay_failures".into(), r.replay_failures.to_string()],
            vec!["case_1a_normalization_refuted".into(), r.case_1a_normalization_refuted.to_string()],
        ];
        for i in &r.invariants {
            rows.push(vec!["invariant".into(), invariant_text(i)]);
        }
        for (c, n) in &r.cases {
            rows.push(vec![format!("case {}", c), n.to_string()]);
        }
        for (a, b) in &r.redundant_pairs {
            rows.push(vec!["redundant_pair".into(), format!("{} {}", a, b)]);
        }
        return Table::new(vec!["key".into(), "value".into()], rows).render(Format::Csv);
    }
    let mut s = String::from("# Optimal system audit\n\n");
    s.push_str(&format!(
        "seed {:#x}, {} samples, reflections {}\n\n",
        r.seed,
        r.samples,
        if r.reflections { "on" } else { "off" }
    ));
    s.push_str(&format!(
        "- matched: {}\n- matched with parameter residue: {}\n- unmatched: {}\n- replay failures: {} ({})\n- case 1a normalization refuted: {}\n\n",
        r.counts.matched,
        r.counts.matched_with_residue,
        r.counts.unmatched,
        r.replay_failures,
        mark(r.replay_failures == 0, color),
        r.case_1a_normalization_refuted
    ));
    s.push_str("## Orbit invariants\n\n");
    for i in &r.invariants {
        s.push_str(&format!("- {}\n", invariant_text(i)));
    }
    s.push_str("\n## Cases\n\n");
    s.push_str(
        &Table::new(
            vec!["case".into(), "samples".into()],
            r.cases.iter().map(|(c, n)| vec![c.clone(), n.to_string()]).collect(),
        )
        .render(Format::Md),
    );
    s.push_str("\n## Items\n\n");
    s.push_str(
        &Table::new(
            vec!["item".into(), "name".into(), "vector".into(), "normal form".into(), "hits".into()],
            r.representatives
                .iter()
                .map(|p| {
                    vec![
                        p.item.to_string(),
                        p.name.clone(),
                        p.vector.to_string(),
                        p.normal_form.to_string(),
                        r.items_hit.get(&p.item).copied().unwrap_or(0).to_string(),
                    ]
                })
                .collect(),
        )
        .render(Format::Md),
    );
    s.push_str("\n## Items in one orbit\n\n");
    if r.redundant_pairs.is_empty() {
        s.push_str("none\n");
    }
    for (a, b) in &r.redundant_pairs {
        s.push_str(&format!("- {} and {}\n", a, b));
    }
    s.push_str("\n## Probes\n\n");
    s.push_str(
        &Table::new(
            ["input", "case", "output", "outcome", "category", "moves"].map(String::from).to_vec(),
            r.probes.iter().map(sample_row).collect(),
        )
        .render(Format::Md),
    );
    s
}

fn invariant_text(i: &lieclass_core::optsys::OrbitInvariant) -> String {
    match &i.holds_on {
        Some(h) => format!("{} on {}", i.expr, h),
        None => i.expr.clone(),
    }
}

fn classify_table(a: &Table3Audit, color: bool) -> Table {
    let headers = [
        "row", "Z", "I1", "I1 check", "I2 check", "f", "X", "symmetry", "literal", "items", "recomputed",
    ]
    .map(String::from)
    .to_vec();
    let rows = a
        .rows
        .iter()
        .map(|r| {
            let p = &r.printed;
            let rec = r.recomputed.as_ref().map_or(String::new(), |rc| match &rc.row {
                Some(row) => format!("f = {} ({})", row.f_form, mark(row.all_pass(), color)),
                None => rc.note.clone().unwrap_or_default(),
            });
            vec![
                r.n.to_string(),
                p.z.clone(),
                p.i1.expr.clone(),
                if p.i1.pass { mark(true, color) } else { format!("{}: {}", mark(false, color), p.i1.residual) },
                if p.i2.pass { mark(true, color) } else { format!("{}: {}", mark(false, color), p.i2.residual) },
                p.f_form.clone(),
                p.xadd.clone(),
                paint(p.symmetry.label(), p.symmetry.is_yes(), color),
                r.literal.label().to_string(),
                r.y_items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
                rec,
            ]
        })
        .collect();
    Table::new(headers, rows)
}

pub fn classify(a: &Table3Audit, format: Format, color: bool) -> String {
    if format == Format::Csv {
        return classify_table(a, false).render(Format::Csv);
    }
    let list = |v: &[usize]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
        }
    };
    let s = &a.summary;
    let mut out = String::from("# Classification audit\n\n");
    out.push_str(&classify_table(a, color).render(Format::Md));
    out.push_str(&format!(
        "\n- rows: {}\n- all verdicts pass: {}\n- I1 fails: {}\n- I2 fails: {}\n- symmetry fails: {}\n- recomputed invariants pass: {}\n",
        s.rows,
        list(&s.all_pass),
        list(&s.i1_fail),
        list(&s.i2_fail),
        list(&s.symmetry_fail),
        list(&s.recomputed_all_pass)
    ));
    let notes: Vec<String> = a
        .rows
        .iter()
        .flat_map(|r| r.notes.iter().map(move |n| format!("- row {}: {}", r.n, n)))
        .collect();
    if !notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        out.push_str(&notes.join("\n"));
        out.push('\n');
    }
    out
}
