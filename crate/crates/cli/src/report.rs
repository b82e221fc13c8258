use std::io::Write;

use anyhow::Result;
use hyperflow::curvature::CurvatureState;
use hyperflow::flows::{Bounds, Regime};
use hyperflow::{FlowTrace, Triangulation};
use serde::Serialize;

/// Shortest round-trip decimal, as used by the JSON output.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

pub fn validate_text(tri: &Triangulation) -> String {
    let links = tri.links();
    let mut out = format!("N={} tets={} edges={}", tri.num_vertices(), tri.num_tets(), tri.num_edges());
    let first = links[0];
    if links.iter().all(|l| l.euler_char == first.euler_char && l.degree == first.degree) {
        out.push_str(&format!("; all χ={}, d={}\n", first.euler_char, first.degree));
    } else {
        out.push('\n');
        for (label, link) in tri.labels().iter().zip(links) {
            out.push_str(&format!("vertex {label}: χ={}, d={}\n", link.euler_char, link.degree));
        }
    }
    out
}

#[derive(Serialize)]
struct VertexReport {
    label: u64,
    degree: usize,
    euler_char: i64,
}

#[derive(Serialize)]
struct ValidateReport {
    vertices: usize,
    tets: usize,
    edges: usize,
    links: Vec<VertexReport>,
}

pub fn validate_json(tri: &Triangulation) -> Result<String> {
    let report = ValidateReport {
        vertices: tri.num_vertices(),
        tets: tri.num_tets(),
        edges: tri.num_edges(),
        links: tri
            .labels()
            .iter()
            .zip(tri.links())
            .map(|(&label, l)| VertexReport { label, degree: l.degree, euler_char: l.euler_char })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

#[derive(Serialize)]
struct CurvatureReport<'a> {
    k: &'a [f64],
    k_gauss_bonnet: &'a [f64],
    discrepancy: f64,
    edge_ends: Vec<[usize; 2]>,
    edge_k: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    jacobian: Option<Vec<Vec<f64>>>,
}

fn dense(state: &CurvatureState) -> Vec<Vec<f64>> {
    let n = state.k.len();
    (0..n).map(|i| (0..n).map(|j| state.lambda.get(i, j)).collect()).collect()
}

pub fn curvature_json(tri: &Triangulation, state: &CurvatureState, jacobian: bool) -> Result<String> {
    let report = CurvatureReport {
        k: &state.k,
        k_gauss_bonnet: &state.k_gauss_bonnet,
        discrepancy: state.form_discrepancy(),
        edge_ends: tri.edge_classes().iter().map(|c| c.ends).collect(),
        edge_k: &state.edge_k,
        jacobian: jacobian.then(|| dense(state)),
    };
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

/// Long format `section,i,j,value`; `j` is empty for vectors and holds the
/// second end vertex for edges.
pub fn curvature_csv(tri: &Triangulation, state: &CurvatureState, jacobian: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["section", "i", "j", "value"])?;
    for (i, &k) in state.k.iter().enumerate() {
        w.write_record(["k", &i.to_string(), "", &num(k)])?;
    }
    for (i, &k) in state.k_gauss_bonnet.iter().enumerate() {
        w.write_record(["k_gauss_bonnet", &i.to_string(), "", &num(k)])?;
    }
    for (class, &k) in tri.edge_classes().iter().zip(&state.edge_k) {
        w.write_record(["edge_k", &class.ends[0].to_string(), &class.ends[1].to_string(), &num(k)])?;
    }
    w.write_record(["discrepancy", "", "", &num(state.form_discrepancy())])?;
    if jacobian {
        for (i, row) in dense(state).iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                w.write_record(["jacobian", &i.to_string(), &j.to_string(), &num(v)])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Indices of samples kept when thinning; the final sample is always kept.
pub fn thinned(trace: &FlowTrace, every: usize) -> Vec<usize> {
    let n = trace.samples.len();
    let every = every.max(1);
    let mut keep: Vec<usize> = (0..n).step_by(every).collect();
    if keep.last() != Some(&(n - 1)) {
        keep.push(n - 1);
    }
    keep
}

pub fn trace_csv(trace: &FlowTrace, every: usize, out: &mut dyn Write) -> Result<()> {
    let n = trace.samples[0].r.len();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "step".into(), "residual".into()];
    header.extend((0..n).map(|i| format!("r{i}")));
    w.write_record(&header)?;
    for i in thinned(trace, every) {
        let s = &trace.samples[i];
        let mut row = vec![num(s.t), num(s.step), num(s.residual)];
        row.extend(s.r.iter().map(|&r| num(r)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TraceReport<'a> {
    #[serde(flatten)]
    trace: &'a FlowTrace,
    regime: Option<&'a [Regime]>,
}

pub fn trace_json(trace: &FlowTrace, every: usize, regime: Option<&[Regime]>, out: &mut dyn Write) -> Result<()> {
    let keep = thinned(trace, every);
    let mut thin = trace.clone();
    thin.samples = keep.into_iter().map(|i| trace.samples[i].clone()).collect();
    serde_json::to_writer_pretty(&mut *out, &TraceReport { trace: &thin, regime })?;
    writeln!(out)?;
    Ok(())
}

pub fn summary(trace: &FlowTrace, regime: Option<&[Regime]>) -> String {
    let last = trace.last();
    let rate = trace.rate_estimate.map_or_else(|| "none".to_string(), num);
    let regime = regime.map_or_else(
        || "n/a".to_string(),
        |r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    );
    format!(
        "method={} termination={} final_residual={} rate_estimate={} steps={} t={} max_radius={} min_radius={} regime={}",
        trace.method,
        trace.termination,
        num(last.residual),
        rate,
        trace.samples.len() - 1,
        num(last.t),
        num(trace.max_radius),
        num(trace.min_radius),
        regime
    )
}

pub fn bounds_text(b: &Bounds) -> String {
    format!(
        "C1_tilde {}\nC2_tilde {}\nArea1 {}\nArea2 {}\nC1 {}\nC2 {}\n",
        num(b.cos_equal),
        num(b.cos_small_corner),
        num(b.min_area),
        num(b.min_area_small_corner),
        num(b.k_lower),
        num(b.k_upper)
    )
}
