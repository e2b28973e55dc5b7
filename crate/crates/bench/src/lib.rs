//! Synthetic models for the benchmarks.

use std::fmt::Write;

use stpa_core::{parse_str, StpaModel};

/// `.stpa` text for one controller with `vars` process-model variables of
/// `values` values each, a chain of `relays` relay controllers on the
/// feedback path, and `ucas` UCAs on its single action alternating between
/// not-provided and provided-unsafe, each fixing the first two variables.
pub fn synthetic_source(vars: usize, values: usize, relays: usize, ucas: usize) -> String {
    let mut s = String::from(
        "loss L-1 \"loss\"\nhazard H-1 \"hazard\" leads_to [L-1]\n\
         controller C \"Controller\"\nprocess P \"Process\"\nsensor S \"Sensor\"\n\
         action A \"act\" from C to P\n",
    );
    let mut upstream = "C".to_owned();
    for r in 0..relays {
        let _ = writeln!(s, "controller R{r} \"Relay {r}\"");
        let _ = writeln!(s, "feedback F{r} \"fb {r}\" from R{r} to {upstream}");
        upstream = format!("R{r}");
    }
    let _ = writeln!(s, "feedback F \"measured\" from P to {upstream} via [S]");
    for v in 0..vars {
        let domain: Vec<String> = (0..values).map(|i| format!("\"v{i}\"")).collect();
        let _ = writeln!(s, "variable V{v} of C \"Variable {v}\" {{{}}}", domain.join(", "));
    }
    for u in 0..ucas {
        let guide = if u % 2 == 0 { "not_provided" } else { "provided_unsafe" };
        let mut ctx = String::new();
        for v in 0..vars.min(2) {
            let _ = write!(ctx, " V{v} = \"v{}\"", (u + v) % values.max(1));
        }
        let _ = writeln!(
            s,
            "uca U-{u} action = A guide = {guide} context {{{ctx} }} hazards [H-1] \"uca {u}\""
        );
    }
    s
}

pub fn synthetic_model(vars: usize, values: usize, relays: usize, ucas: usize) -> StpaModel {
    let (model, diags) = parse_str("synthetic.stpa", &synthetic_source(vars, values, relays, ucas));
    assert!(diags.is_empty(), "synthetic model has diagnostics: {diags:?}");
    model
}
