//! Human-readable text and CSV output.

use std::fmt::Write;

use fprkit_core::fpr::{Approach, CurveRow};
use fprkit_core::report::{
    CurveEnvelope, Envelope, InterpretEnvelope, PriorNeededEnvelope, SimulateEnvelope,
};

pub const CSV_COLUMNS: [&str; 9] = [
    "sweep_value",
    "l10_pequals",
    "l10_plessthan",
    "fpr50_pequals",
    "fpr50_plessthan",
    "calibration_fpr50",
    "prior_h1",
    "fpr_pequals",
    "fpr_plessthan",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into())
}

fn approach_name(a: Approach) -> &'static str {
    match a {
        Approach::PEquals => "p-equals",
        Approach::PLessThan => "p-less-than",
    }
}

fn footer<I, R>(out: &mut String, env: &Envelope<I, R>) {
    for w in &env.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

pub fn interpret_text(env: &InterpretEnvelope) -> String {
    let (i, r) = (&env.inputs_echo, &env.results);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}  (n = {} per group, effect size {} SD, alpha {})",
        i.p, i.n_per_group, i.effect_size_sd, i.alpha
    );
    let _ = writeln!(
        s,
        "t = {:.4}, df = {}, ncp = {:.4}, power = {:.4}",
        r.t_obs, r.df, r.ncp, r.power
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<26}{:>12}{:>12}", "", "L10", "FPR50");
    let _ = writeln!(s, "{:<26}{:>12.4}{:>12.4}", "p-equals", r.l10_pequals, r.fpr50_pequals);
    let _ = writeln!(s, "{:<26}{:>12.4}{:>12.4}", "p-less-than", r.l10_plessthan, r.fpr50_plessthan);
    let _ = writeln!(
        s,
        "{:<26}{:>12.4}{:>12.4}",
        "p-equals, ML alternative", r.l10_ml_alternative, r.fpr50_ml_alternative
    );
    let _ = writeln!(s);
    if let Some(prior) = i.prior_h1 {
        let _ = writeln!(
            s,
            "FPR at prior {prior}: p-equals {}, p-less-than {}",
            opt(r.fpr_pequals),
            opt(r.fpr_plessthan)
        );
    }
    let _ = writeln!(
        s,
        "prior needed for FPR {}: p-equals {}, p-less-than {}",
        r.target_fpr,
        opt(r.prior_needed_pequals),
        opt(r.prior_needed_plessthan)
    );
    match &r.calibration {
        Some(c) => {
            let _ = writeln!(s, "Benjamin-Berger bound: BF10 <= {:.4}, FPR50 >= {:.4}", c.bf10, c.fpr50);
        }
        None => {
            let _ = writeln!(s, "Benjamin-Berger bound: not defined for this p");
        }
    }
    let _ = writeln!(
        s,
        "headline ({}): FPR50 = {:.4}",
        approach_name(r.approach),
        r.fpr50
    );
    footer(&mut s, env);
    s
}

pub fn prior_needed_text(env: &PriorNeededEnvelope) -> String {
    let (i, r) = (&env.inputs_echo, &env.results);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}  (n = {} per group, effect size {} SD, {})",
        i.p,
        i.n_per_group,
        i.effect_size_sd,
        approach_name(r.approach)
    );
    let _ = writeln!(s, "L10 = {:.4}, FPR50 = {:.4}", r.l10, r.fpr50);
    let _ = writeln!(
        s,
        "prior probability of a real effect needed for FPR {}: {:.4}",
        r.target_fpr, r.prior_h1
    );
    footer(&mut s, env);
    s
}

pub fn curve_text(env: &CurveEnvelope) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10}",
        "value", "L10 p=", "L10 p<", "FPR50 p=", "FPR50 p<", "FPR50 BB", "prior", "FPR p=", "FPR p<"
    );
    for r in &env.results.rows {
        let _ = writeln!(
            s,
            "{:>12} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>10} {:>10}",
            r.sweep_value,
            opt(r.l10_pequals),
            opt(r.l10_plessthan),
            opt(r.fpr50_pequals),
            opt(r.fpr50_plessthan),
            opt(r.calibration_fpr50),
            r.prior_h1,
            opt(r.fpr_pequals),
            opt(r.fpr_plessthan)
        );
    }
    footer(&mut s, env);
    s
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut s = CSV_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let cells = [
            Some(r.sweep_value),
            r.l10_pequals,
            r.l10_plessthan,
            r.fpr50_pequals,
            r.fpr50_plessthan,
            r.calibration_fpr50,
            Some(r.prior_h1),
            r.fpr_pequals,
            r.fpr_plessthan,
        ];
        s.push_str(&cells.map(cell).join(","));
        s.push('\n');
    }
    s
}

pub fn simulate_text(env: &SimulateEnvelope) -> String {
    let (i, r) = (&env.inputs_echo, &env.results);
    let o = &r.outcome;
    let (lo, hi) = i.p_window.unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} experiments, prior {}, n = {} per group, effect size {} SD, alpha {}, window [{lo}, {hi}], seed {}",
        o.n_h0 + o.n_h1,
        i.prior_h1,
        i.n_per_group,
        i.effect_size_sd,
        i.alpha,
        i.seed.unwrap_or_default()
    );
    let _ = writeln!(s, "rng: {}", r.rng);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<12}{:>12}{:>12}{:>12}", "", "total", "p < alpha", "in window");
    let _ = writeln!(s, "{:<12}{:>12}{:>12}{:>12}", "H0 true", o.n_h0, o.n_sig_h0, o.n_window_h0);
    let _ = writeln!(s, "{:<12}{:>12}{:>12}{:>12}", "H1 true", o.n_h1, o.n_sig_h1, o.n_window_h1);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<50}{:>10}{:>10}{:>10}{:>6}",
        "comparison", "empirical", "analytic", "SE", "3SE"
    );
    for c in &r.comparison {
        let ok = match c.within_3se {
            Some(true) => "ok",
            Some(false) => "off",
            None => "-",
        };
        let _ = writeln!(
            s,
            "{:<50}{:>10}{:>10.4}{:>10.4}{:>6}",
            c.quantity,
            opt(c.empirical),
            c.analytic,
            c.standard_error,
            ok
        );
    }
    footer(&mut s, env);
    s
}
