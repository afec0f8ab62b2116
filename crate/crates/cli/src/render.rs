//! Text and CSV rendering of reports.

use std::fmt::Write as _;

use softtrack::checks::{CheckResult, FeasibilityReport};
use softtrack::golden::{PRINTED_CONTACT_LENGTH, PRINTED_KP, REFERENCE_COLUMN};
use softtrack::sweep::{Candidate, SweepResult, Variable};
use softtrack::terrain::rankine_kp;
use softtrack::PerformanceReport;

/// `%g`-style formatting with `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    // Rounding can bump the exponent (9.999995 -> 10.0000).
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let exp = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if exp < -4 || exp >= digits as i32 {
        let (mantissa, _) = sci.split_once('e').expect("scientific");
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g6(x: f64) -> String {
    sig(x, 6)
}

fn opt(x: Option<f64>) -> String {
    x.map(g6).unwrap_or_else(|| "-".into())
}

pub fn performance_text(r: &PerformanceReport) -> String {
    let mut o = String::new();
    let g = &r.geometry;
    let s = &r.state;
    let _ = writeln!(o, "Tractive performance (thrust over both tracks, A = 2bl)");
    let _ = writeln!(
        o,
        "  inputs: b = {} m, l = {} m, B = {} m, P = {} m, RD = {} m",
        g6(g.b),
        g6(g.l),
        g6(g.tread),
        g6(g.pitch),
        g6(g.roadwheel_diameter)
    );
    let _ = writeln!(
        o,
        "          RS = {} m, D = {} m, delta = {} %",
        g6(g.roadwheel_spacing),
        g6(g.sprocket_diameter),
        g6(g.speed_fluctuation)
    );
    let _ = writeln!(
        o,
        "          m = {} kg, v = {} m/s, i = {}, theta = {} deg, g = {} m/s^2",
        g6(s.m),
        g6(s.v),
        g6(s.i),
        g6(s.theta),
        g6(s.g)
    );
    let rows: [(&str, String, &str); 15] = [
        ("W", g6(r.weight), "N"),
        ("p", g6(r.pressure), "kPa"),
        ("k", g6(r.sinkage_modulus), "kN/m^(n+2)"),
        ("K_p", format!("{} ({})", g6(r.kp), r.kp_source.as_str()), ""),
        ("z_o", g6(r.z_o), "m"),
        ("R_in", g6(r.resistances.internal), "N"),
        ("R_b", g6(r.resistances.bulldozing), "N"),
        (
            "R_c",
            match r.compaction.quadrature_error {
                Some(e) => format!("{} [{}, quadrature error {}]", g6(r.compaction.value), r.compaction.mode, sig(e, 2)),
                None => format!("{} [{}]", g6(r.compaction.value), r.compaction.mode),
            },
            "N",
        ),
        ("R_g", g6(r.resistances.grade), "N"),
        ("sum R", g6(r.resistances.total()), "N"),
        ("A", g6(r.contact_area), "m^2"),
        ("F", g6(r.thrust), "N"),
        ("drawbar", g6(r.drawbar_pull), "N"),
        ("a", g6(r.acceleration), "m/s^2"),
        ("residual", sig(r.force_balance_residual(), 2), "N"),
    ];
    for (name, value, unit) in rows {
        let _ = writeln!(o, "{}", format!("  {name:<9} = {value} {unit}").trim_end());
    }
    let _ = writeln!(o, "  checks:");
    for c in &r.checks {
        o.push_str(&check_line(c));
    }
    for w in &r.warnings {
        let _ = writeln!(o, "  warning: {w}");
    }
    o
}

fn check_line(c: &CheckResult) -> String {
    let mut line = format!(
        "    {:<25} {:<4}  measured {:<12} required {:<12} margin {}",
        c.name,
        c.verdict.as_str(),
        opt(c.measured),
        opt(c.required),
        opt(c.margin)
    );
    if let Some(n) = &c.note {
        let _ = write!(line, "  ({n})");
    }
    line.push('\n');
    line
}

pub const PERFORMANCE_CSV_HEADER: &str = "b,l,B,v,m,i,theta,W,p,k,K_p,K_p_source,z_o,R_in,R_b,R_c,compaction_mode,R_g,F,drawbar_pull,a";

pub fn performance_csv(r: &PerformanceReport) -> String {
    let g = &r.geometry;
    let s = &r.state;
    let num = |x: f64| x.to_string();
    let fields = [
        num(g.b),
        num(g.l),
        num(g.tread),
        num(s.v),
        num(s.m),
        num(s.i),
        num(s.theta),
        num(r.weight),
        num(r.pressure),
        num(r.sinkage_modulus),
        num(r.kp),
        r.kp_source.as_str().to_string(),
        num(r.z_o),
        num(r.resistances.internal),
        num(r.resistances.bulldozing),
        num(r.resistances.compaction),
        r.compaction.mode.to_string(),
        num(r.resistances.grade),
        num(r.thrust),
        num(r.drawbar_pull),
        num(r.acceleration),
    ];
    format!("{PERFORMANCE_CSV_HEADER}\n{}\n", fields.join(","))
}

pub fn feasibility_text(rep: &FeasibilityReport) -> String {
    let mut o = String::from("Mission feasibility\n");
    for c in &rep.checks {
        o.push_str(&check_line(c));
    }
    let failed: Vec<&str> = rep.failures().map(|c| c.name).collect();
    if failed.is_empty() {
        o.push_str("  result: all checks pass\n");
    } else {
        let _ = writeln!(o, "  result: FAILED ({})", failed.join(", "));
    }
    o
}

pub fn feasibility_csv(rep: &FeasibilityReport) -> String {
    let mut o = String::from("check,verdict,measured,required,margin\n");
    let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for c in &rep.checks {
        let verdict = match c.verdict {
            softtrack::Verdict::Pass => "pass",
            softtrack::Verdict::Fail => "fail",
            softtrack::Verdict::NotApplicable => "n/a",
        };
        let _ = writeln!(o, "{},{},{},{},{}", c.name, verdict, f(c.measured), f(c.required), f(c.margin));
    }
    o
}

fn candidate_text(o: &mut String, label: &str, c: &Candidate) {
    let point: Vec<String> = Variable::ALL
        .iter()
        .map(|v| format!("{} = {}", v.key(), g6(c.point[*v as usize])))
        .collect();
    let _ = writeln!(o, "{label}: {}", point.join(", "));
    let _ = writeln!(o, "  objective = {}", opt(c.objective));
    for line in performance_text(&c.report).lines().skip(4) {
        let _ = writeln!(o, "{line}");
    }
    let _ = writeln!(o, "  constraints:");
    for ch in &c.feasibility.checks {
        o.push_str(&check_line(ch));
    }
}

pub fn sweep_text(r: &SweepResult, objective: &str) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "Design sweep ({objective})");
    let _ = writeln!(o, "  grid points: {}", r.total);
    let _ = writeln!(o, "  feasible:    {}", r.feasible);
    for (name, n) in &r.rejections {
        if *n > 0 {
            let _ = writeln!(o, "  rejected first by {name}: {n}");
        }
    }
    match &r.best {
        None => o.push_str("  no feasible configuration\n"),
        Some(best) => candidate_text(&mut o, "best", best),
    }
    if let Some(refined) = &r.refined {
        candidate_text(&mut o, "refined", refined);
    }
    o
}

/// Side-by-side printed vs computed values for the reference configuration.
pub fn reference_text(r: &PerformanceReport) -> (String, bool) {
    let mut o = String::new();
    let mut all = true;
    let _ = writeln!(o, "Reference chassis: printed vs computed");
    let _ = writeln!(
        o,
        "  {:<6} {:>12} {:>12} {:>9} {:>7}  verdict",
        "qty", "printed", "computed", "delta %", "tol %"
    );
    for row in REFERENCE_COLUMN {
        let ok = row.within(r);
        all &= ok;
        let _ = writeln!(
            o,
            "  {:<6} {:>12} {:>12} {:>9} {:>7}  {} {}",
            row.name,
            g6(row.printed),
            g6((row.computed)(r)),
            sig(100.0 * row.relative_error(r), 3),
            g6(100.0 * row.tolerance),
            if ok { "pass" } else { "FAIL" },
            row.unit
        );
    }
    let formula = rankine_kp(r.terrain.phi).unwrap_or(f64::NAN);
    let _ = writeln!(o, "Notes:");
    let _ = writeln!(
        o,
        "  K_p: printed {} but tan^2(pi/4 + phi/2) = {} at phi = {} deg; the printed value matches the un-squared tangent {}. Using {} ({}).",
        g6(PRINTED_KP),
        g6(formula),
        g6(r.terrain.phi),
        g6((std::f64::consts::FRAC_PI_4 + 0.5 * r.terrain.phi.to_radians()).tan()),
        g6(r.kp),
        r.kp_source.as_str()
    );
    let _ = writeln!(
        o,
        "  l: printed {} m; {} m is used because only it reproduces z_o, R_c and F.",
        g6(PRINTED_CONTACT_LENGTH),
        g6(r.geometry.l)
    );
    let _ = writeln!(
        o,
        "  R_c mode: {}. F uses A = 2bl (both tracks) and is the vehicle total.",
        r.compaction.mode
    );
    let _ = writeln!(
        o,
        "  delta = {} % is carried as metadata only.",
        g6(r.geometry.speed_fluctuation)
    );
    let _ = writeln!(o, "  result: {}", if all { "all quantities within tolerance" } else { "FAILED" });
    (o, all)
}
