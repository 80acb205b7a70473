//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed. All comparisons are exact.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pil::bijection::{phi, psi};
use pil::counting::{self, d_index, o_index};
use pil::qseries;
use pil::verify::{self, Grid, VerificationReport};
use pil::Partition;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn report_outcome(r: VerificationReport) -> Outcome {
    if r.passed() {
        Ok(format!("{} cells", r.grid.len()))
    } else {
        let f = &r.failures[0];
        Err(format!(
            "{}: {} failures; first {} at {:?}: {:?} vs {:?}",
            r.check_name,
            r.failures.len(),
            f.what,
            f.cell,
            f.lhs,
            f.rhs
        ))
    }
}

fn p(text: &str) -> Partition {
    text.parse().expect("valid partition text")
}

fn worked_example_n5() -> Outcome {
    let r = |e: pil::Error| e.to_string();
    eq("O_{0,2}(5)", counting::count_o(0, 2, 1, 5).map_err(r)?, 3)?;
    eq("D_{0,2}(5)", counting::count_d(0, 2, 1, 5).map_err(r)?, 3)?;
    let o_parts: u64 = counting::o_set(0, 2, 1, 5).map_err(r)?.iter().map(Partition::total_parts).sum();
    let d_parts: u64 = counting::d_set(0, 2, 1, 5).map_err(r)?.iter().map(Partition::total_parts).sum();
    eq("parts over O_{0,2}(5)", o_parts, 9)?;
    eq("parts over D_{0,2}(5)", d_parts, 5)?;
    eq("E", counting::excess(0, 2, 1, 5).map_err(r)?, 4)?;
    eq("O_{1,2}(5)", counting::count_o(1, 2, 1, 5).map_err(r)?, 4)?;

    let gf_o = qseries::gf_o(2, 1, 5).map_err(r)?;
    let gf_d = qseries::gf_d(2, 1, 5).map_err(r)?;
    eq("[z^0 q^5] gf_O", gf_o.coeff_zq(0, 5).map_err(r)?, 3)?;
    eq("[z^0 q^5] gf_D", gf_d.coeff_zq(0, 5).map_err(r)?, 3)?;
    eq("[z^1 q^5] gf_O", gf_o.coeff_zq(1, 5).map_err(r)?, 4)?;
    let do_w = qseries::gf_o_w(2, 1, 5).and_then(|s| s.d_dw_at_1()).map_err(r)?;
    let dd_w = qseries::gf_d_w(2, 1, 5).and_then(|s| s.d_dw_at_1()).map_err(r)?;
    eq("[z^0 q^5] dw O_w", do_w.coeff_zq(0, 5).map_err(r)?, 9)?;
    eq("[z^0 q^5] dw D_w", dd_w.coeff_zq(0, 5).map_err(r)?, 5)?;
    Ok("3 = 3, 9 - 5 = 4 = O_{1,2}(5) by enumeration and series".into())
}

fn table_n29() -> Outcome {
    let r = |e: pil::Error| e.to_string();
    let o = counting::o_set(3, 2, 2, 29).map_err(r)?;
    let d = counting::d_set(3, 2, 2, 29).map_err(r)?;
    eq("|O_{3,2,2}(29)|", o.len(), 8)?;
    eq("|D_{3,2,2}(29)|", d.len(), 8)?;
    let rows = pil::cli::table29_rows().map_err(r)?;
    let mut text = String::new();
    for (left, right) in &rows {
        ensure(d.contains(right), || format!("{right} is not in D_{{3,2,2}}(29)"))?;
        eq("psi of row", &psi(right, 2, 2).map_err(r)?, left)?;
        text.push_str(&format!(
            "{} <-> {}\n",
            left.to_full_exponent_string(),
            right.to_full_exponent_string()
        ));
    }
    eq("table text", text.as_str(), include_str!("golden/table29.txt"))?;
    Ok("8 rows, byte-identical to golden file".into())
}

fn example_n506() -> Outcome {
    let r = |e: pil::Error| e.to_string();
    let d_side = p("4^5 6 12^7 18^8 24^9 36");
    let o_side = p("4^5 6^7 18^2 24^3 36^4 48^4");
    let image = psi(&d_side, 2, 6).map_err(r)?;
    eq("psi image", &image, &o_side)?;
    eq("weight of input", d_side.weight(), 506)?;
    eq("weight of image", image.weight(), 506)?;
    eq("j of input", d_index(&d_side, 2, 6), 3)?;
    eq("j of image", o_index(&image, 2, 6), 3)?;
    eq("phi(psi(pi))", &phi(&image, 2, 6).map_err(r)?, &d_side)?;
    Ok("psi image, weight 506, j = 3, phi undoes psi".into())
}

fn special_cases() -> Outcome {
    let grid = Grid::special();
    let checks = [
        verify::check_no_kb_multiple(&grid),
        verify::check_glaisher_franklin(&grid),
        verify::check_aab(&grid),
        verify::check_fu_tang(&grid),
        verify::check_andrews_second(&grid),
    ];
    let mut passed = Vec::new();
    let mut failed = Vec::new();
    for c in checks {
        let report = c.map_err(|e| e.to_string())?;
        let name = report.check_name.clone();
        match report_outcome(report) {
            Ok(_) => passed.push(name),
            Err(e) => failed.push(e),
        }
    }
    if failed.is_empty() {
        Ok(format!("{} pass", passed.join(", ")))
    } else {
        Err(format!("{} pass; {}", passed.join(", "), failed.join("; ")))
    }
}

fn grid_check(f: fn(&Grid) -> pil::Result<VerificationReport>, grid: Grid) -> impl Fn() -> Outcome {
    move || report_outcome(f(&grid).map_err(|e| e.to_string())?)
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: Box<dyn Fn() -> Outcome>,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { id: 1, title: "n=5 worked example", limit: secs(1), run: Box::new(worked_example_n5) },
        Criterion { id: 2, title: "n=29 table", limit: secs(1), run: Box::new(table_n29) },
        Criterion { id: 3, title: "n=506 example", limit: secs(1), run: Box::new(example_n506) },
        Criterion {
            id: 4,
            title: "O = D = series, n<=40",
            limit: secs(180),
            run: Box::new(grid_check(verify::check_main_theorem, Grid::main_theorem())),
        },
        Criterion {
            id: 5,
            title: "excess identity",
            limit: secs(120),
            run: Box::new(grid_check(verify::check_beck, Grid::excess())),
        },
        Criterion {
            id: 6,
            title: "refined excess",
            limit: secs(120),
            run: Box::new(grid_check(verify::check_refinement, Grid::excess())),
        },
        Criterion {
            id: 7,
            title: "cumulative excess",
            limit: secs(120),
            run: Box::new(grid_check(verify::check_corollary, Grid::excess())),
        },
        Criterion {
            id: 8,
            title: "series identities, N=30",
            limit: secs(60),
            run: Box::new(|| {
                report_outcome(verify::check_series_identities(30, &[2, 3], &[1, 2]).map_err(|e| e.to_string())?)
            }),
        },
        Criterion {
            id: 9,
            title: "bijection, n<=25",
            limit: secs(120),
            run: Box::new(grid_check(verify::check_bijection, Grid::bijection())),
        },
        Criterion { id: 10, title: "special cases, n<=25", limit: secs(300), run: Box::new(special_cases) },
    ]
}

fn main() -> ExitCode {
    let mut all_ok = true;
    for c in criteria() {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| (c.run)()))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.limit => Err(format!("{msg}; took {elapsed:?}, limit {:?}", c.limit)),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(msg) => ("PASS", msg),
            Err(msg) => ("FAIL", msg),
        };
        println!(
            "criterion {:>2}: {status}  {:<26} {:>8.3}s  {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        all_ok &= outcome.is_ok();
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
