//! Acceptance run: one PASS/FAIL line per criterion, mismatches listed beneath.
//!
//! Printed reference values carry few digits. A computed value, rounded to 10
//! significant digits, agrees with a printed one when it is within 1e-6
//! relative or when the printed digits are its rounding or its truncation at
//! the last printed place (the tables mix both). A printed value is set aside
//! as a misprint only when the table contradicts itself (a `q_N` cell outside
//! the range its own row allows, or two distance cells further apart than the
//! two reference truncations are) and the computed value is consistent with
//! the rest of the table.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;

use whstab::arith::rational::{round_sig, to_f64};
use whstab::arith::Rational;
use whstab::harness::{factor_coefficient_check, parse_listing, reproduce, ExampleFamily, FamilyId, OrderRow, ReproduceConfig, Reproduction};
use whstab::tail::Side;

const EX61_CRITERION: &str = include_str!("data/ex61_criterion.csv");
const EX61_LISTING: &str = include_str!("data/ex61_minus_factor_n15.csv");
const EX62_CRITERION: &str = include_str!("data/ex62_criterion.csv");
const EX63_CRITERION: &str = include_str!("data/ex63_criterion.csv");

fn run(id: FamilyId) -> &'static Reproduction {
    static RUNS: [OnceLock<Reproduction>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match id {
        FamilyId::Ex61 => 0,
        FamilyId::Ex62 => 1,
        FamilyId::Ex63 => 2,
    };
    RUNS[slot].get_or_init(|| {
        let family = ExampleFamily::reference(id);
        let mut config = ReproduceConfig::for_family(&family);
        config.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        reproduce(&family, &config).expect("reproduction runs")
    })
}

#[derive(Clone, Copy, Debug)]
struct Printed {
    value: f64,
    half_ulp: f64,
}

impl Printed {
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        let (mantissa, exp) = s.split_once(['e', 'E']).map_or((s, 0), |(m, e)| (m, e.parse::<i32>().unwrap()));
        let frac = mantissa.split_once('.').map_or(0, |(_, f)| f.len() as i32);
        Some(Self { value: s.parse().unwrap(), half_ulp: 0.5 * 10f64.powi(exp - frac) })
    }

    fn ulp(&self) -> f64 {
        2.0 * self.half_ulp
    }

    /// Values whose rounding or truncation prints as this cell.
    fn range(&self) -> (f64, f64) {
        let v = self.value;
        if v >= 0.0 {
            (v - self.half_ulp, v + self.ulp())
        } else {
            (v - self.ulp(), v + self.half_ulp)
        }
    }

    fn agrees(&self, ours: f64) -> bool {
        let (lo, hi) = self.range();
        let slack = 1e-9 * self.value.abs();
        (ours - self.value).abs() <= 1e-6 * self.value.abs() || (lo - slack <= ours && ours <= hi + slack)
    }
}

fn ten_digits(r: &Rational) -> f64 {
    to_f64(&round_sig(r, 10))
}

struct Table {
    rows: Vec<HashMap<String, String>>,
}

impl Table {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
        let rows = lines.map(|l| header.iter().cloned().zip(l.split(',').map(str::to_string)).collect()).collect();
        Self { rows }
    }

    fn get(&self, n: u64, column: &str) -> Option<Printed> {
        let row = self.rows.iter().find(|r| r["N"] == n.to_string())?;
        Printed::parse(row.get(column)?)
    }
}

type Pick = fn(&OrderRow) -> Option<Rational>;

fn delta(r: &OrderRow) -> Option<Rational> {
    Some(r.analysis.report.delta_n.value.clone())
}
fn inv_plus(r: &OrderRow) -> Option<Rational> {
    Some(r.analysis.report.norm_inv_plus.value.clone())
}
fn inv_minus(r: &OrderRow) -> Option<Rational> {
    Some(r.analysis.report.norm_inv_minus.value.clone())
}
fn q(r: &OrderRow) -> Option<Rational> {
    Some(r.analysis.report.q_n.value.clone())
}
fn gamma(r: &OrderRow) -> Option<Rational> {
    r.accuracy.gamma_n.as_ref().map(|b| b.value.clone())
}
fn dist_n_max(r: &OrderRow) -> Option<Rational> {
    Some(r.dist_n_max.value.clone())
}
fn dist_reference(r: &OrderRow) -> Option<Rational> {
    Some(r.dist_reference.value.clone())
}

#[derive(Default)]
struct Outcome {
    compared: usize,
    failures: Vec<String>,
    misprints: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.compared += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: Outcome) {
        self.compared += other.compared;
        self.failures.extend(other.failures);
        self.misprints.extend(other.misprints);
        self.notes.extend(other.notes);
    }
}

/// A `q_N` cell outside the range `sigma delta_N P M` allows for its own row.
fn row_inconsistent_q(table: &Table, n: u64, sigma: f64, ours: f64) -> Option<String> {
    let cells: Option<Vec<Printed>> = ["delta_N", "norm_inv_plus", "norm_inv_minus"].iter().map(|c| table.get(n, c)).collect();
    let (lo, hi) = cells?.iter().map(Printed::range).fold((sigma, sigma), |(a, b), (l, h)| (a * l, b * h));
    let (qlo, qhi) = table.get(n, "q_N")?.range();
    let row_disagrees = qhi < lo || qlo > hi;
    let ours_fits = lo * (1.0 - 1e-6) <= ours && ours <= hi * (1.0 + 1e-6);
    (row_disagrees && ours_fits).then(|| format!("N={n} q_N: printed {qlo:e}.. but its own row allows only {lo:.5e}..{hi:.5e}; computed {ours:.6e}"))
}

/// Two distance cells further apart than the two reference truncations are.
fn column_inconsistent_dist(table: &Table, n: u64, column: &str, ours: f64, gap: f64) -> Option<String> {
    let a = table.get(n, "dist_a30")?;
    let b = table.get(n, "dist_a40")?;
    let other = if column == "dist_a30" { b } else { a };
    let ((alo, ahi), (blo, bhi)) = (a.range(), b.range());
    let apart = (alo - bhi).max(blo - ahi);
    (apart > gap * (1.0 + 1e-6) && other.agrees(ours)).then(|| {
        format!("N={n} {column}: printed {:e} and {:e} are further apart than ||a_40 - a_30||; computed {ours:.10e}", a.value, b.value)
    })
}

fn compare_columns(table: &Table, r: &Reproduction, columns: &[(&str, Pick)]) -> Outcome {
    let mut out = Outcome::default();
    let sigma = if r.family.theta % 2 == 0 { 1.0 } else { 2.0 };
    let gap = to_f64(&r.rows.last().unwrap().dist_reference.value);
    for row in &r.rows {
        let n = row.n();
        for (column, pick) in columns {
            let Some(printed) = table.get(n, column) else { continue };
            let Some(ours) = pick(row).map(|v| ten_digits(&v)) else {
                out.check(false, || format!("N={n} {column}: printed {} but nothing computed", printed.value));
                continue;
            };
            if printed.agrees(ours) {
                out.compared += 1;
                continue;
            }
            let misprint = match *column {
                "q_N" => row_inconsistent_q(table, n, sigma, ours),
                "dist_a30" | "dist_a40" => column_inconsistent_dist(table, n, column, ours, gap),
                _ => None,
            };
            match misprint {
                Some(m) => {
                    out.compared += 1;
                    out.misprints.push(m);
                }
                None => out.check(false, || format!("N={n} {column}: printed {} computed {ours:.10e}", printed.value)),
            }
        }
    }
    out
}

fn indices_from(r: &Reproduction, from: u64, expected: (i64, i64)) -> Outcome {
    let mut out = Outcome::default();
    for row in r.rows.iter().filter(|row| row.n() >= from) {
        let got = row.analysis.report.indices;
        out.check(got == expected, || format!("N={} indices {got:?}, expected {expected:?}", row.n()));
    }
    out
}

fn first_certified(r: &Reproduction, expected: u64) -> Outcome {
    let mut out = Outcome::default();
    out.check(r.first_certified == Some(expected), || format!("first certified {:?}, expected N={expected}", r.first_certified));
    out
}

/// Computed value rounded to the printed digits, compared as instructed.
fn rounded_to_printed(ours: &Rational, printed: &str) -> (f64, Printed) {
    let p = Printed::parse(printed).unwrap();
    let digits = printed.split(['e', 'E']).next().unwrap().chars().filter(char::is_ascii_digit).count() as u32;
    (to_f64(&round_sig(ours, digits)), p)
}

fn criterion_1() -> Outcome {
    let r = run(FamilyId::Ex61);
    let table = Table::parse(EX61_CRITERION);
    let mut out = compare_columns(
        &table,
        r,
        &[("delta_N", delta), ("norm_inv_plus", inv_plus), ("norm_inv_minus", inv_minus), ("q_N", q), ("gamma_N", gamma)],
    );
    out.absorb(first_certified(r, 6));
    out.absorb(indices_from(r, 1, (0, 0)));
    out
}

fn criterion_2() -> Outcome {
    let r = run(FamilyId::Ex61);
    let mut out = Outcome::default();
    let row15 = &r.rows[14];
    for (name, bound, printed) in [("delta_plus", &row15.accuracy.delta_plus, "1.275e-3"), ("delta_minus", &row15.accuracy.delta_minus, "3.490e-4")] {
        match bound {
            Some(b) => {
                let (ours, p) = rounded_to_printed(&b.value, printed);
                out.check(((ours - p.value) / p.value).abs() <= 1e-3, || format!("N=15 {name}: computed {ours:e}, expected {printed}"));
            }
            None => out.check(false, || format!("N=15 {name} unavailable")),
        }
    }
    let first_gamma = r.rows.iter().find(|row| row.accuracy.gamma_n.as_ref().is_some_and(|g| g.value <= Rational::from_integer(1.into()))).map(OrderRow::n);
    out.check(first_gamma == Some(11), || format!("gamma_N <= 1 first at {first_gamma:?}, expected N=11"));
    out.absorb(factor_sandwich(r));
    out
}

/// `||a_pm^(ref) - a_pm^(N)||_W <= delta_pm^(N)` wherever both exist.
fn factor_sandwich(r: &Reproduction) -> Outcome {
    let mut out = Outcome::default();
    let mut pairs = 0;
    for row in &r.rows {
        let sides = [("plus", &row.dist_plus_reference, &row.accuracy.delta_plus), ("minus", &row.dist_minus_reference, &row.accuracy.delta_minus)];
        for (side, dist, bound) in sides {
            if let (Some(d), Some(b)) = (dist, bound) {
                pairs += 1;
                out.check(d.value <= b.value, || format!("N={} {side}: distance {:e} above bound {:e}", row.n(), to_f64(&d.value), to_f64(&b.value)));
            }
        }
    }
    out.notes.push(format!("factor sandwich checked at {pairs} (N, side) pairs"));
    out
}

fn criterion_3() -> Outcome {
    let family = ExampleFamily::reference(FamilyId::Ex61);
    let listing = parse_listing(EX61_LISTING).unwrap();
    let analysis = whstab::criterion::analyse_truncation(
        &family.model,
        15,
        &whstab::criterion::ZetaMode::Fixed(family.default_zeta.clone()),
        whstab::normalise::NormaliseMode::Auto,
    )
    .unwrap();
    let a_minus = &analysis.factorisation.a_minus;
    let mut out = Outcome::default();
    let tol = 1e-8;
    let raw_lines: Vec<&str> = EX61_LISTING.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).skip(1).collect();
    for (c, line) in listing.iter().zip(raw_lines) {
        let exact = a_minus.get(c.entry.0, c.entry.1).coeff(c.power);
        let dev = (&exact - &c.value).abs_f64();
        if dev <= tol {
            out.compared += 1;
            continue;
        }
        // a value whose ten printed digits are right but whose decimal exponent is off by one
        let shifted = [Rational::new(10.into(), 1.into()), Rational::new(1.into(), 10.into())]
            .into_iter()
            .any(|s| (&exact - &c.value.scale(&s)).abs_f64() <= tol * 1e-2);
        if shifted {
            out.compared += 1;
            out.misprints.push(format!("entry {:?} power {}: printed {line:?} has its decimal exponent off by one", c.entry, c.power));
        } else {
            out.check(false, || format!("entry {:?} power {}: printed {line:?}, deviation {dev:e}", c.entry, c.power));
        }
    }
    let unlisted: Vec<String> = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .flat_map(|(i, j)| a_minus.get(i, j).terms().filter(|(_, z)| z.abs_f64() > tol).map(move |(k, _)| (i, j, k)).collect::<Vec<_>>())
        .filter(|(i, j, k)| !listing.iter().any(|c| c.entry == (*i, *j) && c.power == *k))
        .map(|(i, j, k)| format!("({i},{j}) t^{k}"))
        .collect();
    out.check(unlisted.is_empty(), || format!("coefficients above 1e-8 missing from the listing: {}", unlisted.join(" ")));
    let check = factor_coefficient_check(&family, 15, Side::Minus, &listing).unwrap();
    out.notes.push(format!("{} listed coefficients, largest raw deviation {:e}", check.compared, check.max_deviation));
    out
}

fn criterion_4() -> Outcome {
    let r = run(FamilyId::Ex62);
    let table = Table::parse(EX62_CRITERION);
    let mut out = compare_columns(
        &table,
        r,
        &[
            ("delta_N", delta),
            ("norm_inv_plus", inv_plus),
            ("norm_inv_minus", inv_minus),
            ("q_N", q),
            ("gamma_N", gamma),
            ("dist_a30", dist_n_max),
            ("dist_a40", dist_reference),
        ],
    );
    out.absorb(indices_from(r, 3, (3, 3)));
    out.absorb(first_certified(r, 12));
    let row30 = r.rows.last().unwrap();
    for (name, bound, limit) in [("delta_plus", &row30.accuracy.delta_plus, "3.012e-3"), ("delta_minus", &row30.accuracy.delta_minus, "5.474e-7")] {
        match bound {
            Some(b) => {
                let (ours, p) = rounded_to_printed(&b.value, limit);
                out.check(ours <= p.value, || format!("N=30 {name}: computed {:e} not below {limit}", to_f64(&b.value)));
                out.notes.push(format!("N=30 {name} = {:.7e}", to_f64(&b.value)));
            }
            None => out.check(false, || format!("N=30 {name} unavailable")),
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let r = run(FamilyId::Ex63);
    let table = Table::parse(EX63_CRITERION);
    let mut out =
        compare_columns(&table, r, &[("delta_N", delta), ("norm_inv_plus", inv_plus), ("norm_inv_minus", inv_minus), ("q_N", q), ("dist_a30", dist_n_max), ("dist_a40", dist_reference)]);
    out.absorb(indices_from(r, 3, (-4, -3)));
    out.absorb(first_certified(r, 24));
    for row in &r.rows {
        let a = &row.accuracy;
        let unavailable = a.delta_plus.is_none() && a.delta_minus.is_none() && a.note.as_deref().is_some_and(|n| n.contains("odd theta"));
        out.check(unavailable, || format!("N={} factor accuracy is not reported unavailable", row.n()));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::default();
    for (id, text) in [(FamilyId::Ex61, EX61_CRITERION), (FamilyId::Ex62, EX62_CRITERION), (FamilyId::Ex63, EX63_CRITERION)] {
        let r = run(id);
        for row in &r.rows {
            let (d, b) = (&row.dist_reference.value, &row.analysis.report.delta_n.value);
            out.check(d <= b, || format!("{id} N={}: ||a_40 - a_N|| = {:e} above delta_N = {:e}", row.n(), to_f64(d), to_f64(b)));
        }
        let mut cols = compare_columns(&Table::parse(text), r, &[("dist_a40", dist_reference)]);
        cols.failures.iter_mut().chain(cols.misprints.iter_mut()).for_each(|f| *f = format!("{id} {f}"));
        out.absorb(cols);
    }
    out
}

fn criterion_7() -> Outcome {
    use common::props;
    let mut out = Outcome::default();
    let mut step = |name: &str, r: Result<(), String>| out.check(r.is_ok(), || format!("{name}: {}", r.unwrap_err()));
    step("refactorisation and kernel law, 200 matrices", props::monomial_corpus(200));
    for indices in [(0, 0), (2, 2), (0, 1), (-4, -3)] {
        step(&format!("100 twists at indices {indices:?}"), props::twists(indices, 100));
    }
    step("delta_N monotone, 40 models", props::delta_monotone(40));
    step("sqrt one-sided, 334 cases", props::sqrt_one_sided(334));
    step("exp one-sided, 333 cases", props::exp_one_sided(333));
    step("abs one-sided, 333 cases", props::abs_one_sided(333));
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    // `cargo test -- --list` and friends pass libtest flags through
    if std::env::args().any(|a| a == "--list") {
        println!("0 tests, 0 benchmarks");
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 7] = [
        ("ex61 criterion table", criterion_1),
        ("ex61 factor accuracy", criterion_2),
        ("ex61 minus factor at N=15", criterion_3),
        ("ex62 criterion table", criterion_4),
        ("ex63 criterion table", criterion_5),
        ("truncation sandwich and distances", criterion_6),
        ("property suite", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            Outcome { failures: vec![format!("panicked: {msg}")], ..Outcome::default() }
        });
        let pass = outcome.failures.is_empty();
        failed += usize::from(!pass);
        let mut extra = String::new();
        if !outcome.misprints.is_empty() {
            extra = format!(", {} misprint(s) set aside", outcome.misprints.len());
        }
        println!(
            "criterion {} ({name}): {}  {} checks, {} failed{extra}, {:.1}s",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.compared,
            outcome.failures.len(),
            start.elapsed().as_secs_f64()
        );
        for m in &outcome.misprints {
            println!("    misprint: {m}");
        }
        for f in &outcome.failures {
            println!("    mismatch: {f}");
        }
        for n in &outcome.notes {
            println!("    note: {n}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 7 criteria failed");
        ExitCode::FAILURE
    }
}
