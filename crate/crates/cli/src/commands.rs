use std::io::Read;

use num_traits::{Signed, Zero};
use orthoprob_core::cox::{
    associativity_residual, extract_additive_representation, rescaling_transport, GridFunction, MonotoneMap,
};
use orthoprob_core::formats::{gen_boolean, gen_mo, parse_any, serialize, LatticeDocument};
use orthoprob_core::hilbert::{
    born, born_state_on_lattice, generate_projection_lattice, ket, parse_matrix, random_density, random_resolution,
    transition_probability, unit, write_matrix, DensityMatrix, Projection, SubspaceBasis, Tolerances,
    DEFAULT_CLOSURE_CAP,
};
use orthoprob_core::lattice::find_isomorphism;
use orthoprob_core::states::{
    admits_state, inclusion_exclusion_defect, parse_state, random_state, state_polytope_vertices,
    superadditivity_defect, superadditivity_witness, total_probability_defect, validate_state,
    validate_state_approx, write_state, write_states, Admission, DefectReport, State,
};
use orthoprob_core::{cox::cox_rules_check, Element, LawReport, OrthoLattice, Rational};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_OK, EXIT_VIOLATION};
use crate::{
    Cli, CliResult, Command, CoxCommand, DefectArg, Demo, Family, GridArgs, HilbertCommand, LawSet, StatesCommand,
};

/// Buffered output in one of the two formats.
pub struct Output {
    json: bool,
    buf: String,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Self { json, buf: String::new() }
    }

    pub fn buffer(&self) -> &str {
        &self.buf
    }

    /// Text output; `text` must end in a newline or be a single line.
    fn emit(&mut self, text: impl AsRef<str>, record: impl FnOnce() -> Value) {
        if self.json {
            self.buf.push_str(&record().to_string());
            self.buf.push('\n');
        } else {
            self.buf.push_str(text.as_ref());
            if !self.buf.ends_with('\n') {
                self.buf.push('\n');
            }
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }
}

/// `.oml`, `.gre`, or the JSON lattice document.
pub fn lattice_from_text(text: &str) -> Result<OrthoLattice, CliError> {
    if text.trim_start().starts_with('{') {
        let doc: LatticeDocument = serde_json::from_str(text.trim())?;
        let l = OrthoLattice::from_structure(doc.to_structure()?)?;
        Ok(l)
    } else {
        Ok(parse_any(text)?)
    }
}

fn load_lattice(path: &str) -> Result<OrthoLattice, CliError> {
    lattice_from_text(&read_input(path)?)
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}

fn labels(l: &OrthoLattice, xs: &[Element]) -> Vec<String> {
    xs.iter().map(|&x| l.display(x)).collect()
}

fn resolve(l: &OrthoLattice, token: &str) -> Result<Element, CliError> {
    l.resolve(token)
        .ok_or_else(|| CliError::Usage(format!("no element `{token}` in the lattice")))
}

pub fn run(cli: &Cli, out: &mut Output) -> CliResult {
    match &cli.command {
        Command::Gen { family, n } => {
            let l = match family {
                Family::Boolean => gen_boolean(u32::try_from(*n).unwrap_or(u32::MAX))?,
                Family::Mo => gen_mo(*n)?,
            };
            emit_lattice(out, &l);
            Ok(EXIT_OK)
        }
        Command::Parse { file } => {
            let l = load_lattice(file)?;
            let atoms = l.atoms();
            let om = l.is_orthomodular().holds;
            let text = format!(
                "name {}\nelements {}\natoms {}\nfingerprint {}\northomodular {}\n",
                l.name().unwrap_or("-"),
                l.size(),
                labels(&l, &atoms).join(" "),
                l.fingerprint(),
                if om { "yes" } else { "no" },
            );
            out.emit(text, || {
                json!({
                    "name": l.name(),
                    "elements": l.size(),
                    "atoms": atoms,
                    "atom_labels": labels(&l, &atoms),
                    "fingerprint": l.fingerprint(),
                    "orthomodular": om,
                })
            });
            Ok(EXIT_OK)
        }
        Command::Serialize { file } => {
            let l = load_lattice(file)?;
            emit_lattice(out, &l);
            Ok(EXIT_OK)
        }
        Command::Check { file, law } => check(out, &load_lattice(file)?, *law),
        Command::Blocks { file } => {
            let l = load_lattice(file)?;
            for b in l.blocks()? {
                out.emit(format!("block {}", labels(&l, &b.atoms).join(" ")), || {
                    json!({
                        "atoms": b.atoms,
                        "labels": labels(&l, &b.atoms),
                        "elements": b.elements,
                    })
                });
            }
            Ok(EXIT_OK)
        }
        Command::States(cmd) => states(out, cmd, cli.seed),
        Command::Defect { kind, file, a, b, state } => defect(out, *kind, file, a, b, state.as_deref(), cli.seed),
        Command::Hilbert(cmd) => {
            let tol = match cli.tol {
                Some(t) if t > 0.0 && t.is_finite() => Tolerances::with_equality(t),
                Some(t) => return Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
                None => Tolerances::default(),
            };
            hilbert(out, cmd, cli.seed, &tol)
        }
        Command::Cox(cmd) => cox(out, cmd),
    }
}

fn emit_lattice(out: &mut Output, l: &OrthoLattice) {
    out.emit(serialize(l), || {
        serde_json::to_value(LatticeDocument::from_lattice(l)).expect("lattice document serializes")
    });
}

fn emit_report(out: &mut Output, l: &OrthoLattice, r: &LawReport) {
    let text = match &r.witness {
        None => format!("{} holds", r.law),
        Some(w) => format!("{} fails {}", r.law, labels(l, w).join(" ")),
    };
    out.emit(text, || {
        json!({
            "law": r.law,
            "holds": r.holds,
            "witness": r.witness,
            "labels": r.witness.as_ref().map(|w| labels(l, w)),
        })
    });
}

fn check(out: &mut Output, l: &OrthoLattice, law: LawSet) -> CliResult {
    let mut reports = Vec::new();
    if matches!(law, LawSet::All | LawSet::Ortho) {
        reports.extend(l.validate_ortholattice());
    }
    if matches!(law, LawSet::All | LawSet::Om) {
        reports.push(l.is_orthomodular());
    }
    if matches!(law, LawSet::All | LawSet::Modular) {
        reports.push(l.is_modular());
    }
    if matches!(law, LawSet::All | LawSet::Dist) {
        reports.push(l.is_distributive());
    }
    for r in &reports {
        emit_report(out, l, r);
    }
    Ok(if reports.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_VIOLATION })
}

fn emit_state(out: &mut Output, l: &OrthoLattice, s: &State, extra: Value) {
    out.emit(write_state(l, s), || {
        let mut v = json!({
            "lattice": l.name(),
            "fingerprint": l.fingerprint(),
            "approximate": s.approximate,
            "values": rationals(&s.values),
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        v
    });
}

fn load_state(l: &OrthoLattice, path: &str) -> Result<State, CliError> {
    Ok(parse_state(&read_input(path)?)?.into_state(l)?)
}

fn states(out: &mut Output, cmd: &StatesCommand, seed: u64) -> CliResult {
    match cmd {
        StatesCommand::Feasible { file } => {
            let l = load_lattice(file)?;
            match admits_state(&l) {
                Admission::Feasible(s) => {
                    out.emit("feasible", || json!({ "feasible": true }));
                    emit_state(out, &l, &s, json!({}));
                    Ok(EXIT_OK)
                }
                Admission::Infeasible(c) => {
                    let y = rationals(&c.multipliers);
                    out.emit(format!("infeasible\ncertificate {}\n", y.join(" ")), || {
                        json!({ "feasible": false, "certificate": y })
                    });
                    Ok(EXIT_VIOLATION)
                }
            }
        }
        StatesCommand::Vertices { file } => {
            let l = load_lattice(file)?;
            let vs = state_polytope_vertices(&l)?.vertices.unwrap_or_default();
            if out.json {
                for (i, s) in vs.iter().enumerate() {
                    emit_state(out, &l, s, json!({ "vertex": i, "of": vs.len() }));
                }
            } else {
                out.emit(format!("# {} vertices\n\n{}", vs.len(), write_states(&l, &vs)), Value::default);
            }
            Ok(if vs.is_empty() { EXIT_VIOLATION } else { EXIT_OK })
        }
        StatesCommand::Random { file } => {
            let l = load_lattice(file)?;
            let s = random_state(&l, seed)?;
            emit_state(out, &l, &s, json!({ "seed": seed }));
            Ok(EXIT_OK)
        }
        StatesCommand::Validate { file, state } => {
            let l = load_lattice(file)?;
            let s = load_state(&l, state)?;
            let r = if s.approximate {
                validate_state_approx(&l, &s.to_f64(), 1e-9)?
            } else {
                validate_state(&l, &s)?
            };
            let c = cox_rules_check(&l, &s);
            emit_report(out, &l, &r);
            emit_report(out, &l, &c);
            Ok(if r.holds && c.holds { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn defect_at(kind: DefectArg, l: &OrthoLattice, s: &State, a: Element, b: Element) -> Result<DefectReport, CliError> {
    Ok(match kind {
        DefectArg::Ie => inclusion_exclusion_defect(l, s, a, b)?,
        DefectArg::Tp => total_probability_defect(l, s, a, b)?,
        DefectArg::Super => superadditivity_defect(l, s, a, b)?,
    })
}

fn emit_defect(out: &mut Output, l: &OrthoLattice, r: &DefectReport) {
    let text = format!(
        "{} {}: left {} right {} defect {}",
        serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        labels(l, &r.elements[..2]).join(" "),
        r.left,
        r.right,
        r.defect,
    );
    out.emit(text, || {
        json!({
            "kind": r.kind,
            "elements": r.elements,
            "labels": labels(l, &r.elements),
            "left": r.left.to_string(),
            "right": r.right.to_string(),
            "defect": r.defect.to_string(),
        })
    });
}

fn defect(
    out: &mut Output,
    kind: DefectArg,
    file: &str,
    a: &Option<String>,
    b: &Option<String>,
    state: Option<&str>,
    seed: u64,
) -> CliResult {
    let l = load_lattice(file)?;
    let pair = match (a, b) {
        (Some(a), Some(b)) => Some((resolve(&l, a)?, resolve(&l, b)?)),
        (None, None) => None,
        _ => return Err(CliError::Usage("give both elements of the pair or neither".into())),
    };
    if kind == DefectArg::Super && state.is_none() && pair.is_none() {
        return match superadditivity_witness(&l)? {
            Some(w) => {
                emit_defect(out, &l, &w.report);
                emit_state(out, &l, &w.state, json!({}));
                Ok(if w.report.defect.is_zero() { EXIT_OK } else { EXIT_VIOLATION })
            }
            None => {
                out.emit("no witness", || json!({ "witness": null }));
                Ok(EXIT_OK)
            }
        };
    }
    let s = match state {
        Some(p) => load_state(&l, p)?,
        None => random_state(&l, seed)?,
    };
    let report = match pair {
        Some((a, b)) => defect_at(kind, &l, &s, a, b)?,
        None => {
            let mut best: Option<DefectReport> = None;
            for a in l.elements() {
                for b in l.elements() {
                    let r = defect_at(kind, &l, &s, a, b)?;
                    if best.as_ref().is_none_or(|x| r.defect.abs() > x.defect.abs()) {
                        best = Some(r);
                    }
                }
            }
            best.expect("lattices are nonempty")
        }
    };
    emit_defect(out, &l, &report);
    Ok(if report.defect.is_zero() { EXIT_OK } else { EXIT_VIOLATION })
}

fn emit_matrix(out: &mut Output, name: &str, m: &orthoprob_core::hilbert::CMatrix) {
    out.emit(format!("{name}\n{}", write_matrix(m)), || {
        json!({ "matrix": name, "mat": write_matrix(m) })
    });
}

fn emit_value(out: &mut Output, name: &str, v: f64) {
    out.emit(format!("{name} {v}"), || json!({ name: v }));
}

fn hilbert(out: &mut Output, cmd: &HilbertCommand, seed: u64, tol: &Tolerances) -> CliResult {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match cmd {
        HilbertCommand::Born { rho, projection } => {
            let rho = DensityMatrix::new(parse_matrix(&read_input(rho)?)?)?;
            let p = Projection::with_tolerance(parse_matrix(&read_input(projection)?)?, tol.structure)?;
            emit_value(out, "born", born(&rho, &p)?);
        }
        HilbertCommand::Demo { which: Demo::Qubit } => {
            let zero = ket(2, 0);
            let plus = unit(&[h, h], &[0.0, 0.0]);
            let rho = DensityMatrix::pure(&zero)?;
            let p = orthoprob_core::hilbert::projector_from_basis(&SubspaceBasis::span(2, std::slice::from_ref(&plus))?);
            emit_matrix(out, "rho", rho.matrix());
            emit_matrix(out, "projection", p.matrix());
            emit_value(out, "born", born(&rho, &p)?);
            emit_value(out, "transition", transition_probability(&zero, &plus)?);
            emit_value(out, "complement", born(&rho, &p.complement())?);
        }
        HilbertCommand::Demo { which: Demo::Qutrit } => {
            let rho = random_density(3, seed)?;
            let family = random_resolution(3, seed)?;
            emit_matrix(out, "rho", rho.matrix());
            let mut total = 0.0;
            for (j, p) in family.iter().enumerate() {
                let v = born(&rho, p)?;
                total += v;
                out.emit(format!("born P{j} rank {} {v}", p.rank()), || {
                    json!({ "projection": j, "rank": p.rank(), "born": v })
                });
            }
            emit_value(out, "sum", total);
        }
        HilbertCommand::Demo { which: Demo::Closure } => {
            let seeds = [
                SubspaceBasis::span(2, &[ket(2, 0)])?,
                SubspaceBasis::span(2, &[unit(&[h, h], &[0.0, 0.0])])?,
            ];
            let pl = generate_projection_lattice(&seeds, DEFAULT_CLOSURE_CAP, tol)?;
            emit_lattice(out, &pl.lattice);
            let iso = find_isomorphism(&pl.lattice, &gen_mo(2)?).is_some();
            out.emit(format!("isomorphic-to mo-2 {}", if iso { "yes" } else { "no" }), || {
                json!({ "isomorphic_to_mo2": iso })
            });
            let bs = born_state_on_lattice(&DensityMatrix::pure(&ket(2, 0))?, &pl)?;
            for (x, v) in bs.values.iter().enumerate() {
                let name = pl.lattice.display(x);
                out.emit(format!("born {name} {v}"), || json!({ "element": x, "label": name, "born": v }));
            }
            let r = validate_state_approx(&pl.lattice, &bs.values, 1e-9)?;
            emit_report(out, &pl.lattice, &r);
            return Ok(if iso && r.holds { EXIT_OK } else { EXIT_VIOLATION });
        }
    }
    Ok(EXIT_OK)
}

fn load_grid(g: &GridArgs) -> Result<GridFunction, CliError> {
    match g.function.as_str() {
        "sum" | "sumprod" | "sumsq" => Ok(GridFunction::builtin(&g.function, g.points, g.x_max)?),
        path => Ok(GridFunction::parse(&read_input(path)?)?),
    }
}

fn parse_map(text: &str) -> Result<MonotoneMap, CliError> {
    let bad = || CliError::Usage(format!("bad map `{text}` (identity, scale:<c> or power:<p>)"));
    if text == "identity" {
        return Ok(MonotoneMap::Identity);
    }
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    let v: f64 = arg.parse().map_err(|_| bad())?;
    match kind {
        "scale" => Ok(MonotoneMap::Scale(v)),
        "power" => Ok(MonotoneMap::Power(v)),
        _ => Err(bad()),
    }
}

fn cox(out: &mut Output, cmd: &CoxCommand) -> CliResult {
    match cmd {
        CoxCommand::Residual { grid } => {
            let f = load_grid(grid)?;
            let r = associativity_residual(&f)?;
            let worst = r.worst.map(|(i, j, k)| format!("{i} {j} {k}")).unwrap_or_else(|| "-".into());
            out.emit(
                format!(
                    "residual {:e}\nadmissible {}\nskipped {}\nworst {worst}\n",
                    r.value, r.admissible, r.skipped
                ),
                || {
                    json!({
                        "residual": r.value,
                        "admissible": r.admissible,
                        "skipped": r.skipped,
                        "worst": r.worst.map(|(i, j, k)| [i, j, k]),
                    })
                },
            );
        }
        CoxCommand::Extract { grid, unit, stride } => {
            let f = load_grid(grid)?;
            let rep = extract_additive_representation(&f, *unit)?;
            let mut text = format!(
                "unit {}\ninput-residual {:e}\nresidual {:e}\n",
                rep.unit, rep.input_residual, rep.residual
            );
            for i in (0..f.points()).step_by((*stride).max(1)) {
                text.push_str(&format!("h {} {}\n", f.x(i), rep.grid[i]));
            }
            out.emit(text, || {
                json!({
                    "unit": rep.unit,
                    "input_residual": rep.input_residual,
                    "residual": rep.residual,
                    "worst": rep.worst.map(|(i, j)| [i, j]),
                    "h": rep.grid,
                })
            });
        }
        CoxCommand::Transport { grid, map } => {
            let f = load_grid(grid)?;
            let g = rescaling_transport(&f, &parse_map(map)?)?;
            out.emit(g.to_text(), || {
                json!({ "points": g.points(), "x_max": g.x_max(), "values": g.values() })
            });
        }
    }
    Ok(EXIT_OK)
}
