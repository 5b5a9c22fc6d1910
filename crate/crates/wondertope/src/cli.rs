//! Command-line front end. Exit codes: 0 when every check passes, 1 when a verification
//! fails or a computation is refused, 2 for malformed input.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::blowup::{fundamental, verify_wondertope_seeded};
use crate::buildingset_geom::{check_face_condition, GeomBuildingSet};
use crate::canonical_form::{polytope_form, polytope_form_with_order, verify_recursion};
use crate::error::Error;
use crate::io;
use crate::m0n;
use crate::matroid::{
    is_building_set, maximal_building_set, minimal_building_set, nested_set_complex, verify_product_all,
    verify_product_theorem, FlatLattice, MatroidBuildingSet,
};
use crate::polytope::Polytope;
use crate::report::VerificationReport;
use crate::TopForm;

pub const MAX_DIM_VAR: &str = "WONDERTOPE_MAX_DIM";
const DEFAULT_MAX_DIM: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "wondertope", version, about = "Canonical forms, linear blow-ups and wondertope checks")]
pub struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical form of a polytope.
    CanonicalForm {
        polytope: PathBuf,
        /// Pulling order of the vertices, e.g. `3,0,1,2`.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Recursive residue check of the canonical form.
    VerifyRecursion { polytope: PathBuf },
    /// Blows up along one center and checks the exceptional residue.
    Blowup {
        #[arg(long)]
        center: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
        /// Report a failed face condition instead of refusing the computation.
        #[arg(long)]
        require_face: bool,
    },
    /// Full wondertope verification for a geometric building set.
    Wondertope {
        #[arg(long)]
        building_set: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
    },
    /// Building-set test and nested set complex of a lattice building set.
    NestedSet {
        /// Lattice JSON file or name such as `Π4`, `boolean:3`, `uniform:3:5`.
        #[arg(long)]
        lattice: String,
        /// `min`, `max`, or a JSON file `{"flats": [...]}`.
        #[arg(long, default_value = "min")]
        building_set: String,
        /// List every face.
        #[arg(long)]
        faces: bool,
    },
    /// Link decomposition through restriction and contraction.
    VerifyProduct {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value = "min")]
        building_set: String,
        /// One element of the building set; all of them when omitted.
        #[arg(long)]
        flat: Option<String>,
    },
    /// Parke–Taylor form and the braid-arrangement checks.
    M0n {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug)]
pub enum Failure {
    Input(Error),
    Compute(Error),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

/// Printed output and exit code of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn input<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Input)
}

fn compute<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Compute)
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(Error::Parse(format!("{MAX_DIM_VAR}={s:?} is not a dimension")))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn load_polytope(path: &PathBuf) -> Result<Polytope, Failure> {
    let p = input(io::parse_polytope(&input(io::read_json(path))?))?;
    let cap = max_dim()?;
    if p.ambient_dim() > cap {
        return Err(Failure::Input(Error::Precondition(format!(
            "ambient dimension {} exceeds {MAX_DIM_VAR}={cap}",
            p.ambient_dim()
        ))));
    }
    Ok(p)
}

fn load_lattice_building_set(l: &FlatLattice, arg: &str) -> Result<MatroidBuildingSet, Failure> {
    match arg {
        "min" => Ok(minimal_building_set(l)),
        "max" => Ok(maximal_building_set(l)),
        path => input(io::parse_lattice_building_set(l, &input(io::read_json(path))?)),
    }
}

fn form_json(w: &TopForm) -> Value {
    json!({
        "form": w.to_string(),
        "chart": w.chart().to_vec(),
        "numerator": w.coef().num().to_string(),
        "denominator": w.coef().den().to_string(),
    })
}

fn report_outcome(json_out: bool, r: &VerificationReport, extra: Value, human_head: String) -> Outcome {
    let stdout = if json_out {
        let mut v = serde_json::to_value(r).expect("reports serialize");
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        serde_json::to_string_pretty(&v).expect("values serialize")
    } else if human_head.is_empty() {
        r.to_string()
    } else {
        format!("{human_head}\n{r}")
    };
    Outcome { code: if r.passed() { 0 } else { 1 }, stdout }
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let json_out = cli.json;
    match &cli.command {
        Command::CanonicalForm { polytope, order } => {
            let p = load_polytope(polytope)?;
            let w = match order {
                Some(o) => {
                    let mut sorted = o.clone();
                    sorted.sort();
                    if sorted != (0..p.vertices().len()).collect::<Vec<_>>() {
                        return Err(Failure::Input(Error::Parse(format!(
                            "--order must be a permutation of 0..{}",
                            p.vertices().len()
                        ))));
                    }
                    compute(polytope_form_with_order(&p, o))?
                }
                None => compute(polytope_form(&p))?,
            };
            let stdout = if json_out {
                let mut v = form_json(&w);
                v["schema"] = json!(1);
                serde_json::to_string_pretty(&v).expect("values serialize")
            } else {
                w.to_string()
            };
            Ok(Outcome { code: 0, stdout })
        }
        Command::VerifyRecursion { polytope } => {
            let p = load_polytope(polytope)?;
            let r = compute(verify_recursion(&p))?;
            Ok(report_outcome(json_out, &r, json!({}), String::new()))
        }
        Command::Blowup { center, polytope, require_face } => {
            let p = load_polytope(polytope)?;
            let w = input(io::parse_subspace(&input(io::read_json(center))?, Some(p.ambient_dim())))?;
            if *require_face {
                let b = input(GeomBuildingSet::with_labels(p.ambient_dim(), vec![w.clone()], vec!["W".into()]))?;
                let r = check_face_condition(&p, &b);
                if !r.passed() {
                    return Ok(report_outcome(json_out, &r, json!({}), String::new()));
                }
            }
            let f = compute(fundamental(&p, &w, cli.seed))?;
            let extra = json!({
                "chart": f.chart.map().to_string(),
                "switch": f.switch.as_ref().map(|s| s.to_string()),
                "pullback": form_json(&f.pullback),
                "pole_order": f.pole_order,
                "residue": f.residue.as_ref().map(form_json),
                "expected_residue": f.expected.as_ref().map(form_json),
            });
            let mut head = vec![format!("chart     {}", f.chart.map())];
            if let Some(s) = &f.switch {
                head.push(format!("switch    {s}"));
            }
            head.push(format!("π*Ω       {}", f.pullback));
            head.push(format!("pole      {}", f.pole_order));
            if let Some(res) = &f.residue {
                head.push(format!("residue   {res}"));
            }
            Ok(report_outcome(json_out, &f.report, extra, head.join("\n")))
        }
        Command::Wondertope { building_set, polytope } => {
            let p = load_polytope(polytope)?;
            let b = input(io::parse_building_set(&input(io::read_json(building_set))?, Some(p.ambient_dim())))?;
            let r = compute(verify_wondertope_seeded(&p, &b, cli.seed))?;
            Ok(report_outcome(json_out, &r, json!({}), String::new()))
        }
        Command::NestedSet { lattice, building_set, faces } => {
            let l = input(io::load_lattice(lattice))?;
            let b = load_lattice_building_set(&l, building_set)?;
            let mut r = VerificationReport::new(format!("nested set complex of a building set of {l}"));
            let (ok, w) = is_building_set(&l, &b);
            r.check("B is a building set", ok, w.unwrap_or(Value::Null));
            if !ok {
                return Ok(report_outcome(json_out, &r, json!({"building_set": b.labels(&l)}), String::new()));
            }
            let n = compute(nested_set_complex(&l, &b))?;
            let labels = |xs: &[usize]| xs.iter().map(|&x| l.label(x)).collect::<Vec<_>>();
            let mut extra = json!({
                "building_set": b.labels(&l),
                "vertices": labels(&n.vertices),
                "f_vector": n.f_vector(),
            });
            let mut head = vec![
                format!("B         {} elements: {}", b.len(), b.labels(&l).join(" ")),
                format!("vertices  {}: {}", n.vertices.len(), labels(&n.vertices).join(" ")),
                format!("f-vector  {:?}", n.f_vector()),
            ];
            if *faces {
                let all: Vec<Vec<String>> = n.faces.iter().map(|f| labels(f)).collect();
                head.extend(all.iter().map(|f| format!("  {{{}}}", f.join(", "))));
                extra["faces"] = json!(all);
            }
            Ok(report_outcome(json_out, &r, extra, head.join("\n")))
        }
        Command::VerifyProduct { lattice, building_set, flat } => {
            let l = input(io::load_lattice(lattice))?;
            let b = load_lattice_building_set(&l, building_set)?;
            let r = match flat {
                Some(s) => {
                    let f = input(l.parse_flat(s))?;
                    if !b.contains(f) {
                        return Err(Failure::Input(Error::Precondition(format!("{s} is not in the building set"))));
                    }
                    compute(verify_product_theorem(&l, &b, f))?
                }
                None => compute(verify_product_all(&l, &b))?,
            };
            Ok(report_outcome(json_out, &r, json!({}), String::new()))
        }
        Command::M0n { n, verify } => {
            if *n < 3 || (*verify && *n > 6) {
                return Err(Failure::Input(Error::Precondition(format!(
                    "n = {n} is outside 3..={}",
                    if *verify { 6 } else { 64 }
                ))));
            }
            let pt = compute(m0n::parke_taylor(*n))?;
            if !verify {
                let stdout = if json_out {
                    let mut v = form_json(&pt);
                    v["schema"] = json!(1);
                    serde_json::to_string_pretty(&v).expect("values serialize")
                } else {
                    pt.to_string()
                };
                return Ok(Outcome { code: 0, stdout });
            }
            let mut r = VerificationReport::new(format!("braid arrangement checks for n = {n}"));
            r.merge("parke-taylor", compute(m0n::verify_parke_taylor(*n))?);
            let c = compute(m0n::divisor_count(*n))?;
            r.check(
                "divisor count is 2^n − n − 2 and the vertex count of the nested set complex",
                c.agrees(),
                json!({"count": c.count, "formula": c.formula, "nested_vertices": c.nested_vertices}),
            );
            if *n == 4 {
                r.merge("pentagon", compute(m0n::verify_m05_pentagon())?);
            }
            Ok(report_outcome(json_out, &r, json!({"parke_taylor": form_json(&pt)}), format!("Parke–Taylor  {pt}")))
        }
    }
}

/// Parses `args` (including the program name), runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            println!("{}", o.stdout);
            o.code
        }
        Err(f) => {
            let (kind, e) = match &f {
                Failure::Input(e) => ("input error", e),
                Failure::Compute(e) => ("error", e),
            };
            if cli.json {
                println!("{}", json!({"schema": 1, "error": e.to_string(), "kind": kind}));
            }
            eprintln!("{kind}: {e}");
            f.code()
        }
    }
}
