use std::path::{Path, PathBuf};

use gcx_core::complex::{coboundary, coboundary_matrix, generate_basis, grading, ComplexError};
use gcx_core::gluing::{
    corner_collapse_analysis, plan_chord_mod2, plan_cocycle, plan_mod2, spherical_signatures,
    verify_fundamental_cycle, GluingError, GluingPlan,
};
use gcx_core::homology::{
    cocycle_space, cohomology_group, consistent_orientation, extend_to_cocycle, minimal_decomposition,
    HomologyError,
};
use gcx_core::io::{to_json, BasisFile, IoError};
use gcx_core::linalg::SparseMatrix;
use gcx_core::strata::{
    codim_certificate, corner_poset, dimensions, enumerate_faces, poincare_polynomial, Face, PoincareMode,
    StrataError,
};
use gcx_core::{Budget, Cochain, Convention, Diagram, Ring};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::cache::{Cache, CacheKey};
use crate::text;
use crate::{Cli, Command, GradingArgs, ModeArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
            CliError::Complex(_) => "complex",
            CliError::Homology(_) => "homology",
            CliError::Strata(_) => "strata",
            CliError::Gluing(_) => "gluing",
            CliError::Io(_) => "format",
        }
    }
}

/// A rendered report in both formats.
pub struct Body {
    pub json: String,
    pub text: String,
}

pub struct Report {
    pub body: Body,
    /// False when the report itself records a failed check.
    pub ok: bool,
}

fn report<T: Serialize>(value: &T, text: String) -> Result<Report, CliError> {
    Ok(Report { body: Body { json: to_json(value)?, text }, ok: true })
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_slice(&raw).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

/// Run `f` over `items` on up to `jobs` threads, keeping the input order.
fn par_map<T: Sync, R: Send, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    F: Fn(&T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn key(cmd: &str, g: &GradingArgs, ring: Ring) -> CacheKey {
    CacheKey::new(cmd, g.m, g.n, g.k, g.convention.into(), ring)
}

pub fn run(cli: &Cli, cache: &Cache) -> Result<Report, CliError> {
    let budget = Budget::default();
    let jobs = cli.jobs as usize;
    match &cli.command {
        Command::Basis { grading: g, ring } => {
            let ring: Ring = ring.ring.into();
            let conv: Convention = g.convention.into();
            let file: BasisFile = cache.get_or_compute(&key("basis", g, ring), || {
                let diagrams = generate_basis(g.m, g.n, g.k, conv, ring, &budget)?;
                Ok::<_, CliError>(BasisFile::new(g.m, g.n, g.k, conv, ring, diagrams)?)
            })?;
            file.validate()?;
            report(&file, text::basis(&file))
        }
        Command::Grading { input } => {
            let d: Diagram = read(input)?;
            let g = grading(&d);
            report(&g, format!("order {} defect {}\n", g.order, g.defect))
        }
        Command::D { input } => {
            let c: Cochain = read(input)?;
            let dc = coboundary(&c)?;
            report(&dc, text::cochain(&dc))
        }
        Command::Matrix { grading: g, ring } => {
            let ring: Ring = ring.ring.into();
            let m: SparseMatrix = cache.get_or_compute(&key("matrix", g, ring), || {
                coboundary_matrix(g.m, g.n, g.k, g.convention.into(), ring, &budget)
            })?;
            report(&m, text::matrix(&m))
        }
        Command::Cohomology { grading: g } => {
            let h = cache.get_or_compute(&key("cohomology", g, Ring::Z), || {
                cohomology_group(g.m, g.n, g.k, g.convention.into(), &budget)
            })?;
            report(&h, text::cohomology(&h))
        }
        Command::Cocycles { grading: g, ring } => {
            let ring: Ring = ring.ring.into();
            let cs: Vec<Cochain> = cache.get_or_compute(&key("cocycles", g, ring), || {
                cocycle_space(g.m, g.n, g.k, g.convention.into(), ring, &budget)
            })?;
            report(&cs, text::cochains(&cs))
        }
        Command::Minimal { input, m, n, k, convention, max_support } => {
            let budget = Budget { max_support: *max_support, ..budget };
            let elements: Vec<Cochain> = match (input, m, n, k) {
                (Some(path), None, None, None) => {
                    let space: Vec<Cochain> = read(path)?;
                    minimal_decomposition(&space, &budget)?.into_iter().map(|c| c.element).collect()
                }
                (None, Some(m), Some(n), Some(k)) => {
                    let g = GradingArgs { m: *m, n: *n, k: *k, convention: *convention };
                    let mut key = key("minimal", &g, Ring::Z);
                    key.command = format!("minimal:{max_support}");
                    cache.get_or_compute(&key, || {
                        let space = cocycle_space(g.m, g.n, g.k, g.convention.into(), Ring::Z, &budget)?;
                        Ok::<_, HomologyError>(
                            minimal_decomposition(&space, &budget)?.into_iter().map(|c| c.element).collect(),
                        )
                    })?
                }
                _ => return Err(CliError::Usage("minimal needs either --in or all of -m, -n, -k".into())),
            };
            report(&elements, text::cochains(&elements))
        }
        Command::Orient { input } => {
            let c: Cochain = read(input)?;
            let e = consistent_orientation(&c)?;
            report(&e, text::oriented(&e))
        }
        Command::Extend { input } => {
            let c: Cochain = read(input)?;
            let Some(deg) = c.degree() else {
                return Err(CliError::Usage("extend needs at least one prescribed term".into()));
            };
            let partial: Vec<_> = c.terms().iter().map(|(d, k)| (d.clone(), k.clone())).collect();
            let out = extend_to_cocycle(
                &partial,
                deg.strands,
                deg.grading.order,
                deg.grading.defect,
                deg.convention,
                c.ring(),
                &budget,
            )?;
            let text = match &out {
                Some(x) => text::cochain(x),
                None => "no cocycle extends the assignment\n".into(),
            };
            report(&out, text)
        }
        Command::Faces { input } => {
            let d: Diagram = read(input)?;
            let f = enumerate_faces(&d)?;
            report(&f, text::faces(&f.faces()))
        }
        Command::Certify { input, dim, vertices, infinity } => {
            let d: Diagram = read(input)?;
            let faces: Vec<Face> = match vertices {
                Some(v) if *infinity => vec![Face::Infinity { vertices: v.clone() }],
                Some(v) => vec![Face::Hidden { vertices: v.clone() }],
                None => {
                    let fs = enumerate_faces(&d)?;
                    fs.faces().into_iter().filter(|f| !matches!(f, Face::Principal { .. })).collect()
                }
            };
            let certs = par_map(&faces, jobs, |f| codim_certificate(f, *dim, &d));
            let mut out = Vec::with_capacity(faces.len());
            for (face, c) in faces.into_iter().zip(certs) {
                out.push(text::Certified { face, certificate: c? });
            }
            report(&out, text::certificates(&out))
        }
        Command::Corners { input, max_size, include_infinity } => {
            let d: Diagram = read(input)?;
            let fams = corner_poset(&d, *max_size, *include_infinity)?;
            report(&fams, text::corners(&fams))
        }
        Command::Poincare { input, dim, mode, order } => {
            let d: Diagram = read(input)?;
            let mode = match mode {
                ModeArg::Ambient => PoincareMode::Ambient,
                ModeArg::Fiber => PoincareMode::Fiber,
            };
            let p = poincare_polynomial(&d, *dim, mode, order.as_deref())?;
            report(&p, format!("{p}\n"))
        }
        Command::Dims { input, dim } => {
            let c: Cochain = read(input)?;
            let x = dimensions(&c, *dim)?;
            report(
                &x,
                format!("fiber dim {}\nclass degree {}\nsphere dim {}\n", x.fiber_dim, x.class_degree, x.sphere_dim),
            )
        }
        Command::Glue { cocycle, dim } => {
            let c: Cochain = read(cocycle)?;
            let plan = plan_cocycle(&c, *dim)?;
            plan_report(&plan)
        }
        Command::GlueMod2 { cocycle, dim } => {
            let c: Cochain = read(cocycle)?;
            let plan = plan_mod2(&c.change_ring(Ring::Z2)?, *dim)?;
            plan_report(&plan)
        }
        Command::GlueChord { input } => {
            let d: Diagram = read(input)?;
            plan_report(&plan_chord_mod2(&d)?)
        }
        Command::Verify { plan } => {
            let p: GluingPlan = read(plan)?;
            let r = verify_fundamental_cycle(&p);
            let mut out = report(&r, text::verification(&r))?;
            out.ok = r.pass;
            Ok(out)
        }
        Command::Signatures { plan } => {
            let p: GluingPlan = read(plan)?;
            let s = spherical_signatures(&p);
            report(&s, text::signatures(&s))
        }
        Command::CollapseAnalysis { plan, pairing } => {
            let p: GluingPlan = read(plan)?;
            let which: Vec<usize> = match pairing {
                Some(i) => vec![*i],
                None => (0..p.pairings.len()).collect(),
            };
            let ledgers = par_map(&which, jobs, |&i| corner_collapse_analysis(&p, i));
            let ledgers = ledgers.into_iter().collect::<Result<Vec<_>, _>>()?;
            report(&ledgers, text::ledgers(&ledgers))
        }
    }
}

fn plan_report(plan: &GluingPlan) -> Result<Report, CliError> {
    report(plan, text::plan(plan))
}
