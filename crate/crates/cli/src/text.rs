//! Human-readable renderings of the reports.

use std::fmt::Write;

use gcx_core::gluing::{CornerLedger, GluingPlan, LabeledSignature, VerificationReport};
use gcx_core::homology::{CohomologyGroup, ConsistentExpression};
use gcx_core::io::BasisFile;
use gcx_core::linalg::SparseMatrix;
use gcx_core::ring::format_rational;
use gcx_core::strata::{CodimCertificate, CornerSet, Face};
use gcx_core::Cochain;
use serde::Serialize;

#[derive(Serialize)]
pub struct Certified {
    pub face: Face,
    pub certificate: CodimCertificate,
}

pub fn basis(b: &BasisFile) -> String {
    let m = &b.manifest;
    let mut s = format!(
        "# m={} n={} k={} {:?} {}: {} diagrams, sha256 {}\n",
        m.m, m.n, m.k, m.convention, m.ring, m.count, m.content_hash
    );
    for d in &b.diagrams {
        let _ = writeln!(s, "{d}");
    }
    s
}

pub fn cochain(c: &Cochain) -> String {
    if c.is_zero() {
        return "0\n".into();
    }
    let mut s = String::new();
    for (d, k) in c.terms() {
        let _ = writeln!(s, "{:>6}  {d}", format_rational(k));
    }
    s
}

pub fn cochains(cs: &[Cochain]) -> String {
    let mut s = format!("{} element(s)\n", cs.len());
    for (i, c) in cs.iter().enumerate() {
        let _ = write!(s, "\n[{i}] support {}\n{}", c.len(), cochain(c));
    }
    s
}

pub fn matrix(m: &SparseMatrix) -> String {
    let mut s = format!("{} x {}, {} nonzero\n", m.rows, m.cols, m.nnz());
    for (i, j, v) in m.entries() {
        let _ = writeln!(s, "{i} {j} {v}");
    }
    s
}

pub fn cohomology(h: &CohomologyGroup) -> String {
    let mut parts = Vec::new();
    if h.free_rank > 0 {
        parts.push(if h.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", h.free_rank) });
    }
    parts.extend(h.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        parts.push("0".into());
    }
    format!("{}\n", parts.join(" + "))
}

pub fn oriented(e: &ConsistentExpression) -> String {
    let mut s = String::new();
    for t in &e.terms {
        let _ = writeln!(s, "{:>6}  {}", t.coeff, t.diagram);
    }
    s
}

pub fn faces(fs: &[Face]) -> String {
    fs.iter().map(|f| format!("{f}\n")).collect()
}

pub fn certificates(cs: &[Certified]) -> String {
    let mut s = String::new();
    for c in cs {
        let k = &c.certificate;
        let _ = writeln!(
            s,
            "{}: case {:?} r={} s={} edges={} bound {}{}",
            c.face,
            k.case,
            k.r,
            k.s,
            k.edges,
            k.bound,
            if k.anomalous { " anomalous" } else { "" }
        );
    }
    s
}

pub fn corners(fams: &[Vec<CornerSet>]) -> String {
    let mut s = format!("{} families\n", fams.len());
    for f in fams {
        let sets: Vec<String> = f
            .iter()
            .map(|c| {
                let v: Vec<String> = c.vertices.iter().map(|x| x.to_string()).collect();
                format!("{{{}{}}}", v.join(","), if c.infinity { ",inf" } else { "" })
            })
            .collect();
        let _ = writeln!(s, "{}", sets.join(" "));
    }
    s
}

pub fn plan(p: &GluingPlan) -> String {
    let mut s = format!("ring {} N {} spaces {}\n", p.ring, p.n, p.spaces.len());
    for (i, sp) in p.spaces.iter().enumerate() {
        let _ = writeln!(s, "  space {i}: {} x{} absent {}  {}", sp.coefficient, sp.copies, sp.absent_edges, sp.canonical);
    }
    let _ = writeln!(s, "pairings {}", p.pairings.len());
    for pr in &p.pairings {
        let _ = writeln!(s, "  {} <-> {}  {}", pr.face_a, pr.face_b, pr.identification.signature);
    }
    let _ = writeln!(s, "principal folds {}", p.principal_folds.len());
    let _ = writeln!(s, "hidden folds {}", p.hidden_folds.len());
    let _ = writeln!(s, "collapses c1 {} c2 {}", p.c1_count(), p.c2_count());
    let _ = writeln!(s, "degenerate {}", p.degenerate.len());
    s.push_str(&verification(&p.verification));
    s
}

pub fn verification(r: &VerificationReport) -> String {
    let mut s = format!("verification {}\n", if r.pass { "pass" } else { "FAIL" });
    for u in &r.unbalanced {
        let _ = writeln!(s, "  unbalanced {u}");
    }
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
    s
}

pub fn signatures(sigs: &[LabeledSignature]) -> String {
    sigs.iter().map(|l| format!("{}: {}\n", l.source, l.signature)).collect()
}

pub fn ledgers(ls: &[CornerLedger]) -> String {
    let mut s = String::new();
    for l in ls {
        let total: usize = l.side_a.iter().chain(&l.side_b).map(|c| c.increase).sum();
        let _ = writeln!(
            s,
            "pairing {}: {} + {} corner families, {} forgotten rate(s)",
            l.pairing,
            l.side_a.len(),
            l.side_b.len(),
            total
        );
        for (side, list) in [("a", &l.side_a), ("b", &l.side_b)] {
            for c in list.iter().filter(|c| c.increase > 0) {
                let _ = writeln!(s, "  side {side} codim {} +{}: {:?}", c.codim, c.increase, c.family);
            }
        }
    }
    s
}
