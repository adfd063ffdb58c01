//! Checks that the parallel run is sandwiched by the hypothetical process:
//! for every phase prefix, the cover-side peels of the parallel run contain
//! the hypothetical cover-side peels, and its non-cover-side peels are
//! contained in the hypothetical non-cover-side peels.

use serde::Serialize;

use crate::error::{param, Result};
use crate::mpc::MpcTrace;
use crate::oracle::hypothetical::HypotheticalTrace;
use crate::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `A_{<i+1} ⊇ O_{<i+1}` failed.
    #[serde(rename = "A_superset_O")]
    CoverSide,
    /// `B_{<i+1} ⊆ Ō_{<i+1}` failed.
    #[serde(rename = "B_subset_Obar")]
    ComplementSide,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub phase: usize,
    pub side: Side,
    pub witness_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseVerdict {
    pub i: usize,
    #[serde(rename = "A_superset_O")]
    pub a_superset_o: bool,
    #[serde(rename = "B_subset_Obar")]
    pub b_subset_obar: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub phases: Vec<PhaseVerdict>,
    pub violation: Option<Violation>,
    /// `A_i = P_i ∩ O*`.
    #[serde(skip)]
    pub a_sets: Vec<VertexSet>,
    /// `B_i = P_i ∩ Ō*`.
    #[serde(skip)]
    pub b_sets: Vec<VertexSet>,
}

impl SandwichReport {
    pub fn held(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn sandwich_audit(mpc: &MpcTrace, hyp: &HypotheticalTrace) -> Result<SandwichReport> {
    if mpc.schedule != hyp.schedule {
        return param("parallel and hypothetical traces use different schedules");
    }
    let cover = &hyp.opt_cover;
    let n = cover.universe();
    let mut a_prefix = VertexSet::empty(n);
    let mut b_prefix = VertexSet::empty(n);
    let mut o_prefix = VertexSet::empty(n);
    let mut obar_prefix = VertexSet::empty(n);
    let mut report =
        SandwichReport { phases: Vec::new(), violation: None, a_sets: Vec::new(), b_sets: Vec::new() };

    for (rec, hp) in mpc.phases.iter().zip(&hyp.phases) {
        let p = rec.all_peeled();
        let a = p.intersection(cover);
        let b = p.difference(cover);
        a_prefix.union_with(&a);
        b_prefix.union_with(&b);
        o_prefix.union_with(&hp.o_union);
        obar_prefix.union_with(&hp.obar_union);

        let missing_o = o_prefix.first_not_in(&a_prefix);
        let extra_b = b_prefix.first_not_in(&obar_prefix);
        if report.violation.is_none() {
            report.violation = match (missing_o, extra_b) {
                (Some(w), _) => Some(Violation { phase: rec.i, side: Side::CoverSide, witness_vertex: w }),
                (None, Some(w)) => {
                    Some(Violation { phase: rec.i, side: Side::ComplementSide, witness_vertex: w })
                }
                (None, None) => None,
            };
        }
        report.phases.push(PhaseVerdict {
            i: rec.i,
            a_superset_o: missing_o.is_none(),
            b_subset_obar: extra_b.is_none(),
        });
        report.a_sets.push(a);
        report.b_sets.push(b);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::star;
    use crate::mpc::{parallel_peel, MpcConfig};
    use crate::oracle::hypothetical::hypothetical_process;
    use crate::Graph;

    #[test]
    fn empty_graph_holds_vacuously() {
        let g = Graph::empty(64);
        let mpc = parallel_peel(&g, &MpcConfig::linear(64, 0).with_c_scale(2.0)).unwrap();
        let hyp = hypothetical_process(&g, &VertexSet::empty(64), &mpc.schedule).unwrap();
        let rep = sandwich_audit(&mpc, &hyp).unwrap();
        assert!(rep.held());
        assert!(rep.phases.iter().all(|p| p.a_superset_o && p.b_subset_obar));
    }

    #[test]
    fn star_center_on_both_sides() {
        let g = star(63);
        let mpc = parallel_peel(&g, &MpcConfig::linear(64, 4).with_c_scale(2.0)).unwrap();
        let cover = VertexSet::from_iter(64, [0]);
        let hyp = hypothetical_process(&g, &cover, &mpc.schedule).unwrap();
        let rep = sandwich_audit(&mpc, &hyp).unwrap();
        assert!(rep.phases[0].a_superset_o);
        assert!(rep.a_sets[0].contains(0));
        assert!(rep.b_sets.iter().all(VertexSet::is_empty));
        assert!(rep.held());
    }

    #[test]
    fn mismatched_schedules_rejected() {
        let g = star(63);
        let mpc = parallel_peel(&g, &MpcConfig::linear(64, 4).with_c_scale(2.0)).unwrap();
        let other = crate::schedule::make_schedule(64, 64, 3.0).unwrap();
        let hyp = hypothetical_process(&g, &VertexSet::from_iter(64, [0]), &other).unwrap();
        assert!(sandwich_audit(&mpc, &hyp).is_err());
    }

    #[test]
    fn tampered_traces_are_caught() {
        // left side of size 100 covers every edge and has degree about 46
        let n = 1024;
        let g = crate::generate::gen_bipartite_gnp(100, n - 100, 0.05, crate::RngSeed::new(4)).unwrap();
        let mut tr = parallel_peel(&g, &MpcConfig::linear(n, 4).with_c_scale(2.0)).unwrap();
        let cover = VertexSet::from_iter(n, 0..100);
        let hyp = hypothetical_process(&g, &cover, &tr.schedule).unwrap();
        assert!(sandwich_audit(&tr, &hyp).unwrap().held());

        // drop a cover vertex the hypothetical process peels in phase 1
        let w = hyp.phases[0].o_union.iter().next().expect("phase 1 peels cover vertices");
        let mut dropped = tr.clone();
        dropped.phases[0].peeled.remove(w);
        dropped.phases[0].cleanup_peeled.remove(w);
        let rep = sandwich_audit(&dropped, &hyp).unwrap();
        assert_eq!(rep.violation, Some(Violation { phase: 1, side: Side::CoverSide, witness_vertex: w }));
        assert!(!rep.phases[0].a_superset_o);

        // add a non-cover vertex the hypothetical process never peels
        let hyp_peeled = hyp.peeled_union();
        let x = (0..n).find(|&v| !cover.contains(v) && !hyp_peeled.contains(v)).unwrap();
        tr.phases[0].peeled.insert(x);
        let rep = sandwich_audit(&tr, &hyp).unwrap();
        assert_eq!(rep.violation, Some(Violation { phase: 1, side: Side::ComplementSide, witness_vertex: x }));
        assert!(rep.phases[0].a_superset_o && !rep.phases[0].b_subset_obar);
    }
}
