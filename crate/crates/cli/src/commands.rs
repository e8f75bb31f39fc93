use std::fmt::Write as _;

use serde_json::{json, Value};
use torext_core::ci_ops::*;
use torext_core::ext_rmodule::*;
use torext_core::field_poly::GradedMap;
use torext_core::fixtures::CompleteIntersection;
use torext_core::resolution::{betti, resolve, BettiTable, ModulePresentation};
use torext_core::tor_emodule::*;

use crate::job::{build_module, complete_intersection, parse_f, parse_module_source, parse_ring, JobSpec, RingDecl};
use crate::CliError;

/// Rendered result: a human report, its JSON twin, and the exit code.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

pub fn table_json(b: &BettiTable) -> Value {
    serde_json::to_value(b.json_view()).expect("betti json")
}

struct Job {
    rd: RingDecl,
    ci: CompleteIntersection,
    m: ModulePresentation,
}

fn job_over_r(spec: &JobSpec) -> Result<Job, CliError> {
    let rd = parse_ring(spec.ring.as_deref())?;
    let src = parse_module_source(spec.module.as_deref())?;
    let f = parse_f(&rd, spec.f.as_deref())?;
    let ci = complete_intersection(&rd, f)?;
    let m = build_module(&rd, Some(&ci), &src)?;
    Ok(Job { rd, ci, m })
}

fn ring_json(rd: &RingDecl, f: Option<&CompleteIntersection>) -> Value {
    json!({
        "p": rd.ring.p(),
        "vars": rd.names,
        "f": f.map(|ci| ci.f.iter().map(|p| p.format_with(&rd.names)).collect::<Vec<_>>()),
    })
}

pub fn resolve_cmd(spec: &JobSpec, length: usize, over_s: bool) -> Result<Output, CliError> {
    let rd = parse_ring(spec.ring.as_deref())?;
    let src = parse_module_source(spec.module.as_deref())?;
    let ci = if over_s {
        None
    } else {
        Some(complete_intersection(&rd, parse_f(&rd, spec.f.as_deref())?)?)
    };
    let m = build_module(&rd, ci.as_ref(), &src)?;
    let b = betti(&resolve(&m, length)?)?;
    let over = if over_s { "S" } else { "R" };
    let text = format!("Betti table over {over}\n{b}");
    Ok(Output::ok(
        text,
        json!({"ring": ring_json(&rd, ci.as_ref()), "over": over, "betti": table_json(&b)}),
    ))
}

pub fn tor(spec: &JobSpec, length: usize, window: Option<usize>) -> Result<Output, CliError> {
    let Job { rd, ci, m } = job_over_r(spec)?;
    let t = tor_emodule(&m, &ci.f)?;
    let b = e_free_resolution(&t, length).betti();
    let sp = submodule_t_prime(&t);
    let tp = sp.t_prime.trimmed();
    let bp = e_free_resolution(&sp.t_prime, length).betti();
    let bd = e_free_resolution(&sp.t_double, length).betti();
    let w = window.unwrap_or(default_window(ci.c()));
    let reg = e_regularity(&t, w);
    // strands against Betti numbers over R
    let rb = betti(&resolve(&m, 2 * length + 1)?)?.totals();
    let strand = |s: i32| -> Vec<[usize; 2]> {
        (0..=length as i32)
            .map(|i| [b.get(i, i + s), rb[(2 * i + s) as usize]])
            .collect()
    };
    let mut text = String::new();
    writeln!(text, "Tor^S(M,k) dims by homological degree: {:?}", t.dims).unwrap();
    writeln!(text, "E-Betti table of Tor\n{b}").unwrap();
    writeln!(text, "T' = E*Tor_0 dims: {:?} (from degree {})", tp.dims, tp.lo).unwrap();
    writeln!(text, "E-Betti table of T'\n{bp}").unwrap();
    writeln!(text, "T'' = Tor/T' dims: {:?} (from degree {})", sp.t_double.trimmed().dims, sp.t_double.trimmed().lo).unwrap();
    writeln!(text, "E-Betti table of T''\n{bd}").unwrap();
    writeln!(text, "reg_E = {} (window {w}, stabilized: {})", reg.reg, reg.stabilized).unwrap();
    for s in 0..2 {
        let pairs = strand(s);
        let same = pairs.iter().all(|p| p[0] == p[1]);
        writeln!(
            text,
            "strand {s}: beta^E_(i,i+{s}) {:?}, beta^R_(2i+{s}) {:?}{}",
            pairs.iter().map(|p| p[0]).collect::<Vec<_>>(),
            pairs.iter().map(|p| p[1]).collect::<Vec<_>>(),
            if same { "" } else { "  (differ)" }
        )
        .unwrap();
    }
    let json = json!({
        "ring": ring_json(&rd, Some(&ci)),
        "dims": t.dims,
        "betti": table_json(&b),
        "t_prime": {"lo": tp.lo, "dims": tp.dims, "betti": table_json(&bp)},
        "t_double": {"lo": sp.t_double.trimmed().lo, "dims": sp.t_double.trimmed().dims, "betti": table_json(&bd)},
        "regularity": {"reg": reg.reg, "window": w, "stabilized": reg.stabilized},
        "strands": [strand(0), strand(1)],
    });
    Ok(Output::ok(text, json))
}

fn matrix_text(p: &GradedMap, names: &[String]) -> Vec<Vec<String>> {
    (0..p.nrows())
        .map(|i| (0..p.ncols()).map(|j| p.entry(i, j).format_with(names)).collect())
        .collect()
}

pub fn ext(spec: &JobSpec, length: usize, window: usize) -> Result<Output, CliError> {
    let Job { rd, ci, m } = job_over_r(spec)?;
    let c = ci.c();
    let rres = resolve(&m, length)?;
    let rb = betti(&rres)?.totals();
    let ranks = infer_hmf_ranks(&rb, c)?;
    let l = lift_resolution(&rres, &ci.f, length)?;
    let e = ext_rmodule(&l, &ci_operators(&l)?)?;
    if !e.check_commute() {
        return Err(CliError::Math(torext_core::AlgebraError::Internal("CI operators do not commute".into())));
    }
    let names: Vec<String> = (1..=c).map(|i| format!("chi{i}")).collect();
    let mut text = String::new();
    writeln!(text, "Ext^p_R(M,k) dims: {:?}", e.dims).unwrap();
    writeln!(text, "hmf ranks b0 = {:?}, b1 = {:?}", ranks.b0, ranks.b1).unwrap();
    let mut parts = Vec::new();
    for s in 0..2 {
        let label = if s == 0 { "even" } else { "odd" };
        let u = e.half(s);
        let r = r_free_resolution(&u, window)?;
        let b = r.betti();
        let reg = ext_regularity(&r, s);
        let pres = r.presentation()?;
        let lt = ext_leading_terms(&u).ok();
        writeln!(text, "\nExt^{label}: dims {:?}", u.dims).unwrap();
        writeln!(text, "Betti table over k[chi1..chi{c}]\n{b}").unwrap();
        writeln!(text, "regularity {reg}").unwrap();
        writeln!(text, "presentation ({} x {}):", pres.nrows(), pres.ncols()).unwrap();
        let mt = matrix_text(&pres, &names);
        for row in &mt {
            writeln!(text, "  [{}]", row.join(", ")).unwrap();
        }
        let mut part = json!({
            "parity": label,
            "dims": u.dims,
            "betti": table_json(&b),
            "regularity": reg,
            "presentation": mt,
        });
        if let Some(lt) = &lt {
            writeln!(text, "leading terms b = {:?}, Hilbert function agrees: {}", lt.b, lt.ok()).unwrap();
            part["leading_terms"] = json!({"b": lt.b, "ok": lt.ok()});
        }
        if s == 0 {
            let st = structure_report(&u, &r)?;
            writeln!(text, "free summand rank {}", st.free_rank).unwrap();
            if let Some(v) = st.free_plus_maximal_ideal {
                writeln!(text, "free part plus maximal ideal: {v}").unwrap();
            }
            part["structure"] = json!({
                "free_rank": st.free_rank,
                "nonfree_hilbert": st.nonfree_hilbert,
                "free_plus_maximal_ideal": st.free_plus_maximal_ideal,
            });
        }
        parts.push(part);
    }
    let json = json!({
        "ring": ring_json(&rd, Some(&ci)),
        "dims": e.dims,
        "hmf_ranks": {"b0": ranks.b0, "b1": ranks.b1},
        "parts": parts,
    });
    Ok(Output::ok(text, json))
}

pub fn gk_system(ci: &CompleteIntersection, m: &ModulePresentation, length: usize) -> Result<HigherCISystem, CliError> {
    let rres = resolve(m, length)?;
    let l = lift_resolution(&rres, &ci.f, length)?;
    let ops = ci_operators(&l)?;
    Ok(higher_ci(&l, &ops, 4.min(length).max(2))?)
}

pub fn gk(spec: &JobSpec, length: usize, window: i32) -> Result<Output, CliError> {
    let Job { rd, ci, m } = job_over_r(spec)?;
    let sys = gk_system(&ci, &m, length)?;
    let identities: Vec<bool> = (0..=sys.nmax)
        .map(|n| sys.check_identities(n))
        .collect::<Result<_, _>>()?;
    let gk = build_gk(&sys)?;
    let rep = verify_gk(&gk, &m, window)?;
    let min = betti(&minimize_gk(&gk)?)?;
    let blocks: Vec<Value> = (0..=gk.hi())
        .flat_map(|n| gk_block_structure(&sys, n))
        .map(|(i, src, tgt)| json!({"t": i, "from": [src.0, src.1], "to": [tgt.0, tgt.1]}))
        .collect();
    let ranks: Vec<usize> = (0..=gk.hi()).map(|i| gk.rank(i)).collect();
    let mut text = String::new();
    writeln!(text, "identities sum t_i t_j = 0 for n = 0..{}: {:?}", sys.nmax, identities).unwrap();
    writeln!(text, "ranks {ranks:?}, {} blocks", blocks.len()).unwrap();
    writeln!(text, "d^2 = 0: {}", rep.d_squared_zero).unwrap();
    writeln!(text, "H_0 = M: {}", rep.h0_matches).unwrap();
    writeln!(
        text,
        "H_i = 0 (degrees up to {}): {:?}",
        rep.degree_bound,
        rep.acyclic.iter().map(|(i, b)| format!("{i}:{b}")).collect::<Vec<_>>()
    )
    .unwrap();
    writeln!(text, "verdict: {}", if rep.ok() { "resolution" } else { "NOT a resolution" }).unwrap();
    writeln!(text, "minimized Betti table\n{min}").unwrap();
    let json = json!({
        "ring": ring_json(&rd, Some(&ci)),
        "identities": identities,
        "ranks": ranks,
        "blocks": blocks,
        "d_squared_zero": rep.d_squared_zero,
        "h0_matches": rep.h0_matches,
        "acyclic": rep.acyclic,
        "degree_bound": rep.degree_bound,
        "ok": rep.ok(),
        "minimized_betti": table_json(&min),
    });
    let ok = rep.ok() && identities.iter().all(|&b| b);
    Ok(Output {
        text,
        json,
        code: if ok { 0 } else { 4 },
    })
}
