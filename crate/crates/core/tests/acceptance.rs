//! Acceptance criteria, one pass/fail line each.
//!
//! The checks recompute what they can from first principles (the Hermitian
//! form, set intersections, integer matrix products) rather than trusting the
//! library's own certification routines.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use hermitian_srg::cli::cli_main;
use hermitian_srg::fields::{Gf4, Vec4};
use hermitian_srg::geometry::Geometry;
use hermitian_srg::graph::{build_graph, SrgGraph};
use hermitian_srg::permgroup::{self, Permutation};
use hermitian_srg::symmetry::{certify_group, induce_vertex_permutation, GroupConfig};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn h(x: &Vec4, y: &Vec4) -> Gf4 {
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

struct Ctx {
    geo: Geometry,
    graph: SrgGraph,
    adj: Vec<Vec<bool>>,
}

impl Ctx {
    fn coords(&self, p: usize) -> &Vec4 {
        self.geo.space.coords(p)
    }

    fn orthogonal(&self, p: usize, q: usize) -> bool {
        h(self.coords(p), self.coords(q)).is_zero()
    }

    fn parent_mask(&self, v: usize) -> u128 {
        self.geo.subquadrangles.get(self.geo.ovoids.get(v).parent).mask
    }
}

fn surface_census(c: &Ctx) -> Check {
    let n = c.geo.space.points().len();
    let iso: Vec<usize> = (0..n).filter(|&p| c.orthogonal(p, p)).collect();
    ensure!(iso.len() == 45, "{} isotropic points", iso.len());
    ensure!(iso == c.geo.surface.points, "surface points differ from the isotropic points");
    let mut counts = [0usize; 6];
    for l in c.geo.space.lines() {
        let k = l.points.iter().filter(|&&p| c.orthogonal(p, p)).count();
        counts[k] += 1;
    }
    ensure!(counts == [0, 90, 0, 240, 0, 27], "line meet histogram {counts:?}");
    ensure!(c.geo.surface.generators.len() == 27, "generators");
    ensure!(c.geo.surface.secants.len() == 240, "secants");
    ensure!(c.geo.surface.tangents.len() == 90, "tangents");
    Ok(())
}

/// Brute-force GQ(s, t) check: s + 1 points per line, t + 1 lines per point,
/// and each point off a line is collinear with exactly one of its points.
fn gq_brute(points: &[usize], lines: &[Vec<usize>], s: usize, t: usize) -> Check {
    ensure!(lines.iter().all(|l| l.len() == s + 1), "line size");
    for &p in points {
        let through = lines.iter().filter(|l| l.contains(&p)).count();
        ensure!(through == t + 1, "point {p} on {through} lines");
    }
    let collinear = |p: usize, q: usize| lines.iter().any(|l| l.contains(&p) && l.contains(&q));
    for &p in points {
        for l in lines.iter().filter(|l| !l.contains(&p)) {
            let k = l.iter().filter(|&&q| collinear(p, q)).count();
            ensure!(k == 1, "point {p} collinear with {k} points of a line");
        }
    }
    Ok(())
}

fn gq_axioms(c: &Ctx) -> Check {
    let space = &c.geo.space;
    let surface_lines: Vec<Vec<usize>> = space
        .lines()
        .iter()
        .filter(|l| l.points.iter().all(|&p| c.orthogonal(p, p)))
        .map(|l| l.points.to_vec())
        .collect();
    gq_brute(&c.geo.surface.points, &surface_lines, 4, 2)?;
    for w in c.geo.subquadrangles.items() {
        // lines of W: 3-point intersections of W with surface lines
        let lines: Vec<Vec<usize>> = surface_lines
            .iter()
            .map(|l| l.iter().copied().filter(|&p| w.contains(p)).collect::<Vec<_>>())
            .filter(|l| l.len() == 3)
            .collect();
        ensure!(lines.len() == 15, "subquadrangle {} has {} lines", w.id, lines.len());
        gq_brute(&w.points, &lines, 2, 2).map_err(|e| format!("subquadrangle {}: {e}", w.id))?;
    }
    Ok(())
}

fn subquadrangle_census(c: &Ctx) -> Check {
    let subs = c.geo.subquadrangles.items();
    ensure!(subs.len() == 36, "{} subquadrangles", subs.len());
    let masks: BTreeSet<u128> = subs.iter().map(|w| w.mask).collect();
    ensure!(masks.len() == 36, "duplicate subquadrangles");
    for a in subs {
        ensure!(a.points.len() == 15, "size");
        ensure!(a.points.iter().all(|&p| c.orthogonal(p, p)), "off the surface");
        let mut by_meet = [0usize; 16];
        for b in subs.iter().filter(|b| b.id != a.id) {
            by_meet[(a.mask & b.mask).count_ones() as usize] += 1;
        }
        ensure!(by_meet[3] == 15 && by_meet[6] == 20, "subquadrangle {} partners {by_meet:?}", a.id);
    }
    let surface = &c.geo.surface.points;
    let mut secants = 0;
    for l in c.geo.space.lines() {
        let on: Vec<usize> = l.points.iter().copied().filter(|&p| c.orthogonal(p, p)).collect();
        if on.len() != 3 {
            continue;
        }
        secants += 1;
        // surface points of the polar line: orthogonal to the whole secant
        let polar: Vec<usize> = surface
            .iter()
            .copied()
            .filter(|&q| l.points.iter().all(|&p| c.orthogonal(p, q)))
            .collect();
        ensure!(polar.len() == 3, "polar of a secant has {} surface points", polar.len());
        let six: u128 = on.iter().chain(&polar).fold(0, |m, &p| m | 1 << p);
        let triple = subs.iter().filter(|w| w.mask & six == six).count();
        ensure!(triple == 3, "secant {} lies in {triple} subquadrangles", l.index);
    }
    ensure!(secants == 240, "{secants} secants");
    Ok(())
}

fn pair_counts(c: &Ctx) -> Check {
    let subs = c.geo.subquadrangles.items();
    let mut pairs = 0;
    for (i, a) in subs.iter().enumerate() {
        for b in &subs[i + 1..] {
            pairs += 1;
            let meet = (a.mask & b.mask).count_ones();
            let common = subs
                .iter()
                .filter(|w| w.id != a.id && w.id != b.id)
                .filter(|w| (w.mask & a.mask).count_ones() == 6 && (w.mask & b.mask).count_ones() == 6)
                .count();
            let want = match meet {
                3 => 12,
                6 => 10,
                m => return Err(format!("pair ({}, {}) meets in {m}", a.id, b.id)),
            };
            ensure!(common == want, "pair ({}, {}) meeting in {meet}: {common} common partners", a.id, b.id);
        }
    }
    ensure!(pairs == 630, "{pairs} pairs");
    Ok(())
}

fn ovoid_census(c: &Ctx) -> Check {
    let ovoids = c.geo.ovoids.vertices();
    ensure!(ovoids.len() == 216, "{} ovoids", ovoids.len());
    let distinct: BTreeSet<u128> = ovoids.iter().map(|o| o.mask).collect();
    ensure!(distinct.len() == 216, "repeated ovoids");
    for w in c.geo.subquadrangles.items() {
        let own: Vec<_> = ovoids.iter().filter(|o| o.parent == w.id).collect();
        ensure!(own.len() == 6, "subquadrangle {} has {} ovoids", w.id, own.len());
        for o in &own {
            ensure!(o.mask & !w.mask == 0, "ovoid {} leaves its parent", o.id);
            // an ovoid of W(3, 2) is 5 pairwise non-collinear points
            for (i, &p) in o.points.iter().enumerate() {
                for &q in &o.points[i + 1..] {
                    ensure!(!c.orthogonal(p, q), "ovoid {} has collinear points", o.id);
                }
            }
        }
        for (i, a) in own.iter().enumerate() {
            for b in &own[i + 1..] {
                ensure!((a.mask & b.mask).count_ones() == 1, "ovoids {} and {} meet wrongly", a.id, b.id);
            }
        }
        let mut valid = 0;
        for (i, &p) in w.points.iter().enumerate() {
            for &q in &w.points[i + 1..] {
                if c.orthogonal(p, q) {
                    continue;
                }
                valid += 1;
                let pair = (1u128 << p) | (1u128 << q);
                let on = own.iter().filter(|o| o.mask & pair == pair).count();
                ensure!(on == 1, "pair ({p}, {q}) of {} on {on} ovoids", w.id);
            }
        }
        ensure!(valid == 60, "subquadrangle {} has {valid} valid pairs", w.id);
    }
    Ok(())
}

fn srg_certification(c: &Ctx) -> Check {
    let n = 216;
    for u in 0..n {
        for v in 0..n {
            ensure!(c.adj[u][v] == c.graph.is_adjacent(u, v), "adjacency differs at ({u}, {v})");
        }
    }
    for (u, row) in c.adj.iter().enumerate() {
        let d = row.iter().filter(|&&b| b).count();
        ensure!(d == 40, "vertex {u} has degree {d}");
    }
    let a: Vec<Vec<i64>> = c.adj.iter().map(|r| r.iter().map(|&b| b as i64).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            let a2: i64 = (0..n).map(|k| a[i][k] * a[k][j]).sum();
            let lhs = a2 + 4 * a[i][j] - 32 * (i == j) as i64;
            ensure!(lhs == 8, "A^2 + 4A - 32I has {lhs} at ({i}, {j})");
            if i < j {
                let want = if c.adj[i][j] { 4 } else { 8 };
                ensure!(a2 == want, "pair ({i}, {j}) has {a2} common neighbours");
            }
        }
    }
    Ok(())
}

fn pair_case_analysis(c: &Ctx) -> Check {
    let ovoids = c.geo.ovoids.vertices();
    for u in 0..216 {
        for v in u + 1..216 {
            let e = (ovoids[u].mask & ovoids[v].mask).count_ones();
            let w = (c.parent_mask(u) & c.parent_mask(v)).count_ones();
            let adj = c.adj[u][v];
            let ok = match (w, adj) {
                (6, true) => e == 1,
                (6, false) => e == 0 || e == 2,
                (3, false) => e <= 1,
                (15, false) => e == 1,
                _ => false,
            };
            ensure!(ok, "pair ({u}, {v}): |W∩W'| = {w}, |E∩E'| = {e}, adjacent = {adj}");
        }
    }
    Ok(())
}

const P: u64 = 1_000_000_007;

fn rank_mod_p(m: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(P as i64) as u64).collect()).collect();
    let (nr, nc) = (m.len(), m[0].len());
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow(m[rank][col], P - 2);
        for r in rank + 1..nr {
            if m[r][col] != 0 {
                let f = m[r][col] * inv % P;
                for k in col..nc {
                    m[r][k] = (m[r][k] + P - f * m[rank][k] % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rational ranks of `A − 4I` and `A + 8I` pinned down exactly: mod-p ranks are
/// lower bounds, and `(A − 4I)(A + 8I) = 8J` has rank 1, so by Sylvester
/// `rank(A − 4I) + rank(A + 8I) ≤ 217`.
fn spectrum(c: &Ctx) -> Check {
    let n = 216;
    let shifted = |s: i64| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| c.adj[i][j] as i64 - s * (i == j) as i64).collect())
            .collect()
    };
    let m = shifted(4);
    let nn = shifted(-8);
    for i in 0..n {
        for j in 0..n {
            let x: i64 = (0..n).map(|k| m[i][k] * nn[k][j]).sum();
            ensure!(x == 8, "(A - 4I)(A + 8I) has {x} at ({i}, {j})");
        }
    }
    let (rm, rn) = (rank_mod_p(&m), rank_mod_p(&nn));
    ensure!(rm + rn == 217, "mod-p ranks {rm} + {rn} do not pin the rational ranks");
    let (m4, m8) = (n - rm, n - rn);
    ensure!((m4, m8) == (140, 75), "multiplicities of 4 and -8 are {m4} and {m8}");
    // the all-ones vector is the k-eigenvector; the rest of the spectrum is 4 and -8
    ensure!(1 + m4 + m8 == n, "multiplicities do not sum to {n}");
    ensure!(40 + 4 * m4 as i64 - 8 * m8 as i64 == 0, "trace identity fails");
    Ok(())
}

fn clique_census(c: &Ctx) -> Check {
    let n = 216;
    let mut six = 0;
    let mut two = 0;
    for u in 0..n {
        for v in u + 1..n {
            if !c.adj[u][v] {
                continue;
            }
            let mut in_triangle = false;
            for w in v + 1..n {
                if !(c.adj[u][w] && c.adj[v][w]) {
                    continue;
                }
                in_triangle = true;
                let extend = (0..n).any(|x| c.adj[x][u] && c.adj[x][v] && c.adj[x][w]);
                ensure!(!extend, "triangle ({u}, {v}, {w}) extends to a 4-clique");
                match (c.parent_mask(u) & c.parent_mask(v) & c.parent_mask(w)).count_ones() {
                    6 => six += 1,
                    2 => two += 1,
                    m => return Err(format!("triangle ({u}, {v}, {w}) has triple meet {m}")),
                }
            }
            // earlier third vertices
            in_triangle |= (0..v).any(|w| w != u && c.adj[u][w] && c.adj[v][w]);
            ensure!(in_triangle, "edge ({u}, {v}) is a maximal clique of size 2");
        }
    }
    ensure!(six == 1440 && two == 4320, "{six} cliques with triple meet 6, {two} with 2");
    ensure!(six + two == 216 * 40 * 4 / 6, "total {}", six + two);
    Ok(())
}

fn symmetry(c: &Ctx) -> Check {
    // |GU(4, 2)| = 2^6 (2 + 1)(4 - 1)(8 + 1)(16 - 1); the centre has order 3
    let gu = 64 * 3 * 3 * 9 * 15u128;
    let (linear, full) = (gu / 3, 2 * gu / 3);
    ensure!((linear, full) == (25920, 51840), "order formula");

    let cert = certify_group(&c.geo, &c.graph, &GroupConfig::default()).map_err(|e| e.to_string())?;
    let mut perms = Vec::new();
    for g in &cert.generators {
        let m = &g.matrix;
        for i in 0..4 {
            for j in 0..4 {
                let x: Gf4 = (0..4).map(|k| m[k][i] * m[k][j].conj()).sum();
                ensure!(x == if i == j { Gf4::ONE } else { Gf4::ZERO }, "generator is not unitary");
            }
        }
        let p = induce_vertex_permutation(g, &c.geo).map_err(|e| e.to_string())?;
        for u in 0..216 {
            for v in 0..216 {
                ensure!(c.adj[u][v] == c.adj[p.apply(u)][p.apply(v)], "generator is not an automorphism");
            }
        }
        perms.push(p);
    }
    let linear_perms: Vec<Permutation> = cert
        .generators
        .iter()
        .zip(&perms)
        .filter(|(g, _)| !g.semilinear)
        .map(|(_, p)| p.clone())
        .collect();
    ensure!(permgroup::orbit(&perms, 0).len() == 216, "vertex orbit");
    ensure!(permgroup::orbit(&linear_perms, 0).len() == 216, "linear vertex orbit");
    ensure!(permgroup::group_order(216, &linear_perms) == linear, "linear order");
    ensure!(permgroup::group_order(216, &perms) == full, "full order");
    ensure!(permgroup::point_stabilizer_order(216, &perms, 0) == full / 216, "vertex stabilizer");
    ensure!(cert.vertex_stabilizer == 240, "vertex stabilizer {}", cert.vertex_stabilizer);
    ensure!(cert.subquadrangle_orbit == 36, "subquadrangle orbit {}", cert.subquadrangle_orbit);
    ensure!(cert.subquadrangle_stabilizer == 1440, "subquadrangle stabilizer {}", cert.subquadrangle_stabilizer);
    ensure!(full / 36 == 1440, "orbit-stabilizer");
    Ok(())
}

fn run_pipeline(dir: &Path) -> Check {
    let arg = |p: &str| dir.join(p).to_string_lossy().into_owned();
    let cache = arg("geometry.json");
    let code = cli_main(["hermitian-srg", "build", "--cache", &cache]);
    ensure!(code == 0, "build exited {code}");
    let code = cli_main(["hermitian-srg", "verify", "--all", "--seed", "7", "--cache", &cache, "-o", &arg("verify.txt")]);
    ensure!(code == 0, "verify exited {code}");
    for (format, file) in [("graph6", "graph.g6"), ("dimacs", "graph.dimacs"), ("edge-csv", "edges.csv"), ("json", "graph.json")] {
        let code = cli_main(["hermitian-srg", "export", "--format", format, "--cache", &cache, "-o", &arg(file)]);
        ensure!(code == 0, "export {format} exited {code}");
    }
    let code = cli_main(["hermitian-srg", "report", "--seed", "7", "--no-timings", "--cache", &cache, "-o", &arg("report.txt")]);
    ensure!(code == 0, "report exited {code}");
    Ok(())
}

fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_pipeline(a.path())?;
    run_pipeline(b.path())?;
    for file in ["geometry.json", "verify.txt", "graph.g6", "graph.dimacs", "edges.csv", "graph.json", "report.txt"] {
        let x = fs::read(a.path().join(file)).map_err(|e| e.to_string())?;
        let y = fs::read(b.path().join(file)).map_err(|e| e.to_string())?;
        ensure!(!x.is_empty() && x == y, "{file} differs between runs");
    }
    let g6 = fs::read(a.path().join("graph.g6")).map_err(|e| e.to_string())?;
    ensure!(g6.starts_with(b"~?BW") && g6.len() == 4 + 3870 + 1, "graph6 layout");
    Ok(())
}

#[test]
fn acceptance() {
    let geo = Geometry::build().expect("geometry builds");
    let graph = build_graph(&geo.ovoids, &geo.subquadrangles);
    // adjacency straight from the definition
    let ovoids = geo.ovoids.vertices();
    let adj: Vec<Vec<bool>> = (0..216)
        .map(|u| {
            (0..216)
                .map(|v| {
                    u != v
                        && (ovoids[u].mask & ovoids[v].mask).count_ones() == 1
                        && (geo.subquadrangles.get(ovoids[u].parent).mask & geo.subquadrangles.get(ovoids[v].parent).mask)
                            .count_ones()
                            == 6
                })
                .collect()
        })
        .collect();
    let ctx = Ctx { geo, graph, adj };

    let criteria: [(&str, &dyn Fn() -> Check); 11] = [
        ("surface census", &|| surface_census(&ctx)),
        ("GQ axioms", &|| gq_axioms(&ctx)),
        ("subquadrangle census", &|| subquadrangle_census(&ctx)),
        ("subquadrangle pair counts", &|| pair_counts(&ctx)),
        ("ovoid census", &|| ovoid_census(&ctx)),
        ("SRG certification", &|| srg_certification(&ctx)),
        ("pair case analysis", &|| pair_case_analysis(&ctx)),
        ("spectrum", &|| spectrum(&ctx)),
        ("clique census", &|| clique_census(&ctx)),
        ("symmetry", &|| symmetry(&ctx)),
        ("determinism", &determinism),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let line = match &result {
            Ok(()) => format!("criterion {:>2} {name}: PASS", i + 1),
            Err(e) => format!("criterion {:>2} {name}: FAIL ({e})", i + 1),
        };
        // bypasses the test harness capture so the lines always show
        writeln!(std::io::stdout(), "{line}").unwrap();
        if result.is_err() {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
