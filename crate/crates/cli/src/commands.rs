use std::path::Path;

use qwalk_core::abelian_class::{classify, Classification};
use qwalk_core::coarse_grain::coarse_grain;
use qwalk_core::dihedral::{
    check_admissible, dispersion_params, enumerate_admissible_graphs, extract_canonical_form,
    instantiate_finite_dihedral, make_dihedral_walk, parity_test, DihedralParams, SolutionCase,
};
use qwalk_core::groups::default_tiling;
use qwalk_core::linalg::CMatrix;
use qwalk_core::momentum::{dispersion, to_momentum};
use qwalk_core::solver::{solve_unitarity, SolverConfig};
use qwalk_core::walk::{check_quadrangularity, check_unitarity, evolve, evolve_periodic};
use qwalk_core::{
    CayleyGraph, CosetTiling, Error, GroupElement, GroupFamily, Lattice, LatticeState, QuantumWalk,
};

use crate::output::{num, opt_num, write_csv, write_text};
use crate::spec::WalkSpecFile;
use crate::{
    Cli, CmdResult, Command, DihedralCommand, DispersionArgs, EvolveArgs, Failure, MakeArgs, SolveArgs,
};

pub fn dispatch(cli: &Cli) -> CmdResult {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    match &cli.command {
        Command::Check { spec } => check(spec, tol),
        Command::Evolve(args) => evolve_cmd(args, tol),
        Command::Dispersion(args) => dispersion_cmd(args, tol),
        Command::PlotScript { csv, out } => plot_script(csv, out.as_deref()),
        Command::CoarseGrain { spec, out, tiling } => coarse_grain_cmd(spec, out, *tiling),
        Command::Classify { spec } => classify_cmd(spec, tol),
        Command::Solve(args) => solve(args, tol),
        Command::Dihedral(DihedralCommand::Make(args)) => make(args),
        Command::Dihedral(DihedralCommand::Enumerate { max_n }) => enumerate(*max_n),
        Command::Parity { spec } => parity(spec),
        Command::Canonical { spec } => canonical(spec, tol),
    }
}

fn load(path: &Path) -> Result<(WalkSpecFile, QuantumWalk), Failure> {
    let spec = WalkSpecFile::read(path)?;
    let walk = spec.to_walk()?;
    Ok((spec, walk))
}

/// Walks on `D_inf` are coarse-grained with the default tiling first.
fn on_line(walk: QuantumWalk) -> Result<QuantumWalk, Failure> {
    if *walk.graph().family() == GroupFamily::InfiniteDihedral {
        let tiling = default_tiling(walk.graph())?;
        println!("coarse-grained with tiling (m, m') = {:?}", tiling.offsets());
        Ok(coarse_grain(&walk, &tiling)?)
    } else {
        Ok(walk)
    }
}

fn show_matrix(m: &CMatrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn check(path: &Path, tol: f64) -> CmdResult {
    let (_, walk) = load(path)?;
    let rep = check_unitarity(&walk, tol);
    let quad = check_quadrangularity(walk.graph());
    println!("graph: {}", walk.graph());
    println!("coin dimension: {}", walk.coin_dim());
    println!("monoidal: {}", walk.graph().is_monoidal());
    println!("left residual: {}", num(rep.left_residual));
    println!("right residual: {}", num(rep.right_residual));
    println!("normalization residual: {}", num(rep.normalization_residual));
    println!("max residual: {}", num(rep.max_residual()));
    match &quad.witness {
        None => println!("quadrangular: yes"),
        Some((h1, h2)) => println!("quadrangular: no (pair {h1}, {h2} has a unique quotient)"),
    }
    if rep.passed() {
        println!("unitary within {tol:e}");
        Ok(())
    } else {
        let at = rep.worst_element.as_ref().map(|g| format!(" at {g}")).unwrap_or_default();
        Err(Failure::Rejected(format!(
            "not unitary: residual {:e}{at} exceeds {tol:e}",
            rep.max_residual()
        )))
    }
}

fn parse_int(t: &str) -> Result<i64, Failure> {
    t.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("bad integer `{t}` in --init")))
}

/// `site[,component]`, where `site` is an integer or a normal-form tuple.
fn parse_init(s: &str, family: &GroupFamily) -> Result<(GroupElement, usize), Failure> {
    let s = s.trim();
    let (site, rest) = if let Some(inner) = s.strip_prefix('(') {
        let (tuple, rest) = inner
            .split_once(')')
            .ok_or_else(|| Failure::Usage(format!("unclosed tuple in --init `{s}`")))?;
        let coords = tuple.split(',').map(parse_int).collect::<Result<Vec<_>, _>>()?;
        (family.element(&coords).map_err(|e| Failure::Usage(e.to_string()))?, rest)
    } else {
        let (head, rest) = s.split_once(',').map_or((s, ""), |(a, b)| (a, b));
        let x = parse_int(head)?;
        let g = if family.is_dihedral() {
            family.dihedral(x, false)
        } else if family.coord_len() == 1 {
            family.element(&[x])
        } else {
            return Err(Failure::Usage(format!(
                "sites of {family} need a tuple such as `({})`",
                vec!["0"; family.coord_len()].join(",")
            )));
        };
        (g.map_err(|e| Failure::Usage(e.to_string()))?, rest)
    };
    let rest = rest.trim().trim_start_matches(',').trim();
    let component = if rest.is_empty() {
        0
    } else {
        rest.parse()
            .map_err(|_| Failure::Usage(format!("bad component `{rest}` in --init")))?
    };
    Ok((site, component))
}

fn evolve_cmd(args: &EvolveArgs, tol: f64) -> CmdResult {
    let (_, walk) = load(&args.spec)?;
    let family = walk.graph().family().clone();
    let (site, component) = parse_init(&args.init, &family)?;
    if component >= walk.coin_dim() {
        return Err(Failure::Usage(format!(
            "component {component} out of range for coin dimension {}",
            walk.coin_dim()
        )));
    }
    let reach = site.free_part().unwrap_or(site.coords()).iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let mut ring = args.ring.unwrap_or(2 * reach as usize + 3);
    let out = loop {
        let lattice = Lattice::new(family.clone(), ring)?;
        let state = LatticeState::delta(lattice, walk.coin_dim(), &site, component)?;
        let result = if args.periodic {
            evolve_periodic(&walk, &state, args.steps)
        } else {
            evolve(&walk, &state, args.steps)
        };
        match result {
            Err(Error::WavefrontWrap { needed, .. }) if args.ring.is_none() => ring = needed + 1,
            other => break other?,
        }
    };
    let rows: Vec<Vec<String>> = out
        .component_rows()
        .into_iter()
        .map(|(site, c, p)| vec![site, c.to_string(), num(p)])
        .collect();
    let header = ["site", "component", "prob"].map(String::from);
    let path = write_csv(&args.out, &header, &rows)?;
    let norm = out.norm_sqr();
    println!("steps: {}, ring: {ring}, sites: {}", args.steps, out.lattice().num_sites());
    println!("norm: {}", num(norm));
    println!("wrote {}", path.display());
    if (norm - 1.0).abs() > tol.max(1e-12) * (args.steps.max(1) as f64) {
        return Err(Failure::Rejected(format!("norm drifted to {norm}")));
    }
    Ok(())
}

fn dispersion_cmd(args: &DispersionArgs, tol: f64) -> CmdResult {
    if args.samples < 3 {
        return Err(Failure::Usage("--samples must be at least 3".into()));
    }
    let (_, walk) = load(&args.spec)?;
    let walk = on_line(walk)?;
    let mw = to_momentum(&walk)?;
    if mw.dim() != 1 {
        return Err(Failure::Rejected(format!("dispersion curves need Z, walk lives on Z^{}", mw.dim())));
    }
    let data = dispersion(&mw, args.samples)?;
    let s = data.branches.len();
    let mut header = vec!["k".to_string()];
    match s {
        1 => header.push("omega".into()),
        2 => header.extend(["omega_plus".into(), "omega_minus".into()]),
        _ => header.extend((1..=s).map(|r| format!("omega_{r}"))),
    }
    let (v, d) = if args.derivatives {
        header.extend(["v_group".into(), "diff_coeff".into()]);
        (data.group_velocity(0), data.diffusion_coefficient(0))
    } else {
        (Vec::new(), Vec::new())
    };
    let rows: Vec<Vec<String>> = (0..data.samples())
        .map(|i| {
            let mut row = vec![num(data.k[i])];
            row.extend(data.branches.iter().map(|b| num(b[i])));
            if args.derivatives {
                row.push(opt_num(v[i]));
                row.push(opt_num(d[i]));
            }
            row
        })
        .collect();
    let path = write_csv(&args.out, &header, &rows)?;
    println!("samples: {}, branches: {s}", data.samples());
    if s == 2 {
        match dispersion_params(&walk, tol.max(1e-9)) {
            Ok((delta, gamma)) => println!("cos w = delta cos k + gamma with delta = {}, gamma = {}", num(delta), num(gamma)),
            Err(_) => println!("not of the form cos w = delta cos k + gamma"),
        }
    }
    if args.derivatives {
        let flagged = v.iter().filter(|x| x.is_none()).count();
        println!("derivatives withheld at {flagged} points near band crossings");
    }
    println!("wrote {}", path.display());
    Ok(())
}

const PLOT_TEMPLATE: &str = r#"import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt("@CSV@", delimiter=",", names=True)
k = data["k"]
branches = [n for n in data.dtype.names if n.startswith("omega")]

fig, axes = plt.subplots(1, 3, figsize=(13, 4), sharey=True)
for name in branches:
    axes[0].plot(k, data[name], ".", ms=2, label=name)
axes[0].set_title("@NAME@")
axes[0].legend()

ks = np.linspace(-np.pi, np.pi, 1024, endpoint=False)
for ax, sign, title in ((axes[1], 1.0, "delta + gamma = 1"), (axes[2], -1.0, "delta - gamma = 1")):
    for delta in (0.98, 0.36, 0.09):
        gamma = sign * (1.0 - delta)
        w = np.arccos(np.clip(delta * np.cos(ks) + gamma, -1.0, 1.0))
        line, = ax.plot(ks, w, label=f"delta = {delta}")
        ax.plot(ks, -w, color=line.get_color())
    ax.set_title(title)
    ax.legend()

for ax in axes:
    ax.set_xlabel("k")
    ax.set_xlim(-np.pi, np.pi)
axes[0].set_ylabel("omega")
fig.tight_layout()
fig.savefig("@PNG@", dpi=150)
"#;

fn plot_script(csv_path: &Path, out: Option<&Path>) -> CmdResult {
    let mut reader = csv::Reader::from_path(csv_path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", csv_path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| Failure::Usage(format!("bad CSV {}: {e}", csv_path.display())))?
        .clone();
    if header.get(0) != Some("k") || !header.iter().any(|h| h.starts_with("omega")) {
        return Err(Failure::Usage(format!(
            "{} is not a dispersion CSV (header `{}`)",
            csv_path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let csv_str = csv_path.display().to_string();
    let png = csv_path.with_extension("png").display().to_string();
    let name = csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let script = PLOT_TEMPLATE
        .replace("@CSV@", &csv_str.replace('\\', "\\\\"))
        .replace("@PNG@", &png.replace('\\', "\\\\"))
        .replace("@NAME@", &name);
    match out {
        Some(p) => {
            let path = write_text(p, &script)?;
            println!("wrote {}", path.display());
        }
        None => print!("{script}"),
    }
    Ok(())
}

fn coarse_grain_cmd(path: &Path, out: &Path, tiling: Option<(i64, i64)>) -> CmdResult {
    let (spec, walk) = load(path)?;
    let tiling = match tiling {
        Some((m, mp)) => CosetTiling::new(walk.graph().family().clone(), m, mp)?,
        None => default_tiling(walk.graph())?,
    };
    let cg = coarse_grain(&walk, &tiling)?;
    let (m, mp) = tiling.offsets();
    for (label, a) in cg.graph().labels().zip(cg.transitions()) {
        println!("A_{label} = {}", show_matrix(a));
    }
    let name = format!("{}-cg", spec.name.as_deref().unwrap_or("walk"));
    let file = WalkSpecFile::from_walk(&cg, Some(&name))
        .with_params([("m".to_string(), m as f64), ("m_prime".to_string(), mp as f64)]);
    let path = write_text(out, &file.to_toml())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn classify_cmd(path: &Path, tol: f64) -> CmdResult {
    let (_, walk) = load(path)?;
    match classify(&walk, tol)? {
        Classification::Trivial(blocks) => {
            println!("direct sum of {} monoidal walks", blocks.len());
            for b in &blocks {
                let shift = b.selected_shift().map(|h| format!("{h:?}")).unwrap_or_else(|| "-".into());
                let theta = b.theta.map(num).unwrap_or_else(|| "-".into());
                println!("character {:?}: shift {shift}, theta {theta}", b.index);
            }
            Ok(())
        }
        Classification::Counterexample { index, detail } => Err(Failure::Rejected(format!(
            "character {index:?} does not reduce to a single shift: {detail}"
        ))),
    }
}

fn solve(args: &SolveArgs, tol: f64) -> CmdResult {
    let text = if Path::new(&args.presentation).is_file() {
        std::fs::read_to_string(&args.presentation)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.presentation)))?
    } else {
        args.presentation.clone()
    };
    let graph = CayleyGraph::parse_presentation(text.trim()).map_err(|e| Failure::Usage(e.to_string()))?;
    let config = SolverConfig {
        starts: args.starts,
        seed: args.seed,
        accept_tol: tol,
        ..SolverConfig::default()
    };
    let outcome = solve_unitarity(&graph, &config);
    let mut header: Vec<String> = graph
        .labels()
        .flat_map(|l| [format!("{l}_re"), format!("{l}_im")])
        .collect();
    header.push("residual".into());
    let rows: Vec<Vec<String>> = outcome
        .solutions
        .iter()
        .map(|s| {
            let mut row: Vec<String> = s.scalars.iter().flat_map(|z| [num(z.re), num(z.im)]).collect();
            row.push(num(s.residual));
            row
        })
        .collect();
    let path = write_csv(&args.out, &header, &rows)?;
    println!(
        "starts: {}, converged: {}, distinct solutions: {}",
        outcome.starts,
        outcome.converged,
        outcome.solutions.len()
    );
    if outcome.is_inconclusive() {
        println!("no solution found at this resolution (inconclusive)");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn make(args: &MakeArgs) -> CmdResult {
    let q = match (args.q, args.case) {
        (Some(q), _) => q,
        (None, SolutionCase::NoStay) => args.p,
        (None, SolutionCase::NoReflection) => 1.0 - args.p,
        (None, case) => return Err(Failure::Usage(format!("--q is required for the {case} case"))),
    };
    let s2 = args.s2.unwrap_or(if args.case == SolutionCase::NoReflection { -1 } else { 1 });
    let params = DihedralParams::new(args.case, args.p, q, args.mu, args.s1, s2, args.s3, args.phase)?;
    let walk = match args.finite {
        Some(n) => instantiate_finite_dihedral(&params, n)?,
        None => make_dihedral_walk(&params),
    };
    let (s1, s2, s3) = params.signs();
    let file = WalkSpecFile::from_walk(&walk, Some(&format!("dihedral-{}", args.case))).with_params(
        [
            ("p", params.p()),
            ("q", params.q()),
            ("mu", params.mu()),
            ("s1", s1 as f64),
            ("s2", s2 as f64),
            ("s3", s3 as f64),
            ("phase", params.phase()),
        ]
        .map(|(k, v)| (k.to_string(), v)),
    );
    for (label, z) in walk.graph().labels().zip(params.scalars()) {
        println!("z_{label} = ({}, {})", num(z.re), num(z.im));
    }
    let path = write_text(&args.out, &file.to_toml())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn enumerate(max_n: u32) -> CmdResult {
    let graphs = enumerate_admissible_graphs(max_n);
    println!("{} admissible generating sets with |n| <= {max_n}", graphs.len());
    for g in &graphs {
        let adm = check_admissible(g)?;
        let labels: Vec<&str> = g.labels().collect();
        println!(
            "{{{}}}  tiling offset {}  {}",
            labels.join(","),
            adm.tiling_offset.map_or("-".to_string(), |m| m.to_string()),
            g
        );
    }
    Ok(())
}

fn parity(path: &Path) -> CmdResult {
    let (_, walk) = load(path)?;
    let walk = on_line(walk)?;
    let cert = parity_test(&walk)?;
    println!("solution space dimension: {}", cert.nullity);
    match &cert.parity {
        Some(p) => {
            println!("P = {}", show_matrix(p));
            println!("residual: {}", num(cert.residual));
            Ok(())
        }
        None => Err(Failure::Rejected("no nontrivial parity operator".into())),
    }
}

fn canonical(path: &Path, tol: f64) -> CmdResult {
    let (_, walk) = load(path)?;
    let walk = on_line(walk)?;
    let form = extract_canonical_form(&walk, tol)?;
    println!("theta: {}", num(form.theta));
    println!("theta': {}", num(form.theta_prime));
    println!("theta + theta': {}", num(form.total_angle()));
    println!("nu: {}", num(form.nu));
    println!("mu: {}", num(form.mu));
    println!("sign: {}", form.sign);
    println!("phase: {}", num(form.phase.arg()));
    println!("U = {}", show_matrix(&form.basis));
    println!("residual: {}", num(form.residual));
    match form.family_params(tol.max(1e-9)) {
        Some(p) => {
            let (s1, s2, s3) = p.signs();
            println!(
                "family: {} with p = {}, q = {}, mu = {}, signs ({s1}, {s2}, {s3})",
                p.case(),
                num(p.p()),
                num(p.q()),
                num(p.mu())
            );
        }
        None => println!("family: no direct read-off in this basis"),
    }
    Ok(())
}
