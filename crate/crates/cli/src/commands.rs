use std::fs;
use std::path::Path;

use gsnn_core::architect::{enumerate_with_naming, naming_for_spec, sample_instance, ArchitectureSpec, GroupAnalysis, SampleParams};
use gsnn_core::cohomology::{aut_orbits, cohomology_dot, cohomology_group, CohomologyJson};
use gsnn_core::group::{GroupSpec, TABLE_GROUPS};
use gsnn_core::morphisms::MorphismGraph;
use gsnn_core::table::{build_table, render_csv, render_markdown};
use gsnn_core::verify::invariance_report;
use gsnn_core::{BigRational, Scalar, Tolerances};
use serde::{Deserialize, Serialize};

use crate::{Cli, CliError, Command, Mode};

/// Returns `Ok(false)` when the command ran but something did not pass.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let tol = Tolerances::with_eps(cli.eps);
    let max_order = cli.max_order as usize;
    if let Command::Table { groups } = &cli.command {
        return table(cli, groups.as_deref(), max_order, tol);
    }
    let spec = load_spec(cli)?;
    let float = match cli.mode {
        Mode::Auto => spec.requires_float(),
        Mode::Exact => false,
        Mode::Float => true,
    };
    if float {
        run_with::<f64>(cli, &spec, max_order, tol)
    } else {
        run_with::<BigRational>(cli, &spec, max_order, tol)
    }
}

fn load_spec(cli: &Cli) -> Result<GroupSpec, CliError> {
    match (&cli.group, &cli.group_file) {
        (Some(text), None) => Ok(GroupSpec::parse(text)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(GroupSpec::parse(&text)?)
        }
        _ => Err(CliError::Usage("one of --group or --group-file is required".into())),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn run_with<S: Scalar>(cli: &Cli, spec: &GroupSpec, max_order: usize, tol: Tolerances) -> Result<bool, CliError> {
    let group = spec.build::<S>(max_order, tol)?;
    let analysis = GroupAnalysis::new(group)?;
    let naming = naming_for_spec(spec, &analysis, max_order, tol)?;
    let archs = enumerate_with_naming(&analysis, &naming)?;
    match &cli.command {
        Command::Enumerate => enumerate(cli, &analysis, &archs),
        Command::Describe => describe(cli, spec, &analysis, &archs),
        Command::Verify { zero_c } => verify(cli, &analysis, &archs, *zero_c),
        Command::Graph => graph(cli, &analysis, &archs),
        Command::Table { .. } => unreachable!("handled before the group is built"),
    }
}

fn enumerate<S: Scalar>(cli: &Cli, analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>]) -> Result<bool, CliError> {
    let mut csv = String::from("name,H_order,K_order,type,hidden\n");
    for a in archs {
        let json = a.to_json(&analysis.group, &analysis.lattice);
        write(
            &cli.out.join("architectures").join(format!("{}.json", a.name)),
            &serde_json::to_string_pretty(&json)?,
        )?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            a.name,
            json.h_order,
            json.k_order,
            a.arch_type(),
            a.hidden
        ));
    }
    write(&cli.out.join("summary.csv"), &csv)?;
    print!("{csv}");
    Ok(true)
}

#[derive(Serialize, Deserialize)]
pub struct SubgroupJson {
    pub id: usize,
    pub order: usize,
    pub members: Vec<usize>,
    pub class: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct PairClassJson {
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub index: usize,
    pub admissible: bool,
    pub name: Option<String>,
}

#[derive(Serialize, Deserialize)]
pub struct RingJson {
    #[serde(flatten)]
    pub group: CohomologyJson,
    pub orbits: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
pub struct DescribeJson {
    pub schema: u32,
    pub group: GroupSpec,
    pub exact: bool,
    pub order: usize,
    pub dim: usize,
    pub subgroups: Vec<SubgroupJson>,
    pub pair_classes: Vec<PairClassJson>,
    pub cohomology: Vec<RingJson>,
}

fn describe<S: Scalar>(cli: &Cli, spec: &GroupSpec, analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>]) -> Result<bool, CliError> {
    let (g, l) = (&analysis.group, &analysis.lattice);
    let subgroups = l
        .subgroups()
        .iter()
        .enumerate()
        .map(|(id, s)| SubgroupJson {
            id,
            order: s.order(),
            members: s.members().to_vec(),
            class: l.conjugacy_class(id),
        })
        .collect();
    let pair_classes = analysis
        .classes
        .iter()
        .zip(&analysis.admissibility)
        .enumerate()
        .map(|(i, (c, adm))| PairClassJson {
            h: c.h,
            k: c.k,
            index: c.index,
            admissible: adm.admissible,
            name: archs.iter().find(|a| a.class_index == i).map(|a| a.name.clone()),
        })
        .collect();
    let cohomology = l
        .class_representatives()
        .into_iter()
        .map(|h| {
            let cg = cohomology_group(g, l, h)?;
            Ok(RingJson {
                orbits: aut_orbits(l, &cg),
                group: cg.to_json(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let json = DescribeJson {
        schema: 1,
        group: spec.clone(),
        exact: S::EXACT,
        order: g.order(),
        dim: g.dim(),
        subgroups,
        pair_classes,
        cohomology,
    };
    let text = serde_json::to_string_pretty(&json)?;
    write(&cli.out.join("describe.json"), &text)?;
    println!("{text}");
    Ok(true)
}

#[derive(Serialize, Deserialize)]
pub struct VerifyEntry {
    pub architecture: String,
    pub trials: usize,
    pub max_gap: f64,
    pub pass: bool,
}

#[derive(Serialize, Deserialize)]
pub struct VerifyJson {
    pub schema: u32,
    pub seed: u64,
    pub eps: f64,
    pub reports: Vec<VerifyEntry>,
    pub pass: bool,
}

fn verify<S: Scalar>(cli: &Cli, analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>], zero_c: bool) -> Result<bool, CliError> {
    if cli.trials == 0 {
        eprintln!("warning: zero trials, every check passes vacuously");
    }
    let g = &analysis.group;
    let mut reports = Vec::new();
    for a in archs {
        let mut inst = sample_instance(a, g, &SampleParams::standard(g.dim()))?;
        if zero_c {
            inst.c = vec![S::zero(); g.dim()];
        }
        let max_gap = invariance_report(g, &inst, cli.trials, cli.seed)?;
        reports.push(VerifyEntry {
            architecture: a.name.clone(),
            trials: cli.trials,
            max_gap,
            pass: max_gap <= cli.eps,
        });
    }
    let pass = reports.iter().all(|r| r.pass);
    let json = VerifyJson {
        schema: 1,
        seed: cli.seed,
        eps: cli.eps,
        reports,
        pass,
    };
    let text = serde_json::to_string_pretty(&json)?;
    write(&cli.out.join("verify.json"), &text)?;
    println!("{text}");
    Ok(pass)
}

fn graph<S: Scalar>(cli: &Cli, analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>]) -> Result<bool, CliError> {
    let graph = MorphismGraph::build(analysis, archs)?;
    write(&cli.out.join("morphisms.dot"), &graph.to_dot("morphisms"))?;
    write(&cli.out.join("morphisms.json"), &serde_json::to_string_pretty(&graph)?)?;
    for a in archs {
        let dot = cohomology_dot(&analysis.group, &a.rep, &a.name);
        write(&cli.out.join("cohomology").join(format!("{}.dot", a.name)), &dot)?;
    }
    println!(
        "{} nodes, {} inclusion candidates, {} tunnels",
        graph.nodes.len(),
        graph.inclusion_edges.len(),
        graph.tunnel_edges.len()
    );
    Ok(true)
}

fn table(cli: &Cli, groups: Option<&[String]>, max_order: usize, tol: Tolerances) -> Result<bool, CliError> {
    let names: Vec<&str> = match groups {
        Some(g) => g.iter().map(String::as_str).filter(|s| !s.is_empty()).collect(),
        None => TABLE_GROUPS.to_vec(),
    };
    let rows = build_table(&names, max_order, tol);
    let md = render_markdown(&rows);
    write(&cli.out.join("table.md"), &md)?;
    write(&cli.out.join("table.csv"), &render_csv(&rows))?;
    print!("{md}");
    for (g, e) in rows.iter().filter_map(|r| r.as_ref().err()) {
        eprintln!("error: {g}: {e}");
    }
    Ok(rows.iter().all(Result::is_ok))
}
