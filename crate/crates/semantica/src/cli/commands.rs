use std::path::Path;

use semantica_core::datagen::{
    cluster_graph, crosscut_dataset, ordering_dataset, planted_category, ring_graph, sample_gmrf_features,
    sample_tree_features, toy_hierarchy, tree_graph, Dataset, PlantedSpec, TreeSpec,
};
use semantica_core::dynamics::{
    deep_mode_trajectory, hidden_reps, shallow_mode_trajectory, sse_curve, time_to_reach, train_deep, train_shallow,
    Init, Regime, TrainConfig, Trajectory,
};
use semantica_core::knowledge::{learn_novel_feature, neural_similarity, project_feature, RsaThresholds};
use semantica_core::linalg::{classical_mds, procrustes_align, sym_eig};
use semantica_core::semantics::{analyze, prototype, typicality};
use semantica_core::Matrix;

use super::{
    Arch, CoherenceArgs, Command, Generator, InitArg, MdsArgs, ProjectArgs, Provenance, RegimeArg, ReportArgs,
    RsaArgs, SolveArgs, TrainArgs,
};
use crate::io::{self, fmt17, similarity_table, RunFile, Table};
use crate::svg::{Chart, Series};
use crate::sweep::{geometric_grid, rsa_parallel, sweep_table, thread_pool, CoherenceSweep};
use crate::AppError;

pub(super) fn dispatch(cmd: Command, prov: &Provenance) -> Result<(), AppError> {
    match cmd {
        Command::Gen { generator } => gen(generator),
        Command::Solve(a) => solve(a, prov),
        Command::Train(a) => train(a, prov),
        Command::Compare(a) => compare(a, prov),
        Command::Coherence(a) => coherence(a, prov),
        Command::Project(a) => project(a, prov),
        Command::Rsa(a) => rsa(a, prov),
        Command::Mds(a) => mds(a, prov),
        Command::Report(a) => report(a, prov),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, AppError> {
    s.split(',')
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| AppError::Input(format!("bad {what} entry {p:?}"))))
        .collect()
}

/// Largest singular values of `m`, from the eigenvalues of its smaller Gram.
fn top_singular_values(m: &Matrix, k: usize) -> Result<Vec<f64>, AppError> {
    let g = if m.rows() < m.cols() { m.matmul_t(m) } else { m.gram() };
    let mut g = g;
    g.symmetrize();
    let e = sym_eig(&g)?;
    Ok(e.values.iter().take(k).map(|v| v.max(0.0).sqrt()).collect())
}

fn gen(g: Generator) -> Result<(), AppError> {
    let (ds, out) = match g {
        Generator::Toy(o) => (toy_hierarchy(), o.out),
        Generator::Ordering(o) => (ordering_dataset(), o.out),
        Generator::Crosscut(o) => (crosscut_dataset(), o.out),
        Generator::Tree { depth, branch, flip, features, seed, out } => {
            let branching: Vec<usize> = parse_list(&branch, "branching")?;
            if let Some(d) = depth {
                if d != branching.len() + 1 {
                    return Err(AppError::Input(format!(
                        "--depth {d} disagrees with {} branching factors (depth counts root and leaves)",
                        branching.len()
                    )));
                }
            }
            let spec = TreeSpec::new(&branching, flip, features, seed)?;
            (sample_tree_features(&spec)?, out.out)
        }
        Generator::GmrfCluster { sizes, field, out } => {
            let sizes: Vec<usize> = parse_list(&sizes, "cluster size")?;
            let spec = cluster_graph(&sizes, field.edge, field.sigma, field.seed)?;
            (named(sample_gmrf_features(&spec, field.features)?, "gmrf-cluster"), out.out)
        }
        Generator::GmrfRing { items, field, out } => {
            let spec = ring_graph(items, field.edge, field.sigma, field.seed)?;
            (named(sample_gmrf_features(&spec, field.features)?, "gmrf-ring"), out.out)
        }
        Generator::GmrfTree { field, out } => {
            let branching: Vec<usize> = parse_list(&field.branch, "branching")?;
            let spec = tree_graph(&branching, field.edge, field.sigma, field.seed)?;
            (named(sample_gmrf_features(&spec, field.features)?, "gmrf-tree"), out.out)
        }
        Generator::Planted { n_objects, n_features, k_objects, k_features, p, q, seed, out } => {
            let spec = PlantedSpec { n_objects, n_features, k_objects, k_features, p_in: p, p_out: q, seed };
            let r = planted_category(&spec)?;
            let items = (0..n_objects).map(|i| format!("obj{i}")).collect();
            let feats = (0..n_features).map(|i| format!("feat{i}")).collect();
            (Dataset::one_hot("planted", items, feats, r)?, out.out)
        }
    };
    let out = out.unwrap_or_else(|| format!("{}.json", ds.name).into());
    io::write_dataset(&out, &ds)?;
    let top = top_singular_values(&ds.sigma_yx(), 5)?;
    println!(
        "wrote {}: {} ({} features x {} items, {} inputs)",
        out.display(),
        ds.name,
        ds.n_features(),
        ds.p(),
        ds.n_inputs()
    );
    println!("top singular values: {}", top.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" "));
    Ok(())
}

fn named(mut ds: Dataset, name: &str) -> Dataset {
    ds.name = name.into();
    ds
}

fn mode_header(k: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=k).map(|a| format!("mode_{a}")));
    h.push("sse".into());
    h
}

fn header_refs(h: &[String]) -> Vec<&str> {
    h.iter().map(String::as_str).collect()
}

fn mode_chart(times: &[f64], values: &Matrix, prefix: &str, dashed: bool) -> Vec<Series> {
    (0..values.cols())
        .map(|a| {
            let s = Series::new(format!("{prefix}{}", a + 1), times.iter().copied().zip(values.col(a)).collect());
            if dashed {
                s.dashed()
            } else {
                s
            }
        })
        .collect()
}

fn write_svg(path: &Path, chart: &Chart) -> Result<(), AppError> {
    io::write_text(path, &chart.render())
}

fn solve(a: SolveArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    if a.points < 2 || !(a.tmax > 0.0) {
        return Err(AppError::Input("need --points >= 2 and --tmax > 0".into()));
    }
    let sem = analyze(&ds)?;
    let s = &sem.svd.s;
    let trace = ds.sigma_y().trace();
    let times: Vec<f64> = (0..a.points).map(|k| a.tmax * k as f64 / (a.points - 1) as f64).collect();
    let mut values = Matrix::zeros(times.len(), s.len());
    let header = mode_header(s.len());
    let mut table = Table::new(&prov.line(None), &header_refs(&header));
    for (k, &t) in times.iter().enumerate() {
        let row: Vec<f64> = s
            .iter()
            .map(|&sa| match a.arch {
                Arch::Deep => deep_mode_trajectory(sa, a.a0, a.tau, t),
                Arch::Shallow => shallow_mode_trajectory(sa, a.a0, a.tau, t),
            })
            .collect::<Result<_, _>>()?;
        let sse = sse_curve(s, trace, &row, ds.p())?;
        values.as_mut_slice()[k * s.len()..(k + 1) * s.len()].copy_from_slice(&row);
        let mut line = vec![t];
        line.extend(&row);
        line.push(sse);
        table.push_floats(&line);
    }
    table.write(&a.out)?;
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("{} modes, {:?} network", ds.name, a.arch).to_lowercase(), "t", "a(t)");
        for s in mode_chart(&times, &values, "mode ", false) {
            c.push(s);
        }
        write_svg(svg, &c)?;
    }
    println!("wrote {} ({} modes, {} times)", a.out.display(), s.len(), times.len());
    Ok(())
}

fn train_config(a: &TrainArgs, default_init: Init) -> TrainConfig {
    let mut cfg = TrainConfig::new(a.lr, a.epochs, a.a0, a.seed);
    cfg.regime = match a.regime {
        RegimeArg::Batch => Regime::Batch,
        RegimeArg::Online => Regime::Online,
    };
    cfg.init = match a.init {
        Some(InitArg::Gaussian) => Init::Gaussian,
        Some(InitArg::Balanced) => Init::Balanced,
        None => default_init,
    };
    cfg.hidden_dim = a.hidden;
    cfg.record_every = a.record_every;
    cfg.record_hidden = a.snapshots;
    cfg
}

/// Trains and optionally writes the run file.
fn run_training(a: &TrainArgs, ds: &Dataset, cfg: &TrainConfig) -> Result<Trajectory, AppError> {
    let (traj, run) = match a.arch {
        Arch::Deep => {
            let (net, traj) = train_deep(ds, cfg)?;
            let snaps = traj.times.iter().copied().zip(traj.hidden_snapshots.iter().cloned()).collect();
            (traj.clone(), (net.w1, net.w2, snaps))
        }
        Arch::Shallow => {
            let (net, traj) = train_shallow(ds, cfg)?;
            (traj, (net.ws, Matrix::zeros(0, 0), Vec::new()))
        }
    };
    if let Some(path) = &a.run {
        let rf = RunFile {
            arch: match a.arch {
                Arch::Deep => "deep".into(),
                Arch::Shallow => "shallow".into(),
            },
            dataset: ds.name.clone(),
            learning_rate: cfg.learning_rate,
            epochs: cfg.epochs,
            init_scale: cfg.init_scale,
            seed: cfg.seed,
            tau: traj.tau,
            w1: run.0,
            w2: run.1,
            snapshots: run.2,
        };
        rf.write(path)?;
    }
    Ok(traj)
}

fn trajectory_table(prov: &str, traj: &Trajectory) -> Table {
    let header = mode_header(traj.n_modes());
    let mut t = Table::new(prov, &header_refs(&header));
    for (k, &time) in traj.times.iter().enumerate() {
        let mut line = vec![time];
        line.extend(traj.eff_singular_values.row(k));
        line.push(traj.sse[k]);
        t.push_floats(&line);
    }
    t
}

fn train(a: TrainArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    let cfg = train_config(&a, Init::Gaussian);
    let traj = run_training(&a, &ds, &cfg)?;
    trajectory_table(&prov.line(Some(cfg.seed)), &traj).write(&a.out)?;
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("{} training", ds.name), "epoch", "effective singular value");
        for s in mode_chart(&traj.times, &traj.eff_singular_values, "mode ", false) {
            c.push(s);
        }
        write_svg(svg, &c)?;
    }
    println!(
        "wrote {} ({} records, final sse {})",
        a.out.display(),
        traj.times.len(),
        fmt17(*traj.sse.last().unwrap_or(&f64::NAN))
    );
    Ok(())
}

fn compare(a: TrainArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    let sem = analyze(&ds)?;
    let cfg = train_config(&a, Init::Balanced);
    let traj = run_training(&a, &ds, &cfg)?;
    let r = traj.n_modes();
    let start = traj.eff_singular_values.row(0).to_vec();
    let mut theory = Matrix::zeros(traj.times.len(), r);
    for (k, &t) in traj.times.iter().enumerate() {
        for al in 0..r {
            let s = sem.svd.s[al];
            theory[(k, al)] = match a.arch {
                Arch::Deep => deep_mode_trajectory(s, start[al].max(f64::MIN_POSITIVE), traj.tau, t)?,
                Arch::Shallow => shallow_mode_trajectory(s, start[al], traj.tau, t)?,
            };
        }
    }
    let mut header = vec!["t".to_string()];
    header.extend((1..=r).map(|k| format!("sim_mode_{k}")));
    header.extend((1..=r).map(|k| format!("theory_mode_{k}")));
    let mut table = Table::new(&prov.line(Some(cfg.seed)), &header_refs(&header));
    for (k, &t) in traj.times.iter().enumerate() {
        let mut line = vec![t];
        line.extend(traj.eff_singular_values.row(k));
        line.extend(theory.row(k));
        table.push_floats(&line);
    }
    table.write(&a.out)?;
    let mut worst = 0.0f64;
    for al in 0..r {
        let dev = traj
            .mode(al)
            .iter()
            .zip(theory.col(al))
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        worst = worst.max(dev);
        println!("mode {}: s={:.6} max |sim - theory| = {:.3e}", al + 1, sem.svd.s[al], dev);
    }
    println!("max deviation: {worst:.3e}");
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("{}: simulation vs closed form", ds.name), "epoch", "effective singular value");
        for s in mode_chart(&traj.times, &traj.eff_singular_values, "sim ", false) {
            c.push(s);
        }
        for s in mode_chart(&traj.times, &theory, "theory ", true) {
            c.push(s);
        }
        write_svg(svg, &c)?;
    }
    Ok(())
}

fn coherence(a: CoherenceArgs, prov: &Provenance) -> Result<(), AppError> {
    let grid = match &a.coherence {
        Some(list) => parse_list(list, "coherence")?,
        None => {
            if !(a.cmin > 0.0 && a.cmax >= a.cmin) || a.points == 0 {
                return Err(AppError::Input("need 0 < --cmin <= --cmax and --points >= 1".into()));
            }
            geometric_grid(a.cmin, a.cmax, a.points)
        }
    };
    let sweep = CoherenceSweep {
        n_features: a.n_features,
        n_objects: a.n_objects,
        q: a.q,
        k: a.k,
        coherences: grid,
        trials: a.trials,
        seed: a.seed,
    };
    let points = sweep.run(&thread_pool()?)?;
    sweep_table(&prov.line(Some(a.seed)), &points).write(&a.out)?;
    for p in &points {
        println!(
            "C={:.4} pred=({:.4}, {:.4}) emp=({:.4}, {:.4})",
            p.coherence, p.pred_u2, p.pred_v2, p.emp_u2, p.emp_v2
        );
    }
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("category recovery, c = {:.3}", a.n_objects as f64 / a.n_features as f64), "coherence", "squared overlap");
        c.log_x = true;
        let fine = geometric_grid(points[0].coherence.min(0.25), points.last().unwrap().coherence.max(4.0), 200);
        let c_ratio = points[0].c;
        let pred: Vec<(f64, f64)> = fine
            .iter()
            .map(|&x| semantica_core::semantics::predicted_overlaps(x, c_ratio).map(|p| (x, p.0)))
            .collect::<Result<_, _>>()?;
        let pred_v: Vec<(f64, f64)> = fine
            .iter()
            .map(|&x| semantica_core::semantics::predicted_overlaps(x, c_ratio).map(|p| (x, p.1)))
            .collect::<Result<_, _>>()?;
        c.push(Series::new("theory u", pred).dashed());
        c.push(Series::new("theory v", pred_v).dashed());
        c.push(Series::new("features (u)", points.iter().map(|p| (p.coherence, p.emp_u2)).collect()));
        c.push(Series::new("objects (v)", points.iter().map(|p| (p.coherence, p.emp_v2)).collect()));
        write_svg(svg, &c)?;
    }
    Ok(())
}

fn item_index(ds: &Dataset, key: &str) -> Result<usize, AppError> {
    if let Some(i) = ds.item_index(key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < ds.p() => Ok(i),
        _ => Err(AppError::Input(format!("no item {key:?} in {}", ds.name))),
    }
}

fn project(a: ProjectArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    let anchor = item_index(&ds, &a.anchor)?;
    let sem = analyze(&ds)?;
    let mut frames: Vec<(f64, Matrix)> = Vec::new();
    match &a.run {
        Some(path) => {
            let rf = RunFile::read(path)?;
            let net = rf.deep_net()?;
            if net.n_inputs() != ds.n_inputs() {
                return Err(AppError::Input("run file does not match the dataset".into()));
            }
            frames.push((rf.epochs as f64, net.hidden(&ds.x)));
        }
        None => {
            for t in parse_list::<f64>(&a.times, "time")? {
                frames.push((t, hidden_reps(&sem.svd, a.a0, a.tau, t, &ds.x)?));
            }
        }
    }
    let mut header = vec!["t"];
    header.extend(ds.item_labels.iter().map(String::as_str));
    let mut table = Table::new(&prov.line(None), &header);
    let mut series: Vec<Vec<(f64, f64)>> = vec![Vec::new(); ds.p()];
    for (t, h) in &frames {
        let r = learn_novel_feature(h, anchor, *t)?;
        let mut line = vec![*t];
        for (j, s) in series.iter_mut().enumerate() {
            let v = project_feature(&r, h, j)?;
            line.push(v);
            s.push((*t, v));
        }
        table.push_floats(&line);
    }
    table.write(&a.out)?;
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("novel feature on {}", ds.item_labels[anchor]), "t", "projected value");
        for (j, s) in series.into_iter().enumerate() {
            c.push(Series::new(ds.item_labels[j].clone(), s));
        }
        write_svg(svg, &c)?;
    }
    println!("wrote {} ({} times, anchor {})", a.out.display(), frames.len(), ds.item_labels[anchor]);
    Ok(())
}

fn rsa(a: RsaArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|k| a.seed + k).collect();
    let mut cfg = TrainConfig::new(a.lr, a.epochs, a.a0, a.seed);
    cfg.hidden_dim = Some(a.hidden);
    cfg.record_every = a.epochs.max(1);
    let rep = rsa_parallel(&thread_pool()?, &ds, &seeds, &cfg)?;
    let labels: Vec<String> = seeds.iter().map(|s| format!("seed{s}")).collect();
    similarity_table(&prov.line(Some(a.seed)), &labels, &rep.distances).write(&a.out)?;
    if let Some(dir) = &a.sim_dir {
        for (s, m) in seeds.iter().zip(&rep.neural) {
            similarity_table(&prov.line(Some(*s)), &ds.item_labels, m).write(&dir.join(format!("hidden_similarity_seed{s}.csv")))?;
        }
    }
    for ((s, r), n) in seeds.iter().zip(&rep.residuals).zip(&rep.norms) {
        println!("seed {s}: relation residual {r:.3e}, squared weight norm {n:.6}");
    }
    let th = RsaThresholds { conserved: a.conserved, not_conserved: a.not_conserved };
    let verdict = if rep.conserved(th) {
        "conserved"
    } else if rep.not_conserved(th) {
        "not conserved"
    } else {
        "indeterminate"
    };
    println!("max pairwise distance {:.3e}: similarity {verdict}", rep.max_distance());
    Ok(())
}

fn mds(a: MdsArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    if a.dim == 0 || a.dim > ds.p() {
        return Err(AppError::Input("--dim must lie in 1..=items".into()));
    }
    let frames: Vec<(f64, Matrix)> = match &a.run {
        Some(path) => {
            let rf = RunFile::read(path)?;
            if rf.snapshots.is_empty() {
                return Err(AppError::Input("run file has no hidden snapshots (train with --snapshots)".into()));
            }
            rf.snapshots
        }
        None => {
            if a.frames < 2 {
                return Err(AppError::Input("need at least two frames".into()));
            }
            let sem = analyze(&ds)?;
            (0..a.frames)
                .map(|k| {
                    let t = a.tmax * k as f64 / (a.frames - 1) as f64;
                    hidden_reps(&sem.svd, a.a0, a.tau, t, &ds.x).map(|h| (t, h))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut header = vec!["t".to_string(), "item".to_string()];
    header.extend((1..=a.dim).map(|d| format!("x{d}")));
    let mut table = Table::new(&prov.line(None), &header_refs(&header));
    let mut prev: Option<Matrix> = None;
    let mut tracks: Vec<Vec<(f64, f64)>> = vec![Vec::new(); ds.p()];
    for (t, h) in &frames {
        if h.cols() != ds.p() {
            return Err(AppError::Input("snapshot does not match the dataset's items".into()));
        }
        let emb = classical_mds(&neural_similarity(h), a.dim)?;
        let coords = match &prev {
            Some(p) => procrustes_align(&emb.coords, p)?,
            None => emb.coords,
        };
        for (i, track) in tracks.iter_mut().enumerate() {
            let mut row = vec![fmt17(*t), ds.item_labels[i].clone()];
            row.extend(coords.row(i).iter().map(|&v| fmt17(v)));
            table.rows.push(row);
            let y = if a.dim > 1 { coords[(i, 1)] } else { 0.0 };
            track.push((coords[(i, 0)], y));
        }
        prev = Some(coords);
    }
    table.write(&a.out)?;
    if let Some(svg) = &a.svg {
        let mut c = Chart::new(&format!("{}: hidden representations over learning", ds.name), "MDS 1", "MDS 2");
        c.legend = false;
        for (i, tr) in tracks.into_iter().enumerate() {
            c.push(Series::new(ds.item_labels[i].clone(), tr).labelled());
        }
        write_svg(svg, &c)?;
    }
    println!("wrote {} ({} frames)", a.out.display(), frames.len());
    Ok(())
}

fn report(a: ReportArgs, prov: &Provenance) -> Result<(), AppError> {
    let ds = io::read_dataset(&a.dataset)?;
    let sem = analyze(&ds)?;
    let line = prov.line(None);
    let r = sem.n_modes();
    let dir = &a.out_dir;
    std::fs::create_dir_all(dir)?;

    let mut spectrum = Table::new(&line, &["mode", "s", "half_time"]);
    for (al, &s) in sem.svd.s.iter().enumerate() {
        let half = if a.a0 < s / 2.0 { time_to_reach(s, a.a0, s / 2.0, a.tau)? } else { f64::NAN };
        spectrum.rows.push(vec![(al + 1).to_string(), fmt17(s), fmt17(half)]);
    }
    spectrum.write(&dir.join("spectrum.csv"))?;

    let modes: Vec<String> = (1..=r).map(|k| format!("mode_{k}")).collect();
    let mut head = vec!["item".to_string()];
    head.extend(modes.iter().cloned());
    let mut typ = Table::new(&line, &header_refs(&head));
    for i in 0..ds.p() {
        let mut row = vec![ds.item_labels[i].clone()];
        for al in 0..r {
            row.push(fmt17(typicality(&sem, i, al).unwrap_or(f64::NAN)));
        }
        typ.rows.push(row);
    }
    typ.write(&dir.join("typicality.csv"))?;

    head[0] = "feature".into();
    let mut proto = Table::new(&line, &header_refs(&head));
    let protos: Vec<Option<Vec<f64>>> = (0..r).map(|al| prototype(&sem, al).ok()).collect();
    for m in 0..ds.n_features() {
        let mut row = vec![ds.feature_labels[m].clone()];
        row.extend(protos.iter().map(|p| fmt17(p.as_ref().map_or(f64::NAN, |p| p[m]))));
        proto.rows.push(row);
    }
    proto.write(&dir.join("prototypes.csv"))?;

    similarity_table(&line, &ds.item_labels, &ds.sigma_y()).write(&dir.join("similarity.csv"))?;

    let mut c = Chart::new(&format!("{} singular values", ds.name), "mode", "s");
    c.legend = false;
    c.push(Series::new("s", sem.svd.s.iter().enumerate().map(|(k, &s)| ((k + 1) as f64, s)).collect()));
    write_svg(&dir.join("spectrum.svg"), &c)?;

    let md = format!(
        "# {name}\n\n{nf} features, {p} items, {n1} inputs, {r} modes.\n\n\
         - spectrum.csv: singular values of the input-output correlation and the time for each mode to reach half strength (a0 = {a0}, tau = {tau})\n\
         - spectrum.svg: the same spectrum\n\
         - typicality.csv: item coordinates in every mode\n\
         - prototypes.csv: feature prototype of every mode\n\
         - similarity.csv: item similarity of the target correlations\n\n\
         Produced by: {line}\n",
        name = ds.name,
        nf = ds.n_features(),
        p = ds.p(),
        n1 = ds.n_inputs(),
        a0 = a.a0,
        tau = a.tau,
    );
    io::write_text(&dir.join("report.md"), &md)?;
    println!("wrote report for {} into {}", ds.name, dir.display());
    Ok(())
}
