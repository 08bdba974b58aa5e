use std::path::Path;
use std::sync::Arc;

use anyon_core::entanglement::{self, EntanglementReport};
use anyon_core::fusion::{asymptotic_scaling, check_lemma1};
use anyon_core::io::{load_state, state_to_file};
use anyon_core::protocols::{self, ProtocolOptions, ProtocolReport, TypeSelection};
use anyon_core::state::Context;
use anyon_core::{AnyonModel, BipartiteState, Charge, Error, Limits, Result, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{
    AdditivityArgs, AeeNumericArgs, Command, Lemma1Args, MesArgs, ModelCommand, NcopyArgs,
    ProtocolArgs, ScalingArgs, StateArgs,
};
use crate::report::{Cell, Report, Table};

pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Model(ModelCommand::Validate { path }) => validate(path),
        Command::Model(ModelCommand::Dims { path }) => dims(path),
        Command::Lemma1(a) => lemma1(a),
        Command::Scaling(a) => scaling(a),
        Command::Entropy(a) => entropy(a),
        Command::NcopyScan(a) => ncopy_scan(a),
        Command::Mes(a) => mes(a),
        Command::Additivity(a) => additivity(a),
        Command::Distill(a) => protocol_scan(a, Kind::Distill),
        Command::Dilute(a) => protocol_scan(a, Kind::Dilute),
        Command::Roundtrip(a) => roundtrip(a),
        Command::Purify(a) => purify(a),
        Command::AeeNumeric(a) => aee_numeric(a),
    }
}

fn validate(path: &Path) -> Result<Report> {
    let m = AnyonModel::load(path)?;
    Ok(Report::summary(vec![
        ("valid", true.into()),
        ("charges", m.len().into()),
        ("vacuum", m.label(m.vacuum()).into()),
        ("dimension_residual", m.dimension_residual().into()),
    ]))
}

fn dims(path: &Path) -> Result<Report> {
    let m = AnyonModel::load(path)?;
    let mut t = Table::new(&["charge", "dual", "d", "abelian", "primitive"]);
    for a in m.charges() {
        t.push(vec![
            m.label(a).into(),
            m.label(m.dual(a)).into(),
            m.qdim(a).into(),
            m.is_abelian(a).into(),
            m.is_primitive(a).into(),
        ]);
    }
    Ok(Report::summary(vec![("total_dim_sq", m.total_dim_sq().into())]).with_table(t))
}

fn lemma1(args: &Lemma1Args) -> Result<Report> {
    let m = AnyonModel::load(&args.model)?;
    let relative = |chain: &[Charge]| {
        let product: f64 = chain.iter().map(|&a| m.qdim(a)).product();
        check_lemma1(&m, chain) / product
    };
    if let Some(labels) = &args.chain {
        let chain = m.charges_of(labels)?;
        return Ok(Report::summary(vec![
            ("chain", labels.join(",").into()),
            ("relative_residual", relative(&chain).into()),
        ]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let len = rng.random_range(1..=args.max_len.max(1));
        let chain: Vec<Charge> = (0..len)
            .map(|_| Charge::new(rng.random_range(0..m.len())))
            .collect();
        worst = worst.max(relative(&chain));
    }
    Ok(Report::summary(vec![
        ("trials", args.trials.into()),
        ("max_relative_residual", worst.into()),
    ]))
}

fn scaling(args: &ScalingArgs) -> Result<Report> {
    let m = AnyonModel::load(&args.model)?;
    let a = m.charge(&args.charge)?;
    let b = match &args.sector {
        Some(l) => m.charge(l)?,
        None => m.vacuum(),
    };
    let fit = asymptotic_scaling(&m, a, b, args.n_max)?;
    let mut t = Table::new(&["n", "residual"]);
    for &(n, r) in &fit.residuals {
        t.push(vec![n.into(), r.into()]);
    }
    let rate = fit.rate().map_or(Cell::Text("none".into()), Cell::Real);
    Ok(Report::summary(vec![
        ("leading_coefficient", fit.leading_coefficient.into()),
        ("decays", fit.decays().into()),
        ("rate", rate),
    ])
    .with_table(t))
}

fn bipartite(path: &Path) -> Result<BipartiteState> {
    load_state(path)?.into_bipartite()
}

fn entropy(args: &StateArgs) -> Result<Report> {
    let s = bipartite(&args.state)?;
    let r = EntanglementReport::compute(&s, []);
    Ok(
        Report::summary(vec![("e1", r.e1.into()), ("aee", r.aee.into())])
            .with_json(json!({ "e1": r.e1, "aee": r.aee, "sector_term": r.sector_term })),
    )
}

fn ncopy_scan(args: &NcopyArgs) -> Result<Report> {
    let s = bipartite(&args.state)?;
    let r = EntanglementReport::compute(&s, args.n.values());
    let mut t = Table::new(&["N", "e1_ncopy_per_copy"]);
    for &(n, v) in &r.ncopy_trace {
        t.push(vec![n.into(), v.into()]);
    }
    Ok(Report::default().with_table(t))
}

fn mes(args: &MesArgs) -> Result<Report> {
    let m = Arc::new(AnyonModel::load(&args.model)?);
    let chain = m.charges_of(&args.chain)?;
    let s = entanglement::mes_with(m.clone(), &chain, &Limits::from_env())?;
    let bound = entanglement::aee_upper_bound(&m, &chain);
    if let Some(path) = &args.save {
        let model_ref = std::path::absolute(&args.model).unwrap_or_else(|_| args.model.clone());
        let file = state_to_file(&s, &model_ref.display().to_string());
        let text = serde_json::to_string_pretty(&file)?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let mut t = Table::new(&["charge", "p", "rank"]);
    for sec in s.sectors() {
        t.push(vec![
            m.label(sec.charge).into(),
            sec.weight.into(),
            sec.schmidt.len().into(),
        ]);
    }
    let bound_cell = match &bound {
        Ok(b) => Cell::Real(*b),
        Err(_) => Cell::Text("n/a".into()),
    };
    Ok(Report::summary(vec![
        ("aee", entanglement::aee(&s).into()),
        ("bound", bound_cell),
    ])
    .with_table(t))
}

fn additivity(args: &AdditivityArgs) -> Result<Report> {
    if let (Some(x), Some(y)) = (&args.state, &args.other) {
        let r = entanglement::check_additivity(&bipartite(x)?, &bipartite(y)?)?;
        return Ok(Report::summary(vec![("residual", r.into())]));
    }
    let path = args
        .model
        .as_ref()
        .expect("clap requires a model without states");
    let m = Arc::new(AnyonModel::load(path)?);
    let ctx = Context::mirrored(&m, m.charges_of(&args.chain)?);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let x = BipartiteState::random(m.clone(), &ctx, 4, &mut rng);
        let y = BipartiteState::random(m.clone(), &ctx, 4, &mut rng);
        worst = worst.max(entanglement::check_additivity(&x, &y)?);
    }
    Ok(Report::summary(vec![
        ("trials", args.trials.into()),
        ("max_residual", worst.into()),
    ]))
}

fn target_chain(s: &BipartiteState, labels: &Option<Vec<String>>) -> Result<Vec<Charge>> {
    let m = s.model();
    match labels {
        Some(l) => m.charges_of(l),
        None => m
            .charges()
            .find(|&x| x != m.vacuum() && m.is_primitive(x))
            .map(|x| vec![x])
            .ok_or_else(|| {
                Error::Primitivity("the model has no primitive charge to target".into())
            }),
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Distill,
    Dilute,
}

fn protocol_scan(args: &ProtocolArgs, kind: Kind) -> Result<Report> {
    let s = bipartite(&args.state)?;
    let target = target_chain(&s, &args.target)?;
    let limits = Limits::from_env();
    let opts = ProtocolOptions {
        selection: if args.average {
            TypeSelection::Average
        } else {
            TypeSelection::Modal
        },
        limits,
    };
    let reports: Vec<ProtocolReport> = args
        .n
        .values()
        .map(|n| match kind {
            Kind::Distill => protocols::distill_with(&s, n, args.delta, &target, &opts),
            Kind::Dilute => protocols::dilute_with(&s, n, args.delta, &target, &limits),
        })
        .collect::<Result<_>>()?;

    let mut t = Table::new(&[
        "N",
        "delta",
        "L_exact",
        "L_paper",
        "rate",
        "success_prob",
        "fidelity",
    ]);
    for r in &reports {
        t.push(vec![
            r.n.into(),
            r.delta.into(),
            r.l_exact.into(),
            r.l_paper.into(),
            r.rate.into(),
            r.success_prob.into(),
            r.fidelity.into(),
        ]);
    }
    let json = if args.n.is_single() {
        serde_json::to_value(&reports[0])?
    } else {
        serde_json::to_value(&reports)?
    };
    let mut report = Report::default().with_table(t).with_json(json);
    if let [r] = reports.as_slice() {
        report.summary = vec![
            ("L".into(), r.l.into()),
            ("rate".into(), r.rate.into()),
            ("fidelity".into(), r.fidelity.into()),
            ("success_prob".into(), r.success_prob.into()),
        ];
        let mut sectors = Table::new(&["charge", "available", "target_dim", "majorized"]);
        for sec in &r.sectors {
            let verdict = sec.majorized.map_or(Cell::Text("-".into()), Cell::from);
            sectors.push(vec![
                sec.charge.as_str().into(),
                sec.available.to_string().into(),
                sec.target_dim.to_string().into(),
                verdict,
            ]);
        }
        report.detail = Some(sectors);
    }
    Ok(report)
}

fn roundtrip(args: &ProtocolArgs) -> Result<Report> {
    let s = bipartite(&args.state)?;
    let target = target_chain(&s, &args.target)?;
    let limits = Limits::from_env();
    let mut t = Table::new(&["N", "delta", "ratio"]);
    for n in args.n.values() {
        let r = protocols::roundtrip_with(&s, n, args.delta, &target, &limits)?;
        t.push(vec![n.into(), args.delta.into(), r.into()]);
    }
    Ok(Report::default().with_table(t))
}

fn purify(args: &StateArgs) -> Result<Report> {
    let g = load_state(&args.state)?.into_general();
    let original = g.total();
    let p = g.purify();
    let m = p.model();
    let refs: Vec<&str> = p.references().iter().map(|&c| m.label(c)).collect();
    let mut t = Table::new(&["side", "charge", "weight", "rank", "aee"]);
    let mut views = Vec::new();
    for (name, side) in [("A", Side::A), ("B", Side::B)] {
        let view = p.side_view(side)?;
        let aee = entanglement::aee(&view);
        for sec in view.sectors() {
            t.push(vec![
                name.into(),
                m.label(sec.charge).into(),
                sec.weight.into(),
                sec.schmidt.len().into(),
                aee.into(),
            ]);
        }
        views.push(aee);
    }
    Ok(Report::summary(vec![
        ("total_charge", m.label(original).into()),
        (
            "reference",
            if refs.is_empty() {
                "none".into()
            } else {
                refs.join(",").into()
            },
        ),
        ("aee_a", views[0].into()),
        ("aee_b", views[1].into()),
    ])
    .with_table(t))
}

fn aee_numeric(args: &AeeNumericArgs) -> Result<Report> {
    let g = load_state(&args.state)?.into_general().purify();
    let a = g.aee_numeric(Side::A, args.n_max)?;
    let b = g.aee_numeric(Side::B, args.n_max)?;
    let mut t = Table::new(&["N", "side_a", "side_b", "asymmetry"]);
    for (&(n, x), &(_, y)) in a.iter().zip(&b) {
        t.push(vec![n.into(), x.into(), y.into(), (x - y).abs().into()]);
    }
    Ok(Report::default().with_table(t))
}
