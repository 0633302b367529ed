use qutrit_qkd::{nme_optimal_gamma, Inequality, ProtocolConfig, ProtocolVariant, SiftClass};
use qutrit_qkd_cli::{
    parse_grid, render, run_command, sig12, Command, Format, Report, Results, StateKind,
};

fn exact(inequality: Inequality, state: StateKind, noise: f64) -> qutrit_qkd_cli::ExactResult {
    let r = run_command(&Command::Exact {
        inequality,
        state,
        gamma: None,
        noise,
    })
    .unwrap();
    match r.results {
        Results::Exact(e) => e,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn exact_hchsh3_ghz() {
    let e = exact(Inequality::Hchsh3, StateKind::Ghz, 0.0);
    assert!((e.violation_factor - 1.693).abs() < 5e-4);
    assert!((e.noise_threshold - 0.409).abs() < 1e-3);
    assert!(e.violates);
}

#[test]
fn exact_chsh3_nme_defaults_to_optimal_gamma() {
    let e = exact(Inequality::Chsh3, StateKind::Nme, 0.0);
    assert_eq!(e.gamma, sig12(nme_optimal_gamma()));
    assert!((e.violation_factor - 1.457).abs() < 5e-4);
    assert!((e.noise_threshold - 0.314).abs() < 1e-3);
}

#[test]
fn exact_full_noise_is_zero() {
    let e = exact(Inequality::Chsh3, StateKind::Ghz, 1.0);
    assert!(e.value.abs() < 1e-12);
    assert!(!e.violates);
    assert_eq!(e.noise_threshold, 0.0);
}

#[test]
fn exact_rejects_bad_input() {
    let bad = |inequality, state, gamma, noise| {
        run_command(&Command::Exact {
            inequality,
            state,
            gamma,
            noise,
        })
        .is_err()
    };
    assert!(bad(Inequality::Chsh3, StateKind::Ghz, None, 1.5));
    assert!(bad(Inequality::Chsh3, StateKind::Ghz, None, -0.1));
    assert!(bad(Inequality::Chsh3, StateKind::Nme, Some(-1.0), 0.0));
    assert!(bad(Inequality::Chsh3, StateKind::Ghz, Some(0.5), 0.0));
}

#[test]
fn exact_is_repeatable() {
    let a = exact(Inequality::Hchsh3, StateKind::Nme, 0.2);
    let b = exact(Inequality::Hchsh3, StateKind::Nme, 0.2);
    assert_eq!(a, b);
}

fn sweep(variant: ProtocolVariant, grid: &[f64]) -> qutrit_qkd_cli::SweepResult {
    let r = run_command(&Command::Sweep {
        variant,
        grid: grid.to_vec(),
        rounds: None,
        seed: 0,
    })
    .unwrap();
    match r.results {
        Results::Sweep(s) => s,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn sweep_crossings() {
    let grid = parse_grid("0:1:0.001").unwrap();
    assert_eq!(grid.len(), 1001);
    let h = sweep(ProtocolVariant::HThreeDeb, &grid);
    assert!((h.crossing.unwrap() - 0.409).abs() < 1e-3);
    let c = sweep(ProtocolVariant::ThreeDeb, &grid);
    let expected = (11.0 - 6.0 * 3f64.sqrt()) / 2.0;
    assert!((c.crossing.unwrap() - expected).abs() < 1e-3);
    // order preserved
    assert!(c.points.windows(2).all(|w| w[0].noise < w[1].noise));
    assert!(c.points.windows(2).all(|w| w[0].factor >= w[1].factor));
}

#[test]
fn sweep_single_point_has_no_crossing() {
    assert_eq!(sweep(ProtocolVariant::ThreeDeb, &[0.0]).crossing, None);
}

#[test]
fn sweep_rejects_bad_grids() {
    for grid in [vec![], vec![0.2, 0.1], vec![0.1, 1.2]] {
        assert!(run_command(&Command::Sweep {
            variant: ProtocolVariant::ThreeDeb,
            grid,
            rounds: None,
            seed: 0,
        })
        .is_err());
    }
    assert!(parse_grid("0:1:0").is_err());
    assert!(parse_grid("a,b").is_err());
    assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
}

#[test]
fn sweep_with_simulation() {
    let r = run_command(&Command::Sweep {
        variant: ProtocolVariant::HThreeDeb,
        grid: vec![0.0, 0.6],
        rounds: Some(2000),
        seed: 4,
    })
    .unwrap();
    assert_eq!(r.seed, Some(4));
    let Results::Sweep(s) = r.results else {
        panic!()
    };
    let sim: Vec<f64> = s
        .points
        .iter()
        .map(|p| p.simulated_factor.unwrap())
        .collect();
    assert!(sim[0] > 1.4 && sim[1] < 1.0, "{sim:?}");
}

fn simulate(noise: f64, emit_key: bool) -> Report {
    let mut config = ProtocolConfig::new(ProtocolVariant::ThreeDeb, noise, 64, 21);
    config.min_check_rounds = 1000;
    run_command(&Command::Simulate { config, emit_key }).unwrap()
}

#[test]
fn simulate_report() {
    let r = simulate(0.0, true);
    assert_eq!(r.exit_code(), 0);
    let Results::Simulate(s) = &r.results else {
        panic!()
    };
    assert_eq!(s.key.as_ref().unwrap().len(), 64);
    assert!(s.key.as_ref().unwrap().chars().all(|c| "012".contains(c)));
    assert_eq!(s.key_agreement, 1.0);
    assert_eq!(
        s.rounds,
        s.key_rounds + s.check1_rounds + s.check2_rounds + s.discard_rounds
    );
    assert_eq!(s.checks[0].class, SiftClass::Check1);
    assert_eq!(r, simulate(0.0, true));
    let Results::Simulate(quiet) = simulate(0.0, false).results else {
        panic!()
    };
    assert_eq!(quiet.key, None);
}

#[test]
fn aborted_simulation_has_no_key() {
    let r = simulate(0.9, true);
    assert_eq!(r.exit_code(), 3);
    let Results::Simulate(s) = &r.results else {
        panic!()
    };
    assert!(s.aborted && s.key.is_none() && s.key_length == 0);
    for f in [Format::Json, Format::Csv, Format::Text] {
        let out = render(&r, f).unwrap();
        assert!(!out.contains("\"key\": \""), "{out}");
    }
}

#[test]
fn json_round_trip() {
    let reports = [
        run_command(&Command::Exact {
            inequality: Inequality::Chsh3,
            state: StateKind::Nme,
            gamma: Some(0.7),
            noise: 0.1,
        })
        .unwrap(),
        simulate(0.1, true),
        run_command(&Command::Sweep {
            variant: ProtocolVariant::HThreeDeb,
            grid: parse_grid("0:1:0.05").unwrap(),
            rounds: None,
            seed: 0,
        })
        .unwrap(),
        run_command(&Command::Tables {
            variant: ProtocolVariant::HThreeDeb,
        })
        .unwrap(),
    ];
    for r in reports {
        let text = render(&r, Format::Json).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.meta.version, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn csv_headers_are_fixed() {
    let header = |r: &Report| {
        render(r, Format::Csv)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    let e = run_command(&Command::Exact {
        inequality: Inequality::Chsh3,
        state: StateKind::Ghz,
        gamma: None,
        noise: 0.0,
    })
    .unwrap();
    assert_eq!(
        header(&e),
        "inequality,state,gamma,noise,value,classical_bound,violation_factor,noise_threshold,violates"
    );
    assert_eq!(
        header(&simulate(0.0, false)),
        "variant,noise,seed,rounds,key_rounds,check1_rounds,check2_rounds,discard_rounds,key_length,\
         key_agreement,check1_factor,check1_stderr,check2_factor,check2_stderr,exact_factor,aborted,key"
    );
    let s = run_command(&Command::Sweep {
        variant: ProtocolVariant::ThreeDeb,
        grid: vec![0.0, 0.5],
        rounds: None,
        seed: 0,
    })
    .unwrap();
    assert_eq!(header(&s), "F,factor,threshold_crossed,simulated_factor");
    let t = run_command(&Command::Tables {
        variant: ProtocolVariant::ThreeDeb,
    })
    .unwrap();
    assert_eq!(header(&t), "alice,bob,class");
}

#[test]
fn tables_counts() {
    for (variant, counts) in [
        (
            ProtocolVariant::ThreeDeb,
            [("check1", 4), ("check2", 4), ("discard", 4), ("key", 4)],
        ),
        (
            ProtocolVariant::HThreeDeb,
            [("check1", 9), ("check2", 9), ("discard", 12), ("key", 6)],
        ),
    ] {
        let Results::Tables(t) = run_command(&Command::Tables { variant }).unwrap().results else {
            panic!()
        };
        for (class, n) in counts {
            assert_eq!(t.counts[class], n, "{variant} {class}");
        }
    }
}

#[test]
fn twelve_significant_digits() {
    assert_eq!(sig12(1.436_467_025_586_168_5), 1.436_467_025_59);
    assert_eq!(sig12(0.0), 0.0);
    assert_eq!(sig12(-123_456.789_012_345), -123_456.789_012);
}
