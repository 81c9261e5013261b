//! A fast, deterministic invariant suite covering every module, exposed
//! both programmatically and through the CLI `selftest` subcommand.

use crate::dynamics::{theorem1_scan, IntervalMap, ScanConfig};
use crate::gen;
use crate::jets::Jet;
use crate::koebe::{koebe_check, Interval};
use crate::pade::{pade_approximant, RationalMap};
use crate::pickclass::{
    certify_pick, crossratio_from_map, halfplane_sample_check, matrix_monotone_test,
    monotone_gap, uniform_grid, CertifyMethod, GridSpec, MonotoneConfig, Verdict,
};
use crate::scalar::{Rational, Scalar};
use crate::schwarzian::{
    composition_check, continued_fraction, schwarzian_defect, schwarzian_det,
    schwarzian_recursive,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.all_pass(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name, "pass": c.pass, "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match run() {
        Ok(detail) => CheckResult {
            name,
            pass: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            pass: false,
            detail,
        },
    }
}

/// Run the whole suite with a fixed seed. `quick` trims the trial counts.
pub fn run(seed: u64, quick: bool) -> SelftestReport {
    let n_jets = if quick { 10 } else { 40 };
    let n_pairs = if quick { 5 } else { 20 };
    let n_trials = if quick { 60 } else { 300 };
    let mut checks = Vec::new();

    checks.push(check("jet-roundtrips", || {
        let mut rng = gen::rng(seed);
        for i in 0..n_jets {
            let a = gen::jet(&mut rng, 7);
            let b = gen::jet(&mut rng, 7);
            let q = a.div(&b).map_err(|e| format!("div failed: {e}"))?;
            let back = q.mul(&b).map_err(|e| e.to_string())?;
            if back != a.truncated(back.order()) {
                return Err(format!("mul∘div mismatch at case {i}"));
            }
            let f = gen::jet(&mut rng, 7);
            let g = f.reverse().map_err(|e| e.to_string())?;
            let id = f.compose_into(&g).map_err(|e| e.to_string())?;
            if id != Jet::identity(f.base().clone(), id.order()) {
                return Err(format!("reversion round-trip failed at case {i}"));
            }
        }
        Ok(format!("{n_jets} random order-7 jets"))
    }));

    checks.push(check("schwarzian-route-equivalence", || {
        let mut rng = gen::rng(seed ^ 0x5eed);
        for i in 0..n_jets {
            let f = gen::normal_jet(&mut rng, 9, 3);
            for d in 1..=3 {
                let det = schwarzian_det(&f, d).map_err(|e| e.to_string())?;
                let defect = schwarzian_defect(&f, d).map_err(|e| e.to_string())?;
                let rec = schwarzian_recursive(&f, d).map_err(|e| e.to_string())?;
                if &det != rec.value(d).ok_or("recursion lost a level")? || det != defect {
                    return Err(format!("route mismatch at case {i}, d = {d}"));
                }
            }
        }
        Ok(format!("{n_jets} jets, d = 1..3, three routes"))
    }));

    checks.push(check("continued-fraction-roundtrip", || {
        let mut rng = gen::rng(seed ^ 0xcf);
        for i in 0..n_pairs {
            let cf = gen::continued_fraction(&mut rng, 3, false);
            let jet = cf.expand_jet(8).map_err(|e| e.to_string())?;
            let back = continued_fraction(&jet, 3).map_err(|e| e.to_string())?;
            if back != cf {
                return Err(format!("roundtrip mismatch at case {i}"));
            }
        }
        Ok(format!("{n_pairs} depth-3 representations"))
    }));

    checks.push(check("composition-formula", || {
        let mut rng = gen::rng(seed ^ 0xec0);
        for i in 0..n_pairs {
            let f = gen::normal_jet(&mut rng, 7, 2);
            let mut g = gen::normal_jet(&mut rng, 7, 2);
            // rebase g at f's value
            g = Jet::new(f.value().clone(), g.coeffs().to_vec());
            let c = composition_check(&f, &g, 2).map_err(|e| e.to_string())?;
            if !c.holds {
                return Err(format!("three-term identity failed at case {i}"));
            }
        }
        Ok(format!("{n_pairs} pairs at d = 2, exact"))
    }));

    checks.push(check("pick-certification", || {
        let mut rng = gen::rng(seed ^ 0x01c0);
        for i in 0..n_pairs {
            let pos = gen::pick_map(&mut rng, 3);
            let x = gen::valid_point(&mut rng, &pos, 7);
            for method in [CertifyMethod::SchwarzianSigns, CertifyMethod::DegreeReduction] {
                let c = certify_pick(&pos, &x, method).map_err(|e| e.to_string())?;
                if c.verdict != Verdict::Pick {
                    return Err(format!("positive-μ map not Pick at case {i} ({method:?})"));
                }
            }
            let neg = gen::continued_fraction_mixed(&mut rng, 3)
                .to_rational_map()
                .map_err(|e| e.to_string())?;
            let x = gen::valid_point(&mut rng, &neg, 7);
            let a = certify_pick(&neg, &x, CertifyMethod::SchwarzianSigns)
                .map_err(|e| e.to_string())?;
            let b = certify_pick(&neg, &x, CertifyMethod::DegreeReduction)
                .map_err(|e| e.to_string())?;
            if a.verdict != b.verdict {
                return Err(format!("methods disagree at case {i}"));
            }
            if a.strict {
                return Err(format!("mixed-sign μ passed strictly at case {i}"));
            }
        }
        Ok(format!("{n_pairs} positive + {n_pairs} mixed maps, both methods"))
    }));

    checks.push(check("halfplane-sampling", || {
        let mut rng = gen::rng(seed ^ 0x4a1f);
        for i in 0..n_pairs {
            let m = gen::pick_map(&mut rng, 3);
            let rep = halfplane_sample_check(&m, &GridSpec::default(), 1e-12);
            if !rep.pass {
                return Err(format!(
                    "certified Pick map dips to Im = {} at case {i}",
                    rep.min_im
                ));
            }
        }
        Ok(format!("{n_pairs} Pick maps on the default grid"))
    }));

    checks.push(check("crossratio-mobius", || {
        let m = RationalMap::<Rational>::new(
            Rational::zero(),
            vec![Rational::zero(), Rational::one()],
            vec![Rational::one(), -Rational::one()],
        )
        .map_err(|e| e.to_string())?;
        let pts = [
            Rational::zero(),
            Rational::from_ratio(1, 4),
            Rational::from_ratio(1, 2),
        ];
        let cm = crossratio_from_map(&m, &pts).map_err(|e| e.to_string())?;
        let ev = cm.eigenvalues();
        if (ev[2] - 3.0).abs() > 1e-10 || ev[0] < -1e-10 {
            return Err(format!("spectrum {ev:?} is not {{3, 0, 0}}"));
        }
        Ok("rank-one all-ones spectrum".into())
    }));

    checks.push(check("matrix-monotone", || {
        let cfg = MonotoneConfig::new(3, n_trials, seed);
        let rep = matrix_monotone_test(&|t| t.sqrt(), (0.0, 4.0), &cfg)
            .map_err(|e| e.to_string())?;
        if !rep.pass {
            return Err(format!("sqrt failed with min gap {}", rep.min_gap));
        }
        let a = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let gap = monotone_gap(&|t| t * t, &a, &b);
        let expect = (3.0 - 13.0f64.sqrt()) / 2.0;
        if (gap - expect).abs() > 1e-9 {
            return Err(format!("square fixture gap {gap}, expected {expect}"));
        }
        Ok(format!("sqrt over {n_trials} trials; square fixture gap {gap:.4}"))
    }));

    checks.push(check("koebe-witness", || {
        let w = RationalMap::<Rational>::new(
            Rational::zero(),
            vec![Rational::zero(), Rational::one()],
            vec![Rational::one(), -Rational::one()],
        )
        .map_err(|e| e.to_string())?;
        let interval = Interval::bounded(-Rational::one(), Rational::one());
        let pts = [
            Rational::zero(),
            Rational::from_ratio(1, 4),
            Rational::from_ratio(1, 2),
        ];
        let rep = koebe_check(&w, 1, 2, 1, &interval, &pts, 0.0).map_err(|e| e.to_string())?;
        if !rep.pass || rep.max_ratio != Rational::one() {
            return Err(format!("witness max ratio {}", rep.max_ratio));
        }
        Ok("sharp at the Möbius witness".into())
    }));

    checks.push(check("pd-membership-gate", || {
        let m = IntervalMap::<Rational>::logistic();
        let grid = uniform_grid(
            &Rational::from_ratio(1, 10),
            &Rational::from_ratio(9, 10),
            7,
        );
        // inverse branch of the logistic map through jets at q(x)
        let src = move |y: &Rational, order: usize| {
            let jet = m.jet_at(y, order)?;
            jet.reverse()
        };
        // jets of the inverse exist away from 1/2; base points are f(x)
        let mut positives = 0;
        for x in &grid {
            if let Ok(j) = src(x, 3) {
                if let Ok(v) = schwarzian_det(&j, 1) {
                    if v.signum() > 0 {
                        positives += 1;
                    }
                }
            }
        }
        if positives == 0 {
            return Err("no positive inverse-branch Schwarzians found".into());
        }
        Ok(format!("{positives}/{} grid points positive", grid.len()))
    }));

    checks.push(check("theorem1-mini-scan", || {
        let m = IntervalMap::<Rational>::logistic();
        let cfg = ScanConfig {
            d: 2,
            eps_list: vec![Rational::from_ratio(1, 8)],
            sample_count: if quick { 12 } else { 24 },
            max_steps: 10,
            all_entries: false,
        };
        let rep = theorem1_scan(&m, &Rational::from_ratio(1, 2), &cfg)
            .map_err(|e| e.to_string())?;
        let s = &rep.summaries[0];
        if s.events == 0 {
            return Err("no events recorded".into());
        }
        if s.identity_failures > 0 || s.unresolved > 0 || s.all_positive != s.events {
            return Err(format!(
                "{} events, {} positive, {} unresolved, {} identity failures",
                s.events, s.all_positive, s.unresolved, s.identity_failures
            ));
        }
        Ok(format!("{} events, all positive", s.events))
    }));

    checks.push(check("pade-fixture", || {
        let r = pade_approximant(&Jet::<Rational>::exp_at_zero(4), 2)
            .map_err(|e| e.to_string())?;
        let half = Rational::from_ratio(1, 2);
        let twelfth = Rational::from_ratio(1, 12);
        if r.numerator() != [Rational::one(), half.clone(), twelfth.clone()]
            || r.denominator() != [Rational::one(), -half, twelfth]
        {
            return Err("exp Padé d=2 coefficients are off".into());
        }
        Ok("exp Padé d=2 exact".into())
    }));

    SelftestReport { checks }
}
