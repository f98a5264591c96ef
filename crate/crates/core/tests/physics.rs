//! Cross-module consistency checks on the continuum solution and the
//! discrete-bath oracle.

use spinboson::criticality::{
    alpha_c_numeric, alpha_c_ohmic_finite, alpha_c_scaling, alpha_c_star_numeric, phase_point,
};
use spinboson::dynamics::{analyze, p_of_t, Spectrum};
use spinboson::oracle::{discrete_shift_pv, discretize, p_of_t_discrete, solve_levels};
use spinboson::quad::{integrate, Tolerance};
use spinboson::renorm::{alpha_l, solve_eta};
use spinboson::roots::{linspace, logspace};
use spinboson::{gamma_of, r_quadrature, BathSpec, SystemSpec};

fn spectrum(s: f64, alpha: f64, omega_s: f64, delta: f64) -> Spectrum {
    Spectrum::from_params(&BathSpec::new(s, alpha, omega_s).unwrap(), &SystemSpec::new(delta).unwrap())
        .unwrap()
}

#[test]
fn level_shift_is_the_hilbert_transform_of_the_damping() {
    let (s, w) = (0.6, 0.3);
    let bath = BathSpec::new(s, 0.05, 1.0).unwrap();
    let dr = solve_eta(&bath, &SystemSpec::new(0.1).unwrap()).unwrap().delta_r;
    let f = |x: f64| gamma_of(x, &bath, dr) / std::f64::consts::PI;
    // Fold the principal value onto (0, w): PV∫_0^{2w} f/(w-x) = ∫_0^w [f(w-u) - f(w+u)]/u du.
    let tol = Tolerance::new(1e-13, 1e-11);
    let folded = integrate(|u: f64| (f(w - u) - f(w + u)) / u, &[0.0, w], &tol).unwrap();
    let outer = integrate(|x: f64| f(x) / (w - x), &[2.0 * w, 1.0], &tol).unwrap();
    let brute = folded.value + outer.value;
    let r = r_quadrature(w, &bath, dr).unwrap();
    assert!((r - brute).abs() <= 1e-4 * r.abs(), "{r} vs {brute}");
}

#[test]
fn static_susceptibility_grows_toward_alpha_c() {
    let (s, ws, d) = (0.7, 1.0, 0.1);
    let ac = alpha_c_numeric(s, ws, d).unwrap();
    let chi: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99]
        .iter()
        .map(|f| spectrum(s, f * ac, ws, d).chi0().unwrap())
        .collect();
    assert!(chi.windows(2).all(|p| p[1] > p[0]), "{chi:?}");
    assert!(chi[6] > 5.0 * chi[0]);
}

#[test]
fn inverse_cosine_transform_recovers_the_peak() {
    let sp = spectrum(0.5, 0.02, 1.0, 0.1);
    let ct = sp.cosine_transform().unwrap();
    let width = sp.damping(sp.pole.unwrap());
    let t_max = 40.0 / width;
    let dt = 0.5;
    let ts: Vec<f64> = (0..(t_max / dt) as usize).map(|k| k as f64 * dt).collect();
    let ct_vals: Vec<f64> = ts.iter().map(|&t| ct.eval(t).unwrap().value).collect();
    let grid = linspace(0.5 * sp.delta_r(), 1.5 * sp.delta_r(), 401);
    let back = |w: f64| -> f64 {
        let sum: f64 = ts
            .iter()
            .zip(&ct_vals)
            .map(|(&t, &c)| {
                let weight = if t == 0.0 { 0.5 } else { 1.0 };
                weight * c * (w * t).cos() * (-(t / t_max).powi(2) * 9.0).exp()
            })
            .sum();
        2.0 / std::f64::consts::PI * sum * dt
    };
    let argmax = |f: &dyn Fn(f64) -> f64| {
        grid.iter().copied().max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap()
    };
    let direct = argmax(&|w| sp.correlation(w).unwrap());
    let recovered = argmax(&back);
    let step = grid[1] - grid[0];
    assert!((direct - recovered).abs() <= 2.0 * step, "{direct} vs {recovered}");
}

#[test]
fn discrete_dynamics_converges_in_mode_number() {
    let bath = BathSpec::new(0.9, 0.05, 0.01).unwrap();
    let d = analyze(&bath, &SystemSpec::new(0.1).unwrap()).unwrap();
    let times = linspace(0.0, 10.0 / d.renorm.delta_r, 201);
    let curve = |n: usize| -> Vec<f64> {
        let lv = solve_levels(&discretize(&bath, &d.renorm, n).unwrap()).unwrap();
        times.iter().map(|&t| p_of_t_discrete(&lv, &d.renorm, t).unwrap()).collect()
    };
    let (a, b, c) = (curve(500), curve(1000), curve(2000));
    let sup = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let (d1, d2) = (sup(&a, &b), sup(&b, &c));
    assert!(d2 < 1e-3, "N=1000 vs 2000 differ by {d2}");
    assert!(d1 / d2 > 2.0, "Cauchy ratio {d1} / {d2}");
}

#[test]
fn discrete_envelope_decays_at_the_golden_rule_rate() {
    let bath = BathSpec::new(0.9, 0.05, 0.01).unwrap();
    let d = analyze(&bath, &SystemSpec::new(0.1).unwrap()).unwrap();
    let lv = solve_levels(&discretize(&bath, &d.renorm, 2000).unwrap()).unwrap();
    let w0 = d.omega0.unwrap();
    let period = 2.0 * std::f64::consts::PI / w0;
    let gamma = d.gamma_decay;
    // Peak of |P| within each half period, over three decay times.
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    let mut start = 2.0 * period;
    while start < 3.0 / gamma {
        let (t, v) = linspace(start, start + 0.5 * period, 200)
            .into_iter()
            .map(|t| (t, p_of_t_discrete(&lv, &d.renorm, t).unwrap().abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        ts.push(t);
        logs.push(v.ln());
        start += 0.5 * period;
    }
    let n = ts.len() as f64;
    let (mt, ml) = (ts.iter().sum::<f64>() / n, logs.iter().sum::<f64>() / n);
    let cov: f64 = ts.iter().zip(&logs).map(|(t, l)| (t - mt) * (l - ml)).sum();
    let var: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let rate = -cov / var;
    assert!((rate / gamma - 1.0).abs() < 0.1, "fitted {rate} vs {gamma}");
}

#[test]
fn discrete_level_shift_matches_the_continuum() {
    let bath = BathSpec::new(0.9, 0.05, 0.01).unwrap();
    let r = solve_eta(&bath, &SystemSpec::new(0.1).unwrap()).unwrap();
    let exact = r_quadrature(r.delta_r, &bath, r.delta_r).unwrap();
    let db = discretize(&bath, &r, 2000).unwrap();
    let got = discrete_shift_pv(&db, r.delta_r).unwrap();
    assert!((got / exact - 1.0).abs() < 1e-3, "{got} vs {exact}");
}

#[test]
fn pole_formula_tracks_discrete_dynamics_at_early_times() {
    let bath = BathSpec::new(0.9, 0.05, 0.01).unwrap();
    let d = analyze(&bath, &SystemSpec::new(0.1).unwrap()).unwrap();
    let lv = solve_levels(&discretize(&bath, &d.renorm, 1000).unwrap()).unwrap();
    let t = 1.0 / d.renorm.delta_r;
    let diff = p_of_t_discrete(&lv, &d.renorm, t).unwrap() - p_of_t(t, &d).unwrap();
    assert!(diff.abs() < 0.05);
}

#[test]
fn s_of_omega_peaks_at_the_underdamped_pole() {
    for (s, ws, d) in [(1.0, 1.0, 0.01), (0.8, 0.1, 0.1)] {
        let star = alpha_c_star_numeric(s, ws, d).unwrap();
        let sp = spectrum(s, 0.5 * star, ws, d);
        let wp = sp.pole.unwrap();
        assert!(sp.damping(wp) < wp);
        let peaks = sp.s_peaks().unwrap();
        let nearest = peaks
            .iter()
            .map(|p| p.0)
            .min_by(|a, b| (a - wp).abs().total_cmp(&(b - wp).abs()))
            .unwrap();
        assert!((nearest / wp - 1.0).abs() < 0.2, "s {s}: peaks {peaks:?}, pole {wp}");
    }
}

#[test]
fn ohmic_finite_delta_formula_matches_the_numeric_boundary() {
    for delta in [1e-3, 1e-2, 0.1] {
        let (closed, _) = alpha_c_ohmic_finite(delta).unwrap();
        let numeric = alpha_c_numeric(1.0, 1.0, delta).unwrap();
        assert!((closed - numeric).abs() < 1e-2, "delta {delta}: {closed} vs {numeric}");
    }
}

#[test]
fn numeric_alpha_c_approaches_the_scaling_form() {
    for (s, ws) in [(0.5, 1.0), (0.8, 0.01)] {
        for delta in [1e-4, 1e-3] {
            let numeric = alpha_c_numeric(s, ws, delta).unwrap();
            let bath = BathSpec::new(s, numeric, ws).unwrap();
            let dr = solve_eta(&bath, &SystemSpec::new(delta).unwrap()).unwrap().delta_r;
            let scaling = alpha_c_scaling(s, ws, dr).unwrap();
            assert!((numeric / scaling - 1.0).abs() < 0.05, "s {s} delta {delta}: {numeric} vs {scaling}");
        }
    }
}

#[test]
fn boundaries_are_ordered_and_increase_with_tunneling() {
    for (s, ws) in [(0.5, 1.0), (0.8, 0.01), (1.0, 1.0)] {
        let points: Vec<_> = logspace(1e-3, 1e-1, 5).into_iter().map(|d| phase_point(s, ws, d)).collect();
        for p in &points {
            assert!(p.failures.is_empty(), "{:?}", p.failures);
            let (l, c, star) = (p.alpha_l.unwrap(), p.alpha_c.unwrap(), p.alpha_c_star.unwrap());
            assert!(star < c && c < l, "s {s} delta {}: {star} {c} {l}", p.delta);
        }
        for w in points.windows(2) {
            assert!(w[1].alpha_c.unwrap() > w[0].alpha_c.unwrap());
            assert!(w[1].alpha_c_star.unwrap() > w[0].alpha_c_star.unwrap());
            if s < 1.0 {
                assert!(w[1].alpha_l.unwrap() > w[0].alpha_l.unwrap());
            }
        }
    }
}

#[test]
fn alpha_l_marks_the_end_of_the_delocalized_branch() {
    let (s, ws, d) = (0.5, 1.0, 0.05);
    let al = alpha_l(s, ws, d).unwrap();
    let sys = SystemSpec::new(d).unwrap();
    let below = solve_eta(&BathSpec::new(s, 0.99 * al, ws).unwrap(), &sys).unwrap();
    let above = solve_eta(&BathSpec::new(s, 1.01 * al, ws).unwrap(), &sys).unwrap();
    assert!(below.is_delocalized() && !above.is_delocalized());
}
