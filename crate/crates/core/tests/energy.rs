use planedual::elimination::{plane_dual_discriminant, PlaneCurve};
use planedual::energy::linalg::{cross, inverse, mat_vec, norm_sq, transpose};
use planedual::energy::verify::{cocycle_defect, dual_cocycle_defect, random_gl3, random_sl3, tangency_defect};
use planedual::energy::{
    bergman_potential, dual_degree_check, energies, fs_density, fs_density_ratio, gauss_map, identity, psi_b,
    psi_b_pullback, psi_f, ricci_integral, volume, Mat3, QuadratureGrid, C,
};
use planedual::poly::FloatGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(d: u32, res: u32) -> (PlaneCurve, QuadratureGrid) {
    let c = PlaneCurve::fermat(d).certified().unwrap();
    let g = QuadratureGrid::build(&c, res, 1).unwrap();
    (c, g)
}

fn diag(a: f64, b: f64, c: f64) -> Mat3 {
    let z = C::new(0.0, 0.0);
    [[C::new(a, 0.0), z, z], [z, C::new(b, 0.0), z], [z, z, C::new(c, 0.0)]]
}

fn random_vec(rng: &mut ChaCha8Rng) -> [C; 3] {
    [0, 1, 2].map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn float_group(m: &Mat3) -> FloatGroup {
    FloatGroup::from_rows(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn diagonal_potential_at_coordinate_point() {
    let t: f64 = 0.37;
    let z = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
    assert!((bergman_potential(&diag(t, 1.0, 1.0 / t), &z) - (t * t).ln()).abs() < 1e-14);
}

#[test]
fn cocycles_hold_to_roundoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = random_gl3(4, 6);
    for w in g.windows(2) {
        for _ in 0..10 {
            let z = random_vec(&mut rng);
            let (s, t) = (&w[0].sigma, &w[1].sigma);
            assert!(cocycle_defect(s, t, &z).abs() < 1e-10);
            assert!(dual_cocycle_defect(s, t, &z).abs() < 1e-10);
        }
    }
}

#[test]
fn gauss_map_is_equivariant() {
    let (c, g) = grid(3, 64);
    let f = c.f.to_float();
    for p in random_sl3(2, 4, 2.0) {
        let moved = float_group(&p.sigma).act_on_point_poly(&f).unwrap();
        let inv_t = transpose(&inverse(&p.sigma));
        for s in g.base_samples().iter().step_by(7).take(20) {
            let z = g.z_lift(s);
            let lhs = gauss_map(&moved, &mat_vec(&p.sigma, &z)).unwrap();
            let rhs = mat_vec(&inv_t, &gauss_map(&f, &z).unwrap());
            let rel = norm_sq(&cross(&lhs, &rhs)).sqrt() / (norm_sq(&lhs) * norm_sq(&rhs)).sqrt();
            assert!(rel < 1e-9, "relative error {rel}");
        }
    }
}

#[test]
fn psi_of_fermat_conic_is_log_four() {
    let (c, g) = grid(2, 32);
    let f = c.f.to_float();
    for s in g.base_samples().iter().take(50) {
        assert!((psi_f(&f, &g.z_lift(s)).unwrap() - 4f64.ln()).abs() < 1e-12);
    }
}

#[test]
fn density_ratio_identity_and_swap_symmetry() {
    let (_, g) = grid(2, 32);
    let t = 0.4;
    let (a, b) = (diag(t, 1.0, 1.0 / t), diag(1.0 / t, 1.0, t));
    for s in g.base_samples().iter().take(50) {
        assert!((fs_density_ratio(&g, &identity(), s) - 1.0).abs() < 1e-12);
        let (z, zp) = (g.z_lift(s), g.z_prime(s));
        let swap = |v: [C; 3]| [v[2], v[1], v[0]];
        let ratio = |m: &Mat3, z: &[C; 3], zp: &[C; 3]| fs_density(&mat_vec(m, z), &mat_vec(m, zp)) / fs_density(z, zp);
        let r1 = ratio(&a, &z, &zp);
        let r2 = ratio(&b, &swap(z), &swap(zp));
        assert!((r1 - r2).abs() < 1e-10 * r1.abs().max(1.0));
    }
}

#[test]
fn calibration_integrals() {
    for d in 2..=4u32 {
        let (_, g) = grid(d, 256);
        let df = d as f64;
        let v = volume(&g);
        assert!((v.value - df).abs() < 0.005 * df, "d={d} volume {}", v.value);
        let r = ricci_integral(&g);
        let want = (3.0 - df) * df;
        assert!((r.value - want).abs() < 0.01 * want.abs().max(3.0), "d={d} ricci {}", r.value);
        if d <= 3 {
            let dual = dual_degree_check(&g);
            assert!((dual.value - df * (df - 1.0)).abs() < 0.01 * df * (df - 1.0), "d={d} dual degree {}", dual.value);
        }
    }
}

#[test]
fn refinement_lowers_error_estimate() {
    let (_, coarse) = grid(2, 64);
    let (_, fine) = grid(2, 128);
    assert!(volume(&fine).error <= volume(&coarse).error);
}

#[test]
fn energies_vanish_at_identity() {
    let (_, g) = grid(2, 128);
    let e = energies(&g, &identity()).unwrap();
    for v in [e.j, e.i, e.f0, e.nu, e.e1, e.e1_direct, e.psi_bar, e.phi_mean] {
        assert!(v.abs() < 1e-12, "{e:?}");
    }
}

#[test]
fn aubin_energies_satisfy_i_equals_2j() {
    let (_, g) = grid(2, 256);
    for p in random_sl3(5, 3, 4.0) {
        let e = energies(&g, &p.sigma).unwrap();
        assert!(e.j >= -e.grid_error);
        assert!((e.i - 2.0 * e.j).abs() <= 3.0 * e.grid_error + 1e-8 * e.i.abs(), "{} vs {} err {}", e.i, e.j, e.grid_error);
        assert!((e.e1 - e.e1_direct).abs() < 1e-3 * e.e1.abs().max(1.0));
    }
}

#[test]
fn moved_singular_term_matches_direct_grid() {
    let (c, g) = grid(2, 256);
    let s = random_sl3(3, 1, 1.0).remove(0).sigma;
    let pulled = psi_b_pullback(&g, &s).unwrap().value;
    let moved = float_group(&s).act_on_point_poly(&c.f.to_float()).unwrap();
    let direct = psi_b(&QuadratureGrid::build_float(&moved, 256, 1).unwrap()).value;
    assert!((pulled - direct).abs() < 1e-5 * direct.abs().max(1.0), "{pulled} vs {direct}");
}

#[test]
fn discriminant_vanishes_on_tangent_lines_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in 2..=3 {
        let (c, g) = grid(d, 64);
        let delta = plane_dual_discriminant(&c).unwrap().delta;
        assert!(tangency_defect(&delta, &g, 100) < 1e-8);
        let fd = delta.to_float();
        let scale = fd.fs_norm_sq().sqrt();
        for _ in 0..100 {
            let a = random_vec(&mut rng);
            let v = fd.eval_complex(&a).norm() / (scale * norm_sq(&a).sqrt().powi(fd.degree() as i32));
            assert!(v > 1e-4, "random line looks tangent: {v}");
        }
    }
}
