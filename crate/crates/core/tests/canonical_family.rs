use ocl_core::canonical::{canonical, canonical_perimeter, canonical_spec};
use ocl_core::energy::{analyze, decompose_analysis, hr_energy};
use ocl_core::faces::boundary_particles;
use ocl_core::{Configuration, Tolerances};

fn report(n: u64) -> ocl_core::energy::EnergyReport {
    let c: Configuration<f64> = canonical(n);
    let a = analyze(&c, 3f64.sqrt() / 2.0, &Tolerances::default()).unwrap();
    decompose_analysis(&a).unwrap()
}

#[test]
fn perimeter_law_small_n() {
    for n in 0..=600u64 {
        let r = report(n);
        assert_eq!(r.per_gr as u64, canonical_perimeter(n), "n = {n}");
        if n > 0 {
            assert_eq!(r.def_gr, 0, "n = {n}");
            assert_eq!((r.chi, r.chi_euler), (1, 1), "n = {n}");
            assert_eq!(r.energy, -2 * n as i64 + r.per_gr as i64 / 2 + 2, "n = {n}");
        }
    }
}

#[test]
fn inspection_energies() {
    let want = [0, 0, -1, -2, -4, -5, -7, -8];
    for (n, &e) in want.iter().enumerate() {
        assert_eq!(report(n as u64).energy, e, "n = {n}");
    }
    assert_eq!(report(9).energy, -12);
    assert_eq!(report(9).edge_count, 12);
}

#[test]
fn perimeter_is_even_and_nondecreasing() {
    let mut prev = 0;
    for n in 0..5000u64 {
        let p = canonical_perimeter(n);
        assert_eq!(p % 2, 0);
        assert!(p >= prev);
        prev = p;
    }
}

#[test]
fn boundary_of_y9_has_eight_particles() {
    let c: Configuration<f64> = canonical(9);
    let a = analyze(&c, 3f64.sqrt() / 2.0, &Tolerances::default()).unwrap();
    assert_eq!(boundary_particles(&a.graph, &a.classes).len(), 8);
    let y4: Configuration<f64> = canonical(4);
    let a = analyze(&y4, 3f64.sqrt() / 2.0, &Tolerances::default()).unwrap();
    assert_eq!(boundary_particles(&a.graph, &a.classes).len(), 4);
    assert_eq!(hr_energy(&y4, &Tolerances::default()), -5);
}

#[test]
fn density_of_large_rhombus() {
    // n / area(rhombus) -> 2 / sqrt(3)
    let l = 250u64;
    let n = (l + 1) * (l + 1);
    let spec = canonical_spec(n).unwrap();
    assert_eq!(spec.eta, 0);
    let area = (l * l) as f64 * 3f64.sqrt() / 2.0;
    let rel = (n as f64 / area) / (2.0 / 3f64.sqrt()) - 1.0;
    assert!(rel.abs() < 0.01, "relative error {rel}");
}

#[test]
fn f32_matches_f64() {
    for n in [1u64, 5, 9, 23, 50] {
        let c: Configuration<f32> = canonical(n);
        let a = analyze(&c, 3f32.sqrt() / 2.0, &Tolerances::default()).unwrap();
        let r = decompose_analysis(&a).unwrap();
        assert_eq!(r.per_gr as u64, canonical_perimeter(n));
        assert_eq!(r.energy, report(n).energy);
    }
}
