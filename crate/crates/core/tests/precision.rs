use ncup_core::ncft::{conjecture_audit, PrimeDim};
use ncup_core::uncertainty::{certify, random_audit};
use ncup_core::{AlgebraShape, ModularFrame, ModularFrameF32, ModuleVector, ModuleVectorF32, C};

#[test]
fn single_precision_certifies_the_comb() {
    let shape = AlgebraShape::complex();
    let values: Vec<C<f32>> = [1.0f32, 0.0, 1.0, 0.0].iter().map(|&x| C::new(x, 0.0)).collect();
    let x = ModuleVectorF32::from_complex(&values).unwrap();
    let f = ModularFrameF32::standard(&shape, 4);
    let g = ModularFrameF32::fourier(&shape, 4);
    let cert = certify(&f, &g, &x, 1e-4).unwrap();
    assert_eq!(cert.product_lhs, 4);
    assert!((cert.rhs - 4.0).abs() < 1e-5);
}

#[test]
fn cast_agrees_with_native() {
    let shape = AlgebraShape::new(vec![1, 2]).unwrap();
    let f = ModularFrame::fourier(&shape, 3);
    let x = ModuleVector::basis(&shape, 3, 1);
    let lo = f.cast::<f32>().analysis(&x.cast::<f32>()).unwrap();
    let hi = f.analysis(&x).unwrap();
    for (a, b) in lo.coeffs.iter().zip(&hi.coeffs) {
        assert!((a.cast::<f64>().sub(b).unwrap().norm()) < 1e-6);
    }
}

#[test]
fn single_precision_audits_run_clean() {
    let report = random_audit::<f32>(&AlgebraShape::matrix(2), 2, 3, 3, 50, 1, 1e-4).unwrap();
    assert!(report.clean(), "{} violations", report.violations);
    let conj = conjecture_audit::<f32>(&AlgebraShape::diagonal(2), PrimeDim::new(3).unwrap(), 200, 2).unwrap();
    assert_eq!(conj.delta_sum, 4);
}
