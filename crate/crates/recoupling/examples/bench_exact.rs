use recoupling::recoupling_exact::{character_exact_sum, threej_exact, wigner_small_d_exact};
use recoupling::{EulerRotation, HalfInt, Spin};
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let g = EulerRotation::new(0.3, 1.2, -0.5).unwrap();
    let mut n = 0;
    for tj in 1..=100u32 {
        let _ = character_exact_sum(Spin::from_twice(tj), &g);
        n += tj + 1;
    }
    println!("{} diag evals in {:?} ({:?}/eval)", n, t.elapsed(), t.elapsed() / n);
    let t = Instant::now();
    for _ in 0..20 {
        let _ = wigner_small_d_exact(Spin::from_twice(320), HalfInt::from_twice(64), HalfInt::from_twice(-32), 1.3).unwrap();
    }
    println!("J=160 d: {:?}", t.elapsed() / 20);
    let t = Instant::now();
    for _ in 0..20 {
        let _ = threej_exact([800, 700, 600].map(Spin::from_twice), [100, -300, 200].map(HalfInt::from_twice));
    }
    println!("3j J~400: {:?}", t.elapsed() / 20);
}
