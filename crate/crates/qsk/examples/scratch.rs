use qsk::expansions::param_map;
use qsk::qcore::cr;
use qsk::quadrature::{verify_integral_corollary, Corollary};

fn main() {
    for &t in &[0.1, 0.25] {
        let ultra = param_map(&[
            ("t", cr(t)),
            ("beta", cr(0.3)),
            ("gamma", cr(0.5)),
            ("q", cr(0.5)),
        ]);
        let stieltjes = param_map(&[("t", cr(t)), ("lambda", cr(0.4)), ("mu", cr(0.7))]);
        for n in 0..=8u32 {
            let a = verify_integral_corollary(Corollary::CqUltraInt, &ultra, n).unwrap();
            let b = verify_integral_corollary(Corollary::GegenStieltjes, &stieltjes, n).unwrap();
            println!(
                "t={t} n={n}  cqultra {:.3e}  stieltjes {:.3e}",
                a.max_rel_residual, b.max_rel_residual
            );
        }
    }
}
