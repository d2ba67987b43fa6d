use rieszlab_core::multi_index::MultiIndex;
use rieszlab_core::operators::{PExp, PotentialSpec};
use rieszlab_core::sparse::{charfun_closed_from_field, charfun_monte_carlo, potential_field, AmplitudeDist, PoissonConfig};
use rieszlab_core::verification::TestFunction;
use rieszlab_core::Grid;

fn main() {
    let grid = Grid::new(1, 20.0, 4096).unwrap();
    let f = TestFunction::BumpPsi { index: MultiIndex(vec![0]) }.sample(grid).unwrap();
    let spec = PotentialSpec::new(0.5, PExp::Finite(1.0), 1).unwrap();
    let g = potential_field(&f, &spec).unwrap();
    for seed in [7u64, 5, 12, 21, 42] {
        let cfg = PoissonConfig::new(1.0, 20.0, 1, AmplitudeDist::Deterministic { a0: 1.0 }, seed).unwrap();
        for (t, m) in [(2.0, 10_000usize), (2.0, 40_000)] {
            let closed = charfun_closed_from_field(&g, t, &cfg);
            let mc = charfun_monte_carlo(&f, &spec, t, &cfg, m).unwrap();
            let diff = (closed - mc.value()).norm();
            println!("seed={seed} t={t} M={m}: diff={diff:.5e} 3se={:.5e} ratio={:.2}", 3.0*mc.stderr, diff/(3.0*mc.stderr));
        }
    }
}
