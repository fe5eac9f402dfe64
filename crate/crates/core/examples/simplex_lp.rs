//! Build a small LP, solve it with the bundled simplex and print it in LP format.

use lazyplan::lp::{to_lp_format, LpModel, LpSolver, Objective, RowCmp, Simplex};

fn main() {
    let mut m = LpModel::new();
    let x = m.add_var("x", 0.0, f64::INFINITY);
    let y = m.add_var("y", 0.0, 4.0);
    m.add_row("cap", &[(x, 1.0), (y, 1.0)], RowCmp::Le, 6.0);
    m.add_row("mix", &[(x, 1.0), (y, -2.0)], RowCmp::Ge, -3.0);
    m.objective = Some(Objective::maximize(vec![(x, 3.0), (y, 2.0)]));
    print!("{}", to_lp_format(&m));

    let s = Simplex::default().solve(&m).expect("solver");
    println!("{} objective={} x={} y={}", s.status, s.objective, s.values[x], s.values[y]);

    // same constraints, other objectives
    let objs = [Objective::minimize(vec![(x, 1.0)]), Objective::maximize(vec![(y, 1.0)])];
    for (o, s) in objs.iter().zip(Simplex::default().solve_many(&m, &objs).expect("solver")) {
        println!("{:?}: {} {}", o.sense, s.status, s.objective);
    }
}
