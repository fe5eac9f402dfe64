//! Seeded generators for the benchmark families and for small random domains.

mod carpool;
mod generator;
mod micro;
mod pump;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use carpool::gen_carpool;
pub use generator::{gen_generator, gen_generator_capped};
pub use micro::gen_micro;
pub use pump::gen_pump;

/// Domain and problem text of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub domain: String,
    pub problem: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Carpool,
    Pump,
    Generator,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Carpool => "carpool",
            Family::Pump => "pump",
            Family::Generator => "generator",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "carpool" => Ok(Family::Carpool),
            "pump" => Ok(Family::Pump),
            "generator" => Ok(Family::Generator),
            _ => Err(format!("unknown family `{s}` (carpool, pump, generator)")),
        }
    }
}

/// Size parameters per family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Carpool { trips: usize, cars: usize, locations: usize },
    Pump { pumps: usize, processes: usize, tasks: usize },
    Generator { tanks: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub size: Size,
    pub seed: u64,
}

impl GenSpec {
    pub fn family(&self) -> Family {
        match self.size {
            Size::Carpool { .. } => Family::Carpool,
            Size::Pump { .. } => Family::Pump,
            Size::Generator { .. } => Family::Generator,
        }
    }

    /// Instance `k` (1-based) of a family's size ladder.
    pub fn ladder(family: Family, k: usize, seed: u64) -> GenSpec {
        let k = k.max(1);
        let size = match family {
            Family::Carpool => Size::Carpool { trips: k, cars: 1 + (k - 1) / 6, locations: 100 },
            // 1/2/1 at the bottom, 4/16/25 at instance 20
            Family::Pump => Size::Pump {
                pumps: 1 + (k - 1) * 3 / 19,
                processes: 2 + (k - 1) * 14 / 19,
                tasks: 1 + (k - 1) * 24 / 19,
            },
            Family::Generator => Size::Generator { tanks: k },
        };
        GenSpec { size, seed }
    }

    pub fn generate(&self) -> Generated {
        match self.size {
            Size::Carpool { trips, cars, locations } => gen_carpool(trips, cars, locations, self.seed),
            Size::Pump { pumps, processes, tasks } => gen_pump(pumps, processes, tasks, self.seed),
            Size::Generator { tanks } => gen_generator(tanks, self.seed),
        }
    }
}

/// Writes `<family>-<n>-domain.pddl` and `<family>-<n>-problem.pddl` into `dir`.
pub fn write_instance(dir: &Path, family: Family, n: usize, g: &Generated) -> io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let d = dir.join(format!("{}-{n}-domain.pddl", family.name()));
    let p = dir.join(format!("{}-{n}-problem.pddl", family.name()));
    fs::write(&d, &g.domain)?;
    fs::write(&p, &g.problem)?;
    Ok((d, p))
}

/// Formats a float so the parser reads it back exactly.
pub(crate) fn num(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::load;

    #[test]
    fn ladders_hit_both_ends() {
        assert_eq!(GenSpec::ladder(Family::Carpool, 1, 0).size, Size::Carpool { trips: 1, cars: 1, locations: 100 });
        assert_eq!(GenSpec::ladder(Family::Carpool, 20, 0).size, Size::Carpool { trips: 20, cars: 4, locations: 100 });
        assert_eq!(GenSpec::ladder(Family::Pump, 1, 0).size, Size::Pump { pumps: 1, processes: 2, tasks: 1 });
        assert_eq!(GenSpec::ladder(Family::Pump, 20, 0).size, Size::Pump { pumps: 4, processes: 16, tasks: 25 });
    }

    #[test]
    fn same_spec_same_bytes() {
        for f in [Family::Carpool, Family::Pump, Family::Generator] {
            let a = GenSpec::ladder(f, 3, 11).generate();
            let b = GenSpec::ladder(f, 3, 11).generate();
            assert_eq!(a, b);
        }
        assert_ne!(gen_carpool(3, 1, 100, 1), gen_carpool(3, 1, 100, 2));
    }

    #[test]
    fn every_ladder_instance_grounds() {
        for f in [Family::Carpool, Family::Pump, Family::Generator] {
            for k in [1, 5, 20] {
                let g = GenSpec::ladder(f, k, 1).generate();
                load(&g.domain, &g.problem).unwrap_or_else(|e| panic!("{} {k}: {e}", f.name()));
            }
        }
    }

    #[test]
    fn writes_named_files() {
        let dir = tempfile::tempdir().unwrap();
        let g = gen_generator(1, 0);
        let (d, p) = write_instance(dir.path(), Family::Generator, 1, &g).unwrap();
        assert!(d.ends_with("generator-1-domain.pddl") && p.ends_with("generator-1-problem.pddl"));
        assert_eq!(fs::read_to_string(p).unwrap(), g.problem);
    }
}
