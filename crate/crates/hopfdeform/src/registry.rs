//! Built-in configurations for the worked examples.

use crate::config::RunConfig;

pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    json: &'static str,
}

impl Example {
    pub fn config(&self) -> RunConfig {
        RunConfig::from_json(self.json).expect("built-in config parses")
    }
}

const OSCILLATOR: &str = r#"{
  "instance": {"type": "symmetric_star", "generators": ["x", "xstar"], "involution": [["x", "xstar"]]},
  "cocycle": {"type": "primitive_bilinear", "m": [[[0, 0], [0.5, 0]], [[-0.5, 0], [0, 0]]]},
  "witness": {"type": "trivializing"},
  "star": true,
  "t_grid": [-1, -0.5, 0, 0.5, 1],
  "seed": 1,
  "evaluations": [
    {"op": "commutator", "t": 1, "a": [{"key": "x"}], "b": [{"key": "xstar"}]},
    {"op": "mul", "t": 1, "a": [{"key": "x"}], "b": [{"key": "xstar"}]},
    {"op": "mul", "t": 1, "a": [{"key": "xstar"}], "b": [{"key": "x"}]},
    {"op": "sigma", "a": [{"key": "x*xstar"}]},
    {"op": "antipode", "t": 1, "a": [{"key": "x^2*xstar"}]}
  ]
}"#;

const OSCILLATOR_SYMMETRIC: &str = r#"{
  "instance": {"type": "symmetric_star", "generators": ["x", "xstar"], "involution": [["x", "xstar"]]},
  "cocycle": {"type": "primitive_bilinear", "m": [[[0, 0], [0.5, 0]], [[0.5, 0], [0, 0]]]},
  "witness": {"type": "trivializing"},
  "star": true,
  "seed": 2,
  "evaluations": [
    {"op": "mul", "t": 1, "a": [{"key": "x"}], "b": [{"key": "xstar"}]},
    {"op": "commutator", "t": 1, "a": [{"key": "x"}], "b": [{"key": "xstar"}]},
    {"op": "split", "a": [{"key": "x"}], "b": [{"key": "xstar"}]}
  ]
}"#;

const Z_CUBIC: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 1},
  "cocycle": {"type": "z_polynomial", "terms": [{"p": 2, "q": 1, "c": [1, 0]}, {"p": 1, "q": 2, "c": [1, 0]}]},
  "witness": {"type": "z_polynomial", "terms": [{"p": 3, "c": [-0.3333333333333333, 0]}]},
  "sampler": {"coord_bound": 3},
  "seed": 3,
  "evaluations": [
    {"op": "mul", "t": 1, "a": [{"key": [1]}], "b": [{"key": [1]}]},
    {"op": "generator", "a": [{"key": [1]}], "b": [{"key": [2]}]},
    {"op": "sigma", "a": [{"key": [4]}]},
    {"op": "antipode", "t": 1, "a": [{"key": [4]}]},
    {"op": "phi", "t": 0.5, "a": [{"key": [2]}]},
    {"op": "split", "a": [{"key": [1]}], "b": [{"key": [2]}]}
  ]
}"#;

const Z_CUBIC_EXPR: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 1},
  "cocycle": {"type": "grouplike_table", "expression": "m^2*n + m*n^2"},
  "witness": {"type": "grouplike_table", "expression": "-k^3/3"},
  "sampler": {"coord_bound": 3},
  "seed": 4,
  "command": "split",
  "evaluations": [
    {"op": "split", "a": [{"key": [2]}], "b": [{"key": [-1]}]}
  ]
}"#;

const ZD_MATRIX: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 2},
  "cocycle": {"type": "zd_matrix", "a": [[[1, 0], [2, 0]], [[0, 0], [-1, 0]]]},
  "sampler": {"coord_bound": 3},
  "seed": 5,
  "evaluations": [
    {"op": "sigma", "a": [{"key": [1, 1]}]},
    {"op": "antipode", "t": 0.5, "a": [{"key": [1, 1]}]},
    {"op": "split", "a": [{"key": [1, 0]}], "b": [{"key": [0, 1]}]}
  ]
}"#;

const ZD_ANTISYMMETRIC: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 2},
  "cocycle": {"type": "zd_matrix", "a": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]]},
  "sampler": {"coord_bound": 3},
  "seed": 6,
  "evaluations": [
    {"op": "sigma", "a": [{"key": [2, -1]}]},
    {"op": "antipode", "t": 1, "a": [{"key": [2, -1]}]}
  ]
}"#;

const ZD_SYMMETRIC: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 2},
  "cocycle": {"type": "zd_matrix", "a": [[[2, 0], [1, 0]], [[1, 0], [-1, 0]]]},
  "sampler": {"coord_bound": 3},
  "seed": 7,
  "command": "split",
  "evaluations": [
    {"op": "split", "a": [{"key": [1, 0]}], "b": [{"key": [0, 1]}]}
  ]
}"#;

const GROUP_HERMITIAN: &str = r#"{
  "instance": {"type": "group_algebra_zd", "d": 2},
  "cocycle": {"type": "zd_matrix", "a": [[[0.5, 0], [0.25, 0.25]], [[0.25, -0.25], [-0.5, 0]]]},
  "star": true,
  "sampler": {"coord_bound": 3},
  "seed": 8,
  "evaluations": [
    {"op": "split", "a": [{"key": [1, 0]}], "b": [{"key": [0, 1]}]},
    {"op": "sigma", "a": [{"key": [1, 1]}]}
  ]
}"#;

const SWEEDLER_ZERO: &str = r#"{
  "instance": {"type": "sweedler_h4"},
  "cocycle": {"type": "zero"},
  "seed": 9,
  "evaluations": [
    {"op": "mul", "t": 1, "a": [{"key": "g"}], "b": [{"key": "x"}]},
    {"op": "antipode", "t": 1, "a": [{"key": "gx"}]}
  ]
}"#;

pub const EXAMPLES: &[Example] = &[
    Example {
        name: "oscillator",
        description: "C[x,x*] with L(x,x*) = -L(x*,x) = 1/2; [x,x*]_1 = 1",
        json: OSCILLATOR,
    },
    Example {
        name: "oscillator-symmetric",
        description: "C[x,x*] with a symmetric primitive L, trivialized by the PBW functional",
        json: OSCILLATOR_SYMMETRIC,
    },
    Example {
        name: "z-cubic",
        description: "CZ with L(m,n) = m^2 n + m n^2 = d psi, psi(k) = -k^3/3",
        json: Z_CUBIC,
    },
    Example {
        name: "z-cubic-expr",
        description: "the cubic cocycle written as an expression, split command",
        json: Z_CUBIC_EXPR,
    },
    Example {
        name: "zd-matrix",
        description: "CZ^2 with L(k,l) = k A l^T for a non-symmetric A",
        json: ZD_MATRIX,
    },
    Example {
        name: "zd-antisymmetric",
        description: "CZ^2 with antisymmetric A, sigma = 0",
        json: ZD_ANTISYMMETRIC,
    },
    Example {
        name: "zd-symmetric",
        description: "CZ^2 with symmetric A, L2 = 0",
        json: ZD_SYMMETRIC,
    },
    Example {
        name: "group-hermitian",
        description: "CZ^2 with hermitian A, purely imaginary L2",
        json: GROUP_HERMITIAN,
    },
    Example {
        name: "sweedler-zero",
        description: "Sweedler's four-dimensional Hopf algebra with L = 0",
        json: SWEEDLER_ZERO,
    },
];

pub fn find(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

/// One line per example.
pub fn list() -> String {
    let width = EXAMPLES.iter().map(|e| e.name.len()).max().unwrap_or(0);
    EXAMPLES
        .iter()
        .map(|e| format!("{:<w$}  {}\n", e.name, e.description, w = width))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_parses_and_round_trips() {
        for e in EXAMPLES {
            let cfg = e.config();
            assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg, "{}", e.name);
        }
    }

    #[test]
    fn listing_names_the_required_examples() {
        let l = list();
        for n in ["oscillator", "z-cubic", "zd-matrix", "group-hermitian"] {
            assert!(l.contains(n));
        }
    }
}
