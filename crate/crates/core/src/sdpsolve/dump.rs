//! Sparse text dump of a conic program for cross-checking against external
//! solvers.
//!
//! Line-oriented format, version 1:
//!
//! ```text
//! conicdump 1
//! sense min|max|feasibility
//! blocks <count>
//! block <index> <hermitian-size>
//! free <count>
//! obj block <b> <i> <j> <re> <im>      # upper triangle i ≤ j, nonzeros
//! obj free <k> <value>
//! constraints <count>
//! con <idx> rhs <value>
//! con <idx> block <b> <i> <j> <re> <im>
//! con <idx> free <k> <value>
//! end
//! ```
//!
//! Entries with `i < j` imply the conjugate-transposed mirror entry; indices
//! are 0-based. Floats are printed in the shortest form that parses back to
//! the same value.

use std::fmt::Write as _;

use super::{ConicProgram, Sense};

pub fn dump_program(p: &ConicProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "conicdump 1");
    let sense = match p.sense {
        Sense::Min => "min",
        Sense::Max => "max",
        Sense::Feasibility => "feasibility",
    };
    let _ = writeln!(out, "sense {sense}");
    let _ = writeln!(out, "blocks {}", p.blocks.len());
    for (b, &d) in p.blocks.iter().enumerate() {
        let _ = writeln!(out, "block {b} {d}");
    }
    let _ = writeln!(out, "free {}", p.num_free());
    for (b, c) in p.objective.iter().enumerate() {
        for i in 0..c.nrows() {
            for j in i..c.ncols() {
                let z = c[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    let _ = writeln!(out, "obj block {b} {i} {j} {} {}", z.re, z.im);
                }
            }
        }
    }
    for (k, &v) in p.free_objective.iter().enumerate() {
        if v != 0.0 {
            let _ = writeln!(out, "obj free {k} {v}");
        }
    }
    let _ = writeln!(out, "constraints {}", p.constraints.len());
    for (idx, row) in p.constraints.iter().enumerate() {
        let _ = writeln!(out, "con {idx} rhs {}", row.rhs);
        for (b, a) in row.mats.iter().enumerate() {
            for i in 0..a.nrows() {
                for j in i..a.ncols() {
                    let z = a[(i, j)];
                    if z.re != 0.0 || z.im != 0.0 {
                        let _ = writeln!(out, "con {idx} block {b} {i} {j} {} {}", z.re, z.im);
                    }
                }
            }
        }
        for (k, &v) in row.free_coeffs.iter().enumerate() {
            if v != 0.0 {
                let _ = writeln!(out, "con {idx} free {k} {v}");
            }
        }
    }
    let _ = writeln!(out, "end");
    out
}
