//! Random linear circuits and an independent reference solver.
//!
//! The reference uses the sparse tableau formulation (every element current
//! is an unknown, KCL written explicitly per node) and nalgebra's LU, so it
//! shares neither the MNA stamps nor the solver under test.

#![allow(dead_code)]

use std::collections::HashMap;
use std::fmt::Write;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvKind {
    Cci,
    Ccii { beta: f64 },
    Cccii { beta: f64, ib: f64, vt: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum OElem {
    R {
        a: usize,
        b: usize,
        r: f64,
    },
    V {
        p: usize,
        n: usize,
        v: f64,
    },
    /// Current flows from `p` through the source to `n`.
    I {
        p: usize,
        n: usize,
        i: f64,
    },
    C {
        a: usize,
        b: usize,
        c: f64,
    },
    Conv {
        kind: ConvKind,
        y: usize,
        x: usize,
        z: usize,
        rx: f64,
        ry: Option<f64>,
        rz: Option<f64>,
        alpha: f64,
    },
}

#[derive(Debug, Clone)]
pub struct RandomCircuit {
    /// Non-ground node count; nodes are 1..=nodes, named `n<k>`.
    pub nodes: usize,
    pub elems: Vec<OElem>,
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Indexed by node number, ground included.
    pub v: Vec<f64>,
    /// `I(V1)`, `I(I1)`, `I(U1.X)`, `I(U1.Y)`, `I(U1.Z)`.
    pub currents: HashMap<String, f64>,
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

pub fn node_name(k: usize) -> String {
    if k == 0 {
        "0".into()
    } else {
        format!("n{k}")
    }
}

impl RandomCircuit {
    /// At most 6 nodes, 10 elements and 2 conveyors. Every node has a
    /// resistive path to ground.
    pub fn generate(rng: &mut impl Rng, with_caps: bool) -> Self {
        let nodes = rng.random_range(2..=6usize);
        let mut elems = Vec::new();
        for k in 1..=nodes {
            let other = rng.random_range(0..k);
            elems.push(OElem::R {
                a: k,
                b: other,
                r: log_uniform(rng, 100.0, 1e5),
            });
        }
        let vpos = rng.random_range(1..=nodes);
        elems.push(OElem::V {
            p: vpos,
            n: 0,
            v: rng.random_range(-5.0..5.0),
        });

        let n_conv = rng.random_range(0..=2usize).min(nodes - 1);
        let mut used_x = vec![vpos];
        for _ in 0..n_conv {
            let candidates: Vec<usize> = (1..=nodes).filter(|k| !used_x.contains(k)).collect();
            if candidates.is_empty() {
                break;
            }
            let x = candidates[rng.random_range(0..candidates.len())];
            used_x.push(x);
            let y = loop {
                let y = rng.random_range(0..=nodes);
                if y != x {
                    break y;
                }
            };
            let z = rng.random_range(1..=nodes);
            let beta = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let kind = match rng.random_range(0..3) {
                0 => ConvKind::Cci,
                1 => ConvKind::Ccii { beta },
                _ => ConvKind::Cccii {
                    beta,
                    ib: log_uniform(rng, 1e-6, 1e-3),
                    vt: rng.random_range(0.02..0.03),
                },
            };
            let nonideal = matches!(kind, ConvKind::Ccii { .. }) && rng.random_bool(0.5);
            let (rx, ry, rz, alpha) = if nonideal {
                (
                    log_uniform(rng, 1.0, 1e3),
                    Some(log_uniform(rng, 1e5, 1e8)),
                    Some(log_uniform(rng, 1e4, 1e7)),
                    rng.random_range(0.9..1.0),
                )
            } else {
                (0.0, None, None, 1.0)
            };
            elems.push(OElem::Conv {
                kind,
                y,
                x,
                z,
                rx,
                ry,
                rz,
                alpha,
            });
        }

        while elems.len() < 10 && rng.random_bool(0.6) {
            let a = rng.random_range(1..=nodes);
            let b = rng.random_range(0..=nodes);
            if a == b {
                continue;
            }
            if rng.random_bool(0.3) {
                elems.push(OElem::I {
                    p: a,
                    n: b,
                    i: rng.random_range(-1e-3..1e-3),
                });
            } else if with_caps && rng.random_bool(0.5) {
                elems.push(OElem::C {
                    a,
                    b,
                    c: log_uniform(rng, 1e-9, 1e-6),
                });
            } else {
                elems.push(OElem::R {
                    a,
                    b,
                    r: log_uniform(rng, 100.0, 1e5),
                });
            }
        }
        RandomCircuit { nodes, elems }
    }

    pub fn conveyor_count(&self) -> usize {
        self.elems.iter().filter(|e| matches!(e, OElem::Conv { .. })).count()
    }

    fn names(&self) -> Vec<String> {
        let mut counts: HashMap<char, usize> = HashMap::new();
        self.elems
            .iter()
            .map(|e| {
                let p = match e {
                    OElem::R { .. } => 'R',
                    OElem::V { .. } => 'V',
                    OElem::I { .. } => 'I',
                    OElem::C { .. } => 'C',
                    OElem::Conv { .. } => 'U',
                };
                let k = counts.entry(p).or_insert(0);
                *k += 1;
                format!("{p}{k}")
            })
            .collect()
    }

    /// Netlist with every independent source multiplied by `scale[i]`
    /// (indexed by element position; missing entries mean 1).
    pub fn netlist_scaled(&self, analysis: &str, scale: &dyn Fn(usize) -> f64) -> String {
        let names = self.names();
        let mut out = String::from("random circuit\n");
        for (i, (e, name)) in self.elems.iter().zip(&names).enumerate() {
            let n = node_name;
            let k = scale(i);
            match *e {
                OElem::R { a, b, r } => writeln!(out, "{name} {} {} {r:e}", n(a), n(b)),
                OElem::C { a, b, c } => writeln!(out, "{name} {} {} {c:e}", n(a), n(b)),
                OElem::V { p, n: m, v } => {
                    writeln!(out, "{name} {} {} DC {:e} AC {:e}", n(p), n(m), v * k, v * k)
                }
                OElem::I { p, n: m, i } => {
                    writeln!(out, "{name} {} {} DC {:e} AC {:e}", n(p), n(m), i * k, i * k)
                }
                OElem::Conv {
                    kind,
                    y,
                    x,
                    z,
                    rx,
                    ry,
                    rz,
                    alpha,
                } => {
                    let (kw, params) = match kind {
                        ConvKind::Cci => ("CCI".to_string(), String::new()),
                        ConvKind::Ccii { beta } => {
                            let mut p = String::new();
                            if rx > 0.0 {
                                write!(p, " RX={rx:e}").unwrap();
                            }
                            if let Some(r) = ry {
                                write!(p, " RY={r:e}").unwrap();
                            }
                            if let Some(r) = rz {
                                write!(p, " RZ={r:e}").unwrap();
                            }
                            if alpha != 1.0 {
                                write!(p, " ALPHA={alpha:e}").unwrap();
                            }
                            (format!("CCII{}", if beta > 0.0 { '+' } else { '-' }), p)
                        }
                        ConvKind::Cccii { beta, ib, vt } => (
                            format!("CCCII{}", if beta > 0.0 { '+' } else { '-' }),
                            format!(" IB={ib:e} VT={vt:e}"),
                        ),
                    };
                    writeln!(out, "{kw} {name} {} {} {}{params}", n(y), n(x), n(z))
                }
            }
            .unwrap();
        }
        writeln!(out, "{analysis}").unwrap();
        out
    }

    pub fn netlist(&self) -> String {
        self.netlist_scaled(".OP", &|_| 1.0)
    }

    /// Reference DC solution, or `None` when the equilibrated tableau is
    /// numerically singular (condition number above 1e10).
    pub fn solve_oracle(&self) -> Option<OracleSolution> {
        let names = self.names();
        let n = self.nodes;
        // current unknowns per element
        let mut offset = Vec::new();
        let mut count = n;
        for e in &self.elems {
            offset.push(count);
            count += match e {
                OElem::Conv { .. } => 3,
                _ => 1,
            };
        }
        let mut a = DMatrix::<f64>::zeros(count, count);
        let mut b = DVector::<f64>::zeros(count);
        let vcol = |k: usize| -> Option<usize> { (k > 0).then(|| k - 1) };
        // KCL rows 0..n: currents leaving node k into element terminals
        let kcl = |a: &mut DMatrix<f64>, node: usize, col: usize, sign: f64| {
            if node > 0 {
                a[(node - 1, col)] += sign;
            }
        };
        let mut row = n;
        for (e, &off) in self.elems.iter().zip(&offset) {
            match *e {
                OElem::R { a: p, b: m, r } => {
                    kcl(&mut a, p, off, 1.0);
                    kcl(&mut a, m, off, -1.0);
                    if let Some(c) = vcol(p) {
                        a[(row, c)] += 1.0;
                    }
                    if let Some(c) = vcol(m) {
                        a[(row, c)] -= 1.0;
                    }
                    a[(row, off)] = -r;
                }
                OElem::C { a: p, b: m, .. } => {
                    // open at DC
                    kcl(&mut a, p, off, 1.0);
                    kcl(&mut a, m, off, -1.0);
                    a[(row, off)] = 1.0;
                }
                OElem::V { p, n: m, v } => {
                    kcl(&mut a, p, off, 1.0);
                    kcl(&mut a, m, off, -1.0);
                    if let Some(c) = vcol(p) {
                        a[(row, c)] += 1.0;
                    }
                    if let Some(c) = vcol(m) {
                        a[(row, c)] -= 1.0;
                    }
                    b[row] = v;
                }
                OElem::I { p, n: m, i } => {
                    kcl(&mut a, p, off, 1.0);
                    kcl(&mut a, m, off, -1.0);
                    a[(row, off)] = 1.0;
                    b[row] = i;
                }
                OElem::Conv {
                    kind,
                    y,
                    x,
                    z,
                    rx,
                    ry,
                    rz,
                    alpha,
                } => {
                    let (iy, ix, iz) = (off, off + 1, off + 2);
                    kcl(&mut a, y, iy, 1.0);
                    kcl(&mut a, x, ix, 1.0);
                    kcl(&mut a, z, iz, 1.0);
                    // V(x) - alpha V(y) - rx ix = 0
                    let rx = match kind {
                        ConvKind::Cccii { ib, vt, .. } => vt / (2.0 * ib),
                        _ => rx,
                    };
                    if let Some(c) = vcol(x) {
                        a[(row, c)] += 1.0;
                    }
                    if let Some(c) = vcol(y) {
                        a[(row, c)] -= alpha;
                    }
                    a[(row, ix)] = -rx;
                    row += 1;
                    // Y law
                    a[(row, iy)] = 1.0;
                    match kind {
                        ConvKind::Cci => a[(row, ix)] = -1.0,
                        _ => {
                            if let (Some(r), Some(c)) = (ry, vcol(y)) {
                                a[(row, c)] -= 1.0 / r;
                            }
                        }
                    }
                    row += 1;
                    // Z law: iz = beta ix (+ V(z)/rz)
                    let beta = match kind {
                        ConvKind::Cci => 1.0,
                        ConvKind::Ccii { beta } | ConvKind::Cccii { beta, .. } => beta,
                    };
                    a[(row, iz)] = 1.0;
                    a[(row, ix)] = -beta;
                    if let (Some(r), Some(c)) = (rz, vcol(z)) {
                        a[(row, c)] -= 1.0 / r;
                    }
                }
            }
            row += 1;
        }
        assert_eq!(row, count);

        // Conditioning is judged after row and column equilibration so that
        // mixed units (ohms next to unit KCL coefficients) do not count.
        let mut e = a.clone();
        for mut r in e.row_iter_mut() {
            let m = r.amax();
            if m > 0.0 {
                r /= m;
            }
        }
        for mut c in e.column_iter_mut() {
            let m = c.amax();
            if m > 0.0 {
                c /= m;
            }
        }
        let sv = e.svd(false, false).singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        if smin == 0.0 || smax / smin > 1e10 {
            return None;
        }
        let x = a.full_piv_lu().solve(&b)?;

        let mut v = vec![0.0; n + 1];
        for k in 1..=n {
            v[k] = x[k - 1];
        }
        let mut currents = HashMap::new();
        for ((e, &off), name) in self.elems.iter().zip(&offset).zip(&names) {
            match *e {
                OElem::V { .. } | OElem::I { .. } => {
                    currents.insert(format!("I({name})"), x[off]);
                }
                OElem::Conv { kind, z, rz, .. } => {
                    let beta = match kind {
                        ConvKind::Cci => 1.0,
                        ConvKind::Ccii { beta } | ConvKind::Cccii { beta, .. } => beta,
                    };
                    let ix = x[off + 1];
                    let shunt = rz.map_or(0.0, |r| v[z] / r);
                    currents.insert(format!("I({name}.X)"), ix);
                    currents.insert(format!("I({name}.Y)"), x[off]);
                    currents.insert(format!("I({name}.Z)"), x[off + 2] - shunt);
                    debug_assert!((x[off + 2] - shunt - beta * ix).abs() <= 1e-9 * (1.0 + ix.abs()));
                }
                _ => {}
            }
        }
        Some(OracleSolution { v, currents })
    }
}
