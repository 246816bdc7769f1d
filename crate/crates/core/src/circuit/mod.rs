//! Photonic netlists: couplers and phase shifters over `n` waveguide modes.
//!
//! Elements are listed in the order light meets them, so compiling a netlist
//! multiplies element matrices on the left.

mod decompose;
mod text;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

pub use decompose::decompose;
pub use text::{parse, serialize};

/// A primitive element. Ports are 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Element {
    /// Directional coupler `[[cos θ, i sin θ], [i sin θ, cos θ]]` on two modes;
    /// `θ = π/4` is a 50/50 splitter.
    Coupler { a: usize, b: usize, angle: f64 },
    /// Phase `e^{iφ}` on one mode.
    Phase { port: usize, angle: f64 },
}

impl Element {
    pub fn coupler(a: usize, b: usize, angle: f64) -> Self {
        Element::Coupler { a, b, angle }
    }

    pub fn phase(port: usize, angle: f64) -> Self {
        Element::Phase { port, angle }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            Element::Coupler { angle, .. } | Element::Phase { angle, .. } => angle,
        }
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        let check = |p: usize| {
            if p == 0 || p > n_modes {
                Err(Error::InvalidPort(format!("port {p} outside 1..={n_modes}")))
            } else {
                Ok(())
            }
        };
        if !self.angle().is_finite() {
            return Err(Error::OutOfRange {
                name: "angle",
                value: self.angle(),
                range: "finite",
            });
        }
        match *self {
            Element::Coupler { a, b, .. } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::InvalidPort(format!("coupler ports must differ, got {a} and {b}")));
                }
                Ok(())
            }
            Element::Phase { port, .. } => check(port),
        }
    }

    /// Full `n_modes x n_modes` transfer matrix of this element.
    pub fn matrix(&self, n_modes: usize) -> Result<ComplexMatrix> {
        self.validate(n_modes)?;
        let mut m = ComplexMatrix::identity(n_modes);
        match *self {
            Element::Coupler { a, b, angle } => {
                let (s, c) = angle.sin_cos();
                let (a, b) = (a - 1, b - 1);
                m[(a, a)] = Complex64::new(c, 0.0);
                m[(b, b)] = Complex64::new(c, 0.0);
                m[(a, b)] = Complex64::new(0.0, s);
                m[(b, a)] = Complex64::new(0.0, s);
            }
            Element::Phase { port, angle } => {
                m[(port - 1, port - 1)] = Complex64::from_polar(1.0, angle);
            }
        }
        Ok(m)
    }

    /// Applies the element to the rows of `m` in place (`m ← E · m`).
    fn apply_left(&self, m: &mut ComplexMatrix) {
        match *self {
            Element::Coupler { a, b, angle } => {
                let (s, c) = angle.sin_cos();
                let is = Complex64::new(0.0, s);
                let (a, b) = (a - 1, b - 1);
                for col in 0..m.cols() {
                    let (x, y) = (m[(a, col)], m[(b, col)]);
                    m[(a, col)] = x * c + is * y;
                    m[(b, col)] = is * x + y * c;
                }
            }
            Element::Phase { port, angle } => m.scale_row(port - 1, Complex64::from_polar(1.0, angle)),
        }
    }
}

/// Free-function form of [`Element::matrix`].
pub fn element_matrix(e: &Element, n_modes: usize) -> Result<ComplexMatrix> {
    e.matrix(n_modes)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Netlist {
    n_modes: usize,
    elements: Vec<Element>,
}

impl Netlist {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Config("a netlist needs at least one mode".into()));
        }
        Ok(Self {
            n_modes,
            elements: Vec::new(),
        })
    }

    pub fn with_elements(n_modes: usize, elements: Vec<Element>) -> Result<Self> {
        let mut nl = Self::new(n_modes)?;
        for e in elements {
            nl.push(e)?;
        }
        Ok(nl)
    }

    pub fn push(&mut self, e: Element) -> Result<()> {
        e.validate(self.n_modes)?;
        self.elements.push(e);
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Transfer matrix: `E_last · … · E_first`.
    pub fn compile(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.n_modes);
        for e in &self.elements {
            e.apply_left(&mut m);
        }
        m
    }
}

pub fn compile(nl: &Netlist) -> ComplexMatrix {
    nl.compile()
}

/// The lossy Mach–Zehnder layout on three modes: 50/50 coupler on 1–2,
/// loss coupler on 2–3 with angle `theta`, `π/2` phase on 1, 50/50 coupler
/// on 1–2. Mode 3 is the loss channel.
pub fn lossy_mzi_netlist(theta: f64) -> Result<Netlist> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            range: "[0, π/2]",
        });
    }
    Netlist::with_elements(
        3,
        vec![
            Element::coupler(1, 2, FRAC_PI_4),
            Element::coupler(2, 3, theta),
            Element::phase(1, FRAC_PI_2),
            Element::coupler(1, 2, FRAC_PI_4),
        ],
    )
}
