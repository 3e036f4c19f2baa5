use serde::Serialize;

use super::{Ensemble, EosReport, Regime, Statistics, HIGH_T_LIMIT};
use crate::error::{Error, Result};
use crate::spectrum::{check_quasi_neumann, BoundaryCondition, BoundaryPair, BoxSystem};

/// Rectangular box with the symmetric Robin pair on every pair of opposite faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Box3System {
    lengths: [f64; 3],
    mass: f64,
    hbar: f64,
    wall: BoundaryCondition,
}

impl Box3System {
    pub fn new(
        lx: f64,
        ly: f64,
        lz: f64,
        mass: f64,
        hbar: f64,
        wall: BoundaryCondition,
    ) -> Result<Self> {
        let lengths = [lx, ly, lz];
        for &l in &lengths {
            // validates every axis, including the quasi-Neumann restriction
            BoxSystem::new(l, mass, hbar, BoundaryPair::SymmetricRobin(wall))?;
            check_quasi_neumann(wall, l)?;
        }
        Ok(Box3System {
            lengths,
            mass,
            hbar,
            wall,
        })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Area of the face normal to `axis`.
    pub fn cross_section(&self, axis: usize) -> f64 {
        self.volume() / self.lengths[axis]
    }

    /// The one-dimensional box along `axis`.
    pub fn axis_system(&self, axis: usize) -> BoxSystem {
        BoxSystem::new(
            self.lengths[axis],
            self.mass,
            self.hbar,
            BoundaryPair::SymmetricRobin(self.wall),
        )
        .expect("validated on construction")
    }

    /// Copy with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let [lx, ly, lz] = self.lengths;
        Self::new(
            lx * factor,
            ly * factor,
            lz * factor,
            self.mass,
            self.hbar,
            self.wall,
        )
    }

    /// `E = κ Σ (n_i - 1)²/l_i² - 2ν Σ 1/l_i` for quantum numbers `n_i ≥ 1`.
    pub fn approx_energy(&self, quantum_numbers: [usize; 3]) -> Result<f64> {
        let mut energy = 0.0;
        for (axis, &n) in quantum_numbers.iter().enumerate() {
            if n == 0 {
                return Err(Error::InvalidParameter("quantum numbers start at 1".into()));
            }
            let s = self.axis_system(axis);
            let l = self.lengths[axis];
            energy += s.kappa() * ((n - 1) as f64).powi(2) / (l * l) - 2.0 * s.nu() / l;
        }
        Ok(energy)
    }
}

/// Per-axis `(p_i + 2NνS_i/V²)(V + S_i√(βκ/π)) = N/β` for a classical gas.
pub fn eos_3d(system: &Box3System, ensemble: &Ensemble) -> Result<[EosReport; 3]> {
    if ensemble.statistics != Statistics::MaxwellBoltzmann {
        return Err(Error::UnsupportedRegime(
            "the three-dimensional box is treated for Maxwell-Boltzmann statistics only".into(),
        ));
    }
    let n = ensemble.particles;
    let beta = ensemble.beta;
    let volume = system.volume();
    let mut reports = Vec::with_capacity(3);
    for axis in 0..3 {
        let s1 = system.axis_system(axis);
        let alpha = beta * s1.kappa() / (s1.length() * s1.length());
        if alpha >= HIGH_T_LIMIT {
            return Err(Error::UnsupportedRegime(format!(
                "axis {axis}: βκ/l² = {alpha} is not below {HIGH_T_LIMIT}"
            )));
        }
        let area = system.cross_section(axis);
        let shift = (beta * s1.kappa() / std::f64::consts::PI).sqrt();
        let force = 2.0 * n * s1.nu() * area / (volume * volume);
        reports.push(EosReport::solve(
            n / beta,
            force,
            volume,
            area * shift,
            Regime::HighTemperature,
            1.0,
        ));
    }
    Ok([reports[0], reports[1], reports[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statmech::eos_report;
    use approx::assert_relative_eq;

    #[test]
    fn cube_is_isotropic() {
        let b = Box3System::new(
            2.0,
            2.0,
            2.0,
            1.0,
            1.0,
            BoundaryCondition::robin(0.1).unwrap(),
        )
        .unwrap();
        let r = eos_3d(&b, &Ensemble::maxwell_boltzmann(10.0, 0.01).unwrap()).unwrap();
        assert_eq!(r[0].pressure, r[1].pressure);
        assert_eq!(r[1].pressure, r[2].pressure);
    }

    #[test]
    fn axis_pressure_is_one_dimensional_pressure_per_area() {
        let b = Box3System::new(
            1.0,
            2.0,
            3.0,
            1.0,
            1.0,
            BoundaryCondition::robin(-0.2).unwrap(),
        )
        .unwrap();
        let e = Ensemble::maxwell_boltzmann(4.0, 0.02).unwrap();
        let r = eos_3d(&b, &e).unwrap();
        for axis in 0..3 {
            let one_d = eos_report(&b.axis_system(axis), &e).unwrap();
            assert_relative_eq!(
                r[axis].pressure * b.cross_section(axis),
                one_d.pressure,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn anisotropic_box_pushes_differently() {
        let b = Box3System::new(
            1.0,
            2.0,
            3.0,
            1.0,
            1.0,
            BoundaryCondition::robin(0.3).unwrap(),
        )
        .unwrap();
        let r = eos_3d(&b, &Ensemble::maxwell_boltzmann(4.0, 0.02).unwrap()).unwrap();
        assert!(r[0].pressure != r[1].pressure && r[1].pressure != r[2].pressure);
    }

    #[test]
    fn energy_model() {
        let b = Box3System::new(
            1.0,
            2.0,
            4.0,
            1.0,
            1.0,
            BoundaryCondition::robin(0.1).unwrap(),
        )
        .unwrap();
        let kappa = b.axis_system(0).kappa();
        let e = b.approx_energy([2, 1, 3]).unwrap();
        assert_relative_eq!(
            e,
            kappa * (1.0 + 4.0 / 16.0) - 0.2 * (1.0 + 0.5 + 0.25),
            max_relative = 1e-14
        );
        assert!(Box3System::new(
            1.0,
            20.0,
            1.0,
            1.0,
            1.0,
            BoundaryCondition::robin(0.1).unwrap()
        )
        .is_err());
    }
}
