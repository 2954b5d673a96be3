//! Trap characterisation: Hessian, eigenmodes, geometric factors, hotspot.

use crate::config::TrapConfig;
use crate::equilibrium::find_equilibrium;
use crate::potential::potential_energy_with;
use crate::TrapError;
use fluxtrap_magnetics::{field_jacobian, Assembly, Vec3, MU_0};
use fluxtrap_numerics::eigen_symmetric_3x3;

use std::f64::consts::PI;

/// Finite-difference step for the potential Hessian, m.
const HESSIAN_STEP: f64 = 1e-6;

/// Radial standoff of the hotspot probe ring from the bore wall, m. The
/// filament model is singular on the sheet itself; a fixed standoff
/// makes the hotspot well defined and reproducible.
const HOTSPOT_STANDOFF: f64 = 10e-6;

/// Azimuthal samples on each hotspot probe ring.
const HOTSPOT_SAMPLES: usize = 720;

/// Everything the trap analysis produces at one operating point.
#[derive(Clone, Debug)]
pub struct TrapCharacterization {
    /// Equilibrium position, m.
    pub equilibrium: Vec3,
    /// Hessian of the potential at the equilibrium, J/m^2.
    pub hessian: [[f64; 3]; 3],
    /// Mode frequencies labelled by the dominant axis of each
    /// eigenvector: `frequencies[0]` is the x-like mode, etc. Hz.
    pub frequencies: [f64; 3],
    /// Unit eigenvectors in the same axis-labelled order.
    pub mode_axes: [Vec3; 3],
    /// Directional rate of change of |B| along each lab axis at the
    /// equilibrium (Jacobian column norms), T/m.
    pub gradients: [f64; 3],
    /// Dimensionless geometric factors: zeta_i = grad_i |B| * r2^2 /
    /// (mu0 * N * I), with N * I the mean ampere-turns of the two drives.
    pub zetas: [f64; 3],
    /// Largest |B| on the hotspot probe rings around each core's bore
    /// edge (see [`hotspot_field`]), T.
    pub b_hot: f64,
}

impl TrapCharacterization {
    /// Summary as a key=value text block.
    pub fn key_value_report(&self) -> String {
        use fluxtrap_magnetics::format_exp9 as fmt;
        let mut s = String::from(
            "# zeta_i = grad_i|B|(r0) * r2^2 / (mu0 * turns * mean_current)\n",
        );
        s.push_str(&format!(
            "equilibrium_x_m={}\nequilibrium_y_m={}\nequilibrium_z_m={}\n",
            fmt(self.equilibrium.x),
            fmt(self.equilibrium.y),
            fmt(self.equilibrium.z)
        ));
        for (name, i) in [("x", 0), ("y", 1), ("z", 2)] {
            s.push_str(&format!("f{name}_hz={}\n", fmt(self.frequencies[i])));
        }
        for (name, i) in [("x", 0), ("y", 1), ("z", 2)] {
            s.push_str(&format!("grad{name}_T_per_m={}\n", fmt(self.gradients[i])));
        }
        for (name, i) in [("x", 0), ("y", 1), ("z", 2)] {
            s.push_str(&format!("zeta_{name}={}\n", fmt(self.zetas[i])));
        }
        s.push_str(&format!("bhot_T={}\n", fmt(self.b_hot)));
        s
    }
}

/// Characterise the trap at its equilibrium point.
pub fn characterize(cfg: &TrapConfig) -> Result<TrapCharacterization, TrapError> {
    let r0 = find_equilibrium(cfg)?;
    let assembly = cfg.assembly();

    // potential Hessian: central differences with one Richardson step
    let coarse = hessian_stencil(cfg, &assembly, r0, HESSIAN_STEP)?;
    let fine = hessian_stencil(cfg, &assembly, r0, 0.5 * HESSIAN_STEP)?;
    let mut hessian = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            hessian[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }

    let (eigenvalues, eigenvectors) =
        eigen_symmetric_3x3(&hessian).expect("symmetric 3x3 eigensolve cannot fail");
    for &lambda in &eigenvalues {
        if lambda <= 0.0 {
            return Err(TrapError::SaddlePoint { eigenvalue: lambda });
        }
    }

    // label modes by the dominant axis of each eigenvector; the
    // assignment is the permutation maximising total axis projection,
    // which also breaks degenerate ties deterministically (x, y, z order)
    let assignment = assign_modes(&eigenvectors);
    let mass = cfg.particle.mass();
    let mut frequencies = [0.0; 3];
    let mut mode_axes = [Vec3::ZERO; 3];
    for axis in 0..3 {
        let mode = assignment[axis];
        frequencies[axis] = (eigenvalues[mode] / mass).sqrt() / (2.0 * PI);
        let v = eigenvectors[mode];
        mode_axes[axis] = Vec3::new(v[0], v[1], v[2]);
    }

    let jac = field_jacobian(&assembly, r0, 1e-6)?;
    let gradients = jac.column_norms();

    let r2 = 0.5 * (cfg.top.core_r2 + cfg.bottom.core_r2);
    let ampere_turns = cfg.mean_ampere_turns();
    let mut zetas = [0.0; 3];
    for i in 0..3 {
        zetas[i] = gradients[i] * r2 * r2 / (MU_0 * ampere_turns);
    }

    Ok(TrapCharacterization {
        equilibrium: r0,
        hessian,
        frequencies,
        mode_axes,
        gradients,
        zetas,
        b_hot: hotspot_field(cfg)?,
    })
}

/// Largest |B| on the two hotspot probe rings, T.
///
/// The sharpest field concentration sits at each core's bore edge, the
/// corner circle where the bore wall meets the front face. The probe
/// ring is that circle displaced 10 um along the corner's exterior
/// bisector (equal parts radially outward and axially off the face),
/// sampled at 720 azimuths against the full assembly field. Linear in
/// the drive currents.
pub fn hotspot_field(cfg: &TrapConfig) -> Result<f64, TrapError> {
    let assembly = cfg.assembly();
    let diag = HOTSPOT_STANDOFF / std::f64::consts::SQRT_2;
    let mut best = 0.0_f64;
    for fc in [&cfg.bottom, &cfg.top] {
        let axis = fc.drive.axis;
        let center = fc.front_face() + axis * diag;
        let (u, v) = fluxtrap_magnetics::CurrentArc::plane_frame(axis);
        let radius = fc.core_r2 + diag;
        for k in 0..HOTSPOT_SAMPLES {
            let phi = 2.0 * PI * k as f64 / HOTSPOT_SAMPLES as f64;
            let p = center + (u * phi.cos() + v * phi.sin()) * radius;
            best = best.max(assembly.field_at(p)?.norm());
        }
    }
    Ok(best)
}

fn hessian_stencil(
    cfg: &TrapConfig,
    assembly: &Assembly,
    p: Vec3,
    h: f64,
) -> Result<[[f64; 3]; 3], TrapError> {
    let u = |q: Vec3| potential_energy_with(cfg, assembly, q);
    let u0 = u(p)?;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        let ei = Vec3::axis(i);
        m[i][i] = (u(p + ei * h)? - 2.0 * u0 + u(p - ei * h)?) / (h * h);
        for j in (i + 1)..3 {
            let ej = Vec3::axis(j);
            let pp = u(p + ei * h + ej * h)?;
            let pm = u(p + ei * h - ej * h)?;
            let mp = u(p - ei * h + ej * h)?;
            let mm = u(p - ei * h - ej * h)?;
            let mixed = (pp - pm - mp + mm) / (4.0 * h * h);
            m[i][j] = mixed;
            m[j][i] = mixed;
        }
    }
    Ok(m)
}

/// Permutation `axis -> mode index` maximising the summed |projection|
/// of each eigenvector onto its assigned axis.
fn assign_modes(vectors: &[[f64; 3]; 3]) -> [usize; 3] {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best = PERMS[0];
    let mut best_score = f64::MIN;
    for perm in PERMS {
        let score: f64 = (0..3).map(|axis| vectors[perm[axis]][axis].abs()).sum();
        if score > best_score {
            best_score = score;
            best = perm;
        }
    }
    best
}
