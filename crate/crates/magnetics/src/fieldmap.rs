//! Field-map sampling and CSV output.
//!
//! Schema: `x_m,y_m,z_m,Bx_T,By_T,Bz_T,Bnorm_T`, row-major over the grid,
//! every number in `%.9e` form.

use crate::field::Assembly;
use crate::vec3::Vec3;
use crate::FieldError;

use std::io::{self, Write};

pub const FIELD_MAP_SCHEMA: &str = "x_m,y_m,z_m,Bx_T,By_T,Bz_T,Bnorm_T";

/// Sampled field values on an ordered list of points.
#[derive(Clone, Debug)]
pub struct FieldMap {
    pub rows: Vec<(Vec3, Vec3)>,
}

impl FieldMap {
    /// Evaluate the assembly on the given points, in order.
    pub fn sample(assembly: &Assembly, points: &[Vec3]) -> Result<Self, FieldError> {
        let rows = points
            .iter()
            .map(|&p| assembly.field_at(p).map(|b| (p, b)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rows })
    }

    /// Build from rows computed elsewhere (e.g. in parallel); order is the
    /// caller's responsibility.
    pub fn from_rows(rows: Vec<(Vec3, Vec3)>) -> Self {
        Self { rows }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# schema={FIELD_MAP_SCHEMA}")?;
        writeln!(w, "{FIELD_MAP_SCHEMA}")?;
        for &(p, b) in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                format_exp9(p.x),
                format_exp9(p.y),
                format_exp9(p.z),
                format_exp9(b.x),
                format_exp9(b.y),
                format_exp9(b.z),
                format_exp9(b.norm()),
            )?;
        }
        Ok(())
    }
}

pub use fluxtrap_numerics::format_exp9;
