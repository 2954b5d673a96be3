//! NV orientation geometry of a (100)-cut diamond.

use fluxtrap_magnetics::Vec3;

/// The four NV bond orientations of a (100)-cut crystal, in the lab
/// frame with z along the surface normal.
///
/// Every axis makes arccos(1/sqrt(3)) = 54.7356 degrees with the lab z
/// axis, so an out-of-plane field projects equally onto all four.
#[derive(Clone, Copy, Debug)]
pub struct DiamondCut100 {
    axes: [Vec3; 4],
}

impl Default for DiamondCut100 {
    fn default() -> Self {
        let s = 1.0 / 3.0_f64.sqrt();
        Self {
            axes: [
                Vec3::new(s, s, s),
                Vec3::new(s, -s, -s),
                Vec3::new(-s, s, -s),
                Vec3::new(-s, -s, s),
            ],
        }
    }
}

impl DiamondCut100 {
    pub fn axes(&self) -> &[Vec3; 4] {
        &self.axes
    }

    pub fn axis(&self, label: usize) -> Option<Vec3> {
        self.axes.get(label).copied()
    }
}

/// The angle each NV axis makes with the surface normal, rad.
pub const NV_TO_NORMAL_ANGLE: f64 = 0.955_316_618_124_509_3; // arccos(1/sqrt(3))
