use crate::fv::{LocalSpeeds, Model};

pub fn burgers_flux(u: f64) -> f64 {
    0.5 * u * u
}

/// Inviscid Burgers equation `u_t + (u^2 / 2)_x = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BurgersModel;

impl Model for BurgersModel {
    fn components(&self) -> usize {
        1
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["u"]
    }

    fn flux(&self, state: &[f64], out: &mut [f64]) {
        out[0] = burgers_flux(state[0]);
    }

    fn local_speeds(&self, minus: &[f64], plus: &[f64]) -> LocalSpeeds {
        let (l, r) = (minus[0], plus[0]);
        LocalSpeeds {
            a_minus: l.min(r).min(0.0),
            a_plus: l.max(r).max(0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv::{central_upwind_flux, max_wave_speed};
    use crate::mesh::{Grid1D, StateField};

    #[test]
    fn flux_values() {
        assert_eq!(burgers_flux(0.0), 0.0);
        assert_eq!(burgers_flux(2.0), 2.0);
        assert_eq!(burgers_flux(-3.0), 4.5);
    }

    #[test]
    fn numerical_flux() {
        let mut out = [0.0];
        central_upwind_flux(&BurgersModel, &[1.5], &[1.5], &mut out).unwrap();
        assert_eq!(out[0], 1.125);
        central_upwind_flux(&BurgersModel, &[2.0], &[1.0], &mut out).unwrap();
        assert_eq!(out[0], 2.0);
    }

    #[test]
    fn wave_speeds() {
        let g = Grid1D::new(-1.0, 1.0, 16).unwrap();
        let mut f = StateField::from_fn(g, 1, |_| vec![2.0]);
        f.fill_ghosts_outflow();
        assert_eq!(max_wave_speed(&BurgersModel, &f, 1.3).unwrap(), 2.0);
        let mut z = StateField::zeros(g, 1);
        z.fill_ghosts_outflow();
        assert_eq!(max_wave_speed(&BurgersModel, &z, 1.3).unwrap(), 0.0);
    }
}
