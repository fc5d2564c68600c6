//! Servo-loop generalized-plant builders: the tracking loop with exogenous
//! reference/disturbance/noise channels, unweighted and with dynamic weights
//! on every channel.

use super::{GeneralizedPlant, StateSpace};
use crate::matcore::DenseMatrix;
use crate::{Error, Result};

/// Weight realizations for the servo loop. `None` means a unit static weight
/// on that channel. Shapes: `Wr, Wn, We` act on the plant-output dimension,
/// `Wd, Wu` on the plant-input dimension.
#[derive(Clone, Debug, Default)]
pub struct ServoWeights {
    pub wr: Option<StateSpace>,
    pub wd: Option<StateSpace>,
    pub wn: Option<StateSpace>,
    pub we: Option<StateSpace>,
    pub wu: Option<StateSpace>,
}

fn unit_weight(dim: usize, domain: crate::matcore::Domain) -> StateSpace {
    StateSpace {
        a: DenseMatrix::zeros(0, 0),
        b: DenseMatrix::zeros(0, dim),
        c: DenseMatrix::zeros(dim, 0),
        d: DenseMatrix::identity(dim),
        domain,
    }
}

fn check_square(name: &str, w: &StateSpace, dim: usize) -> Result<()> {
    if w.inputs() != dim || w.outputs() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {dim}×{dim}, got {}×{}",
            w.outputs(),
            w.inputs()
        )));
    }
    Ok(())
}

/// Build the servo-loop generalized plant. Exogenous input `w = (r, d, n)`,
/// performance output `z = (error channel, control channel)`, measurement
/// `y = Wr·r − y_p − Wn·n`, control `u` entering the plant input alongside
/// the filtered disturbance.
pub fn build_servo_plant(plant: &StateSpace, weights: Option<&ServoWeights>) -> Result<GeneralizedPlant> {
    let p = plant.outputs();
    let m = plant.inputs();
    let dom = plant.domain;
    let default = ServoWeights::default();
    let w = weights.unwrap_or(&default);
    let wr = w.wr.clone().unwrap_or_else(|| unit_weight(p, dom));
    let wd = w.wd.clone().unwrap_or_else(|| unit_weight(m, dom));
    let wn = w.wn.clone().unwrap_or_else(|| unit_weight(p, dom));
    let we = w.we.clone().unwrap_or_else(|| unit_weight(p, dom));
    let wu = w.wu.clone().unwrap_or_else(|| unit_weight(m, dom));
    check_square("Wr", &wr, p)?;
    check_square("Wd", &wd, m)?;
    check_square("Wn", &wn, p)?;
    check_square("We", &we, p)?;
    check_square("Wu", &wu, m)?;
    for ws in [&wr, &wd, &wn, &we, &wu] {
        if ws.domain != dom {
            return Err(Error::Precondition("weight/plant domain mismatch".into()));
        }
    }

    let (np, nr, nd, nn, ne, nu) =
        (plant.order(), wr.order(), wd.order(), wn.order(), we.order(), wu.order());
    let nx = np + nr + nd + nn + ne + nu;
    let n_w = p + m + p; // (r, d, n)
    let n_z = p + m;

    let z = DenseMatrix::zeros;
    let (ap, bp, cp, dp) = (&plant.a, &plant.b, &plant.c, &plant.d);

    // state equation: x = (x_p, x_r, x_d, x_n, x_e, x_u)
    let a = DenseMatrix::block(&[
        vec![ap, &z(np, nr), &(bp * &wd.c), &z(np, nn), &z(np, ne), &z(np, nu)],
        vec![&z(nr, np), &wr.a, &z(nr, nd), &z(nr, nn), &z(nr, ne), &z(nr, nu)],
        vec![&z(nd, np), &z(nd, nr), &wd.a, &z(nd, nn), &z(nd, ne), &z(nd, nu)],
        vec![&z(nn, np), &z(nn, nr), &z(nn, nd), &wn.a, &z(nn, ne), &z(nn, nu)],
        vec![
            &(&we.b * cp).scale(-1.0),
            &(&we.b * &wr.c),
            // error channel sees the disturbance only through the plant:
            // e = Wr·r − y_p with y_p = C_p x_p + D_p(Wd·d + u)
            &(&(&we.b * dp) * &wd.c).scale(-1.0),
            &z(ne, nn),
            &we.a,
            &z(ne, nu),
        ],
        vec![&z(nu, np), &z(nu, nr), &z(nu, nd), &z(nu, nn), &z(nu, ne), &wu.a],
    ]);
    let b1 = DenseMatrix::block(&[
        vec![&z(np, p), &(bp * &wd.d), &z(np, p)],
        vec![&wr.b, &z(nr, m), &z(nr, p)],
        vec![&z(nd, p), &wd.b, &z(nd, p)],
        vec![&z(nn, p), &z(nn, m), &wn.b],
        vec![&(&we.b * &wr.d), &(&(&we.b * dp) * &wd.d).scale(-1.0), &z(ne, p)],
        vec![&z(nu, p), &z(nu, m), &z(nu, p)],
    ]);
    let b2 = DenseMatrix::vstack(&[
        bp,
        &z(nr, m),
        &z(nd, m),
        &z(nn, m),
        &(&we.b * dp).scale(-1.0),
        &wu.b,
    ]);
    let c1 = DenseMatrix::block(&[
        vec![
            &(&we.d * cp).scale(-1.0),
            &(&we.d * &wr.c),
            &(&(&we.d * dp) * &wd.c).scale(-1.0),
            &z(p, nn),
            &we.c,
            &z(p, nu),
        ],
        vec![&z(m, np), &z(m, nr), &z(m, nd), &z(m, nn), &z(m, ne), &wu.c],
    ]);
    let d11 = DenseMatrix::block(&[
        vec![&(&we.d * &wr.d), &(&(&we.d * dp) * &wd.d).scale(-1.0), &z(p, p)],
        vec![&z(m, p), &z(m, m), &z(m, p)],
    ]);
    let d12 = DenseMatrix::vstack(&[&(&we.d * dp).scale(-1.0), &wu.d]);
    let c2 = DenseMatrix::block(&[vec![
        &cp.scale(-1.0),
        &wr.c,
        &(dp * &wd.c).scale(-1.0),
        &wn.c.scale(-1.0),
        &z(p, ne),
        &z(p, nu),
    ]]);
    let d21 = DenseMatrix::block(&[vec![&wr.d, &(dp * &wd.d).scale(-1.0), &wn.d.scale(-1.0)]]);
    let d22 = dp.scale(-1.0);

    debug_assert_eq!(a.rows(), nx);
    debug_assert_eq!(b1.cols(), n_w);
    debug_assert_eq!(c1.rows(), n_z);
    GeneralizedPlant::new(a, b1, b2, c1, c2, d11, d12, d21, d22, dom)
}
