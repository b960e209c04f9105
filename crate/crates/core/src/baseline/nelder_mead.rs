//! Plain Nelder-Mead simplex search (reflection 1, expansion 2, contraction
//! and shrink 1/2).

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once every vertex is within this distance of the best vertex.
    pub tolerance: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
}

pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for k in 0..d {
        let mut v = x0.to_vec();
        v[k] += opts.initial_step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let mut evals = d + 1;
    let mut converged = false;

    loop {
        // Stable sort keeps earlier vertices first on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .fold(0.0, f64::max)
            .sqrt();
        if diameter < opts.tolerance {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; d];
        for (v, _) in &simplex[..d] {
            centroid.iter_mut().zip(v).for_each(|(c, x)| *c += x);
        }
        centroid.iter_mut().for_each(|c| *c /= d as f64);

        let f_best = simplex[0].1;
        let f_second_worst = simplex[d - 1].1;
        let (worst, f_worst) = simplex[d].clone();

        let reflected = affine(&centroid, &worst, -1.0);
        let f_reflected = f(&reflected);
        evals += 1;

        if f_reflected < f_best {
            let expanded = affine(&centroid, &worst, -2.0);
            let f_expanded = f(&expanded);
            evals += 1;
            simplex[d] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < f_second_worst {
            simplex[d] = (reflected, f_reflected);
            continue;
        }

        let (contracted, accept) = if f_reflected < f_worst {
            let c = affine(&centroid, &reflected, 0.5);
            let fc = f(&c);
            (c.clone(), (fc <= f_reflected).then_some(fc))
        } else {
            let c = affine(&centroid, &worst, 0.5);
            let fc = f(&c);
            (c.clone(), (fc < f_worst).then_some(fc))
        };
        evals += 1;
        if let Some(fc) = accept {
            simplex[d] = (contracted, fc);
            continue;
        }

        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let v = affine(&anchor, &vertex.0, 0.5);
            let fv = f(&v);
            *vertex = (v, fv);
        }
        evals += d;
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    NelderMeadOutcome {
        x,
        f,
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimises_a_quadratic() {
        let opts = NelderMeadOptions {
            initial_step: 0.5,
            tolerance: 1e-8,
            max_evals: 5000,
        };
        let out = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], &opts);
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn respects_evaluation_budget() {
        let opts = NelderMeadOptions {
            initial_step: 1.0,
            tolerance: 0.0,
            max_evals: 50,
        };
        let out = nelder_mead(|x| x.iter().map(|v| v.abs()).sum(), &[3.0, -2.0, 1.0], &opts);
        assert!(!out.converged);
        // The last iteration may overshoot by at most one shrink.
        assert!(out.evals <= 50 + 3 + 1);
    }
}
