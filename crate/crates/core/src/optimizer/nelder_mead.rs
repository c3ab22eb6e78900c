//! Local maximizers on R^n: Nelder–Mead with dimension-adaptive coefficients,
//! and gradient ascent on central finite differences. Both keep their best
//! point monotone non-decreasing.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
    /// Converged once the simplex value spread is at most this.
    pub tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { initial_step: 0.5, tol: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Start point first until the first step; sorted by value, best first,
    /// from then on.
    vertices: Vec<(Vec<f64>, f64)>,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    tol: f64,
    iterations: usize,
    evaluations: usize,
}

impl NelderMead {
    pub fn new<F: Fn(&[f64]) -> f64>(f: &F, start: Vec<f64>, options: NelderMeadOptions) -> Self {
        let n = start.len();
        let nf = n.max(1) as f64;
        let mut vertices = Vec::with_capacity(n + 1);
        let f0 = f(&start);
        vertices.push((start.clone(), f0));
        for i in 0..n {
            let mut x = start.clone();
            x[i] += options.initial_step;
            let v = f(&x);
            vertices.push((x, v));
        }
        Self {
            vertices,
            alpha: 1.0,
            beta: 1.0 + 2.0 / nf,
            gamma: 0.75 - 1.0 / (2.0 * nf),
            delta: 1.0 - 1.0 / nf,
            tol: options.tol,
            iterations: 0,
            evaluations: n + 1,
        }
    }

    pub fn best(&self) -> (&[f64], f64) {
        let (x, v) = &self.vertices[0];
        (x, *v)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn spread(&self) -> f64 {
        let (lo, hi) = self.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.1), hi.max(v.1)));
        hi - lo
    }

    pub fn converged(&self) -> bool {
        self.vertices.len() < 2 || self.spread() <= self.tol
    }

    fn insert_sorted(&mut self, x: Vec<f64>, v: f64) {
        let pos = self.vertices.iter().position(|w| v > w.1).unwrap_or(self.vertices.len());
        self.vertices.insert(pos, (x, v));
    }

    /// One reflect / expand / contract / shrink iteration.
    pub fn step<F: Fn(&[f64]) -> f64>(&mut self, f: &F) {
        let n = self.vertices.len() - 1;
        if n == 0 {
            return;
        }
        if self.iterations == 0 {
            // stable: the start stays ahead of vertices that tie it
            self.vertices.sort_by(|a, b| b.1.total_cmp(&a.1));
        }
        self.iterations += 1;
        let mut centroid = vec![0.0; n];
        for (x, _) in &self.vertices[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let (worst, f_worst) = self.vertices.pop().expect("n + 1 vertices");
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(self.alpha);
        let fr = f(&xr);
        self.evaluations += 1;
        let f_best = self.vertices[0].1;
        let f_second_worst = self.vertices[n - 1].1;

        if fr > f_best {
            let xe = along(self.alpha * self.beta);
            let fe = f(&xe);
            self.evaluations += 1;
            if fe > fr {
                self.insert_sorted(xe, fe);
            } else {
                self.insert_sorted(xr, fr);
            }
            return;
        }
        if fr > f_second_worst {
            self.insert_sorted(xr, fr);
            return;
        }
        let (xc, fc, accept) = if fr > f_worst {
            let xc = along(self.alpha * self.gamma);
            let fc = f(&xc);
            (xc, fc, fc >= fr)
        } else {
            let xc = along(-self.gamma);
            let fc = f(&xc);
            (xc, fc, fc > f_worst)
        };
        self.evaluations += 1;
        if accept {
            self.insert_sorted(xc, fc);
            return;
        }
        // shrink toward the best vertex
        self.vertices.push((worst, f_worst));
        let best = self.vertices[0].0.clone();
        let mut shrunk = vec![self.vertices[0].clone()];
        for (x, _) in self.vertices.drain(1..) {
            let y: Vec<f64> = best.iter().zip(&x).map(|(b, xi)| b + self.delta * (xi - b)).collect();
            let v = f(&y);
            shrunk.push((y, v));
        }
        self.evaluations += n;
        self.vertices = shrunk;
        self.vertices[1..].sort_by(|a, b| b.1.total_cmp(&a.1));
        if self.vertices[1].1 > self.vertices[0].1 {
            self.vertices.swap(0, 1);
            self.vertices[1..].sort_by(|a, b| b.1.total_cmp(&a.1));
        }
    }

    /// Steps until converged or `max_iterations` more iterations have run.
    /// Returns the number of iterations taken.
    pub fn run<F: Fn(&[f64]) -> f64>(&mut self, f: &F, max_iterations: usize) -> usize {
        let start = self.iterations;
        while self.iterations - start < max_iterations && !self.converged() {
            self.step(f);
        }
        self.iterations - start
    }
}

#[derive(Debug, Clone)]
pub struct GradientAscent {
    x: Vec<f64>,
    value: f64,
    step_size: f64,
    fd_step: f64,
    tol: f64,
    last_gain: f64,
    iterations: usize,
    evaluations: usize,
}

impl GradientAscent {
    pub fn new<F: Fn(&[f64]) -> f64>(f: &F, start: Vec<f64>, tol: f64) -> Self {
        let value = f(&start);
        Self {
            x: start,
            value,
            step_size: 0.1,
            fd_step: 1e-6,
            tol,
            last_gain: f64::INFINITY,
            iterations: 0,
            evaluations: 1,
        }
    }

    pub fn best(&self) -> (&[f64], f64) {
        (&self.x, self.value)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn converged(&self) -> bool {
        self.last_gain <= self.tol
    }

    /// Central-difference gradient, then backtracking along it until the
    /// value increases; a step that finds no increase leaves x unchanged.
    pub fn step<F: Fn(&[f64]) -> f64>(&mut self, f: &F) {
        self.iterations += 1;
        let n = self.x.len();
        let mut grad = vec![0.0; n];
        let mut probe = self.x.clone();
        for i in 0..n {
            let xi = probe[i];
            probe[i] = xi + self.fd_step;
            let up = f(&probe);
            probe[i] = xi - self.fd_step;
            let down = f(&probe);
            probe[i] = xi;
            grad[i] = (up - down) / (2.0 * self.fd_step);
        }
        self.evaluations += 2 * n;
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            self.last_gain = 0.0;
            return;
        }
        let mut t = self.step_size * 2.0;
        while t > 1e-14 {
            let y: Vec<f64> = self.x.iter().zip(&grad).map(|(x, g)| x + t * g / gnorm).collect();
            let v = f(&y);
            self.evaluations += 1;
            if v > self.value {
                self.last_gain = v - self.value;
                self.x = y;
                self.value = v;
                self.step_size = t;
                return;
            }
            t *= 0.5;
        }
        self.last_gain = 0.0;
    }

    pub fn run<F: Fn(&[f64]) -> f64>(&mut self, f: &F, max_iterations: usize) -> usize {
        let start = self.iterations;
        while self.iterations - start < max_iterations && !self.converged() {
            self.step(f);
        }
        self.iterations - start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowl(x: &[f64]) -> f64 {
        -x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2)).sum::<f64>()
    }

    #[test]
    fn nelder_mead_finds_bowl_top() {
        let mut nm = NelderMead::new(&bowl, vec![2.0, -1.0, 0.0], NelderMeadOptions::default());
        nm.run(&bowl, 5000);
        let (x, v) = nm.best();
        assert!(v > -1e-10, "{v}");
        assert!(x.iter().all(|xi| (xi - 0.5).abs() < 1e-4));
    }

    #[test]
    fn nelder_mead_best_is_monotone() {
        let mut nm = NelderMead::new(&bowl, vec![3.0, 3.0], NelderMeadOptions::default());
        let mut last = nm.best().1;
        for _ in 0..200 {
            nm.step(&bowl);
            assert!(nm.best().1 >= last);
            last = nm.best().1;
        }
    }

    #[test]
    fn zero_budget_leaves_start() {
        let start = vec![0.1, 0.2];
        let mut nm = NelderMead::new(&bowl, start.clone(), NelderMeadOptions::default());
        assert_eq!(nm.run(&bowl, 0), 0);
        assert_eq!(nm.best().0, start.as_slice());
        let mut ga = GradientAscent::new(&bowl, start.clone(), 1e-12);
        assert_eq!(ga.run(&bowl, 0), 0);
        assert_eq!(ga.best().0, start.as_slice());
    }

    #[test]
    fn start_at_optimum_stays() {
        let start = vec![0.5, 0.5];
        let mut nm = NelderMead::new(&bowl, start.clone(), NelderMeadOptions::default());
        nm.step(&bowl);
        assert_eq!(nm.best().0, start.as_slice());
        assert_eq!(nm.best().1, 0.0);
    }

    #[test]
    fn gradient_ascent_finds_bowl_top() {
        let mut ga = GradientAscent::new(&bowl, vec![2.0, -1.0], 1e-14);
        let mut last = ga.best().1;
        for _ in 0..2000 {
            ga.step(&bowl);
            assert!(ga.best().1 >= last);
            last = ga.best().1;
            if ga.converged() {
                break;
            }
        }
        assert!(last > -1e-8, "{last}");
    }

    #[test]
    fn identical_starts_identical_trajectories() {
        let mut a = NelderMead::new(&bowl, vec![1.0, 2.0], NelderMeadOptions::default());
        let mut b = a.clone();
        a.run(&bowl, 50);
        b.run(&bowl, 50);
        assert_eq!(a.best().0, b.best().0);
        assert_eq!(a.best().1.to_bits(), b.best().1.to_bits());
    }
}
