//! Gauss-Laguerre rules for integrals against `e^{-x}` on `[0, inf)`.

/// Nodes and weights of the `n`-point Gauss-Laguerre rule.
///
/// The rule integrates `x^k e^{-x}` exactly for `k < 2n`. Nodes are found by
/// Newton iteration on the three-term recurrence, started from the usual
/// asymptotic guesses; weights are `x / (n L_{n-1}(x))^2`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut prev = 0.0;
        for _ in 0..100 {
            let (ln, ln1) = laguerre_pair(n, z);
            let deriv = nf * (ln - ln1) / z;
            let step = ln / deriv;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) || step == prev {
                break;
            }
            prev = step;
        }
        let (_, ln1) = laguerre_pair(n, z);
        nodes.push(z);
        weights.push(z / (nf * ln1).powi(2));
    }
    (nodes, weights)
}

/// `(L_n(x), L_{n-1}(x))` via the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - x) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}
