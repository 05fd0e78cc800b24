//! Rotation search for the best superposition: an Euler-angle grid, then
//! a shrinking pattern search around the incumbent.

#![allow(dead_code)]

type P = [f64; 3];

fn rot(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    let (sa, ca, sb, cb, sc, cc) = (a.sin(), a.cos(), b.sin(), b.cos(), c.sin(), c.cos());
    // Rz(a) Ry(b) Rz(c)
    [
        [ca * cb * cc - sa * sc, -ca * cb * sc - sa * cc, ca * sb],
        [sa * cb * cc + ca * sc, -sa * cb * sc + ca * cc, sa * sb],
        [-sb * cc, sb * sc, cb],
    ]
}

fn centred(x: &[P]) -> Vec<P> {
    let n = x.len() as f64;
    let c = [0, 1, 2].map(|k| x.iter().map(|p| p[k]).sum::<f64>() / n);
    x.iter().map(|p| [p[0] - c[0], p[1] - c[1], p[2] - c[2]]).collect()
}

fn rmsd_at(a: &[P], b: &[P], angles: [f64; 3]) -> f64 {
    let r = rot(angles[0], angles[1], angles[2]);
    let s: f64 = a
        .iter()
        .zip(b)
        .map(|(p, q)| (0..3).map(|i| (r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] - q[i]).powi(2)).sum::<f64>())
        .sum();
    (s / a.len() as f64).sqrt()
}

pub fn min_rmsd(a: &[P], b: &[P]) -> f64 {
    let (a, b) = (centred(a), centred(b));
    let steps = 24;
    let tau = std::f64::consts::TAU;
    let mut best = (f64::INFINITY, [0.0; 3]);
    for i in 0..steps {
        for j in 0..=steps / 2 {
            for k in 0..steps {
                let ang = [tau * i as f64 / steps as f64, tau * j as f64 / steps as f64, tau * k as f64 / steps as f64];
                let v = rmsd_at(&a, &b, ang);
                if v < best.0 {
                    best = (v, ang);
                }
            }
        }
    }
    let mut h = tau / steps as f64;
    while h > 1e-10 {
        let mut improved = false;
        for d in 0..3 {
            for s in [-1.0, 1.0] {
                let mut ang = best.1;
                ang[d] += s * h;
                let v = rmsd_at(&a, &b, ang);
                if v < best.0 {
                    best = (v, ang);
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    best.0
}

pub fn rotate(x: &[P], angles: [f64; 3], shift: P) -> Vec<P> {
    let r = rot(angles[0], angles[1], angles[2]);
    x.iter().map(|p| [0, 1, 2].map(|i| r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] + shift[i])).collect()
}
