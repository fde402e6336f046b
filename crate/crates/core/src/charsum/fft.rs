//! Inverse DFT in double-double: iterative radix-2, Bluestein for other lengths.

use super::dd::Dd;
use num_complex::Complex;
use num_traits::Zero;

pub type Cdd = Complex<Dd>;

pub fn cis(k: u64, n: u64) -> Cdd {
    let (c, s) = Dd::cis_ratio(k, n);
    Complex::new(c, s)
}

fn radix2(a: &mut [Cdd], inverse: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let roots: Vec<Cdd> = (0..n / 2)
        .map(|k| {
            let w = cis(k as u64, n as u64);
            if inverse {
                w
            } else {
                w.conj()
            }
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = roots[k * step];
                let u = a[start + k];
                let v = a[start + k + len / 2] * w;
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// `X[m] = sum_k x[k] exp(+2 pi i k m / n)`, unnormalized.
pub fn inverse_dft(x: &[Cdd]) -> Vec<Cdd> {
    let n = x.len();
    if n <= 1 {
        return x.to_vec();
    }
    if n.is_power_of_two() {
        let mut a = x.to_vec();
        radix2(&mut a, true);
        return a;
    }
    // Bluestein: km = (k^2 + m^2 - (m-k)^2)/2
    let nn = n as u64;
    let chirp: Vec<Cdd> = (0..nn)
        .map(|k| cis((k * k) % (2 * nn), 2 * nn))
        .collect();
    let len = (2 * n - 1).next_power_of_two();
    let mut a = vec![Cdd::zero(); len];
    for k in 0..n {
        a[k] = x[k] * chirp[k];
    }
    let mut b = vec![Cdd::zero(); len];
    b[0] = chirp[0].conj();
    for k in 1..n {
        b[k] = chirp[k].conj();
        b[len - k] = chirp[k].conj();
    }
    radix2(&mut a, false);
    radix2(&mut b, false);
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai = *ai * *bi;
    }
    radix2(&mut a, true);
    let scale = Dd::new(len as f64);
    (0..n)
        .map(|m| {
            let c = a[m] * chirp[m];
            Complex::new(c.re / scale, c.im / scale)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Cdd]) -> Vec<Cdd> {
        let n = x.len() as u64;
        (0..n)
            .map(|m| {
                x.iter()
                    .enumerate()
                    .fold(Cdd::zero(), |acc, (k, &v)| acc + v * cis(k as u64 * m % n, n))
            })
            .collect()
    }

    #[test]
    fn matches_naive() {
        for n in [1usize, 2, 3, 4, 6, 8, 10, 12, 16, 30, 31] {
            let x: Vec<Cdd> = (0..n)
                .map(|k| Complex::new(Dd::new(k as f64 * 0.5 - 1.0), Dd::new((k * k % 7) as f64)))
                .collect();
            let a = inverse_dft(&x);
            let b = naive(&x);
            for (u, v) in a.iter().zip(&b) {
                let d = *u - *v;
                assert!(d.re.abs().to_f64() < 1e-25 && d.im.abs().to_f64() < 1e-25, "n={n}");
            }
        }
    }
}
