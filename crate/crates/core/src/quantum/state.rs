//! Pure state vectors and density matrices.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::QuantumError;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// A pure N-qubit state: `2^N` complex amplitudes in the computational basis.
///
/// Basis ordering is big-endian in the party index: the amplitude at index
/// `k` belongs to `|r_1 r_2 ... r_N>` where `r_1` is the most significant bit
/// of `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized (L2 norm 1 within 1e-12).
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if !amps.len().is_power_of_two() || amps.is_empty() {
            return Err(QuantumError::DimensionNotPowerOfTwo(amps.len()));
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(StateVector { amps })
    }

    /// Normalizes arbitrary (nonzero) amplitudes.
    pub fn from_unnormalized(mut amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if !amps.len().is_power_of_two() || amps.is_empty() {
            return Err(QuantumError::DimensionNotPowerOfTwo(amps.len()));
        }
        let norm = l2_norm(&amps);
        if norm == 0.0 {
            return Err(QuantumError::NotNormalized(0.0));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { amps })
    }

    /// The computational basis state `|bits>`, e.g. `basis(2, 0b10)` = `|10>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        assert!(index < dim);
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        StateVector { amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Tensor product `self (x) other`, with `self` holding the leading
    /// (most significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Draws a Haar-random pure state: `2^N` i.i.d. standard complex Gaussian
/// amplitudes, normalized.
pub fn random_pure_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    assert!(n_qubits >= 1);
    let dim = 1 << n_qubits;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        amps.push(Complex64::new(re, im));
    }
    StateVector::from_unnormalized(amps).expect("Gaussian draw is nonzero")
}

/// A mixed N-qubit state as a dense `2^N x 2^N` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(dim: usize, elems: Vec<Complex64>) -> Result<Self, QuantumError> {
        if !dim.is_power_of_two() || elems.len() != dim * dim {
            return Err(QuantumError::DimensionNotPowerOfTwo(elems.len()));
        }
        let mut max_asym = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let diff = (elems[i * dim + j] - elems[j * dim + i].conj()).norm();
                max_asym = max_asym.max(diff);
            }
        }
        if max_asym > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian(max_asym));
        }
        let trace: Complex64 = (0..dim).map(|i| elems[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(QuantumError::NotUnitTrace(trace.re));
        }
        if !is_psd_within(dim, &elems, PSD_TOL) {
            return Err(QuantumError::NotPositive);
        }
        Ok(DensityMatrix { dim, elems })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let dim = psi.dim();
        let amps = psi.amplitudes();
        let mut elems = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                elems.push(amps[i] * amps[j].conj());
            }
        }
        DensityMatrix { dim, elems }
    }

    /// The maximally mixed state `I / 2^N`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut elems = vec![Complex64::ZERO; dim * dim];
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            elems[i * dim + i] = p;
        }
        DensityMatrix { dim, elems }
    }

    /// White-noise admixture `v * rho + (1 - v) * I / 2^N`.
    pub fn mix_with_white_noise(&self, v: f64) -> Result<DensityMatrix, QuantumError> {
        if !(0.0..=1.0).contains(&v) {
            return Err(QuantumError::VisibilityOutOfRange(v));
        }
        let mut elems: Vec<Complex64> = self.elems.iter().map(|e| e * v).collect();
        let off = (1.0 - v) / self.dim as f64;
        for i in 0..self.dim {
            elems[i * self.dim + i] += off;
        }
        Ok(DensityMatrix {
            dim: self.dim,
            elems,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.elems[row * self.dim + col]
    }

    pub fn elems(&self) -> &[Complex64] {
        &self.elems
    }
}

/// White-noise admixture of a pure state, `v |psi><psi| + (1-v) I / 2^N`.
pub fn white_noise_mixture(psi: &StateVector, v: f64) -> Result<DensityMatrix, QuantumError> {
    DensityMatrix::from_pure(psi).mix_with_white_noise(v)
}

/// Cholesky factorization of `a + tol*I`; a negative pivot certifies an
/// eigenvalue below `-tol`.
fn is_psd_within(dim: usize, a: &[Complex64], tol: f64) -> bool {
    let mut l = vec![Complex64::ZERO; dim * dim];
    for k in 0..dim {
        let mut d = a[k * dim + k].re + tol;
        for j in 0..k {
            d -= l[k * dim + j].norm_sqr();
        }
        if d < 0.0 {
            return false;
        }
        let pivot = d.sqrt();
        l[k * dim + k] = Complex64::new(pivot, 0.0);
        for i in (k + 1)..dim {
            let mut s = a[i * dim + k];
            for j in 0..k {
                s -= l[i * dim + j] * l[k * dim + j].conj();
            }
            l[i * dim + k] = if pivot > 0.0 {
                s / pivot
            } else {
                Complex64::ZERO
            };
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_states_are_normalized() {
        let s = StateVector::basis(3, 5);
        assert_eq!(s.n_qubits(), 3);
        assert_eq!(s.amplitudes()[5], Complex64::ONE);
    }

    #[test]
    fn random_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let s = random_pure_state(2, &mut rng);
            let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_bloch_vector_averages_to_zero() {
        // Haar symmetry: the mean Bloch vector over many draws vanishes.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let s = random_pure_state(1, &mut rng);
            let a = s.amplitudes();
            let c = a[0].conj() * a[1];
            x += 2.0 * c.re;
            y += 2.0 * c.im;
            z += a[0].norm_sqr() - a[1].norm_sqr();
        }
        let n = n as f64;
        assert!((x / n).abs() < 0.01);
        assert!((y / n).abs() < 0.01);
        assert!((z / n).abs() < 0.01);
    }

    #[test]
    fn mean_reduced_purity_of_haar_two_qubit_states() {
        // Average purity of a one-qubit marginal of a Haar two-qubit state.
        // Closed form (Lubkin): (d_A + d_B) / (d_A d_B + 1) = 4/5.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let s = random_pure_state(2, &mut rng);
            let a = s.amplitudes();
            // Tr rho_A^2 = 1 - 2 |det [[a0,a1],[a2,a3]]|^2 for normalized amps.
            let det = a[0] * a[3] - a[1] * a[2];
            sum += 1.0 - 2.0 * det.norm_sqr();
        }
        let mean = sum / n as f64;
        assert!(
            (mean - 0.8).abs() < 0.01,
            "mean reduced purity {mean} should be 4/5"
        );
    }

    #[test]
    fn white_noise_mixing_endpoints() {
        let psi = StateVector::basis(2, 0);
        let rho = white_noise_mixture(&psi, 1.0).unwrap();
        assert_eq!(rho, DensityMatrix::from_pure(&psi));
        let rho = white_noise_mixture(&psi, 0.0).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(2));
        assert!(white_noise_mixture(&psi, 1.5).is_err());
    }

    #[test]
    fn density_matrix_validation_rejects_bad_inputs() {
        // Not unit trace.
        let bad = vec![
            Complex64::new(0.9, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ];
        assert!(matches!(
            DensityMatrix::new(2, bad),
            Err(QuantumError::NotUnitTrace(_))
        ));
        // Hermitian, unit trace, but indefinite.
        let indefinite = vec![
            Complex64::new(1.5, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-0.5, 0.0),
        ];
        assert!(matches!(
            DensityMatrix::new(2, indefinite),
            Err(QuantumError::NotPositive)
        ));
        // A valid mixture passes.
        let psi = StateVector::basis(1, 0);
        let rho = white_noise_mixture(&psi, 0.5).unwrap();
        assert!(DensityMatrix::new(2, rho.elems().to_vec()).is_ok());
    }
}
