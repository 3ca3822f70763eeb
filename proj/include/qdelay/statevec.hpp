#pragma once

// Dense state-vector engine for small qubit registers.
//
// Conventions used throughout the library:
//  - qubit q is bit q of a basis index; qubit 0 is the least significant bit;
//  - a register is an ordered list of distinct qubit indices [q_0 .. q_{r-1}];
//    a register outcome x places bit b of x on qubit q_b;
//  - hbar = 1, so free evolution over time tau contributes exp(-i*E*tau);
//  - every operation is a pure function: inputs are untouched, results are
//    fresh values.
//
// The engine is meant for experiments of at most a dozen qubits; everything
// is O(2^n) dense arithmetic with no sparsity tricks.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qdelay {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Gate/unitary entries must satisfy U†U = I to this tolerance.
inline constexpr double kUnitarityTol = 1e-12;
// Amplitude vectors handed to StateVector must be normalized to this tolerance.
inline constexpr double kStateNormTol = 1e-9;

// Packs the register bits of a basis index into a small integer:
// bit b of the result is the value of qubit register_qubits[b].
std::uint64_t extract_bits(std::uint64_t basis_index, std::span<const int> register_qubits);

// Inverse of extract_bits: scatters bit b of x onto qubit register_qubits[b],
// OR-ed over base.
std::uint64_t deposit_bits(std::uint64_t x, std::span<const int> register_qubits,
                           std::uint64_t base = 0);

class StateVector {
public:
    // Takes ownership of the amplitudes; size must be 2^n_qubits and the
    // vector must be normalized (throws std::invalid_argument otherwise).
    StateVector(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return std::uint64_t(1) << n_qubits_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::uint64_t basis_index) const { return amps_.at(basis_index); }
    double norm_squared() const;

private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

// |basis_index> on n_qubits qubits.
StateVector basis_state(int n_qubits, std::uint64_t basis_index);

class Gate2x2 {
public:
    // Row-major entries; throws std::invalid_argument unless unitary.
    Gate2x2(Complex g00, Complex g01, Complex g10, Complex g11);

    static Gate2x2 hadamard();
    static Gate2x2 pauli_x();
    // diag(exp(i*phase0), exp(i*phase1))
    static Gate2x2 diagonal(double phase0, double phase1);

    Complex at(int row, int col) const { return m_[row * 2 + col]; }
    Gate2x2 adjoint() const;

private:
    Complex m_[4];
};

// Unitary on a block of m qubits, kept either as a dense 2^m x 2^m matrix or
// as a basis permutation with an optional phase per source index:
//   dense:        |x>  ->  sum_y  M[y][x] |y>
//   permutation:  |x>  ->  phase[x] |map[x]>
// Both forms validate unitarity on construction and support integer powers.
class BlockUnitary {
public:
    static BlockUnitary dense(int n_qubits, std::vector<Complex> row_major);
    static BlockUnitary permutation(int n_qubits, std::vector<std::uint64_t> map,
                                    std::vector<Complex> phases = {});

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dimension() const { return std::uint64_t(1) << n_qubits_; }
    bool is_permutation() const { return !map_.empty(); }

    BlockUnitary power(std::uint64_t exponent) const;
    BlockUnitary adjoint() const;
    // Row-major dense entries; densifies the permutation form.
    std::vector<Complex> to_dense() const;

    const std::vector<std::uint64_t>& map() const { return map_; }
    const std::vector<Complex>& phases() const { return phases_; }

private:
    BlockUnitary() = default;
    int n_qubits_ = 0;
    std::vector<Complex> matrix_;          // dense form, row-major
    std::vector<std::uint64_t> map_;       // permutation form
    std::vector<Complex> phases_;          // per-source phase, size = dimension
};

StateVector apply_one_qubit(const StateVector& state, int qubit, const Gate2x2& gate);

// Multiplies amplitudes by exp(i*phase0) where the qubit is 0 and
// exp(i*phase1) where it is 1.
StateVector apply_diagonal(const StateVector& state, int qubit, double phase0, double phase1);

// Applies u to the ordered qubit block (bit b of the block index lives on
// block_qubits[b]).
StateVector apply_block(const StateVector& state, std::span<const int> block_qubits,
                        const BlockUnitary& u);

// Applies u^power to the block on the subspace where control_qubit is 1.
// control_qubit must not be part of the block; power 0 is the identity.
StateVector apply_controlled_block(const StateVector& state, int control_qubit,
                                   std::span<const int> block_qubits,
                                   const BlockUnitary& u, std::uint64_t power);

struct OutcomeDistribution {
    // probabilities[x] is the chance of reading x off the register; the
    // constructor checks range and that the total is 1 within 1e-10.
    OutcomeDistribution(std::vector<int> register_qubits, std::vector<double> probabilities);

    std::vector<int> register_qubits;
    std::vector<double> probabilities;
};

OutcomeDistribution marginal_distribution(const StateVector& state,
                                          std::span<const int> register_qubits);

struct MeasurementSample {
    std::uint64_t outcome;
    StateVector post_state;
};

// Projective measurement of the register in the computational basis, using a
// 64-bit-seeded mt19937_64 stream; a given seed always reproduces the same
// outcome, and outcomes of probability zero are never returned.
MeasurementSample sample_and_collapse(const StateVector& state,
                                      std::span<const int> register_qubits,
                                      std::uint64_t seed);

// Histogram of n_draws independent register measurements (no collapse), from
// one mt19937_64 stream seeded with seed.
std::vector<std::uint64_t> sample_counts(const StateVector& state,
                                         std::span<const int> register_qubits,
                                         std::size_t n_draws, std::uint64_t seed);

struct ProjectionResult {
    double probability;
    StateVector post_state;
};

// Projects the register onto the given reference state (dim 2^r) and returns
// the renormalized post-projection state together with the projection weight.
// Throws std::domain_error if the weight is numerically zero.
ProjectionResult project_register(const StateVector& state,
                                  std::span<const int> register_qubits,
                                  const StateVector& reference);

// |<a|b>|^2
double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b);

// Rotates the overall phase so the largest-magnitude amplitude is real and
// positive; the result differs from the input by exactly a global phase.
StateVector strip_global_phase(const StateVector& state);

}  // namespace qdelay
