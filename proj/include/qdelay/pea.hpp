#pragma once

// Phase estimation with idle-time (delay) effects.
//
// Register layout: the target block occupies qubits [0 .. m-1] of the joint
// state and index qubit j sits at qubit m+j. Index qubit j controls
// U^(2^(n-1-j)), so with the binary_phase() convention below the final
// transform leaves phase bit j on index qubit j: the index register reads
// the bit pattern directly, no swaps anywhere in the pipeline.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdelay/qubit_model.hpp"
#include "qdelay/statevec.hpp"

namespace qdelay {

// Eigenphase encoded by bits b = [b_0 .. b_{n-1}]:
//   phi = 2*pi * (b_0/2^n + b_1/2^(n-1) + ... + b_{n-1}/2),
// i.e. bit j carries weight 2^(j-n); b_0 is the lightest bit. Note this is
// the reverse of the usual "b_0 is the half-weight bit" reading of 0.b_0b_1...
double binary_phase(std::span<const int> bits);

struct PhaseEstimationSpec {
    int index_size = 0;                           // n index qubits
    BlockUnitary target_unitary;                  // U on the m-qubit target
    StateVector target_state;                     // initial target register
    std::vector<PhysicalQubit> index_qubits;      // energies, one per index qubit
    std::optional<std::vector<int>> phase_bits;   // exact eigenphase bits, if known

    PhaseEstimationSpec(int n, BlockUnitary u, StateVector target,
                        std::vector<PhysicalQubit> qubits,
                        std::optional<std::vector<int>> bits = std::nullopt);

    int target_size() const { return target_unitary.n_qubits(); }
    int total_qubits() const { return target_size() + index_size; }
};

// Spec whose target is a single qubit in |1> under diag(1, exp(i*phi)) with
// phi = binary_phase(phase_bits): the canonical exactly-representable case.
PhaseEstimationSpec exact_phase_spec(std::vector<int> phase_bits,
                                     std::vector<PhysicalQubit> index_qubits);

// |0...0>_index (x) target_state, then a Hadamard on every index qubit.
StateVector initialize(const PhaseEstimationSpec& spec);

// For each index qubit j: idle for schedule pair j's "before" segment, apply
// the controlled U^(2^(n-1-j)), idle for the "after" segment. The target
// register does not evolve while idling.
StateVector kickback_stage(const StateVector& state, const PhaseEstimationSpec& spec,
                           const DelaySchedule& schedule);

// Inverse Fourier transform of the index register,
//   |k>  ->  2^(-n/2) * sum_l exp(-2*pi*i*k*l/2^n) |l>,
// where bit b of the input k is read from index_qubits[n-1-b] and bit b of
// the output l lands on index_qubits[b]. The relabeling is pure index
// bookkeeping (the gate ladder touches no swaps); it is what lets the
// kickback layout above deposit phase bit j on index qubit j.
StateVector inverse_qft(const StateVector& state, std::span<const int> index_qubits);

// Adjoint of inverse_qft, so inverse_qft(qft(s)) == s identically.
StateVector qft(const StateVector& state, std::span<const int> index_qubits);

// Per-qubit readout of a post-kickback state: qubit j receives the transform
// corrections with the true lower bits [bits_0 .. bits_{j-1}] substituted for
// the lower qubits, then a Hadamard; entry j is the probability that it then
// reads bits[j]. This equals the probability of bit j being correct given
// that the lighter bits read correctly, which is what the closed form
// [1 + cos(delta*tau)]/2 describes. The full transform instead feeds each
// qubit's corrections from the other (possibly erroneous) qubits, so joint
// outcome marginals can differ from these entries once lighter bits fail.
std::vector<double> per_qubit_readout(const StateVector& kicked,
                                      std::span<const int> index_qubits,
                                      std::span<const int> bits);

struct PEAResult {
    OutcomeDistribution index_distribution;       // outcome bit j = index qubit j
    std::vector<double> per_qubit_success;        // per_qubit_readout; empty unless phase_bits known
    std::optional<MeasurementSample> sampled;     // present in sampling mode
    StateVector final_state;
    bool global_phase_dropped = false;
};

// Full pipeline: initialize, kickback under the schedule, inverse transform,
// readout. With sample_seed set, additionally measures the index register.
// With drop_global_phase, final_state is reported in canonical global phase.
PEAResult run_pea(const PhaseEstimationSpec& spec, const DelaySchedule& schedule,
                  std::optional<std::uint64_t> sample_seed = std::nullopt,
                  bool drop_global_phase = false);

// Closed-form per-qubit success [1 + cos(delta_j * tau_j)]/2; requires
// phase_bits (throws std::domain_error otherwise).
std::vector<double> closed_form_success(const PhaseEstimationSpec& spec,
                                        const DelaySchedule& schedule);

}  // namespace qdelay
