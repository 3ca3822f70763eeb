#include "qdelay/pea.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qdelay/scheduler.hpp"

namespace qdelay {

namespace {

void check_bits(std::span<const int> bits) {
    if (bits.empty()) throw std::invalid_argument("empty phase bit string");
    for (int b : bits)
        if (b != 0 && b != 1) throw std::invalid_argument("phase bits must be 0 or 1");
}

std::vector<int> index_register(const PhaseEstimationSpec& spec) {
    std::vector<int> reg(spec.index_size);
    std::iota(reg.begin(), reg.end(), spec.target_size());
    return reg;
}

std::vector<int> target_register(const PhaseEstimationSpec& spec) {
    std::vector<int> reg(spec.target_size());
    std::iota(reg.begin(), reg.end(), 0);
    return reg;
}

// one-qubit phase gate as a permutation-form block (identity map, phases)
BlockUnitary phase_block(double angle) {
    return BlockUnitary::permutation(1, {0, 1}, {Complex(1.0), std::polar(1.0, angle)});
}

void check_schedule(const PhaseEstimationSpec& spec, const DelaySchedule& schedule) {
    if (schedule.per_repetition())
        throw std::invalid_argument("phase estimation needs a per-qubit delay schedule");
    if (int(schedule.qubit_delays.size()) != spec.index_size)
        throw std::invalid_argument("schedule does not cover every index qubit");
}

}  // namespace

double binary_phase(std::span<const int> bits) {
    check_bits(bits);
    const int n = int(bits.size());
    double phi = 0.0;
    for (int j = 0; j < n; ++j)
        if (bits[j]) phi += std::ldexp(1.0, j - n);  // weight 2^(j-n)
    return 2.0 * kPi * phi;
}

PhaseEstimationSpec::PhaseEstimationSpec(int n, BlockUnitary u, StateVector target,
                                         std::vector<PhysicalQubit> qubits,
                                         std::optional<std::vector<int>> bits)
    : index_size(n),
      target_unitary(std::move(u)),
      target_state(std::move(target)),
      index_qubits(std::move(qubits)),
      phase_bits(std::move(bits)) {
    if (index_size < 1) throw std::invalid_argument("need at least one index qubit");
    if (target_state.n_qubits() != target_unitary.n_qubits())
        throw std::invalid_argument("target state does not match the unitary's block size");
    if (int(index_qubits.size()) != index_size)
        throw std::invalid_argument("need one physical qubit description per index qubit");
    if (phase_bits) {
        check_bits(*phase_bits);
        if (int(phase_bits->size()) != index_size)
            throw std::invalid_argument("phase bit count does not match index size");
        // the declared bits must actually be the target's eigenphase
        const double phi = binary_phase(*phase_bits);
        const std::vector<Complex> m = target_unitary.to_dense();
        const std::uint64_t dim = target_unitary.dimension();
        const Complex eig = std::polar(1.0, phi);
        double worst = 0.0;
        for (std::uint64_t r = 0; r < dim; ++r) {
            Complex acc = 0.0;
            for (std::uint64_t c = 0; c < dim; ++c)
                acc += m[r * dim + c] * target_state.amplitude(c);
            worst = std::max(worst, std::abs(acc - eig * target_state.amplitude(r)));
        }
        if (worst > 1e-10)
            throw std::invalid_argument(
                "target state is not an eigenstate with the declared phase (residual " +
                std::to_string(worst) + ")");
    }
}

PhaseEstimationSpec exact_phase_spec(std::vector<int> phase_bits,
                                     std::vector<PhysicalQubit> index_qubits) {
    check_bits(phase_bits);
    const int n = int(phase_bits.size());
    const double phi = binary_phase(phase_bits);
    BlockUnitary u =
        BlockUnitary::permutation(1, {0, 1}, {Complex(1.0), std::polar(1.0, phi)});
    return PhaseEstimationSpec(n, std::move(u), basis_state(1, 1),
                               std::move(index_qubits), std::move(phase_bits));
}

StateVector initialize(const PhaseEstimationSpec& spec) {
    const int total = spec.total_qubits();
    std::vector<Complex> amps(std::uint64_t(1) << total, 0.0);
    for (std::uint64_t t = 0; t < spec.target_state.dim(); ++t)
        amps[t] = spec.target_state.amplitude(t);
    StateVector state(total, std::move(amps));
    for (int q : index_register(spec))
        state = apply_one_qubit(state, q, Gate2x2::hadamard());
    return state;
}

StateVector kickback_stage(const StateVector& state, const PhaseEstimationSpec& spec,
                           const DelaySchedule& schedule) {
    check_schedule(spec, schedule);
    if (state.n_qubits() != spec.total_qubits())
        throw std::invalid_argument("state size does not match the register layout");
    const std::vector<int> target = target_register(spec);
    const int m = spec.target_size();
    const int n = spec.index_size;
    StateVector out = state;
    for (int j = 0; j < n; ++j) {
        const PhysicalQubit& q = spec.index_qubits[j];
        const DelayPair& d = schedule.qubit_delays[j];
        out = apply_one_qubit(out, m + j, free_evolution_gate(q, d.before));
        out = apply_controlled_block(out, m + j, target, spec.target_unitary,
                                     std::uint64_t(1) << (n - 1 - j));
        out = apply_one_qubit(out, m + j, free_evolution_gate(q, d.after));
    }
    return out;
}

StateVector inverse_qft(const StateVector& state, std::span<const int> index_qubits) {
    // Ladder realization of |k> -> 2^(-n/2) sum_l exp(-2 pi i k l / 2^n) |l>
    // with input bit b of k on index_qubits[n-1-b] and output bit b of l on
    // index_qubits[b]: Hadamard each listed qubit in order, preceded for
    // qubit p by the phase corrections pulled from every later qubit q.
    const int n = int(index_qubits.size());
    StateVector out = state;
    for (int p = 0; p < n; ++p) {
        out = apply_one_qubit(out, index_qubits[p], Gate2x2::hadamard());
        for (int q = p + 1; q < n; ++q) {
            const std::vector<int> block{index_qubits[p]};
            out = apply_controlled_block(out, index_qubits[q], block,
                                         phase_block(-kPi / std::ldexp(1.0, q - p)), 1);
        }
    }
    return out;
}

StateVector qft(const StateVector& state, std::span<const int> index_qubits) {
    const int n = int(index_qubits.size());
    StateVector out = state;
    for (int p = n - 1; p >= 0; --p) {
        for (int q = n - 1; q > p; --q) {
            const std::vector<int> block{index_qubits[p]};
            out = apply_controlled_block(out, index_qubits[q], block,
                                         phase_block(kPi / std::ldexp(1.0, q - p)), 1);
        }
        out = apply_one_qubit(out, index_qubits[p], Gate2x2::hadamard());
    }
    return out;
}

std::vector<double> per_qubit_readout(const StateVector& kicked,
                                      std::span<const int> index_qubits,
                                      std::span<const int> bits) {
    check_bits(bits);
    if (bits.size() != index_qubits.size())
        throw std::invalid_argument("need one reference bit per index qubit");
    const int n = int(index_qubits.size());
    std::vector<double> out;
    out.reserve(index_qubits.size());
    for (int j = 0; j < n; ++j) {
        double angle = 0.0;  // corrections the transform would pull from below
        for (int p = 0; p < j; ++p)
            if (bits[p]) angle -= kPi / std::ldexp(1.0, j - p);
        StateVector probe = apply_diagonal(kicked, index_qubits[j], 0.0, angle);
        probe = apply_one_qubit(probe, index_qubits[j], Gate2x2::hadamard());
        const std::vector<int> one{index_qubits[j]};
        out.push_back(marginal_distribution(probe, one).probabilities[bits[j]]);
    }
    return out;
}

PEAResult run_pea(const PhaseEstimationSpec& spec, const DelaySchedule& schedule,
                  std::optional<std::uint64_t> sample_seed, bool drop_global_phase) {
    check_schedule(spec, schedule);
    const std::vector<int> index = index_register(spec);

    StateVector state = initialize(spec);
    state = kickback_stage(state, spec, schedule);

    std::vector<double> per_qubit;
    if (spec.phase_bits) per_qubit = per_qubit_readout(state, index, *spec.phase_bits);

    state = inverse_qft(state, index);

    OutcomeDistribution dist = marginal_distribution(state, index);

    std::optional<MeasurementSample> sampled;
    if (sample_seed) sampled = sample_and_collapse(state, index, *sample_seed);

    if (drop_global_phase) state = strip_global_phase(state);
    return PEAResult{std::move(dist), std::move(per_qubit), std::move(sampled),
                     std::move(state), drop_global_phase};
}

std::vector<double> closed_form_success(const PhaseEstimationSpec& spec,
                                        const DelaySchedule& schedule) {
    check_schedule(spec, schedule);
    if (!spec.phase_bits)
        throw std::domain_error("closed form needs the exact eigenphase bits");
    std::vector<double> out;
    out.reserve(spec.index_qubits.size());
    for (int j = 0; j < spec.index_size; ++j)
        out.push_back(
            success_probability(spec.index_qubits[j].delta(), total_delay(schedule, j)));
    return out;
}

}  // namespace qdelay
