#include "qdelay/pea.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qdelay/scheduler.hpp"

using namespace qdelay;

namespace {

std::vector<int> random_bits(int n, std::mt19937_64& rng) {
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int& b : bits) b = int(rng() & 1);
    return bits;
}

std::vector<PhysicalQubit> plain_qubits(int n, double delta = 1.0) {
    return std::vector<PhysicalQubit>(std::size_t(n), PhysicalQubit{0.0, delta});
}

// Product state the kickback stage should produce for an exact-phase target:
// index qubit j carries (e^{-i e0 tau_j}|0> + e^{-i e1 tau_j} e^{i 2^{n-1-j} phi}|1>)/sqrt(2),
// target stays |1> of the one-qubit block.
StateVector kicked_oracle(const std::vector<int>& bits,
                          const std::vector<PhysicalQubit>& qubits,
                          const DelaySchedule& schedule) {
    const int n = int(bits.size());
    const double phi = binary_phase(bits);
    const std::uint64_t dim = std::uint64_t(1) << (n + 1);
    std::vector<Complex> amps(dim, 0.0);
    const double scale = std::pow(2.0, -0.5 * n);
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << n); ++idx) {
        Complex a = scale;
        for (int j = 0; j < n; ++j) {
            const double tau = schedule.qubit_delays[j].total();
            if ((idx >> j) & 1)
                a *= std::polar(1.0, -qubits[j].e1 * tau +
                                         std::ldexp(1.0, n - 1 - j) * phi);
            else
                a *= std::polar(1.0, -qubits[j].e0 * tau);
        }
        amps[(idx << 1) | 1] = a;  // target qubit 0 pinned to |1>
    }
    return StateVector(n + 1, std::move(amps));
}

}  // namespace

TEST_CASE("binary phase weighting: bit j carries 2^(j-n)") {
    CHECK(binary_phase(std::vector<int>{0, 0, 0}) == doctest::Approx(0.0));
    CHECK(binary_phase(std::vector<int>{1}) == doctest::Approx(kPi));
    CHECK(binary_phase(std::vector<int>{1, 1}) == doctest::Approx(1.5 * kPi));
    // n=3: weights 1/8, 1/4, 1/2
    CHECK(binary_phase(std::vector<int>{1, 0, 1}) == doctest::Approx(2.0 * kPi * 0.625));
    CHECK_THROWS_AS(binary_phase(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(binary_phase(std::vector<int>{0, 2}), std::invalid_argument);
}

TEST_CASE("spec construction validates the declared eigenphase") {
    // diag(1, e^{i phi}) with |1> but the wrong bit pattern declared
    const double phi = binary_phase(std::vector<int>{1, 1});
    BlockUnitary u =
        BlockUnitary::permutation(1, {0, 1}, {Complex(1.0), std::polar(1.0, phi)});
    CHECK_THROWS_AS(PhaseEstimationSpec(2, u, basis_state(1, 1), plain_qubits(2),
                                        std::vector<int>{0, 1}),
                    std::invalid_argument);
    CHECK_NOTHROW(PhaseEstimationSpec(2, u, basis_state(1, 1), plain_qubits(2),
                                      std::vector<int>{1, 1}));
    // qubit description count must match n
    CHECK_THROWS_AS(PhaseEstimationSpec(2, u, basis_state(1, 1), plain_qubits(3),
                                        std::vector<int>{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("initialization spreads the index register uniformly") {
    const PhaseEstimationSpec spec = exact_phase_spec({1, 0}, plain_qubits(2));
    const StateVector state = initialize(spec);
    REQUIRE(state.n_qubits() == 3);
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        CHECK(std::abs(state.amplitude((idx << 1) | 1) - Complex(0.5)) < 1e-12);
        CHECK(std::abs(state.amplitude(idx << 1)) < 1e-12);  // target |0> never populated
    }
}

TEST_CASE("kickback stage matches the product-state oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> energy(-3.0, 3.0), delay(0.0, 10.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + int(rng() % 3);
        const std::vector<int> bits = random_bits(n, rng);
        std::vector<PhysicalQubit> qubits(static_cast<std::size_t>(n));
        std::vector<DelayPair> pairs(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            qubits[j] = PhysicalQubit{energy(rng), energy(rng)};
            pairs[j] = DelayPair{delay(rng), delay(rng)};
        }
        const DelaySchedule schedule = DelaySchedule::for_qubits(pairs);
        const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);

        const StateVector kicked = kickback_stage(initialize(spec), spec, schedule);
        CHECK(oracle::max_amplitude_diff(kicked_oracle(bits, qubits, schedule), kicked) <
              1e-12);
    }
}

TEST_CASE("inverse transform equals its dense matrix on random states") {
    std::mt19937_64 rng(22);
    for (int n = 1; n <= 4; ++n) {
        const oracle::Matrix w = oracle::inverse_qft_matrix(n);
        std::vector<int> index(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) index[j] = j;
        for (int trial = 0; trial < 5; ++trial) {
            const StateVector in = oracle::random_state(n, rng);
            const StateVector out = inverse_qft(in, index);
            const std::vector<Complex> expect =
                oracle::apply_matrix(w, std::vector<Complex>(in.amplitudes().begin(),
                                                             in.amplitudes().end()));
            CHECK(oracle::max_amplitude_diff(expect, out) < 1e-12);
        }
    }
}

TEST_CASE("inverse transform handles scattered and reordered qubit lists") {
    std::mt19937_64 rng(23);
    // 2 transform qubits inside a 4-qubit state, listed out of order
    const std::vector<int> index{3, 1};
    const oracle::Matrix w = oracle::inverse_qft_matrix(2);
    const StateVector in = oracle::random_state(4, rng);
    const StateVector out = inverse_qft(in, index);
    // oracle: embed w as a block on the listed qubits
    std::vector<Complex> dense(16);
    for (std::uint64_t r = 0; r < 4; ++r)
        for (std::uint64_t c = 0; c < 4; ++c) dense[r * 4 + c] = w[r][c];
    const oracle::Matrix full = oracle::controlled_block_operator(4, -1, index, dense);
    const std::vector<Complex> expect = oracle::apply_matrix(
        full, std::vector<Complex>(in.amplitudes().begin(), in.amplitudes().end()));
    CHECK(oracle::max_amplitude_diff(expect, out) < 1e-12);
}

TEST_CASE("forward transform inverts the inverse transform") {
    std::mt19937_64 rng(24);
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> index(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) index[j] = j;
        const StateVector in = oracle::random_state(n, rng);
        CHECK(oracle::max_amplitude_diff(in, inverse_qft(qft(in, index), index)) < 1e-12);
        CHECK(oracle::max_amplitude_diff(in, qft(inverse_qft(in, index), index)) < 1e-12);
    }
}

TEST_CASE("ideal run reads the phase bits directly off the index register") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + int(rng() % 3);
        const std::vector<int> bits = random_bits(n, rng);
        const PEAResult res =
            run_pea(exact_phase_spec(bits, plain_qubits(n)), DelaySchedule::zero(n));
        std::uint64_t expected = 0;
        for (int j = 0; j < n; ++j) expected |= std::uint64_t(bits[j]) << j;
        CHECK(res.index_distribution.probabilities[expected] ==
              doctest::Approx(1.0).epsilon(1e-12));
        for (double p : res.per_qubit_success) CHECK(p == doctest::Approx(1.0));
    }
}

TEST_CASE("per-qubit readout matches the closed form for any delays") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> deltas(0.1, 10.0), taus(0.0, 20.0),
        splits(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + int(rng() % 3);
        const std::vector<int> bits = random_bits(n, rng);
        std::vector<PhysicalQubit> qubits(static_cast<std::size_t>(n));
        std::vector<DelayPair> pairs(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            qubits[j] = PhysicalQubit{0.0, deltas(rng)};
            const double total = taus(rng), cut = splits(rng);
            pairs[j] = DelayPair{total * cut, total * (1.0 - cut)};
        }
        const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
        const DelaySchedule schedule = DelaySchedule::for_qubits(pairs);
        const PEAResult res = run_pea(spec, schedule);
        const std::vector<double> closed = closed_form_success(spec, schedule);
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(res.per_qubit_success[j] - closed[j]) < 1e-10);
    }
}

TEST_CASE("worst-case delays flip every per-qubit readout") {
    const std::vector<int> bits{1, 1};
    const std::vector<PhysicalQubit> qubits = plain_qubits(2);
    const DelaySchedule schedule = delays_for_policy(qubits, DelayPolicy::worst);
    const PEAResult res = run_pea(exact_phase_spec(bits, qubits), schedule);

    for (double p : res.per_qubit_success) CHECK(p < 1e-9);

    // The joint circuit, by contrast, randomizes the heavier bit: the flipped
    // lightest bit feeds that qubit's phase correction, leaving it off by
    // pi/2. The complement outcome is not certain once n > 1.
    CHECK(res.index_distribution.probabilities[0b00] == doctest::Approx(0.5));
    CHECK(res.index_distribution.probabilities[0b10] == doctest::Approx(0.5));
    CHECK(res.index_distribution.probabilities[0b01] < 1e-12);
    CHECK(res.index_distribution.probabilities[0b11] < 1e-12);
}

TEST_CASE("single-qubit worst case flips the whole outcome") {
    // with one qubit there are no corrections, so the joint result and the
    // per-qubit picture coincide: the complement shows up with certainty
    const std::vector<int> bits{1};
    const std::vector<PhysicalQubit> qubits = plain_qubits(1);
    const PEAResult res = run_pea(exact_phase_spec(bits, qubits),
                                  delays_for_policy(qubits, DelayPolicy::worst));
    CHECK(res.index_distribution.probabilities[0] >= 1.0 - 1e-9);
}

TEST_CASE("matched delays reproduce the ideal joint distribution") {
    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> deltas(0.1, 10.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + int(rng() % 3);
        const std::vector<int> bits = random_bits(n, rng);
        std::vector<PhysicalQubit> qubits(static_cast<std::size_t>(n));
        std::vector<DelayPair> pairs(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            qubits[j] = PhysicalQubit{0.0, deltas(rng)};
            const double total = matching_delay(qubits[j].delta(), int(rng() % 6));
            pairs[j] = DelayPair{total / 3.0, 2.0 * total / 3.0};
        }
        const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
        const PEAResult matched = run_pea(spec, DelaySchedule::for_qubits(pairs));
        const PEAResult ideal = run_pea(spec, DelaySchedule::zero(n));
        for (std::size_t x = 0; x < matched.index_distribution.probabilities.size(); ++x)
            CHECK(std::abs(matched.index_distribution.probabilities[x] -
                           ideal.index_distribution.probabilities[x]) < 1e-9);
    }
}

TEST_CASE("only the total delay matters, not the split") {
    std::mt19937_64 rng(28);
    std::uniform_real_distribution<double> taus(0.0, 15.0), splits(0.0, 1.0);
    const std::vector<int> bits{1, 0, 1};
    const std::vector<PhysicalQubit> qubits{PhysicalQubit{0.5, 1.7}, PhysicalQubit{-1.0, 0.3},
                                            PhysicalQubit{0.0, 2.9}};
    const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> totals{taus(rng), taus(rng), taus(rng)};
        std::vector<DelayPair> front(3), back(3), mixed(3);
        for (int j = 0; j < 3; ++j) {
            front[j] = DelayPair{totals[j], 0.0};
            back[j] = DelayPair{0.0, totals[j]};
            const double cut = splits(rng);
            mixed[j] = DelayPair{totals[j] * cut, totals[j] * (1.0 - cut)};
        }
        const auto d1 = run_pea(spec, DelaySchedule::for_qubits(front)).index_distribution;
        const auto d2 = run_pea(spec, DelaySchedule::for_qubits(back)).index_distribution;
        const auto d3 = run_pea(spec, DelaySchedule::for_qubits(mixed)).index_distribution;
        for (std::size_t x = 0; x < d1.probabilities.size(); ++x) {
            CHECK(std::abs(d1.probabilities[x] - d2.probabilities[x]) < 1e-12);
            CHECK(std::abs(d1.probabilities[x] - d3.probabilities[x]) < 1e-12);
        }
    }
}

TEST_CASE("degenerate index qubits ignore delays entirely") {
    const std::vector<int> bits{1, 0};
    const std::vector<PhysicalQubit> qubits(2, PhysicalQubit{2.0, 2.0});  // delta = 0
    const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
    const std::vector<DelayPair> pairs{DelayPair{3.3, 1.1}, DelayPair{0.0, 8.8}};
    const auto delayed = run_pea(spec, DelaySchedule::for_qubits(pairs)).index_distribution;
    const auto ideal = run_pea(spec, DelaySchedule::zero(2)).index_distribution;
    for (std::size_t x = 0; x < ideal.probabilities.size(); ++x)
        CHECK(std::abs(delayed.probabilities[x] - ideal.probabilities[x]) < 1e-12);
}

TEST_CASE("superposed eigenstates mix their distributions linearly") {
    // one-qubit diagonal target: |0> and |1> are eigenstates with distinct
    // exact phases; an equal superposition must average the two outcomes
    const double phi0 = binary_phase(std::vector<int>{0, 1});  // 0.10 -> pi
    const double phi1 = binary_phase(std::vector<int>{1, 1});  // 0.11 -> 3pi/2
    BlockUnitary u = BlockUnitary::permutation(
        1, {0, 1}, {std::polar(1.0, phi0), std::polar(1.0, phi1)});
    const std::vector<Complex> half{Complex(1.0 / std::sqrt(2.0)),
                                    Complex(1.0 / std::sqrt(2.0))};
    const PhaseEstimationSpec spec(2, u, StateVector(1, half), plain_qubits(2));
    const PEAResult mixed = run_pea(spec, DelaySchedule::zero(2));

    CHECK(mixed.per_qubit_success.empty());  // no declared bits, no oracle column
    // |0> carries bits (0,1) -> outcome 0b10; |1> carries (1,1) -> 0b11
    CHECK(mixed.index_distribution.probabilities[0b10] == doctest::Approx(0.5));
    CHECK(mixed.index_distribution.probabilities[0b11] == doctest::Approx(0.5));
}

TEST_CASE("sampling is reproducible and collapses onto the sampled outcome") {
    const std::vector<int> bits{1, 1};
    const std::vector<PhysicalQubit> qubits = plain_qubits(2);
    const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
    const DelaySchedule schedule = delays_for_policy(qubits, DelayPolicy::worst);

    const PEAResult a = run_pea(spec, schedule, 404);
    const PEAResult b = run_pea(spec, schedule, 404);
    REQUIRE(a.sampled.has_value());
    CHECK(a.sampled->outcome == b.sampled->outcome);
    // sampled outcomes live on the distribution's support
    CHECK(a.index_distribution.probabilities[a.sampled->outcome] > 0.0);
}

TEST_CASE("global phase bookkeeping preserves the physical state") {
    const std::vector<int> bits{1, 0};
    const std::vector<PhysicalQubit> qubits{PhysicalQubit{1.0, 2.0}, PhysicalQubit{0.5, 3.0}};
    const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
    const std::vector<DelayPair> pairs{DelayPair{1.0, 2.0}, DelayPair{0.5, 0.5}};
    const DelaySchedule schedule = DelaySchedule::for_qubits(pairs);

    const PEAResult tracked = run_pea(spec, schedule);
    const PEAResult canonical = run_pea(spec, schedule, std::nullopt, true);
    CHECK(!tracked.global_phase_dropped);
    CHECK(canonical.global_phase_dropped);
    CHECK(fidelity_up_to_global_phase(tracked.final_state, canonical.final_state) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("per-qubit readout rejects malformed bit lists") {
    const PhaseEstimationSpec spec = exact_phase_spec({1, 1}, plain_qubits(2));
    const StateVector kicked =
        kickback_stage(initialize(spec), spec, DelaySchedule::zero(2));
    const std::vector<int> index{1, 2};
    CHECK_THROWS_AS(per_qubit_readout(kicked, index, std::vector<int>{1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(per_qubit_readout(kicked, index, std::vector<int>{1, 7}),
                    std::invalid_argument);
}
