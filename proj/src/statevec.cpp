#include "qdelay/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qdelay {

namespace {

constexpr int kMaxQubits = 24;  // 2^24 complex doubles; far beyond any use here

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits)
        throw std::invalid_argument("qubit count out of range: " + std::to_string(n));
}

void check_register(int n_qubits, std::span<const int> reg) {
    if (reg.empty()) throw std::invalid_argument("empty qubit register");
    std::uint64_t seen = 0;
    for (int q : reg) {
        if (q < 0 || q >= n_qubits)
            throw std::invalid_argument("qubit index out of range: " + std::to_string(q));
        const std::uint64_t bit = std::uint64_t(1) << q;
        if (seen & bit)
            throw std::invalid_argument("duplicate qubit index: " + std::to_string(q));
        seen |= bit;
    }
}

std::uint64_t register_mask(std::span<const int> reg) {
    std::uint64_t mask = 0;
    for (int q : reg) mask |= std::uint64_t(1) << q;
    return mask;
}

// xorshift-free uniform double in [0, 1) from the top 53 bits; unlike
// uniform_real_distribution this is bit-identical across standard libraries.
double uniform_unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::uint64_t draw_outcome(const std::vector<double>& probs, std::mt19937_64& rng) {
    const double u = uniform_unit(rng);
    double acc = 0.0;
    std::uint64_t last_positive = probs.size();
    for (std::uint64_t x = 0; x < probs.size(); ++x) {
        if (probs[x] <= 0.0) continue;
        last_positive = x;
        acc += probs[x];
        if (u < acc) return x;
    }
    // u fell into the rounding sliver past the accumulated total
    if (last_positive == probs.size())
        throw std::domain_error("distribution has no positive outcome");
    return last_positive;
}

}  // namespace

std::uint64_t extract_bits(std::uint64_t basis_index, std::span<const int> register_qubits) {
    std::uint64_t x = 0;
    for (std::size_t b = 0; b < register_qubits.size(); ++b)
        x |= ((basis_index >> register_qubits[b]) & 1u) << b;
    return x;
}

std::uint64_t deposit_bits(std::uint64_t x, std::span<const int> register_qubits,
                           std::uint64_t base) {
    for (std::size_t b = 0; b < register_qubits.size(); ++b)
        if ((x >> b) & 1u) base |= std::uint64_t(1) << register_qubits[b];
    return base;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubit_count(n_qubits_);
    if (amps_.size() != (std::uint64_t(1) << n_qubits_))
        throw std::invalid_argument("amplitude count does not match qubit count");
    double norm = 0.0;
    for (const Complex& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("non-finite amplitude");
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kStateNormTol)
        throw std::invalid_argument("state is not normalized: |psi|^2 = " +
                                    std::to_string(norm));
}

double StateVector::norm_squared() const {
    double norm = 0.0;
    for (const Complex& a : amps_) norm += std::norm(a);
    return norm;
}

StateVector basis_state(int n_qubits, std::uint64_t basis_index) {
    check_qubit_count(n_qubits);
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    if (basis_index >= dim) throw std::invalid_argument("basis index out of range");
    std::vector<Complex> amps(dim, 0.0);
    amps[basis_index] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

Gate2x2::Gate2x2(Complex g00, Complex g01, Complex g10, Complex g11) : m_{g00, g01, g10, g11} {
    // U+U = I entrywise
    const Complex dot00 = std::conj(g00) * g00 + std::conj(g10) * g10;
    const Complex dot11 = std::conj(g01) * g01 + std::conj(g11) * g11;
    const Complex dot01 = std::conj(g00) * g01 + std::conj(g10) * g11;
    if (std::abs(dot00 - 1.0) > kUnitarityTol || std::abs(dot11 - 1.0) > kUnitarityTol ||
        std::abs(dot01) > kUnitarityTol)
        throw std::invalid_argument("2x2 gate is not unitary");
}

Gate2x2 Gate2x2::hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return Gate2x2(r, r, r, -r);
}

Gate2x2 Gate2x2::pauli_x() { return Gate2x2(0.0, 1.0, 1.0, 0.0); }

Gate2x2 Gate2x2::diagonal(double phase0, double phase1) {
    return Gate2x2(std::polar(1.0, phase0), 0.0, 0.0, std::polar(1.0, phase1));
}

Gate2x2 Gate2x2::adjoint() const {
    return Gate2x2(std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3]));
}

BlockUnitary BlockUnitary::dense(int n_qubits, std::vector<Complex> row_major) {
    check_qubit_count(n_qubits);
    if (n_qubits > 6) throw std::invalid_argument("dense block capped at 6 qubits");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    if (row_major.size() != dim * dim)
        throw std::invalid_argument("dense block has wrong entry count");
    // columns must be orthonormal
    for (std::uint64_t c1 = 0; c1 < dim; ++c1)
        for (std::uint64_t c2 = c1; c2 < dim; ++c2) {
            Complex dot = 0.0;
            for (std::uint64_t r = 0; r < dim; ++r)
                dot += std::conj(row_major[r * dim + c1]) * row_major[r * dim + c2];
            const Complex expect = (c1 == c2) ? Complex(1.0) : Complex(0.0);
            if (std::abs(dot - expect) > kUnitarityTol)
                throw std::invalid_argument("dense block is not unitary");
        }
    BlockUnitary u;
    u.n_qubits_ = n_qubits;
    u.matrix_ = std::move(row_major);
    return u;
}

BlockUnitary BlockUnitary::permutation(int n_qubits, std::vector<std::uint64_t> map,
                                       std::vector<Complex> phases) {
    check_qubit_count(n_qubits);
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    if (map.size() != dim) throw std::invalid_argument("permutation has wrong size");
    std::vector<bool> hit(dim, false);
    for (std::uint64_t t : map) {
        if (t >= dim || hit[t])
            throw std::invalid_argument("permutation map is not a bijection");
        hit[t] = true;
    }
    if (phases.empty()) phases.assign(dim, Complex(1.0));
    if (phases.size() != dim) throw std::invalid_argument("phase list has wrong size");
    for (const Complex& z : phases)
        if (std::abs(std::abs(z) - 1.0) > kUnitarityTol)
            throw std::invalid_argument("permutation phase is not unit modulus");
    BlockUnitary u;
    u.n_qubits_ = n_qubits;
    u.map_ = std::move(map);
    u.phases_ = std::move(phases);
    return u;
}

BlockUnitary BlockUnitary::power(std::uint64_t exponent) const {
    const std::uint64_t dim = dimension();
    if (is_permutation()) {
        // square-and-multiply on (map, phase) pairs
        std::vector<std::uint64_t> acc_map(dim), sq_map = map_;
        std::vector<Complex> acc_ph(dim, 1.0), sq_ph = phases_;
        for (std::uint64_t i = 0; i < dim; ++i) acc_map[i] = i;
        std::uint64_t e = exponent;
        while (e) {
            if (e & 1) {
                std::vector<std::uint64_t> m(dim);
                std::vector<Complex> p(dim);
                for (std::uint64_t i = 0; i < dim; ++i) {
                    m[i] = sq_map[acc_map[i]];
                    p[i] = acc_ph[i] * sq_ph[acc_map[i]];
                }
                acc_map = std::move(m);
                acc_ph = std::move(p);
            }
            e >>= 1;
            if (!e) break;
            std::vector<std::uint64_t> m(dim);
            std::vector<Complex> p(dim);
            for (std::uint64_t i = 0; i < dim; ++i) {
                m[i] = sq_map[sq_map[i]];
                p[i] = sq_ph[i] * sq_ph[sq_map[i]];
            }
            sq_map = std::move(m);
            sq_ph = std::move(p);
        }
        BlockUnitary u;
        u.n_qubits_ = n_qubits_;
        u.map_ = std::move(acc_map);
        u.phases_ = std::move(acc_ph);
        return u;
    }
    auto mul = [dim](const std::vector<Complex>& a, const std::vector<Complex>& b) {
        std::vector<Complex> out(dim * dim, 0.0);
        for (std::uint64_t i = 0; i < dim; ++i)
            for (std::uint64_t k = 0; k < dim; ++k) {
                const Complex aik = a[i * dim + k];
                if (aik == Complex(0.0)) continue;
                for (std::uint64_t j = 0; j < dim; ++j) out[i * dim + j] += aik * b[k * dim + j];
            }
        return out;
    };
    std::vector<Complex> acc(dim * dim, 0.0), sq = matrix_;
    for (std::uint64_t i = 0; i < dim; ++i) acc[i * dim + i] = 1.0;
    std::uint64_t e = exponent;
    while (e) {
        if (e & 1) acc = mul(acc, sq);
        e >>= 1;
        if (e) sq = mul(sq, sq);
    }
    BlockUnitary u;
    u.n_qubits_ = n_qubits_;
    u.matrix_ = std::move(acc);
    return u;
}

BlockUnitary BlockUnitary::adjoint() const {
    const std::uint64_t dim = dimension();
    if (is_permutation()) {
        std::vector<std::uint64_t> inv(dim);
        std::vector<Complex> ph(dim);
        for (std::uint64_t i = 0; i < dim; ++i) {
            inv[map_[i]] = i;
            ph[map_[i]] = std::conj(phases_[i]);
        }
        BlockUnitary u;
        u.n_qubits_ = n_qubits_;
        u.map_ = std::move(inv);
        u.phases_ = std::move(ph);
        return u;
    }
    std::vector<Complex> t(dim * dim);
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) t[j * dim + i] = std::conj(matrix_[i * dim + j]);
    BlockUnitary u;
    u.n_qubits_ = n_qubits_;
    u.matrix_ = std::move(t);
    return u;
}

std::vector<Complex> BlockUnitary::to_dense() const {
    const std::uint64_t dim = dimension();
    if (!is_permutation()) return matrix_;
    std::vector<Complex> m(dim * dim, 0.0);
    for (std::uint64_t x = 0; x < dim; ++x) m[map_[x] * dim + x] = phases_[x];
    return m;
}

StateVector apply_one_qubit(const StateVector& state, int qubit, const Gate2x2& gate) {
    if (qubit < 0 || qubit >= state.n_qubits())
        throw std::invalid_argument("qubit index out of range");
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    std::vector<Complex> amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | mask];
        amps[i] = gate.at(0, 0) * a0 + gate.at(0, 1) * a1;
        amps[i | mask] = gate.at(1, 0) * a0 + gate.at(1, 1) * a1;
    }
    return StateVector(state.n_qubits(), std::move(amps));
}

StateVector apply_diagonal(const StateVector& state, int qubit, double phase0, double phase1) {
    if (qubit < 0 || qubit >= state.n_qubits())
        throw std::invalid_argument("qubit index out of range");
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    const Complex f0 = std::polar(1.0, phase0);
    const Complex f1 = std::polar(1.0, phase1);
    std::vector<Complex> amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) amps[i] *= (i & mask) ? f1 : f0;
    return StateVector(state.n_qubits(), std::move(amps));
}

namespace {

// Shared kernel: applies u wherever all control_mask bits are set. The block
// index x of a basis state lives on the listed qubits, bit b on block[b].
StateVector apply_block_masked(const StateVector& state, std::span<const int> block,
                               const BlockUnitary& u, std::uint64_t control_mask) {
    check_register(state.n_qubits(), block);
    if (u.n_qubits() != int(block.size()))
        throw std::invalid_argument("block size does not match unitary");
    const std::uint64_t block_mask = register_mask(block);
    if (block_mask & control_mask)
        throw std::invalid_argument("control qubit overlaps the target block");

    const std::uint64_t dim = state.dim();
    const std::uint64_t bdim = u.dimension();
    std::vector<std::uint64_t> offset(bdim);
    for (std::uint64_t x = 0; x < bdim; ++x) offset[x] = deposit_bits(x, block);

    const std::vector<Complex>& in = state.amplitudes();
    if (u.is_permutation()) {
        const auto& map = u.map();
        const auto& ph = u.phases();
        std::vector<Complex> out(dim, 0.0);
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & control_mask) != control_mask) {
                out[i] += in[i];
                continue;
            }
            const std::uint64_t x = extract_bits(i, block);
            const std::uint64_t j = (i & ~block_mask) | offset[map[x]];
            out[j] += ph[x] * in[i];
        }
        return StateVector(state.n_qubits(), std::move(out));
    }

    const std::vector<Complex> m = u.to_dense();
    std::vector<Complex> out = in;
    std::vector<Complex> local(bdim);
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & block_mask) continue;                    // coset representative only
        if ((base & control_mask) != control_mask) continue;
        for (std::uint64_t x = 0; x < bdim; ++x) local[x] = in[base | offset[x]];
        for (std::uint64_t r = 0; r < bdim; ++r) {
            Complex acc = 0.0;
            for (std::uint64_t c = 0; c < bdim; ++c) acc += m[r * bdim + c] * local[c];
            out[base | offset[r]] = acc;
        }
    }
    return StateVector(state.n_qubits(), std::move(out));
}

}  // namespace

StateVector apply_block(const StateVector& state, std::span<const int> block_qubits,
                        const BlockUnitary& u) {
    return apply_block_masked(state, block_qubits, u, 0);
}

StateVector apply_controlled_block(const StateVector& state, int control_qubit,
                                   std::span<const int> block_qubits, const BlockUnitary& u,
                                   std::uint64_t power) {
    if (control_qubit < 0 || control_qubit >= state.n_qubits())
        throw std::invalid_argument("control qubit out of range");
    if (power == 0) return state;
    const BlockUnitary effective = power == 1 ? u : u.power(power);
    return apply_block_masked(state, block_qubits, effective,
                              std::uint64_t(1) << control_qubit);
}

OutcomeDistribution::OutcomeDistribution(std::vector<int> reg, std::vector<double> probs)
    : register_qubits(std::move(reg)), probabilities(std::move(probs)) {
    if (probabilities.size() != (std::uint64_t(1) << register_qubits.size()))
        throw std::invalid_argument("probability count does not match register size");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0 + 1e-12))
            throw std::invalid_argument("probability out of range");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("probabilities sum to " + std::to_string(total));
}

OutcomeDistribution marginal_distribution(const StateVector& state,
                                          std::span<const int> register_qubits) {
    check_register(state.n_qubits(), register_qubits);
    std::vector<double> probs(std::uint64_t(1) << register_qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < state.dim(); ++i)
        probs[extract_bits(i, register_qubits)] += std::norm(state.amplitude(i));
    return OutcomeDistribution(std::vector<int>(register_qubits.begin(), register_qubits.end()),
                               std::move(probs));
}

MeasurementSample sample_and_collapse(const StateVector& state,
                                      std::span<const int> register_qubits,
                                      std::uint64_t seed) {
    const OutcomeDistribution dist = marginal_distribution(state, register_qubits);
    std::mt19937_64 rng(seed);
    const std::uint64_t outcome = draw_outcome(dist.probabilities, rng);

    const double scale = 1.0 / std::sqrt(dist.probabilities[outcome]);
    std::vector<Complex> amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (extract_bits(i, register_qubits) == outcome)
            amps[i] *= scale;
        else
            amps[i] = 0.0;
    }
    return MeasurementSample{outcome, StateVector(state.n_qubits(), std::move(amps))};
}

std::vector<std::uint64_t> sample_counts(const StateVector& state,
                                         std::span<const int> register_qubits,
                                         std::size_t n_draws, std::uint64_t seed) {
    const OutcomeDistribution dist = marginal_distribution(state, register_qubits);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(dist.probabilities.size(), 0);
    for (std::size_t d = 0; d < n_draws; ++d) ++counts[draw_outcome(dist.probabilities, rng)];
    return counts;
}

ProjectionResult project_register(const StateVector& state,
                                  std::span<const int> register_qubits,
                                  const StateVector& reference) {
    check_register(state.n_qubits(), register_qubits);
    if (reference.n_qubits() != int(register_qubits.size()))
        throw std::invalid_argument("reference state does not match register size");
    const std::uint64_t rdim = reference.dim();
    std::vector<std::uint64_t> offset(rdim);
    for (std::uint64_t x = 0; x < rdim; ++x) offset[x] = deposit_bits(x, register_qubits);
    const std::uint64_t rmask = register_mask(register_qubits);

    // overlap <ref|psi> per configuration of the remaining qubits
    std::vector<Complex> amps(state.dim(), 0.0);
    double weight = 0.0;
    for (std::uint64_t base = 0; base < state.dim(); ++base) {
        if (base & rmask) continue;
        Complex overlap = 0.0;
        for (std::uint64_t x = 0; x < rdim; ++x)
            overlap += std::conj(reference.amplitude(x)) * state.amplitude(base | offset[x]);
        weight += std::norm(overlap);
        for (std::uint64_t x = 0; x < rdim; ++x)
            amps[base | offset[x]] = overlap * reference.amplitude(x);
    }
    if (weight < 1e-300) throw std::domain_error("projection has zero weight");
    const double scale = 1.0 / std::sqrt(weight);
    for (Complex& a : amps) a *= scale;
    return ProjectionResult{weight, StateVector(state.n_qubits(), std::move(amps))};
}

double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("states have different qubit counts");
    Complex dot = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i)
        dot += std::conj(a.amplitude(i)) * b.amplitude(i);
    return std::norm(dot);
}

StateVector strip_global_phase(const StateVector& state) {
    std::uint64_t pivot = 0;
    double best = -1.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        const double mag = std::abs(state.amplitude(i));
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    const Complex z = state.amplitude(pivot);
    const Complex rot = std::conj(z) / std::abs(z);
    std::vector<Complex> amps = state.amplitudes();
    for (Complex& a : amps) a *= rot;
    return StateVector(state.n_qubits(), std::move(amps));
}

}  // namespace qdelay
