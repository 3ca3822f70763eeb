#include "qdelay/apps.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qdelay {

namespace {

std::uint64_t modpow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = (r * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return r;
}

// Denominators of the continued-fraction convergents of num/den, ascending.
std::vector<std::uint64_t> convergent_denominators(std::uint64_t num, std::uint64_t den) {
    std::vector<std::uint64_t> out;
    std::uint64_t q_prev = 0, q_curr = 1;  // q_{-1}, q_0
    while (den != 0) {
        const std::uint64_t a = num / den;
        const std::uint64_t next = a * q_curr + q_prev;
        q_prev = q_curr;
        q_curr = next;
        out.push_back(q_curr);
        const std::uint64_t rem = num % den;
        num = den;
        den = rem;
    }
    return out;
}

int solution_count(const std::function<bool(std::uint64_t)>& f, std::uint64_t dim) {
    int l = 0;
    for (std::uint64_t x = 0; x < dim; ++x)
        if (f(x)) ++l;
    return l;
}

}  // namespace

StateVector sigma_x_eigenstate(int sign) {
    if (sign != 1 && sign != -1) throw std::domain_error("sign must be +1 or -1");
    const double r = 1.0 / std::sqrt(2.0);
    return StateVector(1, {Complex(r), Complex(sign * r)});
}

NotGateOutcome run_not_gate_demo(int sign, double delta, double tau_total) {
    if (tau_total < 0.0) throw std::domain_error("idle time must be non-negative");
    const std::vector<int> bits{sign == 1 ? 0 : 1};  // eigenphase 0 or pi
    PhaseEstimationSpec spec(1, BlockUnitary::permutation(1, {1, 0}), sigma_x_eigenstate(sign),
                             {PhysicalQubit{0.0, delta}}, bits);
    const DelaySchedule schedule =
        DelaySchedule::for_qubits({DelayPair{0.5 * tau_total, 0.5 * tau_total}});
    const PEAResult res = run_pea(spec, schedule);

    const double phi = bits[0] ? kPi : 0.0;
    const double dt = delta * tau_total;
    const double p0_closed =
        0.5 * (1.0 + std::cos(phi) * std::cos(dt) + std::sin(phi) * std::sin(dt));
    return NotGateOutcome{res.index_distribution.probabilities[0],
                          res.index_distribution.probabilities[1], p0_closed,
                          1.0 - p0_closed};
}

BlockUnitary mod_mul_unitary(std::uint64_t y, std::uint64_t modulus, int n_qubits) {
    if (modulus < 2) throw std::domain_error("modulus must be at least 2");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    if (dim < modulus)
        throw std::domain_error("target register too small for the modulus");
    y %= modulus;
    if (std::gcd(y, modulus) != 1)
        throw std::domain_error("base " + std::to_string(y) +
                                " shares a factor with the modulus");
    std::vector<std::uint64_t> map(dim);
    for (std::uint64_t x = 0; x < dim; ++x)
        map[x] = x < modulus ? (y * x) % modulus : x;  // identity on the padding
    return BlockUnitary::permutation(n_qubits, std::move(map));
}

int multiplicative_order(std::uint64_t y, std::uint64_t modulus) {
    if (modulus < 2 || std::gcd(y % modulus, modulus) != 1)
        throw std::domain_error("order undefined");
    std::uint64_t acc = y % modulus;
    for (int r = 1; r <= int(modulus); ++r) {
        if (acc == 1) return r;
        acc = (acc * (y % modulus)) % modulus;
    }
    throw std::logic_error("order search exceeded the modulus");
}

StateVector order_eigenstate(std::uint64_t y, std::uint64_t modulus, int n_qubits, int k) {
    const int r = multiplicative_order(y, modulus);
    if (k < 0 || k >= r) throw std::domain_error("eigenstate label out of range");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    if (dim < modulus) throw std::domain_error("target register too small");
    // amplitudes exp(-2 pi i k x / r) / sqrt(r) on the orbit of 1; the minus
    // sign is what makes the eigenvalue come out as exp(+2 pi i k / r)
    std::vector<Complex> amps(dim, 0.0);
    const double norm = 1.0 / std::sqrt(double(r));
    std::uint64_t pos = 1 % modulus;
    for (int x = 0; x < r; ++x) {
        amps[pos] = std::polar(norm, -2.0 * kPi * double(k) * double(x) / double(r));
        pos = (pos * y) % modulus;
    }
    return StateVector(n_qubits, std::move(amps));
}

OrderResult run_order_finding(const OrderFindingSpec& spec, std::uint64_t seed) {
    PhaseEstimationSpec pea(spec.index_size,
                            mod_mul_unitary(spec.y, spec.modulus, spec.target_size),
                            basis_state(spec.target_size, 1), spec.index_qubits);
    const PEAResult res = run_pea(pea, spec.schedule, seed);

    OrderResult out{res.index_distribution, res.sampled->outcome, std::nullopt, false};
    out.verified_order = verify_order(spec.y, spec.modulus, out.measured_k, spec.index_size);
    out.failed = out.measured_k == 0;
    return out;
}

std::optional<int> verify_order(std::uint64_t y, std::uint64_t modulus, std::uint64_t k,
                                int index_size) {
    if (k == 0) return std::nullopt;  // the measurement carried no information
    const std::uint64_t den = std::uint64_t(1) << index_size;
    for (std::uint64_t q : convergent_denominators(k, den)) {
        if (q == 0) continue;
        // the order is a multiple of the reduced denominator; try small ones
        for (std::uint64_t r = q; r <= modulus; r += q) {
            if (modpow(y, r, modulus) != 1) continue;
            // shrink to the least exponent: the order divides r
            for (std::uint64_t d = 1; d <= r; ++d)
                if (r % d == 0 && modpow(y, d, modulus) == 1) return int(d);
        }
    }
    return std::nullopt;
}

BlockUnitary grover_iterate(const std::function<bool(std::uint64_t)>& f, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 6)
        throw std::domain_error("iterate is built dense; 1..6 qubits supported");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    // G = -A U_0 A^-1 U_f = (2|s><s| - 1) U_f, with A the Hadamard layer:
    // G[r][c] = (-1)^f(c) * (2/dim - delta_rc)
    std::vector<Complex> m(dim * dim);
    for (std::uint64_t r = 0; r < dim; ++r)
        for (std::uint64_t c = 0; c < dim; ++c) {
            const double sign = f(c) ? -1.0 : 1.0;
            m[r * dim + c] = sign * (2.0 / double(dim) - (r == c ? 1.0 : 0.0));
        }
    return BlockUnitary::dense(n_qubits, std::move(m));
}

GroverEigenPair grover_eigensystem(const std::function<bool(std::uint64_t)>& f, int n_qubits) {
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    const int l = solution_count(f, dim);
    if (l == 0 || std::uint64_t(l) == dim)
        throw std::domain_error("eigensystem undefined for " + std::to_string(l) +
                                " solutions out of " + std::to_string(dim));
    const double frac = double(l) / double(dim);
    const double omega = std::acos(1.0 - 2.0 * frac) / (2.0 * kPi);

    // (|X_1> +- i|X_0>)/sqrt(2) entrywise
    const double a1 = 1.0 / std::sqrt(2.0 * double(l));
    const Complex ia0(0.0, 1.0 / std::sqrt(2.0 * double(dim - l)));
    std::vector<Complex> plus(dim), minus(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
        if (f(x)) {
            plus[x] = a1;
            minus[x] = a1;
        } else {
            plus[x] = ia0;
            minus[x] = -ia0;
        }
    }
    const Complex c_plus =
        (std::sqrt(frac) - Complex(0.0, 1.0) * std::sqrt(1.0 - frac)) / std::sqrt(2.0);
    const Complex c_minus =
        (std::sqrt(frac) + Complex(0.0, 1.0) * std::sqrt(1.0 - frac)) / std::sqrt(2.0);
    return GroverEigenPair{omega, StateVector(n_qubits, std::move(plus)),
                           StateVector(n_qubits, std::move(minus)), c_plus, c_minus};
}

double run_counting(const CountingSpec& spec) {
    if (!spec.solutions) throw std::invalid_argument("counting needs a solution predicate");
    if (spec.repetitions < 1) throw std::domain_error("need at least one repetition");
    std::vector<double> delays = spec.repetition_delays;
    if (delays.empty()) delays.assign(std::size_t(spec.repetitions), 0.0);
    if (int(delays.size()) != spec.repetitions)
        throw std::invalid_argument("need one idle stretch per repetition");

    const BlockUnitary g = grover_iterate(spec.solutions, spec.target_size);
    const int m = spec.target_size;
    const int index = m;
    std::vector<int> target(m);
    std::iota(target.begin(), target.end(), 0);

    StateVector state = basis_state(m + 1, 0);
    state = apply_one_qubit(state, index, Gate2x2::hadamard());
    for (int q : target) state = apply_one_qubit(state, q, Gate2x2::hadamard());
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        if (delays[rep] < 0.0) throw std::domain_error("idle time must be non-negative");
        state = apply_one_qubit(state, index,
                                free_evolution_gate(spec.index_qubit, delays[rep]));
        state = apply_controlled_block(state, index, target, g, 1);
    }
    state = apply_one_qubit(state, index, Gate2x2::hadamard());

    const std::vector<int> reg{index};
    const OutcomeDistribution d = marginal_distribution(state, reg);
    return d.probabilities[0] - d.probabilities[1];
}

double counting_closed_form(int repetitions, double omega, double delta_tau) {
    return std::cos(2.0 * kPi * repetitions * omega) * std::cos(delta_tau);
}

double counting_shifted_form(int repetitions, double omega, double delta_tau) {
    return std::cos(2.0 * kPi * repetitions * omega - delta_tau);
}

namespace {

double sweep_residual(const std::vector<CountSweepRow>& rows, double omega) {
    double mse = 0.0;
    for (const CountSweepRow& row : rows) {
        const double diff = row.sigma_z - std::cos(2.0 * kPi * row.repetitions * omega);
        mse += diff * diff;
    }
    return mse / double(rows.size());
}

}  // namespace

CountSweepResult estimate_count_sweep(const std::function<bool(std::uint64_t)>& f,
                                      int n_qubits, int k_max, DelayPolicy policy,
                                      const PhysicalQubit& index_qubit, int harmonic) {
    if (k_max < 1) throw std::domain_error("need at least one sweep point");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    const int l = solution_count(f, dim);
    // eigenphase straight from the solution fraction; the degenerate counts
    // l = 0 and l = dim are fine here (omega 0 and 1/2)
    const double omega = std::acos(1.0 - 2.0 * double(l) / double(dim)) / (2.0 * kPi);

    CountSweepResult result;
    result.rows.reserve(std::size_t(k_max));
    for (int k = 1; k <= k_max; ++k) {
        double total = 0.0;
        switch (policy) {
            case DelayPolicy::zero: break;
            case DelayPolicy::matched:
                total = matching_delay(index_qubit.delta(), harmonic);
                break;
            case DelayPolicy::worst:
                total = worst_case_delay(index_qubit.delta(), harmonic);
                break;
        }
        CountingSpec spec;
        spec.target_size = n_qubits;
        spec.solutions = f;
        spec.repetitions = k;
        spec.repetition_delays.assign(std::size_t(k), total / double(k));
        spec.index_qubit = index_qubit;
        const double sz = run_counting(spec);
        const double dt = index_qubit.delta() * total;
        result.rows.push_back(CountSweepRow{k, sz, counting_closed_form(k, omega, dt),
                                            counting_shifted_form(k, omega, dt)});
    }

    // discrete frequency scan over [0, 1/2], then a local ternary polish
    const int grid = 4096;
    double best_omega = 0.0, best_mse = sweep_residual(result.rows, 0.0);
    for (int i = 1; i <= grid; ++i) {
        const double w = 0.5 * double(i) / double(grid);
        const double mse = sweep_residual(result.rows, w);
        if (mse < best_mse) {
            best_mse = mse;
            best_omega = w;
        }
    }
    double lo = std::max(0.0, best_omega - 0.5 / grid);
    double hi = std::min(0.5, best_omega + 0.5 / grid);
    for (int it = 0; it < 80; ++it) {
        const double w1 = lo + (hi - lo) / 3.0, w2 = hi - (hi - lo) / 3.0;
        if (sweep_residual(result.rows, w1) < sweep_residual(result.rows, w2))
            hi = w2;
        else
            lo = w1;
    }
    result.omega_estimate = 0.5 * (lo + hi);
    best_mse = sweep_residual(result.rows, result.omega_estimate);
    const double s = std::sin(kPi * result.omega_estimate);
    result.count_estimate = double(dim) * s * s;
    result.count_rounded = int(std::lround(result.count_estimate));
    result.low_confidence = best_mse > 1e-10;
    return result;
}

}  // namespace qdelay
