#pragma once

// Worked experiments on top of the phase-estimation pipeline: the NOT-gate
// eigenphase demo, order finding for small moduli, and Grover-iteration
// counting with idle-time effects.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdelay/pea.hpp"
#include "qdelay/qubit_model.hpp"
#include "qdelay/scheduler.hpp"
#include "qdelay/statevec.hpp"

namespace qdelay {

// (|0> + sign*|1>)/sqrt(2); sign must be +1 or -1. Eigenstate of X with
// eigenvalue sign, i.e. eigenphase 0 or pi.
StateVector sigma_x_eigenstate(int sign);

struct NotGateOutcome {
    double p0;         // simulated chance the single index qubit reads 0
    double p1;
    double p0_closed;  // [1 + cos(phi)cos(delta*tau) + sin(phi)sin(delta*tau)]/2
    double p1_closed;  // 1 - p0_closed
};

// One-bit phase estimation of X on the chosen eigenstate with total idle
// time tau_total on the index qubit.
NotGateOutcome run_not_gate_demo(int sign, double delta, double tau_total);

// Permutation unitary |x> -> |y*x mod modulus> for x < modulus, identity on
// the padding x >= modulus. Requires gcd(y, modulus) = 1 and 2^n_qubits >=
// modulus (throws std::domain_error otherwise).
BlockUnitary mod_mul_unitary(std::uint64_t y, std::uint64_t modulus, int n_qubits);

// Smallest r > 0 with y^r = 1 (mod modulus), by direct scan.
int multiplicative_order(std::uint64_t y, std::uint64_t modulus);

// Eigenstate |u_k> = r^(-1/2) * sum_x exp(-2*pi*i*k*x/r) |y^x mod modulus>
// of mod_mul_unitary, with eigenvalue exp(+2*pi*i*k/r).
StateVector order_eigenstate(std::uint64_t y, std::uint64_t modulus, int n_qubits, int k);

struct OrderFindingSpec {
    std::uint64_t y = 7;
    std::uint64_t modulus = 15;
    int index_size = 2;
    int target_size = 4;
    std::vector<PhysicalQubit> index_qubits;
    DelaySchedule schedule;
};

struct OrderResult {
    OutcomeDistribution index_distribution;  // exact pre-measurement statistics
    std::uint64_t measured_k = 0;
    std::optional<int> verified_order;
    bool failed = false;                     // k = 0 carries no information
};

// Delayed phase estimation of |x> -> |y*x mod modulus> on target |1>, one
// index-register sample, then classical verification of the order.
OrderResult run_order_finding(const OrderFindingSpec& spec, std::uint64_t seed);

// Reconstructs the order from a measured k: walks the continued-fraction
// convergents of k/2^index_size and tests small multiples of each
// denominator by modular exponentiation. Returns the verified order, or
// nullopt if k = 0 or nothing up to the modulus verifies.
std::optional<int> verify_order(std::uint64_t y, std::uint64_t modulus, std::uint64_t k,
                                int index_size);

// Grover iterate G = -A U_0 A^-1 U_f on n_qubits qubits (A = Hadamard on
// every qubit, U_0 flips |0...0>, U_f flips solutions of f). Dense form;
// n_qubits is capped at 6.
BlockUnitary grover_iterate(const std::function<bool(std::uint64_t)>& f, int n_qubits);

struct GroverEigenPair {
    double omega;            // G's eigenphases are +-2*pi*omega
    StateVector psi_plus;    // (|X_1> + i|X_0>)/sqrt(2)
    StateVector psi_minus;   // (|X_1> - i|X_0>)/sqrt(2)
    Complex c_plus;          // <psi_plus|s>, s the uniform state
    Complex c_minus;
};

// Exact eigenpair of the Grover iterate: cos(2*pi*omega) = 1 - 2*l/2^n with
// l the number of solutions of f. Throws std::domain_error when l is 0 or
// 2^n (no rotation plane).
GroverEigenPair grover_eigensystem(const std::function<bool(std::uint64_t)>& f, int n_qubits);

struct CountingSpec {
    int target_size = 4;
    std::function<bool(std::uint64_t)> solutions;
    int repetitions = 6;                      // controlled-G applications
    std::vector<double> repetition_delays;    // one idle stretch per repetition
    PhysicalQubit index_qubit;
};

// Hadamard on everything, then per repetition an idle stretch followed by a
// controlled Grover iterate, then a final Hadamard on the index qubit.
// Returns <sigma_z> = P(0) - P(1) of the index qubit.
double run_counting(const CountingSpec& spec);

// What the exact pipeline equals: cos(2*pi*k*omega) * cos(delta*tau), the
// average of cos(2*pi*k*(+-omega) - delta*tau) over the two eigenbranches.
double counting_closed_form(int repetitions, double omega, double delta_tau);

// Single-branch form cos(2*pi*k*omega - delta*tau); agrees with the pipeline
// only where delta*tau is a multiple of 2*pi.
double counting_shifted_form(int repetitions, double omega, double delta_tau);

struct CountSweepRow {
    int repetitions;
    double sigma_z;
    double closed_product;   // counting_closed_form at this k
    double closed_shifted;   // counting_shifted_form at this k
};

struct CountSweepResult {
    std::vector<CountSweepRow> rows;
    double omega_estimate = 0.0;
    double count_estimate = 0.0;     // 2^n * sin^2(pi * omega_estimate)
    int count_rounded = 0;
    bool low_confidence = false;     // fit residual too large to trust
};

// Runs the counting experiment for k = 1 .. k_max under the given delay
// policy (the policy delay is split evenly across the k repetitions of each
// run), then fits omega from the <sigma_z> samples by a discrete frequency
// scan over [0, 1/2] and inverts to a solution count.
CountSweepResult estimate_count_sweep(const std::function<bool(std::uint64_t)>& f,
                                      int n_qubits, int k_max, DelayPolicy policy,
                                      const PhysicalQubit& index_qubit, int harmonic = 0);

}  // namespace qdelay
