#pragma once

// Physical model of the register qubits: two-level energies and the delay
// bookkeeping for gate-free stretches of an experiment.

#include <vector>

#include "qdelay/statevec.hpp"

namespace qdelay {

struct PhysicalQubit {
    double e0 = 0.0;  // energy of |0>
    double e1 = 0.0;  // energy of |1>

    // Level splitting; the only quantity the readout statistics depend on.
    double delta() const { return e1 - e0; }
};

struct DelayPair {
    double before = 0.0;  // idle time ahead of the controlled kick
    double after = 0.0;   // idle time between the kick and the final transform

    double total() const { return before + after; }
};

// Idle-time layout of one experiment. Phase-estimation runs use one
// DelayPair per index qubit; counting runs use one delay per controlled-G
// repetition. Exactly one of the two vectors is populated.
struct DelaySchedule {
    std::vector<DelayPair> qubit_delays;
    std::vector<double> repetition_delays;

    static DelaySchedule zero(int n_qubits);
    static DelaySchedule for_qubits(std::vector<DelayPair> pairs);
    static DelaySchedule for_repetitions(std::vector<double> delays);

    bool per_repetition() const { return !repetition_delays.empty(); }
};

// Total idle time seen by index qubit j (sum of the pair, or of all
// repetition delays, which index qubit 0 sits through in a counting run).
double total_delay(const DelaySchedule& schedule, int qubit);

// diag(exp(-i*e0*tau), exp(-i*e1*tau)); throws std::domain_error for tau < 0.
Gate2x2 free_evolution_gate(const PhysicalQubit& qubit, double tau);

}  // namespace qdelay
