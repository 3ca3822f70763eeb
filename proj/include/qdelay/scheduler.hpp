#pragma once

// Delay synthesis and classification.
//
// An index qubit idling for a total time tau picks up the relative phase
// exp(-i*delta*tau) between its levels, which turns into a readout error
// with probability [1 - cos(delta*tau)]/2. Delays with delta*tau an even
// multiple of pi are invisible ("matched"); odd multiples flip the readout
// bit with certainty ("worst case").

#include <span>
#include <vector>

#include "qdelay/qubit_model.hpp"

namespace qdelay {

// Probability that the affected readout bit comes out right:
// [1 + cos(delta*tau)]/2.
double success_probability(double delta, double tau);

// Smallest delay with delta*tau = 2*(harmonic+1)*pi; success stays 1.
// Throws std::domain_error for a degenerate qubit (delta == 0).
double matching_delay(double delta, int harmonic);

// Delay with delta*tau = (2*harmonic+1)*pi; the readout bit flips.
double worst_case_delay(double delta, int harmonic);

enum class DelayKind { matched, worst_case, intermediate };

struct DelayClass {
    DelayKind kind;
    double success;
};

// Classifies by cos(delta*tau): within 1e-9 of +1 is matched, of -1 is worst
// case, anything else intermediate. tau = 0 is trivially matched.
DelayClass classify_delay(double delta, double tau);

struct ScheduleConstraints {
    double min_total = 0.0;   // every qubit must idle at least this long
    double min_before = 0.0;  // floor for the pre-kick segment
    double min_after = 0.0;   // floor for the post-kick segment
    int max_harmonic = 64;    // search cap for the matching multiple
};

// Per-qubit matched schedule: the smallest matching delay that clears all
// minima, split into segments respecting the per-segment floors. Throws
// std::domain_error for degenerate qubits or if no matching delay up to the
// harmonic cap satisfies the constraints.
DelaySchedule schedule_for_register(std::span<const PhysicalQubit> qubits,
                                    const ScheduleConstraints& constraints = {});

enum class DelayPolicy { zero, matched, worst };

// Uniform policy schedules used by the demos: zero delays, the matched delay
// 2*(harmonic+1)*pi/|delta|, or the worst-case delay (2*harmonic+1)*pi/|delta|,
// each split evenly across the two segments.
DelaySchedule delays_for_policy(std::span<const PhysicalQubit> qubits, DelayPolicy policy,
                                int harmonic = 0);

}  // namespace qdelay
