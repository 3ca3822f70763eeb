#include "qdelay/scheduler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdelay {

namespace {
constexpr double kClassifyTol = 1e-9;  // |cos(delta*tau) -+ 1| threshold
}

double success_probability(double delta, double tau) {
    return 0.5 * (1.0 + std::cos(delta * tau));
}

double matching_delay(double delta, int harmonic) {
    if (delta == 0.0)
        throw std::domain_error("degenerate qubit: no finite matching delay");
    if (harmonic < 0) throw std::domain_error("harmonic must be non-negative");
    return 2.0 * (harmonic + 1) * kPi / std::abs(delta);
}

double worst_case_delay(double delta, int harmonic) {
    if (delta == 0.0)
        throw std::domain_error("degenerate qubit: no finite worst-case delay");
    if (harmonic < 0) throw std::domain_error("harmonic must be non-negative");
    return (2.0 * harmonic + 1.0) * kPi / std::abs(delta);
}

DelayClass classify_delay(double delta, double tau) {
    const double c = std::cos(delta * tau);
    DelayKind kind = DelayKind::intermediate;
    if (std::abs(c - 1.0) < kClassifyTol)
        kind = DelayKind::matched;
    else if (std::abs(c + 1.0) < kClassifyTol)
        kind = DelayKind::worst_case;
    return DelayClass{kind, 0.5 * (1.0 + c)};
}

DelaySchedule schedule_for_register(std::span<const PhysicalQubit> qubits,
                                    const ScheduleConstraints& constraints) {
    if (constraints.min_total < 0.0 || constraints.min_before < 0.0 ||
        constraints.min_after < 0.0)
        throw std::domain_error("delay floors must be non-negative");
    std::vector<DelayPair> pairs;
    pairs.reserve(qubits.size());
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        const double delta = qubits[j].delta();
        if (delta == 0.0)
            throw std::domain_error("degenerate qubit " + std::to_string(j) +
                                    " cannot be scheduled");
        double total = -1.0;
        for (int l = 0; l <= constraints.max_harmonic; ++l) {
            const double candidate = matching_delay(delta, l);
            if (candidate >= constraints.min_total &&
                candidate >= constraints.min_before + constraints.min_after) {
                total = candidate;
                break;
            }
        }
        if (total < 0.0)
            throw std::domain_error("no matching delay for qubit " + std::to_string(j) +
                                    " satisfies the constraints up to harmonic " +
                                    std::to_string(constraints.max_harmonic));
        // spread the slack evenly over the two segments
        const double slack = total - constraints.min_before - constraints.min_after;
        pairs.push_back(DelayPair{constraints.min_before + 0.5 * slack,
                                  constraints.min_after + 0.5 * slack});
    }
    return DelaySchedule::for_qubits(std::move(pairs));
}

DelaySchedule delays_for_policy(std::span<const PhysicalQubit> qubits, DelayPolicy policy,
                                int harmonic) {
    std::vector<DelayPair> pairs;
    pairs.reserve(qubits.size());
    for (const PhysicalQubit& q : qubits) {
        double total = 0.0;
        switch (policy) {
            case DelayPolicy::zero: break;
            case DelayPolicy::matched: total = matching_delay(q.delta(), harmonic); break;
            case DelayPolicy::worst: total = worst_case_delay(q.delta(), harmonic); break;
        }
        pairs.push_back(DelayPair{0.5 * total, 0.5 * total});
    }
    return DelaySchedule::for_qubits(std::move(pairs));
}

}  // namespace qdelay
