#include "qdelay/qubit_model.hpp"

#include <numeric>
#include <stdexcept>

namespace qdelay {

DelaySchedule DelaySchedule::zero(int n_qubits) {
    DelaySchedule s;
    s.qubit_delays.assign(std::size_t(n_qubits), DelayPair{});
    return s;
}

DelaySchedule DelaySchedule::for_qubits(std::vector<DelayPair> pairs) {
    DelaySchedule s;
    s.qubit_delays = std::move(pairs);
    return s;
}

DelaySchedule DelaySchedule::for_repetitions(std::vector<double> delays) {
    DelaySchedule s;
    s.repetition_delays = std::move(delays);
    return s;
}

double total_delay(const DelaySchedule& schedule, int qubit) {
    if (schedule.per_repetition()) {
        // a counting run has a single index qubit idling through every stretch
        if (qubit != 0) throw std::out_of_range("repetition schedule has one index qubit");
        return std::accumulate(schedule.repetition_delays.begin(),
                               schedule.repetition_delays.end(), 0.0);
    }
    if (qubit < 0 || qubit >= int(schedule.qubit_delays.size()))
        throw std::out_of_range("schedule has no such qubit");
    return schedule.qubit_delays[qubit].total();
}

Gate2x2 free_evolution_gate(const PhysicalQubit& qubit, double tau) {
    if (tau < 0.0) throw std::domain_error("idle time must be non-negative");
    return Gate2x2::diagonal(-qubit.e0 * tau, -qubit.e1 * tau);
}

}  // namespace qdelay
