#pragma once

// Experiment drivers behind the command-line tool. Each runner validates its
// options, executes the corresponding pipeline, and returns a record that
// serializes to JSON or CSV. Keeping this layer free of terminal concerns
// makes the commands directly testable.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdelay/apps.hpp"
#include "qdelay/qubit_model.hpp"
#include "qdelay/scheduler.hpp"

namespace qdelay::expt {

// Bad flag combinations and malformed option strings; the CLI reports these
// as usage errors (exit code 1), unlike model errors (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv };
OutputFormat parse_format(const std::string& name);

struct ExperimentRecord {
    std::string experiment;
    nlohmann::json config;       // effective configuration, seed included
    nlohmann::json results;
    std::vector<std::string> table_header;       // tabular view, when natural
    std::vector<std::vector<double>> table_rows;
    std::string timestamp;       // ISO 8601, UTC
};

// JSON with full double round-trip precision (>= 15 significant digits).
std::string to_json_text(const ExperimentRecord& record);

// RFC-4180-style CSV: the table when there is one, key/value rows otherwise.
std::string to_csv_text(const ExperimentRecord& record);

// Relative output paths resolve against $QDELAY_OUT_DIR when it is set.
std::string resolve_output_path(const std::string& out);

// Writes to the resolved path, or to stdout when out is empty.
void write_record(const ExperimentRecord& record, const std::string& out,
                  OutputFormat format);

// Index-register description shared by the experiments: level splittings,
// optional |0> energies, and either explicit per-qubit delay pairs
// ("t1:t2,t1:t2,...") or a named delay policy.
struct RegisterOptions {
    std::vector<double> delta;
    std::vector<double> e0;
    std::string delays;
    std::string policy;  // zero | matched | worst; empty means zero unless delays given
    int harmonic = 0;
};

std::vector<PhysicalQubit> build_qubits(const RegisterOptions& reg, int n_qubits);
DelaySchedule build_schedule(const RegisterOptions& reg,
                             std::span<const PhysicalQubit> qubits);

struct PeaOptions {
    int n = 2;
    std::string phase_bits = "11";  // "b0b1..."; bit j has weight 2^(j-n)
    RegisterOptions reg;
    std::optional<std::uint64_t> seed;
};
ExperimentRecord run_pea_experiment(const PeaOptions& opt);

struct NotGateOptions {
    int sign = 1;
    double delta = 1.0;
    double e0 = 0.0;
    std::optional<double> tau;  // explicit total idle time, or...
    std::string policy;         // ...a named policy
    int harmonic = 0;
};
ExperimentRecord run_not_gate_experiment(const NotGateOptions& opt);

struct OrderFindOptions {
    std::uint64_t y = 7;
    std::uint64_t modulus = 15;
    int n = 2;
    int m = 4;
    RegisterOptions reg;
    std::uint64_t seed = 1;
};
ExperimentRecord run_order_finding_experiment(const OrderFindOptions& opt);

struct CountOptions {
    int m = 4;
    std::vector<std::uint64_t> solutions;  // explicit solution set of f
    int repetitions = 6;
    std::string rep_delays;  // "t1,t2,..." one idle stretch per repetition
    std::string policy;
    int harmonic = 0;
    double delta = 1.0;
    double e0 = 0.0;
    int k_max = 0;  // > 0 switches to the k-sweep + frequency-fit mode
};
ExperimentRecord run_count_experiment(const CountOptions& opt);

struct SweepOptions {
    std::string kind = "pea";  // pea | count
    double delta = 1.0;
    double e0 = 0.0;
    double tau_min = 0.0;
    double tau_max = 4.0 * kPi;
    int points = 81;
    int sign = 1;        // pea kind: which X eigenstate
    int repetitions = 6; // count kind
    int m = 4;
    std::vector<std::uint64_t> solutions;
};
ExperimentRecord run_sweep_experiment(const SweepOptions& opt);

struct ScheduleOptions {
    std::vector<double> delta;
    std::vector<double> e0;
    double min_total = 0.0;
    double min_before = 0.0;
    double min_after = 0.0;
    int max_harmonic = 64;
};
ExperimentRecord run_schedule_experiment(const ScheduleOptions& opt);

}  // namespace qdelay::expt
