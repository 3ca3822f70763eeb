#include "qdelay/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>

#include "qdelay/pea.hpp"

namespace qdelay::expt {

namespace {

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + ": '" + text + "'");
    }
}

// "t1:t2,t1:t2,..." -> per-qubit delay pairs
std::vector<DelayPair> parse_delay_pairs(const std::string& text) {
    std::vector<DelayPair> out;
    for (const std::string& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw UsageError("delay pairs look like 'before:after', got '" + item + "'");
        out.push_back(DelayPair{parse_double(parts[0], "delay"),
                                parse_double(parts[1], "delay")});
    }
    return out;
}

DelayPolicy parse_policy(const std::string& name) {
    if (name == "zero") return DelayPolicy::zero;
    if (name == "matched") return DelayPolicy::matched;
    if (name == "worst") return DelayPolicy::worst;
    throw UsageError("unknown policy '" + name + "' (want zero|matched|worst)");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

nlohmann::json distribution_json(const OutcomeDistribution& d) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t x = 0; x < d.probabilities.size(); ++x) {
        std::string bits(d.register_qubits.size(), '0');
        for (std::size_t b = 0; b < bits.size(); ++b)
            if ((x >> b) & 1u) bits[b] = '1';
        out.push_back({{"outcome", x}, {"bits", bits}, {"probability", d.probabilities[x]}});
    }
    return out;
}

nlohmann::json schedule_json(const DelaySchedule& s) {
    nlohmann::json out = nlohmann::json::array();
    if (s.per_repetition()) {
        for (double t : s.repetition_delays) out.push_back(t);
    } else {
        for (const DelayPair& p : s.qubit_delays)
            out.push_back({{"before", p.before}, {"after", p.after}, {"total", p.total()}});
    }
    return out;
}

std::string bits_string(std::uint64_t x, int n) {
    std::string bits(std::size_t(n), '0');
    for (int b = 0; b < n; ++b)
        if ((x >> b) & 1u) bits[b] = '1';
    return bits;
}

std::vector<int> parse_bit_string(const std::string& text) {
    std::vector<int> bits;
    for (char c : text) {
        if (c != '0' && c != '1')
            throw UsageError("phase bits must be a string of 0s and 1s, got '" + text + "'");
        bits.push_back(c - '0');
    }
    return bits;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    throw UsageError("unknown format '" + name + "' (want json|csv)");
}

std::string to_json_text(const ExperimentRecord& record) {
    nlohmann::json j{{"experiment", record.experiment},
                     {"timestamp", record.timestamp},
                     {"config", record.config},
                     {"results", record.results}};
    return j.dump(2) + "\n";
}

std::string to_csv_text(const ExperimentRecord& record) {
    std::string out;
    if (!record.table_header.empty()) {
        for (std::size_t c = 0; c < record.table_header.size(); ++c) {
            if (c) out += ',';
            out += csv_field(record.table_header[c]);
        }
        out += '\n';
        for (const auto& row : record.table_rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += format_double(row[c]);
            }
            out += '\n';
        }
        return out;
    }
    out += "key,value\n";
    for (const auto& [key, value] : record.results.items()) {
        out += csv_field(key);
        out += ',';
        if (value.is_number_float())
            out += format_double(value.get<double>());
        else
            out += csv_field(value.dump());
        out += '\n';
    }
    return out;
}

std::string resolve_output_path(const std::string& out) {
    if (out.empty() || out.front() == '/') return out;
    const char* dir = std::getenv("QDELAY_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return out;
    std::string path(dir);
    if (path.back() != '/') path += '/';
    return path + out;
}

void write_record(const ExperimentRecord& record, const std::string& out,
                  OutputFormat format) {
    const std::string text =
        format == OutputFormat::json ? to_json_text(record) : to_csv_text(record);
    if (out.empty()) {
        std::cout << text;
        return;
    }
    const std::string path = resolve_output_path(out);
    std::ofstream file(path);
    if (!file) throw UsageError("cannot open output file '" + path + "'");
    file << text;
}

std::vector<PhysicalQubit> build_qubits(const RegisterOptions& reg, int n_qubits) {
    auto widen = [n_qubits](const std::vector<double>& v, const char* what) {
        if (v.empty()) return std::vector<double>(std::size_t(n_qubits), 0.0);
        if (v.size() == 1) return std::vector<double>(std::size_t(n_qubits), v[0]);
        if (int(v.size()) != n_qubits)
            throw UsageError(std::string(what) + " needs one value per index qubit");
        return v;
    };
    const std::vector<double> deltas =
        reg.delta.empty() ? std::vector<double>(std::size_t(n_qubits), 1.0)
                          : widen(reg.delta, "--delta");
    const std::vector<double> e0 = widen(reg.e0, "--e0");
    std::vector<PhysicalQubit> qubits(static_cast<std::size_t>(n_qubits));
    for (int j = 0; j < n_qubits; ++j)
        qubits[j] = PhysicalQubit{e0[j], e0[j] + deltas[j]};
    return qubits;
}

DelaySchedule build_schedule(const RegisterOptions& reg,
                             std::span<const PhysicalQubit> qubits) {
    if (!reg.delays.empty()) {
        if (!reg.policy.empty())
            throw UsageError("--delays and --policy are mutually exclusive");
        std::vector<DelayPair> pairs = parse_delay_pairs(reg.delays);
        if (pairs.size() != qubits.size())
            throw UsageError("need one before:after delay pair per index qubit");
        for (const DelayPair& p : pairs)
            if (p.before < 0.0 || p.after < 0.0)
                throw UsageError("delays must be non-negative");
        return DelaySchedule::for_qubits(std::move(pairs));
    }
    const DelayPolicy policy =
        reg.policy.empty() ? DelayPolicy::zero : parse_policy(reg.policy);
    return delays_for_policy(qubits, policy, reg.harmonic);
}

ExperimentRecord run_pea_experiment(const PeaOptions& opt) {
    const std::vector<int> bits = parse_bit_string(opt.phase_bits);
    if (int(bits.size()) != opt.n)
        throw UsageError("--phase-bits must have exactly --n bits");
    const std::vector<PhysicalQubit> qubits = build_qubits(opt.reg, opt.n);
    const DelaySchedule schedule = build_schedule(opt.reg, qubits);

    const PhaseEstimationSpec spec = exact_phase_spec(bits, qubits);
    const PEAResult res = run_pea(spec, schedule, opt.seed);
    const std::vector<double> closed = closed_form_success(spec, schedule);

    ExperimentRecord rec;
    rec.experiment = "pea";
    rec.timestamp = now_utc();
    rec.config = {{"n", opt.n},
                  {"phase_bits", opt.phase_bits},
                  {"phase", binary_phase(bits)},
                  {"delta", nlohmann::json::array()},
                  {"schedule", schedule_json(schedule)},
                  {"seed", opt.seed ? nlohmann::json(*opt.seed) : nlohmann::json()}};
    for (const PhysicalQubit& q : qubits) rec.config["delta"].push_back(q.delta());

    rec.results = {{"index_distribution", distribution_json(res.index_distribution)},
                   {"per_qubit_success", res.per_qubit_success},
                   {"closed_form_success", closed}};
    if (res.sampled) {
        rec.results["sampled_outcome"] = res.sampled->outcome;
        rec.results["sampled_bits"] = bits_string(res.sampled->outcome, opt.n);
    }
    rec.table_header = {"outcome", "probability"};
    for (std::size_t x = 0; x < res.index_distribution.probabilities.size(); ++x)
        rec.table_rows.push_back({double(x), res.index_distribution.probabilities[x]});
    return rec;
}

ExperimentRecord run_not_gate_experiment(const NotGateOptions& opt) {
    if (opt.tau && !opt.policy.empty())
        throw UsageError("--tau and --policy are mutually exclusive");
    double tau = opt.tau.value_or(0.0);
    if (!opt.policy.empty()) {
        const PhysicalQubit q{opt.e0, opt.e0 + opt.delta};
        const DelaySchedule s = delays_for_policy(std::vector<PhysicalQubit>{q},
                                                  parse_policy(opt.policy), opt.harmonic);
        tau = s.qubit_delays[0].total();
    }
    const NotGateOutcome out = run_not_gate_demo(opt.sign, opt.delta, tau);
    const DelayClass cls = classify_delay(opt.delta, tau);

    ExperimentRecord rec;
    rec.experiment = "notgate";
    rec.timestamp = now_utc();
    rec.config = {{"sign", opt.sign}, {"delta", opt.delta}, {"tau", tau},
                  {"eigenphase", opt.sign == 1 ? 0.0 : kPi}};
    rec.results = {{"p0", out.p0},
                   {"p1", out.p1},
                   {"p0_closed", out.p0_closed},
                   {"p1_closed", out.p1_closed},
                   {"delay_class", cls.kind == DelayKind::matched      ? "matched"
                                   : cls.kind == DelayKind::worst_case ? "worst"
                                                                       : "intermediate"}};
    return rec;
}

ExperimentRecord run_order_finding_experiment(const OrderFindOptions& opt) {
    OrderFindingSpec spec;
    spec.y = opt.y;
    spec.modulus = opt.modulus;
    spec.index_size = opt.n;
    spec.target_size = opt.m;
    spec.index_qubits = build_qubits(opt.reg, opt.n);
    spec.schedule = build_schedule(opt.reg, spec.index_qubits);
    const OrderResult res = run_order_finding(spec, opt.seed);

    ExperimentRecord rec;
    rec.experiment = "orderfind";
    rec.timestamp = now_utc();
    rec.config = {{"y", opt.y},      {"modulus", opt.modulus},
                  {"n", opt.n},      {"m", opt.m},
                  {"seed", opt.seed}, {"schedule", schedule_json(spec.schedule)},
                  {"delta", nlohmann::json::array()}};
    for (const PhysicalQubit& q : spec.index_qubits) rec.config["delta"].push_back(q.delta());
    rec.results = {{"index_distribution", distribution_json(res.index_distribution)},
                   {"measured_k", res.measured_k},
                   {"verified_order", res.verified_order ? nlohmann::json(*res.verified_order)
                                                         : nlohmann::json()},
                   {"failed", res.failed}};
    rec.table_header = {"outcome", "probability"};
    for (std::size_t x = 0; x < res.index_distribution.probabilities.size(); ++x)
        rec.table_rows.push_back({double(x), res.index_distribution.probabilities[x]});
    return rec;
}

namespace {

std::function<bool(std::uint64_t)> solution_predicate(const std::vector<std::uint64_t>& list,
                                                      int m) {
    const std::uint64_t dim = std::uint64_t(1) << m;
    auto set = std::make_shared<std::set<std::uint64_t>>(list.begin(), list.end());
    for (std::uint64_t x : *set)
        if (x >= dim) throw UsageError("solution " + std::to_string(x) + " exceeds the register");
    return [set](std::uint64_t x) { return set->count(x) > 0; };
}

}  // namespace

ExperimentRecord run_count_experiment(const CountOptions& opt) {
    const auto f = solution_predicate(opt.solutions, opt.m);
    const PhysicalQubit index_qubit{opt.e0, opt.e0 + opt.delta};
    const std::uint64_t dim = std::uint64_t(1) << opt.m;
    const double omega =
        std::acos(1.0 - 2.0 * double(opt.solutions.size()) / double(dim)) / (2.0 * kPi);

    ExperimentRecord rec;
    rec.timestamp = now_utc();
    rec.config = {{"m", opt.m},
                  {"solutions", opt.solutions},
                  {"delta", opt.delta},
                  {"omega", omega}};

    if (opt.k_max > 0) {
        if (!opt.rep_delays.empty())
            throw UsageError("--k-max sweeps use --policy, not --rep-delays");
        const DelayPolicy policy =
            opt.policy.empty() ? DelayPolicy::zero : parse_policy(opt.policy);
        const CountSweepResult sweep =
            estimate_count_sweep(f, opt.m, opt.k_max, policy, index_qubit, opt.harmonic);
        rec.experiment = "countsweep";
        rec.config["k_max"] = opt.k_max;
        rec.config["policy"] = opt.policy.empty() ? "zero" : opt.policy;
        rec.results = {{"omega_estimate", sweep.omega_estimate},
                       {"count_estimate", sweep.count_estimate},
                       {"count_rounded", sweep.count_rounded},
                       {"low_confidence", sweep.low_confidence}};
        rec.table_header = {"repetitions", "sigma_z", "closed_product", "closed_shifted"};
        for (const CountSweepRow& row : sweep.rows)
            rec.table_rows.push_back(
                {double(row.repetitions), row.sigma_z, row.closed_product, row.closed_shifted});
        return rec;
    }

    CountingSpec spec;
    spec.target_size = opt.m;
    spec.solutions = f;
    spec.repetitions = opt.repetitions;
    spec.index_qubit = index_qubit;
    if (!opt.rep_delays.empty()) {
        if (!opt.policy.empty())
            throw UsageError("--rep-delays and --policy are mutually exclusive");
        for (const std::string& item : split(opt.rep_delays, ','))
            spec.repetition_delays.push_back(parse_double(item, "repetition delay"));
        if (int(spec.repetition_delays.size()) != opt.repetitions)
            throw UsageError("need one repetition delay per repetition");
    } else {
        const DelayPolicy policy =
            opt.policy.empty() ? DelayPolicy::zero : parse_policy(opt.policy);
        double total = 0.0;
        if (policy == DelayPolicy::matched)
            total = matching_delay(index_qubit.delta(), opt.harmonic);
        else if (policy == DelayPolicy::worst)
            total = worst_case_delay(index_qubit.delta(), opt.harmonic);
        if (opt.repetitions > 0)
            spec.repetition_delays.assign(std::size_t(opt.repetitions),
                                          total / double(opt.repetitions));
    }
    const double sigma_z = run_counting(spec);
    double total = 0.0;
    for (double t : spec.repetition_delays) total += t;
    const double dt = index_qubit.delta() * total;

    rec.experiment = "count";
    rec.config["repetitions"] = opt.repetitions;
    rec.config["repetition_delays"] = spec.repetition_delays;
    rec.results = {{"sigma_z", sigma_z},
                   {"closed_product", counting_closed_form(opt.repetitions, omega, dt)},
                   {"closed_shifted", counting_shifted_form(opt.repetitions, omega, dt)},
                   {"delta_tau", dt}};
    return rec;
}

ExperimentRecord run_sweep_experiment(const SweepOptions& opt) {
    if (opt.points < 1) throw UsageError("--points must be positive");
    if (opt.tau_max < opt.tau_min) throw UsageError("--tau-max must be >= --tau-min");
    if (opt.tau_min < 0.0) throw UsageError("idle times are non-negative");

    ExperimentRecord rec;
    rec.timestamp = now_utc();
    rec.experiment = "sweep";
    rec.config = {{"kind", opt.kind},     {"delta", opt.delta}, {"tau_min", opt.tau_min},
                  {"tau_max", opt.tau_max}, {"points", opt.points}};

    const auto tau_at = [&](int i) {
        if (opt.points == 1) return opt.tau_min;
        return opt.tau_min + (opt.tau_max - opt.tau_min) * double(i) / double(opt.points - 1);
    };

    if (opt.kind == "pea") {
        rec.config["sign"] = opt.sign;
        rec.table_header = {"tau", "success", "success_closed"};
        for (int i = 0; i < opt.points; ++i) {
            const double tau = tau_at(i);
            const NotGateOutcome out = run_not_gate_demo(opt.sign, opt.delta, tau);
            const double sim = opt.sign == 1 ? out.p0 : out.p1;
            const double closed = opt.sign == 1 ? out.p0_closed : out.p1_closed;
            rec.table_rows.push_back({tau, sim, closed});
        }
    } else if (opt.kind == "count") {
        const auto f = solution_predicate(opt.solutions, opt.m);
        const std::uint64_t dim = std::uint64_t(1) << opt.m;
        const double omega =
            std::acos(1.0 - 2.0 * double(opt.solutions.size()) / double(dim)) / (2.0 * kPi);
        rec.config["repetitions"] = opt.repetitions;
        rec.config["m"] = opt.m;
        rec.config["solutions"] = opt.solutions;
        rec.config["omega"] = omega;
        rec.table_header = {"tau", "sigma_z", "closed_product", "closed_shifted"};
        for (int i = 0; i < opt.points; ++i) {
            const double tau = tau_at(i);
            CountingSpec spec;
            spec.target_size = opt.m;
            spec.solutions = f;
            spec.repetitions = opt.repetitions;
            spec.repetition_delays.assign(std::size_t(opt.repetitions),
                                          tau / double(opt.repetitions));
            spec.index_qubit = PhysicalQubit{opt.e0, opt.e0 + opt.delta};
            const double dt = opt.delta * tau;
            rec.table_rows.push_back({tau, run_counting(spec),
                                      counting_closed_form(opt.repetitions, omega, dt),
                                      counting_shifted_form(opt.repetitions, omega, dt)});
        }
    } else {
        throw UsageError("unknown sweep kind '" + opt.kind + "' (want pea|count)");
    }

    rec.results = {{"rows", rec.table_rows.size()}};
    return rec;
}

ExperimentRecord run_schedule_experiment(const ScheduleOptions& opt) {
    if (opt.delta.empty()) throw UsageError("--delta is required");
    RegisterOptions reg;
    reg.delta = opt.delta;
    reg.e0 = opt.e0;
    const std::vector<PhysicalQubit> qubits = build_qubits(reg, int(opt.delta.size()));
    ScheduleConstraints constraints;
    constraints.min_total = opt.min_total;
    constraints.min_before = opt.min_before;
    constraints.min_after = opt.min_after;
    constraints.max_harmonic = opt.max_harmonic;
    const DelaySchedule schedule = schedule_for_register(qubits, constraints);

    ExperimentRecord rec;
    rec.experiment = "schedule";
    rec.timestamp = now_utc();
    rec.config = {{"delta", opt.delta},
                  {"min_total", opt.min_total},
                  {"min_before", opt.min_before},
                  {"min_after", opt.min_after},
                  {"max_harmonic", opt.max_harmonic}};
    rec.results = {{"schedule", schedule_json(schedule)}};
    rec.table_header = {"qubit", "delta", "before", "after", "total", "success"};
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        const DelayPair& p = schedule.qubit_delays[j];
        rec.table_rows.push_back({double(j), qubits[j].delta(), p.before, p.after, p.total(),
                                  success_probability(qubits[j].delta(), p.total())});
    }
    return rec;
}

}  // namespace qdelay::expt
