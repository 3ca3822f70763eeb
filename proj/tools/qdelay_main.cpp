// Command-line front end. All experiment logic lives in qdelay::expt; this
// file only maps flags onto option structs and exceptions onto exit codes:
//   0 success, 1 usage error, 2 numerical/model error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdelay/experiment.hpp"

namespace {

using namespace qdelay;
using namespace qdelay::expt;

void add_register_options(CLI::App* cmd, RegisterOptions& reg) {
    cmd->add_option("--delta", reg.delta,
                    "Level splitting per index qubit (one value broadcasts)")
        ->delimiter(',');
    cmd->add_option("--e0", reg.e0, "Ground energy per index qubit (default 0)")
        ->delimiter(',');
    cmd->add_option("--delays", reg.delays,
                    "Explicit per-qubit delays as before:after,before:after,...");
    cmd->add_option("--policy", reg.policy, "Delay policy: zero | matched | worst");
    cmd->add_option("--harmonic", reg.harmonic, "Harmonic index for matched/worst policies")
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase estimation with free evolution during gate delays"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Key=value config file; command-line flags win");

    std::string format = "json";
    std::string out;
    app.add_option("--format", format, "Output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out,
                   "Output file; relative paths resolve under $QDELAY_OUT_DIR; "
                   "stdout when omitted");

    PeaOptions pea;
    CLI::App* cmd_pea = app.add_subcommand("pea", "Phase estimation of an exact binary phase");
    cmd_pea->add_option("--n", pea.n, "Index register size")->check(CLI::PositiveNumber);
    cmd_pea->add_option("--phase-bits", pea.phase_bits,
                        "Phase bits b0b1...; bit j carries weight 2^(j-n)");
    add_register_options(cmd_pea, pea.reg);
    cmd_pea->add_option("--seed", pea.seed, "Sample one outcome with this seed");

    NotGateOptions notgate;
    CLI::App* cmd_not = app.add_subcommand("notgate", "One-bit eigenvalue readout of sigma_x");
    cmd_not->add_option("--sign", notgate.sign, "Eigenstate sign: 1 or -1")
        ->check(CLI::IsMember({1, -1}));
    cmd_not->add_option("--delta", notgate.delta, "Index qubit level splitting");
    cmd_not->add_option("--e0", notgate.e0, "Index qubit ground energy");
    cmd_not->add_option("--tau", notgate.tau, "Total idle time around the controlled gate");
    cmd_not->add_option("--policy", notgate.policy, "Delay policy: zero | matched | worst");
    cmd_not->add_option("--harmonic", notgate.harmonic, "Harmonic index for the policy")
        ->check(CLI::NonNegativeNumber);

    OrderFindOptions order;
    CLI::App* cmd_ord = app.add_subcommand("orderfind", "Multiplicative order via sampling");
    cmd_ord->add_option("--y", order.y, "Base of the modular multiplication");
    cmd_ord->add_option("--N", order.modulus, "Modulus");
    cmd_ord->add_option("--n", order.n, "Index register size")->check(CLI::PositiveNumber);
    cmd_ord->add_option("--m", order.m, "Target register size")->check(CLI::PositiveNumber);
    add_register_options(cmd_ord, order.reg);
    cmd_ord->add_option("--seed", order.seed, "Sampling seed");

    CountOptions count;
    CLI::App* cmd_cnt = app.add_subcommand("count", "Solution counting via iterate eigenvalues");
    cmd_cnt->add_option("--m", count.m, "Search register size")->check(CLI::PositiveNumber);
    cmd_cnt->add_option("--solutions", count.solutions, "Solution set of the predicate")
        ->delimiter(',');
    cmd_cnt->add_option("--repetitions", count.repetitions, "Controlled-iterate repetitions")
        ->check(CLI::NonNegativeNumber);
    cmd_cnt->add_option("--rep-delays", count.rep_delays,
                        "Idle time before each repetition: t1,t2,...");
    cmd_cnt->add_option("--policy", count.policy, "Delay policy: zero | matched | worst");
    cmd_cnt->add_option("--harmonic", count.harmonic, "Harmonic index for the policy")
        ->check(CLI::NonNegativeNumber);
    cmd_cnt->add_option("--delta", count.delta, "Index qubit level splitting");
    cmd_cnt->add_option("--e0", count.e0, "Index qubit ground energy");
    cmd_cnt->add_option("--k-max", count.k_max,
                        "Sweep k=1..k_max and fit the count (0 = single run)")
        ->check(CLI::NonNegativeNumber);

    SweepOptions sweep;
    CLI::App* cmd_swp = app.add_subcommand("sweep", "Tabulate outcomes over a range of idle times");
    cmd_swp->add_option("--kind", sweep.kind, "What to sweep: pea | count");
    cmd_swp->add_option("--delta", sweep.delta, "Index qubit level splitting");
    cmd_swp->add_option("--e0", sweep.e0, "Index qubit ground energy");
    cmd_swp->add_option("--tau-min", sweep.tau_min, "Smallest total idle time");
    cmd_swp->add_option("--tau-max", sweep.tau_max, "Largest total idle time");
    cmd_swp->add_option("--points", sweep.points, "Number of sweep points")
        ->check(CLI::PositiveNumber);
    cmd_swp->add_option("--sign", sweep.sign, "pea kind: eigenstate sign, 1 or -1")
        ->check(CLI::IsMember({1, -1}));
    cmd_swp->add_option("--repetitions", sweep.repetitions, "count kind: iterate repetitions")
        ->check(CLI::NonNegativeNumber);
    cmd_swp->add_option("--m", sweep.m, "count kind: search register size")
        ->check(CLI::PositiveNumber);
    cmd_swp->add_option("--solutions", sweep.solutions, "count kind: solution set")
        ->delimiter(',');

    ScheduleOptions sched;
    CLI::App* cmd_sch = app.add_subcommand("schedule", "Synthesize matched delay schedules");
    cmd_sch->add_option("--delta", sched.delta, "Level splitting per qubit")
        ->delimiter(',')
        ->required();
    cmd_sch->add_option("--e0", sched.e0, "Ground energy per qubit")->delimiter(',');
    cmd_sch->add_option("--min-total", sched.min_total, "Lower bound on each total delay");
    cmd_sch->add_option("--min-before", sched.min_before, "Lower bound on the leading delay");
    cmd_sch->add_option("--min-after", sched.min_after, "Lower bound on the trailing delay");
    cmd_sch->add_option("--max-harmonic", sched.max_harmonic, "Largest harmonic to consider")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ExperimentRecord rec;
        if (cmd_pea->parsed())
            rec = run_pea_experiment(pea);
        else if (cmd_not->parsed())
            rec = run_not_gate_experiment(notgate);
        else if (cmd_ord->parsed())
            rec = run_order_finding_experiment(order);
        else if (cmd_cnt->parsed())
            rec = run_count_experiment(count);
        else if (cmd_swp->parsed())
            rec = run_sweep_experiment(sweep);
        else
            rec = run_schedule_experiment(sched);
        write_record(rec, out, parse_format(format));
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
