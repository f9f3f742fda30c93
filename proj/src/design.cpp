#include "twinarm/design.hpp"

#include "twinarm/error.hpp"
#include "twinarm/format.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace twinarm {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::invalid_parameter, what);
}

// Root of a monotone f on [lo, hi] where f(lo) and f(hi) differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void MotorSpec::validate() const {
    require(std::isfinite(stall_torque) && stall_torque > 0.0, "stall_torque must be positive");
    require(efficiency > 0.0 && efficiency <= 1.0, "efficiency must lie in (0, 1]");
    require(safety_factor >= 1.0 && std::isfinite(safety_factor), "safety_factor must be >= 1");
    require(shoulder_motor_count >= 1, "shoulder_motor_count must be >= 1");
}

double link_mass(double length, const SheetSpec& sheet) {
    require(std::isfinite(length) && length >= 0.0, "link length must be >= 0");
    return sheet.linear_density() * length;
}

TorquePair shoulder_torques_general(double L1, double L2, const ArmSpec& spec) {
    const double m_L1 = link_mass(L1, spec.sheet);
    const double m_L2 = link_mass(L2, spec.sheet);
    const double m = spec.motor_mass;
    const double m_p = spec.payload_mass;
    return {
        m_L1 * (L1 / 2) + m * L1 + m_L2 * (L1 + L2 / 2) + 3 * m * (L1 + L2) + m_p * (L1 + L2 + spec.l_eff),
        m_L2 * (L2 / 2) + 3 * m * L2 + m_p * (L2 + spec.l_eff),
    };
}

TorquePair shoulder_torques_collapsed(double L1, const ArmSpec& spec, std::optional<double> budget) {
    const double b = budget.value_or(spec.link_budget());
    require(std::isfinite(L1) && L1 >= 0.0 && L1 <= b,
            "L1 must lie in [0, " + format_number(b) + "], got " + format_number(L1));
    const double k = spec.sheet.linear_density();
    const double m = spec.motor_mass;
    const double m_p = spec.payload_mass;
    const double l2 = b - L1;
    return {
        m * L1 + k * b * b / 2 + 3 * m * b + m_p * (b + spec.l_eff),
        k * l2 * l2 / 2 + 3 * m * l2 + m_p * (l2 + spec.l_eff),
    };
}

WorstCaseLimits worst_case_limits(const MotorSpec& motor) {
    motor.validate();
    const double single = motor.stall_torque * motor.efficiency / motor.safety_factor;
    return {motor.shoulder_motor_count * motor.stall_torque * motor.efficiency / motor.safety_factor, single};
}

bool is_feasible(const TorquePair& t, const WorstCaseLimits& limits) {
    return t.T1 < limits.T1wc && t.T2 < limits.T2wc;
}

SweepTable sweep_link_lengths(const ArmSpec& spec, const MotorSpec& motor, double L1_min,
                              double L1_max, double step) {
    spec.validate();
    const double budget = spec.link_budget();
    require(std::isfinite(step) && step > 0.0, "sweep step must be positive");
    require(L1_min >= 0.0 && L1_max <= budget && L1_min < L1_max,
            "sweep range must satisfy 0 <= min < max <= " + format_number(budget));

    SweepTable table;
    table.limits = worst_case_limits(motor);
    table.budget = budget;
    const auto count = static_cast<long>(std::floor((L1_max - L1_min) / step + 1e-9)) + 1;
    if (count < 1) throw Error(ErrorCode::invalid_parameter, "sweep grid is empty");
    table.rows.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double L1 = std::min(L1_min + static_cast<double>(i) * step, L1_max);
        const TorquePair t = shoulder_torques_collapsed(L1, spec, budget);
        table.rows.push_back({L1, budget - L1, t.T1, t.T2, is_feasible(t, table.limits)});
    }
    return table;
}

SelectionPolicy parse_selection_policy(std::string_view text) {
    if (text == "reference_choice") return SelectionPolicy::reference_choice;
    if (text == "interval_midpoint") return SelectionPolicy::interval_midpoint;
    throw Error(ErrorCode::invalid_parameter,
                "policy must be reference_choice or interval_midpoint, got '" + std::string(text) + "'");
}

std::string_view to_string(SelectionPolicy policy) {
    return policy == SelectionPolicy::reference_choice ? "reference_choice" : "interval_midpoint";
}

std::optional<Interval> feasible_grid_interval(const SweepTable& table) {
    std::optional<Interval> best;
    std::size_t best_len = 0;
    std::size_t i = 0;
    while (i < table.rows.size()) {
        if (!table.rows[i].feasible) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < table.rows.size() && table.rows[j + 1].feasible) ++j;
        if (j - i + 1 > best_len) {
            best_len = j - i + 1;
            best = Interval{table.rows[i].L1, table.rows[j].L1};
        }
        i = j + 1;
    }
    return best;
}

LengthSelection select_lengths(const SweepTable& table, SelectionPolicy policy, double preferred_L1) {
    if (table.rows.empty()) throw Error(ErrorCode::invalid_parameter, "sweep table is empty");
    if (policy == SelectionPolicy::interval_midpoint) {
        const auto run = feasible_grid_interval(table);
        if (!run) throw Error(ErrorCode::infeasible_design, "no feasible link length in sweep");
        const double L1 = 0.5 * (run->lower + run->upper);
        return {L1, table.budget - L1};
    }
    const TorqueReport* best = nullptr;
    for (const auto& row : table.rows) {
        if (!row.feasible) continue;
        if (!best || std::abs(row.L1 - preferred_L1) < std::abs(best->L1 - preferred_L1)) best = &row;
    }
    if (!best) throw Error(ErrorCode::infeasible_design, "no feasible link length in sweep");
    return {best->L1, table.budget - best->L1};
}

std::optional<Interval> feasible_continuous_interval(const ArmSpec& spec, const MotorSpec& motor) {
    const WorstCaseLimits limits = worst_case_limits(motor);
    const double budget = spec.link_budget();
    auto t1_margin = [&](double L1) { return shoulder_torques_collapsed(L1, spec).T1 - limits.T1wc; };
    auto t2_margin = [&](double L1) { return shoulder_torques_collapsed(L1, spec).T2 - limits.T2wc; };

    // T1 rises with L1 and T2 falls, so feasibility is a single interval (lower, upper).
    double upper = budget;
    if (t1_margin(0.0) >= 0.0) return std::nullopt;
    if (t1_margin(budget) >= 0.0) upper = bisect(t1_margin, 0.0, budget);
    double lower = 0.0;
    if (t2_margin(budget) >= 0.0) return std::nullopt;
    if (t2_margin(0.0) >= 0.0) lower = bisect(t2_margin, 0.0, budget);
    if (lower >= upper) return std::nullopt;
    return Interval{lower, upper};
}

FeasibilityReport feasibility_report(const SweepTable& table, const ArmSpec& spec,
                                     const MotorSpec& motor, Interval reference) {
    FeasibilityReport r;
    r.grid = feasible_grid_interval(table);
    r.continuous = feasible_continuous_interval(spec, motor);
    r.reference = reference;

    const double step = table.rows.size() > 1 ? table.rows[1].L1 - table.rows[0].L1 : 1.0;
    r.reference_reproduced = r.grid && std::abs(r.grid->lower - reference.lower) <= step &&
                             std::abs(r.grid->upper - reference.upper) <= step;

    std::ostringstream note;
    if (r.continuous) {
        note << "torque model admits L1 in (" << format_number(r.continuous->lower, 4) << ", "
             << format_number(r.continuous->upper, 4) << ") cm";
    } else {
        note << "torque model admits no L1";
    }
    if (r.grid) {
        note << "; feasible grid points " << format_number(r.grid->lower) << ".."
             << format_number(r.grid->upper) << " cm";
    }
    note << "; reference window " << format_number(reference.lower) << "-"
         << format_number(reference.upper) << " cm is "
         << (r.reference_reproduced ? "reproduced" : "NOT reproduced by these equations");
    r.note = note.str();
    return r;
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << "L1,T1,T2,feasible\n";
    for (const auto& row : table.rows) {
        out << format_number(row.L1) << ',' << format_number(row.T1) << ','
            << format_number(row.T2) << ',' << (row.feasible ? "true" : "false") << '\n';
    }
}

void write_sweep_plot_csv(const SweepTable& table, std::ostream& out) {
    out << "L1,T1_plot,T2_plot\n";
    for (const auto& row : table.rows) {
        const double t1 = row.feasible ? row.T1 : table.sentinel_value;
        const double t2 = row.feasible ? row.T2 : table.sentinel_value;
        out << format_number(row.L1) << ',' << format_number(t1) << ',' << format_number(t2) << '\n';
    }
}

}  // namespace twinarm
