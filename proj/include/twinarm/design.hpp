#pragma once

// Static torque sizing of the two shoulder-side links.
//
// Torques are mass-moments in kg*cm with gravity implicit, the convention in
// which servo stall torques are quoted (35 kg*cm). No conversion to N*m is
// done anywhere.

#include "twinarm/kinematics.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace twinarm {

struct MotorSpec {
    double stall_torque = 35.0;     ///< kg*cm per motor
    double efficiency = 0.7;
    double safety_factor = 1.75;
    int shoulder_motor_count = 2;   ///< motors ganged on joint S1

    /// Worst-case derating factor eta / safety_factor.
    double beta() const { return efficiency / safety_factor; }
    void validate() const;
};

struct TorquePair {
    double T1 = 0.0;
    double T2 = 0.0;
};

struct WorstCaseLimits {
    double T1wc = 0.0;
    double T2wc = 0.0;
};

struct TorqueReport {
    double L1 = 0.0;
    double L2 = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    bool feasible = false;
};

struct SweepTable {
    std::vector<TorqueReport> rows;   ///< strictly increasing L1; true torques only
    WorstCaseLimits limits;
    double budget = 0.0;
    double sentinel_value = -10.0;    ///< substituted for infeasible rows in plot exports
};

/// Mass of a link of length L cut from `sheet`. Throws on negative L.
double link_mass(double length, const SheetSpec& sheet);

/// Holding torques at S1 and S2 for arbitrary link lengths.
TorquePair shoulder_torques_general(double L1, double L2, const ArmSpec& spec);

/// Same torques after substituting L2 = budget - L1; budget defaults to spec.link_budget().
TorquePair shoulder_torques_collapsed(double L1, const ArmSpec& spec,
                                      std::optional<double> budget = std::nullopt);

WorstCaseLimits worst_case_limits(const MotorSpec& motor);

/// Strict comparison against the derated limits; boundary-equal is infeasible.
bool is_feasible(const TorquePair& t, const WorstCaseLimits& limits);

/// Evaluates the collapsed torques on L1 = min, min + step, ... <= max.
SweepTable sweep_link_lengths(const ArmSpec& spec, const MotorSpec& motor, double L1_min,
                              double L1_max, double step);

enum class SelectionPolicy { reference_choice, interval_midpoint };

SelectionPolicy parse_selection_policy(std::string_view text);
std::string_view to_string(SelectionPolicy policy);

struct LengthSelection {
    double L1 = 0.0;
    double L2 = 0.0;
};

/**
 * Picks L1 from a sweep.
 *
 * reference_choice: the feasible grid point nearest `preferred_L1` (20 cm).
 * interval_midpoint: midpoint of the longest contiguous feasible run of grid points.
 * Throws infeasible_design when no row is feasible.
 */
LengthSelection select_lengths(const SweepTable& table, SelectionPolicy policy,
                               double preferred_L1 = 20.0);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Longest contiguous run of feasible grid points, if any.
std::optional<Interval> feasible_grid_interval(const SweepTable& table);

/// Continuous feasible L1 range from bisection on the monotone torque curves.
std::optional<Interval> feasible_continuous_interval(const ArmSpec& spec, const MotorSpec& motor);

struct FeasibilityReport {
    std::optional<Interval> grid;
    std::optional<Interval> continuous;
    Interval reference{16.0, 24.0};  ///< design window quoted for the reference arm
    bool reference_reproduced = false;
    std::string note;
};

FeasibilityReport feasibility_report(const SweepTable& table, const ArmSpec& spec,
                                     const MotorSpec& motor, Interval reference = {16.0, 24.0});

/// `L1,T1,T2,feasible` with true torques.
void write_sweep_csv(const SweepTable& table, std::ostream& out);
/// `L1,T1_plot,T2_plot` with the sentinel in place of infeasible torques.
void write_sweep_plot_csv(const SweepTable& table, std::ostream& out);

}  // namespace twinarm
