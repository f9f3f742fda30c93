#include "twinarm/design.hpp"
#include "twinarm/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace twinarm;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Feasible L1 bounds solved by hand from the collapsed torque expressions:
// T1 is linear in L1, T2 is quadratic in l2 = budget - L1.
Interval quadratic_oracle() {
    const double K = 2.7e-3 * 12 * 0.3, m = 0.064, mp = 0.2, le = 8, b = 42;
    const double upper = (28 - (K * b * b / 2 + 3 * m * b + mp * (b + le))) / m;
    const double qa = K / 2, qb = 3 * m + mp, qc = mp * le - 14;
    const double l2_max = (-qb + std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
    return {b - l2_max, upper};
}

}  // namespace

TEST(LinkMass, Examples) {
    const SheetSpec sheet;
    EXPECT_DOUBLE_EQ(link_mass(0, sheet), 0.0);
    EXPECT_NEAR(sheet.linear_density(), 0.00972, 1e-15);
    EXPECT_NEAR(link_mass(20, sheet), 0.1944, 1e-12);
    EXPECT_NEAR(link_mass(42, sheet), 0.40824, 1e-12);
    EXPECT_THROW(link_mass(-1, sheet), Error);
}

TEST(ShoulderTorques, ReferenceArm) {
    const auto t = shoulder_torques_general(20, 22, ArmSpec{});
    EXPECT_LT(rel_err(t.T1, 27.91704), 1e-9);
    EXPECT_LT(rel_err(t.T2, 12.57624), 1e-9);
    const auto c = shoulder_torques_collapsed(20, ArmSpec{});
    EXPECT_LT(rel_err(c.T1, t.T1), 1e-12);
    EXPECT_LT(rel_err(c.T2, t.T2), 1e-12);
}

TEST(ShoulderTorques, DegenerateSpecs) {
    ArmSpec massless;
    massless.motor_mass = 0;
    massless.payload_mass = 0;
    massless.sheet.density = 0;
    const auto zero = shoulder_torques_general(20, 22, massless);
    EXPECT_DOUBLE_EQ(zero.T1, 0.0);
    EXPECT_DOUBLE_EQ(zero.T2, 0.0);

    ArmSpec motors_only = massless;
    motors_only.motor_mass = 0.064;
    const auto t = shoulder_torques_general(15, 0, motors_only);
    EXPECT_DOUBLE_EQ(t.T2, 0.0);
    EXPECT_NEAR(t.T1, 0.064 * 15 + 3 * 0.064 * 15, 1e-12);
}

TEST(ShoulderTorques, CollapsedEndpoints) {
    const ArmSpec spec;
    EXPECT_NEAR(shoulder_torques_collapsed(42, spec).T2, 1.6, 1e-12);
    const double t2_at_zero = shoulder_torques_collapsed(0, spec).T2;
    for (double L1 = 1; L1 <= 42; L1 += 1) EXPECT_LT(shoulder_torques_collapsed(L1, spec).T2, t2_at_zero);
    EXPECT_THROW(shoulder_torques_collapsed(43, spec), Error);
    EXPECT_THROW(shoulder_torques_collapsed(-0.5, spec), Error);
}

TEST(ShoulderTorques, CollapseIdentityOnFineGrid) {
    const ArmSpec spec;
    for (int i = 0; i <= 4200; ++i) {
        const double L1 = i * 0.01;
        const auto g = shoulder_torques_general(L1, 42 - L1, spec);
        const auto c = shoulder_torques_collapsed(L1, spec);
        ASSERT_LT(rel_err(g.T1, c.T1), 1e-9) << L1;
        ASSERT_LT(rel_err(g.T2, c.T2), 1e-9) << L1;
    }
}

TEST(ShoulderTorques, Monotone) {
    const ArmSpec spec;
    double prev_t1 = -1, prev_t2 = 1e9;
    for (int i = 0; i <= 4200; ++i) {
        const auto c = shoulder_torques_collapsed(i * 0.01, spec);
        ASSERT_GT(c.T1, prev_t1);
        ASSERT_LT(c.T2, prev_t2);
        prev_t1 = c.T1;
        prev_t2 = c.T2;
    }
}

TEST(WorstCaseLimits, Defaults) {
    const MotorSpec motor;
    EXPECT_NEAR(motor.beta(), 0.4, 1e-15);
    const auto l = worst_case_limits(motor);
    EXPECT_NEAR(l.T1wc, 28, 1e-12);
    EXPECT_NEAR(l.T2wc, 14, 1e-12);
    MotorSpec ideal;
    ideal.efficiency = 1;
    ideal.safety_factor = 1;
    const auto li = worst_case_limits(ideal);
    EXPECT_DOUBLE_EQ(li.T1wc, 70);
    EXPECT_DOUBLE_EQ(li.T2wc, 35);
}

TEST(IsFeasible, StrictInequality) {
    const WorstCaseLimits l{28, 14};
    EXPECT_TRUE(is_feasible({27.9, 13.9}, l));
    EXPECT_FALSE(is_feasible({28, 13}, l));
    EXPECT_FALSE(is_feasible({27, 14}, l));
}

TEST(Sweep, DefaultGrid) {
    const SweepTable t = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 1);
    ASSERT_EQ(t.rows.size(), 43u);
    EXPECT_DOUBLE_EQ(t.budget, 42);
    const auto& r10 = t.rows[10];
    EXPECT_DOUBLE_EQ(r10.L1, 10);
    EXPECT_NEAR(r10.T2, 19.12064, 1e-9);
    EXPECT_FALSE(r10.feasible);
    EXPECT_TRUE(t.rows[20].feasible);
    for (const auto& r : t.rows) {
        EXPECT_NEAR(r.L1 + r.L2, 42, 1e-12);
        EXPECT_NE(r.T1, t.sentinel_value);
        EXPECT_EQ(r.feasible, is_feasible({r.T1, r.T2}, t.limits));
    }
}

TEST(Sweep, RejectsBadRanges) {
    EXPECT_THROW(sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 0), Error);
    EXPECT_THROW(sweep_link_lengths(ArmSpec{}, MotorSpec{}, 10, 5, 1), Error);
    EXPECT_THROW(sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 50, 1), Error);
}

TEST(Sweep, CsvExports) {
    const SweepTable t = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 1);
    std::ostringstream csv, plot;
    write_sweep_csv(t, csv);
    write_sweep_plot_csv(t, plot);
    std::istringstream a(csv.str()), b(plot.str());
    std::string line;
    std::getline(a, line);
    EXPECT_EQ(line, "L1,T1,T2,feasible");
    std::getline(b, line);
    EXPECT_EQ(line, "L1,T1_plot,T2_plot");
    int rows = 0;
    while (std::getline(b, line)) {
        const double L1 = std::stod(line.substr(0, line.find(',')));
        if (L1 == 10) EXPECT_EQ(line, "10,-10,-10");
        if (L1 == 20) EXPECT_EQ(line.rfind("20,27.91704,12.57624", 0), 0u) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 43);
    int csv_rows = 0;
    while (std::getline(a, line)) ++csv_rows;
    EXPECT_EQ(csv_rows, 43);
}

TEST(SelectLengths, Policies) {
    const SweepTable t = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 1);
    const auto paper = select_lengths(t, SelectionPolicy::reference_choice);
    EXPECT_DOUBLE_EQ(paper.L1, 20);
    EXPECT_DOUBLE_EQ(paper.L2, 22);
    const auto mid = select_lengths(t, SelectionPolicy::interval_midpoint);
    EXPECT_DOUBLE_EQ(mid.L1, 19.5);
    EXPECT_DOUBLE_EQ(mid.L1 + mid.L2, 42);

    const SweepTable dense = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 0.01);
    const auto dense_mid = select_lengths(dense, SelectionPolicy::interval_midpoint);
    const Interval o = quadratic_oracle();
    EXPECT_NEAR(dense_mid.L1, 0.5 * (o.lower + o.upper), 0.01);

    MotorSpec weak;
    weak.stall_torque = 5;
    const SweepTable none = sweep_link_lengths(ArmSpec{}, weak, 0, 42, 1);
    try {
        select_lengths(none, SelectionPolicy::reference_choice);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::infeasible_design);
    }
    EXPECT_EQ(parse_selection_policy("interval_midpoint"), SelectionPolicy::interval_midpoint);
    EXPECT_THROW(parse_selection_policy("best"), Error);
}

TEST(FeasibleInterval, MatchesQuadraticOracle) {
    const Interval o = quadratic_oracle();
    EXPECT_NEAR(o.lower, 17.69264825416604, 1e-9);
    EXPECT_NEAR(o.upper, 21.29625, 1e-9);
    const auto c = feasible_continuous_interval(ArmSpec{}, MotorSpec{});
    ASSERT_TRUE(c);
    EXPECT_NEAR(c->lower, o.lower, 1e-9);
    EXPECT_NEAR(c->upper, o.upper, 1e-9);

    const SweepTable t = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 1);
    const auto g = feasible_grid_interval(t);
    ASSERT_TRUE(g);
    EXPECT_DOUBLE_EQ(g->lower, 18);
    EXPECT_DOUBLE_EQ(g->upper, 21);
}

TEST(FeasibleInterval, ReportFlagsReferenceWindow) {
    const SweepTable t = sweep_link_lengths(ArmSpec{}, MotorSpec{}, 0, 42, 1);
    const FeasibilityReport r = feasibility_report(t, ArmSpec{}, MotorSpec{});
    EXPECT_FALSE(r.reference_reproduced);
    EXPECT_DOUBLE_EQ(r.reference.lower, 16);
    EXPECT_DOUBLE_EQ(r.reference.upper, 24);
    EXPECT_NE(r.note.find("NOT reproduced"), std::string::npos);
    EXPECT_NE(r.note.find("17.69"), std::string::npos);
}

TEST(FeasibleInterval, NoneForWeakMotor) {
    MotorSpec weak;
    weak.stall_torque = 5;
    EXPECT_FALSE(feasible_continuous_interval(ArmSpec{}, weak));
}
