#include "twinarm/cli.hpp"

#include "twinarm/config.hpp"
#include "twinarm/error.hpp"
#include "twinarm/format.hpp"
#include "twinarm/json_io.hpp"
#include "twinarm/service.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace twinarm {

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    bool json_out = false;
    bool degrees = false;

    std::string arm = "right";
    std::string frame = "shoulder";
    std::vector<double> joints;
    std::vector<double> target;
    std::vector<double> rotation;
    std::vector<double> init;

    double sweep_min = 0.0;
    double sweep_max = -1.0;
    double sweep_step = 1.0;
    std::string format = "table";
    std::string policy = "reference_choice";

    std::vector<double> pixel;
    double depth = 0.0;
    std::vector<double> head_joints;
    std::string detections_path;
    std::string depth_image_path;
    std::string strip_path;
    bool strip_example = false;
    double noise = 0.0;
    int trials = 200;

    std::vector<double> object;
    std::vector<double> goal;

    std::string first = "human";

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string journal;
};

// Rounding residue such as 1e-16 is shown as 0 in human-readable output.
std::string shown(double x) { return format_number(std::abs(x) < 1e-12 ? 0.0 : x); }

std::string vec_text(const Vec3& v) {
    return "(" + shown(v.x()) + ", " + shown(v.y()) + ", " + shown(v.z()) + ")";
}

Vec3 to_vec3(const std::vector<double>& v, const char* what) {
    if (v.size() != 3) throw Error(ErrorCode::invalid_parameter, std::string(what) + " needs 3 comma-separated values");
    return {v[0], v[1], v[2]};
}

double angle_factor(const Options& o) { return o.degrees ? std::numbers::pi / 180.0 : 1.0; }

std::vector<double> scale_all(std::vector<double> v, double f) {
    for (auto& x : v) x *= f;
    return v;
}

std::vector<double> joint_list(const JointVector& j, double f) {
    std::vector<double> v(j.values().begin(), j.values().end());
    return scale_all(std::move(v), 1.0 / f);
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += shown(v[i]);
    }
    return "[" + s + "]";
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_parameter, "cannot open '" + path + "'");
    return in;
}

void print_pose(std::ostream& out, const Pose& pose) {
    out << "position " << vec_text(pose.position()) << '\n';
    const Mat3 r = pose.rotation();
    out << "rotation\n";
    for (int i = 0; i < 3; ++i) {
        out << "  " << list_text({r(i, 0), r(i, 1), r(i, 2)}) << '\n';
    }
}

void print_plan(std::ostream& out, const Plan& plan) {
    out << (plan.handover ? "handover plan" : "single-arm plan") << ", " << plan.core_action_count()
        << " actions (" << plan.actions.size() << " with approach waypoints)\n";
    int n = 0;
    for (const auto& a : plan.actions) {
        out << std::setw(3) << ++n << ". " << std::left << std::setw(6) << to_string(a.arm) << std::setw(9)
            << to_string(a.kind) << std::right;
        if (a.pose) out << vec_text(a.pose->position());
        if (a.approach) out << " [approach]";
        if (!a.label.empty()) out << "  " << a.label;
        out << '\n';
    }
}

SweepTable run_sweep(const RobotConfig& cfg, const Options& o) {
    const double hi = o.sweep_max < 0 ? cfg.arm.link_budget() : o.sweep_max;
    return sweep_link_lengths(cfg.arm, cfg.motor, o.sweep_min, hi, o.sweep_step);
}

std::string interval_text(const std::optional<Interval>& i) {
    if (!i) return "none";
    return "[" + format_number(i->lower) + ", " + format_number(i->upper) + "]";
}

int cmd_design_sweep(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    const SweepTable table = run_sweep(cfg, o);
    const FeasibilityReport report = feasibility_report(table, cfg.arm, cfg.motor);
    if (o.json_out) {
        out << versioned({{"table", table}, {"report", report}}).dump(2) << '\n';
        return 0;
    }
    if (o.format == "csv") {
        write_sweep_csv(table, out);
        return 0;
    }
    if (o.format == "plot") {
        write_sweep_plot_csv(table, out);
        return 0;
    }
    out << "limits T1 < " << format_number(table.limits.T1wc) << ", T2 < " << format_number(table.limits.T2wc)
        << " kg*cm\n";
    out << std::setw(8) << "L1" << std::setw(8) << "L2" << std::setw(14) << "T1" << std::setw(14) << "T2"
        << "  feasible\n";
    for (const auto& r : table.rows) {
        out << std::setw(8) << format_number(r.L1) << std::setw(8) << format_number(r.L2) << std::setw(14)
            << format_number(r.T1, 8) << std::setw(14) << format_number(r.T2, 8) << "  "
            << (r.feasible ? "yes" : "no") << '\n';
    }
    out << "feasible L1 on grid: " << interval_text(report.grid) << '\n';
    out << "feasible L1 (continuous): " << interval_text(report.continuous) << '\n';
    out << "note: " << report.note << '\n';
    return 0;
}

int cmd_design_select(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    const SweepTable table = run_sweep(cfg, o);
    const SelectionPolicy policy = parse_selection_policy(o.policy);
    const LengthSelection sel = select_lengths(table, policy, cfg.arm.L1);
    if (o.json_out) {
        out << versioned({{"policy", std::string(to_string(policy))}, {"L1", sel.L1}, {"L2", sel.L2}}).dump(2)
            << '\n';
    } else {
        out << "policy " << to_string(policy) << ": L1 = " << format_number(sel.L1)
            << " cm, L2 = " << format_number(sel.L2) << " cm\n";
    }
    return 0;
}

int cmd_fk(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    const auto values = scale_all(o.joints, angle_factor(o));
    Pose pose;
    std::string frame = o.frame;
    if (o.arm == "head") {
        pose = head_fk(cfg.body, JointVector(ChainKind::head, values));
        frame = "neck";
    } else {
        const ArmSide side = parse_arm_side(o.arm);
        if (frame != "shoulder" && frame != "neck") {
            throw Error(ErrorCode::invalid_parameter, "frame must be shoulder or neck");
        }
        pose = arm_fk(cfg.arm, JointVector(ChainKind::arm, values));
        if (frame == "neck") pose = Pose{cfg.workspace().shoulders[side] * pose.transform};
    }
    if (o.json_out) {
        out << versioned({{"arm", o.arm}, {"frame", frame}, {"pose", pose}}).dump(2) << '\n';
    } else {
        out << o.arm << " end-effector in " << frame << " frame\n";
        print_pose(out, pose);
    }
    return 0;
}

int cmd_ik(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    const ArmSide side = parse_arm_side(o.arm);
    if (o.frame != "shoulder" && o.frame != "neck") {
        throw Error(ErrorCode::invalid_parameter, "frame must be shoulder or neck");
    }
    const RigidTransform to_shoulder =
        o.frame == "neck" ? invert(cfg.workspace().shoulders[side]) : RigidTransform::identity();
    const Vec3 target = to_vec3(o.target, "--target");
    IKParams params = cfg.ik;
    if (!o.init.empty()) {
        if (o.init.size() != 3) throw Error(ErrorCode::invalid_parameter, "--init needs 3 values");
        const auto init = scale_all(o.init, angle_factor(o));
        params.init = {init[0], init[1], init[2]};
    }

    IKResult result;
    if (!o.rotation.empty()) {
        if (o.rotation.size() != 9) throw Error(ErrorCode::invalid_parameter, "--rotation needs 9 row-major values");
        Mat3 r;
        for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = o.rotation[static_cast<std::size_t>(i)];
        result = solve_full(cfg.arm, Pose{to_shoulder * RigidTransform(r, target)}, params);
    } else {
        result = solve_position(cfg.arm, apply(to_shoulder, target), params.init, params);
    }

    const auto joints = joint_list(result.joints, angle_factor(o));
    if (o.json_out) {
        json doc = versioned(json(result));
        doc["joints"] = joints;
        doc["units"] = o.degrees ? "deg" : "rad";
        out << doc.dump(2) << '\n';
    } else {
        out << (result.converged ? "converged" : "did not converge") << " after " << result.iterations
            << " iterations (" << result.attempts << " attempt" << (result.attempts == 1 ? "" : "s") << ")\n";
        out << "joints " << list_text(joints) << (o.degrees ? " deg" : " rad") << '\n';
        out << "position residual " << format_number(result.residual) << " cm\n";
        if (!o.rotation.empty()) out << "rotation error " << format_number(result.rotation_error) << '\n';
        if (result.wrist_singular) out << "wrist is singular\n";
        if (!result.diagnostic.empty()) out << result.diagnostic << '\n';
    }
    return result.converged ? 0 : 1;
}

int cmd_localize(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    CameraModel cam = cfg.camera_model();
    if (!o.head_joints.empty()) {
        cam.head_joints = JointVector(ChainKind::head, scale_all(o.head_joints, angle_factor(o)));
    }

    if (o.strip_example || !o.strip_path.empty()) {
        StripScene scene = StripScene::example();
        if (!o.strip_path.empty()) {
            auto in = open_input(o.strip_path);
            scene = strip_scene_from_json(json::parse(in));
        }
        const RenderedStrip rendered = render_strip(scene);
        const StripSize size = strip_dimensions(scene.camera, rendered.corner_pixels, rendered.depth);
        json doc = {{"width", size.width}, {"height", size.height}};
        std::optional<NoiseStudy> study;
        if (o.noise > 0) {
            study = run_noise_study(scene, o.noise, o.trials);
            doc["noise"] = {{"sigma", study->sigma},
                            {"trials", study->trials},
                            {"mean_corner_error", study->mean_corner_error},
                            {"max_corner_error", study->max_corner_error},
                            {"mean_width_error", study->mean_width_error},
                            {"mean_height_error", study->mean_height_error}};
        }
        if (o.json_out) {
            out << versioned(doc).dump(2) << '\n';
        } else {
            out << "strip width " << format_number(size.width) << " cm, height " << format_number(size.height)
                << " cm\n";
            if (study) {
                out << "noise sigma " << format_number(study->sigma) << " cm over " << study->trials
                    << " trials: mean corner error " << format_number(study->mean_corner_error, 6)
                    << " cm, max " << format_number(study->max_corner_error, 6) << " cm, mean width error "
                    << format_number(study->mean_width_error, 6) << " cm, mean height error "
                    << format_number(study->mean_height_error, 6) << " cm\n";
            }
        }
        return 0;
    }

    if (!o.detections_path.empty()) {
        if (o.depth_image_path.empty()) throw Error(ErrorCode::invalid_parameter, "--detections needs --depth-image");
        auto det_in = open_input(o.detections_path);
        const auto detections = json::parse(det_in).get<std::vector<Detection>>();
        auto depth_in = open_input(o.depth_image_path);
        const DepthImage depth = DepthImage::read_text(depth_in);
        const auto located = localize_detections(cam, detections, depth);
        if (o.json_out) {
            out << versioned({{"objects", located}}).dump(2) << '\n';
        } else {
            for (const auto& l : located) {
                out << l.class_label << ": " << (l.position ? vec_text(*l.position) : std::string("no depth")) << '\n';
            }
        }
        return 0;
    }

    if (o.pixel.size() != 2) {
        throw Error(ErrorCode::invalid_parameter, "give --pixel u,v with --depth, --detections, or --strip-example");
    }
    const Vec3 p = back_project(cam, {o.pixel[0], o.pixel[1]}, o.depth);
    if (o.json_out) {
        out << versioned({{"position", vec_to_json(p)}, {"frame", "neck"}}).dump(2) << '\n';
    } else {
        out << "position " << vec_text(p) << " in neck frame\n";
    }
    return 0;
}

int cmd_plan(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    const Plan plan = plan_pick_place(cfg.arm, cfg.workspace(), to_vec3(o.object, "--object"),
                                      to_vec3(o.goal, "--goal"), cfg.planner_options());
    if (o.json_out) {
        out << versioned({{"plan", plan}}).dump(2) << '\n';
    } else {
        print_plan(out, plan);
    }
    return 0;
}

int cmd_play(const RobotConfig& cfg, const Options& o, std::istream& in, std::ostream& out) {
    if (o.first != "human" && o.first != "robot") throw Error(ErrorCode::invalid_parameter, "--first must be human or robot");
    BoardState board = BoardState::empty(o.first == "human" ? Token::o : Token::x);
    const WorkspaceModel ws = cfg.workspace();
    out << "You are O. Enter a cell index 0-8.\n";
    while (!board.over()) {
        if (board.side_to_move() == Token::x) {
            const int cell = best_move(board);
            board = step_game(board, cell, Token::x);
            out << "robot plays " << cell << '\n';
            try {
                print_plan(out, plan_pick_place(cfg.arm, ws, cfg.planner.token_supply, cell_to_world(cfg.board, cell),
                                                cfg.planner_options()));
            } catch (const Error& e) {
                out << "no plan for this move: " << e.what() << '\n';
            }
            continue;
        }
        out << '\n' << board.render() << "your move: " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
            out << "\nend of input, leaving the game\n";
            return 0;
        }
        std::istringstream parse(line);
        int cell = -1;
        std::string rest;
        if (!(parse >> cell) || (parse >> rest)) {
            out << "please enter a single cell index 0-8\n";
            continue;
        }
        try {
            board = step_game(board, cell, Token::o);
        } catch (const Error& e) {
            out << "illegal move: " << e.what() << '\n';
        }
    }
    out << '\n' << board.render();
    switch (board.status()) {
        case GameStatus::x_won: out << "robot wins\n"; break;
        case GameStatus::o_won: out << "you win\n"; break;
        default: out << "draw\n"; break;
    }
    return 0;
}

int cmd_serve(const RobotConfig& cfg, const Options& o, std::ostream& out) {
    Service service(cfg, o.journal.empty() ? std::nullopt : std::optional<std::string>(o.journal));
    out << "serving on http://" << o.host << ':' << o.port << std::endl;
    if (!service.serve(o.host, o.port)) {
        throw Error(ErrorCode::invalid_parameter, "cannot listen on " + o.host + ":" + std::to_string(o.port));
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const argv[], std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"twinarm: dual-arm manipulator design, kinematics, perception and planning"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", o.config_path, "robot configuration JSON file");
    app.add_flag("--json", o.json_out, "structured JSON output");
    app.add_flag("--degrees", o.degrees, "joint angles in degrees instead of radians");

    auto* design = app.add_subcommand("design", "link-length design");
    design->require_subcommand(1);
    design->fallthrough();
    auto add_sweep_range = [&](CLI::App* sub) {
        sub->add_option("--min", o.sweep_min, "smallest L1 in cm");
        sub->add_option("--max", o.sweep_max, "largest L1 in cm (default: link budget)");
        sub->add_option("--step", o.sweep_step, "L1 increment in cm");
    };
    auto* sweep = design->add_subcommand("sweep", "torque sweep over L1");
    add_sweep_range(sweep);
    sweep->add_option("--format", o.format, "table, csv or plot")->check(CLI::IsMember({"table", "csv", "plot"}));
    auto* select = design->add_subcommand("select", "pick L1/L2 from the sweep");
    add_sweep_range(select);
    select->add_option("--policy", o.policy, "reference_choice or interval_midpoint")
        ->check(CLI::IsMember({"reference_choice", "interval_midpoint"}));

    auto* fk = app.add_subcommand("fk", "forward kinematics");
    fk->add_option("--arm", o.arm, "left, right or head")->check(CLI::IsMember({"left", "right", "head"}));
    fk->add_option("--joints", o.joints, "comma-separated joint angles")->delimiter(',')->required();
    fk->add_option("--frame", o.frame, "shoulder or neck")->check(CLI::IsMember({"shoulder", "neck"}));

    auto* ik = app.add_subcommand("ik", "inverse kinematics");
    ik->add_option("--arm", o.arm, "left or right")->check(CLI::IsMember({"left", "right"}));
    ik->add_option("--target", o.target, "x,y,z target position")->delimiter(',')->required();
    ik->add_option("--rotation", o.rotation, "9 row-major rotation entries for a full pose")->delimiter(',');
    ik->add_option("--init", o.init, "initial theta0,theta1,theta2")->delimiter(',');
    ik->add_option("--frame", o.frame, "shoulder or neck")->check(CLI::IsMember({"shoulder", "neck"}));

    auto* localize = app.add_subcommand("localize", "depth-camera localization");
    localize->add_option("--pixel", o.pixel, "u,v pixel")->delimiter(',');
    localize->add_option("--depth", o.depth, "depth along the optical axis in cm");
    localize->add_option("--head-joints", o.head_joints, "pan,tilt head angles")->delimiter(',');
    localize->add_option("--detections", o.detections_path, "JSON array of detections");
    localize->add_option("--depth-image", o.depth_image_path, "depth image text file");
    localize->add_option("--strip", o.strip_path, "strip scene JSON file");
    localize->add_flag("--strip-example", o.strip_example, "use the built-in strip scene");
    localize->add_option("--noise", o.noise, "depth noise sigma in cm for a Monte-Carlo study");
    localize->add_option("--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);

    auto* plan = app.add_subcommand("plan", "pick-and-place planning");
    plan->add_option("--object", o.object, "object x,y,z in neck frame")->delimiter(',')->required();
    plan->add_option("--goal", o.goal, "goal x,y,z in neck frame")->delimiter(',')->required();

    auto* play = app.add_subcommand("play", "play tic-tac-toe against the robot");
    play->add_option("--first", o.first, "human or robot")->check(CLI::IsMember({"human", "robot"}));

    auto* serve = app.add_subcommand("serve", "run the HTTP/JSON service");
    serve->add_option("--host", o.host, "bind address");
    serve->add_option("--port", o.port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--journal", o.journal, "append-only session journal file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n";
        CLI::App* context = &app;
        for (auto* sub : app.get_subcommands()) {
            context = sub;
            for (auto* nested : sub->get_subcommands()) context = nested;
        }
        err << context->help();
        return 2;
    }

    try {
        RobotConfig cfg;
        if (!o.config_path.empty()) {
            cfg = load_config_file(o.config_path);
        }
        cfg.validate();

        if (design->parsed()) {
            return sweep->parsed() ? cmd_design_sweep(cfg, o, out) : cmd_design_select(cfg, o, out);
        }
        if (fk->parsed()) return cmd_fk(cfg, o, out);
        if (ik->parsed()) return cmd_ik(cfg, o, out);
        if (localize->parsed()) return cmd_localize(cfg, o, out);
        if (plan->parsed()) return cmd_plan(cfg, o, out);
        if (play->parsed()) return cmd_play(cfg, o, in, out);
        if (serve->parsed()) return cmd_serve(cfg, o, out);
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "error [invalid_parameter]: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace twinarm
