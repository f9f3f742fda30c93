#pragma once

// Pixel + depth back-projection into the neck-base frame.
//
// Camera convention: the camera frame is the last head DH frame, optical axis
// along its z. Depth is the camera-frame z of the point (distance along the
// optical axis), not the ray length. A depth of 0 means "no return".

#include "twinarm/kinematics.hpp"

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace twinarm {

struct Pixel {
    double u = 0.0;
    double v = 0.0;
};

struct CameraModel {
    Mat3 K = Mat3::Identity();
    JointVector head_joints = JointVector::zeros(ChainKind::head);
    BodyGeometry geometry;

    /// Throws invalid_camera unless K is upper-triangular with a positive diagonal.
    void validate() const;
    /// Camera frame to neck-base frame, i.e. head_fk at head_joints.
    RigidTransform camera_to_base() const;
};

/// Row-major depth grid in cm. Cell (col, row) covers pixels rounding to it.
class DepthImage {
public:
    DepthImage(int width, int height, std::vector<double> depths);
    static DepthImage filled(int width, int height, double depth);

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int col, int row) const;
    /// Nearest-cell lookup; out-of-image pixels read as 0 (no return).
    double sample(const Pixel& p) const;
    std::span<const double> values() const { return depths_; }

    /// Text grid: `width height` header, then row-major depths.
    static DepthImage read_text(std::istream& in);
    void write_text(std::ostream& out) const;

private:
    int width_;
    int height_;
    std::vector<double> depths_;
};

struct BoundingBox {
    double u_min = 0.0;
    double v_min = 0.0;
    double u_max = 0.0;
    double v_max = 0.0;
};

/// Output of the object detector. The detector itself is external; these are fed in.
struct Detection {
    std::string class_label;
    BoundingBox bbox;
    double confidence = 0.0;

    void validate() const;
    Pixel centroid() const;
};

struct LocalizedObject {
    std::string class_label;
    std::optional<Vec3> position;  ///< empty: no valid depth at the centroid
};

Vec3 back_project(const CameraModel& cam, const Pixel& pixel, double depth);

struct Projection {
    Pixel pixel;
    double depth = 0.0;
};

/// Inverse of back_project. Throws behind_camera when the point is not in front of the camera.
Projection project(const CameraModel& cam, const Vec3& point);

struct StripSize {
    double width = 0.0;
    double height = 0.0;
};

/**
 * Measures a rectangular strip from its four corner pixels.
 *
 * Corners go around the quadrilateral: width is the mean of edges 0-1 and 2-3,
 * height the mean of edges 1-2 and 3-0.
 */
StripSize strip_dimensions(const CameraModel& cam, const std::array<Pixel, 4>& corners,
                           const DepthImage& depth);

std::vector<LocalizedObject> localize_detections(const CameraModel& cam,
                                                 std::span<const Detection> detections,
                                                 const DepthImage& depth);

/// A planar strip in front of the camera, for synthetic experiments.
struct StripScene {
    CameraModel camera;
    int width = 640;
    int height = 480;
    std::array<Vec3, 4> corners{};  ///< neck-base frame, ordered around the strip

    /// Camera with Kinect-like intrinsics looking forward at a 20 x 5 cm strip 80 cm away.
    static StripScene example();
};

struct RenderedStrip {
    DepthImage depth;
    std::array<Pixel, 4> corner_pixels;
};

/// Noiseless depth render: strip cells are ray-cast, each corner's cell holds that corner's exact depth.
RenderedStrip render_strip(const StripScene& scene);

struct NoiseStudy {
    double sigma = 0.0;
    int trials = 0;
    double mean_corner_error = 0.0;  ///< cm, over all corners and trials
    double max_corner_error = 0.0;
    double mean_width_error = 0.0;
    double mean_height_error = 0.0;
};

/// Adds N(0, sigma) depth noise to the corner samples and measures recovery error.
NoiseStudy run_noise_study(const StripScene& scene, double sigma, int trials, std::uint64_t seed = 42);

}  // namespace twinarm
