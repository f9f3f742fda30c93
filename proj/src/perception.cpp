#include "twinarm/perception.hpp"

#include "twinarm/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace twinarm {

namespace {

constexpr double kMinDepth = 1e-12;

Mat3 inverse_intrinsics(const Mat3& K) {
    for (int i = 0; i < 3; ++i) {
        if (!(K(i, i) > 0.0)) throw Error(ErrorCode::invalid_camera, "intrinsics diagonal must be positive");
    }
    if (K(1, 0) != 0.0 || K(2, 0) != 0.0 || K(2, 1) != 0.0) {
        throw Error(ErrorCode::invalid_camera, "intrinsics must be upper-triangular");
    }
    if (!K.allFinite()) throw Error(ErrorCode::invalid_camera, "intrinsics must be finite");
    return K.inverse();
}

Vec3 sample_corner(const CameraModel& cam, const Pixel& p, const DepthImage& depth) {
    const double d = depth.sample(p);
    if (!(d > 0.0)) {
        throw Error(ErrorCode::no_depth, "no depth at pixel (" + std::to_string(p.u) + ", " +
                                             std::to_string(p.v) + ")");
    }
    return back_project(cam, p, d);
}

double cross2(const Pixel& o, const Pixel& a, const Pixel& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

}  // namespace

void CameraModel::validate() const {
    inverse_intrinsics(K);
    if (head_joints.kind() != ChainKind::head) {
        throw Error(ErrorCode::invalid_camera, "camera needs head joints");
    }
    geometry.validate();
}

RigidTransform CameraModel::camera_to_base() const {
    return head_fk(geometry, head_joints).transform;
}

DepthImage::DepthImage(int width, int height, std::vector<double> depths)
    : width_(width), height_(height), depths_(std::move(depths)) {
    if (width <= 0 || height <= 0) throw Error(ErrorCode::invalid_parameter, "depth image must be non-empty");
    if (depths_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(ErrorCode::invalid_parameter, "depth image size does not match width x height");
    }
    for (double d : depths_) {
        if (!std::isfinite(d) || d < 0.0) {
            throw Error(ErrorCode::invalid_parameter, "depths must be finite and >= 0");
        }
    }
}

DepthImage DepthImage::filled(int width, int height, double depth) {
    return DepthImage(width, height,
                      std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          depth));
}

double DepthImage::at(int col, int row) const {
    if (col < 0 || row < 0 || col >= width_ || row >= height_) return 0.0;
    return depths_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(col)];
}

double DepthImage::sample(const Pixel& p) const {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) return 0.0;
    return at(static_cast<int>(std::lround(p.u)), static_cast<int>(std::lround(p.v)));
}

DepthImage DepthImage::read_text(std::istream& in) {
    int width = 0, height = 0;
    if (!(in >> width >> height)) {
        throw Error(ErrorCode::invalid_parameter, "depth grid: expected `width height` header");
    }
    if (width <= 0 || height <= 0) throw Error(ErrorCode::invalid_parameter, "depth grid: bad dimensions");
    std::vector<double> values(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (auto& v : values) {
        if (!(in >> v)) throw Error(ErrorCode::invalid_parameter, "depth grid: too few values");
    }
    return DepthImage(width, height, std::move(values));
}

void DepthImage::write_text(std::ostream& out) const {
    out << width_ << ' ' << height_ << '\n';
    for (int row = 0; row < height_; ++row) {
        for (int col = 0; col < width_; ++col) {
            if (col) out << ' ';
            out << at(col, row);
        }
        out << '\n';
    }
}

void Detection::validate() const {
    if (!(bbox.u_max > bbox.u_min) || !(bbox.v_max > bbox.v_min)) {
        throw Error(ErrorCode::invalid_parameter, "detection bbox is degenerate");
    }
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw Error(ErrorCode::invalid_parameter, "detection confidence must lie in [0, 1]");
    }
}

Pixel Detection::centroid() const {
    return {0.5 * (bbox.u_min + bbox.u_max), 0.5 * (bbox.v_min + bbox.v_max)};
}

Vec3 back_project(const CameraModel& cam, const Pixel& pixel, double depth) {
    if (!std::isfinite(pixel.u) || !std::isfinite(pixel.v)) {
        throw Error(ErrorCode::invalid_parameter, "pixel must be finite");
    }
    if (!(depth > 0.0) || !std::isfinite(depth)) {
        throw Error(ErrorCode::no_depth, "depth must be positive");
    }
    const Vec3 ray = inverse_intrinsics(cam.K) * Vec3(pixel.u, pixel.v, 1.0);
    // ray has z = 1 for an upper-triangular K with K(2,2) = 1; normalise in case K(2,2) != 1.
    const Vec3 in_camera = depth * ray / ray.z();
    return apply(cam.camera_to_base(), in_camera);
}

Projection project(const CameraModel& cam, const Vec3& point) {
    inverse_intrinsics(cam.K);
    const Vec3 in_camera = apply(invert(cam.camera_to_base()), point);
    if (!(in_camera.z() > kMinDepth)) {
        throw Error(ErrorCode::behind_camera, "point is not in front of the camera");
    }
    const Vec3 h = cam.K * (in_camera / in_camera.z());
    return {{h.x() / h.z(), h.y() / h.z()}, in_camera.z()};
}

StripSize strip_dimensions(const CameraModel& cam, const std::array<Pixel, 4>& corners,
                           const DepthImage& depth) {
    double max_cross = 0.0;
    double scale = 0.0;
    for (int i = 1; i < 4; ++i) {
        scale = std::max(scale, std::hypot(corners[i].u - corners[0].u, corners[i].v - corners[0].v));
        for (int j = i + 1; j < 4; ++j) max_cross = std::max(max_cross, std::abs(cross2(corners[0], corners[i], corners[j])));
    }
    if (max_cross <= 1e-9 * std::max(scale * scale, 1e-300)) {
        throw Error(ErrorCode::degenerate_quad, "strip corners are collinear");
    }

    std::array<Vec3, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = sample_corner(cam, corners[i], depth);

    const double area = 0.5 * (p[2] - p[0]).cross(p[3] - p[1]).norm();
    const double perimeter = (p[1] - p[0]).norm() + (p[2] - p[1]).norm() + (p[3] - p[2]).norm() +
                             (p[0] - p[3]).norm();
    if (area <= 1e-9 * perimeter * perimeter) {
        throw Error(ErrorCode::degenerate_quad, "back-projected strip has no area");
    }
    return {0.5 * ((p[1] - p[0]).norm() + (p[3] - p[2]).norm()),
            0.5 * ((p[2] - p[1]).norm() + (p[0] - p[3]).norm())};
}

std::vector<LocalizedObject> localize_detections(const CameraModel& cam,
                                                 std::span<const Detection> detections,
                                                 const DepthImage& depth) {
    std::vector<LocalizedObject> out;
    out.reserve(detections.size());
    for (const auto& det : detections) {
        const Pixel c = det.centroid();
        const double d = depth.sample(c);
        LocalizedObject obj{det.class_label, std::nullopt};
        if (d > 0.0) obj.position = back_project(cam, c, d);
        out.push_back(std::move(obj));
    }
    return out;
}

StripScene StripScene::example() {
    StripScene s;
    s.camera.K << 525.0, 0.0, 319.5,
                  0.0, 525.0, 239.5,
                  0.0, 0.0, 1.0;
    s.camera.head_joints = JointVector::head(std::numbers::pi / 2, 0.0);
    // 20 x 5 cm strip, 80 cm ahead, yawed 0.3 rad and pitched 0.2 rad.
    const Mat3 tilt = (Eigen::AngleAxisd(0.3, Vec3::UnitZ()) * Eigen::AngleAxisd(0.2, Vec3::UnitY())).toRotationMatrix();
    const Vec3 centre(80.0, 3.4, 5.0);
    const std::array<Vec3, 4> local{Vec3(0, -10, -2.5), Vec3(0, 10, -2.5), Vec3(0, 10, 2.5), Vec3(0, -10, 2.5)};
    for (int i = 0; i < 4; ++i) s.corners[i] = centre + tilt * local[i];
    return s;
}

RenderedStrip render_strip(const StripScene& scene) {
    const CameraModel& cam = scene.camera;
    const Mat3 k_inv = inverse_intrinsics(cam.K);
    const RigidTransform base_to_camera = invert(cam.camera_to_base());

    std::array<Pixel, 4> pixels;
    std::array<double, 4> depths{};
    std::array<Vec3, 4> in_camera;
    for (int i = 0; i < 4; ++i) {
        const Projection pr = project(cam, scene.corners[i]);
        pixels[i] = pr.pixel;
        depths[i] = pr.depth;
        in_camera[i] = apply(base_to_camera, scene.corners[i]);
    }

    const Vec3 normal = (in_camera[1] - in_camera[0]).cross(in_camera[3] - in_camera[0]);
    const double offset = normal.dot(in_camera[0]);
    const double orient = cross2(pixels[0], pixels[1], pixels[2]);

    std::vector<double> values(static_cast<std::size_t>(scene.width) * static_cast<std::size_t>(scene.height), 0.0);
    for (int row = 0; row < scene.height; ++row) {
        for (int col = 0; col < scene.width; ++col) {
            const Pixel px{static_cast<double>(col), static_cast<double>(row)};
            bool inside = true;
            for (int i = 0; i < 4 && inside; ++i) {
                inside = cross2(pixels[i], pixels[(i + 1) % 4], px) * orient >= 0.0;
            }
            if (!inside) continue;
            Vec3 ray = k_inv * Vec3(px.u, px.v, 1.0);
            ray /= ray.z();
            const double denom = normal.dot(ray);
            if (std::abs(denom) < 1e-12) continue;
            const double t = offset / denom;
            if (t > 0.0) values[static_cast<std::size_t>(row) * static_cast<std::size_t>(scene.width) + static_cast<std::size_t>(col)] = t;
        }
    }
    for (int i = 0; i < 4; ++i) {
        const long col = std::lround(pixels[i].u);
        const long row = std::lround(pixels[i].v);
        if (col < 0 || row < 0 || col >= scene.width || row >= scene.height) {
            throw Error(ErrorCode::invalid_parameter, "strip corner falls outside the image");
        }
        values[static_cast<std::size_t>(row) * static_cast<std::size_t>(scene.width) + static_cast<std::size_t>(col)] = depths[i];
    }
    return {DepthImage(scene.width, scene.height, std::move(values)), pixels};
}

NoiseStudy run_noise_study(const StripScene& scene, double sigma, int trials, std::uint64_t seed) {
    if (!(sigma >= 0.0) || trials < 1) {
        throw Error(ErrorCode::invalid_parameter, "noise study needs sigma >= 0 and trials >= 1");
    }
    const RenderedStrip clean = render_strip(scene);
    const double true_width = 0.5 * ((scene.corners[1] - scene.corners[0]).norm() + (scene.corners[3] - scene.corners[2]).norm());
    const double true_height = 0.5 * ((scene.corners[2] - scene.corners[1]).norm() + (scene.corners[0] - scene.corners[3]).norm());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    NoiseStudy study;
    study.sigma = sigma;
    study.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::array<Vec3, 4> recovered;
        for (int i = 0; i < 4; ++i) {
            const double d = clean.depth.sample(clean.corner_pixels[i]) + (sigma > 0.0 ? noise(rng) : 0.0);
            recovered[i] = back_project(scene.camera, clean.corner_pixels[i], std::max(d, kMinDepth));
            const double err = (recovered[i] - scene.corners[i]).norm();
            study.mean_corner_error += err;
            study.max_corner_error = std::max(study.max_corner_error, err);
        }
        const double w = 0.5 * ((recovered[1] - recovered[0]).norm() + (recovered[3] - recovered[2]).norm());
        const double h = 0.5 * ((recovered[2] - recovered[1]).norm() + (recovered[0] - recovered[3]).norm());
        study.mean_width_error += std::abs(w - true_width);
        study.mean_height_error += std::abs(h - true_height);
    }
    study.mean_corner_error /= 4.0 * trials;
    study.mean_width_error /= trials;
    study.mean_height_error /= trials;
    return study;
}

}  // namespace twinarm
