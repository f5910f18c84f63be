#include "rowsim/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rowsim/image_io.hpp"
#include "rowsim/rng.hpp"

namespace rowsim {

CameraPose compute_camera_pose(const CropRowWorld& world, const RobotState& robot,
                               const CameraModel& cam) {
    const double ct = std::cos(robot.theta), st = std::sin(robot.theta);
    const double ground = world.terrain.height(robot.x, robot.y);
    const Vec2 grad = world.terrain.gradient(robot.x, robot.y);
    const double slope_fwd = grad.x * ct + grad.y * st;
    const double slope_left = -grad.x * st + grad.y * ct;

    CameraPose pose;
    pose.origin = {robot.x + cam.mount_offset_forward * ct,
                   robot.y + cam.mount_offset_forward * st,
                   ground + cam.mount_height};
    pose.rotation = Mat3::rot_z(robot.theta) *
                    Mat3::pitch_up(cam.mount_pitch_up + std::atan(slope_fwd)) *
                    Mat3::roll(std::atan(slope_left));
    return pose;
}

namespace {

constexpr double kMinHitDistance = 0.05;

struct TrunkPrim {
    double cx, cy, z0, z1, radius;
};

// Canopy ellipsoid with its first semi-axis aligned to the local row
// direction (ax, ay); third axis vertical.
struct CanopyPrim {
    Vec3 center;
    double ax, ay;
    double rx, ry, rz;
};

double ray_trunk(const Vec3& o, const Vec3& d, const TrunkPrim& t) {
    const double ox = o.x - t.cx, oy = o.y - t.cy;
    const double a = d.x * d.x + d.y * d.y;
    if (a < 1e-12) return -1.0;
    const double b = 2.0 * (ox * d.x + oy * d.y);
    const double c = ox * ox + oy * oy - t.radius * t.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return -1.0;
    const double sq = std::sqrt(disc);
    for (double tt : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (tt < kMinHitDistance) continue;
        const double z = o.z + tt * d.z;
        if (z >= t.z0 && z <= t.z1) return tt;
    }
    return -1.0;
}

double ray_canopy(const Vec3& o, const Vec3& d, const CanopyPrim& e) {
    const Vec3 q = o - e.center;
    // Rotate into the ellipsoid frame, then scale to the unit sphere.
    const double qx = (q.x * e.ax + q.y * e.ay) / e.rx;
    const double qy = (-q.x * e.ay + q.y * e.ax) / e.ry;
    const double qz = q.z / e.rz;
    const double dx = (d.x * e.ax + d.y * e.ay) / e.rx;
    const double dy = (-d.x * e.ay + d.y * e.ax) / e.ry;
    const double dz = d.z / e.rz;

    const double a = dx * dx + dy * dy + dz * dz;
    const double b = 2.0 * (qx * dx + qy * dy + qz * dz);
    const double c = qx * qx + qy * qy + qz * qz - 1.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0 || a <= 0.0) return -1.0;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / (2.0 * a);
    if (t0 >= kMinHitDistance) return t0;
    const double t1 = (-b + sq) / (2.0 * a);
    if (t1 >= kMinHitDistance) return t1;  // origin inside the canopy
    return -1.0;
}

struct PixelRect {
    int i0, i1, j0, j1;
    bool valid;
};

/// Conservative pixel bounds of a world-space AABB. Falls back to the full
/// frame when the box straddles the image plane.
PixelRect project_aabb(const Vec3& lo, const Vec3& hi, const CameraPose& pose,
                       const CameraModel& cam, double tan_h, double tan_v) {
    double min_i = 1e18, max_i = -1e18, min_j = 1e18, max_j = -1e18;
    bool any_front = false, any_back = false;
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3 c{(corner & 1) ? hi.x : lo.x, (corner & 2) ? hi.y : lo.y,
                     (corner & 4) ? hi.z : lo.z};
        const Vec3 p = pose.rotation.transposed_mul(c - pose.origin);
        if (p.x < 1e-3) {
            any_back = true;
            continue;
        }
        any_front = true;
        const double u = -p.y / (p.x * tan_h);
        const double v = -p.z / (p.x * tan_v);
        const double j = (u + 1.0) * 0.5 * cam.width - 0.5;
        const double i = (v + 1.0) * 0.5 * cam.height - 0.5;
        min_j = std::min(min_j, j);
        max_j = std::max(max_j, j);
        min_i = std::min(min_i, i);
        max_i = std::max(max_i, i);
    }
    if (!any_front) return {0, -1, 0, -1, false};
    if (any_back) return {0, cam.height - 1, 0, cam.width - 1, true};

    PixelRect r;
    r.j0 = std::max(0, int(std::floor(min_j)) - 1);
    r.j1 = std::min(cam.width - 1, int(std::ceil(max_j)) + 1);
    r.i0 = std::max(0, int(std::floor(min_i)) - 1);
    r.i1 = std::min(cam.height - 1, int(std::ceil(max_i)) + 1);
    r.valid = r.j0 <= r.j1 && r.i0 <= r.i1;
    return r;
}

/// Local row direction at plant p, from its neighbors.
Vec2 row_direction(const Row& row, std::size_t p) {
    const std::size_t n = row.plants.size();
    if (n < 2) return {1.0, 0.0};
    const Vec3& a = row.plants[p > 0 ? p - 1 : 0];
    const Vec3& b = row.plants[p + 1 < n ? p + 1 : n - 1];
    const Vec2 d{b.x - a.x, b.y - a.y};
    const double norm = d.norm();
    return norm > 0.0 ? Vec2{d.x / norm, d.y / norm} : Vec2{1.0, 0.0};
}

}  // namespace

FramePair render_frame(const CropRowWorld& world, const RobotState& robot,
                       const CameraModel& cam) {
    if (cam.width <= 0 || cam.height <= 0)
        throw std::invalid_argument("camera frame must be non-empty");

    const CameraPose pose = compute_camera_pose(world, robot, cam);
    const double tan_h = std::tan(cam.horizontal_fov * 0.5);
    const double tan_v = std::tan(cam.vertical_fov * 0.5);
    const float sentinel = float(cam.max_range);

    FramePair frame;
    frame.timestamp = robot.t;
    frame.max_depth = sentinel;
    frame.soft_mask = FloatGrid(cam.height, cam.width, 0.0f);
    frame.depth = FloatGrid(cam.height, cam.width, sentinel);

    // Normalized world-space ray directions, row-major.
    const Vec3 fwd{pose.rotation.m[0], pose.rotation.m[3], pose.rotation.m[6]};
    const Vec3 left{pose.rotation.m[1], pose.rotation.m[4], pose.rotation.m[7]};
    const Vec3 up{pose.rotation.m[2], pose.rotation.m[5], pose.rotation.m[8]};
    std::vector<Vec3> dirs(std::size_t(cam.width) * cam.height);
    for (int i = 0; i < cam.height; ++i) {
        const double v = (2.0 * (i + 0.5) / cam.height - 1.0) * tan_v;
        for (int j = 0; j < cam.width; ++j) {
            const double u = (2.0 * (j + 0.5) / cam.width - 1.0) * tan_h;
            const double inv = 1.0 / std::sqrt(1.0 + u * u + v * v);
            dirs[std::size_t(i) * cam.width + j] =
                Vec3{fwd.x - u * left.x - v * up.x, fwd.y - u * left.y - v * up.y,
                     fwd.z - u * left.z - v * up.z} *
                inv;
        }
    }

    std::vector<double> depth(std::size_t(cam.width) * cam.height, cam.max_range);
    std::vector<std::uint8_t> hit(depth.size(), 0);

    auto splat = [&](const Vec3& lo, const Vec3& hi, auto&& intersect) {
        // Cull primitives that cannot produce a hit within max_range.
        const double cx = std::clamp(pose.origin.x, lo.x, hi.x);
        const double cy = std::clamp(pose.origin.y, lo.y, hi.y);
        const double cz = std::clamp(pose.origin.z, lo.z, hi.z);
        const Vec3 nearest{cx - pose.origin.x, cy - pose.origin.y,
                           cz - pose.origin.z};
        if (nearest.norm() >= cam.max_range) return;

        const PixelRect rect = project_aabb(lo, hi, pose, cam, tan_h, tan_v);
        if (!rect.valid) return;
        for (int i = rect.i0; i <= rect.i1; ++i) {
            for (int j = rect.j0; j <= rect.j1; ++j) {
                const std::size_t px = std::size_t(i) * cam.width + j;
                const double t = intersect(pose.origin, dirs[px]);
                if (t > 0.0 && t < depth[px]) {
                    depth[px] = t;
                    hit[px] = 1;
                }
            }
        }
    };

    auto splat_canopy = [&](const Vec3& base, const Vec2& along,
                            double center_height, const Vec3& radii,
                            const Vec3& offset) {
        CanopyPrim canopy;
        canopy.ax = along.x;
        canopy.ay = along.y;
        canopy.rx = radii.x;
        canopy.ry = radii.y;
        canopy.rz = radii.z;
        // Offsets are row-local (along, lateral-left, up).
        canopy.center = {base.x + offset.x * along.x - offset.y * along.y,
                         base.y + offset.x * along.y + offset.y * along.x,
                         base.z + center_height + offset.z};
        const double ex =
            std::abs(along.x) * canopy.rx + std::abs(along.y) * canopy.ry;
        const double ey =
            std::abs(along.y) * canopy.rx + std::abs(along.x) * canopy.ry;
        const Vec3 lo{canopy.center.x - ex, canopy.center.y - ey,
                      canopy.center.z - canopy.rz};
        const Vec3 hi{canopy.center.x + ex, canopy.center.y + ey,
                      canopy.center.z + canopy.rz};
        splat(lo, hi, [&](const Vec3& o, const Vec3& d) {
            return ray_canopy(o, d, canopy);
        });
    };

    for (const Row& row : world.rows) {
        const PlantSpec& s = row.spec;
        for (std::size_t p = 0; p < row.plants.size(); ++p) {
            const Vec3& base = row.plants[p];
            if (s.trunk_radius > 0.0 && s.trunk_height > 0.0) {
                TrunkPrim trunk{base.x, base.y, base.z, base.z + s.trunk_height,
                                s.trunk_radius};
                const Vec3 lo{base.x - s.trunk_radius, base.y - s.trunk_radius,
                              trunk.z0};
                const Vec3 hi{base.x + s.trunk_radius, base.y + s.trunk_radius,
                              trunk.z1};
                splat(lo, hi, [&](const Vec3& o, const Vec3& d) {
                    return ray_trunk(o, d, trunk);
                });
            }
            if (s.canopy_radii.x > 0.0 && s.canopy_radii.y > 0.0 &&
                s.canopy_radii.z > 0.0) {
                const Vec2 along = row_direction(row, p);
                splat_canopy(base, along, s.canopy_center_height, s.canopy_radii,
                             s.canopy_offset);
                if (s.has_second_lobe())
                    splat_canopy(base, along, s.canopy2_center_height,
                                 s.canopy2_radii, s.canopy2_offset);
            }
        }
    }

    for (int i = 0; i < cam.height; ++i) {
        for (int j = 0; j < cam.width; ++j) {
            const std::size_t px = std::size_t(i) * cam.width + j;
            if (hit[px] && depth[px] < cam.max_range) {
                frame.soft_mask.at(i, j) = 1.0f;
                frame.depth.at(i, j) = float(depth[px]);
            } else {
                // Ground plane z = 0 supplies background depth.
                const Vec3& d = dirs[px];
                if (d.z < 0.0 && pose.origin.z > 0.0) {
                    const double t = -pose.origin.z / d.z;
                    if (t >= kMinHitDistance && t <= cam.max_range)
                        frame.depth.at(i, j) = float(t);
                }
            }
        }
    }
    return frame;
}

FramePair corrupt_frame(const FramePair& frame, const CorruptionModel& model) {
    require_same_shape(frame.soft_mask, frame.depth, "corrupt_frame");
    FramePair out = frame;
    Rng rng(model.rng_seed);

    const int h = frame.soft_mask.height(), w = frame.soft_mask.width();
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const float conf = frame.soft_mask.at(i, j);
            if (conf >= 0.5f) {
                if (rng.uniform() < model.dropout_rate) {
                    out.soft_mask.at(i, j) = 0.0f;
                } else if (model.confidence_noise_std > 0.0) {
                    const double loss =
                        std::abs(rng.normal(0.0, model.confidence_noise_std));
                    out.soft_mask.at(i, j) = float(clamp01(conf - loss));
                }
            } else {
                if (rng.uniform() < model.speckle_rate) {
                    out.soft_mask.at(i, j) =
                        std::max(conf, float(rng.uniform()));
                }
            }
            if (model.depth_noise_std_at_1m > 0.0) {
                const double d = out.depth.at(i, j);
                const double noisy =
                    d + rng.normal(0.0, model.depth_noise_std_at_1m * d * d);
                out.depth.at(i, j) =
                    float(std::clamp(noisy, kMinHitDistance, double(frame.max_depth)));
            }
        }
    }
    return out;
}

FramePair load_frame_pair(const std::string& mask_path,
                          const std::string& depth_path) {
    const PgmImage mask = load_pgm(mask_path);
    const PgmImage depth = load_pgm(depth_path);
    if (mask.width != depth.width || mask.height != depth.height)
        throw std::runtime_error("load_frame_pair: mask " + mask_path +
                                 " and depth " + depth_path +
                                 " dimensions differ");

    FramePair frame;
    frame.soft_mask = FloatGrid(mask.height, mask.width);
    frame.depth = FloatGrid(depth.height, depth.width);

    double max_range_m = depth.maxval / 1000.0;
    for (const std::string& c : depth.comments) {
        const std::string key = " rowsim:max_range_mm=";
        const auto at = c.find(key);
        if (at != std::string::npos)
            max_range_m = std::stod(c.substr(at + key.size())) / 1000.0;
    }
    frame.max_depth = float(max_range_m);

    for (int i = 0; i < mask.height; ++i)
        for (int j = 0; j < mask.width; ++j) {
            frame.soft_mask.at(i, j) =
                float(mask.pixels[std::size_t(i) * mask.width + j]) /
                float(mask.maxval);
            frame.depth.at(i, j) = std::min(
                float(depth.pixels[std::size_t(i) * depth.width + j]) / 1000.0f,
                frame.max_depth);
        }
    return frame;
}

void save_frame_pair(const FramePair& frame, const std::string& mask_path,
                     const std::string& depth_path) {
    const int h = frame.soft_mask.height(), w = frame.soft_mask.width();
    PgmImage mask;
    mask.width = w;
    mask.height = h;
    mask.maxval = 255;
    mask.pixels.resize(std::size_t(w) * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            mask.pixels[std::size_t(i) * w + j] = std::uint16_t(
                std::lround(clamp01(frame.soft_mask.at(i, j)) * 255.0));
    save_pgm(mask, mask_path);

    PgmImage depth;
    depth.width = w;
    depth.height = h;
    depth.maxval = 65535;
    depth.comments.push_back(
        " rowsim:max_range_mm=" + std::to_string(long(std::lround(frame.max_depth * 1000.0))));
    depth.pixels.resize(std::size_t(w) * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const double mm = std::clamp(double(frame.depth.at(i, j)) * 1000.0,
                                         0.0, 65535.0);
            depth.pixels[std::size_t(i) * w + j] = std::uint16_t(std::lround(mm));
        }
    save_pgm(depth, depth_path);
}

}  // namespace rowsim
