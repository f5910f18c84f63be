#include "rowsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rowsim/rng.hpp"

namespace rowsim {

double TerrainModel::height(double x, double y) const {
    if (height_amplitude == 0.0) return 0.0;
    const double k = 2.0 * M_PI / height_wavelength;
    return height_amplitude * std::sin(k * x) * std::cos(k * y);
}

Vec2 TerrainModel::gradient(double x, double y) const {
    if (height_amplitude == 0.0) return {0.0, 0.0};
    const double k = 2.0 * M_PI / height_wavelength;
    return {height_amplitude * k * std::cos(k * x) * std::cos(k * y),
            -height_amplitude * k * std::sin(k * x) * std::sin(k * y)};
}

CropPreset parse_preset(const std::string& name) {
    if (name == "vineyard") return CropPreset::Vineyard;
    if (name == "pergola") return CropPreset::Pergola;
    if (name == "pear") return CropPreset::Pear;
    if (name == "high_trees") return CropPreset::HighTrees;
    if (name == "curved_vineyard") return CropPreset::CurvedVineyard;
    throw std::invalid_argument("unknown crop preset: " + name);
}

std::string preset_name(CropPreset preset) {
    switch (preset) {
        case CropPreset::Vineyard: return "vineyard";
        case CropPreset::Pergola: return "pergola";
        case CropPreset::Pear: return "pear";
        case CropPreset::HighTrees: return "high_trees";
        case CropPreset::CurvedVineyard: return "curved_vineyard";
    }
    throw std::invalid_argument("invalid preset enum");
}

namespace {

struct PresetDims {
    double row_distance;
    double plant_distance;
    double height;
    PlantSpec spec;
    double curve_radius;
};

// Row/plant spacings and plant heights follow the simulated-crop dimension
// table; the trunk/canopy proportions are chosen to reproduce each crop's
// occlusion regime (hedge walls, overhead pergola slab, interweaving crowns).
PresetDims preset_dims(CropPreset preset) {
    PresetDims d{};
    switch (preset) {
        case CropPreset::Vineyard:
        case CropPreset::CurvedVineyard:
            d.row_distance = 1.8;
            d.plant_distance = 1.3;
            d.height = 2.0;
            d.spec.trunk_radius = 0.05;
            d.spec.trunk_height = 0.7;
            d.spec.canopy_center_height = 1.4;
            d.spec.canopy_radii = {0.7, 0.4, 0.6};
            d.curve_radius = preset == CropPreset::CurvedVineyard ? 20.0 : 0.0;
            break;
        case CropPreset::Pergola:
            d.row_distance = 6.0;
            d.plant_distance = 1.5;
            d.height = 2.9;
            d.spec.trunk_radius = 0.08;
            d.spec.trunk_height = 2.3;
            d.spec.canopy_center_height = 2.6;
            d.spec.canopy_radii = {0.9, 1.55, 0.3};
            // Slab hangs over the low-y half of the lane above this row.
            d.spec.canopy_offset = {0.0, 1.55, 0.0};
            d.curve_radius = 0.0;
            break;
        case CropPreset::Pear:
            d.row_distance = 2.0;
            d.plant_distance = 1.0;
            d.height = 2.9;
            d.spec.trunk_radius = 0.06;
            d.spec.trunk_height = 0.9;
            d.spec.canopy_center_height = 1.9;
            d.spec.canopy_radii = {0.6, 0.45, 1.0};
            d.curve_radius = 0.0;
            break;
        case CropPreset::HighTrees:
            d.row_distance = 7.0;
            d.plant_distance = 5.0;
            d.height = 12.5;
            d.spec.trunk_radius = 0.4;
            d.spec.trunk_height = 3.5;
            // Primary lobe: the high interweaving layer. It overlaps the
            // neighbor rows' lobes across the lane, so no image column is
            // ever vegetation-free, yet it sits high enough that up-the-lane
            // rays meet it mostly beyond the usual depth gate.
            d.spec.canopy_center_height = 9.5;
            d.spec.canopy_radii = {4.0, 5.0, 3.0};
            // Secondary lobe: crown mass flanking the trunk below the layer;
            // the near/far contrast of these lobes carries the steering
            // signal.
            d.spec.canopy2_center_height = 5.5;
            d.spec.canopy2_radii = {2.8, 2.2, 2.5};
            d.curve_radius = 0.0;
            break;
    }
    return d;
}

/// Piecewise-linear interpolation along a row polyline at normalized
/// parameter u in [0, 1] (fraction of cumulative chord length).
Vec2 interp_row(const Row& row, double u) {
    const auto& pts = row.plants;
    if (pts.empty()) throw std::invalid_argument("row has no plants");
    if (pts.size() == 1) return {pts[0].x, pts[0].y};

    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double dx = pts[k].x - pts[k - 1].x;
        const double dy = pts[k].y - pts[k - 1].y;
        cum[k] = cum[k - 1] + std::hypot(dx, dy);
    }
    const double target = std::clamp(u, 0.0, 1.0) * cum.back();
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t k = std::min<std::size_t>(it - cum.begin(), pts.size() - 1);
    if (k == 0) k = 1;
    const double seg = cum[k] - cum[k - 1];
    const double f = seg > 0.0 ? (target - cum[k - 1]) / seg : 0.0;
    return {pts[k - 1].x + f * (pts[k].x - pts[k - 1].x),
            pts[k - 1].y + f * (pts[k].y - pts[k - 1].y)};
}

/// Lateral extent of overhead canopy from the trunk line toward the lane.
/// `toward_positive` selects the row-local lateral direction of interest.
double overhead_cover(const PlantSpec& spec, bool toward_positive) {
    if (!spec.is_overhead()) return 0.0;
    const double off = toward_positive ? spec.canopy_offset.y : -spec.canopy_offset.y;
    return std::max(0.0, off + spec.canopy_radii.y);
}

}  // namespace

CropRowWorld build_world(CropPreset preset, std::uint64_t seed,
                         const WorldOverrides& ov) {
    PresetDims dims = preset_dims(preset);

    CropRowWorld world;
    world.preset = preset;
    world.rng_seed = seed;
    world.row_distance = ov.row_distance > 0 ? ov.row_distance : dims.row_distance;
    world.plant_distance =
        ov.plant_distance > 0 ? ov.plant_distance : dims.plant_distance;
    world.track_length = ov.track_length > 0 ? ov.track_length : 30.0;
    world.curve_radius = ov.curve_radius > 0 ? ov.curve_radius : dims.curve_radius;
    if (preset != CropPreset::CurvedVineyard) world.curve_radius = dims.curve_radius;

    const int num_rows = ov.num_rows > 1 ? ov.num_rows : 4;
    const double height = ov.plant_height > 0 ? ov.plant_height : dims.height;
    const double height_scale = height / dims.height;

    PlantSpec spec = dims.spec;
    spec.trunk_height *= height_scale;
    spec.canopy_center_height *= height_scale;
    spec.canopy_radii.z *= height_scale;
    spec.canopy_offset.z *= height_scale;
    spec.canopy2_center_height *= height_scale;
    spec.canopy2_radii.z *= height_scale;
    spec.canopy2_offset.z *= height_scale;
    spec.jitter_std =
        ov.jitter_std >= 0 ? ov.jitter_std : 0.05 * world.plant_distance;

    world.terrain.height_amplitude =
        ov.terrain_amplitude >= 0 ? ov.terrain_amplitude : 0.03;
    world.terrain.height_wavelength =
        ov.terrain_wavelength > 0 ? ov.terrain_wavelength : 7.0;
    world.terrain.heading_disturbance_std =
        ov.heading_disturbance_std >= 0 ? ov.heading_disturbance_std : 0.02;

    Rng rng(derive_seed(seed, "world"));

    if (world.curve_radius > 0.0) {
        // Concentric arcs about (0, -R). Plants sit at matched angular
        // stations across rows so lane midlines are arcs of the mean radius.
        const double mid_radius =
            world.curve_radius + 0.5 * (num_rows - 1) * world.row_distance;
        const double dphi = world.plant_distance / mid_radius;
        const double span = world.track_length / mid_radius;
        const int plants_per_row = static_cast<int>(std::floor(span / dphi)) + 1;
        const Vec2 center{0.0, -world.curve_radius};

        for (int r = 0; r < num_rows; ++r) {
            Row row;
            row.spec = spec;
            const double radius = world.curve_radius + r * world.row_distance;
            for (int p = 0; p < plants_per_row; ++p) {
                const double phi = p * dphi;
                const double jt = rng.normal(0.0, spec.jitter_std);
                const double jr = rng.normal(0.0, spec.jitter_std);
                const Vec2 radial{std::sin(phi), std::cos(phi)};
                const Vec2 tangential{std::cos(phi), -std::sin(phi)};
                Vec2 pos = center + radial * (radius + jr) + tangential * jt;
                row.plants.push_back(
                    {pos.x, pos.y, world.terrain.height(pos.x, pos.y)});
            }
            world.rows.push_back(std::move(row));
        }
    } else {
        const int plants_per_row =
            static_cast<int>(std::floor(world.track_length / world.plant_distance)) + 1;
        for (int r = 0; r < num_rows; ++r) {
            Row row;
            row.spec = spec;
            const double y0 = r * world.row_distance;
            for (int p = 0; p < plants_per_row; ++p) {
                const double jx = rng.normal(0.0, spec.jitter_std);
                const double jy = rng.normal(0.0, spec.jitter_std);
                const double x = p * world.plant_distance + jx;
                const double y = y0 + jy;
                row.plants.push_back({x, y, world.terrain.height(x, y)});
            }
            world.rows.push_back(std::move(row));
        }
    }
    return world;
}

Centerline::Centerline(std::vector<Vec2> polyline) : points_(std::move(polyline)) {
    if (points_.size() < 2)
        throw std::invalid_argument("centerline needs at least two points");
    cumulative_.resize(points_.size(), 0.0);
    for (std::size_t k = 1; k < points_.size(); ++k)
        cumulative_[k] = cumulative_[k - 1] + (points_[k] - points_[k - 1]).norm();
}

Vec2 Centerline::point_at(double s) const {
    s = std::clamp(s, 0.0, length());
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t k = std::min<std::size_t>(it - cumulative_.begin(), points_.size() - 1);
    if (k == 0) k = 1;
    const double seg = cumulative_[k] - cumulative_[k - 1];
    const double f = seg > 0.0 ? (s - cumulative_[k - 1]) / seg : 0.0;
    return points_[k - 1] + (points_[k] - points_[k - 1]) * f;
}

Vec2 Centerline::tangent_at(double s) const {
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t k = std::min<std::size_t>(it - cumulative_.begin(), points_.size() - 1);
    if (k == 0) k = 1;
    return (points_[k] - points_[k - 1]).normalized();
}

Centerline::Projection Centerline::project(const Vec2& p) const {
    Projection best;
    double best_dist2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < points_.size(); ++k) {
        const Vec2 a = points_[k - 1];
        const Vec2 d = points_[k] - a;
        const double len2 = d.dot(d);
        double f = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
        const Vec2 c = a + d * f;
        const double dist2 = (p - c).dot(p - c);
        if (dist2 < best_dist2) {
            best_dist2 = dist2;
            best.closest = c;
            best.s = cumulative_[k - 1] + f * std::sqrt(len2);
            best.lateral = d.normalized().cross(p - c);
        }
    }
    return best;
}

Centerline ground_truth_centerline(const CropRowWorld& world, int lane_index) {
    if (lane_index < 0 || lane_index >= world.num_lanes())
        throw std::out_of_range("lane index out of range");

    const Row& low = world.rows[lane_index];
    const Row& high = world.rows[lane_index + 1];
    const std::size_t stations = std::max(low.plants.size(), high.plants.size());
    if (stations < 2) throw std::invalid_argument("rows too short for a centerline");

    const double cover_low = overhead_cover(low.spec, /*toward_positive=*/true);
    const double cover_high = overhead_cover(high.spec, /*toward_positive=*/false);

    std::vector<Vec2> pts;
    pts.reserve(stations);
    for (std::size_t k = 0; k < stations; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(stations - 1);
        const Vec2 pa = interp_row(low, u);
        const Vec2 pb = interp_row(high, u);
        const Vec2 across = pb - pa;
        const double gap = across.norm();
        Vec2 mid = (pa + pb) * 0.5;
        if (cover_low + cover_high > 0.0 && cover_low + cover_high < gap) {
            // Center of the corridor left uncovered by overhead canopy.
            mid = mid + across.normalized() * (0.5 * (cover_low - cover_high));
        }
        pts.push_back(mid);
    }
    return Centerline(std::move(pts));
}

bool collision_check(const CropRowWorld& world, const RobotState& pose,
                     double footprint_radius) {
    if (footprint_radius <= 0.0)
        throw std::invalid_argument("footprint_radius must be positive");
    for (const Row& row : world.rows) {
        const double reach = row.spec.trunk_radius + footprint_radius;
        for (const Vec3& p : row.plants) {
            const double dx = p.x - pose.x;
            if (dx > reach || dx < -reach) continue;
            const double dy = p.y - pose.y;
            if (dx * dx + dy * dy < reach * reach) return true;
        }
    }
    return false;
}

std::string world_to_csv(const CropRowWorld& world) {
    std::string out =
        "row_id,x,y,z,trunk_radius,trunk_height,canopy_center_height,"
        "canopy_rx,canopy_ry,canopy_rz,canopy_ox,canopy_oy,canopy_oz,"
        "canopy2_center_height,canopy2_rx,canopy2_ry,canopy2_rz,jitter_std\n";
    char line[512];
    for (std::size_t r = 0; r < world.rows.size(); ++r) {
        const PlantSpec& s = world.rows[r].spec;
        for (const Vec3& p : world.rows[r].plants) {
            std::snprintf(line, sizeof(line),
                          "%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                          "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                          r, p.x, p.y, p.z, s.trunk_radius, s.trunk_height,
                          s.canopy_center_height, s.canopy_radii.x,
                          s.canopy_radii.y, s.canopy_radii.z, s.canopy_offset.x,
                          s.canopy_offset.y, s.canopy_offset.z,
                          s.canopy2_center_height, s.canopy2_radii.x,
                          s.canopy2_radii.y, s.canopy2_radii.z, s.jitter_std);
            out += line;
        }
    }
    return out;
}

}  // namespace rowsim
