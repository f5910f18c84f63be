#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rowsim/geometry.hpp"
#include "rowsim/robot_state.hpp"

namespace rowsim {

/// Per-plant shape parameters: a trunk cylinder plus one or two canopy
/// ellipsoids. canopy_offset shifts a lobe relative to the trunk axis, which
/// is how the pergola preset hangs its cover over one half of the lane. The
/// optional second lobe (zero radii = absent) models tall trees whose crown
/// mass flanks the row below a high interweaving layer.
struct PlantSpec {
    double trunk_radius{0.05};
    double trunk_height{0.7};
    double canopy_center_height{1.4};
    Vec3 canopy_radii{0.6, 0.4, 0.6};  // ellipsoid semi-axes (along, lateral, up)
    Vec3 canopy_offset{0.0, 0.0, 0.0};
    double canopy2_center_height{0.0};
    Vec3 canopy2_radii{0.0, 0.0, 0.0};
    Vec3 canopy2_offset{0.0, 0.0, 0.0};
    double jitter_std{0.0};

    bool has_second_lobe() const {
        return canopy2_radii.x > 0.0 && canopy2_radii.y > 0.0 &&
               canopy2_radii.z > 0.0;
    }

    /// Canopies whose underside clears this height are treated as overhead
    /// cover (pergola slabs, interweaving tree crowns) rather than lane walls.
    static constexpr double kOverheadClearance = 1.5;
    bool is_overhead() const {
        return canopy_center_height - canopy_radii.z > kOverheadClearance;
    }
};

struct Row {
    PlantSpec spec;
    std::vector<Vec3> plants;  // base points, sorted by along-track order
};

/// Smooth sinusoidal height field plus a zero-mean heading-rate disturbance
/// injected into the kinematics.
struct TerrainModel {
    double height_amplitude{0.0};
    double height_wavelength{8.0};
    double heading_disturbance_std{0.0};

    double height(double x, double y) const;
    /// d(height)/dx and d(height)/dy.
    Vec2 gradient(double x, double y) const;
};

enum class CropPreset { Vineyard, Pergola, Pear, HighTrees, CurvedVineyard };

CropPreset parse_preset(const std::string& name);
std::string preset_name(CropPreset preset);

/// Overridable knobs for build_world. Negative values mean "use the preset
/// default". Curvature applies only to the curved preset.
struct WorldOverrides {
    double row_distance{-1.0};
    double plant_distance{-1.0};
    double plant_height{-1.0};
    double jitter_std{-1.0};
    double track_length{-1.0};
    int num_rows{-1};
    double curve_radius{-1.0};
    double terrain_amplitude{-1.0};
    double terrain_wavelength{-1.0};
    double heading_disturbance_std{-1.0};
};

struct CropRowWorld {
    CropPreset preset{CropPreset::Vineyard};
    double row_distance{1.8};
    double plant_distance{1.3};
    double track_length{30.0};
    double curve_radius{0.0};  // 0 = straight rows
    std::vector<Row> rows;
    TerrainModel terrain;
    std::uint64_t rng_seed{0};

    int num_lanes() const { return static_cast<int>(rows.size()) - 1; }
};

/// Ground-truth lane center as an ordered polyline with arc-length queries.
class Centerline {
public:
    Centerline() = default;
    explicit Centerline(std::vector<Vec2> polyline);

    const std::vector<Vec2>& polyline() const { return points_; }
    double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    Vec2 point_at(double s) const;
    Vec2 tangent_at(double s) const;

    struct Projection {
        double s{0.0};        // arc length of the closest point
        double lateral{0.0};  // signed offset, positive = left of travel
        Vec2 closest{};
    };
    Projection project(const Vec2& p) const;

private:
    std::vector<Vec2> points_;
    std::vector<double> cumulative_;
};

CropRowWorld build_world(CropPreset preset, std::uint64_t seed,
                         const WorldOverrides& overrides = {});

/// Lane `lane_index` runs between rows lane_index and lane_index + 1. For
/// lanes with one-sided overhead cover the returned line is the center of
/// the uncovered corridor; when covers from both sides overlap (high trees)
/// it falls back to the trunk midline.
Centerline ground_truth_centerline(const CropRowWorld& world, int lane_index);

/// True iff the robot footprint disc intersects any trunk footprint.
bool collision_check(const CropRowWorld& world, const RobotState& pose,
                     double footprint_radius);

/// Plant-pose CSV: row_id,x,y,z followed by the row's spec fields.
std::string world_to_csv(const CropRowWorld& world);

}  // namespace rowsim
