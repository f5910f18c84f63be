#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "rowsim/rng.hpp"
#include "rowsim/world.hpp"

using namespace rowsim;

namespace {

WorldOverrides flat_no_jitter() {
    WorldOverrides ov;
    ov.jitter_std = 0.0;
    ov.terrain_amplitude = 0.0;
    ov.heading_disturbance_std = 0.0;
    return ov;
}

double mean_row_distance(const CropRowWorld& w) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t r = 1; r < w.rows.size(); ++r) {
        double a = 0.0, b = 0.0;
        if (w.curve_radius > 0.0) {
            const Vec2 c{0.0, -w.curve_radius};
            for (const Vec3& p : w.rows[r - 1].plants)
                a += (Vec2{p.x, p.y} - c).norm();
            for (const Vec3& p : w.rows[r].plants) b += (Vec2{p.x, p.y} - c).norm();
        } else {
            for (const Vec3& p : w.rows[r - 1].plants) a += p.y;
            for (const Vec3& p : w.rows[r].plants) b += p.y;
        }
        sum += b / w.rows[r].plants.size() - a / w.rows[r - 1].plants.size();
        ++n;
    }
    return sum / n;
}

double mean_plant_distance(const CropRowWorld& w) {
    double sum = 0.0;
    int n = 0;
    for (const Row& row : w.rows)
        for (std::size_t p = 1; p < row.plants.size(); ++p) {
            sum += std::hypot(row.plants[p].x - row.plants[p - 1].x,
                              row.plants[p].y - row.plants[p - 1].y);
            ++n;
        }
    return sum / n;
}

double plant_height(const CropRowWorld& w) {
    const PlantSpec& s = w.rows.front().spec;
    return s.canopy_center_height + s.canopy_radii.z;
}

// Test-side reimplementation of polyline interpolation at normalized
// cumulative chord length, used as the centerline oracle.
Vec2 oracle_interp(const Row& row, double u) {
    std::vector<double> cum{0.0};
    for (std::size_t k = 1; k < row.plants.size(); ++k)
        cum.push_back(cum.back() + std::hypot(row.plants[k].x - row.plants[k - 1].x,
                                              row.plants[k].y - row.plants[k - 1].y));
    const double target = u * cum.back();
    std::size_t k = 1;
    while (k + 1 < cum.size() && cum[k] < target) ++k;
    const double f = (target - cum[k - 1]) / (cum[k] - cum[k - 1]);
    return {row.plants[k - 1].x + f * (row.plants[k].x - row.plants[k - 1].x),
            row.plants[k - 1].y + f * (row.plants[k].y - row.plants[k - 1].y)};
}

}  // namespace

TEST_CASE("preset dimensions match the crop table") {
    const auto ov = flat_no_jitter();

    const CropRowWorld vineyard = build_world(CropPreset::Vineyard, 42, ov);
    CHECK(mean_row_distance(vineyard) == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(mean_plant_distance(vineyard) == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(plant_height(vineyard) == doctest::Approx(2.0).epsilon(1e-12));

    const CropRowWorld pergola = build_world(CropPreset::Pergola, 42, ov);
    CHECK(mean_row_distance(pergola) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(mean_plant_distance(pergola) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(plant_height(pergola) == doctest::Approx(2.9).epsilon(1e-12));

    const CropRowWorld pear = build_world(CropPreset::Pear, 42, ov);
    CHECK(mean_row_distance(pear) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mean_plant_distance(pear) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plant_height(pear) == doctest::Approx(2.9).epsilon(1e-12));

    const CropRowWorld trees = build_world(CropPreset::HighTrees, 42, ov);
    CHECK(mean_row_distance(trees) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(mean_plant_distance(trees) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(plant_height(trees) == doctest::Approx(12.5).epsilon(1e-12));

    // Radial spacing is exact on arcs; arc spacing tracks the mid radius.
    const CropRowWorld curved = build_world(CropPreset::CurvedVineyard, 42, ov);
    CHECK(curved.curve_radius == doctest::Approx(20.0));
    CHECK(mean_row_distance(curved) == doctest::Approx(1.8).epsilon(1e-9));
    CHECK(mean_plant_distance(curved) == doctest::Approx(1.3).epsilon(0.05));
}

TEST_CASE("same preset and seed build bitwise-identical worlds") {
    const CropRowWorld a = build_world(CropPreset::Vineyard, 42);
    const CropRowWorld b = build_world(CropPreset::Vineyard, 42);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        REQUIRE(a.rows[r].plants.size() == b.rows[r].plants.size());
        for (std::size_t p = 0; p < a.rows[r].plants.size(); ++p) {
            CHECK(a.rows[r].plants[p].x == b.rows[r].plants[p].x);
            CHECK(a.rows[r].plants[p].y == b.rows[r].plants[p].y);
            CHECK(a.rows[r].plants[p].z == b.rows[r].plants[p].z);
        }
    }

    const CropRowWorld c = build_world(CropPreset::Vineyard, 43);
    CHECK(c.rows[0].plants[0].x != a.rows[0].plants[0].x);
}

TEST_CASE("unknown preset name is rejected") {
    CHECK_THROWS_AS(parse_preset("orchard_of_unusual_size"), std::invalid_argument);
    CHECK(parse_preset("high_trees") == CropPreset::HighTrees);
}

TEST_CASE("straight parallel rows give the lane midline") {
    const CropRowWorld w = build_world(CropPreset::Vineyard, 7, flat_no_jitter());
    const Centerline line = ground_truth_centerline(w, 0);
    REQUIRE(line.polyline().size() >= 2);
    for (const Vec2& p : line.polyline())
        CHECK(p.y == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("jittered rows: vertices are midpoints of the interpolated rows") {
    const CropRowWorld w = build_world(CropPreset::Vineyard, 11);
    const int lane = 1;
    const Centerline line = ground_truth_centerline(w, lane);
    const std::size_t n = line.polyline().size();
    for (std::size_t k = 0; k < n; ++k) {
        const double u = double(k) / double(n - 1);
        const Vec2 a = oracle_interp(w.rows[lane], u);
        const Vec2 b = oracle_interp(w.rows[lane + 1], u);
        const Vec2 v = line.polyline()[k];
        CHECK(v.x == doctest::Approx(0.5 * (a.x + b.x)).epsilon(1e-12));
        CHECK(v.y == doctest::Approx(0.5 * (a.y + b.y)).epsilon(1e-12));
        // Equidistance from both row curves at the matched station.
        CHECK(std::abs((v - a).norm() - (v - b).norm()) < 1e-9);
    }
}

TEST_CASE("concentric-arc rows give a mean-radius arc centerline") {
    const CropRowWorld w = build_world(CropPreset::CurvedVineyard, 3, flat_no_jitter());
    const Centerline line = ground_truth_centerline(w, 1);
    const Vec2 center{0.0, -w.curve_radius};
    const double mean_radius = w.curve_radius + 1.5 * w.row_distance;
    for (const Vec2& p : line.polyline())
        CHECK(std::abs((p - center).norm() - mean_radius) < 1e-6);
}

TEST_CASE("pergola lane center sits in the uncovered corridor") {
    const CropRowWorld w = build_world(CropPreset::Pergola, 5, flat_no_jitter());
    const PlantSpec& s = w.rows[1].spec;
    REQUIRE(s.is_overhead());
    const double cover = s.canopy_offset.y + s.canopy_radii.y;
    const double y_low = 1 * w.row_distance, y_high = 2 * w.row_distance;
    const double expected = 0.5 * ((y_low + cover) + y_high);
    const Centerline line = ground_truth_centerline(w, 1);
    for (const Vec2& p : line.polyline())
        CHECK(p.y == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("high-trees covers overlap, centerline falls back to trunk midline") {
    const CropRowWorld w = build_world(CropPreset::HighTrees, 5, flat_no_jitter());
    REQUIRE(w.rows[0].spec.is_overhead());
    const Centerline line = ground_truth_centerline(w, 1);
    for (const Vec2& p : line.polyline())
        CHECK(p.y == doctest::Approx(1.5 * w.row_distance).epsilon(1e-12));
}

TEST_CASE("lane index out of range is rejected") {
    const CropRowWorld w = build_world(CropPreset::Vineyard, 1);
    CHECK_THROWS_AS(ground_truth_centerline(w, -1), std::out_of_range);
    CHECK_THROWS_AS(ground_truth_centerline(w, w.num_lanes()), std::out_of_range);
}

TEST_CASE("centerline is monotone along track for straight presets") {
    const CropRowWorld w = build_world(CropPreset::Vineyard, 21);
    const Centerline line = ground_truth_centerline(w, 1);
    for (std::size_t k = 1; k < line.polyline().size(); ++k)
        CHECK(line.polyline()[k].x > line.polyline()[k - 1].x);
}

TEST_CASE("collision check against trunk footprints") {
    const CropRowWorld w = build_world(CropPreset::Vineyard, 42, flat_no_jitter());
    const double footprint = 0.3;

    RobotState on_center{5.0, 0.9, 0.0, 0.0};
    CHECK_FALSE(collision_check(w, on_center, footprint));

    const Vec3 trunk = w.rows[0].plants[2];
    RobotState on_trunk{trunk.x, trunk.y, 0.0, 0.0};
    CHECK(collision_check(w, on_trunk, footprint));

    // Exactly at combined radius + epsilon: clear by the disc-disc bound.
    const double reach = w.rows[0].spec.trunk_radius + footprint;
    RobotState grazing{trunk.x + reach + 1e-9, trunk.y, 0.0, 0.0};
    CHECK_FALSE(collision_check(w, grazing, footprint));
    RobotState inside{trunk.x + reach - 1e-6, trunk.y, 0.0, 0.0};
    CHECK(collision_check(w, inside, footprint));

    CHECK_THROWS_AS(collision_check(w, on_center, 0.0), std::invalid_argument);
}

TEST_CASE("centerline projection returns signed lateral offsets") {
    Centerline line({{0.0, 0.0}, {10.0, 0.0}});
    const auto left = line.project({5.0, 0.4});
    CHECK(left.s == doctest::Approx(5.0));
    CHECK(left.lateral == doctest::Approx(0.4));
    const auto right = line.project({2.0, -0.25});
    CHECK(right.lateral == doctest::Approx(-0.25));
}

TEST_CASE("world csv dump lists one line per plant") {
    const CropRowWorld w = build_world(CropPreset::Pear, 9);
    const std::string csv = world_to_csv(w);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    std::size_t plants = 0;
    for (const Row& r : w.rows) plants += r.plants.size();
    CHECK(lines == plants + 1);
    CHECK(csv.rfind("row_id,x,y,z,", 0) == 0);
}
