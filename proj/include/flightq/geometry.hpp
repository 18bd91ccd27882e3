#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "flightq/errors.hpp"

namespace flightq {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double distance_to(const Vec3& o) const { return (*this - o).norm(); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

// Unit quaternion used to place a pattern in any 3D alignment
// (horizontal, vertical, diagonal, ...).
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Quat identity() { return {}; }
    static Quat from_axis_angle(const Vec3& axis, double angle_rad);

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    bool is_unit(double eps = 1e-9) const { return std::abs(norm() - 1.0) <= eps; }
    Quat operator*(const Quat& o) const;
    Vec3 rotate(const Vec3& v) const;
};

// ---------------------------------------------------------------------------
// Pattern specifications
// ---------------------------------------------------------------------------

struct PatternSpec;

struct CircleSpec {
    double radius = 0.0;
    int slots = 0;
};

struct EllipseSpec {
    double semi_major = 0.0;
    double semi_minor = 0.0;
    int slots = 0;
};

struct RectangleSpec {
    double width = 0.0;
    double height = 0.0;
    int slots = 0;
};

// Serpentine polyline of n_segments legs, each of length segment_length,
// advancing one row (row_spacing) per leg while alternating direction.
struct ZigZagSpec {
    double segment_length = 0.0;
    int n_segments = 0;
    double row_spacing = 0.0;
    int slots = 0;
};

// Planar layers where layer i strictly contains layer i-1; layers are
// auto-centered on layer 0 and chained head-to-tail into one queue.
struct Nested2DSpec {
    std::vector<PatternSpec> layers;
};

// Planar layers stacked along the local +z axis, layer 0 at the opening's
// level, layer i lifted by i * layer_gap.
struct Stacked3DSpec {
    std::vector<PatternSpec> layers;
    double layer_gap = 0.0;
};

struct PatternSpec {
    std::variant<CircleSpec, EllipseSpec, RectangleSpec, ZigZagSpec,
                 Nested2DSpec, Stacked3DSpec>
        shape;
    Vec3 anchor{};
    Quat orientation{};

    // Effective slot count; composite variants sum their layers.
    int slot_count() const;
    bool is_composite() const;
};

// A realized pattern: M slot coordinates in queue order. Slot 0 is the head
// and coincides with the anchor (the opening). leg k (1-based, 1..M-1) is the
// straight chord from slot k to slot k-1.
struct Pattern {
    std::vector<Vec3> slots;
    Vec3 anchor{};
    Vec3 plane_normal{0.0, 0.0, 1.0};

    int slot_count() const { return static_cast<int>(slots.size()); }

    double leg_length(int leg_index) const {
        if (leg_index < 1 || leg_index >= slot_count())
            throw IndexOutOfRange("leg index " + std::to_string(leg_index) +
                                  " out of range 1.." + std::to_string(slot_count() - 1));
        return legs_[static_cast<std::size_t>(leg_index - 1)];
    }
    const std::vector<double>& leg_lengths() const { return legs_; }
    double max_leg_length() const;

    // Center and radius of the smallest slot-enclosing sphere we bother to
    // compute (centroid-based; adequate for spawn-region validation).
    Vec3 bounding_center() const;
    double bounding_radius() const;

    friend Pattern build_pattern(const PatternSpec& spec);

  private:
    std::vector<double> legs_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Realizes a spec into slot coordinates. Slots are placed at uniform
// path-parameter intervals along the outline, counterclockwise when viewed
// along the pattern's normal axis, starting at the anchor. Throws InvalidSpec.
Pattern build_pattern(const PatternSpec& spec);

// Speed a drone needs to traverse leg_index within one admission interval:
// leg_length * lambda. Throws InvalidRate / IndexOutOfRange.
double required_speed(const Pattern& pattern, double lambda, int leg_index);

// Minimum pairwise distance over all slot pairs. Throws TooFewSlots for M < 2.
double min_slot_clearance(const Pattern& pattern);

}  // namespace flightq
