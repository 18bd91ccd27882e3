#include "flightq/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace flightq {

Quat Quat::from_axis_angle(const Vec3& axis, double angle_rad) {
    double n = axis.norm();
    if (n <= 0.0 || !axis.finite())
        throw InvalidSpec("orientation axis must be a nonzero finite vector");
    double h = 0.5 * angle_rad;
    double s = std::sin(h) / n;
    return {std::cos(h), axis.x * s, axis.y * s, axis.z * s};
}

Quat Quat::operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
}

Vec3 Quat::rotate(const Vec3& v) const {
    // q v q^-1 expanded via the cross-product form.
    Vec3 u{x, y, z};
    Vec3 t = u.cross(v) * 2.0;
    return v + t * w + u.cross(t);
}

int PatternSpec::slot_count() const {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Nested2DSpec> ||
                          std::is_same_v<T, Stacked3DSpec>) {
                int sum = 0;
                for (const auto& layer : s.layers) sum += layer.slot_count();
                return sum;
            } else {
                return s.slots;
            }
        },
        shape);
}

bool PatternSpec::is_composite() const {
    return std::holds_alternative<Nested2DSpec>(shape) ||
           std::holds_alternative<Stacked3DSpec>(shape);
}

double Pattern::max_leg_length() const {
    return legs_.empty() ? 0.0 : *std::max_element(legs_.begin(), legs_.end());
}

Vec3 Pattern::bounding_center() const {
    Vec3 c{};
    for (const auto& s : slots) c += s;
    return c * (1.0 / static_cast<double>(slots.size()));
}

double Pattern::bounding_radius() const {
    Vec3 c = bounding_center();
    double r = 0.0;
    for (const auto& s : slots) r = std::max(r, c.distance_to(s));
    return r;
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidSpec(msg);
}

// Local-frame slots for the leaf variants: anchor at the origin, pattern in
// the z=0 plane, counterclockwise when viewed from +z.

std::vector<Vec3> circle_slots(const CircleSpec& c) {
    require(c.radius > 0.0, "circle radius must be > 0");
    require(c.slots >= 1, "slot count M must be >= 1");
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(c.slots));
    for (int k = 0; k < c.slots; ++k) {
        double th = kPi + 2.0 * kPi * k / c.slots;
        out.push_back({c.radius * (1.0 + std::cos(th)), c.radius * std::sin(th), 0.0});
    }
    out[0] = {0.0, 0.0, 0.0};
    return out;
}

std::vector<Vec3> ellipse_slots(const EllipseSpec& e) {
    require(e.semi_major > 0.0 && e.semi_minor > 0.0,
            "ellipse semi-axes must be > 0");
    require(e.slots >= 1, "slot count M must be >= 1");
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(e.slots));
    for (int k = 0; k < e.slots; ++k) {
        double t = kPi + 2.0 * kPi * k / e.slots;
        out.push_back({e.semi_major * (1.0 + std::cos(t)), e.semi_minor * std::sin(t), 0.0});
    }
    out[0] = {0.0, 0.0, 0.0};
    return out;
}

// Uniform arc-length placement on an open or closed polyline.
std::vector<Vec3> polyline_slots(const std::vector<Vec3>& verts, int slots, bool closed) {
    std::vector<double> seg_len;
    double total = 0.0;
    std::size_t n = verts.size();
    std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        double d = verts[i].distance_to(verts[(i + 1) % n]);
        seg_len.push_back(d);
        total += d;
    }
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(slots));
    if (slots == 1) {
        out.push_back(verts[0]);
        return out;
    }
    double step = closed ? total / slots : total / (slots - 1);
    for (int k = 0; k < slots; ++k) {
        double s = step * k;
        std::size_t i = 0;
        while (i + 1 < seg_len.size() && s > seg_len[i] + 1e-12) {
            s -= seg_len[i];
            ++i;
        }
        s = std::min(s, seg_len[i]);
        const Vec3& a = verts[i];
        const Vec3& b = verts[(i + 1) % n];
        double f = seg_len[i] > 0.0 ? s / seg_len[i] : 0.0;
        out.push_back(a + (b - a) * f);
    }
    out[0] = verts[0];
    return out;
}

std::vector<Vec3> rectangle_slots(const RectangleSpec& r) {
    require(r.width > 0.0 && r.height > 0.0, "rectangle sides must be > 0");
    require(r.slots >= 1, "slot count M must be >= 1");
    std::vector<Vec3> corners = {{0.0, 0.0, 0.0},
                                 {r.width, 0.0, 0.0},
                                 {r.width, r.height, 0.0},
                                 {0.0, r.height, 0.0}};
    return polyline_slots(corners, r.slots, /*closed=*/true);
}

std::vector<Vec3> zigzag_slots(const ZigZagSpec& z) {
    require(z.segment_length > 0.0, "zig-zag segment_length must be > 0");
    require(z.row_spacing > 0.0, "zig-zag row_spacing must be > 0");
    require(z.n_segments >= 1, "zig-zag n_segments must be >= 1");
    require(z.slots >= 1, "slot count M must be >= 1");
    require(z.row_spacing < z.segment_length,
            "zig-zag row_spacing must be smaller than segment_length");
    double dx = std::sqrt(z.segment_length * z.segment_length -
                          z.row_spacing * z.row_spacing);
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(z.n_segments) + 1);
    verts.push_back({0.0, 0.0, 0.0});
    for (int j = 0; j < z.n_segments; ++j) {
        Vec3 prev = verts.back();
        double step_x = (j % 2 == 0) ? dx : -dx;
        verts.push_back({prev.x + step_x, prev.y + z.row_spacing, 0.0});
    }
    return polyline_slots(verts, z.slots, /*closed=*/false);
}

struct Bounds {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(const Vec3& p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    Vec3 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0, 0.0}; }
    bool strictly_inside(const Bounds& outer) const {
        return min_x > outer.min_x && max_x < outer.max_x &&
               min_y > outer.min_y && max_y < outer.max_y;
    }
};

std::vector<Vec3> local_leaf_slots(const PatternSpec& spec) {
    require(!spec.is_composite(), "composite layers may not nest further");
    require(spec.anchor.distance_to({}) == 0.0 && spec.orientation.is_unit() &&
                spec.orientation.w == 1.0,
            "layer specs must not set anchor or orientation");
    return std::visit(
        [](const auto& s) -> std::vector<Vec3> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpec>) return circle_slots(s);
            else if constexpr (std::is_same_v<T, EllipseSpec>) return ellipse_slots(s);
            else if constexpr (std::is_same_v<T, RectangleSpec>) return rectangle_slots(s);
            else if constexpr (std::is_same_v<T, ZigZagSpec>) return zigzag_slots(s);
            else throw InvalidSpec("unreachable");
        },
        spec.shape);
}

// Builds each layer in the composite's local frame, aligns layer centers with
// layer 0 and concatenates in queue order (layer 0 first, its head = opening).
std::vector<Vec3> composite_slots(const PatternSpec& spec) {
    const bool nested = std::holds_alternative<Nested2DSpec>(spec.shape);
    const auto& layers = nested ? std::get<Nested2DSpec>(spec.shape).layers
                                : std::get<Stacked3DSpec>(spec.shape).layers;
    double gap = nested ? 0.0 : std::get<Stacked3DSpec>(spec.shape).layer_gap;
    require(!layers.empty(), "composite pattern needs at least one layer");
    if (!nested) require(gap > 0.0, "stacked layer_gap must be > 0");

    std::vector<std::vector<Vec3>> built;
    std::vector<Bounds> bounds;
    for (const auto& layer : layers) {
        std::vector<Vec3> slots;
        if (std::holds_alternative<Nested2DSpec>(layer.shape) && !nested) {
            // a stacked layer may itself be a planar nest
            PatternSpec sub = layer;
            slots = composite_slots(sub);
        } else {
            slots = local_leaf_slots(layer);
        }
        Bounds b;
        for (const auto& p : slots) b.add(p);
        built.push_back(std::move(slots));
        bounds.push_back(b);
    }

    Vec3 ref_center = bounds[0].center();
    for (std::size_t i = 1; i < built.size(); ++i) {
        Vec3 shift = ref_center - bounds[i].center();
        shift.z = gap * static_cast<double>(i);
        for (auto& p : built[i]) p += shift;
        bounds[i].min_x += shift.x; bounds[i].max_x += shift.x;
        bounds[i].min_y += shift.y; bounds[i].max_y += shift.y;
        if (nested && !bounds[i - 1].strictly_inside(bounds[i]))
            throw InvalidSpec("nested layer " + std::to_string(i) +
                              " does not strictly contain layer " + std::to_string(i - 1));
    }

    std::vector<Vec3> out;
    for (auto& slots : built)
        out.insert(out.end(), slots.begin(), slots.end());
    return out;
}

}  // namespace

Pattern build_pattern(const PatternSpec& spec) {
    if (!spec.anchor.finite()) throw InvalidSpec("anchor must be finite");
    if (!spec.orientation.is_unit())
        throw InvalidSpec("orientation must be a unit quaternion");
    if (spec.slot_count() < 1) throw InvalidSpec("slot count M must be >= 1");

    std::vector<Vec3> local;
    if (spec.is_composite()) {
        local = composite_slots(spec);
    } else {
        PatternSpec plain = spec;
        plain.anchor = {};
        plain.orientation = {};
        local = local_leaf_slots(plain);
    }

    Pattern p;
    p.anchor = spec.anchor;
    p.plane_normal = spec.orientation.rotate({0.0, 0.0, 1.0});
    p.slots.reserve(local.size());
    for (const auto& q : local) p.slots.push_back(spec.anchor + spec.orientation.rotate(q));
    p.slots[0] = spec.anchor;

    p.legs_.reserve(local.size() > 0 ? local.size() - 1 : 0);
    for (std::size_t k = 1; k < p.slots.size(); ++k) {
        double d = p.slots[k].distance_to(p.slots[k - 1]);
        if (d <= 1e-12)
            throw InvalidSpec("degenerate leg between slots " + std::to_string(k - 1) +
                              " and " + std::to_string(k));
        p.legs_.push_back(d);
    }
    return p;
}

double required_speed(const Pattern& pattern, double lambda, int leg_index) {
    if (lambda <= 0.0) throw InvalidRate("admission rate lambda must be > 0");
    return pattern.leg_length(leg_index) * lambda;
}

double min_slot_clearance(const Pattern& pattern) {
    if (pattern.slot_count() < 2)
        throw TooFewSlots("clearance needs at least two slots");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pattern.slots.size(); ++i)
        for (std::size_t j = i + 1; j < pattern.slots.size(); ++j)
            best = std::min(best, pattern.slots[i].distance_to(pattern.slots[j]));
    return best;
}

}  // namespace flightq
