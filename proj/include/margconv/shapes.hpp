#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "margconv/grid.hpp"

namespace margconv {

class ShapeSpec;
using ShapePtr = std::shared_ptr<const ShapeSpec>;

struct Disk {
    Point2 center;
    double radius = 0.0;
};

/// Rectangle with half-widths (half_x, half_y) in its own frame, rotated by `angle` (radians, CCW).
struct Rect {
    Point2 center;
    double half_x = 0.0;
    double half_y = 0.0;
    double angle = 0.0;
};

/// Vertices in strictly convex position, either orientation.
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

struct Difference {
    ShapePtr keep;
    ShapePtr remove;
};

struct Union {
    ShapePtr a;
    ShapePtr b;
};

/// Smooth radial bump amplitude * exp(1 - 1 / (1 - |x - c|^2 / R^2)) on |x - c| < R.
/// A function, not a set: it is sampled into a ScalarField and never rasterized.
struct SmoothBump {
    Point2 center;
    double radius = 0.0;
    double amplitude = 1.0;
};

class ShapeSpec {
public:
    using Node = std::variant<Disk, Rect, ConvexPolygon, Difference, Union, SmoothBump>;

    template <class T>
        requires(!std::is_same_v<std::decay_t<T>, ShapeSpec> && std::is_constructible_v<Node, T>)
    ShapeSpec(T&& n) : node(std::forward<T>(n)) {}  // NOLINT(google-explicit-constructor)

    Node node;
};

struct BoundingBox {
    Point2 lo;
    Point2 hi;
};

ShapeSpec make_difference(ShapeSpec keep, ShapeSpec remove);
ShapeSpec make_union(ShapeSpec a, ShapeSpec b);

/// Throws PreconditionError on non-positive radii, non-convex polygons, missing operands.
void validate(const ShapeSpec& shape);

/// True for every shape except SmoothBump (at any depth).
bool is_set(const ShapeSpec& shape);

bool contains(const ShapeSpec& shape, Point2 p);

/// Value of the shape viewed as a function: indicator for sets, the bump profile for SmoothBump.
double evaluate(const ShapeSpec& shape, Point2 p);

BoundingBox bounds(const ShapeSpec& shape);

ShapeSpec rotated(const ShapeSpec& shape, double angle, Point2 pivot = {});
ShapeSpec translated(const ShapeSpec& shape, Point2 offset);

/// Closed-form area / perimeter where one exists (Disk, Rect, ConvexPolygon).
std::optional<double> analytic_area(const ShapeSpec& shape);
std::optional<double> analytic_perimeter(const ShapeSpec& shape);

/// Convex polygon with `vertex_count` vertices on a randomly oriented ellipse.
/// Deterministic for a given seed on every platform.
ShapeSpec random_convex_polygon(int vertex_count, std::uint64_t seed, Point2 center, double min_radius,
                                double max_radius);

nlohmann::json shape_to_json(const ShapeSpec& shape);
/// Accepts the tagged-union document; "random_polygon" nodes are resolved with `seed`.
ShapeSpec shape_from_json(const nlohmann::json& doc, std::uint64_t seed = 1);

}  // namespace margconv
