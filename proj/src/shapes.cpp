#include "margconv/shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "margconv/error.hpp"

namespace margconv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

Point2 rotate_about(Point2 p, double c, double s, Point2 pivot) {
    const double dx = p.x - pivot.x, dy = p.y - pivot.y;
    return {pivot.x + c * dx - s * dy, pivot.y + s * dx + c * dy};
}

// Orientation sign of a convex polygon (+1 CCW, -1 CW), 0 when degenerate.
int orientation(const std::vector<Point2>& v) {
    double area2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto& a = v[k];
        const auto& b = v[(k + 1) % v.size()];
        area2 += a.x * b.y - b.x * a.y;
    }
    return area2 > 0 ? 1 : (area2 < 0 ? -1 : 0);
}

std::array<Point2, 4> rect_corners(const Rect& r) {
    const double c = std::cos(r.angle), s = std::sin(r.angle);
    std::array<Point2, 4> out{};
    const double sx[4] = {-1, 1, 1, -1};
    const double sy[4] = {-1, -1, 1, 1};
    for (int k = 0; k < 4; ++k) {
        const double u = sx[k] * r.half_x, v = sy[k] * r.half_y;
        out[k] = {r.center.x + c * u - s * v, r.center.y + s * u + c * v};
    }
    return out;
}

Point2 json_point(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string("shape field '") + what + "' must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

double json_number(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_number())
        throw ParseError(std::string("shape field '") + key + "' missing or not a number");
    return doc.at(key).get<double>();
}

// Portable uniform double in [0, 1).
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ShapeSpec make_difference(ShapeSpec keep, ShapeSpec remove) {
    return Difference{std::make_shared<const ShapeSpec>(std::move(keep)),
                      std::make_shared<const ShapeSpec>(std::move(remove))};
}

ShapeSpec make_union(ShapeSpec a, ShapeSpec b) {
    return Union{std::make_shared<const ShapeSpec>(std::move(a)), std::make_shared<const ShapeSpec>(std::move(b))};
}

void validate(const ShapeSpec& shape) {
    std::visit(overloaded{
                   [](const Disk& d) {
                       if (!(d.radius > 0)) throw PreconditionError("Disk radius must be > 0");
                   },
                   [](const Rect& r) {
                       if (!(r.half_x > 0) || !(r.half_y > 0))
                           throw PreconditionError("Rect half-widths must be > 0");
                   },
                   [](const ConvexPolygon& p) {
                       const auto& v = p.vertices;
                       if (v.size() < 3) throw PreconditionError("ConvexPolygon needs at least 3 vertices");
                       const int o = orientation(v);
                       if (o == 0) throw PreconditionError("ConvexPolygon is degenerate (zero area)");
                       for (std::size_t k = 0; k < v.size(); ++k) {
                           const double c = cross(v[k], v[(k + 1) % v.size()], v[(k + 2) % v.size()]);
                           if (c * o <= 0) throw PreconditionError("ConvexPolygon vertices are not in convex position");
                       }
                   },
                   [](const Difference& d) {
                       if (!d.keep || !d.remove) throw PreconditionError("Difference needs two operands");
                       validate(*d.keep);
                       validate(*d.remove);
                   },
                   [](const Union& u) {
                       if (!u.a || !u.b) throw PreconditionError("Union needs two operands");
                       validate(*u.a);
                       validate(*u.b);
                   },
                   [](const SmoothBump& b) {
                       if (!(b.radius > 0)) throw PreconditionError("SmoothBump radius must be > 0");
                   },
               },
               shape.node);
}

bool is_set(const ShapeSpec& shape) {
    return std::visit(overloaded{
                          [](const SmoothBump&) { return false; },
                          [](const Difference& d) { return is_set(*d.keep) && is_set(*d.remove); },
                          [](const Union& u) { return is_set(*u.a) && is_set(*u.b); },
                          [](const auto&) { return true; },
                      },
                      shape.node);
}

bool contains(const ShapeSpec& shape, Point2 p) {
    return std::visit(overloaded{
                          [&](const Disk& d) {
                              const double dx = p.x - d.center.x, dy = p.y - d.center.y;
                              return dx * dx + dy * dy <= d.radius * d.radius;
                          },
                          [&](const Rect& r) {
                              const double c = std::cos(r.angle), s = std::sin(r.angle);
                              const double dx = p.x - r.center.x, dy = p.y - r.center.y;
                              const double u = c * dx + s * dy, v = -s * dx + c * dy;
                              return std::abs(u) <= r.half_x && std::abs(v) <= r.half_y;
                          },
                          [&](const ConvexPolygon& poly) {
                              const auto& v = poly.vertices;
                              const int o = orientation(v);
                              for (std::size_t k = 0; k < v.size(); ++k)
                                  if (o * cross(v[k], v[(k + 1) % v.size()], p) < 0) return false;
                              return true;
                          },
                          [&](const Difference& d) { return contains(*d.keep, p) && !contains(*d.remove, p); },
                          [&](const Union& u) { return contains(*u.a, p) || contains(*u.b, p); },
                          [&](const SmoothBump& b) {
                              const double dx = p.x - b.center.x, dy = p.y - b.center.y;
                              return dx * dx + dy * dy < b.radius * b.radius;
                          },
                      },
                      shape.node);
}

double evaluate(const ShapeSpec& shape, Point2 p) {
    if (const auto* b = std::get_if<SmoothBump>(&shape.node)) {
        const double dx = p.x - b->center.x, dy = p.y - b->center.y;
        const double q = (dx * dx + dy * dy) / (b->radius * b->radius);
        if (q >= 1.0) return 0.0;
        return b->amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
    }
    return contains(shape, p) ? 1.0 : 0.0;
}

BoundingBox bounds(const ShapeSpec& shape) {
    return std::visit(
        overloaded{
            [](const Disk& d) {
                return BoundingBox{{d.center.x - d.radius, d.center.y - d.radius},
                                   {d.center.x + d.radius, d.center.y + d.radius}};
            },
            [](const Rect& r) {
                const auto c = rect_corners(r);
                BoundingBox b{c[0], c[0]};
                for (const auto& p : c) {
                    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
                    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
                }
                return b;
            },
            [](const ConvexPolygon& poly) {
                BoundingBox b{poly.vertices.front(), poly.vertices.front()};
                for (const auto& p : poly.vertices) {
                    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
                    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
                }
                return b;
            },
            [](const Difference& d) { return bounds(*d.keep); },
            [](const Union& u) {
                const auto a = bounds(*u.a), b = bounds(*u.b);
                return BoundingBox{{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
                                   {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
            },
            [](const SmoothBump& b) {
                return BoundingBox{{b.center.x - b.radius, b.center.y - b.radius},
                                   {b.center.x + b.radius, b.center.y + b.radius}};
            },
        },
        shape.node);
}

ShapeSpec rotated(const ShapeSpec& shape, double angle, Point2 pivot) {
    const double c = std::cos(angle), s = std::sin(angle);
    return std::visit(overloaded{
                          [&](const Disk& d) -> ShapeSpec {
                              return Disk{rotate_about(d.center, c, s, pivot), d.radius};
                          },
                          [&](const Rect& r) -> ShapeSpec {
                              return Rect{rotate_about(r.center, c, s, pivot), r.half_x, r.half_y, r.angle + angle};
                          },
                          [&](const ConvexPolygon& p) -> ShapeSpec {
                              ConvexPolygon out;
                              for (const auto& v : p.vertices) out.vertices.push_back(rotate_about(v, c, s, pivot));
                              return out;
                          },
                          [&](const Difference& d) -> ShapeSpec {
                              return make_difference(rotated(*d.keep, angle, pivot), rotated(*d.remove, angle, pivot));
                          },
                          [&](const Union& u) -> ShapeSpec {
                              return make_union(rotated(*u.a, angle, pivot), rotated(*u.b, angle, pivot));
                          },
                          [&](const SmoothBump& b) -> ShapeSpec {
                              return SmoothBump{rotate_about(b.center, c, s, pivot), b.radius, b.amplitude};
                          },
                      },
                      shape.node);
}

ShapeSpec translated(const ShapeSpec& shape, Point2 o) {
    auto mv = [&](Point2 p) { return Point2{p.x + o.x, p.y + o.y}; };
    return std::visit(overloaded{
                          [&](const Disk& d) -> ShapeSpec { return Disk{mv(d.center), d.radius}; },
                          [&](const Rect& r) -> ShapeSpec { return Rect{mv(r.center), r.half_x, r.half_y, r.angle}; },
                          [&](const ConvexPolygon& p) -> ShapeSpec {
                              ConvexPolygon out;
                              for (const auto& v : p.vertices) out.vertices.push_back(mv(v));
                              return out;
                          },
                          [&](const Difference& d) -> ShapeSpec {
                              return make_difference(translated(*d.keep, o), translated(*d.remove, o));
                          },
                          [&](const Union& u) -> ShapeSpec { return make_union(translated(*u.a, o), translated(*u.b, o)); },
                          [&](const SmoothBump& b) -> ShapeSpec { return SmoothBump{mv(b.center), b.radius, b.amplitude}; },
                      },
                      shape.node);
}

std::optional<double> analytic_area(const ShapeSpec& shape) {
    using std::numbers::pi;
    if (const auto* d = std::get_if<Disk>(&shape.node)) return pi * d->radius * d->radius;
    if (const auto* r = std::get_if<Rect>(&shape.node)) return 4.0 * r->half_x * r->half_y;
    if (const auto* p = std::get_if<ConvexPolygon>(&shape.node)) {
        double a2 = 0.0;
        const auto& v = p->vertices;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto& a = v[k];
            const auto& b = v[(k + 1) % v.size()];
            a2 += a.x * b.y - b.x * a.y;
        }
        return std::abs(a2) / 2;
    }
    return std::nullopt;
}

std::optional<double> analytic_perimeter(const ShapeSpec& shape) {
    using std::numbers::pi;
    if (const auto* d = std::get_if<Disk>(&shape.node)) return 2 * pi * d->radius;
    if (const auto* r = std::get_if<Rect>(&shape.node)) return 4.0 * (r->half_x + r->half_y);
    if (const auto* p = std::get_if<ConvexPolygon>(&shape.node)) {
        double len = 0.0;
        const auto& v = p->vertices;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto& b = v[(k + 1) % v.size()];
            len += std::hypot(b.x - v[k].x, b.y - v[k].y);
        }
        return len;
    }
    return std::nullopt;
}

ShapeSpec random_convex_polygon(int vertex_count, std::uint64_t seed, Point2 center, double min_radius,
                                double max_radius) {
    if (vertex_count < 3) throw PreconditionError("random_convex_polygon needs at least 3 vertices");
    if (!(min_radius > 0) || max_radius < min_radius)
        throw PreconditionError("random_convex_polygon needs 0 < min_radius <= max_radius");
    using std::numbers::pi;
    std::mt19937_64 rng(seed);
    const double a = min_radius + (max_radius - min_radius) * unit(rng);
    const double b = min_radius + (max_radius - min_radius) * unit(rng);
    const double tilt = pi * unit(rng);
    const double min_gap = pi / vertex_count;  // half the uniform spacing
    std::vector<double> angles;
    for (;;) {
        angles.clear();
        for (int k = 0; k < vertex_count; ++k) angles.push_back(2 * pi * unit(rng));
        std::sort(angles.begin(), angles.end());
        bool ok = true;
        for (int k = 0; k < vertex_count; ++k) {
            const double next = k + 1 < vertex_count ? angles[k + 1] : angles[0] + 2 * pi;
            if (next - angles[k] < min_gap) ok = false;
        }
        if (ok) break;
    }
    ConvexPolygon poly;
    const double c = std::cos(tilt), s = std::sin(tilt);
    for (double t : angles) {
        const double u = a * std::cos(t), v = b * std::sin(t);
        poly.vertices.push_back({center.x + c * u - s * v, center.y + s * u + c * v});
    }
    return poly;
}

nlohmann::json shape_to_json(const ShapeSpec& shape) {
    using nlohmann::json;
    auto pt = [](Point2 p) { return json::array({p.x, p.y}); };
    return std::visit(overloaded{
                          [&](const Disk& d) {
                              return json{{"type", "disk"}, {"center", pt(d.center)}, {"radius", d.radius}};
                          },
                          [&](const Rect& r) {
                              return json{{"type", "rect"},
                                          {"center", pt(r.center)},
                                          {"half_widths", json::array({r.half_x, r.half_y})},
                                          {"angle", r.angle}};
                          },
                          [&](const ConvexPolygon& p) {
                              json verts = json::array();
                              for (const auto& v : p.vertices) verts.push_back(pt(v));
                              return json{{"type", "polygon"}, {"vertices", verts}};
                          },
                          [&](const Difference& d) {
                              return json{{"type", "difference"},
                                          {"keep", shape_to_json(*d.keep)},
                                          {"remove", shape_to_json(*d.remove)}};
                          },
                          [&](const Union& u) {
                              return json{{"type", "union"}, {"a", shape_to_json(*u.a)}, {"b", shape_to_json(*u.b)}};
                          },
                          [&](const SmoothBump& b) {
                              return json{{"type", "bump"},
                                          {"center", pt(b.center)},
                                          {"radius", b.radius},
                                          {"amplitude", b.amplitude}};
                          },
                      },
                      shape.node);
}

ShapeSpec shape_from_json(const nlohmann::json& doc, std::uint64_t seed) {
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
        throw ParseError("shape document must be an object with a string 'type'");
    const auto type = doc.at("type").get<std::string>();
    auto sub = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) throw ParseError(std::string("shape field '") + key + "' missing");
        return doc.at(key);
    };
    if (type == "disk") return Disk{json_point(sub("center"), "center"), json_number(doc, "radius")};
    if (type == "rect") {
        const auto hw = json_point(sub("half_widths"), "half_widths");
        const double angle = doc.contains("angle") ? json_number(doc, "angle") : 0.0;
        return Rect{json_point(sub("center"), "center"), hw.x, hw.y, angle};
    }
    if (type == "polygon") {
        const auto& verts = sub("vertices");
        if (!verts.is_array()) throw ParseError("shape field 'vertices' must be an array");
        ConvexPolygon p;
        for (const auto& v : verts) p.vertices.push_back(json_point(v, "vertices[]"));
        return p;
    }
    if (type == "random_polygon") {
        const int n = doc.contains("vertices") ? doc.at("vertices").get<int>() : 5;
        const Point2 c = doc.contains("center") ? json_point(doc.at("center"), "center") : Point2{};
        const double rmin = doc.contains("min_radius") ? json_number(doc, "min_radius") : 0.35;
        const double rmax = doc.contains("max_radius") ? json_number(doc, "max_radius") : 0.6;
        const std::uint64_t s = doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : seed;
        return random_convex_polygon(n, s, c, rmin, rmax);
    }
    if (type == "difference")
        return make_difference(shape_from_json(sub("keep"), seed), shape_from_json(sub("remove"), seed));
    if (type == "union") return make_union(shape_from_json(sub("a"), seed), shape_from_json(sub("b"), seed));
    if (type == "bump") {
        const double amp = doc.contains("amplitude") ? json_number(doc, "amplitude") : 1.0;
        return SmoothBump{json_point(sub("center"), "center"), json_number(doc, "radius"), amp};
    }
    throw ParseError("unknown shape type '" + type + "'");
}

}  // namespace margconv
