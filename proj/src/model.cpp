#include "geoform/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace geo::models {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // one splitmix64 step over the xor keeps streams with nearby seeds apart
    std::uint64_t z = (seed ^ (salt * 0x9e3779b97f4a7c15ull)) + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t name_salt(const std::string& name) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

pt vadd(const pt& a, const pt& b) {
    pt r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

pt vsub(const pt& a, const pt& b) {
    pt r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

pt vscale(double s, const pt& a) {
    pt r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

double vdot(const pt& a, const pt& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vnorm(const pt& a) { return std::sqrt(vdot(a, a)); }

double cross_mag(const pt& a, const pt& b) {
    if (a.size() == 2) return std::abs(a[0] * b[1] - a[1] * b[0]);
    double g = vdot(a, a) * vdot(b, b) - vdot(a, b) * vdot(a, b);
    return std::sqrt(std::max(0.0, g));
}

double triangle_altitude(double alpha, double beta, double gamma) {
    double a2 = alpha * alpha, b2 = beta * beta, g2 = gamma * gamma;
    double sixteen_area2 =
        2.0 * a2 * b2 + 2.0 * b2 * g2 + 2.0 * g2 * a2 - a2 * a2 - b2 * b2 - g2 * g2;
    return std::sqrt(std::max(0.0, sixteen_area2)) / (2.0 * gamma);
}

// ---------------------------------------------------------------------------
// base class pieces

pt model::extend(const pt& a, const pt& b, double x) const {
    // walking the ray a->b for the full a-b arc plus x lands beyond b, which
    // is exactly the betweenness the extension axiom asks for
    return ray_point(a, b, distance(a, b) + x);
}

pt model::geo_lerp(const pt& a, const pt& b, double t) const {
    return ray_point(a, b, t * distance(a, b));
}

void model::check_domain(const pt& p) const {
    for (double c : p)
        if (!std::isfinite(c)) throw outside_domain(name_ + ": non-finite coordinate");
}

std::unique_ptr<model> make_model(const std::string& name, double box) {
    if (name == "disk") return std::make_unique<disk_model>(box);
    if (name.rfind("cartesian", 0) == 0 && name.size() == 10) {
        int d = name[9] - '0';
        if (d >= 2 && d <= 8) return std::make_unique<cartesian_model>(d, box);
    }
    throw error("unknown model '" + name + "' (expected cartesian2..cartesian8 or disk)");
}

std::vector<std::string> model_names() {
    std::vector<std::string> r;
    for (int d = 2; d <= 8; ++d) r.push_back("cartesian" + std::to_string(d));
    r.push_back("disk");
    return r;
}

// ---------------------------------------------------------------------------
// cartesian

cartesian_model::cartesian_model(int dim, double box)
    : model("cartesian" + std::to_string(dim), dim, box) {
    if (dim < 2) throw error("cartesian model needs dimension >= 2");
}

double cartesian_model::distance(const pt& a, const pt& b) const { return vnorm(vsub(a, b)); }

double cartesian_model::angle_deg(const pt& p, const pt& v, const pt& q) const {
    pt u = vsub(p, v), w = vsub(q, v);
    if (vnorm(u) == 0.0 || vnorm(w) == 0.0) return 0.0;
    // atan2 of (|u x w|, u . w) is stable at both ends of the range, unlike
    // the acos form, whose derivative blows up near 0 and 180
    return std::atan2(cross_mag(u, w), vdot(u, w)) * (180.0 / 3.14159265358979323846);
}

pt cartesian_model::sample(rng_stream& rng) const {
    pt p(dim_);
    for (auto& c : p) c = rng.range(-box_, box_);
    return p;
}

pt cartesian_model::ray_point(const pt& v, const pt& w, double ell) const {
    pt u = vsub(w, v);
    double n = vnorm(u);
    if (n == 0.0) {
        u.assign(dim_, 0.0);
        u[0] = 1.0;
        n = 1.0;
    }
    return vadd(v, vscale(ell / n, u));
}

pt cartesian_model::equidistant(const pt& p, const pt& q, rng_stream& rng) const {
    pt u = vsub(q, p);
    double n = vnorm(u);
    if (n == 0.0) return sample(rng);  // every point qualifies
    u = vscale(1.0 / n, u);
    pt m = vscale(0.5, vadd(p, q));
    pt w = sample(rng);
    // drop the component of w - m along the axis p-q
    return vsub(w, vscale(vdot(vsub(w, m), u), u));
}

pt cartesian_model::perp_point(const pt& a, const pt& b, double ell, bool side) const {
    pt u = vsub(b, a);
    double n = vnorm(u);
    if (n == 0.0) return ray_point(a, a, ell);
    u = vscale(1.0 / n, u);
    pt w(dim_, 0.0);
    if (dim_ == 2) {
        w = {-u[1], u[0]};
    } else {
        // any unit vector orthogonal to u; start from the axis least aligned
        int k = 0;
        for (int i = 1; i < dim_; ++i)
            if (std::abs(u[i]) < std::abs(u[k])) k = i;
        w[k] = 1.0;
        w = vsub(w, vscale(vdot(w, u), u));
        w = vscale(1.0 / vnorm(w), w);
    }
    if (!side) w = vscale(-1.0, w);
    return vadd(a, vscale(ell, w));
}

std::vector<pt> cartesian_model::rigid_copy(const std::vector<pt>& ps, rng_stream& rng) const {
    // random orthogonal frame by Gram-Schmidt over random vectors; the sign
    // of the determinant is itself random, so reflections are covered
    std::vector<pt> frame;
    while (int(frame.size()) < dim_) {
        pt v(dim_);
        for (auto& c : v) c = rng.range(-1.0, 1.0);
        for (const auto& f : frame) v = vsub(v, vscale(vdot(v, f), f));
        double n = vnorm(v);
        if (n < 1e-6) continue;
        frame.push_back(vscale(1.0 / n, v));
    }
    pt shift(dim_);
    for (auto& c : shift) c = rng.range(-box_ / 2, box_ / 2);
    std::vector<pt> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        pt q = shift;
        for (int i = 0; i < dim_; ++i) q = vadd(q, vscale(p[i], frame[i]));
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<pt> cartesian_model::equilateral() const {
    pt a(dim_, 0.0), b(dim_, 0.0), c(dim_, 0.0);
    b[0] = 1.0;
    c[0] = 0.5;
    c[1] = std::sqrt(3.0) / 2.0;
    return {a, b, c};
}

std::vector<pt> cartesian_model::noncollinear() const {
    pt a(dim_, 0.0), b(dim_, 0.0), c(dim_, 0.0);
    b[0] = 1.0;
    c[1] = 1.0;
    return {a, b, c};
}

// ---------------------------------------------------------------------------
// Poincare disk

namespace {

using cx = std::complex<double>;

cx to_cx(const pt& p) { return {p[0], p[1]}; }
pt to_pt(cx z) { return {z.real(), z.imag()}; }

// T_v(z) = (z - v) / (1 - conj(v) z): the disk automorphism sending v to 0
cx mobius_to(cx v, cx z) { return (z - v) / (1.0 - std::conj(v) * z); }
cx mobius_from(cx v, cx z) { return (z + v) / (1.0 + std::conj(v) * z); }

}  // namespace

disk_model::disk_model(double box) : model("disk", 2, box) {}

pt disk_model::to_origin(const pt& v, const pt& z) { return to_pt(mobius_to(to_cx(v), to_cx(z))); }

pt disk_model::tangent(const pt& v, const pt& w) const { return to_origin(v, w); }
pt disk_model::from_origin(const pt& v, const pt& z) {
    return to_pt(mobius_from(to_cx(v), to_cx(z)));
}

void disk_model::check_domain(const pt& p) const {
    model::check_domain(p);
    if (vnorm(p) >= 1.0) throw outside_domain("disk: point on or outside the unit circle");
}

double disk_model::distance(const pt& a, const pt& b) const {
    double da = 1.0 - vdot(a, a), db = 1.0 - vdot(b, b);
    pt diff = vsub(a, b);
    double arg = 1.0 + 2.0 * vdot(diff, diff) / (da * db);
    return std::acosh(std::max(1.0, arg));
}

double disk_model::angle_deg(const pt& p, const pt& v, const pt& q) const {
    // the model is conformal: geodesics from v map to straight rays from the
    // origin under T_v, so the Euclidean angle there is the hyperbolic one
    pt u = to_origin(v, p), w = to_origin(v, q);
    if (vnorm(u) == 0.0 || vnorm(w) == 0.0) return 0.0;
    return std::atan2(cross_mag(u, w), vdot(u, w)) * (180.0 / 3.14159265358979323846);
}

pt disk_model::sample(rng_stream& rng) const {
    double r = sample_radius * std::sqrt(rng.unit());
    double th = rng.range(0.0, 2.0 * 3.14159265358979323846);
    return {r * std::cos(th), r * std::sin(th)};
}

pt disk_model::ray_point(const pt& v, const pt& w, double ell) const {
    cx u = mobius_to(to_cx(v), to_cx(w));
    double n = std::abs(u);
    cx dir = n == 0.0 ? cx{1.0, 0.0} : u / n;
    // arc distance ell from the origin is Euclidean radius tanh(ell / 2)
    return to_pt(mobius_from(to_cx(v), std::tanh(ell / 2.0) * dir));
}

pt disk_model::equidistant(const pt& p, const pt& q, rng_stream& rng) const {
    if (distance(p, q) == 0.0) return sample(rng);
    pt m = midpoint(p, q);
    cx u = mobius_to(to_cx(m), to_cx(p));
    double n = std::abs(u);
    if (n == 0.0) return sample(rng);
    // after centering the midpoint, p and q sit at +-u; the bisector is the
    // diameter orthogonal to u, and every point on it is equidistant
    cx perp = cx{0.0, 1.0} * (u / n);
    double s = rng.range(-0.9, 0.9);
    return to_pt(mobius_from(to_cx(m), s * perp));
}

pt disk_model::perp_point(const pt& a, const pt& b, double ell, bool side) const {
    cx u = mobius_to(to_cx(a), to_cx(b));
    double n = std::abs(u);
    cx dir = n == 0.0 ? cx{1.0, 0.0} : u / n;
    cx perp = (side ? cx{0.0, 1.0} : cx{0.0, -1.0}) * dir;
    return to_pt(mobius_from(to_cx(a), std::tanh(ell / 2.0) * perp));
}

std::vector<pt> disk_model::rigid_copy(const std::vector<pt>& ps, rng_stream& rng) const {
    double th = rng.range(0.0, 2.0 * 3.14159265358979323846);
    cx rot = {std::cos(th), std::sin(th)};
    cx center = to_cx(sample(rng));
    bool flip = rng.coin();
    std::vector<pt> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        cx z = to_cx(p);
        if (flip) z = std::conj(z);  // reflection across the real axis
        out.push_back(to_pt(mobius_from(center, rot * z)));
    }
    return out;
}

std::vector<pt> disk_model::equilateral() const {
    // rotational symmetry about the center makes the hyperbolic side lengths
    // equal without any computation
    const double r = 0.5, pi = 3.14159265358979323846;
    std::vector<pt> out;
    for (int k = 0; k < 3; ++k) {
        double th = pi / 2.0 + k * (2.0 * pi / 3.0);
        out.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return out;
}

std::vector<pt> disk_model::noncollinear() const {
    return {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}};
}

}  // namespace geo::models
