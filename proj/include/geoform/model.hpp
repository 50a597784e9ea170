#pragma once
// Numeric models backing the sampling checker. Two families are provided:
// cartesian2 .. cartesian8 interpret points as flat R^n tuples with the
// Euclidean metric and degree-valued angles; disk interprets points inside
// the unit disk with the Poincare (hyperbolic) metric and conformal angles.
// A model only answers metric and angle queries and performs geodesic
// constructions; formula evaluation sits on top of it (eval.hpp).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "geoform/ast.hpp"

namespace geo::models {

using pt = std::vector<double>;

// ---------------------------------------------------------------------------
// deterministic randomness

// splitmix64: cheap, seedable from a single word, stable across platforms.
// The checker derives an independent stream per fixed-size block of samples,
// so reported results do not depend on how work is scheduled.
class rng_stream {
public:
    explicit rng_stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }  // [0,1)
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int index(int n) { return n <= 1 ? 0 : int(next_u64() % std::uint64_t(n)); }
    bool coin() { return (next_u64() & 1) != 0; }

private:
    std::uint64_t state_;
};

// Stable seed derivation for per-item, per-block streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t name_salt(const std::string& name);  // FNV-1a over the bytes

// ---------------------------------------------------------------------------
// flat vector helpers (coordinate tuples, not geodesic operations)

pt vadd(const pt& a, const pt& b);
pt vsub(const pt& a, const pt& b);
pt vscale(double s, const pt& a);
double vdot(const pt& a, const pt& b);
double vnorm(const pt& a);
// length of the cross product, computed via the Gram determinant so it works
// in any dimension (clamped at zero against cancellation)
double cross_mag(const pt& a, const pt& b);

// Altitude onto the side of length gamma of a Euclidean triangle with side
// lengths (alpha, beta, gamma), via Heron's formula. Used as an independent
// oracle for constructions that drop a perpendicular.
double triangle_altitude(double alpha, double beta, double gamma);

// Thrown when a construction leaves the model's point domain (disk boundary,
// non-finite coordinates).
struct outside_domain : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// model interface

class model {
public:
    virtual ~model() = default;

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    double box() const { return box_; }
    // flat models expose raw coordinates, so line-arithmetic shortcuts
    // (signed coordinates, parallel projections) are meaningful
    virtual bool flat() const = 0;

    virtual double distance(const pt& a, const pt& b) const = 0;
    // measure of the angle p-v-q in degrees; degenerate rays measure 0
    virtual double angle_deg(const pt& p, const pt& v, const pt& q) const = 0;

    virtual pt sample(rng_stream& rng) const = 0;

    // geodesic constructions ------------------------------------------------
    // point at arc distance ell from v along the ray through w; for w == v
    // the ray defaults to the first coordinate axis, and negative ell walks
    // the opposite ray
    virtual pt ray_point(const pt& v, const pt& w, double ell) const = 0;
    // c with b between a and c and d(b,c) == x (segment extension)
    pt extend(const pt& a, const pt& b, double x) const;
    // point at fraction t of the arc from a to b (t in [0,1] stays on the
    // segment); midpoint is the t = 1/2 case
    pt geo_lerp(const pt& a, const pt& b, double t) const;
    pt midpoint(const pt& a, const pt& b) const { return geo_lerp(a, b, 0.5); }
    // direction of the geodesic from v toward w in the tangent space at v
    // (zero vector when w == v); angle comparisons reduce to flat ones here
    virtual pt tangent(const pt& v, const pt& w) const = 0;
    // random point equidistant from p and q (their perpendicular bisector)
    virtual pt equidistant(const pt& p, const pt& q, rng_stream& rng) const = 0;
    // point c with the angle b-a-c right and d(a,c) == ell; `side` picks one
    // of the two half-planes in dimension 2
    virtual pt perp_point(const pt& a, const pt& b, double ell, bool side) const = 0;
    // image of a tuple of points under a random isometry of the model
    virtual std::vector<pt> rigid_copy(const std::vector<pt>& ps, rng_stream& rng) const = 0;

    // canned witnesses ------------------------------------------------------
    // three points with all pairwise distances equal and nonzero
    virtual std::vector<pt> equilateral() const = 0;
    // three points forming a strict triangle (no betweenness holds)
    virtual std::vector<pt> noncollinear() const = 0;

    virtual void check_domain(const pt& p) const;  // throws outside_domain

protected:
    model(std::string name, int dim, double box) : name_(std::move(name)), dim_(dim), box_(box) {}

    std::string name_;
    int dim_;
    double box_;
};

// "cartesian2" .. "cartesian8" or "disk"; throws geo::error on anything else.
std::unique_ptr<model> make_model(const std::string& name, double box = 10.0);
std::vector<std::string> model_names();

// ---------------------------------------------------------------------------
// concrete models

class cartesian_model final : public model {
public:
    cartesian_model(int dim, double box);

    bool flat() const override { return true; }
    double distance(const pt& a, const pt& b) const override;
    double angle_deg(const pt& p, const pt& v, const pt& q) const override;
    pt sample(rng_stream& rng) const override;
    pt ray_point(const pt& v, const pt& w, double ell) const override;
    pt tangent(const pt& v, const pt& w) const override { return vsub(w, v); }
    pt equidistant(const pt& p, const pt& q, rng_stream& rng) const override;
    pt perp_point(const pt& a, const pt& b, double ell, bool side) const override;
    std::vector<pt> rigid_copy(const std::vector<pt>& ps, rng_stream& rng) const override;
    std::vector<pt> equilateral() const override;
    std::vector<pt> noncollinear() const override;
};

// Poincare unit-disk model (dimension 2). Distances are hyperbolic, angles
// conformal; geodesic constructions go through the Mobius transform that
// centers one endpoint.
class disk_model final : public model {
public:
    explicit disk_model(double box);

    bool flat() const override { return false; }
    double distance(const pt& a, const pt& b) const override;
    double angle_deg(const pt& p, const pt& v, const pt& q) const override;
    pt sample(rng_stream& rng) const override;
    pt ray_point(const pt& v, const pt& w, double ell) const override;
    pt tangent(const pt& v, const pt& w) const override;
    pt equidistant(const pt& p, const pt& q, rng_stream& rng) const override;
    pt perp_point(const pt& a, const pt& b, double ell, bool side) const override;
    std::vector<pt> rigid_copy(const std::vector<pt>& ps, rng_stream& rng) const override;
    std::vector<pt> equilateral() const override;
    std::vector<pt> noncollinear() const override;
    void check_domain(const pt& p) const override;

    // disk automorphism sending v to the origin, and its inverse; exposed for
    // tests of the isometry property
    static pt to_origin(const pt& v, const pt& z);
    static pt from_origin(const pt& v, const pt& z);

    // Euclidean radius points may reach when sampled (constructions may
    // legitimately go beyond it, but never to the boundary)
    static constexpr double sample_radius = 0.95;
};

}  // namespace geo::models
