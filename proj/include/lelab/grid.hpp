#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lelab/errors.hpp"
#include "lelab/nonlinearity.hpp"

namespace lelab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class NodeKind : std::uint8_t { Exterior = 0, Band = 1, Interior = 2 };
enum class Shape { Disc, Sector, Square };

std::string to_string(Shape s);

/// Uniform lattice with a node classification.
///
/// Nodes are stored row-major: index = j*n + i, with i along x and j along y.
/// Band nodes are the non-interior 4-neighbours of interior nodes and carry
/// Dirichlet data; exterior nodes carry 0.
class DiscGrid {
public:
    int n = 0;
    double h = 0.0;
    double x_min = 0.0;
    double y_min = 0.0;
    Shape shape = Shape::Disc;
    int k = 0;  ///< sector order (Shape::Sector only)

    std::vector<NodeKind> mask;
    std::vector<int> unknown_of;       ///< node -> interior index or -1
    std::vector<int> interior_nodes;   ///< interior index -> node

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    [[nodiscard]] int index(int i, int j) const { return j * n + i; }
    [[nodiscard]] int col(int node) const { return node % n; }
    [[nodiscard]] int row(int node) const { return node / n; }
    [[nodiscard]] double x(int i) const { return x_min + h * i; }
    [[nodiscard]] double y(int j) const { return y_min + h * j; }
    [[nodiscard]] Point point(int node) const { return {x(col(node)), y(row(node))}; }
    [[nodiscard]] bool interior(int node) const { return mask[node] == NodeKind::Interior; }
    [[nodiscard]] std::size_t interior_count() const { return interior_nodes.size(); }
    /// Side length of the lattice, (n-1)h.
    [[nodiscard]] double extent() const { return h * (n - 1); }

    /// Rebuild unknown_of, interior_nodes and the band from the interior flags.
    void finalize();
};

using GridPtr = std::shared_ptr<const DiscGrid>;

/// Lattice over [-1,1]^2 with the open unit disc as interior. n odd, n >= 33.
GridPtr build_disc(int n);
/// Same lattice, interior = {0 < rho < 1, 0 < theta < pi/k}.
GridPtr build_sector(int n, int k);
/// n x n lattice with lower-left corner (x_min, y_min); all non-edge nodes interior.
GridPtr build_square(int n, double x_min, double y_min, double h);

/// Nodal values on a grid. Band values are Dirichlet data, exterior values are 0.
struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g);
    ScalarField(GridPtr g, std::vector<double> v);

    [[nodiscard]] double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    [[nodiscard]] double sup_norm() const;
};

/// Field from a function of (x, y) evaluated at interior and band nodes.
template <class Fn>
ScalarField make_field(const GridPtr& g, Fn&& fn) {
    ScalarField f(g);
    for (std::size_t node = 0; node < g->size(); ++node) {
        if (g->mask[node] == NodeKind::Exterior) continue;
        const Point p = g->point(static_cast<int>(node));
        f.values[node] = fn(p.x, p.y);
    }
    return f;
}

/// Euclidean distance from x to the boundary of the grid's domain
/// (unit circle, sector boundary, or lattice edge for squares).
double boundary_distance(const DiscGrid& g, Point x);

/// Five-point Laplacian on interior nodes, 0 elsewhere.
ScalarField laplacian(const ScalarField& f);

/// Centred-difference gradient on interior nodes (0 elsewhere).
void nodal_gradient(const ScalarField& f, std::vector<double>& gx, std::vector<double>& gy);

/// Bilinear interpolation of nodal data.
///
/// With strict = true every corner of the containing cell must be interior,
/// otherwise DomainError is thrown. With strict = false points off the lattice
/// read as 0.
double bilinear(const DiscGrid& g, const std::vector<double>& data, double x, double y, bool strict);

struct Sample {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

/// Keys cubic convolution on the 4x4 stencil around (x, y), with its exact
/// derivative; third-order accurate for smooth data. Throws DomainError when a
/// stencil node is exterior or off the lattice.
Sample cubic_sample(const DiscGrid& g, const std::vector<double>& data, double x, double y);

struct CircleMoments {
    double u2 = 0.0;        ///< ∫ u²
    double grad2 = 0.0;     ///< ∫ |∇u|²
    double normal2 = 0.0;   ///< ∫ (∂_ν u)²
    double F = 0.0;         ///< ∫ F(u)
    double u_normal = 0.0;  ///< ∫ u ∂_ν u
};

struct BallMoments {
    double grad2 = 0.0;  ///< ∫ |∇u|²
    double F = 0.0;      ///< ∫ F(u)
    double ug = 0.0;     ///< ∫ u g(u)
};

/// Precomputed nodal gradients and potentials for repeated spherical queries.
class FieldSampler {
public:
    FieldSampler(const ScalarField& u, const ProblemParams& p);

    [[nodiscard]] const ScalarField& field() const { return u_; }
    [[nodiscard]] const ProblemParams& params() const { return p_; }
    [[nodiscard]] double h() const { return u_.grid->h; }

    /// Trapezoid rule on max(64, ceil(2πr/h)) angles.
    [[nodiscard]] CircleMoments circle(Point x0, double r) const;
    /// Node-centred cells; cut cells refined by 8x8 subsampling.
    [[nodiscard]] BallMoments ball(Point x0, double r) const;
    /// Same quadrature for an arbitrary nodal integrand.
    [[nodiscard]] double ball_of(const std::vector<double>& nodal, Point x0, double r) const;

    [[nodiscard]] double value(Point x) const;
    [[nodiscard]] Point gradient(Point x) const;

    [[nodiscard]] const std::vector<double>& gx() const { return gx_; }
    [[nodiscard]] const std::vector<double>& gy() const { return gy_; }

private:
    ScalarField u_;
    ProblemParams p_;
    std::vector<double> gx_, gy_, grad2_, F_, ug_;
};

enum class Integrand { U2, Grad2, Normal2, F };

/// Single circle integral; convenience wrapper over FieldSampler::circle.
double circle_integral(const ScalarField& f, Point x0, double r, Integrand what,
                       const ProblemParams& p = ProblemParams{});
enum class BallIntegrand { Grad2, F, UG };
double ball_integral(const ScalarField& f, Point x0, double r, BallIntegrand what,
                     const ProblemParams& p = ProblemParams{});

/// Rotation by angle π/k about the origin, resampled bilinearly onto the same lattice.
ScalarField rotate_k(const ScalarField& f, int k);

}  // namespace lelab
